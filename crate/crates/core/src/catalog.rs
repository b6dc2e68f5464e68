//! Built-in loop constructions and the JSON loop-file format.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::subloop::direct_product;
use crate::table::{verify_cml, LoopTable, VerificationReport};

/// A recipe for a loop table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionSpec {
    Trivial,
    Cyclic(usize),
    /// Elementary abelian group of order `3^k`.
    ElemAbelian3(u32),
    /// The order-81 non-associative commutative Moufang loop.
    Cml81,
    Product(Vec<ConstructionSpec>),
    File(PathBuf),
}

impl ConstructionSpec {
    pub fn name(&self) -> String {
        match self {
            ConstructionSpec::Trivial => "trivial".into(),
            ConstructionSpec::Cyclic(m) => format!("cyclic({m})"),
            ConstructionSpec::ElemAbelian3(k) => format!("elem3({k})"),
            ConstructionSpec::Cml81 => "cml81".into(),
            ConstructionSpec::Product(parts) => parts.iter().map(|p| p.name()).collect::<Vec<_>>().join("x"),
            ConstructionSpec::File(p) => p.display().to_string(),
        }
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for ConstructionSpec {
    type Err = Error;

    /// `trivial`, `cyclic:m`, `elem3:k`, `cml81`, `file:path`, or
    /// `product:a,b,...` over the non-product forms.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("product:") {
            let parts = rest
                .split(',')
                .map(|p| match p.trim() {
                    q if q.starts_with("product:") => Err(Error::input("nested product specs are not supported")),
                    q => q.parse(),
                })
                .collect::<Result<Vec<_>>>()?;
            if parts.is_empty() {
                return Err(Error::input("empty product"));
            }
            return Ok(ConstructionSpec::Product(parts));
        }
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let num = |a: Option<&str>| -> Result<usize> {
            a.ok_or_else(|| Error::input(format!("{head} needs an argument")))?
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::input(format!("bad argument in {s:?}: {e}")))
        };
        match head.trim() {
            "trivial" => Ok(ConstructionSpec::Trivial),
            "cml81" => Ok(ConstructionSpec::Cml81),
            "cyclic" => match num(arg)? {
                0 => Err(Error::input("cyclic order must be at least 1")),
                m => Ok(ConstructionSpec::Cyclic(m)),
            },
            "elem3" => Ok(ConstructionSpec::ElemAbelian3(num(arg)? as u32)),
            "file" => Ok(ConstructionSpec::File(PathBuf::from(arg.ok_or_else(|| Error::input("file needs a path"))?))),
            other => Err(Error::input(format!("unknown construction {other:?}"))),
        }
    }
}

pub fn cyclic(m: usize) -> Result<LoopTable> {
    LoopTable::from_fn(Some(format!("cyclic({m})")), m, |a, b| (a + b) % m)
}

pub fn elem_abelian_3(k: u32) -> Result<LoopTable> {
    let order = 3usize.checked_pow(k).ok_or_else(|| Error::input(format!("3^{k} overflows")))?;
    LoopTable::from_fn(Some(format!("elem3({k})")), order, |mut a, mut b| {
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            out += ((a % 3 + b % 3) % 3) * place;
            a /= 3;
            b /= 3;
            place *= 3;
        }
        out
    })
}

/// Coordinates `(a₁,a₂,a₃,a₄)` over Z/3 of an element of [`cml81`].
pub fn cml81_coords(i: usize) -> [usize; 4] {
    [i / 27 % 3, i / 9 % 3, i / 3 % 3, i % 3]
}

/// Index `27a₁ + 9a₂ + 3a₃ + a₄`.
pub fn cml81_index(c: [usize; 4]) -> usize {
    27 * (c[0] % 3) + 9 * (c[1] % 3) + 3 * (c[2] % 3) + c[3] % 3
}

/// `(a)·(b) = (a₁+b₁, a₂+b₂, a₃+b₃, a₄+b₄+(a₃−b₃)(a₁b₂−a₂b₁))` mod 3.
fn cml81_product(i: usize, j: usize) -> usize {
    let a = cml81_coords(i).map(|v| v as i64);
    let b = cml81_coords(j).map(|v| v as i64);
    let twist = (a[2] - b[2]) * (a[0] * b[1] - a[1] * b[0]);
    let c = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3] + twist].map(|v| v.rem_euclid(3) as usize);
    cml81_index(c)
}

/// The smallest non-associative commutative Moufang loop, verified on first use.
pub fn cml81() -> Result<LoopTable> {
    static CACHE: OnceLock<std::result::Result<LoopTable, String>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let t = LoopTable::from_fn(Some("cml81".into()), 81, cml81_product).map_err(|e| e.to_string())?;
            let report = verify_cml(&t);
            if !report.is_cml() {
                return Err(format!("cml81 fails verification: {:?}", report.first_failure));
            }
            if t.is_associative() {
                return Err("cml81 came out associative".into());
            }
            Ok(t)
        })
        .clone()
        .map_err(Error::Internal)
}

/// Builds and verifies a construction. A built-in construction failing
/// verification is an internal error; a file failing it is an input error.
pub fn build(spec: &ConstructionSpec) -> Result<LoopTable> {
    let table = match spec {
        ConstructionSpec::Trivial => cyclic(1)?.with_name("trivial"),
        ConstructionSpec::Cyclic(m) => cyclic(*m)?,
        ConstructionSpec::ElemAbelian3(k) => elem_abelian_3(*k)?,
        ConstructionSpec::Cml81 => return cml81(),
        ConstructionSpec::File(p) => {
            let loaded = load(p)?;
            if !loaded.report.is_cml() {
                return Err(Error::input(format!("{} is not a commutative Moufang loop", p.display())));
            }
            return Ok(loaded.table);
        }
        ConstructionSpec::Product(parts) => {
            let mut iter = parts.iter();
            let first = build(iter.next().ok_or_else(|| Error::input("empty product"))?)?;
            iter.try_fold(first, |acc, p| direct_product(&acc, &build(p)?))?.with_name(spec.name())
        }
    };
    let report = verify_cml(&table);
    if !report.is_cml() {
        return Err(Error::Internal(format!("construction {spec} fails verification: {:?}", report.first_failure)));
    }
    Ok(table)
}

/// The first commutative loop that is not Moufang, searching orders from 5
/// upward and, within an order, symmetric Latin squares with identity 0 in
/// row-major completion order.
///
/// Every commutative loop of order 5 is cyclic, so the result has order 6.
pub fn fixture_non_moufang() -> LoopTable {
    static CACHE: OnceLock<LoopTable> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            (5..=7).find_map(search_commutative_non_moufang).expect("commutative non-Moufang loops of order 6 exist")
        })
        .clone()
}

fn search_commutative_non_moufang(n: usize) -> Option<LoopTable> {
    let mut grid = vec![vec![usize::MAX; n]; n];
    grid[0] = (0..n).collect();
    for (i, row) in grid.iter_mut().enumerate() {
        row[0] = i;
    }
    let cells: Vec<(usize, usize)> = (1..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();

    fn fill(grid: &mut [Vec<usize>], cells: &[(usize, usize)], k: usize) -> Option<LoopTable> {
        let n = grid.len();
        if k == cells.len() {
            let t = LoopTable::from_rows(Some("fixture_non_moufang".into()), grid).ok()?;
            return (!verify_cml(&t).moufang).then_some(t);
        }
        let (i, j) = cells[k];
        for v in 0..n {
            // symmetric, so row i doubles as column i
            if (0..n).any(|c| grid[i][c] == v || grid[j][c] == v) {
                continue;
            }
            grid[i][j] = v;
            grid[j][i] = v;
            if let Some(t) = fill(grid, cells, k + 1) {
                return Some(t);
            }
            grid[i][j] = usize::MAX;
            grid[j][i] = usize::MAX;
        }
        None
    }
    fill(&mut grid, &cells, 0)
}

#[derive(Deserialize)]
struct LoopFile {
    #[serde(default)]
    name: Option<String>,
    order: usize,
    table: Vec<Vec<usize>>,
}

/// Parses a loop file, checking only shape and index ranges.
pub fn parse_loop_json(text: &str) -> Result<LoopTable> {
    let file: LoopFile = serde_json::from_str(text).map_err(|e| Error::input(format!("malformed loop file: {e}")))?;
    if file.table.len() != file.order {
        return Err(Error::input(format!("declared order {} but table has {} rows", file.order, file.table.len())));
    }
    LoopTable::from_rows(file.name, &file.table)
}

pub fn read_loop_file(path: &Path) -> Result<LoopTable> {
    let text =
        std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    parse_loop_json(&text)
}

/// A table read from disk together with its verification report.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub table: LoopTable,
    pub report: VerificationReport,
}

/// Reads a loop file and verifies it. Tables that are not Latin squares or do
/// not have their identity at index 0 are rejected as input errors; other
/// axiom failures are reported in [`Loaded::report`].
pub fn load(path: impl AsRef<Path>) -> Result<Loaded> {
    let table = read_loop_file(path.as_ref())?;
    let report = verify_cml(&table);
    if !report.latin_square {
        return Err(Error::input(format!("table is not a Latin square: {:?}", report.first_failure)));
    }
    if !report.identity_ok {
        return Err(match table.find_identity() {
            Some(e) => Error::input(format!("identity must be index 0 (found at index {e})")),
            None => Error::input("table has no identity element"),
        });
    }
    Ok(Loaded { table, report })
}

/// Serializes a table in the loop-file format, one table row per line.
pub fn to_loop_json(l: &LoopTable) -> String {
    let mut out = String::from("{");
    if let Some(name) = l.name() {
        out.push_str(&format!("\"name\": {}, ", serde_json::Value::from(name)));
    }
    out.push_str(&format!("\"order\": {}, \"table\": [\n", l.order()));
    let rows = l.rows();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str("  [");
        out.push_str(&cells.join(","));
        out.push(']');
        if i + 1 < rows.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]}\n");
    out
}

pub fn save(l: &LoopTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_loop_json(l)).map_err(|source| Error::Io { path: path.display().to_string(), source })
}
