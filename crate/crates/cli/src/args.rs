use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use moufang::SeriesKind;

/// Finite commutative Moufang loops: verification, identities, series and subloops.
///
/// Every command prints one JSON document on stdout and a short summary on
/// stderr. Exit status: 0 all checks passed, 1 a property was violated,
/// 2 bad input or usage.
#[derive(Debug, Parser)]
#[command(name = "moufang", version)]
pub struct Cli {
    /// Largest order for which full subloop enumeration is attempted
    #[arg(long, global = true, env = "MOUFANG_BOUND", value_name = "N")]
    pub bound: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Latin-square, identity, commutativity and Moufang axioms
    Verify(FileArg),
    /// Scan the associator identities, optionally with the inner-mapping check
    Identities {
        file: PathBuf,
        /// Exponent triple for the power identity, as p,r,s (repeatable)
        #[arg(long = "exponents", value_name = "P,R,S", value_parser = parse_triple)]
        exponents: Vec<(i64, i64, i64)>,
        /// Also check that every inner mapping is an automorphism
        #[arg(long)]
        inner: bool,
    },
    /// Compute the lower central, derived or upper central series
    Series {
        file: PathBuf,
        #[arg(long, default_value = "lower", value_name = "lower|derived|upper")]
        kind: SeriesKind,
    },
    /// Enumerate subloops
    Subloops {
        file: PathBuf,
        #[arg(long, conflicts_with = "nonassociative_only")]
        normal_only: bool,
        #[arg(long)]
        nonassociative_only: bool,
    },
    /// Centre, associator subloop, primary components and the quotient by the centre
    Decompose {
        file: PathBuf,
        /// Write the quotient by the centre, with its projection, to this file
        #[arg(long, value_name = "FILE")]
        quotient_out: Option<PathBuf>,
    },
    /// Run the full property suite
    Theorems(FileArg),
    /// Build a catalog loop and write it as a loop file
    Make {
        /// cml81, trivial, cyclic:M, elem3:K, product:A,B,... or fixture_non_moufang
        #[arg(long)]
        construction: String,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Classify D × K for d quasicyclic 3-groups D and a finite loop K
    ClassifySymbolic {
        #[arg(long = "d", value_name = "N")]
        d: usize,
        #[arg(long = "k", value_name = "FILE")]
        k: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct FileArg {
    pub file: PathBuf,
}

fn parse_triple(s: &str) -> Result<(i64, i64, i64), String> {
    let parts: Vec<i64> =
        s.split(',').map(|p| p.trim().parse::<i64>().map_err(|e| format!("{p:?}: {e}"))).collect::<Result<_, _>>()?;
    match parts[..] {
        [p, r, s] => Ok((p, r, s)),
        _ => Err(format!("expected three comma-separated integers, got {}", parts.len())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn triples() {
        assert_eq!(parse_triple("2,-1,1"), Ok((2, -1, 1)));
        assert!(parse_triple("2,1").is_err());
        assert!(parse_triple("a,b,c").is_err());
    }
}
