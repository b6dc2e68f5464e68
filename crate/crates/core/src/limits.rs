/// Largest table the library will construct or load (3^7).
pub const MAX_ORDER: usize = 2187;

/// Largest order for which full subloop-lattice enumeration runs by default.
pub const DEFAULT_ENUMERATION_BOUND: usize = 243;

/// Largest order for which n^4 scans and generator-subset scans stay exhaustive.
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 243;

/// Number of tuples visited by a sampled scan.
pub const DEFAULT_SAMPLE_BUDGET: u64 = 2_000_000;

/// Runtime knobs for the expensive scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_order: usize,
    pub enumeration_bound: usize,
    pub exhaustive_bound: usize,
    pub sample_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: MAX_ORDER,
            enumeration_bound: DEFAULT_ENUMERATION_BOUND,
            exhaustive_bound: DEFAULT_EXHAUSTIVE_BOUND,
            sample_budget: DEFAULT_SAMPLE_BUDGET,
        }
    }
}

impl Limits {
    /// Defaults with the enumeration cap replaced.
    pub fn with_enumeration_bound(bound: usize) -> Self {
        Limits { enumeration_bound: bound, ..Limits::default() }
    }

    pub(crate) fn check_enumeration(&self, what: &'static str, order: usize) -> crate::Result<()> {
        if order > self.enumeration_bound {
            return Err(crate::Error::Bound { what, order, bound: self.enumeration_bound });
        }
        Ok(())
    }
}
