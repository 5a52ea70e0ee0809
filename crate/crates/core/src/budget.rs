/// Resource caps shared by enumeration and search routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest incidence structure (blocks x points) that may be materialized.
    pub cells: u64,
    /// Exhaustive enumeration is used iff `p^dim` is at most this; also the
    /// step cap of budgeted searches.
    pub steps: u64,
    /// Random information sets drawn by budgeted searches.
    pub samples: u64,
    /// Largest number of incidence rows combined in the sparse search phase.
    pub sparse_rows: usize,
    /// Information-set weight enumerated per random sample.
    pub info_weight: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            cells: 100_000_000,
            steps: 1_000_000_000,
            samples: 1_000_000,
            sparse_rows: 4,
            info_weight: 2,
        }
    }
}

impl Budget {
    pub fn check_cells(&self, what: &'static str, needed: u128) -> crate::Result<()> {
        if needed > self.cells as u128 {
            return Err(crate::Error::BudgetExceeded { what, needed, cap: self.cells as u128 });
        }
        Ok(())
    }
}
