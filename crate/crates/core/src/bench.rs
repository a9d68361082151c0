//! Timing and term-count harness for the three reference sets.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantities::{alg1_quantities, alg2_compute, GList};
use crate::sysspec::SystemSpec;

/// Published number of terms of `g_kkk`, `k = 1..=5`, for each reference set.
/// Terms are counted with coefficients written in the basis `{1, z}`.
pub const REFERENCE_COUNTS: [(RefSet, [usize; 5]); 3] = [
    (RefSet::S1, [12, 404, 3644, 19142, 74790]),
    (RefSet::S2, [12, 280, 1676, 6164, 17572]),
    (RefSet::S3, [4, 32, 100, 214, 388]),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RefSet {
    S1,
    S2,
    S3,
}

impl RefSet {
    pub const ALL: [RefSet; 3] = [RefSet::S1, RefSet::S2, RefSet::S3];

    pub fn spec(self) -> SystemSpec {
        match self {
            RefSet::S1 => SystemSpec::s1(),
            RefSet::S2 => SystemSpec::s2(),
            RefSet::S3 => SystemSpec::s3(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RefSet::S1 => "S1",
            RefSet::S2 => "S2",
            RefSet::S3 => "S3",
        }
    }

    pub fn reference_count(self, k: usize) -> Option<usize> {
        let (_, counts) = REFERENCE_COUNTS.iter().find(|(s, _)| *s == self)?;
        counts.get(k.checked_sub(1)?).copied()
    }

    /// Largest `k` for which the published timings include the
    /// per-monomial algorithm; beyond it that algorithm is skipped.
    pub fn alg2_max_level(self) -> usize {
        match self {
            RefSet::S1 => 2,
            RefSet::S2 => 3,
            RefSet::S3 => 5,
        }
    }
}

impl std::str::FromStr for RefSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "S1" => Ok(RefSet::S1),
            "S2" => Ok(RefSet::S2),
            "S3" => Ok(RefSet::S3),
            _ => Err(Error::InvalidArgument(format!(
                "unknown set `{s}`, expected S1, S2 or S3"
            ))),
        }
    }
}

/// One `(set, k, algorithm)` measurement.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub set: RefSet,
    pub k: usize,
    pub algorithm: u8,
    pub elapsed_ms: f64,
    /// Terms of `g_kkk` in the basis `{1, z}`.
    pub term_count: usize,
    /// Distinct parameter monomials of `g_kkk`.
    pub support: usize,
    pub reference: Option<usize>,
}

impl BenchRow {
    pub fn matches_reference(&self) -> bool {
        self.reference.is_none_or(|r| r == self.term_count)
    }
}

/// Runs one algorithm through level `k`, returning the quantities and the
/// wall-clock time in milliseconds.
pub fn timed_run(spec: &SystemSpec, k: usize, algorithm: u8) -> Result<(GList, f64)> {
    let start = Instant::now();
    let g = match algorithm {
        1 => alg1_quantities(spec, k)?,
        2 => alg2_compute(spec, k)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "algorithm {other} does not exist"
            )))
        }
    };
    Ok((g, start.elapsed().as_secs_f64() * 1e3))
}

/// Measures one cell of the timing table.
pub fn run_cell(set: RefSet, k: usize, algorithm: u8) -> Result<BenchRow> {
    let (g, elapsed_ms) = timed_run(&set.spec(), k, algorithm)?;
    let gk = g.get(k);
    Ok(BenchRow {
        set,
        k,
        algorithm,
        elapsed_ms,
        term_count: gk.expanded_term_count(),
        support: gk.term_count(),
        reference: set.reference_count(k),
    })
}

/// The cells of a sweep through level `k_max`, in table order.
pub fn plan(sets: &[RefSet], k_max: usize) -> Vec<(RefSet, usize, u8)> {
    let mut cells = Vec::new();
    for &set in sets {
        for k in 1..=k_max {
            cells.push((set, k, 1));
            if k <= set.alg2_max_level() {
                cells.push((set, k, 2));
            }
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_lookup() {
        assert_eq!(RefSet::S3.reference_count(5), Some(388));
        assert_eq!(RefSet::S1.reference_count(0), None);
        assert_eq!(RefSet::S1.reference_count(6), None);
        assert_eq!("s2".parse::<RefSet>().unwrap(), RefSet::S2);
        assert!("S4".parse::<RefSet>().is_err());
    }

    #[test]
    fn small_cells_match() {
        for set in RefSet::ALL {
            for alg in [1, 2] {
                let row = run_cell(set, 1, alg).unwrap();
                assert!(row.matches_reference(), "{row:?}");
            }
        }
    }

    #[test]
    fn plan_skips_untabulated_cells() {
        let cells = plan(&RefSet::ALL, 3);
        assert!(!cells.contains(&(RefSet::S1, 3, 2)));
        assert!(cells.contains(&(RefSet::S2, 3, 2)));
        assert_eq!(cells.len(), 9 + 2 + 3 + 3);
    }
}
