//! Parameter scans over the threshold.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{classify_orbit, OrbitClass, Threshold, DEFAULT_BOUNDARY_TOL};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BifurcationSample {
    pub c1: f64,
    pub class: OrbitClass,
}

impl BifurcationSample {
    pub fn period(&self) -> Option<usize> {
        self.class.period()
    }
}

/// Evenly spaced thresholds from `lo` to `hi` inclusive.
pub fn threshold_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo > 0.75 && lo < hi && hi < 1.0) {
        return Err(Error::Parameter(format!(
            "scan range [{lo}, {hi}] must satisfy 0.75 < lo < hi < 1"
        )));
    }
    if steps == 0 {
        return Err(Error::Parameter("scan needs at least one step".into()));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| lo + (hi - lo) * (k as f64 / last))
        .collect())
}

/// Classifies the orbit of the threshold at every grid value.
pub fn bifurcation_scan(
    lo: f64,
    hi: f64,
    steps: usize,
    max_iter: usize,
) -> Result<Vec<BifurcationSample>> {
    threshold_grid(lo, hi, steps)?
        .into_par_iter()
        .map(|c1| {
            let t = Threshold::new(c1)?;
            Ok(BifurcationSample {
                c1,
                class: classify_orbit(&t, max_iter, DEFAULT_BOUNDARY_TOL),
            })
        })
        .collect()
}

/// Whether the in-phase basin component around `C^N` reaches the boundary
/// of the cube: true iff `j (1 - c1) > 1` for some `j < sites`.
pub fn central_component_reaches_boundary(t: &Threshold, sites: usize) -> bool {
    (1..sites).any(|j| j as f64 * (1.0 - t.c1()) > 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(c1: f64) -> Threshold {
        Threshold::new(c1).unwrap()
    }

    #[test]
    fn scan_period_two_window() {
        let samples = bifurcation_scan(0.76, 0.90, 141, 10_000).unwrap();
        assert_eq!(samples.len(), 141);
        assert_eq!(samples[0].c1, 0.76);
        assert_eq!(samples[140].c1, 0.90);
        assert!(samples.iter().all(|s| s.period() == Some(2)));
    }

    #[test]
    fn scan_matches_point_classification() {
        let samples = bifurcation_scan(0.98, 0.99, 3, 1000).unwrap();
        let last = samples.last().unwrap();
        assert_eq!(last.c1, 0.99);
        assert_eq!(last.period(), Some(4));
    }

    #[test]
    fn scan_rejects_bad_ranges() {
        assert!(bifurcation_scan(0.7, 0.9, 10, 100).is_err());
        assert!(bifurcation_scan(0.9, 0.8, 10, 100).is_err());
        assert!(bifurcation_scan(0.8, 1.0, 10, 100).is_err());
        assert!(bifurcation_scan(0.8, 0.9, 0, 100).is_err());
    }

    #[test]
    fn central_component_examples() {
        assert!(central_component_reaches_boundary(&t(0.76), 6));
        for c1 in [0.76, 0.84, 0.9, 0.99] {
            assert!(!central_component_reaches_boundary(&t(c1), 2));
        }
        assert!(!central_component_reaches_boundary(&t(0.9), 11));
        assert!(central_component_reaches_boundary(&t(0.9), 12));
    }
}
