//! Existence of the anti-phase period-2 orbit for two sites.
//!
//! Starting from `(c2, c1)` the first site clips and kicks the second site
//! up to `c2 + e(c2)`. The orbit closes exactly when that kicked value still
//! lies in `C`, i.e. `c2 + e(c2) <= 1 - c0`.

use crate::error::Result;
use crate::roots::bisect;
use crate::scalar::{logistic, period_two_limit, Threshold};

/// `c2 + e(c2) <= 1 - c0`, evaluated as written.
pub fn antiphase_condition(t: &Threshold) -> bool {
    let c2 = t.c2();
    c2 + (logistic(c2) - t.c1()) <= 1.0 - t.c0()
}

/// The anti-phase condition rewritten as a polynomial inequality in `c1`;
/// negative exactly where the anti-phase orbit exists inside the period-2
/// window.
pub fn antiphase_gap(c1: f64) -> f64 {
    let c = c1;
    let poly = c * (19.0 + c * (-84.0 + c * (128.0 - 64.0 * c)));
    poly - 0.5 * (1.0 + (1.0 - c).sqrt())
}

/// Smallest `c1` in the period-2 window admitting the anti-phase orbit.
pub fn antiphase_root() -> Result<f64> {
    // The polynomial form also vanishes at c1 = 3/4, so start the bracket
    // clear of it.
    bisect(antiphase_gap, 0.76, period_two_limit(), 1e-13)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(c1: f64) -> Threshold {
        Threshold::new(c1).unwrap()
    }

    #[test]
    fn condition_examples() {
        assert!(antiphase_condition(&t(0.84)));
        assert!(!antiphase_condition(&t(0.80)));
        assert!(antiphase_condition(&t(0.9)));
    }

    #[test]
    fn polynomial_form_agrees_with_direct_condition() {
        for k in 1..1000 {
            let c1 = 0.76 + (period_two_limit() - 0.76) * k as f64 / 1000.0;
            let gap = antiphase_gap(c1);
            if gap.abs() > 1e-12 {
                assert_eq!(gap < 0.0, antiphase_condition(&t(c1)), "c1 = {c1}");
            }
        }
    }

    #[test]
    fn root_value_and_straddle() {
        let r = antiphase_root().unwrap();
        assert!((r - 0.836_272_348_143_18).abs() < 1e-10, "{r}");
        assert!(!antiphase_condition(&t(r - 1e-6)));
        assert!(antiphase_condition(&t(r + 1e-6)));
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::scalar::period_two_limit;

    #[test]
    fn condition_is_monotone_on_grid() {
        let root = antiphase_root().unwrap();
        let (lo, hi) = (0.75, period_two_limit());
        for k in 1..1000 {
            let c1 = lo + (hi - lo) * k as f64 / 1000.0;
            let t = Threshold::new(c1).unwrap();
            assert_eq!(antiphase_condition(&t), c1 > root, "c1 = {c1}");
        }
    }
}
