//! The single-site threshold map.
//!
//! `f(x) = 4x(1-x)` followed by clipping at the threshold `c1`; whatever is
//! clipped off is reported as the excess. For `c1 > 3/4` the interval
//! `C = [c0, 1-c0]` is exactly the set sent to the threshold, `A = [c2, c1]`
//! absorbs every orbit except those of 0 and 1, and the orbit of `c1` itself
//! determines the attractor.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::seed;

/// Default iteration budget for [`classify_orbit`].
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Orbit points closer than this to an endpoint of `C` are reported as
/// [`OrbitClass::Boundary`].
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-12;

/// Upper end of the period-2 window, `(5 + sqrt 5) / 8`.
pub fn period_two_limit() -> f64 {
    (5.0 + 5f64.sqrt()) / 8.0
}

/// The logistic map `4x(1-x)`, unchecked.
#[inline(always)]
pub fn logistic(x: f64) -> f64 {
    4.0 * x * (1.0 - x)
}

/// [`logistic`] with a domain check.
pub fn logistic_checked(x: f64) -> Result<f64> {
    check_unit("x", x)?;
    Ok(logistic(x))
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}

/// One output of the threshold map: the new state and the clipped excess.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Clipped {
    pub state: f64,
    pub excess: f64,
}

/// Clips `y` at `c1`. Ties keep `y` with zero excess.
#[inline(always)]
pub fn clip(y: f64, c1: f64) -> Clipped {
    if y <= c1 {
        Clipped {
            state: y,
            excess: 0.0,
        }
    } else {
        Clipped {
            state: c1,
            excess: y - c1,
        }
    }
}

/// A threshold `c1 ∈ (3/4, 1)` together with its derived constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Threshold {
    c1: f64,
    c0: f64,
    c2: f64,
    d1: f64,
}

impl Threshold {
    pub fn new(c1: f64) -> Result<Self> {
        if !(c1 > 0.75 && c1 < 1.0) {
            return Err(Error::Parameter(format!(
                "threshold c1 = {c1} must lie in (0.75, 1)"
            )));
        }
        Ok(Self {
            c1,
            c0: 0.5 - 0.5 * (1.0 - c1).sqrt(),
            c2: clip(logistic(c1), c1).state,
            d1: (1.0 - 2.0 * c1).acos() / PI,
        })
    }

    #[inline(always)]
    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// Left endpoint of `C`.
    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// First image of `c1`, the lower end of the absorbing interval.
    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// Image of `c1` under the tent-map conjugacy.
    pub fn d1(&self) -> f64 {
        self.d1
    }

    /// `C = [c0, 1 - c0]`, the preimage of `[c1, 1]`.
    pub fn critical_interval(&self) -> (f64, f64) {
        (self.c0, 1.0 - self.c0)
    }

    /// `A = [c2, c1]`.
    pub fn absorbing_interval(&self) -> (f64, f64) {
        (self.c2, self.c1)
    }

    /// Excess `f(x) - c1` of a point in `C` (zero elsewhere).
    pub fn excess(&self, x: f64) -> f64 {
        clip(logistic(x), self.c1).excess
    }

    #[inline(always)]
    pub fn apply(&self, x: f64) -> Clipped {
        clip(logistic(x), self.c1)
    }
}

/// Alias matching the constructor used throughout the docs.
pub fn make_threshold(c1: f64) -> Result<Threshold> {
    Threshold::new(c1)
}

/// `f_{c1}(x)` with its excess. `state + excess == f(x)` up to one rounding.
pub fn threshold_map(x: f64, t: &Threshold) -> Result<Clipped> {
    check_unit("x", x)?;
    Ok(t.apply(x))
}

/// The first `k` points `c1, c2, ..., c_k` of the orbit of the threshold,
/// each paired with the excess emitted on the step that produced it
/// (zero for `c1` itself).
pub fn forward_orbit(t: &Threshold, k: usize) -> Vec<Clipped> {
    let mut out = Vec::with_capacity(k);
    let mut cur = Clipped {
        state: t.c1,
        excess: 0.0,
    };
    for _ in 0..k {
        out.push(cur);
        cur = t.apply(cur.state);
    }
    out
}

/// Fate of the orbit of `c1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitClass {
    /// The point at `steps_to_c` (counting `c1` as step 0) lies in the
    /// interior of `C`; the orbit of `c1` is then exactly periodic.
    SuperStable { period: usize, steps_to_c: usize },
    /// No orbit point among the first `iterations_checked` entered `C`.
    Repeller { iterations_checked: usize },
    /// The orbit point at `step` lies within the tolerance of an endpoint of `C`.
    Boundary { step: usize },
}

impl OrbitClass {
    pub fn period(&self) -> Option<usize> {
        match *self {
            OrbitClass::SuperStable { period, .. } => Some(period),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            OrbitClass::SuperStable { .. } => "superstable",
            OrbitClass::Repeller { .. } => "repeller",
            OrbitClass::Boundary { .. } => "boundary",
        }
    }
}

/// Follows the orbit of `c1` for at most `max_iter` points.
pub fn classify_orbit(t: &Threshold, max_iter: usize, boundary_tol: f64) -> OrbitClass {
    let (lo, hi) = t.critical_interval();
    let mut x = t.c1;
    for step in 0..max_iter {
        if (x - lo).abs() <= boundary_tol || (x - hi).abs() <= boundary_tol {
            return OrbitClass::Boundary { step };
        }
        if x > lo && x < hi {
            return OrbitClass::SuperStable {
                period: return_time(t, step + 1),
                steps_to_c: step,
            };
        }
        x = t.apply(x).state;
    }
    OrbitClass::Repeller {
        iterations_checked: max_iter,
    }
}

// Least p <= limit with c_{1+p} == c1. Clipping makes the comparison exact.
fn return_time(t: &Threshold, limit: usize) -> usize {
    let mut x = t.c1;
    for p in 1..=limit {
        x = t.apply(x).state;
        if x == t.c1 {
            return p;
        }
    }
    limit
}

/// The slope-2 tent map.
#[inline]
pub fn tent(u: f64) -> f64 {
    if u <= 0.5 {
        2.0 * u
    } else {
        2.0 - 2.0 * u
    }
}

/// Conjugacy `h(x) = (2/π) asin(√x)` carrying `f` to the tent map.
pub fn to_tent(x: f64) -> f64 {
    FRAC_2_PI * x.sqrt().asin()
}

/// Inverse conjugacy `h⁻¹(u) = sin²(πu/2)`.
pub fn from_tent(u: f64) -> f64 {
    let s = (FRAC_PI_2 * u).sin();
    s * s
}

/// Tent-measure prediction `d1^(j+1)` for the set of points that avoid `C`
/// during their first `j + 1` orbit points.
pub fn avoidance_measure_tent(t: &Threshold, j: u32) -> f64 {
    t.d1.powi(j as i32 + 1)
}

/// A Monte Carlo estimate of a Lebesgue measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AvoidanceEstimate {
    pub j: u32,
    pub fraction: f64,
    /// Binomial standard error `sqrt(p(1-p)/n)`.
    pub stderr: f64,
    pub samples: u64,
}

const SAMPLES_PER_TASK: u64 = 1 << 14;

/// Estimates the Lebesgue measure of `R_j`, the points `x` whose orbit
/// points `x, f(x), ..., f^j(x)` all stay outside `C`.
pub fn estimate_avoidance(t: &Threshold, j: u32, samples: u64, seed: u64) -> AvoidanceEstimate {
    *estimate_avoidance_curve(t, j, samples, seed)
        .last()
        .expect("curve has j + 1 entries")
}

/// [`estimate_avoidance`] for every `0..=j_max` from one set of samples.
pub fn estimate_avoidance_curve(
    t: &Threshold,
    j_max: u32,
    samples: u64,
    seed: u64,
) -> Vec<AvoidanceEstimate> {
    use rand::Rng;

    let bins = j_max as usize + 2;
    let tasks = samples.div_ceil(SAMPLES_PER_TASK);
    // first_entry[k] counts samples whose first point in C is point k;
    // the last bin holds samples that avoided C through j_max.
    let first_entry = (0..tasks)
        .into_par_iter()
        .map(|task| {
            let mut rng = seed::task_rng(seed, task);
            let n = SAMPLES_PER_TASK.min(samples - task * SAMPLES_PER_TASK);
            let mut hist = vec![0u64; bins];
            for _ in 0..n {
                let mut x: f64 = rng.random();
                let mut k = 0;
                while k <= j_max as usize {
                    let y = logistic(x);
                    if y >= t.c1 {
                        break;
                    }
                    x = y;
                    k += 1;
                }
                hist[k] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let n = samples as f64;
    let mut survivors = samples;
    (0..=j_max)
        .map(|j| {
            survivors -= first_entry[j as usize];
            let p = survivors as f64 / n;
            AvoidanceEstimate {
                j,
                fraction: p,
                stderr: (p * (1.0 - p) / n).sqrt(),
                samples,
            }
        })
        .collect()
}
