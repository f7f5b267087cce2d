//! Markov partition near the repelling fixed point 3/4 for `c1 > ξ_2`.
//!
//! `J0 = (c2, c0)` is pulled back repeatedly by the right inverse branch
//! `g(y) = 1/2 + √(1-y)/2`; the preimages `J_{-i}` alternate around 3/4 and
//! shrink by a factor that tends to 1/2. The image `f(J0) = (c3, c1)`
//! contains 3/4, so it covers every `J_{-i}` from some index `n0` on.
//!
//! `M_n` has ones on the superdiagonal (`f(J_{-(a+1)}) = J_{-a}`) and in
//! rows `n0..=n` of the first column. The full inclusion matrix can hold
//! extra ones: near `c1 = 0.94`, `J_{-1}` also lies in `f(J0)` because both
//! end at `c1`. `M_n` drops those, which leaves a subshift, so `log ρ(M_n)`
//! is still a lower bound for the entropy.

use crate::attractor::stars::xi2;
use crate::error::{Error, Result};
use crate::scalar::Threshold;

/// Slack on endpoint comparisons in inclusion tests.
pub const INCLUSION_SLACK: f64 = 1e-14;

/// Relative gap between the Collatz–Wielandt bounds at which power
/// iteration stops.
pub const SPECTRAL_TOL: f64 = 1e-10;

// Preimages beyond this depth have collapsed onto 3/4 in f64.
const MIN_DEPTH: usize = 64;

/// Open interval `(lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains_point(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    /// `self ⊆ other`, with [`INCLUSION_SLACK`] on both ends.
    pub fn within(&self, other: &Interval) -> bool {
        self.lo >= other.lo - INCLUSION_SLACK && self.hi <= other.hi + INCLUSION_SLACK
    }
}

/// Right inverse branch of the logistic map.
pub fn right_branch(y: f64) -> f64 {
    0.5 + 0.5 * (1.0 - y).sqrt()
}

#[derive(Clone, Debug)]
pub struct MarkovModel {
    pub threshold: Threshold,
    /// `J0, J_{-1}, ..., J_{-n}`.
    pub intervals: Vec<Interval>,
    /// `f_{c1}(J0)`.
    pub image_of_j0: Interval,
    pub n0: usize,
    /// `M_n`, indexed `[a][b]` over `J_{-a}` and `J_{-b}`.
    pub matrix: Vec<Vec<u8>>,
    /// `[a][b]` is 1 when `J_{-a} ⊆ f(J_{-b})`.
    pub inclusions: Vec<Vec<u8>>,
    pub spectral_radius: f64,
}

impl MarkovModel {
    pub fn n(&self) -> usize {
        self.intervals.len() - 1
    }

    /// `log ρ(M_n)`, a lower bound for the topological entropy.
    pub fn entropy_bound(&self) -> f64 {
        self.spectral_radius.ln()
    }
}

fn image(t: &Threshold, iv: &Interval) -> Interval {
    // Every partition interval lies on one monotone branch outside C.
    let a = t.apply(iv.lo).state;
    let b = t.apply(iv.hi).state;
    Interval {
        lo: a.min(b),
        hi: a.max(b),
    }
}

fn preimages(t: &Threshold, depth: usize) -> Vec<Interval> {
    let mut out = Vec::with_capacity(depth + 1);
    let mut cur = Interval {
        lo: t.c2(),
        hi: t.c0(),
    };
    out.push(cur);
    for _ in 0..depth {
        cur = Interval {
            lo: right_branch(cur.hi),
            hi: right_branch(cur.lo),
        };
        out.push(cur);
    }
    out
}

/// Builds `M_n` over `J0, ..., J_{-n}`.
pub fn build_markov(t: &Threshold, n: usize) -> Result<MarkovModel> {
    if t.c1() <= xi2() {
        return Err(Error::Parameter(format!(
            "Markov partition needs c1 > (2 + sqrt 3)/4, got {}",
            t.c1()
        )));
    }
    let all = preimages(t, n.max(MIN_DEPTH));
    let image_of_j0 = image(t, &all[0]);

    let mut n0 = all.len();
    for i in (1..all.len()).rev() {
        if all[i].within(&image_of_j0) {
            n0 = i;
        } else {
            break;
        }
    }
    if n0 >= all.len() || n < n0 + 1 {
        return Err(Error::Parameter(format!(
            "partition depth n = {n} must be at least n0 + 1 = {}",
            n0 + 1
        )));
    }

    let intervals = all[..=n].to_vec();
    let images: Vec<Interval> = intervals.iter().map(|iv| image(t, iv)).collect();
    let inclusions: Vec<Vec<u8>> = intervals
        .iter()
        .map(|row| images.iter().map(|img| u8::from(row.within(img))).collect())
        .collect();
    let matrix: Vec<Vec<u8>> = (0..=n)
        .map(|a| {
            (0..=n)
                .map(|b| u8::from(b == a + 1 || (b == 0 && a >= n0)))
                .collect()
        })
        .collect();
    let spectral_radius = spectral_radius(&matrix, SPECTRAL_TOL);

    Ok(MarkovModel {
        threshold: *t,
        intervals,
        image_of_j0,
        n0,
        matrix,
        inclusions,
        spectral_radius,
    })
}

/// Perron root of a primitive non-negative matrix by power iteration,
/// bracketed between the min and max of `(Mv)_i / v_i`.
pub fn spectral_radius(matrix: &[Vec<u8>], tol: f64) -> f64 {
    let n = matrix.len();
    let mut v = vec![1.0f64; n];
    let mut w = vec![0.0f64; n];
    let mut estimate = 0.0;
    for _ in 0..1_000_000 {
        for (wi, row) in w.iter_mut().zip(matrix) {
            *wi = row
                .iter()
                .zip(&v)
                .filter(|(m, _)| **m != 0)
                .map(|(m, x)| f64::from(*m) * x)
                .sum();
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (wi, vi) in w.iter().zip(&v) {
            if *vi > 0.0 {
                let r = wi / vi;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        estimate = 0.5 * (lo + hi);
        if hi - lo <= tol * hi {
            break;
        }
        let scale = w.iter().cloned().fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / scale;
        }
    }
    estimate
}
