//! The N-site cascading map: logistic iteration at every site, then a
//! left-to-right pass that clips each site at `c1` and carries the overflow
//! into the next site. The carry leaving the last site is the excess output
//! of the step.

use std::collections::VecDeque;

use crate::error::Result;
use crate::scalar::{check_unit, clip, logistic, Threshold};

/// Lattice state plus the excess emitted by the step that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    pub sites: Vec<f64>,
    pub last_excess: f64,
}

impl LatticeState {
    pub fn new(sites: Vec<f64>) -> Result<Self> {
        for &x in &sites {
            check_unit("site", x)?;
        }
        Ok(Self::from_sites(sites))
    }

    pub(crate) fn from_sites(sites: Vec<f64>) -> Self {
        Self {
            sites,
            last_excess: 0.0,
        }
    }

    /// `n` copies of `x`.
    pub fn uniform(n: usize, x: f64) -> Result<Self> {
        Self::new(vec![x; n])
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Advances the state in place and returns the emitted excess.
    #[inline]
    pub fn advance(&mut self, t: &Threshold) -> f64 {
        let e = step_in_place(&mut self.sites, t.c1());
        self.last_excess = e;
        e
    }
}

/// Emitted excesses `e^1, e^2, ...`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExcessTrace {
    pub values: Vec<f64>,
}

impl ExcessTrace {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Cascading operator applied to pre-cascade values `y`, returning the new
/// sites and the carry that leaves the array.
pub fn cascade(y: &[f64], t: &Threshold) -> (Vec<f64>, f64) {
    let mut x = y.to_vec();
    let e = cascade_in_place(&mut x, t.c1());
    (x, e)
}

#[inline(always)]
fn cascade_in_place(sites: &mut [f64], c1: f64) -> f64 {
    let mut carry = 0.0;
    for x in sites.iter_mut() {
        let out = clip(*x + carry, c1);
        *x = out.state;
        carry = out.excess;
    }
    carry
}

#[inline(always)]
pub(crate) fn step_in_place(sites: &mut [f64], c1: f64) -> f64 {
    let mut carry = 0.0;
    for x in sites.iter_mut() {
        let out = clip(logistic(*x) + carry, c1);
        *x = out.state;
        carry = out.excess;
    }
    carry
}

/// One application of the system map.
pub fn step(s: &LatticeState, t: &Threshold) -> LatticeState {
    let mut next = s.clone();
    next.advance(t);
    next
}

/// Result of [`iterate`].
#[derive(Clone, Debug, PartialEq)]
pub struct Iterated {
    pub last: LatticeState,
    pub trace: ExcessTrace,
    /// The most recent states, oldest first, when recording was requested.
    pub states: Option<Vec<LatticeState>>,
}

/// Applies [`step`] `k` times. With `record = Some(n)` the last `n` states
/// (including the final one) are kept.
pub fn iterate(s: &LatticeState, t: &Threshold, k: usize, record: Option<usize>) -> Iterated {
    let mut cur = s.clone();
    let mut trace = Vec::with_capacity(k);
    let mut ring: Option<VecDeque<LatticeState>> = record.map(VecDeque::with_capacity);
    for _ in 0..k {
        trace.push(cur.advance(t));
        if let (Some(buf), Some(cap)) = (ring.as_mut(), record) {
            if cap > 0 {
                if buf.len() == cap {
                    buf.pop_front();
                }
                buf.push_back(cur.clone());
            }
        }
    }
    Iterated {
        last: cur,
        trace: ExcessTrace { values: trace },
        states: ring.map(Vec::from),
    }
}

/// Runs `transient` steps silently and returns the sum of the excesses
/// emitted over the following `window` steps.
pub fn excess_window_sum(s: &LatticeState, t: &Threshold, transient: usize, window: usize) -> f64 {
    let mut sites = s.sites.clone();
    window_sum_in_place(&mut sites, t.c1(), transient, window)
}

#[inline]
pub(crate) fn window_sum_in_place(
    sites: &mut [f64],
    c1: f64,
    transient: usize,
    window: usize,
) -> f64 {
    for _ in 0..transient {
        step_in_place(sites, c1);
    }
    let mut sum = 0.0;
    for _ in 0..window {
        sum += step_in_place(sites, c1);
    }
    sum
}
