//! Monte Carlo census of lattice attractors.

use rand::Rng;
use rayon::prelude::*;

use crate::attractor::orbit::{detect_periodic_orbit, AttractorRecord, DEFAULT_RECURRENCE_TOL};
use crate::cascade::LatticeState;
use crate::scalar::Threshold;
use crate::seed;

/// Records closer than this in Hausdorff distance are the same attractor.
pub const DEDUP_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct CensusEntry {
    pub record: AttractorRecord,
    pub hits: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Census {
    /// Distinct attractors, most frequently hit first.
    pub entries: Vec<CensusEntry>,
    /// Samples without a detected recurrence.
    pub unresolved: u64,
    pub samples: u64,
}

impl Census {
    /// Entries other than the origin.
    pub fn nontrivial(&self) -> impl Iterator<Item = &CensusEntry> {
        self.entries.iter().filter(|e| !e.record.is_trivial())
    }
}

/// Random initial state for sample `index`.
pub fn census_initial_state(sites: usize, seed: u64, index: u64) -> LatticeState {
    let mut rng = seed::task_rng(seed, index);
    LatticeState::from_sites((0..sites).map(|_| rng.random::<f64>()).collect())
}

/// Draws `samples` uniform initial states in `[0,1)^sites` and tallies the
/// periodic attractors they reach. Sample `k` uses the stream
/// `seed::task_rng(seed, k)`; records are merged in sample order, so the
/// result does not depend on the thread count.
pub fn census(
    t: &Threshold,
    sites: usize,
    samples: u64,
    seed: u64,
    transient: usize,
    max_period: usize,
) -> Census {
    let found: Vec<Option<AttractorRecord>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let s0 = census_initial_state(sites, seed, k);
            detect_periodic_orbit(t, &s0, transient, max_period, DEFAULT_RECURRENCE_TOL)
        })
        .collect();

    let mut entries: Vec<CensusEntry> = Vec::new();
    let mut unresolved = 0;
    for rec in found {
        let Some(rec) = rec else {
            unresolved += 1;
            continue;
        };
        match entries
            .iter_mut()
            .find(|e| e.record.period == rec.period && e.record.distance(&rec) <= DEDUP_TOL)
        {
            Some(e) => e.hits += 1,
            None => entries.push(CensusEntry {
                record: rec,
                hits: 1,
            }),
        }
    }
    // Stable sort keeps first-seen order among ties.
    entries.sort_by_key(|e| std::cmp::Reverse(e.hits));
    Census {
        entries,
        unresolved,
        samples,
    }
}
