//! Basins of attraction on two-dimensional slices of the lattice.
//!
//! Each grid cell starts the lattice at its center `(x, y, pinned...)`, runs
//! a transient, and records the excess summed over a short window. Equal
//! sums (up to [`BUCKET_TOL`]) are taken to be the same attractor; the
//! resulting class map is then split into 4-connected components.

use rayon::prelude::*;

use crate::cascade::window_sum_in_place;
use crate::error::{Error, Result};
use crate::scalar::Threshold;

/// Absolute tolerance for merging fingerprints into one class.
pub const BUCKET_TOL: f64 = 1e-6;

pub const DEFAULT_RESOLUTION: usize = 499;
pub const DEFAULT_TRANSIENT: usize = 100;
pub const DEFAULT_WINDOW: usize = 12;

/// Axis-aligned box inside the unit square.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Domain {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Domain {
    pub const UNIT: Domain = Domain {
        x: (0.0, 1.0),
        y: (0.0, 1.0),
    };
}

impl Default for Domain {
    fn default() -> Self {
        Domain::UNIT
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    /// Cells per axis.
    pub resolution: usize,
    pub domain: Domain,
    /// Fixed values for sites 3..N; empty for two sites.
    pub pinned: Vec<f64>,
    pub transient: usize,
    pub window: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            resolution: DEFAULT_RESOLUTION,
            domain: Domain::UNIT,
            pinned: Vec::new(),
            transient: DEFAULT_TRANSIENT,
            window: DEFAULT_WINDOW,
        }
    }
}

impl GridSpec {
    pub fn with_resolution(resolution: usize) -> Self {
        Self {
            resolution,
            ..Self::default()
        }
    }

    pub fn sites(&self) -> usize {
        2 + self.pinned.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::Parameter(format!(
                "grid resolution {} must be at least 2",
                self.resolution
            )));
        }
        for (lo, hi) in [self.domain.x, self.domain.y] {
            if !(0.0 <= lo && lo < hi && hi <= 1.0) {
                return Err(Error::Parameter(format!(
                    "domain side [{lo}, {hi}] must be a subinterval of [0, 1]"
                )));
            }
        }
        if self.window == 0 {
            return Err(Error::Parameter("window must be at least 1".into()));
        }
        for &p in &self.pinned {
            crate::scalar::check_unit("pinned site", p)?;
        }
        Ok(())
    }

    pub fn x_centers(&self) -> Vec<f64> {
        axis_centers(self.domain.x, self.resolution)
    }

    pub fn y_centers(&self) -> Vec<f64> {
        axis_centers(self.domain.y, self.resolution)
    }
}

// Centers in the upper half are computed directly; the lower half is their
// reflection through the midpoint. On [0, 1] the reflection 1 - x is exact,
// so mirrored cells start from bit-exact mirrored states.
fn axis_centers((lo, hi): (f64, f64), r: usize) -> Vec<f64> {
    let w = hi - lo;
    let mut c = vec![0.0; r];
    for (i, v) in c.iter_mut().enumerate() {
        if 2 * i + 1 >= r {
            *v = lo + w * ((i as f64 + 0.5) / r as f64);
        }
    }
    for i in 0..r {
        if 2 * i + 1 < r {
            c[i] = (lo + hi) - c[r - 1 - i];
        }
    }
    c
}

/// Fingerprints and class labels, stored row-major with row `j` at the
/// `j`-th y center (ascending) and column `i` at the `i`-th x center.
#[derive(Clone, Debug, PartialEq)]
pub struct BasinGrid {
    pub spec: GridSpec,
    pub fingerprints: Vec<f64>,
    pub classes: Vec<u32>,
    /// Representative (smallest) fingerprint of each class, ascending.
    pub class_table: Vec<f64>,
}

impl BasinGrid {
    pub fn resolution(&self) -> usize {
        self.spec.resolution
    }

    pub fn class_count(&self) -> usize {
        self.class_table.len()
    }

    pub fn index(&self, col: usize, row: usize) -> usize {
        row * self.spec.resolution + col
    }

    pub fn class_at(&self, col: usize, row: usize) -> u32 {
        self.classes[self.index(col, row)]
    }

    pub fn fingerprint_at(&self, col: usize, row: usize) -> f64 {
        self.fingerprints[self.index(col, row)]
    }

    /// Initial lattice state of a cell.
    pub fn initial_state(&self, col: usize, row: usize) -> Vec<f64> {
        let x = self.spec.x_centers()[col];
        let y = self.spec.y_centers()[row];
        let mut s = vec![x, y];
        s.extend_from_slice(&self.spec.pinned);
        s
    }
}

/// Fingerprint of a single initial state.
pub fn fingerprint(t: &Threshold, sites: &[f64], transient: usize, window: usize) -> f64 {
    let mut buf = sites.to_vec();
    window_sum_in_place(&mut buf, t.c1(), transient, window)
}

/// Renders the basin map. Rows are independent work items, so the output
/// is identical for any thread count.
pub fn render_basins(t: &Threshold, spec: &GridSpec) -> Result<BasinGrid> {
    spec.validate()?;
    let r = spec.resolution;
    let xs = spec.x_centers();
    let ys = spec.y_centers();
    let c1 = t.c1();
    let mut fingerprints = vec![0.0; r * r];
    fingerprints
        .par_chunks_mut(r)
        .enumerate()
        .for_each(|(row, out)| {
            let mut buf = vec![0.0; spec.sites()];
            buf[2..].copy_from_slice(&spec.pinned);
            for (col, slot) in out.iter_mut().enumerate() {
                buf[0] = xs[col];
                buf[1] = ys[row];
                buf[2..].copy_from_slice(&spec.pinned);
                *slot = window_sum_in_place(&mut buf, c1, spec.transient, spec.window);
            }
        });
    let (classes, class_table) = bucket(&fingerprints, BUCKET_TOL);
    Ok(BasinGrid {
        spec: spec.clone(),
        fingerprints,
        classes,
        class_table,
    })
}

/// Groups values so that each lies within `tol` of its class's smallest
/// member. Class ids are dense and ascend with the representative.
pub fn bucket(values: &[f64], tol: f64) -> (Vec<u32>, Vec<f64>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut classes = vec![0u32; values.len()];
    let mut table: Vec<f64> = Vec::new();
    for idx in order {
        let v = values[idx];
        match table.last() {
            Some(&rep) if v - rep <= tol => {}
            _ => table.push(v),
        }
        classes[idx] = (table.len() - 1) as u32;
    }
    (classes, table)
}

/// Connected components of the class map.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentStats {
    pub resolution: usize,
    /// Component id of every cell, dense in raster order of first appearance.
    pub labels: Vec<u32>,
    /// Class of each component.
    pub component_class: Vec<u32>,
    /// Number of components of each class.
    pub per_class: Vec<usize>,
}

impl ComponentStats {
    pub fn total(&self) -> usize {
        self.component_class.len()
    }

    /// Number of distinct components among cells accepted by `keep(col, row)`.
    pub fn count_where<F>(&self, keep: F) -> usize
    where
        F: Fn(usize, usize) -> bool,
    {
        let r = self.resolution;
        let mut seen = vec![false; self.total()];
        let mut n = 0;
        for row in 0..r {
            for col in 0..r {
                if keep(col, row) {
                    let l = self.labels[row * r + col] as usize;
                    if !seen[l] {
                        seen[l] = true;
                        n += 1;
                    }
                }
            }
        }
        n
    }

    /// Components meeting the box `[0, eps]²` at `corner`, judged by cell centers.
    pub fn corner_count(&self, spec: &GridSpec, corner: Corner, eps: f64) -> usize {
        let xs = spec.x_centers();
        let ys = spec.y_centers();
        let (fx, fy) = corner.flips();
        let near = |v: f64, flip: bool| if flip { v >= 1.0 - eps } else { v <= eps };
        self.count_where(|col, row| near(xs[col], fx) && near(ys[row], fy))
    }

    /// Components meeting the closed disk of radius `r` around `point`.
    pub fn disk_count(&self, spec: &GridSpec, point: (f64, f64), radius: f64) -> usize {
        let xs = spec.x_centers();
        let ys = spec.y_centers();
        let r2 = radius * radius;
        self.count_where(|col, row| {
            let dx = xs[col] - point.0;
            let dy = ys[row] - point.1;
            dx * dx + dy * dy <= r2
        })
    }
}

fn find(parent: &mut [u32], mut a: u32) -> u32 {
    while parent[a as usize] != a {
        let up = parent[parent[a as usize] as usize];
        parent[a as usize] = up;
        a = up;
    }
    a
}

/// Two-pass 4-connected labeling of same-class cells.
pub fn label_components(g: &BasinGrid) -> ComponentStats {
    let r = g.resolution();
    let classes = &g.classes;
    let mut provisional = vec![0u32; r * r];
    let mut parent: Vec<u32> = Vec::new();

    for row in 0..r {
        for col in 0..r {
            let i = row * r + col;
            let c = classes[i];
            let left = (col > 0 && classes[i - 1] == c).then(|| provisional[i - 1]);
            let up = (row > 0 && classes[i - r] == c).then(|| provisional[i - r]);
            provisional[i] = match (left, up) {
                (None, None) => {
                    parent.push(parent.len() as u32);
                    (parent.len() - 1) as u32
                }
                (Some(a), None) | (None, Some(a)) => a,
                (Some(a), Some(b)) => {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    let (lo, hi) = (ra.min(rb), ra.max(rb));
                    parent[hi as usize] = lo;
                    lo
                }
            };
        }
    }

    let mut dense = vec![u32::MAX; parent.len()];
    let mut component_class = Vec::new();
    let mut labels = vec![0u32; r * r];
    for i in 0..r * r {
        let root = find(&mut parent, provisional[i]) as usize;
        if dense[root] == u32::MAX {
            dense[root] = component_class.len() as u32;
            component_class.push(classes[i]);
        }
        labels[i] = dense[root];
    }
    let mut per_class = vec![0usize; g.class_count()];
    for &c in &component_class {
        per_class[c as usize] += 1;
    }
    ComponentStats {
        resolution: r,
        labels,
        component_class,
        per_class,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Corner {
    /// `(0, 0)`
    LowerLeft,
    /// `(1, 0)`
    LowerRight,
    /// `(0, 1)`
    UpperLeft,
    /// `(1, 1)`
    UpperRight,
}

impl Corner {
    pub const ALL: [Corner; 4] = [
        Corner::LowerLeft,
        Corner::LowerRight,
        Corner::UpperLeft,
        Corner::UpperRight,
    ];

    fn flips(self) -> (bool, bool) {
        match self {
            Corner::LowerLeft => (false, false),
            Corner::LowerRight => (true, false),
            Corner::UpperLeft => (false, true),
            Corner::UpperRight => (true, true),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Corner::LowerLeft => "lower-left",
            Corner::LowerRight => "lower-right",
            Corner::UpperLeft => "upper-left",
            Corner::UpperRight => "upper-right",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CornerRow {
    pub resolution: usize,
    pub eps: f64,
    pub corner: Corner,
    pub components: usize,
}

/// Counts components meeting each corner box, for every resolution and
/// box size.
pub fn corner_accumulation(
    t: &Threshold,
    base: &GridSpec,
    eps_list: &[f64],
    resolutions: &[usize],
) -> Result<Vec<CornerRow>> {
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Parameter("corner sizes must be decreasing".into()));
    }
    if resolutions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parameter("resolutions must be increasing".into()));
    }
    let mut rows = Vec::new();
    for &resolution in resolutions {
        let spec = GridSpec {
            resolution,
            ..base.clone()
        };
        let grid = render_basins(t, &spec)?;
        let stats = label_components(&grid);
        for &eps in eps_list {
            for corner in Corner::ALL {
                rows.push(CornerRow {
                    resolution,
                    eps,
                    corner,
                    components: stats.corner_count(&spec, corner, eps),
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskRow {
    pub resolution: usize,
    pub radius: f64,
    pub components: usize,
}

/// Counts components meeting disks of each radius around `point`.
pub fn interior_accumulation(
    t: &Threshold,
    spec: &GridSpec,
    point: (f64, f64),
    radii: &[f64],
) -> Result<Vec<DiskRow>> {
    if !(point.0 > 0.0 && point.0 < 1.0 && point.1 > 0.0 && point.1 < 1.0) {
        return Err(Error::Parameter(format!(
            "point ({}, {}) must lie in the open unit square",
            point.0, point.1
        )));
    }
    let grid = render_basins(t, spec)?;
    let stats = label_components(&grid);
    Ok(radii
        .iter()
        .map(|&radius| DiskRow {
            resolution: spec.resolution,
            radius,
            components: stats.disk_count(spec, point, radius),
        })
        .collect())
}


#[cfg(test)]
mod properties {
    use super::*;
    use proptest::collection::vec;
    use proptest::prelude::*;
    use rand::Rng;

    fn t(c1: f64) -> Threshold {
        Threshold::new(c1).unwrap()
    }

    fn render_with(threads: usize, c1: f64, spec: &GridSpec) -> BasinGrid {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| render_basins(&t(c1), spec))
            .unwrap()
    }

    #[test]
    fn render_ignores_thread_count() {
        let spec = GridSpec::with_resolution(151);
        for c1 in [0.84, 0.94] {
            let a = render_with(1, c1, &spec);
            let b = render_with(4, c1, &spec);
            let bits = |g: &BasinGrid| {
                g.fingerprints
                    .iter()
                    .map(|f| f.to_bits())
                    .collect::<Vec<_>>()
            };
            assert_eq!(bits(&a), bits(&b));
            assert_eq!(a.classes, b.classes);
        }
    }

    #[test]
    fn stored_fingerprints_reproduce() {
        let spec = GridSpec::default();
        let thr = t(0.84);
        let g = render_basins(&thr, &spec).unwrap();
        let mut rng = crate::seed::task_rng(5, 0);
        for _ in 0..100 {
            let (col, row) = (rng.random_range(0..499), rng.random_range(0..499));
            let fp = fingerprint(
                &thr,
                &g.initial_state(col, row),
                spec.transient,
                spec.window,
            );
            assert_eq!(fp.to_bits(), g.fingerprint_at(col, row).to_bits());
            let rep = g.class_table[g.class_at(col, row) as usize];
            assert!((fp - rep).abs() <= BUCKET_TOL);
        }
    }

    #[test]
    fn refinement_does_not_lose_components() {
        for c1 in [0.84, 0.94] {
            let mut last = 0;
            for r in [63, 126, 252, 504] {
                let total = label_components(
                    &render_basins(&t(c1), &GridSpec::with_resolution(r)).unwrap(),
                )
                .total();
                assert!(total >= last, "c1={c1} R={r}: {total} < {last}");
                last = total;
            }
        }
    }

    #[test]
    fn single_attractor_below_anti_phase_window() {
        let spec = GridSpec::default();
        let g = render_basins(&t(0.80), &spec).unwrap();
        assert_eq!(g.class_count(), 1);
        let s = label_components(&g);
        for corner in Corner::ALL {
            assert_eq!(s.corner_count(&spec, corner, 0.1), 1);
        }
    }

    #[test]
    fn two_attractors_with_broken_basins() {
        let rows =
            corner_accumulation(&t(0.84), &GridSpec::default(), &[0.1, 0.05], &[125, 499]).unwrap();
        let count = |r: usize, corner: Corner| {
            rows.iter()
                .find(|x| x.resolution == r && x.eps == 0.1 && x.corner == corner)
                .unwrap()
                .components
        };
        for corner in Corner::ALL {
            assert!(count(499, corner) > count(125, corner));
        }
        let g = render_basins(&t(0.84), &GridSpec::default()).unwrap();
        assert!(g.class_count() >= 2);
        assert!(label_components(&g).total() > g.class_count());
        assert_eq!(fingerprint(&t(0.84), &[0.0, 0.0], 100, 12), 0.0);
    }

    #[test]
    fn components_gather_at_three_quarters() {
        let radii = [0.01, 0.02, 0.05, 0.1, 0.2];
        let p = (0.75, 0.75);
        let coarse =
            interior_accumulation(&t(0.94), &GridSpec::with_resolution(249), p, &radii).unwrap();
        let fine = interior_accumulation(&t(0.94), &GridSpec::default(), p, &radii).unwrap();
        for w in fine.windows(2) {
            assert!(w[1].components > w[0].components);
        }
        for (c, f) in coarse.iter().zip(&fine) {
            assert!(f.components > c.components);
        }
        let single = interior_accumulation(&t(0.80), &GridSpec::default(), p, &radii).unwrap();
        assert!(single.iter().all(|r| r.components == 1));
    }

    proptest! {
        #[test]
        fn buckets_are_dense_and_tight(
            values in prop_oneof![
                vec(0.0..3.0f64, 1..200),
                vec((0u8..4, 0.0..3e-6f64).prop_map(|(k, j)| f64::from(k) * 0.5 + j), 1..200),
            ]
        ) {
            let (classes, reps) = bucket(&values, BUCKET_TOL);
            prop_assert!(reps.windows(2).all(|w| w[0] < w[1]));
            let mut seen = vec![false; reps.len()];
            for (v, &c) in values.iter().zip(&classes) {
                prop_assert!((v - reps[c as usize]).abs() <= BUCKET_TOL);
                seen[c as usize] = true;
            }
            prop_assert!(seen.into_iter().all(|s| s));
        }
    }
}
