//! Drivers that approximate the limit set by intersecting scaled spectra.
//!
//! Every scaled spectrum polygon (fattened or not) encloses a neighborhood of
//! the limit set, so intersecting them over a range of radii converges onto
//! it from outside. [`compute_basic`] runs a uniform radius grid straight
//! through. [`compute_sweep`] splits the budget into batches: between
//! batches it measures, on a fixed probe grid, how much area each radius
//! would still remove from the running intersection, and concentrates the
//! next batch inside the radius intervals where that measurement is within a
//! configurable factor of its maximum. Values on the probe grid only shrink
//! as the intersection shrinks, so stale measurements are safe upper bounds
//! and are recomputed lazily.

use std::f64::consts::TAU;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, FixedPointFrame, Pt, Region};
use crate::spectrum::{self, Partition};
use crate::symbol::{CurvatureBound, LaurentSymbol, RhoInterval};

/// Placement rule for radius samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhoSampling {
    /// Equal spacing across the interval.
    Uniform,
    /// Radii below 1 spaced so their reciprocals are uniform, radii at or
    /// above 1 uniform. Keeps a symbol with a tiny inner radius from wasting
    /// almost the whole budget near the outer end.
    InverseBelowOne,
}

impl std::str::FromStr for RhoSampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "inverse-below-one" => Ok(Self::InverseBelowOne),
            other => Err(Error::Parameter(format!(
                "unknown radius sampling mode {other:?}; expected \"uniform\" or \"inverse-below-one\""
            ))),
        }
    }
}

/// Parameters for [`compute_sweep`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Total number of radius samples across all batches.
    pub n: usize,
    /// Angular segments per spectrum polygon.
    pub m: usize,
    /// Probe grid size for the area sweeps.
    pub l: usize,
    /// Number of intersection batches; a sweep runs between consecutive ones.
    pub sweeps: usize,
    /// Seed for the interval-boundary jitter.
    pub seed: u64,
    /// A probe radius is kept while its smoothed area reduction is at least
    /// the grid maximum divided by this.
    pub threshold_divisor: f64,
    /// Centered moving-average window for smoothing sweep values; odd.
    pub ma_window: usize,
    pub rho_sampling: RhoSampling,
    /// Curvature bound used to fatten polygons into certified supersets.
    pub cbound: CurvatureBound,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n: 500,
            m: 1000,
            l: 250,
            sweeps: 1,
            seed: 0,
            threshold_divisor: 1e6,
            ma_window: 5,
            rho_sampling: RhoSampling::Uniform,
            cbound: CurvatureBound::Sampled,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Parameter("need at least one radius sample".into()));
        }
        if self.m < 3 {
            return Err(Error::Parameter(format!(
                "need at least 3 angular segments, got {}",
                self.m
            )));
        }
        if self.l < 1 {
            return Err(Error::Parameter("probe grid needs at least one point".into()));
        }
        if self.sweeps < 1 {
            return Err(Error::Parameter("need at least one batch".into()));
        }
        if self.n < self.sweeps {
            return Err(Error::Parameter(format!(
                "{} radius samples cannot fill {} batches",
                self.n, self.sweeps
            )));
        }
        if self.ma_window % 2 == 0 {
            return Err(Error::Parameter(format!(
                "smoothing window must be odd, got {}",
                self.ma_window
            )));
        }
        if !(self.threshold_divisor >= 1.0 && self.threshold_divisor.is_finite()) {
            return Err(Error::Parameter(format!(
                "threshold divisor must be a finite number >= 1, got {}",
                self.threshold_divisor
            )));
        }
        Ok(())
    }
}

/// Everything observable about a run besides the regions themselves.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Vertex count of the running intersection after each radius.
    pub vertex_counts: Vec<usize>,
    /// Area of the running intersection after each batch.
    pub polygon_areas: Vec<f64>,
    /// Area of the running superset after each batch.
    pub superset_areas: Vec<f64>,
    /// Radius intervals each sweep selected for the following batch.
    pub selected_intervals: Vec<Vec<(f64, f64)>>,
    /// Unit jitter draw of each sweep, before scaling by the grid spacing.
    pub jitters: Vec<f64>,
    /// Radius interval the whole run operated on.
    pub rho_interval: (f64, f64),
    pub warnings: Vec<String>,
    /// Measured, so it is the one field that varies between otherwise
    /// identical runs.
    pub wall_ms: u64,
}

/// A finished limit-set approximation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitSetResult {
    /// Intersection of the sampled spectrum polygons. Converges onto the
    /// limit set, but chords may cut slightly into it.
    pub polygon: Region,
    /// Intersection of the fattened polygons; contains the limit set.
    pub superset: Region,
    pub diagnostics: Diagnostics,
}

/// Samples `count` radii from `interval` under the given placement rule.
pub fn sample_rhos(interval: &RhoInterval, count: usize, mode: RhoSampling) -> Result<Partition> {
    if count < 1 {
        return Err(Error::Parameter("need at least one radius sample".into()));
    }
    if interval.width() == 0.0 || count == 1 {
        return Partition::new(vec![interval.lo]);
    }
    Partition::new(sample_in(interval.lo, interval.hi, count, mode))
}

/// Intersects spectrum polygons over a uniform grid of `n + 1` radii.
///
/// The first radius initializes the running regions; each of the remaining
/// `n` is intersected in. The returned superset contains the exact limit
/// set whenever the fattening bound does.
pub fn compute_basic(b: &LaurentSymbol, n: usize, m: usize) -> Result<LimitSetResult> {
    if n < 1 {
        return Err(Error::Parameter("need at least one radius step".into()));
    }
    let cfg = SweepConfig { n: n + 1, m, sweeps: 1, ..SweepConfig::default() };
    run(b, &cfg)
}

/// Intersects spectrum polygons in `cfg.sweeps` batches, steering each batch
/// after the first into the radius intervals where an area sweep says the
/// intersection is still shrinking.
pub fn compute_sweep(b: &LaurentSymbol, cfg: &SweepConfig) -> Result<LimitSetResult> {
    run(b, cfg)
}

fn run(b: &LaurentSymbol, cfg: &SweepConfig) -> Result<LimitSetResult> {
    cfg.validate()?;
    let start = Instant::now();

    let (interval, mut warnings) = spectrum::rho_bounds_verbose(b)?;
    let vs = Partition::uniform(0.0, TAU, cfg.m + 1)?;
    let radius = spectrum::frame_radius(b, &interval, vs.granularity())?;
    let frame = FixedPointFrame::tightest(Pt::new(0.0, 0.0), radius)?;

    let mut diag = Diagnostics {
        rho_interval: (interval.lo, interval.hi),
        ..Diagnostics::default()
    };

    // Batch sizes: floor(n / sweeps) each, leftovers go to the final batch.
    let base = cfg.n / cfg.sweeps;
    let sizes: Vec<usize> = (0..cfg.sweeps)
        .map(|k| if k + 1 == cfg.sweeps { cfg.n - base * (cfg.sweeps - 1) } else { base })
        .collect();

    // Sweep state. Probe regions are built on first use; cached reduction
    // values are upper bounds once the intersection has shrunk past them.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let grid = sample_in(interval.lo, interval.hi, cfg.l, cfg.rho_sampling);
    let mut probe_regions: Vec<Option<Region>> = vec![None; cfg.l];
    let mut cache: Vec<Option<f64>> = vec![None; cfg.l];
    let mut prev_threshold = f64::INFINITY;
    let mut prev_selected: Vec<(f64, f64)> = Vec::new();

    let mut batch = sample_in(interval.lo, interval.hi, sizes[0], cfg.rho_sampling);
    let first = spectrum::discretize(b, batch[0], &vs)?;
    let mut polygon = geometry::normalize(&first.region(), &frame)?;
    let mut superset = spectrum::expanded(&first, b, cfg.cbound, &frame)?;
    let mut became_empty = false;
    #[cfg(debug_assertions)]
    let mut last_area = f64::INFINITY;

    for k in 0..cfg.sweeps {
        for (idx, &rho) in batch.iter().enumerate() {
            if k == 0 && idx == 0 {
                continue; // consumed by the initialization
            }
            let sp = spectrum::discretize(b, rho, &vs)?;
            polygon = geometry::intersect(&polygon, &sp.region(), &frame)?;
            let fat = spectrum::expanded(&sp, b, cfg.cbound, &frame)?;
            superset = geometry::intersect(&superset, &fat, &frame)?;
            diag.vertex_counts.push(polygon.vertex_count());
            #[cfg(debug_assertions)]
            {
                let a = geometry::area_of_normalized(&polygon, &frame)?;
                // Intersecting cannot grow the region, but every pass
                // re-snaps crossing vertices to the grid; the area may
                // wobble by up to a quantum per unit of boundary length.
                let wobble = frame.quantum()
                    * polygon
                        .rings
                        .iter()
                        .map(|r| {
                            (0..r.len())
                                .map(|i| {
                                    let p = r[i];
                                    let q = r[(i + 1) % r.len()];
                                    (q.x - p.x).hypot(q.y - p.y)
                                })
                                .sum::<f64>()
                        })
                        .sum::<f64>();
                debug_assert!(
                    a <= last_area + wobble + 1e-12,
                    "area grew from {last_area} to {a}"
                );
                last_area = a;
            }
        }
        if polygon.is_empty() && !became_empty {
            became_empty = true;
            warnings.push(
                "running intersection became empty; at this resolution the limit set is \
                 indistinguishable from a set of measure zero"
                    .into(),
            );
        }
        let lam_area = geometry::area_of_normalized(&polygon, &frame)?;
        diag.polygon_areas.push(lam_area);
        diag.superset_areas.push(geometry::area_of_normalized(&superset, &frame)?);

        if k + 1 == cfg.sweeps {
            break; // nothing left to steer
        }

        // Recompute only probes whose cached value might have moved: never
        // measured, previously at or above the selection threshold, or
        // inside an interval the last batch just intersected.
        let dirty: Vec<usize> = (0..cfg.l)
            .filter(|&j| match cache[j] {
                None => true,
                Some(v) => {
                    v >= prev_threshold
                        || prev_selected.iter().any(|&(a, c)| grid[j] >= a && grid[j] <= c)
                }
            })
            .collect();
        let fresh: Vec<(usize, Region, f64)> = dirty
            .par_iter()
            .map(|&j| -> Result<(usize, Region, f64)> {
                let region = match &probe_regions[j] {
                    Some(r) => r.clone(),
                    None => spectrum::discretize(b, grid[j], &vs)?.region(),
                };
                let cut = geometry::intersect(&polygon, &region, &frame)?;
                let val = lam_area - geometry::area_of_normalized(&cut, &frame)?;
                Ok((j, region, val))
            })
            .collect::<Result<_>>()?;
        for (j, region, val) in fresh {
            if let Some(old) = cache[j] {
                debug_assert!(val <= old + 1e-9, "probe {j} rose from {old} to {val}");
            }
            probe_regions[j] = Some(region);
            cache[j] = Some(val);
        }
        let raw: Vec<f64> = cache.iter().map(|v| v.expect("first sweep fills every probe")).collect();
        let smoothed = moving_average(&raw, cfg.ma_window);
        let max = smoothed.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let threshold = max / cfg.threshold_divisor;
        prev_threshold = threshold;

        // Contiguous probe runs at or above the threshold become radius
        // intervals; jitter pulls both ends inward by a seeded fraction of
        // the local grid spacing so repeated runs do not lock onto the grid.
        let eps: f64 = rng.gen();
        diag.jitters.push(eps);
        let mut selected = Vec::new();
        let mut j = 0;
        while j < cfg.l {
            if smoothed[j] >= threshold {
                let begin = j;
                while j + 1 < cfg.l && smoothed[j + 1] >= threshold {
                    j += 1;
                }
                let a = grid[begin] + eps * spacing_at(&grid, begin, interval.width());
                let c = grid[j] - eps * spacing_at(&grid, j, interval.width());
                if a < c {
                    selected.push((a, c));
                }
            }
            j += 1;
        }

        let next = sizes[k + 1];
        let total: f64 = selected.iter().map(|&(a, c)| c - a).sum();
        if selected.is_empty() || total <= 0.0 {
            warnings.push(format!(
                "sweep {} selected no radius intervals; resampling the whole range",
                k + 1
            ));
            selected = vec![(interval.lo, interval.hi)];
            batch = sample_in(interval.lo, interval.hi, next, RhoSampling::Uniform);
        } else {
            let counts = allocate(next, &selected);
            batch = Vec::with_capacity(next);
            for (&(a, c), &count) in selected.iter().zip(&counts) {
                batch.extend(sample_in(a, c, count, RhoSampling::Uniform));
            }
        }
        diag.selected_intervals.push(selected.clone());
        prev_selected = selected;
    }

    diag.warnings = warnings;
    diag.wall_ms = start.elapsed().as_millis() as u64;
    Ok(LimitSetResult { polygon, superset, diagnostics: diag })
}

/// `count` points from `lo` to `hi` inclusive. Uniform mode spaces them
/// evenly; inverse mode spreads them evenly in the piecewise coordinate that
/// is 1/rho below 1 and rho above, so reciprocals of the sub-unit points are
/// uniform. Degenerate interval or count 1 collapses to `lo`.
fn sample_in(lo: f64, hi: f64, count: usize, mode: RhoSampling) -> Vec<f64> {
    if count == 0 {
        return Vec::new();
    }
    if count == 1 || hi <= lo {
        return vec![lo; count];
    }
    let steps = (count - 1) as f64;
    let mut out: Vec<f64> = match mode {
        RhoSampling::Uniform => (0..count).map(|j| lo + (hi - lo) * j as f64 / steps).collect(),
        RhoSampling::InverseBelowOne => {
            let below = if lo < 1.0 { 1.0 / lo - 1.0 / hi.min(1.0) } else { 0.0 };
            let above = if hi > 1.0 { hi - lo.max(1.0) } else { 0.0 };
            let total = below + above;
            (0..count)
                .map(|j| {
                    let f = total * j as f64 / steps;
                    let rho = if f < below || above == 0.0 {
                        1.0 / (1.0 / lo - f)
                    } else {
                        lo.max(1.0) + (f - below)
                    };
                    rho.clamp(lo, hi)
                })
                .collect()
        }
    };
    out[0] = lo;
    out[count - 1] = hi;
    out
}

/// Grid spacing around index `j`, i.e. the gap to the previous point (or the
/// next, at the left end). `width` stands in for a single-point grid.
fn spacing_at(grid: &[f64], j: usize, width: f64) -> f64 {
    if grid.len() < 2 {
        return width;
    }
    if j == 0 {
        grid[1] - grid[0]
    } else {
        grid[j] - grid[j - 1]
    }
}

/// Centered moving average with the window truncated at the ends.
fn moving_average(vals: &[f64], window: usize) -> Vec<f64> {
    let h = window / 2;
    (0..vals.len())
        .map(|j| {
            let lo = j.saturating_sub(h);
            let hi = (j + h).min(vals.len() - 1);
            vals[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect()
}

/// Splits `total` samples among intervals proportionally to length, handing
/// rounding leftovers to the largest fractional parts (ties to the left).
fn allocate(total: usize, intervals: &[(f64, f64)]) -> Vec<usize> {
    let mass: f64 = intervals.iter().map(|&(a, c)| c - a).sum();
    let mut counts = Vec::with_capacity(intervals.len());
    let mut fracs = Vec::with_capacity(intervals.len());
    let mut assigned = 0usize;
    for (i, &(a, c)) in intervals.iter().enumerate() {
        let quota = total as f64 * (c - a) / mass;
        let base = quota.floor() as usize;
        counts.push(base);
        assigned += base;
        fracs.push((quota - base as f64, i));
    }
    fracs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)));
    for &(_, i) in fracs.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn star() -> LaurentSymbol {
        LaurentSymbol::new([(-4, Complex64::new(1.0, 0.0)), (1, Complex64::new(1.0, 0.0))]).unwrap()
    }

    fn symmetric() -> LaurentSymbol {
        LaurentSymbol::new([(-1, Complex64::new(1.0, 0.0)), (1, Complex64::new(1.0, 0.0))]).unwrap()
    }

    fn small_cfg() -> SweepConfig {
        SweepConfig { n: 24, m: 64, l: 16, sweeps: 3, seed: 7, ..SweepConfig::default() }
    }

    #[test]
    fn uniform_samples_are_evenly_spaced() {
        let interval = RhoInterval::new(1.0, 2.0).unwrap();
        let p = sample_rhos(&interval, 3, RhoSampling::Uniform).unwrap();
        for (got, want) in p.points().iter().zip([1.0, 1.5, 2.0]) {
            assert_relative_eq!(got, &want, max_relative = 1e-12);
        }
    }

    #[test]
    fn inverse_samples_have_uniform_reciprocals_below_one() {
        let interval = RhoInterval::new(0.5, 1.0).unwrap();
        let p = sample_rhos(&interval, 3, RhoSampling::InverseBelowOne).unwrap();
        for (got, want) in p.points().iter().zip([0.5, 2.0 / 3.0, 1.0]) {
            assert_relative_eq!(got, &want, max_relative = 1e-12);
        }
    }

    #[test]
    fn inverse_samples_split_mass_at_one() {
        let interval = RhoInterval::new(0.5, 2.0).unwrap();
        let p = sample_rhos(&interval, 4, RhoSampling::InverseBelowOne).unwrap();
        for (got, want) in p.points().iter().zip([0.5, 0.75, 4.0 / 3.0, 2.0]) {
            assert_relative_eq!(got, &want, max_relative = 1e-12);
        }
    }

    #[test]
    fn degenerate_interval_and_single_count_collapse() {
        let unit = RhoInterval::new(1.0, 1.0).unwrap();
        assert_eq!(sample_rhos(&unit, 5, RhoSampling::InverseBelowOne).unwrap().points(), &[1.0]);
        let interval = RhoInterval::new(0.5, 2.0).unwrap();
        assert_eq!(sample_rhos(&interval, 1, RhoSampling::Uniform).unwrap().points(), &[0.5]);
        assert!(sample_rhos(&interval, 0, RhoSampling::Uniform).is_err());
    }

    #[test]
    fn moving_average_truncates_at_the_ends() {
        assert_eq!(moving_average(&[0.0, 0.0, 6.0, 0.0, 0.0], 3), vec![0.0, 2.0, 2.0, 2.0, 0.0]);
        assert_eq!(moving_average(&[6.0, 0.0, 0.0], 3), vec![3.0, 2.0, 0.0]);
        assert_eq!(moving_average(&[1.0, 5.0, 9.0], 1), vec![1.0, 5.0, 9.0]);
    }

    #[test]
    fn allocation_is_proportional_with_deterministic_ties() {
        let thirds = [(0.0, 1.0), (2.0, 3.0), (5.0, 6.0)];
        assert_eq!(allocate(4, &thirds), vec![2, 1, 1]);
        let skewed = [(0.0, 3.0), (4.0, 5.0), (6.0, 7.0)];
        assert_eq!(allocate(10, &skewed), vec![6, 2, 2]);
        assert_eq!(allocate(0, &thirds), vec![0, 0, 0]);
    }

    #[test]
    fn sweeps_one_matches_basic_bit_for_bit() {
        let cfg = SweepConfig { n: 41, m: 64, sweeps: 1, ..SweepConfig::default() };
        let mut a = compute_sweep(&star(), &cfg).unwrap();
        let mut b = compute_basic(&star(), 40, 64).unwrap();
        a.diagnostics.wall_ms = 0;
        b.diagnostics.wall_ms = 0;
        assert_eq!(a, b);
    }

    #[test]
    fn single_step_intersects_both_endpoint_radii() {
        let result = compute_basic(&star(), 1, 64).unwrap();
        assert_eq!(result.diagnostics.vertex_counts.len(), 1);
        assert_eq!(result.diagnostics.polygon_areas.len(), 1);
        assert!(!result.polygon.is_empty());
    }

    #[test]
    fn same_seed_reproduces_bitwise() {
        let mut a = compute_sweep(&star(), &small_cfg()).unwrap();
        let mut b = compute_sweep(&star(), &small_cfg()).unwrap();
        a.diagnostics.wall_ms = 0;
        b.diagnostics.wall_ms = 0;
        assert_eq!(a, b);
    }

    #[test]
    fn superset_covers_polygon_throughout() {
        let result = compute_sweep(&star(), &small_cfg()).unwrap();
        let d = &result.diagnostics;
        assert_eq!(d.vertex_counts.len(), 23);
        assert_eq!(d.polygon_areas.len(), 3);
        assert_eq!(d.selected_intervals.len(), 2);
        assert_eq!(d.jitters.len(), 2);
        for (sup, sub) in d.superset_areas.iter().zip(&d.polygon_areas) {
            assert!(sup + 1e-9 >= *sub);
        }
        for w in d.polygon_areas.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "batch area rose from {} to {}", w[0], w[1]);
        }
        for &eps in &d.jitters {
            assert!((0.0..1.0).contains(&eps));
        }
        let frame = FixedPointFrame::fit([&result.superset, &result.polygon], 1.0).unwrap();
        let tol = 1e-9 * geometry::area(&result.superset, &frame).unwrap().max(1.0);
        assert!(geometry::covers(&result.superset, &result.polygon, tol, &frame).unwrap());
    }

    #[test]
    fn chain_areas_never_increase() {
        let b = star();
        let (interval, _) = spectrum::rho_bounds_verbose(&b).unwrap();
        let vs = Partition::uniform(0.0, TAU, 65).unwrap();
        let radius = spectrum::frame_radius(&b, &interval, vs.granularity()).unwrap();
        let frame = FixedPointFrame::tightest(Pt::new(0.0, 0.0), radius).unwrap();
        let rhos = sample_in(interval.lo, interval.hi, 12, RhoSampling::Uniform);
        let mut lam =
            geometry::normalize(&spectrum::discretize(&b, rhos[0], &vs).unwrap().region(), &frame)
                .unwrap();
        let mut last = geometry::area(&lam, &frame).unwrap();
        for &rho in &rhos[1..] {
            let sp = spectrum::discretize(&b, rho, &vs).unwrap();
            lam = geometry::intersect(&lam, &sp.region(), &frame).unwrap();
            let a = geometry::area(&lam, &frame).unwrap();
            assert!(a <= last + 1e-9, "area rose from {last} to {a}");
            last = a;
        }
    }

    #[test]
    fn probe_values_only_shrink_as_the_intersection_does() {
        let b = star();
        let (interval, _) = spectrum::rho_bounds_verbose(&b).unwrap();
        let vs = Partition::uniform(0.0, TAU, 65).unwrap();
        let radius = spectrum::frame_radius(&b, &interval, vs.granularity()).unwrap();
        let frame = FixedPointFrame::tightest(Pt::new(0.0, 0.0), radius).unwrap();
        let grid = sample_in(interval.lo, interval.hi, 8, RhoSampling::Uniform);
        let probes: Vec<Region> = grid
            .iter()
            .map(|&rho| spectrum::discretize(&b, rho, &vs).unwrap().region())
            .collect();

        let chain = sample_in(interval.lo, interval.hi, 9, RhoSampling::Uniform);
        let mut lam =
            geometry::normalize(&spectrum::discretize(&b, chain[0], &vs).unwrap().region(), &frame)
                .unwrap();
        let reduce = |lam: &Region| -> Vec<f64> {
            let total = geometry::area(lam, &frame).unwrap();
            probes
                .iter()
                .map(|p| {
                    let cut = geometry::intersect(lam, p, &frame).unwrap();
                    total - geometry::area(&cut, &frame).unwrap()
                })
                .collect()
        };
        for &rho in &chain[1..5] {
            let sp = spectrum::discretize(&b, rho, &vs).unwrap();
            lam = geometry::intersect(&lam, &sp.region(), &frame).unwrap();
        }
        let before = reduce(&lam);
        for &rho in &chain[5..] {
            let sp = spectrum::discretize(&b, rho, &vs).unwrap();
            lam = geometry::intersect(&lam, &sp.region(), &frame).unwrap();
        }
        let after = reduce(&lam);
        for (a, b) in after.iter().zip(&before) {
            assert!(*a <= b + 1e-9, "probe value rose from {b} to {a}");
        }
    }

    #[test]
    fn symmetric_symbol_collapses_to_a_thin_sliver() {
        let result = compute_basic(&symmetric(), 50, 512).unwrap();
        let area = result.diagnostics.polygon_areas.last().copied().unwrap();
        assert!(area < 0.5, "sliver area {area}");
        let (lo, hi) = result.polygon.bbox().unwrap();
        assert!(lo.x > -2.2 && hi.x < 2.2);
        assert!(lo.y > -0.2 && hi.y < 0.2);
        for x in [-1.9, 0.0, 1.9] {
            assert!(result.superset.contains(Pt::new(x, 0.0)), "missing ({x}, 0)");
        }
    }

    #[test]
    fn star_superset_contains_all_five_arm_tips() {
        let result = compute_basic(&star(), 200, 1000).unwrap();
        let r = 5.0 * 4f64.powf(-0.8);
        for k in 0..5 {
            let phi = TAU * k as f64 / 5.0;
            let tip = Pt::new(r * phi.cos(), r * phi.sin());
            assert!(result.superset.contains(tip), "arm tip {k} not covered");
        }
    }

    #[test]
    fn config_validation_rejects_bad_shapes() {
        let ok = SweepConfig::default();
        assert!(ok.validate().is_ok());
        assert!(SweepConfig { n: 0, ..ok.clone() }.validate().is_err());
        assert!(SweepConfig { m: 2, ..ok.clone() }.validate().is_err());
        assert!(SweepConfig { l: 0, ..ok.clone() }.validate().is_err());
        assert!(SweepConfig { sweeps: 0, ..ok.clone() }.validate().is_err());
        assert!(SweepConfig { n: 3, sweeps: 4, ..ok.clone() }.validate().is_err());
        assert!(SweepConfig { ma_window: 4, ..ok.clone() }.validate().is_err());
        assert!(SweepConfig { threshold_divisor: 0.5, ..ok }.validate().is_err());
    }

    #[test]
    fn sampling_mode_parses_from_kebab_case() {
        assert_eq!("uniform".parse::<RhoSampling>().unwrap(), RhoSampling::Uniform);
        assert_eq!(
            "inverse-below-one".parse::<RhoSampling>().unwrap(),
            RhoSampling::InverseBelowOne
        );
        assert!("linear".parse::<RhoSampling>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn inverse_samples_are_uniform_in_the_transform(
            lo in 0.05f64..1.0,
            hi in 1.0f64..5.0,
            count in 3usize..40,
        ) {
            let pts = sample_in(lo, hi, count, RhoSampling::InverseBelowOne);
            prop_assert_eq!(pts.len(), count);
            prop_assert_eq!(pts[0], lo);
            prop_assert_eq!(pts[count - 1], hi);
            // transform: 1/lo - 1/rho below 1, continuing linearly above
            let f = |rho: f64| {
                if rho < 1.0 { 1.0 / lo - 1.0 / rho } else { (1.0 / lo - 1.0) + (rho - 1.0) }
            };
            let gaps: Vec<f64> = pts.windows(2).map(|w| f(w[1]) - f(w[0])).collect();
            let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
            for g in gaps {
                prop_assert!((g - mean).abs() <= 1e-9 * mean.max(1.0));
                prop_assert!(g > 0.0);
            }
        }

        #[test]
        fn allocation_preserves_the_total(
            total in 0usize..40,
            lens in proptest::collection::vec(0.01f64..5.0, 1..6),
        ) {
            let mut intervals = Vec::new();
            let mut x = 0.0;
            for len in &lens {
                intervals.push((x, x + len));
                x += len + 0.1;
            }
            let counts = allocate(total, &intervals);
            prop_assert_eq!(counts.iter().sum::<usize>(), total);
        }
    }
}
