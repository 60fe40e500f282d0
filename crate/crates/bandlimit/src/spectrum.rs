//! Discretized scaled-symbol spectra and the compact interval of scaling
//! radii.
//!
//! For a scaling radius rho, the spectrum of the scaled symbol is the closed
//! curve b(rho e^{iv}) together with everything it winds around. Sampling v
//! on a partition turns the curve into a polygon ([`SpectrumPolygon`]); the
//! sampling error is controlled by the curve's second derivative, so
//! [`expanded`] fattens the polygon region by a rigorous bound and thereby
//! contains the true spectrum. [`rho_bounds`] computes the compact interval
//! of radii outside of which intersections cannot shrink the result further.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{offset_outward, FixedPointFrame, Pt, Region};
use crate::roots::positive_real_roots;
use crate::symbol::{CurvatureBound, LaurentSymbol, RhoInterval};

/// A strictly increasing list of sample points covering a closed interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    points: Vec<f64>,
    granularity: f64,
}

impl Partition {
    /// Validates monotonicity and computes the largest successive gap.
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Parameter("partition needs at least one point".into()));
        }
        if points.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("partition points must be finite".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter("partition points must be strictly increasing".into()));
        }
        let granularity = points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0f64, f64::max);
        Ok(Partition { points, granularity })
    }

    /// Uniform partition with `count` points from `lo` to `hi` inclusive. A
    /// degenerate interval (lo == hi) collapses to the single point lo.
    pub fn uniform(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::Parameter("partition needs at least one point".into()));
        }
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::Parameter(format!("bad partition interval [{lo}, {hi}]")));
        }
        if lo == hi || count == 1 {
            return Self::new(vec![lo]);
        }
        let steps = (count - 1) as f64;
        let mut points: Vec<f64> = (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / steps)
            .collect();
        points[count - 1] = hi;
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Largest gap between successive points (zero for a single point).
    pub fn granularity(&self) -> f64 {
        self.granularity
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The image polygon of one scaled symbol circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPolygon {
    /// Closed ring of curve samples, duplicate endpoint dropped.
    pub ring: Vec<Pt>,
    pub rho: f64,
    /// Granularity of the angular partition the ring was sampled on.
    pub delta_v: f64,
}

impl SpectrumPolygon {
    /// The polygon and its winding region under the nonzero fill rule.
    pub fn region(&self) -> Region {
        Region::from_ring(self.ring.clone())
    }
}

/// Computes the compact interval of scaling radii worth intersecting over.
///
/// Outside it, one of the extreme coefficients dominates the rest of the
/// symbol on the whole circle of radius rho, which forces all r (resp. s)
/// small roots strictly inside (resp. outside) and keeps the scaled spectrum
/// from cutting the intersection further. Each endpoint solves a cleared
/// real-coefficient polynomial equation; the interval always brackets 1.
pub fn rho_bounds(b: &LaurentSymbol) -> Result<RhoInterval> {
    rho_bounds_verbose(b).map(|(interval, _)| interval)
}

/// Like [`rho_bounds`], also returning warnings for degenerate fallbacks.
pub fn rho_bounds_verbose(b: &LaurentSymbol) -> Result<(RhoInterval, Vec<String>)> {
    let r = b.r() as i64;
    let s = b.s() as i64;
    let deg = (r + s) as usize;
    let k = b.coeff_sup_bound();
    let mut warnings = Vec::new();

    // |beta_-r| - sum_{n > -r} |beta_n| rho^{n+r} - K rho^r = 0
    let mut low = vec![0.0f64; deg + 1];
    for (n, c) in b.terms() {
        if n == -r {
            low[0] += c.norm();
        } else {
            low[(n + r) as usize] -= c.norm();
        }
    }
    low[r as usize] -= k;

    // |beta_s| rho^{s+r} - sum_{n < s} |beta_n| rho^{n+r} - K rho^r = 0
    let mut high = vec![0.0f64; deg + 1];
    for (n, c) in b.terms() {
        if n == s {
            high[deg] += c.norm();
        } else {
            high[(n + r) as usize] -= c.norm();
        }
    }
    high[r as usize] -= k;

    let lo = match positive_real_roots(&low)?.first() {
        Some(&root) => root.min(1.0),
        None => {
            warnings.push("no positive root for the lower radius bound; falling back to 1".into());
            1.0
        }
    };
    let hi = match positive_real_roots(&high)?.last() {
        Some(&root) => root.max(1.0),
        None => {
            warnings.push("no positive root for the upper radius bound; falling back to 1".into());
            1.0
        }
    };
    Ok((RhoInterval::new(lo, hi)?, warnings))
}

/// Samples the scaled symbol circle on an angular partition of [0, 2pi].
///
/// Vertex j is exactly `eval(b, rho e^{i v_j})`; the duplicated endpoint
/// sample at 2pi is dropped so the ring closes implicitly.
pub fn discretize(b: &LaurentSymbol, rho: f64, vs: &Partition) -> Result<SpectrumPolygon> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("scaling radius must be positive, got {rho}")));
    }
    let pts = vs.points();
    let first = *pts.first().expect("partition is nonempty");
    let last = *pts.last().expect("partition is nonempty");
    if first.abs() > 1e-9 || (last - TAU).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "angular partition must cover [0, 2pi], got [{first}, {last}]"
        )));
    }
    let m = pts.len() - 1;
    if m < 3 {
        return Err(Error::Degenerate(format!(
            "angular partition needs at least 3 segments, got {m}"
        )));
    }
    let mut ring = Vec::with_capacity(m);
    for &v in &pts[..m] {
        let z = Complex64::from_polar(rho, v);
        let w = b.eval(z)?;
        ring.push(Pt::new(w.re, w.im));
    }
    Ok(SpectrumPolygon { ring, rho, delta_v: vs.granularity() })
}

/// Fattens a spectrum polygon so it provably contains the exact scaled
/// spectrum: the sampling error of a chord against the curve is at most
/// `C delta_v^2` with C a second-derivative bound, and the offset adds at
/// least that everywhere (and at most twice it).
pub fn expanded(
    sp: &SpectrumPolygon,
    b: &LaurentSymbol,
    mode: CurvatureBound,
    frame: &FixedPointFrame,
) -> Result<Region> {
    let c = b.second_derivative_bound(sp.rho, mode)?;
    let delta = c * sp.delta_v * sp.delta_v;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!(
            "expansion radius must be positive and finite, got {delta}"
        )));
    }
    offset_outward(&sp.region(), delta, 2.0 * delta, frame)
}

/// Radius of a disk around the origin that certainly contains every scaled
/// spectrum polygon and its expansion, for sizing fixed-point frames.
pub fn frame_radius(b: &LaurentSymbol, interval: &RhoInterval, delta_v: f64) -> Result<f64> {
    let mut radius = 0.0f64;
    for rho in [interval.lo, interval.hi] {
        let mut sum = 0.0;
        let mut c = 0.0;
        for (n, coeff) in b.terms() {
            sum += coeff.norm() * rho.powi(n as i32);
            c += 2.0 * (n * n) as f64 * coeff.norm() * rho.powi(n as i32);
        }
        radius = radius.max(sum + 2.0 * c * delta_v * delta_v);
    }
    if !radius.is_finite() {
        return Err(Error::Domain("symbol magnitude overflows".into()));
    }
    Ok(radius)
}
