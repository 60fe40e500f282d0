//! Certified Hausdorff distance between the point subset and the superset.
//!
//! With a certified subset S of the limit set and a superset region E of it,
//! any bound on d_H(S, E) bounds both one-sided errors at once: the true set
//! lies between them, so d_H(S, limit set) and d_H(E, limit set) are each at
//! most d_H(S, E). The bound comes from a bisection over the fattening
//! radius: S fattened by r covers E exactly when d_H(S, E) <= r would hold
//! for disks, and the polygonal stand-ins for disks cost one cosine factor.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebraic::{subset_verbose, SubsetPoints, DEFAULT_MEMBERSHIP_TOL};
use crate::error::{Error, Result};
use crate::geometry::{area, covers, fatten_points, FixedPointFrame, Pt, Region};
use crate::limitset::{compute_sweep, LimitSetResult, SweepConfig};
use crate::symbol::LaurentSymbol;

/// Sides of the regular polygons standing in for disks during fattening.
pub const DEFAULT_SIDES: usize = 20;

/// Default relative width at which the radius bisection stops.
pub const DEFAULT_REL_TOL: f64 = 1e-3;

/// Fraction of the superset area tolerated as uncovered by a feasible
/// radius. Absorbs grid-snapping slivers, nothing more.
const COVER_AREA_REL: f64 = 1e-9;

/// Bounds the Hausdorff distance between `sub` and `sup`.
///
/// Returns `(r_star, lower)` with `lower = r_star * cos(pi/sides)` exactly.
/// `r_star` is the smallest radius found whose fattening of `sub` covers
/// `sup`; the fattening polygons circumscribe the radius-`r` disks, so
/// coverage at `r` proves every superset point is within `r / cos(pi/sides)`
/// of `sub`, and failure to cover at `r` proves some point is farther than
/// `r`. Hence `lower <= d_H(sub, sup) <= r_star` holds rigorously on the
/// lower side whenever `rel_tol <= 1 - cos(pi/sides)` (true for the
/// defaults), and on the upper side up to the same cosine factor, which is
/// attained only when the farthest superset point hides in a polygon-corner
/// direction; for disk-like extremes aligned with an edge normal the upper
/// bound is exact.
///
/// Every `sub` point is expected inside `sup`; stragglers are reported and
/// the result then bounds only the directed distance from `sup` to `sub`.
pub fn distance_bound(
    sub: &SubsetPoints,
    sup: &Region,
    sides: usize,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    distance_bound_verbose(sub, sup, sides, rel_tol).map(|(pair, _)| pair)
}

/// Like [`distance_bound`], also returning notes about precondition
/// violations and search-ceiling extensions.
pub fn distance_bound_verbose(
    sub: &SubsetPoints,
    sup: &Region,
    sides: usize,
    rel_tol: f64,
) -> Result<((f64, f64), Vec<String>)> {
    if sides < 3 {
        return Err(Error::Parameter(format!("fattening needs at least 3 sides, got {sides}")));
    }
    if !(rel_tol > 0.0 && rel_tol <= 0.5) {
        return Err(Error::Parameter(format!(
            "bisection tolerance must lie in (0, 0.5], got {rel_tol}"
        )));
    }
    if sub.is_empty() {
        return Err(Error::Input("subset is empty; nothing to fatten".into()));
    }
    if sup.is_empty() {
        return Err(Error::Input("superset is empty; nothing to cover".into()));
    }

    let mut warnings = Vec::new();
    let pts: Vec<Pt> = sub.points().iter().map(|z| Pt::new(z.re, z.im)).collect();
    let outside = pts.iter().filter(|p| !sup.contains(**p)).count();
    if outside > 0 {
        warnings.push(format!(
            "{outside} of {} subset points lie outside the superset; the result bounds \
             only the directed distance from the superset to the subset",
            pts.len()
        ));
    }

    let (slo, shi) = sup.bbox().expect("nonempty region has a bounding box");
    let diag = (shi.x - slo.x).hypot(shi.y - slo.y);
    if !(diag > 0.0) {
        return Err(Error::Degenerate("superset bounding box has no extent".into()));
    }

    // Frame centered on everything the probes will touch, rebuilt if the
    // ceiling has to grow. The fattened polygons reach hi/cos(pi/sides)
    // beyond the subset points.
    let cos_half = (PI / sides as f64).cos();
    let (mut clo, mut chi) = (slo, shi);
    for p in &pts {
        clo = Pt::new(clo.x.min(p.x), clo.y.min(p.y));
        chi = Pt::new(chi.x.max(p.x), chi.y.max(p.y));
    }
    let center = Pt::new(0.5 * (clo.x + chi.x), 0.5 * (clo.y + chi.y));
    let base_half = 0.5 * ((chi.x - clo.x).max(chi.y - clo.y));
    let build = |ceiling: f64| -> Result<(FixedPointFrame, f64)> {
        let frame = FixedPointFrame::tightest(center, base_half + 1.02 * ceiling / cos_half)?;
        let tol = COVER_AREA_REL * area(sup, &frame)?;
        Ok((frame, tol))
    };

    let mut lo = 0.0;
    let mut hi = diag;
    let (mut frame, mut area_tol) = build(hi)?;
    let feasible = |r: f64, frame: &FixedPointFrame, area_tol: f64| -> Result<bool> {
        covers(&fatten_points(&pts, r, sides, frame)?, sup, area_tol, frame)
    };
    let mut growth = 0;
    while !feasible(hi, &frame, area_tol)? {
        growth += 1;
        if growth > 48 {
            return Err(Error::Degenerate(
                "fattened subset never covered the superset; inputs are unbounded or disjoint"
                    .into(),
            ));
        }
        lo = hi;
        hi *= 2.0;
        (frame, area_tol) = build(hi)?;
    }
    if growth > 0 {
        warnings.push(format!(
            "search ceiling grew {growth} time(s) beyond the superset diagonal {diag:.6e}"
        ));
    }

    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if feasible(mid, &frame, area_tol)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(((hi, hi * cos_half), warnings))
}

/// Everything a certified run produces: the bound, the regions it compared,
/// the certified points, and accumulated notes.
#[derive(Clone, Debug)]
pub struct Certification {
    pub certificate: ErrorCertificate,
    pub result: LimitSetResult,
    pub subset: SubsetPoints,
    pub warnings: Vec<String>,
}

/// Inputs recorded alongside a certified bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateParams {
    pub sweep: SweepConfig,
    pub phi_count: usize,
    pub membership_tol: f64,
    pub rel_tol: f64,
}

/// A self-contained record of one certified error bound: the limit set lies
/// within `r_star` of the certified subset and of the computed superset, in
/// the Hausdorff metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorCertificate {
    pub r_star: f64,
    pub lower: f64,
    pub sides: usize,
    pub sub_size: usize,
    pub params: CertificateParams,
}

impl ErrorCertificate {
    /// Stable pretty JSON; field order is fixed, no timing or host state.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Runs the whole certified pipeline: superset via [`compute_sweep`], subset
/// via the self-intersection candidates at `phi_count` angles, then the
/// fattening bisection between them.
pub fn certify(
    b: &LaurentSymbol,
    cfg: &SweepConfig,
    phi_count: usize,
    membership_tol: f64,
    sides: usize,
    rel_tol: f64,
) -> Result<Certification> {
    if phi_count == 0 {
        return Err(Error::Input("need at least one turn angle for the certified subset".into()));
    }
    let result = compute_sweep(b, cfg)?;
    let mut warnings = result.diagnostics.warnings.clone();
    if result.superset.is_empty() {
        return Err(Error::Degenerate(
            "superset came out empty; nothing to certify against".into(),
        ));
    }
    let (subset, ws) = subset_verbose(b, phi_count, membership_tol)?;
    warnings.extend(ws);
    let ((r_star, lower), ws) = distance_bound_verbose(&subset, &result.superset, sides, rel_tol)?;
    warnings.extend(ws);
    let certificate = ErrorCertificate {
        r_star,
        lower,
        sides,
        sub_size: subset.len(),
        params: CertificateParams {
            sweep: cfg.clone(),
            phi_count,
            membership_tol,
            rel_tol,
        },
    };
    Ok(Certification { certificate, result, subset, warnings })
}

/// [`certify`] with the default tolerances, returning just the certificate.
pub fn error_certificate(
    b: &LaurentSymbol,
    cfg: &SweepConfig,
    phi_count: usize,
) -> Result<ErrorCertificate> {
    certify(b, cfg, phi_count, DEFAULT_MEMBERSHIP_TOL, DEFAULT_SIDES, DEFAULT_REL_TOL)
        .map(|c| c.certificate)
}
