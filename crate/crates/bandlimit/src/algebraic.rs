//! Certified interior points of the limit set from root equations.
//!
//! A point lambda lies in the limit set exactly when the r-th and (r+1)-th
//! smallest root moduli of z^r (b(z) - lambda) coincide. Candidates come
//! from two finite equations: self-intersections of the spectrum curve
//! (b(z) = b(z e^{i phi}) for sampled turns phi) and critical points
//! (b'(z) = 0). Candidates that pass the membership test form a certified
//! subset of the limit set; together with the geometric superset they
//! sandwich it.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::roots::all_roots;
use crate::symbol::LaurentSymbol;

/// Default modulus-equality tolerance for membership tests.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-7;

/// Grid pitch for candidate deduplication. Coarser than root accuracy,
/// much finer than any feature of interest; membership is the final arbiter
/// for whatever survives.
const DEDUP_PITCH: f64 = 1e-9;

/// Middle roots closer than this (relative to their size) are treated as a
/// cluster and re-resolved with a local quadratic before the gap test.
const CLUSTER_REL: f64 = 1e-3;

/// Points certified to lie in the limit set.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetPoints {
    points: Vec<Complex64>,
    tol: f64,
}

impl SubsetPoints {
    /// Wraps an arbitrary point sample so it can flow through the distance
    /// machinery. Carries no membership certificate of its own; `tol` is
    /// recorded as given.
    pub fn from_points(points: Vec<Complex64>, tol: f64) -> Self {
        Self { points, tol }
    }

    /// Certified points, sorted by (re, im).
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Modulus-equality tolerance every stored point passed.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// One "re,im" row per point.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            out.push_str(&format!("{},{}\n", p.re, p.im));
        }
        out
    }
}

/// Tests whether `lambda` lies in the limit set: the middle two moduli of
/// the roots of z^r (b(z) - lambda) must agree within `tol`.
///
/// A failed solve is reported with the offending lambda attached.
pub fn membership(b: &LaurentSymbol, lambda: Complex64, tol: f64) -> Result<bool> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Parameter(format!(
            "membership tolerance must be positive, got {tol}"
        )));
    }
    let coeffs = b.q_polynomial(lambda);
    let set = all_roots(&coeffs).map_err(|e| Error::Membership {
        lambda,
        source: Box::new(e),
    })?;
    let r = b.r();
    let mut moduli: Vec<f64> = set.roots.iter().map(|z| z.norm()).collect();
    // Roots arrive sorted by modulus, so positions r-1 and r are the pair
    // under test. A nearly double root sits at the bottom of a quadratic
    // well the iteration cannot split below sqrt(eps); when the pair is
    // spatially clustered, one exact quadratic solve at its midpoint
    // restores both roots (and the gap) to full precision.
    let za = set.roots[r - 1];
    let zb = set.roots[r];
    if (za - zb).norm() <= CLUSTER_REL * za.norm().max(1.0) {
        if let Some((wa, wb)) = split_cluster(&coeffs, 0.5 * (za + zb)) {
            moduli[r - 1] = wa.norm();
            moduli[r] = wb.norm();
        }
    }
    moduli.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite moduli"));
    Ok(moduli[r] - moduli[r - 1] <= tol)
}

/// Both roots of the quadratic Taylor model of p around z0. None when the
/// second derivative is too small to trust (triple or flatter cluster).
fn split_cluster(coeffs: &[Complex64], z0: Complex64) -> Option<(Complex64, Complex64)> {
    let (p, dp, half_d2) = horner2(coeffs, z0);
    let scale: f64 = coeffs.iter().map(|c| c.norm()).sum();
    let deg = coeffs.len() as i32 - 1;
    if half_d2.norm() <= 1e-8 * scale * z0.norm().max(1.0).powi(deg - 2) {
        return None;
    }
    let disc = (dp * dp - 4.0 * p * half_d2).sqrt();
    let wa = z0 + (-dp + disc) / (2.0 * half_d2);
    let wb = z0 + (-dp - disc) / (2.0 * half_d2);
    Some((wa, wb))
}

/// p, p' and p''/2 at z, coefficients ascending.
fn horner2(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, Complex64) {
    let mut p = Complex64::ZERO;
    let mut dp = Complex64::ZERO;
    let mut d2 = Complex64::ZERO;
    for &c in coeffs.iter().rev() {
        d2 = d2 * z + dp;
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp, d2)
}

/// Candidate limit-set points for the given turn angles.
pub fn candidate_points(b: &LaurentSymbol, phis: &[f64]) -> Result<Vec<Complex64>> {
    candidate_points_verbose(b, phis).map(|(points, _)| points)
}

/// Like [`candidate_points`], also returning notes about degenerate angles.
///
/// For each phi the polynomial with coefficient beta_n (1 - e^{i n phi}) at
/// z^{n+r} collects every z where the spectrum curve meets itself after a
/// turn by phi; the critical points of b join them independently of phi.
/// Candidate values are b at the nonzero roots, deduplicated on a 1e-9 grid
/// and sorted. An angle whose polynomial collapses (every exponent kills its
/// factor) is skipped with a note.
pub fn candidate_points_verbose(
    b: &LaurentSymbol,
    phis: &[f64],
) -> Result<(Vec<Complex64>, Vec<String>)> {
    if phis.is_empty() {
        return Err(Error::Parameter("need at least one turn angle".into()));
    }
    let r = b.r() as i64;
    let len = b.r() + b.s() + 1;
    // Structural-zero cut on the symbol's own scale: a turn factor that
    // should vanish exactly (n phi a multiple of 2 pi) only reaches ~1e-15
    // in floating point, while a genuine factor for the angles in use stays
    // many orders above. Without this, an all-cancelled polynomial would
    // look like a valid one with uniformly tiny coefficients.
    let cut = 1e-12 * b.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);

    let per_phi: Vec<Option<Vec<Complex64>>> = phis
        .par_iter()
        .map(|&phi| {
            let mut coeffs = vec![Complex64::ZERO; len];
            for (n, c) in b.terms() {
                let turn = Complex64::from_polar(1.0, n as f64 * phi);
                let coeff = c * (Complex64::new(1.0, 0.0) - turn);
                if coeff.norm() > cut {
                    coeffs[(n + r) as usize] = coeff;
                }
            }
            values_at_roots(b, &coeffs).ok()
        })
        .collect();

    let mut warnings = Vec::new();
    let degenerate = per_phi.iter().filter(|v| v.is_none()).count();
    if degenerate > 0 {
        warnings.push(format!(
            "{degenerate} of {} turn angles produced a degenerate polynomial and were skipped",
            phis.len()
        ));
    }

    let mut seen = std::collections::BTreeSet::new();
    let mut points = Vec::new();
    let mut push = |lam: Complex64| {
        if lam.re.is_finite() && lam.im.is_finite() && seen.insert(dedup_key(lam)) {
            points.push(lam);
        }
    };
    for lams in per_phi.into_iter().flatten() {
        for lam in lams {
            push(lam);
        }
    }
    for lam in values_at_roots(b, &b.derivative_polynomial())? {
        push(lam);
    }
    points.sort_unstable_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite"));
    Ok((points, warnings))
}

/// b evaluated at every nonzero root of the polynomial.
fn values_at_roots(b: &LaurentSymbol, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let set = all_roots(coeffs)?;
    set.roots
        .iter()
        .filter(|z| z.norm() > 1e-12)
        .map(|&z| b.eval(z))
        .collect()
}

fn dedup_key(z: Complex64) -> (i64, i64) {
    ((z.re / DEDUP_PITCH).round() as i64, (z.im / DEDUP_PITCH).round() as i64)
}

/// The certified subset for `n` turn angles pi k / n, k = 1..=n.
pub fn subset(b: &LaurentSymbol, n: usize, tol: f64) -> Result<SubsetPoints> {
    subset_verbose(b, n, tol).map(|(s, _)| s)
}

/// Like [`subset`], also returning diagnostics.
///
/// Angles cover (0, pi]: the self-intersection equation for phi and 2 pi -
/// phi produce conjugate candidate sets, so the upper half adds nothing.
/// Candidates whose membership solve fails are dropped with a note; losing
/// a candidate can only shrink the subset, never un-certify it.
pub fn subset_verbose(
    b: &LaurentSymbol,
    n: usize,
    tol: f64,
) -> Result<(SubsetPoints, Vec<String>)> {
    if n < 1 {
        return Err(Error::Parameter("need at least one turn sample".into()));
    }
    let phis: Vec<f64> = (1..=n).map(|k| PI * k as f64 / n as f64).collect();
    let (candidates, mut warnings) = candidate_points_verbose(b, &phis)?;
    let verdicts: Vec<Option<bool>> = candidates
        .par_iter()
        .map(|&lam| membership(b, lam, tol).ok())
        .collect();
    let mut points = Vec::with_capacity(candidates.len());
    let mut failed = 0usize;
    for (&lam, verdict) in candidates.iter().zip(&verdicts) {
        match verdict {
            Some(true) => points.push(lam),
            Some(false) => {}
            None => failed += 1,
        }
    }
    if failed > 0 {
        warnings.push(format!("{failed} candidate membership solves failed and were dropped"));
    }
    Ok((SubsetPoints { points, tol }, warnings))
}
