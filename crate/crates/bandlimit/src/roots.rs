//! Polynomial root finding for the spectral pipeline.
//!
//! All downstream consumers need *every* root of modest-degree complex
//! polynomials (degree r + s, occasionally a few hundred), found
//! deterministically: identical coefficient lists must produce bit-identical
//! root lists so that pipeline runs and certificates reproduce exactly.
//! The simultaneous Aberth-Ehrlich iteration fits: one pass refines all roots
//! together, cubic convergence for simple roots, no per-root deflation drift.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients at or below this fraction of the largest magnitude are
/// treated as zero when determining degree and factoring out zero roots.
const STRIP_REL: f64 = 1e-14;

/// Normalized-residual target: |p(z)| <= RESIDUAL_REL * sum|c| * max(1,|z|)^deg.
const RESIDUAL_REL: f64 = 1e-10;

/// Iteration cap for the simultaneous refinement.
const MAX_ITERATIONS: usize = 1000;

/// Imaginary-part gate for accepting a computed root as real.
const REAL_IM_REL: f64 = 1e-9;

/// Absolute width target for the bisection polish of real roots.
const BISECTION_TOL: f64 = 1e-12;

/// All roots of a polynomial plus convergence evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    /// Roots sorted by (modulus, argument); length equals the degree after
    /// leading-coefficient stripping.
    pub roots: Vec<Complex64>,
    /// Max over roots of |p(z)| / (sum|c| * max(1,|z|)^deg).
    pub residual: f64,
    /// Simultaneous-iteration sweeps actually used.
    pub iterations: usize,
}

/// Horner evaluation of p and p' at z. Coefficients ascending.
fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::ZERO;
    let mut dp = Complex64::ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn normalized_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let scale: f64 = coeffs.iter().map(|c| c.norm()).sum();
    let deg = coeffs.len() as i32 - 1;
    let (p, _) = eval_with_derivative(coeffs, z);
    p.norm() / (scale * z.norm().max(1.0).powi(deg))
}

/// Finds all roots of sum c_k z^k, coefficients ascending in k.
///
/// Near-zero leading coefficients are stripped (relative threshold 1e-14), so
/// the returned count equals the stripped degree; near-zero low-order
/// coefficients become explicit zero roots. Fails with the best iterate
/// attached when the residual target cannot be met.
pub fn all_roots(coeffs: &[Complex64]) -> Result<RootSet> {
    let max_mag = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max_mag == 0.0 {
        return Err(Error::DegeneratePolynomial { degree: 0 });
    }
    let cut = STRIP_REL * max_mag;
    let high = match coeffs.iter().rposition(|c| c.norm() > cut) {
        Some(h) => h,
        None => return Err(Error::DegeneratePolynomial { degree: 0 }),
    };
    if high == 0 {
        return Err(Error::DegeneratePolynomial { degree: 0 });
    }
    let stripped: Vec<Complex64> = coeffs[..=high]
        .iter()
        .map(|&c| if c.norm() > cut { c } else { Complex64::ZERO })
        .collect();
    // Zero roots: factor out the leading run of zero coefficients.
    let low = stripped.iter().position(|c| *c != Complex64::ZERO).unwrap();
    let reduced = &stripped[low..];
    let deg = reduced.len() - 1;

    let mut roots = vec![Complex64::ZERO; low];
    let mut iterations = 0;
    if deg > 0 {
        let (found, iters) = aberth(reduced)?;
        iterations = iters;
        roots.extend(found);
    }

    for z in &roots {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::RootConvergence {
                iterations,
                residual: f64::INFINITY,
                best: roots.clone(),
            });
        }
    }
    roots.sort_unstable_by(|a, b| {
        (a.norm(), a.arg())
            .partial_cmp(&(b.norm(), b.arg()))
            .expect("finite roots compare totally")
    });

    let residual = roots
        .iter()
        .map(|&z| normalized_residual(&stripped, z))
        .fold(0.0, f64::max);
    if residual > RESIDUAL_REL {
        return Err(Error::RootConvergence {
            iterations,
            residual,
            best: roots,
        });
    }
    Ok(RootSet {
        roots,
        residual,
        iterations,
    })
}

/// Simultaneous iteration core. `coeffs` has nonzero constant and leading terms.
fn aberth(coeffs: &[Complex64]) -> Result<(Vec<Complex64>, usize)> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let constant = coeffs[0];

    // Deterministic starts: a circle at the geometric balance radius
    // (exact for z^d - a), with an irrational phase offset so symmetric
    // polynomials do not begin on their own symmetry axes.
    let radius = (constant.norm() / lead.norm()).powf(1.0 / deg as f64);
    let radius = if radius.is_finite() && radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex64> = (0..deg)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / deg as f64 + 0.7391;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    for it in 0..MAX_ITERATIONS {
        let mut moved = 0.0_f64;
        for i in 0..deg {
            let (p, dp) = eval_with_derivative(coeffs, z[i]);
            if p == Complex64::ZERO {
                continue;
            }
            if dp == Complex64::ZERO {
                // Stationary point of p: nudge off it deterministically.
                let nudge = Complex64::new(1e-6 * (1.0 + z[i].norm()), 1e-6);
                z[i] += nudge;
                moved = f64::INFINITY;
                continue;
            }
            let newton = p / dp;
            let mut repulsion = Complex64::ZERO;
            for j in 0..deg {
                if j != i {
                    let mut d = z[i] - z[j];
                    if d == Complex64::ZERO {
                        d = Complex64::new(1e-12 * (1.0 + z[i].norm()), 1e-12);
                    }
                    repulsion += Complex64::new(1.0, 0.0) / d;
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom == Complex64::ZERO { newton } else { newton / denom };
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved <= 1e-14 {
            return Ok((z, it + 1));
        }
    }
    Ok((z, MAX_ITERATIONS))
}

/// Positive real roots of a real-coefficient polynomial, ascending.
///
/// Complex roots pass the real gate when |Im z| <= 1e-9 (1 + |Re z|); accepted
/// values are polished by bisection when a sign change brackets them, to an
/// absolute width of 1e-12. Roots of even multiplicity carry no sign change
/// and keep their iterated value.
pub fn positive_real_roots(coeffs: &[f64]) -> Result<Vec<f64>> {
    let complex: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let set = all_roots(&complex)?;
    let mut out: Vec<f64> = set
        .roots
        .iter()
        .filter(|z| z.im.abs() <= REAL_IM_REL * (1.0 + z.re.abs()) && z.re > 0.0)
        .map(|z| polish_real_root(coeffs, z.re))
        .collect();
    out.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    Ok(out)
}

fn eval_real(coeffs: &[f64], x: f64) -> f64 {
    let mut p = 0.0;
    for &c in coeffs.iter().rev() {
        p = p * x + c;
    }
    p
}

fn polish_real_root(coeffs: &[f64], x0: f64) -> f64 {
    // Expand a bracket around x0 until the sign changes; give up at a
    // relative width of 1e-3 (even-multiplicity roots never bracket).
    let scale = 1.0 + x0.abs();
    let mut h = 1e-9 * scale;
    let (mut lo, mut hi) = loop {
        let (lo, hi) = (x0 - h, x0 + h);
        let (flo, fhi) = (eval_real(coeffs, lo), eval_real(coeffs, hi));
        if flo == 0.0 {
            return lo;
        }
        if fhi == 0.0 {
            return hi;
        }
        if flo.signum() != fhi.signum() {
            break (lo, hi);
        }
        h *= 4.0;
        if h > 1e-3 * scale {
            return x0;
        }
    };
    let flo = eval_real(coeffs, lo);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fmid = eval_real(coeffs, mid);
        if fmid == 0.0 {
            return mid;
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Gap |z_{r+1}| - |z_r| between the r-th and (r+1)-th smallest root moduli
/// (1-indexed). This is the membership functional: a point lies in the limit
/// set exactly when the gap vanishes.
pub fn middle_moduli_gap(roots: &[Complex64], r: usize) -> Result<f64> {
    if r == 0 {
        return Err(Error::Parameter("middle index r must be >= 1".into()));
    }
    if roots.len() < r + 1 {
        return Err(Error::RootArity {
            needed: r + 1,
            got: roots.len(),
        });
    }
    let mut moduli: Vec<f64> = roots.iter().map(|z| z.norm()).collect();
    moduli.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite moduli"));
    Ok(moduli[r] - moduli[r - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent oracle: plain bisection for a sign change of a real
    /// polynomial on [lo, hi].
    fn bisection_oracle(coeffs: &[f64], mut lo: f64, mut hi: f64) -> f64 {
        let flo = eval_real(coeffs, lo);
        assert!(
            flo.signum() != eval_real(coeffs, hi).signum(),
            "oracle interval must bracket"
        );
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if eval_real(coeffs, mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn quadratic_pure_imaginary_pair() {
        let set = all_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(set.roots.len(), 2);
        // sorted by (modulus, argument): -i before i
        assert_abs_diff_eq!(set.roots[0].im, -1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(set.roots[1].im, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(set.roots[0].re, 0.0, epsilon = 1e-10);
        assert!(set.residual <= RESIDUAL_REL);
    }

    #[test]
    fn quintic_roots_of_minus_one() {
        let mut coeffs = vec![c(0.0, 0.0); 6];
        coeffs[0] = c(1.0, 0.0);
        coeffs[5] = c(1.0, 0.0);
        let set = all_roots(&coeffs).unwrap();
        assert_eq!(set.roots.len(), 5);
        for z in &set.roots {
            assert_abs_diff_eq!(z.norm(), 1.0, epsilon = 1e-10);
            let fifth = z.powi(5);
            assert_abs_diff_eq!(fifth.re, -1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(fifth.im, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn cubic_with_integer_roots() {
        let set = all_roots(&[c(-6.0, 0.0), c(11.0, 0.0), c(-6.0, 0.0), c(1.0, 0.0)]).unwrap();
        let want = [1.0, 2.0, 3.0];
        for (z, w) in set.roots.iter().zip(want) {
            assert_abs_diff_eq!(z.re, w, epsilon = 1e-9);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn double_root_converges_within_residual() {
        let set = all_roots(&[c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(set.roots.len(), 2);
        for z in &set.roots {
            assert!((z - c(1.0, 0.0)).norm() <= 1e-5, "double root drifted: {z}");
        }
    }

    #[test]
    fn zero_roots_from_low_coefficients() {
        // z^2 (z - 3): low zeros become explicit roots at the origin.
        let set = all_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(set.roots.len(), 3);
        assert_eq!(set.roots[0], Complex64::ZERO);
        assert_eq!(set.roots[1], Complex64::ZERO);
        assert_abs_diff_eq!(set.roots[2].re, 3.0, epsilon = 1e-10);
    }

    #[test]
    fn leading_zeros_reduce_degree() {
        // [1, 1, ~0]: degree drops to 1 after stripping.
        let set = all_roots(&[c(1.0, 0.0), c(1.0, 0.0), c(1e-20, 0.0)]).unwrap();
        assert_eq!(set.roots.len(), 1);
        assert_abs_diff_eq!(set.roots[0].re, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_polynomials_error() {
        assert!(matches!(
            all_roots(&[c(5.0, 0.0)]),
            Err(Error::DegeneratePolynomial { .. })
        ));
        assert!(matches!(
            all_roots(&[]),
            Err(Error::DegeneratePolynomial { .. })
        ));
        assert!(matches!(
            all_roots(&[c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::DegeneratePolynomial { .. })
        ));
    }

    #[test]
    fn determinism_bit_for_bit() {
        let coeffs = [c(-0.3, 0.8), c(1.5, -0.2), c(0.0, 0.0), c(0.7, 0.1), c(1.0, 0.25)];
        let a = all_roots(&coeffs).unwrap();
        let b = all_roots(&coeffs).unwrap();
        assert_eq!(a.roots.len(), b.roots.len());
        for (x, y) in a.roots.iter().zip(&b.roots) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn scaling_interval_roots_match_bisection_oracle() {
        // rho^5 + 2 rho^4 - 1: smallest positive root.
        let poly = [-1.0, 0.0, 0.0, 0.0, 2.0, 1.0];
        let want = bisection_oracle(&poly, 0.7, 0.8);
        let got = positive_real_roots(&poly).unwrap();
        assert!(!got.is_empty());
        assert_abs_diff_eq!(got[0], want, epsilon = 1e-6);

        // rho^5 - 2 rho^4 - 1: largest positive root.
        let poly = [-1.0, 0.0, 0.0, 0.0, -2.0, 1.0];
        let want = bisection_oracle(&poly, 2.0, 2.1);
        let got = positive_real_roots(&poly).unwrap();
        assert!(!got.is_empty());
        assert_abs_diff_eq!(*got.last().unwrap(), want, epsilon = 1e-6);
    }

    #[test]
    fn no_positive_real_roots_of_irreducible_quadratic() {
        assert!(positive_real_roots(&[1.0, 0.0, 1.0]).unwrap().is_empty());
    }

    #[test]
    fn moduli_gap_examples() {
        // z^5 + 1: all moduli equal, gap vanishes at every split.
        let mut coeffs = vec![c(0.0, 0.0); 6];
        coeffs[0] = c(1.0, 0.0);
        coeffs[5] = c(1.0, 0.0);
        let set = all_roots(&coeffs).unwrap();
        assert_abs_diff_eq!(middle_moduli_gap(&set.roots, 4).unwrap(), 0.0, epsilon = 1e-9);

        // (z - 1/2)(z - 2): gap at r = 1 is 1.5.
        let set = all_roots(&[c(1.0, 0.0), c(-2.5, 0.0), c(1.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(middle_moduli_gap(&set.roots, 1).unwrap(), 1.5, epsilon = 1e-9);

        // (z - 1)^2: coincident moduli.
        let set = all_roots(&[c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(middle_moduli_gap(&set.roots, 1).unwrap() <= 1e-5);

        assert!(matches!(
            middle_moduli_gap(&set.roots, 2),
            Err(Error::RootArity { .. })
        ));
        assert!(matches!(
            middle_moduli_gap(&set.roots, 0),
            Err(Error::Parameter(_))
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_coeffs() -> impl Strategy<Value = Vec<Complex64>> {
            // Degree <= 20, coefficients in the unit disk, leading coefficient
            // kept away from zero so the stated degree is the true degree.
            let inner = (-1.0..1.0f64, -1.0..1.0f64);
            (prop::collection::vec(inner, 1..20), 0.5..1.0f64, 0.0..6.28f64).prop_map(
                |(low, lead_mag, lead_arg)| {
                    let mut coeffs: Vec<Complex64> =
                        low.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
                    coeffs.push(Complex64::from_polar(lead_mag, lead_arg));
                    coeffs
                },
            )
        }

        /// Multiplies out lead * (z - z_1)...(z - z_d), ascending coefficients.
        fn reconstruct(lead: Complex64, roots: &[Complex64]) -> Vec<Complex64> {
            // Built descending, reversed once at the end.
            let mut poly = vec![lead];
            for &root in roots {
                poly.push(Complex64::ZERO);
                for j in (1..poly.len()).rev() {
                    let prev = poly[j - 1];
                    poly[j] += prev * -root;
                }
            }
            poly.reverse();
            poly
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            /// Coefficients rebuilt from the computed roots match the input.
            #[test]
            fn reconstruction_round_trip(coeffs in arb_coeffs()) {
                let deg = coeffs.len() - 1;
                prop_assume!(deg >= 1);
                let set = match all_roots(&coeffs) {
                    Ok(s) => s,
                    // Ill-conditioned draws may legitimately fail to converge;
                    // the contract is "converge or say so".
                    Err(Error::RootConvergence { .. }) => return Ok(()),
                    Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
                };
                prop_assert_eq!(set.roots.len(), deg);
                let rebuilt = reconstruct(coeffs[deg], &set.roots);
                let scale: f64 = coeffs.iter().map(|c| c.norm()).sum();
                for (a, b) in rebuilt.iter().zip(&coeffs) {
                    prop_assert!((a - b).norm() <= 1e-6 * scale,
                        "coefficient drift {} vs {}", a, b);
                }
            }

            /// Accepted positive real roots satisfy the residual bound.
            #[test]
            fn positive_real_residual(coeffs in prop::collection::vec(-1.0..1.0f64, 3..12)) {
                let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
                prop_assume!(max > 0.1 && coeffs.last().unwrap().abs() > 0.1);
                let roots = match positive_real_roots(&coeffs) {
                    Ok(r) => r,
                    Err(Error::RootConvergence { .. }) => return Ok(()),
                    Err(Error::DegeneratePolynomial { .. }) => return Ok(()),
                    Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
                };
                let scale: f64 = coeffs.iter().map(|c| c.abs()).sum();
                let deg = coeffs.len() as i32 - 1;
                for rho in roots {
                    let bound = 1e-9 * scale * rho.max(1.0).powi(deg);
                    prop_assert!(eval_real(&coeffs, rho).abs() <= bound,
                        "rho = {} residual {} > {}", rho, eval_real(&coeffs, rho).abs(), bound);
                }
            }
        }
    }
}
