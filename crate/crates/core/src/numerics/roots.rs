//! All roots of a complex polynomial.
//!
//! Coefficients are stored in ascending order, `c[0] + c[1] z + ... + c[D] z^D`.
//! The primary route takes the eigenvalues of the balanced companion matrix
//! (complex Schur form) and polishes them with Newton steps; Aberth-Ehrlich
//! simultaneous iteration is the fallback when that route misses the
//! residual bound.

use nalgebra::{DMatrix, Schur};

use crate::{Error, Result, C64};

/// Coefficients smaller than this fraction of the largest are dropped from the top.
const TRIM_REL: f64 = 1e-14;
/// Relative residual bound every returned root must meet.
const RESIDUAL_REL: f64 = 1e-6;
const ABERTH_MAX_ITER: usize = 500;

/// Horner evaluation of an ascending coefficient vector.
pub fn poly_eval(coeffs: &[C64], z: C64) -> C64 {
    coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn eval_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let zero = C64::new(0.0, 0.0);
    coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| (p * z + c, dp * z + p))
}

/// Monic polynomial with the given roots, ascending coefficients.
pub fn poly_from_roots(roots: &[C64]) -> Vec<C64> {
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![C64::new(0.0, 0.0); coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

/// Validates and trims `coeffs`, returning the effective coefficients and the
/// scale `max |c|` used by the residual bound.
fn prepare(coeffs: &[C64]) -> Result<(Vec<C64>, f64)> {
    if coeffs.is_empty() {
        return Err(Error::EmptyInput("polynomial coefficients"));
    }
    if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::NonFinite("polynomial coefficients"));
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::DegeneratePolynomial("all coefficients are zero"));
    }
    let mut len = coeffs.len();
    while len > 1 && coeffs[len - 1].norm() < TRIM_REL * scale {
        len -= 1;
    }
    if len < 2 {
        return Err(Error::DegeneratePolynomial("degree zero"));
    }
    Ok((coeffs[..len].to_vec(), scale))
}

fn residual_ok(coeffs: &[C64], scale: f64, root: C64) -> bool {
    let degree = (coeffs.len() - 1) as i32;
    let bound = RESIDUAL_REL * scale * root.norm().max(1.0).powi(degree);
    let value = poly_eval(coeffs, root);
    value.re.is_finite() && value.im.is_finite() && value.norm() <= bound
}

/// Companion matrix of the monic version of `coeffs`, balanced by powers of two.
fn balanced_companion(coeffs: &[C64]) -> DMatrix<C64> {
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree];
    let mut m = DMatrix::<C64>::zeros(degree, degree);
    for i in 1..degree {
        m[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..degree {
        m[(i, degree - 1)] = -coeffs[i] / lead;
    }

    // Parlett-Reinsch balancing with radix 2 so the scaling is exact.
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..degree {
            let col: f64 = (0..degree).filter(|&r| r != i).map(|r| m[(r, i)].norm()).sum();
            let row: f64 = (0..degree).filter(|&c| c != i).map(|c| m[(i, c)].norm()).sum();
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let mut c = col;
            let mut r = row;
            let total = c + r;
            while c < r / 2.0 {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while c >= r * 2.0 {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if c + r < 0.95 * total {
                converged = false;
                for k in 0..degree {
                    m[(i, k)] /= f;
                    m[(k, i)] *= f;
                }
            }
        }
    }
    m
}

fn companion_roots(coeffs: &[C64]) -> Option<Vec<C64>> {
    let companion = balanced_companion(coeffs);
    let schur = Schur::try_new(companion, f64::EPSILON, 10_000)?;
    let (_, t) = schur.unpack();
    let roots: Vec<C64> = t.diagonal().iter().copied().collect();
    roots
        .iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
        .then_some(roots)
}

/// Newton steps that are kept only while they shrink the residual.
fn polish(coeffs: &[C64], root: C64) -> C64 {
    let mut z = root;
    let mut best = poly_eval(coeffs, z).norm();
    for _ in 0..4 {
        let (p, dp) = eval_with_derivative(coeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let candidate = z - p / dp;
        let value = poly_eval(coeffs, candidate).norm();
        if value.is_finite() && value < best {
            z = candidate;
            best = value;
        } else {
            break;
        }
    }
    z
}

fn aberth_iterate(coeffs: &[C64], mut z: Vec<C64>) -> Vec<C64> {
    let n = z.len();
    for _ in 0..ABERTH_MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: C64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        C64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 4.0 * f64::EPSILON {
            break;
        }
    }
    z
}

/// Initial guesses on a circle sized by the geometric mean of the roots,
/// offset in angle so no guess sits on the real axis.
fn circle_guesses(coeffs: &[C64]) -> Vec<C64> {
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree].norm();
    let constant = coeffs[0].norm();
    let radius = if constant > 0.0 {
        (constant / lead).powf(1.0 / degree as f64)
    } else {
        1.0
    };
    (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            C64::from_polar(radius, angle)
        })
        .collect()
}

/// Roots by Aberth-Ehrlich iteration alone, from circle initial guesses.
pub fn aberth_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let (trimmed, scale) = prepare(coeffs)?;
    let roots = aberth_iterate(&trimmed, circle_guesses(&trimmed));
    if roots.iter().all(|&r| residual_ok(&trimmed, scale, r)) {
        Ok(roots)
    } else {
        Err(Error::Numerical("Aberth iteration did not converge".into()))
    }
}

/// All `D` roots (with multiplicity) of the polynomial with ascending
/// coefficients `coeffs`, after trimming negligible leading coefficients.
pub fn poly_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let (trimmed, scale) = prepare(coeffs)?;

    if let Some(raw) = companion_roots(&trimmed) {
        let roots: Vec<C64> = raw.into_iter().map(|r| polish(&trimmed, r)).collect();
        if roots.iter().all(|&r| residual_ok(&trimmed, scale, r)) {
            return Ok(roots);
        }
        let refined = aberth_iterate(&trimmed, roots);
        if refined.iter().all(|&r| residual_ok(&trimmed, scale, r)) {
            return Ok(refined);
        }
    }

    let roots = aberth_iterate(&trimmed, circle_guesses(&trimmed));
    if roots.iter().all(|&r| residual_ok(&trimmed, scale, r)) {
        Ok(roots)
    } else {
        Err(Error::Numerical(format!(
            "no root set of the degree-{} polynomial met the residual bound",
            trimmed.len() - 1
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Greedy nearest matching of two root multisets; returns the worst distance.
    fn match_distance(found: &[C64], expect: &[C64]) -> f64 {
        let mut pool = found.to_vec();
        let mut worst: f64 = 0.0;
        for e in expect {
            let (idx, d) = pool
                .iter()
                .enumerate()
                .map(|(i, r)| (i, (r - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            worst = worst.max(d);
            pool.swap_remove(idx);
        }
        worst
    }

    #[test]
    fn z_squared_minus_one() {
        let r = poly_roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(match_distance(&r, &[c(1.0, 0.0), c(-1.0, 0.0)]) < 1e-14);
    }

    #[test]
    fn z_squared_plus_one() {
        let r = poly_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(match_distance(&r, &[c(0.0, 1.0), c(0.0, -1.0)]) < 1e-14);
    }

    #[test]
    fn recovers_constructed_roots() {
        let expect = [
            C64::from_polar(0.9, PI / 4.0),
            C64::from_polar(1.0 / 0.9, PI / 4.0),
            C64::from_polar(1.0, -PI / 3.0),
            C64::from_polar(1.0, PI / 3.0),
        ];
        let coeffs = poly_from_roots(&expect);
        let r = poly_roots(&coeffs).unwrap();
        assert_eq!(r.len(), 4);
        assert!(match_distance(&r, &expect) < 1e-8);
        let r = aberth_roots(&coeffs).unwrap();
        assert!(match_distance(&r, &expect) < 1e-8);
    }

    #[test]
    fn trims_negligible_leading_terms() {
        let r = poly_roots(&[c(-2.0, 0.0), c(1.0, 0.0), c(1e-20, 0.0)]).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn zero_roots_are_found() {
        // z^3 - z = z (z - 1)(z + 1)
        let r = poly_roots(&[c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(match_distance(&r, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]) < 1e-12);
    }

    #[test]
    fn error_paths() {
        assert!(matches!(poly_roots(&[]), Err(Error::EmptyInput(_))));
        assert!(matches!(
            poly_roots(&[c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::DegeneratePolynomial(_))
        ));
        assert!(matches!(
            poly_roots(&[c(3.0, 0.0)]),
            Err(Error::DegeneratePolynomial(_))
        ));
        assert!(matches!(
            poly_roots(&[c(3.0, 0.0), c(f64::NAN, 0.0)]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn double_root_on_unit_circle() {
        let z0 = C64::from_polar(1.0, 1.234);
        let expect = [z0, z0, c(0.3, 0.1), c(3.0, -0.5)];
        let r = poly_roots(&poly_from_roots(&expect)).unwrap();
        // a double root is conditioned like sqrt(eps)
        assert!(match_distance(&r, &expect) < 1e-6);
    }
}
