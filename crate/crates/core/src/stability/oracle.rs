//! General-purpose quartic solver used as ground truth for the closed forms.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Iteration cap for the simultaneous iteration.
pub const MAX_ITERATIONS: usize = 500;

/// `l^4 + a l^3 + b l^2 + c l + d` and its derivative at `z`.
pub fn eval_quartic(coeffs: [f64; 4], z: Complex64) -> (Complex64, Complex64) {
    let [a, b, c, d] = coeffs;
    let p = (((z + a) * z + b) * z + c) * z + d;
    let dp = ((z * 4.0 + 3.0 * a) * z + 2.0 * b) * z + c;
    (p, dp)
}

pub fn residual(coeffs: [f64; 4], z: Complex64) -> f64 {
    eval_quartic(coeffs, z).0.norm()
}

/// Target residual for a converged root.
pub fn tolerance(coeffs: [f64; 4]) -> f64 {
    1e-12 * coeffs[3].abs().max(1.0)
}

/// Roots of the monic quartic by Durand-Kerner iteration followed by a
/// Newton polish and conjugate pairing.
pub fn solve_quartic(coeffs: [f64; 4]) -> Result<[Complex64; 4]> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Degenerate("non-finite quartic coefficients".into()));
    }
    let [a, b, c, d] = coeffs;
    // Cauchy bound on the root moduli
    let radius = 1.0 + a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    let seed = Complex64::from_polar(0.4 * radius.min(10.0) + 0.1, 0.0);
    let w = Complex64::from_polar(1.0, 0.9);
    let mut z = [seed, seed * w, seed * w * w, seed * w * w * w];
    let tol = tolerance(coeffs);

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut delta: f64 = 0.0;
        for i in 0..4 {
            let (p, _) = eval_quartic(coeffs, z[i]);
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..4 {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-300, 0.0);
            }
            let step = p / den;
            z[i] -= step;
            delta = delta.max(step.norm() / z[i].norm().max(1.0));
        }
        if delta < 1e-15 || z.iter().all(|&r| residual(coeffs, r) < tol * 1e-2) {
            converged = true;
            break;
        }
    }

    for r in z.iter_mut() {
        polish(coeffs, r);
    }
    symmetrize(coeffs, &mut z);
    let worst = z.iter().map(|&r| residual(coeffs, r)).fold(0.0, f64::max);
    // clusters of repeated roots converge slowly but are accepted once the residual is small
    if worst < tol || (converged && worst < 1e3 * tol) {
        Ok(z)
    } else {
        Err(Error::NoConvergence {
            iterations: MAX_ITERATIONS,
            residual: worst,
        })
    }
}

fn polish(coeffs: [f64; 4], r: &mut Complex64) {
    for _ in 0..5 {
        let (p, dp) = eval_quartic(coeffs, *r);
        if dp.norm() == 0.0 {
            return;
        }
        let next = *r - p / dp;
        if residual(coeffs, next) < residual(coeffs, *r) {
            *r = next;
        } else {
            return;
        }
    }
}

/// Make the set closed under conjugation: near-real roots become real and
/// the remaining roots are replaced by averaged conjugate pairs.
fn symmetrize(coeffs: [f64; 4], z: &mut [Complex64; 4]) {
    let scale = |r: Complex64| r.norm().max(1.0);
    let mut used = [false; 4];
    let mut out = Vec::with_capacity(4);
    for i in 0..4 {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut best: Option<(usize, f64)> = None;
        for j in 0..4 {
            if !used[j] {
                let dist = (z[j] - z[i].conj()).norm();
                if best.is_none_or(|(_, b)| dist < b) {
                    best = Some((j, dist));
                }
            }
        }
        let re_only = Complex64::new(z[i].re, 0.0);
        let real_ok = z[i].im.abs() <= 1e-9 * scale(z[i])
            && residual(coeffs, re_only) <= residual(coeffs, z[i]).max(tolerance(coeffs));
        match best {
            Some((j, dist)) if !real_ok && dist <= 1e-6 * scale(z[i]) => {
                used[j] = true;
                let m = Complex64::new(
                    0.5 * (z[i].re + z[j].re),
                    0.5 * (z[i].im.abs() + z[j].im.abs()),
                );
                out.push(m);
                out.push(m.conj());
            }
            _ if real_ok => out.push(re_only),
            _ => out.push(z[i]),
        }
    }
    for (slot, r) in z.iter_mut().zip(out) {
        *slot = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut r: [Complex64; 4]) -> [Complex64; 4] {
        r.sort_by(|p, q| (p.re, p.im).partial_cmp(&(q.re, q.im)).unwrap());
        r
    }

    #[test]
    fn factorable_quartic() {
        let r = sorted(solve_quartic([0.0, 1.0, 0.0, 0.0]).unwrap());
        let mut zeros = 0;
        let mut units = 0;
        for z in r {
            if z.norm() < 1e-7 {
                zeros += 1;
            } else if (z.norm() - 1.0).abs() < 1e-12 && z.re.abs() < 1e-12 {
                units += 1;
            }
        }
        assert_eq!((zeros, units), (2, 2));
    }

    #[test]
    fn double_imaginary_pairs() {
        let r = solve_quartic([0.0, 2.0, 0.0, 1.0]).unwrap();
        for z in r {
            assert!((z.im.abs() - 1.0).abs() < 1e-7 && z.re.abs() < 1e-7, "{z}");
        }
    }

    #[test]
    fn distinct_real_roots() {
        // (l-1)(l-2)(l-3)(l-4)
        let r = sorted(solve_quartic([-10.0, 35.0, -50.0, 24.0]).unwrap());
        for (k, z) in r.iter().enumerate() {
            assert!((z.re - (k + 1) as f64).abs() < 1e-12 && z.im == 0.0);
        }
    }

    #[test]
    fn conjugate_closed() {
        let r = solve_quartic([0.3, 1.2, -0.4, 0.1]).unwrap();
        for z in r {
            assert!(r.iter().any(|w| (*w - z.conj()).norm() < 1e-14));
        }
    }
}
