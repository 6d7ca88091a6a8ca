//! Fixed-step integration of the equations of motion and a numerical
//! linearization used to cross-check the characteristic roots.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Model, State};
use crate::equilibria::EquilibriumPoint;
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::stability::oracle;

/// One classical Runge-Kutta step.
pub fn step_rk4(model: &Model, s: &State, h: f64) -> Result<State> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::Precondition(format!(
            "step must be positive, got {h}"
        )));
    }
    let k1 = model.rhs(s)?;
    let k2 = model.rhs(&s.offset(&k1, h / 2.0))?;
    let k3 = model.rhs(&s.offset(&k2, h / 2.0))?;
    let k4 = model.rhs(&s.offset(&k3, h))?;
    let mut incr = [0.0; 4];
    for i in 0..4 {
        incr[i] = (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
    }
    Ok(s.offset(&incr, h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub state: State,
    /// Jacobi integral at the sample.
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Completed,
    /// The state stopped being finite; samples end at the last finite one.
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub step: f64,
    pub params: SystemParams,
    pub termination: Termination,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples
            .last()
            .expect("a trajectory always holds its initial sample")
    }

    /// Largest `|C(t) - C(0)|` over the samples.
    pub fn max_jacobi_drift(&self) -> f64 {
        let c0 = self.samples[0].c;
        self.samples
            .iter()
            .map(|s| (s.c - c0).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub step: f64,
    /// Keep every n-th step; the final step is always kept.
    pub record_every: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            step: 1e-3,
            record_every: 100,
        }
    }
}

/// Integrate from `t = 0` to `t_end`; the last step is shortened to land on `t_end`.
pub fn integrate(
    model: &Model,
    s0: State,
    t_end: f64,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    let h = opts.step;
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::Precondition(format!(
            "step must be positive, got {h}"
        )));
    }
    if !t_end.is_finite() || t_end < 0.0 {
        return Err(Error::Precondition(format!(
            "end time must be finite and >= 0, got {t_end}"
        )));
    }
    if opts.record_every == 0 {
        return Err(Error::Precondition(
            "record_every must be at least 1".into(),
        ));
    }
    if !s0.is_finite() {
        return Err(Error::Precondition("initial state is not finite".into()));
    }
    let full_steps = (t_end / h * (1.0 + 1e-12)).floor() as u64;
    let remainder = t_end - full_steps as f64 * h;
    let tail = remainder > 1e-12 * h.max(t_end);
    let total = full_steps + u64::from(tail);

    let mut samples = vec![Sample {
        t: 0.0,
        state: s0,
        c: model.jacobi(&s0)?,
    }];
    let mut s = s0;
    let mut termination = Termination::Completed;
    for k in 1..=total {
        let (dt, t) = if k > full_steps {
            (remainder, t_end)
        } else {
            (h, k as f64 * h)
        };
        let next = step_rk4(model, &s, dt)?;
        if !next.is_finite() {
            termination = Termination::NonFinite;
            break;
        }
        s = next;
        if k % opts.record_every as u64 == 0 || k == total {
            samples.push(Sample {
                t,
                state: s,
                c: model.jacobi(&s)?,
            });
        }
    }
    Ok(Trajectory {
        samples,
        step: h,
        params: *model.params(),
        termination,
    })
}

/// Central-difference Jacobian of the first-order system at a state.
pub fn numerical_jacobian(model: &Model, s: &State, h: f64) -> Result<[[f64; 4]; 4]> {
    let base = s.to_array();
    let mut jac = [[0.0; 4]; 4];
    for j in 0..4 {
        let mut plus = base;
        let mut minus = base;
        plus[j] += h;
        minus[j] -= h;
        let fp = model.rhs(&State::from_array(plus))?;
        let fm = model.rhs(&State::from_array(minus))?;
        for i in 0..4 {
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Monic characteristic polynomial `det(l I - M)` as `[c1, c2, c3, c4]`.
pub fn char_poly_4x4(m: &[[f64; 4]; 4]) -> [f64; 4] {
    // Faddeev-LeVerrier recursion
    let mut coeffs = [0.0; 4];
    let mut mk = [[0.0; 4]; 4];
    let mut prev = [[0.0; 4]; 4];
    for (i, row) in prev.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut c_prev = 1.0;
    for k in 1..=4 {
        // mk = M * (prev + c_prev I), with prev holding M_{k-1}
        let mut inner = prev;
        if k > 1 {
            for (i, row) in inner.iter_mut().enumerate() {
                row[i] += c_prev;
            }
        } else {
            inner = [[0.0; 4]; 4];
            for (i, row) in inner.iter_mut().enumerate() {
                row[i] = 1.0;
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                mk[i][j] = (0..4).map(|l| m[i][l] * inner[l][j]).sum();
            }
        }
        let trace: f64 = (0..4).map(|i| mk[i][i]).sum();
        let c = -trace / k as f64;
        coeffs[k - 1] = c;
        prev = mk;
        c_prev = c;
    }
    coeffs
}

pub const VARIATIONAL_STEP: f64 = 1e-7;

/// Bound on the entrywise disagreement between the `h` and `h/2` Jacobians.
pub const VARIATIONAL_AGREEMENT: f64 = 1e-5;

/// Eigenvalues of the numerically differenced linear flow at a rest point.
pub fn variational_eigs(model: &Model, point: &EquilibriumPoint) -> Result<[Complex64; 4]> {
    let s = State::at_rest(point.x, point.y);
    let jac = numerical_jacobian(model, &s, VARIATIONAL_STEP)?;
    let half = numerical_jacobian(model, &s, VARIATIONAL_STEP / 2.0)?;
    let disagreement = jac
        .iter()
        .flatten()
        .zip(half.iter().flatten())
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    if disagreement > VARIATIONAL_AGREEMENT {
        return Err(Error::IllConditioned { disagreement });
    }
    oracle::solve_quartic(char_poly_4x4(&jac))
}
