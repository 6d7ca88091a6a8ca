//! Critical mass ratios of the triangular points without drag.

use serde::{Deserialize, Serialize};

use crate::equilibria::bisect;
use crate::error::{Error, Result};

/// Constant, `A2` and `eps` coefficients of the linear expansions for `k = 1, 2, 3`.
pub const SERIES: [[f64; 3]; 3] = [
    [0.0385208965, 0.6755841373, -0.0089174706],
    [0.0242938971, 0.4322031625, -0.0055364958],
    [0.0135160160, 0.2430452832, -0.0030452832],
];

/// The expansions are only meaningful for small `A2` and `eps`.
pub const SERIES_VALIDITY: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalMass {
    /// Resonance order in `omega1 = k omega2`.
    pub k: u32,
    /// `k^2 / (k^2 + 1)^2`.
    pub big_k: f64,
    pub mu_k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesEstimate {
    pub k: u32,
    pub mu_k: f64,
    /// Whether `A2` and `eps` are both inside the expansion's range.
    pub in_range: bool,
}

pub fn resonance_factor(k: u32) -> f64 {
    let k2 = f64::from(k * k);
    k2 / ((k2 + 1.0) * (k2 + 1.0))
}

/// `(1 - A2)(1 - q1^(2/3)(1 - A2)/4)`.
pub fn g_factor(q1: f64, a2: f64) -> f64 {
    (1.0 - a2) * (1.0 - q1.cbrt().powi(2) * (1.0 - a2) / 4.0)
}

fn check_inputs(k: u32, q1: f64, a2: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            value: 0.0,
            reason: "resonance order must be at least 1",
        });
    }
    if !(0.0..=1.0).contains(&q1) {
        return Err(Error::InvalidParameter {
            name: "q1",
            value: q1,
            reason: "must lie in [0, 1]",
        });
    }
    if !(a2 >= 0.0 && a2.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "a2",
            value: a2,
            reason: "must be finite and >= 0",
        });
    }
    Ok(())
}

/// Smaller root in `mu` of the resonance condition `omega1 = k omega2`.
///
/// `g` stays regular at `q1 = 0`, so that endpoint is accepted.
pub fn critical_mass(k: u32, q1: f64, a2: f64) -> Result<CriticalMass> {
    check_inputs(k, q1, a2)?;
    let big_k = resonance_factor(k);
    let g = g_factor(q1, a2);
    let radicand = 9.0 * g - 4.0 * big_k + 9.0 * big_k * a2 * a2;
    if g < 0.0 {
        return Err(Error::NegativeRadicand(g));
    }
    if radicand < 0.0 {
        return Err(Error::NegativeRadicand(radicand));
    }
    let num = 3.0 * g + 2.0 * big_k * a2 + 3.0 * big_k * a2 * a2 - g.sqrt() * radicand.sqrt();
    let den = 6.0 * (g + big_k * a2 * a2);
    if den == 0.0 {
        return Err(Error::Degenerate(
            "vanishing denominator in the critical mass".into(),
        ));
    }
    Ok(CriticalMass {
        k,
        big_k,
        mu_k: num / den,
    })
}

/// Linear expansion of the critical mass about `q1 = 1`, `A2 = 0`.
pub fn critical_mass_series(k: u32, a2: f64, eps: f64) -> Result<SeriesEstimate> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidParameter {
            name: "k",
            value: f64::from(k),
            reason: "expansions exist for k = 1, 2, 3",
        });
    }
    let [c0, ca, ce] = SERIES[(k - 1) as usize];
    Ok(SeriesEstimate {
        k,
        mu_k: c0 + ca * a2 + ce * eps,
        in_range: a2.abs() <= SERIES_VALIDITY && eps.abs() <= SERIES_VALIDITY,
    })
}

/// `4d - b^2` for the no-drag triangular quartic as a function of `mu`.
pub fn routh_discriminant(mu: f64, q1: f64, a2: f64) -> f64 {
    let b = 1.0 + 1.5 * a2 - 3.0 * mu * a2;
    let d = 9.0 * mu * (1.0 - mu) * g_factor(q1, a2);
    4.0 * d - b * b
}

/// Mass ratio at which the no-drag triangular points lose stability.
pub fn routh_boundary(q1: f64, a2: f64) -> Result<f64> {
    check_inputs(1, q1, a2)?;
    bisect(|mu| Ok(routh_discriminant(mu, q1, a2)), 0.0, 0.5)
}
