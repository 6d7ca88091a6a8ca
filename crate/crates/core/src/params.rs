//! Problem parameters and the scalars derived from them.
//!
//! Units are normalized: the sum of the primaries' masses, their separation
//! and the gravitational constant are all one. The radiating primary of mass
//! `1 - mu` sits at `(-mu, 0)` and the oblate secondary at `(1 - mu, 0)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensionless speed of light used unless overridden.
pub const DEFAULT_CD: f64 = 299_792_458.0;

/// Mass ratio used throughout the reference results (roughly Sun-Earth).
pub const DEFAULT_MU: f64 = 0.00003;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Mass ratio `m2 / (m1 + m2)`, in `(0, 1/2)`.
    pub mu: f64,
    /// Mass-reduction factor of the radiating primary, in `[0, 1]`.
    pub q1: f64,
    /// Oblateness coefficient of the secondary.
    pub a2: f64,
    /// Dimensionless speed of light.
    pub c_d: f64,
}

/// Quantities that follow from [`SystemParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// Perturbed mean motion, `n^2 = 1 + 3 A2 / 2`.
    pub n: f64,
    /// Poynting-Robertson drag strength `(1 - mu)(1 - q1) / c_d`.
    pub w1: f64,
    /// `q1^(1/3)`.
    pub delta: f64,
}

impl SystemParams {
    pub fn new(mu: f64, q1: f64, a2: f64, c_d: f64) -> Result<Self> {
        let p = SystemParams { mu, q1, a2, c_d };
        p.validate()?;
        Ok(p)
    }

    /// No radiation pressure, spherical secondary.
    pub fn classical(mu: f64) -> Self {
        SystemParams {
            mu,
            q1: 1.0,
            a2: 0.0,
            c_d: DEFAULT_CD,
        }
    }

    /// Parameters at the default mass ratio and speed of light.
    pub fn with_defaults(q1: f64, a2: f64) -> Self {
        SystemParams {
            mu: DEFAULT_MU,
            q1,
            a2,
            c_d: DEFAULT_CD,
        }
    }

    pub fn with_mu(self, mu: f64) -> Self {
        SystemParams { mu, ..self }
    }

    pub fn with_q1(self, q1: f64) -> Self {
        SystemParams { q1, ..self }
    }

    pub fn with_a2(self, a2: f64) -> Self {
        SystemParams { a2, ..self }
    }

    pub fn with_cd(self, c_d: f64) -> Self {
        SystemParams { c_d, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name, value: f64, ok: bool, reason| {
            if value.is_nan() || !ok {
                Err(Error::InvalidParameter {
                    name,
                    value,
                    reason,
                })
            } else {
                Ok(())
            }
        };
        check(
            "mu",
            self.mu,
            self.mu > 0.0 && self.mu < 0.5,
            "must lie in (0, 1/2)",
        )?;
        check(
            "q1",
            self.q1,
            (0.0..=1.0).contains(&self.q1),
            "must lie in [0, 1]",
        )?;
        check(
            "a2",
            self.a2,
            self.a2 >= 0.0 && self.a2.is_finite(),
            "must be finite and >= 0",
        )?;
        check(
            "c_d",
            self.c_d,
            self.c_d > 0.0 && self.c_d.is_finite(),
            "must be finite and > 0",
        )?;
        Ok(())
    }

    /// `q1 = 0` is representable but most formulas have no value there.
    pub fn is_degenerate(&self) -> bool {
        self.q1 == 0.0
    }

    pub fn derive(&self) -> Result<DerivedParams> {
        self.validate()?;
        Ok(DerivedParams {
            n: (1.0 + 1.5 * self.a2).sqrt(),
            w1: (1.0 - self.mu) * (1.0 - self.q1) / self.c_d,
            delta: self.q1.cbrt(),
        })
    }

    /// Error unless `q1 > 0`.
    pub(crate) fn require_nondegenerate(&self, what: &str) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::Degenerate(format!("{what} is undefined for q1 = 0")))
        } else {
            Ok(())
        }
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams::classical(DEFAULT_MU)
    }
}

impl DerivedParams {
    pub fn n2(&self) -> f64 {
        self.n * self.n
    }

    pub fn has_drag(&self) -> bool {
        self.w1 != 0.0
    }
}
