//! Characteristic quartic at an equilibrium, its roots and the resulting
//! linear-stability classification.

pub mod critical;
pub mod oracle;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::dynamics::Model;
use crate::equilibria::EquilibriumPoint;
use crate::error::{Error, Result};

pub use critical::{
    critical_mass, critical_mass_series, routh_boundary, CriticalMass, SeriesEstimate,
};

/// Default bound on `|Re l|` below which a root counts as imaginary.
pub const DEFAULT_THRESHOLD: f64 = 1e-9;

/// Coefficients of `l^4 + a l^3 + b l^2 + c l + d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// Auxiliary `e` with `c = -a (1 + e)`.
    pub e_aux: f64,
    /// Auxiliary `f = (1 - mu) q1 / r1^3 + mu / r2^3 (1 + 3 A2 / (2 r2^2))`.
    pub f_aux: f64,
    /// `(1 - A2)(1 - q1^(2/3)(1 - A2)/4)`.
    pub g_aux: f64,
}

impl CharCoeffs {
    pub fn poly(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_poly(model: &Model, [a, b, c, d]: [f64; 4], f_aux: f64, e_fallback: f64) -> Self {
        let p = model.params();
        let e_aux = if a != 0.0 { -c / a - 1.0 } else { e_fallback };
        CharCoeffs {
            a,
            b,
            c,
            d,
            e_aux,
            f_aux,
            g_aux: critical::g_factor(p.q1, p.a2),
        }
    }
}

/// Which expression of the quartic to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoeffModel {
    /// Expanded from the analytic linearization of the full equations.
    #[default]
    Exact,
    /// The closed-form coefficient block expressed through `f`, `e` and the radii.
    Printed,
}

impl FromStr for CoeffModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(CoeffModel::Exact),
            "printed" => Ok(CoeffModel::Printed),
            _ => Err(format!("unknown coefficient model {s:?}")),
        }
    }
}

struct Geometry {
    x1: f64,
    y: f64,
    r1: f64,
    r2: f64,
    f: f64,
    e: f64,
}

fn geometry(model: &Model, x: f64, y: f64) -> Result<Geometry> {
    let p = model.params();
    p.require_nondegenerate("the characteristic quartic")?;
    let (mu, a2) = (p.mu, p.a2);
    let dist = model.distances(x, y)?;
    let (r1, r2) = (dist.r1, dist.r2);
    let f = (1.0 - mu) * p.q1 / r1.powi(3) + mu / r2.powi(3) * (1.0 + 1.5 * a2 / (r2 * r2));
    let e =
        mu * a2 / r2.powi(5) + mu / (r1 * r1 * r2.powi(5)) * (1.0 + 2.5 * a2 / (r2 * r2)) * y * y;
    Ok(Geometry {
        x1: x + mu,
        y,
        r1,
        r2,
        f,
        e,
    })
}

/// Closed-form coefficient block evaluated at a point.
pub fn char_coeffs(model: &Model, point: &EquilibriumPoint) -> Result<CharCoeffs> {
    let p = model.params();
    let der = model.derived();
    let (mu, a2, q1) = (p.mu, p.a2, p.q1);
    let (n, w1) = (der.n, der.w1);
    let n2 = der.n2();
    let Geometry {
        x1,
        y,
        r1,
        r2,
        f,
        e,
    } = geometry(model, point.x, point.y)?;
    let r2_5 = r2.powi(5);
    let obl = 1.0 + 2.5 * a2 / (r2 * r2);
    let a = 3.0 * w1 / (r1 * r1);
    let b = 2.0 * n2 - f - 3.0 * mu * a2 / r2_5 + 2.0 * w1 * w1 / r1.powi(4);
    let c = -a * (1.0 + e);
    let d = (n2 - f) * (n2 + 2.0 * f - 3.0 * mu * a2 / r2_5)
        + 9.0 * mu * (1.0 - mu) * q1 / (r1.powi(5) * r2_5) * obl * y * y
        - 6.0 * n * w1 / (r1.powi(4) * r2_5) * obl * (x1 * (x1 - 1.0) + y * y);
    Ok(CharCoeffs {
        a,
        b,
        c,
        d,
        e_aux: e,
        f_aux: f,
        g_aux: critical::g_factor(q1, a2),
    })
}

/// Coefficients expanded from the analytic linearization at a point.
pub fn char_coeffs_exact(model: &Model, point: &EquilibriumPoint) -> Result<CharCoeffs> {
    let g = geometry(model, point.x, point.y)?;
    let poly = model.linearization(point.x, point.y)?.char_poly();
    Ok(CharCoeffs::from_poly(model, poly, g.f, g.e))
}

pub fn coeffs_for(
    model: &Model,
    point: &EquilibriumPoint,
    which: CoeffModel,
) -> Result<CharCoeffs> {
    match which {
        CoeffModel::Exact => char_coeffs_exact(model, point),
        CoeffModel::Printed => char_coeffs(model, point),
    }
}

/// No-drag triangular-point coefficients, independent of the point location.
pub fn triangular_no_drag(model: &Model) -> Result<CharCoeffs> {
    let p = model.params();
    p.require_nondegenerate("the triangular quartic")?;
    let n2 = model.derived().n2();
    let g_aux = critical::g_factor(p.q1, p.a2);
    Ok(CharCoeffs {
        a: 0.0,
        b: n2 - 3.0 * p.mu * p.a2,
        c: 0.0,
        d: 9.0 * p.mu * (1.0 - p.mu) * g_aux,
        e_aux: 0.0,
        f_aux: n2,
        g_aux,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootMethod {
    ClosedForm,
    FerrariSeries,
    Oracle,
}

impl RootMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RootMethod::ClosedForm => "closed-form",
            RootMethod::FerrariSeries => "ferrari-series",
            RootMethod::Oracle => "oracle",
        }
    }
}

impl fmt::Display for RootMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Stable,
    Unstable,
    Marginal,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Stable => "stable",
            Classification::Unstable => "unstable",
            Classification::Marginal => "marginal",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    /// Sorted by `|Im|`, then `Re`, then `Im`.
    pub roots: [Complex64; 4],
    pub method: RootMethod,
    pub classification: Classification,
    /// Largest `|p(l)|` over the roots.
    pub max_residual: f64,
}

impl Serialize for StabilityReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let roots: Vec<[f64; 2]> = self.roots.iter().map(|z| [z.re, z.im]).collect();
        let mut st = s.serialize_struct("StabilityReport", 4)?;
        st.serialize_field("roots", &roots)?;
        st.serialize_field("method", &self.method)?;
        st.serialize_field("classification", &self.classification)?;
        st.serialize_field("max_residual", &self.max_residual)?;
        st.end()
    }
}

impl StabilityReport {
    pub fn new(
        coeffs: [f64; 4],
        roots: [Complex64; 4],
        method: RootMethod,
        threshold: f64,
    ) -> Self {
        let mut roots = roots;
        sort_roots(&mut roots);
        let max_residual = roots
            .iter()
            .map(|&z| oracle::residual(coeffs, z))
            .fold(0.0, f64::max);
        StabilityReport {
            roots,
            method,
            classification: classify(&roots, threshold),
            max_residual,
        }
    }

    pub fn max_real(&self) -> f64 {
        self.roots
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn sort_roots(roots: &mut [Complex64; 4]) {
    roots.sort_by(|p, q| {
        p.im.abs()
            .total_cmp(&q.im.abs())
            .then(p.re.total_cmp(&q.re))
            .then(p.im.total_cmp(&q.im))
    });
}

/// Unstable if any real part exceeds `threshold`. Roots on the imaginary
/// axis that coincide within `threshold` make the point marginal.
pub fn classify(roots: &[Complex64; 4], threshold: f64) -> Classification {
    if roots.iter().any(|z| z.re > threshold) {
        return Classification::Unstable;
    }
    let on_axis: Vec<&Complex64> = roots.iter().filter(|z| z.re.abs() <= threshold).collect();
    let scale = |z: &Complex64| z.norm().max(1.0);
    let tol = threshold.max(1e-7);
    for (i, p) in on_axis.iter().enumerate() {
        for q in &on_axis[i + 1..] {
            if (**p - **q).norm() <= tol * scale(p) {
                return Classification::Marginal;
            }
        }
    }
    Classification::Stable
}

fn quadratic_roots(p: Complex64, q: Complex64) -> [Complex64; 2] {
    // l^2 + p l + q
    let disc = (p * p / 4.0 - q).sqrt();
    [-p / 2.0 + disc, -p / 2.0 - disc]
}

/// Exact roots of the biquadratic `l^4 + b l^2 + d`.
pub fn roots_no_drag(co: &CharCoeffs, threshold: f64) -> Result<StabilityReport> {
    if co.a != 0.0 || co.c != 0.0 {
        return Err(Error::Precondition(
            "closed-form roots need a = c = 0".into(),
        ));
    }
    let [s1, s2] = quadratic_roots(Complex64::new(co.b, 0.0), Complex64::new(co.d, 0.0));
    let roots = [s1.sqrt(), -s1.sqrt(), s2.sqrt(), -s2.sqrt()];
    Ok(StabilityReport::new(
        co.poly(),
        roots.map(clean_axis),
        RootMethod::ClosedForm,
        threshold,
    ))
}

// a real-valued square root of a non-positive real leaves a signed zero real part
fn clean_axis(z: Complex64) -> Complex64 {
    if z.re == 0.0 {
        Complex64::new(0.0, z.im)
    } else {
        z
    }
}

/// Frequencies `omega1 >= omega2` of the biquadratic when both squares are real and non-negative.
pub fn frequencies(b: f64, d: f64) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * d;
    if disc < 0.0 {
        return None;
    }
    let hi = (b + disc.sqrt()) / 2.0;
    let lo = (b - disc.sqrt()) / 2.0;
    if lo < 0.0 {
        return None;
    }
    Some((hi.sqrt(), lo.sqrt()))
}

/// Which first-order Ferrari expressions to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FerrariForm {
    /// Consistent expansion of the resolvent cubic to first order in `a^2`.
    #[default]
    Consistent,
    /// The expressions as commonly printed; they do not reduce to the
    /// drag-free roots at `a = 0` and are kept for comparison only.
    AsPrinted,
}

/// Pieces of the first-order Ferrari solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FerrariPieces {
    pub alpha1: f64,
    /// `sqrt(1 + 8 alpha1)`.
    pub s: f64,
    /// Resolvent root `b/2 + alpha1 a^2`.
    pub l: f64,
    pub b1: f64,
    pub b2: f64,
}

pub fn ferrari_pieces(co: &CharCoeffs, form: FerrariForm) -> Result<FerrariPieces> {
    let CharCoeffs {
        a, b, d, e_aux: e, ..
    } = *co;
    let den = 2.0 * (b * b - 4.0 * d);
    if den == 0.0 {
        return Err(Error::Degenerate("b^2 = 4d".into()));
    }
    let alpha1 = match form {
        FerrariForm::Consistent => ((1.0 + e) * (1.0 + e + b) + d) / den,
        FerrariForm::AsPrinted => ((1.0 + e) * (1.0 + e * e - b) + d) / den,
    };
    let correction = alpha1 * a * a;
    if correction.abs() > 0.1 * b.abs() {
        return Err(Error::SeriesInvalid {
            correction: correction.abs(),
            limit: 0.1 * b.abs(),
        });
    }
    let radicand = 1.0 + 8.0 * alpha1;
    if radicand < 0.0 {
        return Err(Error::Degenerate(format!(
            "1 + 8 alpha1 = {radicand:e} is negative"
        )));
    }
    let s = radicand.sqrt();
    if s == 0.0 {
        return Err(Error::Degenerate("1 + 8 alpha1 vanishes".into()));
    }
    let l = b / 2.0 + correction;
    let (b1, b2) = match form {
        FerrariForm::Consistent => (
            l * (1.0 + 1.0 / s) + (1.0 + e) / s,
            l * (1.0 - 1.0 / s) - (1.0 + e) / s,
        ),
        FerrariForm::AsPrinted => (l * (1.0 + s) - (1.0 + e) / s, l * (1.0 - s) + (1.0 + e) / s),
    };
    Ok(FerrariPieces {
        alpha1,
        s,
        l,
        b1,
        b2,
    })
}

/// Roots from the first-order series solution of the resolvent cubic.
pub fn roots_ferrari(
    co: &CharCoeffs,
    form: FerrariForm,
    threshold: f64,
) -> Result<StabilityReport> {
    let FerrariPieces { s, b1, b2, .. } = ferrari_pieces(co, form)?;
    let a = co.a;
    let re = |v: f64| Complex64::new(v, 0.0);
    let roots = match form {
        FerrariForm::Consistent => {
            let [r1, r2] = quadratic_roots(re(a * (1.0 + s) / 2.0), re(b1));
            let [r3, r4] = quadratic_roots(re(a * (1.0 - s) / 2.0), re(b2));
            [r1, r2, r3, r4]
        }
        FerrariForm::AsPrinted => {
            let pair = |sign: f64, bb: f64| {
                let centre = -a * (1.0 + sign * s) / 4.0;
                let disc = re(a * a * (1.0 + sign * s) / 16.0 - bb).sqrt();
                [re(centre) + disc, re(centre) - disc]
            };
            let [r1, r2] = pair(1.0, b1);
            let [r3, r4] = pair(-1.0, b2);
            [r1, r2, r3, r4]
        }
    };
    Ok(StabilityReport::new(
        co.poly(),
        roots.map(clean_axis),
        RootMethod::FerrariSeries,
        threshold,
    ))
}

/// Roots from the general-purpose solver.
pub fn roots_oracle(co: &CharCoeffs, threshold: f64) -> Result<StabilityReport> {
    let roots = oracle::solve_quartic(co.poly())?;
    Ok(StabilityReport::new(
        co.poly(),
        roots,
        RootMethod::Oracle,
        threshold,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverChoice {
    /// Closed form when `a = c = 0`, the series otherwise, the oracle if the series fails.
    #[default]
    Auto,
    ClosedForm,
    Ferrari,
    Oracle,
}

impl FromStr for SolverChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "auto" => Ok(SolverChoice::Auto),
            "closed-form" | "no-drag" => Ok(SolverChoice::ClosedForm),
            "ferrari" | "ferrari-series" => Ok(SolverChoice::Ferrari),
            "oracle" => Ok(SolverChoice::Oracle),
            _ => Err(format!("unknown root method {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub solver: SolverChoice,
    pub coeffs: CoeffModel,
    pub ferrari: FerrariForm,
    pub threshold: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            solver: SolverChoice::Auto,
            coeffs: CoeffModel::Exact,
            ferrari: FerrariForm::Consistent,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

pub fn solve(co: &CharCoeffs, opts: &ClassifyOptions) -> Result<StabilityReport> {
    match opts.solver {
        SolverChoice::ClosedForm => roots_no_drag(co, opts.threshold),
        SolverChoice::Ferrari => roots_ferrari(co, opts.ferrari, opts.threshold),
        SolverChoice::Oracle => roots_oracle(co, opts.threshold),
        SolverChoice::Auto => {
            if co.a == 0.0 && co.c == 0.0 {
                roots_no_drag(co, opts.threshold)
            } else {
                roots_ferrari(co, opts.ferrari, opts.threshold)
                    .or_else(|_| roots_oracle(co, opts.threshold))
            }
        }
    }
}

/// Build the quartic at `point` and classify it.
pub fn classify_point(
    model: &Model,
    point: &EquilibriumPoint,
    opts: &ClassifyOptions,
) -> Result<StabilityReport> {
    let co = coeffs_for(model, point, opts.coeffs)?;
    solve(&co, opts)
}
