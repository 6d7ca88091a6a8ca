//! Equilibrium points: perturbative estimates and Newton refinement.
//!
//! With drag switched on none of the five points is an exact zero of the
//! closed-form expressions, so every estimate can be polished by [`refine`]
//! against [`Model::grad_at_rest`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::Model;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    L1,
    L2,
    L3,
    L4,
    L5,
}

impl Label {
    pub const ALL: [Label; 5] = [Label::L1, Label::L2, Label::L3, Label::L4, Label::L5];

    pub fn is_collinear(self) -> bool {
        matches!(self, Label::L1 | Label::L2 | Label::L3)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::L1 => "L1",
            Label::L2 => "L2",
            Label::L3 => "L3",
            Label::L4 => "L4",
            Label::L5 => "L5",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Label::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown equilibrium label {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    AnalyticEstimate,
    Refined,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::AnalyticEstimate => "analytic-estimate",
            Provenance::Refined => "refined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumPoint {
    pub label: Label,
    pub x: f64,
    pub y: f64,
    /// `|(Ux, Uy)|` at the point.
    pub residual: f64,
    pub provenance: Provenance,
}

impl EquilibriumPoint {
    /// A point landing on a primary gets an infinite residual.
    fn evaluated(
        model: &Model,
        label: Label,
        x: f64,
        y: f64,
        provenance: Provenance,
    ) -> Result<Self> {
        let residual = match model.grad_at_rest(x, y) {
            Ok((ux, uy)) => ux.hypot(uy),
            Err(Error::Collision { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        Ok(EquilibriumPoint {
            label,
            x,
            y,
            residual,
            provenance,
        })
    }
}

/// First-order pieces of the triangular-point expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangularExpansion {
    /// Photogravitational coordinates without drag or oblateness.
    pub x0: f64,
    pub y0: f64,
    /// Relative perturbation of `r1`.
    pub eps1: f64,
    /// Perturbation of `r2`.
    pub eps2: f64,
    /// `1 - 2 mu`.
    pub gamma: f64,
    /// `1 - q1`.
    pub eps: f64,
}

impl TriangularExpansion {
    /// Expansion about the point with `y0` of the given sign (`L4`: +, `L5`: -).
    pub fn new(model: &Model, upper: bool) -> Result<Self> {
        let p = model.params();
        p.require_nondegenerate("the triangular expansion")?;
        let d = model.derived();
        let (mu, a2) = (p.mu, p.a2);
        let delta2 = d.delta * d.delta;
        let x0 = delta2 / 2.0 - mu;
        let mut y0 = d.delta * (1.0 - delta2 / 4.0).sqrt();
        if !upper {
            y0 = -y0;
        }
        if y0 == 0.0 {
            return Err(Error::Degenerate("y0 vanishes".into()));
        }
        let nw = d.n * d.w1;
        Ok(TriangularExpansion {
            x0,
            y0,
            eps1: -nw / (6.0 * (1.0 - mu) * y0) - a2 / 2.0,
            eps2: nw * (1.0 - 2.5 * a2) / (3.0 * mu * y0),
            gamma: 1.0 - 2.0 * mu,
            eps: 1.0 - p.q1,
        })
    }

    /// `(r1, r2)` implied by the perturbations.
    pub fn radii(&self, model: &Model) -> (f64, f64) {
        (model.derived().delta * (1.0 + self.eps1), 1.0 + self.eps2)
    }
}

/// Which closed form to use for the triangular points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TriangularMode {
    /// First-order drag and oblateness corrections to the photogravitational point.
    #[default]
    Perturbed,
    /// As `Perturbed` but with the oblateness correction to `y^2` taken
    /// quadratic in `A2`; this is the variant the published coordinate and
    /// Jacobi-constant tables follow.
    Tabulated,
    /// Closed form without drag.
    NoDrag,
    /// Expansion in `gamma = 1 - 2 mu` and `eps = 1 - q1`.
    Series,
}

impl FromStr for TriangularMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "perturbed" => Ok(TriangularMode::Perturbed),
            "tabulated" => Ok(TriangularMode::Tabulated),
            "no-drag" => Ok(TriangularMode::NoDrag),
            "series" => Ok(TriangularMode::Series),
            _ => Err(format!("unknown triangular mode {s:?}")),
        }
    }
}

/// Closed form used for the near-axis points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollinearMode {
    /// `x + mu` from the combined bracket raised to `-2/3`.
    #[default]
    Direct,
    /// `x + mu` from the first-order expansion of `r1`.
    FromRadius,
}

impl FromStr for CollinearMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "direct" => Ok(CollinearMode::Direct),
            "from-radius" => Ok(CollinearMode::FromRadius),
            _ => Err(format!("unknown collinear mode {s:?}")),
        }
    }
}

fn checked_sqrt(v: f64) -> Result<f64> {
    if v < 0.0 || v.is_nan() {
        Err(Error::NegativeRadicand(v))
    } else {
        Ok(v.sqrt())
    }
}

/// `(x, y)` of the triangular point on the requested side.
pub fn triangular_position(model: &Model, upper: bool, mode: TriangularMode) -> Result<(f64, f64)> {
    let p = model.params();
    p.require_nondegenerate("triangular coordinates")?;
    let d = model.derived();
    let (mu, a2) = (p.mu, p.a2);
    let nw = d.n * d.w1;
    let delta2 = d.delta * d.delta;
    let sign = if upper { 1.0 } else { -1.0 };
    match mode {
        TriangularMode::Perturbed | TriangularMode::Tabulated => {
            let t = TriangularExpansion::new(model, upper)?;
            let y0 = t.y0;
            let drag_x = nw
                * ((1.0 - mu) * (1.0 + 2.5 * a2) + mu * (1.0 - a2 / 2.0) * delta2 / 2.0)
                / (3.0 * mu * (1.0 - mu) * y0);
            let x = t.x0 - delta2 * a2 / 2.0 - drag_x;
            let oblate = if mode == TriangularMode::Tabulated {
                a2 * a2
            } else {
                a2
            };
            let drag_y = nw
                * delta2
                * (2.0 * mu - 1.0 - mu * (1.0 - 1.5 * a2) * delta2 / 2.0 + 3.5 * (1.0 - mu) * a2)
                / (3.0 * mu * (1.0 - mu) * y0.powi(3));
            let y = y0
                * checked_sqrt(1.0 - delta2 * (1.0 - delta2 / 2.0) * oblate / (y0 * y0) - drag_y)?;
            Ok((x, y))
        }
        TriangularMode::NoDrag => {
            let delta = d.delta;
            let x = (delta / 2.0 - mu) - delta * a2 / 2.0;
            let y = delta
                * ((1.0 - delta2 / 4.0).sqrt() - (1.0 - delta2 / 2.0) * (1.0 + delta2 / 4.0) * a2);
            Ok((x, sign * y))
        }
        TriangularMode::Series => {
            let gamma = 1.0 - 2.0 * mu;
            let eps = 1.0 - p.q1;
            let s3 = 3f64.sqrt();
            let drag = sign * nw;
            let x = gamma / 2.0 - eps / 3.0 - a2 / 2.0 + a2 * eps / 3.0
                - (9.0 + gamma) / (6.0 * s3) * drag
                - 4.0 * gamma * eps / (27.0 * s3) * drag;
            let y = s3 / 2.0
                * (1.0 - 2.0 * eps / 9.0 - a2 / 3.0 - 2.0 * a2 * eps / 9.0
                    + (1.0 + gamma) / (9.0 * s3) * drag
                    - 4.0 * gamma * eps / (27.0 * s3) * drag);
            Ok((x, sign * y))
        }
    }
}

/// Analytic estimate of `L4` or `L5`.
pub fn triangular_estimate(
    model: &Model,
    label: Label,
    mode: TriangularMode,
) -> Result<EquilibriumPoint> {
    let upper = match label {
        Label::L4 => true,
        Label::L5 => false,
        _ => {
            return Err(Error::Precondition(format!(
                "{label} is not a triangular point"
            )))
        }
    };
    let (x, y) = triangular_position(model, upper, mode)?;
    EquilibriumPoint::evaluated(model, label, x, y, Provenance::AnalyticEstimate)
}

/// Analytic estimates of `L4` (upper) and `L5` (lower).
pub fn triangular_estimates(model: &Model, mode: TriangularMode) -> Result<[EquilibriumPoint; 2]> {
    Ok([
        triangular_estimate(model, Label::L4, mode)?,
        triangular_estimate(model, Label::L5, mode)?,
    ])
}

/// Root of `Ux(x, 0)` in the axis segment belonging to a collinear label.
///
/// On the axis the x-component of the rest field does not depend on drag.
pub fn axis_root(model: &Model, label: Label) -> Result<f64> {
    let mu = model.params().mu;
    let gap = 1e-9;
    let (lo, hi) = match label {
        Label::L3 => (-mu - 2.0, -mu - gap),
        Label::L1 => (-mu + gap, 1.0 - mu - gap),
        Label::L2 => (1.0 - mu + gap, 3.0 - mu),
        _ => {
            return Err(Error::Precondition(format!(
                "{label} is not a collinear point"
            )))
        }
    };
    let f = |x: f64| model.grad_at_rest(x, 0.0).map(|g| g.0);
    bisect(f, lo, hi)
}

pub(crate) fn bisect<F>(f: F, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Offset from the axis that balances the drag's rotational term against
/// the local stiffness `n^2 - f` (linear in `W1`, signed).
pub fn drag_offset(model: &Model, x: f64) -> Result<f64> {
    let p = model.params();
    let d = model.derived();
    let mu = p.mu;
    if d.w1 == 0.0 {
        return Ok(0.0);
    }
    let dist = model.distances(x, 0.0)?;
    let f = (1.0 - mu) * p.q1 / dist.r1.powi(3)
        + mu / dist.r2.powi(3) * (1.0 + 1.5 * p.a2 / (dist.r2 * dist.r2));
    let stiffness = d.n2() - f;
    if stiffness == 0.0 {
        return Err(Error::Degenerate("zero axis stiffness".into()));
    }
    Ok(d.n * d.w1 * (x + mu) / (dist.r1 * dist.r1 * stiffness))
}

/// Near-axis estimate for one collinear label.
///
/// `y_seed` is the off-axis coordinate fed into the closed form; `None`
/// uses the magnitude of [`drag_offset`] at the axis root.
pub fn collinear_estimate(
    model: &Model,
    label: Label,
    mode: CollinearMode,
    y_seed: Option<f64>,
) -> Result<EquilibriumPoint> {
    let p = model.params();
    p.require_nondegenerate("collinear estimates")?;
    if !label.is_collinear() {
        return Err(Error::Precondition(format!(
            "{label} is not a collinear point"
        )));
    }
    let d = model.derived();
    let (mu, a2) = (p.mu, p.a2);
    let nw = d.n * d.w1;
    let y = match y_seed {
        Some(y) => y,
        None => drag_offset(model, axis_root(model, label)?)?.abs(),
    };
    if nw != 0.0 && y == 0.0 {
        return Err(Error::Degenerate(
            "off-axis seed must be nonzero with drag".into(),
        ));
    }
    // drag terms vanish identically without drag, whatever the seed
    let over_y = |k: f64| if nw == 0.0 { 0.0 } else { nw / (k * y) };
    let x = match label {
        Label::L1 | Label::L3 => {
            let r1_sq = match mode {
                CollinearMode::Direct => {
                    let bracket = 1.0 + over_y(2.0 * (1.0 - mu)) + 1.5 * a2;
                    if bracket <= 0.0 {
                        return Err(Error::NegativeRadicand(bracket));
                    }
                    (p.q1 / d.n2()).powf(2.0 / 3.0) * bracket.powf(-2.0 / 3.0)
                }
                CollinearMode::FromRadius => {
                    let r1 = (p.q1 / d.n2()).cbrt() * (1.0 - over_y(6.0 * (1.0 - mu)));
                    r1 * r1
                }
            };
            let half = checked_sqrt(r1_sq - y * y)?;
            if label == Label::L1 {
                -mu + half
            } else {
                -mu - half
            }
        }
        _ => {
            let bracket = 1.0 - over_y(mu) * (1.0 - 2.5 * a2);
            if bracket <= 0.0 {
                return Err(Error::NegativeRadicand(bracket));
            }
            1.0 - mu + checked_sqrt(bracket.powf(-2.0 / 3.0) - y * y)?
        }
    };
    EquilibriumPoint::evaluated(model, label, x, y, Provenance::AnalyticEstimate)
}

/// Estimates for `L1`, `L2`, `L3`, each evaluated independently.
pub fn collinear_estimates(
    model: &Model,
    mode: CollinearMode,
    y_seed: Option<f64>,
) -> [Result<EquilibriumPoint>; 3] {
    [Label::L1, Label::L2, Label::L3].map(|l| collinear_estimate(model, l, mode, y_seed))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineOptions {
    /// Convergence threshold on `|(Ux, Uy)|`.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Central-difference step for the 2x2 Jacobian.
    pub fd_step: f64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            tolerance: 1e-12,
            max_iterations: 50,
            fd_step: 1e-7,
        }
    }
}

/// Damped Newton iteration on the rest field starting from `seed`.
pub fn refine(
    model: &Model,
    seed: &EquilibriumPoint,
    opts: &RefineOptions,
) -> Result<EquilibriumPoint> {
    let (mut x, mut y) = (seed.x, seed.y);
    let (mut gx, mut gy) = model.grad_at_rest(x, y)?;
    let mut norm = gx.hypot(gy);
    let h = opts.fd_step;
    for _ in 0..opts.max_iterations {
        if norm < opts.tolerance {
            break;
        }
        let px = model.grad_at_rest(x + h, y)?;
        let mx = model.grad_at_rest(x - h, y)?;
        let py = model.grad_at_rest(x, y + h)?;
        let my = model.grad_at_rest(x, y - h)?;
        let j11 = (px.0 - mx.0) / (2.0 * h);
        let j21 = (px.1 - mx.1) / (2.0 * h);
        let j12 = (py.0 - my.0) / (2.0 * h);
        let j22 = (py.1 - my.1) / (2.0 * h);
        let det = j11 * j22 - j12 * j21;
        let scale = (j11.abs() + j12.abs()) * (j21.abs() + j22.abs());
        if det.is_nan() || det.abs() <= 1e-14 * scale {
            return Err(Error::SingularJacobian { x, y });
        }
        let dx = -(j22 * gx - j12 * gy) / det;
        let dy = -(-j21 * gx + j11 * gy) / det;

        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let (tx, ty) = (x + lambda * dx, y + lambda * dy);
            if let Ok((tgx, tgy)) = model.grad_at_rest(tx, ty) {
                let trial = tgx.hypot(tgy);
                if trial < norm {
                    x = tx;
                    y = ty;
                    gx = tgx;
                    gy = tgy;
                    norm = trial;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if norm < opts.tolerance {
        Ok(EquilibriumPoint {
            label: seed.label,
            x,
            y,
            residual: norm,
            provenance: Provenance::Refined,
        })
    } else {
        Err(Error::NoConvergence {
            iterations: opts.max_iterations,
            residual: norm,
        })
    }
}

fn in_region(model: &Model, p: &EquilibriumPoint) -> bool {
    let mu = model.params().mu;
    match p.label {
        Label::L3 => p.x <= -mu,
        Label::L1 => -mu < p.x && p.x < 1.0 - mu && p.y.abs() < 0.1,
        Label::L2 => p.x >= 1.0 - mu,
        Label::L4 => p.y > 0.0,
        Label::L5 => p.y < 0.0,
    }
}

/// Refinement seed for one label.
pub fn seed(model: &Model, label: Label) -> Result<EquilibriumPoint> {
    model.params().require_nondegenerate("equilibrium seeds")?;
    if label.is_collinear() {
        let x = axis_root(model, label)?;
        let y = drag_offset(model, x)?;
        EquilibriumPoint::evaluated(model, label, x, y, Provenance::AnalyticEstimate)
    } else {
        let upper = label == Label::L4;
        let (x, y) =
            triangular_position(model, upper, TriangularMode::Perturbed).or_else(|_| {
                let t = TriangularExpansion::new(model, upper)?;
                Ok::<_, Error>((t.x0, t.y0))
            })?;
        EquilibriumPoint::evaluated(model, label, x, y, Provenance::AnalyticEstimate)
    }
}

/// Seed and refine a single label, checking the result stays in its region.
pub fn locate(model: &Model, label: Label, opts: &RefineOptions) -> Result<EquilibriumPoint> {
    let s = seed(model, label)?;
    let p = refine(model, &s, opts)?;
    if in_region(model, &p) {
        Ok(p)
    } else {
        Err(Error::WrongBasin(label.to_string()))
    }
}

/// All five points in label order; failures are reported per point.
pub fn find_all(model: &Model, opts: &RefineOptions) -> Vec<(Label, Result<EquilibriumPoint>)> {
    Label::ALL
        .into_iter()
        .map(|l| (l, locate(model, l, opts)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SystemParams;

    const MU: f64 = 0.00003;

    fn model(q1: f64, a2: f64) -> Model {
        Model::new(SystemParams::with_defaults(q1, a2)).unwrap()
    }

    #[test]
    fn classical_triangular_estimate() {
        let [l4, l5] = triangular_estimates(&model(1.0, 0.0), TriangularMode::Perturbed).unwrap();
        assert!((l4.x - (0.5 - MU)).abs() < 1e-15);
        assert!((l4.y - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(l5.x, l4.x);
        assert_eq!(l5.y, -l4.y);
        // published classical entries are rounded
        assert!((l4.x - 0.499949).abs() < 5e-4);
        assert!((l4.y - 0.86605).abs() < 5e-4);
    }

    #[test]
    fn all_modes_agree_in_classical_limit() {
        let m = model(1.0, 0.0);
        for mode in [
            TriangularMode::Perturbed,
            TriangularMode::Tabulated,
            TriangularMode::NoDrag,
            TriangularMode::Series,
        ] {
            let (x, y) = triangular_position(&m, true, mode).unwrap();
            assert!((x - (0.5 - MU)).abs() < 1e-12, "{mode:?}");
            assert!((y - 3f64.sqrt() / 2.0).abs() < 1e-12, "{mode:?}");
        }
    }

    #[test]
    fn oblate_radiating_estimate() {
        let (x, y) =
            triangular_position(&model(0.75, 0.25), true, TriangularMode::Tabulated).unwrap();
        assert!((x - 0.30949).abs() < 5e-4);
        assert!((y - 0.790465).abs() < 5e-4);
        let (x, _) =
            triangular_position(&model(0.75, 0.25), true, TriangularMode::Perturbed).unwrap();
        assert!((x - 0.30949).abs() < 5e-4);
    }

    #[test]
    fn expansion_invariants() {
        let m = model(0.6, 0.01);
        let d = *m.derived();
        let t = TriangularExpansion::new(&m, true).unwrap();
        assert!((t.x0 - (d.delta * d.delta / 2.0 - MU)).abs() < 1e-15);
        assert!((t.y0 - d.delta * (1.0 - d.delta * d.delta / 4.0).sqrt()).abs() < 1e-15);
        let nw = d.n * d.w1;
        assert!((t.eps2 - nw * (1.0 - 0.025) / (3.0 * MU * t.y0)).abs() < 1e-18);
        assert!((t.eps1 - (-nw / (6.0 * (1.0 - MU) * t.y0) - 0.005)).abs() < 1e-15);
        assert_eq!(t.gamma, 1.0 - 2.0 * MU);
        assert!((t.eps - 0.4).abs() < 1e-15);
        let lower = TriangularExpansion::new(&m, false).unwrap();
        assert_eq!(lower.y0, -t.y0);
    }

    #[test]
    fn degenerate_q1() {
        let m = model(0.0, 0.0);
        assert!(matches!(
            triangular_estimates(&m, TriangularMode::Perturbed),
            Err(Error::Degenerate(_))
        ));
        for r in collinear_estimates(&m, CollinearMode::Direct, Some(1e-3)) {
            assert!(matches!(r, Err(Error::Degenerate(_))));
        }
        for (_, r) in find_all(&m, &RefineOptions::default()) {
            assert!(r.is_err());
        }
    }

    #[test]
    fn monotone_in_radiation() {
        // coordinates from the closed form decrease as q1 decreases
        for &a2 in &[0.0, 0.0024, 0.02] {
            let mut prev = (f64::INFINITY, f64::INFINITY);
            for i in 0..=30 {
                let q1 = 1.0 - 0.025 * i as f64;
                let (x, y) =
                    triangular_position(&model(q1, a2), true, TriangularMode::Perturbed).unwrap();
                assert!(x <= prev.0 && y <= prev.1, "q1={q1} a2={a2}");
                prev = (x, y);
            }
        }
    }

    #[test]
    fn classical_collinear_estimates() {
        let m = model(1.0, 0.0);
        let [l1, l2, l3] = collinear_estimates(&m, CollinearMode::Direct, Some(0.0));
        let l3 = l3.unwrap();
        assert!((l3.x - (-1.0 - MU)).abs() < 1e-15);
        assert_eq!(l3.y, 0.0);
        // both brackets collapse to one
        let l1 = l1.unwrap();
        assert!((l1.x + MU - 1.0).abs() < 1e-15);
        assert_eq!(l1.residual, f64::INFINITY);
        let l2 = l2.unwrap();
        assert!((l2.x - (2.0 - MU)).abs() < 1e-15);
        let l3r = collinear_estimate(&m, Label::L3, CollinearMode::FromRadius, Some(0.0)).unwrap();
        assert_eq!(l3r.x, l3.x);
    }

    #[test]
    fn collinear_estimate_errors() {
        let m = model(0.75, 0.0024);
        assert!(matches!(
            collinear_estimate(&m, Label::L1, CollinearMode::Direct, Some(0.0)),
            Err(Error::Degenerate(_))
        ));
        // a positive seed of drag scale drives the secondary's bracket negative
        let tiny = drag_offset(&m, axis_root(&m, Label::L2).unwrap())
            .unwrap()
            .abs();
        assert!(matches!(
            collinear_estimate(&m, Label::L2, CollinearMode::Direct, Some(tiny)),
            Err(Error::NegativeRadicand(_))
        ));
        assert!(collinear_estimate(&m, Label::L2, CollinearMode::Direct, Some(1e-3)).is_ok());
        assert!(collinear_estimate(&m, Label::L4, CollinearMode::Direct, Some(1e-3)).is_err());
    }

    #[test]
    fn refine_classical_l4() {
        let m = model(1.0, 0.0);
        let seed = EquilibriumPoint {
            label: Label::L4,
            x: 0.5 - MU + 1e-3,
            y: 3f64.sqrt() / 2.0 - 1e-3,
            residual: f64::NAN,
            provenance: Provenance::AnalyticEstimate,
        };
        let p = refine(&m, &seed, &RefineOptions::default()).unwrap();
        assert_eq!(p.provenance, Provenance::Refined);
        assert!((p.x - (0.5 - MU)).abs() < 1e-10);
        assert!((p.y - 3f64.sqrt() / 2.0).abs() < 1e-10);
        assert!(p.residual < 1e-12);
    }

    #[test]
    fn refine_keeps_axis_without_drag() {
        let m = model(1.0, 0.0024);
        let seed = EquilibriumPoint {
            label: Label::L3,
            x: -1.0,
            y: 0.0,
            residual: f64::NAN,
            provenance: Provenance::AnalyticEstimate,
        };
        let p = refine(&m, &seed, &RefineOptions::default()).unwrap();
        assert_eq!(p.y, 0.0);
        assert!(p.residual < 1e-12);
    }

    #[test]
    fn refine_under_drag_moves_by_drag_scale() {
        let m = model(0.75, 0.0024);
        let [l4, _] = triangular_estimates(&m, TriangularMode::Perturbed).unwrap();
        let p = refine(&m, &l4, &RefineOptions::default()).unwrap();
        assert!(p.residual < 1e-12);
        // the closed form is first order in A2, so the oblateness error dominates the shift
        assert!((p.y - l4.y).abs() < 1e-3);
        assert!(p.y != l4.y);
    }

    #[test]
    fn refine_reports_failure() {
        let m = model(0.75, 0.0);
        let seed = EquilibriumPoint {
            label: Label::L4,
            x: 0.4,
            y: 0.8,
            residual: f64::NAN,
            provenance: Provenance::AnalyticEstimate,
        };
        let opts = RefineOptions {
            max_iterations: 1,
            ..Default::default()
        };
        assert!(matches!(
            refine(&m, &seed, &opts),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn find_all_classical() {
        let m = model(1.0, 0.0);
        let pts: Vec<_> = find_all(&m, &RefineOptions::default())
            .into_iter()
            .map(|(_, r)| r.unwrap())
            .collect();
        assert!(pts.iter().all(|p| p.residual < 1e-10));
        let (l1, l2, l3, l4, l5) = (pts[0], pts[1], pts[2], pts[3], pts[4]);
        assert!(l3.x < -MU && -MU < l1.x && l1.x < 1.0 - MU && l2.x > 1.0 - MU);
        assert!(l1.y == 0.0 && l2.y == 0.0 && l3.y == 0.0);
        assert!((l4.x - (0.5 - MU)).abs() < 1e-12 && (l4.y - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((l5.x - l4.x).abs() < 1e-12 && (l5.y + l4.y).abs() < 1e-12);
        // Hill-sphere scale for the points flanking the secondary
        let hill = (MU / 3.0).cbrt();
        assert!(((1.0 - MU - l1.x) / hill - 1.0).abs() < 0.05);
        assert!(((l2.x - 1.0 + MU) / hill - 1.0).abs() < 0.05);
    }

    #[test]
    fn find_all_with_drag_leaves_axis() {
        let m = model(0.75, 0.0024);
        for (label, r) in find_all(&m, &RefineOptions::default()) {
            let p = r.unwrap();
            assert!(p.residual < 1e-10, "{label}");
            if label.is_collinear() {
                assert!(p.y != 0.0, "{label}");
            }
            if label == Label::L1 || label == Label::L2 {
                assert!(p.y.abs() < 1e-6, "{label} y={}", p.y);
            }
            if label == Label::L3 {
                // the axis stiffness there is only of order mu
                let scale = m.derived().n * m.derived().w1 / MU;
                assert!(
                    p.y.abs() > 0.5 * scale && p.y.abs() < 2.0 * scale,
                    "y={}",
                    p.y
                );
            }
        }
    }

    #[test]
    fn label_parsing() {
        assert_eq!("l4".parse::<Label>().unwrap(), Label::L4);
        assert!("L6".parse::<Label>().is_err());
        assert_eq!(
            "tabulated".parse::<TriangularMode>().unwrap(),
            TriangularMode::Tabulated
        );
        assert_eq!(
            "from-radius".parse::<CollinearMode>().unwrap(),
            CollinearMode::FromRadius
        );
    }
}
