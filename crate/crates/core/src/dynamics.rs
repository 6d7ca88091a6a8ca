//! Force function, accelerations and Jacobi integral in the rotating frame.
//!
//! The particle moves in the plane of the primaries under
//!
//! ```text
//! x'' - 2 n y' = Ux
//! y'' + 2 n x' = Uy
//! ```
//!
//! where `Ux`, `Uy` include the reduced gravity of the radiating primary,
//! the oblate secondary and the velocity-dependent Poynting-Robertson drag.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{DerivedParams, SystemParams};

/// Default lower bound on `r1`, `r2` below which evaluation is refused.
pub const DEFAULT_COLLISION_FLOOR: f64 = 1e-12;

/// Planar rotating-frame state in normalized units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

impl State {
    pub fn new(x: f64, y: f64, vx: f64, vy: f64) -> Self {
        State { x, y, vx, vy }
    }

    pub fn at_rest(x: f64, y: f64) -> Self {
        State {
            x,
            y,
            vx: 0.0,
            vy: 0.0,
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.vx, self.vy]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        State::new(v[0], v[1], v[2], v[3])
    }

    /// `self + h * d`, componentwise.
    pub fn offset(&self, d: &[f64; 4], h: f64) -> State {
        State::new(
            self.x + h * d[0],
            self.y + h * d[1],
            self.vx + h * d[2],
            self.vy + h * d[3],
        )
    }

    /// Image under `(x, y, vx, vy) -> (x, -y, -vx, vy)`, which reverses time
    /// for the drag-free flow.
    pub fn reflected(&self) -> State {
        State::new(self.x, -self.y, -self.vx, self.vy)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub fn speed_squared(&self) -> f64 {
        self.vx * self.vx + self.vy * self.vy
    }
}

/// Distances from the particle to the two primaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distances {
    pub r1: f64,
    pub r2: f64,
}

/// Linearized field at a rest point.
///
/// `position` holds `d(Ux, Uy)/d(x, y)` and `velocity` holds
/// `d(ax, ay)/d(vx, vy)` including the Coriolis terms, so the first-order
/// system Jacobian is `[[0, I], [position, velocity]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linearization {
    pub position: [[f64; 2]; 2],
    pub velocity: [[f64; 2]; 2],
}

impl Linearization {
    pub fn jacobian(&self) -> [[f64; 4]; 4] {
        let m = &self.position;
        let v = &self.velocity;
        [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [m[0][0], m[0][1], v[0][0], v[0][1]],
            [m[1][0], m[1][1], v[1][0], v[1][1]],
        ]
    }

    /// Coefficients `(a, b, c, d)` of `det(l^2 I - l V - M)`.
    pub fn char_poly(&self) -> [f64; 4] {
        let m = &self.position;
        let v = &self.velocity;
        let a = -(v[0][0] + v[1][1]);
        let b = (v[0][0] * v[1][1] - v[0][1] * v[1][0]) - (m[0][0] + m[1][1]);
        let c = v[0][0] * m[1][1] + v[1][1] * m[0][0] - v[0][1] * m[1][0] - v[1][0] * m[0][1];
        let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        [a, b, c, d]
    }
}

/// Evaluator for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model {
    params: SystemParams,
    derived: DerivedParams,
    collision_floor: f64,
}

impl Model {
    pub fn new(params: SystemParams) -> Result<Self> {
        let derived = params.derive()?;
        Ok(Model {
            params,
            derived,
            collision_floor: DEFAULT_COLLISION_FLOOR,
        })
    }

    pub fn with_collision_floor(mut self, floor: f64) -> Self {
        self.collision_floor = floor;
        self
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn derived(&self) -> &DerivedParams {
        &self.derived
    }

    pub fn collision_floor(&self) -> f64 {
        self.collision_floor
    }

    pub fn distances(&self, x: f64, y: f64) -> Result<Distances> {
        let mu = self.params.mu;
        let r1 = (x + mu).hypot(y);
        let r2 = (x + mu - 1.0).hypot(y);
        if !(r1 >= self.collision_floor && r2 >= self.collision_floor) {
            return Err(Error::Collision {
                r1,
                r2,
                floor: self.collision_floor,
            });
        }
        Ok(Distances { r1, r2 })
    }

    /// The force function `U(x, y, vx, vy)`.
    ///
    /// The drag's angular term uses `atan2(y, x + mu)`, continuous away from
    /// the negative x-axis of the first primary.
    pub fn force_function(&self, s: &State) -> Result<f64> {
        let SystemParams { mu, q1, a2, .. } = self.params;
        let DerivedParams { n, w1, .. } = self.derived;
        let Distances { r1, r2 } = self.distances(s.x, s.y)?;
        let x1 = s.x + mu;
        let mut u = 0.5 * n * n * (s.x * s.x + s.y * s.y)
            + (1.0 - mu) * q1 / r1
            + mu / r2
            + mu * a2 / (2.0 * r2.powi(3));
        if w1 != 0.0 {
            u += w1 * ((x1 * s.vx + s.y * s.vy) / (2.0 * r1 * r1) - n * s.y.atan2(x1));
        }
        Ok(u)
    }

    /// Full `(Ux, Uy)` including the velocity-dependent drag bracket.
    pub fn gradient(&self, s: &State) -> Result<(f64, f64)> {
        let SystemParams { mu, q1, a2, .. } = self.params;
        let DerivedParams { n, w1, .. } = self.derived;
        let Distances { r1, r2 } = self.distances(s.x, s.y)?;
        let x1 = s.x + mu;
        let x2 = x1 - 1.0;
        let r1_3 = r1.powi(3);
        let r2_3 = r2.powi(3);
        let r2_5 = r2_3 * r2 * r2;
        let k1 = (1.0 - mu) * q1;
        let k3 = 1.5 * mu * a2;
        let mut ux = n * n * s.x - k1 * x1 / r1_3 - mu * x2 / r2_3 - k3 * x2 / r2_5;
        let mut uy = n * n * s.y - k1 * s.y / r1_3 - mu * s.y / r2_3 - k3 * s.y / r2_5;
        if w1 != 0.0 {
            let r1_2 = r1 * r1;
            let radial = x1 * s.vx + s.y * s.vy;
            ux -= w1 / r1_2 * (x1 / r1_2 * radial + s.vx - n * s.y);
            uy -= w1 / r1_2 * (s.y / r1_2 * radial + s.vy + n * x1);
        }
        Ok((ux, uy))
    }

    /// Accelerations `(x'', y'')`.
    pub fn accel(&self, s: &State) -> Result<(f64, f64)> {
        let n = self.derived.n;
        let (ux, uy) = self.gradient(s)?;
        Ok((ux + 2.0 * n * s.vy, uy - 2.0 * n * s.vx))
    }

    /// Right-hand side of the first-order system in `(x, y, vx, vy)`.
    pub fn rhs(&self, s: &State) -> Result<[f64; 4]> {
        let (ax, ay) = self.accel(s)?;
        Ok([s.vx, s.vy, ax, ay])
    }

    /// Equilibrium residual: `(Ux, Uy)` with zero velocity.
    ///
    /// The rotational part of the drag (`+n W1 y / r1^2`, `-n W1 (x+mu) / r1^2`)
    /// survives at rest.
    pub fn grad_at_rest(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        self.gradient(&State::at_rest(x, y))
    }

    /// Jacobi integral `C = 2U - v^2`.
    pub fn jacobi(&self, s: &State) -> Result<f64> {
        Ok(2.0 * self.force_function(s)? - s.speed_squared())
    }

    /// Analytic linearization of the equations of motion at a rest point.
    pub fn linearization(&self, x: f64, y: f64) -> Result<Linearization> {
        let SystemParams { mu, q1, a2, .. } = self.params;
        let DerivedParams { n, w1, .. } = self.derived;
        let Distances { r1, r2 } = self.distances(x, y)?;
        let x1 = x + mu;
        let x2 = x1 - 1.0;
        let k1 = (1.0 - mu) * q1;
        let k3 = 1.5 * mu * a2;
        let (r1_2, r2_2) = (r1 * r1, r2 * r2);
        let (r1_3, r2_3) = (r1_2 * r1, r2_2 * r2);
        let (r1_5, r2_5) = (r1_3 * r1_2, r2_3 * r2_2);
        let r2_7 = r2_5 * r2_2;
        let r1_4 = r1_2 * r1_2;

        let mut m11 = n * n
            - k1 * (1.0 / r1_3 - 3.0 * x1 * x1 / r1_5)
            - mu * (1.0 / r2_3 - 3.0 * x2 * x2 / r2_5)
            - k3 * (1.0 / r2_5 - 5.0 * x2 * x2 / r2_7);
        let mut m22 = n * n
            - k1 * (1.0 / r1_3 - 3.0 * y * y / r1_5)
            - mu * (1.0 / r2_3 - 3.0 * y * y / r2_5)
            - k3 * (1.0 / r2_5 - 5.0 * y * y / r2_7);
        let cross = 3.0 * k1 * x1 * y / r1_5 + 3.0 * mu * x2 * y / r2_5 + 5.0 * k3 * x2 * y / r2_7;
        let mut m12 = cross;
        let mut m21 = cross;

        let mut v = [[0.0, 2.0 * n], [-2.0 * n, 0.0]];
        if w1 != 0.0 {
            m11 -= 2.0 * n * w1 * y * x1 / r1_4;
            m22 += 2.0 * n * w1 * x1 * y / r1_4;
            m12 += n * w1 * (1.0 / r1_2 - 2.0 * y * y / r1_4);
            m21 -= n * w1 * (1.0 / r1_2 - 2.0 * x1 * x1 / r1_4);
            v[0][0] -= w1 / r1_2 * (x1 * x1 / r1_2 + 1.0);
            v[0][1] -= w1 * x1 * y / r1_4;
            v[1][0] -= w1 * x1 * y / r1_4;
            v[1][1] -= w1 / r1_2 * (y * y / r1_2 + 1.0);
        }
        Ok(Linearization {
            position: [[m11, m12], [m21, m22]],
            velocity: v,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MU: f64 = 0.00003;

    fn classical() -> Model {
        Model::new(SystemParams::classical(MU)).unwrap()
    }

    fn dragged() -> Model {
        Model::new(SystemParams::with_defaults(0.75, 0.0024)).unwrap()
    }

    fn l4() -> (f64, f64) {
        (0.5 - MU, 3f64.sqrt() / 2.0)
    }

    #[test]
    fn classical_l4_jacobi_constant() {
        let (x, y) = l4();
        let c = classical().jacobi(&State::at_rest(x, y)).unwrap();
        assert!((c - (3.0 - MU + MU * MU)).abs() < 1e-12);
        assert!((c - 2.99997).abs() < 5e-6);
    }

    #[test]
    fn classical_l4_is_rest_point() {
        let (x, y) = l4();
        let m = classical();
        let (ux, uy) = m.grad_at_rest(x, y).unwrap();
        assert!(ux.abs() < 1e-12 && uy.abs() < 1e-12);
        let (ax, ay) = m.accel(&State::at_rest(x, y)).unwrap();
        assert!(ax.abs() < 1e-12 && ay.abs() < 1e-12);
    }

    #[test]
    fn no_velocity_dependence_without_drag() {
        let m = Model::new(SystemParams::with_defaults(1.0, 0.01)).unwrap();
        let moving = State::new(0.3, 0.4, 0.7, -0.2);
        let resting = State::at_rest(0.3, 0.4);
        assert_eq!(
            m.force_function(&moving).unwrap(),
            m.force_function(&resting).unwrap()
        );
    }

    #[test]
    fn drag_acts_on_velocity() {
        let m = dragged();
        let (ax0, _) = m.accel(&State::at_rest(0.3, 0.4)).unwrap();
        // Coriolis removed so only the drag bracket differs
        let s = State::new(0.3, 0.4, 0.5, 0.0);
        let (ux, _) = m.gradient(&s).unwrap();
        let (ux0, _) = m.gradient(&State::at_rest(0.3, 0.4)).unwrap();
        assert_ne!(ux, ux0);
        let (ax, _) = m.accel(&s).unwrap();
        assert_ne!(ax, ax0);
    }

    #[test]
    fn drag_breaks_collinearity() {
        let m = dragged();
        let d = m.derived();
        for &x in &[-1.0, 0.5, 1.2] {
            let (_, uy) = m.grad_at_rest(x, 0.0).unwrap();
            let r1 = x + MU;
            let expected = -d.n * d.w1 * (x + MU) / (r1 * r1);
            assert!(uy != 0.0);
            assert!((uy - expected).abs() <= 1e-12 * expected.abs());
        }
    }

    #[test]
    fn gradient_matches_central_differences() {
        let h = 1e-6;
        for m in [
            classical(),
            dragged(),
            Model::new(SystemParams::with_defaults(0.3, 0.05)).unwrap(),
        ] {
            for &(x, y) in &[
                (0.3, 0.5),
                (-0.7, 0.2),
                (1.1, -0.3),
                (0.9, 0.05),
                (-1.2, -0.6),
            ] {
                let u = |x, y| m.force_function(&State::at_rest(x, y)).unwrap();
                let gx = (u(x + h, y) - u(x - h, y)) / (2.0 * h);
                let gy = (u(x, y + h) - u(x, y - h)) / (2.0 * h);
                let (ux, uy) = m.grad_at_rest(x, y).unwrap();
                assert!((gx - ux).abs() < 1e-6, "{gx} {ux}");
                assert!((gy - uy).abs() < 1e-6, "{gy} {uy}");
            }
        }
    }

    #[test]
    fn mirror_symmetry_without_drag() {
        let m = Model::new(SystemParams::with_defaults(1.0, 0.02)).unwrap();
        for &(x, y) in &[(0.2, 0.3), (-0.8, 0.9), (1.3, 0.01)] {
            let up = m.force_function(&State::at_rest(x, y)).unwrap();
            let down = m.force_function(&State::at_rest(x, -y)).unwrap();
            assert_eq!(up, down);
            let (_, gy_up) = m.grad_at_rest(x, y).unwrap();
            let (_, gy_down) = m.grad_at_rest(x, -y).unwrap();
            assert_eq!(gy_up, -gy_down);
        }
    }

    #[test]
    fn drag_breaks_mirror_symmetry() {
        let m = dragged();
        let up = m.force_function(&State::at_rest(0.2, 0.3)).unwrap();
        let down = m.force_function(&State::at_rest(0.2, -0.3)).unwrap();
        assert_ne!(up, down);
    }

    #[test]
    fn jacobi_depends_on_speed_only() {
        let m = Model::new(SystemParams::with_defaults(1.0, 0.01)).unwrap();
        let a = m.jacobi(&State::new(0.4, 0.6, 0.3, 0.4)).unwrap();
        let b = m.jacobi(&State::new(0.4, 0.6, -0.5, 0.0)).unwrap();
        assert!((a - b).abs() < 1e-15);
        let rest = m.jacobi(&State::at_rest(0.4, 0.6)).unwrap();
        assert!((rest - a - 0.25).abs() < 1e-15);
    }

    #[test]
    fn collision_floor() {
        let m = classical();
        assert!(matches!(
            m.grad_at_rest(-MU, 0.0),
            Err(Error::Collision { .. })
        ));
        assert!(matches!(
            m.jacobi(&State::at_rest(1.0 - MU, 0.0)),
            Err(Error::Collision { .. })
        ));
        let m = m.with_collision_floor(1e-3);
        assert!(m.grad_at_rest(1.0 - MU + 5e-4, 0.0).is_err());
        assert!(m.grad_at_rest(1.0 - MU + 5e-3, 0.0).is_ok());
    }

    #[test]
    fn linearization_matches_differences() {
        let h = 1e-6;
        for m in [
            classical(),
            dragged(),
            Model::new(SystemParams::with_defaults(0.4, 0.03)).unwrap(),
        ] {
            for &(x, y) in &[(0.3, 0.5), (-0.7, 0.2), (1.1, -0.3), (0.95, 0.01)] {
                let lin = m.linearization(x, y).unwrap();
                let g = |x, y| m.grad_at_rest(x, y).unwrap();
                let dx = (
                    (g(x + h, y).0 - g(x - h, y).0) / (2.0 * h),
                    (g(x + h, y).1 - g(x - h, y).1) / (2.0 * h),
                );
                let dy = (
                    (g(x, y + h).0 - g(x, y - h).0) / (2.0 * h),
                    (g(x, y + h).1 - g(x, y - h).1) / (2.0 * h),
                );
                let p = lin.position;
                for (num, ana) in [
                    (dx.0, p[0][0]),
                    (dy.0, p[0][1]),
                    (dx.1, p[1][0]),
                    (dy.1, p[1][1]),
                ] {
                    assert!(
                        (num - ana).abs() < 1e-5 * (1.0 + ana.abs()),
                        "{num} vs {ana}"
                    );
                }
                // accelerations are linear in velocity, so unit differences are exact up to rounding
                let s = State::at_rest(x, y);
                let a0 = m.accel(&s).unwrap();
                let ax = m.accel(&State::new(x, y, 1.0, 0.0)).unwrap();
                let ay = m.accel(&State::new(x, y, 0.0, 1.0)).unwrap();
                let v = lin.velocity;
                assert!((ax.0 - a0.0 - v[0][0]).abs() < 1e-13);
                assert!((ax.1 - a0.1 - v[1][0]).abs() < 1e-13);
                assert!((ay.0 - a0.0 - v[0][1]).abs() < 1e-13);
                assert!((ay.1 - a0.1 - v[1][1]).abs() < 1e-13);
            }
        }
    }
}
