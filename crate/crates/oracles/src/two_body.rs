//! Nonlinear two-body oracle: target and chaser integrated independently in
//! inertial coordinates, then differenced in the target's LVLH frame (x
//! radial, z along the orbital angular momentum, y completing the triad).

use nalgebra::{Matrix3, Vector3, Vector6};

use crate::kepler::solve_kepler_bisect;

/// Keplerian target orbit (perifocal coordinates serve as the inertial frame;
/// the motion is planar so no further rotation is needed).
#[derive(Debug, Clone, Copy)]
pub struct TwoBodyOrbit {
    pub a: f64,
    pub e: f64,
    pub mu: f64,
    pub t_p: f64,
}

impl TwoBodyOrbit {
    /// Exact inertial target state at epoch `t`.
    pub fn target_state(&self, t: f64) -> (Vector3<f64>, Vector3<f64>) {
        let n = (self.mu / self.a.powi(3)).sqrt();
        let ecc = solve_kepler_bisect(self.e, n * (t - self.t_p));
        let (se, ce) = (ecc.sin(), ecc.cos());
        let b = self.a * (1.0 - self.e * self.e).sqrt();
        let r = Vector3::new(self.a * (ce - self.e), b * se, 0.0);
        let radius = self.a * (1.0 - self.e * ce);
        let v = Vector3::new(-self.a * self.a * n * se / radius, self.a * n * b * ce / radius, 0.0);
        (r, v)
    }
}

/// Columns are the LVLH axes expressed in inertial coordinates.
fn lvlh_basis(r: &Vector3<f64>, v: &Vector3<f64>) -> Matrix3<f64> {
    let x_hat = r / r.norm();
    let h = r.cross(v);
    let z_hat = h / h.norm();
    let y_hat = z_hat.cross(&x_hat);
    Matrix3::from_columns(&[x_hat, y_hat, z_hat])
}

/// Maps inertial target/chaser states to the LVLH relative state (relative
/// velocity is the rotating-frame derivative).
pub fn to_lvlh(
    r_t: &Vector3<f64>,
    v_t: &Vector3<f64>,
    r_c: &Vector3<f64>,
    v_c: &Vector3<f64>,
) -> Vector6<f64> {
    let basis = lvlh_basis(r_t, v_t);
    let omega_inertial = r_t.cross(v_t) / r_t.norm_squared();
    let rel_pos = basis.transpose() * (r_c - r_t);
    let omega = basis.transpose() * omega_inertial;
    let rel_vel = basis.transpose() * (v_c - v_t) - omega.cross(&rel_pos);
    Vector6::new(rel_pos.x, rel_pos.y, rel_pos.z, rel_vel.x, rel_vel.y, rel_vel.z)
}

/// Inverse of [`to_lvlh`]: reconstructs the chaser inertial state.
pub fn from_lvlh(
    r_t: &Vector3<f64>,
    v_t: &Vector3<f64>,
    x: &Vector6<f64>,
) -> (Vector3<f64>, Vector3<f64>) {
    let basis = lvlh_basis(r_t, v_t);
    let omega_inertial = r_t.cross(v_t) / r_t.norm_squared();
    let omega = basis.transpose() * omega_inertial;
    let rel_pos = Vector3::new(x[0], x[1], x[2]);
    let rel_vel = Vector3::new(x[3], x[4], x[5]);
    let r_c = r_t + basis * rel_pos;
    let v_c = v_t + basis * (rel_vel + omega.cross(&rel_pos));
    (r_c, v_c)
}

fn rk4_two_body(mu: f64, mut y: [Vector3<f64>; 2], dt: f64, steps: usize) -> [Vector3<f64>; 2] {
    let f = |y: &[Vector3<f64>; 2]| {
        let r = y[0];
        [y[1], -mu * r / r.norm().powi(3)]
    };
    for _ in 0..steps {
        let k1 = f(&y);
        let y2 = [y[0] + 0.5 * dt * k1[0], y[1] + 0.5 * dt * k1[1]];
        let k2 = f(&y2);
        let y3 = [y[0] + 0.5 * dt * k2[0], y[1] + 0.5 * dt * k2[1]];
        let k3 = f(&y3);
        let y4 = [y[0] + dt * k3[0], y[1] + dt * k3[1]];
        let k4 = f(&y4);
        y = [
            y[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
    }
    y
}

/// Propagates an unforced LVLH relative state from `t0` to `t1` by integrating
/// target and chaser through the full nonlinear two-body dynamics.
pub fn coast_relative(
    orbit: &TwoBodyOrbit,
    x0: &Vector6<f64>,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Vector6<f64> {
    let (rt0, vt0) = orbit.target_state(t0);
    let (rc0, vc0) = from_lvlh(&rt0, &vt0, x0);
    let dt = (t1 - t0) / steps as f64;
    let yt = rk4_two_body(orbit.mu, [rt0, vt0], dt, steps);
    let yc = rk4_two_body(orbit.mu, [rc0, vc0], dt, steps);
    to_lvlh(&yt[0], &yt[1], &yc[0], &yc[1])
}
