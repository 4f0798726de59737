//! Closed-form Tschauner-Hempel relative motion about an elliptical target
//! orbit: the Yamanaka-Ankersen fundamental matrix pair parameterized by
//! eccentric anomaly, the state transition matrix, the thrust antiderivatives,
//! and the discrete input columns for PWM, PAM and impulsive actuation.
//!
//! The thrust input map is `B(t) = [0₃ₓ₃; I₃ₓ₃]` in the LVLH frame: thrust per
//! unit mass enters the velocity rates directly. That choice is what makes the
//! closed-form antiderivatives below (integrals of the velocity columns of the
//! inverse fundamental matrix) the exact pulse responses.

use nalgebra::{Matrix6, Vector6};

use crate::error::{Error, Result};
use crate::orbit::OrbitParams;
use crate::prediction::{Axis, InputMode, LtvPlant, BOX_TOL};

/// Auxiliary Tschauner-Hempel quantities at eccentric anomaly `E`, with the
/// secular term `J` referenced to `Ê` (so `J = 0` at `E = Ê`). `s` and `c` are
/// the sine/cosine of the true anomaly, `rho = 1 + e cos θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThSymbols {
    pub rho: f64,
    pub s: f64,
    pub c: f64,
    /// Secular term, grows linearly with time: `J = α (t - t̂)`.
    pub j: f64,
    /// Rate factor `n / (1 - e²)^{3/2}` [1/s].
    pub alpha: f64,
    /// Reference eccentric anomaly `Ê` [rad].
    pub e_hat: f64,
}

/// Evaluates the auxiliary symbols at `E` with reference anomaly `Ê`.
pub fn th_symbols(e: f64, n: f64, ecc_anomaly: f64, ref_anomaly: f64) -> ThSymbols {
    let one_m_e2 = 1.0 - e * e;
    let den = 1.0 - e * ecc_anomaly.cos();
    let pow32 = one_m_e2 * one_m_e2.sqrt();
    ThSymbols {
        rho: one_m_e2 / den,
        s: one_m_e2.sqrt() * ecc_anomaly.sin() / den,
        c: (ecc_anomaly.cos() - e) / den,
        j: (ecc_anomaly - ref_anomaly - e * (ecc_anomaly.sin() - ref_anomaly.sin())) / pow32,
        alpha: n / pow32,
        e_hat: ref_anomaly,
    }
}

/// Fundamental matrix solution `Y_E` of the Tschauner-Hempel equations,
/// mapping integration constants to the physical LVLH state
/// `[r_x r_y r_z v_x v_y v_z]`.
pub fn ya_fundamental(e: f64, n: f64, ecc_anomaly: f64, ref_anomaly: f64) -> Matrix6<f64> {
    let ThSymbols { rho, s, c, j, alpha, .. } = th_symbols(e, n, ecc_anomaly, ref_anomaly);
    let rho2 = rho * rho;
    Matrix6::new(
        s, 0.0, 0.0, 2.0 / rho - 3.0 * e * s * j, -c, 0.0,
        c * (1.0 + 1.0 / rho), 1.0 / rho, 0.0, -3.0 * rho * j, s * (1.0 + 1.0 / rho), 0.0,
        0.0, 0.0, c / rho, 0.0, 0.0, s / rho,
        alpha * rho2 * c, 0.0, 0.0, alpha * (-e * s - 3.0 * e * rho2 * j * c), alpha * rho2 * s, 0.0,
        alpha * s * (-1.0 - rho2), alpha * e * s, 0.0, alpha * rho * (3.0 * e * s * rho * j - 3.0), alpha * (c + e + c * rho2), 0.0,
        0.0, 0.0, -s * alpha, 0.0, 0.0, (c + e) * alpha,
    )
}

/// Closed-form inverse `Y_E⁻¹`, including the `J`-proportional first term
/// (which vanishes when `Ê = E`).
pub fn ya_fundamental_inverse(e: f64, n: f64, ecc_anomaly: f64, ref_anomaly: f64) -> Matrix6<f64> {
    let ThSymbols { rho, s, c, j, alpha, .. } = th_symbols(e, n, ecc_anomaly, ref_anomaly);
    let rho2 = rho * rho;
    let one_m_e2 = 1.0 - e * e;
    let secular = Matrix6::new(
        e * rho2 * (1.0 + rho), -e * e * rho2 * s, 0.0, e * e * s / alpha, e * rho / alpha, 0.0,
        rho2 * (1.0 + rho), -e * rho2 * s, 0.0, e * s / alpha, rho / alpha, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
    );
    let bounded = Matrix6::new(
        -s * (rho2 + 2.0 * rho + e * e), e * s * s * (1.0 + rho), 0.0, (c - 2.0 * e / rho) / alpha, -s * (rho + 1.0) / (rho * alpha), 0.0,
        -e * s * (1.0 + rho) * (1.0 + rho), rho2 * (1.0 - c * e) + e * e * s * s, 0.0, (e * c - 2.0 / rho) / alpha, -e * s * (rho + 1.0) / (rho * alpha), 0.0,
        0.0, 0.0, (c + e) * one_m_e2, 0.0, 0.0, -s * one_m_e2 / (alpha * rho),
        rho2 * (1.0 + rho), -e * s * rho2, 0.0, e * s / alpha, rho / alpha, 0.0,
        3.0 * rho * (c + e) - e * rho * s * s, -e * s * c * (1.0 + rho) - e * e * s, 0.0, s / alpha, (c * (rho + 1.0) + e) / (alpha * rho), 0.0,
        0.0, 0.0, s * one_m_e2, 0.0, 0.0, c * one_m_e2 / (alpha * rho),
    );
    (3.0 * j / one_m_e2) * secular + (1.0 / one_m_e2) * bounded
}

/// State transition matrix `Φ(t_to, t_from) = Y_{K(t_to)} Y⁻¹_{K(t_from)}`.
/// The reference anomaly is taken at `t_from`, which zeroes the secular term
/// of the inverse at the left endpoint.
pub fn transition_matrix(params: &OrbitParams, t_from: f64, t_to: f64) -> Result<Matrix6<f64>> {
    let n = params.mean_motion();
    let e = params.eccentricity();
    let e_from = params.eccentric_anomaly_at(t_from)?;
    let e_to = params.eccentric_anomaly_at(t_to)?;
    Ok(ya_fundamental(e, n, e_to, e_from) * ya_fundamental_inverse(e, n, e_from, e_from))
}

/// Closed-form antiderivative `f_i(E) = ∫ Y_E⁻¹ C_{i+3} (1 - e cos E)/n dE`
/// for thrust axis `i`; the building block of every pulse response.
pub fn thrust_antiderivative(
    e: f64,
    n: f64,
    ecc_anomaly: f64,
    ref_anomaly: f64,
    axis: Axis,
) -> Vector6<f64> {
    let one_m_e2 = 1.0 - e * e;
    let alpha = n / (one_m_e2 * one_m_e2.sqrt());
    let sin_e = ecc_anomaly.sin();
    let sin_2e = (2.0 * ecc_anomaly).sin();
    let cos_e = ecc_anomaly.cos();
    let ecc = ecc_anomaly;
    let h = 6.0 * (ref_anomaly - ecc - e * ref_anomaly.sin());
    let pow32 = one_m_e2 * one_m_e2.sqrt();

    match axis {
        Axis::X => {
            let scale = one_m_e2.powf(-3.5) / (2.0 * alpha * alpha);
            scale
                * Vector6::new(
                    2.0 * (1.0 + 6.0 * e * e) * sin_e - 3.0 * e * (2.0 + e * e) * ecc
                        + e * e * cos_e * h
                        + e * e * e * sin_2e / 2.0,
                    2.0 * e * (8.0 - e * e) * sin_e
                        - (4.0 + 7.0 * e * e - 2.0 * e * e * e * e) * ecc
                        + e * cos_e * h
                        + e * e * sin_2e / 2.0,
                    0.0,
                    -2.0 * e * cos_e * pow32,
                    -2.0 * cos_e * pow32,
                    0.0,
                )
        }
        Axis::Y => {
            let scale = one_m_e2.powi(-3) / (2.0 * alpha * alpha);
            scale
                * Vector6::new(
                    cos_e * (4.0 * (1.0 + e * e) - e * cos_e) - e * ecc * h - 3.0 * e * ecc * ecc,
                    e * cos_e * (10.0 - 2.0 * e * e - e * cos_e) - ecc * h - 3.0 * ecc * ecc,
                    0.0,
                    2.0 * ecc * pow32,
                    one_m_e2.sqrt() * (4.0 * sin_e - e * (3.0 * ecc + sin_2e / 2.0)),
                    0.0,
                )
        }
        Axis::Z => {
            let scale = one_m_e2.powf(-2.5) / (4.0 * alpha * alpha);
            scale
                * Vector6::new(
                    0.0,
                    0.0,
                    2.0 * one_m_e2.sqrt() * cos_e * (2.0 - e * cos_e),
                    0.0,
                    0.0,
                    4.0 * (e * e + 1.0) * sin_e - e * (6.0 * ecc + sin_2e),
                )
        }
    }
}

/// Forced-response integral `b_i(r1, r2, r3) = ∫_{r1}^{r2} Φ(r3, s) B_i(s) ds`
/// evaluated through the closed-form antiderivatives:
/// `b_i = Y_{K(r3)} (f_i(K(r2)) - f_i(K(r1)))` with the reference anomaly at
/// `r1` shared by all three factors.
pub fn thrust_integral(
    params: &OrbitParams,
    r1: f64,
    r2: f64,
    r3: f64,
    axis: Axis,
) -> Result<Vector6<f64>> {
    if !(r1 <= r2 + BOX_TOL && r2 <= r3 + BOX_TOL) {
        return Err(Error::InputDomain(format!(
            "thrust integral requires r1 <= r2 <= r3, got ({r1}, {r2}, {r3})"
        )));
    }
    let r2 = r2.clamp(r1, r3.max(r1));
    let n = params.mean_motion();
    let e = params.eccentricity();
    let e1 = params.eccentric_anomaly_at(r1)?;
    let e2 = params.eccentric_anomaly_at(r2)?;
    let e3 = params.eccentric_anomaly_at(r3)?;
    let df = thrust_antiderivative(e, n, e2, e1, axis) - thrust_antiderivative(e, n, e1, e1, axis);
    Ok(ya_fundamental(e, n, e3, e1) * df)
}

/// One column of the discrete input matrix over `[t_k, t_k + t_sample]` for
/// the given actuation mode.
pub fn input_column(
    params: &OrbitParams,
    t_k: f64,
    t_sample: f64,
    mode: InputMode,
    axis: Axis,
) -> Result<Vector6<f64>> {
    if !(t_sample.is_finite() && t_sample > 0.0) {
        return Err(Error::InputDomain(format!("sample time {t_sample} must be > 0")));
    }
    let t_end = t_k + t_sample;
    match mode {
        InputMode::Pwm { start, width } => {
            if start < -BOX_TOL || width < -BOX_TOL || start + width > t_sample + BOX_TOL {
                return Err(Error::InputDomain(format!(
                    "pulse (start={start}, width={width}) outside [0, {t_sample}] box"
                )));
            }
            let from = t_k + start.clamp(0.0, t_sample);
            let to = (from + width.max(0.0)).min(t_end);
            thrust_integral(params, from, to, t_end, axis)
        }
        InputMode::Pam => thrust_integral(params, t_k, t_end, t_end, axis),
        InputMode::Impulse { offset } => {
            if !(-BOX_TOL..=t_sample + BOX_TOL).contains(&offset) {
                return Err(Error::InputDomain(format!(
                    "impulse offset {offset} outside [0, {t_sample}]"
                )));
            }
            let t_apply = t_k + offset.clamp(0.0, t_sample);
            let n = params.mean_motion();
            let e = params.eccentricity();
            let e_apply = params.eccentric_anomaly_at(t_apply)?;
            let e_end = params.eccentric_anomaly_at(t_end)?;
            let yinv_col =
                ya_fundamental_inverse(e, n, e_apply, e_apply).column(3 + axis.index()).into_owned();
            Ok(ya_fundamental(e, n, e_end, e_apply) * yinv_col)
        }
    }
}

impl LtvPlant for OrbitParams {
    fn transition(&self, t_from: f64, t_to: f64) -> Result<Matrix6<f64>> {
        transition_matrix(self, t_from, t_to)
    }

    fn input_column(
        &self,
        t_k: f64,
        t_sample: f64,
        mode: InputMode,
        axis: Axis,
    ) -> Result<Vector6<f64>> {
        input_column(self, t_k, t_sample, mode, axis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::EARTH_MU;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn symbols_circular_reduction() {
        let sym = th_symbols(0.0, 2.5e-4, 1.3, 0.2);
        assert_abs_diff_eq!(sym.rho, 1.0);
        assert_abs_diff_eq!(sym.s, 1.3_f64.sin());
        assert_abs_diff_eq!(sym.c, 1.3_f64.cos());
        assert_abs_diff_eq!(sym.alpha, 2.5e-4);
    }

    #[test]
    fn symbols_secular_term_vanishes_at_reference() {
        let sym = th_symbols(0.7, 1e-3, 0.9, 0.9);
        assert_eq!(sym.j, 0.0);
    }

    #[test]
    fn symbols_high_eccentricity_at_periapsis() {
        let sym = th_symbols(0.7, 1e-3, 0.0, 0.0);
        assert_relative_eq!(sym.rho, 1.7, max_relative = 1e-15);
        assert_abs_diff_eq!(sym.s, 0.0);
        assert_abs_diff_eq!(sym.c, 1.0);
    }

    #[test]
    fn fundamental_circular_entries() {
        let y = ya_fundamental(0.0, 1e-3, 0.8, 0.0);
        assert_abs_diff_eq!(y[(0, 0)], 0.8_f64.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(y[(2, 2)], 0.8_f64.cos(), epsilon = 1e-15);
    }

    // Transcription guard: frozen from an independent 40-digit evaluation of
    // the closed forms at e = 0.7, n = 1e-3, E = 1, Ê = 0.
    #[test]
    fn fundamental_matrix_frozen_sample() {
        let y = ya_fundamental(0.7, 1e-3, 1.0, 0.0);
        let expected = Matrix6::new(
            9.6645497874286646e-01, 0.0, 0.0, 1.4827707257449818e-01, 2.5683608403634750e-01, 0.0,
            -5.6996881762823026e-01, 1.2191929135143180e+00, 0.0, -2.7765404798406719e+00, 2.1447500400568003e+00, 0.0,
            0.0, 0.0, -3.1313273359188271e-01, 0.0, 0.0, 1.1782950613139336e+00,
            -4.7441227348581121e-04, 0.0, 0.0, -7.3331523168105488e-04, 1.7851779099006893e-03, 0.0,
            -4.4387223390052960e-03, 1.8574811003732245e-03, 0.0, -2.5259088786457103e-03, 7.4235950197255169e-04, 0.0,
            0.0, 0.0, -2.6535444291046067e-03, 0.0, 0.0, 1.2167717754583631e-03,
        );
        assert_relative_eq!(y, expected, max_relative = 1e-14);
    }

    #[test]
    fn inverse_matrix_frozen_sample() {
        let yi = ya_fundamental_inverse(0.7, 1e-3, 1.0, 0.3);
        let expected = Matrix6::new(
            -9.1185485684525069e-01, 6.9811066563394175e-01, 0.0, -5.1698659026343762e+02, -4.5821816233750428e+02, 0.0,
            1.8910444538742555e+00, 1.1737100505357967e-01, 0.0, -6.0491941164397917e+02, 4.6132480282811184e+02, 0.0,
            0.0, 0.0, 4.4316391596365245e-01, 0.0, 0.0, -4.2915020225202721e+02,
            2.4010853156610641e+00, -8.9241041930400411e-01, 0.0, 4.8313083420707568e+02, 5.8575048701338960e+02, 0.0,
            1.0866511904456433e+00, -3.0841704883428250e-01, 0.0, 6.9018690601010826e+02, 2.0243537351211953e+02, 0.0,
            0.0, 0.0, 9.6645497874286646e-01, 0.0, 0.0, -1.1404696528460069e+02,
        );
        assert_relative_eq!(yi, expected, max_relative = 1e-13);
    }

    #[test]
    fn inverse_reference_at_same_anomaly_drops_secular_part() {
        let e = 0.7;
        let n = 1e-3;
        let at_ref = ya_fundamental_inverse(e, n, 1.2, 1.2);
        // With Ê = E the result must equal the bounded matrix alone, which is
        // what the J = 0 path produces; cross-check against a explicit J = 0
        // evaluation through a different reference producing the same E.
        let sym = th_symbols(e, n, 1.2, 1.2);
        assert_eq!(sym.j, 0.0);
        let numeric = ya_fundamental(e, n, 1.2, 1.2).try_inverse().unwrap();
        assert_relative_eq!(at_ref, numeric, max_relative = 1e-9);
    }

    #[test]
    fn transition_identity_at_equal_times() {
        let params = OrbitParams::new(2.2927123333e7, 0.7, EARTH_MU, -594.47).unwrap();
        let phi = transition_matrix(&params, 321.0, 321.0).unwrap();
        assert_relative_eq!(phi, Matrix6::identity(), epsilon = 1e-11);
    }

    #[test]
    fn antiderivative_out_of_plane_structure() {
        let f = thrust_antiderivative(0.7, 1e-3, 1.1, 0.2, Axis::Z);
        assert_eq!(f[0], 0.0);
        assert_eq!(f[1], 0.0);
        assert_eq!(f[3], 0.0);
        assert_eq!(f[4], 0.0);
        assert!(f[2] != 0.0 && f[5] != 0.0);
    }

    #[test]
    fn antiderivative_circular_limit_x() {
        // At e = 0 the first component of f_x collapses to sin(E)/n².
        let n = 1e-3;
        let f = thrust_antiderivative(0.0, n, 0.7, 0.0, Axis::X);
        assert_relative_eq!(f[0], 0.7_f64.sin() / (n * n), max_relative = 1e-13);
    }

    #[test]
    fn thrust_integral_empty_interval_is_zero() {
        let params = OrbitParams::new(2.2927123333e7, 0.7, EARTH_MU, -594.47).unwrap();
        let b = thrust_integral(&params, 100.0, 100.0, 160.0, Axis::Y).unwrap();
        assert_abs_diff_eq!(b.norm(), 0.0);
    }

    #[test]
    fn thrust_integral_additivity() {
        let params = OrbitParams::new(2.2927123333e7, 0.7, EARTH_MU, -594.47).unwrap();
        for axis in Axis::ALL {
            let whole = thrust_integral(&params, 10.0, 55.0, 60.0, axis).unwrap();
            let first = thrust_integral(&params, 10.0, 30.0, 60.0, axis).unwrap();
            let second = thrust_integral(&params, 30.0, 55.0, 60.0, axis).unwrap();
            assert_relative_eq!(whole, first + second, epsilon = 1e-9 * whole.norm().max(1.0));
        }
    }

    #[test]
    fn pam_column_is_full_width_pulse_exactly() {
        let params = OrbitParams::new(2.2927123333e7, 0.7, EARTH_MU, -594.47).unwrap();
        for axis in Axis::ALL {
            let pam = input_column(&params, 120.0, 60.0, InputMode::Pam, axis).unwrap();
            let pwm = input_column(
                &params,
                120.0,
                60.0,
                InputMode::Pwm { start: 0.0, width: 60.0 },
                axis,
            )
            .unwrap();
            assert_eq!(pam, pwm);
        }
    }

    #[test]
    fn narrow_pulse_approaches_impulse() {
        let params = OrbitParams::new(2.2927123333e7, 0.7, EARTH_MU, -594.47).unwrap();
        let t_sample = 60.0;
        let width = 1e-6 * t_sample;
        for axis in Axis::ALL {
            let tau = 23.0;
            let pulse = input_column(
                &params,
                0.0,
                t_sample,
                InputMode::Pwm { start: tau, width },
                axis,
            )
            .unwrap();
            let impulse =
                input_column(&params, 0.0, t_sample, InputMode::Impulse { offset: tau }, axis)
                    .unwrap();
            assert_relative_eq!(pulse / width, impulse, max_relative = 1e-4);
        }
    }

    #[test]
    fn input_column_rejects_out_of_box_pulses() {
        let params = OrbitParams::new(2.2927123333e7, 0.7, EARTH_MU, -594.47).unwrap();
        assert!(input_column(
            &params,
            0.0,
            60.0,
            InputMode::Pwm { start: 55.0, width: 10.0 },
            Axis::X
        )
        .is_err());
        assert!(
            input_column(&params, 0.0, 60.0, InputMode::Impulse { offset: 75.0 }, Axis::X).is_err()
        );
    }
}
