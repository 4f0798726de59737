//! Generic discrete LTV prediction machinery: per-step transition/input
//! blocks for all actuation types, the stacked prediction matrices `F`/`G`,
//! and the explicit PWM linearization blocks that feed the refinement QP.

use nalgebra::{DMatrix, DVector, Matrix6, Vector6};

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Feasibility slack for the pulse box `0 ≤ τ, 0 ≤ κ, τ + κ ≤ T` [s].
pub const BOX_TOL: f64 = 1e-9;

/// Thrust axis in the LVLH frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Shape of one scalar input over a sample interval `[t_k, t_k + T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputMode {
    /// Constant-magnitude pulse with start offset and width [s].
    Pwm { start: f64, width: f64 },
    /// Constant over the whole interval.
    Pam,
    /// Dirac impulse at the given offset [s]; produces a velocity jump.
    Impulse { offset: f64 },
}

/// The capability the prediction builders need from a plant: transition
/// matrices satisfying identity/composition, and discrete input columns.
pub trait LtvPlant {
    /// Unforced state transition over `[t_from, t_to]`.
    fn transition(&self, t_from: f64, t_to: f64) -> Result<Matrix6<f64>>;

    /// One column of the discrete input matrix for the given axis and
    /// actuation mode over `[t_k, t_k + t_sample]`.
    fn input_column(
        &self,
        t_k: f64,
        t_sample: f64,
        mode: InputMode,
        axis: Axis,
    ) -> Result<Vector6<f64>>;
}

/// Positive- and negative-channel pulse of one axis over one interval.
/// Starts and widths are offsets in seconds relative to the interval start.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PulsePair {
    pub start_plus: f64,
    pub width_plus: f64,
    pub start_minus: f64,
    pub width_minus: f64,
}

impl PulsePair {
    fn validate(&self, t_sample: f64) -> Result<()> {
        for (start, width) in [
            (self.start_plus, self.width_plus),
            (self.start_minus, self.width_minus),
        ] {
            if !(start.is_finite() && width.is_finite())
                || start < -BOX_TOL
                || width < -BOX_TOL
                || start + width > t_sample + BOX_TOL
            {
                return Err(Error::InputDomain(format!(
                    "pulse (start={start}, width={width}) outside [0, {t_sample}] box"
                )));
            }
        }
        Ok(())
    }

    fn is_zero(&self) -> bool {
        self.width_plus == 0.0 && self.width_minus == 0.0
    }
}

/// One step's pulses together with the fixed magnitudes: the unit the MPC
/// applies at each instant and the truth model consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleStep {
    pub t_sample: f64,
    pub pulses: [PulsePair; 3],
    pub u_plus: [f64; 3],
    pub u_minus: [f64; 3],
}

impl ScheduleStep {
    pub fn zero(t_sample: f64, u_plus: [f64; 3], u_minus: [f64; 3]) -> Self {
        let centered = PulsePair {
            start_plus: 0.5 * t_sample,
            width_plus: 0.0,
            start_minus: 0.5 * t_sample,
            width_minus: 0.0,
        };
        Self { t_sample, pulses: [centered; 3], u_plus, u_minus }
    }

    /// ΔV expended by this step [m/s].
    pub fn fuel(&self) -> f64 {
        (0..3)
            .map(|i| {
                self.u_plus[i] * self.pulses[i].width_plus
                    + self.u_minus[i] * self.pulses[i].width_minus
            })
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.pulses.iter().all(PulsePair::is_zero)
    }
}

/// PWM schedule over a horizon: per step and axis, the positive/negative
/// pulse starts and widths, plus the fixed per-axis magnitudes [m/s²].
/// Magnitudes are constants of the problem, not decision variables.
#[derive(Debug, Clone, PartialEq)]
pub struct PwmSchedule {
    pub t_sample: f64,
    pub u_plus: [f64; 3],
    pub u_minus: [f64; 3],
    pub steps: Vec<[PulsePair; 3]>,
}

impl PwmSchedule {
    /// All-zero-width schedule with pulses parked mid-interval.
    pub fn zeros(n_p: usize, t_sample: f64, u_plus: [f64; 3], u_minus: [f64; 3]) -> Self {
        let centered = PulsePair {
            start_plus: 0.5 * t_sample,
            width_plus: 0.0,
            start_minus: 0.5 * t_sample,
            width_minus: 0.0,
        };
        Self { t_sample, u_plus, u_minus, steps: vec![[centered; 3]; n_p] }
    }

    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    /// Number of entries in the stacked decision vector `Υ = [Γ; Λ]`.
    pub fn upsilon_len(&self) -> usize {
        12 * self.steps.len()
    }

    /// Index of a start entry inside `Γ` (step-major, `+` before `-`,
    /// axis-minor). The matching width entry sits at the same offset in `Λ`.
    pub fn gamma_index(step: usize, axis: usize, negative: bool) -> usize {
        6 * step + if negative { 3 } else { 0 } + axis
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps.is_empty() {
            return Err(Error::InputDomain("schedule horizon must be >= 1".into()));
        }
        if !(self.t_sample.is_finite() && self.t_sample > 0.0) {
            return Err(Error::InputDomain(format!("sample time {} must be > 0", self.t_sample)));
        }
        for i in 0..3 {
            if !(self.u_plus[i] > 0.0 && self.u_minus[i] > 0.0) {
                return Err(Error::InputDomain("pulse magnitudes must be strictly positive".into()));
            }
        }
        for pulses in &self.steps {
            for pair in pulses {
                pair.validate(self.t_sample)?;
            }
        }
        Ok(())
    }

    /// Stacked decision vector `Υ = [Γ; Λ]`.
    pub fn upsilon(&self) -> DVector<f64> {
        let n_p = self.horizon();
        let mut ups = DVector::zeros(12 * n_p);
        for (j, pulses) in self.steps.iter().enumerate() {
            for (i, pair) in pulses.iter().enumerate() {
                ups[Self::gamma_index(j, i, false)] = pair.start_plus;
                ups[Self::gamma_index(j, i, true)] = pair.start_minus;
                ups[6 * n_p + Self::gamma_index(j, i, false)] = pair.width_plus;
                ups[6 * n_p + Self::gamma_index(j, i, true)] = pair.width_minus;
            }
        }
        ups
    }

    /// Applies an increment `Δ = [ΔΓ; ΔΛ]` and projects the result exactly
    /// onto the pulse box (componentwise `0 ≤ τ`, `0 ≤ κ`, `τ + κ ≤ T`).
    pub fn apply_increment(&self, delta: &DVector<f64>) -> Result<Self> {
        let n_p = self.horizon();
        if delta.len() != 12 * n_p {
            return Err(Error::Dimension(format!(
                "increment length {} != {}",
                delta.len(),
                12 * n_p
            )));
        }
        let mut out = self.clone();
        for (j, pulses) in out.steps.iter_mut().enumerate() {
            for (i, pair) in pulses.iter_mut().enumerate() {
                let gp = Self::gamma_index(j, i, false);
                let gm = Self::gamma_index(j, i, true);
                let (sp, wp) = clamp_pulse(
                    pair.start_plus + delta[gp],
                    pair.width_plus + delta[6 * n_p + gp],
                    self.t_sample,
                );
                let (sm, wm) = clamp_pulse(
                    pair.start_minus + delta[gm],
                    pair.width_minus + delta[6 * n_p + gm],
                    self.t_sample,
                );
                *pair = PulsePair {
                    start_plus: sp,
                    width_plus: wp,
                    start_minus: sm,
                    width_minus: wm,
                };
            }
        }
        Ok(out)
    }

    /// Projects the schedule onto its box exactly.
    pub fn clamped(&self) -> Self {
        let zero = DVector::zeros(12 * self.horizon());
        self.apply_increment(&zero).expect("zero increment has matching length")
    }

    /// Fixed input stack `U = [U⁺_j; U⁻_j]` per step (6 entries per step).
    pub fn input_stack(&self) -> DVector<f64> {
        let n_p = self.horizon();
        let mut u = DVector::zeros(6 * n_p);
        for j in 0..n_p {
            for i in 0..3 {
                u[6 * j + i] = self.u_plus[i];
                u[6 * j + 3 + i] = self.u_minus[i];
            }
        }
        u
    }

    /// Total ΔV of the schedule `Σ u⁺κ⁺ + u⁻κ⁻` [m/s]. Pulse starts do not
    /// enter the fuel cost.
    pub fn fuel(&self) -> f64 {
        (0..self.horizon()).map(|j| self.step_controls(j).fuel()).sum()
    }

    pub fn step_controls(&self, step: usize) -> ScheduleStep {
        ScheduleStep {
            t_sample: self.t_sample,
            pulses: self.steps[step],
            u_plus: self.u_plus,
            u_minus: self.u_minus,
        }
    }

    /// Receding-horizon warm start: drop the first step, append a zero step.
    pub fn shifted_left(&self) -> Self {
        let mut out = self.clone();
        out.steps.rotate_left(1);
        let centered = PulsePair {
            start_plus: 0.5 * self.t_sample,
            width_plus: 0.0,
            start_minus: 0.5 * self.t_sample,
            width_minus: 0.0,
        };
        *out.steps.last_mut().expect("horizon >= 1") = [centered; 3];
        out
    }
}

/// Projects one channel onto `0 ≤ τ`, `0 ≤ κ`, `τ + κ ≤ T`, exactly in f64.
fn clamp_pulse(start: f64, width: f64, t_sample: f64) -> (f64, f64) {
    let mut start = start.clamp(0.0, t_sample);
    let mut width = width.max(0.0);
    if start + width > t_sample {
        width = t_sample - start;
        // Rounding in `start + (t_sample - start)` can still overshoot by an
        // ulp; nudge down until the box holds exactly.
        while start + width > t_sample {
            width = f64::from_bits(width.to_bits() - 1);
        }
        if width < 0.0 {
            width = 0.0;
            start = t_sample;
        }
    }
    (start, width)
}

/// Actuation type for a horizon build.
#[derive(Debug, Clone, Copy)]
pub enum Actuation<'a> {
    /// Piecewise-constant input; 3 columns per step.
    Pam,
    /// Impulses at fixed per-step, per-axis offsets [s]; 3 columns per step.
    Impulsive { offsets: &'a [[f64; 3]] },
    /// Fixed-magnitude pulses from the schedule; 6 columns per step
    /// (`[B⁺ | -B⁻]` acting on the stacked magnitudes).
    Pwm(&'a PwmSchedule),
}

/// Stacked prediction `X = F x_k + G U` over a horizon, with the per-step
/// transition blocks retained for reuse by the linearization builder.
#[derive(Debug, Clone)]
pub struct PredictionMatrices {
    pub t_start: f64,
    pub t_sample: f64,
    pub n_p: usize,
    /// `(6 N_p) × 6`; block `j` is the transition from `t_k` to `t_{k+j+1}`.
    pub f: DMatrix<f64>,
    /// `(6 N_p) × (m_u N_p)`, block lower triangular.
    pub g: DMatrix<f64>,
    /// `A_j = Φ(t_{k+j+1}, t_{k+j})` for `j = 0..N_p`.
    pub step_transitions: Vec<Matrix6<f64>>,
}

impl PredictionMatrices {
    /// Columns of one input block (3 for PAM/impulsive, 6 for PWM).
    pub fn input_block_cols(&self) -> usize {
        self.g.ncols() / self.n_p
    }
}

/// Builds the stacked prediction matrices for the requested actuation.
pub fn build_prediction(
    plant: &dyn LtvPlant,
    t_k: f64,
    t_sample: f64,
    n_p: usize,
    actuation: Actuation<'_>,
) -> Result<PredictionMatrices> {
    if n_p == 0 {
        return Err(Error::InputDomain("horizon must be >= 1".into()));
    }
    if !(t_sample.is_finite() && t_sample > 0.0) {
        return Err(Error::InputDomain(format!("sample time {t_sample} must be > 0")));
    }

    let m_u = match actuation {
        Actuation::Pam => 3,
        Actuation::Impulsive { offsets } => {
            if offsets.len() != n_p {
                return Err(Error::Dimension(format!(
                    "impulse offsets cover {} steps, horizon is {n_p}",
                    offsets.len()
                )));
            }
            for step in offsets {
                for &tau in step {
                    if !(-BOX_TOL..=t_sample + BOX_TOL).contains(&tau) {
                        return Err(Error::InputDomain(format!(
                            "impulse offset {tau} outside [0, {t_sample}]"
                        )));
                    }
                }
            }
            3
        }
        Actuation::Pwm(schedule) => {
            schedule.validate()?;
            if schedule.horizon() != n_p {
                return Err(Error::Dimension(format!(
                    "schedule horizon {} != {n_p}",
                    schedule.horizon()
                )));
            }
            if schedule.t_sample != t_sample {
                return Err(Error::InputDomain(format!(
                    "schedule sample time {} != {t_sample}",
                    schedule.t_sample
                )));
            }
            6
        }
    };

    let mut step_transitions = Vec::with_capacity(n_p);
    let mut input_blocks: Vec<DMatrix<f64>> = Vec::with_capacity(n_p);
    for j in 0..n_p {
        let t_j = t_k + j as f64 * t_sample;
        step_transitions.push(plant.transition(t_j, t_j + t_sample)?);

        let mut block = DMatrix::zeros(6, m_u);
        match actuation {
            Actuation::Pam => {
                for axis in Axis::ALL {
                    let col = plant.input_column(t_j, t_sample, InputMode::Pam, axis)?;
                    block.set_column(axis.index(), &col);
                }
            }
            Actuation::Impulsive { offsets } => {
                for axis in Axis::ALL {
                    let mode = InputMode::Impulse { offset: offsets[j][axis.index()] };
                    let col = plant.input_column(t_j, t_sample, mode, axis)?;
                    block.set_column(axis.index(), &col);
                }
            }
            Actuation::Pwm(schedule) => {
                for axis in Axis::ALL {
                    let pair = schedule.steps[j][axis.index()];
                    let plus = plant.input_column(
                        t_j,
                        t_sample,
                        InputMode::Pwm { start: pair.start_plus, width: pair.width_plus },
                        axis,
                    )?;
                    let minus = plant.input_column(
                        t_j,
                        t_sample,
                        InputMode::Pwm { start: pair.start_minus, width: pair.width_minus },
                        axis,
                    )?;
                    block.set_column(axis.index(), &plus);
                    block.set_column(3 + axis.index(), &(-minus));
                }
            }
        }
        input_blocks.push(block);
    }

    let (f, g) = stack_blocks(&step_transitions, &input_blocks, n_p);
    Ok(PredictionMatrices { t_start: t_k, t_sample, n_p, f, g, step_transitions })
}

fn matrix6_to_dyn(m: &Matrix6<f64>) -> DMatrix<f64> {
    DMatrix::from_column_slice(6, 6, m.as_slice())
}

/// Shared stacking recursion: `F` rows are cumulative transitions, `G` block
/// `(j, l)` is `A_{j} ... A_{l+1} B_l` (block lower triangular by causality).
fn stack_blocks(
    step_transitions: &[Matrix6<f64>],
    input_blocks: &[DMatrix<f64>],
    n_p: usize,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let m_u = input_blocks[0].ncols();
    let mut f = DMatrix::zeros(6 * n_p, 6);
    let mut g = DMatrix::zeros(6 * n_p, m_u * n_p);

    let mut cumulative = step_transitions[0];
    f.view_mut((0, 0), (6, 6)).copy_from(&cumulative);
    for j in 1..n_p {
        cumulative = step_transitions[j] * cumulative;
        f.view_mut((6 * j, 0), (6, 6)).copy_from(&cumulative);
    }

    let steps_dyn: Vec<DMatrix<f64>> = step_transitions.iter().map(matrix6_to_dyn).collect();
    for l in 0..n_p {
        let mut block = input_blocks[l].clone();
        g.view_mut((6 * l, m_u * l), (6, m_u)).copy_from(&block);
        for j in (l + 1)..n_p {
            block = &steps_dyn[j] * &block;
            g.view_mut((6 * j, m_u * l), (6, m_u)).copy_from(&block);
        }
    }
    (f, g)
}

/// Evaluates the stacked prediction `X = F x_k + G U`.
pub fn predict_states(
    pm: &PredictionMatrices,
    x_k: &StateVector,
    inputs: &DVector<f64>,
) -> Result<DVector<f64>> {
    if inputs.len() != pm.g.ncols() {
        return Err(Error::Dimension(format!(
            "input stack length {} != {}",
            inputs.len(),
            pm.g.ncols()
        )));
    }
    Ok(&pm.f * x_k.to_vector() + &pm.g * inputs)
}

/// Analytic derivative blocks of one step's pulse responses with respect to
/// pulse starts and widths, evaluated at the step's current pulses:
/// `B^Δτ` and `B^Δκ`, each 6×6 with columns ordered `[+x +y +z -x -y -z]`.
/// Negative-channel columns carry the minus sign of the `-B⁻U⁻` term.
pub fn pwm_derivative_blocks(
    plant: &dyn LtvPlant,
    t_k: f64,
    step: &ScheduleStep,
) -> Result<(Matrix6<f64>, Matrix6<f64>)> {
    let t_sample = step.t_sample;
    let mut b_tau = Matrix6::zeros();
    let mut b_kappa = Matrix6::zeros();
    for axis in Axis::ALL {
        let i = axis.index();
        let pair = step.pulses[i];
        pair.validate(t_sample)?;

        for (negative, start, width, magnitude) in [
            (false, pair.start_plus, pair.width_plus, step.u_plus[i]),
            (true, pair.start_minus, pair.width_minus, step.u_minus[i]),
        ] {
            let end_offset = (start + width).min(t_sample);
            let at_end =
                plant.input_column(t_k, t_sample, InputMode::Impulse { offset: end_offset }, axis)?;
            let at_start =
                plant.input_column(t_k, t_sample, InputMode::Impulse { offset: start.min(t_sample) }, axis)?;
            let sign = if negative { -1.0 } else { 1.0 };
            let col = i + if negative { 3 } else { 0 };
            b_tau.set_column(col, &(sign * magnitude * (at_end - at_start)));
            b_kappa.set_column(col, &(sign * magnitude * at_end));
        }
    }
    Ok((b_tau, b_kappa))
}

/// Builds `G^Δ = [G^Δτ | G^Δκ]` for the schedule: each half mirrors the block
/// lower triangular structure of `G` with `B^Δτ`/`B^Δκ` step blocks, so that
/// `X(Υ + Δ) ≈ X(Υ) + G^Δ Δ` for stacked increments `Δ = [ΔΓ; ΔΛ]`.
/// Reuses the per-step transitions cached in `pm`.
pub fn build_delta_prediction(
    plant: &dyn LtvPlant,
    pm: &PredictionMatrices,
    schedule: &PwmSchedule,
) -> Result<DMatrix<f64>> {
    let n_p = pm.n_p;
    if schedule.horizon() != n_p {
        return Err(Error::Dimension(format!(
            "schedule horizon {} != {n_p}",
            schedule.horizon()
        )));
    }
    schedule.validate()?;

    let mut tau_blocks = Vec::with_capacity(n_p);
    let mut kappa_blocks = Vec::with_capacity(n_p);
    for j in 0..n_p {
        let t_j = pm.t_start + j as f64 * pm.t_sample;
        let (b_tau, b_kappa) = pwm_derivative_blocks(plant, t_j, &schedule.step_controls(j))?;
        tau_blocks.push(matrix6_to_dyn(&b_tau));
        kappa_blocks.push(matrix6_to_dyn(&b_kappa));
    }

    let (_, g_tau) = stack_blocks(&pm.step_transitions, &tau_blocks, n_p);
    let (_, g_kappa) = stack_blocks(&pm.step_transitions, &kappa_blocks, n_p);

    let mut g_delta = DMatrix::zeros(6 * n_p, 12 * n_p);
    g_delta.view_mut((0, 0), (6 * n_p, 6 * n_p)).copy_from(&g_tau);
    g_delta.view_mut((0, 6 * n_p), (6 * n_p, 6 * n_p)).copy_from(&g_kappa);
    Ok(g_delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_index_layout_is_step_major_plus_first() {
        assert_eq!(PwmSchedule::gamma_index(0, 0, false), 0);
        assert_eq!(PwmSchedule::gamma_index(0, 2, false), 2);
        assert_eq!(PwmSchedule::gamma_index(0, 0, true), 3);
        assert_eq!(PwmSchedule::gamma_index(1, 0, false), 6);
        assert_eq!(PwmSchedule::gamma_index(2, 1, true), 16);
    }

    #[test]
    fn upsilon_round_trip_through_increment() {
        let mut schedule = PwmSchedule::zeros(3, 60.0, [0.1; 3], [0.1; 3]);
        schedule.steps[1][2] = PulsePair {
            start_plus: 5.0,
            width_plus: 12.0,
            start_minus: 40.0,
            width_minus: 3.0,
        };
        let ups = schedule.upsilon();
        assert_eq!(ups[PwmSchedule::gamma_index(1, 2, false)], 5.0);
        assert_eq!(ups[18 + PwmSchedule::gamma_index(1, 2, true)], 3.0);

        let same = schedule.apply_increment(&DVector::zeros(36)).unwrap();
        assert_eq!(same, schedule);
    }

    #[test]
    fn clamp_pulse_is_exact() {
        let t = 60.0;
        for (s, w) in [(0.1, 59.95), (-1.0, 10.0), (59.0, 5.0), (61.0, 3.0), (30.0, -2.0)] {
            let (cs, cw) = clamp_pulse(s, w, t);
            assert!(cs >= 0.0 && cw >= 0.0 && cs + cw <= t, "({s},{w}) -> ({cs},{cw})");
        }
    }

    #[test]
    fn schedule_validation_rejects_spillover() {
        let mut schedule = PwmSchedule::zeros(2, 60.0, [0.1; 3], [0.1; 3]);
        schedule.steps[0][0].start_plus = 55.0;
        schedule.steps[0][0].width_plus = 10.0;
        assert!(schedule.validate().is_err());
    }

    #[test]
    fn shifted_left_drops_first_and_zero_pads() {
        let mut schedule = PwmSchedule::zeros(3, 60.0, [0.1; 3], [0.1; 3]);
        schedule.steps[0][0].width_plus = 9.0;
        schedule.steps[1][1].width_minus = 4.0;
        let shifted = schedule.shifted_left();
        assert_eq!(shifted.steps[0][1].width_minus, 4.0);
        assert!(shifted.step_controls(2).is_zero());
        assert_eq!(shifted.horizon(), 3);
    }

    #[test]
    fn fuel_ignores_starts() {
        let mut a = PwmSchedule::zeros(2, 60.0, [0.2; 3], [0.1; 3]);
        a.steps[0][0].width_plus = 10.0;
        a.steps[1][2].width_minus = 6.0;
        let mut b = a.clone();
        b.steps[0][0].start_plus = 0.0;
        b.steps[1][2].start_minus = 50.0;
        assert_eq!(a.fuel(), b.fuel());
        assert_eq!(a.fuel(), 0.2 * 10.0 + 0.1 * 6.0);
    }
}
