//! Exact Born-rule engine for 2- and 3-qubit pure states under local
//! projective measurements.
//!
//! This is deliberately plain state-vector arithmetic: build the state, build
//! rank-1 projectors for each party, sandwich, read off the probability. It
//! serves as the brute-force oracle against which every closed-form
//! expression in [`crate::cabello`] is checked.

use num_complex::Complex64;
use thiserror::Error;

use crate::boxworld::{JointDistribution, TwoQubitDistribution};
use crate::scenario::{Outcome, OutcomeTriple, Setting, SettingTriple};

pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum QuantumError {
    #[error("entanglement parameter t = {0} outside [0, 1]")]
    InvalidGhzParam(f64),
    #[error("state simulation supports 2 or 3 qubits, got {0}")]
    InvalidQubitCount(usize),
    #[error("measurement angle {name} = {value} outside [0, pi/2]")]
    InvalidAngle { name: &'static str, value: f64 },
    #[error("state vector has non-unit norm (|norm^2 - 1| = {0:e})")]
    NotNormalized(f64),
    #[error("state vector length {0} is not a power of two")]
    BadDimension(usize),
    #[error("state dimension {state} inconsistent with {parties} parties")]
    DimensionMismatch { state: usize, parties: usize },
}

/// Entanglement parameter of the two-branch GHZ-like state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhzParam(f64);

impl GhzParam {
    pub fn new(t: f64) -> Result<GhzParam, QuantumError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(QuantumError::InvalidGhzParam(t));
        }
        Ok(GhzParam(t))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Per-qubit measurement bases: the `U` eigenbasis is set by `(alpha, delta)`,
/// the `D` eigenbasis by `(beta, gamma)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitMeasurementAngles {
    pub alpha: f64,
    pub delta: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl QubitMeasurementAngles {
    pub fn new(alpha: f64, delta: f64, beta: f64, gamma: f64) -> Result<Self, QuantumError> {
        let half_pi = std::f64::consts::FRAC_PI_2;
        if !(0.0..=half_pi).contains(&alpha) || !alpha.is_finite() {
            return Err(QuantumError::InvalidAngle { name: "alpha", value: alpha });
        }
        if !(0.0..=half_pi).contains(&beta) || !beta.is_finite() {
            return Err(QuantumError::InvalidAngle { name: "beta", value: beta });
        }
        if !delta.is_finite() {
            return Err(QuantumError::InvalidAngle { name: "delta", value: delta });
        }
        if !gamma.is_finite() {
            return Err(QuantumError::InvalidAngle { name: "gamma", value: gamma });
        }
        Ok(QubitMeasurementAngles { alpha, delta, beta, gamma })
    }
}

/// Normalized complex amplitude vector over the computational basis.
///
/// Basis convention: each party's `|v>` is index 0 and `|w>` is index 1,
/// party 1 occupies the most significant bit.
#[derive(Clone, Debug)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Result<StateVector, QuantumError> {
        if !amps.len().is_power_of_two() || amps.len() < 2 {
            return Err(QuantumError::BadDimension(amps.len()));
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(QuantumError::NotNormalized((norm_sq - 1.0).abs()));
        }
        Ok(StateVector { amps })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }
}

/// The state `t|v..v> + |w..w>` (normalized) on `n` qubits.
pub fn ghz_state(t: GhzParam, n: usize) -> Result<StateVector, QuantumError> {
    if n != 2 && n != 3 {
        return Err(QuantumError::InvalidQubitCount(n));
    }
    let t = t.value();
    let norm = (1.0 + t * t).sqrt();
    let dim = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = Complex64::new(t / norm, 0.0);
    amps[dim - 1] = Complex64::new(1.0 / norm, 0.0);
    StateVector::new(amps)
}

/// Rank-1 projector on a single qubit, as a dense 2x2 matrix.
pub type Projector = [[Complex64; 2]; 2];

fn eigenvector(angles: &QubitMeasurementAngles, setting: Setting, outcome: Outcome) -> [Complex64; 2] {
    let (theta, phase) = match setting {
        Setting::U => (angles.alpha, angles.delta),
        Setting::D => (angles.beta, angles.gamma),
    };
    let (sin, cos) = theta.sin_cos();
    match outcome {
        // |m+> = cos(theta) |v> + e^{i phase} sin(theta) |w>
        Outcome::Plus => [
            Complex64::new(cos, 0.0),
            Complex64::from_polar(sin, phase),
        ],
        // |m-> = -e^{-i phase} sin(theta) |v> + cos(theta) |w>
        Outcome::Minus => [
            -Complex64::from_polar(sin, -phase),
            Complex64::new(cos, 0.0),
        ],
    }
}

/// Projector onto the eigenvector selected by `(setting, outcome)`.
pub fn measurement_projector(
    angles: &QubitMeasurementAngles,
    setting: Setting,
    outcome: Outcome,
) -> Projector {
    let v = eigenvector(angles, setting, outcome);
    [
        [v[0] * v[0].conj(), v[0] * v[1].conj()],
        [v[1] * v[0].conj(), v[1] * v[1].conj()],
    ]
}

/// Applies a single-qubit operator to qubit `k` (0-based, party 1 = qubit 0)
/// of an n-qubit amplitude vector.
fn apply_single_qubit(amps: &mut [Complex64], n: usize, k: usize, m: &Projector) {
    let bit = n - 1 - k; // party 1 is the most significant bit
    let stride = 1usize << bit;
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for low in 0..stride {
            let i0 = base + low;
            let i1 = i0 + stride;
            let a0 = amps[i0];
            let a1 = amps[i1];
            amps[i0] = m[0][0] * a0 + m[0][1] * a1;
            amps[i1] = m[1][0] * a0 + m[1][1] * a1;
        }
        base += stride * 2;
    }
}

/// `<psi| P_1 x .. x P_n |psi>` for per-party projectors chosen by
/// `settings`/`outcomes`.
pub fn joint_probability(
    state: &StateVector,
    angles: &[QubitMeasurementAngles],
    settings: &[Setting],
    outcomes: &[Outcome],
) -> Result<f64, QuantumError> {
    let n = angles.len();
    if settings.len() != n || outcomes.len() != n {
        return Err(QuantumError::DimensionMismatch { state: state.amps.len(), parties: n });
    }
    if state.amps.len() != 1usize << n {
        return Err(QuantumError::DimensionMismatch { state: state.amps.len(), parties: n });
    }
    let mut work = state.amps.clone();
    for k in 0..n {
        let proj = measurement_projector(&angles[k], settings[k], outcomes[k]);
        apply_single_qubit(&mut work, n, k, &proj);
    }
    let p: Complex64 = state
        .amps
        .iter()
        .zip(&work)
        .map(|(a, b)| a.conj() * b)
        .sum();
    debug_assert!(p.im.abs() < NORM_TOL, "projector sandwich must be real");
    Ok(p.re)
}

/// All 64 joint probabilities of a 3-qubit state under the given bases.
pub fn born_distribution(
    state: &StateVector,
    angles: &[QubitMeasurementAngles; 3],
) -> Result<JointDistribution, QuantumError> {
    if state.amps.len() != 8 {
        return Err(QuantumError::DimensionMismatch { state: state.amps.len(), parties: 3 });
    }
    let mut table = [[0.0f64; 8]; 8];
    for s in SettingTriple::all() {
        for o in OutcomeTriple::all() {
            let p = joint_probability(state, angles, &s.0, &o.0)?;
            table[s.index()][o.index()] = p.max(0.0);
        }
    }
    Ok(JointDistribution::from_table(table).expect("born table is finite"))
}

/// All 16 joint probabilities of a 2-qubit state under the given bases.
pub fn born_distribution_two(
    state: &StateVector,
    angles: &[QubitMeasurementAngles; 2],
) -> Result<TwoQubitDistribution, QuantumError> {
    if state.amps.len() != 4 {
        return Err(QuantumError::DimensionMismatch { state: state.amps.len(), parties: 2 });
    }
    let mut table = [[0.0f64; 4]; 4];
    for (si, s) in crate::scenario::SettingPair::all().enumerate() {
        for (oi, o) in crate::scenario::OutcomePair::all().enumerate() {
            let p = joint_probability(state, angles, &s.0, &o.0)?;
            table[si][oi] = p.max(0.0);
        }
    }
    Ok(TwoQubitDistribution::from_table(table).expect("born table is finite"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plain(alpha: f64, delta: f64) -> QubitMeasurementAngles {
        QubitMeasurementAngles::new(alpha, delta, FRAC_PI_4, 0.0).unwrap()
    }

    #[test]
    fn ghz_maximally_entangled() {
        let s = ghz_state(GhzParam::new(1.0).unwrap(), 3).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((s.amplitudes()[0] - c(r, 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[7] - c(r, 0.0)).norm() < 1e-15);
        for i in 1..7 {
            assert_eq!(s.amplitudes()[i], c(0.0, 0.0));
        }
    }

    #[test]
    fn ghz_product_limit() {
        let s = ghz_state(GhzParam::new(0.0).unwrap(), 3).unwrap();
        assert!((s.amplitudes()[7] - c(1.0, 0.0)).norm() < 1e-15);
        for i in 0..7 {
            assert_eq!(s.amplitudes()[i], c(0.0, 0.0));
        }
    }

    #[test]
    fn ghz_half() {
        // direct normalization arithmetic: amplitudes (0.5, 1.0)/sqrt(1.25)
        let norm = 1.25f64.sqrt();
        let s = ghz_state(GhzParam::new(0.5).unwrap(), 3).unwrap();
        assert!((s.amplitudes()[0].re - 0.5 / norm).abs() < 1e-15);
        assert!((s.amplitudes()[7].re - 1.0 / norm).abs() < 1e-15);
    }

    #[test]
    fn ghz_rejects_bad_t() {
        assert!(GhzParam::new(-0.1).is_err());
        assert!(GhzParam::new(1.1).is_err());
        assert!(GhzParam::new(f64::NAN).is_err());
        assert!(ghz_state(GhzParam::new(0.5).unwrap(), 4).is_err());
    }

    #[test]
    fn projector_basis_aligned() {
        let p = measurement_projector(&plain(0.0, 0.3), Setting::U, Outcome::Plus);
        assert!((p[0][0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(p[0][1].norm() < 1e-15);
        assert!(p[1][0].norm() < 1e-15);
        assert!(p[1][1].norm() < 1e-15);

        let p = measurement_projector(&plain(FRAC_PI_2, 0.7), Setting::U, Outcome::Plus);
        assert!(p[0][0].norm() < 1e-15);
        assert!((p[1][1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn projector_diagonal_basis() {
        let p = measurement_projector(&plain(FRAC_PI_4, 0.0), Setting::U, Outcome::Plus);
        for row in &p {
            for entry in row {
                assert!((entry - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn hardy_point_joint_probability() {
        // t=1, alpha_i = pi/4, delta_i = pi/2 (so the phase sum is 3*pi/2):
        // P(UUU|+++) = 1/8.
        let s = ghz_state(GhzParam::new(1.0).unwrap(), 3).unwrap();
        let a = QubitMeasurementAngles::new(FRAC_PI_4, FRAC_PI_2, FRAC_PI_4, 0.0).unwrap();
        let p = joint_probability(
            &s,
            &[a, a, a],
            &[Setting::U; 3],
            &[Outcome::Plus; 3],
        )
        .unwrap();
        assert!((p - 0.125).abs() < 1e-12);
    }

    #[test]
    fn product_state_factorizes() {
        // t=0 with alpha = pi/2 aligns every |u+> with |w>; P(UUU|+++) = 1.
        let s = ghz_state(GhzParam::new(0.0).unwrap(), 3).unwrap();
        let a = QubitMeasurementAngles::new(FRAC_PI_2, 0.4, FRAC_PI_4, 0.1).unwrap();
        let p = joint_probability(&s, &[a, a, a], &[Setting::U; 3], &[Outcome::Plus; 3]).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let s = ghz_state(GhzParam::new(0.5).unwrap(), 3).unwrap();
        let a = plain(0.3, 0.0);
        assert!(matches!(
            joint_probability(&s, &[a, a], &[Setting::U; 2], &[Outcome::Plus; 2]),
            Err(QuantumError::DimensionMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn projector_algebra(
            alpha in 0.0..FRAC_PI_2,
            delta in -6.0..6.0f64,
            beta in 0.0..FRAC_PI_2,
            gamma in -6.0..6.0f64,
        ) {
            let angles = QubitMeasurementAngles::new(alpha, delta, beta, gamma).unwrap();
            for setting in Setting::BOTH {
                let plus = measurement_projector(&angles, setting, Outcome::Plus);
                let minus = measurement_projector(&angles, setting, Outcome::Minus);
                for i in 0..2 {
                    for j in 0..2 {
                        let ident = if i == j { 1.0 } else { 0.0 };
                        // completeness
                        prop_assert!((plus[i][j] + minus[i][j] - c(ident, 0.0)).norm() < 1e-12);
                        // hermiticity
                        prop_assert!((plus[i][j] - plus[j][i].conj()).norm() < 1e-12);
                        // idempotence
                        let sq = plus[i][0] * plus[0][j] + plus[i][1] * plus[1][j];
                        prop_assert!((sq - plus[i][j]).norm() < 1e-12);
                    }
                }
            }
        }

        #[test]
        fn outcomes_complete(
            t in 0.0..=1.0f64,
            alpha in 0.0..FRAC_PI_2,
            delta in -6.0..6.0f64,
            beta in 0.0..FRAC_PI_2,
            gamma in -6.0..6.0f64,
            s_idx in 0usize..8,
        ) {
            let state = ghz_state(GhzParam::new(t).unwrap(), 3).unwrap();
            let a = QubitMeasurementAngles::new(alpha, delta, beta, gamma).unwrap();
            let settings = SettingTriple::from_index(s_idx);
            let total: f64 = OutcomeTriple::all()
                .map(|o| joint_probability(&state, &[a, a, a], &settings.0, &o.0).unwrap())
                .sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
