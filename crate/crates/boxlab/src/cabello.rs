//! Closed-form success probabilities for the GHZ-family nonlocality
//! argument: the joint probabilities `P` and `Q`, the measurement-angle
//! constraint solver, the reduced success function `C(t, x, y, z, gamma)`,
//! the Hardy slice, and the n-qubit Hardy maximum.

use thiserror::Error;

use crate::quantum::QubitMeasurementAngles;

pub const CLOSED_FORM_TOL: f64 = 1e-12;

/// Above this product `x*y*z`, `success_c` switches to the form with
/// numerator and denominator divided by `(xyz)^2` so the large-x regimes
/// stay in range.
const LARGE_XYZ: f64 = 1e3;

#[derive(Debug, Error, PartialEq)]
pub enum CabelloError {
    #[error("entanglement parameter t = {0} outside [0, 1]")]
    InvalidT(f64),
    #[error("angle {name} = {value} outside [0, pi/2) (tangent pole at pi/2)")]
    AnglePole { name: &'static str, value: f64 },
    #[error("tangent parameter {name} = {value} must be nonnegative")]
    NegativeTangent { name: &'static str, value: f64 },
    #[error("constraint system needs strictly positive t, x, y, z (got {name} = {value})")]
    NotPositive { name: &'static str, value: f64 },
    #[error("success function denominator vanishes at t = {t}, x*y*z = {xyz}")]
    ZeroDenominator { t: f64, xyz: f64 },
    #[error("phase branch integers must be odd, got {0:?}")]
    EvenBranch([i32; 3]),
    #[error("n-qubit Hardy maximum needs n >= 3, got {0}")]
    TooFewQubits(u32),
    #[error("hardy profile needs 0 < t <= 1, got {0}")]
    HardyDomain(f64),
    #[error("scan grid must satisfy t_min <= t_max within [0, 1]")]
    BadGrid,
}

/// Reduced coordinates of the success function: `x = tan(beta_1)`,
/// `y = tan(beta_2)`, `z = tan(beta_3)`, `gamma = gamma_1+gamma_2+gamma_3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CabelloPoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub gamma: f64,
}

impl CabelloPoint {
    pub fn new(t: f64, x: f64, y: f64, z: f64, gamma: f64) -> Result<CabelloPoint, CabelloError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(CabelloError::InvalidT(t));
        }
        for (name, v) in [("x", x), ("y", y), ("z", z)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(CabelloError::NegativeTangent { name, value: v });
            }
        }
        Ok(CabelloPoint { t, x, y, z, gamma })
    }
}

/// Full angle assignment satisfying the phase and tangent constraints,
/// together with the chosen branch integers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintSolution {
    pub angles: [QubitMeasurementAngles; 3],
    pub branches: [i32; 3],
    /// Phase sum `delta_1 + delta_2 + delta_3`.
    pub delta: f64,
}

fn check_angle(name: &'static str, value: f64) -> Result<f64, CabelloError> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&value) {
        return Err(CabelloError::AnglePole { name, value });
    }
    Ok(value.tan())
}

/// `P(U1,U2,U3|+++)` for the GHZ-family state: the closed form in terms of
/// the `U`-basis angles and the phase sum `delta`.
pub fn prob_p(t: f64, alphas: [f64; 3], delta: f64) -> Result<f64, CabelloError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(CabelloError::InvalidT(t));
    }
    let ta1 = check_angle("alpha1", alphas[0])?;
    let ta2 = check_angle("alpha2", alphas[1])?;
    let ta3 = check_angle("alpha3", alphas[2])?;
    let prod = ta1 * ta2 * ta3;
    let num = t * t + prod * prod + 2.0 * t * delta.cos() * prod;
    let den = (1.0 + t * t) * (1.0 + ta1 * ta1) * (1.0 + ta2 * ta2) * (1.0 + ta3 * ta3);
    Ok(num / den)
}

/// `P(D1,D2,D3|---)`: the closed form in terms of the `D`-basis angles and
/// the phase sum `gamma`.
pub fn prob_q(t: f64, betas: [f64; 3], gamma: f64) -> Result<f64, CabelloError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(CabelloError::InvalidT(t));
    }
    let tb1 = check_angle("beta1", betas[0])?;
    let tb2 = check_angle("beta2", betas[1])?;
    let tb3 = check_angle("beta3", betas[2])?;
    let prod = tb1 * tb2 * tb3;
    let num = 1.0 + t * t * prod * prod - 2.0 * t * gamma.cos() * prod;
    let den = (1.0 + t * t) * (1.0 + tb1 * tb1) * (1.0 + tb2 * tb2) * (1.0 + tb3 * tb3);
    Ok(num / den)
}

/// Solves the phase and tangent constraints for the canonical branch
/// `m1 = m2 = m3 = +1`.
pub fn solve_constraints(point: &CabelloPoint) -> Result<ConstraintSolution, CabelloError> {
    solve_constraints_with_branches(point, [1, 1, 1])
}

/// Solves the constraints for arbitrary odd branch integers.
///
/// The three phase equations only pin the sums, so the individual phases are
/// split evenly: `delta_i = delta/3` and `gamma_i = m_i*pi - 2*delta/3`, with
/// `delta = ((m1+m2+m3)*pi - gamma) / 2`. Even branch integers would demand a
/// negative tangent product and have no solution for `t > 0`.
pub fn solve_constraints_with_branches(
    point: &CabelloPoint,
    branches: [i32; 3],
) -> Result<ConstraintSolution, CabelloError> {
    if branches.iter().any(|m| m.rem_euclid(2) == 0) {
        return Err(CabelloError::EvenBranch(branches));
    }
    for (name, v) in [("t", point.t), ("x", point.x), ("y", point.y), ("z", point.z)] {
        if v <= 0.0 {
            return Err(CabelloError::NotPositive { name, value: v });
        }
    }
    let (t, x, y, z) = (point.t, point.x, point.y, point.z);
    let alpha = [
        (t * x / (y * z)).sqrt().atan(),
        (t * y / (x * z)).sqrt().atan(),
        (t * z / (x * y)).sqrt().atan(),
    ];
    let beta = [x.atan(), y.atan(), z.atan()];
    let m_sum: i32 = branches.iter().sum();
    let delta = (f64::from(m_sum) * std::f64::consts::PI - point.gamma) / 2.0;
    let delta_i = delta / 3.0;
    let mut angles = [QubitMeasurementAngles { alpha: 0.0, delta: 0.0, beta: 0.0, gamma: 0.0 }; 3];
    for k in 0..3 {
        let gamma_k = f64::from(branches[k]) * std::f64::consts::PI - 2.0 * delta_i;
        angles[k] = QubitMeasurementAngles {
            alpha: alpha[k],
            delta: delta_i,
            beta: beta[k],
            gamma: gamma_k,
        };
    }
    Ok(ConstraintSolution { angles, branches, delta })
}

/// The success probability `C(t, x, y, z, gamma) = P - Q` with the
/// constraints eliminated.
pub fn success_c(point: &CabelloPoint) -> Result<f64, CabelloError> {
    let CabelloPoint { t, x, y, z, gamma } = *point;
    if !(0.0..=1.0).contains(&t) {
        return Err(CabelloError::InvalidT(t));
    }
    for (name, v) in [("x", x), ("y", y), ("z", z)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(CabelloError::NegativeTangent { name, value: v });
        }
    }
    let xyz = x * y * z;
    if xyz + t * x * x <= 0.0 || xyz + t * y * y <= 0.0 || xyz + t * z * z <= 0.0 {
        return Err(CabelloError::ZeroDenominator { t, xyz });
    }

    let p_term = if xyz > LARGE_XYZ {
        // numerator and denominator divided by (xyz)^2 * xyz
        let num = t * t * (1.0 + t / xyz - 2.0 * (t / xyz).sqrt() * (gamma / 2.0).sin());
        let den = (1.0 + t * t)
            * (1.0 + t * x / (y * z))
            * (1.0 + t * y / (x * z))
            * (1.0 + t * z / (x * y));
        num / den
    } else {
        let txyz = t * xyz;
        let num = txyz * txyz * (t + xyz - 2.0 * txyz.sqrt() * (gamma / 2.0).sin());
        let den = (1.0 + t * t)
            * (xyz + t * x * x)
            * (xyz + t * y * y)
            * (xyz + t * z * z);
        num / den
    };

    let txyz = t * xyz;
    let q_num = 1.0 + txyz * txyz - 2.0 * txyz * gamma.cos();
    let q_den = (1.0 + t * t) * (1.0 + x * x) * (1.0 + y * y) * (1.0 + z * z);
    Ok(p_term - q_num / q_den)
}

/// The Hardy slice `C(t, t^{-1/3}, t^{-1/3}, t^{-1/3}, 0) = t^2/(1+t^{4/3})^3`.
pub fn hardy_profile(t: f64) -> Result<f64, CabelloError> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(CabelloError::HardyDomain(t));
    }
    let u = t.powf(4.0 / 3.0);
    Ok(t * t / ((1.0 + u) * (1.0 + u) * (1.0 + u)))
}

/// Maximum Hardy success probability for `n >= 3` qubits:
/// `(1/2^n) (1 + cos(pi/(n-1)))`.
pub fn nqubit_hardy_max(n: u32) -> Result<f64, CabelloError> {
    if n < 3 {
        return Err(CabelloError::TooFewQubits(n));
    }
    let scale = (0.5f64).powi(n as i32);
    Ok(scale * (1.0 + (std::f64::consts::PI / f64::from(n - 1)).cos()))
}

/// Samples `C(t, x, y, z, gamma)` on a uniform t-grid. `steps` is the number
/// of rows; with `steps >= 2` the first and last rows sit exactly at
/// `t_min` and `t_max`.
pub fn scan_c(
    x: f64,
    y: f64,
    z: f64,
    gamma: f64,
    t_min: f64,
    t_max: f64,
    steps: usize,
) -> Result<Vec<(f64, f64)>, CabelloError> {
    if steps == 0 || !(0.0..=1.0).contains(&t_min) || !(0.0..=1.0).contains(&t_max) || t_min > t_max
    {
        return Err(CabelloError::BadGrid);
    }
    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let t = if steps == 1 {
            t_min
        } else {
            t_min + (t_max - t_min) * i as f64 / (steps - 1) as f64
        };
        let c = success_c(&CabelloPoint::new(t, x, y, z, gamma)?)?;
        rows.push((t, c));
    }
    Ok(rows)
}

/// Renders scan rows as CSV with header `t,C`, 17 significant digits.
pub fn scan_to_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("t,C\n");
    for (t, c) in rows {
        out.push_str(&format!("{t:.16e},{c:.16e}\n"));
    }
    out
}

/// Whether the argument ever succeeds on `(0, 1]`, and where it first does.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PositivityOutcome {
    /// Smallest root of `C(., x, y, z, gamma) = 0` in `(0, 1]`, located by
    /// bisection to 1e-9.
    Threshold(f64),
    /// `C` stays negative on the whole interval: the argument never succeeds.
    NeverSucceeds,
}

/// Locates the smallest `t` in `(0, 1]` at which `C` turns nonnegative.
///
/// `C(0, ...)` is always negative, so the scan brackets the first sign
/// change on a combined logarithmic + uniform grid (the crossing may sit at
/// extremely small `t` for large `x*y*z`) and bisects to 1e-9 absolute.
pub fn positivity_threshold(
    x: f64,
    y: f64,
    z: f64,
    gamma: f64,
) -> Result<PositivityOutcome, CabelloError> {
    let eval = |t: f64| success_c(&CabelloPoint { t, x, y, z, gamma });

    let mut grid: Vec<f64> = Vec::with_capacity(1024);
    let mut v = 1e-12f64;
    while v < 1.0 {
        grid.push(v);
        v *= 1.07;
    }
    for i in 1..=400 {
        grid.push(i as f64 / 400.0);
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut lo = 0.0f64;
    let mut c_lo = -1.0; // C at t=0 is negative for every parameter choice
    let mut bracket = None;
    for &t in &grid {
        let c = eval(t)?;
        if c >= 0.0 {
            bracket = Some((lo, t));
            break;
        }
        lo = t;
        c_lo = c;
    }
    let _ = c_lo;
    let Some((mut lo, mut hi)) = bracket else {
        return Ok(PositivityOutcome::NeverSucceeds);
    };
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if eval(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(PositivityOutcome::Threshold(0.5 * (lo + hi)))
}

/// The phase sum at which the symmetric point `x = y = z = 1`, `t = 1`
/// maximizes `C`: `-arccos(7/8)`.
pub fn gamma_star() -> f64 {
    -(7.0f64 / 8.0).acos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn prob_p_at_symmetric_maximum() {
        // cos(delta) = 1/4 at the optimal phase: P = (1+1+2/4)/16 = 10/64.
        let delta = (0.25f64).acos();
        let p = prob_p(1.0, [FRAC_PI_4; 3], delta).unwrap();
        assert!((p - 10.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn prob_p_product_state() {
        assert_eq!(prob_p(0.0, [0.0; 3], 1.23).unwrap(), 0.0);
    }

    #[test]
    fn prob_q_at_symmetric_maximum() {
        let q = prob_q(1.0, [FRAC_PI_4; 3], gamma_star()).unwrap();
        assert!((q - 1.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn prob_q_hardy_case_vanishes() {
        let q = prob_q(1.0, [FRAC_PI_4; 3], 0.0).unwrap();
        assert!(q.abs() < 1e-15);
    }

    #[test]
    fn angle_pole_rejected() {
        use std::f64::consts::FRAC_PI_2;
        assert!(matches!(
            prob_p(0.5, [FRAC_PI_2, 0.1, 0.1], 0.0),
            Err(CabelloError::AnglePole { .. })
        ));
        assert!(prob_q(0.5, [0.1, 0.1, FRAC_PI_2], 0.0).is_err());
    }

    #[test]
    fn solve_constraints_hardy_point() {
        let point = CabelloPoint::new(1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        let sol = solve_constraints(&point).unwrap();
        assert!((sol.delta - 1.5 * PI).abs() < 1e-15);
        for a in sol.angles {
            assert!((a.alpha - FRAC_PI_4).abs() < 1e-15);
            assert!((a.beta - FRAC_PI_4).abs() < 1e-15);
            assert!((a.delta - 0.5 * PI).abs() < 1e-15);
            assert!(a.gamma.abs() < 1e-15);
        }
    }

    #[test]
    fn solve_constraints_tangent_relations() {
        let point = CabelloPoint::new(0.5, 2.0, 3.0, 0.4, 0.7).unwrap();
        let sol = solve_constraints(&point).unwrap();
        let tan2 = |a: f64| a.tan() * a.tan();
        assert!((tan2(sol.angles[0].alpha) - 0.5 * 2.0 / (3.0 * 0.4)).abs() < 1e-12);
        assert!((tan2(sol.angles[1].alpha) - 0.5 * 3.0 / (2.0 * 0.4)).abs() < 1e-12);
        assert!((tan2(sol.angles[2].alpha) - 0.5 * 0.4 / (2.0 * 3.0)).abs() < 1e-12);
        // phase equations hold: gamma_i + delta_j + delta_k = m_i * pi
        for i in 0..3 {
            let mut sum = sol.angles[i].gamma;
            for j in 0..3 {
                if j != i {
                    sum += sol.angles[j].delta;
                }
            }
            assert!((sum - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn solve_constraints_domain_errors() {
        let point = CabelloPoint::new(0.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            solve_constraints(&point),
            Err(CabelloError::NotPositive { name: "t", .. })
        ));
        let point = CabelloPoint::new(0.5, 0.0, 1.0, 1.0, 0.0).unwrap();
        assert!(solve_constraints(&point).is_err());
        let point = CabelloPoint::new(0.5, 1.0, 1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            solve_constraints_with_branches(&point, [1, 2, 1]),
            Err(CabelloError::EvenBranch(_))
        ));
        assert!(solve_constraints_with_branches(&point, [3, 1, -1]).is_ok());
    }

    #[test]
    fn success_c_global_maximum_value() {
        let c = success_c(&CabelloPoint::new(1.0, 1.0, 1.0, 1.0, gamma_star()).unwrap()).unwrap();
        assert!((c - 9.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn success_c_product_state() {
        for (x, y, z) in [(1.0, 1.0, 1.0), (0.3, 2.0, 5.0), (10.0, 0.1, 7.0)] {
            let c = success_c(&CabelloPoint::new(0.0, x, y, z, 0.4).unwrap()).unwrap();
            let expected = -1.0 / ((1.0 + x * x) * (1.0 + y * y) * (1.0 + z * z));
            assert!((c - expected).abs() < 1e-15);
            assert!(c < 0.0);
        }
    }

    #[test]
    fn success_c_negative_below_threshold() {
        let g = gamma_star();
        assert!(success_c(&CabelloPoint::new(0.31, 1.0, 1.0, 1.0, g).unwrap()).unwrap() < 0.0);
        assert!(success_c(&CabelloPoint::new(0.32, 1.0, 1.0, 1.0, g).unwrap()).unwrap() > 0.0);
    }

    #[test]
    fn success_c_rejects_vanishing_denominator() {
        assert!(matches!(
            success_c(&CabelloPoint { t: 0.0, x: 0.0, y: 1.0, z: 1.0, gamma: 0.0 }),
            Err(CabelloError::ZeroDenominator { .. })
        ));
        assert!(matches!(
            success_c(&CabelloPoint { t: 0.5, x: 0.0, y: 1.0, z: 1.0, gamma: 0.0 }),
            Err(CabelloError::ZeroDenominator { .. })
        ));
    }

    #[test]
    fn large_xyz_form_matches_plain_form() {
        // straddle the switchover and compare against the unscaled formula
        // evaluated where it is still in range
        for &(t, x, y, z) in &[
            (0.7f64, 9.0f64, 9.0f64, 9.0f64),
            (0.3, 11.0, 11.0, 11.0),
            (0.9, 40.0, 30.0, 2.0),
        ] {
            let gamma = gamma_star();
            let txyz = t * x * y * z;
            let xyz = x * y * z;
            let plain_num = txyz * txyz * (t + xyz - 2.0 * txyz.sqrt() * (gamma / 2.0).sin());
            let plain_den = (1.0 + t * t)
                * (xyz + t * x * x)
                * (xyz + t * y * y)
                * (xyz + t * z * z);
            let q = (1.0 + txyz * txyz - 2.0 * txyz * gamma.cos())
                / ((1.0 + t * t) * (1.0 + x * x) * (1.0 + y * y) * (1.0 + z * z));
            let expected = plain_num / plain_den - q;
            let got = success_c(&CabelloPoint::new(t, x, y, z, gamma).unwrap()).unwrap();
            assert!((got - expected).abs() < 1e-14, "mismatch at xyz = {xyz}");
        }
    }

    #[test]
    fn hardy_profile_values() {
        assert!((hardy_profile(1.0).unwrap() - 0.125).abs() < 1e-15);
        // cross-check against the reduced success function on the slice
        for &t in &[0.2f64, 0.5, 0.8, 1.0] {
            let x = t.powf(-1.0 / 3.0);
            let via_c = success_c(&CabelloPoint::new(t, x, x, x, 0.0).unwrap()).unwrap();
            assert!((hardy_profile(t).unwrap() - via_c).abs() < 1e-12);
        }
        assert!(hardy_profile(1e-6).unwrap() < 1e-11);
        assert!(hardy_profile(0.0).is_err());
    }

    #[test]
    fn nqubit_hardy_values() {
        assert!((nqubit_hardy_max(3).unwrap() - 0.125).abs() < 1e-15);
        // direct evaluation: (1/16)(1 + cos(pi/3)) = 3/32
        assert!((nqubit_hardy_max(4).unwrap() - 3.0 / 32.0).abs() < 1e-15);
        assert!(nqubit_hardy_max(2).is_err());
        let mut prev = nqubit_hardy_max(3).unwrap();
        for n in 4..=20 {
            let cur = nqubit_hardy_max(n).unwrap();
            assert!(cur < prev, "sequence must decrease at n = {n}");
            prev = cur;
        }
    }

    #[test]
    fn scan_endpoints() {
        let rows = scan_c(1.0, 1.0, 1.0, gamma_star(), 0.0, 1.0, 200).unwrap();
        assert_eq!(rows.len(), 200);
        assert_eq!(rows[0].0, 0.0);
        assert_eq!(rows[199].0, 1.0);
        assert!((rows[199].1 - 0.140625).abs() < 1e-12);
        assert!(scan_c(1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0).is_err());
        assert!(scan_c(1.0, 1.0, 1.0, 0.0, 0.9, 0.1, 5).is_err());
        let csv = scan_to_csv(&rows);
        assert!(csv.starts_with("t,C\n"));
        assert_eq!(csv.lines().count(), 201);
    }

    #[test]
    fn scan_large_x_negative_at_origin() {
        let rows = scan_c(1e4, 1e4, 0.2, gamma_star(), 0.0, 1.0, 11).unwrap();
        let c0 = rows[0].1;
        let expected = -1.0 / ((1.0 + 1e8) * (1.0 + 1e8) * 1.04);
        assert!((c0 - expected).abs() < 1e-18);
        assert!(c0 < -9.0e-17 && c0 > -1.1e-16);
    }

    #[test]
    fn threshold_symmetric_point() {
        // independent oracle: on the gamma = 0 slice, C(t,1,1,1,0) has
        // numerator 8t^2 - (1-t^2)^2 with positive root t = sqrt(3)-sqrt(2)
        let expected = 3.0f64.sqrt() - 2.0f64.sqrt();
        match positivity_threshold(1.0, 1.0, 1.0, 0.0).unwrap() {
            PositivityOutcome::Threshold(t) => assert!((t - expected).abs() < 1e-8),
            PositivityOutcome::NeverSucceeds => panic!("expected a threshold"),
        }
    }

    #[test]
    fn threshold_never_succeeds() {
        // gamma = pi suppresses P and keeps Q large: C < 0 on all of (0, 1]
        assert_eq!(
            positivity_threshold(1.0, 1.0, 1.0, PI).unwrap(),
            PositivityOutcome::NeverSucceeds
        );
    }
}
