//! Derivative-free maximization of the nonlocality success probabilities.
//!
//! Strategy: a coarse deterministic grid over the search box seeds a batch
//! of compass (pattern) searches that shrink their step to 1e-8 of the box.
//! The objectives are smooth but multimodal in the phase variable, so the
//! grid carries the global picture and the polish carries the digits. Grid
//! and refinement batches run in parallel; results merge by maximum value
//! with a lexicographic tie-break on the argument, so runs are reproducible.

use rayon::prelude::*;
use serde::Serialize;

use crate::cabello::{self, CabelloPoint};
use crate::quantum::{self, GhzParam, QubitMeasurementAngles};
use crate::scenario::{Outcome, Setting};

/// Relative step at which a pattern search stops shrinking.
const SHRINK_TOL: f64 = 1e-8;

/// One refinement stage and the best value seen after it.
#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub stage: String,
    pub best: f64,
}

/// Outcome of a maximization run. `value` always equals the objective
/// re-evaluated at `argmax`.
#[derive(Clone, Debug, Serialize)]
pub struct OptimizationResult {
    pub objective: String,
    pub argmax: Vec<f64>,
    pub value: f64,
    pub evaluations: u64,
    pub stages: Vec<Stage>,
}

impl OptimizationResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialization cannot fail")
    }
}

/// Search box with optional per-dimension log scaling.
#[derive(Clone, Debug)]
struct SearchSpace {
    lo: Vec<f64>,
    hi: Vec<f64>,
    log_scale: Vec<bool>,
}

impl SearchSpace {
    fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Maps unit coordinates to parameter values.
    fn to_params(&self, unit: &[f64]) -> Vec<f64> {
        unit.iter()
            .enumerate()
            .map(|(i, &u)| {
                let u = u.clamp(0.0, 1.0);
                if self.log_scale[i] {
                    self.lo[i] * (self.hi[i] / self.lo[i]).powf(u)
                } else {
                    self.lo[i] + u * (self.hi[i] - self.lo[i])
                }
            })
            .collect()
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// `(value, point)` ordering: larger value wins, ties go to the
/// lexicographically smallest point.
fn better(candidate: (f64, &[f64]), incumbent: (f64, &[f64])) -> bool {
    candidate.0 > incumbent.0
        || (candidate.0 == incumbent.0 && lex_less(candidate.1, incumbent.1))
}

/// Compass search in unit coordinates. Returns `(best_unit, best_value,
/// evaluations)`.
fn pattern_search<F>(f: &F, space: &SearchSpace, start: &[f64], start_value: f64) -> (Vec<f64>, f64, u64)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = space.dim();
    let mut best = start.to_vec();
    let mut best_value = start_value;
    let mut step = 0.1f64;
    let mut evals = 0u64;
    while step > SHRINK_TOL {
        let mut improved = false;
        let mut poll_best = best_value;
        let mut poll_point: Option<Vec<f64>> = None;
        for d in 0..dim {
            for sign in [1.0, -1.0] {
                let mut candidate = best.clone();
                candidate[d] = (candidate[d] + sign * step).clamp(0.0, 1.0);
                if candidate[d] == best[d] {
                    continue;
                }
                let value = f(&space.to_params(&candidate));
                evals += 1;
                if value > poll_best {
                    poll_best = value;
                    poll_point = Some(candidate);
                    improved = true;
                }
            }
        }
        if improved {
            best = poll_point.unwrap();
            best_value = poll_best;
        } else {
            step *= 0.5;
        }
    }
    (best, best_value, evals)
}

/// Deterministic multi-start maximization: full grid, then pattern searches
/// from the most promising grid points.
fn multistart_maximize<F>(
    name: &str,
    f: F,
    space: SearchSpace,
    grid_points: usize,
    n_starts: usize,
) -> OptimizationResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = space.dim();
    let total: usize = grid_points.pow(dim as u32);
    let grid_values: Vec<(f64, Vec<f64>)> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut unit = vec![0.0; dim];
            let mut rest = flat;
            for u in unit.iter_mut() {
                let idx = rest % grid_points;
                rest /= grid_points;
                *u = if grid_points == 1 {
                    0.5
                } else {
                    idx as f64 / (grid_points - 1) as f64
                };
            }
            let value = f(&space.to_params(&unit));
            (value, unit)
        })
        .collect();
    let mut evaluations = total as u64;

    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by(|&a, &b| {
        grid_values[b]
            .0
            .partial_cmp(&grid_values[a].0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.cmp(&b))
    });
    let grid_best = &grid_values[order[0]];
    let mut stages = vec![Stage { stage: "grid".to_string(), best: grid_best.0 }];

    let starts: Vec<&(f64, Vec<f64>)> =
        order.iter().take(n_starts).map(|&i| &grid_values[i]).collect();
    let refined: Vec<(Vec<f64>, f64, u64)> = starts
        .par_iter()
        .map(|(value, unit)| pattern_search(&f, &space, unit, *value))
        .collect();

    let mut best_unit = grid_best.1.clone();
    let mut best_value = grid_best.0;
    for (unit, value, evals) in refined {
        evaluations += evals;
        let params = space.to_params(&unit);
        let incumbent_params = space.to_params(&best_unit);
        if better((value, &params), (best_value, &incumbent_params)) {
            best_unit = unit;
            best_value = value;
        }
    }
    stages.push(Stage { stage: "refine".to_string(), best: best_value });

    let argmax = space.to_params(&best_unit);
    let value = f(&argmax);
    evaluations += 1;
    OptimizationResult {
        objective: name.to_string(),
        argmax,
        value,
        evaluations,
        stages,
    }
}

/// Tunable knobs of the three-qubit global search. The defaults reproduce
/// the published maximum; `x_max` caps the tangent coordinates (large-x
/// regimes are scanned separately, not optimized over).
#[derive(Clone, Debug)]
pub struct CnaSearchOptions {
    pub x_min: f64,
    pub x_max: f64,
    pub grid_points: usize,
    pub n_starts: usize,
}

impl Default for CnaSearchOptions {
    fn default() -> Self {
        CnaSearchOptions { x_min: 0.05, x_max: 10.0, grid_points: 11, n_starts: 24 }
    }
}

fn safe_success_c(t: f64, x: f64, y: f64, z: f64, gamma: f64) -> f64 {
    CabelloPoint::new(t, x, y, z, gamma)
        .and_then(|p| cabello::success_c(&p))
        .unwrap_or(-2.0)
}

/// Global maximum of `C(t, x, y, z, gamma)` over the search box. The
/// reported argmax carries `(x, y, z)` in ascending order; the objective is
/// permutation-invariant so this is a pure relabeling.
pub fn maximize_three_qubit_cna() -> OptimizationResult {
    maximize_three_qubit_cna_with(&CnaSearchOptions::default())
}

pub fn maximize_three_qubit_cna_with(opts: &CnaSearchOptions) -> OptimizationResult {
    let space = SearchSpace {
        lo: vec![0.0, opts.x_min, opts.x_min, opts.x_min, -std::f64::consts::PI],
        hi: vec![1.0, opts.x_max, opts.x_max, opts.x_max, std::f64::consts::PI],
        log_scale: vec![false, true, true, true, false],
    };
    let f = |p: &[f64]| safe_success_c(p[0], p[1], p[2], p[3], p[4]);
    let mut result = multistart_maximize("cna3", f, space, opts.grid_points, opts.n_starts);
    // canonical permutation order
    let mut xyz = [result.argmax[1], result.argmax[2], result.argmax[3]];
    xyz.sort_by(|a, b| a.partial_cmp(b).unwrap());
    result.argmax[1] = xyz[0];
    result.argmax[2] = xyz[1];
    result.argmax[3] = xyz[2];
    result.value = f(&result.argmax);
    result.evaluations += 1;
    result
}

/// Best `C` at a fixed entanglement parameter.
///
/// `t = 0` short-circuits: the product-state value is analytic and negative
/// everywhere, maximized toward large tangents, so the box corner is
/// reported without a search.
pub fn maximize_cna_fixed_t(t: f64, symmetric: bool) -> OptimizationResult {
    let opts = CnaSearchOptions::default();
    if t == 0.0 {
        let corner = opts.x_max;
        let argmax = vec![corner, corner, corner, 0.0];
        let value = safe_success_c(0.0, corner, corner, corner, 0.0);
        return OptimizationResult {
            objective: "cna3-fixed-t".to_string(),
            argmax,
            value,
            evaluations: 1,
            stages: vec![Stage { stage: "analytic-t0".to_string(), best: value }],
        };
    }
    if symmetric {
        let space = SearchSpace {
            lo: vec![opts.x_min, -std::f64::consts::PI],
            hi: vec![opts.x_max, std::f64::consts::PI],
            log_scale: vec![true, false],
        };
        let f = move |p: &[f64]| safe_success_c(t, p[0], p[0], p[0], p[1]);
        let mut result = multistart_maximize("cna3-fixed-t-symmetric", f, space, 41, 12);
        result.argmax = vec![result.argmax[0], result.argmax[0], result.argmax[0], result.argmax[1]];
        return result;
    }
    let space = SearchSpace {
        lo: vec![opts.x_min, opts.x_min, opts.x_min, -std::f64::consts::PI],
        hi: vec![opts.x_max, opts.x_max, opts.x_max, std::f64::consts::PI],
        log_scale: vec![true, true, true, false],
    };
    let f = move |p: &[f64]| safe_success_c(t, p[0], p[1], p[2], p[3]);
    multistart_maximize("cna3-fixed-t", f, space, 11, 16)
}

/// Maximum of the Hardy slice (`Q = 0`): search over `(t, x, y)` with
/// `z = 1/(t x y)` and zero phase sum.
pub fn maximize_three_qubit_hardy() -> OptimizationResult {
    let space = SearchSpace {
        lo: vec![0.01, 0.1, 0.1],
        hi: vec![1.0, 10.0, 10.0],
        log_scale: vec![false, true, true],
    };
    let f = |p: &[f64]| {
        let (t, x, y) = (p[0], p[1], p[2]);
        let z = 1.0 / (t * x * y);
        safe_success_c(t, x, y, z, 0.0)
    };
    multistart_maximize("hna3", f, space, 21, 16)
}

// ---------------------------------------------------------------------------
// Two-qubit baselines
// ---------------------------------------------------------------------------

/// Angles satisfying the two-qubit zero conditions
/// `P(D1,U2|++) = P(U1,D2|++) = 0` for tangents `x = tan(beta_1)`,
/// `y = tan(beta_2)` and phase sum `gamma = gamma_1 + gamma_2`.
///
/// The zeros force `tan(beta_1) tan(alpha_2) = tan(alpha_1) tan(beta_2) = t`
/// and pin the phase sums to `gamma_1 + delta_2 = delta_1 + gamma_2 = pi`;
/// the even split is the canonical representative.
pub fn two_qubit_angles(t: f64, x: f64, y: f64, gamma: f64) -> [QubitMeasurementAngles; 2] {
    let half = gamma / 2.0;
    let delta_i = std::f64::consts::PI - half;
    [
        QubitMeasurementAngles { alpha: (t / y).atan(), delta: delta_i, beta: x.atan(), gamma: half },
        QubitMeasurementAngles { alpha: (t / x).atan(), delta: delta_i, beta: y.atan(), gamma: half },
    ]
}

/// `(R, S) = (P(U1,U2|++), P(D1,D2|--))` for the eliminated two-qubit
/// parameterization, evaluated through the state-vector engine.
pub fn two_qubit_rs(t: f64, x: f64, y: f64, gamma: f64) -> (f64, f64) {
    let state = match GhzParam::new(t).and_then(|g| quantum::ghz_state(g, 2)) {
        Ok(s) => s,
        Err(_) => return (0.0, 1.0),
    };
    let angles = two_qubit_angles(t, x, y, gamma);
    let r = quantum::joint_probability(
        &state,
        &angles,
        &[Setting::U, Setting::U],
        &[Outcome::Plus, Outcome::Plus],
    )
    .unwrap_or(0.0);
    let s = quantum::joint_probability(
        &state,
        &angles,
        &[Setting::D, Setting::D],
        &[Outcome::Minus, Outcome::Minus],
    )
    .unwrap_or(1.0);
    (r, s)
}

/// Two-qubit Hardy maximum: `S = 0` eliminated via `x y = 1/t` and
/// `gamma = pi`, leaving a search over `(t, x)`.
pub fn maximize_two_qubit_hardy() -> OptimizationResult {
    let space = SearchSpace {
        lo: vec![0.01, 0.05],
        hi: vec![1.0, 20.0],
        log_scale: vec![false, true],
    };
    let f = |p: &[f64]| {
        let (t, x) = (p[0], p[1]);
        let y = 1.0 / (t * x);
        let (r, s) = two_qubit_rs(t, x, y, std::f64::consts::PI);
        r - s
    };
    multistart_maximize("hna2", f, space, 41, 12)
}

/// Two-qubit Cabello maximum over `(t, x, y, gamma)`.
pub fn maximize_two_qubit_cabello() -> OptimizationResult {
    let space = SearchSpace {
        lo: vec![0.01, 0.05, 0.05, -std::f64::consts::PI],
        hi: vec![1.0, 20.0, 20.0, std::f64::consts::PI],
        log_scale: vec![false, true, true, false],
    };
    let f = |p: &[f64]| {
        let (r, s) = two_qubit_rs(p[0], p[1], p[2], p[3]);
        r - s
    };
    multistart_maximize("cna2", f, space, 11, 16)
}

/// Two-qubit Cabello maximum restricted to real measurement phases
/// (`gamma = pi`, the Hardy-compatible slice).
pub fn maximize_two_qubit_cabello_real_slice() -> OptimizationResult {
    let space = SearchSpace {
        lo: vec![0.01, 0.05, 0.05],
        hi: vec![1.0, 20.0, 20.0],
        log_scale: vec![false, true, true],
    };
    let f = |p: &[f64]| {
        let (r, s) = two_qubit_rs(p[0], p[1], p[2], std::f64::consts::PI);
        r - s
    };
    multistart_maximize("cna2-real", f, space, 21, 12)
}
