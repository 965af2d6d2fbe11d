//! Dense two-phase simplex with Bland's anti-cycling rule, plus the LP
//! builders for the no-signaling polytope questions: the maximal `C` under
//! the Hardy/Cabello zeros, the `P = 0.5 + delta` infeasibility probe, the
//! pair-marginal-zero (Rahaman) maximum, and the GYNI maximum.
//!
//! The behavior polytope is small (64 variables) but heavily degenerate and
//! rank-deficient — the 48 no-signaling equalities are far from independent —
//! so the solver keeps phase-1 artificials basic at zero where a row turns
//! out redundant and relies on Bland's rule for termination, not speed.

use serde::Serialize;
use thiserror::Error;

use crate::boxworld::{BoxError, JointDistribution, TwoQubitDistribution};
use crate::scenario::{Outcome, OutcomePair, OutcomeTriple, Setting, SettingPair, SettingTriple};

/// Pivot eligibility tolerance.
const PIVOT_TOL: f64 = 1e-10;
/// Phase-1 optimum above this is declared infeasible.
const FEAS_TOL: f64 = 1e-8;
/// Guard against runaway pivoting; Bland's rule precludes cycling, so this
/// should only ever trip on a malformed problem.
const MAX_PIVOTS: usize = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("constraint row {row} has {got} coefficients, expected {expected}")]
    RowShape { row: usize, got: usize, expected: usize },
    #[error("problem has no variables")]
    Empty,
    #[error("coefficient or bound is not finite in row {0}")]
    NonFinite(usize),
    #[error("pivot limit exceeded")]
    PivotLimit,
    #[error("solution point has {got} entries, expected 64")]
    NotABehavior { got: usize },
}

/// `maximize objective . x` subject to `equalities` and `x >= 0`.
#[derive(Clone, Debug, Serialize)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub equalities: Vec<(Vec<f64>, f64)>,
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn check(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if n == 0 {
            return Err(LpError::Empty);
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite(usize::MAX));
        }
        for (i, (row, b)) in self.equalities.iter().enumerate() {
            if row.len() != n {
                return Err(LpError::RowShape { row: i, got: row.len(), expected: n });
            }
            if row.iter().any(|c| !c.is_finite()) || !b.is_finite() {
                return Err(LpError::NonFinite(i));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// A solver verdict; `point`/`value`/`basis` are meaningful only when
/// `status == Optimal`.
#[derive(Clone, Debug, Serialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    pub point: Vec<f64>,
    /// Basis variable per tableau row; indices `>= num_vars` are phase-1
    /// artificials parked at zero on redundant rows.
    pub basis: Vec<usize>,
}

impl LpSolution {
    fn non_optimal(status: LpStatus) -> LpSolution {
        LpSolution { status, value: f64::NAN, point: Vec::new(), basis: Vec::new() }
    }

    /// Reinterprets a 64-variable solution point as a behavior table.
    pub fn as_distribution(&self) -> Result<JointDistribution, LpError> {
        if self.point.len() != 64 {
            return Err(LpError::NotABehavior { got: self.point.len() });
        }
        let mut table = [[0.0f64; 8]; 8];
        for s in 0..8 {
            for o in 0..8 {
                table[s][o] = self.point[s * 8 + o];
            }
        }
        JointDistribution::from_table(table)
            .map_err(|_| LpError::NotABehavior { got: self.point.len() })
    }

    /// Largest violation of the program's constraints at `point`
    /// (equality residuals and negative parts), checked independently of the
    /// solver's own bookkeeping.
    pub fn max_violation(&self, lp: &LinearProgram) -> f64 {
        let mut worst = 0.0f64;
        for x in &self.point {
            worst = worst.max(-x.min(0.0));
        }
        for (row, b) in &lp.equalities {
            let lhs: f64 = row.iter().zip(&self.point).map(|(a, x)| a * x).sum();
            worst = worst.max((lhs - b).abs());
        }
        worst
    }
}

struct Tableau {
    /// `rows x (num_total + 1)`; last column is the right-hand side.
    rows: Vec<Vec<f64>>,
    /// Reduced-profit row: entering improves the objective when positive.
    obj: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.rows[0].len();
        let p = self.rows[row][col];
        for j in 0..width {
            self.rows[row][j] /= p;
        }
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let f = self.rows[i][col];
            if f != 0.0 {
                for j in 0..width {
                    self.rows[i][j] -= f * self.rows[row][j];
                }
                self.rows[i][col] = 0.0;
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for j in 0..width {
                self.obj[j] -= f * self.rows[row][j];
            }
            self.obj[col] = 0.0;
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Bland's rule iteration: entering = smallest improving column among
    /// `allowed`, leaving = minimum ratio with smallest basis index on ties.
    fn iterate(&mut self, allowed: usize) -> Result<LpStatus, LpError> {
        let rhs = self.rows[0].len() - 1;
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(LpError::PivotLimit);
            }
            let entering = (0..allowed).find(|&j| self.obj[j] > PIVOT_TOL);
            let Some(entering) = entering else {
                return Ok(LpStatus::Optimal);
            };
            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][entering];
                if a > PIVOT_TOL {
                    let ratio = self.rows[i][rhs] / a;
                    leaving = match leaving {
                        None => Some((i, ratio)),
                        Some((best_i, best)) => {
                            if ratio < best - PIVOT_TOL
                                || ((ratio - best).abs() <= PIVOT_TOL
                                    && self.basis[i] < self.basis[best_i])
                            {
                                Some((i, ratio))
                            } else {
                                Some((best_i, best))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leaving else {
                return Ok(LpStatus::Unbounded);
            };
            self.pivot(row, entering);
        }
    }
}

/// Two-phase simplex over `{ x >= 0 : A x = b }`.
pub fn simplex_solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.check()?;
    let n = lp.num_vars();
    let m = lp.equalities.len();
    let total = n + m;

    let mut rows = Vec::with_capacity(m);
    for (i, (coeffs, b)) in lp.equalities.iter().enumerate() {
        let mut row = vec![0.0; total + 1];
        let flip = if *b < 0.0 { -1.0 } else { 1.0 };
        for (j, c) in coeffs.iter().enumerate() {
            row[j] = flip * c;
        }
        row[n + i] = 1.0;
        row[total] = flip * b;
        rows.push(row);
    }

    // Phase 1: maximize -(sum of artificials). With the artificial basis the
    // reduced profit of column j is the column sum over all rows.
    let mut obj = vec![0.0; total + 1];
    for j in 0..n {
        obj[j] = rows.iter().map(|r| r[j]).sum();
    }
    obj[total] = rows.iter().map(|r| r[total]).sum::<f64>();
    // obj[total] tracks the remaining infeasibility (starts at sum b >= 0)

    let mut tab = Tableau { rows, obj, basis: (n..n + m).collect(), pivots: 0 };
    match tab.iterate(n)? {
        LpStatus::Optimal => {}
        LpStatus::Unbounded => unreachable!("phase 1 objective is bounded above by 0"),
        LpStatus::Infeasible => unreachable!(),
    }
    let infeasibility = tab.obj[total].abs();
    if infeasibility > FEAS_TOL {
        return Ok(LpSolution::non_optimal(LpStatus::Infeasible));
    }

    // Drive artificials out of the basis with degenerate pivots; rows whose
    // non-artificial coefficients are all zero are redundant and keep their
    // artificial parked at zero.
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| tab.rows[i][j].abs() > PIVOT_TOL) {
                tab.pivot(i, j);
            }
        }
    }

    // Phase 2: install the real objective and canonicalize it against the
    // current basis. Artificial columns are excluded from entering.
    let total_col = total;
    tab.obj = vec![0.0; total + 1];
    for j in 0..n {
        tab.obj[j] = lp.objective[j];
    }
    for i in 0..m {
        let b_var = tab.basis[i];
        if b_var < n {
            let c = lp.objective[b_var];
            if c != 0.0 {
                for j in 0..=total_col {
                    tab.obj[j] -= c * tab.rows[i][j];
                }
                tab.obj[b_var] = 0.0;
            }
        }
    }

    let status = tab.iterate(n)?;
    if status == LpStatus::Unbounded {
        return Ok(LpSolution::non_optimal(LpStatus::Unbounded));
    }

    let rhs = total + 1 - 1;
    let mut point = vec![0.0; n];
    for i in 0..m {
        if tab.basis[i] < n {
            point[tab.basis[i]] = tab.rows[i][rhs];
        }
    }
    let value = lp.objective.iter().zip(&point).map(|(c, x)| c * x).sum();
    Ok(LpSolution { status: LpStatus::Optimal, value, point, basis: tab.basis })
}

// ---------------------------------------------------------------------------
// Problem builders over the (3,2,2) behavior polytope
// ---------------------------------------------------------------------------

/// Column of the behavior variable `P(settings -> outcomes)`.
pub fn behavior_column(settings: SettingTriple, outcomes: OutcomeTriple) -> usize {
    settings.index() * 8 + outcomes.index()
}

fn column_of(key: &str) -> usize {
    let key: crate::scenario::TableKey = key.parse().expect("valid table key");
    behavior_column(key.settings, key.outcomes)
}

/// The 8 normalization equalities.
fn normalization_rows() -> Vec<(Vec<f64>, f64)> {
    SettingTriple::all()
        .map(|s| {
            let mut row = vec![0.0; 64];
            for o in OutcomeTriple::all() {
                row[behavior_column(s, o)] = 1.0;
            }
            (row, 1.0)
        })
        .collect()
}

/// The 48 no-signaling equalities (16 per party).
fn no_signaling_rows() -> Vec<(Vec<f64>, f64)> {
    let mut rows = Vec::with_capacity(48);
    for party in 0..3 {
        for s in SettingTriple::all() {
            if s.0[party] != Setting::U {
                continue;
            }
            let s_other = s.with_party(party, Setting::D);
            for o in OutcomeTriple::all() {
                if o.0[party] != Outcome::Plus {
                    continue;
                }
                let mut o_minus = o.0;
                o_minus[party] = Outcome::Minus;
                let o_minus = OutcomeTriple(o_minus);
                let mut row = vec![0.0; 64];
                row[behavior_column(s, o)] += 1.0;
                row[behavior_column(s, o_minus)] += 1.0;
                row[behavior_column(s_other, o)] -= 1.0;
                row[behavior_column(s_other, o_minus)] -= 1.0;
                rows.push((row, 0.0));
            }
        }
    }
    rows
}

fn single_entry_zero(key: &str) -> (Vec<f64>, f64) {
    let mut row = vec![0.0; 64];
    row[column_of(key)] = 1.0;
    (row, 0.0)
}

fn gnst_base_rows() -> Vec<(Vec<f64>, f64)> {
    let mut rows = normalization_rows();
    rows.extend(no_signaling_rows());
    rows
}

/// `maximize C = P(UUU|+++) - P(DDD|---)` over no-signaling behaviors
/// satisfying the three Hardy/Cabello zero conditions.
pub fn build_gnst_problem() -> LinearProgram {
    let mut equalities = gnst_base_rows();
    for key in ["DUU|+++", "UDU|+++", "UUD|+++"] {
        equalities.push(single_entry_zero(key));
    }
    let mut objective = vec![0.0; 64];
    objective[column_of("UUU|+++")] = 1.0;
    objective[column_of("DDD|---")] = -1.0;
    LinearProgram { objective, equalities }
}

/// Probes the family `P = p_target`, `Q = p_target - 1/2` on top of the
/// GNST constraints, maximizing `Q` (pinned, so the optimal value is the
/// pinned `Q` itself whenever the system is consistent).
///
/// This is the "`P = 0.5 + delta` and `Q = delta`" compatibility question:
/// only `delta = 0` is feasible — the polytope realizes its maximal success
/// difference exclusively with `P = 1/2` and `Q = 0`. Pinning `P` alone
/// would be a different (and much weaker) question: large `Q` values such as
/// `Q = 1` coexist with any `P` once every party answers `-` under `D`.
pub fn max_q_given_p(p_target: f64) -> Result<LpSolution, LpError> {
    let base = build_gnst_problem();
    let mut equalities = base.equalities;
    let mut pin_p = vec![0.0; 64];
    pin_p[column_of("UUU|+++")] = 1.0;
    equalities.push((pin_p, p_target));
    let mut pin_q = vec![0.0; 64];
    pin_q[column_of("DDD|---")] = 1.0;
    equalities.push((pin_q, p_target - 0.5));
    let mut objective = vec![0.0; 64];
    objective[column_of("DDD|---")] = 1.0;
    simplex_solve(&LinearProgram { objective, equalities })
}

/// `maximize P(UUU|+++)` under the GNST constraints plus the pair-marginal
/// zeros and `P(DDD|---) = 0`.
///
/// Each marginal zero is expanded once per setting of the ignored party; the
/// two copies are equivalent under no-signaling, and the redundancy costs
/// nothing given the phase-1 handling of dependent rows.
pub fn build_rahaman_problem() -> LinearProgram {
    let mut equalities = gnst_base_rows();
    use Outcome::Plus;
    use Setting::{D, U};
    // P(D1,U2|++) = 0, P(D2,U3|++) = 0, P(U1,D3|++) = 0
    let marginals: [[(usize, Setting, Outcome); 2]; 3] = [
        [(0, D, Plus), (1, U, Plus)],
        [(1, D, Plus), (2, U, Plus)],
        [(0, U, Plus), (2, D, Plus)],
    ];
    for pair in marginals {
        let fixed: Vec<usize> = pair.iter().map(|(p, _, _)| *p).collect();
        let free = (0..3).find(|p| !fixed.contains(p)).unwrap();
        for free_setting in Setting::BOTH {
            let mut row = vec![0.0; 64];
            let mut settings = [Setting::U; 3];
            settings[free] = free_setting;
            for (p, s, _) in pair {
                settings[p] = s;
            }
            let settings = SettingTriple(settings);
            for o in OutcomeTriple::all() {
                if pair.iter().all(|&(p, _, want)| o.0[p] == want) {
                    row[behavior_column(settings, o)] = 1.0;
                }
            }
            equalities.push((row, 0.0));
        }
    }
    equalities.push(single_entry_zero("DDD|---"));
    let mut objective = vec![0.0; 64];
    objective[column_of("UUU|+++")] = 1.0;
    LinearProgram { objective, equalities }
}

/// `maximize` the four-term GYNI sum over all no-signaling behaviors (no
/// Hardy/Cabello zeros).
pub fn build_gyni_problem() -> LinearProgram {
    let equalities = gnst_base_rows();
    let mut objective = vec![0.0; 64];
    for key in ["UUU|+++", "UDD|--+", "DUD|+--", "DDU|-+-"] {
        objective[column_of(key)] = 1.0;
    }
    LinearProgram { objective, equalities }
}

/// Solves the GYNI maximization; the no-signaling optimum is 4/3.
pub fn max_gyni_nosignaling() -> Result<LpSolution, LpError> {
    simplex_solve(&build_gyni_problem())
}

// ---------------------------------------------------------------------------
// Two-party polytope (used to sample boxes satisfying the two-qubit zeros)
// ---------------------------------------------------------------------------

/// Column of the pair-behavior variable.
pub fn pair_column(settings: SettingPair, outcomes: OutcomePair) -> usize {
    settings.index() * 4 + outcomes.index()
}

/// Feasible set of two-party no-signaling boxes with the two zero conditions
/// `P(D1,U2|++) = P(U1,D2|++) = 0`; the objective is zero (callers install
/// their own).
pub fn build_two_qubit_cabello_polytope() -> LinearProgram {
    let mut equalities = Vec::new();
    for s in SettingPair::all() {
        let mut row = vec![0.0; 16];
        for o in OutcomePair::all() {
            row[pair_column(s, o)] = 1.0;
        }
        equalities.push((row, 1.0));
    }
    for party in 0..2 {
        for s in SettingPair::all() {
            if s.0[party] != Setting::U {
                continue;
            }
            let mut s_other = s.0;
            s_other[party] = Setting::D;
            let s_other = SettingPair(s_other);
            for o in OutcomePair::all() {
                if o.0[party] != Outcome::Plus {
                    continue;
                }
                let mut o_minus = o.0;
                o_minus[party] = Outcome::Minus;
                let o_minus = OutcomePair(o_minus);
                let mut row = vec![0.0; 16];
                row[pair_column(s, o)] += 1.0;
                row[pair_column(s, o_minus)] += 1.0;
                row[pair_column(s_other, o)] -= 1.0;
                row[pair_column(s_other, o_minus)] -= 1.0;
                equalities.push((row, 0.0));
            }
        }
    }
    use Outcome::Plus;
    use Setting::{D, U};
    for (s, o) in [
        (SettingPair([D, U]), OutcomePair([Plus, Plus])),
        (SettingPair([U, D]), OutcomePair([Plus, Plus])),
    ] {
        let mut row = vec![0.0; 16];
        row[pair_column(s, o)] = 1.0;
        equalities.push((row, 0.0));
    }
    LinearProgram { objective: vec![0.0; 16], equalities }
}

/// Reinterprets a 16-entry LP point as a pair behavior table.
pub fn pair_point_to_distribution(point: &[f64]) -> Result<TwoQubitDistribution, BoxError> {
    let mut table = [[0.0f64; 4]; 4];
    for s in 0..4 {
        for o in 0..4 {
            table[s][o] = point[s * 4 + o];
        }
    }
    TwoQubitDistribution::from_table(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxworld::{paper_distribution, FixtureId};

    #[test]
    fn maximize_on_standard_simplex() {
        let lp = LinearProgram {
            objective: vec![1.0, 0.0],
            equalities: vec![(vec![1.0, 1.0], 1.0)],
        };
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 1.0).abs() < 1e-12);
        assert!((sol.point[0] - 1.0).abs() < 1e-12);
        assert!(sol.point[1].abs() < 1e-12);
    }

    #[test]
    fn infeasible_detected() {
        let lp = LinearProgram {
            objective: vec![1.0, 1.0],
            equalities: vec![(vec![1.0, 1.0], 1.0), (vec![1.0, 1.0], 2.0)],
        };
        assert_eq!(simplex_solve(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let lp = LinearProgram {
            objective: vec![1.0, 0.0],
            equalities: vec![(vec![0.0, 1.0], 1.0)],
        };
        assert_eq!(simplex_solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn negative_rhs_handled() {
        // x - y = -2 with x,y >= 0, maximize x - picks y = 2 + x unbounded?
        // no: maximize -x so optimum x=0, y=2.
        let lp = LinearProgram {
            objective: vec![-1.0, 0.0],
            equalities: vec![(vec![1.0, -1.0], -2.0)],
        };
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(sol.point[0].abs() < 1e-12);
        assert!((sol.point[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_rows_tolerated() {
        // duplicated constraints must not change the optimum
        let lp = LinearProgram {
            objective: vec![2.0, 1.0, 0.0],
            equalities: vec![
                (vec![1.0, 1.0, 1.0], 1.0),
                (vec![1.0, 1.0, 1.0], 1.0),
                (vec![2.0, 2.0, 2.0], 2.0),
            ],
        };
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 2.0).abs() < 1e-12);
        assert!(sol.max_violation(&lp) < 1e-12);
    }

    #[test]
    fn malformed_rejected() {
        let lp = LinearProgram {
            objective: vec![1.0, 0.0],
            equalities: vec![(vec![1.0], 1.0)],
        };
        assert!(matches!(simplex_solve(&lp), Err(LpError::RowShape { .. })));
    }

    #[test]
    fn gnst_problem_shape() {
        let lp = build_gnst_problem();
        assert_eq!(lp.num_vars(), 64);
        assert_eq!(lp.equalities.len(), 8 + 48 + 3);
    }

    #[test]
    fn gnst_objective_at_fixtures() {
        // the fixture tables are feasible points with objective 0.5
        let lp = build_gnst_problem();
        for id in [FixtureId::Set20, FixtureId::Set21] {
            let d = paper_distribution(id);
            let point: Vec<f64> = (0..64)
                .map(|i| d.table()[i / 8][i % 8])
                .collect();
            for (row, b) in &lp.equalities {
                let lhs: f64 = row.iter().zip(&point).map(|(a, x)| a * x).sum();
                assert!((lhs - b).abs() < 1e-12);
            }
            let value: f64 = lp.objective.iter().zip(&point).map(|(c, x)| c * x).sum();
            assert!((value - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn gnst_optimum_is_half() {
        let sol = simplex_solve(&build_gnst_problem()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 0.5).abs() < 1e-9);
        let d = sol.as_distribution().unwrap();
        assert!(d.validate().all_ok());
        let (c, zeros_ok) = d.hardy_cabello_check();
        assert!((c - 0.5).abs() < 1e-9);
        assert!(zeros_ok);
    }

    #[test]
    fn pinned_p_probes() {
        let sol = max_q_given_p(0.5).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(sol.value.abs() < 1e-9);
        assert!(sol.as_distribution().unwrap().validate().all_ok());
        assert_eq!(max_q_given_p(0.51).unwrap().status, LpStatus::Infeasible);
        assert_eq!(max_q_given_p(0.6).unwrap().status, LpStatus::Infeasible);
        // delta < 0 pins Q negative, impossible outright
        assert_eq!(max_q_given_p(0.1).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn small_p_alone_is_feasible() {
        // Pinning P alone is a weaker question than the delta-family probe:
        // P = 0.1 boxes exist (mix the C = 1/2 box with the all-minus
        // deterministic box at weight 0.2: P = 0.1, Q = 0.8), and Q is free
        // to reach 1 once every party answers `-` under D.
        let base = build_gnst_problem();
        let mut equalities = base.equalities;
        let mut pin = vec![0.0; 64];
        pin[column_of("UUU|+++")] = 1.0;
        equalities.push((pin, 0.1));
        let mut objective = vec![0.0; 64];
        objective[column_of("DDD|---")] = 1.0;
        let sol = simplex_solve(&LinearProgram { objective, equalities }).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(sol.value >= 0.8 - 1e-9);
        assert!(sol.as_distribution().unwrap().validate().all_ok());

        // the hand-built mixture really is a feasible point
        let half = paper_distribution(FixtureId::Set20);
        let all_minus = crate::boxworld::deterministic_box([[crate::scenario::Outcome::Minus; 2]; 3]);
        let mut table = [[0.0f64; 8]; 8];
        for s in 0..8 {
            for o in 0..8 {
                table[s][o] = 0.2 * half.table()[s][o] + 0.8 * all_minus.table()[s][o];
            }
        }
        let mix = JointDistribution::from_table(table).unwrap();
        assert!(mix.validate().all_ok());
        let (c, zeros_ok) = mix.hardy_cabello_check();
        assert!(zeros_ok);
        assert!((mix.at("UUU|+++") - 0.1).abs() < 1e-12);
        assert!((c - (0.1 - 0.8)).abs() < 1e-12);
    }

    #[test]
    fn rahaman_optimum_is_third() {
        let lp = build_rahaman_problem();
        assert_eq!(lp.equalities.len(), 8 + 48 + 6 + 1);
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 1.0 / 3.0).abs() < 1e-9);
        // set23 is feasible with objective exactly 1/3
        let d = paper_distribution(FixtureId::Set23);
        let point: Vec<f64> = (0..64).map(|i| d.table()[i / 8][i % 8]).collect();
        for (row, b) in &lp.equalities {
            let lhs: f64 = row.iter().zip(&point).map(|(a, x)| a * x).sum();
            assert!((lhs - b).abs() < 1e-12);
        }
        // pinning the objective above the optimum must be infeasible
        let mut pinned = lp.clone();
        let mut pin = vec![0.0; 64];
        pin[column_of("UUU|+++")] = 1.0;
        pinned.equalities.push((pin, 0.4));
        assert_eq!(simplex_solve(&pinned).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn gyni_optimum_is_four_thirds() {
        let sol = max_gyni_nosignaling().unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 4.0 / 3.0).abs() < 1e-9);
        assert!(sol.as_distribution().unwrap().validate().all_ok());
    }

    #[test]
    fn two_qubit_polytope_feasible() {
        let mut lp = build_two_qubit_cabello_polytope();
        // maximize R - S: optimum 1/2 mirrors the three-party result
        lp.objective[pair_column(
            SettingPair([Setting::U, Setting::U]),
            OutcomePair([Outcome::Plus, Outcome::Plus]),
        )] = 1.0;
        lp.objective[pair_column(
            SettingPair([Setting::D, Setting::D]),
            OutcomePair([Outcome::Minus, Outcome::Minus]),
        )] = -1.0;
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 0.5).abs() < 1e-9);
        let d2 = pair_point_to_distribution(&sol.point).unwrap();
        assert!((d2.chsh_value() - 4.0).abs() < 1e-9);
    }
}
