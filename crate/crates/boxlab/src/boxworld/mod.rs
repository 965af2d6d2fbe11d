//! Behavior tables for the (3,2,2) scenario: validation against the
//! generalized no-signaling constraints, marginals and correlators, and the
//! Bell-type / Svetlichny / GYNI inequality evaluators.
//!
//! A [`JointDistribution`] is just the 8x8 table of joint probabilities
//! `P(settings -> outcomes)`. Positivity, normalization and no-signaling are
//! *checked*, not enforced at construction, because several consumers (the
//! CLI verifier, deliberately broken test inputs) need to hold invalid
//! tables long enough to report on them.

mod exact;
mod json;

pub use exact::{paper_distribution, paper_distribution_exact, ExactDistribution, FixtureId};

use serde::Serialize;
use thiserror::Error;

use crate::scenario::{
    Outcome, OutcomePair, OutcomeTriple, Setting, SettingPair, SettingTriple, TableKey,
};

/// Tolerance separating genuine constraint violations from float noise.
pub const BOX_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum BoxError {
    #[error("table entry {key} is not finite")]
    NonFinite { key: String },
    #[error("malformed table key `{0}` (expected e.g. `UDU|+-+`)")]
    BadKey(String),
    #[error("duplicate parties in marginal selection")]
    DuplicateParty,
    #[error("party index {0} outside 0..3")]
    BadParty(usize),
    #[error("marginal is ambiguous: depends on ignored settings by {spread:e}")]
    AmbiguousMarginal { spread: f64 },
    #[error("distribution is signaling (worst violation {0:e}); marginals undefined")]
    Signaling(f64),
    #[error("unknown fixture id `{0}`")]
    UnknownFixture(String),
    #[error("box322 parse error: {0}")]
    Parse(String),
}

/// Result of one validation constraint.
#[derive(Clone, Debug, Serialize)]
pub struct CheckDetail {
    pub constraint: String,
    pub violation: f64,
    pub ok: bool,
}

/// Outcome of [`JointDistribution::validate`].
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub positivity_ok: bool,
    pub normalization_ok: bool,
    pub no_signaling_ok: bool,
    pub worst_negativity: f64,
    pub worst_normalization: f64,
    pub worst_signaling: f64,
    pub details: Vec<CheckDetail>,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.positivity_ok && self.normalization_ok && self.no_signaling_ok
    }

    /// One row per constraint, `constraint,ok,violation`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("constraint,ok,violation\n");
        for d in &self.details {
            out.push_str(&format!("{},{},{:.16e}\n", d.constraint, d.ok, d.violation));
        }
        out
    }
}

/// 64-entry behavior table of the (3,2,2) scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    table: [[f64; 8]; 8],
}

impl JointDistribution {
    /// Wraps a raw table, rejecting non-finite entries.
    pub fn from_table(table: [[f64; 8]; 8]) -> Result<JointDistribution, BoxError> {
        for s in SettingTriple::all() {
            for o in OutcomeTriple::all() {
                let v = table[s.index()][o.index()];
                if !v.is_finite() {
                    return Err(BoxError::NonFinite {
                        key: TableKey { settings: s, outcomes: o }.to_string(),
                    });
                }
            }
        }
        Ok(JointDistribution { table })
    }

    /// Builds a table from `(key, probability)` pairs; omitted keys are zero.
    pub fn from_entries(entries: &[(&str, f64)]) -> Result<JointDistribution, BoxError> {
        let mut table = [[0.0; 8]; 8];
        for (key, value) in entries {
            let key: TableKey = key.parse()?;
            table[key.settings.index()][key.outcomes.index()] = *value;
        }
        JointDistribution::from_table(table)
    }

    /// The fully mixed box: every entry 1/8.
    pub fn uniform() -> JointDistribution {
        JointDistribution { table: [[0.125; 8]; 8] }
    }

    pub fn entry(&self, settings: SettingTriple, outcomes: OutcomeTriple) -> f64 {
        self.table[settings.index()][outcomes.index()]
    }

    pub fn entry_mut(&mut self, settings: SettingTriple, outcomes: OutcomeTriple) -> &mut f64 {
        &mut self.table[settings.index()][outcomes.index()]
    }

    pub fn table(&self) -> &[[f64; 8]; 8] {
        &self.table
    }

    /// The probability at a `UDU|+-+`-style key (test/CLI convenience).
    pub fn at(&self, key: &str) -> f64 {
        let key: TableKey = key.parse().expect("valid table key");
        self.entry(key.settings, key.outcomes)
    }

    /// Checks positivity, the 8 normalization sums, and the 48 no-signaling
    /// equalities at tolerance [`BOX_TOL`].
    pub fn validate(&self) -> ValidationReport {
        let mut details = Vec::with_capacity(64 + 8 + 48);
        let mut worst_negativity = 0.0f64;
        for s in SettingTriple::all() {
            for o in OutcomeTriple::all() {
                let v = self.entry(s, o);
                let violation = (-v).max(0.0);
                worst_negativity = worst_negativity.max(violation);
                details.push(CheckDetail {
                    constraint: format!("positivity:{}", TableKey { settings: s, outcomes: o }),
                    violation,
                    ok: violation <= BOX_TOL,
                });
            }
        }

        let mut worst_normalization = 0.0f64;
        for s in SettingTriple::all() {
            let sum: f64 = OutcomeTriple::all().map(|o| self.entry(s, o)).sum();
            let violation = (sum - 1.0).abs();
            worst_normalization = worst_normalization.max(violation);
            details.push(CheckDetail {
                constraint: format!("normalization:{s}"),
                violation,
                ok: violation <= BOX_TOL,
            });
        }

        let mut worst_signaling = 0.0f64;
        for party in 0..3 {
            for (s, o, violation) in self.signaling_residuals(party) {
                worst_signaling = worst_signaling.max(violation);
                details.push(CheckDetail {
                    constraint: format!(
                        "no-signaling:party{}:{}",
                        party + 1,
                        TableKey { settings: s, outcomes: o }
                    ),
                    violation,
                    ok: violation <= BOX_TOL,
                });
            }
        }

        ValidationReport {
            positivity_ok: worst_negativity <= BOX_TOL,
            normalization_ok: worst_normalization <= BOX_TOL,
            no_signaling_ok: worst_signaling <= BOX_TOL,
            worst_negativity,
            worst_normalization,
            worst_signaling,
            details,
        }
    }

    /// Residuals of the 16 no-signaling equalities in which `party`'s setting
    /// is switched. The reported key carries the other parties' labels; the
    /// switched party is shown as `U` with outcome summed out.
    fn signaling_residuals(&self, party: usize) -> Vec<(SettingTriple, OutcomeTriple, f64)> {
        let mut rows = Vec::with_capacity(16);
        for s in SettingTriple::all() {
            if s.0[party] != Setting::U {
                continue; // enumerate each equality once
            }
            let s_other = s.with_party(party, Setting::D);
            for o in OutcomeTriple::all() {
                if o.0[party] != Outcome::Plus {
                    continue; // outcome of `party` is summed out
                }
                let mut o_minus = o.0;
                o_minus[party] = Outcome::Minus;
                let o_minus = OutcomeTriple(o_minus);
                let lhs = self.entry(s, o) + self.entry(s, o_minus);
                let rhs = self.entry(s_other, o) + self.entry(s_other, o_minus);
                rows.push((s, o, (lhs - rhs).abs()));
            }
        }
        rows
    }

    /// Marginal probability of a subset of parties.
    ///
    /// `selection` lists `(party, setting, outcome)` for the kept parties
    /// (0-based party index). The unselected parties' outcomes are summed
    /// out; their settings must not matter, which is asserted across all
    /// completions within [`BOX_TOL`].
    pub fn marginal(&self, selection: &[(usize, Setting, Outcome)]) -> Result<f64, BoxError> {
        for &(p, _, _) in selection {
            if p >= 3 {
                return Err(BoxError::BadParty(p));
            }
        }
        let mut seen = [false; 3];
        for &(p, _, _) in selection {
            if seen[p] {
                return Err(BoxError::DuplicateParty);
            }
            seen[p] = true;
        }
        let free: Vec<usize> = (0..3).filter(|p| !seen[*p]).collect();

        let mut values = Vec::new();
        for combo in 0..(1usize << free.len()) {
            let mut settings = [Setting::U; 3];
            for (bit, &p) in free.iter().enumerate() {
                settings[p] = Setting::from_index((combo >> bit) & 1);
            }
            for &(p, s, _) in selection {
                settings[p] = s;
            }
            let settings = SettingTriple(settings);
            let mut sum = 0.0;
            for o in OutcomeTriple::all() {
                if selection.iter().all(|&(p, _, want)| o.0[p] == want) {
                    sum += self.entry(settings, o);
                }
            }
            values.push(sum);
        }
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if max - min > BOX_TOL {
            return Err(BoxError::AmbiguousMarginal { spread: max - min });
        }
        Ok(values[0])
    }

    /// Correlator `E(X1,Y2,Z3)`: outcome-product-weighted sum over outcomes.
    pub fn expectation(&self, settings: SettingTriple) -> f64 {
        OutcomeTriple::all()
            .map(|o| o.sign_product() * self.entry(settings, o))
            .sum()
    }

    /// LHS - RHS of the five-probability Bell-type inequality; positive
    /// values witness a violation.
    pub fn bell_inequality_value(&self) -> f64 {
        self.at("UUU|+++") - self.at("DDD|---") - self.at("DUU|+++") - self.at("UDU|+++")
            - self.at("UUD|+++")
    }

    /// `C = P(UUU|+++) - P(DDD|---)` plus whether the three zero conditions
    /// hold within [`BOX_TOL`].
    pub fn hardy_cabello_check(&self) -> (f64, bool) {
        let c = self.at("UUU|+++") - self.at("DDD|---");
        let worst = self
            .at("DUU|+++")
            .abs()
            .max(self.at("UDU|+++").abs())
            .max(self.at("UUD|+++").abs());
        (c, worst <= BOX_TOL)
    }

    /// The strengthened Hardy-type conditions built on pair-marginal zeros.
    ///
    /// Requires a no-signaling distribution (marginals are otherwise
    /// ill-defined). Returns the success probability `P(UUU|+++)` and whether
    /// all four zero conditions hold within [`BOX_TOL`].
    pub fn rahaman_check(&self) -> Result<RahamanReport, BoxError> {
        let report = self.validate();
        if !report.no_signaling_ok {
            return Err(BoxError::Signaling(report.worst_signaling));
        }
        use Outcome::Plus;
        use Setting::{D, U};
        let zeros = [
            self.marginal(&[(0, D, Plus), (1, U, Plus)])?,
            self.marginal(&[(1, D, Plus), (2, U, Plus)])?,
            self.marginal(&[(0, U, Plus), (2, D, Plus)])?,
            self.at("DDD|---"),
        ];
        let worst_zero = zeros.iter().fold(0.0f64, |m, z| m.max(z.abs()));
        Ok(RahamanReport {
            p_value: self.at("UUU|+++"),
            zeros_ok: worst_zero <= BOX_TOL,
            worst_zero,
        })
    }

    /// `|sum of signs . E(settings)|` for a Svetlichny-family sign pattern.
    pub fn svetlichny_value(&self, signs: &SignPattern) -> f64 {
        SettingTriple::all()
            .map(|s| f64::from(signs.0[s.index()]) * self.expectation(s))
            .sum::<f64>()
            .abs()
    }

    /// The four-term guess-your-neighbor's-input sum; at most 1 for quantum
    /// (and local) behaviors.
    pub fn gyni_value(&self) -> f64 {
        self.at("UUU|+++") + self.at("UDD|--+") + self.at("DUD|+--") + self.at("DDU|-+-")
    }

    /// Pair distribution of qubits 1, 2 with qubit 3 ignored. Requires the
    /// party-3 marginal to be setting-independent within [`BOX_TOL`].
    pub fn trace_out_third(&self) -> Result<TwoQubitDistribution, BoxError> {
        let mut table = [[0.0f64; 4]; 4];
        let mut worst = 0.0f64;
        for sp in SettingPair::all() {
            for op in OutcomePair::all() {
                let mut values = [0.0f64; 2];
                for (i, s3) in Setting::BOTH.into_iter().enumerate() {
                    let settings = SettingTriple([sp.0[0], sp.0[1], s3]);
                    values[i] = Outcome::BOTH
                        .into_iter()
                        .map(|o3| self.entry(settings, OutcomeTriple([op.0[0], op.0[1], o3])))
                        .sum();
                }
                worst = worst.max((values[0] - values[1]).abs());
                table[sp.index()][op.index()] = values[0];
            }
        }
        if worst > BOX_TOL {
            return Err(BoxError::Signaling(worst));
        }
        TwoQubitDistribution::from_table(table)
    }
}

/// Result of [`JointDistribution::rahaman_check`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RahamanReport {
    /// `P(UUU|+++)`.
    pub p_value: f64,
    /// Whether the three pair-marginal zeros and `P(DDD|---)` all vanish.
    pub zeros_ok: bool,
    pub worst_zero: f64,
}

impl RahamanReport {
    /// The conditions demand a strictly positive success probability on top
    /// of the four zeros.
    pub fn passes(&self) -> bool {
        self.zeros_ok && self.p_value > BOX_TOL
    }
}

/// 16-entry behavior table of the (2,2,2) scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitDistribution {
    table: [[f64; 4]; 4],
}

impl TwoQubitDistribution {
    pub fn from_table(table: [[f64; 4]; 4]) -> Result<TwoQubitDistribution, BoxError> {
        for (si, row) in table.iter().enumerate() {
            for (oi, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(BoxError::NonFinite { key: format!("pair({si},{oi})") });
                }
            }
        }
        Ok(TwoQubitDistribution { table })
    }

    pub fn uniform() -> TwoQubitDistribution {
        TwoQubitDistribution { table: [[0.25; 4]; 4] }
    }

    pub fn entry(&self, settings: SettingPair, outcomes: OutcomePair) -> f64 {
        self.table[settings.index()][outcomes.index()]
    }

    pub fn table(&self) -> &[[f64; 4]; 4] {
        &self.table
    }

    pub fn expectation(&self, settings: SettingPair) -> f64 {
        OutcomePair::all()
            .map(|o| o.sign_product() * self.entry(settings, o))
            .sum()
    }

    /// `E(U1,U2) - E(D1,U2) - E(U1,D2) - E(D1,D2)`.
    pub fn chsh_value(&self) -> f64 {
        use Setting::{D, U};
        self.expectation(SettingPair([U, U])) - self.expectation(SettingPair([D, U]))
            - self.expectation(SettingPair([U, D]))
            - self.expectation(SettingPair([D, D]))
    }
}

/// A +-1 coefficient per setting triple (indexed by [`SettingTriple::index`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignPattern(pub [i8; 8]);

/// First Svetlichny-type pattern displayed in the literature for this
/// scenario: `+E(UUU)+E(UUD)+E(UDU)-E(UDD)+E(DUU)-E(DUD)-E(DDU)-E(DDD)`.
pub const SVETLICHNY_PATTERN_A: SignPattern = SignPattern([1, 1, 1, -1, 1, -1, -1, -1]);

/// Second displayed pattern:
/// `+E(UUU)-E(UUD)+E(UDU)+E(UDD)-E(DUU)+E(DUD)+E(DDU)+E(DDD)`.
pub const SVETLICHNY_PATTERN_B: SignPattern = SignPattern([1, -1, 1, 1, -1, 1, 1, 1]);

impl SignPattern {
    /// Largest value of `|sum signs . E|` reachable by two-way-local models:
    /// one party deterministic, the other two sharing an arbitrary
    /// no-signaling box, maximized over the three bipartitions.
    ///
    /// For a split `A|BC` with deterministic signs `a_0, a_1` for A's two
    /// settings, the remaining pair correlators are free in [-1,1], so the
    /// bound is `max_a sum_{yz} |eps(0,y,z) a_0 + eps(1,y,z) a_1|`.
    pub fn two_way_local_bound(&self) -> f64 {
        let eps = |s: [usize; 3]| f64::from(self.0[s[0] * 4 + s[1] * 2 + s[2]]);
        let mut best = 0.0f64;
        for split in 0..3 {
            for (a0, a1) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut total = 0.0;
                for other in 0..4 {
                    let (y, z) = (other >> 1, other & 1);
                    let mut s0 = [0usize; 3];
                    let mut s1 = [0usize; 3];
                    s0[split] = 0;
                    s1[split] = 1;
                    let rest: Vec<usize> = (0..3).filter(|p| *p != split).collect();
                    s0[rest[0]] = y;
                    s1[rest[0]] = y;
                    s0[rest[1]] = z;
                    s1[rest[1]] = z;
                    total += (eps(s0) * a0 + eps(s1) * a1).abs();
                }
                best = best.max(total);
            }
        }
        best
    }

    /// Whether the hybrid-local bound of this pattern is exactly 4, i.e. the
    /// inequality `|sum signs . E| <= 4` is of Svetlichny type.
    pub fn is_svetlichny_type(&self) -> bool {
        self.two_way_local_bound() == 4.0
    }

    /// All sign patterns over the 8 setting triples whose two-way-local bound
    /// is 4. The two displayed patterns are members; the rest are available
    /// for exploration.
    pub fn svetlichny_family() -> Vec<SignPattern> {
        (0u16..256)
            .map(|bits| {
                let mut signs = [0i8; 8];
                for (i, s) in signs.iter_mut().enumerate() {
                    *s = if bits >> i & 1 == 1 { -1 } else { 1 };
                }
                SignPattern(signs)
            })
            .filter(|p| p.is_svetlichny_type())
            .collect()
    }
}

/// A local deterministic box: each party fixes one outcome per setting.
/// `choices[party][setting.index()]` is the produced outcome.
pub fn deterministic_box(choices: [[Outcome; 2]; 3]) -> JointDistribution {
    let mut table = [[0.0; 8]; 8];
    for s in SettingTriple::all() {
        let o = OutcomeTriple([
            choices[0][s.0[0].index()],
            choices[1][s.0[1].index()],
            choices[2][s.0[2].index()],
        ]);
        table[s.index()][o.index()] = 1.0;
    }
    JointDistribution { table }
}

/// All 64 local deterministic boxes of the (3,2,2) scenario.
pub fn all_deterministic_boxes() -> Vec<JointDistribution> {
    let mut boxes = Vec::with_capacity(64);
    for bits in 0..64usize {
        let mut choices = [[Outcome::Plus; 2]; 3];
        for party in 0..3 {
            for setting in 0..2 {
                let bit = party * 2 + setting;
                choices[party][setting] = Outcome::from_index((bits >> bit) & 1);
            }
        }
        boxes.push(deterministic_box(choices));
    }
    boxes
}
