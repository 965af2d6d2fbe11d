//! The four reference no-signaling distributions, stored as exact rationals.
//!
//! Keeping the tables rational lets the headline quantities (C values, GYNI
//! and Svetlichny sums, the traced-pair CHSH) be verified without float
//! round-off; [`ExactDistribution::to_float`] converts on demand for the
//! float evaluators.

use std::str::FromStr;

use num_rational::Rational64;

use super::{BoxError, JointDistribution, SignPattern};
use crate::scenario::{Outcome, OutcomePair, OutcomeTriple, Setting, SettingPair, SettingTriple, TableKey};

/// Identifiers of the embedded reference distributions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureId {
    /// 16 entries of 1/2; maximal `C = 1/2`.
    Set20,
    /// Another 16-entry solution with `C = 1/2`; traced pair reaches CHSH 4.
    Set21,
    /// 24 entries of 1/3; `C = 1/3`, satisfies the pair-marginal zeros and
    /// violates GYNI maximally.
    Set23,
    /// 18-entry table with `P = 3/5`, `Q = 1/5`, `C = 2/5`.
    SetC04,
}

impl FixtureId {
    pub const ALL: [FixtureId; 4] = [
        FixtureId::Set20,
        FixtureId::Set21,
        FixtureId::Set23,
        FixtureId::SetC04,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureId::Set20 => "set20",
            FixtureId::Set21 => "set21",
            FixtureId::Set23 => "set23",
            FixtureId::SetC04 => "set_c04",
        }
    }
}

impl FromStr for FixtureId {
    type Err = BoxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "set20" => Ok(FixtureId::Set20),
            "set21" => Ok(FixtureId::Set21),
            "set23" => Ok(FixtureId::Set23),
            "set_c04" => Ok(FixtureId::SetC04),
            other => Err(BoxError::UnknownFixture(other.to_string())),
        }
    }
}

/// Behavior table with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistribution {
    table: [[Rational64; 8]; 8],
}

impl ExactDistribution {
    pub fn from_entries(entries: &[(&str, i64, i64)]) -> Result<ExactDistribution, BoxError> {
        let mut table = [[Rational64::new(0, 1); 8]; 8];
        for (key, num, den) in entries {
            let key: TableKey = key.parse()?;
            table[key.settings.index()][key.outcomes.index()] = Rational64::new(*num, *den);
        }
        Ok(ExactDistribution { table })
    }

    pub fn entry(&self, settings: SettingTriple, outcomes: OutcomeTriple) -> Rational64 {
        self.table[settings.index()][outcomes.index()]
    }

    pub fn at(&self, key: &str) -> Rational64 {
        let key: TableKey = key.parse().expect("valid table key");
        self.entry(key.settings, key.outcomes)
    }

    /// Exact positivity, normalization, and no-signaling check.
    pub fn is_valid(&self) -> bool {
        let zero = Rational64::new(0, 1);
        let one = Rational64::new(1, 1);
        for s in SettingTriple::all() {
            let mut sum = zero;
            for o in OutcomeTriple::all() {
                if self.entry(s, o) < zero {
                    return false;
                }
                sum += self.entry(s, o);
            }
            if sum != one {
                return false;
            }
        }
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
                    if self.entry(s, o) + self.entry(s, o_minus)
                        != self.entry(s_other, o) + self.entry(s_other, o_minus)
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Exact `C = P(UUU|+++) - P(DDD|---)`.
    pub fn c_value(&self) -> Rational64 {
        self.at("UUU|+++") - self.at("DDD|---")
    }

    /// Exact correlator for one setting triple.
    pub fn expectation(&self, settings: SettingTriple) -> Rational64 {
        OutcomeTriple::all()
            .map(|o| {
                let sign = if o.sign_product() > 0.0 { 1 } else { -1 };
                Rational64::new(sign, 1) * self.entry(settings, o)
            })
            .sum()
    }

    /// Exact `|sum signs . E|`.
    pub fn svetlichny_value(&self, signs: &SignPattern) -> Rational64 {
        let total: Rational64 = SettingTriple::all()
            .map(|s| Rational64::new(i64::from(signs.0[s.index()]), 1) * self.expectation(s))
            .sum();
        if total < Rational64::new(0, 1) {
            -total
        } else {
            total
        }
    }

    /// Exact GYNI sum.
    pub fn gyni_value(&self) -> Rational64 {
        self.at("UUU|+++") + self.at("UDD|--+") + self.at("DUD|+--") + self.at("DDU|-+-")
    }

    /// Exact CHSH of the pair table left after summing out qubit 3 (requires
    /// the exact party-3 no-signaling equalities, i.e. [`Self::is_valid`]).
    pub fn traced_pair_chsh(&self) -> Rational64 {
        let pair_expect = |sp: SettingPair| -> Rational64 {
            OutcomePair::all()
                .map(|op| {
                    let sign = if op.sign_product() > 0.0 { 1 } else { -1 };
                    let settings = SettingTriple([sp.0[0], sp.0[1], Setting::U]);
                    let p: Rational64 = Outcome::BOTH
                        .into_iter()
                        .map(|o3| self.entry(settings, OutcomeTriple([op.0[0], op.0[1], o3])))
                        .sum();
                    Rational64::new(sign, 1) * p
                })
                .sum()
        };
        use Setting::{D, U};
        pair_expect(SettingPair([U, U])) - pair_expect(SettingPair([D, U]))
            - pair_expect(SettingPair([U, D]))
            - pair_expect(SettingPair([D, D]))
    }

    /// Float view of the table.
    pub fn to_float(&self) -> JointDistribution {
        let mut table = [[0.0f64; 8]; 8];
        for s in SettingTriple::all() {
            for o in OutcomeTriple::all() {
                let r = self.entry(s, o);
                table[s.index()][o.index()] = *r.numer() as f64 / *r.denom() as f64;
            }
        }
        JointDistribution::from_table(table).expect("rational table is finite")
    }

    /// Nonzero entries in table order, as `(key, value)` pairs.
    pub fn nonzero_entries(&self) -> Vec<(TableKey, Rational64)> {
        let mut out = Vec::new();
        for s in SettingTriple::all() {
            for o in OutcomeTriple::all() {
                let v = self.entry(s, o);
                if v != Rational64::new(0, 1) {
                    out.push((TableKey { settings: s, outcomes: o }, v));
                }
            }
        }
        out
    }
}

/// The exact table for a fixture id.
pub fn paper_distribution_exact(id: FixtureId) -> ExactDistribution {
    let entries: &[(&str, i64, i64)] = match id {
        FixtureId::Set20 => &[
            ("UUU|+++", 1, 2),
            ("UUU|-+-", 1, 2),
            ("UUD|++-", 1, 2),
            ("UUD|-++", 1, 2),
            ("UDU|+-+", 1, 2),
            ("UDU|---", 1, 2),
            ("UDD|+--", 1, 2),
            ("UDD|--+", 1, 2),
            ("DUU|++-", 1, 2),
            ("DUU|-++", 1, 2),
            ("DUD|++-", 1, 2),
            ("DUD|-++", 1, 2),
            ("DDU|+--", 1, 2),
            ("DDU|--+", 1, 2),
            ("DDD|+--", 1, 2),
            ("DDD|--+", 1, 2),
        ],
        FixtureId::Set21 => &[
            ("UUU|+++", 1, 2),
            ("UUU|--+", 1, 2),
            ("UUD|++-", 1, 2),
            ("UUD|---", 1, 2),
            ("UDU|+-+", 1, 2),
            ("UDU|-++", 1, 2),
            ("UDD|+--", 1, 2),
            ("UDD|-+-", 1, 2),
            ("DUU|+-+", 1, 2),
            ("DUU|-++", 1, 2),
            ("DUD|+--", 1, 2),
            ("DUD|-+-", 1, 2),
            ("DDU|+-+", 1, 2),
            ("DDU|-++", 1, 2),
            ("DDD|+--", 1, 2),
            ("DDD|-+-", 1, 2),
        ],
        FixtureId::Set23 => &[
            ("UUU|+++", 1, 3),
            ("UUU|-+-", 1, 3),
            ("UUU|--+", 1, 3),
            ("UUD|++-", 1, 3),
            ("UUD|-++", 1, 3),
            ("UUD|---", 1, 3),
            ("UDU|+-+", 1, 3),
            ("UDU|-+-", 1, 3),
            ("UDU|--+", 1, 3),
            ("UDD|+--", 1, 3),
            ("UDD|-+-", 1, 3),
            ("UDD|--+", 1, 3),
            ("DUU|+-+", 1, 3),
            ("DUU|-++", 1, 3),
            ("DUU|-+-", 1, 3),
            ("DUD|+--", 1, 3),
            ("DUD|-++", 1, 3),
            ("DUD|-+-", 1, 3),
            ("DDU|+-+", 1, 3),
            ("DDU|-+-", 1, 3),
            ("DDU|--+", 1, 3),
            ("DDD|+--", 1, 3),
            ("DDD|-+-", 1, 3),
            ("DDD|--+", 1, 3),
        ],
        FixtureId::SetC04 => &[
            ("UUU|+++", 3, 5),
            ("UUU|--+", 2, 5),
            ("UUD|++-", 3, 5),
            ("UUD|---", 2, 5),
            ("UDU|+-+", 3, 5),
            ("UDU|-++", 2, 5),
            ("UDD|+--", 3, 5),
            ("UDD|-+-", 2, 5),
            ("DUU|+-+", 2, 5),
            ("DUU|-++", 3, 5),
            ("DUD|+--", 2, 5),
            ("DUD|-+-", 3, 5),
            ("DDU|+-+", 2, 5),
            ("DDU|-++", 2, 5),
            ("DDU|--+", 1, 5),
            ("DDD|+--", 2, 5),
            ("DDD|-+-", 2, 5),
            ("DDD|---", 1, 5),
        ],
    };
    ExactDistribution::from_entries(entries).expect("fixture keys are well-formed")
}

/// Float view of a fixture table.
pub fn paper_distribution(id: FixtureId) -> JointDistribution {
    paper_distribution_exact(id).to_float()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxworld::{SVETLICHNY_PATTERN_A, SVETLICHNY_PATTERN_B};

    fn r(num: i64, den: i64) -> Rational64 {
        Rational64::new(num, den)
    }

    #[test]
    fn fixtures_are_exactly_valid() {
        for id in FixtureId::ALL {
            let d = paper_distribution_exact(id);
            assert!(d.is_valid(), "{} fails exact validation", id.name());
            assert!(d.to_float().validate().all_ok());
        }
    }

    #[test]
    fn fixture_entry_counts() {
        assert_eq!(paper_distribution_exact(FixtureId::Set20).nonzero_entries().len(), 16);
        assert_eq!(paper_distribution_exact(FixtureId::Set21).nonzero_entries().len(), 16);
        assert_eq!(paper_distribution_exact(FixtureId::Set23).nonzero_entries().len(), 24);
        assert_eq!(paper_distribution_exact(FixtureId::SetC04).nonzero_entries().len(), 18);
    }

    #[test]
    fn fixture_c_values_exact() {
        assert_eq!(paper_distribution_exact(FixtureId::Set20).c_value(), r(1, 2));
        assert_eq!(paper_distribution_exact(FixtureId::Set21).c_value(), r(1, 2));
        assert_eq!(paper_distribution_exact(FixtureId::Set23).c_value(), r(1, 3));
        assert_eq!(paper_distribution_exact(FixtureId::SetC04).c_value(), r(2, 5));
    }

    #[test]
    fn set23_headline_values() {
        let d = paper_distribution_exact(FixtureId::Set23);
        assert_eq!(d.gyni_value(), r(4, 3));
        assert_eq!(d.svetlichny_value(&SVETLICHNY_PATTERN_B), r(16, 3));
        // correlator by direct summation: all three UUU outcome triples have
        // sign product +1
        assert_eq!(d.expectation(SettingTriple::from_index(0)), r(1, 1));
        let rahaman = d.to_float().rahaman_check().unwrap();
        assert!(rahaman.passes());
        assert!((rahaman.p_value - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn sets_20_21_respect_gyni_and_svetlichny() {
        for id in [FixtureId::Set20, FixtureId::Set21] {
            let d = paper_distribution_exact(id);
            assert!(d.gyni_value() <= r(1, 1));
            assert!(d.svetlichny_value(&SVETLICHNY_PATTERN_A) <= r(4, 1));
            assert!(d.svetlichny_value(&SVETLICHNY_PATTERN_B) <= r(4, 1));
            // both violate the Bell-type inequality maximally
            let (c, zeros_ok) = d.to_float().hardy_cabello_check();
            assert!((c - 0.5).abs() < 1e-15);
            assert!(zeros_ok);
            assert!((d.to_float().bell_inequality_value() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn set20_fails_rahaman_marginals() {
        // P(D1,U2|++) of set20 by direct summation is 1/2, not 0.
        let d = paper_distribution(FixtureId::Set20);
        let m = d
            .marginal(&[(0, Setting::D, Outcome::Plus), (1, Setting::U, Outcome::Plus)])
            .unwrap();
        assert!((m - 0.5).abs() < 1e-15);
        assert!(!d.rahaman_check().unwrap().passes());
    }

    #[test]
    fn set21_traced_pair_reaches_chsh_4() {
        let exact = paper_distribution_exact(FixtureId::Set21);
        assert_eq!(exact.traced_pair_chsh(), r(4, 1));
        let traced = paper_distribution(FixtureId::Set21).trace_out_third().unwrap();
        assert!((traced.chsh_value() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_fixture_rejected() {
        assert!("set22".parse::<FixtureId>().is_err());
        assert_eq!("set_c04".parse::<FixtureId>().unwrap(), FixtureId::SetC04);
    }
}
