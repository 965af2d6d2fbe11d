//! Labels and index conventions for the (3,2,2) Bell scenario.
//!
//! Everything downstream (state-vector engine, behavior tables, LP columns)
//! agrees on one fixed order: parties are numbered 1..3 left to right,
//! settings sort `U < D`, outcomes sort `+ < -`. A setting or outcome triple
//! maps to an index in 0..8 by reading the parties as a base-2 number with
//! party 1 in the most significant position.

use std::fmt;
use std::str::FromStr;

use crate::boxworld::BoxError;

/// Measurement choice of a single party.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Setting {
    U,
    D,
}

impl Setting {
    pub const BOTH: [Setting; 2] = [Setting::U, Setting::D];

    pub fn index(self) -> usize {
        match self {
            Setting::U => 0,
            Setting::D => 1,
        }
    }

    pub fn from_index(i: usize) -> Setting {
        if i == 0 {
            Setting::U
        } else {
            Setting::D
        }
    }

    pub fn other(self) -> Setting {
        match self {
            Setting::U => Setting::D,
            Setting::D => Setting::U,
        }
    }

    fn as_char(self) -> char {
        match self {
            Setting::U => 'U',
            Setting::D => 'D',
        }
    }

    fn from_char(c: char) -> Option<Setting> {
        match c {
            'U' => Some(Setting::U),
            'D' => Some(Setting::D),
            _ => None,
        }
    }
}

/// Dichotomic measurement outcome, recorded as +1 or -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn from_index(i: usize) -> Outcome {
        if i == 0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    /// The outcome as the signed value entering correlators.
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    fn as_char(self) -> char {
        match self {
            Outcome::Plus => '+',
            Outcome::Minus => '-',
        }
    }

    fn from_char(c: char) -> Option<Outcome> {
        match c {
            '+' => Some(Outcome::Plus),
            '-' => Some(Outcome::Minus),
            _ => None,
        }
    }
}

/// One measurement choice per party.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SettingTriple(pub [Setting; 3]);

impl SettingTriple {
    pub fn index(self) -> usize {
        self.0[0].index() * 4 + self.0[1].index() * 2 + self.0[2].index()
    }

    pub fn from_index(i: usize) -> SettingTriple {
        debug_assert!(i < 8);
        SettingTriple([
            Setting::from_index((i >> 2) & 1),
            Setting::from_index((i >> 1) & 1),
            Setting::from_index(i & 1),
        ])
    }

    pub fn all() -> impl Iterator<Item = SettingTriple> {
        (0..8).map(SettingTriple::from_index)
    }

    /// The same triple with `party` (0-based) switched to `setting`.
    pub fn with_party(self, party: usize, setting: Setting) -> SettingTriple {
        let mut s = self.0;
        s[party] = setting;
        SettingTriple(s)
    }
}

impl fmt::Display for SettingTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

/// One outcome per party.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OutcomeTriple(pub [Outcome; 3]);

impl OutcomeTriple {
    pub fn index(self) -> usize {
        self.0[0].index() * 4 + self.0[1].index() * 2 + self.0[2].index()
    }

    pub fn from_index(i: usize) -> OutcomeTriple {
        debug_assert!(i < 8);
        OutcomeTriple([
            Outcome::from_index((i >> 2) & 1),
            Outcome::from_index((i >> 1) & 1),
            Outcome::from_index(i & 1),
        ])
    }

    pub fn all() -> impl Iterator<Item = OutcomeTriple> {
        (0..8).map(OutcomeTriple::from_index)
    }

    /// Product of the three signed outcomes.
    pub fn sign_product(self) -> f64 {
        self.0.iter().map(|o| o.sign()).product()
    }
}

impl fmt::Display for OutcomeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in self.0 {
            write!(f, "{}", o.as_char())?;
        }
        Ok(())
    }
}

/// Behavior-table key of the form `UDU|+-+`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TableKey {
    pub settings: SettingTriple,
    pub outcomes: OutcomeTriple,
}

impl fmt::Display for TableKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.settings, self.outcomes)
    }
}

impl FromStr for TableKey {
    type Err = BoxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BoxError::BadKey(s.to_string());
        let (a, b) = s.split_once('|').ok_or_else(bad)?;
        if a.chars().count() != 3 || b.chars().count() != 3 {
            return Err(bad());
        }
        let mut settings = [Setting::U; 3];
        for (i, c) in a.chars().enumerate() {
            settings[i] = Setting::from_char(c).ok_or_else(bad)?;
        }
        let mut outcomes = [Outcome::Plus; 3];
        for (i, c) in b.chars().enumerate() {
            outcomes[i] = Outcome::from_char(c).ok_or_else(bad)?;
        }
        Ok(TableKey {
            settings: SettingTriple(settings),
            outcomes: OutcomeTriple(outcomes),
        })
    }
}

/// Setting choice of a two-party box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SettingPair(pub [Setting; 2]);

impl SettingPair {
    pub fn index(self) -> usize {
        self.0[0].index() * 2 + self.0[1].index()
    }

    pub fn from_index(i: usize) -> SettingPair {
        debug_assert!(i < 4);
        SettingPair([Setting::from_index((i >> 1) & 1), Setting::from_index(i & 1)])
    }

    pub fn all() -> impl Iterator<Item = SettingPair> {
        (0..4).map(SettingPair::from_index)
    }
}

/// Outcome record of a two-party box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OutcomePair(pub [Outcome; 2]);

impl OutcomePair {
    pub fn index(self) -> usize {
        self.0[0].index() * 2 + self.0[1].index()
    }

    pub fn from_index(i: usize) -> OutcomePair {
        debug_assert!(i < 4);
        OutcomePair([Outcome::from_index((i >> 1) & 1), Outcome::from_index(i & 1)])
    }

    pub fn all() -> impl Iterator<Item = OutcomePair> {
        (0..4).map(OutcomePair::from_index)
    }

    pub fn sign_product(self) -> f64 {
        self.0[0].sign() * self.0[1].sign()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_index_round_trip() {
        for i in 0..8 {
            assert_eq!(SettingTriple::from_index(i).index(), i);
            assert_eq!(OutcomeTriple::from_index(i).index(), i);
        }
        assert_eq!(SettingTriple([Setting::U; 3]).index(), 0);
        assert_eq!(SettingTriple([Setting::D; 3]).index(), 7);
        assert_eq!(
            SettingTriple([Setting::U, Setting::D, Setting::U]).index(),
            2
        );
    }

    #[test]
    fn key_parse_and_display() {
        let key: TableKey = "UDU|+-+".parse().unwrap();
        assert_eq!(key.settings.index(), 2);
        assert_eq!(key.outcomes.index(), 2);
        assert_eq!(key.to_string(), "UDU|+-+");
        assert!("UDX|+++".parse::<TableKey>().is_err());
        assert!("UDU+++".parse::<TableKey>().is_err());
        assert!("UDU|++".parse::<TableKey>().is_err());
    }

    #[test]
    fn sign_products() {
        assert_eq!(OutcomeTriple::from_index(0).sign_product(), 1.0);
        // +-- has product +1, ++- has product -1
        let pmm: TableKey = "UUU|+--".parse().unwrap();
        assert_eq!(pmm.outcomes.sign_product(), 1.0);
        let ppm: TableKey = "UUU|++-".parse().unwrap();
        assert_eq!(ppm.outcomes.sign_product(), -1.0);
    }
}
