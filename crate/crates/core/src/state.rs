use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Number of compartments in the chain.
pub const STATE_COUNT: usize = 6;

/// One of the six compartments. The declaration order is the matrix
/// row/column order everywhere in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum StateId {
    /// Susceptible (also receives recovered patients).
    S,
    /// Infected.
    E,
    /// Hospitalized.
    H,
    /// Intensive care unit.
    U,
    /// Intubated.
    I,
    /// Dead. Published tables label it `F`.
    D,
}

impl StateId {
    pub const ALL: [StateId; STATE_COUNT] = [StateId::S, StateId::E, StateId::H, StateId::U, StateId::I, StateId::D];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<StateId> {
        Self::ALL.get(index).copied()
    }

    pub const fn code(self) -> &'static str {
        match self {
            StateId::S => "S",
            StateId::E => "E",
            StateId::H => "H",
            StateId::U => "U",
            StateId::I => "I",
            StateId::D => "D",
        }
    }

    /// Label used by the published horizon tables (`F` for the dead state).
    pub const fn display_alias(self) -> &'static str {
        match self {
            StateId::D => "F",
            other => other.code(),
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            StateId::S => "susceptible",
            StateId::E => "infected",
            StateId::H => "hospitalized",
            StateId::U => "intensive care",
            StateId::I => "intubated",
            StateId::D => "dead",
        }
    }

    /// Parses a single-character code; `F` is accepted for `D`.
    pub fn from_char(c: char) -> Option<StateId> {
        match c.to_ascii_uppercase() {
            'S' => Some(StateId::S),
            'E' => Some(StateId::E),
            'H' => Some(StateId::H),
            'U' => Some(StateId::U),
            'I' => Some(StateId::I),
            'D' | 'F' => Some(StateId::D),
            _ => None,
        }
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown state `{0}` (expected one of S, E, H, U, I, D/F)")]
pub struct ParseStateError(pub String);

impl FromStr for StateId {
    type Err = ParseStateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let mut chars = trimmed.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => StateId::from_char(c).ok_or_else(|| ParseStateError(s.to_owned())),
            _ => Err(ParseStateError(s.to_owned())),
        }
    }
}

impl From<StateId> for String {
    fn from(state: StateId) -> String {
        state.code().to_owned()
    }
}

impl TryFrom<String> for StateId {
    type Error = ParseStateError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}
