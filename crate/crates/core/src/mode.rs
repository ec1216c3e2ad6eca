//! Mode labels and single/compound mode selections.

use std::fmt;
use std::str::FromStr;

use crate::error::{CouplerError, Result};

/// The six field modes, in canonical order.
///
/// Stokes (`S`), anti-Stokes (`A`) and phonon (`V`) modes of waveguides 1 and 2.
/// The pump modes are classical and carry no label here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeId {
    S1,
    A1,
    V1,
    S2,
    A2,
    V2,
}

impl ModeId {
    pub const ALL: [ModeId; 6] = [ModeId::S1, ModeId::A1, ModeId::V1, ModeId::S2, ModeId::A2, ModeId::V2];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<ModeId> {
        Self::ALL.get(i).copied()
    }

    /// Mode obtained by exchanging the waveguide suffixes 1 and 2.
    pub fn swapped(self) -> ModeId {
        Self::ALL[(self.index() + 3) % 6]
    }

    pub fn name(self) -> &'static str {
        match self {
            ModeId::S1 => "S1",
            ModeId::A1 => "A1",
            ModeId::V1 => "V1",
            ModeId::S2 => "S2",
            ModeId::A2 => "A2",
            ModeId::V2 => "V2",
        }
    }

    pub fn is_phonon(self) -> bool {
        matches!(self, ModeId::V1 | ModeId::V2)
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModeId {
    type Err = CouplerError;

    fn from_str(s: &str) -> Result<Self> {
        ModeId::ALL
            .iter()
            .copied()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| CouplerError::parse(format!("unknown mode `{s}`")))
    }
}

/// A single mode or a compound (two-mode) field.
///
/// Compound selections are stored in canonical order, so `(A1, S1)` and
/// `(S1, A1)` are the same selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeSelection {
    Single(ModeId),
    Compound(ModeId, ModeId),
}

impl ModeSelection {
    pub fn single(m: ModeId) -> Self {
        ModeSelection::Single(m)
    }

    pub fn compound(a: ModeId, b: ModeId) -> Result<Self> {
        if a == b {
            return Err(CouplerError::Validation(format!(
                "compound mode needs two distinct modes, got ({a},{a})"
            )));
        }
        Ok(if a < b {
            ModeSelection::Compound(a, b)
        } else {
            ModeSelection::Compound(b, a)
        })
    }

    pub fn modes(&self) -> Vec<ModeId> {
        match *self {
            ModeSelection::Single(m) => vec![m],
            ModeSelection::Compound(a, b) => vec![a, b],
        }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        match self {
            ModeSelection::Single(_) => 1,
            ModeSelection::Compound(..) => 2,
        }
    }

    pub fn is_compound(&self) -> bool {
        matches!(self, ModeSelection::Compound(..))
    }

    /// Vacuum level of the quadrature variances: 1 for a single mode, 2 for a compound mode.
    pub fn vacuum_level(&self) -> f64 {
        self.len() as f64
    }

    pub fn swapped(&self) -> ModeSelection {
        match *self {
            ModeSelection::Single(m) => ModeSelection::Single(m.swapped()),
            ModeSelection::Compound(a, b) => {
                ModeSelection::compound(a.swapped(), b.swapped()).expect("distinct modes stay distinct")
            }
        }
    }

    /// Column label used in CSV headers, e.g. `S1` or `S1A1`.
    pub fn label(&self) -> String {
        self.modes().iter().map(|m| m.name()).collect()
    }
}

impl fmt::Display for ModeSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for ModeSelection {
    type Err = CouplerError;

    /// Accepts `S1`, `S1,A1` and `S1A1` (case-insensitive, surrounding parentheses allowed).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        let names: Vec<&str> = if t.contains(',') {
            t.split(',').map(str::trim).collect()
        } else if t.len() == 4 && t.is_ascii() {
            vec![&t[..2], &t[2..]]
        } else {
            vec![t]
        };
        match names.as_slice() {
            [one] => Ok(ModeSelection::Single(one.parse()?)),
            [a, b] => ModeSelection::compound(a.parse()?, b.parse()?).map_err(|e| CouplerError::parse(e.to_string())),
            _ => Err(CouplerError::parse(format!(
                "mode selection `{s}` must name one or two modes"
            ))),
        }
    }
}
