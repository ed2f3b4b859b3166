//! Canonical 16-dimensional basis of the two-source bench.
//!
//! Each source carries a path factor (`a`, `b`) and a polarization factor
//! (`V`, `H`). Factors are ordered path₁, pol₁, path₂, pol₂ and the flat index
//! is `8·path₁ + 4·pol₁ + 2·path₂ + pol₂` with `a = V = 0`, `b = H = 1`.

use std::fmt;

use crate::error::{Error, Result};

pub const DIM: usize = 16;
pub const SOURCE_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Path {
    A = 0,
    B = 1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pol {
    V = 0,
    H = 1,
}

/// One of the two independent thermal sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    One,
    Two,
}

/// A tensor factor of the 16-dimensional space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Path1 = 0,
    Pol1 = 1,
    Path2 = 2,
    Pol2 = 3,
}

impl Slot {
    pub const ALL: [Slot; 4] = [Slot::Path1, Slot::Pol1, Slot::Path2, Slot::Pol2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn source(self) -> Source {
        match self {
            Slot::Path1 | Slot::Pol1 => Source::One,
            Slot::Path2 | Slot::Pol2 => Source::Two,
        }
    }
}

impl TryFrom<usize> for Slot {
    type Error = Error;

    fn try_from(value: usize) -> Result<Self> {
        Slot::ALL
            .get(value)
            .copied()
            .ok_or(Error::SlotOutOfRange(value))
    }
}

impl Source {
    pub const BOTH: [Source; 2] = [Source::One, Source::Two];

    pub fn path_slot(self) -> Slot {
        match self {
            Source::One => Slot::Path1,
            Source::Two => Slot::Path2,
        }
    }

    pub fn pol_slot(self) -> Slot {
        match self {
            Source::One => Slot::Pol1,
            Source::Two => Slot::Pol2,
        }
    }

    pub fn tag(self) -> u8 {
        match self {
            Source::One => 1,
            Source::Two => 2,
        }
    }

    pub fn other(self) -> Source {
        match self {
            Source::One => Source::Two,
            Source::Two => Source::One,
        }
    }
}

impl TryFrom<u8> for Source {
    type Error = Error;

    fn try_from(tag: u8) -> Result<Self> {
        match tag {
            1 => Ok(Source::One),
            2 => Ok(Source::Two),
            other => Err(Error::SourceOutOfRange(other)),
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Path::A => "a",
            Path::B => "b",
        })
    }
}

impl fmt::Display for Pol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pol::V => "V",
            Pol::H => "H",
        })
    }
}

/// Index of a single-source basis ket `|path)|pol)`.
pub fn source_index(path: Path, pol: Pol) -> usize {
    2 * path as usize + pol as usize
}

/// Index of `|path₁ pol₁ path₂ pol₂)` in the canonical ordering.
pub fn index(path1: Path, pol1: Pol, path2: Path, pol2: Pol) -> usize {
    8 * path1 as usize + 4 * pol1 as usize + 2 * path2 as usize + pol2 as usize
}

/// Inverse of [`index`].
pub fn decompose(index: usize) -> Option<(Path, Pol, Path, Pol)> {
    if index >= DIM {
        return None;
    }
    let path = |bit: usize| if bit == 0 { Path::A } else { Path::B };
    let pol = |bit: usize| if bit == 0 { Pol::V } else { Pol::H };
    Some((
        path((index >> 3) & 1),
        pol((index >> 2) & 1),
        path((index >> 1) & 1),
        pol(index & 1),
    ))
}

/// Ket label such as `aVbH`.
pub fn label(index: usize) -> Option<String> {
    decompose(index).map(|(p1, s1, p2, s2)| format!("{p1}{s1}{p2}{s2}"))
}
