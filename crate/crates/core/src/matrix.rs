//! Character-state matrices.

use std::fmt;

use crate::error::{Error, Result};

/// State of one character in one species.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum CharState {
    Zero,
    One,
    Unknown,
}

impl CharState {
    pub fn from_symbol(ch: char) -> Option<Self> {
        match ch {
            '0' => Some(CharState::Zero),
            '1' => Some(CharState::One),
            '?' => Some(CharState::Unknown),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            CharState::Zero => '0',
            CharState::One => '1',
            CharState::Unknown => '?',
        }
    }
}

/// An `n x m` matrix over `{0, 1, ?}`; rows are species, columns characters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IncompleteMatrix {
    n: usize,
    m: usize,
    entries: Vec<CharState>,
}

impl IncompleteMatrix {
    pub fn new(n: usize, m: usize, entries: Vec<CharState>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::EmptyMatrix { n, m });
        }
        if entries.len() != n * m {
            return Err(Error::ShapeMismatch { n, m, got: entries.len() });
        }
        Ok(Self { n, m, entries })
    }

    pub fn filled(n: usize, m: usize, state: CharState) -> Result<Self> {
        Self::new(n, m, vec![state; n * m])
    }

    /// Builds a matrix from row strings such as `"1?0"`.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.as_ref().chars().count());
        let mut entries = Vec::with_capacity(n * m);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.chars().count() != m {
                return Err(Error::Parse { line: i + 1, msg: format!("expected {m} symbols") });
            }
            for ch in row.chars() {
                let s = CharState::from_symbol(ch).ok_or_else(|| Error::Parse {
                    line: i + 1,
                    msg: format!("illegal symbol {ch:?}"),
                })?;
                entries.push(s);
            }
        }
        Self::new(n, m, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, species: usize, character: usize) -> CharState {
        self.entries[species * self.m + character]
    }

    pub fn set(&mut self, species: usize, character: usize, state: CharState) {
        self.entries[species * self.m + character] = state;
    }

    pub fn entries(&self) -> &[CharState] {
        &self.entries
    }

    pub fn unknown_count(&self) -> usize {
        self.entries.iter().filter(|&&s| s == CharState::Unknown).count()
    }

    pub fn row_string(&self, species: usize) -> String {
        self.entries[species * self.m..(species + 1) * self.m].iter().map(|s| s.symbol()).collect()
    }
}

/// A complete `n x m` binary matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    n: usize,
    m: usize,
    bits: Vec<bool>,
}

impl BinaryMatrix {
    pub fn zeros(n: usize, m: usize) -> Self {
        Self { n, m, bits: vec![false; n * m] }
    }

    pub fn from_bits(n: usize, m: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != n * m {
            return Err(Error::ShapeMismatch { n, m, got: bits.len() });
        }
        Ok(Self { n, m, bits })
    }

    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let a = IncompleteMatrix::from_rows(rows)?;
        Self::try_from(&a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, species: usize, character: usize) -> bool {
        self.bits[species * self.m + character]
    }

    #[inline]
    pub fn set(&mut self, species: usize, character: usize, value: bool) {
        self.bits[species * self.m + character] = value;
    }

    /// Species indices having character `c`.
    pub fn one_set(&self, c: usize) -> Vec<usize> {
        (0..self.n).filter(|&s| self.get(s, c)).collect()
    }

    pub fn to_incomplete(&self) -> IncompleteMatrix {
        let entries = self
            .bits
            .iter()
            .map(|&b| if b { CharState::One } else { CharState::Zero })
            .collect();
        IncompleteMatrix { n: self.n, m: self.m, entries }
    }
}

impl TryFrom<&IncompleteMatrix> for BinaryMatrix {
    type Error = Error;

    fn try_from(a: &IncompleteMatrix) -> Result<Self> {
        let mut bits = Vec::with_capacity(a.entries.len());
        for (k, &s) in a.entries.iter().enumerate() {
            match s {
                CharState::One => bits.push(true),
                CharState::Zero => bits.push(false),
                CharState::Unknown => {
                    return Err(Error::Parse {
                        line: k / a.m + 1,
                        msg: "unexpected '?' in a complete matrix".into(),
                    })
                }
            }
        }
        Ok(Self { n: a.n, m: a.m, bits })
    }
}

impl fmt::Display for IncompleteMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            writeln!(f, "{}", self.row_string(i))?;
        }
        Ok(())
    }
}
