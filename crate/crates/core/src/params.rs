//! Construction parameters: odd length sequences, direction words and odd-pairs.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamError {
    /// `c(index)` is even or zero.
    NotOdd { index: usize, value: u64 },
    /// A direction-word entry other than `+1`/`-1`.
    BadDirection { index: usize, value: i64 },
    /// `|d(stage)| != c(stage) + 2`.
    WordLength { stage: usize, expected: usize, found: usize },
    /// `c` and `d` have different lengths.
    StageCount { c: usize, d: usize },
    Parse(String),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::NotOdd { index, value } => {
                write!(f, "c({index}) = {value} is not an odd natural number")
            }
            ParamError::BadDirection { index, value } => {
                write!(f, "direction entry {index} is {value}, expected +1 or -1")
            }
            ParamError::WordLength { stage, expected, found } => write!(
                f,
                "direction word for stage {stage} has length {found}, expected {expected}"
            ),
            ParamError::StageCount { c, d } => {
                write!(f, "odd-pair has {c} lengths but {d} direction words")
            }
            ParamError::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for ParamError {}

/// A finite sequence of odd naturals `c(0..N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OddSequence(Vec<u64>);

impl OddSequence {
    pub fn new(values: Vec<u64>) -> Result<Self, ParamError> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| **v % 2 == 0) {
            return Err(ParamError::NotOdd { index, value });
        }
        Ok(OddSequence(values))
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        self.0.get(i).copied()
    }

    /// The first `len` entries.
    pub fn prefix(&self, len: usize) -> OddSequence {
        OddSequence(self.0[..len.min(self.0.len())].to_vec())
    }

    /// `|X_{c,n}|`, computed from the recurrence `|X_0| = c(0)+1`,
    /// `|X_{n+1}| = 2|X_n| + c(n+1) + 1`.
    pub fn stage_size(&self, n: usize) -> Option<u64> {
        let mut size = self.get(0)?.checked_add(1)?;
        for i in 1..=n {
            size = size.checked_mul(2)?.checked_add(self.get(i)?.checked_add(1)?)?;
        }
        Some(size)
    }

    /// Edge count of the stage-`n` path.
    pub fn stage_length(&self, n: usize) -> Option<u64> {
        self.stage_size(n).map(|s| s - 1)
    }
}

impl FromStr for OddSequence {
    type Err = ParamError;

    /// Parses a comma separated list such as `1,1,3,5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|e| ParamError::Parse(alloc::format!("`{p}`: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        OddSequence::new(values)
    }
}

/// A finite word over `{-1, +1}`, stored as maximal runs so that long
/// constant words stay small.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DirectionWord {
    signs: Vec<i8>,
    /// Exclusive end position of each run.
    ends: Vec<usize>,
}

impl DirectionWord {
    pub fn new(entries: Vec<i8>) -> Result<Self, ParamError> {
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, e)| e.abs() != 1) {
            return Err(ParamError::BadDirection { index, value: i64::from(value) });
        }
        let mut w = DirectionWord::default();
        for e in entries {
            w.push_run(e, 1);
        }
        Ok(w)
    }

    /// Builds a word from `(sign, run length)` pairs.
    pub fn from_runs(runs: impl IntoIterator<Item = (i8, usize)>) -> Result<Self, ParamError> {
        let mut w = DirectionWord::default();
        for (sign, count) in runs {
            if sign.abs() != 1 {
                return Err(ParamError::BadDirection { index: w.len(), value: i64::from(sign) });
            }
            w.push_run(sign, count);
        }
        Ok(w)
    }

    fn push_run(&mut self, sign: i8, count: usize) {
        if count == 0 {
            return;
        }
        let end = self.len() + count;
        if self.signs.last() == Some(&sign) {
            *self.ends.last_mut().expect("runs are paired") = end;
        } else {
            self.signs.push(sign);
            self.ends.push(end);
        }
    }

    pub fn all_plus(len: usize) -> Self {
        let mut w = DirectionWord::default();
        w.push_run(1, len);
        w
    }

    pub fn len(&self) -> usize {
        self.ends.last().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<i8> {
        let run = self.ends.partition_point(|&e| e <= i);
        self.signs.get(run).copied()
    }

    pub fn runs(&self) -> impl Iterator<Item = (i8, usize)> + '_ {
        self.signs
            .iter()
            .zip(&self.ends)
            .scan(0, |start, (&s, &e)| {
                let run = (s, e - *start);
                *start = e;
                Some(run)
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = i8> + '_ {
        self.runs().flat_map(|(s, n)| core::iter::repeat_n(s, n))
    }

    /// `Σ(d)`, the sum of the entries.
    pub fn sigma(&self) -> i64 {
        self.runs().map(|(s, n)| i64::from(s) * n as i64).sum()
    }
}

impl FromStr for DirectionWord {
    type Err = ParamError;

    /// Parses `+`/`-` strings such as `+-+`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|ch| match ch {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(ParamError::Parse(alloc::format!(
                    "unexpected direction symbol `{other}`"
                ))),
            })
            .collect::<Result<Vec<i8>, _>>()
            .and_then(DirectionWord::new)
    }
}

impl fmt::Display for DirectionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.iter() {
            f.write_str(if e > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// An odd-pair `b = (c, d)` with `|d(i)| = c(i) + 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OddPair {
    c: OddSequence,
    d: Vec<DirectionWord>,
}

impl OddPair {
    pub fn new(c: OddSequence, d: Vec<DirectionWord>) -> Result<Self, ParamError> {
        if c.len() != d.len() {
            return Err(ParamError::StageCount { c: c.len(), d: d.len() });
        }
        for (stage, (&ci, word)) in c.values().iter().zip(&d).enumerate() {
            let expected = ci as usize + 2;
            if word.len() != expected {
                return Err(ParamError::WordLength { stage, expected, found: word.len() });
            }
        }
        Ok(OddPair { c, d })
    }

    /// The pair with every direction `+1`.
    pub fn all_plus(c: OddSequence) -> Self {
        let d = c.values().iter().map(|&ci| DirectionWord::all_plus(ci as usize + 2)).collect();
        OddPair { c, d }
    }

    pub fn c(&self) -> &OddSequence {
        &self.c
    }

    pub fn d(&self) -> &[DirectionWord] {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// `(Σ(d(0)), Σ(d(1)), ..)`.
    pub fn sigma_profile(&self) -> Vec<i64> {
        self.d.iter().map(DirectionWord::sigma).collect()
    }

    pub fn prefix(&self, len: usize) -> OddPair {
        let len = len.min(self.len());
        OddPair { c: self.c.prefix(len), d: self.d[..len].to_vec() }
    }
}
