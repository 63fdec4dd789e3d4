//! Vertices of the stage spaces.
//!
//! A vertex of the stage-`n` space is a finite sequence `(k) ⌢ t` where `k`
//! is the head and `t` is a bit string of length `n - m` for the level `m`.
//! The sequence alone only determines the level relative to a known stage,
//! so a [`Vertex`] stores the `(level, head, tail)` triple and the stage is
//! derived as `level + tail.len()`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Longest tail a [`Tail`] can hold.
pub const MAX_TAIL_LEN: usize = 63;

/// A bit string of length at most [`MAX_TAIL_LEN`]; bit `i` is `t(i)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Tail {
    len: u8,
    bits: u64,
}

impl Tail {
    pub const EMPTY: Tail = Tail { len: 0, bits: 0 };

    /// Builds a tail from a slice of 0/1 values.
    ///
    /// Returns `None` when a value is not a bit or the slice is too long.
    pub fn from_bits(bits: &[u8]) -> Option<Tail> {
        if bits.len() > MAX_TAIL_LEN {
            return None;
        }
        let mut t = Tail::EMPTY;
        for &b in bits {
            if b > 1 {
                return None;
            }
            t = t.push(b);
        }
        Some(t)
    }

    /// All-zero tail of the given length.
    pub fn zeros(len: usize) -> Tail {
        assert!(len <= MAX_TAIL_LEN, "tail too long");
        Tail { len: len as u8, bits: 0 }
    }

    /// Tail whose bits are the low `len` bits of `mask` (bit `i` of `mask` is `t(i)`).
    pub fn from_mask(len: usize, mask: u64) -> Tail {
        assert!(len <= MAX_TAIL_LEN, "tail too long");
        let keep = if len == 0 { 0 } else { mask & (u64::MAX >> (64 - len)) };
        Tail { len: len as u8, bits: keep }
    }

    /// Inverse of [`Tail::as_number`]: the tail of length `len` whose binary
    /// reading (with `t(0)` most significant) is `number`.
    pub fn from_number(len: usize, number: u64) -> Tail {
        assert!(len <= MAX_TAIL_LEN, "tail too long");
        let mut t = Tail::EMPTY;
        for i in (0..len).rev() {
            t = t.push(((number >> i) & 1) as u8);
        }
        t
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Raw mask, bit `i` is `t(i)`.
    pub fn mask(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> u8 {
        assert!(i < self.len(), "tail index out of range");
        ((self.bits >> i) & 1) as u8
    }

    pub fn last(&self) -> Option<u8> {
        if self.is_empty() {
            None
        } else {
            Some(self.get(self.len() - 1))
        }
    }

    /// `t ⌢ (bit)`.
    pub fn push(self, bit: u8) -> Tail {
        assert!(self.len() < MAX_TAIL_LEN, "tail too long");
        debug_assert!(bit <= 1);
        Tail {
            len: self.len + 1,
            bits: self.bits | (u64::from(bit & 1) << self.len),
        }
    }

    /// `t | len`, the prefix of the given length.
    pub fn truncate(self, len: usize) -> Tail {
        assert!(len <= self.len(), "cannot truncate to a longer tail");
        Tail::from_mask(len, self.bits)
    }

    /// The tail with bit `i` flipped.
    pub fn flip(self, i: usize) -> Tail {
        assert!(i < self.len(), "tail index out of range");
        Tail { len: self.len, bits: self.bits ^ (1 << i) }
    }

    pub fn is_prefix_of(&self, other: &Tail) -> bool {
        self.len <= other.len && other.truncate(self.len()) == *self
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn to_vec(&self) -> Vec<u8> {
        self.iter().collect()
    }

    /// The tail read as a binary number with `t(0)` most significant.
    pub fn as_number(&self) -> u64 {
        self.iter().fold(0u64, |acc, b| (acc << 1) | u64::from(b))
    }
}

impl Ord for Tail {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.as_number().cmp(&other.as_number()))
    }
}

impl PartialOrd for Tail {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Tail(")?;
        for b in self.iter() {
            write!(f, "{b}")?;
        }
        f.write_str(")")
    }
}

/// A point `(k) ⌢ t` of a stage space, keyed by `(level, head, tail)`.
///
/// The derived order is the canonical enumeration order: level-major, then
/// head, then tail as a binary number. Vertices of abstract (non-stage)
/// graphs are labels: level 0, empty tail, head = label.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub level: u32,
    pub head: u64,
    pub tail: Tail,
}

impl Vertex {
    pub fn new(level: u32, head: u64, tail: Tail) -> Vertex {
        Vertex { level, head, tail }
    }

    /// Abstract vertex used for graphs that are not stage graphs.
    pub fn label(id: u64) -> Vertex {
        Vertex { level: 0, head: id, tail: Tail::EMPTY }
    }

    pub fn stage(&self) -> usize {
        self.level as usize + self.tail.len()
    }

    /// Reads a sequence `(k, t(0), ..)` as a vertex of the given stage.
    pub fn from_sequence(stage: usize, seq: &[u64]) -> Option<Vertex> {
        let (&head, rest) = seq.split_first()?;
        if rest.len() > stage {
            return None;
        }
        let bits: Option<Vec<u8>> = rest
            .iter()
            .map(|&b| if b <= 1 { Some(b as u8) } else { None })
            .collect();
        let tail = Tail::from_bits(&bits?)?;
        Some(Vertex { level: (stage - rest.len()) as u32, head, tail })
    }

    /// The sequence form `(k) ⌢ t`.
    pub fn sequence(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.tail.len() + 1);
        out.push(self.head);
        out.extend(self.tail.iter().map(u64::from));
        out
    }

    /// `v ⌢ (bit)`, the copy of `v` in the next stage.
    pub fn extend(&self, bit: u8) -> Vertex {
        Vertex { tail: self.tail.push(bit), ..*self }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.head)?;
        for b in self.tail.iter() {
            write!(f, ",{b}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@L{}", self, self.level)
    }
}
