//! Subsets of the unit index range, their binary codes and signatures.
//!
//! An [`IndexSet`] is a bitmask over at most [`MAX_DIM`] units. Positions are
//! 0-based in the Rust API; everything that crosses a user-facing boundary
//! (`Display`, serde, the CLI) uses 1-based indices.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GlassError, Result};

/// Largest network dimension an [`IndexSet`] can address.
pub const MAX_DIM: usize = 128;

/// Default cap on `n` for exhaustive 2^n enumeration.
pub const ENUMERATION_CAP: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSet {
    n: usize,
    mask: u128,
}

fn full_mask(n: usize) -> u128 {
    if n == MAX_DIM {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        Err(GlassError::DimensionTooLarge { n, max: MAX_DIM })
    } else {
        Ok(())
    }
}

impl IndexSet {
    pub fn empty(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(IndexSet { n, mask: 0 })
    }

    pub fn full(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(IndexSet { n, mask: full_mask(n) })
    }

    /// Builds a set from 1-based member indices. Duplicates are rejected.
    pub fn from_one_based(n: usize, members: &[usize]) -> Result<Self> {
        check_dim(n)?;
        let mut mask = 0u128;
        for &m in members {
            if m == 0 || m > n {
                return Err(GlassError::IndexOutOfRange { index: m, n });
            }
            let bit = 1u128 << (m - 1);
            if mask & bit != 0 {
                return Err(GlassError::InvalidSet(format!("duplicate member {m}")));
            }
            mask |= bit;
        }
        Ok(IndexSet { n, mask })
    }

    /// Builds a set from 0-based positions.
    pub fn from_positions<I: IntoIterator<Item = usize>>(n: usize, positions: I) -> Result<Self> {
        check_dim(n)?;
        let mut mask = 0u128;
        for p in positions {
            if p >= n {
                return Err(GlassError::IndexOutOfRange { index: p + 1, n });
            }
            mask |= 1u128 << p;
        }
        Ok(IndexSet { n, mask })
    }

    pub fn from_mask(n: usize, mask: u128) -> Result<Self> {
        check_dim(n)?;
        if mask & !full_mask(n) != 0 {
            return Err(GlassError::InvalidSet(format!("mask {mask:#x} has bits beyond dimension {n}")));
        }
        Ok(IndexSet { n, mask })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Membership of 0-based position `i`.
    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.mask & (1u128 << i) != 0
    }

    /// Ascending 0-based positions.
    pub fn positions(&self) -> Positions {
        Positions { mask: self.mask }
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.positions().map(|p| p + 1).collect()
    }

    pub fn complement(&self) -> IndexSet {
        IndexSet { n: self.n, mask: !self.mask & full_mask(self.n) }
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        self.assert_same_dim(other);
        IndexSet { n: self.n, mask: self.mask | other.mask }
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        self.assert_same_dim(other);
        IndexSet { n: self.n, mask: self.mask & other.mask }
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        self.assert_same_dim(other);
        IndexSet { n: self.n, mask: self.mask & !other.mask }
    }

    pub fn with(&self, i: usize) -> IndexSet {
        assert!(i < self.n, "position {i} outside dimension {}", self.n);
        IndexSet { n: self.n, mask: self.mask | (1u128 << i) }
    }

    pub fn without(&self, i: usize) -> IndexSet {
        assert!(i < self.n, "position {i} outside dimension {}", self.n);
        IndexSet { n: self.n, mask: self.mask & !(1u128 << i) }
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.n == other.n && self.mask & !other.mask == 0
    }

    pub fn is_proper_subset(&self, other: &IndexSet) -> bool {
        self.is_subset(other) && self.mask != other.mask
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.mask & other.mask == 0
    }

    pub fn code(&self) -> BinaryCode {
        BinaryCode { bits: (0..self.n).map(|i| u8::from(self.contains(i))).collect() }
    }

    pub fn signature(&self) -> Signature {
        Signature { signs: (0..self.n).map(|i| if self.contains(i) { 1 } else { -1 }).collect() }
    }

    /// `+1.0` on members and `-1.0` elsewhere: the diagonal of the signature matrix.
    pub fn sign_of(&self, i: usize) -> f64 {
        if self.contains(i) {
            1.0
        } else {
            -1.0
        }
    }

    /// Ordering used for all reports: size first, then bitmask.
    pub fn canonical_cmp(&self, other: &IndexSet) -> std::cmp::Ordering {
        (self.len(), self.mask).cmp(&(other.len(), other.mask))
    }

    fn assert_same_dim(&self, other: &IndexSet) {
        assert_eq!(self.n, other.n, "set dimensions differ");
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.one_based().iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexSet(n={}, {})", self.n, self)
    }
}

/// Serializes as the sorted list of 1-based members.
impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

/// Helper for deserializing a set when the dimension is known from context.
#[derive(Debug, Clone, Deserialize)]
#[serde(transparent)]
pub struct Members(pub Vec<usize>);

impl Members {
    pub fn into_set(self, n: usize) -> Result<IndexSet> {
        IndexSet::from_one_based(n, &self.0)
    }
}

impl<'de> Deserialize<'de> for BinaryCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(deserializer)?;
        if bits.iter().any(|&b| b > 1) {
            return Err(serde::de::Error::custom("binary code entries must be 0 or 1"));
        }
        Ok(BinaryCode { bits })
    }
}

pub struct Positions {
    mask: u128,
}

impl Iterator for Positions {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.mask == 0 {
            return None;
        }
        let p = self.mask.trailing_zeros() as usize;
        self.mask &= self.mask - 1;
        Some(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BinaryCode {
    bits: Vec<u8>,
}

impl BinaryCode {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(GlassError::InvalidSet(format!("code entry {b} is not 0 or 1")));
        }
        check_dim(bits.len())?;
        Ok(BinaryCode { bits })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn to_set(&self) -> IndexSet {
        let mask = self.bits.iter().enumerate().filter(|(_, &b)| b == 1).fold(0u128, |m, (i, _)| m | (1u128 << i));
        IndexSet { n: self.bits.len(), mask }
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| f64::from(b)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Signature {
    signs: Vec<i8>,
}

impl Signature {
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }
}

/// Lazily yields every subset of an `n`-set in ascending bitmask order.
pub struct Subsets {
    n: usize,
    next: u128,
    end: u128,
}

impl Iterator for Subsets {
    type Item = IndexSet;

    fn next(&mut self) -> Option<IndexSet> {
        if self.next >= self.end {
            return None;
        }
        let s = IndexSet { n: self.n, mask: self.next };
        self.next += 1;
        Some(s)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = (self.end - self.next) as usize;
        (rem, Some(rem))
    }
}

impl ExactSizeIterator for Subsets {}

/// All 2^n subsets, subject to [`ENUMERATION_CAP`].
pub fn all_subsets(n: usize) -> Result<Subsets> {
    all_subsets_capped(n, ENUMERATION_CAP)
}

pub fn all_subsets_capped(n: usize, cap: usize) -> Result<Subsets> {
    if n > cap || n >= MAX_DIM {
        return Err(GlassError::EnumerationTooLarge { n, cap: cap.min(MAX_DIM - 1) });
    }
    Ok(Subsets { n, next: 0, end: 1u128 << n })
}
