use std::fmt;

use serde::Serialize;

use crate::error::{GlassError, Result};
use crate::index_set::IndexSet;
use crate::linalg::WeightMatrix;

use super::family::{FamilyKind, StableFamily};

/// Qualitative wiring diagram: the entrywise sign of a weight matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    n: usize,
    entries: Vec<i8>,
}

impl SignPattern {
    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GlassError::DimensionMismatch(format!(
                    "sign pattern row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !(-1..=1).contains(&v) {
                    return Err(GlassError::InvalidSet(format!(
                        "sign entry ({}, {}) = {v} is not in {{-1, 0, 1}}",
                        i + 1,
                        j + 1
                    )));
                }
            }
            entries.extend_from_slice(row);
        }
        Ok(SignPattern { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        SignPattern { n, entries: vec![0; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i8) {
        assert!((-1..=1).contains(&v));
        self.entries[i * self.n + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        self.entries.chunks(self.n).map(<[i8]>::to_vec).collect()
    }

    pub fn excitatory_count(&self) -> usize {
        self.entries.iter().filter(|&&v| v > 0).count()
    }

    pub fn inhibitory_count(&self) -> usize {
        self.entries.iter().filter(|&&v| v < 0).count()
    }

    /// `S_α·S·P_α` as a dense matrix of signs.
    pub fn signed_restriction(&self, set: &IndexSet) -> Vec<Vec<i8>> {
        self.check(set);
        (0..self.n)
            .map(|i| {
                let s = if set.contains(i) { 1 } else { -1 };
                (0..self.n).map(|j| if set.contains(j) { s * self.get(i, j) } else { 0 }).collect()
            })
            .collect()
    }

    /// Some matrix with this sign pattern makes `set` stable: every row `i`
    /// has an entry of sign `s_α^i` in a column of `set`.
    ///
    /// Always false for the empty set.
    pub fn allows_stable(&self, set: &IndexSet) -> bool {
        self.check(set);
        (0..self.n).all(|i| self.row_has_sign_in(i, set, row_sign(set, i)))
    }

    /// Every matrix with this pattern makes `set` stable (`S_α·S·P_α` is row positive).
    pub fn is_sign_stable(&self, set: &IndexSet) -> bool {
        self.signed_restriction(set).iter().all(|row| row.iter().all(|&v| v >= 0) && row.iter().any(|&v| v > 0))
    }

    /// Sign patterns that force `set` to be minimally stable are exactly the
    /// sign-stable ones.
    pub fn requires_minimal_stability(&self, set: &IndexSet) -> bool {
        self.is_sign_stable(set)
    }

    pub fn allows_family(&self, family: &StableFamily) -> bool {
        let sets = family.sets();
        match family.kind() {
            FamilyKind::Single | FamilyKind::Disjoint => sets.iter().all(|s| self.allows_stable(s)),
            FamilyKind::Nested => {
                if !self.allows_stable(&sets[0]) {
                    return false;
                }
                sets.windows(2).all(|pair| {
                    let (prev, cur) = (&pair[0], &pair[1]);
                    cur.difference(prev).positions().all(|i| self.row_has_sign_in(i, cur, 1))
                })
            }
        }
    }

    fn row_has_sign_in(&self, row: usize, cols: &IndexSet, sign: i8) -> bool {
        cols.positions().any(|j| self.get(row, j) == sign)
    }

    fn check(&self, set: &IndexSet) {
        assert_eq!(set.dim(), self.n, "set over {} units for a {}-unit pattern", set.dim(), self.n);
    }
}

fn row_sign(set: &IndexSet, i: usize) -> i8 {
    if set.contains(i) {
        1
    } else {
        -1
    }
}

impl fmt::Debug for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignPattern{:?}", self.to_rows())
    }
}

impl Serialize for SignPattern {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

/// The unique `S` with `W = W⁺ ∘ S` for a positive `W⁺`.
pub fn sign_pattern(w: &WeightMatrix) -> SignPattern {
    let n = w.dim();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let v = w.get(i, j);
            entries.push(if v > 0.0 {
                1
            } else if v < 0.0 {
                -1
            } else {
                0
            });
        }
    }
    SignPattern { n, entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(rows: &[&[i8]]) -> SignPattern {
        SignPattern::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn set(n: usize, m: &[usize]) -> IndexSet {
        IndexSet::from_one_based(n, m).unwrap()
    }

    fn all_patterns(n: usize) -> impl Iterator<Item = SignPattern> {
        let total = 3usize.pow((n * n) as u32);
        (0..total).map(move |mut code| {
            let mut p = SignPattern::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    p.set(i, j, (code % 3) as i8 - 1);
                    code /= 3;
                }
            }
            p
        })
    }

    #[test]
    fn extraction_examples() {
        let w2 = WeightMatrix::from_rows(&[vec![2.0, 0.0, -1.0], vec![0.0, 2.0, -1.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(sign_pattern(&w2), pat(&[&[1, 0, -1], &[0, 1, -1], &[0, 0, 1]]));
        let w1 = WeightMatrix::from_rows(&[vec![1.0, 4.0], vec![2.0, 3.0]]).unwrap();
        assert_eq!(sign_pattern(&w1), pat(&[&[1, 1], &[1, 1]]));
        let z = WeightMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(sign_pattern(&z), SignPattern::zeros(2));
    }

    #[test]
    fn allows_examples() {
        for a in -1..=1 {
            for b in -1..=1 {
                assert!(pat(&[&[1, a], &[-1, b]]).allows_stable(&set(2, &[1])));
            }
        }
        for c in -1..=1 {
            for d in -1..=1 {
                assert!(!pat(&[&[-1, 0], &[c, d]]).allows_stable(&set(2, &[1, 2])));
            }
        }
        let ones = pat(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert!(ones.allows_stable(&set(3, &[1, 2, 3])));
        assert!(!ones.allows_stable(&set(3, &[])));
    }

    #[test]
    fn two_unit_single_set_patterns() {
        // The patterns allowing {1,2} need a +1 in every row.
        let full = set(2, &[1, 2]);
        let count = all_patterns(2).filter(|p| p.allows_stable(&full)).count();
        assert_eq!(count, 25);
    }

    #[test]
    fn disjoint_pair_has_one_pattern() {
        let fam = StableFamily::new(FamilyKind::Disjoint, vec![set(2, &[1]), set(2, &[2])]).unwrap();
        let allowed: Vec<_> = all_patterns(2).filter(|p| p.allows_family(&fam)).collect();
        assert_eq!(allowed, vec![pat(&[&[1, -1], &[-1, 1]])]);
    }

    #[test]
    fn nested_pair_patterns() {
        let fam = StableFamily::new(FamilyKind::Nested, vec![set(2, &[1]), set(2, &[1, 2])]).unwrap();
        let allowed: Vec<_> = all_patterns(2).filter(|p| p.allows_family(&fam)).collect();
        assert_eq!(allowed.len(), 3);
        assert!(allowed.iter().all(|p| p.get(0, 0) == 1 && p.get(1, 0) == -1 && p.get(1, 1) == 1));
    }

    #[test]
    fn nested_rule_equals_member_wise_rule() {
        let fam =
            StableFamily::new(FamilyKind::Nested, vec![set(3, &[2]), set(3, &[1, 2]), set(3, &[1, 2, 3])]).unwrap();
        for p in all_patterns(3) {
            let member_wise = fam.sets().iter().all(|s| p.allows_stable(s));
            assert_eq!(p.allows_family(&fam), member_wise);
        }
    }

    #[test]
    fn family_of_one_reduces_to_single() {
        let s = set(2, &[2]);
        for kind in [FamilyKind::Single, FamilyKind::Disjoint, FamilyKind::Nested] {
            let fam = StableFamily::new(kind, vec![s]).unwrap();
            for p in all_patterns(2) {
                assert_eq!(p.allows_family(&fam), p.allows_stable(&s));
            }
        }
    }

    #[test]
    fn sign_stability_examples() {
        assert!(pat(&[&[1, 1], &[1, 1]]).is_sign_stable(&set(2, &[1, 2])));
        assert!(!pat(&[&[1, 0, -1], &[0, 1, -1], &[0, 0, 1]]).is_sign_stable(&set(3, &[1, 2, 3])));
        let p = pat(&[&[1, -1], &[-1, 1]]);
        assert_eq!(p.signed_restriction(&set(2, &[1])), vec![vec![1, 0], vec![1, 0]]);
        assert!(p.is_sign_stable(&set(2, &[1])));
    }

    #[test]
    fn minimal_stability_examples() {
        let ones = pat(&[&[1, 1], &[1, 1]]);
        assert!(ones.requires_minimal_stability(&set(2, &[1, 2])));
        assert!(!ones.allows_stable(&set(2, &[1])));
        assert!(!ones.allows_stable(&set(2, &[2])));
        assert!(pat(&[&[1, -1], &[-1, 1]]).requires_minimal_stability(&set(2, &[1])));
        assert!(!pat(&[&[1, 0, -1], &[0, 1, -1], &[0, 0, 1]]).requires_minimal_stability(&set(3, &[1, 2, 3])));
    }

    #[test]
    fn minimal_stability_exhaustive_small() {
        for n in 1..=3 {
            for p in all_patterns(n) {
                for a in crate::index_set::all_subsets(n).unwrap().filter(|s| !s.is_empty()) {
                    if !p.requires_minimal_stability(&a) {
                        continue;
                    }
                    for b in crate::index_set::all_subsets(n).unwrap() {
                        if !b.is_empty() && b.is_proper_subset(&a) {
                            assert!(!p.allows_stable(&b), "{p:?} {a} {b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(SignPattern::from_rows(&[vec![2]]).is_err());
        assert!(SignPattern::from_rows(&[vec![1, 0]]).is_err());
    }
}
