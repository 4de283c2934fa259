//! Allowed row-signature counts: closed forms and the brute-force oracle.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{GlassError, Result};
use crate::index_set::IndexSet;

use super::family::{FamilyKind, StableFamily};

/// Largest dimension the brute-force enumeration accepts (3^12 rows).
pub const BRUTE_FORCE_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    /// Entries range over {−1, 0, +1}; the output constraint is ignored.
    Unconstrained,
    /// No zero connections, so entries range over {−1, +1}.
    Vanishing,
    /// The last unit is clamped; rows range over the other `n − 1` columns.
    Nonvanishing,
}

impl CountMode {
    pub const ALL: [CountMode; 3] = [CountMode::Unconstrained, CountMode::Vanishing, CountMode::Nonvanishing];

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "unconstrained" => Ok(CountMode::Unconstrained),
            "vanishing" => Ok(CountMode::Vanishing),
            "nonvanishing" => Ok(CountMode::Nonvanishing),
            other => Err(GlassError::Parse(format!(
                "unknown count mode {other:?} (expected unconstrained, vanishing or nonvanishing)"
            ))),
        }
    }
}

impl fmt::Display for CountMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMode::Unconstrained => "unconstrained",
            CountMode::Vanishing => "vanishing",
            CountMode::Nonvanishing => "nonvanishing",
        })
    }
}

/// A row where the closed form and the enumeration disagree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountDiscrepancy {
    pub kind: FamilyKind,
    pub sets: Vec<IndexSet>,
    pub n: usize,
    pub row: usize,
    pub mode: CountMode,
    #[serde(serialize_with = "serialize_bigint")]
    pub formula: BigInt,
    pub oracle: u64,
}

impl fmt::Display for CountDiscrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self.sets.iter().map(ToString::to_string).collect();
        write!(
            f,
            "{} {} family [{}], n={}, row {}: formula {} but enumeration {}",
            self.mode,
            self.kind,
            sets.join(", "),
            self.n,
            self.row,
            self.formula,
            self.oracle
        )
    }
}

/// Writes a count as a JSON integer when it fits in 64 bits, as a decimal
/// string otherwise.
pub fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(v) {
        Ok(small) => s.serialize_i64(small),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

fn pow(base: u32, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

/// The sets the counting rule sees, after the mode's checks: full members,
/// or members without the clamped unit in `Nonvanishing` mode.
fn prepared_sets(family: &StableFamily, n: usize, row: usize, mode: CountMode) -> Result<Vec<IndexSet>> {
    if family.dim() != n {
        return Err(GlassError::DimensionMismatch(format!("family over {} units, n = {n}", family.dim())));
    }
    let rows = if mode == CountMode::Nonvanishing { n.saturating_sub(1) } else { n };
    if row == 0 || row > rows {
        return Err(GlassError::IndexOutOfRange { index: row, n: rows });
    }
    match mode {
        CountMode::Nonvanishing => {
            let fam = if family.is_on_hyperplane() {
                family.clone()
            } else {
                StableFamily::on_hyperplane(family.kind(), family.sets().to_vec())?
            };
            Ok(fam.reduced_sets())
        }
        _ => {
            if family.is_on_hyperplane() {
                StableFamily::new(family.kind(), family.sets().to_vec())?;
            }
            Ok(family.sets().to_vec())
        }
    }
}

fn nested_rows(sets: &[IndexSet], row: usize) -> impl Iterator<Item = usize> + '_ {
    let r = row - 1;
    (1..sets.len()).filter(move |&i| sets[i].contains(r) && !sets[i - 1].contains(r))
}

/// Closed-form count of allowed signatures for `row` (1-based).
///
/// Every formula is evaluated in exact integers. The `Nonvanishing` nested
/// case follows the closed form as usually stated, which can disagree with
/// enumeration (and even go negative); [`audit_counts`] reports those rows.
pub fn count_allowed_row_signatures(family: &StableFamily, n: usize, row: usize, mode: CountMode) -> Result<BigInt> {
    let sets = prepared_sets(family, n, row, mode)?;
    let k: Vec<usize> = family.sizes();
    let count = match (mode, family.kind()) {
        (CountMode::Unconstrained, FamilyKind::Single) => pow(3, n - k[0]) * (pow(3, k[0]) - pow(2, k[0])),
        (CountMode::Unconstrained, FamilyKind::Disjoint) => {
            let total: usize = k.iter().sum();
            k.iter().fold(pow(3, n - total), |acc, &ki| acc * (pow(3, ki) - pow(2, ki)))
        }
        (CountMode::Unconstrained, FamilyKind::Nested) => {
            let k1 = k[0];
            let mut c = pow(3, n) - pow(2, k1) * pow(3, n - k1);
            for i in nested_rows(&sets, row) {
                c -= pow(2, k[i]) * pow(3, n - k[i]) - pow(2, k[i] - k1) * pow(3, n - k[i]);
            }
            c
        }
        (CountMode::Vanishing, FamilyKind::Single) => pow(2, n) - pow(2, n - k[0]),
        (CountMode::Vanishing, FamilyKind::Disjoint) => {
            let total: usize = k.iter().sum();
            k.iter().fold(pow(2, n - total), |acc, &ki| acc * (pow(2, ki) - BigInt::one()))
        }
        (CountMode::Vanishing, FamilyKind::Nested) => {
            let mut c = pow(2, n) - pow(2, n - k[0]);
            for i in nested_rows(&sets, row) {
                c -= pow(2, n - k[i]);
            }
            c
        }
        (CountMode::Nonvanishing, FamilyKind::Single) => pow(3, n - 1) - pow(2, k[0] - 1) * pow(3, n - k[0]),
        (CountMode::Nonvanishing, FamilyKind::Disjoint) => {
            let reduced: usize = k.iter().map(|ki| ki - 1).sum();
            k.iter().fold(pow(3, n - 1 - reduced), |acc, &ki| acc * (pow(3, ki - 1) - pow(2, ki - 1)))
        }
        (CountMode::Nonvanishing, FamilyKind::Nested) => {
            let k1 = k[0];
            let mut c = pow(3, n - 1) - pow(2, k1 - 1) * pow(3, n - k1);
            for i in nested_rows(&sets, row) {
                c -= (pow(2, k[i] - 1) - BigInt::one()) * pow(3, n - k[i]);
            }
            c
        }
    };
    Ok(count)
}

/// Counts allowed signatures for `row` by listing every candidate row and
/// discarding those forbidden by some member: a row is forbidden by `α`
/// when no column of `α` carries the sign `s_α^row`.
pub fn brute_force_row_signatures(family: &StableFamily, n: usize, row: usize, mode: CountMode) -> Result<u64> {
    if n > BRUTE_FORCE_CAP {
        return Err(GlassError::EnumerationTooLarge { n, cap: BRUTE_FORCE_CAP });
    }
    let sets = prepared_sets(family, n, row, mode)?;
    let r = row - 1;
    let cols = if mode == CountMode::Nonvanishing { n - 1 } else { n };
    // (mask of columns in α, sign the row needs there)
    let rules: Vec<(u32, bool)> =
        sets.iter().map(|s| ((s.mask() as u32) & ((1u32 << cols) - 1), s.contains(r))).collect();
    let allowed =
        |pos: u32, neg: u32| rules.iter().all(|&(m, positive)| if positive { pos & m != 0 } else { neg & m != 0 });
    let mut count = 0u64;
    match mode {
        CountMode::Vanishing => {
            let full = (1u32 << cols) - 1;
            for pos in 0..=full {
                if allowed(pos, full & !pos) {
                    count += 1;
                }
            }
        }
        CountMode::Unconstrained | CountMode::Nonvanishing => {
            let total = 3u64.pow(cols as u32);
            for mut code in 0..total {
                let (mut pos, mut neg) = (0u32, 0u32);
                for j in 0..cols {
                    match code % 3 {
                        1 => pos |= 1 << j,
                        2 => neg |= 1 << j,
                        _ => {}
                    }
                    code /= 3;
                }
                if allowed(pos, neg) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Compares the closed form with enumeration on every row.
pub fn audit_counts(family: &StableFamily, n: usize, mode: CountMode) -> Result<Vec<CountDiscrepancy>> {
    let rows = if mode == CountMode::Nonvanishing { n - 1 } else { n };
    let mut out = Vec::new();
    for row in 1..=rows {
        let formula = count_allowed_row_signatures(family, n, row, mode)?;
        let oracle = brute_force_row_signatures(family, n, row, mode)?;
        if formula != BigInt::from(oracle) {
            out.push(CountDiscrepancy {
                kind: family.kind(),
                sets: family.sets().to_vec(),
                n,
                row,
                mode,
                formula,
                oracle,
            });
        }
    }
    Ok(out)
}

/// Number of candidate rows in `mode`: 3^n, 2^n or 3^(n−1).
pub fn signature_space(n: usize, mode: CountMode) -> BigInt {
    match mode {
        CountMode::Unconstrained => pow(3, n),
        CountMode::Vanishing => pow(2, n),
        CountMode::Nonvanishing if n == 0 => BigInt::zero(),
        CountMode::Nonvanishing => pow(3, n - 1),
    }
}
