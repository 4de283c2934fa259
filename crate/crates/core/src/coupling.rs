//! Block predicates and the composition, decomposition and coupling
//! theorems for stable sets.
//!
//! Every check computes the theorem's algebraic predicate and, separately,
//! the stability it claims to decide. The two must agree; a disagreement is
//! reported as [`GlassError::InternalConsistency`].

use serde::Serialize;

use crate::error::{GlassError, Result};
use crate::index_set::IndexSet;
use crate::linalg::WeightMatrix;
use crate::network::GlassNetwork;
use crate::stability::{is_stable_set, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    /// 1-based unit index.
    pub index: usize,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingVerdict {
    /// The theorem's predicate.
    pub holds: bool,
    /// Stability recomputed directly; always equal to `holds`.
    pub recomputed: bool,
    /// First unit violating the predicate, if any.
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Outcome of a block test with the first failing row.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTest {
    pub holds: bool,
    pub witness: Option<Witness>,
    /// Some row failed by equality rather than strictly.
    pub tie: bool,
}

fn check_subset(a: &IndexSet, g: &IndexSet) -> Result<()> {
    if a.dim() != g.dim() {
        return Err(GlassError::DimensionMismatch(format!("sets over {} and {} units", a.dim(), g.dim())));
    }
    if !a.is_subset(g) {
        return Err(GlassError::Precondition(format!("{a} is not a subset of {g}")));
    }
    Ok(())
}

fn partial_sum(w: &WeightMatrix, i: usize, cols: &IndexSet) -> f64 {
    cols.positions().map(|j| w.get(i, j)).sum()
}

fn block_test(
    w: &WeightMatrix,
    a: &IndexSet,
    g: &IndexSet,
    row_ok: impl Fn(f64, f64) -> (bool, bool),
) -> Result<BlockTest> {
    check_subset(a, g)?;
    if w.dim() != g.dim() {
        return Err(GlassError::DimensionMismatch(format!("sets over {} units for {} units", g.dim(), w.dim())));
    }
    let rest = g.difference(a);
    let mut tie = false;
    for i in g.positions() {
        // (own block sum, other block sum) for row i
        let (own, other) = if a.contains(i) {
            (partial_sum(w, i, a), partial_sum(w, i, &rest))
        } else {
            (partial_sum(w, i, &rest), partial_sum(w, i, a))
        };
        let (ok, is_tie) = row_ok(own, other);
        tie |= is_tie;
        if !ok {
            return Ok(BlockTest {
                holds: false,
                witness: Some(Witness { index: i + 1, values: vec![own, other] }),
                tie,
            });
        }
    }
    Ok(BlockTest { holds: true, witness: None, tie })
}

/// Row sums over the own block strictly dominate those over the other
/// block, in absolute value, for every row of `g`.
pub fn block_diag_dominance(w: &WeightMatrix, a: &IndexSet, g: &IndexSet) -> Result<BlockTest> {
    block_test(w, a, g, |own, other| (own.abs() > other.abs(), own.abs() == other.abs()))
}

pub fn is_block_diag_dominant(w: &WeightMatrix, a: &IndexSet, g: &IndexSet) -> Result<bool> {
    Ok(block_diag_dominance(w, a, g)?.holds)
}

/// Row sums over the other block are strictly negative for every row of `g`.
pub fn block_z(w: &WeightMatrix, a: &IndexSet, g: &IndexSet) -> Result<BlockTest> {
    block_test(w, a, g, |_, other| (other < 0.0, other == 0.0))
}

pub fn is_block_z(w: &WeightMatrix, a: &IndexSet, g: &IndexSet) -> Result<bool> {
    Ok(block_z(w, a, g)?.holds)
}

fn stable(net: &GlassNetwork, a: &IndexSet) -> Result<bool> {
    Ok(is_stable_set(net, a)?.verdict == Verdict::Stable)
}

fn require_stable(net: &GlassNetwork, a: &IndexSet) -> Result<()> {
    if a.is_empty() {
        return Err(GlassError::Precondition("the empty set is not a stable set".into()));
    }
    if !stable(net, a)? {
        return Err(GlassError::Precondition(format!("{a} is not a stable set")));
    }
    Ok(())
}

fn require_nonempty(a: &IndexSet) -> Result<()> {
    if a.is_empty() {
        return Err(GlassError::Precondition("sets must be nonempty".into()));
    }
    Ok(())
}

fn agree(name: &str, verdict: CouplingVerdict, context: impl FnOnce() -> String) -> Result<CouplingVerdict> {
    if verdict.holds != verdict.recomputed {
        return Err(GlassError::InternalConsistency(format!(
            "{name}: predicate {} but direct stability {} for {}",
            verdict.holds,
            verdict.recomputed,
            context()
        )));
    }
    Ok(verdict)
}

fn tie_warning(tie: bool, what: &str) -> Vec<String> {
    if tie {
        vec![format!("{what} failed by equality in some row (degenerate weights)")]
    } else {
        Vec::new()
    }
}

/// Stable disjoint `a` and `b` compose to a stable `a ∪ b` exactly when
/// `W[a ∪ b]` is `a`-block diagonally dominant.
pub fn compose_check(net: &GlassNetwork, a: &IndexSet, b: &IndexSet) -> Result<CouplingVerdict> {
    require_stable(net, a)?;
    require_stable(net, b)?;
    if !a.is_disjoint(b) {
        return Err(GlassError::Precondition(format!("{a} and {b} overlap")));
    }
    let g = a.union(b);
    let test = block_diag_dominance(net.weights(), a, &g)?;
    let verdict = CouplingVerdict {
        holds: test.holds,
        recomputed: stable(net, &g)?,
        witness: test.witness,
        warnings: tie_warning(test.tie, "block diagonal dominance"),
    };
    agree("composition", verdict, || format!("{a} and {b}"))
}

/// For stable `g` and `∅ ≠ a ⊊ g` with `b = g \ a`: both `a` and `b` are
/// stable exactly when `W[g]` is an `a`-block Z-matrix and
/// `W_a^i·W_b^i > 0` for every `i ∉ g`.
pub fn decompose_check(net: &GlassNetwork, g: &IndexSet, a: &IndexSet) -> Result<CouplingVerdict> {
    require_stable(net, g)?;
    require_nonempty(a)?;
    check_subset(a, g)?;
    if a == g {
        return Err(GlassError::Precondition(format!("{a} must be a proper subset of {g}")));
    }
    let b = g.difference(a);
    let test = block_z(net.weights(), a, g)?;
    let mut holds = test.holds;
    let mut witness = test.witness;
    let mut tie = test.tie;
    if holds {
        let wa = net.attractor_point(a);
        let wb = net.attractor_point(&b);
        for i in g.complement().positions() {
            let prod = wa[i] * wb[i];
            tie |= prod == 0.0;
            if prod <= 0.0 {
                holds = false;
                witness = Some(Witness { index: i + 1, values: vec![wa[i], wb[i]] });
                break;
            }
        }
    }
    let recomputed = stable(net, a)? && stable(net, &b)?;
    let verdict = CouplingVerdict { holds, recomputed, witness, warnings: tie_warning(tie, "block Z test") };
    agree("decomposition", verdict, || format!("{g} split at {a}"))
}

fn hadamard_check(net: &GlassNetwork, sets: &[IndexSet], target: &IndexSet) -> Result<CouplingVerdict> {
    let signed: Vec<Vec<f64>> = sets
        .iter()
        .map(|s| net.attractor_point(s).iter().enumerate().map(|(i, &v)| s.sign_of(i) * v).collect())
        .collect();
    let mut witness = None;
    for i in 0..net.dim() {
        let values: Vec<f64> = signed.iter().map(|v| v[i]).collect();
        if values.iter().product::<f64>() <= 0.0 {
            witness = Some(Witness { index: i + 1, values });
            break;
        }
    }
    let tie = witness.as_ref().is_some_and(|w| w.values.contains(&0.0));
    Ok(CouplingVerdict {
        holds: witness.is_none(),
        recomputed: stable(net, target)?,
        witness,
        warnings: tie_warning(tie, "Hadamard product test"),
    })
}

/// For stable `a`: `b` is stable exactly when `S_a·W_a ∘ S_b·W_b > 0`.
pub fn coupling_check(net: &GlassNetwork, a: &IndexSet, b: &IndexSet) -> Result<CouplingVerdict> {
    require_stable(net, a)?;
    require_nonempty(b)?;
    let verdict = hadamard_check(net, &[*a, *b], b)?;
    agree("coupling", verdict, || format!("{a} and {b}"))
}

/// For stable `a` and `b`: `g` is stable exactly when the triple product
/// `S_a·W_a ∘ S_b·W_b ∘ S_g·W_g` is positive.
pub fn triple_coupling_check(net: &GlassNetwork, a: &IndexSet, b: &IndexSet, g: &IndexSet) -> Result<CouplingVerdict> {
    require_stable(net, a)?;
    require_stable(net, b)?;
    require_nonempty(g)?;
    let verdict = hadamard_check(net, &[*a, *b, *g], g)?;
    agree("triple coupling", verdict, || format!("{a}, {b} and {g}"))
}
