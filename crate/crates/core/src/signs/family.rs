use std::fmt;

use serde::Serialize;

use crate::error::{GlassError, Result};
use crate::index_set::IndexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Single,
    Disjoint,
    Nested,
}

impl FamilyKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(FamilyKind::Single),
            "disjoint" => Ok(FamilyKind::Disjoint),
            "nested" => Ok(FamilyKind::Nested),
            other => {
                Err(GlassError::Parse(format!("unknown family kind {other:?} (expected single, disjoint or nested)")))
            }
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Single => "single",
            FamilyKind::Disjoint => "disjoint",
            FamilyKind::Nested => "nested",
        })
    }
}

/// A family of sets assumed simultaneously stable.
///
/// A family built with [`StableFamily::on_hyperplane`] lives on the input
/// hyperplane: every member contains the clamped (last) unit and its shape
/// is judged on the members with that unit removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableFamily {
    kind: FamilyKind,
    sets: Vec<IndexSet>,
    #[serde(skip)]
    on_hyperplane: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EIBounds {
    pub min_excitatory: usize,
    pub min_inhibitory: usize,
}

impl StableFamily {
    pub fn new(kind: FamilyKind, sets: Vec<IndexSet>) -> Result<Self> {
        validate_shape(kind, &sets, false)?;
        Ok(StableFamily { kind, sets, on_hyperplane: false })
    }

    pub fn single(set: IndexSet) -> Result<Self> {
        Self::new(FamilyKind::Single, vec![set])
    }

    pub fn on_hyperplane(kind: FamilyKind, sets: Vec<IndexSet>) -> Result<Self> {
        let n = sets.first().map(IndexSet::dim).unwrap_or(0);
        if n < 2 {
            return Err(GlassError::FamilyShape("the input hyperplane needs at least two units".into()));
        }
        let clamped = n - 1;
        if let Some(s) = sets.iter().find(|s| !s.contains(clamped)) {
            return Err(GlassError::FamilyShape(format!("{s} does not contain the clamped unit {}", clamped + 1)));
        }
        let reduced: Vec<IndexSet> = sets.iter().map(|s| s.without(clamped)).collect();
        validate_shape(kind, &reduced, true)?;
        Ok(StableFamily { kind, sets, on_hyperplane: true })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn sets(&self) -> &[IndexSet] {
        &self.sets
    }

    pub fn dim(&self) -> usize {
        self.sets[0].dim()
    }

    pub fn is_on_hyperplane(&self) -> bool {
        self.on_hyperplane
    }

    /// Members with the clamped unit removed (unchanged off the hyperplane).
    pub fn reduced_sets(&self) -> Vec<IndexSet> {
        if self.on_hyperplane {
            let c = self.dim() - 1;
            self.sets.iter().map(|s| s.without(c)).collect()
        } else {
            self.sets.clone()
        }
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(IndexSet::len).collect()
    }

    /// Parses `kind:set;set;…` with comma-separated 1-based members,
    /// e.g. `nested:1;1,2`.
    pub fn parse(literal: &str, n: usize, on_hyperplane: bool) -> Result<Self> {
        let (kind, rest) = literal
            .split_once(':')
            .ok_or_else(|| GlassError::Parse(format!("family {literal:?} lacks a `kind:` prefix")))?;
        let kind = FamilyKind::parse(kind.trim())?;
        let sets = rest.split(';').map(|s| parse_set(s, n)).collect::<Result<Vec<_>>>()?;
        if on_hyperplane {
            Self::on_hyperplane(kind, sets)
        } else {
            Self::new(kind, sets)
        }
    }
}

/// Parses a comma-separated list of 1-based indices; the empty string is ∅.
pub fn parse_set(text: &str, n: usize) -> Result<IndexSet> {
    let text = text.trim();
    let text = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')).unwrap_or(text);
    if text.trim().is_empty() {
        return IndexSet::empty(n);
    }
    let members = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| GlassError::Parse(format!("bad index {t:?} in set {text:?}"))))
        .collect::<Result<Vec<_>>>()?;
    IndexSet::from_one_based(n, &members)
}

fn validate_shape(kind: FamilyKind, sets: &[IndexSet], allow_empty_members: bool) -> Result<()> {
    let first = sets.first().ok_or_else(|| GlassError::FamilyShape("a family needs at least one set".into()))?;
    if sets.iter().any(|s| s.dim() != first.dim()) {
        return Err(GlassError::FamilyShape("members have different dimensions".into()));
    }
    if !allow_empty_members && sets.iter().any(IndexSet::is_empty) {
        return Err(GlassError::FamilyShape("the empty set cannot be a member".into()));
    }
    match kind {
        FamilyKind::Single if sets.len() != 1 => {
            Err(GlassError::FamilyShape(format!("a single family has one set, got {}", sets.len())))
        }
        FamilyKind::Disjoint => {
            for (i, a) in sets.iter().enumerate() {
                for b in &sets[i + 1..] {
                    if !a.is_disjoint(b) {
                        return Err(GlassError::FamilyShape(format!("{a} and {b} overlap")));
                    }
                }
            }
            Ok(())
        }
        FamilyKind::Nested => {
            for pair in sets.windows(2) {
                if !pair[0].is_proper_subset(&pair[1]) {
                    return Err(GlassError::FamilyShape(format!("{} is not a proper subset of {}", pair[0], pair[1])));
                }
            }
            Ok(())
        }
        FamilyKind::Single => Ok(()),
    }
}

/// Lower bounds on the number of excitatory and inhibitory connections any
/// network holding `family` stable must have.
pub fn ei_bounds(family: &StableFamily, n: usize) -> Result<EIBounds> {
    if family.dim() != n {
        return Err(GlassError::DimensionMismatch(format!("family over {} units, n = {n}", family.dim())));
    }
    let k = family.sizes();
    let (e, i) = match family.kind() {
        FamilyKind::Single => (k[0], n - k[0]),
        FamilyKind::Disjoint => {
            let total: usize = k.iter().sum();
            (total, n * k.len() - total)
        }
        FamilyKind::Nested => (k[k.len() - 1], n - k[0]),
    };
    Ok(EIBounds { min_excitatory: e, min_inhibitory: i })
}
