//! Validated Glass networks `ẋ = −x + W·θ(x)`, with optional external input
//! embedded as a clamped feedforward unit.

use serde::{Deserialize, Serialize};

use crate::error::{GlassError, Result};
use crate::index_set::{all_subsets, IndexSet, Subsets};
use crate::linalg::{Matrix, WeightMatrix};

/// Components below this magnitude trigger a near-degeneracy warning.
pub const NEAR_ZERO_OUTPUT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InputMode {
    Vanishing,
    /// The last unit is the clamped input unit; its row is `(0, …, 0, 1)`.
    EmbeddedNonvanishing,
}

/// Whether construction enforces the non-vanishing output constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintCheck {
    Enforce,
    Bypass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlassNetwork {
    weights: WeightMatrix,
    input_mode: InputMode,
}

impl GlassNetwork {
    /// Network without external input. Fails if the constraint is violated.
    pub fn new(weights: WeightMatrix) -> Result<Self> {
        Self::with_mode(weights, InputMode::Vanishing, ConstraintCheck::Enforce)
    }

    /// Skips constraint validation; for exploratory use and for sampling
    /// matrices from a sign class.
    pub fn new_unchecked(weights: WeightMatrix, input_mode: InputMode) -> Result<Self> {
        Self::with_mode(weights, input_mode, ConstraintCheck::Bypass)
    }

    pub fn with_mode(weights: WeightMatrix, input_mode: InputMode, check: ConstraintCheck) -> Result<Self> {
        if input_mode == InputMode::EmbeddedNonvanishing {
            let n = weights.dim();
            if n < 2 {
                return Err(GlassError::DimensionMismatch(
                    "an embedded network needs at least one unit besides the input".into(),
                ));
            }
            let ok = (0..n).all(|j| weights.get(n - 1, j) == if j == n - 1 { 1.0 } else { 0.0 });
            if !ok {
                return Err(GlassError::DimensionMismatch("the clamped input row must be (0, …, 0, 1)".into()));
            }
        }
        let net = GlassNetwork { weights, input_mode };
        if check == ConstraintCheck::Enforce {
            let violations = net.validate_constraint()?;
            if !violations.is_empty() {
                return Err(GlassError::ConstraintViolation(violations));
            }
        }
        Ok(net)
    }

    /// Builds the `(n+1)`-unit network with block matrix `[[w, mu], [0, 1]]`.
    pub fn embed_input(w: &WeightMatrix, mu: &[f64]) -> Result<Self> {
        Self::embed_input_with(w, mu, ConstraintCheck::Enforce)
    }

    pub fn embed_input_with(w: &WeightMatrix, mu: &[f64], check: ConstraintCheck) -> Result<Self> {
        let n = w.dim();
        if mu.len() != n {
            return Err(GlassError::DimensionMismatch(format!("input has {} entries for {n} units", mu.len())));
        }
        if let Some(i) = mu.iter().position(|v| !v.is_finite()) {
            return Err(GlassError::NonFinite { row: i + 1, col: n + 1 });
        }
        let m = Matrix::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
            (true, true) => w.get(i, j),
            (true, false) => mu[i],
            (false, true) => 0.0,
            (false, false) => 1.0,
        });
        Self::with_mode(WeightMatrix::new(m)?, InputMode::EmbeddedNonvanishing, check)
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn input_mode(&self) -> InputMode {
        self.input_mode
    }

    pub fn dim(&self) -> usize {
        self.weights.dim()
    }

    /// 0-based position of the clamped input unit, if any.
    pub fn clamped_unit(&self) -> Option<usize> {
        match self.input_mode {
            InputMode::Vanishing => None,
            InputMode::EmbeddedNonvanishing => Some(self.dim() - 1),
        }
    }

    /// Whether `set` is a part the dynamics can visit: any set without input,
    /// sets containing the clamped unit otherwise.
    pub fn is_admissible(&self, set: &IndexSet) -> bool {
        self.clamped_unit().is_none_or(|c| set.contains(c))
    }

    /// Every admissible part, ascending bitmask order.
    pub fn admissible_subsets(&self) -> Result<impl Iterator<Item = IndexSet> + '_> {
        let subsets: Subsets = all_subsets(self.dim())?;
        Ok(subsets.filter(move |s| self.is_admissible(s)))
    }

    /// `W_α = W·p_α`.
    pub fn attractor_point(&self, set: &IndexSet) -> Vec<f64> {
        self.weights.column_sum(set)
    }

    /// Subsets whose output `W·p_α` vanishes identically. The empty set is
    /// exempt without input; with input only sets containing the clamped
    /// unit are checked.
    pub fn validate_constraint(&self) -> Result<Vec<IndexSet>> {
        let mut out = Vec::new();
        for s in self.admissible_subsets()? {
            if self.input_mode == InputMode::Vanishing && s.is_empty() {
                continue;
            }
            if self.attractor_point(&s).iter().all(|&v| v == 0.0) {
                out.push(s);
            }
        }
        Ok(out)
    }

    /// Subsets whose output is nonzero but has some component with
    /// magnitude below [`NEAR_ZERO_OUTPUT`].
    pub fn near_zero_outputs(&self) -> Result<Vec<IndexSet>> {
        let mut out = Vec::new();
        for s in self.admissible_subsets()? {
            if s.is_empty() {
                continue;
            }
            let w = self.attractor_point(&s);
            let vanishes = w.iter().all(|&v| v == 0.0);
            if !vanishes && w.iter().any(|v| v.abs() < NEAR_ZERO_OUTPUT) {
                out.push(s);
            }
        }
        Ok(out)
    }
}

/// On-disk network description: `{"n": …, "weights": [[…]], "input": null | […]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub n: usize,
    pub weights: Vec<Vec<f64>>,
    #[serde(default)]
    pub input: Option<Vec<f64>>,
}

impl NetworkFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GlassError::Parse(e.to_string()))
    }

    pub fn into_network(self, check: ConstraintCheck) -> Result<GlassNetwork> {
        if self.weights.len() != self.n {
            return Err(GlassError::DimensionMismatch(format!(
                "\"n\" is {} but \"weights\" has {} rows",
                self.n,
                self.weights.len()
            )));
        }
        let w = WeightMatrix::from_rows(&self.weights)?;
        match self.input {
            None => GlassNetwork::with_mode(w, InputMode::Vanishing, check),
            Some(mu) => GlassNetwork::embed_input_with(&w, &mu, check),
        }
    }
}
