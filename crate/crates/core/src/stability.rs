//! Stable-set decisions: a part `α` holds its own attractor point exactly
//! when `s_α^i · W_α^i > 0` for every unit `i`.

use serde::Serialize;

use crate::error::{GlassError, Result};
use crate::index_set::IndexSet;
use crate::network::{GlassNetwork, InputMode};

/// Default threshold below which a margin is flagged as near-degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Stable,
    Unstable,
    /// The all-inactive part without input; its attractor is the origin.
    OriginCandidate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StableSetReport {
    pub set: IndexSet,
    pub verdict: Verdict,
    pub attractor: Vec<f64>,
    /// `min_i s_α^i · W_α^i`
    pub margin: f64,
    /// Some inactive unit has `W_α^i = 0` exactly, so the attractor sits on
    /// the boundary of the part. Such parts are reported unstable.
    #[serde(skip)]
    pub boundary_candidate: bool,
    #[serde(skip)]
    pub near_degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityConfig {
    pub degeneracy_threshold: f64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        StabilityConfig { degeneracy_threshold: DEGENERACY_THRESHOLD }
    }
}

/// Which reports [`enumerate_stable_sets`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Listing {
    StableAndOrigin,
    All,
}

pub fn is_stable_set(net: &GlassNetwork, set: &IndexSet) -> Result<StableSetReport> {
    is_stable_set_with(net, set, &StabilityConfig::default())
}

pub fn is_stable_set_with(net: &GlassNetwork, set: &IndexSet, config: &StabilityConfig) -> Result<StableSetReport> {
    if set.dim() != net.dim() {
        return Err(GlassError::DimensionMismatch(format!(
            "set over {} units for a {}-unit network",
            set.dim(),
            net.dim()
        )));
    }
    if net.input_mode() == InputMode::EmbeddedNonvanishing {
        if set.is_empty() {
            return Err(GlassError::InvalidSet("the empty set is not a part on the input hyperplane".into()));
        }
        if !net.is_admissible(set) {
            return Err(GlassError::InvalidSet(format!("{set} does not contain the clamped input unit")));
        }
    }
    let attractor = net.attractor_point(set);
    let margin = attractor.iter().enumerate().map(|(i, &w)| set.sign_of(i) * w).fold(f64::INFINITY, f64::min) + 0.0;
    let boundary_candidate =
        !set.is_empty() && attractor.iter().enumerate().any(|(i, &w)| !set.contains(i) && w == 0.0);
    let verdict = if set.is_empty() {
        Verdict::OriginCandidate
    } else if margin > 0.0 {
        Verdict::Stable
    } else {
        Verdict::Unstable
    };
    let near_degenerate = !set.is_empty() && margin.abs() < config.degeneracy_threshold;
    Ok(StableSetReport { set: *set, verdict, attractor, margin, boundary_candidate, near_degenerate })
}

/// Reports for every admissible part in canonical order (size, then bitmask).
/// The number of `Stable` entries is the network's degree of multistability.
pub fn enumerate_stable_sets(net: &GlassNetwork, listing: Listing) -> Result<Vec<StableSetReport>> {
    let config = StabilityConfig::default();
    let mut reports = Vec::new();
    for s in net.admissible_subsets()? {
        let r = is_stable_set_with(net, &s, &config)?;
        if listing == Listing::All || r.verdict != Verdict::Unstable {
            reports.push(r);
        }
    }
    reports.sort_by(|a, b| a.set.canonical_cmp(&b.set));
    Ok(reports)
}

pub fn stable_sets(net: &GlassNetwork) -> Result<Vec<IndexSet>> {
    Ok(enumerate_stable_sets(net, Listing::StableAndOrigin)?
        .into_iter()
        .filter(|r| r.verdict == Verdict::Stable)
        .map(|r| r.set)
        .collect())
}

/// Stable sets of the output-nonlinearity model `ẏ = −y + θ(W·y)`.
///
/// Its fixed points are 0/1 vectors `p` with `θ(W·p) = p`; such a point is
/// stable when no component of `W·p` is zero, so that `θ(W·y)` stays
/// constant near `p`. The all-zero code is excluded, as in the other model.
pub fn stable_sets_output_model(net: &GlassNetwork) -> Result<Vec<IndexSet>> {
    let n = net.dim();
    let m = net.weights().matrix();
    let mut out = Vec::new();
    for s in net.admissible_subsets()? {
        if s.is_empty() {
            continue;
        }
        let p = s.code().as_f64();
        let drive = m.mul_vec(&p);
        let fixed = (0..n).all(|i| (drive[i] > 0.0) == (p[i] == 1.0));
        let structurally_stable = drive.iter().all(|&v| v != 0.0);
        if fixed && structurally_stable {
            out.push(s);
        }
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

/// The stable-set test split into blocks: `W[α]·1 > 0` and `W[αᶜ, α]·1 < 0`.
pub fn block_stability_test(net: &GlassNetwork, set: &IndexSet) -> bool {
    if set.is_empty() {
        return false;
    }
    let w = net.weights();
    let cols: Vec<usize> = set.positions().collect();
    (0..net.dim()).all(|i| {
        let row_sum: f64 = cols.iter().map(|&j| w.get(i, j)).sum();
        if set.contains(i) {
            row_sum > 0.0
        } else {
            row_sum < 0.0
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::WeightMatrix;

    fn net(rows: &[&[f64]]) -> GlassNetwork {
        let w = WeightMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        GlassNetwork::new(w).unwrap()
    }

    fn example1() -> GlassNetwork {
        net(&[&[1.0, 4.0], &[2.0, 3.0]])
    }

    fn example2() -> GlassNetwork {
        let w = WeightMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        GlassNetwork::embed_input(&w, &[-1.0, -1.0]).unwrap()
    }

    fn set(n: usize, m: &[usize]) -> IndexSet {
        IndexSet::from_one_based(n, m).unwrap()
    }

    #[test]
    fn example1_verdicts() {
        let r = is_stable_set(&example1(), &set(2, &[1, 2])).unwrap();
        assert_eq!(r.verdict, Verdict::Stable);
        assert_eq!(r.attractor, vec![5.0, 5.0]);
        assert_eq!(r.margin, 5.0);

        let r = is_stable_set(&example1(), &set(2, &[1])).unwrap();
        assert_eq!(r.verdict, Verdict::Unstable);
        assert_eq!(r.attractor, vec![1.0, 2.0]);
        assert_eq!(r.margin, -2.0);
    }

    #[test]
    fn example2_verdicts() {
        let r = is_stable_set(&example2(), &set(3, &[2, 3])).unwrap();
        assert_eq!(r.verdict, Verdict::Stable);
        assert_eq!(r.attractor, vec![-1.0, 1.0, 1.0]);
    }

    #[test]
    fn embedded_rejects_sets_off_the_hyperplane() {
        assert!(matches!(is_stable_set(&example2(), &set(3, &[])), Err(GlassError::InvalidSet(_))));
        assert!(matches!(is_stable_set(&example2(), &set(3, &[1, 2])), Err(GlassError::InvalidSet(_))));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(stable_sets(&example1()).unwrap(), vec![set(2, &[1, 2])]);
        assert_eq!(
            stable_sets(&example2()).unwrap(),
            vec![set(3, &[3]), set(3, &[1, 3]), set(3, &[2, 3]), set(3, &[1, 2, 3])]
        );
    }

    #[test]
    fn negative_identity_has_only_origin_candidate() {
        // Brute force over the four codes: {1}: W=(-1,0), {2}: (0,-1), {1,2}: (-1,-1).
        let reports = enumerate_stable_sets(&net(&[&[-1.0, 0.0], &[0.0, -1.0]]), Listing::StableAndOrigin).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].verdict, Verdict::OriginCandidate);
        assert!(reports[0].set.is_empty());
        assert_eq!(reports[0].margin.to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn full_listing_is_canonically_ordered() {
        let all = enumerate_stable_sets(&example1(), Listing::All).unwrap();
        let order: Vec<_> = all.iter().map(|r| r.set.one_based()).collect();
        assert_eq!(order, vec![vec![], vec![1], vec![2], vec![1, 2]]);
    }

    #[test]
    fn boundary_attractor_is_flagged_not_stable() {
        // {1}: W_{1} = (1, 0), the inactive row is exactly zero.
        let n = net(&[&[1.0, -1.0], &[0.0, 2.0]]);
        let r = is_stable_set(&n, &set(2, &[1])).unwrap();
        assert_eq!(r.verdict, Verdict::Unstable);
        assert!(r.boundary_candidate);
        assert!(r.near_degenerate);
    }

    #[test]
    fn output_model_matches_examples() {
        assert_eq!(stable_sets_output_model(&example1()).unwrap(), vec![set(2, &[1, 2])]);
        assert_eq!(stable_sets_output_model(&example2()).unwrap(), stable_sets(&example2()).unwrap());
    }

    #[test]
    fn block_form_matches_example_verdicts() {
        for s in example2().admissible_subsets().unwrap() {
            let r = is_stable_set(&example2(), &s).unwrap();
            assert_eq!(block_stability_test(&example2(), &s), r.verdict == Verdict::Stable);
        }
    }

    #[test]
    fn report_json_shape() {
        let r = is_stable_set(&example1(), &set(2, &[1, 2])).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"set":[1,2],"verdict":"Stable","attractor":[5.0,5.0],"margin":5.0}"#
        );
    }
}
