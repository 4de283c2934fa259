//! Seeded brute-force audits of the closed forms and theorems.
//!
//! Random weights are multiples of 1/16 in [−4, 4], so every column sum and
//! product the checks form is exact in double precision and the predicates
//! are compared without rounding noise.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coupling::{compose_check, coupling_check, decompose_check, triple_coupling_check};
use crate::dynamics::{simulate, SimConfig, Termination};
use crate::error::{GlassError, Result};
use crate::factorization::{factorize, verify_factorization, DEFAULT_EPSILON};
use crate::index_set::{all_subsets, IndexSet};
use crate::linalg::WeightMatrix;
use crate::network::{ConstraintCheck, GlassNetwork, InputMode};
use crate::signs::{audit_counts, CountDiscrepancy, CountMode, FamilyKind, SignPattern, StableFamily};
use crate::stability::{is_stable_set, stable_sets, stable_sets_output_model, Verdict};

/// Largest dimension the theorem and equivalence audits accept.
pub const AUDIT_CAP: usize = 10;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_weight<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(-64i32..=64) as f64 / 16.0
}

pub fn random_weights<R: Rng>(rng: &mut R, n: usize) -> WeightMatrix {
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| random_weight(rng)).collect()).collect();
    WeightMatrix::from_rows(&rows).expect("finite square matrix")
}

/// A random network satisfying the output constraint, by rejection.
pub fn random_network<R: Rng>(rng: &mut R, n: usize, mode: InputMode) -> GlassNetwork {
    loop {
        let net = match mode {
            InputMode::Vanishing => GlassNetwork::new(random_weights(rng, n)),
            InputMode::EmbeddedNonvanishing => {
                let w = random_weights(rng, n - 1);
                let mu: Vec<f64> = (0..n - 1).map(|_| random_weight(rng)).collect();
                GlassNetwork::embed_input_with(&w, &mu, ConstraintCheck::Enforce)
            }
        };
        if let Ok(net) = net {
            return net;
        }
    }
}

pub fn random_nonempty_subset<R: Rng>(rng: &mut R, n: usize) -> IndexSet {
    loop {
        let s = IndexSet::from_positions(n, (0..n).filter(|_| rng.gen_bool(0.5))).expect("n within range");
        if !s.is_empty() {
            return s;
        }
    }
}

/// A random well-formed family over `m` coordinates. With `allow_empty_first`
/// the first member may be empty (used for families on the input hyperplane).
fn random_sets<R: Rng>(rng: &mut R, m: usize, kind: FamilyKind, allow_empty_first: bool) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    let lo = usize::from(!allow_empty_first);
    match kind {
        FamilyKind::Single => {
            let k = rng.gen_range(lo..=m);
            vec![perm[..k].to_vec()]
        }
        FamilyKind::Disjoint => {
            let parts = rng.gen_range(1..=m.max(1)).min(m.max(1));
            if m == 0 {
                return vec![vec![]];
            }
            // each coordinate goes to one part or to none
            let mut sets = vec![Vec::new(); parts];
            for (idx, &c) in perm.iter().enumerate() {
                if idx < parts {
                    sets[idx].push(c);
                } else if let Some(slot) = (0..=parts).collect::<Vec<_>>().choose(rng).copied() {
                    if slot < parts {
                        sets[slot].push(c);
                    }
                }
            }
            sets
        }
        FamilyKind::Nested => {
            let mut sizes: Vec<usize> = (lo..=m).filter(|_| rng.gen_bool(0.5)).collect();
            if sizes.is_empty() {
                sizes.push(rng.gen_range(lo..=m).max(lo));
            }
            sizes.iter().map(|&k| perm[..k].to_vec()).collect()
        }
    }
}

pub fn random_family<R: Rng>(rng: &mut R, n: usize, kind: FamilyKind) -> StableFamily {
    let sets = random_sets(rng, n, kind, false)
        .into_iter()
        .map(|s| IndexSet::from_positions(n, s).expect("within range"))
        .collect();
    StableFamily::new(kind, sets).expect("generator builds well-formed families")
}

/// A random family whose members all contain the clamped last unit.
pub fn random_hyperplane_family<R: Rng>(rng: &mut R, n: usize, kind: FamilyKind) -> StableFamily {
    let sets = random_sets(rng, n - 1, kind, kind != FamilyKind::Disjoint)
        .into_iter()
        .map(|s| IndexSet::from_positions(n, s).expect("within range").with(n - 1))
        .collect();
    StableFamily::on_hyperplane(kind, sets).expect("generator builds well-formed families")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleFailure {
    pub module: String,
    pub inputs: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub scope: String,
    pub checks: usize,
    pub failures: Vec<OracleFailure>,
}

impl OracleReport {
    fn new(scope: &str) -> Self {
        OracleReport { scope: scope.into(), checks: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(
        &mut self,
        ok: bool,
        module: &str,
        inputs: impl FnOnce() -> String,
        expected: impl ToString,
        got: impl ToString,
    ) {
        self.checks += 1;
        if !ok {
            self.failures.push(OracleFailure {
                module: module.into(),
                inputs: inputs(),
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
    }

    fn error(&mut self, module: &str, inputs: String, e: GlassError) {
        self.checks += 1;
        self.failures.push(OracleFailure {
            module: module.into(),
            inputs,
            expected: "no error".into(),
            got: e.to_string(),
        });
    }
}

fn describe(net: &GlassNetwork) -> String {
    format!("W={:?}", net.weights().matrix().to_rows())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountAudit {
    pub rows_checked: usize,
    pub discrepancies: Vec<CountDiscrepancy>,
}

/// Closed form against enumeration for `families` random families of every
/// kind and every `n` in `1..=max_n` (from 2 for `Nonvanishing`).
pub fn audit_count_formulas(max_n: usize, families: usize, mode: CountMode, seed: u64) -> Result<CountAudit> {
    let mut rng = rng(seed);
    let mut rows_checked = 0;
    let mut discrepancies = Vec::new();
    let start = if mode == CountMode::Nonvanishing { 2 } else { 1 };
    for n in start..=max_n {
        for kind in [FamilyKind::Single, FamilyKind::Disjoint, FamilyKind::Nested] {
            for _ in 0..families {
                let fam = if mode == CountMode::Nonvanishing {
                    random_hyperplane_family(&mut rng, n, kind)
                } else {
                    random_family(&mut rng, n, kind)
                };
                rows_checked += if mode == CountMode::Nonvanishing { n - 1 } else { n };
                discrepancies.extend(audit_counts(&fam, n, mode)?);
            }
        }
    }
    Ok(CountAudit { rows_checked, discrepancies })
}

pub fn oracle_counts(max_n: usize, families: usize, modes: &[CountMode], seed: u64) -> Result<OracleReport> {
    let mut report = OracleReport::new("counts");
    for &mode in modes {
        let audit = audit_count_formulas(max_n, families, mode, seed)?;
        report.checks += audit.rows_checked;
        for d in audit.discrepancies {
            report.failures.push(OracleFailure {
                module: "signs".into(),
                inputs: format!(
                    "{} {} family {:?}, n={}, row {}",
                    d.mode,
                    d.kind,
                    d.sets.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    d.n,
                    d.row
                ),
                expected: d.oracle.to_string(),
                got: d.formula.to_string(),
            });
        }
    }
    Ok(report)
}

fn check_dim(n: usize) -> Result<()> {
    if !(2..=AUDIT_CAP).contains(&n) {
        return Err(GlassError::EnumerationTooLarge { n, cap: AUDIT_CAP });
    }
    Ok(())
}

/// Composition, decomposition, pairwise and triple coupling, and the
/// factorization round trip, on `trials` random networks with `2 ≤ n' ≤ n`.
pub fn oracle_theorems(n: usize, trials: usize, seed: u64) -> Result<OracleReport> {
    check_dim(n)?;
    let mut rng = rng(seed);
    let mut report = OracleReport::new("theorems");
    for _ in 0..trials {
        let dim = rng.gen_range(2..=n);
        let net = random_network(&mut rng, dim, InputMode::Vanishing);
        theorem_checks(&net, &mut report, &mut rng)?;
    }
    Ok(report)
}

fn theorem_checks<R: Rng>(net: &GlassNetwork, report: &mut OracleReport, rng: &mut R) -> Result<()> {
    let n = net.dim();
    let stable = stable_sets(net)?;
    let nonempty: Vec<IndexSet> = all_subsets(n)?.filter(|s| !s.is_empty()).collect();
    let run =
        |report: &mut OracleReport, what: &str, inputs: String, r: Result<crate::coupling::CouplingVerdict>| match r {
            Ok(v) => report.check(v.holds == v.recomputed, what, || inputs.clone(), v.recomputed, v.holds),
            Err(e) => report.error(what, inputs, e),
        };
    for a in &stable {
        for b in &stable {
            if a.is_disjoint(b) {
                run(report, "coupling/compose", format!("{} a={a} b={b}", describe(net)), compose_check(net, a, b));
            }
        }
        for sub in nonempty.iter().filter(|s| s.is_proper_subset(a)) {
            run(report, "coupling/decompose", format!("{} g={a} a={sub}", describe(net)), decompose_check(net, a, sub));
        }
        for b in &nonempty {
            run(report, "coupling/couple", format!("{} a={a} b={b}", describe(net)), coupling_check(net, a, b));
        }
        match factorize(net, a, DEFAULT_EPSILON) {
            Ok(f) => {
                let v = verify_factorization(&f, net);
                report.check(
                    v.ok,
                    "factorization",
                    || format!("{} a={a}", describe(net)),
                    "verified",
                    v.violations.join("; "),
                );
            }
            Err(e) => report.error("factorization", format!("{} a={a}", describe(net)), e),
        }
    }
    // One triple per stable pair keeps the cost linear in the subset count.
    for a in &stable {
        for b in &stable {
            let g = nonempty[rng.gen_range(0..nonempty.len())];
            run(
                report,
                "coupling/triple",
                format!("{} a={a} b={b} g={g}", describe(net)),
                triple_coupling_check(net, a, b, &g),
            );
        }
    }
    // Unstable sets must not factorize.
    for a in nonempty.iter().filter(|s| !stable.contains(s)) {
        let r = factorize(net, a, DEFAULT_EPSILON);
        report.check(
            matches!(r, Err(GlassError::NotStable(_))),
            "factorization",
            || format!("{} a={a}", describe(net)),
            "not-stable error",
            format!("{:?}", r.map(|f| f.epsilon)),
        );
    }
    Ok(())
}

fn worked_examples() -> Vec<GlassNetwork> {
    let w1 = WeightMatrix::from_rows(&[vec![1.0, 4.0], vec![2.0, 3.0]]).expect("valid");
    let w2 = WeightMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]).expect("valid");
    vec![
        GlassNetwork::new(w1).expect("constraint holds"),
        GlassNetwork::embed_input(&w2, &[-1.0, -1.0]).expect("constraint holds"),
    ]
}

/// The output-nonlinearity model has the same stable sets, on the two worked
/// examples and on `trials` random networks with `2 ≤ n' ≤ n`.
pub fn oracle_equivalence(n: usize, trials: usize, seed: u64) -> Result<OracleReport> {
    check_dim(n)?;
    let mut rng = rng(seed);
    let mut report = OracleReport::new("equivalence");
    let mut nets = worked_examples();
    for t in 0..trials {
        let dim = rng.gen_range(2..=n);
        let mode = if t % 2 == 0 { InputMode::Vanishing } else { InputMode::EmbeddedNonvanishing };
        nets.push(random_network(&mut rng, dim, mode));
    }
    for net in &nets {
        let a = stable_sets(net)?;
        let b = stable_sets_output_model(net)?;
        let fmt = |v: &[IndexSet]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        report.check(a == b, "stability/equivalence", || describe(net), fmt(&a), fmt(&b));
    }
    Ok(report)
}

/// Simulates `initial_states` random starts on `trials` random networks with
/// `1 ≤ n' ≤ n`: converged runs must end exactly on an enumerated stable
/// attractor, and the first segment must match the closed-form flow.
pub fn oracle_dynamics(n: usize, trials: usize, initial_states: usize, seed: u64) -> Result<OracleReport> {
    if n == 0 || n > AUDIT_CAP {
        return Err(GlassError::EnumerationTooLarge { n, cap: AUDIT_CAP });
    }
    let mut rng = rng(seed);
    let mut report = OracleReport::new("dynamics");
    let config = SimConfig::default();
    for t in 0..trials {
        let dim = rng.gen_range(1..=n);
        let mode = if dim >= 2 && t % 2 == 1 { InputMode::EmbeddedNonvanishing } else { InputMode::Vanishing };
        let net = random_network(&mut rng, dim, mode);
        let stable = stable_sets(&net)?;
        for _ in 0..initial_states {
            let mut x0: Vec<f64> = (0..dim).map(|_| rng.gen_range(-6.0..6.0)).collect();
            if mode == InputMode::EmbeddedNonvanishing {
                x0[dim - 1] = 1.0;
            }
            let inputs = || format!("{} x0={x0:?}", describe(&net));
            let tr = match simulate(&net, &x0, &config) {
                Ok(tr) => tr,
                Err(e) => {
                    report.error("dynamics", inputs(), e);
                    continue;
                }
            };
            if let Termination::ConvergedToFixedPoint(part) = &tr.termination {
                let known = if part.is_empty() { mode == InputMode::Vanishing } else { stable.contains(part) };
                report.check(known, "dynamics/converged", inputs, "an enumerated stable set", part);
                let target = net.attractor_point(part);
                let d = tr.final_state.iter().zip(&target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                report.check(d <= 1e-9, "dynamics/final", inputs, "within 1e-9 of W_α", d);
            }
            let seg = &tr.segments[0];
            let w = net.attractor_point(&seg.part);
            let span = if seg.duration > 0.0 { seg.duration } else { 1.0 };
            for k in 1..=10 {
                let s = span * k as f64 / 11.0;
                let got = seg.state_at(s);
                let err = (0..dim).map(|i| (got[i] - (w[i] + (x0[i] - w[i]) * (-s).exp())).abs()).fold(0.0, f64::max);
                report.check(err <= 1e-12, "dynamics/segment", inputs, "closed form within 1e-12", err);
            }
        }
    }
    Ok(report)
}

/// Sign-pattern theorem checks; see [`oracle_signs`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignAudit {
    pub witness_cases: usize,
    pub witness_failures: usize,
    pub sufficiency_patterns: usize,
    pub sufficiency_failures: usize,
    pub counterexample_patterns: usize,
    pub counterexample_failures: usize,
    pub minimality_checks: usize,
    pub minimality_failures: usize,
}

impl SignAudit {
    pub fn passed(&self) -> bool {
        self.witness_failures + self.sufficiency_failures + self.counterexample_failures + self.minimality_failures == 0
    }
}

fn random_pattern<R: Rng>(rng: &mut R, n: usize) -> SignPattern {
    let rows: Vec<Vec<i8>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1i8..=1)).collect()).collect();
    SignPattern::from_rows(&rows).expect("valid entries")
}

/// A random pattern that is sign stable for `a`: in `a`'s columns, row `i`
/// only uses `0` and `s_a^i`, with at least one `s_a^i`.
pub fn random_sign_stable_pattern<R: Rng>(rng: &mut R, a: &IndexSet) -> SignPattern {
    let n = a.dim();
    let cols: Vec<usize> = a.positions().collect();
    let mut p = random_pattern(rng, n);
    for i in 0..n {
        let s = if a.contains(i) { 1 } else { -1 };
        for &j in &cols {
            p.set(i, j, if rng.gen_bool(0.5) { s } else { 0 });
        }
        p.set(i, cols[rng.gen_range(0..cols.len())], s);
    }
    p
}

fn magnitudes<R: Rng>(rng: &mut R, p: &SignPattern, f: impl Fn(&mut R, usize, usize) -> f64) -> WeightMatrix {
    let n = p.dim();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| p.get(i, j) as f64 * f(rng, i, j)).collect()).collect();
    WeightMatrix::from_rows(&rows).expect("finite")
}

fn stable_in(w: WeightMatrix, a: &IndexSet) -> Result<bool> {
    let net = GlassNetwork::new_unchecked(w, InputMode::Vanishing)?;
    Ok(is_stable_set(&net, a)?.verdict == Verdict::Stable)
}

/// (a) witnesses for allowed patterns, (b) sign stability against random
/// positive magnitudes plus directed counterexamples when it fails, and
/// (c) minimality: exhaustive over all patterns for `n ≤ 3`, and over all
/// sets and subsets of random sign-stable patterns for `4 ≤ n ≤ max_n`.
pub fn oracle_signs(
    witness_cases: usize,
    sufficiency_patterns: usize,
    draws: usize,
    max_n: usize,
    seed: u64,
) -> Result<SignAudit> {
    let mut rng = rng(seed);
    let mut audit = SignAudit {
        witness_cases: 0,
        witness_failures: 0,
        sufficiency_patterns: 0,
        sufficiency_failures: 0,
        counterexample_patterns: 0,
        counterexample_failures: 0,
        minimality_checks: 0,
        minimality_failures: 0,
    };

    while audit.witness_cases < witness_cases {
        let n = rng.gen_range(1..=6);
        let p = random_pattern(&mut rng, n);
        let a = random_nonempty_subset(&mut rng, n);
        if !p.allows_stable(&a) {
            continue;
        }
        let witness: Vec<usize> = (0..n)
            .map(|i| {
                let s = if a.contains(i) { 1 } else { -1 };
                a.positions().find(|&j| p.get(i, j) == s).expect("allowed pattern has a witness")
            })
            .collect();
        let big = n as f64;
        let small = 1.0 / (2.0 * n as f64);
        let w = magnitudes(&mut rng, &p, |_, i, j| if witness[i] == j { big } else { small });
        audit.witness_cases += 1;
        if !stable_in(w, &a)? {
            audit.witness_failures += 1;
        }
    }

    while audit.sufficiency_patterns < sufficiency_patterns {
        let n = rng.gen_range(1..=6);
        let a = random_nonempty_subset(&mut rng, n);
        let p = random_sign_stable_pattern(&mut rng, &a);
        debug_assert!(p.is_sign_stable(&a));
        audit.sufficiency_patterns += 1;
        let mut failed = false;
        for _ in 0..draws {
            let w = magnitudes(&mut rng, &p, |r, _, _| r.gen_range(0.01..10.0));
            failed |= !stable_in(w, &a)?;
        }
        if failed {
            audit.sufficiency_failures += 1;
        }
        // Break sign stability at one entry, then load that entry.
        let mut q = p.clone();
        let i = rng.gen_range(0..n);
        let j = a.positions().nth(rng.gen_range(0..a.len())).expect("nonempty");
        let s: i8 = if a.contains(i) { 1 } else { -1 };
        q.set(i, j, -s);
        if q.is_sign_stable(&a) {
            continue;
        }
        audit.counterexample_patterns += 1;
        let other: f64 = a.positions().filter(|&c| c != j).map(|c| q.get(i, c).abs() as f64).sum();
        let w = magnitudes(&mut rng, &q, |_, r, c| if (r, c) == (i, j) { other + 1.0 } else { 1.0 });
        if stable_in(w, &a)? {
            audit.counterexample_failures += 1;
        }
    }

    let minimality = |p: &SignPattern, a: &IndexSet, audit: &mut SignAudit| {
        if !p.requires_minimal_stability(a) {
            return;
        }
        for b in all_subsets(a.dim()).expect("small n") {
            if !b.is_empty() && b.is_proper_subset(a) {
                audit.minimality_checks += 1;
                if p.allows_stable(&b) {
                    audit.minimality_failures += 1;
                }
            }
        }
    };
    for n in 1..=max_n.min(3) {
        let total = 3usize.pow((n * n) as u32);
        for mut code in 0..total {
            let mut p = SignPattern::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    p.set(i, j, (code % 3) as i8 - 1);
                    code /= 3;
                }
            }
            for a in all_subsets(n)?.filter(|s| !s.is_empty()) {
                minimality(&p, &a, &mut audit);
            }
        }
    }
    for n in 4..=max_n {
        for a in all_subsets(n)?.filter(|s| !s.is_empty()) {
            for _ in 0..8 {
                let p = random_sign_stable_pattern(&mut rng, &a);
                minimality(&p, &a, &mut audit);
            }
        }
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_well_formed_and_seeded() {
        let mut r = rng(3);
        for n in 1..=6 {
            for kind in [FamilyKind::Single, FamilyKind::Disjoint, FamilyKind::Nested] {
                let f = random_family(&mut r, n, kind);
                assert_eq!(f.dim(), n);
                if n >= 2 {
                    let h = random_hyperplane_family(&mut r, n, kind);
                    assert!(h.sets().iter().all(|s| s.contains(n - 1)));
                }
            }
        }
        let a = random_weights(&mut rng(9), 4);
        let b = random_weights(&mut rng(9), 4);
        assert_eq!(a, b);
    }

    #[test]
    fn small_audits_pass() {
        assert!(oracle_theorems(4, 30, 7).unwrap().passed());
        assert!(oracle_equivalence(4, 10, 7).unwrap().passed());
        assert!(oracle_dynamics(4, 20, 5, 7).unwrap().passed());
        assert!(oracle_signs(50, 10, 50, 4, 7).unwrap().passed());
    }

    #[test]
    fn count_audit_flags_only_the_nested_nonvanishing_form() {
        for mode in [CountMode::Unconstrained, CountMode::Vanishing] {
            assert!(audit_count_formulas(5, 20, mode, 1).unwrap().discrepancies.is_empty());
        }
        let nv = audit_count_formulas(5, 20, CountMode::Nonvanishing, 1).unwrap();
        assert!(nv.discrepancies.iter().all(|d| d.kind == FamilyKind::Nested));
    }
}
