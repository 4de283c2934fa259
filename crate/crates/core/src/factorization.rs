//! Semipositive factorizations `W = S_α·Y·X⁻¹` certifying a stable set.
//!
//! With `x = p_α` and `y = S_α·W·p_α > 0`, the matrices
//! `X = x·1ᵀ + ε·I` and `Y = y·1ᵀ + ε·S_α·W` satisfy `Y = S_α·W·X`, are
//! nonnegative and positive for small `ε`, and `X⁻¹·x = x / (k + ε) ≥ 0`.

use serde::Serialize;

use crate::error::{GlassError, Result};
use crate::index_set::IndexSet;
use crate::linalg::Matrix;
use crate::network::GlassNetwork;
use crate::stability::{is_stable_set, Verdict};

pub const DEFAULT_EPSILON: f64 = 0.5;
/// Smallest ε tried before giving up.
pub const MIN_EPSILON: f64 = 1e-12;
/// Per-entry tolerance for `S_α·Y·X⁻¹ = W`.
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-9;
pub const CONDITION_WARNING: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Factorization {
    pub target_set: IndexSet,
    pub epsilon: f64,
    pub x: Matrix,
    pub y: Matrix,
    pub x_inv: Matrix,
    /// `X⁻¹·p_α`, the semipositivity vector.
    pub x_inv_p: Vec<f64>,
    /// Largest entry of `|S_α·Y·X⁻¹ − W|`.
    pub residual: f64,
    /// 1-norm condition number of `X`.
    pub condition: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub ok: bool,
    pub violations: Vec<String>,
}

fn check_stable(net: &GlassNetwork, a: &IndexSet) -> Result<()> {
    let r = is_stable_set(net, a)?;
    if r.verdict != Verdict::Stable {
        return Err(GlassError::NotStable(*a));
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(GlassError::Precondition(format!("epsilon must be positive and finite, got {epsilon}")));
    }
    Ok(())
}

fn condition_number(x: &Matrix, x_inv: &Matrix) -> f64 {
    x.norm1() * x_inv.norm1()
}

/// `Y = y·1ᵀ + ε·A` for the largest `ε = start/2^j` making every entry's
/// sign `sign`, with `y = A·1`.
fn shrink_until<F>(start: f64, mut build: F) -> Result<(f64, Matrix)>
where
    F: FnMut(f64) -> (Matrix, bool),
{
    let mut eps = start;
    loop {
        let (y, ok) = build(eps);
        if ok {
            return Ok((eps, y));
        }
        eps /= 2.0;
        if eps < MIN_EPSILON {
            return Err(GlassError::EpsilonUnderflow(eps));
        }
    }
}

pub fn factorize(net: &GlassNetwork, a: &IndexSet, epsilon: f64) -> Result<Factorization> {
    check_epsilon(epsilon)?;
    check_stable(net, a)?;
    let n = net.dim();
    let w = net.weights().matrix();
    let s: Vec<f64> = (0..n).map(|i| a.sign_of(i)).collect();
    let p = a.code().as_f64();
    let sw = w.scale_rows(&s);
    let y_vec = sw.mul_vec(&p);
    let ones = vec![1.0; n];
    let (eps, y) = shrink_until(epsilon, |eps| {
        let y = Matrix::outer(&y_vec, &ones).add(&sw.scale(eps));
        let ok = y.iter().all(|&v| v > 0.0);
        (y, ok)
    })?;
    let x = Matrix::outer(&p, &ones).add(&Matrix::identity(n).scale(eps));
    let x_inv = x.inverse()?;
    let x_inv_p = x_inv.mul_vec(&p);
    let residual = y.mul(&x_inv).scale_rows(&s).max_abs_diff(w);
    let condition = condition_number(&x, &x_inv);
    let mut warnings = Vec::new();
    if eps != epsilon {
        warnings.push(format!("epsilon reduced from {epsilon} to {eps} to make Y positive"));
    }
    if condition > CONDITION_WARNING {
        warnings.push(format!("X is ill conditioned (condition number {condition:e})"));
    }
    Ok(Factorization { target_set: *a, epsilon: eps, x, y, x_inv, x_inv_p, residual, condition, warnings })
}

/// Checks every defining property of a factorization against `net`.
pub fn verify_factorization(f: &Factorization, net: &GlassNetwork) -> Verification {
    let mut violations = Vec::new();
    let n = net.dim();
    let a = &f.target_set;
    if a.dim() != n || f.x.rows() != n || f.y.rows() != n || f.x.cols() != n || f.y.cols() != n {
        return Verification { ok: false, violations: vec!["dimension mismatch".into()] };
    }
    if f.x.iter().any(|&v| v < 0.0) {
        violations.push("X not nonnegative".into());
    }
    if f.y.iter().any(|&v| v <= 0.0) {
        violations.push("Y not positive".into());
    }
    match f.x.inverse() {
        Err(_) => violations.push("X singular".into()),
        Ok(x_inv) => {
            let s: Vec<f64> = (0..n).map(|i| a.sign_of(i)).collect();
            let p = a.code().as_f64();
            let w_hat = f.y.mul(&x_inv).scale_rows(&s);
            if w_hat.max_abs_diff(net.weights().matrix()) > RECONSTRUCTION_TOLERANCE {
                violations.push("reconstruction tolerance".into());
            }
            let v = x_inv.mul_vec(&p);
            if v.iter().any(|&e| e < -RECONSTRUCTION_TOLERANCE) || !v.iter().any(|&e| e > 0.0) {
                violations.push("X⁻¹·p not seminonnegative".into());
            }
            let signed = w_hat.scale_rows(&s).mul_vec(&p);
            if signed.iter().any(|&e| e <= 0.0) {
                violations.push("S·(Y·X⁻¹)·p not positive".into());
            }
        }
    }
    Verification { ok: violations.is_empty(), violations }
}

/// One block `W[rows, cols] = Y·X⁻¹` with `X = 1·1ᵀ + ε·I`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockFactor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub x: Matrix,
    pub y: Matrix,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockFactorization {
    pub target_set: IndexSet,
    pub epsilon: f64,
    /// `W[α] = Y_α·X_α⁻¹` with `Y_α` positive.
    pub inner: BlockFactor,
    /// `W[αᶜ, α] = Y_αᶜ·X_αᶜ⁻¹` with `Y_αᶜ` negative; `None` when `αᶜ = ∅`.
    pub outer: Option<BlockFactor>,
    pub complement_empty: bool,
}

pub fn factorize_blocks(net: &GlassNetwork, a: &IndexSet, epsilon: f64) -> Result<BlockFactorization> {
    check_epsilon(epsilon)?;
    check_stable(net, a)?;
    let w = net.weights().matrix();
    let cols: Vec<usize> = a.positions().collect();
    let rest: Vec<usize> = a.complement().positions().collect();
    let k = cols.len();
    let inner_w = w.select(&cols, &cols);
    let outer_w = w.select(&rest, &cols);
    let ones = vec![1.0; k];
    let inner_sum = inner_w.mul_vec(&ones);
    let outer_sum = outer_w.mul_vec(&ones);
    let (eps, _) = shrink_until(epsilon, |eps| {
        let yi = Matrix::outer(&inner_sum, &ones).add(&inner_w.scale(eps));
        let yo = Matrix::outer(&outer_sum, &ones).add(&outer_w.scale(eps));
        let ok = yi.iter().all(|&v| v > 0.0) && yo.iter().all(|&v| v < 0.0);
        (yi, ok)
    })?;
    let x = Matrix::outer(&ones, &ones).add(&Matrix::identity(k).scale(eps));
    let x_inv = x.inverse()?;
    let block = |rows: &[usize], sub: &Matrix, sums: &[f64]| {
        let y = Matrix::outer(sums, &ones).add(&sub.scale(eps));
        let residual = y.mul(&x_inv).max_abs_diff(sub);
        BlockFactor {
            rows: rows.iter().map(|r| r + 1).collect(),
            cols: cols.iter().map(|c| c + 1).collect(),
            x: x.clone(),
            y,
            residual,
        }
    };
    let inner = block(&cols, &inner_w, &inner_sum);
    let outer = if rest.is_empty() { None } else { Some(block(&rest, &outer_w, &outer_sum)) };
    Ok(BlockFactorization { target_set: *a, epsilon: eps, inner, complement_empty: outer.is_none(), outer })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::WeightMatrix;

    fn example2() -> GlassNetwork {
        let w = WeightMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        GlassNetwork::embed_input(&w, &[-1.0, -1.0]).unwrap()
    }

    fn full(n: usize) -> IndexSet {
        IndexSet::full(n).unwrap()
    }

    fn half(rows: &[[f64; 3]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|v| v / 2.0).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn worked_three_unit_example() {
        let f = factorize(&example2(), &full(3), 0.5).unwrap();
        assert_eq!(f.x, half(&[[3.0, 2.0, 2.0], [2.0, 3.0, 2.0], [2.0, 2.0, 3.0]]));
        assert_eq!(f.y, half(&[[4.0, 2.0, 1.0], [2.0, 4.0, 1.0], [2.0, 2.0, 3.0]]));
        for v in &f.x_inv_p {
            assert!((v - 2.0 / 7.0).abs() < 1e-12);
        }
        assert!(f.residual < 1e-12);
        assert!(f.warnings.is_empty());
        assert!(verify_factorization(&f, &example2()).ok);
    }

    #[test]
    fn scalar_case() {
        let net = GlassNetwork::new(WeightMatrix::from_rows(&[vec![2.0]]).unwrap()).unwrap();
        let f = factorize(&net, &full(1), 1.0).unwrap();
        assert_eq!(f.x.to_rows(), vec![vec![2.0]]);
        assert_eq!(f.y.to_rows(), vec![vec![4.0]]);
        assert_eq!(f.y.mul(&f.x_inv).to_rows(), vec![vec![2.0]]);
    }

    #[test]
    fn verification_catches_broken_invariants() {
        let net = example2();
        let f = factorize(&net, &full(3), 0.5).unwrap();
        let mut neg = f.clone();
        neg.y[(0, 1)] = -neg.y[(0, 1)];
        let v = verify_factorization(&neg, &net);
        assert!(!v.ok);
        assert!(v.violations.iter().any(|s| s == "Y not positive"));
        let mut off = f.clone();
        off.y[(1, 1)] += 1e-6;
        let v = verify_factorization(&off, &net);
        assert_eq!(v.violations, vec!["reconstruction tolerance".to_string()]);
    }

    #[test]
    fn unstable_sets_are_rejected() {
        let net = example2();
        let a = IndexSet::from_one_based(3, &[1, 2]).unwrap();
        assert!(factorize(&net, &a, 0.5).is_err());
        let b = IndexSet::from_one_based(3, &[1, 3]).unwrap();
        assert!(factorize(&net, &b, 0.0).is_err());
    }

    #[test]
    fn epsilon_shrinks_when_needed() {
        let net = GlassNetwork::new(WeightMatrix::from_rows(&[vec![12.0, -10.0], vec![-1.0, 2.0]]).unwrap()).unwrap();
        let a = full(2);
        let f = factorize(&net, &a, 0.5).unwrap();
        assert!(f.epsilon < 0.5);
        assert!(!f.warnings.is_empty());
        assert!(verify_factorization(&f, &net).ok);
    }

    #[test]
    fn blocks_for_examples() {
        let ex1 = GlassNetwork::new(WeightMatrix::from_rows(&[vec![1.0, 4.0], vec![2.0, 3.0]]).unwrap()).unwrap();
        let b = factorize_blocks(&ex1, &full(2), 0.5).unwrap();
        assert!(b.complement_empty && b.outer.is_none());
        // x = 1, y = W·1 = (5, 5): Y = [[5.5, 7], [6, 6.5]].
        assert_eq!(b.inner.y.to_rows(), vec![vec![5.5, 7.0], vec![6.0, 6.5]]);
        assert!(b.inner.residual < 1e-12);

        assert!(factorize_blocks(&example2(), &full(3), 0.5).unwrap().outer.is_none());

        let a = IndexSet::from_one_based(3, &[1, 3]).unwrap();
        let b = factorize_blocks(&example2(), &a, 0.5).unwrap();
        assert_eq!(b.inner.rows, vec![1, 3]);
        let outer = b.outer.unwrap();
        assert_eq!(outer.rows, vec![2]);
        assert!(outer.y.iter().all(|&v| v < 0.0));
        assert!(outer.residual < 1e-12);
    }
}
