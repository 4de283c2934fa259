//! Bound and allowed-fraction curves as functions of set size.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{GlassError, Result};
use crate::index_set::IndexSet;

use super::counting::{count_allowed_row_signatures, signature_space, CountMode};
use super::family::{ei_bounds, FamilyKind, StableFamily};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub k: usize,
    pub e_bound: usize,
    pub i_bound: usize,
    /// Allowed row signatures over all candidate rows, averaged over rows.
    pub allowed_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveSpec {
    /// One set `{1..k}` for `k = 1..n`.
    Single,
    /// `sets` disjoint blocks of size `k` for `k = 1..n/sets`.
    Disjoint { sets: usize },
    /// `{1..k1} ⊂ {1..k}` for `k = k1+1..n`.
    Nested { k1: usize },
}

fn prefix(n: usize, from: usize, to: usize) -> Result<IndexSet> {
    IndexSet::from_positions(n, from..to)
}

fn mean_fraction(fam: &StableFamily, n: usize, mode: CountMode) -> Result<f64> {
    let space = signature_space(n, mode).to_f64().unwrap_or(f64::INFINITY);
    let mut total = BigInt::from(0);
    for row in 1..=n {
        total += count_allowed_row_signatures(fam, n, row, mode)?;
    }
    Ok(total.to_f64().unwrap_or(f64::INFINITY) / (space * n as f64))
}

/// One row per admissible size. `mode` must be `Unconstrained` or `Vanishing`.
pub fn bound_curve(spec: CurveSpec, n: usize, mode: CountMode) -> Result<Vec<CurvePoint>> {
    if mode == CountMode::Nonvanishing {
        return Err(GlassError::Precondition("curves are tabulated for unconstrained or vanishing rows".into()));
    }
    if n == 0 {
        return Err(GlassError::Precondition("n must be positive".into()));
    }
    let mut points = Vec::new();
    let mut push = |fam: StableFamily, k: usize| -> Result<()> {
        let b = ei_bounds(&fam, n)?;
        points.push(CurvePoint {
            k,
            e_bound: b.min_excitatory,
            i_bound: b.min_inhibitory,
            allowed_fraction: mean_fraction(&fam, n, mode)?,
        });
        Ok(())
    };
    match spec {
        CurveSpec::Single => {
            for k in 1..=n {
                push(StableFamily::single(prefix(n, 0, k)?)?, k)?;
            }
        }
        CurveSpec::Disjoint { sets } => {
            if sets == 0 || sets > n {
                return Err(GlassError::Precondition(format!("need 1 ≤ sets ≤ n, got {sets}")));
            }
            for k in 1..=n / sets {
                let members = (0..sets).map(|m| prefix(n, m * k, (m + 1) * k)).collect::<Result<Vec<_>>>()?;
                push(StableFamily::new(FamilyKind::Disjoint, members)?, k)?;
            }
        }
        CurveSpec::Nested { k1 } => {
            if k1 == 0 || k1 > n {
                return Err(GlassError::Precondition(format!("need 1 ≤ k1 ≤ n, got {k1}")));
            }
            for k in k1 + 1..=n {
                let fam = StableFamily::new(FamilyKind::Nested, vec![prefix(n, 0, k1)?, prefix(n, 0, k)?])?;
                push(fam, k)?;
            }
        }
    }
    Ok(points)
}

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("k,E_bound,I_bound,allowed_fraction\n");
    for p in points {
        out.push_str(&format!("{},{},{},{}\n", p.k, p.e_bound, p.i_bound, p.allowed_fraction));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_curve_bounds() {
        let c = bound_curve(CurveSpec::Single, 5, CountMode::Unconstrained).unwrap();
        assert_eq!(c.len(), 5);
        for p in &c {
            assert_eq!((p.e_bound, p.i_bound), (p.k, 5 - p.k));
            let expected = 1.0 - (2.0f64 / 3.0).powi(p.k as i32);
            assert!((p.allowed_fraction - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn disjoint_and_nested_curves() {
        let d = bound_curve(CurveSpec::Disjoint { sets: 2 }, 6, CountMode::Unconstrained).unwrap();
        assert_eq!(
            d.iter().map(|p| (p.k, p.e_bound, p.i_bound)).collect::<Vec<_>>(),
            vec![(1, 2, 10), (2, 4, 8), (3, 6, 6)]
        );
        let nested = bound_curve(CurveSpec::Nested { k1: 2 }, 4, CountMode::Vanishing).unwrap();
        assert_eq!(nested.iter().map(|p| (p.k, p.e_bound, p.i_bound)).collect::<Vec<_>>(), vec![(3, 3, 2), (4, 4, 2)]);
        assert!(bound_curve(CurveSpec::Single, 3, CountMode::Nonvanishing).is_err());
    }

    #[test]
    fn csv_header() {
        let c = bound_curve(CurveSpec::Single, 1, CountMode::Unconstrained).unwrap();
        let csv = curve_csv(&c);
        assert!(csv.starts_with("k,E_bound,I_bound,allowed_fraction\n1,1,0,"));
    }
}
