//! Membership test for candidate points of the projection: specialize the x
//! block at the point and decide whether the degree-b piece of the
//! specialized ideal fills the whole space of y-forms.

use crate::bipoly::{monomials_of, BiDegree, BiSystem, Monomial, RingError};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{DenseMatrix, LinAlgError};
use crate::numeric::{czero, singular_values};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("numeric verification needs rational input coefficients")]
    RationalCoefficientsRequired,
    #[error("point has wrong length: expected {expected}, got {found}")]
    WrongLength { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    InProjection,
    NotInProjection,
}

/// Either the exact corank or the singular-value evidence: for deficient
/// numeric matrices the largest discarded ratio, for full-rank ones the
/// smallest kept ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Margin {
    ExactDeficiency(usize),
    SingularValueRatio(f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub point: Vec<String>,
    pub b_used: usize,
    pub rank: usize,
    pub full_rank: usize,
    pub verdict: Verdict,
    pub margin: Margin,
}

/// The y-degree at which the specialization test is decisive:
/// sum of generator y-degrees minus m, clamped at 0.
pub fn verification_degree(sys: &BiSystem) -> usize {
    let sum_b: isize = sys.degrees().iter().map(|d| d.b as isize).sum();
    (sum_b - sys.m as isize).max(0) as usize
}

fn verdict_of(rank: usize, full: usize) -> Verdict {
    if rank < full {
        Verdict::InProjection
    } else {
        Verdict::NotInProjection
    }
}

/// Exact membership test at the stated degree (or `b_override`): the point
/// lies in the projection iff the specialized ideal misses some y-form.
pub fn verify_exact(
    sys: &BiSystem,
    xi: &[Scalar],
    b_override: Option<usize>,
) -> Result<MembershipReport, VerifyError> {
    if xi.len() != sys.n + 1 {
        return Err(VerifyError::WrongLength { expected: sys.n + 1, found: xi.len() });
    }
    let b = b_override.unwrap_or_else(|| verification_degree(sys));
    let xi = crate::bipoly::normalize_point(xi)?;
    let columns = monomials_of(BiDegree::new(0, b), sys.n, sys.m);
    let col_index: HashMap<&Monomial, usize> =
        columns.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (g, gdeg) in sys.generators().iter().zip(sys.degrees()) {
        if gdeg.b > b {
            continue;
        }
        let spec = g.specialize_x(&xi)?;
        if spec.is_zero() {
            continue;
        }
        for u in monomials_of(BiDegree::new(0, b - gdeg.b), sys.n, sys.m) {
            let prod = spec.mul_monomial(&u);
            let mut row = vec![sys.field.zero(); columns.len()];
            for (mo, c) in prod.terms() {
                row[col_index[mo]] = c.clone();
            }
            rows.push(row);
        }
    }
    let full = columns.len();
    let rank = if rows.is_empty() {
        0
    } else {
        DenseMatrix::from_rows(rows, full, sys.field).rank()?
    };
    Ok(MembershipReport {
        point: xi.iter().map(|c| c.to_string()).collect(),
        b_used: b,
        rank,
        full_rank: full,
        verdict: verdict_of(rank, full),
        margin: Margin::ExactDeficiency(full - rank),
    })
}

/// Numeric membership test for an approximate (possibly complex) point. The
/// rank contract is the relative singular-value cutoff sigma_i/sigma_1 >= tol.
pub fn verify_numeric(
    sys: &BiSystem,
    xi: &[Complex64],
    tol: f64,
    b_override: Option<usize>,
) -> Result<MembershipReport, VerifyError> {
    if let FieldSpec::PrimeField(_) = sys.field {
        return Err(VerifyError::RationalCoefficientsRequired);
    }
    if xi.len() != sys.n + 1 {
        return Err(VerifyError::WrongLength { expected: sys.n + 1, found: xi.len() });
    }
    let b = b_override.unwrap_or_else(|| verification_degree(sys));
    let columns = monomials_of(BiDegree::new(0, b), sys.n, sys.m);
    let col_index: HashMap<&Monomial, usize> =
        columns.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (g, gdeg) in sys.generators().iter().zip(sys.degrees()) {
        if gdeg.b > b {
            continue;
        }
        // specialize the x block in floats
        let mut spec: HashMap<Vec<u32>, Complex64> = HashMap::new();
        for (mo, c) in g.terms() {
            let mut v = Complex64::new(c.to_f64(), 0.0);
            for (i, &e) in mo.xexp.iter().enumerate() {
                for _ in 0..e {
                    v *= xi[i];
                }
            }
            *spec.entry(mo.yexp.clone()).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        if spec.values().all(|v| v.norm() == 0.0) {
            continue;
        }
        for u in monomials_of(BiDegree::new(0, b - gdeg.b), sys.n, sys.m) {
            let mut row = vec![Complex64::new(0.0, 0.0); columns.len()];
            for (ye, v) in &spec {
                let shifted = Monomial {
                    xexp: vec![0; sys.n + 1],
                    yexp: ye.iter().zip(&u.yexp).map(|(a, b)| a + b).collect(),
                };
                row[col_index[&shifted]] += v;
            }
            rows.push(row);
        }
    }
    let full = columns.len();
    if rows.is_empty() {
        return Ok(MembershipReport {
            point: xi.iter().map(|c| format!("{c}")).collect(),
            b_used: b,
            rank: 0,
            full_rank: full,
            verdict: verdict_of(0, full),
            margin: Margin::SingularValueRatio(0.0),
        });
    }
    let mut mat = czero(rows.len(), full);
    for (i, r) in rows.into_iter().enumerate() {
        mat[i] = r;
    }
    let sv = singular_values(&mat);
    let s1 = sv.first().copied().unwrap_or(0.0).max(1e-300);
    let rank = sv.iter().filter(|&&s| s / s1 >= tol).count().min(full);
    let margin = if rank < full {
        let largest_discarded = sv.get(rank).map(|s| s / s1).unwrap_or(0.0);
        Margin::SingularValueRatio(largest_discarded)
    } else {
        Margin::SingularValueRatio(sv[full - 1] / s1)
    };
    Ok(MembershipReport {
        point: xi.iter().map(|c| format!("{c}")).collect(),
        b_used: b,
        rank,
        full_rank: full,
        verdict: verdict_of(rank, full),
        margin,
    })
}
