//! Exact dense linear algebra over the coefficient fields: RREF, rank,
//! kernel, inverse, linear solve. Row-major storage, immutable values,
//! pure operations.

use crate::field::{FieldError, FieldSpec, Scalar};
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("operation requires an exact field")]
    ExactFieldRequired,
    #[error("matrix is singular (rank deficient)")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    ShapeMismatch(String),
    #[error("conversion to floats is only defined from the rationals")]
    ApproxFromRationalsOnly,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// How the elimination picks pivot rows. Both strategies produce the same
/// (unique) reduced row echelon form; the option only controls intermediate
/// coefficient growth over Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotStrategy {
    #[default]
    FirstNonzero,
    LargestNumerator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
    field: FieldSpec,
}

/// Result of row reduction: the canonical RREF, its pivot columns
/// (strictly increasing) and the rank.
#[derive(Debug, Clone, PartialEq)]
pub struct Rref {
    pub matrix: DenseMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl DenseMatrix {
    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Self {
        DenseMatrix { rows, cols, entries: vec![field.zero(); rows * cols], field }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut m = Self::zero(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize, field: FieldSpec) -> Self {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            for s in &r {
                assert_eq!(s.field(), field, "entry field mismatch");
            }
            entries.extend(r);
        }
        DenseMatrix { rows: nrows, cols, entries, field }
    }

    /// Build from integer entries, mapped into the field.
    pub fn from_i64(rows: usize, cols: usize, data: &[i64], field: FieldSpec) -> Self {
        assert_eq!(data.len(), rows * cols);
        DenseMatrix {
            rows,
            cols,
            entries: data.iter().map(|&v| field.from_i64(v)).collect(),
            field,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = Self::zero(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        assert_eq!(self.field, rhs.field);
        let mut out = Self::zero(self.rows, rhs.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).add(rhs.get(i, j)));
            }
        }
        out
    }

    pub fn sub(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).sub(rhs.get(i, j)));
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> DenseMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.mul(c);
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.cols {
                    if !self.get(i, j).is_zero() && !v[j].is_zero() {
                        acc = acc.add(&self.get(i, j).mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut t = self.field.zero();
        for i in 0..self.rows {
            t = t.add(self.get(i, i));
        }
        t
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    /// Reduced row echelon form with the default pivot strategy.
    pub fn rref(&self) -> Result<Rref, LinAlgError> {
        self.rref_with(PivotStrategy::FirstNonzero)
    }

    pub fn rref_with(&self, strategy: PivotStrategy) -> Result<Rref, LinAlgError> {
        if !self.field.is_exact() {
            return Err(LinAlgError::ExactFieldRequired);
        }
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let piv = match strategy {
                PivotStrategy::FirstNonzero => (r..m.rows).find(|&i| !m.get(i, c).is_zero()),
                PivotStrategy::LargestNumerator => {
                    let mut best: Option<(usize, num_bigint::BigInt)> = None;
                    for i in r..m.rows {
                        if let Scalar::Rat(q) = m.get(i, c) {
                            if !q.is_zero() {
                                let mag = q.numer().abs();
                                if best.as_ref().map_or(true, |(_, b)| mag > *b) {
                                    best = Some((i, mag));
                                }
                            }
                        } else if !m.get(i, c).is_zero() {
                            best = best.or(Some((i, num_bigint::BigInt::from(0))));
                        }
                    }
                    best.map(|(i, _)| i)
                }
            };
            let Some(piv) = piv else { continue };
            m.swap_rows(r, piv);
            let inv = m.get(r, c).inv()?;
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    m.axpy_row(i, r, &f.neg(), c);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        Ok(Rref { matrix: m, pivots, rank })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(i, j).mul(c);
            self.set(i, j, v);
        }
    }

    /// row[i] += c * row[src], starting from column `from` (earlier columns
    /// are already eliminated).
    fn axpy_row(&mut self, i: usize, src: usize, c: &Scalar, from: usize) {
        for j in from..self.cols {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let v = self.get(i, j).add(&s.mul(c));
            self.set(i, j, v);
        }
    }

    pub fn rank(&self) -> Result<usize, LinAlgError> {
        Ok(self.rref()?.rank)
    }

    /// Basis of the right null space; `cols - rank` vectors.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<Scalar>>, LinAlgError> {
        let Rref { matrix: r, pivots, rank } = self.rref()?;
        let mut basis = Vec::with_capacity(self.cols - rank);
        let piv_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (pi, &pc) in pivots.iter().enumerate() {
                v[pc] = Some(pi);
            }
            v
        };
        for free in 0..self.cols {
            if piv_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![self.field.zero(); self.cols];
            vec[free] = self.field.one();
            for (pi, &pc) in pivots.iter().enumerate() {
                vec[pc] = r.get(pi, free).neg();
            }
            basis.push(vec);
        }
        Ok(basis)
    }

    /// Exact inverse; `SingularMatrix` signals a non-admissible form or a
    /// non-admissible bidegree when it surfaces from a bar map.
    pub fn inverse(&self) -> Result<DenseMatrix, LinAlgError> {
        if self.rows != self.cols {
            return Err(LinAlgError::ShapeMismatch(format!(
                "inverse of {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if !self.field.is_exact() {
            return Err(LinAlgError::ExactFieldRequired);
        }
        let n = self.rows;
        let mut aug = DenseMatrix::zero(n, 2 * n, self.field);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let Rref { matrix: r, pivots, rank } = aug.rref()?;
        if rank < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
            return Err(LinAlgError::SingularMatrix);
        }
        let mut inv = DenseMatrix::zero(n, n, self.field);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Solve self * X = B exactly; requires consistent system with unique
    /// solution on the pivot structure (full column rank).
    pub fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix, LinAlgError> {
        assert_eq!(self.rows, b.rows);
        let n = self.cols;
        let mut aug = DenseMatrix::zero(self.rows, n + b.cols, self.field);
        for i in 0..self.rows {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            for j in 0..b.cols {
                aug.set(i, n + j, b.get(i, j).clone());
            }
        }
        let Rref { matrix: r, pivots, rank } = aug.rref()?;
        let structural: Vec<usize> = pivots.iter().copied().filter(|&c| c < n).collect();
        if structural.len() < rank {
            return Err(LinAlgError::SingularMatrix); // inconsistent system
        }
        if structural.len() < n {
            return Err(LinAlgError::SingularMatrix); // underdetermined
        }
        let mut x = DenseMatrix::zero(n, b.cols, self.field);
        for (pi, &pc) in structural.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(pi, n + j).clone());
            }
        }
        Ok(x)
    }

    /// Entrywise conversion to doubles. Rejects prime fields: float images of
    /// residues carry no eigenvalue meaning.
    pub fn to_approx(&self) -> Result<DenseMatrix, LinAlgError> {
        match self.field {
            FieldSpec::Rationals => {}
            FieldSpec::PrimeField(_) => return Err(LinAlgError::ApproxFromRationalsOnly),
            FieldSpec::ApproxReal => return Ok(self.clone()),
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| Scalar::Approx(e.to_f64())).collect(),
            field: FieldSpec::ApproxReal,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn rref_identity() {
        let m = DenseMatrix::identity(2, q());
        let r = m.rref().unwrap();
        assert_eq!(r.matrix, m);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn rref_zero() {
        let m = DenseMatrix::zero(3, 4, q());
        let r = m.rref().unwrap();
        assert_eq!(r.matrix, m);
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_rank_one() {
        let m = DenseMatrix::from_i64(2, 2, &[1, 2, 2, 4], q());
        let r = m.rref().unwrap();
        assert_eq!(r.matrix, DenseMatrix::from_i64(2, 2, &[1, 2, 0, 0], q()));
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn rref_rejects_floats() {
        let m = DenseMatrix::zero(1, 1, FieldSpec::ApproxReal);
        assert_eq!(m.rref().unwrap_err(), LinAlgError::ExactFieldRequired);
    }

    #[test]
    fn pivot_strategies_agree() {
        let m = DenseMatrix::from_i64(3, 4, &[2, 4, 1, 3, 6, 12, 5, 9, 1, 2, 7, 7], q());
        let a = m.rref_with(PivotStrategy::FirstNonzero).unwrap();
        let b = m.rref_with(PivotStrategy::LargestNumerator).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inverse_diagonal() {
        let m = DenseMatrix::from_i64(2, 2, &[2, 0, 0, 4], q());
        let inv = m.inverse().unwrap();
        let mut expect = DenseMatrix::zero(2, 2, q());
        expect.set(0, 0, Scalar::from_rational(1, 2));
        expect.set(1, 1, Scalar::from_rational(1, 4));
        assert_eq!(inv, expect);
        assert_eq!(m.mul(&inv), DenseMatrix::identity(2, q()));
    }

    #[test]
    fn inverse_random_prime_field() {
        let f = FieldSpec::prime(65521).unwrap();
        // fixed 5x5 with nonzero determinant mod 65521
        let data: Vec<i64> = vec![
            3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3, 2, 3, 8, 4, 6, 2, 6, 4, 3,
        ];
        let m = DenseMatrix::from_i64(5, 5, &data, f);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), DenseMatrix::identity(5, f));
        assert_eq!(inv.mul(&m), DenseMatrix::identity(5, f));
    }

    #[test]
    fn singular_inverse_rejected() {
        let m = DenseMatrix::from_i64(2, 2, &[1, 2, 2, 4], q());
        assert_eq!(m.inverse().unwrap_err(), LinAlgError::SingularMatrix);
    }

    #[test]
    fn kernel_of_identity_empty() {
        let m = DenseMatrix::identity(4, q());
        assert!(m.kernel_basis().unwrap().is_empty());
    }

    #[test]
    fn kernel_of_zero_full() {
        let m = DenseMatrix::zero(2, 3, q());
        let k = m.kernel_basis().unwrap();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, s) in v.iter().enumerate() {
                assert_eq!(s.is_zero(), i != j);
            }
        }
    }

    #[test]
    fn kernel_vectors_annihilated() {
        let m = DenseMatrix::from_i64(1, 3, &[1, 1, 0], q());
        let k = m.kernel_basis().unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn to_approx_values() {
        let mut m = DenseMatrix::zero(1, 1, q());
        m.set(0, 0, Scalar::from_rational(1, 2));
        let a = m.to_approx().unwrap();
        assert_eq!(*a.get(0, 0), Scalar::Approx(0.5));
        let f = FieldSpec::prime(7).unwrap();
        let p = DenseMatrix::identity(1, f);
        assert_eq!(p.to_approx().unwrap_err(), LinAlgError::ApproxFromRationalsOnly);
    }

    #[test]
    fn solve_square() {
        let m = DenseMatrix::from_i64(2, 2, &[1, 1, 0, 2], q());
        let b = DenseMatrix::from_i64(2, 1, &[3, 4], q());
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul(&x), b);
    }
}
