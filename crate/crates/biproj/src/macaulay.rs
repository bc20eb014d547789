//! Degree-(a,b) restriction of a bihomogeneous ideal: Macaulay matrices,
//! Hilbert function values, quotient-space bases, normal forms, and the
//! colon-piece test (I : g)_{a,b} = I_{a,b}.

use crate::bipoly::{monomials_of, BiDegree, BiPoly, BiSystem, Monomial};
use crate::field::Scalar;
use crate::matrix::{DenseMatrix, LinAlgError, Rref};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MacaulayError {
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("extra generator of degree {0} does not fit below {1}")]
    DegreeTooLarge(BiDegree, BiDegree),
    #[error("the zero polynomial cannot be adjoined")]
    ZeroPolynomial,
    #[error("polynomial degree {0} does not match the basis degree {1}")]
    DegreeMismatch(BiDegree, BiDegree),
    #[error("colon test requires g of bidegree (k,0), got {0}")]
    NotXForm(BiDegree),
}

/// The degree-(a,b) slice of the ideal. Row (i, u) is the coefficient vector
/// of u * f_i over the fixed column monomials; HF = #columns - rank.
#[derive(Debug)]
pub struct MacaulayMatrix {
    pub degree: BiDegree,
    pub columns: Vec<Monomial>,
    pub rows: Vec<(usize, Monomial)>,
    pub coeffs: DenseMatrix,
    cached_rref: OnceLock<Rref>,
}

impl MacaulayMatrix {
    /// One row per (generator, multiplier) pair; generators whose bidegree
    /// does not fit below `deg` contribute no rows.
    pub fn build(sys: &BiSystem, deg: BiDegree) -> Self {
        let columns = monomials_of(deg, sys.n, sys.m);
        let col_index: HashMap<&Monomial, usize> =
            columns.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut rows = Vec::new();
        let mut data: Vec<Vec<Scalar>> = Vec::new();
        for (gi, (g, gdeg)) in sys.generators().iter().zip(sys.degrees()).enumerate() {
            let Some(shift) = deg.checked_sub(gdeg) else { continue };
            for u in monomials_of(shift, sys.n, sys.m) {
                let prod = g.mul_monomial(&u);
                let mut row = vec![sys.field.zero(); columns.len()];
                for (mo, c) in prod.terms() {
                    row[col_index[mo]] = c.clone();
                }
                rows.push((gi, u));
                data.push(row);
            }
        }
        let ncols = columns.len();
        let coeffs = DenseMatrix::from_rows(data, ncols, sys.field);
        MacaulayMatrix { degree: deg, columns, rows, coeffs, cached_rref: OnceLock::new() }
    }

    /// Row reduction is computed once and cached; every downstream normal
    /// form at this bidegree reuses it.
    pub fn rref(&self) -> Result<&Rref, MacaulayError> {
        if let Some(r) = self.cached_rref.get() {
            return Ok(r);
        }
        let r = self.coeffs.rref()?;
        Ok(self.cached_rref.get_or_init(|| r))
    }

    pub fn rank(&self) -> Result<usize, MacaulayError> {
        Ok(self.rref()?.rank)
    }

    pub fn hilbert_function(&self) -> Result<usize, MacaulayError> {
        Ok(self.columns.len() - self.rank()?)
    }
}

/// Immutable per-bidegree reduction data shared by normal forms and maps.
#[derive(Debug)]
pub struct DegreeData {
    pub degree: BiDegree,
    pub columns: Vec<Monomial>,
    col_index: HashMap<Monomial, usize>,
    pub rref: Rref,
    pivot_of_col: Vec<Option<usize>>,
    /// Non-pivot columns, listed ascending in the global order.
    pub basis: Vec<Monomial>,
    basis_index: HashMap<Monomial, usize>,
}

impl DegreeData {
    fn from_macaulay(mac: &MacaulayMatrix) -> Result<Self, MacaulayError> {
        let rref = mac.rref()?.clone();
        let mut pivot_of_col = vec![None; mac.columns.len()];
        for (pi, &pc) in rref.pivots.iter().enumerate() {
            pivot_of_col[pc] = Some(pi);
        }
        // columns are descending, so reversing the non-pivots gives the
        // basis in ascending order
        let mut basis: Vec<Monomial> = mac
            .columns
            .iter()
            .enumerate()
            .filter(|(i, _)| pivot_of_col[*i].is_none())
            .map(|(_, mo)| mo.clone())
            .collect();
        basis.reverse();
        let basis_index = basis.iter().cloned().enumerate().map(|(i, mo)| (mo, i)).collect();
        let col_index = mac
            .columns
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, mo)| (mo, i))
            .collect();
        Ok(DegreeData {
            degree: mac.degree,
            columns: mac.columns.clone(),
            col_index,
            rref,
            pivot_of_col,
            basis,
            basis_index,
        })
    }

    pub fn hilbert_function(&self) -> usize {
        self.basis.len()
    }

    /// Coefficient vector of p modulo the row space over the ascending basis.
    pub fn normal_form(&self, p: &BiPoly) -> Result<Vec<Scalar>, MacaulayError> {
        if let Some(d) = p.bidegree() {
            if d != self.degree {
                return Err(MacaulayError::DegreeMismatch(d, self.degree));
            }
        }
        let field = self.rref.matrix.field();
        let mut v = vec![field.zero(); self.columns.len()];
        for (mo, c) in p.terms() {
            v[self.col_index[mo]] = c.clone();
        }
        for (pi, &pc) in self.rref.pivots.iter().enumerate() {
            if v[pc].is_zero() {
                continue;
            }
            let f = v[pc].clone();
            for j in pc..self.columns.len() {
                let r = self.rref.matrix.get(pi, j);
                if !r.is_zero() {
                    v[j] = v[j].sub(&f.mul(r));
                }
            }
        }
        let mut out = vec![field.zero(); self.basis.len()];
        for (j, val) in v.into_iter().enumerate() {
            if val.is_zero() {
                continue;
            }
            debug_assert!(self.pivot_of_col[j].is_none(), "residual on a pivot column");
            let bi = self.basis_index[&self.columns[j]];
            out[bi] = val;
        }
        Ok(out)
    }
}

/// Monomials of bidegree (a,b) spanning (R/I)_{a,b}, with the reduction data
/// needed for normal forms.
#[derive(Debug, Clone)]
pub struct QuotientBasis {
    pub degree: BiDegree,
    pub basis: Vec<Monomial>,
    data: Arc<DegreeData>,
}

impl QuotientBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn data(&self) -> &DegreeData {
        &self.data
    }

    pub fn normal_form(&self, p: &BiPoly) -> Result<Vec<Scalar>, MacaulayError> {
        self.data.normal_form(p)
    }
}

/// A system plus its per-bidegree reduction cache. Distinct bidegrees are
/// computed independently; the cache is filled behind a lock and shared as
/// immutable `Arc`s afterwards.
pub struct SystemWorkspace {
    sys: BiSystem,
    cache: Mutex<HashMap<BiDegree, Arc<DegreeData>>>,
}

impl SystemWorkspace {
    pub fn new(sys: BiSystem) -> Self {
        SystemWorkspace { sys, cache: Mutex::new(HashMap::new()) }
    }

    pub fn system(&self) -> &BiSystem {
        &self.sys
    }

    pub fn degree_data(&self, deg: BiDegree) -> Result<Arc<DegreeData>, MacaulayError> {
        if let Some(d) = self.cache.lock().unwrap().get(&deg) {
            return Ok(d.clone());
        }
        let mac = MacaulayMatrix::build(&self.sys, deg);
        let data = Arc::new(DegreeData::from_macaulay(&mac)?);
        self.cache.lock().unwrap().insert(deg, data.clone());
        Ok(data)
    }

    /// HF_{R/I}(deg) = #columns - rank of the Macaulay matrix.
    pub fn hilbert_function(&self, deg: BiDegree) -> Result<usize, MacaulayError> {
        Ok(self.degree_data(deg)?.hilbert_function())
    }

    /// Hilbert function of R/(I, extra) at `deg`.
    pub fn hilbert_function_with(
        &self,
        extra: &BiPoly,
        deg: BiDegree,
    ) -> Result<usize, MacaulayError> {
        let edeg = extra.bidegree().ok_or(MacaulayError::ZeroPolynomial)?;
        if !edeg.leq(&deg) {
            return Err(MacaulayError::DegreeTooLarge(edeg, deg));
        }
        let extended = self
            .sys
            .with_extra_generator(extra.clone())
            .expect("validated extra generator");
        MacaulayMatrix::build(&extended, deg).hilbert_function()
    }

    pub fn quotient_basis(&self, deg: BiDegree) -> Result<QuotientBasis, MacaulayError> {
        let data = self.degree_data(deg)?;
        Ok(QuotientBasis { degree: deg, basis: data.basis.clone(), data })
    }

    /// Whether (I : g)_{deg} = I_{deg} for g of bidegree (k, 0).
    ///
    /// Uses the dimension identity of the multiplication-by-g exact sequence:
    /// the colon piece equals the ideal piece iff
    /// HF(a,b) = HF(a+k,b) - HF_{R/(I,g)}(a+k,b),
    /// so three Hilbert values decide without an explicit preimage basis.
    pub fn colon_piece_equal(&self, g: &BiPoly, deg: BiDegree) -> Result<bool, MacaulayError> {
        let gdeg = g.bidegree().ok_or(MacaulayError::ZeroPolynomial)?;
        if gdeg.b != 0 {
            return Err(MacaulayError::NotXForm(gdeg));
        }
        if gdeg.a == 0 {
            return Ok(true); // g is a nonzero constant
        }
        let shifted = BiDegree::new(deg.a + gdeg.a, deg.b);
        let hf_here = self.hilbert_function(deg)?;
        let hf_shifted = self.hilbert_function(shifted)?;
        let hf_mod_g = self.hilbert_function_with(g, shifted)?;
        Ok(hf_here == hf_shifted - hf_mod_g)
    }
}
