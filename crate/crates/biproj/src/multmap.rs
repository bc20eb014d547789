//! Generalized multiplication maps: bar maps between graded pieces of the
//! quotient, their inverses for powers of the admissible form, and the chart
//! maps M_{x_i/h} acting on one quotient basis.

use crate::admissible::AdmissibleCertificate;
use crate::bipoly::{BiDegree, BiPoly, Monomial};
use crate::field::Scalar;
use crate::gb::GroebnerBasisBigraded;
use crate::macaulay::{MacaulayError, QuotientBasis, SystemWorkspace};
use crate::matrix::{DenseMatrix, LinAlgError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MultMapError {
    #[error(transparent)]
    Macaulay(#[from] MacaulayError),
    #[error("multiplier must be homogeneous of bidegree (k,0), got {0}")]
    NotXForm(BiDegree),
    #[error("target degree {found} does not match source degree shifted by the multiplier, expected {expected}")]
    TargetMismatch { expected: BiDegree, found: BiDegree },
    #[error("bar map of h^{0} is singular: the form is not admissible at this degree")]
    SingularBar(usize),
    #[error("built maps do not commute; the certificate or reduction data is inconsistent")]
    CommutationFailure,
    #[error("the Groebner basis staircase disagrees with the certificate basis at {0}")]
    BasisMismatch(BiDegree),
    #[error("the admissible form has no nonzero coefficient")]
    DegenerateForm,
}

/// Matrix of multiplication by g from one graded piece to another: column j
/// holds the normal form of g * source.basis[j] over the target basis.
#[derive(Debug, Clone)]
pub struct BarMap {
    pub g: BiPoly,
    pub source: QuotientBasis,
    pub target: QuotientBasis,
    pub matrix: DenseMatrix,
}

/// The admissible form h together with the commuting chart maps M_{x_i/h}
/// for every index i in the chart complement (all indices except the pivot
/// coordinate of h).
#[derive(Debug, Clone)]
pub struct MultMapSet {
    pub degree: BiDegree,
    pub h: BiPoly,
    /// Indices i of the chart functions x_i/h, in increasing order.
    pub chart_indices: Vec<usize>,
    pub basis: QuotientBasis,
    pub maps: Vec<DenseMatrix>,
}

impl MultMapSet {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn nmaps(&self) -> usize {
        self.maps.len()
    }

    /// Index of the coordinate playing the role of the chart denominator:
    /// the first x variable with a nonzero coefficient in h.
    pub fn pivot_index(&self) -> usize {
        pivot_index_of(&self.h).expect("validated on construction")
    }
}

fn pivot_index_of(h: &BiPoly) -> Option<usize> {
    let n = h.n;
    (0..=n).find(|&i| {
        let mo = Monomial::var_x(i, h.n, h.m);
        h.coeff(&mo).is_some()
    })
}

fn require_x_form(g: &BiPoly) -> Result<usize, MultMapError> {
    match g.bidegree() {
        None => Ok(0), // the zero multiplier gives the zero map
        Some(d) if d.b == 0 => Ok(d.a),
        Some(d) => Err(MultMapError::NotXForm(d)),
    }
}

/// Build the bar map of g between two quotient bases.
pub fn bar_map(
    ws: &SystemWorkspace,
    g: &BiPoly,
    source: &QuotientBasis,
    target: &QuotientBasis,
) -> Result<BarMap, MultMapError> {
    let k = require_x_form(g)?;
    let expected = BiDegree::new(source.degree.a + k, source.degree.b);
    if target.degree != expected {
        return Err(MultMapError::TargetMismatch { expected, found: target.degree });
    }
    let field = ws.system().field;
    let mut matrix = DenseMatrix::zero(target.dim(), source.dim(), field);
    for (j, u) in source.basis.iter().enumerate() {
        let prod = g.mul_monomial(u);
        let nf = target.normal_form(&prod)?;
        for (i, c) in nf.into_iter().enumerate() {
            if !c.is_zero() {
                matrix.set(i, j, c);
            }
        }
    }
    Ok(BarMap { g: g.clone(), source: source.clone(), target: target.clone(), matrix })
}

/// The square matrix of multiplication by g/h^k on the certificate basis,
/// computed as inverse(bar(h^k)) * bar(g).
pub fn mult_map(
    ws: &SystemWorkspace,
    cert: &AdmissibleCertificate,
    g: &BiPoly,
) -> Result<DenseMatrix, MultMapError> {
    let k = require_x_form(g)?;
    let source = ws.quotient_basis(cert.degree)?;
    if k == 0 {
        // g is a constant: multiplication is the scalar itself
        let c = match g.terms().next() {
            Some((_, c)) => c.clone(),
            None => ws.system().field.zero(),
        };
        return Ok(DenseMatrix::identity(source.dim(), ws.system().field).scale(&c));
    }
    let target = ws.quotient_basis(BiDegree::new(cert.degree.a + k, cert.degree.b))?;
    let hk = cert.form.pow(k);
    let bar_h = bar_map(ws, &hk, &source, &target)?;
    let bar_g = bar_map(ws, g, &source, &target)?;
    let inv = bar_h.matrix.inverse().map_err(|e| match e {
        LinAlgError::SingularMatrix | LinAlgError::ShapeMismatch(_) => MultMapError::SingularBar(k),
        other => MultMapError::Macaulay(MacaulayError::LinAlg(other)),
    })?;
    Ok(inv.mul(&bar_g.matrix))
}

/// Build all chart maps M_{x_i/h} at the certificate degree and verify the
/// pairwise commutation before returning.
pub fn build_mult_maps(
    ws: &SystemWorkspace,
    cert: &AdmissibleCertificate,
) -> Result<MultMapSet, MultMapError> {
    let sys = ws.system();
    let basis = ws.quotient_basis(cert.degree)?;
    let pivot = pivot_index_of(&cert.form).ok_or(MultMapError::DegenerateForm)?;
    let chart_indices: Vec<usize> = (0..=sys.n).filter(|&i| i != pivot).collect();
    let mut maps = Vec::with_capacity(chart_indices.len());
    for &i in &chart_indices {
        let xi = BiPoly::monomial(sys.n, sys.m, sys.field, Monomial::var_x(i, sys.n, sys.m));
        maps.push(mult_map(ws, cert, &xi)?);
    }
    for i in 0..maps.len() {
        for j in (i + 1)..maps.len() {
            if maps[i].mul(&maps[j]) != maps[j].mul(&maps[i]) {
                return Err(MultMapError::CommutationFailure);
            }
        }
    }
    Ok(MultMapSet { degree: cert.degree, h: cert.form.clone(), chart_indices, basis, maps })
}

/// The same matrix as `mult_map`, with every normal form computed by
/// Groebner reduction instead of the cached row echelon data. Serves as a
/// cross-check oracle for the primary route.
pub fn mult_map_from_gb(
    gb: &GroebnerBasisBigraded,
    ws: &SystemWorkspace,
    cert: &AdmissibleCertificate,
    g: &BiPoly,
) -> Result<DenseMatrix, MultMapError> {
    let sys = ws.system();
    let k = require_x_form(g)?;
    let cert_basis = ws.quotient_basis(cert.degree)?;
    let std_src = gb.standard_monomials(cert.degree, sys.n, sys.m);
    if std_src != cert_basis.basis {
        return Err(MultMapError::BasisMismatch(cert.degree));
    }
    if k == 0 {
        let c = match g.terms().next() {
            Some((_, c)) => c.clone(),
            None => sys.field.zero(),
        };
        return Ok(DenseMatrix::identity(std_src.len(), sys.field).scale(&c));
    }
    let tgt_deg = BiDegree::new(cert.degree.a + k, cert.degree.b);
    let std_tgt = gb.standard_monomials(tgt_deg, sys.n, sys.m);
    let hk = cert.form.pow(k);
    let to_matrix = |mult: &BiPoly| -> Result<DenseMatrix, MultMapError> {
        let mut mat = DenseMatrix::zero(std_tgt.len(), std_src.len(), sys.field);
        for (j, u) in std_src.iter().enumerate() {
            let nf = gb.normal_form(&mult.mul_monomial(u));
            for (mo, c) in nf.terms() {
                let i = std_tgt
                    .iter()
                    .position(|t| t == mo)
                    .ok_or(MultMapError::BasisMismatch(tgt_deg))?;
                mat.set(i, j, c.clone());
            }
        }
        Ok(mat)
    };
    let bar_h = to_matrix(&hk)?;
    let bar_g = to_matrix(g)?;
    let inv = bar_h.inverse().map_err(|_| MultMapError::SingularBar(k))?;
    Ok(inv.mul(&bar_g))
}

/// Lift chart values (z_i = x_i/h for i in `chart_indices`) to a projective
/// point, fixing h = 1 on the representative and normalizing afterwards.
pub fn lift_chart_point(
    h: &BiPoly,
    chart_indices: &[usize],
    values: &[Scalar],
) -> Result<Vec<Scalar>, MultMapError> {
    let n = h.n;
    let pivot = pivot_index_of(h).ok_or(MultMapError::DegenerateForm)?;
    let field = h.field;
    let coeff_of = |i: usize| -> Scalar {
        h.coeff(&Monomial::var_x(i, h.n, h.m)).cloned().unwrap_or_else(|| field.zero())
    };
    let mut coords = vec![field.zero(); n + 1];
    // h(x) = 1 on the representative: pivot coordinate balances the rest
    let mut acc = field.one();
    for (&i, z) in chart_indices.iter().zip(values) {
        coords[i] = z.clone();
        acc = acc.sub(&coeff_of(i).mul(z));
    }
    let piv_val = acc
        .div(&coeff_of(pivot))
        .map_err(|_| MultMapError::DegenerateForm)?;
    coords[pivot] = piv_val;
    crate::bipoly::normalize_point(&coords).map_err(|_| MultMapError::DegenerateForm)
}
