//! Numeric recovery of the projected points: exact characteristic
//! polynomials, square-free splitting, float root finding, invariant
//! subspaces, and coordinate readout from the commuting chart maps.

use crate::bipoly::BiDegree;
use crate::field::{FieldSpec, Scalar};
use crate::fglm::GroebnerBasis;
use crate::matrix::{DenseMatrix, LinAlgError};
use crate::multmap::{lift_chart_point, MultMapSet};
use crate::numeric::{
    aberth_roots, cnullspace, cpow, cshift, czero, orthonormalize, sigma_min, CMat,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("eigenvalue recovery is undefined over a prime field")]
    PrimeFieldNotSupported,
    #[error("matrix must be square")]
    NotSquare,
    #[error("two eigenvalue clusters stay closer than 10x the tolerance after {0} seeds")]
    ClusterAmbiguity(usize),
    #[error("invariant subspace of dimension {found} does not match the multiplicity {expected}")]
    SubspaceMismatch { expected: usize, found: usize },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

// ---------------------------------------------------------------------------
// Exact univariate polynomials over Q (dense, ascending coefficients).
// ---------------------------------------------------------------------------

pub type RatPoly = Vec<BigRational>;

fn poly_trim(p: &mut RatPoly) {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn poly_deg(p: &RatPoly) -> usize {
    p.len().saturating_sub(1)
}

fn poly_is_one(p: &RatPoly) -> bool {
    p.len() == 1 && p[0].is_one()
}

fn poly_derivative(p: &RatPoly) -> RatPoly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    let mut out: RatPoly = p[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i + 1)))
        .collect();
    poly_trim(&mut out);
    out
}

fn poly_monic(p: &RatPoly) -> RatPoly {
    let lead = p.last().cloned().unwrap_or_else(BigRational::one);
    if lead.is_zero() || lead.is_one() {
        return p.clone();
    }
    p.iter().map(|c| c / &lead).collect()
}

/// Quotient and remainder of exact division.
fn poly_divrem(num: &RatPoly, den: &RatPoly) -> (RatPoly, RatPoly) {
    let mut rem = num.clone();
    poly_trim(&mut rem);
    let dd = poly_deg(den);
    let lead = den.last().unwrap().clone();
    if poly_deg(&rem) < dd || (rem.len() == 1 && rem[0].is_zero()) {
        return (vec![BigRational::zero()], rem);
    }
    let mut quo = vec![BigRational::zero(); poly_deg(&rem) - dd + 1];
    while poly_deg(&rem) >= dd && !(rem.len() == 1 && rem[0].is_zero()) {
        let shift = poly_deg(&rem) - dd;
        let factor = rem.last().unwrap() / &lead;
        quo[shift] = factor.clone();
        for (i, c) in den.iter().enumerate() {
            let idx = shift + i;
            rem[idx] = &rem[idx] - &(c * &factor);
        }
        poly_trim(&mut rem);
        if rem.len() == 1 && rem[0].is_zero() {
            break;
        }
    }
    poly_trim(&mut quo);
    (quo, rem)
}

fn poly_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut x = poly_monic(a);
    let mut y = poly_monic(b);
    poly_trim(&mut x);
    poly_trim(&mut y);
    let is_zero = |p: &RatPoly| p.len() == 1 && p[0].is_zero();
    while !is_zero(&y) {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = poly_monic(&r);
        poly_trim(&mut y);
    }
    poly_monic(&x)
}

/// Yun square-free decomposition of a monic polynomial: returns the pairs
/// (factor, multiplicity) with each factor square-free and pairwise coprime.
pub fn squarefree_decomposition(f: &RatPoly) -> Vec<(RatPoly, usize)> {
    let f = poly_monic(f);
    if poly_deg(&f) == 0 {
        return Vec::new();
    }
    let df = poly_derivative(&f);
    let a0 = poly_gcd(&f, &df);
    let (mut b, _) = poly_divrem(&f, &a0);
    let (c0, _) = poly_divrem(&df, &a0);
    let mut d = poly_sub(&c0, &poly_derivative(&b));
    let mut out = Vec::new();
    let mut i = 1usize;
    while !poly_is_one(&b) {
        let ai = poly_gcd(&b, &d);
        if poly_deg(&ai) > 0 {
            out.push((ai.clone(), i));
        }
        let (bn, _) = poly_divrem(&b, &ai);
        let (cn, _) = poly_divrem(&d, &ai);
        b = bn;
        d = poly_sub(&cn, &poly_derivative(&b));
        i += 1;
    }
    out
}

fn poly_sub(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] = c.clone();
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = &out[i] - c;
    }
    poly_trim(&mut out);
    out
}

/// Exact characteristic polynomial det(lambda I - M) by Faddeev-LeVerrier;
/// ascending coefficients, monic of degree D.
pub fn charpoly(m: &DenseMatrix) -> Result<RatPoly, EigenError> {
    if m.nrows() != m.ncols() {
        return Err(EigenError::NotSquare);
    }
    match m.field() {
        FieldSpec::Rationals => {}
        FieldSpec::PrimeField(_) => return Err(EigenError::PrimeFieldNotSupported),
        FieldSpec::ApproxReal => return Err(EigenError::PrimeFieldNotSupported),
    }
    let d = m.nrows();
    let field = m.field();
    let mut coeffs = vec![BigRational::zero(); d + 1];
    coeffs[d] = BigRational::one();
    let mut a = m.clone();
    for k in 1..=d {
        let tr = match a.trace() {
            Scalar::Rat(r) => r,
            _ => unreachable!("rational field"),
        };
        let ck = -tr / BigRational::from_integer(BigInt::from(k));
        coeffs[d - k] = ck.clone();
        if k < d {
            let shift = DenseMatrix::identity(d, field).scale(&Scalar::Rat(ck));
            a = m.mul(&a.add(&shift));
        }
    }
    Ok(coeffs)
}

pub fn ratpoly_to_f64(p: &RatPoly) -> Vec<f64> {
    p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Continued-fraction rationalization of a double within `tol`, denominators
/// capped at `max_den`.
pub fn rationalize(x: f64, max_den: u64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i128, 0i128, x.floor() as i128, 1i128);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        let approx = p1 as f64 / q1 as f64;
        if (approx - x).abs() <= tol * (1.0 + x.abs()) {
            return Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)));
        }
        if frac.abs() < 1e-18 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let (p2, q2) = (a as i128 * p1 + p0, a as i128 * q1 + q0);
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    let approx = p1 as f64 / q1 as f64;
    if (approx - x).abs() <= tol * (1.0 + x.abs()) {
        Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)))
    } else {
        None
    }
}

/// Eigenvalues with algebraic multiplicities: exact characteristic
/// polynomial, exact square-free splitting, float roots of the square-free
/// parts. Multiplicities always sum to the dimension.
pub fn eigenvalues(m: &DenseMatrix) -> Result<Vec<(Complex64, usize)>, EigenError> {
    let cp = charpoly(m)?;
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for (factor, mult) in squarefree_decomposition(&cp) {
        for root in aberth_roots(&ratpoly_to_f64(&factor)) {
            out.push((root, mult));
        }
    }
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    Ok(out)
}

/// Distinct eigenvalues merged at a relative tolerance (single linkage).
pub fn cluster_eigenvalues(
    values: &[(Complex64, usize)],
    tol: f64,
) -> Vec<(Complex64, usize)> {
    let scale = values.iter().map(|(v, _)| v.norm()).fold(1.0, f64::max);
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &(v, m) in values {
        match clusters.iter_mut().find(|(c, _)| (*c - v).norm() <= tol * scale) {
            Some((c, cm)) => {
                let total = *cm + m;
                *c = (*c * (*cm as f64) + v * (m as f64)) / total as f64;
                *cm = total;
            }
            None => clusters.push((v, m)),
        }
    }
    clusters
}

/// One recovered projective point.
#[derive(Debug, Clone)]
pub struct RecoveredPoint {
    /// Projective coordinates, first nonzero coordinate scaled to 1.
    pub coords: Vec<Complex64>,
    /// Exact coordinates when the whole readout rationalized.
    pub exact_coords: Option<Vec<Scalar>>,
    /// Chart values z_i = x_i / h in the order of the chart indices.
    pub chart: Vec<Complex64>,
    pub multiplicity: usize,
    pub residual: f64,
    pub is_complex: bool,
}

#[derive(Debug, Clone)]
pub struct PointSet {
    pub degree_used: BiDegree,
    pub total_dim: usize,
    pub points: Vec<RecoveredPoint>,
}

impl PointSet {
    pub fn multiplicity_sum(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }
}

fn to_cmat(m: &DenseMatrix) -> CMat {
    let mut out = czero(m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[i][j] = Complex64::new(m.get(i, j).to_f64(), 0.0);
        }
    }
    out
}

/// Restriction trace readout: columns of `basis` span an invariant subspace
/// of every map; tr(B^H M B) / dim is exactly the chart value even when the
/// restriction is defective.
fn trace_readout(map: &CMat, basis: &[Vec<Complex64>]) -> Complex64 {
    let mu = basis.len();
    let mut tr = Complex64::new(0.0, 0.0);
    for b in basis {
        let img: Vec<Complex64> = (0..map.len())
            .map(|i| map[i].iter().zip(b).map(|(a, x)| a * x).sum())
            .collect();
        tr += b.iter().zip(&img).map(|(a, x)| a.conj() * x).sum::<Complex64>();
    }
    tr / mu as f64
}

const RETRY_SEEDS: usize = 3;

/// Recover the projected points from the commuting chart maps: a random
/// combination separates the points, its invariant subspaces group the
/// (generalized) eigenvectors, and per-map restriction traces read off the
/// chart coordinates. Exact kernels are used whenever the eigenvalue
/// rationalizes.
pub fn recover_points(
    set: &MultMapSet,
    seed: u64,
    tol: f64,
    gb: Option<&GroebnerBasis>,
) -> Result<PointSet, EigenError> {
    if set.h.field != FieldSpec::Rationals {
        return Err(EigenError::PrimeFieldNotSupported);
    }
    let d = set.dim();
    if d == 0 {
        return Ok(PointSet { degree_used: set.degree, total_dim: 0, points: Vec::new() });
    }
    let nmaps = set.maps.len();
    let mut last_err = EigenError::ClusterAmbiguity(RETRY_SEEDS);
    for attempt in 0..RETRY_SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1000 * attempt as u64));
        let combo: Vec<i64> = (0..nmaps).map(|_| rng.gen_range(1..=97)).collect();
        match recover_with_combo(set, &combo, tol, gb) {
            Ok(points) => return Ok(points),
            Err(e @ EigenError::ClusterAmbiguity(_)) | Err(e @ EigenError::SubspaceMismatch { .. }) => {
                last_err = e;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

fn recover_with_combo(
    set: &MultMapSet,
    combo: &[i64],
    tol: f64,
    gb: Option<&GroebnerBasis>,
) -> Result<PointSet, EigenError> {
    let field = FieldSpec::Rationals;
    let d = set.dim();
    let mut mc = DenseMatrix::zero(d, d, field);
    for (c, m) in combo.iter().zip(&set.maps) {
        mc = mc.add(&m.scale(&field.from_i64(*c)));
    }
    let cp = charpoly(&mc)?;
    let mut roots: Vec<(Complex64, usize, Option<BigRational>)> = Vec::new();
    for (factor, mult) in squarefree_decomposition(&cp) {
        // degree-1 factors have an exact root already
        if poly_deg(&factor) == 1 {
            let r = -&factor[0] / &factor[1];
            let rf = r.to_f64().unwrap_or(f64::NAN);
            roots.push((Complex64::new(rf, 0.0), mult, Some(r)));
            continue;
        }
        for root in aberth_roots(&ratpoly_to_f64(&factor)) {
            let exact = if root.im.abs() <= 1e-9 * (1.0 + root.norm()) {
                rationalize(root.re, 1_000_000, 1e-9)
            } else {
                None
            };
            roots.push((root, mult, exact));
        }
    }
    // separation check: retried with another combination when two distinct
    // roots nearly collide
    let scale = roots.iter().map(|(r, _, _)| r.norm()).fold(1.0, f64::max);
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            if (roots[i].0 - roots[j].0).norm() < 10.0 * tol * scale {
                return Err(EigenError::ClusterAmbiguity(1));
            }
        }
    }
    let maps_f: Vec<CMat> = set.maps.iter().map(to_cmat).collect();
    let mc_f = to_cmat(&mc);
    let mut points = Vec::new();
    for (root, mult, exact_root) in roots {
        let point = match exact_root {
            Some(r) => {
                match exact_point(set, &mc, &r, mult, tol, gb)? {
                    Some(p) => p,
                    None => float_point(set, &maps_f, &mc_f, root, mult, tol, gb)?,
                }
            }
            None => float_point(set, &maps_f, &mc_f, root, mult, tol, gb)?,
        };
        points.push(point);
    }
    points.sort_by(|a, b| {
        for (x, y) in a.coords.iter().zip(&b.coords) {
            let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
            if o != std::cmp::Ordering::Equal {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    });
    debug_assert_eq!(points.iter().map(|p| p.multiplicity).sum::<usize>(), d);
    Ok(PointSet { degree_used: set.degree, total_dim: d, points })
}

/// Exact route: kernel of (M_c - r)^mult over Q spans the invariant
/// subspace; restriction traces are exact rationals.
fn exact_point(
    set: &MultMapSet,
    mc: &DenseMatrix,
    r: &BigRational,
    mult: usize,
    tol: f64,
    gb: Option<&GroebnerBasis>,
) -> Result<Option<RecoveredPoint>, EigenError> {
    let field = FieldSpec::Rationals;
    let d = set.dim();
    let shift = mc.sub(&DenseMatrix::identity(d, field).scale(&Scalar::Rat(r.clone())));
    let mut power = DenseMatrix::identity(d, field);
    for _ in 0..mult {
        power = shift.mul(&power);
    }
    let kernel = power.kernel_basis()?;
    if kernel.len() != mult {
        return Ok(None); // fall back to the float route
    }
    // K (d x mult) column matrix; solve K R = M K for each map
    let mut k = DenseMatrix::zero(d, mult, field);
    for (j, v) in kernel.iter().enumerate() {
        for (i, c) in v.iter().enumerate() {
            k.set(i, j, c.clone());
        }
    }
    let mut chart_exact = Vec::with_capacity(set.maps.len());
    for m in &set.maps {
        let mk = m.mul(&k);
        let restriction = match k.solve(&mk) {
            Ok(r) => r,
            Err(_) => return Ok(None),
        };
        let tr = match restriction.trace() {
            Scalar::Rat(t) => t,
            _ => unreachable!(),
        };
        chart_exact.push(Scalar::Rat(tr / BigRational::from_integer(BigInt::from(mult))));
    }
    let coords_exact = lift_chart_point(&set.h, &set.chart_indices, &chart_exact)
        .map_err(|_| EigenError::SubspaceMismatch { expected: mult, found: kernel.len() })?;
    let coords: Vec<Complex64> = coords_exact
        .iter()
        .map(|s| Complex64::new(s.to_f64(), 0.0))
        .collect();
    let chart: Vec<Complex64> = chart_exact.iter().map(|s| Complex64::new(s.to_f64(), 0.0)).collect();
    // residual against the maps on the float image of the kernel basis
    let basis_f: Vec<Vec<Complex64>> = orthonormalize(
        &kernel
            .iter()
            .map(|v| v.iter().map(|c| Complex64::new(c.to_f64(), 0.0)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    );
    let maps_f: Vec<CMat> = set.maps.iter().map(to_cmat).collect();
    let residual = point_residual(&maps_f, &basis_f, &chart, gb, tol);
    Ok(Some(RecoveredPoint {
        coords,
        exact_coords: Some(coords_exact),
        chart,
        multiplicity: mult,
        residual,
        is_complex: false,
    }))
}

fn float_point(
    set: &MultMapSet,
    maps_f: &[CMat],
    mc_f: &CMat,
    root: Complex64,
    mult: usize,
    tol: f64,
    gb: Option<&GroebnerBasis>,
) -> Result<RecoveredPoint, EigenError> {
    let shifted = cshift(mc_f, root);
    let power = cpow(&shifted, mult);
    // widen the zero threshold until the expected dimension appears
    let mut basis = Vec::new();
    for widen in 0..4 {
        let cand = cnullspace(&power, 1e-10 * 10f64.powi(widen));
        if cand.len() >= mult {
            basis = cand;
            break;
        }
    }
    if basis.len() != mult {
        return Err(EigenError::SubspaceMismatch { expected: mult, found: basis.len() });
    }
    let basis = orthonormalize(&basis);
    if basis.len() != mult {
        return Err(EigenError::SubspaceMismatch { expected: mult, found: basis.len() });
    }
    let chart: Vec<Complex64> = maps_f.iter().map(|m| trace_readout(m, &basis)).collect();
    // complex lift: h = 1 representative, then first-nonzero normalization
    let n = set.h.n;
    let coeff_of = |i: usize| -> Complex64 {
        let mo = crate::bipoly::Monomial::var_x(i, set.h.n, set.h.m);
        Complex64::new(set.h.coeff(&mo).map(|c| c.to_f64()).unwrap_or(0.0), 0.0)
    };
    let pivot = set.pivot_index();
    let mut coords = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut acc = Complex64::new(1.0, 0.0);
    for (&i, z) in set.chart_indices.iter().zip(&chart) {
        coords[i] = *z;
        acc -= coeff_of(i) * z;
    }
    coords[pivot] = acc / coeff_of(pivot);
    let maxc = coords.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
    let lead = coords
        .iter()
        .find(|c| c.norm() > 1e-9 * maxc)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let coords: Vec<Complex64> = coords.iter().map(|c| c / lead).collect();
    let is_complex = coords.iter().any(|c| c.im.abs() > 1e-9 * (1.0 + c.norm()));
    let residual = point_residual(maps_f, &basis, &chart, gb, tol);
    Ok(RecoveredPoint {
        coords,
        exact_coords: None,
        chart,
        multiplicity: mult,
        residual,
        is_complex,
    })
}

/// Residual of a recovered point: how far the invariant subspace is from
/// containing a joint eigenvector, plus the chart-ideal values when a basis
/// is available.
fn point_residual(
    maps_f: &[CMat],
    basis: &[Vec<Complex64>],
    chart: &[Complex64],
    gb: Option<&GroebnerBasis>,
    _tol: f64,
) -> f64 {
    let mu = basis.len();
    let d = if maps_f.is_empty() { 0 } else { maps_f[0].len() };
    let mut worst = 0.0f64;
    for (m, z) in maps_f.iter().zip(chart) {
        // columns (M - z) b for b in basis
        let mut w = czero(d, mu);
        for (j, b) in basis.iter().enumerate() {
            for i in 0..d {
                let img: Complex64 = m[i].iter().zip(b).map(|(a, x)| a * x).sum();
                w[i][j] = img - z * b[i];
            }
        }
        worst = worst.max(sigma_min(&w));
    }
    if let Some(gb) = gb {
        for e in &gb.elements {
            worst = worst.max(e.evaluate_complex(chart).norm());
        }
    }
    worst
}

/// Verify that the characteristic polynomial of the combined map equals the
/// product of (lambda - value)^multiplicity over the recovered points.
/// Returns the verdict and the largest coefficient deviation.
pub fn charpoly_check(
    set: &MultMapSet,
    combo: &[Scalar],
    points: &PointSet,
    tol: f64,
) -> Result<(bool, f64), EigenError> {
    let field = set.h.field;
    let d = set.dim();
    let mut mg = DenseMatrix::zero(d, d, field);
    for (c, m) in combo.iter().zip(&set.maps) {
        mg = mg.add(&m.scale(c));
    }
    let cp = ratpoly_to_f64(&charpoly(&mg)?);
    // expand prod (lambda - g(xi))^mu
    let mut q: Vec<Complex64> = vec![Complex64::new(1.0, 0.0)];
    for p in &points.points {
        let val: Complex64 = combo
            .iter()
            .zip(&p.chart)
            .map(|(c, z)| Complex64::new(c.to_f64(), 0.0) * z)
            .sum();
        for _ in 0..p.multiplicity {
            // multiply q by (lambda - val)
            let mut next = vec![Complex64::new(0.0, 0.0); q.len() + 1];
            for (i, c) in q.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * val;
            }
            q = next;
        }
    }
    if q.len() != cp.len() {
        return Ok((false, f64::INFINITY));
    }
    let scale = cp.iter().map(|c| c.abs()).fold(1.0, f64::max);
    let mut max_dev = 0.0f64;
    for (a, b) in cp.iter().zip(&q) {
        max_dev = max_dev.max((Complex64::new(*a, 0.0) - b).norm());
    }
    Ok((max_dev <= tol * scale, max_dev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::is_admissible;
    use crate::field::FieldSpec;
    use crate::fixtures::{eigenvalue_system, poly, running_example};
    use crate::fglm::{matrix_fglm, ZOrder};
    use crate::macaulay::SystemWorkspace;
    use crate::multmap::{build_mult_maps, mult_map};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn charpoly_of_diagonal() {
        let m = DenseMatrix::from_i64(2, 2, &[2, 0, 0, 3], q());
        let cp = charpoly(&m).unwrap();
        // (x-2)(x-3) = x^2 - 5x + 6
        assert_eq!(cp, vec![rat(6, 1), rat(-5, 1), rat(1, 1)]);
    }

    #[test]
    fn charpoly_rejects_prime_field() {
        let m = DenseMatrix::identity(2, FieldSpec::prime(7).unwrap());
        assert_eq!(charpoly(&m).unwrap_err(), EigenError::PrimeFieldNotSupported);
    }

    #[test]
    fn squarefree_splits_multiplicities() {
        // (x-1)^3 (x-2) = x^4 -5x^3 +9x^2 -7x +2
        let f = vec![rat(2, 1), rat(-7, 1), rat(9, 1), rat(-5, 1), rat(1, 1)];
        let parts = squarefree_decomposition(&f);
        assert_eq!(parts.len(), 2);
        let mults: Vec<usize> = parts.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![1, 3]);
        let degs: Vec<usize> = parts.iter().map(|(p, _)| poly_deg(p)).collect();
        assert_eq!(degs, vec![1, 1]);
    }

    #[test]
    fn rationalize_simple_values() {
        assert_eq!(rationalize(0.5, 1000, 1e-9), Some(rat(1, 2)));
        assert_eq!(rationalize(2.0, 1000, 1e-9), Some(rat(2, 1)));
        assert_eq!(rationalize(1.0 / 3.0, 1000, 1e-9), Some(rat(1, 3)));
        assert!(rationalize(std::f64::consts::PI, 10, 1e-12).is_none());
    }

    #[test]
    fn identity_eigenvalues() {
        let m = DenseMatrix::identity(4, q());
        let ev = eigenvalues(&m).unwrap();
        assert_eq!(ev.len(), 1);
        assert!((ev[0].0 - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(ev[0].1, 4);
    }

    fn running_map_at(a: usize, b: usize, h: &str, g: &str) -> DenseMatrix {
        let ws = SystemWorkspace::new(running_example(q()));
        let form = poly(ws.system(), h);
        let cert = is_admissible(&ws, BiDegree::new(a, b), Some(&form), 0)
            .unwrap()
            .expect("admissible");
        mult_map(&ws, &cert, &poly(ws.system(), g)).unwrap()
    }

    #[test]
    fn eigenvalues_at_32_with_shifted_form() {
        // with h = x0 + x1 the chart values of the two degree-2 points
        // [1:1:1] and [1:0:2] are 1/2 and 0
        let m = running_map_at(3, 2, "x0 + x1", "x1");
        let ev = eigenvalues(&m).unwrap();
        let vals: Vec<(f64, usize)> = ev.iter().map(|(v, m)| (v.re, *m)).collect();
        assert_eq!(ev.iter().map(|(_, m)| m).sum::<usize>(), 4);
        assert!((vals[0].0 - 0.0).abs() < 1e-10 && vals[0].1 == 1);
        assert!((vals[1].0 - 0.5).abs() < 1e-10 && vals[1].1 == 3);
    }

    #[test]
    fn eigenvalues_at_32_with_x0() {
        let m = running_map_at(3, 2, "x0", "x1");
        let ev = eigenvalues(&m).unwrap();
        let vals: Vec<(f64, usize)> = ev.iter().map(|(v, m)| (v.re, *m)).collect();
        assert!((vals[0].0 - 0.0).abs() < 1e-10 && vals[0].1 == 1);
        assert!((vals[1].0 - 1.0).abs() < 1e-10 && vals[1].1 == 3);
    }

    #[test]
    fn eigenvalues_at_24() {
        let shifted = running_map_at(2, 4, "x0 + x1", "x1");
        let ev = eigenvalues(&shifted).unwrap();
        assert_eq!(ev.len(), 1);
        assert!((ev[0].0.re - 0.5).abs() < 1e-10);
        assert_eq!(ev[0].1, 5);

        let plain = running_map_at(2, 4, "x0", "x1");
        let ev2 = eigenvalues(&plain).unwrap();
        assert_eq!(ev2.len(), 1);
        assert!((ev2[0].0.re - 1.0).abs() < 1e-10);
        assert_eq!(ev2[0].1, 5);
    }

    fn running_points(a: usize, b: usize, seed: u64) -> PointSet {
        let ws = SystemWorkspace::new(running_example(q()));
        let h = poly(ws.system(), "x0");
        let cert = is_admissible(&ws, BiDegree::new(a, b), Some(&h), 0)
            .unwrap()
            .unwrap();
        let maps = build_mult_maps(&ws, &cert).unwrap();
        let gb = matrix_fglm(&maps, ZOrder::Lex);
        recover_points(&maps, seed, 1e-8, Some(&gb)).unwrap()
    }

    #[test]
    fn points_at_22() {
        let ps = running_points(2, 2, 11);
        assert_eq!(ps.total_dim, 4);
        assert_eq!(ps.multiplicity_sum(), 4);
        assert_eq!(ps.points.len(), 2);
        // sorted deterministically; find them by chart values
        let find = |z1: f64, z2: f64| {
            ps.points
                .iter()
                .find(|p| (p.chart[0].re - z1).abs() < 1e-8 && (p.chart[1].re - z2).abs() < 1e-8)
                .unwrap_or_else(|| panic!("missing point ({z1},{z2})"))
        };
        let p_one = find(1.0, 1.0);
        assert_eq!(p_one.multiplicity, 3);
        let e = p_one.exact_coords.as_ref().expect("rational point");
        assert_eq!(e[0], q().one());
        assert_eq!(e[1], q().one());
        assert_eq!(e[2], q().one());
        let p_two = find(0.0, 2.0);
        assert_eq!(p_two.multiplicity, 1);
        let e2 = p_two.exact_coords.as_ref().unwrap();
        assert_eq!(e2[0], q().one());
        assert_eq!(e2[1], q().zero());
        assert_eq!(e2[2], q().from_i64(2));
        assert!(ps.points.iter().all(|p| p.residual < 1e-8));
    }

    #[test]
    fn points_at_24_single() {
        let ps = running_points(2, 4, 5);
        assert_eq!(ps.points.len(), 1);
        let p = &ps.points[0];
        assert_eq!(p.multiplicity, 5);
        let e = p.exact_coords.as_ref().unwrap();
        assert_eq!(e, &vec![q().one(), q().one(), q().one()]);
    }

    #[test]
    fn seed_independence() {
        let a = running_points(2, 2, 1);
        let b = running_points(2, 2, 99);
        assert_eq!(a.points.len(), b.points.len());
        for (p, r) in a.points.iter().zip(&b.points) {
            assert_eq!(p.multiplicity, r.multiplicity);
            for (x, y) in p.coords.iter().zip(&r.coords) {
                assert!((x - y).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn diagonal_intro_system_points() {
        let a = DenseMatrix::from_i64(2, 2, &[2, 0, 0, 3], q());
        let ws = SystemWorkspace::new(eigenvalue_system(&a));
        let cert = is_admissible(&ws, BiDegree::new(1, 1), Some(&poly(ws.system(), "x0")), 0)
            .unwrap()
            .unwrap();
        let maps = build_mult_maps(&ws, &cert).unwrap();
        let ps = recover_points(&maps, 7, 1e-8, None).unwrap();
        assert_eq!(ps.points.len(), 2);
        let charts: Vec<f64> = ps.points.iter().map(|p| p.chart[0].re).collect();
        assert!(charts.iter().any(|&c| (c - 2.0).abs() < 1e-9));
        assert!(charts.iter().any(|&c| (c - 3.0).abs() < 1e-9));
        assert!(ps.points.iter().all(|p| p.multiplicity == 1));
    }

    #[test]
    fn charpoly_check_on_running_example() {
        let ws = SystemWorkspace::new(running_example(q()));
        let cert = is_admissible(&ws, BiDegree::new(2, 2), Some(&poly(ws.system(), "x0")), 0)
            .unwrap()
            .unwrap();
        let maps = build_mult_maps(&ws, &cert).unwrap();
        let ps = recover_points(&maps, 3, 1e-8, None).unwrap();
        // g = z2: charpoly must be (x-1)^3 (x-2)
        let combo = vec![q().zero(), q().one()];
        let (ok, dev) = charpoly_check(&maps, &combo, &ps, 1e-8).unwrap();
        assert!(ok, "deviation {dev}");
        // negative control: perturbed multiplicities
        let mut bad = ps.clone();
        bad.points[0].multiplicity += 1;
        bad.points[1].multiplicity -= 1;
        let (ok2, _) = charpoly_check(&maps, &combo, &bad, 1e-8).unwrap();
        assert!(!ok2);
    }

    #[test]
    fn charpoly_check_identity() {
        let ws = SystemWorkspace::new(running_example(q()));
        let cert = is_admissible(&ws, BiDegree::new(2, 4), Some(&poly(ws.system(), "x0")), 0)
            .unwrap()
            .unwrap();
        let maps = build_mult_maps(&ws, &cert).unwrap();
        let ps = recover_points(&maps, 3, 1e-8, None).unwrap();
        let combo = vec![q().one(), q().zero()];
        let (ok, _) = charpoly_check(&maps, &combo, &ps, 1e-8).unwrap();
        assert!(ok);
    }
}
