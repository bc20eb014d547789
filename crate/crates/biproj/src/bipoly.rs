//! The bigraded ring R = k[x_0..x_n, y_0..y_m] with deg(x_i) = (1,0) and
//! deg(y_j) = (0,1): monomials under the fixed degree-reverse-lexicographic
//! order with y_m > ... > y_0 > x_n > ... > x_0, bihomogeneous polynomials,
//! parsing, evaluation, specialization and coordinate changes.

use crate::field::{FieldSpec, Scalar};
use crate::matrix::DenseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RingError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polynomial is not bihomogeneous; bidegrees present: {0:?}")]
    NotBihomogeneous(Vec<BiDegree>),
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("point must not be identically zero")]
    ZeroPoint,
    #[error("bidegree mismatch: {0} vs {1}")]
    DegreeMismatch(BiDegree, BiDegree),
    #[error("no invertible coordinate change found after {0} attempts")]
    NoInvertibleChange(usize),
    #[error("ring dimensions mismatch")]
    DimensionMismatch,
}

/// Bidegree (a, b) = (x-degree, y-degree). The product order is partial:
/// (a,b) <= (a',b') iff a <= a' and b <= b'.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BiDegree {
    pub a: usize,
    pub b: usize,
}

impl BiDegree {
    pub fn new(a: usize, b: usize) -> Self {
        BiDegree { a, b }
    }

    /// Componentwise partial order.
    pub fn leq(&self, other: &BiDegree) -> bool {
        self.a <= other.a && self.b <= other.b
    }

    pub fn plus(&self, other: &BiDegree) -> BiDegree {
        BiDegree::new(self.a + other.a, self.b + other.b)
    }

    pub fn checked_sub(&self, other: &BiDegree) -> Option<BiDegree> {
        if other.leq(self) {
            Some(BiDegree::new(self.a - other.a, self.b - other.b))
        } else {
            None
        }
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A monomial x^alpha y^beta, exponents stored densely.
///
/// `Ord` is the global artifact order: graded reverse lexicographic with
/// variable order y_m > ... > y_0 > x_n > ... > x_0, ascending. The leading
/// monomial of a set is its maximum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub xexp: Vec<u32>,
    pub yexp: Vec<u32>,
}

impl Monomial {
    pub fn one(n: usize, m: usize) -> Self {
        Monomial { xexp: vec![0; n + 1], yexp: vec![0; m + 1] }
    }

    pub fn var_x(i: usize, n: usize, m: usize) -> Self {
        let mut mo = Self::one(n, m);
        mo.xexp[i] = 1;
        mo
    }

    pub fn var_y(j: usize, n: usize, m: usize) -> Self {
        let mut mo = Self::one(n, m);
        mo.yexp[j] = 1;
        mo
    }

    pub fn bidegree(&self) -> BiDegree {
        BiDegree::new(
            self.xexp.iter().map(|&e| e as usize).sum(),
            self.yexp.iter().map(|&e| e as usize).sum(),
        )
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            xexp: self.xexp.iter().zip(&other.xexp).map(|(a, b)| a + b).collect(),
            yexp: self.yexp.iter().zip(&other.yexp).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.xexp.iter().zip(&other.xexp).all(|(a, b)| a <= b)
            && self.yexp.iter().zip(&other.yexp).all(|(a, b)| a <= b)
    }

    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial {
                xexp: self.xexp.iter().zip(&other.xexp).map(|(a, b)| a - b).collect(),
                yexp: self.yexp.iter().zip(&other.yexp).map(|(a, b)| a - b).collect(),
            })
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            xexp: self.xexp.iter().zip(&other.xexp).map(|(a, b)| *a.max(b)).collect(),
            yexp: self.yexp.iter().zip(&other.yexp).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.xexp.iter().all(|&e| e == 0) && self.yexp.iter().all(|&e| e == 0)
    }

    /// Exponents scanned from the smallest variable upward: x_0..x_n, y_0..y_m.
    fn exps_small_to_large(&self) -> impl Iterator<Item = u32> + '_ {
        self.xexp.iter().copied().chain(self.yexp.iter().copied())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_drl(self, other)
    }
}

/// Degree reverse lexicographic, Eq-style order: compare total degree, then
/// the first differing exponent scanning from the smallest variable (x_0)
/// upward decides -- the monomial carrying the larger exponent there is the
/// smaller one.
pub fn cmp_drl(a: &Monomial, b: &Monomial) -> Ordering {
    let da = a.bidegree();
    let db = b.bidegree();
    let (ta, tb) = (da.a + da.b, db.a + db.b);
    match ta.cmp(&tb) {
        Ordering::Equal => {}
        o => return o,
    }
    for (ea, eb) in a.exps_small_to_large().zip(b.exps_small_to_large()) {
        match ea.cmp(&eb) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// Plain lexicographic with the same variable ranking y_m > ... > y_0 >
/// x_n > ... > x_0.
pub fn cmp_lex(a: &Monomial, b: &Monomial) -> Ordering {
    let large_to_small =
        |m: &Monomial| m.yexp.iter().rev().chain(m.xexp.iter().rev()).copied().collect::<Vec<_>>();
    large_to_small(a).cmp(&large_to_small(b))
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut put = |f: &mut fmt::Formatter<'_>, name: &str, i: usize, e: u32| -> fmt::Result {
            if e == 0 {
                return Ok(());
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{name}{i}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
            Ok(())
        };
        for (i, &e) in self.xexp.iter().enumerate() {
            put(f, "x", i, e)?;
        }
        for (j, &e) in self.yexp.iter().enumerate() {
            put(f, "y", j, e)?;
        }
        Ok(())
    }
}

/// All monomials of bidegree `deg` in the `(n, m)` ring, listed in the fixed
/// column order (descending under the global order, largest monomial first).
/// The count is C(a+n, n) * C(b+m, m).
pub fn monomials_of(deg: BiDegree, n: usize, m: usize) -> Vec<Monomial> {
    let xs = exponent_vectors(deg.a, n + 1);
    let ys = exponent_vectors(deg.b, m + 1);
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for xe in &xs {
        for ye in &ys {
            out.push(Monomial { xexp: xe.clone(), yexp: ye.clone() });
        }
    }
    out.sort();
    out.reverse();
    out
}

fn exponent_vectors(total: usize, nvars: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    fn rec(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, idx: usize, left: usize) {
        if idx + 1 == current.len() {
            current[idx] = left as u32;
            out.push(current.clone());
            current[idx] = 0;
            return;
        }
        for take in 0..=left {
            current[idx] = take as u32;
            rec(out, current, idx + 1, left - take);
        }
        current[idx] = 0;
    }
    rec(&mut out, &mut current, 0, total);
    out
}

/// A bihomogeneous polynomial: every stored monomial shares one bidegree and
/// no zero coefficients are kept. The zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly {
    pub n: usize,
    pub m: usize,
    pub field: FieldSpec,
    terms: BTreeMap<Monomial, Scalar>,
}

impl BiPoly {
    pub fn zero(n: usize, m: usize, field: FieldSpec) -> Self {
        BiPoly { n, m, field, terms: BTreeMap::new() }
    }

    /// Build from terms, combining duplicates and dropping zeros; errors if
    /// the surviving monomials span more than one bidegree.
    pub fn from_terms(
        n: usize,
        m: usize,
        field: FieldSpec,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self, RingError> {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (mo, c) in terms {
            debug_assert_eq!(mo.xexp.len(), n + 1);
            debug_assert_eq!(mo.yexp.len(), m + 1);
            let entry = map.entry(mo).or_insert_with(|| field.zero());
            *entry = entry.add(&c);
        }
        map.retain(|_, c| !c.is_zero());
        let degs: Vec<BiDegree> = {
            let mut d: Vec<BiDegree> = map.keys().map(|mo| mo.bidegree()).collect();
            d.sort();
            d.dedup();
            d
        };
        if degs.len() > 1 {
            return Err(RingError::NotBihomogeneous(degs));
        }
        Ok(BiPoly { n, m, field, terms: map })
    }

    pub fn monomial(n: usize, m: usize, field: FieldSpec, mo: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(mo, field.one());
        BiPoly { n, m, field, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn bidegree(&self) -> Option<BiDegree> {
        self.terms.keys().next().map(|mo| mo.bidegree())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Ascending iteration under the global order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mo: &Monomial) -> Option<&Scalar> {
        self.terms.get(mo)
    }

    /// Largest monomial under the global order.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn scale(&self, c: &Scalar) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero(self.n, self.m, self.field);
        }
        let terms = self.terms.iter().map(|(mo, v)| (mo.clone(), v.mul(c))).collect();
        BiPoly { n: self.n, m: self.m, field: self.field, terms }
    }

    /// Sum; both sides must share a bidegree (or be zero) so the result stays
    /// bihomogeneous.
    pub fn add(&self, other: &BiPoly) -> Result<BiPoly, RingError> {
        match (self.bidegree(), other.bidegree()) {
            (Some(d1), Some(d2)) if d1 != d2 => return Err(RingError::DegreeMismatch(d1, d2)),
            _ => {}
        }
        let mut terms = self.terms.clone();
        for (mo, c) in &other.terms {
            let entry = terms.entry(mo.clone()).or_insert_with(|| self.field.zero());
            *entry = entry.add(c);
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(BiPoly { n: self.n, m: self.m, field: self.field, terms })
    }

    pub fn sub(&self, other: &BiPoly) -> Result<BiPoly, RingError> {
        self.add(&other.scale(&self.field.one().neg()))
    }

    /// Product of bihomogeneous polynomials; bidegrees add.
    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mo = ma.mul(mb);
                let c = ca.mul(cb);
                let entry = terms.entry(mo).or_insert_with(|| self.field.zero());
                *entry = entry.add(&c);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        BiPoly { n: self.n, m: self.m, field: self.field, terms }
    }

    pub fn mul_monomial(&self, mo: &Monomial) -> BiPoly {
        let terms = self.terms.iter().map(|(k, v)| (k.mul(mo), v.clone())).collect();
        BiPoly { n: self.n, m: self.m, field: self.field, terms }
    }

    pub fn pow(&self, k: usize) -> BiPoly {
        let mut acc = BiPoly::monomial(self.n, self.m, self.field, Monomial::one(self.n, self.m));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluate the x-part at a projective point, leaving a homogeneous
    /// polynomial in y (possibly zero).
    pub fn specialize_x(&self, xi: &[Scalar]) -> Result<BiPoly, RingError> {
        if xi.len() != self.n + 1 {
            return Err(RingError::DimensionMismatch);
        }
        if xi.iter().all(|c| c.is_zero()) {
            return Err(RingError::ZeroPoint);
        }
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (mo, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in mo.xexp.iter().enumerate() {
                for _ in 0..e {
                    v = v.mul(&xi[i]);
                }
            }
            if v.is_zero() {
                continue;
            }
            let ymon = Monomial { xexp: vec![0; self.n + 1], yexp: mo.yexp.clone() };
            let entry = terms.entry(ymon).or_insert_with(|| self.field.zero());
            *entry = entry.add(&v);
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(BiPoly { n: self.n, m: self.m, field: self.field, terms })
    }

    /// Full evaluation at scalar coordinates for both blocks.
    pub fn evaluate(&self, xi: &[Scalar], eta: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        for (mo, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in mo.xexp.iter().enumerate() {
                for _ in 0..e {
                    v = v.mul(&xi[i]);
                }
            }
            for (j, &e) in mo.yexp.iter().enumerate() {
                for _ in 0..e {
                    v = v.mul(&eta[j]);
                }
            }
            acc = acc.add(&v);
        }
        acc
    }

    /// Substitute each x_i by a linear form in the x variables; the y block
    /// is untouched. `a` is (n+1)x(n+1) row i giving the image of x_i.
    pub fn substitute_x(&self, a: &DenseMatrix) -> BiPoly {
        let linear_forms: Vec<BiPoly> = (0..=self.n)
            .map(|i| {
                let terms = (0..=self.n).map(|j| {
                    (Monomial::var_x(j, self.n, self.m), a.get(i, j).clone())
                });
                BiPoly::from_terms(self.n, self.m, self.field, terms).expect("linear form")
            })
            .collect();
        self.substitute_block(&linear_forms, true)
    }

    /// Substitute each y_j by a linear form in the y variables.
    pub fn substitute_y(&self, a: &DenseMatrix) -> BiPoly {
        let linear_forms: Vec<BiPoly> = (0..=self.m)
            .map(|j| {
                let terms = (0..=self.m).map(|k| {
                    (Monomial::var_y(k, self.n, self.m), a.get(j, k).clone())
                });
                BiPoly::from_terms(self.n, self.m, self.field, terms).expect("linear form")
            })
            .collect();
        self.substitute_block(&linear_forms, false)
    }

    fn substitute_block(&self, images: &[BiPoly], x_block: bool) -> BiPoly {
        let one = BiPoly::monomial(self.n, self.m, self.field, Monomial::one(self.n, self.m));
        let mut acc = BiPoly::zero(self.n, self.m, self.field);
        for (mo, c) in &self.terms {
            let mut part = one.scale(c);
            let (subst_exps, kept) = if x_block {
                (&mo.xexp, Monomial { xexp: vec![0; self.n + 1], yexp: mo.yexp.clone() })
            } else {
                (&mo.yexp, Monomial { xexp: mo.xexp.clone(), yexp: vec![0; self.m + 1] })
            };
            for (i, &e) in subst_exps.iter().enumerate() {
                for _ in 0..e {
                    part = part.mul(&images[i]);
                }
            }
            part = part.mul_monomial(&kept);
            acc = match acc.add(&part) {
                Ok(p) => p,
                // grading is preserved by linear substitution, so degrees match
                Err(_) => unreachable!("substitution broke the grading"),
            };
        }
        acc
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // print leading monomial first
        let mut first = true;
        for (mo, c) in self.terms.iter().rev() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mo.is_one() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{mo}")?;
            } else {
                write!(f, "{mag}*{mo}")?;
            }
        }
        Ok(())
    }
}

/// A bihomogeneous ideal presentation: ambient P^n x P^m, coefficient field,
/// and nonzero bihomogeneous generators with their recorded bidegrees.
#[derive(Debug, Clone)]
pub struct BiSystem {
    pub n: usize,
    pub m: usize,
    pub field: FieldSpec,
    generators: Vec<BiPoly>,
    degrees: Vec<BiDegree>,
}

impl BiSystem {
    pub fn new(n: usize, m: usize, field: FieldSpec, generators: Vec<BiPoly>) -> Result<Self, RingError> {
        let mut degrees = Vec::with_capacity(generators.len());
        for g in &generators {
            if g.n != n || g.m != m || g.field != field {
                return Err(RingError::DimensionMismatch);
            }
            match g.bidegree() {
                Some(d) => degrees.push(d),
                None => return Err(RingError::ZeroPolynomial),
            }
        }
        Ok(BiSystem { n, m, field, generators, degrees })
    }

    pub fn from_strings(n: usize, m: usize, field: FieldSpec, exprs: &[&str]) -> Result<Self, RingError> {
        let gens = exprs
            .iter()
            .map(|e| parse_poly(e, n, m, field))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, m, field, gens)
    }

    pub fn generators(&self) -> &[BiPoly] {
        &self.generators
    }

    pub fn degrees(&self) -> &[BiDegree] {
        &self.degrees
    }

    /// Componentwise maximum of the generator bidegrees.
    pub fn max_generator_degree(&self) -> BiDegree {
        let a = self.degrees.iter().map(|d| d.a).max().unwrap_or(0);
        let b = self.degrees.iter().map(|d| d.b).max().unwrap_or(0);
        BiDegree::new(a, b)
    }

    /// Componentwise sum of the generator bidegrees.
    pub fn sum_generator_degrees(&self) -> BiDegree {
        self.degrees
            .iter()
            .fold(BiDegree::new(0, 0), |acc, d| acc.plus(d))
    }

    pub fn with_extra_generator(&self, extra: BiPoly) -> Result<BiSystem, RingError> {
        let mut gens = self.generators.clone();
        gens.push(extra);
        BiSystem::new(self.n, self.m, self.field, gens)
    }
}

/// Seed policy for coordinate changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordChange {
    Identity,
    Seeded(u64),
}

/// Apply a random invertible linear change to the x variables; the matrix
/// used is returned for traceability. Up to 5 seeds are tried before failing.
pub fn change_coords_x(sys: &BiSystem, change: CoordChange) -> Result<(BiSystem, DenseMatrix), RingError> {
    let a = sample_invertible(sys.n + 1, sys.field, change)?;
    let gens = sys.generators.iter().map(|g| g.substitute_x(&a)).collect();
    Ok((BiSystem::new(sys.n, sys.m, sys.field, gens)?, a))
}

/// Independent random invertible changes on the x block and the y block.
pub fn change_coords_xy(
    sys: &BiSystem,
    change_x: CoordChange,
    change_y: CoordChange,
) -> Result<(BiSystem, DenseMatrix, DenseMatrix), RingError> {
    let ax = sample_invertible(sys.n + 1, sys.field, change_x)?;
    let ay = sample_invertible(sys.m + 1, sys.field, change_y)?;
    let gens = sys
        .generators
        .iter()
        .map(|g| g.substitute_x(&ax).substitute_y(&ay))
        .collect();
    Ok((BiSystem::new(sys.n, sys.m, sys.field, gens)?, ax, ay))
}

pub fn sample_invertible(size: usize, field: FieldSpec, change: CoordChange) -> Result<DenseMatrix, RingError> {
    match change {
        CoordChange::Identity => Ok(DenseMatrix::identity(size, field)),
        CoordChange::Seeded(seed) => {
            for attempt in 0..5u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
                let m = random_matrix(size, size, field, &mut rng);
                if m.rank().map_err(|_| RingError::DimensionMismatch)? == size {
                    return Ok(m);
                }
            }
            Err(RingError::NoInvertibleChange(5))
        }
    }
}

/// Uniform random matrix entries; over Q the entries are small integers,
/// which is enough genericity at desk scale.
pub fn random_matrix<R: Rng>(rows: usize, cols: usize, field: FieldSpec, rng: &mut R) -> DenseMatrix {
    let mut m = DenseMatrix::zero(rows, cols, field);
    for i in 0..rows {
        for j in 0..cols {
            let v = match field {
                FieldSpec::PrimeField(p) => field.from_i64(rng.gen_range(0..p as i64)),
                _ => field.from_i64(rng.gen_range(-50..=50)),
            };
            m.set(i, j, v);
        }
    }
    m
}

/// Random linear form of bidegree (1,0).
pub fn random_linear_form_x<R: Rng>(n: usize, m: usize, field: FieldSpec, rng: &mut R) -> BiPoly {
    loop {
        let terms: Vec<(Monomial, Scalar)> = (0..=n)
            .map(|i| {
                let c = match field {
                    FieldSpec::PrimeField(p) => field.from_i64(rng.gen_range(0..p as i64)),
                    _ => field.from_i64(rng.gen_range(-50..=50)),
                };
                (Monomial::var_x(i, n, m), c)
            })
            .collect();
        let h = BiPoly::from_terms(n, m, field, terms).expect("linear form");
        if !h.is_zero() {
            return h;
        }
    }
}

/// Scale a projective point so its first nonzero coordinate is 1.
pub fn normalize_point(coords: &[Scalar]) -> Result<Vec<Scalar>, RingError> {
    let lead = coords.iter().find(|c| !c.is_zero()).ok_or(RingError::ZeroPoint)?;
    let inv = lead.inv().map_err(|_| RingError::ZeroPoint)?;
    Ok(coords.iter().map(|c| c.mul(&inv)).collect())
}

// ---------------------------------------------------------------------------
// Expression parser: variables x0..xn / y0..ym, integer and rational
// literals, + - * ^ and parentheses. Products are expanded eagerly; the
// bihomogeneity check runs once on the fully expanded result.
// ---------------------------------------------------------------------------

/// Raw polynomial without the bihomogeneity invariant, used while parsing.
#[derive(Clone)]
struct RawPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl RawPoly {
    fn zero() -> Self {
        RawPoly { terms: BTreeMap::new() }
    }

    fn constant(c: Scalar, n: usize, m: usize) -> Self {
        RawPoly { terms: BTreeMap::new() }.plus_term(Monomial::one(n, m), c)
    }

    fn plus_term(mut self, mo: Monomial, c: Scalar) -> Self {
        if !c.is_zero() {
            self.terms.insert(mo, c);
        }
        self
    }

    fn add(&self, other: &RawPoly, field: FieldSpec) -> RawPoly {
        let mut terms = self.terms.clone();
        for (mo, c) in &other.terms {
            let e = terms.entry(mo.clone()).or_insert_with(|| field.zero());
            *e = e.add(c);
        }
        terms.retain(|_, c| !c.is_zero());
        RawPoly { terms }
    }

    fn neg(&self) -> RawPoly {
        RawPoly { terms: self.terms.iter().map(|(mo, c)| (mo.clone(), c.neg())).collect() }
    }

    fn mul(&self, other: &RawPoly, field: FieldSpec) -> RawPoly {
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mo = ma.mul(mb);
                let c = ca.mul(cb);
                let e = terms.entry(mo).or_insert_with(|| field.zero());
                *e = e.add(&c);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        RawPoly { terms }
    }

    fn pow(&self, k: u32, field: FieldSpec, n: usize, m: usize) -> RawPoly {
        let mut acc = RawPoly::constant(field.one(), n, m);
        for _ in 0..k {
            acc = acc.mul(self, field);
        }
        acc
    }

    fn fix_dims(mut self, n: usize, m: usize) -> RawPoly {
        let terms = std::mem::take(&mut self.terms);
        self.terms = terms
            .into_iter()
            .map(|(mut mo, c)| {
                mo.xexp.resize(n + 1, 0);
                mo.yexp.resize(m + 1, 0);
                (mo, c)
            })
            .collect();
        self
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
    m: usize,
    field: FieldSpec,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, msg: impl Into<String>) -> Result<T, RingError> {
        Err(RingError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn parse_expr(&mut self) -> Result<RawPoly, RingError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.bump();
                self.parse_term()?.neg()
            }
            Some(b'+') => {
                self.bump();
                self.parse_term()?
            }
            _ => self.parse_term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.add(&t, self.field);
                }
                Some(b'-') => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.add(&t.neg(), self.field);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<RawPoly, RingError> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    let f = self.parse_factor()?;
                    acc = acc.mul(&f, self.field);
                }
                Some(b'/') => {
                    self.bump();
                    let f = self.parse_factor()?;
                    if f.terms.len() != 1 || !f.terms.keys().next().unwrap().is_one() {
                        return self.error("division is only allowed by a nonzero constant");
                    }
                    let c = f.terms.values().next().unwrap();
                    let inv = match c.inv() {
                        Ok(v) => v,
                        Err(_) => return self.error("division by zero"),
                    };
                    acc = acc.mul(&RawPoly::constant(inv, self.n, self.m), self.field);
                }
                // juxtaposition like "2x0" is not accepted: explicit '*' only
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<RawPoly, RingError> {
        let base = self.parse_atom()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let e = self.parse_uint()?;
            Ok(base.pow(e, self.field, self.n, self.m))
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&mut self) -> Result<RawPoly, RingError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.parse_expr()?;
                if self.bump() != Some(b')') {
                    return self.error("expected ')'");
                }
                Ok(inner)
            }
            Some(b'-') => {
                self.bump();
                Ok(self.parse_factor()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.parse_uint()?;
                Ok(RawPoly::constant(self.field.from_i64(v as i64), self.n, self.m))
            }
            Some(b'x') | Some(b'y') => {
                let is_x = self.bump() == Some(b'x');
                let idx = self.parse_uint()? as usize;
                let bound = if is_x { self.n } else { self.m };
                if idx > bound {
                    return self.error(format!(
                        "variable index {idx} out of range (max {bound})"
                    ));
                }
                let mo = if is_x {
                    Monomial::var_x(idx, self.n, self.m)
                } else {
                    Monomial::var_y(idx, self.n, self.m)
                };
                Ok(RawPoly::zero().plus_term(mo, self.field.one()))
            }
            Some(c) => self.error(format!("unexpected character '{}'", c as char)),
            None => self.error("unexpected end of input"),
        }
    }

    fn parse_uint(&mut self) -> Result<u32, RingError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a number");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| RingError::Syntax { pos: start, msg: "number too large".into() })
    }
}

/// Parse an expression into a bihomogeneous polynomial.
pub fn parse_poly(text: &str, n: usize, m: usize, field: FieldSpec) -> Result<BiPoly, RingError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, n, m, field };
    let raw = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.error("trailing input");
    }
    BiPoly::from_terms(n, m, field, raw.fix_dims(n, m).terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn parse_linear_generator() {
        let f = parse_poly("2*x0 - x1 - x2", 2, 2, q()).unwrap();
        assert_eq!(f.bidegree(), Some(BiDegree::new(1, 0)));
        assert_eq!(f.num_terms(), 3);
    }

    #[test]
    fn parse_mixed_block_generator() {
        let f = parse_poly("x1*y1^2 - x2*y1^2", 2, 2, q()).unwrap();
        assert_eq!(f.bidegree(), Some(BiDegree::new(1, 2)));
    }

    #[test]
    fn parse_rejects_inhomogeneous() {
        match parse_poly("x0 + y0", 2, 2, q()) {
            Err(RingError::NotBihomogeneous(degs)) => {
                assert_eq!(degs, vec![BiDegree::new(0, 1), BiDegree::new(1, 0)]);
            }
            other => panic!("expected NotBihomogeneous, got {other:?}"),
        }
    }

    #[test]
    fn parse_rational_literal() {
        let f = parse_poly("1/2*x0 + x1", 1, 0, q()).unwrap();
        assert_eq!(
            f.coeff(&Monomial::var_x(0, 1, 0)),
            Some(&Scalar::from_rational(1, 2))
        );
    }

    #[test]
    fn parse_syntax_errors() {
        assert!(matches!(parse_poly("x0 +", 2, 2, q()), Err(RingError::Syntax { .. })));
        assert!(matches!(parse_poly("x9", 2, 2, q()), Err(RingError::Syntax { .. })));
        assert!(matches!(parse_poly("(x0", 2, 2, q()), Err(RingError::Syntax { .. })));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of(BiDegree::new(2, 2), 2, 2).len(), 36);
        assert_eq!(monomials_of(BiDegree::new(0, 0), 2, 2).len(), 1);
        let ms = monomials_of(BiDegree::new(1, 1), 1, 1);
        assert_eq!(ms.len(), 4);
        // descending: x1y1 > x1y0? scan from x0: x1y1=(0,1|0,1), x1y0=(0,1|1,0):
        // first difference at y0, x1y0 carries more -> x1y0 smaller.
        let names: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        assert_eq!(names, vec!["x1*y1", "x1*y0", "x0*y1", "x0*y0"]);
    }

    #[test]
    fn monomial_order_matches_fixture() {
        // degree (0,2) in P^2 x P^2, descending
        let ms = monomials_of(BiDegree::new(0, 2), 2, 2);
        let names: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        assert_eq!(names, vec!["y2^2", "y1*y2", "y1^2", "y0*y2", "y0*y1", "y0^2"]);
    }

    #[test]
    fn product_bidegrees_add() {
        let f = parse_poly("x1*y1^2 - x2*y1^2", 2, 2, q()).unwrap();
        let g = parse_poly("y0", 2, 2, q()).unwrap();
        let p = f.mul(&g);
        assert_eq!(p.bidegree(), Some(BiDegree::new(1, 3)));
        assert_eq!(p.num_terms(), 2);
        let f2 = parse_poly("x1*y2 - x2*y2", 2, 2, q()).unwrap();
        assert_eq!(f2.mul(&g).bidegree(), Some(BiDegree::new(1, 2)));
    }

    #[test]
    fn product_difference_of_squares() {
        let a = parse_poly("x0 - x1", 1, 0, q()).unwrap();
        let b = parse_poly("x0 + x1", 1, 0, q()).unwrap();
        let expect = parse_poly("x0^2 - x1^2", 1, 0, q()).unwrap();
        assert_eq!(a.mul(&b), expect);
    }

    #[test]
    fn multiply_by_one_is_identity() {
        let f = parse_poly("x1*y0 - x1*y1 - x2*y2", 2, 2, q()).unwrap();
        let one = parse_poly("1", 2, 2, q()).unwrap();
        assert_eq!(f.mul(&one), f);
    }

    #[test]
    fn specialization_examples() {
        let f = parse_poly("2*x0 - x1 - x2", 2, 2, q()).unwrap();
        let xi = vec![q().one(), q().one(), q().one()];
        assert!(f.specialize_x(&xi).unwrap().is_zero());

        let g = parse_poly("x1*y2 - x2*y2", 2, 2, q()).unwrap();
        let xi2 = vec![q().one(), q().zero(), q().from_i64(2)];
        let s = g.specialize_x(&xi2).unwrap();
        let expect = parse_poly("-2*y2", 2, 2, q()).unwrap();
        assert_eq!(s, expect);

        let h = parse_poly("y0^2", 2, 2, q()).unwrap();
        assert_eq!(h.specialize_x(&xi).unwrap(), h);

        let zero_pt = vec![q().zero(), q().zero(), q().zero()];
        assert_eq!(f.specialize_x(&zero_pt), Err(RingError::ZeroPoint));
    }

    #[test]
    fn specialize_commutes_with_y_free_products() {
        let f = parse_poly("x1*y2 - x2*y2", 2, 2, q()).unwrap();
        let g = parse_poly("3*x0 + x2", 2, 2, q()).unwrap();
        let xi = vec![q().from_i64(2), q().from_i64(-1), q().from_i64(5)];
        let lhs = f.mul(&g).specialize_x(&xi).unwrap();
        let gval = g.evaluate(&xi, &[q().one(), q().one(), q().one()]);
        let rhs = f.specialize_x(&xi).unwrap().scale(&gval);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_change_is_noop() {
        let sys = BiSystem::from_strings(2, 2, q(), &["x1*y2 - x2*y2", "x1^2 - x1*x2"]).unwrap();
        let (changed, mat) = change_coords_x(&sys, CoordChange::Identity).unwrap();
        assert_eq!(mat, DenseMatrix::identity(3, q()));
        assert_eq!(changed.generators()[0], sys.generators()[0]);
        assert_eq!(changed.generators()[1], sys.generators()[1]);
    }

    #[test]
    fn coordinate_change_preserves_bidegrees() {
        let sys = BiSystem::from_strings(
            2,
            2,
            q(),
            &["2*x0 - x1 - x2", "x1*y0 - x1*y1 - x2*y2", "x1*y1^2 - x2*y1^2"],
        )
        .unwrap();
        let (changed, _) = change_coords_x(&sys, CoordChange::Seeded(11)).unwrap();
        assert_eq!(changed.degrees(), sys.degrees());
    }

    #[test]
    fn normalize_point_first_nonzero() {
        let pt = vec![q().zero(), q().from_i64(2), q().from_i64(6)];
        let np = normalize_point(&pt).unwrap();
        assert_eq!(np[0], q().zero());
        assert_eq!(np[1], q().one());
        assert_eq!(np[2], q().from_i64(3));
    }

    #[test]
    fn system_rejects_zero_generator() {
        let z = BiPoly::zero(1, 1, q());
        assert_eq!(
            BiSystem::new(1, 1, q(), vec![z]).unwrap_err(),
            RingError::ZeroPolynomial
        );
    }
}
