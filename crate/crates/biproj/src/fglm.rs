//! Matrix-FGLM: recover a Groebner basis of the kernel ideal of the chart
//! homomorphism from the multiplication matrices, by detecting linear
//! relations between products of the maps along a monomial staircase.

use crate::field::{FieldSpec, Scalar};
use crate::matrix::DenseMatrix;
use crate::multmap::MultMapSet;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Target order on the chart variables z_1 > ... > z_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZOrder {
    Lex,
    DegRevLex,
}

impl ZOrder {
    pub fn cmp_exp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            ZOrder::Lex => a.cmp(b),
            ZOrder::DegRevLex => {
                let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
                match da.cmp(&db) {
                    Ordering::Equal => {}
                    o => return o,
                }
                for (ea, eb) in a.iter().rev().zip(b.iter().rev()) {
                    match ea.cmp(eb) {
                        Ordering::Equal => continue,
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Polynomial in the chart variables z_1..z_n.
#[derive(Debug, Clone, PartialEq)]
pub struct ZPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Scalar>,
}

impl ZPoly {
    pub fn leading_exp(&self, order: ZOrder) -> Option<Vec<u32>> {
        self.terms.keys().max_by(|a, b| order.cmp_exp(a, b)).cloned()
    }

    /// Substitute the multiplication matrices for the variables.
    pub fn evaluate_matrices(&self, maps: &[DenseMatrix], dim: usize, field: FieldSpec) -> DenseMatrix {
        let mut acc = DenseMatrix::zero(dim, dim, field);
        for (exp, c) in &self.terms {
            let mut term = DenseMatrix::identity(dim, field);
            for (i, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    term = maps[i].mul(&term);
                }
            }
            acc = acc.add(&term.scale(c));
        }
        acc
    }

    /// Float evaluation at chart coordinates.
    pub fn evaluate_complex(&self, vals: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (exp, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64(), 0.0);
            for (i, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    t *= vals[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Render with terms descending in `order`, e.g. "z1 + z2 - 2".
    pub fn display(&self, order: ZOrder) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut exps: Vec<&Vec<u32>> = self.terms.keys().collect();
        exps.sort_by(|a, b| order.cmp_exp(b, a));
        let mut out = String::new();
        for (k, exp) in exps.iter().enumerate() {
            let c = &self.terms[*exp];
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = zmono_string(exp);
            if mono == "1" {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

pub fn zmono_string(exp: &[u32]) -> String {
    let mut out = String::new();
    for (i, &e) in exp.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('*');
        }
        out.push_str(&format!("z{}", i + 1));
        if e > 1 {
            out.push_str(&format!("^{e}"));
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// Reduced Groebner basis of the chart ideal: monic elements whose leading
/// terms are pairwise non-divisible and whose tails are standard monomials.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub order: ZOrder,
    pub nvars: usize,
    pub elements: Vec<ZPoly>,
    pub standard_monomials: Vec<Vec<u32>>,
}

impl GroebnerBasis {
    pub fn quotient_dim(&self) -> usize {
        self.standard_monomials.len()
    }

    pub fn element_strings(&self) -> Vec<String> {
        self.elements.iter().map(|e| e.display(self.order)).collect()
    }

    /// Every element must vanish when the maps are substituted.
    pub fn vanishes_on(&self, maps: &[DenseMatrix], dim: usize, field: FieldSpec) -> bool {
        self.elements
            .iter()
            .all(|e| e.evaluate_matrices(maps, dim, field).is_zero())
    }

    /// Standard monomials are closed under division.
    pub fn staircase_closed(&self) -> bool {
        let set: std::collections::HashSet<&Vec<u32>> = self.standard_monomials.iter().collect();
        self.standard_monomials.iter().all(|e| {
            (0..e.len()).all(|i| {
                if e[i] == 0 {
                    return true;
                }
                let mut d = e.clone();
                d[i] -= 1;
                set.contains(&d)
            })
        })
    }
}

impl fmt::Display for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.element_strings().join(", "))
    }
}

/// Incremental exact Gaussian elimination with pivot and combination
/// bookkeeping: offered vectors either extend the independent family or
/// produce the linear combination expressing them in it.
struct DependenceEngine {
    field: FieldSpec,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<Scalar>>,
    nstd: usize,
}

enum Offer {
    Independent,
    /// Coefficients over the previously accepted vectors.
    Dependent(Vec<Scalar>),
}

impl DependenceEngine {
    fn new(field: FieldSpec) -> Self {
        DependenceEngine { field, rows: Vec::new(), pivots: Vec::new(), combos: Vec::new(), nstd: 0 }
    }

    fn offer(&mut self, mut v: Vec<Scalar>) -> Offer {
        let mut cc = vec![self.field.zero(); self.nstd];
        for ((row, &piv), combo) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            if v[piv].is_zero() {
                continue;
            }
            let f = v[piv].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&f.mul(r));
                }
            }
            for (c, k) in cc.iter_mut().zip(combo) {
                if !k.is_zero() {
                    *c = c.add(&f.mul(k));
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return Offer::Dependent(cc);
        };
        let inv = v[p].inv().expect("nonzero pivot");
        let row: Vec<Scalar> = v.iter().map(|x| x.mul(&inv)).collect();
        let mut combo: Vec<Scalar> = cc.iter().map(|c| c.neg().mul(&inv)).collect();
        combo.push(inv);
        self.rows.push(row);
        self.pivots.push(p);
        self.combos.push(combo);
        self.nstd += 1;
        Offer::Independent
    }
}

/// Candidate payloads: full matrices for the deterministic route, image
/// vectors for the randomized one.
trait Payload: Clone {
    fn advance(&self, map: &DenseMatrix) -> Self;
    fn vectorize(&self) -> Vec<Scalar>;
}

#[derive(Clone)]
struct MatPayload(DenseMatrix);

impl Payload for MatPayload {
    fn advance(&self, map: &DenseMatrix) -> Self {
        MatPayload(map.mul(&self.0))
    }
    fn vectorize(&self) -> Vec<Scalar> {
        self.0.entries().to_vec()
    }
}

#[derive(Clone)]
struct VecPayload(Vec<Scalar>);

impl Payload for VecPayload {
    fn advance(&self, map: &DenseMatrix) -> Self {
        VecPayload(map.mul_vec(&self.0))
    }
    fn vectorize(&self) -> Vec<Scalar> {
        self.0.clone()
    }
}

struct OrderedExp {
    exp: Vec<u32>,
    order: ZOrder,
}

impl PartialEq for OrderedExp {
    fn eq(&self, other: &Self) -> bool {
        self.exp == other.exp
    }
}
impl Eq for OrderedExp {}
impl PartialOrd for OrderedExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OrderedExp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp_exp(&self.exp, &other.exp).then_with(|| self.exp.cmp(&other.exp))
    }
}

fn fglm_core<P: Payload>(
    maps: &[DenseMatrix],
    field: FieldSpec,
    order: ZOrder,
    unit: P,
) -> GroebnerBasis {
    let nvars = maps.len();
    let mut engine = DependenceEngine::new(field);
    let mut standard: Vec<Vec<u32>> = Vec::new();
    let mut payloads: Vec<P> = Vec::new();
    let mut elements: Vec<ZPoly> = Vec::new();
    let mut leading: Vec<Vec<u32>> = Vec::new();
    // frontier keyed by the target order; value = (parent std index, variable)
    let mut frontier: BTreeMap<OrderedExp, Option<(usize, usize)>> = BTreeMap::new();
    frontier.insert(OrderedExp { exp: vec![0; nvars], order }, None);
    while let Some((key, origin)) = frontier.pop_first() {
        let exp = key.exp;
        if leading
            .iter()
            .any(|lt| lt.iter().zip(&exp).all(|(l, e)| l <= e))
        {
            continue; // under the staircase of an accepted leading term
        }
        let payload = match origin {
            None => unit.clone(),
            Some((parent, var)) => payloads[parent].advance(&maps[var]),
        };
        match engine.offer(payload.vectorize()) {
            Offer::Independent => {
                let idx = standard.len();
                standard.push(exp.clone());
                payloads.push(payload);
                for var in 0..nvars {
                    let mut next = exp.clone();
                    next[var] += 1;
                    frontier
                        .entry(OrderedExp { exp: next, order })
                        .or_insert(Some((idx, var)));
                }
            }
            Offer::Dependent(cc) => {
                let mut terms = BTreeMap::new();
                terms.insert(exp.clone(), field.one());
                for (s, c) in cc.into_iter().enumerate() {
                    if !c.is_zero() {
                        terms.insert(standard[s].clone(), c.neg());
                    }
                }
                elements.push(ZPoly { nvars, terms });
                leading.push(exp);
            }
        }
    }
    let mut idx: Vec<usize> = (0..elements.len()).collect();
    idx.sort_by(|&i, &j| order.cmp_exp(&leading[j], &leading[i]));
    let elements = idx.into_iter().map(|i| elements[i].clone()).collect();
    standard.sort_by(|a, b| order.cmp_exp(a, b));
    GroebnerBasis { order, nvars, elements, standard_monomials: standard }
}

/// Deterministic matrix-FGLM: dependences are tested between the vectorized
/// map products themselves.
pub fn matrix_fglm(set: &MultMapSet, order: ZOrder) -> GroebnerBasis {
    matrix_fglm_maps(&set.maps, set.dim(), set.h.field, order)
}

/// Lower-level entry taking bare commuting matrices of size `dim`.
pub fn matrix_fglm_maps(
    maps: &[DenseMatrix],
    dim: usize,
    field: FieldSpec,
    order: ZOrder,
) -> GroebnerBasis {
    fglm_core(maps, field, order, MatPayload(DenseMatrix::identity(dim, field)))
}

/// Randomized variant: dependences are tested on the images of one random
/// vector. A verification pass checks every returned element annihilates the
/// maps and falls back to the deterministic route on any failure (including
/// a degenerate sample).
pub fn randomized_vector_fglm(set: &MultMapSet, order: ZOrder, seed: u64) -> GroebnerBasis {
    let field = set.h.field;
    let dim = set.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<Scalar> = (0..dim)
        .map(|_| match field {
            FieldSpec::PrimeField(p) => field.from_i64(rng.gen_range(0..p as i64)),
            _ => field.from_i64(rng.gen_range(-100..=100)),
        })
        .collect();
    randomized_fglm_maps(&set.maps, dim, field, order, v)
}

/// Randomized variant on bare matrices with an explicit probe vector; tests
/// exercise degenerate samples through this entry.
pub fn randomized_fglm_maps(
    maps: &[DenseMatrix],
    dim: usize,
    field: FieldSpec,
    order: ZOrder,
    v: Vec<Scalar>,
) -> GroebnerBasis {
    if dim > 0 && v.iter().all(|c| c.is_zero()) {
        return matrix_fglm_maps(maps, dim, field, order); // degenerate sample
    }
    let candidate = fglm_core(maps, field, order, VecPayload(v));
    if candidate.vanishes_on(maps, dim, field) {
        candidate
    } else {
        matrix_fglm_maps(maps, dim, field, order)
    }
}

/// Independent oracle for the univariate case: the minimal polynomial of a
/// single matrix found by the first linear dependence among the vectorized
/// Krylov sequence I, M, M^2, ...
pub fn krylov_min_poly(m: &DenseMatrix) -> Vec<Scalar> {
    let field = m.field();
    let dim = m.nrows();
    let mut engine = DependenceEngine::new(field);
    let mut power = DenseMatrix::identity(dim, field);
    loop {
        match engine.offer(power.entries().to_vec()) {
            Offer::Independent => power = m.mul(&power),
            Offer::Dependent(cc) => {
                // monic: x^k - sum cc_i x^i
                let mut coeffs: Vec<Scalar> = cc.iter().map(|c| c.neg()).collect();
                coeffs.push(field.one());
                return coeffs;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::is_admissible;
    use crate::bipoly::BiDegree;
    use crate::field::FieldSpec;
    use crate::fixtures::{poly, running_example};
    use crate::macaulay::SystemWorkspace;
    use crate::multmap::build_mult_maps;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn running_maps(a: usize, b: usize) -> MultMapSet {
        let ws = SystemWorkspace::new(running_example(q()));
        let h = poly(ws.system(), "x0");
        let cert = is_admissible(&ws, BiDegree::new(a, b), Some(&h), 0)
            .unwrap()
            .expect("admissible degree");
        build_mult_maps(&ws, &cert).unwrap()
    }

    fn strings(gb: &GroebnerBasis) -> Vec<String> {
        gb.element_strings()
    }

    #[test]
    fn lex_basis_at_22() {
        let maps = running_maps(2, 2);
        let gb = matrix_fglm(&maps, ZOrder::Lex);
        assert_eq!(strings(&gb), vec!["z1 + z2 - 2", "z2^2 - 3*z2 + 2"]);
        assert_eq!(gb.standard_monomials, vec![vec![0, 0], vec![0, 1]]);
        assert!(gb.vanishes_on(&maps.maps, 4, q()));
        assert!(gb.staircase_closed());
    }

    #[test]
    fn lex_basis_at_24_is_reduced() {
        // the chart ideal at (2,4) pins the single point (1,1); the reduced
        // basis is {z1 - 1, z2 - 1} since tails may only use standard
        // monomials (here just 1)
        let maps = running_maps(2, 4);
        assert_eq!(maps.dim(), 5);
        let gb = matrix_fglm(&maps, ZOrder::Lex);
        assert_eq!(strings(&gb), vec!["z1 - 1", "z2 - 1"]);
        assert_eq!(gb.standard_monomials, vec![vec![0, 0]]);
    }

    #[test]
    fn fglm_idempotent() {
        let maps = running_maps(2, 2);
        let a = matrix_fglm(&maps, ZOrder::Lex);
        let b = matrix_fglm(&maps, ZOrder::Lex);
        assert_eq!(a.element_strings(), b.element_strings());
        assert_eq!(a.standard_monomials, b.standard_monomials);
    }

    #[test]
    fn degrevlex_order_also_sound() {
        let maps = running_maps(2, 2);
        let gb = matrix_fglm(&maps, ZOrder::DegRevLex);
        assert!(gb.vanishes_on(&maps.maps, 4, q()));
        assert!(gb.staircase_closed());
        assert_eq!(gb.quotient_dim(), 2);
    }

    #[test]
    fn single_map_gives_minimal_polynomial() {
        let m = DenseMatrix::from_i64(3, 3, &[2, 0, 0, 0, 2, 0, 0, 0, 5], q());
        let gb = matrix_fglm_maps(&[m.clone()], 3, q(), ZOrder::Lex);
        assert_eq!(gb.elements.len(), 1);
        // (z-2)(z-5) = z^2 - 7z + 10
        assert_eq!(strings(&gb), vec!["z1^2 - 7*z1 + 10"]);
        let oracle = krylov_min_poly(&m);
        assert_eq!(oracle.len(), 3);
        assert_eq!(oracle[0], q().from_i64(10));
        assert_eq!(oracle[1], q().from_i64(-7));
        assert_eq!(oracle[2], q().one());
    }

    #[test]
    fn randomized_matches_deterministic() {
        let maps = running_maps(2, 2);
        let det = matrix_fglm(&maps, ZOrder::Lex);
        let rnd = randomized_vector_fglm(&maps, ZOrder::Lex, 12345);
        assert_eq!(det.element_strings(), rnd.element_strings());
    }

    #[test]
    fn randomized_zero_vector_falls_back() {
        let maps = running_maps(2, 2);
        let v = vec![q().zero(); 4];
        let gb = randomized_fglm_maps(&maps.maps, 4, q(), ZOrder::Lex, v);
        assert_eq!(strings(&gb), vec!["z1 + z2 - 2", "z2^2 - 3*z2 + 2"]);
    }

    #[test]
    fn nilpotent_unlucky_vector_falls_back() {
        // a 2x2 Jordan block at 0; v in ker M would suggest z1 but the true
        // kernel ideal is (z1^2)
        let m = DenseMatrix::from_i64(2, 2, &[0, 1, 0, 0], q());
        let v = vec![q().one(), q().zero()];
        assert!(m.mul_vec(&v).iter().all(|c| c.is_zero()));
        let gb = randomized_fglm_maps(&[m], 2, q(), ZOrder::Lex, v);
        assert_eq!(strings(&gb), vec!["z1^2"]);
    }

    #[test]
    fn empty_quotient_yields_unit_ideal() {
        let sys = crate::bipoly::BiSystem::from_strings(1, 0, q(), &["x0", "x1"]).unwrap();
        let ws = SystemWorkspace::new(sys);
        let cert = is_admissible(&ws, BiDegree::new(1, 0), None, 3).unwrap().unwrap();
        let maps = build_mult_maps(&ws, &cert).unwrap();
        let gb = matrix_fglm(&maps, ZOrder::Lex);
        assert_eq!(strings(&gb), vec!["1"]);
        assert!(gb.standard_monomials.is_empty());
    }
}
