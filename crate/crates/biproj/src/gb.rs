//! Buchberger engine for the bigraded ring, bigeneric initial ideals, and
//! the consistency report relating admissible degrees to minimal generators
//! of the leading-term ideal.

use crate::bipoly::{
    change_coords_xy, cmp_drl, cmp_lex, monomials_of, BiDegree, BiPoly, BiSystem, CoordChange,
    Monomial, RingError,
};
use crate::field::Scalar;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GbError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("Groebner computation requires an exact field")]
    ExactFieldRequired,
}

/// Total monomial order used by the engine. The degree-reverse-lexicographic
/// default ranks every y variable above every x variable (reading the order
/// as all y's over all x's); `Custom` takes an explicit largest-to-smallest
/// variable list, x variables indexed 0..=n and y variables n+1..=n+m+1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    DrlEq51,
    Lex,
    Custom(Vec<usize>),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::DrlEq51 => cmp_drl(a, b),
            MonomialOrder::Lex => cmp_lex(a, b),
            MonomialOrder::Custom(ranking) => {
                let deg = |mo: &Monomial| {
                    mo.xexp.iter().chain(mo.yexp.iter()).map(|&e| e as usize).sum::<usize>()
                };
                match deg(a).cmp(&deg(b)) {
                    Ordering::Equal => {}
                    o => return o,
                }
                let exp_of = |mo: &Monomial, var: usize| -> u32 {
                    let nx = mo.xexp.len();
                    if var < nx {
                        mo.xexp[var]
                    } else {
                        mo.yexp[var - nx]
                    }
                };
                // reverse-lex tiebreak: scan smallest variable first
                for &v in ranking.iter().rev() {
                    match exp_of(a, v).cmp(&exp_of(b, v)) {
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

/// Reduced Groebner basis of a bihomogeneous ideal: monic elements with
/// pairwise non-divisible leading monomials and fully reduced tails.
#[derive(Debug, Clone)]
pub struct GroebnerBasisBigraded {
    pub order: MonomialOrder,
    pub elements: Vec<BiPoly>,
    pub leading: Vec<Monomial>,
}

fn leading_monomial<'a>(p: &'a BiPoly, order: &MonomialOrder) -> &'a Monomial {
    p.terms()
        .map(|(mo, _)| mo)
        .max_by(|a, b| order.cmp(a, b))
        .expect("leading monomial of zero polynomial")
}

fn make_monic(p: &BiPoly, order: &MonomialOrder) -> BiPoly {
    let lm = leading_monomial(p, order).clone();
    let lc = p.coeff(&lm).expect("leading coefficient").clone();
    p.scale(&lc.inv().expect("unit leading coefficient"))
}

/// Full normal form of `p` with respect to `basis` (leading and tail
/// reduction).
pub fn reduce(p: &BiPoly, basis: &[BiPoly], order: &MonomialOrder) -> BiPoly {
    let field = p.field;
    let lms: Vec<(Monomial, &BiPoly)> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| (leading_monomial(g, order).clone(), g))
        .collect();
    let mut work = p.clone();
    let mut remainder = BiPoly::zero(p.n, p.m, field);
    while !work.is_zero() {
        let lm = leading_monomial(&work, order).clone();
        let lc = work.coeff(&lm).unwrap().clone();
        let mut reduced = false;
        for (glm, g) in &lms {
            if let Some(q) = lm.checked_div(glm) {
                let glc = g.coeff(glm).unwrap();
                let factor = lc.div(glc).expect("unit leading coefficient");
                let sub = g.mul_monomial(&q).scale(&factor);
                work = work.sub(&sub).expect("reduction stays within the bidegree");
                reduced = true;
                break;
            }
        }
        if !reduced {
            // move the irreducible leading term into the remainder
            let term = BiPoly::from_terms(p.n, p.m, field, [(lm.clone(), lc.clone())])
                .expect("single term");
            remainder = match remainder.add(&term) {
                Ok(r) => r,
                Err(_) => term.clone(), // first term decides the bidegree
            };
            work = work.sub(&term).expect("same bidegree");
        }
    }
    remainder
}

fn s_polynomial(f: &BiPoly, g: &BiPoly, order: &MonomialOrder) -> BiPoly {
    let lf = leading_monomial(f, order).clone();
    let lg = leading_monomial(g, order).clone();
    let lcm = lf.lcm(&lg);
    let uf = lcm.checked_div(&lf).unwrap();
    let ug = lcm.checked_div(&lg).unwrap();
    let cf = f.coeff(&lf).unwrap().clone();
    let cg = g.coeff(&lg).unwrap().clone();
    let a = f.mul_monomial(&uf).scale(&cf.inv().expect("unit"));
    let b = g.mul_monomial(&ug).scale(&cg.inv().expect("unit"));
    a.sub(&b).expect("S-polynomial of bihomogeneous inputs is bihomogeneous")
}

type Pair = (usize, Monomial, usize, usize); // (lcm total degree, lcm, i, j)

/// Gebauer-Moeller update: add generator index `t` to the pair queue,
/// discarding pairs by the M, F, B and product criteria.
fn update_pairs(pairs: &mut BTreeSet<Pair>, lms: &[Monomial], t: usize) {
    let lt = &lms[t];
    let new_lcms: Vec<Monomial> = (0..t).map(|i| lms[i].lcm(lt)).collect();
    // M criterion: drop (i,t) when another new lcm properly divides its lcm
    let keep_m: Vec<bool> = (0..t)
        .map(|i| {
            !new_lcms
                .iter()
                .enumerate()
                .any(|(j, lj)| j != i && lj.divides(&new_lcms[i]) && *lj != new_lcms[i])
        })
        .collect();
    // F criterion: one representative per lcm class, preferring a coprime one
    // so the product criterion can discard the whole class
    let mut chosen: Vec<(Monomial, usize)> = Vec::new();
    for i in 0..t {
        if !keep_m[i] {
            continue;
        }
        let coprime = |k: usize| lms[k].mul(lt) == new_lcms[k];
        match chosen.iter_mut().find(|(l, _)| *l == new_lcms[i]) {
            Some(slot) => {
                if coprime(i) && !coprime(slot.1) {
                    slot.1 = i;
                }
            }
            None => chosen.push((new_lcms[i].clone(), i)),
        }
    }
    // B criterion on the old queue
    let old: Vec<Pair> = pairs.iter().cloned().collect();
    for p in old {
        let (_, ref lcm, i, j) = p;
        if lt.divides(lcm) && lms[i].lcm(lt) != *lcm && lms[j].lcm(lt) != *lcm {
            pairs.remove(&p);
        }
    }
    // product criterion on the survivors
    for (lcm, i) in chosen {
        if lms[i].mul(lt) != lcm {
            let d = lcm.bidegree();
            pairs.insert((d.a + d.b, lcm, i, t));
        }
    }
}

/// Buchberger with the normal strategy: smallest lcm first, full reductions,
/// reduced basis on output. Termination is the classical Dickson argument.
pub fn buchberger(sys: &BiSystem, order: &MonomialOrder) -> Result<GroebnerBasisBigraded, GbError> {
    if !sys.field.is_exact() {
        return Err(GbError::ExactFieldRequired);
    }
    let mut basis: Vec<BiPoly> = Vec::new();
    let mut lms: Vec<Monomial> = Vec::new();
    let mut pairs: BTreeSet<Pair> = BTreeSet::new();
    for g in sys.generators() {
        if g.is_zero() {
            continue;
        }
        let g = make_monic(g, order);
        lms.push(leading_monomial(&g, order).clone());
        basis.push(g);
        update_pairs(&mut pairs, &lms, basis.len() - 1);
    }
    while let Some(pair) = pairs.iter().next().cloned() {
        pairs.remove(&pair);
        let (_, _, i, j) = pair;
        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = reduce(&s, &basis, order);
        if r.is_zero() {
            continue;
        }
        let r = make_monic(&r, order);
        lms.push(leading_monomial(&r, order).clone());
        basis.push(r);
        update_pairs(&mut pairs, &lms, basis.len() - 1);
    }
    // minimalize: drop elements whose leading monomial is divisible by another
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j
                && keep[j]
                && lms[j].divides(&lms[i])
                && (lms[j] != lms[i] || j < i)
            {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<BiPoly> =
        basis.into_iter().zip(&keep).filter(|(_, k)| **k).map(|(g, _)| g).collect();
    // tail-reduce each element against the others
    let mut reduced: Vec<BiPoly> = Vec::with_capacity(minimal.len());
    for (i, g) in minimal.iter().enumerate() {
        let others: Vec<BiPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, h)| h.clone())
            .collect();
        let r = reduce(g, &others, order);
        debug_assert!(!r.is_zero());
        reduced.push(make_monic(&r, order));
    }
    reduced.sort_by(|a, b| order.cmp(leading_monomial(a, order), leading_monomial(b, order)));
    let leading = reduced.iter().map(|g| leading_monomial(g, order).clone()).collect();
    Ok(GroebnerBasisBigraded { order: order.clone(), elements: reduced, leading })
}

impl GroebnerBasisBigraded {
    /// Normal form with respect to this basis.
    pub fn normal_form(&self, p: &BiPoly) -> BiPoly {
        reduce(p, &self.elements, &self.order)
    }

    /// Hilbert function read off the staircase: monomials of bidegree `deg`
    /// not divisible by any leading monomial.
    pub fn staircase_hf(&self, deg: BiDegree, n: usize, m: usize) -> usize {
        monomials_of(deg, n, m)
            .iter()
            .filter(|mo| !self.leading.iter().any(|lm| lm.divides(mo)))
            .count()
    }

    /// Standard monomials of bidegree `deg`, ascending in the global order.
    pub fn standard_monomials(&self, deg: BiDegree, n: usize, m: usize) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = monomials_of(deg, n, m)
            .into_iter()
            .filter(|mo| !self.leading.iter().any(|lm| lm.divides(mo)))
            .collect();
        out.reverse();
        out
    }

    /// All S-pairs reduce to zero; a post-hoc Buchberger criterion check.
    pub fn certify(&self) -> bool {
        for i in 0..self.elements.len() {
            for j in (i + 1)..self.elements.len() {
                let s = s_polynomial(&self.elements[i], &self.elements[j], &self.order);
                if !reduce(&s, &self.elements, &self.order).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Minimal generators of the leading-term ideal, with bidegrees.
pub fn minimal_lt_generators(gb: &GroebnerBasisBigraded) -> Vec<(Monomial, BiDegree)> {
    let mut mins: Vec<Monomial> = Vec::new();
    for lm in &gb.leading {
        if !gb.leading.iter().any(|o| o != lm && o.divides(lm)) && !mins.contains(lm) {
            mins.push(lm.clone());
        }
    }
    mins.sort();
    mins.into_iter()
        .map(|mo| {
            let d = mo.bidegree();
            (mo, d)
        })
        .collect()
}

/// Result of a bigeneric initial ideal computation.
#[derive(Debug, Clone)]
pub struct BigIn {
    /// Minimal generators from the canonical (majority) run.
    pub generators: Vec<(Monomial, BiDegree)>,
    /// Multiset of generator bidegrees.
    pub degree_multiset: BTreeMap<BiDegree, usize>,
    /// Whether all three seeds agreed.
    pub stable: bool,
    pub seed_multisets: Vec<BTreeMap<BiDegree, usize>>,
}

fn degree_multiset(gens: &[(Monomial, BiDegree)]) -> BTreeMap<BiDegree, usize> {
    let mut out = BTreeMap::new();
    for (_, d) in gens {
        *out.entry(*d).or_insert(0) += 1;
    }
    out
}

/// One bigin run with explicit coordinate changes (identity changes give the
/// plain initial ideal, used in tests).
pub fn bigin_with(
    sys: &BiSystem,
    change_x: CoordChange,
    change_y: CoordChange,
) -> Result<Vec<(Monomial, BiDegree)>, GbError> {
    let (moved, _, _) = change_coords_xy(sys, change_x, change_y)?;
    let gb = buchberger(&moved, &MonomialOrder::DrlEq51)?;
    Ok(minimal_lt_generators(&gb))
}

/// Bigeneric initial ideal: independent random linear changes on the x and y
/// blocks, Buchberger under the default order, minimal generators of the
/// leading-term ideal. Three seeds vote on the bidegree multiset; a mismatch
/// is reported through `stable`, not an error.
pub fn bigin(sys: &BiSystem, seed: u64) -> Result<BigIn, GbError> {
    let mut runs = Vec::new();
    for k in 0..3u64 {
        let sx = CoordChange::Seeded(seed.wrapping_add(k).wrapping_mul(0x9e3779b97f4a7c15).max(1));
        let sy = CoordChange::Seeded(seed.wrapping_add(k).wrapping_mul(0xc2b2ae3d27d4eb4f).max(1));
        let gens = bigin_with(sys, sx, sy)?;
        let ms = degree_multiset(&gens);
        runs.push((gens, ms));
    }
    let stable = runs.iter().all(|(_, ms)| *ms == runs[0].1);
    // majority vote on the multiset
    let canonical_idx = (0..3)
        .find(|&i| (0..3).filter(|&j| runs[j].1 == runs[i].1).count() >= 2)
        .unwrap_or(0);
    let seed_multisets = runs.iter().map(|(_, ms)| ms.clone()).collect();
    let (generators, degree_multiset) = runs.swap_remove(canonical_idx);
    Ok(BigIn { generators, degree_multiset, stable, seed_multisets })
}

/// One admissibility-column check: a probed degree whose whole column
/// (a, b' >= b) is admissible forbids a minimal generator at (a+1, b).
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnCheck {
    pub probe: BiDegree,
    pub forbidden: BiDegree,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub checks: Vec<ColumnCheck>,
    pub consistent: bool,
}

/// Cross-check the admissible probes against the bigin generator bidegrees:
/// for each probe (a,b) known admissible at every tested b' >= b, no minimal
/// generator may sit at (a+1, b).
pub fn consistency_report(probes: &[BiDegree], bigin_degrees: &[BiDegree]) -> ConsistencyReport {
    let gens: BTreeSet<BiDegree> = bigin_degrees.iter().copied().collect();
    let checks: Vec<ColumnCheck> = probes
        .iter()
        .map(|&p| {
            let forbidden = BiDegree::new(p.a + 1, p.b);
            ColumnCheck { probe: p, forbidden, violated: gens.contains(&forbidden) }
        })
        .collect();
    let consistent = checks.iter().all(|c| !c.violated);
    ConsistencyReport { checks, consistent }
}

/// Format an element for reports: monic, leading term first.
pub fn poly_to_string(p: &BiPoly, order: &MonomialOrder) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(&Monomial, &Scalar)> = p.terms().collect();
    terms.sort_by(|a, b| order.cmp(b.0, a.0));
    let mut out = String::new();
    for (k, (mo, c)) in terms.iter().enumerate() {
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
        if mo.is_one() {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&mo.to_string());
        } else {
            out.push_str(&format!("{mag}*{mo}"));
        }
    }
    out
}
