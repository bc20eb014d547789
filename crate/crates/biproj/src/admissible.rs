//! Detection and search of admissible bidegrees, plus the degree bounds that
//! cap the search.

use crate::bipoly::{random_linear_form_x, BiDegree, BiPoly, BiSystem};
use crate::macaulay::{MacaulayError, SystemWorkspace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdmissibleError {
    #[error(transparent)]
    Macaulay(#[from] MacaulayError),
    #[error("supplied form must have bidegree (1,0), got {0}")]
    NotLinearForm(BiDegree),
    #[error("no admissible bidegree found below the cap {0}; the projection may be positive-dimensional")]
    NotFoundBelowCap(BiDegree),
}

/// Witness that a bidegree is admissible: the linear form, the stabilized
/// Hilbert value, and how many random forms were tried.
#[derive(Debug, Clone)]
pub struct AdmissibleCertificate {
    pub degree: BiDegree,
    pub form: BiPoly,
    pub hf_value: usize,
    pub seeds_tried: usize,
}

/// How many independent random forms are sampled before declaring a degree
/// non-admissible. Over a large field a truly admissible degree fails all
/// three only with negligible probability.
pub const RANDOM_FORM_TRIES: usize = 3;

/// Genericity of random linear forms is unreliable over tiny fields.
pub fn genericity_warning(sys: &BiSystem) -> Option<String> {
    match sys.field.size() {
        Some(q) if q < 100 => Some(format!(
            "field of size {q} is small; random linear forms may miss the generic locus"
        )),
        _ => None,
    }
}

/// Check whether `deg` is admissible. The three conditions are: generators
/// fit below `deg`, HF(a,b) = HF(a+1,b), and HF_{R/(I,h)}(deg) = 0 for the
/// supplied form or for one of `RANDOM_FORM_TRIES` random ones.
pub fn is_admissible(
    ws: &SystemWorkspace,
    deg: BiDegree,
    h: Option<&BiPoly>,
    seed: u64,
) -> Result<Option<AdmissibleCertificate>, AdmissibleError> {
    let sys = ws.system();
    if !sys.degrees().iter().all(|d| d.leq(&deg)) {
        return Ok(None);
    }
    let hf_here = ws.hilbert_function(deg)?;
    let hf_next = ws.hilbert_function(BiDegree::new(deg.a + 1, deg.b))?;
    if hf_here != hf_next {
        return Ok(None);
    }
    if let Some(h) = h {
        let hdeg = h.bidegree().ok_or(AdmissibleError::NotLinearForm(BiDegree::new(0, 0)))?;
        if hdeg != BiDegree::new(1, 0) {
            return Err(AdmissibleError::NotLinearForm(hdeg));
        }
        if ws.hilbert_function_with(h, deg)? == 0 {
            return Ok(Some(AdmissibleCertificate {
                degree: deg,
                form: h.clone(),
                hf_value: hf_here,
                seeds_tried: 0,
            }));
        }
        return Ok(None);
    }
    for attempt in 0..RANDOM_FORM_TRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let form = random_linear_form_x(sys.n, sys.m, sys.field, &mut rng);
        if ws.hilbert_function_with(&form, deg)? == 0 {
            return Ok(Some(AdmissibleCertificate {
                degree: deg,
                form,
                hf_value: hf_here,
                seeds_tried: attempt + 1,
            }));
        }
    }
    Ok(None)
}

/// Scan bidegrees at or above the generator degrees, row-major (fixed b,
/// increasing a), stopping at the first certificate. The cap defaults to the
/// generalized Koszul bound.
pub fn find_admissible(
    ws: &SystemWorkspace,
    min_b: Option<usize>,
    cap: Option<BiDegree>,
    seed: u64,
) -> Result<AdmissibleCertificate, AdmissibleError> {
    let sys = ws.system();
    let start = sys.max_generator_degree();
    let cap = cap.unwrap_or_else(|| koszul_bound(sys));
    let b0 = start.b.max(min_b.unwrap_or(0));
    for b in b0..=cap.b.max(b0) {
        for a in start.a..=cap.a.max(start.a) {
            if let Some(cert) = is_admissible(ws, BiDegree::new(a, b), None, seed)? {
                return Ok(cert);
            }
        }
    }
    Err(AdmissibleError::NotFoundBelowCap(cap))
}

/// Sum of generator bidegrees minus (n, m), clamped below by the maximum
/// generator degree. Only proven admissible when V(I) is a finite set of
/// points; callers surface `MACAULAY_BOUND_WARNING` alongside.
pub fn macaulay_bound(sys: &BiSystem) -> BiDegree {
    let sum = sys.sum_generator_degrees();
    let maxdeg = sys.max_generator_degree();
    let a = sum.a.saturating_sub(sys.n).max(maxdeg.a);
    let b = sum.b.saturating_sub(sys.m).max(maxdeg.b);
    BiDegree::new(a, b)
}

pub const MACAULAY_BOUND_WARNING: &str =
    "the Macaulay bound is proven admissible only when V(I) is finite; treat it as heuristic otherwise";

/// Number of degree-`l` monomials in the y block.
fn n_monomials_y(l: isize, m: usize) -> usize {
    if l < 0 {
        0
    } else {
        binomial(l as usize + m, m)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Generalized Koszul bound: valid whenever the projection is finite.
/// b* = max(sum b_i - m, max b_i) and
/// a* = max(sum_i a_i * N_{b* - b_i} - n, max a_i), N_l = C(l+m, m).
pub fn koszul_bound(sys: &BiSystem) -> BiDegree {
    let maxdeg = sys.max_generator_degree();
    let sum_b: isize = sys.degrees().iter().map(|d| d.b as isize).sum();
    let b_star = (sum_b - sys.m as isize).max(maxdeg.b as isize).max(0) as usize;
    let mut acc: isize = 0;
    for d in sys.degrees() {
        acc += d.a as isize * n_monomials_y(b_star as isize - d.b as isize, sys.m) as isize;
    }
    let a_star = (acc - sys.n as isize).max(maxdeg.a as isize).max(0) as usize;
    BiDegree::new(a_star, b_star)
}

/// Smallest b with pi_b = pi: max(sum b_i - m, max b_i), at least 0.
pub fn projection_stab_degree(sys: &BiSystem) -> usize {
    let sum_b: isize = sys.degrees().iter().map(|d| d.b as isize).sum();
    let max_b = sys.max_generator_degree().b as isize;
    (sum_b - sys.m as isize).max(max_b).max(0) as usize
}
