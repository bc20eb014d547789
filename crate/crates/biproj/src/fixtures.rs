//! Shared systems used across unit tests.

use crate::bipoly::{parse_poly, BiPoly, BiSystem, Monomial};
use crate::field::FieldSpec;
use crate::matrix::DenseMatrix;

/// Running fixture: seven generators in P^2 x P^2 whose projection to the
/// first factor is the single point [1:1:1].
pub fn running_example(field: FieldSpec) -> BiSystem {
    BiSystem::from_strings(
        2,
        2,
        field,
        &[
            "2*x0 - x1 - x2",
            "y0*y2 - y1*y2 - y2^2",
            "x1*y2 - x2*y2",
            "y0^2 - y1^2 - 2*y1*y2 - y2^2",
            "x1*y0 - x1*y1 - x2*y2",
            "x1^2 - x1*x2",
            "x1*y1^2 - x2*y1^2",
        ],
    )
    .unwrap()
}

/// Eigenvalue formulation of a square matrix A: the system
/// (x0*A - x1*Id) * y = 0 in P^1 x P^{d-1}, whose projection consists of the
/// eigenvalue charts [1 : lambda].
pub fn eigenvalue_system(a: &DenseMatrix) -> BiSystem {
    let d = a.nrows();
    assert_eq!(d, a.ncols());
    let n = 1;
    let m = d - 1;
    let field = a.field();
    let gens: Vec<BiPoly> = (0..d)
        .map(|i| {
            let mut terms = Vec::new();
            for j in 0..d {
                // x0 * A[i][j] * y_j
                let mo = Monomial::var_x(0, n, m).mul(&Monomial::var_y(j, n, m));
                terms.push((mo, a.get(i, j).clone()));
            }
            // - x1 * y_i
            let mo = Monomial::var_x(1, n, m).mul(&Monomial::var_y(i, n, m));
            terms.push((mo, field.one().neg()));
            BiPoly::from_terms(n, m, field, terms).unwrap()
        })
        .collect();
    BiSystem::new(n, m, field, gens).unwrap()
}

/// A pair of random (1,1) forms in P^1 x P^1; zero-dimensional for generic
/// coefficients.
pub fn random_bilinear_pair(field: FieldSpec, seed: u64) -> BiSystem {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut coeff = || -> i64 {
        match field {
            FieldSpec::PrimeField(p) => rng.gen_range(1..p as i64),
            _ => rng.gen_range(-9..=9),
        }
    };
    let build = |c: [i64; 4]| {
        format!(
            "{}*x0*y0 + {}*x0*y1 + {}*x1*y0 + {}*x1*y1",
            c[0], c[1], c[2], c[3]
        )
    };
    let g1 = build([coeff(), coeff(), coeff(), coeff()]);
    let g2 = build([coeff(), coeff(), coeff(), coeff()]);
    BiSystem::from_strings(1, 1, field, &[&g1, &g2]).unwrap()
}

/// Convenience parser bound to a system's ring.
pub fn poly(sys: &BiSystem, text: &str) -> BiPoly {
    parse_poly(text, sys.n, sys.m, sys.field).unwrap()
}
