//! Cross-module integration: certificates feeding maps, maps feeding FGLM,
//! FGLM feeding point recovery, points feeding verification.

use biproj::admissible::{find_admissible, is_admissible, koszul_bound, macaulay_bound};
use biproj::bipoly::{
    change_coords_x, monomials_of, parse_poly, random_linear_form_x, BiDegree, BiPoly, BiSystem,
    CoordChange,
};
use biproj::eigen::recover_points;
use biproj::field::{FieldSpec, Scalar};
use biproj::fglm::{matrix_fglm, randomized_vector_fglm, ZOrder};
use biproj::macaulay::SystemWorkspace;
use biproj::matrix::DenseMatrix;
use biproj::multmap::build_mult_maps;
use biproj::verify::{verify_exact, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn fp() -> FieldSpec {
    FieldSpec::prime(65521).unwrap()
}

fn running_example(field: FieldSpec) -> BiSystem {
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

fn random_bilinear_pair(field: FieldSpec, seed: u64) -> BiSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = || match field {
        FieldSpec::PrimeField(p) => rng.gen_range(1..p as i64),
        _ => rng.gen_range(1..=9i64),
    };
    let build = |c: [i64; 4]| {
        format!("{}*x0*y0 + {}*x0*y1 + {}*x1*y0 + {}*x1*y1", c[0], c[1], c[2], c[3])
    };
    let g1 = build([c(), c(), c(), c()]);
    let g2 = build([c(), c(), c(), c()]);
    BiSystem::from_strings(1, 1, field, &[&g1, &g2]).unwrap()
}

#[test]
fn hilbert_function_invariant_under_x_change() {
    let sys = running_example(fp());
    let ws = SystemWorkspace::new(sys.clone());
    let (moved, _) = change_coords_x(&sys, CoordChange::Seeded(31)).unwrap();
    let ws2 = SystemWorkspace::new(moved);
    for a in 0..4 {
        for b in 0..4 {
            let d = BiDegree::new(a, b);
            assert_eq!(
                ws.hilbert_function(d).unwrap(),
                ws2.hilbert_function(d).unwrap(),
                "HF changed at {d}"
            );
        }
    }
}

#[test]
fn changed_coordinates_make_x0_admissible() {
    // after a generic x-change the plain coordinate x0 is an admissible form
    let sys = running_example(fp());
    let (moved, _) = change_coords_x(&sys, CoordChange::Seeded(5)).unwrap();
    let ws = SystemWorkspace::new(moved);
    let x0 = parse_poly("x0", 2, 2, fp()).unwrap();
    let cert = is_admissible(&ws, BiDegree::new(2, 2), Some(&x0), 0).unwrap();
    assert!(cert.is_some());
}

#[test]
fn stabilization_and_saturation_across_systems() {
    // every certificate found stays admissible one and two steps to the
    // right with the same form, and the colon piece test saturates
    let mut certificates = 0usize;
    let mut systems: Vec<BiSystem> = vec![running_example(fp())];
    for seed in 0..32u64 {
        systems.push(random_bilinear_pair(fp(), 1000 + seed));
    }
    for (k, sys) in systems.iter().enumerate() {
        let ws = SystemWorkspace::new(sys.clone());
        let Ok(cert) = find_admissible(&ws, None, None, 7 + k as u64) else {
            continue;
        };
        certificates += 1;
        let d = cert.degree;
        for step in 1..=2usize {
            let up = BiDegree::new(d.a + step, d.b);
            let again = is_admissible(&ws, up, Some(&cert.form), 0).unwrap();
            assert!(again.is_some(), "system {k}: stabilization failed at {up}");
        }
        assert!(ws.colon_piece_equal(&cert.form, d).unwrap(), "system {k}: colon failed");
        let h2 = cert.form.mul(&cert.form);
        assert!(ws.colon_piece_equal(&h2, d).unwrap(), "system {k}: colon h^2 failed");
    }
    assert!(certificates >= 30, "only {certificates} certificates found");
}

/// Dimension of (I : g)_{deg} computed from scratch: the kernel of
/// multiplication by g into the quotient slice at deg + deg(g).
fn colon_dim_direct(ws: &SystemWorkspace, g: &BiPoly, deg: BiDegree) -> usize {
    let sys = ws.system();
    let gdeg = g.bidegree().unwrap();
    let target = ws
        .quotient_basis(BiDegree::new(deg.a + gdeg.a, deg.b + gdeg.b))
        .unwrap();
    let sources = monomials_of(deg, sys.n, sys.m);
    let mut mat = DenseMatrix::zero(target.dim(), sources.len(), sys.field);
    for (j, u) in sources.iter().enumerate() {
        let nf = target.normal_form(&g.mul_monomial(u)).unwrap();
        for (i, c) in nf.into_iter().enumerate() {
            mat.set(i, j, c);
        }
    }
    sources.len() - mat.rank().unwrap()
}

#[test]
fn two_of_three_rank_criterion() {
    // on random probes, any two of {colon piece equal, quotient-by-g slice
    // empty, horizontal Hilbert equality} force the third; condition (i) is
    // recomputed through an independent preimage kernel
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut probes = 0usize;
    while probes < 60 {
        let sys = random_bilinear_pair(fp(), rng.gen());
        let ws = SystemWorkspace::new(sys.clone());
        let k = rng.gen_range(1..=2usize);
        let g = if k == 1 {
            random_linear_form_x(1, 1, fp(), &mut rng)
        } else {
            let h1 = random_linear_form_x(1, 1, fp(), &mut rng);
            let h2 = random_linear_form_x(1, 1, fp(), &mut rng);
            h1.mul(&h2)
        };
        let a = rng.gen_range(1..=2usize);
        let b = rng.gen_range(1..=2usize);
        let deg = BiDegree::new(a, b);
        let shifted = BiDegree::new(a + k, b);

        let hf_here = ws.hilbert_function(deg).unwrap();
        let hf_shift = ws.hilbert_function(shifted).unwrap();
        let hf_mod_g = ws.hilbert_function_with(&g, shifted).unwrap();

        let colon_dim = colon_dim_direct(&ws, &g, deg);
        let ncols = monomials_of(deg, 1, 1).len();
        let ideal_dim = ncols - hf_here;

        let cond_i = colon_dim == ideal_dim;
        let cond_ii = hf_mod_g == 0;
        let cond_iii = hf_here == hf_shift;
        let held = [cond_i, cond_ii, cond_iii].iter().filter(|&&c| c).count();
        assert!(held != 2, "two-of-three violated: i={cond_i} ii={cond_ii} iii={cond_iii}");
        // cross-check the production predicate against the direct route
        assert_eq!(
            ws.colon_piece_equal(&g, deg).unwrap(),
            cond_i,
            "dimension-identity route disagrees with the preimage kernel"
        );
        probes += 1;
    }
}

#[test]
fn bounds_admissible_on_random_zero_dimensional_systems() {
    for seed in 0..20u64 {
        let sys = random_bilinear_pair(fp(), 500 + seed);
        let ws = SystemWorkspace::new(sys.clone());
        let mb = macaulay_bound(&sys);
        let kb = koszul_bound(&sys);
        assert_eq!(mb, BiDegree::new(1, 1));
        assert_eq!(kb, BiDegree::new(1, 1));
        assert!(
            is_admissible(&ws, mb, None, seed).unwrap().is_some(),
            "macaulay bound not admissible for seed {seed}"
        );
    }
}

#[test]
fn groebner_elements_vanish_on_recovered_points() {
    let ws = SystemWorkspace::new(running_example(q()));
    let h = parse_poly("x0", 2, 2, q()).unwrap();
    for (a, b) in [(2usize, 2usize), (2, 4), (3, 2)] {
        let cert = is_admissible(&ws, BiDegree::new(a, b), Some(&h), 0)
            .unwrap()
            .unwrap();
        let maps = build_mult_maps(&ws, &cert).unwrap();
        let gb = matrix_fglm(&maps, ZOrder::Lex);
        let ps = recover_points(&maps, 17, 1e-8, Some(&gb)).unwrap();
        assert_eq!(ps.multiplicity_sum(), maps.dim());
        for p in &ps.points {
            for e in &gb.elements {
                let v = e.evaluate_complex(&p.chart);
                assert!(v.norm() <= 1e-6, "|g| = {} at ({a},{b})", v.norm());
            }
        }
    }
}

#[test]
fn recovered_points_at_stab_degree_verify() {
    // at b >= the stabilization degree every recovered point is a true
    // projection point
    let sys = random_bilinear_pair(q(), 2024);
    // stab degree is 1 here; (1,1) is admissible
    let ws = SystemWorkspace::new(sys.clone());
    let cert = find_admissible(&ws, Some(1), None, 3).unwrap();
    let maps = build_mult_maps(&ws, &cert).unwrap();
    let ps = recover_points(&maps, 5, 1e-8, None).unwrap();
    assert!(!ps.points.is_empty());
    for p in &ps.points {
        if let Some(coords) = &p.exact_coords {
            let r = verify_exact(&sys, coords, None).unwrap();
            assert_eq!(r.verdict, Verdict::InProjection);
        } else {
            let r = biproj::verify::verify_numeric(&sys, &p.coords, 1e-8, None).unwrap();
            assert_eq!(r.verdict, Verdict::InProjection, "point {:?}", p.coords);
        }
    }
}

#[test]
fn nilpotent_pencil_end_to_end() {
    // (x0 A - x1 I) y for the 2x2 Jordan block at 0: single projected point
    // [1:0] with chart value 0 and kernel ideal (z1^2)
    let sys = BiSystem::from_strings(1, 1, q(), &["x0*y1 - x1*y0", "-x1*y1"]).unwrap();
    let ws = SystemWorkspace::new(sys);
    let cert = find_admissible(&ws, None, None, 11).unwrap();
    assert_eq!(cert.degree, BiDegree::new(1, 1));
    let maps = build_mult_maps(&ws, &cert).unwrap();
    let gb = matrix_fglm(&maps, ZOrder::Lex);
    assert_eq!(gb.element_strings(), vec!["z1^2"]);
    let rnd = randomized_vector_fglm(&maps, ZOrder::Lex, 8);
    assert_eq!(rnd.element_strings(), vec!["z1^2"]);
    let ps = recover_points(&maps, 2, 1e-8, Some(&gb)).unwrap();
    assert_eq!(ps.points.len(), 1);
    let p = &ps.points[0];
    assert_eq!(p.multiplicity, 2);
    assert!(p.chart[0].norm() < 1e-10);
    let exact = p.exact_coords.as_ref().unwrap();
    assert_eq!(exact[0], q().one());
    assert_eq!(exact[1], q().zero());
}

#[test]
fn positive_dimensional_projection_reports_not_found() {
    let sys = BiSystem::from_strings(1, 1, q(), &["x0*y0"]).unwrap();
    let ws = SystemWorkspace::new(sys);
    assert!(find_admissible(&ws, None, None, 1).is_err());
}

#[test]
fn intro_pencil_charpoly_matches_input_matrix() {
    // sanity pass of the eigenvalue formulation with a 4x4 companion-style
    // matrix carrying eigenvalues {1, 2, 3, 4}
    let a = {
        // companion matrix of (x-1)(x-2)(x-3)(x-4) = x^4 -10x^3 +35x^2 -50x +24
        DenseMatrix::from_i64(
            4,
            4,
            &[0, 0, 0, -24, 1, 0, 0, 50, 0, 1, 0, -35, 0, 0, 1, 10],
            q(),
        )
    };
    let gens: Vec<String> = (0..4)
        .map(|i| {
            let mut terms: Vec<String> = Vec::new();
            for j in 0..4 {
                let c = a.get(i, j).to_string();
                if c != "0" {
                    terms.push(format!("{c}*x0*y{j}"));
                }
            }
            terms.push(format!("-1*x1*y{i}"));
            terms.join(" + ").replace("+ -", "- ")
        })
        .collect();
    let refs: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
    let sys = BiSystem::from_strings(1, 3, q(), &refs).unwrap();
    let ws = SystemWorkspace::new(sys);
    // h = x0 makes the chart value the eigenvalue itself
    let x0 = parse_poly("x0", 1, 3, q()).unwrap();
    let cert = is_admissible(&ws, BiDegree::new(1, 1), Some(&x0), 0)
        .unwrap()
        .unwrap();
    let maps = build_mult_maps(&ws, &cert).unwrap();
    let gb = matrix_fglm(&maps, ZOrder::Lex);
    let ps = recover_points(&maps, 9, 1e-8, Some(&gb)).unwrap();
    let mut charts: Vec<f64> = ps.points.iter().map(|p| p.chart[0].re).collect();
    charts.sort_by(|x, y| x.total_cmp(y));
    for (c, e) in charts.iter().zip([1.0, 2.0, 3.0, 4.0]) {
        assert!((c - e).abs() < 1e-8, "{c} vs {e}");
    }
}

#[test]
fn scalar_multiplier_behaves_as_constant() {
    let ws = SystemWorkspace::new(running_example(q()));
    let h = parse_poly("x0", 2, 2, q()).unwrap();
    let cert = is_admissible(&ws, BiDegree::new(2, 2), Some(&h), 0)
        .unwrap()
        .unwrap();
    let three = parse_poly("3", 2, 2, q()).unwrap();
    let m = biproj::multmap::mult_map(&ws, &cert, &three).unwrap();
    let expect = DenseMatrix::identity(4, q()).scale(&Scalar::from_rational(3, 1));
    assert_eq!(m, expect);
}
