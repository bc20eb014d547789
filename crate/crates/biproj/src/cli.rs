//! Command-line front end: loads a system description, runs the requested
//! stage of the pipeline, and prints machine-readable JSON (or a short text
//! summary). Identical configuration and seed give byte-identical output.

use crate::admissible::{
    find_admissible, genericity_warning, is_admissible, koszul_bound, macaulay_bound,
    projection_stab_degree, MACAULAY_BOUND_WARNING,
};
use crate::bipoly::{parse_poly, BiDegree, BiSystem};
use crate::eigen::{recover_points, PointSet};
use crate::field::{FieldSpec, Scalar};
use crate::fglm::{matrix_fglm, randomized_vector_fglm, zmono_string, GroebnerBasis, ZOrder};
use crate::gb::{bigin, buchberger, consistency_report, poly_to_string, MonomialOrder};
use crate::macaulay::SystemWorkspace;
use crate::multmap::{build_mult_maps, MultMapSet};
use crate::verify::{verify_exact, verify_numeric, MembershipReport, Verdict};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "biproj", version, about = "Bihomogeneous systems with a finite projection: admissible degrees, multiplication maps, FGLM, eigenvalue point recovery, membership checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every randomized choice; fixed default keeps runs reproducible.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Override the coefficient field of the input file: "Q" or "Fp<prime>".
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Numerical tolerance for eigenvalue clustering and numeric ranks.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hilbert function table of R/I as CSV, rows a = 0..amax.
    Hilbert {
        system: PathBuf,
        #[arg(long)]
        amax: usize,
        #[arg(long)]
        bmax: usize,
    },
    /// Probe one bidegree (or search) for admissibility.
    Admissible {
        system: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        degree: Option<Vec<usize>>,
        /// Explicit linear form instead of random sampling.
        #[arg(long)]
        h: Option<String>,
    },
    /// Degree bounds: Macaulay, generalized Koszul, projection stabilization.
    Bounds { system: PathBuf },
    /// Multiplication matrices at a bidegree.
    Multmaps {
        system: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        degree: Vec<usize>,
        #[arg(long)]
        h: Option<String>,
    },
    /// Full pipeline: bounds, admissible degree, maps, FGLM, points, checks.
    Solve {
        system: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        degree: Option<Vec<usize>>,
        #[arg(long, default_value = "lex")]
        order: String,
        /// Use the randomized vector FGLM (verified, with fallback).
        #[arg(long)]
        randomized: bool,
    },
    /// Eigenvalue-based point recovery only.
    Eigen {
        system: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        degree: Option<Vec<usize>>,
    },
    /// Membership test for one candidate point.
    Verify {
        system: PathBuf,
        /// Comma-separated projective coordinates, e.g. "1,1,1" or "1,1/2,0".
        #[arg(long)]
        point: String,
        #[arg(long)]
        numeric: bool,
    },
    /// Reduced Groebner basis of the input ideal.
    Gb {
        system: PathBuf,
        #[arg(long, default_value = "drl")]
        order: String,
    },
    /// Bigeneric initial ideal generators with a three-seed stability vote.
    Bigin { system: PathBuf },
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input: missing file, malformed JSON, unparsable polynomial.
    Input(String),
    /// The computation itself reports failure (nothing admissible, singular
    /// data, tolerance breach).
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 3,
            CliError::Domain(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Domain(m) => m,
        }
    }
}

#[derive(Debug, Deserialize)]
struct SystemFile {
    n: usize,
    m: usize,
    field: FieldJson,
    generators: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FieldJson {
    Name(String),
    Fp { #[serde(rename = "Fp")] fp: u32 },
}

fn parse_field_name(name: &str) -> Result<FieldSpec, CliError> {
    if name == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    let digits = name
        .strip_prefix("Fp")
        .map(|rest| rest.trim_start_matches(':'))
        .ok_or_else(|| CliError::Input(format!("unknown field '{name}'; use Q or Fp<prime>")))?;
    let p: u32 = digits
        .parse()
        .map_err(|_| CliError::Input(format!("bad prime in field '{name}'")))?;
    FieldSpec::prime(p).map_err(|e| CliError::Input(e.to_string()))
}

pub fn load_system(path: &Path, field_override: Option<&str>) -> Result<BiSystem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let file: SystemFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("bad system file {}: {e}", path.display())))?;
    let field = match field_override {
        Some(name) => parse_field_name(name)?,
        None => match &file.field {
            FieldJson::Name(name) => parse_field_name(name)?,
            FieldJson::Fp { fp } => {
                FieldSpec::prime(*fp).map_err(|e| CliError::Input(e.to_string()))?
            }
        },
    };
    let refs: Vec<&str> = file.generators.iter().map(|s| s.as_str()).collect();
    BiSystem::from_strings(file.n, file.m, field, &refs)
        .map_err(|e| CliError::Input(format!("bad generator: {e}")))
}

fn parse_degree_pair(v: &Option<Vec<usize>>) -> Option<BiDegree> {
    v.as_ref().map(|d| BiDegree::new(d[0], d[1]))
}

fn parse_exact_point(text: &str, field: FieldSpec) -> Result<Vec<Scalar>, CliError> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            if let Some((num, den)) = part.split_once('/') {
                let n: i64 = num.trim().parse().map_err(|_| bad_coord(part))?;
                let d: i64 = den.trim().parse().map_err(|_| bad_coord(part))?;
                if d == 0 {
                    return Err(bad_coord(part));
                }
                match field {
                    FieldSpec::Rationals => Ok(Scalar::from_rational(n, d)),
                    _ => field
                        .from_i64(d)
                        .inv()
                        .map(|inv| field.from_i64(n).mul(&inv))
                        .map_err(|_| bad_coord(part)),
                }
            } else {
                let n: i64 = part.parse().map_err(|_| bad_coord(part))?;
                Ok(field.from_i64(n))
            }
        })
        .collect()
}

fn bad_coord(part: &str) -> CliError {
    CliError::Input(format!("bad coordinate '{part}'"))
}

fn parse_float_point(text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map(|v| Complex64::new(v, 0.0))
                .map_err(|_| bad_coord(part))
        })
        .collect()
}

fn parse_zorder(name: &str) -> Result<ZOrder, CliError> {
    match name {
        "lex" => Ok(ZOrder::Lex),
        "drl" => Ok(ZOrder::DegRevLex),
        other => Err(CliError::Input(format!("unknown order '{other}'; use lex or drl"))),
    }
}

fn parse_big_order(name: &str) -> Result<MonomialOrder, CliError> {
    match name {
        "drl" => Ok(MonomialOrder::DrlEq51),
        "lex" => Ok(MonomialOrder::Lex),
        other => Err(CliError::Input(format!("unknown order '{other}'; use drl or lex"))),
    }
}

fn complex_string(c: &Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("{}{}{}i", c.re, if c.im < 0.0 { "-" } else { "+" }, c.im.abs())
    }
}

fn degree_json(d: BiDegree) -> Value {
    json!([d.a, d.b])
}

fn membership_json(r: &MembershipReport) -> Value {
    json!({
        "point": r.point,
        "b_used": r.b_used,
        "rank": r.rank,
        "full_rank": r.full_rank,
        "verdict": match r.verdict { Verdict::InProjection => "InProjection", Verdict::NotInProjection => "NotInProjection" },
        "margin": match &r.margin {
            crate::verify::Margin::ExactDeficiency(d) => json!({"exact_deficiency": d}),
            crate::verify::Margin::SingularValueRatio(s) => json!({"singular_value_ratio": s}),
        },
    })
}

fn points_json(ps: &PointSet) -> Value {
    json!({
        "degree_used": degree_json(ps.degree_used),
        "total_dim": ps.total_dim,
        "points": ps.points.iter().map(|p| json!({
            "coords": p.coords.iter().map(complex_string).collect::<Vec<_>>(),
            "exact_coords": p.exact_coords.as_ref().map(|cs| cs.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
            "chart": p.chart.iter().map(complex_string).collect::<Vec<_>>(),
            "multiplicity": p.multiplicity,
            "residual": p.residual,
            "is_complex": p.is_complex,
        })).collect::<Vec<_>>(),
    })
}

fn gb_json(gb: &GroebnerBasis) -> Value {
    json!({
        "order": match gb.order { ZOrder::Lex => "lex", ZOrder::DegRevLex => "drl" },
        "elements": gb.element_strings(),
        "standard_monomials": gb.standard_monomials.iter().map(|e| zmono_string(e)).collect::<Vec<_>>(),
        "dim": gb.quotient_dim(),
    })
}

fn maps_json(set: &MultMapSet) -> Value {
    let maps: Vec<Value> = set
        .maps
        .iter()
        .map(|m| {
            let rows: Vec<Vec<String>> = (0..m.nrows())
                .map(|i| m.row(i).iter().map(|s| s.to_string()).collect())
                .collect();
            json!(rows)
        })
        .collect();
    json!({
        "degree": degree_json(set.degree),
        "h": format!("{}", set.h),
        "chart": set.chart_indices.iter().map(|i| format!("x{i}/h")).collect::<Vec<_>>(),
        "basis": set.basis.basis.iter().map(|mo| mo.to_string()).collect::<Vec<_>>(),
        "maps": maps,
    })
}

struct Ctx {
    seed: u64,
    tol: f64,
    out: OutFormat,
}

fn emit(ctx: &Ctx, value: Value, text: impl FnOnce() -> String) {
    match ctx.out {
        OutFormat::Json => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
        OutFormat::Text => println!("{}", text()),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Ctx { seed: cli.seed, tol: cli.tol, out: cli.out };
    let field_override = cli.field.as_deref();
    match cli.command {
        Command::Hilbert { system, amax, bmax } => {
            let sys = load_system(&system, field_override)?;
            cmd_hilbert(&sys, amax, bmax)
        }
        Command::Admissible { system, degree, h } => {
            let sys = load_system(&system, field_override)?;
            cmd_admissible(&ctx, sys, parse_degree_pair(&degree), h.as_deref())
        }
        Command::Bounds { system } => {
            let sys = load_system(&system, field_override)?;
            cmd_bounds(&ctx, sys)
        }
        Command::Multmaps { system, degree, h } => {
            let sys = load_system(&system, field_override)?;
            let deg = BiDegree::new(degree[0], degree[1]);
            cmd_multmaps(&ctx, sys, deg, h.as_deref())
        }
        Command::Solve { system, degree, order, randomized } => {
            let sys = load_system(&system, field_override)?;
            cmd_solve(&ctx, sys, parse_degree_pair(&degree), &order, randomized)
        }
        Command::Eigen { system, degree } => {
            let sys = load_system(&system, field_override)?;
            cmd_eigen(&ctx, sys, parse_degree_pair(&degree))
        }
        Command::Verify { system, point, numeric } => {
            let sys = load_system(&system, field_override)?;
            cmd_verify(&ctx, sys, &point, numeric)
        }
        Command::Gb { system, order } => {
            let sys = load_system(&system, field_override)?;
            cmd_gb(&ctx, sys, &order)
        }
        Command::Bigin { system } => {
            let sys = load_system(&system, field_override)?;
            cmd_bigin(&ctx, sys)
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn cmd_hilbert(sys: &BiSystem, amax: usize, bmax: usize) -> Result<(), CliError> {
    let ws = SystemWorkspace::new(sys.clone());
    for a in 0..=amax {
        let row: Vec<String> = (0..=bmax)
            .map(|b| ws.hilbert_function(BiDegree::new(a, b)).map(|v| v.to_string()))
            .collect::<Result<_, _>>()
            .map_err(domain)?;
        println!("{}", row.join(","));
    }
    Ok(())
}

fn certificate_json(cert: &crate::admissible::AdmissibleCertificate, warnings: &[String]) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "degree": degree_json(cert.degree),
        "form": format!("{}", cert.form),
        "hf": cert.hf_value,
        "seeds_tried": cert.seeds_tried,
        "warnings": warnings,
    })
}

fn cmd_admissible(
    ctx: &Ctx,
    sys: BiSystem,
    degree: Option<BiDegree>,
    h: Option<&str>,
) -> Result<(), CliError> {
    let warnings: Vec<String> = genericity_warning(&sys).into_iter().collect();
    let h_poly = match h {
        Some(text) => {
            Some(parse_poly(text, sys.n, sys.m, sys.field).map_err(|e| CliError::Input(e.to_string()))?)
        }
        None => None,
    };
    let ws = SystemWorkspace::new(sys);
    let cert = match degree {
        Some(deg) => is_admissible(&ws, deg, h_poly.as_ref(), ctx.seed)
            .map_err(domain)?
            .ok_or_else(|| CliError::Domain(format!("{deg} is not admissible (or the form failed)")))?,
        None => find_admissible(&ws, None, None, ctx.seed).map_err(domain)?,
    };
    emit(ctx, certificate_json(&cert, &warnings), || {
        format!(
            "admissible degree {} with form {} (hf = {}, seeds tried = {})",
            cert.degree, cert.form, cert.hf_value, cert.seeds_tried
        )
    });
    Ok(())
}

fn cmd_bounds(ctx: &Ctx, sys: BiSystem) -> Result<(), CliError> {
    let mac = macaulay_bound(&sys);
    let kos = koszul_bound(&sys);
    let stab = projection_stab_degree(&sys);
    let mut warnings = vec![MACAULAY_BOUND_WARNING.to_string()];
    warnings.extend(genericity_warning(&sys));
    let value = json!({
        "schema": SCHEMA_VERSION,
        "macaulay": degree_json(mac),
        "koszul": degree_json(kos),
        "stab_b": stab,
        "warnings": warnings,
    });
    emit(ctx, value, || {
        format!("macaulay bound {mac}, koszul bound {kos}, projection stabilizes at b = {stab}")
    });
    Ok(())
}

fn certificate_at(
    ws: &SystemWorkspace,
    deg: BiDegree,
    h: Option<&str>,
    seed: u64,
) -> Result<crate::admissible::AdmissibleCertificate, CliError> {
    let sys = ws.system();
    let h_poly = match h {
        Some(text) => Some(
            parse_poly(text, sys.n, sys.m, sys.field).map_err(|e| CliError::Input(e.to_string()))?,
        ),
        None => None,
    };
    if h_poly.is_none() {
        // prefer the plain coordinate chart z_i = x_i/x0 when it works:
        // output stays reproducible and h-independent
        let x0 = parse_poly("x0", sys.n, sys.m, sys.field).expect("coordinate form");
        if let Some(cert) = is_admissible(ws, deg, Some(&x0), seed).map_err(domain)? {
            return Ok(cert);
        }
    }
    is_admissible(ws, deg, h_poly.as_ref(), seed)
        .map_err(domain)?
        .ok_or_else(|| CliError::Domain(format!("{deg} is not admissible (or the form failed)")))
}

/// Re-anchor a searched certificate on h = x0 when that form is admissible
/// at the degree the search found.
fn prefer_x0(
    ws: &SystemWorkspace,
    cert: crate::admissible::AdmissibleCertificate,
    seed: u64,
) -> crate::admissible::AdmissibleCertificate {
    let sys = ws.system();
    let x0 = parse_poly("x0", sys.n, sys.m, sys.field).expect("coordinate form");
    match is_admissible(ws, cert.degree, Some(&x0), seed) {
        Ok(Some(better)) => better,
        _ => cert,
    }
}

fn cmd_multmaps(ctx: &Ctx, sys: BiSystem, deg: BiDegree, h: Option<&str>) -> Result<(), CliError> {
    let ws = SystemWorkspace::new(sys);
    let cert = certificate_at(&ws, deg, h, ctx.seed)?;
    let set = build_mult_maps(&ws, &cert).map_err(domain)?;
    let mut value = maps_json(&set);
    value["schema"] = json!(SCHEMA_VERSION);
    emit(ctx, value, || {
        format!(
            "degree {} with h = {}: {} maps of size {}",
            set.degree,
            set.h,
            set.nmaps(),
            set.dim()
        )
    });
    Ok(())
}

fn cmd_solve(
    ctx: &Ctx,
    sys: BiSystem,
    degree: Option<BiDegree>,
    order: &str,
    randomized: bool,
) -> Result<(), CliError> {
    let zorder = parse_zorder(order)?;
    let kos = koszul_bound(&sys);
    let mac = macaulay_bound(&sys);
    let stab = projection_stab_degree(&sys);
    let is_rational = sys.field == FieldSpec::Rationals;
    let mut warnings: Vec<String> = genericity_warning(&sys).into_iter().collect();
    let ws = SystemWorkspace::new(sys);
    let cert = match degree {
        Some(deg) => certificate_at(&ws, deg, None, ctx.seed)?,
        None => {
            let found = find_admissible(&ws, Some(stab), None, ctx.seed).map_err(domain)?;
            prefer_x0(&ws, found, ctx.seed)
        }
    };
    if let Some(deg) = degree {
        if deg.b < stab {
            warnings.push(format!(
                "b = {} is below the stabilization degree {stab}; extra points may appear",
                deg.b
            ));
        }
    }
    let set = build_mult_maps(&ws, &cert).map_err(domain)?;
    let gbasis = if randomized {
        randomized_vector_fglm(&set, zorder, ctx.seed)
    } else {
        matrix_fglm(&set, zorder)
    };
    let mut points_value = Value::Null;
    let mut verified = Vec::new();
    if is_rational {
        let ps = recover_points(&set, ctx.seed, ctx.tol, Some(&gbasis)).map_err(domain)?;
        for p in &ps.points {
            let report = match &p.exact_coords {
                Some(coords) => verify_exact(ws.system(), coords, None).map_err(domain)?,
                None => verify_numeric(ws.system(), &p.coords, 1e-10, None).map_err(domain)?,
            };
            let extraneous = report.verdict == Verdict::NotInProjection;
            verified.push(json!({
                "membership": membership_json(&report),
                "extraneous": extraneous,
            }));
        }
        points_value = points_json(&ps);
    } else {
        warnings.push("eigenvalue point recovery skipped over a prime field".into());
    }
    let value = json!({
        "schema": SCHEMA_VERSION,
        "bounds": { "macaulay": degree_json(mac), "koszul": degree_json(kos), "stab_b": stab },
        "degree_used": degree_json(cert.degree),
        "certificate": { "form": format!("{}", cert.form), "hf": cert.hf_value, "seeds_tried": cert.seeds_tried },
        "basis": set.basis.basis.iter().map(|mo| mo.to_string()).collect::<Vec<_>>(),
        "groebner": gb_json(&gbasis),
        "points": points_value,
        "verification": verified,
        "warnings": warnings,
    });
    emit(ctx, value, || {
        let mut lines = vec![format!(
            "degree {} (hf = {}), basis {{{}}}",
            cert.degree,
            cert.hf_value,
            gbasis.element_strings().join(", ")
        )];
        lines.push(format!("quotient dimension {}", gbasis.quotient_dim()));
        lines.join("\n")
    });
    Ok(())
}

fn cmd_eigen(ctx: &Ctx, sys: BiSystem, degree: Option<BiDegree>) -> Result<(), CliError> {
    if sys.field != FieldSpec::Rationals {
        return Err(CliError::Domain(
            "eigenvalue recovery is undefined over a prime field; use --field Q".into(),
        ));
    }
    let stab = projection_stab_degree(&sys);
    let ws = SystemWorkspace::new(sys);
    let cert = match degree {
        Some(deg) => certificate_at(&ws, deg, None, ctx.seed)?,
        None => {
            let found = find_admissible(&ws, Some(stab), None, ctx.seed).map_err(domain)?;
            prefer_x0(&ws, found, ctx.seed)
        }
    };
    let set = build_mult_maps(&ws, &cert).map_err(domain)?;
    let gbasis = matrix_fglm(&set, ZOrder::Lex);
    let ps = recover_points(&set, ctx.seed, ctx.tol, Some(&gbasis)).map_err(domain)?;
    let mut value = points_json(&ps);
    value["schema"] = json!(SCHEMA_VERSION);
    emit(ctx, value, || {
        let pts: Vec<String> = ps
            .points
            .iter()
            .map(|p| {
                format!(
                    "[{}] (multiplicity {}, residual {:.2e})",
                    p.coords.iter().map(complex_string).collect::<Vec<_>>().join(" : "),
                    p.multiplicity,
                    p.residual
                )
            })
            .collect();
        pts.join("\n")
    });
    Ok(())
}

fn cmd_verify(ctx: &Ctx, sys: BiSystem, point: &str, numeric: bool) -> Result<(), CliError> {
    let report = if numeric {
        let xi = parse_float_point(point)?;
        verify_numeric(&sys, &xi, 1e-10, None).map_err(domain)?
    } else {
        let xi = parse_exact_point(point, sys.field)?;
        verify_exact(&sys, &xi, None).map_err(domain)?
    };
    let mut value = membership_json(&report);
    value["schema"] = json!(SCHEMA_VERSION);
    emit(ctx, value, || {
        format!(
            "point [{}] at b = {}: rank {}/{} -> {:?}",
            report.point.join(" : "),
            report.b_used,
            report.rank,
            report.full_rank,
            report.verdict
        )
    });
    Ok(())
}

fn cmd_gb(ctx: &Ctx, sys: BiSystem, order: &str) -> Result<(), CliError> {
    let ord = parse_big_order(order)?;
    let basis = buchberger(&sys, &ord).map_err(domain)?;
    let value = json!({
        "schema": SCHEMA_VERSION,
        "order": order,
        "elements": basis.elements.iter().map(|g| poly_to_string(g, &basis.order)).collect::<Vec<_>>(),
        "leading": basis.leading.iter().map(|mo| mo.to_string()).collect::<Vec<_>>(),
    });
    emit(ctx, value, || {
        basis
            .elements
            .iter()
            .map(|g| poly_to_string(g, &basis.order))
            .collect::<Vec<_>>()
            .join("\n")
    });
    Ok(())
}

fn cmd_bigin(ctx: &Ctx, sys: BiSystem) -> Result<(), CliError> {
    let warnings: Vec<String> = genericity_warning(&sys).into_iter().collect();
    let result = bigin(&sys, ctx.seed).map_err(domain)?;
    // probe the generator-degree corner and one step up for the column report
    let ws = SystemWorkspace::new(sys);
    let start = ws.system().max_generator_degree();
    let mut probes = Vec::new();
    for da in 0..2usize {
        for db in 0..2usize {
            let d = BiDegree::new(start.a + da, start.b + db);
            if let Ok(Some(_)) = is_admissible(&ws, d, None, ctx.seed) {
                probes.push(d);
            }
        }
    }
    let degrees: Vec<BiDegree> = result.generators.iter().map(|(_, d)| *d).collect();
    let report = consistency_report(&probes, &degrees);
    let value = json!({
        "schema": SCHEMA_VERSION,
        "generators": result.generators.iter().map(|(mo, d)| json!({
            "monomial": mo.to_string(),
            "bidegree": degree_json(*d),
        })).collect::<Vec<_>>(),
        "stable": result.stable,
        "admissible_probes": probes.iter().map(|d| degree_json(*d)).collect::<Vec<_>>(),
        "column_report": {
            "consistent": report.consistent,
            "checks": report.checks.iter().map(|c| json!({
                "probe": degree_json(c.probe),
                "forbidden": degree_json(c.forbidden),
                "violated": c.violated,
            })).collect::<Vec<_>>(),
        },
        "warnings": warnings,
    });
    emit(ctx, value, || {
        let degs: Vec<String> = result.generators.iter().map(|(_, d)| d.to_string()).collect();
        format!(
            "bigin generator bidegrees: {} (stable: {}, column report consistent: {})",
            degs.join(" "),
            result.stable,
            report.consistent
        )
    });
    Ok(())
}
