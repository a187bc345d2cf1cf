use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use surface_ym::holonomy::{
    boundary_check, constraint_residual, disk_holonomy, wilson_loop_map, DiskLoop, ModelConnection,
};
use surface_ym::io::{element_payload, rep_from_json, strata_to_json, to_json, ModelConnectionFile, RepPointFile};
use surface_ym::linalg::{numerical_rank, singular_values};
use surface_ym::rep::{project_traced, residual, sample_solved};
use surface_ym::strata::{enumerate_strata, write_csv, StrataOptions};
use surface_ym::{
    cohomology_dims, component_invariant, CentralCharge, GroupSpec, ProjectOptions, RepPoint,
};

use crate::config::{parse_charge, parse_group, task_seed, validate_genus, RunConfig};
use crate::error::CliError;
use crate::persist::Audit;

pub const SOLVER_ITERATIONS: usize = 50;
pub const RESTARTS: usize = 20;
pub const ROUNDTRIP_TOL: f64 = 1e-6;

/// Result of a command: text for stdout, the main output file and the audit trail.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub file: Option<String>,
    pub audit: Audit,
}

#[derive(Debug, Clone, Serialize)]
pub struct Problem {
    pub group: String,
    pub genus: usize,
    pub charge: Option<String>,
}

struct Resolved {
    spec: GroupSpec,
    genus: usize,
    charge: CentralCharge,
}

impl Problem {
    fn resolve(&self) -> Result<Resolved, CliError> {
        let spec = parse_group(&self.group)?;
        validate_genus(self.genus)?;
        let charge = parse_charge(&spec, self.charge.as_deref())?;
        Ok(Resolved { spec, genus: self.genus, charge })
    }
}

fn project_options(cfg: &RunConfig) -> ProjectOptions {
    ProjectOptions { tol: cfg.tol, max_iter: SOLVER_ITERATIONS }
}

fn read_point(path: &Path) -> Result<RepPoint, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    rep_from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn solve_one(p: &Resolved, cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<RepPoint, CliError> {
    Ok(sample_solved(&p.spec, p.genus, &p.charge, &project_options(cfg), RESTARTS, rng)?)
}

/// Runs `count` independent tasks, task `i` seeded with `task_seed(seed, i)`.
fn batch<T, F>(cfg: &RunConfig, count: usize, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T, CliError> + Sync,
{
    let run = |i: usize| f(&mut ChaCha8Rng::seed_from_u64(task_seed(cfg.seed, i as u64)));
    if cfg.parallel {
        (0..count).into_par_iter().map(run).collect()
    } else {
        (0..count).map(run).collect()
    }
}

pub fn solve(problem: &Problem, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = problem.resolve()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start = RepPoint::haar(&p.spec, p.genus, p.charge.clone(), &mut rng)?;
    let trace = project_traced(&start, &project_options(cfg))?;
    let res = residual(&trace.rep);
    let mut out = Outcome::default();
    out.audit.event("trace", &json!({ "iterations": trace.iterations, "history": trace.history }));
    out.audit.check("residual", res <= cfg.tol, res);
    writeln!(out.stdout, "residual {res:.3e} after {} iterations", trace.iterations).unwrap();
    out.file = Some(surface_ym::io::rep_to_json(&trace.rep));
    Ok(out)
}

#[derive(Serialize)]
struct CohomologyReport {
    h0: usize,
    h1: usize,
    h2: usize,
    rank_d0: usize,
    rank_d1: usize,
    sigma_d0: Vec<f64>,
    sigma_d1: Vec<f64>,
    euler_ok: bool,
    duality_ok: bool,
}

pub fn cohomology(input: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rep = read_point(input)?;
    let d = cohomology_dims(&rep, cfg.rank_tol)?;
    let expected = (2 - 2 * rep.genus() as i64) * rep.spec().dim() as i64;
    let euler_ok = d.euler() == expected;
    let duality_ok = d.h0 == d.h2;
    let ok = |b: bool| if b { "OK" } else { "FAIL" };
    let mut out = Outcome::default();
    writeln!(out.stdout, "{} {} {}", d.h0, d.h1, d.h2).unwrap();
    writeln!(out.stdout, "Euler {}: {} = {}", ok(euler_ok), d.euler(), expected).unwrap();
    writeln!(out.stdout, "duality {}: h2 = {}, h0 = {}", ok(duality_ok), d.h2, d.h0).unwrap();
    out.audit.check("euler", euler_ok, (d.euler() - expected) as f64);
    out.audit.check("duality", duality_ok, d.h2 as f64 - d.h0 as f64);
    out.file = Some(to_json(&CohomologyReport {
        h0: d.h0,
        h1: d.h1,
        h2: d.h2,
        rank_d0: d.rank_d0,
        rank_d1: d.rank_d1,
        sigma_d0: d.sigma_d0,
        sigma_d1: d.sigma_d1,
        euler_ok,
        duality_ok,
    }));
    Ok(out)
}

#[derive(Serialize)]
struct RoundtripReport {
    group: String,
    genus: usize,
    charge: Vec<f64>,
    steps: usize,
    order: u32,
    max_generator_distance: f64,
    boundary_error: f64,
    relator_error: f64,
    flat_datum: RepPointFile,
}

pub fn roundtrip(problem: &Problem, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = problem.resolve()?;
    let order = cfg.magnus_order()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let chi = solve_one(&p, cfg, &mut rng)?;
    let conn = ModelConnection::new(chi.clone())?;
    let rho = wilson_loop_map(&conn, cfg.steps, order)?;
    let dist = chi.elements().iter().zip(rho.elements()).map(|(a, b)| a.distance(b)).fold(0.0, f64::max);
    let b = boundary_check(&conn, cfg.steps, order)?;
    let mut out = Outcome::default();
    out.audit.check("max_generator_distance", dist <= ROUNDTRIP_TOL, dist);
    out.audit.check("boundary_error", b.boundary_error <= ROUNDTRIP_TOL, b.boundary_error);
    out.audit.check("relator_error", b.relator_error <= ROUNDTRIP_TOL, b.relator_error);
    writeln!(out.stdout, "max generator distance {dist:.3e}").unwrap();
    writeln!(out.stdout, "boundary holonomy error {:.3e}", b.boundary_error).unwrap();
    writeln!(out.stdout, "relator error {:.3e}", b.relator_error).unwrap();
    out.file = Some(to_json(&RoundtripReport {
        group: p.spec.to_string(),
        genus: p.genus,
        charge: p.charge.coords().iter().copied().collect(),
        steps: cfg.steps,
        order: cfg.order,
        max_generator_distance: dist,
        boundary_error: b.boundary_error,
        relator_error: b.relator_error,
        flat_datum: RepPointFile::from_rep(&chi),
    }));
    Ok(out)
}

pub fn sample(problem: &Problem, cfg: &RunConfig, count: usize) -> Result<Outcome, CliError> {
    let p = problem.resolve()?;
    let points = batch(cfg, count, |rng| solve_one(&p, cfg, rng))?;
    let worst = points.iter().map(residual).fold(0.0, f64::max);
    let mut out = Outcome::default();
    out.audit.check("max_residual", worst <= cfg.tol, worst);
    writeln!(out.stdout, "{count} points, max residual {worst:.3e}").unwrap();
    out.file = Some(to_json(&points.iter().map(RepPointFile::from_rep).collect::<Vec<_>>()));
    Ok(out)
}

pub fn components(problem: &Problem, cfg: &RunConfig, count: usize) -> Result<Outcome, CliError> {
    let p = problem.resolve()?;
    let labels = batch(cfg, count, |rng| Ok(component_invariant(&solve_one(&p, cfg, rng)?)?.label()))?;
    let mut histogram: BTreeMap<i64, usize> = BTreeMap::new();
    for &l in &labels {
        *histogram.entry(l).or_default() += 1;
    }
    let mut out = Outcome::default();
    for (l, n) in &histogram {
        writeln!(out.stdout, "label {l}: {n}").unwrap();
    }
    out.audit.event("histogram", &histogram);
    out.file = Some(to_json(&json!({
        "group": p.spec.to_string(),
        "genus": p.genus,
        "count": count,
        "labels": labels,
        "histogram": histogram,
    })));
    Ok(out)
}

pub fn goldman(input: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rep = read_point(input)?;
    let dims = cohomology_dims(&rep, cfg.rank_tol)?;
    let g = surface_ym::rep::goldman_matrix(&rep, cfg.rank_tol)?;
    let antisymmetry = (&g + g.transpose()).amax();
    let rank = if g.is_empty() { 0 } else { numerical_rank(&g, cfg.rank_tol) };
    let mut out = Outcome::default();
    writeln!(out.stdout, "h1 {}", dims.h1).unwrap();
    writeln!(out.stdout, "antisymmetry defect {antisymmetry:.3e}").unwrap();
    writeln!(out.stdout, "rank {rank}").unwrap();
    out.audit.check("antisymmetric", antisymmetry <= 1e-12, antisymmetry);
    out.audit.check("nondegenerate", rank == dims.h1, rank as f64);
    let rows: Vec<Vec<f64>> = g.row_iter().map(|r| r.iter().copied().collect()).collect();
    out.file = Some(to_json(&json!({
        "h1": dims.h1,
        "matrix": rows,
        "singular_values": if g.is_empty() { Vec::new() } else { singular_values(&g) },
        "antisymmetry": antisymmetry,
        "rank": rank,
    })));
    Ok(out)
}

pub fn strata(group: &str, genus: usize, bound: f64, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = parse_group(group)?;
    validate_genus(genus)?;
    if !(bound >= 0.0 && bound.is_finite()) {
        return Err(CliError::Input(format!("--bound must be non-negative, got {bound}")));
    }
    let opts = StrataOptions { project: project_options(cfg), rank_tol: cfg.rank_tol, ..StrataOptions::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rows = enumerate_strata(&spec, genus, bound, &opts, &mut rng)?;
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    let csv = String::from_utf8(csv).expect("CSV is ASCII");
    let mut out = Outcome::default();
    out.audit.check("disjoint", surface_ym::strata::strata_disjoint(&rows), rows.len() as f64);
    out.stdout = csv.clone();
    let json = cfg.out.as_deref().and_then(|p| p.extension()).is_some_and(|e| e == "json");
    out.file = Some(if json { strata_to_json(&rows) } else { csv });
    Ok(out)
}

#[derive(Serialize)]
struct HolonomyReport {
    area: f64,
    potential_scale: f64,
    holonomy: Value,
    constraint_residual: f64,
    connection: ModelConnectionFile,
}

pub fn holonomy(problem: &Problem, cfg: &RunConfig, area: f64, scale: f64) -> Result<Outcome, CliError> {
    let p = problem.resolve()?;
    let order = cfg.magnus_order()?;
    if !(area > 0.0 && area.is_finite() && scale.is_finite()) {
        return Err(CliError::Input(format!("need area > 0 and a finite scale, got {area} and {scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let chi = solve_one(&p, cfg, &mut rng)?;
    let conn = ModelConnection::new(chi)?.with_potential_scale(scale);
    let disk = DiskLoop::square(conn.chart().centre(), area)?;
    let hol = disk_holonomy(&conn, &disk, cfg.steps, order)?;
    let res = constraint_residual(&conn, &disk, cfg.steps, order)?;
    let flat = RepPointFile::from_rep(conn.flat_datum());
    let mut out = Outcome::default();
    writeln!(out.stdout, "disk of area {area}: constraint residual {res:.3e}").unwrap();
    out.audit.check("constraint", res <= ROUNDTRIP_TOL, res);
    out.file = Some(to_json(&HolonomyReport {
        area,
        potential_scale: scale,
        holonomy: element_payload(&hol),
        constraint_residual: res,
        connection: ModelConnectionFile {
            group: flat.group.clone(),
            genus: flat.genus,
            charge: flat.charge.clone(),
            flat_datum: flat,
            chart: conn.chart(),
        },
    }));
    Ok(out)
}
