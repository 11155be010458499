//! Pipelines behind each subcommand. Each returns a report; fatal stage errors propagate.

use std::collections::BTreeMap;
use std::fs;

use serde::Serialize;
use serde_json::{json, Value};

use mposym::io::{self, FamilyJson};
use mposym::models::group::{self, FiniteGroup, ThreeCocycle};
use mposym::models::{czy, semion_channel_check, spin};
use mposym::mpo_algebra::{self as ma, FusionTable, MpoFamily};
use mposym::prebialgebra::{self as pb, PreBialgebra, Tensor3};
use mposym::report::{self, Check, Report, RunConfig};
use mposym::rep_theory::{self as rt, Representation};
use mposym::rfp;
use mposym::tensor_core::mpdo_contract;
use mposym::{CMat, Error, MpoTensor, Result};

pub const FAMILY_BUILTINS: &[&str] = &["czy", "z2-cocycle-trivial", "z2-cocycle-nontrivial"];

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {path}: {e}")))
}

fn write(report: &mut Report, path: &str, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Input(format!("cannot write {path}: {e}")))?;
    report.artifacts.push(path.to_string());
    Ok(())
}

/// Runs one pipeline stage, naming it on failure.
fn stage<T>(name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    f().map_err(|e| {
        eprintln!("stage '{name}' failed: {e}");
        e
    })
}

fn tensor_entries(t: &Tensor3, tol: f64) -> Vec<Value> {
    t.entries()
        .into_iter()
        .filter(|(_, _, _, v)| v.norm() > tol)
        .map(|(i, j, k, v)| json!({"i": i, "j": j, "k": k, "re": v.re, "im": v.im}))
        .collect()
}

// ---------------------------------------------------------------- families

/// A family together with fusion tensors for every pair.
pub struct SolvedFamily {
    pub family: MpoFamily,
    pub fusions: FusionTable,
}

fn cocycle_builtin(name: &str) -> Option<ThreeCocycle> {
    match name {
        "z2-cocycle-trivial" => Some(ThreeCocycle::trivial(FiniteGroup::cyclic(2))),
        "z2-cocycle-nontrivial" => Some(ThreeCocycle::z2_nontrivial()),
        _ => None,
    }
}

pub fn load_family(builtin: Option<&str>, file: Option<&str>) -> Result<MpoFamily> {
    match (builtin, file) {
        (Some("czy"), None) => Ok(czy::family()),
        (Some(b), None) => match cocycle_builtin(b) {
            Some(w) => Ok(group::group_cocycle_mpo(&w)?.0),
            None => Err(Error::Input(format!("unknown builtin '{b}', expected one of {}", FAMILY_BUILTINS.join(", ")))),
        },
        (None, Some(f)) => io::parse_family(&read(f)?),
        _ => Err(Error::Input("give exactly one of --builtin or --family".into())),
    }
}

/// Fusion tensors from the solver, seeded by any supplied X hints. The CZY builtin uses its fixtures.
pub fn solve_family(builtin: Option<&str>, file: Option<&str>, hints: &[String], cfg: &RunConfig) -> Result<SolvedFamily> {
    let family = load_family(builtin, file)?;
    if builtin == Some("czy") && hints.is_empty() {
        return Ok(SolvedFamily { family, fusions: czy::fusions(cfg.tol)? });
    }
    let mut hint_map: BTreeMap<(usize, usize), CMat> = BTreeMap::new();
    for h in hints {
        let s = io::parse_fusion(&read(h)?)?;
        let x = s.x.ok_or_else(|| Error::Input(format!("hint {h} has no x matrix")))?;
        hint_map.insert((s.a, s.b), x);
    }
    let fusions = stage("fusion", || ma::solve_family_fusions(&family, &|a, b| hint_map.get(&(a, b)).cloned(), cfg.tol, cfg.seed))?;
    Ok(SolvedFamily { family, fusions })
}

fn fusion_checks(sf: &SolvedFamily, tol: f64) -> Vec<Check> {
    sf.fusions
        .values()
        .map(|s| {
            let origin = if s.from_hint { "hinted" } else { "solved" };
            let mut c = Check::residual("fusion", format!("fusion ({}, {}) -> {} ({origin})", s.a, s.b, s.c), s.residual, tol);
            c.detail = Some(format!("D_c = {}", s.y.nrows()));
            c
        })
        .collect()
}

pub fn cmd_fusion(builtin: Option<&str>, file: Option<&str>, hints: &[String], cfg: &RunConfig) -> Result<Report> {
    let sf = solve_family(builtin, file, hints, cfg)?;
    let mut r = Report::new("fusion", cfg);
    r.checks = fusion_checks(&sf, cfg.tol);
    let out = io::FusionSetJson::from_table(&sf.family, &sf.fusions);
    if let Some(path) = &cfg.out {
        write(&mut r, path, &serde_json::to_string_pretty(&out)?)?;
    }
    Ok(r)
}

/// Reads a fusion file and recomputes every residual against its family.
pub fn load_fusion_file(path: &str) -> Result<SolvedFamily> {
    let (family, fusions) = io::parse_fusion_set(&read(path)?)?;
    Ok(SolvedFamily { family, fusions })
}

fn associator_data(t: &ma::AssociatorTable) -> Value {
    let n = t.order;
    let mut omega = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = t.get(a, b, c);
                omega.push(json!({"a": a, "b": b, "c": c, "re": v.re, "im": v.im}));
            }
        }
    }
    json!({"order": n, "omega": omega, "class": t.class, "class_label": t.class.map(|c| c.label())})
}

fn associator_checks(sf: &SolvedFamily, cfg: &RunConfig) -> Result<(Vec<Check>, Value)> {
    let t = stage("associator", || ma::associator(&sf.family, &sf.fusions, cfg.tol))?;
    let mut checks = vec![Check::residual("associator", "associator fit residual", t.max_residual(), cfg.tol)];
    let label = t.class.map(|c| c.label()).unwrap_or_else(|| "unavailable".into());
    checks.push(Check::flag("associator", "cohomology class identified", t.class.is_some(), label));
    Ok((checks, associator_data(&t)))
}

pub fn cmd_associator(fusion: &str, cfg: &RunConfig) -> Result<Report> {
    let sf = load_fusion_file(fusion)?;
    let mut r = Report::new("associator", cfg);
    r.checks = fusion_checks(&sf, cfg.tol);
    let (checks, data) = associator_checks(&sf, cfg)?;
    r.checks.extend(checks);
    if let Some(path) = &cfg.out {
        write(&mut r, path, &serde_json::to_string_pretty(&data)?)?;
    }
    r.data = data;
    Ok(r)
}

// ---------------------------------------------------------------- modules

/// One row of a module table: an indecomposable summand of the regular module.
#[derive(Serialize)]
pub struct ModuleRow {
    pub label: String,
    pub dim: usize,
    pub multiplicity: usize,
    pub simple: bool,
    pub projective: bool,
    pub rad_dim: usize,
    pub rad: String,
    pub quotient_dim: usize,
    pub quotient: String,
}

fn identify(m: &Representation, catalog: &[(String, Representation)], seed: u64) -> Result<Option<String>> {
    for (l, r) in catalog {
        if rt::module_isomorphic(m, r, seed)?.is_some() {
            return Ok(Some(l.clone()));
        }
    }
    Ok(None)
}

fn name_or_dim(label: Option<String>, dim: usize) -> String {
    match (label, dim) {
        (_, 0) => "0".into(),
        (Some(l), _) => l,
        (None, d) => format!("dim {d}"),
    }
}

/// Table of the indecomposable projectives of `alg` with radicals and tops, plus the catalog
/// of projectives P_k and simples S_k it names them by. Simples are tried first when labeling.
pub fn module_table(alg: &PreBialgebra, seed: u64) -> Result<(Vec<ModuleRow>, Vec<(String, Representation)>)> {
    let reg = rt::decompose_regular(alg, seed)?;
    let mut modules: Vec<Representation> = reg.modules.into_iter().map(|(_, r)| r).collect();
    // larger and less semisimple modules first, so labels do not depend on the seed
    let rad_dims: Vec<usize> = modules.iter().map(|m| rt::radical_subspace(alg, m).map(|r| r.ncols())).collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..modules.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(modules[i].dim()), std::cmp::Reverse(rad_dims[i])));
    modules = order.iter().map(|&i| modules[i].clone()).collect();

    let mut projectives: Vec<(String, Representation, usize)> = Vec::new();
    for m in &modules {
        let mut found = false;
        for p in projectives.iter_mut() {
            if rt::module_isomorphic(m, &p.1, seed)?.is_some() {
                p.2 += 1;
                found = true;
                break;
            }
        }
        if !found {
            projectives.push((format!("P{}", projectives.len()), m.clone(), 1));
        }
    }
    let mut simples: Vec<(String, Representation)> = Vec::new();
    for (_, p, _) in &projectives {
        let top = rt::simple_quotient(alg, p)?;
        if identify(&top, &simples, seed)?.is_none() {
            simples.push((format!("S{}", simples.len()), top));
        }
    }
    let mut catalog = simples.clone();
    catalog.extend(projectives.iter().map(|(l, r, _)| (l.clone(), r.clone())));

    let mut rows = Vec::new();
    for (label, p, mult) in &projectives {
        let rad_dim = rt::radical_subspace(alg, p)?.ncols();
        let rad = if rad_dim > 0 { identify(&rt::radical_submodule(alg, p)?, &catalog, seed)? } else { None };
        let top = rt::simple_quotient(alg, p)?;
        let q = identify(&top, &simples, seed)?;
        rows.push(ModuleRow {
            label: label.clone(),
            dim: p.dim(),
            multiplicity: *mult,
            simple: rad_dim == 0,
            projective: true,
            rad_dim,
            rad: name_or_dim(rad, rad_dim),
            quotient_dim: top.dim(),
            quotient: name_or_dim(q, top.dim()),
        });
    }
    Ok((rows, catalog))
}

fn fusion_table(coalg: &PreBialgebra, catalog: &[(String, Representation)], seed: u64) -> Result<(Vec<Value>, f64)> {
    let mut out = Vec::new();
    let mut worst: f64 = 0.0;
    for (la, ra) in catalog {
        for (lb, rb) in catalog {
            let t = rt::tensor_representation(ra, rb, coalg)?;
            let dec = rt::decompose_module(&t, catalog, seed)?;
            worst = worst.max(dec.residual);
            out.push(json!({"a": la, "b": lb, "decomposition": dec.signature()}));
        }
    }
    Ok((out, worst))
}

fn rows_text(rows: &[ModuleRow]) -> String {
    rows.iter()
        .map(|r| format!("{} (x{}): dim {}, simple {}, rad {} [{}], top {}", r.label, r.multiplicity, r.dim, r.simple, r.rad_dim, r.rad, r.quotient))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Runs a stage whose failure is recorded as an error check rather than aborting the command.
fn soft<T>(r: &mut Report, tag: &str, name: &str, f: impl FnOnce() -> Result<T>) -> Option<T> {
    match f() {
        Ok(v) => Some(v),
        Err(e) => {
            r.checks.push(Check::error(tag, format!("stage {name}"), &e));
            None
        }
    }
}

pub fn cmd_analyze(builtin: Option<&str>, file: Option<&str>, hints: &[String], cfg: &RunConfig) -> Result<Report> {
    let sf = solve_family(builtin, file, hints, cfg)?;
    let mut r = Report::new("analyze", cfg);
    r.checks = fusion_checks(&sf, cfg.tol);
    let (checks, assoc) = associator_checks(&sf, cfg)?;
    r.checks.extend(checks);
    let mut data = json!({"family": sf.family.name, "associator": assoc});
    analyze_algebra(&mut r, &mut data, &sf, cfg);
    r.data = data;
    if let Some(path) = &cfg.out {
        let s = r.to_json()?;
        write(&mut r, path, &s)?;
    }
    Ok(r)
}

/// Structure constants, semisimplicity, module table and fusion rings, as far as they exist.
fn analyze_algebra(r: &mut Report, data: &mut Value, sf: &SolvedFamily, cfg: &RunConfig) {
    let Some(alg) = soft(r, "structure", "structure constants", || ma::family_prebialgebra(&sf.family, &sf.fusions, cfg.tol, cfg.cap())) else {
        return;
    };
    for c in &pb::check_axioms(&alg, cfg.tol).checks {
        r.checks.push(Check::residual("structure", format!("pre-bialgebra {}", c.name), c.residual, cfg.tol));
    }
    let unit = soft(r, "structure", "unit", || pb::find_unit(&alg, cfg.tol)).flatten();
    let counit = soft(r, "structure", "counit", || pb::find_counit(&alg, cfg.tol)).flatten();
    data["labels"] = json!(alg.labels());
    data["lambda"] = json!(tensor_entries(alg.mult(), cfg.tol));
    data["coLambda"] = json!(alg.comult().map(|c| tensor_entries(c, cfg.tol)));
    data["unit"] = json!(unit.as_ref().map(|u| u.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>()));
    data["has_counit"] = json!(counit.is_some());

    if let Some(rad) = soft(r, "semisimplicity", "radical", || rt::radical(&alg)) {
        data["radical_dim"] = json!(rad.ncols());
        if rad.ncols() == 0 && unit.is_some() {
            let labels_of = |n: usize| (1..=n).map(|k| format!("phi_{k}")).collect::<Vec<_>>();
            let ring = soft(r, "fusion", "fusion ring of Rep(A)", || {
                let w = rt::wedderburn(&alg, cfg.seed)?;
                let ring = rt::fusion_multiplicities(&alg, &w, &labels_of(w.irreps.len()))?;
                Ok((w.blocks, ring))
            });
            if let Some((blocks, ring)) = ring {
                r.checks.push(Check::flag("fusion", "Rep(A) fusion ring is associative", ring.is_associative(), ""));
                data["wedderburn_blocks"] = json!(blocks);
                data["rep_a_fusion"] = json!(ring);
            }
        }
    }

    if alg.comult().is_none() {
        return;
    }
    let Some(d) = soft(r, "semisimplicity", "dual", || pb::dual(&alg)) else { return };
    let Some(dual_unit) = soft(r, "semisimplicity", "unit of the dual", || pb::find_unit(&d, cfg.tol)) else { return };
    let unitized = dual_unit.is_none();
    let dp = match dual_unit {
        Some(u) => match soft(r, "semisimplicity", "unit of the dual", || d.clone().with_unit(u)) {
            Some(dp) => dp,
            None => return,
        },
        None => pb::unitize(&d),
    };
    let detail = if unitized { "no unit, unitized" } else { "has a unit" };
    r.checks.push(Check::flag("semisimplicity", "unit of A* examined", true, detail));
    let Some((rows, catalog)) = soft(r, "modules", "module table", || module_table(&dp, cfg.seed)) else { return };
    r.checks.push(Check::flag("modules", "module table of the dual", true, rows_text(&rows)));
    let drad = rows.iter().map(|x| x.rad_dim * x.multiplicity).sum::<usize>();
    data["dual"] = json!({"unitized": unitized, "radical_dim_of_summands": drad, "modules": rows});
    if let Some((fusion, worst)) = soft(r, "fusion", "fusion ring of Rep(A*)", || fusion_table(&d, &catalog, cfg.seed)) {
        r.checks.push(Check::residual("fusion", "Rep(A*) decomposition block residual", worst, cfg.tol));
        data["dual"]["fusion"] = json!(fusion);
    }
}

// ---------------------------------------------------------------- algebras and representations

pub const ALGEBRA_BUILTINS: &[&str] = &["czy", "czy-dual", "z2-cocycle-nontrivial", "z2-cocycle-trivial"];

pub fn load_algebra(spec: &str) -> Result<PreBialgebra> {
    match spec {
        "czy" => Ok(czy::algebra()),
        "czy-dual" => pb::dual(&czy::algebra()),
        b => match cocycle_builtin(b) {
            Some(w) => Ok(group::group_prebialgebra(&w)?.twisted),
            None if b.ends_with(".json") || fs::metadata(b).is_ok() => io::parse_prebialgebra(&read(b)?),
            None => Err(Error::Input(format!("unknown algebra '{b}', expected a file or one of {}", ALGEBRA_BUILTINS.join(", ")))),
        },
    }
}

fn builtin_rep(name: &str) -> Option<Representation> {
    Some(match name {
        "phi1" => czy::phi1(),
        "phi2" => czy::phi2(),
        "psi_S0" => czy::psi_s0(),
        "psi_S1" => czy::psi_s1(),
        "psi_S2" => czy::psi_s2(),
        "psi_P0" => czy::psi_p0(),
        "psi_P1" => czy::psi_p1(),
        "psi_P2" => czy::psi_p2(),
        _ => return None,
    })
}

/// A representation from a file or a `+`-separated direct sum of builtin names.
pub fn load_representation(spec: &str) -> Result<Representation> {
    if fs::metadata(spec).is_ok() {
        return io::parse_representation(&read(spec)?);
    }
    let mut parts = spec.split('+').map(str::trim);
    let first = parts.next().unwrap_or_default();
    let lookup = |n: &str| builtin_rep(n).ok_or_else(|| Error::Input(format!("unknown representation '{n}' (not a file or builtin)")));
    let mut rep = lookup(first)?;
    for p in parts {
        rep = rep.direct_sum(&lookup(p)?)?;
    }
    Ok(rep)
}

pub fn cmd_rep_decompose(algebra: &str, unitize: bool, catalog: &str, cfg: &RunConfig) -> Result<Report> {
    if catalog != "auto" {
        return Err(Error::Input(format!("unsupported catalog '{catalog}', only 'auto' is available")));
    }
    let mut alg = load_algebra(algebra)?;
    if unitize {
        alg = pb::unitize(&alg);
    } else if alg.unit().is_none() {
        if let Some(u) = pb::find_unit(&alg, cfg.tol)? {
            alg = alg.with_unit(u)?;
        }
    }
    let mut r = Report::new("rep decompose", cfg);
    r.checks.push(Check::flag("modules", "algebra has a unit", pb::find_unit(&alg, cfg.tol)?.is_some(), if unitize { "unitized" } else { "" }));
    let rad = stage("radical", || rt::radical(&alg))?;
    let (rows, _) = stage("decomposition", || module_table(&alg, cfg.seed))?;
    let total: usize = rows.iter().map(|x| x.dim * x.multiplicity).sum();
    r.checks.push(Check::flag("modules", "summand dimensions add up to dim A", total == alg.dim(), format!("{total} of {}", alg.dim())));
    r.checks.push(Check::flag("modules", "module table", true, rows_text(&rows)));
    r.data = json!({"dim": alg.dim(), "radical_dim": rad.ncols(), "modules": rows});
    if let Some(path) = &cfg.out {
        let s = serde_json::to_string_pretty(&r.data)?;
        write(&mut r, path, &s)?;
    }
    Ok(r)
}

// ---------------------------------------------------------------- fixed points

pub fn cmd_rfp_build(algebra: &str, psi: &str, cfg: &RunConfig) -> Result<Report> {
    let alg = load_algebra(algebra)?;
    let psi = load_representation(psi)?;
    let m = if algebra == "czy" {
        stage("rfp build", || rfp::build_rfp_tensor_with(&alg, &[czy::phi1(), czy::phi2()], &psi, cfg.seed))?
    } else {
        stage("rfp build", || rfp::build_rfp_tensor(&alg, &psi, cfg.seed))?
    };
    let mut r = Report::new("rfp build", cfg);
    r.checks.push(Check::flag("rfp", "fusion ring hypotheses hold", m.hypotheses.pass(), m.hypotheses.failing.join("; ")));
    r.checks.push(Check::flag(
        "rfp",
        "tensor shape",
        true,
        format!("bond {}, physical {}x{}", m.tensor.bond(), m.tensor.d_out(), m.tensor.d_in()),
    ));
    r.data = json!({"weights": m.weights, "quantum_dims": m.quantum_dims, "fpdim": m.fpdim, "ring": m.ring});
    if let Some(path) = &cfg.out {
        write(&mut r, path, &io::mpo_to_json(&m.tensor, Some("rfp"))?)?;
    }
    Ok(r)
}

/// Largest contracted MPDO whose spectrum is computed.
const EIGEN_LIMIT: usize = 1024;

pub fn cmd_rfp_verify(tensor: &str, nmax: usize, cfg: &RunConfig) -> Result<Report> {
    let m: MpoTensor = io::parse_mpo(&read(tensor)?)?;
    if nmax == 0 {
        return Err(Error::Input("--nmax must be at least 1".into()));
    }
    let mut r = Report::new("rfp verify", cfg);
    let cf = stage("canonical form", || rfp::vertical_canonical_form(&m, cfg.seed, cfg.tol))?;
    r.checks.push(Check::residual("rfp", "canonical form", cf.residual, cfg.tol));
    let v = stage("fixed-point conditions", || rfp::verify_rfp(&cf, cfg.seed, cfg.tol))?;
    r.checks.push(Check::residual("rfp", "W isometric", v.max_isometry_residual(), cfg.tol));
    r.checks.push(Check::residual("rfp", "W fuses the blocks", v.max_fusion_residual(), cfg.tol));
    r.checks.push(Check::flag("rfp", "chi proportional to identity", v.chi_scalar(cfg.tol), ""));
    r.checks.push(Check::residual("rfp", "m-consistency", v.m_consistency, cfg.tol));
    r.checks.push(Check::flag("rfp", "fixed point", v.is_rfp, ""));
    let mut contracted = Vec::new();
    for n in 1..=nmax {
        let rho = match mpdo_contract(&m, n, cfg.cap()) {
            Ok(rho) => rho,
            Err(Error::Size { .. }) => break,
            Err(e) => return Err(e),
        };
        let mut rho = rho;
        let herm = rho.check_hermitian(cfg.tol);
        if rho.dim() <= EIGEN_LIMIT {
            let pos = herm && rho.check_positive(cfg.tol);
            r.checks.push(Check::flag("rfp", format!("MPDO at N = {n} is positive semidefinite"), pos, ""));
        } else {
            r.checks.push(Check::flag("rfp", format!("MPDO at N = {n} is Hermitian"), herm, "too large for a spectrum"));
        }
        contracted.push(json!({"n": n, "trace": mposym::linalg::trace(rho.matrix()).re}));
    }
    r.data = json!({"report": v, "contracted": contracted, "cap": cfg.cap});
    if let Some(path) = &cfg.out {
        let s = r.to_json()?;
        write(&mut r, path, &s)?;
    }
    Ok(r)
}

// ---------------------------------------------------------------- models and cocycles

pub fn cmd_models(model: &str, n: usize, check: &str, cfg: &RunConfig) -> Result<Report> {
    if model != "czy" {
        return Err(Error::Input(format!("unknown model '{model}', expected czy")));
    }
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Input(format!("--n must be even and at least 2, got {n}")));
    }
    let all = check == "all";
    if !all && !["spin", "channel", "group"].contains(&check) {
        return Err(Error::Input(format!("unknown check '{check}', expected all, spin, channel or group")));
    }
    let mut r = Report::new("models", cfg);
    if all || check == "spin" {
        let e = stage("spin identities", || spin::equivalence_residuals(n, cfg.tol))?;
        r.checks.push(Check::residual("app_a", format!("U^dag H_LG U = H_2 at N = {n}"), e.lg_to_h2, cfg.tol));
        if let Some(x) = e.h2_to_xx {
            r.checks.push(Check::residual("app_a", format!("Ut^dag H_2 Ut = H_XX at N = {n}"), x, cfg.tol));
        }
        r.checks.push(Check::residual("app_a", format!("U_CZY factorization at N = {n}"), e.u_czy_factorization, cfg.tol));
        r.checks.push(Check::residual("app_a", format!("Z_2 operators commute at N = {n}"), e.z2_commutator, cfg.tol));
        r.checks.push(Check::flag(
            "app_a",
            format!("generators do not commute at N = {n}"),
            e.generator_commutator > cfg.tol,
            format!("{:.3e}", e.generator_commutator),
        ));
    }
    if all || check == "channel" {
        let sites = n / 2;
        let c = stage("channel", || semion_channel_check(sites, cfg.tol))?;
        r.checks.push(Check::residual("channel", format!("forward map at N = {sites}"), c.forward, cfg.tol));
        r.checks.push(Check::residual("channel", format!("recovery at N = {sites}"), c.recovery, cfg.tol));
        r.checks.push(Check::residual("channel", "channels trace-preserving", c.encoder_tp.max(c.recovery_tp), cfg.tol));
    }
    if all || check == "group" {
        let (family, _) = group::group_cocycle_mpo(&ThreeCocycle::z2_nontrivial())?;
        let res = stage("group law", || group::group_law_residual(&family, n.min(8), cfg.cap()))?;
        r.checks.push(Check::residual("group", format!("PBC group law at N = {}", n.min(8)), res, cfg.tol));
    }
    if let Some(path) = &cfg.out {
        let s = r.to_json()?;
        write(&mut r, path, &s)?;
    }
    Ok(r)
}

fn load_group(spec: &str) -> Result<FiniteGroup> {
    if let Some(n) = spec.strip_prefix('z').or_else(|| spec.strip_prefix('Z')) {
        if let Ok(n) = n.parse::<usize>() {
            if n == 0 || n > io::MAX_GROUP_ORDER {
                return Err(Error::Input(format!("group order must be in 1..={}", io::MAX_GROUP_ORDER)));
            }
            return Ok(FiniteGroup::cyclic(n));
        }
    }
    io::parse_group(&read(spec)?)
}

fn load_cocycle(g: &FiniteGroup, spec: &str) -> Result<ThreeCocycle> {
    match spec {
        "trivial" => Ok(ThreeCocycle::trivial(g.clone())),
        "nontrivial" if g.order() == 2 => Ok(ThreeCocycle::z2_nontrivial()),
        s => {
            if let Some(p) = s.strip_prefix("p=") {
                let n = g.cyclic_order().ok_or_else(|| Error::Input("p=K cocycles need a cyclic group".into()))?;
                let p: usize = p.parse().map_err(|_| Error::Input(format!("bad cocycle exponent '{p}'")))?;
                return Ok(ThreeCocycle::zn(n, p % n));
            }
            if s == "nontrivial" {
                return Err(Error::Input("'nontrivial' names the Z_2 cocycle; use p=K for Z_n".into()));
            }
            io::parse_cocycle(&read(s)?, Some(g))
        }
    }
}

pub fn cmd_cocycle(group_spec: &str, omega: &str, emit: &str, cfg: &RunConfig) -> Result<Report> {
    let g = load_group(group_spec)?;
    let w = load_cocycle(&g, omega)?;
    let mut r = Report::new("cocycle", cfg);
    r.checks.push(Check::residual("group", "cocycle condition", w.cocycle_residual(), cfg.tol));
    r.checks.push(Check::residual("group", "unit modulus", w.unitarity_residual(), cfg.tol));
    let class = ma::cocycle_class(w.values(), w.group(), cfg.tol).ok();
    r.data = json!({"class": class, "class_label": class.map(|c| c.label())});
    let artifact = match emit {
        "cocycle" => serde_json::to_string_pretty(&io::CocycleJson::from_cocycle(&w))?,
        "prebialgebra" => {
            let gp = stage("group pre-bialgebra", || group::group_prebialgebra(&w))?;
            let ax = pb::check_axioms(&gp.twisted, cfg.tol);
            for c in &ax.checks {
                r.checks.push(Check::residual("group", format!("(A, Delta) {}", c.name), c.residual, cfg.tol));
            }
            io::prebialgebra_to_json(&gp.twisted)?
        }
        "mpo" => {
            let (family, _) = stage("group MPOs", || group::group_cocycle_mpo(&w))?;
            serde_json::to_string_pretty(&FamilyJson::from_family(&family))?
        }
        e => return Err(Error::Input(format!("unknown --emit '{e}', expected cocycle, prebialgebra or mpo"))),
    };
    match &cfg.out {
        Some(path) => write(&mut r, path, &artifact)?,
        None => r.data["artifact"] = serde_json::from_str(&artifact)?,
    }
    Ok(r)
}

pub fn cmd_reproduce(only: Option<&str>, cfg: &RunConfig) -> Result<Report> {
    let mut r = report::reproduce(cfg, only)?;
    if let Some(path) = &cfg.out {
        let s = r.to_json()?;
        write(&mut r, path, &s)?;
    }
    Ok(r)
}
