use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use pgcode_core::blocking::{self, BlockingSetReport, SpreadSummary};
use pgcode_core::codes::{build_code, Code};
use pgcode_core::geometry::theta;
use pgcode_core::spectrum::theorems::{self, fixed_k, Hypotheses, TheoremInfo, THEOREMS};
use pgcode_core::spectrum::{exhaustive_feasible, full_spectrum, min_weight, MinWeight};
use pgcode_core::{io, make_field, Error, Geometry, Instance, PointSet, Subspace, TheoremReport, Verdict, WeightDistribution};
use serde::Serialize;

use crate::render;
use crate::{Cli, Command, Common, Format, Geo, Which, EXIT_COUNTEREXAMPLE, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_PARAMETER};

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    command: &'static str,
    config: Config<'a>,
    report: &'a Output,
}

#[derive(Serialize)]
struct Config<'a> {
    #[serde(flatten)]
    args: &'a Command,
    #[serde(flatten)]
    common: &'a Common,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum Output {
    Build(BuildManifest),
    Verify(Vec<TheoremReport>),
    Spread(SpreadReport),
    Blocking(Box<BlockingReport>),
    Spectrum(SpectrumReport),
    List(Vec<TheoremInfo>),
}

#[derive(Serialize)]
pub struct BuildManifest {
    pub n: usize,
    pub p: u32,
    pub h: u32,
    pub k: usize,
    pub q: u64,
    /// Coefficients of the defining polynomial, constant term first.
    pub modulus: Vec<u32>,
    pub length: usize,
    pub dim: usize,
    pub dual_dim: usize,
    pub hull_dim: usize,
    pub theta_n: u64,
    pub theta_k: u64,
    pub theta_n_minus_k: u64,
    pub hypotheses: Hypotheses,
    pub generator_file: String,
    pub dual_file: String,
}

#[derive(Serialize)]
pub struct SpreadReport {
    #[serde(flatten)]
    pub summary: SpreadSummary,
    /// Ambient point indices of each element, in base point order.
    pub element_points: Vec<Vec<usize>>,
}

#[derive(Serialize)]
pub struct BlockingReport {
    pub source: &'static str,
    /// U in the ambient space of the spread, when the set is B(U).
    pub subspace: Option<Subspace>,
    pub points: PointSet,
    pub certificate: BlockingSetReport,
    pub export: Option<String>,
}

#[derive(Serialize)]
pub struct SpectrumReport {
    pub code: Which,
    pub length: usize,
    pub dim: usize,
    pub distribution: Option<WeightDistribution>,
    pub minimum: Option<MinWeight>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Build { .. } => "build",
            Command::Verify { .. } => "verify",
            Command::Spread { .. } => "spread",
            Command::Blocking { .. } => "blocking",
            Command::Spectrum { .. } => "spectrum",
            Command::List => "list",
        }
    }
}

/// 2 for budget exhaustion, 3 for everything else a user can fix.
pub fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. }) => EXIT_INCONCLUSIVE,
        _ => EXIT_PARAMETER,
    }
}

pub fn run(cli: &Cli) -> anyhow::Result<u8> {
    let c = &cli.common;
    let (output, code) = match &cli.cmd {
        Command::Build { geo, k } => build(c, geo, *k)?,
        Command::Verify { id, geo, k } => verify(c, id, geo, *k)?,
        Command::Spread { geo } => spread(c, geo)?,
        Command::Blocking { geo, k, subspace_file, point_file, random_subspace, dims, export } => {
            let src = match (subspace_file, point_file, random_subspace) {
                (Some(f), None, false) => Source::SubspaceFile(f),
                (None, Some(f), false) => Source::PointFile(f),
                (None, None, true) => Source::Random,
                _ => bail!(Error::InvalidParameter(
                    "give exactly one of --subspace-file, --point-file, --random-subspace".into()
                )),
            };
            blocking(c, geo, *k, src, dims.as_deref(), export.as_deref())?
        }
        Command::Spectrum { geo, k, code } => spectrum(c, geo, *k, *code)?,
        Command::List => (Output::List(THEOREMS.to_vec()), EXIT_OK),
    };
    let text = match c.format {
        Format::Json => {
            let env = Envelope { schema: SCHEMA, command: cli.cmd.name(), config: Config { args: &cli.cmd, common: c }, report: &output };
            serde_json::to_string_pretty(&env)? + "\n"
        }
        Format::Text => render::text(&output),
        Format::Csv => render::csv(&output),
    };
    match (&c.out, &cli.cmd) {
        (Some(path), cmd) if !matches!(cmd, Command::Build { .. }) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        _ => print!("{text}"),
    }
    Ok(code)
}

fn geometry(c: &Common, geo: &Geo) -> anyhow::Result<Geometry> {
    let field = make_field(geo.p, geo.h)?;
    Ok(Geometry::new(geo.n, field, &c.budget())?)
}

fn check_k(geo: &Geo, k: usize) -> anyhow::Result<()> {
    if k > geo.n {
        bail!(Error::InvalidParameter(format!("k = {k} exceeds n = {}", geo.n)));
    }
    Ok(())
}

fn build(c: &Common, geo: &Geo, k: usize) -> anyhow::Result<(Output, u8)> {
    check_k(geo, k)?;
    let g = geometry(c, geo)?;
    let code = build_code(&g, k, &c.budget())?;
    let dual = code.dual();
    let hull = code.hull();
    let dir = c.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let write = |name: &str, body: String| -> anyhow::Result<String> {
        let path = dir.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        Ok(name.to_string())
    };
    let params = code.params();
    let q = g.q();
    let manifest = BuildManifest {
        n: geo.n,
        p: geo.p,
        h: geo.h,
        k,
        q,
        modulus: g.field().modulus().to_vec(),
        length: code.length(),
        dim: code.dim(),
        dual_dim: dual.dim(),
        hull_dim: hull.dim(),
        theta_n: theta(geo.n as i64, q),
        theta_k: theta(k as i64, q),
        theta_n_minus_k: theta((geo.n - k) as i64, q),
        hypotheses: Hypotheses::of(params),
        generator_file: write("generator.txt", io::write_generator(&code))?,
        dual_file: write("dual.txt", io::write_generator(&dual))?,
    };
    let json = serde_json::to_string_pretty(&manifest)? + "\n";
    write("manifest.json", json)?;
    Ok((Output::Build(manifest), EXIT_OK))
}

fn verdict_exit(reports: &[TheoremReport]) -> u8 {
    if reports.iter().any(|r| r.verdict == Verdict::Counterexample) {
        EXIT_COUNTEREXAMPLE
    } else if reports.iter().any(|r| r.verdict == Verdict::SearchedNoCounterexample) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

fn verify(c: &Common, id: &str, geo: &Geo, k: Option<usize>) -> anyhow::Result<(Output, u8)> {
    let all = id == "all";
    if !all {
        theorems::lookup(id)?;
    }
    let fixed = if all { None } else { fixed_k(id, geo.n) };
    let k = match (k, fixed) {
        (Some(k), Some(f)) if k != f => bail!(Error::InvalidParameter(format!("{id} fixes k = {f}, got k = {k}"))),
        (Some(k), _) | (None, Some(k)) => k,
        (None, None) => bail!(Error::InvalidParameter(format!("{id} needs --k"))),
    };
    check_k(geo, k)?;
    let mut inst = Instance::new(geo.n, geo.p, geo.h, k, c.budget(), c.seed)?;
    let reports = if all { theorems::theorem_suite(&mut inst)? } else { vec![theorems::verify(id, &mut inst)?] };
    let code = verdict_exit(&reports);
    Ok((Output::Verify(reports), code))
}

fn spread(c: &Common, geo: &Geo) -> anyhow::Result<(Output, u8)> {
    let g = geometry(c, geo)?;
    let s = blocking::desarguesian_spread(&g, &c.budget())?;
    let element_points = (0..s.len()).map(|e| s.element_points(e).to_vec()).collect();
    Ok((Output::Spread(SpreadReport { summary: s.summary(), element_points }), EXIT_OK))
}

enum Source<'a> {
    SubspaceFile(&'a Path),
    PointFile(&'a Path),
    Random,
}

fn parse_dims(s: &str) -> anyhow::Result<RangeInclusive<usize>> {
    let bad = || Error::InvalidParameter(format!("--dims '{s}': expected 'lo..hi' or a single dimension"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        bail!(bad());
    }
    Ok(a..=b)
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn blocking(
    c: &Common,
    geo: &Geo,
    k: usize,
    src: Source<'_>,
    dims: Option<&str>,
    export: Option<&Path>,
) -> anyhow::Result<(Output, u8)> {
    check_k(geo, k)?;
    let budget = c.budget();
    let dims = dims.map(parse_dims).transpose()?;
    let g = geometry(c, geo)?;
    let (source, subspace, points, certificate) = match src {
        Source::PointFile(path) => {
            let (n, p, h, set) = io::read_point_set(&read(path)?)?;
            if (n, p, h) != (geo.n, geo.p, geo.h) {
                bail!(Error::InvalidParameter(format!(
                    "point file is for n={n} p={p} h={h}, command has n={} p={} h={}",
                    geo.n, geo.p, geo.h
                )));
            }
            let cert = blocking::certify(&g, &set, k, dims, &budget)?;
            ("point-file", None, set, cert)
        }
        Source::SubspaceFile(_) | Source::Random => {
            let spread = blocking::desarguesian_spread(&g, &budget)?;
            let amb = spread.ambient();
            let u = match src {
                Source::SubspaceFile(path) => {
                    let rows = io::read_vectors(&read(path)?)?;
                    if rows.is_empty() {
                        bail!(Error::InvalidParameter("subspace file has no vectors".into()));
                    }
                    amb.subspace_from_rows(&rows)?
                        .ok_or_else(|| Error::InvalidParameter("subspace file spans the zero space".into()))?
                }
                _ => blocking::seeded_subspace(amb, geo.h as usize * k, c.seed)?,
            };
            let (set, cert) = blocking::linear_blocking_set(&spread, &u, k, dims, &budget)?;
            let source = if matches!(src, Source::Random) { "random-subspace" } else { "subspace-file" };
            (source, Some(u), set, cert)
        }
    };
    let export = match export {
        Some(path) => {
            fs::write(path, io::write_point_set(&points, geo.n, geo.p, geo.h))
                .with_context(|| format!("writing {}", path.display()))?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let report = BlockingReport { source, subspace, points, certificate, export };
    Ok((Output::Blocking(Box::new(report)), EXIT_OK))
}

fn spectrum(c: &Common, geo: &Geo, k: usize, which: Which) -> anyhow::Result<(Output, u8)> {
    check_k(geo, k)?;
    let budget = c.budget();
    let g = geometry(c, geo)?;
    let base = build_code(&g, k, &budget)?;
    let code: Code = match which {
        Which::Code => base,
        Which::Dual => base.dual(),
        Which::Hull => base.hull(),
    };
    if code.dim() == 0 {
        let report = SpectrumReport { code: which, length: code.length(), dim: 0, distribution: None, minimum: None };
        return Ok((Output::Spectrum(report), EXIT_OK));
    }
    let (distribution, minimum, exit) = if exhaustive_feasible(&code, &budget) {
        (Some(full_spectrum(&code, &budget)?), None, EXIT_OK)
    } else {
        let m = min_weight(&code, &budget)?;
        let exit = if m.exact { EXIT_OK } else { EXIT_INCONCLUSIVE };
        (None, Some(m), exit)
    };
    let report = SpectrumReport { code: which, length: code.length(), dim: code.dim(), distribution, minimum };
    Ok((Output::Spectrum(report), exit))
}
