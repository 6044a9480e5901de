//! One function per subcommand. Each writes its files under the output
//! directory and returns a short console summary.

use std::fs;
use std::path::{Path, PathBuf};

use circlemix_core::diagnostics::{self, AcPowerVerdict, Classification, Witness};
use circlemix_core::hilbert::{hilbert_compare, TrigPolynomial};
use circlemix_core::operator::{self, grid_build, grid_power_norms, lp_norm_bounds, tv_exact, NormKind};
use circlemix_core::walk::{estimate_pnf, IncrementSampler, SamplerOptions};
use circlemix_core::{fourier_coefficient, fourier_table, Angle, CircleMeasure, FourierTable, TableOptions, Truncation};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;
use crate::output::{float, write_csv, write_json, write_snapshot, ComplexOut, Float};
use crate::schema::measure_from_value;

pub const MAX_WINDOW: usize = 10_000_000;
pub const MAX_GRID: usize = 1 << 24;
pub const MAX_TRAJECTORIES: usize = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Describe,
    Norms,
    Spectrum,
    Hilbert,
    Simulate,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub spec: PathBuf,
    pub window: usize,
    pub grid: usize,
    /// Largest power; per-command default when `None`.
    pub n_max: Option<u32>,
    pub p: Vec<f64>,
    pub seed: u64,
    pub out: PathBuf,
    pub format: Format,
    pub f: TrigPolynomial,
    pub x0: f64,
    pub steps: Vec<u32>,
    pub trajectories: usize,
}

impl RunConfig {
    pub fn new(command: Command, spec: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            spec: spec.into(),
            window: 1024,
            grid: 4096,
            n_max: None,
            p: vec![1.0, 2.0, f64::INFINITY],
            seed: 0,
            out: PathBuf::from("out"),
            format: Format::Csv,
            f: TrigPolynomial::character(1),
            x0: 0.0,
            steps: vec![1, 10],
            trajectories: 10_000,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.window == 0 || self.window > MAX_WINDOW {
            return bad(format!("window {} must lie in 1..={MAX_WINDOW}", self.window));
        }
        if self.grid < 2 || self.grid > MAX_GRID {
            return bad(format!("grid {} must lie in 2..={MAX_GRID}", self.grid));
        }
        if self.command == Command::Norms && self.grid > MAX_GRID / 2 {
            return bad(format!("grid {} leaves no room for the doubled grid", self.grid));
        }
        if self.trajectories < circlemix_core::walk::MIN_TRAJECTORIES || self.trajectories > MAX_TRAJECTORIES {
            return bad(format!("trajectories {} must lie in 100..={MAX_TRAJECTORIES}", self.trajectories));
        }
        if self.n_max == Some(0) {
            return bad("nmax must be ≥ 1".into());
        }
        if let Some(p) = self.p.iter().find(|p| p.is_nan() || **p < 1.0) {
            return bad(format!("p = {p} is outside [1, inf]"));
        }
        Ok(())
    }
}

/// Parses `j:re[:im]` terms separated by commas.
pub fn parse_poly(s: &str) -> Result<TrigPolynomial, CliError> {
    let bad = || CliError::Config(format!("polynomial '{s}' must look like 1:1,-1:0.5:0.25"));
    let mut terms = Vec::new();
    for t in s.split(',').filter(|t| !t.trim().is_empty()) {
        let parts: Vec<&str> = t.trim().split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(bad());
        }
        let j: i64 = parts[0].parse().map_err(|_| bad())?;
        let re: f64 = parts[1].parse().map_err(|_| bad())?;
        let im: f64 = parts.get(2).map_or(Ok(0.0), |v| v.parse()).map_err(|_| bad())?;
        terms.push((j, Complex64::new(re, im)));
    }
    Ok(TrigPolynomial::new(terms))
}

pub fn parse_angle(s: &str) -> Result<f64, CliError> {
    s.parse::<Angle>().map(|a| a.to_turns()).map_err(|e| CliError::Config(e.to_string()))
}

/// Parses `1,2,inf` style norm exponents.
pub fn parse_p_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| match t.trim() {
            "inf" | "infinity" => Ok(f64::INFINITY),
            v => v.parse::<f64>().map_err(|_| CliError::Config(format!("bad p value '{v}'"))),
        })
        .collect()
}

pub fn parse_u32_list(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| CliError::Config(format!("bad integer '{t}'"))))
        .collect()
}

#[derive(Debug, Clone)]
enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => float(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Num(x) => serde_json::to_value(Float(*x)).expect("float serializes"),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    fn write(&self, dir: &Path, stem: &str, format: Format) -> Result<PathBuf, CliError> {
        match format {
            Format::Csv => {
                let path = dir.join(format!("{stem}.csv"));
                let header: Vec<&str> = self.header.iter().map(String::as_str).collect();
                write_csv(&path, &header, self.rows.iter().map(|r| r.iter().map(Cell::csv).collect()))?;
                Ok(path)
            }
            Format::Json => {
                let path = dir.join(format!("{stem}.json"));
                let rows: Vec<serde_json::Map<String, Value>> = self
                    .rows
                    .iter()
                    .map(|r| self.header.iter().cloned().zip(r.iter().map(Cell::json)).collect())
                    .collect();
                write_json(&path, &rows)?;
                Ok(path)
            }
        }
    }
}

/// Result of one subcommand.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
}

struct Loaded {
    raw: Value,
    measure: CircleMeasure,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = fs::read_to_string(path)?;
    let raw: Value = serde_json::from_str(&text)
        .map_err(|e| crate::schema::SchemaError { path: "$".into(), message: e.to_string() })?;
    let measure = measure_from_value(&raw, "")?;
    Ok(Loaded { raw, measure })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let spec = load(&cfg.spec)?;
    fs::create_dir_all(&cfg.out)?;
    match cfg.command {
        Command::Describe => describe(cfg, &spec.measure),
        Command::Norms => norms(cfg, &spec.measure),
        Command::Spectrum => spectrum(cfg, &spec.measure),
        Command::Hilbert => hilbert(cfg, &spec.measure),
        Command::Simulate => simulate(cfg, &spec),
        Command::Grid => grid(cfg, &spec.measure),
    }
}

fn table_for(mu: &CircleMeasure, n: usize) -> Result<FourierTable, CliError> {
    let opts = TableOptions { max_half_width: MAX_WINDOW, truncation: Truncation::Auto };
    Ok(fourier_table(mu, n, &opts)?)
}

fn witness_text(w: &Witness) -> Option<String> {
    match w {
        Witness::None => None,
        Witness::CyclicOrder(d) => Some(format!("cyclic-order {d}")),
        Witness::UnimodularFrequency(n) => Some(format!("unimodular at n = {n}")),
        Witness::IrrationalAtom(a) => Some(format!("irrational atom {a}")),
        Witness::IrrationalDifference(a) => Some(format!("irrational difference {a}")),
        Witness::AbsolutelyContinuousPower(m) => Some(format!("absolutely continuous power m = {m}")),
    }
}

#[derive(Serialize)]
struct VerdictOut {
    verdict: &'static str,
    rule: &'static str,
    statement: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

impl From<&Classification> for VerdictOut {
    fn from(c: &Classification) -> Self {
        VerdictOut { verdict: c.verdict.label(), rule: c.rule.tag(), statement: c.rule.statement(), witness: witness_text(&c.witness) }
    }
}

#[derive(Serialize)]
struct RhoOut {
    value: Float,
    frequency: i64,
    half_width: usize,
    certified: bool,
}

#[derive(Serialize)]
struct RatioOut {
    j: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<Float>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frequency: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    undefined_at: Option<i64>,
}

#[derive(Serialize)]
struct StolzOut {
    radius: Float,
    frequency: i64,
    contained: bool,
    margin: Float,
}

#[derive(Serialize)]
struct ReportOut {
    window: usize,
    adapted: VerdictOut,
    strictly_aperiodic: VerdictOut,
    rho_sup: RhoOut,
    doeblin: VerdictOut,
    power_ratio: Vec<RatioOut>,
    ac_power: String,
    stolz: StolzOut,
    real_only: bool,
    consistent_with_decay: bool,
}

fn ratio_cell(table: &FourierTable, j: u32) -> Cell {
    match diagnostics::power_ratio(table, j) {
        Ok((v, _)) => Cell::Num(v),
        Err(_) => Cell::Text("undefined".into()),
    }
}

fn describe(cfg: &RunConfig, mu: &CircleMeasure) -> Result<Outcome, CliError> {
    let table = table_for(mu, cfg.window)?;
    let r = diagnostics::describe(mu, &table, &[1, 2]);
    let ac_power = match r.ac_power {
        AcPowerVerdict::At(m) => format!("m = {m}"),
        AcPowerVerdict::Never => "never".into(),
        AcPowerVerdict::Unknown => "unknown".into(),
        AcPowerVerdict::NotApplicable => "not-applicable".into(),
    };
    let report = ReportOut {
        window: cfg.window,
        adapted: (&r.adapted).into(),
        strictly_aperiodic: (&r.strictly_aperiodic).into(),
        rho_sup: RhoOut {
            value: Float(r.rho.value),
            frequency: r.rho.frequency,
            half_width: r.rho.half_width,
            certified: r.rho_certified,
        },
        doeblin: (&r.doeblin).into(),
        power_ratio: r
            .power_ratio
            .iter()
            .map(|e| match e.value {
                Ok((v, n)) => RatioOut { j: e.j, value: Some(Float(v)), frequency: Some(n), undefined_at: None },
                Err(n) => RatioOut { j: e.j, value: None, frequency: None, undefined_at: Some(n) },
            })
            .collect(),
        ac_power,
        stolz: StolzOut {
            radius: Float(r.stolz.radius),
            frequency: r.stolz.frequency,
            contained: r.stolz.contained,
            margin: Float(r.stolz.margin),
        },
        real_only: r.real_only,
        consistent_with_decay: r.consistent_with_decay,
    };
    let mut out = Outcome::default();
    let path = cfg.out.join("report.json");
    write_json(&path, &report)?;
    out.files.push(path);

    let mut scan = Table::new(&["n", "ratio_j1", "ratio_j2"]);
    let mut windows: Vec<usize> = std::iter::successors(Some(1usize), |w| w.checked_mul(2)).take_while(|w| *w < cfg.window).collect();
    windows.push(cfg.window);
    for w in windows {
        let t = table.truncated(w)?;
        scan.rows.push(vec![Cell::Int(w as i64), ratio_cell(&t, 1), ratio_cell(&t, 2)]);
    }
    out.files.push(scan.write(&cfg.out, "ratio_scan", cfg.format)?);

    let line = |name: &str, c: &Classification| format!("{name}: {} [{}]", c.verdict.label(), c.rule.tag());
    out.lines.push(line("adapted", &r.adapted));
    out.lines.push(line("strictly aperiodic", &r.strictly_aperiodic));
    out.lines.push(format!(
        "rho_sup: {} at n = {} (N = {}{})",
        float(r.rho.value),
        r.rho.frequency,
        r.rho.half_width,
        if r.rho_certified { ", certified" } else { "" }
    ));
    out.lines.push(line("doeblin", &r.doeblin));
    Ok(out)
}

fn p_stem(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

/// Grid `‖P^n − E‖` for the given `p`, `n = 1..=n_max`.
fn grid_curve(chain: &operator::GridChain, p: f64, n_max: u32) -> Result<Vec<f64>, CliError> {
    let norms = grid_power_norms(chain, n_max)?;
    let l1: Vec<f64> = norms.l1.entries.iter().map(|e| e.value).collect();
    let linf: Vec<f64> = norms.linf.entries.iter().map(|e| e.value).collect();
    if p == 2.0 {
        let n = chain.size() as i64;
        let s = (1..n).map(|k| chain.eigenvalue(k).norm()).fold(0.0, f64::max);
        return Ok((1..=n_max).map(|k| diagnostics::power_of(s, k)).collect());
    }
    Ok(l1
        .iter()
        .zip(&linf)
        .map(|(a, b)| {
            if p == 1.0 {
                *a
            } else if p.is_infinite() {
                *b
            } else {
                a.powf(1.0 / p) * b.powf(1.0 - 1.0 / p)
            }
        })
        .collect())
}

fn norms(cfg: &RunConfig, mu: &CircleMeasure) -> Result<Outcome, CliError> {
    let n_max = cfg.n_max.unwrap_or(20);
    let table = table_for(mu, cfg.window)?;
    let l2 = operator::l2_curve(mu, &table, n_max);
    let chain = grid_build(mu, cfg.grid, Truncation::Auto)?;
    let chain2 = grid_build(mu, 2 * cfg.grid, Truncation::Auto)?;
    let mut out = Outcome::default();
    for &p in &cfg.p {
        let label = p_stem(p);
        let g1 = grid_curve(&chain, p, n_max)?;
        let g2 = grid_curve(&chain2, p, n_max)?;
        let mut t = Table::new(&["n", "value", "kind", "p", "grid_n", "grid_value", "grid2_value"]);
        for n in 1..=n_max {
            let i = n as usize - 1;
            let tv = tv_exact(mu, n);
            let mut rows: Vec<(f64, NormKind)> = Vec::new();
            if p == 2.0 {
                rows.push((l2.entries[i].value, l2.entries[i].kind));
            } else if p == 1.0 || p.is_infinite() {
                match tv {
                    Some(v) => rows.push((v, NormKind::Exact)),
                    None => rows.push((l2.entries[i].value, NormKind::LowerBound)),
                }
            } else {
                let b = lp_norm_bounds(&chain, &table, p, n, tv)?;
                rows.push((b.lower, NormKind::LowerBound));
                if b.upper_exact_endpoints {
                    rows.push((b.upper, NormKind::UpperBound));
                }
            }
            for (v, kind) in rows {
                t.rows.push(vec![
                    Cell::Int(n as i64),
                    Cell::Num(v),
                    Cell::Text(kind.label().into()),
                    Cell::Text(label.clone()),
                    Cell::Int(cfg.grid as i64),
                    Cell::Num(g1[i]),
                    Cell::Num(g2[i]),
                ]);
            }
        }
        out.files.push(t.write(&cfg.out, &format!("norms_p{label}"), cfg.format)?);
        out.lines.push(format!("p = {label}: n = {n_max} grid({}) = {}", cfg.grid, float(g1[n_max as usize - 1])));
    }
    Ok(out)
}

fn spectrum(cfg: &RunConfig, mu: &CircleMeasure) -> Result<Outcome, CliError> {
    let table = table_for(mu, cfg.window)?;
    let mut full = Table::new(&["n", "re", "im", "abs", "source"]);
    let mut cloud = Table::new(&["n", "re", "im"]);
    for (n, v, src) in table.iter() {
        full.rows.push(vec![Cell::Int(n), Cell::Num(v.re), Cell::Num(v.im), Cell::Num(v.norm()), Cell::Text(src.label())]);
        cloud.rows.push(vec![Cell::Int(n), Cell::Num(v.re), Cell::Num(v.im)]);
    }
    let summary = diagnostics::spectrum_cloud(&table);
    let mut out = Outcome::default();
    out.files.push(full.write(&cfg.out, "fourier_table", cfg.format)?);
    out.files.push(cloud.write(&cfg.out, "spectrum", cfg.format)?);
    out.lines.push(format!(
        "{} distinct points, real only: {}, max |value| off 0: {}",
        summary.points.len(),
        summary.real_only,
        float(summary.max_modulus_off_zero)
    ));
    Ok(out)
}

fn hilbert(cfg: &RunConfig, mu: &CircleMeasure) -> Result<Outcome, CliError> {
    let n = cfg.n_max.unwrap_or(1000);
    let width = cfg.window.max(cfg.f.max_frequency() as usize).max(1);
    if width > MAX_WINDOW {
        return Err(CliError::Config(format!("polynomial degree exceeds the window limit {MAX_WINDOW}")));
    }
    let table = table_for(mu, width)?;
    let cmp = hilbert_compare(&table, &cfg.f, n)?;
    let mut t = Table::new(&[
            "j",
            "eigen_re",
            "eigen_im",
            "partial_re",
            "partial_im",
            "closed_re",
            "closed_im",
            "tail_bound",
            "telescoping_residual",
        ],
    );
    for r in &cmp.rows {
        t.rows.push(vec![
            Cell::Int(r.j),
            Cell::Num(r.eigenvalue.re),
            Cell::Num(r.eigenvalue.im),
            Cell::Num(r.partial.re),
            Cell::Num(r.partial.im),
            Cell::Num(r.closed_form.re),
            Cell::Num(r.closed_form.im),
            Cell::Num(r.tail_bound),
            Cell::Num(r.telescoping_residual),
        ]);
    }
    let mut out = Outcome::default();
    out.files.push(t.write(&cfg.out, "hilbert", cfg.format)?);
    out.lines.push(format!(
        "n = {n}: |closed form − partial| ≤ {}, tail bound {}, telescoping residual {}",
        float(cmp.max_difference),
        float(cmp.tail_bound),
        float(cmp.telescoping_residual)
    ));
    Ok(out)
}

#[derive(Serialize)]
struct TermOut {
    j: i64,
    coefficient: ComplexOut,
}

#[derive(Serialize)]
struct EstimateOut {
    n: u32,
    estimate: ComplexOut,
    stderr: Float,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<ComplexOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<Float>,
}

#[derive(Serialize)]
struct ExperimentOut<'a> {
    spec: &'a Value,
    seed: u64,
    trajectories: usize,
    x0: Float,
    f: Vec<TermOut>,
    schedule: &'a [u32],
    #[serde(skip_serializing_if = "Option::is_none")]
    stage: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    product_grid: Option<usize>,
    rng: &'static str,
    estimates: Vec<EstimateOut>,
}

fn simulate(cfg: &RunConfig, spec: &Loaded) -> Result<Outcome, CliError> {
    let mu = &spec.measure;
    let sampler = IncrementSampler::new(mu, &SamplerOptions::default())?;
    let width = (cfg.f.max_frequency() as usize).max(1);
    let table = table_for(mu, width)?;
    let mut estimates = Vec::with_capacity(cfg.steps.len());
    let mut out = Outcome::default();
    for &n in &cfg.steps {
        let e = estimate_pnf(&sampler, &cfg.f, cfg.x0, n, cfg.trajectories, cfg.seed, Some(&table))?;
        out.lines.push(format!(
            "n = {n}: estimate {} ± {}{}",
            float(e.mc.mean.re),
            float(e.mc.stderr),
            e.sigma.map_or(String::new(), |s| format!(" ({s:.2}σ from exact)"))
        ));
        estimates.push(EstimateOut {
            n,
            estimate: e.mc.mean.into(),
            stderr: Float(e.mc.stderr),
            exact: e.exact.map(Into::into),
            sigma: e.sigma.map(Float),
        });
    }
    let record = ExperimentOut {
        spec: &spec.raw,
        seed: cfg.seed,
        trajectories: cfg.trajectories,
        x0: Float(cfg.x0),
        f: cfg.f.terms().iter().map(|&(j, a)| TermOut { j, coefficient: a.into() }).collect(),
        schedule: &cfg.steps,
        stage: sampler.stage(),
        product_grid: sampler.product_grid(),
        rng: "chacha8, one stream per trajectory",
        estimates,
    };
    let path = cfg.out.join("experiment.json");
    write_json(&path, &record)?;
    out.files.push(path);
    Ok(out)
}

fn grid(cfg: &RunConfig, mu: &CircleMeasure) -> Result<Outcome, CliError> {
    let n_max = cfg.n_max.unwrap_or(20);
    let chain = grid_build(mu, cfg.grid, Truncation::Auto)?;
    let norms = grid_power_norms(&chain, n_max)?;
    let mut t = Table::new(&["n", "grid_n", "l1", "linf"]);
    for (a, b) in norms.l1.entries.iter().zip(&norms.linf.entries) {
        t.rows.push(vec![Cell::Int(a.n as i64), Cell::Int(cfg.grid as i64), Cell::Num(a.value), Cell::Num(b.value)]);
    }
    let mut eig = Table::new(&["k", "kernel_re", "kernel_im", "coefficient_re", "coefficient_im", "abs_diff"]);
    let kmax = 32.min(cfg.grid as i64 / 2);
    for k in -kmax..=kmax {
        let lam = chain.eigenvalue(k);
        let c = fourier_coefficient(mu, -k, Truncation::Auto)?;
        eig.rows.push(vec![
            Cell::Int(k),
            Cell::Num(lam.re),
            Cell::Num(lam.im),
            Cell::Num(c.re),
            Cell::Num(c.im),
            Cell::Num((lam - c).norm()),
        ]);
    }
    let mut out = Outcome::default();
    out.files.push(t.write(&cfg.out, "grid_norms", cfg.format)?);
    out.files.push(eig.write(&cfg.out, "grid_eigen", cfg.format)?);
    let snap = cfg.out.join("grid_chain.cmx");
    write_snapshot(&snap, chain.masses())?;
    out.files.push(snap);
    out.lines.extend(norms.warnings.iter().cloned());
    if let Some(s) = chain.stage() {
        out.lines.push(format!("product truncated at stage {s}"));
    }
    let last = norms.l1.entries.last().expect("n_max ≥ 1");
    out.lines.push(format!("grid {}: ‖P^{} − E‖₁ = {}", cfg.grid, last.n, float(last.value)));
    Ok(out)
}
