//! Command-line front end: argument model, run configuration and verbs.

use std::f64::consts::PI;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{reference_values, sequence_invariants, QuadratureSpec, ReferenceRow, SurfaceInvariants};
use crate::immersion::{
    alt_sum_residual, angle_table, build_x, closed_form_angle, distinctness_check, min_poly_residual, shift_residual,
    tabulated_cos, AngleTable,
};
use crate::io::{read_json, to_json, Table};
use crate::rational::{sample_points, FieldVec};
use crate::sigma::{
    completeness_residual, conservation_residual, el_residual, ladder, orthogonality_residual, project,
    projector_residual, veronese_field, ProjectorSeq, Provenance,
};
use crate::spectral::{default_lambda_grid, spectral_report, SpectralReport};
use crate::su2rep::{
    coherent_field, coherent_projector, half_label, jacobi_poly, parse_half, rep_matrix, GroupElement, Spin, SpinLabel,
};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const MAX_N: usize = 8;

pub const KIND_SEQ: &str = "projector-seq";
pub const KIND_FIELD: &str = "field";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(name = "cpn", version, about = "CP^N sigma model solutions, immersions and invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Residual tolerance for pass/fail decisions.
    #[arg(long, global = true, env = "CPN_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for quadrature.
    #[arg(long, global = true, env = "CPN_THREADS")]
    pub threads: Option<usize>,
}

/// Where the projector sequence comes from.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Projector-sequence JSON file.
    pub input: Option<PathBuf>,
    /// Veronese model CP^n.
    #[arg(long)]
    pub n: Option<usize>,
    /// Coherent-state sequence of spin j.
    #[arg(long)]
    pub spin: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Veronese ladder of CP^n.
    Veronese {
        #[arg(long)]
        n: usize,
    },
    /// Coherent-state field for (j, m), or the whole sequence when m is omitted.
    Coherent {
        #[arg(long)]
        spin: String,
        #[arg(long)]
        m: Option<String>,
    },
    /// Residuals of every algebraic identity; exit status 1 on failure.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        /// Seeded random points added to the fixed sample points.
        #[arg(long, default_value_t = 4)]
        extra_points: usize,
    },
    /// Curvatures and integral invariants.
    Invariants {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 160)]
        quad_radial: usize,
        #[arg(long, default_value_t = 128)]
        quad_angular: usize,
    },
    /// Angles between the immersed surfaces.
    Angles {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Representation matrix at Euler angles.
    Matelem {
        #[arg(long)]
        spin: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        psi: f64,
    },
    /// Jacobi polynomial coefficients, lowest power first.
    Jacobi {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        alpha: i32,
        #[arg(long, allow_negative_numbers = true)]
        beta: i32,
    },
    /// Linear spectral problem residuals.
    SpectralCheck {
        #[command(flatten)]
        source: SourceArgs,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum FieldSource {
    Veronese(usize),
    Coherent { j: Spin, m2: Option<i32> },
    File(PathBuf),
}

/// Fully resolved settings for one command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub source: Option<FieldSource>,
    pub quadrature: QuadratureSpec,
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(global: &GlobalArgs) -> Self {
        RunConfig {
            source: None,
            quadrature: QuadratureSpec::default(),
            tol: global.tol,
            seed: global.seed,
            format: global.format,
            out: global.out.clone(),
        }
    }

    pub fn with_source(mut self, s: &SourceArgs) -> Result<Self> {
        let mut found = Vec::new();
        if let Some(p) = &s.input {
            found.push(FieldSource::File(p.clone()));
        }
        if let Some(n) = s.n {
            found.push(FieldSource::Veronese(n));
        }
        if let Some(j) = &s.spin {
            found.push(FieldSource::Coherent { j: j.parse()?, m2: None });
        }
        if found.len() != 1 {
            return Err(Error::Invalid("give exactly one of FILE, --n or --spin".into()));
        }
        self.source = found.pop();
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Invalid("tolerance must be positive".into()));
        }
        self.quadrature.validate()
    }

    pub fn sequence(&self) -> Result<ProjectorSeq> {
        match &self.source {
            Some(FieldSource::Veronese(n)) => veronese_seq(*n),
            Some(FieldSource::Coherent { j, .. }) => coherent_seq(*j),
            Some(FieldSource::File(p)) => read_json(KIND_SEQ, p),
            None => Err(Error::Invalid("no field source".into())),
        }
    }
}

pub fn veronese_seq(n: usize) -> Result<ProjectorSeq> {
    if n == 0 || n > MAX_N {
        return Err(Error::Invalid(format!("n must lie in 1..={MAX_N}")));
    }
    ladder(&veronese_field(n), n)
}

/// Projectors of `|j, m⟩` coherent states ordered `m = j, j−1, …, −j`.
pub fn coherent_seq(j: Spin) -> Result<ProjectorSeq> {
    if j.twice == 0 {
        return Err(Error::InvalidSpin("spin 0 has no ladder".into()));
    }
    let mut fields = Vec::new();
    let mut projectors = Vec::new();
    for m2 in j.weights() {
        let f = coherent_field(SpinLabel::new(j, m2)?);
        projectors.push(project(&f)?);
        fields.push(f);
    }
    Ok(ProjectorSeq { n: j.twice as usize, provenance: Provenance::FromCoherentState, fields, projectors })
}

/// Named residual with its verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check { name: name.into(), value, tol, pass: value <= tol }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub provenance: Provenance,
    pub points: usize,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["check", "residual", "tol", "status"]);
        for c in &self.checks {
            t.push(vec![c.name.as_str().into(), c.value.into(), c.tol.into(), c.pass.into()]);
        }
        t
    }

    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }
}

/// Fixed sample points plus `extra` seeded random points with `0.1 ≤ |ξ| ≤ 2.5`.
pub fn verification_points(seed: u64, extra: usize) -> Vec<Complex64> {
    let mut pts = sample_points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..extra {
        let r = rng.gen_range(0.1..2.5);
        let a = rng.gen_range(0.0..2.0 * PI);
        pts.push(Complex64::from_polar(r, a));
    }
    pts
}

pub fn verify(seq: &ProjectorSeq, points: &[Complex64], tol: f64) -> Result<VerifyReport> {
    if seq.projectors.len() != seq.n + 1 {
        return Err(Error::Dimension(format!("{} projectors for N = {}", seq.projectors.len(), seq.n)));
    }
    let jets = seq.jets();
    let mut checks = Vec::new();
    for (k, (p, jet)) in seq.projectors.iter().zip(&jets).enumerate() {
        checks.push(Check::new(format!("projector[{k}]"), projector_residual(p, points), tol));
        checks.push(Check::new(format!("euler-lagrange[{k}]"), el_residual(jet, points), tol));
        checks.push(Check::new(format!("conservation[{k}]"), conservation_residual(jet, points), tol));
        let x = build_x(seq, k)?;
        checks.push(Check::new(format!("minimal-polynomial[{k}]"), min_poly_residual(&x, points), tol));
    }
    checks.push(Check::new("orthogonality", orthogonality_residual(seq, points), tol));
    checks.push(Check::new("completeness", completeness_residual(seq, points), tol));
    checks.push(Check::new("alternating-sum", alt_sum_residual(seq, points), tol));
    checks.push(Check::new("shift-consistency", shift_residual(seq, &jets, points), tol));
    let mut notes = Vec::new();
    let j = Spin::from_twice(seq.n as u32);
    let reference = veronese_seq(seq.n).ok();
    let is_veronese = reference
        .as_ref()
        .map(|r| r.projectors[0].max_pointwise_diff(&seq.projectors[0], points) <= tol)
        .unwrap_or(false);
    if is_veronese {
        let mut worst = 0.0f64;
        for (k, m2) in j.weights().enumerate() {
            let c = coherent_projector(SpinLabel::new(j, m2)?)?;
            worst = worst.max(c.max_pointwise_diff(&seq.projectors[k], points));
        }
        checks.push(Check::new("coherent-vs-ladder", worst, tol));
    } else {
        notes.push("coherent-vs-ladder skipped: P_0 is not the Veronese projector".into());
    }
    for d in distinctness_check(seq, points) {
        if d.coincident {
            notes.push(format!("X_{} and X_{} coincide", d.k, d.l));
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport { n: seq.n, provenance: seq.provenance, points: points.len(), checks, notes, pass })
}

/// Computed against reference value for one quantity.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub k: usize,
    pub quantity: String,
    pub computed: f64,
    pub reference: f64,
    pub rel_dev: f64,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub n: usize,
    pub quadrature: QuadratureSpec,
    pub surfaces: Vec<SurfaceInvariants>,
    pub reference: Option<Vec<ReferenceRow>>,
    pub comparisons: Vec<Comparison>,
}

pub fn compare(k: usize, quantity: &str, computed: f64, reference: f64, rel_tol: f64) -> Comparison {
    let rel_dev = (computed - reference).abs() / reference.abs().max(1e-300);
    let abs = (computed - reference).abs();
    let agrees = if reference == 0.0 { abs <= rel_tol } else { rel_dev <= rel_tol };
    Comparison { k, quantity: quantity.into(), computed, reference, rel_dev, agrees }
}

pub fn invariant_report(seq: &ProjectorSeq, quad: &QuadratureSpec) -> InvariantReport {
    let surfaces = sequence_invariants(seq, quad);
    let reference = reference_values(seq.n);
    let mut comparisons = Vec::new();
    if let Some(refs) = &reference {
        for (s, r) in surfaces.iter().zip(refs) {
            let i = &s.integrals;
            comparisons.push(compare(s.k, "K", s.curvature, r.curvature, 1e-6));
            comparisons.push(compare(s.k, "|H|", s.mean_norm, r.mean_norm, 1e-6));
            comparisons.push(compare(s.k, "W", i.willmore.value, r.willmore, 1e-6));
            comparisons.push(compare(s.k, "Q", i.charge.value, r.charge, 1e-6));
            comparisons.push(compare(s.k, "Delta", i.euler.value, r.euler, 1e-6));
        }
    }
    InvariantReport { n: seq.n, quadrature: *quad, surfaces, reference, comparisons }
}

impl InvariantReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "k", "K", "K_spread", "H", "H_spread", "W", "W_err", "Q", "Q_err", "Delta", "Delta_err", "GB", "GB_err",
        ]);
        for s in &self.surfaces {
            let i = &s.integrals;
            t.push(vec![
                s.k.into(),
                s.curvature.into(),
                s.curvature_spread.into(),
                s.mean_norm.into(),
                s.mean_norm_spread.into(),
                i.willmore.value.into(),
                i.willmore.error.into(),
                i.charge.value.into(),
                i.charge.error.into(),
                i.euler.value.into(),
                i.euler.error.into(),
                i.gauss_bonnet.value.into(),
                i.gauss_bonnet.error.into(),
            ]);
        }
        t
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AngleEntry {
    pub k: usize,
    pub m: usize,
    pub computed: f64,
    pub closed_form: f64,
    pub tabulated: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnglesReport {
    pub table: AngleTable,
    pub entries: Vec<AngleEntry>,
    /// Entries whose tabulated value differs from the computed one by more than `1e-9`.
    pub discrepancies: Vec<AngleEntry>,
}

pub fn angles_report(seq: &ProjectorSeq, points: &[Complex64]) -> AnglesReport {
    let table = angle_table(seq, points);
    let tab = tabulated_cos(seq.n);
    let mut entries = Vec::new();
    for k in 0..=seq.n {
        for m in 0..=seq.n {
            entries.push(AngleEntry {
                k,
                m,
                computed: table.cos[k][m],
                closed_form: closed_form_angle(seq.n, k, m),
                tabulated: tab.as_ref().map(|t| t[k][m]),
            });
        }
    }
    let discrepancies =
        entries.iter().filter(|e| e.tabulated.is_some_and(|t| (t - e.computed).abs() > 1e-9)).cloned().collect();
    AnglesReport { table, entries, discrepancies }
}

impl AnglesReport {
    pub fn csv_table(&self) -> Table {
        let mut t = Table::new(&["k", "m", "gram", "cos", "closed_form", "tabulated"]);
        for e in &self.entries {
            let tab = e.tabulated.map(|x| x.into()).unwrap_or_else(|| "".into());
            t.push(vec![
                e.k.into(),
                e.m.into(),
                self.table.gram[e.k][e.m].into(),
                e.computed.into(),
                e.closed_form.into(),
                tab,
            ]);
        }
        t
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixElement {
    pub k: String,
    pub m: String,
    pub re: f64,
    pub im: f64,
}

pub fn matrix_elements(j: Spin, theta: f64, phi: f64, psi: f64) -> Vec<MatrixElement> {
    let t = rep_matrix(j, &GroupElement::from_euler(theta, phi, psi));
    let mut out = Vec::new();
    for (a, k2) in j.weights().enumerate() {
        for (b, m2) in j.weights().enumerate() {
            let c = t[(a, b)];
            out.push(MatrixElement { k: half_label(k2), m: half_label(m2), re: c.re, im: c.im });
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobiCoefficients {
    pub n: u32,
    pub alpha: i32,
    pub beta: i32,
    pub coefficients: Vec<f64>,
}

/// Rendered output of one command.
pub struct Output {
    pub text: String,
    pub exit_code: i32,
}

fn spectral_table(r: &SpectralReport) -> Table {
    let mut t = Table::new(&["k", "lambda_re", "lambda_im", "lsp_residual"]);
    for l in &r.lsp {
        t.push(vec![l.k.into(), l.lambda_re.into(), l.lambda_im.into(), l.lsp.into()]);
    }
    t
}

fn render<T: Serialize>(cfg: &RunConfig, kind: &str, data: &T, table: Option<Table>, extra: &str) -> Result<String> {
    match cfg.format {
        Format::Json => to_json(kind, data),
        Format::Csv => table.ok_or_else(|| Error::Invalid(format!("{kind} has no CSV form"))).and_then(|t| t.to_csv()),
        Format::Pretty => match table {
            Some(t) => Ok(format!("{}{extra}", t.pretty())),
            None => to_json(kind, data),
        },
    }
}

fn field_label_json(label: SpinLabel, f: &FieldVec) -> serde_json::Value {
    serde_json::json!({ "j": label.j.to_string(), "m": half_label(label.m2), "field": f })
}

/// Runs one parsed command and returns its rendered output.
pub fn execute(cli: &Cli) -> Result<Output> {
    let cfg = RunConfig::new(&cli.global);
    cfg.validate()?;
    let pts = sample_points();
    let ok = |text| Ok(Output { text, exit_code: 0 });
    match &cli.command {
        Command::Veronese { n } => {
            let seq = veronese_seq(*n)?;
            ok(render(&cfg, KIND_SEQ, &seq, None, "")?)
        }
        Command::Coherent { spin, m } => {
            let j: Spin = spin.parse()?;
            match m {
                Some(m) => {
                    let label = SpinLabel::new(j, parse_half(m)?)?;
                    let f = coherent_field(label);
                    ok(render(&cfg, KIND_FIELD, &field_label_json(label, &f), None, "")?)
                }
                None => ok(render(&cfg, KIND_SEQ, &coherent_seq(j)?, None, "")?),
            }
        }
        Command::Verify { source, extra_points } => {
            let cfg = cfg.with_source(source)?;
            let seq = cfg.sequence()?;
            let points = verification_points(cfg.seed, *extra_points);
            let rep = verify(&seq, &points, cfg.tol)?;
            let mut extra = String::new();
            for n in &rep.notes {
                extra.push_str(&format!("note: {n}\n"));
            }
            extra.push_str(if rep.pass { "all checks pass\n" } else { "FAILED\n" });
            let text = render(&cfg, "verify-report", &rep, Some(rep.table()), &extra)?;
            Ok(Output { text, exit_code: if rep.pass { 0 } else { 1 } })
        }
        Command::Invariants { source, quad_radial, quad_angular } => {
            let mut cfg = cfg.with_source(source)?;
            cfg.quadrature = QuadratureSpec::new(*quad_radial, *quad_angular)?;
            let seq = cfg.sequence()?;
            let rep = invariant_report(&seq, &cfg.quadrature);
            let mut extra = String::new();
            for c in rep.comparisons.iter().filter(|c| !c.agrees) {
                extra.push_str(&format!(
                    "differs from reference: k={} {} computed {:.10} reference {:.10}\n",
                    c.k, c.quantity, c.computed, c.reference
                ));
            }
            ok(render(&cfg, "invariant-report", &rep, Some(rep.table()), &extra)?)
        }
        Command::Angles { source } => {
            let cfg = cfg.with_source(source)?;
            let seq = cfg.sequence()?;
            let rep = angles_report(&seq, &pts);
            let mut extra = format!("spread {:.3e}, closed-form deviation {:.3e}\n", rep.table.spread, rep.table.closed_form_dev);
            for d in &rep.discrepancies {
                extra.push_str(&format!(
                    "tabulated cos({},{}) = {:.10} differs from computed {:.10}\n",
                    d.k,
                    d.m,
                    d.tabulated.unwrap_or(f64::NAN),
                    d.computed
                ));
            }
            ok(render(&cfg, "angles-report", &rep, Some(rep.csv_table()), &extra)?)
        }
        Command::Matelem { spin, theta, phi, psi } => {
            let j: Spin = spin.parse()?;
            let rows = matrix_elements(j, *theta, *phi, *psi);
            let mut t = Table::new(&["k", "m", "re", "im"]);
            for r in &rows {
                t.push(vec![r.k.as_str().into(), r.m.as_str().into(), r.re.into(), r.im.into()]);
            }
            let data = serde_json::json!({ "j": j.to_string(), "theta": theta, "phi": phi, "psi": psi, "elements": rows });
            ok(render(&cfg, "matrix-elements", &data, Some(t), "")?)
        }
        Command::Jacobi { n, alpha, beta } => {
            let c = JacobiCoefficients { n: *n, alpha: *alpha, beta: *beta, coefficients: jacobi_poly(*n, *alpha, *beta) };
            let mut t = Table::new(&["power", "coefficient"]);
            for (p, x) in c.coefficients.iter().enumerate() {
                t.push(vec![p.into(), (*x).into()]);
            }
            ok(render(&cfg, "jacobi", &c, Some(t), "")?)
        }
        Command::SpectralCheck { source } => {
            let cfg = cfg.with_source(source)?;
            let seq = cfg.sequence()?;
            let rep = spectral_report(&seq, &default_lambda_grid(), &pts)?;
            let extra = format!(
                "max lsp {:.3e}, max unitarity {:.3e}, max sym-tafel {:.3e}\n",
                rep.max_lsp, rep.max_unitarity, rep.max_sym_tafel
            );
            ok(render(&cfg, "spectral-report", &rep, Some(spectral_table(&rep)), &extra)?)
        }
    }
}

fn configure_threads(n: Option<usize>) {
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    configure_threads(cli.global.threads);
    match execute(&cli).and_then(|o| emit(cli.global.out.as_deref(), &o.text).map(|_| o.exit_code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("cpn").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn jacobi_verb() {
        let out = execute(&parse(&["jacobi", "--n", "1", "--alpha", "0", "--beta", "0"])).unwrap();
        assert!(out.text.contains("\"coefficients\": [\n      0.0,\n      1.0\n    ]"));
    }

    #[test]
    fn source_must_be_unique() {
        let cli = parse(&["angles", "--n", "2", "--spin", "1"]);
        assert!(execute(&cli).is_err());
        let cli = parse(&["angles"]);
        assert!(execute(&cli).is_err());
    }

    #[test]
    fn verify_cp1_notes_coincidence() {
        let seq = veronese_seq(1).unwrap();
        let rep = verify(&seq, &sample_points(), 1e-9).unwrap();
        assert!(rep.pass, "{:?}", rep.failing());
        assert!(rep.notes.iter().any(|n| n.contains("X_0 and X_1 coincide")));
    }

    #[test]
    fn invalid_n_rejected() {
        assert!(veronese_seq(0).is_err());
        assert!(veronese_seq(MAX_N + 1).is_err());
    }
}
