//! The `soc` command line.
//!
//! [`run`] does all the work and returns the report together with an exit
//! status: 0 when the computation succeeded and every check passed, 1 when
//! a validation or check failed, 2 when the input could not be read or
//! parsed. [`main_from`] adds argument parsing and output handling.

mod fixtures;
mod render;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub use fixtures::Fixture;

use crate::algebra::{network_algebra, validate_algebra, AlgebraJson, PAlgebra};
use crate::basechange::{
    check_hochschild_transport, check_residue_transport, check_spectral_mapping_with, check_spectrum_transport,
    FunctorRegistry,
};
use crate::error::Error;
use crate::exec::Exec;
use crate::linalg::{r, SpectrumSet};
use crate::operad::{validate_operad_with, OperadJson, ValidateOptions, WeightedDigraph};
use crate::report::{to_json, CheckReport, ValidationReport, SCHEMA_VERSION};
use crate::spectral::{
    analytic_spectrum_with, decompose, naive_spectrum, operadic_spectrum, AnalyticOptions, AnalyticSpectrum,
    SpectralDecomposition, DEFAULT_TOLERANCE,
};

#[derive(Parser, Debug)]
#[command(name = "soc", version, about = "Spectral invariants of algebras over colored operads")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Subcommand, Clone, Debug, PartialEq)]
pub enum Command {
    /// Build the operadic spectrum object and report its dimensions.
    Spectrum,
    /// Split the spectrum object into local and interaction summands.
    Decompose,
    /// Eigenvalues of the distinguished maps and of loop composites.
    Analytic,
    /// Eigenvalues of the distinguished maps only.
    Naive,
    /// Two algebras with equal naive spectra and different operadic totals.
    NogoDemo,
    /// Read a weighted digraph and analyse its network algebra.
    Network {
        /// Also compute loop eigenvalues.
        #[arg(long)]
        analytic: bool,
    },
    /// Run the base-change and spectral-mapping checks.
    Basechange {
        /// Functor to check; repeat for several. Defaults to all built-ins.
        #[arg(long = "functor", value_name = "NAME")]
        functors: Vec<String>,
        /// Real polynomial coefficients, constant term first.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [0.0, 0.0, 1.0])]
        poly: Vec<f64>,
    },
    /// Check the axioms of an operad or algebra file.
    Validate,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Decompose => "decompose",
            Command::Analytic => "analytic",
            Command::Naive => "naive",
            Command::NogoDemo => "nogo-demo",
            Command::Network { .. } => "network",
            Command::Basechange { .. } => "basechange",
            Command::Validate => "validate",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(x) => Err(format!("must be positive and finite, got {x}")),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Args, Clone, Debug)]
pub struct CommonArgs {
    /// JSON input file.
    #[arg(long, global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Use a built-in input instead of a file.
    #[arg(long, global = true, conflicts_with = "input")]
    pub fixture: Option<Fixture>,
    /// Tolerance for comparing eigenvalues.
    #[arg(long, global = true, env = "SOC_TOLERANCE", default_value_t = DEFAULT_TOLERANCE, value_parser = positive_f64)]
    pub tolerance: f64,
    /// Longest loop followed by the analytic spectrum [default: twice the number of colors].
    #[arg(long, global = true, value_parser = positive_usize)]
    pub max_loop_length: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Path(PathBuf),
    Fixture(Fixture),
}

/// Everything a single invocation needs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub source: Option<Source>,
    pub tolerance: f64,
    pub max_loop_length: Option<usize>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            source: None,
            tolerance: DEFAULT_TOLERANCE,
            max_loop_length: None,
            format: Format::Text,
            output: None,
            seed: 0,
        }
    }

    pub fn with_source(mut self, source: Source) -> Self {
        self.source = Some(source);
        self
    }

    pub fn with_format(mut self, format: Format) -> Self {
        self.format = format;
        self
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let c = cli.common;
        let source = match (c.input, c.fixture) {
            (Some(p), _) => Some(Source::Path(p)),
            (None, Some(f)) => Some(Source::Fixture(f)),
            (None, None) => None,
        };
        Self {
            command: cli.command,
            source,
            tolerance: c.tolerance,
            max_loop_length: c.max_loop_length,
            format: c.format,
            output: c.output,
            seed: c.seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    CheckFailure,
    InputError,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::CheckFailure => 1,
            ExitStatus::InputError => 2,
        }
    }
}

/// Result of [`run`]: the rendered report, if any, and a message for
/// standard error.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: ExitStatus,
    pub report: Option<String>,
    pub message: Option<String>,
}

enum Failure {
    Input(String),
    Check(String),
}

struct Rendered {
    json: String,
    text: String,
    /// Set when a check or validation failed; the report is still emitted.
    failed: Option<String>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<&'a str>,
    #[serde(flatten)]
    body: T,
}

fn envelope<T: Serialize>(cfg: &RunConfig, input: Option<&str>, body: T) -> String {
    to_json(&Envelope {
        schema_version: SCHEMA_VERSION,
        command: cfg.command.name(),
        input,
        body,
    })
}

struct Input {
    label: String,
    text: String,
}

fn read_input(cfg: &RunConfig) -> Result<Input, Failure> {
    match &cfg.source {
        Some(Source::Fixture(f)) => Ok(Input {
            label: format!("fixture:{}", f.name()),
            text: f.contents().to_string(),
        }),
        Some(Source::Path(p)) => std::fs::read_to_string(p)
            .map(|text| Input {
                label: p.display().to_string(),
                text,
            })
            .map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => Err(Failure::Input(format!(
            "`{}` needs --input PATH or --fixture NAME",
            cfg.command.name()
        ))),
    }
}

fn parse<T: DeserializeOwned>(input: &Input) -> Result<T, Failure> {
    serde_json::from_str(&input.text).map_err(|e| {
        let msg = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let msg = msg.strip_suffix(&suffix).unwrap_or(&msg);
        Failure::Input(format!("{}:{}:{}: {msg}", input.label, e.line(), e.column()))
    })
}

/// An algebra file, or a bare weighted digraph read as its network algebra.
fn load_algebra(input: &Input) -> Result<PAlgebra, Failure> {
    let value: serde_json::Value = parse(input)?;
    let built = if value.get("vertices").is_some() {
        network_algebra(&parse::<WeightedDigraph>(input)?)
    } else {
        parse::<AlgebraJson>(input)?.into_algebra()
    };
    built.map_err(|e| Failure::Input(format!("{}: {e}", input.label)))
}

fn computed<T>(r: crate::error::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        Error::InvalidArgument(_) => Failure::Input(e.to_string()),
        _ => Failure::Check(e.to_string()),
    })
}

fn analytic_options(cfg: &RunConfig) -> AnalyticOptions {
    AnalyticOptions {
        max_loop_length: cfg.max_loop_length,
        tolerance: cfg.tolerance,
        exec: Exec::default(),
    }
}

/// Runs one command. Never panics on bad input and never writes anywhere.
pub fn run(cfg: &RunConfig) -> Outcome {
    let result = match &cfg.command {
        Command::Spectrum => spectrum(cfg),
        Command::Decompose => decompose_cmd(cfg),
        Command::Analytic => analytic(cfg),
        Command::Naive => naive(cfg),
        Command::NogoDemo => nogo_demo(cfg),
        Command::Network { analytic } => network(cfg, *analytic),
        Command::Basechange { functors, poly } => basechange(cfg, functors, poly),
        Command::Validate => validate(cfg),
    };
    match result {
        Ok(r) => Outcome {
            status: if r.failed.is_some() { ExitStatus::CheckFailure } else { ExitStatus::Success },
            report: Some(match cfg.format {
                Format::Json => r.json,
                Format::Text => r.text,
            }),
            message: r.failed,
        },
        Err(Failure::Input(m)) => Outcome {
            status: ExitStatus::InputError,
            report: None,
            message: Some(m),
        },
        Err(Failure::Check(m)) => Outcome {
            status: ExitStatus::CheckFailure,
            report: None,
            message: Some(m),
        },
    }
}

fn spectrum(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let input = read_input(cfg)?;
    let a = load_algebra(&input)?;
    let s = computed(operadic_spectrum(&a))?;
    let summary = s.summary();
    #[derive(Serialize)]
    struct Body<'a> {
        spectrum: crate::spectral::SpectrumSummary<'a>,
    }
    Ok(Rendered {
        text: render::spectrum(&summary),
        json: envelope(cfg, Some(&input.label), Body { spectrum: summary.clone() }),
        failed: None,
    })
}

fn decompose_cmd(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let input = read_input(cfg)?;
    let a = load_algebra(&input)?;
    let d = decompose(&a);
    Ok(Rendered {
        text: render::decomposition(&d),
        json: envelope(cfg, Some(&input.label), &d),
        failed: None,
    })
}

fn analytic(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let input = read_input(cfg)?;
    let a = load_algebra(&input)?;
    let s = computed(analytic_spectrum_with(&a, &analytic_options(cfg)))?;
    Ok(Rendered {
        text: render::analytic(&s),
        json: envelope(cfg, Some(&input.label), &s),
        failed: None,
    })
}

fn naive(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let input = read_input(cfg)?;
    let a = load_algebra(&input)?;
    let s = computed(naive_spectrum(&a, cfg.tolerance))?;
    #[derive(Serialize)]
    struct Body<'a> {
        per_color: &'a BTreeMap<String, SpectrumSet>,
    }
    Ok(Rendered {
        text: render::per_color(&s),
        json: envelope(cfg, Some(&input.label), Body { per_color: &s }),
        failed: None,
    })
}

fn nogo_demo(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let load = |f: Fixture| {
        load_algebra(&Input {
            label: format!("fixture:{}", f.name()),
            text: f.contents().to_string(),
        })
    };
    let (a, b) = (load(Fixture::NogoA)?, load(Fixture::NogoB)?);
    let (na, nb) = (
        computed(naive_spectrum(&a, cfg.tolerance))?,
        computed(naive_spectrum(&b, cfg.tolerance))?,
    );
    let naive_equal = na.len() == nb.len() && na.iter().zip(&nb).all(|((c, x), (d, y))| c == d && x.approx_eq(y));
    let (ta, tb) = (
        computed(operadic_spectrum(&a))?.total_dimension,
        computed(operadic_spectrum(&b))?.total_dimension,
    );
    let separated = naive_equal && ta != tb;

    #[derive(Serialize)]
    struct Body<'a> {
        naive: BTreeMap<&'a str, &'a BTreeMap<String, SpectrumSet>>,
        naive_equal: bool,
        operadic_totals: BTreeMap<&'a str, usize>,
        separated: bool,
    }
    let body = Body {
        naive: [("A", &na), ("B", &nb)].into(),
        naive_equal,
        operadic_totals: [("A", ta), ("B", tb)].into(),
        separated,
    };
    let mut text = String::from("naive spectra of A\n");
    text.push_str(&render::per_color(&na));
    text.push_str("\nnaive spectra of B\n");
    text.push_str(&render::per_color(&nb));
    text.push_str(&format!(
        "\nnaive spectra equal: {}\noperadic totals: A {ta}, B {tb}\nseparated: {}\n",
        if naive_equal { "yes" } else { "no" },
        if separated { "yes" } else { "no" }
    ));
    Ok(Rendered {
        json: envelope(cfg, None, body),
        text,
        failed: (!separated).then(|| "the two algebras were not separated".to_string()),
    })
}

fn network(cfg: &RunConfig, with_analytic: bool) -> Result<Rendered, Failure> {
    let input = read_input(cfg)?;
    let g: WeightedDigraph = parse(&input)?;
    let a = network_algebra(&g).map_err(|e| Failure::Input(format!("{}: {e}", input.label)))?;
    let d = decompose(&a);
    let s = if with_analytic {
        Some(computed(analytic_spectrum_with(&a, &analytic_options(cfg)))?)
    } else {
        None
    };
    #[derive(Serialize)]
    struct Body<'a> {
        vertices: usize,
        edges: usize,
        notes: &'a [String],
        decomposition: &'a SpectralDecomposition,
        #[serde(skip_serializing_if = "Option::is_none")]
        analytic: Option<&'a AnalyticSpectrum>,
    }
    let mut text = format!("network with {} vertices and {} edges\n", g.vertices.len(), g.edges.len());
    for n in a.notes() {
        text.push_str(&format!("note: {n}\n"));
    }
    text.push('\n');
    text.push_str(&render::decomposition(&d));
    if let Some(s) = &s {
        text.push('\n');
        text.push_str(&render::analytic(s));
    }
    let body = Body {
        vertices: g.vertices.len(),
        edges: g.edges.len(),
        notes: a.notes(),
        decomposition: &d,
        analytic: s.as_ref(),
    };
    Ok(Rendered {
        json: envelope(cfg, Some(&input.label), body),
        text,
        failed: None,
    })
}

fn basechange(cfg: &RunConfig, functors: &[String], poly: &[f64]) -> Result<Rendered, Failure> {
    let input = read_input(cfg)?;
    let a = load_algebra(&input)?;
    let registry = FunctorRegistry::builtin();
    let names: Vec<String> = if functors.is_empty() {
        registry.names().map(str::to_string).collect()
    } else {
        functors.to_vec()
    };
    let handles = names
        .iter()
        .map(|n| registry.get(n).cloned())
        .collect::<crate::error::Result<Vec<_>>>()
        .map_err(|e| Failure::Input(e.to_string()))?;
    let per_functor: Vec<[CheckReport; 3]> = Exec::default().map(&handles, |f| {
        [
            check_residue_transport(a.operad(), f),
            check_hochschild_transport(&a, f),
            check_spectrum_transport(&a, f),
        ]
    });
    let mut reports: Vec<CheckReport> = per_functor.into_iter().flatten().collect();
    let coeffs: Vec<_> = poly.iter().map(|&x| r(x)).collect();
    reports.push(computed(check_spectral_mapping_with(&a, &coeffs, &analytic_options(cfg)))?);
    let failed = reports.iter().filter(|r| !r.pass).count();

    #[derive(Serialize)]
    struct Body<'a> {
        functors: &'a [String],
        polynomial: &'a [f64],
        pass: bool,
        reports: &'a [CheckReport],
    }
    let body = Body {
        functors: &names,
        polynomial: poly,
        pass: failed == 0,
        reports: &reports,
    };
    Ok(Rendered {
        json: envelope(cfg, Some(&input.label), body),
        text: render::checks(&reports),
        failed: (failed > 0).then(|| format!("{failed} check(s) failed")),
    })
}

fn validate(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let input = read_input(cfg)?;
    let value: serde_json::Value = parse(&input)?;
    let opts = ValidateOptions {
        seed: cfg.seed,
        ..Default::default()
    };
    let (kind, report) = if value.get("components").is_some() {
        let a = load_algebra(&input)?;
        let mut rep = validate_operad_with(a.operad(), &opts);
        rep.absorb(validate_algebra(&a));
        ("algebra", rep)
    } else {
        let j: OperadJson = parse(&input)?;
        let p = j
            .into_operad()
            .map_err(|e| Failure::Input(format!("{}: {e}", input.label)))?;
        ("operad", validate_operad_with(&p, &opts))
    };
    #[derive(Serialize)]
    struct Body<'a> {
        kind: &'a str,
        valid: bool,
        report: &'a ValidationReport,
    }
    let body = Body {
        kind,
        valid: report.is_valid(),
        report: &report,
    };
    Ok(Rendered {
        json: envelope(cfg, Some(&input.label), body),
        text: render::validation(kind, &report),
        failed: (!report.is_valid()).then(|| format!("{kind} failed validation with {} violation(s)", report.violations.len())),
    })
}

/// Parses `args`, runs the command and writes the report. Returns the
/// process exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let cfg = RunConfig::from(cli);
    let out = run(&cfg);
    let mut status = out.status;
    if let Some(report) = &out.report {
        let written = match &cfg.output {
            Some(path) => std::fs::write(path, report).map_err(|e| format!("{}: {e}", path.display())),
            None => std::io::stdout()
                .write_all(report.as_bytes())
                .map_err(|e| e.to_string()),
        };
        if let Err(e) = written {
            eprintln!("soc: cannot write report: {e}");
            status = ExitStatus::InputError;
        }
    }
    if let Some(m) = &out.message {
        eprintln!("soc: {m}");
    }
    status.code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(command: Command, f: Fixture) -> Outcome {
        run(&RunConfig::new(command).with_source(Source::Fixture(f)))
    }

    #[test]
    fn nogo_demo_separates() {
        let out = run(&RunConfig::new(Command::NogoDemo));
        assert_eq!(out.status, ExitStatus::Success);
        let text = out.report.unwrap();
        assert!(text.contains("operadic totals: A 4, B 6"), "{text}");
        assert!(text.contains("naive spectra equal: yes"));
    }

    #[test]
    fn two_cycle_interaction() {
        let cfg = RunConfig::new(Command::Network { analytic: true })
            .with_source(Source::Fixture(Fixture::TwoCycle))
            .with_format(Format::Json);
        let out = run(&cfg);
        assert_eq!(out.status, ExitStatus::Success);
        let v: serde_json::Value = serde_json::from_str(&out.report.unwrap()).unwrap();
        let values = &v["analytic"]["interaction"]["values"];
        assert_eq!(values.as_array().unwrap().len(), 1);
        assert_eq!(values[0][0].as_f64().unwrap(), 6.0);
    }

    #[test]
    fn broken_operad_fails_validation() {
        let out = fixture(Command::Validate, Fixture::BrokenOperad);
        assert_eq!(out.status, ExitStatus::CheckFailure);
        assert!(out.report.unwrap().contains("LeftUnit"));
    }

    #[test]
    fn fixtures_are_valid_inputs() {
        for f in [Fixture::NogoA, Fixture::NogoB, Fixture::Block, Fixture::Trivial] {
            assert_eq!(fixture(Command::Validate, f).status, ExitStatus::Success, "{f:?}");
            assert_eq!(fixture(Command::Spectrum, f).status, ExitStatus::Success, "{f:?}");
        }
    }

    #[test]
    fn missing_input_is_an_input_error() {
        let out = run(&RunConfig::new(Command::Decompose));
        assert_eq!(out.status, ExitStatus::InputError);
    }

    #[test]
    fn graph_reads_as_network_algebra() {
        let out = fixture(Command::Spectrum, Fixture::TwoCycle);
        assert_eq!(out.status, ExitStatus::Success);
        assert!(out.report.unwrap().contains("total dimension 4"));
        let bad = fixture(Command::Spectrum, Fixture::BrokenOperad);
        assert_eq!(bad.status, ExitStatus::InputError);
        assert!(bad.message.unwrap().starts_with("fixture:broken_operad:"));
    }
}
