//! Subcommands and their reports.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use kraus::classify::{classify_instrument, InstrumentClassification};
use kraus::dilation::{dilate, extract_instrument};
use kraus::gallery;
use kraus::matcore::{polar_factorize, positive_sqrt};
use kraus::measurement::{probabilities, sample_counts};
use kraus::types::{instrument_from_povm, luders_instrument, maximal_refinement};
use kraus::{ComplexMatrix, Instrument, C64};
use serde_json::{json, Value};

use crate::format::{FileError, Kind, OperatorFile};

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Input failed to parse or violated an invariant.
pub const EXIT_VALIDATION: i32 = 2;
/// Two independent checks disagreed, or a residual exceeded the tolerance.
pub const EXIT_CONSISTENCY: i32 = 3;
/// Bad command line.
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "kraus",
    version,
    about = "Classify, dilate and simulate discrete quantum measurements"
)]
pub struct Cli {
    /// Comparison tolerance (Frobenius norm).
    #[arg(long, global = true, default_value_t = kraus::DEFAULT_TOL)]
    pub tol: f64,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Instrument, POVM or observable file. POVMs get square-root
    /// transformers, observables their Lüders instrument.
    pub input: Option<PathBuf>,
    /// Built-in instrument instead of a file.
    #[arg(long, conflicts_with = "input")]
    pub preset: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide ordinary / repeatable / ideal for every outcome.
    Classify {
        #[command(flatten)]
        source: Source,
    },
    /// Build a unitary dilation and check the round trip.
    Dilate {
        #[command(flatten)]
        source: Source,
        /// Where to write the dilation file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Read the instrument off a dilation file.
    Extract {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sample outcomes and compare with the Born probabilities.
    Simulate {
        #[command(flatten)]
        source: Source,
        /// State or density file.
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Polar factorization of a square matrix.
    Polar { input: PathBuf },
    /// Maximal (nondegenerate) refinement of an observable.
    Refine {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print or save a built-in instrument.
    Preset {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("consistency failure: {0}")]
    Consistency(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Consistency(_) => EXIT_CONSISTENCY,
        }
    }
}

impl From<kraus::Error> for CliError {
    fn from(e: kraus::Error) -> Self {
        match e {
            kraus::Error::ConsistencyFailure { .. } => CliError::Consistency(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        match e {
            FileError::Invalid(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// Text and JSON renderings of one command's result plus its exit status.
#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self {
            text,
            json,
            code: EXIT_OK,
        }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            serde_json::to_string_pretty(&self.json).expect("reports serialize")
        } else {
            self.text.clone()
        }
    }
}

fn complex(z: C64) -> String {
    format!("{:+.6}{:+.6}i", z.re, z.im)
}

fn matrix_text(name: &str, m: &ComplexMatrix) -> String {
    let mut s = format!("{name} =\n");
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| complex(m[(i, j)])).collect();
        let _ = writeln!(s, "  [{}]", row.join("  "));
    }
    s
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    json!((0..m.rows())
        .map(|i| (0..m.cols())
            .map(|j| [m[(i, j)].re, m[(i, j)].im])
            .collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn save(file: OperatorFile, path: &Path) -> Result<(), CliError> {
    Ok(file.save(path)?)
}

/// Resolves `--preset` or a file into an instrument.
pub fn load_instrument(source: &Source, tol: f64) -> Result<Instrument, CliError> {
    match (&source.input, &source.preset) {
        (_, Some(name)) => gallery::preset(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown preset {name:?}; available: {}",
                gallery::preset_names()
            ))
        }),
        (Some(path), None) => {
            let file = OperatorFile::load(path)?;
            match file.kind {
                Kind::Povm => Ok(instrument_from_povm(&file.to_povm(tol)?, None)?),
                Kind::Observable => Ok(luders_instrument(&file.to_observable(tol)?)),
                _ => Ok(file.to_instrument(tol)?),
            }
        }
        (None, None) => Err(CliError::Usage(
            "give an input file or --preset <name>".into(),
        )),
    }
}

fn yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.3e}"))
}

pub fn classify_report(inst: &Instrument, tol: f64) -> Result<Report, CliError> {
    let c: InstrumentClassification = classify_instrument(inst, tol)?;
    let mut text = format!("tolerance: {tol:e}\n");
    let _ = writeln!(
        text,
        "{:<10} {:>8} {:>5} {:>10} {:>11} {:>11}  note",
        "outcome", "ordinary", "rank", "repeatable", "||M-P||", "||H^2-H||"
    );
    let mut rows = Vec::new();
    for o in &c.outcomes {
        let row = format!(
            "{:<10} {:>8} {:>5} {:>10} {:>11} {:>11}  {}",
            o.label.as_str(),
            if o.is_ordinary { "yes" } else { "no" },
            o.projector_rank()
                .map_or_else(|| "-".into(), |r| r.to_string()),
            yes_no(o.is_repeatable),
            opt(o.luders_distance),
            format!("{:.3e}", o.projector_residual),
            if o.borderline { "borderline" } else { "" },
        );
        let _ = writeln!(text, "{}", row.trim_end());
        rows.push(json!({
            "label": o.label.as_str(),
            "ordinary": o.is_ordinary,
            "projector_rank": o.projector_rank(),
            "repeatable": o.is_repeatable,
            "luders_distance": o.luders_distance,
            "projector_residual": o.projector_residual,
            "left_residual": o.left_residual,
            "invariance_residual": o.invariance_residual,
            "commutator_residual": o.commutator_residual,
            "borderline": o.borderline,
        }));
    }
    let _ = writeln!(text, "kind: {}", c.kind);
    if let Some(obs) = &c.observable {
        let _ = writeln!(text, "observable eigenvalues: {:?}", obs.eigenvalues());
    }
    Ok(Report::ok(
        text,
        json!({
            "tol": tol,
            "kind": c.kind.as_str(),
            "outcomes": rows,
            "resolution_residual": c.resolution_residual,
            "observable_eigenvalues": c.observable.as_ref().map(|o| o.eigenvalues().to_vec()),
        }),
    ))
}

pub fn dilate_report(
    inst: &Instrument,
    tol: f64,
    output: Option<&Path>,
) -> Result<Report, CliError> {
    let model = dilate(inst, tol)?;
    let unitarity = model.unitary().unitarity_residual();
    let round_trip = extract_instrument(&model)?.max_abs_diff(inst);
    if let Some(path) = output {
        save(OperatorFile::from_dilation(&model), path)?;
    }
    let ok = unitarity <= tol && round_trip <= tol;
    let text = format!(
        "tolerance: {tol:e}\nsystem dim: {}\napparatus dim: {}\nunitarity residual: {unitarity:.3e}\nround-trip residual: {round_trip:.3e}\nstatus: {}\n",
        model.system_dim(),
        model.apparatus_dim(),
        if ok { "ok" } else { "residual exceeds tolerance" },
    );
    Ok(Report {
        text,
        json: json!({
            "tol": tol,
            "system_dim": model.system_dim(),
            "apparatus_dim": model.apparatus_dim(),
            "unitarity_residual": unitarity,
            "round_trip_residual": round_trip,
            "ok": ok,
        }),
        code: if ok { EXIT_OK } else { EXIT_CONSISTENCY },
    })
}

pub fn extract_report(path: &Path, tol: f64, output: Option<&Path>) -> Result<Report, CliError> {
    let model = OperatorFile::load(path)?.to_dilation(tol)?;
    let inst = extract_instrument(&model)?;
    if let Some(out) = output {
        save(OperatorFile::from_instrument(&inst), out)?;
    }
    let mut text = format!("tolerance: {tol:e}\n");
    for (m, label) in inst.transformers().iter().zip(inst.labels()) {
        text += &matrix_text(&format!("M[{label}]"), m);
    }
    let residual = inst.completeness_residual();
    let _ = writeln!(text, "completeness residual: {residual:.3e}");
    Ok(Report::ok(
        text,
        json!({
            "tol": tol,
            "labels": inst.labels().iter().map(|l| l.as_str()).collect::<Vec<_>>(),
            "transformers": inst.transformers().iter().map(matrix_json).collect::<Vec<_>>(),
            "completeness_residual": residual,
        }),
    ))
}

pub fn simulate_report(
    inst: &Instrument,
    state: &Path,
    shots: u64,
    seed: u64,
    tol: f64,
) -> Result<Report, CliError> {
    if shots == 0 {
        return Err(CliError::Usage("--shots must be at least 1".into()));
    }
    let rho = OperatorFile::load(state)?.to_density(tol)?;
    let dist = probabilities(inst, &rho)?;
    let counts = sample_counts(inst, &rho, shots, seed)?;
    let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / shots as f64).collect();
    let tv = dist.total_variation(&freqs);
    let mut text = format!("tolerance: {tol:e}\nshots: {shots}, seed: {seed}\n");
    let _ = writeln!(
        text,
        "{:<10} {:>12} {:>12} {:>10}",
        "outcome", "exact", "empirical", "counts"
    );
    for ((label, p), (f, c)) in dist
        .labels()
        .iter()
        .zip(dist.probabilities())
        .zip(freqs.iter().zip(&counts))
    {
        let _ = writeln!(
            text,
            "{:<10} {:>12.6} {:>12.6} {:>10}",
            label.as_str(),
            p,
            f,
            c
        );
    }
    let _ = writeln!(text, "total variation distance: {tv:.6}");
    Ok(Report::ok(
        text,
        json!({
            "tol": tol,
            "shots": shots,
            "seed": seed,
            "labels": dist.labels().iter().map(|l| l.as_str()).collect::<Vec<_>>(),
            "probabilities": dist.probabilities(),
            "frequencies": freqs,
            "counts": counts,
            "total_variation": tv,
        }),
    ))
}

pub fn polar_report(path: &Path, tol: f64) -> Result<Report, CliError> {
    let a = OperatorFile::load(path)?.to_matrix()?;
    let f = polar_factorize(&a)?;
    let ata = a.adjoint().matmul(&a);
    let residuals = [
        ("||UH - A||", f.unitary.matmul(&f.positive).distance(&a)),
        (
            "||U~H - A||",
            f.partial_isometry.matmul(&f.positive).distance(&a),
        ),
        (
            "||H - (A^dag A)^1/2||",
            f.positive.distance(&positive_sqrt(&ata, tol)?),
        ),
        ("||U^dag U - 1||", f.unitary.unitarity_residual()),
    ];
    let bound = tol * a.frobenius_norm().max(1.0);
    let ok = residuals.iter().all(|(_, r)| *r <= bound);
    let mut text = format!("tolerance: {tol:e}\n");
    text += &matrix_text("U", &f.unitary);
    text += &matrix_text("H", &f.positive);
    text += &matrix_text("U~", &f.partial_isometry);
    text += &matrix_text("Q", &f.range_projector);
    for (name, r) in &residuals {
        let _ = writeln!(text, "{name}: {r:.3e}");
    }
    let _ = writeln!(text, "rank: {}", f.rank());
    Ok(Report {
        text,
        json: json!({
            "tol": tol,
            "unitary": matrix_json(&f.unitary),
            "positive": matrix_json(&f.positive),
            "partial_isometry": matrix_json(&f.partial_isometry),
            "range_projector": matrix_json(&f.range_projector),
            "rank": f.rank(),
            "residuals": residuals.iter().map(|(n, r)| json!({"name": n, "value": r})).collect::<Vec<_>>(),
            "ok": ok,
        }),
        code: if ok { EXIT_OK } else { EXIT_CONSISTENCY },
    })
}

pub fn refine_report(path: &Path, tol: f64, output: Option<&Path>) -> Result<Report, CliError> {
    let obs = OperatorFile::load(path)?.to_observable(tol)?;
    let r = maximal_refinement(&obs);
    if let Some(out) = output {
        save(OperatorFile::from_observable(&r.observable), out)?;
    }
    let mut text = format!(
        "tolerance: {tol:e}\n{:<14} {:>14}\n",
        "refined value", "original value"
    );
    for (j, v) in r.observable.eigenvalues().iter().enumerate() {
        let _ = writeln!(text, "{v:<14.6} {:>14.6}", r.coarse_value(j));
    }
    Ok(Report::ok(
        text,
        json!({
            "tol": tol,
            "eigenvalues": r.observable.eigenvalues(),
            "parents": r.parents,
            "projectors": r.observable.projectors().iter().map(matrix_json).collect::<Vec<_>>(),
        }),
    ))
}

pub fn preset_report(
    name: Option<&str>,
    list: bool,
    output: Option<&Path>,
) -> Result<Report, CliError> {
    if list {
        return Ok(Report::ok(
            gallery::PRESETS.join("\n") + "\n",
            json!(gallery::PRESETS),
        ));
    }
    let name = name.unwrap_or_default();
    let inst = gallery::preset(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown preset {name:?}; available: {}",
            gallery::preset_names()
        ))
    })?;
    let file = OperatorFile::from_instrument(&inst).with_metadata("preset", name);
    if let Some(out) = output {
        save(file.clone(), out)?;
    }
    let json: Value = serde_json::to_value(&file).expect("operator files serialize");
    Ok(Report::ok(file.to_json() + "\n", json))
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Usage(format!(
            "--tol must be a positive number, got {tol}"
        )));
    }
    match &cli.command {
        Command::Classify { source } => classify_report(&load_instrument(source, tol)?, tol),
        Command::Dilate { source, output } => {
            dilate_report(&load_instrument(source, tol)?, tol, output.as_deref())
        }
        Command::Extract { input, output } => extract_report(input, tol, output.as_deref()),
        Command::Simulate {
            source,
            state,
            shots,
            seed,
        } => simulate_report(&load_instrument(source, tol)?, state, *shots, *seed, tol),
        Command::Polar { input } => polar_report(input, tol),
        Command::Refine { input, output } => refine_report(input, tol, output.as_deref()),
        Command::Preset { name, list, output } => {
            preset_report(name.as_deref(), *list, output.as_deref())
        }
    }
}

/// Parses `args`, runs the command, prints the report and returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let mut out = report.render(cli.json);
            if cli.json {
                out.push('\n');
            }
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            report.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_exit_codes() {
        let consistency = kraus::Error::ConsistencyFailure {
            label: "0".into(),
            detail: "verdicts differ".into(),
        };
        assert_eq!(CliError::from(consistency).exit_code(), EXIT_CONSISTENCY);
        assert_eq!(
            CliError::from(kraus::Error::NoOutcomes).exit_code(),
            EXIT_VALIDATION
        );
        let wrapped = FileError::Invalid(kraus::Error::NotSingular);
        assert_eq!(CliError::from(wrapped).exit_code(), EXIT_VALIDATION);
        assert_eq!(CliError::Usage(String::new()).exit_code(), EXIT_USAGE);
    }

    #[test]
    fn classify_report_names_the_kind() {
        let inst = gallery::preset("luders-x").unwrap();
        let r = classify_report(&inst, 1e-9).unwrap();
        assert_eq!(r.json["kind"], "IdealOrdinary");
        assert!(r.render(false).contains("kind: IdealOrdinary"));
    }
}
