//! Command-line front end: sweeps, mesh compilation, count tables, and
//! template verification, with CSV/JSON/SVG output.
//!
//! Exit codes: 0 success, 2 usage, 3 validation, 4 I/O or parse failure.

mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use qsp_energy::circuits::{
    build_modified_plesch, QubitCostOptions, SlotRule, SqoBilling, TrimModel,
};
use qsp_energy::energy::{EomModel, PhaseConvention, PhaseWrap};
use qsp_energy::io::{MatrixJson, StateJson};
use qsp_energy::mesh::{clements_decompose, mesh_reconstruct};
use qsp_energy::montecarlo::{
    count_sweep, counts_to_csv, run_sweep, sweep_csv_rows, sweep_to_json_rows, CountRow,
    Encoding, SweepRowJson, SweepSpec, SWEEP_CSV_HEADER,
};
use qsp_energy::numerics::frobenius_distance;
use qsp_energy::verify::{haar_state, optimize_template, FitResult, StateVector};
use qsp_energy::RngStream;

#[derive(Parser)]
#[command(
    name = "qsp-energy",
    version,
    about = "Programming-energy estimates for photonic mesh state preparation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    globals: GlobalArgs,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Base RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo samples per point.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    samples: Option<u64>,
    /// Half-wave voltage in volts.
    #[arg(long, global = true)]
    vpi: Option<f64>,
    /// Modulator capacitance in farads.
    #[arg(long, global = true)]
    capacitance: Option<f64>,
    /// Internal phase realizing the bar state.
    #[arg(long = "phase-convention", global = true, value_enum)]
    phase_convention: Option<PhaseConventionArg>,
    /// External phase wrapping.
    #[arg(long, global = true, value_enum)]
    wrap: Option<WrapArg>,
    /// Skip output-column phases when billing meshes.
    #[arg(long = "ignore-output-phases", global = true)]
    ignore_output_phases: bool,
    /// Bill identity padding for idle modes of a full-width device per CNOT.
    #[arg(long = "pad-idle-modes", global = true)]
    pad_idle_modes: bool,
    /// SQO energy accounting.
    #[arg(long = "sqo-billing", global = true, value_enum)]
    sqo_billing: Option<SqoBillingArg>,
    /// SQO slot counting rule.
    #[arg(long = "slot-rule", global = true, value_enum)]
    slot_rule: Option<SlotRuleArg>,
    /// Scale factor on SQO counts.
    #[arg(long = "sqo-multiplier", global = true)]
    sqo_multiplier: Option<f64>,
    /// Trim shifters per dedicated CNOT block.
    #[arg(long = "n-trim", global = true)]
    n_trim: Option<usize>,
    /// Std dev of fabrication trim phases, radians.
    #[arg(long = "sigma-fab", global = true)]
    sigma_fab: Option<f64>,
    /// Worker threads for Monte Carlo (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// JSON config file; flags override config, config overrides defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate mean preparation energy over Haar-random states.
    Sweep {
        /// Encodings to sweep, comma-separated:
        /// qudit, qubit-programmable, qubit-dedicated.
        #[arg(long, value_delimiter = ',', required = true)]
        encoding: Vec<EncodingArg>,
        /// Qudit dimensions: a list "2,4,8" or inclusive range "2..32".
        #[arg(long)]
        dims: Option<String>,
        /// Qubit counts: a list or inclusive range.
        #[arg(long)]
        qubits: Option<String>,
    },
    /// Compile a unitary (JSON file) into a mesh program plus energy report.
    Decompose {
        /// Input unitary, {"dim": d, "re": [[..]], "im": [[..]]}.
        #[arg(long)]
        input: PathBuf,
        /// Reconstruct the program and report the roundtrip error.
        #[arg(long)]
        check: bool,
        /// Write the energy report here instead of stdout.
        #[arg(long = "energy-out")]
        energy_out: Option<PathBuf>,
    },
    /// Tabulate the CNOT-count formulas.
    Counts {
        /// Qubit counts: a list or inclusive range, all >= 2.
        #[arg(long)]
        n: String,
    },
    /// Fit template SQO angles against Haar-random targets.
    Verify {
        /// Template size in qubits.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Number of Haar-random targets.
        #[arg(long, default_value_t = 50)]
        targets: usize,
        /// Total ascent iterations allowed per target.
        #[arg(long, default_value_t = 4000)]
        budget: usize,
        /// Optimize against a single target state from this JSON file
        /// instead of Haar draws.
        #[arg(long = "target-file")]
        target_file: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EncodingArg {
    Qudit,
    QubitProgrammable,
    QubitDedicated,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Qudit => Encoding::Qudit,
            EncodingArg::QubitProgrammable => Encoding::QubitProgrammable,
            EncodingArg::QubitDedicated => Encoding::QubitDedicated,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PhaseConventionArg {
    BarAtPi,
    BarAtZero,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WrapArg {
    Sym,
    Pos,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SqoBillingArg {
    Internal,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SlotRuleArg {
    Default,
    VatanWilliamsTwoQubit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Svg,
}

/// Optional values loaded from `--config`.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    samples: Option<usize>,
    v_pi: Option<f64>,
    capacitance: Option<f64>,
    phase_convention: Option<PhaseConvention>,
    wrap: Option<PhaseWrap>,
    ignore_output_phases: Option<bool>,
    pad_idle_modes: Option<bool>,
    sqo_billing: Option<SqoBilling>,
    slot_rule: Option<SlotRule>,
    sqo_multiplier: Option<f64>,
    n_trim: Option<usize>,
    sigma_fab: Option<f64>,
    threads: Option<usize>,
}

/// Fully resolved run options: flags > config > defaults.
struct Settings {
    seed: u64,
    samples: usize,
    model: EomModel,
    qubit_options: QubitCostOptions,
    ignore_output_phases: bool,
    threads: Option<usize>,
}

enum CliError {
    Validation(String),
    Io(String),
}

impl CliError {
    fn io(context: &str, e: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{context}: {e}"))
    }
}

impl From<qsp_energy::Error> for CliError {
    fn from(e: qsp_energy::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn resolve_settings(globals: &GlobalArgs) -> Result<Settings, CliError> {
    let config: ConfigFile = match &globals.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::io(&format!("reading {}", path.display()), e))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::io(&format!("parsing {}", path.display()), e))?
        }
        None => ConfigFile::default(),
    };

    let defaults = EomModel::default();
    let v_pi = globals.vpi.or(config.v_pi).unwrap_or(defaults.v_pi);
    let capacitance = globals
        .capacitance
        .or(config.capacitance)
        .unwrap_or(defaults.capacitance);
    let mut model = EomModel::new(v_pi, capacitance)?;
    model.internal_phase_convention = globals
        .phase_convention
        .map(|c| match c {
            PhaseConventionArg::BarAtPi => PhaseConvention::BarAtPi,
            PhaseConventionArg::BarAtZero => PhaseConvention::BarAtZero,
        })
        .or(config.phase_convention)
        .unwrap_or_default();
    model.external_wrap = globals
        .wrap
        .map(|w| match w {
            WrapArg::Sym => PhaseWrap::Symmetric,
            WrapArg::Pos => PhaseWrap::Positive,
        })
        .or(config.wrap)
        .unwrap_or_default();

    let mut qubit_options = QubitCostOptions {
        sqo_billing: globals
            .sqo_billing
            .map(|b| match b {
                SqoBillingArg::Internal => SqoBilling::Internal,
                SqoBillingArg::Full => SqoBilling::FullCrossing,
            })
            .or(config.sqo_billing)
            .unwrap_or_default(),
        slot_rule: globals
            .slot_rule
            .map(|r| match r {
                SlotRuleArg::Default => SlotRule::Default,
                SlotRuleArg::VatanWilliamsTwoQubit => SlotRule::VatanWilliamsTwoQubit,
            })
            .or(config.slot_rule)
            .unwrap_or_default(),
        sqo_multiplier: globals
            .sqo_multiplier
            .or(config.sqo_multiplier)
            .unwrap_or(1.0),
        pad_idle_modes: globals.pad_idle_modes || config.pad_idle_modes.unwrap_or(false),
        trim: TrimModel::default(),
    };
    if let Some(n_trim) = globals.n_trim.or(config.n_trim) {
        qubit_options.trim.n_trim = n_trim;
    }
    if let Some(sigma) = globals.sigma_fab.or(config.sigma_fab) {
        qubit_options.trim.sigma_fab = sigma;
    }
    if qubit_options.sqo_multiplier <= 0.0 {
        return Err(CliError::Validation(
            "--sqo-multiplier must be positive".into(),
        ));
    }

    Ok(Settings {
        seed: globals.seed.or(config.seed).unwrap_or(0),
        samples: globals
            .samples
            .map(|s| s as usize)
            .or(config.samples)
            .unwrap_or(10_000),
        model,
        qubit_options,
        ignore_output_phases: globals.ignore_output_phases
            || config.ignore_output_phases.unwrap_or(false),
        threads: globals.threads.or(config.threads),
    })
}

/// Parse "2,4,8", "2..32" (inclusive), or a single value.
fn parse_axis(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = |t: &str| CliError::Validation(format!("cannot parse axis value '{t}'"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad(text))?;
        let hi: usize = hi.trim().parse().map_err(|_| bad(text))?;
        if hi < lo {
            return Err(CliError::Validation(format!("empty range {lo}..{hi}")));
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|part| part.trim().parse::<usize>().map_err(|_| bad(part)))
        .collect()
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::io(&format!("writing {}", path.display()), e)),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read_json_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(&format!("reading {}", path.display()), e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::io(&format!("parsing {}", path.display()), e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match resolve_settings(&cli.globals) {
        Ok(s) => s,
        Err(e) => return report(e),
    };
    if let Some(threads) = settings.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            return report(CliError::Validation(format!("thread pool: {e}")));
        }
    }
    match run(cli, settings) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    match e {
        CliError::Validation(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        CliError::Io(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}

fn run(cli: Cli, settings: Settings) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep {
            ref encoding,
            ref dims,
            ref qubits,
        } => cmd_sweep(&cli.globals, &settings, encoding, dims, qubits),
        Command::Decompose {
            ref input,
            check,
            ref energy_out,
        } => cmd_decompose(&cli.globals, &settings, input, check, energy_out),
        Command::Counts { ref n } => cmd_counts(&cli.globals, n),
        Command::Verify {
            n,
            targets,
            budget,
            ref target_file,
        } => cmd_verify(&cli.globals, &settings, n, targets, budget, target_file),
    }
}

fn cmd_sweep(
    globals: &GlobalArgs,
    settings: &Settings,
    encodings: &[EncodingArg],
    dims: &Option<String>,
    qubits: &Option<String>,
) -> Result<(), CliError> {
    let dims_axis = dims.as_deref().map(parse_axis).transpose()?;
    let qubits_axis = qubits.as_deref().map(parse_axis).transpose()?;

    let mut results: Vec<(SweepSpec, Vec<qsp_energy::montecarlo::SweepRow>)> = Vec::new();
    for &encoding in encodings {
        let axis = match encoding {
            EncodingArg::Qudit => dims_axis.clone().ok_or_else(|| {
                CliError::Validation("--dims is required for the qudit encoding".into())
            })?,
            EncodingArg::QubitProgrammable | EncodingArg::QubitDedicated => {
                qubits_axis.clone().ok_or_else(|| {
                    CliError::Validation("--qubits is required for qubit encodings".into())
                })?
            }
        };
        let spec = SweepSpec {
            encoding: encoding.into(),
            dims_or_qubits: axis,
            samples: settings.samples,
            seed: settings.seed,
            model: settings.model,
            qubit_options: settings.qubit_options,
            ignore_output_phases: settings.ignore_output_phases,
        };
        let rows = run_sweep(&spec)?;
        results.push((spec, rows));
    }

    match globals.format.unwrap_or(FormatArg::Csv) {
        FormatArg::Csv => {
            let mut out = String::from(SWEEP_CSV_HEADER);
            out.push('\n');
            for (spec, rows) in &results {
                out.push_str(&sweep_csv_rows(spec, rows));
            }
            write_output(&globals.out, &out)
        }
        FormatArg::Json => {
            let rows: Vec<SweepRowJson> = results
                .iter()
                .flat_map(|(spec, rows)| sweep_to_json_rows(spec, rows))
                .collect();
            let json = serde_json::to_string_pretty(&rows)
                .map_err(|e| CliError::io("serializing rows", e))?;
            write_output(&globals.out, &format!("{json}\n"))
        }
        FormatArg::Svg => {
            let mixed = results.iter().any(|(s, _)| s.encoding == Encoding::Qudit)
                && results.iter().any(|(s, _)| s.encoding != Encoding::Qudit);
            let series: Vec<svg::Series> = results
                .iter()
                .enumerate()
                .map(|(i, (spec, rows))| {
                    let (enc, mode) = spec.encoding.labels();
                    let name = if mode.is_empty() {
                        enc.to_string()
                    } else {
                        format!("{enc} ({mode})")
                    };
                    let points = rows
                        .iter()
                        .map(|r| {
                            let x = if mixed && spec.encoding != Encoding::Qudit {
                                // Plot qubit counts at their Hilbert dimension
                                // so the series share an axis.
                                2f64.powi(r.x as i32)
                            } else {
                                r.x as f64
                            };
                            (x, r.mean_energy_j)
                        })
                        .collect();
                    svg::Series {
                        name,
                        color: svg::PALETTE[i % svg::PALETTE.len()],
                        points,
                    }
                })
                .collect();
            let x_label = if mixed || encodings.contains(&EncodingArg::Qudit) {
                "dimension"
            } else {
                "qubits"
            };
            let chart = svg::line_chart(
                "Mean programming energy per prepared state",
                x_label,
                "mean energy (J)",
                &series,
                true,
            );
            write_output(&globals.out, &chart)
        }
    }
}

fn cmd_decompose(
    globals: &GlobalArgs,
    settings: &Settings,
    input: &Path,
    check: bool,
    energy_out: &Option<PathBuf>,
) -> Result<(), CliError> {
    let matrix = read_json_file::<MatrixJson>(input)?.into_matrix()?;
    let program = clements_decompose(&matrix)?;

    let report = settings
        .model
        .mesh_energy_with(&program, !settings.ignore_output_phases);

    if check {
        let back = mesh_reconstruct(&program)?;
        let err = frobenius_distance(&matrix, &back)?;
        eprintln!("roundtrip_frobenius_error={err:e}");
    }

    let program_json = serde_json::to_string_pretty(&program)
        .map_err(|e| CliError::io("serializing program", e))?;
    write_output(&globals.out, &format!("{program_json}\n"))?;

    let report_text = match globals.format.unwrap_or(FormatArg::Json) {
        FormatArg::Csv => report.to_csv(),
        _ => {
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::io("serializing report", e))?;
            format!("{json}\n")
        }
    };
    match energy_out {
        Some(path) => write_output(&Some(path.clone()), &report_text),
        // Keep stdout a single document: the report only goes there when
        // the program went to a file.
        None if globals.out.is_some() => {
            print!("{report_text}");
            Ok(())
        }
        None => Ok(()),
    }
}

fn cmd_counts(globals: &GlobalArgs, n: &str) -> Result<(), CliError> {
    let ns = parse_axis(n)?;
    let rows = count_sweep(&ns)?;
    match globals.format.unwrap_or(FormatArg::Csv) {
        FormatArg::Csv => write_output(&globals.out, &counts_to_csv(&rows)),
        FormatArg::Json => {
            let json = serde_json::to_string_pretty(&rows)
                .map_err(|e| CliError::io("serializing counts", e))?;
            write_output(&globals.out, &format!("{json}\n"))
        }
        FormatArg::Svg => {
            let series = |name: &str, color, f: fn(&CountRow) -> f64| svg::Series {
                name: name.to_string(),
                color,
                points: rows.iter().map(|r| (r.n as f64, f(r))).collect(),
            };
            let chart = svg::line_chart(
                "CNOT-count upper bounds for state preparation",
                "qubits",
                "CNOT count",
                &[
                    series("Bergholm", svg::PALETTE[3], |r| r.bergholm),
                    series("Plesch", svg::PALETTE[4], |r| r.plesch),
                    series("modified Plesch", svg::PALETTE[1], |r| r.modified),
                ],
                true,
            );
            write_output(&globals.out, &chart)
        }
    }
}

#[derive(serde::Serialize)]
struct VerifyOutput {
    n: usize,
    targets: usize,
    seed: u64,
    budget: usize,
    min_fidelity: f64,
    all_converged: bool,
    results: Vec<FitResult>,
}

fn cmd_verify(
    globals: &GlobalArgs,
    settings: &Settings,
    n: usize,
    targets: usize,
    budget: usize,
    target_file: &Option<PathBuf>,
) -> Result<(), CliError> {
    let circuit = build_modified_plesch(n)?;
    let target_states: Vec<StateVector> = match target_file {
        Some(path) => vec![read_json_file::<StateJson>(path)?.into_state()?],
        None => {
            if targets == 0 {
                return Err(CliError::Validation("--targets must be at least 1".into()));
            }
            (0..targets)
                .map(|t| haar_state(n, RngStream::new(settings.seed, t as u64)))
                .collect::<Result<_, _>>()?
        }
    };

    let mut results = Vec::with_capacity(target_states.len());
    for (t, target) in target_states.iter().enumerate() {
        let stream = RngStream::new(settings.seed, (1 << 32) + t as u64);
        results.push(optimize_template(&circuit, target, budget, stream)?);
    }

    let output = VerifyOutput {
        n,
        targets: target_states.len(),
        seed: settings.seed,
        budget,
        min_fidelity: results.iter().map(|r| r.fidelity).fold(1.0, f64::min),
        all_converged: results.iter().all(|r| r.converged),
        results,
    };
    let json = serde_json::to_string_pretty(&output)
        .map_err(|e| CliError::io("serializing results", e))?;
    write_output(&globals.out, &format!("{json}\n"))
}
