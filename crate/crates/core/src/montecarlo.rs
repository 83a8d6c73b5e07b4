//! Haar-random energy sweeps and CNOT-count tables.
//!
//! Sweeps are embarrassingly parallel over trials; every trial owns a
//! substream keyed by its index and results are reduced in trial order, so
//! output bytes do not depend on the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{
    cnot_count_bergholm, cnot_count_modified, cnot_count_plesch, expected_attempts_log10,
    qsp_energy_qubits, QubitCostOptions, QubitMode,
};
use crate::energy::EomModel;
use crate::error::{Error, Result};
use crate::mesh::clements_decompose;
use crate::numerics::{haar_unitary, RngStream};

/// Stream-index block reserved per sweep point (trial index lives below,
/// resample attempts above).
const POINT_STRIDE: u64 = 1 << 32;
const ATTEMPT_STRIDE: u64 = 1 << 48;
const MAX_RESAMPLES: u64 = 16;

/// State encoding whose preparation energy a sweep estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    Qudit,
    QubitProgrammable,
    QubitDedicated,
}

impl Encoding {
    /// (encoding, mode) labels used in CSV rows.
    pub fn labels(self) -> (&'static str, &'static str) {
        match self {
            Encoding::Qudit => ("qudit", ""),
            Encoding::QubitProgrammable => ("qubit", "programmable"),
            Encoding::QubitDedicated => ("qubit", "dedicated"),
        }
    }
}

/// Full description of one sweep; equal specs produce identical output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub encoding: Encoding,
    /// Qudit dimensions or qubit counts, strictly increasing.
    pub dims_or_qubits: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub model: EomModel,
    #[serde(default)]
    pub qubit_options: QubitCostOptions,
    /// Skip the output phase column when billing qudit meshes.
    #[serde(default)]
    pub ignore_output_phases: bool,
}

impl SweepSpec {
    pub fn new(encoding: Encoding, xs: Vec<usize>, samples: usize, seed: u64) -> Self {
        Self {
            encoding,
            dims_or_qubits: xs,
            samples,
            seed,
            model: EomModel::default(),
            qubit_options: QubitCostOptions::default(),
            ignore_output_phases: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::NoSamples);
        }
        if self.dims_or_qubits.is_empty()
            || self.dims_or_qubits.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::BadSweepAxis);
        }
        for &x in &self.dims_or_qubits {
            if x < 2 {
                return Err(Error::BadSweepPoint {
                    x,
                    reason: "dimension or qubit count must be at least 2".into(),
                });
            }
        }
        Ok(())
    }
}

/// One sweep point: mean/std energy plus circuit metadata where it applies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub x: usize,
    pub mean_energy_j: f64,
    pub std_energy_j: f64,
    pub samples: usize,
    pub cnots: Option<f64>,
    pub sqos: Option<f64>,
    pub attempts_log10: Option<f64>,
    /// Haar draws that failed validation and were redrawn.
    pub resampled: u64,
}

/// Mean and sample standard deviation of qudit preparation energy:
/// each trial draws a Haar unitary, compiles it, and bills the mesh.
///
/// Returns `(mean, std, resampled)`; draws that fail validation are redrawn
/// on a fresh substream and counted, never silently dropped.
pub fn qsp_energy_qudit(
    dim: usize,
    model: &EomModel,
    stream: RngStream,
    samples: usize,
    include_output_phases: bool,
) -> Result<(f64, f64, u64)> {
    if dim < 2 {
        return Err(Error::InvalidDimension);
    }
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let trials: Vec<(f64, u64)> = (0..samples)
        .into_par_iter()
        .map(|t| {
            let mut attempt = 0u64;
            loop {
                let sub = stream.offset(t as u64 + attempt * ATTEMPT_STRIDE);
                let u = haar_unitary(dim, sub).expect("dim >= 2");
                match clements_decompose(&u) {
                    Ok(program) => {
                        let report = model.mesh_energy_with(&program, include_output_phases);
                        return (report.total_j, attempt);
                    }
                    Err(_) if attempt < MAX_RESAMPLES => attempt += 1,
                    Err(e) => panic!("qudit trial failed after {MAX_RESAMPLES} redraws: {e}"),
                }
            }
        })
        .collect();

    let n = samples as f64;
    let mean = trials.iter().map(|t| t.0).sum::<f64>() / n;
    let std = if samples < 2 {
        0.0
    } else {
        (trials.iter().map(|t| (t.0 - mean) * (t.0 - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    let resampled = trials.iter().map(|t| t.1).sum();
    Ok((mean, std, resampled))
}

/// Run a sweep: one row per x value, qubit rows carrying CNOT/SQO counts and
/// the expected-attempts metric.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.dims_or_qubits.len());
    for (point, &x) in spec.dims_or_qubits.iter().enumerate() {
        let stream = RngStream::new(spec.seed, point as u64 * POINT_STRIDE);
        let row = match spec.encoding {
            Encoding::Qudit => {
                let (mean, std, resampled) = qsp_energy_qudit(
                    x,
                    &spec.model,
                    stream,
                    spec.samples,
                    !spec.ignore_output_phases,
                )?;
                SweepRow {
                    x,
                    mean_energy_j: mean,
                    std_energy_j: std,
                    samples: spec.samples,
                    cnots: None,
                    sqos: None,
                    attempts_log10: None,
                    resampled,
                }
            }
            Encoding::QubitProgrammable | Encoding::QubitDedicated => {
                let mode = if spec.encoding == Encoding::QubitProgrammable {
                    QubitMode::Programmable
                } else {
                    QubitMode::Dedicated
                };
                let q = qsp_energy_qubits(
                    x,
                    mode,
                    &spec.model,
                    &spec.qubit_options,
                    stream,
                    spec.samples,
                )?;
                SweepRow {
                    x,
                    mean_energy_j: q.mean_j,
                    std_energy_j: q.std_j,
                    samples: spec.samples,
                    cnots: Some(q.cnots),
                    sqos: Some(q.sqos),
                    attempts_log10: Some(expected_attempts_log10(q.cnots)),
                    resampled: 0,
                }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

/// CSV header shared by every sweep output.
pub const SWEEP_CSV_HEADER: &str =
    "x,encoding,mode,mean_energy_j,std_energy_j,samples,seed,cnots,sqos,attempts_log10";

fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV rows without the header, for concatenating multiple encodings into
/// one file.
pub fn sweep_csv_rows(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let (encoding, mode) = spec.encoding.labels();
    let mut out = String::new();
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            row.x,
            encoding,
            mode,
            row.mean_energy_j,
            row.std_energy_j,
            row.samples,
            spec.seed,
            opt_f64(row.cnots),
            opt_f64(row.sqos),
            opt_f64(row.attempts_log10),
        ));
    }
    out
}

/// Render sweep rows as CSV. Numbers use the shortest round-trip decimal
/// form, so equal specs give byte-identical files.
pub fn sweep_to_csv(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    out.push_str(&sweep_csv_rows(spec, rows));
    out
}

/// JSON mirror of the CSV rows.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRowJson {
    pub x: usize,
    pub encoding: String,
    pub mode: String,
    pub mean_energy_j: f64,
    pub std_energy_j: f64,
    pub samples: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cnots: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sqos: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attempts_log10: Option<f64>,
    pub resampled: u64,
}

pub fn sweep_to_json_rows(spec: &SweepSpec, rows: &[SweepRow]) -> Vec<SweepRowJson> {
    let (encoding, mode) = spec.encoding.labels();
    rows.iter()
        .map(|row| SweepRowJson {
            x: row.x,
            encoding: encoding.to_string(),
            mode: mode.to_string(),
            mean_energy_j: row.mean_energy_j,
            std_energy_j: row.std_energy_j,
            samples: row.samples,
            seed: spec.seed,
            cnots: row.cnots,
            sqos: row.sqos,
            attempts_log10: row.attempts_log10,
            resampled: row.resampled,
        })
        .collect()
}

/// One row of the CNOT-count comparison table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    pub n: usize,
    pub bergholm: f64,
    pub plesch: f64,
    pub modified: f64,
}

/// Evaluate the three count formulas over a list of qubit counts.
pub fn count_sweep(n_list: &[usize]) -> Result<Vec<CountRow>> {
    n_list
        .iter()
        .map(|&n| {
            Ok(CountRow {
                n,
                bergholm: cnot_count_bergholm(n)?,
                plesch: cnot_count_plesch(n)?,
                modified: cnot_count_modified(n)?,
            })
        })
        .collect()
}

pub const COUNTS_CSV_HEADER: &str = "n,bergholm,plesch,modified";

pub fn counts_to_csv(rows: &[CountRow]) -> String {
    let mut out = String::from(COUNTS_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.n, row.bergholm, row.plesch, row.modified
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_qudit_spec() -> SweepSpec {
        SweepSpec::new(Encoding::Qudit, vec![2, 4, 8], 40, 7)
    }

    #[test]
    fn qudit_sweep_is_deterministic_and_increasing() {
        let spec = small_qudit_spec();
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[1].mean_energy_j > w[0].mean_energy_j));
        assert_eq!(a.len(), 3);
        assert!(a.iter().all(|r| r.cnots.is_none()));
    }

    #[test]
    fn qudit_csv_bytes_are_stable_across_thread_counts() {
        let spec = small_qudit_spec();
        let render = || {
            let rows = run_sweep(&spec).unwrap();
            sweep_to_csv(&spec, &rows)
        };
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(render);
        let quad = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(render);
        assert_eq!(single, quad);
        assert!(single.starts_with(SWEEP_CSV_HEADER));
    }

    #[test]
    fn qudit_d2_energy_is_bounded_and_reproducible() {
        let model = EomModel::default();
        let stream = RngStream::new(123, 0);
        let (mean, std, resampled) =
            qsp_energy_qudit(2, &model, stream, 2000, true).unwrap();
        let (mean2, _, _) = qsp_energy_qudit(2, &model, stream, 2000, true).unwrap();
        assert_eq!(mean, mean2);
        assert_eq!(resampled, 0);
        assert!(std >= 0.0);
        // One crossing plus two output shifters, each at most V_pi.
        let cap = 3.0 * 45e-9 * 1.4 * 1.4;
        assert!(mean > 0.0 && mean < cap, "mean {mean}");
    }

    #[test]
    fn qudit_d6_bills_every_element() {
        let model = EomModel::default();
        let u = haar_unitary(6, RngStream::new(4, 2)).unwrap();
        let program = clements_decompose(&u).unwrap();
        let report = model.mesh_energy(&program);
        assert_eq!(report.element_count, 15 + 6);
    }

    #[test]
    fn qubit_rows_carry_counts_and_attempts() {
        let spec = SweepSpec::new(Encoding::QubitProgrammable, vec![2, 3, 4], 60, 9);
        let rows = run_sweep(&spec).unwrap();
        for row in &rows {
            let cnots = row.cnots.unwrap();
            let attempts = row.attempts_log10.unwrap();
            assert!((attempts - cnots * 9f64.log10()).abs() < 1e-12);
            assert!(row.sqos.unwrap() > 0.0);
        }
        assert_eq!(rows[0].cnots, Some(3.0));
        assert_eq!(rows[2].cnots, Some(13.0));
    }

    #[test]
    fn dedicated_rows_sit_below_programmable() {
        let ns = vec![2, 3, 4, 5];
        let prog = run_sweep(&SweepSpec::new(
            Encoding::QubitProgrammable,
            ns.clone(),
            80,
            11,
        ))
        .unwrap();
        let ded = run_sweep(&SweepSpec::new(Encoding::QubitDedicated, ns, 80, 11)).unwrap();
        for (p, d) in prog.iter().zip(&ded) {
            assert!(d.mean_energy_j < p.mean_energy_j, "n = {}", p.x);
        }
    }

    #[test]
    fn spec_validation() {
        let mut spec = small_qudit_spec();
        spec.samples = 0;
        assert!(matches!(run_sweep(&spec), Err(Error::NoSamples)));
        let mut spec = small_qudit_spec();
        spec.dims_or_qubits = vec![4, 4];
        assert!(matches!(run_sweep(&spec), Err(Error::BadSweepAxis)));
        let mut spec = small_qudit_spec();
        spec.dims_or_qubits = vec![];
        assert!(run_sweep(&spec).is_err());
        let mut spec = small_qudit_spec();
        spec.dims_or_qubits = vec![1, 2];
        assert!(matches!(run_sweep(&spec), Err(Error::BadSweepPoint { .. })));
    }

    #[test]
    fn count_table_rows() {
        let rows = count_sweep(&[2, 4]).unwrap();
        assert_eq!(rows[0].n, 2);
        assert!((rows[0].plesch - 1.5).abs() < 1e-12);
        assert!((rows[0].modified - 3.5).abs() < 1e-12);
        assert!((rows[1].bergholm - 42.0).abs() < 1e-9);
        assert!((rows[1].plesch - 9.0).abs() < 1e-12);
        assert!((rows[1].modified - 13.0).abs() < 1e-12);
        let csv = counts_to_csv(&rows);
        assert!(csv.starts_with("n,bergholm,plesch,modified\n"));
        assert!(count_sweep(&[1]).is_err());
    }

    #[test]
    fn relative_spread_shrinks_with_dimension() {
        let model = EomModel::default();
        let (m4, s4, _) =
            qsp_energy_qudit(4, &model, RngStream::new(31, 0), 300, true).unwrap();
        let (m16, s16, _) =
            qsp_energy_qudit(16, &model, RngStream::new(31, 1 << 32), 300, true).unwrap();
        assert!(s16 / m16 < s4 / m4);
    }
}
