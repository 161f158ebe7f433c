//! Trajectory experiments on the dimensional food chain: single runs with
//! invariant monitoring, attractor characterization from post-transient
//! peaks, and parameter/order sweeps.
//!
//! Attractors are labeled structurally: the local maxima of one coordinate
//! after the transient are clustered, and the cluster count decides between
//! `fixed-point`, `periodic(k)` (k ≤ 8) and `aperiodic`.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fode::{integrate_pece, FodeProblem, MemoryPolicy, Trajectory, DEFAULT_STEP};
use crate::model::{rhs_dimensional, state_to_nondim, DimParams, State};
use crate::stability::boundedness_check;

pub const DEFAULT_TRANSIENT_FRACTION: f64 = 0.7;
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-3;
pub const DEFAULT_T_FINAL: f64 = 2000.0;
pub const DEFAULT_INITIAL_STATE: State = State { x: 1.2, y: 1.2, z: 1.2 };

/// Below this post-transient variance an orbit counts as settled.
pub const FIXED_POINT_VARIANCE: f64 = 1e-8;
/// Largest cluster count still labeled periodic.
pub const MAX_PERIODIC_CLUSTERS: usize = 8;
/// Minimum post-transient samples for peak extraction.
pub const MIN_WINDOW_SAMPLES: usize = 100;
/// Components below this count as negative.
pub const NEGATIVITY_TOL: f64 = -1e-9;
/// Relative slack on the absorbing-region bounds.
pub const OMEGA_SLACK: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub params: DimParams,
    pub order: f64,
    pub initial_state: State,
    pub t_final: f64,
    pub step: f64,
    pub transient_fraction: f64,
    pub memory: MemoryPolicy,
}

impl SimulationSpec {
    /// Defaults: start at (1.2, 1.2, 1.2), `t_final = 2000`, `h = 0.05`, full memory.
    pub fn new(params: DimParams, order: f64) -> Self {
        Self {
            params,
            order,
            initial_state: DEFAULT_INITIAL_STATE,
            t_final: DEFAULT_T_FINAL,
            step: DEFAULT_STEP,
            transient_fraction: DEFAULT_TRANSIENT_FRACTION,
            memory: MemoryPolicy::Full,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(0.0..1.0).contains(&self.transient_fraction) {
            return Err(Error::config(
                "transient_fraction",
                format!("must lie in [0, 1), got {}", self.transient_fraction),
            ));
        }
        self.memory.validate()?;
        self.problem().validate()
    }

    fn problem(&self) -> FodeProblem<impl Fn(f64, &[f64], &mut [f64]) + '_> {
        let p = &self.params;
        FodeProblem::new(
            self.order,
            self.initial_state.to_array().to_vec(),
            0.0,
            self.t_final,
            self.step,
            move |_t: f64, y: &[f64], dy: &mut [f64]| {
                let f = rhs_dimensional(p, State::from_slice(y));
                dy.copy_from_slice(&f.to_array());
            },
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub time: f64,
    pub state: State,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", content = "violations", rename_all = "kebab-case")]
pub enum OmegaCheck {
    /// The boundedness hypothesis fails, so the region is undefined.
    NotApplicable,
    Checked(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonitorReport {
    pub negativity: Vec<Violation>,
    pub omega: OmegaCheck,
}

impl MonitorReport {
    pub fn is_clean(&self) -> bool {
        self.negativity.is_empty() && !matches!(&self.omega, OmegaCheck::Checked(v) if !v.is_empty())
    }
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub trajectory: Trajectory,
    pub monitor: MonitorReport,
}

/// Integrates the dimensional system and attaches the invariant monitor.
pub fn simulate(spec: &SimulationSpec) -> Result<SimulationRun> {
    spec.validate()?;
    let trajectory = integrate_pece(&spec.problem(), &spec.memory)?;
    let monitor = monitor_invariants(&trajectory, &spec.params, spec.transient_fraction);
    Ok(SimulationRun { trajectory, monitor })
}

fn window_start(len: usize, transient_fraction: f64) -> usize {
    ((len as f64) * transient_fraction).floor() as usize
}

/// Non-negativity over the whole run; absorbing-region membership over the
/// post-transient part, only when the boundedness condition holds.
pub fn monitor_invariants(traj: &Trajectory, p: &DimParams, transient_fraction: f64) -> MonitorReport {
    let violation = |i: usize| Violation {
        index: i,
        time: traj.times[i],
        state: State::from_slice(traj.state(i)),
    };
    let negativity = (0..traj.len())
        .filter(|&i| traj.state(i).iter().any(|&v| v < NEGATIVITY_TOL))
        .map(violation)
        .collect();

    let bounds = boundedness_check(p);
    let omega = if bounds.satisfied {
        let start = window_start(traj.len(), transient_fraction);
        OmegaCheck::Checked(
            (start..traj.len())
                .filter(|&i| {
                    let s = state_to_nondim(p, State::from_slice(traj.state(i)));
                    bounds.contains(s, OMEGA_SLACK) == Some(false)
                })
                .map(violation)
                .collect(),
        )
    } else {
        OmegaCheck::NotApplicable
    };
    MonitorReport { negativity, omega }
}

fn post_transient(traj: &Trajectory, coordinate: usize, transient_fraction: f64) -> Result<Vec<f64>> {
    if coordinate >= traj.dimension() {
        return Err(Error::config(
            "coordinate",
            format!("{coordinate} out of range for dimension {}", traj.dimension()),
        ));
    }
    if !(0.0..1.0).contains(&transient_fraction) {
        return Err(Error::config(
            "transient_fraction",
            format!("must lie in [0, 1), got {transient_fraction}"),
        ));
    }
    let start = window_start(traj.len(), transient_fraction);
    if traj.len() - start < MIN_WINDOW_SAMPLES {
        return Err(Error::config(
            "t_final",
            format!(
                "post-transient window has {} samples, need at least {MIN_WINDOW_SAMPLES}",
                traj.len() - start
            ),
        ));
    }
    Ok(traj.component(coordinate).skip(start).collect())
}

/// Strict three-point maxima of `signal`.
pub fn local_maxima(signal: &[f64]) -> Vec<f64> {
    signal
        .windows(3)
        .filter(|w| w[1] > w[0] && w[1] > w[2])
        .map(|w| w[1])
        .collect()
}

/// Single-linkage clustering of scalar values: sorted values split wherever
/// the gap exceeds `tol`. Returns cluster means, ascending.
pub fn cluster_values(values: &[f64], tol: f64) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i + 1;
        while j < v.len() && v[j] - v[j - 1] <= tol {
            j += 1;
        }
        out.push(v[i..j].iter().sum::<f64>() / (j - i) as f64);
        i = j;
    }
    out
}

/// Clustered post-transient peak values of one coordinate.
pub fn attractor_peaks(
    traj: &Trajectory,
    coordinate: usize,
    transient_fraction: f64,
    cluster_tol: f64,
) -> Result<Vec<f64>> {
    if !(cluster_tol > 0.0) {
        return Err(Error::config(
            "cluster_tol",
            format!("must be positive, got {cluster_tol}"),
        ));
    }
    let window = post_transient(traj, coordinate, transient_fraction)?;
    Ok(cluster_values(&local_maxima(&window), cluster_tol))
}

/// Population variance of one coordinate over the post-transient window.
pub fn final_window_variance(traj: &Trajectory, coordinate: usize, transient_fraction: f64) -> Result<f64> {
    let w = post_transient(traj, coordinate, transient_fraction)?;
    let n = w.len() as f64;
    let mean = w.iter().sum::<f64>() / n;
    Ok(w.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttractorLabel {
    FixedPoint,
    Periodic(usize),
    Aperiodic,
}

impl fmt::Display for AttractorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttractorLabel::FixedPoint => f.write_str("fixed-point"),
            AttractorLabel::Periodic(k) => write!(f, "periodic({k})"),
            AttractorLabel::Aperiodic => f.write_str("aperiodic"),
        }
    }
}

pub fn classify_attractor(peaks: &[f64], final_window_variance: f64) -> AttractorLabel {
    if peaks.is_empty() || final_window_variance < FIXED_POINT_VARIANCE {
        AttractorLabel::FixedPoint
    } else if peaks.len() <= MAX_PERIODIC_CLUSTERS {
        AttractorLabel::Periodic(peaks.len())
    } else {
        AttractorLabel::Aperiodic
    }
}

/// Shared settings for every point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub order: f64,
    pub initial_state: State,
    pub t_final: f64,
    pub step: f64,
    pub transient_fraction: f64,
    pub cluster_tol: f64,
    /// Observed coordinate (0 = X).
    pub coordinate: usize,
    pub memory: MemoryPolicy,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            order: 1.0,
            initial_state: DEFAULT_INITIAL_STATE,
            t_final: DEFAULT_T_FINAL,
            step: DEFAULT_STEP,
            transient_fraction: DEFAULT_TRANSIENT_FRACTION,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            coordinate: 0,
            memory: MemoryPolicy::Full,
        }
    }
}

impl SweepSettings {
    fn spec(&self, params: DimParams, order: f64, memory: MemoryPolicy) -> SimulationSpec {
        SimulationSpec {
            params,
            order,
            initial_state: self.initial_state,
            t_final: self.t_final,
            step: self.step,
            transient_fraction: self.transient_fraction,
            memory,
        }
    }
}

/// One sweep point. `error` is set (and the label absent) when the run failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractorRecord {
    pub value: f64,
    pub label: Option<AttractorLabel>,
    pub peaks: Vec<f64>,
    pub variance: Option<f64>,
    pub final_state: Option<State>,
    pub error: Option<String>,
}

/// Simulates and characterizes one configuration.
pub fn characterize(spec: &SimulationSpec, coordinate: usize, cluster_tol: f64) -> Result<AttractorRecord> {
    let run = simulate(spec)?;
    let traj = &run.trajectory;
    let peaks = attractor_peaks(traj, coordinate, spec.transient_fraction, cluster_tol)?;
    let variance = final_window_variance(traj, coordinate, spec.transient_fraction)?;
    Ok(AttractorRecord {
        value: f64::NAN,
        label: Some(classify_attractor(&peaks, variance)),
        peaks,
        variance: Some(variance),
        final_state: Some(State::from_slice(traj.last_state())),
        error: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub swept_name: String,
    pub values: Vec<f64>,
    pub records: Vec<AttractorRecord>,
    /// Set when truncated memory was requested but abandoned after the spot check.
    pub notes: Vec<String>,
}

impl SweepResult {
    pub fn count(&self, pred: impl Fn(AttractorLabel) -> bool) -> usize {
        self.records.iter().filter_map(|r| r.label).filter(|&l| pred(l)).count()
    }

    /// `swept_value,attractor_label,n_clusters,peak_1..peak_k`, ragged rows padded.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let width = self.records.iter().map(|r| r.peaks.len()).max().unwrap_or(0);
        write!(out, "swept_value,attractor_label,n_clusters")?;
        for k in 1..=width {
            write!(out, ",peak_{k}")?;
        }
        writeln!(out)?;
        for r in &self.records {
            let label = match (r.label, &r.error) {
                (Some(l), _) => l.to_string(),
                (None, Some(e)) => format!("\"error: {}\"", e.replace('"', "'")),
                (None, None) => String::new(),
            };
            write!(out, "{:.12e},{},{}", r.value, label, r.peaks.len())?;
            for k in 0..width {
                match r.peaks.get(k) {
                    Some(v) => write!(out, ",{v:.12e}")?,
                    None => write!(out, ",")?,
                }
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Scatter of peak values against the swept value.
    pub fn to_svg(&self) -> String {
        let pts: Vec<(f64, f64)> = self
            .records
            .iter()
            .flat_map(|r| r.peaks.iter().map(move |&p| (r.value, p)))
            .collect();
        crate::plot::scatter_svg(&pts, "post-transient peaks", &self.swept_name, "peak value")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweptParam {
    A0,
    C3,
}

impl SweptParam {
    pub fn name(self) -> &'static str {
        match self {
            SweptParam::A0 => "a0",
            SweptParam::C3 => "c3",
        }
    }
}

impl std::str::FromStr for SweptParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a0" => Ok(SweptParam::A0),
            "c3" => Ok(SweptParam::C3),
            other => Err(Error::config(
                "sweep",
                format!("unknown parameter '{other}' (expected a0 or c3)"),
            )),
        }
    }
}

/// `n` equally spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn run_points(
    settings: &SweepSettings,
    configs: &[(f64, DimParams, f64)],
    memory: &MemoryPolicy,
) -> Vec<AttractorRecord> {
    configs
        .par_iter()
        .map(|(value, params, order)| {
            let spec = settings.spec(*params, *order, *memory);
            match characterize(&spec, settings.coordinate, settings.cluster_tol) {
                Ok(rec) => AttractorRecord { value: *value, ..rec },
                Err(e) => AttractorRecord {
                    value: *value,
                    label: None,
                    peaks: vec![],
                    variance: None,
                    final_state: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// Runs every configuration. Truncated memory is kept only if full-memory
/// runs at the first, middle and last point give the same labels.
fn run_sweep(swept_name: &str, settings: &SweepSettings, configs: Vec<(f64, DimParams, f64)>) -> Result<SweepResult> {
    if !(settings.cluster_tol > 0.0) {
        return Err(Error::config(
            "cluster_tol",
            format!("must be positive, got {}", settings.cluster_tol),
        ));
    }
    settings.memory.validate()?;
    for (_, params, order) in &configs {
        settings.spec(*params, *order, MemoryPolicy::Full).validate()?;
    }
    let values: Vec<f64> = configs.iter().map(|c| c.0).collect();
    let mut notes = vec![];
    let mut records = run_points(settings, &configs, &settings.memory);

    if settings.memory != MemoryPolicy::Full {
        let n = configs.len();
        let mut picks = vec![0, n / 2, n - 1];
        picks.dedup();
        let probe: Vec<_> = picks.iter().map(|&i| configs[i]).collect();
        let full = run_points(settings, &probe, &MemoryPolicy::Full);
        let agree = picks.iter().zip(&full).all(|(&i, f)| records[i].label == f.label);
        if !agree {
            notes.push(
                "truncated-memory labels disagreed with the full-memory spot check; rerun with full memory".into(),
            );
            records = run_points(settings, &configs, &MemoryPolicy::Full);
        }
    }
    Ok(SweepResult {
        swept_name: swept_name.to_string(),
        values,
        records,
        notes,
    })
}

/// Sweeps `a0` or `c3` over `n_points` equally spaced values in `[lo, hi]`.
pub fn bifurcation_sweep(
    base: &DimParams,
    swept: SweptParam,
    range: (f64, f64),
    n_points: usize,
    settings: &SweepSettings,
) -> Result<SweepResult> {
    let (lo, hi) = range;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::config("range", format!("need lo < hi, got {lo}:{hi}")));
    }
    if n_points < 2 {
        return Err(Error::config("points", format!("need at least 2, got {n_points}")));
    }
    let configs = linspace(lo, hi, n_points)
        .into_iter()
        .map(|v| Ok((v, base.with(swept.name(), v)?, settings.order)))
        .collect::<Result<Vec<_>>>()?;
    run_sweep(swept.name(), settings, configs)
}

/// One record per fractional order, in the given order.
pub fn order_sweep(base: &DimParams, orders: &[f64], settings: &SweepSettings) -> Result<SweepResult> {
    if orders.is_empty() {
        return Err(Error::config("orders", "need at least one order"));
    }
    let configs = orders.iter().map(|&m| (m, *base, m)).collect();
    run_sweep("m", settings, configs)
}
