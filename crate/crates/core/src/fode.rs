//! Caputo fractional initial-value problems and the fractional Adams
//! predictor–corrector (PECE) integrator.
//!
//! The problem `D^m y = f(t, y)`, `y(t0) = y0`, `0 < m ≤ 1`, is solved in its
//! Volterra form `y(t) = y0 + I^m f(t, y(t))` on a uniform grid
//! `t_j = t0 + j h`. Per step `n → n+1`:
//!
//! ```text
//! predictor  y^P = y0 + h^m/Γ(m+1) · Σ_{j=0}^{n} [(n+1-j)^m - (n-j)^m] f_j
//! corrector  y   = y0 + h^m/Γ(m+2) · [ f(t_{n+1}, y^P) + Σ_{j=0}^{n} a_{j,n+1} f_j ]
//!
//! a_{0,n+1} = n^{m+1} - (n-m)(n+1)^m
//! a_{j,n+1} = (n-j+2)^{m+1} + (n-j)^{m+1} - 2(n-j+1)^{m+1},   1 ≤ j ≤ n
//! ```
//!
//! Only the history of right-hand-side evaluations is kept, so each step costs
//! one new evaluation plus two weighted sums over the history: `O(N^2)` for a
//! whole run. [`MemoryPolicy::Truncated`] restricts the sums to a trailing
//! window (the `j = 0` term is always kept).

use std::io::Write;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::specfun::gamma;

/// States whose magnitude exceeds this are treated as a blow-up.
pub const DIVERGENCE_LIMIT: f64 = 1e8;

/// Step size used throughout the food-chain simulations.
pub const DEFAULT_STEP: f64 = 0.05;

/// A Caputo IVP `D^m y = f(t, y)` on `[t0, t_final]` with uniform step.
///
/// `rhs(t, y, dy)` writes the derivative of `y` into `dy`.
#[derive(Clone)]
pub struct FodeProblem<F> {
    pub order: f64,
    pub initial_state: Vec<f64>,
    pub t0: f64,
    pub t_final: f64,
    pub step: f64,
    pub rhs: F,
}

impl<F> FodeProblem<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub fn new(order: f64, initial_state: Vec<f64>, t0: f64, t_final: f64, step: f64, rhs: F) -> Self {
        Self {
            order,
            initial_state,
            t0,
            t_final,
            step,
            rhs,
        }
    }

    pub fn dimension(&self) -> usize {
        self.initial_state.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.order > 0.0 && self.order <= 1.0) {
            return Err(Error::config(
                "order",
                format!("must lie in (0, 1], got {}", self.order),
            ));
        }
        if self.initial_state.is_empty() {
            return Err(Error::config("initial_state", "dimension must be positive"));
        }
        if let Some(bad) = self.initial_state.iter().find(|v| !v.is_finite()) {
            return Err(Error::config("initial_state", format!("non-finite component {bad}")));
        }
        if !(self.t0.is_finite() && self.t_final.is_finite() && self.t_final > self.t0) {
            return Err(Error::config(
                "t_final",
                format!("must exceed t0 = {} (got {})", self.t0, self.t_final),
            ));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::config("step", format!("must be positive, got {}", self.step)));
        }
        if self.step > self.t_final - self.t0 {
            return Err(Error::config(
                "step",
                format!("{} exceeds the interval length {}", self.step, self.t_final - self.t0),
            ));
        }
        Ok(())
    }

    /// Number of steps taken: the grid stops at the last `t0 + N h ≤ t_final`.
    pub fn n_steps(&self) -> usize {
        ((self.t_final - self.t0) / self.step * (1.0 + 1e-12)).floor() as usize
    }
}

/// How much of the evaluation history the weighted sums see.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum MemoryPolicy {
    #[default]
    Full,
    /// Keep only evaluations within `window_length` time units of the new point.
    Truncated { window_length: f64 },
}

impl MemoryPolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MemoryPolicy::Full => Ok(()),
            MemoryPolicy::Truncated { window_length } if window_length > 0.0 => Ok(()),
            MemoryPolicy::Truncated { window_length } => Err(Error::config(
                "window_length",
                format!("must be positive, got {window_length}"),
            )),
        }
    }

    /// Number of trailing grid intervals kept, or `None` for full memory.
    fn window_steps(&self, step: f64) -> Option<usize> {
        match *self {
            MemoryPolicy::Full => None,
            MemoryPolicy::Truncated { window_length } => Some((window_length / step * (1.0 + 1e-12)).floor() as usize),
        }
    }
}

/// Discrete solution on a uniform grid. Row `i` of `states` is the state at `times[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    states: Vec<f64>,
    dimension: usize,
    pub order_used: f64,
    pub steps_accepted: usize,
}

impl Trajectory {
    /// Builds a trajectory from row-major state data.
    pub fn from_rows(times: Vec<f64>, states: Vec<f64>, dimension: usize, order: f64) -> Result<Self> {
        if dimension == 0 || states.len() != times.len() * dimension {
            return Err(Error::config(
                "states",
                format!(
                    "{} values cannot form {} rows of dimension {dimension}",
                    states.len(),
                    times.len()
                ),
            ));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::config("times", "must be strictly increasing"));
        }
        let steps = times.len().saturating_sub(1);
        Ok(Self {
            times,
            states,
            dimension,
            order_used: order,
            steps_accepted: steps,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn last_state(&self) -> &[f64] {
        self.state(self.len() - 1)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.states.chunks_exact(self.dimension)
    }

    pub fn component(&self, c: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |r| r[c])
    }

    /// Row-major copy of all states.
    pub fn states_flat(&self) -> &[f64] {
        &self.states
    }

    /// CSV with header `t,x1,...,xn`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "t")?;
        for c in 1..=self.dimension {
            write!(out, ",x{c}")?;
        }
        writeln!(out)?;
        for (t, row) in self.times.iter().zip(self.rows()) {
            write!(out, "{t:.12e}")?;
            for v in row {
                write!(out, ",{v:.12e}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// `(k+1)^p - k^p` without cancellation for large `k`.
fn forward_diff_pow(k: f64, p: f64) -> f64 {
    if k == 0.0 {
        1.0
    } else {
        k.powf(p) * (p * (1.0 / k).ln_1p()).exp_m1()
    }
}

/// Predictor weight `b_{j,n+1}` including the `h^m / m` factor.
pub fn predictor_weight(order: f64, step: f64, j: usize, n: usize) -> f64 {
    assert!(j <= n);
    step.powf(order) / order * forward_diff_pow((n - j) as f64, order)
}

/// Corrector weight `a_{j,n+1}` (without the `h^m/Γ(m+2)` factor).
pub fn corrector_weight(order: f64, j: usize, n: usize) -> f64 {
    assert!(j <= n);
    if j == 0 {
        corrector_start_weight(order, n)
    } else {
        let k = (n - j) as f64;
        let p = order + 1.0;
        forward_diff_pow(k + 1.0, p) - forward_diff_pow(k, p)
    }
}

fn corrector_start_weight(order: f64, n: usize) -> f64 {
    let n = n as f64;
    n.powf(order + 1.0) - (n - order) * (n + 1.0).powf(order)
}

/// Weight tables indexed so that step `n` reads a contiguous, ascending slice
/// aligned with the history `f_jmin ..= f_n`.
struct WeightTables {
    // pred_rev[last - k] = (k+1)^m - k^m
    pred_rev: Vec<f64>,
    // corr_rev[last - k] = a_{n-k, n+1} for n - k ≥ 1
    corr_rev: Vec<f64>,
    last: usize,
}

impl WeightTables {
    fn new(order: f64, n_steps: usize) -> Self {
        let p = order + 1.0;
        let last = n_steps.max(1) - 1;
        let mut pred_rev = vec![0.0; last + 1];
        let mut corr_rev = vec![0.0; last + 1];
        for k in 0..=last {
            let kf = k as f64;
            pred_rev[last - k] = forward_diff_pow(kf, order);
            corr_rev[last - k] = forward_diff_pow(kf + 1.0, p) - forward_diff_pow(kf, p);
        }
        Self {
            pred_rev,
            corr_rev,
            last,
        }
    }

    /// Slices aligned with `history[jmin..=n]`.
    fn slices(&self, jmin: usize, n: usize) -> (&[f64], &[f64]) {
        let lo = self.last + jmin - n;
        (&self.pred_rev[lo..], &self.corr_rev[lo..])
    }
}

/// Σ f_i p_i and Σ f_i c_i in one pass, four lanes wide.
fn dual_dot(f: &[f64], p: &[f64], c: &[f64]) -> (f64, f64) {
    let len = f.len();
    let (p, c) = (&p[..len], &c[..len]);
    let mut sp = [0.0; 4];
    let mut sc = [0.0; 4];
    let chunks = len / 4;
    for i in 0..chunks {
        let b = 4 * i;
        for l in 0..4 {
            sp[l] += f[b + l] * p[b + l];
            sc[l] += f[b + l] * c[b + l];
        }
    }
    for i in 4 * chunks..len {
        sp[0] += f[i] * p[i];
        sc[0] += f[i] * c[i];
    }
    ((sp[0] + sp[1]) + (sp[2] + sp[3]), (sc[0] + sc[1]) + (sc[2] + sc[3]))
}

/// How the weighted history sums are evaluated. Every engine computes the
/// same sums; they differ in cost and in floating-point rounding only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HistorySum {
    /// Running totals at `m = 1`, blocked convolution for long full-memory
    /// runs, direct dot products otherwise.
    #[default]
    Auto,
    /// Direct dot products: `O(N^2)` per run.
    Direct,
    /// Blocked FFT convolution: `O(N log^2 N)` per run. Full memory only.
    Blocked,
}

/// Full-memory runs with at least this many steps use the blocked engine under [`HistorySum::Auto`].
pub const BLOCKED_MIN_STEPS: usize = 4096;

/// Squares up to this size are summed directly inside the blocked engine.
const DIRECT_SQUARE: usize = 32;

/// Compensated (Neumaier) running sum.
#[derive(Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Lagged convolution of the history `f_1, f_2, …` with both weight kernels.
///
/// Source `s = j - 1` feeds target `u = n` (the sum used on step `n → n+1`)
/// with lag `u - 1 - s`. The strictly lower triangle of (source, target)
/// pairs splits into squares: for each `u ≥ 1` with `L = 2^{trailing zeros of u}`,
/// sources `[u-L, u)` feed targets `[u, u+L)`. The square is added into the
/// accumulators as soon as its last source is known, which is exactly when
/// target `u` is needed; large squares go through one FFT of size `2L`.
struct BlockedConv {
    order: f64,
    n_targets: usize,
    // acc[c][u]: predictor sum in re, corrector sum in im
    acc: Vec<Vec<Complex64>>,
    // spectra[l] for L = 2^l, kernel pred + i corr over lags 0..2L-1
    spectra: Vec<Option<Vec<Complex64>>>,
    planner: FftPlanner<f64>,
    buf: Vec<Complex64>,
}

impl BlockedConv {
    fn new(order: f64, dim: usize, n_targets: usize) -> Self {
        Self {
            order,
            n_targets,
            acc: vec![vec![Complex64::new(0.0, 0.0); n_targets]; dim],
            spectra: vec![],
            planner: FftPlanner::new(),
            buf: vec![],
        }
    }

    fn kernel(&self, lag: usize) -> Complex64 {
        let k = lag as f64;
        let p = self.order + 1.0;
        Complex64::new(
            forward_diff_pow(k, self.order),
            forward_diff_pow(k + 1.0, p) - forward_diff_pow(k, p),
        )
    }

    fn spectrum(&mut self, level: usize) -> Vec<Complex64> {
        if self.spectra.len() <= level {
            self.spectra.resize(level + 1, None);
        }
        if let Some(s) = &self.spectra[level] {
            return s.clone();
        }
        let size = 2usize << level;
        let mut s: Vec<Complex64> = (0..size - 1).map(|lag| self.kernel(lag)).collect();
        s.push(Complex64::new(0.0, 0.0));
        self.planner.plan_fft_forward(size).process(&mut s);
        self.spectra[level] = Some(s.clone());
        s
    }

    /// Adds the square ending at target `u` (needs `history[c][1..=u]`).
    fn advance(&mut self, u: usize, history: &[Vec<f64>]) {
        if u == 0 {
            return;
        }
        let level = u.trailing_zeros() as usize;
        let len = 1usize << level;
        let first_src = u - len; // s index; history index s + 1
        let targets = len.min(self.n_targets - u);

        if len <= DIRECT_SQUARE {
            let kern: Vec<Complex64> = (0..2 * len - 1).map(|lag| self.kernel(lag)).collect();
            for (c, hist) in history.iter().enumerate() {
                let src = &hist[first_src + 1..=u];
                for t in 0..targets {
                    let mut sum = Complex64::new(0.0, 0.0);
                    for (a, &f) in src.iter().enumerate() {
                        sum += kern[len - 1 + t - a] * f;
                    }
                    self.acc[c][u + t] += sum;
                }
            }
            return;
        }

        let size = 2 * len;
        let spec = self.spectrum(level);
        let fwd = self.planner.plan_fft_forward(size);
        let inv = self.planner.plan_fft_inverse(size);
        let scale = 1.0 / size as f64;
        self.buf.resize(size, Complex64::new(0.0, 0.0));
        for (c, hist) in history.iter().enumerate() {
            let src = &hist[first_src + 1..=u];
            for (b, &f) in self.buf.iter_mut().zip(src) {
                *b = Complex64::new(f, 0.0);
            }
            self.buf[len..].fill(Complex64::new(0.0, 0.0));
            fwd.process(&mut self.buf);
            for (b, k) in self.buf.iter_mut().zip(&spec) {
                *b *= k;
            }
            inv.process(&mut self.buf);
            for t in 0..targets {
                self.acc[c][u + t] += self.buf[len - 1 + t] * scale;
            }
        }
    }
}

enum Engine {
    Direct {
        tables: WeightTables,
        window: Option<usize>,
    },
    Running(Vec<Neumaier>),
    Blocked(BlockedConv),
}

impl Engine {
    /// Writes the `j ≥ 1` parts of the predictor and corrector sums for step `n`.
    fn sums(&mut self, n: usize, history: &[Vec<f64>], pred: &mut [f64], corr: &mut [f64]) {
        match self {
            Engine::Direct { tables, window } => {
                let jmin = match window {
                    Some(w) => (n + 1).saturating_sub(*w).max(1),
                    None => 1,
                };
                for (c, hist) in history.iter().enumerate() {
                    (pred[c], corr[c]) = if jmin <= n {
                        let (pw, cw) = tables.slices(jmin, n);
                        dual_dot(&hist[jmin..=n], pw, cw)
                    } else {
                        (0.0, 0.0)
                    };
                }
            }
            Engine::Running(tails) => {
                for (c, t) in tails.iter().enumerate() {
                    pred[c] = t.value();
                    corr[c] = 2.0 * t.value();
                }
            }
            Engine::Blocked(conv) => {
                conv.advance(n, history);
                for c in 0..history.len() {
                    let v = conv.acc[c][n];
                    (pred[c], corr[c]) = (v.re, v.im);
                }
            }
        }
    }

    fn push(&mut self, f: &[f64]) {
        if let Engine::Running(tails) = self {
            for (t, v) in tails.iter_mut().zip(f) {
                t.add(*v);
            }
        }
    }
}

/// Integrates `problem` with the fractional Adams PECE scheme.
pub fn integrate_pece<F>(problem: &FodeProblem<F>, policy: &MemoryPolicy) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    integrate_pece_with(problem, policy, HistorySum::Auto)
}

/// [`integrate_pece`] with an explicit choice of history-sum engine.
pub fn integrate_pece_with<F>(problem: &FodeProblem<F>, policy: &MemoryPolicy, method: HistorySum) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    problem.validate()?;
    policy.validate()?;

    let dim = problem.dimension();
    let m = problem.order;
    let h = problem.step;
    let n_steps = problem.n_steps();
    // a window covering the whole run is full memory
    let window = policy.window_steps(h).filter(|&w| w < n_steps);

    let mut engine = match (method, window) {
        (HistorySum::Blocked, Some(_)) => {
            return Err(Error::config("memory", "blocked history sums need full memory"));
        }
        (HistorySum::Blocked, None) => Engine::Blocked(BlockedConv::new(m, dim, n_steps)),
        (HistorySum::Auto, None) if m == 1.0 => Engine::Running(vec![Neumaier::default(); dim]),
        (HistorySum::Auto, None) if n_steps >= BLOCKED_MIN_STEPS => Engine::Blocked(BlockedConv::new(m, dim, n_steps)),
        _ => Engine::Direct {
            tables: WeightTables::new(m, n_steps),
            window,
        },
    };

    let hm = h.powf(m);
    let pred_scale = hm / gamma(m + 1.0)?;
    let corr_scale = hm / gamma(m + 2.0)?;

    let y0 = problem.initial_state.clone();
    let t_at = |j: usize| problem.t0 + j as f64 * h;

    // history[c][j] = f_c(t_j, y_j)
    let mut history: Vec<Vec<f64>> = (0..dim).map(|_| Vec::with_capacity(n_steps + 1)).collect();
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity((n_steps + 1) * dim);

    let mut f = vec![0.0; dim];
    (problem.rhs)(problem.t0, &y0, &mut f);
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergence {
            last_valid_time: problem.t0,
        });
    }
    for (c, v) in f.iter().enumerate() {
        history[c].push(*v);
    }
    times.push(problem.t0);
    states.extend_from_slice(&y0);

    let mut y_pred = vec![0.0; dim];
    let mut f_pred = vec![0.0; dim];
    let mut y_next = vec![0.0; dim];
    let mut pred_sums = vec![0.0; dim];
    let mut corr_sums = vec![0.0; dim];

    for n in 0..n_steps {
        let t_next = t_at(n + 1);
        let b_start = forward_diff_pow(n as f64, m);
        let a_start = corrector_start_weight(m, n);
        engine.sums(n, &history, &mut pred_sums, &mut corr_sums);
        for c in 0..dim {
            let f0 = history[c][0];
            y_pred[c] = y0[c] + pred_scale * (b_start * f0 + pred_sums[c]);
            corr_sums[c] += a_start * f0;
        }

        (problem.rhs)(t_next, &y_pred, &mut f_pred);
        for c in 0..dim {
            y_next[c] = y0[c] + corr_scale * (f_pred[c] + corr_sums[c]);
        }
        if y_next.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_LIMIT) {
            return Err(Error::Divergence {
                last_valid_time: t_at(n),
            });
        }
        (problem.rhs)(t_next, &y_next, &mut f);
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence {
                last_valid_time: t_at(n),
            });
        }
        for (c, v) in f.iter().enumerate() {
            history[c].push(*v);
        }
        engine.push(&f);
        times.push(t_next);
        states.extend_from_slice(&y_next);
    }

    Ok(Trajectory {
        times,
        states,
        dimension: dim,
        order_used: m,
        steps_accepted: n_steps,
    })
}

/// Where the error against the reference solution is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorNorm {
    /// Max over components at `t_final`.
    #[default]
    Endpoint,
    /// Max over components and every grid point.
    ///
    /// For non-smooth solutions (e.g. `E_m(-t^m)`, which behaves like `t^m`
    /// near 0) the first steps carry an `O(h^{2m})` error, so this norm shows
    /// a lower order than the endpoint error when `m < 1`.
    Grid,
}

/// Errors per step size and the fitted order.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConvergenceStudy {
    pub norm: ErrorNorm,
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
}

/// Least-squares slope of `ln(error)` against `ln(h)` over `steps`, with the
/// error measured at the endpoint (see [`ErrorNorm`]).
///
/// `steps` must have at least three entries, each half the previous one.
/// `exact(t)` returns the reference solution at `t`.
pub fn estimate_convergence_order<F, E>(problem: &FodeProblem<F>, exact: E, steps: &[f64]) -> Result<f64>
where
    F: Fn(f64, &[f64], &mut [f64]),
    E: Fn(f64) -> Vec<f64>,
{
    convergence_study(problem, exact, steps, ErrorNorm::Endpoint).map(|s| s.slope)
}

/// [`estimate_convergence_order`] with a chosen norm, keeping the per-step errors.
pub fn convergence_study<F, E>(
    problem: &FodeProblem<F>,
    exact: E,
    steps: &[f64],
    norm: ErrorNorm,
) -> Result<ConvergenceStudy>
where
    F: Fn(f64, &[f64], &mut [f64]),
    E: Fn(f64) -> Vec<f64>,
{
    if steps.len() < 3 {
        return Err(Error::config("step_sequence", "needs at least three step sizes"));
    }
    for w in steps.windows(2) {
        if !(w[0] > 0.0) || ((w[1] * 2.0 - w[0]) / w[0]).abs() > 1e-9 {
            return Err(Error::config(
                "step_sequence",
                format!("each step must halve the previous ({} -> {})", w[0], w[1]),
            ));
        }
    }

    let mut log_h = Vec::with_capacity(steps.len());
    let mut log_err = Vec::with_capacity(steps.len());
    let mut errors = Vec::with_capacity(steps.len());
    for &h in steps {
        let sub = FodeProblem {
            order: problem.order,
            initial_state: problem.initial_state.clone(),
            t0: problem.t0,
            t_final: problem.t_final,
            step: h,
            rhs: &problem.rhs,
        };
        let traj = integrate_pece(&sub, &MemoryPolicy::Full)?;
        let first = match norm {
            ErrorNorm::Endpoint => traj.len() - 1,
            ErrorNorm::Grid => 0,
        };
        let err = (first..traj.len())
            .flat_map(|i| {
                let e = exact(traj.times[i]);
                traj.state(i)
                    .iter()
                    .zip(e)
                    .map(|(a, b)| (a - b).abs())
                    .collect::<Vec<_>>()
            })
            .fold(0.0_f64, f64::max);
        if !(err > 0.0) || !err.is_finite() {
            return Err(Error::DegenerateFit(format!("sup-norm error {err} at h = {h}")));
        }
        log_h.push(h.ln());
        log_err.push(err.ln());
        errors.push(err);
    }

    let n = log_h.len() as f64;
    let mx = log_h.iter().sum::<f64>() / n;
    let my = log_err.iter().sum::<f64>() / n;
    let sxy: f64 = log_h.iter().zip(&log_err).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = log_h.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(ConvergenceStudy {
        norm,
        steps: steps.to_vec(),
        errors,
        slope: sxy / sxx,
    })
}
