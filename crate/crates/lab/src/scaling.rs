//! The admissible-test-length formula, the two-branch lower bound on
//! excess cross entropy, exponent caps, and a memorization predictor.
//!
//! Budgets `n` (parameters) and `c` (compute) are entropy budgets in bits,
//! never parameter counts or FLOPs. With `y = sqrt(c t^(-β) / (1-β))` the
//! two branches are
//!
//! ```text
//! s_max:  min{ t y / (1-y),  (n/(1-β))^(1/β) }
//! bound:  C9 * max{ t^(β-1) ((1-y)/(1+y))^(1-β) - (c/t)(1-y)/(2y),
//!                   ((2^β - 1 + β)/2) (n/(1-β))^(1 - 1/β) }
//! ```
//!
//! The `t` branch exists only while `y < 1`; the `n` branch only for
//! finite `n`. Points where both branches are absent are out of regime and
//! reported as an error rather than clamped.

use std::fmt;

use crate::estimators::{fit_power_law, EstimatorError, FitResult};
use crate::occupancy::expected_types;
use crate::seed::derive_seed;
use crate::sources::{NarrationStream, ProcessError, ProcessSpec, SantaFeConfig};
use crate::sum;

#[derive(Debug, Clone, PartialEq)]
pub enum ScalingError {
    BadBeta { beta: f64 },
    BadParameter { name: &'static str, value: f64 },
    NoAdmissibleTestLength,
    NonIidNarration,
    FairBitsRequired { bits: f64 },
    EmptyGrid,
    GridNotIncreasing,
    Estimator(EstimatorError),
    Process(ProcessError),
}

impl fmt::Display for ScalingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalingError::BadBeta { beta } => {
                write!(f, "exponent beta must lie in (0, 1), got {beta}")
            }
            ScalingError::BadParameter { name, value } => {
                write!(f, "parameter {name} is out of range: {value}")
            }
            ScalingError::NoAdmissibleTestLength => {
                write!(f, "no admissible test length: compute branch has y >= 1 and no parameter budget given")
            }
            ScalingError::NonIidNarration => write!(f, "memorizer requires IID narration"),
            ScalingError::FairBitsRequired { bits } => {
                write!(f, "memorizer requires fair knowledge bits (1 bit), got {bits}")
            }
            ScalingError::EmptyGrid => write!(f, "grid is empty"),
            ScalingError::GridNotIncreasing => write!(f, "grid must be strictly increasing"),
            ScalingError::Estimator(e) => write!(f, "{e}"),
            ScalingError::Process(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ScalingError {}

impl From<EstimatorError> for ScalingError {
    fn from(e: EstimatorError) -> Self {
        ScalingError::Estimator(e)
    }
}

impl From<ProcessError> for ScalingError {
    fn from(e: ProcessError) -> Self {
        ScalingError::Process(e)
    }
}

/// Evaluated budgets, admissible test lengths, and bound branches at one
/// `(t, n, c)` point. `n = f64::INFINITY` and `c = 0` are admitted limits.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ScalingPoint {
    pub t: f64,
    pub n: f64,
    pub c: f64,
    pub beta: f64,
    pub c9: f64,
    pub smax_t: Option<f64>,
    pub smax_n: Option<f64>,
    /// Smallest admissible-test-length branch.
    pub s_max: Option<f64>,
    pub bound_t: Option<f64>,
    pub bound_n: Option<f64>,
    /// Larger of the branch bounds.
    pub bound: Option<f64>,
}

fn check_beta(beta: f64) -> Result<(), ScalingError> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(ScalingError::BadBeta { beta })
    }
}

/// Evaluate both branches at `(t, n, c)`.
///
/// Errors with [`ScalingError::NoAdmissibleTestLength`] when the compute
/// branch is closed (`y >= 1`) and no finite parameter budget exists.
pub fn scaling_point(t: f64, n: f64, c: f64, beta: f64, c9: f64) -> Result<ScalingPoint, ScalingError> {
    check_beta(beta)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(ScalingError::BadParameter { name: "t", value: t });
    }
    if !(n > 0.0) {
        return Err(ScalingError::BadParameter { name: "n", value: n });
    }
    if !(c >= 0.0) || !c.is_finite() {
        return Err(ScalingError::BadParameter { name: "c", value: c });
    }
    if !(c9 > 0.0) || !c9.is_finite() {
        return Err(ScalingError::BadParameter { name: "c9", value: c9 });
    }

    let (smax_t, bound_t) = if c == 0.0 {
        // y -> 0 limit: the admissible window collapses but the bound
        // tends to the clean power law.
        (Some(0.0), Some(c9 * t.powf(beta - 1.0)))
    } else {
        let y = (c * t.powf(-beta) / (1.0 - beta)).sqrt();
        if y < 1.0 {
            let smax = t * y / (1.0 - y);
            let bound = c9
                * (t.powf(beta - 1.0) * ((1.0 - y) / (1.0 + y)).powf(1.0 - beta)
                    - (c / t) * ((1.0 - y) / (2.0 * y)));
            (Some(smax), Some(bound))
        } else {
            (None, None)
        }
    };

    let (smax_n, bound_n) = if n.is_finite() {
        let base = n / (1.0 - beta);
        let smax = base.powf(1.0 / beta);
        let bound = c9 * ((2f64.powf(beta) - 1.0 + beta) / 2.0) * base.powf(1.0 - 1.0 / beta);
        (Some(smax), Some(bound))
    } else {
        (None, None)
    };

    if smax_t.is_none() && smax_n.is_none() {
        return Err(ScalingError::NoAdmissibleTestLength);
    }
    let s_max = match (smax_t, smax_n) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let bound = match (bound_t, bound_n) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    Ok(ScalingPoint { t, n, c, beta, c9, smax_t, smax_n, s_max, bound_t, bound_n, bound })
}

/// Fitted log-log slopes of the two branches next to their analytic caps
/// `gamma_T <= 1 - beta` and `gamma_N <= 1/beta - 1`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExponentReport {
    pub beta: f64,
    pub gamma_t_cap: f64,
    pub gamma_n_cap: f64,
    pub fitted_gamma_t: f64,
    pub fitted_gamma_n: f64,
    pub t_fit: FitResult,
    pub n_fit: FitResult,
    /// Fitted slopes agree with the caps to 1e-3.
    pub within_tolerance: bool,
}

/// Fit the decay exponents of the bound branches.
///
/// The `t` branch is evaluated at compute budget `c` with no parameter
/// constraint (`c = 0` gives the exact limit power law); the `n` branch is
/// an exact power law in `n` by construction.
pub fn exponent_report(
    beta: f64,
    t_grid: &[f64],
    n_grid: &[f64],
    c: f64,
) -> Result<ExponentReport, ScalingError> {
    check_beta(beta)?;
    if t_grid.len() < 3 || n_grid.len() < 3 {
        return Err(ScalingError::EmptyGrid);
    }
    let mut t_bounds = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let point = scaling_point(t, f64::INFINITY, c, beta, 1.0)?;
        t_bounds.push(point.bound_t.ok_or(ScalingError::NoAdmissibleTestLength)?);
    }
    let mut n_bounds = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let point = scaling_point(1.0, n, 0.0, beta, 1.0)?;
        n_bounds.push(point.bound_n.expect("finite n always yields a parameter branch"));
    }
    let t_fit = fit_power_law(t_grid, &t_bounds)?;
    let n_fit = fit_power_law(n_grid, &n_bounds)?;
    let fitted_gamma_t = -t_fit.exponent;
    let fitted_gamma_n = -n_fit.exponent;
    let gamma_t_cap = 1.0 - beta;
    let gamma_n_cap = 1.0 / beta - 1.0;
    let within_tolerance =
        (fitted_gamma_t - gamma_t_cap).abs() <= 1e-3 && (fitted_gamma_n - gamma_n_cap).abs() <= 1e-3;
    Ok(ExponentReport {
        beta,
        gamma_t_cap,
        gamma_n_cap,
        fitted_gamma_t,
        fitted_gamma_n,
        t_fit,
        n_fit,
        within_tolerance,
    })
}

/// Excess cross entropy of the memorization predictor across a grid of
/// training lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct MemorizerCurve {
    pub t_grid: Vec<u64>,
    pub s: u64,
    pub replicates: usize,
    /// Mean excess over replicates, bits per test token.
    pub excess_mean: Vec<f64>,
    pub excess_stderr: Vec<f64>,
    /// `(V(t+s) - V(t))/s`: the exact expectation of the excess.
    pub exact_expectation: Vec<f64>,
}

impl MemorizerCurve {
    /// CSV: `t,excess_mean,excess_stderr,exact_expectation`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,excess_mean,excess_stderr,exact_expectation")?;
        for i in 0..self.t_grid.len() {
            writeln!(
                w,
                "{},{},{},{}",
                self.t_grid[i], self.excess_mean[i], self.excess_stderr[i], self.exact_expectation[i]
            )?;
        }
        Ok(())
    }
}

/// Evaluate the memorization predictor on paired-token streams.
///
/// The predictor knows the true narration marginal and memorizes every
/// `(type, bit)` fact it reads; on a test token it assigns probability 1
/// to the recorded bit of a known type and 1/2 to the bit of an unknown
/// type. Its cross entropy therefore exceeds the source rate by exactly
/// one bit per not-yet-seen type. The narration term contributes the
/// entropy rate identically and is cancelled analytically, which removes
/// sampling noise without changing the estimated expectation.
///
/// For grid point `t` the test block is positions `t+1 ..= t+s` of the
/// replicate's stream, with facts accumulated as the block is read.
pub fn memorizer_cross_entropy(
    cfg: &SantaFeConfig,
    t_grid: &[u64],
    s: u64,
    replicates: usize,
    base_seed: u64,
) -> Result<MemorizerCurve, ScalingError> {
    let law = match &cfg.narration {
        ProcessSpec::Iid(law) => law,
        ProcessSpec::MarkovModulated(_) => return Err(ScalingError::NonIidNarration),
    };
    if cfg.knowledge_entropy != 1.0 {
        return Err(ScalingError::FairBitsRequired { bits: cfg.knowledge_entropy });
    }
    if t_grid.is_empty() {
        return Err(ScalingError::EmptyGrid);
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ScalingError::GridNotIncreasing);
    }
    if s == 0 {
        return Err(ScalingError::BadParameter { name: "s", value: 0.0 });
    }
    if replicates == 0 {
        return Err(ScalingError::BadParameter { name: "replicates", value: 0.0 });
    }
    let t_max = *t_grid.last().unwrap();
    let width = cfg.narration.alphabet_size();
    let spec = cfg.narration.clone();
    let per_rep: Vec<Vec<f64>> = sum::run_indexed(replicates, |r| {
        let seed = derive_seed(base_seed, r as u64);
        let mut stream = NarrationStream::new(&spec, seed);
        let mut seen = vec![false; width + 1];
        let mut unseen_in_window = vec![0u64; t_grid.len()];
        for i in 1..=t_max + s {
            let tok = stream.next_token() as usize;
            if !seen[tok] {
                for (g, &tg) in t_grid.iter().enumerate() {
                    if i > tg && i <= tg + s {
                        unseen_in_window[g] += 1;
                    }
                }
                seen[tok] = true;
            }
        }
        unseen_in_window.iter().map(|&u| u as f64 / s as f64).collect()
    });
    let mut excess_mean = Vec::with_capacity(t_grid.len());
    let mut excess_stderr = Vec::with_capacity(t_grid.len());
    let mut exact_expectation = Vec::with_capacity(t_grid.len());
    let n = replicates as f64;
    for (g, &t) in t_grid.iter().enumerate() {
        let xs: Vec<f64> = per_rep.iter().map(|rep| rep[g]).collect();
        let mean = xs.iter().sum::<f64>() / n;
        let stderr = if replicates > 1 {
            let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        excess_mean.push(mean);
        excess_stderr.push(stderr);
        exact_expectation.push((expected_types(law, t + s) - expected_types(law, t)) / s as f64);
    }
    Ok(MemorizerCurve {
        t_grid: t_grid.to_vec(),
        s,
        replicates,
        excess_mean,
        excess_stderr,
        exact_expectation,
    })
}
