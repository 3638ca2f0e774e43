//! Empirical counterparts of the closed-form quantities.
//!
//! - [`vocabulary_curve`]: single-pass type and spectrum counts from a
//!   token stream.
//! - [`simulate_occupancy`]: replicate means with standard errors, seeded
//!   deterministically per replicate.
//! - [`exact_block_entropy_process`] / [`exact_block_entropy_santa_fe`]:
//!   exact `-sum P log2 P` over all length-`t` strings, by enumeration.
//!   This is the entropy oracle; it is intentionally dumb and capped.
//! - [`santa_fe_conditional_rate`]: the conditional block entropy rate of a
//!   paired process with IID narration, in closed form.
//! - [`fit_power_law`]: least squares on log-log axes.

use std::fmt;

use crate::law::DiscreteLaw;
use crate::occupancy::expected_types;
use crate::seed::derive_seed;
use crate::sources::{NarrationStream, ProcessSpec, SantaFeConfig};
use crate::sum;

/// Enumeration ceiling: `alphabet^t` may not exceed this.
pub const ENUMERATION_CAP: f64 = 16_777_216.0; // 2^24

#[derive(Debug, Clone, PartialEq)]
pub enum EstimatorError {
    EmptyStream,
    EmptyGrid,
    GridNotIncreasing { index: usize },
    GridBeyondStream { t: u64, len: usize },
    StateSpaceOverflow { states: f64 },
    NonIidNarration,
    UnitEntropyBitsRequired { bits: f64 },
    TooFewPoints { n: usize },
    NonPositiveValue { index: usize },
    LengthMismatch { xs: usize, ys: usize },
}

impl fmt::Display for EstimatorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimatorError::EmptyStream => write!(f, "token stream is empty"),
            EstimatorError::EmptyGrid => write!(f, "length grid is empty"),
            EstimatorError::GridNotIncreasing { index } => {
                write!(f, "length grid must be strictly increasing at index {index}")
            }
            EstimatorError::GridBeyondStream { t, len } => {
                write!(f, "grid point t={t} exceeds stream length {len}")
            }
            EstimatorError::StateSpaceOverflow { states } => {
                write!(
                    f,
                    "enumeration needs {states:.3e} strings, cap is {ENUMERATION_CAP:.3e}"
                )
            }
            EstimatorError::NonIidNarration => {
                write!(f, "closed form requires IID narration")
            }
            EstimatorError::UnitEntropyBitsRequired { bits } => {
                write!(f, "knowledge entropy must be exactly 1 bit, got {bits}")
            }
            EstimatorError::TooFewPoints { n } => {
                write!(f, "power-law fit needs at least 3 points, got {n}")
            }
            EstimatorError::NonPositiveValue { index } => {
                write!(f, "power-law fit needs positive values, offender at index {index}")
            }
            EstimatorError::LengthMismatch { xs, ys } => {
                write!(f, "xs has {xs} points but ys has {ys}")
            }
        }
    }
}

impl std::error::Error for EstimatorError {}

fn validate_grid(grid: &[u64]) -> Result<(), EstimatorError> {
    if grid.is_empty() {
        return Err(EstimatorError::EmptyGrid);
    }
    for (i, w) in grid.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(EstimatorError::GridNotIncreasing { index: i + 1 });
        }
    }
    Ok(())
}

/// Empirical occupancy counts of one token stream at given lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalOccupancy {
    pub t_grid: Vec<u64>,
    /// Distinct-type count at each grid length.
    pub v: Vec<f64>,
    /// `spectrum[i][m-1]` = number of types seen exactly `m` times at `t_i`.
    pub spectrum: Vec<Vec<f64>>,
}

/// Count distinct types and occurrence spectra in a single pass.
///
/// Maintains per-type counts in a dense table plus incremental spectrum
/// counters, so the cost per token is O(1) and streams of 10^7+ tokens per
/// second are comfortable.
pub fn vocabulary_curve(
    tokens: &[u32],
    grid: &[u64],
    m_max: u64,
) -> Result<EmpiricalOccupancy, EstimatorError> {
    if tokens.is_empty() {
        return Err(EstimatorError::EmptyStream);
    }
    validate_grid(grid)?;
    let last = *grid.last().unwrap();
    if last > tokens.len() as u64 {
        return Err(EstimatorError::GridBeyondStream { t: last, len: tokens.len() });
    }
    let width = tokens.iter().copied().max().unwrap_or(0) as usize;
    let mut counts = vec![0u32; width + 1];
    let mut distinct = 0u64;
    let mut spectrum_counts = vec![0u64; m_max as usize + 1];
    let mut v = Vec::with_capacity(grid.len());
    let mut spectrum = Vec::with_capacity(grid.len());
    let mut next = 0usize;
    for (i, &tok) in tokens.iter().enumerate() {
        let c = &mut counts[tok as usize];
        let old = *c as u64;
        *c += 1;
        if old == 0 {
            distinct += 1;
        }
        if old > 0 && old <= m_max {
            spectrum_counts[old as usize] -= 1;
        }
        if old + 1 <= m_max {
            spectrum_counts[old as usize + 1] += 1;
        }
        let t = (i + 1) as u64;
        while next < grid.len() && grid[next] == t {
            v.push(distinct as f64);
            spectrum.push(spectrum_counts[1..].iter().map(|&x| x as f64).collect());
            next += 1;
        }
    }
    Ok(EmpiricalOccupancy { t_grid: grid.to_vec(), v, spectrum })
}

/// Replicate-averaged occupancy estimates with standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedOccupancy {
    pub t_grid: Vec<u64>,
    pub replicates: usize,
    pub v_mean: Vec<f64>,
    pub v_stderr: Vec<f64>,
    /// Mean and standard error of the fresh-type indicator at `t+1`,
    /// an unbiased estimate of `ΔV(t)`.
    pub dv_mean: Vec<f64>,
    pub dv_stderr: Vec<f64>,
    /// `spectrum_mean[i][m-1]` averages the type count of multiplicity `m`.
    pub spectrum_mean: Vec<Vec<f64>>,
    pub spectrum_stderr: Vec<Vec<f64>>,
}

impl SimulatedOccupancy {
    /// CSV: `t,V,V_stderr,dV,dV_stderr,V1,V1_stderr,...`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        let m_max = self.spectrum_mean.first().map_or(0, Vec::len);
        write!(w, "t,V,V_stderr,dV,dV_stderr")?;
        for m in 1..=m_max {
            write!(w, ",V{m},V{m}_stderr")?;
        }
        writeln!(w)?;
        for i in 0..self.t_grid.len() {
            write!(
                w,
                "{},{},{},{},{}",
                self.t_grid[i], self.v_mean[i], self.v_stderr[i], self.dv_mean[i], self.dv_stderr[i]
            )?;
            for m in 0..m_max {
                write!(w, ",{},{}", self.spectrum_mean[i][m], self.spectrum_stderr[i][m])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Monte Carlo occupancy curves over `replicates` independent streams.
///
/// Replicate `r` runs on `derive_seed(base_seed, r)`; replicates execute
/// concurrently and are reduced in index order, so the result does not
/// depend on the thread count.
pub fn simulate_occupancy(
    spec: &ProcessSpec,
    grid: &[u64],
    m_max: u64,
    replicates: usize,
    base_seed: u64,
) -> Result<SimulatedOccupancy, EstimatorError> {
    validate_grid(grid)?;
    if replicates == 0 {
        return Err(EstimatorError::EmptyStream);
    }
    let t_max = *grid.last().unwrap();
    let per_rep: Vec<(Vec<f64>, Vec<Vec<f64>>, Vec<f64>)> = sum::run_indexed(replicates, |r| {
        let seed = derive_seed(base_seed, r as u64);
        let mut stream = NarrationStream::new(spec, seed);
        let width = spec.alphabet_size();
        let mut counts = vec![0u32; width + 1];
        let mut distinct = 0u64;
        let mut spectrum_counts = vec![0u64; m_max as usize + 1];
        let mut v = Vec::with_capacity(grid.len());
        let mut spectrum = Vec::with_capacity(grid.len());
        let mut fresh = Vec::with_capacity(grid.len());
        let mut next = 0usize;
        while next < grid.len() && grid[next] == 0 {
            v.push(0.0);
            spectrum.push(vec![0.0; m_max as usize]);
            next += 1;
        }
        // One extra token provides the fresh-type indicator at t_max.
        for t in 1..=t_max + 1 {
            let tok = stream.next_token() as usize;
            let is_new = counts[tok] == 0;
            // Token t is "token t_g + 1" for the grid point t_g = t - 1;
            // its newness is the unbiased ΔV(t_g) sample.
            if next > 0 && grid[next - 1] == t - 1 {
                fresh.push(f64::from(u8::from(is_new)));
            }
            if t == t_max + 1 {
                break;
            }
            let old = counts[tok] as u64;
            counts[tok] += 1;
            if old == 0 {
                distinct += 1;
            }
            if old > 0 && old <= m_max {
                spectrum_counts[old as usize] -= 1;
            }
            if old + 1 <= m_max {
                spectrum_counts[old as usize + 1] += 1;
            }
            while next < grid.len() && grid[next] == t {
                v.push(distinct as f64);
                spectrum.push(
                    spectrum_counts[1..].iter().map(|&x| x as f64).collect::<Vec<f64>>(),
                );
                next += 1;
            }
        }
        (v, spectrum, fresh)
    });

    let g = grid.len();
    let mut v_mean = Vec::with_capacity(g);
    let mut v_stderr = Vec::with_capacity(g);
    let mut dv_mean = Vec::with_capacity(g);
    let mut dv_stderr = Vec::with_capacity(g);
    let mut spectrum_mean = Vec::with_capacity(g);
    let mut spectrum_stderr = Vec::with_capacity(g);
    for i in 0..g {
        let vs: Vec<f64> = per_rep.iter().map(|(v, _, _)| v[i]).collect();
        let (m, s) = mean_and_stderr(&vs);
        v_mean.push(m);
        v_stderr.push(s);
        let fs: Vec<f64> = per_rep.iter().map(|(_, _, f)| f[i]).collect();
        let (m, s) = mean_and_stderr(&fs);
        dv_mean.push(m);
        dv_stderr.push(s);
        let mut row_mean = Vec::with_capacity(m_max as usize);
        let mut row_stderr = Vec::with_capacity(m_max as usize);
        for mi in 0..m_max as usize {
            let xs: Vec<f64> = per_rep.iter().map(|(_, sp, _)| sp[i][mi]).collect();
            let (m, s) = mean_and_stderr(&xs);
            row_mean.push(m);
            row_stderr.push(s);
        }
        spectrum_mean.push(row_mean);
        spectrum_stderr.push(row_stderr);
    }
    Ok(SimulatedOccupancy {
        t_grid: grid.to_vec(),
        replicates,
        v_mean,
        v_stderr,
        dv_mean,
        dv_stderr,
        spectrum_mean,
        spectrum_stderr,
    })
}

/// Exact block entropy curve `H(0), H(1), ..., H(t_max)` in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyCurve {
    pub t_grid: Vec<u64>,
    /// Block entropies in bits; `h[0] = 0`.
    pub h: Vec<f64>,
    /// Forward differences `h[i+1] - h[i]` (one shorter than `h`).
    pub dh: Vec<f64>,
    /// Final difference: the tightest entropy-rate estimate the curve gives.
    pub h_estimate: f64,
}

impl EntropyCurve {
    fn from_values(h: Vec<f64>) -> Self {
        let t_grid = (0..h.len() as u64).collect();
        let dh: Vec<f64> = h.windows(2).map(|w| w[1] - w[0]).collect();
        let h_estimate = dh.last().copied().unwrap_or(0.0);
        Self { t_grid, h, dh, h_estimate }
    }

    /// CSV: `t,H,dH` (the last row has no forward difference).
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,H,dH")?;
        for (i, &t) in self.t_grid.iter().enumerate() {
            if i < self.dh.len() {
                writeln!(w, "{t},{},{}", self.h[i], self.dh[i])?;
            } else {
                writeln!(w, "{t},{},", self.h[i])?;
            }
        }
        Ok(())
    }
}

/// Internal view of a process as a hidden chain: IID is one state.
struct ChainView {
    initial: Vec<f64>,
    transition: Vec<Vec<f64>>,
    emissions: Vec<Vec<f64>>,
    alphabet: usize,
}

impl ChainView {
    fn of(spec: &ProcessSpec) -> Self {
        match spec {
            ProcessSpec::Iid(law) => ChainView {
                initial: vec![1.0],
                transition: vec![vec![1.0]],
                emissions: vec![law.masses().to_vec()],
                alphabet: law.support_size(),
            },
            ProcessSpec::MarkovModulated(m) => {
                let alphabet = spec.alphabet_size();
                ChainView {
                    initial: m.stationary().to_vec(),
                    transition: m.transition().to_vec(),
                    emissions: m
                        .emissions()
                        .iter()
                        .map(|e| {
                            let mut v = e.masses().to_vec();
                            v.resize(alphabet, 0.0);
                            v
                        })
                        .collect(),
                    alphabet,
                }
            }
        }
    }
}

fn check_cap(alphabet: usize, t: u64) -> Result<(), EstimatorError> {
    let states = (alphabet as f64).powf(t as f64);
    if states > ENUMERATION_CAP {
        return Err(EstimatorError::StateSpaceOverflow { states });
    }
    Ok(())
}

/// Walk every narration string of length `<= t_max` depth-first, calling
/// `visit(depth, prefix_probability, distinct_type_mask)` once per prefix.
/// `alpha` carries the hidden-state forward probabilities.
fn dfs_strings(
    view: &ChainView,
    t_max: u64,
    depth: u64,
    alpha: &[f64],
    mask: u64,
    visit: &mut impl FnMut(u64, f64, u64),
) {
    let prob: f64 = alpha.iter().sum();
    if prob > 0.0 {
        visit(depth, prob, mask);
    } else {
        return;
    }
    if depth == t_max {
        return;
    }
    let s = alpha.len();
    let mut next_alpha = vec![0.0; s];
    for sym in 0..view.alphabet {
        // alpha'(s') = sum_s alpha(s) P(s,s') e_{s'}(sym); at depth 0 the
        // "transition" is the initial distribution already in alpha.
        let mut any = false;
        for (j, na) in next_alpha.iter_mut().enumerate() {
            let e = view.emissions[j][sym];
            if depth == 0 {
                *na = alpha[j] * e;
            } else {
                let mut acc = 0.0;
                for (i, &a) in alpha.iter().enumerate() {
                    acc += a * view.transition[i][j];
                }
                *na = acc * e;
            }
            any |= *na > 0.0;
        }
        if any {
            dfs_strings(view, t_max, depth + 1, &next_alpha, mask | (1 << sym), visit);
        }
    }
}

/// Exact block entropies `H(0..=t_max)` of a narration process, in bits.
pub fn entropy_curve_process(spec: &ProcessSpec, t_max: u64) -> Result<EntropyCurve, EstimatorError> {
    let view = ChainView::of(spec);
    check_cap(view.alphabet, t_max)?;
    let mut acc = vec![0.0f64; t_max as usize + 1];
    dfs_strings(&view, t_max, 0, &view.initial.clone(), 0, &mut |depth, p, _| {
        if depth > 0 {
            acc[depth as usize] -= p * p.log2();
        }
    });
    Ok(EntropyCurve::from_values(acc))
}

/// Exact block entropy `H(t)` of a narration process, in bits.
pub fn exact_block_entropy_process(spec: &ProcessSpec, t: u64) -> Result<f64, EstimatorError> {
    Ok(entropy_curve_process(spec, t)?.h[t as usize])
}

/// Exact block entropies `H(0..=t_max)` of a paired process, in bits.
///
/// Enumerates narration strings and, for each, every consistent assignment
/// of bits to the distinct types it contains. The paired alphabet has size
/// `2 * alphabet`, which is what the enumeration cap is checked against.
pub fn entropy_curve_santa_fe(cfg: &SantaFeConfig, t_max: u64) -> Result<EntropyCurve, EstimatorError> {
    let view = ChainView::of(&cfg.narration);
    check_cap(2 * view.alphabet, t_max)?;
    let theta = cfg.bit_bias();
    let mut acc = vec![0.0f64; t_max as usize + 1];
    dfs_strings(&view, t_max, 0, &view.initial.clone(), 0, &mut |depth, p, mask| {
        if depth == 0 {
            return;
        }
        let d = mask.count_ones();
        // All 2^d bit assignments for the d distinct types present.
        for bits in 0u64..(1 << d) {
            let ones = bits.count_ones();
            let w = theta.powi(ones as i32) * (1.0 - theta).powi((d - ones) as i32);
            let joint = p * w;
            if joint > 0.0 {
                acc[depth as usize] -= joint * joint.log2();
            }
        }
    });
    Ok(EntropyCurve::from_values(acc))
}

/// Exact block entropy `H(t)` of a paired process, in bits.
pub fn exact_block_entropy_santa_fe(cfg: &SantaFeConfig, t: u64) -> Result<f64, EstimatorError> {
    Ok(entropy_curve_santa_fe(cfg, t)?.h[t as usize])
}

/// Conditional block entropy rate of a paired process with IID narration
/// and fair bits, in bits per token:
///
/// ```text
/// H(next s tokens | first t tokens) / s  =  h + (V(t+s) - V(t)) / s
/// ```
///
/// where `h` is the narration entropy. Exact up to the occupancy tolerance;
/// the value does not depend on where the test block sits, so it equals the
/// worst case over block positions.
pub fn santa_fe_conditional_rate(cfg: &SantaFeConfig, t: u64, s: u64) -> Result<f64, EstimatorError> {
    Ok(narration_entropy_rate(cfg)? + santa_fe_conditional_excess(cfg, t, s)?)
}

/// The excess part `(V(t+s) - V(t)) / s` of [`santa_fe_conditional_rate`].
pub fn santa_fe_conditional_excess(cfg: &SantaFeConfig, t: u64, s: u64) -> Result<f64, EstimatorError> {
    let law = require_iid_fair(cfg)?;
    if s == 0 {
        return Err(EstimatorError::EmptyGrid);
    }
    Ok((expected_types(law, t + s) - expected_types(law, t)) / s as f64)
}

/// Entropy rate of the narration law, in bits per token.
pub fn narration_entropy_rate(cfg: &SantaFeConfig) -> Result<f64, EstimatorError> {
    Ok(require_iid_fair(cfg)?.entropy_bits())
}

fn require_iid_fair(cfg: &SantaFeConfig) -> Result<&DiscreteLaw, EstimatorError> {
    if cfg.knowledge_entropy != 1.0 {
        return Err(EstimatorError::UnitEntropyBitsRequired { bits: cfg.knowledge_entropy });
    }
    match &cfg.narration {
        ProcessSpec::Iid(law) => Ok(law),
        ProcessSpec::MarkovModulated(_) => Err(EstimatorError::NonIidNarration),
    }
}

/// Result of a least-squares fit on log-log axes.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FitResult {
    /// Slope of `log y` against `log x`.
    pub exponent: f64,
    /// Intercept in the natural-log domain.
    pub intercept: f64,
    #[serde(rename = "r2")]
    pub r_squared: f64,
    #[serde(skip)]
    pub residual_std: f64,
    pub n_points: usize,
}

/// Fit `y = exp(intercept) * x^exponent` by least squares on logs.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<FitResult, EstimatorError> {
    if xs.len() != ys.len() {
        return Err(EstimatorError::LengthMismatch { xs: xs.len(), ys: ys.len() });
    }
    if xs.len() < 3 {
        return Err(EstimatorError::TooFewPoints { n: xs.len() });
    }
    for (i, (&x, &y)) in xs.iter().zip(ys).enumerate() {
        if !(x > 0.0) || !(y > 0.0) {
            return Err(EstimatorError::NonPositiveValue { index: i });
        }
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|&x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|&y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|&x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(&x, &y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let ss_tot: f64 = ly.iter().map(|&y| (y - my) * (y - my)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    let residual_std =
        if xs.len() > 2 { (ss_res / (n - 2.0)).sqrt() } else { 0.0 };
    Ok(FitResult { exponent: slope, intercept, r_squared, residual_std, n_points: xs.len() })
}
