//! Seeded narration processes and paired-token streams.
//!
//! A narration process draws types from a natural-number alphabet, either
//! IID from a marginal law or modulated by an ergodic finite-state chain
//! with per-state emission laws. A paired stream attaches to every drawn
//! type `k` an immutable knowledge bit looked up by a keyed hash, so the
//! pair `(k, bit)` never contradicts an earlier statement about the same
//! position.
//!
//! Generators are pure functions of `(spec, seed)`: two calls with equal
//! arguments produce byte-identical streams on any platform and thread
//! count.

use std::fmt;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::law::DiscreteLaw;
use crate::seed::{bias_for_entropy, knowledge_bit, mix64, unit_uniform};

/// Row-stochastic tolerance for transition matrices.
const ROW_TOL: f64 = 1e-12;
/// Residual tolerance for a provided stationary vector.
const STATIONARY_TOL: f64 = 1e-10;
/// Distance to stationarity that ends the mixing-constant scan.
const MIXING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum ProcessError {
    EmptyLength,
    NoStates,
    NotSquare { rows: usize, cols: usize },
    RowNotStochastic { row: usize, sum: f64 },
    NonPositiveEntry { row: usize, col: usize },
    EmissionCountMismatch { states: usize, emissions: usize },
    StationaryMismatch { residual: f64 },
    ZeroMassType { k: u32 },
    NotErgodic,
    BadKnowledgeEntropy { bits: f64 },
}

impl fmt::Display for ProcessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcessError::EmptyLength => write!(f, "sequence length must be at least 1"),
            ProcessError::NoStates => write!(f, "chain must have at least one state"),
            ProcessError::NotSquare { rows, cols } => {
                write!(f, "transition matrix must be square, got {rows}x{cols}")
            }
            ProcessError::RowNotStochastic { row, sum } => {
                write!(f, "transition row {row} sums to {sum}, expected 1 within {ROW_TOL:e}")
            }
            ProcessError::NonPositiveEntry { row, col } => {
                write!(f, "transition entry ({row},{col}) must be strictly positive")
            }
            ProcessError::EmissionCountMismatch { states, emissions } => {
                write!(f, "{states} states but {emissions} emission laws")
            }
            ProcessError::StationaryMismatch { residual } => {
                write!(f, "provided stationary vector has residual {residual:e} > {STATIONARY_TOL:e}")
            }
            ProcessError::ZeroMassType { k } => {
                write!(f, "type {k} has zero marginal mass")
            }
            ProcessError::NotErgodic => write!(f, "chain does not mix to stationarity"),
            ProcessError::BadKnowledgeEntropy { bits } => {
                write!(f, "knowledge entropy must lie in (0, 1] bits, got {bits}")
            }
        }
    }
}

impl std::error::Error for ProcessError {}

/// A finite-state chain with strictly positive transitions and per-state
/// emission laws. Strict positivity makes the chain ergodic and keeps the
/// pair-correlation ratio bounded.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovSource {
    transition: Vec<Vec<f64>>,
    stationary: Vec<f64>,
    emissions: Vec<DiscreteLaw>,
}

impl MarkovSource {
    /// Validate the matrix and compute the stationary vector.
    pub fn new(transition: Vec<Vec<f64>>, emissions: Vec<DiscreteLaw>) -> Result<Self, ProcessError> {
        let stationary = validate_and_solve_stationary(&transition)?;
        if emissions.len() != transition.len() {
            return Err(ProcessError::EmissionCountMismatch {
                states: transition.len(),
                emissions: emissions.len(),
            });
        }
        Ok(Self { transition, stationary, emissions })
    }

    /// Like [`MarkovSource::new`] but with a caller-provided stationary
    /// vector, verified against the matrix.
    pub fn with_stationary(
        transition: Vec<Vec<f64>>,
        stationary: Vec<f64>,
        emissions: Vec<DiscreteLaw>,
    ) -> Result<Self, ProcessError> {
        let solved = validate_and_solve_stationary(&transition)?;
        let residual = stationary
            .iter()
            .zip(&solved)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if stationary.len() != solved.len() || residual > STATIONARY_TOL {
            return Err(ProcessError::StationaryMismatch { residual });
        }
        if emissions.len() != transition.len() {
            return Err(ProcessError::EmissionCountMismatch {
                states: transition.len(),
                emissions: emissions.len(),
            });
        }
        Ok(Self { transition, stationary, emissions })
    }

    pub fn state_count(&self) -> usize {
        self.transition.len()
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    pub fn emissions(&self) -> &[DiscreteLaw] {
        &self.emissions
    }
}

fn validate_and_solve_stationary(transition: &[Vec<f64>]) -> Result<Vec<f64>, ProcessError> {
    let s = transition.len();
    if s == 0 {
        return Err(ProcessError::NoStates);
    }
    for (i, row) in transition.iter().enumerate() {
        if row.len() != s {
            return Err(ProcessError::NotSquare { rows: s, cols: row.len() });
        }
        for (j, &x) in row.iter().enumerate() {
            if !(x > 0.0) || !x.is_finite() {
                return Err(ProcessError::NonPositiveEntry { row: i, col: j });
            }
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_TOL {
            return Err(ProcessError::RowNotStochastic { row: i, sum });
        }
    }
    // Power iteration; strictly positive rows give geometric convergence.
    let mut pi = vec![1.0 / s as f64; s];
    for _ in 0..100_000 {
        let next = left_multiply(&pi, transition);
        let delta: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if delta < 1e-15 {
            let norm: f64 = pi.iter().sum();
            for x in &mut pi {
                *x /= norm;
            }
            return Ok(pi);
        }
    }
    Err(ProcessError::NotErgodic)
}

fn left_multiply(v: &[f64], m: &[Vec<f64>]) -> Vec<f64> {
    let s = v.len();
    let mut out = vec![0.0; s];
    for (i, &vi) in v.iter().enumerate() {
        for j in 0..s {
            out[j] += vi * m[i][j];
        }
    }
    out
}

fn mat_multiply(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let s = a.len();
    let mut out = vec![vec![0.0; s]; s];
    for i in 0..s {
        for k in 0..s {
            let aik = a[i][k];
            if aik != 0.0 {
                for j in 0..s {
                    out[i][j] += aik * b[k][j];
                }
            }
        }
    }
    out
}

fn mat_power(m: &[Vec<f64>], mut e: u64) -> Vec<Vec<f64>> {
    let s = m.len();
    let mut acc: Vec<Vec<f64>> =
        (0..s).map(|i| (0..s).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    let mut base = m.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_multiply(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_multiply(&base, &base);
        }
    }
    acc
}

/// Description of a narration process.
#[derive(Debug, Clone, PartialEq)]
pub enum ProcessSpec {
    Iid(DiscreteLaw),
    MarkovModulated(MarkovSource),
}

impl ProcessSpec {
    /// Largest type index any emission can produce.
    pub fn alphabet_size(&self) -> usize {
        match self {
            ProcessSpec::Iid(law) => law.support_size(),
            ProcessSpec::MarkovModulated(m) => {
                m.emissions.iter().map(DiscreteLaw::support_size).max().unwrap_or(0)
            }
        }
    }

    pub fn is_iid(&self) -> bool {
        matches!(self, ProcessSpec::Iid(_))
    }
}

/// A paired-token process: narration plus keyed knowledge bits.
#[derive(Debug, Clone, PartialEq)]
pub struct SantaFeConfig {
    pub narration: ProcessSpec,
    /// Entropy of each knowledge bit, in bits. `1.0` means fair bits.
    pub knowledge_entropy: f64,
    pub base_seed: u64,
}

impl SantaFeConfig {
    pub fn new(narration: ProcessSpec, knowledge_entropy: f64, base_seed: u64) -> Result<Self, ProcessError> {
        if !(knowledge_entropy > 0.0 && knowledge_entropy <= 1.0) {
            return Err(ProcessError::BadKnowledgeEntropy { bits: knowledge_entropy });
        }
        Ok(Self { narration, knowledge_entropy, base_seed })
    }

    /// Fair-bit configuration.
    pub fn fair(narration: ProcessSpec, base_seed: u64) -> Self {
        Self { narration, knowledge_entropy: 1.0, base_seed }
    }

    /// `P(bit = 1)` realizing the configured bit entropy.
    pub fn bit_bias(&self) -> f64 {
        bias_for_entropy(self.knowledge_entropy)
    }
}

/// Walker alias table for O(1) draws from a discrete law.
#[derive(Debug, Clone)]
struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<u32>,
}

impl AliasTable {
    fn new(masses: &[f64]) -> Self {
        let n = masses.len();
        let mut prob = vec![0.0; n];
        let mut alias = vec![0u32; n];
        let mut scaled: Vec<f64> = masses.iter().map(|&p| p * n as f64).collect();
        let mut small: Vec<u32> = Vec::new();
        let mut large: Vec<u32> = Vec::new();
        for (i, &w) in scaled.iter().enumerate() {
            if w < 1.0 {
                small.push(i as u32);
            } else {
                large.push(i as u32);
            }
        }
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            prob[s as usize] = scaled[s as usize];
            alias[s as usize] = l;
            scaled[l as usize] -= 1.0 - scaled[s as usize];
            if scaled[l as usize] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        for &l in &large {
            prob[l as usize] = 1.0;
        }
        for &s in &small {
            // Numerical leftovers from the pairing loop.
            prob[s as usize] = 1.0;
        }
        Self { prob, alias }
    }

    /// 0-based column draw.
    fn sample(&self, rng: &mut ChaCha8Rng) -> u32 {
        let i = bounded_index(rng, self.prob.len() as u64) as usize;
        if unit_uniform(rng.next_u64()) < self.prob[i] {
            i as u32
        } else {
            self.alias[i]
        }
    }
}

/// Unbiased bounded index via widening multiply with rejection.
fn bounded_index(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    debug_assert!(n > 0);
    let threshold = n.wrapping_neg() % n;
    loop {
        let x = rng.next_u64();
        let wide = u128::from(x) * u128::from(n);
        if wide as u64 >= threshold {
            return (wide >> 64) as u64;
        }
    }
}

enum SamplerKind {
    Iid(AliasTable),
    Markov { state: usize, rows: Vec<AliasTable>, emitters: Vec<AliasTable> },
}

/// Streaming narration sampler: yields 1-based type indices.
///
/// Deterministic given `(spec, seed)`. Markov chains start from the
/// stationary vector.
pub struct NarrationStream {
    rng: ChaCha8Rng,
    kind: SamplerKind,
}

impl NarrationStream {
    pub fn new(spec: &ProcessSpec, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = match spec {
            ProcessSpec::Iid(law) => SamplerKind::Iid(AliasTable::new(law.masses())),
            ProcessSpec::MarkovModulated(m) => {
                let initial = AliasTable::new(m.stationary());
                let rows = m.transition.iter().map(|r| AliasTable::new(r)).collect();
                let emitters = m.emissions.iter().map(|e| AliasTable::new(e.masses())).collect();
                let state = initial.sample(&mut rng) as usize;
                SamplerKind::Markov { state, rows, emitters }
            }
        };
        Self { rng, kind }
    }

    /// Next type index (1-based).
    pub fn next_token(&mut self) -> u32 {
        match &mut self.kind {
            SamplerKind::Iid(table) => table.sample(&mut self.rng) + 1,
            SamplerKind::Markov { state, rows, emitters } => {
                let token = emitters[*state].sample(&mut self.rng) + 1;
                *state = rows[*state].sample(&mut self.rng) as usize;
                token
            }
        }
    }
}

/// Draw `t` narration tokens. Rejects `t = 0`.
pub fn sample_narration(spec: &ProcessSpec, t: u64, seed: u64) -> Result<Vec<u32>, ProcessError> {
    if t == 0 {
        return Err(ProcessError::EmptyLength);
    }
    let mut stream = NarrationStream::new(spec, seed);
    Ok((0..t).map(|_| stream.next_token()).collect())
}

/// Key under which a sampled stream looks up its knowledge bits.
///
/// Folds the configured base seed with the stream seed: one stream stays
/// internally consistent, while distinct stream seeds see independent
/// knowledge realizations.
pub fn knowledge_key(base_seed: u64, stream_seed: u64) -> u64 {
    mix64(base_seed ^ 0x5a6e_7461_4665_5072) ^ mix64(stream_seed)
}

/// Draw `t` paired tokens `(k, bit)`.
///
/// If positions `i` and `j` carry the same type then they carry the same
/// bit; the knowledge stream is independent of narration.
pub fn sample_santa_fe(cfg: &SantaFeConfig, t: u64, seed: u64) -> Result<Vec<(u32, u8)>, ProcessError> {
    if t == 0 {
        return Err(ProcessError::EmptyLength);
    }
    let bias = cfg.bit_bias();
    let key = knowledge_key(cfg.base_seed, seed);
    let mut stream = NarrationStream::new(&cfg.narration, seed);
    Ok((0..t)
        .map(|_| {
            let k = stream.next_token();
            (k, knowledge_bit(key, k, bias))
        })
        .collect())
}

/// Exact marginal law of a narration process.
///
/// IID returns its law; a modulated chain returns the stationary mixture of
/// its emission laws.
pub fn marginal_law(spec: &ProcessSpec) -> DiscreteLaw {
    match spec {
        ProcessSpec::Iid(law) => law.clone(),
        ProcessSpec::MarkovModulated(m) => {
            let width = spec.alphabet_size();
            let mut masses = vec![0.0; width];
            for (pi, law) in m.stationary.iter().zip(&m.emissions) {
                for (k, &p) in law.masses().iter().enumerate() {
                    masses[k] += pi * p;
                }
            }
            let total: f64 = masses.iter().sum();
            for p in &mut masses {
                *p /= total;
            }
            DiscreteLaw::from_masses(masses).expect("stationary mixture normalizes")
        }
    }
}

/// Exact lagged self-correlation ratio `P(K_t = k | K_0 = k) / P(K_0 = k)`.
///
/// IID processes give exactly 1. For a modulated chain the joint is
/// `sum_{s,s'} pi(s) e_s(k) P^t(s,s') e_{s'}(k)` over the squared marginal.
pub fn pair_correlation(spec: &ProcessSpec, k: u32, t: u64) -> Result<f64, ProcessError> {
    if t == 0 {
        return Err(ProcessError::EmptyLength);
    }
    let marginal = marginal_law(spec).mass(k as usize);
    if marginal <= 0.0 {
        return Err(ProcessError::ZeroMassType { k });
    }
    match spec {
        ProcessSpec::Iid(_) => Ok(1.0),
        ProcessSpec::MarkovModulated(m) => {
            let pt = mat_power(&m.transition, t);
            let s = m.state_count();
            let mut joint = 0.0;
            let mut base = 0.0;
            for i in 0..s {
                let ei = m.emissions[i].mass(k as usize);
                base += m.stationary[i] * ei;
                if ei == 0.0 {
                    continue;
                }
                for j in 0..s {
                    let ej = m.emissions[j].mass(k as usize);
                    joint += m.stationary[i] * ei * pt[i][j] * ej;
                }
            }
            Ok(joint / (base * base))
        }
    }
}

/// Upper bound on the pair-correlation ratio over all types and lags.
///
/// Scans `max_{s,s'} P^t(s,s') / pi(s')` for `t = 1, 2, ...` until the
/// chain is within `1e-9` of stationarity; the running maximum dominates
/// `pair_correlation(spec, k, t)` for every `k` and `t`, and equals 1 for
/// IID sources.
pub fn mixing_constant(spec: &ProcessSpec) -> Result<f64, ProcessError> {
    match spec {
        ProcessSpec::Iid(_) => Ok(1.0),
        ProcessSpec::MarkovModulated(m) => {
            let s = m.state_count();
            let mut power = m.transition.clone();
            let mut c3 = 1.0f64;
            for _t in 1..=1_000_000u64 {
                let mut ratio_max = 0.0f64;
                let mut dist = 0.0f64;
                for i in 0..s {
                    for j in 0..s {
                        ratio_max = ratio_max.max(power[i][j] / m.stationary[j]);
                        dist = dist.max((power[i][j] - m.stationary[j]).abs());
                    }
                }
                c3 = c3.max(ratio_max);
                if dist < MIXING_TOL {
                    return Ok(c3);
                }
                power = mat_multiply(&power, &m.transition);
            }
            Err(ProcessError::NotErgodic)
        }
    }
}

/// Lag after which the chain is within `1e-9` of stationarity (1 for IID).
pub fn stationarity_lag(spec: &ProcessSpec) -> Result<u64, ProcessError> {
    match spec {
        ProcessSpec::Iid(_) => Ok(1),
        ProcessSpec::MarkovModulated(m) => {
            let s = m.state_count();
            let mut power = m.transition.clone();
            for t in 1..=1_000_000u64 {
                let mut dist = 0.0f64;
                for i in 0..s {
                    for j in 0..s {
                        dist = dist.max((power[i][j] - m.stationary[j]).abs());
                    }
                }
                if dist < MIXING_TOL {
                    return Ok(t);
                }
                power = mat_multiply(&power, &m.transition);
            }
            Err(ProcessError::NotErgodic)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sticky_disjoint() -> MarkovSource {
        // Two sticky states, state 1 emits type 1, state 2 emits type 2.
        let e1 = DiscreteLaw::from_masses(vec![1.0, 0.0]).unwrap();
        let e2 = DiscreteLaw::from_masses(vec![0.0, 1.0]).unwrap();
        MarkovSource::new(vec![vec![0.9, 0.1], vec![0.1, 0.9]], vec![e1, e2]).unwrap()
    }

    #[test]
    fn degenerate_law_yields_constant_stream() {
        let spec = ProcessSpec::Iid(DiscreteLaw::singleton());
        assert_eq!(sample_narration(&spec, 5, 7).unwrap(), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn same_seed_reproduces_streams() {
        let spec = ProcessSpec::Iid(DiscreteLaw::zipf(0.5, 1000).unwrap());
        let a = sample_narration(&spec, 10_000, 99).unwrap();
        let b = sample_narration(&spec, 10_000, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_narration(&spec, 10_000, 100).unwrap();
        assert_ne!(a, c);

        let markov = ProcessSpec::MarkovModulated(sticky_disjoint());
        assert_eq!(
            sample_narration(&markov, 1000, 5).unwrap(),
            sample_narration(&markov, 5000, 5).unwrap()[..1000]
        );
    }

    #[test]
    fn zero_length_is_rejected() {
        let spec = ProcessSpec::Iid(DiscreteLaw::singleton());
        assert!(matches!(sample_narration(&spec, 0, 1), Err(ProcessError::EmptyLength)));
    }

    #[test]
    fn iid_uniform_frequency_within_clt_band() {
        let spec = ProcessSpec::Iid(DiscreteLaw::uniform(2).unwrap());
        let t = 1_000_000u64;
        let tokens = sample_narration(&spec, t, 42).unwrap();
        let ones = tokens.iter().filter(|&&k| k == 1).count() as f64;
        let freq = ones / t as f64;
        // 3 sigma = 3 * 0.5 / sqrt(t).
        assert!((freq - 0.5).abs() < 3.0 * 0.5 / (t as f64).sqrt(), "freq={freq}");
    }

    #[test]
    fn santa_fe_bits_never_contradict() {
        let cfg = SantaFeConfig::fair(ProcessSpec::Iid(DiscreteLaw::zipf(0.5, 50).unwrap()), 3);
        let pairs = sample_santa_fe(&cfg, 20_000, 11).unwrap();
        let mut recorded: std::collections::HashMap<u32, u8> = std::collections::HashMap::new();
        for (k, bit) in pairs {
            assert_eq!(*recorded.entry(k).or_insert(bit), bit);
        }
    }

    #[test]
    fn santa_fe_constant_narration_repeats_one_pair() {
        let cfg = SantaFeConfig::fair(ProcessSpec::Iid(DiscreteLaw::singleton()), 9);
        let pairs = sample_santa_fe(&cfg, 3, 9).unwrap();
        assert_eq!(pairs[0], pairs[1]);
        assert_eq!(pairs[1], pairs[2]);
    }

    #[test]
    fn santa_fe_per_type_bit_frequency_balanced() {
        let cfg = SantaFeConfig::fair(ProcessSpec::Iid(DiscreteLaw::uniform(2).unwrap()), 21);
        let t = 100_000u64;
        // Bits are constant per type within a stream; balance shows up
        // across seeds.
        let ones: u32 = (0..2000u64)
            .map(|s| u32::from(sample_santa_fe(&cfg, 1, s).unwrap()[0].1))
            .sum();
        assert!((f64::from(ones) - 1000.0).abs() < 3.0 * (2000.0f64 * 0.25).sqrt());
        let pairs = sample_santa_fe(&cfg, t, 5).unwrap();
        for (k, bit) in &pairs[..100] {
            assert_eq!(pairs.iter().find(|(kk, _)| kk == k).unwrap().1, *bit);
        }
    }

    #[test]
    fn marginal_of_iid_is_identity() {
        let law = DiscreteLaw::zipf(0.5, 100).unwrap();
        let spec = ProcessSpec::Iid(law.clone());
        assert_eq!(marginal_law(&spec), law);
    }

    #[test]
    fn marginal_of_delta_emissions_is_stationary_mixture() {
        let spec = ProcessSpec::MarkovModulated(sticky_disjoint());
        let marg = marginal_law(&spec);
        assert_abs_diff_eq!(marg.mass(1), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(marg.mass(2), 0.5, epsilon = 1e-12);

        // pi = (0.25, 0.75) for this asymmetric sticky chain.
        let e1 = DiscreteLaw::from_masses(vec![1.0, 0.0]).unwrap();
        let e2 = DiscreteLaw::from_masses(vec![0.0, 1.0]).unwrap();
        let m =
            MarkovSource::new(vec![vec![0.7, 0.3], vec![0.1, 0.9]], vec![e1, e2]).unwrap();
        let marg = marginal_law(&ProcessSpec::MarkovModulated(m));
        assert_abs_diff_eq!(marg.mass(1), 0.25, epsilon = 1e-10);
        assert_abs_diff_eq!(marg.mass(2), 0.75, epsilon = 1e-10);
    }

    #[test]
    fn markov_empirical_frequencies_match_marginal() {
        let spec = ProcessSpec::MarkovModulated(sticky_disjoint());
        let t = 1_000_000u64;
        let tokens = sample_narration(&spec, t, 17).unwrap();
        let marg = marginal_law(&spec);
        let ones = tokens.iter().filter(|&&k| k == 1).count() as f64 / t as f64;
        let p = marg.mass(1);
        // Sticky chains decorrelate slowly; the asymptotic variance of the
        // mean is inflated by (1+rho)/(1-rho) relative to IID sampling.
        let rho: f64 = 0.8;
        let sigma = (p * (1.0 - p) / t as f64 * (1.0 + rho) / (1.0 - rho)).sqrt();
        assert!((ones - p).abs() < 4.0 * sigma, "ones={ones} p={p} sigma={sigma}");
    }

    #[test]
    fn pair_correlation_iid_is_one() {
        let spec = ProcessSpec::Iid(DiscreteLaw::uniform(3).unwrap());
        for t in [1u64, 5, 100] {
            assert_eq!(pair_correlation(&spec, 2, t).unwrap(), 1.0);
        }
        assert!(matches!(
            pair_correlation(&spec, 9, 1),
            Err(ProcessError::ZeroMassType { k: 9 })
        ));
    }

    #[test]
    fn pair_correlation_identical_emissions_is_one() {
        let e = DiscreteLaw::uniform(2).unwrap();
        let m = MarkovSource::new(
            vec![vec![0.9, 0.1], vec![0.1, 0.9]],
            vec![e.clone(), e],
        )
        .unwrap();
        let spec = ProcessSpec::MarkovModulated(m);
        for t in [1u64, 3, 10] {
            assert_abs_diff_eq!(pair_correlation(&spec, 1, t).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pair_correlation_sticky_disjoint_hand_value() {
        // Type 1 emitted only in state 1; at lag 1 the ratio is
        // P(1,1)/pi(1) = 0.9/0.5 = 1.8.
        let spec = ProcessSpec::MarkovModulated(sticky_disjoint());
        assert_abs_diff_eq!(pair_correlation(&spec, 1, 1).unwrap(), 1.8, epsilon = 1e-10);
    }

    #[test]
    fn pair_correlation_tends_to_one() {
        let spec = ProcessSpec::MarkovModulated(sticky_disjoint());
        let lag = stationarity_lag(&spec).unwrap();
        let ratio = pair_correlation(&spec, 1, lag).unwrap();
        assert!((ratio - 1.0).abs() < 1e-6, "ratio={ratio} at lag {lag}");
    }

    #[test]
    fn mixing_constant_hand_values() {
        assert_eq!(mixing_constant(&ProcessSpec::Iid(DiscreteLaw::singleton())).unwrap(), 1.0);

        let e = DiscreteLaw::uniform(2).unwrap();
        let flat = MarkovSource::new(
            vec![vec![0.5, 0.5], vec![0.5, 0.5]],
            vec![e.clone(), e.clone()],
        )
        .unwrap();
        assert_abs_diff_eq!(
            mixing_constant(&ProcessSpec::MarkovModulated(flat)).unwrap(),
            1.0,
            epsilon = 1e-12
        );

        let spec = ProcessSpec::MarkovModulated(sticky_disjoint());
        assert_abs_diff_eq!(mixing_constant(&spec).unwrap(), 1.8, epsilon = 1e-10);
    }

    #[test]
    fn mixing_constant_dominates_pair_correlations() {
        let spec = ProcessSpec::MarkovModulated(sticky_disjoint());
        let c3 = mixing_constant(&spec).unwrap();
        for k in [1u32, 2] {
            for t in [1u64, 2, 3, 5, 10, 50] {
                assert!(pair_correlation(&spec, k, t).unwrap() <= c3 + 1e-12);
            }
        }
    }

    #[test]
    fn invalid_transition_matrices_are_rejected() {
        let e = DiscreteLaw::uniform(2).unwrap();
        assert!(matches!(
            MarkovSource::new(vec![vec![1.0, 0.0], vec![0.1, 0.9]], vec![e.clone(), e.clone()]),
            Err(ProcessError::NonPositiveEntry { .. })
        ));
        assert!(matches!(
            MarkovSource::new(vec![vec![0.5, 0.4], vec![0.5, 0.5]], vec![e.clone(), e.clone()]),
            Err(ProcessError::RowNotStochastic { .. })
        ));
        assert!(matches!(
            MarkovSource::new(vec![vec![0.5, 0.5]], vec![e.clone()]),
            Err(ProcessError::NotSquare { .. })
        ));
        assert!(matches!(
            MarkovSource::with_stationary(
                vec![vec![0.9, 0.1], vec![0.1, 0.9]],
                vec![0.9, 0.1],
                vec![e.clone(), e.clone()],
            ),
            Err(ProcessError::StationaryMismatch { .. })
        ));
        assert!(MarkovSource::with_stationary(
            vec![vec![0.9, 0.1], vec![0.1, 0.9]],
            vec![0.5, 0.5],
            vec![e.clone(), e],
        )
        .is_ok());
    }

    #[test]
    fn alias_table_reproduces_law_frequencies() {
        let law = DiscreteLaw::from_masses(vec![0.6, 0.25, 0.1, 0.05]).unwrap();
        let spec = ProcessSpec::Iid(law.clone());
        let t = 400_000u64;
        let tokens = sample_narration(&spec, t, 1234).unwrap();
        for k in 1..=4usize {
            let freq = tokens.iter().filter(|&&x| x == k as u32).count() as f64 / t as f64;
            let p = law.mass(k);
            let sigma = (p * (1.0 - p) / t as f64).sqrt();
            assert!((freq - p).abs() < 4.0 * sigma, "k={k} freq={freq} p={p}");
        }
    }

    #[test]
    fn bad_knowledge_entropy_is_rejected() {
        let spec = ProcessSpec::Iid(DiscreteLaw::singleton());
        assert!(SantaFeConfig::new(spec.clone(), 0.0, 1).is_err());
        assert!(SantaFeConfig::new(spec.clone(), 1.5, 1).is_err());
        assert!(SantaFeConfig::new(spec, 0.75, 1).is_ok());
    }
}
