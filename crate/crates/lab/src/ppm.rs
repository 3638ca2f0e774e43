//! Prediction-by-partial-matching ideal code lengths.
//!
//! A finite-context model over a declared alphabet `1..=A`. In a context
//! holding `d` distinct symbols with `n` total counts, a seen symbol costs
//! `-log2(count / (n + d))` and the escape costs `-log2(d / (n + d))`
//! (escape method C). Escaping excludes the context's symbols from every
//! shorter context considered next; a miss at order 0 falls back to a
//! uniform law over the not-yet-excluded alphabet. No bitstream is
//! produced: the coder reports ideal code lengths only.

use std::collections::HashMap;
use std::fmt;

/// Largest supported context depth.
pub const MAX_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum PpmError {
    BadOrder { order: usize },
    EmptyAlphabet,
    TokenOutsideAlphabet { token: u32, alphabet: u32 },
}

impl fmt::Display for PpmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PpmError::BadOrder { order } => {
                write!(f, "context order must lie in [0, {MAX_ORDER}], got {order}")
            }
            PpmError::EmptyAlphabet => write!(f, "declared alphabet must not be empty"),
            PpmError::TokenOutsideAlphabet { token, alphabet } => {
                write!(f, "token {token} outside declared alphabet 1..={alphabet}")
            }
        }
    }
}

impl std::error::Error for PpmError {}

#[derive(Default)]
struct ContextCounts {
    counts: HashMap<u32, u64>,
}

/// Adaptive PPM model with escape method C and exclusion.
pub struct PpmModel {
    order: usize,
    alphabet: u32,
    /// One table per context length `0..=order`.
    tables: Vec<HashMap<Box<[u32]>, ContextCounts>>,
}

impl PpmModel {
    pub fn new(alphabet: u32, order: usize) -> Result<Self, PpmError> {
        if order > MAX_ORDER {
            return Err(PpmError::BadOrder { order });
        }
        if alphabet == 0 {
            return Err(PpmError::EmptyAlphabet);
        }
        Ok(Self { order, alphabet, tables: (0..=order).map(|_| HashMap::new()).collect() })
    }

    /// Ideal code length of `token` after `history`, in bits, then update
    /// the model.
    pub fn code_and_update(&mut self, history: &[u32], token: u32) -> Result<f64, PpmError> {
        if token == 0 || token > self.alphabet {
            return Err(PpmError::TokenOutsideAlphabet { token, alphabet: self.alphabet });
        }
        let mut bits = 0.0f64;
        let mut excluded: Vec<bool> = Vec::new();
        let mut found = false;
        let top = self.order.min(history.len());
        for o in (0..=top).rev() {
            let ctx = &history[history.len() - o..];
            let Some(entry) = self.tables[o].get(ctx) else { continue };
            // Effective counts under exclusion.
            let mut eff_total = 0u64;
            let mut eff_distinct = 0u64;
            let mut token_count = 0u64;
            for (&sym, &cnt) in &entry.counts {
                if is_excluded(&excluded, sym) {
                    continue;
                }
                eff_total += cnt;
                eff_distinct += 1;
                if sym == token {
                    token_count = cnt;
                }
            }
            if eff_distinct == 0 {
                continue; // deterministic escape, free
            }
            let denom = (eff_total + eff_distinct) as f64;
            if token_count > 0 {
                bits += -(token_count as f64 / denom).log2();
                found = true;
                break;
            }
            bits += -(eff_distinct as f64 / denom).log2();
            for &sym in entry.counts.keys() {
                exclude(&mut excluded, sym);
            }
        }
        if !found {
            // Uniform base law over the not-yet-excluded alphabet.
            let excluded_count = excluded.iter().filter(|&&e| e).count() as u64;
            let remaining = u64::from(self.alphabet) - excluded_count;
            bits += (remaining as f64).log2();
        }
        for o in 0..=top {
            let ctx = &history[history.len() - o..];
            let entry = self.tables[o].entry(ctx.into()).or_default();
            *entry.counts.entry(token).or_insert(0) += 1;
        }
        Ok(bits)
    }
}

fn is_excluded(excluded: &[bool], sym: u32) -> bool {
    excluded.get(sym as usize).copied().unwrap_or(false)
}

fn exclude(excluded: &mut Vec<bool>, sym: u32) {
    let i = sym as usize;
    if excluded.len() <= i {
        excluded.resize(i + 1, false);
    }
    excluded[i] = true;
}

/// Cumulative ideal code length after each token, in bits.
///
/// `alphabet` declares the symbol range `1..=alphabet`; tokens outside it
/// are rejected.
pub fn ppm_codelength(tokens: &[u32], alphabet: u32, order: usize) -> Result<Vec<f64>, PpmError> {
    let mut model = PpmModel::new(alphabet, order)?;
    let mut out = Vec::with_capacity(tokens.len());
    let mut acc = 0.0f64;
    for (i, &tok) in tokens.iter().enumerate() {
        acc += model.code_and_update(&tokens[..i], tok)?;
        out.push(acc);
    }
    Ok(out)
}

/// Total ideal code length of the stream, in bits.
pub fn ppm_total_codelength(tokens: &[u32], alphabet: u32, order: usize) -> Result<f64, PpmError> {
    Ok(ppm_codelength(tokens, alphabet, order)?.last().copied().unwrap_or(0.0))
}
