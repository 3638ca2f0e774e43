//! Marginal probability laws over a natural-number alphabet `1..=K`.

use std::fmt;

/// Sum-to-one tolerance for explicit mass vectors.
const MASS_TOL: f64 = 1e-12;

/// Parametric descriptor kept alongside the mass vector when a law was
/// built from a power-law family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfDescriptor {
    /// Tail exponent parameter in `(0, 1)`; masses decay like `k^(-1/beta)`.
    pub beta: f64,
    /// Truncation rank.
    pub k_max: usize,
}

/// A probability mass function over types `k = 1..=K`.
///
/// Masses are validated on construction: non-negative and summing to one
/// within `1e-12`. Laws built from the power-law constructor are
/// non-increasing in `k` by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLaw {
    masses: Vec<f64>,
    zipf: Option<ZipfDescriptor>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LawError {
    Empty,
    NegativeMass { index: usize, value: f64 },
    NotNormalized { sum: f64 },
    BadExponent { beta: f64 },
}

impl fmt::Display for LawError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawError::Empty => write!(f, "law must have at least one type"),
            LawError::NegativeMass { index, value } => {
                write!(f, "mass at type {} is negative: {}", index + 1, value)
            }
            LawError::NotNormalized { sum } => {
                write!(f, "masses sum to {sum}, expected 1 within {MASS_TOL:e}")
            }
            LawError::BadExponent { beta } => {
                write!(f, "tail exponent beta must lie in (0, 1), got {beta}")
            }
        }
    }
}

impl std::error::Error for LawError {}

impl DiscreteLaw {
    /// Build a law from explicit masses for types `1..=masses.len()`.
    pub fn from_masses(masses: Vec<f64>) -> Result<Self, LawError> {
        if masses.is_empty() {
            return Err(LawError::Empty);
        }
        for (i, &p) in masses.iter().enumerate() {
            if p < 0.0 || !p.is_finite() {
                return Err(LawError::NegativeMass { index: i, value: p });
            }
        }
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > MASS_TOL {
            return Err(LawError::NotNormalized { sum });
        }
        Ok(Self { masses, zipf: None })
    }

    /// Truncated power law `p_k ∝ k^(-1/beta)` for `k = 1..=k_max`,
    /// renormalized over the truncated support.
    pub fn zipf(beta: f64, k_max: usize) -> Result<Self, LawError> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(LawError::BadExponent { beta });
        }
        if k_max == 0 {
            return Err(LawError::Empty);
        }
        let alpha = 1.0 / beta;
        let mut masses: Vec<f64> = (1..=k_max).map(|k| (k as f64).powf(-alpha)).collect();
        let norm: f64 = crate::sum::map_sum(k_max, |i| masses[i]);
        for p in &mut masses {
            *p /= norm;
        }
        Ok(Self { masses, zipf: Some(ZipfDescriptor { beta, k_max }) })
    }

    /// Uniform law over `n` types.
    pub fn uniform(n: usize) -> Result<Self, LawError> {
        if n == 0 {
            return Err(LawError::Empty);
        }
        let p = 1.0 / n as f64;
        Ok(Self { masses: vec![p; n], zipf: None })
    }

    /// Light-tailed negative control: `p_k ∝ 2^(-k)`, truncated at `k_max`.
    pub fn geometric_halving(k_max: usize) -> Result<Self, LawError> {
        if k_max == 0 {
            return Err(LawError::Empty);
        }
        let mut masses: Vec<f64> = (1..=k_max as u32).map(|k| 0.5f64.powi(k as i32)).collect();
        let norm: f64 = masses.iter().sum();
        for p in &mut masses {
            *p /= norm;
        }
        Ok(Self { masses, zipf: None })
    }

    /// The degenerate law with all mass on type 1.
    pub fn singleton() -> Self {
        Self { masses: vec![1.0], zipf: None }
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Mass of type `k` (1-based). Zero outside the support.
    pub fn mass(&self, k: usize) -> f64 {
        if k == 0 || k > self.masses.len() {
            0.0
        } else {
            self.masses[k - 1]
        }
    }

    /// Number of types carried by the law (including zero-mass entries).
    pub fn support_size(&self) -> usize {
        self.masses.len()
    }

    pub fn zipf_descriptor(&self) -> Option<ZipfDescriptor> {
        self.zipf
    }

    /// Smallest strictly positive mass.
    pub fn min_positive_mass(&self) -> f64 {
        self.masses.iter().copied().filter(|&p| p > 0.0).fold(f64::INFINITY, f64::min)
    }

    /// Shannon entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        crate::sum::map_sum(self.masses.len(), |i| {
            let p = self.masses[i];
            if p > 0.0 {
                -p * p.log2()
            } else {
                0.0
            }
        })
    }

    /// For power-law descriptors: the fraction of the untruncated mass that
    /// the truncation at `k_max` discards, estimated by an integral bound on
    /// the tail `sum_{k > k_max} k^(-1/beta)`. `None` for explicit laws.
    pub fn truncated_tail_mass(&self) -> Option<f64> {
        let d = self.zipf?;
        let alpha = 1.0 / d.beta;
        let partial: f64 =
            crate::sum::map_sum(d.k_max, |i| ((i + 1) as f64).powf(-alpha));
        let tail = (d.k_max as f64).powf(1.0 - alpha) / (alpha - 1.0);
        Some(tail / (partial + tail))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_masses_validate() {
        assert!(DiscreteLaw::from_masses(vec![0.75, 0.25]).is_ok());
        assert!(matches!(DiscreteLaw::from_masses(vec![]), Err(LawError::Empty)));
        assert!(matches!(
            DiscreteLaw::from_masses(vec![1.5, -0.5]),
            Err(LawError::NegativeMass { .. })
        ));
        assert!(matches!(
            DiscreteLaw::from_masses(vec![0.5, 0.4]),
            Err(LawError::NotNormalized { .. })
        ));
    }

    #[test]
    fn zipf_masses_are_normalized_and_non_increasing() {
        let law = DiscreteLaw::zipf(0.5, 10_000).unwrap();
        let sum: f64 = law.masses().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(law.masses().windows(2).all(|w| w[0] >= w[1]));
        assert!(matches!(DiscreteLaw::zipf(1.0, 10), Err(LawError::BadExponent { .. })));
        assert!(matches!(DiscreteLaw::zipf(0.0, 10), Err(LawError::BadExponent { .. })));
    }

    #[test]
    fn zipf_beta_half_is_inverse_square() {
        let law = DiscreteLaw::zipf(0.5, 100).unwrap();
        // p_2 / p_1 = 2^(-2)
        assert!((law.mass(2) / law.mass(1) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn entropy_of_uniform_is_log2_n() {
        let law = DiscreteLaw::uniform(8).unwrap();
        assert!((law.entropy_bits() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn tail_mass_shrinks_with_truncation_rank() {
        let small = DiscreteLaw::zipf(0.5, 1_000).unwrap().truncated_tail_mass().unwrap();
        let large = DiscreteLaw::zipf(0.5, 100_000).unwrap().truncated_tail_mass().unwrap();
        assert!(large < small);
        assert!(small < 1e-2);
    }
}
