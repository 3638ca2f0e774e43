//! Occupancy quantities in exact rational arithmetic.
//!
//! Floating finite differences of order `m` suffer catastrophic
//! cancellation, so the identity between occurrence spectra and the signed
//! binomial-weighted differences of `V` (the Taylor elements) is checked
//! here with `BigRational` values instead. This path is an oracle, not a
//! production path: lengths are capped at [`MAX_EXACT_LENGTH`].

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Largest length admitted by the exact path.
pub const MAX_EXACT_LENGTH: u64 = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum RationalError {
    Empty,
    NotNormalized,
    NegativeMass { index: usize },
    LengthCap { t: u64 },
    BadMultiplicity { m: u64, t: u64 },
    TableTooShort { need: usize, have: usize },
}

impl fmt::Display for RationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalError::Empty => write!(f, "law must have at least one type"),
            RationalError::NotNormalized => write!(f, "rational masses must sum to exactly 1"),
            RationalError::NegativeMass { index } => {
                write!(f, "mass at type {} is negative", index + 1)
            }
            RationalError::LengthCap { t } => {
                write!(f, "exact mode rejects t={t} > {MAX_EXACT_LENGTH} (combinatorial blowup)")
            }
            RationalError::BadMultiplicity { m, t } => {
                write!(f, "multiplicity m={m} outside [1, t={t}]")
            }
            RationalError::TableTooShort { need, have } => {
                write!(f, "value table holds {have} entries, need {need}")
            }
        }
    }
}

impl std::error::Error for RationalError {}

/// A probability law with exactly representable masses.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalLaw {
    masses: Vec<BigRational>,
}

impl RationalLaw {
    pub fn new(masses: Vec<BigRational>) -> Result<Self, RationalError> {
        if masses.is_empty() {
            return Err(RationalError::Empty);
        }
        for (i, p) in masses.iter().enumerate() {
            if p.is_negative() {
                return Err(RationalError::NegativeMass { index: i });
            }
        }
        let total: BigRational = masses.iter().sum();
        if !total.is_one() {
            return Err(RationalError::NotNormalized);
        }
        Ok(Self { masses })
    }

    /// Masses `numerators[i] / denominator`; numerators must sum to the
    /// denominator.
    pub fn from_integers(numerators: &[u64], denominator: u64) -> Result<Self, RationalError> {
        let den = BigInt::from(denominator);
        let masses = numerators
            .iter()
            .map(|&n| BigRational::new(BigInt::from(n), den.clone()))
            .collect();
        Self::new(masses)
    }

    pub fn masses(&self) -> &[BigRational] {
        &self.masses
    }

    /// Nearest floating-point law, for cross-checking against the f64 path.
    pub fn to_f64_masses(&self) -> Vec<f64> {
        self.masses
            .iter()
            .map(|r| {
                let n = r.numer().to_string().parse::<f64>().unwrap();
                let d = r.denom().to_string().parse::<f64>().unwrap();
                n / d
            })
            .collect()
    }
}

fn rat_pow(x: &BigRational, n: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = x.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact `V(t)` for `t = 0..=t_max`.
pub fn expected_types_table(law: &RationalLaw, t_max: u64) -> Result<Vec<BigRational>, RationalError> {
    if t_max > MAX_EXACT_LENGTH {
        return Err(RationalError::LengthCap { t: t_max });
    }
    let one = BigRational::one();
    let mut table = Vec::with_capacity(t_max as usize + 1);
    // Running powers (1-p_k)^t, advanced one step per t.
    let mut pows: Vec<BigRational> = law.masses.iter().map(|_| one.clone()).collect();
    let bases: Vec<BigRational> = law.masses.iter().map(|p| &one - p).collect();
    for _t in 0..=t_max {
        let v: BigRational = pows.iter().map(|q| &one - q).sum();
        table.push(v);
        for (q, b) in pows.iter_mut().zip(&bases) {
            *q *= b;
        }
    }
    Ok(table)
}

/// Exact spectrum element `V(t|m) = sum_k C(t,m) p_k^m (1-p_k)^(t-m)`.
pub fn spectrum_element(law: &RationalLaw, t: u64, m: u64) -> Result<BigRational, RationalError> {
    if t > MAX_EXACT_LENGTH {
        return Err(RationalError::LengthCap { t });
    }
    if m < 1 || m > t {
        return Err(RationalError::BadMultiplicity { m, t });
    }
    let choose = BigRational::from_integer(binomial(t, m));
    let one = BigRational::one();
    let mut acc = BigRational::zero();
    for p in &law.masses {
        acc += &choose * rat_pow(p, m) * rat_pow(&(&one - p), t - m);
    }
    Ok(acc)
}

/// Taylor element `v(t‖m) = (-1)^(m+1) C(t,m) Δ^m v(t-m)` computed from a
/// table of exact values `v[0..=t]`.
pub fn taylor_element(values: &[BigRational], t: u64, m: u64) -> Result<BigRational, RationalError> {
    if t > MAX_EXACT_LENGTH {
        return Err(RationalError::LengthCap { t });
    }
    if m < 1 || m > t {
        return Err(RationalError::BadMultiplicity { m, t });
    }
    let need = t as usize + 1;
    if values.len() < need {
        return Err(RationalError::TableTooShort { need, have: values.len() });
    }
    // Δ^m v(x) = sum_i (-1)^(m-i) C(m,i) v(x+i) at x = t-m.
    let x = (t - m) as usize;
    let mut diff = BigRational::zero();
    for i in 0..=m {
        let term = BigRational::from_integer(binomial(m, i)) * &values[x + i as usize];
        if (m - i) % 2 == 0 {
            diff += term;
        } else {
            diff -= term;
        }
    }
    let sign = if (m + 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    Ok(BigRational::from_integer(sign * binomial(t, m)) * diff)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law_34_14() -> RationalLaw {
        RationalLaw::from_integers(&[3, 1], 4).unwrap()
    }

    #[test]
    fn construction_validates_exactly() {
        assert!(RationalLaw::from_integers(&[1, 1], 2).is_ok());
        assert!(matches!(
            RationalLaw::from_integers(&[1, 1], 3),
            Err(RationalError::NotNormalized)
        ));
        assert!(matches!(RationalLaw::from_integers(&[], 1), Err(RationalError::Empty)));
    }

    #[test]
    fn table_matches_hand_enumeration() {
        let law = law_34_14();
        let table = expected_types_table(&law, 2).unwrap();
        assert!(table[0].is_zero());
        assert!(table[1].is_one());
        // V(2) = 11/8 for masses (3/4, 1/4).
        assert_eq!(table[2], BigRational::new(BigInt::from(11), BigInt::from(8)));
    }

    #[test]
    fn hapax_taylor_element_is_t_times_delta() {
        // v(t‖1) = t * (V(t) - V(t-1)).
        let law = law_34_14();
        let table = expected_types_table(&law, 20).unwrap();
        for t in 1..=20u64 {
            let lhs = taylor_element(&table, t, 1).unwrap();
            let delta = &table[t as usize] - &table[t as usize - 1];
            let rhs = BigRational::from_integer(BigInt::from(t)) * delta;
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn spectrum_equals_taylor_for_iid_laws() {
        let laws = [
            RationalLaw::from_integers(&[1, 1], 2).unwrap(),
            law_34_14(),
            RationalLaw::from_integers(&[5, 3, 2], 10).unwrap(),
        ];
        for law in &laws {
            let table = expected_types_table(law, 16).unwrap();
            for t in 1..=16u64 {
                for m in 1..=t {
                    assert_eq!(
                        spectrum_element(law, t, m).unwrap(),
                        taylor_element(&table, t, m).unwrap(),
                        "t={t} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn uniform_pair_t2_m2_is_one_half() {
        let law = RationalLaw::from_integers(&[1, 1], 2).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(spectrum_element(&law, 2, 2).unwrap(), half);
        let table = expected_types_table(&law, 2).unwrap();
        assert_eq!(taylor_element(&table, 2, 2).unwrap(), half);
    }

    #[test]
    fn taylor_elements_sum_to_v_and_weighted_sum_to_t() {
        let law = law_34_14();
        let t = 10u64;
        let table = expected_types_table(&law, t).unwrap();
        let mut sum = BigRational::zero();
        let mut weighted = BigRational::zero();
        for m in 1..=t {
            let v = taylor_element(&table, t, m).unwrap();
            sum += &v;
            weighted += BigRational::from_integer(BigInt::from(m)) * &v;
        }
        assert_eq!(sum, table[t as usize]);
        assert_eq!(weighted, BigRational::from_integer(BigInt::from(t)));
    }

    #[test]
    fn length_cap_is_enforced() {
        let law = law_34_14();
        assert!(matches!(
            expected_types_table(&law, 65),
            Err(RationalError::LengthCap { t: 65 })
        ));
        let table = expected_types_table(&law, 10).unwrap();
        assert!(taylor_element(&table, 65, 1).is_err());
    }
}
