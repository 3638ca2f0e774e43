//! Closed-form occupancy mathematics for IID sources.
//!
//! For a law with masses `p_k`, the expected number of distinct types in
//! `t` draws and the expected number of types drawn exactly `m` times are
//!
//! ```text
//! V(t)   = sum_k 1 - (1-p_k)^t
//! V(t|m) = sum_k C(t,m) p_k^m (1-p_k)^(t-m)
//! ```
//!
//! Powers `(1-p)^t` are evaluated as `exp(t*ln_1p(-p))` so that masses near
//! `1e-9` at lengths near `1e9` keep full precision. `V` is a completely
//! monotone (moment-representable) sequence; [`hausdorff_atoms`] extracts
//! its representing measure and [`reconstruct_from_hausdorff`] inverts it.

use std::fmt;

use statrs::function::gamma::ln_gamma;

use crate::law::DiscreteLaw;
use crate::sum;

#[derive(Debug, Clone, PartialEq)]
pub enum OccupancyError {
    BadMultiplicity { m: u64, t: u64 },
    BadExponent { beta: f64 },
    BadFloor { floor: f64 },
}

impl fmt::Display for OccupancyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OccupancyError::BadMultiplicity { m, t } => {
                write!(f, "multiplicity m={m} outside [1, t={t}]")
            }
            OccupancyError::BadExponent { beta } => {
                write!(f, "exponent beta must lie in (0, 1), got {beta}")
            }
            OccupancyError::BadFloor { floor } => {
                write!(f, "probability floor must lie in (0, 1], got {floor}")
            }
        }
    }
}

impl std::error::Error for OccupancyError {}

/// `(1-p)^t` without loss of precision for small `p`.
fn pow_one_minus(p: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    if p >= 1.0 {
        return 0.0;
    }
    (t * (-p).ln_1p()).exp()
}

/// `1 - (1-p)^t` without cancellation.
fn one_minus_pow(p: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    -(t * (-p).ln_1p()).exp_m1()
}

/// Expected number of distinct types in `t` draws: `V(t)`.
pub fn expected_types(law: &DiscreteLaw, t: u64) -> f64 {
    let masses = law.masses();
    sum::map_sum(masses.len(), |i| one_minus_pow(masses[i], t as f64))
}

/// First difference `ΔV(t) = V(t+1) - V(t) = sum_k p_k (1-p_k)^t`.
///
/// Computed from the closed form, not by subtraction, so there is no
/// cancellation even where `V` has flattened out.
pub fn expected_types_delta(law: &DiscreteLaw, t: u64) -> f64 {
    let masses = law.masses();
    sum::map_sum(masses.len(), |i| masses[i] * pow_one_minus(masses[i], t as f64))
}

/// Expected number of types occurring exactly `m` times in `t` draws:
/// `V(t|m)`.
pub fn spectrum_element(law: &DiscreteLaw, t: u64, m: u64) -> Result<f64, OccupancyError> {
    if m < 1 || m > t {
        return Err(OccupancyError::BadMultiplicity { m, t });
    }
    let (tf, mf) = (t as f64, m as f64);
    let ln_choose = ln_gamma(tf + 1.0) - ln_gamma(mf + 1.0) - ln_gamma(tf - mf + 1.0);
    let masses = law.masses();
    Ok(sum::map_sum(masses.len(), |i| {
        let p = masses[i];
        if p <= 0.0 {
            0.0
        } else if p >= 1.0 {
            if m == t {
                1.0
            } else {
                0.0
            }
        } else {
            (ln_choose + mf * p.ln() + (tf - mf) * (-p).ln_1p()).exp()
        }
    }))
}

/// All spectrum elements `V(t|1) ..= V(t|m_max)` for one `t`.
///
/// Uses the binomial term recurrence per type where the starting term
/// `(1-p)^t` is representable, and falls back to the log-gamma form when it
/// underflows.
pub fn spectrum_row(law: &DiscreteLaw, t: u64, m_max: u64) -> Result<Vec<f64>, OccupancyError> {
    if m_max < 1 || m_max > t {
        return Err(OccupancyError::BadMultiplicity { m: m_max, t });
    }
    let tf = t as f64;
    let masses = law.masses();
    let width = m_max as usize;
    Ok(sum::map_sum_vec(masses.len(), width, |i, row| {
        let p = masses[i];
        if p <= 0.0 {
            return;
        }
        if p >= 1.0 {
            if t <= m_max {
                row[(t - 1) as usize] = 1.0;
            }
            return;
        }
        let start = pow_one_minus(p, tf);
        if start > 1e-280 {
            let ratio = p / (1.0 - p);
            let mut term = start;
            for m in 1..=m_max {
                term *= (tf - (m as f64) + 1.0) / (m as f64) * ratio;
                row[(m - 1) as usize] = term;
            }
        } else {
            let lt = ln_gamma(tf + 1.0);
            for m in 1..=m_max {
                let mf = m as f64;
                let ln_choose = lt - ln_gamma(mf + 1.0) - ln_gamma(tf - mf + 1.0);
                row[(m - 1) as usize] =
                    (ln_choose + mf * p.ln() + (tf - mf) * (-p).ln_1p()).exp();
            }
        }
    }))
}

/// Exact occupancy curve on a grid of lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyCurve {
    /// Increasing sequence of lengths.
    pub t_grid: Vec<u64>,
    /// `V(t)` at each grid point.
    pub v: Vec<f64>,
    /// `ΔV(t)` at each grid point.
    pub dv: Vec<f64>,
    /// Optional spectrum columns: `spectrum[i][m-1] = V(t_i | m)`.
    pub spectrum: Option<Vec<Vec<f64>>>,
}

impl OccupancyCurve {
    /// Evaluate the exact curve for an IID law. `m_max = 0` skips the
    /// spectrum columns; a grid point `t < m` leaves `V(t|m) = 0`.
    pub fn exact(law: &DiscreteLaw, t_grid: &[u64], m_max: u64) -> Result<Self, OccupancyError> {
        let mut v = Vec::with_capacity(t_grid.len());
        let mut dv = Vec::with_capacity(t_grid.len());
        let mut spectrum = if m_max > 0 { Some(Vec::with_capacity(t_grid.len())) } else { None };
        for &t in t_grid {
            v.push(expected_types(law, t));
            dv.push(expected_types_delta(law, t));
            if let Some(cols) = spectrum.as_mut() {
                if t == 0 {
                    cols.push(vec![0.0; m_max as usize]);
                } else {
                    let cap = m_max.min(t);
                    let mut row = spectrum_row(law, t, cap)?;
                    row.resize(m_max as usize, 0.0);
                    cols.push(row);
                }
            }
        }
        Ok(Self { t_grid: t_grid.to_vec(), v, dv, spectrum })
    }

    /// Serialize as CSV with header `t,V,dV,V1,...,Vm_max`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        let m_max = self.spectrum.as_ref().map_or(0, |s| s.first().map_or(0, Vec::len));
        write!(w, "t,V,dV")?;
        for m in 1..=m_max {
            write!(w, ",V{m}")?;
        }
        writeln!(w)?;
        for (i, &t) in self.t_grid.iter().enumerate() {
            write!(w, "{t},{},{}", self.v[i], self.dv[i])?;
            if let Some(cols) = &self.spectrum {
                for x in &cols[i] {
                    write!(w, ",{x}")?;
                }
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// The representing measure of an occupancy sequence: atoms in `(0,1)`
/// plus point masses at the endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct HausdorffMeasure {
    /// `(location, mass)` pairs with locations strictly inside `(0,1)`,
    /// sorted by location.
    pub atoms: Vec<(f64, f64)>,
    pub mass_at_zero: f64,
    pub mass_at_one: f64,
}

impl HausdorffMeasure {
    pub fn total_mass(&self) -> f64 {
        self.mass_at_zero + self.mass_at_one + self.atoms.iter().map(|&(_, w)| w).sum::<f64>()
    }

    /// Serialize as CSV `p,mass` (endpoints written as `0` and `1` rows
    /// when they carry mass).
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "p,mass")?;
        if self.mass_at_zero > 0.0 {
            writeln!(w, "0,{}", self.mass_at_zero)?;
        }
        for &(p, mass) in &self.atoms {
            writeln!(w, "{p},{mass}")?;
        }
        if self.mass_at_one > 0.0 {
            writeln!(w, "1,{}", self.mass_at_one)?;
        }
        Ok(())
    }
}

/// The representing measure of `V` for an IID law: an atom of mass `p` at
/// location `p` for every distinct mass value, coincident values merged.
pub fn hausdorff_atoms(law: &DiscreteLaw) -> HausdorffMeasure {
    let mut masses: Vec<f64> = law.masses().iter().copied().filter(|&p| p > 0.0).collect();
    masses.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    let mut mass_at_one = 0.0;
    for p in masses {
        if p >= 1.0 {
            mass_at_one += p;
        } else if let Some(last) = atoms.last_mut().filter(|(loc, _)| *loc == p) {
            last.1 += p;
        } else {
            atoms.push((p, p));
        }
    }
    HausdorffMeasure { atoms, mass_at_zero: 0.0, mass_at_one }
}

/// Rebuild `V(t)` from a representing measure:
/// `t*mu({0}) + sum_atoms w*(1-(1-p)^t)/p + mu({1})` (endpoint branch
/// active for `t >= 1`).
pub fn reconstruct_from_hausdorff(mu: &HausdorffMeasure, t: u64) -> f64 {
    if t == 0 {
        return 0.0;
    }
    let tf = t as f64;
    let interior = sum::map_sum(mu.atoms.len(), |i| {
        let (p, w) = mu.atoms[i];
        w * one_minus_pow(p, tf) / p
    });
    tf * mu.mass_at_zero + interior + mu.mass_at_one
}

/// Tail constants extracted from a law for a target exponent `beta`.
///
/// The certificate is: for every `p` in `[p_floor, 1]`,
///
/// ```text
/// #{k : p_k >= p}          <= c0 * p^(-beta)        (c0 holds for all p > 0)
/// sum_k p_k [p_k <= p]     >= c2 * p^(1-beta)
/// ```
///
/// `c0` is the exact supremum of the count ratio, attained on the atom
/// grid. `c2` is the exact infimum of the mass-tail ratio over the floored
/// range; the infimum of a step function against a growing power is
/// attained at left limits of atoms, which is how it is evaluated.
/// `c2_half_range` is the same infimum over the upper half of the
/// log-range, a stability diagnostic: laws with genuinely power-law tails
/// give `c2 ≈ c2_half_range`, light-tailed laws give `c2 << c2_half_range`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailConstants {
    pub beta: f64,
    pub c0: f64,
    pub c2: f64,
    pub c2_half_range: f64,
    /// Lower end of the certified probability range.
    pub p_floor: f64,
    /// For truncated power-law descriptors: discarded tail mass fraction.
    pub truncated_tail_mass: Option<f64>,
}

/// Extract tail constants with the floor set to the smallest positive mass
/// (the whole supported range of the law).
pub fn zipf_tail_constants(law: &DiscreteLaw, beta: f64) -> Result<TailConstants, OccupancyError> {
    let floor = law.min_positive_mass();
    zipf_tail_constants_with_floor(law, beta, floor)
}

/// Extract tail constants certified on `[p_floor, 1]`.
///
/// Verifiers pass the floor their grid actually requires; a floor below
/// the law's truncation leaves an uncovered band where the mass tail is
/// zero, and `c2` is then 0.
pub fn zipf_tail_constants_with_floor(
    law: &DiscreteLaw,
    beta: f64,
    p_floor: f64,
) -> Result<TailConstants, OccupancyError> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(OccupancyError::BadExponent { beta });
    }
    if !(p_floor > 0.0 && p_floor <= 1.0) {
        return Err(OccupancyError::BadFloor { floor: p_floor });
    }
    let mut masses: Vec<f64> = law.masses().iter().copied().filter(|&p| p > 0.0).collect();
    masses.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // c0: max over atoms (descending) of count(p_j >= p) * p^beta.
    let mut c0 = 0.0f64;
    let n = masses.len();
    for i in (0..n).rev() {
        // Last index of a run of equal values going down = first occurrence
        // ascending; count of p_j >= masses[i] is n - i.
        if i == 0 || masses[i - 1] != masses[i] {
            let cand = (n - i) as f64 * masses[i].powf(beta);
            c0 = c0.max(cand);
        }
    }

    let c2 = mass_tail_infimum(&masses, beta, p_floor);
    let c2_half_range = mass_tail_infimum(&masses, beta, p_floor.sqrt());

    Ok(TailConstants {
        beta,
        c0,
        c2,
        c2_half_range,
        p_floor,
        truncated_tail_mass: law.truncated_tail_mass(),
    })
}

/// Exact `inf_{p in [lo, 1]} F(p) p^(beta-1)` where
/// `F(p) = sum_k p_k [p_k <= p]` and `masses` is sorted ascending.
fn mass_tail_infimum(masses: &[f64], beta: f64, lo: f64) -> f64 {
    // Breakpoints: lo, every distinct atom in (lo, 1], and 1 itself.
    // On [b_i, b_{i+1}) the step function F is constant at F(b_i), so the
    // infimum over the interval is F(b_i) * b_{i+1}^(beta-1); the closed
    // right end contributes F(1) * 1 = total mass.
    let mut breaks: Vec<f64> = Vec::with_capacity(masses.len() + 2);
    breaks.push(lo);
    for &p in masses.iter().filter(|&&p| p > lo && p < 1.0) {
        if *breaks.last().unwrap() != p {
            breaks.push(p);
        }
    }
    breaks.push(1.0);

    let total: f64 = masses.iter().sum();
    let mut inf = total; // value at the closed endpoint p = 1
    let mut idx = 0usize; // masses consumed into F so far
    let mut f_cum = 0.0f64;
    for w in breaks.windows(2) {
        let (x, y) = (w[0], w[1]);
        while idx < masses.len() && masses[idx] <= x {
            f_cum += masses[idx];
            idx += 1;
        }
        inf = inf.min(f_cum * y.powf(beta - 1.0));
    }
    inf
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Brute-force oracle: enumerate all `K^t` sequences of an IID law and
    /// average the distinct-type count and per-multiplicity type counts.
    fn enumerate_occupancy(masses: &[f64], t: usize) -> (f64, Vec<f64>) {
        let k = masses.len();
        let mut v = 0.0;
        let mut spectrum = vec![0.0; t];
        let mut seq = vec![0usize; t];
        loop {
            let mut prob = 1.0;
            let mut counts = vec![0usize; k];
            for &s in &seq {
                prob *= masses[s];
                counts[s] += 1;
            }
            let distinct = counts.iter().filter(|&&c| c > 0).count();
            v += prob * distinct as f64;
            for &c in counts.iter().filter(|&&c| c > 0) {
                spectrum[c - 1] += prob;
            }
            // Odometer increment.
            let mut pos = 0;
            loop {
                if pos == t {
                    return (v, spectrum);
                }
                seq[pos] += 1;
                if seq[pos] < k {
                    break;
                }
                seq[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn expected_types_degenerate_and_unit_length() {
        let single = DiscreteLaw::singleton();
        assert_eq!(expected_types(&single, 5), 1.0);
        assert_eq!(expected_types(&single, 0), 0.0);
        let law = DiscreteLaw::from_masses(vec![0.2, 0.3, 0.5]).unwrap();
        assert_abs_diff_eq!(expected_types(&law, 1), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn expected_types_matches_enumeration() {
        let law = DiscreteLaw::from_masses(vec![0.75, 0.25]).unwrap();
        assert_abs_diff_eq!(expected_types(&law, 2), 1.375, epsilon = 1e-12);
        for t in 0..=8 {
            let (v, _) = enumerate_occupancy(law.masses(), t);
            assert_abs_diff_eq!(expected_types(&law, t as u64), v, epsilon = 1e-10);
        }
        let law3 = DiscreteLaw::from_masses(vec![0.5, 0.3, 0.2]).unwrap();
        for t in 0..=6 {
            let (v, _) = enumerate_occupancy(law3.masses(), t);
            assert_abs_diff_eq!(expected_types(&law3, t as u64), v, epsilon = 1e-10);
        }
    }

    #[test]
    fn spectrum_matches_enumeration_and_hand_values() {
        let law = DiscreteLaw::uniform(2).unwrap();
        assert_abs_diff_eq!(spectrum_element(&law, 2, 1).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spectrum_element(&law, 2, 2).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(spectrum_element(&law, 1, 1).unwrap(), 1.0, epsilon = 1e-12);

        let law = DiscreteLaw::from_masses(vec![0.6, 0.3, 0.1]).unwrap();
        for t in 1..=7u64 {
            let (_, spec) = enumerate_occupancy(law.masses(), t as usize);
            let row = spectrum_row(&law, t, t).unwrap();
            for m in 1..=t as usize {
                assert_abs_diff_eq!(row[m - 1], spec[m - 1], epsilon = 1e-10);
                assert_abs_diff_eq!(
                    spectrum_element(&law, t, m as u64).unwrap(),
                    spec[m - 1],
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn spectrum_rejects_bad_multiplicity() {
        let law = DiscreteLaw::uniform(2).unwrap();
        assert!(spectrum_element(&law, 2, 0).is_err());
        assert!(spectrum_element(&law, 2, 3).is_err());
    }

    #[test]
    fn hapax_identity_holds_to_high_precision() {
        // V(t|1)/t = ΔV(t-1) for IID laws.
        let laws = [
            DiscreteLaw::uniform(4).unwrap(),
            DiscreteLaw::zipf(0.5, 10_000).unwrap(),
            DiscreteLaw::from_masses(vec![0.75, 0.25]).unwrap(),
        ];
        for law in &laws {
            for t in [1u64, 2, 10, 100, 1_000, 1_000_000] {
                let lhs = spectrum_element(law, t, 1).unwrap() / t as f64;
                let rhs = expected_types_delta(law, t - 1);
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn curve_is_monotone_concave_with_shrinking_rate() {
        let law = DiscreteLaw::zipf(0.5, 100_000).unwrap();
        let grid: Vec<u64> = (0..=60).map(|i| i * 50).collect();
        let curve = OccupancyCurve::exact(&law, &grid, 0).unwrap();
        assert_eq!(curve.v[0], 0.0);
        for w in curve.v.windows(2) {
            assert!(w[1] >= w[0]);
        }
        for w in curve.dv.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        let ratios: Vec<f64> = curve
            .t_grid
            .iter()
            .zip(&curve.v)
            .filter(|(&t, _)| t > 0)
            .map(|(&t, &v)| v / t as f64)
            .collect();
        for w in ratios.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        assert!(ratios[0] <= 1.0 + 1e-12);
    }

    #[test]
    fn hausdorff_atoms_merge_and_classify_endpoints() {
        let single = hausdorff_atoms(&DiscreteLaw::singleton());
        assert_eq!(single.mass_at_one, 1.0);
        assert!(single.atoms.is_empty());

        let uniform = hausdorff_atoms(&DiscreteLaw::uniform(2).unwrap());
        assert_eq!(uniform.atoms, vec![(0.5, 1.0)]);

        let skew = hausdorff_atoms(&DiscreteLaw::from_masses(vec![0.75, 0.25]).unwrap());
        assert_eq!(skew.atoms, vec![(0.25, 0.25), (0.75, 0.75)]);
        assert_abs_diff_eq!(skew.total_mass(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn reconstruction_inverts_the_measure() {
        let uniform = DiscreteLaw::uniform(2).unwrap();
        let mu = hausdorff_atoms(&uniform);
        assert_abs_diff_eq!(reconstruct_from_hausdorff(&mu, 2), 1.5, epsilon = 1e-12);
        assert_eq!(reconstruct_from_hausdorff(&mu, 0), 0.0);

        let linear = HausdorffMeasure { atoms: vec![], mass_at_zero: 1.0, mass_at_one: 0.0 };
        assert_eq!(reconstruct_from_hausdorff(&linear, 7), 7.0);

        let laws = [
            DiscreteLaw::singleton(),
            DiscreteLaw::uniform(5).unwrap(),
            DiscreteLaw::zipf(0.5, 1_000).unwrap(),
            DiscreteLaw::zipf(0.8, 1_000).unwrap(),
            DiscreteLaw::from_masses(vec![0.75, 0.25]).unwrap(),
        ];
        for law in &laws {
            let mu = hausdorff_atoms(law);
            for t in [0u64, 1, 10, 1_000, 1_000_000] {
                assert_abs_diff_eq!(
                    reconstruct_from_hausdorff(&mu, t),
                    expected_types(law, t),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn tail_constants_hand_values() {
        let single = zipf_tail_constants(&DiscreteLaw::singleton(), 0.5).unwrap();
        assert_abs_diff_eq!(single.c0, 1.0, epsilon = 1e-12);

        let uniform = zipf_tail_constants(&DiscreteLaw::uniform(16).unwrap(), 0.5).unwrap();
        assert_abs_diff_eq!(uniform.c0, 4.0, epsilon = 1e-12);

        assert!(zipf_tail_constants(&DiscreteLaw::singleton(), 1.5).is_err());
    }

    #[test]
    fn tail_constants_certify_their_range() {
        // The extracted constants must actually satisfy the defining
        // inequalities at arbitrary probe points inside the range.
        let law = DiscreteLaw::zipf(0.5, 5_000).unwrap();
        let tc = zipf_tail_constants_with_floor(&law, 0.5, 1e-4).unwrap();
        assert!(tc.c2 > 0.0);
        let masses = law.masses();
        for i in 0..400 {
            let p = 1e-4f64 * (1.0f64 / 1e-4).powf(i as f64 / 399.0);
            let count = masses.iter().filter(|&&q| q >= p).count() as f64;
            assert!(count <= tc.c0 * p.powf(-0.5) * (1.0 + 1e-12));
            let tail: f64 = masses.iter().filter(|&&q| q <= p).sum();
            assert!(
                tail >= tc.c2 * p.powf(0.5) * (1.0 - 1e-12),
                "p={p} tail={tail} bound={}",
                tc.c2 * p.powf(0.5)
            );
        }
    }

    #[test]
    fn tail_constants_stable_under_doubled_truncation() {
        // Same restricted range, K_max doubled: both constants move < 2%.
        let floor = 2.5e-5;
        let a = zipf_tail_constants_with_floor(&DiscreteLaw::zipf(0.5, 100_000).unwrap(), 0.5, floor)
            .unwrap();
        let b = zipf_tail_constants_with_floor(&DiscreteLaw::zipf(0.5, 200_000).unwrap(), 0.5, floor)
            .unwrap();
        assert!((a.c0 / b.c0 - 1.0).abs() < 0.02, "c0: {} vs {}", a.c0, b.c0);
        assert!((a.c2 / b.c2 - 1.0).abs() < 0.02, "c2: {} vs {}", a.c2, b.c2);
        assert!(a.c0 > 0.0 && a.c2 > 0.0);
    }

    #[test]
    fn light_tail_degrades_c2_on_widening_range() {
        let law = DiscreteLaw::geometric_halving(40).unwrap();
        let tc = zipf_tail_constants_with_floor(&law, 0.5, 2.5e-5).unwrap();
        assert!(tc.c2 < 0.5 * tc.c2_half_range, "c2={} half={}", tc.c2, tc.c2_half_range);
    }
}
