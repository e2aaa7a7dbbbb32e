//! Fock-basis mode configurations and outcome-set enumeration.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Upper bound on the size of a full (collision-including) outcome set.
pub const FULL_ENUMERATION_LIMIT: usize = 10_000_000;

/// Photon occupation per mode.
///
/// Configurations are ordered lexicographically by their sorted list of
/// occupied-mode indices: for three photons in nine modes `(0,1,2)` comes
/// first, then `(0,1,3)`, and for two photons in two modes the order is
/// `(2,0)`, `(1,1)`, `(0,2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeConfig {
    occupations: Vec<u32>,
}

impl ModeConfig {
    pub fn new(occupations: Vec<u32>) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::Config(
                "a mode configuration needs at least one mode".into(),
            ));
        }
        Ok(Self { occupations })
    }

    /// Single photons in each listed mode (duplicates stack).
    pub fn from_modes(m: usize, modes: &[usize]) -> Result<Self> {
        let mut occupations = vec![0u32; m];
        for &k in modes {
            if k >= m {
                return Err(Error::Config(format!(
                    "mode {k} out of range for {m} modes"
                )));
            }
            occupations[k] += 1;
        }
        Self::new(occupations)
    }

    /// One photon in each of the first `n` modes.
    pub fn first_modes(m: usize, n: usize) -> Result<Self> {
        if n > m {
            return Err(Error::Config(format!(
                "cannot place {n} single photons in {m} modes"
            )));
        }
        Self::from_modes(m, &(0..n).collect::<Vec<_>>())
    }

    pub fn occupations(&self) -> &[u32] {
        &self.occupations
    }

    pub fn modes(&self) -> usize {
        self.occupations.len()
    }

    pub fn photons(&self) -> usize {
        self.occupations.iter().map(|&k| k as usize).sum()
    }

    pub fn is_collision_free(&self) -> bool {
        self.occupations.iter().all(|&k| k <= 1)
    }

    /// Occupied-mode indices, repeated by multiplicity, ascending.
    pub fn mode_list(&self) -> Vec<usize> {
        self.occupations
            .iter()
            .enumerate()
            .flat_map(|(k, &c)| std::iter::repeat_n(k, c as usize))
            .collect()
    }

    /// `prod_k occupation_k!`
    pub fn multiplicity_factorial(&self) -> f64 {
        self.occupations
            .iter()
            .map(|&k| (1..=k).map(f64::from).product::<f64>())
            .product()
    }

    /// Checks this configuration has `m` modes and `n` photons.
    pub fn check(&self, m: usize, n: usize) -> Result<()> {
        if self.modes() != m {
            return Err(Error::Config(format!(
                "configuration {self} has {} modes, expected {m}",
                self.modes()
            )));
        }
        if self.photons() != n {
            return Err(Error::Config(format!(
                "configuration {self} has {} photons, expected {n}",
                self.photons()
            )));
        }
        Ok(())
    }

    /// CSV label: occupied indices joined by `-` for collision-free
    /// configurations, the full occupation list joined by `-` otherwise.
    pub fn label(&self, collision_free_style: bool) -> String {
        let parts: Vec<String> = if collision_free_style {
            self.mode_list().iter().map(|k| k.to_string()).collect()
        } else {
            self.occupations.iter().map(|k| k.to_string()).collect()
        };
        parts.join("-")
    }

    /// Parses a label produced by [`ModeConfig::label`].
    pub fn parse_label(text: &str, m: usize, collision_free_style: bool) -> Result<Self> {
        let nums = text
            .trim()
            .split('-')
            .map(|s| s.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("bad configuration label {text:?}: {e}")))?;
        if collision_free_style {
            Self::from_modes(m, &nums)
        } else {
            if nums.len() != m {
                return Err(Error::Config(format!(
                    "label {text:?} has {} modes, expected {m}",
                    nums.len()
                )));
            }
            Self::new(nums.into_iter().map(|k| k as u32).collect())
        }
    }
}

impl Ord for ModeConfig {
    fn cmp(&self, other: &Self) -> Ordering {
        // For equal photon numbers, ascending order of sorted mode lists is
        // descending lexicographic order of occupation vectors.
        other.occupations.cmp(&self.occupations)
    }
}

impl PartialOrd for ModeConfig {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ModeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.occupations.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Binomial coefficient as `f64`, exact while it stays below 2^53.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

/// All `C(m, n)` single-occupancy configurations in lexicographic order.
pub fn enumerate_no_collision(m: usize, n: usize) -> Result<Vec<ModeConfig>> {
    if n == 0 || m == 0 {
        return Err(Error::Domain(format!("need 1 <= n <= m, got m={m}, n={n}")));
    }
    if n > m {
        return Err(Error::Domain(format!(
            "{n} photons cannot be collision-free in {m} modes"
        )));
    }
    let count = binomial(m as u64, n as u64);
    if count > FULL_ENUMERATION_LIMIT as f64 {
        return Err(Error::SizeLimit {
            what: "no-collision outcome count",
            got: count as usize,
            limit: FULL_ENUMERATION_LIMIT,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        out.push(ModeConfig::from_modes(m, &idx)?);
        // advance to the next combination in lexicographic order
        let Some(pos) = (0..n).rev().find(|&i| idx[i] < m - n + i) else {
            break;
        };
        idx[pos] += 1;
        for i in pos + 1..n {
            idx[i] = idx[i - 1] + 1;
        }
    }
    Ok(out)
}

/// All `C(m + n - 1, n)` configurations of `n` photons in `m` modes, lexicographic.
pub fn enumerate_full(m: usize, n: usize) -> Result<Vec<ModeConfig>> {
    if n == 0 || m == 0 {
        return Err(Error::Domain(format!(
            "need m >= 1 and n >= 1, got m={m}, n={n}"
        )));
    }
    let count = binomial((m + n - 1) as u64, n as u64);
    if count > FULL_ENUMERATION_LIMIT as f64 {
        return Err(Error::SizeLimit {
            what: "full outcome count",
            got: count.min(usize::MAX as f64) as usize,
            limit: FULL_ENUMERATION_LIMIT,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    // nondecreasing index lists, advanced lexicographically
    let mut idx = vec![0usize; n];
    loop {
        out.push(ModeConfig::from_modes(m, &idx)?);
        let Some(pos) = (0..n).rev().find(|&i| idx[i] < m - 1) else {
            break;
        };
        idx[pos] += 1;
        let v = idx[pos];
        for slot in idx.iter_mut().skip(pos + 1) {
            *slot = v;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(occ: &[u32]) -> ModeConfig {
        ModeConfig::new(occ.to_vec()).unwrap()
    }

    #[test]
    fn no_collision_counts() {
        assert_eq!(enumerate_no_collision(9, 3).unwrap().len(), 84);
        assert_eq!(enumerate_no_collision(9, 4).unwrap().len(), 126);
        assert_eq!(enumerate_no_collision(9, 5).unwrap().len(), 126);
        assert_eq!(enumerate_no_collision(2, 2).unwrap(), vec![cfg(&[1, 1])]);
        assert!(matches!(
            enumerate_no_collision(3, 4),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn full_enumeration() {
        assert_eq!(
            enumerate_full(2, 2).unwrap(),
            vec![cfg(&[2, 0]), cfg(&[1, 1]), cfg(&[0, 2])]
        );
        assert_eq!(enumerate_full(9, 3).unwrap().len(), 165);
        assert_eq!(enumerate_full(1, 5).unwrap(), vec![cfg(&[5])]);
        assert!(matches!(
            enumerate_full(60, 9),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn enumerations_are_sorted_and_unique() {
        for (m, n) in [(5, 3), (9, 3), (4, 4)] {
            let full = enumerate_full(m, n).unwrap();
            assert!(full.windows(2).all(|w| w[0] < w[1]));
            let nc = enumerate_no_collision(m, n).unwrap();
            assert!(nc.windows(2).all(|w| w[0] < w[1]));
            assert!(nc.iter().all(|c| c.is_collision_free() && c.photons() == n));
            let restricted: Vec<_> = full.into_iter().filter(|c| c.is_collision_free()).collect();
            assert_eq!(restricted, nc);
        }
    }

    #[test]
    fn first_no_collision_config_is_leading_modes() {
        let nc = enumerate_no_collision(9, 3).unwrap();
        assert_eq!(nc[0].mode_list(), vec![0, 1, 2]);
        assert_eq!(nc[1].mode_list(), vec![0, 1, 3]);
        assert_eq!(nc.last().unwrap().mode_list(), vec![6, 7, 8]);
    }

    #[test]
    fn labels_round_trip() {
        let c = ModeConfig::from_modes(9, &[1, 3, 7]).unwrap();
        assert_eq!(c.label(true), "1-3-7");
        assert_eq!(ModeConfig::parse_label("1-3-7", 9, true).unwrap(), c);
        let d = cfg(&[2, 0, 1]);
        assert_eq!(d.label(false), "2-0-1");
        assert_eq!(ModeConfig::parse_label("2-0-1", 3, false).unwrap(), d);
        assert!(ModeConfig::parse_label("1-x", 9, true).is_err());
        assert!(ModeConfig::parse_label("1-9", 9, true).is_err());
    }

    #[test]
    fn multiplicity_and_checks() {
        let c = cfg(&[3, 0, 2]);
        assert_eq!(c.multiplicity_factorial(), 12.0);
        assert_eq!(c.photons(), 5);
        assert!(c.check(3, 5).is_ok());
        assert!(matches!(c.check(3, 4), Err(Error::Config(_))));
        assert!(matches!(c.check(4, 5), Err(Error::Config(_))));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(11, 3), 165.0);
        assert_eq!(binomial(9, 5), 126.0);
        assert_eq!(binomial(13, 5), 1287.0);
        assert_eq!(binomial(3, 5), 0.0);
    }
}
