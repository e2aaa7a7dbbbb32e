//! Exact and randomized matrix permanents.
//!
//! [`perm_ryser`] is the production kernel. [`perm_naive`] and
//! [`gurvits_exhaustive`] are brute-force references with hard size caps.
//! [`gurvits_estimate`] is the ±1 sign-pattern Monte Carlo estimator.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::rng::{self, Purpose};

/// Largest matrix accepted by [`perm_naive`].
pub const NAIVE_MAX_N: usize = 9;
/// Largest matrix accepted by [`gurvits_exhaustive`].
pub const EXHAUSTIVE_MAX_N: usize = 20;
/// Samples per deterministic Monte Carlo partition.
pub const GURVITS_PARTITION: u64 = 1 << 14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Multiplication and addition counts of a permanent algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpCount {
    pub multiplications: u64,
    pub additions: u64,
}

/// Monte Carlo estimate of a permanent.
///
/// `std_error` is the sample standard deviation of the per-sample estimates
/// divided by `sqrt(num_samples)`. For complex samples the deviation is taken
/// over `|x - mean|^2`, i.e. the real and imaginary variances are summed.
/// A single sample reports a standard error of zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermanentEstimate {
    pub mean: Complex64,
    pub std_error: f64,
    pub num_samples: u64,
}

/// Sum over all `n!` permutations of the diagonal products.
pub fn perm_naive(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.square_dim()?;
    if n > NAIVE_MAX_N {
        return Err(Error::SizeLimit {
            what: "naive permanent size",
            got: n,
            limit: NAIVE_MAX_N,
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = ZERO;
    permute_sum(m, &mut perm, 0, &mut total);
    Ok(total)
}

fn permute_sum(m: &ComplexMatrix, perm: &mut [usize], k: usize, total: &mut Complex64) {
    let n = perm.len();
    if k == n {
        *total += perm
            .iter()
            .enumerate()
            .fold(ONE, |acc, (i, &j)| acc * m[(i, j)]);
        return;
    }
    for s in k..n {
        perm.swap(k, s);
        permute_sum(m, perm, k + 1, total);
        perm.swap(k, s);
    }
}

/// Ryser's inclusion-exclusion formula with Gray-code subset order.
///
/// Successive subsets differ in one column, so each step adds or subtracts
/// a single column into the running row sums before taking their product.
pub fn perm_ryser(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.square_dim()?;
    if n >= 64 {
        return Err(Error::SizeLimit {
            what: "Ryser permanent size",
            got: n,
            limit: 63,
        });
    }
    let mut row_sums = vec![ZERO; n];
    let mut total = ZERO;
    let mut prev_gray = 0u64;
    for k in 1..(1u64 << n) {
        let gray = k ^ (k >> 1);
        let j = (gray ^ prev_gray).trailing_zeros() as usize;
        if gray & (1 << j) != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += m[(i, j)];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= m[(i, j)];
            }
        }
        prev_gray = gray;
        let prod = row_sums.iter().fold(ONE, |acc, s| acc * s);
        // sign (-1)^(n - |S|)
        if (n as u32 - gray.count_ones()).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

/// Closed-form operation counts of Ryser's formula for an `n x n` matrix:
/// `(2^n - 1)(n - 1)` multiplications and `(2^n - 2)(n + 1)` additions.
pub fn ryser_op_counts(n: usize) -> Result<OpCount> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "Ryser op counts need n >= 2, got {n}"
        )));
    }
    if n >= 63 {
        return Err(Error::SizeLimit {
            what: "Ryser op-count size",
            got: n,
            limit: 62,
        });
    }
    let subsets = 1u64 << n;
    let n = n as u64;
    Ok(OpCount {
        multiplications: (subsets - 1) * (n - 1),
        additions: (subsets - 2) * (n + 1),
    })
}

/// Gurvits estimator value for one sign pattern: `prod_j x_j * prod_i (sum_j x_j m_ij)`.
/// Bit `j` of `signs` set means `x_j = -1`.
fn sign_pattern_value(m: &ComplexMatrix, signs: &[u64]) -> Complex64 {
    let n = m.rows();
    let negative = |j: usize| signs[j / 64] >> (j % 64) & 1 == 1;
    let mut prod = ONE;
    for i in 0..n {
        let mut s = ZERO;
        for (j, &z) in m.row(i).iter().enumerate() {
            if negative(j) {
                s -= z;
            } else {
                s += z;
            }
        }
        prod *= s;
    }
    let flips: u32 = signs.iter().map(|w| w.count_ones()).sum();
    if flips % 2 == 1 {
        -prod
    } else {
        prod
    }
}

/// Running mean and sum of squared deviations (Welford), mergeable across partitions.
#[derive(Debug, Clone, Copy)]
struct Moments {
    count: u64,
    mean: Complex64,
    m2: f64,
}

impl Moments {
    const EMPTY: Moments = Moments {
        count: 0,
        mean: ZERO,
        m2: 0.0,
    };

    fn push(&mut self, x: Complex64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        let delta2 = x - self.mean;
        self.m2 += delta.re * delta2.re + delta.im * delta2.im;
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Moments {
            count,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta.norm_sqr() * self.count as f64 * w,
        }
    }
}

/// Randomized permanent estimate from `num_samples` uniform sign patterns.
///
/// Samples are split into partitions of [`GURVITS_PARTITION`]; partition `k`
/// draws from the ChaCha8 stream derived from `(seed, k)` and partitions are
/// merged in index order, so the result does not depend on thread count.
pub fn gurvits_estimate(
    m: &ComplexMatrix,
    num_samples: u64,
    seed: u64,
) -> Result<PermanentEstimate> {
    let n = m.square_dim()?;
    if num_samples == 0 {
        return Err(Error::Domain("num_samples must be positive".into()));
    }
    let words = n.div_ceil(64);
    let last_mask = match n % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    };
    let partitions = num_samples.div_ceil(GURVITS_PARTITION);
    let partials: Vec<Moments> = (0..partitions)
        .into_par_iter()
        .map(|p| {
            let start = p * GURVITS_PARTITION;
            let len = GURVITS_PARTITION.min(num_samples - start);
            let mut rng = rng::stream(seed, Purpose::GurvitsSigns, p);
            let mut signs = vec![0u64; words];
            let mut acc = Moments::EMPTY;
            for _ in 0..len {
                for w in signs.iter_mut() {
                    *w = rng.random();
                }
                signs[words - 1] &= last_mask;
                acc.push(sign_pattern_value(m, &signs));
            }
            acc
        })
        .collect();
    let total = partials.into_iter().fold(Moments::EMPTY, Moments::merge);
    let std_error = if total.count > 1 {
        (total.m2 / (total.count - 1) as f64).sqrt() / (total.count as f64).sqrt()
    } else {
        0.0
    };
    Ok(PermanentEstimate {
        mean: total.mean,
        std_error,
        num_samples: total.count,
    })
}

/// Average of the Gurvits estimator over all `2^n` sign patterns, which is
/// exactly the permanent.
pub fn gurvits_exhaustive(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.square_dim()?;
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::SizeLimit {
            what: "exhaustive Gurvits size",
            got: n,
            limit: EXHAUSTIVE_MAX_N,
        });
    }
    // Fixing x_0 = +1 halves the work: flipping every sign leaves the
    // per-pattern value unchanged since (-1)^n * (-1)^n = 1.
    let free = n - 1;
    let mut row_sums: Vec<Complex64> = (0..n).map(|i| m.row(i).iter().sum()).collect();
    let mut total = row_sums.iter().fold(ONE, |acc, s| acc * s);
    let mut prev_gray = 0u64;
    for k in 1..(1u64 << free) {
        let gray = k ^ (k >> 1);
        let bit = (gray ^ prev_gray).trailing_zeros() as usize;
        let col = bit + 1;
        // column flips to -1 when its bit turns on, back to +1 when it turns off
        let factor = if gray & (1 << bit) != 0 { -2.0 } else { 2.0 };
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += m[(i, col)] * factor;
        }
        prev_gray = gray;
        let prod = row_sums.iter().fold(ONE, |acc, s| acc * s);
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    Ok(total / (1u64 << free) as f64)
}
