//! Test-only references that do not go through the permanent engine.

#![allow(dead_code)]

use std::collections::HashMap;

use bosonrace::{Complex64, ComplexMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Occupation vectors of `n` photons in `m` modes, in no particular order.
pub fn fock_basis(m: usize, n: u32) -> Vec<Vec<u32>> {
    fn rec(m: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == m - 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(m, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, n, &mut Vec::new(), &mut out);
    out
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Output amplitudes of the Fock state `input` under the single-photon
/// unitary `u`, computed by expanding the product of transformed creation
/// operators `prod_j (sum_k u_kj a_k^dagger)^{in_j}` applied to vacuum.
pub fn evolve_fock(u: &ComplexMatrix, input: &[u32]) -> HashMap<Vec<u32>, Complex64> {
    let m = u.rows();
    let mut poly: HashMap<Vec<u32>, Complex64> = HashMap::new();
    poly.insert(vec![0; m], Complex64::new(1.0, 0.0));
    for (j, &count) in input.iter().enumerate() {
        for _ in 0..count {
            let mut next: HashMap<Vec<u32>, Complex64> = HashMap::new();
            for (mono, coef) in &poly {
                for k in 0..m {
                    let amp = u[(k, j)];
                    if amp == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let mut key = mono.clone();
                    key[k] += 1;
                    *next.entry(key).or_insert(Complex64::new(0.0, 0.0)) += coef * amp;
                }
            }
            poly = next;
        }
    }
    let norm_in: f64 = input.iter().map(|&k| factorial(k)).product::<f64>().sqrt();
    poly.into_iter()
        .map(|(out, coef)| {
            let norm_out: f64 = out.iter().map(|&k| factorial(k)).product::<f64>().sqrt();
            (out, coef * norm_out / norm_in)
        })
        .collect()
}

/// Explicit multi-photon transfer matrix on the Fock basis: entry
/// `(a, b)` is the amplitude from `basis[b]` to `basis[a]`.
pub fn fock_unitary(u: &ComplexMatrix, n: u32) -> (Vec<Vec<u32>>, Vec<Vec<Complex64>>) {
    let basis = fock_basis(u.rows(), n);
    let mut matrix = vec![vec![Complex64::new(0.0, 0.0); basis.len()]; basis.len()];
    for (b, input) in basis.iter().enumerate() {
        let amps = evolve_fock(u, input);
        for (a, out) in basis.iter().enumerate() {
            if let Some(z) = amps.get(out) {
                matrix[a][b] = *z;
            }
        }
    }
    (basis, matrix)
}

/// Matrix with i.i.d. entries uniform on the square `[-1, 1) + i[-1, 1)`.
pub fn random_complex(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn rel_err(a: Complex64, reference: Complex64) -> f64 {
    (a - reference).norm() / reference.norm().max(1.0)
}
