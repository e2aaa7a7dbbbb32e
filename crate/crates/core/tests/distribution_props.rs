mod common;

use std::collections::HashMap;

use bosonrace::distributions::{count_events, distinguishable_distribution};
use bosonrace::interferometer::{Crossing, Layout};
use bosonrace::*;
use common::{evolve_fock, fock_unitary};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn balanced() -> ComplexMatrix {
    mesh_unitary(&MeshSpec {
        m: 2,
        layout: Layout::Triangular,
        crossings: vec![Crossing {
            top_row: 0,
            r: 0.5,
            phi: 0.0,
        }],
    })
    .unwrap()
}

/// Distinguishable photons by brute force: every photon picks its output
/// mode independently with probability |u_kj|^2.
fn classical_oracle(u: &ComplexMatrix, input: &ModeConfig) -> HashMap<Vec<u32>, f64> {
    let m = u.rows();
    let sources = input.mode_list();
    let mut table: HashMap<Vec<u32>, f64> = HashMap::new();
    let total = m.pow(sources.len() as u32);
    for code in 0..total {
        let mut occ = vec![0u32; m];
        let mut p = 1.0;
        let mut rest = code;
        for &j in &sources {
            let k = rest % m;
            rest /= m;
            occ[k] += 1;
            p *= u[(k, j)].norm_sqr();
        }
        *table.entry(occ).or_insert(0.0) += p;
    }
    table
}

#[test]
fn fock_oracle_is_itself_unitary() {
    let u = haar_unitary(4, 3).unwrap();
    let (basis, big) = fock_unitary(&u, 3);
    assert_eq!(basis.len(), 20);
    for a in 0..basis.len() {
        for b in 0..basis.len() {
            let dot: Complex64 = (0..basis.len()).map(|k| big[k][a] * big[k][b].conj()).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            assert!((dot - target).norm() < 1e-12);
        }
    }
}

#[test]
fn boson_distribution_matches_fock_evolution() {
    for (m, n) in [(2usize, 2usize), (3, 2), (3, 3), (4, 2), (4, 3)] {
        for seed in 0..5u64 {
            let u = haar_unitary(m, 70 + seed).unwrap();
            for input in enumerate_full(m, n).unwrap() {
                let amps = evolve_fock(&u, input.occupations());
                let dist = boson_distribution(&u, &input, Restriction::Full).unwrap();
                for (out, p) in dist.outcomes().iter().zip(dist.probabilities()) {
                    let oracle = amps.get(out.occupations()).map_or(0.0, |z| z.norm_sqr());
                    assert!((p - oracle).abs() <= 1e-9, "m={m} n={n} {input} -> {out}");
                }
            }
        }
    }
}

#[test]
fn two_photon_bunching_on_balanced_splitter() {
    let u = balanced();
    let input = ModeConfig::new(vec![1, 1]).unwrap();
    let amps = evolve_fock(&u, &[1, 1]);
    let oracle = amps.get(&vec![2, 0]).unwrap().norm_sqr();
    assert!((oracle - 0.5).abs() < 1e-15);
    let d = boson_distribution(&u, &input, Restriction::Full).unwrap();
    let two_zero = ModeConfig::new(vec![2, 0]).unwrap();
    assert!((d.probability_of(&two_zero).unwrap() - 0.5).abs() < 1e-15);
    assert!(d.probability_of(&input).unwrap() < 1e-12);
}

#[test]
fn distinguishable_distribution_matches_independent_photons() {
    for (m, input) in [
        (3usize, vec![1u32, 1, 0]),
        (4, vec![1, 1, 1, 0]),
        (3, vec![2, 0, 1]),
    ] {
        let u = haar_unitary(m, 12).unwrap();
        let input = ModeConfig::new(input).unwrap();
        let oracle = classical_oracle(&u, &input);
        let d = distinguishable_distribution(&u, &input, Restriction::Full).unwrap();
        for (out, p) in d.outcomes().iter().zip(d.probabilities()) {
            let expect = oracle.get(out.occupations()).copied().unwrap_or(0.0);
            assert!(
                (p - expect).abs() <= 1e-12,
                "{input} -> {out}: {p} vs {expect}"
            );
        }
    }
}

#[test]
fn full_distributions_are_complete() {
    for (m, n) in [(4, 2), (6, 3), (9, 3)] {
        let input = ModeConfig::first_modes(m, n).unwrap();
        for seed in 0..100u64 {
            let u = haar_unitary(m, seed).unwrap();
            for d in [
                boson_distribution(&u, &input, Restriction::Full).unwrap(),
                distinguishable_distribution(&u, &input, Restriction::Full).unwrap(),
            ] {
                let total: f64 = d.probabilities().iter().sum();
                assert!((total - 1.0).abs() <= 1e-10, "m={m} n={n} seed={seed}");
            }
        }
    }
}

#[test]
fn no_collision_set_sizes() {
    let u = haar_unitary(9, 0).unwrap();
    for (n, count) in [(3, 84), (4, 126), (5, 126)] {
        let d = boson_distribution(
            &u,
            &ModeConfig::first_modes(9, n).unwrap(),
            Restriction::NoCollision,
        )
        .unwrap();
        assert_eq!(d.len(), count);
        assert!(d.raw_mass() > 0.0 && d.raw_mass() < 1.0);
    }
}

#[test]
fn million_draws_converge_in_total_variation() {
    let u = haar_unitary(9, 31).unwrap();
    let ideal = boson_distribution(
        &u,
        &ModeConfig::first_modes(9, 3).unwrap(),
        Restriction::NoCollision,
    )
    .unwrap();
    let events = draw_samples(&ideal, 1_000_000, 31).unwrap();
    let freq = empirical_frequencies(&events, &ideal).unwrap();
    assert!(metrics(&freq, &ideal).unwrap().distance <= 0.01);
}

#[test]
fn sampler_passes_chi_square() {
    let u = haar_unitary(9, 5).unwrap();
    let ideal = boson_distribution(
        &u,
        &ModeConfig::first_modes(9, 3).unwrap(),
        Restriction::NoCollision,
    )
    .unwrap();
    let draws = 100_000u64;
    let mut rejections = 0;
    for rep in 0..100u64 {
        let events = draw_samples(&ideal, draws as usize, 9_000 + rep).unwrap();
        let counts = count_events(&events, ideal.outcomes()).unwrap();
        // pool cells with expected count below 5 into one bin
        let (mut stat, mut bins) = (0.0, 0usize);
        let (mut pooled_obs, mut pooled_exp) = (0.0, 0.0);
        for (&c, &p) in counts.iter().zip(ideal.probabilities()) {
            let expected = p * draws as f64;
            if expected < 5.0 {
                pooled_obs += c as f64;
                pooled_exp += expected;
            } else {
                stat += (c as f64 - expected).powi(2) / expected;
                bins += 1;
            }
        }
        if pooled_exp > 0.0 {
            stat += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
            bins += 1;
        }
        let critical = ChiSquared::new((bins - 1) as f64)
            .unwrap()
            .inverse_cdf(0.999);
        rejections += usize::from(stat > critical);
    }
    assert!(rejections < 1, "{rejections} of 100 rejected");
}
