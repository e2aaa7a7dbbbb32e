//! Unitaries for linear-optical networks: Haar-random draws, triangular
//! beam-splitter meshes, and Fock scattering submatrices.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::modes::ModeConfig;
use crate::rng::{self, Purpose};

/// Reflectivity for horizontal polarization (transmission:reflection 0.9:0.1).
pub const REFLECTIVITY_H: f64 = 0.1;
/// Reflectivity for vertical polarization (transmission:reflection 0.42:0.58).
pub const REFLECTIVITY_V: f64 = 0.58;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// `m(m-1)/2` nearest-neighbour crossings in Reck order.
    Triangular,
    /// Any sequence of nearest-neighbour crossings.
    Custom,
}

/// One two-mode beam splitter acting on rows `top_row` and `top_row + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub top_row: usize,
    pub r: f64,
    #[serde(default)]
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshSpec {
    pub m: usize,
    pub layout: Layout,
    pub crossings: Vec<Crossing>,
}

/// Row pairs of the triangular layout, in application order.
pub fn triangular_rows(m: usize) -> Vec<usize> {
    let mut rows = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for diagonal in 1..m {
        rows.extend((0..diagonal).rev());
    }
    rows
}

impl MeshSpec {
    /// Triangular mesh with crossing parameters supplied per position.
    pub fn triangular(m: usize, mut params: impl FnMut(usize) -> (f64, f64)) -> Self {
        let crossings = triangular_rows(m)
            .into_iter()
            .enumerate()
            .map(|(k, top_row)| {
                let (r, phi) = params(k);
                Crossing { top_row, r, phi }
            })
            .collect();
        Self {
            m,
            layout: Layout::Triangular,
            crossings,
        }
    }

    /// Triangular mesh whose splitting ratios come from random polarization
    /// angles on the H/V coating and whose phases are uniform on `[0, 2pi)`.
    pub fn random_polarized(m: usize, seed: u64) -> Self {
        let mut rng = rng::stream(seed, Purpose::MeshSpec, 0);
        Self::triangular(m, |_| {
            let theta = rng.random_range(0.0..=FRAC_PI_2);
            let r = PolarizationSplit::coated(theta).effective_reflectivity_unchecked();
            (r, rng.random_range(0.0..TAU))
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Domain("mesh needs at least one mode".into()));
        }
        for (k, c) in self.crossings.iter().enumerate() {
            if !(0.0..=1.0).contains(&c.r) {
                return Err(Error::Domain(format!(
                    "crossing {k}: reflectivity {} outside [0, 1]",
                    c.r
                )));
            }
            if !(0.0..TAU).contains(&c.phi) {
                return Err(Error::Domain(format!(
                    "crossing {k}: phase {} outside [0, 2pi)",
                    c.phi
                )));
            }
            if c.top_row + 1 >= self.m {
                return Err(Error::Domain(format!(
                    "crossing {k}: rows ({}, {}) outside {} modes",
                    c.top_row,
                    c.top_row + 1,
                    self.m
                )));
            }
        }
        if self.layout == Layout::Triangular {
            let expected = triangular_rows(self.m);
            if self.crossings.len() != expected.len() {
                return Err(Error::Domain(format!(
                    "triangular mesh on {} modes needs {} crossings, got {}",
                    self.m,
                    expected.len(),
                    self.crossings.len()
                )));
            }
            if let Some(k) = self
                .crossings
                .iter()
                .zip(&expected)
                .position(|(c, &row)| c.top_row != row)
            {
                return Err(Error::Domain(format!(
                    "crossing {k} sits on row {} but the triangular layout expects row {}",
                    self.crossings[k].top_row, expected[k]
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("mesh spec serializes")
    }
}

/// The 2x2 block `[[t, e^{i phi} s], [-e^{-i phi} s, t]]` with `t = sqrt(1-r)`, `s = sqrt(r)`.
pub fn crossing_block(c: &Crossing) -> [[Complex64; 2]; 2] {
    let t = Complex64::new((1.0 - c.r).sqrt(), 0.0);
    let s = c.r.sqrt();
    let phase = Complex64::from_polar(1.0, c.phi);
    [[t, phase * s], [-phase.conj() * s, t]]
}

/// Left-multiplies `u` by a crossing in place (rows `top_row`, `top_row + 1`).
pub fn apply_crossing(u: &mut ComplexMatrix, c: &Crossing) {
    let [[a, b], [cc, d]] = crossing_block(c);
    let (i, k) = (c.top_row, c.top_row + 1);
    for j in 0..u.cols() {
        let x = u[(i, j)];
        let y = u[(k, j)];
        u[(i, j)] = a * x + b * y;
        u[(k, j)] = cc * x + d * y;
    }
}

/// Composes the crossings in order: the first crossing acts first on the input.
pub fn mesh_unitary(spec: &MeshSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let mut u = ComplexMatrix::identity(spec.m);
    for c in &spec.crossings {
        apply_crossing(&mut u, c);
    }
    Ok(u)
}

/// Coating reflectivities for H and V light and the polarization angle from H.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationSplit {
    pub r_h: f64,
    pub r_v: f64,
    pub theta: f64,
}

impl PolarizationSplit {
    pub fn coated(theta: f64) -> Self {
        Self {
            r_h: REFLECTIVITY_H,
            r_v: REFLECTIVITY_V,
            theta,
        }
    }

    fn effective_reflectivity_unchecked(&self) -> f64 {
        let c2 = self.theta.cos().powi(2);
        let s2 = self.theta.sin().powi(2);
        c2 * self.r_h + s2 * self.r_v
    }

    /// `cos^2(theta) r_H + sin^2(theta) r_V`.
    pub fn effective_reflectivity(&self) -> Result<f64> {
        if !(0.0..=FRAC_PI_2).contains(&self.theta) {
            return Err(Error::Domain(format!(
                "polarization angle {} outside [0, pi/2]",
                self.theta
            )));
        }
        Ok(self.effective_reflectivity_unchecked())
    }
}

/// Haar-random `m x m` unitary.
///
/// Draws a complex Ginibre matrix with i.i.d. standard complex normal
/// entries, takes a Householder QR factorization and rescales column `j` of
/// `Q` by `r_jj / |r_jj|`, which makes the factorization unique and the
/// result Haar distributed.
pub fn haar_unitary(m: usize, seed: u64) -> Result<ComplexMatrix> {
    if m == 0 {
        return Err(Error::Domain("unitary dimension must be positive".into()));
    }
    let mut rng = rng::stream(seed, Purpose::HaarUnitary, 0);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    // row-major draw order, independent of nalgebra's storage
    let mut draws = Vec::with_capacity(m * m);
    for _ in 0..m * m {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        draws.push(Complex64::new(re * scale, im * scale));
    }
    let ginibre = DMatrix::from_row_slice(m, m, &draws);
    let qr = ginibre.qr();
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<Complex64> = (0..m)
        .map(|j| {
            let d = r[(j, j)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect();
    ComplexMatrix::new(
        m,
        m,
        (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| q[(i, j)] * phases[j])
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitarityReport {
    pub max_deviation: f64,
    pub pass: bool,
}

/// Largest elementwise deviation of `M M^dagger` from the identity.
pub fn check_unitary(m: &ComplexMatrix, tol: f64) -> Result<UnitarityReport> {
    let n = m.square_dim()?;
    let mut max_deviation = 0.0f64;
    for i in 0..n {
        for k in 0..n {
            let dot: Complex64 = m
                .row(i)
                .iter()
                .zip(m.row(k))
                .map(|(a, b)| a * b.conj())
                .sum();
            let target = if i == k { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((dot - target).norm());
        }
    }
    Ok(UnitarityReport {
        max_deviation,
        pass: max_deviation <= tol,
    })
}

/// `n x n` scattering submatrix: row `a` is output mode `out[a]` and column
/// `b` is input mode `in[b]`, each mode repeated by its occupation.
pub fn scatter_submatrix(
    u: &ComplexMatrix,
    input: &ModeConfig,
    output: &ModeConfig,
) -> Result<ComplexMatrix> {
    let m = u.square_dim()?;
    if input.modes() != m || output.modes() != m {
        return Err(Error::Config(format!(
            "configurations over {} and {} modes do not fit a {m}-mode unitary",
            input.modes(),
            output.modes()
        )));
    }
    if input.photons() != output.photons() {
        return Err(Error::Config(format!(
            "input {input} carries {} photons but output {output} carries {}",
            input.photons(),
            output.photons()
        )));
    }
    if input.photons() == 0 {
        return Err(Error::Config("configurations carry no photons".into()));
    }
    let cols = input.mode_list();
    let rows = output.mode_list();
    let n = rows.len();
    Ok(ComplexMatrix::from_fn(n, n, |a, b| u[(rows[a], cols[b])]))
}

/// Phase of `z` on `[-pi, pi)`.
pub fn phase(z: Complex64) -> f64 {
    let a = z.arg();
    if a >= PI {
        a - TAU
    } else {
        a
    }
}
