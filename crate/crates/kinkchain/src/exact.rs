//! Dense 2^L state-vector engine: ground truth for the other engines at
//! small L.
//!
//! Basis ordering: site 1 is the most significant bit and spin-up maps to
//! bit 0, so the all-up state is index 0. With this ordering the
//! Kramers-Wannier CNOT ladder is the binary-to-Gray-code permutation.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{ChargeSpec, ModelParams, SpinPattern};

/// Largest chain length the dense engine accepts by default.
pub const DEFAULT_DENSE_LIMIT: usize = 14;

/// A normalized state vector over the full 2^L Hilbert space.
#[derive(Debug, Clone)]
pub struct DenseState {
    pub amplitudes: Array1<C64>,
    pub length: usize,
}

impl DenseState {
    pub fn new(amplitudes: Array1<C64>, length: usize) -> Result<Self> {
        if amplitudes.len() != 1 << length {
            return Err(Error::OutOfRange(format!(
                "state of length {length} needs {} amplitudes, got {}",
                1usize << length,
                amplitudes.len()
            )));
        }
        let state = Self { amplitudes, length };
        if (state.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Invariant(format!(
                "state norm {} deviates from 1 beyond 1e-12",
                state.norm()
            )));
        }
        Ok(state)
    }

    pub fn from_pattern(pattern: &SpinPattern) -> Self {
        let length = pattern.len();
        let mut amplitudes = Array1::zeros(1 << length);
        amplitudes[pattern.to_index()] = C64::new(1.0, 0.0);
        Self { amplitudes, length }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn site_bit(&self, index: usize, site: usize) -> bool {
        (index >> (self.length - site)) & 1 == 1
    }

    /// <sigma^z_i> for site i in 1..=L.
    pub fn sigma_z_expectation(&self, site: usize) -> Result<f64> {
        if site < 1 || site > self.length {
            return Err(Error::OutOfRange(format!("site {site} not in 1..={}", self.length)));
        }
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                let s = if self.site_bit(idx, site) { -1.0 } else { 1.0 };
                s * a.norm_sqr()
            })
            .sum())
    }

    /// Kink density (1 - <sigma^z_i sigma^z_{i+1}>) / 2 on link (i, i+1).
    pub fn kink_density(&self, link: usize) -> Result<f64> {
        if link < 1 || link >= self.length {
            return Err(Error::OutOfRange(format!("link {link} not in 1..{}", self.length)));
        }
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                let kink = self.site_bit(idx, link) != self.site_bit(idx, link + 1);
                if kink { a.norm_sqr() } else { 0.0 }
            })
            .sum())
    }

    /// Expectation of the total kink number operator.
    pub fn kink_number_expectation(&self) -> f64 {
        (1..self.length)
            .map(|link| self.kink_density(link).expect("link in range"))
            .sum()
    }

    /// Apply the Kramers-Wannier CNOT ladder (control L-1 -> target L first,
    /// control 1 -> target 2 last). A pure basis permutation: index -> Gray
    /// code of index.
    pub fn kw_circuit(&self) -> Self {
        let mut amplitudes = Array1::zeros(self.amplitudes.len());
        for (idx, &a) in self.amplitudes.iter().enumerate() {
            amplitudes[idx ^ (idx >> 1)] = a;
        }
        Self { amplitudes, length: self.length }
    }

    /// Inverse of [`Self::kw_circuit`].
    pub fn kw_circuit_inverse(&self) -> Self {
        let mut amplitudes = Array1::zeros(self.amplitudes.len());
        for (idx, &a) in self.amplitudes.iter().enumerate() {
            let mut s = idx;
            let mut shift = 1;
            while (idx >> shift) != 0 {
                s ^= idx >> shift;
                shift += 1;
            }
            amplitudes[s] = a;
        }
        Self { amplitudes, length: self.length }
    }

    /// Partial trace over sites subsystem_length+1..=L.
    pub fn reduce(&self, subsystem_length: usize) -> Result<DensityMatrix> {
        if subsystem_length < 1 || subsystem_length >= self.length {
            return Err(Error::OutOfRange(format!(
                "subsystem length {subsystem_length} not in 1..{}",
                self.length
            )));
        }
        let rows = 1usize << subsystem_length;
        let cols = 1usize << (self.length - subsystem_length);
        let m = self
            .amplitudes
            .view()
            .into_shape((rows, cols))
            .expect("2^L factors as 2^La * 2^Lb");
        let mut entries = Array2::zeros((rows, rows));
        for r in 0..rows {
            for c in 0..=r {
                let mut acc = C64::new(0.0, 0.0);
                for b in 0..cols {
                    acc += m[(r, b)] * m[(c, b)].conj();
                }
                entries[(r, c)] = acc;
                entries[(c, r)] = acc.conj();
            }
        }
        Ok(DensityMatrix { entries, subsystem_length })
    }
}

/// A reduced density matrix on the leftmost `subsystem_length` sites.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub entries: Array2<C64>,
    pub subsystem_length: usize,
}

impl DensityMatrix {
    pub fn trace(&self) -> C64 {
        self.entries.diag().sum()
    }

    pub fn purity(&self) -> f64 {
        // Tr rho^2 = ||rho||_F^2 for Hermitian rho.
        self.entries.iter().map(|x| x.norm_sqr()).sum()
    }

    /// Renyi-2 entropy -log2 Tr rho^2.
    pub fn renyi2(&self) -> f64 {
        -self.purity().log2()
    }

    /// Block-diagonal projection sum_q Pi_q rho Pi_q. All charge kinds are
    /// diagonal in the z product basis, so this zeroes every entry whose row
    /// and column carry different charge.
    pub fn project_charge(&self, charge: &ChargeSpec) -> Result<DensityMatrix> {
        if charge.subsystem_length != self.subsystem_length {
            return Err(Error::OutOfRange(format!(
                "charge acts on {} sites but the density matrix has {}",
                charge.subsystem_length, self.subsystem_length
            )));
        }
        let dim = self.entries.nrows();
        let q: Vec<u32> = (0..dim).map(|idx| charge.eval(idx)).collect();
        let mut entries = self.entries.clone();
        for r in 0..dim {
            for c in 0..dim {
                if q[r] != q[c] {
                    entries[(r, c)] = C64::new(0.0, 0.0);
                }
            }
        }
        Ok(DensityMatrix { entries, subsystem_length: self.subsystem_length })
    }

    /// Entanglement asymmetry dS2 = S2(rho_{A,Q}) - S2(rho_A).
    pub fn asymmetry(&self, charge: &ChargeSpec) -> Result<f64> {
        Ok(self.project_charge(charge)?.renyi2() - self.renyi2())
    }

    /// Evaluate the projection as the integral over conjugation angles,
    /// int dl/2pi e^{-i l Q} rho e^{i l Q}, on a (k+1)-point trapezoid grid
    /// over [-pi, pi], and return the max-entry deviation from
    /// [`Self::project_charge`]. Exact once k exceeds the charge spectral
    /// range, by discrete-Fourier exactness.
    pub fn sector_integral_check(&self, charge: &ChargeSpec, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::OutOfRange("need k >= 1 grid intervals".into()));
        }
        let dim = self.entries.nrows();
        let q: Vec<u32> = (0..dim).map(|idx| charge.eval(idx)).collect();
        let mut integral: Array2<C64> = Array2::zeros((dim, dim));
        for m in 0..=k {
            let lambda = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * m as f64 / k as f64;
            // Trapezoid weights; endpoints at -pi and pi each carry half.
            let w = if m == 0 || m == k { 0.5 / k as f64 } else { 1.0 / k as f64 };
            for r in 0..dim {
                for c in 0..dim {
                    let dq = q[r] as f64 - q[c] as f64;
                    let phase = C64::from_polar(1.0, -lambda * dq);
                    integral[(r, c)] += self.entries[(r, c)] * phase * w;
                }
            }
        }
        let projected = self.project_charge(charge)?;
        let dev = integral
            .iter()
            .zip(projected.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        Ok(dev)
    }
}

/// Dense Hamiltonian of the model. Real symmetric in the z basis.
pub fn build_hamiltonian(params: &ModelParams) -> Result<Array2<f64>> {
    build_hamiltonian_with_limit(params, DEFAULT_DENSE_LIMIT)
}

pub fn build_hamiltonian_with_limit(params: &ModelParams, limit: usize) -> Result<Array2<f64>> {
    let length = params.length;
    if length > limit {
        return Err(Error::Capacity(format!(
            "dense engine limited to L <= {limit}, got L = {length}"
        )));
    }
    let dim = 1usize << length;
    let mut h = Array2::zeros((dim, dim));
    let spin = |idx: usize, site: usize| -> f64 {
        if (idx >> (length - site)) & 1 == 1 { -1.0 } else { 1.0 }
    };
    for idx in 0..dim {
        let mut diag = 0.0;
        for i in 1..length {
            diag -= params.j0 * spin(idx, i) * spin(idx, i + 1);
        }
        for i in 1..=length {
            diag -= params.h * spin(idx, i);
        }
        h[(idx, idx)] = diag;
        // Spin flips act on interior sites only: the transverse field runs
        // over 2..=L-1 and the three-body term centers on the same sites.
        for i in 2..length {
            let flipped = idx ^ (1 << (length - i));
            let elem = -params.g - params.j3 * spin(idx, i - 1) * spin(idx, i + 1);
            h[(flipped, idx)] += elem;
        }
    }
    Ok(h)
}

/// Reusable propagator from a one-time eigendecomposition of a real
/// symmetric Hamiltonian. Immutable once constructed; safe to share across
/// threads for sweeps over many times.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigenvalues: Array1<f64>,
    eigenvectors: Array2<f64>,
}

impl Propagator {
    pub fn new(hamiltonian: &Array2<f64>) -> Result<Self> {
        let (eigenvalues, eigenvectors) = linalg::eigh(hamiltonian.view())?;
        Ok(Self { eigenvalues, eigenvectors })
    }

    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.eigenvalues
    }

    /// e^{-iHt} |psi>.
    pub fn evolve(&self, state: &DenseState, t: f64) -> DenseState {
        let re = self.eigenvectors.t().dot(&state.amplitudes.mapv(|a| a.re));
        let im = self.eigenvectors.t().dot(&state.amplitudes.mapv(|a| a.im));
        let mut coeff = Array1::from_shape_fn(re.len(), |i| C64::new(re[i], im[i]));
        for (c, &e) in coeff.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= C64::from_polar(1.0, -e * t);
        }
        let out_re = self.eigenvectors.dot(&coeff.mapv(|a| a.re));
        let out_im = self.eigenvectors.dot(&coeff.mapv(|a| a.im));
        DenseState {
            amplitudes: Array1::from_shape_fn(out_re.len(), |i| C64::new(out_re[i], out_im[i])),
            length: state.length,
        }
    }
}
