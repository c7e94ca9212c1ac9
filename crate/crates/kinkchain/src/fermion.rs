//! Free-fermion picture of the kink-conserving model at h = 0.
//!
//! After the Kramers-Wannier and Jordan-Wigner transformations, kinks
//! become free fermions on the dual lattice: mode j in 2..=L is the kink on
//! link (j-1, j). With h = 0 and j3 = -g the pairing term vanishes and a
//! domain wall evolves as two non-interacting fermions, which bounds the
//! Renyi-2 entropy of any cut by 2. This engine propagates the
//! single-particle unitary, reconstructs the two-kink amplitudes, and
//! evaluates the Gaussian-state entropy in the KW basis from the two-point
//! correlation matrix.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::ModelParams;
use crate::twokink::{renyi2_at_cut, TwoKinkAmplitudes, TwoKinkBasis};

/// Single-particle hopping matrix over dual-lattice modes 2..=L:
/// diagonal -2 j0, nearest-neighbor hopping -(g - j3).
///
/// Only valid when the pairing amplitude g + j3 and the confining field h
/// both vanish.
pub fn hopping_matrix(params: &ModelParams) -> Result<Array2<f64>> {
    if params.h != 0.0 {
        return Err(Error::Regime(format!(
            "free-fermion engine requires h = 0, got h = {}",
            params.h
        )));
    }
    if params.pairing() != 0.0 {
        return Err(Error::Regime(format!(
            "free-fermion engine requires j3 = -g, got pairing amplitude {}",
            params.pairing()
        )));
    }
    let modes = params.length - 1;
    let mut h = Array2::zeros((modes, modes));
    for m in 0..modes {
        h[(m, m)] = -2.0 * params.j0;
        if m + 1 < modes {
            h[(m, m + 1)] = -params.hopping();
            h[(m + 1, m)] = -params.hopping();
        }
    }
    Ok(h)
}

/// The evolved single-particle unitary u(t) = e^{-i h t} over modes 2..=L.
#[derive(Debug, Clone)]
pub struct SingleParticleUnitary {
    pub u: Array2<C64>,
    pub length: usize,
}

impl SingleParticleUnitary {
    /// Amplitude u_{alpha j} for modes alpha, j in 2..=L.
    pub fn amp(&self, alpha: usize, j: usize) -> C64 {
        self.u[(alpha - 2, j - 2)]
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.u.nrows();
        let uh = self.u.mapv(|x| x.conj()).reversed_axes();
        let prod = uh.dot(&self.u);
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                dev = dev.max((prod[(i, j)] - expect).norm());
            }
        }
        dev
    }
}

/// Propagator for the single-particle problem; one real-symmetric
/// eigendecomposition serves every time.
#[derive(Debug, Clone)]
pub struct FermionPropagator {
    length: usize,
    j0: f64,
    eigenvalues: Array1<f64>,
    eigenvectors: Array2<f64>,
}

impl FermionPropagator {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let h = hopping_matrix(params)?;
        let (eigenvalues, eigenvectors) = linalg::eigh(h.view())?;
        Ok(Self { length: params.length, j0: params.j0, eigenvalues, eigenvectors })
    }

    pub fn spectrum(&self) -> &Array1<f64> {
        &self.eigenvalues
    }

    /// u(t) = V e^{-i E t} V^T.
    pub fn propagate(&self, t: f64) -> SingleParticleUnitary {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut phased_re = Array2::zeros((n, n));
        let mut phased_im = Array2::zeros((n, n));
        for k in 0..n {
            let (sin, cos) = (-self.eigenvalues[k] * t).sin_cos();
            for j in 0..n {
                phased_re[(k, j)] = cos * v[(j, k)];
                phased_im[(k, j)] = sin * v[(j, k)];
            }
        }
        let re = v.dot(&phased_re);
        let im = v.dot(&phased_im);
        let u = Array2::from_shape_fn((n, n), |(i, j)| C64::new(re[(i, j)], im[(i, j)]));
        SingleParticleUnitary { u, length: self.length }
    }

    /// Evolve the domain-wall product state |j, n| and express the result in
    /// the two-kink basis, phase-aligned with the two-kink engine.
    ///
    /// The single-particle energies carry the -2 j0 rest energy per kink
    /// that the two-kink Hamiltonian absorbs into its energy offset, so the
    /// raw mapping differs from the two-kink evolution by the global phase
    /// e^{4 i j0 t}; this removes it.
    pub fn evolve_domain_wall(&self, j: usize, n: usize, t: f64) -> Result<TwoKinkAmplitudes> {
        let u = self.propagate(t);
        let a = two_fermion_state(&u, j, j + n)?;
        let mut tk = to_twokink(&a)?;
        let phase = C64::from_polar(1.0, -4.0 * self.j0 * t);
        tk.amps.mapv_inplace(|x| x * phase);
        Ok(tk)
    }
}

/// Antisymmetric amplitude matrix of a two-fermion state,
/// A_ij = u_{xi} u_{yj} - u_{xj} u_{yi}, normalized so that
/// sum_{i<j} |A_ij|^2 = 1.
#[derive(Debug, Clone)]
pub struct TwoFermionAmplitudes {
    pub a: Array2<C64>,
    pub length: usize,
}

impl TwoFermionAmplitudes {
    pub fn antisymmetry_deviation(&self) -> f64 {
        let n = self.a.nrows();
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                dev = dev.max((self.a[(i, j)] + self.a[(j, i)]).norm());
            }
        }
        dev
    }

    pub fn pair_norm(&self) -> f64 {
        let n = self.a.nrows();
        let mut acc = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                acc += self.a[(i, j)].norm_sqr();
            }
        }
        acc.sqrt()
    }
}

/// Evolved state of fermions initially localized on modes x and y
/// (the two kink links of the initial domain wall).
pub fn two_fermion_state(
    u: &SingleParticleUnitary,
    x: usize,
    y: usize,
) -> Result<TwoFermionAmplitudes> {
    if x == y {
        return Err(Error::OutOfRange(format!("fermion modes must differ, got x = y = {x}")));
    }
    let modes = u.u.nrows();
    for m in [x, y] {
        if m < 2 || m > u.length {
            return Err(Error::OutOfRange(format!("mode {m} not in 2..={}", u.length)));
        }
    }
    let mut a = Array2::zeros((modes, modes));
    for i in 0..modes {
        for j in 0..modes {
            a[(i, j)] = u.u[(x - 2, i)] * u.u[(y - 2, j)] - u.u[(x - 2, j)] * u.u[(y - 2, i)];
        }
    }
    Ok(TwoFermionAmplitudes { a, length: u.length })
}

/// Map fermion pairs to two-kink amplitudes: pair (i, j) with i < j is the
/// domain with walls (j_L, j_R) = (i, j - 1).
pub fn to_twokink(a: &TwoFermionAmplitudes) -> Result<TwoKinkAmplitudes> {
    let basis = TwoKinkBasis::new(a.length)?;
    let mut amps = Array1::zeros(basis.dimension());
    for i in 0..a.a.nrows() {
        for j in i + 1..a.a.ncols() {
            let (mode_i, mode_j) = (i + 2, j + 2);
            let idx = basis
                .index_of(mode_i, mode_j - 1)
                .expect("pair maps inside the two-kink basis");
            amps[idx] = a.a[(i, j)];
        }
    }
    // Absorb eigensolver roundoff; anything beyond roundoff is a bug.
    let norm = a.pair_norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Invariant(format!("two-fermion pair norm {norm} deviates from 1")));
    }
    amps.mapv_inplace(|x| x / norm);
    TwoKinkAmplitudes::new(basis, amps)
}

/// Renyi-2 entropy at a cut via the mapped two-kink state, together with
/// the Schmidt-rank upper bound (always 4: the bipartite expansion of an
/// evolved fermion pair has four product terms). Evolution of two free
/// fermions cannot exceed S2 = 2; exceeding it signals an engine bug.
pub fn schmidt_bound_s2(a: &TwoFermionAmplitudes, cut: usize) -> Result<(f64, usize)> {
    let s2 = renyi2_at_cut(&to_twokink(a)?, cut)?;
    if s2 > 2.0 + 1e-9 {
        return Err(Error::Invariant(format!(
            "free-fermion S2 = {s2} at cut {cut} exceeds the Schmidt bound 2"
        )));
    }
    Ok((s2, 4))
}

/// Renyi-2 entropy of the KW-basis reduced state on sites 1..=subsystem
/// from the fermionic two-point correlation matrix
/// C_ij = u*_{xi} u_{xj} + u*_{yi} u_{yj} restricted to modes 2..=subsystem:
/// S2 = -sum_k log2(nu_k^2 + (1 - nu_k)^2).
pub fn gaussian_kw_renyi2(
    u: &SingleParticleUnitary,
    x: usize,
    y: usize,
    subsystem: usize,
) -> Result<f64> {
    if subsystem < 1 || subsystem >= u.length {
        return Err(Error::OutOfRange(format!("subsystem {subsystem} not in 1..{}", u.length)));
    }
    if subsystem == 1 {
        // KW site 1 carries the untouched boundary spin.
        return Ok(0.0);
    }
    let m = subsystem - 1;
    let mut c = Array2::zeros((m, m));
    for i in 0..m {
        for j in 0..m {
            c[(i, j)] = u.u[(x - 2, i)].conj() * u.u[(x - 2, j)]
                + u.u[(y - 2, i)].conj() * u.u[(y - 2, j)];
        }
    }
    let (occupations, _) = linalg::eigh_c(c.view())?;
    let mut s2 = 0.0;
    for &nu in occupations.iter() {
        if !(-1e-10..=1.0 + 1e-10).contains(&nu) {
            return Err(Error::Numerical(format!(
                "correlation matrix eigenvalue {nu} outside [0, 1]"
            )));
        }
        let nu = nu.clamp(0.0, 1.0);
        s2 -= (nu * nu + (1.0 - nu) * (1.0 - nu)).log2();
    }
    Ok(s2)
}
