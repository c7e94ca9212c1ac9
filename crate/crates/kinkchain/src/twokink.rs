//! Exact evolution in the two-kink subspace.
//!
//! Basis states are |j_L, j_R> with 1 < j_L <= j_R < L: spins down on sites
//! j_L..=j_R, up elsewhere. The subspace has dimension (L-1)(L-2)/2 and the
//! projected dynamics is exact whenever j3 = -g. Evolution goes through a
//! one-time symmetric eigendecomposition, so there is no Trotter error and
//! arbitrary times are equally cheap.
//!
//! The reduced density matrix across a cut l_B is assembled from five kinds
//! of terms over the left-subsystem basis {two-kink} u {one-kink} u
//! {no-kink}; a fast Schmidt-matrix path computes the Renyi-2 entropy
//! without materializing the matrix and is checked against it.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::exact::DenseState;
use crate::linalg;
use crate::model::{ModelParams, SpinPattern};

/// Index map between ordered kink pairs (j_L, j_R) and linear indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoKinkBasis {
    length: usize,
    /// offsets[j_L - 2] = linear index of (j_L, j_L).
    offsets: Vec<usize>,
}

impl TwoKinkBasis {
    pub fn new(length: usize) -> Result<Self> {
        if length < 4 {
            return Err(Error::OutOfRange(format!(
                "two-kink basis needs L >= 4, got {length}"
            )));
        }
        let mut offsets = Vec::with_capacity(length - 2);
        let mut acc = 0;
        for jl in 2..length {
            offsets.push(acc);
            acc += length - jl;
        }
        Ok(Self { length, offsets })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        (self.length - 1) * (self.length - 2) / 2
    }

    /// Linear index of |j_L, j_R>, if the pair is inside the basis.
    pub fn index_of(&self, jl: usize, jr: usize) -> Option<usize> {
        if jl < 2 || jr < jl || jr >= self.length {
            return None;
        }
        Some(self.offsets[jl - 2] + (jr - jl))
    }

    /// The (j_L, j_R) pair at a linear index.
    pub fn pair_at(&self, index: usize) -> (usize, usize) {
        let jl = match self.offsets.binary_search(&index) {
            Ok(k) => k + 2,
            Err(k) => k + 1,
        };
        let jr = jl + (index - self.offsets[jl - 2]);
        (jl, jr)
    }

    /// The spin pattern of a basis state.
    pub fn pattern_at(&self, index: usize) -> SpinPattern {
        let (jl, jr) = self.pair_at(index);
        SpinPattern::domain_wall(self.length, jl, jr - jl + 1).expect("basis pair in range")
    }
}

/// Complex amplitude vector over a [`TwoKinkBasis`].
#[derive(Debug, Clone)]
pub struct TwoKinkAmplitudes {
    pub basis: TwoKinkBasis,
    pub amps: Array1<C64>,
}

impl TwoKinkAmplitudes {
    pub fn new(basis: TwoKinkBasis, amps: Array1<C64>) -> Result<Self> {
        if amps.len() != basis.dimension() {
            return Err(Error::OutOfRange(format!(
                "amplitude vector length {} does not match basis dimension {}",
                amps.len(),
                basis.dimension()
            )));
        }
        let out = Self { basis, amps };
        if (out.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Invariant(format!(
                "two-kink state norm {} deviates from 1 beyond 1e-12",
                out.norm()
            )));
        }
        Ok(out)
    }

    /// The domain-wall product state |j, n| as a basis vector.
    pub fn from_domain_wall(length: usize, j: usize, n: usize) -> Result<Self> {
        let basis = TwoKinkBasis::new(length)?;
        let idx = basis
            .index_of(j, j + n - 1)
            .ok_or_else(|| Error::OutOfRange(format!("domain ({j}, n={n}) outside the basis")))?;
        let mut amps = Array1::zeros(basis.dimension());
        amps[idx] = C64::new(1.0, 0.0);
        Ok(Self { basis, amps })
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Kink density on link (i, i+1): total weight of basis states with a
    /// wall there (j_L = i + 1 or j_R = i).
    pub fn kink_density(&self, link: usize) -> Result<f64> {
        let length = self.basis.length;
        if link < 1 || link >= length {
            return Err(Error::OutOfRange(format!("link {link} not in 1..{length}")));
        }
        let mut acc = 0.0;
        for (idx, a) in self.amps.iter().enumerate() {
            let (jl, jr) = self.basis.pair_at(idx);
            if jl == link + 1 || jr == link {
                acc += a.norm_sqr();
            }
        }
        Ok(acc)
    }

    /// <sigma^z_i> = 1 - 2 * (weight of states with the domain covering i).
    pub fn sigma_z(&self, site: usize) -> Result<f64> {
        let length = self.basis.length;
        if site < 1 || site > length {
            return Err(Error::OutOfRange(format!("site {site} not in 1..={length}")));
        }
        let mut covered = 0.0;
        for (idx, a) in self.amps.iter().enumerate() {
            let (jl, jr) = self.basis.pair_at(idx);
            if jl <= site && site <= jr {
                covered += a.norm_sqr();
            }
        }
        Ok(1.0 - 2.0 * covered)
    }

    /// Embed into the dense 2^L space (test oracle glue; small L only).
    pub fn to_dense(&self) -> Result<DenseState> {
        let length = self.basis.length;
        if length > 20 {
            return Err(Error::Capacity("dense embedding limited to L <= 20".into()));
        }
        let mut amplitudes = Array1::zeros(1usize << length);
        for (idx, &a) in self.amps.iter().enumerate() {
            amplitudes[self.basis.pattern_at(idx).to_index()] = a;
        }
        DenseState::new(amplitudes, length)
    }
}

/// Two-kink Hamiltonian: diagonal 2 h n for domain size n = j_R - j_L + 1
/// (energy measured from the all-up state; the constant offset
/// -j0 (L-1) - h L + 4 j0 within the sector is dropped), hopping -(g - j3)
/// between pairs that differ by one wall move, walls never touching the
/// chain boundary.
pub fn build_h2(params: &ModelParams, basis: &TwoKinkBasis) -> Array2<f64> {
    let dim = basis.dimension();
    let hop = -params.hopping();
    let mut h2 = Array2::zeros((dim, dim));
    for idx in 0..dim {
        let (jl, jr) = basis.pair_at(idx);
        let n = (jr - jl + 1) as f64;
        h2[(idx, idx)] = 2.0 * params.h * n;
        for (tl, tr) in [
            (jl.wrapping_sub(1), jr),
            (jl + 1, jr),
            (jl, jr.wrapping_sub(1)),
            (jl, jr + 1),
        ] {
            if let Some(t) = basis.index_of(tl, tr) {
                h2[(t, idx)] = hop;
            }
        }
    }
    h2
}

/// Constant energy offset dropped by [`build_h2`]; add it back when
/// comparing spectra with the dense engine.
pub fn h2_energy_offset(params: &ModelParams) -> f64 {
    -params.j0 * (params.length as f64 - 1.0) - params.h * params.length as f64 + 4.0 * params.j0
}

/// Reusable two-kink propagator: one symmetric eigendecomposition, then any
/// time is a pair of matrix-vector products.
#[derive(Debug, Clone)]
pub struct TwoKinkPropagator {
    basis: TwoKinkBasis,
    eigenvalues: Array1<f64>,
    eigenvectors: Array2<f64>,
}

impl TwoKinkPropagator {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let basis = TwoKinkBasis::new(params.length)?;
        let h2 = build_h2(params, &basis);
        let (eigenvalues, eigenvectors) = linalg::eigh(h2.view())?;
        Ok(Self { basis, eigenvalues, eigenvectors })
    }

    pub fn basis(&self) -> &TwoKinkBasis {
        &self.basis
    }

    pub fn spectrum(&self) -> &Array1<f64> {
        &self.eigenvalues
    }

    pub fn evolve(&self, state: &TwoKinkAmplitudes, t: f64) -> TwoKinkAmplitudes {
        let mut out = self.evolve_many(state, &[t]);
        out.pop().expect("one time requested")
    }

    /// Evolve to many times at once; the eigenbasis rotation is shared and
    /// the per-time work batches into two real matrix products.
    pub fn evolve_many(&self, state: &TwoKinkAmplitudes, times: &[f64]) -> Vec<TwoKinkAmplitudes> {
        let dim = self.basis.dimension();
        let c_re = self.eigenvectors.t().dot(&state.amps.mapv(|a| a.re));
        let c_im = self.eigenvectors.t().dot(&state.amps.mapv(|a| a.im));
        let nt = times.len();
        let mut phased_re = Array2::zeros((dim, nt));
        let mut phased_im = Array2::zeros((dim, nt));
        for (k, &t) in times.iter().enumerate() {
            for i in 0..dim {
                let (sin, cos) = (-self.eigenvalues[i] * t).sin_cos();
                let c = C64::new(c_re[i], c_im[i]) * C64::new(cos, sin);
                phased_re[(i, k)] = c.re;
                phased_im[(i, k)] = c.im;
            }
        }
        let out_re = self.eigenvectors.dot(&phased_re);
        let out_im = self.eigenvectors.dot(&phased_im);
        (0..nt)
            .map(|k| TwoKinkAmplitudes {
                basis: self.basis.clone(),
                amps: Array1::from_shape_fn(dim, |i| C64::new(out_re[(i, k)], out_im[(i, k)])),
            })
            .collect()
    }
}

/// Reduced density matrix of a two-kink state over the left-subsystem block
/// basis for a cut l_B.
///
/// Row layout: the two-kink labels (j_L, j_R) with j_L <= j_R <= l_B in
/// basis order, then the one-kink labels j_L = 2..=l_B, then the no-kink
/// state. Labels with j_R = l_B describe the same left pattern as the
/// one-kink label j_L; their weight is accumulated on the one-kink row and
/// the duplicate two-kink row stays zero.
#[derive(Debug, Clone)]
pub struct TwoKinkRdm {
    pub entries: Array2<C64>,
    pub cut: usize,
    length: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LeftLabel {
    TwoKink { jl: usize, jr: usize },
    OneKink { jl: usize },
    NoKink,
}

impl TwoKinkRdm {
    fn two_kink_block_dim(cut: usize) -> usize {
        cut * (cut - 1) / 2
    }

    pub fn dimension(cut: usize) -> usize {
        Self::two_kink_block_dim(cut) + (cut - 1) + 1
    }

    /// Canonical row of a left pattern with walls (j_L, j_R), j_L <= l_B;
    /// j_R = l_B collapses onto the one-kink row.
    fn row_of(cut: usize, jl: usize, jr: usize) -> usize {
        debug_assert!(2 <= jl && jl <= jr && jr <= cut);
        if jr == cut {
            Self::two_kink_block_dim(cut) + (jl - 2)
        } else {
            // Pairs (jl, jr <= cut) in row-major order.
            let offset: usize = (2..jl).map(|a| cut - a + 1).sum();
            offset + (jr - jl)
        }
    }

    fn no_kink_row(cut: usize) -> usize {
        Self::dimension(cut) - 1
    }

    fn label_of(cut: usize, row: usize) -> LeftLabel {
        let two = Self::two_kink_block_dim(cut);
        if row < two {
            let mut r = row;
            for jl in 2..=cut {
                let span = cut - jl + 1;
                if r < span {
                    return LeftLabel::TwoKink { jl, jr: jl + r };
                }
                r -= span;
            }
            unreachable!("row inside two-kink block");
        } else if row < two + (cut - 1) {
            LeftLabel::OneKink { jl: row - two + 2 }
        } else {
            LeftLabel::NoKink
        }
    }

    /// The left-subsystem spin pattern a row describes, or None for the
    /// duplicate (j_R = l_B) rows that were merged away.
    pub fn row_pattern(&self, row: usize) -> Option<SpinPattern> {
        let mut spins = vec![1i8; self.cut];
        match Self::label_of(self.cut, row) {
            LeftLabel::TwoKink { jl, jr } => {
                if jr == self.cut {
                    return None;
                }
                for s in &mut spins[jl - 1..jr] {
                    *s = -1;
                }
            }
            LeftLabel::OneKink { jl } => {
                for s in &mut spins[jl - 1..] {
                    *s = -1;
                }
            }
            LeftLabel::NoKink => {}
        }
        Some(SpinPattern::new(spins).expect("pattern spins valid"))
    }

    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn renyi2(&self) -> f64 {
        -self.purity().log2()
    }

    pub fn trace(&self) -> C64 {
        self.entries.diag().sum()
    }

    /// Embed into the dense 2^cut left basis (test oracle glue).
    pub fn to_dense(&self) -> Array2<C64> {
        let dim = 1usize << self.cut;
        let mut out = Array2::zeros((dim, dim));
        let rows: Vec<Option<usize>> = (0..self.entries.nrows())
            .map(|r| self.row_pattern(r).map(|p| p.to_index()))
            .collect();
        for (r, ri) in rows.iter().enumerate() {
            let Some(ri) = ri else { continue };
            for (c, ci) in rows.iter().enumerate() {
                let Some(ci) = ci else { continue };
                out[(*ri, *ci)] = self.entries[(r, c)];
            }
        }
        out
    }

    pub fn length(&self) -> usize {
        self.length
    }
}

/// Partial trace of a two-kink state over sites l_B+1..=L, assembled from
/// the five term families of the block decomposition:
///
/// 1. outer products of amplitudes with j_R <= l_B (right part all up, no
///    sum);
/// 2. one-kink x one-kink entries with a single sum over the matched right
///    wall j_R > l_B, accumulated into the same one-kink block;
/// 3. the scalar no-kink entry, the total weight with j_L > l_B;
/// 4. / 5. the conjugate pair of one-kink <-> no-kink strips where the
///    right patterns match only through j_L' = l_B + 1.
pub fn reduce_twokink(state: &TwoKinkAmplitudes, cut: usize) -> Result<TwoKinkRdm> {
    let length = state.basis.length();
    if cut < 1 || cut >= length {
        return Err(Error::OutOfRange(format!("cut {cut} not in 1..{length}")));
    }
    let dim = TwoKinkRdm::dimension(cut);
    let mut entries: Array2<C64> = Array2::zeros((dim, dim));
    let amp = |jl: usize, jr: usize| -> C64 {
        state
            .basis
            .index_of(jl, jr)
            .map(|i| state.amps[i])
            .unwrap_or_default()
    };

    // Term 1: both walls in the left part (j_R <= cut).
    let left_pairs: Vec<(usize, usize, C64)> = (2..=cut)
        .flat_map(|jl| (jl..=cut).map(move |jr| (jl, jr)))
        .map(|(jl, jr)| (jl, jr, amp(jl, jr)))
        .collect();
    for &(jl, jr, a) in &left_pairs {
        let r = TwoKinkRdm::row_of(cut, jl, jr);
        for &(jl2, jr2, b) in &left_pairs {
            let c = TwoKinkRdm::row_of(cut, jl2, jr2);
            entries[(r, c)] += a * b.conj();
        }
    }

    // Term 2: left wall in A, right wall traced out; adds onto the
    // one-kink block shared with term 1.
    for jl in 2..=cut {
        let r = TwoKinkRdm::row_of(cut, jl, cut);
        for jl2 in 2..=cut {
            let c = TwoKinkRdm::row_of(cut, jl2, cut);
            let mut acc = C64::new(0.0, 0.0);
            for jr in cut + 1..length {
                acc += amp(jl, jr) * amp(jl2, jr).conj();
            }
            entries[(r, c)] += acc;
        }
    }

    // Term 3: both walls to the right of the cut.
    let no = TwoKinkRdm::no_kink_row(cut);
    let mut weight = 0.0;
    for jl in cut + 1..length {
        for jr in jl..length {
            weight += amp(jl, jr).norm_sqr();
        }
    }
    entries[(no, no)] += C64::new(weight, 0.0);

    // Terms 4 and 5: coherence between a one-kink left pattern and the
    // all-up left pattern; the right patterns agree only when j_L' = cut+1.
    for jl in 2..=cut {
        let r = TwoKinkRdm::row_of(cut, jl, cut);
        let mut acc = C64::new(0.0, 0.0);
        for jr in cut + 1..length {
            acc += amp(jl, jr) * amp(cut + 1, jr).conj();
        }
        entries[(r, no)] += acc;
        entries[(no, r)] += acc.conj();
    }

    Ok(TwoKinkRdm { entries, cut, length })
}

/// Renyi-2 entropy at a cut without materializing the reduced density
/// matrix: the nonzero Schmidt values of the state survive collapsing the
/// strictly-interior two-kink sectors of each side to single rows, leaving
/// a compact (l_B + 1) x (L - l_B + 1) amplitude matrix.
pub fn renyi2_at_cut(state: &TwoKinkAmplitudes, cut: usize) -> Result<f64> {
    let length = state.basis.length();
    if cut < 1 || cut >= length {
        return Err(Error::OutOfRange(format!("cut {cut} not in 1..{length}")));
    }
    let amp = |jl: usize, jr: usize| -> C64 {
        state
            .basis
            .index_of(jl, jr)
            .map(|i| state.amps[i])
            .unwrap_or_default()
    };
    // Rows: collapsed interior-left (0), one-kink j_L = 2..=cut, no-kink.
    // Cols: no-kink (0), one-kink j_R = cut+1..L-1, collapsed interior-right.
    let rows = cut + 1;
    let cols = length - cut + 1;
    let mut m: Array2<C64> = Array2::zeros((rows, cols));
    let mut interior_left = 0.0;
    for jl in 2..=cut {
        for jr in jl..cut.min(length - 1) {
            interior_left += amp(jl, jr).norm_sqr();
        }
    }
    m[(0, 0)] = C64::new(interior_left.sqrt(), 0.0);
    for jl in 2..=cut {
        m[(jl - 1, 0)] = amp(jl, cut);
        for jr in cut + 1..length {
            m[(jl - 1, jr - cut)] = amp(jl, jr);
        }
    }
    for jr in cut + 1..length {
        m[(rows - 1, jr - cut)] = amp(cut + 1, jr);
    }
    let mut interior_right = 0.0;
    for jl in cut + 2..length {
        for jr in jl..length {
            interior_right += amp(jl, jr).norm_sqr();
        }
    }
    m[(rows - 1, cols - 1)] = C64::new(interior_right.sqrt(), 0.0);

    // Tr rho^2 = ||M M^dagger||_F^2.
    let gram = gram_matrix(&m);
    let purity: f64 = gram.iter().map(|x| x.norm_sqr()).sum();
    Ok(-purity.log2())
}

fn gram_matrix(m: &Array2<C64>) -> Array2<C64> {
    let mh = m.mapv(|x| x.conj()).reversed_axes();
    m.dot(&mh)
}
