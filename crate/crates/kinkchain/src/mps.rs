//! Matrix-product-state engine: TEBD time evolution with a second-order
//! Trotter splitting, entanglement from Schmidt spectra, the duality
//! circuit as a CNOT ladder, and charge asymmetry through a diagonal-MPO
//! lambda integral.
//!
//! Every local term of the Hamiltonian squares to the identity, so each
//! Trotter gate has the closed form cos(theta) I + i sin(theta) P and the
//! only evolution error is the splitting itself.

use ndarray::{Array1, Array2, Array3};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::exact::DenseState;
use crate::linalg;
use crate::model::{ChargeSpec, ModelParams, SpinPattern};

pub const DEFAULT_DT: f64 = 0.05;
pub const DEFAULT_CUTOFF: f64 = 1e-10;
pub const DEFAULT_CHI_MAX: usize = 128;

fn spin_sign(s: usize) -> f64 {
    if s == 0 {
        1.0
    } else {
        -1.0
    }
}

/// An open-boundary MPS with tensors indexed [left, physical, right],
/// physical index 0 = up. Tensors left of `center` are kept left-canonical
/// and tensors right of it right-canonical; the norm lives in the center.
#[derive(Debug, Clone)]
pub struct MpsState {
    tensors: Vec<Array3<C64>>,
    center: usize,
    length: usize,
    pub cutoff: f64,
    pub chi_max: usize,
    /// Accumulated discarded Schmidt weight from all truncations.
    pub truncation_weight: f64,
}

impl MpsState {
    /// Product state from a classical spin pattern; bond dimension 1.
    pub fn from_pattern(pattern: &SpinPattern) -> Self {
        let tensors = pattern
            .spins()
            .iter()
            .map(|&s| {
                let mut t = Array3::zeros((1, 2, 1));
                t[(0, if s == 1 { 0 } else { 1 }, 0)] = C64::new(1.0, 0.0);
                t
            })
            .collect::<Vec<_>>();
        let length = pattern.len();
        Self {
            tensors,
            center: 0,
            length,
            cutoff: DEFAULT_CUTOFF,
            chi_max: DEFAULT_CHI_MAX,
            truncation_weight: 0.0,
        }
    }

    /// Exact MPS of a dense state via successive SVDs (small chains only).
    pub fn from_dense(state: &DenseState, cutoff: f64, chi_max: usize) -> Result<Self> {
        let length = state.length;
        let mut tensors = Vec::with_capacity(length);
        let mut rest: Array2<C64> =
            state.amplitudes.clone().into_shape((1, 1 << length)).expect("reshape");
        let mut weight = 0.0;
        for site in 0..length {
            let chi_l = rest.nrows();
            let cols = rest.ncols() / 2;
            let m = rest.into_shape((chi_l * 2, cols)).expect("reshape");
            if site + 1 == length {
                tensors.push(m.into_shape((chi_l, 2, 1)).expect("reshape"));
                rest = Array2::zeros((0, 0));
            } else {
                let (u, s, vh) = linalg::svd_c(m.view())?;
                let (keep, lost) = truncation_rank(&s, cutoff, chi_max);
                weight += lost;
                let chi = keep;
                let mut a = Array3::zeros((chi_l, 2, chi));
                for l in 0..chi_l {
                    for p in 0..2 {
                        for r in 0..chi {
                            a[(l, p, r)] = u[(l * 2 + p, r)];
                        }
                    }
                }
                tensors.push(a);
                let mut next = Array2::zeros((chi, cols));
                for r in 0..chi {
                    for c in 0..cols {
                        next[(r, c)] = vh[(r, c)] * s[r];
                    }
                }
                rest = next;
            }
        }
        Ok(Self {
            tensors,
            center: length - 1,
            length,
            cutoff,
            chi_max,
            truncation_weight: weight,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn max_bond(&self) -> usize {
        self.tensors.iter().map(|t| t.dim().2).max().unwrap_or(1)
    }

    /// State norm; unitary gates preserve it, truncation erodes it.
    pub fn norm(&self) -> f64 {
        let c = &self.tensors[self.center];
        c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Full amplitude vector (guarded elsewhere by the dense size limit).
    pub fn to_dense(&self) -> Result<DenseState> {
        let mut psi: Array2<C64> = Array2::from_elem((1, 1), C64::new(1.0, 0.0));
        for t in &self.tensors {
            let (chi_l, _, chi_r) = t.dim();
            let a = t.clone().into_shape((chi_l, 2 * chi_r)).expect("reshape");
            let d = psi.nrows();
            psi = psi.dot(&a).into_shape((d * 2, chi_r)).expect("reshape");
        }
        let amps = psi.into_shape(1 << self.length).expect("reshape");
        DenseState::new(amps, self.length)
    }

    fn tensor_as_matrix_lp_r(&self, site: usize) -> Array2<C64> {
        let t = &self.tensors[site];
        let (l, _, r) = t.dim();
        t.clone().into_shape((l * 2, r)).expect("reshape")
    }

    fn move_center_right(&mut self) -> Result<()> {
        let c = self.center;
        let (l, _, r) = self.tensors[c].dim();
        let m = self.tensor_as_matrix_lp_r(c);
        let (u, s, vh) = linalg::svd_c(m.view())?;
        let chi = s.len();
        self.tensors[c] = reshape_u(&u, l, chi);
        let carry = scale_rows(&vh, &s);
        let next = &self.tensors[c + 1];
        let (_, _, r2) = next.dim();
        let next_m = next.clone().into_shape((r, 2 * r2)).expect("reshape");
        self.tensors[c + 1] = carry.dot(&next_m).into_shape((chi, 2, r2)).expect("reshape");
        self.center = c + 1;
        Ok(())
    }

    fn move_center_left(&mut self) -> Result<()> {
        let c = self.center;
        let (l, _, r) = self.tensors[c].dim();
        let m = self.tensors[c].clone().into_shape((l, 2 * r)).expect("reshape");
        let (u, s, vh) = linalg::svd_c(m.view())?;
        let chi = s.len();
        self.tensors[c] = vh.into_shape((chi, 2, r)).expect("reshape");
        let carry = scale_cols(&u, &s);
        let prev = &self.tensors[c - 1];
        let (l2, _, _) = prev.dim();
        let prev_m = prev.clone().into_shape((l2 * 2, l)).expect("reshape");
        self.tensors[c - 1] = prev_m.dot(&carry).into_shape((l2, 2, chi)).expect("reshape");
        self.center = c - 1;
        Ok(())
    }

    pub fn move_center_to(&mut self, site: usize) -> Result<()> {
        while self.center < site {
            self.move_center_right()?;
        }
        while self.center > site {
            self.move_center_left()?;
        }
        Ok(())
    }

    fn ensure_center_in(&mut self, lo: usize, hi: usize) -> Result<()> {
        if self.center < lo {
            self.move_center_to(lo)?;
        } else if self.center > hi {
            self.move_center_to(hi)?;
        }
        Ok(())
    }

    /// Apply a 2x2 unitary on one site; canonical structure is unaffected.
    pub fn apply_one_site(&mut self, site: usize, gate: &Array2<C64>) {
        let t = &mut self.tensors[site];
        let (l, _, r) = t.dim();
        for a in 0..l {
            for b in 0..r {
                let up = t[(a, 0, b)];
                let dn = t[(a, 1, b)];
                t[(a, 0, b)] = gate[(0, 0)] * up + gate[(0, 1)] * dn;
                t[(a, 1, b)] = gate[(1, 0)] * up + gate[(1, 1)] * dn;
            }
        }
    }

    /// Apply a 4x4 gate on sites (site, site+1) with SVD truncation; the
    /// center ends on site+1.
    pub fn apply_two_site(&mut self, site: usize, gate: &Array2<C64>) -> Result<()> {
        self.ensure_center_in(site, site + 1)?;
        let (l, _, k) = self.tensors[site].dim();
        let (_, _, r) = self.tensors[site + 1].dim();
        let a = self.tensor_as_matrix_lp_r(site);
        let b = self.tensors[site + 1].clone().into_shape((k, 2 * r)).expect("reshape");
        let theta = a.dot(&b); // (l*2, 2*r), rows (l, s1), cols (s2, r)
        let mut out: Array2<C64> = Array2::zeros((l * 2, 2 * r));
        for li in 0..l {
            for ri in 0..r {
                for s1 in 0..2 {
                    for s2 in 0..2 {
                        let mut acc = C64::new(0.0, 0.0);
                        for t1 in 0..2 {
                            for t2 in 0..2 {
                                acc += gate[(2 * s1 + s2, 2 * t1 + t2)]
                                    * theta[(li * 2 + t1, t2 * r + ri)];
                            }
                        }
                        out[(li * 2 + s1, s2 * r + ri)] = acc;
                    }
                }
            }
        }
        let (u, s, vh) = linalg::svd_c(out.view())?;
        let (keep, lost) = truncation_rank(&s, self.cutoff, self.chi_max);
        self.truncation_weight += lost;
        self.tensors[site] = reshape_u(&u, l, keep);
        let mut right = Array2::zeros((keep, 2 * r));
        for i in 0..keep {
            for j in 0..2 * r {
                right[(i, j)] = vh[(i, j)] * s[i];
            }
        }
        self.tensors[site + 1] = right.into_shape((keep, 2, r)).expect("reshape");
        self.center = site + 1;
        Ok(())
    }

    /// Apply an 8x8 gate on sites (site, site+1, site+2) with two SVD
    /// splits; the center ends on site+2.
    pub fn apply_three_site(&mut self, site: usize, gate: &Array2<C64>) -> Result<()> {
        self.ensure_center_in(site, site + 2)?;
        let (l, _, k1) = self.tensors[site].dim();
        let (_, _, k2) = self.tensors[site + 1].dim();
        let (_, _, r) = self.tensors[site + 2].dim();
        let a = self.tensor_as_matrix_lp_r(site);
        let b = self.tensors[site + 1].clone().into_shape((k1, 2 * k2)).expect("reshape");
        let c = self.tensors[site + 2].clone().into_shape((k2, 2 * r)).expect("reshape");
        let theta = a
            .dot(&b)
            .into_shape((l * 4, k2))
            .expect("reshape")
            .dot(&c); // (l*4, 2*r): rows (l, s1, s2), cols (s3, r)
        let mut out: Array2<C64> = Array2::zeros((l * 4, 2 * r));
        for li in 0..l {
            for ri in 0..r {
                for p in 0..8 {
                    let (s1, s2, s3) = (p >> 2, (p >> 1) & 1, p & 1);
                    let mut acc = C64::new(0.0, 0.0);
                    for q in 0..8 {
                        let (t1, t2, t3) = (q >> 2, (q >> 1) & 1, q & 1);
                        acc += gate[(p, q)] * theta[(li * 4 + t1 * 2 + t2, t3 * r + ri)];
                    }
                    out[(li * 4 + s1 * 2 + s2, s3 * r + ri)] = acc;
                }
            }
        }
        // First split: site | (site+1, site+2).
        let m1 = out.into_shape((l * 2, 4 * r)).expect("reshape");
        let (u, s, vh) = linalg::svd_c(m1.view())?;
        let (chi1, lost1) = truncation_rank(&s, self.cutoff, self.chi_max);
        self.truncation_weight += lost1;
        self.tensors[site] = reshape_u(&u, l, chi1);
        let mut rest = Array2::zeros((chi1, 4 * r));
        for i in 0..chi1 {
            for j in 0..4 * r {
                rest[(i, j)] = vh[(i, j)] * s[i];
            }
        }
        // Second split: site+1 | site+2.
        let m2 = rest.into_shape((chi1 * 2, 2 * r)).expect("reshape");
        let (u2, s2, vh2) = linalg::svd_c(m2.view())?;
        let (chi2, lost2) = truncation_rank(&s2, self.cutoff, self.chi_max);
        self.truncation_weight += lost2;
        self.tensors[site + 1] = reshape_u(&u2, chi1, chi2);
        let mut right = Array2::zeros((chi2, 2 * r));
        for i in 0..chi2 {
            for j in 0..2 * r {
                right[(i, j)] = vh2[(i, j)] * s2[i];
            }
        }
        self.tensors[site + 2] = right.into_shape((chi2, 2, r)).expect("reshape");
        self.center = site + 2;
        Ok(())
    }

    /// Schmidt values across the bond between sites `cut` and `cut + 1`
    /// (1-based, 1 <= cut < L). Leaves the left block in the Schmidt gauge:
    /// the right bond of tensor cut-1 labels the Schmidt vectors.
    pub fn schmidt_values(&mut self, cut: usize) -> Result<Array1<f64>> {
        if cut < 1 || cut >= self.length {
            return Err(Error::OutOfRange(format!("cut {cut} not in 1..{}", self.length)));
        }
        self.move_center_to(cut - 1)?;
        let (l, _, r) = self.tensors[cut - 1].dim();
        let m = self.tensor_as_matrix_lp_r(cut - 1);
        let (u, s, vh) = linalg::svd_c(m.view())?;
        let chi = s.len();
        self.tensors[cut - 1] = reshape_u(&u, l, chi);
        let carry = scale_rows(&vh, &s);
        let next = &self.tensors[cut];
        let (_, _, r2) = next.dim();
        let next_m = next.clone().into_shape((r, 2 * r2)).expect("reshape");
        self.tensors[cut] = carry.dot(&next_m).into_shape((chi, 2, r2)).expect("reshape");
        self.center = cut;
        Ok(s)
    }

    /// Renyi-2 entropy of sites 1..=cut.
    pub fn renyi2_at_cut(&mut self, cut: usize) -> Result<f64> {
        let s = self.schmidt_values(cut)?;
        let total: f64 = s.iter().map(|x| x * x).sum();
        let p4: f64 = s.iter().map(|x| (x * x / total).powi(2)).sum();
        Ok(-p4.log2())
    }

    pub fn sigma_z(&mut self, site: usize) -> Result<f64> {
        if site < 1 || site > self.length {
            return Err(Error::OutOfRange(format!("site {site} not in 1..={}", self.length)));
        }
        self.move_center_to(site - 1)?;
        let t = &self.tensors[site - 1];
        let (l, _, r) = t.dim();
        let mut num = 0.0;
        let mut den = 0.0;
        for a in 0..l {
            for s in 0..2 {
                for b in 0..r {
                    let w = t[(a, s, b)].norm_sqr();
                    num += spin_sign(s) * w;
                    den += w;
                }
            }
        }
        Ok(num / den)
    }

    /// Kink density (1 - <Z_i Z_{i+1}>) / 2 on link i.
    pub fn kink_density(&mut self, link: usize) -> Result<f64> {
        if link < 1 || link >= self.length {
            return Err(Error::OutOfRange(format!("link {link} not in 1..{}", self.length)));
        }
        self.move_center_to(link - 1)?;
        let (_, _, k) = self.tensors[link - 1].dim();
        let (_, _, r) = self.tensors[link].dim();
        let a = self.tensor_as_matrix_lp_r(link - 1);
        let b = self.tensors[link].clone().into_shape((k, 2 * r)).expect("reshape");
        let theta = a.dot(&b);
        let l = theta.nrows() / 2;
        let mut zz = 0.0;
        let mut den = 0.0;
        for li in 0..l {
            for s1 in 0..2 {
                for s2 in 0..2 {
                    for ri in 0..r {
                        let w = theta[(li * 2 + s1, s2 * r + ri)].norm_sqr();
                        zz += spin_sign(s1) * spin_sign(s2) * w;
                        den += w;
                    }
                }
            }
        }
        Ok((1.0 - zz / den) / 2.0)
    }

    pub fn kink_number_expectation(&mut self) -> Result<f64> {
        (1..self.length).map(|l| self.kink_density(l)).sum()
    }

    /// The duality circuit as a CNOT ladder: target sites from L down to 2,
    /// each controlled by its left neighbor's original spin.
    pub fn kw_apply(&mut self) -> Result<()> {
        let mut cnot: Array2<C64> = Array2::zeros((4, 4));
        for c in 0..2 {
            for t in 0..2 {
                cnot[(2 * c + (t ^ c), 2 * c + t)] = C64::new(1.0, 0.0);
            }
        }
        for target in (1..self.length).rev() {
            self.apply_two_site(target - 1, &cnot)?;
        }
        Ok(())
    }

    /// One second-order Trotter step of e^{-iH dt}: forward gate sweep at
    /// dt/2 followed by the reversed sweep at dt/2.
    pub fn tebd_step(&mut self, params: &ModelParams, dt: f64) -> Result<()> {
        self.half_sweep(params, dt / 2.0, true)?;
        self.half_sweep(params, dt / 2.0, false)
    }

    fn half_sweep(&mut self, params: &ModelParams, tau: f64, forward: bool) -> Result<()> {
        let length = self.length;
        let singles: Vec<(usize, Array2<C64>)> = (0..length)
            .filter_map(|site| {
                let gx = if site >= 1 && site + 1 < length { params.g } else { 0.0 };
                single_site_gate(params.h * tau, gx * tau).map(|g| (site, g))
            })
            .collect();
        let zz = (params.j0 != 0.0).then(|| zz_gate(params.j0 * tau));
        let zxz = (params.j3 != 0.0).then(|| zxz_gate(params.j3 * tau));
        if forward {
            for (site, g) in &singles {
                self.apply_one_site(*site, g);
            }
            if let Some(g) = &zz {
                for bond in 0..length - 1 {
                    self.apply_two_site(bond, g)?;
                }
            }
            if let Some(g) = &zxz {
                for triple in 0..length - 2 {
                    self.apply_three_site(triple, g)?;
                }
            }
        } else {
            if let Some(g) = &zxz {
                for triple in (0..length - 2).rev() {
                    self.apply_three_site(triple, g)?;
                }
            }
            if let Some(g) = &zz {
                for bond in (0..length - 1).rev() {
                    self.apply_two_site(bond, g)?;
                }
            }
            for (site, g) in singles.iter().rev() {
                self.apply_one_site(*site, g);
            }
        }
        Ok(())
    }

    /// Entanglement asymmetry Delta S2 of sites 1..=Q.subsystem_length via
    /// the uniform lambda average of Tr[rho e^{i lambda Q} rho e^{-i lambda Q}],
    /// exact once `k_points` exceeds the charge spectral range. The charge
    /// is diagonal, so each lambda costs one MPO-style sweep over the block
    /// at chi^3 per site.
    pub fn asymmetry_s2(&mut self, charge: &ChargeSpec, k_points: usize) -> Result<f64> {
        let cut = charge.subsystem_length;
        if cut >= self.length {
            return Err(Error::OutOfRange(format!(
                "charge subsystem {cut} must be smaller than the chain {}",
                self.length
            )));
        }
        if k_points <= charge.spectral_range() as usize {
            return Err(Error::Config(format!(
                "need more than {} lambda points for this charge, got {k_points}",
                charge.spectral_range()
            )));
        }
        let s = self.schmidt_values(cut)?;
        let total: f64 = s.iter().map(|x| x * x).sum();
        let p: Vec<f64> = s.iter().map(|x| x * x / total).collect();
        let purity: f64 = p.iter().map(|x| x * x).sum();
        let mut avg = 0.0;
        for j in 0..k_points {
            let lambda = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * j as f64 / k_points as f64;
            let m = self.charge_phase_overlap(charge, cut, lambda);
            let mut t = 0.0;
            for ki in 0..p.len() {
                for li in 0..p.len() {
                    t += p[ki] * p[li] * m[(ki, li)].norm_sqr();
                }
            }
            avg += t;
        }
        avg /= k_points as f64;
        Ok(-(avg / purity).log2())
    }

    /// M[k, l] = <phi_k| e^{i lambda Q} |phi_l> over the left Schmidt
    /// vectors, contracted site by site; the previous site's spin rides
    /// along as a two-state bond because the kink charge is a link charge.
    fn charge_phase_overlap(
        &self,
        charge: &ChargeSpec,
        cut: usize,
        lambda: f64,
    ) -> Array2<C64> {
        // env[prev][alpha, beta]; prev in {up, down} of the ket spin path.
        let mut env = [
            Array2::from_elem((1, 1), C64::new(1.0, 0.0)),
            Array2::zeros((1, 1)),
        ];
        for site in 1..=cut {
            let t = &self.tensors[site - 1];
            let (_, _, r) = t.dim();
            let mut next = [Array2::zeros((r, r)), Array2::zeros((r, r))];
            for s in 0..2 {
                let a_s = phys_slice(t, s);
                let a_s_conj = a_s.mapv(|x| x.conj());
                for prev in 0..2 {
                    if site == 1 && prev == 1 {
                        continue;
                    }
                    let inc = charge.site_increment(site, prev == 1, s == 1);
                    let phase = C64::from_polar(1.0, lambda * inc as f64);
                    let contrib = a_s_conj.t().dot(&env[prev]).dot(&a_s) * phase;
                    next[s] = &next[s] + &contrib;
                }
            }
            env = next;
        }
        &env[0] + &env[1]
    }
}

fn phys_slice(t: &Array3<C64>, s: usize) -> Array2<C64> {
    let (l, _, r) = t.dim();
    Array2::from_shape_fn((l, r), |(a, b)| t[(a, s, b)])
}

fn reshape_u(u: &Array2<C64>, l: usize, keep: usize) -> Array3<C64> {
    Array3::from_shape_fn((l, 2, keep), |(a, p, b)| u[(a * 2 + p, b)])
}

fn scale_rows(vh: &Array2<C64>, s: &Array1<f64>) -> Array2<C64> {
    Array2::from_shape_fn((s.len(), vh.ncols()), |(i, j)| vh[(i, j)] * s[i])
}

fn scale_cols(u: &Array2<C64>, s: &Array1<f64>) -> Array2<C64> {
    Array2::from_shape_fn((u.nrows(), s.len()), |(i, j)| u[(i, j)] * s[j])
}

/// Keep the largest singular values whose discarded squared weight stays
/// within cutoff * total, capped at chi_max; returns (rank, lost fraction).
fn truncation_rank(s: &Array1<f64>, cutoff: f64, chi_max: usize) -> (usize, f64) {
    let total: f64 = s.iter().map(|x| x * x).sum();
    if total == 0.0 {
        return (1, 0.0);
    }
    let mut discarded = 0.0;
    let mut keep = s.len();
    while keep > 1 {
        let next = discarded + s[keep - 1] * s[keep - 1];
        if keep > chi_max || next <= cutoff * total {
            discarded = next;
            keep -= 1;
        } else {
            break;
        }
    }
    (keep, discarded / total)
}

/// exp(i (tz Z + tx X)) in closed form; None when both angles vanish.
fn single_site_gate(tz: f64, tx: f64) -> Option<Array2<C64>> {
    let omega = (tz * tz + tx * tx).sqrt();
    if omega == 0.0 {
        return None;
    }
    let (c, s) = (omega.cos(), omega.sin());
    let i = C64::new(0.0, 1.0);
    let mut g = Array2::zeros((2, 2));
    g[(0, 0)] = C64::new(c, 0.0) + i * s * (tz / omega);
    g[(1, 1)] = C64::new(c, 0.0) - i * s * (tz / omega);
    g[(0, 1)] = i * s * (tx / omega);
    g[(1, 0)] = i * s * (tx / omega);
    Some(g)
}

/// exp(i theta Z Z): diagonal 4x4.
fn zz_gate(theta: f64) -> Array2<C64> {
    let mut g = Array2::zeros((4, 4));
    for s1 in 0..2 {
        for s2 in 0..2 {
            let z = spin_sign(s1) * spin_sign(s2);
            g[(2 * s1 + s2, 2 * s1 + s2)] = C64::from_polar(1.0, theta * z);
        }
    }
    g
}

/// exp(i theta Z X Z) = cos I + i sin ZXZ.
fn zxz_gate(theta: f64) -> Array2<C64> {
    let (c, s) = (theta.cos(), theta.sin());
    let i = C64::new(0.0, 1.0);
    let mut g = Array2::zeros((8, 8));
    for p in 0..8 {
        g[(p, p)] = C64::new(c, 0.0);
        let (s1, s2, s3) = (p >> 2, (p >> 1) & 1, p & 1);
        let q = (s1 << 2) | ((1 - s2) << 1) | s3;
        g[(p, q)] += i * s * spin_sign(s1) * spin_sign(s3);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{build_hamiltonian, Propagator};

    fn dense_close(a: &DenseState, b: &DenseState, tol: f64) -> f64 {
        a.amplitudes
            .iter()
            .zip(b.amplitudes.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0f64, |acc, d| {
                assert!(d < tol, "amplitude diff {d} exceeds {tol}");
                acc.max(d)
            })
    }

    #[test]
    fn pattern_roundtrip() {
        let p = SpinPattern::parse("uudduuud").unwrap();
        let mps = MpsState::from_pattern(&p);
        let dense = mps.to_dense().unwrap();
        let oracle = DenseState::from_pattern(&p);
        dense_close(&dense, &oracle, 1e-14);
        assert!((mps.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn from_dense_roundtrip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let length = 7;
        let mut amps = Array1::from_shape_fn(1 << length, |_| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.mapv_inplace(|a| a / norm);
        let dense = DenseState::new(amps, length).unwrap();
        let mps = MpsState::from_dense(&dense, 0.0, 1 << length).unwrap();
        dense_close(&mps.to_dense().unwrap(), &dense, 1e-12);
    }

    #[test]
    fn center_moves_preserve_state() {
        let p = SpinPattern::domain_wall(6, 3, 2).unwrap();
        let mut mps = MpsState::from_pattern(&p);
        let before = mps.to_dense().unwrap();
        mps.move_center_to(5).unwrap();
        mps.move_center_to(0).unwrap();
        mps.move_center_to(3).unwrap();
        dense_close(&mps.to_dense().unwrap(), &before, 1e-13);
    }

    #[test]
    fn tebd_matches_dense_propagator() {
        let length = 6;
        let p = ModelParams::new(1.0, 0.6, 0.3, 0.25, length).unwrap();
        let prop = Propagator::new(&build_hamiltonian(&p).unwrap()).unwrap();
        let psi0 = SpinPattern::domain_wall(length, 3, 2).unwrap();
        let t_final = 1.0f64;
        let dt = 0.01f64;
        let mut mps = MpsState::from_pattern(&psi0);
        mps.cutoff = 0.0;
        for _ in 0..(t_final / dt).round() as usize {
            mps.tebd_step(&p, dt).unwrap();
        }
        let dense = prop.evolve(&DenseState::from_pattern(&psi0), t_final);
        let diff = mps
            .to_dense()
            .unwrap()
            .amplitudes
            .iter()
            .zip(dense.amplitudes.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0f64, f64::max);
        assert!(diff < 2e-4, "Trotter error {diff}");
    }

    #[test]
    fn trotter_error_is_second_order() {
        let length = 5;
        let p = ModelParams::new(1.0, 0.7, 0.2, -0.3, length).unwrap();
        let prop = Propagator::new(&build_hamiltonian(&p).unwrap()).unwrap();
        let psi0 = SpinPattern::domain_wall(length, 2, 2).unwrap();
        let dense = prop.evolve(&DenseState::from_pattern(&psi0), 0.5);
        let err_at = |dt: f64| {
            let mut mps = MpsState::from_pattern(&psi0);
            mps.cutoff = 0.0;
            for _ in 0..(0.5 / dt).round() as usize {
                mps.tebd_step(&p, dt).unwrap();
            }
            mps.to_dense()
                .unwrap()
                .amplitudes
                .iter()
                .zip(dense.amplitudes.iter())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0f64, f64::max)
        };
        let coarse = err_at(0.05);
        let fine = err_at(0.025);
        let ratio = coarse / fine;
        assert!(
            ratio > 3.0 && ratio < 5.0,
            "halving dt should cut the error ~4x, got {ratio} ({coarse} / {fine})"
        );
    }

    #[test]
    fn kw_ladder_matches_dense_circuit() {
        let length = 7;
        let p = ModelParams::new(1.0, 0.8, 0.15, -0.8, length).unwrap();
        let prop = Propagator::new(&build_hamiltonian(&p).unwrap()).unwrap();
        let psi = prop.evolve(
            &DenseState::from_pattern(&SpinPattern::domain_wall(length, 3, 2).unwrap()),
            1.7,
        );
        let mut mps = MpsState::from_dense(&psi, 0.0, 1 << length).unwrap();
        mps.kw_apply().unwrap();
        let oracle = psi.kw_circuit();
        dense_close(&mps.to_dense().unwrap(), &oracle, 1e-10);
    }

    #[test]
    fn entropy_and_observables_match_dense() {
        let length = 8;
        let p = ModelParams::new(1.0, 0.7, 0.25, -0.7, length).unwrap();
        let prop = Propagator::new(&build_hamiltonian(&p).unwrap()).unwrap();
        let psi = prop.evolve(
            &DenseState::from_pattern(&SpinPattern::domain_wall(length, 3, 3).unwrap()),
            2.4,
        );
        let mut mps = MpsState::from_dense(&psi, 1e-14, 1 << length).unwrap();
        for cut in 1..length {
            let oracle = psi.reduce(cut).unwrap().renyi2();
            let s2 = mps.renyi2_at_cut(cut).unwrap();
            assert!((s2 - oracle).abs() < 1e-9, "cut {cut}: {s2} vs {oracle}");
        }
        for site in 1..=length {
            let oracle = psi.sigma_z_expectation(site).unwrap();
            assert!((mps.sigma_z(site).unwrap() - oracle).abs() < 1e-10);
        }
        for link in 1..length {
            let oracle = psi.kink_density(link).unwrap();
            assert!((mps.kink_density(link).unwrap() - oracle).abs() < 1e-10);
        }
    }

    #[test]
    fn truncation_rank_basics() {
        let s = Array1::from(vec![1.0, 0.5, 1e-9, 1e-12]);
        let (keep, lost) = truncation_rank(&s, 1e-12, 10);
        assert_eq!(keep, 2);
        assert!(lost > 0.0 && lost < 1e-15 * 1e3);
        let (capped, _) = truncation_rank(&s, 0.0, 3);
        assert_eq!(capped, 3);
    }
}
