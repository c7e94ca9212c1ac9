//! Shared domain types: model parameters, classical spin patterns, kink
//! observables on patterns, and the Kramers-Wannier pattern transform.
//!
//! Conventions used everywhere in this crate:
//! - Sites are numbered 1..=L. Spin values are +1 (up) and -1 (down).
//! - In dense basis indices, site 1 is the most significant bit and spin-up
//!   maps to bit 0.
//! - A kink lives on link (i, i+1) and is present when the two spins
//!   anti-align.
//!
//! Note on Hamiltonian index ranges: the transverse field acts on sites
//! 2..=L-1 only, the longitudinal field on 1..=L, and the three-body term on
//! triples starting at 1..=L-2. Boundary spins carry no transverse field;
//! this matters when comparing small-L spectra against naive all-site
//! builders.

use std::fmt;

use crate::error::{Error, Result};

/// Couplings and chain length of the Ising chain with transverse field `g`,
/// longitudinal (confining) field `h`, and three-body kink-kinetic coupling
/// `j3`:
///
/// ```text
/// H = -j0 Σ_{i=1}^{L-1} σz_i σz_{i+1} - g Σ_{i=2}^{L-1} σx_i
///     - h Σ_{i=1}^{L} σz_i - j3 Σ_{i=1}^{L-2} σz_i σx_{i+1} σz_{i+2}
/// ```
///
/// Energies are in units of `j0` (conventionally 1) and times in units of
/// `1/j0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub j0: f64,
    pub g: f64,
    pub h: f64,
    pub j3: f64,
    pub length: usize,
}

impl ModelParams {
    pub fn new(j0: f64, g: f64, h: f64, j3: f64, length: usize) -> Result<Self> {
        if length < 4 {
            return Err(Error::OutOfRange(format!(
                "chain length must be >= 4, got {length}"
            )));
        }
        Ok(Self { j0, g, h, j3, length })
    }

    /// True iff the dynamics conserves kink number (j3 == -g exactly).
    pub fn kink_conserving(&self) -> bool {
        self.j3 == -self.g
    }

    /// Kink hopping amplitude g - j3; sets the kink group velocity.
    pub fn hopping(&self) -> f64 {
        self.g - self.j3
    }

    /// Kink pair-creation amplitude g + j3; vanishes in the conserving case.
    pub fn pairing(&self) -> f64 {
        self.g + self.j3
    }
}

/// A classical product configuration of L spins, each +1 or -1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinPattern {
    spins: Vec<i8>,
}

impl SpinPattern {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::OutOfRange("spins must be +1 or -1".into()));
        }
        Ok(Self { spins })
    }

    pub fn all_up(length: usize) -> Self {
        Self { spins: vec![1; length] }
    }

    /// Domain-wall product state: spins down on sites j..=j+n-1, up elsewhere.
    ///
    /// The domain must be strictly interior (2 <= j, j+n-1 <= L-1) so that
    /// the pattern carries exactly two kinks.
    pub fn domain_wall(length: usize, j: usize, n: usize) -> Result<Self> {
        if n < 1 || j < 2 || j + n - 1 > length.saturating_sub(1) {
            return Err(Error::OutOfRange(format!(
                "domain [{j}, {}] must lie strictly inside a chain of length {length}",
                j + n.max(1) - 1
            )));
        }
        let mut spins = vec![1i8; length];
        for s in &mut spins[j - 1..j + n - 1] {
            *s = -1;
        }
        Ok(Self { spins })
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    /// Spin at site i (1-based).
    pub fn spin(&self, i: usize) -> i8 {
        self.spins[i - 1]
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    /// Number of anti-aligned links, Σ_{i=1}^{L-1} (1 - s_i s_{i+1}) / 2.
    pub fn kink_count(&self) -> usize {
        self.spins
            .windows(2)
            .filter(|w| w[0] != w[1])
            .count()
    }

    /// Kramers-Wannier transform: t_1 = s_1, t_i = s_{i-1} s_i for i >= 2.
    /// Maps the kink on link (i-1, i) to a down spin on site i.
    pub fn kw_forward(&self) -> Self {
        let s = &self.spins;
        let spins = (0..s.len())
            .map(|i| if i == 0 { s[0] } else { s[i - 1] * s[i] })
            .collect();
        Self { spins }
    }

    /// Inverse Kramers-Wannier transform: s_i = Π_{k<=i} t_k.
    pub fn kw_inverse(&self) -> Self {
        let mut acc = 1i8;
        let spins = self
            .spins
            .iter()
            .map(|&t| {
                acc *= t;
                acc
            })
            .collect();
        Self { spins }
    }

    /// Dense basis index: site 1 is the most significant bit, up -> 0.
    pub fn to_index(&self) -> usize {
        self.spins
            .iter()
            .fold(0usize, |acc, &s| (acc << 1) | usize::from(s == -1))
    }

    pub fn from_index(length: usize, index: usize) -> Self {
        let spins = (0..length)
            .map(|i| {
                let bit = (index >> (length - 1 - i)) & 1;
                if bit == 0 { 1 } else { -1 }
            })
            .collect();
        Self { spins }
    }

    /// If the pattern is a strictly interior single flipped domain, return
    /// its (j, n): down spins exactly on sites j..=j+n-1.
    pub fn as_domain(&self) -> Option<(usize, usize)> {
        let first = self.spins.iter().position(|&s| s == -1)?;
        let last = self.spins.iter().rposition(|&s| s == -1)?;
        if self.spins[first..=last].iter().any(|&s| s != -1) {
            return None;
        }
        let (j, n) = (first + 1, last - first + 1);
        if j < 2 || last + 1 >= self.len() {
            return None;
        }
        Some((j, n))
    }

    /// Parse from the `u`/`d` ASCII form used in config files and CSVs.
    pub fn parse(text: &str) -> Result<Self> {
        let spins: Result<Vec<i8>> = text
            .chars()
            .map(|c| match c {
                'u' => Ok(1),
                'd' => Ok(-1),
                other => Err(Error::Config(format!(
                    "pattern characters must be 'u' or 'd', got {other:?}"
                ))),
            })
            .collect();
        Ok(Self { spins: spins? })
    }
}

impl fmt::Display for SpinPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.spins {
            write!(f, "{}", if s == 1 { 'u' } else { 'd' })?;
        }
        Ok(())
    }
}

/// Which charge operator a projection refers to. All three kinds are
/// diagonal in the z product basis and have integer spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChargeKind {
    /// Down-spin count on sites 1..=L_A.
    SiteNumber,
    /// Kink count on links (1,2)..(L_A-1, L_A).
    LinkKink,
    /// Down-spin count on sites 2..=L_A (site 1 excluded); the image of the
    /// kink charge under the Kramers-Wannier transform.
    KwSiteNumber,
}

/// A charge operator restricted to the left subsystem of `subsystem_length`
/// sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChargeSpec {
    pub kind: ChargeKind,
    pub subsystem_length: usize,
}

impl ChargeSpec {
    pub fn new(kind: ChargeKind, subsystem_length: usize) -> Result<Self> {
        if subsystem_length < 1 {
            return Err(Error::OutOfRange("subsystem must have >= 1 site".into()));
        }
        Ok(Self { kind, subsystem_length })
    }

    /// Charge eigenvalue of a z-basis state of the subsystem, indexed with
    /// site 1 as the most significant bit.
    pub fn eval(&self, index: usize) -> u32 {
        let la = self.subsystem_length;
        let down = |site: usize| -> u32 { ((index >> (la - site)) & 1) as u32 };
        match self.kind {
            ChargeKind::SiteNumber => (1..=la).map(down).sum(),
            ChargeKind::KwSiteNumber => (2..=la).map(down).sum(),
            ChargeKind::LinkKink => (1..la).map(|i| down(i) ^ down(i + 1)).sum(),
        }
    }

    /// Largest possible eigenvalue; the spectrum is 0..=spectral_range().
    pub fn spectral_range(&self) -> u32 {
        match self.kind {
            ChargeKind::SiteNumber => self.subsystem_length as u32,
            ChargeKind::KwSiteNumber => self.subsystem_length as u32 - 1,
            ChargeKind::LinkKink => self.subsystem_length as u32 - 1,
        }
    }

    /// Charge increment contributed by site `site` (1-based within the
    /// subsystem) when its spin is down, given the previous site's spin.
    /// Used by gate/MPO builders; for LinkKink the increment depends on the
    /// pair, for the site kinds only on the site itself.
    pub fn site_increment(&self, site: usize, prev_down: bool, down: bool) -> u32 {
        match self.kind {
            ChargeKind::SiteNumber => u32::from(down),
            ChargeKind::KwSiteNumber => u32::from(site >= 2 && down),
            ChargeKind::LinkKink => u32::from(site >= 2 && (prev_down != down)),
        }
    }
}
