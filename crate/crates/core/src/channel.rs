//! Fading draws for one scheme invocation.
//!
//! Channels are i.i.d. Rayleigh: every entry of every `h_t` and `g_t` is
//! `CN(0, 1)` (real and imaginary parts independent `N(0, 1/2)`).
//!
//! Reproducibility contract: trial `k` under base seed `s` draws from
//! `ChaCha20Rng::seed_from_u64(s)` switched to stream `k`. Within a block the
//! draw order is `h_1, ..., h_T` then `g_1, ..., g_T`, each vector antenna by
//! antenna, real part before imaginary part, using `rand_distr::StandardNormal`
//! scaled by `sqrt(1/2)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Base seed of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Independent stream for one trial. Depends only on the base seed and the
    /// trial index, never on which worker runs the trial.
    pub fn trial_rng(self, trial: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.0);
        rng.set_stream(trial);
        rng
    }
}

impl Default for RngSeed {
    fn default() -> Self {
        RngSeed(1)
    }
}

/// Legitimate (`h`) and eavesdropper (`g`) channel vectors for `T` slots.
/// Slot indices are zero-based: `h(0)` is the first slot's channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelBlock {
    antennas: usize,
    h: Vec<Vec<Complex64>>,
    g: Vec<Vec<Complex64>>,
}

fn circular_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

impl ChannelBlock {
    pub fn new(h: Vec<Vec<Complex64>>, g: Vec<Vec<Complex64>>) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::NoSlots);
        }
        if h.len() != g.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} legitimate slots but {} eavesdropper slots",
                h.len(),
                g.len()
            )));
        }
        let antennas = h[0].len();
        if antennas < 2 {
            return Err(Error::TooFewAntennas(antennas));
        }
        if h.iter().chain(&g).any(|v| v.len() != antennas) {
            return Err(Error::DimensionMismatch(
                "channel vectors differ in length".into(),
            ));
        }
        if h
            .iter()
            .chain(&g)
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self { antennas, h, g })
    }

    /// Draws a fresh block. See the module docs for the draw order.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, antennas: usize, slots: usize) -> Result<Self> {
        if antennas < 2 {
            return Err(Error::TooFewAntennas(antennas));
        }
        if slots == 0 {
            return Err(Error::NoSlots);
        }
        let draw = |rng: &mut R| -> Vec<Vec<Complex64>> {
            (0..slots)
                .map(|_| (0..antennas).map(|_| circular_gaussian(rng)).collect())
                .collect()
        };
        let h = draw(rng);
        let g = draw(rng);
        Ok(Self { antennas, h, g })
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn slots(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self, slot: usize) -> &[Complex64] {
        &self.h[slot]
    }

    pub fn g(&self, slot: usize) -> &[Complex64] {
        &self.g[slot]
    }

    pub fn h_all(&self) -> &[Vec<Complex64>] {
        &self.h
    }

    pub fn g_all(&self) -> &[Vec<Complex64>] {
        &self.g
    }

    /// Same realisation with the two receivers exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            antennas: self.antennas,
            h: self.g.clone(),
            g: self.h.clone(),
        }
    }

    /// Same realisation with the eavesdropper sequence replaced.
    pub fn with_g(&self, g: Vec<Vec<Complex64>>) -> Result<Self> {
        Self::new(self.h.clone(), g)
    }

    /// Reorders slots: slot `t` of the result is slot `order[t]` of `self`.
    pub fn permute_slots(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.slots() || order.iter().any(|&t| t >= self.slots()) {
            return Err(Error::DimensionMismatch("invalid slot permutation".into()));
        }
        Self::new(
            order.iter().map(|&t| self.h[t].clone()).collect(),
            order.iter().map(|&t| self.g[t].clone()).collect(),
        )
    }

    pub(crate) fn expect_shape(&self, antennas: usize, slots: usize) -> Result<()> {
        if self.antennas != antennas || self.slots() != slots {
            return Err(Error::BlockShape {
                expected: slots,
                antennas,
                slots: self.slots(),
                got: self.antennas,
            });
        }
        Ok(())
    }
}
