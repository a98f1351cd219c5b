//! Transmission schemes as explicit linear Gaussian models.
//!
//! Every builder works in two stages. The transmit side is computed by a
//! `*_precoding` function that receives only the channel coefficients the
//! transmitter is allowed to know when it precodes each slot (for the
//! delayed-CSIT schemes, coefficients of strictly earlier slots). The receive
//! side then applies the true channels of the block to obtain one
//! [`LinearModel`] per receiver.
//!
//! Slot `t` sends `x_t = alpha_t * sum_k B_{t,k} s_k`, where `s_k` are the
//! Gaussian symbol blocks (artificial noise `u`, messages `v`, `v1`, `v2`),
//! `B_{t,k}` the raw precoders and `alpha_t` the per-slot normaliser that
//! makes the expected transmit power of every slot exactly `P`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelBlock;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, LinearModel, Role, SignalComponent};

/// Antennas used by every builder.
pub const ANTENNAS: usize = 2;

/// Thermal noise variance at every receiver.
pub const NOISE_VARIANCE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SchemeId {
    #[serde(rename = "wiretap-sym")]
    WiretapSymmetric3Slot,
    #[serde(rename = "wiretap-asym")]
    WiretapAsymmetric2Slot,
    #[serde(rename = "bcc")]
    Bcc4Slot,
    #[serde(rename = "perfect-csit-wiretap")]
    BaselinePerfectCsitWiretap,
    #[serde(rename = "perfect-csit-bcc")]
    BaselinePerfectCsitBcc,
    #[serde(rename = "no-csit")]
    BaselineNoCsit,
}

impl SchemeId {
    pub const ALL: [SchemeId; 6] = [
        SchemeId::WiretapSymmetric3Slot,
        SchemeId::WiretapAsymmetric2Slot,
        SchemeId::Bcc4Slot,
        SchemeId::BaselinePerfectCsitWiretap,
        SchemeId::BaselinePerfectCsitBcc,
        SchemeId::BaselineNoCsit,
    ];

    pub fn slots(self) -> usize {
        match self {
            SchemeId::WiretapSymmetric3Slot => 3,
            SchemeId::WiretapAsymmetric2Slot => 2,
            SchemeId::Bcc4Slot => 4,
            SchemeId::BaselinePerfectCsitWiretap
            | SchemeId::BaselinePerfectCsitBcc
            | SchemeId::BaselineNoCsit => 1,
        }
    }

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            SchemeId::WiretapSymmetric3Slot => "wiretap-sym",
            SchemeId::WiretapAsymmetric2Slot => "wiretap-asym",
            SchemeId::Bcc4Slot => "bcc",
            SchemeId::BaselinePerfectCsitWiretap => "perfect-csit-wiretap",
            SchemeId::BaselinePerfectCsitBcc => "perfect-csit-bcc",
            SchemeId::BaselineNoCsit => "no-csit",
        }
    }

    /// Schemes carrying two confidential messages, one per receiver.
    pub fn is_two_user(self) -> bool {
        matches!(self, SchemeId::Bcc4Slot | SchemeId::BaselinePerfectCsitBcc)
    }

    pub fn build(self, block: &ChannelBlock, power: f64) -> Result<SchemeRealization> {
        match self {
            SchemeId::WiretapSymmetric3Slot => build_symmetric_wiretap(block, power),
            SchemeId::WiretapAsymmetric2Slot => build_asymmetric_wiretap(block, power),
            SchemeId::Bcc4Slot => build_bcc(block, power),
            SchemeId::BaselinePerfectCsitWiretap => build_baseline_perfect_csit_wiretap(block, power),
            SchemeId::BaselinePerfectCsitBcc => build_baseline_perfect_csit_bcc(block, power),
            SchemeId::BaselineNoCsit => build_baseline_no_csit(block, power),
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = SchemeId::ALL.iter().map(|id| id.name()).collect();
                Error::Config(format!("unknown scheme {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Receivers of a realisation. The wiretap schemes populate `Legitimate`
/// (channel `h`) and `Eavesdropper` (channel `g`); the two-user schemes
/// populate `Receiver1` (channel `h`) and `Receiver2` (channel `g`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Receiver {
    Legitimate,
    Eavesdropper,
    Receiver1,
    Receiver2,
}

/// A block of i.i.d. Gaussian scalar symbols sharing one variance.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolBlock {
    pub label: &'static str,
    pub dim: usize,
    /// Variance of each scalar symbol before normalisation.
    pub power: f64,
}

/// Transmit-side description: symbol blocks and raw precoders
/// (`precoders[t][k]` is the `M x dim_k` matrix applied to block `k` in slot `t`).
#[derive(Debug, Clone, PartialEq)]
pub struct Precoding {
    pub symbols: Vec<SymbolBlock>,
    pub precoders: Vec<Vec<ComplexMatrix>>,
}

/// One scheme invocation over one channel block.
#[derive(Debug, Clone)]
pub struct SchemeRealization {
    scheme: SchemeId,
    power: f64,
    precoding: Precoding,
    normalizers: Vec<f64>,
    models: BTreeMap<Receiver, LinearModel>,
}

impl SchemeRealization {
    pub fn scheme(&self) -> SchemeId {
        self.scheme
    }

    pub fn slots(&self) -> usize {
        self.normalizers.len()
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn precoding(&self) -> &Precoding {
        &self.precoding
    }

    pub fn normalizers(&self) -> &[f64] {
        &self.normalizers
    }

    pub fn models(&self) -> &BTreeMap<Receiver, LinearModel> {
        &self.models
    }

    pub fn model(&self, receiver: Receiver) -> Result<&LinearModel> {
        self.models.get(&receiver).ok_or_else(|| {
            Error::InvalidModel(format!("{} has no {receiver:?} model", self.scheme))
        })
    }

    /// Expected transmit power of slot `t` after normalisation,
    /// `alpha_t^2 * sum_k P_k ||B_{t,k}||_F^2`.
    pub fn slot_power(&self, slot: usize) -> f64 {
        self.normalizers[slot].powi(2) * raw_slot_power(&self.precoding, slot)
    }
}

fn raw_slot_power(precoding: &Precoding, slot: usize) -> f64 {
    precoding.precoders[slot]
        .iter()
        .zip(&precoding.symbols)
        .map(|(b, s)| s.power * b.norm_sqr())
        .sum()
}

/// Per-slot scaling `alpha_t = sqrt(P / raw_t)` where `raw_t` is the expected
/// power of slot `t` before scaling.
pub fn normalize_slots(precoding: &Precoding, power: f64) -> Result<Vec<f64>> {
    check_power(power)?;
    (0..precoding.precoders.len())
        .map(|t| {
            let raw = raw_slot_power(precoding, t);
            if raw <= 0.0 || !raw.is_finite() {
                return Err(Error::DegenerateSlot { slot: t });
            }
            Ok((power / raw).sqrt())
        })
        .collect()
}

fn check_power(power: f64) -> Result<()> {
    if power.is_finite() && power > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidPower(power))
    }
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `[c^T; 0]`: `c^T s` on the first antenna, nothing on the others.
fn first_antenna(coeffs: &[Complex64]) -> ComplexMatrix {
    let mut entries = coeffs.to_vec();
    entries.extend(std::iter::repeat_n(zero(), coeffs.len() * (ANTENNAS - 1)));
    ComplexMatrix::new(ANTENNAS, coeffs.len(), entries).expect("finite channel coefficients")
}

fn silent(dim: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(ANTENNAS, dim)
}

/// Unit vector `w` with `c^T w = 0` for a 2-antenna channel `c`.
fn null_beam(c: &[Complex64], what: &'static str) -> Result<ComplexMatrix> {
    let norm = (c[0].norm_sqr() + c[1].norm_sqr()).sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateChannel(what));
    }
    ComplexMatrix::column(&[c[1] / norm, -c[0] / norm])
}

fn receive_model(
    precoding: &Precoding,
    normalizers: &[f64],
    channels: &[Vec<Complex64>],
    useful: &str,
) -> Result<LinearModel> {
    let components = precoding
        .symbols
        .iter()
        .enumerate()
        .map(|(k, symbol)| {
            let rows = channels
                .iter()
                .zip(&precoding.precoders)
                .zip(normalizers)
                .map(|((c, slot), &alpha)| {
                    Ok(ComplexMatrix::row(c)?.matmul(&slot[k])?.scale(alpha))
                })
                .collect::<Result<Vec<_>>>()?;
            let matrix = rows
                .iter()
                .skip(1)
                .try_fold(rows[0].clone(), |acc, r| acc.vstack(r))?;
            let role = if symbol.label == useful {
                Role::Useful
            } else {
                Role::Nuisance
            };
            SignalComponent::new(symbol.label, matrix, symbol.power, role)
        })
        .collect::<Result<Vec<_>>>()?;
    LinearModel::new(components, NOISE_VARIANCE)
}

fn realize(
    scheme: SchemeId,
    block: &ChannelBlock,
    power: f64,
    precoding: Precoding,
    receivers: [(Receiver, &[Vec<Complex64>], &str); 2],
) -> Result<SchemeRealization> {
    let normalizers = normalize_slots(&precoding, power)?;
    let models = receivers
        .into_iter()
        .map(|(r, channels, useful)| {
            Ok((r, receive_model(&precoding, &normalizers, channels, useful)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    debug_assert_eq!(block.slots(), normalizers.len());
    Ok(SchemeRealization {
        scheme,
        power,
        precoding,
        normalizers,
        models,
    })
}

fn check_inputs(block: &ChannelBlock, scheme: SchemeId, power: f64) -> Result<()> {
    if block.antennas() != ANTENNAS {
        return Err(Error::BlockShape {
            expected: scheme.slots(),
            antennas: ANTENNAS,
            slots: block.slots(),
            got: block.antennas(),
        });
    }
    block.expect_shape(ANTENNAS, scheme.slots())?;
    check_power(power)
}

/// Transmit side of the three-slot scheme. Needs `h_1` (for slots 2 and 3)
/// and `g_2` (for slot 3).
pub fn symmetric_precoding(h1: &[Complex64], g2: &[Complex64], power: f64) -> Precoding {
    let symbols = vec![
        SymbolBlock { label: "u", dim: 2, power: power / 2.0 },
        SymbolBlock { label: "v", dim: 2, power: power / 2.0 },
    ];
    let g21 = g2[0];
    let h1_scaled: Vec<Complex64> = h1.iter().map(|&x| g21 * x).collect();
    let precoders = vec![
        // x1 = u
        vec![ComplexMatrix::identity(2), silent(2)],
        // x2 = v + [h1^T u, 0]^T
        vec![first_antenna(h1), ComplexMatrix::identity(2)],
        // x3 = [g2^T v + g21 h1^T u, 0]^T
        vec![first_antenna(&h1_scaled), first_antenna(g2)],
    ];
    Precoding { symbols, precoders }
}

/// Three-slot artificial-noise scheme for the wiretap channel with delayed
/// CSIT on both channels. Four symbols `u = (u1, u2)`, `v = (v1, v2)` of
/// variance `P/2` each.
pub fn build_symmetric_wiretap(block: &ChannelBlock, power: f64) -> Result<SchemeRealization> {
    let scheme = SchemeId::WiretapSymmetric3Slot;
    check_inputs(block, scheme, power)?;
    let precoding = symmetric_precoding(block.h(0), block.g(1), power);
    realize(
        scheme,
        block,
        power,
        precoding,
        [
            (Receiver::Legitimate, block.h_all(), "v"),
            (Receiver::Eavesdropper, block.g_all(), "v"),
        ],
    )
}

/// Transmit side of the two-slot scheme. Reads `h_1` only.
pub fn asymmetric_precoding(h1: &[Complex64], power: f64) -> Precoding {
    let symbols = vec![
        SymbolBlock { label: "u", dim: 2, power: power / 2.0 },
        SymbolBlock { label: "v", dim: 1, power: power / 2.0 },
    ];
    let second_antenna = ComplexMatrix::column(&[zero(), Complex64::new(1.0, 0.0)])
        .expect("finite constant");
    let precoders = vec![
        // x1 = u
        vec![ComplexMatrix::identity(2), silent(1)],
        // x2 = [h1^T u, v]^T
        vec![first_antenna(h1), second_antenna],
    ];
    Precoding { symbols, precoders }
}

/// Two-slot artificial-noise scheme for delayed CSIT on the legitimate
/// channel only. Symbols `u = (u1, u2)` and `v`, variance `P/2` each.
pub fn build_asymmetric_wiretap(block: &ChannelBlock, power: f64) -> Result<SchemeRealization> {
    let scheme = SchemeId::WiretapAsymmetric2Slot;
    check_inputs(block, scheme, power)?;
    let precoding = asymmetric_precoding(block.h(0), power);
    realize(
        scheme,
        block,
        power,
        precoding,
        [
            (Receiver::Legitimate, block.h_all(), "v"),
            (Receiver::Eavesdropper, block.g_all(), "v"),
        ],
    )
}

/// Transmit side of the four-slot confidential broadcast scheme. Needs
/// `h_1`, `g_1` (slots 2-4), `g_2` and `h_3` (slot 4).
pub fn bcc_precoding(
    h1: &[Complex64],
    g1: &[Complex64],
    g2: &[Complex64],
    h3: &[Complex64],
    power: f64,
) -> Precoding {
    let symbols = vec![
        SymbolBlock { label: "u", dim: 2, power: power / 3.0 },
        SymbolBlock { label: "v1", dim: 2, power: power / 3.0 },
        SymbolBlock { label: "v2", dim: 2, power: power / 3.0 },
    ];
    let (h31, g21) = (h3[0], g2[0]);
    let an_mix: Vec<Complex64> = g1
        .iter()
        .zip(h1)
        .map(|(&g, &h)| h31 * g + g21 * h)
        .collect();
    let precoders = vec![
        // x1 = u
        vec![ComplexMatrix::identity(2), silent(2), silent(2)],
        // x2 = v1 + [h1^T u, 0]^T
        vec![first_antenna(h1), ComplexMatrix::identity(2), silent(2)],
        // x3 = v2 + [g1^T u, 0]^T
        vec![first_antenna(g1), silent(2), ComplexMatrix::identity(2)],
        // x4 = [g2^T v1 + h3^T v2 + (h31 g1^T + g21 h1^T) u, 0]^T
        vec![first_antenna(&an_mix), first_antenna(g2), first_antenna(h3)],
    ];
    Precoding { symbols, precoders }
}

/// Four-slot artificial-noise scheme for the two-user broadcast channel with
/// confidential messages. Six symbols `u`, `v1`, `v2` (two each) of variance
/// `P/3`. Receiver 1 observes through `h`, receiver 2 through `g`; the models
/// are emitted with the receiver's own message tagged useful and the rest as
/// nuisance, to be re-tagged per evaluated quantity.
pub fn build_bcc(block: &ChannelBlock, power: f64) -> Result<SchemeRealization> {
    let scheme = SchemeId::Bcc4Slot;
    check_inputs(block, scheme, power)?;
    let precoding = bcc_precoding(block.h(0), block.g(0), block.g(1), block.h(2), power);
    realize(
        scheme,
        block,
        power,
        precoding,
        [
            (Receiver::Receiver1, block.h_all(), "v1"),
            (Receiver::Receiver2, block.g_all(), "v2"),
        ],
    )
}

/// Single-slot zero-forcing baseline with instantaneous CSIT: the message is
/// beamformed into the null space of `g_1^T`, artificial noise into the null
/// space of `h_1^T`, `P/2` each.
pub fn build_baseline_perfect_csit_wiretap(
    block: &ChannelBlock,
    power: f64,
) -> Result<SchemeRealization> {
    let scheme = SchemeId::BaselinePerfectCsitWiretap;
    check_inputs(block, scheme, power)?;
    let precoding = Precoding {
        symbols: vec![
            SymbolBlock { label: "u", dim: 1, power: power / 2.0 },
            SymbolBlock { label: "v", dim: 1, power: power / 2.0 },
        ],
        precoders: vec![vec![
            null_beam(block.h(0), "legitimate channel is zero")?,
            null_beam(block.g(0), "eavesdropper channel is zero")?,
        ]],
    };
    realize(
        scheme,
        block,
        power,
        precoding,
        [
            (Receiver::Legitimate, block.h_all(), "v"),
            (Receiver::Eavesdropper, block.g_all(), "v"),
        ],
    )
}

/// Single-slot zero-forcing baseline for the two-user broadcast channel:
/// `v1` in the null space of `g_1^T`, `v2` in the null space of `h_1^T`.
pub fn build_baseline_perfect_csit_bcc(
    block: &ChannelBlock,
    power: f64,
) -> Result<SchemeRealization> {
    let scheme = SchemeId::BaselinePerfectCsitBcc;
    check_inputs(block, scheme, power)?;
    let precoding = Precoding {
        symbols: vec![
            SymbolBlock { label: "v1", dim: 1, power: power / 2.0 },
            SymbolBlock { label: "v2", dim: 1, power: power / 2.0 },
        ],
        precoders: vec![vec![
            null_beam(block.g(0), "receiver 2 channel is zero")?,
            null_beam(block.h(0), "receiver 1 channel is zero")?,
        ]],
    };
    realize(
        scheme,
        block,
        power,
        precoding,
        [
            (Receiver::Receiver1, block.h_all(), "v1"),
            (Receiver::Receiver2, block.g_all(), "v2"),
        ],
    )
}

/// Single-slot baseline without CSIT: isotropic transmission of a two-symbol
/// message, covariance `(P/2) I`, no artificial noise.
pub fn build_baseline_no_csit(block: &ChannelBlock, power: f64) -> Result<SchemeRealization> {
    let scheme = SchemeId::BaselineNoCsit;
    check_inputs(block, scheme, power)?;
    let precoding = Precoding {
        symbols: vec![SymbolBlock { label: "v", dim: 2, power: power / 2.0 }],
        precoders: vec![vec![ComplexMatrix::identity(2)]],
    };
    realize(
        scheme,
        block,
        power,
        precoding,
        [
            (Receiver::Legitimate, block.h_all(), "v"),
            (Receiver::Eavesdropper, block.g_all(), "v"),
        ],
    )
}

/// Equivalent channel matrix of `model` over the basis
/// `(direction^T s_collapse, s_other_1, s_other_2, ...)`.
///
/// The `collapse` component must have every row proportional to
/// `direction^T`; its mixing matrix is replaced by the column of
/// proportionality factors.
pub fn equivalent_matrix(
    model: &LinearModel,
    collapse: &str,
    direction: &[Complex64],
    others: &[&str],
) -> Result<ComplexMatrix> {
    let find = |label: &str| {
        model
            .component(label)
            .ok_or_else(|| Error::InvalidModel(format!("no component labelled {label}")))
    };
    let a = find(collapse)?.matrix();
    if a.cols() != direction.len() {
        return Err(Error::DimensionMismatch(format!(
            "direction has length {}, component {collapse} has {} columns",
            direction.len(),
            a.cols()
        )));
    }
    let dir_norm: f64 = direction.iter().map(Complex64::norm_sqr).sum();
    if dir_norm == 0.0 {
        return Err(Error::DimensionMismatch("zero direction".into()));
    }
    let mut coeffs = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let row = a.row_slice(i);
        let c: Complex64 =
            row.iter().zip(direction).map(|(x, d)| x * d.conj()).sum::<Complex64>() / dir_norm;
        let residual = row
            .iter()
            .zip(direction)
            .map(|(x, d)| (x - c * d).norm())
            .fold(0.0, f64::max);
        if residual > 1e-9 * a.max_abs().max(1.0) {
            return Err(Error::InvalidModel(format!(
                "component {collapse} is not aligned with the given direction"
            )));
        }
        coeffs.push(c);
    }
    others
        .iter()
        .try_fold(ComplexMatrix::column(&coeffs)?, |acc, label| {
            acc.hstack(find(label)?.matrix())
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::RngSeed;
    use crate::numerics::gaussian_mi;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_block(seed: u64, slots: usize) -> ChannelBlock {
        ChannelBlock::sample(&mut RngSeed(seed).trial_rng(0), 2, slots).unwrap()
    }

    fn assert_close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
        let diff = a.add(&b.scale(-1.0)).unwrap().max_abs();
        assert!(diff <= tol, "matrices differ by {diff}:\n{a:?}\n{b:?}");
    }

    /// Undo the per-slot normalisers of a receive matrix.
    fn unnormalized(m: &ComplexMatrix, alphas: &[f64]) -> ComplexMatrix {
        let rows: Vec<Vec<Complex64>> = (0..m.rows())
            .map(|i| m.row_slice(i).iter().map(|z| z / alphas[i]).collect())
            .collect();
        ComplexMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn slot_counts() {
        let counts: Vec<usize> = SchemeId::ALL.iter().map(|s| s.slots()).collect();
        assert_eq!(counts, [3, 2, 4, 1, 1, 1]);
        for id in SchemeId::ALL {
            assert_eq!(id.name().parse::<SchemeId>().unwrap(), id);
        }
        assert!("nope".parse::<SchemeId>().is_err());
    }

    #[test]
    fn symmetric_desk_check() {
        let one = c(1.0, 0.0);
        let z = c(0.0, 0.0);
        let h = vec![vec![one, z], vec![z, one], vec![one, z]];
        let g = vec![vec![c(0.3, 0.1), c(-0.2, 0.5)], vec![one, one], vec![c(0.7, 0.0), z]];
        let block = ChannelBlock::new(h, g).unwrap();
        let r = build_symmetric_wiretap(&block, 10.0).unwrap();
        let legit = r.model(Receiver::Legitimate).unwrap();
        let v = unnormalized(legit.component("v").unwrap().matrix(), r.normalizers());
        let expected =
            ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_close(&v, &expected, 1e-15);
        // u rows: (h1^T, h21 h1^T, h31 g21 h1^T) = ([1 0], [0 0], [1 0])
        let u = unnormalized(legit.component("u").unwrap().matrix(), r.normalizers());
        let expected_u =
            ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_close(&u, &expected_u, 1e-15);
    }

    #[test]
    fn symmetric_eavesdropper_rows_are_proportional() {
        for seed in 0..50 {
            let block = random_block(seed, 3);
            let r = build_symmetric_wiretap(&block, 100.0).unwrap();
            let eve = r.model(Receiver::Eavesdropper).unwrap();
            let v = unnormalized(eve.component("v").unwrap().matrix(), r.normalizers());
            let g31 = block.g(2)[0];
            assert_eq!(v.row_slice(0), &[c(0.0, 0.0), c(0.0, 0.0)]);
            for j in 0..2 {
                assert!((v.get(2, j) - g31 * v.get(1, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn symmetric_equivalent_matrix_full_rank() {
        for seed in 0..50 {
            let block = random_block(seed, 3);
            let r = build_symmetric_wiretap(&block, 1e3).unwrap();
            let legit = r.model(Receiver::Legitimate).unwrap();
            let eq = equivalent_matrix(legit, "u", block.h(0), &["v"]).unwrap();
            assert_eq!((eq.rows(), eq.cols()), (3, 3));
            // first column is (alpha1, alpha2 h21, alpha3 h31 g21)
            let a = r.normalizers();
            assert!((eq.get(0, 0) - a[0]).norm() < 1e-12);
            assert!((eq.get(1, 0) - a[1] * block.h(1)[0]).norm() < 1e-12);
            assert!((eq.get(2, 0) - a[2] * block.h(2)[0] * block.g(1)[0]).norm() < 1e-12);
            let gram = eq.gram();
            assert!(crate::numerics::log_det_hermitian_psd(&gram).unwrap().is_finite());
        }
    }

    #[test]
    fn normalizer_examples() {
        let one = c(1.0, 0.0);
        let h1 = [one, one];
        let g2 = [c(0.5, 0.0), c(0.0, 0.0)];
        for power in [1.0, 2.0, 1e4] {
            let p = symmetric_precoding(&h1, &g2, power);
            let alphas = normalize_slots(&p, power).unwrap();
            assert!((alphas[0] - 1.0).abs() < 1e-15);
            assert!((alphas[1] - 0.5f64.sqrt()).abs() < 1e-15);
        }
        let p = symmetric_precoding(&h1, &g2, 3.0);
        let a = normalize_slots(&p, 3.0).unwrap();
        let b = normalize_slots(&symmetric_precoding(&h1, &g2, 6.0), 6.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_slot_is_rejected() {
        let zero2 = [c(0.0, 0.0), c(0.0, 0.0)];
        let p = symmetric_precoding(&zero2, &zero2, 1.0);
        // slot 3 sends g2^T v + g21 h1^T u = 0
        assert_eq!(normalize_slots(&p, 1.0), Err(Error::DegenerateSlot { slot: 2 }));
    }

    #[test]
    fn every_slot_meets_power_exactly() {
        for seed in 0..100 {
            for id in SchemeId::ALL {
                let block = random_block(seed, id.slots());
                for power in [1.0, 1e3, 1e6] {
                    let r = id.build(&block, power).unwrap();
                    for t in 0..r.slots() {
                        let rel = (r.slot_power(t) - power).abs() / power;
                        assert!(rel < 1e-9, "{id} slot {t}: {rel}");
                    }
                }
            }
        }
    }

    #[test]
    fn builders_validate_inputs() {
        let block = random_block(1, 3);
        assert!(matches!(build_symmetric_wiretap(&block, 0.0), Err(Error::InvalidPower(_))));
        assert!(matches!(build_symmetric_wiretap(&block, -1.0), Err(Error::InvalidPower(_))));
        assert!(matches!(build_bcc(&block, 1.0), Err(Error::BlockShape { .. })));
        let wide = ChannelBlock::sample(&mut RngSeed(1).trial_rng(0), 3, 3).unwrap();
        assert!(matches!(build_symmetric_wiretap(&wide, 1.0), Err(Error::BlockShape { .. })));
        let z = c(0.0, 0.0);
        let dead = ChannelBlock::new(vec![vec![c(1.0, 0.0), z]], vec![vec![z, z]]).unwrap();
        assert!(matches!(
            build_baseline_perfect_csit_wiretap(&dead, 1.0),
            Err(Error::DegenerateChannel(_))
        ));
    }

    #[test]
    fn asymmetric_structure() {
        for seed in 0..50 {
            let block = random_block(seed, 2);
            let r = build_asymmetric_wiretap(&block, 1e4).unwrap();
            let a = r.normalizers();
            let legit = r.model(Receiver::Legitimate).unwrap();
            let eq = equivalent_matrix(legit, "u", block.h(0), &["v"]).unwrap();
            let expected = ComplexMatrix::from_rows(&[
                vec![c(a[0], 0.0), c(0.0, 0.0)],
                vec![block.h(1)[0] * a[1], block.h(1)[1] * a[1]],
            ])
            .unwrap();
            assert_close(&eq, &expected, 1e-12);
            let eve = r.model(Receiver::Eavesdropper).unwrap();
            let u = eve.component("u").unwrap().matrix();
            assert_eq!((u.rows(), u.cols()), (2, 2));
            assert!(crate::numerics::log_det_hermitian_psd(&u.gram()).unwrap().is_finite());
        }
    }

    #[test]
    fn asymmetric_transmitter_ignores_eavesdropper_channel() {
        let block = random_block(9, 2);
        let other = random_block(10, 2);
        let perturbed = block.with_g(other.g_all().to_vec()).unwrap();
        let a = build_asymmetric_wiretap(&block, 1e3).unwrap();
        let b = build_asymmetric_wiretap(&perturbed, 1e3).unwrap();
        assert_eq!(a.precoding(), b.precoding());
        assert_eq!(a.normalizers(), b.normalizers());
        assert_ne!(a.model(Receiver::Eavesdropper).unwrap(), b.model(Receiver::Eavesdropper).unwrap());
    }

    #[test]
    fn small_power_gives_small_information() {
        let block = random_block(4, 2);
        let r = build_asymmetric_wiretap(&block, 1e-12).unwrap();
        for model in r.models().values() {
            assert!(gaussian_mi(model).unwrap() < 1e-9);
        }
    }

    #[test]
    fn perfect_csit_zero_forces() {
        for seed in 0..20 {
            let block = random_block(seed, 1);
            let power = 100.0;
            let r = build_baseline_perfect_csit_wiretap(&block, power).unwrap();
            let eve = r.model(Receiver::Eavesdropper).unwrap();
            assert!(eve.component("v").unwrap().matrix().max_abs() < 1e-15);
            let legit = r.model(Receiver::Legitimate).unwrap();
            assert!(legit.component("u").unwrap().matrix().max_abs() < 1e-15);
            assert_eq!(gaussian_mi(eve).unwrap(), 0.0);
            // closed form log2(1 + (P/2) |h^T w|^2) with w the unit null vector of g^T
            let (h, g) = (block.h(0), block.g(0));
            let norm = (g[0].norm_sqr() + g[1].norm_sqr()).sqrt();
            let gain = (h[0] * g[1] / norm - h[1] * g[0] / norm).norm_sqr();
            let expected = (1.0 + power / 2.0 * gain).log2();
            assert!((gaussian_mi(legit).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn no_csit_rates_swap_with_receivers() {
        let block = random_block(21, 1);
        let a = build_baseline_no_csit(&block, 1e3).unwrap();
        let b = build_baseline_no_csit(&block.swapped(), 1e3).unwrap();
        let mi = |r: &SchemeRealization, rx| gaussian_mi(r.model(rx).unwrap()).unwrap();
        assert_eq!(mi(&a, Receiver::Legitimate), mi(&b, Receiver::Eavesdropper));
        assert_eq!(mi(&a, Receiver::Eavesdropper), mi(&b, Receiver::Legitimate));
    }

    #[test]
    fn bcc_relabelling_symmetry() {
        // Exchanging the receivers, the two messages and slots 2 and 3 maps
        // receiver 2's view onto receiver 1's view with slots 2 and 3 swapped.
        for seed in 0..50 {
            let block = random_block(seed, 4);
            let relabelled = block.swapped().permute_slots(&[0, 2, 1, 3]).unwrap();
            let a = build_bcc(&block, 1e3).unwrap();
            let b = build_bcc(&relabelled, 1e3).unwrap();
            let rx2 = a.model(Receiver::Receiver2).unwrap();
            let rx1 = b.model(Receiver::Receiver1).unwrap();
            let swap_rows = |m: &ComplexMatrix| {
                let rows: Vec<Vec<Complex64>> =
                    [0, 2, 1, 3].iter().map(|&i| m.row_slice(i).to_vec()).collect();
                ComplexMatrix::from_rows(&rows).unwrap()
            };
            for (mine, theirs) in [("u", "u"), ("v1", "v2"), ("v2", "v1")] {
                let lhs = swap_rows(rx1.component(mine).unwrap().matrix());
                assert_close(&lhs, rx2.component(theirs).unwrap().matrix(), 1e-12);
            }
        }
    }
}
