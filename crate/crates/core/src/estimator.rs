//! Monte Carlo rate evaluation and high-SNR slope fitting.
//!
//! Trial `k` of a run always uses the channel block drawn from
//! `seed.trial_rng(k)`, whatever the SNR point and whichever worker thread
//! runs it. Points of one sweep therefore share their channel draws, and the
//! output of a run is identical for any thread count.
//!
//! All rates are per channel use: the block mutual information divided by the
//! scheme's slot count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelBlock, RngSeed};
use crate::error::{Error, Result};
use crate::numerics::{gaussian_mi, Role};
use crate::schemes::{Receiver, SchemeId, SchemeRealization, ANTENNAS};

/// Default SNR grid for slope fits, in dB.
pub const DEFAULT_GRID_DB: [f64; 7] = [30.0, 35.0, 40.0, 45.0, 50.0, 55.0, 60.0];

pub const DEFAULT_TRIALS: u64 = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Information about the message at its intended receiver.
    Legit,
    /// Information about the message at the unintended receiver, everything
    /// else treated as noise.
    Leak,
    /// Leakage given the unintended receiver's own message (two-user schemes).
    LeakConditioned,
    /// `[legit - leak]^+`.
    Secrecy,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [
        Quantity::Legit,
        Quantity::Leak,
        Quantity::LeakConditioned,
        Quantity::Secrecy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Legit => "legit",
            Quantity::Leak => "leak",
            Quantity::LeakConditioned => "leak_conditioned",
            Quantity::Secrecy => "secrecy",
        }
    }

    pub fn is_available_for(self, scheme: SchemeId) -> bool {
        self != Quantity::LeakConditioned || scheme.is_two_user()
    }

    /// Quantities available for `scheme`, in output order.
    pub fn available_for(scheme: SchemeId) -> Vec<Quantity> {
        Quantity::ALL
            .into_iter()
            .filter(|q| q.is_available_for(scheme))
            .collect()
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown quantity {s:?}; expected legit, leak, leak_conditioned or secrecy"
                ))
            })
    }
}

/// Trial-averaged rates at one SNR point.
///
/// `leak_rate` is the leakage entering `secrecy_rate`. For two-user schemes
/// that is the conditioned leakage unless `quantity` is [`Quantity::Leak`].
/// `std_err` is the standard error of the mean of the requested quantity
/// (for secrecy, of the per-trial difference before clamping).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub power_db: f64,
    pub quantity: Quantity,
    pub legit_rate: f64,
    pub leak_rate: f64,
    pub secrecy_rate: f64,
    pub trials: u64,
    pub std_err: f64,
}

impl RatePoint {
    /// The rate selected by `quantity`.
    pub fn rate(&self) -> f64 {
        match self.quantity {
            Quantity::Legit => self.legit_rate,
            Quantity::Leak | Quantity::LeakConditioned => self.leak_rate,
            Quantity::Secrecy => self.secrecy_rate,
        }
    }
}

/// Least-squares line `rate = slope * log2(P) + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DofEstimate {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub grid: Vec<f64>,
}

pub fn db_to_linear(power_db: f64) -> f64 {
    10f64.powf(power_db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct UserTrial {
    legit: f64,
    leak: f64,
    leak_conditioned: f64,
}

/// Rates of both users for one trial. Single-message schemes report the
/// second user with the receivers exchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
struct TrialRates([UserTrial; 2]);

fn mi_at(r: &SchemeRealization, rx: Receiver, roles: &[(&str, Role)]) -> Result<f64> {
    gaussian_mi(&r.model(rx)?.with_roles(roles)?)
}

fn trial_rates(scheme: SchemeId, power: f64, block: &ChannelBlock) -> Result<TrialRates> {
    let r = scheme.build(block, power)?;
    let per_use = 1.0 / scheme.slots() as f64;
    let user = |legit: f64, leak: f64, cond: f64| UserTrial {
        legit: legit * per_use,
        leak: leak * per_use,
        leak_conditioned: cond * per_use,
    };
    if scheme.is_two_user() {
        use Receiver::{Receiver1 as R1, Receiver2 as R2};
        use Role::{Conditioned, Nuisance, Useful};
        let one = user(
            mi_at(&r, R1, &[("v1", Useful), ("v2", Nuisance)])?,
            mi_at(&r, R2, &[("v1", Useful), ("v2", Nuisance)])?,
            mi_at(&r, R2, &[("v1", Useful), ("v2", Conditioned)])?,
        );
        let two = user(
            mi_at(&r, R2, &[("v2", Useful), ("v1", Nuisance)])?,
            mi_at(&r, R1, &[("v2", Useful), ("v1", Nuisance)])?,
            mi_at(&r, R1, &[("v2", Useful), ("v1", Conditioned)])?,
        );
        Ok(TrialRates([one, two]))
    } else {
        let legit = mi_at(&r, Receiver::Legitimate, &[])?;
        let leak = mi_at(&r, Receiver::Eavesdropper, &[])?;
        Ok(TrialRates([user(legit, leak, leak), user(leak, legit, legit)]))
    }
}

fn run_trials(scheme: SchemeId, power_db: f64, trials: u64, seed: RngSeed) -> Result<Vec<TrialRates>> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    if !power_db.is_finite() {
        return Err(Error::InvalidPower(power_db));
    }
    let power = db_to_linear(power_db);
    (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = seed.trial_rng(k);
            ChannelBlock::sample(&mut rng, ANTENNAS, scheme.slots())
                .and_then(|block| trial_rates(scheme, power, &block))
                .map_err(|e| Error::Trial {
                    trial: k,
                    source: Box::new(e),
                })
        })
        .collect()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard error of the mean; zero for a single sample.
fn std_err(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

fn summarize(
    scheme: SchemeId,
    samples: &[TrialRates],
    user: usize,
    power_db: f64,
    quantity: Quantity,
) -> Result<RatePoint> {
    if !quantity.is_available_for(scheme) {
        return Err(Error::IncompatibleQuantity {
            scheme: scheme.name(),
            quantity: quantity.name(),
        });
    }
    let legit: Vec<f64> = samples.iter().map(|t| t.0[user].legit).collect();
    let leak: Vec<f64> = samples
        .iter()
        .map(|t| {
            let u = t.0[user];
            if scheme.is_two_user() && quantity != Quantity::Leak {
                u.leak_conditioned
            } else {
                u.leak
            }
        })
        .collect();
    let legit_rate = mean(&legit);
    let leak_rate = mean(&leak);
    let err = match quantity {
        Quantity::Legit => std_err(&legit),
        Quantity::Leak | Quantity::LeakConditioned => std_err(&leak),
        Quantity::Secrecy => {
            let diff: Vec<f64> = legit.iter().zip(&leak).map(|(a, b)| a - b).collect();
            std_err(&diff)
        }
    };
    Ok(RatePoint {
        power_db,
        quantity,
        legit_rate,
        leak_rate,
        secrecy_rate: (legit_rate - leak_rate).max(0.0),
        trials: samples.len() as u64,
        std_err: err,
    })
}

/// Averages the first user's rates of `scheme` over `trials` channel blocks.
pub fn evaluate_rates(
    scheme: SchemeId,
    power_db: f64,
    trials: u64,
    seed: RngSeed,
    quantity: Quantity,
) -> Result<RatePoint> {
    if !quantity.is_available_for(scheme) {
        return Err(Error::IncompatibleQuantity {
            scheme: scheme.name(),
            quantity: quantity.name(),
        });
    }
    let samples = run_trials(scheme, power_db, trials, seed)?;
    summarize(scheme, &samples, 0, power_db, quantity)
}

/// One [`RatePoint`] per quantity available for `scheme`, all from the same
/// trials.
pub fn evaluate_all(
    scheme: SchemeId,
    power_db: f64,
    trials: u64,
    seed: RngSeed,
) -> Result<Vec<RatePoint>> {
    let samples = run_trials(scheme, power_db, trials, seed)?;
    Quantity::available_for(scheme)
        .into_iter()
        .map(|q| summarize(scheme, &samples, 0, power_db, q))
        .collect()
}

/// Secrecy rates of both users from shared channel draws.
///
/// Two-user schemes condition each user's leakage on the other user's
/// message. For [`SchemeId::BaselineNoCsit`] the second user is the same
/// isotropic transmission aimed at the other receiver.
pub fn evaluate_pair(
    scheme: SchemeId,
    power_db: f64,
    trials: u64,
    seed: RngSeed,
) -> Result<(RatePoint, RatePoint)> {
    if !(scheme.is_two_user() || scheme == SchemeId::BaselineNoCsit) {
        return Err(Error::Config(format!("{scheme} serves a single user")));
    }
    let samples = run_trials(scheme, power_db, trials, seed)?;
    Ok((
        summarize(scheme, &samples, 0, power_db, Quantity::Secrecy)?,
        summarize(scheme, &samples, 1, power_db, Quantity::Secrecy)?,
    ))
}

/// Both users' secrecy rates of the four-slot confidential broadcast scheme.
pub fn evaluate_bcc_pair(
    power_db: f64,
    trials: u64,
    seed: RngSeed,
) -> Result<(RatePoint, RatePoint)> {
    evaluate_pair(SchemeId::Bcc4Slot, power_db, trials, seed)
}

/// `evaluate_rates` over a grid.
pub fn sweep(
    scheme: SchemeId,
    grid_db: &[f64],
    trials: u64,
    seed: RngSeed,
    quantity: Quantity,
) -> Result<Vec<RatePoint>> {
    grid_db
        .iter()
        .map(|&db| evaluate_rates(scheme, db, trials, seed, quantity))
        .collect()
}

/// `evaluate_pair` over a grid.
pub fn sweep_pair(
    scheme: SchemeId,
    grid_db: &[f64],
    trials: u64,
    seed: RngSeed,
) -> Result<Vec<(RatePoint, RatePoint)>> {
    grid_db
        .iter()
        .map(|&db| evaluate_pair(scheme, db, trials, seed))
        .collect()
}

/// Fits the selected rate of each point against `log2(P)`.
pub fn estimate_dof(points: &[RatePoint]) -> Result<DofEstimate> {
    let pairs: Vec<(f64, f64)> = points.iter().map(|p| (p.power_db, p.rate())).collect();
    fit_slope(&pairs)
}

/// Ordinary least squares of `rate` on `log2(P)` for `(power_db, rate)` pairs.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<DofEstimate> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    for (i, (db, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(other, _)| other == db) {
            return Err(Error::DuplicatePower(*db));
        }
    }
    if points.iter().any(|(db, r)| !db.is_finite() || !r.is_finite()) {
        return Err(Error::Config("non-finite point in slope fit".into()));
    }
    let xs: Vec<f64> = points.iter().map(|(db, _)| db / 10.0 * 10f64.log2()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, r)| r).collect();
    let (mx, my) = (mean(&xs), mean(&ys));
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(DofEstimate {
        slope,
        intercept,
        r_squared,
        grid: points.iter().map(|&(db, _)| db).collect(),
    })
}
