//! Operator channel and minimum-distance decoding.
//!
//! A transmitted space V of dimension l reaches the receiver as `H + E`,
//! where H is an (l - erasures)-dimensional subspace of V and E is an
//! `errors`-dimensional space meeting V trivially, so the received space is
//! at distance exactly `erasures + errors` from V.
//!
//! Random draws use ChaCha8 seeded with `seed` through
//! `SeedableRng::seed_from_u64`; trial `i` of a simulation runs on stream `i`
//! of that generator, so trials are independent and results do not depend on
//! scheduling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::Code;
use crate::gf::Field;
use crate::linalg::{enumerate_subspaces, gaussian_binomial, subspace_distance, LinalgError, MatrixFq, Subspace};

/// Outcome sets up to this size are enumerated rather than sampled.
pub const EXHAUSTIVE_CAP: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error("cannot erase {erasures} dimensions of a {dim}-dimensional space")]
    TooManyErasures { erasures: usize, dim: usize },
    #[error("cannot inject {errors} error dimensions: only {room} dimensions lie outside the codeword")]
    NoComplementRoom { errors: usize, room: usize },
    #[error("number of trials must be positive")]
    ZeroTrials,
    #[error("{count} channel outcomes exceed the enumeration cap of {cap}")]
    TooManyOutcomes { count: u128, cap: u64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub erasures: usize,
    pub errors: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelOutcome {
    pub transmitted: Subspace,
    pub received: Subspace,
    pub realized_distance: usize,
}

fn check_feasible(v: &Subspace, erasures: usize, errors: usize) -> Result<(), ChannelError> {
    if erasures > v.dim() {
        return Err(ChannelError::TooManyErasures { erasures, dim: v.dim() });
    }
    let room = v.ambient_dim() - v.dim();
    if errors > room {
        return Err(ChannelError::NoComplementRoom { errors, room });
    }
    Ok(())
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_matrix<R: Rng>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> MatrixFq {
    let mut m = MatrixFq::zeros(field, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, rng.gen_range(0..field.order()));
        }
    }
    m
}

/// Sends `v` through the channel, drawing from stream 0 of `cfg.seed`.
pub fn transmit(v: &Subspace, cfg: &ChannelConfig) -> Result<ChannelOutcome, ChannelError> {
    transmit_with(v, cfg.erasures, cfg.errors, &mut trial_rng(cfg.seed, 0))
}

/// Sends `v` through the channel using the caller's generator. H comes from a
/// full-rank random combination of the basis rows and E from random rows
/// rejected until they extend V by exactly `errors` dimensions.
pub fn transmit_with<R: Rng>(
    v: &Subspace,
    erasures: usize,
    errors: usize,
    rng: &mut R,
) -> Result<ChannelOutcome, ChannelError> {
    check_feasible(v, erasures, errors)?;
    let f = v.field();
    let kept = v.dim() - erasures;
    let h = loop {
        let a = random_matrix(f, kept, v.dim(), rng);
        if a.rank() == kept {
            break Subspace::from_matrix(a.mul(v.basis())?);
        }
    };
    let e = loop {
        let e = Subspace::from_matrix(random_matrix(f, errors, v.ambient_dim(), rng));
        if e.dim() == errors && v.sum(&e)?.dim() == v.dim() + errors {
            break e;
        }
    };
    let received = h.sum(&e)?;
    let realized_distance = subspace_distance(v, &received)?;
    debug_assert_eq!(realized_distance, erasures + errors);
    Ok(ChannelOutcome { transmitted: v.clone(), received, realized_distance })
}

/// Every received space the channel can produce: one entry per pair (H, E).
pub fn enumerate_outcomes(v: &Subspace, erasures: usize, errors: usize) -> Result<Vec<Subspace>, ChannelError> {
    check_feasible(v, erasures, errors)?;
    let q = v.field().order() as u64;
    let (l, big_n) = (v.dim(), v.ambient_dim());
    // E meeting V trivially: q^(errors * l) lifts of each errors-subspace of the quotient
    let error_spaces = (q as u128)
        .checked_pow((errors * l) as u32)
        .map_or(u128::MAX, |lifts| lifts.saturating_mul(gaussian_binomial(big_n - l, errors, q)));
    let count = gaussian_binomial(l, l - erasures, q).saturating_mul(error_spaces);
    if count > EXHAUSTIVE_CAP as u128 {
        return Err(ChannelError::TooManyOutcomes { count, cap: EXHAUSTIVE_CAP });
    }
    let hs = enumerate_subspaces(v, l - erasures)?;
    let full = Subspace::full(v.field(), big_n);
    let mut es = Vec::with_capacity(error_spaces as usize);
    for e in enumerate_subspaces(&full, errors)? {
        if v.sum(&e)?.dim() == l + errors {
            es.push(e);
        }
    }
    debug_assert_eq!(es.len() as u128, error_spaces);
    let mut out = Vec::with_capacity(count as usize);
    for h in &hs {
        for e in &es {
            out.push(h.sum(e)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Decoded {
    Unique { index: usize, distance: usize },
    /// Several codewords tie for the minimum distance.
    Ambiguous { indices: Vec<usize>, distance: usize },
}

impl Decoded {
    pub fn unique(&self) -> Option<usize> {
        match self {
            Decoded::Unique { index, .. } => Some(*index),
            Decoded::Ambiguous { .. } => None,
        }
    }

    pub fn distance(&self) -> usize {
        match self {
            Decoded::Unique { distance, .. } | Decoded::Ambiguous { distance, .. } => *distance,
        }
    }
}

/// Exhaustive minimum-distance decoding. Ties are reported, never broken.
pub fn md_decode(code: &Code, received: &Subspace) -> Result<Decoded, ChannelError> {
    let distances = code
        .codewords()
        .iter()
        .map(|cw| subspace_distance(&cw.space, received))
        .collect::<Result<Vec<_>, _>>()?;
    let best = *distances.iter().min().expect("codes are nonempty");
    let indices: Vec<usize> = (0..distances.len()).filter(|&i| distances[i] == best).collect();
    Ok(match indices[..] {
        [index] => Decoded::Unique { index, distance: best },
        _ => Decoded::Ambiguous { indices, distance: best },
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub correct: u64,
    pub wrong: u64,
    pub ambiguous: u64,
}

impl Tally {
    fn record(&mut self, sent: usize, decoded: &Decoded) {
        match decoded {
            Decoded::Unique { index, .. } if *index == sent => self.correct += 1,
            Decoded::Unique { .. } => self.wrong += 1,
            Decoded::Ambiguous { .. } => self.ambiguous += 1,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.correct += other.correct;
        self.wrong += other.wrong;
        self.ambiguous += other.ambiguous;
        self
    }

    pub fn total(&self) -> u64 {
        self.correct + self.wrong + self.ambiguous
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationStats {
    pub config: ChannelConfig,
    pub trials: u64,
    pub correct: u64,
    pub wrong: u64,
    pub ambiguous: u64,
    pub success_rate: f64,
}

/// Runs `trials` transmissions, cycling through the codewords in order, and
/// decodes each received space.
pub fn simulate(code: &Code, cfg: &ChannelConfig, trials: u64) -> Result<SimulationStats, ChannelError> {
    if trials == 0 {
        return Err(ChannelError::ZeroTrials);
    }
    check_feasible(&code.codewords()[0].space, cfg.erasures, cfg.errors)?;
    let size = code.len() as u64;
    let tally = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sent = (t % size) as usize;
            let mut rng = trial_rng(cfg.seed, t);
            let outcome = transmit_with(&code.codewords()[sent].space, cfg.erasures, cfg.errors, &mut rng)?;
            let mut tally = Tally::default();
            tally.record(sent, &md_decode(code, &outcome.received)?);
            Ok::<_, ChannelError>(tally)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    Ok(SimulationStats {
        config: *cfg,
        trials,
        correct: tally.correct,
        wrong: tally.wrong,
        ambiguous: tally.ambiguous,
        success_rate: tally.correct as f64 / trials as f64,
    })
}

/// Decodes every channel outcome of every codeword.
pub fn exhaustive_decode(code: &Code, erasures: usize, errors: usize) -> Result<Tally, ChannelError> {
    code.codewords()
        .par_iter()
        .enumerate()
        .map(|(sent, cw)| {
            let mut tally = Tally::default();
            for received in enumerate_outcomes(&cw.space, erasures, errors)? {
                tally.record(sent, &md_decode(code, &received)?);
            }
            Ok::<_, ChannelError>(tally)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}
