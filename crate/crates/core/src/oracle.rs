//! Rejection-sampling estimate of the a-index.
//!
//! A draw is `m` unit-rate exponentials `e_i`; `w = e / sum(e)` is uniform on
//! the standard simplex and `x_i = w_i / c_i` is uniform on the hyperplane
//! `sum c_i x_i = 1`. Draws with `x_1 >= ... >= x_m` are kept. The ordering
//! test does not depend on the normalizing sum, so a draw is abandoned as soon
//! as one adjacent pair is out of order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::credit::{AuthorGroupPattern, CreditVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct OracleEstimate {
    pub estimate: CreditVector,
    /// Standard error of each group mean.
    pub std_errors: Vec<f64>,
    pub accepted: u64,
    pub draws: u64,
}

/// Monte Carlo a-index from `sample_budget` candidate draws.
pub fn a_index_oracle(
    pattern: &AuthorGroupPattern,
    sample_budget: u64,
    seed: u64,
) -> Result<OracleEstimate> {
    if sample_budget == 0 {
        return Err(Error::InvalidArgument(
            "sample budget must be at least 1".into(),
        ));
    }
    let counts: Vec<f64> = pattern.counts().iter().map(|&c| f64::from(c)).collect();
    let m = counts.len();
    if m == 1 {
        // Zero-dimensional simplex: every draw is the single point 1/c.
        return Ok(OracleEstimate {
            estimate: CreditVector::from_parts(pattern.clone(), vec![1.0 / counts[0]]),
            std_errors: vec![0.0],
            accepted: sample_budget,
            draws: sample_budget,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut e = vec![0.0_f64; m];
    // Welford accumulators.
    let mut mean = vec![0.0_f64; m];
    let mut m2 = vec![0.0_f64; m];
    let mut accepted = 0_u64;

    'draw: for _ in 0..sample_budget {
        for i in 0..m {
            let v: f64 = Exp1.sample(&mut rng);
            // e_{i-1}/c_{i-1} >= e_i/c_i, cross-multiplied.
            if i > 0 && e[i - 1] * counts[i] < v * counts[i - 1] {
                continue 'draw;
            }
            e[i] = v;
        }
        let sum: f64 = e.iter().sum();
        accepted += 1;
        let k = accepted as f64;
        for i in 0..m {
            let x = e[i] / (sum * counts[i]);
            let delta = x - mean[i];
            mean[i] += delta / k;
            m2[i] += delta * (x - mean[i]);
        }
    }

    if accepted == 0 {
        return Err(Error::OracleExhausted {
            draws: sample_budget,
        });
    }
    let std_errors = m2
        .iter()
        .map(|&s| {
            if accepted < 2 {
                0.0
            } else {
                let var = s / (accepted - 1) as f64;
                (var / accepted as f64).sqrt()
            }
        })
        .collect();
    Ok(OracleEstimate {
        estimate: CreditVector::from_parts(pattern.clone(), mean),
        std_errors,
        accepted,
        draws: sample_budget,
    })
}

/// Probability that one candidate draw is accepted: `prod c_j / prod C_j`.
pub fn acceptance_probability(pattern: &AuthorGroupPattern) -> f64 {
    pattern
        .counts()
        .iter()
        .zip(pattern.cumulative())
        .map(|(&c, cum)| f64::from(c) / f64::from(cum))
        .product()
}

/// Draw budget expected to yield about `accepted` kept samples, with a margin.
pub fn budget_for_accepted(pattern: &AuthorGroupPattern, accepted: u64) -> u64 {
    let expected = accepted as f64 / acceptance_probability(pattern);
    (expected * 1.05).ceil() as u64 + 100
}
