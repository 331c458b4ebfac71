//! Binary logistic regression trained by gradient descent on log-loss.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Numerically stable logistic function.
pub fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LogisticModel {
    pub fn zeros(n_features: usize) -> Self {
        Self { weights: vec![0.0; n_features], bias: 0.0 }
    }

    pub fn linear(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        logistic(self.linear(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    pub seed: u64,
    /// `None` means full-batch descent; the seed then only fixes the
    /// (irrelevant) sample order.
    pub batch_size: Option<usize>,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self { learning_rate: 0.1, iterations: 500, seed: 42, batch_size: None }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FitError {
    #[error("training set is empty")]
    Empty,
    #[error("training set needs at least one positive and one negative label ({positives} positive, {negatives} negative)")]
    SingleClass { positives: usize, negatives: usize },
    #[error("every training sample has the same feature vector; labels cannot be separated")]
    NoVariance,
    #[error("feature vectors have inconsistent lengths ({0} vs {1})")]
    Ragged(usize, usize),
    #[error("non-finite feature value in sample {0}")]
    NonFinite(usize),
}

pub fn fit_logistic(samples: &[(Vec<f64>, bool)], config: &FitConfig) -> Result<LogisticModel, FitError> {
    let Some(first) = samples.first() else {
        return Err(FitError::Empty);
    };
    let dim = first.0.len();
    for (i, (x, _)) in samples.iter().enumerate() {
        if x.len() != dim {
            return Err(FitError::Ragged(dim, x.len()));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(FitError::NonFinite(i));
        }
    }
    let positives = samples.iter().filter(|s| s.1).count();
    let negatives = samples.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(FitError::SingleClass { positives, negatives });
    }
    if samples.iter().all(|(x, _)| x == &first.0) {
        return Err(FitError::NoVariance);
    }

    let mut model = LogisticModel::zeros(dim);
    let mut order: Vec<usize> = (0..samples.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let batch = config.batch_size.unwrap_or(samples.len()).clamp(1, samples.len());
    let mut grad_w = vec![0.0; dim];

    for _ in 0..config.iterations {
        if batch < samples.len() {
            order.shuffle(&mut rng);
        }
        for chunk in order.chunks(batch) {
            grad_w.iter_mut().for_each(|g| *g = 0.0);
            let mut grad_b = 0.0;
            for &i in chunk {
                let (x, y) = &samples[i];
                let err = model.predict_proba(x) - if *y { 1.0 } else { 0.0 };
                for (g, v) in grad_w.iter_mut().zip(x) {
                    *g += err * v;
                }
                grad_b += err;
            }
            let scale = config.learning_rate / chunk.len() as f64;
            for (w, g) in model.weights.iter_mut().zip(&grad_w) {
                *w -= scale * g;
            }
            model.bias -= scale * grad_b;
        }
    }
    Ok(model)
}

/// Mean log-loss, for diagnostics.
pub fn log_loss(model: &LogisticModel, samples: &[(Vec<f64>, bool)]) -> f64 {
    let eps = 1e-15;
    let total: f64 = samples
        .iter()
        .map(|(x, y)| {
            let p = model.predict_proba(x).clamp(eps, 1.0 - eps);
            if *y { -p.ln() } else { -(1.0 - p).ln() }
        })
        .sum();
    total / samples.len().max(1) as f64
}
