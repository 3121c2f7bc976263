//! Binary logistic regression trained by full-batch gradient descent.
//!
//! Both the entry classifier (sparse n-gram features) and the location
//! classifier (dense embeddings) use this trainer. The objective is the mean
//! log-loss plus `l2 / 2 * |w|^2` (the bias is not regularized). The step size
//! defaults to `1 / L`, where `L` bounds the curvature of the objective, so the
//! iteration is monotone without tuning. Training stops when the relative loss
//! change drops below `tolerance` or after `max_epochs` epochs. There is no
//! sampling, so results depend only on the data and its order.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrainError {
    #[error("training data needs both classes (positives: {positives}, negatives: {negatives})")]
    SingleClassTraining { positives: usize, negatives: usize },
    #[error("feature dimension mismatch: model has {expected}, sample has {got}")]
    DimMismatch { expected: usize, got: usize },
}

/// Anything that can act as a feature vector for the trainer.
pub trait Features {
    /// Dimension the vector lives in.
    fn dim(&self) -> usize;
    fn dot(&self, weights: &[f64]) -> f64;
    /// `acc += alpha * self`
    fn add_scaled_to(&self, alpha: f64, acc: &mut [f64]);
    fn squared_norm(&self) -> f64;
}

/// Sorted sparse vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    pub dim: usize,
    pub entries: Vec<(u32, f32)>,
}

impl SparseVector {
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }
}

impl Features for SparseVector {
    fn dim(&self) -> usize {
        self.dim
    }

    fn dot(&self, weights: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|&(i, v)| weights[i as usize] * v as f64)
            .sum()
    }

    fn add_scaled_to(&self, alpha: f64, acc: &mut [f64]) {
        for &(i, v) in &self.entries {
            acc[i as usize] += alpha * v as f64;
        }
    }

    fn squared_norm(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| (v as f64).powi(2)).sum()
    }
}

impl Features for [f32] {
    fn dim(&self) -> usize {
        self.len()
    }

    fn dot(&self, weights: &[f64]) -> f64 {
        self.iter().zip(weights).map(|(&x, &w)| x as f64 * w).sum()
    }

    fn add_scaled_to(&self, alpha: f64, acc: &mut [f64]) {
        for (a, &x) in acc.iter_mut().zip(self) {
            *a += alpha * x as f64;
        }
    }

    fn squared_norm(&self) -> f64 {
        self.iter().map(|&x| (x as f64).powi(2)).sum()
    }
}

impl Features for Vec<f32> {
    fn dim(&self) -> usize {
        self.as_slice().dim()
    }

    fn dot(&self, weights: &[f64]) -> f64 {
        self.as_slice().dot(weights)
    }

    fn add_scaled_to(&self, alpha: f64, acc: &mut [f64]) {
        self.as_slice().add_scaled_to(alpha, acc)
    }

    fn squared_norm(&self) -> f64 {
        self.as_slice().squared_norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub l2: f64,
    pub tolerance: f64,
    pub max_epochs: usize,
    /// `None` picks `1 / L` from the data.
    pub learning_rate: Option<f64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            l2: 1e-4,
            tolerance: 1e-6,
            max_epochs: 500,
            learning_rate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub epochs: usize,
    pub final_loss: f64,
    pub converged: bool,
}

/// Logit is clamped so probabilities stay strictly inside (0, 1).
const MAX_LOGIT: f64 = 30.0;

pub fn sigmoid(z: f64) -> f64 {
    let z = z.clamp(-MAX_LOGIT, MAX_LOGIT);
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(z))` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

impl LogisticModel {
    pub fn zeros(dim: usize) -> Self {
        Self {
            weights: vec![0.0; dim],
            bias: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn logit<X: Features + ?Sized>(&self, x: &X) -> Result<f64, TrainError> {
        if x.dim() != self.dim() {
            return Err(TrainError::DimMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        Ok(x.dot(&self.weights) + self.bias)
    }

    pub fn probability<X: Features + ?Sized>(&self, x: &X) -> Result<f64, TrainError> {
        self.logit(x).map(sigmoid)
    }
}

fn objective<X: Features>(model: &LogisticModel, samples: &[(X, bool)], l2: f64) -> f64 {
    let n = samples.len() as f64;
    let data: f64 = samples
        .iter()
        .map(|(x, y)| {
            let z = x.dot(&model.weights) + model.bias;
            // -log sigmoid(z) for positives, -log(1 - sigmoid(z)) for negatives.
            if *y {
                softplus(-z)
            } else {
                softplus(z)
            }
        })
        .sum::<f64>()
        / n;
    let reg: f64 = model.weights.iter().map(|w| w * w).sum::<f64>() * l2 / 2.0;
    data + reg
}

pub fn train<X: Features>(
    samples: &[(X, bool)],
    dim: usize,
    config: &TrainConfig,
) -> Result<(LogisticModel, TrainReport), TrainError> {
    let positives = samples.iter().filter(|(_, y)| *y).count();
    let negatives = samples.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(TrainError::SingleClassTraining {
            positives,
            negatives,
        });
    }
    if let Some((x, _)) = samples.iter().find(|(x, _)| x.dim() != dim) {
        return Err(TrainError::DimMismatch {
            expected: dim,
            got: x.dim(),
        });
    }

    let max_sq = samples
        .iter()
        .map(|(x, _)| x.squared_norm())
        .fold(0.0, f64::max);
    // The bias acts as a constant feature of value 1.
    let lipschitz = 0.25 * (max_sq + 1.0) + config.l2;
    let lr = config.learning_rate.unwrap_or(1.0 / lipschitz);
    let n = samples.len() as f64;

    let mut model = LogisticModel::zeros(dim);
    let mut grad = vec![0.0; dim];
    let mut loss = objective(&model, samples, config.l2);
    let mut epochs = 0;
    let mut converged = false;

    while epochs < config.max_epochs {
        grad.iter_mut()
            .zip(&model.weights)
            .for_each(|(g, w)| *g = config.l2 * w);
        let mut grad_bias = 0.0;
        for (x, y) in samples {
            let p = sigmoid(x.dot(&model.weights) + model.bias);
            let err = (p - if *y { 1.0 } else { 0.0 }) / n;
            x.add_scaled_to(err, &mut grad);
            grad_bias += err;
        }
        model
            .weights
            .iter_mut()
            .zip(&grad)
            .for_each(|(w, g)| *w -= lr * g);
        model.bias -= lr * grad_bias;
        epochs += 1;

        let next = objective(&model, samples, config.l2);
        let rel = (loss - next).abs() / loss.abs().max(f64::MIN_POSITIVE);
        loss = next;
        if rel < config.tolerance {
            converged = true;
            break;
        }
    }

    Ok((
        model,
        TrainReport {
            epochs,
            final_loss: loss,
            converged,
        },
    ))
}
