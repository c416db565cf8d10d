use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{NumError, Result};
use crate::params::ParamStore;
use crate::tensor::Tensor;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamWConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub weight_decay: f64,
}

impl Default for AdamWConfig {
    fn default() -> Self {
        Self { lr: 1e-4, beta1: 0.9, beta2: 0.999, eps: 1e-8, weight_decay: 0.0 }
    }
}

#[derive(Clone, Debug)]
struct Moments {
    m: Tensor,
    v: Tensor,
}

/// AdamW state plus the plateau tracker used for per-epoch decay.
#[derive(Clone, Debug)]
pub struct OptimState {
    config: AdamWConfig,
    lr: f64,
    step: u64,
    moments: HashMap<String, Moments>,
    best_metric: Option<f64>,
}

impl OptimState {
    pub fn new(config: AdamWConfig) -> Result<Self> {
        if !(config.lr > 0.0) {
            return Err(NumError::Invalid(format!("learning rate must be positive, got {}", config.lr)));
        }
        Ok(Self { config, lr: config.lr, step: 0, moments: HashMap::new(), best_metric: None })
    }

    pub fn lr(&self) -> f64 {
        self.lr
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn best_metric(&self) -> Option<f64> {
        self.best_metric
    }

    /// One AdamW update over every trainable parameter, then zeroes all
    /// gradient slots.
    ///
    /// Weight decay is decoupled: `θ ← θ·(1 − lr·wd)` before the adaptive step.
    pub fn step(&mut self, params: &mut ParamStore) {
        self.step += 1;
        let AdamWConfig { beta1, beta2, eps, weight_decay, .. } = self.config;
        let bc1 = 1.0 - beta1.powi(self.step as i32);
        let bc2 = 1.0 - beta2.powi(self.step as i32);
        let lr = self.lr;
        for (name, p) in params.iter_mut() {
            if p.frozen {
                continue;
            }
            let shape = p.value.shape().to_vec();
            let mom = self
                .moments
                .entry(name.to_string())
                .or_insert_with(|| Moments { m: Tensor::zeros(&shape), v: Tensor::zeros(&shape) });
            if mom.m.shape() != shape.as_slice() {
                // parameter grew (new vocabulary row); keep existing moments
                mom.m = mom.m.pad_to(&shape).unwrap_or_else(|_| Tensor::zeros(&shape));
                mom.v = mom.v.pad_to(&shape).unwrap_or_else(|_| Tensor::zeros(&shape));
            }
            let grad: Vec<f64> = match p.value.grad() {
                Some(g) => g.to_vec(),
                None => vec![0.0; p.value.len()],
            };
            let (m, v) = (mom.m.data_mut(), mom.v.data_mut());
            let theta = p.value.data_mut();
            for i in 0..theta.len() {
                let g = grad[i];
                m[i] = beta1 * m[i] + (1.0 - beta1) * g;
                v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
                if weight_decay != 0.0 {
                    theta[i] *= 1.0 - lr * weight_decay;
                }
                let mhat = m[i] / bc1;
                let vhat = v[i] / bc2;
                theta[i] -= lr * mhat / (vhat.sqrt() + eps);
            }
        }
        params.zero_grads();
    }

    /// Multiplies the learning rate by `factor` unless `val_metric` improves
    /// on the best value seen so far (lower is better; ties decay).
    pub fn plateau_decay(&mut self, val_metric: f64, factor: f64) -> f64 {
        match self.best_metric {
            None => self.best_metric = Some(val_metric),
            Some(best) => {
                if val_metric >= best {
                    self.lr *= factor;
                }
                self.best_metric = Some(best.min(val_metric));
            }
        }
        self.lr
    }
}

/// Scales all trainable gradients so their global L2 norm is at most
/// `max_norm`. Returns the norm before clipping.
pub fn clip_grad_norm(params: &mut ParamStore, max_norm: f64) -> f64 {
    let norm = params
        .trainable()
        .filter_map(|(_, p)| p.value.grad())
        .flat_map(|g| g.iter())
        .map(|g| g * g)
        .sum::<f64>()
        .sqrt();
    if norm > max_norm && norm > 0.0 {
        let s = max_norm / norm;
        for (_, p) in params.iter_mut() {
            if p.frozen {
                continue;
            }
            if let Some(g) = p.value.grad() {
                let scaled: Vec<f64> = g.iter().map(|x| x * s).collect();
                p.value.grad_mut().copy_from_slice(&scaled);
            }
        }
    }
    norm
}
