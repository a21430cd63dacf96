//! Multinomial logistic regression over sparse feature vectors, trained by
//! full-batch gradient descent with L2 regularization (the intercept is not
//! regularized). Small, dependency-free and bit-for-bit deterministic: the
//! gradient is accumulated in sample order, so the same data and seed always
//! produce the same weights.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Sparse feature vector: (feature index, value) entries, each index at most
/// once. Indices are dense slots below the hashed blocks and need not be
/// sorted.
pub type SparseVec = Vec<(u32, f64)>;

const LEARNING_RATE: f64 = 0.5;
const EPOCHS: usize = 150;

#[derive(Debug, Clone, PartialEq)]
pub struct LogReg {
    pub dim: usize,
    pub n_classes: usize,
    /// Per class: `dim` feature weights followed by the intercept.
    pub weights: Vec<Vec<f64>>,
}

impl LogReg {
    pub fn zeros(dim: usize, n_classes: usize) -> Self {
        LogReg {
            dim,
            n_classes,
            weights: vec![vec![0.0; dim + 1]; n_classes],
        }
    }

    pub fn scores(&self, x: &SparseVec) -> Vec<f64> {
        self.weights
            .iter()
            .map(|w| {
                let mut z = w[self.dim]; // intercept
                for &(i, v) in x {
                    z += w[i as usize] * v;
                }
                z
            })
            .collect()
    }

    /// Class index with the highest score; ties go to the earliest class.
    pub fn predict(&self, x: &SparseVec) -> usize {
        let scores = self.scores(x);
        let mut best = 0;
        for (c, &s) in scores.iter().enumerate().skip(1) {
            if s > scores[best] {
                best = c;
            }
        }
        best
    }
}

fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in z.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    for v in z.iter_mut() {
        *v /= sum;
    }
}

/// Fits the model on `(features, class)` samples. `lambda` is the L2
/// strength applied to all weights except the intercepts.
pub fn fit(samples: &[(SparseVec, usize)], dim: usize, n_classes: usize, lambda: f64) -> LogReg {
    let mut model = LogReg::zeros(dim, n_classes);
    if samples.is_empty() {
        return model;
    }
    // A weight only ever leaves zero if its feature occurs in some sample,
    // so the update loops can stick to the occupied indices.
    let mut active: Vec<usize> = samples
        .iter()
        .flat_map(|(x, _)| x.iter().map(|&(i, _)| i as usize))
        .collect();
    active.sort_unstable();
    active.dedup();

    let n = samples.len() as f64;
    let mut grad = vec![vec![0.0f64; dim + 1]; n_classes];
    let mut p = vec![0.0f64; n_classes];
    for _ in 0..EPOCHS {
        for g in &mut grad {
            for &i in &active {
                g[i] = 0.0;
            }
            g[dim] = 0.0;
        }
        for (x, y) in samples {
            for (c, w) in model.weights.iter().enumerate() {
                let mut z = w[dim];
                for &(i, v) in x {
                    z += w[i as usize] * v;
                }
                p[c] = z;
            }
            softmax_in_place(&mut p);
            for (c, g) in grad.iter_mut().enumerate() {
                let delta = p[c] - if c == *y { 1.0 } else { 0.0 };
                if delta == 0.0 {
                    continue;
                }
                for &(i, v) in x {
                    g[i as usize] += delta * v;
                }
                g[dim] += delta;
            }
        }
        for (w, g) in model.weights.iter_mut().zip(&grad) {
            for &i in &active {
                w[i] -= LEARNING_RATE * (g[i] / n + lambda * w[i]);
            }
            w[dim] -= LEARNING_RATE * g[dim] / n;
        }
    }
    model
}

/// Mean accuracy of `folds`-fold cross validation. The fold split comes from
/// one seeded shuffle, so every regularization candidate sees the same
/// folds.
pub fn cross_validate(
    samples: &[(SparseVec, usize)],
    dim: usize,
    n_classes: usize,
    folds: usize,
    lambda: f64,
    seed: u64,
) -> f64 {
    let mut order: Vec<usize> = (0..samples.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let mut accuracies = Vec::with_capacity(folds);
    for fold in 0..folds {
        let held: Vec<usize> = order
            .iter()
            .copied()
            .skip(fold)
            .step_by(folds)
            .collect();
        if held.is_empty() {
            continue;
        }
        let held_set: std::collections::HashSet<usize> = held.iter().copied().collect();
        let train: Vec<(SparseVec, usize)> = order
            .iter()
            .filter(|i| !held_set.contains(i))
            .map(|&i| samples[i].clone())
            .collect();
        let model = fit(&train, dim, n_classes, lambda);
        let correct = held
            .iter()
            .filter(|&&i| model.predict(&samples[i].0) == samples[i].1)
            .count();
        accuracies.push(correct as f64 / held.len() as f64);
    }
    if accuracies.is_empty() {
        0.0
    } else {
        accuracies.iter().sum::<f64>() / accuracies.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn separable_samples() -> Vec<(SparseVec, usize)> {
        // Class by the sign of feature 0; feature 1 is noise-free ballast.
        let mut samples = Vec::new();
        for k in 0..20 {
            let v = 0.5 + 0.1 * k as f64;
            samples.push((vec![(0, v), (1, 1.0)], 0));
            samples.push((vec![(0, -v), (1, 1.0)], 1));
        }
        samples
    }

    #[test]
    fn fits_a_separable_problem() {
        let samples = separable_samples();
        let model = fit(&samples, 2, 2, 1e-4);
        for (x, y) in &samples {
            assert_eq!(model.predict(x), *y);
        }
    }

    #[test]
    fn cross_validation_is_perfect_when_separable() {
        let samples = separable_samples();
        let acc = cross_validate(&samples, 2, 2, 5, 1e-4, 42);
        assert!((acc - 1.0).abs() < 1e-12, "accuracy {acc}");
    }

    #[test]
    fn zero_model_predicts_the_first_class() {
        let model = LogReg::zeros(3, 4);
        assert_eq!(model.predict(&vec![(0, 1.0), (2, -2.0)]), 0);
    }

    #[test]
    fn ties_break_to_the_earliest_class() {
        let mut model = LogReg::zeros(1, 3);
        model.weights[1][0] = 1.0;
        model.weights[2][0] = 1.0;
        assert_eq!(model.predict(&vec![(0, 2.0)]), 1);
    }

    #[test]
    fn stronger_regularization_shrinks_weights() {
        let samples = separable_samples();
        let loose = fit(&samples, 2, 2, 1e-4);
        let tight = fit(&samples, 2, 2, 0.5);
        let norm = |m: &LogReg| -> f64 {
            m.weights
                .iter()
                .flat_map(|w| w[..m.dim].iter())
                .map(|v| v * v)
                .sum()
        };
        assert!(norm(&tight) < norm(&loose));
    }

    #[test]
    fn training_is_deterministic() {
        let samples = separable_samples();
        let a = fit(&samples, 2, 2, 1e-3);
        let b = fit(&samples, 2, 2, 1e-3);
        assert_eq!(a.weights, b.weights);
    }

    #[test]
    fn three_class_problem_converges() {
        let mut samples: Vec<(SparseVec, usize)> = Vec::new();
        for k in 0..15 {
            let jitter = 0.05 * (k % 5) as f64;
            samples.push((vec![(0, 1.0 + jitter)], 0));
            samples.push((vec![(1, 1.0 + jitter)], 1));
            samples.push((vec![(2, 1.0 + jitter)], 2));
        }
        let model = fit(&samples, 3, 3, 1e-3);
        for (x, y) in &samples {
            assert_eq!(model.predict(x), *y);
        }
    }
}
