//! Weights `f(s) = e^{-a|s|}` for the geodesic-space metric.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightFunction {
    pub decay: f64,
}

impl WeightFunction {
    pub fn new(decay: f64) -> Result<Self> {
        if !(decay.is_finite() && decay > 0.0) {
            return Err(Error::InvalidParameter(format!("decay must be positive, got {decay}")));
        }
        Ok(WeightFunction { decay })
    }

    pub fn eval(&self, s: f64) -> f64 {
        (-self.decay * s.abs()).exp()
    }

    /// `sup_{|s| ≥ S} 2|s| f(s)`. The function `2s e^{-as}` increases up to `s = 1/a`
    /// and decreases after, so the supremum is at `max(S, 1/a)`.
    pub fn tail_bound(&self, from: f64) -> f64 {
        let s = from.max(0.0).max(1.0 / self.decay);
        if s.is_infinite() {
            return 0.0;
        }
        2.0 * s * (-self.decay * s).exp()
    }

    /// Smallest integer `k ≥ 1` with `tail_bound(k − 1) < r / 4`.
    pub fn window_for(&self, r: f64) -> usize {
        let mut k = 1usize;
        while self.tail_bound((k - 1) as f64) >= r / 4.0 {
            k += 1;
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_values() {
        let f = WeightFunction::new(1.0).unwrap();
        assert!((f.tail_bound(0.0) - 2.0 / std::f64::consts::E).abs() < 1e-15);
        let g = WeightFunction::new(2.0).unwrap();
        assert!((g.tail_bound(3.0) - 6.0 * (-6.0f64).exp()).abs() < 1e-15);
        assert_eq!(f.tail_bound(f64::INFINITY), 0.0);
        assert!(f.tail_bound(800.0) < 1e-300);
    }

    #[test]
    fn class_properties() {
        let f = WeightFunction::new(1.5).unwrap();
        assert_eq!(f.eval(0.0), 1.0);
        for s in [0.1, 1.0, 7.5] {
            assert_eq!(f.eval(s), f.eval(-s));
            assert!(f.eval(s) > 0.0 && f.eval(s) <= 1.0);
        }
        assert!(WeightFunction::new(0.0).is_err());
    }

    #[test]
    fn tail_matches_dense_sampling() {
        for a in [0.5, 1.0, 2.0] {
            let f = WeightFunction::new(a).unwrap();
            for s0 in [0.0, 0.3, 1.0, 2.5] {
                let sampled = (0..200_000)
                    .map(|i| s0 + i as f64 * 1e-4)
                    .map(|s| 2.0 * s * f.eval(s))
                    .fold(0.0, f64::max);
                assert!(f.tail_bound(s0) >= sampled);
                assert!(f.tail_bound(s0) - sampled < 1e-6);
            }
        }
    }

    #[test]
    fn windows() {
        assert_eq!(WeightFunction::new(1.0).unwrap().window_for(1.0 / 3.0), 6);
        assert_eq!(WeightFunction::new(2.0).unwrap().window_for(1.0 / 3.0), 3);
    }
}
