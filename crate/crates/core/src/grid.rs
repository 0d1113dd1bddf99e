use serde::{Deserialize, Serialize};

/// A real function sampled at increasing abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl GridFunction {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        assert_eq!(x.len(), y.len(), "abscissae and samples differ in length");
        Self { x, y }
    }

    /// Samples `f` on `intervals + 1` equally spaced points of `[a, b]`, endpoints included.
    pub fn sample(a: f64, b: f64, intervals: usize, f: impl Fn(f64) -> f64) -> Self {
        let x = uniform(a, b, intervals);
        let y = x.iter().map(|&t| f(t)).collect();
        Self { x, y }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.y.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest |self - other| over the common abscissae, optionally restricted to `[lo, hi]`.
    pub fn sup_distance(&self, other: &GridFunction, lo: f64, hi: f64) -> f64 {
        debug_assert_eq!(self.x.len(), other.x.len());
        self.x
            .iter()
            .zip(self.y.iter().zip(&other.y))
            .filter(|(x, _)| **x >= lo && **x <= hi)
            .fold(0.0, |m, (_, (a, b))| m.max((a - b).abs()))
    }

    /// Piecewise-linear interpolation; clamps outside the range.
    pub fn interpolate(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.y[0];
        }
        if t >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = self.x.partition_point(|&v| v <= t) - 1;
        let w = (t - self.x[i]) / (self.x[i + 1] - self.x[i]);
        self.y[i] + w * (self.y[i + 1] - self.y[i])
    }

    /// Number of strict sign changes, ignoring samples with |y| <= `floor`.
    pub fn sign_changes(&self, floor: f64) -> usize {
        let mut last = 0.0f64;
        let mut count = 0;
        for &v in &self.y {
            if v.abs() <= floor {
                continue;
            }
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
        count
    }
}

pub fn uniform(a: f64, b: f64, intervals: usize) -> Vec<f64> {
    let h = (b - a) / intervals as f64;
    (0..=intervals)
        .map(|i| if i == intervals { b } else { a + h * i as f64 })
        .collect()
}
