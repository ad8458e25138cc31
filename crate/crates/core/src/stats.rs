//! Small summary statistics with a fixed summation order.

use serde::{Deserialize, Serialize};

/// Mean, sample standard deviation (n − 1) and standard error of the mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub sample_std: f64,
    pub stderr: f64,
}

impl Summary {
    /// Two-pass estimate, summed left to right so results do not depend on
    /// how the values were produced.
    pub fn of(values: &[f64]) -> Summary {
        let n = values.len();
        if n == 0 {
            return Summary {
                n,
                mean: f64::NAN,
                sample_std: f64::NAN,
                stderr: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let sample_std = if n > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Summary {
            n,
            mean,
            sample_std,
            stderr: sample_std / (n as f64).sqrt(),
        }
    }

    /// `(mean − expected) / stderr`; 0 when both the deviation and the error vanish.
    pub fn z_score(&self, expected: f64) -> f64 {
        let dev = self.mean - expected;
        if self.stderr > 0.0 {
            dev / self.stderr
        } else if dev == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(dev)
        }
    }
}
