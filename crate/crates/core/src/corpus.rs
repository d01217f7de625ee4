//! Reproducible random instances `(E, f, m, p)`.
//!
//! Points are drawn uniformly in `[0, L]` and rejected until every gap is at
//! least `min_gap`; values are standard normal. The generator is ChaCha8 with
//! a fixed seed, so a `(spec, seed)` pair always yields the same corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::divided_differences::SampledFunction;
use crate::trace_functionals::Exponent;
use crate::{Result, TraceError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    pub function: SampledFunction,
    pub m: usize,
    pub p: Exponent,
    /// Length `L` of the interval the points were drawn from.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub count: usize,
    pub seed: u64,
    pub m_values: Vec<usize>,
    /// Upper bound on `#E`; the lower bound is `m + 1`.
    pub max_points: usize,
    pub p_values: Vec<Exponent>,
    pub scales: Vec<f64>,
    pub min_gap: f64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            count: 500,
            seed: 0x5eed,
            m_values: vec![1, 2, 3],
            max_points: 12,
            p_values: vec![Exponent::Finite(1.5), Exponent::Finite(2.0), Exponent::Finite(3.0)],
            scales: vec![2.0, 10.0, 50.0],
            min_gap: 1e-3,
        }
    }
}

impl CorpusSpec {
    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_p_values(mut self, p_values: Vec<Exponent>) -> Self {
        self.p_values = p_values;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.m_values.is_empty() || self.p_values.is_empty() || self.scales.is_empty() {
            return Err(TraceError::InvalidParameter("corpus parameter lists must be non-empty".into()));
        }
        if self.m_values.iter().any(|&m| m == 0 || m + 1 > self.max_points) {
            return Err(TraceError::InvalidParameter("each m needs 1 <= m < max_points".into()));
        }
        for &scale in &self.scales {
            if !(scale > 0.0) || self.min_gap * (self.max_points as f64) >= scale {
                return Err(TraceError::InvalidParameter(format!(
                    "scale {scale} too small for {} points at gap {}",
                    self.max_points, self.min_gap
                )));
            }
        }
        Ok(())
    }

    /// Instance `i` cycles deterministically through `m`, `p` and `L`;
    /// `#E` and the data are random.
    pub fn generate(&self) -> Result<Vec<Instance>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.count)
            .map(|i| {
                let (nm, np) = (self.m_values.len(), self.p_values.len());
                let m = self.m_values[i % nm];
                let p = self.p_values[(i / nm) % np];
                let scale = self.scales[(i / (nm * np)) % self.scales.len()];
                let n = rng.random_range(m + 1..=self.max_points);
                let points = random_points(&mut rng, n, scale, self.min_gap);
                let values = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                Ok(Instance {
                    function: SampledFunction::new(points, values)?,
                    m,
                    p,
                    scale,
                })
            })
            .collect()
    }
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, scale: f64, min_gap: f64) -> Vec<f64> {
    loop {
        let mut points: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..scale)).collect();
        points.sort_by(f64::total_cmp);
        if points.windows(2).all(|w| w[1] - w[0] >= min_gap) {
            return points;
        }
    }
}
