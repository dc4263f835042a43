//! 50-term polynomial regression where each coefficient's decimal precision
//! is evolved alongside its value.

use rand::Rng;

use super::{grid, ProblemError};
use crate::genome::{Genome, GenomeTemplate};
use crate::omnirep::OmnirepProblem;

pub const TERMS: usize = 50;
pub const MIN_DIGITS: i64 = 1;
pub const MAX_DIGITS: i64 = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionProblem {
    /// Exponent `e_j` of term `j`, each in `0..=4`.
    pub exponents: Vec<u32>,
    pub target: Vec<f64>,
    pub dataset: Vec<(f64, f64)>,
}

impl PrecisionProblem {
    pub fn new(exponents: Vec<u32>, target: Vec<f64>, xs: &[f64]) -> Self {
        assert_eq!(exponents.len(), target.len());
        let mut p = Self {
            exponents,
            target,
            dataset: Vec::new(),
        };
        p.dataset = xs.iter().map(|&x| (x, p.poly(&p.target, x))).collect();
        p
    }

    /// Random exponents and coefficients, `points` evenly spaced x in `[0, 1]`.
    pub fn generate<R: Rng + ?Sized>(rng: &mut R, points: usize) -> Self {
        let exponents = (0..TERMS).map(|_| rng.random_range(0..=4u32)).collect();
        let target = (0..TERMS).map(|_| rng.random_range(0.0..=1.0)).collect();
        Self::new(exponents, target, &grid(0.0, 1.0, points))
    }

    fn poly(&self, coeffs: &[f64], x: f64) -> f64 {
        coeffs
            .iter()
            .zip(&self.exponents)
            .map(|(a, &e)| a * x.powi(e as i32))
            .sum()
    }
}

/// Rounds each coefficient half away from zero to `digits[j]` decimals.
pub fn decode_precision(coeffs: &[f64], digits: &[i64]) -> Vec<f64> {
    coeffs
        .iter()
        .zip(digits)
        .map(|(&c, &d)| {
            let scale = 10f64.powi(d as i32);
            (c * scale).round() / scale
        })
        .collect()
}

/// Mean squared error of the polynomial with `coeffs` over the dataset.
pub fn eval_poly50(coeffs: &[f64], problem: &PrecisionProblem) -> f64 {
    let sse: f64 = problem
        .dataset
        .iter()
        .map(|&(x, y)| {
            let r = problem.poly(coeffs, x) - y;
            r * r
        })
        .sum();
    sse / problem.dataset.len().max(1) as f64
}

impl OmnirepProblem for PrecisionProblem {
    fn representation_template(&self) -> GenomeTemplate {
        GenomeTemplate::real_uniform(self.exponents.len(), 0.0, 1.0)
    }

    fn encoding_template(&self) -> GenomeTemplate {
        GenomeTemplate::int_uniform(self.exponents.len(), MIN_DIGITS, MAX_DIGITS)
    }

    fn eval(&self, representation: &Genome, encoding: &Genome) -> Result<f64, ProblemError> {
        let coeffs = representation
            .as_reals()
            .ok_or_else(|| ProblemError::Contract("representation must be a real vector".into()))?;
        let digits = encoding
            .as_ints()
            .ok_or_else(|| ProblemError::Contract("encoding must be an int vector".into()))?;
        let n = self.exponents.len();
        if coeffs.len() != n || digits.len() != n {
            return Err(ProblemError::Contract(format!(
                "expected {n} coefficients and digits, got {} and {}",
                coeffs.len(),
                digits.len()
            )));
        }
        Ok(eval_poly50(&decode_precision(coeffs, digits), self))
    }

    fn encoding_size(&self, encoding: &Genome) -> f64 {
        encoding.as_ints().map_or(0.0, |v| v.iter().sum::<i64>() as f64)
    }
}
