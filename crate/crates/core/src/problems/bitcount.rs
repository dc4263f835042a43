//! Cubic regression from a 120-bit string whose field widths are evolved.

use rand::Rng;

use super::{grid, ProblemError};
use crate::genome::{Genome, GenomeTemplate};
use crate::omnirep::OmnirepProblem;

pub const DEFAULT_TOTAL_BITS: usize = 120;
const MIN_FIELD: i64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct BitCountProblem {
    pub dataset: Vec<(f64, f64)>,
    /// Generating coefficients `(a, b, c, d)`.
    pub target: [f64; 4],
    pub total_bits: usize,
    /// Decoded coefficients lie in `[-coeff_range, coeff_range)`.
    pub coeff_range: f64,
}

impl BitCountProblem {
    pub fn new(target: [f64; 4], xs: &[f64], coeff_range: f64) -> Self {
        let dataset = xs.iter().map(|&x| (x, cubic(&target, x))).collect();
        Self {
            dataset,
            target,
            total_bits: DEFAULT_TOTAL_BITS,
            coeff_range,
        }
    }

    /// Random target coefficients uniform in `[coeff_low, coeff_high]`,
    /// sampled on `points` evenly spaced x in `[-1, 1]`.
    pub fn generate<R: Rng + ?Sized>(
        rng: &mut R,
        points: usize,
        coeff_low: f64,
        coeff_high: f64,
        coeff_range: f64,
    ) -> Self {
        let target = [(); 4].map(|_| rng.random_range(coeff_low..=coeff_high));
        Self::new(target, &grid(-1.0, 1.0, points), coeff_range)
    }
}

fn cubic(c: &[f64; 4], x: f64) -> f64 {
    c[0] * x * x * x + c[1] * x * x + c[2] * x + c[3]
}

fn check_allocation(alloc: &[i64], total_bits: usize) -> Result<(), ProblemError> {
    if alloc.len() != 4 {
        return Err(ProblemError::Contract(format!(
            "expected 4 field widths, got {}",
            alloc.len()
        )));
    }
    if let Some(&n) = alloc.iter().find(|&&n| n < MIN_FIELD) {
        return Err(ProblemError::Contract(format!("field width {n} below {MIN_FIELD}")));
    }
    let sum: i64 = alloc.iter().sum();
    if sum as usize > total_bits {
        return Err(ProblemError::Contract(format!(
            "field widths sum to {sum}, more than {total_bits} bits"
        )));
    }
    Ok(())
}

/// Reads `alloc[i]` bits per coefficient from bit 0 onward (most significant
/// bit first). A field of width `n` holding `u` decodes to
/// `(u - 2^(n-1)) / 2^(n-1) * coeff_range`.
pub fn decode_bitcount(
    bits: &[bool],
    alloc: &[i64],
    coeff_range: f64,
) -> Result<[f64; 4], ProblemError> {
    check_allocation(alloc, bits.len())?;
    if bits.len() > 127 {
        return Err(ProblemError::Contract("bit strings above 127 bits".into()));
    }
    let mut out = [0.0; 4];
    let mut pos = 0usize;
    for (slot, &n) in out.iter_mut().zip(alloc) {
        let n = n as usize;
        let uint = bits[pos..pos + n]
            .iter()
            .fold(0u128, |acc, &b| (acc << 1) | b as u128);
        let half = (1u128 << (n - 1)) as f64;
        *slot = (uint as f64 - half) / half * coeff_range;
        pos += n;
    }
    Ok(out)
}

/// Mean squared error of the cubic with `coeffs` over the dataset.
pub fn eval_cubic(coeffs: &[f64; 4], dataset: &[(f64, f64)]) -> f64 {
    let sse: f64 = dataset
        .iter()
        .map(|&(x, y)| {
            let r = cubic(coeffs, x) - y;
            r * r
        })
        .sum();
    sse / dataset.len() as f64
}

/// Raises every width to at least 2, then shrinks the allocation until it
/// fits in `total_bits`: proportional scaling first, then single-bit
/// decrements of the widest field (lowest index on ties).
pub fn repair_allocation(alloc: &mut [i64], total_bits: usize) {
    let budget = total_bits as i64;
    for n in alloc.iter_mut() {
        *n = (*n).max(MIN_FIELD);
    }
    let sum: i64 = alloc.iter().sum();
    if sum > budget {
        for n in alloc.iter_mut() {
            *n = (*n * budget / sum).max(MIN_FIELD);
        }
    }
    while alloc.iter().sum::<i64>() > budget {
        let (widest, _) = alloc
            .iter()
            .enumerate()
            .fold((0, i64::MIN), |(bi, bn), (i, &n)| if n > bn { (i, n) } else { (bi, bn) });
        if alloc[widest] <= MIN_FIELD {
            break;
        }
        alloc[widest] -= 1;
    }
}

impl OmnirepProblem for BitCountProblem {
    fn representation_template(&self) -> GenomeTemplate {
        GenomeTemplate::BitString {
            len: self.total_bits,
        }
    }

    fn encoding_template(&self) -> GenomeTemplate {
        let max = self.total_bits as i64 - 3 * MIN_FIELD;
        GenomeTemplate::int_uniform(4, MIN_FIELD, max)
    }

    fn eval(&self, representation: &Genome, encoding: &Genome) -> Result<f64, ProblemError> {
        let bits = representation
            .as_bits()
            .ok_or_else(|| ProblemError::Contract("representation must be a bit string".into()))?;
        let alloc = encoding
            .as_ints()
            .ok_or_else(|| ProblemError::Contract("encoding must be an int vector".into()))?;
        let coeffs = decode_bitcount(bits, alloc, self.coeff_range)?;
        Ok(eval_cubic(&coeffs, &self.dataset))
    }

    fn repair_encoding(&self, mut g: Genome) -> Genome {
        if let Genome::IntVector { values, .. } = &mut g {
            repair_allocation(values, self.total_bits);
        }
        g
    }

    fn encoding_size(&self, encoding: &Genome) -> f64 {
        encoding.as_ints().map_or(0.0, |v| v.iter().sum::<i64>() as f64)
    }
}
