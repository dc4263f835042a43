//! Variant-typed genomes and the templates that sample them.

use rand::Rng;

/// Inclusive bounds of a real gene.
pub type RealBounds = (f64, f64);
/// Inclusive bounds of an integer gene.
pub type IntBounds = (i64, i64);

/// A fixed-length individual genome.
///
/// Each variant carries its own per-gene bounds so operators can keep every
/// gene in range without consulting the problem.
#[derive(Debug, Clone, PartialEq)]
pub enum Genome {
    BitString(Vec<bool>),
    RealVector {
        values: Vec<f64>,
        bounds: Vec<RealBounds>,
    },
    IntVector {
        values: Vec<i64>,
        bounds: Vec<IntBounds>,
    },
    /// Ordered `(first, second)` pairs; all pairs share the same element bounds.
    PairList {
        pairs: Vec<(i64, i64)>,
        bounds: (IntBounds, IntBounds),
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenomeKind {
    BitString,
    RealVector,
    IntVector,
    PairList,
}

impl Genome {
    pub fn kind(&self) -> GenomeKind {
        match self {
            Genome::BitString(_) => GenomeKind::BitString,
            Genome::RealVector { .. } => GenomeKind::RealVector,
            Genome::IntVector { .. } => GenomeKind::IntVector,
            Genome::PairList { .. } => GenomeKind::PairList,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Genome::BitString(bits) => bits.len(),
            Genome::RealVector { values, .. } => values.len(),
            Genome::IntVector { values, .. } => values.len(),
            Genome::PairList { pairs, .. } => pairs.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn real_vector(values: Vec<f64>, bounds: Vec<RealBounds>) -> Self {
        assert_eq!(values.len(), bounds.len(), "one bound per gene");
        Genome::RealVector { values, bounds }
    }

    pub fn int_vector(values: Vec<i64>, bounds: Vec<IntBounds>) -> Self {
        assert_eq!(values.len(), bounds.len(), "one bound per gene");
        Genome::IntVector { values, bounds }
    }

    pub fn as_bits(&self) -> Option<&[bool]> {
        match self {
            Genome::BitString(bits) => Some(bits),
            _ => None,
        }
    }

    pub fn as_reals(&self) -> Option<&[f64]> {
        match self {
            Genome::RealVector { values, .. } => Some(values),
            _ => None,
        }
    }

    pub fn as_ints(&self) -> Option<&[i64]> {
        match self {
            Genome::IntVector { values, .. } => Some(values),
            _ => None,
        }
    }

    pub fn as_pairs(&self) -> Option<&[(i64, i64)]> {
        match self {
            Genome::PairList { pairs, .. } => Some(pairs),
            _ => None,
        }
    }

    /// True when every gene lies within its declared bounds.
    pub fn within_bounds(&self) -> bool {
        match self {
            Genome::BitString(_) => true,
            Genome::RealVector { values, bounds } => values
                .iter()
                .zip(bounds)
                .all(|(v, &(lo, hi))| v.is_finite() && *v >= lo && *v <= hi),
            Genome::IntVector { values, bounds } => values
                .iter()
                .zip(bounds)
                .all(|(v, &(lo, hi))| *v >= lo && *v <= hi),
            Genome::PairList {
                pairs,
                bounds: ((lo0, hi0), (lo1, hi1)),
            } => pairs
                .iter()
                .all(|&(p, q)| p >= *lo0 && p <= *hi0 && q >= *lo1 && q <= *hi1),
        }
    }
}

/// Shape and bounds of a population's genomes, used to sample the initial
/// population.
#[derive(Debug, Clone, PartialEq)]
pub enum GenomeTemplate {
    BitString { len: usize },
    RealVector { bounds: Vec<RealBounds> },
    IntVector { bounds: Vec<IntBounds> },
    PairList { len: usize, bounds: (IntBounds, IntBounds) },
}

impl GenomeTemplate {
    pub fn real_uniform(len: usize, lo: f64, hi: f64) -> Self {
        GenomeTemplate::RealVector {
            bounds: vec![(lo, hi); len],
        }
    }

    pub fn int_uniform(len: usize, lo: i64, hi: i64) -> Self {
        GenomeTemplate::IntVector {
            bounds: vec![(lo, hi); len],
        }
    }

    pub fn len(&self) -> usize {
        match self {
            GenomeTemplate::BitString { len } | GenomeTemplate::PairList { len, .. } => *len,
            GenomeTemplate::RealVector { bounds } => bounds.len(),
            GenomeTemplate::IntVector { bounds } => bounds.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Draws a genome with every gene uniform within its bounds.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Genome {
        match self {
            GenomeTemplate::BitString { len } => {
                Genome::BitString((0..*len).map(|_| rng.random::<bool>()).collect())
            }
            GenomeTemplate::RealVector { bounds } => Genome::RealVector {
                values: bounds
                    .iter()
                    .map(|&(lo, hi)| if hi > lo { rng.random_range(lo..=hi) } else { lo })
                    .collect(),
                bounds: bounds.clone(),
            },
            GenomeTemplate::IntVector { bounds } => Genome::IntVector {
                values: bounds.iter().map(|&(lo, hi)| rng.random_range(lo..=hi)).collect(),
                bounds: bounds.clone(),
            },
            GenomeTemplate::PairList { len, bounds } => {
                let ((lo0, hi0), (lo1, hi1)) = *bounds;
                Genome::PairList {
                    pairs: (0..*len)
                        .map(|_| (rng.random_range(lo0..=hi0), rng.random_range(lo1..=hi1)))
                        .collect(),
                    bounds: *bounds,
                }
            }
        }
    }
}
