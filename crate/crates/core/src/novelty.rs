//! k-nearest-neighbour novelty and the archive of past novel behaviours.

/// A point in behaviour space (maze endpoint, `[a, b]` genome, ...).
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorPoint(pub Vec<f64>);

impl BehaviorPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn distance(&self, other: &BehaviorPoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl From<(f64, f64)> for BehaviorPoint {
    fn from((x, y): (f64, f64)) -> Self {
        Self::new(vec![x, y])
    }
}

/// Append-only archive of behaviours that were the most novel of their
/// generation.
#[derive(Debug, Clone, PartialEq)]
pub struct NoveltyArchive {
    points: Vec<BehaviorPoint>,
    k: usize,
}

impl Default for NoveltyArchive {
    fn default() -> Self {
        Self::new(15)
    }
}

impl NoveltyArchive {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        Self { points: Vec::new(), k }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[BehaviorPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Appends the single most novel point of a scored generation (ties to
    /// the lowest index). An empty generation leaves the archive unchanged.
    pub fn update(&mut self, scored: &[(BehaviorPoint, f64)]) {
        let mut best: Option<usize> = None;
        for (i, (_, n)) in scored.iter().enumerate() {
            match best {
                Some(b) if scored[b].1.total_cmp(n).is_ge() => {}
                _ => best = Some(i),
            }
        }
        if let Some(b) = best {
            self.points.push(scored[b].0.clone());
        }
    }

    /// Novelty of `p` against `cohort` and this archive, with the archive's k.
    pub fn novelty(&self, p: &BehaviorPoint, cohort: &[BehaviorPoint]) -> f64 {
        knn_novelty(p, cohort, self, self.k)
    }
}

/// Mean Euclidean distance from `p` to its `k` nearest neighbours among
/// `cohort` and the archive.
///
/// The caller excludes `p` itself from `cohort`. With fewer than `k`
/// candidates the mean runs over all of them; with none the result is
/// `f64::INFINITY`.
pub fn knn_novelty(
    p: &BehaviorPoint,
    cohort: &[BehaviorPoint],
    archive: &NoveltyArchive,
    k: usize,
) -> f64 {
    let mut dists: Vec<f64> = cohort
        .iter()
        .chain(archive.points())
        .map(|q| p.distance(q))
        .collect();
    if dists.is_empty() {
        return f64::INFINITY;
    }
    let take = k.max(1).min(dists.len());
    if take < dists.len() {
        dists.select_nth_unstable_by(take - 1, f64::total_cmp);
        dists.truncate(take);
    }
    // Summing in ascending order keeps the result independent of input order.
    dists.sort_by(f64::total_cmp);
    dists.iter().sum::<f64>() / take as f64
}
