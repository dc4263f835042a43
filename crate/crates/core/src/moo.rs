//! ZDT two-objective benchmarks, Pareto dominance, a non-dominated archive
//! and IGD scoring. Both objectives are minimized.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MooError {
    #[error("expected {expected} variables, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("x[{index}] = {value} outside [{lo}, {hi}]")]
    OutOfBounds { index: usize, value: f64, lo: f64, hi: f64 },
    #[error("unknown ZDT problem {0} (expected 1-4)")]
    UnknownProblem(u8),
    #[error("{0} point set is empty")]
    Empty(&'static str),
}

/// How `f2` is assembled from `g` and `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZdtForm {
    /// `f2 = g * h(f1, g)`, the published benchmark definition.
    #[default]
    Standard,
    /// `f2 = h(f1, g)` without the leading `g` factor.
    Verbatim,
}

pub type ObjPoint = (f64, f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZdtProblem {
    pub id: u8,
    pub k: usize,
    pub form: ZdtForm,
}

impl ZdtProblem {
    /// Problem `id` with its customary dimension (30, or 10 for ZDT4).
    pub fn new(id: u8, form: ZdtForm) -> Result<Self, MooError> {
        let k = match id {
            1..=3 => 30,
            4 => 10,
            _ => return Err(MooError::UnknownProblem(id)),
        };
        Ok(Self { id, k, form })
    }

    pub fn with_dimension(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn bounds(&self, index: usize) -> (f64, f64) {
        if self.id == 4 && index > 0 {
            (-5.0, 5.0)
        } else {
            (0.0, 1.0)
        }
    }

    pub fn all_bounds(&self) -> Vec<(f64, f64)> {
        (0..self.k).map(|i| self.bounds(i)).collect()
    }

    fn g(&self, x: &[f64]) -> f64 {
        let rest = &x[1..];
        match self.id {
            4 => {
                1.0 + 10.0 * (self.k - 1) as f64
                    + rest
                        .iter()
                        .map(|&xi| xi * xi - 10.0 * (4.0 * PI * xi).cos())
                        .sum::<f64>()
            }
            _ => 1.0 + 9.0 / (self.k - 1) as f64 * rest.iter().sum::<f64>(),
        }
    }

    /// Shape function `h(f1, g)`.
    pub fn h(&self, f1: f64, g: f64) -> f64 {
        let r = f1 / g;
        match self.id {
            2 => 1.0 - r * r,
            3 => 1.0 - r.sqrt() - r * (10.0 * PI * f1).sin(),
            _ => 1.0 - r.sqrt(),
        }
    }
}

/// Evaluates `(f1, f2)` at `x`.
pub fn zdt_eval(p: &ZdtProblem, x: &[f64]) -> Result<ObjPoint, MooError> {
    if x.len() != p.k || p.k < 2 {
        return Err(MooError::Dimension {
            expected: p.k,
            got: x.len(),
        });
    }
    for (index, &value) in x.iter().enumerate() {
        let (lo, hi) = p.bounds(index);
        if !(lo..=hi).contains(&value) {
            return Err(MooError::OutOfBounds { index, value, lo, hi });
        }
    }
    let f1 = x[0];
    let g = p.g(x);
    let h = p.h(f1, g);
    let f2 = match p.form {
        ZdtForm::Standard => g * h,
        ZdtForm::Verbatim => h,
    };
    Ok((f1, f2))
}

/// `p` is no worse than `q` in both objectives and differs from it.
pub fn dominates(p: ObjPoint, q: ObjPoint) -> bool {
    p.0 <= q.0 && p.1 <= q.1 && p != q
}

/// Mutually non-dominated set of objective points with the solutions that
/// produced them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParetoArchive<S> {
    members: Vec<(ObjPoint, S)>,
    capacity: Option<usize>,
}

impl<S> ParetoArchive<S> {
    pub fn new() -> Self {
        Self {
            members: Vec::new(),
            capacity: None,
        }
    }

    /// An archive pruned by crowding distance once it exceeds `capacity`.
    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            members: Vec::new(),
            capacity: Some(capacity.max(2)),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[(ObjPoint, S)] {
        &self.members
    }

    pub fn points(&self) -> Vec<ObjPoint> {
        self.members.iter().map(|m| m.0).collect()
    }

    /// Inserts unless dominated by or equal to a member; drops members the
    /// new point dominates. Returns whether the point was inserted.
    pub fn insert(&mut self, point: ObjPoint, solution: S) -> bool {
        if self
            .members
            .iter()
            .any(|(m, _)| *m == point || dominates(*m, point))
        {
            return false;
        }
        self.members.retain(|(m, _)| !dominates(point, *m));
        self.members.push((point, solution));
        if let Some(cap) = self.capacity {
            while self.members.len() > cap {
                let victim = most_crowded(&self.points());
                self.members.remove(victim);
            }
        }
        true
    }

    /// Members sorted by increasing `f1`.
    pub fn sorted(&self) -> Vec<&(ObjPoint, S)> {
        let mut v: Vec<_> = self.members.iter().collect();
        v.sort_by(|a, b| a.0 .0.total_cmp(&b.0 .0).then(a.0 .1.total_cmp(&b.0 .1)));
        v
    }
}

/// Crowding distance of each point (extremes get infinity).
pub fn crowding_distances(points: &[ObjPoint]) -> Vec<f64> {
    let n = points.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    for obj in 0..2 {
        let val = |i: usize| if obj == 0 { points[i].0 } else { points[i].1 };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| val(a).total_cmp(&val(b)).then(a.cmp(&b)));
        let span = val(order[n - 1]) - val(order[0]);
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        if span > 0.0 {
            for w in 1..n - 1 {
                dist[order[w]] += (val(order[w + 1]) - val(order[w - 1])) / span;
            }
        }
    }
    dist
}

fn most_crowded(points: &[ObjPoint]) -> usize {
    let d = crowding_distances(points);
    let mut victim = 0;
    for i in 1..d.len() {
        if d[i] < d[victim] {
            victim = i;
        }
    }
    victim
}

/// Exact non-dominated subset of `points`, duplicates removed, in input
/// order of first occurrence.
pub fn nondominated(points: &[ObjPoint]) -> Vec<ObjPoint> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a]
            .0
            .total_cmp(&points[b].0)
            .then(points[a].1.total_cmp(&points[b].1))
            .then(a.cmp(&b))
    });
    // Sweeping by increasing f1 (then f2), a point survives iff its f2 is
    // strictly below every f2 seen so far.
    let mut keep = vec![false; points.len()];
    let mut best_f2 = f64::INFINITY;
    for i in idx {
        if points[i].1 < best_f2 {
            keep[i] = true;
            best_f2 = points[i].1;
        }
    }
    points
        .iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(*p))
        .collect()
}

/// `n` points of the optimal front: `10 n` samples of `f1` on `[0, 1]` at
/// `g = 1`, filtered to the non-dominated ones and thinned evenly by `f1`.
pub fn reference_front(p: &ZdtProblem, n: usize) -> Vec<ObjPoint> {
    if n == 0 {
        return Vec::new();
    }
    let samples = 10 * n;
    let curve: Vec<ObjPoint> = (0..samples)
        .map(|i| {
            let f1 = if samples == 1 { 0.0 } else { i as f64 / (samples - 1) as f64 };
            (f1, p.h(f1, 1.0))
        })
        .collect();
    let front = nondominated(&curve);
    if front.len() <= n {
        return front;
    }
    if n == 1 {
        return vec![front[0]];
    }
    let m = front.len();
    (0..n)
        .map(|i| front[(i * (m - 1) + (n - 1) / 2) / (n - 1)])
        .collect()
}

/// Inverted generational distance: mean over reference points of the
/// distance to the closest obtained point.
pub fn igd(obtained: &[ObjPoint], reference: &[ObjPoint]) -> Result<f64, MooError> {
    if obtained.is_empty() {
        return Err(MooError::Empty("obtained"));
    }
    if reference.is_empty() {
        return Err(MooError::Empty("reference"));
    }
    let total: f64 = reference
        .iter()
        .map(|r| {
            obtained
                .iter()
                .map(|o| ((r.0 - o.0).powi(2) + (r.1 - o.1).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / reference.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zdt1(form: ZdtForm) -> ZdtProblem {
        ZdtProblem::new(1, form).unwrap()
    }

    #[test]
    fn zdt1_known_points() {
        for form in [ZdtForm::Standard, ZdtForm::Verbatim] {
            let p = zdt1(form);
            assert_eq!(zdt_eval(&p, &[0.0; 30]).unwrap(), (0.0, 1.0));
            let mut x = [0.0; 30];
            x[0] = 0.25;
            assert_eq!(zdt_eval(&p, &x).unwrap(), (0.25, 0.5));
        }
        let ones = [1.0; 30];
        let (_, s) = zdt_eval(&zdt1(ZdtForm::Standard), &ones).unwrap();
        let (_, v) = zdt_eval(&zdt1(ZdtForm::Verbatim), &ones).unwrap();
        assert!((s - 6.837722339831621).abs() < 1e-12, "{s}");
        assert!((v - 0.683772233983162).abs() < 1e-12, "{v}");
    }

    #[test]
    fn eval_errors() {
        let p = zdt1(ZdtForm::Standard);
        assert!(matches!(zdt_eval(&p, &[0.0; 29]), Err(MooError::Dimension { .. })));
        let mut x = [0.0; 30];
        x[3] = 1.5;
        assert!(matches!(zdt_eval(&p, &x), Err(MooError::OutOfBounds { index: 3, .. })));
        let z4 = ZdtProblem::new(4, ZdtForm::Standard).unwrap();
        let mut x = [0.0; 10];
        x[1] = -4.0;
        assert!(zdt_eval(&z4, &x).is_ok());
        assert!(ZdtProblem::new(5, ZdtForm::Standard).is_err());
    }

    #[test]
    fn dominance() {
        assert!(dominates((0.0, 0.0), (1.0, 1.0)));
        assert!(!dominates((0.0, 1.0), (1.0, 0.0)));
        assert!(!dominates((1.0, 0.0), (0.0, 1.0)));
        assert!(!dominates((0.3, 0.3), (0.3, 0.3)));
        assert!(dominates((0.3, 0.2), (0.3, 0.3)));
    }

    #[test]
    fn archive_inserts() {
        let mut a = ParetoArchive::new();
        assert!(a.insert((1.0, 1.0), ()));
        assert_eq!(a.len(), 1);
        assert!(a.insert((2.0, 0.5), ()));
        assert!(!a.insert((2.0, 0.5), ()));
        assert!(!a.insert((3.0, 3.0), ()));
        assert!(a.insert((0.0, 0.0), ()));
        assert_eq!(a.points(), vec![(0.0, 0.0)]);
    }

    #[test]
    fn capacity_prunes_interior_points() {
        let mut a = ParetoArchive::with_capacity(5);
        for i in 0..=20 {
            let f1 = i as f64 / 20.0;
            a.insert((f1, 1.0 - f1), i);
        }
        assert_eq!(a.len(), 5);
        let pts = a.points();
        assert!(pts.contains(&(0.0, 1.0)));
        assert!(pts.contains(&(1.0, 0.0)));
    }

    #[test]
    fn fronts() {
        let z1 = reference_front(&zdt1(ZdtForm::Standard), 100);
        assert_eq!(z1.len(), 100);
        for &(f1, f2) in &z1 {
            assert!((f2 - (1.0 - f1.sqrt())).abs() < 1e-12);
        }
        let z2 = ZdtProblem::new(2, ZdtForm::Standard).unwrap();
        assert_eq!(z2.h(0.5, 1.0), 0.75);
        let z3 = ZdtProblem::new(3, ZdtForm::Standard).unwrap();
        let n = 100;
        let sampled: Vec<ObjPoint> = (0..10 * n)
            .map(|i| {
                let f1 = i as f64 / (10 * n - 1) as f64;
                (f1, z3.h(f1, 1.0))
            })
            .collect();
        let kept = nondominated(&sampled);
        assert!(kept.len() < sampled.len());
        assert_eq!(reference_front(&z3, n).len(), n);
    }

    #[test]
    fn igd_values() {
        let r = vec![(0.0, 1.0), (0.5, 0.3), (1.0, 0.0)];
        assert_eq!(igd(&r, &r).unwrap(), 0.0);
        assert_eq!(igd(&[(3.0, 4.0)], &[(0.0, 0.0)]).unwrap(), 5.0);
        let a = igd(&[(0.2, 0.9)], &r).unwrap();
        let b = igd(&[(0.2, 0.9), (0.9, 0.1)], &r).unwrap();
        assert!(b <= a);
        assert!(igd(&[], &r).is_err());
        assert!(igd(&r, &[]).is_err());
    }
}
