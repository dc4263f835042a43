mod support;

use coevo::rng::RngStreams;
use coevo::{knn_novelty, BehaviorPoint, NoveltyArchive};
use proptest::prelude::*;
use rand::Rng;
use support::brute_novelty;

fn archive_of(points: &[Vec<f64>], k: usize) -> NoveltyArchive {
    let mut a = NoveltyArchive::new(k);
    for p in points {
        a.update(&[(BehaviorPoint::new(p.clone()), 0.0)]);
    }
    a
}

fn bp(v: &[Vec<f64>]) -> Vec<BehaviorPoint> {
    v.iter().cloned().map(BehaviorPoint::new).collect()
}

#[test]
fn matches_brute_force_on_random_instances() {
    let streams = RngStreams::new(2024).child("novelty-oracle");
    for case in 0..1000u64 {
        let mut rng = streams.stream(0, case);
        let k = [1, 5, 15][(case % 3) as usize];
        let size = rng.random_range(1..=200);
        let n_archive = rng.random_range(0..=size);
        let mut pts: Vec<Vec<f64>> = (0..=size)
            .map(|_| vec![rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0)])
            .collect();
        // a few exact duplicates exercise ties
        if size > 4 && case % 4 == 0 {
            pts[1] = pts[2].clone();
        }
        let p = pts.pop().unwrap();
        let (cohort, archived) = pts.split_at(size - n_archive);
        let got = knn_novelty(&BehaviorPoint::new(p.clone()), &bp(cohort), &archive_of(archived, k), k);
        assert_eq!(got, brute_novelty(&p, &pts, k), "case {case}, k {k}, size {size}");
    }
}

#[test]
fn no_candidates_is_infinite() {
    let p = BehaviorPoint::from((1.0, 2.0));
    assert_eq!(knn_novelty(&p, &[], &NoveltyArchive::new(15), 15), f64::INFINITY);
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0..100.0f64, 2)
}

proptest! {
    #[test]
    fn invariant_to_cohort_and_archive_order(
        p in point(),
        mut cohort in prop::collection::vec(point(), 0..40),
        mut archived in prop::collection::vec(point(), 0..40),
        k in 1usize..20,
        rot in 0usize..40,
    ) {
        let before = knn_novelty(&BehaviorPoint::new(p.clone()), &bp(&cohort), &archive_of(&archived, k), k);
        if !cohort.is_empty() {
            let r = rot % cohort.len();
            cohort.rotate_left(r);
        }
        cohort.reverse();
        archived.reverse();
        let after = knn_novelty(&BehaviorPoint::new(p), &bp(&cohort), &archive_of(&archived, k), k);
        prop_assert_eq!(before, after);
    }

    #[test]
    fn moving_between_cohort_and_archive_changes_nothing(
        p in point(),
        all in prop::collection::vec(point(), 1..60),
        split in 0usize..60,
        k in 1usize..20,
    ) {
        let s = split.min(all.len());
        let a = knn_novelty(&BehaviorPoint::new(p.clone()), &bp(&all), &NoveltyArchive::new(k), k);
        let b = knn_novelty(&BehaviorPoint::new(p), &bp(&all[..s]), &archive_of(&all[s..], k), k);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn extra_candidates_never_raise_novelty_once_k_are_present(
        p in point(),
        cohort in prop::collection::vec(point(), 15..50),
        extra in point(),
    ) {
        let pb = BehaviorPoint::new(p);
        let base = knn_novelty(&pb, &bp(&cohort), &NoveltyArchive::new(15), 15);
        let mut more = cohort.clone();
        more.push(extra);
        prop_assert!(knn_novelty(&pb, &bp(&more), &NoveltyArchive::new(15), 15) <= base);
    }

    #[test]
    fn archive_grows_by_one_per_update(scores in prop::collection::vec(0.0..10.0f64, 1..30)) {
        let mut a = NoveltyArchive::new(15);
        let scored: Vec<(BehaviorPoint, f64)> = scores
            .iter()
            .enumerate()
            .map(|(i, &s)| (BehaviorPoint::from((i as f64, 0.0)), s))
            .collect();
        a.update(&scored);
        prop_assert_eq!(a.len(), 1);
        let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let first = scores.iter().position(|&s| s == best).unwrap();
        prop_assert_eq!(&a.points()[0], &scored[first].0);
    }
}
