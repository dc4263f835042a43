//! Brute-force reference implementations shared by the integration tests
//! and the acceptance suite. Written from the textbook definitions, without
//! calling into the library code they check.
#![allow(dead_code)]

use std::f64::consts::PI;

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        s += d * d;
    }
    s.sqrt()
}

/// Sort every distance, keep the first `k`, average them in ascending order.
pub fn brute_novelty(p: &[f64], others: &[Vec<f64>], k: usize) -> f64 {
    if others.is_empty() {
        return f64::INFINITY;
    }
    let mut d: Vec<f64> = others.iter().map(|q| euclid(p, q)).collect();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let take = k.min(d.len());
    let mut s = 0.0;
    for v in &d[..take] {
        s += v;
    }
    s / take as f64
}

/// ZDT1-4 straight from their definitions; `with_g = false` drops the
/// leading `g` factor of `f2`.
pub fn zdt_oracle(id: u8, with_g: bool, x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let f1 = x[0];
    let g = match id {
        1..=3 => 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (n - 1.0),
        4 => {
            1.0 + 10.0 * (n - 1.0)
                + x[1..].iter().map(|v| v * v - 10.0 * (4.0 * PI * v).cos()).sum::<f64>()
        }
        _ => panic!("no ZDT{id}"),
    };
    let r = f1 / g;
    let h = match id {
        1 | 4 => 1.0 - r.sqrt(),
        2 => 1.0 - r * r,
        3 => 1.0 - r.sqrt() - r * (10.0 * PI * f1).sin(),
        _ => unreachable!(),
    };
    (f1, if with_g { g * h } else { h })
}

/// Points of `history` that no other point dominates, deduplicated and sorted.
pub fn brute_front(history: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let dominated = |p: &(f64, f64)| {
        history
            .iter()
            .any(|q| q.0 <= p.0 && q.1 <= p.1 && (q.0 < p.0 || q.1 < p.1))
    };
    let mut out: Vec<(f64, f64)> = history.iter().filter(|p| !dominated(p)).copied().collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    out
}
