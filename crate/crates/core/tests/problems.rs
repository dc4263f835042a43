use coevo::problems::program::DEFAULT_CLAMP;
use coevo::problems::{decode_bitcount, decode_precision, render_blocks, repair_allocation, run_program, Instruction};
use proptest::prelude::*;

fn to_bits(mut v: u64, n: usize) -> Vec<bool> {
    let mut out = vec![false; n];
    for i in (0..n).rev() {
        out[i] = v & 1 == 1;
        v >>= 1;
    }
    out
}

fn allocation() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(2i64..=60, 4).prop_map(|mut a| {
        repair_allocation(&mut a, 120);
        a
    })
}

proptest! {
    #[test]
    fn repaired_allocations_satisfy_the_invariants(raw in prop::collection::vec(-10i64..200, 4)) {
        let mut a = raw;
        repair_allocation(&mut a, 120);
        prop_assert!(a.iter().all(|&n| n >= 2));
        prop_assert!(a.iter().sum::<i64>() <= 120);
    }

    #[test]
    fn decoded_coefficients_stay_in_range(bits in prop::collection::vec(any::<bool>(), 120), alloc in allocation(), c in 0.5..100.0f64) {
        for v in decode_bitcount(&bits, &alloc, c).unwrap() {
            prop_assert!((-c..c).contains(&v), "{v} outside [-{c}, {c})");
        }
    }

    #[test]
    fn decoding_is_monotone_in_the_field_value(n in 2usize..=30, u in 0u64..(1 << 30), c in 0.5..100.0f64) {
        let top = 1u64 << n;
        let u = u % (top - 1);
        let field = |v: u64| {
            let mut bits = to_bits(v, n);
            bits.resize(120, false);
            decode_bitcount(&bits, &[n as i64, 2, 2, 2], c).unwrap()[0]
        };
        prop_assert!(field(u) < field(u + 1));
    }

    #[test]
    fn eight_digit_values_round_trip(k in prop::collection::vec(0u64..=100_000_000, 1..50)) {
        let coeffs: Vec<f64> = k.iter().map(|&v| v as f64 / 1e8).collect();
        prop_assert_eq!(decode_precision(&coeffs, &vec![8; coeffs.len()]), coeffs);
    }

    #[test]
    fn program_outputs_are_finite_and_clamped(
        ops in prop::collection::vec(1i64..=5, 10),
        imap in prop::collection::vec(0i64..12, 5),
        v in -1e7..1e7f64,
    ) {
        let y = run_program(&ops, &imap, &Instruction::POOL, v, DEFAULT_CLAMP);
        prop_assert!(y.is_finite());
        prop_assert!(y.abs() <= DEFAULT_CLAMP);
    }

    #[test]
    fn rendering_is_pure(
        blocks in prop::collection::vec((0i64..64, 1i64..10, 0i64..=0xFF_FFFF), 0..12),
    ) {
        let starts: Vec<i64> = blocks.iter().map(|b| b.0).collect();
        let pairs: Vec<(i64, i64)> = blocks.iter().map(|b| (b.1, b.2)).collect();
        let a = render_blocks(&starts, &pairs, (8, 8), [1, 2, 3]);
        let b = render_blocks(&starts, &pairs, (8, 8), [1, 2, 3]);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.pixels.len(), 64);
    }
}
