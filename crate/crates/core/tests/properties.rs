use std::sync::OnceLock;

use proptest::prelude::*;

use faberhurwitz::combinat::{aut_size, partitions_of, q, qf, r_fab, Partition};
use faberhurwitz::degeneration::{faber_hurwitz, one_part_closed};
use faberhurwitz::faber::psiphi::{delta, invert_delta, y_ring};
use faberhurwitz::faber::solve::solve_default;
use faberhurwitz::faber::{faber_polynomial, string_dilaton, SymbolTable};
use faberhurwitz::hurwitz::strategy;
use faberhurwitz::pseries::MultiSeries;

fn solved(g: u32) -> &'static SymbolTable {
    static T: [OnceLock<SymbolTable>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    T[g as usize - 1].get_or_init(|| solve_default(g, 3).expect("solve").1.table)
}

fn series(m: usize, terms: &[(Vec<i32>, i64, i64)]) -> MultiSeries {
    let r = y_ring(m);
    MultiSeries::from_terms(&r, terms.iter().map(|(e, n, d)| (e.clone(), qf(*n, *d))))
}

fn term(m: usize) -> impl Strategy<Value = (Vec<i32>, i64, i64)> {
    (prop::collection::vec(1..=6i32, m), -20..=20i64, 1..=9i64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_inverse_recovers_positive_series(m in 1usize..=3, k in 2i32..=3, seed in prop::collection::vec(term(3), 1..6)) {
        let terms: Vec<_> = seed.into_iter().map(|(e, n, d)| (e[..m].to_vec(), n, d)).collect();
        let a = series(m, &terms);
        prop_assert_eq!(invert_delta(&delta(&a, k), k).unwrap(), a);
    }

    #[test]
    fn delta_is_linear(k in 2i32..=3, s in prop::collection::vec(term(2), 1..4), t in prop::collection::vec(term(2), 1..4), c in -5i64..=5) {
        let (a, b) = (series(2, &s), series(2, &t));
        let lhs = delta(&a.add(&b.scale(&q(c))), k);
        let rhs = delta(&a, k).add(&delta(&b, k).scale(&q(c)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn partition_normalizes(parts in prop::collection::vec(1u32..=7, 0..7)) {
        let p = Partition::new(parts.clone()).unwrap();
        prop_assert!(p.parts().windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(p.size(), parts.iter().sum::<u32>());
        prop_assert_eq!(p.len(), parts.len());
        if !parts.is_empty() {
            prop_assert_eq!(r_fab(&p), p.size() as i64 + p.len() as i64 - 1);
        }
        let mut shuffled = parts.clone();
        shuffled.reverse();
        prop_assert_eq!(Partition::new(shuffled).unwrap(), p);
    }

    #[test]
    fn zero_part_is_rejected(mut parts in prop::collection::vec(1u32..=5, 0..5), at in 0usize..5) {
        let at = at.min(parts.len());
        parts.insert(at, 0);
        prop_assert!(Partition::new(parts).is_err());
    }

    #[test]
    fn closed_hurwitz_matches_monodromy(n in 1u32..=5, pick in 0usize..16) {
        let all = partitions_of(n);
        let a = &all[pick % all.len()];
        let closed = strategy("closed").unwrap().single(a).unwrap();
        let mono = strategy("monodromy").unwrap().single(a).unwrap();
        prop_assert_eq!(closed, mono);
    }

    #[test]
    fn faber_polynomial_is_symmetric(g in 1u32..=2, args in prop::collection::vec(1u32..=6, 1..=3), rot in 0usize..3) {
        let t = solved(g);
        let mut b = args.clone();
        let len = b.len();
        b.rotate_left(rot % len);
        prop_assert_eq!(faber_polynomial(g, &args, t).unwrap(), faber_polynomial(g, &b, t).unwrap());
    }
}

#[test]
fn partition_counts() {
    let counts: Vec<usize> = (1..=10).map(|n| partitions_of(n).len()).collect();
    assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    for n in 1..=8 {
        let ps = partitions_of(n);
        assert!(ps.iter().all(|p| p.size() == n));
        let set: std::collections::BTreeSet<_> = ps.iter().collect();
        assert_eq!(set.len(), ps.len());
    }
    assert_eq!(aut_size(&Partition::from_slice(&[2, 1, 1, 1])), 6.into());
}

#[test]
fn one_part_closed_form_agrees() {
    assert!(one_part_closed(0, 3).is_err());
    for g in 1..=3 {
        for d in 1..=5 {
            assert_eq!(faber_hurwitz(g, &Partition::one_part(d)).unwrap(), one_part_closed(g, d).unwrap(), "g={g} d={d}");
        }
    }
}

#[test]
fn solved_tables_obey_string_and_dilaton() {
    for g in 1..=3 {
        let t = solved(g);
        let mut checked = 0;
        for (k, v, _) in t.iter() {
            if let Some(r) = string_dilaton(k, t) {
                assert_eq!(&r.unwrap(), v, "{k}");
                checked += 1;
            }
        }
        assert!(checked > 0, "g={g}");
    }
}
