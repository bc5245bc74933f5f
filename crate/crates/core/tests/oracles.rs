//! Library results checked against small independent implementations.

use extquot::numtheory::{
    divisor_sigma, divisors, gcd_many, totient, two_adic_norm_less, two_adic_valuation,
    unimodular_completion,
};
use extquot::partitions::{partition_count, partitions_pairs};
use extquot::topology::{betti_from_catalog, betti_table};
use extquot::{
    betti, bundle_orientable_k1, canonical_singularity, decompose_complex, decompose_real,
    ktheory_ranks, singularity_weights, CyclicSingularity, Partition, Partitions,
};
use proptest::prelude::*;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All partitions of `n` as descending part lists, in reverse lexicographic order.
fn naive_partitions(n: u64, max: u64) -> Vec<Vec<u64>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in naive_partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn descending(mu: &Partition) -> Vec<u64> {
    let mut p = mu.parts();
    p.sort_unstable_by(|a, b| b.cmp(a));
    p
}

fn binomial_row(b: usize) -> Vec<u128> {
    let mut row = vec![1u128];
    for _ in 0..b {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row
}

fn naive_betti(n: u64, k: u64) -> Vec<u128> {
    let mut ranks = Vec::new();
    for parts in naive_partitions(n, n) {
        let g = parts.iter().copied().fold(0, gcd);
        let mut distinct = parts.clone();
        distinct.dedup();
        let h = gcd(g, k);
        let y: u128 = (0..h)
            .map(|e| u128::from(gcd(g / (h / gcd(h, e)), n / k)))
            .sum();
        for (j, c) in binomial_row(distinct.len() - 1).into_iter().enumerate() {
            if ranks.len() <= j {
                ranks.resize(j + 1, 0);
            }
            ranks[j] += y * c;
        }
    }
    ranks
}

#[test]
fn partition_stream_matches_naive_order() {
    for n in 0..=20 {
        let streamed: Vec<Vec<u64>> = Partitions::new(n).map(|mu| descending(&mu)).collect();
        assert_eq!(streamed, naive_partitions(n, n), "n = {n}");
    }
}

#[test]
fn partition_counts_match_enumeration() {
    for n in 0..=30 {
        assert_eq!(
            partition_count(n),
            naive_partitions(n, n).len() as u128,
            "n = {n}"
        );
    }
}

#[test]
fn betti_matches_naive_fold() {
    for n in 1..=22 {
        for k in divisors(n).unwrap() {
            assert_eq!(
                betti(n, k).unwrap().ranks,
                naive_betti(n, k),
                "n = {n}, k = {k}"
            );
        }
    }
}

#[test]
fn catalogs_give_the_same_betti_numbers() {
    for n in 1..=18 {
        for k in divisors(n).unwrap() {
            let streamed = betti(n, k).unwrap();
            assert_eq!(
                betti_from_catalog(&decompose_complex(n, k).unwrap()),
                streamed
            );
            assert_eq!(betti_from_catalog(&decompose_real(n, k).unwrap()), streamed);
        }
    }
}

#[test]
fn square_free_betti_is_independent_of_k() {
    for n in [6u64, 10, 14, 15, 21, 30] {
        let base = betti(n, 1).unwrap().ranks;
        for k in divisors(n).unwrap() {
            assert_eq!(betti(n, k).unwrap().ranks, base, "n = {n}, k = {k}");
        }
    }
}

#[test]
fn ktheory_splits_betti_by_parity() {
    for n in 1..=20 {
        for k in divisors(n).unwrap() {
            let ranks = betti(n, k).unwrap().ranks;
            let even: u128 = ranks.iter().step_by(2).sum();
            let odd: u128 = ranks.iter().skip(1).step_by(2).sum();
            let kt = ktheory_ranks(n, k).unwrap();
            assert_eq!((kt.k0, kt.k1), (even, odd));
        }
    }
}

#[test]
fn empty_table_has_only_a_header() {
    let t = betti_table(1, 1, 0, false).unwrap();
    assert!(t.rows.is_empty());
}

#[test]
fn number_theory_against_naive_definitions() {
    for n in 1..=500u64 {
        let phi = (1..=n).filter(|&i| gcd(i, n) == 1).count() as u64;
        assert_eq!(totient(n).unwrap(), phi);
        let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        assert_eq!(divisors(n).unwrap(), divs);
        assert_eq!(
            divisor_sigma(n).unwrap(),
            divs.iter().map(|&d| u128::from(d)).sum::<u128>()
        );
        assert_eq!(two_adic_valuation(n).unwrap(), n.trailing_zeros());
        if divs.len() == 2 {
            assert_eq!(divisor_sigma(n).unwrap(), u128::from(n) + 1);
        }
    }
}

#[test]
fn two_colour_partition_convolution() {
    for r in 0..=25u64 {
        let conv: u128 = (0..=r)
            .map(|s| partition_count(s) * partition_count(r - s))
            .sum();
        assert_eq!(partitions_pairs(r), conv);
    }
}

/// Weights read off the definition: `l mod d` repeated `p_l` times.
fn naive_weights(parts: &[u64], d: u64) -> Vec<u64> {
    let mut counts: Vec<(u64, u64)> = Vec::new();
    for &p in parts {
        match counts.iter_mut().find(|(q, _)| *q == p) {
            Some(entry) => entry.1 += 1,
            None => counts.push((p, 1)),
        }
    }
    let max_m = counts.iter().map(|&(_, m)| m).max().unwrap_or(0);
    let mut w = Vec::new();
    for l in 1..max_m {
        let p_l = counts.iter().filter(|&&(_, m)| m > l).count();
        w.extend(std::iter::repeat_n(l % d.max(1), p_l));
    }
    w
}

fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * cofactor_det(&minor)
        })
        .sum()
}

fn parts_strategy() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..=9, 1..=12)
}

proptest! {
    #[test]
    fn invariants_match_parts(parts in parts_strategy()) {
        let mu = Partition::from_parts(&parts).unwrap();
        let inv = mu.invariants();
        let mut distinct = parts.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let mults: Vec<u64> = distinct.iter().map(|d| parts.iter().filter(|&p| p == d).count() as u64).collect();
        prop_assert_eq!(inv.g, parts.iter().copied().fold(0, gcd));
        prop_assert_eq!(inv.m, mults.iter().copied().fold(0, gcd));
        prop_assert_eq!(inv.b, distinct.len() as u64);
        prop_assert_eq!(inv.c, parts.len() as u64);
        let max_m = *mults.iter().max().unwrap();
        let p: Vec<u64> = (1..max_m).map(|i| mults.iter().filter(|&&m| m > i).count() as u64).collect();
        prop_assert_eq!(inv.p, p);
        prop_assert_eq!(mu.n(), parts.iter().sum::<u64>());
    }

    #[test]
    fn partition_text_round_trips(parts in parts_strategy()) {
        let mu = Partition::from_parts(&parts).unwrap();
        let back: Partition = mu.to_string().parse().unwrap();
        prop_assert_eq!(&back, &mu);
        let runs: Vec<String> = mu.runs().iter().map(|(j, m)| format!("{j}^{m}")).collect();
        let from_runs: Partition = runs.join(",").parse().unwrap();
        prop_assert_eq!(from_runs, mu);
    }

    #[test]
    fn singularity_weights_follow_definition(parts in parts_strategy(), d in 1u64..=6) {
        let mu = Partition::from_parts(&parts).unwrap();
        let s = singularity_weights(&mu, d);
        let inv = mu.invariants();
        prop_assert_eq!(s.ambient_dim, inv.c - inv.b);
        prop_assert_eq!(s.group_order, d);
        prop_assert_eq!(s.weights, naive_weights(&parts, d));
    }

    #[test]
    fn canonical_form_is_a_class_invariant(
        d in 1u64..=12,
        weights in prop::collection::vec(0u64..12, 0..=5),
        unit_seed in 1u64..12,
        rotate in 0usize..5,
    ) {
        let weights: Vec<u64> = weights.into_iter().map(|w| w % d).collect();
        let s = CyclicSingularity { ambient_dim: weights.len() as u64, group_order: d, weights: weights.clone() };
        let unit = (unit_seed..unit_seed + d).find(|u| gcd(*u, d) == 1).unwrap_or(1);
        let mut moved: Vec<u64> = weights.iter().map(|w| w * unit % d).collect();
        if !moved.is_empty() {
            let r = rotate % moved.len();
            moved.rotate_left(r);
        }
        let t = CyclicSingularity { ambient_dim: s.ambient_dim, group_order: d, weights: moved };
        let cs = canonical_singularity(&s);
        prop_assert_eq!(&cs, &canonical_singularity(&t));
        prop_assert_eq!(&canonical_singularity(&cs), &cs);
        prop_assert!(cs.group_order <= d && d % cs.group_order == 0);
    }

    #[test]
    fn completion_is_unimodular(v in prop::collection::vec(-60i64..=60, 2..=6)) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let m = unimodular_completion(&v).unwrap();
        let g = i128::from(gcd_many(&v.iter().map(|x| x.unsigned_abs()).collect::<Vec<_>>()).unwrap());
        prop_assert_eq!(cofactor_det(&m.rows()), 1);
        prop_assert_eq!(m.determinant(), 1);
        prop_assert_eq!(m.column(0), v.iter().map(|&x| i128::from(x) / g).collect::<Vec<_>>());
    }

    #[test]
    fn gcd_is_periodic(a in 1u64..500, s in 0u64..500) {
        prop_assert_eq!(gcd_many(&[a, s + a]).unwrap(), gcd_many(&[a, s]).unwrap());
    }

    #[test]
    fn two_adic_comparison(c in 1u64..1000, d in 1u64..1000) {
        prop_assert_eq!(two_adic_norm_less(c, d).unwrap(), c.trailing_zeros() > d.trailing_zeros());
    }
}

#[test]
fn real_components_against_permutation_signs() {
    for n in 1..=16 {
        for k in divisors(n).unwrap() {
            for r in decompose_real(n, k).unwrap().entries {
                let d = r.cyclic_order;
                // the generator acts on each fibre simplex as m_j / d disjoint d-cycles
                let transpositions: u64 = r
                    .partition
                    .runs()
                    .iter()
                    .map(|&(_, m)| (m / d) * (d - 1))
                    .sum();
                assert_eq!(
                    r.action_orientation_preserving,
                    transpositions.is_multiple_of(2),
                    "{} k={k}",
                    r.partition
                );
                for (&(_, m), (&dim, &joins)) in r
                    .partition
                    .runs()
                    .iter()
                    .zip(r.fiber_simplex_dims.iter().zip(&r.join_counts))
                {
                    assert_eq!(dim, m - 1);
                    assert_eq!(joins * d, m);
                }
            }
        }
    }
}

#[test]
fn orientability_against_mod_two_rank() {
    for n in 1..=20 {
        for mu in Partitions::new(n) {
            let g = mu.gcd_parts();
            let a: Vec<u64> = mu.runs().iter().map(|&(j, _)| (j / g) % 2).collect();
            let b: Vec<u64> = mu.runs().iter().map(|&(_, m)| (m - 1) % 2).collect();
            // rank two over Z/2 means both nonzero and distinct
            let independent = a.contains(&1) && b.contains(&1) && a != b;
            assert_eq!(bundle_orientable_k1(&mu), !independent, "{mu}");
        }
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            (
                decompose_complex(24, 4).unwrap().to_json().to_string(),
                decompose_real(18, 3).unwrap().to_json().to_string(),
                betti(36, 6).unwrap(),
            )
        })
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}
