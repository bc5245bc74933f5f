//! Betti numbers, K-theory ranks and Euler characteristics of the extended
//! quotients, plus the Langlands-duality comparison and table emitters.
//!
//! Every component is homotopy equivalent to a torus of dimension `b(mu) - 1`
//! and `mu` contributes `|Y_mu|` of them, so
//! `b_j = sum_mu |Y_mu| * C(b(mu) - 1, j)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{
    canonical_singularity, decompose_complex, y_mu_count, CyclicSingularity, QuotientCatalog,
    Stratum,
};
use crate::error::{check_divides, Result};
use crate::numtheory::{binomial, divisor_sigma};
use crate::partitions::{partitions_pairs, Partitions};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub n: u64,
    pub k: u64,
    /// `b_0, ..., b_D`
    pub ranks: Vec<u128>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KTheoryRanks {
    pub k0: u128,
    pub k1: u128,
}

impl BettiVector {
    /// Betti numbers from the number of components of each torus dimension.
    fn from_torus_counts(n: u64, k: u64, counts: &[u128]) -> Self {
        let top = counts.iter().rposition(|&c| c > 0).unwrap_or(0);
        let ranks = (0..=top as u32)
            .map(|j| {
                counts
                    .iter()
                    .enumerate()
                    .map(|(t, &c)| c * binomial(t as u32, j))
                    .sum()
            })
            .collect();
        BettiVector { n, k, ranks }
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ktheory(&self) -> KTheoryRanks {
        let (mut k0, mut k1) = (0, 0);
        for (j, &r) in self.ranks.iter().enumerate() {
            if j % 2 == 0 {
                k0 += r;
            } else {
                k1 += r;
            }
        }
        KTheoryRanks { k0, k1 }
    }

    pub fn euler_characteristic(&self) -> i128 {
        let k = self.ktheory();
        k.k0 as i128 - k.k1 as i128
    }
}

fn add_counts(mut a: Vec<u128>, b: Vec<u128>) -> Vec<u128> {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Betti numbers of `S_k//W` (equivalently `T_k//W`), streamed over the
/// partitions of `n` without building a catalog.
pub fn betti(n: u64, k: u64) -> Result<BettiVector> {
    check_divides(n, k)?;
    let counts = (1..=n)
        .into_par_iter()
        .map(|largest| -> Result<Vec<u128>> {
            let mut counts = Vec::new();
            for mu in Partitions::with_largest_part(n, largest) {
                let t = mu.distinct_parts() - 1;
                if counts.len() <= t {
                    counts.resize(t + 1, 0);
                }
                counts[t] += y_mu_count(&mu, n, k)?;
            }
            Ok(counts)
        })
        .try_reduce(Vec::new, |a, b| Ok(add_counts(a, b)))?;
    Ok(BettiVector::from_torus_counts(n, k, &counts))
}

/// Betti numbers read off an explicit catalog (complex or real).
pub fn betti_from_catalog<C: Stratum>(catalog: &QuotientCatalog<C>) -> BettiVector {
    let mut counts = Vec::new();
    for e in &catalog.entries {
        let t = e.torus_dim() as usize;
        if counts.len() <= t {
            counts.resize(t + 1, 0);
        }
        counts[t] += u128::from(e.multiplicity());
    }
    BettiVector::from_torus_counts(catalog.n, catalog.k, &counts)
}

/// Ranks of `K^0` and `K^1`: the even and odd Betti sums.
pub fn ktheory_ranks(n: u64, k: u64) -> Result<KTheoryRanks> {
    Ok(betti(n, k)?.ktheory())
}

pub fn euler_characteristic(n: u64, k: u64) -> Result<i128> {
    Ok(betti(n, k)?.euler_characteristic())
}

/// Degree and rank of the top nonzero Betti number of `S//W` (`k = 1`).
///
/// The degree is `floor((sqrt(8n + 1) - 3) / 2)`; the maximal number of distinct
/// parts is one more, and with `r = n - (1 + 2 + ... + (degree + 1))` the rank is
/// `P_2(r)`.
///
/// The count `P_2(r)` assumes every partition in the top stratum has `g = 1`,
/// which holds once two distinct parts fit. In degree zero (`n <= 2`) the top
/// stratum is all of `j^(n/j)` and the rank is `sigma(n)`.
pub fn top_betti(n: u64) -> (u64, u128) {
    assert!(n >= 1, "top_betti needs n >= 1");
    let degree = ((8 * n + 1).isqrt() - 3) / 2;
    if degree == 0 {
        return (0, divisor_sigma(n).expect("n >= 1"));
    }
    let parts = degree + 1;
    let r = n - parts * (parts + 1) / 2;
    (degree, partitions_pairs(r))
}

/// Per-partition comparison between `k` and its dual `n/k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionDuality {
    pub partition: String,
    pub torus_dim: u64,
    pub count: u128,
    pub dual_count: u128,
    /// Multisets of singularities (up to isomorphism, with multiplicity) differ.
    pub singularities_differ: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub n: u64,
    pub k: u64,
    pub dual_k: u64,
    pub betti: Vec<u128>,
    pub dual_betti: Vec<u128>,
    pub betti_equal: bool,
    pub counts_equal: bool,
    pub torus_counts_equal: bool,
    pub partitions: Vec<PartitionDuality>,
}

impl DualityReport {
    pub fn is_consistent(&self) -> bool {
        self.betti_equal && self.counts_equal && self.torus_counts_equal
    }

    pub fn singularity_differences(&self) -> Vec<&str> {
        self.partitions
            .iter()
            .filter(|p| p.singularities_differ)
            .map(|p| p.partition.as_str())
            .collect()
    }
}

type Summary = BTreeMap<String, (Vec<(u64, u128)>, Vec<CyclicSingularity>, u128)>;

fn summarize<C: Stratum>(catalog: &QuotientCatalog<C>) -> Summary {
    let mut out: Summary = BTreeMap::new();
    for e in &catalog.entries {
        let slot = out.entry(e.partition().to_string()).or_default();
        let mult = u128::from(e.multiplicity());
        match slot.0.iter_mut().find(|(t, _)| *t == e.torus_dim()) {
            Some((_, c)) => *c += mult,
            None => slot.0.push((e.torus_dim(), mult)),
        }
        let canon = canonical_singularity(e.singularity());
        slot.1
            .extend(std::iter::repeat_n(canon, e.multiplicity() as usize));
        slot.2 += mult;
    }
    for slot in out.values_mut() {
        slot.0.sort_unstable();
        slot.1.sort_unstable();
    }
    out
}

/// Compares `S_k//W` with `S_{n/k}//W`: Betti numbers, per-partition component
/// counts and torus dimensions must agree; singularity types may not.
pub fn duality_report(n: u64, k: u64) -> Result<DualityReport> {
    check_divides(n, k)?;
    let dual_k = n / k;
    let b = betti(n, k)?;
    let db = betti(n, dual_k)?;
    let here = summarize(&decompose_complex(n, k)?);
    let there = summarize(&decompose_complex(n, dual_k)?);

    let mut partitions = Vec::new();
    let mut counts_equal = true;
    let mut torus_counts_equal = true;
    for mu in Partitions::new(n) {
        let key = mu.to_string();
        let (tc, sing, count) = &here[&key];
        let (dtc, dsing, dcount) = &there[&key];
        let direct = y_mu_count(&mu, n, k)?;
        let dual_direct = y_mu_count(&mu, n, dual_k)?;
        counts_equal &= count == dcount && direct == dual_direct && *count == direct;
        torus_counts_equal &= tc == dtc;
        partitions.push(PartitionDuality {
            partition: key,
            torus_dim: mu.distinct_parts() as u64 - 1,
            count: *count,
            dual_count: *dcount,
            singularities_differ: sing != dsing,
        });
    }
    Ok(DualityReport {
        n,
        k,
        dual_k,
        betti_equal: b.ranks == db.ranks,
        betti: b.ranks,
        dual_betti: db.ranks,
        counts_equal,
        torus_counts_equal,
        partitions,
    })
}

/// A rectangular text table with a header row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 table")
    }

    pub fn to_markdown(&self) -> String {
        let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
        let mut out = line(&self.header);
        out.push_str(&line(&vec!["---".to_string(); self.header.len()]));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }
}

/// Betti table: one row per `n` in `min_n..=max_n` with `k | n`, columns
/// `b_0..b_D`, blank where a degree is absent.
pub fn betti_table(k: u64, min_n: u64, max_n: u64, even_only: bool) -> Result<Table> {
    let ns: Vec<u64> = (min_n.max(1)..=max_n)
        .filter(|n| n % k == 0 && (!even_only || n % 2 == 0))
        .collect();
    let vectors: Vec<BettiVector> = ns.iter().map(|&n| betti(n, k)).collect::<Result<_>>()?;
    let width = vectors.iter().map(|b| b.ranks.len()).max().unwrap_or(1);
    let mut header = vec!["n".to_string()];
    header.extend((0..width).map(|j| format!("b{j}")));
    let rows = vectors
        .iter()
        .map(|b| {
            let mut row = vec![b.n.to_string()];
            row.extend((0..width).map(|j| b.ranks.get(j).map(u128::to_string).unwrap_or_default()));
            row
        })
        .collect();
    Ok(Table { header, rows })
}

/// K-theory table: for each `n`, a `K0` line and a `K1` line with one column per
/// `k = 1..max_n`, blank when `k` does not divide `n`.
pub fn ktheory_table(min_n: u64, max_n: u64) -> Result<Table> {
    let mut header = vec!["n".to_string(), "K".to_string()];
    header.extend((1..=max_n).map(|k| k.to_string()));
    let mut rows = Vec::new();
    for n in min_n.max(1)..=max_n {
        let cells: Vec<Option<KTheoryRanks>> = (1..=max_n)
            .map(|k| {
                if n % k == 0 {
                    ktheory_ranks(n, k).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<_>>()?;
        for (label, pick) in [("K0", 0), ("K1", 1)] {
            let mut row = vec![n.to_string(), label.to_string()];
            row.extend(cells.iter().map(|c| match c {
                Some(r) if pick == 0 => r.k0.to_string(),
                Some(r) => r.k1.to_string(),
                None => String::new(),
            }));
            rows.push(row);
        }
    }
    Ok(Table { header, rows })
}
