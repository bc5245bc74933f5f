//! Integer partitions in run-length form, their invariants and counting
//! functions.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// A partition of `n`, stored as `(part, multiplicity)` runs with strictly
/// increasing parts and positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: u64,
    runs: Vec<(u64, u64)>,
}

/// Invariants read off the run-length data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionInvariants {
    /// gcd of the parts
    pub g: u64,
    /// gcd of the multiplicities
    pub m: u64,
    /// number of distinct parts
    pub b: u64,
    /// total number of parts
    pub c: u64,
    /// `p[i - 1]` is the number of distinct parts with multiplicity `> i`, for `i = 1..max(m_j) - 1`
    pub p: Vec<u64>,
}

impl Partition {
    /// The empty partition of zero.
    pub fn empty() -> Self {
        Partition {
            n: 0,
            runs: Vec::new(),
        }
    }

    /// Builds a partition from parts in any order.
    pub fn from_parts(parts: &[u64]) -> Result<Self> {
        let mut sorted = parts.to_vec();
        sorted.sort_unstable();
        let mut runs: Vec<(u64, u64)> = Vec::new();
        for part in sorted {
            match runs.last_mut() {
                Some((j, m)) if *j == part => *m += 1,
                _ => runs.push((part, 1)),
            }
        }
        Self::from_runs(runs)
    }

    /// Builds a partition from `(part, multiplicity)` runs; parts may repeat
    /// across runs and come in any order.
    pub fn from_runs(runs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut merged: Vec<(u64, u64)> = Vec::new();
        let mut all: Vec<(u64, u64)> = runs.into_iter().collect();
        all.sort_unstable();
        let mut n = 0u64;
        for (j, m) in all {
            if j == 0 || m == 0 {
                return Err(Error::InvalidPartition {
                    input: format!("{j}^{m}"),
                    reason: "parts and multiplicities must be positive".into(),
                });
            }
            n = j
                .checked_mul(m)
                .and_then(|jm| n.checked_add(jm))
                .ok_or_else(|| Error::domain("partition size overflows u64"))?;
            match merged.last_mut() {
                Some((pj, pm)) if *pj == j => *pm += m,
                _ => merged.push((j, m)),
            }
        }
        Ok(Partition { n, runs: merged })
    }

    fn from_descending_runs(n: u64, desc: &[(u64, u64)]) -> Self {
        Partition {
            n,
            runs: desc.iter().rev().copied().collect(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(part, multiplicity)` with parts strictly increasing.
    pub fn runs(&self) -> &[(u64, u64)] {
        &self.runs
    }

    /// All parts, ascending, with repetition.
    pub fn parts(&self) -> Vec<u64> {
        self.runs
            .iter()
            .flat_map(|&(j, m)| std::iter::repeat_n(j, m as usize))
            .collect()
    }

    pub fn distinct_parts(&self) -> usize {
        self.runs.len()
    }

    pub fn part_count(&self) -> u64 {
        self.runs.iter().map(|&(_, m)| m).sum()
    }

    pub fn gcd_parts(&self) -> u64 {
        self.runs.iter().fold(0, |acc, &(j, _)| acc.gcd(&j))
    }

    pub fn gcd_multiplicities(&self) -> u64 {
        self.runs.iter().fold(0, |acc, &(_, m)| acc.gcd(&m))
    }

    pub fn invariants(&self) -> PartitionInvariants {
        let max_m = self.runs.iter().map(|&(_, m)| m).max().unwrap_or(0);
        let p = (1..max_m)
            .map(|i| self.runs.iter().filter(|&&(_, m)| m > i).count() as u64)
            .collect();
        PartitionInvariants {
            g: self.gcd_parts(),
            m: self.gcd_multiplicities(),
            b: self.runs.len() as u64,
            c: self.part_count(),
            p,
        }
    }
}

impl fmt::Display for Partition {
    /// Ascending parts joined by `+`, e.g. `1+1+2+2`; the empty partition prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.parts().iter().map(u64::to_string).collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `1+1+2+2`, `1,1,2,2` and run-length `1^2,2^2` (forms may be mixed).
    fn from_str(s: &str) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidPartition {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(invalid("empty partition"));
        }
        let mut runs = Vec::new();
        for token in trimmed.split(['+', ',']) {
            let token = token.trim();
            let (part, mult) = match token.split_once('^') {
                Some((j, m)) => (j.trim(), m.trim()),
                None => (token, "1"),
            };
            let j: u64 = part
                .parse()
                .map_err(|_| invalid("parts must be positive integers"))?;
            let m: u64 = mult
                .parse()
                .map_err(|_| invalid("multiplicities must be positive integers"))?;
            if j == 0 || m == 0 {
                return Err(invalid("parts and multiplicities must be positive"));
            }
            runs.push((j, m));
        }
        Partition::from_runs(runs).map_err(|e| match e {
            Error::InvalidPartition { reason, .. } => invalid(&reason),
            other => other,
        })
    }
}

/// Streams the partitions of `n` in decreasing lexicographic order of the
/// descending part list: `n`, `(n-1)+1`, ..., `1+...+1`.
///
/// The working state is the run-length list of the current partition with
/// parts descending, so each step touches only the last two runs.
#[derive(Debug, Clone)]
pub struct Partitions {
    n: u64,
    desc: Vec<(u64, u64)>,
    largest: Option<u64>,
    started: bool,
    done: bool,
}

impl Partitions {
    pub fn new(n: u64) -> Self {
        let desc = if n == 0 { Vec::new() } else { vec![(n, 1)] };
        Partitions {
            n,
            desc,
            largest: None,
            started: false,
            done: false,
        }
    }

    /// Only the partitions whose largest part is exactly `largest`; used to
    /// split the stream into independent chunks.
    pub fn with_largest_part(n: u64, largest: u64) -> Self {
        if largest == 0 || largest > n {
            return Partitions {
                n,
                desc: Vec::new(),
                largest: Some(largest),
                started: true,
                done: true,
            };
        }
        let mut desc = vec![(largest, 1)];
        push_greedy(&mut desc, n - largest, largest);
        Partitions {
            n,
            desc,
            largest: Some(largest),
            started: false,
            done: false,
        }
    }

    fn advance(&mut self) -> bool {
        let mut ones = 0;
        if let Some(&(1, m)) = self.desc.last() {
            ones = m;
            self.desc.pop();
        }
        let Some(last) = self.desc.last_mut() else {
            return false;
        };
        let part = last.0;
        last.1 -= 1;
        if last.1 == 0 {
            self.desc.pop();
        }
        push_greedy(&mut self.desc, ones + part, part - 1);
        match self.largest {
            Some(l) => self.desc.first().is_some_and(|&(j, _)| j == l),
            None => true,
        }
    }
}

/// Appends the lexicographically largest partition of `amount` into parts `<= cap`.
fn push_greedy(desc: &mut Vec<(u64, u64)>, amount: u64, cap: u64) {
    if amount == 0 {
        return;
    }
    let q = amount / cap;
    let r = amount % cap;
    match desc.last_mut() {
        Some(last) if last.0 == cap => last.1 += q,
        _ => desc.push((cap, q)),
    }
    if r > 0 {
        desc.push((r, 1));
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        if self.started {
            if !self.advance() {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
        }
        Some(Partition::from_descending_runs(self.n, &self.desc))
    }
}

/// Every partition of `n`, in the canonical stream order.
pub fn enumerate_partitions(n: u64) -> Partitions {
    Partitions::new(n)
}

/// `P(0), ..., P(n)` by Euler's pentagonal-number recurrence.
pub fn partition_counts(n: usize) -> Vec<u128> {
    let mut p = vec![0u128; n + 1];
    p[0] = 1;
    for i in 1..=n {
        let mut acc: i128 = 0;
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > i {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[i - g1] as i128;
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= i {
                acc += sign * p[i - g2] as i128;
            }
        }
        p[i] = u128::try_from(acc).expect("partition count is positive");
    }
    p
}

/// `P(n)`, the number of partitions of `n`.
pub fn partition_count(n: u64) -> u128 {
    partition_counts(n as usize)[n as usize]
}

/// `P_2(r) = sum_{s=0}^{r} P(s) P(r - s)`, partitions of `r` into parts of two kinds.
pub fn partitions_pairs(r: u64) -> u128 {
    let p = partition_counts(r as usize);
    (0..=r as usize).map(|s| p[s] * p[r as usize - s]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_order_for_six() {
        let got: Vec<String> = enumerate_partitions(6).map(|p| p.to_string()).collect();
        assert_eq!(
            got,
            vec![
                "6",
                "1+5",
                "2+4",
                "1+1+4",
                "3+3",
                "1+2+3",
                "1+1+1+3",
                "2+2+2",
                "1+1+2+2",
                "1+1+1+1+2",
                "1+1+1+1+1+1"
            ]
        );
        assert_eq!(enumerate_partitions(1).count(), 1);
    }

    #[test]
    fn zero_yields_empty_partition() {
        let all: Vec<Partition> = enumerate_partitions(0).collect();
        assert_eq!(all, vec![Partition::empty()]);
    }

    #[test]
    fn chunks_by_largest_part_cover_stream() {
        for n in 1..=20u64 {
            let whole: Vec<Partition> = enumerate_partitions(n).collect();
            let chunked: Vec<Partition> = (1..=n)
                .rev()
                .flat_map(|l| Partitions::with_largest_part(n, l))
                .collect();
            assert_eq!(whole, chunked, "n = {n}");
        }
        assert_eq!(Partitions::with_largest_part(5, 6).count(), 0);
    }

    #[test]
    fn invariants_examples() {
        let mu: Partition = "2+2+2+2+4+4".parse().unwrap();
        assert_eq!(
            mu.invariants(),
            PartitionInvariants {
                g: 2,
                m: 2,
                b: 2,
                c: 6,
                p: vec![2, 1, 1]
            }
        );
        let mu: Partition = "6".parse().unwrap();
        assert_eq!(
            mu.invariants(),
            PartitionInvariants {
                g: 6,
                m: 1,
                b: 1,
                c: 1,
                p: vec![]
            }
        );
        let mu: Partition = "1^6".parse().unwrap();
        assert_eq!(
            mu.invariants(),
            PartitionInvariants {
                g: 1,
                m: 6,
                b: 1,
                c: 6,
                p: vec![1, 1, 1, 1, 1]
            }
        );
    }

    #[test]
    fn parse_forms() {
        let a: Partition = "1+1+2+2".parse().unwrap();
        let b: Partition = "2^2,1^2".parse().unwrap();
        let c: Partition = "2,1,2,1".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.n(), 6);
        assert_eq!(a.runs(), &[(1, 2), (2, 2)]);
        assert!("1+x".parse::<Partition>().is_err());
        assert!("0+3".parse::<Partition>().is_err());
        assert!("2^0".parse::<Partition>().is_err());
        assert!("".parse::<Partition>().is_err());
    }

    #[test]
    fn counting() {
        assert_eq!(partition_count(0), 1);
        assert_eq!(partition_count(6), 11);
        assert_eq!(partition_count(45), 89134);
        assert_eq!(partition_count(60), 966467);
        assert_eq!(partitions_pairs(0), 1);
        assert_eq!(partitions_pairs(2), 5);
    }
}
