//! Components of the complex extended quotient `S_k//W`.
//!
//! For a partition `mu` of `n` and `omega` in `C_h`, `h = gcd(g(mu), k)`, the
//! stratum is `(C*)^{b-1} x A^{c-b}/C_d x X` with `d = gcd(m, k/|omega|)` and
//! `|X| = gcd(g/|omega|, n/k)`. The generator of `C_d` acts with weight `l`
//! on `p_l(mu)` coordinates.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{check_divides, Error, Result};
use crate::numtheory::pillai;
use crate::partitions::{Partition, Partitions};

/// `omega = exp(2 pi i exponent / h)` in the cyclic group `C_h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct OmegaLabel {
    pub h: u64,
    pub exponent: u64,
    /// `|omega| = h / gcd(h, exponent)`
    pub order: u64,
}

impl OmegaLabel {
    pub fn new(h: u64, exponent: u64) -> Self {
        OmegaLabel {
            h,
            exponent,
            order: h / h.gcd(&exponent),
        }
    }
}

/// `A^N / C_d` with `C_d` acting diagonally through the given weights mod `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CyclicSingularity {
    pub ambient_dim: u64,
    pub group_order: u64,
    pub weights: Vec<u64>,
}

impl CyclicSingularity {
    pub fn is_smooth_affine(&self) -> bool {
        canonical_singularity(self).group_order == 1
    }

    pub fn is_isomorphic(&self, other: &CyclicSingularity) -> bool {
        canonical_singularity(self) == canonical_singularity(other)
    }
}

impl fmt::Display for CyclicSingularity {
    /// `A^N` or `A^N/C_d(w1,...,wN)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A^{}", self.ambient_dim)?;
        if self.group_order > 1 {
            let w: Vec<String> = self.weights.iter().map(u64::to_string).collect();
            write!(f, "/C_{}({})", self.group_order, w.join(","))?;
        }
        Ok(())
    }
}

/// Which extended quotient a catalog describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Complex,
    Real,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Complex => "complex",
            Form::Real => "real",
        })
    }
}

/// Common view of a complex or real stratum.
pub trait Stratum: Send + Sync {
    const FORM: Form;

    fn partition(&self) -> &Partition;
    fn omega(&self) -> OmegaLabel;
    fn torus_dim(&self) -> u64;
    /// `|X_{mu,omega}|`
    fn multiplicity(&self) -> u64;
    /// Order `d` of the cyclic group acting on the affine or polysimplex factor.
    fn cyclic_order(&self) -> u64;
    fn singularity(&self) -> &CyclicSingularity;
    /// Human-readable variety string, e.g. `C*^1 x A^2/C_2(1,1)`.
    fn variety(&self) -> String;
    fn json_entry(&self) -> Value;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexComponent {
    pub partition: Partition,
    pub omega: OmegaLabel,
    pub torus_dim: u64,
    pub singularity: CyclicSingularity,
    pub multiplicity: u64,
}

pub(crate) fn base_json<S: Stratum>(s: &S) -> Value {
    let omega = s.omega();
    let sing = s.singularity();
    json!({
        "partition": s.partition().parts(),
        "omega_exponent": omega.exponent,
        "omega_order": omega.order,
        "torus_dim": s.torus_dim(),
        "multiplicity": s.multiplicity(),
        "singularity": {
            "ambient_dim": sing.ambient_dim,
            "group_order": sing.group_order,
            "weights": sing.weights,
        },
    })
}

impl Stratum for ComplexComponent {
    const FORM: Form = Form::Complex;

    fn partition(&self) -> &Partition {
        &self.partition
    }
    fn omega(&self) -> OmegaLabel {
        self.omega
    }
    fn torus_dim(&self) -> u64 {
        self.torus_dim
    }
    fn multiplicity(&self) -> u64 {
        self.multiplicity
    }
    fn cyclic_order(&self) -> u64 {
        self.singularity.group_order
    }
    fn singularity(&self) -> &CyclicSingularity {
        &self.singularity
    }

    fn variety(&self) -> String {
        let torus = (self.torus_dim > 0).then(|| format!("C*^{}", self.torus_dim));
        let affine = (self.singularity.ambient_dim > 0 || torus.is_none())
            .then(|| self.singularity.to_string());
        torus
            .into_iter()
            .chain(affine)
            .collect::<Vec<_>>()
            .join(" x ")
    }

    fn json_entry(&self) -> Value {
        base_json(self)
    }
}

/// The full decomposition for `(n, k)`, ordered by partition stream order and
/// then by `omega` exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientCatalog<C> {
    pub n: u64,
    pub k: u64,
    pub entries: Vec<C>,
}

impl<C: Stratum> QuotientCatalog<C> {
    pub fn form(&self) -> Form {
        C::FORM
    }

    /// Number of connected components, i.e. the sum of all multiplicities.
    pub fn component_count(&self) -> u128 {
        self.entries
            .iter()
            .map(|e| u128::from(e.multiplicity()))
            .sum()
    }

    /// Entries belonging to one partition.
    pub fn for_partition<'a>(&'a self, mu: &'a Partition) -> impl Iterator<Item = &'a C> + 'a {
        self.entries.iter().filter(move |e| e.partition() == mu)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "k": self.k,
            "form": C::FORM,
            "entries": self.entries.iter().map(Stratum::json_entry).collect::<Vec<_>>(),
        })
    }
}

/// The `h = gcd(g(mu), k)` labels `omega`, exponents `0..h`.
pub fn enumerate_omegas(mu: &Partition, n: u64, k: u64) -> Result<Vec<OmegaLabel>> {
    check_divides(n, k)?;
    let h = mu.gcd_parts().gcd(&k);
    Ok((0..h).map(|e| OmegaLabel::new(h, e)).collect())
}

/// The diagonal `C_d` action on `A^{c-b}`: weight `l mod d` on `p_l(mu)`
/// coordinates, grouped by `l`.
pub fn singularity_weights(mu: &Partition, d: u64) -> CyclicSingularity {
    assert!(d >= 1, "cyclic group order must be positive");
    let inv = mu.invariants();
    let weights: Vec<u64> = inv
        .p
        .iter()
        .zip(1u64..)
        .flat_map(|(&count, l)| std::iter::repeat_n(l % d, count as usize))
        .collect();
    CyclicSingularity {
        ambient_dim: inv.c - inv.b,
        group_order: d,
        weights,
    }
}

/// The stratum of `S_k//W` labelled by `(mu, omega)`.
pub fn complex_component(
    mu: &Partition,
    omega: OmegaLabel,
    n: u64,
    k: u64,
) -> Result<ComplexComponent> {
    check_divides(n, k)?;
    if !k.is_multiple_of(omega.order) || !mu.gcd_parts().is_multiple_of(omega.order) {
        return Err(Error::domain(format!(
            "omega of order {} is not admissible for {mu} with k = {k}",
            omega.order
        )));
    }
    let g = mu.gcd_parts();
    let d = mu.gcd_multiplicities().gcd(&(k / omega.order));
    Ok(ComplexComponent {
        partition: mu.clone(),
        omega,
        torus_dim: mu.distinct_parts() as u64 - 1,
        singularity: singularity_weights(mu, d),
        multiplicity: (g / omega.order).gcd(&(n / k)),
    })
}

/// `|Y_mu| = (g/a) * pillai(a)` with `a = gcd(g, n/g, k, n/k)`.
pub fn y_mu_count(mu: &Partition, n: u64, k: u64) -> Result<u128> {
    check_divides(n, k)?;
    let g = mu.gcd_parts();
    let a = g.gcd(&(n / g)).gcd(&k).gcd(&(n / k));
    Ok(u128::from(g / a) * pillai(a)?)
}

/// `|Y_mu|` as the direct sum of `gcd(g/|omega|, n/k)` over all labels.
pub fn y_mu_count_direct(mu: &Partition, n: u64, k: u64) -> Result<u128> {
    let g = mu.gcd_parts();
    Ok(enumerate_omegas(mu, n, k)?
        .into_iter()
        .map(|w| u128::from((g / w.order).gcd(&(n / k))))
        .sum())
}

fn components_of(mu: &Partition, n: u64, k: u64) -> Result<Vec<ComplexComponent>> {
    enumerate_omegas(mu, n, k)?
        .into_iter()
        .map(|w| complex_component(mu, w, n, k))
        .collect()
}

/// Runs `per_partition` over every partition of `n`, chunked by largest part
/// across the rayon pool, and concatenates in stream order.
pub(crate) fn collect_over_partitions<T, F>(n: u64, per_partition: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Partition) -> Result<Vec<T>> + Sync,
{
    let largest_parts: Vec<u64> = (1..=n).rev().collect();
    let chunks: Vec<Result<Vec<T>>> = largest_parts
        .into_par_iter()
        .map(|largest| {
            let mut out = Vec::new();
            for mu in Partitions::with_largest_part(n, largest) {
                out.extend(per_partition(&mu)?);
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for chunk in chunks {
        all.extend(chunk?);
    }
    Ok(all)
}

/// The complete catalog of `S_k//W`.
pub fn decompose_complex(n: u64, k: u64) -> Result<QuotientCatalog<ComplexComponent>> {
    check_divides(n, k)?;
    let entries = collect_over_partitions(n, |mu| components_of(mu, n, k))?;
    Ok(QuotientCatalog { n, k, entries })
}

/// Restricts a diagonal action to the faithful quotient of the group.
fn make_faithful(d: u64, weights: &[u64]) -> (u64, Vec<u64>) {
    let eff = weights
        .iter()
        .fold(1u64, |acc, &w| acc.lcm(&(d / d.gcd(&w))));
    let reduced = weights
        .iter()
        .map(|&w| ((u128::from(w) * u128::from(eff) / u128::from(d)) % u128::from(eff)) as u64)
        .collect();
    (eff, reduced)
}

/// Normal form of a cyclic quotient singularity up to isomorphism.
///
/// The action is first made faithful, then the subgroup generated by
/// pseudo-reflections (elements moving a single coordinate) is divided out,
/// which replaces `z_i` by `z_i^{r_i}` and leaves a small action. Small diagonal
/// cyclic actions are classified by their weight multiset up to a unit of
/// `Z/d`; the representative is the lexicographically least sorted multiset.
pub fn canonical_singularity(s: &CyclicSingularity) -> CyclicSingularity {
    let (mut d, mut w) = make_faithful(s.group_order.max(1), &s.weights);
    loop {
        let orders: Vec<u64> = w.iter().map(|&x| d / d.gcd(&x)).collect();
        let mut changed = false;
        for (i, wi) in w.iter_mut().enumerate() {
            let others = orders
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(1u64, |acc, (_, &o)| acc.lcm(&o));
            let r = d / others;
            if r > 1 {
                *wi = ((u128::from(*wi) * u128::from(r)) % u128::from(d)) as u64;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        (d, w) = make_faithful(d, &w);
    }
    let best = (1..=d)
        .filter(|u| u.gcd(&d) == 1)
        .map(|u| {
            let mut scaled: Vec<u64> = w
                .iter()
                .map(|&x| ((u128::from(x) * u128::from(u)) % u128::from(d)) as u64)
                .collect();
            scaled.sort_unstable();
            scaled
        })
        .min()
        .unwrap_or_default();
    CyclicSingularity {
        ambient_dim: s.ambient_dim,
        group_order: d,
        weights: best,
    }
}
