//! Components of the compact extended quotient `T_k//W`: polysimplex bundles
//! `E_{mu,omega}` over a `(b-1)`-torus with a cyclic action on the fibres.

use num_integer::Integer;
use serde_json::Value;

use crate::complex::{
    base_json, collect_over_partitions, enumerate_omegas, singularity_weights, CyclicSingularity,
    Form, OmegaLabel, QuotientCatalog, Stratum,
};
use crate::error::{check_divides, Error, Result};
use crate::numtheory::two_adic_norm_less;
use crate::partitions::Partition;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealComponent {
    pub partition: Partition,
    pub omega: OmegaLabel,
    pub base_torus_dim: u64,
    /// `m_j - 1` for each distinct part `j`, parts ascending.
    pub fiber_simplex_dims: Vec<u64>,
    /// `d = gcd(m, k/|omega|)`
    pub cyclic_order: u64,
    pub multiplicity: u64,
    /// `m_j / d`: each fibre simplex is a join of this many `(d-1)`-simplices
    /// whose vertices the generator permutes cyclically.
    pub join_counts: Vec<u64>,
    pub action_orientation_preserving: bool,
    /// Orientability of `E_{mu,1}` itself; only defined when `k = 1`.
    pub bundle_orientable: Option<bool>,
    singularity: CyclicSingularity,
}

impl Stratum for RealComponent {
    const FORM: Form = Form::Real;

    fn partition(&self) -> &Partition {
        &self.partition
    }
    fn omega(&self) -> OmegaLabel {
        self.omega
    }
    fn torus_dim(&self) -> u64 {
        self.base_torus_dim
    }
    fn multiplicity(&self) -> u64 {
        self.multiplicity
    }
    fn cyclic_order(&self) -> u64 {
        self.cyclic_order
    }
    fn singularity(&self) -> &CyclicSingularity {
        &self.singularity
    }

    /// `E(T^t; Delta^a x Delta^b)/C_d`, dropping zero-dimensional simplices.
    fn variety(&self) -> String {
        let simplices: Vec<String> = self
            .fiber_simplex_dims
            .iter()
            .filter(|&&d| d > 0)
            .map(|d| format!("Delta^{d}"))
            .collect();
        let fiber = if simplices.is_empty() {
            "Delta^0".to_string()
        } else {
            simplices.join(" x ")
        };
        let mut s = format!("E(T^{}; {fiber})", self.base_torus_dim);
        if self.cyclic_order > 1 {
            s.push_str(&format!("/C_{}", self.cyclic_order));
        }
        s
    }

    fn json_entry(&self) -> Value {
        let mut v = base_json(self);
        let obj = v.as_object_mut().expect("entry is an object");
        obj.insert(
            "fiber_simplex_dims".into(),
            self.fiber_simplex_dims.clone().into(),
        );
        obj.insert("join_counts".into(), self.join_counts.clone().into());
        obj.insert(
            "action_orientation_preserving".into(),
            self.action_orientation_preserving.into(),
        );
        if let Some(o) = self.bundle_orientable {
            obj.insert("bundle_orientable".into(), o.into());
        }
        v
    }
}

/// The stratum of `T_k//W` labelled by `(mu, omega)`.
pub fn real_component(mu: &Partition, omega: OmegaLabel, n: u64, k: u64) -> Result<RealComponent> {
    check_divides(n, k)?;
    let g = mu.gcd_parts();
    if !k.is_multiple_of(omega.order) || !g.is_multiple_of(omega.order) {
        return Err(Error::domain(format!(
            "omega of order {} is not admissible for {mu} with k = {k}",
            omega.order
        )));
    }
    let c = mu.part_count();
    let d = mu.gcd_multiplicities().gcd(&(k / omega.order));
    // The cyclic action reverses fibre orientation iff c - c/d is odd.
    let preserving = c % 2 == 1 || two_adic_norm_less(c, d)?;
    Ok(RealComponent {
        partition: mu.clone(),
        omega,
        base_torus_dim: mu.distinct_parts() as u64 - 1,
        fiber_simplex_dims: mu.runs().iter().map(|&(_, m)| m - 1).collect(),
        cyclic_order: d,
        multiplicity: (g / omega.order).gcd(&(n / k)),
        join_counts: mu.runs().iter().map(|&(_, m)| m / d).collect(),
        action_orientation_preserving: preserving,
        bundle_orientable: (k == 1).then(|| bundle_orientable_k1(mu)),
        singularity: singularity_weights(mu, d),
    })
}

/// Whether `E_{mu,1}` is orientable: it is not exactly when
/// `(j_i / g)` and `(m_{j_i} - 1)` are linearly independent over `Z/2`.
///
/// The first vector is never zero mod 2, so dependence means the second is
/// zero or equal to the first.
pub fn bundle_orientable_k1(mu: &Partition) -> bool {
    let g = mu.gcd_parts();
    let reduced: Vec<u64> = mu.runs().iter().map(|&(j, _)| (j / g) % 2).collect();
    let excess: Vec<u64> = mu.runs().iter().map(|&(_, m)| (m - 1) % 2).collect();
    excess.iter().all(|&e| e == 0) || excess == reduced
}

/// The complete catalog of `T_k//W`, in the same order as the complex catalog.
pub fn decompose_real(n: u64, k: u64) -> Result<QuotientCatalog<RealComponent>> {
    check_divides(n, k)?;
    let entries = collect_over_partitions(n, |mu| {
        enumerate_omegas(mu, n, k)?
            .into_iter()
            .map(|w| real_component(mu, w, n, k))
            .collect()
    })?;
    Ok(QuotientCatalog { n, k, entries })
}
