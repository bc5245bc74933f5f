//! Explicit decomposition of the extended quotients `S_k//W` and `T_k//W` of a
//! maximal torus of `SL_n(C)/C_k` (complex case) or `SU_n(C)/C_k` (compact real
//! case) by the Weyl group `W = S_n`.
//!
//! Every stratum is indexed by a partition `mu` of `n` together with a root of
//! unity `omega`. The complex strata are products of an algebraic torus, a cyclic
//! quotient singularity and a finite set; the real strata are polysimplex bundles
//! over a compact torus. The [`topology`] module folds these into Betti numbers,
//! K-theory ranks and Euler characteristics, and [`reference`] checks everything
//! against the published tables shipped in `fixtures/`.

pub mod cli;
pub mod complex;
pub mod error;
pub mod numtheory;
pub mod partitions;
pub mod real;
pub mod reference;
pub mod topology;

pub use complex::{
    canonical_singularity, complex_component, decompose_complex, enumerate_omegas,
    singularity_weights, y_mu_count, y_mu_count_direct, ComplexComponent, CyclicSingularity,
    OmegaLabel, QuotientCatalog,
};
pub use error::{Error, Result};
pub use partitions::{Partition, PartitionInvariants, Partitions};
pub use real::{bundle_orientable_k1, decompose_real, real_component, RealComponent};
pub use topology::{
    betti, euler_characteristic, ktheory_ranks, top_betti, BettiVector, KTheoryRanks,
};
