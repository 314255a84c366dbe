//! Exact slice calculus for truncated Koszul and Čech complexes over
//! monomial data.
//!
//! Modules M = R/I over R = k[x₁, …, x_d] with monomial relations I are
//! small enough to compute with exactly, degree slice by degree slice.  This
//! crate builds the four truncated complexes attached to a weighted system
//! (a₁, c₁), …, (a_t, c_t) inside an ideal q — the chain-side K•(a, q, M; n)
//! and L•(a, q, M; n) and their cochain mirrors — and reads off homology
//! dimensions over a prime field, Euler characteristics, Hilbert–Samuel
//! multiplicities, stabilized Čech cohomology Ȟ / Ľ, and local cohomology.
//!
//! The pieces:
//!
//! * [`monomial`] — monomials, monomial ideals, cyclic modules, lengths.
//! * [`linalg`] — sparse elimination over 𝔽_p.
//! * [`complex`] — graded complexes of ideal-tagged slots, slice homology,
//!   mapping cones, annihilation and exactness checks.
//! * [`builder`] — weighted systems and the six complex builders.
//! * [`multiplicity`] — Hilbert–Samuel tables, e₀, and the χ identities.
//! * [`cech`] — direct systems over powered elements, stabilized colimit
//!   cohomology, saturation chains, star identities, torsion and Artin–Rees
//!   side checks.
//! * [`parse`] — text input for monomials and ideals.

pub mod builder;
pub mod cech;
pub mod complex;
pub mod error;
pub mod linalg;
pub mod monomial;
pub mod multiplicity;
pub mod parse;

pub use builder::{
    co_koszul, co_quotient_L, default_cap, koszul, max_weight, quotient_L, rees_slice_oracle,
    sub_co_koszul, sub_koszul, WeightedSystem,
};
pub use cech::{
    artin_rees_gap, build_system, cech_H, cech_L, colimit_cohomology, local_cohomology,
    nonv_equivalence_check, radical_invariance_check, saturation_power, star_check, torsion_H0,
    ColimitParams, ColimitReport, SystemKind,
};
pub use complex::{
    mapping_cone, ses_check, ComplexSpec, DegreeCap, HomologyTable, Orientation,
};
pub use error::{Error, Result};
pub use linalg::{PrimeField, SparseMatrix};
pub use monomial::{
    CyclicModule, Monomial, MonomialIdeal, NegPowerConvention,
};
pub use multiplicity::{
    chi_K_stable, chi_koszul, chi_L, chi_nonneg_monitor, e0, hilbert_table, random_sop_instance,
    verify_mult1, verify_mult2,
};
pub use parse::{parse_ideal, parse_monomial};
