//! Integral stringy Chow rings of global quotient orbifolds `[V/G]`.
//!
//! The crate computes the inertia decomposition of `[V/G]` for a finite
//! group `G`, ages of sectors, obstruction data of constant twisted stable
//! maps from 3-pointed genus-0 twisted curves, and the resulting stringy
//! product with integer coefficients: the full ring for `BG` with `G` any
//! finite group, and the ring over `A*(BG)` for diagonal actions of finite
//! abelian groups. All arithmetic is exact.

pub mod equivariant;
pub mod error;
pub mod group;
pub mod inertia;
pub mod moduli;
pub mod representation;
pub mod stringy;
pub mod twisted_rr;

pub use equivariant::{BgRing, EquivariantClass};
pub use error::{Error, Result};
pub use group::{build_group, ConjugacyClass, Elem, FiniteGroup, GroupSpec, DEFAULT_MAX_ORDER};
pub use inertia::{inertia_components, root_section_exists, InertiaDecomposition, PicardGroupData, Sector};
pub use moduli::{enumerate_k03_bg, gluing_index_r_times, mass_check, MassCheck, ModuliComponent};
pub use representation::{ActionSpec, AgeVector, Eigen, LinearAction};
pub use stringy::{
    abelian_quotient_product, bg_product, grade, poincare_polynomial, ring_table,
    verify_associativity, Grade, Orbifold, RingTable, StringyClass,
};
pub use twisted_rr::{cohomology_p1, obstruction_rank, pushforward_degree, TwistedLineBundleData};
