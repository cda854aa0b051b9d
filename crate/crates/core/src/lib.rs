//! Harmonic analysis on truncated products of finite groups.
//!
//! A [`GroupSequence`] is a finite product `G_0 x ... x G_{L-1}` of finite
//! groups, represented on tuples of conjugacy-class labels. Matrix-valued
//! class functions on it carry character expansions, Dirichlet and Fejer
//! means, a martingale filtration and `L_2(l_inf)` maximal norms.

pub mod bounds;
pub mod error;
pub mod fourier;
pub mod function;
pub mod group;
pub mod identities;
pub mod linalg;
pub mod martingale;
pub mod maximal;
pub mod random;
pub mod sequence;

pub use bounds::{check_bound, check_bound_all, BoundId, BoundParams, BoundReport, EstimateKind};
pub use error::{Error, Result};
pub use fourier::{
    block_kernel, dirichlet_kernel, dirichlet_mean, fejer_kernel, fejer_mean, fourier_coefficient,
    modulated_conjugacy_average, modulated_cylinder_average, CharacterGrid, KernelTable,
};
pub use function::{inner_product, norm2, ClassFunction};
pub use group::{
    character_table, validate_character_table, CatalogGroup, CharacterTable, ConjugacyStructure, FiniteGroup,
    ValidationReport,
};
pub use identities::{check_identity, IdentityId, IdentityInputs, ResidualReport};
pub use linalg::CMatrix;
pub use num_complex::Complex64;
pub use martingale::{conditional_expectation, martingale_difference, martingale_differences, square_function_check};
pub use maximal::{
    loewner_join, positive_family_norm, scalar_family_norm, selfadjoint_upper_bound, DykstraOptions, FamilyKind,
    MaximalEstimate, OperatorFamily,
};
pub use sequence::{ClassPoint, CylinderKind, GroupSequence, GroupSpec, IndexExpansion};
