//! Exact verification toolkit for packings and tilings of `R^d` by translates
//! of the half-open unit cube `[0,1)^d`.
//!
//! The core is generic over an exact [`Scalar`]; the crate-root aliases fix it
//! to arbitrary-precision rationals ([`Rational`]).

pub mod chessboard;
pub mod erosion;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod instance;
pub mod oracle;
pub mod packing;
pub mod rigidity;
pub mod scalar;
pub mod subgroup;
pub mod svg;
pub mod tiling;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision rational, the default coordinate type.
pub type Rational = num_rational::BigRational;

pub type Point = geometry::Point<Rational>;
pub type HalfOpenBox = geometry::HalfOpenBox<Rational>;
pub type BoxSet = geometry::BoxSet<Rational>;
pub type FaceSet = erosion::FaceSet<Rational>;
pub type CubeSystem = packing::CubeSystem<Rational>;
pub type WitnessPair = rigidity::WitnessPair<Rational>;
pub type IndexDiagnostics = rigidity::IndexDiagnostics<Rational>;
pub type PairingReport = rigidity::PairingReport<Rational>;
pub type ParityCertificate = rigidity::ParityCertificate<Rational>;
pub type Decomposition = chessboard::Decomposition<Rational>;
pub type OrthantWitness = tiling::OrthantWitness<Rational>;

pub use chessboard::chessboard_decompose;
pub use generators::{lattice_tiling, random_torus_tiling, shifted_column_tiling};
pub use instance::{from_json, to_json};
pub use oracle::brute_force_covered;
pub use rigidity::{find_covered_outsiders, is_covered, parity_certificate, parity_certificate_system, twin_witness};
pub use subgroup::{basis_vector_certificate, subgroup_check, BasisCertificate};
pub use tiling::{coset_census, orthant_witness, SignVector};
