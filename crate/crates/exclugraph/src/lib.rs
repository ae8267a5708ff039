//! Bounds and quantum sets of correlation experiments on exclusivity graphs.
//!
//! An experiment's events and their mutual exclusivities form a graph; this
//! crate computes the classical bound (weighted independence number), the
//! quantum bound (weighted Lovász number, by a dense interior-point SDP),
//! and the single-copy exclusivity-principle bound (fractional packing, by
//! a simplex LP) of such graphs, decides quantum-set membership through the
//! theta-body characterisation, extracts exclusivity-principle witnesses
//! against supra-quantum points, and ships executable verifiers for the
//! complementary-duality results on self-complementary and
//! vertex-transitive graphs.
//!
//! The numerical layers are generic over the scalar (see [`scalar::Real`]);
//! the aliases at the crate root fix `f64`, which is what the command-line
//! front end and the verification suites use.
//!
//! Everything is pure: graphs and solver inputs are immutable, solver runs
//! are independent and reentrant, and randomised verifiers take explicit
//! seeds.
//!
//! ```
//! use exclugraph::bounds::{bounds_report, WeightVector};
//! use exclugraph::graph::FamilySpec;
//!
//! let pentagon = FamilySpec::cycle(5).generate()?;
//! let report = bounds_report(&pentagon, &WeightVector::unit(5), 1e-8)?;
//! assert_eq!(report.alpha, 2.0);
//! assert!((report.theta - 5f64.sqrt()).abs() < 1e-6);
//! assert!((report.alpha_star - 2.5).abs() < 1e-9);
//! assert!(report.vertex_transitive && report.self_complementary);
//! # Ok::<(), exclugraph::Error>(())
//! ```

pub mod bounds;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod lp;
pub mod quantum;
pub mod scalar;
pub mod sdp;

pub use error::{Error, Result};
pub use graph::{
    AutomorphismGroup, FamilyKind, FamilySpec, Graph, VertexPermutation, MAX_VERTICES,
};
pub use scalar::Real;

/// `f64` instantiations of the scalar-generic types.
pub type WeightVectorF64 = bounds::WeightVector<f64>;
pub type BoundsReportF64 = bounds::BoundsReport<f64>;
pub type DistributionF64 = quantum::Distribution<f64>;
pub type MembershipVerdictF64 = quantum::MembershipVerdict<f64>;
pub type WitnessF64 = quantum::Witness<f64>;
pub type QuantumMaxReportF64 = quantum::QuantumMaxReport<f64>;
pub type Result2ReportF64 = quantum::Result2Report<f64>;
pub type Result3ReportF64 = quantum::Result3Report<f64>;
pub type ThetaSolutionF64 = sdp::ThetaSolution<f64>;
pub type LpSolutionF64 = lp::LpSolution<f64>;
pub type SymmetricMatrixF64 = linalg::SymmetricMatrix<f64>;
