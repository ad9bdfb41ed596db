//! Exact intersection numbers on the Demailly tower of projectivized jet
//! bundles.
//!
//! The crate is organised bottom-up:
//!
//! * [`graded_ring`]: truncated cohomology rings of the base manifold, with
//!   Chern/Segre calculus and the top-degree integration functional.
//! * [`laurent`]: sparse multivariate Laurent polynomials and certified,
//!   windowed iterated Laurent series (Cauchy products, geometric inverses,
//!   expansion of rational functions under `t_1 << ... << t_k << 1`).
//! * [`demailly`]: tower bookkeeping and three independent integrators
//!   (stepwise Segre elimination, the truncated `phi` product form and the
//!   rational residue form).
//! * [`morse`]: weighted tautological bundles, the Morse intersection number
//!   and degree searches.
//!
//! All arithmetic is exact over [`Q`]; nothing in the crate touches floating
//! point.

pub mod coeff;
pub mod demailly;
pub mod graded_ring;
pub mod laurent;
pub mod morse;
pub mod par;
pub mod rational;

pub use coeff::Coefficient;
pub use demailly::{
    integrate_phi_form, integrate_residue, integrate_stepwise, Integrator, PhiFormIntegrator,
    Pipeline, ResidueIntegrator, StepwiseIntegrator, TowerConfig, TowerError, TowerPolynomial,
};
pub use graded_ring::{
    chern_of_geometry, BaseGeometry, CohClass, GeometryKind, RingError, RingSpec,
};
pub use laurent::{
    cauchy_mul, expand_geometric, expand_rational_product, Exponent, Grading, LaurentPoly, Operand,
    SeriesError, Support, SupportBound, TruncatedSeries, Window,
};
pub use morse::{
    minimal_degree_search, morse_class, morse_integrand, morse_number, weights_valid_demailly,
    weights_valid_l, Basis, MorseError, MorseReport, PipelineSelection, SearchEntry, SearchReport,
    SearchRequest, WeightVector,
};
pub use par::Execution;
pub use rational::Q;
