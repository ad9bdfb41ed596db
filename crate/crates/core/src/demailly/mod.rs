//! Demailly tower bookkeeping and three independent integrators.
//!
//! A class on the top level `X_κ` is given as a polynomial `f(v_1, ..., v_κ)`
//! with coefficients pulled back from the base. Its integral can be computed
//! by:
//!
//! * [`integrate_stepwise`]: eliminating `v_κ, v_{κ-1}, ..., v_1` one fiber
//!   at a time with twisted Segre polynomials (the oracle);
//! * [`integrate_phi_form`]: a single coefficient extraction against the
//!   finite product `Φ_κ` of truncated `φ` polynomials;
//! * [`integrate_residue`]: a single coefficient extraction against the
//!   windowed expansion of a universal rational function.
//!
//! The stepwise path never touches the series machinery, so agreement of
//! the three is a genuine cross-check.

mod integrators;
mod stepwise;
mod tower;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded_ring::{BaseGeometry, CohClass, RingError};
use crate::laurent::{LaurentPoly, SeriesError};

pub use integrators::{
    integrate_phi_form, integrate_residue, residue_phi_rational, Integrator, PhiFormIntegrator,
    ResidueIntegrator, StepwiseIntegrator,
};
pub use stepwise::{fiber_integrate_once, integrate_stepwise, twisted_segre_recursion};
pub use tower::{
    base_integral, base_integral_with, change_of_variables, partial_extraction, phi_i_product,
    phi_kl, phi_poly, segre_gen,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("invalid tower configuration: {0}")]
    InvalidConfig(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("expected a polynomial in t_1..t_k, found negative exponents")]
    NotPolynomial,
    #[error("expected {expected} tower variables, found {found}")]
    NvarsMismatch { expected: usize, found: usize },
    #[error("wrong tower level: expected {expected}, found {found}")]
    LevelMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Shape of the tower `X_κ -> ... -> X_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TowerConfig {
    kappa: usize,
    n: u32,
    r: u32,
    dims: Vec<u32>,
}

impl TowerConfig {
    pub fn new(kappa: usize, n: u32, r: u32) -> Result<Self, TowerError> {
        if kappa == 0 {
            return Err(TowerError::InvalidConfig("kappa must be at least 1".into()));
        }
        if n == 0 {
            return Err(TowerError::InvalidConfig(
                "base dimension must be at least 1".into(),
            ));
        }
        let dims = (0..=kappa as u32).map(|i| n + i * r).collect();
        Ok(TowerConfig { kappa, n, r, dims })
    }

    /// Tower over `geom` with `κ` levels.
    pub fn for_geometry(geom: &BaseGeometry, kappa: usize) -> Result<Self, TowerError> {
        TowerConfig::new(kappa, geom.n(), geom.r())
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `n_i = n + i·r` for `i = 0..=κ`.
    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn dim(&self, level: usize) -> u32 {
        self.dims[level]
    }

    pub fn n_kappa(&self) -> u32 {
        self.dims[self.kappa]
    }

    /// Exponent `(r, ..., r)` whose coefficient is the integral.
    pub fn target(&self) -> Vec<i32> {
        vec![self.r as i32; self.kappa]
    }

    /// Truncation order `N = n_{κ-1}` of `φ`.
    pub fn phi_order(&self) -> u32 {
        self.dims[self.kappa - 1]
    }

    pub(crate) fn check_geometry(&self, geom: &BaseGeometry) -> Result<(), TowerError> {
        if geom.n() != self.n || geom.r() != self.r {
            return Err(TowerError::InvalidConfig(format!(
                "geometry has n={}, r={} but tower expects n={}, r={}",
                geom.n(),
                geom.r(),
                self.n,
                self.r
            )));
        }
        Ok(())
    }

    pub(crate) fn check_nvars(&self, nvars: usize) -> Result<(), TowerError> {
        if nvars != self.kappa {
            return Err(TowerError::NvarsMismatch {
                expected: self.kappa,
                found: nvars,
            });
        }
        Ok(())
    }
}

/// Polynomial on some level of the tower.
///
/// Positions `0..level` hold cohomological variables `v_1, ..., v_level`;
/// the remaining positions hold formal variables `t_{level+1}, ..., t_κ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerPolynomial {
    poly: LaurentPoly<CohClass>,
    level: usize,
}

impl TowerPolynomial {
    pub fn new(poly: LaurentPoly<CohClass>, level: usize) -> Result<Self, TowerError> {
        if level > poly.nvars() {
            return Err(TowerError::IndexOutOfRange(format!(
                "level {level} exceeds {} variables",
                poly.nvars()
            )));
        }
        Ok(TowerPolynomial { poly, level })
    }

    /// `f(v_1, ..., v_κ)` on the top level.
    pub fn cohomological(poly: LaurentPoly<CohClass>) -> Self {
        let level = poly.nvars();
        TowerPolynomial { poly, level }
    }

    pub fn poly(&self) -> &LaurentPoly<CohClass> {
        &self.poly
    }

    pub fn into_poly(self) -> LaurentPoly<CohClass> {
        self.poly
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Whether position `idx` (0-based) is still a cohomological variable.
    pub fn is_cohomological(&self, idx: usize) -> bool {
        idx < self.level
    }
}

/// Which integrator produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    Residue,
    Stepwise,
    PhiForm,
}

impl Pipeline {
    pub const ALL: [Pipeline; 3] = [Pipeline::Residue, Pipeline::Stepwise, Pipeline::PhiForm];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Residue => "residue",
            Pipeline::Stepwise => "stepwise",
            Pipeline::PhiForm => "phi",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pipeline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "residue" => Ok(Pipeline::Residue),
            "stepwise" => Ok(Pipeline::Stepwise),
            "phi" | "phi_form" | "phi-form" => Ok(Pipeline::PhiForm),
            other => Err(format!("unknown pipeline `{other}`")),
        }
    }
}
