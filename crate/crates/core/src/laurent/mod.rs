//! Multivariate Laurent polynomials and certified windowed iterated Laurent
//! series.
//!
//! Series live in the field of formal series whose support is well ordered
//! for the lexicographic order on `Z^k` (variables ordered
//! `t_1 << t_2 << ... << t_k << 1`). Only finite windows are ever
//! materialised. Every windowed series may carry a [`SupportBound`]
//! describing where the *full* series can be nonzero; products use it to
//! prove that each requested coefficient is determined by the stored
//! windows, and refuse with [`SeriesError::TruncationTooNarrow`] otherwise.

mod expand;
mod poly;
mod series;

use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::rational::Q;

pub use expand::{
    expand_geometric, expand_geometric_with, expand_rational_product, expand_rational_product_with,
};
pub use poly::LaurentPoly;
pub use series::{cauchy_mul, cauchy_mul_with, Operand, Support, TruncatedSeries};

/// Exponent tuple; `Vec` ordering is the lexicographic order used for
/// iterated Laurent series.
pub type Exponent = Vec<i32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation too narrow: {0}")]
    TruncationTooNarrow(String),
    #[error("coefficient not determined at {0:?}")]
    CoefficientNotDetermined(Exponent),
    #[error("not expandable at origin: {0}")]
    NotExpandable(String),
    #[error("variable count mismatch: expected {expected}, found {found}")]
    NvarsMismatch { expected: usize, found: usize },
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid support bound: {0}")]
    InvalidSupport(String),
}

/// Strictly positive iff the first nonzero entry is positive.
pub fn is_lex_positive(e: &[i32]) -> bool {
    e.iter().find(|x| **x != 0).is_some_and(|x| *x > 0)
}

/// Box of exponents `lo_i <= e_i <= hi_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    lo: Vec<i32>,
    hi: Vec<i32>,
}

impl Window {
    pub fn new(lo: Vec<i32>, hi: Vec<i32>) -> Result<Self, SeriesError> {
        if lo.len() != hi.len() {
            return Err(SeriesError::InvalidWindow("bound lengths differ".into()));
        }
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(SeriesError::InvalidWindow(format!(
                "empty interval [{}, {}] for variable {}",
                lo[i],
                hi[i],
                i + 1
            )));
        }
        Ok(Window { lo, hi })
    }

    /// Same interval `[lo, hi]` for every variable.
    pub fn uniform(nvars: usize, lo: i32, hi: i32) -> Result<Self, SeriesError> {
        Window::new(vec![lo; nvars], vec![hi; nvars])
    }

    pub fn from_intervals(intervals: &[(i32, i32)]) -> Result<Self, SeriesError> {
        Window::new(
            intervals.iter().map(|p| p.0).collect(),
            intervals.iter().map(|p| p.1).collect(),
        )
    }

    pub fn point(e: &[i32]) -> Self {
        Window {
            lo: e.to_vec(),
            hi: e.to_vec(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i32] {
        &self.lo
    }

    pub fn hi(&self) -> &[i32] {
        &self.hi
    }

    pub fn contains(&self, e: &[i32]) -> bool {
        e.len() == self.lo.len()
            && e.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (l, h))| l <= x && x <= h)
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        other.nvars() == self.nvars()
            && (0..self.nvars()).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i])
    }

    pub fn volume(&self) -> u128 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (*h as i64 - *l as i64 + 1) as u128)
            .product()
    }

    /// Every exponent in the box, lexicographic order.
    pub fn points(&self) -> Vec<Exponent> {
        let mut out = vec![Vec::with_capacity(self.nvars())];
        for i in 0..self.nvars() {
            let mut next = Vec::with_capacity(out.len() * (self.hi[i] - self.lo[i] + 1) as usize);
            for p in &out {
                for x in self.lo[i]..=self.hi[i] {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    /// Maximum of `W·e` over the box.
    pub fn max_weight(&self, grading: &Grading) -> i64 {
        grading
            .weights()
            .iter()
            .zip(&self.hi)
            .map(|(w, h)| w * *h as i64)
            .sum()
    }

    /// Moves every bound away from `center` by a factor of two.
    pub fn widened_around(&self, center: &[i32]) -> Window {
        let lo = self
            .lo
            .iter()
            .zip(center)
            .map(|(l, c)| c - 2 * (c - l).max(1))
            .collect();
        let hi = self
            .hi
            .iter()
            .zip(center)
            .map(|(h, c)| c + 2 * (h - c).max(1))
            .collect();
        Window { lo, hi }
    }
}

/// Positive integer weights `W` with `W·g > 0` for the generators in play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    weights: Vec<i64>,
}

impl Grading {
    pub fn new(weights: Vec<i64>) -> Option<Self> {
        if weights.iter().all(|w| *w > 0) {
            Some(Grading { weights })
        } else {
            None
        }
    }

    /// `(k, k-1, ..., 1)`: every `t_i / t_j` with `i < j` has weight `j - i`.
    pub fn standard(nvars: usize) -> Self {
        Grading {
            weights: (1..=nvars as i64).rev().collect(),
        }
    }

    /// A grading positive on every (lexicographically positive) generator.
    ///
    /// Tries [`Grading::standard`] first, then `B`-adic weights
    /// `B^{k-1}, ..., B, 1` with `B = 1 + max |g|_1`, which always works.
    pub fn adapted(nvars: usize, generators: &[Exponent]) -> Result<Self, SeriesError> {
        if let Some(g) = generators.iter().find(|g| !is_lex_positive(g)) {
            return Err(SeriesError::InvalidSupport(format!(
                "generator {g:?} is not lexicographically positive"
            )));
        }
        let standard = Grading::standard(nvars);
        if generators.iter().all(|g| standard.weight(g) > 0) {
            return Ok(standard);
        }
        let base = 1 + generators
            .iter()
            .map(|g| g.iter().map(|x| x.unsigned_abs() as i64).sum::<i64>())
            .max()
            .unwrap_or(0);
        let mut weights = vec![1i64; nvars];
        for i in (0..nvars.saturating_sub(1)).rev() {
            weights[i] = weights[i + 1]
                .checked_mul(base)
                .ok_or_else(|| SeriesError::InvalidSupport("grading weights overflow".into()))?;
        }
        Ok(Grading { weights })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight(&self, e: &[i32]) -> i64 {
        self.weights.iter().zip(e).map(|(w, x)| w * *x as i64).sum()
    }
}

/// Certificate `supp ⊂ base + N·g_1 + ... + N·g_p` for a full (untruncated)
/// series, with every generator lexicographically positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportBound {
    base: Exponent,
    generators: Vec<Exponent>,
}

impl SupportBound {
    pub fn new(base: Exponent, mut generators: Vec<Exponent>) -> Result<Self, SeriesError> {
        for g in &generators {
            if g.len() != base.len() {
                return Err(SeriesError::NvarsMismatch {
                    expected: base.len(),
                    found: g.len(),
                });
            }
            if !is_lex_positive(g) {
                return Err(SeriesError::InvalidSupport(format!(
                    "generator {g:?} is not lexicographically positive"
                )));
            }
        }
        generators.sort();
        generators.dedup();
        Ok(SupportBound { base, generators })
    }

    /// Bound for a finite support: lex-least point plus the differences.
    pub fn of_points<'a>(points: impl IntoIterator<Item = &'a Exponent>) -> Option<Self> {
        let mut pts: Vec<&Exponent> = points.into_iter().collect();
        pts.sort();
        let base = (*pts.first()?).clone();
        let generators = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&base).map(|(x, b)| x - b).collect())
            .collect();
        SupportBound::new(base, generators).ok()
    }

    pub fn base(&self) -> &Exponent {
        &self.base
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.base.len()
    }

    /// Bound for the Cauchy product of two series.
    pub fn product(&self, other: &SupportBound) -> SupportBound {
        let base = self
            .base
            .iter()
            .zip(&other.base)
            .map(|(a, b)| a + b)
            .collect();
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        SupportBound::new(base, generators).expect("generators stay lex positive")
    }

    /// Per-variable interval containing `x` whenever `x` lies in the monoid
    /// and `W·x <= budget`.
    pub(crate) fn monoid_box(&self, grading: &Grading, budget: i64) -> Vec<(i64, i64)> {
        let n = self.nvars();
        let mut out = vec![(0i64, 0i64); n];
        if budget <= 0 {
            return out;
        }
        for (m, slot) in out.iter_mut().enumerate() {
            let mut lo_ratio = Q::zero();
            let mut hi_ratio = Q::zero();
            for g in &self.generators {
                let w = grading.weight(g);
                debug_assert!(w > 0);
                let r = Q::new(g[m].into(), w.into());
                if r > hi_ratio {
                    hi_ratio = r.clone();
                }
                if r < lo_ratio {
                    lo_ratio = r;
                }
            }
            let b = Q::from_integer(budget.into());
            *slot = (floor_i64(&(lo_ratio * &b)), floor_i64(&(hi_ratio * b)));
        }
        out
    }
}

fn floor_i64(x: &Q) -> i64 {
    i64::try_from(x.numer().div_floor(x.denom())).expect("exponent bound fits in i64")
}
