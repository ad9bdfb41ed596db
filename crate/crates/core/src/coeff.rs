use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::rational::Q;

/// Commutative coefficient ring for [`crate::LaurentPoly`].
///
/// Elements may carry context (a [`crate::CohClass`] knows its ring), so the
/// ring operations are methods on elements rather than associated
/// constants. Mixing elements of different contexts is a logic error and
/// panics.
pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn scale(&self, factor: &Q) -> Self;
    /// The multiplicative identity in the same context as `self`.
    fn one_like(&self) -> Self;

    fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }
}

impl Coefficient for Q {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn scale(&self, factor: &Q) -> Self {
        self * factor
    }

    fn one_like(&self) -> Self {
        Q::one()
    }
}
