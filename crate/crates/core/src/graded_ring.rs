//! Truncated graded cohomology rings of the base manifold.
//!
//! Rings are monomial quotients `Q[g_1, ..., g_m] / (g_i^{e_i}, degree > n)`
//! with an explicit pairing on top-degree monomials. Truncation is eager:
//! no [`CohClass`] ever stores a monomial that is zero in the ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("ring mismatch")]
    RingMismatch,
    #[error("not invertible: constant term is {0}, expected 1")]
    NotInvertible(String),
    #[error("invalid ring: {0}")]
    InvalidSpec(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("unknown geometry kind `{0}`")]
    UnknownKind(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    /// `g^nilpotency = 0`.
    pub nilpotency: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32, nilpotency: u32) -> Self {
        Generator {
            name: name.into(),
            degree,
            nilpotency,
        }
    }
}

/// Presentation of a truncated graded ring together with its top-degree
/// integration functional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    generators: Vec<Generator>,
    top_degree: u32,
    integral_values: BTreeMap<Vec<u32>, Q>,
}

impl RingSpec {
    pub fn new(
        generators: Vec<Generator>,
        top_degree: u32,
        integral_values: BTreeMap<Vec<u32>, Q>,
    ) -> Result<Self, RingError> {
        if generators.is_empty() {
            return Err(RingError::InvalidSpec(
                "at least one generator is required".into(),
            ));
        }
        for g in &generators {
            if g.degree == 0 || g.nilpotency == 0 {
                return Err(RingError::InvalidSpec(format!(
                    "generator `{}` needs positive degree and nilpotency exponent",
                    g.name
                )));
            }
        }
        let spec = RingSpec {
            generators,
            top_degree,
            integral_values: BTreeMap::new(),
        };
        let top: Vec<Vec<u32>> = spec.monomials_of_degree(top_degree);
        for key in integral_values.keys() {
            if !top.contains(key) {
                return Err(RingError::InvalidSpec(format!(
                    "integral value given for {key:?}, which is not a top-degree monomial"
                )));
            }
        }
        for m in &top {
            if !integral_values.contains_key(m) {
                return Err(RingError::InvalidSpec(format!(
                    "missing integral value for top-degree monomial {m:?}"
                )));
            }
        }
        Ok(RingSpec {
            integral_values,
            ..spec
        })
    }

    /// `Q[h]/(h^{n+1})` with `∫ h^n = top_value`.
    pub fn univariate(name: &str, n: u32, top_value: Q) -> Self {
        let mut values = BTreeMap::new();
        values.insert(vec![n], top_value);
        RingSpec::new(vec![Generator::new(name, 1, n + 1)], n, values)
            .expect("univariate truncated ring is well formed")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn integral_values(&self) -> &BTreeMap<Vec<u32>, Q> {
        &self.integral_values
    }

    pub fn degree_of(&self, exps: &[u32]) -> u32 {
        exps.iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    /// Whether a monomial survives the truncation.
    pub fn is_live(&self, exps: &[u32]) -> bool {
        exps.len() == self.generators.len()
            && exps
                .iter()
                .zip(&self.generators)
                .all(|(e, g)| *e < g.nilpotency)
            && self.degree_of(exps) <= self.top_degree
    }

    /// All live monomials of the given degree, in lexicographic order.
    pub fn monomials_of_degree(&self, degree: u32) -> Vec<Vec<u32>> {
        fn rec(
            spec: &RingSpec,
            idx: usize,
            left: u32,
            cur: &mut Vec<u32>,
            out: &mut Vec<Vec<u32>>,
        ) {
            if idx == spec.generators.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let g = &spec.generators[idx];
            let mut e = 0;
            while e < g.nilpotency && e * g.degree <= left {
                cur.push(e);
                rec(spec, idx + 1, left - e * g.degree, cur, out);
                cur.pop();
                e += 1;
            }
        }
        let mut out = Vec::new();
        if degree <= self.top_degree {
            rec(self, 0, degree, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// Element of a truncated graded ring.
#[derive(Clone, PartialEq)]
pub struct CohClass {
    ring: Arc<RingSpec>,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl CohClass {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        CohClass {
            ring: Arc::clone(ring),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<RingSpec>, value: Q) -> Self {
        let zero_exps = vec![0; ring.generators.len()];
        Self::monomial(ring, zero_exps, value)
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::constant(ring, Q::one())
    }

    /// `value * prod g_i^{exps_i}`, or zero if the monomial is truncated.
    pub fn monomial(ring: &Arc<RingSpec>, exps: Vec<u32>, value: Q) -> Self {
        let mut c = Self::zero(ring);
        if ring.is_live(&exps) && !value.is_zero() {
            c.terms.insert(exps, value);
        }
        c
    }

    /// The `idx`-th generator.
    pub fn generator(ring: &Arc<RingSpec>, idx: usize) -> Self {
        let mut exps = vec![0; ring.generators.len()];
        exps[idx] = 1;
        Self::monomial(ring, exps, Q::one())
    }

    /// `Σ coeffs[j] g^j` in a ring with a single generator `g`.
    pub fn from_univariate(ring: &Arc<RingSpec>, coeffs: &[Q]) -> Self {
        assert_eq!(
            ring.generators.len(),
            1,
            "from_univariate needs a one-generator ring"
        );
        let mut c = Self::zero(ring);
        for (j, v) in coeffs.iter().enumerate() {
            c = &c + &Self::monomial(ring, vec![j as u32], v.clone());
        }
        c
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Q {
        let zero_exps = vec![0; self.ring.generators.len()];
        self.terms.get(&zero_exps).cloned().unwrap_or_else(Q::zero)
    }

    /// Homogeneous component of the given degree.
    pub fn degree_part(&self, degree: u32) -> CohClass {
        CohClass {
            ring: Arc::clone(&self.ring),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| self.ring.degree_of(e) == degree)
                .map(|(e, v)| (e.clone(), v.clone()))
                .collect(),
        }
    }

    /// Largest degree with a nonzero component; `None` for zero.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| self.ring.degree_of(e)).max()
    }

    pub fn same_ring(&self, other: &CohClass) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    pub fn scale(&self, factor: &Q) -> CohClass {
        if factor.is_zero() {
            return Self::zero(&self.ring);
        }
        CohClass {
            ring: Arc::clone(&self.ring),
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * factor))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Result<CohClass, RingError> {
        let mut acc = Self::one(&self.ring);
        for _ in 0..exp {
            acc = ring_mul(&acc, self)?;
        }
        Ok(acc)
    }

    pub fn integrate(&self) -> Q {
        integrate_base(self)
    }

    fn add_scaled(&mut self, other: &CohClass, factor: &Q) {
        assert!(self.same_ring(other), "ring mismatch");
        for (e, v) in &other.terms {
            let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
            *entry += v * factor;
            if entry.is_zero() {
                self.terms.remove(e);
            }
        }
    }
}

/// Graded product, truncated above the top degree and generator nilpotency.
pub fn ring_mul(a: &CohClass, b: &CohClass) -> Result<CohClass, RingError> {
    if !a.same_ring(b) {
        return Err(RingError::RingMismatch);
    }
    let ring = &a.ring;
    let mut out: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
    for (ea, va) in &a.terms {
        for (eb, vb) in &b.terms {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if !ring.is_live(&e) {
                continue;
            }
            *out.entry(e).or_insert_with(Q::zero) += va * vb;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(CohClass {
        ring: Arc::clone(ring),
        terms: out,
    })
}

/// Inverse of a class with constant term 1, solved degree by degree.
pub fn ring_inv_unit(c: &CohClass) -> Result<CohClass, RingError> {
    let c0 = c.constant_term();
    if !c0.is_one() {
        return Err(RingError::NotInvertible(c0.to_string()));
    }
    let ring = &c.ring;
    let parts: Vec<CohClass> = (0..=ring.top_degree).map(|j| c.degree_part(j)).collect();
    let mut inv_parts: Vec<CohClass> = vec![CohClass::one(ring)];
    for j in 1..=ring.top_degree as usize {
        let mut s_j = CohClass::zero(ring);
        for i in 1..=j {
            let prod = ring_mul(&parts[i], &inv_parts[j - i])?;
            s_j.add_scaled(&prod, &-Q::one());
        }
        inv_parts.push(s_j);
    }
    let mut total = CohClass::zero(ring);
    for p in &inv_parts {
        total.add_scaled(p, &Q::one());
    }
    Ok(total)
}

/// `∫_{X_0} c`: pairs the top-degree part with the ring's integral values.
pub fn integrate_base(c: &CohClass) -> Q {
    let mut acc = Q::zero();
    for (e, v) in &c.terms {
        if let Some(w) = c.ring.integral_values.get(e) {
            acc += v * w;
        }
    }
    acc
}

impl Add for &CohClass {
    type Output = CohClass;

    fn add(self, rhs: &CohClass) -> CohClass {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::one());
        out
    }
}

impl Sub for &CohClass {
    type Output = CohClass;

    fn sub(self, rhs: &CohClass) -> CohClass {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl Neg for &CohClass {
    type Output = CohClass;

    fn neg(self) -> CohClass {
        self.scale(&-Q::one())
    }
}

impl crate::coeff::Coefficient for CohClass {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        self.add_scaled(rhs, &Q::one());
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        ring_mul(self, rhs).expect("ring mismatch")
    }

    fn scale(&self, factor: &Q) -> Self {
        CohClass::scale(self, factor)
    }

    fn one_like(&self) -> Self {
        CohClass::one(&self.ring)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // ascending degree reads naturally: 1 + 3h + 3h^2
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| (self.ring.degree_of(e), std::cmp::Reverse((*e).clone())));
        for (e, v) in terms {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.ring.generators)
                .filter(|(x, _)| **x > 0)
                .map(|(x, g)| {
                    if *x == 1 {
                        g.name.clone()
                    } else {
                        format!("{}^{}", g.name, x)
                    }
                })
                .collect();
            let neg = v < &Q::zero();
            let abs = if neg { -v.clone() } else { v.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{abs}{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CohClass({self})")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeometryKind {
    /// `X_0 = P^n`, `V_0 = T_{P^n}`.
    #[serde(rename = "pn")]
    ProjectiveSpace,
    /// `X_0 = X_d ⊂ P^{n+1}` a smooth hypersurface, `V_0 = T_{X_d}`.
    #[serde(rename = "hypersurface")]
    HypersurfaceTangent,
    /// `X_0 = P^n`, `V_0 = T_{P^n}(-log X_d)`.
    #[serde(rename = "log-pn")]
    LogProjective,
}

impl GeometryKind {
    pub fn cli_name(self) -> &'static str {
        match self {
            GeometryKind::ProjectiveSpace => "pn",
            GeometryKind::HypersurfaceTangent => "hypersurface",
            GeometryKind::LogProjective => "log-pn",
        }
    }

    pub fn uses_degree(self) -> bool {
        !matches!(self, GeometryKind::ProjectiveSpace)
    }
}

impl FromStr for GeometryKind {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pn" | "projective_space" => Ok(GeometryKind::ProjectiveSpace),
            "hypersurface" | "hypersurface_tangent" => Ok(GeometryKind::HypersurfaceTangent),
            "log-pn" | "log_projective" => Ok(GeometryKind::LogProjective),
            other => Err(RingError::UnknownKind(other.to_string())),
        }
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

/// Normal-crossings divisor data for the logarithmic case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LogDivisor {
    pub degree: u32,
}

/// Base manifold, its cohomology, and the distribution `V_0`.
#[derive(Clone, Debug)]
pub struct BaseGeometry {
    ring: Arc<RingSpec>,
    rank_v0: u32,
    total_chern_v0: CohClass,
    log_divisor: Option<LogDivisor>,
    kind: Option<GeometryKind>,
    degree: Option<u32>,
}

impl BaseGeometry {
    pub fn new(
        ring: Arc<RingSpec>,
        rank_v0: u32,
        total_chern_v0: CohClass,
        log_divisor: Option<LogDivisor>,
    ) -> Result<Self, RingError> {
        if rank_v0 == 0 {
            return Err(RingError::InvalidGeometry(
                "rank of V_0 must be at least 1".into(),
            ));
        }
        if !Arc::ptr_eq(&ring, total_chern_v0.ring()) && *ring != **total_chern_v0.ring() {
            return Err(RingError::RingMismatch);
        }
        if !total_chern_v0.constant_term().is_one() {
            return Err(RingError::InvalidGeometry(
                "total Chern class must have constant term 1".into(),
            ));
        }
        let bound = rank_v0.min(ring.top_degree());
        if total_chern_v0.max_degree().unwrap_or(0) > bound {
            return Err(RingError::InvalidGeometry(format!(
                "total Chern class has components above degree {bound}"
            )));
        }
        Ok(BaseGeometry {
            ring,
            rank_v0,
            total_chern_v0,
            log_divisor,
            kind: None,
            degree: None,
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    /// `n = dim X_0`.
    pub fn n(&self) -> u32 {
        self.ring.top_degree()
    }

    pub fn rank_v0(&self) -> u32 {
        self.rank_v0
    }

    /// Fiber dimension `r = rk V_0 - 1`.
    pub fn r(&self) -> u32 {
        self.rank_v0 - 1
    }

    pub fn total_chern_v0(&self) -> &CohClass {
        &self.total_chern_v0
    }

    pub fn log_divisor(&self) -> Option<LogDivisor> {
        self.log_divisor
    }

    pub fn kind(&self) -> Option<GeometryKind> {
        self.kind
    }

    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    /// Total Segre class `s(V_0) = c(V_0)^{-1}`.
    pub fn total_segre_v0(&self) -> CohClass {
        ring_inv_unit(&self.total_chern_v0).expect("validated unit constant term")
    }

    /// First generator of the base ring, the hyperplane class for the
    /// built-in geometries.
    pub fn hyperplane(&self) -> CohClass {
        CohClass::generator(&self.ring, 0)
    }
}

/// Base geometry for the supported families.
///
/// `d` is the degree of the hypersurface (or of the log divisor); it is
/// ignored for `ProjectiveSpace`.
pub fn chern_of_geometry(
    kind: GeometryKind,
    n: u32,
    d: Option<u32>,
) -> Result<BaseGeometry, RingError> {
    if n == 0 {
        return Err(RingError::InvalidGeometry(
            "dimension n must be at least 1".into(),
        ));
    }
    let degree = if kind.uses_degree() {
        match d {
            Some(d) if d >= 1 => Some(d),
            Some(d) => {
                return Err(RingError::InvalidGeometry(format!(
                    "degree must be at least 1, got {d}"
                )))
            }
            None => return Err(RingError::InvalidGeometry(format!("{kind} needs a degree"))),
        }
    } else {
        None
    };
    let integral = match kind {
        GeometryKind::HypersurfaceTangent => q(degree.unwrap_or(1) as i64),
        _ => Q::one(),
    };
    let ring = Arc::new(RingSpec::univariate("h", n, integral));
    let h = CohClass::generator(&ring, 0);
    let one = CohClass::one(&ring);
    let one_plus_h = &one + &h;
    let (ambient_power, divisor) = match kind {
        GeometryKind::ProjectiveSpace => (n + 1, None),
        GeometryKind::HypersurfaceTangent => (n + 2, degree),
        GeometryKind::LogProjective => (n + 1, degree),
    };
    let mut chern = one_plus_h.pow(ambient_power)?;
    if let Some(d) = divisor {
        let div = &one + &h.scale(&q(d as i64));
        chern = ring_mul(&chern, &ring_inv_unit(&div)?)?;
    }
    let log_divisor = match kind {
        GeometryKind::LogProjective => degree.map(|degree| LogDivisor { degree }),
        _ => None,
    };
    let mut geom = BaseGeometry::new(ring, n, chern, log_divisor)?;
    geom.kind = Some(kind);
    geom.degree = degree;
    Ok(geom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn p2() -> Arc<RingSpec> {
        Arc::new(RingSpec::univariate("h", 2, q(1)))
    }

    fn uni(ring: &Arc<RingSpec>, cs: &[i64]) -> CohClass {
        CohClass::from_univariate(ring, &cs.iter().map(|&c| q(c)).collect::<Vec<_>>())
    }

    #[test]
    fn products_truncate() {
        let r = p2();
        assert_eq!(
            ring_mul(&uni(&r, &[1, 1]), &uni(&r, &[1, -1])).unwrap(),
            uni(&r, &[1, 0, -1])
        );
        assert!(ring_mul(&uni(&r, &[0, 0, 1]), &uni(&r, &[0, 1]))
            .unwrap()
            .is_zero());
        assert_eq!(
            ring_mul(&uni(&r, &[1, 3]), &uni(&r, &[1, 3])).unwrap(),
            uni(&r, &[1, 6, 9])
        );
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = CohClass::one(&p2());
        let b = CohClass::one(&Arc::new(RingSpec::univariate("h", 3, q(1))));
        assert_eq!(ring_mul(&a, &b), Err(RingError::RingMismatch));
    }

    #[test]
    fn unit_inverses() {
        let r = p2();
        assert_eq!(
            ring_inv_unit(&uni(&r, &[1, 3, 3])).unwrap(),
            uni(&r, &[1, -3, 6])
        );
        assert_eq!(ring_inv_unit(&uni(&r, &[1])).unwrap(), uni(&r, &[1]));
        for d in [1, 2, 5, -7] {
            assert_eq!(
                ring_inv_unit(&uni(&r, &[1, d])).unwrap(),
                uni(&r, &[1, -d, d * d])
            );
        }
        assert!(matches!(
            ring_inv_unit(&uni(&r, &[2, 1])),
            Err(RingError::NotInvertible(_))
        ));
        assert!(matches!(
            ring_inv_unit(&uni(&r, &[0, 1])),
            Err(RingError::NotInvertible(_))
        ));
    }

    #[test]
    fn base_integration() {
        let r = p2();
        assert_eq!(integrate_base(&uni(&r, &[0, 0, 1])), q(1));
        assert_eq!(integrate_base(&uni(&r, &[0, 0, 6])), q(6));
        assert_eq!(integrate_base(&uni(&r, &[1, 5])), q(0));
    }

    #[test]
    fn geometries() {
        let pn = chern_of_geometry(GeometryKind::ProjectiveSpace, 2, None).unwrap();
        assert_eq!(pn.total_chern_v0(), &uni(pn.ring(), &[1, 3, 3]));
        assert_eq!(integrate_base(&uni(pn.ring(), &[0, 0, 1])), q(1));
        assert_eq!(pn.r(), 1);

        let plane = chern_of_geometry(GeometryKind::HypersurfaceTangent, 2, Some(1)).unwrap();
        assert_eq!(plane.total_chern_v0(), &uni(plane.ring(), &[1, 3, 3]));
        assert_eq!(integrate_base(&uni(plane.ring(), &[0, 0, 1])), q(1));

        let log = chern_of_geometry(GeometryKind::LogProjective, 2, Some(4)).unwrap();
        assert_eq!(log.total_chern_v0(), &uni(log.ring(), &[1, -1, 7]));
        assert_eq!(log.log_divisor(), Some(LogDivisor { degree: 4 }));
        assert_eq!(log.total_segre_v0(), uni(log.ring(), &[1, 1, -6]));

        let quintic = chern_of_geometry(GeometryKind::HypersurfaceTangent, 2, Some(5)).unwrap();
        assert_eq!(integrate_base(&uni(quintic.ring(), &[0, 0, 1])), q(5));
    }

    #[test]
    fn geometry_errors() {
        assert!(chern_of_geometry(GeometryKind::HypersurfaceTangent, 2, Some(0)).is_err());
        assert!(chern_of_geometry(GeometryKind::LogProjective, 2, None).is_err());
        assert!(chern_of_geometry(GeometryKind::ProjectiveSpace, 0, None).is_err());
        assert_eq!(
            "cube".parse::<GeometryKind>(),
            Err(RingError::UnknownKind("cube".into()))
        );
        assert_eq!(
            "log-pn".parse::<GeometryKind>(),
            Ok(GeometryKind::LogProjective)
        );
    }

    #[test]
    fn hypersurface_of_degree_one_is_projective_space() {
        for n in 1..=3 {
            let pn = chern_of_geometry(GeometryKind::ProjectiveSpace, n, None).unwrap();
            let hy = chern_of_geometry(GeometryKind::HypersurfaceTangent, n, Some(1)).unwrap();
            assert_eq!(pn.total_chern_v0().terms(), hy.total_chern_v0().terms());
            assert_eq!(pn.ring().integral_values(), hy.ring().integral_values());
        }
    }

    #[test]
    fn ring_spec_validation() {
        let gens = vec![Generator::new("a", 1, 2), Generator::new("b", 1, 2)];
        let mut vals = BTreeMap::new();
        vals.insert(vec![1, 1], q(1));
        let spec = RingSpec::new(gens.clone(), 2, vals.clone()).unwrap();
        assert_eq!(spec.monomials_of_degree(1), vec![vec![0, 1], vec![1, 0]]);
        vals.insert(vec![1, 0], q(1));
        assert!(RingSpec::new(gens.clone(), 2, vals).is_err());
        assert!(RingSpec::new(gens, 2, BTreeMap::new()).is_err());
    }

    #[test]
    fn display() {
        let r = p2();
        assert_eq!(uni(&r, &[1, -3, 6]).to_string(), "1 - 3h + 6h^2");
        assert_eq!(CohClass::zero(&r).to_string(), "0");
    }

    fn p1xp1() -> Arc<RingSpec> {
        let mut vals = BTreeMap::new();
        vals.insert(vec![1, 1], q(1));
        Arc::new(
            RingSpec::new(
                vec![Generator::new("a", 1, 2), Generator::new("b", 1, 2)],
                2,
                vals,
            )
            .unwrap(),
        )
    }

    fn class_strategy() -> impl Strategy<Value = CohClass> {
        prop::collection::vec(-5i64..=5, 4).prop_map(|cs| {
            let ring = p1xp1();
            let mut c = CohClass::zero(&ring);
            for (exps, v) in [vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]
                .into_iter()
                .zip(cs)
            {
                c = &c + &CohClass::monomial(&ring, exps, q(v));
            }
            c
        })
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(a in class_strategy(), b in class_strategy(), c in class_strategy()) {
            prop_assert_eq!(ring_mul(&a, &b).unwrap(), ring_mul(&b, &a).unwrap());
            let ab_c = ring_mul(&ring_mul(&a, &b).unwrap(), &c).unwrap();
            let a_bc = ring_mul(&a, &ring_mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
        }

        #[test]
        fn unit_times_inverse_is_one(mut c in class_strategy()) {
            let ring = c.ring().clone();
            let shift = &CohClass::one(&ring) - &CohClass::constant(&ring, c.constant_term());
            c = &c + &shift;
            let s = ring_inv_unit(&c).unwrap();
            prop_assert_eq!(ring_mul(&c, &s).unwrap(), CohClass::one(&ring));
        }

        #[test]
        fn integration_is_linear(x in class_strategy(), y in class_strategy(), a in -9i64..=9, b in -9i64..=9) {
            let lhs = integrate_base(&(&x.scale(&q(a)) + &y.scale(&q(b))));
            let rhs = q(a) * integrate_base(&x) + q(b) * integrate_base(&y);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
