use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::poly::{accumulate, add_exp};
use super::{Exponent, Grading, LaurentPoly, SeriesError, SupportBound, Window};
use crate::par::{map_chunks, Execution};
use crate::rational::Q;

/// What is known about the support of the full series behind a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Support {
    /// Nothing: products involving this series cannot be certified except
    /// against a finite polynomial whose shifts stay inside the window.
    Unknown,
    /// The full series is zero.
    Empty,
    Bounded(SupportBound),
}

impl Support {
    fn product(&self, other: &Support) -> Support {
        match (self, other) {
            (Support::Empty, _) | (_, Support::Empty) => Support::Empty,
            (Support::Bounded(a), Support::Bounded(b)) => Support::Bounded(a.product(b)),
            _ => Support::Unknown,
        }
    }
}

/// Restriction of an iterated Laurent series to a finite window.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    window: Window,
    support: Support,
    terms: BTreeMap<Exponent, Q>,
}

impl TruncatedSeries {
    /// Builds a windowed series; terms outside the window are rejected.
    /// The caller vouches for `support`.
    pub fn new(
        window: Window,
        terms: impl IntoIterator<Item = (Exponent, Q)>,
        support: Support,
    ) -> Result<Self, SeriesError> {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != window.nvars() {
                return Err(SeriesError::NvarsMismatch {
                    expected: window.nvars(),
                    found: e.len(),
                });
            }
            if !window.contains(&e) {
                return Err(SeriesError::InvalidWindow(format!(
                    "term {e:?} lies outside the window"
                )));
            }
            if !c.is_zero() {
                *map.entry(e).or_insert_with(Q::zero) += c;
            }
        }
        map.retain(|_, c: &mut Q| !c.is_zero());
        if let Support::Bounded(b) = &support {
            if b.nvars() != window.nvars() {
                return Err(SeriesError::NvarsMismatch {
                    expected: window.nvars(),
                    found: b.nvars(),
                });
            }
        }
        if support == Support::Empty && !map.is_empty() {
            return Err(SeriesError::InvalidSupport(
                "nonzero terms with empty support".into(),
            ));
        }
        Ok(TruncatedSeries {
            window,
            support,
            terms: map,
        })
    }

    /// Zero series known to vanish identically.
    pub fn zero(window: Window) -> Self {
        TruncatedSeries {
            window,
            support: Support::Empty,
            terms: BTreeMap::new(),
        }
    }

    /// A polynomial viewed through a window.
    pub fn from_poly(poly: &LaurentPoly<Q>, window: Window) -> Self {
        let support = match poly.support_bound() {
            Some(b) => Support::Bounded(b),
            None => Support::Empty,
        };
        TruncatedSeries {
            terms: poly.restrict(&window).into_terms(),
            window,
            support,
        }
    }

    pub(crate) fn from_parts(
        window: Window,
        terms: BTreeMap<Exponent, Q>,
        support: Support,
    ) -> Self {
        TruncatedSeries {
            window,
            support,
            terms,
        }
    }

    pub fn nvars(&self) -> usize {
        self.window.nvars()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Q> {
        &self.terms
    }

    /// Stored coefficient, zero if absent; fails outside the window.
    pub fn coeff(&self, exponent: &[i32]) -> Result<Q, SeriesError> {
        if !self.window.contains(exponent) {
            return Err(SeriesError::CoefficientNotDetermined(exponent.to_vec()));
        }
        Ok(self.terms.get(exponent).cloned().unwrap_or_else(Q::zero))
    }

    /// Same series seen through a smaller window.
    pub fn restrict(&self, window: &Window) -> Result<Self, SeriesError> {
        if !self.window.contains_window(window) {
            return Err(SeriesError::TruncationTooNarrow(
                "requested window is not inside the stored window".into(),
            ));
        }
        Ok(TruncatedSeries {
            window: window.clone(),
            support: self.support.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| window.contains(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    /// Whether the stored terms agree with `poly` on the whole window.
    pub fn agrees_with(&self, poly: &LaurentPoly<Q>) -> bool {
        poly.restrict(&self.window).terms() == &self.terms
    }

    pub fn to_poly(&self) -> LaurentPoly<Q> {
        LaurentPoly::from_terms(
            self.nvars(),
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone())),
        )
    }
}

/// Either side of a Cauchy product.
#[derive(Clone, Copy, Debug)]
pub enum Operand<'a> {
    Poly(&'a LaurentPoly<Q>),
    Series(&'a TruncatedSeries),
}

impl<'a> From<&'a LaurentPoly<Q>> for Operand<'a> {
    fn from(p: &'a LaurentPoly<Q>) -> Self {
        Operand::Poly(p)
    }
}

impl<'a> From<&'a TruncatedSeries> for Operand<'a> {
    fn from(s: &'a TruncatedSeries) -> Self {
        Operand::Series(s)
    }
}

impl Operand<'_> {
    fn nvars(&self) -> usize {
        match self {
            Operand::Poly(p) => p.nvars(),
            Operand::Series(s) => s.nvars(),
        }
    }

    fn terms(&self) -> &BTreeMap<Exponent, Q> {
        match self {
            Operand::Poly(p) => p.terms(),
            Operand::Series(s) => s.terms(),
        }
    }

    fn support(&self) -> Support {
        match self {
            Operand::Poly(p) => match p.support_bound() {
                Some(b) => Support::Bounded(b),
                None => Support::Empty,
            },
            Operand::Series(s) => s.support.clone(),
        }
    }
}

/// Cauchy product of `a` and `b` on `out`, sequential kernel.
pub fn cauchy_mul<'a>(
    a: impl Into<Operand<'a>>,
    b: impl Into<Operand<'a>>,
    out: &Window,
) -> Result<TruncatedSeries, SeriesError> {
    cauchy_mul_with(a, b, out, Execution::Sequential)
}

/// Cauchy product of `a` and `b` on `out`.
///
/// Every coefficient in `out` is proven to depend only on stored terms:
/// finite polynomials contribute their exact support, and windowed series
/// contribute through their [`SupportBound`]. If the proof fails the call
/// returns [`SeriesError::TruncationTooNarrow`].
pub fn cauchy_mul_with<'a>(
    a: impl Into<Operand<'a>>,
    b: impl Into<Operand<'a>>,
    out: &Window,
    exec: Execution,
) -> Result<TruncatedSeries, SeriesError> {
    let (a, b) = (a.into(), b.into());
    for nv in [a.nvars(), b.nvars()] {
        if nv != out.nvars() {
            return Err(SeriesError::NvarsMismatch {
                expected: out.nvars(),
                found: nv,
            });
        }
    }
    let support = a.support().product(&b.support());
    if support == Support::Empty {
        return Ok(TruncatedSeries::zero(out.clone()));
    }
    match (a, b) {
        (Operand::Poly(_), Operand::Poly(_)) => {}
        (Operand::Poly(p), Operand::Series(s)) | (Operand::Series(s), Operand::Poly(p)) => {
            certify_poly_series(p, s, out)?
        }
        (Operand::Series(x), Operand::Series(y)) => certify_series_series(x, y, out)?,
    }
    let terms = convolve(a.terms(), b.terms(), out, exec);
    Ok(TruncatedSeries::from_parts(out.clone(), terms, support))
}

fn too_narrow(what: &str) -> SeriesError {
    SeriesError::TruncationTooNarrow(what.to_string())
}

/// Box of exponents a factor must cover, or `None` if no term of the factor
/// can reach `out`.
type Needed = Option<Vec<(i64, i64)>>;

fn check_inside(needed: &Needed, window: &Window, what: &str) -> Result<(), SeriesError> {
    if let Some(ranges) = needed {
        if ranges.iter().any(|(lo, hi)| lo > hi) {
            return Ok(());
        }
        for (m, (lo, hi)) in ranges.iter().enumerate() {
            if *lo < window.lo()[m] as i64 || *hi > window.hi()[m] as i64 {
                return Err(too_narrow(what));
            }
        }
    }
    Ok(())
}

fn intersect(a: Vec<(i64, i64)>, b: &[(i64, i64)]) -> Vec<(i64, i64)> {
    a.into_iter()
        .zip(b)
        .map(|((l1, h1), (l2, h2))| (l1.max(*l2), h1.min(*h2)))
        .collect()
}

fn shifted_out(out: &Window, shift: &[i32]) -> Vec<(i64, i64)> {
    (0..out.nvars())
        .map(|m| {
            (
                out.lo()[m] as i64 - shift[m] as i64,
                out.hi()[m] as i64 - shift[m] as i64,
            )
        })
        .collect()
}

/// Exponents `b` of the series with `W·(b - base) <= budget` as a box, or
/// `None` when the budget is negative (no admissible `b`).
fn cone_box(bound: &SupportBound, grading: &Grading, budget: i64) -> Needed {
    if budget < 0 {
        return None;
    }
    Some(
        bound
            .monoid_box(grading, budget)
            .into_iter()
            .zip(bound.base())
            .map(|((l, h), b)| (l + *b as i64, h + *b as i64))
            .collect(),
    )
}

fn certify_poly_series(
    p: &LaurentPoly<Q>,
    s: &TruncatedSeries,
    out: &Window,
) -> Result<(), SeriesError> {
    let bound = match &s.support {
        Support::Empty => return Ok(()),
        Support::Bounded(b) => Some(b),
        Support::Unknown => None,
    };
    let grading = match bound {
        Some(b) => Some(Grading::adapted(s.nvars(), b.generators())?),
        None => None,
    };
    for e in p.terms().keys() {
        let needed = shifted_out(out, e);
        let needed = match (bound, &grading) {
            (Some(b), Some(g)) => {
                let out_max = out.max_weight(g) - g.weight(e);
                cone_box(b, g, out_max - g.weight(b.base())).map(|cone| intersect(needed, &cone))
            }
            _ => Some(needed),
        };
        check_inside(&needed, &s.window, "series window misses a product term")?;
    }
    Ok(())
}

fn certify_series_series(
    x: &TruncatedSeries,
    y: &TruncatedSeries,
    out: &Window,
) -> Result<(), SeriesError> {
    let (bx, by) = match (&x.support, &y.support) {
        (Support::Bounded(bx), Support::Bounded(by)) => (bx, by),
        _ => {
            return Err(too_narrow(
                "product of series needs support bounds on both sides",
            ))
        }
    };
    let mut gens = bx.generators().to_vec();
    gens.extend(by.generators().iter().cloned());
    let grading = Grading::adapted(out.nvars(), &gens)?;
    let budget = out.max_weight(&grading) - grading.weight(bx.base()) - grading.weight(by.base());
    for (this, bt, bo) in [(x, bx, by), (y, by, bx)] {
        let Some(own) = cone_box(bt, &grading, budget) else {
            return Ok(());
        };
        // a = e - b with b in the other cone.
        let other = cone_box(bo, &grading, budget).expect("budget is non-negative");
        let from_other: Vec<(i64, i64)> = (0..out.nvars())
            .map(|m| {
                (
                    out.lo()[m] as i64 - other[m].1,
                    out.hi()[m] as i64 - other[m].0,
                )
            })
            .collect();
        let needed = Some(intersect(own, &from_other));
        check_inside(&needed, &this.window, "series window misses a product term")?;
    }
    Ok(())
}

fn convolve(
    a: &BTreeMap<Exponent, Q>,
    b: &BTreeMap<Exponent, Q>,
    out: &Window,
    exec: Execution,
) -> BTreeMap<Exponent, Q> {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let left: Vec<(&Exponent, &Q)> = large.iter().collect();
    let partials = map_chunks(exec, &left, 16, |chunk| {
        let mut acc: HashMap<Exponent, Q> = HashMap::new();
        for (ea, ca) in chunk {
            for (eb, cb) in small {
                let e = add_exp(ea, eb);
                if out.contains(&e) {
                    accumulate(&mut acc, e, *ca * cb);
                }
            }
        }
        acc
    });
    let mut total: BTreeMap<Exponent, Q> = BTreeMap::new();
    for part in partials {
        for (e, c) in part {
            *total.entry(e).or_insert_with(Q::zero) += c;
        }
    }
    total.retain(|_, c| !c.is_zero());
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(nvars: usize, terms: &[(&[i32], i64)]) -> LaurentPoly<Q> {
        LaurentPoly::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), q(*c))))
    }

    #[test]
    fn polynomial_product() {
        let a = p(1, &[(&[0], 1), (&[1], 1)]);
        let b = p(1, &[(&[0], 1), (&[1], -1)]);
        let w = Window::uniform(1, -2, 2).unwrap();
        let c = cauchy_mul(&a, &b, &w).unwrap();
        assert!(c.agrees_with(&p(1, &[(&[0], 1), (&[2], -1)])));
    }

    #[test]
    fn identity_restricts() {
        let w = Window::from_intervals(&[(0, 5), (-5, 0)]).unwrap();
        let geo = TruncatedSeries::new(
            w.clone(),
            (0..=5).map(|k| (vec![k, -k], q(1))),
            Support::Bounded(SupportBound::new(vec![0, 0], vec![vec![1, -1]]).unwrap()),
        )
        .unwrap();
        let small = Window::from_intervals(&[(0, 3), (-3, 0)]).unwrap();
        let prod = cauchy_mul(&geo, &LaurentPoly::one(2), &small).unwrap();
        assert_eq!(prod.terms(), geo.restrict(&small).unwrap().terms());
    }

    #[test]
    fn telescoping() {
        let w = Window::from_intervals(&[(0, 6), (-6, 0)]).unwrap();
        let geo = TruncatedSeries::new(
            w.clone(),
            (0..=6).map(|k| (vec![k, -k], q(1))),
            Support::Bounded(SupportBound::new(vec![0, 0], vec![vec![1, -1]]).unwrap()),
        )
        .unwrap();
        let factor = p(2, &[(&[0, 0], 1), (&[1, -1], -1)]);
        let prod = cauchy_mul(&geo, &factor, &w).unwrap();
        assert!(prod.agrees_with(&LaurentPoly::one(2)));
        for exec in [Execution::Sequential, Execution::Parallel] {
            let again = cauchy_mul_with(&factor, &geo, &w, exec).unwrap();
            assert_eq!(again.terms(), prod.terms());
        }
    }

    #[test]
    fn narrow_windows_fail_loudly() {
        let w = Window::from_intervals(&[(0, 2), (-2, 0)]).unwrap();
        let geo = TruncatedSeries::new(
            w,
            (0..=2).map(|k| (vec![k, -k], q(1))),
            Support::Bounded(SupportBound::new(vec![0, 0], vec![vec![1, -1]]).unwrap()),
        )
        .unwrap();
        let wide = Window::from_intervals(&[(0, 4), (-4, 0)]).unwrap();
        let err = cauchy_mul(&geo, &LaurentPoly::one(2), &wide).unwrap_err();
        assert!(err.to_string().contains("truncation too narrow"));
        let err = cauchy_mul(&geo, &geo, &wide).unwrap_err();
        assert!(err.to_string().contains("truncation too narrow"));
        let unknown =
            TruncatedSeries::new(geo.window().clone(), geo.terms().clone(), Support::Unknown)
                .unwrap();
        assert!(cauchy_mul(&unknown, &geo, geo.window()).is_err());
    }

    #[test]
    fn coefficient_queries() {
        let w = Window::uniform(1, 0, 2).unwrap();
        let s = TruncatedSeries::from_poly(&p(1, &[(&[0], 1), (&[2], -1)]), w);
        assert_eq!(s.coeff(&[0]).unwrap(), q(1));
        assert_eq!(s.coeff(&[1]).unwrap(), q(0));
        let err = s.coeff(&[3]).unwrap_err();
        assert!(err.to_string().contains("coefficient not determined"));
    }

    #[test]
    fn construction_checks() {
        let w = Window::uniform(1, 0, 2).unwrap();
        assert!(TruncatedSeries::new(w.clone(), [(vec![3], q(1))], Support::Unknown).is_err());
        assert!(TruncatedSeries::new(w.clone(), [(vec![1, 1], q(1))], Support::Unknown).is_err());
        assert!(TruncatedSeries::new(w, [(vec![1], q(1))], Support::Empty).is_err());
    }
}
