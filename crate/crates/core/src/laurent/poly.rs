use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Exponent, SupportBound, Window};
use crate::coeff::Coefficient;
use crate::par::{map_chunks, Execution};
use crate::rational::Q;

/// Sparse Laurent polynomial in `t_1, ..., t_k` with coefficients in `C`.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<C> {
    nvars: usize,
    terms: BTreeMap<Exponent, C>,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exponent: Exponent, coeff: C) -> Self {
        let mut p = LaurentPoly::zero(exponent.len());
        p.add_term(exponent, coeff);
        p
    }

    pub fn constant(nvars: usize, coeff: C) -> Self {
        LaurentPoly::monomial(vec![0; nvars], coeff)
    }

    /// Sums duplicate exponents and drops zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, C)>) -> Self {
        let mut p = LaurentPoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, C> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exponent, C> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, exponent: &[i32]) -> Option<&C> {
        self.terms.get(exponent)
    }

    pub fn add_term(&mut self, exponent: Exponent, coeff: C) {
        assert_eq!(exponent.len(), self.nvars, "exponent length mismatch");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&coeff);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, factor: &Q) -> Self {
        LaurentPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| (e.clone(), c.scale(factor))),
        )
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scale_by(&self, factor: &C) -> Self {
        LaurentPoly::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), c.mul_ref(factor))),
        )
    }

    /// Multiplies by `t^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        assert_eq!(shift.len(), self.nvars);
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exp(e, shift), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_with(other, Execution::Sequential)
    }

    /// Product, with the outer loop split across threads for large inputs.
    pub fn mul_with(&self, other: &Self, exec: Execution) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let left: Vec<(&Exponent, &C)> = self.terms.iter().collect();
        let partials = map_chunks(exec, &left, 8, |chunk| {
            let mut acc: HashMap<Exponent, C> = HashMap::new();
            for (ea, ca) in chunk {
                for (eb, cb) in &other.terms {
                    let prod = ca.mul_ref(cb);
                    accumulate(&mut acc, add_exp(ea, eb), prod);
                }
            }
            acc
        });
        merge_partials(self.nvars, partials)
    }

    /// `self^k`. The zero polynomial has no coefficient context for `0^0`
    /// and yields zero for every `k`; use [`LaurentPoly::pow_with_one`] when
    /// that matters.
    pub fn pow(&self, k: u32) -> Self {
        match self.terms.values().next().map(|c| c.one_like()) {
            Some(one) => self.pow_with_one(k, &one),
            None => self.clone(),
        }
    }

    /// `self^k` with `one` supplying the identity coefficient.
    pub fn pow_with_one(&self, k: u32, one: &C) -> Self {
        let mut acc = LaurentPoly::constant(self.nvars, one.clone());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn map_coeffs<D: Coefficient>(&self, mut f: impl FnMut(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| (e.clone(), f(c))),
        )
    }

    pub fn min_exponent(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[var]).min()
    }

    pub fn max_exponent(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// All exponents non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|x| *x >= 0))
    }

    /// Lexicographically least term: the dominant one when
    /// `t_1 << ... << t_k << 1`.
    pub fn lex_least(&self) -> Option<(&Exponent, &C)> {
        self.terms.iter().next()
    }

    /// Coefficient of `t_var^exp`, as a polynomial whose `var` exponent is 0.
    pub fn extract(&self, var: usize, exp: i32) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[var] == exp)
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[var] = 0;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// `[t_var^target](self * other)` without forming the full product.
    pub fn extract_product(&self, other: &Self, var: usize, target: i32) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut by_exp: BTreeMap<i32, Vec<(&Exponent, &C)>> = BTreeMap::new();
        for (e, c) in &other.terms {
            by_exp.entry(e[var]).or_default().push((e, c));
        }
        let mut acc: HashMap<Exponent, C> = HashMap::new();
        for (ea, ca) in &self.terms {
            if let Some(partners) = by_exp.get(&(target - ea[var])) {
                for (eb, cb) in partners {
                    let mut e = add_exp(ea, eb);
                    e[var] = 0;
                    accumulate(&mut acc, e, ca.mul_ref(cb));
                }
            }
        }
        merge_partials(self.nvars, vec![acc])
    }

    /// Terms inside `window`.
    pub fn restrict(&self, window: &Window) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| window.contains(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `t_i -> images[i]`; `None` if some exponent is negative.
    pub fn substitute(&self, images: &[LaurentPoly<C>], one: &C) -> Option<Self> {
        assert_eq!(images.len(), self.nvars);
        let target_nvars = images.first().map_or(0, |p| p.nvars);
        let mut out = LaurentPoly::zero(target_nvars);
        let mut power_cache: Vec<Vec<LaurentPoly<C>>> = images
            .iter()
            .map(|p| vec![LaurentPoly::constant(p.nvars, one.clone())])
            .collect();
        for (e, c) in &self.terms {
            let mut term = LaurentPoly::constant(target_nvars, c.clone());
            for (i, &x) in e.iter().enumerate() {
                if x < 0 {
                    return None;
                }
                while power_cache[i].len() <= x as usize {
                    let next = power_cache[i].last().unwrap().mul(&images[i]);
                    power_cache[i].push(next);
                }
                term = term.mul(&power_cache[i][x as usize]);
            }
            out = &out + &term;
        }
        Some(out)
    }
}

impl LaurentPoly<Q> {
    pub fn one(nvars: usize) -> Self {
        LaurentPoly::constant(nvars, Q::one())
    }

    /// `t_var` in `nvars` variables (0-based index).
    pub fn variable(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        LaurentPoly::monomial(e, Q::one())
    }

    pub fn coeff_or_zero(&self, exponent: &[i32]) -> Q {
        self.terms.get(exponent).cloned().unwrap_or_else(Q::zero)
    }

    /// Support certificate for this finite polynomial.
    pub fn support_bound(&self) -> Option<SupportBound> {
        SupportBound::of_points(self.terms.keys())
    }
}

pub(crate) fn add_exp(a: &[i32], b: &[i32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn accumulate<C: Coefficient>(acc: &mut HashMap<Exponent, C>, e: Exponent, c: C) {
    match acc.entry(e) {
        std::collections::hash_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::hash_map::Entry::Occupied(mut o) => o.get_mut().add_assign_ref(&c),
    }
}

fn merge_partials<C: Coefficient>(
    nvars: usize,
    partials: Vec<HashMap<Exponent, C>>,
) -> LaurentPoly<C> {
    let mut iter = partials.into_iter();
    let mut total = iter.next().unwrap_or_default();
    for part in iter {
        for (e, c) in part {
            accumulate(&mut total, e, c);
        }
    }
    LaurentPoly {
        nvars,
        terms: total.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
    }
}

impl<C: Coefficient> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn add(self, rhs: Self) -> LaurentPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }
}

impl<C: Coefficient> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn neg(self) -> LaurentPoly<C> {
        self.map_coeffs(|c| c.neg())
    }
}

impl<C: Coefficient> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        LaurentPoly::mul(self, rhs)
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (v, x) in e.iter().enumerate() {
                match *x {
                    0 => {}
                    1 => write!(f, "*t{}", v + 1)?,
                    x => write!(f, "*t{}^{}", v + 1, x)?,
                }
            }
        }
        Ok(())
    }
}

impl<C: fmt::Debug> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaurentPoly")
            .field("nvars", &self.nvars)
            .field("terms", &self.terms)
            .finish()
    }
}
