use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::poly::{accumulate, add_exp};
use super::series::Support;
use super::{
    is_lex_positive, Exponent, Grading, LaurentPoly, SeriesError, SupportBound, TruncatedSeries,
    Window,
};
use crate::par::{map_chunks, Execution};
use crate::rational::Q;

/// Series with all terms of weight `<= cap` known exactly, sorted by weight.
struct Graded {
    terms: Vec<(Exponent, i64, Q)>,
}

impl Graded {
    fn one(nvars: usize) -> Self {
        Graded {
            terms: vec![(vec![0; nvars], 0, Q::one())],
        }
    }

    fn from_map(map: HashMap<Exponent, Q>, grading: &Grading) -> Self {
        let mut terms: Vec<(Exponent, i64, Q)> = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| {
                let w = grading.weight(&e);
                (e, w, c)
            })
            .collect();
        terms.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        Graded { terms }
    }

    fn mul(&self, other: &Graded, grading: &Grading, cap: i64, exec: Execution) -> Graded {
        let partials = map_chunks(exec, &self.terms, 16, |chunk| {
            let mut acc: HashMap<Exponent, Q> = HashMap::new();
            for (ea, wa, ca) in chunk {
                for (eb, wb, cb) in &other.terms {
                    if wa + wb > cap {
                        break;
                    }
                    accumulate(&mut acc, add_exp(ea, eb), ca * cb);
                }
            }
            acc
        });
        let mut iter = partials.into_iter();
        let mut total = iter.next().unwrap_or_default();
        for part in iter {
            for (e, c) in part {
                accumulate(&mut total, e, c);
            }
        }
        Graded::from_map(total, grading)
    }

    fn add_assign(&mut self, other: &Graded, grading: &Grading) {
        let mut map: HashMap<Exponent, Q> = HashMap::new();
        for (e, _, c) in self.terms.drain(..).chain(other.terms.iter().cloned()) {
            accumulate(&mut map, e, c);
        }
        *self = Graded::from_map(map, grading);
    }
}

/// `(1 + tail)^{-1}` up to weight `cap`; every tail term has positive weight.
fn geometric_inverse(
    tail: &Graded,
    nvars: usize,
    grading: &Grading,
    cap: i64,
    exec: Execution,
) -> Graded {
    let neg_tail = Graded {
        terms: tail
            .terms
            .iter()
            .map(|(e, w, c)| (e.clone(), *w, -c))
            .collect(),
    };
    let mut acc = Graded::one(nvars);
    let mut power = Graded::one(nvars);
    loop {
        power = power.mul(&neg_tail, grading, cap, exec);
        if power.terms.is_empty() {
            return acc;
        }
        acc.add_assign(&power, grading);
    }
}

type Normalized = (Exponent, Q, Vec<(Exponent, Q)>);

/// Splits `p` as `c·t^m·(1 + tail)` with `t^m` the lex-least monomial.
fn normalize(p: &LaurentPoly<Q>) -> Option<Normalized> {
    let (m, c) = p.lex_least()?;
    let inv = c.recip();
    let tail = p
        .terms()
        .iter()
        .skip(1)
        .map(|(e, x)| (e.iter().zip(m).map(|(a, b)| a - b).collect(), x * &inv))
        .collect();
    Some((m.clone(), c.clone(), tail))
}

fn graded_of(terms: &[(Exponent, Q)], grading: &Grading, cap: i64) -> Graded {
    let mut out: Vec<(Exponent, i64, Q)> = terms
        .iter()
        .map(|(e, c)| (e.clone(), grading.weight(e), c.clone()))
        .filter(|t| t.1 <= cap)
        .collect();
    out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    Graded { terms: out }
}

fn finish(
    window: &Window,
    shift: &[i32],
    scalar: &Q,
    body: Graded,
    support: SupportBound,
) -> TruncatedSeries {
    let terms: BTreeMap<Exponent, Q> = body
        .terms
        .into_iter()
        .map(|(e, _, c)| (add_exp(&e, shift), c * scalar))
        .filter(|(e, _)| window.contains(e))
        .collect();
    TruncatedSeries::from_parts(window.clone(), terms, Support::Bounded(support))
}

/// Inverse of `leading·(1 + tail)` on `window`, sequential kernel.
pub fn expand_geometric(
    leading: &LaurentPoly<Q>,
    tail: &LaurentPoly<Q>,
    window: &Window,
) -> Result<TruncatedSeries, SeriesError> {
    expand_geometric_with(leading, tail, window, Execution::Sequential)
}

/// Inverse of `leading·(1 + tail)` on `window`.
///
/// `leading` must be a single monomial and every monomial of `tail` must be
/// lexicographically positive.
pub fn expand_geometric_with(
    leading: &LaurentPoly<Q>,
    tail: &LaurentPoly<Q>,
    window: &Window,
    exec: Execution,
) -> Result<TruncatedSeries, SeriesError> {
    let nvars = window.nvars();
    for nv in [leading.nvars(), tail.nvars()] {
        if nv != nvars {
            return Err(SeriesError::NvarsMismatch {
                expected: nvars,
                found: nv,
            });
        }
    }
    if leading.len() != 1 {
        return Err(SeriesError::NotExpandable(
            "leading part must be a single nonzero monomial".into(),
        ));
    }
    let (lead_e, lead_c) = leading.lex_least().expect("one term");
    if let Some(bad) = tail.terms().keys().find(|e| !is_lex_positive(e)) {
        return Err(SeriesError::NotExpandable(format!(
            "tail monomial {bad:?} is not lexicographically positive"
        )));
    }
    let gens: Vec<Exponent> = tail.terms().keys().cloned().collect();
    let grading = Grading::adapted(nvars, &gens)?;
    let shift: Exponent = lead_e.iter().map(|x| -x).collect();
    let support = SupportBound::new(shift.clone(), gens)?;
    let cap = window.max_weight(&grading) - grading.weight(&shift);
    let tail_terms: Vec<(Exponent, Q)> = tail
        .terms()
        .iter()
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect();
    let body = if cap < 0 {
        Graded { terms: Vec::new() }
    } else {
        geometric_inverse(
            &graded_of(&tail_terms, &grading, cap),
            nvars,
            &grading,
            cap,
            exec,
        )
    };
    Ok(finish(window, &shift, &lead_c.recip(), body, support))
}

/// Expansion of `∏ num_i / den_i` on `window`, sequential kernel.
pub fn expand_rational_product(
    factors: &[(LaurentPoly<Q>, LaurentPoly<Q>)],
    window: &Window,
) -> Result<TruncatedSeries, SeriesError> {
    expand_rational_product_with(factors, window, Execution::Sequential)
}

/// Expansion of `∏ num_i / den_i` on `window` under `t_1 << ... << t_k << 1`.
///
/// Each factor is normalised by the lex-least monomials of its numerator
/// and denominator, expanded at a weight cap large enough for the whole
/// window, and the factors are multiplied at that cap, so every stored
/// coefficient is exact.
pub fn expand_rational_product_with(
    factors: &[(LaurentPoly<Q>, LaurentPoly<Q>)],
    window: &Window,
    exec: Execution,
) -> Result<TruncatedSeries, SeriesError> {
    let nvars = window.nvars();
    let mut shift = vec![0i32; nvars];
    let mut scalar = Q::one();
    let mut gens: Vec<Exponent> = Vec::new();
    let mut parts = Vec::with_capacity(factors.len());
    for (num, den) in factors {
        for nv in [num.nvars(), den.nvars()] {
            if nv != nvars {
                return Err(SeriesError::NvarsMismatch {
                    expected: nvars,
                    found: nv,
                });
            }
        }
        let (dm, dc, dtail) =
            normalize(den).ok_or_else(|| SeriesError::NotExpandable("zero denominator".into()))?;
        let Some((nm, nc, ntail)) = normalize(num) else {
            return Ok(TruncatedSeries::zero(window.clone()));
        };
        for (i, s) in shift.iter_mut().enumerate() {
            *s += nm[i] - dm[i];
        }
        scalar = scalar * nc / dc;
        gens.extend(ntail.iter().map(|t| t.0.clone()));
        gens.extend(dtail.iter().map(|t| t.0.clone()));
        parts.push((ntail, dtail));
    }
    let grading = Grading::adapted(nvars, &gens)?;
    let support = SupportBound::new(shift.clone(), gens)?;
    let cap = window.max_weight(&grading) - grading.weight(&shift);
    if cap < 0 {
        return Ok(finish(
            window,
            &shift,
            &scalar,
            Graded { terms: Vec::new() },
            support,
        ));
    }
    let mut body = Graded::one(nvars);
    for (ntail, dtail) in &parts {
        let inv = geometric_inverse(&graded_of(dtail, &grading, cap), nvars, &grading, cap, exec);
        let mut num = graded_of(ntail, &grading, cap);
        num.add_assign(&Graded::one(nvars), &grading);
        body = body
            .mul(&num, &grading, cap, exec)
            .mul(&inv, &grading, cap, exec);
    }
    Ok(finish(window, &shift, &scalar, body, support))
}
