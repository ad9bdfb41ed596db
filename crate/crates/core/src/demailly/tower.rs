use num_traits::One;

use super::{TowerConfig, TowerError};
use crate::coeff::Coefficient;
use crate::graded_ring::{integrate_base, BaseGeometry, CohClass};
use crate::laurent::LaurentPoly;
use crate::par::Execution;
use crate::rational::{binomial, pow_q, q, Q};

/// `s_{1/t_var}(V_0) = Σ_j s_j(V_0) t_var^{-j}` in `kappa` variables
/// (`var` is 1-based).
pub fn segre_gen(
    geom: &BaseGeometry,
    kappa: usize,
    var: usize,
) -> Result<LaurentPoly<CohClass>, TowerError> {
    if var == 0 || var > kappa {
        return Err(TowerError::IndexOutOfRange(format!(
            "variable t_{var} with kappa = {kappa}"
        )));
    }
    let segre = geom.total_segre_v0();
    let mut out = LaurentPoly::zero(kappa);
    for j in 0..=geom.n() {
        let mut e = vec![0; kappa];
        e[var - 1] = -(j as i32);
        out.add_term(e, segre.degree_part(j));
    }
    Ok(out)
}

/// `I(t) = ∫_{X_0} f(t) s_{1/t_1}(V_0) ... s_{1/t_κ}(V_0)`.
pub fn base_integral(
    f: &LaurentPoly<CohClass>,
    geom: &BaseGeometry,
    cfg: &TowerConfig,
) -> Result<LaurentPoly<Q>, TowerError> {
    base_integral_with(f, geom, cfg, Execution::Sequential)
}

pub fn base_integral_with(
    f: &LaurentPoly<CohClass>,
    geom: &BaseGeometry,
    cfg: &TowerConfig,
    exec: Execution,
) -> Result<LaurentPoly<Q>, TowerError> {
    cfg.check_geometry(geom)?;
    cfg.check_nvars(f.nvars())?;
    if !f.is_polynomial() {
        return Err(TowerError::NotPolynomial);
    }
    if let Some(c) = f
        .terms()
        .values()
        .find(|c| !c.same_ring(&geom.hyperplane()))
    {
        let _ = c;
        return Err(crate::graded_ring::RingError::RingMismatch.into());
    }
    let mut acc = f.clone();
    for var in 1..=cfg.kappa() {
        acc = acc.mul_with(&segre_gen(geom, cfg.kappa(), var)?, exec);
    }
    Ok(LaurentPoly::from_terms(
        cfg.kappa(),
        acc.terms()
            .iter()
            .map(|(e, c)| (e.clone(), integrate_base(c))),
    ))
}

/// `φ(x, y) = (1 - x) Σ_{k=0}^{N} (2x - y)^k` in the variables `(x, y)`.
pub fn phi_poly(order: u32) -> LaurentPoly<Q> {
    let mut sum = LaurentPoly::zero(2);
    for k in 0..=order {
        // (2x - y)^k = Σ_a C(k, a) 2^a x^a (-y)^{k-a}
        for a in 0..=k {
            let sign = if (k - a) % 2 == 0 { q(1) } else { q(-1) };
            let c = binomial(k, a) * pow_q(&q(2), a) * sign;
            sum.add_term(vec![a as i32, (k - a) as i32], c);
        }
    }
    let one_minus_x = LaurentPoly::from_terms(2, [(vec![0, 0], Q::one()), (vec![1, 0], q(-1))]);
    &one_minus_x * &sum
}

/// `φ(t_k/t_l, t_{k-1}/t_l)` (with `y = 0` when `k = 1`) at a given order.
pub(crate) fn phi_kl_order(k: usize, l: usize, kappa: usize, order: u32) -> LaurentPoly<Q> {
    let phi = phi_poly(order);
    let mut out = LaurentPoly::zero(kappa);
    for (e, c) in phi.terms() {
        let (a, b) = (e[0], e[1]);
        if k == 1 && b > 0 {
            continue;
        }
        let mut x = vec![0; kappa];
        x[k - 1] += a;
        if k > 1 {
            x[k - 2] += b;
        }
        x[l - 1] -= a + b;
        out.add_term(x, c.clone());
    }
    out
}

/// `Φ_{k,l}` for `1 <= k < l <= κ`, truncated at `N = n_{κ-1}`.
pub fn phi_kl(k: usize, l: usize, cfg: &TowerConfig) -> Result<LaurentPoly<Q>, TowerError> {
    if k == 0 || k >= l || l > cfg.kappa() {
        return Err(TowerError::IndexOutOfRange(format!(
            "Phi_{{{k},{l}}} needs 1 <= k < l <= {}",
            cfg.kappa()
        )));
    }
    Ok(phi_kl_order(k, l, cfg.kappa(), cfg.phi_order()))
}

/// `Φ_i = ∏_{κ-i+1 <= k < l <= κ} Φ_{k,l}`.
pub fn phi_i_product(i: usize, cfg: &TowerConfig) -> Result<LaurentPoly<Q>, TowerError> {
    let kappa = cfg.kappa();
    if i > kappa {
        return Err(TowerError::IndexOutOfRange(format!(
            "Phi_{i} with kappa = {kappa}"
        )));
    }
    let mut acc = LaurentPoly::one(kappa);
    for l in (kappa - i + 1)..=kappa {
        for k in (kappa - i + 1)..l {
            acc = acc.mul_with(&phi_kl(k, l, cfg)?, Execution::default());
        }
    }
    Ok(acc)
}

/// Rewrites `g(u_1, ..., u_κ)` with `u_1 = t_1`, `u_i = t_i - t_{i-1}`.
pub fn change_of_variables<C: Coefficient>(
    g: &LaurentPoly<C>,
    one: &C,
) -> Result<LaurentPoly<C>, TowerError> {
    let kappa = g.nvars();
    let neg_one = one.neg();
    let images: Vec<LaurentPoly<C>> = (0..kappa)
        .map(|i| {
            let mut p = LaurentPoly::zero(kappa);
            let mut e = vec![0; kappa];
            e[i] = 1;
            p.add_term(e, one.clone());
            if i > 0 {
                let mut e = vec![0; kappa];
                e[i - 1] = 1;
                p.add_term(e, neg_one.clone());
            }
            p
        })
        .collect();
    g.substitute(&images, one).ok_or(TowerError::NotPolynomial)
}

/// `I(t_1, ..., t_j) = [t_{j+1}^r ... t_κ^r](I(t) ∏_{l=j+1}^{L} ∏_{k<l} Φ_{k,l})`
/// with `L = κ - 1`, or `L = κ` when `include_last` is set.
///
/// The result keeps `κ` variables; positions `j..κ` are zero.
pub fn partial_extraction(
    base: &LaurentPoly<Q>,
    cfg: &TowerConfig,
    j: usize,
    include_last: bool,
) -> Result<LaurentPoly<Q>, TowerError> {
    let kappa = cfg.kappa();
    cfg.check_nvars(base.nvars())?;
    if j > kappa {
        return Err(TowerError::IndexOutOfRange(format!(
            "I(t_1..t_{j}) with kappa = {kappa}"
        )));
    }
    let r = cfg.r() as i32;
    let last = if include_last { kappa } else { kappa - 1 };
    let mut acc = base.clone();
    // Φ_{k,l} only involves t_{k-1}, t_k, t_l, so t_l can be extracted as
    // soon as the factors with that l are in.
    for l in ((j + 1)..=kappa).rev() {
        if l <= last {
            let mut factor = LaurentPoly::one(kappa);
            for k in 1..l {
                factor = factor.mul(&phi_kl(k, l, cfg)?);
            }
            acc = acc.extract_product(&factor, l - 1, r);
        } else {
            acc = acc.extract(l - 1, r);
        }
    }
    Ok(acc)
}
