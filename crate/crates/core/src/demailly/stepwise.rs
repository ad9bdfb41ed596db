use super::tower::{phi_kl, segre_gen};
use super::{TowerConfig, TowerError, TowerPolynomial};
use crate::graded_ring::{integrate_base, BaseGeometry, CohClass};
use crate::laurent::LaurentPoly;
use crate::rational::Q;

/// `s_{1/t_l}(V_k ⊗ L_k) = Φ_{k,l} ... Φ_{1,l} · s_{1/t_l}(V_0)`, where the
/// positions `1..=k` stand for the classes `v_1, ..., v_k`.
pub fn twisted_segre_recursion(
    k: usize,
    l: usize,
    cfg: &TowerConfig,
    geom: &BaseGeometry,
) -> Result<LaurentPoly<CohClass>, TowerError> {
    cfg.check_geometry(geom)?;
    if k >= l || l > cfg.kappa() {
        return Err(TowerError::IndexOutOfRange(format!(
            "twisted Segre polynomial needs 0 <= k < l <= {}, got k={k}, l={l}",
            cfg.kappa()
        )));
    }
    let mut phis = LaurentPoly::one(cfg.kappa());
    for m in 1..=k {
        phis = phis.mul(&phi_kl(m, l, cfg)?);
    }
    let lifted = phis.map_coeffs(|c| CohClass::constant(geom.ring(), c.clone()));
    Ok(lifted.mul(&segre_gen(geom, cfg.kappa(), l)?))
}

pub(crate) fn eliminate(
    f: &TowerPolynomial,
    twisted_segre: &LaurentPoly<CohClass>,
    r: u32,
) -> Result<TowerPolynomial, TowerError> {
    let level = f.level();
    if level == 0 {
        return Err(TowerError::LevelMismatch {
            expected: 1,
            found: 0,
        });
    }
    let reduced = f.poly().extract_product(twisted_segre, level - 1, r as i32);
    TowerPolynomial::new(reduced, level - 1)
}

/// Push-forward along `X_{i+1} -> X_i` for `f` on level `i + 1`:
/// `[t_{i+1}^r](f(v_1, ..., v_i, t_{i+1}) s_{1/t_{i+1}}(V_i ⊗ L_i))`.
pub fn fiber_integrate_once(
    f: &TowerPolynomial,
    geom: &BaseGeometry,
    cfg: &TowerConfig,
) -> Result<TowerPolynomial, TowerError> {
    cfg.check_nvars(f.poly().nvars())?;
    let level = f.level();
    if level == 0 {
        return Err(TowerError::LevelMismatch {
            expected: 1,
            found: 0,
        });
    }
    let segre = twisted_segre_recursion(level - 1, level, cfg, geom)?;
    eliminate(f, &segre, cfg.r())
}

/// Integral over `X_κ` of `f(v_1, ..., v_κ)` by successive fiber
/// integration, highest level first.
pub fn integrate_stepwise(
    f: &LaurentPoly<CohClass>,
    geom: &BaseGeometry,
    cfg: &TowerConfig,
) -> Result<Q, TowerError> {
    let segres = (1..=cfg.kappa())
        .map(|l| twisted_segre_recursion(l - 1, l, cfg, geom))
        .collect::<Result<Vec<_>, _>>()?;
    integrate_with_segres(f, geom, cfg, &segres)
}

/// `segres[l - 1] = s_{1/t_l}(V_{l-1} ⊗ L_{l-1})`.
pub(crate) fn integrate_with_segres(
    f: &LaurentPoly<CohClass>,
    geom: &BaseGeometry,
    cfg: &TowerConfig,
    segres: &[LaurentPoly<CohClass>],
) -> Result<Q, TowerError> {
    cfg.check_geometry(geom)?;
    cfg.check_nvars(f.nvars())?;
    if !f.is_polynomial() {
        return Err(TowerError::NotPolynomial);
    }
    let mut current = TowerPolynomial::cohomological(f.clone());
    while current.level() > 0 {
        current = eliminate(&current, &segres[current.level() - 1], cfg.r())?;
        if current.poly().is_zero() {
            return Ok(Q::from_integer(0.into()));
        }
    }
    let zero = vec![0; cfg.kappa()];
    Ok(current
        .poly()
        .get(&zero)
        .map(integrate_base)
        .unwrap_or_else(|| Q::from_integer(0.into())))
}
