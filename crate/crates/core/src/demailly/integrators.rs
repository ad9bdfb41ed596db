use std::sync::{Arc, RwLock};

use num_traits::Zero;

use super::stepwise::{integrate_with_segres, twisted_segre_recursion};
use super::tower::{base_integral_with, phi_i_product};
use super::{Pipeline, TowerConfig, TowerError};
use crate::graded_ring::{BaseGeometry, CohClass};
use crate::laurent::{
    cauchy_mul_with, expand_rational_product_with, LaurentPoly, Operand, SeriesError,
    TruncatedSeries, Window,
};
use crate::par::{map_slice, Execution};
use crate::rational::Q;

/// Maximum number of windows tried by the residue pipeline.
const RESIDUE_ATTEMPTS: usize = 3;

/// An integration pipeline bound to one geometry and tower shape.
pub trait Integrator: Send + Sync {
    fn pipeline(&self) -> Pipeline;

    fn config(&self) -> &TowerConfig;

    /// `∫_{X_κ} f`, where `f` is a polynomial in `κ` variables with base
    /// cohomology coefficients.
    fn integrate(&self, f: &LaurentPoly<CohClass>) -> Result<Q, TowerError>;

    /// Integrates many classes, fanning out under [`Execution::Parallel`].
    fn integrate_batch(
        &self,
        fs: &[LaurentPoly<CohClass>],
        exec: Execution,
    ) -> Vec<Result<Q, TowerError>> {
        map_slice(exec, fs, |f| self.integrate(f))
    }
}

/// Successive fiber integration with cached twisted Segre polynomials.
pub struct StepwiseIntegrator {
    geom: BaseGeometry,
    cfg: TowerConfig,
    segres: Vec<LaurentPoly<CohClass>>,
}

impl StepwiseIntegrator {
    pub fn new(geom: &BaseGeometry, cfg: &TowerConfig) -> Result<Self, TowerError> {
        cfg.check_geometry(geom)?;
        let segres = (1..=cfg.kappa())
            .map(|l| twisted_segre_recursion(l - 1, l, cfg, geom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(StepwiseIntegrator {
            geom: geom.clone(),
            cfg: cfg.clone(),
            segres,
        })
    }
}

impl Integrator for StepwiseIntegrator {
    fn pipeline(&self) -> Pipeline {
        Pipeline::Stepwise
    }

    fn config(&self) -> &TowerConfig {
        &self.cfg
    }

    fn integrate(&self, f: &LaurentPoly<CohClass>) -> Result<Q, TowerError> {
        integrate_with_segres(f, &self.geom, &self.cfg, &self.segres)
    }
}

/// `[t^T](Φ_κ · I(t))` with the polynomial `Φ_κ` computed once.
pub struct PhiFormIntegrator {
    geom: BaseGeometry,
    cfg: TowerConfig,
    phi: LaurentPoly<Q>,
    exec: Execution,
}

impl PhiFormIntegrator {
    pub fn new(geom: &BaseGeometry, cfg: &TowerConfig) -> Result<Self, TowerError> {
        cfg.check_geometry(geom)?;
        Ok(PhiFormIntegrator {
            geom: geom.clone(),
            cfg: cfg.clone(),
            phi: phi_i_product(cfg.kappa(), cfg)?,
            exec: Execution::Sequential,
        })
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn phi(&self) -> &LaurentPoly<Q> {
        &self.phi
    }
}

impl Integrator for PhiFormIntegrator {
    fn pipeline(&self) -> Pipeline {
        Pipeline::PhiForm
    }

    fn config(&self) -> &TowerConfig {
        &self.cfg
    }

    fn integrate(&self, f: &LaurentPoly<CohClass>) -> Result<Q, TowerError> {
        let base = base_integral_with(f, &self.geom, &self.cfg, self.exec)?;
        let target = self.cfg.target();
        let mut acc = Q::zero();
        for (e, c) in base.terms() {
            let need: Vec<i32> = target.iter().zip(e).map(|(t, x)| t - x).collect();
            if let Some(phi) = self.phi.get(&need) {
                acc += phi * c;
            }
        }
        Ok(acc)
    }
}

/// The factors of `Φ_κ` as a rational function: for `1 <= i < j <= κ`,
/// `(t_j - t_1)/(t_j - 2t_1)` when `i = 1` and
/// `(t_j - t_i)/(t_j - 2t_i + t_{i-1})` otherwise.
pub fn residue_phi_rational(cfg: &TowerConfig) -> Vec<(LaurentPoly<Q>, LaurentPoly<Q>)> {
    let kappa = cfg.kappa();
    let var = |i: usize| LaurentPoly::variable(kappa, i - 1);
    let mut out = Vec::new();
    for i in 1..kappa {
        for j in (i + 1)..=kappa {
            let num = &var(j) - &var(i);
            let mut den = &var(j) - &var(i).scale(&Q::from_integer(2.into()));
            if i > 1 {
                den = &den + &var(i - 1);
            }
            out.push((num, den));
        }
    }
    out
}

/// `[t^T](Φ_κ(t) · I(t))` with `Φ_κ` expanded as an iterated Laurent series.
pub struct ResidueIntegrator {
    geom: BaseGeometry,
    cfg: TowerConfig,
    factors: Vec<(LaurentPoly<Q>, LaurentPoly<Q>)>,
    expansion: RwLock<Option<Arc<TruncatedSeries>>>,
    exec: Execution,
}

impl ResidueIntegrator {
    pub fn new(geom: &BaseGeometry, cfg: &TowerConfig) -> Result<Self, TowerError> {
        cfg.check_geometry(geom)?;
        Ok(ResidueIntegrator {
            geom: geom.clone(),
            cfg: cfg.clone(),
            factors: residue_phi_rational(cfg),
            expansion: RwLock::new(None),
            exec: Execution::Sequential,
        })
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    /// `[r - n_κ, r + n]` in every variable.
    pub fn default_window(&self) -> Window {
        let r = self.cfg.r() as i32;
        Window::uniform(
            self.cfg.kappa(),
            r - self.cfg.n_kappa() as i32,
            r + self.cfg.n() as i32,
        )
        .expect("n_kappa >= 0 and n >= 0")
    }

    /// Expansion of `Φ_κ` on a window containing `window`.
    pub fn expansion(&self, window: &Window) -> Result<Arc<TruncatedSeries>, TowerError> {
        if let Some(s) = self.expansion.read().expect("cache lock").as_ref() {
            if s.window().contains_window(window) {
                return Ok(Arc::clone(s));
            }
        }
        let fresh = Arc::new(expand_rational_product_with(
            &self.factors,
            window,
            self.exec,
        )?);
        *self.expansion.write().expect("cache lock") = Some(Arc::clone(&fresh));
        Ok(fresh)
    }

    /// Coefficient extraction on a given window, without retries.
    pub fn integrate_on(
        &self,
        f: &LaurentPoly<CohClass>,
        window: &Window,
    ) -> Result<Q, TowerError> {
        let base = base_integral_with(f, &self.geom, &self.cfg, self.exec)?;
        let series = self.expansion(window)?;
        let target = self.cfg.target();
        let point = Window::point(&target);
        let prod = cauchy_mul_with(
            Operand::Poly(&base),
            Operand::Series(&series),
            &point,
            Execution::Sequential,
        )?;
        Ok(prod.coeff(&target)?)
    }

    /// Tries `window` and, while the product cannot be certified, windows
    /// twice as far from the target, up to three attempts in total.
    pub fn integrate_from(
        &self,
        f: &LaurentPoly<CohClass>,
        window: Window,
    ) -> Result<Q, TowerError> {
        let target = self.cfg.target();
        let mut window = window;
        let mut last = None;
        for _ in 0..RESIDUE_ATTEMPTS {
            match self.integrate_on(f, &window) {
                Err(TowerError::Series(SeriesError::TruncationTooNarrow(msg))) => {
                    last = Some(msg);
                    window = window.widened_around(&target);
                }
                other => return other,
            }
        }
        Err(SeriesError::TruncationTooNarrow(format!(
            "{} after {RESIDUE_ATTEMPTS} windows",
            last.unwrap_or_default()
        ))
        .into())
    }
}

impl Integrator for ResidueIntegrator {
    fn pipeline(&self) -> Pipeline {
        Pipeline::Residue
    }

    fn config(&self) -> &TowerConfig {
        &self.cfg
    }

    fn integrate(&self, f: &LaurentPoly<CohClass>) -> Result<Q, TowerError> {
        self.integrate_from(f, self.default_window())
    }
}

/// One-shot [`PhiFormIntegrator`].
pub fn integrate_phi_form(
    f: &LaurentPoly<CohClass>,
    geom: &BaseGeometry,
    cfg: &TowerConfig,
) -> Result<Q, TowerError> {
    PhiFormIntegrator::new(geom, cfg)?.integrate(f)
}

/// One-shot [`ResidueIntegrator`].
pub fn integrate_residue(
    f: &LaurentPoly<CohClass>,
    geom: &BaseGeometry,
    cfg: &TowerConfig,
) -> Result<Q, TowerError> {
    ResidueIntegrator::new(geom, cfg)?.integrate(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demailly::integrate_stepwise;
    use crate::graded_ring::{chern_of_geometry, GeometryKind};
    use crate::rational::q;

    fn mono(geom: &BaseGeometry, e: Vec<i32>, h: u32) -> LaurentPoly<CohClass> {
        LaurentPoly::monomial(e, geom.hyperplane().pow(h).unwrap())
    }

    #[test]
    fn rational_factor_lists() {
        let cfg = |k| TowerConfig::new(k, 2, 1).unwrap();
        assert!(residue_phi_rational(&cfg(1)).is_empty());
        let two = residue_phi_rational(&cfg(2));
        assert_eq!(two.len(), 1);
        let t = |i| LaurentPoly::<Q>::variable(2, i);
        assert_eq!(two[0].0, &t(1) - &t(0));
        assert_eq!(two[0].1, &t(1) - &t(0).scale(&q(2)));
        let three = residue_phi_rational(&cfg(3));
        assert_eq!(three.len(), 3);
        let t = |i| LaurentPoly::<Q>::variable(3, i);
        assert_eq!(three[2].0, &t(2) - &t(1));
        assert_eq!(three[2].1, &(&t(2) - &t(1).scale(&q(2))) + &t(0));
    }

    #[test]
    fn projective_plane_examples() {
        let g = chern_of_geometry(GeometryKind::ProjectiveSpace, 2, None).unwrap();
        let cfg1 = TowerConfig::for_geometry(&g, 1).unwrap();
        let f = mono(&g, vec![3], 0);
        assert_eq!(integrate_phi_form(&f, &g, &cfg1).unwrap(), q(6));
        assert_eq!(integrate_residue(&f, &g, &cfg1).unwrap(), q(6));

        let cfg2 = TowerConfig::for_geometry(&g, 2).unwrap();
        let f = mono(&g, vec![0, 4], 0);
        let oracle = integrate_stepwise(&f, &g, &cfg2).unwrap();
        assert_eq!(integrate_phi_form(&f, &g, &cfg2).unwrap(), oracle);
        assert_eq!(integrate_residue(&f, &g, &cfg2).unwrap(), oracle);

        let low = LaurentPoly::monomial(vec![1, 2], CohClass::one(g.ring()));
        assert_eq!(integrate_residue(&low, &g, &cfg2).unwrap(), q(0));
        assert_eq!(
            integrate_phi_form(&LaurentPoly::zero(2), &g, &cfg2).unwrap(),
            q(0)
        );
    }

    #[test]
    fn residue_widens_narrow_windows() {
        let g = chern_of_geometry(GeometryKind::ProjectiveSpace, 2, None).unwrap();
        let cfg = TowerConfig::for_geometry(&g, 2).unwrap();
        let f = mono(&g, vec![0, 4], 0);
        let oracle = integrate_stepwise(&f, &g, &cfg).unwrap();
        let point = Window::point(&cfg.target());
        let integ = ResidueIntegrator::new(&g, &cfg).unwrap();
        assert!(matches!(
            integ.integrate_on(&f, &point),
            Err(TowerError::Series(SeriesError::TruncationTooNarrow(_)))
        ));
        // Point, then radius 2, then radius 4: the third window suffices.
        let fresh = ResidueIntegrator::new(&g, &cfg).unwrap();
        assert_eq!(fresh.integrate_from(&f, point.clone()).unwrap(), oracle);
    }

    #[test]
    fn batch_matches_single() {
        let g = chern_of_geometry(GeometryKind::ProjectiveSpace, 2, None).unwrap();
        let cfg = TowerConfig::for_geometry(&g, 2).unwrap();
        let integ = ResidueIntegrator::new(&g, &cfg).unwrap();
        let fs: Vec<_> = (0..=4).map(|a| mono(&g, vec![a, 4 - a], 0)).collect();
        let seq = integ.integrate_batch(&fs, Execution::Sequential);
        let par = integ.integrate_batch(&fs, Execution::Parallel);
        assert_eq!(seq, par);
    }
}
