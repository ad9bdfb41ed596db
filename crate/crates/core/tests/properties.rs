use std::sync::Arc;

use demres_core::demailly::{phi_i_product, phi_kl, residue_phi_rational, twisted_segre_recursion};
use demres_core::graded_ring::{integrate_base, ring_inv_unit, ring_mul};
use demres_core::{
    cauchy_mul, chern_of_geometry, expand_rational_product, morse_class, weights_valid_demailly,
    BaseGeometry, Basis, CohClass, GeometryKind, Integrator, LaurentPoly, PhiFormIntegrator,
    ResidueIntegrator, RingSpec, StepwiseIntegrator, TowerConfig, WeightVector, Window, Q,
};
use num_traits::One;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn p3_ring() -> Arc<RingSpec> {
    chern_of_geometry(GeometryKind::ProjectiveSpace, 3, None)
        .unwrap()
        .ring()
        .clone()
}

fn class_on(ring: Arc<RingSpec>) -> impl Strategy<Value = CohClass> {
    let top = ring.top_degree();
    prop::collection::vec(rational(), (top + 1) as usize).prop_map(move |cs| {
        cs.into_iter()
            .enumerate()
            .fold(CohClass::zero(&ring), |acc, (k, c)| {
                &acc + &CohClass::monomial(&ring, vec![k as u32], c)
            })
    })
}

fn laurent(nvars: usize) -> impl Strategy<Value = LaurentPoly<Q>> {
    prop::collection::vec((prop::collection::vec(-1i32..=1, nvars), rational()), 1..4)
        .prop_map(move |terms| LaurentPoly::from_terms(nvars, terms))
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn lift(p: &LaurentPoly<Q>, geom: &BaseGeometry) -> LaurentPoly<CohClass> {
    p.map_coeffs(|c| CohClass::constant(geom.ring(), c.clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_mul_is_commutative_and_associative(
        a in class_on(p3_ring()), b in class_on(p3_ring()), c in class_on(p3_ring())
    ) {
        prop_assert_eq!(ring_mul(&a, &b).unwrap(), ring_mul(&b, &a).unwrap());
        let left = ring_mul(&ring_mul(&a, &b).unwrap(), &c).unwrap();
        let right = ring_mul(&a, &ring_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn unit_classes_invert(c in class_on(p3_ring())) {
        let ring = c.ring().clone();
        let unit = &(&c - &CohClass::constant(&ring, c.constant_term())) + &CohClass::one(&ring);
        let inv = ring_inv_unit(&unit).unwrap();
        prop_assert_eq!(ring_mul(&unit, &inv).unwrap(), CohClass::one(&ring));
    }

    #[test]
    fn integrate_base_is_linear(x in class_on(p3_ring()), y in class_on(p3_ring()), a in rational(), b in rational()) {
        let combo = &x.scale(&a) + &y.scale(&b);
        prop_assert_eq!(integrate_base(&combo), a * integrate_base(&x) + b * integrate_base(&y));
    }

    #[test]
    fn field_law_holds_on_windows(num in laurent(2), den in laurent(2)) {
        let wide = Window::uniform(2, -8, 8).unwrap();
        let x = expand_rational_product(&[(num.clone(), den.clone())], &wide).unwrap();
        let y = expand_rational_product(&[(den, num)], &wide).unwrap();
        let inner = Window::uniform(2, -1, 1).unwrap();
        let prod = cauchy_mul(&x, &y, &inner).unwrap();
        prop_assert!(prod.agrees_with(&LaurentPoly::one(2)));
    }

    #[test]
    fn cauchy_product_commutes(p in laurent(2), q in laurent(2), r in laurent(2)) {
        let wide = Window::uniform(2, -8, 8).unwrap();
        let x = expand_rational_product(&[(p.clone(), q.clone())], &wide).unwrap();
        let y = expand_rational_product(&[(q, r)], &wide).unwrap();
        let inner = Window::uniform(2, -1, 1).unwrap();
        let (xy, yx) = (cauchy_mul(&x, &y, &inner).unwrap(), cauchy_mul(&y, &x, &inner).unwrap());
        prop_assert_eq!(xy.terms(), yx.terms());
    }

    #[test]
    fn integrators_are_linear(
        e1 in prop::collection::vec(0i32..=4, 2), e2 in prop::collection::vec(0i32..=4, 2),
        a in rational(), b in rational()
    ) {
        let geom = chern_of_geometry(GeometryKind::LogProjective, 2, Some(4)).unwrap();
        let cfg = TowerConfig::for_geometry(&geom, 2).unwrap();
        let mono = |e: &Vec<i32>| {
            let m = (4 - e[0] - e[1]).clamp(0, 2) as u32;
            LaurentPoly::monomial(e.clone(), geom.hyperplane().pow(m).unwrap())
        };
        let (f, g) = (mono(&e1), mono(&e2));
        let combo = &f.scale(&a) + &g.scale(&b);
        let integrators: Vec<Box<dyn Integrator>> = vec![
            Box::new(StepwiseIntegrator::new(&geom, &cfg).unwrap()),
            Box::new(PhiFormIntegrator::new(&geom, &cfg).unwrap()),
            Box::new(ResidueIntegrator::new(&geom, &cfg).unwrap()),
        ];
        for integ in &integrators {
            let lhs = integ.integrate(&combo).unwrap();
            let rhs = &a * integ.integrate(&f).unwrap() + &b * integ.integrate(&g).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn morse_class_is_linear(
        a in prop::collection::vec(0u32..6, 3), b in prop::collection::vec(0u32..6, 3),
        l1 in 0u32..4, l2 in 0u32..4, taut in any::<bool>()
    ) {
        let geom = chern_of_geometry(GeometryKind::HypersurfaceTangent, 2, Some(5)).unwrap();
        let cfg = TowerConfig::for_geometry(&geom, 3).unwrap();
        let basis = if taut { Basis::Taut } else { Basis::L };
        let class = |w: Vec<u32>, l: u32| morse_class(&WeightVector::new(w, l).unwrap(), &cfg, &geom, basis).unwrap();
        let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let (fa, ga) = class(a.clone(), l1);
        let (fb, gb) = class(b.clone(), l2);
        let (fs, gs) = class(sum, l1 + l2);
        prop_assert_eq!(fs, &fa + &fb);
        // c_1(G) = (l + 1) h is affine in l.
        let (_, g0) = class(vec![0, 0, 0], 0);
        prop_assert_eq!(&gs + &g0, &ga + &gb);
    }
}

#[test]
fn isolating_a_level_moves_one_phi_block() {
    use GeometryKind::*;
    let geoms = [
        chern_of_geometry(ProjectiveSpace, 2, None).unwrap(),
        chern_of_geometry(ProjectiveSpace, 3, None).unwrap(),
        chern_of_geometry(HypersurfaceTangent, 2, Some(5)).unwrap(),
        chern_of_geometry(LogProjective, 2, Some(3)).unwrap(),
    ];
    for geom in &geoms {
        for kappa in 1..=3 {
            let cfg = TowerConfig::for_geometry(geom, kappa).unwrap();
            for i in 0..kappa {
                let k = kappa - i;
                let mut lhs = lift(&phi_i_product(i, &cfg).unwrap(), geom);
                let mut rhs = lift(&phi_i_product(i + 1, &cfg).unwrap(), geom);
                for j in (k + 1)..=kappa {
                    lhs = lhs.mul(&twisted_segre_recursion(k, j, &cfg, geom).unwrap());
                    rhs = rhs.mul(&twisted_segre_recursion(k - 1, j, &cfg, geom).unwrap());
                }
                assert_eq!(lhs, rhs, "kappa={kappa}, i={i}");
                // The new factor is exactly the product of Φ_{k,j}.
                let mut step = LaurentPoly::one(kappa);
                for j in (k + 1)..=kappa {
                    step = step.mul(&phi_kl(k, j, &cfg).unwrap());
                }
                assert_eq!(
                    phi_i_product(i, &cfg).unwrap().mul(&step),
                    phi_i_product(i + 1, &cfg).unwrap()
                );
            }
        }
    }
}

#[test]
fn phi_expansion_support_has_nonnegative_first_exponent() {
    for (n, r, kappa) in [(2, 1, 2), (2, 1, 3), (3, 2, 3)] {
        let cfg = TowerConfig::new(kappa, n, r).unwrap();
        let window = Window::uniform(kappa, -6, 6).unwrap();
        let series = expand_rational_product(&residue_phi_rational(&cfg), &window).unwrap();
        assert!(!series.terms().is_empty());
        assert!(series.terms().keys().all(|e| e[0] >= 0), "kappa={kappa}");
    }
}

#[test]
fn hypersurface_of_degree_one_is_projective_space() {
    for n in 1..=3 {
        let pn = chern_of_geometry(GeometryKind::ProjectiveSpace, n, None).unwrap();
        let hyp = chern_of_geometry(GeometryKind::HypersurfaceTangent, n, Some(1)).unwrap();
        assert_eq!(pn.total_chern_v0().terms(), hyp.total_chern_v0().terms());
        assert_eq!(integrate_base(&pn.hyperplane().pow(n).unwrap()), Q::one());
        assert_eq!(integrate_base(&hyp.hyperplane().pow(n).unwrap()), Q::one());
    }
}

#[test]
fn geometric_weights_validate() {
    for kappa in 2..=4usize {
        let a: Vec<u32> = (0..kappa)
            .map(|i| 3u32.pow((kappa - 1 - i) as u32))
            .collect();
        assert!(weights_valid_demailly(&a, kappa).unwrap(), "{a:?}");
    }
}
