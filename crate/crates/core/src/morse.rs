//! Weighted tautological bundles on the tower and the Morse intersection
//! number `I = ∫ c_1(F)^{n_κ} - n_κ c_1(F)^{n_κ-1} c_1(G)`, where
//! `F = O(a_1, ..., a_κ) ⊗ A^l`, `G = A^{l+1}` and `c_1(A) = h`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::demailly::{
    change_of_variables, Integrator, PhiFormIntegrator, Pipeline, ResidueIntegrator,
    StepwiseIntegrator, TowerConfig, TowerError,
};
use crate::graded_ring::{chern_of_geometry, BaseGeometry, CohClass, GeometryKind, RingError};
use crate::laurent::LaurentPoly;
use crate::par::{map_slice, Execution};
use crate::rational::{to_fraction_string, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("degree not applicable to projective space")]
    DegreeNotApplicable,
    #[error("pipeline disagreement: {0}")]
    PipelineDisagreement(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Weights `(a_1, ..., a_κ)` and the ample power `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector {
    a: Vec<u32>,
    ample_power: u32,
}

impl WeightVector {
    pub fn new(a: Vec<u32>, ample_power: u32) -> Result<Self, MorseError> {
        if a.is_empty() {
            return Err(MorseError::InvalidInput(
                "at least one weight is required".into(),
            ));
        }
        Ok(WeightVector { a, ample_power })
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn kappa(&self) -> usize {
        self.a.len()
    }

    pub fn ample_power(&self) -> u32 {
        self.ample_power
    }

    /// `m = a_1 + ... + a_κ`.
    pub fn total(&self) -> u64 {
        self.a.iter().map(|x| *x as u64).sum()
    }
}

/// How the weights are read.
///
/// `Taut` uses the tautological classes `u_i = c_1(O_{X_i}(1))`, so
/// `c_1(O(a)) = Σ a_i u_i`. `L` uses the classes `v_i = c_1(L_i)`
/// directly, so `c_1(O(a)) = Σ a_i v_i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    #[default]
    #[serde(rename = "taut")]
    Taut,
    #[serde(rename = "L")]
    L,
}

impl Basis {
    fn is_default(&self) -> bool {
        *self == Basis::Taut
    }

    /// The relative ampleness condition for this basis.
    pub fn validate(self, a: &[u32]) -> Result<bool, MorseError> {
        match self {
            Basis::Taut => weights_valid_demailly(a, a.len()),
            Basis::L => weights_valid_l(a, a.len()),
        }
    }
}

impl FromStr for Basis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "taut" => Ok(Basis::Taut),
            "L" | "l" => Ok(Basis::L),
            other => Err(format!("unknown basis `{other}`")),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Taut => "taut",
            Basis::L => "L",
        })
    }
}

/// One integrator, or all three with a hard agreement check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PipelineSelection {
    Single(Pipeline),
    All,
}

impl PipelineSelection {
    pub fn pipelines(self) -> Vec<Pipeline> {
        match self {
            PipelineSelection::Single(p) => vec![p],
            PipelineSelection::All => Pipeline::ALL.to_vec(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PipelineSelection::Single(p) => p.name(),
            PipelineSelection::All => "all",
        }
    }
}

impl Default for PipelineSelection {
    fn default() -> Self {
        PipelineSelection::Single(Pipeline::Residue)
    }
}

impl FromStr for PipelineSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            Ok(PipelineSelection::All)
        } else {
            s.parse().map(PipelineSelection::Single)
        }
    }
}

fn check_len(a: &[u32], kappa: usize) -> Result<(), MorseError> {
    if a.len() != kappa {
        return Err(MorseError::InvalidInput(format!(
            "expected {kappa} weights, found {}",
            a.len()
        )));
    }
    if kappa < 2 {
        return Err(MorseError::InvalidInput(
            "the ampleness conditions need kappa >= 2".into(),
        ));
    }
    Ok(())
}

/// `a_{κ-1} > 2 a_κ > 0` and `a_i >= 3 a_{i+1}` for `i <= κ - 2`.
pub fn weights_valid_demailly(a: &[u32], kappa: usize) -> Result<bool, MorseError> {
    check_len(a, kappa)?;
    let (x, y) = (a[kappa - 2] as u64, a[kappa - 1] as u64);
    let tail_ok = x > 2 * y && y > 0;
    Ok(tail_ok && (0..kappa - 2).all(|i| a[i] as u64 >= 3 * a[i + 1] as u64))
}

/// `a_{κ-1} > a_κ >= 1` and `a_i >= 2 (a_{i+1} + ... + a_κ)` for `i <= κ - 2`.
pub fn weights_valid_l(a: &[u32], kappa: usize) -> Result<bool, MorseError> {
    check_len(a, kappa)?;
    let tail_ok = a[kappa - 2] > a[kappa - 1] && a[kappa - 1] >= 1;
    Ok(tail_ok
        && (0..kappa - 2).all(|i| {
            let rest: u64 = a[i + 1..].iter().map(|x| *x as u64).sum();
            a[i] as u64 >= 2 * rest
        }))
}

/// `(c_1(F), c_1(G))` as polynomials in `t_1, ..., t_κ` over the base ring.
pub fn morse_class(
    weights: &WeightVector,
    cfg: &TowerConfig,
    geom: &BaseGeometry,
    basis: Basis,
) -> Result<(LaurentPoly<CohClass>, LaurentPoly<CohClass>), MorseError> {
    let kappa = cfg.kappa();
    if weights.kappa() != kappa {
        return Err(MorseError::InvalidInput(format!(
            "expected {kappa} weights, found {}",
            weights.kappa()
        )));
    }
    let ring = geom.ring();
    let one = CohClass::one(ring);
    let mut linear = LaurentPoly::zero(kappa);
    for (i, a) in weights.a().iter().enumerate() {
        let mut e = vec![0; kappa];
        e[i] = 1;
        linear.add_term(e, CohClass::constant(ring, Q::from_integer((*a).into())));
    }
    if basis == Basis::Taut {
        linear = change_of_variables(&linear, &one)?;
    }
    let h = geom.hyperplane();
    let l = Q::from_integer(weights.ample_power().into());
    let f = &linear + &LaurentPoly::constant(kappa, h.scale(&l));
    let g = LaurentPoly::constant(kappa, h.scale(&(l + Q::one())));
    Ok((f, g))
}

/// Integrand `c_1(F)^{n_κ-1} (c_1(F) - n_κ c_1(G))` of the Morse number.
pub fn morse_integrand(
    weights: &WeightVector,
    cfg: &TowerConfig,
    geom: &BaseGeometry,
    basis: Basis,
) -> Result<LaurentPoly<CohClass>, MorseError> {
    let (f, g) = morse_class(weights, cfg, geom, basis)?;
    let one = CohClass::one(geom.ring());
    let nk = cfg.n_kappa();
    let lead = f.pow_with_one(nk - 1, &one);
    let diff = &f - &g.scale(&Q::from_integer(nk.into()));
    Ok(lead.mul_with(&diff, Execution::default()))
}

fn serialize_q<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_fraction_string(x))
}

/// Result of one Morse computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MorseReport {
    pub geometry: String,
    pub n: u32,
    pub degree: Option<u32>,
    pub kappa: usize,
    pub r: u32,
    pub n_kappa: u32,
    pub weights: Vec<u32>,
    pub ample_power: u32,
    pub pipeline: String,
    #[serde(serialize_with = "serialize_q")]
    pub value: Q,
    pub positive: bool,
    pub timings_ms: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Basis::is_default")]
    pub basis: Basis,
}

fn run_pipeline(
    p: Pipeline,
    geom: &BaseGeometry,
    cfg: &TowerConfig,
    f: &LaurentPoly<CohClass>,
) -> Result<(Q, f64), TowerError> {
    let start = Instant::now();
    let exec = Execution::default();
    let value = match p {
        Pipeline::Stepwise => StepwiseIntegrator::new(geom, cfg)?.integrate(f)?,
        Pipeline::PhiForm => PhiFormIntegrator::new(geom, cfg)?
            .with_execution(exec)
            .integrate(f)?,
        Pipeline::Residue => ResidueIntegrator::new(geom, cfg)?
            .with_execution(exec)
            .integrate(f)?,
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    Ok((value, (ms * 1e3).round() / 1e3))
}

/// The Morse number for `geom` and `weights` via the selected pipeline(s).
///
/// With [`PipelineSelection::All`] the three values must be identical;
/// otherwise [`MorseError::PipelineDisagreement`] is returned.
pub fn morse_number(
    geom: &BaseGeometry,
    cfg: &TowerConfig,
    weights: &WeightVector,
    selection: PipelineSelection,
    basis: Basis,
) -> Result<MorseReport, MorseError> {
    let f = morse_integrand(weights, cfg, geom, basis)?;
    let pipelines = selection.pipelines();
    let results = map_slice(Execution::default(), &pipelines, |p| {
        run_pipeline(*p, geom, cfg, &f)
    });
    let mut values = BTreeMap::new();
    let mut timings = BTreeMap::new();
    let mut value: Option<Q> = None;
    for (p, res) in pipelines.iter().zip(results) {
        let (v, ms) = res?;
        timings.insert(p.name().to_string(), ms);
        values.insert(p.name().to_string(), to_fraction_string(&v));
        value.get_or_insert(v);
    }
    let value = value.expect("at least one pipeline");
    if values.values().any(|v| *v != to_fraction_string(&value)) {
        let detail = values
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(MorseError::PipelineDisagreement(detail));
    }
    Ok(MorseReport {
        geometry: geom
            .kind()
            .map_or_else(|| "custom".to_string(), |k| k.cli_name().to_string()),
        n: cfg.n(),
        degree: geom.degree(),
        kappa: cfg.kappa(),
        r: cfg.r(),
        n_kappa: cfg.n_kappa(),
        weights: weights.a().to_vec(),
        ample_power: weights.ample_power(),
        pipeline: selection.name().to_string(),
        positive: value > Q::zero(),
        value,
        timings_ms: timings,
        values: (selection == PipelineSelection::All).then_some(values),
        basis,
    })
}

/// Sign of the Morse number for one degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchEntry {
    pub degree: u32,
    #[serde(serialize_with = "serialize_q")]
    pub value: Q,
    pub positive: bool,
}

/// Outcome of scanning `d = 1, ..., d_max`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub geometry: String,
    pub n: u32,
    pub kappa: usize,
    pub weights: Vec<u32>,
    pub ample_power: u32,
    pub pipeline: String,
    pub d_max: u32,
    pub minimal_degree: Option<u32>,
    /// Whether every scanned degree past the first positive one is also
    /// positive; `None` when no degree is positive.
    pub stays_positive: Option<bool>,
    pub entries: Vec<SearchEntry>,
    #[serde(skip_serializing_if = "Basis::is_default")]
    pub basis: Basis,
}

/// Parameters of a degree scan.
#[derive(Clone, Debug)]
pub struct SearchRequest {
    pub kind: GeometryKind,
    pub n: u32,
    pub kappa: usize,
    pub weights: WeightVector,
    pub d_max: u32,
    pub selection: PipelineSelection,
    pub basis: Basis,
}

/// Smallest `d <= d_max` with a positive Morse number, scanning every
/// degree (in parallel under [`Execution::Parallel`]) and reporting
/// whether the sign stays positive afterwards.
pub fn minimal_degree_search(
    req: &SearchRequest,
    exec: Execution,
) -> Result<SearchReport, MorseError> {
    if req.kind == GeometryKind::ProjectiveSpace {
        return Err(MorseError::DegreeNotApplicable);
    }
    if req.weights.kappa() != req.kappa {
        return Err(MorseError::InvalidInput(format!(
            "expected {} weights, found {}",
            req.kappa,
            req.weights.kappa()
        )));
    }
    let valid = if req.kappa >= 2 {
        req.basis.validate(req.weights.a())?
    } else {
        req.weights.a()[0] >= 1
    };
    if !valid {
        return Err(MorseError::InvalidWeights(format!(
            "{:?} fails the {} ampleness condition",
            req.weights.a(),
            req.basis
        )));
    }
    let degrees: Vec<u32> = (1..=req.d_max).collect();
    let results = map_slice(exec, &degrees, |&d| -> Result<SearchEntry, MorseError> {
        let geom = chern_of_geometry(req.kind, req.n, Some(d))?;
        let cfg = TowerConfig::for_geometry(&geom, req.kappa)?;
        let rep = morse_number(&geom, &cfg, &req.weights, req.selection, req.basis)?;
        Ok(SearchEntry {
            degree: d,
            value: rep.value,
            positive: rep.positive,
        })
    });
    let entries = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let first = entries.iter().position(|e| e.positive);
    Ok(SearchReport {
        geometry: req.kind.cli_name().to_string(),
        n: req.n,
        kappa: req.kappa,
        weights: req.weights.a().to_vec(),
        ample_power: req.weights.ample_power(),
        pipeline: req.selection.name().to_string(),
        d_max: req.d_max,
        minimal_degree: first.map(|i| entries[i].degree),
        stays_positive: first.map(|i| entries[i..].iter().all(|e| e.positive)),
        entries,
        basis: req.basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn demailly_weights() {
        assert!(weights_valid_demailly(&[3, 1], 2).unwrap());
        assert!(weights_valid_demailly(&[9, 3, 1], 3).unwrap());
        assert!(!weights_valid_demailly(&[2, 1], 2).unwrap());
        assert!(!weights_valid_demailly(&[8, 3, 1], 3).unwrap());
        assert!(weights_valid_demailly(&[3, 1], 3).is_err());
        assert!(weights_valid_demailly(&[3], 1).is_err());
        for kappa in 2..=4usize {
            let a: Vec<u32> = (0..kappa)
                .map(|i| {
                    if i == kappa - 1 {
                        1
                    } else {
                        3u32.pow((kappa - 1 - i) as u32)
                    }
                })
                .collect();
            assert!(weights_valid_demailly(&a, kappa).unwrap(), "{a:?}");
        }
    }

    #[test]
    fn l_weights() {
        assert!(weights_valid_l(&[2, 1], 2).unwrap());
        assert!(weights_valid_l(&[6, 2, 1], 3).unwrap());
        assert!(!weights_valid_l(&[1, 1], 2).unwrap());
        assert!(!weights_valid_l(&[5, 2, 1], 3).unwrap());
    }

    fn p2() -> BaseGeometry {
        chern_of_geometry(GeometryKind::ProjectiveSpace, 2, None).unwrap()
    }

    #[test]
    fn classes() {
        let g = p2();
        let h = g.hyperplane();
        let cfg = TowerConfig::for_geometry(&g, 2).unwrap();
        let (f, gg) = morse_class(
            &WeightVector::new(vec![3, 1], 0).unwrap(),
            &cfg,
            &g,
            Basis::Taut,
        )
        .unwrap();
        let c = |x: i64| CohClass::constant(g.ring(), q(x));
        assert_eq!(
            f,
            LaurentPoly::from_terms(2, [(vec![1, 0], c(2)), (vec![0, 1], c(1))])
        );
        assert_eq!(gg, LaurentPoly::constant(2, h.clone()));

        let cfg1 = TowerConfig::for_geometry(&g, 1).unwrap();
        let (f, gg) = morse_class(
            &WeightVector::new(vec![1], 2).unwrap(),
            &cfg1,
            &g,
            Basis::Taut,
        )
        .unwrap();
        assert_eq!(
            f,
            LaurentPoly::from_terms(1, [(vec![1], c(1)), (vec![0], h.scale(&q(2)))])
        );
        assert_eq!(gg, LaurentPoly::constant(1, h.scale(&q(3))));

        let (f, gg) = morse_class(
            &WeightVector::new(vec![0, 0], 0).unwrap(),
            &cfg,
            &g,
            Basis::Taut,
        )
        .unwrap();
        assert!(f.is_zero());
        assert_eq!(gg, LaurentPoly::constant(2, h));

        let (f, _) = morse_class(
            &WeightVector::new(vec![3, 1], 0).unwrap(),
            &cfg,
            &g,
            Basis::L,
        )
        .unwrap();
        assert_eq!(
            f,
            LaurentPoly::from_terms(2, [(vec![1, 0], c(3)), (vec![0, 1], c(1))])
        );
    }

    #[test]
    fn zero_weights_give_zero() {
        let g = p2();
        let cfg = TowerConfig::for_geometry(&g, 2).unwrap();
        let w = WeightVector::new(vec![0, 0], 0).unwrap();
        let rep = morse_number(&g, &cfg, &w, PipelineSelection::All, Basis::Taut).unwrap();
        assert_eq!(rep.value, q(0));
        assert!(!rep.positive);
    }

    #[test]
    fn all_pipelines_agree() {
        let g = chern_of_geometry(GeometryKind::HypersurfaceTangent, 2, Some(5)).unwrap();
        let cfg = TowerConfig::for_geometry(&g, 2).unwrap();
        let w = WeightVector::new(vec![3, 1], 1).unwrap();
        let rep = morse_number(&g, &cfg, &w, PipelineSelection::All, Basis::Taut).unwrap();
        assert_eq!(rep.values.as_ref().unwrap().len(), 3);
        assert_eq!(rep.timings_ms.len(), 3);
        assert_eq!(rep.positive, rep.value > q(0));
    }

    #[test]
    fn searches() {
        let req = SearchRequest {
            kind: GeometryKind::ProjectiveSpace,
            n: 2,
            kappa: 2,
            weights: WeightVector::new(vec![3, 1], 1).unwrap(),
            d_max: 3,
            selection: PipelineSelection::default(),
            basis: Basis::Taut,
        };
        assert_eq!(
            minimal_degree_search(&req, Execution::Sequential),
            Err(MorseError::DegreeNotApplicable)
        );
        let req = SearchRequest {
            kind: GeometryKind::HypersurfaceTangent,
            d_max: 0,
            ..req
        };
        let rep = minimal_degree_search(&req, Execution::Sequential).unwrap();
        assert!(
            rep.entries.is_empty() && rep.minimal_degree.is_none() && rep.stays_positive.is_none()
        );
        let req = SearchRequest { d_max: 6, ..req };
        let seq = minimal_degree_search(&req, Execution::Sequential).unwrap();
        let par = minimal_degree_search(&req, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert_eq!(
            seq.entries.iter().map(|e| e.degree).collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5, 6]
        );
        let bad = SearchRequest {
            weights: WeightVector::new(vec![2, 1], 1).unwrap(),
            ..req
        };
        assert!(matches!(
            minimal_degree_search(&bad, Execution::Sequential),
            Err(MorseError::InvalidWeights(_))
        ));
    }

    #[test]
    fn report_json_shape() {
        let g = chern_of_geometry(GeometryKind::HypersurfaceTangent, 2, Some(5)).unwrap();
        let cfg = TowerConfig::for_geometry(&g, 2).unwrap();
        let w = WeightVector::new(vec![3, 1], 1).unwrap();
        let rep = morse_number(&g, &cfg, &w, PipelineSelection::default(), Basis::Taut).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        let keys = [
            "geometry",
            "n",
            "degree",
            "kappa",
            "r",
            "n_kappa",
            "weights",
            "ample_power",
            "pipeline",
            "value",
            "positive",
            "timings_ms",
        ];
        let positions: Vec<usize> = keys
            .iter()
            .map(|k| json.find(&format!("\"{k}\":")).unwrap())
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{json}");
        assert!(!json.contains("\"values\"") && !json.contains("\"basis\""));
        assert!(rep.value.denom() > &0.into());
    }
}
