//! Two pairs of families over a partial composition, and the interpretation
//! of the embedding pair in the twisted-product pair.
//!
//! The twisted pair lives on tuples: its `F`-members are
//! `(n choose l)^m × (m, ı / B, b)_rs` and its `R`-members
//! `(l choose k)^m × (B, b / A, a)_rs`, composed by the twisted product. The
//! embedding pair lives on embeddings: `G`-members are the embeddings of the
//! `l`-structure into a grid and `S`-members the embeddings of the
//! `k`-structure into the `l`-structure, composed as maps.
//!
//! `α(s) = (s[k], ..., s[k], r ∘ res_{s[k]})` and `φ(τ) = π^τ` interpret the
//! second pair in the first; [`check_interpretation`] tests the defining
//! implication exhaustively.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::engines::{
    certify, framed_tuples, twisted_cones, verify_dual_witness, ColoringCertificate, ColoringProblem, Instance,
    SpaceDescription, Strategy, WitnessParams,
};
use crate::error::{Error, Result};
use crate::grid::{grid_structure, pi_tau, pi_tau_coords, FramedStructure, GridStructure};
use crate::linext::{res_x, LinearOrder};
use crate::rigsurj::{twisted_compose, AnchoredRigidSurjection, Tuple};
use crate::structures::{enumerate_embeddings, enumerate_embeddings_limited, Embedding, Structure};

/// The data shared by both pairs: the `k`- and `l`-structures (relabeled
/// with `L_0` natural) and the grid parameters `(m, n, ı)`.
#[derive(Debug, Clone)]
pub struct InterpretationFrame {
    pub x: FramedStructure,
    pub y: FramedStructure,
    pub params: WitnessParams,
    grid: GridStructure,
}

impl InterpretationFrame {
    pub fn new(x: &Structure, y: &Structure, params: WitnessParams, config: &RunConfig) -> Result<Self> {
        if x.p() != y.p() {
            return Err(Error::ArityMismatch { left: x.p(), right: y.p() });
        }
        let frame = params.frame_anchors();
        if frame.p() != y.p() {
            return Err(Error::ArityMismatch {
                left: frame.p(),
                right: y.p(),
            });
        }
        let x = FramedStructure::new(x)?;
        let y = FramedStructure::new(y)?;
        if !(x.size() <= y.size() && y.size() <= params.n) {
            return Err(Error::Precondition(format!(
                "need k <= l <= n, got {}, {}, {}",
                x.size(),
                y.size(),
                params.n
            )));
        }
        let grid = grid_structure(params.n, params.m, &frame, config)?;
        Ok(InterpretationFrame { x, y, params, grid })
    }

    pub fn grid(&self) -> &GridStructure {
        &self.grid
    }

    /// The `S`-member: embeddings of the `k`-structure into the `l`-structure.
    pub fn s_member(&self) -> Result<Vec<Embedding>> {
        enumerate_embeddings(&self.x.structure, &self.y.structure)
    }

    /// The `F`-member `(n choose l)^m × (m, ı / B, b)_rs`.
    pub fn f_member(&self, config: &RunConfig) -> Result<Vec<Tuple>> {
        framed_tuples(
            self.params.n,
            self.y.size(),
            &self.params.frame_anchors(),
            self.y.space.len(),
            &self.y.anchors,
            config,
        )
    }

    /// Whether `sigma` lies in `R = (l choose k)^m × (B, b / A, a)_rs`.
    pub fn in_r(&self, sigma: &Tuple) -> bool {
        let (k, l) = (self.x.size(), self.y.size());
        sigma.m() == self.params.m
            && sigma.sets().iter().all(|s| s.len() == k && s.iter().all(|&e| e < l))
            && sigma.rs().source_len() == self.y.space.len()
            && sigma.rs().target_len() == self.x.space.len()
            && sigma.rs().source_anchor() == &self.y.anchors
            && sigma.rs().target_anchor() == &self.x.anchors
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AlphaVariant {
    #[default]
    Faithful,
    /// Ignores `s`: every set is `{0, ..., k-1}`. Used to check that
    /// [`check_interpretation`] detects a broken `α`.
    FixedSets,
}

/// `α(s) = (s[k], ..., s[k], r ∘ res_{s[k]})`, `r` being the isomorphism of
/// extension spaces that `s` induces.
pub fn alpha(frame: &InterpretationFrame, s: &Embedding, variant: AlphaVariant) -> Result<Tuple> {
    if !s.is_embedding(&frame.x.structure, &frame.y.structure)? {
        return Err(Error::Precondition("s is not an embedding of the k-structure".into()));
    }
    let image = s.image();
    let restriction = res_x(&frame.y.space, &image, &frame.y.anchors)?;
    // r: an order on s[k] pulls back along s to an order on k.
    let inverse: HashMap<usize, usize> = s.map.iter().enumerate().map(|(x, &y)| (y, x)).collect();
    let r: Vec<usize> = restriction
        .target
        .members()
        .iter()
        .map(|order| {
            let pulled = LinearOrder::new(order.enumeration().iter().map(|y| inverse[y]).collect())?;
            frame
                .x
                .space
                .position(&pulled)
                .ok_or_else(|| Error::Postcondition(format!("{} is not an extension on k", pulled.word())))
        })
        .collect::<Result<_>>()?;
    let map = restriction.map.map().iter().map(|&j| r[j]).collect();
    let rs = AnchoredRigidSurjection::new(frame.x.space.len(), map, frame.y.anchors.clone(), frame.x.anchors.clone())?;
    let set = match variant {
        AlphaVariant::Faithful => image,
        AlphaVariant::FixedSets => (0..frame.x.size()).collect(),
    };
    let sigma = Tuple::new(vec![set; frame.params.m], rs)?;
    if !frame.in_r(&sigma) {
        return Err(Error::Postcondition("α(s) lies outside R".into()));
    }
    Ok(sigma)
}

/// `φ(τ) = π^τ`.
pub fn phi(frame: &InterpretationFrame, tau: &Tuple) -> Result<Embedding> {
    Ok(pi_tau(tau, &frame.y, &frame.grid)?.to_embedding(frame.params.n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub f1: Tuple,
    pub s1: Embedding,
    pub f2: Tuple,
    pub s2: Embedding,
    /// The common value `f1·α(s1) = f2·α(s2)`.
    pub product: Tuple,
    /// `φ(f1) ∘ s1` and `φ(f2) ∘ s2` as grid points.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterpretationReport {
    pub holds: bool,
    pub f_size: usize,
    pub s_size: usize,
    pub violation: Option<Violation>,
}

fn in_pool<T: Send>(config: &RunConfig, work: impl FnOnce() -> T + Send) -> Result<T> {
    if config.jobs <= 1 {
        return Ok(work());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    Ok(pool.install(work))
}

/// Each member paired with its key.
type Keyed = Vec<(Tuple, Vec<usize>)>;

/// Tests `f1·α(s1) = f2·α(s2) ⟹ φ(f1)∘s1 = φ(f2)∘s2` over all of `F × S`,
/// reporting the first violation in enumeration order.
pub fn check_interpretation(frame: &InterpretationFrame, variant: AlphaVariant, config: &RunConfig) -> Result<InterpretationReport> {
    let fs = frame.f_member(config)?;
    let ss = frame.s_member()?;
    let pairs = (fs.len() as u128) * (ss.len() as u128);
    if pairs > config.max_colorings as u128 {
        return Err(Error::infeasible("interpretation check", format!("{pairs} pairs"), format!("{} pairs", config.max_colorings)));
    }
    let alphas = ss.iter().map(|s| alpha(frame, s, variant)).collect::<Result<Vec<_>>>()?;
    let b = frame.y.space.members();
    let keys: Vec<Result<Keyed>> = in_pool(config, || {
        fs.par_iter()
            .map(|f| {
                let image = phi(frame, f)?;
                ss.iter()
                    .zip(&alphas)
                    .map(|(s, a)| Ok((twisted_compose(f, b, a)?, image.compose(s).map)))
                    .collect()
            })
            .collect()
    })?;
    let mut seen: HashMap<Tuple, (usize, usize)> = HashMap::new();
    let mut table = Vec::with_capacity(keys.len());
    for row in keys {
        table.push(row?);
    }
    for (fi, row) in table.iter().enumerate() {
        for (si, (product, composite)) in row.iter().enumerate() {
            match seen.get(product) {
                None => {
                    seen.insert(product.clone(), (fi, si));
                }
                Some(&(fj, sj)) if &table[fj][sj].1 != composite => {
                    return Ok(InterpretationReport {
                        holds: false,
                        f_size: fs.len(),
                        s_size: ss.len(),
                        violation: Some(Violation {
                            f1: fs[fj].clone(),
                            s1: ss[sj].clone(),
                            f2: fs[fi].clone(),
                            s2: ss[si].clone(),
                            product: product.clone(),
                            left: table[fj][sj].1.clone(),
                            right: composite.clone(),
                        }),
                    });
                }
                Some(_) => {}
            }
        }
    }
    Ok(InterpretationReport {
        holds: true,
        f_size: fs.len(),
        s_size: ss.len(),
        violation: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub holds: bool,
    pub checked: usize,
    /// First `(τ, s)` with `π^{τ·α(s)} ≠ φ(τ) ∘ s`.
    pub failure: Option<(Tuple, Embedding)>,
}

/// Checks `π^{τ·α(s)} = φ(τ) ∘ s` for every `τ ∈ F` and `s ∈ S`.
pub fn check_identity(frame: &InterpretationFrame, config: &RunConfig) -> Result<IdentityReport> {
    let fs = frame.f_member(config)?;
    let ss = frame.s_member()?;
    let b = frame.y.space.members();
    let mut checked = 0;
    for tau in &fs {
        let image = phi(frame, tau)?;
        for s in &ss {
            let product = twisted_compose(tau, b, &alpha(frame, s, AlphaVariant::Faithful)?)?;
            let direct: Vec<usize> = pi_tau_coords(&product, &frame.x.space)?
                .iter()
                .map(|c| crate::grid::point_index(c, frame.params.n))
                .collect();
            checked += 1;
            if direct != image.compose(s).map {
                return Ok(IdentityReport {
                    holds: false,
                    checked,
                    failure: Some((tau.clone(), s.clone())),
                });
            }
        }
    }
    Ok(IdentityReport {
        holds: true,
        checked,
        failure: None,
    })
}

/// Whether the `R`-member carries a machine-checked dual Ramsey witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DualStatus {
    Verified,
    /// The dual check exceeded the ceilings; membership is taken on trust.
    Assumed,
    /// `(m, ı)` is not a dual witness, so `R` is not a member.
    Refuted,
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberTrial {
    pub params: WitnessParams,
    /// `None` when the check exceeded the ceilings.
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RamseyConditionReport {
    pub holds: bool,
    /// The member that certifies the condition.
    pub member: Option<WitnessParams>,
    pub certificate: Option<ColoringCertificate>,
    pub trials: Vec<MemberTrial>,
    /// Only for the twisted pair.
    pub dual: Option<DualStatus>,
}

/// The `F • R` coloring problem for the twisted pair at `params`.
pub fn twisted_family_problem(frame: &InterpretationFrame, config: &RunConfig) -> Result<ColoringProblem> {
    let (objects, cones, targets) =
        twisted_cones(&frame.params, &frame.x.space, &frame.x.anchors, &frame.y.space, &frame.y.anchors, config, false)?;
    ColoringProblem::new(
        objects.iter().map(Tuple::to_json_value).collect(),
        cones,
        targets.iter().map(Tuple::to_json_value).collect(),
    )
}

/// The `G • S` coloring problem for the embedding pair: `G` the embeddings of
/// the `l`-structure into the grid, composed with every `s ∈ S`.
pub fn embedding_family_problem(frame: &InterpretationFrame, config: &RunConfig) -> Result<ColoringProblem> {
    let ss = frame.s_member()?;
    let gs = enumerate_embeddings_limited(&frame.y.structure, frame.grid.structure(), config.max_domain)?;
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut objects = Vec::new();
    let mut cones = Vec::with_capacity(gs.len());
    for g in &gs {
        let cone = ss
            .iter()
            .map(|s| {
                let composite = g.compose(s).map;
                let next = objects.len();
                *index.entry(composite.clone()).or_insert_with(|| {
                    objects.push(composite);
                    next
                })
            })
            .collect();
        cones.push(cone);
    }
    if objects.len() > config.max_domain {
        return Err(Error::infeasible("embedding family", format!("{} objects", objects.len()), format!("{} objects", config.max_domain)));
    }
    ColoringProblem::new(
        objects.iter().map(|o| json!(o)).collect(),
        cones,
        gs.iter().map(|g| json!(g.map)).collect(),
    )
}

fn twisted_instance(frame: &InterpretationFrame) -> Instance {
    Instance::TwistedFamily {
        m: frame.params.m,
        n: frame.params.n,
        anchors: frame.params.anchors.clone(),
        a_space: SpaceDescription::from(&frame.x.space),
        a_anchor: frame.x.anchors.positions().to_vec(),
        b_space: SpaceDescription::from(&frame.y.space),
        b_anchor: frame.y.anchors.positions().to_vec(),
    }
}

fn embedding_instance(frame: &InterpretationFrame) -> Instance {
    Instance::EmbeddingFamily {
        m: frame.params.m,
        n: frame.params.n,
        anchors: frame.params.anchors.clone(),
        x: frame.x.structure.to_raw(),
        y: frame.y.structure.to_raw(),
    }
}

/// Which pair [`ramsey_condition_check`] works on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    Twisted,
    Embedding,
}

/// Certificate for one member, `None` when it exceeds the ceilings.
pub fn check_member(frame: &InterpretationFrame, kind: PairKind, d: usize, config: &RunConfig) -> Result<Option<ColoringCertificate>> {
    let built = match kind {
        PairKind::Twisted => twisted_family_problem(frame, config).map(|p| (p, twisted_instance(frame))),
        PairKind::Embedding => embedding_family_problem(frame, config).map(|p| (p, embedding_instance(frame))),
    };
    let (problem, instance) = match built {
        Ok(b) => b,
        Err(e) if e.is_infeasible() => return Ok(None),
        Err(e) => return Err(e),
    };
    match certify(&problem, instance, d, config, Strategy::default()) {
        Ok(cert) => Ok(Some(cert)),
        Err(e) if e.is_infeasible() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Searches `n = l, ..., n_max` for a member certifying the `d`-Ramsey
/// condition of the chosen pair at fixed `(m, ı)`.
#[allow(clippy::too_many_arguments)]
pub fn ramsey_condition_check(
    kind: PairKind,
    x: &Structure,
    y: &Structure,
    m: usize,
    anchors: &[usize],
    d: usize,
    n_max: usize,
    config: &RunConfig,
) -> Result<RamseyConditionReport> {
    let mut report = RamseyConditionReport {
        holds: false,
        member: None,
        certificate: None,
        trials: Vec::new(),
        dual: None,
    };
    for n in y.size()..=n_max {
        let params = WitnessParams::new(m, n, anchors.to_vec())?;
        let frame = match InterpretationFrame::new(x, y, params.clone(), config) {
            Ok(f) => f,
            Err(e) if e.is_infeasible() => {
                report.trials.push(MemberTrial { params, holds: None });
                continue;
            }
            Err(e) => return Err(e),
        };
        if kind == PairKind::Twisted && report.dual.is_none() {
            report.dual = Some(
                match verify_dual_witness(
                    &frame.params.frame_anchors(),
                    d,
                    frame.x.space.len(),
                    &frame.x.anchors,
                    frame.y.space.len(),
                    &frame.y.anchors,
                    config,
                ) {
                    Ok(c) if c.holds() => DualStatus::Verified,
                    Ok(_) => DualStatus::Refuted,
                    Err(e) if e.is_infeasible() => DualStatus::Assumed,
                    Err(e) => return Err(e),
                },
            );
        }
        let cert = check_member(&frame, kind, d, config)?;
        let holds = cert.as_ref().map(ColoringCertificate::holds);
        report.trials.push(MemberTrial {
            params: params.clone(),
            holds,
        });
        if holds == Some(true) {
            report.holds = true;
            report.member = Some(params);
            report.certificate = cert;
            return Ok(report);
        }
    }
    Ok(report)
}

/// The transfer from the twisted pair to the embedding pair, run end to end.
#[derive(Debug, Clone, Serialize)]
pub struct TransferReport {
    pub twisted: RamseyConditionReport,
    pub interpretation: Option<InterpretationReport>,
    /// The embedding pair checked at the member found for the twisted pair.
    pub embedding: Option<ColoringCertificate>,
    /// False only if the twisted condition and the interpretation both hold
    /// while the corresponding embedding member fails.
    pub consistent: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn transfer(
    x: &Structure,
    y: &Structure,
    m: usize,
    anchors: &[usize],
    d: usize,
    n_max: usize,
    config: &RunConfig,
) -> Result<TransferReport> {
    let twisted = ramsey_condition_check(PairKind::Twisted, x, y, m, anchors, d, n_max, config)?;
    let Some(params) = twisted.member.clone() else {
        return Ok(TransferReport {
            twisted,
            interpretation: None,
            embedding: None,
            consistent: true,
        });
    };
    let frame = InterpretationFrame::new(x, y, params, config)?;
    let interpretation = check_interpretation(&frame, AlphaVariant::Faithful, config)?;
    let embedding = check_member(&frame, PairKind::Embedding, d, config)?;
    let consistent = !interpretation.holds || embedding.as_ref().is_none_or(ColoringCertificate::holds);
    Ok(TransferReport {
        twisted,
        interpretation: Some(interpretation),
        embedding,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::PartialOrder;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    fn params(m: usize, n: usize) -> WitnessParams {
        WitnessParams::new(m, n, vec![0]).unwrap()
    }

    fn chain(n: usize) -> Structure {
        Structure::chain(n, 1).unwrap()
    }

    fn v_poset() -> Structure {
        // 0 < 2, 1 < 2 with L_0 natural.
        let p = PartialOrder::from_pairs(3, &[(0, 2), (1, 2)]).unwrap();
        Structure::new(p, vec![LinearOrder::natural(3)]).unwrap()
    }

    #[test]
    fn alpha_examples() {
        let frame = InterpretationFrame::new(&chain(2), &chain(2), params(1, 2), &cfg()).unwrap();
        let a = alpha(&frame, &Embedding::identity(2), AlphaVariant::Faithful).unwrap();
        assert_eq!(a.sets(), &[vec![0, 1]]);
        assert_eq!(a.rs().map(), &[0]);

        let frame = InterpretationFrame::new(&chain(1), &chain(2), params(1, 3), &cfg()).unwrap();
        let a = alpha(&frame, &Embedding::new(vec![1]), AlphaVariant::Faithful).unwrap();
        assert_eq!(a.sets(), &[vec![1]]);

        // {0, 1} inside the V: B = {012, 102}, both restrict onto lin({0, 1}).
        let x = Structure::antichain(2, 1).unwrap();
        let frame = InterpretationFrame::new(&x, &v_poset(), params(2, 3), &cfg()).unwrap();
        assert_eq!(frame.y.space.len(), 2);
        assert_eq!(frame.x.space.len(), 2);
        let a = alpha(&frame, &Embedding::new(vec![0, 1]), AlphaVariant::Faithful).unwrap();
        assert_eq!(a.sets(), &[vec![0, 1], vec![0, 1]]);
        assert_eq!(a.rs().map(), &[0, 1]);
        assert!(frame.in_r(&a));
    }

    #[test]
    fn interpretation_holds_on_small_frames() {
        for (x, y, p) in [
            (chain(2), chain(2), params(1, 3)),
            (chain(1), chain(2), params(1, 3)),
            (chain(2), chain(3), params(1, 5)),
            (Structure::antichain(2, 1).unwrap(), v_poset(), params(2, 3)),
            (chain(1), Structure::antichain(2, 1).unwrap(), params(2, 3)),
        ] {
            let frame = InterpretationFrame::new(&x, &y, p, &cfg()).unwrap();
            let report = check_interpretation(&frame, AlphaVariant::Faithful, &cfg()).unwrap();
            assert!(report.holds, "{report:?}");
            assert!(check_identity(&frame, &cfg()).unwrap().holds);
        }
    }

    #[test]
    fn broken_alpha_is_detected() {
        let frame = InterpretationFrame::new(&chain(1), &chain(2), params(1, 3), &cfg()).unwrap();
        let report = check_interpretation(&frame, AlphaVariant::FixedSets, &cfg()).unwrap();
        assert!(!report.holds);
        let v = report.violation.unwrap();
        assert_eq!(v.f1, v.f2);
        assert_ne!(v.left, v.right);
    }

    #[test]
    fn parallel_report_matches() {
        let frame = InterpretationFrame::new(&chain(1), &chain(2), params(1, 4), &cfg()).unwrap();
        let one = check_interpretation(&frame, AlphaVariant::FixedSets, &cfg()).unwrap();
        let many = check_interpretation(&frame, AlphaVariant::FixedSets, &cfg().with_jobs(4)).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn ramsey_conditions() {
        let r = ramsey_condition_check(PairKind::Twisted, &chain(1), &chain(2), 1, &[0], 2, 5, &cfg()).unwrap();
        assert!(r.holds);
        assert_eq!(r.member.unwrap().n, 3);
        assert_eq!(r.dual, Some(DualStatus::Verified));

        let r = ramsey_condition_check(PairKind::Embedding, &chain(2), &chain(3), 1, &[0], 2, 7, &cfg()).unwrap();
        assert_eq!(r.member.unwrap().n, 6);
        let r = ramsey_condition_check(PairKind::Embedding, &chain(1), &chain(2), 1, &[0], 1, 4, &cfg()).unwrap();
        assert_eq!(r.member.unwrap().n, 2);
    }

    #[test]
    fn transfer_r33() {
        let t = transfer(&chain(2), &chain(3), 1, &[0], 2, 7, &cfg()).unwrap();
        assert!(t.consistent);
        assert_eq!(t.twisted.member.as_ref().unwrap().n, 6);
        assert!(t.interpretation.unwrap().holds);
        assert!(t.embedding.unwrap().holds());
    }
}
