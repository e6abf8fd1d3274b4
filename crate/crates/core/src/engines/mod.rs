//! Desk-scale verification and search for the product Ramsey theorem, the
//! dual Ramsey theorem with constants, and the two product statements built
//! from them (plain `≪`-cones and twisted-product cones).
//!
//! Every verifier reduces its statement to a [`ColoringProblem`] and runs the
//! exhaustive search in [`coloring`]. Counterexamples are re-checked against
//! the problem before they are returned.

pub mod coloring;

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::combinat::{k_subsets, product, subsets};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::linext::OrderedExtensionSpace;
use crate::rigsurj::{enumerate_rs, ll, twisted_compose, AnchoredRigidSurjection, Anchors, Tuple};
use crate::structures::RawStructure;

pub use coloring::{ColoringProblem, SearchOutcome, SearchVerdict, Strategy};

/// What a certificate is about, in enough detail to rebuild the instance
/// from scratch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Product {
        n: usize,
        k: usize,
        l: usize,
        m: usize,
    },
    Dual {
        m: usize,
        anchors: Vec<usize>,
        a_len: usize,
        a_anchor: Vec<usize>,
        b_len: usize,
        b_anchor: Vec<usize>,
    },
    Prop2 {
        m: usize,
        n: usize,
        anchors: Vec<usize>,
        a_len: usize,
        a_anchor: Vec<usize>,
        b_len: usize,
        b_anchor: Vec<usize>,
        k: usize,
        l: usize,
    },
    Prop5 {
        m: usize,
        n: usize,
        anchors: Vec<usize>,
        a_space: SpaceDescription,
        a_anchor: Vec<usize>,
        b_space: SpaceDescription,
        b_anchor: Vec<usize>,
    },
    RamseyWitness {
        z: RawStructure,
        x: RawStructure,
        y: RawStructure,
    },
    /// `F • R` for `F = (n choose |Y|)^m × (m, ı / B, b)_rs` and
    /// `R = (Y choose |X|)^m × (B, b / A, a)_rs`.
    TwistedFamily {
        m: usize,
        n: usize,
        anchors: Vec<usize>,
        a_space: SpaceDescription,
        a_anchor: Vec<usize>,
        b_space: SpaceDescription,
        b_anchor: Vec<usize>,
    },
    /// `G • S` for `G` the embeddings of `y` into the grid `n^m` and `S` the
    /// embeddings of `x` into `y`.
    EmbeddingFamily {
        m: usize,
        n: usize,
        anchors: Vec<usize>,
        x: RawStructure,
        y: RawStructure,
    },
}

/// A family of linear orders on one ground set, listed by position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDescription {
    pub reference: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl From<&OrderedExtensionSpace> for SpaceDescription {
    fn from(space: &OrderedExtensionSpace) -> Self {
        SpaceDescription {
            reference: space.reference().enumeration().to_vec(),
            members: space.members().iter().map(|m| m.enumeration().to_vec()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredObject {
    pub object: Value,
    pub color: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    WitnessHolds,
    Counterexample { coloring: Vec<ColoredObject> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringCertificate {
    pub instance: Instance,
    pub colors: usize,
    pub objects: usize,
    pub targets: usize,
    /// Partial colorings visited by the search.
    pub nodes: u64,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl ColoringCertificate {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, Verdict::WitnessHolds)
    }

    pub fn counterexample(&self) -> Option<&[ColoredObject]> {
        match &self.verdict {
            Verdict::Counterexample { coloring } => Some(coloring),
            Verdict::WitnessHolds => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }
}

/// Runs the search and packages the outcome, re-checking any bad coloring.
pub fn certify(
    problem: &ColoringProblem,
    instance: Instance,
    colors: usize,
    config: &RunConfig,
    strategy: Strategy,
) -> Result<ColoringCertificate> {
    let outcome = coloring::search(problem, colors, config, strategy)?;
    let verdict = match outcome.verdict {
        SearchVerdict::Holds => Verdict::WitnessHolds,
        SearchVerdict::Bad(coloring) => {
            if let Some(cone) = problem.find_homogeneous(&coloring) {
                return Err(Error::Postcondition(format!(
                    "reported bad coloring makes target {} monochromatic",
                    problem.cone_label(cone)
                )));
            }
            Verdict::Counterexample {
                coloring: coloring
                    .iter()
                    .zip(problem.object_labels())
                    .map(|(&color, label)| ColoredObject {
                        object: label.clone(),
                        color,
                    })
                    .collect(),
            }
        }
    };
    Ok(ColoringCertificate {
        instance,
        colors,
        objects: problem.objects(),
        targets: problem.cones().len(),
        nodes: outcome.nodes,
        verdict,
    })
}

/// `(m, n, ı)` for the product statements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessParams {
    pub m: usize,
    pub n: usize,
    pub anchors: Vec<usize>,
}

impl WitnessParams {
    pub fn new(m: usize, n: usize, anchors: Vec<usize>) -> Result<Self> {
        Anchors::new(anchors.clone(), m)?;
        Ok(WitnessParams { m, n, anchors })
    }

    pub fn frame_anchors(&self) -> Anchors {
        Anchors::new(self.anchors.clone(), self.m).expect("validated on construction")
    }
}

fn guard_count(what: &str, count: u128, config: &RunConfig) -> Result<()> {
    if count > config.max_domain as u128 {
        return Err(Error::infeasible(what, count, config.max_domain));
    }
    Ok(())
}

fn sets_label(sets: &[Vec<usize>]) -> Value {
    json!(sets)
}

/// `(n choose k)^m` as the colored domain; one cone per `T ∈ (n choose l)^m`.
pub fn product_problem(n: usize, k: usize, l: usize, m: usize, config: &RunConfig) -> Result<ColoringProblem> {
    if !(k <= l && l <= n) {
        return Err(Error::Precondition(format!("need k <= l <= n, got k={k} l={l} n={n}")));
    }
    let per_coord = crate::combinat::binomial(n, k);
    guard_count(
        "product domain",
        crate::combinat::saturating_pow(per_coord, m as u128),
        config,
    )?;
    let targets_per = crate::combinat::binomial(n, l);
    guard_count(
        "product targets",
        crate::combinat::saturating_pow(targets_per, m as u128),
        config,
    )?;
    let factor = k_subsets(n, k);
    let objects = product(&vec![factor; m]);
    let index: HashMap<&Vec<Vec<usize>>, usize> = objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let targets = product(&vec![k_subsets(n, l); m]);
    let mut cones = Vec::with_capacity(targets.len());
    for t in &targets {
        let inner: Vec<Vec<Vec<usize>>> = t.iter().map(|ti| subsets(ti, k)).collect();
        cones.push(product(&inner).iter().map(|s| index[s]).collect());
    }
    let object_labels = objects.iter().map(|o| sets_label(o)).collect();
    let cone_labels = targets.iter().map(|t| sets_label(t)).collect();
    ColoringProblem::new(object_labels, cones, cone_labels)
}

/// Is `n` a witness for the product Ramsey theorem with `d` colors and
/// parameters `k, l, m`?
pub fn verify_product_witness(
    n: usize,
    d: usize,
    k: usize,
    l: usize,
    m: usize,
    config: &RunConfig,
) -> Result<ColoringCertificate> {
    let problem = product_problem(n, k, l, m, config)?;
    certify(&problem, Instance::Product { n, k, l, m }, d, config, Strategy::default())
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductSearch {
    pub n: usize,
    pub certificate: ColoringCertificate,
    /// The counterexample at `n - 1`, when `n - 1 >= l`.
    pub previous: Option<ColoringCertificate>,
}

/// Least `n` in `l..=n_max` for which the product statement holds.
pub fn search_product(d: usize, k: usize, l: usize, m: usize, n_max: usize, config: &RunConfig) -> Result<ProductSearch> {
    let mut previous = None;
    for n in l..=n_max {
        let cert = verify_product_witness(n, d, k, l, m, config)?;
        if cert.holds() {
            return Ok(ProductSearch {
                n,
                certificate: cert,
                previous,
            });
        }
        previous = Some(cert);
    }
    Err(Error::infeasible(
        "product witness search",
        format!("n > {n_max}"),
        format!("n_max = {n_max}"),
    ))
}

fn rs_label(r: &AnchoredRigidSurjection) -> Value {
    json!(r.map())
}

/// `(m, ı / A, a)_rs` as the domain; one cone `{s ∘ t : s ∈ (B, b / A, a)_rs}`
/// per `t ∈ (m, ı / B, b)_rs`.
pub fn dual_problem(
    frame: &Anchors,
    a_len: usize,
    a_anchor: &Anchors,
    b_len: usize,
    b_anchor: &Anchors,
    config: &RunConfig,
) -> Result<ColoringProblem> {
    let m = frame.ambient_len();
    let objects = enumerate_rs(m, a_len, frame, a_anchor)?;
    guard_count("dual domain", objects.len() as u128, config)?;
    let index: HashMap<&AnchoredRigidSurjection, usize> = objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let targets = enumerate_rs(m, b_len, frame, b_anchor)?;
    let between = enumerate_rs(b_len, a_len, b_anchor, a_anchor)?;
    let mut cones = Vec::with_capacity(targets.len());
    for t in &targets {
        let cone = between
            .iter()
            .map(|s| {
                let st = s.compose(t)?;
                index
                    .get(&st)
                    .copied()
                    .ok_or_else(|| Error::Postcondition("composite missing from the domain".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        cones.push(cone);
    }
    ColoringProblem::new(
        objects.iter().map(rs_label).collect(),
        cones,
        targets.iter().map(rs_label).collect(),
    )
}

fn check_sizes(a_len: usize, b_len: usize, m: usize) -> Result<()> {
    if !(a_len <= b_len && b_len <= m) {
        return Err(Error::Precondition(format!("need |A| <= |B| <= m, got {a_len}, {b_len}, {m}")));
    }
    Ok(())
}

/// Is `(m, ı)` a witness for the dual Ramsey theorem with constants?
pub fn verify_dual_witness(
    frame: &Anchors,
    d: usize,
    a_len: usize,
    a_anchor: &Anchors,
    b_len: usize,
    b_anchor: &Anchors,
    config: &RunConfig,
) -> Result<ColoringCertificate> {
    check_sizes(a_len, b_len, frame.ambient_len())?;
    let problem = dual_problem(frame, a_len, a_anchor, b_len, b_anchor, config)?;
    let instance = Instance::Dual {
        m: frame.ambient_len(),
        anchors: frame.positions().to_vec(),
        a_len,
        a_anchor: a_anchor.positions().to_vec(),
        b_len,
        b_anchor: b_anchor.positions().to_vec(),
    };
    certify(&problem, instance, d, config, Strategy::default())
}

#[derive(Debug, Clone, Serialize)]
pub struct DualSearch {
    pub m: usize,
    pub anchors: Vec<usize>,
    pub certificate: ColoringCertificate,
}

/// Least `m` in `|B|..=m_max` (then lexicographically least `ı`) for which
/// the dual statement holds.
pub fn search_dual(
    d: usize,
    a_len: usize,
    a_anchor: &Anchors,
    b_len: usize,
    b_anchor: &Anchors,
    m_max: usize,
    config: &RunConfig,
) -> Result<DualSearch> {
    for m in b_len..=m_max {
        for frame in Anchors::all(a_anchor.p(), m) {
            let cert = verify_dual_witness(&frame, d, a_len, a_anchor, b_len, b_anchor, config)?;
            if cert.holds() {
                return Ok(DualSearch {
                    m,
                    anchors: frame.positions().to_vec(),
                    certificate: cert,
                });
            }
        }
    }
    Err(Error::infeasible(
        "dual witness search",
        format!("m > {m_max}"),
        format!("m_max = {m_max}"),
    ))
}

/// Big integers go out as decimal strings.
pub(crate) fn decimal<S: serde::Serializer>(value: &BigUint, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&value.to_string())
}

/// How the product parameter `n` is obtained when composing a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "oracle", rename_all = "snake_case")]
pub enum ProductOracle {
    /// Search `n` up to `n_max` with the induced color count.
    Search { n_max: usize },
    /// A claimed `n`, verified when feasible.
    Known { n: usize },
    /// Do not compute `n`.
    Symbolic,
}

/// Witness parameters assembled from a dual witness `(m, ı)` and a product
/// witness `n` for `d^|(m, ı / A, a)_rs|` colors.
#[derive(Debug, Clone, Serialize)]
pub struct ComposedWitness {
    pub m: usize,
    pub anchors: Vec<usize>,
    /// `None` when `n` could not be computed at desk scale.
    pub n: Option<usize>,
    /// `|(m, ı / A, a)_rs|`.
    pub rs_count: usize,
    /// `d^rs_count`, exactly.
    #[serde(serialize_with = "decimal")]
    pub color_count: BigUint,
    /// True when `n` was machine-checked for `color_count` colors.
    pub verified: bool,
    /// Human-readable description of what `n` stands for when unverified.
    pub note: Option<String>,
    pub dual_certificate: ColoringCertificate,
    pub product_certificate: Option<ColoringCertificate>,
}

impl ComposedWitness {
    pub fn params(&self) -> Option<WitnessParams> {
        self.n.map(|n| WitnessParams {
            m: self.m,
            n,
            anchors: self.anchors.clone(),
        })
    }
}

/// Follows the two-step construction: a dual witness `(m, ı)` for `d`
/// colors, then a product witness `n` for `d^|(m, ı / A, a)_rs|` colors.
#[allow(clippy::too_many_arguments)]
pub fn compose_prop2_witness(
    d: usize,
    a_len: usize,
    a_anchor: &Anchors,
    b_len: usize,
    b_anchor: &Anchors,
    k: usize,
    l: usize,
    dual_frame: &Anchors,
    oracle: ProductOracle,
    config: &RunConfig,
) -> Result<ComposedWitness> {
    let dual_certificate = verify_dual_witness(dual_frame, d, a_len, a_anchor, b_len, b_anchor, config)?;
    if !dual_certificate.holds() {
        return Err(Error::Precondition(
            "the supplied (m, ı) is not a dual Ramsey witness for d colors".into(),
        ));
    }
    let m = dual_frame.ambient_len();
    let rs_count = enumerate_rs(m, a_len, dual_frame, a_anchor)?.len();
    let color_count = BigUint::from(d).pow(rs_count as u32);
    let colors: Option<usize> = usize::try_from(&color_count).ok();
    let symbolic_note = |why: &str| {
        Some(format!(
            "n = least product Ramsey witness for {d}^{rs_count} colors, k = {k}, l = {l}, m = {m} ({why})"
        ))
    };
    let (n, verified, note, product_certificate) = match (oracle, colors) {
        (ProductOracle::Symbolic, _) => (None, false, symbolic_note("not computed"), None),
        (_, None) => (None, false, symbolic_note("color count exceeds machine range"), None),
        (ProductOracle::Search { n_max }, Some(c)) => match search_product(c, k, l, m, n_max, config) {
            Ok(found) => (Some(found.n), true, None, Some(found.certificate)),
            Err(e) if e.is_infeasible() => (None, false, symbolic_note("search infeasible at desk scale"), None),
            Err(e) => return Err(e),
        },
        (ProductOracle::Known { n }, Some(c)) => match verify_product_witness(n, c, k, l, m, config) {
            Ok(cert) if cert.holds() => (Some(n), true, None, Some(cert)),
            Ok(_) => {
                return Err(Error::Precondition(format!(
                    "n = {n} is not a product witness for {c} colors"
                )))
            }
            Err(e) if e.is_infeasible() => (Some(n), false, Some(format!("n = {n} supplied, not verified")), None),
            Err(e) => return Err(e),
        },
    };
    Ok(ComposedWitness {
        m,
        anchors: dual_frame.positions().to_vec(),
        n,
        rs_count,
        color_count,
        verified,
        note,
        dual_certificate,
        product_certificate,
    })
}

/// `(n choose k)^m × (m, ı / A, a)_rs` as tuples, in lexicographic order.
pub fn framed_tuples(n: usize, k: usize, frame: &Anchors, a_len: usize, a_anchor: &Anchors, config: &RunConfig) -> Result<Vec<Tuple>> {
    let m = frame.ambient_len();
    let rs = enumerate_rs(m, a_len, frame, a_anchor)?;
    let count = crate::combinat::saturating_pow(crate::combinat::binomial(n, k), m as u128).saturating_mul(rs.len() as u128);
    guard_count("tuple domain", count, config)?;
    let set_tuples = product(&vec![k_subsets(n, k); m]);
    let mut out = Vec::with_capacity(count as usize);
    for sets in &set_tuples {
        for r in &rs {
            out.push(Tuple::new(sets.clone(), r.clone())?);
        }
    }
    Ok(out)
}

/// Domain `(n choose k)^m × (m, ı / A, a)_rs`; one cone per
/// `τ ∈ (n choose l)^m × (m, ı / B, b)_rs`, namely every domain element `≪ τ`.
#[allow(clippy::too_many_arguments)]
pub fn prop2_problem(
    params: &WitnessParams,
    a_len: usize,
    a_anchor: &Anchors,
    b_len: usize,
    b_anchor: &Anchors,
    k: usize,
    l: usize,
    config: &RunConfig,
) -> Result<ColoringProblem> {
    if !(k <= l && l <= params.n) {
        return Err(Error::Precondition(format!("need k <= l <= n, got k={k} l={l} n={}", params.n)));
    }
    let frame = params.frame_anchors();
    let objects = framed_tuples(params.n, k, &frame, a_len, a_anchor, config)?;
    let targets = framed_tuples(params.n, l, &frame, b_len, b_anchor, config)?;
    let mut cones = Vec::with_capacity(targets.len());
    for tau in &targets {
        let mut cone = Vec::new();
        for (i, sigma) in objects.iter().enumerate() {
            if ll(sigma, tau)? {
                cone.push(i);
            }
        }
        cones.push(cone);
    }
    ColoringProblem::new(
        objects.iter().map(Tuple::to_json_value).collect(),
        cones,
        targets.iter().map(Tuple::to_json_value).collect(),
    )
}

#[allow(clippy::too_many_arguments)]
pub fn verify_prop2_witness(
    params: &WitnessParams,
    d: usize,
    a_len: usize,
    a_anchor: &Anchors,
    b_len: usize,
    b_anchor: &Anchors,
    k: usize,
    l: usize,
    config: &RunConfig,
) -> Result<ColoringCertificate> {
    let problem = prop2_problem(params, a_len, a_anchor, b_len, b_anchor, k, l, config)?;
    let instance = Instance::Prop2 {
        m: params.m,
        n: params.n,
        anchors: params.anchors.clone(),
        a_len,
        a_anchor: a_anchor.positions().to_vec(),
        b_len,
        b_anchor: b_anchor.positions().to_vec(),
        k,
        l,
    };
    certify(&problem, instance, d, config, Strategy::default())
}

/// `σ ∈ (Y choose |X|)^m × (B, b / A, a)_rs`, lexicographic.
pub fn sigma_family(
    m: usize,
    a_space: &OrderedExtensionSpace,
    a_anchor: &Anchors,
    b_space: &OrderedExtensionSpace,
    b_anchor: &Anchors,
) -> Result<Vec<Tuple>> {
    let y = b_space.ground_set();
    let k = a_space.reference().len();
    let rs = enumerate_rs(b_space.len(), a_space.len(), b_anchor, a_anchor)?;
    let set_tuples = product(&vec![subsets(&y, k); m]);
    let mut out = Vec::with_capacity(set_tuples.len() * rs.len());
    for sets in &set_tuples {
        for r in &rs {
            out.push(Tuple::new(sets.clone(), r.clone())?);
        }
    }
    Ok(out)
}

/// Domain `(n choose |X|)^m × (m, ı / A, a)_rs`; one cone per
/// `τ_0 ∈ (n choose |Y|)^m × (m, ı / B, b)_rs`, namely `{τ_0 · σ}` over the
/// whole σ-family.
pub fn prop5_problem(
    params: &WitnessParams,
    a_space: &OrderedExtensionSpace,
    a_anchor: &Anchors,
    b_space: &OrderedExtensionSpace,
    b_anchor: &Anchors,
    config: &RunConfig,
) -> Result<ColoringProblem> {
    let (objects, cones, targets) = twisted_cones(params, a_space, a_anchor, b_space, b_anchor, config, true)?;
    ColoringProblem::new(
        objects.iter().map(Tuple::to_json_value).collect(),
        cones,
        targets.iter().map(Tuple::to_json_value).collect(),
    )
}

pub(crate) type TwistedCones = (Vec<Tuple>, Vec<Vec<usize>>, Vec<Tuple>);

/// Objects, cones and targets for the twisted statement. With
/// `full_domain` the objects are all of `(n choose |X|)^m × (m, ı / A, a)_rs`;
/// otherwise only those that occur in some cone.
pub(crate) fn twisted_cones(
    params: &WitnessParams,
    a_space: &OrderedExtensionSpace,
    a_anchor: &Anchors,
    b_space: &OrderedExtensionSpace,
    b_anchor: &Anchors,
    config: &RunConfig,
    full_domain: bool,
) -> Result<TwistedCones> {
    let k = a_space.reference().len();
    let l = b_space.reference().len();
    if !(k <= l && l <= params.n) {
        return Err(Error::Precondition(format!(
            "need |X| <= |Y| <= n, got {k}, {l}, {}",
            params.n
        )));
    }
    let frame = params.frame_anchors();
    let targets = framed_tuples(params.n, l, &frame, b_space.len(), b_anchor, config)?;
    let sigmas = sigma_family(params.m, a_space, a_anchor, b_space, b_anchor)?;
    let mut objects: Vec<Tuple> = if full_domain {
        framed_tuples(params.n, k, &frame, a_space.len(), a_anchor, config)?
    } else {
        Vec::new()
    };
    let mut index: HashMap<Tuple, usize> = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
    let mut cones = Vec::with_capacity(targets.len());
    for tau in &targets {
        let mut cone = Vec::with_capacity(sigmas.len());
        for sigma in &sigmas {
            let product = twisted_compose(tau, b_space.members(), sigma)?;
            let next = index.len();
            let id = match index.get(&product) {
                Some(&id) => id,
                None if full_domain => {
                    return Err(Error::Postcondition("twisted product outside the domain".into()));
                }
                None => {
                    index.insert(product.clone(), next);
                    objects.push(product);
                    next
                }
            };
            cone.push(id);
        }
        cones.push(cone);
    }
    guard_count("twisted domain", objects.len() as u128, config)?;
    Ok((objects, cones, targets))
}

pub fn verify_prop5_witness(
    params: &WitnessParams,
    d: usize,
    a_space: &OrderedExtensionSpace,
    a_anchor: &Anchors,
    b_space: &OrderedExtensionSpace,
    b_anchor: &Anchors,
    config: &RunConfig,
) -> Result<ColoringCertificate> {
    let problem = prop5_problem(params, a_space, a_anchor, b_space, b_anchor, config)?;
    let instance = Instance::Prop5 {
        m: params.m,
        n: params.n,
        anchors: params.anchors.clone(),
        a_space: a_space.into(),
        a_anchor: a_anchor.positions().to_vec(),
        b_space: b_space.into(),
        b_anchor: b_anchor.positions().to_vec(),
    };
    certify(&problem, instance, d, config, Strategy::default())
}
