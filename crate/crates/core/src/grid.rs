//! Grid structures `n^m` with the product order and rotated lexicographic
//! orders, the embeddings `π^τ` of a structure into a grid, and Ramsey
//! witnesses for structures.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::engines::{
    certify, compose_prop2_witness, decimal, search_dual, verify_prop5_witness, ColoringCertificate,
    ColoringProblem, Instance, ProductOracle, Strategy, WitnessParams,
};
use crate::error::{Error, Result};
use crate::linext::{res_x, LinearOrder, OrderedExtensionSpace};
use crate::rigsurj::{check_tau, coordinate_image, twisted_compose, Anchors, Tuple};
use crate::structures::{
    enumerate_copies, enumerate_embeddings, enumerate_embeddings_limited, Embedding, PartialOrder, Structure,
};

/// `(n^m, <_pr, <_lx,ı_0, ..., <_lx,ı_{p-1})`, points indexed in the usual
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridStructure {
    n: usize,
    m: usize,
    anchors: Anchors,
    structure: Structure,
}

#[derive(Serialize)]
struct GridView<'a> {
    n: usize,
    m: usize,
    anchors: &'a [usize],
    structure: crate::structures::RawStructure,
}

impl Serialize for GridStructure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GridView {
            n: self.n,
            m: self.m,
            anchors: self.anchors.positions(),
            structure: self.structure.to_raw(),
        }
        .serialize(serializer)
    }
}

/// Number of points of `n^m`, if it fits.
pub fn grid_size(n: usize, m: usize) -> Option<usize> {
    u32::try_from(m).ok().and_then(|m| n.checked_pow(m))
}

pub fn grid_structure(n: usize, m: usize, anchors: &Anchors, config: &RunConfig) -> Result<GridStructure> {
    if n == 0 || m == 0 {
        return Err(Error::Precondition(format!("grid needs n, m >= 1, got n={n} m={m}")));
    }
    if anchors.ambient_len() != m {
        return Err(Error::Anchor(format!(
            "anchors live in {} coordinates, the grid has {m}",
            anchors.ambient_len()
        )));
    }
    let size = grid_size(n, m)
        .filter(|&s| s <= config.max_ground_size)
        .ok_or_else(|| Error::infeasible("grid", format!("{n}^{m} points"), format!("{} points", config.max_ground_size)))?;
    let points: Vec<Vec<usize>> = (0..size).map(|i| coords_of(i, n, m)).collect();
    let mut pairs = Vec::new();
    for (a, pa) in points.iter().enumerate() {
        for (b, pb) in points.iter().enumerate() {
            if pa.iter().zip(pb).all(|(x, y)| x < y) {
                pairs.push((a, b));
            }
        }
    }
    let partial_order = PartialOrder::from_pairs(size, &pairs)?;
    let orders = anchors
        .positions()
        .iter()
        .map(|&start| {
            let mut seq: Vec<usize> = (0..size).collect();
            seq.sort_by_key(|&i| rotated(&points[i], start));
            LinearOrder::new(seq)
        })
        .collect::<Result<Vec<_>>>()?;
    let structure = Structure::new(partial_order, orders)?;
    Ok(GridStructure {
        n,
        m,
        anchors: anchors.clone(),
        structure,
    })
}

fn rotated(coords: &[usize], start: usize) -> Vec<usize> {
    let m = coords.len();
    (0..m).map(|j| coords[(start + j) % m]).collect()
}

/// Coordinates of the point with lexicographic index `index`.
pub fn coords_of(mut index: usize, n: usize, m: usize) -> Vec<usize> {
    let mut out = vec![0; m];
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

/// Lexicographic index of a point of `n^m`.
pub fn point_index(coords: &[usize], n: usize) -> usize {
    coords.iter().fold(0, |acc, &c| acc * n + c)
}

impl GridStructure {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn anchors(&self) -> &Anchors {
        &self.anchors
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn size(&self) -> usize {
        self.structure.size()
    }

    pub fn coords(&self, point: usize) -> Vec<usize> {
        coords_of(point, self.n, self.m)
    }

    pub fn point(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.m || coords.iter().any(|&c| c >= self.n) {
            return Err(Error::Dimension(format!("{coords:?} is not a point of {}^{}", self.n, self.m)));
        }
        Ok(point_index(coords, self.n))
    }

    pub fn params(&self) -> WitnessParams {
        WitnessParams {
            m: self.m,
            n: self.n,
            anchors: self.anchors.positions().to_vec(),
        }
    }

    pub fn to_dot(&self) -> String {
        self.structure.to_dot_with_labels(|i| {
            let c = self.coords(i);
            format!("({})", c.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        })
    }
}

/// A structure prepared for the grid construction: relabeled so that `L_0`
/// is the natural order, with its space of `L_0`-ordered linear extensions
/// and the positions of its own orders in that space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedStructure {
    pub structure: Structure,
    pub space: OrderedExtensionSpace,
    pub anchors: Anchors,
}

impl FramedStructure {
    pub fn new(structure: &Structure) -> Result<Self> {
        let structure = canonical(structure)?;
        let space = OrderedExtensionSpace::new(structure.order(0), Some(structure.partial_order()))?;
        let anchors = space.anchors_of(structure.linear_orders())?;
        Ok(FramedStructure {
            structure,
            space,
            anchors,
        })
    }

    pub fn size(&self) -> usize {
        self.structure.size()
    }
}

/// The isomorphic copy of `s` whose `L_0` is `0 < 1 < ... < size - 1`.
pub fn canonical(s: &Structure) -> Result<Structure> {
    s.restrict(&s.ground_set())
}

/// `π^τ` as coordinate vectors, one per point of `space`'s ground set in
/// increasing label order.
pub fn pi_tau_coords(tau: &Tuple, space: &OrderedExtensionSpace) -> Result<Vec<Vec<usize>>> {
    let ground = check_tau(tau, space.members())?;
    ground
        .iter()
        .map(|&y| (0..tau.m()).map(|i| coordinate_image(tau, space.members(), i, y)).collect())
        .collect()
}

/// `π^τ: Y -> n^m`, `coords[y]` being the image of `y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GridEmbedding {
    pub coords: Vec<Vec<usize>>,
}

impl GridEmbedding {
    pub fn to_embedding(&self, n: usize) -> Embedding {
        Embedding::new(self.coords.iter().map(|c| point_index(c, n)).collect())
    }
}

/// `π^τ` for `τ ∈ (n choose |Y|)^m × (m, ı / B, b)_rs`, checked to be an
/// embedding of `y` into `grid`.
pub fn pi_tau(tau: &Tuple, y: &FramedStructure, grid: &GridStructure) -> Result<GridEmbedding> {
    if tau.m() != grid.m {
        return Err(Error::Dimension(format!("tuple has {} sets, the grid {} coordinates", tau.m(), grid.m)));
    }
    if tau.rs().source_anchor() != &grid.anchors {
        return Err(Error::Anchor("τ is framed on other anchors than the grid".into()));
    }
    if tau.rs().target_anchor() != &y.anchors {
        return Err(Error::Anchor("τ does not send the grid anchors to the orders of Y".into()));
    }
    if let Some(&x) = tau.sets().iter().flatten().find(|&&x| x >= grid.n) {
        return Err(Error::ElementOutOfRange { element: x, size: grid.n });
    }
    let embedding = GridEmbedding {
        coords: pi_tau_coords(tau, &y.space)?,
    };
    if !embedding.to_embedding(grid.n).is_embedding(&y.structure, &grid.structure)? {
        return Err(Error::Postcondition("π^τ is not an embedding".into()));
    }
    Ok(embedding)
}

/// `σ` with `X' = π^{τ·σ}(X)` for a copy `X'` inside `π^τ(Y)`.
#[derive(Debug, Clone)]
pub struct Pullback {
    /// `X = (π^τ)^{-1}(X')`.
    pub subset: Vec<usize>,
    pub sigma: Tuple,
    /// The space `res_X` maps onto.
    pub target: OrderedExtensionSpace,
    pub product: Tuple,
}

pub fn pullback_copy(tau: &Tuple, y: &FramedStructure, grid: &GridStructure, points: &[usize]) -> Result<Pullback> {
    let embedding = pi_tau(tau, y, grid)?;
    let map = embedding.to_embedding(grid.n);
    let inverse: HashMap<usize, usize> = map.map.iter().enumerate().map(|(y, &pt)| (pt, y)).collect();
    let mut subset = points
        .iter()
        .map(|pt| inverse.get(pt).copied().ok_or(Error::NotSubset(*pt)))
        .collect::<Result<Vec<_>>>()?;
    subset.sort_unstable();
    subset.dedup();
    if subset.is_empty() {
        return Err(Error::Precondition("the copy must be nonempty".into()));
    }
    // (π^τ_i)^{-1}(p_i(X')) is X itself, since each π^τ_i is a bijection.
    let sets: Vec<Vec<usize>> = (0..tau.m())
        .map(|i| {
            let projected: Vec<usize> = subset.iter().map(|&x| embedding.coords[x][i]).collect();
            let mut back: Vec<usize> = (0..y.size()).filter(|&x| projected.contains(&embedding.coords[x][i])).collect();
            back.sort_unstable();
            back
        })
        .collect();
    let restriction = res_x(&y.space, &subset, &y.anchors)?;
    let sigma = Tuple::new(sets, restriction.map)?;
    let product = twisted_compose(tau, y.space.members(), &sigma)?;
    let pulled = pi_tau_coords(&product, &restriction.target)?;
    for (slot, &x) in subset.iter().enumerate() {
        if pulled[slot] != embedding.coords[x] {
            return Err(Error::Postcondition(format!(
                "π^(τ·σ)({x}) = {:?} differs from π^τ({x}) = {:?}",
                pulled[slot], embedding.coords[x]
            )));
        }
    }
    Ok(Pullback {
        subset,
        sigma,
        target: restriction.target,
        product,
    })
}

fn check_triple(z: &Structure, x: &Structure, y: &Structure, config: &RunConfig) -> Result<()> {
    for s in [x, y] {
        if s.p() != z.p() {
            return Err(Error::ArityMismatch { left: s.p(), right: z.p() });
        }
    }
    if !(x.size() <= y.size() && y.size() <= z.size()) {
        return Err(Error::Precondition(format!(
            "need |X| <= |Y| <= |Z|, got {}, {}, {}",
            x.size(),
            y.size(),
            z.size()
        )));
    }
    if z.size() > config.max_ground_size {
        return Err(Error::infeasible("structure", format!("{} points", z.size()), format!("{} points", config.max_ground_size)));
    }
    Ok(())
}

/// Copies of `x` in `z` as the domain; one cone per copy `Y'` of `y`,
/// consisting of the copies of `x` inside `Y'`.
pub fn ramsey_problem(z: &Structure, x: &Structure, y: &Structure, config: &RunConfig) -> Result<ColoringProblem> {
    check_triple(z, x, y, config)?;
    let x_in_y = enumerate_embeddings(x, y)?;
    let x_in_z = enumerate_embeddings_limited(x, z, config.max_domain)?;
    let y_in_z = enumerate_embeddings_limited(y, z, config.max_domain)?;
    let mut copies: Vec<Vec<usize>> = x_in_z.iter().map(Embedding::image).collect();
    copies.sort();
    copies.dedup();
    let index: HashMap<&Vec<usize>, usize> = copies.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut targets: Vec<Vec<usize>> = Vec::new();
    let mut cones = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for e in &y_in_z {
        let image = e.image();
        if !seen.insert(image.clone()) {
            continue;
        }
        let cone = x_in_y
            .iter()
            .map(|s| {
                index
                    .get(&e.compose(s).image())
                    .copied()
                    .ok_or_else(|| Error::Postcondition("composite copy missing".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        targets.push(image);
        cones.push(cone);
    }
    ColoringProblem::new(
        copies.iter().map(|c| json!(c)).collect(),
        cones,
        targets.iter().map(|t| json!(t)).collect(),
    )
}

/// Whether every `d`-coloring of the copies of `x` in `z` leaves some copy of
/// `y` in `z` all of whose `x`-copies share a color.
pub fn verify_ramsey_witness(z: &Structure, x: &Structure, y: &Structure, d: usize, config: &RunConfig) -> Result<ColoringCertificate> {
    let problem = ramsey_problem(z, x, y, config)?;
    let instance = Instance::RamseyWitness {
        z: z.to_raw(),
        x: x.to_raw(),
        y: y.to_raw(),
    };
    certify(&problem, instance, d, config, Strategy::default())
}

/// Search bounds for [`construct_witness`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConstructOptions {
    pub m_max: usize,
    pub n_max: usize,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions { m_max: 4, n_max: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// `d = 1` or `X ≅ Y`: `n = |Y|`, `m = |B|`, `ı = b`.
    Trivial,
    /// Least `(m, ı, n)` whose twisted-product statement was machine-checked.
    TwistedProduct,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Construction {
    Grid {
        params: WitnessParams,
        size: usize,
        route: Route,
        /// Certificate of the twisted-product statement for the grid parameters.
        twisted_certificate: Option<ColoringCertificate>,
        /// Certificate of the grid itself; `None` when out of reach.
        certificate: Option<ColoringCertificate>,
        verified: bool,
    },
    Symbolic {
        /// Dual witness `(m, ı)`, if one was found within bounds.
        m: Option<usize>,
        anchors: Option<Vec<usize>>,
        rs_count: Option<usize>,
        #[serde(serialize_with = "optional_decimal")]
        color_count: Option<BigUint>,
        note: String,
    },
}

fn optional_decimal<S: serde::Serializer>(value: &Option<BigUint>, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => decimal(v, serializer),
        None => serializer.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructedWitness {
    /// Least image of `X` in `Y`, in the labels of `Y`.
    pub x_image: Vec<usize>,
    /// `|lin_{L_0}(P)|` for `X` and for `Y`.
    pub a_len: usize,
    pub b_len: usize,
    pub a_anchor: Vec<usize>,
    pub b_anchor: Vec<usize>,
    #[serde(flatten)]
    pub construction: Construction,
    #[serde(skip)]
    pub grid: Option<GridStructure>,
}

impl ConstructedWitness {
    pub fn is_verified(&self) -> bool {
        matches!(self.construction, Construction::Grid { verified: true, .. })
    }
}

/// Builds a grid witness `n^m` for `(x, y, d)` when the parameters can be
/// machine-checked within the configured ceilings, and reports exact symbolic
/// sizes otherwise.
pub fn construct_witness(
    x: &Structure,
    y: &Structure,
    d: usize,
    options: ConstructOptions,
    config: &RunConfig,
) -> Result<ConstructedWitness> {
    if d == 0 {
        return Err(Error::Precondition("at least one color is required".into()));
    }
    if x.p() != y.p() {
        return Err(Error::ArityMismatch { left: x.p(), right: y.p() });
    }
    let x_image = enumerate_copies(x, y)?.into_iter().next().ok_or(Error::NoEmbedding)?.elements;
    let framed_y = FramedStructure::new(y)?;
    let framed_x = FramedStructure::new(&y.restrict(&x_image)?)?;
    let mut out = ConstructedWitness {
        x_image,
        a_len: framed_x.space.len(),
        b_len: framed_y.space.len(),
        a_anchor: framed_x.anchors.positions().to_vec(),
        b_anchor: framed_y.anchors.positions().to_vec(),
        construction: Construction::Symbolic {
            m: None,
            anchors: None,
            rs_count: None,
            color_count: None,
            note: String::new(),
        },
        grid: None,
    };

    if d == 1 || x.size() == y.size() {
        let params = WitnessParams::new(framed_y.space.len(), y.size(), framed_y.anchors.positions().to_vec())?;
        finish_grid(&mut out, params, Route::Trivial, None, x, y, d, config)?;
        return Ok(out);
    }

    let mut refusals = 0usize;
    for m in framed_y.space.len()..=options.m_max {
        for frame in Anchors::all(y.p(), m) {
            for n in y.size()..=options.n_max {
                let params = WitnessParams::new(m, n, frame.positions().to_vec())?;
                match verify_prop5_witness(&params, d, &framed_x.space, &framed_x.anchors, &framed_y.space, &framed_y.anchors, config) {
                    Ok(cert) if cert.holds() => {
                        finish_grid(&mut out, params, Route::TwistedProduct, Some(cert), x, y, d, config)?;
                        return Ok(out);
                    }
                    Ok(_) => {}
                    Err(e) if e.is_infeasible() => {
                        refusals += 1;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }

    let why = if refusals > 0 {
        "the twisted-product check exceeds the configured ceilings"
    } else {
        "no parameters within the search bounds"
    };
    out.construction = match search_dual(d, framed_x.space.len(), &framed_x.anchors, framed_y.space.len(), &framed_y.anchors, options.m_max, config) {
        Ok(dual) => {
            let frame = Anchors::new(dual.anchors.clone(), dual.m)?;
            let composed = compose_prop2_witness(
                d,
                framed_x.space.len(),
                &framed_x.anchors,
                framed_y.space.len(),
                &framed_y.anchors,
                x.size(),
                y.size(),
                &frame,
                ProductOracle::Symbolic,
                config,
            )?;
            Construction::Symbolic {
                m: Some(dual.m),
                anchors: Some(dual.anchors),
                rs_count: Some(composed.rs_count),
                note: format!(
                    "{why}; n is the least product Ramsey witness for {} colors with k = {}, l = {}, m = {}",
                    composed.color_count,
                    x.size(),
                    y.size(),
                    dual.m
                ),
                color_count: Some(composed.color_count),
            }
        }
        Err(e) if e.is_infeasible() => Construction::Symbolic {
            m: None,
            anchors: None,
            rs_count: None,
            color_count: None,
            note: format!("{why}; no dual witness with m <= {} could be checked either", options.m_max),
        },
        Err(e) => return Err(e),
    };
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn finish_grid(
    out: &mut ConstructedWitness,
    params: WitnessParams,
    route: Route,
    twisted_certificate: Option<ColoringCertificate>,
    x: &Structure,
    y: &Structure,
    d: usize,
    config: &RunConfig,
) -> Result<()> {
    let size = grid_size(params.n, params.m).unwrap_or(usize::MAX);
    let grid = match grid_structure(params.n, params.m, &params.frame_anchors(), config) {
        Ok(g) => Some(g),
        Err(e) if e.is_infeasible() => None,
        Err(e) => return Err(e),
    };
    let certificate = match &grid {
        Some(g) => match verify_ramsey_witness(g.structure(), x, y, d, config) {
            Ok(cert) => Some(cert),
            Err(e) if e.is_infeasible() => None,
            Err(e) => return Err(e),
        },
        None => None,
    };
    if let Some(cert) = &certificate {
        if !cert.holds() {
            return Err(Error::Postcondition(format!(
                "the grid {}^{} is not a witness although its parameters were accepted",
                params.n, params.m
            )));
        }
    }
    out.construction = Construction::Grid {
        params,
        size,
        route,
        twisted_certificate,
        verified: certificate.is_some(),
        certificate,
    };
    out.grid = grid;
    Ok(())
}

/// Where [`minimal_witness_search`] looks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSpace {
    /// Every structure with `L_0` natural, by size.
    #[default]
    All,
    /// Grid structures `n^m`, by size.
    Grids,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalWitness {
    pub size: usize,
    pub structure: crate::structures::RawStructure,
    /// Grid parameters when the candidate space is [`CandidateSpace::Grids`].
    pub grid: Option<WitnessParams>,
    pub candidates_checked: usize,
    pub certificate: ColoringCertificate,
}

/// Naturally labelled strict partial orders on `0..size`: each new element
/// takes a down-closed set of earlier elements as its predecessors.
pub fn natural_posets(size: usize) -> Vec<PartialOrder> {
    let mut out = Vec::new();
    let mut preds: Vec<Vec<usize>> = Vec::with_capacity(size);
    fn rec(size: usize, preds: &mut Vec<Vec<usize>>, out: &mut Vec<PartialOrder>) {
        let j = preds.len();
        if j == size {
            let pairs: Vec<(usize, usize)> = preds.iter().enumerate().flat_map(|(b, ps)| ps.iter().map(move |&a| (a, b))).collect();
            out.push(PartialOrder::from_pairs(size, &pairs).expect("labels in range"));
            return;
        }
        for mask in 0u64..(1u64 << j) {
            let set: Vec<usize> = (0..j).filter(|&i| mask >> i & 1 == 1).collect();
            let down_closed = set.iter().all(|&i| preds[i].iter().all(|h| mask >> h & 1 == 1));
            if down_closed {
                preds.push(set);
                rec(size, preds, out);
                preds.pop();
            }
        }
    }
    rec(size, &mut preds, &mut out);
    out
}

/// Every structure of the given size and arity with `L_0` natural, up to
/// isomorphism each exactly once.
pub fn canonical_structures(size: usize, p: usize) -> Result<Vec<Structure>> {
    if p == 0 {
        return Err(Error::ZeroArity);
    }
    let natural = LinearOrder::natural(size);
    let mut out = Vec::new();
    for poset in natural_posets(size) {
        let space = OrderedExtensionSpace::new(&natural, Some(&poset))?;
        let choices = crate::combinat::product(&vec![space.members().to_vec(); p - 1]);
        for rest in choices {
            let mut orders = vec![natural.clone()];
            orders.extend(rest);
            out.push(Structure::new(poset.clone(), orders)?);
        }
    }
    Ok(out)
}

/// Grid parameters `(n, m, ı)` with at most `bound` points, by size, then
/// `m`, then `ı`.
pub fn grid_candidates(p: usize, bound: usize) -> Vec<WitnessParams> {
    let mut out = Vec::new();
    for n in 1..=bound {
        let mut m = 1;
        while let Some(size) = grid_size(n, m).filter(|&s| s <= bound) {
            for frame in Anchors::all(p, m) {
                out.push((size, m, frame.positions().to_vec(), n));
            }
            if n == 1 {
                break;
            }
            m += 1;
        }
    }
    out.sort();
    out.into_iter()
        .map(|(_, m, anchors, n)| WitnessParams { m, n, anchors })
        .collect()
}

/// The first structure (by size, then canonical order) that verifies as a
/// Ramsey witness for `(x, y, d)`.
pub fn minimal_witness_search(
    x: &Structure,
    y: &Structure,
    d: usize,
    size_bound: usize,
    space: CandidateSpace,
    config: &RunConfig,
) -> Result<MinimalWitness> {
    if x.p() != y.p() {
        return Err(Error::ArityMismatch { left: x.p(), right: y.p() });
    }
    let mut checked = 0;
    let mut try_candidate = |z: &Structure, grid: Option<WitnessParams>| -> Result<Option<MinimalWitness>> {
        checked += 1;
        let cert = verify_ramsey_witness(z, x, y, d, config)?;
        Ok(cert.holds().then(|| MinimalWitness {
            size: z.size(),
            structure: z.to_raw(),
            grid,
            candidates_checked: checked,
            certificate: cert,
        }))
    };
    match space {
        CandidateSpace::All => {
            for size in y.size()..=size_bound {
                for z in canonical_structures(size, y.p())? {
                    if let Some(found) = try_candidate(&z, None)? {
                        return Ok(found);
                    }
                }
            }
        }
        CandidateSpace::Grids => {
            for params in grid_candidates(y.p(), size_bound) {
                let size = grid_size(params.n, params.m).unwrap_or(usize::MAX);
                if size < y.size() {
                    continue;
                }
                let grid = grid_structure(params.n, params.m, &params.frame_anchors(), config)?;
                if let Some(found) = try_candidate(grid.structure(), Some(params))? {
                    return Ok(found);
                }
            }
        }
    }
    Err(Error::NotFound(size_bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigsurj::{enumerate_rs, AnchoredRigidSurjection};

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    fn anchors(positions: &[usize], m: usize) -> Anchors {
        Anchors::new(positions.to_vec(), m).unwrap()
    }

    #[test]
    fn small_grids() {
        let g = grid_structure(2, 2, &anchors(&[0], 2), &cfg()).unwrap();
        assert_eq!(g.size(), 4);
        assert_eq!(g.structure().partial_order().pairs(), vec![(0, 3)]);
        assert_eq!(g.structure().order(0).enumeration(), &[0, 1, 2, 3]);

        let g = grid_structure(2, 2, &anchors(&[0, 1], 2), &cfg()).unwrap();
        // 00, 10, 01, 11
        assert_eq!(g.structure().order(1).enumeration(), &[0, 2, 1, 3]);

        let g = grid_structure(4, 1, &anchors(&[0], 1), &cfg()).unwrap();
        assert_eq!(g.structure(), &Structure::chain(4, 1).unwrap());
        assert!(grid_structure(10, 4, &anchors(&[0], 4), &cfg()).unwrap_err().is_infeasible());
        assert!(grid_structure(2, 2, &anchors(&[0], 3), &cfg()).is_err());
    }

    #[test]
    fn coordinates_round_trip() {
        for i in 0..27 {
            assert_eq!(point_index(&coords_of(i, 3, 3), 3), i);
        }
        assert_eq!(coords_of(5, 3, 2), vec![1, 2]);
    }

    #[test]
    fn pi_tau_examples() {
        // 2-chain, m = 1, T_0 = {3, 7}.
        let y = FramedStructure::new(&Structure::chain(2, 1).unwrap()).unwrap();
        let grid = grid_structure(8, 1, &anchors(&[0], 1), &cfg()).unwrap();
        let t = AnchoredRigidSurjection::identity(&anchors(&[0], 1));
        let tau = Tuple::new(vec![vec![3, 7]], t).unwrap();
        assert_eq!(pi_tau(&tau, &y, &grid).unwrap().coords, vec![vec![3], vec![7]]);

        // Antichain of 2, both orders, m = 2.
        let y = FramedStructure::new(&Structure::antichain(2, 1).unwrap()).unwrap();
        assert_eq!(y.space.len(), 2);
        let frame = anchors(&[0], 2);
        let grid = grid_structure(2, 2, &frame, &cfg()).unwrap();
        let t = AnchoredRigidSurjection::identity(&frame);
        let tau = Tuple::new(vec![vec![0, 1], vec![0, 1]], t).unwrap();
        let e = pi_tau(&tau, &y, &grid).unwrap();
        assert_eq!(e.coords, vec![vec![0, 1], vec![1, 0]]);

        let back = pullback_copy(&tau, &y, &grid, &[point_index(&[0, 1], 2)]).unwrap();
        assert_eq!(back.subset, vec![0]);
        assert_eq!(back.sigma.sets(), &[vec![0], vec![0]]);
        assert_eq!(back.product.sets(), &[vec![0], vec![1]]);

        let all = pullback_copy(&tau, &y, &grid, &e.to_embedding(2).image()).unwrap();
        assert_eq!(all.product, tau);
        assert!(pullback_copy(&tau, &y, &grid, &[0]).is_err());
    }

    #[test]
    fn pi_tau_embeds_on_small_frames() {
        let y = FramedStructure::new(&Structure::antichain(2, 2).unwrap()).unwrap();
        for m in 2..=3 {
            for frame in Anchors::all(2, m) {
                let grid = grid_structure(3, m, &frame, &cfg()).unwrap();
                for t in enumerate_rs(m, y.space.len(), &frame, &y.anchors).unwrap() {
                    for sets in crate::combinat::product(&vec![crate::combinat::k_subsets(3, 2); m]) {
                        let tau = Tuple::new(sets, t.clone()).unwrap();
                        pi_tau(&tau, &y, &grid).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn ramsey_witness_r33() {
        let x = Structure::chain(2, 1).unwrap();
        let y = Structure::chain(3, 1).unwrap();
        let z5 = Structure::chain(5, 1).unwrap();
        let z6 = Structure::chain(6, 1).unwrap();
        assert!(!verify_ramsey_witness(&z5, &x, &y, 2, &cfg()).unwrap().holds());
        assert!(verify_ramsey_witness(&z6, &x, &y, 2, &cfg()).unwrap().holds());
        assert!(verify_ramsey_witness(&z5, &x, &y, 1, &cfg()).unwrap().holds());
        assert!(verify_ramsey_witness(&z5, &y, &y, 3, &cfg()).unwrap().holds());
        assert!(matches!(verify_ramsey_witness(&x, &x, &y, 2, &cfg()), Err(Error::Precondition(_))));
    }

    #[test]
    fn construct_pigeonhole() {
        let x = Structure::chain(1, 1).unwrap();
        let y = Structure::chain(2, 1).unwrap();
        let w = construct_witness(&x, &y, 2, ConstructOptions::default(), &cfg()).unwrap();
        assert!(w.is_verified());
        let g = w.grid.as_ref().unwrap();
        assert_eq!((g.n(), g.m(), g.size()), (3, 1, 3));
        match &w.construction {
            Construction::Grid { route, .. } => assert_eq!(*route, Route::TwistedProduct),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn construct_trivial_routes() {
        let y = Structure::antichain(2, 1).unwrap();
        let x = Structure::chain(1, 1).unwrap();
        let w = construct_witness(&x, &y, 1, ConstructOptions::default(), &cfg()).unwrap();
        assert!(w.is_verified());
        assert_eq!(w.grid.as_ref().unwrap().size(), 4);
        let w = construct_witness(&y, &y, 3, ConstructOptions::default(), &cfg()).unwrap();
        assert!(w.is_verified());
        assert!(matches!(
            construct_witness(&Structure::chain(2, 1).unwrap(), &y, 2, ConstructOptions::default(), &cfg()),
            Err(Error::NoEmbedding)
        ));
    }

    #[test]
    fn construct_reports_symbolic_sizes() {
        let x = Structure::chain(2, 1).unwrap();
        let y = Structure::chain(3, 1).unwrap();
        let tight = ConstructOptions { m_max: 1, n_max: 5 };
        let w = construct_witness(&x, &y, 2, tight, &cfg()).unwrap();
        assert!(!w.is_verified());
        match &w.construction {
            Construction::Symbolic { m, rs_count, color_count, .. } => {
                assert_eq!(*m, Some(1));
                assert_eq!(*rs_count, Some(1));
                assert_eq!(color_count.as_ref().unwrap(), &BigUint::from(2u32));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn poset_counts() {
        // Naturally labelled posets.
        let counts: Vec<usize> = (0..=5).map(|n| natural_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 7, 40, 357]);
        assert_eq!(canonical_structures(2, 2).unwrap().len(), 3);
    }

    #[test]
    fn minimal_search_small() {
        let y = Structure::antichain(2, 1).unwrap();
        let found = minimal_witness_search(&y, &y, 2, 4, CandidateSpace::All, &cfg()).unwrap();
        assert_eq!(found.size, 2);
        let x = Structure::chain(1, 1).unwrap();
        let c2 = Structure::chain(2, 1).unwrap();
        let found = minimal_witness_search(&x, &c2, 2, 5, CandidateSpace::All, &cfg()).unwrap();
        assert_eq!(found.size, 3);
        let found = minimal_witness_search(&x, &c2, 2, 5, CandidateSpace::Grids, &cfg()).unwrap();
        assert_eq!(found.grid.unwrap().n, 3);
        assert!(minimal_witness_search(&x, &c2, 2, 2, CandidateSpace::All, &cfg()).unwrap_err().is_infeasible());
    }
}
