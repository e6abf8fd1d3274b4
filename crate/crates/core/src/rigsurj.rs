//! Rigid surjections between finite linear orders, anchored sequences, and
//! the twisted product of tuples.
//!
//! Finite linear orders are identified with `0..len` in their own order, so a
//! rigid surjection `B -> A` is a position map `map[b] = a`. It is rigid iff
//! every value is first attained after all smaller values, i.e. `map` is a
//! restricted growth string using every value below `target_len`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linext::LinearOrder;

/// Whether `map` is a rigid surjection onto `0..target_len`.
pub fn is_rigid_surjection(map: &[usize], target_len: usize) -> bool {
    let mut opened = 0;
    for &v in map {
        if v > opened || v >= target_len {
            return false;
        }
        if v == opened {
            opened += 1;
        }
    }
    opened == target_len
}

/// A length-`p` sequence of positions in an ordered set of `ambient_len`
/// elements whose first entry is the minimum, position 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Anchors {
    positions: Vec<usize>,
    ambient_len: usize,
}

impl Anchors {
    pub fn new(positions: Vec<usize>, ambient_len: usize) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::Anchor("anchored sequences have length p > 0".into()));
        }
        if positions[0] != 0 {
            return Err(Error::Anchor(format!(
                "first anchor must be the minimum 0, found {}",
                positions[0]
            )));
        }
        if let Some(&x) = positions.iter().find(|&&x| x >= ambient_len) {
            return Err(Error::Anchor(format!("anchor {x} outside an ordered set of {ambient_len} elements")));
        }
        Ok(Anchors { positions, ambient_len })
    }

    /// `(0, 0, ..., 0)` of length `p`.
    pub fn at_minimum(p: usize, ambient_len: usize) -> Result<Self> {
        Anchors::new(vec![0; p], ambient_len)
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn p(&self) -> usize {
        self.positions.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.ambient_len
    }

    /// Every anchored sequence of length `p` in `0..ambient_len`, lexicographic.
    pub fn all(p: usize, ambient_len: usize) -> Vec<Anchors> {
        if p == 0 || ambient_len == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = vec![0; p];
        loop {
            out.push(Anchors {
                positions: cur.clone(),
                ambient_len,
            });
            // Odometer over entries 1..p.
            let mut i = p;
            loop {
                if i == 1 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < ambient_len {
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

/// A rigid surjection `r: B -> A` with `r(b_i) = a_i` for all `i < p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnchoredRigidSurjection {
    target_len: usize,
    map: Vec<usize>,
    source_anchor: Anchors,
    target_anchor: Anchors,
}

impl AnchoredRigidSurjection {
    pub fn new(target_len: usize, map: Vec<usize>, source_anchor: Anchors, target_anchor: Anchors) -> Result<Self> {
        if !is_rigid_surjection(&map, target_len) {
            return Err(Error::NotRigid(format!("{map:?} onto {target_len} elements")));
        }
        if source_anchor.ambient_len != map.len() || target_anchor.ambient_len != target_len {
            return Err(Error::Anchor("anchors do not live in the source and target orders".into()));
        }
        if source_anchor.p() != target_anchor.p() {
            return Err(Error::Anchor(format!(
                "anchor lengths differ: {} vs {}",
                source_anchor.p(),
                target_anchor.p()
            )));
        }
        for (i, (&b, &a)) in source_anchor.positions.iter().zip(&target_anchor.positions).enumerate() {
            if map[b] != a {
                return Err(Error::Anchor(format!("r(b_{i}) = {} but a_{i} = {a}", map[b])));
            }
        }
        Ok(AnchoredRigidSurjection {
            target_len,
            map,
            source_anchor,
            target_anchor,
        })
    }

    pub fn identity(anchors: &Anchors) -> Self {
        AnchoredRigidSurjection {
            target_len: anchors.ambient_len,
            map: (0..anchors.ambient_len).collect(),
            source_anchor: anchors.clone(),
            target_anchor: anchors.clone(),
        }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, b: usize) -> usize {
        self.map[b]
    }

    pub fn source_len(&self) -> usize {
        self.map.len()
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn source_anchor(&self) -> &Anchors {
        &self.source_anchor
    }

    pub fn target_anchor(&self) -> &Anchors {
        &self.target_anchor
    }

    /// `self ∘ inner` for `inner: C -> B` and `self: B -> A`.
    pub fn compose(&self, inner: &AnchoredRigidSurjection) -> Result<AnchoredRigidSurjection> {
        if inner.target_len != self.source_len() {
            return Err(Error::Dimension(format!(
                "inner maps onto {} elements, outer starts from {}",
                inner.target_len,
                self.source_len()
            )));
        }
        if inner.target_anchor != self.source_anchor {
            return Err(Error::Anchor("inner target anchors differ from outer source anchors".into()));
        }
        let map = inner.map.iter().map(|&b| self.map[b]).collect();
        AnchoredRigidSurjection::new(
            self.target_len,
            map,
            inner.source_anchor.clone(),
            self.target_anchor.clone(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct RawRigidSurjection {
    map: Vec<usize>,
    source_anchor: Vec<usize>,
    target_anchor: Vec<usize>,
}

impl Serialize for AnchoredRigidSurjection {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawRigidSurjection {
            map: self.map.clone(),
            source_anchor: self.source_anchor.positions.clone(),
            target_anchor: self.target_anchor.positions.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AnchoredRigidSurjection {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawRigidSurjection::deserialize(deserializer)?;
        let target_len = raw.map.iter().max().map_or(0, |&m| m + 1);
        let build = || -> Result<Self> {
            let source_anchor = Anchors::new(raw.source_anchor.clone(), raw.map.len())?;
            let target_anchor = Anchors::new(raw.target_anchor.clone(), target_len)?;
            AnchoredRigidSurjection::new(target_len, raw.map.clone(), source_anchor, target_anchor)
        };
        build().map_err(serde::de::Error::custom)
    }
}

/// Every member of `(B, b / A, a)_rs` with `|B| = source_len`,
/// `|A| = target_len`, in lexicographic order of their maps.
///
/// Values are assigned left to right; a position may take any already opened
/// value or open the next one, subject to the anchor constraints, so every
/// generated map is rigid and none is filtered afterwards.
pub fn enumerate_rs(
    source_len: usize,
    target_len: usize,
    source_anchor: &Anchors,
    target_anchor: &Anchors,
) -> Result<Vec<AnchoredRigidSurjection>> {
    if source_anchor.ambient_len != source_len || target_anchor.ambient_len != target_len {
        return Err(Error::Anchor("anchors do not live in the source and target orders".into()));
    }
    if source_anchor.p() != target_anchor.p() {
        return Err(Error::Anchor("anchor sequences have different lengths".into()));
    }
    if target_len > source_len {
        return Ok(Vec::new());
    }
    let mut required: Vec<Option<usize>> = vec![None; source_len];
    for (&b, &a) in source_anchor.positions.iter().zip(&target_anchor.positions) {
        match required[b] {
            Some(prev) if prev != a => return Ok(Vec::new()),
            _ => required[b] = Some(a),
        }
    }
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(source_len);
    fn rec(
        source_len: usize,
        target_len: usize,
        required: &[Option<usize>],
        opened: usize,
        map: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let j = map.len();
        if j == source_len {
            if opened == target_len {
                out.push(map.clone());
            }
            return;
        }
        let remaining_after = source_len - j - 1;
        let top = opened.min(target_len - 1);
        for v in 0..=top {
            if required[j].is_some_and(|r| r != v) {
                continue;
            }
            let next_opened = if v == opened { opened + 1 } else { opened };
            if remaining_after < target_len - next_opened {
                continue;
            }
            map.push(v);
            rec(source_len, target_len, required, next_opened, map, out);
            map.pop();
        }
    }
    let mut maps = Vec::new();
    rec(source_len, target_len, &required, 0, &mut map, &mut maps);
    for m in maps {
        out.push(AnchoredRigidSurjection {
            target_len,
            map: m,
            source_anchor: source_anchor.clone(),
            target_anchor: target_anchor.clone(),
        });
    }
    Ok(out)
}

/// The unique `r` with `s = r ∘ t`, when it exists and is an anchored rigid
/// surjection `(B, b) -> (A, a)`. `s` and `t` must share their source and
/// source anchors; otherwise there is no such `r`.
pub fn divide(s: &AnchoredRigidSurjection, t: &AnchoredRigidSurjection) -> Option<AnchoredRigidSurjection> {
    if s.source_len() != t.source_len() || s.source_anchor != t.source_anchor {
        return None;
    }
    let mut r: Vec<Option<usize>> = vec![None; t.target_len];
    for (&b, &a) in t.map.iter().zip(&s.map) {
        match r[b] {
            Some(prev) if prev != a => return None,
            _ => r[b] = Some(a),
        }
    }
    let map: Vec<usize> = r.into_iter().collect::<Option<_>>()?;
    AnchoredRigidSurjection::new(s.target_len, map, t.target_anchor.clone(), s.target_anchor.clone()).ok()
}

/// `(S_0, ..., S_{m-1}, s)`: `m` equal-size finite sets and a rigid surjection.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Tuple {
    sets: Vec<Vec<usize>>,
    rs: AnchoredRigidSurjection,
}

impl Tuple {
    pub fn new(sets: Vec<Vec<usize>>, rs: AnchoredRigidSurjection) -> Result<Self> {
        let sets: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        if let Some(first) = sets.first() {
            if sets.iter().any(|s| s.len() != first.len()) {
                return Err(Error::Dimension("tuple sets have different cardinalities".into()));
            }
        }
        Ok(Tuple { sets, rs })
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    pub fn rs(&self) -> &AnchoredRigidSurjection {
        &self.rs
    }

    /// Number of sets.
    pub fn m(&self) -> usize {
        self.sets.len()
    }

    /// Common cardinality of the sets.
    pub fn width(&self) -> usize {
        self.sets.first().map_or(0, Vec::len)
    }

    /// Whether the rigid surjection starts from the frame `m` itself.
    fn check_frame(&self) -> Result<()> {
        if self.rs.source_len() != self.m() {
            return Err(Error::Dimension(format!(
                "tuple has {} sets but its rigid surjection starts from {} elements",
                self.m(),
                self.rs.source_len()
            )));
        }
        Ok(())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("tuples always serialize")
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

/// `σ ≪ τ`: `S_i ⊆ T_i` for every `i`, and `s = r ∘ t` for some anchored rigid
/// surjection `r`. Both tuples must be framed on the same `(m, ı)`.
pub fn ll(sigma: &Tuple, tau: &Tuple) -> Result<bool> {
    sigma.check_frame()?;
    tau.check_frame()?;
    if sigma.m() != tau.m() {
        return Err(Error::Dimension(format!("m = {} vs m = {}", sigma.m(), tau.m())));
    }
    if sigma.rs.source_anchor != tau.rs.source_anchor {
        return Err(Error::Anchor("tuples are framed on different anchored sequences".into()));
    }
    if !sigma.sets.iter().zip(&tau.sets).all(|(s, t)| is_subset(s, t)) {
        return Ok(false);
    }
    Ok(divide(&sigma.rs, &tau.rs).is_some())
}

/// `π^τ_i(y)`: the unique isomorphism `(Y, t(i)) -> (T_i, <)` applied to `y`.
/// `orders[j]` is the linear order on `Y` at position `j` of the target of `t`.
pub fn coordinate_image(tau: &Tuple, orders: &[LinearOrder], i: usize, y: usize) -> Result<usize> {
    let order = &orders[tau.rs.apply(i)];
    let r = order.rank_of(y).ok_or(Error::NotSubset(y))?;
    Ok(tau.sets[i][r])
}

fn check_order_family(orders: &[LinearOrder]) -> Result<Vec<usize>> {
    let first = orders
        .first()
        .ok_or_else(|| Error::Precondition("empty family of linear orders".into()))?;
    if orders.iter().any(|o| !o.same_ground(first)) {
        return Err(Error::GroundSetMismatch);
    }
    Ok(first.ground_set())
}

/// Checks that `tau` is framed on `m` sets of size `|Y|` with a rigid
/// surjection from `m` onto the family `orders` of linear orders on `Y`.
pub fn check_tau(tau: &Tuple, orders: &[LinearOrder]) -> Result<Vec<usize>> {
    let ground = check_order_family(orders)?;
    tau.check_frame()?;
    if tau.rs.target_len() != orders.len() {
        return Err(Error::Dimension(format!(
            "t maps onto {} elements, the order family has {}",
            tau.rs.target_len(),
            orders.len()
        )));
    }
    if tau.m() > 0 && tau.width() != ground.len() {
        return Err(Error::Dimension(format!(
            "sets have {} elements, Y has {}",
            tau.width(),
            ground.len()
        )));
    }
    Ok(ground)
}

/// The twisted product
/// `τ·σ = (π^τ_0(S_0), ..., π^τ_{m-1}(S_{m-1}), s ∘ t)`.
///
/// `b_orders` lists the members of `B ⊆ lin_L` on `Y` by position; `τ.rs`
/// maps `m` onto `B` and `σ.rs` maps `B` onto some `A`.
pub fn twisted_compose(tau: &Tuple, b_orders: &[LinearOrder], sigma: &Tuple) -> Result<Tuple> {
    let ground = check_tau(tau, b_orders)?;
    if sigma.m() != tau.m() {
        return Err(Error::Dimension(format!("m = {} vs m = {}", sigma.m(), tau.m())));
    }
    if let Some(&y) = sigma.sets.iter().flatten().find(|y| ground.binary_search(y).is_err()) {
        return Err(Error::NotSubset(y));
    }
    let rs = sigma.rs.compose(&tau.rs)?;
    let sets = (0..tau.m())
        .map(|i| {
            sigma.sets[i]
                .iter()
                .map(|&y| coordinate_image(tau, b_orders, i, y))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Tuple::new(sets, rs)
}
