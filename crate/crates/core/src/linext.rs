//! Linear orders on finite label sets, the "below" order on the space of all
//! linear orders relative to a reference order, and restriction maps between
//! spaces of linear extensions.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rigsurj::{AnchoredRigidSurjection, Anchors};
use crate::structures::PartialOrder;

/// A strict total order on a finite set of labels, held as its increasing
/// enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearOrder {
    enumeration: Vec<usize>,
    rank: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl LinearOrder {
    pub fn new(enumeration: Vec<usize>) -> Result<Self> {
        let bound = enumeration.iter().max().map_or(0, |&m| m + 1);
        let mut rank = vec![ABSENT; bound];
        for (i, &x) in enumeration.iter().enumerate() {
            if rank[x] != ABSENT {
                return Err(Error::Precondition(format!("element {x} listed twice")));
            }
            rank[x] = i;
        }
        Ok(LinearOrder { enumeration, rank })
    }

    /// `0 < 1 < ... < n-1`.
    pub fn natural(n: usize) -> Self {
        LinearOrder {
            enumeration: (0..n).collect(),
            rank: (0..n).collect(),
        }
    }

    pub fn enumeration(&self) -> &[usize] {
        &self.enumeration
    }

    pub fn len(&self) -> usize {
        self.enumeration.len()
    }

    pub fn is_empty(&self) -> bool {
        self.enumeration.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.rank.get(x).is_some_and(|&r| r != ABSENT)
    }

    pub fn rank_of(&self, x: usize) -> Option<usize> {
        self.rank.get(x).copied().filter(|&r| r != ABSENT)
    }

    /// `a` strictly before `b`. False when either is absent.
    #[inline]
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        match (self.rank_of(a), self.rank_of(b)) {
            (Some(ra), Some(rb)) => ra < rb,
            _ => false,
        }
    }

    /// Sorted ground set.
    pub fn ground_set(&self) -> Vec<usize> {
        let mut g = self.enumeration.clone();
        g.sort_unstable();
        g
    }

    pub fn same_ground(&self, other: &LinearOrder) -> bool {
        self.len() == other.len() && self.enumeration.iter().all(|&x| other.contains(x))
    }

    /// `self ↾ subset`; elements of `subset` outside the ground set are ignored.
    pub fn restrict(&self, subset: &[usize]) -> LinearOrder {
        let mut keep = vec![false; self.rank.len()];
        for &x in subset {
            if x < keep.len() {
                keep[x] = true;
            }
        }
        let seq: Vec<usize> = self.enumeration.iter().copied().filter(|&x| keep[x]).collect();
        LinearOrder::new(seq).expect("a subsequence of distinct labels")
    }

    /// First pair of `partial` that this order fails to contain.
    pub fn extension_violation(&self, partial: &PartialOrder) -> Option<(usize, usize)> {
        partial.pairs().into_iter().find(|&(a, b)| !self.precedes(a, b))
    }

    pub fn extends(&self, partial: &PartialOrder) -> bool {
        self.extension_violation(partial).is_none()
    }

    /// Compact word form, e.g. `021`; labels above 9 are comma separated.
    pub fn word(&self) -> String {
        if self.enumeration.iter().all(|&x| x < 10) {
            self.enumeration.iter().map(|x| x.to_string()).collect()
        } else {
            self.enumeration.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

impl Serialize for LinearOrder {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.enumeration.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearOrder {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let seq = Vec::<usize>::deserialize(deserializer)?;
        LinearOrder::new(seq).map_err(serde::de::Error::custom)
    }
}

/// `(K)_x`: the elements strictly below `x` together with the induced order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    pub base: Vec<usize>,
    pub order: LinearOrder,
}

pub fn cut(order: &LinearOrder, x: usize) -> Result<Cut> {
    let r = order.rank_of(x).ok_or(Error::NotSubset(x))?;
    let prefix = order.enumeration[..r].to_vec();
    let mut base = prefix.clone();
    base.sort_unstable();
    Ok(Cut {
        base,
        order: LinearOrder::new(prefix)?,
    })
}

/// Compares the enumerations of `a` and `b` lexicographically, elements being
/// compared by their position in `reference`.
pub fn compare_below(a: &LinearOrder, b: &LinearOrder, reference: &LinearOrder) -> Result<Ordering> {
    if !a.same_ground(reference) || !b.same_ground(reference) {
        return Err(Error::GroundSetMismatch);
    }
    for (&x, &y) in a.enumeration.iter().zip(&b.enumeration) {
        if x != y {
            return Ok(reference.rank_of(x).cmp(&reference.rank_of(y)));
        }
    }
    Ok(Ordering::Equal)
}

/// `a` below `b` in `lin_reference`.
pub fn below(a: &LinearOrder, b: &LinearOrder, reference: &LinearOrder) -> Result<bool> {
    Ok(compare_below(a, b, reference)? == Ordering::Less)
}

/// A set of linear orders on one ground set, sorted by the below-order of a
/// reference order, optionally restricted to the extensions of a partial
/// order. Members are addressed by position.
#[derive(Debug, Clone)]
pub struct OrderedExtensionSpace {
    reference: LinearOrder,
    partial_order: Option<PartialOrder>,
    members: Vec<LinearOrder>,
    index: HashMap<Vec<usize>, usize>,
}

impl PartialEq for OrderedExtensionSpace {
    fn eq(&self, other: &Self) -> bool {
        self.reference == other.reference && self.partial_order == other.partial_order && self.members == other.members
    }
}

impl Eq for OrderedExtensionSpace {}

impl OrderedExtensionSpace {
    /// All linear orders on the ground set of `reference` (extending `partial`
    /// when given), sorted by the below-order. The first member is `reference`.
    pub fn new(reference: &LinearOrder, partial: Option<&PartialOrder>) -> Result<Self> {
        if let Some(p) = partial {
            for (a, b) in p.pairs() {
                for x in [a, b] {
                    if !reference.contains(x) {
                        return Err(Error::NotSubset(x));
                    }
                }
            }
            if let Some((below, above)) = reference.extension_violation(p) {
                return Err(Error::OrderDoesNotExtend { index: 0, below, above });
            }
        }
        let members = generate_extensions(reference, partial);
        Ok(OrderedExtensionSpace::from_sorted(reference.clone(), partial.cloned(), members))
    }

    /// A subspace given by explicit members. They must share the reference's
    /// ground set and be listed strictly increasing in the below-order.
    pub fn from_members(reference: &LinearOrder, members: Vec<LinearOrder>) -> Result<Self> {
        for m in &members {
            if !m.same_ground(reference) {
                return Err(Error::GroundSetMismatch);
            }
        }
        for w in members.windows(2) {
            if !below(&w[0], &w[1], reference)? {
                return Err(Error::Precondition(format!(
                    "members {} and {} are not strictly increasing in the below-order",
                    w[0].word(),
                    w[1].word()
                )));
            }
        }
        Ok(OrderedExtensionSpace::from_sorted(reference.clone(), None, members))
    }

    fn from_sorted(reference: LinearOrder, partial_order: Option<PartialOrder>, members: Vec<LinearOrder>) -> Self {
        let index = members
            .iter()
            .enumerate()
            .map(|(i, m)| (m.enumeration.clone(), i))
            .collect();
        OrderedExtensionSpace {
            reference,
            partial_order,
            members,
            index,
        }
    }

    pub fn reference(&self) -> &LinearOrder {
        &self.reference
    }

    pub fn partial_order(&self) -> Option<&PartialOrder> {
        self.partial_order.as_ref()
    }

    pub fn members(&self) -> &[LinearOrder] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &LinearOrder {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, order: &LinearOrder) -> Option<usize> {
        self.index.get(order.enumeration()).copied()
    }

    pub fn ground_set(&self) -> Vec<usize> {
        self.reference.ground_set()
    }

    /// Positions of `orders` in this space, as an anchored sequence.
    pub fn anchors_of(&self, orders: &[LinearOrder]) -> Result<Anchors> {
        let positions = orders
            .iter()
            .map(|o| {
                self.position(o)
                    .ok_or_else(|| Error::Anchor(format!("order {} is not a member of the space", o.word())))
            })
            .collect::<Result<Vec<_>>>()?;
        Anchors::new(positions, self.len())
    }
}

/// Permutations of the reference's ground set in lexicographic order relative
/// to the reference, skipping any prefix that places an element before one of
/// its P-predecessors.
fn generate_extensions(reference: &LinearOrder, partial: Option<&PartialOrder>) -> Vec<LinearOrder> {
    let elems = reference.enumeration();
    let n = elems.len();
    // preds[i]: positions (in reference order) that must come before position i.
    let preds: Vec<Vec<usize>> = (0..n)
        .map(|i| match partial {
            Some(p) => (0..n).filter(|&j| p.contains(elems[j], elems[i])).collect(),
            None => Vec::new(),
        })
        .collect();
    let mut out = Vec::new();
    let mut placed = vec![false; n];
    let mut seq = Vec::with_capacity(n);
    fn rec(
        elems: &[usize],
        preds: &[Vec<usize>],
        placed: &mut [bool],
        seq: &mut Vec<usize>,
        out: &mut Vec<LinearOrder>,
    ) {
        if seq.len() == elems.len() {
            out.push(LinearOrder::new(seq.clone()).expect("permutation"));
            return;
        }
        for i in 0..elems.len() {
            if placed[i] || preds[i].iter().any(|&j| !placed[j]) {
                continue;
            }
            placed[i] = true;
            seq.push(elems[i]);
            rec(elems, preds, placed, seq, out);
            seq.pop();
            placed[i] = false;
        }
    }
    rec(elems, &preds, &mut placed, &mut seq, &mut out);
    out
}

/// `res_X` together with the space it maps onto.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub subset: Vec<usize>,
    pub target: OrderedExtensionSpace,
    pub map: AnchoredRigidSurjection,
}

/// Position map `L' ↦ L' ↾ subset` from `space` onto the space of
/// `reference ↾ subset` (extending `P ↾ subset` when the space carries P).
pub fn restriction_map(space: &OrderedExtensionSpace, subset: &[usize]) -> Result<(OrderedExtensionSpace, Vec<usize>)> {
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if let Some(&x) = subset.iter().find(|&&x| !space.reference.contains(x)) {
        return Err(Error::NotSubset(x));
    }
    let reference = space.reference.restrict(&subset);
    let partial = space.partial_order.as_ref().map(|p| p.restrict(&subset));
    let target = OrderedExtensionSpace::new(&reference, partial.as_ref())?;
    let map = space
        .members
        .iter()
        .map(|m| {
            let r = m.restrict(&subset);
            target
                .position(&r)
                .ok_or_else(|| Error::Postcondition(format!("restriction {} missing from target space", r.word())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((target, map))
}

/// `res_X` as an anchored rigid surjection. `anchors` are positions in
/// `space`; the target anchors are the positions of the restricted orders.
pub fn res_x(space: &OrderedExtensionSpace, subset: &[usize], anchors: &Anchors) -> Result<Restriction> {
    let (target, map) = restriction_map(space, subset)?;
    if anchors.ambient_len() != space.len() {
        return Err(Error::Anchor("anchors do not live in the source space".into()));
    }
    let target_anchor = Anchors::new(anchors.positions().iter().map(|&i| map[i]).collect(), target.len())?;
    let rs = AnchoredRigidSurjection::new(target.len(), map, anchors.clone(), target_anchor)?;
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    Ok(Restriction {
        subset,
        target,
        map: rs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lo(seq: &[usize]) -> LinearOrder {
        LinearOrder::new(seq.to_vec()).unwrap()
    }

    fn words(space: &OrderedExtensionSpace) -> Vec<String> {
        space.members().iter().map(LinearOrder::word).collect()
    }

    #[test]
    fn cut_examples() {
        assert_eq!(cut(&lo(&[0, 1, 2]), 1).unwrap().base, vec![0]);
        assert!(cut(&lo(&[2, 0, 1]), 2).unwrap().base.is_empty());
        let c = cut(&lo(&[2, 0, 1]), 1).unwrap();
        assert_eq!(c.base, vec![0, 2]);
        assert_eq!(c.order.enumeration(), &[2, 0]);
        assert_eq!(cut(&lo(&[0, 1]), 4).unwrap_err(), Error::NotSubset(4));
    }

    #[test]
    fn below_examples() {
        let l = LinearOrder::natural(3);
        assert!(below(&l, &lo(&[1, 0, 2]), &l).unwrap());
        assert!(!below(&l, &l, &l).unwrap());
        assert!(below(&lo(&[0, 2, 1]), &lo(&[1, 0, 2]), &l).unwrap());
        // Relative to 2 < 1 < 0 the comparison flips.
        assert!(!below(&lo(&[0, 2, 1]), &lo(&[1, 0, 2]), &lo(&[2, 1, 0])).unwrap());
        assert_eq!(below(&l, &lo(&[0, 1]), &l).unwrap_err(), Error::GroundSetMismatch);
    }

    #[test]
    fn full_space_on_three_points() {
        let space = OrderedExtensionSpace::new(&LinearOrder::natural(3), None).unwrap();
        assert_eq!(words(&space), ["012", "021", "102", "120", "201", "210"]);
    }

    #[test]
    fn v_poset_space() {
        let p = PartialOrder::from_pairs(3, &[(0, 1), (0, 2)]).unwrap();
        let space = OrderedExtensionSpace::new(&LinearOrder::natural(3), Some(&p)).unwrap();
        assert_eq!(words(&space), ["012", "021"]);
        let chain = PartialOrder::chain(4);
        let space = OrderedExtensionSpace::new(&LinearOrder::natural(4), Some(&chain)).unwrap();
        assert_eq!(words(&space), ["0123"]);
    }

    #[test]
    fn reference_must_extend() {
        let p = PartialOrder::from_pairs(2, &[(1, 0)]).unwrap();
        assert!(matches!(
            OrderedExtensionSpace::new(&LinearOrder::natural(2), Some(&p)),
            Err(Error::OrderDoesNotExtend { .. })
        ));
    }

    #[test]
    fn res_on_antichain() {
        let space = OrderedExtensionSpace::new(&LinearOrder::natural(3), Some(&PartialOrder::empty(3))).unwrap();
        let r = res_x(&space, &[0, 2], &Anchors::new(vec![0], 6).unwrap()).unwrap();
        let images: Vec<String> = r.map.map().iter().map(|&i| r.target.member(i).word()).collect();
        assert_eq!(images, ["02", "02", "02", "20", "20", "20"]);
        assert_eq!(r.map.map(), &[0, 0, 0, 1, 1, 1]);

        let id = res_x(&space, &[0, 1, 2], &Anchors::new(vec![0, 4], 6).unwrap()).unwrap();
        assert_eq!(id.map.map(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(id.map.target_anchor().positions(), &[0, 4]);

        let point = res_x(&space, &[1], &Anchors::new(vec![0], 6).unwrap()).unwrap();
        assert_eq!(point.target.len(), 1);
        assert_eq!(point.map.map(), &[0; 6]);

        assert_eq!(
            res_x(&space, &[0, 7], &Anchors::new(vec![0], 6).unwrap()).unwrap_err(),
            Error::NotSubset(7)
        );
    }

    #[test]
    fn from_members_checks_sorting() {
        let l = LinearOrder::natural(3);
        assert!(OrderedExtensionSpace::from_members(&l, vec![lo(&[0, 2, 1]), lo(&[2, 1, 0])]).is_ok());
        assert!(OrderedExtensionSpace::from_members(&l, vec![lo(&[2, 1, 0]), lo(&[0, 2, 1])]).is_err());
    }
}
