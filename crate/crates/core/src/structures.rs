//! Finite structures `(X, P, L_0, ..., L_{p-1})`: a strict partial order
//! together with `p` linear orders that each extend it.
//!
//! Ground sets are always `{0, ..., size - 1}`. Partial orders are stored
//! transitively closed.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linext::LinearOrder;

/// A strict relation on labels `0..size`, stored as a dense bit matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialOrder {
    size: usize,
    bits: Vec<bool>,
}

impl PartialOrder {
    pub fn empty(size: usize) -> Self {
        PartialOrder {
            size,
            bits: vec![false; size * size],
        }
    }

    /// Builds the relation from pairs without checking any order axioms.
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut rel = PartialOrder::empty(size);
        for &(a, b) in pairs {
            for x in [a, b] {
                if x >= size {
                    return Err(Error::ElementOutOfRange { element: x, size });
                }
            }
            rel.bits[a * size + b] = true;
        }
        Ok(rel)
    }

    /// The strict order a < b on `0..size`.
    pub fn chain(size: usize) -> Self {
        let mut rel = PartialOrder::empty(size);
        for a in 0..size {
            for b in a + 1..size {
                rel.bits[a * size + b] = true;
            }
        }
        rel
    }

    /// The relation induced by a linear order (a before b).
    pub fn from_linear(order: &LinearOrder, size: usize) -> Result<Self> {
        let mut rel = PartialOrder::empty(size);
        let seq = order.enumeration();
        for (i, &a) in seq.iter().enumerate() {
            if a >= size {
                return Err(Error::ElementOutOfRange { element: a, size });
            }
            for &b in &seq[i + 1..] {
                rel.bits[a * size + b] = true;
            }
        }
        Ok(rel)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        a < self.size && b < self.size && self.bits[a * self.size + b]
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.size {
            for b in 0..self.size {
                if self.bits[a * self.size + b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Warshall closure.
    pub fn transitive_closure(&self) -> Self {
        let n = self.size;
        let mut bits = self.bits.clone();
        for k in 0..n {
            for i in 0..n {
                if !bits[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if bits[k * n + j] {
                        bits[i * n + j] = true;
                    }
                }
            }
        }
        PartialOrder { size: n, bits }
    }

    /// First witness `(a, b, c)` with `aPb`, `bPc` but not `aPc`.
    pub fn transitivity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.size;
        for a in 0..n {
            for b in 0..n {
                if !self.contains(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.contains(b, c) && !self.contains(a, c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn reflexive_element(&self) -> Option<usize> {
        (0..self.size).find(|&a| self.contains(a, a))
    }

    /// `P ↾ subset`, keeping the original labels.
    pub fn restrict(&self, subset: &[usize]) -> Self {
        let mut rel = PartialOrder::empty(self.size);
        for &a in subset {
            for &b in subset {
                if self.contains(a, b) {
                    rel.bits[a * self.size + b] = true;
                }
            }
        }
        rel
    }

    /// Cover pairs of the order (the Hasse diagram).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.pairs()
            .into_iter()
            .filter(|&(a, b)| !(0..self.size).any(|c| self.contains(a, c) && self.contains(c, b)))
            .collect()
    }

    pub fn is_contained_in(&self, other: &PartialOrder) -> bool {
        self.pairs().into_iter().all(|(a, b)| other.contains(a, b))
    }
}

/// The wire form of a structure. Serializes with the field order
/// `p, size, partial_order, linear_orders`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawStructure {
    pub p: usize,
    pub size: usize,
    pub partial_order: Vec<[usize; 2]>,
    pub linear_orders: Vec<Vec<usize>>,
    /// When set, `partial_order` is a Hasse diagram to be closed on load.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub hasse: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    p: usize,
    size: usize,
    partial_order: PartialOrder,
    linear_orders: Vec<LinearOrder>,
}

impl Structure {
    /// Checks every structure axiom and returns the validated value.
    pub fn validate(raw: &RawStructure) -> Result<Self> {
        if raw.p == 0 {
            return Err(Error::ZeroArity);
        }
        if raw.linear_orders.len() != raw.p {
            return Err(Error::WrongOrderCount {
                expected: raw.p,
                found: raw.linear_orders.len(),
            });
        }
        let pairs: Vec<(usize, usize)> = raw.partial_order.iter().map(|&[a, b]| (a, b)).collect();
        let given = PartialOrder::from_pairs(raw.size, &pairs)?;
        if let Some(x) = given.reflexive_element() {
            return Err(Error::ReflexivePair(x));
        }
        let partial_order = if raw.hasse {
            let closed = given.transitive_closure();
            if let Some(x) = closed.reflexive_element() {
                return Err(Error::Cycle(x));
            }
            closed
        } else {
            if let Some((a, b, c)) = given.transitivity_violation() {
                // An unclosed 2-cycle shows up here as (a, b, a).
                if a == c {
                    return Err(Error::Cycle(a));
                }
                return Err(Error::NotTransitive(a, b, c));
            }
            given
        };
        let mut linear_orders = Vec::with_capacity(raw.p);
        for (index, seq) in raw.linear_orders.iter().enumerate() {
            let order = LinearOrder::new(seq.clone()).map_err(|_| Error::NotPermutation { index })?;
            if order.len() != raw.size || order.enumeration().iter().any(|&x| x >= raw.size) {
                return Err(Error::NotPermutation { index });
            }
            if let Some((below, above)) = order.extension_violation(&partial_order) {
                return Err(Error::OrderDoesNotExtend { index, below, above });
            }
            linear_orders.push(order);
        }
        Ok(Structure {
            p: raw.p,
            size: raw.size,
            partial_order,
            linear_orders,
        })
    }

    pub fn new(partial_order: PartialOrder, linear_orders: Vec<LinearOrder>) -> Result<Self> {
        let raw = RawStructure {
            p: linear_orders.len(),
            size: partial_order.size(),
            partial_order: partial_order.pairs().into_iter().map(|(a, b)| [a, b]).collect(),
            linear_orders: linear_orders.iter().map(|o| o.enumeration().to_vec()).collect(),
            hasse: false,
        };
        Structure::validate(&raw)
    }

    /// `size` points, totally ordered by P and by all `p` linear orders.
    pub fn chain(size: usize, p: usize) -> Result<Self> {
        Structure::new(PartialOrder::chain(size), vec![LinearOrder::natural(size); p])
    }

    /// `size` points with empty P and every linear order natural.
    pub fn antichain(size: usize, p: usize) -> Result<Self> {
        Structure::new(PartialOrder::empty(size), vec![LinearOrder::natural(size); p])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawStructure = serde_json::from_str(text)?;
        Structure::validate(&raw)
    }

    pub fn to_raw(&self) -> RawStructure {
        RawStructure {
            p: self.p,
            size: self.size,
            partial_order: self.partial_order.pairs().into_iter().map(|(a, b)| [a, b]).collect(),
            linear_orders: self.linear_orders.iter().map(|o| o.enumeration().to_vec()).collect(),
            hasse: false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("structures always serialize")
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn partial_order(&self) -> &PartialOrder {
        &self.partial_order
    }

    pub fn linear_orders(&self) -> &[LinearOrder] {
        &self.linear_orders
    }

    pub fn order(&self, i: usize) -> &LinearOrder {
        &self.linear_orders[i]
    }

    pub fn ground_set(&self) -> Vec<usize> {
        (0..self.size).collect()
    }

    pub(crate) fn check_arity(&self, other: &Structure) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ArityMismatch {
                left: self.p,
                right: other.p,
            });
        }
        Ok(())
    }

    /// The substructure on `subset`, relabeled to `0..|subset|` along `L_0`.
    pub fn restrict(&self, subset: &[usize]) -> Result<Structure> {
        let mut elements = subset.to_vec();
        elements.sort_unstable();
        elements.dedup();
        if let Some(&x) = elements.iter().find(|&&x| x >= self.size) {
            return Err(Error::NotSubset(x));
        }
        // Elements listed in L_0 order; new label = position in that list.
        let by_l0 = self.linear_orders[0].restrict(&elements).enumeration().to_vec();
        let mut relabel = vec![usize::MAX; self.size];
        for (new, &old) in by_l0.iter().enumerate() {
            relabel[old] = new;
        }
        let k = by_l0.len();
        let mut pairs = Vec::new();
        for &a in &by_l0 {
            for &b in &by_l0 {
                if self.partial_order.contains(a, b) {
                    pairs.push((relabel[a], relabel[b]));
                }
            }
        }
        let partial_order = PartialOrder::from_pairs(k, &pairs)?;
        let linear_orders = self
            .linear_orders
            .iter()
            .map(|order| {
                let seq = order.restrict(&elements).enumeration().iter().map(|&x| relabel[x]).collect();
                LinearOrder::new(seq)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Structure {
            p: self.p,
            size: k,
            partial_order,
            linear_orders,
        })
    }

    /// Graphviz rendering of the Hasse diagram of P, nodes annotated with L_0 rank.
    pub fn to_dot(&self) -> String {
        self.to_dot_with_labels(|x| x.to_string())
    }

    pub fn to_dot_with_labels(&self, label: impl Fn(usize) -> String) -> String {
        let mut out = String::from("digraph structure {\n  rankdir=BT;\n");
        let l0 = &self.linear_orders[0];
        for x in 0..self.size {
            let rank = l0.rank_of(x).unwrap_or(usize::MAX);
            let _ = writeln!(out, "  n{x} [label=\"{} (L0 rank {rank})\"];", label(x));
        }
        for (a, b) in self.partial_order.covers() {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}

/// An injective map between ground sets, `map[x]` being the image of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn new(map: Vec<usize>) -> Self {
        Embedding { map }
    }

    pub fn identity(size: usize) -> Self {
        Embedding {
            map: (0..size).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Embedding) -> Embedding {
        Embedding {
            map: inner.map.iter().map(|&y| self.map[y]).collect(),
        }
    }

    /// Sorted image.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img
    }

    /// Whether `self` is an embedding of `source` into `target`: injective and
    /// preserving P and every `L_i` in both directions.
    pub fn is_embedding(&self, source: &Structure, target: &Structure) -> Result<bool> {
        source.check_arity(target)?;
        if self.map.len() != source.size {
            return Err(Error::Dimension(format!(
                "map has {} entries, source has {} points",
                self.map.len(),
                source.size
            )));
        }
        if let Some(&y) = self.map.iter().find(|&&y| y >= target.size) {
            return Err(Error::ElementOutOfRange {
                element: y,
                size: target.size,
            });
        }
        for a in 0..source.size {
            for b in 0..source.size {
                if a == b {
                    continue;
                }
                let (fa, fb) = (self.map[a], self.map[b]);
                if fa == fb {
                    return Ok(false);
                }
                if source.partial_order.contains(a, b) != target.partial_order.contains(fa, fb) {
                    return Ok(false);
                }
                for (ls, lt) in source.linear_orders.iter().zip(&target.linear_orders) {
                    if ls.precedes(a, b) != lt.precedes(fa, fb) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// The image of an embedding, as a sorted subset of the target ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StructureCopy {
    pub elements: Vec<usize>,
}

/// All embeddings of `source` into `target`, lexicographic on image tuples.
pub fn enumerate_embeddings(source: &Structure, target: &Structure) -> Result<Vec<Embedding>> {
    enumerate_embeddings_limited(source, target, usize::MAX)
}

/// As [`enumerate_embeddings`], refusing with [`Error::Infeasible`] once more
/// than `limit` embeddings turn up.
pub fn enumerate_embeddings_limited(source: &Structure, target: &Structure, limit: usize) -> Result<Vec<Embedding>> {
    source.check_arity(target)?;
    let mut out = Vec::new();
    let mut partial = Vec::with_capacity(source.size);
    let mut used = vec![false; target.size];
    if !extend_embedding(source, target, &mut partial, &mut used, &mut out, limit) {
        return Err(Error::infeasible(
            "embedding enumeration",
            format!("more than {limit} embeddings"),
            format!("{limit} embeddings"),
        ));
    }
    Ok(out)
}

fn extend_embedding(
    source: &Structure,
    target: &Structure,
    partial: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Embedding>,
    limit: usize,
) -> bool {
    let x = partial.len();
    if x == source.size {
        out.push(Embedding::new(partial.clone()));
        return out.len() <= limit;
    }
    for y in 0..target.size {
        if used[y] || !consistent(source, target, partial, x, y) {
            continue;
        }
        used[y] = true;
        partial.push(y);
        let ok = extend_embedding(source, target, partial, used, out, limit);
        partial.pop();
        used[y] = false;
        if !ok {
            return false;
        }
    }
    true
}

fn consistent(source: &Structure, target: &Structure, partial: &[usize], x: usize, y: usize) -> bool {
    partial.iter().enumerate().all(|(w, &fw)| {
        source.partial_order.contains(w, x) == target.partial_order.contains(fw, y)
            && source.partial_order.contains(x, w) == target.partial_order.contains(y, fw)
            && source
                .linear_orders
                .iter()
                .zip(&target.linear_orders)
                .all(|(ls, lt)| ls.precedes(w, x) == lt.precedes(fw, y))
    })
}

/// All copies of `source` in `target`, sorted lexicographically.
pub fn enumerate_copies(source: &Structure, target: &Structure) -> Result<Vec<StructureCopy>> {
    let mut copies: Vec<StructureCopy> = enumerate_embeddings(source, target)?
        .into_iter()
        .map(|e| StructureCopy { elements: e.image() })
        .collect();
    copies.sort();
    copies.dedup();
    Ok(copies)
}

/// Whether `a` and `b` are isomorphic. Structures are rigid, so this is a
/// single embedding check between equal-size structures.
pub fn isomorphic(a: &Structure, b: &Structure) -> bool {
    a.p == b.p && a.size == b.size && enumerate_embeddings(a, b).map(|e| !e.is_empty()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(size: usize, pairs: &[[usize; 2]], orders: &[&[usize]]) -> RawStructure {
        RawStructure {
            p: orders.len(),
            size,
            partial_order: pairs.to_vec(),
            linear_orders: orders.iter().map(|o| o.to_vec()).collect(),
            hasse: false,
        }
    }

    #[test]
    fn two_chain_validates() {
        let s = Structure::validate(&raw(2, &[[0, 1]], &[&[0, 1]])).unwrap();
        assert_eq!(s.partial_order().pairs(), vec![(0, 1)]);
    }

    #[test]
    fn reversed_order_does_not_extend() {
        let err = Structure::validate(&raw(2, &[[0, 1]], &[&[1, 0]])).unwrap_err();
        assert_eq!(
            err,
            Error::OrderDoesNotExtend {
                index: 0,
                below: 0,
                above: 1
            }
        );
    }

    #[test]
    fn hasse_input_is_closed() {
        let mut r = raw(3, &[[0, 1], [1, 2]], &[&[0, 1, 2]]);
        assert_eq!(Structure::validate(&r).unwrap_err(), Error::NotTransitive(0, 1, 2));
        r.hasse = true;
        let s = Structure::validate(&r).unwrap();
        // Closure oracle: pairs reachable by a directed path.
        assert_eq!(s.partial_order().pairs(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            Structure::validate(&raw(2, &[[1, 1]], &[&[0, 1]])).unwrap_err(),
            Error::ReflexivePair(1)
        );
        let mut cyc = raw(3, &[[0, 1], [1, 2], [2, 0]], &[&[0, 1, 2]]);
        cyc.hasse = true;
        assert!(matches!(Structure::validate(&cyc).unwrap_err(), Error::Cycle(_)));
        assert_eq!(
            Structure::validate(&raw(2, &[[0, 1], [1, 0]], &[&[0, 1]])).unwrap_err(),
            Error::Cycle(0)
        );
        assert_eq!(
            Structure::validate(&raw(3, &[], &[&[0, 1, 1]])).unwrap_err(),
            Error::NotPermutation { index: 0 }
        );
        assert_eq!(
            Structure::validate(&raw(3, &[], &[&[0, 1]])).unwrap_err(),
            Error::NotPermutation { index: 0 }
        );
        let mut wrong = raw(2, &[], &[&[0, 1]]);
        wrong.p = 2;
        assert_eq!(
            Structure::validate(&wrong).unwrap_err(),
            Error::WrongOrderCount { expected: 2, found: 1 }
        );
        let mut zero = raw(1, &[], &[]);
        zero.p = 0;
        assert_eq!(Structure::validate(&zero).unwrap_err(), Error::ZeroArity);
        assert_eq!(
            Structure::validate(&raw(2, &[[0, 5]], &[&[0, 1]])).unwrap_err(),
            Error::ElementOutOfRange { element: 5, size: 2 }
        );
    }

    #[test]
    fn restrict_examples() {
        let chain3 = Structure::chain(3, 1).unwrap();
        assert_eq!(chain3.restrict(&[0, 1, 2]).unwrap(), chain3);
        assert_eq!(chain3.restrict(&[0, 2]).unwrap(), Structure::chain(2, 1).unwrap());
        assert_eq!(chain3.restrict(&[0, 3]).unwrap_err(), Error::NotSubset(3));

        // Antichain with two lexicographic orders 012 and 210.
        let anti = Structure::validate(&raw(3, &[], &[&[0, 1, 2], &[2, 1, 0]])).unwrap();
        for subset in [[0, 1], [0, 2], [1, 2]] {
            let r = anti.restrict(&subset).unwrap();
            assert!(r.partial_order().is_empty());
            assert_eq!(r.order(0).enumeration(), &[0, 1]);
            assert_eq!(r.order(1).enumeration(), &[1, 0]);
        }
    }

    #[test]
    fn restrict_relabels_along_l0() {
        // L_0 = 2 < 0 < 1; restricting to {0, 2} gives 2 -> 0, 0 -> 1.
        let s = Structure::validate(&raw(3, &[[2, 0]], &[&[2, 0, 1]])).unwrap();
        let r = s.restrict(&[0, 2]).unwrap();
        assert_eq!(r.partial_order().pairs(), vec![(0, 1)]);
        assert_eq!(r.order(0).enumeration(), &[0, 1]);
    }

    #[test]
    fn embedding_examples() {
        let c2 = Structure::chain(2, 1).unwrap();
        let c3 = Structure::chain(3, 1).unwrap();
        assert!(Embedding::identity(3).is_embedding(&c3, &c3).unwrap());
        assert!(Embedding::new(vec![0, 2]).is_embedding(&c2, &c3).unwrap());
        assert!(!Embedding::new(vec![2, 0]).is_embedding(&c2, &c3).unwrap());
        let c2p2 = Structure::chain(2, 2).unwrap();
        assert!(matches!(
            Embedding::new(vec![0, 1]).is_embedding(&c2p2, &c3),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn embedding_counts() {
        let point = Structure::chain(1, 1).unwrap();
        let v = Structure::validate(&raw(4, &[[0, 1], [0, 2]], &[&[0, 1, 2, 3]])).unwrap();
        assert_eq!(enumerate_embeddings(&point, &v).unwrap().len(), 4);
        let c2 = Structure::chain(2, 1).unwrap();
        let c4 = Structure::chain(4, 1).unwrap();
        let embs = enumerate_embeddings(&c2, &c4).unwrap();
        assert_eq!(embs.len(), 6);
        assert_eq!(embs[0].map, vec![0, 1]);
        assert_eq!(embs[5].map, vec![2, 3]);
        assert_eq!(enumerate_embeddings(&v, &v).unwrap(), vec![Embedding::identity(4)]);
    }

    #[test]
    fn copy_counts() {
        let c2 = Structure::chain(2, 1).unwrap();
        let c5 = Structure::chain(5, 1).unwrap();
        assert_eq!(enumerate_copies(&c2, &c5).unwrap().len(), 10);
        let a2 = Structure::antichain(2, 1).unwrap();
        let a4 = Structure::antichain(4, 1).unwrap();
        assert_eq!(enumerate_copies(&a2, &a4).unwrap().len(), 6);
        assert_eq!(
            enumerate_copies(&a4, &a4).unwrap(),
            vec![StructureCopy {
                elements: vec![0, 1, 2, 3]
            }]
        );
    }

    #[test]
    fn json_round_trip_and_dot() {
        let text = r#"{"p":1,"size":3,"partial_order":[[0,1],[1,2]],"linear_orders":[[0,1,2]],"hasse":true}"#;
        let s = Structure::from_json(text).unwrap();
        let emitted = s.to_json();
        assert_eq!(
            emitted,
            r#"{"p":1,"size":3,"partial_order":[[0,1],[0,2],[1,2]],"linear_orders":[[0,1,2]]}"#
        );
        assert_eq!(Structure::from_json(&emitted).unwrap(), s);
        let dot = s.to_dot();
        assert!(dot.contains("n0 -> n1"));
        assert!(dot.contains("n1 -> n2"));
        assert!(!dot.contains("n0 -> n2"));
        assert!(matches!(Structure::from_json("{"), Err(Error::Parse(_))));
    }
}
