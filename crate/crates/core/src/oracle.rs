//! Brute-force reference implementations, kept deliberately naive and
//! independent of the main code paths: they enumerate and filter instead of
//! generating, and rebuild every target from its definition.

use std::cmp::Ordering;
use std::collections::HashMap;

use itertools::Itertools;
use serde_json::{json, Value};

use crate::engines::{ColoringCertificate, Instance, SpaceDescription};
use crate::error::{Error, Result};
use crate::linext::{cut, LinearOrder};
use crate::rigsurj::{AnchoredRigidSurjection, Anchors, Tuple};
use crate::structures::{RawStructure, Structure};

/// `k`-subsets of `0..n` by filtering all bitmasks, in lexicographic order.
pub fn brute_k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u64..1 << n)
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

/// Stirling numbers of the second kind by the usual recurrence.
pub fn stirling2(n: usize, k: usize) -> u128 {
    let mut table = vec![vec![0u128; k + 1]; n + 1];
    table[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            table[i][j] = j as u128 * table[i - 1][j] + table[i - 1][j - 1];
        }
    }
    table[n][k]
}

/// All choice sequences, one entry from each factor, lexicographic.
fn cartesian<T: Clone>(factors: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for factor in factors {
        let mut next = Vec::with_capacity(out.len() * factor.len());
        for prefix in &out {
            for item in factor {
                let mut row = prefix.clone();
                row.push(item.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// Every map `0..source_len -> 0..target_len`.
pub fn all_maps(source_len: usize, target_len: usize) -> Vec<Vec<usize>> {
    cartesian(&vec![(0..target_len).collect::<Vec<_>>(); source_len])
}

/// Surjective and sends every initial segment onto an initial segment.
pub fn is_rigid_by_segments(map: &[usize], target_len: usize) -> bool {
    let mut image = vec![false; target_len];
    for j in 0..map.len() {
        if map[j] >= target_len {
            return false;
        }
        image[map[j]] = true;
        let size = image.iter().filter(|&&b| b).count();
        if image[..size].iter().any(|&b| !b) {
            return false;
        }
    }
    image.iter().all(|&b| b)
}

/// Anchored rigid surjections as maps, by filtering every map.
pub fn brute_rigid_surjections(source_len: usize, target_len: usize, source_anchor: &[usize], target_anchor: &[usize]) -> Vec<Vec<usize>> {
    all_maps(source_len, target_len)
        .into_iter()
        .filter(|m| is_rigid_by_segments(m, target_len))
        .filter(|m| source_anchor.iter().zip(target_anchor).all(|(&b, &a)| m[b] == a))
        .collect()
}

/// `a` below `b`: some `x, y` have literally equal cuts `(a)_x = (b)_y` and
/// `x` precedes `y` in the reference order.
pub fn below_by_cuts(a: &LinearOrder, b: &LinearOrder, reference: &LinearOrder) -> Result<bool> {
    if !a.same_ground(reference) || !b.same_ground(reference) {
        return Err(Error::GroundSetMismatch);
    }
    for &x in a.enumeration() {
        for &y in b.enumeration() {
            if x != y && reference.precedes(x, y) && cut(a, x)? == cut(b, y)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// All orders on the reference's ground set (extending `pairs` when given),
/// sorted with the cut-based comparison.
pub fn brute_extensions(reference: &LinearOrder, pairs: &[(usize, usize)]) -> Result<Vec<LinearOrder>> {
    let ground = reference.ground_set();
    let mut out = Vec::new();
    for perm in ground.iter().copied().permutations(ground.len()) {
        let order = LinearOrder::new(perm)?;
        if pairs.iter().all(|&(a, b)| order.precedes(a, b)) {
            out.push(order);
        }
    }
    let mut failure = None;
    out.sort_by(|a, b| {
        if a == b {
            return Ordering::Equal;
        }
        match below_by_cuts(a, b, reference) {
            Ok(true) => Ordering::Less,
            Ok(false) => Ordering::Greater,
            Err(e) => {
                failure = Some(e);
                Ordering::Equal
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn preserves(source: &Structure, target: &Structure, map: &[usize]) -> bool {
    let n = source.size();
    (0..n).all(|a| {
        (0..n).all(|b| {
            a == b
                || (source.partial_order().contains(a, b) == target.partial_order().contains(map[a], map[b])
                    && (0..source.p()).all(|i| source.order(i).precedes(a, b) == target.order(i).precedes(map[a], map[b])))
        })
    })
}

/// Embeddings of `x` into `z` by filtering every injective map.
pub fn brute_embeddings(x: &Structure, z: &Structure) -> Vec<Vec<usize>> {
    (0..z.size())
        .permutations(x.size())
        .filter(|map| preserves(x, z, map))
        .collect()
}

/// Copies of `x` in `z` as sorted images.
pub fn brute_copies(x: &Structure, z: &Structure) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = brute_embeddings(x, z)
        .into_iter()
        .map(|mut m| {
            m.sort_unstable();
            m
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `σ ≪ τ` by searching every map `r` with `s = r ∘ t`.
pub fn brute_ll(sigma: &Tuple, tau: &Tuple) -> bool {
    let inclusion = sigma
        .sets()
        .iter()
        .zip(tau.sets())
        .all(|(s, t)| s.iter().all(|x| t.contains(x)));
    if !inclusion || sigma.rs().source_anchor() != tau.rs().source_anchor() {
        return false;
    }
    let (s, t) = (sigma.rs(), tau.rs());
    brute_rigid_surjections(
        t.target_len(),
        s.target_len(),
        t.target_anchor().positions(),
        s.target_anchor().positions(),
    )
    .iter()
    .any(|r| t.map().iter().zip(s.map()).all(|(&b, &a)| r[b] == a))
}

/// `π^τ_i` as a lookup table built by sorting.
fn coordinate_table(tau: &Tuple, orders: &[LinearOrder], i: usize) -> HashMap<usize, usize> {
    let order = &orders[tau.rs().map()[i]];
    order.enumeration().iter().copied().zip(tau.sets()[i].iter().copied()).collect()
}

/// The twisted product recomputed from lookup tables.
pub fn brute_twisted(tau: &Tuple, b_orders: &[LinearOrder], sigma: &Tuple) -> Result<Tuple> {
    let sets = (0..tau.m())
        .map(|i| {
            let table = coordinate_table(tau, b_orders, i);
            sigma.sets()[i].iter().map(|y| table[y]).collect()
        })
        .collect();
    let map: Vec<usize> = tau.rs().map().iter().map(|&b| sigma.rs().map()[b]).collect();
    let rs = AnchoredRigidSurjection::new(
        sigma.rs().target_len(),
        map,
        tau.rs().source_anchor().clone(),
        sigma.rs().target_anchor().clone(),
    )?;
    Tuple::new(sets, rs)
}

/// The grid `n^m` rebuilt from coordinates: `<_pr` and the orders starting
/// at the given coordinates.
pub fn brute_grid(n: usize, m: usize, anchors: &[usize]) -> Result<Structure> {
    let points = all_maps(m, n);
    let size = points.len();
    let mut pairs = Vec::new();
    for a in 0..size {
        for b in 0..size {
            if (0..m).all(|j| points[a][j] < points[b][j]) {
                pairs.push([a, b]);
            }
        }
    }
    let linear_orders = anchors
        .iter()
        .map(|&start| {
            let mut seq: Vec<usize> = (0..size).collect();
            seq.sort_by(|&a, &b| {
                (0..m)
                    .map(|j| (start + j) % m)
                    .map(|c| points[a][c].cmp(&points[b][c]))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            });
            seq
        })
        .collect();
    Structure::validate(&RawStructure {
        p: anchors.len(),
        size,
        partial_order: pairs,
        linear_orders,
        hasse: false,
    })
}

fn members_of(space: &SpaceDescription) -> Result<Vec<LinearOrder>> {
    space.members.iter().map(|m| LinearOrder::new(m.clone())).collect()
}

fn rs_value(map: &[usize], source_anchor: &[usize], target_anchor: &[usize]) -> Value {
    json!({"map": map, "source_anchor": source_anchor, "target_anchor": target_anchor})
}

fn tuple_value(sets: &[Vec<usize>], rs: Value) -> Value {
    json!({"sets": sets, "rs": rs})
}

fn build_tuple(sets: Vec<Vec<usize>>, map: Vec<usize>, target_len: usize, source_anchor: &[usize], target_anchor: &[usize]) -> Result<Tuple> {
    let rs = AnchoredRigidSurjection::new(
        target_len,
        map.clone(),
        Anchors::new(source_anchor.to_vec(), map.len())?,
        Anchors::new(target_anchor.to_vec(), target_len)?,
    )?;
    Tuple::new(sets, rs)
}

fn tuples(n: usize, k: usize, m: usize, rs: &[Vec<usize>], target_len: usize, source_anchor: &[usize], target_anchor: &[usize]) -> Result<Vec<Tuple>> {
    let mut out = Vec::new();
    for sets in cartesian(&vec![brute_k_subsets(n, k); m]) {
        for r in rs {
            out.push(build_tuple(sets.clone(), r.clone(), target_len, source_anchor, target_anchor)?);
        }
    }
    Ok(out)
}

/// Targets of an instance, each as the list of object labels it contains.
pub fn rebuild_targets(instance: &Instance) -> Result<Vec<Vec<Value>>> {
    match instance {
        Instance::Product { n, k, l, m } => {
            let mut out = Vec::new();
            for target in cartesian(&vec![brute_k_subsets(*n, *l); *m]) {
                let parts: Vec<Vec<Vec<usize>>> = target.iter().map(|t| t.iter().copied().combinations(*k).collect()).collect();
                let cone = cartesian(&parts).iter().map(|s| json!(s)).collect();
                out.push(cone);
            }
            Ok(out)
        }
        Instance::Dual {
            m,
            anchors,
            a_len,
            a_anchor,
            b_len,
            b_anchor,
        } => {
            let between = brute_rigid_surjections(*b_len, *a_len, b_anchor, a_anchor);
            Ok(brute_rigid_surjections(*m, *b_len, anchors, b_anchor)
                .iter()
                .map(|t| {
                    between
                        .iter()
                        .map(|s| json!(t.iter().map(|&b| s[b]).collect::<Vec<_>>()))
                        .collect()
                })
                .collect())
        }
        Instance::Prop2 {
            m,
            n,
            anchors,
            a_len,
            a_anchor,
            b_len,
            b_anchor,
            k,
            l,
        } => {
            let a_rs = brute_rigid_surjections(*m, *a_len, anchors, a_anchor);
            let b_rs = brute_rigid_surjections(*m, *b_len, anchors, b_anchor);
            let objects = tuples(*n, *k, *m, &a_rs, *a_len, anchors, a_anchor)?;
            let targets = tuples(*n, *l, *m, &b_rs, *b_len, anchors, b_anchor)?;
            Ok(targets
                .iter()
                .map(|tau| {
                    objects
                        .iter()
                        .filter(|sigma| brute_ll(sigma, tau))
                        .map(|sigma| tuple_value(sigma.sets(), rs_value(sigma.rs().map(), anchors, a_anchor)))
                        .collect()
                })
                .collect())
        }
        Instance::Prop5 {
            m,
            n,
            anchors,
            a_space,
            a_anchor,
            b_space,
            b_anchor,
        }
        | Instance::TwistedFamily {
            m,
            n,
            anchors,
            a_space,
            a_anchor,
            b_space,
            b_anchor,
        } => {
            let b_orders = members_of(b_space)?;
            let (a_len, b_len) = (a_space.members.len(), b_space.members.len());
            let (k, l) = (a_space.reference.len(), b_space.reference.len());
            let y = {
                let mut g = b_space.reference.clone();
                g.sort_unstable();
                g
            };
            let b_rs = brute_rigid_surjections(*m, b_len, anchors, b_anchor);
            let targets = tuples(*n, l, *m, &b_rs, b_len, anchors, b_anchor)?;
            let s_rs = brute_rigid_surjections(b_len, a_len, b_anchor, a_anchor);
            let mut sigmas = Vec::new();
            for sets in cartesian(&vec![y.iter().copied().combinations(k).collect::<Vec<_>>(); *m]) {
                for r in &s_rs {
                    sigmas.push(build_tuple(sets.clone(), r.clone(), a_len, b_anchor, a_anchor)?);
                }
            }
            targets
                .iter()
                .map(|tau| {
                    sigmas
                        .iter()
                        .map(|sigma| {
                            let prod = brute_twisted(tau, &b_orders, sigma)?;
                            Ok(tuple_value(prod.sets(), rs_value(prod.rs().map(), anchors, a_anchor)))
                        })
                        .collect()
                })
                .collect()
        }
        Instance::RamseyWitness { z, x, y } => {
            let (z, x, y) = (Structure::validate(z)?, Structure::validate(x)?, Structure::validate(y)?);
            let x_in_y = brute_embeddings(&x, &y);
            Ok(brute_copies(&y, &z)
                .iter()
                .map(|copy| {
                    let mut cone: Vec<Vec<usize>> = x_in_y
                        .iter()
                        .map(|e| {
                            let mut img: Vec<usize> = e.iter().map(|&i| copy[i]).collect();
                            img.sort_unstable();
                            img
                        })
                        .collect();
                    cone.sort();
                    cone.dedup();
                    cone.into_iter().map(|c| json!(c)).collect()
                })
                .collect())
        }
        Instance::EmbeddingFamily { m, n, anchors, x, y } => {
            let (x, y) = (Structure::validate(x)?, Structure::validate(y)?);
            let grid = brute_grid(*n, *m, anchors)?;
            let ss = brute_embeddings(&x, &y);
            Ok(brute_embeddings(&y, &grid)
                .iter()
                .map(|g| {
                    ss.iter()
                        .map(|s| json!(s.iter().map(|&i| g[i]).collect::<Vec<_>>()))
                        .collect()
                })
                .collect())
        }
    }
}

/// Every strict partial order on `0..n`, by filtering all relations.
pub fn brute_posets(n: usize) -> Vec<Vec<(usize, usize)>> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << cells.len() {
        let rel: Vec<(usize, usize)> = cells.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &c)| c).collect();
        let has = |a: usize, b: usize| rel.contains(&(a, b));
        let antisymmetric = rel.iter().all(|&(a, b)| !has(b, a));
        let transitive = rel.iter().all(|&(a, b)| rel.iter().filter(|&&(c, _)| c == b).all(|&(_, d)| has(a, d)));
        if antisymmetric && transitive {
            out.push(rel);
        }
    }
    out
}

/// Whether every `colors`-coloring of the objects leaves some target
/// monochromatic, by trying all of them. Refuses beyond `max_objects`.
pub fn brute_witness_holds(instance: &Instance, colors: usize, max_objects: usize) -> Result<bool> {
    let targets = rebuild_targets(instance)?;
    let mut labels: Vec<String> = targets.iter().flatten().map(Value::to_string).collect();
    labels.sort();
    labels.dedup();
    if labels.len() > max_objects {
        return Err(Error::infeasible("brute-force coloring", format!("{} objects", labels.len()), format!("{max_objects} objects")));
    }
    let index: HashMap<&String, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let cones: Vec<Vec<usize>> = targets
        .iter()
        .map(|cone| cone.iter().map(|v| index[&v.to_string()]).collect())
        .collect();
    if cones.iter().any(Vec::is_empty) {
        return Ok(true);
    }
    let mut coloring = vec![0usize; labels.len()];
    loop {
        let some_mono = cones.iter().any(|c| c.iter().all(|&o| coloring[o] == coloring[c[0]]));
        if !some_mono {
            return Ok(false);
        }
        // Odometer step.
        let mut i = 0;
        loop {
            if i == coloring.len() {
                return Ok(true);
            }
            coloring[i] += 1;
            if coloring[i] < colors {
                break;
            }
            coloring[i] = 0;
            i += 1;
        }
    }
}

/// Re-validates a counterexample independently: the coloring uses only the
/// allowed colors, covers every object of every target, and leaves no target
/// monochromatic. Certificates claiming a witness pass trivially.
pub fn recheck_certificate(cert: &ColoringCertificate) -> Result<()> {
    let Some(coloring) = cert.counterexample() else {
        return Ok(());
    };
    let colors: HashMap<String, usize> = coloring.iter().map(|c| (c.object.to_string(), c.color)).collect();
    if colors.len() != coloring.len() {
        return Err(Error::Postcondition("an object is colored twice".into()));
    }
    if let Some(c) = coloring.iter().find(|c| c.color >= cert.colors) {
        return Err(Error::Postcondition(format!("color {} is out of range", c.color)));
    }
    let targets = rebuild_targets(&cert.instance)?;
    if targets.len() != cert.targets {
        return Err(Error::Postcondition(format!(
            "independent rebuild has {} targets, certificate reports {}",
            targets.len(),
            cert.targets
        )));
    }
    for (i, cone) in targets.iter().enumerate() {
        let used = cone
            .iter()
            .map(|label| {
                colors
                    .get(&label.to_string())
                    .copied()
                    .ok_or_else(|| Error::Postcondition(format!("object {label} of target {i} is uncolored")))
            })
            .collect::<Result<Vec<_>>>()?;
        if used.windows(2).all(|w| w[0] == w[1]) {
            return Err(Error::Postcondition(format!("target {i} is monochromatic")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_table() {
        assert_eq!(stirling2(3, 2), 3);
        assert_eq!(stirling2(5, 3), 25);
        assert_eq!(stirling2(0, 0), 1);
        assert_eq!(stirling2(3, 0), 0);
    }

    #[test]
    fn segment_rigidity() {
        assert!(is_rigid_by_segments(&[0, 0, 1], 2));
        assert!(!is_rigid_by_segments(&[1, 0], 2));
        assert_eq!(brute_rigid_surjections(4, 2, &[0], &[0]).len(), 7);
    }

    #[test]
    fn cut_based_below() {
        let l = LinearOrder::natural(3);
        let a = LinearOrder::new(vec![0, 2, 1]).unwrap();
        let b = LinearOrder::new(vec![1, 0, 2]).unwrap();
        assert!(below_by_cuts(&a, &b, &l).unwrap());
        assert!(!below_by_cuts(&b, &a, &l).unwrap());
        assert!(!below_by_cuts(&a, &a, &l).unwrap());
        let words: Vec<String> = brute_extensions(&l, &[]).unwrap().iter().map(LinearOrder::word).collect();
        assert_eq!(words, ["012", "021", "102", "120", "201", "210"]);
    }

    #[test]
    fn brute_grid_matches_definition() {
        let g = brute_grid(2, 2, &[0, 1]).unwrap();
        assert_eq!(g.order(1).enumeration(), &[0, 2, 1, 3]);
    }
}
