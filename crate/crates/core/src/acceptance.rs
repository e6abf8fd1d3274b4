//! The acceptance matrix: nine criteria, each checked against an independent
//! oracle from [`crate::oracle`] within a runtime limit.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::config::RunConfig;
use crate::engines::{prop2_problem, prop5_problem, ColoringCertificate, SearchVerdict, Strategy, WitnessParams};
use crate::error::{Error, Result};
use crate::grid::{
    canonical_structures, construct_witness, grid_structure, minimal_witness_search, pi_tau, pullback_copy,
    ramsey_problem, verify_ramsey_witness, CandidateSpace, ConstructOptions, Construction, FramedStructure,
};
use crate::interp::{check_identity, check_interpretation, check_member, transfer, AlphaVariant, InterpretationFrame, PairKind};
use crate::linext::{compare_below, res_x, LinearOrder, OrderedExtensionSpace};
use crate::oracle;
use crate::rigsurj::{enumerate_rs, twisted_compose, Anchors, Tuple};
use crate::structures::{PartialOrder, Structure};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} {:<22} {} ({:.2} s, limit {} s): {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed_ms as f64 / 1000.0,
            self.limit_ms / 1000,
            self.detail
        )
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(cond: bool, what: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Postcondition(what.into()))
    }
}

fn timed(id: usize, name: &'static str, limit: Duration, run: impl FnOnce() -> Result<String>) -> CriterionReport {
    let start = Instant::now();
    let result = run();
    let elapsed = start.elapsed();
    let outcome = match result {
        Ok(detail) if elapsed <= limit => Outcome { passed: true, detail },
        Ok(detail) => Outcome {
            passed: false,
            detail: format!("over the time limit; {detail}"),
        },
        Err(e) => Outcome {
            passed: false,
            detail: e.to_string(),
        },
    };
    CriterionReport {
        id,
        name,
        passed: outcome.passed,
        detail: outcome.detail,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.as_millis(),
    }
}

fn all_orders(n: usize) -> Result<Vec<LinearOrder>> {
    Ok(OrderedExtensionSpace::new(&LinearOrder::natural(n), None)?.members().to_vec())
}

/// The below-order on all orders of sets of size at most 4.
pub fn below_order_suite() -> Result<String> {
    let mut pairs = 0usize;
    for n in 0..=4 {
        let orders = all_orders(n)?;
        for reference in &orders {
            let space = OrderedExtensionSpace::new(reference, None)?;
            check(space.members()[0] == *reference, "the reference is not the first member")?;
            let brute = oracle::brute_extensions(reference, &[])?;
            check(brute == space.members(), "sorted space differs from the cut-based sort")?;
            for a in &orders {
                check(a == reference || oracle::below_by_cuts(reference, a, reference)?, "reference is not the minimum")?;
                for b in &orders {
                    pairs += 1;
                    let lex = compare_below(a, b, reference)?;
                    let by_cuts = oracle::below_by_cuts(a, b, reference)?;
                    check(by_cuts == lex.is_lt(), format!("definitions disagree on {} vs {}", a.word(), b.word()))?;
                    check((a == b) == lex.is_eq(), "comparison is not total and irreflexive")?;
                    check(lex.reverse() == compare_below(b, a, reference)?, "comparison is not antisymmetric")?;
                    for c in &orders {
                        if lex.is_lt() && compare_below(b, c, reference)?.is_lt() {
                            check(compare_below(a, c, reference)?.is_lt(), "comparison is not transitive")?;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} ordered pairs on sets of size 0..=4, both definitions agree"))
}

/// `res_X` over every poset on at most 4 points, every extension as
/// reference and every subset.
pub fn restriction_suite() -> Result<String> {
    let mut maps = 0usize;
    for n in 1..=4 {
        for pairs in oracle::brute_posets(n) {
            let poset = PartialOrder::from_pairs(n, &pairs)?;
            for reference in &oracle::brute_extensions(&LinearOrder::natural(n), &pairs)? {
                let space = OrderedExtensionSpace::new(reference, Some(&poset))?;
                // Every member as an anchor at once.
                let anchors = Anchors::new((0..space.len()).collect(), space.len())?;
                for mask in 1u32..(1 << n) {
                    let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                    let res = res_x(&space, &subset, &anchors)?;
                    maps += 1;
                    check(
                        oracle::is_rigid_by_segments(res.map.map(), res.target.len()),
                        format!("res on {subset:?} is not rigid"),
                    )?;
                    let restricted_pairs: Vec<(usize, usize)> =
                        pairs.iter().copied().filter(|(a, b)| subset.contains(a) && subset.contains(b)).collect();
                    let brute_target = oracle::brute_extensions(&reference.restrict(&subset), &restricted_pairs)?;
                    check(brute_target == res.target.members(), "target space differs from brute force")?;
                    for (j, member) in space.members().iter().enumerate() {
                        let expected = brute_target
                            .iter()
                            .position(|o| *o == member.restrict(&subset))
                            .ok_or_else(|| Error::Postcondition("restriction missing".into()))?;
                        check(res.map.apply(j) == expected, "res does not restrict")?;
                        check(res.map.target_anchor().positions()[j] == expected, "anchor not carried along")?;
                    }
                }
            }
        }
    }
    Ok(format!("{maps} restriction maps rigid, anchors carried pointwise"))
}

/// Rigid surjection counts against the brute-force oracle and Stirling numbers.
pub fn stirling_suite() -> Result<String> {
    let expected = [((3, 2), 3u128), ((4, 2), 7), ((4, 3), 6), ((5, 3), 25)];
    for ((b, a), count) in expected {
        let trivial = |len| Anchors::at_minimum(1, len);
        let fast = enumerate_rs(b, a, &trivial(b)?, &trivial(a)?)?.len() as u128;
        let brute = oracle::brute_rigid_surjections(b, a, &[0], &[0]).len() as u128;
        check(fast == count && brute == count && oracle::stirling2(b, a) == count, format!("S({b},{a}) != {count}"))?;
    }
    for b in 1..=6 {
        for a in 1..=b {
            let fast = enumerate_rs(b, a, &Anchors::at_minimum(1, b)?, &Anchors::at_minimum(1, a)?)?;
            let maps: Vec<Vec<usize>> = fast.iter().map(|r| r.map().to_vec()).collect();
            check(maps == oracle::brute_rigid_surjections(b, a, &[0], &[0]), format!("enumeration differs at ({b},{a})"))?;
        }
    }
    Ok("S(3,2)=3 S(4,2)=7 S(4,3)=6 S(5,3)=25; enumerations match brute force for |B| <= 6".into())
}

/// `π^τ`, pullbacks and twisted products on all frames with `|Y| <= 3`,
/// `m <= 3`, `n <= 4`.
pub fn grid_embedding_suite(config: &RunConfig) -> Result<String> {
    let (mut taus, mut pullbacks, mut products) = (0usize, 0usize, 0usize);
    for p in 1..=2 {
        for size in 1..=3 {
            for y_raw in canonical_structures(size, p)? {
                let y = FramedStructure::new(&y_raw)?;
                for m in 1..=3 {
                    for frame in Anchors::all(p, m) {
                        let t_all = enumerate_rs(m, y.space.len(), &frame, &y.anchors)?;
                        if t_all.is_empty() {
                            continue;
                        }
                        // Every subset X of Y of each size, with A its space.
                        let sigma_families = (1..=size)
                            .map(|k| {
                                let sub: Vec<usize> = (0..k).collect();
                                let res = res_x(&y.space, &sub, &y.anchors)?;
                                let a_anchor = res.map.target_anchor().clone();
                                crate::engines::sigma_family(m, &res.target, &a_anchor, &y.space, &y.anchors)
                            })
                            .collect::<Result<Vec<_>>>()?;
                        for n in size..=4 {
                            let grid = grid_structure(n, m, &frame, config)?;
                            let brute_grid = oracle::brute_grid(n, m, frame.positions())?;
                            for sets in crate::combinat::product(&vec![oracle::brute_k_subsets(n, size); m]) {
                                for t in &t_all {
                                    let tau = Tuple::new(sets.clone(), t.clone())?;
                                    let emb = pi_tau(&tau, &y, &grid)?.to_embedding(n);
                                    check(emb.is_embedding(&y.structure, &brute_grid)?, "π^τ is not an embedding")?;
                                    taus += 1;
                                    let image = emb.image();
                                    for mask in 1u32..(1 << size) {
                                        let copy: Vec<usize> = (0..size).filter(|i| mask >> i & 1 == 1).map(|i| image[i]).collect();
                                        let back = pullback_copy(&tau, &y, &grid, &copy)?;
                                        let again = oracle::brute_twisted(&tau, y.space.members(), &back.sigma)?;
                                        check(again == back.product, "pullback product differs from brute force")?;
                                        check(oracle::brute_ll(&back.product, &tau), "pullback product not ≪ τ")?;
                                        pullbacks += 1;
                                    }
                                    for family in &sigma_families {
                                        for sigma in family {
                                            let prod = twisted_compose(&tau, y.space.members(), sigma)?;
                                            check(prod == oracle::brute_twisted(&tau, y.space.members(), sigma)?, "twisted product differs")?;
                                            check(oracle::brute_ll(&prod, &tau), "τ·σ is not ≪ τ")?;
                                            products += 1;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{taus} embeddings, {pullbacks} pullbacks, {products} twisted products checked"))
}

fn chain(n: usize) -> Result<Structure> {
    Structure::chain(n, 1)
}

/// The 2-chain / 3-chain instance against the classical Ramsey number.
pub fn classical_ramsey(config: &RunConfig, certs: &mut Vec<ColoringCertificate>) -> Result<String> {
    let config = config.clone().with_max_colorings(1 << 16);
    let (x, y) = (chain(2)?, chain(3)?);
    let five = verify_ramsey_witness(&chain(5)?, &x, &y, 2, &config)?;
    let six = verify_ramsey_witness(&chain(6)?, &x, &y, 2, &config)?;
    check(!five.holds(), "the 5-chain should not be a witness")?;
    check(six.holds(), "the 6-chain should be a witness")?;
    for (z, expect) in [(5, false), (6, true)] {
        let problem = ramsey_problem(&chain(z)?, &x, &y, &config)?;
        let baseline = crate::engines::coloring::search(&problem, 2, &config, Strategy::BASELINE)?;
        check(matches!(baseline.verdict, SearchVerdict::Holds) == expect, "baseline search disagrees")?;
    }
    let found = minimal_witness_search(&x, &y, 2, 6, CandidateSpace::All, &config)?;
    check(found.size == 6, format!("minimal witness has size {}", found.size))?;
    check(Structure::validate(&found.structure)? == chain(6)?, "minimal witness is not the 6-chain")?;
    let nodes = (five.nodes, six.nodes);
    certs.extend([five, six, found.certificate]);
    Ok(format!(
        "5-chain counterexample ({} nodes), 6-chain witness ({} nodes), minimal size 6 after {} candidates",
        nodes.0, nodes.1, found.candidates_checked
    ))
}

/// The full construction on the smallest nontrivial instance.
pub fn pigeonhole_pipeline(config: &RunConfig, certs: &mut Vec<ColoringCertificate>) -> Result<String> {
    let w = construct_witness(&chain(1)?, &chain(2)?, 2, ConstructOptions::default(), config)?;
    let Construction::Grid {
        params,
        size,
        certificate: Some(cert),
        twisted_certificate,
        ..
    } = &w.construction
    else {
        return Err(Error::Postcondition("no concrete grid".into()));
    };
    check(*size == 3 && cert.holds(), "expected a verified grid of size 3")?;
    check(oracle::brute_witness_holds(&cert.instance, 2, 20)?, "brute force rejects the grid")?;
    let grid = oracle::brute_grid(params.n, params.m, &params.anchors)?;
    check(grid == chain(3)?, "grid is not the 3-chain")?;
    certs.push(cert.clone());
    if let Some(t) = twisted_certificate {
        certs.push(t.clone());
    }
    Ok(format!("grid {}^{} of size {size} verified by search and brute force", params.n, params.m))
}

/// Twisted-product cones against `≪`-cones on tiny instances.
pub fn cone_consistency(config: &RunConfig, certs: &mut Vec<ColoringCertificate>) -> Result<String> {
    let config = config.clone().with_max_colorings(1 << 20);
    let (mut instances, mut skipped) = (0usize, 0usize);
    for size in 1..=3 {
        for y_raw in canonical_structures(size, 1)? {
            let y = FramedStructure::new(&y_raw)?;
            for k in 1..=size {
                for mask in 1u32..(1 << size) {
                    if mask.count_ones() as usize != k {
                        continue;
                    }
                    let subset: Vec<usize> = (0..size).filter(|i| mask >> i & 1 == 1).collect();
                    let x = FramedStructure::new(&y.structure.restrict(&subset)?)?;
                    for m in y.space.len().max(1)..=2 {
                        for n in size..=size + 2 {
                            let params = WitnessParams::new(m, n, vec![0])?;
                            let mut attempt = || -> Result<()> {
                                let twisted = prop5_problem(&params, &x.space, &x.anchors, &y.space, &y.anchors, &config)?;
                                let ll = prop2_problem(&params, x.space.len(), &x.anchors, y.space.len(), &y.anchors, k, size, &config)?;
                                check(twisted.cones().len() == ll.cones().len(), "target counts differ")?;
                                for (i, (c5, c2)) in twisted.cones().iter().zip(ll.cones()).enumerate() {
                                    check(twisted.cone_label(i) == ll.cone_label(i), "targets listed differently")?;
                                    let mut l5: Vec<String> = c5.iter().map(|&o| twisted.object_labels()[o].to_string()).collect();
                                    let mut l2: Vec<String> = c2.iter().map(|&o| ll.object_labels()[o].to_string()).collect();
                                    l5.sort();
                                    l2.sort();
                                    check(l5.iter().all(|l| l2.binary_search(l).is_ok()), "twisted cone not inside the ≪-cone")?;
                                    check(l5 == l2, "cones differ")?;
                                }
                                let v5 = crate::engines::verify_prop5_witness(&params, 2, &x.space, &x.anchors, &y.space, &y.anchors, &config)?;
                                let v2 = crate::engines::verify_prop2_witness(&params, 2, x.space.len(), &x.anchors, y.space.len(), &y.anchors, k, size, &config)?;
                                check(v5.holds() == v2.holds(), "verdicts differ")?;
                                certs.extend([v5, v2]);
                                Ok(())
                            };
                            match attempt() {
                                Ok(()) => instances += 1,
                                Err(e) if e.is_infeasible() => skipped += 1,
                                Err(e) => return Err(e),
                            }
                        }
                    }
                }
            }
        }
    }
    check(instances > 0, "no feasible instance")?;
    Ok(format!("{instances} instances agree, {skipped} beyond the ceilings"))
}

/// Interpretation, the composition identity and the transfer on the chain
/// instances.
pub fn interpretation_suite(config: &RunConfig, certs: &mut Vec<ColoringCertificate>) -> Result<String> {
    let frames = [
        (chain(1)?, chain(2)?, WitnessParams::new(1, 3, vec![0])?),
        (chain(2)?, chain(3)?, WitnessParams::new(1, 6, vec![0])?),
    ];
    let mut pairs = 0;
    for (x, y, params) in &frames {
        let frame = InterpretationFrame::new(x, y, params.clone(), config)?;
        let report = check_interpretation(&frame, AlphaVariant::Faithful, config)?;
        check(report.holds, "interpretation violated")?;
        pairs += report.f_size * report.s_size;
        check(check_identity(&frame, config)?.holds, "π^(τ·α(s)) differs from φ(τ)∘s")?;
        let broken = check_interpretation(&frame, AlphaVariant::FixedSets, config)?;
        check(!broken.holds && broken.violation.is_some(), "broken α went unnoticed")?;
    }
    let t = transfer(&chain(2)?, &chain(3)?, 1, &[0], 2, 7, config)?;
    check(t.consistent, "transfer inconsistent")?;
    let member = t.twisted.member.clone().ok_or_else(|| Error::Postcondition("no twisted member".into()))?;
    check(member.n == 6, format!("twisted member n = {}", member.n))?;
    let embedding = t.embedding.clone().ok_or_else(|| Error::Postcondition("embedding member unchecked".into()))?;
    check(embedding.holds(), "6-chain member fails through the interpretation")?;
    let direct_six = verify_ramsey_witness(&chain(6)?, &chain(2)?, &chain(3)?, 2, config)?;
    check(direct_six.holds() == embedding.holds(), "interpretation route disagrees with the direct check at n = 6")?;
    let below = InterpretationFrame::new(&chain(2)?, &chain(3)?, WitnessParams::new(1, 5, vec![0])?, config)?;
    for kind in [PairKind::Twisted, PairKind::Embedding] {
        let cert = check_member(&below, kind, 2, config)?.ok_or_else(|| Error::Postcondition("n = 5 unchecked".into()))?;
        check(!cert.holds(), "n = 5 should fail")?;
        certs.push(cert);
    }
    certs.push(embedding);
    if let Some(c) = t.twisted.certificate {
        certs.push(c);
    }
    Ok(format!("{pairs} (f, s) pairs, identity exhaustive, transfer gives n = 6 as the direct check"))
}

/// Every counterexample from criteria 5 to 8, re-checked independently.
pub fn soundness(certs: &[ColoringCertificate]) -> Result<String> {
    let bad: Vec<&ColoringCertificate> = certs.iter().filter(|c| !c.holds()).collect();
    check(!bad.is_empty(), "no counterexamples to re-check")?;
    for cert in &bad {
        oracle::recheck_certificate(cert)?;
    }
    Ok(format!("{} of {} counterexample colorings re-validated", bad.len(), bad.len()))
}

/// Runs every criterion in order.
pub fn run_all(config: &RunConfig) -> Vec<CriterionReport> {
    let secs = Duration::from_secs;
    let mut certs = Vec::new();
    let mut out = vec![
        timed(1, "below-order", secs(5), below_order_suite),
        timed(2, "restriction-rigidity", secs(60), restriction_suite),
        timed(3, "stirling-counts", secs(5), stirling_suite),
        timed(4, "grid-embeddings", secs(120), || grid_embedding_suite(config)),
    ];
    out.push(timed(5, "classical-ramsey", secs(60), || classical_ramsey(config, &mut certs)));
    out.push(timed(6, "pigeonhole-pipeline", secs(5), || pigeonhole_pipeline(config, &mut certs)));
    out.push(timed(7, "cone-consistency", secs(120), || cone_consistency(config, &mut certs)));
    out.push(timed(8, "interpretation", secs(120), || interpretation_suite(config, &mut certs)));
    out.push(timed(9, "soundness", secs(120), || soundness(&certs)));
    out
}
