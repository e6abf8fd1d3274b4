use proptest::prelude::*;
use serde_json::json;

use poset_ramsey::combinat::{k_subsets, product};
use poset_ramsey::engines::coloring::{search, ColoringProblem, SearchVerdict, Strategy as SearchStrategy};
use poset_ramsey::grid::{grid_structure, verify_ramsey_witness, FramedStructure};
use poset_ramsey::linext::{below, res_x};
use poset_ramsey::oracle;
use poset_ramsey::rigsurj::{divide, enumerate_rs, is_rigid_surjection, ll, twisted_compose};
use poset_ramsey::{AnchoredRigidSurjection, Anchors, LinearOrder, OrderedExtensionSpace, PartialOrder, RunConfig, Structure, Tuple};

/// A structure on `size` points built from raw random material: a naturally
/// labelled poset from `mask`, extra orders picked from its extensions, then
/// every label moved by the permutation sorting `keys`.
fn build_structure(size: usize, p: usize, mask: u64, picks: &[usize], keys: &[u32]) -> Structure {
    let mut pairs = Vec::new();
    let mut bit = 0;
    for a in 0..size {
        for b in a + 1..size {
            if mask >> bit & 1 == 1 {
                pairs.push((a, b));
            }
            bit += 1;
        }
    }
    let poset = PartialOrder::from_pairs(size, &pairs).unwrap().transitive_closure();
    let natural = LinearOrder::natural(size);
    let space = OrderedExtensionSpace::new(&natural, Some(&poset)).unwrap();
    let mut orders = vec![natural];
    for pick in &picks[..p - 1] {
        orders.push(space.member(pick % space.len()).clone());
    }
    let mut perm: Vec<usize> = (0..size).collect();
    perm.sort_by_key(|&i| (keys[i], i));
    let moved_pairs: Vec<[usize; 2]> = poset.pairs().iter().map(|&(a, b)| [perm[a], perm[b]]).collect();
    let moved_orders = orders
        .iter()
        .map(|o| o.enumeration().iter().map(|&x| perm[x]).collect())
        .collect();
    Structure::validate(&poset_ramsey::RawStructure {
        p,
        size,
        partial_order: moved_pairs,
        linear_orders: moved_orders,
        hasse: false,
    })
    .unwrap()
}

fn structure_strategy(max_size: usize) -> impl Strategy<Value = Structure> {
    (1..=max_size, 1..=2usize).prop_flat_map(|(size, p)| {
        (
            Just(size),
            Just(p),
            any::<u64>(),
            prop::collection::vec(any::<usize>(), p),
            prop::collection::vec(any::<u32>(), size),
        )
            .prop_map(|(size, p, mask, picks, keys)| build_structure(size, p, mask, &picks, &keys))
    })
}

/// Cases run from the configured seed, so failures replay exactly.
fn seeded(cases: u32) -> ProptestConfig {
    let seed = RunConfig::from_env().expect("valid POSET_RAMSEY_* settings").seed;
    ProptestConfig {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(seed),
        ..ProptestConfig::default()
    }
}

fn trivial(len: usize) -> Anchors {
    Anchors::at_minimum(1, len).unwrap()
}

fn problem_strategy() -> impl Strategy<Value = (ColoringProblem, usize)> {
    (1..=9usize, 1..=3usize).prop_flat_map(|(objects, colors)| {
        (
            Just(objects),
            Just(colors),
            prop::collection::vec(1u32..(1 << objects), 0..8),
        )
            .prop_map(|(objects, colors, masks)| {
                let cones: Vec<Vec<usize>> = masks
                    .iter()
                    .map(|m| (0..objects).filter(|i| m >> i & 1 == 1).collect())
                    .collect();
                let labels = (0..objects).map(|i| json!(i)).collect();
                let cone_labels = (0..cones.len()).map(|i| json!(i)).collect();
                (ColoringProblem::new(labels, cones, cone_labels).unwrap(), colors)
            })
    })
}

proptest! {
    #![proptest_config(seeded(64))]

    #[test]
    fn json_round_trip_and_restriction(z in structure_strategy(6), mask in any::<u8>()) {
        let again = Structure::from_json(&z.to_json()).unwrap();
        prop_assert_eq!(&again, &z);
        let subset: Vec<usize> = (0..z.size()).filter(|i| mask >> i & 1 == 1).collect();
        let sub = z.restrict(&subset).unwrap();
        prop_assert_eq!(sub.size(), subset.len());
        prop_assert!(Structure::validate(&sub.to_raw()).is_ok());
        // The inclusion, read through the L_0 relabeling, is an embedding.
        let by_l0 = z.order(0).restrict(&subset).enumeration().to_vec();
        prop_assert!(poset_ramsey::Embedding::new(by_l0).is_embedding(&sub, &z).unwrap());
    }

    #[test]
    fn copies_match_brute_force(x in structure_strategy(3), z in structure_strategy(5)) {
        prop_assume!(x.p() == z.p());
        let copies: Vec<Vec<usize>> = poset_ramsey::structures::enumerate_copies(&x, &z)
            .unwrap()
            .into_iter()
            .map(|c| c.elements)
            .collect();
        prop_assert_eq!(copies.clone(), oracle::brute_copies(&x, &z));
        // Rigidity: copies and embeddings are in bijection.
        prop_assert_eq!(copies.len(), oracle::brute_embeddings(&x, &z).len());
    }

    #[test]
    fn extension_spaces_sorted(z in structure_strategy(5)) {
        let framed = FramedStructure::new(&z).unwrap();
        let members = framed.space.members();
        prop_assert_eq!(&members[0], framed.structure.order(0));
        for w in members.windows(2) {
            prop_assert!(below(&w[0], &w[1], framed.structure.order(0)).unwrap());
        }
        for m in members {
            prop_assert!(m.extends(framed.structure.partial_order()));
        }
        // P is the intersection of its extensions.
        let n = framed.structure.size();
        for a in 0..n {
            for b in 0..n {
                let all = a != b && members.iter().all(|m| m.precedes(a, b));
                prop_assert_eq!(all, framed.structure.partial_order().contains(a, b));
            }
        }
    }

    #[test]
    fn restriction_is_rigid(z in structure_strategy(5), mask in any::<u8>()) {
        let framed = FramedStructure::new(&z).unwrap();
        let subset: Vec<usize> = (0..framed.structure.size()).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!subset.is_empty());
        let res = res_x(&framed.space, &subset, &framed.anchors).unwrap();
        prop_assert!(is_rigid_surjection(res.map.map(), res.target.len()));
        for (i, &pos) in res.map.target_anchor().positions().iter().enumerate() {
            prop_assert_eq!(res.target.member(pos), &framed.structure.order(i).restrict(&subset));
        }
    }

    #[test]
    fn rigid_surjections_and_division(b in 1..=6usize, a_pick in any::<usize>(), i in any::<usize>(), j in any::<usize>()) {
        let a = 1 + a_pick % b;
        let all = enumerate_rs(b, a, &trivial(b), &trivial(a)).unwrap();
        prop_assert_eq!(all.len() as u128, oracle::stirling2(b, a));
        let t = &all[i % all.len()];
        prop_assert!(oracle::is_rigid_by_segments(t.map(), a));
        let outer = enumerate_rs(a, 1 + (j % a), &trivial(a), &trivial(1 + (j % a))).unwrap();
        let r = &outer[j % outer.len()];
        let s = r.compose(t).unwrap();
        prop_assert!(is_rigid_surjection(s.map(), s.target_len()));
        prop_assert_eq!(divide(&s, t).unwrap(), r.clone());
        let id = AnchoredRigidSurjection::identity(&trivial(a));
        prop_assert_eq!(id.compose(t).unwrap(), t.clone());
    }

    #[test]
    fn composition_is_associative(c in 1..=6usize, picks in prop::collection::vec(any::<usize>(), 5)) {
        let b = 1 + picks[0] % c;
        let a = 1 + picks[1] % b;
        let t = enumerate_rs(c, b, &trivial(c), &trivial(b)).unwrap();
        let s = enumerate_rs(b, a, &trivial(b), &trivial(a)).unwrap();
        let r = enumerate_rs(a, 1, &trivial(a), &trivial(1)).unwrap();
        let (t, s, r) = (&t[picks[2] % t.len()], &s[picks[3] % s.len()], &r[0]);
        prop_assert_eq!(r.compose(&s.compose(t).unwrap()).unwrap(), r.compose(s).unwrap().compose(t).unwrap());
    }

    #[test]
    fn ll_is_a_preorder(n in 2..=4usize, picks in prop::collection::vec(any::<usize>(), 6)) {
        // m = 2 sets, rs onto 2 or 1 elements.
        let tuples: Vec<Tuple> = [(2usize, n), (1, n.min(3)), (1, 1)]
            .iter()
            .flat_map(|&(target, width)| {
                let rs = enumerate_rs(2, target, &trivial(2), &trivial(target)).unwrap();
                let sets = product(&vec![k_subsets(n, width); 2]);
                sets.into_iter().flat_map(move |s| rs.clone().into_iter().map(move |r| Tuple::new(s.clone(), r).unwrap()))
            })
            .collect();
        let pick = |i: usize| &tuples[picks[i] % tuples.len()];
        let (a, b, c) = (pick(0), pick(1), pick(2));
        prop_assert!(ll(a, a).unwrap());
        if ll(a, b).unwrap() && ll(b, c).unwrap() {
            prop_assert!(ll(a, c).unwrap());
        }
        prop_assert_eq!(ll(a, b).unwrap(), oracle::brute_ll(a, b));
    }

    #[test]
    fn search_strategies_agree((problem, colors) in problem_strategy()) {
        let config = RunConfig::default();
        let fast = search(&problem, colors, &config, SearchStrategy::default()).unwrap();
        let baseline = search(&problem, colors, &config, SearchStrategy::BASELINE).unwrap();
        prop_assert_eq!(&fast.verdict, &baseline.verdict);
        for strategy in [SearchStrategy { pruning: true, symmetry: false }, SearchStrategy { pruning: false, symmetry: true }] {
            prop_assert_eq!(&search(&problem, colors, &config, strategy).unwrap().verdict, &fast.verdict);
        }
        let parallel = search(&problem, colors, &config.clone().with_jobs(4), SearchStrategy::default()).unwrap();
        prop_assert_eq!(&parallel, &fast);
        if let SearchVerdict::Bad(coloring) = &fast.verdict {
            prop_assert!(problem.find_homogeneous(coloring).is_none());
            prop_assert!(coloring.iter().all(|&c| c < colors));
        }
    }
}

#[test]
fn lex_orders_extend_product_order() {
    let config = RunConfig::default();
    for m in 1..=3 {
        for n in 1..=4usize {
            if n.pow(m as u32) > 64 {
                continue;
            }
            for p in 1..=3 {
                for frame in Anchors::all(p, m) {
                    let g = grid_structure(n, m, &frame, &config).unwrap();
                    assert!(Structure::validate(&g.structure().to_raw()).is_ok());
                    let brute = oracle::brute_grid(n, m, frame.positions()).unwrap();
                    assert_eq!(g.structure(), &brute);
                    for i in 0..p {
                        assert!(g.structure().order(i).extends(g.structure().partial_order()));
                    }
                }
            }
        }
    }
}

#[test]
fn witnesses_are_monotone_in_the_host() {
    let config = RunConfig::default();
    let x = Structure::chain(2, 1).unwrap();
    let y = Structure::chain(3, 1).unwrap();
    let six = Structure::chain(6, 1).unwrap();
    assert!(verify_ramsey_witness(&six, &x, &y, 2, &config).unwrap().holds());
    // The 7-chain, and the 6-chain with an isolated point added on top in L_0.
    let seven = Structure::chain(7, 1).unwrap();
    let pairs: Vec<(usize, usize)> = six.partial_order().pairs();
    let extended = Structure::new(PartialOrder::from_pairs(7, &pairs).unwrap(), vec![LinearOrder::natural(7)]).unwrap();
    for host in [seven, extended] {
        assert!(!poset_ramsey::structures::enumerate_embeddings(&six, &host).unwrap().is_empty());
        assert!(verify_ramsey_witness(&host, &x, &y, 2, &config).unwrap().holds());
    }
}

#[test]
fn twisted_product_associates_on_chain_frames() {
    // With one coordinate and chains everywhere, every factor has m = 1 and
    // every rigid surjection is the identity on a single point.
    let id = AnchoredRigidSurjection::identity(&trivial(1));
    let orders = |n: usize| vec![LinearOrder::natural(n)];
    for n in 3..=6 {
        for t in k_subsets(n, 3) {
            let tau = Tuple::new(vec![t], id.clone()).unwrap();
            for s in k_subsets(3, 2) {
                let sigma = Tuple::new(vec![s], id.clone()).unwrap();
                for r in k_subsets(2, 1) {
                    let rho = Tuple::new(vec![r], id.clone()).unwrap();
                    let left = twisted_compose(&twisted_compose(&tau, &orders(3), &sigma).unwrap(), &orders(2), &rho).unwrap();
                    let right = twisted_compose(&tau, &orders(3), &twisted_compose(&sigma, &orders(2), &rho).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }
}
