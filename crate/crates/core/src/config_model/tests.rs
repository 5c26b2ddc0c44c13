use std::collections::BTreeMap;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::rooted_graphs::{canonicalize, CanonicalClass, Graph, LabeledRootedGraph};
use crate::ugw::ColoredOffspringLaw;
use crate::weight::rational;

fn double_edge() -> ColoredMultigraph {
    let mut g = ColoredMultigraph::new(1, 2);
    g.add_edges(0, 0, 1, 2);
    g
}

fn two_loops() -> ColoredMultigraph {
    let mut g = ColoredMultigraph::new(1, 2);
    g.add_edge(0, 0, 0);
    g.add_edge(0, 1, 1);
    g
}

#[test]
fn color_set() {
    let cs = ColorSet::new(3);
    assert_eq!(cs.count(), 9);
    for c in 0..9 {
        assert_eq!(cs.conj(cs.conj(c)), c);
    }
    assert_eq!(cs.less_eq().collect::<Vec<_>>(), vec![0, 1, 2, 4, 5, 8]);
}

#[test]
fn degree_sequence_membership() {
    assert!(validate_degree_sequence(&DegreeSequence::scalar(&[1, 1])));
    assert!(!validate_degree_sequence(&DegreeSequence::scalar(&[1])));
    let asym = DegreeSequence::new(2, vec![vec![(1, 1)], vec![(1, 1)]]).unwrap();
    assert!(!validate_degree_sequence(&asym));
    let sym = DegreeSequence::new(2, vec![vec![(1, 1)], vec![(2, 1)]]).unwrap();
    assert!(validate_degree_sequence(&sym));
}

#[test]
fn erdos_gallai() {
    assert!(!graphical_check(&[3, 3, 1, 1]));
    assert!(graphical_check(&[3, 3, 2, 2]));
    assert!(graphical_check(&[2, 2, 2]));
    assert!(!graphical_check(&[4, 1, 1, 1]));
    assert!(graphical_check(&[]));
}

/// Multigraph from the worked 5-vertex, 3-type example with its colorblind
/// degrees and degree matrices.
#[test]
fn hand_example_degrees() {
    let cs = ColorSet::new(3);
    let c = |i: usize, j: usize| cs.color(i - 1, j - 1);
    let mut g = ColoredMultigraph::new(3, 5);
    g.add_edge(c(1, 2), 0, 3);
    g.add_edge(c(1, 2), 4, 0);
    g.add_edge(c(2, 3), 1, 2);
    g.add_edge(c(2, 3), 1, 0);
    g.add_edge(c(3, 3), 3, 4);
    g.add_edge(c(2, 2), 0, 0);
    g.add_edge(c(1, 1), 4, 4);
    g.add_edge(c(1, 1), 4, 4);
    g.add_edge(c(1, 2), 1, 1);
    assert_eq!(g.omega(c(2, 1), 3, 0), 1);
    assert_eq!(g.omega(c(1, 1), 4, 4), 4);
    assert_eq!(g.omega(c(2, 1), 1, 1), 1);
    let d = degree_sequence_of(&g);
    assert_eq!(d.row(0), &[(c(1, 2), 1), (c(2, 1), 1), (c(2, 2), 2), (c(3, 2), 1)]);
    assert_eq!(d.row(1), &[(c(1, 2), 1), (c(2, 1), 1), (c(2, 3), 2)]);
    let blind = colorblind(&g);
    let degrees: Vec<usize> = (0..5).map(|u| blind.degree(u)).collect();
    assert_eq!(degrees, vec![5, 4, 1, 2, 6]);
    assert_eq!(blind.loop_count(4), 2);
    assert_eq!(blind.loop_count(1), 1);
    assert!(validate_degree_sequence(&d));
    assert_eq!(degree_sequence_of(&ColoredMultigraph::new(2, 3)).rows(), &[vec![], vec![], vec![]]);
}

#[test]
fn cm_probabilities_on_two_vertices() {
    let single = DegreeSequence::scalar(&[1, 1]);
    let mut edge = ColoredMultigraph::new(1, 2);
    edge.add_edge(0, 0, 1);
    assert_eq!(cm_probability(&single, &edge).unwrap(), rational(1, 1));
    assert_eq!(fiber_size(&single, &edge).unwrap(), BigUint::from(1u32));

    let d = DegreeSequence::scalar(&[2, 2]);
    assert_eq!(cm_probability(&d, &double_edge()).unwrap(), rational(2, 3));
    assert_eq!(cm_probability(&d, &two_loops()).unwrap(), rational(1, 3));
    assert_eq!(fiber_size(&d, &double_edge()).unwrap(), BigUint::from(2u32));
    assert_eq!(config_space_size(&d), BigUint::from(3u32));
    assert!(cm_probability(&single, &double_edge()).is_err());
    assert_eq!(b_factor(&edge), BigUint::from(1u32));
}

#[test]
fn bipartite_color_fiber() {
    let cs = ColorSet::new(2);
    let c = cs.color(0, 1);
    let d = DegreeSequence::new(2, vec![vec![(c, 2)], vec![(cs.conj(c), 2)]]).unwrap();
    let mut h = ColoredMultigraph::new(2, 2);
    h.add_edges(c, 0, 1, 2);
    assert_eq!(fiber_size(&d, &h).unwrap(), BigUint::from(2u32));
    assert_eq!(config_space_size(&d), BigUint::from(2u32));
    assert_eq!(cm_probability(&d, &h).unwrap(), rational(1, 1));
    let d3 = DegreeSequence::new(2, vec![vec![(c, 3)], vec![(cs.conj(c), 3)]]).unwrap();
    assert_eq!(config_space_size(&d3), BigUint::from(6u32));
    assert_eq!(config_space_size(&DegreeSequence::scalar(&[2, 2, 2])), BigUint::from(15u32));
}

#[test]
fn cycle_detection() {
    let mut lp = Graph::new(1);
    lp.add_edge(0, 0);
    assert!(has_cycle_leq(&lp, 1));
    let tree = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
    assert!(!has_cycle_leq(&tree, 10));
    let tri = Graph::cycle(3);
    assert!(!has_cycle_leq(&tri, 2));
    assert!(has_cycle_leq(&tri, 3));
    let multi = Graph::from_edges(2, &[(0, 1), (0, 1)]);
    assert!(!has_cycle_leq(&multi, 1));
    assert!(has_cycle_leq(&multi, 2));
    for len in 3..9 {
        let c = Graph::cycle(len);
        assert!(!has_cycle_leq(&c, len - 1));
        assert!(has_cycle_leq(&c, len));
    }
}

#[test]
fn cycle_counts() {
    let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    assert_eq!(count_cycles(&k4, 4), vec![0, 0, 0, 4, 3]);
    let g = Graph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (2, 0), (2, 2)]);
    assert_eq!(count_cycles(&g, 3), vec![0, 1, 1, 2]);
    let triple = Graph::from_edges(2, &[(0, 1), (0, 1), (0, 1)]);
    assert_eq!(count_cycles(&triple, 2), vec![0, 0, 3]);
}

#[test]
fn sampling_preserves_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cs = ColorSet::new(2);
    let d = DegreeSequence::new(
        2,
        vec![
            vec![(0, 2), (1, 1)],
            vec![(2, 1), (3, 1)],
            vec![(0, 1), (3, 1)],
            vec![(0, 1), (1, 1), (2, 1)],
        ],
    )
    .unwrap();
    assert!(d.validate().is_ok(), "{:?}", d.totals());
    for _ in 0..100 {
        let sigma = sample_configuration(&d, &mut rng).unwrap();
        let g = graph_of(&sigma);
        assert_eq!(degree_sequence_of(&g), d);
        let maps = cs
            .less_eq()
            .map(|c| (c, sigma.sigma(c).to_vec()))
            .filter(|(_, v)| !v.is_empty())
            .collect();
        assert!(Configuration::new(d.clone(), maps).is_ok());
    }
}

#[test]
fn matchings_are_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = DegreeSequence::scalar(&[2, 2]);
    let n = 30_000;
    let doubles = (0..n)
        .filter(|_| sample_configuration(&d, &mut rng).unwrap().graph() == double_edge())
        .count() as f64;
    let p = doubles / n as f64;
    let sd = (2.0 / 9.0 / n as f64).sqrt();
    assert!((p - 2.0 / 3.0).abs() < 4.0 * sd, "{p}");

    let cs = ColorSet::new(2);
    let c = cs.color(0, 1);
    let d = DegreeSequence::new(2, vec![vec![(c, 3)], vec![(cs.conj(c), 3)]]).unwrap();
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for _ in 0..n {
        *counts.entry(sample_configuration(&d, &mut rng).unwrap().sigma(c).to_vec()).or_default() += 1;
    }
    assert_eq!(counts.len(), 6);
    let chi2: f64 = counts
        .values()
        .map(|&k| (k as f64 - n as f64 / 6.0).powi(2) / (n as f64 / 6.0))
        .sum();
    // 5 degrees of freedom; 20.5 is the 0.999 quantile
    assert!(chi2 < 20.5, "{chi2}");
}

#[test]
fn motif_invariants() {
    let mut path = ColoredMultigraph::new(1, 3);
    path.add_edge(0, 0, 1);
    path.add_edge(0, 1, 2);
    assert_eq!(excess(&path), -1);
    assert_eq!(automorphism_count(&path).unwrap(), 2);
    let mut cyc = ColoredMultigraph::new(1, 4);
    for i in 0..4 {
        cyc.add_edge(0, i, (i + 1) % 4);
    }
    assert_eq!(excess(&cyc), 0);
    assert_eq!(automorphism_count(&cyc).unwrap(), 8);
    assert_eq!(automorphism_count(&double_edge()).unwrap(), 2);
    let big = ColoredMultigraph::new(1, 9);
    assert!(automorphism_count(&big).is_err());
}

#[test]
fn regular_cycle_intensities() {
    for d in [3u32, 4] {
        let law = ColoredOffspringLaw::new(1, vec![(vec![d], 1.0)]).unwrap();
        let mut lp = ColoredMultigraph::new(1, 1);
        lp.add_edge(0, 0, 0);
        let got = subgraph_count_limit(&law, &lp, 1000.0).unwrap();
        assert!((got - (d as f64 - 1.0) / 2.0).abs() < 1e-12);
        for ell in 2..6usize {
            let mut cyc = ColoredMultigraph::new(1, ell);
            for i in 0..ell {
                cyc.add_edge(0, i, (i + 1) % ell);
            }
            let want = (d as f64 - 1.0).powi(ell as i32) / (2.0 * ell as f64);
            let got = subgraph_count_limit(&law, &cyc, 1000.0).unwrap();
            assert!((got - want).abs() < 1e-9 * want, "ℓ = {ell}");
        }
        let lam2 = lambda_h_estimate(&law, 2);
        let nu = d as f64 - 1.0;
        assert!((lam2 - (nu / 2.0 + nu * nu / 4.0)).abs() < 1e-12);
    }
    let law = ColoredOffspringLaw::new(1, vec![(vec![3], 1.0)]).unwrap();
    assert!((lambda_h_estimate(&law, 2) - 2.0).abs() < 1e-12);
}

/// Sums `λ_H` over every colored motif whose colorblind graph is an
/// `ℓ`-cycle by enumerating labelled motifs on `0..ℓ` and weighting each by
/// `a(H) / ℓ!`, then compares with the trace formula.
#[test]
fn lambda_matches_motif_enumeration() {
    let law = ColoredOffspringLaw::new(
        2,
        vec![(vec![1, 1, 1, 0], 0.5), (vec![2, 1, 1, 3], 0.5)],
    )
    .unwrap();
    let cs = ColorSet::new(2);
    let weight = |h: &ColoredMultigraph, fact: f64| {
        subgraph_count_limit(&law, h, 1.0).unwrap() * automorphism_count(h).unwrap() as f64 / fact
    };
    let mut by_len = [0.0; 4];
    for c in cs.less_eq() {
        let mut h = ColoredMultigraph::new(2, 1);
        h.add_edge(c, 0, 0);
        by_len[1] += weight(&h, 1.0);
    }
    for c1 in 0..4 {
        for c2 in c1..4 {
            let mut h = ColoredMultigraph::new(2, 2);
            h.add_edge(c1, 0, 1);
            h.add_edge(c2, 0, 1);
            by_len[2] += weight(&h, 2.0);
        }
    }
    for c1 in 0..4 {
        for c2 in 0..4 {
            for c3 in 0..4 {
                let mut h = ColoredMultigraph::new(2, 3);
                h.add_edge(c1, 0, 1);
                h.add_edge(c2, 1, 2);
                h.add_edge(c3, 0, 2);
                by_len[3] += weight(&h, 6.0);
            }
        }
    }
    let mut prev = 0.0;
    for ell in 1..=3 {
        let lam = lambda_h_estimate(&law, ell);
        assert!((lam - prev - by_len[ell]).abs() < 1e-9, "ℓ = {ell}: {} vs {}", lam - prev, by_len[ell]);
        prev = lam;
    }
}

#[test]
fn rejection_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = sample_g_dh(&DegreeSequence::scalar(&[1, 1]), 2, &mut rng, 1).unwrap();
    assert_eq!(g.colorblind().edge_count(), 1);
    // two vertices of degree 2 cannot avoid a loop or a double edge
    let err = sample_g_dh(&DegreeSequence::scalar(&[2, 2]), 2, &mut rng, 50).unwrap_err();
    assert!(matches!(err, crate::Error::RejectionExhausted { attempts: 50, .. }));
    let d = DegreeSequence::scalar(&[3; 20]);
    let mut s = GdhSampler::new(d, 3).unwrap();
    for _ in 0..20 {
        let g = s.sample(&mut rng).unwrap();
        assert!(!has_cycle_leq(&g.colorblind(), 3));
    }
    assert!(s.acceptance_rate() > 0.0);
}

#[test]
fn exploration_basics() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let d = DegreeSequence::scalar(&[0, 2, 2]);
    let ball = explore_neighborhood(&d, 0, 3, &mut rng).unwrap();
    assert_eq!(ball.graph.n(), 1);
    assert!(ball.is_tree);
    let d = DegreeSequence::scalar(&[3, 1, 2, 2, 1, 1, 2]);
    for _ in 0..50 {
        let ball = explore_neighborhood(&d, 0, 1, &mut rng).unwrap();
        let blind = ball.graph.colorblind();
        assert_eq!(blind.degree(0), 3);
    }
}

fn depth_two_class(g: &Graph, v: usize) -> CanonicalClass {
    canonicalize(&LabeledRootedGraph::new(g.clone(), v), 2)
}

#[test]
fn exploration_matches_full_sampler() {
    let d = DegreeSequence::scalar(&[2, 1, 3, 1, 2, 1, 2]);
    let n = 100_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut explored: BTreeMap<CanonicalClass, u64> = BTreeMap::new();
    let mut full: BTreeMap<CanonicalClass, u64> = BTreeMap::new();
    for _ in 0..n {
        let ball = explore_neighborhood(&d, 0, 2, &mut rng).unwrap();
        *explored.entry(depth_two_class(&ball.graph.colorblind(), 0)).or_default() += 1;
        let g = sample_configuration(&d, &mut rng).unwrap().graph().colorblind();
        *full.entry(depth_two_class(&g, 0)).or_default() += 1;
    }
    let tv: f64 = explored
        .keys()
        .chain(full.keys())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .map(|c| {
            let a = *explored.get(c).unwrap_or(&0) as f64;
            let b = *full.get(c).unwrap_or(&0) as f64;
            (a - b).abs() / n as f64
        })
        .sum::<f64>()
        / 2.0;
    assert!(tv <= 0.01, "tv {tv}");
}

#[test]
fn exact_expectation_small_cases() {
    // a loop at one of two degree-2 vertices: E X = 2 · (1/3)
    let d = DegreeSequence::scalar(&[2, 2]);
    let mut lp = ColoredMultigraph::new(1, 1);
    lp.add_edge(0, 0, 0);
    assert_eq!(subgraph_count_expectation(&d, &lp).unwrap(), rational(2, 3));
    // the double edge appears with probability 2/3
    assert_eq!(subgraph_count_expectation(&d, &double_edge()).unwrap(), rational(2, 3));
    // a triangle needs three vertices
    let mut tri = ColoredMultigraph::new(1, 3);
    for i in 0..3 {
        tri.add_edge(0, i, (i + 1) % 3);
    }
    assert_eq!(subgraph_count_expectation(&d, &tri).unwrap(), rational(0, 1));
}

fn scalar_sequence() -> impl Strategy<Value = DegreeSequence> {
    prop::collection::vec(0u32..4, 1..7).prop_filter_map("odd", |mut v| {
        if v.iter().sum::<u32>() % 2 == 1 {
            v[0] += 1;
        }
        Some(DegreeSequence::scalar(&v))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn probability_equals_fiber_over_space(d in scalar_sequence(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sample_configuration(&d, &mut rng).unwrap().graph();
        prop_assert_eq!(degree_sequence_of(&g), d.clone());
        let p = cm_probability(&d, &g).unwrap();
        let ratio = num_rational::BigRational::new(
            fiber_size(&d, &g).unwrap().into(),
            config_space_size(&d).into(),
        );
        prop_assert_eq!(p, ratio);
    }

    #[test]
    fn cycle_test_agrees_with_counts(d in scalar_sequence(), seed in any::<u64>(), h in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sample_configuration(&d, &mut rng).unwrap().graph().colorblind();
        let counts = count_cycles(&g, h);
        prop_assert_eq!(has_cycle_leq(&g, h), counts.iter().any(|&k| k > 0));
    }
}
