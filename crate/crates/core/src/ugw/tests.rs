use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::neighborhood::{empirical_distribution, is_admissible, NeighborhoodLaw};
use crate::rooted_graphs::{canonicalize, CanonicalClass, Graph};
use crate::weight::rational;

fn uniform_12() -> NeighborhoodLaw {
    NeighborhoodLaw::from_fractions(1, &[("(())", 1, 2), ("(()())", 1, 2)]).unwrap()
}

fn tree_laws() -> Vec<NeighborhoodLaw> {
    let mut spider = Graph::new(1);
    for _ in 0..3 {
        let a = spider.add_vertex();
        spider.add_edge(0, a);
        let b = spider.add_vertex();
        spider.add_edge(a, b);
    }
    vec![
        empirical_distribution(&Graph::path(5), 2).unwrap(),
        empirical_distribution(&spider, 2).unwrap(),
        marginal_ugw(&uniform_12(), 2).unwrap(),
    ]
}

#[test]
fn hat_at_depth_one_is_size_biasing() {
    let p = uniform_12();
    let leaf = CanonicalClass::isolated();
    let hat = hat_p_tt(&p, leaf, leaf).unwrap();
    let q = DegreeLaw::from_fractions(&[(1, 1, 2), (2, 1, 2)]).unwrap().size_biased().unwrap();
    assert_eq!(hat, q.to_law());
}

#[test]
fn regular_star_marginal() {
    let p: NeighborhoodLaw = NeighborhoodLaw::point_mass(1, CanonicalClass::star(3)).unwrap();
    let q: NeighborhoodLaw = marginal_ugw(&p, 2).unwrap();
    let tree = CanonicalClass::from_encoding("((()())(()())(()()))").unwrap();
    assert_eq!(q, NeighborhoodLaw::point_mass(2, tree).unwrap());
    assert_eq!(marginal_ugw(&p, 1).unwrap(), p);
}

/// Root degree 1 or 2 with probability 1/2; children have 0 or 1 further
/// children with probabilities 1/3 and 2/3.
#[test]
fn uniform_one_two_depth_two() {
    let q = marginal_ugw(&uniform_12(), 2).unwrap();
    let want = NeighborhoodLaw::from_fractions(
        2,
        &[
            ("(())", 1, 6),
            ("((()))", 1, 3),
            ("(()())", 1, 18),
            ("(()(()))", 2, 9),
            ("((())(()))", 2, 9),
        ],
    )
    .unwrap();
    assert_eq!(q, want);
    assert!(is_admissible(&q));
}

#[test]
fn consistency_and_edge_identity() {
    for p in tree_laws().into_iter().chain([uniform_12()]) {
        let h = p.depth();
        for k in h..h + 2 {
            assert!(consistency_check(&p, k).unwrap(), "{p:?} at {k}");
        }
        assert!(edge_law_identity(&p).unwrap());
    }
}

#[test]
fn non_admissible_input_is_rejected() {
    let p = NeighborhoodLaw::from_fractions(2, &[("((()))", 1, 1)]).unwrap();
    assert!(marginal_ugw(&p, 3).is_err());
    assert!(consistency_check(&p, 2).is_err());
    assert!(edge_law_identity(&p).is_err());
}

#[test]
fn support_cap() {
    let p = NeighborhoodLaw::from_fractions(1, &[("(())", 1, 2), ("(()()())", 1, 2)]).unwrap();
    assert!(matches!(
        marginal_ugw_capped(&p, 3, 4),
        Err(crate::Error::SupportExplosion { .. })
    ));
}

#[test]
fn deterministic_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let iso: NeighborhoodLaw = NeighborhoodLaw::point_mass(1, CanonicalClass::isolated()).unwrap();
    let t = sample_ugw_h(&iso, 4, &mut rng).unwrap();
    assert_eq!(t.vertex_count(), 1);
    let p: NeighborhoodLaw = NeighborhoodLaw::point_mass(1, CanonicalClass::star(3)).unwrap();
    let s = UgwSampler::new(&p).unwrap();
    for k in 1..5 {
        let t = s.sample(k, &mut rng).unwrap();
        assert_eq!(t.vertex_count(), 1 + 3 * ((1 << k) - 1));
    }
}

fn assert_sampler_matches(p: &NeighborhoodLaw, k: usize, n: usize, seed: u64) {
    let target = marginal_ugw(p, k).unwrap();
    let sampler = UgwSampler::new(p).unwrap();
    let emp = empirical_ugw_law(&sampler, k, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    let tv = emp.tv_distance(&target).unwrap();
    let bound = 3.0 * (target.len() as f64 / n as f64).sqrt();
    assert!(tv <= bound, "tv {tv} > {bound}");
}

#[test]
fn sampler_agrees_with_marginal() {
    assert_sampler_matches(&uniform_12(), 2, 100_000, 5);
    assert_sampler_matches(&uniform_12(), 3, 20_000, 6);
    for (i, p) in tree_laws().iter().enumerate() {
        assert_sampler_matches(p, 3, 20_000, 10 + i as u64);
    }
}

#[test]
fn uniform_one_two_tv() {
    let sampler = UgwSampler::new(&uniform_12()).unwrap();
    let emp = empirical_ugw_law(&sampler, 2, 100_000, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    let target = marginal_ugw(&uniform_12(), 2).unwrap();
    assert!(emp.tv_distance(&target).unwrap() <= 0.01);
}

#[test]
fn colored_single_color_matches_ugw_one() {
    let law = ColoredOffspringLaw::new(1, vec![(vec![1], rational(1, 2)), (vec![2], rational(1, 2))])
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 100_000u64;
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..n {
        let t = sample_ugw_colored(&law, 2, &mut rng).tree;
        *counts.entry(canonicalize(&t, 2)).or_insert(0u64) += 1;
    }
    let emp = NeighborhoodLaw::new(2, counts.into_iter().map(|(c, k)| (c, rational(k as i64, n as i64))))
        .unwrap();
    let target = marginal_ugw(&uniform_12(), 2).unwrap();
    assert!(emp.tv_distance(&target).unwrap() <= 0.01);

    let d = ColoredOffspringLaw::new(1, vec![(vec![3], rational(1, 1))]).unwrap();
    let t = sample_ugw_colored(&d, 3, &mut rng);
    assert_eq!(t.tree.vertex_count(), 1 + 3 + 6 + 12);
    let z = ColoredOffspringLaw::new(2, vec![(vec![0; 4], rational(1, 1))]).unwrap();
    assert_eq!(sample_ugw_colored(&z, 3, &mut rng).tree.vertex_count(), 1);
}

#[test]
fn bipartite_with_equal_laws_is_ugw_one() {
    let p = DegreeLaw::from_fractions(&[(1, 1, 2), (2, 1, 2)]).unwrap();
    let s = BipartiteSampler::new(&p, &p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 100_000u64;
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..n {
        let (t, _) = s.sample(2, &mut rng);
        *counts.entry(canonicalize(&t, 2)).or_insert(0u64) += 1;
    }
    let emp = NeighborhoodLaw::new(2, counts.into_iter().map(|(c, k)| (c, rational(k as i64, n as i64))))
        .unwrap();
    assert!(emp.tv_distance(&marginal_ugw(&uniform_12(), 2).unwrap()).unwrap() <= 0.01);
}

fn depth_one_law() -> impl Strategy<Value = NeighborhoodLaw> {
    prop::collection::vec(1u64..5, 1..4).prop_map(|w| {
        let total: u64 = w.iter().sum();
        let atoms = w
            .iter()
            .enumerate()
            .map(|(d, &x)| (CanonicalClass::star(d + 1), rational(x as i64, total as i64)));
        NeighborhoodLaw::new(1, atoms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn marginals_are_admissible_and_consistent(p in depth_one_law()) {
        for k in 1..=3 {
            let q = marginal_ugw(&p, k).unwrap();
            prop_assert!(is_admissible(&q));
            prop_assert_eq!(q.truncate(1).unwrap(), p.clone());
        }
        prop_assert!(consistency_check(&p, 2).unwrap());
        prop_assert!(edge_law_identity(&p).unwrap());
    }

    #[test]
    fn typed_entries_are_normalized(p in depth_one_law()) {
        let q = marginal_ugw(&p, 2).unwrap();
        let table = TypedBranchingLaw::new(&q).unwrap();
        for ((t, _), law) in &table.table {
            prop_assert!(law.is_probability());
            for (tau, _) in law.iter() {
                prop_assert_eq!(tau.truncate(1), *t);
            }
        }
    }
}
