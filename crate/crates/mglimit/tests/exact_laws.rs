//! Sampler-versus-closed-form checks driven by exhaustive enumeration:
//! every law with an exact formula is compared against high-volume empirical
//! draws and against an independently written literal implementation.

use mglimit::generators::{
    cm_prob, grow, growth_degree_prob, growth_graph_prob, sample_cm, DegreeSequence, GrowthParams,
};
use mglimit::multigraph::{hom_density, ind_density, inj_density, DensityKind};
use mglimit::oracle::{
    enumerate_graphs_by_degrees, enumerate_graphs_by_edges, naive_density, ExactLaw,
};
use mglimit::{exact, Multigraph, Pattern};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Nonincreasing positive degree sequences with at most `max_parts` parts
/// and even total at most `max_total`. Zero entries are inert in a pairing
/// model and label order is structurally irrelevant to both the sampler and
/// the closed form, so these representatives cover all small sequences.
fn partition_representatives(max_parts: usize, max_total: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(
        out: &mut Vec<Vec<u64>>,
        current: &mut Vec<u64>,
        remaining_total: u64,
        max_part: u64,
        max_parts: usize,
    ) {
        if !current.is_empty() && current.iter().sum::<u64>() % 2 == 0 {
            out.push(current.clone());
        }
        if current.len() == max_parts {
            return;
        }
        let cap = max_part.min(remaining_total);
        for part in 1..=cap {
            current.push(part);
            rec(out, current, remaining_total - part, part, max_parts);
            current.pop();
        }
    }
    rec(&mut out, &mut current, max_total, max_total, max_parts);
    out
}

fn exact_cm_law(d: &DegreeSequence) -> ExactLaw {
    let mut law = ExactLaw::new();
    for g in enumerate_graphs_by_degrees(d.degrees()).unwrap() {
        law.add_mass(g.canonical_key(), cm_prob(&g, d).unwrap());
    }
    law
}

#[test]
fn cm_prob_sums_to_one_on_all_small_sequences() {
    for d in partition_representatives(4, 8) {
        let d = DegreeSequence::new(d);
        let law = exact_cm_law(&d);
        assert!(law.total_mass().is_one(), "degrees {:?}", d.degrees());
    }
}

#[test]
fn cm_prob_is_label_equivariant() {
    // Permuting vertex labels permutes the law; checked exactly so the
    // sampler comparison below may restrict to sorted representatives.
    let perms: [[usize; 4]; 3] = [[1, 0, 2, 3], [3, 2, 1, 0], [1, 2, 3, 0]];
    let d = DegreeSequence::new(vec![4, 2, 1, 1]);
    for perm in perms {
        let permuted_degrees: Vec<u64> = {
            let mut v = vec![0u64; 4];
            for (i, &dest) in perm.iter().enumerate() {
                v[dest] = d.degrees()[i];
            }
            v
        };
        let dp = DegreeSequence::new(permuted_degrees);
        for g in enumerate_graphs_by_degrees(d.degrees()).unwrap() {
            let gp = g.permuted(&perm);
            assert_eq!(cm_prob(&g, &d).unwrap(), cm_prob(&gp, &dp).unwrap());
        }
    }
}

#[test]
fn cm_sampler_matches_exact_law() {
    // Every positive nonincreasing degree sequence with n <= 4 and total
    // at most 8: a million pairings against the exact law.
    let draws = 1_000_000u64;
    for degrees in partition_representatives(4, 8) {
        let d = DegreeSequence::new(degrees);
        let law = exact_cm_law(&d);
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE ^ d.total() << 8 ^ d.n() as u64);
        let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for _ in 0..draws {
            let g = sample_cm(&d, &mut rng).unwrap();
            *counts.entry(g.canonical_key()).or_insert(0) += 1;
        }
        let tv = law.tv_vs_counts(&counts, draws);
        assert!(tv < 0.005, "degrees {:?}: tv = {tv}", d.degrees());
    }
}

#[test]
fn growth_sampler_matches_exact_law() {
    let draws = 1_000_000u64;
    for n in 1..=3usize {
        for m in 0..=3u64 {
            for (num, den) in [(1i64, 2i64), (1, 1), (2, 1)] {
                let theta = exact::ratio(num, den);
                let mut law = ExactLaw::new();
                for g in enumerate_graphs_by_edges(n, m).unwrap() {
                    law.add_mass(g.canonical_key(), growth_graph_prob(&g, &theta));
                }
                assert!(law.total_mass().is_one());
                let params = GrowthParams::new(n, num as f64 / den as f64, m);
                let mut rng =
                    ChaCha8Rng::seed_from_u64(0xBEEF ^ (n as u64) << 16 ^ m << 8 ^ num as u64);
                let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
                for _ in 0..draws {
                    let g = grow(&params, None, &mut rng);
                    *counts.entry(g.canonical_key()).or_insert(0) += 1;
                }
                let tv = law.tv_vs_counts(&counts, draws);
                assert!(tv < 0.005, "n={n} m={m} theta={num}/{den}: tv = {tv}");
            }
        }
    }
}

#[test]
fn growth_law_factorizes_through_degrees() {
    // The growth law conditioned on its degree sequence is the pairing
    // model: graph probability = degree probability * pairing probability,
    // as exact rationals on every enumerable instance. Degree-class sums
    // also reproduce the closed-form degree law.
    for n in 1..=3usize {
        for m in 0..=3u64 {
            for (num, den) in [(1i64, 2i64), (1, 1), (7, 3)] {
                let theta = exact::ratio(num, den);
                let mut by_degrees: BTreeMap<Vec<u64>, BigRational> = BTreeMap::new();
                let mut total = BigRational::zero();
                for g in enumerate_graphs_by_edges(n, m).unwrap() {
                    let p_graph = growth_graph_prob(&g, &theta);
                    let d = DegreeSequence::new(g.degrees().to_vec());
                    let p_degrees = growth_degree_prob(&d, &theta).unwrap();
                    let p_pairing = cm_prob(&g, &d).unwrap();
                    assert_eq!(p_graph, &p_degrees * &p_pairing, "n={n} m={m}");
                    *by_degrees.entry(g.degrees().to_vec()).or_insert_with(BigRational::zero) +=
                        &p_graph;
                    total += p_graph;
                }
                assert!(total.is_one(), "n={n} m={m} theta={num}/{den}");
                for (degrees, sum) in by_degrees {
                    let d = DegreeSequence::new(degrees);
                    assert_eq!(sum, growth_degree_prob(&d, &theta).unwrap());
                }
            }
        }
    }
}

#[test]
fn densities_match_literal_reimplementation() {
    // 500 random (pattern, graph) instances, all three density kinds, exact
    // equality between the recursive counter and the flat odometer.
    let mut rng = ChaCha8Rng::seed_from_u64(31_415);
    for trial in 0..500 {
        let k = rng.random_range(1..=3usize);
        let n = rng.random_range(1..=7usize);
        let mut a = vec![0u32; k * k];
        for i in 0..k {
            for j in i..k {
                let v = if i == j { 2 * rng.random_range(0..=1u32) } else { rng.random_range(0..=2) };
                a[i * k + j] = v;
                a[j * k + i] = v;
            }
        }
        let f = Pattern::from_matrix(k, a);
        let mut g = Multigraph::empty(n);
        for i in 0..n {
            for j in i..n {
                for _ in 0..rng.random_range(0..=2u32) {
                    g.add_entry(i, j);
                }
            }
        }
        for kind in [DensityKind::Hom, DensityKind::Inj, DensityKind::Ind] {
            let fast = match kind {
                DensityKind::Hom => hom_density(&f, &g, 10_000_000),
                DensityKind::Inj => inj_density(&f, &g, 10_000_000),
                DensityKind::Ind => ind_density(&f, &g, 10_000_000),
            }
            .unwrap();
            let literal = naive_density(&f, &g, kind).unwrap();
            assert_eq!(fast, literal, "trial {trial} k={k} n={n} {kind:?}");
        }
    }
}
