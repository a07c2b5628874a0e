//! Brute-force ground truth: exhaustive enumeration of tiny multigraph
//! spaces, exact forward-DP laws for the growth and reconnection chains,
//! literal density recomputation, and exact total-variation distances.
//!
//! Everything here is deliberately slow, single-threaded, and structurally
//! unrelated to the implementations it checks. The dynamic programs work on
//! raw upper-triangular cell vectors, not on [`Multigraph`], so a bookkeeping
//! bug in the main types cannot cancel out of a comparison.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact;
use crate::multigraph::{DensityKind, Multigraph, Pattern};

/// Node budget for the enumeration recursions.
const ENUM_CAP: u64 = 1_000_000;
/// Map budget for the literal density odometer (n^k).
const NAIVE_CAP: u64 = 10_000_000;
/// Distinct-state budget for the chain DPs.
const STATE_CAP: u64 = 1_000_000;

/// Errors from oracle computations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("oracle state space needs {required} nodes but the cap is {cap}")]
    CapExceeded { required: u128, cap: u64 },
}

/// Exact probability law over canonically encoded multigraphs. Keys are
/// upper-triangular adjacency vectors in row-major order, the same encoding
/// as [`Multigraph::canonical_key`]; values are exact rationals.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExactLaw {
    atoms: BTreeMap<Vec<u32>, BigRational>,
}

impl ExactLaw {
    pub fn new() -> Self {
        ExactLaw { atoms: BTreeMap::new() }
    }

    /// Accumulate mass onto an atom. Zero mass is dropped.
    pub fn add_mass(&mut self, key: Vec<u32>, mass: BigRational) {
        if mass.is_zero() {
            return;
        }
        *self.atoms.entry(key).or_insert_with(BigRational::zero) += mass;
    }

    pub fn prob(&self, key: &[u32]) -> BigRational {
        self.atoms.get(key).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> BigRational {
        let mut t = BigRational::zero();
        for mass in self.atoms.values() {
            t += mass;
        }
        t
    }

    /// Exact total-variation distance, half the l1 gap over the union support.
    pub fn tv(&self, other: &ExactLaw) -> BigRational {
        let mut gap = BigRational::zero();
        for (key, p) in &self.atoms {
            gap += (p - other.prob(key)).abs();
        }
        for (key, q) in &other.atoms {
            if !self.atoms.contains_key(key) {
                gap += q.abs();
            }
        }
        gap / exact::int(2)
    }

    /// Total-variation distance against an empirical histogram with the given
    /// draw count. Computed in exact arithmetic, rounded only at the end.
    pub fn tv_vs_counts(&self, counts: &BTreeMap<Vec<u32>, u64>, draws: u64) -> f64 {
        assert!(draws > 0, "need at least one draw");
        let mut empirical = ExactLaw::new();
        for (key, &c) in counts {
            empirical.add_mass(key.clone(), exact::ratio(0, 1) + exact::int(c) / exact::int(draws));
        }
        exact::to_f64(&self.tv(&empirical))
    }

    /// Renormalized restriction to atoms satisfying the predicate. Empty if
    /// no mass survives.
    pub fn conditioned(&self, keep: impl Fn(&[u32]) -> bool) -> ExactLaw {
        let mut slice = ExactLaw::new();
        for (key, mass) in &self.atoms {
            if keep(key) {
                slice.add_mass(key.clone(), mass.clone());
            }
        }
        let total = slice.total_mass();
        if !total.is_zero() {
            for mass in slice.atoms.values_mut() {
                *mass /= &total;
            }
        }
        slice
    }

    /// Deterministic JSON object mapping comma-joined keys to rational
    /// strings, for golden-file comparisons.
    pub fn to_json(&self) -> String {
        let map: BTreeMap<String, String> = self
            .atoms
            .iter()
            .map(|(key, mass)| {
                let k = key.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
                (k, mass.to_string())
            })
            .collect();
        serde_json::to_string(&map).expect("string map serializes")
    }
}

/// Index of cell (i, j), i <= j, in the row-major upper-triangular encoding.
fn key_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * (2 * n - i + 1) / 2 + (j - i)
}

/// Vertex degrees encoded by an upper-triangular key.
fn key_degrees(n: usize, key: &[u32]) -> Vec<u64> {
    let mut d = vec![0u64; n];
    for i in 0..n {
        for j in i..n {
            let z = key[key_index(n, i, j)] as u64;
            if i == j {
                d[i] += z;
            } else {
                d[i] += z;
                d[j] += z;
            }
        }
    }
    d
}

/// Total half-edge count encoded by an upper-triangular key.
pub fn key_half_edges(n: usize, key: &[u32]) -> u64 {
    key_degrees(n, key).iter().sum()
}

struct DegreeEnumerator {
    n: usize,
    rem: Vec<u64>,
    cells: Vec<u32>,
    out: Vec<Multigraph>,
    visited: u64,
}

impl DegreeEnumerator {
    fn cell(&mut self, i: usize, j: usize) -> Result<(), OracleError> {
        self.visited += 1;
        if self.visited > ENUM_CAP {
            return Err(OracleError::CapExceeded { required: self.visited as u128, cap: ENUM_CAP });
        }
        if i == self.n {
            self.out.push(graph_from_key(self.n, &self.cells));
            return Ok(());
        }
        let max = if i == j { self.rem[i] } else { self.rem[i].min(self.rem[j]) };
        let step = if i == j { 2 } else { 1 };
        let row_ends = j + 1 == self.n;
        let mut v = 0u64;
        while v <= max {
            self.cells[key_index(self.n, i, j)] = v as u32;
            self.rem[i] -= v;
            if i != j {
                self.rem[j] -= v;
            }
            // A finished row must have consumed vertex i's degree exactly.
            if !row_ends {
                self.cell(i, j + 1)?;
            } else if self.rem[i] == 0 {
                self.cell(i + 1, i + 1)?;
            }
            self.rem[i] += v;
            if i != j {
                self.rem[j] += v;
            }
            v += step;
        }
        self.cells[key_index(self.n, i, j)] = 0;
        Ok(())
    }
}

/// All multigraphs with the given degree sequence: symmetric non-negative
/// matrices with even diagonal and prescribed row sums, no duplicates.
pub fn enumerate_graphs_by_degrees(d: &[u64]) -> Result<Vec<Multigraph>, OracleError> {
    let n = d.len();
    assert!(n >= 1, "need at least one vertex");
    let mut e = DegreeEnumerator {
        n,
        rem: d.to_vec(),
        cells: vec![0; n * (n + 1) / 2],
        out: Vec::new(),
        visited: 0,
    };
    e.cell(0, 0)?;
    Ok(e.out)
}

struct EdgeEnumerator {
    n: usize,
    cells: Vec<u32>,
    out: Vec<Multigraph>,
    visited: u64,
}

impl EdgeEnumerator {
    fn cell(&mut self, pos: usize, budget: u64) -> Result<(), OracleError> {
        self.visited += 1;
        if self.visited > ENUM_CAP {
            return Err(OracleError::CapExceeded { required: self.visited as u128, cap: ENUM_CAP });
        }
        let is_diag = {
            // Recover (i, j) from the flat position to detect diagonal cells.
            let mut i = 0usize;
            let mut start = 0usize;
            while start + (self.n - i) <= pos {
                start += self.n - i;
                i += 1;
            }
            pos == start
        };
        if pos + 1 == self.cells.len() {
            // Last cell absorbs the remaining edge budget exactly.
            self.cells[pos] = if is_diag { 2 * budget as u32 } else { budget as u32 };
            self.out.push(graph_from_key(self.n, &self.cells));
            self.cells[pos] = 0;
            return Ok(());
        }
        for w in 0..=budget {
            self.cells[pos] = if is_diag { 2 * w as u32 } else { w as u32 };
            self.cell(pos + 1, budget - w)?;
        }
        self.cells[pos] = 0;
        Ok(())
    }
}

/// All multigraphs on n vertices with exactly m edge-list entries (loops
/// count once).
pub fn enumerate_graphs_by_edges(n: usize, m: u64) -> Result<Vec<Multigraph>, OracleError> {
    assert!(n >= 1, "need at least one vertex");
    let mut e = EdgeEnumerator { n, cells: vec![0; n * (n + 1) / 2], out: Vec::new(), visited: 0 };
    e.cell(0, m)?;
    Ok(e.out)
}

fn graph_from_key(n: usize, key: &[u32]) -> Multigraph {
    let mut g = Multigraph::empty(n);
    for i in 0..n {
        for j in i..n {
            let z = key[key_index(n, i, j)];
            let copies = if i == j { z / 2 } else { z };
            for _ in 0..copies {
                g.add_entry(i, j);
            }
        }
    }
    g
}

/// One edge addition under the degree-plus-theta pair law, applied to every
/// atom of `law`. `half_edges` is the common pre-step half-edge count.
fn growth_step(
    n: usize,
    theta: &BigRational,
    key: &[u32],
    mass: &BigRational,
    out: &mut ExactLaw,
) {
    let d = key_degrees(n, key);
    let l: u64 = d.iter().sum();
    let n_theta = theta * exact::int(n as u64);
    let denom1 = exact::int(l) + &n_theta;
    let denom2 = exact::int(l + 1) + &n_theta;
    for i in 0..n {
        let w_i = exact::int(d[i]) + theta;
        for j in 0..n {
            let mut w_j = exact::int(d[j]) + theta;
            if i == j {
                w_j += BigRational::one();
            }
            let p = &w_i * &w_j / (&denom1 * &denom2);
            let mut child = key.to_vec();
            let idx = key_index(n, i.min(j), i.max(j));
            child[idx] += if i == j { 2 } else { 1 };
            out.add_mass(child, mass * p);
        }
    }
}

/// Exact law of the growth chain after m edge additions from the empty
/// graph, by forward dynamic programming over the add-law. Independent of
/// the closed-form pmf.
pub fn exact_growth_law(n: usize, m: u64, theta: &BigRational) -> Result<ExactLaw, OracleError> {
    let mut law = ExactLaw::new();
    law.add_mass(vec![0; n * (n + 1) / 2], BigRational::one());
    for _ in 0..m {
        let mut next = ExactLaw::new();
        for (key, mass) in law.atoms() {
            growth_step(n, theta, key, mass, &mut next);
        }
        if next.len() as u64 > STATE_CAP {
            return Err(OracleError::CapExceeded { required: next.len() as u128, cap: STATE_CAP });
        }
        law = next;
    }
    Ok(law)
}

/// Rational-parameter view of the reconnection chain for exact DP.
#[derive(Clone, Debug)]
pub struct ReconnectOracleParams {
    pub n: usize,
    pub theta: BigRational,
    pub p1: BigRational,
    pub p2: BigRational,
    pub a: BigRational,
    pub rho0: BigRational,
}

/// Truncated exact law of the reconnection chain: the retained atoms plus
/// the mass that escaped above the half-edge cap.
#[derive(Clone, Debug)]
pub struct ReconnectLaw {
    pub law: ExactLaw,
    pub escaped: BigRational,
}

/// Exact m-step law of the reconnection chain, truncating states whose
/// half-edge count exceeds `l_cap` into `escaped`. The initial state is the
/// growth chain run to half the initial half-edge target.
pub fn exact_reconnect_law(
    params: &ReconnectOracleParams,
    m: u64,
    l_cap: u64,
) -> Result<ReconnectLaw, OracleError> {
    let n = params.n;
    assert!(params.p1 >= BigRational::zero() && params.p2 >= BigRational::zero());
    assert!(&params.p1 + &params.p2 <= BigRational::one(), "p1 + p2 must not exceed 1");
    assert!(params.a > BigRational::zero() && params.a <= params.rho0, "need 0 < a <= rho0");

    // Initial half-edge count 2 * floor(rho0 n^2 / 2), drawn from the
    // growth chain at half that many edges.
    let n_sq = exact::int((n * n) as u64);
    let init_edges = (&params.rho0 * &n_sq / exact::int(2)).floor().to_integer();
    let init_edges = init_edges.to_u64().expect("initial edge count fits u64");
    let mut law = exact_growth_law(n, init_edges, &params.theta)?;
    let mut escaped = BigRational::zero();

    let threshold = &params.a * &n_sq + BigRational::one();
    let p3 = BigRational::one() - &params.p1 - &params.p2;
    let n_theta = &params.theta * exact::int(n as u64);

    for _ in 0..m {
        let mut next = ExactLaw::new();
        for (key, mass) in law.atoms() {
            let l = key_half_edges(n, key);
            let above = exact::int(l) > threshold;
            let (w_add, w_del, w_move) = if above {
                (params.p1.clone(), params.p2.clone(), p3.clone())
            } else {
                (&params.p1 + &params.p2, BigRational::zero(), p3.clone())
            };
            if !w_add.is_zero() {
                growth_step(n, &params.theta, key, &(mass * &w_add), &mut next);
            }
            if !w_del.is_zero() {
                // Delete a uniform edge-list entry: each occupied cell is hit
                // with probability (entries in cell) / (l / 2).
                let entries = exact::int(l / 2);
                for i in 0..n {
                    for j in i..n {
                        let z = key[key_index(n, i, j)] as u64;
                        let count = if i == j { z / 2 } else { z };
                        if count == 0 {
                            continue;
                        }
                        let p = exact::int(count) / &entries;
                        let mut child = key.to_vec();
                        child[key_index(n, i, j)] -= if i == j { 2 } else { 1 };
                        next.add_mass(child, mass * &w_del * p);
                    }
                }
            }
            if !w_move.is_zero() {
                if l == 0 {
                    // No half-edge to move; the step is a no-op.
                    next.add_mass(key.clone(), mass * &w_move);
                } else {
                    // Kept endpoint u is a uniform half-edge's owner, v the
                    // partner's owner: P(u, v) = z_uv / l for u != v and
                    // z_uu / l on the diagonal. The moved half-edge reattaches
                    // to w with weight degree + theta at pre-move degrees.
                    let d = key_degrees(n, key);
                    let denom = exact::int(l) + &n_theta;
                    for u in 0..n {
                        for v in 0..n {
                            let z = key[key_index(n, u.min(v), u.max(v))] as u64;
                            if z == 0 {
                                continue;
                            }
                            let p_uv = exact::ratio(z as i64, l as i64);
                            for w in 0..n {
                                let p_w = (exact::int(d[w]) + &params.theta) / &denom;
                                let mut child = key.to_vec();
                                child[key_index(n, u.min(v), u.max(v))] -=
                                    if u == v { 2 } else { 1 };
                                child[key_index(n, u.min(w), u.max(w))] +=
                                    if u == w { 2 } else { 1 };
                                next.add_mass(child, mass * &w_move * &p_uv * p_w);
                            }
                        }
                    }
                }
            }
        }
        // Truncate states above the half-edge cap into the escaped mass.
        let mut kept = ExactLaw::new();
        for (key, mass) in next.atoms() {
            if key_half_edges(n, key) > l_cap {
                escaped += mass;
            } else {
                kept.add_mass(key.clone(), mass.clone());
            }
        }
        if kept.len() as u64 > STATE_CAP {
            return Err(OracleError::CapExceeded { required: kept.len() as u128, cap: STATE_CAP });
        }
        law = kept;
    }
    Ok(ReconnectLaw { law, escaped })
}

/// Literal density recomputation: iterate over all n^k vertex maps with no
/// pruning and count the ones the density kind accepts. Exact rational.
pub fn naive_density(
    f: &Pattern,
    g: &Multigraph,
    kind: DensityKind,
) -> Result<BigRational, OracleError> {
    let k = f.k();
    let n = g.n();
    let maps = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if maps > NAIVE_CAP as u128 {
        return Err(OracleError::CapExceeded { required: maps, cap: NAIVE_CAP });
    }
    let mut accepted: u64 = 0;
    let mut map = vec![0usize; k];
    loop {
        let injective = {
            let mut seen = vec![false; n];
            let mut ok = true;
            for &v in &map {
                if seen[v] {
                    ok = false;
                    break;
                }
                seen[v] = true;
            }
            ok
        };
        let matches = |exact_match: bool| {
            for i in 0..k {
                for j in i..k {
                    let a = f.a(i, j);
                    let z = g.z(map[i], map[j]);
                    let ok = if exact_match { z == a } else { z >= a };
                    if !ok {
                        return false;
                    }
                }
            }
            true
        };
        let take = match kind {
            DensityKind::Hom => matches(false),
            DensityKind::Inj => injective && matches(false),
            DensityKind::Ind => injective && matches(true),
        };
        if take {
            accepted += 1;
        }
        // Odometer increment over [n]^k.
        let mut pos = 0;
        loop {
            if pos == k {
                let numer = BigInt::from(accepted);
                let denom = match kind {
                    DensityKind::Hom => BigInt::from(n).pow(k as u32),
                    DensityKind::Inj | DensityKind::Ind => {
                        let d = exact::falling_factorial(n as u64, k as u64);
                        if d.is_zero() {
                            return Ok(BigRational::zero());
                        }
                        d
                    }
                };
                return Ok(BigRational::new(numer, denom));
            }
            map[pos] += 1;
            if map[pos] < n {
                break;
            }
            map[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{growth_graph_prob, DegreeSequence};

    fn rat(p: i64, q: i64) -> BigRational {
        exact::ratio(p, q)
    }

    #[test]
    fn enumeration_counts_tiny_spaces() {
        assert_eq!(enumerate_graphs_by_degrees(&[1, 1]).unwrap().len(), 1);
        let two_reg = enumerate_graphs_by_degrees(&[2, 2]).unwrap();
        assert_eq!(two_reg.len(), 2);
        for g in &two_reg {
            assert_eq!(g.degrees(), &[2, 2]);
            assert!(g.consistent());
        }
        let one_vertex = enumerate_graphs_by_edges(1, 2).unwrap();
        assert_eq!(one_vertex.len(), 1);
        assert_eq!(one_vertex[0].z(0, 0), 4);
    }

    #[test]
    fn enumeration_by_edges_matches_degree_slices() {
        // Every 2-edge graph on 3 vertices appears exactly once, and slicing
        // by degree sequence agrees with the degree enumerator.
        let by_edges = enumerate_graphs_by_edges(3, 2).unwrap();
        let keys: std::collections::BTreeSet<Vec<u32>> =
            by_edges.iter().map(|g| g.canonical_key()).collect();
        assert_eq!(keys.len(), by_edges.len(), "no duplicates");
        for degs in [[2u64, 1, 1], [2, 2, 0], [4, 0, 0]] {
            let slice = enumerate_graphs_by_degrees(&degs).unwrap();
            let expect: std::collections::BTreeSet<Vec<u32>> = by_edges
                .iter()
                .filter(|g| g.degrees() == degs)
                .map(|g| g.canonical_key())
                .collect();
            let got: std::collections::BTreeSet<Vec<u32>> =
                slice.iter().map(|g| g.canonical_key()).collect();
            assert_eq!(got, expect, "degrees {degs:?}");
        }
    }

    #[test]
    fn tv_distance_examples() {
        let mut p = ExactLaw::new();
        p.add_mass(vec![1], rat(2, 3));
        p.add_mass(vec![2], rat(1, 3));
        let mut q = ExactLaw::new();
        q.add_mass(vec![1], rat(1, 2));
        q.add_mass(vec![2], rat(1, 2));
        assert_eq!(p.tv(&q), rat(1, 6));
        assert_eq!(p.tv(&p), BigRational::zero());
        let mut disjoint = ExactLaw::new();
        disjoint.add_mass(vec![9], BigRational::one());
        assert_eq!(p.tv(&disjoint), BigRational::one());
    }

    #[test]
    fn tv_vs_counts_is_exact_until_rounding() {
        let mut p = ExactLaw::new();
        p.add_mass(vec![0], rat(1, 2));
        p.add_mass(vec![1], rat(1, 2));
        let mut counts = BTreeMap::new();
        counts.insert(vec![0], 3u64);
        counts.insert(vec![1], 1u64);
        // Empirical law (3/4, 1/4): TV = 1/4.
        assert!((p.tv_vs_counts(&counts, 4) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn growth_law_one_step_is_three_thirds() {
        let law = exact_growth_law(2, 1, &BigRational::one()).unwrap();
        assert_eq!(law.len(), 3);
        assert_eq!(law.total_mass(), BigRational::one());
        let edge = Multigraph::from_edge_list(2, &[(0, 1)]);
        let loop0 = Multigraph::from_edge_list(2, &[(0, 0)]);
        let loop1 = Multigraph::from_edge_list(2, &[(1, 1)]);
        for g in [&edge, &loop0, &loop1] {
            assert_eq!(law.prob(&g.canonical_key()), rat(1, 3));
        }
    }

    #[test]
    fn growth_law_matches_closed_form() {
        let theta = rat(1, 2);
        let law = exact_growth_law(3, 2, &theta).unwrap();
        assert_eq!(law.total_mass(), BigRational::one());
        for g in enumerate_graphs_by_edges(3, 2).unwrap() {
            assert_eq!(law.prob(&g.canonical_key()), growth_graph_prob(&g, &theta));
        }
    }

    #[test]
    fn reconnect_law_zero_steps_is_init_law() {
        let params = ReconnectOracleParams {
            n: 2,
            theta: BigRational::one(),
            p1: rat(1, 2),
            p2: rat(1, 2),
            a: rat(1, 2),
            rho0: rat(1, 2),
        };
        // rho0 n^2 / 2 = 1 edge initially.
        let r = exact_reconnect_law(&params, 0, 16).unwrap();
        assert!(r.escaped.is_zero());
        assert_eq!(r.law, exact_growth_law(2, 1, &BigRational::one()).unwrap());
    }

    #[test]
    fn reconnect_pure_move_preserves_half_edge_count() {
        let params = ReconnectOracleParams {
            n: 2,
            theta: BigRational::one(),
            p1: BigRational::zero(),
            p2: BigRational::zero(),
            a: rat(1, 2),
            rho0: BigRational::one(),
        };
        let r = exact_reconnect_law(&params, 5, 16).unwrap();
        assert!(r.escaped.is_zero());
        assert_eq!(r.law.total_mass(), BigRational::one());
        for (key, _) in r.law.atoms() {
            assert_eq!(key_half_edges(2, key), 4);
        }
    }

    #[test]
    fn reconnect_conditional_slice_matches_growth_law() {
        // L0 = 4, so half-edge counts at even steps stay in {4, 8, 12, ...}
        // and the slice at 4 is populated.
        let params = ReconnectOracleParams {
            n: 2,
            theta: BigRational::one(),
            p1: rat(1, 2),
            p2: rat(1, 2),
            a: rat(1, 2),
            rho0: BigRational::one(),
        };
        let r = exact_reconnect_law(&params, 4, 40).unwrap();
        let mass_bound = exact::to_f64(&r.escaped);
        assert!(mass_bound < 1e-3, "escaped {mass_bound}");
        let slice = r.law.conditioned(|key| key_half_edges(2, key) == 4);
        let growth = exact_growth_law(2, 2, &BigRational::one()).unwrap();
        let tv = exact::to_f64(&slice.tv(&growth));
        assert!(tv <= mass_bound + 1e-12, "tv {tv} vs escaped {mass_bound}");
    }

    #[test]
    fn naive_density_triangle_examples() {
        let triangle = Multigraph::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)]);
        let edge = Pattern::pair(1);
        assert_eq!(naive_density(&edge, &triangle, DensityKind::Hom).unwrap(), rat(2, 3));
        assert_eq!(naive_density(&edge, &triangle, DensityKind::Inj).unwrap(), rat(1, 1));
        assert_eq!(naive_density(&edge, &triangle, DensityKind::Ind).unwrap(), rat(1, 1));
        // Injective densities vanish when the pattern outgrows the host.
        let big = Pattern::empty(4);
        let host = Multigraph::empty(3);
        assert_eq!(naive_density(&big, &host, DensityKind::Inj).unwrap(), BigRational::zero());
    }

    #[test]
    fn naive_density_cap() {
        let f = Pattern::empty(9);
        let g = Multigraph::empty(8);
        assert!(matches!(
            naive_density(&f, &g, DensityKind::Hom),
            Err(OracleError::CapExceeded { .. })
        ));
    }

    #[test]
    fn cm_prob_sums_to_one_over_enumerated_support() {
        for degs in [vec![2u64, 2], vec![3, 2, 1], vec![2, 2, 2, 2]] {
            let d = DegreeSequence::new(degs.clone());
            let mut total = BigRational::zero();
            for g in enumerate_graphs_by_degrees(&degs).unwrap() {
                total += crate::generators::cm_prob(&g, &d).unwrap();
            }
            assert_eq!(total, BigRational::one(), "degrees {degs:?}");
        }
    }

    #[test]
    fn json_dump_is_deterministic() {
        let mut p = ExactLaw::new();
        p.add_mass(vec![0, 1, 0], rat(2, 3));
        p.add_mass(vec![2, 0, 0], rat(1, 3));
        assert_eq!(p.to_json(), r#"{"0,1,0":"2/3","2,0,0":"1/3"}"#);
    }
}
