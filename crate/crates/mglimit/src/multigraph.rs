//! Finite multigraphs: adjacency with even diagonal (a loop contributes 2),
//! an edge list supporting O(1) random mutation, homomorphism-density
//! functionals, multiplicity marginals and the truncated multisubgraph
//! distance.
//!
//! Vertices are 0-based `usize` everywhere in the API; the text interchange
//! format is 1-based.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::exact;
use crate::multigraphon::Estimate;

/// Above this vertex count adjacency moves to a hash map of pairs.
const DENSE_LIMIT: usize = 2048;

/// Default cap on the number of vertex maps an exact density may visit.
pub const DEFAULT_DENSITY_BUDGET: u64 = 10_000_000;

/// Errors from exact density evaluation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DensityError {
    #[error("exact density needs {required} maps but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
}

/// Errors from the text graph format.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TextFormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

#[derive(Clone, Debug)]
enum Storage {
    Dense(Vec<u32>),
    Sparse(HashMap<(u32, u32), u32>),
}

impl Storage {
    fn new(n: usize) -> Self {
        if n <= DENSE_LIMIT {
            Storage::Dense(vec![0; n * n])
        } else {
            Storage::Sparse(HashMap::new())
        }
    }

    fn get(&self, n: usize, i: usize, j: usize) -> u32 {
        match self {
            Storage::Dense(m) => m[i * n + j],
            Storage::Sparse(map) => {
                let key = (i.min(j) as u32, i.max(j) as u32);
                map.get(&key).copied().unwrap_or(0)
            }
        }
    }

    fn add(&mut self, n: usize, i: usize, j: usize, delta: i64) {
        match self {
            Storage::Dense(m) => {
                let v = (m[i * n + j] as i64 + delta).try_into().expect("negative multiplicity");
                m[i * n + j] = v;
                if i != j {
                    m[j * n + i] = v;
                }
            }
            Storage::Sparse(map) => {
                let key = (i.min(j) as u32, i.max(j) as u32);
                let slot = map.entry(key).or_insert(0);
                let v: u32 = (*slot as i64 + delta).try_into().expect("negative multiplicity");
                if v == 0 {
                    map.remove(&key);
                } else {
                    *slot = v;
                }
            }
        }
    }
}

/// Symmetric multigraph on `n` vertices.
///
/// Invariants kept by every operation: the adjacency is symmetric with even
/// diagonal, `degrees[i]` is the i-th row sum, and the edge list holds one
/// entry per edge or loop, so the degree total equals twice its length.
#[derive(Clone, Debug)]
pub struct Multigraph {
    n: usize,
    storage: Storage,
    edges: Vec<(u32, u32)>,
    degrees: Vec<u64>,
    half_edges: u64,
}

impl Multigraph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        assert!(n >= 1, "a multigraph needs at least one vertex");
        Multigraph {
            n,
            storage: Storage::new(n),
            edges: Vec::new(),
            degrees: vec![0; n],
            half_edges: 0,
        }
    }

    /// Graph built from edge-list entries; a pair `(i, i)` is one loop.
    pub fn from_edge_list(n: usize, entries: &[(usize, usize)]) -> Self {
        let mut g = Multigraph::empty(n);
        for &(i, j) in entries {
            g.add_entry(i, j);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge multiplicity between `i` and `j`; the diagonal holds 2x loops.
    pub fn z(&self, i: usize, j: usize) -> u32 {
        assert!(i < self.n && j < self.n, "vertex out of range");
        self.storage.get(self.n, i, j)
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Total number of half-edges, i.e. the degree sum.
    pub fn half_edge_count(&self) -> u64 {
        self.half_edges
    }

    /// Edge-list entries; entry order is not meaningful after removals.
    pub fn edge_entries(&self) -> &[(u32, u32)] {
        &self.edges
    }

    fn bump(&mut self, i: usize, j: usize, sign: i64) {
        if i == j {
            self.storage.add(self.n, i, i, 2 * sign);
            self.degrees[i] = (self.degrees[i] as i64 + 2 * sign) as u64;
        } else {
            self.storage.add(self.n, i, j, sign);
            self.degrees[i] = (self.degrees[i] as i64 + sign) as u64;
            self.degrees[j] = (self.degrees[j] as i64 + sign) as u64;
        }
        self.half_edges = (self.half_edges as i64 + 2 * sign) as u64;
    }

    /// Append one edge (or loop when `i == j`) to the graph.
    pub fn add_entry(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n, "vertex out of range");
        self.edges.push((i as u32, j as u32));
        self.bump(i, j, 1);
    }

    /// Add one edge between distinct vertices.
    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i != j, "add_edge needs distinct endpoints; use add_loop");
        self.add_entry(i, j);
    }

    /// Add one loop at `i`.
    pub fn add_loop(&mut self, i: usize) {
        self.add_entry(i, i);
    }

    /// Remove the edge-list entry at `idx` by swap-with-last; returns it.
    pub fn remove_entry(&mut self, idx: usize) -> (usize, usize) {
        let (i, j) = self.edges.swap_remove(idx);
        self.bump(i as usize, j as usize, -1);
        (i as usize, j as usize)
    }

    /// Re-point one endpoint of the entry at `idx` to `new_vertex`.
    ///
    /// `side` selects the stored endpoint (0 or 1). The other endpoint is
    /// untouched, so exactly one half-edge moves.
    pub fn move_half_edge(&mut self, idx: usize, side: usize, new_vertex: usize) {
        assert!(side < 2, "side must be 0 or 1");
        assert!(new_vertex < self.n, "vertex out of range");
        let (a, b) = self.edges[idx];
        let (kept, moved) = if side == 0 { (b as usize, a as usize) } else { (a as usize, b as usize) };
        self.bump(kept, moved, -1);
        self.bump(kept, new_vertex, 1);
        self.edges[idx] = if side == 0 {
            (new_vertex as u32, kept as u32)
        } else {
            (kept as u32, new_vertex as u32)
        };
    }

    /// Simple graph with unit entries wherever a connection exists and no loops.
    pub fn erased(&self) -> Multigraph {
        let mut entries = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.z(i, j) >= 1 {
                    entries.push((i, j));
                }
            }
        }
        Multigraph::from_edge_list(self.n, &entries)
    }

    /// True when every entry is 0/1 with an empty diagonal.
    pub fn is_simple(&self) -> bool {
        for i in 0..self.n {
            if self.z(i, i) != 0 {
                return false;
            }
            for j in (i + 1)..self.n {
                if self.z(i, j) > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Upper-triangular row-major adjacency encoding; canonical state key.
    pub fn canonical_key(&self) -> Vec<u32> {
        let mut key = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for i in 0..self.n {
            for j in i..self.n {
                key.push(self.z(i, j));
            }
        }
        key
    }

    /// Copy with vertex `i` renamed to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Multigraph {
        assert_eq!(perm.len(), self.n);
        let entries: Vec<(usize, usize)> =
            self.edges.iter().map(|&(a, b)| (perm[a as usize], perm[b as usize])).collect();
        Multigraph::from_edge_list(self.n, &entries)
    }

    /// Full invariant audit: rebuilds adjacency and degrees from the edge
    /// list and compares. Intended for tests and stress checks.
    pub fn consistent(&self) -> bool {
        let rebuilt = Multigraph::from_edge_list(
            self.n,
            &self.edges.iter().map(|&(a, b)| (a as usize, b as usize)).collect::<Vec<_>>(),
        );
        if rebuilt.degrees != self.degrees || rebuilt.half_edges != self.half_edges {
            return false;
        }
        if self.half_edges != 2 * self.edges.len() as u64 {
            return false;
        }
        for i in 0..self.n {
            if self.z(i, i) % 2 != 0 {
                return false;
            }
            for j in 0..self.n {
                if rebuilt.z(i, j) != self.z(i, j) {
                    return false;
                }
            }
        }
        true
    }

    /// Largest entry over all adjacency cells (diagonal included).
    pub fn max_cell_multiplicity(&self) -> u32 {
        match &self.storage {
            Storage::Dense(m) => m.iter().copied().max().unwrap_or(0),
            Storage::Sparse(map) => map.values().copied().max().unwrap_or(0),
        }
    }

    /// Largest loop count at any vertex.
    pub fn max_loop_count(&self) -> u32 {
        (0..self.n).map(|i| self.z(i, i) / 2).max().unwrap_or(0)
    }

    /// Parse the text interchange format: first line `n`, then one line per
    /// edge-list entry `i j` (1-based, `i i` for a loop). Blank lines are
    /// ignored.
    pub fn parse_text(input: &str) -> Result<Multigraph, TextFormatError> {
        let mut n: Option<usize> = None;
        let mut g: Option<Multigraph> = None;
        for (line_idx, raw) in input.lines().enumerate() {
            let line_no = line_idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if n.is_none() {
                let parsed: usize = line.parse().map_err(|_| TextFormatError::Malformed {
                    line: line_no,
                    message: format!("expected vertex count, found {line:?}"),
                })?;
                if parsed == 0 {
                    return Err(TextFormatError::Malformed {
                        line: line_no,
                        message: "vertex count must be positive".into(),
                    });
                }
                n = Some(parsed);
                g = Some(Multigraph::empty(parsed));
                continue;
            }
            let n = n.unwrap();
            let mut parts = line.split_whitespace();
            let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(TextFormatError::Malformed {
                        line: line_no,
                        message: format!("expected `i j`, found {line:?}"),
                    })
                }
            };
            let parse_vertex = |s: &str| -> Result<usize, TextFormatError> {
                let v: usize = s.parse().map_err(|_| TextFormatError::Malformed {
                    line: line_no,
                    message: format!("bad vertex {s:?}"),
                })?;
                if v < 1 || v > n {
                    return Err(TextFormatError::Malformed {
                        line: line_no,
                        message: format!("vertex {v} out of range 1..={n}"),
                    });
                }
                Ok(v - 1)
            };
            let (i, j) = (parse_vertex(a)?, parse_vertex(b)?);
            g.as_mut().unwrap().add_entry(i, j);
        }
        g.ok_or(TextFormatError::Malformed { line: 1, message: "empty input".into() })
    }

    /// Inverse of [`Multigraph::parse_text`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for &(a, b) in &self.edges {
            out.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        out
    }
}

impl PartialEq for Multigraph {
    /// Equality of labeled adjacency (edge-list order is irrelevant).
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.canonical_key() == other.canonical_key()
    }
}

impl Eq for Multigraph {}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multigraph(n={}, entries={})", self.n, self.edges.len())
    }
}

/// Small probe multigraph with the same symmetry and even-diagonal rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    k: usize,
    a: Vec<u32>,
}

impl Pattern {
    /// Pattern from the full row-major matrix; must be symmetric with even
    /// diagonal.
    pub fn from_matrix(k: usize, a: Vec<u32>) -> Self {
        assert!(k >= 1 && a.len() == k * k, "matrix shape mismatch");
        for i in 0..k {
            assert!(a[i * k + i] % 2 == 0, "diagonal entries must be even");
            for j in 0..k {
                assert!(a[i * k + j] == a[j * k + i], "matrix must be symmetric");
            }
        }
        Pattern { k, a }
    }

    /// Pattern from upper-triangular row-major entries.
    pub fn from_upper(k: usize, upper: &[u32]) -> Self {
        assert_eq!(upper.len(), k * (k + 1) / 2, "upper-triangle length mismatch");
        let mut a = vec![0; k * k];
        let mut pos = 0;
        for i in 0..k {
            for j in i..k {
                a[i * k + j] = upper[pos];
                a[j * k + i] = upper[pos];
                pos += 1;
            }
        }
        Pattern::from_matrix(k, a)
    }

    /// Edgeless pattern on `k` vertices.
    pub fn empty(k: usize) -> Self {
        Pattern::from_matrix(k, vec![0; k * k])
    }

    /// Two vertices joined by `r` parallel edges.
    pub fn pair(r: u32) -> Self {
        Pattern::from_matrix(2, vec![0, r, r, 0])
    }

    /// One vertex carrying `r` loops.
    pub fn loops(r: u32) -> Self {
        Pattern::from_matrix(1, vec![2 * r])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a(&self, i: usize, j: usize) -> u32 {
        self.a[i * self.k + j]
    }

    /// Total multiplicity: edge count plus loop count.
    pub fn weight(&self) -> u32 {
        let mut w = 0;
        for i in 0..self.k {
            w += self.a(i, i) / 2;
            for j in (i + 1)..self.k {
                w += self.a(i, j);
            }
        }
        w
    }

    /// True when all entries are 0/1 off the diagonal and the diagonal is 0.
    pub fn is_simple(&self) -> bool {
        (0..self.k).all(|i| self.a(i, i) == 0 && (0..self.k).all(|j| self.a(i, j) <= 1))
    }

    /// Copy with vertex `i` renamed to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Pattern {
        assert_eq!(perm.len(), self.k);
        let mut a = vec![0; self.k * self.k];
        for i in 0..self.k {
            for j in 0..self.k {
                a[perm[i] * self.k + perm[j]] = self.a(i, j);
            }
        }
        Pattern::from_matrix(self.k, a)
    }
}

/// Deterministic total order over all patterns: ascending by vertex count
/// plus total multiplicity, then vertex count, then lexicographic
/// upper-triangular entries. The first key makes the order a genuine
/// infinite enumeration (each bucket is finite); no isomorphism
/// deduplication is attempted.
pub struct PatternEnumeration {
    bucket: u32,
    k: u32,
    block: std::vec::IntoIter<Vec<u32>>,
}

impl PatternEnumeration {
    pub fn new() -> Self {
        PatternEnumeration { bucket: 1, k: 0, block: Vec::new().into_iter() }
    }

    fn upper_vectors(k: u32, weight: u32) -> Vec<Vec<u32>> {
        let len = (k * (k + 1) / 2) as usize;
        let diag: Vec<bool> = (0..k)
            .flat_map(|i| (i..k).map(move |j| i == j))
            .collect();
        let mut out = Vec::new();
        let mut prefix = vec![0u32; len];
        fn rec(
            pos: usize,
            left: u32,
            diag: &[bool],
            prefix: &mut Vec<u32>,
            out: &mut Vec<Vec<u32>>,
        ) {
            if pos == diag.len() {
                if left == 0 {
                    out.push(prefix.clone());
                }
                return;
            }
            if diag[pos] {
                for half in 0..=left {
                    prefix[pos] = 2 * half;
                    rec(pos + 1, left - half, diag, prefix, out);
                }
            } else {
                for v in 0..=left {
                    prefix[pos] = v;
                    rec(pos + 1, left - v, diag, prefix, out);
                }
            }
            prefix[pos] = 0;
        }
        rec(0, weight, &diag, &mut prefix, &mut out);
        out
    }
}

impl Default for PatternEnumeration {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PatternEnumeration {
    type Item = Pattern;

    fn next(&mut self) -> Option<Pattern> {
        loop {
            if let Some(upper) = self.block.next() {
                return Some(Pattern::from_upper(self.k as usize, &upper));
            }
            // Advance to the next (bucket, k) block; k runs 1..=bucket since
            // weight = bucket - k must stay non-negative.
            if self.k < self.bucket {
                self.k += 1;
            } else {
                self.bucket += 1;
                self.k = 1;
            }
            self.block = Self::upper_vectors(self.k, self.bucket - self.k).into_iter();
        }
    }
}

/// Which density functional a sampled estimate targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityKind {
    /// Uniform vertex maps, at-least-multiplicity indicator.
    Hom,
    /// Uniform injective maps, at-least-multiplicity indicator.
    Inj,
    /// Uniform injective maps, exact-multiplicity indicator (diagonal included).
    Ind,
}

fn budget_check(required: u128, budget: u64) -> Result<(), DensityError> {
    if required > budget as u128 {
        Err(DensityError::BudgetExceeded { required, budget })
    } else {
        Ok(())
    }
}

fn hom_indicator(f: &Pattern, g: &Multigraph, sigma: &[usize]) -> bool {
    let k = f.k();
    for i in 0..k {
        for j in i..k {
            if f.a(i, j) > g.z(sigma[i], sigma[j]) {
                return false;
            }
        }
    }
    true
}

fn ind_indicator(f: &Pattern, g: &Multigraph, sigma: &[usize]) -> bool {
    let k = f.k();
    for i in 0..k {
        for j in i..k {
            if f.a(i, j) != g.z(sigma[i], sigma[j]) {
                return false;
            }
        }
    }
    true
}

/// Exact homomorphism density: the share of all n^k vertex maps carrying at
/// least the required multiplicity on every pair (diagonal included).
pub fn hom_density(f: &Pattern, g: &Multigraph, budget: u64) -> Result<BigRational, DensityError> {
    let k = f.k() as u32;
    let n = g.n();
    let total = (n as u128).pow(k);
    budget_check(total, budget)?;
    let mut sigma = vec![0usize; f.k()];
    let mut count: u64 = 0;
    loop {
        if hom_indicator(f, g, &sigma) {
            count += 1;
        }
        // Odometer over [n]^k.
        let mut pos = 0;
        loop {
            if pos == f.k() {
                let denom = BigInt::from(n).pow(k);
                return Ok(BigRational::new(BigInt::from(count), denom));
            }
            sigma[pos] += 1;
            if sigma[pos] < n {
                break;
            }
            sigma[pos] = 0;
            pos += 1;
        }
    }
}

fn injective_count(f: &Pattern, g: &Multigraph, exact: bool) -> u64 {
    let k = f.k();
    let n = g.n();
    let mut sigma = vec![0usize; k];
    let mut used = vec![false; n];
    let mut count = 0u64;
    fn rec(
        f: &Pattern,
        g: &Multigraph,
        exact: bool,
        depth: usize,
        sigma: &mut [usize],
        used: &mut [bool],
        count: &mut u64,
    ) {
        if depth == f.k() {
            *count += 1;
            return;
        }
        for v in 0..g.n() {
            if used[v] {
                continue;
            }
            sigma[depth] = v;
            // Check constraints touching the new vertex only.
            let ok = (0..=depth).all(|i| {
                let (req, got) = (f.a(i, depth), g.z(sigma[i], v));
                if exact { req == got } else { req <= got }
            });
            if ok {
                used[v] = true;
                rec(f, g, exact, depth + 1, sigma, used, count);
                used[v] = false;
            }
        }
    }
    rec(f, g, exact, 0, &mut sigma, &mut used, &mut count);
    count
}

/// Exact injective density over the (n)_k injective maps; 0 when k > n.
pub fn inj_density(f: &Pattern, g: &Multigraph, budget: u64) -> Result<BigRational, DensityError> {
    let k = f.k();
    let n = g.n();
    if k > n {
        return Ok(BigRational::zero());
    }
    budget_check((n as u128).pow(k as u32), budget)?;
    let count = injective_count(f, g, false);
    Ok(BigRational::new(BigInt::from(count), exact::falling_factorial(n as u64, k as u64)))
}

/// Exact induced density: injective maps matching every multiplicity
/// exactly, diagonal cells included; 0 when k > n.
pub fn ind_density(f: &Pattern, g: &Multigraph, budget: u64) -> Result<BigRational, DensityError> {
    let k = f.k();
    let n = g.n();
    if k > n {
        return Ok(BigRational::zero());
    }
    budget_check((n as u128).pow(k as u32), budget)?;
    let count = injective_count(f, g, true);
    Ok(BigRational::new(BigInt::from(count), exact::falling_factorial(n as u64, k as u64)))
}

/// Unbiased Monte Carlo estimate of one of the three density functionals.
///
/// Standard error is the binomial plug-in `sqrt(p̂ (1-p̂) / N)`.
pub fn sampled_density(
    f: &Pattern,
    g: &Multigraph,
    kind: DensityKind,
    n_samples: u64,
    rng: &mut impl Rng,
) -> Estimate {
    assert!(n_samples >= 1, "need at least one sample");
    let k = f.k();
    let n = g.n();
    if kind != DensityKind::Hom {
        assert!(n >= k, "injective sampling needs n >= k");
    }
    let mut sigma = vec![0usize; k];
    let mut hits = 0u64;
    for _ in 0..n_samples {
        match kind {
            DensityKind::Hom => {
                for slot in sigma.iter_mut() {
                    *slot = rng.random_range(0..n);
                }
            }
            _ => {
                // Uniform injection by rejection; k is tiny so retries are cheap.
                'draw: loop {
                    for slot in sigma.iter_mut() {
                        *slot = rng.random_range(0..n);
                    }
                    for i in 0..k {
                        for j in (i + 1)..k {
                            if sigma[i] == sigma[j] {
                                continue 'draw;
                            }
                        }
                    }
                    break;
                }
            }
        }
        let hit = match kind {
            DensityKind::Hom | DensityKind::Inj => hom_indicator(f, g, &sigma),
            DensityKind::Ind => ind_indicator(f, g, &sigma),
        };
        if hit {
            hits += 1;
        }
    }
    let p = hits as f64 / n_samples as f64;
    Estimate { value: p, n_samples, stderr: (p * (1.0 - p) / n_samples as f64).sqrt() }
}

/// Share of ordered vertex pairs (diagonal cells included) whose entry is
/// exactly `r`; the telescoped difference of consecutive pair-pattern
/// homomorphism densities.
pub fn pair_multiplicity(g: &Multigraph, r: u32) -> BigRational {
    let n = g.n();
    let mut count: u64 = 0;
    for i in 0..n {
        if g.z(i, i) == r {
            count += 1;
        }
        for j in (i + 1)..n {
            if g.z(i, j) == r {
                count += 2;
            }
        }
    }
    BigRational::new(BigInt::from(count), BigInt::from(n as u64 * n as u64))
}

/// Share of vertices carrying exactly `r` loops.
pub fn loop_multiplicity(g: &Multigraph, r: u32) -> BigRational {
    let n = g.n();
    let count = (0..n).filter(|&i| g.z(i, i) == 2 * r).count() as u64;
    BigRational::new(BigInt::from(count), BigInt::from(n as u64))
}

/// Truncated multisubgraph distance between two graphs.
#[derive(Clone, Copy, Debug)]
pub struct MsDistance {
    pub value: f64,
    /// Certified bound on everything the truncation dropped.
    pub truncation_bound: f64,
}

/// Multisubgraph distance: 2^{-i}-weighted homomorphism-density gaps over
/// the fixed pattern enumeration, plus the two exact-multiplicity marginal
/// sums for pairs and loops.
///
/// Patterns with more than three vertices are not evaluated; their weights
/// go into the truncation bound instead, as does the 2^{-i_max} tail and any
/// marginal mass above `r_max`. With `r_max` defaulted to the largest
/// multiplicity present plus one, the marginal tails vanish. Two graphs with
/// identical labeled adjacency short-circuit to exactly (0, 0).
pub fn ms_distance_graphs(
    g1: &Multigraph,
    g2: &Multigraph,
    i_max: u32,
    r_max: Option<u32>,
    budget: u64,
) -> Result<MsDistance, DensityError> {
    if g1 == g2 {
        return Ok(MsDistance { value: 0.0, truncation_bound: 0.0 });
    }
    let r_max = r_max.unwrap_or_else(|| {
        g1.max_cell_multiplicity()
            .max(g2.max_cell_multiplicity())
            .max(g1.max_loop_count())
            .max(g2.max_loop_count())
            + 1
    });
    let half = exact::ratio(1, 2);
    let mut weight = half.clone();
    let mut value = BigRational::zero();
    let mut skipped = BigRational::zero();
    for f in PatternEnumeration::new().take(i_max as usize) {
        if f.k() > 3 {
            skipped += &weight;
        } else {
            let gap = (hom_density(&f, g1, budget)? - hom_density(&f, g2, budget)?).abs();
            value += &weight * gap;
        }
        weight *= &half;
    }
    for r in 0..=r_max {
        value += (pair_multiplicity(g1, r) - pair_multiplicity(g2, r)).abs();
        value += (loop_multiplicity(g1, r) - loop_multiplicity(g2, r)).abs();
    }
    // Marginal mass strictly above r_max, summed for both graphs.
    let mut tail = BigRational::zero();
    for g in [g1, g2] {
        let n = g.n() as u64;
        let mut pair_above: u64 = 0;
        let mut loop_above: u64 = 0;
        for i in 0..g.n() {
            if g.z(i, i) > r_max {
                pair_above += 1;
            }
            if g.z(i, i) / 2 > r_max {
                loop_above += 1;
            }
            for j in (i + 1)..g.n() {
                if g.z(i, j) > r_max {
                    pair_above += 2;
                }
            }
        }
        tail += BigRational::new(BigInt::from(pair_above), BigInt::from(n * n));
        tail += BigRational::new(BigInt::from(loop_above), BigInt::from(n));
    }
    // weight now equals 2^{-i_max - 1}; the dropped pattern tail is
    // Σ_{i > i_max} 2^{-i} = 2^{-i_max}.
    let dropped_patterns = &weight * exact::int(2);
    let bound = dropped_patterns + skipped + tail;
    Ok(MsDistance { value: exact::to_f64(&value), truncation_bound: exact::to_f64(&bound) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> Multigraph {
        Multigraph::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)])
    }

    fn rat(p: i64, q: i64) -> BigRational {
        exact::ratio(p, q)
    }

    #[test]
    fn adjacency_and_degrees() {
        let mut g = Multigraph::empty(2);
        g.add_edge(0, 1);
        assert_eq!(g.z(0, 1), 1);
        assert_eq!(g.z(1, 0), 1);
        assert_eq!(g.degrees(), &[1, 1]);
        g.add_loop(0);
        assert_eq!(g.z(0, 0), 2);
        assert_eq!(g.degrees(), &[3, 1]);
        assert_eq!(g.half_edge_count(), 4);
        assert_eq!(g.edge_entries().len(), 2);
        assert!(g.consistent());
    }

    #[test]
    fn add_then_remove_restores_state() {
        let mut g = Multigraph::from_edge_list(3, &[(0, 1)]);
        let before = g.canonical_key();
        g.add_loop(2);
        g.remove_entry(1);
        assert_eq!(g.canonical_key(), before);
        assert!(g.consistent());
    }

    #[test]
    fn move_half_edge_updates_everything() {
        let mut g = Multigraph::from_edge_list(3, &[(0, 1)]);
        g.move_half_edge(0, 1, 2);
        assert_eq!(g.z(0, 1), 0);
        assert_eq!(g.z(0, 2), 1);
        assert_eq!(g.degrees(), &[1, 0, 1]);
        assert!(g.consistent());
        // Collapse to a loop.
        g.move_half_edge(0, 0, 2);
        assert_eq!(g.z(2, 2), 2);
        assert_eq!(g.degrees(), &[0, 0, 2]);
        assert!(g.consistent());
    }

    #[test]
    fn random_mutation_stress_keeps_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut g = Multigraph::empty(6);
        for step in 0..100_000 {
            match rng.random_range(0..4) {
                0 => g.add_edge(rng.random_range(0..5), 5),
                1 => g.add_loop(rng.random_range(0..6)),
                2 if !g.edge_entries().is_empty() => {
                    let idx = rng.random_range(0..g.edge_entries().len());
                    g.remove_entry(idx);
                }
                3 if !g.edge_entries().is_empty() => {
                    let idx = rng.random_range(0..g.edge_entries().len());
                    g.move_half_edge(idx, rng.random_range(0..2), rng.random_range(0..6));
                }
                _ => g.add_edge(0, 1),
            }
            if step % 20_000 == 0 {
                assert!(g.consistent(), "invariants broken at step {step}");
            }
        }
        assert!(g.consistent());
    }

    #[test]
    fn hom_density_examples() {
        let g = triangle();
        assert_eq!(hom_density(&Pattern::empty(2), &g, 1000).unwrap(), rat(1, 1));
        assert_eq!(hom_density(&Pattern::pair(1), &g, 1000).unwrap(), rat(2, 3));
        assert_eq!(hom_density(&Pattern::pair(2), &g, 1000).unwrap(), rat(0, 1));
    }

    #[test]
    fn inj_density_examples() {
        let g = triangle();
        assert_eq!(inj_density(&Pattern::pair(1), &g, 1000).unwrap(), rat(1, 1));
        assert_eq!(inj_density(&Pattern::empty(4), &g, 1000).unwrap(), rat(0, 1));
        let gap = (inj_density(&Pattern::pair(1), &g, 1000).unwrap()
            - hom_density(&Pattern::pair(1), &g, 1000).unwrap())
        .abs();
        assert_eq!(gap, rat(1, 3));
    }

    #[test]
    fn ind_density_examples() {
        let g = triangle();
        assert_eq!(ind_density(&Pattern::pair(1), &g, 1000).unwrap(), rat(1, 1));
        assert_eq!(ind_density(&Pattern::pair(0), &g, 1000).unwrap(), rat(0, 1));
        assert_eq!(ind_density(&Pattern::empty(4), &g, 1000).unwrap(), rat(0, 1));
    }

    #[test]
    fn ind_density_sees_loops_on_the_diagonal() {
        // One loop at vertex 0, plus an isolated vertex.
        let g = Multigraph::from_edge_list(2, &[(0, 0)]);
        // Pattern pair(0) demands loop-free endpoints: only (1, ·) pairs
        // qualify, and none exist injectively except those touching 0.
        assert_eq!(ind_density(&Pattern::pair(0), &g, 1000).unwrap(), rat(0, 1));
        assert_eq!(ind_density(&Pattern::loops(1), &g, 1000).unwrap(), rat(1, 2));
        assert_eq!(ind_density(&Pattern::loops(0), &g, 1000).unwrap(), rat(1, 2));
    }

    #[test]
    fn budget_errors_are_reported() {
        let g = triangle();
        let err = hom_density(&Pattern::empty(3), &g, 10).unwrap_err();
        assert_eq!(err, DensityError::BudgetExceeded { required: 27, budget: 10 });
    }

    #[test]
    fn inclusion_exclusion_bound_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.random_range(2..=8);
            let mut g = Multigraph::empty(n);
            for _ in 0..rng.random_range(0..12) {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                g.add_entry(i, j);
            }
            for f in [Pattern::pair(1), Pattern::pair(2), Pattern::from_upper(3, &[0, 1, 0, 0, 1, 0])] {
                let k = f.k() as u64;
                let bound = BigRational::new(
                    exact::binomial(k, 2),
                    BigInt::from(n as u64),
                );
                let gap = (inj_density(&f, &g, 10_000).unwrap()
                    - hom_density(&f, &g, 10_000).unwrap())
                .abs();
                assert!(gap <= bound, "bound violated on n={n}");
            }
        }
    }

    #[test]
    fn densities_are_isomorphism_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Multigraph::from_edge_list(5, &[(0, 1), (0, 1), (2, 2), (3, 4), (1, 4)]);
        let mut perm: Vec<usize> = (0..5).collect();
        for _ in 0..10 {
            // Fisher-Yates.
            for i in (1..5).rev() {
                let j = rng.random_range(0..=i);
                perm.swap(i, j);
            }
            let h = g.permuted(&perm);
            for f in [Pattern::pair(1), Pattern::pair(2), Pattern::loops(1), Pattern::empty(2)] {
                assert_eq!(hom_density(&f, &g, 1e6 as u64).unwrap(), hom_density(&f, &h, 1e6 as u64).unwrap());
                assert_eq!(inj_density(&f, &g, 1e6 as u64).unwrap(), inj_density(&f, &h, 1e6 as u64).unwrap());
                assert_eq!(ind_density(&f, &g, 1e6 as u64).unwrap(), ind_density(&f, &h, 1e6 as u64).unwrap());
            }
        }
    }

    #[test]
    fn pair_and_loop_marginals_partition() {
        let g = Multigraph::from_edge_list(4, &[(0, 1), (0, 1), (2, 2), (1, 3)]);
        let mut pair_total = BigRational::zero();
        let mut loop_total = BigRational::zero();
        for r in 0..=g.max_cell_multiplicity() {
            pair_total += pair_multiplicity(&g, r);
        }
        for r in 0..=g.max_loop_count() {
            loop_total += loop_multiplicity(&g, r);
        }
        assert_eq!(pair_total, BigRational::one());
        assert_eq!(loop_total, BigRational::one());
        // Telescoping identity against hom densities of pair patterns.
        for r in 0..4 {
            let lhs = pair_multiplicity(&g, r);
            let rhs = hom_density(&Pattern::pair(r), &g, 1000).unwrap()
                - hom_density(&Pattern::pair(r + 1), &g, 1000).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn sampled_density_matches_exact_and_is_constant_where_constant() {
        let g = triangle();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let est = sampled_density(&Pattern::empty(2), &g, DensityKind::Hom, 100, &mut rng);
        assert_eq!(est.value, 1.0);
        assert_eq!(est.stderr, 0.0);
        let est = sampled_density(&Pattern::pair(1), &g, DensityKind::Ind, 10_000, &mut rng);
        assert_eq!(est.value, 1.0);
        let est = sampled_density(&Pattern::pair(1), &g, DensityKind::Hom, 100_000, &mut rng);
        assert!((est.value - 2.0 / 3.0).abs() <= 4.0 * est.stderr, "value {} stderr {}", est.value, est.stderr);
    }

    #[test]
    fn sampled_density_is_unbiased() {
        let g = Multigraph::from_edge_list(5, &[(0, 1), (1, 2), (2, 2), (3, 4), (0, 4), (1, 2)]);
        let exact_value = exact::to_f64(&hom_density(&Pattern::pair(1), &g, 1e6 as u64).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let reps = 200;
        let n = 1000;
        let mut sum = 0.0;
        let mut var_sum = 0.0;
        for _ in 0..reps {
            let est = sampled_density(&Pattern::pair(1), &g, DensityKind::Hom, n, &mut rng);
            sum += est.value;
            var_sum += est.stderr * est.stderr;
        }
        let mean = sum / reps as f64;
        let combined = (var_sum / (reps as f64 * reps as f64)).sqrt();
        assert!(
            (mean - exact_value).abs() <= 5.0 * combined,
            "mean {mean} vs exact {exact_value} (combined stderr {combined})"
        );
    }

    #[test]
    fn enumeration_prefix_is_stable() {
        let got: Vec<(usize, u32)> =
            PatternEnumeration::new().take(21).map(|f| (f.k(), f.weight())).collect();
        let expect = vec![
            (1, 0),
            (1, 1),
            (2, 0),
            (1, 2),
            (2, 1),
            (2, 1),
            (2, 1),
            (3, 0),
            (1, 3),
            (2, 2),
            (2, 2),
            (2, 2),
            (2, 2),
            (2, 2),
            (2, 2),
            (3, 1),
            (3, 1),
            (3, 1),
            (3, 1),
            (3, 1),
            (3, 1),
        ];
        assert_eq!(got, expect);
        // The first two-vertex weight-1 block starts with the plain edge:
        // lexicographically (0,1,0) precedes (2,0,0) and (0,0,2)? It does
        // not: (0,0,2) < (0,1,0) < (2,0,0). Pin the exact matrices.
        let block: Vec<Pattern> = PatternEnumeration::new().skip(4).take(3).collect();
        assert_eq!(block[0], Pattern::from_upper(2, &[0, 0, 2]));
        assert_eq!(block[1], Pattern::from_upper(2, &[0, 1, 0]));
        assert_eq!(block[2], Pattern::from_upper(2, &[2, 0, 0]));
    }

    #[test]
    fn ms_distance_identical_graphs_is_exactly_zero() {
        let g = Multigraph::from_edge_list(3, &[(0, 1), (2, 2)]);
        let d = ms_distance_graphs(&g, &g.clone(), 64, None, 1e6 as u64).unwrap();
        assert_eq!(d.value, 0.0);
        assert_eq!(d.truncation_bound, 0.0);
    }

    #[test]
    fn ms_distance_is_symmetric() {
        let g1 = Multigraph::from_edge_list(3, &[(0, 1), (1, 2), (1, 2)]);
        let g2 = Multigraph::from_edge_list(2, &[(0, 0)]);
        let a = ms_distance_graphs(&g1, &g2, 32, None, 1e6 as u64).unwrap();
        let b = ms_distance_graphs(&g2, &g1, 32, None, 1e6 as u64).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.truncation_bound, b.truncation_bound);
    }

    #[test]
    fn erased_examples() {
        let g = Multigraph::from_edge_list(2, &[(0, 1), (0, 1), (0, 0)]);
        let e = g.erased();
        assert_eq!(e.z(0, 1), 1);
        assert_eq!(e.z(0, 0), 0);
        assert!(e.is_simple());
        assert_eq!(e.erased(), e);
        let simple = triangle();
        assert_eq!(simple.erased(), simple);
    }

    #[test]
    fn text_format_round_trip() {
        let g = Multigraph::from_edge_list(3, &[(0, 1), (2, 2), (0, 2)]);
        let text = g.to_text();
        let parsed = Multigraph::parse_text(&text).unwrap();
        assert_eq!(parsed, g);
        assert_eq!(text.lines().next(), Some("3"));
    }

    #[test]
    fn text_format_reports_line_numbers() {
        let err = Multigraph::parse_text("3\n1 2\n9 1\n").unwrap_err();
        match err {
            TextFormatError::Malformed { line, .. } => assert_eq!(line, 3),
        }
        assert!(Multigraph::parse_text("").is_err());
        assert!(Multigraph::parse_text("2\n1\n").is_err());
        assert!(Multigraph::parse_text("x\n").is_err());
    }
}
