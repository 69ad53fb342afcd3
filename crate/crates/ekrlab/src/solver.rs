//! The brute-force oracle: intersection graph over a universe, exact
//! maximum intersecting family via branch-and-bound maximum clique with
//! greedy-coloring upper bounds, maximum-family enumeration, and
//! extremal-structure classification.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::bitset::Bits;
use crate::error::{EkrError, Result};
use crate::families::{is_trivial, Family};
use crate::intersection::{intersection_size, IntersectionSpec};
use crate::objects::{enumerate_universe, universe_size, CombObject, Params};

/// Resource limits for graph construction and search.
#[derive(Debug, Clone)]
pub struct Caps {
    pub max_vertices: usize,
    pub max_nodes: u64,
    pub max_seconds: f64,
    /// Maximum number of maximum families to enumerate before truncating.
    pub enum_cap: usize,
    pub parallel: bool,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_vertices: 5_000,
            max_nodes: 100_000_000,
            max_seconds: 60.0,
            enum_cap: 100_000,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

/// Universe objects in canonical order plus packed adjacency: u ~ v iff
/// their intersection size meets the threshold.
#[derive(Debug)]
pub struct IntersectionGraph {
    pub spec: IntersectionSpec,
    pub params: Params,
    pub vertices: Vec<CombObject>,
    adj: Vec<Bits>,
}

impl IntersectionGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    AllMaximumTrivial,
    NontrivialMaximumExists,
    Truncated,
}

impl std::fmt::Display for Structure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Structure::AllMaximumTrivial => "all-maximum-trivial",
            Structure::NontrivialMaximumExists => "nontrivial-maximum-exists",
            Structure::Truncated => "truncated",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyCount {
    Exact(u64),
    AtLeast(u64),
}

impl std::fmt::Display for FamilyCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyCount::Exact(c) => write!(f, "{c}"),
            FamilyCount::AtLeast(c) => write!(f, ">= {c}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    /// Exact maximum family size, or the best lower bound when truncated.
    pub max_size: usize,
    /// Lexicographically least maximum family under vertex order (best
    /// effort when truncated).
    pub witness: Family,
    pub structure: Option<Structure>,
    pub maximum_family_count: Option<FamilyCount>,
    pub elapsed: Duration,
    pub nodes_explored: u64,
    pub truncated: bool,
}

pub fn build_graph(spec: IntersectionSpec, p: Params, caps: &Caps) -> Result<IntersectionGraph> {
    let size = universe_size(spec.kind, p)?;
    if size > caps.max_vertices as u64 {
        return Err(EkrError::Resource(format!(
            "universe has {size} objects, cap is {}",
            caps.max_vertices
        )));
    }
    let vertices = enumerate_universe(spec.kind, p)?;
    let adj = build_rows(spec, &vertices, caps.parallel)?;
    Ok(IntersectionGraph {
        spec,
        params: p,
        vertices,
        adj,
    })
}

fn build_row(spec: IntersectionSpec, vertices: &[CombObject], u: usize) -> Result<Bits> {
    let mut row = Bits::empty(vertices.len());
    for v in 0..vertices.len() {
        if v != u && intersection_size(spec, &vertices[u], &vertices[v])? >= spec.t {
            row.insert(v);
        }
    }
    Ok(row)
}

#[cfg(feature = "parallel")]
fn build_rows(spec: IntersectionSpec, vertices: &[CombObject], parallel: bool) -> Result<Vec<Bits>> {
    use rayon::prelude::*;
    if parallel {
        (0..vertices.len())
            .into_par_iter()
            .map(|u| build_row(spec, vertices, u))
            .collect()
    } else {
        (0..vertices.len())
            .map(|u| build_row(spec, vertices, u))
            .collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn build_rows(spec: IntersectionSpec, vertices: &[CombObject], _parallel: bool) -> Result<Vec<Bits>> {
    (0..vertices.len())
        .map(|u| build_row(spec, vertices, u))
        .collect()
}

struct Shared<'g> {
    g: &'g IntersectionGraph,
    nodes: AtomicU64,
    node_cap: u64,
    deadline: Instant,
    truncated: AtomicBool,
    best: AtomicUsize,
    best_clique: Mutex<Vec<usize>>,
}

impl<'g> Shared<'g> {
    fn new(g: &'g IntersectionGraph, caps: &Caps, start: Instant) -> Self {
        Shared {
            g,
            nodes: AtomicU64::new(0),
            node_cap: caps.max_nodes,
            deadline: start + Duration::from_secs_f64(caps.max_seconds),
            truncated: AtomicBool::new(false),
            best: AtomicUsize::new(0),
            best_clique: Mutex::new(Vec::new()),
        }
    }

    /// Account one search node; false when a budget has run out.
    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed);
        if n >= self.node_cap || (n % 1024 == 0 && Instant::now() > self.deadline) {
            self.truncated.store(true, Ordering::Relaxed);
            return false;
        }
        !self.truncated.load(Ordering::Relaxed)
    }

    fn offer(&self, clique: &[usize]) {
        self.best.fetch_max(clique.len(), Ordering::Relaxed);
        let mut guard = self.best_clique.lock().unwrap();
        if clique.len() > guard.len() {
            *guard = clique.to_vec();
        }
    }
}

/// Greedy coloring of the candidate set; returns (vertex, color) with
/// colors ascending from 1. The largest color is an upper bound on the
/// clique number of the induced subgraph.
fn color_order(g: &IntersectionGraph, p: &Bits) -> Vec<(usize, usize)> {
    let mut classes: Vec<Bits> = Vec::new();
    let mut assignment: Vec<(usize, usize)> = Vec::new();
    for v in p.iter() {
        let mut color = classes.len();
        for (ci, class) in classes.iter().enumerate() {
            let mut overlap = class.clone();
            overlap.intersect_with(&g.adj[v]);
            if overlap.is_empty() {
                color = ci;
                break;
            }
        }
        if color == classes.len() {
            classes.push(Bits::empty(g.vertex_count()));
        }
        classes[color].insert(v);
        assignment.push((v, color + 1));
    }
    assignment.sort_by_key(|&(v, c)| (c, v));
    assignment
}

fn expand(sh: &Shared, r: &mut Vec<usize>, p: Bits) {
    if !sh.tick() {
        return;
    }
    if p.is_empty() {
        sh.offer(r);
        return;
    }
    let order = color_order(sh.g, &p);
    let mut p = p;
    for &(v, c) in order.iter().rev() {
        if sh.truncated.load(Ordering::Relaxed) {
            return;
        }
        if r.len() + c <= sh.best.load(Ordering::Relaxed) {
            return;
        }
        p.remove(v);
        let mut np = p.clone();
        np.intersect_with(&sh.g.adj[v]);
        r.push(v);
        expand(sh, r, np);
        r.pop();
    }
}

/// Seed the search with a quick greedy clique so coloring bounds prune
/// from the start.
fn greedy_clique(g: &IntersectionGraph) -> Vec<usize> {
    let mut cand = Bits::full(g.vertex_count());
    let mut clique = Vec::new();
    loop {
        let mut pick = None;
        let mut best_deg = 0usize;
        for v in cand.iter() {
            let mut nb = cand.clone();
            nb.intersect_with(&g.adj[v]);
            let d = nb.count();
            if pick.is_none() || d > best_deg {
                pick = Some(v);
                best_deg = d;
            }
        }
        match pick {
            Some(v) => {
                clique.push(v);
                cand.intersect_with(&g.adj[v]);
            }
            None => return clique,
        }
    }
}

fn search_max(g: &IntersectionGraph, caps: &Caps, start: Instant) -> (Vec<usize>, u64, bool) {
    let sh = Shared::new(g, caps, start);
    let seed = greedy_clique(g);
    sh.offer(&seed);

    let full = Bits::full(g.vertex_count());
    if caps.parallel {
        root_parallel(&sh, &full);
    } else {
        expand(&sh, &mut Vec::new(), full);
    }
    let witness = sh.best_clique.into_inner().unwrap();
    (
        witness,
        sh.nodes.into_inner(),
        sh.truncated.into_inner(),
    )
}

#[cfg(feature = "parallel")]
fn root_parallel(sh: &Shared, full: &Bits) {
    use rayon::prelude::*;
    let order = color_order(sh.g, full);
    // branch i sees exactly the vertices earlier in color order, so the
    // root subproblems are independent and can run in any order
    (0..order.len()).into_par_iter().rev().for_each(|i| {
        let (v, c) = order[i];
        if sh.truncated.load(Ordering::Relaxed) || c <= sh.best.load(Ordering::Relaxed) {
            return;
        }
        let mut p = Bits::empty(sh.g.vertex_count());
        for &(u, _) in &order[..i] {
            p.insert(u);
        }
        p.intersect_with(&sh.g.adj[v]);
        expand(sh, &mut vec![v], p);
    });
}

#[cfg(not(feature = "parallel"))]
fn root_parallel(sh: &Shared, full: &Bits) {
    expand(sh, &mut Vec::new(), full.clone());
}

/// True iff the candidate set contains a clique of `target - r_len` more
/// vertices.
fn exists_clique(sh: &Shared, r_len: usize, p: Bits, target: usize) -> bool {
    if r_len >= target {
        return true;
    }
    if !sh.tick() || r_len + p.count() < target {
        return false;
    }
    let order = color_order(sh.g, &p);
    let mut p = p;
    for &(v, c) in order.iter().rev() {
        if r_len + c < target {
            return false;
        }
        p.remove(v);
        let mut np = p.clone();
        np.intersect_with(&sh.g.adj[v]);
        if exists_clique(sh, r_len + 1, np, target) {
            return true;
        }
    }
    false
}

/// Replace the stored witness by the lexicographically least maximum
/// clique, found by greedily forcing the smallest viable vertex.
fn lex_least_witness(
    g: &IntersectionGraph,
    caps: &Caps,
    start: Instant,
    max_size: usize,
) -> (Option<Vec<usize>>, u64) {
    let sh = Shared::new(g, caps, start);
    sh.best.store(max_size, Ordering::Relaxed);
    let mut chosen: Vec<usize> = Vec::new();
    let mut cand = Bits::full(g.vertex_count());
    while chosen.len() < max_size {
        let mut advanced = false;
        for v in cand.iter().collect::<Vec<_>>() {
            let mut np = cand.clone();
            np.intersect_with(&g.adj[v]);
            np.truncate_through(v);
            if exists_clique(&sh, chosen.len() + 1, np.clone(), max_size) {
                chosen.push(v);
                cand = np;
                advanced = true;
                break;
            }
            if sh.truncated.load(Ordering::Relaxed) {
                return (None, sh.nodes.load(Ordering::Relaxed));
            }
        }
        if !advanced {
            return (None, sh.nodes.load(Ordering::Relaxed));
        }
    }
    let nodes = sh.nodes.load(Ordering::Relaxed);
    (Some(chosen), nodes)
}

fn family_from(g: &IntersectionGraph, indices: &[usize]) -> Result<Family> {
    Family::new(
        g.spec.kind,
        g.params,
        indices.iter().map(|&i| g.vertices[i].clone()).collect(),
    )
}

/// Exact maximum intersecting family with a deterministic witness.
pub fn max_intersecting_family(g: &IntersectionGraph, caps: &Caps) -> Result<SearchResult> {
    let start = Instant::now();
    let (mut witness, mut nodes, mut truncated) = search_max(g, caps, start);
    let max_size = witness.len();
    if !truncated {
        // second pass pins the witness to the canonical least one,
        // independent of worker count and search order
        let (lex, lex_nodes) = lex_least_witness(g, caps, start, max_size);
        nodes += lex_nodes;
        match lex {
            Some(w) => witness = w,
            None => truncated = true,
        }
    }
    Ok(SearchResult {
        max_size,
        witness: family_from(g, &witness)?,
        structure: if truncated {
            Some(Structure::Truncated)
        } else {
            None
        },
        maximum_family_count: None,
        elapsed: start.elapsed(),
        nodes_explored: nodes,
        truncated,
    })
}

/// All maximum families in canonical order, up to `cap`; the flag reports
/// whether the cap or a budget cut the enumeration short.
pub fn enumerate_maximum_families(
    g: &IntersectionGraph,
    cap: usize,
    caps: &Caps,
) -> Result<(Vec<Family>, bool)> {
    let start = Instant::now();
    let (witness, _, truncated) = search_max(g, caps, start);
    if truncated {
        return Ok((Vec::new(), true));
    }
    let max_size = witness.len();
    let sh = Shared::new(g, caps, start);
    let mut out = Vec::new();
    let mut r = Vec::new();
    let hit_budget = !enum_rec(
        &sh,
        &mut r,
        Bits::full(g.vertex_count()),
        max_size,
        cap,
        &mut out,
    );
    let families = out
        .iter()
        .map(|idx| family_from(g, idx))
        .collect::<Result<Vec<_>>>()?;
    Ok((families, hit_budget))
}

/// Returns false when the cap or a budget stopped the enumeration.
fn enum_rec(
    sh: &Shared,
    r: &mut Vec<usize>,
    p: Bits,
    max_size: usize,
    cap: usize,
    out: &mut Vec<Vec<usize>>,
) -> bool {
    if r.len() == max_size {
        out.push(r.clone());
        return out.len() < cap;
    }
    if !sh.tick() {
        return false;
    }
    if r.len() + p.count() < max_size {
        return true;
    }
    let order = color_order(sh.g, &p);
    if r.len() + order.last().map_or(0, |&(_, c)| c) < max_size {
        return true;
    }
    // ascending vertex order keeps output canonical
    for v in p.iter().collect::<Vec<_>>() {
        let mut np = p.clone();
        np.intersect_with(&sh.g.adj[v]);
        np.truncate_through(v);
        r.push(v);
        let keep_going = enum_rec(sh, r, np, max_size, cap, out);
        r.pop();
        if !keep_going {
            return false;
        }
    }
    true
}

/// Runs the oracle and classifies whether every maximum family is
/// anchored.
pub fn extremal_structure(spec: IntersectionSpec, p: Params, caps: &Caps) -> Result<SearchResult> {
    let start = Instant::now();
    let g = build_graph(spec, p, caps)?;
    let mut result = max_intersecting_family(&g, caps)?;
    if result.truncated {
        result.structure = Some(Structure::Truncated);
        result.elapsed = start.elapsed();
        return Ok(result);
    }
    let (families, enum_truncated) = enumerate_maximum_families(&g, caps.enum_cap, caps)?;
    let mut all_trivial = true;
    for fam in &families {
        if is_trivial(spec, fam)?.is_none() {
            all_trivial = false;
            break;
        }
    }
    result.structure = Some(if !all_trivial {
        Structure::NontrivialMaximumExists
    } else if enum_truncated {
        Structure::Truncated
    } else {
        Structure::AllMaximumTrivial
    });
    result.maximum_family_count = Some(if enum_truncated {
        FamilyCount::AtLeast(families.len() as u64)
    } else {
        FamilyCount::Exact(families.len() as u64)
    });
    result.truncated = result.truncated || (enum_truncated && all_trivial);
    result.elapsed = start.elapsed();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intersection::{verify_family, Mode};
    use crate::objects::Kind;

    fn p(n: u32, k: u32) -> Params {
        Params::new(n, k).unwrap()
    }

    fn spec(kind: Kind, mode: Mode, t: u32) -> IntersectionSpec {
        IntersectionSpec::new(kind, mode, t).unwrap()
    }

    fn solve(kind: Kind, mode: Mode, t: u32, n: u32, k: u32) -> SearchResult {
        let caps = Caps::default();
        let g = build_graph(spec(kind, mode, t), p(n, k), &caps).unwrap();
        max_intersecting_family(&g, &caps).unwrap()
    }

    #[test]
    fn graph_examples() {
        let caps = Caps::default();
        let g = build_graph(spec(Kind::Set, Mode::Standard, 1), p(4, 2), &caps).unwrap();
        assert_eq!(g.vertex_count(), 6);
        // {1,2} ~ {1,3}, not {3,4}
        let i12 = g.vertices.iter().position(|v| v.entries() == [1, 2]).unwrap();
        let i13 = g.vertices.iter().position(|v| v.entries() == [1, 3]).unwrap();
        let i34 = g.vertices.iter().position(|v| v.entries() == [3, 4]).unwrap();
        assert!(g.adjacent(i12, i13));
        assert!(!g.adjacent(i12, i34));

        let g = build_graph(spec(Kind::Permutation, Mode::Hamming, 1), p(3, 2), &caps).unwrap();
        assert_eq!(g.vertex_count(), 6);
        for v in 0..6 {
            assert_eq!(g.degree(v), 2, "vertex {}", g.vertices[v]);
        }

        let g = build_graph(spec(Kind::Word, Mode::Standard, 1), p(2, 1), &caps).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.degree(0), 0);
        assert_eq!(g.degree(1), 0);
    }

    #[test]
    fn vertex_cap_is_a_resource_error() {
        let caps = Caps {
            max_vertices: 10,
            ..Caps::default()
        };
        let err = build_graph(spec(Kind::Word, Mode::Standard, 1), p(4, 3), &caps).unwrap_err();
        assert!(matches!(err, EkrError::Resource(_)), "{err}");
        assert!(err.to_string().contains("64"));
    }

    #[test]
    fn oracle_examples() {
        let r = solve(Kind::Set, Mode::Standard, 1, 6, 3);
        assert_eq!(r.max_size, 10);
        let r = solve(Kind::Word, Mode::Standard, 1, 4, 2);
        assert_eq!(r.max_size, 7);
        let r = solve(Kind::Permutation, Mode::Hamming, 1, 3, 2);
        assert_eq!(r.max_size, 2);
    }

    #[test]
    fn witness_is_valid_and_lex_least() {
        let caps = Caps::default();
        let s = spec(Kind::Set, Mode::Standard, 1);
        let g = build_graph(s, p(5, 2), &caps).unwrap();
        let r = max_intersecting_family(&g, &caps).unwrap();
        assert_eq!(r.max_size, 4);
        assert!(verify_family(s, &r.witness).unwrap().ok);
        // lex-least maximum family on C(5,2) vertices is the star at 1
        let entries: Vec<_> = r.witness.members().iter().map(|m| m.entries().to_vec()).collect();
        assert_eq!(entries, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![1, 5]]);
    }

    #[test]
    fn determinism_across_worker_modes() {
        for (kind, mode, n, k) in [
            (Kind::Set, Mode::Standard, 6, 3),
            (Kind::Permutation, Mode::Hamming, 4, 2),
            (Kind::Word, Mode::Standard, 4, 2),
            (Kind::Multiset, Mode::Standard, 5, 2),
        ] {
            let seq = Caps {
                parallel: false,
                ..Caps::default()
            };
            let par = Caps::default();
            let s = spec(kind, mode, 1);
            let g1 = build_graph(s, p(n, k), &seq).unwrap();
            let g2 = build_graph(s, p(n, k), &par).unwrap();
            let r1 = max_intersecting_family(&g1, &seq).unwrap();
            let r2 = max_intersecting_family(&g2, &par).unwrap();
            assert_eq!(r1.max_size, r2.max_size);
            assert_eq!(r1.witness, r2.witness, "{kind} {mode:?} n={n} k={k}");
        }
    }

    #[test]
    fn enumeration_examples() {
        let caps = Caps::default();
        let s = spec(Kind::Set, Mode::Standard, 1);

        let g = build_graph(s, p(5, 2), &caps).unwrap();
        let (fams, truncated) = enumerate_maximum_families(&g, 1000, &caps).unwrap();
        assert!(!truncated);
        assert_eq!(fams.len(), 5);
        for f in &fams {
            assert!(is_trivial(s, f).unwrap().is_some());
        }

        let g = build_graph(s, p(4, 2), &caps).unwrap();
        let (fams, _) = enumerate_maximum_families(&g, 1000, &caps).unwrap();
        let triangle: Vec<_> = [[1, 2], [1, 3], [2, 3]]
            .iter()
            .map(|e| CombObject::new(Kind::Set, e.to_vec(), p(4, 2)).unwrap())
            .collect();
        assert!(fams.iter().any(|f| f.members() == &triangle[..]));
    }

    #[test]
    fn enumeration_contains_search_witness() {
        let caps = Caps::default();
        for (kind, mode, n, k) in [
            (Kind::Set, Mode::Standard, 5, 2),
            (Kind::Word, Mode::Hamming, 3, 2),
            (Kind::Multiset, Mode::Standard, 4, 2),
        ] {
            let s = spec(kind, mode, 1);
            let g = build_graph(s, p(n, k), &caps).unwrap();
            let r = max_intersecting_family(&g, &caps).unwrap();
            let (fams, _) = enumerate_maximum_families(&g, 100_000, &caps).unwrap();
            assert!(fams.contains(&r.witness), "{kind} {mode:?}");
        }
    }

    #[test]
    fn extremal_structure_examples() {
        let caps = Caps::default();
        let r = extremal_structure(spec(Kind::Set, Mode::Standard, 1), p(7, 3), &caps).unwrap();
        assert_eq!(r.structure, Some(Structure::AllMaximumTrivial));
        assert_eq!(r.maximum_family_count, Some(FamilyCount::Exact(7)));

        let r = extremal_structure(spec(Kind::Set, Mode::Standard, 1), p(6, 3), &caps).unwrap();
        assert_eq!(r.structure, Some(Structure::NontrivialMaximumExists));

        let r =
            extremal_structure(spec(Kind::Permutation, Mode::Hamming, 1), p(3, 3), &caps).unwrap();
        assert!(r.structure.is_some());
        assert_eq!(r.max_size, 2); // (n-1)!/(n-k)! = 2
    }

    #[test]
    fn node_budget_truncates() {
        let caps = Caps {
            max_nodes: 2,
            ..Caps::default()
        };
        let g = build_graph(spec(Kind::Set, Mode::Standard, 1), p(7, 3), &caps).unwrap();
        let r = max_intersecting_family(&g, &caps).unwrap();
        assert!(r.truncated);
        // the greedy seed is still a valid lower bound
        assert!(r.max_size >= 1);
        assert!(verify_family(g.spec, &r.witness).unwrap().ok);
    }
}
