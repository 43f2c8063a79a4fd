//! Backtracking search for avoiding colorings.
//!
//! Edges are assigned colors in colex rank order. Constraint state is
//! tracked incrementally: one counter per (subset, color) pair for the
//! monochromatic targets, one assignment counter per (r+1)-subset for the
//! rainbow check. The serial engine is the deterministic reference; the
//! sharded engine splits the tree at a fixed prefix depth and agrees with
//! it on which witness is found.

use rayon::prelude::*;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::certificate::AvoidList;
use crate::colex::{binomial, subsets, BinomialTable};
use crate::error::{Error, Result};
use crate::hypergraph::ColoredCompleteHypergraph;

/// Hard cap on the number of hyperedges the exhaustive engine accepts.
pub const EDGE_CAP: usize = 64;

/// Depth (in edges) at which the parallel engine splits the tree.
const SHARD_DEPTH: usize = 3;

/// One search instance: find a t-coloring of the complete r-uniform
/// hypergraph on n vertices avoiding pattern i monochromatically in color i,
/// and free of rainbow simplices when `gallai_mode` is set.
#[derive(Clone, Debug)]
pub struct SearchProblem {
    pub n: usize,
    pub r: usize,
    pub t: u16,
    pub avoid: AvoidList,
    pub gallai_mode: bool,
    /// Maximum number of search-tree nodes to visit. The parallel engine
    /// applies this per shard.
    pub node_budget: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Found(ColoredCompleteHypergraph),
    ExhaustedNone,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub nodes_visited: u64,
}

/// Serial reference engine. Node counts are deterministic.
pub fn search_witness(p: &SearchProblem) -> Result<SearchOutcome> {
    let prep = Prepared::build(p)?;
    let mut engine = Engine::new(&prep, p.node_budget);
    let status = match engine.dfs(0) {
        Dfs::Found => SearchStatus::Found(engine.coloring(&prep)),
        Dfs::Exhausted => SearchStatus::ExhaustedNone,
        Dfs::Budget => SearchStatus::BudgetExceeded,
    };
    Ok(SearchOutcome {
        status,
        nodes_visited: engine.nodes,
    })
}

/// Sharded engine: enumerates the valid colorings of the first few edges,
/// then runs one independent subtree per prefix. Finds the same witness as
/// the serial engine; ExhaustedNone only once every shard has exhausted.
pub fn search_witness_parallel(p: &SearchProblem) -> Result<SearchOutcome> {
    let prep = Prepared::build(p)?;
    let depth = SHARD_DEPTH.min(prep.e_total);
    let mut collector = Engine::new(&prep, p.node_budget);
    let mut prefixes: Vec<Vec<u16>> = Vec::new();
    let enum_status = collector.collect_prefixes(0, depth, &mut prefixes);
    let prefix_nodes = collector.nodes;
    if enum_status == Dfs::Budget {
        return Ok(SearchOutcome {
            status: SearchStatus::BudgetExceeded,
            nodes_visited: prefix_nodes,
        });
    }
    let shard_nodes = AtomicU64::new(0);
    let hit = prefixes.par_iter().find_map_first(|prefix| {
        let mut engine = Engine::new(&prep, p.node_budget);
        for (d, &c) in prefix.iter().enumerate() {
            // Prefixes hold 1-based colors; assign takes the 0-based index.
            let ok = engine.assign(d, usize::from(c) - 1);
            debug_assert!(ok, "prefix was consistent during enumeration");
        }
        let out = match engine.dfs(depth) {
            Dfs::Found => Some(SearchStatus::Found(engine.coloring(&prep))),
            Dfs::Budget => Some(SearchStatus::BudgetExceeded),
            Dfs::Exhausted => None,
        };
        shard_nodes.fetch_add(engine.nodes, Ordering::Relaxed);
        out
    });
    let nodes_visited = prefix_nodes + shard_nodes.load(Ordering::Relaxed);
    let status = match hit {
        Some(s) => s,
        None => SearchStatus::ExhaustedNone,
    };
    Ok(SearchOutcome {
        status,
        nodes_visited,
    })
}

/// Result of an exact-number computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    Exact {
        value: usize,
        /// Witness at order value-1; absent when the value equals r and no
        /// smaller order carries any hyperedge.
        witness: Option<ColoredCompleteHypergraph>,
        witness_nodes: u64,
        exhausted_nodes: u64,
    },
    Indeterminate {
        reason: String,
    },
}

/// Walk n upward from r until the search exhausts; that order is the exact
/// Ramsey (or Gallai-Ramsey) number for the avoid list. Budget and capacity
/// interruptions are reported as Indeterminate, never as a value.
pub fn exact_number(
    r: usize,
    t: u16,
    avoid: &AvoidList,
    gallai_mode: bool,
    n_cap: usize,
    node_budget: u64,
) -> Result<ExactOutcome> {
    if avoid.len() != usize::from(t) {
        return Err(Error::AvoidLength {
            t,
            got: avoid.len(),
        });
    }
    for pat in avoid.patterns() {
        pat.validate_for(r)?;
    }
    let mut witness = None;
    let mut witness_nodes = 0;
    for n in r..=n_cap {
        if binomial(n, r) > EDGE_CAP {
            return Ok(ExactOutcome::Indeterminate {
                reason: format!("order {n} exceeds the {EDGE_CAP}-edge engine cap"),
            });
        }
        let p = SearchProblem {
            n,
            r,
            t,
            avoid: avoid.clone(),
            gallai_mode,
            node_budget,
        };
        let out = search_witness(&p)?;
        match out.status {
            SearchStatus::Found(c) => {
                witness = Some(c);
                witness_nodes = out.nodes_visited;
            }
            SearchStatus::ExhaustedNone => {
                return Ok(ExactOutcome::Exact {
                    value: n,
                    witness,
                    witness_nodes,
                    exhausted_nodes: out.nodes_visited,
                });
            }
            SearchStatus::BudgetExceeded => {
                return Ok(ExactOutcome::Indeterminate {
                    reason: format!("node budget exhausted at order {n}"),
                });
            }
        }
    }
    Ok(ExactOutcome::Indeterminate {
        reason: format!("no exhaustion up to the order cap {n_cap}"),
    })
}

/// Static tables shared by every engine run on one problem.
struct Prepared {
    n: usize,
    r: usize,
    t: usize,
    e_total: usize,
    /// Edges of color c needed inside one of its subsets to form the target.
    thresholds: Vec<u32>,
    /// incidence[c][e] lists the target-subset indices of color c containing
    /// edge e.
    incidence: Vec<Vec<Vec<u32>>>,
    counter_len: Vec<usize>,
    /// Color classes with identical avoid patterns, each listed ascending.
    class_members: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    /// simplex_edges[s] holds the r+1 facet edge ranks of (r+1)-subset s;
    /// empty when the rainbow check is off.
    simplex_edges: Vec<[u32; 8]>,
    simplex_incidence: Vec<Vec<u32>>,
}

impl Prepared {
    fn build(p: &SearchProblem) -> Result<Self> {
        let (n, r, t) = (p.n, p.r, usize::from(p.t));
        if r < 2 || n < r {
            return Err(Error::BadDimensions { n, r });
        }
        if t == 0 {
            return Err(Error::EmptyPalette);
        }
        if p.avoid.len() != t {
            return Err(Error::AvoidLength {
                t: p.t,
                got: p.avoid.len(),
            });
        }
        for pat in p.avoid.patterns() {
            pat.validate_for(r)?;
        }
        let e_total = binomial(n, r);
        if e_total > EDGE_CAP {
            return Err(Error::TooManyEdges {
                edges: e_total,
                cap: EDGE_CAP,
            });
        }
        let edge_table = BinomialTable::new(n, r + 1);

        // Subset incidence per color. Colors sharing a pattern order could
        // share tables; problem sizes are small enough not to bother.
        let mut thresholds = Vec::with_capacity(t);
        let mut incidence = Vec::with_capacity(t);
        let mut counter_len = Vec::with_capacity(t);
        for pat in p.avoid.patterns() {
            let q = pat.order();
            thresholds.push(pat.required_edges(r) as u32);
            let mut inc = vec![Vec::new(); e_total];
            let mut subsets_seen = 0usize;
            if q <= n {
                for (qi, qs) in subsets(n, q).enumerate() {
                    for combo in subsets(q, r) {
                        let edge: Vec<usize> = combo.iter().map(|&i| qs[i]).collect();
                        inc[edge_table.rank(&edge)].push(qi as u32);
                    }
                    subsets_seen += 1;
                }
            }
            incidence.push(inc);
            counter_len.push(subsets_seen);
        }

        // Group colors by identical pattern for first-use symmetry breaking.
        let mut class_members: Vec<Vec<usize>> = Vec::new();
        let mut class_of = vec![0usize; t];
        let mut reps: Vec<crate::hypergraph::TargetPattern> = Vec::new();
        for (c, pat) in p.avoid.patterns().iter().enumerate() {
            match reps.iter().position(|r0| r0 == pat) {
                Some(k) => {
                    class_of[c] = k;
                    class_members[k].push(c);
                }
                None => {
                    class_of[c] = reps.len();
                    reps.push(*pat);
                    class_members.push(vec![c]);
                }
            }
        }

        // Rainbow tracking only matters with more colors than facets allow;
        // otherwise the incidence rows stay empty and assign skips them.
        let mut simplex_edges = Vec::new();
        let mut simplex_incidence = vec![Vec::new(); e_total];
        if p.gallai_mode && t > r {
            for (si, s) in subsets(n, r + 1).enumerate() {
                let mut facets = [0u32; 8];
                for (j, slot) in facets.iter_mut().enumerate().take(r + 1) {
                    let mut facet: Vec<usize> = s.clone();
                    facet.remove(j);
                    let rank = edge_table.rank(&facet) as u32;
                    *slot = rank;
                    simplex_incidence[rank as usize].push(si as u32);
                }
                simplex_edges.push(facets);
            }
        }

        Ok(Prepared {
            n,
            r,
            t,
            e_total,
            thresholds,
            incidence,
            counter_len,
            class_members,
            class_of,
            simplex_edges,
            simplex_incidence,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dfs {
    Found,
    Exhausted,
    Budget,
}

struct Engine<'a> {
    prep: &'a Prepared,
    colors: Vec<u16>,
    counters: Vec<Vec<u32>>,
    used: Vec<bool>,
    first_use_depth: Vec<usize>,
    simplex_assigned: Vec<u8>,
    nodes: u64,
    budget: u64,
}

impl<'a> Engine<'a> {
    fn new(prep: &'a Prepared, budget: u64) -> Self {
        Engine {
            prep,
            colors: vec![0; prep.e_total],
            counters: prep.counter_len.iter().map(|&l| vec![0; l]).collect(),
            used: vec![false; prep.t],
            first_use_depth: vec![usize::MAX; prep.t],
            simplex_assigned: vec![0; prep.simplex_edges.len()],
            nodes: 0,
            budget,
        }
    }

    fn coloring(&self, prep: &Prepared) -> ColoredCompleteHypergraph {
        ColoredCompleteHypergraph::new(prep.n, prep.r, prep.t as u16, self.colors.clone())
            .expect("engine state is a complete valid coloring")
    }

    /// A color may start a branch if already in use, or if it is the lowest
    /// unused color of its pattern class. Any witness can be renamed within
    /// a class to meet this, so the reduction loses nothing.
    fn allowed(&self, c: usize) -> bool {
        if self.used[c] {
            return true;
        }
        let class = &self.prep.class_members[self.prep.class_of[c]];
        class
            .iter()
            .find(|&&m| !self.used[m])
            .is_some_and(|&m| m == c)
    }

    /// Apply edge d := color c, updating every counter. Returns false when a
    /// forbidden pattern or a rainbow simplex completes; the caller must
    /// still unassign.
    fn assign(&mut self, d: usize, c: usize) -> bool {
        self.colors[d] = (c + 1) as u16;
        if !self.used[c] {
            self.used[c] = true;
            self.first_use_depth[c] = d;
        }
        let mut ok = true;
        for &qi in &self.prep.incidence[c][d] {
            let slot = &mut self.counters[c][qi as usize];
            *slot += 1;
            if *slot >= self.prep.thresholds[c] {
                ok = false;
            }
        }
        for &si in &self.prep.simplex_incidence[d] {
            let slot = &mut self.simplex_assigned[si as usize];
            *slot += 1;
            if usize::from(*slot) == self.prep.r + 1 && self.simplex_is_rainbow(si as usize) {
                ok = false;
            }
        }
        ok
    }

    fn unassign(&mut self, d: usize, c: usize) {
        for &qi in &self.prep.incidence[c][d] {
            self.counters[c][qi as usize] -= 1;
        }
        for &si in &self.prep.simplex_incidence[d] {
            self.simplex_assigned[si as usize] -= 1;
        }
        if self.first_use_depth[c] == d {
            self.used[c] = false;
            self.first_use_depth[c] = usize::MAX;
        }
        self.colors[d] = 0;
    }

    fn simplex_is_rainbow(&self, si: usize) -> bool {
        let facets = &self.prep.simplex_edges[si];
        let k = self.prep.r + 1;
        for a in 0..k {
            for b in a + 1..k {
                if self.colors[facets[a] as usize] == self.colors[facets[b] as usize] {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(&mut self, d: usize) -> Dfs {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Dfs::Budget;
        }
        if d == self.prep.e_total {
            return Dfs::Found;
        }
        for c in 0..self.prep.t {
            if !self.allowed(c) {
                continue;
            }
            if self.assign(d, c) {
                match self.dfs(d + 1) {
                    Dfs::Found => return Dfs::Found,
                    Dfs::Budget => {
                        self.unassign(d, c);
                        return Dfs::Budget;
                    }
                    Dfs::Exhausted => {}
                }
            }
            self.unassign(d, c);
        }
        Dfs::Exhausted
    }

    /// Same traversal as dfs, but stops at `depth` and records each
    /// consistent prefix instead of descending.
    fn collect_prefixes(&mut self, d: usize, depth: usize, out: &mut Vec<Vec<u16>>) -> Dfs {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Dfs::Budget;
        }
        if d == depth {
            out.push(self.colors[..depth].to_vec());
            return Dfs::Exhausted;
        }
        for c in 0..self.prep.t {
            if !self.allowed(c) {
                continue;
            }
            if self.assign(d, c) && self.collect_prefixes(d + 1, depth, out) == Dfs::Budget {
                self.unassign(d, c);
                return Dfs::Budget;
            }
            self.unassign(d, c);
        }
        Dfs::Exhausted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::TargetPattern;
    use crate::verify::verify_witness;

    fn problem(n: usize, r: usize, pats: Vec<TargetPattern>, gallai: bool) -> SearchProblem {
        SearchProblem {
            n,
            r,
            t: pats.len() as u16,
            avoid: AvoidList::new(pats),
            gallai_mode: gallai,
            node_budget: u64::MAX,
        }
    }

    #[test]
    fn single_edge_target_exhausts_immediately() {
        let p = problem(3, 3, vec![TargetPattern::complete(3)], false);
        let out = search_witness(&p).unwrap();
        assert_eq!(out.status, SearchStatus::ExhaustedNone);
        assert!(out.nodes_visited <= 2);
    }

    #[test]
    fn six_vertex_two_color_witness_found_and_verifies() {
        let pats = vec![TargetPattern::minus_one(4), TargetPattern::minus_one(4)];
        let p = problem(6, 3, pats.clone(), false);
        let out = search_witness(&p).unwrap();
        let SearchStatus::Found(c) = out.status else {
            panic!("expected a witness, got {:?}", out.status);
        };
        let report = verify_witness(&c, &AvoidList::new(pats), false).unwrap();
        assert!(report.certified.is_some());
        assert_eq!(report.certified.unwrap().value, 7);
    }

    #[test]
    fn parallel_engine_agrees_with_serial() {
        let pats = vec![TargetPattern::minus_one(4), TargetPattern::minus_one(4)];
        let p = problem(6, 3, pats, false);
        let serial = search_witness(&p).unwrap();
        let parallel = search_witness_parallel(&p).unwrap();
        assert_eq!(serial.status, parallel.status);

        let pats = vec![TargetPattern::complete(3)];
        let p = problem(4, 3, pats, false);
        assert_eq!(
            search_witness_parallel(&p).unwrap().status,
            SearchStatus::ExhaustedNone
        );
    }

    #[test]
    fn budget_interrupts_instead_of_lying() {
        let pats = vec![TargetPattern::minus_one(4), TargetPattern::minus_one(4)];
        let mut p = problem(6, 3, pats, false);
        p.node_budget = 3;
        let out = search_witness(&p).unwrap();
        assert_eq!(out.status, SearchStatus::BudgetExceeded);
        assert_eq!(out.nodes_visited, 4);
    }

    #[test]
    fn rainbow_tracking_changes_the_outcome() {
        // A triangle where each color may cover at most one edge: the only
        // admissible colorings are rainbow, so gallai mode finds nothing.
        let pats = vec![TargetPattern::minus_one(3); 3];
        let free = problem(3, 2, pats.clone(), false);
        let out = search_witness(&free).unwrap();
        match out.status {
            SearchStatus::Found(c) => assert_eq!(c.colors(), &[1, 2, 3]),
            other => panic!("expected a rainbow witness, got {other:?}"),
        }
        let gallai = problem(3, 2, pats, true);
        let out = search_witness(&gallai).unwrap();
        assert_eq!(out.status, SearchStatus::ExhaustedNone);
    }

    #[test]
    fn gallai_witness_verifies_in_gallai_mode() {
        let pats = vec![TargetPattern::complete(4); 4];
        let p = problem(4, 3, pats.clone(), true);
        let out = search_witness(&p).unwrap();
        let SearchStatus::Found(c) = out.status else {
            panic!("some non-rainbow coloring exists");
        };
        assert_eq!(c.colors(), &[1, 1, 1, 2]);
        let report = verify_witness(&c, &AvoidList::new(pats), true).unwrap();
        assert!(report.certified.is_some());
    }

    #[test]
    fn first_use_order_skips_renamed_duplicates() {
        // With two identical targets the first edge may only take color 1.
        let pats = vec![TargetPattern::minus_one(4), TargetPattern::minus_one(4)];
        let p = problem(4, 3, pats, false);
        let out = search_witness(&p).unwrap();
        let SearchStatus::Found(c) = out.status else {
            panic!("expected a witness");
        };
        assert_eq!(c.colors(), &[1, 1, 2, 2]);
    }

    #[test]
    fn mixed_patterns_allow_later_colors_first() {
        // Avoiding a bare hyperedge in color 1 makes color 1 unusable, so
        // the witness must open with color 2.
        let pats = vec![TargetPattern::complete(3), TargetPattern::complete(4)];
        let p = problem(3, 3, pats, false);
        let out = search_witness(&p).unwrap();
        let SearchStatus::Found(c) = out.status else {
            panic!("expected a witness");
        };
        assert_eq!(c.colors(), &[2]);
    }

    #[test]
    fn engine_cap_is_enforced() {
        let p = problem(9, 3, vec![TargetPattern::complete(5)], false);
        assert!(matches!(
            search_witness(&p),
            Err(Error::TooManyEdges { edges: 84, cap: 64 })
        ));
    }

    #[test]
    fn exact_number_for_single_color_k4() {
        let avoid = AvoidList::new(vec![TargetPattern::complete(4)]);
        let out = exact_number(3, 1, &avoid, false, 5, u64::MAX).unwrap();
        let ExactOutcome::Exact { value, witness, .. } = out else {
            panic!("expected exact value, got {out:?}");
        };
        assert_eq!(value, 4);
        assert_eq!(witness.unwrap().order(), 3);
    }

    #[test]
    fn exact_number_at_the_floor_has_no_witness() {
        let avoid = AvoidList::new(vec![TargetPattern::complete(3)]);
        let out = exact_number(3, 1, &avoid, false, 5, u64::MAX).unwrap();
        let ExactOutcome::Exact { value, witness, .. } = out else {
            panic!("expected exact value, got {out:?}");
        };
        assert_eq!(value, 3);
        assert!(witness.is_none());
    }

    #[test]
    fn exact_number_reports_caps_honestly() {
        let avoid = AvoidList::new(vec![
            TargetPattern::minus_one(4),
            TargetPattern::minus_one(4),
        ]);
        let out = exact_number(3, 2, &avoid, false, 4, u64::MAX).unwrap();
        match out {
            ExactOutcome::Indeterminate { reason } => {
                assert!(reason.contains("order cap"), "{reason}");
            }
            other => panic!("expected the order cap to intervene: {other:?}"),
        }

        // K9 never completes below the engine's edge cap, so the walk runs
        // into it at order 9.
        let avoid = AvoidList::new(vec![TargetPattern::complete(9)]);
        let out = exact_number(3, 1, &avoid, false, 20, u64::MAX).unwrap();
        match out {
            ExactOutcome::Indeterminate { reason } => {
                assert!(reason.contains("engine cap"), "{reason}");
            }
            other => panic!("expected the engine cap to intervene: {other:?}"),
        }
    }
}
