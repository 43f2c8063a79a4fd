//! Exhaustive verification of witness colorings.
//!
//! All scans walk subsets in colex rank order and report the first hit, so a
//! returned witness is always the colex-least one. The parallel variants
//! split the rank space into chunks and keep the same answer: rayon's
//! `find_map_first` discards any match that a lower-ranked chunk beats.

use rayon::prelude::*;

use crate::certificate::AvoidList;
use crate::colex::{binomial, next_subset, subsets, unrank_subset, BinomialTable};
use crate::error::{Error, Result};
use crate::hypergraph::{ColoredCompleteHypergraph, Hypergraph, TargetPattern};

/// Largest uniformity the fixed scratch buffers accommodate. Exhaustive
/// scans are hopeless well below this anyway.
const MAX_R: usize = 11;

const CHUNK: usize = 1 << 14;

/// Colex-least (r+1)-subset whose r+1 hyperedges have pairwise distinct
/// colors, if any. With t <= r colors no such simplex can exist and the scan
/// is skipped.
pub fn find_rainbow_simplex(c: &ColoredCompleteHypergraph) -> Option<Vec<usize>> {
    rainbow_scan(c, false)
}

/// Parallel version of [`find_rainbow_simplex`]; same answer, any pool size.
pub fn find_rainbow_simplex_parallel(c: &ColoredCompleteHypergraph) -> Option<Vec<usize>> {
    rainbow_scan(c, true)
}

fn rainbow_scan(c: &ColoredCompleteHypergraph, parallel: bool) -> Option<Vec<usize>> {
    let n = c.order();
    let r = c.uniformity();
    assert!(r < MAX_R, "uniformity beyond scan support");
    if usize::from(c.color_count()) <= r {
        // r+1 facets cannot be pairwise distinct with only r colors.
        return None;
    }
    let table = BinomialTable::new(n, r + 1);
    scan_first(n, r + 1, parallel, move |s| {
        let k = r + 1;
        // Facet j drops s[j]; entries below j keep their position, entries
        // above slide down one, so the rank splits into prefix + suffix sums.
        let mut prefix = [0usize; MAX_R + 2];
        let mut suffix = [0usize; MAX_R + 2];
        for i in 0..k {
            prefix[i + 1] = prefix[i] + table.get(s[i], i + 1);
        }
        for i in (0..k).rev() {
            suffix[i] = suffix[i + 1] + table.get(s[i], i);
        }
        let mut colors = [0u16; MAX_R + 2];
        for j in 0..k {
            colors[j] = c.color_of_rank(prefix[j] + suffix[j + 1]);
        }
        for a in 0..k {
            for b in a + 1..k {
                if colors[a] == colors[b] {
                    return false;
                }
            }
        }
        true
    })
}

/// Colex-least q-subset containing the target pattern in the given color:
/// at least C(q,r) - 1 induced hyperedges of that color for a minus-one
/// target, all C(q,r) for a complete one.
pub fn find_mono_target(
    c: &ColoredCompleteHypergraph,
    color: u16,
    pattern: &TargetPattern,
) -> Result<Option<Vec<usize>>> {
    mono_scan(c, color, pattern, false)
}

/// Parallel version of [`find_mono_target`]; same answer, any pool size.
pub fn find_mono_target_parallel(
    c: &ColoredCompleteHypergraph,
    color: u16,
    pattern: &TargetPattern,
) -> Result<Option<Vec<usize>>> {
    mono_scan(c, color, pattern, true)
}

fn mono_scan(
    c: &ColoredCompleteHypergraph,
    color: u16,
    pattern: &TargetPattern,
    parallel: bool,
) -> Result<Option<Vec<usize>>> {
    let n = c.order();
    let r = c.uniformity();
    assert!(r < MAX_R, "uniformity beyond scan support");
    if color == 0 || color > c.color_count() {
        return Err(Error::ColorOutOfRange {
            color,
            t: c.color_count(),
        });
    }
    pattern.validate_for(r)?;
    let q = pattern.order();
    if q > n {
        return Ok(None);
    }
    let allowed_misses = binomial(q, r) - pattern.required_edges(r);
    // All r-index selections from a q-subset, flattened row-major.
    let combos: Vec<usize> = subsets(q, r).flatten().collect();
    let table = BinomialTable::new(n, r);
    Ok(scan_first(n, q, parallel, move |s| {
        let mut misses = 0;
        let mut edge = [0usize; MAX_R];
        for combo in combos.chunks_exact(r) {
            for (slot, &ci) in edge[..r].iter_mut().zip(combo) {
                *slot = s[ci];
            }
            if c.color_of_rank(table.rank(&edge[..r])) != color {
                misses += 1;
                if misses > allowed_misses {
                    return false;
                }
            }
        }
        true
    }))
}

fn scan_first<F>(n: usize, k: usize, parallel: bool, pred: F) -> Option<Vec<usize>>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    if k > n {
        return None;
    }
    let total = binomial(n, k);
    if !parallel || total <= CHUNK {
        return scan_range(n, k, 0, total, &pred);
    }
    let chunks = total.div_ceil(CHUNK);
    (0..chunks).into_par_iter().find_map_first(|ci| {
        let start = ci * CHUNK;
        let end = total.min(start + CHUNK);
        scan_range(n, k, start, end, &pred)
    })
}

fn scan_range<F>(n: usize, k: usize, start: usize, end: usize, pred: &F) -> Option<Vec<usize>>
where
    F: Fn(&[usize]) -> bool,
{
    let mut cur = unrank_subset(start, k);
    for _ in start..end {
        if pred(&cur) {
            return Some(cur);
        }
        if !next_subset(&mut cur, n) {
            break;
        }
    }
    None
}

/// Exact clique number: the largest vertex set all of whose r-subsets are
/// hyperedges. Sets of fewer than r vertices qualify vacuously, so an
/// edgeless hypergraph scores min(n, r-1).
pub fn clique_number(h: &Hypergraph) -> usize {
    let n = h.order();
    let r = h.uniformity();
    if h.edge_count() == 0 {
        return n.min(r - 1);
    }
    let table = BinomialTable::new(n, r);

    // Branch and bound over a fixed vertex order, processing suffixes from
    // the back; bound[i] is the clique number within verts[i..].
    let mut bound = vec![0usize; n + 1];
    let mut best_global = r - 1;
    for i in (0..n).rev() {
        let cands: Vec<usize> = (i + 1..n).collect();
        let mut clique = vec![i];
        let mut best = best_global;
        extend_clique(h, r, &table, &mut clique, &cands, &bound, &mut best);
        best_global = best_global.max(best);
        bound[i] = best_global;
    }
    best_global
}

fn extend_clique(
    h: &Hypergraph,
    r: usize,
    table: &BinomialTable,
    clique: &mut Vec<usize>,
    cands: &[usize],
    bound: &[usize],
    best: &mut usize,
) {
    *best = (*best).max(clique.len());
    for (pos, &v) in cands.iter().enumerate() {
        if clique.len() + (cands.len() - pos) <= *best {
            return;
        }
        // Candidates are ascending, so the suffix bound at v caps them all.
        if clique.len() + bound[v] <= *best {
            return;
        }
        let next: Vec<usize> = cands[pos + 1..]
            .iter()
            .copied()
            .filter(|&u| joins_clique(h, r, table, clique, v, u))
            .collect();
        clique.push(v);
        extend_clique(h, r, table, clique, &next, bound, best);
        clique.pop();
    }
}

/// Whether u stays compatible once v joins: every r-subset drawn from the
/// current clique plus {v, u} that contains both v and u must be a hyperedge.
/// Subsets not containing v were checked when u entered the candidate set.
#[inline]
fn joins_clique(
    h: &Hypergraph,
    r: usize,
    table: &BinomialTable,
    clique: &[usize],
    v: usize,
    u: usize,
) -> bool {
    if clique.len() + 2 < r {
        return true;
    }
    let mut edge = [0usize; MAX_R];
    let mut pick = [0usize; MAX_R];
    let take = r - 2;
    if take == 0 {
        edge[0] = v.min(u);
        edge[1] = v.max(u);
        return h.contains_rank(table.rank(&edge[..2]));
    }
    for (slot, i) in pick[..take].iter_mut().zip(0..) {
        *slot = i;
    }
    loop {
        let mut m = 0;
        for &pi in &pick[..take] {
            edge[m] = clique[pi];
            m += 1;
        }
        edge[m] = v;
        edge[m + 1] = u;
        edge[..r].sort_unstable();
        if !h.contains_rank(table.rank(&edge[..r])) {
            return false;
        }
        if !next_subset(&mut pick[..take], clique.len()) {
            return true;
        }
    }
}

/// Bound statement a verified witness certifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedBound {
    /// True when the witness was additionally checked rainbow-free, making
    /// this a Gallai-Ramsey statement rather than a plain Ramsey one.
    pub gallai: bool,
    pub uniformity: usize,
    pub targets: Vec<TargetPattern>,
    pub value: u64,
}

impl std::fmt::Display for CertifiedBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = self.targets.iter().map(|p| p.to_string()).collect();
        write!(
            f,
            "{}({};{}) >= {}",
            if self.gallai { "gr" } else { "R" },
            names.join(","),
            self.uniformity,
            self.value
        )
    }
}

/// Outcome of [`verify_witness`]. `certified` is present exactly when every
/// scan came back clean.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    /// True when no rainbow simplex was found; vacuously true when the check
    /// was not requested.
    pub gallai_ok: bool,
    pub rainbow_witness: Option<Vec<usize>>,
    /// Entry i-1 is the offending subset for color i, when one exists.
    pub per_color_findings: Vec<Option<Vec<usize>>>,
    pub certified: Option<CertifiedBound>,
}

/// Run the full scan battery: a rainbow-simplex scan when `gallai_mode` is
/// set, and one monochromatic-target scan per color against the avoid list.
pub fn verify_witness(
    c: &ColoredCompleteHypergraph,
    avoid: &AvoidList,
    gallai_mode: bool,
) -> Result<WitnessReport> {
    verify_impl(c, avoid, gallai_mode, false)
}

/// Parallel version of [`verify_witness`]; identical report, any pool size.
pub fn verify_witness_parallel(
    c: &ColoredCompleteHypergraph,
    avoid: &AvoidList,
    gallai_mode: bool,
) -> Result<WitnessReport> {
    verify_impl(c, avoid, gallai_mode, true)
}

fn verify_impl(
    c: &ColoredCompleteHypergraph,
    avoid: &AvoidList,
    gallai_mode: bool,
    parallel: bool,
) -> Result<WitnessReport> {
    if avoid.len() != usize::from(c.color_count()) {
        return Err(Error::AvoidLength {
            t: c.color_count(),
            got: avoid.len(),
        });
    }
    for p in avoid.patterns() {
        p.validate_for(c.uniformity())?;
    }
    let rainbow_witness = if gallai_mode {
        rainbow_scan(c, parallel)
    } else {
        None
    };
    let mut per_color_findings = Vec::with_capacity(avoid.len());
    for (i, pattern) in avoid.patterns().iter().enumerate() {
        per_color_findings.push(mono_scan(c, (i + 1) as u16, pattern, parallel)?);
    }
    let gallai_ok = rainbow_witness.is_none();
    let clean = gallai_ok && per_color_findings.iter().all(Option::is_none);
    let certified = clean.then(|| CertifiedBound {
        gallai: gallai_mode,
        uniformity: c.uniformity(),
        targets: avoid.patterns().to_vec(),
        value: c.order() as u64 + 1,
    });
    Ok(WitnessReport {
        gallai_ok,
        rainbow_witness,
        per_color_findings,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Independent recount: how many r-subsets of `subset` have this color.
    fn count_in_color(c: &ColoredCompleteHypergraph, subset: &[usize], color: u16) -> usize {
        subsets(subset.len(), c.uniformity())
            .filter(|combo| {
                let edge: Vec<usize> = combo.iter().map(|&i| subset[i]).collect();
                c.color_of(&edge).unwrap() == color
            })
            .count()
    }

    /// Oracle for the mono scan: first q-subset (in colex order, generated
    /// and ordered independently) meeting the threshold.
    fn mono_oracle(
        c: &ColoredCompleteHypergraph,
        color: u16,
        pattern: &TargetPattern,
    ) -> Option<Vec<usize>> {
        let q = pattern.order();
        if q > c.order() {
            return None;
        }
        let needed = pattern.required_edges(c.uniformity());
        subsets(c.order(), q).find(|s| count_in_color(c, s, color) >= needed)
    }

    fn rainbow_oracle(c: &ColoredCompleteHypergraph) -> Option<Vec<usize>> {
        let k = c.uniformity() + 1;
        subsets(c.order(), k).find(|s| {
            let mut seen: Vec<u16> = subsets(k, c.uniformity())
                .map(|combo| {
                    let edge: Vec<usize> = combo.iter().map(|&i| s[i]).collect();
                    c.color_of(&edge).unwrap()
                })
                .collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    }

    fn random_coloring(rng: &mut StdRng, n: usize, r: usize, t: u16) -> ColoredCompleteHypergraph {
        ColoredCompleteHypergraph::from_fn(n, r, t, |_| rng.gen_range(1..=t)).unwrap()
    }

    #[test]
    fn mono_scan_matches_oracle_on_random_colorings() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0001);
        for _ in 0..60 {
            let n = rng.gen_range(4..=8);
            let t = rng.gen_range(1..=3);
            let c = random_coloring(&mut rng, n, 3, t);
            for color in 1..=t {
                for pattern in [TargetPattern::complete(4), TargetPattern::minus_one(4)] {
                    let got = find_mono_target(&c, color, &pattern).unwrap();
                    assert_eq!(got, mono_oracle(&c, color, &pattern));
                    let par = find_mono_target_parallel(&c, color, &pattern).unwrap();
                    assert_eq!(par, mono_oracle(&c, color, &pattern));
                }
            }
        }
    }

    #[test]
    fn rainbow_scan_matches_oracle_on_random_colorings() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0002);
        for _ in 0..60 {
            let n = rng.gen_range(4..=8);
            let t = rng.gen_range(1..=6);
            let c = random_coloring(&mut rng, n, 3, t);
            assert_eq!(find_rainbow_simplex(&c), rainbow_oracle(&c));
            assert_eq!(find_rainbow_simplex_parallel(&c), rainbow_oracle(&c));
        }
    }

    #[test]
    fn monochromatic_k13_yields_least_quadruple() {
        let c = ColoredCompleteHypergraph::monochromatic(13, 3, 1, 1).unwrap();
        let got = find_mono_target(&c, 1, &TargetPattern::complete(4)).unwrap();
        assert_eq!(got, Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn pattern_order_beyond_n_is_absent() {
        let c = ColoredCompleteHypergraph::monochromatic(4, 3, 1, 1).unwrap();
        let got = find_mono_target(&c, 1, &TargetPattern::complete(5)).unwrap();
        assert_eq!(got, None);
    }

    #[test]
    fn complete_target_of_order_r_is_a_single_edge() {
        // Color 2 first appears on the rank-2 hyperedge {0,2,3}.
        let c = ColoredCompleteHypergraph::new(4, 3, 2, vec![1, 1, 2, 2]).unwrap();
        let got = find_mono_target(&c, 2, &TargetPattern::complete(3)).unwrap();
        assert_eq!(got, Some(vec![0, 2, 3]));
    }

    #[test]
    fn minus_one_needs_all_but_one() {
        // Exactly 9 of the 10 triples on 5 vertices in color 1.
        let c = ColoredCompleteHypergraph::from_fn(5, 3, 2, |e| if e == [2, 3, 4] { 2 } else { 1 })
            .unwrap();
        let k5e = TargetPattern::minus_one(5);
        let k5 = TargetPattern::complete(5);
        assert_eq!(
            find_mono_target(&c, 1, &k5e).unwrap(),
            Some(vec![0, 1, 2, 3, 4])
        );
        assert_eq!(find_mono_target(&c, 1, &k5).unwrap(), None);
        assert_eq!(find_mono_target(&c, 2, &k5e).unwrap(), None);
    }

    #[test]
    fn rainbow_requires_more_colors_than_uniformity() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0003);
        let c = random_coloring(&mut rng, 7, 3, 3);
        assert_eq!(find_rainbow_simplex(&c), None);
    }

    #[test]
    fn rainbow_found_where_planted() {
        // Four colors on K4^(3)'s four faces: the whole vertex set is rainbow.
        let c = ColoredCompleteHypergraph::new(4, 3, 4, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(find_rainbow_simplex(&c), Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn clique_number_against_powerset_oracle() {
        fn oracle(h: &Hypergraph) -> usize {
            let n = h.order();
            let r = h.uniformity();
            let mut best = 0;
            for mask in 0u32..(1 << n) {
                let verts: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
                let ok = subsets(verts.len(), r).all(|combo| {
                    h.contains_edge(&combo.iter().map(|&i| verts[i]).collect::<Vec<_>>())
                });
                if ok {
                    best = best.max(verts.len());
                }
            }
            best
        }
        let mut rng = StdRng::seed_from_u64(0x5eed_0004);
        for _ in 0..40 {
            let n = rng.gen_range(3..=7);
            let density = rng.gen_range(1..=9);
            let mut h = Hypergraph::empty(n, 3);
            for rank in 0..h.capacity() {
                if rng.gen_range(0..10) < density {
                    h.insert_rank(rank).unwrap();
                }
            }
            assert_eq!(clique_number(&h), oracle(&h), "{h:?}");
        }
    }

    #[test]
    fn clique_number_fixed_cases() {
        assert_eq!(clique_number(&Hypergraph::complete(9, 3)), 9);
        assert_eq!(clique_number(&Hypergraph::empty(7, 3)), 2);
        assert_eq!(clique_number(&Hypergraph::empty(1, 3)), 1);
        let k5e = TargetPattern::minus_one(5).realize(3).unwrap();
        assert_eq!(clique_number(&k5e), 4);
    }

    #[test]
    fn witness_report_shape() {
        let c = ColoredCompleteHypergraph::monochromatic(13, 3, 1, 1).unwrap();
        let avoid = AvoidList::new(vec![TargetPattern::complete(4)]);
        let report = verify_witness(&c, &avoid, true).unwrap();
        assert!(report.gallai_ok);
        assert_eq!(report.rainbow_witness, None);
        assert_eq!(report.per_color_findings, vec![Some(vec![0, 1, 2, 3])]);
        assert_eq!(report.certified, None);

        let short = AvoidList::new(vec![]);
        assert!(matches!(
            verify_witness(&c, &short, true),
            Err(Error::AvoidLength { t: 1, got: 0 })
        ));
    }

    #[test]
    fn certified_statement_rendering() {
        let b = CertifiedBound {
            gallai: true,
            uniformity: 3,
            targets: vec![TargetPattern::minus_one(4), TargetPattern::complete(4)],
            value: 37,
        };
        assert_eq!(b.to_string(), "gr(K4-e,K4;3) >= 37");
        let b2 = CertifiedBound { gallai: false, ..b };
        assert_eq!(b2.to_string(), "R(K4-e,K4;3) >= 37");
    }
}
