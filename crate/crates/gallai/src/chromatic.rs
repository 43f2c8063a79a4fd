//! Weak vertex coloring of small hypergraphs.
//!
//! A coloring is proper when no hyperedge is monochromatic. Both quantities
//! here are exact, computed by backtracking with first-use color order, so
//! they are only offered up to [`ORDER_CAP`] vertices.

use crate::colex::unrank_subset;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Largest order accepted by the exhaustive computations.
pub const ORDER_CAP: usize = 12;

/// Weak chromatic number together with the minimum class size over proper
/// colorings that use exactly `chi` colors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChromaticData {
    pub chi: usize,
    pub s: usize,
}

/// Least k admitting a vertex k-coloring with no monochromatic hyperedge.
pub fn weak_chromatic_number(h: &Hypergraph) -> Result<usize> {
    check_cap(h)?;
    Ok(chi_of(h))
}

/// Smallest color-class cardinality over all proper colorings with exactly
/// `weak_chromatic_number(h)` colors.
pub fn min_color_class_size(h: &Hypergraph) -> Result<usize> {
    Ok(chromatic_data(h)?.s)
}

/// Both quantities in one pass.
pub fn chromatic_data(h: &Hypergraph) -> Result<ChromaticData> {
    check_cap(h)?;
    let chi = chi_of(h);
    let s = min_class_of(h, chi);
    Ok(ChromaticData { chi, s })
}

fn check_cap(h: &Hypergraph) -> Result<()> {
    if h.order() > ORDER_CAP {
        return Err(Error::OrderCap {
            n: h.order(),
            cap: ORDER_CAP,
        });
    }
    Ok(())
}

/// Edges grouped by their largest vertex, so properness can be checked
/// incrementally as vertices are colored in order.
fn edges_by_max(h: &Hypergraph) -> Vec<Vec<Vec<usize>>> {
    let mut by_max = vec![Vec::new(); h.order()];
    for rank in h.ranks() {
        let edge = unrank_subset(rank, h.uniformity());
        let max = *edge.last().expect("uniformity is at least 2");
        by_max[max].push(edge);
    }
    by_max
}

fn chi_of(h: &Hypergraph) -> usize {
    let n = h.order();
    if n == 0 || h.edge_count() == 0 {
        return 1;
    }
    let by_max = edges_by_max(h);
    let mut colors = vec![0usize; n];
    for k in 1..=n {
        if color_exists(&by_max, &mut colors, 0, 0, k) {
            return k;
        }
    }
    unreachable!("n singleton classes are always proper")
}

fn color_exists(
    by_max: &[Vec<Vec<usize>>],
    colors: &mut [usize],
    v: usize,
    used: usize,
    k: usize,
) -> bool {
    if v == colors.len() {
        return true;
    }
    for c in 1..=k.min(used + 1) {
        colors[v] = c;
        if no_new_mono(by_max, colors, v, c) && color_exists(by_max, colors, v + 1, used.max(c), k)
        {
            return true;
        }
    }
    colors[v] = 0;
    false
}

/// Only edges whose maximum vertex is v can have just become monochromatic.
fn no_new_mono(by_max: &[Vec<Vec<usize>>], colors: &[usize], v: usize, c: usize) -> bool {
    by_max[v]
        .iter()
        .all(|edge| edge.iter().any(|&u| u != v && colors[u] != c))
}

fn min_class_of(h: &Hypergraph, chi: usize) -> usize {
    let n = h.order();
    if n == 0 {
        return 0;
    }
    if chi == 1 {
        return n;
    }
    let by_max = edges_by_max(h);
    let mut colors = vec![0usize; n];
    let mut sizes = vec![0usize; chi + 1];
    let mut best = n;
    descend_classes(&by_max, &mut colors, &mut sizes, 0, 0, chi, &mut best);
    best
}

fn descend_classes(
    by_max: &[Vec<Vec<usize>>],
    colors: &mut [usize],
    sizes: &mut [usize],
    v: usize,
    used: usize,
    chi: usize,
    best: &mut usize,
) {
    let n = colors.len();
    if *best == 1 {
        return;
    }
    // Class sizes only grow from here on, so once every class is open the
    // current minimum is a lower bound for the final one.
    if used == chi {
        let cur = sizes[1..=chi].iter().copied().min().unwrap();
        if cur >= *best {
            return;
        }
        if v == n {
            *best = cur;
            return;
        }
    } else if v == n || n - v < chi - used {
        return;
    }
    for c in 1..=chi.min(used + 1) {
        colors[v] = c;
        if no_new_mono(by_max, colors, v, c) {
            sizes[c] += 1;
            descend_classes(by_max, colors, sizes, v + 1, used.max(c), chi, best);
            sizes[c] -= 1;
        }
    }
    colors[v] = 0;
}
