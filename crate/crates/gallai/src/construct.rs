//! Witness-building constructions.
//!
//! Each function takes verified small colorings and emits a larger one whose
//! avoidance properties follow structurally. Nothing here re-verifies its
//! own output; callers run the verify scans when they want a certificate.
//!
//! Product-style constructions pack vertex (block, inner) as
//! block * inner_order + inner, so block indices can be recovered by integer
//! division. Certificate provenance lines record this packing.

use crate::chromatic::chromatic_data;
use crate::error::{Error, Result};
use crate::hypergraph::{ColoredCompleteHypergraph, Hypergraph};
use crate::verify::find_rainbow_simplex;

/// Lift a rainbow-triangle-free graph coloring to a 3-uniform coloring on
/// the same vertices: each triple takes the unique color whose graph induces
/// exactly one or exactly three of its edges.
///
/// With no rainbow triangle the edge colors on a triple are either all equal
/// (three edges of that color) or split two and one (the minority color has
/// exactly one), so the qualifying color exists and is unique.
pub fn lift_graph(g: &ColoredCompleteHypergraph) -> Result<ColoredCompleteHypergraph> {
    if g.uniformity() != 2 {
        return Err(Error::WrongUniformity {
            expected: 2,
            got: g.uniformity(),
        });
    }
    if let Some(tri) = find_rainbow_simplex(g) {
        return Err(Error::RainbowTriangle([tri[0], tri[1], tri[2]]));
    }
    ColoredCompleteHypergraph::from_fn(g.order(), 3, g.color_count(), |e| {
        let c01 = g.color_of(&[e[0], e[1]]).expect("pair within order");
        let c02 = g.color_of(&[e[0], e[2]]).expect("pair within order");
        let c12 = g.color_of(&[e[1], e[2]]).expect("pair within order");
        if c01 == c02 {
            if c01 == c12 {
                c01
            } else {
                c12
            }
        } else if c01 == c12 {
            c02
        } else {
            c01
        }
    })
}

/// Substitute `inner` into every vertex of `outer`: vertex (a, b), edges
/// between distinct blocks take the outer color of the block pair, edges
/// inside a block take the inner color shifted above outer's palette.
///
/// Both inputs must be rainbow-triangle-free; the output then is too, since
/// any output triangle projects to an outer triangle or lies in one block.
pub fn gallai_substitute(
    outer: &ColoredCompleteHypergraph,
    inner: &ColoredCompleteHypergraph,
) -> Result<ColoredCompleteHypergraph> {
    let shift = outer.color_count();
    let map: Vec<u16> = (1..=inner.color_count()).map(|c| c + shift).collect();
    substitute_impl(outer, inner, &map, shift + inner.color_count())
}

/// Substitution with a caller-supplied palette: inner color i becomes
/// map[i-1]. The output palette is the larger of outer's and the mapped
/// colors, so outer and inner colors may deliberately coincide.
pub fn gallai_substitute_shared(
    outer: &ColoredCompleteHypergraph,
    inner: &ColoredCompleteHypergraph,
    map: &[u16],
) -> Result<ColoredCompleteHypergraph> {
    if map.len() != usize::from(inner.color_count()) {
        return Err(Error::ColorCountMismatch {
            a: inner.color_count(),
            b: map.len() as u16,
        });
    }
    let top = map.iter().copied().max().unwrap_or(0);
    if map.contains(&0) {
        return Err(Error::ColorOutOfRange { color: 0, t: top });
    }
    substitute_impl(outer, inner, map, outer.color_count().max(top))
}

fn substitute_impl(
    outer: &ColoredCompleteHypergraph,
    inner: &ColoredCompleteHypergraph,
    map: &[u16],
    t_out: u16,
) -> Result<ColoredCompleteHypergraph> {
    for g in [outer, inner] {
        if g.uniformity() != 2 {
            return Err(Error::WrongUniformity {
                expected: 2,
                got: g.uniformity(),
            });
        }
        if let Some(tri) = find_rainbow_simplex(g) {
            return Err(Error::RainbowTriangle([tri[0], tri[1], tri[2]]));
        }
    }
    let ni = inner.order();
    ColoredCompleteHypergraph::from_fn(outer.order() * ni, 2, t_out, |e| {
        let (a1, b1) = (e[0] / ni, e[0] % ni);
        let (a2, b2) = (e[1] / ni, e[1] % ni);
        if a1 != a2 {
            outer.color_of(&[a1, a2]).expect("block pair within order")
        } else {
            let c = inner.color_of(&[b1, b2]).expect("inner pair within order");
            map[usize::from(c) - 1]
        }
    })
}

/// Blow-up along a weak coloring of `target`: chi(target) - 1 full copies of
/// `base` plus one copy cut down to its first s(target) - 1 vertices, with
/// every block-crossing hyperedge in a fresh color.
///
/// `base` on p - 1 vertices must satisfy p >= s(target); the output has
/// (chi - 1)(p - 1) + s - 1 vertices and one more color than base.
pub fn burr_blowup(
    base: &ColoredCompleteHypergraph,
    target: &Hypergraph,
) -> Result<ColoredCompleteHypergraph> {
    if target.uniformity() != base.uniformity() {
        return Err(Error::UniformityMismatch {
            a: base.uniformity(),
            b: target.uniformity(),
        });
    }
    let data = chromatic_data(target)?;
    let p = base.order() + 1;
    if p < data.s {
        return Err(Error::Hypothesis(format!(
            "blow-up needs a base certifying at least {}, got {p}",
            data.s
        )));
    }
    let block = base.order();
    let n = (data.chi - 1) * block + data.s - 1;
    let t = base.color_count() + 1;
    ColoredCompleteHypergraph::from_fn(n, base.uniformity(), t, |e| {
        let b0 = e[0] / block;
        if e.iter().all(|&u| u / block == b0) {
            let inner: Vec<usize> = e.iter().map(|&u| u % block).collect();
            base.color_of(&inner).expect("inner edge within base")
        } else {
            t
        }
    })
}

/// Lexicographic product of two hypergraphs on the packed vertex set:
/// an r-set is an edge when its block projection is an edge of `h1` with all
/// blocks distinct, or when it lies in one block over an edge of `h2`.
pub fn lex_product(h1: &Hypergraph, h2: &Hypergraph) -> Result<Hypergraph> {
    let r = h1.uniformity();
    if r != h2.uniformity() {
        return Err(Error::UniformityMismatch {
            a: r,
            b: h2.uniformity(),
        });
    }
    if r < 3 {
        return Err(Error::Hypothesis(
            "lexicographic product is defined for uniformity at least 3".into(),
        ));
    }
    let n2 = h2.order();
    let n = h1.order() * n2;
    let mut out = Hypergraph::empty(n, r);
    for (rank, s) in crate::colex::subsets(n, r).enumerate() {
        let a: Vec<usize> = s.iter().map(|&u| u / n2).collect();
        let member = if a.windows(2).all(|w| w[0] < w[1]) {
            h1.contains_edge(&a)
        } else if a[0] == a[r - 1] {
            let b: Vec<usize> = s.iter().map(|&u| u % n2).collect();
            h2.contains_edge(&b)
        } else {
            false
        };
        if member {
            out.insert_rank(rank).expect("rank within capacity");
        }
    }
    Ok(out)
}

/// Color the lexicographic product of two Gallai colorings with a shared
/// palette: block-distinct edges from c1, one-block edges from c2, and every
/// mixed edge in the last color t.
pub fn lex_compose(
    c1: &ColoredCompleteHypergraph,
    c2: &ColoredCompleteHypergraph,
) -> Result<ColoredCompleteHypergraph> {
    let r = c1.uniformity();
    if r != c2.uniformity() {
        return Err(Error::UniformityMismatch {
            a: r,
            b: c2.uniformity(),
        });
    }
    if r < 3 {
        return Err(Error::Hypothesis(
            "lexicographic composition is defined for uniformity at least 3".into(),
        ));
    }
    if c1.color_count() != c2.color_count() {
        return Err(Error::ColorCountMismatch {
            a: c1.color_count(),
            b: c2.color_count(),
        });
    }
    for c in [c1, c2] {
        if let Some(s) = find_rainbow_simplex(c) {
            return Err(Error::NotGallai(s));
        }
    }
    let t = c1.color_count();
    let n2 = c2.order();
    ColoredCompleteHypergraph::from_fn(c1.order() * n2, r, t, |e| {
        let a: Vec<usize> = e.iter().map(|&u| u / n2).collect();
        if a.windows(2).all(|w| w[0] < w[1]) {
            c1.color_of(&a).expect("block edge within c1")
        } else if a[0] == a[r - 1] {
            let b: Vec<usize> = e.iter().map(|&u| u % n2).collect();
            c2.color_of(&b).expect("inner edge within c2")
        } else {
            t
        }
    })
}

/// Square construction for uniformity 3: m - 1 identically labeled blocks of
/// a Gallai base on m - 1 vertices. Triples across three blocks inherit the
/// base color of the block triple; a 2+1 split gets color t+1 when the pair
/// sits in the lower block and t+2 when in the higher; one-block triples
/// inherit the base color of the inner triple.
pub fn square3(base: &ColoredCompleteHypergraph) -> Result<ColoredCompleteHypergraph> {
    if base.uniformity() != 3 {
        return Err(Error::WrongUniformity {
            expected: 3,
            got: base.uniformity(),
        });
    }
    if let Some(s) = find_rainbow_simplex(base) {
        return Err(Error::NotGallai(s));
    }
    let b = base.order();
    let t = base.color_count();
    ColoredCompleteHypergraph::from_fn(b * b, 3, t + 2, |e| {
        let blk = [e[0] / b, e[1] / b, e[2] / b];
        if blk[0] == blk[2] {
            let inner = [e[0] % b, e[1] % b, e[2] % b];
            base.color_of(&inner).expect("inner triple within base")
        } else if blk[0] != blk[1] && blk[1] != blk[2] {
            base.color_of(&blk).expect("block triple within base")
        } else if blk[0] == blk[1] {
            // Pair in the lower block.
            t + 1
        } else {
            t + 2
        }
    })
}

/// Square construction for uniformity 4. Blocks as in [`square3`]; splits
/// across blocks are colored by shape: 2+2 reuses color 1, 3+1 gets t+1,
/// 2+1+1 gets t+2, four distinct blocks and one-block quadruples inherit
/// base colors.
pub fn square4(base: &ColoredCompleteHypergraph) -> Result<ColoredCompleteHypergraph> {
    if base.uniformity() != 4 {
        return Err(Error::WrongUniformity {
            expected: 4,
            got: base.uniformity(),
        });
    }
    if let Some(s) = find_rainbow_simplex(base) {
        return Err(Error::NotGallai(s));
    }
    let b = base.order();
    let t = base.color_count();
    ColoredCompleteHypergraph::from_fn(b * b, 4, t + 2, |e| {
        let blk = [e[0] / b, e[1] / b, e[2] / b, e[3] / b];
        if blk[0] == blk[3] {
            let inner = [e[0] % b, e[1] % b, e[2] % b, e[3] % b];
            return base.color_of(&inner).expect("inner quadruple within base");
        }
        let distinct = 1 + blk.windows(2).filter(|w| w[0] < w[1]).count();
        match distinct {
            4 => base.color_of(&blk).expect("block quadruple within base"),
            2 if blk[1] == blk[2] => t + 1, // 3+1 either way round
            2 => 1,                         // 2+2
            _ => t + 2,                     // 2+1+1
        }
    })
}
