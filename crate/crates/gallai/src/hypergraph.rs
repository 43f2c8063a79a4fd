//! Core objects: edge colorings of complete uniform hypergraphs, plain
//! r-uniform hypergraphs, and the avoidance targets they are tested against.

use std::fmt;

use crate::colex::{binomial, rank_unchecked, subsets, unrank_subset};
use crate::error::{Error, Result};

/// A t-coloring of every hyperedge of the complete r-uniform hypergraph on
/// vertices {0, .., n-1}. Colors are 1-based; entry `colors[k]` is the color
/// of the hyperedge with colex rank k.
#[derive(Clone, PartialEq, Eq)]
pub struct ColoredCompleteHypergraph {
    n: usize,
    r: usize,
    t: u16,
    colors: Vec<u16>,
}

impl ColoredCompleteHypergraph {
    pub fn new(n: usize, r: usize, t: u16, colors: Vec<u16>) -> Result<Self> {
        if r < 2 || n < r {
            return Err(Error::BadDimensions { n, r });
        }
        if t == 0 {
            return Err(Error::EmptyPalette);
        }
        let expected = binomial(n, r);
        if colors.len() != expected {
            return Err(Error::ColorCount {
                expected,
                got: colors.len(),
            });
        }
        if let Some(&bad) = colors.iter().find(|&&c| c == 0 || c > t) {
            return Err(Error::ColorOutOfRange { color: bad, t });
        }
        Ok(ColoredCompleteHypergraph { n, r, t, colors })
    }

    /// Every hyperedge in one color.
    pub fn monochromatic(n: usize, r: usize, t: u16, color: u16) -> Result<Self> {
        let count = binomial(n, r);
        Self::new(n, r, t, vec![color; count])
    }

    /// Build by evaluating `f` on every hyperedge in colex order.
    pub fn from_fn<F>(n: usize, r: usize, t: u16, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> u16,
    {
        if r < 2 || n < r {
            return Err(Error::BadDimensions { n, r });
        }
        let colors: Vec<u16> = subsets(n, r).map(|s| f(&s)).collect();
        Self::new(n, r, t, colors)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn color_count(&self) -> u16 {
        self.t
    }

    pub fn edge_count(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[u16] {
        &self.colors
    }

    #[inline]
    pub fn color_of_rank(&self, rank: usize) -> u16 {
        self.colors[rank]
    }

    /// Color of the hyperedge on a strictly increasing vertex set.
    pub fn color_of(&self, edge: &[usize]) -> Result<u16> {
        if edge.len() != self.r {
            return Err(Error::InvalidSubset(edge.to_vec()));
        }
        if edge.windows(2).any(|w| w[0] >= w[1]) || edge[self.r - 1] >= self.n {
            return Err(Error::InvalidSubset(edge.to_vec()));
        }
        Ok(self.colors[rank_unchecked(edge)])
    }

    /// Vertex set of the hyperedge with the given colex rank.
    pub fn edge_vertices(&self, rank: usize) -> Vec<usize> {
        unrank_subset(rank, self.r)
    }

    /// The subhypergraph formed by the hyperedges of one color.
    pub fn color_class(&self, color: u16) -> Hypergraph {
        let mut h = Hypergraph::empty(self.n, self.r);
        for (rank, &c) in self.colors.iter().enumerate() {
            if c == color {
                h.insert_rank(rank).expect("rank within range");
            }
        }
        h
    }
}

impl fmt::Debug for ColoredCompleteHypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ColoredCompleteHypergraph(n={}, r={}, t={}, {} hyperedges)",
            self.n,
            self.r,
            self.t,
            self.colors.len()
        )
    }
}

/// An r-uniform hypergraph on {0, .., n-1}, stored as a bitset over colex
/// ranks of the complete hypergraph's edge set.
#[derive(Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    capacity: usize,
    words: Vec<u64>,
    count: usize,
}

impl Hypergraph {
    pub fn empty(n: usize, r: usize) -> Self {
        assert!(r >= 2, "uniformity below 2");
        let capacity = binomial(n, r);
        Hypergraph {
            n,
            r,
            capacity,
            words: vec![0; capacity.div_ceil(64)],
            count: 0,
        }
    }

    pub fn complete(n: usize, r: usize) -> Self {
        let mut h = Self::empty(n, r);
        for rank in 0..h.capacity {
            h.insert_rank(rank).expect("rank within range");
        }
        h
    }

    pub fn from_ranks<I: IntoIterator<Item = usize>>(n: usize, r: usize, ranks: I) -> Result<Self> {
        let mut h = Self::empty(n, r);
        for rank in ranks {
            h.insert_rank(rank)?;
        }
        Ok(h)
    }

    pub fn from_edges<'a, I: IntoIterator<Item = &'a [usize]>>(
        n: usize,
        r: usize,
        edges: I,
    ) -> Result<Self> {
        let mut h = Self::empty(n, r);
        for edge in edges {
            if edge.len() != r || edge.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidSubset(edge.to_vec()));
            }
            if edge[r - 1] >= n {
                return Err(Error::InvalidSubset(edge.to_vec()));
            }
            h.insert_rank(rank_unchecked(edge))?;
        }
        Ok(h)
    }

    /// Insert by rank; duplicates are absorbed (set semantics).
    pub fn insert_rank(&mut self, rank: usize) -> Result<()> {
        if rank >= self.capacity {
            return Err(Error::RankOutOfRange {
                rank,
                count: self.capacity,
            });
        }
        let (w, b) = (rank / 64, rank % 64);
        if self.words[w] & (1 << b) == 0 {
            self.words[w] |= 1 << b;
            self.count += 1;
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn edge_count(&self) -> usize {
        self.count
    }

    /// Number of hyperedges in the complete hypergraph of the same dimensions.
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn contains_rank(&self, rank: usize) -> bool {
        debug_assert!(rank < self.capacity);
        self.words[rank / 64] & (1 << (rank % 64)) != 0
    }

    pub fn contains_edge(&self, edge: &[usize]) -> bool {
        debug_assert_eq!(edge.len(), self.r);
        self.contains_rank(rank_unchecked(edge))
    }

    /// Edge ranks in ascending order.
    pub fn ranks(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.capacity).filter(|&rank| self.contains_rank(rank))
    }

    /// The hyperedges the complete hypergraph has and this one lacks.
    pub fn complement(&self) -> Hypergraph {
        let mut h = Self::empty(self.n, self.r);
        for rank in 0..self.capacity {
            if !self.contains_rank(rank) {
                h.insert_rank(rank).expect("rank within range");
            }
        }
        h
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Hypergraph(n={}, r={}, {} of {} hyperedges)",
            self.n, self.r, self.count, self.capacity
        )
    }
}

/// Shape of a monochromatic target: the complete hypergraph on `order`
/// vertices, or that minus a single hyperedge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternKind {
    Complete,
    MinusOne,
}

/// An avoidance target `K_q` or `K_q-e`, independent of uniformity; validity
/// against a concrete r is checked where the pattern is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TargetPattern {
    order: usize,
    kind: PatternKind,
}

impl TargetPattern {
    pub fn complete(order: usize) -> Self {
        TargetPattern {
            order,
            kind: PatternKind::Complete,
        }
    }

    pub fn minus_one(order: usize) -> Self {
        TargetPattern {
            order,
            kind: PatternKind::MinusOne,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    /// A complete target needs order >= r; minus-one needs order > r, since
    /// K_r minus its only hyperedge has none left.
    pub fn validate_for(&self, r: usize) -> Result<()> {
        let ok = match self.kind {
            PatternKind::Complete => self.order >= r,
            PatternKind::MinusOne => self.order > r,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadPattern {
                text: self.to_string(),
                reason: format!("order too small for uniformity {r}"),
            })
        }
    }

    /// Minimum number of same-colored hyperedges a q-subset must induce to
    /// contain this target in that color.
    pub fn required_edges(&self, r: usize) -> usize {
        let full = binomial(self.order, r);
        match self.kind {
            PatternKind::Complete => full,
            PatternKind::MinusOne => full - 1,
        }
    }

    /// Materialize as a hypergraph; the minus-one form drops the colex-last
    /// hyperedge (all choices are isomorphic).
    pub fn realize(&self, r: usize) -> Result<Hypergraph> {
        self.validate_for(r)?;
        let mut h = Hypergraph::complete(self.order, r);
        if self.kind == PatternKind::MinusOne {
            let last = h.capacity() - 1;
            h = Hypergraph::from_ranks(self.order, r, (0..last).filter(|&k| h.contains_rank(k)))?;
        }
        Ok(h)
    }
}

impl fmt::Display for TargetPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PatternKind::Complete => write!(f, "K{}", self.order),
            PatternKind::MinusOne => write!(f, "K{}-e", self.order),
        }
    }
}
