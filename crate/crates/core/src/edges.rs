use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::WalkConfig;
use crate::error::{Result, WalkError};

/// Row-major layout of the ordered pairs `(a, b)`, `a != b`, with the
/// self-pair removed from each row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeIndexer {
    n: usize,
}

impl EdgeIndexer {
    pub fn new(n_vertices: usize) -> Self {
        Self { n: n_vertices }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n.saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, a: usize, b: usize) -> Result<usize> {
        if a == b || a >= self.n || b >= self.n {
            return Err(WalkError::InvalidEdge { a, b, n: self.n });
        }
        Ok(self.index_unchecked(a, b))
    }

    /// Caller guarantees `a != b` and both in range.
    #[inline]
    pub fn index_unchecked(&self, a: usize, b: usize) -> usize {
        a * (self.n - 1) + if b < a { b } else { b - 1 }
    }

    pub fn pair(&self, index: usize) -> Result<(usize, usize)> {
        if index >= self.len() {
            return Err(WalkError::IndexOutOfRange { index, dimension: self.len() });
        }
        let a = index / (self.n - 1);
        let r = index % (self.n - 1);
        Ok((a, if r < a { r } else { r + 1 }))
    }

    /// All pairs in index order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| (0..self.n).filter(move |&b| b != a).map(move |b| (a, b)))
    }
}

/// Orbit of an ordered edge under the automorphisms that fix the marked set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubspaceLabel {
    /// normal -> marked
    In,
    /// marked -> normal
    Out,
    /// normal -> normal
    NormalNormal,
    /// marked -> marked
    MarkedMarked,
}

impl SubspaceLabel {
    /// Order of the reduced basis.
    pub const ALL: [SubspaceLabel; 4] =
        [SubspaceLabel::In, SubspaceLabel::Out, SubspaceLabel::NormalNormal, SubspaceLabel::MarkedMarked];

    pub fn position(self) -> usize {
        match self {
            SubspaceLabel::In => 0,
            SubspaceLabel::Out => 1,
            SubspaceLabel::NormalNormal => 2,
            SubspaceLabel::MarkedMarked => 3,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            SubspaceLabel::In => "in",
            SubspaceLabel::Out => "out",
            SubspaceLabel::NormalNormal => "nn",
            SubspaceLabel::MarkedMarked => "mm",
        }
    }

    pub fn dimension(self, config: &WalkConfig) -> usize {
        let v = config.n_marked();
        let m = config.n_normal();
        match self {
            SubspaceLabel::In | SubspaceLabel::Out => v * m,
            SubspaceLabel::NormalNormal => m * (m - 1),
            SubspaceLabel::MarkedMarked => v * (v - 1),
        }
    }

    /// Lexicographically smallest edge of the subspace.
    pub fn representative(self, config: &WalkConfig) -> Result<(usize, usize)> {
        if self.dimension(config) == 0 {
            return Err(WalkError::EmptySubspace(self));
        }
        let v = config.n_marked();
        Ok(match self {
            SubspaceLabel::In => (v, 0),
            SubspaceLabel::Out => (0, v),
            SubspaceLabel::NormalNormal => (v, v + 1),
            SubspaceLabel::MarkedMarked => (0, 1),
        })
    }

    /// Lexicographically largest edge of the subspace; a second witness for
    /// symmetry checks.
    pub fn alternate_representative(self, config: &WalkConfig) -> Result<(usize, usize)> {
        if self.dimension(config) == 0 {
            return Err(WalkError::EmptySubspace(self));
        }
        let v = config.n_marked();
        let n = config.n_vertices();
        Ok(match self {
            SubspaceLabel::In => (n - 1, v - 1),
            SubspaceLabel::Out => (v - 1, n - 1),
            SubspaceLabel::NormalNormal => (n - 1, n - 2),
            SubspaceLabel::MarkedMarked => (v - 1, v - 2),
        })
    }
}

impl fmt::Display for SubspaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubspaceLabel::In => "IN",
            SubspaceLabel::Out => "OUT",
            SubspaceLabel::NormalNormal => "NN",
            SubspaceLabel::MarkedMarked => "MM",
        })
    }
}

pub fn classify_edge(a: usize, b: usize, config: &WalkConfig) -> Result<SubspaceLabel> {
    let n = config.n_vertices();
    if a == b || a >= n || b >= n {
        return Err(WalkError::InvalidEdge { a, b, n });
    }
    Ok(match (config.is_marked(a), config.is_marked(b)) {
        (false, true) => SubspaceLabel::In,
        (true, false) => SubspaceLabel::Out,
        (false, false) => SubspaceLabel::NormalNormal,
        (true, true) => SubspaceLabel::MarkedMarked,
    })
}
