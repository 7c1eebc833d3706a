//! Graph ingestion, cut evaluation, and the brute-force max-cut oracle.

use std::collections::HashSet;

use rug::Rational;

use crate::error::{Error, GraphError, Result};
use crate::matrix::DenseMatrix;
use crate::DEFAULT_ENUM_LIMIT;

/// Undirected simple connected graph with at least one edge.
///
/// Edges are stored 1-based as (u, v) with u < v, in input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Validates and builds a graph. Positional errors report the edge's
    /// 1-based position in `edges` as the line number.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (idx, &(a, b)) in edges.iter().enumerate() {
            let line = idx + 1;
            if a == b {
                return Err(GraphError::SelfLoop { line, v: a }.into());
            }
            for v in [a, b] {
                if v < 1 || v > n {
                    return Err(GraphError::VertexOutOfRange { line, v: v as i64, n }.into());
                }
            }
            let (u, v) = (a.min(b), a.max(b));
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge { line, u, v }.into());
            }
            normalized.push((u, v));
        }
        let g = Graph { n, edges: normalized };
        if g.edges.is_empty() {
            return Err(GraphError::NoEdges.into());
        }
        if !g.is_connected() {
            return Err(GraphError::Disconnected.into());
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in (u + 1)..=n {
                edges.push((u, v));
            }
        }
        Graph::new(n, edges)
    }

    /// Cycle 1–2–…–n–1.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter("cycle needs n >= 3".into()));
        }
        let mut edges: Vec<(usize, usize)> = (1..n).map(|u| (u, u + 1)).collect();
        edges.push((1, n));
        Graph::new(n, edges)
    }

    /// Path 1–2–…–n.
    pub fn path(n: usize) -> Result<Self> {
        Graph::new(n, (1..n).map(|u| (u, u + 1)).collect())
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u - 1].push(v - 1);
            adj[v - 1].push(u - 1);
        }
        adj
    }

    fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Renders in the edge-list file format ("n m" header then "u v" lines).
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// A vector over {−1, +1}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::InvalidParameter(
                "sign vector entries must be exactly ±1".into(),
            ));
        }
        Ok(SignVector(entries))
    }

    pub fn all_plus(n: usize) -> Self {
        SignVector(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn flipped(&self) -> SignVector {
        SignVector(self.0.iter().map(|&e| -e).collect())
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.0.iter().map(|&e| Rational::from(e)).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&e| e as f64).collect()
    }
}

impl std::ops::Index<usize> for SignVector {
    type Output = i8;
    fn index(&self, i: usize) -> &i8 {
        &self.0[i]
    }
}

/// A cut value together with the sign vector achieving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutResult {
    pub value: usize,
    pub witness: SignVector,
}

/// Parses the edge-list format: header "n m", then m lines "u v",
/// 1-based vertices, '#' starts a comment, blank lines ignored.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().filter_map(|(idx, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((idx + 1, line))
    });

    let (hline, header) = lines.next().ok_or(GraphError::MissingHeader)?;
    let htokens: Vec<&str> = header.split_whitespace().collect();
    let (n, m) = match htokens.as_slice() {
        [a, b] => match (a.parse::<usize>(), b.parse::<usize>()) {
            (Ok(n), Ok(m)) => (n, m),
            _ => {
                return Err(GraphError::Malformed {
                    line: hline,
                    content: header.to_string(),
                }
                .into())
            }
        },
        _ => {
            return Err(GraphError::Malformed {
                line: hline,
                content: header.to_string(),
            }
            .into())
        }
    };

    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(m);
    for (lno, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = tokens.as_slice() else {
            return Err(GraphError::Malformed {
                line: lno,
                content: line.to_string(),
            }
            .into());
        };
        let (Ok(a), Ok(b)) = (a.parse::<i64>(), b.parse::<i64>()) else {
            return Err(GraphError::Malformed {
                line: lno,
                content: line.to_string(),
            }
            .into());
        };
        for v in [a, b] {
            if v < 1 || v > n as i64 {
                return Err(GraphError::VertexOutOfRange { line: lno, v, n }.into());
            }
        }
        let (a, b) = (a as usize, b as usize);
        if a == b {
            return Err(GraphError::SelfLoop { line: lno, v: a }.into());
        }
        let (u, v) = (a.min(b), a.max(b));
        if !seen.insert((u, v)) {
            return Err(GraphError::DuplicateEdge { line: lno, u, v }.into());
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(GraphError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        }
        .into());
    }
    if edges.is_empty() {
        return Err(GraphError::NoEdges.into());
    }
    let g = Graph { n, edges };
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    Ok(g)
}

/// Edge–vertex incidence matrix, |E| × n: row i carries +1 at the smaller
/// endpoint of edge i and −1 at the larger, edges in input order.
pub fn incidence_matrix(g: &Graph) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(g.m(), g.n());
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        m.set(i, u - 1, Rational::from(1));
        m.set(i, v - 1, Rational::from(-1));
    }
    m
}

/// Number of edges whose endpoints get opposite signs.
pub fn cut_value(g: &Graph, x: &SignVector) -> Result<usize> {
    if x.len() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "cut_value: graph has {} vertices, sign vector has {}",
            g.n(),
            x.len()
        )));
    }
    Ok(g.edges()
        .iter()
        .filter(|&&(u, v)| x[u - 1] != x[v - 1])
        .count())
}

/// Exact max-cut by Gray-code enumeration of the 2^{n−1} sign patterns
/// with x_1 = +1. Ties resolve to the lexicographically smallest witness
/// (−1 before +1).
pub fn maxcut_bruteforce(g: &Graph) -> Result<CutResult> {
    maxcut_bruteforce_with_limit(g, DEFAULT_ENUM_LIMIT)
}

pub fn maxcut_bruteforce_with_limit(g: &Graph, limit: usize) -> Result<CutResult> {
    let n = g.n();
    if n > limit {
        return Err(Error::EnumerationLimit { n, limit });
    }
    let adj = g.adjacency();
    let mut x = vec![1i8; n];
    let mut cut = 0usize; // all-plus cut is empty
    let mut best = cut;
    let mut best_x = x.clone();
    let steps = 1u64 << (n - 1);
    for k in 1..steps {
        // flip the vertex indexed by the Gray-code transition (skipping x_1)
        let v = 1 + k.trailing_zeros() as usize;
        let crossing_before = adj[v].iter().filter(|&&w| x[w] != x[v]).count();
        cut = cut + adj[v].len() - 2 * crossing_before;
        x[v] = -x[v];
        if cut > best || (cut == best && x < best_x) {
            best = cut;
            best_x = x.clone();
        }
    }
    Ok(CutResult {
        value: best,
        witness: SignVector(best_x),
    })
}
