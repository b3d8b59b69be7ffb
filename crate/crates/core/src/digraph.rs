//! Dense exact digraphs and the matrix identities behind directed strong
//! regularity and distance regularity.
//!
//! Adjacency is stored as packed bit rows, so the A*A kernel used by the
//! exhaustive search is a word-parallel popcount. All arithmetic is exact
//! machine-integer arithmetic; entries of A^2 are bounded by the degree.

use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("empty input")]
    Empty,
    #[error("line {line}: expected {expected} characters, found {found}")]
    LineLength { line: usize, expected: usize, found: usize },
    #[error("line {line}, column {col}: invalid character {ch:?}")]
    BadChar { line: usize, col: usize, ch: char },
    #[error("vertex {v} has a loop on the diagonal")]
    LoopOnDiagonal { v: usize },
    #[error("missing final newline")]
    MissingFinalNewline,
    #[error("expected {expected} matrix rows, found {found}")]
    TooFewRows { expected: usize, found: usize },
    #[error("line {line}: trailing data after the matrix")]
    TrailingData { line: usize },
    #[error("line {line}: malformed edge")]
    BadEdgeLine { line: usize },
    #[error("line {line}: loop edge")]
    LoopEdge { line: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("dsrg parameters must satisfy v > k >= t, lambda < k, mu <= k; got ({0})")]
    Infeasible(DsrgParams),
    #[error("malformed parameter string {0:?}, expected \"v,k,t,lambda,mu\"")]
    Malformed(String),
}

/// A loopless digraph on n vertices with a dense 0/1 adjacency matrix.
/// Row i holds the out-neighborhood of vertex i as packed bits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        let stride = n.div_ceil(64);
        Digraph {
            n,
            stride,
            rows: vec![0; n * stride],
        }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Self {
        let mut d = Digraph::empty(n);
        for &(u, v) in arcs {
            d.add_arc(u, v);
        }
        d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        assert!(u != v, "digraphs here are loopless");
        assert!(u < self.n && v < self.n);
        self.rows[u * self.stride + v / 64] |= 1 << (v % 64);
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) {
        self.rows[u * self.stride + v / 64] &= !(1 << (v % 64));
    }

    pub fn row_words(&self, u: usize) -> &[u64] {
        &self.rows[u * self.stride..(u + 1) * self.stride]
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.out_neighbors(u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn arc_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn out_neighbors(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &word) in self.row_words(u).iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.row_words(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.has_arc(u, v)).count()
    }

    /// Row sums and column sums of the adjacency matrix.
    pub fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let mut outs = vec![0; self.n];
        let mut ins = vec![0; self.n];
        for (u, out) in outs.iter_mut().enumerate() {
            for v in self.out_neighbors(u) {
                *out += 1;
                ins[v] += 1;
            }
        }
        (outs, ins)
    }

    pub fn transpose(&self) -> Digraph {
        let mut t = Digraph::empty(self.n);
        for u in 0..self.n {
            for v in self.out_neighbors(u) {
                t.add_arc(v, u);
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// The digraph with every arc (u,v) moved to (perm(u), perm(v)).
    pub fn relabel(&self, perm: &Permutation) -> Digraph {
        assert_eq!(perm.degree(), self.n);
        let mut d = Digraph::empty(self.n);
        for u in 0..self.n {
            for v in self.out_neighbors(u) {
                d.add_arc(perm.apply(u), perm.apply(v));
            }
        }
        d
    }

    /// Exact integer matrix product A*A: entry (i,j) counts directed paths
    /// i -> z -> j of length two.
    pub fn two_path_counts(&self) -> Vec<Vec<u32>> {
        let t = self.transpose();
        (0..self.n)
            .map(|i| {
                let ri = self.row_words(i);
                (0..self.n)
                    .map(|j| {
                        let cj = t.row_words(j);
                        ri.iter().zip(cj).map(|(a, b)| (a & b).count_ones()).sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// BFS distances from a base vertex; usize::MAX marks unreachable.
    pub fn distances_from(&self, base: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[base] = 0;
        let mut queue = std::collections::VecDeque::from([base]);
        while let Some(u) = queue.pop_front() {
            for v in self.out_neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, arcs={})", self.n, self.arc_count())
    }
}

/// The parameter tuple (v, k, t, lambda, mu) of a directed strongly regular
/// graph.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct DsrgParams {
    pub v: u32,
    pub k: u32,
    pub t: u32,
    pub lambda: u32,
    pub mu: u32,
}

impl DsrgParams {
    pub fn new(v: u32, k: u32, t: u32, lambda: u32, mu: u32) -> Result<Self, ParamError> {
        let p = DsrgParams { v, k, t, lambda, mu };
        if v <= k || k < t || lambda >= k || mu > k {
            return Err(ParamError::Infeasible(p));
        }
        Ok(p)
    }
}

impl fmt::Display for DsrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.v, self.k, self.t, self.lambda, self.mu)
    }
}

impl std::str::FromStr for DsrgParams {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, ParamError> {
        let parts: Vec<u32> = s
            .split(',')
            .map(|w| w.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| ParamError::Malformed(s.to_string()))?;
        if parts.len() != 5 {
            return Err(ParamError::Malformed(s.to_string()));
        }
        DsrgParams::new(parts[0], parts[1], parts[2], parts[3], parts[4])
    }
}

/// First violation found when checking A^2 = tI + lambda*A + mu*(J - I - A).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DsrgViolation {
    VertexCount { expected: usize, found: usize },
    OutDegree { v: usize, found: usize },
    InDegree { v: usize, found: usize },
    PathCount { from: usize, to: usize, expected: u32, found: u32 },
}

impl fmt::Display for DsrgViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DsrgViolation::VertexCount { expected, found } => {
                write!(f, "vertex count {found}, expected {expected}")
            }
            DsrgViolation::OutDegree { v, found } => {
                write!(f, "vertex {v} has out-degree {found}")
            }
            DsrgViolation::InDegree { v, found } => {
                write!(f, "vertex {v} has in-degree {found}")
            }
            DsrgViolation::PathCount { from, to, expected, found } => {
                write!(
                    f,
                    "entry ({from},{to}) of A^2 is {found}, expected {expected}"
                )
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DsrgCertificate {
    pub params: DsrgParams,
    pub violation: Option<DsrgViolation>,
}

impl DsrgCertificate {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for DsrgCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(f, "dsrg({}): PASS", self.params),
            Some(w) => write!(f, "dsrg({}): FAIL at {w}", self.params),
        }
    }
}

/// Checks the defining identity entrywise in exact integers, together with
/// in/out-regularity of degree k.
pub fn verify_dsrg(d: &Digraph, params: DsrgParams) -> DsrgCertificate {
    let fail = |violation| DsrgCertificate { params, violation: Some(violation) };
    if d.n() != params.v as usize {
        return fail(DsrgViolation::VertexCount { expected: params.v as usize, found: d.n() });
    }
    let (outs, ins) = d.degrees();
    for (v, &found) in outs.iter().enumerate() {
        if found != params.k as usize {
            return fail(DsrgViolation::OutDegree { v, found });
        }
    }
    for (v, &found) in ins.iter().enumerate() {
        if found != params.k as usize {
            return fail(DsrgViolation::InDegree { v, found });
        }
    }
    for (i, row) in d.two_path_counts().iter().enumerate() {
        for (j, &found) in row.iter().enumerate() {
            let expected = if i == j {
                params.t
            } else if d.has_arc(i, j) {
                params.lambda
            } else {
                params.mu
            };
            if found != expected {
                return fail(DsrgViolation::PathCount { from: i, to: j, expected, found });
            }
        }
    }
    DsrgCertificate { params, violation: None }
}

/// An intersection array {b_0,...,b_{d-1}; c_1,...,c_d} of a distance-regular
/// graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntersectionArray {
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl IntersectionArray {
    pub fn new(b: Vec<usize>, c: Vec<usize>) -> Self {
        assert_eq!(b.len(), c.len());
        IntersectionArray { b, c }
    }

    pub fn diameter(&self) -> usize {
        self.b.len()
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[usize]| {
            xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        write!(f, "{{{};{}}}", join(&self.b), join(&self.c))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DrgViolation {
    NotSymmetric { u: usize, v: usize },
    NotConnected { v: usize },
    WrongDiameter { expected: usize, found: usize },
    CountMismatch { base: usize, vertex: usize, dist: usize, expected: (usize, usize, usize), found: (usize, usize, usize) },
}

impl fmt::Display for DrgViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DrgViolation::NotSymmetric { u, v } => write!(f, "arc ({u},{v}) has no reverse"),
            DrgViolation::NotConnected { v } => write!(f, "vertex {v} unreachable"),
            DrgViolation::WrongDiameter { expected, found } => {
                write!(f, "diameter {found}, expected {expected}")
            }
            DrgViolation::CountMismatch { base, vertex, dist, expected, found } => write!(
                f,
                "from base {base}: vertex {vertex} at distance {dist} sees (c,a,b) = {found:?}, expected {expected:?}"
            ),
        }
    }
}

/// Certificate of a distance-regularity check. `found` records the array
/// measured from base vertex 0 whenever distances are well defined.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DrgCertificate {
    pub expected: IntersectionArray,
    pub found: Option<IntersectionArray>,
    pub violation: Option<DrgViolation>,
}

impl DrgCertificate {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for DrgCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(f, "drg {}: PASS", self.expected),
            Some(w) => {
                write!(f, "drg {}: FAIL ({w})", self.expected)?;
                if let Some(found) = &self.found {
                    write!(f, ", measured {found}")?;
                }
                Ok(())
            }
        }
    }
}

/// Checks distance regularity of a symmetric digraph against an expected
/// intersection array: from every base vertex, every vertex at distance i
/// must see exactly (c_i, a_i, b_i) neighbors at distances i-1, i, i+1.
pub fn verify_drg(g: &Digraph, expected: &IntersectionArray) -> DrgCertificate {
    let fail = |found, violation| DrgCertificate {
        expected: expected.clone(),
        found,
        violation: Some(violation),
    };
    for u in 0..g.n() {
        for v in g.out_neighbors(u) {
            if !g.has_arc(v, u) {
                return fail(None, DrgViolation::NotSymmetric { u, v });
            }
        }
    }
    let diameter = expected.diameter();
    let mut measured: Option<IntersectionArray> = None;
    for base in 0..g.n() {
        let dist = g.distances_from(base);
        if let Some(v) = (0..g.n()).find(|&v| dist[v] == usize::MAX) {
            return fail(measured, DrgViolation::NotConnected { v });
        }
        let found_diameter = dist.iter().copied().max().unwrap_or(0);
        // Record the array seen from the first base before any comparison.
        if base == 0 {
            let mut b = vec![0usize; found_diameter + 1];
            let mut c = vec![0usize; found_diameter + 1];
            for i in 0..=found_diameter {
                if let Some(v) = (0..g.n()).find(|&v| dist[v] == i) {
                    b[i] = g.out_neighbors(v).iter().filter(|&&w| dist[w] == i + 1).count();
                    c[i] = g.out_neighbors(v).iter().filter(|&&w| dist[w] + 1 == i).count();
                }
            }
            measured = Some(IntersectionArray::new(
                b[..found_diameter].to_vec(),
                c[1..].to_vec(),
            ));
        }
        if found_diameter != diameter {
            return fail(
                measured,
                DrgViolation::WrongDiameter { expected: diameter, found: found_diameter },
            );
        }
        for v in 0..g.n() {
            let i = dist[v];
            let mut closer = 0;
            let mut same = 0;
            let mut further = 0;
            for w in g.out_neighbors(v) {
                if dist[w] + 1 == i {
                    closer += 1;
                } else if dist[w] == i {
                    same += 1;
                } else {
                    further += 1;
                }
            }
            let exp_c = if i == 0 { 0 } else { expected.c[i - 1] };
            let exp_b = if i == diameter { 0 } else { expected.b[i] };
            let exp_a = expected.b[0] - exp_b - exp_c;
            if (closer, same, further) != (exp_c, exp_a, exp_b) {
                return fail(
                    measured,
                    DrgViolation::CountMismatch {
                        base,
                        vertex: v,
                        dist: i,
                        expected: (exp_c, exp_a, exp_b),
                        found: (closer, same, further),
                    },
                );
            }
        }
    }
    DrgCertificate { expected: expected.clone(), found: measured, violation: None }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("graph has diameter {found}, expected 3")]
    WrongDiameter { found: usize },
    #[error("antipodality is not an equivalence relation at vertices {u} and {v}")]
    NotEquivalence { u: usize, v: usize },
    #[error("no edges between classes {a} and {b}; quotient is not complete")]
    QuotientNotComplete { a: usize, b: usize },
}

/// Splits a diameter-3 distance-regular graph into its antipodal classes
/// ({v} together with the vertices at distance 3 from v), verifies that
/// those classes partition the graph, and verifies the quotient is complete.
/// Classes are sorted by smallest member.
pub fn antipodal_partition(g: &Digraph) -> Result<Vec<Vec<usize>>, PartitionError> {
    let n = g.n();
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let all_dists: Vec<Vec<usize>> = (0..n).map(|v| g.distances_from(v)).collect();
    for dists in &all_dists {
        let found = dists.iter().copied().max().unwrap_or(0);
        if found != 3 {
            return Err(PartitionError::WrongDiameter { found });
        }
    }
    for v in 0..n {
        let mates: Vec<usize> = (0..n).filter(|&u| u == v || all_dists[v][u] == 3).collect();
        match class_of[v] {
            None => {
                let id = classes.len();
                for &u in &mates {
                    if class_of[u].is_some() {
                        return Err(PartitionError::NotEquivalence { u, v });
                    }
                    class_of[u] = Some(id);
                }
                classes.push(mates);
            }
            Some(id) => {
                if classes[id] != mates {
                    return Err(PartitionError::NotEquivalence { u: classes[id][0], v });
                }
            }
        }
    }
    for a in 0..classes.len() {
        for b in a + 1..classes.len() {
            let linked = classes[a]
                .iter()
                .any(|&u| classes[b].iter().any(|&v| g.has_arc(u, v)));
            if !linked {
                return Err(PartitionError::QuotientNotComplete { a, b });
            }
        }
    }
    Ok(classes)
}

/// Individualizes the base vertex, refines by iterated in/out color
/// multisets until stable, and returns the sorted stable cell sizes.
pub fn stable_partition_from_base(d: &Digraph, base: usize) -> Vec<usize> {
    let coloring = crate::iso::Coloring::uniform(d.n()).individualize(base);
    let stable = crate::iso::refine(d, &coloring);
    let mut sizes = stable.cell_sizes();
    sizes.sort_unstable();
    sizes
}

/// Writes the matrix01 format: n lines of n characters from {0,1}, row i
/// being the out-neighborhood of vertex i, final newline included.
pub fn write_matrix01<W: Write>(d: &Digraph, mut w: W) -> io::Result<()> {
    let mut line = String::with_capacity(d.n() + 1);
    for u in 0..d.n() {
        line.clear();
        for v in 0..d.n() {
            line.push(if d.has_arc(u, v) { '1' } else { '0' });
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Parses matrix01 text: optional leading '#' header lines, then exactly n
/// rows of n characters from {0,1} with a zero diagonal, then end of input.
/// The final newline is required.
pub fn read_matrix01(text: &str) -> Result<Digraph, FormatError> {
    if text.is_empty() {
        return Err(FormatError::Empty);
    }
    if !text.ends_with('\n') {
        return Err(FormatError::MissingFinalNewline);
    }
    let mut lines = text.lines().enumerate().skip_while(|(_, l)| l.starts_with('#'));
    let (first_no, first) = lines.next().ok_or(FormatError::Empty)?;
    let n = first.chars().count();
    if n == 0 {
        return Err(FormatError::Empty);
    }
    let mut d = Digraph::empty(n);
    let mut row = 0usize;
    for (line_no, line) in std::iter::once((first_no, first)).chain(lines) {
        if row == n {
            return Err(FormatError::TrailingData { line: line_no + 1 });
        }
        let found = line.chars().count();
        if found != n {
            return Err(FormatError::LineLength { line: line_no + 1, expected: n, found });
        }
        for (col, ch) in line.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => {
                    if col == row {
                        return Err(FormatError::LoopOnDiagonal { v: row });
                    }
                    d.add_arc(row, col);
                }
                _ => return Err(FormatError::BadChar { line: line_no + 1, col: col + 1, ch }),
            }
        }
        row += 1;
    }
    if row != n {
        return Err(FormatError::TooFewRows { expected: n, found: row });
    }
    Ok(d)
}

/// Writes the edge-list format: one `u v` line per arc, lexicographically
/// sorted, 0-based.
pub fn write_edgelist<W: Write>(d: &Digraph, mut w: W) -> io::Result<()> {
    for (u, v) in d.arcs() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// Parses edge-list text. The vertex count is inferred as the largest
/// endpoint plus one, so trailing isolated vertices are not representable.
pub fn read_edgelist(text: &str) -> Result<Digraph, FormatError> {
    let mut arcs = Vec::new();
    let mut max = 0usize;
    for (line_no, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (u, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(u), Some(v), None) => (
                u.parse::<usize>().map_err(|_| FormatError::BadEdgeLine { line: line_no + 1 })?,
                v.parse::<usize>().map_err(|_| FormatError::BadEdgeLine { line: line_no + 1 })?,
            ),
            _ => return Err(FormatError::BadEdgeLine { line: line_no + 1 }),
        };
        if u == v {
            return Err(FormatError::LoopEdge { line: line_no + 1 });
        }
        max = max.max(u).max(v);
        arcs.push((u, v));
    }
    if arcs.is_empty() {
        return Err(FormatError::Empty);
    }
    Ok(Digraph::from_arcs(max + 1, &arcs))
}
