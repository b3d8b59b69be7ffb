//! Digraph isomorphism machinery: directed color refinement, canonical
//! labeling by individualization-refinement, and automorphism groups.
//!
//! The canonical form is the lexicographically least relabeled adjacency
//! matrix over all leaves of the refinement tree. The tree branches over
//! every vertex of the first smallest non-singleton cell, with no orbit
//! pruning; at the 63-vertex scale of this crate one individualization
//! already leaves the partition nearly discrete, so the tree stays small.
//! Leaves that reproduce the first leaf's matrix yield automorphisms, and
//! because leaf colorings are discrete those matches enumerate the whole
//! automorphism group.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::digraph::Digraph;
use crate::perm::{GroupError, PermGroup, Permutation};

/// Default cap on the number of refinement-tree nodes a search may visit.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("canonical search exceeded budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A vertex coloring with colors forming a contiguous range starting at 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coloring {
    colors: Vec<u32>,
    num_colors: u32,
}

impl Coloring {
    pub fn uniform(n: usize) -> Self {
        Coloring {
            colors: vec![0; n],
            num_colors: if n == 0 { 0 } else { 1 },
        }
    }

    /// Normalizes arbitrary labels into contiguous colors ordered by label.
    pub fn from_labels(labels: &[u32]) -> Self {
        let mut distinct: Vec<u32> = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let rank: BTreeMap<u32, u32> = distinct
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i as u32))
            .collect();
        Coloring {
            colors: labels.iter().map(|l| rank[l]).collect(),
            num_colors: distinct.len() as u32,
        }
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    pub fn is_discrete(&self) -> bool {
        self.num_colors as usize == self.colors.len()
    }

    /// Splits {v} off its cell: v keeps the cell's color, the remaining
    /// members move to a fresh color directly after it. No-op on singletons.
    pub fn individualize(&self, v: usize) -> Coloring {
        let c = self.colors[v];
        if self.colors.iter().filter(|&&x| x == c).count() == 1 {
            return self.clone();
        }
        let mut colors = self.colors.clone();
        for (u, col) in colors.iter_mut().enumerate() {
            if *col > c || (*col == c && u != v) {
                *col += 1;
            }
        }
        Coloring { colors, num_colors: self.num_colors + 1 }
    }

    /// The cells as sorted vertex lists, indexed by color.
    pub fn cells(&self) -> Vec<Vec<usize>> {
        let mut cells = vec![Vec::new(); self.num_colors as usize];
        for (v, &c) in self.colors.iter().enumerate() {
            cells[c as usize].push(v);
        }
        cells
    }

    pub fn cell_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.num_colors as usize];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Reads a discrete coloring as the labeling permutation v -> color(v).
    fn to_labeling(&self) -> Permutation {
        debug_assert!(self.is_discrete());
        Permutation::from_images(self.colors.iter().map(|&c| c as u16).collect())
            .expect("a discrete coloring is a bijection")
    }
}

/// Iterated directed color refinement: each round recolors every vertex by
/// (old color, sorted out-neighbor colors, sorted in-neighbor colors) with
/// new color ids assigned in sorted signature order, until the number of
/// cells stabilizes. Returns the coarsest stable refinement of the input.
pub fn refine(d: &Digraph, start: &Coloring) -> Coloring {
    refine_with_transpose(d, &d.transpose(), start)
}

fn refine_with_transpose(d: &Digraph, dt: &Digraph, start: &Coloring) -> Coloring {
    let n = d.n();
    let mut current = start.clone();
    loop {
        let mut signatures: Vec<(u32, Vec<u32>, Vec<u32>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut out: Vec<u32> = d.out_neighbors(v).iter().map(|&w| current.colors[w]).collect();
            let mut inc: Vec<u32> = dt.out_neighbors(v).iter().map(|&w| current.colors[w]).collect();
            out.sort_unstable();
            inc.sort_unstable();
            signatures.push((current.colors[v], out, inc));
        }
        let mut ids: BTreeMap<&(u32, Vec<u32>, Vec<u32>), u32> = BTreeMap::new();
        for sig in &signatures {
            ids.insert(sig, 0);
        }
        let num_colors = ids.len() as u32;
        for (rank, (_, id)) in ids.iter_mut().enumerate() {
            *id = rank as u32;
        }
        let colors: Vec<u32> = signatures.iter().map(|sig| ids[sig]).collect();
        let next = Coloring { colors, num_colors };
        if next.num_colors == current.num_colors {
            return next;
        }
        current = next;
    }
}

/// The packed relabeled adjacency matrix: a length header followed by the
/// rows of `relabel(d, labeling)` as most-significant-bit-first bytes, so
/// byte order agrees with row-major bit order.
fn packed_relabeled(d: &Digraph, labeling: &Permutation) -> Vec<u8> {
    let n = d.n();
    let inv = labeling.inverse();
    let mut out = Vec::with_capacity(8 + n * n.div_ceil(8));
    out.extend_from_slice(&(n as u64).to_be_bytes());
    for r in 0..n {
        let u = inv.apply(r);
        let mut byte = 0u8;
        let mut filled = 0u32;
        for c in 0..n {
            byte = (byte << 1) | u8::from(d.has_arc(u, inv.apply(c)));
            filled += 1;
            if filled == 8 {
                out.push(byte);
                byte = 0;
                filled = 0;
            }
        }
        if filled > 0 {
            out.push(byte << (8 - filled));
        }
    }
    out
}

/// Result of a canonical search.
#[derive(Clone, Debug)]
pub struct Canonical {
    /// The canonical form: equal byte strings exactly for isomorphic digraphs.
    pub bytes: Vec<u8>,
    /// A labeling realizing the canonical form.
    pub labeling: Permutation,
    /// The full automorphism group as an element set (identity included).
    pub automorphisms: Vec<Permutation>,
    /// Refinement-tree nodes visited.
    pub nodes: u64,
}

struct IrSearch<'a> {
    d: &'a Digraph,
    dt: Digraph,
    budget: u64,
    nodes: u64,
    first: Option<(Vec<u8>, Permutation)>,
    best: Option<(Vec<u8>, Permutation)>,
    autos: HashSet<Permutation>,
}

impl<'a> IrSearch<'a> {
    fn descend(&mut self, coloring: &Coloring) -> Result<(), IsoError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(IsoError::BudgetExceeded { budget: self.budget });
        }
        let stable = refine_with_transpose(self.d, &self.dt, coloring);
        if stable.is_discrete() {
            self.leaf(&stable);
            return Ok(());
        }
        // Target cell: smallest non-singleton, lowest color on ties.
        let sizes = stable.cell_sizes();
        let target = (0..sizes.len())
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c))
            .expect("a non-discrete coloring has a non-singleton cell");
        let cell: Vec<usize> = (0..self.d.n())
            .filter(|&v| stable.color(v) == target as u32)
            .collect();
        for v in cell {
            self.descend(&stable.individualize(v))?;
        }
        Ok(())
    }

    fn leaf(&mut self, coloring: &Coloring) {
        let labeling = coloring.to_labeling();
        let bytes = packed_relabeled(self.d, &labeling);
        match &self.first {
            None => {
                self.autos.insert(Permutation::identity(self.d.n()));
                self.first = Some((bytes.clone(), labeling.clone()));
            }
            Some((first_bytes, first_labeling)) => {
                if bytes == *first_bytes {
                    let sigma = first_labeling.inverse().compose(&labeling);
                    assert_eq!(
                        self.d.relabel(&sigma),
                        *self.d,
                        "leaf match produced a non-automorphism"
                    );
                    self.autos.insert(sigma);
                }
            }
        }
        if self.best.as_ref().is_none_or(|(b, _)| bytes < *b) {
            self.best = Some((bytes, labeling));
        }
    }
}

/// Full canonical search with an explicit node budget.
pub fn canonicalize(d: &Digraph, budget: u64) -> Result<Canonical, IsoError> {
    if d.n() == 0 {
        return Ok(Canonical {
            bytes: (0u64).to_be_bytes().to_vec(),
            labeling: Permutation::identity(0),
            automorphisms: vec![Permutation::identity(0)],
            nodes: 0,
        });
    }
    let mut search = IrSearch {
        d,
        dt: d.transpose(),
        budget,
        nodes: 0,
        first: None,
        best: None,
        autos: HashSet::new(),
    };
    search.descend(&Coloring::uniform(d.n()))?;
    let (bytes, labeling) = search.best.expect("at least one leaf is always reached");
    let mut automorphisms: Vec<Permutation> = search.autos.into_iter().collect();
    automorphisms.sort();
    Ok(Canonical { bytes, labeling, automorphisms, nodes: search.nodes })
}

/// Canonical form under the default node budget. Isomorphic digraphs yield
/// equal byte strings; non-isomorphic digraphs yield distinct ones.
pub fn canonical_form(d: &Digraph) -> Result<Vec<u8>, IsoError> {
    Ok(canonicalize(d, DEFAULT_NODE_BUDGET)?.bytes)
}

/// Searches for a vertex bijection mapping arcs of `a` exactly onto arcs of
/// `b`. Any returned map has been verified arc by arc.
pub fn find_isomorphism(
    a: &Digraph,
    b: &Digraph,
    budget: u64,
) -> Result<Option<Permutation>, IsoError> {
    if a.n() != b.n() || a.arc_count() != b.arc_count() {
        return Ok(None);
    }
    let ca = canonicalize(a, budget)?;
    let cb = canonicalize(b, budget)?;
    if ca.bytes != cb.bytes {
        return Ok(None);
    }
    let map = cb.labeling.inverse().compose(&ca.labeling);
    assert_eq!(&a.relabel(&map), b, "canonical labelings produced an invalid isomorphism");
    Ok(Some(map))
}

/// The automorphism group, as a permutation group with a reduced generating
/// set. Its enumerated order equals the number of distinct leaf matches.
pub fn automorphism_group(d: &Digraph, budget: u64) -> Result<PermGroup, IsoError> {
    let canonical = canonicalize(d, budget)?;
    let degree = d.n();
    let mut generators: Vec<Permutation> = Vec::new();
    let mut known: HashSet<Permutation> = HashSet::new();
    known.insert(Permutation::identity(degree));
    for sigma in &canonical.automorphisms {
        if !known.contains(sigma) {
            generators.push(sigma.clone());
            let group = PermGroup::new(generators.clone())?;
            known = group.elements()?.iter().cloned().collect();
        }
    }
    let group = if generators.is_empty() {
        PermGroup::trivial(degree)
    } else {
        PermGroup::new(generators)?
    };
    assert_eq!(
        group.order()? as usize,
        canonical.automorphisms.len(),
        "reduced generators must regenerate every discovered automorphism"
    );
    Ok(group)
}

/// Structural evidence about an automorphism group: order, transitivity,
/// element orders, and the order of the normal closure of the conjugates of
/// an order-7 element (when one exists).
#[derive(Clone, Debug)]
pub struct AutReport {
    pub order: u64,
    pub transitive: bool,
    pub element_order_counts: BTreeMap<u64, usize>,
    pub order7_normal_closure: Option<u64>,
}

impl fmt::Display for AutReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order {}", self.order)?;
        writeln!(f, "transitive: {}", if self.transitive { "yes" } else { "no" })?;
        let orders = self
            .element_order_counts
            .iter()
            .map(|(ord, count)| format!("{ord}x{count}"))
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(f, "element orders: {orders}")?;
        match self.order7_normal_closure {
            Some(order) => writeln!(f, "normal closure of order-7 conjugates: order {order}"),
            None => writeln!(f, "no element of order 7"),
        }
    }
}

pub fn aut_structure_report(group: &PermGroup) -> Result<AutReport, GroupError> {
    let elements = group.elements()?;
    let mut element_order_counts: BTreeMap<u64, usize> = BTreeMap::new();
    for p in elements {
        *element_order_counts.entry(p.order()).or_default() += 1;
    }
    let order7_normal_closure = match elements.iter().find(|p| p.order() == 7) {
        None => None,
        Some(seven) => {
            let mut conjugates: Vec<Permutation> = elements
                .iter()
                .map(|g| g.compose(seven).compose(&g.inverse()))
                .collect();
            conjugates.sort();
            conjugates.dedup();
            Some(PermGroup::new(conjugates)?.order()?)
        }
    };
    Ok(AutReport {
        order: elements.len() as u64,
        transitive: group.is_transitive()?,
        element_order_counts,
        order7_normal_closure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn directed_triangle() -> Digraph {
        Digraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)])
    }

    fn directed_path(n: usize) -> Digraph {
        Digraph::from_arcs(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>())
    }

    fn random_permutation(n: usize, rng: &mut impl rand::Rng) -> Permutation {
        let mut images: Vec<u16> = (0..n as u16).collect();
        images.shuffle(rng);
        Permutation::from_images(images).unwrap()
    }

    /// Brute-force oracle: count arc-preserving bijections by trying all n!.
    fn brute_force_aut_order(d: &Digraph) -> u64 {
        fn go(d: &Digraph, partial: &mut Vec<u16>, used: &mut Vec<bool>, count: &mut u64) {
            let k = partial.len();
            if k == d.n() {
                *count += 1;
                return;
            }
            'candidate: for img in 0..d.n() {
                if used[img] {
                    continue;
                }
                for (prev, &prev_img) in partial.iter().enumerate() {
                    if d.has_arc(prev, k) != d.has_arc(prev_img as usize, img)
                        || d.has_arc(k, prev) != d.has_arc(img, prev_img as usize)
                    {
                        continue 'candidate;
                    }
                }
                partial.push(img as u16);
                used[img] = true;
                go(d, partial, used, count);
                partial.pop();
                used[img] = false;
            }
        }
        let mut count = 0;
        go(d, &mut Vec::new(), &mut vec![false; d.n()], &mut count);
        count
    }

    #[test]
    fn refine_keeps_regular_digraphs_monochrome() {
        let stable = refine(&directed_triangle(), &Coloring::uniform(3));
        assert_eq!(stable.num_colors(), 1);
    }

    #[test]
    fn refine_splits_directed_path_to_singletons() {
        // Hand refinement: the three degree signatures already differ.
        let stable = refine(&directed_path(3), &Coloring::uniform(3));
        assert!(stable.is_discrete());
    }

    #[test]
    fn individualize_inserts_a_fresh_cell() {
        let c = Coloring::uniform(4).individualize(2);
        assert_eq!(c.color(2), 0);
        assert_eq!(c.num_colors(), 2);
        assert_eq!(c.cell_sizes(), vec![1, 3]);
        // Singleton individualization is a no-op.
        let again = c.individualize(2);
        assert_eq!(again, c);
    }

    #[test]
    fn from_labels_normalizes() {
        let c = Coloring::from_labels(&[7, 3, 7, 10]);
        assert_eq!(c.color(0), 1);
        assert_eq!(c.color(1), 0);
        assert_eq!(c.color(3), 2);
        assert_eq!(c.num_colors(), 3);
    }

    #[test]
    fn canonical_form_is_invariant_under_relabeling() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for n in [3usize, 5, 7] {
            let mut d = Digraph::empty(n);
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.gen_bool(0.4) {
                        d.add_arc(u, v);
                    }
                }
            }
            let form = canonical_form(&d).unwrap();
            for _ in 0..20 {
                let pi = random_permutation(n, &mut rng);
                assert_eq!(canonical_form(&d.relabel(&pi)).unwrap(), form);
            }
        }
    }

    #[test]
    fn canonical_form_separates_non_isomorphic_digraphs() {
        let cycle = directed_triangle();
        let path = directed_path(3);
        assert_ne!(canonical_form(&cycle).unwrap(), canonical_form(&path).unwrap());
    }

    #[test]
    fn find_isomorphism_maps_and_verifies() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let d = Digraph::from_arcs(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        let self_map = find_isomorphism(&d, &d, DEFAULT_NODE_BUDGET).unwrap().unwrap();
        assert_eq!(d.relabel(&self_map), d);
        let pi = random_permutation(5, &mut rng);
        let relabeled = d.relabel(&pi);
        let map = find_isomorphism(&d, &relabeled, DEFAULT_NODE_BUDGET).unwrap().unwrap();
        assert_eq!(d.relabel(&map), relabeled);
        assert!(find_isomorphism(&d, &directed_path(5), DEFAULT_NODE_BUDGET).unwrap().is_none());
    }

    #[test]
    fn automorphism_groups_of_small_digraphs() {
        let aut = automorphism_group(&directed_triangle(), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(aut.order().unwrap(), 3);
        let aut = automorphism_group(&directed_path(4), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(aut.order().unwrap(), 1);
        // Bidirected K4: every permutation is an automorphism.
        let mut k4 = Digraph::empty(4);
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    k4.add_arc(u, v);
                }
            }
        }
        assert_eq!(automorphism_group(&k4, DEFAULT_NODE_BUDGET).unwrap().order().unwrap(), 24);
    }

    #[test]
    fn automorphism_count_matches_brute_force_on_random_digraphs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for n in [4usize, 5, 6] {
            for _ in 0..5 {
                let mut d = Digraph::empty(n);
                for u in 0..n {
                    for v in 0..n {
                        if u != v && rng.gen_bool(0.35) {
                            d.add_arc(u, v);
                        }
                    }
                }
                let fast = automorphism_group(&d, DEFAULT_NODE_BUDGET).unwrap().order().unwrap();
                assert_eq!(fast, brute_force_aut_order(&d), "graph {d:?}");
            }
        }
    }

    #[test]
    fn every_reported_automorphism_preserves_arcs() {
        let d = Digraph::from_arcs(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        let canonical = canonicalize(&d, DEFAULT_NODE_BUDGET).unwrap();
        for sigma in &canonical.automorphisms {
            assert_eq!(d.relabel(sigma), d);
        }
        assert_eq!(canonical.automorphisms.len(), 18); // 3 * 3 rotations * swap
    }

    #[test]
    fn budget_guard_trips() {
        // Budget 1 cannot finish any non-trivial search.
        let err = canonicalize(&directed_triangle(), 1).unwrap_err();
        assert_eq!(err, IsoError::BudgetExceeded { budget: 1 });
    }

    #[test]
    fn structure_report_on_the_triangle_rotations() {
        let aut = automorphism_group(&directed_triangle(), DEFAULT_NODE_BUDGET).unwrap();
        let report = aut_structure_report(&aut).unwrap();
        assert_eq!(report.order, 3);
        assert!(report.transitive);
        assert_eq!(report.element_order_counts.get(&3), Some(&2));
        assert_eq!(report.order7_normal_closure, None);
    }
}
