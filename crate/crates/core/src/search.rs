//! Exhaustive search for every directed strongly regular graph with
//! parameters (63,11,8,1,2) admitting a vertex-transitive action of the
//! linear group of order 504.
//!
//! A transitive digraph invariant under the group is determined by the
//! out-neighborhood of the base vertex, which must be a union of orbits of
//! the base-vertex stabilizer. The stabilizer here is elementary abelian of
//! order 8 with orbit sizes 1x7 and 8x7, so an out-degree of 11 forces one
//! size-8 orbit plus three singletons: 7 * C(6,3) = 140 candidates, each
//! induced to a digraph and run through the exact certificate.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::construction::{ConstructionContext, ConstructionError, OrbitChoice};
use crate::digraph::{verify_dsrg, Digraph, DsrgParams};
use crate::iso::{self, IsoError};
use crate::perm::GroupError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("this search needs field order 8, got {0}")]
    FieldOrderNotEight(u32),
    #[error("stabilizer orbit sizes {0:?} contradict the expected 1x7 and 8x7 profile")]
    UnexpectedSuborbits(Vec<usize>),
    #[error("the stabilizer is not elementary abelian of order 8")]
    StabilizerNotE8,
    #[error("candidate orbit union is not invariant under the base stabilizer")]
    CandidateNotWellDefined,
    #[error("induced digraph is not invariant under the group")]
    InducedNotInvariant,
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Iso(#[from] IsoError),
}

/// Base vertex for the whole search. Transitivity makes the choice
/// immaterial; fixing it makes runs reproducible.
pub const BASE_VERTEX: usize = 0;

/// Orbits of the linear base-vertex stabilizer on all vertices, sorted by
/// (size, smallest member): seven singletons (the base antipodal class)
/// followed by seven orbits of size 8. The orbit profile, the stabilizer
/// structure, and the singleton set are all verified.
pub fn suborbits(ctx: &ConstructionContext) -> Result<Vec<Vec<usize>>, SearchError> {
    if ctx.field().order() != 8 {
        return Err(SearchError::FieldOrderNotEight(ctx.field().order()));
    }
    let stabilizer = ctx.group_small().point_stabilizer(BASE_VERTEX)?;
    if stabilizer.order()? != 8 || !stabilizer.is_elementary_abelian_2()? {
        return Err(SearchError::StabilizerNotE8);
    }
    let all: Vec<usize> = (0..ctx.vertices().len()).collect();
    let orbits = stabilizer.orbits_on_set(&all)?;
    let sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
    let expected: Vec<usize> = [vec![1; 7], vec![8; 7]].concat();
    if sizes != expected {
        return Err(SearchError::UnexpectedSuborbits(sizes));
    }
    let singletons: Vec<usize> = orbits.iter().take(7).map(|o| o[0]).collect();
    let mut class = ctx.vertices().antipodal_class(BASE_VERTEX);
    class.sort_unstable();
    if singletons != class {
        return Err(SearchError::UnexpectedSuborbits(
            orbits.iter().map(|o| o.len()).collect(),
        ));
    }
    Ok(orbits)
}

/// A union of stabilizer orbits serving as a candidate out-neighborhood of
/// the base vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Candidate {
    /// Indices into the suborbit list, sorted.
    pub orbit_indices: Vec<usize>,
}

impl Candidate {
    pub fn union(&self, suborbits: &[Vec<usize>]) -> Vec<usize> {
        let mut points: Vec<usize> = self
            .orbit_indices
            .iter()
            .flat_map(|&i| suborbits[i].iter().copied())
            .collect();
        points.sort_unstable();
        points
    }

    pub fn total_size(&self, suborbits: &[Vec<usize>]) -> usize {
        self.orbit_indices.iter().map(|&i| suborbits[i].len()).sum()
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "orbits {:?}", self.orbit_indices)
    }
}

/// All index subsets of the given sizes summing exactly to `target`, in
/// lexicographic order.
pub fn orbit_subsets_with_total(sizes: &[usize], target: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn go(
        sizes: &[usize],
        from: usize,
        remaining: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if remaining == 0 {
            out.push(chosen.clone());
            return;
        }
        for i in from..sizes.len() {
            if sizes[i] <= remaining {
                chosen.push(i);
                go(sizes, i + 1, remaining - sizes[i], chosen, out);
                chosen.pop();
            }
        }
    }
    go(sizes, 0, target, &mut chosen, &mut out);
    out
}

/// Every union of suborbits, excluding the base vertex's own singleton,
/// whose sizes sum to `k`. With the 1x6 + 8x7 profile left after the
/// exclusion and k = 11, this is one size-8 orbit plus three singletons.
pub fn enumerate_candidates(suborbits: &[Vec<usize>], k: usize) -> Vec<Candidate> {
    let base_orbit = suborbits
        .iter()
        .position(|o| o.contains(&BASE_VERTEX))
        .expect("the base vertex lies in some orbit");
    let sizes: Vec<usize> = suborbits.iter().map(|o| o.len()).collect();
    orbit_subsets_with_total(&sizes, k)
        .into_iter()
        .filter(|subset| !subset.contains(&base_orbit))
        .map(|orbit_indices| Candidate { orbit_indices })
        .collect()
}

/// The digraph induced by a candidate: the orbit under the linear group of
/// the arcs from the base vertex into the candidate union. Checks that the
/// union is stabilizer-invariant (making out-neighborhoods well defined)
/// and that the result is group-invariant with uniform out-degree.
pub fn induce_digraph(
    ctx: &ConstructionContext,
    suborbits: &[Vec<usize>],
    candidate: &Candidate,
) -> Result<Digraph, SearchError> {
    let union = candidate.union(suborbits);
    let stabilizer = ctx.group_small().point_stabilizer(BASE_VERTEX)?;
    for g in stabilizer.generators() {
        let mut image: Vec<usize> = union.iter().map(|&v| g.apply(v)).collect();
        image.sort_unstable();
        if image != union {
            return Err(SearchError::CandidateNotWellDefined);
        }
    }
    let n = ctx.vertices().len();
    let mut d = Digraph::empty(n);
    for g in ctx.group_small().elements()? {
        let from = g.apply(BASE_VERTEX);
        for &s in &union {
            d.add_arc(from, g.apply(s));
        }
    }
    let k = union.len();
    if (0..n).any(|v| d.out_degree(v) != k) {
        return Err(SearchError::InducedNotInvariant);
    }
    for g in ctx.group_small().generators() {
        if d.relabel(g) != d {
            return Err(SearchError::InducedNotInvariant);
        }
    }
    Ok(d)
}

/// One isomorphism class among the surviving digraphs.
pub struct SearchClass {
    pub representative: Digraph,
    pub representative_candidate: Candidate,
    /// Indices into the candidate list of every member of the class.
    pub members: Vec<usize>,
    pub aut_order: u64,
    /// Which constructed digraph the representative is isomorphic to.
    pub matches: Option<OrbitChoice>,
}

pub struct SearchReport {
    pub params: DsrgParams,
    pub candidate_count: usize,
    pub survivor_count: usize,
    pub classes: Vec<SearchClass>,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "parameters: ({})", self.params)?;
        writeln!(f, "candidates: {}", self.candidate_count)?;
        writeln!(f, "survivors: {}", self.survivor_count)?;
        writeln!(f, "classes: {}", self.classes.len())?;
        for (i, class) in self.classes.iter().enumerate() {
            writeln!(
                f,
                "class {}: {} members, |Aut| = {}, representative {}{}",
                i + 1,
                class.members.len(),
                class.aut_order,
                class.representative_candidate,
                match class.matches {
                    Some(c) => format!(", isomorphic to delta {c}"),
                    None => String::new(),
                }
            )?;
        }
        Ok(())
    }
}

/// Runs all candidates through the exact certificate and classifies the
/// survivors up to isomorphism. Deterministic: candidates are enumerated in
/// lexicographic order and classes appear in first-survivor order.
pub fn search_all(ctx: &ConstructionContext) -> Result<SearchReport, SearchError> {
    let params = DsrgParams::new(63, 11, 8, 1, 2).expect("valid parameters");
    let orbits = suborbits(ctx)?;
    let candidates = enumerate_candidates(&orbits, params.k as usize);
    let mut survivors: Vec<(usize, Digraph)> = Vec::new();
    for (index, candidate) in candidates.iter().enumerate() {
        let d = induce_digraph(ctx, &orbits, candidate)?;
        if verify_dsrg(&d, params).ok() {
            survivors.push((index, d));
        }
    }
    let delta_a = ctx.build_delta(OrbitChoice::A)?;
    let delta_b = ctx.build_delta(OrbitChoice::B)?;
    let mut by_form: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
    let mut class_order: Vec<Vec<u8>> = Vec::new();
    let mut first_member: BTreeMap<Vec<u8>, (usize, Digraph)> = BTreeMap::new();
    for (index, d) in &survivors {
        let form = iso::canonical_form(d)?;
        if !by_form.contains_key(&form) {
            class_order.push(form.clone());
            first_member.insert(form.clone(), (*index, d.clone()));
        }
        by_form.entry(form).or_default().push(*index);
    }
    let mut classes = Vec::new();
    for form in class_order {
        let (rep_index, representative) = first_member.remove(&form).expect("recorded above");
        let aut_order = iso::automorphism_group(&representative, iso::DEFAULT_NODE_BUDGET)?
            .order()?;
        let matches = if iso::find_isomorphism(&representative, &delta_a, iso::DEFAULT_NODE_BUDGET)?.is_some() {
            Some(OrbitChoice::A)
        } else if iso::find_isomorphism(&representative, &delta_b, iso::DEFAULT_NODE_BUDGET)?.is_some() {
            Some(OrbitChoice::B)
        } else {
            None
        };
        classes.push(SearchClass {
            representative,
            representative_candidate: candidates[rep_index].clone(),
            members: by_form.remove(&form).expect("recorded above"),
            aut_order,
            matches,
        });
    }
    Ok(SearchReport {
        params,
        candidate_count: candidates.len(),
        survivor_count: survivors.len(),
        classes,
    })
}
