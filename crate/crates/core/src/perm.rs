//! Permutations of a finite point set and finitely generated permutation
//! groups with full-enumeration closure.
//!
//! Every group handled here has order at most a few tens of thousands, so
//! instead of stabilizer-chain machinery the element set is enumerated
//! outright (breadth-first closure under the generators) and cached. A
//! configurable cap guards against runaway closures.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

/// Default cap on the number of elements a closure may enumerate.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("permutation images are not a bijection")]
    NotABijection,
    #[error("a group needs at least one generator")]
    EmptyGenerators,
    #[error("generators have mixed degrees")]
    MixedDegrees,
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("group closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("the given set is not invariant under the group")]
    NotInvariant,
    #[error("malformed permutation line {0:?}")]
    MalformedPermutation(String),
}

/// A permutation of {0..n-1}, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u16).collect(),
        }
    }

    /// Builds a permutation from an image list, checking bijectivity.
    pub fn from_images(images: Vec<u16>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img as usize >= n || seen[img as usize] {
                return Err(GroupError::NotABijection);
            }
            seen[img as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    /// Composition `self ∘ other`: apply `other` first, then `self`.
    /// This convention is fixed throughout the crate.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in composition");
        Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u16; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u16;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img as usize)
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                len += 1;
                v = self.apply(v);
            }
            lengths.push(len);
        }
        lengths
    }

    /// Order of the permutation: the lcm of its cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_lengths().iter().fold(1u64, |acc, &l| lcm(acc, l as u64))
    }

    /// Parses the one-line serialization: space-separated images.
    pub fn parse(line: &str) -> Result<Self, GroupError> {
        let images: Vec<u16> = line
            .split_whitespace()
            .map(|w| w.parse::<u16>())
            .collect::<Result<_, _>>()
            .map_err(|_| GroupError::MalformedPermutation(line.to_string()))?;
        Permutation::from_images(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &img in &self.images {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{img}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{self}]")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A permutation group given by generators, with the full element set
/// enumerated on demand and cached. Enumeration is deterministic: a
/// breadth-first closure whose frontier is sorted at every layer.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    cap: usize,
    elements: OnceLock<Vec<Permutation>>,
}

impl PermGroup {
    pub fn new(generators: Vec<Permutation>) -> Result<Self, GroupError> {
        if generators.is_empty() {
            return Err(GroupError::EmptyGenerators);
        }
        let degree = generators[0].degree();
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(GroupError::MixedDegrees);
        }
        Ok(PermGroup {
            degree,
            generators,
            cap: DEFAULT_CLOSURE_CAP,
            elements: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        let group = PermGroup::new(vec![Permutation::identity(degree)]).unwrap();
        group.elements.set(vec![Permutation::identity(degree)]).unwrap();
        group
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Wraps an already-closed element list as a group (generators = elements).
    pub fn from_elements(degree: usize, elements: Vec<Permutation>) -> Result<Self, GroupError> {
        let group = PermGroup::new(elements.clone())?;
        assert_eq!(group.degree, degree);
        group.elements.set(elements).unwrap();
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// The full element set, enumerated by breadth-first closure under the
    /// generators. Deterministic discovery order; cached after first use.
    pub fn elements(&self) -> Result<&[Permutation], GroupError> {
        if let Some(els) = self.elements.get() {
            return Ok(els);
        }
        let computed = self.enumerate()?;
        Ok(self.elements.get_or_init(|| computed))
    }

    fn enumerate(&self) -> Result<Vec<Permutation>, GroupError> {
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut discovered = Vec::new();
        seen.insert(id.clone());
        discovered.push(id.clone());
        let mut frontier = vec![id];
        while !frontier.is_empty() {
            frontier.sort();
            let mut next = Vec::new();
            for f in &frontier {
                for g in &self.generators {
                    let p = g.compose(f);
                    if seen.insert(p.clone()) {
                        if seen.len() > self.cap {
                            return Err(GroupError::ClosureCapExceeded { cap: self.cap });
                        }
                        discovered.push(p.clone());
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        Ok(discovered)
    }

    pub fn order(&self) -> Result<u64, GroupError> {
        Ok(self.elements()?.len() as u64)
    }

    /// Orbit of a point under the generators (no enumeration needed). Sorted.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>, GroupError> {
        if point >= self.degree {
            return Err(GroupError::PointOutOfRange { point, degree: self.degree });
        }
        let mut in_orbit = vec![false; self.degree];
        in_orbit[point] = true;
        let mut stack = vec![point];
        while let Some(v) = stack.pop() {
            for g in &self.generators {
                let w = g.apply(v);
                if !in_orbit[w] {
                    in_orbit[w] = true;
                    stack.push(w);
                }
            }
        }
        Ok((0..self.degree).filter(|&v| in_orbit[v]).collect())
    }

    pub fn is_transitive(&self) -> Result<bool, GroupError> {
        Ok(self.orbit(0)?.len() == self.degree)
    }

    /// Orbits of the group on an invariant subset, each orbit sorted, the
    /// list sorted by (size, smallest member). Errors if the subset is not
    /// invariant.
    pub fn orbits_on_set(&self, set: &[usize]) -> Result<Vec<Vec<usize>>, GroupError> {
        let members: HashSet<usize> = set.iter().copied().collect();
        for &s in set {
            if s >= self.degree {
                return Err(GroupError::PointOutOfRange { point: s, degree: self.degree });
            }
            for g in &self.generators {
                if !members.contains(&g.apply(s)) {
                    return Err(GroupError::NotInvariant);
                }
            }
        }
        let mut assigned: HashSet<usize> = HashSet::new();
        let mut orbits = Vec::new();
        let mut sorted_set: Vec<usize> = set.to_vec();
        sorted_set.sort_unstable();
        sorted_set.dedup();
        for &start in &sorted_set {
            if assigned.contains(&start) {
                continue;
            }
            let mut orbit = vec![start];
            assigned.insert(start);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for g in &self.generators {
                    let w = g.apply(v);
                    if assigned.insert(w) {
                        orbit.push(w);
                        stack.push(w);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits.sort_by_key(|o| (o.len(), o[0]));
        Ok(orbits)
    }

    /// The subgroup of all enumerated elements fixing `point`.
    pub fn point_stabilizer(&self, point: usize) -> Result<PermGroup, GroupError> {
        if point >= self.degree {
            return Err(GroupError::PointOutOfRange { point, degree: self.degree });
        }
        let fixing: Vec<Permutation> = self
            .elements()?
            .iter()
            .filter(|p| p.apply(point) == point)
            .cloned()
            .collect();
        PermGroup::from_elements(self.degree, fixing)
    }

    /// True iff the group is elementary abelian of exponent 2: every
    /// non-identity element has order 2 (which also forces commutativity,
    /// checked on the generators for good measure).
    pub fn is_elementary_abelian_2(&self) -> Result<bool, GroupError> {
        for p in self.elements()? {
            if !p.is_identity() && !p.compose(p).is_identity() {
                return Ok(false);
            }
        }
        for a in &self.generators {
            for b in &self.generators {
                if a.compose(b) != b.compose(a) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Serialization: a `degree=<n> gens=<k>` header followed by one
    /// space-separated image line per generator.
    pub fn serialize(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "degree={} gens={}", self.degree, self.generators.len()).unwrap();
        for g in &self.generators {
            writeln!(out, "{g}").unwrap();
        }
        out
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PermGroup(degree={}, gens={}, enumerated={})",
            self.degree,
            self.generators.len(),
            self.elements.get().map(|e| e.len()).unwrap_or(0)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(images: &[u16]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    #[test]
    fn composition_convention_is_right_to_left() {
        // g = (0 1 2), h = (0 2 1); compose(g, h) applies h first.
        let g = perm(&[1, 2, 0]);
        let h = perm(&[2, 0, 1]);
        assert!(g.compose(&h).is_identity());
        // Product of the 3-cycle with itself, multiplied by hand.
        assert_eq!(g.compose(&g), h);
        let id = Permutation::identity(3);
        assert_eq!(id.compose(&g), g);
        assert!(g.compose(&g.inverse()).is_identity());
    }

    #[test]
    fn bijection_validation() {
        assert!(Permutation::from_images(vec![0, 0, 2]).is_err());
        assert!(Permutation::from_images(vec![0, 3]).is_err());
        assert!(Permutation::from_images(vec![]).is_ok());
    }

    #[test]
    fn permutation_order_via_cycles() {
        assert_eq!(perm(&[1, 2, 0]).order(), 3);
        assert_eq!(perm(&[1, 0, 3, 2]).order(), 2);
        assert_eq!(perm(&[1, 0, 3, 4, 2]).order(), 6);
        assert_eq!(Permutation::identity(5).order(), 1);
    }

    #[test]
    fn closure_of_a_cycle_is_cyclic() {
        let n = 7;
        let mut images: Vec<u16> = (1..n as u16).collect();
        images.push(0);
        let group = PermGroup::new(vec![perm(&images)]).unwrap();
        assert_eq!(group.order().unwrap(), n as u64);
    }

    #[test]
    fn closure_cap_guard() {
        // S_8 has 40320 elements; a cap of 100 must refuse.
        let transpositions: Vec<Permutation> = (0..7)
            .map(|i| {
                let mut images: Vec<u16> = (0..8).collect();
                images.swap(i, i + 1);
                perm(&images)
            })
            .collect();
        let group = PermGroup::new(transpositions).unwrap().with_cap(100);
        assert_eq!(
            group.elements().unwrap_err(),
            GroupError::ClosureCapExceeded { cap: 100 }
        );
    }

    #[test]
    fn closure_is_independent_of_generator_order() {
        // (0 1 2) and (0 1) generate the symmetric group on {0,1,2}.
        let a = perm(&[1, 2, 0, 3]);
        let b = perm(&[1, 0, 2, 3]);
        let g1 = PermGroup::new(vec![a.clone(), b.clone()]).unwrap();
        let g2 = PermGroup::new(vec![b, a]).unwrap();
        let s1: HashSet<_> = g1.elements().unwrap().iter().cloned().collect();
        let s2: HashSet<_> = g2.elements().unwrap().iter().cloned().collect();
        assert_eq!(s1, s2);
        assert_eq!(s1.len(), 6);
    }

    #[test]
    fn elements_contain_identity_and_inverses() {
        let g = PermGroup::new(vec![perm(&[1, 2, 3, 0]), perm(&[1, 0, 2, 3])]).unwrap();
        let els = g.elements().unwrap();
        assert!(els.iter().any(|p| p.is_identity()));
        let set: HashSet<_> = els.iter().cloned().collect();
        for p in els {
            assert!(set.contains(&p.inverse()));
        }
    }

    #[test]
    fn orbit_examples() {
        let trivial = PermGroup::trivial(5);
        assert_eq!(trivial.orbit(3).unwrap(), vec![3]);
        let cycle = PermGroup::new(vec![perm(&[1, 2, 3, 4, 0])]).unwrap();
        assert_eq!(cycle.orbit(0).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(cycle.is_transitive().unwrap());
        assert!(cycle.orbit(9).is_err());
    }

    #[test]
    fn orbit_stabilizer_identity_on_s4() {
        let s4 = PermGroup::new(vec![perm(&[1, 0, 2, 3]), perm(&[1, 2, 3, 0])]).unwrap();
        assert_eq!(s4.order().unwrap(), 24);
        for point in 0..4 {
            let stab = s4.point_stabilizer(point).unwrap();
            let orbit = s4.orbit(point).unwrap();
            assert_eq!(s4.order().unwrap(), stab.order().unwrap() * orbit.len() as u64);
        }
    }

    #[test]
    fn stabilizer_orbits_partition_remaining_points() {
        let s4 = PermGroup::new(vec![perm(&[1, 0, 2, 3]), perm(&[1, 2, 3, 0])]).unwrap();
        let stab = s4.point_stabilizer(0).unwrap();
        let rest: Vec<usize> = (1..4).collect();
        let orbits = stab.orbits_on_set(&rest).unwrap();
        assert_eq!(orbits, vec![vec![1, 2, 3]]);
        let trivial = PermGroup::trivial(4);
        assert_eq!(
            trivial.orbits_on_set(&rest).unwrap(),
            vec![vec![1], vec![2], vec![3]]
        );
    }

    #[test]
    fn orbits_on_set_rejects_non_invariant_sets() {
        let cycle = PermGroup::new(vec![perm(&[1, 2, 3, 4, 0])]).unwrap();
        assert_eq!(
            cycle.orbits_on_set(&[0, 1]).unwrap_err(),
            GroupError::NotInvariant
        );
    }

    #[test]
    fn elementary_abelian_detection() {
        let klein = PermGroup::new(vec![perm(&[1, 0, 3, 2]), perm(&[2, 3, 0, 1])]).unwrap();
        assert!(klein.is_elementary_abelian_2().unwrap());
        assert_eq!(klein.order().unwrap(), 4);
        let c4 = PermGroup::new(vec![perm(&[1, 2, 3, 0])]).unwrap();
        assert!(!c4.is_elementary_abelian_2().unwrap());
        assert!(PermGroup::trivial(4).is_elementary_abelian_2().unwrap());
    }

    #[test]
    fn serialization_round_trip_for_permutations() {
        let p = perm(&[2, 0, 1, 3]);
        assert_eq!(p.to_string(), "2 0 1 3");
        assert_eq!(Permutation::parse("2 0 1 3").unwrap(), p);
        assert!(Permutation::parse("2 0 1 9").is_err());
        assert!(Permutation::parse("a b").is_err());
        let g = PermGroup::new(vec![p]).unwrap();
        let text = g.serialize();
        assert!(text.starts_with("degree=4 gens=1\n"));
    }
}
