//! The projective plane PG(2,q) with a fixed nondegenerate quadratic form,
//! its conic and nucleus, and the vertex set of normalized nonsingular points.
//!
//! The coordinate realization is Q(x) = x0*x2 + x1^2, which puts the conic
//! on the rational normal curve {(1, t, t^2)} u {(0,0,1)} and the nucleus at
//! (0,1,0). The associated bilinear form is (x,y) = x0*y2 + x2*y0; in
//! characteristic 2 it is symmetric and alternating, and the nucleus spans
//! its radical.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::gf2e::{FieldElement, FieldError, FieldSpec};

/// A coordinate triple, not necessarily normalized or projectively reduced.
pub type Triple = [FieldElement; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("singular point has no normalization")]
    SingularPoint,
    #[error("bundle conic parameter must be nonzero")]
    ZeroBundleParameter,
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Q(x) = x0*x2 + x1^2.
pub fn quadratic_form(x: &Triple) -> FieldElement {
    x[0] * x[2] + x[1] * x[1]
}

/// The bilinear form (x,y) = x0*y2 + x2*y0, defined by
/// Q(x+y) = Q(x) + Q(y) + (x,y).
pub fn bilinear_form(x: &Triple, y: &Triple) -> FieldElement {
    x[0] * y[2] + x[2] * y[0]
}

pub fn scale(a: FieldElement, x: &Triple) -> Triple {
    [a * x[0], a * x[1], a * x[2]]
}

pub fn add_triples(x: &Triple, y: &Triple) -> Triple {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2]]
}

/// The nucleus (0,1,0): the common point of all tangent lines of the conic.
pub fn nucleus(field: FieldSpec) -> Triple {
    [field.zero(), field.one(), field.zero()]
}

/// A nonsingular projective point stored by its normalized representative,
/// the unique scalar multiple with Q = 1. Two points are equal iff their
/// coordinate triples are equal.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: Triple,
}

impl ProjectivePoint {
    pub fn coords(&self) -> &Triple {
        &self.coords
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjectivePoint{self}")
    }
}

/// Scales a triple with Q(x) != 0 to the unique representative with Q = 1,
/// namely Q(x)^(-1/2) * x. Idempotent and constant on projective classes.
pub fn normalize(x: &Triple) -> Result<ProjectivePoint, GeometryError> {
    let q = quadratic_form(x);
    if q.is_zero() {
        return Err(GeometryError::SingularPoint);
    }
    let s = q.sqrt().inv().expect("sqrt of a nonzero element is nonzero");
    let coords = scale(s, x);
    debug_assert_eq!(quadratic_form(&coords), q.field().one());
    Ok(ProjectivePoint { coords })
}

/// One canonical representative per point of PG(2,q): q^2 + q + 1 triples
/// with leading nonzero coordinate 1, in lexicographic bit order.
pub fn projective_points(field: FieldSpec) -> Vec<Triple> {
    let zero = field.zero();
    let one = field.one();
    let mut out = Vec::with_capacity((field.order() * field.order() + field.order() + 1) as usize);
    for y in field.all_elements() {
        for z in field.all_elements() {
            out.push([one, y, z]);
        }
    }
    for z in field.all_elements() {
        out.push([zero, one, z]);
    }
    out.push([zero, zero, one]);
    out
}

/// The q + 1 points of the conic Q = 0, as canonical representatives.
pub fn conic_points(field: FieldSpec) -> Vec<Triple> {
    projective_points(field)
        .into_iter()
        .filter(|x| quadratic_form(x).is_zero())
        .collect()
}

/// The vertex set X: the q^2 - 1 nonsingular points other than the nucleus,
/// each stored normalized, ordered lexicographically by coordinate encodings.
pub struct VertexSet {
    field: FieldSpec,
    points: Vec<ProjectivePoint>,
    index: HashMap<ProjectivePoint, usize>,
}

impl VertexSet {
    pub fn new(field: FieldSpec) -> Self {
        let nucleus = normalize(&nucleus(field)).expect("the nucleus is nonsingular");
        let mut points: Vec<ProjectivePoint> = projective_points(field)
            .iter()
            .filter(|x| !quadratic_form(x).is_zero())
            .map(|x| normalize(x).expect("nonsingular by the filter"))
            .filter(|p| *p != nucleus)
            .collect();
        points.sort();
        let index: HashMap<ProjectivePoint, usize> =
            points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        assert_eq!(points.len(), index.len(), "normalized representatives collide");
        let q = field.order() as usize;
        assert_eq!(points.len(), q * q - 1);
        VertexSet { field, points, index }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &ProjectivePoint {
        &self.points[i]
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn index_of(&self, p: &ProjectivePoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Bilinear form of the stored (normalized) representatives.
    pub fn bilinear(&self, i: usize, j: usize) -> FieldElement {
        bilinear_form(self.points[i].coords(), self.points[j].coords())
    }

    /// The antipodal class of vertex `p`: all vertices x with (x,p) = 0 on
    /// normalized representatives, including `p` itself. Size q - 1.
    pub fn antipodal_class(&self, p: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.bilinear(i, p).is_zero()).collect()
    }

    /// The unique conic point on the polar line of vertex `p`.
    pub fn perp_conic_point(&self, p: usize) -> Result<Triple, GeometryError> {
        if p >= self.len() {
            return Err(GeometryError::VertexOutOfRange(p));
        }
        let pc = self.points[p].coords();
        let matches: Vec<Triple> = conic_points(self.field)
            .into_iter()
            .filter(|y| bilinear_form(y, pc).is_zero())
            .collect();
        // The polar line of p passes through the nucleus, so it is a tangent.
        assert_eq!(matches.len(), 1, "polar line of a vertex must be tangent to the conic");
        Ok(matches[0])
    }

    /// The vertices on the conic Q(p)Q(x) + c(x,p)^2 = 0 for c != 0. The
    /// conic has one further point, on C (the one returned by
    /// [`perp_conic_point`](Self::perp_conic_point)), which lies outside X.
    pub fn bundle_conic(&self, p: usize, c: FieldElement) -> Result<Vec<usize>, GeometryError> {
        if c.is_zero() {
            return Err(GeometryError::ZeroBundleParameter);
        }
        if p >= self.len() {
            return Err(GeometryError::VertexOutOfRange(p));
        }
        let pc = self.points[p].coords();
        let qp = quadratic_form(pc);
        let members: Vec<usize> = (0..self.len())
            .filter(|&i| {
                let x = self.points[i].coords();
                let pairing = bilinear_form(x, pc);
                (qp * quadratic_form(x) + c * pairing * pairing).is_zero()
            })
            .collect();
        assert_eq!(members.len(), self.field.order() as usize);
        Ok(members)
    }

    /// Human-readable vertex listing, one `i: (x0,x1,x2)` line per vertex.
    pub fn export_lines(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for (i, p) in self.points.iter().enumerate() {
            writeln!(out, "{i}: {p}").unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn gf8() -> FieldSpec {
        FieldSpec::new(3, 0b1011).unwrap()
    }

    fn t(field: FieldSpec, a: u32, b: u32, c: u32) -> Triple {
        [field.element(a), field.element(b), field.element(c)]
    }

    #[test]
    fn quadratic_form_examples() {
        let f = gf8();
        assert_eq!(quadratic_form(&t(f, 1, 0, 1)), f.one());
        assert_eq!(quadratic_form(&t(f, 1, 1, 1)), f.zero());
        // The nucleus is Q-nonsingular; it must be excluded separately.
        assert_eq!(quadratic_form(&nucleus(f)), f.one());
    }

    #[test]
    fn bilinear_form_examples() {
        let f = gf8();
        assert_eq!(bilinear_form(&t(f, 1, 0, 0), &t(f, 0, 0, 1)), f.one());
        for x in projective_points(f) {
            assert_eq!(bilinear_form(&x, &x), f.zero());
            assert_eq!(bilinear_form(&nucleus(f), &x), f.zero());
        }
    }

    #[test]
    fn bilinear_form_matches_defining_identity() {
        // (x,y) = Q(x+y) + Q(x) + Q(y), exhaustively over coordinate triples.
        for e in [1, 2, 3] {
            let f = FieldSpec::with_default_modulus(e).unwrap();
            let els: Vec<_> = f.all_elements().collect();
            let mut triples = Vec::new();
            for &a in &els {
                for &b in &els {
                    for &c in &els {
                        triples.push([a, b, c]);
                    }
                }
            }
            for x in &triples {
                for y in &triples {
                    let lhs = bilinear_form(x, y);
                    let rhs = quadratic_form(&add_triples(x, y))
                        + quadratic_form(x)
                        + quadratic_form(y);
                    assert_eq!(lhs, rhs);
                    assert_eq!(lhs, bilinear_form(y, x));
                }
            }
        }
    }

    #[test]
    fn bilinearity_in_first_argument() {
        let f = gf8();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut iter = std::iter::from_fn(move || {
            Some(t(f, rng.gen_range(0..8), rng.gen_range(0..8), rng.gen_range(0..8)))
        });
        for _ in 0..200 {
            let x = iter.next().unwrap();
            let y = iter.next().unwrap();
            let z = iter.next().unwrap();
            assert_eq!(
                bilinear_form(&add_triples(&x, &y), &z),
                bilinear_form(&x, &z) + bilinear_form(&y, &z)
            );
        }
    }

    #[test]
    fn quadratic_form_scaling_exhaustive() {
        // Q(a*x) = a^2 * Q(x) for q <= 16.
        for e in 1..=4 {
            let f = FieldSpec::with_default_modulus(e).unwrap();
            let els: Vec<_> = f.all_elements().collect();
            for &a in &els {
                for &x0 in &els {
                    for &x1 in &els {
                        for &x2 in &els {
                            let x = [x0, x1, x2];
                            assert_eq!(
                                quadratic_form(&scale(a, &x)),
                                a * a * quadratic_form(&x)
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let f = gf8();
        let p = normalize(&t(f, 1, 0, 1)).unwrap();
        assert_eq!(*p.coords(), t(f, 1, 0, 1));
        // Q(1,0,2) = 2, sqrt(2) = 6, inv(6) = 3, so the representative is 3*(1,0,2).
        let p = normalize(&t(f, 1, 0, 2)).unwrap();
        assert_eq!(*p.coords(), t(f, 3, 0, 6));
        assert_eq!(normalize(&t(f, 1, 1, 1)), Err(GeometryError::SingularPoint));
    }

    #[test]
    fn normalize_is_idempotent_and_scale_invariant() {
        let f = gf8();
        for x in projective_points(f) {
            if quadratic_form(&x).is_zero() {
                continue;
            }
            let p = normalize(&x).unwrap();
            assert_eq!(normalize(p.coords()).unwrap(), p);
            assert_eq!(quadratic_form(p.coords()), f.one());
            for a in f.all_elements().skip(1) {
                assert_eq!(normalize(&scale(a, &x)).unwrap(), p);
            }
        }
    }

    #[test]
    fn vertex_set_sizes() {
        for (e, expect) in [(1u32, 3usize), (2, 15), (3, 63), (4, 255)] {
            let f = FieldSpec::with_default_modulus(e).unwrap();
            let x = VertexSet::new(f);
            assert_eq!(x.len(), expect);
            // Lexicographic order on coordinate encodings.
            for w in x.points().windows(2) {
                assert!(w[0] < w[1]);
            }
            for (i, p) in x.points().iter().enumerate() {
                assert_eq!(x.index_of(p), Some(i));
                assert_eq!(quadratic_form(p.coords()), f.one());
            }
            assert!(x.index_of(&normalize(&nucleus(f)).unwrap()).is_none());
        }
    }

    #[test]
    fn conic_point_counts_and_plane_inventory() {
        for e in [1u32, 2, 3, 4] {
            let f = FieldSpec::with_default_modulus(e).unwrap();
            let q = f.order() as usize;
            let conic = conic_points(f);
            assert_eq!(conic.len(), q + 1);
            for x in &conic {
                assert!(quadratic_form(x).is_zero());
                assert_eq!(bilinear_form(x, &nucleus(f)), f.zero());
            }
            // |X| + |C| + nucleus = q^2 + q + 1, the whole plane.
            let x = VertexSet::new(f);
            assert_eq!(x.len() + conic.len() + 1, q * q + q + 1);
            assert_eq!(projective_points(f).len(), q * q + q + 1);
        }
    }

    #[test]
    fn conic_is_the_rational_normal_curve() {
        let f = gf8();
        let conic = conic_points(f);
        for s in f.all_elements() {
            let p = [f.one(), s, s * s];
            assert!(conic.contains(&p));
        }
        assert!(conic.contains(&[f.zero(), f.zero(), f.one()]));
    }

    #[test]
    fn perp_conic_point_is_unique_and_orthogonal() {
        for e in [2u32, 3] {
            let f = FieldSpec::with_default_modulus(e).unwrap();
            let x = VertexSet::new(f);
            for p in 0..x.len() {
                let y = x.perp_conic_point(p).unwrap();
                assert!(quadratic_form(&y).is_zero());
                assert!(bilinear_form(&y, x.point(p).coords()).is_zero());
                assert!(normalize(&y).is_err());
            }
        }
    }

    #[test]
    fn bundle_conics_partition_the_complement_of_the_antipodal_class() {
        for e in [2u32, 3] {
            let f = FieldSpec::with_default_modulus(e).unwrap();
            let q = f.order() as usize;
            let x = VertexSet::new(f);
            let p = 0;
            let class = x.antipodal_class(p);
            assert_eq!(class.len(), q - 1);
            assert!(class.contains(&p));
            let mut seen: Vec<usize> = class.clone();
            for c in f.all_elements().skip(1) {
                let conic = x.bundle_conic(p, c).unwrap();
                assert_eq!(conic.len(), q);
                for &v in &conic {
                    assert!(!seen.contains(&v), "bundle conics must be pairwise disjoint");
                    seen.push(v);
                }
            }
            // (q-1) singleton-class members + (q-1) conics of size q = q^2 - 1.
            assert_eq!(seen.len(), x.len());
            assert_eq!(
                x.bundle_conic(p, f.zero()),
                Err(GeometryError::ZeroBundleParameter)
            );
        }
    }

    #[test]
    fn export_lines_format() {
        let f = FieldSpec::with_default_modulus(1).unwrap();
        let x = VertexSet::new(f);
        let text = x.export_lines();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("0: ("));
    }
}
