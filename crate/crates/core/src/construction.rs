//! Building the cover graph on the normalized nonsingular points, realizing
//! the projective groups as vertex permutations, and producing the two
//! directed strongly regular graphs with parameters (63,11,8,1,2).
//!
//! The linear action comes from the conic parametrization: a 2x2 matrix
//! `[[a,b],[c,d]]` acts on parameters (s:t), which on coordinates (s^2,
//! st, t^2) is the 3x3 matrix `[[a^2,0,b^2],[ac,ad+bc,bd],[c^2,0,d^2]]`. That map
//! scales the quadratic form by det^2 and the bilinear form likewise, so it
//! permutes the vertex set and preserves adjacency of normalized
//! representatives exactly. The coordinatewise squaring map extends the
//! linear group by the field automorphisms.

use thiserror::Error;

use crate::digraph::{Digraph, IntersectionArray};
use crate::geometry::{normalize, quadratic_form, GeometryError, Triple, VertexSet};
use crate::gf2e::{FieldElement, FieldError, FieldSpec};
use crate::perm::{GroupError, PermGroup, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("this construction needs field order 8, got {0}")]
    FieldOrderNotEight(u32),
    #[error("singular matrix has no projective action")]
    SingularMatrix,
    #[error("{group} group has order {found}, expected {expected}")]
    GroupOrder { group: &'static str, expected: u64, found: u64 },
    #[error("adjacency criteria disagree at vertex pair ({0},{1})")]
    CriterionMismatch(usize, usize),
    #[error("induced map does not scale the quadratic form by det^2")]
    NotQuasiIsometry,
    #[error("induced map does not preserve the bilinear pairing of representatives")]
    PairingNotPreserved,
    #[error("stabilizer orbits on the antipodes have sizes {0:?}, expected two of size 3")]
    AntipodeOrbits(Vec<usize>),
    #[error("vertex {vertex} of the directed graph has out-degree {out_degree} and in-degree {in_degree}, expected {expected}")]
    DeltaDegree { vertex: usize, out_degree: usize, in_degree: usize, expected: usize },
    #[error("arc set is not invariant under the group action")]
    NotInvariant,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Which of the two stabilizer orbits of antipodes receives the one-way
/// arcs. `A` is the orbit containing the smallest-indexed antipode.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum OrbitChoice {
    A,
    B,
}

impl std::fmt::Display for OrbitChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrbitChoice::A => write!(f, "A"),
            OrbitChoice::B => write!(f, "B"),
        }
    }
}

/// The intersection array {q, q-2, 1; 1, 1, q} of the cover graph for
/// q >= 4: valency q with lambda = mu = 1, i.e. any two vertices at
/// distance 1 or 2 have exactly one common neighbor. c_2 = 1 is forced by
/// the antipodal-cover identity b_1 = (r-1) c_2 with r = q - 1.
pub fn gamma_intersection_array(q: u32) -> IntersectionArray {
    assert!(q >= 4, "the diameter-3 array needs q >= 4");
    let q = q as usize;
    IntersectionArray::new(vec![q, q - 2, 1], vec![1, 1, q])
}

/// The symmetric graph on the vertex set: x ~ y when the bilinear pairing
/// of the normalized representatives is 1, equivalently when (x,y)^2 =
/// Q(x)Q(y). Both criteria are evaluated and must agree.
pub fn build_gamma(vertices: &VertexSet) -> Digraph {
    let field = vertices.field();
    let one = field.one();
    let n = vertices.len();
    let mut gamma = Digraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            let pairing = vertices.bilinear(i, j);
            let adjacent = pairing == one;
            let qx = quadratic_form(vertices.point(i).coords());
            let qy = quadratic_form(vertices.point(j).coords());
            assert_eq!(
                pairing * pairing == qx * qy,
                adjacent,
                "adjacency criteria disagree at ({i},{j})"
            );
            if adjacent {
                gamma.add_arc(i, j);
                gamma.add_arc(j, i);
            }
        }
    }
    gamma
}

/// The 3x3 coordinate matrix induced by a 2x2 matrix via the conic
/// parametrization.
pub fn veronese_matrix(m: &[[FieldElement; 2]; 2]) -> [[FieldElement; 3]; 3] {
    let [[a, b], [c, d]] = *m;
    let zero = a.field().zero();
    [
        [a * a, zero, b * b],
        [a * c, a * d + b * c, b * d],
        [c * c, zero, d * d],
    ]
}

fn apply_matrix(m: &[[FieldElement; 3]; 3], x: &Triple) -> Triple {
    [
        m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2],
        m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
        m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2],
    ]
}

/// The vertex permutation induced by an invertible 2x2 matrix: act on
/// coordinates through the induced 3x3 matrix and renormalize. Checks that
/// the map scales Q by det^2 and preserves the pairing of normalized
/// representatives (hence adjacency and antipodality) before returning.
pub fn veronese_permutation(
    vertices: &VertexSet,
    m: &[[FieldElement; 2]; 2],
) -> Result<Permutation, ConstructionError> {
    let det = m[0][0] * m[1][1] + m[0][1] * m[1][0];
    if det.is_zero() {
        return Err(ConstructionError::SingularMatrix);
    }
    let big = veronese_matrix(m);
    let det_sq = det * det;
    let mut images = Vec::with_capacity(vertices.len());
    for p in vertices.points() {
        let image = apply_matrix(&big, p.coords());
        if quadratic_form(&image) != det_sq {
            return Err(ConstructionError::NotQuasiIsometry);
        }
        let normalized = normalize(&image)?;
        let index = vertices
            .index_of(&normalized)
            .expect("images of vertices are vertices");
        images.push(index as u16);
    }
    let perm = Permutation::from_images(images).map_err(ConstructionError::Group)?;
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if vertices.bilinear(perm.apply(i), perm.apply(j)) != vertices.bilinear(i, j) {
                return Err(ConstructionError::PairingNotPreserved);
            }
        }
    }
    Ok(perm)
}

/// The vertex permutation of coordinatewise squaring (the field
/// automorphism); its normalized images stay normalized.
pub fn frobenius_permutation(vertices: &VertexSet) -> Permutation {
    let images = vertices
        .points()
        .iter()
        .map(|p| {
            let c = p.coords();
            let image = [c[0].square(), c[1].square(), c[2].square()];
            let normalized = normalize(&image).expect("squaring preserves Q = 1");
            vertices.index_of(&normalized).expect("squaring permutes the vertex set") as u16
        })
        .collect();
    Permutation::from_images(images).expect("the field automorphism acts bijectively")
}

/// Everything the directed construction and the search need: the vertex
/// set, the cover graph, and the linear and semilinear groups acting on it.
pub struct ConstructionContext {
    field: FieldSpec,
    vertices: VertexSet,
    gamma: Digraph,
    psl_generators: Vec<Permutation>,
    frobenius: Permutation,
    group_small: PermGroup,
    group_full: PermGroup,
}

impl ConstructionContext {
    /// Builds the context and verifies the group orders q(q^2-1) and
    /// q(q^2-1)e, and the invariance of the cover graph under every
    /// generator.
    pub fn new(field: FieldSpec) -> Result<Self, ConstructionError> {
        let vertices = VertexSet::new(field);
        let gamma = build_gamma(&vertices);
        let one = field.one();
        let zero = field.zero();
        let g = field.primitive_element();
        let matrices = [
            [[one, one], [zero, one]],
            [[zero, one], [one, zero]],
            [[g, zero], [zero, g.inv()?]],
        ];
        let psl_generators: Vec<Permutation> = matrices
            .iter()
            .map(|m| veronese_permutation(&vertices, m))
            .collect::<Result<_, _>>()?;
        let frobenius = frobenius_permutation(&vertices);
        for perm in psl_generators.iter().chain([&frobenius]) {
            if gamma.relabel(perm) != gamma {
                return Err(ConstructionError::NotInvariant);
            }
        }
        let group_small = PermGroup::new(psl_generators.clone())?;
        let mut full_gens = psl_generators.clone();
        full_gens.push(frobenius.clone());
        let group_full = PermGroup::new(full_gens)?;
        let q = field.order() as u64;
        let expected_small = q * (q * q - 1);
        let expected_full = expected_small * field.exponent() as u64;
        let found_small = group_small.order()?;
        if found_small != expected_small {
            return Err(ConstructionError::GroupOrder {
                group: "linear",
                expected: expected_small,
                found: found_small,
            });
        }
        let found_full = group_full.order()?;
        if found_full != expected_full {
            return Err(ConstructionError::GroupOrder {
                group: "semilinear",
                expected: expected_full,
                found: found_full,
            });
        }
        Ok(ConstructionContext {
            field,
            vertices,
            gamma,
            psl_generators,
            frobenius,
            group_small,
            group_full,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn gamma(&self) -> &Digraph {
        &self.gamma
    }

    pub fn psl_generators(&self) -> &[Permutation] {
        &self.psl_generators
    }

    pub fn frobenius(&self) -> &Permutation {
        &self.frobenius
    }

    /// The linear group L_2(q) as vertex permutations, order q(q^2-1).
    pub fn group_small(&self) -> &PermGroup {
        &self.group_small
    }

    /// The semilinear group, order q(q^2-1)e.
    pub fn group_full(&self) -> &PermGroup {
        &self.group_full
    }

    /// The antipodes of `p`: its antipodal class minus `p` itself.
    pub fn antipodes(&self, p: usize) -> Vec<usize> {
        self.vertices
            .antipodal_class(p)
            .into_iter()
            .filter(|&v| v != p)
            .collect()
    }

    /// Splits the six antipodes of `p` (q = 8 only) into the two orbits of
    /// the semilinear point stabilizer. Orbit A contains the
    /// smallest-indexed antipode.
    pub fn antipode_split(&self, p: usize) -> Result<(Vec<usize>, Vec<usize>), ConstructionError> {
        if self.field.order() != 8 {
            return Err(ConstructionError::FieldOrderNotEight(self.field.order()));
        }
        let stabilizer = self.group_full.point_stabilizer(p)?;
        let orbits = stabilizer.orbits_on_set(&self.antipodes(p))?;
        if orbits.len() != 2 || orbits.iter().any(|o| o.len() != 3) {
            return Err(ConstructionError::AntipodeOrbits(
                orbits.iter().map(|o| o.len()).collect(),
            ));
        }
        // orbits_on_set sorts by (size, smallest member), so orbit A leads.
        Ok((orbits[0].clone(), orbits[1].clone()))
    }

    /// The directed strongly regular graph for one orbit choice: the cover
    /// graph plus the orbit under the full group of the arcs from the base
    /// vertex 0 to the chosen antipode orbit. Verifies 11-regularity and
    /// invariance before returning.
    pub fn build_delta(&self, choice: OrbitChoice) -> Result<Digraph, ConstructionError> {
        let base = 0;
        let (orbit_a, orbit_b) = self.antipode_split(base)?;
        let seeds = match choice {
            OrbitChoice::A => orbit_a,
            OrbitChoice::B => orbit_b,
        };
        let mut delta = self.gamma.clone();
        for g in self.group_full.elements()? {
            for &a in &seeds {
                delta.add_arc(g.apply(base), g.apply(a));
            }
        }
        let expected = self.field.order() as usize + 3;
        let (outs, ins) = delta.degrees();
        for v in 0..delta.n() {
            if outs[v] != expected || ins[v] != expected {
                return Err(ConstructionError::DeltaDegree {
                    vertex: v,
                    out_degree: outs[v],
                    in_degree: ins[v],
                    expected,
                });
            }
        }
        for g in self.group_full.generators() {
            if delta.relabel(g) != delta {
                return Err(ConstructionError::NotInvariant);
            }
        }
        Ok(delta)
    }

    /// Checks that the orbits of the linear point stabilizer of `p` are
    /// exactly the q-1 singletons of p's antipodal class plus the q-1
    /// bundle conics (one per nonzero parameter c), and exhibits the
    /// orbit-to-parameter bijection.
    pub fn verify_bundle_structure(&self, p: usize) -> Result<BundleCertificate, ConstructionError> {
        let q = self.field.order() as usize;
        let stabilizer = self.group_small.point_stabilizer(p)?;
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let orbits = stabilizer.orbits_on_set(&all)?;
        let singletons: Vec<usize> = orbits
            .iter()
            .filter(|o| o.len() == 1)
            .map(|o| o[0])
            .collect();
        let big: Vec<&Vec<usize>> = orbits.iter().filter(|o| o.len() == q).collect();
        if singletons.len() != q - 1
            || big.len() != q - 1
            || singletons.len() + big.iter().map(|o| o.len()).sum::<usize>() != self.vertices.len()
        {
            return Ok(BundleCertificate {
                ok: false,
                witness: Some(format!(
                    "stabilizer orbit sizes {:?}, expected {} singletons and {} of size {}",
                    orbits.iter().map(|o| o.len()).collect::<Vec<_>>(),
                    q - 1,
                    q - 1,
                    q
                )),
                conic_parameters: Vec::new(),
            });
        }
        let mut class = self.vertices.antipodal_class(p);
        class.sort_unstable();
        if singletons != class {
            return Ok(BundleCertificate {
                ok: false,
                witness: Some(format!(
                    "singleton orbits {singletons:?} differ from the antipodal class {class:?}"
                )),
                conic_parameters: Vec::new(),
            });
        }
        // Each size-q orbit must be a bundle conic; the pairing with p is
        // constant v on it and the parameter is c = v^{-2}.
        let mut parameters = Vec::new();
        for orbit in &big {
            let v0 = self.vertices.bilinear(orbit[0], p);
            if v0.is_zero() || orbit.iter().any(|&x| self.vertices.bilinear(x, p) != v0) {
                return Ok(BundleCertificate {
                    ok: false,
                    witness: Some(format!("orbit {orbit:?} has no constant nonzero pairing with {p}")),
                    conic_parameters: Vec::new(),
                });
            }
            let c = v0.inv()?.square();
            let mut conic = self.vertices.bundle_conic(p, c)?;
            conic.sort_unstable();
            if conic != **orbit {
                return Ok(BundleCertificate {
                    ok: false,
                    witness: Some(format!(
                        "orbit {orbit:?} is not the bundle conic of parameter {c} ({conic:?})"
                    )),
                    conic_parameters: Vec::new(),
                });
            }
            parameters.push(c);
        }
        let mut distinct = parameters.clone();
        distinct.sort();
        distinct.dedup();
        let ok = distinct.len() == q - 1 && distinct.iter().all(|c| !c.is_zero());
        Ok(BundleCertificate {
            ok,
            witness: if ok {
                None
            } else {
                Some("conic parameters do not exhaust the nonzero field elements".to_string())
            },
            conic_parameters: parameters,
        })
    }
}

/// Outcome of the bundle-structure check, with the conic parameter matched
/// to each size-q stabilizer orbit.
#[derive(Clone, Debug)]
pub struct BundleCertificate {
    pub ok: bool,
    pub witness: Option<String>,
    pub conic_parameters: Vec<FieldElement>,
}

impl std::fmt::Display for BundleCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ok {
            write!(f, "bundle structure: PASS ({} conics)", self.conic_parameters.len())
        } else {
            write!(
                f,
                "bundle structure: FAIL ({})",
                self.witness.as_deref().unwrap_or("unknown")
            )
        }
    }
}
