//! Exact-arithmetic construction, search, and certification of the pair of
//! directed strongly regular graphs with parameters (63,11,8,1,2).
//!
//! The undirected side of the story works over any binary field GF(2^e):
//! the nonsingular points of a conic in PG(2,q), normalized so the
//! quadratic form takes value 1, carry a distance-regular graph with
//! intersection array {q, q-2, 1; 1, 1, q}, an antipodal (q-1)-fold cover
//! of the complete graph on q+1 vertices. At q = 8 the semilinear point
//! stabilizer splits the six antipodes of each vertex into two orbits of
//! size 3, and orienting one orbit's worth of arcs produces two
//! non-isomorphic directed strongly regular graphs, each the transpose of
//! the other, with full automorphism group of order 1512.
//!
//! Everything is exact: bit-packed adjacency matrices, machine-integer path
//! counts, enumerated permutation groups, and a canonical-labeling engine
//! for the isomorphism claims. The [`search`] module independently recovers
//! both digraphs by exhausting all 140 stabilizer-orbit unions that could
//! serve as an invariant out-neighborhood, certifying that the pair is the
//! complete answer for this group action.
//!
//! Modules:
//!
//! - [`gf2e`]: arithmetic in GF(2^e), including the characteristic-2 square
//!   root used by normalization.
//! - [`geometry`]: the plane, the form, the conic and its nucleus, the
//!   vertex set, and the bundle of conics through a base point.
//! - [`perm`]: permutations, closure enumeration, orbits, stabilizers.
//! - [`digraph`]: exact digraphs, the dsrg and distance-regularity
//!   certificates, antipodal partitions, and the file formats.
//! - [`construction`]: the cover graph, the group actions, and the two
//!   directed graphs.
//! - [`search`]: the exhaustive transitive search.
//! - [`iso`]: color refinement, canonical forms, isomorphisms, and
//!   automorphism groups.

pub mod construction;
pub mod digraph;
pub mod geometry;
pub mod gf2e;
pub mod iso;
pub mod perm;
pub mod search;

pub use construction::{ConstructionContext, OrbitChoice};
pub use digraph::{Digraph, DsrgParams};
pub use geometry::VertexSet;
pub use gf2e::FieldSpec;
pub use perm::{PermGroup, Permutation};
