//! Quadrivalent diagrams in the disk: matchings, slice words, the planar
//! combinatorial structure, faces, and local surgery.

mod canonical;
mod curls;
mod faces;
mod matching;
mod planar;
mod slice;
mod surgery;

pub use faces::{Face, FaceData};
pub use matching::{is_inversion, Matching, MatchingError};
pub use planar::{port_add, DiagramError, Encoding, End, PlanarDiagram, Strand, UnionFind};
pub use slice::{build_planar, Gen, SliceWord};
pub use canonical::canonical_reduced;
pub use curls::{find_big_bigon, find_big_curl, triangle_faces, BigBigon, BigCurl};
pub use surgery::{crossing_set_cuts, cuts_around, excise, Cut, Excision, Region};
