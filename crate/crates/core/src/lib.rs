//! Exact enumeration of independent sets in the Hamming cube `Q_d`, the
//! container certificates for 2-linked even sets, and numerical checks of
//! the supporting bounds.

pub mod bounds;
pub mod containers;
pub mod cube;
pub mod enumeration;
pub mod error;
pub mod exact;
pub mod half;
pub mod linked;
pub mod profile;

pub use cube::{
    closure, is_two_linked, neighborhood, two_components, Dim, Parity, Vertex, VertexSet,
};
pub use error::{Error, Result};
pub use half::HalfCube;
pub use profile::{Features, ProfileKey, ProfileTable};
