//! Exact polyhedral kernel: hulls, Minkowski sums, volumes, Newton
//! diagram covolumes and regular subdivisions.

mod dd;
pub mod linalg;
pub mod newton;
pub mod polytope;
pub mod subdivision;

pub use newton::{covolume, Covolume, NewtonDiagram};
pub use polytope::{convex_hull, minkowski_sum, volume_exact, Facet, HRep, RationalPolytope};
pub use subdivision::{regular_subdivision, Cell, RegularSubdivision};
