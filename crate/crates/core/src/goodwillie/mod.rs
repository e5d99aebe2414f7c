//! Goodwillie groups: formal sums of commuting matrix tuples modulo
//! similarity, block sums, and polynomial homotopy.

mod composition;
mod homotopy;
mod phi;
pub mod random;
mod tuple;

pub use composition::{composition_series, CompositionFactor};
pub use homotopy::{h_mult, h_shear, h_steinberg, h_swap};
pub use phi::{
    gw_relations_check, phi, phi_element, phi_expression, random_commutant, RelationsReport,
};
pub use tuple::{Boundary, GwElement, MatrixTuple, PolyMatrixTuple};
