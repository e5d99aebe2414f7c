pub mod algebra;
pub mod error;
pub mod goodwillie;
pub mod joint_det;
pub mod symbols;
pub mod transfer;
pub mod valuations;

pub use algebra::{Elem, Field, FieldKind, Matrix, Poly, PolyMatrix, RationalFunction};
pub use error::{Error, Result};
pub use symbols::{canonical_class, FunctionFieldSymbol, KCanonicalClass, MilnorExpression};
