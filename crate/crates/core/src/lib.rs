//! Grassmannian solutions of direct-sum polygon and simplex equations.
//!
//! A point of Gr(n+1, 2n+1) with nonvanishing Plücker coordinates yields
//! matrices solving the (2n+1)-gon equation and, assembled into
//! block-antidiagonal R-matrices, the 2n-simplex equation. Everything is
//! checked exactly over Q, F_p or GF(p^k).

pub mod batch;
pub mod combinatorics;
pub mod error;
pub mod exterior;
pub mod field;
pub mod grassmann;
pub mod linalg;
pub mod report;
pub mod solutions;
pub mod verify;

pub use error::{Error, Result};
pub use exterior::{IndexSet, Multivector};
pub use field::{Field, FieldSpec, Scalar};
pub use grassmann::{random_point, GrassmannPoint, PlueckerTable};
pub use linalg::Matrix;
pub use report::{Report, Status};
pub use solutions::{Kind, OperatorSlot};
pub use verify::{Check, ReductionOptions};
