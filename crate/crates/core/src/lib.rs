//! Exact Clifford algebras over the rationals and odd prime fields, the
//! group tower `Γ ⊃ Γ⁺ ⊃ Spin`, and constructive certificates for real
//! semisimple elements (`s t s⁻¹ = t⁻¹`) with brute-force finite-field
//! cross-checks.

pub mod clifford;
pub mod field;
pub mod groups;
pub mod linalg;
pub mod oracle;
pub mod quadratic;
pub mod reality;
pub mod report;
pub mod sampling;
pub mod strategy;
pub mod suites;

pub use clifford::{CliffordCtx, CliffordError, Multivector, Parity};
pub use field::{Field, FieldError, FieldSpec, Scalar};
pub use groups::{GroupElement, GroupError, OrthMatrix};
pub use linalg::{Matrix, Vector};
pub use quadratic::{QSpace, SpaceError, Subspace, WittBasis};
