//! Exact arithmetic: cyclotomic numbers, linear algebra over `Z/n`, and
//! integer Smith normal form.

pub mod cyclotomic;
pub mod modmat;
pub mod snf;

pub use cyclotomic::Cyclotomic;
pub use modmat::{HowellBasis, ModMatrix, ModSolution};
pub use snf::{smith_diagonal, smith_normal_form, IntMatrix, SmithDecomposition};
