//! Combinatorial machinery of categories of paths: validation, alignment,
//! zigzag maps, Boolean rings of tail sets, the ultrafilter boundary, the
//! associated groupoid, degree functors, structural analysis, amalgamations,
//! and Toeplitz / Cuntz-Krieger generator-relation presentations verified on
//! concrete matrix representations.

pub mod amalgam;
pub mod analysis;
pub mod boolring;
pub mod boundary;
pub mod cat;
pub mod cli;
pub mod degree;
pub mod error;
pub mod groupoid;
pub mod io;
pub mod repemit;
pub mod testcats;
pub mod zigzag;

pub use cat::{PathCategory, PathId, PathSet, ValidationReport, Violation};
pub use error::CatError;
