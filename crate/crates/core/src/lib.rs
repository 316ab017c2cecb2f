//! Equivalence and automorphism groups of linear codes over finite fields.
//!
//! Codes are mapped to colored binary matrices built from the point and
//! hyperplane incidence of PG(k-1, q), and compared through canonical forms.
//! See the guide in `book/` for a walkthrough.

pub mod bits;
pub mod bmcanon;
pub mod codefile;
pub mod equiv;
pub mod error;
pub mod gfield;
pub mod gfmatrix;
pub mod lincode;
pub mod projgeom;
pub mod report;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/codes.md")]
    mod codes {}
    #[doc = include_str!("../../../book/src/canonical.md")]
    mod canonical {}
    #[doc = include_str!("../../../book/src/equivalence.md")]
    mod equivalence {}
    #[doc = include_str!("../../../book/src/automorphisms.md")]
    mod automorphisms {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
