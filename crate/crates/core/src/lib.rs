pub mod combinatorics;
pub mod decomposition;
pub mod error;
pub mod gfp;
mod grading;
pub mod oracle;
mod presentation;
pub mod quadric;
pub mod spinor;
pub mod tilting;

pub use error::{Error, Result};

// Chapters of the guide in book/, compiled as doctests.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quadrics.md")]
    mod quadrics {}
    #[doc = include_str!("../../../book/src/graded-pieces.md")]
    mod graded_pieces {}
    #[doc = include_str!("../../../book/src/decomposition.md")]
    mod decomposition {}
    #[doc = include_str!("../../../book/src/windows.md")]
    mod windows {}
    #[doc = include_str!("../../../book/src/tilting.md")]
    mod tilting {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
