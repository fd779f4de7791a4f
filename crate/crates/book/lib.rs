//! The code listings of the guide in `book/src`, compiled and run as
//! doc-tests so the book cannot drift from the library.

#[doc = include_str!("../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../book/src/algebra.md")]
pub mod algebra {}

#[doc = include_str!("../../book/src/functions.md")]
pub mod functions {}

#[doc = include_str!("../../book/src/operators.md")]
pub mod operators {}

#[doc = include_str!("../../book/src/classification.md")]
pub mod classification {}

#[doc = include_str!("../../book/src/cli.md")]
pub mod cli {}
