//! Doctest shim for the book: each chapter of `book/src` is included as
//! module documentation so `cargo test --doc -p msl-book` runs every code
//! snippet against the current `msl` API.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/operator.md")]
pub mod operator {}

#[doc = include_str!("../../../book/src/forward.md")]
pub mod forward {}

#[doc = include_str!("../../../book/src/validation.md")]
pub mod validation {}

#[doc = include_str!("../../../book/src/inverse.md")]
pub mod inverse {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/numerics.md")]
pub mod numerics {}
