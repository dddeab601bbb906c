//! The book's chapters as doc comments, so `cargo test` runs every snippet.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/johnson-coverage.md")]
pub mod johnson_coverage {}
#[doc = include_str!("../../../book/src/codes.md")]
pub mod codes {}
#[doc = include_str!("../../../book/src/gap-realizations.md")]
pub mod gap_realizations {}
#[doc = include_str!("../../../book/src/reductions.md")]
pub mod reductions {}
#[doc = include_str!("../../../book/src/integrality-gap.md")]
pub mod integrality_gap {}
#[doc = include_str!("../../../book/src/hypergraph.md")]
pub mod hypergraph {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
