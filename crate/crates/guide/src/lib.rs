//! Runs the code blocks in `book/` as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/isometries.md")]
pub mod isometries {}
#[doc = include_str!("../../../book/src/euler.md")]
pub mod euler {}
#[doc = include_str!("../../../book/src/words.md")]
pub mod words {}
#[doc = include_str!("../../../book/src/cosets.md")]
pub mod cosets {}
#[doc = include_str!("../../../book/src/polygons.md")]
pub mod polygons {}
#[doc = include_str!("../../../book/src/gate.md")]
pub mod gate {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
