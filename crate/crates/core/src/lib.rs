//! Surface-group representations into `PSL(2,R)`.
//!
//! The crate computes Euler numbers of representations of closed surface
//! groups, builds holonomies of regular hyperbolic `4g`-gons with one cone
//! point, solves the word problem and coset enumeration in surface groups,
//! and decides whether a purely hyperbolic representation of the form
//! `ρ₀ ∘ f_*` (with `ρ₀` Fuchsian) is the holonomy of a branched hyperbolic
//! structure.
//!
//! ```
//! use holonomy::polygon::build_regular;
//! use holonomy::euler::euler_number;
//! use std::f64::consts::PI;
//!
//! let octagon = build_regular(2, 2.0 * PI).unwrap();
//! let rho = octagon.holonomy_assignment().unwrap();
//! assert_eq!(euler_number(&rho).unwrap().value, -2);
//! ```

pub mod cosets;
pub mod euler;
pub mod formats;
pub mod gate;
pub mod isom2;
pub mod polygon;
pub mod suite;
pub mod surfgrp;

pub use euler::{euler_number, EulerResult, RepresentationAssignment};
pub use isom2::{IsometryClass, IsometryElement, Tolerance};
pub use surfgrp::{GroupWord, SurfaceHom, SurfacePresentation};
