//! Exact computation of the Cayley-Bacharach point: the unique ninth point
//! shared by every plane cubic through eight points in general position.
//!
//! All arithmetic is over the rationals. The crate offers four formulas for
//! the point ([`cbpoint`]), an independent certifier based on the pencil of
//! cubics, a randomized identity harness ([`verify`]) and the min-plus
//! analogue of the formulas ([`tropical`]).

pub mod cbpoint;
pub mod error;
pub mod exact;
pub mod monomials;
pub mod projective;
pub mod sample;
pub mod tropical;
pub mod verify;

pub use cbpoint::{compute_p9, Method, Solution};
pub use error::{Error, Result};
pub use exact::{Rat, RatMatrix};
pub use projective::{Config8, ProjPoint, ProjTransform};
