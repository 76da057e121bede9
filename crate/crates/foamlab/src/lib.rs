//! foamlab: combinatorial Klein foams and their families of real forms.
//!
//! The library realizes Klein foams as finite data: permutation monodromy
//! for branched covers of a genus-0 real base, cellular surfaces with
//! involutions, glued foam structures, and the equipped families of real
//! forms they induce. Everything is exact integer combinatorics; no
//! floating point is used anywhere.
//!
//! Conventions, fixed repo-wide:
//! - permutations act on `{1..d}` and compose left-to-right:
//!   `compose(p, q)` applies `p` first;
//! - free-group words are letter vectors (`-j` is the inverse of `x_j`);
//! - the real structure acts by `sigma*(x_j) = c_{j-1} x_j^-1 c_{j-1}^-1`
//!   with `c_j = x_1 .. x_j`.

pub mod error;
pub mod famforge;
pub mod foamkit;
pub mod io;
pub mod permcore;
pub mod realcover;
pub mod survey;

pub use error::{Error, Result};
