//! Rigorous certification toolkit.
//!
//! * [`numeric`]: dyadic and rational scalars, outward-rounded intervals, constants.
//! * [`expr`]: expression trees, interval evaluation and a bisection verifier.
//! * [`poly`]: exact sparse multivariate polynomials.
//! * [`bernstein`]: tensor Bernstein coefficients, subdivision and range bounds.
//! * [`kepler`]: the geometric functions, the polynomial surrogate and the inequality corpus.
//! * [`hypermap`]: plane graphs, hypermaps, enumeration, isomorphism, archives.
//! * [`lp`]: interval linear systems and Farkas certificate checking.
//! * [`cli`]: the `rigorkit` command line.

pub mod bernstein;
pub mod cli;
pub mod expr;
pub mod hypermap;
pub mod kepler;
pub mod lp;
pub mod numeric;
pub mod poly;
