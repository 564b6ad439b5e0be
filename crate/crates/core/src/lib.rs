//! Exact A-polynomial factors of Dehn fillings of the Whitehead sister link
//! complement.
//!
//! The Whitehead sister is the (−2, 3, 8)-pretzel link complement; filling
//! one cusp along a slope p/q leaves a one-cusped manifold whose A-polynomial
//! factor this crate computes exactly, by:
//!
//! 1. walking the Farey triangulation from the triangle of the parent
//!    triangulation to the filling slope ([`farey`]),
//! 2. reading off one Ptolemy equation per layered tetrahedron along the walk
//!    plus a folding equation at the end ([`ptolemy`]),
//! 3. eliminating the γ variables by recursive substitution and clearing
//!    extraneous factors ([`eliminate`]),
//! backed by an exact sparse Laurent-polynomial core ([`algebra`]) and checked
//! against independent resultant and numeric oracles ([`oracle`]).
//!
//! All computation is exact integer arithmetic; floating point appears only
//! inside the numeric verification oracle.

pub mod algebra;
pub mod eliminate;
pub mod farey;
pub mod oracle;
pub mod ptolemy;
