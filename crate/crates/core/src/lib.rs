//! Exact coefficients of Catalan states in the Kauffman bracket expansion of
//! the lattice crossing `L(m,n)`.
//!
//! Three independent routes compute the coefficient `C(A)` of a state:
//!
//! * [`oracle`]: the full Kauffman state sum over all `2^{mn}` markers, or the
//!   restricted sum over the `(n+1)^m` row-monotone markers,
//! * [`poset`]: the sum `A^{2|b|-mn}` over the fiber of sequences realizing the state,
//! * [`tree`] and [`coeff`]: the plucking polynomial of the dual rooted tree.

pub mod algebra;
pub mod catalan;
pub mod coeff;
pub mod oracle;
pub mod par;
pub mod poset;
pub mod tree;
pub mod verify;

pub use algebra::{q_factorial, q_int, q_multinomial, AlgebraError, LaurentPoly, QPoly, SeqReport};
pub use coeff::{CoeffError, CoeffReport, Route};
pub use catalan::{Boundary, CatalanError, CatalanState, Point, Side};
pub use oracle::{Budget, Expansion, KauffmanState, Lattice, MarkerConvention, Oracle, OracleError, SmoothedDiagram};
pub use par::Exec;
pub use poset::{BSeq, FiberMode, FiberPoset, PosetError};
pub use tree::{DelayFn, PlaneTree, Realizability, TreeError};
