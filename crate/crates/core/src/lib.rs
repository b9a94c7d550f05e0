//! Model checking and weighted satisfiability for dependence, inclusion and
//! independence logic under team semantics.

pub mod eval;
pub mod formula;
pub mod model;
pub mod reductions;
pub mod wt;
pub mod verify;
