//! Finite algebras, binary relations on them, and free algebras of the
//! varieties they generate.

mod algebra;
mod binrel;
mod closure;
mod eval;
mod free;
mod relations;

pub use algebra::{catalog, FiniteAlgebra, Operation, CATALOG};
pub use binrel::{compose, kfold, plus, BinRel, PlusResult};
pub use closure::{Closure, Provenance, Term};
pub use eval::{eval_term, eval_with_stabilization, IndexedEnv, RelEnv};
pub use free::{free_algebra, points, FreeAlgebra, DEFAULT_FREE_CAP, DEFAULT_TABLE_CAP};
pub use relations::{cg, crg, enumerate_con, enumerate_crr, eqv, is_compatible, DEFAULT_ENUM_BOUND};

pub use algebra::for_each_tuple;
