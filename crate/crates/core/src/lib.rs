//! Homotopy and cobordism invariants of finite covers of triangulated
//! manifolds.
//!
//! A cover of a complex by `n + 2` sets is stored as a label set per vertex;
//! set `i` is the union of open stars of the vertices carrying label `i`.
//! When no simplex sees every label the cover induces a PL map into the
//! boundary of the `(n+1)`-simplex, and the invariants of that map (degree,
//! Hopf invariant) classify the cover up to homotopy and cobordism.
//!
//! All arithmetic is exact.

pub mod classify;
pub mod cover;
pub mod exec;
pub mod fixtures;
pub mod invariants;
pub mod io;
pub mod rational;
pub mod search;
pub mod simplicial;
