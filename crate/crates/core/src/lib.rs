//! Exact arithmetic for the framed instanton homology of Dehn surgeries.
//!
//! Everything here is closed-form integer bookkeeping: dimensions of the
//! surgered homology groups over F2 and over C, the Froyshov invariant q3,
//! derived obstructions (instanton L-space status, integral 2-torsion,
//! SU(2)-abelian exclusion), and fixpoint propagation of bounds on the
//! concordance invariant M through crossing-change and clasp constraints.
//! A small module-algebra toolkit over F2[x] (Smith normal form, invariant
//! factors, the kernel/cokernel bookkeeping of the x-action) backs the
//! structural checks.
//!
//! No gauge theory is computed: dimensions come from surgery formulas
//! evaluated on knot invariant records, and every formula is cross-checked
//! against brute-force oracles in the test suite.

pub mod dims;
pub mod error;
pub mod froyshov;
pub mod knotdb;
pub mod modalg;
pub mod obstruct;
pub mod propagate;
pub mod scan;
pub mod slope;

pub use error::{Error, Result};
pub use knotdb::{KnotRecord, KnotTable};
pub use slope::{BundleClass, Slope, SlopeTriple};
