//! Exact algebra of finitely generated modules over F2[x]: polynomials,
//! dense F2 linear algebra, Smith normal form, invariant-factor
//! decomposition, the x-order filtration on T/xT with its graded
//! identification with ker(x), and block-triangular filtered maps.

mod blockmap;
mod gf2;
mod module;
mod poly;
mod snf;

pub use blockmap::{gr_eps_from_q3, BlockMapFacts, BlockTriangularMap, Implication};
pub use gf2::Gf2Matrix;
pub use module::{
    decompose, psi_iso, ses_dims, v_space, Decomposition, FgModule, FilteredSpace, PsiIso,
    SesDims, SummandGenerator, SummandKind,
};
pub use poly::Poly2;
pub use snf::{smith_normal_form, PolyMatrix, SmithDecomposition};
