//! Finite MV-algebras, the dual spaces of their lattice reducts, and the
//! sheaf representations over prime and maximal MV-spectra.

pub mod bitset;
pub mod ideal_arith;
pub mod lattice;
pub mod mv;
pub mod order;
pub mod sheaf;
pub mod spectrum;
pub mod topology;
pub mod verify;

pub use bitset::BitSet;
pub use lattice::{DualSpacePoint, FiniteDistLattice, FiniteLattice, FilterSet, IdealSet};
pub use mv::{Algebra, AlgebraSpec, Chang, ChangElem, FiniteMv, MvOps};
pub use order::FinitePoset;
