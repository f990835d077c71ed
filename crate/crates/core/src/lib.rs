//! Formal Concept Analysis: contexts, concept lattices, implication bases,
//! association rules, multimodal clustering, JSM hypotheses, interval pattern
//! structures, Boolean matrix factorization, lattice-based ranking and
//! attribute exploration.

pub mod assoc;
pub mod bitset;
pub mod bmf;
pub mod clustering;
pub mod context;
pub mod datasets;
pub mod error;
pub mod exploration;
pub mod fraction;
pub mod implications;
pub mod io;
pub mod ir;
pub mod jsm;
pub mod lattice;
pub mod many_valued;
pub mod patterns;

pub use bitset::BitSet;
pub use bmf::BooleanMatrix;
pub use context::{FormalContext, Side};
pub use error::{FcaError, Result};
pub use exploration::{Answer, ExplorationSession};
pub use fraction::Fraction;
pub use implications::Implication;
pub use lattice::{ConceptLattice, FormalConcept};
pub use many_valued::{apply_scaling, ManyValuedContext, Scale, ScaleKind};
pub use patterns::{IntervalVector, PatternStructure};
