//! Many-valued polarity-based semantics for modal logic on formal concepts.
//!
//! Truth values come from a finite residuated lattice ([`algebra`]); formulas
//! denote concepts of an A-valued formal context ([`context`]), and the modal
//! connectives are interpreted by extra relations on the context
//! ([`enriched`]).

pub mod algebra;
pub mod canonical;
pub mod context;
pub mod enriched;
pub mod error;
pub mod exec;
pub mod generate;
pub mod io;
pub mod logic;
pub mod market;
pub mod mvsets;
pub mod semantics;

pub use algebra::{AlgebraKind, Truth, TruthAlgebra};
pub use context::{Concept, ConceptLattice, Context, EnumerationOptions};
pub use enriched::{EnrichedContext, Relations};
pub use error::{Error, RelationSlot, Result};
pub use exec::Exec;
pub use mvsets::{MvRelation, MvSet};
pub use logic::{parse_formula, parse_sequent, Formula, Sequent};
pub use semantics::{Model, ValidityOptions};
