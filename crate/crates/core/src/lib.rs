//! Symbolic combinatorial group theory for braid-group families: Reidemeister–Schreier
//! rewriting of commutator subgroups, Tietze reduction of truncated presentations and
//! abelian invariants via Smith normal form.

pub mod abelian;
pub mod catalog;
pub mod derived;
pub mod error;
pub mod parser;
pub mod quotients;
pub mod report;
pub mod rewriting;
pub mod schema;
pub mod scripts;
pub mod tietze;
pub mod word;

pub use catalog::{catalog, GroupFamily};
pub use error::{Error, Result};
pub use parser::{emit, parse_presentation};
pub use schema::{PresentationSchema, RelatorSchema};
pub use word::{AbelianImage, Alphabet, FamilyDecl, Generator, Word};
