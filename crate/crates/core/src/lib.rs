//! Finite left quasigroups, quasigroups and fan quasigroups as Cayley tables.
//!
//! Elements of an order-`n` structure are the integers `0..n`. Everything is
//! computed by exhaustive table scans:
//!
//! * [`magma`]: Cayley tables, quasigroup axioms, divisions, units.
//! * [`structure`]: commutant, nuclei, center, associators, fans, normality,
//!   quotient groups.
//! * [`products`]: direct, smashed and skew smashed products.
//! * [`identities`]: exhaustive checker for the associator identity calculus
//!   of fan quasigroups.
//! * [`search`]: Latin square enumeration, seeded factor sampling and
//!   witness search.
//! * [`io`] and [`cli`]: file formats and the `qgforge` command line.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod identities;
pub mod io;
pub mod magma;
pub mod products;
pub mod search;
pub mod structure;
pub mod subset;

pub use error::{QgError, Result};
pub use magma::FiniteMagma;
pub use subset::ElementSubset;
