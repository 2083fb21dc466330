//! Eta-quotients on Γ₀(N) and Γ₁(N): admissibility, characters, cusp orders,
//! exact q-expansions, dimension formulas, enumeration and independence checks.

pub mod dims;
pub mod enumerate;
pub mod error;
pub mod eta;
pub mod numthy;
pub mod qseries;
pub mod verify;

pub use error::{Error, Result};
pub use eta::{Classification, CuspOrders, EtaQuotient, GeneralizedEtaQuotient, QuadChar};
pub use numthy::{Rational, RationalMatrix};
pub use qseries::QSeries;
pub use enumerate::{EnumerationReport, PrimeLevelParams};
pub use verify::IndependenceCertificate;
