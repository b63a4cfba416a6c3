//! Exact combinatorial engine for noncommutative cumulants and generalized
//! Gaussian families.
//!
//! The algebraic layers ([`cumulant`], [`wick`], [`forms`]) are generic over
//! [`Scalar`]; the aliases below fix the exact rational instantiation used by
//! the characterization checks in [`lab`] and by the JSON wire formats in [`io`].

pub mod cumulant;
pub mod error;
pub mod forms;
pub mod io;
pub mod lab;
pub mod lattice;
pub mod matrix;
pub mod partition;
pub mod poly;
pub mod scalar;
pub mod wick;

pub use error::{Error, Result};
pub use lattice::{connecting_partitions, enumerate, LatticeFamily};
pub use partition::{kernel, Partition};
pub use cumulant::{CumulantSpec, DegreeCaps, MomentFunction};
pub use matrix::Matrix;
pub use poly::{MomentFunctional, NCPolynomial};
pub use scalar::Scalar;
pub use wick::{PairWeight, WickState};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type RationalMatrix = Matrix<Rational>;
pub type RationalSpec = CumulantSpec<Rational>;
pub type RationalPolynomial = NCPolynomial<Rational>;
