//! Verified numerics for concave kite central configurations of the
//! planar four-body problem with two pairs of equal masses.
//!
//! The layers, bottom up: outward-rounded [`interval`] arithmetic,
//! forward-mode [`autodiff`] over a generic [`scalar::Scalar`], the kite
//! and full planar equations ([`kite`], [`planar`]), the Krawczyk test
//! ([`krawczyk`]), the branch-and-prune driver ([`prover`]) and its
//! [`certificate`] files, bifurcation classification ([`bifurcation`]),
//! and the results built on them: inequality [`claims`], landmark
//! [`points`], the curve and branches ([`continuation`]) and the
//! reference [`table`].

pub mod autodiff;
pub mod bifurcation;
pub mod boxes;
pub mod certificate;
pub mod claims;
pub mod continuation;
pub mod error;
pub mod f2_numerator;
pub mod interval;
pub mod kite;
pub mod krawczyk;
pub mod planar;
pub mod points;
pub mod prover;
pub mod scalar;
pub mod system;
pub mod table;

pub use boxes::IntervalBox;
pub use error::{CertError, DomainError};
pub use interval::Interval;
pub use scalar::Scalar;
pub use system::{ParamSystem, System};
