//! Exact enumeration and verification of line configurations on surfaces in
//! projective 3-space over finite fields.
//!
//! The crate is organised bottom-up:
//!
//! - [`gf`] — arithmetic in GF(p^k) with canonical element indexing,
//!   Frobenius, and subfield embeddings;
//! - [`linalg`] — small exact linear algebra (RREF, nullspaces, 4x4 matrices);
//! - [`proj3`] — points, planes, and lines of P^3 with Pluecker coordinates;
//! - [`forms`] — sparse homogeneous forms and their exact restrictions,
//!   sections, and substitutions;
//! - [`lines`] — two independent enumeration routes for the lines on a
//!   surface, transversal search, and the associated binary-form data;
//! - [`intmat`] — exact integer rank and determinant over arbitrary precision;
//! - [`incidence`] — intersection matrices, plane profiles, and rank checks;
//! - [`gq`] — finite incidence structures, generalized-quadrangle axioms,
//!   duality, and 3-regularity of triads;
//! - [`configs`] — detection and normalization of the special configurations
//!   (doubly ruled quadrics, stars, star-chord pairs, extremal forms);
//! - [`bounds`] — closed-form count tables and identities;
//! - [`report`] — machine-readable and human-readable result reports.

pub mod bounds;
pub mod configs;
pub mod forms;
pub mod gf;
pub mod gq;
pub mod incidence;
pub mod intmat;
pub mod linalg;
pub mod lines;
pub mod proj3;
pub mod report;

pub use forms::{parse_form, parse_scalar, parse_surface_file, BinaryForm, FormError, SurfaceForm};
pub use gf::{FieldCtx, FieldElement, FieldId, GfError};
pub use lines::{LineSet, LinesError};
pub use proj3::{GeomError, Line, Plane, Point};
