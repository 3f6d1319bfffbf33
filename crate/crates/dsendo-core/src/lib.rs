//! Discrete-series L-packets of real reductive groups and their endoscopic
//! character identities, computed from root data.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`] — exact integer linear algebra (Smith normal form, finite
//!   abelian quotients);
//! * [`rootdata`] — based root data, Weyl groups, positive systems;
//! * [`realforms`] — gradings, real Weyl groups, Galois cohomology of the
//!   elliptic torus and the Tate–Nakayama pairing;
//! * [`covers`] — evaluation model of the elliptic torus, its double covers
//!   and Weyl denominators;
//! * [`packets`] — discrete parameters, component groups, packets,
//!   Harish-Chandra characters and genericity;
//! * [`endoscopy`] — endoscopic groups, transfer factors and the
//!   character-identity verifier;
//! * [`oracle`] — brute-force matrix models of `SL₂` and `PGL₂` used to
//!   validate the combinatorial rules.

pub mod covers;
pub mod endoscopy;
pub mod lattice;
pub mod oracle;
pub mod packets;
pub mod realforms;
pub mod rootdata;
