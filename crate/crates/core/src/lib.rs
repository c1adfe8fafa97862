//! Exact Hochschild homology and cohomology of orbifolds.
//!
//! The crate decomposes the Hochschild invariants of a quotient stack into
//! twisted sectors, one per conjugacy class of the acting group, and computes
//! the bigraded dimension series of each sector exactly. It also covers
//! weighted projective stacks in closed form, and ships chain-level checks of
//! the topological inputs (the spaces `Γ_r` and the filtered circle).
//!
//! Module map:
//!
//! * [`exact`]: rationals, cyclotomic fields, polynomials, dense matrices,
//!   truncated bigraded series and integer Smith normal form.
//! * [`group`]: finite matrix groups over ℚ, conjugacy classes, centralizers.
//! * [`geometry`]: per-sector fixed subspaces, normal determinants and
//!   Koszul homology of derived fixed loci.
//! * [`hkr`]: Molien-type sector series plus a brute-force invariant oracle.
//! * [`wps`]: inertia components and HH vectors of weighted projective stacks.
//! * [`circle`]: Γ_r, its cover, and the filtered-circle fiber computations.
//! * [`cli`]: JSON job specifications and report rendering.

pub mod circle;
pub mod cli;
pub mod exact;
pub mod geometry;
pub mod group;
pub mod hkr;
pub mod wps;

pub use exact::{BiSeries, Cyclotomic, Field, IntMatrix, Matrix, Rational, UniPoly};
pub use group::{ConjClass, MatrixGroup};
