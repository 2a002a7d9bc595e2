//! Numerical convex geometry for L_p intersection bodies and the p-affine
//! dual curvature measures they generate.
//!
//! The crate covers origin-symmetric convex bodies in dimensions 2 and 3:
//!
//! - [`sphere`]: antipodally symmetric quadrature grids, interpolation of even
//!   functions and a Gauss–Jacobi rule for kernels `|u·v|^e`.
//! - [`body`]: symmetric polytopes (Wulff shapes), star bodies, radial Gauss
//!   maps, polar bodies and SL(n) images.
//! - [`transform`]: the p-cosine and spherical Radon transforms.
//! - [`lp`]: `I_p K`, `I K`, `I_p^2 K`, `I_0 K` and the sandwich bounds
//!   relating `I_p K` to `I K`.
//! - [`measure`]: the measure `𝓘_p(K,·)` by two independent routes, cone-volume
//!   measures, affine images and subspace concentration.
//! - [`solver`]: the even Minkowski problem `𝓘_p(K,·) = μ` solved by
//!   maximizing `p/(n(n-p)) log V(I_p[h]) + E_μ(h)` over log-supports.
//! - [`verify`]: the property suites behind the `verify` command.
//!
//! Node loops run on rayon when the `parallel` feature is enabled (the
//! default). Every reduction is performed sequentially in index order, so
//! results are bit-identical regardless of thread count.

pub mod body;
pub mod error;
pub mod geom;
pub mod io;
pub mod lp;
pub mod measure;
pub mod par;
pub mod solver;
pub mod special;
pub mod sphere;
pub mod transform;
pub mod verify;

pub use body::{Body, StarBody, SymmetricPolytope};
pub use error::{Error, Result};
pub use geom::{Mat3, Vec3};
pub use lp::LpParams;
pub use measure::DiscreteSphericalMeasure;
pub use sphere::{EvenSphericalFunction, SphericalGrid};
