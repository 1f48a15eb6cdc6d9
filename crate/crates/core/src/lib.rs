//! Digital n-surfaces and the discrete parabolic equation on them.
//!
//! * [`space`]: digital spaces (finite simple graphs), rims, balls, joins.
//! * [`topology`]: recognition of digital n-surfaces, interior and boundary
//!   points, Euler characteristic and orientability.
//! * [`catalog`]: spheres, balls, grids, the 12-point Moebius strip and an
//!   11-point projective plane.
//! * [`parabolic`]: coefficient matrices, explicit stepping, stationary
//!   limits and the spectral closed form.
//! * [`experiment`]: the Moebius-strip and projective-plane runs with their
//!   diagnostics.
//! * [`io`]: space, coefficient, initial-condition and trajectory files.
//!
//! ```
//! use digispace::catalog::build_moebius_12;
//! use digispace::parabolic::{run, CoefficientMatrix, Field};
//! use digispace::space::PointId;
//!
//! let g = build_moebius_12();
//! let c = CoefficientMatrix::lazy_uniform(&g, 0.03).unwrap();
//! let f0 = Field::from_points(&g, [(PointId(1), 12.0)]).unwrap();
//! let traj = run(&c, &f0, None, 100).unwrap();
//! assert!((traj.last().sum() - 12.0).abs() < 1e-9);
//! ```

pub mod catalog;
pub mod experiment;
pub mod io;
pub mod parabolic;
pub mod space;
pub mod topology;

pub use space::{DigitalSpace, PointId};

// Book chapters are compiled as doctests so their snippets stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/digital-spaces.md")]
    mod digital_spaces {}
    #[doc = include_str!("../../../book/src/surfaces.md")]
    mod surfaces {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
    #[doc = include_str!("../../../book/src/parabolic.md")]
    mod parabolic {}
    #[doc = include_str!("../../../book/src/limits.md")]
    mod limits {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
