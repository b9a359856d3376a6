//! Mean curvature flow with Gaussian-type density `e^{ε·½nμ²|x|²}` for closed
//! polygons in the plane (n = 1) and closed triangle meshes in space (n = 2).
//!
//! The crate is organised around four layers:
//!
//! * [`geom`]: discrete curvature, measures, convexity, enclosing and
//!   inscribed balls, Hausdorff distance.
//! * [`flow`]: explicit time integration. Velocity laws and densities are
//!   strategies behind [`flow::VelocityField`] and [`flow::Density`], looked
//!   up by name in a [`registry::Registry`].
//! * [`transforms`]: the closed-form maps relating the density flow to the
//!   ordinary flow (time reparametrization, rescaling, translation), plus the
//!   round-sphere solutions.
//! * [`diagnostics`]: weighted measures, evolution residuals, roundness and
//!   the theorem validators.
//!
//! [`io`] holds shape generators, file formats, configuration and the
//! command implementations used by the `gmcf` binary.

pub mod diagnostics;
pub mod error;
pub mod flow;
pub mod geom;
pub mod io;
pub mod registry;
pub mod transforms;

pub use error::{Error, FlowError, GeomError, TransformError};
pub use geom::{Ball, Curve2, Hypersurface, Mesh3, Shape};
pub use transforms::{Epsilon, GaussianContext};
