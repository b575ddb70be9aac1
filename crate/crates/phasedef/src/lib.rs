pub mod deformation;
pub mod error;
pub mod flow;
pub mod grassmann;
pub mod lie;
pub mod linalg;
pub mod orbit;
pub mod cohomology;
pub mod params;
pub mod poly;
pub mod rational;
pub mod scalar;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use lie::{build_deformed, build_from_form, build_standard, AlgebraKind, BasisLabel, BilinearForm, StructureConstants};
pub use params::DeformationParams;
pub use rational::Rational;
pub use tolerance::Tolerances;
