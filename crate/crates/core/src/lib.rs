//! Equilibria and linear stability of the photogravitational restricted
//! three-body problem with an oblate secondary and Poynting-Robertson drag.

pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod params;
pub mod propagate;
pub mod report;
pub mod stability;
pub mod sweep;

pub use dynamics::{Model, State};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use params::{DerivedParams, SystemParams};
