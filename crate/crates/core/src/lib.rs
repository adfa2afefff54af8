pub mod dynamics;
pub mod error;
pub mod families;
pub mod io;
pub mod linalg;
pub mod optimize;
pub mod pure;
pub mod rng;
pub mod roof;
pub mod state;

pub use error::{Error, Result};
