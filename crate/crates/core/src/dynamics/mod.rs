//! Markovian open-system evolution, random system-environment dynamics,
//! Bell-state decay references and exponential rate fits.

pub mod closed_form;
pub mod evolve;
pub mod fit;
pub mod lindblad;
pub mod random;

pub use closed_form::{asymptotic_singular_gap, bell_decay_closed_form};
pub use evolve::{concurrence_estimate, evolve, evolve_with, uniform_times, EvolveOptions, Observable, Trajectory};
pub use fit::{fit_exponential, ExpFit, WindowPolicy};
pub use lindblad::{build_liouvillian, ChannelKind, LindbladModel};
pub use random::random_open_evolution;
