//! Second-quantized creation-operator algebra for the two-particle
//! interferometer, plus a first-quantized route for labeled particles.

mod detection;
mod labeled;
mod mode;
mod polynomial;
mod states;

pub use detection::{event_probability, DetectionPattern, PortPattern};
pub use labeled::{distinguishable_event_probability, LabeledState};
pub use mode::{beam_splitter_image, control_rotation_image, Mode, Port, Spin, Statistics};
pub use polynomial::{beam_splitter_substitute, rotate_control, FockMonomial, FockPolynomial};
pub use states::{hom_input_state, hom_pair_state};
