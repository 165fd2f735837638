//! Clifford groups compiled to the native gate set.

mod c1;
#[cfg(feature = "c2")]
mod c2;

pub use c1::{
    c1_compose, c1_element, c1_inverse, c1_lookup, c1_table_text, canonicalize_phase, compile_c1, enumerate_c1,
    invert_c1_sequence, mean_physical_x_count, random_c1, sample_icrb_layer, CliffordElement, NativeSequence,
    XRotation,
};
#[cfg(feature = "c2")]
pub use c2::{synthesize_c2, TwoQubitCliffords};
