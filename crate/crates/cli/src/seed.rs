//! Deterministic seed derivation for parallel trials.
//!
//! Every sampling stream is keyed by `(master seed, trial index, pipeline
//! tag)` through a splitmix64-style finalizer, so a trial's randomness is
//! a pure function of its coordinates and never depends on scheduling.
//! The original and rearranged pipelines use distinct tags, keeping their
//! streams disjoint by construction.

pub const TAG_ORIG_F: u64 = 1;
pub const TAG_ORIG_G: u64 = 2;
pub const TAG_REARR_F: u64 = 3;
pub const TAG_REARR_G: u64 = 4;
pub const TAG_SHADOW: u64 = 5;

/// splitmix64 finalizer; bijective on u64.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream seed for one (trial, pipeline) cell of the work grid.
pub fn derive_stream(master: u64, trial: u64, tag: u64) -> u64 {
    let mut z = mix(master);
    z = mix(z ^ trial.wrapping_mul(0xD1B5_4A32_D192_ED03));
    mix(z ^ tag.wrapping_mul(0x8CB9_2BA7_2F3D_8DD7))
}
