//! Subshifts coding geodesics: alphabets, shifts of finite type, entropy and symbol quotients.

pub mod alphabet;
pub mod entropy;
pub mod quotient;
pub mod shift;

pub use alphabet::InvolutiveAlphabet;
pub use entropy::{sft_entropy, EntropyBracket};
pub use quotient::{quotient_coding, SymbolPartition};
pub use shift::{
    enumerate_words, geodesic_shift, is_distance_realizing, local_geodesic_shift, Provenance, ShiftSpace,
    WordWindow,
};
