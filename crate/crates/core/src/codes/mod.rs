//! Code catalog, constructions, logical operators, distance and decoding.

pub mod catalog;
mod decoder;
mod distance;
mod logicals;

pub use catalog::{by_name, double, four_two_two, pad, reed_muller_15, rotate, NamedCode};
pub use decoder::{build_decoder, DecodeOutcome, Decoder, DecoderStrategy, DEFAULT_DECODER_CAP};
pub use distance::{distance, min_weight_x_logical, x_distance, z_distance, DistanceBound, Distances};
pub use logicals::{logical_operators, logical_operators_of_complex, LogicalOperators};
