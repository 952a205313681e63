//! Special functions used by the Landau-channel Green-function series:
//! real-argument Airy functions with first derivatives, and stable Laguerre
//! polynomial sequences including the exponentially weighted form.

mod airy;
mod laguerre;
mod tables;

pub use airy::{airy, airy_tail_bound, AiryPair, AIRY_X_MAX};
pub use laguerre::{laguerre_seq, weighted_laguerre, LaguerreSeq, WeightedLaguerre};
