//! Special functions: the exponential Fresnel integral and the Airy family.

pub mod airy;
pub mod fresnel;

pub use airy::{airy_ai, airy_bi, airy_outgoing, airy_zero, outgoing_ratio, AiryPair, Outgoing};
pub use fresnel::{fresnel_cs, fresnel_f, fresnel_limit};
