//! Alternating-optimization engines: plain FCM and the two filtered
//! variants (MSFCM and AMFCM).

pub mod amfcm;
mod driver;
pub mod fcm;
pub mod msfcm;

pub use driver::run;
