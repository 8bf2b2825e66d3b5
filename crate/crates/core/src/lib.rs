//! Secrecy analysis of a dual-hop RF-FSO link: α-η-μ fading on the RF
//! hops, Málaga turbulence with pointing error on the optical hop.
//!
//! Average secrecy capacity, the secrecy-outage lower bound and the
//! probability of non-zero secrecy capacity are each available through
//! three independent routes: closed forms in Meijer G / Fox H functions,
//! adaptive quadrature of the defining integrals, and Monte-Carlo
//! simulation of the channel triple.

pub mod channels;
pub mod cli;
pub mod error;
pub mod montecarlo;
pub mod quad;
pub mod secrecy;
pub mod specfun;

pub use error::{Error, Result};
