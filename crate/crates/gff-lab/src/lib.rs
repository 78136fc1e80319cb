//! Zero-boundary Gaussian free field on balls: exact kernels, a spectral
//! sampler, Markov decompositions and statistical verification suites.

pub mod bessel;
pub mod error;
pub mod fd;
pub mod basis;
pub mod geom;
pub mod harmonics;
pub mod kernels;
pub mod markov;
pub mod mollifier;
pub mod pairing;
pub mod probe;
pub mod quad;
pub mod report;
pub mod sampler;
pub mod sphere;
pub mod cli;
pub mod stats;
pub mod suites;
pub mod wos;

pub use error::{GffError, Result};
