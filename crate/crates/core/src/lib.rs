//! Universal Poincaré-type variance bounds for functions of random variables
//! in the integrated Pearson family with `delta <= 0` (affine images of
//! normal, gamma and beta laws).

pub mod bounds;
pub mod cli;
pub mod exactcheck;
pub mod funcspace;
pub mod orthopoly;
pub mod pearson;
pub mod scalar;
pub mod summation;
