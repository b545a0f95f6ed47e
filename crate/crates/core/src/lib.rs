//! Numerical laboratory for cyclicity of zero-free bounded holomorphic
//! functions on the disc and bidisc.
//!
//! The crate is organised bottom-up:
//!
//! * [`multiseries`]: truncated multi-index power series, the representation
//!   of every holomorphic function in the crate.
//! * [`spaces`]: weighted coefficient spaces `X_{ω,p}`, radially weighted
//!   Bergman spaces, the Hardy space and the reduced weight `ω̃`.
//! * [`weightlab`]: growth diagnostics of `ω̃`, the doubling subsequence and
//!   the parameter plan of the splitting scheme.
//! * [`dbar`]: Cauchy-transform solvers for `∂̄u = ω` on the disc and bidisc.
//! * [`koszul`]: partition of unity, exterior-algebra operators and the
//!   Koszul-complex Bezout solver.
//! * [`cyclicity`]: Harnack floors and the end-to-end approximation
//!   pipelines for `1 − fU`.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled and plain iterators otherwise.

pub mod cyclicity;
pub mod dbar;
pub mod koszul;
pub mod multiseries;
pub mod par;
pub mod spaces;
pub mod weightlab;

pub use num_complex::Complex64 as C64;
