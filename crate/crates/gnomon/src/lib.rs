//! Gnomonic cubed-sphere grid construction and von Neumann stability theory
//! for explicit divergence/vorticity damping.
//!
//! The crate builds the three gnomonic cubed-sphere lattices (equidistant,
//! equiangular, equi-edge) on primary and offset staggerings, computes the
//! per-point cell metrics (Δx, Δy, χ, α, sin α, ΔA) that control damping
//! stability, evaluates grid stability functions and amplification factors,
//! and verifies the closed-form stability limits with an explicit
//! forward-Euler diffusion simulator.
//!
//! See the guide chapters under [`guide`] (rendered with mdbook from the
//! `book/` directory) for a walkthrough; every code block there is a doctest.

pub mod grid;
pub mod sim;
pub mod sphere;
pub mod stability;

/// The user guide. Each chapter lives in `book/src/` and is included here so
/// its examples compile and run as doctests.
pub mod guide {
    #[doc = include_str!("../../../book/src/mappings.md")]
    pub mod mappings {}

    #[doc = include_str!("../../../book/src/metrics.md")]
    pub mod metrics {}

    #[doc = include_str!("../../../book/src/stability.md")]
    pub mod stability {}

    #[doc = include_str!("../../../book/src/simulator.md")]
    pub mod simulator {}
}
