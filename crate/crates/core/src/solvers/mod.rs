//! Smoothers, the coarse direct solve, the V-cycle and preconditioned CG.

mod dense;
mod pcg;
mod smoothers;
mod vcycle;

pub use dense::{coarse_solve, DenseLu};
pub use pcg::{cg, pcg, PcgOptions, SolveReport};
pub use smoothers::{chebyshev_smooth, jacobi_smooth, Chebyshev};
pub use vcycle::{v_cycle, AmgPreconditioner};
