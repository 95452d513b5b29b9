//! Lebesgue, Morrey, Campanato and Lipschitz norms of step functions.
//!
//! The suprema over all balls are computed over a finite candidate set that
//! is exact inside a scale window `[gamma_lo, gamma_hi]`; scales outside the
//! window are covered by a tail certificate or explicitly left unclaimed.

mod cells;
mod lipschitz;
mod morrey;

pub use cells::CellSource;
pub use lipschitz::lipschitz_norm;
pub use morrey::{cbmo_norm, cm_norm, gc_ball_value, gc_norm, gm_ball_value, gm_norm, lq_norm};

use crate::error::{param, Result};
use crate::padic::Ball;

/// How scales outside the window are accounted for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailMode {
    /// Exact branch analysis; requires a power weight.
    ClosedFormPower,
    /// The caller asserts that beyond the window the per-scale maximum decays
    /// at least like `ratio^k`; the first few outside scales are checked.
    GeometricBound { ratio: f64 },
    /// No claim outside the window.
    WindowOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormPolicy {
    pub gamma_lo: i32,
    pub gamma_hi: i32,
    pub tail_mode: TailMode,
    pub float_rel_tol: f64,
}

impl NormPolicy {
    pub fn new(gamma_lo: i32, gamma_hi: i32, tail_mode: TailMode) -> Result<Self> {
        if gamma_lo > gamma_hi {
            return Err(param("window", alloc::format!("[{gamma_lo}, {gamma_hi}] is empty")));
        }
        crate::padic::check_gamma(gamma_lo as i64)?;
        crate::padic::check_gamma(gamma_hi as i64)?;
        Ok(NormPolicy {
            gamma_lo,
            gamma_hi,
            tail_mode,
            float_rel_tol: 1e-12,
        })
    }

    /// The smallest window the norms accept for `f`, widened by `margin` on both sides.
    pub fn covering(f: &impl CellSource, margin: i32, tail_mode: TailMode) -> Result<Self> {
        let idx = cells::Indexed::new(f);
        match (idx.min_gamma(), idx.hull(), idx.centered_hull_gamma()) {
            (Some(lo), Some(h), Some(ch)) => {
                Self::new(lo - 1 - margin, h.gamma().max(ch) + 1 + margin, tail_mode)
            }
            _ => Self::new(-margin, margin, tail_mode),
        }
    }
}

/// What happens on one side of the window.
#[derive(Debug, Clone, PartialEq)]
pub enum TailSide {
    /// Every ball out there gives zero.
    Zero,
    /// Values move monotonically toward the window edge, which is a candidate.
    Monotone,
    /// Values were scanned up to `until`, where an explicit upper bound fell
    /// below the running maximum.
    Scanned { until: i32 },
    /// The supremum is a limit at infinite scale, not attained.
    Limit { value: f64, until: i32 },
    /// Values grow without bound.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TailCertificate {
    /// The function is zero.
    Vacuous,
    ClosedForm { small: TailSide, large: TailSide },
    Geometric { ratio: f64, checked: u32 },
    WindowOnly,
}

/// Value of a supremum norm with its witness.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    /// The supremum; `f64::INFINITY` when a tail is unbounded.
    pub value: f64,
    /// Candidate ball achieving `value` (lowest `(γ, center)` among ties).
    pub attaining: Option<Ball>,
    pub certificate: TailCertificate,
    pub window: (i32, i32),
    pub candidates: usize,
}

impl NormReport {
    /// True when the value only covers the window.
    pub fn window_restricted(&self) -> bool {
        matches!(self.certificate, TailCertificate::WindowOnly)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}
