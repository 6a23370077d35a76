//! Bracketed scalar root finding: scan for a sign change, then bisect.

use crate::error::{Error, Result};

/// An interval guaranteed to contain a sign change.
#[derive(Debug, Clone, Copy)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl RootBracket {
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::InvalidArgument(format!("bracket bounds ({lo}, {hi}) out of order")));
        }
        if !(f_lo * f_hi < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "no sign change across bracket: f({lo}) = {f_lo}, f({hi}) = {f_hi}"
            )));
        }
        Ok(RootBracket { lo, hi, f_lo, f_hi })
    }
}

/// Walk `[lo, hi]` with the given step and return the first sign-change
/// bracket, or an error naming `what` if none exists.
pub fn scan_bracket<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64, what: &str) -> Result<RootBracket> {
    let mut x = lo;
    let mut fx = f(x);
    while x < hi {
        let x2 = (x + step).min(hi);
        let fx2 = f(x2);
        if fx == 0.0 {
            return RootBracket::new(x, x + 1e-14 * x.abs().max(1.0), -1.0, 1.0);
        }
        if fx * fx2 < 0.0 {
            return RootBracket::new(x, x2, fx, fx2);
        }
        x = x2;
        fx = fx2;
    }
    Err(Error::RootBracketing { what: what.to_string(), lo, hi })
}

/// Bisect a bracket down to the requested interval width; returns the midpoint.
pub fn bisect<F: Fn(f64) -> f64>(f: F, bracket: RootBracket, width: f64) -> f64 {
    let (mut lo, mut hi, mut f_lo) = (bracket.lo, bracket.hi, bracket.f_lo);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval at floating-point resolution
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if f_lo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = fm;
        }
    }
    0.5 * (lo + hi)
}
