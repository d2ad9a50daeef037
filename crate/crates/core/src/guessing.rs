//! Guessing exponents for a cipher whose key is a memoryless source.

#[allow(unused_imports)]
use num_traits::Float;

use crate::measures::LogProbs;
use crate::num::Order;
use crate::opt::{half_line, maximize};
use crate::{Error, Pmf, Result};

/// Message source, key source, moment order `rho` and (for the uniform-key exponent) key rate.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GuessQuery {
    pub source: Pmf,
    pub key: Pmf,
    pub rho: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub rate: f64,
}

impl GuessQuery {
    pub fn new(source: Pmf, key: Pmf, rho: f64, rate: f64) -> Result<Self> {
        check(rho, rate)?;
        Ok(GuessQuery { source, key, rho, rate })
    }
}

fn check(rho: f64, rate: f64) -> Result<()> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::InvalidArgument("rho must be positive"));
    }
    if !(rate >= 0.0) {
        return Err(Error::InvalidArgument("rate must be nonnegative"));
    }
    Ok(())
}

/// Shannon entropy of the `beta`-tilt and its divergence from the base.
fn tilt_stats(lp: &LogProbs, beta: f64) -> (f64, f64) {
    let w = lp.tilt_weights(Order::of(beta));
    let mut h = 0.0;
    let mut d = 0.0;
    for (&wi, &x) in w.iter().zip(&lp.lp) {
        if wi > 0.0 {
            h -= wi * wi.ln();
            d += wi * (wi.ln() - x);
        }
    }
    (h, d.max(0.0))
}

fn exponent(lp: &LogProbs, rho: f64, rate: f64) -> f64 {
    let beta_star = 1.0 / (1.0 + rho);
    let (h_star, _) = tilt_stats(lp, beta_star);
    if h_star <= rate {
        return rho * lp.entropy(Order::of(beta_star));
    }
    if lp.entropy(Order::One) >= rate {
        return rho * rate;
    }
    // the constrained optimum is the tilt with entropy exactly `rate`
    let (mut a, mut b) = (beta_star, 1.0);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if tilt_stats(lp, m).0 > rate {
            a = m;
        } else {
            b = m;
        }
    }
    let (_, d) = tilt_stats(lp, 0.5 * (a + b));
    rho * rate - d
}

/// `E(R, rho) = max_Q { rho min{H(Q), R} - D(Q || p) }`.
pub fn guessing_exponent(p: &Pmf, rho: f64, rate: f64) -> Result<f64> {
    check(rho, rate)?;
    Ok(exponent(&LogProbs::new(p), rho, rate))
}

/// `sup_{t >= 0} { t R - t H_{1/(1+t)}(key) }`, the cost of simulating a uniform key.
fn key_penalty(key: &LogProbs, rate: f64) -> f64 {
    let h0 = key.entropy(Order::Zero);
    if rate > h0 + 1e-12 {
        return f64::INFINITY;
    }
    let f = |u: f64| {
        let t = half_line(0.0, u);
        if t.is_infinite() {
            f64::NEG_INFINITY
        } else {
            t * rate - t * key.entropy(Order::of(1.0 / (1.0 + t)))
        }
    };
    maximize(f, 0.0, 1.0).value.max(0.0)
}

const OUTER_SCAN: usize = 4096;

/// `(lower, upper)` bounds on the guessing exponent when the key is `key^n`.
pub fn guessing_bounds(query: &GuessQuery) -> Result<(f64, f64)> {
    check(query.rho, 0.0)?;
    let src = LogProbs::new(&query.source);
    let key = LogProbs::new(&query.key);
    let h0 = key.entropy(Order::Zero);
    let upper = exponent(&src, query.rho, h0);
    let obj = |r: f64| exponent(&src, query.rho, r) - key_penalty(&key, r);
    let mut best = f64::NEG_INFINITY;
    let mut bi = 0;
    let step = h0 / OUTER_SCAN as f64;
    for i in 0..=OUTER_SCAN {
        let v = obj(if i == OUTER_SCAN { h0 } else { step * i as f64 });
        if v > best {
            best = v;
            bi = i;
        }
    }
    if h0 > 0.0 {
        let lo = step * bi.saturating_sub(1) as f64;
        let hi = (step * (bi + 1) as f64).min(h0);
        best = best.max(maximize(obj, lo, hi).value);
    }
    Ok((best.min(upper), upper))
}
