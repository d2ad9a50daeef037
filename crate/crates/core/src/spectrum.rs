//! Information-spectrum exponents `E_P`, `Ê_P`, their inverses and comparisons.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use crate::measures::LogProbs;
use crate::num::{ExtReal, Order};
use crate::opt::{clamp_divergent, half_line, maximize, minimize};
use crate::{Error, Pmf, Result};

const EDGE: f64 = 1e-12;

/// Which tail of the information spectrum an exponent describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Side {
    /// `E_P(j)`: probability that the normalized self-information falls below `j`.
    Lower,
    /// `Ê_P(j)`: probability that it exceeds `j`.
    Upper,
}

/// A spectrum exponent evaluated at `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumPoint {
    pub j: f64,
    pub side: Side,
    pub exponent: ExtReal,
    /// Set when `j` sits on `H_inf` (lower) or `H_-inf` (upper); the value there is
    /// the closure of the formula and may exceed the true exponent when the extreme
    /// probability is attained by several symbols.
    pub at_endpoint: bool,
}

fn uniform_case(lp: &LogProbs, j: f64) -> ExtReal {
    let h = -lp.max;
    if (j - h).abs() <= EDGE * h.max(1.0) {
        ExtReal::ZERO
    } else {
        ExtReal::INFINITY
    }
}

pub(crate) fn lower(lp: &LogProbs, j: f64) -> ExtReal {
    if lp.is_uniform() {
        return uniform_case(lp, j);
    }
    let h_inf = -lp.max;
    if j < h_inf - EDGE {
        return ExtReal::INFINITY;
    }
    if j >= lp.entropy(Order::One) {
        return ExtReal::ZERO;
    }
    let j = if j <= h_inf + EDGE { h_inf } else { j };
    let at_inf = if j <= h_inf + EDGE { h_inf - (lp.n_max as f64).ln() } else { f64::NEG_INFINITY };
    let obj = |u: f64| {
        let t = half_line(0.0, u);
        if t.is_infinite() {
            at_inf
        } else {
            -lp.log_moment(1.0 + t) - t * j
        }
    };
    ExtReal::new(clamp_divergent(maximize(obj, 0.0, 1.0).value))
}

pub(crate) fn upper(lp: &LogProbs, j: f64) -> ExtReal {
    if lp.is_uniform() {
        return uniform_case(lp, j);
    }
    let h_minf = -lp.min;
    if j > h_minf + EDGE {
        return ExtReal::INFINITY;
    }
    if j <= lp.entropy(Order::One) {
        return ExtReal::ZERO;
    }
    let j = if j >= h_minf - EDGE { h_minf } else { j };
    let at_inf = if j >= h_minf - EDGE { h_minf - (lp.n_min as f64).ln() } else { f64::NEG_INFINITY };
    let obj = |u: f64| {
        let t = half_line(0.0, u);
        if t.is_infinite() {
            at_inf
        } else {
            -lp.log_moment(1.0 - t) + t * j
        }
    };
    ExtReal::new(clamp_divergent(maximize(obj, 0.0, 1.0).value))
}

/// `E_P(j) = sup_{t in [0, inf]} { t H_{1+t}(p) - t j }`.
pub fn exponent_lower(p: &Pmf, j: f64) -> ExtReal {
    lower(&LogProbs::new(p), j)
}

/// `Ê_P(j) = sup_{t in [0, inf]} { -t H_{1-t}(p) + t j }`.
pub fn exponent_upper(p: &Pmf, j: f64) -> ExtReal {
    upper(&LogProbs::new(p), j)
}

/// Exponent with endpoint flag.
pub fn spectrum_point(p: &Pmf, j: f64, side: Side) -> SpectrumPoint {
    let lp = LogProbs::new(p);
    let (exponent, edge) = match side {
        Side::Lower => (lower(&lp, j), -lp.max),
        Side::Upper => (upper(&lp, j), -lp.min),
    };
    SpectrumPoint { j, side, exponent, at_endpoint: (j - edge).abs() <= EDGE * edge.max(1.0) }
}

/// `E_P^{-1}(w) = max_t { H_{1+t}(p) - w/t }`; `H(p)` at `w <= 0`, tending to `H_inf(p)` for large `w`.
pub fn exponent_inverse_lower(p: &Pmf, omega: f64) -> f64 {
    let lp = LogProbs::new(p);
    let h = lp.entropy(Order::One);
    if omega <= 0.0 {
        return h;
    }
    let obj = |u: f64| {
        let t = half_line(0.0, u);
        if t == 0.0 {
            f64::NEG_INFINITY
        } else if t.is_infinite() {
            -lp.max
        } else {
            -lp.log_moment(1.0 + t) / t - omega / t
        }
    };
    maximize(obj, 0.0, 1.0).value.min(h)
}

/// `Ê_P^{-1}(w) = min_t { H_{1-t}(p) + w/t }`; `H(p)` at `w <= 0`, tending to `H_-inf(p)` for large `w`.
pub fn exponent_inverse_upper(p: &Pmf, omega: f64) -> f64 {
    let lp = LogProbs::new(p);
    let h = lp.entropy(Order::One);
    if omega <= 0.0 {
        return h;
    }
    let obj = |u: f64| {
        let t = half_line(0.0, u);
        if t == 0.0 {
            f64::INFINITY
        } else if t.is_infinite() {
            -lp.min
        } else {
            lp.log_moment(1.0 - t) / t + omega / t
        }
    };
    minimize(obj, 0.0, 1.0).value.max(h)
}

/// Points `(H^u_alpha(p), D(tilt_alpha(p) || p))` for each order of the grid.
pub fn parametric_spectrum(p: &Pmf, alphas: &[Order]) -> Vec<(f64, ExtReal)> {
    let lp = LogProbs::new(p);
    alphas
        .iter()
        .map(|&a| {
            let a = Order::of(a.value());
            let w = lp.tilt_weights(a);
            let d: f64 = w
                .iter()
                .zip(&lp.lp)
                .filter(|(&w, _)| w > 0.0)
                .map(|(&w, &x)| w * (w.ln() - x))
                .sum();
            (lp.cross_entropy(a), ExtReal::new(d))
        })
        .collect()
}

/// Exponent of the spectrum falling in `[j1, j2]`.
pub fn interval_exponent(p: &Pmf, j1: f64, j2: f64) -> Result<ExtReal> {
    if !(j1 < j2) {
        return Err(Error::ArgumentOrder);
    }
    let lp = LogProbs::new(p);
    let h = lp.entropy(Order::One);
    Ok(if j2 <= h {
        lower(&lp, j2)
    } else if j1 >= h {
        upper(&lp, j1)
    } else {
        ExtReal::ZERO
    })
}

/// `E_P` via the stationarity condition `H^u_{1+t}(p) = j`, found by bisection.
/// Agrees with `lower` and is used where thousands of evaluations are needed.
pub(crate) fn lower_fast(lp: &LogProbs, j: f64) -> f64 {
    if lp.is_uniform() {
        return uniform_case(lp, j).value();
    }
    let h_inf = -lp.max;
    if j < h_inf - EDGE {
        return f64::INFINITY;
    }
    if j <= h_inf + EDGE {
        return h_inf - (lp.n_max as f64).ln();
    }
    if j >= lp.entropy(Order::One) {
        return 0.0;
    }
    let (mut a, mut b) = (0.0, 1.0);
    for _ in 0..64 {
        let m = 0.5 * (a + b);
        if cross_entropy_at(lp, 1.0 + half_line(0.0, m)) > j {
            a = m;
        } else {
            b = m;
        }
    }
    let t = half_line(0.0, 0.5 * (a + b));
    (-lp.log_moment(1.0 + t) - t * j).max(0.0)
}

/// `Ê_P` via `H^u_{1-t}(p) = j`.
pub(crate) fn upper_fast(lp: &LogProbs, j: f64) -> f64 {
    if lp.is_uniform() {
        return uniform_case(lp, j).value();
    }
    let h_minf = -lp.min;
    if j > h_minf + EDGE {
        return f64::INFINITY;
    }
    if j >= h_minf - EDGE {
        return h_minf - (lp.n_min as f64).ln();
    }
    if j <= lp.entropy(Order::One) {
        return 0.0;
    }
    let (mut a, mut b) = (0.0, 1.0);
    for _ in 0..64 {
        let m = 0.5 * (a + b);
        if cross_entropy_at(lp, 1.0 - half_line(0.0, m)) < j {
            a = m;
        } else {
            b = m;
        }
    }
    let t = half_line(0.0, 0.5 * (a + b));
    (-lp.log_moment(1.0 - t) + t * j).max(0.0)
}

fn cross_entropy_at(lp: &LogProbs, a: f64) -> f64 {
    let z = lp.log_moment(a);
    -lp.lp.iter().map(|&x| (a * x - z).exp() * x).sum::<f64>()
}

/// Outcome of the four dominance comparisons between the spectra of `p` and `q` at rate `R`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DominanceReport {
    pub rate: f64,
    /// Grid verdicts for the ranges `[H_inf, H]`, `[H, H_-inf]`, `[H, H^u]`, `[H^u, H_-inf]`
    /// of `p` scaled by `1/R`; the last two also require `R < H0(p)/H0(q)`.
    pub dominates: [bool; 4],
    /// `min H_t(p)/H_t(q)` over `t` in `[1, inf]`, `[-inf, 1]`, `[0, 1]`, `[-inf, 0]`.
    pub thresholds: [f64; 4],
}

impl DominanceReport {
    /// `R < threshold` for each range.
    pub fn predicted(&self) -> [bool; 4] {
        let mut out = [false; 4];
        for (o, t) in out.iter_mut().zip(self.thresholds) {
            *o = self.rate < t;
        }
        out
    }
}

/// Grid points per range.
pub const DOMINANCE_GRID: usize = 2000;
/// Tie margin for the grid comparisons.
pub const DOMINANCE_MARGIN: f64 = 1e-6;

fn entropy_ratio_min(p: &LogProbs, q: &LogProbs, order_of: impl Fn(f64) -> f64) -> f64 {
    let f = |u: f64| {
        let o = Order::of(order_of(u));
        crate::num::ratio(p.entropy(o), q.entropy(o)).value()
    };
    minimize(f, 0.0, 1.0).value
}

/// Dense-grid comparison of the scaled spectrum exponents of `p` against those of `q`.
pub fn compare_exponents(p: &Pmf, q: &Pmf, rate: f64) -> Result<DominanceReport> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidArgument("rate must be positive"));
    }
    let lp = LogProbs::new(p);
    let lq = LogProbs::new(q);
    let thresholds = [
        entropy_ratio_min(&lp, &lq, |u| half_line(1.0, u)),
        entropy_ratio_min(&lp, &lq, |u| 2.0 - half_line(1.0, u)),
        entropy_ratio_min(&lp, &lq, |u| u),
        entropy_ratio_min(&lp, &lq, |u| -half_line(0.0, u)),
    ];
    let hp = lp.entropy(Order::One);
    let hu = lp.mode_entropy();
    let (h_inf, h_minf) = (-lp.max, -lp.min);
    let zero_ok = rate < crate::num::ratio(lp.entropy(Order::Zero), lq.entropy(Order::Zero)).value();
    let grid = |lo: f64, hi: f64| {
        (0..DOMINANCE_GRID).map(move |i| {
            let s = lo + (hi - lo) * i as f64 / (DOMINANCE_GRID - 1) as f64;
            if i == DOMINANCE_GRID - 1 {
                hi
            } else {
                s
            }
        })
    };
    // `big` must exceed `small` by the margin wherever `small` is not negligible.
    let ok = |big: f64, small: f64| {
        let d = if big == small { 0.0 } else { big - small };
        d >= -DOMINANCE_MARGIN && (small <= DOMINANCE_MARGIN || d > DOMINANCE_MARGIN)
    };
    let lower_ok = |lo: f64, hi: f64| {
        grid(lo, hi).all(|x| ok(lower_fast(&lp, x) / rate, lower_fast(&lq, x / rate)))
    };
    let upper_ok = |lo: f64, hi: f64| {
        grid(lo, hi).all(|x| ok(upper_fast(&lq, x / rate), upper_fast(&lp, x) / rate))
    };
    let dominates = [
        lower_ok(h_inf, hp),
        upper_ok(hp, h_minf),
        zero_ok && upper_ok(hp, hu),
        zero_ok && upper_ok(hu, h_minf),
    ];
    Ok(DominanceReport { rate, dominates, thresholds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{mode_entropy, renyi_divergence, renyi_entropy};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn b01() -> Pmf {
        Pmf::bernoulli(0.1).unwrap()
    }

    #[test]
    fn lower_examples() {
        let p = b01();
        let h = renyi_entropy(&p, Order::One);
        assert_eq!(exponent_lower(&p, h), ExtReal::ZERO);
        close(exponent_lower(&p, 0.105360515657826).value(), 0.105361, 1e-6);
        assert!(exponent_lower(&p, 0.1).is_infinite());
        // dense grid over t in [0, 1e4]
        let lp = LogProbs::new(&p);
        let mut best = f64::NEG_INFINITY;
        for i in 0..=200_000 {
            let t = 1e4 * (i as f64 / 200_000.0).powi(3);
            best = best.max(-lp.log_moment(1.0 + t) - t * 0.2);
        }
        close(exponent_lower(&p, 0.2).value(), best, 1e-6);
        close(lower_fast(&lp, 0.2), best, 1e-9);
    }

    #[test]
    fn upper_examples() {
        let p = b01();
        close(exponent_upper(&p, mode_entropy(&p)).value(), 0.510826, 1e-6);
        let unif = Pmf::uniform(2).unwrap();
        close(
            exponent_upper(&p, mode_entropy(&p)).value(),
            renyi_divergence(&unif, &p, Order::One).unwrap().value(),
            1e-9,
        );
        close(exponent_upper(&p, 10f64.ln()).value(), 10f64.ln(), 1e-9);
        assert!(exponent_upper(&p, 2.4).is_infinite());
        let lp = LogProbs::new(&p);
        for j in [0.4, 0.8, 1.2, 2.0, 2.3] {
            close(upper_fast(&lp, j), upper(&lp, j).value(), 1e-9);
        }
    }

    #[test]
    fn inverses_round_trip() {
        let p = Pmf::from_probs(&[0.6, 0.3, 0.1]).unwrap();
        let h = renyi_entropy(&p, Order::One);
        close(exponent_inverse_lower(&p, 0.0), h, 0.0);
        close(exponent_inverse_upper(&p, 0.0), h, 0.0);
        for w in [0.01, 0.1, 0.3] {
            let j = exponent_inverse_lower(&p, w);
            close(exponent_lower(&p, j).value(), w, 1e-6);
            let j = exponent_inverse_upper(&p, w);
            close(exponent_upper(&p, j).value(), w, 1e-6);
        }
    }

    #[test]
    fn uniform_is_degenerate() {
        let u = Pmf::uniform(3).unwrap();
        assert_eq!(exponent_lower(&u, 3f64.ln()), ExtReal::ZERO);
        assert!(exponent_lower(&u, 0.5).is_infinite());
        assert!(exponent_upper(&u, 1.5).is_infinite());
    }

    #[test]
    fn parametric_points() {
        let p = b01();
        let pts = parametric_spectrum(&p, &[Order::One, Order::Zero, Order::Finite(2.0)]);
        close(pts[0].0, renyi_entropy(&p, Order::One), 1e-12);
        close(pts[0].1.value(), 0.0, 1e-15);
        close(pts[1].0, mode_entropy(&p), 1e-12);
        close(pts[1].1.value(), 0.510826, 1e-6);
        close(pts[2].0, 0.132159, 5e-6);
        close(pts[2].1.value(), exponent_lower(&p, pts[2].0).value(), 1e-6);
    }

    #[test]
    fn interval_cases() {
        let p = b01();
        assert!(interval_exponent(&p, 0.5, 0.5).is_err());
        assert_eq!(interval_exponent(&p, 0.2, 0.5).unwrap(), ExtReal::ZERO);
        assert_eq!(interval_exponent(&p, 0.11, 0.2).unwrap(), exponent_lower(&p, 0.2));
        assert_eq!(interval_exponent(&p, 1.0, 1.5).unwrap(), exponent_upper(&p, 1.0));
    }

    #[test]
    fn endpoint_flag() {
        let p = b01();
        let pt = spectrum_point(&p, -(0.9f64.ln()), Side::Lower);
        assert!(pt.at_endpoint);
        assert!(!spectrum_point(&p, 0.2, Side::Lower).at_endpoint);
    }

    #[test]
    fn comparison_identity() {
        let p = Pmf::from_probs(&[0.5, 0.3, 0.2]).unwrap();
        let r = compare_exponents(&p, &p, 1.0).unwrap();
        for t in r.thresholds {
            close(t, 1.0, 1e-9);
        }
        assert_eq!(r.dominates, [false; 4]);
        assert_eq!(r.predicted(), [false; 4]);
    }

    #[test]
    fn comparison_threshold_grid() {
        let p = Pmf::bernoulli(0.3).unwrap();
        let q = b01();
        let r = compare_exponents(&p, &q, 1.0).unwrap();
        let mut grid = f64::INFINITY;
        let mut t = 1.0;
        while t <= 100.0 + 1e-9 {
            let o = Order::of(t);
            grid = grid.min(renyi_entropy(&p, o) / renyi_entropy(&q, o));
            t += 0.1;
        }
        grid = grid.min(renyi_entropy(&p, Order::PosInf) / renyi_entropy(&q, Order::PosInf));
        assert!(r.thresholds[0] <= grid + 1e-12);
        close(r.thresholds[0], grid, 1e-3);
    }
}
