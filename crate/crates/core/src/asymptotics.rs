//! Limits of normalized Rényi divergences for i.i.d. simulation, the
//! corresponding conversion rates, and their resolvability and intrinsic
//! randomness specializations.
//!
//! `R = n/k` is the number of target symbols produced per source symbol.
//! Resolvability uses a uniform source of `e^{n R~}` atoms; intrinsic
//! randomness extracts `e^{n R^}` uniform atoms from the source.

use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)]
use num_traits::Float;

use crate::measures::LogProbs;
use crate::num::{ratio, ExtReal, Order};
use crate::opt::{clamp_divergent, half_line, maximize, maximize2, minimize};
use crate::{Error, Pmf, Result};

/// Which divergence between the simulated and the ideal distribution is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Direction {
    /// `D_alpha(P_{Y^n} || Q^n)`
    PQ,
    /// `D_alpha(Q^n || P_{Y^n})`
    QP,
    /// `max` of the two.
    Max,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::PQ, Direction::QP, Direction::Max];
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::PQ => "pq",
            Direction::QP => "qp",
            Direction::Max => "max",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pq" => Ok(Direction::PQ),
            "qp" => Ok(Direction::QP),
            "max" => Ok(Direction::Max),
            _ => Err(Error::InvalidArgument("direction must be pq, qp or max")),
        }
    }
}

/// Source `p`, target `q`, rate `R = n/k` and order.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateQuery {
    pub p: Pmf,
    pub q: Pmf,
    pub rate: f64,
    pub alpha: Order,
}

impl RateQuery {
    pub fn new(p: Pmf, q: Pmf, rate: f64, alpha: Order) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::InvalidArgument("rate must be positive and finite"));
        }
        Ok(RateQuery { p, q, rate, alpha: Order::of(alpha.value()).nonnegative()? })
    }
}

/// Order regimes with dedicated formulas.
#[derive(Debug, Clone, Copy)]
enum Regime {
    Zero,
    /// `alpha in (0,1)` with `kappa = alpha/(1-alpha)`.
    Low { kappa: f64 },
    One,
    /// `alpha in (1, inf]` with `c = (alpha-1)/alpha`.
    High { c: f64 },
}

fn regime(alpha: Order) -> Result<Regime> {
    Ok(match Order::of(alpha.value()).nonnegative()? {
        Order::Zero => Regime::Zero,
        Order::One => Regime::One,
        Order::PosInf => Regime::High { c: 1.0 },
        Order::Finite(a) if a < 1.0 => Regime::Low { kappa: a / (1.0 - a) },
        Order::Finite(a) => Regime::High { c: (a - 1.0) / a },
        Order::NegInf => unreachable!(),
    })
}

/// `H_{1/(1-x)}`.
fn h_inv(lp: &LogProbs, x: f64) -> f64 {
    lp.entropy(Order::inv_one_minus(x))
}

fn h_at(lp: &LogProbs, order: f64) -> f64 {
    lp.entropy(Order::of(order))
}

/// `sup_{t in [0,1]} f(t)`.
fn sup_unit(f: impl Fn(f64) -> f64) -> f64 {
    maximize(f, 0.0, 1.0).value
}

/// `sup_{t in [a, inf)} f(t)` with the `t = inf` closure decided by the sign of the
/// asymptotic slope and `f_start` supplying the value at `t = a`.
fn sup_half(a: f64, f: impl Fn(f64) -> f64, f_start: f64, slope: f64) -> f64 {
    let g = |u: f64| {
        if u == 0.0 {
            f_start
        } else if u >= 1.0 {
            if slope > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        } else {
            f(half_line(a, u))
        }
    };
    maximize(g, 0.0, 1.0).value
}

fn inf_unit(f: impl Fn(f64) -> f64) -> f64 {
    minimize(f, 0.0, 1.0).value
}

fn inf_half(a: f64, f: impl Fn(f64) -> f64, f_start: f64, f_end: f64) -> f64 {
    let g = |u: f64| {
        if u == 0.0 {
            f_start
        } else if u >= 1.0 {
            f_end
        } else {
            f(half_line(a, u))
        }
    };
    minimize(g, 0.0, 1.0).value
}

fn finish(v: f64) -> ExtReal {
    ExtReal::new(clamp_divergent(v))
}

fn knife_check(rate: f64, threshold: f64) -> Result<()> {
    if threshold.is_finite() && (rate - threshold).abs() <= 1e-12 * threshold.max(1.0) {
        Err(Error::KnifeEdge { rate })
    } else {
        Ok(())
    }
}

struct Pair {
    p: LogProbs,
    q: LogProbs,
    r: f64,
}

impl Pair {
    fn h0_ratio(&self) -> f64 {
        ratio(self.p.entropy(Order::Zero), self.q.entropy(Order::Zero)).value()
    }

    /// PQ objective on `[0,1]`.
    fn pq_obj(&self, c: f64, t: f64) -> f64 {
        t * h_inv(&self.q, t) - t / self.r * h_inv(&self.p, c * t)
    }

    /// PQ objective on `(1/c, inf)` for `c in (0,1]`, with closures at both ends.
    fn pq_tail_sup(&self, c: f64) -> f64 {
        let a = 1.0 / c;
        let start_q = if c == 1.0 { self.q.entropy(Order::NegInf) } else { h_inv(&self.q, a) };
        let start = a * (start_q - self.p.entropy(Order::NegInf) / self.r);
        let slope = self.q.entropy(Order::Zero) - self.p.entropy(Order::Zero) / self.r;
        sup_half(a, |t| self.pq_obj(c, t), start, slope)
    }

    /// QP objective `t H_{1/(1+ct)}(q) - (t/R) H_{1/(1+t)}(p)` on `[0, inf)`.
    fn qp_high_sup(&self, c: f64) -> f64 {
        let slope = self.q.entropy(Order::Zero) - self.p.entropy(Order::Zero) / self.r;
        let f = |t: f64| {
            t * h_at(&self.q, 1.0 / (1.0 + c * t)) - t / self.r * h_at(&self.p, 1.0 / (1.0 + t))
        };
        sup_half(0.0, f, 0.0, slope)
    }

    fn qp_low(&self, kappa: f64) -> f64 {
        kappa
            * sup_unit(|t| {
                t * h_inv(&self.q, t) - t / self.r * h_at(&self.p, 1.0 / (1.0 + kappa * t))
            })
    }
}

/// `lim (1/n) D(...)` for the given direction at rate `R = n/k`.
pub fn asymptotic_divergence(query: &RateQuery, dir: Direction) -> Result<ExtReal> {
    if query.p.len() == 0 || query.q.len() == 0 {
        return Err(Error::EmptyAlphabet);
    }
    let s = Pair { p: LogProbs::new(&query.p), q: LogProbs::new(&query.q), r: query.rate };
    let reg = regime(query.alpha)?;
    let h0p = s.p.entropy(Order::Zero);
    let v = match (dir, reg) {
        (Direction::PQ, Regime::Zero) | (Direction::Max, Regime::Zero) => {
            sup_unit(|t| t * h_inv(&s.q, t) - t / s.r * h0p)
        }
        (Direction::PQ, Regime::Low { kappa }) => sup_unit(|t| s.pq_obj(-1.0 / kappa, t)),
        (Direction::PQ, Regime::One) => sup_unit(|t| s.pq_obj(0.0, t)),
        (Direction::PQ, Regime::High { c }) => sup_unit(|t| s.pq_obj(c, t)),
        (Direction::QP, Regime::Zero) => 0.0,
        (Direction::QP, Regime::Low { kappa }) => s.qp_low(kappa),
        (Direction::QP, Regime::One) | (Direction::QP, Regime::High { .. }) => {
            let c = if let Regime::High { c } = reg { c } else { 0.0 };
            let thr = s.h0_ratio();
            knife_check(s.r, thr)?;
            if s.r > thr {
                f64::INFINITY
            } else {
                s.qp_high_sup(c)
            }
        }
        (Direction::Max, Regime::Low { kappa }) => {
            let f = |t: f64, tp: f64| {
                let a = (kappa - 1.0) * tp + 1.0;
                let b = (1.0 - kappa) * tp + kappa;
                t * b * h_inv(&s.q, t) - t * b / s.r * h_at(&s.p, 1.0 / (1.0 + b / a * t))
            };
            maximize2(f, (0.0, 1.0), (0.0, 1.0)).2
        }
        (Direction::Max, Regime::One) | (Direction::Max, Regime::High { .. }) => {
            let c = if let Regime::High { c } = reg { c } else { 0.0 };
            let thr = s.h0_ratio();
            knife_check(s.r, thr)?;
            if s.r > thr {
                f64::INFINITY
            } else {
                let mut v = sup_unit(|t| s.pq_obj(c, t)).max(s.qp_high_sup(c));
                if c > 0.0 {
                    v = v.max(s.pq_tail_sup(c));
                }
                v
            }
        }
    };
    Ok(finish(v))
}

/// Supremum of rates `R` for which the normalized divergence vanishes.
pub fn conversion_rate(p: &Pmf, q: &Pmf, alpha: Order, dir: Direction) -> Result<ExtReal> {
    let lp = LogProbs::new(p);
    let lq = LogProbs::new(q);
    let reg = regime(alpha)?;
    let h = |l: &LogProbs, o: Order| l.entropy(o);
    let hh = ratio(h(&lp, Order::One), h(&lq, Order::One)).value();
    let h00 = ratio(h(&lp, Order::Zero), h(&lq, Order::Zero)).value();
    let pq_head = |c: f64| inf_unit(|t| ratio(h_inv(&lp, c * t), h_inv(&lq, t)).value());
    let qp_high = |c: f64| {
        inf_half(
            0.0,
            |t| ratio(h_at(&lp, 1.0 / (1.0 + t)), h_at(&lq, 1.0 / (1.0 + c * t))).value(),
            hh,
            h00,
        )
    };
    let v = match (dir, reg) {
        (Direction::PQ, Regime::Zero) | (Direction::Max, Regime::Zero) => {
            ratio(h(&lp, Order::Zero), h(&lq, Order::One)).value()
        }
        (_, Regime::Low { .. }) => hh,
        (Direction::PQ, Regime::One) => pq_head(0.0),
        (Direction::PQ, Regime::High { c }) => pq_head(c),
        (Direction::QP, Regime::Zero) => f64::INFINITY,
        (Direction::QP, Regime::One) | (Direction::Max, Regime::One) => hh.min(h00),
        (Direction::QP, Regime::High { c }) => qp_high(c),
        (Direction::Max, Regime::High { c }) => {
            let a = 1.0 / c;
            let start_q = if c == 1.0 { h(&lq, Order::NegInf) } else { h_inv(&lq, a) };
            let tail = inf_half(
                a,
                |t| ratio(h_inv(&lp, c * t), h_inv(&lq, t)).value(),
                ratio(h(&lp, Order::NegInf), start_q).value(),
                h00,
            );
            pq_head(c).min(tail).min(qp_high(c))
        }
    };
    Ok(ExtReal::new(v))
}

/// Lower bound on the rate for unnormalized `D_alpha(P_{Y^n} || Q^n) -> 0`, `alpha in (1, inf)`.
pub fn unnormalized_lower_bound(p: &Pmf, q: &Pmf, alpha: Order) -> Result<ExtReal> {
    let a = match Order::of(alpha.value()) {
        Order::Finite(a) if a > 1.0 => a,
        _ => return Err(Error::InvalidArgument("order must lie in (1, inf)")),
    };
    let lp = LogProbs::new(p);
    let lq = LogProbs::new(q);
    let s = a - 1.0;
    let v = inf_unit(|t| {
        let beta = (s + t) / (s + t - s * t);
        ratio(h_at(&lp, beta), h_inv(&lq, t)).value()
    });
    Ok(ExtReal::new(v))
}

/// Minimal normalized rate `R~` of a uniform source that simulates `q`.
pub fn resolvability(q: &Pmf, alpha: Order, dir: Direction) -> Result<f64> {
    let lq = LogProbs::new(q);
    let reg = regime(alpha)?;
    Ok(match (dir, reg) {
        (Direction::PQ, _) => lq.entropy(Order::One),
        (Direction::QP, Regime::Zero) => 0.0,
        (Direction::QP, Regime::Low { .. }) => lq.entropy(Order::One),
        (Direction::QP, _) => lq.entropy(Order::Zero),
        (Direction::Max, Regime::Zero) | (Direction::Max, Regime::Low { .. }) => lq.entropy(Order::One),
        (Direction::Max, _) => lq.entropy(Order::of(1.0 - Order::of(alpha.value()).value())),
    })
}

/// `sup_{t in [0,1]} { t H_{1/(1-t)}(q) - t R~ }`.
fn resolvability_core(lq: &LogProbs, rt: f64) -> f64 {
    sup_unit(|t| t * h_inv(lq, t) - t * rt)
}

/// `lim (1/n) D(...)` when a uniform source of `e^{n R~}` atoms simulates `q^n`.
pub fn resolvability_asymptotics(q: &Pmf, rt: f64, alpha: Order, dir: Direction) -> Result<ExtReal> {
    if !(rt >= 0.0) {
        return Err(Error::InvalidArgument("rate must be nonnegative"));
    }
    let lq = LogProbs::new(q);
    let reg = regime(alpha)?;
    let h0 = lq.entropy(Order::Zero);
    let coverage = || -> Result<Option<f64>> {
        knife_check(rt, h0)?;
        Ok(if rt < h0 { Some(f64::INFINITY) } else { None })
    };
    let v = match (dir, reg) {
        (Direction::PQ, _) | (Direction::Max, Regime::Zero) => resolvability_core(&lq, rt),
        (Direction::QP, Regime::Zero) => 0.0,
        (Direction::QP, Regime::Low { kappa }) => kappa * resolvability_core(&lq, rt),
        (Direction::QP, _) => coverage()?.unwrap_or(0.0),
        (Direction::Max, Regime::Low { kappa }) => kappa.max(1.0) * resolvability_core(&lq, rt),
        (Direction::Max, Regime::One) => coverage()?.unwrap_or(0.0),
        (Direction::Max, Regime::High { c }) => match coverage()? {
            Some(v) => v,
            None => {
                let a = 1.0 / c;
                let start_q = if c == 1.0 { lq.entropy(Order::NegInf) } else { h_inv(&lq, a) };
                let tail = sup_half(a, |t| t * h_inv(&lq, t) - t * rt, a * (start_q - rt), h0 - rt);
                tail.max(0.0)
            }
        },
    };
    Ok(finish(v))
}

/// Largest normalized rate `R^` of nearly uniform output extractable from `p`.
pub fn intrinsic_randomness(p: &Pmf, alpha: Order, dir: Direction) -> Result<ExtReal> {
    let lp = LogProbs::new(p);
    let alpha = Order::of(alpha.value());
    let reg = regime(alpha)?;
    Ok(ExtReal::new(match (dir, reg) {
        (Direction::QP, Regime::Zero) => f64::INFINITY,
        (Direction::QP, _) | (_, Regime::Low { .. }) => lp.entropy(Order::One),
        (_, _) => lp.entropy(alpha),
    }))
}

/// `lim (1/n) D(...)` when `p^n` is mapped to a uniform distribution on `e^{n R^}` atoms.
pub fn intrinsic_asymptotics(p: &Pmf, rh: f64, alpha: Order, dir: Direction) -> Result<ExtReal> {
    if !(rh >= 0.0) {
        return Err(Error::InvalidArgument("rate must be nonnegative"));
    }
    let lp = LogProbs::new(p);
    let alpha = Order::of(alpha.value());
    let reg = regime(alpha)?;
    let h0 = lp.entropy(Order::Zero);
    let qp_sup = || {
        sup_half(0.0, |t| t * rh - t * h_at(&lp, 1.0 / (1.0 + t)), 0.0, rh - h0)
    };
    let v = match (dir, reg) {
        (Direction::PQ, Regime::Low { kappa }) => {
            let c = -1.0 / kappa;
            sup_unit(|t| t * rh - t * h_inv(&lp, c * t))
        }
        (Direction::PQ, _) | (Direction::Max, Regime::Zero) => (rh - lp.entropy(alpha)).max(0.0),
        (Direction::QP, Regime::Zero) => 0.0,
        (Direction::QP, Regime::Low { kappa }) => {
            kappa * sup_unit(|t| t * rh - t * h_at(&lp, 1.0 / (1.0 + kappa * t)))
        }
        (Direction::QP, _) => qp_sup(),
        (Direction::Max, Regime::Low { kappa }) => {
            let f = |t: f64, tp: f64| {
                let a = (kappa - 1.0) * tp + 1.0;
                let b = (1.0 - kappa) * tp + kappa;
                t * b * rh - t * b * h_at(&lp, a / (a + t * b))
            };
            maximize2(f, (0.0, 1.0), (0.0, 1.0)).2
        }
        (Direction::Max, _) => (rh - lp.entropy(alpha)).max(0.0).max(qp_sup()),
    };
    Ok(finish(v))
}

/// Exponents of `P(R~)` and `1 - P(R~)`, where `P(R~)` is the largest `q^n`-mass of a
/// set with at most `e^{n R~}` sequences.
pub fn best_set_mass_exponents(q: &Pmf, rt: f64) -> Result<(ExtReal, ExtReal)> {
    if !(rt >= 0.0) {
        return Err(Error::InvalidArgument("rate must be nonnegative"));
    }
    let lq = LogProbs::new(q);
    let first = resolvability_core(&lq, rt);
    let h0 = lq.entropy(Order::Zero);
    let second = sup_half(0.0, |t| t * rt - t * h_at(&lq, 1.0 / (1.0 + t)), 0.0, rt - h0);
    Ok((finish(first), finish(second)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::renyi_entropy;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }
    fn bern(x: f64) -> Pmf {
        Pmf::bernoulli(x).unwrap()
    }
    fn o(x: f64) -> Order {
        Order::new(x).unwrap()
    }

    #[test]
    fn identity_pair_is_zero() {
        let p = Pmf::from_probs(&[0.5, 0.3, 0.2]).unwrap();
        for a in [0.0, 0.3, 1.0, 2.0, f64::INFINITY] {
            let qy = RateQuery::new(p.clone(), p.clone(), 1.0, o(a)).unwrap();
            assert!(asymptotic_divergence(&qy, Direction::PQ).unwrap().value() < 1e-12);
        }
    }

    #[test]
    fn qp_supercritical() {
        let qy = RateQuery::new(Pmf::from_probs(&[0.5, 0.5]).unwrap(), Pmf::from_probs(&[0.4, 0.3, 0.3]).unwrap(), 0.9, Order::One).unwrap();
        assert!(asymptotic_divergence(&qy, Direction::QP).unwrap().is_infinite());
        let knife = RateQuery::new(bern(0.3), bern(0.1), 1.0, Order::One).unwrap();
        assert!(matches!(asymptotic_divergence(&knife, Direction::QP), Err(Error::KnifeEdge { .. })));
    }

    #[test]
    fn pq_matches_dense_grid() {
        let (p, q) = (bern(0.3), bern(0.1));
        let qy = RateQuery::new(p.clone(), q.clone(), 2.5, Order::PosInf).unwrap();
        let v = asymptotic_divergence(&qy, Direction::PQ).unwrap().value();
        let mut best: f64 = 0.0;
        for i in 0..=100_000 {
            let t = i as f64 / 100_000.0;
            let ot = Order::inv_one_minus(t);
            best = best.max(t * renyi_entropy(&q, ot) - t / 2.5 * renyi_entropy(&p, ot));
        }
        close(v, best, 1e-6);
        assert!(v > 0.0);
    }

    #[test]
    fn rates() {
        let (p, q) = (bern(0.3), bern(0.1));
        let r = conversion_rate(&p, &q, o(0.5), Direction::PQ).unwrap().value();
        close(r, 1.8791, 1e-4);
        let r = conversion_rate(&p, &q, Order::One, Direction::Max).unwrap().value();
        close(r, 1.0, 1e-12);
        assert!(conversion_rate(&p, &q, Order::Zero, Direction::QP).unwrap().is_infinite());
        // max-rate at infinity is the minimum entropy ratio over all orders
        let mut grid = f64::INFINITY;
        for i in -4000..=4000 {
            let b = o(i as f64 / 100.0);
            grid = grid.min(renyi_entropy(&p, b) / renyi_entropy(&q, b));
        }
        for b in [Order::NegInf, Order::PosInf] {
            grid = grid.min(renyi_entropy(&p, b) / renyi_entropy(&q, b));
        }
        let r = conversion_rate(&p, &q, Order::PosInf, Direction::Max).unwrap().value();
        assert!(r <= grid + 1e-9);
        close(r, grid, 1e-3);
    }

    #[test]
    fn unnormalized_bound() {
        let (p, q) = (bern(0.3), bern(0.1));
        let lb = unnormalized_lower_bound(&p, &q, o(1.001)).unwrap().value();
        let hh = renyi_entropy(&p, Order::One) / renyi_entropy(&q, Order::One);
        close(lb, hh, 1e-3);
        let lb2 = unnormalized_lower_bound(&p, &q, o(2.0)).unwrap().value();
        let rate = conversion_rate(&p, &q, o(2.0), Direction::PQ).unwrap().value();
        assert!(lb2 <= rate + 1e-9);
        let same = unnormalized_lower_bound(&p, &p, o(2.0)).unwrap().value();
        assert!(same >= 1.0 - 1e-9);
        assert!(unnormalized_lower_bound(&p, &q, Order::One).is_err());
    }

    #[test]
    fn resolvability_values() {
        let q = bern(0.1);
        close(resolvability(&q, Order::PosInf, Direction::Max).unwrap(), 10f64.ln(), 1e-12);
        close(resolvability(&q, Order::One, Direction::Max).unwrap(), 2f64.ln(), 1e-12);
        close(resolvability(&q, o(3.0), Direction::PQ).unwrap(), 0.325083, 1e-6);
        close(resolvability(&Pmf::uniform(3).unwrap(), o(5.0), Direction::Max).unwrap(), 3f64.ln(), 1e-12);
    }

    #[test]
    fn resolvability_asymptotic_cases() {
        let q = bern(0.1);
        let v = resolvability_asymptotics(&q, 10f64.ln(), o(0.5), Direction::PQ).unwrap();
        close(v.value(), 0.0, 1e-12);
        assert!(resolvability_asymptotics(&q, 0.5, Order::One, Direction::QP).unwrap().is_infinite());
        assert_eq!(resolvability_asymptotics(&q, 0.8, Order::One, Direction::QP).unwrap(), ExtReal::ZERO);
        let v = resolvability_asymptotics(&q, 0.2, Order::Zero, Direction::PQ).unwrap().value();
        let mut best: f64 = 0.0;
        for i in 0..=100_000 {
            let t = i as f64 / 100_000.0;
            best = best.max(t * renyi_entropy(&q, Order::inv_one_minus(t)) - 0.2 * t);
        }
        close(v, best, 1e-9);
        let (a, b) = best_set_mass_exponents(&q, 0.2).unwrap();
        close(a.value(), v, 1e-12);
        assert_eq!(b, ExtReal::ZERO);
        let (a, b) = best_set_mass_exponents(&q, 0.5).unwrap();
        assert_eq!(a, ExtReal::ZERO);
        assert!(b.value() > 0.0);
    }

    #[test]
    fn intrinsic_values() {
        let p = bern(0.1);
        close(intrinsic_randomness(&p, Order::PosInf, Direction::PQ).unwrap().value(), 0.105361, 1e-6);
        assert!(intrinsic_randomness(&p, Order::Zero, Direction::QP).unwrap().is_infinite());
        let v = intrinsic_asymptotics(&p, 0.5, o(2.0), Direction::PQ).unwrap().value();
        close(v, 0.5 - 0.82f64.ln().abs(), 1e-6);
        assert_eq!(intrinsic_asymptotics(&p, 0.1, Order::PosInf, Direction::PQ).unwrap(), ExtReal::ZERO);
        let v = intrinsic_asymptotics(&p, 0.5, Order::One, Direction::QP).unwrap().value();
        let mut best: f64 = 0.0;
        for i in 0..=200_000 {
            let t = 200.0 * i as f64 / 200_000.0;
            best = best.max(0.5 * t - t * renyi_entropy(&p, o(1.0 / (1.0 + t))));
        }
        close(v, best, 1e-6);
    }
}
