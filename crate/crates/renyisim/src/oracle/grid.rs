//! Dense one-dimensional grid evaluations of the closed forms.
//!
//! Each function evaluates the defining supremum or infimum on a fixed uniform grid of
//! `[0,1]` or of `[a, inf)` mapped through `t = a + u/(1-u)`, with entropies summed
//! directly. Knife-edge rates are not detected; callers avoid them.

use renyisim_core::asymptotics::Direction;
use renyisim_core::Order;

use super::plain_entropy as h;

/// Points per unit grid.
pub const POINTS: usize = 20_000;
/// Points per axis of the two-parameter grid.
pub const POINTS_2D: usize = 600;

fn unit() -> impl Iterator<Item = f64> {
    (0..=POINTS).map(|i| i as f64 / POINTS as f64)
}

fn half(a: f64) -> impl Iterator<Item = f64> {
    (0..POINTS).map(move |i| {
        let u = i as f64 / POINTS as f64;
        a + u / (1.0 - u)
    })
}

fn sup(it: impl Iterator<Item = f64>) -> f64 {
    it.filter(|v| !v.is_nan()).fold(f64::NEG_INFINITY, f64::max)
}

fn inf(it: impl Iterator<Item = f64>) -> f64 {
    it.filter(|v| !v.is_nan()).fold(f64::INFINITY, f64::min)
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        f64::INFINITY
    } else {
        a / b
    }
}

/// `H_{1/(1-x)}`, with `x = 1` giving `H_inf`.
fn hi(p: &[f64], x: f64) -> f64 {
    h(p, if x == 1.0 { f64::INFINITY } else { 1.0 / (1.0 - x) })
}

enum Reg {
    Zero,
    Low(f64),
    One,
    High(f64),
}

fn reg(alpha: Order) -> Reg {
    match alpha {
        Order::Zero => Reg::Zero,
        Order::One => Reg::One,
        Order::PosInf => Reg::High(1.0),
        Order::Finite(a) if a < 1.0 => Reg::Low(a / (1.0 - a)),
        Order::Finite(a) => Reg::High((a - 1.0) / a),
        Order::NegInf => panic!("negative order"),
    }
}

fn pq(p: &[f64], q: &[f64], r: f64, c: f64) -> f64 {
    sup(unit().map(|t| t * hi(q, t) - t / r * hi(p, c * t)))
}

fn pq_tail(p: &[f64], q: &[f64], r: f64, c: f64) -> f64 {
    let v = sup(half(1.0 / c).skip(1).map(|t| t * hi(q, t) - t / r * hi(p, c * t)));
    if h(q, 0.0) - h(p, 0.0) / r > 0.0 {
        f64::INFINITY
    } else {
        v
    }
}

fn qp_high(p: &[f64], q: &[f64], r: f64, c: f64) -> f64 {
    sup(half(0.0).map(|t| t * h(q, 1.0 / (1.0 + c * t)) - t / r * h(p, 1.0 / (1.0 + t))))
}

/// Limit of the normalized divergence at rate `r = n/k`.
pub fn asymptotic_divergence(p: &[f64], q: &[f64], r: f64, alpha: Order, dir: Direction) -> f64 {
    let covered = r < h(p, 0.0) / h(q, 0.0);
    let v = match (dir, reg(alpha)) {
        (Direction::PQ, Reg::Zero) | (Direction::Max, Reg::Zero) => {
            sup(unit().map(|t| t * hi(q, t) - t / r * h(p, 0.0)))
        }
        (Direction::PQ, Reg::Low(k)) => pq(p, q, r, -1.0 / k),
        (Direction::PQ, Reg::One) => pq(p, q, r, 0.0),
        (Direction::PQ, Reg::High(c)) => pq(p, q, r, c),
        (Direction::QP, Reg::Zero) => 0.0,
        (Direction::QP, Reg::Low(k)) => {
            k * sup(unit().map(|t| t * hi(q, t) - t / r * h(p, 1.0 / (1.0 + k * t))))
        }
        (Direction::QP, Reg::One) if covered => qp_high(p, q, r, 0.0),
        (Direction::QP, Reg::High(c)) if covered => qp_high(p, q, r, c),
        (Direction::Max, Reg::Low(k)) => {
            let mut best = f64::NEG_INFINITY;
            for i in 0..=POINTS_2D {
                let t = i as f64 / POINTS_2D as f64;
                let hq = hi(q, t);
                for jx in 0..=POINTS_2D {
                    let s = jx as f64 / POINTS_2D as f64;
                    let a = (k - 1.0) * s + 1.0;
                    let b = (1.0 - k) * s + k;
                    best = best.max(t * b * hq - t * b / r * h(p, 1.0 / (1.0 + b / a * t)));
                }
            }
            best
        }
        (Direction::Max, Reg::One) if covered => pq(p, q, r, 0.0).max(qp_high(p, q, r, 0.0)),
        (Direction::Max, Reg::High(c)) if covered => {
            pq(p, q, r, c).max(qp_high(p, q, r, c)).max(pq_tail(p, q, r, c))
        }
        _ => f64::INFINITY,
    };
    v.max(0.0)
}

/// Conversion rate: the largest `R` with vanishing normalized divergence.
pub fn conversion_rate(p: &[f64], q: &[f64], alpha: Order, dir: Direction) -> f64 {
    let hh = ratio(h(p, 1.0), h(q, 1.0));
    let h00 = ratio(h(p, 0.0), h(q, 0.0));
    let head = |c: f64| inf(unit().map(|t| ratio(hi(p, c * t), hi(q, t))));
    let qp = |c: f64| inf(half(0.0).map(|t| ratio(h(p, 1.0 / (1.0 + t)), h(q, 1.0 / (1.0 + c * t))))).min(h00);
    match (dir, reg(alpha)) {
        (Direction::PQ, Reg::Zero) | (Direction::Max, Reg::Zero) => ratio(h(p, 0.0), h(q, 1.0)),
        (_, Reg::Low(_)) => hh,
        (Direction::PQ, Reg::One) => head(0.0),
        (Direction::PQ, Reg::High(c)) => head(c),
        (Direction::QP, Reg::Zero) => f64::INFINITY,
        (_, Reg::One) => hh.min(h00),
        (Direction::QP, Reg::High(c)) => qp(c),
        (Direction::Max, Reg::High(c)) => {
            let tail = inf(half(1.0 / c).skip(1).map(|t| ratio(hi(p, c * t), hi(q, t))));
            head(c).min(qp(c)).min(tail).min(h00)
        }
    }
}

fn resolvability_core(q: &[f64], rt: f64) -> f64 {
    sup(unit().map(|t| t * hi(q, t) - t * rt))
}

/// Normalized divergence when a uniform source of `e^{n rt}` atoms simulates `q^n`.
pub fn resolvability_asymptotics(q: &[f64], rt: f64, alpha: Order, dir: Direction) -> f64 {
    let covered = rt > h(q, 0.0);
    let v = match (dir, reg(alpha)) {
        (Direction::PQ, _) | (Direction::Max, Reg::Zero) => resolvability_core(q, rt),
        (Direction::QP, Reg::Zero) => 0.0,
        (Direction::QP, Reg::Low(k)) => k * resolvability_core(q, rt),
        (Direction::Max, Reg::Low(k)) => k.max(1.0) * resolvability_core(q, rt),
        (_, Reg::One) | (Direction::QP, _) if covered => 0.0,
        (Direction::Max, Reg::High(c)) if covered => {
            sup(half(1.0 / c).skip(1).map(|t| t * hi(q, t) - t * rt))
        }
        _ => f64::INFINITY,
    };
    v.max(0.0)
}

/// Normalized divergence when `p^n` is mapped onto `e^{n rh}` uniform atoms.
pub fn intrinsic_asymptotics(p: &[f64], rh: f64, alpha: Order, dir: Direction) -> f64 {
    let qp_sup = || {
        if rh > h(p, 0.0) {
            f64::INFINITY
        } else {
            sup(half(0.0).map(|t| t * rh - t * h(p, 1.0 / (1.0 + t))))
        }
    };
    let plain = |a: f64| (rh - h(p, a)).max(0.0);
    let v = match (dir, reg(alpha)) {
        (Direction::PQ, Reg::Low(k)) => sup(unit().map(|t| t * rh - t * hi(p, -t / k))),
        (Direction::PQ, _) | (Direction::Max, Reg::Zero) => plain(alpha.value()),
        (Direction::QP, Reg::Zero) => 0.0,
        (Direction::QP, Reg::Low(k)) => {
            k * sup(unit().map(|t| t * rh - t * h(p, 1.0 / (1.0 + k * t))))
        }
        (Direction::QP, _) => qp_sup(),
        (Direction::Max, Reg::Low(k)) => {
            let mut best = f64::NEG_INFINITY;
            for i in 0..=POINTS_2D {
                let t = i as f64 / POINTS_2D as f64;
                for jx in 0..=POINTS_2D {
                    let s = jx as f64 / POINTS_2D as f64;
                    let a = (k - 1.0) * s + 1.0;
                    let b = (1.0 - k) * s + k;
                    best = best.max(t * b * rh - t * b * h(p, a / (a + t * b)));
                }
            }
            best
        }
        (Direction::Max, _) => plain(alpha.value()).max(qp_sup()),
    };
    v.max(0.0)
}

/// `sup_{t >= 0} { t H_{1+t}(p) - t j }`.
pub fn exponent_lower(p: &[f64], j: f64) -> f64 {
    sup(half(0.0).map(|t| t * h(p, 1.0 + t) - t * j)).max(0.0)
}

/// `sup_{t >= 0} { t j - t H_{1-t}(p) }`.
pub fn exponent_upper(p: &[f64], j: f64) -> f64 {
    sup(half(0.0).map(|t| t * j - t * h(p, 1.0 - t))).max(0.0)
}

/// `sup_{t > 0} { H_{1+t}(p) - w/t }`.
pub fn exponent_inverse_lower(p: &[f64], w: f64) -> f64 {
    sup(half(0.0).skip(1).map(|t| h(p, 1.0 + t) - w / t))
}

/// `inf_{t > 0} { H_{1-t}(p) + w/t }`.
pub fn exponent_inverse_upper(p: &[f64], w: f64) -> f64 {
    inf(half(0.0).skip(1).map(|t| h(p, 1.0 - t) + w / t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_rates() {
        let (p, q) = ([0.3, 0.7], [0.1, 0.9]);
        let hh = h(&p, 1.0) / h(&q, 1.0);
        let v = conversion_rate(&p, &q, Order::Finite(0.5), Direction::PQ);
        assert!((v - hh).abs() < 1e-12);
        assert!((v - 1.8791).abs() < 1e-4);
        assert_eq!(asymptotic_divergence(&p, &q, 0.5 * hh, Order::One, Direction::PQ), 0.0);
    }

    #[test]
    fn spectrum_at_entropy_is_zero() {
        let p = [0.2, 0.8];
        let hp = h(&p, 1.0);
        assert!(exponent_lower(&p, hp) < 1e-12);
        assert!(exponent_upper(&p, hp) < 1e-12);
        assert!(exponent_lower(&p, 0.3) > 0.0);
    }
}
