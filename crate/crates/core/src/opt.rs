//! Scan-then-golden-section maximization on bounded parameter intervals.
//!
//! Half-lines `[a, inf]` are handled with `t = a + u/(1-u)`, `u in [0, 1]`;
//! the objective sees `t = inf` at `u = 1` and must return the limit there.

#[allow(unused_imports)]
use num_traits::Float;


/// Values above this are reported as divergent.
pub const DIVERGENCE_CLAMP: f64 = 1e6;

const SCAN: usize = 512;
const SCAN_2D: usize = 256;
const TOL: f64 = 1e-10;

/// An optimum and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub arg: f64,
    pub value: f64,
}

fn clean(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// `t` for the half-line parametrization.
pub fn half_line(a: f64, u: f64) -> f64 {
    if u >= 1.0 {
        f64::INFINITY
    } else {
        a + u / (1.0 - u)
    }
}

fn golden(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> Optimum {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = clean(f(c));
    let mut fd = clean(f(d));
    while b - a > TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = clean(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = clean(f(d));
        }
    }
    if fc >= fd {
        Optimum { arg: c, value: fc }
    } else {
        Optimum { arg: d, value: fd }
    }
}

/// Maximizes `f` on `[lo, hi]` (endpoints included).
pub fn maximize(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Optimum {
    let f = &f as &dyn Fn(f64) -> f64;
    if hi <= lo {
        return Optimum { arg: lo, value: clean(f(lo)) };
    }
    let h = (hi - lo) / SCAN as f64;
    let xs = |i: usize| if i == SCAN { hi } else { lo + h * i as f64 };
    let mut best = Optimum { arg: lo, value: f64::NEG_INFINITY };
    let mut bi = 0;
    for i in 0..=SCAN {
        let x = xs(i);
        let v = clean(f(x));
        if v > best.value {
            best = Optimum { arg: x, value: v };
            bi = i;
        }
    }
    if best.value == f64::INFINITY || best.value == f64::NEG_INFINITY {
        return best;
    }
    let a = xs(bi.saturating_sub(1));
    let b = xs((bi + 1).min(SCAN));
    let g = golden(f, a, b);
    if g.value > best.value {
        best = g;
    }
    best
}

/// Minimizes `f` on `[lo, hi]`.
pub fn minimize(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Optimum {
    let o = maximize(|x| -f(x), lo, hi);
    Optimum { arg: o.arg, value: -o.value }
}

/// Maximizes `f(x, y)` on a rectangle: grid scan then alternating golden refinement.
pub fn maximize2(f: impl Fn(f64, f64) -> f64, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) -> (f64, f64, f64) {
    let hx = (x1 - x0) / SCAN_2D as f64;
    let hy = (y1 - y0) / SCAN_2D as f64;
    let gx = |i: usize| if i == SCAN_2D { x1 } else { x0 + hx * i as f64 };
    let gy = |i: usize| if i == SCAN_2D { y1 } else { y0 + hy * i as f64 };
    let (mut bi, mut bj, mut bv) = (0, 0, f64::NEG_INFINITY);
    for i in 0..=SCAN_2D {
        for j in 0..=SCAN_2D {
            let v = clean(f(gx(i), gy(j)));
            if v > bv {
                bi = i;
                bj = j;
                bv = v;
            }
        }
    }
    let (mut x, mut y) = (gx(bi), gy(bj));
    if !bv.is_finite() {
        return (x, y, bv);
    }
    let (ax, bx) = (gx(bi.saturating_sub(1)), gx((bi + 1).min(SCAN_2D)));
    let (ay, by) = (gy(bj.saturating_sub(1)), gy((bj + 1).min(SCAN_2D)));
    for _ in 0..40 {
        let before = bv;
        let ox = golden(&|s| f(s, y), ax, bx);
        if ox.value > bv {
            x = ox.arg;
            bv = ox.value;
        }
        let oy = golden(&|s| f(x, s), ay, by);
        if oy.value > bv {
            y = oy.arg;
            bv = oy.value;
        }
        if bv - before <= 1e-15 {
            break;
        }
    }
    (x, y, bv)
}

/// Maps divergent sups to `+inf`.
pub fn clamp_divergent(v: f64) -> f64 {
    if v > DIVERGENCE_CLAMP {
        f64::INFINITY
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concave_peak() {
        let o = maximize(|x| -(x - 0.3).powi(2) + 2.0, 0.0, 1.0);
        assert!((o.arg - 0.3).abs() < 1e-6);
        assert!((o.value - 2.0).abs() < 1e-12);
        let o = minimize(|x| (x - 0.7).abs(), 0.0, 1.0);
        assert!(o.value < 1e-9);
    }

    #[test]
    fn endpoint_and_infinity() {
        let o = maximize(|x| x, 0.0, 1.0);
        assert_eq!(o.value, 1.0);
        let o = maximize(|u| { let t = half_line(0.0, u); if t.is_infinite() { f64::INFINITY } else { t } }, 0.0, 1.0);
        assert!(o.value.is_infinite());
        assert_eq!(half_line(2.0, 0.5), 3.0);
    }

    #[test]
    fn two_dimensional() {
        let (x, y, v) = maximize2(|x, y| -(x - 0.2).powi(2) - (y - 0.9).powi(2), (0.0, 1.0), (0.0, 1.0));
        assert!((x - 0.2).abs() < 1e-6 && (y - 0.9).abs() < 1e-6 && v.abs() < 1e-12);
    }
}
