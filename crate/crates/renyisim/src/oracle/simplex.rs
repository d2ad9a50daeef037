use renyisim_core::{guard_limit, Error, Pmf};

/// Quantity optimized over distributions `P~` on the support of `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    /// `min D(P~ || p)`.
    MinDivergence,
    /// `min D(P~ || p)` subject to `-sum P~ log p <= j`.
    LowerSpectrum { j: f64 },
    /// `min D(P~ || p)` subject to `-sum P~ log p >= j`.
    UpperSpectrum { j: f64 },
    /// `min -sum P~ log p` subject to `D(P~ || p) <= omega`.
    InverseLower { omega: f64 },
    /// `max -sum P~ log p` subject to `D(P~ || p) <= omega`.
    InverseUpper { omega: f64 },
    /// `a H(P~) + b sum P~ log p`: supremum for `a >= 0`, infimum otherwise.
    Variational { a: f64, b: f64 },
    /// `min D(P~ || p)` subject to `H(P~) <= r`.
    EntropyBounded { r: f64 },
    /// `min D(P~ || p)` subject to `H(P~) >= r`.
    EntropyAtLeast { r: f64 },
    /// `max rho min{H(P~), r} - D(P~ || p)`.
    Guessing { rho: f64, r: f64 },
}

struct Point {
    d: f64,
    cross: f64,
    h: f64,
}

enum Goal {
    Min(f64),
    Max(f64),
    Skip,
}

impl Objective {
    fn goal(&self, x: &Point) -> Goal {
        use Goal::*;
        match *self {
            Objective::MinDivergence => Min(x.d),
            Objective::LowerSpectrum { j } if x.cross <= j => Min(x.d),
            Objective::UpperSpectrum { j } if x.cross >= j => Min(x.d),
            Objective::InverseLower { omega } if x.d <= omega => Min(x.cross),
            Objective::InverseUpper { omega } if x.d <= omega => Max(x.cross),
            Objective::Variational { a, b } if a >= 0.0 => Max(a * x.h - b * x.cross),
            Objective::Variational { a, b } => Min(a * x.h - b * x.cross),
            Objective::EntropyBounded { r } if x.h <= r => Min(x.d),
            Objective::EntropyAtLeast { r } if x.h >= r => Min(x.d),
            Objective::Guessing { rho, r } => Max(rho * x.h.min(r) - x.d),
            _ => Skip,
        }
    }

    fn maximizes(&self) -> bool {
        match *self {
            Objective::InverseUpper { .. } | Objective::Guessing { .. } => true,
            Objective::Variational { a, .. } => a >= 0.0,
            _ => false,
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Optimum of `objective` over the grid `{ counts / resolution }` of the simplex on
/// `supp(p)`. Infeasible constraints give `+inf` for minima and `-inf` for maxima.
///
/// Resolution is capped at 2000 per dimension, except on binary supports where up to
/// `10^6` points are allowed.
pub fn simplex_grid_opt(objective: Objective, p: &Pmf, resolution: usize) -> Result<f64, Error> {
    let support = p.support();
    let lp: Vec<f64> = support.iter().map(|&i| p.probs()[i].ln()).collect();
    let k = lp.len();
    let cap = if k <= 2 { 1_000_000 } else { 2000 };
    if k > 4 || resolution == 0 || resolution > cap {
        return Err(Error::InvalidArgument("simplex grid supports at most 4 symbols and a bounded resolution"));
    }
    let count = binomial((resolution + k - 1) as u128, (k - 1) as u128);
    if count > guard_limit() as u128 {
        return Err(Error::GuardExceeded { requested: count, limit: guard_limit() as u128 });
    }
    let n = resolution as f64;
    let mut best = if objective.maximizes() { f64::NEG_INFINITY } else { f64::INFINITY };
    let mut counts = vec![0usize; k];
    let mut visit = |counts: &[usize]| {
        let mut x = Point { d: 0.0, cross: 0.0, h: 0.0 };
        for (&c, &l) in counts.iter().zip(&lp) {
            if c > 0 {
                let w = c as f64 / n;
                x.d += w * (w.ln() - l);
                x.cross -= w * l;
                x.h -= w * w.ln();
            }
        }
        x.d = x.d.max(0.0);
        match objective.goal(&x) {
            Goal::Min(v) => best = best.min(v),
            Goal::Max(v) => best = best.max(v),
            Goal::Skip => {}
        }
    };
    compositions(&mut counts, 0, resolution, &mut visit);
    Ok(best)
}

fn compositions(counts: &mut [usize], at: usize, left: usize, visit: &mut impl FnMut(&[usize])) {
    if at + 1 == counts.len() {
        counts[at] = left;
        visit(counts);
        return;
    }
    for c in 0..=left {
        counts[at] = c;
        compositions(counts, at + 1, left - c, visit);
    }
}
