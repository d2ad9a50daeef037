//! Rényi entropies, tilts and divergences.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use crate::num::{log_sum_exp, ExtReal, Order};
use crate::{Error, Pmf, Result};

/// Finite orders closer than this to 1 use a cumulant expansion.
const NEAR_ONE: f64 = 1e-4;

/// Support log-probabilities, the working form of a pmf for the optimizers.
#[derive(Debug, Clone)]
pub(crate) struct LogProbs {
    pub lp: Vec<f64>,
    pub max: f64,
    pub min: f64,
    pub n_max: usize,
    pub n_min: usize,
}

impl LogProbs {
    pub fn new(p: &Pmf) -> Self {
        Self::from_logs(p.support_log_probs())
    }

    pub fn from_logs(lp: Vec<f64>) -> Self {
        let max = lp.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = lp.iter().copied().fold(f64::INFINITY, f64::min);
        let n_max = lp.iter().filter(|&&x| x >= max - 1e-12).count();
        let n_min = lp.iter().filter(|&&x| x <= min + 1e-12).count();
        LogProbs { lp, max, min, n_max, n_min }
    }

    /// `log sum p^a`.
    pub fn log_moment(&self, a: f64) -> f64 {
        log_sum_exp(self.lp.iter().map(|&x| a * x))
    }

    pub fn entropy(&self, o: Order) -> f64 {
        match o {
            Order::Zero => (self.lp.len() as f64).ln(),
            Order::One => -self.lp.iter().map(|&x| x.exp() * x).sum::<f64>(),
            Order::PosInf => -self.max,
            Order::NegInf => -self.min,
            Order::Finite(a) if (a - 1.0).abs() < NEAR_ONE => self.entropy_near_one(a - 1.0),
            Order::Finite(a) => self.log_moment(a) / (1.0 - a),
        }
    }

    /// Cumulant expansion of `log sum p^(1+s) / -s` in `s`, avoiding the cancellation near order 1.
    fn entropy_near_one(&self, s: f64) -> f64 {
        let mean: f64 = self.lp.iter().map(|&x| x.exp() * x).sum();
        let (mut k2, mut k3) = (0.0, 0.0);
        for &x in &self.lp {
            let d = x - mean;
            k2 += x.exp() * d * d;
            k3 += x.exp() * d * d * d;
        }
        -mean - s * k2 / 2.0 - s * s * k3 / 6.0
    }

    pub fn mode_entropy(&self) -> f64 {
        -self.lp.iter().sum::<f64>() / self.lp.len() as f64
    }

    pub fn is_uniform(&self) -> bool {
        self.max - self.min <= 1e-12
    }

    /// Weights of the tilted distribution over the support.
    pub fn tilt_weights(&self, o: Order) -> Vec<f64> {
        match o {
            Order::PosInf => self.indicator(self.max, self.n_max),
            Order::NegInf => self.indicator(self.min, self.n_min),
            o => {
                let a = o.value();
                let z = self.log_moment(a);
                self.lp.iter().map(|&x| (a * x - z).exp()).collect()
            }
        }
    }

    fn indicator(&self, at: f64, count: usize) -> Vec<f64> {
        self.lp
            .iter()
            .map(|&x| if (x - at).abs() <= 1e-12 { 1.0 / count as f64 } else { 0.0 })
            .collect()
    }

    /// `-sum tilt(x) log p(x)`.
    pub fn cross_entropy(&self, o: Order) -> f64 {
        match o {
            Order::PosInf => -self.max,
            Order::NegInf => -self.min,
            Order::One => self.entropy(Order::One),
            o => {
                let w = self.tilt_weights(o);
                -w.iter().zip(&self.lp).map(|(w, x)| w * x).sum::<f64>()
            }
        }
    }
}

/// `H_alpha(p)` for any order in `[-inf, inf]`, summed over the support.
pub fn renyi_entropy(p: &Pmf, alpha: Order) -> f64 {
    LogProbs::new(p).entropy(Order::of(alpha.value()))
}

/// `-(1/|supp|) sum_{supp} log p`.
pub fn mode_entropy(p: &Pmf) -> f64 {
    LogProbs::new(p).mode_entropy()
}

/// The `alpha`-tilted distribution `p^alpha / sum p^alpha` on the support of `p`;
/// uniform over the argmax at `+inf` and over the argmin at `-inf`.
pub fn tilted(p: &Pmf, alpha: Order) -> Pmf {
    if alpha.value() == 1.0 {
        return p.clone();
    }
    let lp = LogProbs::new(p);
    let w = lp.tilt_weights(Order::of(alpha.value()));
    let mut probs = alloc::vec![0.0; p.len()];
    for (i, wi) in p.support().into_iter().zip(w) {
        probs[i] = wi;
    }
    Pmf::new(p.labels().to_vec(), probs).expect("tilt of a valid pmf")
}

/// `-sum tilted(p, alpha)(x) log p(x)`.
pub fn tilted_cross_entropy(p: &Pmf, alpha: Order) -> f64 {
    LogProbs::new(p).cross_entropy(Order::of(alpha.value()))
}

fn check_pair(p: &Pmf, q: &Pmf) -> Result<()> {
    if p.len() != q.len() {
        Err(Error::AlphabetMismatch)
    } else {
        Ok(())
    }
}

/// `D_alpha(p || q)` for `alpha >= 0`.
pub fn renyi_divergence(p: &Pmf, q: &Pmf, alpha: Order) -> Result<ExtReal> {
    check_pair(p, q)?;
    let alpha = Order::of(alpha.value()).nonnegative()?;
    let items: Vec<(f64, f64, f64)> = p
        .probs()
        .iter()
        .zip(q.probs())
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| (0.0, a.ln(), if b > 0.0 { b.ln() } else { f64::NEG_INFINITY }))
        .collect();
    Ok(divergence_logs(&items, alpha))
}

/// Divergence over `(log multiplicity, log p, log q)` triples restricted to `supp(p)`.
pub(crate) fn divergence_logs(items: &[(f64, f64, f64)], alpha: Order) -> ExtReal {
    let singular = items.iter().any(|&(_, _, lq)| lq == f64::NEG_INFINITY);
    let v = match alpha {
        Order::Zero => -log_sum_exp(items.iter().map(|&(w, _, lq)| w + lq)),
        Order::One => {
            if singular {
                return ExtReal::INFINITY;
            }
            items.iter().map(|&(w, lp, lq)| (w + lp).exp() * (lp - lq)).sum()
        }
        Order::PosInf => {
            if singular {
                return ExtReal::INFINITY;
            }
            items.iter().map(|&(_, lp, lq)| lp - lq).fold(f64::NEG_INFINITY, f64::max)
        }
        Order::Finite(a) if a > 1.0 => {
            if singular {
                return ExtReal::INFINITY;
            }
            log_sum_exp(items.iter().map(|&(w, lp, lq)| w + a * lp + (1.0 - a) * lq)) / (a - 1.0)
        }
        Order::Finite(a) => {
            log_sum_exp(
                items
                    .iter()
                    .filter(|&&(_, _, lq)| lq > f64::NEG_INFINITY)
                    .map(|&(w, lp, lq)| w + a * lp + (1.0 - a) * lq),
            ) / (a - 1.0)
        }
        Order::NegInf => unreachable!("negative order rejected"),
    };
    if v.is_nan() {
        ExtReal::INFINITY
    } else {
        ExtReal::new(v)
    }
}

/// `max{D_alpha(p||q), D_alpha(q||p)}`.
pub fn max_renyi(p: &Pmf, q: &Pmf, alpha: Order) -> Result<ExtReal> {
    Ok(renyi_divergence(p, q, alpha)?.max(renyi_divergence(q, p, alpha)?))
}

/// `D_alpha(p||q) + D_alpha(q||p)`.
pub fn sum_renyi(p: &Pmf, q: &Pmf, alpha: Order) -> Result<ExtReal> {
    let a = renyi_divergence(p, q, alpha)?;
    let b = renyi_divergence(q, p, alpha)?;
    Ok(ExtReal::new(a.value() + b.value()))
}
