//! Product-to-product codes built from the two basic mappings on rank blocks.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::engine::{self, Sweep};
use super::{Assignment, CodeKind, CodeParams, Granularity, InducedPmf, Side, SimCode, TargetBlock};
use crate::dist::{MassBlock, ProductView};
use crate::measures::{mode_entropy, renyi_entropy};
use crate::num::Order;
use crate::spectrum::{exponent_inverse_upper, exponent_upper};
use crate::{Error, Pmf, Result};

/// Which target sequences the inverse-transform code may hit.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "kebab-case"))]
pub enum Truncation {
    /// Every target sequence.
    Full,
    /// Only `{Q^n >= e^{-n(H(q)+delta)}}`, renormalized.
    Typical { delta: f64 },
    /// Four source regions around `H(p)` and `H^u(p)`; two target regions split at the
    /// level matched through the upper exponents.
    ThreeRegion { delta: f64 },
}

type Engine = fn(&[(f64, u128)], &[(f64, u128)]) -> Result<Sweep>;

/// Collects the partial sweeps of a code into one induced pmf over rank blocks.
pub(super) struct Assembly {
    runs: Vec<Option<Vec<(u128, f64)>>>,
    links: Vec<Assignment>,
    /// Mass and source blocks sent to the first atom of target block 0.
    first: f64,
}

impl Assembly {
    pub fn new(targets: usize) -> Self {
        Assembly { runs: alloc::vec![None; targets], links: Vec::new(), first: 0.0 }
    }

    /// Sends the source blocks `s_idx` onto the target blocks `t_idx`, both renormalized.
    pub fn route(&mut self, src: &[MassBlock], s_idx: &[usize], tgt: &[MassBlock], t_idx: &[usize], f: Engine) -> Result<()> {
        let mass = |b: &MassBlock| b.log_mass.exp() * b.multiplicity as f64;
        let ps: f64 = s_idx.iter().map(|&i| mass(&src[i])).sum();
        let qs: f64 = t_idx.iter().map(|&i| mass(&tgt[i])).sum();
        if s_idx.is_empty() {
            return Ok(());
        }
        if t_idx.is_empty() || qs <= 0.0 || ps <= 0.0 {
            self.to_first(src, s_idx);
            return Ok(());
        }
        let s: Vec<(f64, u128)> = s_idx.iter().map(|&i| (src[i].log_mass.exp() / ps, src[i].multiplicity)).collect();
        let t: Vec<(f64, u128)> = t_idx.iter().map(|&i| (tgt[i].log_mass.exp() / qs, tgt[i].multiplicity)).collect();
        let sw = f(&s, &t)?;
        for (local, r) in sw.runs.into_iter().enumerate() {
            let scaled = r.into_iter().map(|(l, m)| (l, m * ps)).collect();
            self.runs[t_idx[local]] = Some(scaled);
        }
        for (a, b, c) in sw.links {
            self.links.push(Assignment { source: s_idx[a], target: t_idx[b], count: c });
        }
        Ok(())
    }

    /// Sends whole source blocks to the first atom of target block 0.
    pub fn to_first(&mut self, src: &[MassBlock], s_idx: &[usize]) {
        for &i in s_idx {
            self.first += src[i].log_mass.exp() * src[i].multiplicity as f64;
            self.links.push(Assignment { source: i, target: 0, count: src[i].multiplicity });
        }
    }

    pub fn finish(self, tgt: &[MassBlock]) -> (InducedPmf, Vec<Assignment>) {
        let mut runs: Vec<Vec<(u128, f64)>> = self
            .runs
            .into_iter()
            .zip(tgt)
            .map(|(r, b)| r.unwrap_or_else(|| alloc::vec![(b.multiplicity, 0.0)]))
            .collect();
        if self.first > 0.0 {
            let r = &mut runs[0];
            if r[0].0 > 1 {
                r[0].0 -= 1;
                let m = r[0].1;
                r.insert(0, (1, m + self.first));
            } else {
                r[0].1 += self.first;
            }
        }
        let mut links = self.links;
        links.sort_by_key(|a| (a.source, a.target));
        links.dedup_by(|b, a| {
            if a.source == b.source && a.target == b.target {
                a.count += b.count;
                true
            } else {
                false
            }
        });
        let blocks = tgt
            .iter()
            .zip(runs)
            .enumerate()
            .map(|(id, (b, r))| TargetBlock { id, log_q: b.log_mass, size: b.multiplicity, pieces: engine::to_pieces(r) })
            .collect();
        (InducedPmf { granularity: Granularity::PerRankBlock, blocks }, links)
    }
}

fn check_lengths(k: u32, n: u32) -> Result<()> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("k and n must be positive"));
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument("delta must be positive"));
    }
    Ok(())
}

fn all(v: &[MassBlock]) -> Vec<usize> {
    (0..v.len()).collect()
}

fn select(v: &[MassBlock], keep: impl Fn(f64) -> bool) -> Vec<usize> {
    (0..v.len()).filter(|&i| keep(v[i].log_mass)).collect()
}

/// Inverse-transform code `x_i -> y_j`, `j = G_Y^{-1}(G_X(i))`, from `p^k` to `q^n`.
pub fn inverse_transform_code(p: &Pmf, q: &Pmf, k: u32, n: u32, truncation: Truncation) -> Result<SimCode> {
    check_lengths(k, n)?;
    let src = ProductView::new(p.clone(), k)?.sorted_mass_blocks()?;
    let tgt = ProductView::new(q.clone(), n)?.sorted_mass_blocks()?;
    let (kf, nf) = (k as f64, n as f64);
    let tol = 1e-9;
    let mut asm = Assembly::new(tgt.len());
    match truncation {
        Truncation::Full => asm.route(&src, &all(&src), &tgt, &all(&tgt), engine::inverse_transform)?,
        Truncation::Typical { delta } => {
            check_delta(delta)?;
            let floor = -nf * (renyi_entropy(q, Order::One) + delta) - tol;
            let b = select(&tgt, |l| l >= floor);
            asm.route(&src, &all(&src), &tgt, &b, engine::inverse_transform)?;
        }
        Truncation::ThreeRegion { delta } => {
            check_delta(delta)?;
            let (h, hu) = (renyi_entropy(p, Order::One), mode_entropy(p));
            let rate = nf / kf;
            let omega = exponent_upper(p, hu).value() / rate;
            let e_star = exponent_inverse_upper(q, omega);
            let (l1, l2) = (-kf * (h - delta), -kf * (hu - delta));
            let l3 = -kf * hu;
            let a14 = select(&src, |l| l > l1 + tol || l < l3 - tol);
            let a2 = select(&src, |l| l > l2 + tol && l <= l1 + tol);
            let a3 = select(&src, |l| l >= l3 - tol && l <= l2 + tol);
            let b1 = select(&tgt, |l| l >= -nf * e_star - tol);
            let b2 = select(&tgt, |l| l < -nf * e_star - tol);
            asm.to_first(&src, &a14);
            asm.route(&src, &a2, &tgt, &b1, engine::inverse_transform)?;
            asm.route(&src, &a3, &tgt, &b2, engine::greedy)?;
        }
    }
    let (induced, assignments) = asm.finish(&tgt);
    Ok(SimCode {
        kind: CodeKind::InverseTransform,
        params: CodeParams::InverseTransform { truncation },
        source: Side::Product { base: p.clone(), n: k },
        target: Side::Product { base: q.clone(), n },
        assignments,
        induced,
        warnings: Vec::new(),
    })
}

/// Greedy code: consecutive source sequences fill each target sequence in turn.
pub fn greedy_code(p: &Pmf, q: &Pmf, k: u32, n: u32) -> Result<SimCode> {
    check_lengths(k, n)?;
    let src = ProductView::new(p.clone(), k)?.sorted_mass_blocks()?;
    let tgt = ProductView::new(q.clone(), n)?.sorted_mass_blocks()?;
    let mut asm = Assembly::new(tgt.len());
    asm.route(&src, &all(&src), &tgt, &all(&tgt), engine::greedy)?;
    let (induced, assignments) = asm.finish(&tgt);
    Ok(SimCode {
        kind: CodeKind::Greedy,
        params: CodeParams::Greedy,
        source: Side::Product { base: p.clone(), n: k },
        target: Side::Product { base: q.clone(), n },
        assignments,
        induced,
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::Direction;
    use crate::num::ExtReal;

    fn bern(x: f64) -> Pmf {
        Pmf::bernoulli(x).unwrap()
    }

    #[test]
    fn identity_codes() {
        for code in [
            inverse_transform_code(&bern(0.3), &bern(0.3), 6, 6, Truncation::Full).unwrap(),
            greedy_code(&bern(0.3), &bern(0.3), 6, 6).unwrap(),
        ] {
            for d in Direction::ALL {
                assert_eq!(code.induced.divergence(Order::PosInf, d).unwrap(), ExtReal::ZERO);
            }
        }
    }

    #[test]
    fn every_variant_is_a_pmf() {
        let (p, q) = (bern(0.3), bern(0.1));
        for t in [Truncation::Full, Truncation::Typical { delta: 0.05 }, Truncation::ThreeRegion { delta: 0.05 }] {
            let c = inverse_transform_code(&p, &q, 8, 6, t).unwrap();
            assert!((c.induced.total_mass() - 1.0).abs() < 1e-9, "{t:?}");
            let srcs: u128 = c.assignments.iter().map(|a| a.count).sum();
            assert_eq!(srcs, 256);
        }
        let c = greedy_code(&p, &q, 8, 6).unwrap();
        assert!((c.induced.total_mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn typical_truncation_leaves_tail_empty() {
        let c = inverse_transform_code(&bern(0.3), &bern(0.1), 10, 8, Truncation::Typical { delta: 0.05 }).unwrap();
        let floor = -8.0 * (renyi_entropy(&bern(0.1), Order::One) + 0.05);
        for b in &c.induced.blocks {
            if b.log_q < floor - 1e-9 {
                assert!(b.pieces.iter().all(|p| p.log_p == f64::NEG_INFINITY));
            }
        }
        assert!(c.induced.divergence(Order::One, Direction::QP).unwrap().is_infinite());
    }

    #[test]
    fn bad_arguments() {
        assert!(inverse_transform_code(&bern(0.3), &bern(0.1), 0, 2, Truncation::Full).is_err());
        assert!(inverse_transform_code(&bern(0.3), &bern(0.1), 2, 2, Truncation::Typical { delta: 0.0 }).is_err());
    }
}
