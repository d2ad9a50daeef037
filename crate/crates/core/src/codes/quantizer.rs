//! Codes between a product distribution and a uniform distribution on `[1:M]`.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{engine, Assignment, CodeKind, CodeParams, Granularity, InducedPmf, Piece, Side, SimCode, TargetBlock};
use crate::asymptotics::Direction;
use crate::dist::{check_guard, MassBlock, ProductView};
use crate::measures::renyi_entropy;
use crate::num::Order;
use crate::{Error, Pmf, Result};

const MAX_M: u128 = 1 << 52;

fn check(n: u32, m: u128, delta: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive"));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("M must be positive"));
    }
    if m > MAX_M {
        return Err(Error::GuardExceeded { requested: m, limit: MAX_M });
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument("delta must be positive"));
    }
    Ok(())
}

/// Per-block `(atoms, count)` lists.
type Counts = Vec<Vec<(u128, u128)>>;

/// Integer counts `floor(x)` or `floor(x) + 1` per atom summing to `total`, extras by largest remainder.
fn largest_remainder(items: &[(usize, f64)], blocks: &[MassBlock], total: u128, counts: &mut Counts) {
    let floors: Vec<u128> = items.iter().map(|&(_, x)| x.max(0.0).floor() as u128).collect();
    let used: u128 = items.iter().zip(&floors).map(|(&(i, _), &f)| f * blocks[i].multiplicity).sum();
    let mut order: Vec<usize> = (0..items.len()).collect();
    let rem = |j: usize| items[j].1 - floors[j] as f64;
    order.sort_by(|&a, &b| rem(b).total_cmp(&rem(a)).then(a.cmp(&b)));
    let mut per_block: Vec<Vec<(u128, u128)>> = items.iter().zip(&floors).map(|(&(i, _), &f)| alloc::vec![(blocks[i].multiplicity, f)]).collect();
    if used <= total {
        let mut left = total - used;
        while left > 0 {
            for &j in &order {
                if left == 0 {
                    break;
                }
                let (len, c) = per_block[j][0];
                let give = left.min(len);
                left -= give;
                per_block[j][0] = (len - give, c);
                per_block[j].insert(0, (give, c + 1));
                per_block[j].retain(|r| r.0 > 0);
            }
        }
    } else {
        let mut over = used - total;
        for &j in order.iter().rev() {
            if over == 0 {
                break;
            }
            let last = per_block[j].len() - 1;
            let (len, c) = per_block[j][last];
            if c == 0 {
                continue;
            }
            let take = over.min(len);
            over -= take;
            per_block[j][last] = (len - take, c);
            per_block[j].push((take, c - 1));
            per_block[j].retain(|r| r.0 > 0);
        }
    }
    for (&(i, _), pb) in items.iter().zip(per_block) {
        counts[i] = pb;
    }
}

/// `M`-type approximation of `q^n` realized by a map from `[1:M]`.
///
/// `PQ` quantizes `q^n` restricted to its typical set; `QP` and `Max` first give every
/// atom outside the kept set `ceil(M Q)` and quantize the rest of the budget on the set.
pub fn resolvability_quantizer(q: &Pmf, n: u32, m: u128, delta: f64, variant: Direction) -> Result<SimCode> {
    check(n, m, delta)?;
    let tgt = ProductView::new(q.clone(), n)?.sorted_mass_blocks()?;
    let nf = n as f64;
    let mf = m as f64;
    let rt = mf.ln() / nf;
    let floor = match variant {
        Direction::PQ | Direction::QP => -nf * (renyi_entropy(q, Order::One) + delta),
        Direction::Max => -nf * (rt - delta),
    } - 1e-9;
    let positive: Vec<usize> = (0..tgt.len()).filter(|&i| tgt[i].log_mass > f64::NEG_INFINITY).collect();
    let mut kept: Vec<usize> = positive.iter().copied().filter(|&i| tgt[i].log_mass >= floor).collect();
    if kept.is_empty() {
        kept.push(0);
    }
    let mut counts: Counts = tgt.iter().map(|b| alloc::vec![(b.multiplicity, 0)]).collect();
    let mut warnings: Vec<String> = Vec::new();
    let mut budget = m;
    let mut feasible = true;
    if variant != Direction::PQ {
        let mut spent = 0u128;
        for &i in positive.iter().filter(|i| !kept.contains(i)) {
            let c = ((mf * tgt[i].log_mass.exp()) * (1.0 - 1e-12)).ceil().max(1.0) as u128;
            counts[i] = alloc::vec![(tgt[i].multiplicity, c)];
            spent = spent.saturating_add(c.saturating_mul(tgt[i].multiplicity));
        }
        if spent > m {
            feasible = false;
            warnings.push(String::from("budget M too small for the tail; quantized proportionally over all atoms"));
            for &i in &positive {
                counts[i] = alloc::vec![(tgt[i].multiplicity, 0)];
            }
            kept = positive.clone();
        } else {
            budget = m - spent;
        }
    }
    let qa: f64 = kept.iter().map(|&i| tgt[i].log_mass.exp() * tgt[i].multiplicity as f64).sum();
    let items: Vec<(usize, f64)> = kept.iter().map(|&i| (i, budget as f64 * tgt[i].log_mass.exp() / qa)).collect();
    largest_remainder(&items, &tgt, if feasible { budget } else { m }, &mut counts);

    let lm = mf.ln();
    let mut assignments = Vec::new();
    let blocks = tgt
        .iter()
        .zip(&counts)
        .enumerate()
        .map(|(id, (b, cs))| {
            let total: u128 = cs.iter().map(|&(len, c)| len * c).sum();
            if total > 0 {
                assignments.push(Assignment { source: 0, target: id, count: total });
            }
            let pieces = cs
                .iter()
                .map(|&(len, c)| Piece { len, log_p: if c == 0 { f64::NEG_INFINITY } else { (c as f64).ln() - lm } })
                .collect();
            TargetBlock { id, log_q: b.log_mass, size: b.multiplicity, pieces }
        })
        .collect();
    Ok(SimCode {
        kind: CodeKind::MTypeQuantizer,
        params: CodeParams::MTypeQuantizer { m, delta, variant },
        source: Side::Uniform { m },
        target: Side::Product { base: q.clone(), n },
        assignments,
        induced: InducedPmf { granularity: Granularity::PerRankBlock, blocks },
        warnings,
    })
}

/// Extraction of an almost uniform `[1:M]` from `p^n`.
///
/// `PQ` fills the numbers greedily in order of decreasing sequence mass. `QP` and `Max`
/// fill greedily only with sequences above `e^{-n delta}/M` and spread the remaining mass
/// over the unused numbers by inverse transform.
pub fn intrinsic_code(p: &Pmf, n: u32, m: u128, delta: f64, variant: Direction) -> Result<SimCode> {
    check(n, m, delta)?;
    check_guard(m)?;
    let src = ProductView::new(p.clone(), n)?.sorted_mass_blocks()?;
    let pairs = super::block_pairs(&src);
    let mf = m as f64;
    let (runs, links) = match variant {
        Direction::PQ => {
            let sw = engine::greedy(&pairs, &[(1.0 / mf, m)])?;
            (sw.runs.into_iter().next().unwrap_or_default(), sw.links.into_iter().map(|(s, _, c)| (s, c)).collect())
        }
        Direction::QP | Direction::Max => two_regime(p, n, m, delta, &src, &pairs)?,
    };
    let induced = InducedPmf {
        granularity: Granularity::PerRankBlock,
        blocks: alloc::vec![TargetBlock { id: 0, log_q: -mf.ln(), size: m, pieces: engine::to_pieces(runs) }],
    };
    let mut assignments: Vec<Assignment> = Vec::new();
    for (s, c) in links {
        match assignments.iter_mut().find(|a| a.source == s) {
            Some(a) => a.count += c,
            None => assignments.push(Assignment { source: s, target: 0, count: c }),
        }
    }
    assignments.sort_by_key(|a| a.source);
    Ok(SimCode {
        kind: CodeKind::NumberGreedy,
        params: CodeParams::NumberGreedy { m, delta, variant },
        source: Side::Product { base: p.clone(), n },
        target: Side::Uniform { m },
        assignments,
        induced,
        warnings: Vec::new(),
    })
}

#[allow(clippy::type_complexity)]
fn two_regime(
    p: &Pmf,
    n: u32,
    m: u128,
    delta: f64,
    src: &[MassBlock],
    pairs: &[(f64, u128)],
) -> Result<(Vec<(u128, f64)>, Vec<(usize, u128)>)> {
    let nf = n as f64;
    let mf = m as f64;
    if mf.ln() / nf + delta >= renyi_entropy(p, Order::One) {
        return Err(Error::Infeasible("log M / n + delta must stay below H(p)"));
    }
    let support = p.support().len() as u128;
    if support.checked_pow(n).map_or(false, |s| m > s) {
        return Err(Error::Infeasible("M exceeds the number of source sequences"));
    }
    let thr = -nf * delta - mf.ln() - 1e-12;
    let head = src.iter().take_while(|b| b.log_mass >= thr).count();
    let (mut runs, mut links, rest) = engine::greedy_prefix(&pairs[..head], 1.0 / mf, m);
    let l: u128 = runs.iter().map(|r| r.0).sum();
    let mut tail: Vec<(usize, u128)> = rest;
    tail.extend((head..src.len()).map(|i| (i, src[i].multiplicity)));
    tail.retain(|t| t.1 > 0);
    let p0: f64 = tail.iter().map(|&(i, c)| pairs[i].0 * c as f64).sum();
    let m0 = m - l;
    if tail.is_empty() || p0 <= 0.0 {
        links.extend(tail.iter().copied());
        if m0 > 0 {
            runs.push((m0, 0.0));
        }
    } else if m0 == 0 {
        links.extend(tail.iter().copied());
        if let Some(last) = runs.last_mut() {
            if last.0 > 1 {
                last.0 -= 1;
                let v = last.1;
                runs.push((1, v + p0));
            } else {
                last.1 += p0;
            }
        }
    } else {
        let scaled: Vec<(f64, u128)> = tail.iter().map(|&(i, c)| (pairs[i].0 / p0, c)).collect();
        let sw = engine::inverse_transform(&scaled, &[(1.0 / m0 as f64, m0)])?;
        for (len, v) in sw.runs.into_iter().next().unwrap_or_default() {
            let v = v * p0;
            match runs.last_mut() {
                Some(last) if last.1 == v => last.0 += len,
                _ => runs.push((len, v)),
            }
        }
        links.extend(sw.links.into_iter().map(|(s, _, c)| (tail[s].0, c)));
    }
    Ok((runs, links))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::ExtReal;

    #[test]
    fn dyadic_quantizer_is_exact() {
        let u = Pmf::uniform(2).unwrap();
        for v in Direction::ALL {
            let c = resolvability_quantizer(&u, 3, 8, 0.05, v).unwrap();
            assert_eq!(c.induced.divergence(Order::PosInf, Direction::Max).unwrap(), ExtReal::ZERO, "{v:?}");
        }
    }

    #[test]
    fn quantizer_masses_are_m_type() {
        let q = Pmf::bernoulli(0.1).unwrap();
        let m = (5.0f64).exp().ceil() as u128;
        let c = resolvability_quantizer(&q, 10, m, 0.1, Direction::PQ).unwrap();
        let mut total = 0u128;
        for b in &c.induced.blocks {
            for pc in &b.pieces {
                if pc.log_p > f64::NEG_INFINITY {
                    let k = (pc.log_p.exp() * m as f64).round();
                    assert!((pc.log_p.exp() * m as f64 - k).abs() < 1e-9);
                    total += k as u128 * pc.len;
                }
            }
        }
        assert_eq!(total, m);
        let d = c.induced.divergence(Order::PosInf, Direction::PQ).unwrap().value();
        let h = renyi_entropy(&q, Order::One);
        let qa: f64 = ProductView::new(q.clone(), 10)
            .unwrap()
            .sorted_mass_blocks()
            .unwrap()
            .iter()
            .filter(|b| b.log_mass >= -10.0 * (h + 0.1))
            .map(|b| b.log_mass.exp() * b.multiplicity as f64)
            .sum();
        let bound = (1.0 / qa + (10.0 * (h + 0.1) - (m as f64).ln()).exp()).ln();
        assert!(d <= bound + 1e-12, "{d} > {bound}");
    }

    #[test]
    fn quantizer_support_deficit() {
        let q = Pmf::bernoulli(0.3).unwrap();
        let c = resolvability_quantizer(&q, 6, 40, 0.05, Direction::QP).unwrap();
        assert!(!c.warnings.is_empty());
        assert!(c.induced.divergence(Order::PosInf, Direction::QP).unwrap().is_infinite());
    }

    #[test]
    fn uniform_extraction() {
        let u = Pmf::uniform(2).unwrap();
        let c = intrinsic_code(&u, 4, 16, 0.05, Direction::PQ).unwrap();
        for d in Direction::ALL {
            assert_eq!(c.induced.divergence(Order::PosInf, d).unwrap(), ExtReal::ZERO);
        }
    }

    #[test]
    fn two_regime_extraction() {
        let p = Pmf::from_probs(&[0.4, 0.35, 0.25]).unwrap();
        let c = intrinsic_code(&p, 8, 40, 0.05, Direction::QP).unwrap();
        assert!((c.induced.total_mass() - 1.0).abs() < 1e-9);
        assert!(c.induced.blocks[0].pieces.iter().all(|pc| pc.log_p > f64::NEG_INFINITY));
        assert_eq!(c.assignments.iter().map(|a| a.count).sum::<u128>(), 6561);
    }

    #[test]
    fn infeasible_extraction() {
        let p = Pmf::bernoulli(0.5).unwrap();
        assert!(matches!(intrinsic_code(&p, 3, 9, 0.01, Direction::QP), Err(Error::Infeasible(_))));
        assert!(matches!(intrinsic_code(&Pmf::bernoulli(0.1).unwrap(), 4, 4, 0.05, Direction::Max), Err(Error::Infeasible(_))));
    }
}
