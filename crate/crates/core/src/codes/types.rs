//! Type-class codes: every sequence of a source type goes to sequences of chosen target types,
//! spread as evenly as possible over each target class.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{Assignment, CodeKind, CodeParams, Granularity, InducedPmf, Piece, Side, SimCode, TargetBlock};
use crate::dist::{check_guard, guard_limit, ProductView};
use crate::num::Order;
use crate::{Error, Pmf, Result};

struct TypeInfo {
    log_mass: f64,
    log_size: f64,
    size: u128,
    entropy: f64,
    /// `D(T || base)`, `inf` when the type leaves the support.
    divergence: f64,
}

fn type_table(base: &Pmf, n: u32) -> Result<Vec<TypeInfo>> {
    let view = ProductView::new(base.clone(), n)?;
    view.type_classes()?
        .into_iter()
        .map(|c| {
            let size = c.size.ok_or(Error::GuardExceeded { requested: u128::MAX, limit: guard_limit() as u128 })?;
            let entropy = c.seq_type.entropy();
            let divergence =
                if c.log_mass == f64::NEG_INFINITY { f64::INFINITY } else { (-entropy - c.log_mass / n as f64).max(0.0) };
            Ok(TypeInfo { log_mass: c.log_mass, log_size: c.log_size, size, entropy, divergence })
        })
        .collect()
}

struct Tables {
    src: Vec<TypeInfo>,
    tgt: Vec<TypeInfo>,
}

fn tables(p: &Pmf, q: &Pmf, k: u32, n: u32) -> Result<Tables> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("k and n must be positive"));
    }
    let t = Tables { src: type_table(p, k)?, tgt: type_table(q, n)? };
    check_guard(t.src.len() as u128 * t.tgt.len() as u128)?;
    Ok(t)
}

fn argmin(it: impl Iterator<Item = (usize, f64)>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in it {
        if best.map_or(true, |(_, b)| v < b) {
            best = Some((i, v));
        }
    }
    best.map(|b| b.0)
}

/// Image type minimizing `-log Q(T_Y) + [log|T_Y| - log|T_X|]^+`, the per-class growth of
/// `P_Y / Q` when the class of `x` is spread alone.
fn spread_image(t: &Tables, x: usize) -> usize {
    let lx = t.src[x].log_size;
    argmin(t.tgt.iter().enumerate().map(|(y, ty)| (y, -ty.log_mass - ty.log_size.min(lx))))
        .expect("at least one target type")
}

/// Cost of the pieces of one target class under the order `alpha` (lower is better).
fn class_cost(pieces: &[Piece], log_q: f64, alpha: Order) -> f64 {
    let live = pieces.iter().filter(|pc| pc.log_p > f64::NEG_INFINITY);
    let w = |pc: &Piece| pc.len as f64;
    match alpha {
        Order::PosInf => live.map(|pc| pc.log_p - log_q).fold(f64::NEG_INFINITY, f64::max),
        Order::One => live.map(|pc| w(pc) * pc.log_p.exp() * (pc.log_p - log_q)).sum(),
        Order::Zero => -live.map(|pc| w(pc) * log_q.exp()).sum::<f64>(),
        Order::Finite(a) => {
            let s: f64 = live.map(|pc| w(pc) * (a * pc.log_p + (1.0 - a) * log_q).exp()).sum();
            if a > 1.0 {
                s
            } else {
                -s
            }
        }
        Order::NegInf => 0.0,
    }
}

/// `(source type, target type, sequences)`.
type Flow = (usize, usize, u128);

/// Splits the class of `x` over `targets` as evenly as possible, larger shares first.
fn split(x: usize, size: u128, targets: &[usize], flows: &mut Vec<Flow>) {
    let a = targets.len() as u128;
    let (base, extra) = (size / a, size % a);
    for (i, &y) in targets.iter().enumerate() {
        let c = base + u128::from((i as u128) < extra);
        if c > 0 {
            flows.push((x, y, c));
        }
    }
}

/// Per target class, the pieces produced by spreading each incoming flow over the class with a
/// cyclic offset so that surplus sequences of successive flows land on different atoms.
fn assemble(t: &Tables, mut flows: Vec<Flow>) -> (InducedPmf, Vec<Assignment>) {
    flows.sort_by_key(|f| f.1);
    let mut blocks = Vec::with_capacity(t.tgt.len());
    let mut next = 0;
    for (y, ty) in t.tgt.iter().enumerate() {
        let start = next;
        while next < flows.len() && flows[next].1 == y {
            next += 1;
        }
        blocks.push(TargetBlock { id: y, log_q: ty.log_mass, size: ty.size, pieces: spread(t, ty.size, &flows[start..next]) });
    }
    let assignments = flows.iter().map(|&(x, y, c)| Assignment { source: x, target: y, count: c }).collect();
    (InducedPmf { granularity: Granularity::PerTypeClass, blocks }, assignments)
}

fn spread(t: &Tables, size: u128, flows: &[Flow]) -> Vec<Piece> {
    // (base count, per-sequence mass, covered intervals)
    let mut parts: Vec<(u128, f64, [(u128, u128); 2])> = Vec::with_capacity(flows.len());
    let mut cuts: Vec<u128> = alloc::vec![0, size];
    let mut off = 0u128;
    for &(x, _, c) in flows {
        let (base, r) = (c / size, c % size);
        let end = off + r;
        let iv = if end <= size { [(off, end), (0, 0)] } else { [(off, size), (0, end - size)] };
        for &(a, b) in &iv {
            cuts.push(a);
            cuts.push(b);
        }
        parts.push((base, t.src[x].log_mass.exp(), iv));
        off = end % size;
    }
    cuts.sort_unstable();
    cuts.dedup();
    let mut runs: Vec<(u128, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mass: f64 = parts
            .iter()
            .map(|&(base, m, iv)| {
                let hit = iv.iter().any(|&(s, e)| s <= a && b <= e && s < e);
                (base + u128::from(hit)) as f64 * m
            })
            .sum();
        match runs.last_mut() {
            Some(last) if last.1 == mass => last.0 += b - a,
            _ => runs.push((b - a, mass)),
        }
    }
    super::engine::to_pieces(runs)
}

fn finish(kind: CodeKind, params: CodeParams, p: &Pmf, q: &Pmf, k: u32, n: u32, t: &Tables, flows: Vec<Flow>, warnings: Vec<String>) -> SimCode {
    let (induced, assignments) = assemble(t, flows);
    SimCode {
        kind,
        params,
        source: Side::Product { base: p.clone(), n: k },
        target: Side::Product { base: q.clone(), n },
        assignments,
        induced,
        warnings,
    }
}

/// Each source type goes to one target type, spread evenly. Source types are placed in order of
/// decreasing class mass, each onto the target class whose cost under `alpha` grows least.
pub fn type_spreading_code(p: &Pmf, q: &Pmf, k: u32, n: u32, alpha: Order) -> Result<SimCode> {
    let alpha = alpha.nonnegative()?;
    let t = tables(p, q, k, n)?;
    let mut order: Vec<usize> = (0..t.src.len()).collect();
    let class_mass = |x: usize| t.src[x].log_mass + t.src[x].log_size;
    order.sort_by(|&a, &b| class_mass(b).total_cmp(&class_mass(a)).then(a.cmp(&b)));
    let mut incoming: Vec<Vec<Flow>> = (0..t.tgt.len()).map(|_| Vec::new()).collect();
    let mut cost: Vec<f64> = alloc::vec![0.0; t.tgt.len()];
    let mut flows = Vec::new();
    for x in order {
        let size = t.src[x].size;
        let choice = if t.src[x].log_mass == f64::NEG_INFINITY {
            spread_image(&t, x)
        } else {
            let delta = |y: usize| {
                let ty = &t.tgt[y];
                if ty.log_mass == f64::NEG_INFINITY {
                    return (y, f64::INFINITY);
                }
                let mut trial = incoming[y].clone();
                trial.push((x, y, size));
                let c = class_cost(&spread(&t, ty.size, &trial), ty.log_mass, alpha);
                (y, if alpha == Order::PosInf { c } else { c - cost[y] })
            };
            argmin((0..t.tgt.len()).map(delta)).unwrap_or_else(|| spread_image(&t, x))
        };
        let f = (x, choice, size);
        incoming[choice].push(f);
        let ty = &t.tgt[choice];
        cost[choice] = class_cost(&spread(&t, ty.size, &incoming[choice]), ty.log_mass, alpha);
        flows.push(f);
    }
    Ok(finish(CodeKind::TypeSpreading, CodeParams::TypeSpreading { alpha }, p, q, k, n, &t, flows, Vec::new()))
}

fn admissible(t: &Tables, x: usize, k: u32, n: u32, delta: f64) -> Vec<usize> {
    let hx = k as f64 * t.src[x].entropy;
    (0..t.tgt.len())
        .filter(|&y| t.tgt[y].log_mass > f64::NEG_INFINITY && hx >= n as f64 * (t.tgt[y].entropy + delta) - 1e-12)
        .collect()
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument("delta must be positive"));
    }
    Ok(())
}

/// Each source class is cut into one part per target type of sufficiently smaller entropy.
pub fn partition_code(p: &Pmf, q: &Pmf, k: u32, n: u32, delta: f64) -> Result<SimCode> {
    check_delta(delta)?;
    let t = tables(p, q, k, n)?;
    let mut flows = Vec::new();
    let mut fallback = 0usize;
    for (x, tx) in t.src.iter().enumerate() {
        let mut targets = admissible(&t, x, k, n, delta);
        if targets.is_empty() {
            fallback += 1;
            targets.push(spread_image(&t, x));
        }
        split(x, tx.size, &targets, &mut flows);
    }
    let mut warnings = Vec::new();
    if fallback > 0 {
        warnings.push(format!("{fallback} of {} source types have no admissible target type; mapped by the spreading rule", t.src.len()));
    }
    Ok(finish(CodeKind::Partition, CodeParams::Partition { delta }, p, q, k, n, &t, flows, warnings))
}

/// Spreading images merged with a reverse map that gives every target type a preimage
/// balancing both divergence directions.
pub fn combined_code(p: &Pmf, q: &Pmf, k: u32, n: u32, alpha: Order, delta: f64) -> Result<SimCode> {
    check_delta(delta)?;
    let w = match alpha {
        Order::PosInf => 1.0,
        Order::Finite(a) if a > 1.0 => a / (a - 1.0),
        _ => return Err(Error::InvalidArgument("combined code needs alpha > 1")),
    };
    let t = tables(p, q, k, n)?;
    let ratio = k as f64 / n as f64;
    let mut sets: Vec<Vec<usize>> = (0..t.src.len()).map(|x| alloc::vec![spread_image(&t, x)]).collect();
    let mut orphans = 0usize;
    for (y, ty) in t.tgt.iter().enumerate() {
        if ty.log_mass == f64::NEG_INFINITY {
            continue;
        }
        let cands = t.src.iter().enumerate().filter(|(_, tx)| {
            tx.log_mass > f64::NEG_INFINITY && k as f64 * tx.entropy >= n as f64 * (ty.entropy + delta) - 1e-12
        });
        let g2 = argmin(cands.map(|(x, tx)| {
            let dx = ratio * tx.divergence;
            (x, (-w * dx + ty.divergence).max(dx - w * ty.divergence))
        }));
        match g2 {
            Some(x) => sets[x].push(y),
            None => orphans += 1,
        }
    }
    let mut flows = Vec::new();
    for (x, s) in sets.iter_mut().enumerate() {
        s.sort_unstable();
        s.dedup();
        split(x, t.src[x].size, s, &mut flows);
    }
    let mut warnings = Vec::new();
    if orphans > 0 {
        warnings.push(format!("{orphans} target types have no admissible preimage"));
    }
    Ok(finish(CodeKind::Combined, CodeParams::Combined { alpha, delta }, p, q, k, n, &t, flows, warnings))
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
    fn spreading_identity() {
        let c = type_spreading_code(&bern(0.3), &bern(0.3), 6, 6, Order::Finite(2.0)).unwrap();
        for a in &c.assignments {
            assert_eq!(a.source, a.target);
        }
        for d in Direction::ALL {
            assert!(c.induced.divergence(Order::PosInf, d).unwrap().value() < 1e-12);
        }
    }

    #[test]
    fn single_symbol() {
        let p = Pmf::from_probs(&[0.5, 0.3, 0.2]).unwrap();
        let q = Pmf::from_probs(&[0.6, 0.4]).unwrap();
        let c = type_spreading_code(&p, &q, 1, 1, Order::One).unwrap();
        assert_eq!(c.assignments.len(), 3);
        assert!((c.induced.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spreading_is_even() {
        let t = Tables {
            src: alloc::vec![
                TypeInfo { log_mass: 0.1f64.ln(), log_size: 0.0, size: 5, entropy: 0.0, divergence: 0.0 },
                TypeInfo { log_mass: 0.05f64.ln(), log_size: 0.0, size: 6, entropy: 0.0, divergence: 0.0 },
            ],
            tgt: alloc::vec![TypeInfo { log_mass: 0.25f64.ln(), log_size: 0.0, size: 4, entropy: 0.0, divergence: 0.0 }],
        };
        let (ind, _) = assemble(&t, alloc::vec![(0, 0, 5), (1, 0, 6)]);
        // counts: type 0 -> 2,1,1,1 ; type 1 -> 1,2,2,1
        let mut atoms = Vec::new();
        for pc in &ind.blocks[0].pieces {
            for _ in 0..pc.len {
                atoms.push(pc.log_p.exp());
            }
        }
        let want = [0.25, 0.2, 0.2, 0.15];
        for (a, b) in atoms.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{atoms:?}");
        }
    }

    #[test]
    fn partition_covers_uniform_target() {
        let c = partition_code(&bern(0.5), &Pmf::uniform(2).unwrap(), 12, 4, 0.05).unwrap();
        assert!(c.induced.divergence(Order::PosInf, Direction::QP).unwrap().is_finite());
        assert!((c.induced.total_mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn partition_warns_when_delta_too_large() {
        let c = partition_code(&bern(0.3), &bern(0.1), 6, 6, 5.0).unwrap();
        assert_eq!(c.warnings.len(), 1);
        assert!(c.warnings[0].starts_with("7 of 7"));
    }

    #[test]
    fn combined_is_a_pmf() {
        let c = combined_code(&bern(0.3), &bern(0.1), 16, 4, Order::PosInf, 0.05).unwrap();
        assert!((c.induced.total_mass() - 1.0).abs() < 1e-9);
        let d = c.induced.divergence(Order::Finite(2.0), Direction::Max).unwrap();
        assert!(d < ExtReal::INFINITY, "{d} {:?}", c.warnings);
        assert!(combined_code(&bern(0.3), &bern(0.1), 4, 4, Order::One, 0.05).is_err());
    }
}
