//! Deterministic simulation codes and their exact finite-length evaluation.
//!
//! A code is stored through the distribution it induces on the target space,
//! grouped into target blocks (rank blocks of equal `Q`-mass, type classes, or
//! single atoms). Inside a block the induced masses are run-length encoded, so
//! divergences are exact sums over runs without materializing `|Y|^n` entries.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::asymptotics::Direction;
use crate::dist::{check_guard, MassBlock};
use crate::measures::divergence_logs;
use crate::num::{log_sum_exp, ExtReal, Order};
use crate::{Error, Pmf, Result};

mod engine;
mod inverse;
mod quantizer;
mod types;

pub use inverse::{greedy_code, inverse_transform_code, Truncation};
pub use quantizer::{intrinsic_code, resolvability_quantizer};
pub use types::{combined_code, partition_code, type_spreading_code};

/// Construction family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum CodeKind {
    InverseTransform,
    Greedy,
    TypeSpreading,
    Partition,
    /// Type spreading merged with a reverse type map; used for the max-divergence.
    Combined,
    MTypeQuantizer,
    NumberGreedy,
}

/// What a target block groups together.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Granularity {
    PerAtom,
    PerTypeClass,
    PerRankBlock,
}

/// `len` consecutive target atoms with the same induced log mass.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Piece {
    pub len: u128,
    #[cfg_attr(feature = "serde", serde(with = "crate::num::serde_log"))]
    pub log_p: f64,
}

/// A set of target atoms sharing the target mass `exp(log_q)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TargetBlock {
    /// Rank-block index, type index, or atom index depending on the granularity.
    pub id: usize,
    #[cfg_attr(feature = "serde", serde(with = "crate::num::serde_log"))]
    pub log_q: f64,
    pub size: u128,
    pub pieces: Vec<Piece>,
}

/// Output distribution of a code, block by block.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InducedPmf {
    pub granularity: Granularity,
    pub blocks: Vec<TargetBlock>,
}

impl InducedPmf {
    /// `sum P_Y`, which should be 1.
    pub fn total_mass(&self) -> f64 {
        log_sum_exp(
            self.blocks
                .iter()
                .flat_map(|b| b.pieces.iter())
                .map(|pc| (pc.len as f64).ln() + pc.log_p),
        )
        .exp()
    }

    /// Induced mass of each block, in block order.
    pub fn block_masses(&self) -> Vec<(usize, f64)> {
        self.blocks
            .iter()
            .map(|b| {
                let m = log_sum_exp(b.pieces.iter().map(|pc| (pc.len as f64).ln() + pc.log_p));
                (b.id, m.exp())
            })
            .collect()
    }

    fn check(&self) -> Result<()> {
        for b in &self.blocks {
            if b.pieces.iter().map(|p| p.len).sum::<u128>() != b.size {
                return Err(Error::GranularityMismatch);
            }
        }
        Ok(())
    }

    /// Every target atom as `(log P_Y, log Q)`, in block order; guarded.
    pub fn atoms(&self) -> Result<Vec<(f64, f64)>> {
        self.check()?;
        check_guard(self.blocks.iter().map(|b| b.size).sum())?;
        let mut out = Vec::new();
        for b in &self.blocks {
            for pc in &b.pieces {
                for _ in 0..pc.len {
                    out.push((pc.log_p, b.log_q));
                }
            }
        }
        Ok(out)
    }

    /// `D_alpha(P_Y || Q)`, `D_alpha(Q || P_Y)` or their max, summed run by run.
    pub fn divergence(&self, alpha: Order, dir: Direction) -> Result<ExtReal> {
        self.check()?;
        let alpha = Order::of(alpha.value()).nonnegative()?;
        let forward = || {
            let items: Vec<(f64, f64, f64)> = self
                .blocks
                .iter()
                .flat_map(|b| b.pieces.iter().map(move |pc| ((pc.len as f64).ln(), pc.log_p, b.log_q)))
                .filter(|&(_, lp, _)| lp > f64::NEG_INFINITY)
                .collect();
            divergence_logs(&items, alpha)
        };
        let backward = || {
            let items: Vec<(f64, f64, f64)> = self
                .blocks
                .iter()
                .filter(|b| b.log_q > f64::NEG_INFINITY)
                .flat_map(|b| b.pieces.iter().map(move |pc| ((pc.len as f64).ln(), b.log_q, pc.log_p)))
                .collect();
            divergence_logs(&items, alpha)
        };
        Ok(match dir {
            Direction::PQ => forward(),
            Direction::QP => backward(),
            Direction::Max => forward().max(backward()),
        })
    }
}

/// One side of a code.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Side {
    /// `base^n`.
    Product { base: Pmf, n: u32 },
    /// Uniform on `[1:m]`.
    Uniform { m: u128 },
}

/// Number of source atoms of block `source` sent into block `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Assignment {
    pub source: usize,
    pub target: usize,
    pub count: u128,
}

/// Construction parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum CodeParams {
    InverseTransform { truncation: Truncation },
    Greedy,
    TypeSpreading { alpha: Order },
    Partition { delta: f64 },
    Combined { alpha: Order, delta: f64 },
    MTypeQuantizer { m: u128, delta: f64, variant: Direction },
    NumberGreedy { m: u128, delta: f64, variant: Direction },
}

/// A deterministic map from source sequences to target sequences.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimCode {
    pub kind: CodeKind,
    pub params: CodeParams,
    pub source: Side,
    pub target: Side,
    /// Source block (rank block or type index) to target block counts.
    pub assignments: Vec<Assignment>,
    pub induced: InducedPmf,
    #[cfg_attr(feature = "serde", serde(default))]
    pub warnings: Vec<String>,
}

impl SimCode {
    /// Target length `n` (1 for a uniform target).
    pub fn target_len(&self) -> u32 {
        match self.target {
            Side::Product { n, .. } => n,
            Side::Uniform { .. } => 1,
        }
    }
}

/// Exact divergence between the code output and the target distribution.
pub fn evaluate_code(code: &SimCode, alpha: Order, dir: Direction) -> Result<ExtReal> {
    code.induced.divergence(alpha, dir)
}

pub(crate) fn block_pairs(blocks: &[MassBlock]) -> Vec<(f64, u128)> {
    blocks.iter().map(|b| (b.log_mass.exp(), b.multiplicity)).collect()
}

fn blocks_from_sweep(
    tgt: &[MassBlock],
    runs: Vec<Vec<(u128, f64)>>,
    granularity: Granularity,
) -> InducedPmf {
    InducedPmf {
        granularity,
        blocks: tgt
            .iter()
            .zip(runs)
            .enumerate()
            .map(|(id, (b, r))| TargetBlock {
                id,
                log_q: b.log_mass,
                size: b.multiplicity,
                pieces: engine::to_pieces(r),
            })
            .collect(),
    }
}

/// Inverse-transform coupling `j = G_Y^{-1}(G_X(i))` on descending mass blocks.
pub fn mapping1(src: &[MassBlock], tgt: &[MassBlock]) -> Result<InducedPmf> {
    let sw = engine::inverse_transform(&block_pairs(src), &block_pairs(tgt))?;
    Ok(blocks_from_sweep(tgt, sw.runs, Granularity::PerRankBlock))
}

/// Greedy coupling: source atoms accumulate on a target atom until its mass is reached.
pub fn mapping2(src: &[MassBlock], tgt: &[MassBlock]) -> Result<InducedPmf> {
    let sw = engine::greedy(&block_pairs(src), &block_pairs(tgt))?;
    Ok(blocks_from_sweep(tgt, sw.runs, Granularity::PerRankBlock))
}

/// Descending order of the atoms of a pmf, ties by index.
pub(crate) fn descending(p: &Pmf) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..p.len()).collect();
    idx.sort_by(|&a, &b| p.probs()[b].total_cmp(&p.probs()[a]).then(a.cmp(&b)));
    idx
}

fn atom_pairs(p: &Pmf, order: &[usize]) -> Vec<(f64, u128)> {
    order.iter().map(|&i| (p.probs()[i], 1)).collect()
}

fn pmf_level(
    p: &Pmf,
    q: &Pmf,
    f: fn(&[(f64, u128)], &[(f64, u128)]) -> Result<engine::Sweep>,
) -> Result<Vec<f64>> {
    let qo = descending(q);
    let sw = f(&atom_pairs(p, &descending(p)), &atom_pairs(q, &qo))?;
    let mut out = alloc::vec![0.0; q.len()];
    for (&j, r) in qo.iter().zip(sw.runs) {
        out[j] = r.iter().map(|&(_, m)| m).sum();
    }
    Ok(out)
}

/// `mapping1` on single atoms; the output is indexed like `q`.
pub fn mapping1_pmf(p: &Pmf, q: &Pmf) -> Result<Vec<f64>> {
    pmf_level(p, q, engine::inverse_transform)
}

/// `mapping2` on single atoms; the output is indexed like `q`.
pub fn mapping2_pmf(p: &Pmf, q: &Pmf) -> Result<Vec<f64>> {
    pmf_level(p, q, engine::greedy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::ProductView;

    fn pmf(x: &[f64]) -> Pmf {
        Pmf::from_probs(x).unwrap()
    }

    fn close_vec(a: &[f64], b: &[f64]) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn mapping_examples() {
        let p = pmf(&[0.5, 0.3, 0.2]);
        let q = pmf(&[0.6, 0.4]);
        close_vec(&mapping1_pmf(&p, &q).unwrap(), &[0.5, 0.5]);
        close_vec(&mapping2_pmf(&p, &q).unwrap(), &[0.8, 0.2]);
        close_vec(&mapping1_pmf(&p, &p).unwrap(), p.probs());
        close_vec(&mapping2_pmf(&p, &p).unwrap(), p.probs());
        let u4 = Pmf::uniform(4).unwrap();
        let u2 = Pmf::uniform(2).unwrap();
        close_vec(&mapping1_pmf(&u4, &u2).unwrap(), &[0.5, 0.5]);
        close_vec(&mapping2_pmf(&Pmf::uniform(6).unwrap(), &u2).unwrap(), &[0.5, 0.5]);
    }

    #[test]
    fn identity_on_products_is_exact() {
        let v = ProductView::new(pmf(&[0.7, 0.2, 0.1]), 5).unwrap();
        let b = v.sorted_mass_blocks().unwrap();
        let ind = mapping1(&b, &b).unwrap();
        for a in [Order::Zero, Order::Finite(0.5), Order::One, Order::Finite(3.0), Order::PosInf] {
            for d in Direction::ALL {
                assert!(ind.divergence(a, d).unwrap().value() < 1e-12, "{a:?} {d:?}");
            }
        }
        assert!((ind.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn granularity_mismatch() {
        let mut ind = mapping1_blocks_small();
        ind.blocks[0].size += 1;
        assert_eq!(ind.divergence(Order::One, Direction::PQ), Err(Error::GranularityMismatch));
    }

    fn mapping1_blocks_small() -> InducedPmf {
        let v = ProductView::new(pmf(&[0.6, 0.4]), 2).unwrap();
        let b = v.sorted_mass_blocks().unwrap();
        mapping1(&b, &b).unwrap()
    }
}
