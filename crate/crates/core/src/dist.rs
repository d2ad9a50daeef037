//! Finite distributions, sequence types and product views.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::num::log_sum_exp;
use crate::{Error, Result};

static GUARD: AtomicU64 = AtomicU64::new(10_000_000);

/// Cap on enumerated types, atoms and search spaces (default `10^7`).
pub fn guard_limit() -> u64 {
    GUARD.load(Ordering::Relaxed)
}

/// Overrides the enumeration cap for the whole process.
pub fn set_guard_limit(limit: u64) {
    GUARD.store(limit.max(1), Ordering::Relaxed);
}

pub(crate) fn check_guard(requested: u128) -> Result<()> {
    let limit = guard_limit() as u128;
    if requested > limit {
        Err(Error::GuardExceeded { requested, limit })
    } else {
        Ok(())
    }
}

/// A probability mass function on a labeled finite alphabet.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawPmf"))]
pub struct Pmf {
    labels: Vec<String>,
    probs: Vec<f64>,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawPmf {
    #[serde(default)]
    labels: Option<Vec<String>>,
    probs: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawPmf> for Pmf {
    type Error = Error;
    fn try_from(raw: RawPmf) -> Result<Pmf> {
        match raw.labels {
            Some(labels) => Pmf::new(labels, raw.probs),
            None => Pmf::from_probs(&raw.probs),
        }
    }
}

impl Pmf {
    /// Builds a pmf from labels and (possibly unnormalized) weights.
    pub fn new(labels: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if labels.len() != probs.len() {
            return Err(Error::AlphabetMismatch);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut total = 0.0;
        for &x in &probs {
            if !(x >= 0.0) || !x.is_finite() {
                return Err(Error::InvalidProbability(x));
            }
            total += x;
        }
        if total <= 0.0 {
            return Err(Error::ZeroMass);
        }
        let probs = probs.into_iter().map(|x| x / total).collect();
        Ok(Pmf { labels, probs })
    }

    /// Weights labeled `0, 1, ...`.
    pub fn from_probs(probs: &[f64]) -> Result<Self> {
        let labels = (0..probs.len()).map(|i| i.to_string()).collect();
        Pmf::new(labels, probs.to_vec())
    }

    /// `Bern(p)`: labels `0`, `1` with probabilities `1-p`, `p`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Pmf::from_probs(&[1.0 - p, p])
    }

    pub fn uniform(m: usize) -> Result<Self> {
        Pmf::from_probs(&alloc::vec![1.0; m])
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Indices with positive probability.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.probs[i] > 0.0).collect()
    }

    /// Natural logs of the positive probabilities.
    pub fn support_log_probs(&self) -> Vec<f64> {
        self.probs.iter().filter(|&&x| x > 0.0).map(|x| x.ln()).collect()
    }

    /// True when all positive probabilities coincide (to 1e-12 relative).
    pub fn is_uniform_on_support(&self) -> bool {
        let s: Vec<f64> = self.probs.iter().copied().filter(|&x| x > 0.0).collect();
        let (lo, hi) = s.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        hi - lo <= 1e-12 * hi
    }
}

/// Empirical composition of a length-`n` sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeqType {
    pub counts: Vec<u32>,
    pub n: u32,
}

impl SeqType {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let n: u64 = counts.iter().map(|&c| c as u64).sum();
        if n == 0 || n > u32::MAX as u64 {
            return Err(Error::InvalidArgument("type length must be positive"));
        }
        Ok(SeqType { counts, n: n as u32 })
    }

    /// `log(n! / prod counts!)`.
    pub fn log_class_size(&self) -> f64 {
        log_factorial(self.n) - self.counts.iter().map(|&c| log_factorial(c)).sum::<f64>()
    }

    /// Exact class size, `None` on `u128` overflow.
    pub fn class_size(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        let mut m: u128 = 0;
        for &c in &self.counts {
            for i in 1..=c as u128 {
                m += 1;
                // acc * m / i stays integral since acc * C(m, i) is built incrementally
                acc = acc.checked_mul(m)? / i;
            }
        }
        Some(acc)
    }

    /// Empirical distribution `counts / n`.
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.n as f64).collect()
    }

    /// Shannon entropy of the empirical distribution.
    pub fn entropy(&self) -> f64 {
        let n = self.n as f64;
        -self
            .counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let f = c as f64 / n;
                f * f.ln()
            })
            .sum::<f64>()
    }
}

/// `ln(n!)` by direct summation below 256, Stirling with correction terms above.
pub(crate) fn log_factorial(n: u32) -> f64 {
    if n < 256 {
        (2..=n).map(|i| (i as f64).ln()).sum()
    } else {
        let x = n as f64 + 1.0;
        // lgamma(x) asymptotic series, accurate to ~1e-15 for x > 256
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        (x - 0.5) * x.ln() - x + 0.5 * (2.0 * core::f64::consts::PI).ln()
            + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
    }
}

fn binomial_checked(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Number of types `C(n + a - 1, a - 1)`, `None` on overflow.
pub fn type_count(alphabet_size: usize, n: u32) -> Option<u128> {
    binomial_checked(n as u128 + alphabet_size as u128 - 1, alphabet_size as u128 - 1)
}

/// All compositions of `n` into `alphabet_size` parts, lexicographic in the counts.
pub fn enumerate_types(alphabet_size: usize, n: u32) -> Result<Vec<SeqType>> {
    if alphabet_size == 0 {
        return Err(Error::EmptyAlphabet);
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive"));
    }
    let count = type_count(alphabet_size, n).unwrap_or(u128::MAX);
    check_guard(count)?;
    let mut out = Vec::with_capacity(count as usize);
    let mut counts = alloc::vec![0u32; alphabet_size];
    fill(&mut counts, 0, n, n, &mut out);
    Ok(out)
}

fn fill(counts: &mut [u32], pos: usize, left: u32, n: u32, out: &mut Vec<SeqType>) {
    if pos + 1 == counts.len() {
        counts[pos] = left;
        out.push(SeqType { counts: counts.to_vec(), n });
        return;
    }
    for c in 0..=left {
        counts[pos] = c;
        fill(counts, pos + 1, left - c, n, out);
    }
}

/// A group of equiprobable sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MassBlock {
    #[cfg_attr(feature = "serde", serde(with = "crate::num::serde_log"))]
    pub log_mass: f64,
    pub multiplicity: u128,
}

/// A type class of a product view together with its per-sequence log mass.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeClass {
    pub seq_type: SeqType,
    pub log_mass: f64,
    pub log_size: f64,
    /// `None` when the class size overflows `u128`.
    pub size: Option<u128>,
}

/// The `n`-fold product of a base pmf, handled through types.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProductView {
    pub base: Pmf,
    pub n: u32,
}

impl ProductView {
    pub fn new(base: Pmf, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive"));
        }
        Ok(ProductView { base, n })
    }

    /// `sum_x counts_x log p(x)`, `-inf` if a zero-probability symbol occurs.
    pub fn type_log_mass(&self, t: &SeqType) -> f64 {
        let mut s = 0.0;
        for (&c, &p) in t.counts.iter().zip(self.base.probs()) {
            if c > 0 {
                if p == 0.0 {
                    return f64::NEG_INFINITY;
                }
                s += c as f64 * p.ln();
            }
        }
        s
    }

    /// All type classes in lexicographic order of counts.
    pub fn type_classes(&self) -> Result<Vec<TypeClass>> {
        Ok(enumerate_types(self.base.len(), self.n)?
            .into_iter()
            .map(|t| TypeClass {
                log_mass: self.type_log_mass(&t),
                log_size: t.log_class_size(),
                size: t.class_size(),
                seq_type: t,
            })
            .collect())
    }

    /// `log` of the total mass (should be 0); used as a sanity check.
    pub fn log_total_mass(&self) -> Result<f64> {
        Ok(log_sum_exp(self.type_classes()?.iter().map(|c| c.log_size + c.log_mass)))
    }

    /// `|X|^n`, `None` on overflow.
    pub fn atom_count(&self) -> Option<u128> {
        (self.base.len() as u128).checked_pow(self.n)
    }

    /// Equal-mass groups sorted by descending mass; masses within 1e-12 in log domain merge.
    /// Zero-mass sequences form a trailing block with `log_mass = -inf`.
    pub fn sorted_mass_blocks(&self) -> Result<Vec<MassBlock>> {
        self.atom_count().ok_or(Error::GuardExceeded {
            requested: u128::MAX,
            limit: guard_limit() as u128,
        })?;
        let mut raw: Vec<MassBlock> = self
            .type_classes()?
            .into_iter()
            .map(|c| MassBlock { log_mass: c.log_mass, multiplicity: c.size.expect("fits since |X|^n fits") })
            .collect();
        raw.sort_by(|a, b| b.log_mass.total_cmp(&a.log_mass));
        Ok(merge_blocks(raw))
    }
}

/// Merges adjacent blocks of a descending list whose log masses agree to 1e-12.
pub(crate) fn merge_blocks(sorted: Vec<MassBlock>) -> Vec<MassBlock> {
    let mut out: Vec<MassBlock> = Vec::with_capacity(sorted.len());
    for b in sorted {
        match out.last_mut() {
            Some(last)
                if last.log_mass == b.log_mass
                    || (last.log_mass.is_finite() && (last.log_mass - b.log_mass).abs() <= 1e-12) =>
            {
                last.multiplicity += b.multiplicity
            }
            _ => out.push(b),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn types_small() {
        let t = enumerate_types(2, 2).unwrap();
        let c: Vec<Vec<u32>> = t.iter().map(|t| t.counts.clone()).collect();
        assert_eq!(c, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(enumerate_types(1, 5).unwrap()[0].counts, vec![5]);
        let t = enumerate_types(3, 4).unwrap();
        assert_eq!(t.len(), 15);
        assert_eq!(t.iter().map(|t| t.class_size().unwrap()).sum::<u128>(), 81);
    }

    #[test]
    fn class_size_matches_log() {
        let t = SeqType::new(vec![3, 5, 2]).unwrap();
        assert_eq!(t.class_size(), Some(2520));
        assert!((t.log_class_size() - 2520f64.ln()).abs() < 1e-12);
        let big = SeqType::new(vec![250, 250]).unwrap();
        // C(500, 250) from a summed table
        let direct: f64 = (251..=500).map(|i| (i as f64).ln()).sum::<f64>()
            - (2..=250).map(|i| (i as f64).ln()).sum::<f64>();
        assert!((big.log_class_size() - direct).abs() < 1e-9);
        let t = SeqType::new(vec![300, 1]).unwrap();
        assert!((t.log_class_size() - 301f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn guard() {
        set_guard_limit(10);
        let r = enumerate_types(3, 4);
        set_guard_limit(10_000_000);
        assert!(matches!(r, Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn blocks() {
        let v = ProductView::new(Pmf::bernoulli(0.5).unwrap(), 3).unwrap();
        let b = v.sorted_mass_blocks().unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].multiplicity, 8);
        assert!((b[0].log_mass - (0.125f64).ln()).abs() < 1e-12);

        let v = ProductView::new(Pmf::bernoulli(0.1).unwrap(), 2).unwrap();
        let b = v.sorted_mass_blocks().unwrap();
        let m: Vec<u128> = b.iter().map(|b| b.multiplicity).collect();
        assert_eq!(m, vec![1, 2, 1]);
        for (blk, want) in b.iter().zip([0.81f64, 0.09, 0.01]) {
            assert!((blk.log_mass - want.ln()).abs() < 1e-12);
        }

        let p = Pmf::from_probs(&[0.5, 0.3, 0.2]).unwrap();
        let b = ProductView::new(p, 1).unwrap().sorted_mass_blocks().unwrap();
        assert_eq!(b.len(), 3);
        assert!((b[2].log_mass - 0.2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn zero_mass_block_trails() {
        let p = Pmf::from_probs(&[0.5, 0.5, 0.0]).unwrap();
        let b = ProductView::new(p, 2).unwrap().sorted_mass_blocks().unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[1].log_mass, f64::NEG_INFINITY);
        assert_eq!(b[0].multiplicity + b[1].multiplicity, 9);
    }

    #[test]
    fn pmf_validation() {
        assert!(Pmf::from_probs(&[]).is_err());
        assert!(Pmf::from_probs(&[0.0, 0.0]).is_err());
        assert!(Pmf::from_probs(&[-0.1, 1.0]).is_err());
        assert!(Pmf::new(vec!["a".into(), "a".into()], vec![1.0, 1.0]).is_err());
        let p = Pmf::from_probs(&[2.0, 6.0]).unwrap();
        assert_eq!(p.probs(), &[0.25, 0.75]);
        assert_eq!(Pmf::from_probs(&[0.0, 1.0]).unwrap().support(), vec![1]);
    }
}
