//! Block-level sweeps behind the two basic mappings.
//!
//! Sources and targets are lists of `(atom mass, multiplicity)` in descending
//! mass order. Target atoms are visited one at a time (their total count is
//! guarded), source atoms are consumed in bulk.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::Piece;
use crate::dist::check_guard;
use crate::Result;

const TOL: f64 = 1e-12;

/// Per target block, run-length encoded `(atoms, induced mass per atom)`.
/// `links` holds `(source block, target block, source atoms)`.
#[derive(Debug, Clone)]
pub(crate) struct Sweep {
    pub runs: Vec<Vec<(u128, f64)>>,
    pub links: Vec<(usize, usize, u128)>,
}

impl Sweep {
    fn new(nt: usize) -> Self {
        Sweep { runs: (0..nt).map(|_| Vec::new()).collect(), links: Vec::new() }
    }

    fn push(&mut self, tb: usize, mass: f64) {
        match self.runs[tb].last_mut() {
            Some((len, m)) if *m == mass => *len += 1,
            _ => self.runs[tb].push((1, mass)),
        }
    }

    fn link(&mut self, sb: usize, tb: usize, count: u128) {
        if count == 0 {
            return;
        }
        match self.links.last_mut() {
            Some((s, t, c)) if *s == sb && *t == tb => *c += count,
            _ => self.links.push((sb, tb, count)),
        }
    }

    /// Adds `extra` to the last target atom carrying positive mass.
    fn dump_on_last_positive(&mut self, extra: f64) {
        if extra <= 0.0 {
            return;
        }
        for r in self.runs.iter_mut().rev() {
            if let Some(i) = r.iter().rposition(|&(_, m)| m > 0.0) {
                let (len, m) = r[i];
                if len > 1 {
                    r[i].0 = len - 1;
                    r.insert(i + 1, (1, m + extra));
                } else {
                    r[i].1 = m + extra;
                }
                return;
            }
        }
    }
}

struct Cursor<'a> {
    src: &'a [(f64, u128)],
    block: usize,
    used: u128,
    /// Cumulative mass of all blocks before `block`.
    base: f64,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a [(f64, u128)]) -> Self {
        let mut c = Cursor { src, block: 0, used: 0, base: 0.0 };
        c.skip_empty();
        c
    }

    fn skip_empty(&mut self) {
        while self.block < self.src.len() && self.src[self.block].1 == self.used {
            self.base += self.src[self.block].0 * self.src[self.block].1 as f64;
            self.block += 1;
            self.used = 0;
        }
    }

    fn done(&self) -> bool {
        self.block >= self.src.len()
    }

    fn current(&self) -> (f64, u128) {
        let (a, m) = self.src[self.block];
        (a, m - self.used)
    }

    fn take(&mut self, count: u128) {
        self.used += count;
        self.skip_empty();
    }

    fn remaining_mass(&self) -> f64 {
        let mut s = 0.0;
        for (i, &(a, m)) in self.src.iter().enumerate().skip(self.block) {
            let left = if i == self.block { m - self.used } else { m };
            s += a * left as f64;
        }
        s
    }
}

fn float_count(x: f64) -> u128 {
    if x.is_nan() || x <= 0.0 {
        0
    } else {
        x as u128
    }
}

fn last_positive(tgt: &[(f64, u128)]) -> Option<usize> {
    tgt.iter().rposition(|&(b, m)| b > 0.0 && m > 0)
}

/// Mass strictly after each block.
fn suffix(v: &[(f64, u128)]) -> Vec<f64> {
    let mut out = alloc::vec![0.0; v.len()];
    let mut acc = 0.0;
    for i in (0..v.len()).rev() {
        out[i] = acc;
        acc += v[i].0 * v[i].1 as f64;
    }
    out
}

/// `x_i -> y_j` with `j = min{j : G_Y(j) >= G_X(i)}`.
///
/// Levels in the upper half are compared through the remaining mass `1 - G`, summed from the
/// light end, so that the tails keep their relative precision.
pub(crate) fn inverse_transform(src: &[(f64, u128)], tgt: &[(f64, u128)]) -> Result<Sweep> {
    check_guard(tgt.iter().map(|t| t.1).sum())?;
    let mut sw = Sweep::new(tgt.len());
    let mut cur = Cursor::new(src);
    let (s_suf, t_suf) = (suffix(src), suffix(tgt));
    let last = last_positive(tgt);
    let mut t_base = 0.0;
    for (tb, &(b, m)) in tgt.iter().enumerate() {
        for t in 0..m {
            let take_all = Some(tb) == last && t + 1 == m;
            let level = t_base + (t + 1) as f64 * b;
            let rest = t_suf[tb] + (m - t - 1) as f64 * b;
            let mut mass = 0.0;
            while !cur.done() {
                let (a, avail) = cur.current();
                let count = if take_all || a == 0.0 {
                    avail
                } else if level <= rest {
                    float_count(((level * (1.0 + TOL) - cur.base) / a).floor()).saturating_sub(cur.used).min(avail)
                } else {
                    let x = (rest * (1.0 - TOL) - s_suf[cur.block]) / a;
                    if x <= 0.0 {
                        avail
                    } else {
                        avail.saturating_sub(float_count(x.ceil()))
                    }
                };
                mass += a * count as f64;
                sw.link(cur.block, tb, count);
                cur.take(count);
                if count < avail {
                    break;
                }
            }
            sw.push(tb, mass);
        }
        t_base += b * m as f64;
    }
    Ok(sw)
}

/// Consecutive source atoms fill each target atom until its mass is reached.
pub(crate) fn greedy(src: &[(f64, u128)], tgt: &[(f64, u128)]) -> Result<Sweep> {
    check_guard(tgt.iter().map(|t| t.1).sum())?;
    let mut sw = Sweep::new(tgt.len());
    let mut cur = Cursor::new(src);
    for (tb, &(b, m)) in tgt.iter().enumerate() {
        for _ in 0..m {
            let mut acc = 0.0;
            while !cur.done() && b > 0.0 && acc < b * (1.0 - TOL) {
                let (a, avail) = cur.current();
                let count = if a == 0.0 {
                    avail
                } else {
                    float_count(((b - acc) / a - 1e-9).ceil()).max(1).min(avail)
                };
                acc += a * count as f64;
                sw.link(cur.block, tb, count);
                cur.take(count);
            }
            sw.push(tb, acc);
        }
    }
    if !cur.done() {
        let (sb, tb) = (cur.block, last_positive(tgt).unwrap_or(0));
        let rest: u128 = cur.src[sb..].iter().map(|s| s.1).sum::<u128>() - cur.used;
        let extra = cur.remaining_mass();
        sw.link(sb, tb, rest);
        sw.dump_on_last_positive(extra);
    }
    Ok(sw)
}

/// Complete greedy groups of mass `b` formed from `src`; the atoms of a final incomplete
/// group come back as `(source block, count)`.
pub(crate) fn greedy_prefix(src: &[(f64, u128)], b: f64, max_groups: u128) -> (Vec<(u128, f64)>, Vec<(usize, u128)>, Vec<(usize, u128)>) {
    let mut runs: Vec<(u128, f64)> = Vec::new();
    let mut links: Vec<(usize, u128)> = Vec::new();
    let mut cur = Cursor::new(src);
    let mut groups = 0u128;
    while !cur.done() && groups < max_groups {
        let mut acc = 0.0;
        let mut taken: Vec<(usize, u128)> = Vec::new();
        while !cur.done() && acc < b * (1.0 - TOL) {
            let (a, avail) = cur.current();
            let count = if a == 0.0 { avail } else { float_count(((b - acc) / a - 1e-9).ceil()).max(1).min(avail) };
            acc += a * count as f64;
            taken.push((cur.block, count));
            cur.take(count);
        }
        if acc < b * (1.0 - TOL) {
            return (runs, links, taken);
        }
        groups += 1;
        links.extend(taken);
        match runs.last_mut() {
            Some((len, m)) if *m == acc => *len += 1,
            _ => runs.push((1, acc)),
        }
    }
    let mut rest = Vec::new();
    while !cur.done() {
        let (_, avail) = cur.current();
        rest.push((cur.block, avail));
        cur.take(avail);
    }
    (runs, links, rest)
}

/// Runs to pieces in log domain.
pub(crate) fn to_pieces(runs: Vec<(u128, f64)>) -> Vec<Piece> {
    runs.into_iter().map(|(len, m)| Piece { len, log_p: if m > 0.0 { m.ln() } else { f64::NEG_INFINITY } }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn masses(sw: &Sweep) -> Vec<f64> {
        sw.runs.iter().flat_map(|r| r.iter().flat_map(|&(l, m)| core::iter::repeat(m).take(l as usize))).collect()
    }

    #[test]
    fn block_form_matches_atom_form() {
        let src = [(0.1, 3u128), (0.05, 10), (0.02, 10)];
        let atoms: Vec<(f64, u128)> = src.iter().flat_map(|&(a, m)| core::iter::repeat((a, 1)).take(m as usize)).collect();
        let tgt = [(0.25, 2u128), (0.125, 4)];
        for f in [inverse_transform, greedy] {
            let x = masses(&f(&src, &tgt).unwrap());
            let y = masses(&f(&atoms, &tgt).unwrap());
            assert_eq!(x.len(), 6);
            for (a, b) in x.iter().zip(&y) {
                assert!((a - b).abs() < 1e-12, "{x:?} {y:?}");
            }
            assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn links_count_every_source_atom() {
        let src = [(0.3, 1u128), (0.1, 7)];
        let tgt = [(0.5, 1u128), (0.25, 2)];
        for f in [inverse_transform, greedy] {
            let sw = f(&src, &tgt).unwrap();
            assert_eq!(sw.links.iter().map(|l| l.2).sum::<u128>(), 8);
        }
    }

    #[test]
    fn greedy_zero_after_exhaustion() {
        let sw = greedy(&[(0.9, 1), (0.1, 1)], &[(0.5, 1), (0.3, 1), (0.2, 1)]).unwrap();
        assert_eq!(masses(&sw), [0.9, 0.1, 0.0]);
    }
}
