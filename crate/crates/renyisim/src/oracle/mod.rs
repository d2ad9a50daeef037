//! Brute-force references: exhaustive map search, atom-level mappings and plain-sum
//! divergences, simplex grids, dense one-dimensional grids and exact spectrum sums.
//!
//! Nothing here goes through the block machinery of the core crate; everything works on
//! explicit probability vectors.

use rayon::prelude::*;
use renyisim_core::asymptotics::Direction;
use renyisim_core::{guard_limit, Error, ExtReal, Order, Pmf};
use serde::Serialize;

pub mod grid;
mod simplex;
mod spectrum;

pub use simplex::{simplex_grid_opt, Objective};
pub use spectrum::empirical_spectrum;

/// One oracle-versus-library comparison.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub quantity: String,
    #[serde(serialize_with = "extended")]
    pub oracle: f64,
    #[serde(serialize_with = "extended")]
    pub library: f64,
    #[serde(serialize_with = "extended")]
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Finite values as numbers, infinities as `"inf"` / `"-inf"`.
fn extended<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else if *x < 0.0 {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("nan")
    }
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, oracle: f64, library: f64, tolerance: f64) -> Self {
        let gap = if oracle == library { 0.0 } else { (oracle - library).abs() };
        let gap = if gap.is_nan() { f64::INFINITY } else { gap };
        OracleReport { quantity: quantity.into(), oracle, library, gap, tolerance, pass: gap <= tolerance }
    }

    /// Comparison where the library value may not undercut the oracle; only a shortfall
    /// counts as gap.
    pub fn lower_bound(quantity: impl Into<String>, oracle: f64, library: f64, tolerance: f64) -> Self {
        let gap = if library >= oracle { 0.0 } else { oracle - library };
        OracleReport { quantity: quantity.into(), oracle, library, gap, tolerance, pass: gap <= tolerance }
    }

    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("plain struct")
    }
}

/// `H_alpha` by direct summation over the support.
pub fn plain_entropy(p: &[f64], alpha: f64) -> f64 {
    let s: Vec<f64> = p.iter().copied().filter(|&x| x > 0.0).collect();
    if alpha == 0.0 {
        (s.len() as f64).ln()
    } else if alpha == 1.0 {
        -s.iter().map(|&x| x * x.ln()).sum::<f64>()
    } else if alpha == f64::INFINITY {
        -s.iter().copied().fold(0.0, f64::max).ln()
    } else if alpha == f64::NEG_INFINITY {
        -s.iter().copied().fold(1.0, f64::min).ln()
    } else {
        let top = if alpha > 0.0 { s.iter().copied().fold(0.0, f64::max) } else { s.iter().copied().fold(1.0, f64::min) };
        (alpha * top.ln() + s.iter().map(|&x| (x / top).powf(alpha)).sum::<f64>().ln()) / (1.0 - alpha)
    }
}

/// `D_alpha(p || q)` by direct summation; `+inf` when undefined.
pub fn plain_divergence(p: &[f64], q: &[f64], alpha: Order) -> f64 {
    let pairs: Vec<(f64, f64)> = p.iter().copied().zip(q.iter().copied()).filter(|&(a, _)| a > 0.0).collect();
    let singular = pairs.iter().any(|&(_, b)| b == 0.0);
    let v = match alpha {
        Order::Zero => -pairs.iter().map(|&(_, b)| b).sum::<f64>().ln(),
        Order::One if singular => f64::INFINITY,
        Order::One => pairs.iter().map(|&(a, b)| a * (a / b).ln()).sum(),
        Order::PosInf if singular => f64::INFINITY,
        Order::PosInf => pairs.iter().map(|&(a, b)| a / b).fold(0.0, f64::max).ln(),
        Order::Finite(a) if a > 1.0 && singular => f64::INFINITY,
        Order::Finite(a) => {
            let s: f64 = pairs.iter().filter(|&&(_, b)| b > 0.0).map(|&(x, y)| x.powf(a) * y.powf(1.0 - a)).sum();
            s.ln() / (a - 1.0)
        }
        Order::NegInf => f64::NAN,
    };
    if v.is_nan() {
        f64::INFINITY
    } else {
        v.max(0.0)
    }
}

/// Plain-sum divergence in the requested direction.
pub fn plain_directed(py: &[f64], q: &[f64], alpha: Order, dir: Direction) -> f64 {
    match dir {
        Direction::PQ => plain_divergence(py, q, alpha),
        Direction::QP => plain_divergence(q, py, alpha),
        Direction::Max => plain_divergence(py, q, alpha).max(plain_divergence(q, py, alpha)),
    }
}

/// All `|X|^n` sequence probabilities in lexicographic order; guarded.
pub fn product_atoms(p: &Pmf, n: u32) -> Result<Vec<f64>, Error> {
    let count = (p.len() as u128).checked_pow(n).unwrap_or(u128::MAX);
    if count > guard_limit() as u128 {
        return Err(Error::GuardExceeded { requested: count, limit: guard_limit() as u128 });
    }
    let mut atoms = vec![1.0];
    for _ in 0..n {
        atoms = atoms.iter().flat_map(|&a| p.probs().iter().map(move |&x| a * x)).collect();
    }
    Ok(atoms)
}

fn descending(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
    idx
}

/// Compensated prefix sums `G(i)` and remainders `1 - G(i)` summed from the light end.
fn levels(sorted: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let neumaier = |it: &mut dyn Iterator<Item = f64>| -> Vec<f64> {
        let (mut s, mut c) = (0.0f64, 0.0f64);
        let mut out = Vec::new();
        for x in it {
            let t = s + x;
            c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
            s = t;
            out.push(s + c);
        }
        out
    };
    let head = neumaier(&mut sorted.iter().copied());
    let mut tail_incl = neumaier(&mut sorted.iter().rev().copied());
    tail_incl.reverse();
    let mut tail: Vec<f64> = tail_incl.into_iter().skip(1).collect();
    tail.push(0.0);
    (head, tail)
}

/// Mapping 1 on explicit atoms: `x_i -> y_j` with `j` the first index whose level reaches `G_X(i)`.
/// Output is indexed like `q`.
pub fn naive_mapping1(p: &[f64], q: &[f64]) -> Vec<f64> {
    let (ip, iq) = (descending(p), descending(q));
    let sp: Vec<f64> = ip.iter().map(|&i| p[i]).collect();
    let sq: Vec<f64> = iq.iter().map(|&j| q[j]).collect();
    let (gp, tp) = levels(&sp);
    let (gq, tq) = levels(&sq);
    let last = sq.iter().rposition(|&x| x > 0.0).unwrap_or(0);
    let reaches = |i: usize, j: usize| {
        if gq[j] <= tq[j] {
            gp[i] <= gq[j] * (1.0 + 1e-12)
        } else {
            tp[i] >= tq[j] * (1.0 - 1e-12)
        }
    };
    let mut out = vec![0.0; q.len()];
    let mut j = 0;
    for i in 0..sp.len() {
        if sp[i] > 0.0 {
            while j < last && !reaches(i, j) {
                j += 1;
            }
        }
        out[iq[j]] += sp[i];
    }
    out
}

/// Mapping 2 on explicit atoms: consecutive source atoms fill each target atom until its
/// mass is reached; leftovers join the last target atom that received mass.
pub fn naive_mapping2(p: &[f64], q: &[f64]) -> Vec<f64> {
    let (ip, iq) = (descending(p), descending(q));
    let mut out = vec![0.0; q.len()];
    let mut i = 0;
    let mut last_hit = iq[0];
    for &j in &iq {
        let b = q[j];
        let mut acc = 0.0;
        while i < ip.len() && b > 0.0 && acc < b * (1.0 - 1e-12) {
            acc += p[ip[i]];
            i += 1;
        }
        out[j] = acc;
        if acc > 0.0 {
            last_hit = j;
        }
    }
    while i < ip.len() {
        out[last_hit] += p[ip[i]];
        i += 1;
    }
    out
}

/// Exhaustive minimum of the divergence over all maps `supp(p) -> supp(q)`.
///
/// Returns the image index in `q` of each symbol of `p` (symbols outside the support go to
/// the first support symbol of `q`) and the optimal value. Ties go to the lexicographically
/// smallest map.
pub fn brute_force_optimal_map(p: &Pmf, q: &Pmf, alpha: Order, dir: Direction) -> Result<(Vec<usize>, ExtReal), Error> {
    let sp = p.support();
    let sq = q.support();
    let count = (sq.len() as u128).checked_pow(sp.len() as u32).unwrap_or(u128::MAX);
    if count > guard_limit() as u128 {
        return Err(Error::GuardExceeded { requested: count, limit: guard_limit() as u128 });
    }
    let base = sq.len() as u64;
    let decode = |mut code: u64| {
        let mut digits = vec![0usize; sp.len()];
        for d in digits.iter_mut().rev() {
            *d = (code % base) as usize;
            code /= base;
        }
        digits
    };
    let value = |code: u64| {
        let mut py = vec![0.0; q.len()];
        for (k, &d) in decode(code).iter().enumerate() {
            py[sq[d]] += p.probs()[sp[k]];
        }
        plain_directed(&py, q.probs(), alpha, dir)
    };
    let (v, code) = (0..count as u64)
        .into_par_iter()
        .map(|c| (value(c), c))
        .reduce(|| (f64::INFINITY, u64::MAX), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let code = if code == u64::MAX { 0 } else { code };
    let mut map = vec![sq[0]; p.len()];
    for (k, &d) in decode(code).iter().enumerate() {
        map[sp[k]] = sq[d];
    }
    Ok((map, ExtReal::new(v)))
}
