//! Generic linear codes and the brute-force oracles: minimum distance,
//! error distance, coset-leader weights, MDS and subcode deep-hole checks.

use crate::field::{Elem, Field};
use crate::linalg::Matrix;
use thiserror::Error;

pub const DEFAULT_ENUM_BUDGET: u128 = 10_000_000;
pub const DEFAULT_COSET_BUDGET: u128 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("word length {got} does not match code length {expected}")]
    Length { expected: usize, got: usize },
    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("parity-check matrix does not annihilate the generator")]
    NotDual,
    #[error("code is not contained in the supercode")]
    NotSubcode,
    #[error("subcode dimension {sub} is not one less than {sup}")]
    DimensionGap { sub: usize, sup: usize },
}

fn check_budget(needed: u128, budget: u128) -> Result<(), CodeError> {
    if needed > budget {
        Err(CodeError::Budget { needed, budget })
    } else {
        Ok(())
    }
}

pub fn hamming(u: &[Elem], v: &[Elem]) -> Result<usize, CodeError> {
    if u.len() != v.len() {
        return Err(CodeError::Length { expected: u.len(), got: v.len() });
    }
    Ok(u.iter().zip(v).filter(|(a, b)| a != b).count())
}

pub fn weight(u: &[Elem]) -> usize {
    u.iter().filter(|e| !e.is_zero()).count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    k: usize,
    g: Matrix,
    h: Matrix,
}

impl LinearCode {
    /// Builds the code from a generator; H is taken from the kernel.
    pub fn from_generator(f: &Field, g: Matrix) -> Result<LinearCode, CodeError> {
        let rank = g.rank(f);
        if rank != g.rows() {
            return Err(CodeError::RankDeficient { rank, expected: g.rows() });
        }
        let h = g.nullspace(f);
        Ok(LinearCode { n: g.cols(), k: g.rows(), g, h })
    }

    pub fn with_parity_check(f: &Field, g: Matrix, h: Matrix) -> Result<LinearCode, CodeError> {
        let n = g.cols();
        let k = g.rows();
        let rank = g.rank(f);
        if rank != k {
            return Err(CodeError::RankDeficient { rank, expected: k });
        }
        let hr = h.rank(f);
        if h.cols() != n || h.rows() != n - k || hr != n - k {
            return Err(CodeError::RankDeficient { rank: hr, expected: n - k });
        }
        if !h.mul(f, &g.transpose()).is_zero() {
            return Err(CodeError::NotDual);
        }
        Ok(LinearCode { n, k, g, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn generator(&self) -> &Matrix {
        &self.g
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.h
    }

    fn check_len(&self, u: &[Elem]) -> Result<(), CodeError> {
        if u.len() != self.n {
            return Err(CodeError::Length { expected: self.n, got: u.len() });
        }
        Ok(())
    }

    pub fn syndrome(&self, f: &Field, u: &[Elem]) -> Result<Vec<Elem>, CodeError> {
        self.check_len(u)?;
        Ok(self.h.mul_vec(f, u))
    }

    pub fn contains(&self, f: &Field, u: &[Elem]) -> Result<bool, CodeError> {
        Ok(self.syndrome(f, u)?.iter().all(|e| e.is_zero()))
    }

    pub fn encode(&self, f: &Field, msg: &[Elem]) -> Vec<Elem> {
        self.g.vec_mul(f, msg)
    }

    /// Calls `visit` on every codeword in message-odometer order.
    pub fn for_each_codeword(&self, f: &Field, budget: u128, mut visit: impl FnMut(&[Elem])) -> Result<(), CodeError> {
        let q = f.q() as u128;
        check_budget(q.saturating_pow(self.k as u32), budget)?;
        let rows: Vec<&[Elem]> = (0..self.k).map(|i| self.g.row(i)).collect();
        let mut digits = vec![0u32; self.k];
        let mut word = vec![Elem::ZERO; self.n];
        visit(&word);
        'outer: loop {
            // bump the message odometer, adjusting the word by the row deltas
            for i in 0..self.k {
                let old = Elem(digits[i]);
                if digits[i] + 1 < f.q() {
                    digits[i] += 1;
                    let d = f.sub(Elem(digits[i]), old);
                    for (w, &g) in word.iter_mut().zip(rows[i]) {
                        *w = f.add(*w, f.mul(d, g));
                    }
                    visit(&word);
                    continue 'outer;
                }
                digits[i] = 0;
                let d = f.neg(old);
                for (w, &g) in word.iter_mut().zip(rows[i]) {
                    *w = f.add(*w, f.mul(d, g));
                }
            }
            break;
        }
        Ok(())
    }

    pub fn min_distance(&self, f: &Field, budget: u128) -> Result<usize, CodeError> {
        let mut best = usize::MAX;
        self.for_each_codeword(f, budget, |w| {
            let wt = weight(w);
            if wt > 0 {
                best = best.min(wt);
            }
        })?;
        Ok(if best == usize::MAX { self.n + 1 } else { best })
    }

    pub fn is_mds(&self, f: &Field, budget: u128) -> Result<bool, CodeError> {
        Ok(self.min_distance(f, budget)? == self.n - self.k + 1)
    }

    /// d(u, C) by scanning every codeword.
    pub fn error_distance_direct(&self, f: &Field, u: &[Elem], budget: u128) -> Result<usize, CodeError> {
        self.check_len(u)?;
        let mut best = self.n;
        self.for_each_codeword(f, budget, |c| {
            let d = u.iter().zip(c).filter(|(a, b)| a != b).count();
            best = best.min(d);
        })?;
        Ok(best)
    }

    pub fn syndrome_space(&self, f: &Field) -> SyndromeSpace {
        SyndromeSpace::new(f, self.redundancy())
    }

    /// Minimal coset weight of every syndrome.
    pub fn coset_weights(&self, f: &Field, budget: u128) -> Result<CosetWeights, CodeError> {
        CosetWeights::build(f, &self.h, budget)
    }

    /// Exhaustive leader search by increasing weight; leaders are the
    /// lexicographically smallest words of minimal weight.
    pub fn coset_leaders(&self, f: &Field, budget: u128) -> Result<Vec<CosetReport>, CodeError> {
        coset_leaders(f, &self.h, budget)
    }

    /// Error distance through the coset table.
    pub fn error_distance(&self, f: &Field, table: &CosetWeights, u: &[Elem]) -> Result<usize, CodeError> {
        let s = self.syndrome(f, u)?;
        Ok(table.weight(table.space.index(f, &s)) as usize)
    }
}

/// Bijection between F_q^r and 0..q^r: Σ packed(a_i)·q^{r−1−i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeSpace {
    q: usize,
    r: usize,
    size: usize,
}

impl SyndromeSpace {
    pub fn new(f: &Field, r: usize) -> SyndromeSpace {
        let q = f.q() as usize;
        let size = q.checked_pow(r as u32).expect("syndrome space too large");
        SyndromeSpace { q, r, size }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn index(&self, f: &Field, s: &[Elem]) -> usize {
        assert_eq!(s.len(), self.r);
        s.iter().fold(0, |acc, &e| acc * self.q + f.packed(e) as usize)
    }

    pub fn vector(&self, f: &Field, mut idx: usize) -> Vec<Elem> {
        let mut v = vec![Elem::ZERO; self.r];
        for c in (0..self.r).rev() {
            v[c] = f.from_packed((idx % self.q) as u32);
            idx /= self.q;
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct CosetWeights {
    pub space: SyndromeSpace,
    weights: Vec<u8>,
}

const UNSEEN: u8 = u8::MAX;

impl CosetWeights {
    /// Relaxes W[s] ← min(W[s], W[s + λh_j] + 1) for every column h_j and
    /// λ ≠ 0, in place. Every stored value is the weight of an actual error
    /// pattern and is at most the column-by-column dynamic program, so the
    /// result is the exact minimum.
    pub fn build(f: &Field, h: &Matrix, budget: u128) -> Result<CosetWeights, CodeError> {
        let r = h.rows();
        let q = f.q() as usize;
        let size = (q as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
        check_budget(size, budget)?;
        let space = SyndromeSpace::new(f, r);
        let mut w = vec![UNSEEN; space.size];
        w[0] = 0;
        if r == 0 {
            return Ok(CosetWeights { space, weights: w });
        }
        // addp[x][y] on packed values
        let addp: Vec<Vec<u32>> = (0..q as u32)
            .map(|x| (0..q as u32).map(|y| f.packed(f.add(f.from_packed(x), f.from_packed(y)))).collect())
            .collect();
        let pw: Vec<usize> = (0..r).map(|c| q.pow((r - 1 - c) as u32)).collect();
        let block = q;
        let nblocks = space.size / block;
        let mut low = vec![0usize; q];
        for j in 0..h.cols() {
            let col = h.col(j);
            for lam in f.nonzero() {
                let u: Vec<u32> = col.iter().map(|&c| f.packed(f.mul(lam, c))).collect();
                for (x, slot) in low.iter_mut().enumerate() {
                    *slot = addp[x][u[r - 1] as usize] as usize;
                }
                // odometer over components 0..r−1 of s, tracking t = s + u
                let mut digits = vec![0usize; r - 1];
                let mut tbase: usize = (0..r - 1).map(|c| u[c] as usize * pw[c]).sum();
                for b in 0..nblocks {
                    let base = b * block;
                    for x in 0..q {
                        let cand = w[tbase + low[x]].saturating_add(1);
                        if cand < w[base + x] {
                            w[base + x] = cand;
                        }
                    }
                    let mut c = r - 1;
                    while c > 0 {
                        c -= 1;
                        let x = digits[c];
                        let old = addp[x][u[c] as usize] as usize;
                        if x + 1 < q {
                            digits[c] = x + 1;
                            let new = addp[x + 1][u[c] as usize] as usize;
                            tbase = tbase + new * pw[c] - old * pw[c];
                            break;
                        }
                        digits[c] = 0;
                        tbase = tbase + u[c] as usize * pw[c] - old * pw[c];
                    }
                }
            }
        }
        Ok(CosetWeights { space, weights: w })
    }

    pub fn weight(&self, idx: usize) -> u8 {
        self.weights[idx]
    }

    pub fn weights(&self) -> &[u8] {
        &self.weights
    }

    /// Largest coset weight; `None` if some syndrome is unreachable.
    pub fn covering_radius(&self) -> Option<usize> {
        let m = *self.weights.iter().max().expect("table is nonempty");
        (m != UNSEEN).then_some(m as usize)
    }

    /// Count of syndromes per leader weight.
    pub fn histogram(&self) -> Vec<u64> {
        let mut h = vec![0u64; self.space.r + 1];
        for &w in &self.weights {
            if (w as usize) < h.len() {
                h[w as usize] += 1;
            }
        }
        h
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetReport {
    pub syndrome: Vec<Elem>,
    pub leader_weight: usize,
    pub leader: Vec<Elem>,
    pub is_deep_hole: bool,
}

fn coset_leaders(f: &Field, h: &Matrix, budget: u128) -> Result<Vec<CosetReport>, CodeError> {
    let r = h.rows();
    let n = h.cols();
    let q = f.q() as u128;
    check_budget(q.saturating_pow(n as u32), budget)?;
    let space = SyndromeSpace::new(f, r);
    let cols: Vec<Vec<Elem>> = (0..n).map(|j| h.col(j)).collect();
    let mut leaders: Vec<Option<Vec<Elem>>> = vec![None; space.size];
    let mut filled = 0usize;

    struct Walk<'a> {
        f: &'a Field,
        cols: &'a [Vec<Elem>],
        space: &'a SyndromeSpace,
        leaders: &'a mut Vec<Option<Vec<Elem>>>,
        filled: &'a mut usize,
        word: Vec<Elem>,
    }

    // words of exact weight `rem` on positions pos.., lexicographic order
    fn walk(st: &mut Walk, pos: usize, rem: usize, syn: &[Elem]) {
        let n = st.word.len();
        if *st.filled == st.space.size {
            return;
        }
        if rem == 0 {
            let idx = st.space.index(st.f, syn);
            if st.leaders[idx].is_none() {
                st.leaders[idx] = Some(st.word.clone());
                *st.filled += 1;
            }
            return;
        }
        if n - pos < rem {
            return;
        }
        let f = st.f;
        for v in 0..f.q() {
            let e = Elem(v);
            if e.is_zero() {
                if n - pos > rem {
                    walk(st, pos + 1, rem, syn);
                }
                continue;
            }
            let next: Vec<Elem> = syn.iter().zip(&st.cols[pos]).map(|(&s, &c)| f.add(s, f.mul(e, c))).collect();
            st.word[pos] = e;
            walk(st, pos + 1, rem - 1, &next);
            st.word[pos] = Elem::ZERO;
        }
    }

    let mut st =
        Walk { f, cols: &cols, space: &space, leaders: &mut leaders, filled: &mut filled, word: vec![Elem::ZERO; n] };
    let zero = vec![Elem::ZERO; r];
    for w in 0..=n {
        walk(&mut st, 0, w, &zero);
        if *st.filled == space.size {
            break;
        }
    }
    let rho = leaders.iter().flatten().map(|l| weight(l)).max().unwrap_or(0);
    Ok(leaders
        .into_iter()
        .enumerate()
        .map(|(idx, l)| {
            let leader = l.expect("rank-deficient parity check leaves a coset unreachable");
            let lw = weight(&leader);
            CosetReport { syndrome: space.vector(f, idx), leader_weight: lw, leader, is_deep_hole: lw == rho }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcodeReport {
    pub covering_radius: usize,
    pub words_checked: u64,
    pub failures: u64,
}

impl SubcodeReport {
    pub fn passed(&self, n: usize, k: usize) -> bool {
        self.covering_radius == n - k && self.failures == 0
    }
}

/// For a 1-codimensional subcode C of C0, computes ρ(C) and the error
/// distance of every word of C0∖C.
pub fn subcode_deep_holes(
    f: &Field,
    c0: &LinearCode,
    c: &LinearCode,
    budget: u128,
) -> Result<SubcodeReport, CodeError> {
    if c0.k() != c.k() + 1 {
        return Err(CodeError::DimensionGap { sub: c.k(), sup: c0.k() });
    }
    let stacked =
        Matrix::from_rows(c0.generator().to_rows().into_iter().chain(c.generator().to_rows()).collect(), c0.n());
    if stacked.rank(f) != c0.k() {
        return Err(CodeError::NotSubcode);
    }
    let table = c.coset_weights(f, budget)?;
    let rho = table.covering_radius().expect("full-rank parity check");
    let target = c.n() - c.k();
    let mut checked = 0u64;
    let mut failures = 0u64;
    c0.for_each_codeword(f, budget, |w| {
        let s = c.parity_check().mul_vec(f, w);
        if s.iter().all(|e| e.is_zero()) {
            return;
        }
        checked += 1;
        if table.weight(table.space.index(f, &s)) as usize != target {
            failures += 1;
        }
    })?;
    Ok(SubcodeReport { covering_radius: rho, words_checked: checked, failures })
}

/// Generator of RS_k(A): rows x^0..x^{k−1} evaluated on A.
pub fn rs_generator(f: &Field, a: &[Elem], k: usize) -> Matrix {
    Matrix::from_rows((0..k).map(|i| a.iter().map(|&x| f.pow(x, i as u64)).collect()).collect(), a.len())
}
