//! Elementary symmetric functions, the σ/Λ sequences of an evaluation set,
//! and a generalized Vandermonde determinant identity.

use crate::field::{Elem, Field};
use crate::linalg::Matrix;
use crate::poly::Poly;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymError {
    #[error("repeated element {0:?}")]
    Duplicate(Elem),
    #[error("exponent set must be strictly increasing from 0: {0:?}")]
    BadExponents(Vec<usize>),
    #[error("expected {expected} points, got {got}")]
    Length { expected: usize, got: usize },
}

fn check_distinct(xs: &[Elem]) -> Result<(), SymError> {
    let mut seen = std::collections::HashSet::new();
    for &x in xs {
        if !seen.insert(x) {
            return Err(SymError::Duplicate(x));
        }
    }
    Ok(())
}

/// S_0..S_n of `xs`.
pub fn elementary_symmetric(f: &Field, xs: &[Elem]) -> Vec<Elem> {
    let mut s = vec![Elem::ZERO; xs.len() + 1];
    s[0] = Elem::ONE;
    for (j, &x) in xs.iter().enumerate() {
        for i in (1..=j + 1).rev() {
            s[i] = f.add(s[i], f.mul(s[i - 1], x));
        }
    }
    s
}

/// σ_j = (−1)^j S_j, so that ∏(x − α) = Σ σ_j x^{n−j}. Returned as the
/// sequence σ_0..σ_n.
pub fn sigma_from_roots(f: &Field, roots: &[Elem]) -> Result<Vec<Elem>, SymError> {
    check_distinct(roots)?;
    Ok(signed(f, &elementary_symmetric(f, roots)))
}

/// The same data as a polynomial in the usual low-first layout.
pub fn sigma_poly(f: &Field, roots: &[Elem]) -> Result<Poly, SymError> {
    let mut s = sigma_from_roots(f, roots)?;
    s.reverse();
    Ok(Poly::from_coeffs(s))
}

fn signed(f: &Field, s: &[Elem]) -> Vec<Elem> {
    s.iter().enumerate().map(|(j, &v)| if j % 2 == 1 { f.neg(v) } else { v }).collect()
}

/// Λ_0..Λ_len from Λ_t = −Σ_{i=1}^{t} σ_i Λ_{t−i}, treating σ_i = 0 past the
/// end of `sigma`.
pub fn lambda_from_sigma(f: &Field, sigma: &[Elem], len: usize) -> Vec<Elem> {
    assert!(sigma.first() == Some(&Elem::ONE), "σ_0 must be 1");
    let mut lam = Vec::with_capacity(len + 1);
    lam.push(Elem::ONE);
    for t in 1..=len {
        let top = t.min(sigma.len() - 1);
        let s = f.sum((1..=top).map(|i| f.mul(sigma[i], lam[t - i])));
        lam.push(f.neg(s));
    }
    lam
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetCheck {
    pub lhs: Elem,
    pub rhs: Elem,
}

impl DetCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Both sides of det[x_j^{t_i}] = ∏_{i<j}(x_j − x_i) · det[S_{s−r_b+a}],
/// where the r's are the exponents in 0..=t_s missing from `exps`.
pub fn lemma_det(f: &Field, xs: &[Elem], exps: &[usize]) -> Result<DetCheck, SymError> {
    let s = xs.len();
    if exps.len() != s {
        return Err(SymError::Length { expected: s, got: exps.len() });
    }
    if s == 0 || exps[0] != 0 || exps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SymError::BadExponents(exps.to_vec()));
    }
    let m = exps[s - 1] + 1;
    let gen = Matrix::from_rows(exps.iter().map(|&t| xs.iter().map(|&x| f.pow(x, t as u64)).collect()).collect(), s);
    let lhs = gen.det(f);

    let mut vand = Elem::ONE;
    for j in 0..s {
        for i in 0..j {
            vand = f.mul(vand, f.sub(xs[j], xs[i]));
        }
    }
    let sym = elementary_symmetric(f, xs);
    let at = |i: isize| -> Elem {
        if i < 0 || i as usize > s {
            Elem::ZERO
        } else {
            sym[i as usize]
        }
    };
    let missing: Vec<usize> = (0..m).filter(|t| !exps.contains(t)).collect();
    let sp = missing.len();
    let delta = if sp == 0 {
        Elem::ONE
    } else {
        Matrix::from_rows(
            (0..sp).map(|a| missing.iter().map(|&r| at(s as isize - r as isize + a as isize)).collect()).collect(),
            sp,
        )
        .det(f)
    };
    Ok(DetCheck { lhs, rhs: f.mul(vand, delta) })
}

/// Unique polynomial of degree below the number of points through them.
pub fn lagrange_interpolate(f: &Field, pts: &[(Elem, Elem)]) -> Result<Poly, SymError> {
    let xs: Vec<Elem> = pts.iter().map(|p| p.0).collect();
    check_distinct(&xs)?;
    let mut out = Poly::zero();
    for (i, &(xi, yi)) in pts.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = Poly::one();
        let mut den = Elem::ONE;
        for (j, &xj) in xs.iter().enumerate() {
            if j != i {
                basis = basis.mul(f, &Poly::from_coeffs(vec![f.neg(xj), Elem::ONE]));
                den = f.mul(den, f.sub(xi, xj));
            }
        }
        let c = f.div(yi, den).expect("nodes are distinct");
        out = out.add(f, &basis.scale(f, c));
    }
    Ok(out)
}

/// Triangular table S_{i,j} = S_i(x_1..x_j), grown and shrunk one element
/// at a time so that subset walks only touch the changed suffix.
#[derive(Clone, Debug)]
pub struct SymTable {
    xs: Vec<Elem>,
    // rows[j][i] = S_{i,j}
    rows: Vec<Vec<Elem>>,
}

impl Default for SymTable {
    fn default() -> Self {
        SymTable::new()
    }
}

impl SymTable {
    pub fn new() -> SymTable {
        SymTable { xs: Vec::new(), rows: vec![vec![Elem::ONE]] }
    }

    pub fn from_elems(f: &Field, xs: &[Elem]) -> SymTable {
        let mut t = SymTable::new();
        for &x in xs {
            t.push(f, x);
        }
        t
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn elems(&self) -> &[Elem] {
        &self.xs
    }

    pub fn push(&mut self, f: &Field, x: Elem) {
        let prev = self.rows.last().expect("row 0 always present");
        let j = self.xs.len() + 1;
        let mut row = Vec::with_capacity(j + 1);
        row.push(Elem::ONE);
        for i in 1..=j {
            let keep = prev.get(i).copied().unwrap_or(Elem::ZERO);
            row.push(f.add(keep, f.mul(prev[i - 1], x)));
        }
        self.xs.push(x);
        self.rows.push(row);
    }

    pub fn pop(&mut self) -> Option<Elem> {
        let x = self.xs.pop()?;
        self.rows.pop();
        Some(x)
    }

    /// Drops everything past the first `len` elements.
    pub fn truncate(&mut self, len: usize) {
        self.xs.truncate(len);
        self.rows.truncate(len + 1);
    }

    /// S_{i,j}, zero outside 0 ≤ i ≤ j.
    pub fn s(&self, i: isize, j: usize) -> Elem {
        if i < 0 {
            return Elem::ZERO;
        }
        self.rows[j].get(i as usize).copied().unwrap_or(Elem::ZERO)
    }

    /// S_i of the whole current set.
    pub fn full(&self, i: isize) -> Elem {
        self.s(i, self.xs.len())
    }

    /// c_j = (−1)^j S_j of the current set, j = 0..=len.
    pub fn c(&self, f: &Field) -> Vec<Elem> {
        signed(f, &self.rows[self.xs.len()])
    }

    /// Λ'_0..Λ'_len for the current set.
    pub fn lambda_prime(&self, f: &Field, len: usize) -> Vec<Elem> {
        lambda_from_sigma(f, &self.c(f), len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_root() {
        let f = Field::with_order(7).unwrap();
        let a = f.from_int(3);
        assert_eq!(elementary_symmetric(&f, &[a]), vec![Elem::ONE, a]);
        let sig = sigma_from_roots(&f, &[a]).unwrap();
        assert_eq!(lambda_from_sigma(&f, &sig, 1), vec![Elem::ONE, a]);
    }

    #[test]
    fn full_multiplicative_group() {
        for q in [5, 8, 9, 16] {
            let f = Field::with_order(q).unwrap();
            let a: Vec<Elem> = f.nonzero().collect();
            let sig = sigma_from_roots(&f, &a).unwrap();
            assert_eq!(sig[q as usize - 1], f.neg(Elem::ONE));
            assert!(sig[1..q as usize - 1].iter().all(|s| s.is_zero()));
            let lam = lambda_from_sigma(&f, &sig, q as usize - 2);
            assert!(lam[1..].iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn duplicates_rejected() {
        let f = Field::with_order(5).unwrap();
        assert!(matches!(sigma_from_roots(&f, &[Elem(2), Elem(2)]), Err(SymError::Duplicate(_))));
        assert!(lagrange_interpolate(&f, &[(Elem(1), Elem(1)), (Elem(1), Elem(2))]).is_err());
    }

    #[test]
    fn empty_roots() {
        let f = Field::with_order(5).unwrap();
        assert_eq!(sigma_poly(&f, &[]).unwrap(), Poly::one());
    }

    #[test]
    fn table_push_pop() {
        let f = Field::with_order(11).unwrap();
        let xs: Vec<Elem> = [2, 5, 7, 9].iter().map(|&v| f.from_int(v)).collect();
        let mut t = SymTable::from_elems(&f, &xs);
        assert_eq!(t.rows[4], elementary_symmetric(&f, &xs));
        t.pop();
        t.push(&f, f.from_int(10));
        let ys = [xs[0], xs[1], xs[2], f.from_int(10)];
        assert_eq!(t.rows[4], elementary_symmetric(&f, &ys));
        assert!(t.s(5, 4).is_zero() && t.s(-1, 4).is_zero());
    }

    #[test]
    fn lemma_det_rejects_bad_partition() {
        let f = Field::with_order(7).unwrap();
        let xs = [Elem(1), Elem(2)];
        assert!(lemma_det(&f, &xs, &[1, 2]).is_err());
        assert!(lemma_det(&f, &xs, &[0, 0]).is_err());
        assert!(lemma_det(&f, &xs, &[0]).is_err());
    }
}
