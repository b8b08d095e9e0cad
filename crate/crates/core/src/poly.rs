//! Dense univariate polynomials over a [`Field`], plus a small bivariate type.

use crate::field::{Elem, Field, FieldError};

/// Coefficients low-degree first, without trailing zeros. The zero
/// polynomial has no coefficients and degree `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Elem::ONE)
    }

    pub fn constant(c: Elem) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// c·x^d.
    pub fn monomial(c: Elem, d: usize) -> Poly {
        let mut v = vec![Elem::ZERO; d + 1];
        v[d] = c;
        Poly::from_coeffs(v)
    }

    pub fn x() -> Poly {
        Poly::monomial(Elem::ONE, 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn eval(&self, f: &Field, x: Elem) -> Elem {
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, f: &Field, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, f: &Field, o: &Poly) -> Poly {
        self.add(f, &o.neg(f))
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, f: &Field, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, f: &Field, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(f, self))
    }

    pub fn divrem(&self, f: &Field, d: &Poly) -> Result<(Poly, Poly), FieldError> {
        let dd = d.degree().ok_or(FieldError::DivisionByZero)?;
        let inv = f.inv(d.lead())?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quo = vec![Elem::ZERO; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv);
            if c.is_zero() {
                continue;
            }
            quo[i - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = f.sub(r[i - dd + j], f.mul(c, dj));
            }
        }
        r.truncate(dd);
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, f: &Field, d: &Poly) -> Result<Poly, FieldError> {
        Ok(self.divrem(f, d)?.1)
    }

    pub fn monic(&self, f: &Field) -> Poly {
        match f.inv(self.lead()) {
            Ok(inv) => self.scale(f, inv),
            Err(_) => Poly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(f: &Field, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        Poly::from_coeffs(
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.from_int(i as i64), c)).collect(),
        )
    }

    /// ∏ (x − r).
    pub fn from_roots(f: &Field, roots: &[Elem]) -> Poly {
        roots.iter().fold(Poly::one(), |acc, &r| acc.mul(f, &Poly::from_coeffs(vec![f.neg(r), Elem::ONE])))
    }

    /// self^e mod m.
    pub fn pow_mod(&self, f: &Field, mut e: u128, m: &Poly) -> Result<Poly, FieldError> {
        let mut base = self.rem(f, m)?;
        let mut acc = Poly::one().rem(f, m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m)?;
            }
            base = base.mul(f, &base).rem(f, m)?;
            e >>= 1;
        }
        Ok(acc)
    }
}

/// Sparse bivariate polynomial `Σ c_{ij} X^i Y^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2 {
    pub terms: Vec<(u32, u32, Elem)>,
}

impl Poly2 {
    pub fn new() -> Poly2 {
        Poly2::default()
    }

    pub fn term(mut self, c: Elem, i: u32, j: u32) -> Poly2 {
        if !c.is_zero() {
            self.terms.push((i, j, c));
        }
        self
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|&(i, j, _)| i + j).max()
    }

    pub fn eval(&self, f: &Field, x: Elem, y: Elem) -> Elem {
        f.sum(self.terms.iter().map(|&(i, j, c)| f.mul(c, f.mul(f.pow(x, i as u64), f.pow(y, j as u64)))))
    }
}
