//! Exact cyclotomic integers in Z[ζ_p].

use num_complex::Complex64;
use std::cmp::Ordering;
use std::f64::consts::PI;

/// `Σ c_i ζ_p^i` in the basis `1, ζ, …, ζ^{p−2}`. For p = 2 this is a plain
/// integer since ζ_2 = −1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u32,
    coeffs: Vec<i128>,
}

/// |z|² under the embedding ζ_p ↦ e^{2πi/p}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbsSquare {
    /// Set when z·z̄ is a rational integer.
    pub exact: Option<i128>,
    /// Mean of |σ(z)|² over all embeddings σ, as `(numerator, denominator)`.
    pub embedding_mean: (i128, i128),
    pub approx: f64,
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn checked(x: Option<i128>) -> i128 {
    x.expect("CycInt coefficient overflow")
}

impl CycInt {
    fn width(p: u32) -> usize {
        (p as usize - 1).max(1)
    }

    pub fn zero(p: u32) -> CycInt {
        CycInt { p, coeffs: vec![0; Self::width(p)] }
    }

    pub fn from_int(p: u32, n: i128) -> CycInt {
        let mut z = Self::zero(p);
        z.coeffs[0] = n;
        z
    }

    pub fn one(p: u32) -> CycInt {
        Self::from_int(p, 1)
    }

    /// ζ_p^e.
    pub fn zeta_pow(p: u32, e: i64) -> CycInt {
        let mut full = vec![0i128; p as usize];
        full[e.rem_euclid(p as i64) as usize] = 1;
        Self::reduce(p, full)
    }

    pub fn from_coeffs(p: u32, coeffs: Vec<i128>) -> CycInt {
        assert_eq!(coeffs.len(), Self::width(p));
        CycInt { p, coeffs }
    }

    fn reduce(p: u32, full: Vec<i128>) -> CycInt {
        let top = full[p as usize - 1];
        let coeffs = if p == 2 {
            vec![checked(full[0].checked_sub(top))]
        } else {
            full[..p as usize - 1].iter().map(|&c| checked(c.checked_sub(top))).collect()
        };
        CycInt { p, coeffs }
    }

    fn expand(&self) -> Vec<i128> {
        let mut full = vec![0i128; self.p as usize];
        full[..self.coeffs.len()].copy_from_slice(&self.coeffs);
        full
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The value as a rational integer, when it is one.
    pub fn as_integer(&self) -> Option<i128> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    pub fn add(&self, o: &CycInt) -> CycInt {
        assert_eq!(self.p, o.p);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| checked(a.checked_add(b))).collect();
        CycInt { p: self.p, coeffs }
    }

    pub fn neg(&self) -> CycInt {
        let coeffs = self.coeffs.iter().map(|&a| checked(a.checked_neg())).collect();
        CycInt { p: self.p, coeffs }
    }

    pub fn sub(&self, o: &CycInt) -> CycInt {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: i128) -> CycInt {
        let coeffs = self.coeffs.iter().map(|&a| checked(a.checked_mul(k))).collect();
        CycInt { p: self.p, coeffs }
    }

    pub fn mul(&self, o: &CycInt) -> CycInt {
        assert_eq!(self.p, o.p);
        let p = self.p as usize;
        let (a, b) = (self.expand(), o.expand());
        let mut full = vec![0i128; p];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let t = checked(x.checked_mul(y));
                full[(i + j) % p] = checked(full[(i + j) % p].checked_add(t));
            }
        }
        Self::reduce(self.p, full)
    }

    /// Complex conjugate, ζ ↦ ζ^{−1}.
    pub fn conj(&self) -> CycInt {
        let p = self.p as usize;
        let a = self.expand();
        let mut full = vec![0i128; p];
        for (i, &x) in a.iter().enumerate() {
            full[(p - i) % p] = x;
        }
        Self::reduce(self.p, full)
    }

    /// Image under the Galois automorphism ζ ↦ ζ^j, gcd(j, p) = 1.
    pub fn galois(&self, j: u32) -> CycInt {
        let p = self.p as usize;
        let a = self.expand();
        let mut full = vec![0i128; p];
        for (i, &x) in a.iter().enumerate() {
            let t = (i * j as usize) % p;
            full[t] = checked(full[t].checked_add(x));
        }
        Self::reduce(self.p, full)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| Complex64::from_polar(c as f64, 2.0 * PI * i as f64 / self.p as f64))
            .sum()
    }

    /// Absolute trace Tr_{Q(ζ_p)/Q}.
    pub fn trace(&self) -> i128 {
        let rest: i128 = self.coeffs[1..].iter().sum();
        checked(self.coeffs[0].checked_mul(self.p as i128 - 1)) - rest
    }

    pub fn abs_square(&self) -> AbsSquare {
        let w = self.mul(&self.conj());
        let den = (self.p as i128 - 1).max(1);
        let num = w.trace();
        let g = gcd(num, den).max(1);
        AbsSquare { exact: w.as_integer(), embedding_mean: (num / g, den / g), approx: self.to_complex().norm_sqr() }
    }

    /// Compares |z|² with an integer bound. Exact whenever z·z̄ is rational;
    /// otherwise decided in floating point and `None` if the gap is too small
    /// to trust.
    pub fn cmp_abs_square(&self, bound: i128) -> Option<Ordering> {
        let w = self.mul(&self.conj());
        if let Some(v) = w.as_integer() {
            return Some(v.cmp(&bound));
        }
        let diff = w.to_complex().re - bound as f64;
        let scale = 1.0 + bound.abs() as f64;
        if diff.abs() < 1e-9 * scale {
            None
        } else if diff < 0.0 {
            Some(Ordering::Less)
        } else {
            Some(Ordering::Greater)
        }
    }
}

impl std::fmt::Display for CycInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·ζ")?,
                _ => write!(f, "{c}·ζ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_powers_sum_to_zero() {
        for p in [2u32, 3, 5, 7, 11] {
            let mut s = CycInt::zero(p);
            for e in 0..p as i64 {
                s = s.add(&CycInt::zeta_pow(p, e));
            }
            assert!(s.is_zero());
        }
    }

    #[test]
    fn binary_case_is_integer() {
        let z = CycInt::zeta_pow(2, 1);
        assert_eq!(z.as_integer(), Some(-1));
        assert_eq!(z.mul(&z).as_integer(), Some(1));
    }

    #[test]
    fn conj_and_galois() {
        let z = CycInt::zeta_pow(7, 3);
        assert_eq!(z.conj(), CycInt::zeta_pow(7, 4));
        assert_eq!(z.galois(2), CycInt::zeta_pow(7, 6));
        assert_eq!(z.mul(&z.conj()), CycInt::one(7));
    }

    #[test]
    fn quadratic_gauss_sum_mod_five() {
        // Σ π(x) ζ^x over F_5^*, squares {1, 4}
        let mut g = CycInt::zero(5);
        for (x, s) in [(1, 1), (2, -1), (3, -1), (4, 1)] {
            g = g.add(&CycInt::zeta_pow(5, x).scale(s));
        }
        let a = g.abs_square();
        assert_eq!(a.exact, Some(5));
        assert_eq!(a.embedding_mean, (5, 1));
        assert!((a.approx - 5.0).abs() < 1e-9);
    }

    #[test]
    fn irrational_norm_uses_float_path() {
        // 1 + ζ_5: |1+ζ|² = 2 + 2cos(2π/5) ≈ 2.618
        let z = CycInt::one(5).add(&CycInt::zeta_pow(5, 1));
        assert!(z.abs_square().exact.is_none());
        assert_eq!(z.cmp_abs_square(2), Some(Ordering::Greater));
        assert_eq!(z.cmp_abs_square(3), Some(Ordering::Less));
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn overflow_traps() {
        let big = CycInt::from_int(3, i128::MAX / 2);
        let _ = big.scale(4);
    }
}
