//! Finite fields GF(p^m).
//!
//! Elements are stored by canonical index: 0 is zero and index `i + 1` is
//! `ξ^i` for the canonical primitive element ξ, so the discrete log is the
//! index minus one. Multiplication goes through the exponent, addition
//! through a Zech logarithm table.

mod chars;
mod cyclo;

pub use chars::MultCharValue;
pub use cyclo::{AbsSquare, CycInt};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 22;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported bound {MAX_ORDER}")]
    TooLarge(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid coefficient vector {0:?}")]
    BadCoeffs(Vec<u32>),
    #[error("element index {0} out of range")]
    BadIndex(u64),
    #[error("quadratic character needs odd characteristic")]
    EvenCharacteristic,
}

/// A field element, identified by its canonical index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// JSON descriptor `{p, m, modulus, generator}`; the generator is given by
/// its packed value `Σ c_i p^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
    pub generator: u32,
}

/// GF(p^m) with immutable lookup tables.
#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    // exp[i] = packed(ξ^i); log[packed] = i
    exp: Vec<u32>,
    log: Vec<u32>,
    // 1 + ξ^n = ξ^zech[n]
    zech: Vec<u32>,
    // -1 = ξ^neg_shift
    neg_shift: u32,
    trace: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q = p^m`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = prime_factors(q)[0];
    let mut m = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p as u32, m))
}

// Dense polynomials over GF(p), low-degree first, used only while building
// tables. Remainder modulo a monic polynomial of degree ≥ 1.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    for i in (db..r.len()).rev() {
        let c = r[i] as u64;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let sub = (c * bj as u64 % p as u64) as u32;
            r[i - db + j] = (r[i - db + j] + p - sub) % p;
        }
    }
    r.truncate(db);
    r
}

fn mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(modulus.len() - 1, 0);
    r
}

fn unpack(v: u32, p: u32, m: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    let mut v = v;
    for _ in 0..m {
        out.push(v % p);
        v /= p;
    }
    out
}

fn pack(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        // every monic polynomial of degree d
        for t in 0..(p as u64).pow(d as u32) {
            let mut g = unpack(t as u32, p, d as u32);
            g.push(1);
            let r = poly_rem(f, &g, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree m, comparing coefficient tuples
/// `(c_0, c_1, …, c_{m-1})` lexicographically.
pub fn canonical_modulus(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for t in 0..count {
        // c_0 is the most significant digit of t
        let digits = unpack(t as u32, p, m);
        let mut f: Vec<u32> = digits.into_iter().rev().collect();
        f.push(1);
        if m == 1 || is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    pub fn new(p: u32, m: u32) -> Result<Field, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q64 = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q64 > MAX_ORDER {
            return Err(FieldError::TooLarge(q64));
        }
        let q = q64 as u32;
        let modulus = canonical_modulus(p, m);
        let q1 = (q - 1) as u64;
        let factors = prime_factors(q1);

        let power = |g: &[u32], mut e: u64| -> Vec<u32> {
            let mut acc = unpack(1, p, m);
            let mut base = g.to_vec();
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulmod(&acc, &base, &modulus, p);
                }
                base = mulmod(&base, &base, &modulus, p);
                e >>= 1;
            }
            acc
        };
        let one = unpack(1, p, m);
        let generator = (1..q)
            .find(|&v| {
                let g = unpack(v, p, m);
                factors.iter().all(|&l| power(&g, q1 / l) != one)
            })
            .expect("a primitive element exists");

        let mut exp = vec![0u32; q1 as usize];
        let mut log = vec![NONE; q as usize];
        let g = unpack(generator, p, m);
        let mut cur = one.clone();
        for (i, slot) in exp.iter_mut().enumerate() {
            let v = pack(&cur, p);
            *slot = v;
            log[v as usize] = i as u32;
            cur = mulmod(&cur, &g, &modulus, p);
        }

        let add_packed = |a: u32, b: u32| -> u32 {
            if p == 2 {
                return a ^ b;
            }
            let (mut a, mut b) = (a, b);
            let mut out = 0u32;
            let mut scale = 1u32;
            for _ in 0..m {
                out += ((a % p + b % p) % p) * scale;
                a /= p;
                b /= p;
                scale = scale.wrapping_mul(p);
            }
            out
        };
        let zech: Vec<u32> = exp
            .iter()
            .map(|&v| {
                let w = add_packed(v, 1);
                if w == 0 {
                    NONE
                } else {
                    log[w as usize]
                }
            })
            .collect();
        let neg_shift = if p == 2 { 0 } else { (q1 / 2) as u32 };

        // Tr is GF(p)-linear: tabulate it on the monomial basis first.
        let basis_trace: Vec<u32> = (0..m)
            .map(|i| {
                let x = unpack((p as u64).pow(i) as u32, p, m);
                let mut s = 0u32;
                let mut xp = x;
                for _ in 0..m {
                    s = add_packed(s, pack(&xp, p));
                    xp = power(&xp, p as u64);
                }
                debug_assert!(s < p);
                s
            })
            .collect();
        let mut trace = vec![0u32; q as usize];
        for (idx, slot) in trace.iter_mut().enumerate().skip(1) {
            let c = unpack(exp[idx - 1], p, m);
            let t: u64 = c.iter().zip(&basis_trace).map(|(&ci, &ti)| ci as u64 * ti as u64).sum();
            *slot = (t % p as u64) as u32;
        }

        Ok(Field { p, m, q, modulus, generator, exp, log, zech, neg_shift, trace })
    }

    /// Builds GF(q) from its order.
    pub fn with_order(q: u64) -> Result<Field, FieldError> {
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q));
        }
        let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Field::new(p, m)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn is_even(&self) -> bool {
        self.p == 2
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p, m: self.m, modulus: self.modulus.clone(), generator: self.generator }
    }

    /// The canonical primitive element ξ.
    pub fn xi(&self) -> Elem {
        Elem(1 + 1 % (self.q - 1))
    }

    pub fn elem(&self, index: u64) -> Result<Elem, FieldError> {
        if index < self.q as u64 {
            Ok(Elem(index as u32))
        } else {
            Err(FieldError::BadIndex(index))
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.q).map(Elem)
    }

    pub fn log(&self, a: Elem) -> Option<u32> {
        (!a.is_zero()).then(|| a.0 - 1)
    }

    /// ξ^e.
    pub fn exp(&self, e: u64) -> Elem {
        Elem(1 + (e % (self.q as u64 - 1)) as u32)
    }

    /// Packed additive representation `Σ c_i p^i`.
    pub fn packed(&self, a: Elem) -> u32 {
        if a.is_zero() {
            0
        } else {
            self.exp[a.0 as usize - 1]
        }
    }

    pub fn from_packed(&self, v: u32) -> Elem {
        if v == 0 {
            Elem::ZERO
        } else {
            Elem(self.log[v as usize] + 1)
        }
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        unpack(self.packed(a), self.p, self.m)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Elem, FieldError> {
        if c.len() != self.m as usize || c.iter().any(|&d| d >= self.p) {
            return Err(FieldError::BadCoeffs(c.to_vec()));
        }
        Ok(self.from_packed(pack(c, self.p)))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        self.from_packed(n.rem_euclid(self.p as i64) as u32)
    }

    /// Integer value of an element of the prime subfield.
    pub fn to_prime(&self, a: Elem) -> Option<u32> {
        let v = self.packed(a);
        (v < self.p).then_some(v)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let q1 = self.q - 1;
        let (la, lb) = (a.0 - 1, b.0 - 1);
        let d = if lb >= la { lb - la } else { lb + q1 - la };
        let z = self.zech[d as usize];
        if z == NONE {
            Elem::ZERO
        } else {
            Elem(1 + ((la as u64 + z as u64) % q1 as u64) as u32)
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if a.is_zero() || self.neg_shift == 0 {
            return a;
        }
        Elem(1 + ((a.0 - 1 + self.neg_shift) % (self.q - 1)))
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        Elem(1 + ((a.0 as u64 - 1 + b.0 as u64 - 1) % (self.q as u64 - 1)) as u32)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let q1 = self.q - 1;
        Ok(Elem(1 + (q1 - (a.0 - 1)) % q1))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e for e ≥ 0, with 0^0 = 1.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let q1 = self.q as u64 - 1;
        Elem(1 + (((a.0 as u64 - 1) * (e % q1)) % q1) as u32)
    }

    /// a^e for any integer e; negative powers need a ≠ 0.
    pub fn powi(&self, a: Elem, e: i64) -> Result<Elem, FieldError> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    pub fn sum(&self, it: impl IntoIterator<Item = Elem>) -> Elem {
        it.into_iter().fold(Elem::ZERO, |s, x| self.add(s, x))
    }

    pub fn product(&self, it: impl IntoIterator<Item = Elem>) -> Elem {
        it.into_iter().fold(Elem::ONE, |s, x| self.mul(s, x))
    }

    /// (−1)^e.
    pub fn sign(&self, e: i64) -> Elem {
        if e.rem_euclid(2) == 0 {
            Elem::ONE
        } else {
            self.neg(Elem::ONE)
        }
    }

    /// Absolute trace, returned as an element of the prime subfield.
    pub fn trace(&self, a: Elem) -> Elem {
        self.from_packed(self.trace[a.0 as usize])
    }

    /// Absolute trace as an integer in `0..p`.
    pub fn trace_int(&self, a: Elem) -> u32 {
        self.trace[a.0 as usize]
    }

    pub fn is_square(&self, a: Elem) -> bool {
        a.is_zero() || self.p == 2 || (a.0 - 1).is_multiple_of(2)
    }

    /// Square root, when one exists; the smaller-index root is returned.
    pub fn sqrt(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return Some(a);
        }
        let q1 = self.q - 1;
        let l = a.0 - 1;
        if self.p == 2 {
            // squaring is a bijection; q−1 is odd
            let half = if l.is_multiple_of(2) { l / 2 } else { (l + q1) / 2 };
            return Some(Elem(1 + half));
        }
        if l % 2 == 1 {
            return None;
        }
        Some(Elem(1 + l / 2))
    }

    /// Quadratic character π.
    pub fn quadratic_char(&self, a: Elem) -> Result<i8, FieldError> {
        if self.p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        Ok(if a.is_zero() {
            0
        } else if (a.0 - 1).is_multiple_of(2) {
            1
        } else {
            -1
        })
    }
}
