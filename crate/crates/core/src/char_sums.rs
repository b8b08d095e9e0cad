//! Gauss, Weil, Kloosterman and multiplicative character sums over F_q, plus
//! point counts of conics and small plane curves.

use crate::field::{AbsSquare, CycInt, Elem, Field};
use crate::poly::{Poly, Poly2};
use num_complex::Complex64;
use serde::Serialize;
use std::cmp::Ordering;
use thiserror::Error;

pub const COMPLEX_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharSumError {
    #[error("coefficient must be nonzero")]
    ZeroCoefficient,
    #[error("Kloosterman sum needs (a, b) != (0, 0)")]
    KloostermanZero,
    #[error("needs odd characteristic")]
    EvenField,
    #[error("needs even characteristic")]
    OddField,
    #[error("polynomial must be monic of positive degree")]
    NotMonic,
    #[error("polynomial is a {0}-th power")]
    PerfectPower(u64),
    #[error("character is trivial")]
    TrivialCharacter,
}

/// A character-sum value: exact in Z[ζ_p] when every character value is an
/// integer, complex otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum SumValue {
    Exact(CycInt),
    Approx(Complex64),
}

impl SumValue {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            SumValue::Exact(z) => z.to_complex(),
            SumValue::Approx(c) => *c,
        }
    }

    pub fn exact(&self) -> Option<&CycInt> {
        match self {
            SumValue::Exact(z) => Some(z),
            SumValue::Approx(_) => None,
        }
    }

    /// Compares |value|² with an integer; `None` when undecidable at the
    /// floating tolerance.
    pub fn cmp_abs_square(&self, bound: i128) -> Option<Ordering> {
        match self {
            SumValue::Exact(z) => z.cmp_abs_square(bound),
            SumValue::Approx(c) => {
                let d = c.norm_sqr() - bound as f64;
                if d.abs() < COMPLEX_TOL * (1.0 + bound.abs() as f64) {
                    None
                } else {
                    Some(if d < 0.0 { Ordering::Less } else { Ordering::Greater })
                }
            }
        }
    }

    pub fn approx_eq(&self, o: &SumValue) -> bool {
        match (self, o) {
            (SumValue::Exact(a), SumValue::Exact(b)) => a == b,
            _ => (self.to_complex() - o.to_complex()).norm() < COMPLEX_TOL * (1.0 + self.to_complex().norm()),
        }
    }
}

impl std::fmt::Display for SumValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SumValue::Exact(z) => write!(f, "{z}"),
            SumValue::Approx(c) => write!(f, "{:.9}{:+.9}i", c.re, c.im),
        }
    }
}

/// |S| ≤ c·√q decided as |S|² ≤ c²q.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub abs_square: f64,
    pub exact_abs_square: Option<i128>,
    pub bound_square: i128,
    /// `None` when the comparison sits inside the floating tolerance.
    pub holds: Option<bool>,
}

impl BoundCheck {
    fn new(v: &SumValue, c: i128, q: i128) -> BoundCheck {
        let bound_square = c * c * q;
        let (abs_square, exact_abs_square) = match v {
            SumValue::Exact(z) => {
                let AbsSquare { exact, approx, .. } = z.abs_square();
                (approx, exact)
            }
            SumValue::Approx(x) => (x.norm_sqr(), None),
        };
        BoundCheck {
            abs_square,
            exact_abs_square,
            bound_square,
            holds: v.cmp_abs_square(bound_square).map(|o| o != Ordering::Greater),
        }
    }
}

fn char_is_integral(f: &Field, psi: u64) -> bool {
    let m = f.q() as u64 - 1;
    (2 * psi).is_multiple_of(m)
}

/// Order of ψ_i in the character group.
pub fn char_order(f: &Field, psi: u64) -> u64 {
    let m = f.q() as u64 - 1;
    m / gcd(psi % m, m)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mult_sum(f: &Field, psi: u64, terms: impl Iterator<Item = (Elem, CycInt)>) -> SumValue {
    if char_is_integral(f, psi) {
        let mut acc = CycInt::zero(f.p());
        for (x, z) in terms {
            match f.mult_char(psi, x).as_int().expect("order at most 2") {
                0 => {}
                1 => acc = acc.add(&z),
                _ => acc = acc.sub(&z),
            }
        }
        SumValue::Exact(acc)
    } else {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, z) in terms {
            acc += f.mult_char(psi, x).to_complex() * z.to_complex();
        }
        SumValue::Approx(acc)
    }
}

/// G(ψ_i, χ_a) = Σ_{x≠0} ψ_i(x) χ_a(x).
pub fn gauss_sum(f: &Field, psi: u64, a: Elem) -> SumValue {
    mult_sum(f, psi, f.nonzero().map(|x| (x, f.additive_char(a, x))))
}

/// ψ(a) as a sum value, conjugated.
fn conj_char(f: &Field, psi: u64, a: Elem) -> SumValue {
    let v = f.mult_char(psi, a).conj();
    match v.as_int() {
        Some(i) => SumValue::Exact(CycInt::from_int(f.p(), i as i128)),
        None => SumValue::Approx(v.to_complex()),
    }
}

fn times(a: &SumValue, b: &SumValue) -> SumValue {
    match (a, b) {
        (SumValue::Exact(x), SumValue::Exact(y)) => SumValue::Exact(x.mul(y)),
        _ => SumValue::Approx(a.to_complex() * b.to_complex()),
    }
}

/// G(ψ, χ_{ab}) = conj(ψ(a))·G(ψ, χ_b).
pub fn check_gauss_shift(f: &Field, psi: u64, a: Elem, b: Elem) -> Result<bool, CharSumError> {
    if a.is_zero() {
        return Err(CharSumError::ZeroCoefficient);
    }
    let lhs = gauss_sum(f, psi, f.mul(a, b));
    let rhs = times(&conj_char(f, psi, a), &gauss_sum(f, psi, b));
    Ok(lhs.approx_eq(&rhs))
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeilReport {
    pub sum: CycInt,
    pub d: u64,
    /// Against (gcd(n, q−1) − 1)·√q.
    pub gcd_bound: BoundCheck,
    /// Against the weaker (n − 1)·√q.
    pub exponent_bound: BoundCheck,
}

/// Σ_{c∈F_q} χ_1(a c^n + b).
pub fn weil_power_sum(f: &Field, a: Elem, b: Elem, n: u64) -> Result<WeilReport, CharSumError> {
    if a.is_zero() {
        return Err(CharSumError::ZeroCoefficient);
    }
    let mut s = CycInt::zero(f.p());
    for c in f.elements() {
        s = s.add(&f.canonical_char(f.add(f.mul(a, f.pow(c, n)), b)));
    }
    let q = f.q() as i128;
    let d = gcd(n, f.q() as u64 - 1);
    let v = SumValue::Exact(s.clone());
    Ok(WeilReport {
        gcd_bound: BoundCheck::new(&v, d as i128 - 1, q),
        exponent_bound: BoundCheck::new(&v, n as i128 - 1, q),
        sum: s,
        d,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadReport {
    pub sum: CycInt,
    pub closed_form: CycInt,
}

impl QuadReport {
    pub fn holds(&self) -> bool {
        self.sum == self.closed_form
    }
}

/// Σ_c χ_b(a2c² + a1c + a0), with the matching closed form: for odd q
/// χ_b(a0 − a1²/(4a2))·π(a2)·G(π, χ_b); for even q χ_b(a0)·q when
/// b·a2 + b²a1² = 0 and 0 otherwise.
pub fn quad_complete_sum(f: &Field, b: Elem, a2: Elem, a1: Elem, a0: Elem) -> Result<QuadReport, CharSumError> {
    if a2.is_zero() || b.is_zero() {
        return Err(CharSumError::ZeroCoefficient);
    }
    let poly = Poly::from_coeffs(vec![a0, a1, a2]);
    let mut sum = CycInt::zero(f.p());
    for c in f.elements() {
        sum = sum.add(&f.additive_char(b, poly.eval(f, c)));
    }
    let closed_form = if f.is_even() {
        if f.add(f.mul(b, a2), f.mul(f.mul(b, b), f.mul(a1, a1))).is_zero() {
            f.additive_char(b, a0).scale(f.q() as i128)
        } else {
            CycInt::zero(f.p())
        }
    } else {
        let four_a2 = f.mul(f.from_int(4), a2);
        let shift = f.sub(a0, f.div(f.mul(a1, a1), four_a2).expect("a2 nonzero"));
        let psi = f.quadratic_index().expect("odd field");
        let g = gauss_sum(f, psi, b);
        let g = g.exact().expect("quadratic Gauss sums are exact").clone();
        let pi = f.quadratic_char(a2).expect("odd field") as i128;
        f.additive_char(b, shift).mul(&g).scale(pi)
    };
    Ok(QuadReport { sum, closed_form })
}

/// Squarefree decomposition f = ∏ g_j^{e_j} with coprime squarefree g_j.
pub fn squarefree_decomposition(f: &Field, poly: &Poly) -> Vec<(Poly, u64)> {
    let mut out = Vec::new();
    if poly.degree().unwrap_or(0) == 0 {
        return out;
    }
    let poly = poly.monic(f);
    let d = poly.derivative(f);
    let mut c = Poly::gcd(f, &poly, &d);
    let mut w = poly.divrem(f, &c).expect("c divides f").0;
    let mut i = 1u64;
    while w.degree() != Some(0) {
        let y = Poly::gcd(f, &w, &c);
        let z = w.divrem(f, &y).expect("nonzero").0;
        if z.degree() != Some(0) {
            out.push((z.monic(f), i));
        }
        i += 1;
        w = y;
        c = c.divrem(f, &w).expect("nonzero").0;
    }
    if c.degree() != Some(0) {
        let root = pth_root(f, &c);
        for (g, m) in squarefree_decomposition(f, &root) {
            out.push((g, m * f.p() as u64));
        }
    }
    out
}

// g(x^p) ↦ g^{1/p}, coefficients via a ↦ a^{q/p}
fn pth_root(f: &Field, c: &Poly) -> Poly {
    let p = f.p() as usize;
    let e = f.q() as u64 / f.p() as u64;
    Poly::from_coeffs(c.coeffs().iter().step_by(p).map(|&x| f.pow(x, e)).collect())
}

/// Number of distinct roots of `poly` in its splitting field.
pub fn distinct_root_count(f: &Field, poly: &Poly) -> u64 {
    squarefree_decomposition(f, poly).iter().map(|(g, _)| g.degree().unwrap_or(0) as u64).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultPolyReport {
    pub sum: SumValue,
    pub order: u64,
    pub d: u64,
    pub bound: BoundCheck,
}

/// Σ_{c∈F_q} ψ_i(a·f(c)) with the (d−1)√q bound, d the number of distinct
/// roots of f.
pub fn mult_char_poly_sum(f: &Field, psi: u64, a: Elem, poly: &Poly) -> Result<MultPolyReport, CharSumError> {
    if poly.degree().unwrap_or(0) == 0 || poly.lead() != Elem::ONE {
        return Err(CharSumError::NotMonic);
    }
    let order = char_order(f, psi);
    if order == 1 {
        return Err(CharSumError::TrivialCharacter);
    }
    let parts = squarefree_decomposition(f, poly);
    if parts.iter().all(|(_, e)| e % order == 0) {
        return Err(CharSumError::PerfectPower(order));
    }
    let d = parts.iter().map(|(g, _)| g.degree().unwrap_or(0) as u64).sum::<u64>();
    let one = CycInt::one(f.p());
    let sum = mult_sum(f, psi, f.elements().map(|c| (f.mul(a, poly.eval(f, c)), one.clone())));
    let bound = BoundCheck::new(&sum, d as i128 - 1, f.q() as i128);
    Ok(MultPolyReport { sum, order, d, bound })
}

#[derive(Clone, Debug, PartialEq)]
pub struct KloostermanReport {
    pub sum: CycInt,
    pub bound: BoundCheck,
}

/// K(χ_1; a, b) = Σ_{c≠0} χ_1(ac + b/c).
pub fn kloosterman(f: &Field, a: Elem, b: Elem) -> Result<KloostermanReport, CharSumError> {
    if a.is_zero() && b.is_zero() {
        return Err(CharSumError::KloostermanZero);
    }
    let mut s = CycInt::zero(f.p());
    for c in f.nonzero() {
        let inv = f.inv(c).expect("nonzero");
        s = s.add(&f.canonical_char(f.add(f.mul(a, c), f.mul(b, inv))));
    }
    let bound = BoundCheck::new(&SumValue::Exact(s.clone()), 2, f.q() as i128);
    Ok(KloostermanReport { sum: s, bound })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConicReport {
    pub count: u64,
    pub formula: i64,
}

impl ConicReport {
    pub fn holds(&self) -> bool {
        self.count as i64 == self.formula
    }
}

/// N(a1X² + a2Y² − b) next to q + v(b)π(−a1a2).
pub fn conic_count(f: &Field, a1: Elem, a2: Elem, b: Elem) -> Result<ConicReport, CharSumError> {
    if f.is_even() {
        return Err(CharSumError::OddField);
    }
    if a1.is_zero() || a2.is_zero() {
        return Err(CharSumError::ZeroCoefficient);
    }
    // a1X² takes each value v as often as there are square roots of v/a1
    let q = f.q() as usize;
    let mut sq1 = vec![0u64; q + 1];
    let mut sq2 = vec![0u64; q + 1];
    for x in f.elements() {
        let x2 = f.mul(x, x);
        sq1[f.mul(a1, x2).0 as usize] += 1;
        sq2[f.mul(a2, x2).0 as usize] += 1;
    }
    let mut count = 0u64;
    for u in f.elements() {
        let v = f.sub(b, u);
        count += sq1[u.0 as usize] * sq2[v.0 as usize];
    }
    let qi = f.q() as i64;
    let v = if b.is_zero() { qi - 1 } else { -1 };
    let pi = f.quadratic_char(f.neg(f.mul(a1, a2))).expect("odd field") as i64;
    Ok(ConicReport { count, formula: qi + v * pi })
}

/// Number of (X, Y) ∈ F_q² with F(X, Y) = 0.
pub fn surface_count(f: &Field, poly: &Poly2) -> u64 {
    let mut n = 0;
    for x in f.elements() {
        for y in f.elements() {
            if poly.eval(f, x, y).is_zero() {
                n += 1;
            }
        }
    }
    n
}
