//! Closed-form syndrome classes for A = F_q^*, l = k − 1.

use super::{DeepholeError, Result};
use crate::field::{Elem, Field};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassTag {
    /// (0, 2bη, b, b/(4η)), b ≠ 0; r = 3 only
    T1,
    /// (0,…,0,a_{r−1},a_r)
    T2,
    /// (a_0,0,…,0), a_0 ≠ 0
    T3,
    /// a_j = a_1^j/a_0^{j−1} for j < r, a_r = a_1^r/a_0^{r−1} − η a_1^{r+1}/a_0^r
    T4,
    /// (0,…,0,a_r), a_r ≠ 0
    Family,
}

impl ClassTag {
    pub const ALL: [ClassTag; 5] = [ClassTag::T1, ClassTag::T2, ClassTag::T3, ClassTag::T4, ClassTag::Family];
}

fn require_odd(f: &Field) -> Result<()> {
    if f.is_even() {
        return Err(DeepholeError::Setting("needs odd q".into()));
    }
    Ok(())
}

pub fn t1_syndrome(f: &Field, eta: Elem, b: Elem) -> Result<Vec<Elem>> {
    let two = f.from_int(2);
    let four = f.from_int(4);
    Ok(vec![Elem::ZERO, f.mul(f.mul(two, b), eta), b, f.div(b, f.mul(four, eta))?])
}

pub fn t4_syndrome(f: &Field, eta: Elem, a0: Elem, a1: Elem, r: usize) -> Result<Vec<Elem>> {
    if a0.is_zero() || a1.is_zero() {
        return Err(DeepholeError::Precondition("a_0, a_1 must be nonzero".into()));
    }
    let m = f.div(a1, a0)?;
    // a_j = a_0 M^j
    let mut a: Vec<Elem> = (0..r).map(|j| f.mul(a0, f.pow(m, j as u64))).collect();
    let last = f.sub(f.mul(a0, f.pow(m, r as u64)), f.mul(eta, f.mul(a0, f.pow(m, r as u64 + 1))));
    a.push(last);
    Ok(a)
}

pub fn classset_membership(f: &Field, eta: Elem, a: &[Elem], tag: ClassTag) -> Result<bool> {
    require_odd(f)?;
    if a.len() < 2 {
        return Err(DeepholeError::Length { expected: 2, got: a.len() });
    }
    let r = a.len() - 1;
    let zero_upto = |hi: usize| a[..hi].iter().all(|e| e.is_zero());
    Ok(match tag {
        ClassTag::T1 => {
            if r != 3 {
                return Err(DeepholeError::Precondition(format!("T1 needs r = 3, got {r}")));
            }
            !a[2].is_zero() && t1_syndrome(f, eta, a[2])? == a
        }
        ClassTag::T2 => zero_upto(r - 1),
        ClassTag::T3 => !a[0].is_zero() && a[1..].iter().all(|e| e.is_zero()),
        ClassTag::T4 => !a[0].is_zero() && !a[1].is_zero() && t4_syndrome(f, eta, a[0], a[1], r)? == a,
        ClassTag::Family => zero_upto(r) && !a[r].is_zero(),
    })
}

/// Tags of every class containing a (T1 only tested when r = 3).
pub fn classify_syndrome(f: &Field, eta: Elem, a: &[Elem]) -> Result<Vec<ClassTag>> {
    let r = a.len().saturating_sub(1);
    let mut out = Vec::new();
    for tag in ClassTag::ALL {
        if tag == ClassTag::T1 && r != 3 {
            continue;
        }
        if classset_membership(f, eta, a, tag)? {
            out.push(tag);
        }
    }
    Ok(out)
}

/// Deep-hole predicate for q = 2^m ≥ 16 and k ∈ {q−2, q−3, q−4}.
#[derive(Clone, Debug)]
pub struct EvenSmallK {
    pub q: u32,
    pub m: u32,
    pub k: usize,
    pub eta: Elem,
    eta_inv: Elem,
}

impl EvenSmallK {
    pub fn new(f: &Field, k: usize, eta: Elem) -> Result<EvenSmallK> {
        let q = f.q();
        if !f.is_even() || q < 16 {
            return Err(DeepholeError::Setting(format!("needs even q ≥ 16, got {q}")));
        }
        if !(q as usize - 4..=q as usize - 2).contains(&k) {
            return Err(DeepholeError::Setting(format!("needs q−4 ≤ k ≤ q−2, got k = {k}")));
        }
        let eta_inv = f.inv(eta)?;
        Ok(EvenSmallK { q, m: f.m(), k, eta, eta_inv })
    }

    pub fn syndrome_len(&self) -> usize {
        self.q as usize - 1 - self.k
    }

    pub fn is_deep(&self, f: &Field, a: &[Elem]) -> Result<bool> {
        if a.len() != self.syndrome_len() {
            return Err(DeepholeError::Length { expected: self.syndrome_len(), got: a.len() });
        }
        let z = |e: Elem| e.is_zero();
        Ok(match a.len() {
            1 => !z(a[0]),
            2 => {
                if z(a[0]) {
                    !z(a[1])
                } else {
                    f.trace_int(f.mul(f.div(a[1], a[0])?, self.eta)) == 1
                }
            }
            _ => {
                let plain = z(a[0]) && z(a[1]) && !z(a[2]);
                let odd_m = self.m % 2 == 1 && z(a[0]) && !z(a[1]) && a[2] == f.mul(self.eta_inv, a[1]);
                plain || odd_m
            }
        })
    }
}

pub fn classify_even_small_k(f: &Field, k: usize, eta: Elem) -> Result<EvenSmallK> {
    EvenSmallK::new(f, k, eta)
}
