use super::criterion::{is_deep_hole_syndrome, SubsetWalker};
use super::{check_budget, forms_from_c, DeepholeError, Result};
use crate::combin::binomial;
use crate::field::{Elem, Field};
use crate::poly::Poly;
use crate::trs::{TrsCode, TwistPoly};
use serde::{Deserialize, Serialize};

/// h(x) with H·h(A)ᵀ = a:
/// Σ_{i<n−k} Σ_{j≤i} σ_{i−j} a_j x^{n−1−i}
///   + η Σ_{i<n−k−1} Σ_{j≤i} σ_{i−j} a_j Σ_w σ_{k−l−w} Λ_{n−k−1−i+w} x^k.
pub fn reconstruct_poly(f: &Field, code: &TrsCode, a: &[Elem]) -> Result<Poly> {
    let p = &code.params;
    let (n, k, l) = (p.n(), p.k, p.l);
    let big_r = p.redundancy();
    if a.len() != big_r {
        return Err(DeepholeError::Length { expected: big_r, got: a.len() });
    }
    let sigma = &code.sigma;
    let lam = &code.lambda;
    let b: Vec<Elem> = (0..big_r).map(|i| f.sum((0..=i).map(|j| f.mul(sigma[i - j], a[j])))).collect();
    let mut coef = vec![Elem::ZERO; n];
    for (i, &bi) in b.iter().enumerate() {
        coef[n - 1 - i] = f.add(coef[n - 1 - i], bi);
    }
    let mut extra = Elem::ZERO;
    for (i, &bi) in b.iter().enumerate().take(big_r - 1) {
        let inner = f.sum((0..=k - l).map(|w| f.mul(sigma[k - l - w], lam[big_r - 1 - i + w])));
        extra = f.add(extra, f.mul(bi, inner));
    }
    coef[k] = f.add(coef[k], f.mul(p.eta, extra));
    Ok(Poly::from_coeffs(coef))
}

/// A word with syndrome a, checked against H.
pub fn reconstruct(f: &Field, code: &TrsCode, a: &[Elem]) -> Result<Vec<Elem>> {
    let h = reconstruct_poly(f, code, a)?;
    let u = code.evaluate(f, &h);
    if code.syndrome(f, &u)? != a {
        return Err(DeepholeError::Reconstruction);
    }
    Ok(u)
}

/// reconstruct(a) + codeword of the shift; a must be a deep-hole syndrome.
pub fn deep_hole_word(f: &Field, code: &TrsCode, a: &[Elem], shift: &TwistPoly, budget: u128) -> Result<Vec<Elem>> {
    if !is_deep_hole_syndrome(f, code, a, budget)?.is_deep_hole_syndrome {
        return Err(DeepholeError::NotDeep);
    }
    let u = reconstruct(f, code, a)?;
    let c = code.encode(f, shift);
    Ok(u.iter().zip(&c).map(|(&x, &y)| f.add(x, y)).collect())
}

/// Evaluation of a·x^k + shift.
pub fn monomial_family_word(f: &Field, code: &TrsCode, a: Elem, shift: &TwistPoly) -> Result<Vec<Elem>> {
    if a.is_zero() {
        return Err(DeepholeError::Precondition("a must be nonzero".into()));
    }
    let p = shift.expanded(f, &code.params).add(f, &Poly::monomial(a, code.k()));
    Ok(code.evaluate(f, &p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LastPairSearch {
    /// Distinct values a for which (0,…,0,1,a) fails on some subset.
    pub excluded: Vec<Elem>,
    pub bound: u128,
    pub q: u32,
    pub subsets: u128,
    pub found: Option<Elem>,
    /// x^{k+1} + (σ_1 + a − ησ_{1+k−l}) x^k for the found a.
    pub word: Option<Vec<Elem>>,
}

impl LastPairSearch {
    pub fn excluded_count(&self) -> usize {
        self.excluded.len()
    }

    pub fn within_bound(&self) -> bool {
        self.excluded.len() as u128 <= self.bound
    }
}

/// Values a ∈ F_q making (0,…,0,1,a) a deep-hole syndrome: those avoiding
/// −W_{n−k−2}(S) for every subset S.
pub fn corollary39_search(f: &Field, code: &TrsCode, budget: u128) -> Result<LastPairSearch> {
    let p = &code.params;
    let big_r = p.redundancy();
    if big_r < 2 {
        return Err(DeepholeError::Setting("needs n − k ≥ 2".into()));
    }
    let n = p.n();
    let s = big_r - 1;
    let subsets = binomial(n as u64, s as u64);
    check_budget(subsets, budget)?;
    let mut hit = vec![false; f.q() as usize];
    let mut walk = SubsetWalker::new(&p.a, s);
    while walk.advance(f) {
        let w = forms_from_c(f, code, &walk.table().c(f));
        hit[f.neg(w[big_r - 2]).0 as usize] = true;
    }
    let excluded: Vec<Elem> = (0..f.q()).filter(|&i| hit[i as usize]).map(Elem).collect();
    let found = f.elements().find(|e| !hit[e.0 as usize]);
    let word = found.map(|a| {
        let sig = |i: usize| code.sigma.get(i).copied().unwrap_or(Elem::ZERO);
        let c = f.sub(f.add(sig(1), a), f.mul(p.eta, sig(1 + p.k - p.l)));
        let poly = Poly::monomial(Elem::ONE, p.k + 1).add(f, &Poly::monomial(c, p.k));
        code.evaluate(f, &poly)
    });
    Ok(LastPairSearch { excluded, bound: binomial(n as u64, p.k as u64 + 1), q: f.q(), subsets, found, word })
}
