//! Constructive witness searches for odd q. Each
//! returns a subset of F_q^* and re-checks it by direct evaluation.

use super::classes::{classset_membership, ClassTag};
use super::group::{eq46_split, GroupSetting};
use super::{check_budget, DeepholeError, Result};
use crate::combin::{binomial, for_each_subset};
use crate::field::{Elem, Field};
use crate::sym::{lambda_from_sigma, SymTable};
use serde::{Deserialize, Serialize};

fn require_odd(f: &Field) -> Result<()> {
    if f.is_even() {
        return Err(DeepholeError::Setting("needs odd q".into()));
    }
    Ok(())
}

fn sorted(mut v: Vec<Elem>) -> Vec<Elem> {
    v.sort_unstable();
    v
}

fn distinct_nonzero(xs: &[Elem]) -> bool {
    let s = sorted(xs.to_vec());
    s.iter().all(|e| !e.is_zero()) && s.windows(2).all(|w| w[0] != w[1])
}

/// First r-subset of F_q^* (colex) satisfying `ok`.
fn exhaustive(f: &Field, r: usize, mut ok: impl FnMut(&[Elem]) -> bool) -> Option<Vec<Elem>> {
    let nz: Vec<Elem> = f.nonzero().collect();
    let mut found = None;
    for_each_subset(nz.len(), r, |idx| {
        let xs: Vec<Elem> = idx.iter().map(|&i| nz[i]).collect();
        if ok(&xs) {
            found = Some(xs);
            return false;
        }
        true
    });
    found
}

/// r-subset of F_q^* with element sum η⁻¹: take the first r elements,
/// shift one of them if the sum vanishes, then scale by (η·sum)⁻¹.
pub fn witness_lemma47(f: &Field, r: usize, eta: Elem) -> Result<Vec<Elem>> {
    require_odd(f)?;
    let q = f.q() as usize;
    if r < 3 || r > q - 2 {
        return Err(DeepholeError::Precondition(format!("needs 3 ≤ r ≤ q − 2, got r = {r}")));
    }
    let target = f.inv(eta)?;
    let sums_to = |xs: &[Elem]| f.sum(xs.iter().copied()) == target;
    let mut xs: Vec<Elem> = f.nonzero().take(r).collect();
    let mut s = f.sum(xs.iter().copied());
    if s.is_zero() {
        let x1 = xs[0];
        let shift = f.nonzero().find(|&b| {
            let y = f.add(x1, b);
            !y.is_zero() && !xs[1..].contains(&y)
        });
        if let Some(b) = shift {
            xs[0] = f.add(x1, b);
            s = b;
        }
    }
    if !s.is_zero() {
        let scale = f.inv(f.mul(eta, s))?;
        let cand = sorted(xs.iter().map(|&x| f.mul(x, scale)).collect());
        if distinct_nonzero(&cand) && sums_to(&cand) {
            return Ok(cand);
        }
    }
    exhaustive(f, r, sums_to).ok_or_else(|| DeepholeError::Exhausted(format!("no {r}-subset sums to 1/eta")))
}

/// a_0(1 − ηΛ'_1 − ηM) ∏(M − x_j) with M = a_1/a_0.
pub fn t4_product(f: &Field, eta: Elem, a: &[Elem], xs: &[Elem]) -> Result<Elem> {
    let m = f.div(a[1], a[0])?;
    let c = SymTable::from_elems(f, xs).c(f);
    let lam1 = lambda_from_sigma(f, &c, 1)[1];
    let head = f.sub(f.sub(Elem::ONE, f.mul(eta, lam1)), f.mul(eta, m));
    let prod = f.product(xs.iter().map(|&x| f.sub(m, x)));
    Ok(f.mul(f.mul(a[0], head), prod))
}

/// For a in T4: M = a_1/a_0 together with the first r − 1 other elements.
pub fn witness_t4_vanishing(f: &Field, gs: &GroupSetting, a: &[Elem]) -> Result<Vec<Elem>> {
    require_odd(f)?;
    let (q, r) = (f.q() as usize, gs.r);
    if r < 3 || r > q - 2 {
        return Err(DeepholeError::Precondition(format!("needs 3 ≤ r ≤ q − 2, got r = {r}")));
    }
    if !classset_membership(f, gs.eta, a, ClassTag::T4)? {
        return Err(DeepholeError::Precondition("syndrome is not in T4".into()));
    }
    let m = f.div(a[1], a[0])?;
    let mut xs = vec![m];
    xs.extend(f.nonzero().filter(|&x| x != m).take(r - 1));
    let xs = sorted(xs);
    if !gs.value(f, a, &xs)?.is_zero() {
        return Err(DeepholeError::Exhausted("M-subset does not vanish".into()));
    }
    Ok(xs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticWitness {
    pub subset: Vec<Elem>,
    /// r ≤ q/4, where existence is proved.
    pub in_proof_range: bool,
    /// Found through the (X, Y) parametrisation rather than brute force.
    pub guided: bool,
}

/// c_1 − ηc_2 + ηc_1² + b for the full set.
pub fn c_quadratic_value(f: &Field, eta: Elem, b: Elem, xs: &[Elem]) -> Elem {
    let c = SymTable::from_elems(f, xs).c(f);
    let c1 = c.get(1).copied().unwrap_or(Elem::ZERO);
    let c2 = c.get(2).copied().unwrap_or(Elem::ZERO);
    let v = f.add(f.sub(c1, f.mul(eta, c2)), f.mul(eta, f.mul(c1, c1)));
    f.add(v, b)
}

/// r-subset with c_1 − ηc_2 + ηc_1² + b = 0. Over (r−2)-prefixes, writes
/// x_{r−1} = X + Y, x_r = X − Y, so the condition becomes
/// 3ηX² + ηY² + 2(ηS_{1,r−2} − 1)X + f = 0 and Y is read off a square root.
pub fn witness_lemma410(f: &Field, b: Elem, r: usize, eta: Elem) -> Result<QuadraticWitness> {
    require_odd(f)?;
    let q = f.q() as usize;
    if r < 3 || r > q - 2 {
        return Err(DeepholeError::Precondition(format!("needs 3 ≤ r ≤ q − 2, got r = {r}")));
    }
    if eta.is_zero() {
        return Err(DeepholeError::Precondition("eta must be nonzero".into()));
    }
    let in_proof_range = 4 * r <= q;
    let nz: Vec<Elem> = f.nonzero().collect();
    let three_eta = f.mul(f.from_int(3), eta);
    let eta_inv = f.inv(eta)?;
    let mut found = None;
    for_each_subset(nz.len(), r - 2, |idx| {
        let prefix: Vec<Elem> = idx.iter().map(|&i| nz[i]).collect();
        let t = SymTable::from_elems(f, &prefix);
        let (s1, s2) = (t.full(1), t.full(2));
        let lin = f.mul(f.from_int(2), f.sub(f.mul(eta, s1), Elem::ONE));
        let cst = f.add(f.add(f.sub(f.neg(s1), f.mul(eta, s2)), f.mul(eta, f.mul(s1, s1))), b);
        for x in f.elements() {
            let rest = f.add(f.add(f.mul(three_eta, f.mul(x, x)), f.mul(lin, x)), cst);
            let Some(y) = f.sqrt(f.neg(f.mul(rest, eta_inv))) else { continue };
            for y in [y, f.neg(y)] {
                let (u, v) = (f.add(x, y), f.sub(x, y));
                let mut xs = prefix.clone();
                xs.push(u);
                xs.push(v);
                if distinct_nonzero(&xs) && c_quadratic_value(f, eta, b, &xs).is_zero() {
                    found = Some(sorted(xs));
                    return false;
                }
            }
        }
        true
    });
    if let Some(subset) = found {
        return Ok(QuadraticWitness { subset, in_proof_range, guided: true });
    }
    exhaustive(f, r, |xs| c_quadratic_value(f, eta, b, xs).is_zero())
        .map(|subset| QuadraticWitness { subset, in_proof_range, guided: false })
        .ok_or_else(|| DeepholeError::Exhausted(format!("no {r}-subset for b = {b:?}")))
}

/// (bη/4)(2ηX − 1)(Y² − (X + η⁻¹)²): the criterion value for the T1
/// syndrome at x_1 = (X+Y)/2, x_2 = (X−Y)/2, x_3 = −X.
pub fn t1_xy_form(f: &Field, eta: Elem, b: Elem, x: Elem, y: Elem) -> Result<Elem> {
    let four = f.from_int(4);
    let two = f.from_int(2);
    let lead = f.div(f.mul(b, eta), four)?;
    let lin = f.sub(f.mul(f.mul(two, eta), x), Elem::ONE);
    let shifted = f.add(x, f.inv(eta)?);
    let quad = f.sub(f.mul(y, y), f.mul(shifted, shifted));
    Ok(f.mul(f.mul(lead, lin), quad))
}

/// x_1 = 1/(2η) + α, x_2 = −α, x_3 = −1/(2η) for the first usable α.
pub fn witness_lemma411(f: &Field, gs: &GroupSetting, b: Elem) -> Result<Vec<Elem>> {
    require_odd(f)?;
    if f.q() < 7 {
        return Err(DeepholeError::Precondition("needs q ≥ 7".into()));
    }
    if gs.r != 3 {
        return Err(DeepholeError::Precondition(format!("needs r = 3, got {}", gs.r)));
    }
    if b.is_zero() {
        return Err(DeepholeError::Precondition("b must be nonzero".into()));
    }
    let eta = gs.eta;
    let half = f.inv(f.mul(f.from_int(2), eta))?;
    let quarter = f.inv(f.mul(f.from_int(4), eta))?;
    let bad = [f.neg(half), f.neg(quarter), f.neg(gs.eta_inv), half];
    let a = super::classes::t1_syndrome(f, eta, b)?;
    for alpha in f.nonzero().filter(|x| !bad.contains(x)) {
        let xs = vec![f.add(half, alpha), f.neg(alpha), f.neg(half)];
        if distinct_nonzero(&xs) && gs.value(f, &a, &xs)?.is_zero() {
            return Ok(sorted(xs));
        }
    }
    Err(DeepholeError::Exhausted("no alpha works".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymCondition {
    /// S_{j,i} ≠ 0 and S_{1,i}S_{j,i} − S_{j+1,i} ≠ 0
    C1,
    /// S_{j−1,i} ≠ 0 and S_{j,i}² − S_{j−1,i}S_{j+1,i} ≠ 0
    C2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymWitness {
    pub subset: Vec<Elem>,
    pub greedy: bool,
}

fn sym_condition_holds(f: &Field, kind: SymCondition, t: &SymTable, j: usize) -> bool {
    let s = |i: usize| t.full(i as isize);
    match kind {
        SymCondition::C1 => !s(j).is_zero() && !f.sub(f.mul(s(1), s(j)), s(j + 1)).is_zero(),
        SymCondition::C2 => !s(j - 1).is_zero() && !f.sub(f.mul(s(j), s(j)), f.mul(s(j - 1), s(j + 1))).is_zero(),
    }
}

/// Condition kept after adding the ℓ-th element past the first i − j.
fn sym_prefix_ok(f: &Field, kind: SymCondition, t: &SymTable, l: usize) -> bool {
    let s = |i: usize| t.full(i as isize);
    match kind {
        SymCondition::C1 => !s(l).is_zero(),
        SymCondition::C2 => {
            let sq = f.sub(f.mul(s(l), s(l)), f.mul(s(l - 1), s(l + 1)));
            (l == 1 || !s(l - 1).is_zero()) && !sq.is_zero()
        }
    }
}

pub fn witness_appendix_c(f: &Field, kind: SymCondition, i: usize, j: usize) -> Result<SymWitness> {
    require_odd(f)?;
    let q = f.q() as usize;
    if j < 1 || j + 1 > i || i + 4 > q {
        return Err(DeepholeError::Precondition(format!("needs 1 ≤ j ≤ i − 1 ≤ q − 5, got i = {i}, j = {j}")));
    }
    let mut t = SymTable::new();
    for x in f.nonzero().take(i - j) {
        t.push(f, x);
    }
    let mut ok = true;
    for step in 1..=j {
        let last = step == j;
        let kind_step = |t: &SymTable| {
            if last {
                sym_condition_holds(f, kind, t, j)
            } else {
                sym_prefix_ok(f, kind, t, step)
            }
        };
        let pick = f.nonzero().find(|x| {
            if t.elems().contains(x) {
                return false;
            }
            let mut trial = t.clone();
            trial.push(f, *x);
            kind_step(&trial)
        });
        match pick {
            Some(x) => t.push(f, x),
            None => {
                ok = false;
                break;
            }
        }
    }
    if ok && sym_condition_holds(f, kind, &t, j) {
        return Ok(SymWitness { subset: sorted(t.elems().to_vec()), greedy: true });
    }
    exhaustive(f, i, |xs| sym_condition_holds(f, kind, &SymTable::from_elems(f, xs), j))
        .map(|subset| SymWitness { subset, greedy: false })
        .ok_or_else(|| DeepholeError::Exhausted(format!("no {i}-subset for j = {j}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixWitness {
    pub base: Vec<Elem>,
    pub gamma: Elem,
    /// γ·base, the (r−2)-subset actually used.
    pub subset: Vec<Elem>,
    pub g: [Elem; 4],
    pub nondegeneracy: Elem,
}

/// (r−2)-subset with g_4 ≠ 0 and (β_0g_4+g_3)g_3² − β_0g_2g_4² − g_1g_4² + a_rg_4² ≠ 0,
/// searching base subsets in colex order and scalings γ ∈ F_q^*.
pub fn witness_lemma48(f: &Field, gs: &GroupSetting, a: &[Elem], budget: u128) -> Result<PrefixWitness> {
    require_odd(f)?;
    let (q, r) = (f.q() as usize, gs.r);
    if r < 3 || r + 4 > q {
        return Err(DeepholeError::Precondition(format!("needs 3 ≤ r ≤ q − 4, got r = {r}")));
    }
    for tag in [ClassTag::T1, ClassTag::T2, ClassTag::T3, ClassTag::T4] {
        if tag == ClassTag::T1 && r != 3 {
            continue;
        }
        if classset_membership(f, gs.eta, a, tag)? {
            return Err(DeepholeError::Precondition(format!("syndrome lies in {tag:?}")));
        }
    }
    let nz: Vec<Elem> = f.nonzero().collect();
    check_budget(binomial(nz.len() as u64, r as u64 - 2) * nz.len() as u128, budget)?;
    let mut found = None;
    let mut err = None;
    for_each_subset(nz.len(), r - 2, |idx| {
        let base: Vec<Elem> = idx.iter().map(|&i| nz[i]).collect();
        for &gamma in &nz {
            let subset: Vec<Elem> = base.iter().map(|&x| f.mul(gamma, x)).collect();
            let e = match eq46_split(f, gs, a, &subset) {
                Ok(e) => e,
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            };
            let nd = e.nondegeneracy(f);
            if !e.g(4).is_zero() && !nd.is_zero() {
                found = Some(PrefixWitness {
                    base: base.clone(),
                    gamma,
                    subset: sorted(subset),
                    g: e.g,
                    nondegeneracy: nd,
                });
                return false;
            }
        }
        true
    });
    if let Some(e) = err {
        return Err(e);
    }
    found.ok_or_else(|| DeepholeError::Exhausted("no prefix with g4 and the discriminant nonzero".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivariateZeros {
    pub prefix: PrefixWitness,
    /// #{(X, Y) ∈ F_q² : F(X, Y) = 0}
    pub zeros: u64,
    /// zeros ≥ q − 3 − 3√q
    pub meets_bound: bool,
    /// r ≤ (q − 3√q − 3)/4
    pub in_proof_range: bool,
    /// A full r-subset on which the criterion fails, if one completes the prefix.
    pub completion: Option<Vec<Elem>>,
}

/// Counts zeros of the bivariate form over the nondegenerate prefix and
/// completes it with x_{r−1} = X − Y, x_r = Y.
pub fn bivariate_zero_report(f: &Field, gs: &GroupSetting, a: &[Elem], budget: u128) -> Result<BivariateZeros> {
    let w = witness_lemma48(f, gs, a, budget)?;
    let e = eq46_split(f, gs, a, &w.subset)?;
    let q = f.q() as i64;
    let mut zeros = 0u64;
    let mut completion = None;
    for x in f.elements() {
        for y in f.elements() {
            if !e.eval_xy(f, x, y).is_zero() {
                continue;
            }
            zeros += 1;
            if completion.is_none() {
                let u = f.sub(x, y);
                let mut xs = w.subset.clone();
                xs.push(u);
                xs.push(y);
                if distinct_nonzero(&xs) && gs.value(f, a, &xs)?.is_zero() {
                    completion = Some(sorted(xs));
                }
            }
        }
    }
    // zeros ≥ q − 3 − 3√q  ⇔  d ≤ 0 or d² ≤ 9q with d = q − 3 − zeros
    let d = q - 3 - zeros as i64;
    let meets_bound = d <= 0 || d * d <= 9 * q;
    // 4r ≤ q − 3 − 3√q  ⇔  L ≥ 0 and L² ≥ 9q with L = q − 3 − 4r
    let l = q - 3 - 4 * gs.r as i64;
    let in_proof_range = l >= 0 && l * l >= 9 * q;
    Ok(BivariateZeros { prefix: w, zeros, meets_bound, in_proof_range, completion })
}
