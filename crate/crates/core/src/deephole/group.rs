//! A = F_q^*, l = k − 1, r = q − k − 2. Syndromes are (a_0..a_r) and the
//! criterion runs over r-subsets x_1..x_r.

use super::criterion::lhs_unchecked;
use super::{DeepholeError, Result};
use crate::field::{Elem, Field};
use crate::sym::SymTable;
use crate::trs::{TrsCode, TrsParams};

#[derive(Clone, Debug)]
pub struct GroupSetting {
    pub code: TrsCode,
    pub r: usize,
    pub eta: Elem,
    pub eta_inv: Elem,
}

impl GroupSetting {
    pub fn new(f: &Field, k: usize, eta: Elem) -> Result<GroupSetting> {
        if k == 0 {
            return Err(DeepholeError::Setting("k must be at least 1".into()));
        }
        let params = TrsParams::punctured(f, k, k - 1, eta)?;
        GroupSetting::from_code(f, TrsCode::new(f, params)?)
    }

    pub fn from_code(f: &Field, code: TrsCode) -> Result<GroupSetting> {
        let p = &code.params;
        let nonzero: Vec<Elem> = f.nonzero().collect();
        if p.a != nonzero || p.l + 1 != p.k {
            return Err(DeepholeError::Setting("needs A = F_q^* and l = k − 1".into()));
        }
        let r = p.redundancy() - 1;
        let eta = p.eta;
        let eta_inv = f.inv(eta)?;
        Ok(GroupSetting { code, r, eta, eta_inv })
    }

    pub fn k(&self) -> usize {
        self.code.params.k
    }

    fn check_a(&self, a: &[Elem]) -> Result<()> {
        if a.len() != self.r + 1 {
            return Err(DeepholeError::Length { expected: self.r + 1, got: a.len() });
        }
        Ok(())
    }

    /// criterion_lhs + a_r on any r points (repeats and zero allowed: the
    /// value is a polynomial in them).
    pub fn value(&self, f: &Field, a: &[Elem], xs: &[Elem]) -> Result<Elem> {
        self.check_a(a)?;
        if xs.len() != self.r {
            return Err(DeepholeError::Length { expected: self.r, got: xs.len() });
        }
        Ok(f.add(lhs_unchecked(f, &self.code, a, xs), a[self.r]))
    }
}

/// η Σ_{j<r} (−1)^{r−j+2−t} a_j S_{r−j+2−t}(prefix)
fn split_coeff(f: &Field, eta: Elem, a: &[Elem], r: usize, t: usize, prefix: &SymTable) -> Elem {
    let mut acc = Elem::ZERO;
    for (j, &aj) in a.iter().enumerate().take(r) {
        let i = r as isize - j as isize + 2 - t as isize;
        acc = f.add(acc, f.mul(f.mul(f.sign(i as i64), aj), prefix.full(i)));
    }
    f.mul(eta, acc)
}

/// Quadratic in x_r once x_1..x_{r−1} are fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSplit {
    pub f1: Elem,
    pub f2: Elem,
    pub f3: Elem,
    /// f_3 (S_{1,r−1} − η⁻¹)
    pub lin: Elem,
    pub g: Elem,
}

impl QuadraticSplit {
    pub fn eval(&self, f: &Field, x: Elem) -> Elem {
        f.add(f.add(f.mul(self.f3, f.mul(x, x)), f.mul(self.lin, x)), self.g)
    }
}

pub fn eq36_split(f: &Field, gs: &GroupSetting, a: &[Elem], prefix: &[Elem]) -> Result<QuadraticSplit> {
    gs.check_a(a)?;
    let r = gs.r;
    if r == 0 || prefix.len() != r - 1 {
        return Err(DeepholeError::Length { expected: r.saturating_sub(1), got: prefix.len() });
    }
    let t = SymTable::from_elems(f, prefix);
    let [f1, f2, f3] = [1, 2, 3].map(|i| split_coeff(f, gs.eta, a, r, i, &t));
    let s1 = t.full(1);
    let lin = f.mul(f3, f.sub(s1, gs.eta_inv));
    let g = f.add(f.sub(f.sub(f.mul(gs.eta_inv, f2), f1), f.mul(s1, f2)), a[r]);
    Ok(QuadraticSplit { f1, f2, f3, lin, g })
}

/// g_1..g_4 once x_1..x_{r−2} are fixed; the value is a form in (x_{r−1}, x_r).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateSplit {
    pub g: [Elem; 4],
    /// S_{1,r−2}
    pub s1: Elem,
    pub eta_inv: Elem,
    pub a_r: Elem,
}

impl BivariateSplit {
    pub fn g(&self, t: usize) -> Elem {
        self.g[t - 1]
    }

    /// S_{1,r−2} − η⁻¹
    pub fn beta0(&self, f: &Field) -> Elem {
        f.sub(self.s1, self.eta_inv)
    }

    /// (g_3 − g_4 x_r)(x_{r−1}+x_r)² + (β_0 − x_r)(g_3 − g_4 x_r)(x_{r−1}+x_r)
    ///   + (g_4 β_0 + g_3) x_r² − g_2 β_0 − g_1 + a_r
    pub fn eval(&self, f: &Field, x_rm1: Elem, x_r: Elem) -> Elem {
        self.eval_xy(f, f.add(x_rm1, x_r), x_r)
    }

    /// Same form in X = x_{r−1} + x_r, Y = x_r.
    pub fn eval_xy(&self, f: &Field, x: Elem, y: Elem) -> Elem {
        let [g1, g2, g3, g4] = self.g;
        let b0 = self.beta0(f);
        let lead = f.sub(g3, f.mul(g4, y));
        let mut v = f.mul(lead, f.mul(x, x));
        v = f.add(v, f.mul(f.mul(f.sub(b0, y), lead), x));
        v = f.add(v, f.mul(f.add(f.mul(g4, b0), g3), f.mul(y, y)));
        f.add(f.sub(f.sub(v, f.mul(g2, b0)), g1), self.a_r)
    }

    /// (β_0 g_4 + g_3) g_3² − β_0 g_2 g_4² − g_1 g_4² + a_r g_4²; nonzero
    /// means the bivariate equation has a nondegenerate shape.
    pub fn nondegeneracy(&self, f: &Field) -> Elem {
        let [g1, g2, g3, g4] = self.g;
        let b0 = self.beta0(f);
        let g4s = f.mul(g4, g4);
        let mut v = f.mul(f.add(f.mul(b0, g4), g3), f.mul(g3, g3));
        v = f.sub(v, f.mul(f.mul(b0, g2), g4s));
        v = f.sub(v, f.mul(g1, g4s));
        f.add(v, f.mul(self.a_r, g4s))
    }
}

pub fn eq46_split(f: &Field, gs: &GroupSetting, a: &[Elem], prefix: &[Elem]) -> Result<BivariateSplit> {
    gs.check_a(a)?;
    let r = gs.r;
    if r < 2 || prefix.len() != r - 2 {
        return Err(DeepholeError::Length { expected: r.saturating_sub(2), got: prefix.len() });
    }
    let t = SymTable::from_elems(f, prefix);
    let g = [1, 2, 3, 4].map(|i| split_coeff(f, gs.eta, a, r, i, &t));
    Ok(BivariateSplit { g, s1: t.full(1), eta_inv: gs.eta_inv, a_r: a[r] })
}

fn require_even(f: &Field) -> Result<()> {
    if !f.is_even() {
        return Err(DeepholeError::Setting("needs even q".into()));
    }
    Ok(())
}

/// For a = (0,…,0,1,η⁻¹,a_r), q even: ηXY(X+Y) + g_2β_0 + g_1 + a_r with
/// β_0 = S_{1,r−2} + η⁻¹, X = x_{r−1} + x_r, Y = β_0 + x_r.
pub fn pinned_pair_form(
    f: &Field,
    gs: &GroupSetting,
    a_r: Elem,
    prefix: &[Elem],
    x_rm1: Elem,
    x_r: Elem,
) -> Result<Elem> {
    require_even(f)?;
    let a = pinned_pair_syndrome(gs, a_r)?;
    let e = eq46_split(f, gs, &a, prefix)?;
    let b0 = f.add(e.s1, gs.eta_inv);
    let x = f.add(x_rm1, x_r);
    let y = f.add(b0, x_r);
    let cubic = f.mul(gs.eta, f.mul(f.mul(x, y), f.add(x, y)));
    Ok(f.add(f.add(f.add(cubic, f.mul(e.g(2), b0)), e.g(1)), a_r))
}

/// (0,…,0,1,η⁻¹,a_r)
pub fn pinned_pair_syndrome(gs: &GroupSetting, a_r: Elem) -> Result<Vec<Elem>> {
    let r = gs.r;
    if r < 2 {
        return Err(DeepholeError::Setting("needs r ≥ 2".into()));
    }
    let mut a = vec![Elem::ZERO; r + 1];
    a[r - 2] = Elem::ONE;
    a[r - 1] = gs.eta_inv;
    a[r] = a_r;
    Ok(a)
}

/// For a = (a_0,a_1,0,…,0), q even. With a_1 = 0 the value is
/// a_0 c_r (1 + η c_1) on the full r-set; otherwise
/// g_4XY(X+Y) + (g_4β_0+g_3)XY + (g_4β_0+g_3)b² with β_0 = S_{1,r−2} + η⁻¹,
/// b = g_3/g_4, X = x_{r−1}+x_r+β_0+b, Y = x_r+b. `None` when g_4 = 0.
pub fn leading_pair_form(
    f: &Field,
    gs: &GroupSetting,
    a0: Elem,
    a1: Elem,
    prefix: &[Elem],
    x_rm1: Elem,
    x_r: Elem,
) -> Result<Option<Elem>> {
    require_even(f)?;
    let r = gs.r;
    if r < 2 {
        return Err(DeepholeError::Setting("needs r ≥ 2".into()));
    }
    let mut a = vec![Elem::ZERO; r + 1];
    a[0] = a0;
    a[1] = a1;
    if a1.is_zero() {
        let mut xs = prefix.to_vec();
        xs.push(x_rm1);
        xs.push(x_r);
        let t = SymTable::from_elems(f, &xs);
        let c = t.c(f);
        return Ok(Some(f.mul(f.mul(a0, c[r]), f.add(Elem::ONE, f.mul(gs.eta, c[1])))));
    }
    let e = eq46_split(f, gs, &a, prefix)?;
    let (g3, g4) = (e.g(3), e.g(4));
    if g4.is_zero() {
        return Ok(None);
    }
    let b0 = f.add(e.s1, gs.eta_inv);
    let b = f.div(g3, g4)?;
    let x = f.add(f.add(f.add(x_rm1, x_r), b0), b);
    let y = f.add(x_r, b);
    let k = f.add(f.mul(g4, b0), g3);
    let mut v = f.mul(g4, f.mul(f.mul(x, y), f.add(x, y)));
    v = f.add(v, f.mul(k, f.mul(x, y)));
    Ok(Some(f.add(v, f.mul(k, f.mul(b, b)))))
}

/// V·∏(η⁻¹+S_{1,r−2}+x_t)·f̃_3·g̃·(f̃_3(η⁻¹+S_{1,r−2})²+g̃)·∏(f̃_3x_i²+g̃),
/// where x_{r−1} is pinned to η⁻¹ + S_{1,r−2}, f̃_i are the quadratic's
/// coefficients at that point and g̃ = f̃_1 + a_r.
pub fn lemma41_p(f: &Field, gs: &GroupSetting, a: &[Elem], xs: &[Elem]) -> Result<Elem> {
    require_even(f)?;
    let (pinned, e) = pinned_quadratic(f, gs, a, xs)?;
    let gt = f.add(e.f1, a[gs.r]);
    let mut v = Elem::ONE;
    for j in 0..xs.len() {
        for i in 0..j {
            v = f.mul(v, f.sub(xs[j], xs[i]));
        }
    }
    for &x in xs {
        v = f.mul(v, f.add(pinned, x));
    }
    v = f.mul(v, f.mul(e.f3, gt));
    v = f.mul(v, f.add(f.mul(e.f3, f.mul(pinned, pinned)), gt));
    for &x in xs {
        v = f.mul(v, f.add(f.mul(e.f3, f.mul(x, x)), gt));
    }
    Ok(v)
}

fn pinned_quadratic(f: &Field, gs: &GroupSetting, a: &[Elem], xs: &[Elem]) -> Result<(Elem, QuadraticSplit)> {
    let r = gs.r;
    if r < 3 {
        return Err(DeepholeError::Setting("needs r ≥ 3 (k ≤ q − 5)".into()));
    }
    if xs.len() != r - 2 {
        return Err(DeepholeError::Length { expected: r - 2, got: xs.len() });
    }
    let pinned = f.add(gs.eta_inv, f.sum(xs.iter().copied()));
    let mut prefix = xs.to_vec();
    prefix.push(pinned);
    Ok((pinned, eq36_split(f, gs, a, &prefix)?))
}

/// deg_{x_i} P = 4r.
pub fn pinned_poly_degree(r: usize) -> usize {
    4 * r
}

/// Where P ≠ 0 the unique root of f̃_3 X² + g̃ completes x_1..x_{r−1} to an
/// r-subset on which the criterion fails. P does not see x_{r−1} = 0, so
/// that case gives no subset of F_q^* and returns None as well.
pub fn pinned_root_witness(f: &Field, gs: &GroupSetting, a: &[Elem], xs: &[Elem]) -> Result<Option<Vec<Elem>>> {
    if lemma41_p(f, gs, a, xs)?.is_zero() {
        return Ok(None);
    }
    let (pinned, e) = pinned_quadratic(f, gs, a, xs)?;
    if pinned.is_zero() {
        return Ok(None);
    }
    let gt = f.add(e.f1, a[gs.r]);
    let root = f.sqrt(f.div(gt, e.f3)?).expect("every element is a square in characteristic 2");
    let mut out = xs.to_vec();
    out.push(pinned);
    out.push(root);
    out.sort_unstable();
    Ok(Some(out))
}
