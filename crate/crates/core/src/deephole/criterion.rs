use super::{check_budget, DeepholeError, Result};
use crate::code::{CosetWeights, SyndromeSpace};
use crate::combin::{binomial, colex_unrank, Colex};
use crate::field::{Elem, Field};
use crate::sym::{lambda_from_sigma, SymTable};
use crate::trs::TrsCode;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SUBSET_BUDGET: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Criterion,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeepHoleVerdict {
    pub is_deep_hole_syndrome: bool,
    /// First (n−k−1)-subset in colex order where the criterion fails.
    pub witness: Option<Vec<Elem>>,
    pub method: Method,
}

/// W_0..W_{n−k−2}: the criterion's left side is Σ_r a_r W_r for the
/// subset whose c_j and Λ'_t come from `c`.
pub fn forms_from_c(f: &Field, code: &TrsCode, c: &[Elem]) -> Vec<Elem> {
    let p = &code.params;
    let big_r = p.redundancy();
    let s = big_r - 1;
    let d = p.k - p.l;
    let lam = lambda_from_sigma(f, c, d);
    let sigma = &code.sigma;
    let cc = |j: usize| c.get(j).copied().unwrap_or(Elem::ZERO);
    (0..s)
        .map(|r| {
            let mut acc = Elem::ZERO;
            for t in 0..=d {
                let sg = sigma.get(d - t).copied().unwrap_or(Elem::ZERO);
                if sg.is_zero() {
                    continue;
                }
                let mut inner = Elem::ZERO;
                for w in r.saturating_sub(t)..=r {
                    inner = f.add(inner, f.mul(cc(s - w), lam[t + w - r]));
                }
                acc = f.add(acc, f.mul(sg, inner));
            }
            f.sub(cc(s - r), f.mul(p.eta, acc))
        })
        .collect()
}

pub fn linear_forms(f: &Field, code: &TrsCode, table: &SymTable) -> Vec<Elem> {
    forms_from_c(f, code, &table.c(f))
}

fn dot(f: &Field, a: &[Elem], w: &[Elem]) -> Elem {
    f.sum(a.iter().zip(w).map(|(&x, &y)| f.mul(x, y)))
}

/// Criterion value for any multiset of points; no validation.
pub(crate) fn lhs_unchecked(f: &Field, code: &TrsCode, a: &[Elem], xs: &[Elem]) -> Elem {
    let t = SymTable::from_elems(f, xs);
    dot(f, a, &linear_forms(f, code, &t))
}

fn check_syndrome(code: &TrsCode, a: &[Elem]) -> Result<()> {
    let r = code.params.redundancy();
    if a.len() != r {
        return Err(DeepholeError::Length { expected: r, got: a.len() });
    }
    Ok(())
}

fn check_subset(code: &TrsCode, subset: &[Elem]) -> Result<()> {
    let want = code.params.redundancy() - 1;
    if subset.len() != want {
        return Err(DeepholeError::Subset(format!("need {want} points, got {}", subset.len())));
    }
    for (i, x) in subset.iter().enumerate() {
        if code.params.a.binary_search(x).is_err() {
            return Err(DeepholeError::Subset(format!("{x:?} is not an evaluation point")));
        }
        if subset[..i].contains(x) {
            return Err(DeepholeError::Subset(format!("{x:?} repeated")));
        }
    }
    Ok(())
}

/// The sum Σ_r a_r c_{n−k−1−r} − η Σ_r Σ_t a_r σ_{k−l−t} Σ_w c_{n−k−1−w} Λ'_{t+w−r}
/// for an (n−k−1)-subset of A.
pub fn criterion_lhs(f: &Field, code: &TrsCode, a: &[Elem], subset: &[Elem]) -> Result<Elem> {
    check_syndrome(code, a)?;
    check_subset(code, subset)?;
    Ok(lhs_unchecked(f, code, a, subset))
}

/// Colex walk over s-subsets of A, keeping a SymTable of the current subset.
/// The table stores the largest index first so a colex step only rewrites
/// its tail.
pub struct SubsetWalker<'a> {
    a: &'a [Elem],
    it: Colex,
    table: SymTable,
    rank: u128,
    started: bool,
}

impl<'a> SubsetWalker<'a> {
    pub fn new(a: &'a [Elem], s: usize) -> SubsetWalker<'a> {
        SubsetWalker { a, it: Colex::new(a.len(), s), table: SymTable::new(), rank: 0, started: false }
    }

    /// Steps to the next subset; returns false when done.
    pub fn advance(&mut self, f: &Field) -> bool {
        let Some(changed) = self.it.advance() else {
            return false;
        };
        let k = self.it.current().len();
        if self.started {
            self.rank += 1;
        }
        self.started = true;
        self.table.truncate(k - changed);
        for i in (0..changed).rev() {
            let x = self.a[self.it.current()[i]];
            self.table.push(f, x);
        }
        true
    }

    pub fn table(&self) -> &SymTable {
        &self.table
    }

    pub fn indices(&self) -> &[usize] {
        self.it.current()
    }

    /// Colex rank of the current subset.
    pub fn rank(&self) -> u128 {
        self.rank
    }

    pub fn elems(&self) -> Vec<Elem> {
        self.it.current().iter().map(|&i| self.a[i]).collect()
    }
}

/// Deep-hole test of one syndrome by scanning every (n−k−1)-subset.
pub fn is_deep_hole_syndrome(f: &Field, code: &TrsCode, a: &[Elem], budget: u128) -> Result<DeepHoleVerdict> {
    check_syndrome(code, a)?;
    let n = code.n();
    let s = code.params.redundancy() - 1;
    check_budget(binomial(n as u64, s as u64), budget)?;
    let target = f.neg(a[s]);
    let head = &a[..s];
    let mut walk = SubsetWalker::new(&code.params.a, s);
    while walk.advance(f) {
        let w = linear_forms(f, code, walk.table());
        if dot(f, head, &w) == target {
            return Ok(DeepHoleVerdict {
                is_deep_hole_syndrome: false,
                witness: Some(walk.elems()),
                method: Method::Criterion,
            });
        }
    }
    Ok(DeepHoleVerdict { is_deep_hole_syndrome: true, witness: None, method: Method::Criterion })
}

/// Verdict from a coset-weight table: deep iff the leader weight is n − k.
pub fn oracle_verdict(f: &Field, code: &TrsCode, table: &CosetWeights, a: &[Elem]) -> Result<DeepHoleVerdict> {
    check_syndrome(code, a)?;
    let w = table.weight(table.space.index(f, a)) as usize;
    Ok(DeepHoleVerdict { is_deep_hole_syndrome: w == code.params.redundancy(), witness: None, method: Method::Oracle })
}

const NO_WITNESS: u32 = u32::MAX;

/// Criterion verdicts for the whole syndrome space.
#[derive(Clone, Debug)]
pub struct Classification {
    pub space: SyndromeSpace,
    subset_size: usize,
    deep: Vec<bool>,
    witness: Option<Vec<u32>>,
}

impl Classification {
    pub fn is_deep(&self, idx: usize) -> bool {
        self.deep[idx]
    }

    pub fn deep_flags(&self) -> &[bool] {
        &self.deep
    }

    pub fn deep_count(&self) -> usize {
        self.deep.iter().filter(|&&d| d).count()
    }

    pub fn deep_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.deep.iter().enumerate().filter(|(_, &d)| d).map(|(i, _)| i)
    }

    /// Indices (into A) of the first failing subset, if witnesses were kept.
    pub fn witness(&self, idx: usize) -> Option<Vec<usize>> {
        let w = self.witness.as_ref()?[idx];
        (w != NO_WITNESS).then(|| colex_unrank(w as u128, self.subset_size))
    }

    /// Syndromes where the verdict differs from "leader weight = n − k".
    pub fn mismatches(&self, table: &CosetWeights, redundancy: usize) -> Vec<usize> {
        assert_eq!(table.space, self.space);
        (0..self.deep.len()).filter(|&i| self.deep[i] != (table.weight(i) as usize == redundancy)).collect()
    }
}

/// Classifies all q^{n−k} syndromes at once. For each subset S the
/// criterion fails exactly at a_{n−k−1} = −Σ_r a_r W_r(S), so every prefix
/// (a_0..a_{n−k−2}) marks one non-deep syndrome. Cost C(n, n−k−1)·q^{n−k−1}.
pub fn classify_all(f: &Field, code: &TrsCode, budget: u128, keep_witness: bool) -> Result<Classification> {
    let n = code.n();
    let big_r = code.params.redundancy();
    let s = big_r - 1;
    let q = f.q() as usize;
    let subsets = binomial(n as u64, s as u64);
    let prefixes = (q as u128).pow(s as u32);
    check_budget(subsets.saturating_mul(prefixes), budget)?;
    if keep_witness && subsets >= NO_WITNESS as u128 {
        return Err(DeepholeError::Budget { needed: subsets, budget: NO_WITNESS as u128 });
    }
    let space = SyndromeSpace::new(f, big_r);
    let mut nondeep = vec![false; space.len()];
    let mut witness = keep_witness.then(|| vec![NO_WITNESS; space.len()]);
    let negp: Vec<usize> = (0..q as u32).map(|e| f.packed(f.neg(Elem(e))) as usize).collect();
    let elem_of: Vec<Elem> = (0..q as u32).map(|v| f.from_packed(v)).collect();

    let mut walk = SubsetWalker::new(&code.params.a, s);
    let mut contrib = vec![vec![Elem::ZERO; q]; s];
    let mut lvl = vec![Elem::ZERO; s + 1];
    let mut digits = vec![0usize; s];
    while walk.advance(f) {
        let rank = walk.rank() as u32;
        let mut mark = |idx: usize| {
            if !nondeep[idx] {
                nondeep[idx] = true;
            }
            if let Some(w) = witness.as_mut() {
                if w[idx] == NO_WITNESS {
                    w[idx] = rank;
                }
            }
        };
        if s == 0 {
            mark(negp[0]);
            continue;
        }
        let w = linear_forms(f, code, walk.table());
        for (c, row) in contrib.iter_mut().enumerate() {
            for (x, slot) in row.iter_mut().enumerate() {
                *slot = f.mul(elem_of[x], w[c]);
            }
        }
        digits.iter_mut().for_each(|d| *d = 0);
        for c in 0..s - 1 {
            lvl[c + 1] = f.add(lvl[c], contrib[c][0]);
        }
        let mut prefix_base = 0usize;
        loop {
            let base = lvl[s - 1];
            let last = &contrib[s - 1];
            for (x, &v) in last.iter().enumerate() {
                let val = f.add(base, v);
                mark((prefix_base + x) * q + negp[val.0 as usize]);
            }
            prefix_base += q;
            // odometer over digits 0..s−1
            let mut c = s - 1;
            let mut done = true;
            while c > 0 {
                c -= 1;
                if digits[c] + 1 < q {
                    digits[c] += 1;
                    for d in c..s - 1 {
                        let x = if d == c { digits[c] } else { 0 };
                        if d > c {
                            digits[d] = 0;
                        }
                        lvl[d + 1] = f.add(lvl[d], contrib[d][x]);
                    }
                    done = false;
                    break;
                }
                digits[c] = 0;
            }
            if done {
                break;
            }
        }
    }
    let deep = nondeep.into_iter().map(|b| !b).collect();
    Ok(Classification { space, subset_size: s, deep, witness })
}
