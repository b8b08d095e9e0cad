use super::criterion::{classify_all, is_deep_hole_syndrome};
use super::group::GroupSetting;
use super::range::{even_main_range, odd_main_range, RangeReport};
use super::Result;
use crate::field::{Elem, Field};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

const KEEP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub q: u32,
    pub k: usize,
    pub eta: Elem,
    pub r: usize,
    pub mode: ScanMode,
    pub range: RangeReport,
    pub in_range: bool,
    /// Syndromes classified.
    pub checked: u64,
    pub deep: u64,
    /// Deep syndromes outside (0,…,0,a≠0); at most a few are kept.
    pub extra_deep: Vec<Vec<Elem>>,
    pub extra_deep_count: u64,
    /// Members of (0,…,0,a≠0) judged not deep.
    pub missing_family: u64,
}

impl CompletenessReport {
    /// The deep set equals (or, when sampling, is consistent with) the family.
    pub fn family_only(&self) -> bool {
        self.extra_deep_count == 0 && self.missing_family == 0
    }
}

fn in_family(a: &[Elem]) -> bool {
    let (last, head) = a.split_last().expect("nonempty syndrome");
    !last.is_zero() && head.iter().all(|e| e.is_zero())
}

pub fn completeness_scan(f: &Field, gs: &GroupSetting, mode: ScanMode, budget: u128) -> Result<CompletenessReport> {
    let q = f.q();
    let range = if f.is_even() { even_main_range(q as u64) } else { odd_main_range(q as u64) };
    let k = gs.k();
    let mut rep = CompletenessReport {
        q,
        k,
        eta: gs.eta,
        r: gs.r,
        mode,
        in_range: range.contains(k),
        range,
        checked: 0,
        deep: 0,
        extra_deep: Vec::new(),
        extra_deep_count: 0,
        missing_family: 0,
    };
    let record = |rep: &mut CompletenessReport, a: Vec<Elem>, deep: bool| {
        rep.checked += 1;
        let fam = in_family(&a);
        if deep {
            rep.deep += 1;
        }
        if deep && !fam {
            rep.extra_deep_count += 1;
            if rep.extra_deep.len() < KEEP {
                rep.extra_deep.push(a);
            }
        } else if !deep && fam {
            rep.missing_family += 1;
        }
    };
    match mode {
        ScanMode::Exhaustive => {
            let cls = classify_all(f, &gs.code, budget, false)?;
            for idx in 0..cls.space.len() {
                record(&mut rep, cls.space.vector(f, idx), cls.is_deep(idx));
            }
        }
        ScanMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let len = gs.r + 1;
            for _ in 0..samples {
                let a = loop {
                    let a: Vec<Elem> = (0..len).map(|_| Elem(rng.gen_range(0..q))).collect();
                    if !in_family(&a) {
                        break a;
                    }
                };
                let v = is_deep_hole_syndrome(f, &gs.code, &a, budget)?;
                record(&mut rep, a, v.is_deep_hole_syndrome);
            }
        }
    }
    Ok(rep)
}
