//! Parameter ranges of the completeness statements, in exact integer
//! arithmetic: a comparison against c·√q is settled by squaring.

use serde::{Deserialize, Serialize};

/// lhs ≥ c√q
fn ge_sqrt(lhs: i64, c: i64, q: i64) -> bool {
    lhs >= 0 && lhs * lhs >= c * c * q
}

/// lhs > c√q
fn gt_sqrt(lhs: i64, c: i64, q: i64) -> bool {
    lhs >= 0 && lhs * lhs > c * c * q
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeReport {
    pub name: String,
    pub q: u64,
    pub bound: String,
    pub ks: Vec<usize>,
    pub vacuous: bool,
}

impl RangeReport {
    fn new(name: &str, q: u64, bound: &str, ks: Vec<usize>) -> RangeReport {
        let vacuous = ks.is_empty();
        RangeReport { name: name.into(), q, bound: bound.into(), ks, vacuous }
    }

    pub fn contains(&self, k: usize) -> bool {
        self.ks.contains(&k)
    }
}

fn upper(q: u64) -> usize {
    (q as usize).saturating_sub(5)
}

/// The three versions of the even-q range, in order: the summary form with
/// ≤ and −8, the −10 form with <, and the −8 form with <.
pub fn even_ranges(q: u64) -> Vec<RangeReport> {
    let qi = q as i64;
    let ks = |keep: &dyn Fn(i64) -> bool| (1..=upper(q)).filter(|&k| keep(k as i64)).collect::<Vec<_>>();
    vec![
        RangeReport::new("even-summary", q, "(3q+2√q−8)/4 ≤ k ≤ q−5", ks(&|k| ge_sqrt(4 * k - 3 * qi + 8, 2, qi))),
        RangeReport::new(
            "even-pinned-pair",
            q,
            "(3q+2√q−10)/4 < k ≤ q−5",
            ks(&|k| gt_sqrt(4 * k - 3 * qi + 10, 2, qi)),
        ),
        RangeReport::new("even-main", q, "(3q+2√q−8)/4 < k ≤ q−5", ks(&|k| gt_sqrt(4 * k - 3 * qi + 8, 2, qi))),
    ]
}

/// Range of the even main statement; the leading-pair check uses it too.
pub fn even_main_range(q: u64) -> RangeReport {
    even_ranges(q).pop().expect("three variants")
}

pub fn odd_main_range(q: u64) -> RangeReport {
    let qi = q as i64;
    let ks = (1..=upper(q)).filter(|&k| ge_sqrt(4 * k as i64 - 3 * qi + 5, 3, qi)).collect();
    RangeReport::new("odd-main", q, "(3q−5+3√q)/4 ≤ k ≤ q−5", ks)
}

pub fn even_small_k_range(q: u64) -> RangeReport {
    let ks = if q >= 16 { (q as usize - 4..=q as usize - 2).collect() } else { Vec::new() };
    RangeReport::new("even-small-k", q, "q ≥ 16, q−4 ≤ k ≤ q−2", ks)
}

/// r ≤ (q − 3√q − 3)/4
pub fn zero_count_r_ok(q: u64, r: usize) -> bool {
    ge_sqrt(q as i64 - 3 - 4 * r as i64, 3, q as i64)
}
