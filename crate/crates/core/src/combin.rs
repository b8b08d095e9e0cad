//! Binomial coefficients and colexicographic subset enumeration.

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// k-subsets of `0..n` in colex order (compare largest elements first).
#[derive(Clone, Debug)]
pub struct Colex {
    n: usize,
    c: Vec<usize>,
    started: bool,
    done: bool,
}

impl Colex {
    pub fn new(n: usize, k: usize) -> Colex {
        Colex { n, c: (0..k).collect(), started: false, done: k > n }
    }

    pub fn current(&self) -> &[usize] {
        &self.c
    }

    /// Moves to the next subset and returns how many of its lowest
    /// positions changed, or `None` once the enumeration is over.
    pub fn advance(&mut self) -> Option<usize> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.c.len());
        }
        let k = self.c.len();
        for i in 0..k {
            let limit = if i + 1 < k { self.c[i + 1] } else { self.n };
            if self.c[i] + 1 < limit {
                self.c[i] += 1;
                for j in 0..i {
                    self.c[j] = j;
                }
                return Some(i + 1);
            }
        }
        self.done = true;
        None
    }
}

/// Visits every k-subset of `0..n` in colex order until `visit` returns false.
pub fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    let mut it = Colex::new(n, k);
    while it.advance().is_some() {
        if !visit(it.current()) {
            return;
        }
    }
}

/// Position of a sorted subset in colex order.
pub fn colex_rank(subset: &[usize]) -> u128 {
    subset.iter().enumerate().map(|(i, &c)| binomial(c as u64, i as u64 + 1)).sum()
}

/// Inverse of [`colex_rank`] for k-subsets.
pub fn colex_unrank(mut rank: u128, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for i in (1..=k).rev() {
        let mut c = i - 1;
        while binomial(c as u64 + 1, i as u64) <= rank {
            c += 1;
        }
        rank -= binomial(c as u64, i as u64);
        out[i - 1] = c;
    }
    out
}
