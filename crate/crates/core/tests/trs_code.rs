use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trs_lab::code::{
    hamming, rs_generator, subcode_deep_holes, weight, CodeError, LinearCode, DEFAULT_COSET_BUDGET, DEFAULT_ENUM_BUDGET,
};
use trs_lab::combin::for_each_subset;
use trs_lab::linalg::Matrix;
use trs_lab::poly::Poly;
use trs_lab::trs::{valid_kl, TrsCode, TrsParams, TwistPoly};
use trs_lab::{Elem, Field};

fn random_elem(f: &Field, rng: &mut ChaCha8Rng) -> Elem {
    Elem(rng.gen_range(0..f.q()))
}

fn random_word(f: &Field, rng: &mut ChaCha8Rng, n: usize) -> Vec<Elem> {
    (0..n).map(|_| random_elem(f, rng)).collect()
}

// d(C) as the least number of dependent columns of H.
fn distance_from_parity(f: &Field, h: &Matrix) -> usize {
    let n = h.cols();
    for w in 1..=n {
        let mut found = false;
        for_each_subset(n, w, |s| {
            if h.select_cols(s).rank(f) < w {
                found = true;
                return false;
            }
            true
        });
        if found {
            return w;
        }
    }
    n + 1
}

#[test]
fn every_small_code_is_dual_and_full_rank() {
    for q in [4u64, 5, 7, 8, 9, 11, 13, 16] {
        let f = Field::with_order(q).unwrap();
        for full in [false, true] {
            let n = if full { q as usize } else { q as usize - 1 };
            if n > 12 {
                continue;
            }
            for (k, l) in valid_kl(n) {
                for eta in [Elem::ONE, f.xi()] {
                    let p = if full { TrsParams::full(&f, k, l, eta) } else { TrsParams::punctured(&f, k, l, eta) }
                        .unwrap();
                    let c = TrsCode::new(&f, p).unwrap();
                    assert_eq!(c.generator().rank(&f), k);
                    assert_eq!(c.parity_check().rank(&f), n - k);
                    assert!(c.parity_check().mul(&f, &c.generator().transpose()).is_zero());
                }
            }
        }
    }
}

#[test]
fn generated_code_equals_kernel() {
    for q in [5u64, 7, 8, 9] {
        let f = Field::with_order(q).unwrap();
        let n = q as usize;
        for (k, l) in valid_kl(n) {
            if (q as u128).pow(k as u32) > 100_000 {
                continue;
            }
            let c = TrsCode::new(&f, TrsParams::full(&f, k, l, f.xi()).unwrap()).unwrap();
            let mut seen = std::collections::HashSet::new();
            c.code
                .for_each_codeword(&f, DEFAULT_ENUM_BUDGET, |w| {
                    assert!(c.membership(&f, w).unwrap());
                    seen.insert(w.to_vec());
                })
                .unwrap();
            // |ker H| = q^{n − rank H} = q^k
            assert_eq!(seen.len() as u128, (q as u128).pow(k as u32));
        }
    }
}

#[test]
fn trs_sits_inside_rs_with_index_q() {
    for q in [7u64, 8, 9] {
        let f = Field::with_order(q).unwrap();
        let a: Vec<Elem> = f.nonzero().collect();
        for (k, l) in valid_kl(a.len()) {
            let c = TrsCode::new(&f, TrsParams::punctured(&f, k, l, f.xi()).unwrap()).unwrap();
            let rs = rs_generator(&f, &c.params.a, k + 1);
            let stacked = Matrix::from_rows(rs.to_rows().into_iter().chain(c.generator().to_rows()).collect(), a.len());
            assert_eq!(stacked.rank(&f), k + 1);
            assert_eq!(rs.rank(&f), c.generator().rank(&f) + 1);
        }
    }
}

#[test]
fn encode_lies_in_row_space() {
    let f = Field::with_order(9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = TrsCode::new(&f, TrsParams::full(&f, 4, 2, f.xi()).unwrap()).unwrap();
    assert!(weight(&c.encode(&f, &TwistPoly::zero(&c.params))) == 0);
    for _ in 0..50 {
        let t = TwistPoly::new(&c.params, random_word(&f, &mut rng, 4)).unwrap();
        let w = c.encode(&f, &t);
        assert!(c.membership(&f, &w).unwrap());
        assert!(c.generator().transpose().solve(&f, &w).is_some());
    }
    // only f_l = 1 reproduces the twisted generator row
    let mut only = vec![Elem::ZERO; 4];
    only[2] = Elem::ONE;
    let w = c.encode(&f, &TwistPoly::new(&c.params, only).unwrap());
    assert_eq!(w, c.generator().row(3).to_vec());
}

#[test]
fn membership_agrees_with_solve() {
    let f = Field::with_order(8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let c = TrsCode::new(&f, TrsParams::full(&f, 3, 1, f.xi()).unwrap()).unwrap();
    let gt = c.generator().transpose();
    for i in 0..300 {
        let w = if i % 3 == 0 {
            let t = TwistPoly::new(&c.params, random_word(&f, &mut rng, 3)).unwrap();
            c.encode(&f, &t)
        } else {
            random_word(&f, &mut rng, 8)
        };
        assert_eq!(c.membership(&f, &w).unwrap(), gt.solve(&f, &w).is_some());
    }
}

#[test]
fn trs_min_distance_matches_parity_oracle() {
    let f = Field::with_order(8).unwrap();
    for (k, l) in [(3, 0), (3, 1), (3, 2)] {
        for eta in f.nonzero() {
            let c = TrsCode::new(&f, TrsParams::punctured(&f, k, l, eta).unwrap()).unwrap();
            let d = c.code.min_distance(&f, DEFAULT_ENUM_BUDGET).unwrap();
            assert_eq!(d, distance_from_parity(&f, c.parity_check()));
            assert!(d <= 7 - k + 1);
        }
    }
}

#[test]
fn leader_table_q5_n4_k1() {
    let f = Field::with_order(5).unwrap();
    let a: Vec<Elem> = f.nonzero().collect();
    let c = LinearCode::from_generator(&f, rs_generator(&f, &a, 1)).unwrap();
    let leaders = c.coset_leaders(&f, DEFAULT_ENUM_BUDGET).unwrap();
    assert_eq!(leaders.len(), 125);
    assert_eq!(leaders[0].leader_weight, 0);
    let mut hist = [0u32; 4];
    for rep in &leaders {
        hist[rep.leader_weight] += 1;
        assert_eq!(c.syndrome(&f, &rep.leader).unwrap(), rep.syndrome);
        assert_eq!(weight(&rep.leader), rep.leader_weight);
    }
    // The code is the constants, so a coset's weight is 4 minus the largest
    // multiplicity of a value in any representative. Counting the 625 words by
    // that multiplicity (5, 80, 420, 120) and dividing by 5 gives the histogram.
    assert_eq!(hist, [1, 16, 84, 24]);
    let table = c.coset_weights(&f, DEFAULT_COSET_BUDGET).unwrap();
    assert_eq!(table.histogram(), vec![1, 16, 84, 24]);
    assert_eq!(table.covering_radius(), Some(3));
}

#[test]
fn table_and_direct_distance_agree_everywhere() {
    for (q, k) in [(5u64, 1usize), (5, 2), (7, 3), (4, 1)] {
        let f = Field::with_order(q).unwrap();
        let p = TrsParams::punctured(&f, k, k - 1, f.xi()).unwrap();
        let c = TrsCode::new(&f, p).unwrap();
        let n = c.n();
        let table = c.code.coset_weights(&f, DEFAULT_COSET_BUDGET).unwrap();
        let mut word = vec![Elem::ZERO; n];
        let total = (q as usize).pow(n as u32);
        for idx in 0..total {
            let mut x = idx;
            for w in word.iter_mut() {
                *w = Elem((x % q as usize) as u32);
                x /= q as usize;
            }
            let via_table = c.code.error_distance(&f, &table, &word).unwrap();
            let direct = c.code.error_distance_direct(&f, &word, DEFAULT_ENUM_BUDGET).unwrap();
            assert_eq!(via_table, direct, "q={q} k={k} word={word:?}");
        }
    }
}

#[test]
fn degree_k_words_are_deep() {
    let f = Field::with_order(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (k, l) in valid_kl(6) {
        let c = TrsCode::new(&f, TrsParams::punctured(&f, k, l, Elem::ONE).unwrap()).unwrap();
        let table = c.code.coset_weights(&f, DEFAULT_COSET_BUDGET).unwrap();
        for _ in 0..5 {
            let a = Elem(rng.gen_range(1..7));
            let t = TwistPoly::new(&c.params, random_word(&f, &mut rng, k)).unwrap();
            let g = t.expanded(&f, &c.params).add(&f, &Poly::monomial(a, k));
            let u = c.evaluate(&f, &g);
            assert_eq!(c.code.error_distance(&f, &table, &u).unwrap(), 6 - k);
        }
    }
}

#[test]
fn redundancy_and_supercode_bounds() {
    for q in [5u64, 7, 8] {
        let f = Field::with_order(q).unwrap();
        for (k, l) in valid_kl(q as usize) {
            let c = TrsCode::new(&f, TrsParams::full(&f, k, l, f.xi()).unwrap()).unwrap();
            let rho = c.code.coset_weights(&f, DEFAULT_COSET_BUDGET).unwrap().covering_radius().unwrap();
            let n = q as usize;
            assert!(rho <= n - k);
            // d(RS_{k+1}) = n − k
            assert!(rho >= n - k);
        }
    }
}

#[test]
fn trs_words_of_rs_are_deep_holes() {
    for q in [5u64, 7] {
        let f = Field::with_order(q).unwrap();
        for (k, l) in valid_kl(q as usize - 1) {
            let c = TrsCode::new(&f, TrsParams::punctured(&f, k, l, f.xi()).unwrap()).unwrap();
            let rs = LinearCode::from_generator(&f, rs_generator(&f, &c.params.a, k + 1)).unwrap();
            let rep = subcode_deep_holes(&f, &rs, &c.code, DEFAULT_COSET_BUDGET).unwrap();
            assert!(rep.passed(c.n(), k), "{rep:?}");
            assert_eq!(rep.words_checked as u128, (q as u128).pow(k as u32) * (q as u128 - 1));
        }
    }
}

#[test]
fn random_subcodes_of_rs_over_gf7() {
    let f = Field::with_order(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let a: Vec<Elem> = f.nonzero().collect();
    for _ in 0..10 {
        let k = rng.gen_range(1..5);
        let rs = LinearCode::from_generator(&f, rs_generator(&f, &a, k + 1)).unwrap();
        // random k-dimensional subspace of the message space
        let sub = loop {
            let m = Matrix::from_rows((0..k).map(|_| random_word(&f, &mut rng, k + 1)).collect(), k + 1);
            if m.rank(&f) == k {
                break m;
            }
        };
        let g = sub.mul(&f, rs.generator());
        let c = LinearCode::from_generator(&f, g).unwrap();
        let rep = subcode_deep_holes(&f, &rs, &c, DEFAULT_COSET_BUDGET).unwrap();
        assert!(rep.passed(6, k), "{rep:?}");
    }
    let rs = LinearCode::from_generator(&f, rs_generator(&f, &a, 3)).unwrap();
    assert_eq!(subcode_deep_holes(&f, &rs, &rs, DEFAULT_COSET_BUDGET), Err(CodeError::DimensionGap { sub: 3, sup: 3 }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn error_distance_invariances(seed in any::<u64>()) {
        let f = Field::with_order(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = TrsCode::new(&f, TrsParams::punctured(&f, 2, 1, Elem(3)).unwrap()).unwrap();
        let table = c.code.coset_weights(&f, DEFAULT_COSET_BUDGET).unwrap();
        let u = random_word(&f, &mut rng, 6);
        let d = c.code.error_distance(&f, &table, &u).unwrap();
        let t = TwistPoly::new(&c.params, random_word(&f, &mut rng, 2)).unwrap();
        let cw = c.encode(&f, &t);
        let shifted: Vec<Elem> = u.iter().zip(&cw).map(|(&a, &b)| f.add(a, b)).collect();
        let lam = Elem(rng.gen_range(1..7));
        let scaled: Vec<Elem> = u.iter().map(|&a| f.mul(a, lam)).collect();
        prop_assert_eq!(c.code.error_distance(&f, &table, &shifted).unwrap(), d);
        prop_assert_eq!(c.code.error_distance(&f, &table, &scaled).unwrap(), d);
        prop_assert!(d <= 4);
        prop_assert_eq!(hamming(&u, &u).unwrap(), 0);
    }
}
