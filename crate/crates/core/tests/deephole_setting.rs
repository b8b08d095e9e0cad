use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trs_lab::code::DEFAULT_COSET_BUDGET;
use trs_lab::deephole::*;
use trs_lab::sym::{lagrange_interpolate, SymTable};
use trs_lab::{Elem, Field};

const BIG: u128 = 1 << 40;

fn random_elem(f: &Field, rng: &mut ChaCha8Rng) -> Elem {
    Elem(rng.gen_range(0..f.q()))
}

fn random_vec(f: &Field, rng: &mut ChaCha8Rng, n: usize) -> Vec<Elem> {
    (0..n).map(|_| random_elem(f, rng)).collect()
}

fn random_subset(f: &Field, rng: &mut ChaCha8Rng, n: usize) -> Vec<Elem> {
    let mut nz: Vec<Elem> = f.nonzero().collect();
    nz.shuffle(rng);
    nz.truncate(n);
    nz
}

fn with(prefix: &[Elem], tail: &[Elem]) -> Vec<Elem> {
    prefix.iter().chain(tail).copied().collect()
}

#[test]
fn quadratic_split_matches_direct_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for q in [7u64, 8, 9, 11] {
        let f = Field::with_order(q).unwrap();
        for k in 1..=q as usize - 4 {
            let gs = GroupSetting::new(&f, k, f.exp(rng.gen_range(0..q - 1))).unwrap();
            for _ in 0..6 {
                let a = random_vec(&f, &mut rng, gs.r + 1);
                let prefix = random_subset(&f, &mut rng, gs.r - 1);
                let e = eq36_split(&f, &gs, &a, &prefix).unwrap();
                for x in f.elements() {
                    assert_eq!(e.eval(&f, x), gs.value(&f, &a, &with(&prefix, &[x])).unwrap(), "q={q} k={k}");
                }
            }
        }
    }
}

#[test]
fn bivariate_split_matches_direct_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for q in [7u64, 8, 9, 11] {
        let f = Field::with_order(q).unwrap();
        for k in 1..=q as usize - 4 {
            let gs = GroupSetting::new(&f, k, f.exp(rng.gen_range(0..q - 1))).unwrap();
            for _ in 0..3 {
                let a = random_vec(&f, &mut rng, gs.r + 1);
                let prefix = random_subset(&f, &mut rng, gs.r - 2);
                let e = eq46_split(&f, &gs, &a, &prefix).unwrap();
                for x in f.elements() {
                    for y in f.elements() {
                        let direct = gs.value(&f, &a, &with(&prefix, &[x, y])).unwrap();
                        assert_eq!(e.eval(&f, x, y), direct, "q={q} k={k}");
                    }
                }
            }
        }
    }
}

#[test]
fn pinned_pair_form_matches_direct_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for q in [8u64, 16] {
        let f = Field::with_order(q).unwrap();
        for k in [1, q as usize - 5, q as usize - 4] {
            let gs = GroupSetting::new(&f, k, f.exp(rng.gen_range(0..q - 1))).unwrap();
            let a_r = random_elem(&f, &mut rng);
            let a = pinned_pair_syndrome(&gs, a_r).unwrap();
            let prefix = random_subset(&f, &mut rng, gs.r - 2);
            for x in f.elements() {
                for y in f.elements() {
                    let direct = gs.value(&f, &a, &with(&prefix, &[x, y])).unwrap();
                    assert_eq!(pinned_pair_form(&f, &gs, a_r, &prefix, x, y).unwrap(), direct);
                }
            }
        }
    }
}

#[test]
fn leading_pair_form_matches_direct_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut evaluated = 0;
    for q in [8u64, 16] {
        let f = Field::with_order(q).unwrap();
        for k in [1, 2, q as usize - 5, q as usize - 4] {
            let gs = GroupSetting::new(&f, k, f.exp(rng.gen_range(0..q - 1))).unwrap();
            for a1_zero in [true, false] {
                let a0 = f.exp(rng.gen_range(0..q - 1));
                let a1 = if a1_zero { Elem::ZERO } else { f.exp(rng.gen_range(0..q - 1)) };
                let mut a = vec![Elem::ZERO; gs.r + 1];
                a[0] = a0;
                a[1] = a1;
                let prefix = random_subset(&f, &mut rng, gs.r - 2);
                for x in f.elements() {
                    for y in f.elements() {
                        let direct = gs.value(&f, &a, &with(&prefix, &[x, y])).unwrap();
                        if let Some(v) = leading_pair_form(&f, &gs, a0, a1, &prefix, x, y).unwrap() {
                            assert_eq!(v, direct, "q={q} k={k} a1={a1:?}");
                            evaluated += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(evaluated > 1000);
}

#[test]
fn split_forms_reject_odd_or_short_input() {
    let f = Field::with_order(7).unwrap();
    let gs = GroupSetting::new(&f, 2, Elem::ONE).unwrap();
    assert!(matches!(
        pinned_pair_form(&f, &gs, Elem::ONE, &[Elem::ONE], Elem::ONE, Elem::ONE),
        Err(DeepholeError::Setting(_))
    ));
    let a = vec![Elem::ZERO; gs.r + 1];
    assert!(matches!(eq36_split(&f, &gs, &a, &[]), Err(DeepholeError::Length { .. })));
    assert!(matches!(eq46_split(&f, &gs, &a[1..], &[Elem::ONE]), Err(DeepholeError::Length { .. })));
    assert!(GroupSetting::new(&f, 0, Elem::ONE).is_err());
}

#[test]
fn nonvanishing_pinned_poly_gives_failing_subset() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for q in [8u64, 16] {
        let f = Field::with_order(q).unwrap();
        let mut hits = 0;
        for k in 1..=q as usize - 5 {
            let gs = GroupSetting::new(&f, k, f.exp(rng.gen_range(0..q - 1))).unwrap();
            for _ in 0..40 {
                let a = random_vec(&f, &mut rng, gs.r + 1);
                let xs = random_subset(&f, &mut rng, gs.r - 2);
                let p = lemma41_p(&f, &gs, &a, &xs).unwrap();
                let pinned = f.add(gs.eta_inv, f.sum(xs.iter().copied()));
                match pinned_root_witness(&f, &gs, &a, &xs).unwrap() {
                    Some(w) => {
                        assert!(!p.is_zero());
                        assert_eq!(w.len(), gs.r);
                        assert!(w.iter().all(|x| !x.is_zero()) && w.windows(2).all(|p| p[0] < p[1]));
                        assert_eq!(gs.value(&f, &a, &w).unwrap(), Elem::ZERO);
                        let v = is_deep_hole_syndrome(&f, &gs.code, &a, BIG).unwrap();
                        assert!(!v.is_deep_hole_syndrome);
                        hits += 1;
                    }
                    None => assert!(p.is_zero() || pinned.is_zero()),
                }
            }
        }
        assert!(hits > 0, "q={q}");
    }
}

// Every deep syndrome makes P vanish on nonzero prefixes, except where the
// pinned x_{r−1} = η⁻¹ + S_{1,r−2} is itself zero.
#[test]
fn pinned_poly_vanishes_for_deep_syndromes() {
    let mut gaps = 0;
    for (q, k) in [(8u64, 3usize), (16, 11)] {
        let f = Field::with_order(q).unwrap();
        for eta in [Elem::ONE, f.xi()] {
            let gs = GroupSetting::new(&f, k, eta).unwrap();
            let cls = classify_all(&f, &gs.code, BIG, false).unwrap();
            let mut deep = 0;
            for idx in cls.deep_indices() {
                let a = cls.space.vector(&f, idx);
                for x in f.nonzero() {
                    let p = lemma41_p(&f, &gs, &a, &[x]).unwrap();
                    if f.add(gs.eta_inv, x).is_zero() {
                        gaps += !p.is_zero() as usize;
                    } else {
                        assert_eq!(p, Elem::ZERO, "q={q} a={a:?} x={x:?}");
                    }
                }
                deep += 1;
            }
            assert!(deep >= q as usize - 1);
        }
    }
    assert!(gaps > 0);
}

#[test]
fn pinned_poly_nonzero_at_zero_pin() {
    let f = Field::with_order(8).unwrap();
    let gs = GroupSetting::new(&f, 3, Elem::ONE).unwrap();
    let a = vec![Elem(1), Elem(6), Elem(2), Elem(5)];
    assert!(is_deep_hole_syndrome(&f, &gs.code, &a, BIG).unwrap().is_deep_hole_syndrome);
    assert_ne!(lemma41_p(&f, &gs, &a, &[Elem::ONE]).unwrap(), Elem::ZERO);
    assert_eq!(pinned_root_witness(&f, &gs, &a, &[Elem::ONE]).unwrap(), None);
}

#[test]
fn pinned_poly_degree_in_one_variable() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (q, k) in [(16u64, 11usize), (32, 24), (32, 25), (32, 26), (32, 27)] {
        let f = Field::with_order(q).unwrap();
        let gs = GroupSetting::new(&f, k, f.xi()).unwrap();
        let bound = pinned_poly_degree(gs.r);
        assert!(bound < q as usize - 1);
        for _ in 0..10 {
            let a = random_vec(&f, &mut rng, gs.r + 1);
            let mut xs = random_vec(&f, &mut rng, gs.r - 2);
            let pts: Vec<(Elem, Elem)> = f
                .elements()
                .map(|x| {
                    xs[0] = x;
                    (x, lemma41_p(&f, &gs, &a, &xs).unwrap())
                })
                .collect();
            let p = lagrange_interpolate(&f, &pts).unwrap();
            assert!(p.degree().is_none_or(|d| d <= bound), "q={q} k={k} deg={:?}", p.degree());
        }
    }
}

#[test]
fn even_small_k_rule_matches_oracle() {
    let f = Field::with_order(16).unwrap();
    for k in [12, 13, 14] {
        for eta in [Elem::ONE, f.exp(5)] {
            let rule = classify_even_small_k(&f, k, eta).unwrap();
            let gs = GroupSetting::new(&f, k, eta).unwrap();
            let table = gs.code.code.coset_weights(&f, DEFAULT_COSET_BUDGET).unwrap();
            let cls = classify_all(&f, &gs.code, BIG, false).unwrap();
            assert!(cls.mismatches(&table, rule.syndrome_len()).is_empty());
            for idx in 0..cls.space.len() {
                let a = cls.space.vector(&f, idx);
                assert_eq!(rule.is_deep(&f, &a).unwrap(), cls.is_deep(idx), "k={k} a={a:?}");
            }
        }
    }
}

#[test]
fn even_small_k_rule_preconditions() {
    let f8 = Field::with_order(8).unwrap();
    assert!(classify_even_small_k(&f8, 5, Elem::ONE).is_err());
    let f16 = Field::with_order(16).unwrap();
    assert!(classify_even_small_k(&f16, 11, Elem::ONE).is_err());
    assert!(classify_even_small_k(&f16, 15, Elem::ONE).is_err());
    let rule = classify_even_small_k(&f16, 14, Elem::ONE).unwrap();
    assert!(matches!(rule.is_deep(&f16, &[Elem::ONE; 2]), Err(DeepholeError::Length { .. })));
}

#[test]
fn class_membership_examples() {
    let f = Field::with_order(7).unwrap();
    let eta = f.from_int(3);
    let b = f.from_int(2);
    let t1 = t1_syndrome(&f, eta, b).unwrap();
    // (0, 2·2·3, 2, 2/(4·3)) = (0, 5, 2, 6) over F_7
    assert_eq!(t1, vec![Elem::ZERO, f.from_int(5), f.from_int(2), f.from_int(6)]);
    assert_eq!(classify_syndrome(&f, eta, &t1).unwrap(), vec![ClassTag::T1]);

    let t4 = t4_syndrome(&f, eta, f.from_int(2), f.from_int(6), 3).unwrap();
    // M = 3: a = (2, 6, 18, 54 − 3·162) = (2, 6, 4, 2)
    assert_eq!(t4, vec![f.from_int(2), f.from_int(6), f.from_int(4), f.from_int(2)]);
    assert!(classset_membership(&f, eta, &t4, ClassTag::T4).unwrap());

    let fam = vec![Elem::ZERO, Elem::ZERO, Elem::ZERO, f.from_int(4)];
    assert_eq!(classify_syndrome(&f, eta, &fam).unwrap(), vec![ClassTag::T2, ClassTag::Family]);
    let t3 = vec![f.from_int(4), Elem::ZERO, Elem::ZERO, Elem::ZERO];
    assert_eq!(classify_syndrome(&f, eta, &t3).unwrap(), vec![ClassTag::T3]);
    let zero = vec![Elem::ZERO; 4];
    assert_eq!(classify_syndrome(&f, eta, &zero).unwrap(), vec![ClassTag::T2]);

    let r4 = vec![Elem::ZERO; 5];
    assert!(matches!(classset_membership(&f, eta, &r4, ClassTag::T1), Err(DeepholeError::Precondition(_))));
    let f8 = Field::with_order(8).unwrap();
    assert!(classset_membership(&f8, Elem::ONE, &zero, ClassTag::T2).is_err());
}

#[test]
fn t4_product_matches_direct_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [7u64, 9, 11, 13] {
        let f = Field::with_order(q).unwrap();
        for _ in 0..100 {
            let k = rng.gen_range(1..=q as usize - 5);
            let eta = f.exp(rng.gen_range(0..q - 1));
            let gs = GroupSetting::new(&f, k, eta).unwrap();
            let a0 = f.exp(rng.gen_range(0..q - 1));
            let a1 = f.exp(rng.gen_range(0..q - 1));
            let a = t4_syndrome(&f, eta, a0, a1, gs.r).unwrap();
            let xs = random_subset(&f, &mut rng, gs.r);
            assert_eq!(t4_product(&f, eta, &a, &xs).unwrap(), gs.value(&f, &a, &xs).unwrap());
        }
    }
}

#[test]
fn t1_form_matches_direct_value_on_grid() {
    let f = Field::with_order(7).unwrap();
    let half = f.inv(f.from_int(2)).unwrap();
    for eta in f.nonzero() {
        let gs = GroupSetting::new(&f, 2, eta).unwrap();
        assert_eq!(gs.r, 3);
        for b in f.nonzero() {
            let a = t1_syndrome(&f, eta, b).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    let xs = [f.mul(half, f.add(x, y)), f.mul(half, f.sub(x, y)), f.neg(x)];
                    assert_eq!(t1_xy_form(&f, eta, b, x, y).unwrap(), gs.value(&f, &a, &xs).unwrap());
                }
            }
        }
    }
}

fn is_subset_of_units(xs: &[Elem], r: usize) -> bool {
    xs.len() == r && xs.iter().all(|x| !x.is_zero()) && xs.windows(2).all(|p| p[0] < p[1])
}

#[test]
fn odd_witnesses_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for q in [7u64, 9, 11, 13] {
        let f = Field::with_order(q).unwrap();
        let qs = q as usize;
        for eta in [Elem::ONE, f.xi()] {
            for r in 3..=qs - 2 {
                let w = witness_lemma47(&f, r, eta).unwrap();
                assert!(is_subset_of_units(&w, r));
                assert_eq!(f.sum(w.iter().copied()), f.inv(eta).unwrap());

                for b in f.elements() {
                    match witness_lemma410(&f, b, r, eta) {
                        Ok(w) => {
                            assert!(is_subset_of_units(&w.subset, r));
                            assert_eq!(c_quadratic_value(&f, eta, b, &w.subset), Elem::ZERO);
                            assert_eq!(w.in_proof_range, 4 * r <= qs);
                        }
                        Err(DeepholeError::Exhausted(_)) => assert!(4 * r > qs, "q={q} r={r} b={b:?}"),
                        Err(e) => panic!("{e}"),
                    }
                }
            }
            for k in 1..=qs - 5 {
                let gs = GroupSetting::new(&f, k, eta).unwrap();
                let r = gs.r;
                let a =
                    t4_syndrome(&f, eta, f.exp(rng.gen_range(0..q - 1)), f.exp(rng.gen_range(0..q - 1)), r).unwrap();
                let w = witness_t4_vanishing(&f, &gs, &a).unwrap();
                assert!(is_subset_of_units(&w, r));
                assert_eq!(gs.value(&f, &a, &w).unwrap(), Elem::ZERO);

                // T2 with a_{r−1} ≠ 0 fails on the quadratic witness for b = a_r/a_{r−1}
                let mut t2 = vec![Elem::ZERO; r + 1];
                t2[r - 1] = f.exp(rng.gen_range(0..q - 1));
                t2[r] = random_elem(&f, &mut rng);
                let b = f.div(t2[r], t2[r - 1]).unwrap();
                if let Ok(w) = witness_lemma410(&f, b, r, eta) {
                    assert_eq!(gs.value(&f, &t2, &w.subset).unwrap(), Elem::ZERO);
                } else {
                    assert!(4 * r > qs);
                }

                if r == 3 {
                    for b in f.nonzero() {
                        let a = t1_syndrome(&f, eta, b).unwrap();
                        let w = witness_lemma411(&f, &gs, b).unwrap();
                        assert!(is_subset_of_units(&w, 3));
                        assert_eq!(gs.value(&f, &a, &w).unwrap(), Elem::ZERO);
                    }
                }
            }
        }
        for i in 2..=qs - 4 {
            for j in 1..i {
                for kind in [SymCondition::C1, SymCondition::C2] {
                    let w = witness_appendix_c(&f, kind, i, j).unwrap();
                    assert!(is_subset_of_units(&w.subset, i));
                    let t = SymTable::from_elems(&f, &w.subset);
                    let s = |e: usize| t.full(e as isize);
                    let ok = match kind {
                        SymCondition::C1 => !s(j).is_zero() && !f.sub(f.mul(s(1), s(j)), s(j + 1)).is_zero(),
                        SymCondition::C2 => {
                            !s(j - 1).is_zero() && !f.sub(f.mul(s(j), s(j)), f.mul(s(j - 1), s(j + 1))).is_zero()
                        }
                    };
                    assert!(ok, "q={q} {kind:?} i={i} j={j}");
                }
            }
        }
    }
}

#[test]
fn witness_preconditions() {
    let f = Field::with_order(7).unwrap();
    assert!(matches!(witness_lemma47(&f, 2, Elem::ONE), Err(DeepholeError::Precondition(_))));
    assert!(matches!(witness_lemma410(&f, Elem::ONE, 6, Elem::ONE), Err(DeepholeError::Precondition(_))));
    assert!(matches!(witness_appendix_c(&f, SymCondition::C1, 4, 1), Err(DeepholeError::Precondition(_))));
    assert!(matches!(witness_appendix_c(&f, SymCondition::C1, 2, 2), Err(DeepholeError::Precondition(_))));
    let gs = GroupSetting::new(&f, 2, Elem::ONE).unwrap();
    assert!(witness_lemma411(&f, &gs, Elem::ZERO).is_err());
    let t3 = vec![Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ZERO];
    assert!(matches!(witness_lemma48(&f, &gs, &t3, BIG), Err(DeepholeError::Precondition(_))));
    assert!(matches!(witness_t4_vanishing(&f, &gs, &t3), Err(DeepholeError::Precondition(_))));
    let f8 = Field::with_order(8).unwrap();
    assert!(matches!(witness_lemma47(&f8, 3, Elem::ONE), Err(DeepholeError::Setting(_))));
}

#[test]
fn nondegenerate_prefix_and_bivariate_zeros() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut completed = 0;
    for q in [9u64, 11, 13] {
        let f = Field::with_order(q).unwrap();
        for k in 2..=q as usize - 5 {
            let gs = GroupSetting::new(&f, k, f.xi()).unwrap();
            for _ in 0..8 {
                let a = loop {
                    let a = random_vec(&f, &mut rng, gs.r + 1);
                    if classify_syndrome(&f, gs.eta, &a).unwrap().is_empty() {
                        break a;
                    }
                };
                let w = witness_lemma48(&f, &gs, &a, BIG).unwrap();
                assert!(is_subset_of_units(&w.subset, gs.r - 2));
                let e = eq46_split(&f, &gs, &a, &w.subset).unwrap();
                assert_eq!(e.g, w.g);
                assert!(!e.g(4).is_zero());
                assert_eq!(e.nondegeneracy(&f), w.nondegeneracy);
                assert!(!w.nondegeneracy.is_zero());

                let rep = bivariate_zero_report(&f, &gs, &a, BIG).unwrap();
                let zeros = f
                    .elements()
                    .flat_map(|x| f.elements().map(move |y| (x, y)))
                    .filter(|&(x, y)| e.eval_xy(&f, x, y).is_zero())
                    .count();
                assert_eq!(rep.zeros, zeros as u64);
                if let Some(c) = rep.completion {
                    assert!(is_subset_of_units(&c, gs.r));
                    assert_eq!(gs.value(&f, &a, &c).unwrap(), Elem::ZERO);
                    assert!(!is_deep_hole_syndrome(&f, &gs.code, &a, BIG).unwrap().is_deep_hole_syndrome);
                    completed += 1;
                }
            }
        }
    }
    assert!(completed > 0);
}

#[test]
fn scan_agrees_with_coset_oracle() {
    for (q, k) in [(7u64, 3usize), (8, 4), (9, 4), (8, 3)] {
        let f = Field::with_order(q).unwrap();
        for eta in [Elem::ONE, f.xi()] {
            let gs = GroupSetting::new(&f, k, eta).unwrap();
            let rep = completeness_scan(&f, &gs, ScanMode::Exhaustive, BIG).unwrap();
            let table = gs.code.code.coset_weights(&f, DEFAULT_COSET_BUDGET).unwrap();
            let want = (0..table.space.len()).filter(|&i| table.weight(i) as usize == gs.r + 1).count();
            assert_eq!(rep.deep, want as u64);
            assert_eq!(rep.checked, q.pow(gs.r as u32 + 1));
            assert_eq!(rep.missing_family, 0);
            assert!(!rep.in_range && rep.range.vacuous);
            assert_eq!(rep.extra_deep.len() as u64, rep.extra_deep_count.min(16));
        }
    }
}

#[test]
fn sampled_scan_is_reproducible() {
    let f = Field::with_order(11).unwrap();
    let gs = GroupSetting::new(&f, 5, f.xi()).unwrap();
    let mode = ScanMode::Sampled { samples: 300, seed: 42 };
    let a = completeness_scan(&f, &gs, mode, BIG).unwrap();
    let b = completeness_scan(&f, &gs, mode, BIG).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.checked, 300);
    let exhaustive = completeness_scan(&f, &gs, ScanMode::Exhaustive, BIG).unwrap();
    if exhaustive.family_only() {
        assert!(a.family_only());
    }
}
