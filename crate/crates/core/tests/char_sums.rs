use num_complex::Complex64;
use std::f64::consts::PI;
use trs_lab::char_sums::{
    check_gauss_shift, conic_count, gauss_sum, kloosterman, mult_char_poly_sum, quad_complete_sum,
    squarefree_decomposition, surface_count, weil_power_sum, CharSumError,
};
use trs_lab::field::prime_power;
use trs_lab::poly::{Poly, Poly2};
use trs_lab::{Elem, Field};

fn prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&q| prime_power(q).is_some()).collect()
}

// e^{2πi Tr(x)/p}, straight from the trace
fn zeta_float(f: &Field, x: Elem) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * f.trace_int(x) as f64 / f.p() as f64)
}

// Euler's criterion, independent of the log tables' parity
fn legendre(f: &Field, x: Elem) -> i64 {
    if x.is_zero() {
        return 0;
    }
    if f.pow(x, (f.q() as u64 - 1) / 2) == Elem::ONE {
        1
    } else {
        -1
    }
}

#[test]
fn quadratic_gauss_sums_have_norm_q() {
    for q in prime_powers(3, 81).into_iter().filter(|q| q % 2 == 1) {
        let f = Field::with_order(q).unwrap();
        let psi = f.quadratic_index().unwrap();
        for a in f.nonzero() {
            let g = gauss_sum(&f, psi, a);
            assert_eq!(g.exact().unwrap().abs_square().exact, Some(q as i128), "q={q} a={a:?}");
        }
    }
}

#[test]
fn gauss_sum_float_agrees_with_direct_sum() {
    let f = Field::with_order(13).unwrap();
    for psi in 0..12u64 {
        let g = gauss_sum(&f, psi, Elem(5)).to_complex();
        let mut direct = Complex64::new(0.0, 0.0);
        for x in f.nonzero() {
            let ang = 2.0 * PI * (psi * f.log(x).unwrap() as u64) as f64 / 12.0;
            direct += Complex64::from_polar(1.0, ang) * zeta_float(&f, f.mul(Elem(5), x));
        }
        assert!((g - direct).norm() < 1e-9);
        if psi != 0 {
            assert!((g.norm_sqr() - 13.0).abs() < 1e-9);
        }
    }
}

#[test]
fn gauss_shift_identity() {
    let f = Field::with_order(8).unwrap();
    for psi in 0..7u64 {
        for a in f.nonzero() {
            for b in f.elements() {
                assert!(check_gauss_shift(&f, psi, a, b).unwrap());
            }
        }
    }
    let g = Field::with_order(9).unwrap();
    let pi = g.quadratic_index().unwrap();
    for a in g.nonzero() {
        for b in g.elements() {
            assert!(check_gauss_shift(&g, pi, a, b).unwrap());
        }
    }
    assert!(check_gauss_shift(&g, pi, Elem::ZERO, Elem::ONE).is_err());
}

#[test]
fn weil_cubic_over_gf8() {
    let f = Field::with_order(8).unwrap();
    let w = weil_power_sum(&f, Elem::ONE, Elem::ZERO, 3).unwrap();
    // c ↦ c³ permutes F_8, so the sum is a full orthogonality sum
    assert!(w.sum.is_zero());
    assert_eq!(w.d, 1);
    assert_eq!(w.exponent_bound.bound_square, 4 * 8);
    assert_eq!(w.exponent_bound.holds, Some(true));
    assert_eq!(w.gcd_bound.holds, Some(true));
}

#[test]
fn weil_quartic_over_gf13() {
    let f = Field::with_order(13).unwrap();
    for a in f.nonzero() {
        for b in f.elements() {
            let w = weil_power_sum(&f, a, b, 4).unwrap();
            let direct: Complex64 = f.elements().map(|c| zeta_float(&f, f.add(f.mul(a, f.pow(c, 4)), b))).sum();
            assert!((w.sum.to_complex() - direct).norm() < 1e-9);
            assert_eq!(w.d, 4);
            assert_eq!(w.gcd_bound.holds, Some(true));
        }
    }
}

#[test]
fn quad_sums_match_closed_forms() {
    for q in [3u64, 5, 7, 9, 2, 4, 8, 16] {
        let f = Field::with_order(q).unwrap();
        let bs: Vec<Elem> = if q == 16 { vec![Elem::ONE, f.xi()] } else { f.nonzero().collect() };
        for &b in &bs {
            for a2 in f.nonzero() {
                for a1 in f.elements() {
                    for a0 in f.elements() {
                        let r = quad_complete_sum(&f, b, a2, a1, a0).unwrap();
                        assert!(r.holds(), "q={q} b={b:?} a=({a2:?},{a1:?},{a0:?})");
                    }
                }
            }
        }
    }
}

#[test]
fn quad_examples() {
    // odd q, a1 = a0 = 0: π(a2)·G(π, χ)
    let f = Field::with_order(7).unwrap();
    let g = gauss_sum(&f, 3, Elem::ONE).exact().unwrap().clone();
    for a2 in f.nonzero() {
        let r = quad_complete_sum(&f, Elem::ONE, a2, Elem::ZERO, Elem::ZERO).unwrap();
        assert_eq!(r.sum, g.scale(legendre(&f, a2) as i128));
    }
    // even q = 8, a2 = a1 = 1: b·a2 + b²a1² = 0, so the sum is q·χ(a0)
    let e = Field::with_order(8).unwrap();
    for a0 in e.elements() {
        let r = quad_complete_sum(&e, Elem::ONE, Elem::ONE, Elem::ONE, a0).unwrap();
        let sign = if e.trace_int(a0) == 0 { 8 } else { -8 };
        assert_eq!(r.sum.as_integer(), Some(sign));
    }
    // q = 5, f = x²: brute force in floating point
    let p = Field::with_order(5).unwrap();
    let r = quad_complete_sum(&p, Elem::ONE, Elem::ONE, Elem::ZERO, Elem::ZERO).unwrap();
    let direct: Complex64 = p.elements().map(|c| zeta_float(&p, p.mul(c, c))).sum();
    assert!((r.sum.to_complex() - direct).norm() < 1e-9);
    assert!((direct.norm_sqr() - 5.0).abs() < 1e-9);
}

#[test]
fn multiplicative_sums() {
    let f = Field::with_order(7).unwrap();
    let x = Poly::from_roots(&f, &[Elem::ZERO]);
    let r = mult_char_poly_sum(&f, 3, Elem::ONE, &x).unwrap();
    assert!(r.sum.exact().unwrap().is_zero());

    let six = f.from_int(6);
    let xx1 = Poly::from_roots(&f, &[Elem::ZERO, six]);
    let r = mult_char_poly_sum(&f, 3, Elem::ONE, &xx1).unwrap();
    let direct: i64 = f.elements().map(|c| legendre(&f, xx1.eval(&f, c))).sum();
    assert_eq!(r.sum.exact().unwrap().as_integer(), Some(direct as i128));
    // a nondegenerate quadratic sums to −π(lead)
    assert_eq!(direct, -1);
    assert_eq!(r.d, 2);
    assert_eq!(r.bound.holds, Some(true));

    let g = Field::with_order(9).unwrap();
    let cubic = Poly::from_roots(&g, &[Elem(1), Elem(3), Elem(7)]);
    for a in g.nonzero() {
        let r = mult_char_poly_sum(&g, 4, a, &cubic).unwrap();
        let direct: i64 = g.elements().map(|c| legendre(&g, g.mul(a, cubic.eval(&g, c)))).sum();
        assert_eq!(r.sum.exact().unwrap().as_integer(), Some(direct as i128));
        assert_eq!(r.d, 3);
        assert_eq!(r.bound.bound_square, 4 * 9);
        assert_eq!(r.bound.holds, Some(true));
    }
    // order-4 character: complex path
    let r = mult_char_poly_sum(&g, 2, Elem::ONE, &cubic).unwrap();
    assert_eq!(r.order, 4);
    assert!(r.sum.exact().is_none());
    assert_eq!(r.bound.holds, Some(true));
    assert_eq!(mult_char_poly_sum(&g, 0, Elem::ONE, &cubic).unwrap_err(), CharSumError::TrivialCharacter);
}

#[test]
fn distinct_roots_of_split_polynomials() {
    for q in [4u64, 5, 8, 9] {
        let f = Field::with_order(q).unwrap();
        let roots = [Elem(1), Elem(1), Elem(2), Elem(3), Elem(3), Elem(3), Elem(3)];
        let poly = Poly::from_roots(&f, &roots);
        let parts = squarefree_decomposition(&f, &poly);
        let rebuilt = parts.iter().fold(Poly::one(), |acc, (g, e)| acc.mul(&f, &g.pow(&f, *e as u32)));
        assert_eq!(rebuilt, poly);
        let d: usize = parts.iter().map(|(g, _)| g.degree().unwrap()).sum();
        let on_field = f.elements().filter(|&x| poly.eval(&f, x).is_zero()).count();
        assert_eq!(d, on_field);
        assert_eq!(d, 3);
    }
}

#[test]
fn kloosterman_bound_exhaustive() {
    for q in prime_powers(2, 32) {
        let f = Field::with_order(q).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                if a.is_zero() && b.is_zero() {
                    continue;
                }
                let k = kloosterman(&f, a, b).unwrap();
                assert_eq!(k.bound.bound_square, 4 * q as i128);
                assert_eq!(k.bound.holds, Some(true), "q={q} a={a:?} b={b:?}");
            }
        }
    }
}

#[test]
fn kloosterman_gf16_integer() {
    let f = Field::with_order(16).unwrap();
    let k = kloosterman(&f, Elem::ONE, Elem::ONE).unwrap();
    let direct: i128 = f
        .nonzero()
        .map(|c| {
            let t = f.trace_int(f.add(c, f.inv(c).unwrap()));
            if t == 0 {
                1
            } else {
                -1
            }
        })
        .sum();
    assert_eq!(k.sum.as_integer(), Some(direct));
    assert!(direct * direct <= 64);

    let g = Field::with_order(7).unwrap();
    let k = kloosterman(&g, g.from_int(1), g.from_int(2)).unwrap();
    assert!(k.bound.abs_square <= 28.0);
    let direct: Complex64 =
        g.nonzero().map(|c| zeta_float(&g, g.add(c, g.mul(g.from_int(2), g.inv(c).unwrap())))).sum();
    assert!((k.sum.to_complex() - direct).norm() < 1e-9);
}

#[test]
fn conic_counts_exhaustive() {
    for q in [3u64, 5, 7, 9, 11, 13] {
        let f = Field::with_order(q).unwrap();
        for a1 in f.nonzero() {
            for a2 in f.nonzero() {
                for b in f.elements() {
                    let r = conic_count(&f, a1, a2, b).unwrap();
                    assert!(r.holds(), "q={q}");
                    let mut brute = 0u64;
                    for x in f.elements() {
                        for y in f.elements() {
                            let v = f.add(f.mul(a1, f.mul(x, x)), f.mul(a2, f.mul(y, y)));
                            if v == b {
                                brute += 1;
                            }
                        }
                    }
                    assert_eq!(r.count, brute);
                }
            }
        }
    }
    let f5 = Field::with_order(5).unwrap();
    // b = 0, q ≡ 1 mod 4: q + (q−1)·1 = 2q − 1
    assert_eq!(conic_count(&f5, Elem::ONE, Elem::ONE, Elem::ZERO).unwrap().count, 9);
    assert_eq!(conic_count(&f5, Elem::ONE, Elem::ONE, Elem::ONE).unwrap().count, 4);
    let f8 = Field::with_order(8).unwrap();
    assert_eq!(conic_count(&f8, Elem::ONE, Elem::ONE, Elem::ONE).unwrap_err(), CharSumError::OddField);
}

#[test]
fn cubic_surface_counts_gf8() {
    let f = Field::with_order(8).unwrap();
    for h in f.nonzero() {
        // XY(X+Y) + h = X²Y + XY² + h
        let poly = Poly2::new().term(Elem::ONE, 2, 1).term(Elem::ONE, 1, 2).term(h, 0, 0);
        let n = surface_count(&f, &poly) as i64;
        // n ≥ q − 2 − 2√q, compared through squares
        let gap = 8 - 2 - n;
        assert!(gap <= 0 || gap * gap <= 4 * 8, "h={h:?} n={n}");
    }
}
