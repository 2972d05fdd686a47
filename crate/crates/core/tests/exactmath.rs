use latred_core::exactmath::matrix::{det, det_euclidean, identity, mat_mul, minors};
use latred_core::exactmath::normal_form::{hnf_rows, intersect_row_spans, is_saturated, left_kernel, saturate};
use latred_core::exactmath::*;
use latred_core::Error;
use num_bigint::BigInt;
use proptest::prelude::*;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn zmat(rows: &[&[i64]]) -> Matrix<BigInt> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), 0)
}

fn f2() -> RatFuncField {
    RatFuncField::over(Fq::new(2).unwrap())
}

#[test]
fn valuation_examples() {
    let two = Place::Prime(BigInt::from(2));
    let three = Place::Prime(BigInt::from(3));
    assert_eq!(valuation(&Scalar::Rational(q("12")), &two), Ok(Some(2)));
    assert_eq!(valuation(&Scalar::Rational(q("1/9")), &three), Ok(Some(-2)));
    assert_eq!(valuation(&Scalar::Rational(q("0")), &three), Ok(None));
    let k = f2();
    let x = k.parse("t^2/(t^3+1)").unwrap();
    assert_eq!(valuation(&Scalar::Function(k.clone(), x), &Place::Degree), Ok(Some(1)));
    assert!(matches!(
        valuation(&Scalar::Rational(q("5")), &Place::Prime(BigInt::from(4))),
        Err(Error::InvalidPlace(_))
    ));
}

#[test]
fn prime_part_examples() {
    let z = Integers;
    let t = vec![BigInt::from(2), BigInt::from(5)];
    assert_eq!(prime_part(&z, &BigInt::from(60), &t).unwrap(), BigInt::from(20));
    assert_eq!(prime_part(&z, &BigInt::from(7), &[BigInt::from(2)]).unwrap(), BigInt::from(1));
    assert_eq!(prime_part(&z, &BigInt::from(-12), &[BigInt::from(2)]).unwrap(), BigInt::from(4));
    assert!(matches!(prime_part(&z, &BigInt::from(0), &t), Err(Error::ZeroArgument(_))));
    let r = FqPolyRing::new(Fq::new(2).unwrap());
    let tt = r.t();
    let z = r.mul(&r.mul(&tt, &tt), &r.add(&tt, &r.one()));
    assert_eq!(prime_part(&r, &z, std::slice::from_ref(&tt)).unwrap(), r.mul(&tt, &tt));
}

#[test]
fn snf_examples() {
    let z = Integers;
    let m = zmat(&[&[2, 0], &[0, 4]]);
    let s = smith_normal_form(&z, &m);
    assert_eq!(s.d, m);
    assert_eq!(s.u, identity(&z, 2));
    assert_eq!(s.v, identity(&z, 2));
    let m = zmat(&[&[2, 1], &[1, 1]]);
    let s = smith_normal_form(&z, &m);
    assert_eq!(s.d, identity(&z, 2));
    assert_eq!(mat_mul(&z, &mat_mul(&z, &s.u, &s.d), &s.v), m);

    let r = FqPolyRing::new(Fq::new(2).unwrap());
    let t = r.t();
    let t2 = r.mul(&t, &t);
    let m = Matrix::new(2, 2, vec![t.clone(), r.zero(), r.zero(), t2.clone()]);
    let s = smith_normal_form(&r, &m);
    assert_eq!(s.invariant_factors(), vec![t, t2]);
}

#[test]
fn minors_examples() {
    let m = zmat(&[&[1, 0, 2], &[0, 1, 3]]).map(|x| Rational::integer(x.clone()));
    let got = minors(&QQ, &m, 2).unwrap();
    let want = vec![(vec![1, 2], q("1")), (vec![1, 3], q("3")), (vec![2, 3], q("-2"))];
    assert_eq!(got, want);
    let id = identity(&QQ, 3);
    assert_eq!(minors(&QQ, &id, 3).unwrap(), vec![(vec![1, 2, 3], q("1"))]);
    let m = zmat(&[&[2, 0], &[0, 3]]).map(|x| Rational::integer(x.clone()));
    let got = minors(&QQ, &m, 1).unwrap();
    assert_eq!(
        got,
        vec![(vec![1, 1], q("2")), (vec![1, 2], q("0")), (vec![2, 1], q("0")), (vec![2, 2], q("3"))]
    );
    assert!(matches!(minors(&QQ, &m, 3), Err(Error::Dimension(_))));
}

#[test]
fn saturate_examples() {
    let z = Integers;
    assert_eq!(saturate(&z, &zmat(&[&[2, 0]])).unwrap(), zmat(&[&[1, 0]]));
    assert_eq!(saturate(&z, &zmat(&[&[2, 4]])).unwrap(), zmat(&[&[1, 2]]));
    assert!(matches!(saturate(&z, &zmat(&[&[1, 2], &[2, 4]])), Err(Error::RankDeficient(_))));
    let r = FqPolyRing::new(Fq::new(2).unwrap());
    let t = r.t();
    let m = Matrix::new(1, 2, vec![t.clone(), r.mul(&t, &t)]);
    assert_eq!(saturate(&r, &m).unwrap(), Matrix::new(1, 2, vec![r.one(), t]));
}

#[test]
fn hnf_is_canonical_lower_triangular() {
    let z = Integers;
    let a = zmat(&[&[4, 0], &[3, 5]]);
    let b = zmat(&[&[4, 0], &[7, 5]]); // same row span: row2 + row1
    assert_eq!(hnf_rows(&z, &a), hnf_rows(&z, &b));
    // column form of a square full-rank matrix is lower triangular
    let h = hnf_rows(&z, &a).transpose();
    assert_eq!(*h.get(0, 1), BigInt::from(0));
}

#[test]
fn kernels_and_intersections() {
    let z = Integers;
    let a = zmat(&[&[1, 0, 0], &[0, 1, 0]]);
    let b = zmat(&[&[0, 1, 0], &[0, 0, 1]]);
    assert_eq!(intersect_row_spans(&z, &a, &b), zmat(&[&[0, 1, 0]]));
    let m = zmat(&[&[1, 2], &[2, 4], &[0, 1]]);
    let k = left_kernel(&z, &m);
    assert_eq!(k.rows(), 1);
    assert_eq!(mat_mul(&z, &k, &m), zmat(&[&[0, 0]]));
}

#[test]
fn extension_field_axioms() {
    for q in [4u64, 8, 9, 16, 25, 27, 49, 64, 81, 125, 128, 243, 256] {
        let f = Fq::new(q).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
        let (a, b, c) = (1 % q as u32, (q as u32) - 1, (q as u32) / 2);
        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
    }
    assert!(matches!(Fq::new(6), Err(Error::UnsupportedField(6))));
    assert!(matches!(Fq::new(512), Err(Error::UnsupportedField(512))));
    assert!(Fq::new(65537).is_err());
    assert!(Fq::new(65521).is_ok());
}

#[test]
fn rational_function_parse_and_render() {
    let k = f2();
    for s in ["t^2+1", "(t+1)/t^2", "1/t", "0", "t^3+t"] {
        let x = k.parse(s).unwrap();
        assert_eq!(k.parse(&k.render(&x)).unwrap(), x);
    }
    assert_eq!(k.parse("t^-2").unwrap(), k.t_pow(-2));
    assert_eq!(k.parse("t*t").unwrap(), k.t_pow(2));
    assert!(k.parse("t+").is_err());
    assert!(k.parse("2t").is_err());
}

#[test]
fn local_ring_remainders_are_canonical() {
    let zp = PAdicIntegers::at(3);
    let a = q("7/2");
    let b = q("9");
    let (qq, r) = zp.div_rem(&a, &b);
    assert_eq!(QQ.add(&QQ.mul(&qq, &b), &r), a);
    assert!(r.is_integer() && r >= q("0") && r < q("9"));
    let a2 = QQ.add(&a, &q("18/5"));
    // 18/5 = 9·(2/5) is a multiple of 9 in ℤ_(3)
    assert_eq!(zp.div_rem(&a2, &b).1, r);

    let dv = DegreeValuationRing::new(Fq::new(2).unwrap());
    let k = &dv.frac;
    let x = k.parse("(t+1)/(t^2+t+1)").unwrap();
    let pi2 = k.t_pow(-2);
    let (qq, r) = dv.div_rem(&x, &pi2);
    assert_eq!(k.add(&k.mul(&qq, &pi2), &r), x);
    assert!(dv.contains(&qq) && dv.contains(&r));
    assert_eq!(r, k.parse("1/t").unwrap());
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..50).prop_map(|(a, b)| Rational::from_ints(a, b))
}

fn small_zmat(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<BigInt>> {
    proptest::collection::vec(-9i64..10, rows * cols)
        .prop_map(move |v| Matrix::new(rows, cols, v.into_iter().map(BigInt::from).collect()))
}

fn small_f3_poly_mat(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Poly>> {
    proptest::collection::vec(proptest::collection::vec(0u32..3, 0..4), rows * cols)
        .prop_map(move |v| Matrix::new(rows, cols, v.into_iter().map(Poly::from_coeffs).collect()))
}

proptest! {
    #[test]
    fn p_adic_valuation_is_a_valuation(x in small_rational(), y in small_rational()) {
        let p = BigInt::from(2);
        let (vx, vy) = (x.valuation(&p), y.valuation(&p));
        match (vx, vy) {
            (Some(a), Some(b)) => {
                prop_assert_eq!((&x * &y).valuation(&p), Some(a + b));
                if let Some(s) = (&x + &y).valuation(&p) {
                    prop_assert!(s >= a.min(b));
                }
            }
            _ => prop_assert_eq!((&x * &y).valuation(&p), None),
        }
    }

    #[test]
    fn degree_valuation_is_a_valuation(a in proptest::collection::vec(0u32..2, 0..6), b in proptest::collection::vec(0u32..2, 1..6), c in proptest::collection::vec(0u32..2, 0..6)) {
        let k = f2();
        let den = Poly::from_coeffs(b);
        prop_assume!(!den.is_zero());
        let x = k.make(Poly::from_coeffs(a), den.clone());
        let y = k.make(Poly::from_coeffs(c), den);
        if let (Some(vx), Some(vy)) = (k.valuation(&x), k.valuation(&y)) {
            prop_assert_eq!(k.valuation(&k.mul(&x, &y)), Some(vx + vy));
            if let Some(s) = k.valuation(&k.add(&x, &y)) {
                prop_assert!(s >= vx.min(vy));
            }
        }
    }

    #[test]
    fn snf_over_z_reconstructs(m in small_zmat(3, 4)) {
        let z = Integers;
        let s = smith_normal_form(&z, &m);
        prop_assert_eq!(mat_mul(&z, &mat_mul(&z, &s.u, &s.d), &s.v), m);
        prop_assert_eq!(mat_mul(&z, &s.u, &s.u_inv), identity(&z, 3));
        prop_assert_eq!(mat_mul(&z, &s.v, &s.v_inv), identity(&z, 4));
        prop_assert!(z.is_unit(&det_euclidean(&z, &s.u)));
        prop_assert!(z.is_unit(&det_euclidean(&z, &s.v)));
        let d = s.invariant_factors();
        for w in d.windows(2) {
            prop_assert!(z.divides(&w[0], &w[1]));
        }
        for i in 0..3 { for j in 0..4 {
            if i != j { prop_assert_eq!(s.d.get(i, j).clone(), BigInt::from(0)); }
        }}
    }

    #[test]
    fn snf_over_f3_t_reconstructs(m in small_f3_poly_mat(3, 3)) {
        let r = FqPolyRing::new(Fq::new(3).unwrap());
        let s = smith_normal_form(&r, &m);
        prop_assert_eq!(mat_mul(&r, &mat_mul(&r, &s.u, &s.d), &s.v), m);
        prop_assert!(r.is_unit(&det_euclidean(&r, &s.u)));
        prop_assert!(r.is_unit(&det_euclidean(&r, &s.v)));
        for w in s.invariant_factors().windows(2) {
            prop_assert!(r.divides(&w[0], &w[1]));
        }
    }

    #[test]
    fn saturate_is_idempotent_and_span_preserving(m in small_zmat(2, 4)) {
        let z = Integers;
        let qm = m.map(|x| Rational::integer(x.clone()));
        prop_assume!(latred_core::exactmath::matrix::rank(&QQ, &qm) == 2);
        let s = saturate(&z, &m).unwrap();
        prop_assert!(is_saturated(&z, &s));
        prop_assert_eq!(saturate(&z, &s).unwrap(), s.clone());
        let qs = s.map(|x| Rational::integer(x.clone()));
        prop_assert_eq!(latred_core::exactmath::matrix::rank(&QQ, &qs.stack(&qm)), 2);
    }

    #[test]
    fn top_minor_is_determinant(v in proptest::collection::vec(small_rational(), 9)) {
        let m = Matrix::new(3, 3, v);
        let top = minors(&QQ, &m, 3).unwrap();
        prop_assert_eq!(top.len(), 1);
        prop_assert_eq!(top[0].1.clone(), det(&QQ, &m));
    }

    #[test]
    fn euclidean_and_field_determinants_agree(m in small_zmat(4, 4)) {
        let d1 = det_euclidean(&Integers, &m);
        let d2 = det(&QQ, &m.map(|x| Rational::integer(x.clone())));
        prop_assert_eq!(Rational::integer(d1), d2);
    }
}

#[test]
fn log_ratio_compares_exactly_with_rationals() {
    use std::cmp::Ordering::*;
    let ln2 = LogRatio::ln(q("2"));
    assert_eq!(ln2.cmp_rational(&q("0")), Greater);
    assert_eq!(ln2.cmp_rational(&q("69/100")), Greater);
    assert_eq!(ln2.cmp_rational(&q("7/10")), Less);
    assert_eq!(ln2.neg().cmp_rational(&q("-69/100")), Less);
    assert_eq!(ln2.neg().cmp_rational(&q("-7/10")), Greater);
    // ln(e-approximation) against 1 on both sides of e
    assert_eq!(LogRatio::ln(q("2718281/1000000")).cmp_rational(&q("1")), Less);
    assert_eq!(LogRatio::ln(q("2718282/1000000")).cmp_rational(&q("1")), Greater);
    // ln(1000)/3 = ln 10 ≈ 2.302585
    let l = LogRatio::new(q("1000"), 3);
    assert_eq!(l.cmp_rational(&q("2302585/1000000")), Greater);
    assert_eq!(l.cmp_rational(&q("2302586/1000000")), Less);
    assert_eq!(LogRatio::zero().cmp_rational(&q("0")), Equal);
    assert_eq!(LogRatio::ln(q("10")).cmp_rational(&q("40")), Less);
}

#[test]
fn smith_form_of_a_dense_matrix_stays_small() {
    let m = zmat(&[
        &[-178845975, 185613120, 381538080, -264615120],
        &[-207726288, -86713200, 147164688, -103118400],
        &[7065520, -1144614240, -953845200, 445127760],
        &[272527200, 537621840, 321922755, 139897296],
    ]);
    let s = smith_normal_form(&Integers, &m);
    assert_eq!(mat_mul(&Integers, &mat_mul(&Integers, &s.u, &s.d), &s.v), m);
    assert_eq!(mat_mul(&Integers, &s.u, &s.u_inv), identity(&Integers, 4));
    assert_eq!(mat_mul(&Integers, &s.v, &s.v_inv), identity(&Integers, 4));
    let f = s.invariant_factors();
    assert_eq!(f.len(), 4);
    for w in f.windows(2) {
        assert!((&w[1] % &w[0]) == BigInt::from(0));
    }
    let prod: BigInt = f.iter().product();
    assert_eq!(prod, det_euclidean(&Integers, &m).magnitude().clone().into());
}
