use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use quadsg::configurations::{
    certify_ek_span, check_delta_ek, check_delta_sg, check_ek, check_quadratic_ek, check_quadratic_sg,
    colored_quadratic_family, fermat_lines, gen_pencil_family, pencil_family_forms, planted_ek, three_line_family,
    EkOptions, PointSet, Regime,
};
use quadsg::quadratic::{forms_rank, random_projection};
use quadsg::rng::{random_linear_form, seeded};
use quadsg::{Budget, LinearForm, QuadraticForm, Scalar};

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn det3(a: &[i64], b: &[i64], c: &[i64]) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn three_lines_i64(per_line: i64) -> Vec<Vec<i64>> {
    (1..=per_line).flat_map(|t| [vec![t, 0, 1], vec![0, t, 1], vec![t, t, 1]]).collect()
}

#[test]
fn sg_family_matches_brute_force() {
    let pts = three_lines_i64(20);
    let m = pts.len();
    let counts: Vec<usize> = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i && (0..m).any(|k| k != i && k != j && det3(&pts[i], &pts[j], &pts[k]) == 0))
                .count()
        })
        .collect();
    let r = check_delta_sg(&three_line_family(20)).unwrap();
    assert_eq!(r.counts, counts);
    assert_eq!(r.delta_hat, q(*counts.iter().min().unwrap() as i64, m as i64));
    assert_eq!(r.delta_hat, q(19, 60));
    assert_eq!(r.dim, 3);
    assert!(BigRational::from_integer(BigInt::from(r.dim)) * &r.delta_hat <= q(12, 1));
    for &(i, j, k) in &r.witness_triples {
        assert!(i < j && k != i && k != j);
        assert_eq!(det3(&pts[i], &pts[j], &pts[k]), 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sg_counts_are_permutation_invariant(perm in Just((0..18).collect::<Vec<usize>>()).prop_shuffle()) {
        let base = three_lines_i64(6);
        let shuffled: Vec<&[i64]> = perm.iter().map(|&i| base[i].as_slice()).collect();
        let a = check_delta_sg(&three_line_family(6)).unwrap();
        let b = check_delta_sg(&PointSet::from_i64(&shuffled, None).unwrap()).unwrap();
        prop_assert_eq!(&a.delta_hat, &b.delta_hat);
        prop_assert_eq!(a.dim, b.dim);
        for (pos, &i) in perm.iter().enumerate() {
            prop_assert_eq!(b.counts[pos], a.counts[i]);
        }
    }

    #[test]
    fn delta_ek_is_permutation_invariant(seed in 0u64..1000, perm in Just((0..12).collect::<Vec<usize>>()).prop_shuffle()) {
        let p = planted_ek([12, 6, 6], 3, 6, seed).unwrap();
        let shuffled = PointSet::new(perm.iter().map(|&i| p.sets[0].points()[i].clone()).collect(), Some(1)).unwrap();
        let a = check_delta_ek([&p.sets[0], &p.sets[1], &p.sets[2]]).unwrap();
        let b = check_delta_ek([&shuffled, &p.sets[1], &p.sets[2]]).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn ek_on_a_single_line() {
    let t1 = PointSet::from_i64(&[&[1, 0], &[1, 3], &[2, 7]], Some(1)).unwrap();
    let t2 = PointSet::from_i64(&[&[0, 1], &[1, 5]], Some(2)).unwrap();
    let t3 = PointSet::from_i64(&[&[1, 1], &[1, -1]], Some(3)).unwrap();
    let c = check_ek([&t1, &t2, &t3]).unwrap();
    assert!(c.holds && c.dim == 2);
    assert_eq!(check_delta_ek([&t1, &t2, &t3]).unwrap(), q(1, 1));
}

#[test]
fn planted_half_fraction_is_exact() {
    for seed in 0..5 {
        let p = planted_ek([6, 6, 6], 2, 7, seed).unwrap();
        assert_eq!(p.delta, q(1, 2));
        assert_eq!(check_delta_ek([&p.sets[0], &p.sets[1], &p.sets[2]]).unwrap(), q(1, 2));
        let c = check_ek([&p.sets[0], &p.sets[1], &p.sets[2]]).unwrap();
        assert!(!c.holds && c.missing.is_some());
        assert_eq!(c.dim, 4);
    }
}

#[test]
fn certificates_always_span() {
    let opts = EkOptions::default();
    for seed in 0..12 {
        for (sizes, planes) in [([30, 10, 10], 3), ([40, 8, 2], 2)] {
            let p = planted_ek(sizes, planes, 8, seed).unwrap();
            let t = [&p.sets[0], &p.sets[1], &p.sets[2]];
            assert!(check_delta_ek(t).unwrap() >= p.delta);
            let cert = certify_ek_span(t, &p.delta, seed, None, &[], &opts).unwrap();
            assert!(cert.verified);
            assert_eq!(cert.span_dim, p.ambient_dim);
            assert!(cert.spanning_set.len() as u64 <= cert.size_bound_claimed);
            let expected = if sizes[2].pow(3) <= sizes[0] { Regime::Unbalanced } else { Regime::Balanced };
            assert_eq!(cert.regime, expected);
        }
    }
}

#[test]
fn certificate_with_declared_subspace() {
    let p = planted_ek([20, 10, 10], 2, 6, 4).unwrap();
    let t = [&p.sets[0], &p.sets[1], &p.sets[2]];
    let w = vec![p.sets[0].points()[0].clone(), p.sets[0].points()[1].clone()];
    let cert = certify_ek_span(t, &p.delta, 1, Some(&w), &[], &EkOptions::default()).unwrap();
    assert!(cert.verified);
    assert_eq!(cert.w_dim, 2);
    assert_eq!(cert.span_dim, 4);
}

#[test]
fn certify_rejects_too_large_delta() {
    let p = planted_ek([6, 6, 6], 2, 5, 0).unwrap();
    let t = [&p.sets[0], &p.sets[1], &p.sets[2]];
    assert!(certify_ek_span(t, &q(3, 4), 0, None, &[], &EkOptions::default()).is_err());
    assert!(certify_ek_span(t, &BigRational::zero(), 0, None, &[], &EkOptions::default()).is_err());
}

#[test]
fn fermat_squares_pass_the_quadratic_sg_check() {
    let squares: Vec<QuadraticForm> = fermat_lines().iter().map(QuadraticForm::square).collect();
    let r = check_quadratic_sg(&squares, Budget::default(), 0).unwrap();
    assert!(r.hypothesis_holds, "{:?}", r.missing_pairs);
    assert!(r.undetermined_pairs.is_empty());
    assert_eq!(r.pairs.len(), 66);
    assert!(r.span_dim <= 6);
    assert!(r.pairs.iter().all(|p| p.power == Some(2)));
}

#[test]
fn intro_forms_fail_the_quadratic_sg_check() {
    let x = |i| LinearForm::var(4, i);
    let p = QuadraticForm::product;
    let forms = vec![
        p(&x(0), &x(1)).add(&p(&x(2), &x(3))),
        p(&x(0), &x(1)).sub(&p(&x(2), &x(3))),
        p(&x(0), &x(3)).add(&p(&x(1), &x(1))),
        p(&x(1), &x(2)).add(&p(&x(0), &x(0))),
    ];
    let r = check_quadratic_sg(&forms, Budget::default(), 0).unwrap();
    assert!(!r.hypothesis_holds);
    assert!(r.missing_pairs.contains(&((0, 0), (0, 1))));
}

#[test]
fn span_closed_family_is_all_span() {
    let mut r = seeded(3);
    let base: Vec<QuadraticForm> = (0..2).map(|_| quadsg::rng::random_quadratic(&mut r, 4, 3)).collect();
    let forms: Vec<QuadraticForm> = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1)]
        .iter()
        .map(|&(a, b)| base[0].combine(&Scalar::from_int(a), &base[1], &Scalar::from_int(b)))
        .collect();
    let rep = check_quadratic_sg(&forms, Budget::default(), 1).unwrap();
    assert!(rep.hypothesis_holds);
    assert_eq!(rep.span_dim, 2);
    assert_eq!(rep.case_census.span, rep.pairs.len());
}

#[test]
fn colored_family_passes_and_omission_is_reported() {
    let sets = colored_quadratic_family(4, 2).unwrap();
    let r = check_quadratic_ek([&sets[0], &sets[1], &sets[2]], Budget::default(), 0).unwrap();
    assert!(r.hypothesis_holds);
    assert_eq!(r.span_dim, 3);
    assert_eq!(r.pairs.len(), 48);

    let t3: Vec<QuadraticForm> = sets[2][1..].to_vec();
    let r = check_quadratic_ek([&sets[0], &sets[1], &t3], Budget::default(), 0).unwrap();
    assert!(!r.hypothesis_holds);
    assert!(!r.missing_pairs.is_empty());
    for (a, b) in &r.missing_pairs {
        assert_eq!((a.0, b.0), (0, 1));
    }
}

#[test]
fn ek_squares_of_three_lines() {
    let x = LinearForm::var(3, 0);
    let y = LinearForm::var(3, 1);
    let sq = QuadraticForm::square;
    let r = check_quadratic_ek([&[sq(&x)], &[sq(&y)], &[sq(&x.add(&y))]], Budget::default(), 0).unwrap();
    assert!(r.hypothesis_holds);
    assert_eq!(r.span_dim, 3);
}

#[test]
fn pencil_families_live_in_four_dimensions() {
    for seed in 0..10 {
        let f = gen_pencil_family(4 + (seed as usize % 4), 3, seed).unwrap();
        let (forms, rank) = pencil_family_forms(&f).unwrap();
        assert_eq!(forms.len(), 2 * f.members.len());
        assert!(rank <= 4, "seed {seed}: rank {rank}");
    }
}

#[test]
fn two_projections_reconstruct_family_members() {
    let n = 7;
    let mut r = seeded(17);
    let v: Vec<LinearForm> = loop {
        let v: Vec<LinearForm> = (0..4).map(|_| random_linear_form(&mut r, n, 4)).collect();
        if forms_rank(&v) == 4 {
            break v;
        }
    };
    let in_v =
        |r: &mut _| v.iter().fold(LinearForm::zero(n), |acc, b| acc.add(&b.scale(&quadsg::rng::small_int(r, 3))));
    let passes = [random_projection(&v, n, 100).unwrap(), random_projection(&v, n, 200).unwrap()];
    for _ in 0..8 {
        let (a, a2) = (in_v(&mut r), in_v(&mut r));
        let (l, l2) = (random_linear_form(&mut r, n, 4), random_linear_form(&mut r, n, 4));
        let f = QuadraticForm::product(&a, &l).add(&QuadraticForm::product(&a2, &l2));
        let mut span = v.clone();
        for t in &passes {
            let img = t.apply_form(&f);
            // T(F) = z·(residue + c·z)
            for i in 0..n {
                for j in 0..n {
                    assert!(img.gram()[(i, j)].is_zero());
                }
            }
            let residue: Vec<Scalar> = (0..n).map(|c| &img.gram()[(c, t.z)] * &Scalar::from_int(2)).collect();
            span.push(LinearForm::new(residue));
        }
        let grad = f.gradient_span().unwrap();
        let mut all = span.clone();
        all.extend(grad);
        assert_eq!(forms_rank(&all), forms_rank(&span));
    }
}
