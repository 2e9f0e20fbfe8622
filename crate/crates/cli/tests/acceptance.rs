//! Acceptance suite: one PASS/FAIL line per criterion, with pinned
//! instance counts, seeds and runtime limits. Exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use quadsg::configurations::{
    certify_ek_span, check_delta_ek, check_delta_sg, check_quadratic_ek, check_quadratic_sg, colored_quadratic_family,
    fermat_lines, gen_pencil_family, pencil_family_forms, planted_ek, three_line_family, EkOptions, Regime,
    EK_CONSTANT,
};
use quadsg::membership::{falsify_on_plane, ideal_membership_power, Plane, PlaneOutcome};
use quadsg::quadratic::{quad_resultant, Representation};
use quadsg::rng::{random_linear_form, random_product_sum, random_quadratic, random_vector, seeded};
use quadsg::structure::gen_case;
use quadsg::{classify, radical_member, Budget, LinearForm, MultiPoly, QuadraticForm, Scalar};

const SEED: u64 = 20_240_601;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn prod(a: &LinearForm, b: &LinearForm) -> QuadraticForm {
    QuadraticForm::product(a, b)
}

fn crit1() -> Outcome {
    let v = |i| LinearForm::var(4, i);
    let (x, y, z, w) = (v(0), v(1), v(2), v(3));
    let q1 = prod(&x, &y).add(&prod(&z, &w));
    let q2 = prod(&x, &y).sub(&prod(&z, &w));
    let (q3, q4) = (prod(&x, &w).to_poly(), prod(&y, &z).to_poly());
    let b = Budget::default();
    let p = q3.mul(&q4);
    let m = radical_member(&p, &q1, &q2, b, SEED).unwrap();
    if !matches!(m, quadsg::MembershipVerdict::Member { k: 1, .. }) || !m.verify(&p, &q1, &q2) {
        return fail(format!("Q3*Q4: {}", m.label()));
    }
    for (name, q) in [("Q3", &q3), ("Q4", &q4)] {
        let r = radical_member(q, &q1, &q2, b, SEED).unwrap();
        if !r.is_non_member() || !r.verify(q, &q1, &q2) {
            return fail(format!("{name}: {}", r.label()));
        }
    }
    pass("Q3*Q4 member with k=1 (certificate re-expands), Q3 and Q4 non-members")
}

fn crit2() -> Outcome {
    let mut r = seeded(SEED ^ 2);
    for i in 0..100 {
        let n = 2 + i % 5;
        let t = n + 1;
        let rest: Vec<usize> = (1..t).collect();
        let up = |p: &MultiPoly| p.embed(t, &rest);
        let qp = up(&random_quadratic(&mut r, n, 5).to_poly());
        let b2 = up(&random_linear_form(&mut r, n, 5).to_poly());
        let a = up(&random_quadratic(&mut r, n, 5).to_poly());
        let x0 = MultiPoly::var(t, 0);
        let q1 = x0.mul(&x0).add(&qp);
        let q2 = x0.mul(&b2).sub(&a);
        let res = quad_resultant(&q1, &q2, 0).unwrap();
        if res != a.mul(&a).add(&b2.mul(&b2).mul(&qp)) {
            return fail(format!("pair {i} (n = {t}) differs"));
        }
    }
    pass("100/100 normal-form pairs with n in 3..=6 satisfy Res = A^2 + b2^2 Q1'")
}

fn crit3() -> Outcome {
    let labels = ["Span", "PencilSquare", "Codim2"];
    let mut hits = [0; 3];
    for case in 1..=3u8 {
        for s in 0..100u64 {
            let n = 4 + (s % 3) as usize;
            let inst = gen_case(case, n, SEED + s).unwrap();
            let c = classify(&inst.q, &inst.q1, &inst.q2, Budget::default(), SEED + s).unwrap();
            if let Some(w) = c.witnesses.iter().find(|w| !w.verify(&inst.q, &inst.q1, &inst.q2)) {
                return fail(format!("case {case} seed {s}: {} witness fails to verify", w.label()));
            }
            if c.has(labels[case as usize - 1]) {
                hits[case as usize - 1] += 1;
            }
        }
    }
    let detail =
        format!("planted case found: Span {}/100, PencilSquare {}/100, Codim2 {}/100", hits[0], hits[1], hits[2]);
    if hits == [100; 3] {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn planted_non_member(seed: u64) -> (MultiPoly, QuadraticForm, QuadraticForm) {
    let mut r = seeded(seed);
    let n = 4;
    let p = loop {
        let p = random_vector(&mut r, n, 3);
        if p.iter().any(|c| !c.is_zero()) {
            break p;
        }
    };
    let mut vanish_at_p = || loop {
        let q = random_quadratic(&mut r, n, 3);
        let l = random_linear_form(&mut r, n, 3);
        let lp = l.eval(&p);
        if !lp.is_zero() {
            let c = &q.eval(&p) / &(&lp * &lp);
            break q.sub(&QuadraticForm::square(&l).scale(&c));
        }
    };
    let (q1, q2) = (vanish_at_p(), vanish_at_p());
    let q = loop {
        let q = random_quadratic(&mut r, n, 3);
        if !q.eval(&p).is_zero() {
            break q;
        }
    };
    (q.to_poly(), q1, q2)
}

fn crit4() -> Outcome {
    let budget = Budget::default();
    let mut r = seeded(SEED ^ 4);
    let (mut members, mut non_members, mut unknown, mut rejected) = (0, 0, 0, 0);
    for i in 0..1000u64 {
        // a quarter each: random, span members, pencil-square plants, codim-2 plants
        let (q, q1, q2) = match i % 4 {
            0 => (random_quadratic(&mut r, 4, 3), random_quadratic(&mut r, 4, 3), random_quadratic(&mut r, 4, 3)),
            1 => {
                let (q1, q2) = (random_quadratic(&mut r, 4, 3), random_quadratic(&mut r, 4, 3));
                (q1.combine(&Scalar::from_int(2), &q2, &Scalar::from_int(-3)), q1, q2)
            }
            c => {
                let inst = gen_case(c as u8, 4, SEED + i).unwrap();
                (inst.q, inst.q1, inst.q2)
            }
        };
        let qp = q.to_poly();
        let v = match radical_member(&qp, &q1, &q2, budget, SEED + i) {
            Ok(v) => v,
            Err(_) => {
                rejected += 1;
                continue;
            }
        };
        if !v.verify(&qp, &q1, &q2) {
            return fail(format!("triple {i}: {} certificate does not verify", v.label()));
        }
        match &v {
            quadsg::MembershipVerdict::Member { .. } => {
                members += 1;
                for _ in 0..10 {
                    let plane = Plane::random(&mut r, 4);
                    if matches!(falsify_on_plane(&qp, &q1, &q2, &plane), PlaneOutcome::Evidence { .. }) {
                        return fail(format!("triple {i}: Member and plane-falsified"));
                    }
                }
            }
            quadsg::MembershipVerdict::NonMember(_) => {
                non_members += 1;
                if ideal_membership_power(&qp, &q1, &q2, 1).is_some() {
                    return fail(format!("triple {i}: NonMember but Q lies in the ideal"));
                }
            }
            quadsg::MembershipVerdict::Unknown { .. } => unknown += 1,
        }
    }
    for s in 0..100 {
        let (q, q1, q2) = planted_non_member(SEED + 10_000 + s);
        let v = radical_member(&q, &q1, &q2, budget, s).unwrap();
        if !v.is_non_member() || !v.verify(&q, &q1, &q2) {
            return fail(format!("constructed non-member {s}: {}", v.label()));
        }
    }
    pass(format!(
        "1000 triples ({members} Member, {non_members} NonMember, {unknown} Unknown, {rejected} rejected as dependent), \
         no contradictions; 100/100 constructed non-members falsified"
    ))
}

fn crit5() -> Outcome {
    let mut r = seeded(SEED ^ 5);
    let mut checked = 0;
    while checked < 200 {
        let n = 2 + checked % 3;
        let t = if 4 <= n + 1 && checked % 2 == 0 { 2 } else { 1 };
        let q = random_product_sum(&mut r, n, t, 4);
        if q.is_zero() {
            continue;
        }
        checked += 1;
        let (rank, rs) = (q.rank(), q.rank_s());
        if rs != rank.div_ceil(2) || 2 * (rs - 1) >= rank {
            return fail(format!("instance {checked}: rank {rank}, rank_s {rs}"));
        }
        match q.min_representation() {
            Representation::Terms(ts) => {
                let back = ts.iter().fold(QuadraticForm::zero(n), |acc, (a, b)| acc.add(&prod(a, b)));
                if ts.len() != rs || back != q {
                    return fail(format!(
                        "instance {checked}: representation with {} terms does not re-expand",
                        ts.len()
                    ));
                }
            }
            Representation::NeedsExtension { .. } => {
                return fail(format!("instance {checked}: no representation over Q(i)"));
            }
        }
    }
    let mut declined = 0;
    for i in 0..200 {
        let q = random_quadratic(&mut r, 2 + i % 3, 4);
        if !q.is_zero() && matches!(q.min_representation(), Representation::NeedsExtension { .. }) {
            declined += 1;
        }
    }
    pass(format!(
        "200/200 product sums: rank_s = ceil(rank/2), representation re-expands, 2(rank_s - 1) < rank; \
         (info: {declined}/200 unrestricted random forms need an extension of Q(i))"
    ))
}

fn det3(a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> Scalar {
    let m = |i: usize, j: usize, k: usize| &(&a[i] * &b[j]) * &c[k];
    &(&(&m(0, 1, 2) - &m(0, 2, 1)) - &(&m(1, 0, 2) - &m(1, 2, 0))) + &(&m(2, 0, 1) - &m(2, 1, 0))
}

fn crit6() -> Outcome {
    let ps = three_line_family(20);
    let pts = ps.points();
    let m = pts.len();
    let min = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i && (0..m).any(|k| k != i && k != j && det3(&pts[i], &pts[j], &pts[k]).is_zero()))
                .count()
        })
        .min()
        .unwrap();
    let oracle = BigRational::new(BigInt::from(min), BigInt::from(m));
    let r = check_delta_sg(&ps).unwrap();
    let bound = BigRational::from_integer(BigInt::from(r.dim)) * &r.delta_hat <= BigRational::from_integer(12.into());
    let detail = format!("60 points: delta_hat = {} (oracle {oracle}), dim {} <= 12/delta_hat", r.delta_hat, r.dim);
    if m == 60 && r.delta_hat == oracle && bound {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn ek_case(sizes: [usize; 3], planes: usize, want: Regime) -> Outcome {
    let p = planted_ek(sizes, planes, 20, SEED).unwrap();
    let delta = BigRational::new(1.into(), 4.into());
    let t = [&p.sets[0], &p.sets[1], &p.sets[2]];
    let actual = check_delta_ek(t).unwrap();
    if actual < delta {
        return fail(format!("planted family is only {actual}-EK"));
    }
    let cert = certify_ek_span(t, &delta, SEED, None, &[], &EkOptions::default()).unwrap();
    let bound = EK_CONSTANT * 64;
    let detail = format!(
        "{sizes:?} on {planes} planes: {:?}, |I| = {}, bound C/delta^3 = {bound}, span dim {}, fallback {}",
        cert.regime,
        cert.spanning_set.len(),
        cert.span_dim,
        cert.fallback_extensions
    );
    let ok = cert.verified
        && cert.regime == want
        && cert.span_dim == p.ambient_dim
        && cert.spanning_set.len() as u64 <= bound
        && cert.fallback_extensions == 0;
    if ok {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn crit8() -> Outcome {
    let squares: Vec<QuadraticForm> = fermat_lines().iter().map(QuadraticForm::square).collect();
    let r = check_quadratic_sg(&squares, Budget::default(), SEED).unwrap();
    if !r.hypothesis_holds || r.span_dim > 6 {
        return fail(format!("squares: holds {}, span_dim {}", r.hypothesis_holds, r.span_dim));
    }
    let sets = colored_quadratic_family(4, SEED).unwrap();
    let c = check_quadratic_ek([&sets[0], &sets[1], &sets[2]], Budget::default(), SEED).unwrap();
    if !c.hypothesis_holds || c.span_dim != 3 {
        return fail(format!("colored: holds {}, span_dim {}", c.hypothesis_holds, c.span_dim));
    }
    pass(format!(
        "12 squared lines: 66/66 pairs witnessed, span_dim {}; colored family: {}/{} pairs, span_dim {} = plant bound 3",
        r.span_dim,
        c.pairs.iter().filter(|p| p.witness.is_some()).count(),
        c.pairs.len(),
        c.span_dim
    ))
}

fn crit9() -> Outcome {
    let mut worst = 0;
    for s in 0..50u64 {
        let f = gen_pencil_family(4 + (s % 5) as usize, 3, SEED + s).unwrap();
        let (_, rank) = pencil_family_forms(&f).unwrap();
        worst = worst.max(rank);
        if rank > 4 {
            return fail(format!("family {s}: rank {rank}"));
        }
    }
    pass(format!("50/50 families, max rank of {{l_i, b_i}} = {worst}"))
}

fn crit10() -> Outcome {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let planted = dir.join("acceptance-planted.json");
    let case3 = dir.join("acceptance-case3.json");
    let p = |x: &std::path::Path| x.to_str().unwrap().to_string();
    let gens: Vec<Vec<String>> = vec![
        vec!["gen", "planted-ek", "--sizes", "300,40,40", "--n", "12", "--seed", "11", "--out", &p(&planted)]
            .into_iter()
            .map(String::from)
            .collect(),
        vec!["gen", "case", "--case", "3", "--seed", "7", "--out", &p(&case3)].into_iter().map(String::from).collect(),
    ];
    for g in &gens {
        let o = quadsg_cli::run_args(std::iter::once("quadsg".to_string()).chain(g.iter().cloned()));
        std::fs::write(o.out.as_ref().unwrap(), o.output.unwrap()).unwrap();
    }
    let runs: Vec<Vec<String>> = [
        vec!["member", "--q", "Q3", "--gens", "Q1,Q2", "fixture:intro", "--seed", "5"],
        vec!["member", "--q", "Q3*Q4", "--gens", "Q1,Q2", "fixture:intro"],
        vec!["classify", "--q", "Q", "--gens", "Q1,Q2", &p(&case3)],
        vec!["certify-ek", "--delta", "1/4", &p(&planted), "--seed", "3"],
        vec!["check-ek", &p(&planted)],
        vec!["gen", "colored", "--seed", "2"],
        vec!["gen", "pencil", "--seed", "2"],
    ]
    .iter()
    .map(|v| v.iter().map(|s| s.to_string()).collect())
    .collect();
    for args in &runs {
        let go = || quadsg_cli::run_args(std::iter::once("quadsg".to_string()).chain(args.iter().cloned()));
        let (a, b) = (go(), go());
        if a.code != 0 || a.output.is_none() || a != b {
            return fail(format!("`{}` differs between runs or failed", args.join(" ")));
        }
    }
    let c1 = {
        let p = planted_ek([300, 40, 40], 4, 12, 1).unwrap();
        let d = BigRational::new(1.into(), 4.into());
        let t = [&p.sets[0], &p.sets[1], &p.sets[2]];
        (
            certify_ek_span(t, &d, 9, None, &[], &EkOptions::default()).unwrap(),
            certify_ek_span(t, &d, 9, None, &[], &EkOptions::default()).unwrap(),
        )
    };
    if c1.0 != c1.1 {
        return fail("certificate differs between runs");
    }
    pass(format!("{} CLI reports and a library certificate byte-identical across two runs", runs.len()))
}

/// Criterion number, name, runtime limit in seconds, check.
type Criterion = (u32, &'static str, u64, Box<dyn Fn() -> Outcome>);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (1, "intro fixture", 1, Box::new(crit1)),
        (2, "resultant normal form", 5, Box::new(crit2)),
        (3, "structure completeness", 60, Box::new(crit3)),
        (4, "membership soundness", 120, Box::new(crit4)),
        (5, "rank_s consistency", 60, Box::new(crit5)),
        (6, "robust SG checker", 60, Box::new(crit6)),
        (7, "EK certification, balanced", 60, Box::new(|| ek_case([1000, 100, 100], 4, Regime::Balanced))),
        (7, "EK certification, unbalanced", 60, Box::new(|| ek_case([1000, 40, 9], 3, Regime::Unbalanced))),
        (8, "quadratic SG/EK pipelines", 120, Box::new(crit8)),
        (9, "pencil families", 60, Box::new(crit9)),
        (10, "determinism", 120, Box::new(crit10)),
    ];
    let mut failed = 0;
    for (id, name, limit, f) in &criteria {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*limit);
        let ok = out.ok && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{id:>2}] {name}: {} ({:.2}s, limit {limit}s{})",
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            if in_time { "" } else { ", exceeded" }
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
