//! The three-case structure theorem for `Q ∈ √(Q₁, Q₂)`:
//! 1. `Q ∈ span{Q₁, Q₂}`;
//! 2. some nonzero `αQ₁ + βQ₂` is a square of a linear form;
//! 3. there are independent linear forms `ℓ₁, ℓ₂` with `Q, Q₁, Q₂ ∈ (ℓ₁, ℓ₂)`.

use num_traits::{One, Zero};

use crate::error::{precondition, Error, Result};
use crate::matrix::{span_basis, vectors_rank, ExactMatrix};
use crate::membership::{radical_member, Budget, MembershipVerdict};
use crate::poly::MultiPoly;
use crate::quadratic::{forms_rank, quad_resultant, restrict_mod_span, LinearForm, QuadraticForm};
use crate::rng;
use crate::scalar::Scalar;
use crate::univariate::{uni_gcd, ScalarPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum PencilSquare {
    /// `α·Q₁ + β·Q₂ = c·ℓ²`.
    Explicit { alpha: Scalar, beta: Scalar, c: Scalar, l: LinearForm },
    /// `α·Q₁ + Q₂` has rank ≤ 1 exactly at the roots of `poly(α)`, none of
    /// which lies in ℚ(i).
    Algebraic { poly: ScalarPoly },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseWitness {
    Span { alpha: Scalar, beta: Scalar },
    PencilSquare(PencilSquare),
    Codim2 { l1: LinearForm, l2: LinearForm },
}

impl CaseWitness {
    pub fn label(&self) -> &'static str {
        match self {
            CaseWitness::Span { .. } => "Span",
            CaseWitness::PencilSquare(_) => "PencilSquare",
            CaseWitness::Codim2 { .. } => "Codim2",
        }
    }

    /// Exact re-verification of the witness.
    pub fn verify(&self, q: &QuadraticForm, q1: &QuadraticForm, q2: &QuadraticForm) -> bool {
        match self {
            CaseWitness::Span { alpha, beta } => q.sub(&q1.combine(alpha, q2, beta)).is_zero(),
            CaseWitness::PencilSquare(PencilSquare::Explicit { alpha, beta, c, l }) => {
                !(alpha.is_zero() && beta.is_zero())
                    && q1.combine(alpha, q2, beta) == QuadraticForm::square(l).scale(c)
                    && q1.combine(alpha, q2, beta).rank() <= 1
            }
            CaseWitness::PencilSquare(PencilSquare::Algebraic { poly }) => {
                !poly.is_constant() && pencil_minors(q1, q2).iter().all(|m| m.div_rem(poly).1.is_zero())
            }
            CaseWitness::Codim2 { l1, l2 } => verify_case3(q, q1, q2, l1, l2).unwrap_or(false),
        }
    }
}

fn check_independent(q1: &QuadraticForm, q2: &QuadraticForm) -> Result<()> {
    if q1.nvars() != q2.nvars() {
        return Err(Error::DimensionMismatch { expected: q1.nvars(), got: q2.nvars() });
    }
    let c1 = q1.coefficients();
    if vectors_rank(&[c1.clone(), q2.coefficients()], c1.len()) < 2 {
        return precondition("Q1 and Q2 are linearly dependent");
    }
    Ok(())
}

/// `(α, β)` with `Q = αQ₁ + βQ₂`, if any.
pub fn span_case(q: &QuadraticForm, q1: &QuadraticForm, q2: &QuadraticForm) -> Result<Option<(Scalar, Scalar)>> {
    check_independent(q1, q2)?;
    if q.nvars() != q1.nvars() {
        return Err(Error::DimensionMismatch { expected: q1.nvars(), got: q.nvars() });
    }
    let m = ExactMatrix::from_rows(vec![q1.coefficients(), q2.coefficients()]).transpose();
    Ok(m.solve(&q.coefficients()).map(|x| (x[0].clone(), x[1].clone())))
}

/// All 2×2 minors of `α·M₁ + M₂` as polynomials in `α`.
fn pencil_minors(q1: &QuadraticForm, q2: &QuadraticForm) -> Vec<ScalarPoly> {
    let n = q1.nvars();
    let (m1, m2) = (q1.gram(), q2.gram());
    let e = |i: usize, j: usize| ScalarPoly::new(vec![m2[(i, j)].clone(), m1[(i, j)].clone()]);
    let mut out = Vec::new();
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..n {
                for l in j + 1..n {
                    let minor = e(i, j).mul(&e(k, l)).sub(&e(i, l).mul(&e(k, j)));
                    if !minor.is_zero() {
                        out.push(minor);
                    }
                }
            }
        }
    }
    out
}

/// Decide whether the pencil `αQ₁ + βQ₂` contains a nonzero member of rank ≤ 1.
pub fn pencil_square(q1: &QuadraticForm, q2: &QuadraticForm) -> Result<Option<PencilSquare>> {
    check_independent(q1, q2)?;
    if let Some((c, l)) = q1.is_square() {
        return Ok(Some(PencilSquare::Explicit { alpha: Scalar::one(), beta: Scalar::zero(), c, l }));
    }
    let minors = pencil_minors(q1, q2);
    let explicit = |alpha: Scalar| {
        let member = q1.combine(&alpha, q2, &Scalar::one());
        let (c, l) = member.is_square().expect("root of the minor gcd gives rank ≤ 1");
        PencilSquare::Explicit { alpha, beta: Scalar::one(), c, l }
    };
    if minors.is_empty() {
        return Ok(Some(explicit(Scalar::zero())));
    }
    let mut g = minors[0].clone();
    for m in &minors[1..] {
        g = uni_gcd(&g, m)?;
        if g.is_constant() {
            return Ok(None);
        }
    }
    let g = g.squarefree();
    if g.is_constant() {
        return Ok(None);
    }
    let mut roots = g.roots_low_degree().unwrap_or_default();
    roots.sort_by(Scalar::canonical_cmp);
    Ok(Some(match roots.into_iter().next() {
        Some(alpha) => explicit(alpha),
        None => PencilSquare::Algebraic { poly: g },
    }))
}

/// True iff `Q, Q₁, Q₂` all vanish on `{ℓ₁ = ℓ₂ = 0}`.
pub fn verify_case3(
    q: &QuadraticForm,
    q1: &QuadraticForm,
    q2: &QuadraticForm,
    l1: &LinearForm,
    l2: &LinearForm,
) -> Result<bool> {
    let pair = [l1.clone(), l2.clone()];
    for f in [q, q1, q2] {
        if !restrict_mod_span(&f.to_poly(), &pair)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Case3Search {
    Found(LinearForm, LinearForm),
    NotFound,
    /// No witness over ℚ(i) was found, but one might exist over an extension.
    Unknown(String),
}

/// Sound search for a case-3 witness. Any returned pair passes [`verify_case3`].
pub fn case3_witness_search(q: &QuadraticForm, q1: &QuadraticForm, q2: &QuadraticForm) -> Result<Case3Search> {
    let n = q1.nvars();
    if q2.nvars() != n || q.nvars() != n {
        return precondition("forms must share the number of variables");
    }
    if n < 2 {
        return Ok(Case3Search::NotFound);
    }
    let forms: Vec<QuadraticForm> = [q, q1, q2].into_iter().filter(|f| !f.is_zero()).cloned().collect();
    if forms.is_empty() {
        return Ok(Case3Search::Found(LinearForm::var(n, 0), LinearForm::var(n, 1)));
    }
    let ranks: Vec<usize> = forms.iter().map(QuadraticForm::rank).collect();
    if ranks.iter().any(|&r| r > 4) {
        return Ok(Case3Search::NotFound);
    }
    let mut search = Search::default();
    if let Some(i) = ranks.iter().position(|&r| r <= 2) {
        factor_branch(&forms[i], &forms, &mut search)?;
    } else {
        kernel_branch(&forms, &mut search);
    }
    let mut cands: Vec<Vec<LinearForm>> = search.candidates.iter().filter_map(|c| canonical_pair(c)).collect();
    cands.sort_by(|a, b| cmp_forms(a, b));
    cands.dedup();
    for c in cands {
        if verify_case3(q, q1, q2, &c[0], &c[1])? {
            return Ok(Case3Search::Found(c[0].clone(), c[1].clone()));
        }
    }
    Ok(match search.unknown {
        Some(reason) => Case3Search::Unknown(reason),
        None => Case3Search::NotFound,
    })
}

#[derive(Default)]
struct Search {
    candidates: Vec<Vec<LinearForm>>,
    unknown: Option<String>,
}

impl Search {
    fn unknown(&mut self, why: &str) {
        if self.unknown.is_none() {
            self.unknown = Some(why.to_string());
        }
    }
}

fn cmp_forms(a: &[LinearForm], b: &[LinearForm]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        for (s, t) in x.coeffs().iter().zip(y.coeffs()) {
            let o = s.canonical_cmp(t);
            if o.is_ne() {
                return o;
            }
        }
    }
    a.len().cmp(&b.len())
}

/// RREF basis of a 2-dimensional span, `None` if the span is not 2-dimensional.
fn canonical_pair(forms: &[LinearForm]) -> Option<Vec<LinearForm>> {
    let n = forms.first()?.nvars();
    let b = span_basis(&forms.iter().map(|l| l.coeffs().to_vec()).collect::<Vec<_>>(), n);
    (b.len() == 2).then(|| b.into_iter().map(LinearForm::new).collect())
}

enum CommonFactor {
    Any,
    Candidates(Vec<LinearForm>),
    Unknown,
}

/// Linear forms `ℓ` with every form in the ideal `(ℓ)`.
fn common_linear_factor(forms: &[QuadraticForm]) -> CommonFactor {
    let Some(first) = forms.iter().find(|f| !f.is_zero()) else { return CommonFactor::Any };
    if first.rank() > 2 {
        return CommonFactor::Candidates(Vec::new());
    }
    let Some((a, b)) = first.factor() else { return CommonFactor::Unknown };
    let mut out = Vec::new();
    for l in [a, b] {
        let divides =
            forms.iter().all(|f| restrict_mod_span(&f.to_poly(), std::slice::from_ref(&l)).is_ok_and(|r| r.is_zero()));
        if divides && !out.iter().any(|m: &LinearForm| forms_rank(&[m.clone(), l.clone()]) == 1) {
            out.push(l);
        }
    }
    CommonFactor::Candidates(out)
}

/// Some form `F` has gram rank ≤ 2: since `(ℓ₁, ℓ₂)` is prime, a factor of `F`
/// lies in the witness span.
fn factor_branch(f: &QuadraticForm, forms: &[QuadraticForm], s: &mut Search) -> Result<()> {
    let n = f.nvars();
    let firsts = match f.factor() {
        Some((a, b)) => {
            if forms_rank(&[a.clone(), b.clone()]) == 1 {
                vec![a]
            } else {
                vec![a, b]
            }
        }
        None => {
            // conjugate factors: the only rational span containing one is the gradient span
            s.candidates.push(f.gradient_span_unchecked());
            s.unknown("factors of a rank-2 form need a quadratic extension");
            return Ok(());
        }
    };
    for a in firsts {
        let restricted = forms
            .iter()
            .map(|g| QuadraticForm::from_poly(&restrict_mod_span(&g.to_poly(), std::slice::from_ref(&a))?))
            .collect::<Result<Vec<_>>>()?;
        match common_linear_factor(&restricted) {
            CommonFactor::Any => {
                let j = (0..n).find(|&j| forms_rank(&[a.clone(), LinearForm::var(n, j)]) == 2).unwrap();
                s.candidates.push(vec![a.clone(), LinearForm::var(n, j)]);
            }
            CommonFactor::Candidates(ls) => {
                for l in ls {
                    s.candidates.push(vec![a.clone(), l]);
                }
            }
            CommonFactor::Unknown => s.unknown("restricted forms factor only over an extension"),
        }
    }
    Ok(())
}

fn vecs_to_matrix(vs: &[Vec<Scalar>], cols: usize) -> ExactMatrix {
    ExactMatrix::from_row_slices(vs, cols)
}

/// Columns as a matrix: `n × k` from `k` vectors of length `n`.
fn columns(vs: &[Vec<Scalar>], n: usize) -> ExactMatrix {
    vecs_to_matrix(vs, n).transpose()
}

/// Null space of the stacked row constraints in dimension `d`.
fn solve_space(rows: &[Vec<Scalar>], d: usize) -> Vec<Vec<Scalar>> {
    if rows.is_empty() {
        return ExactMatrix::identity(d).row_vecs();
    }
    vecs_to_matrix(rows, d).nullspace()
}

/// Every nonzero form has gram rank 3 or 4. The radicals lie inside the
/// isotropic subspace `U = {ℓ₁ = ℓ₂ = 0}`, which pins the search to a
/// complement of dimension at most 4.
fn kernel_branch(forms: &[QuadraticForm], s: &mut Search) {
    let n = forms[0].nvars();
    let mut kvecs = Vec::new();
    for f in forms {
        kvecs.extend(f.gram().nullspace());
    }
    let kb = span_basis(&kvecs, n);
    for f in forms {
        for a in &kb {
            for b in &kb {
                if !f.bilinear(a, b).is_zero() {
                    return;
                }
            }
        }
    }
    let lk = span_basis(&forms.iter().flat_map(|f| kb.iter().map(|k| f.gram().mul_vec(k))).collect::<Vec<_>>(), n);
    if lk.len() > 2 {
        return;
    }
    let to_l = |u_basis: &[Vec<Scalar>]| -> Vec<LinearForm> {
        solve_space(u_basis, n).into_iter().map(LinearForm::new).collect()
    };
    if lk.len() == 2 {
        s.candidates.push(lk.into_iter().map(LinearForm::new).collect());
        return;
    }
    let d = n - kb.len();
    if !(2..=4).contains(&d) {
        return;
    }
    if d == 2 {
        s.candidates.push(to_l(&kb));
        return;
    }
    // coordinate complement C of K
    let mut cb: Vec<Vec<Scalar>> = Vec::new();
    let mut acc = kb.clone();
    for j in 0..n {
        let e = LinearForm::var(n, j).into_coeffs();
        let mut trial = acc.clone();
        trial.push(e.clone());
        if vectors_rank(&trial, n) == trial.len() {
            acc = trial;
            cb.push(e);
        }
    }
    let p = columns(&cb, n);
    let forms_c: Vec<QuadraticForm> = forms.iter().map(|f| f.compose(&p)).collect();
    let lk_c: Vec<Vec<Scalar>> = lk.iter().map(|l| p.transpose().mul_vec(l)).collect();
    let u_c = if d == 3 { isotropic_points(&forms_c, &lk_c, s) } else { isotropic_planes(&forms_c, &lk_c, s) };
    for uc in u_c {
        let mut u = kb.clone();
        u.extend(uc.iter().map(|x| p.mul_vec(x)));
        s.candidates.push(to_l(&u));
    }
}

fn charpoly(t: &ExactMatrix) -> ScalarPoly {
    let d = t.rows();
    let xs: Vec<Scalar> = (0..=d as i64).map(Scalar::from_int).collect();
    let ys: Vec<Scalar> = xs.iter().map(|l| ExactMatrix::identity(d).scale(l).sub(t).det()).collect();
    ScalarPoly::interpolate(&xs, &ys)
}

fn poly_at_matrix(p: &ScalarPoly, t: &ExactMatrix) -> ExactMatrix {
    let d = t.rows();
    let mut acc = ExactMatrix::zeros(d, d);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(t).add(&ExactMatrix::identity(d).scale(c));
    }
    acc
}

/// Direction vectors `(s, t)` on which a binary form vanishes, when rational.
fn binary_roots(g: &QuadraticForm) -> Option<Vec<Vec<Scalar>>> {
    if g.is_zero() {
        return Some(vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), Scalar::one()]]);
    }
    let (a, b) = g.factor()?;
    let dir = |l: &LinearForm| vec![l.coeffs()[1].clone(), -&l.coeffs()[0]];
    let mut out = vec![dir(&a)];
    if forms_rank(&[a.clone(), b.clone()]) == 2 {
        out.push(dir(&b));
    }
    Some(out)
}

/// Two-dimensional common isotropic subspaces in a 4-dimensional complement.
fn isotropic_planes(forms: &[QuadraticForm], lk: &[Vec<Scalar>], s: &mut Search) -> Vec<Vec<Vec<Scalar>>> {
    let d = 4;
    let base = forms.iter().find(|f| f.rank() == d).cloned().or_else(|| {
        (1..=4).find_map(|c| {
            forms
                .iter()
                .enumerate()
                .flat_map(|(i, f)| forms[i + 1..].iter().map(move |g| f.add(&g.scale(&Scalar::from_int(c)))))
                .find(|h| h.rank() == d)
        })
    });
    let Some(base) = base else {
        s.unknown("no nondegenerate member in the restricted pencil");
        return Vec::new();
    };
    let binv = base.gram().inverse().unwrap();
    let mut rows: Vec<Vec<Scalar>> = lk.to_vec();
    let mut operator = None;
    for g in forms {
        let t = binv.mul(g.gram());
        let Some(p) = charpoly(&t).sqrt() else { return Vec::new() };
        rows.extend(poly_at_matrix(&p, &t).row_vecs());
        if operator.is_none() && p.degree() > Some(1) {
            operator = Some((t, p));
        }
    }
    let v = solve_space(&rows, d);
    match v.len() {
        0 | 1 => Vec::new(),
        2 => vec![v],
        3 => {
            let pv = columns(&v, d);
            let restricted: Vec<QuadraticForm> = forms.iter().map(|f| f.compose(&pv)).collect();
            let lifts = |x: &[Scalar]| pv.mul_vec(x);
            match common_linear_factor(&restricted) {
                CommonFactor::Any => vec![vec![v[0].clone(), v[1].clone()]],
                CommonFactor::Candidates(ls) => ls
                    .iter()
                    .map(|l| {
                        ExactMatrix::from_rows(vec![l.coeffs().to_vec()]).nullspace().iter().map(|x| lifts(x)).collect()
                    })
                    .collect(),
                CommonFactor::Unknown => {
                    s.unknown("isotropic plane needs an extension");
                    Vec::new()
                }
            }
        }
        _ => match operator {
            None => base_planes(&base, s),
            Some((t, p)) => eigen_planes(&base, &t, &p, s),
        },
    }
}

/// Maximal isotropic subspaces of a nondegenerate quaternary form.
fn base_planes(base: &QuadraticForm, s: &mut Search) -> Vec<Vec<Vec<Scalar>>> {
    let Some(v) = base.find_isotropic() else {
        s.unknown("no isotropic vector found for the base form");
        return Vec::new();
    };
    let perp = ExactMatrix::from_rows(vec![base.gram().mul_vec(&v)]).nullspace();
    let mut ys = Vec::new();
    for y in perp {
        let mut trial = vec![v.clone()];
        trial.extend(ys.iter().cloned());
        trial.push(y.clone());
        if vectors_rank(&trial, 4) == trial.len() {
            ys.push(y);
        }
    }
    let py = columns(&ys, 4);
    let Some(dirs) = binary_roots(&base.compose(&py)) else {
        s.unknown("isotropic plane needs an extension");
        return Vec::new();
    };
    dirs.iter().map(|dir| vec![v.clone(), py.mul_vec(dir)]).collect()
}

/// `T` has two eigenvalues on a 4-dimensional space with `p(T) = 0`; an
/// invariant isotropic plane splits along the eigenspaces.
fn eigen_planes(base: &QuadraticForm, t: &ExactMatrix, p: &ScalarPoly, s: &mut Search) -> Vec<Vec<Vec<Scalar>>> {
    let roots = match p.roots_low_degree() {
        Some(r) if r.len() == 2 => r,
        _ => {
            s.unknown("eigenvalues outside the base field");
            return Vec::new();
        }
    };
    let mut per_space: Vec<Vec<Vec<Scalar>>> = Vec::new();
    let mut out = Vec::new();
    for mu in &roots {
        let e = t.sub(&ExactMatrix::identity(4).scale(mu)).nullspace();
        if e.len() != 2 {
            s.unknown("unexpected eigenspace dimension");
            return Vec::new();
        }
        let pe = columns(&e, 4);
        let g = base.compose(&pe);
        if g.is_zero() {
            out.push(e.clone());
        }
        match binary_roots(&g) {
            Some(dirs) => per_space.push(dirs.iter().map(|d| pe.mul_vec(d)).collect()),
            None => {
                s.unknown("isotropic line in an eigenspace needs an extension");
                per_space.push(Vec::new());
            }
        }
    }
    for a in &per_space[0] {
        for b in &per_space[1] {
            out.push(vec![a.clone(), b.clone()]);
        }
    }
    out
}

/// Common isotropic vectors of ternary forms, orthogonal to `lk`.
fn isotropic_points(forms: &[QuadraticForm], lk: &[Vec<Scalar>], s: &mut Search) -> Vec<Vec<Vec<Scalar>>> {
    let sb = solve_space(lk, 3);
    let ps = columns(&sb, 3);
    let restricted: Vec<QuadraticForm> = forms.iter().map(|f| f.compose(&ps)).collect();
    let pts = match sb.len() {
        0 => Vec::new(),
        1 => vec![vec![Scalar::one()]],
        2 => common_binary_roots(&restricted, s),
        _ => common_conic_points(&restricted, s),
    };
    pts.iter().map(|x| vec![ps.mul_vec(x)]).collect()
}

fn common_binary_roots(forms: &[QuadraticForm], s: &mut Search) -> Vec<Vec<Scalar>> {
    let Some(first) = forms.iter().find(|f| !f.is_zero()) else {
        return vec![vec![Scalar::one(), Scalar::zero()]];
    };
    match binary_roots(first) {
        Some(dirs) => dirs.into_iter().filter(|d| forms.iter().all(|f| f.eval(d).is_zero())).collect(),
        None => {
            s.unknown("common root of binary forms needs an extension");
            Vec::new()
        }
    }
}

/// Common projective zeros of ternary quadratic forms.
fn common_conic_points(forms: &[QuadraticForm], s: &mut Search) -> Vec<Vec<Scalar>> {
    let nonzero: Vec<&QuadraticForm> = forms.iter().filter(|f| !f.is_zero()).collect();
    let Some(&f) = nonzero.first() else { return vec![vec![Scalar::one(), Scalar::zero(), Scalar::zero()]] };
    let on_all = |x: &Vec<Scalar>| forms.iter().all(|g| g.eval(x).is_zero());
    // a degenerate conic: points lie on one of its lines
    if let Some(h) = nonzero.iter().find(|h| h.rank() <= 2) {
        let Some((a, b)) = h.factor() else {
            s.unknown("degenerate conic splits over an extension");
            return Vec::new();
        };
        let mut out = Vec::new();
        for l in [a, b] {
            let lb = ExactMatrix::from_rows(vec![l.coeffs().to_vec()]).nullspace();
            let pl = columns(&lb, 3);
            let r: Vec<QuadraticForm> = forms.iter().map(|g| g.compose(&pl)).collect();
            out.extend(common_binary_roots(&r, s).iter().map(|x| pl.mul_vec(x)));
        }
        return out;
    }
    let g = nonzero.iter().find(|g| forms_rank_q(f, g) == 2);
    let Some(&g) = g else {
        return match f.find_isotropic() {
            Some(v) => vec![v],
            None => {
                s.unknown("no rational point found on the conic");
                Vec::new()
            }
        };
    };
    let e0 = |c1: i64, c2: i64| vec![Scalar::one(), Scalar::from_int(c1), Scalar::from_int(c2)];
    let shifts = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (-1, 1), (3, 2)];
    let Some(a) = shifts
        .iter()
        .map(|&(c1, c2)| {
            let mut m = ExactMatrix::identity(3);
            for (i, x) in e0(c1, c2).into_iter().enumerate() {
                m[(i, 0)] = x;
            }
            m
        })
        .find(|m| {
            let c = m.column(0);
            !f.eval(&c).is_zero() && !g.eval(&c).is_zero()
        })
    else {
        s.unknown("no admissible coordinate change for the resultant");
        return Vec::new();
    };
    let (fp, gp) = (f.compose(&a).to_poly(), g.compose(&a).to_poly());
    let r = quad_resultant(&fp, &gp, 0).expect("both forms involve x0");
    if r.is_zero() {
        s.unknown("conics share a component");
        return Vec::new();
    }
    let mut dirs: Vec<(Scalar, Scalar)> = Vec::new();
    let one = Scalar::one();
    let dehom =
        ScalarPoly::new((0..=4u16).map(|k| r.coeff(&crate::poly::Monomial::from_exps(vec![0, k, 4 - k]))).collect());
    if dehom.degree() < Some(4) {
        dirs.push((one.clone(), Scalar::zero()));
    }
    match dehom.roots_low_degree() {
        Some(rs) => dirs.extend(rs.into_iter().map(|x1| (x1, one.clone()))),
        None => s.unknown("intersection points of the conics are not all rational"),
    }
    let mut out = Vec::new();
    for (x1, x2) in dirs {
        let uni = |p: &MultiPoly| {
            ScalarPoly::new(
                p.coefficients_in(0).iter().map(|c| c.eval(&[Scalar::zero(), x1.clone(), x2.clone()])).collect(),
            )
        };
        let Ok(h) = uni_gcd(&uni(&fp), &uni(&gp)) else { continue };
        for x0 in h.roots_low_degree().unwrap_or_default() {
            let w = vec![x0, x1.clone(), x2.clone()];
            let pt = a.mul_vec(&w);
            if on_all(&pt) {
                out.push(pt);
            }
        }
    }
    out
}

fn forms_rank_q(a: &QuadraticForm, b: &QuadraticForm) -> usize {
    let c = a.coefficients();
    vectors_rank(&[c.clone(), b.coefficients()], c.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Witnesses in canonical order: Span, PencilSquare, Codim2.
    pub witnesses: Vec<CaseWitness>,
    pub case3: Case3Search,
    /// Set when no case was found, the case-3 search was inconclusive, and
    /// `Q` was nevertheless certified to lie in the radical.
    pub incomplete: bool,
}

impl Classification {
    pub fn labels(&self) -> Vec<&'static str> {
        self.witnesses.iter().map(CaseWitness::label).collect()
    }

    pub fn has(&self, label: &str) -> bool {
        self.labels().contains(&label)
    }
}

/// Run all three detectors.
pub fn classify(
    q: &QuadraticForm,
    q1: &QuadraticForm,
    q2: &QuadraticForm,
    budget: Budget,
    seed: u64,
) -> Result<Classification> {
    let mut witnesses = Vec::new();
    if let Some((alpha, beta)) = span_case(q, q1, q2)? {
        witnesses.push(CaseWitness::Span { alpha, beta });
    }
    if let Some(ps) = pencil_square(q1, q2)? {
        witnesses.push(CaseWitness::PencilSquare(ps));
    }
    let case3 = case3_witness_search(q, q1, q2)?;
    if let Case3Search::Found(l1, l2) = &case3 {
        witnesses.push(CaseWitness::Codim2 { l1: l1.clone(), l2: l2.clone() });
    }
    let mut incomplete = false;
    if witnesses.is_empty() && matches!(case3, Case3Search::Unknown(_)) {
        let verdict = radical_member(&q.to_poly(), q1, q2, budget, seed)?;
        incomplete = matches!(verdict, MembershipVerdict::Member { .. });
    }
    Ok(Classification { witnesses, case3, incomplete })
}

/// What a generated instance was built to satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Plant {
    Span {
        alpha: Scalar,
        beta: Scalar,
    },
    /// `Q₂ = αQ₁ + b²`, `Q = βQ₁ + b·a`.
    Pencil {
        alpha: Scalar,
        beta: Scalar,
        b: LinearForm,
        a: LinearForm,
    },
    Codim2 {
        l1: LinearForm,
        l2: LinearForm,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub q: QuadraticForm,
    pub q1: QuadraticForm,
    pub q2: QuadraticForm,
    pub plant: Plant,
}

fn nonzero_int(r: &mut rng::Prng, bound: i64) -> Scalar {
    loop {
        let c = rng::small_int(r, bound);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Generate an instance of the given case (1, 2 or 3).
pub fn gen_case(case: u8, nvars: usize, seed: u64) -> Result<Instance> {
    if nvars < 4 {
        return precondition("gen_case needs at least 4 variables");
    }
    let mut r = rng::seeded(seed);
    let n = nvars;
    let independent = |a: &QuadraticForm, b: &QuadraticForm| forms_rank_q(a, b) == 2;
    match case {
        1 => loop {
            let q1 = rng::random_quadratic(&mut r, n, 3);
            let q2 = rng::random_quadratic(&mut r, n, 3);
            if !independent(&q1, &q2) {
                continue;
            }
            let (alpha, beta) = (nonzero_int(&mut r, 5), nonzero_int(&mut r, 5));
            let q = q1.combine(&alpha, &q2, &beta);
            return Ok(Instance { q, q1, q2, plant: Plant::Span { alpha, beta } });
        },
        2 => loop {
            let q1 = rng::random_quadratic(&mut r, n, 3);
            let b = rng::random_linear_form(&mut r, n, 3);
            let a = rng::random_linear_form(&mut r, n, 3);
            let (alpha, beta) = (nonzero_int(&mut r, 5), nonzero_int(&mut r, 5));
            let q2 = q1.scale(&alpha).add(&QuadraticForm::square(&b));
            if q1.rank() < 3 || !independent(&q1, &q2) {
                continue;
            }
            let q = q1.scale(&beta).add(&QuadraticForm::product(&b, &a));
            return Ok(Instance { q, q1, q2, plant: Plant::Pencil { alpha, beta, b, a } });
        },
        3 => loop {
            let l1 = rng::random_linear_form(&mut r, n, 3);
            let l2 = rng::random_linear_form(&mut r, n, 3);
            if forms_rank(&[l1.clone(), l2.clone()]) < 2 {
                continue;
            }
            let mut member = || {
                let a = rng::random_linear_form(&mut r, n, 3);
                let b = rng::random_linear_form(&mut r, n, 3);
                QuadraticForm::product(&l1, &a).add(&QuadraticForm::product(&l2, &b))
            };
            let (q, q1, q2) = (member(), member(), member());
            if [&q, &q1, &q2].iter().any(|f| f.rank() < 3) || !independent(&q1, &q2) {
                continue;
            }
            return Ok(Instance { q, q1, q2, plant: Plant::Codim2 { l1, l2 } });
        },
        _ => precondition("case must be 1, 2 or 3"),
    }
}
