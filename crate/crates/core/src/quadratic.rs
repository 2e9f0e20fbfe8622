//! Linear and homogeneous quadratic forms over ℚ(i).
//!
//! A [`QuadraticForm`] is stored as its symmetric gram matrix `M`, so that
//! `q(x) = xᵀ M x`: diagonal entries are the coefficients of `x_i²` and the
//! off-diagonal entries are half the coefficients of `x_i x_j`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{degenerate, precondition, Error, Result};
use crate::matrix::{span_basis, vectors_rank, ExactMatrix};
use crate::poly::{Monomial, MultiPoly};
use crate::rng;
use crate::scalar::Scalar;
use crate::univariate::{poly_det, sylvester_matrix, UniPoly};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coeffs: Vec<Scalar>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        LinearForm { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        LinearForm { coeffs: c.iter().map(|&v| Scalar::from_int(v)).collect() }
    }

    pub fn zero(n: usize) -> Self {
        LinearForm { coeffs: vec![Scalar::zero(); n] }
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut l = Self::zero(n);
        l.coeffs[i] = Scalar::one();
        l
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        self.coeffs.iter().zip(x).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, o: &LinearForm) -> LinearForm {
        LinearForm { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &LinearForm) -> LinearForm {
        LinearForm { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> LinearForm {
        LinearForm { coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    /// Index of the first nonzero coefficient.
    pub fn leading_index(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Rescaled so the first nonzero coefficient is 1, with the scale removed.
    pub fn normalized(&self) -> (Scalar, LinearForm) {
        match self.leading_index() {
            None => (Scalar::zero(), self.clone()),
            Some(i) => {
                let c = self.coeffs[i].clone();
                (c.clone(), self.scale(&c.inv().unwrap()))
            }
        }
    }

    /// `ℓ(A y)` for `x = A y`.
    pub fn compose(&self, a: &ExactMatrix) -> LinearForm {
        LinearForm { coeffs: a.transpose().mul_vec(&self.coeffs) }
    }

    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::affine(&self.coeffs, Scalar::zero())
    }

    /// Read a homogeneous linear polynomial.
    pub fn from_poly(p: &MultiPoly) -> Result<LinearForm> {
        let n = p.nvars();
        if !p.is_zero() && (p.degree() != Some(1) || !p.is_homogeneous()) {
            return precondition("not a homogeneous linear polynomial");
        }
        Ok(LinearForm { coeffs: (0..n).map(|i| p.coeff(&Monomial::var(n, i))).collect() })
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_poly(), f)
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Two linear forms are dependent (one is a multiple of the other, or zero).
pub fn forms_rank(forms: &[LinearForm]) -> usize {
    let n = forms.first().map_or(0, LinearForm::nvars);
    vectors_rank(&forms.iter().map(|l| l.coeffs.clone()).collect::<Vec<_>>(), n)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    gram: ExactMatrix,
}

/// Explicit product representation, or a refusal with the canonical span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    /// `q = Σ a_i·b_i`, with exactly `rank_s(q)` terms.
    Terms(Vec<(LinearForm, LinearForm)>),
    /// A minimal representation was not found over ℚ(i); the gradient span that
    /// would contain it is returned instead.
    NeedsExtension { span: Vec<LinearForm> },
}

impl QuadraticForm {
    pub fn zero(n: usize) -> Self {
        QuadraticForm { gram: ExactMatrix::zeros(n, n) }
    }

    pub fn from_gram(gram: ExactMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return precondition("gram matrix must be square and symmetric");
        }
        Ok(QuadraticForm { gram })
    }

    /// From monomial coefficients, in the ascending grlex order of
    /// [`Monomial::all_of_degree`]`(n, 2)`.
    pub fn from_coefficients(n: usize, c: &[Scalar]) -> Self {
        let monos = Monomial::all_of_degree(n, 2);
        assert_eq!(monos.len(), c.len(), "coefficient count");
        let mut q = Self::zero(n);
        for (m, v) in monos.iter().zip(c) {
            q.add_monomial(m, v);
        }
        q
    }

    fn add_monomial(&mut self, m: &Monomial, v: &Scalar) {
        let idx: Vec<usize> =
            m.exps().iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            self.gram[(i, i)] += v;
        } else {
            let half = v / &Scalar::from_int(2);
            self.gram[(i, j)] += &half;
            self.gram[(j, i)] += &half;
        }
    }

    pub fn from_poly(p: &MultiPoly) -> Result<Self> {
        if !p.is_zero() && (p.degree() != Some(2) || !p.is_homogeneous()) {
            return precondition(format!("not a homogeneous quadratic: {p}"));
        }
        let mut q = Self::zero(p.nvars());
        for (m, c) in p.terms() {
            q.add_monomial(m, c);
        }
        Ok(q)
    }

    pub fn product(a: &LinearForm, b: &LinearForm) -> Self {
        assert_eq!(a.nvars(), b.nvars());
        let n = a.nvars();
        let mut g = ExactMatrix::zeros(n, n);
        let half = Scalar::from_frac(1, 2);
        for i in 0..n {
            for j in 0..n {
                let v = &(&a.coeffs[i] * &b.coeffs[j]) + &(&a.coeffs[j] * &b.coeffs[i]);
                g[(i, j)] = &v * &half;
            }
        }
        QuadraticForm { gram: g }
    }

    pub fn square(l: &LinearForm) -> Self {
        Self::product(l, l)
    }

    pub fn nvars(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    /// Monomial coefficients in ascending grlex order.
    pub fn coefficients(&self) -> Vec<Scalar> {
        Monomial::all_of_degree(self.nvars(), 2)
            .iter()
            .map(|m| {
                let idx: Vec<usize> =
                    m.exps().iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect();
                let v = &self.gram[(idx[0], idx[1])];
                if idx[0] == idx[1] {
                    v.clone()
                } else {
                    v + v
                }
            })
            .collect()
    }

    pub fn to_poly(&self) -> MultiPoly {
        let n = self.nvars();
        MultiPoly::from_terms(
            n,
            Monomial::all_of_degree(n, 2).into_iter().map(|m| m.exps().to_vec()).zip(self.coefficients()),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.gram.is_zero()
    }

    pub fn add(&self, o: &QuadraticForm) -> QuadraticForm {
        QuadraticForm { gram: self.gram.add(&o.gram) }
    }

    pub fn sub(&self, o: &QuadraticForm) -> QuadraticForm {
        QuadraticForm { gram: self.gram.sub(&o.gram) }
    }

    pub fn scale(&self, s: &Scalar) -> QuadraticForm {
        QuadraticForm { gram: self.gram.scale(s) }
    }

    /// `α·self + β·o`.
    pub fn combine(&self, alpha: &Scalar, o: &QuadraticForm, beta: &Scalar) -> QuadraticForm {
        self.scale(alpha).add(&o.scale(beta))
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        self.bilinear(x, x)
    }

    /// Polar form `B(u, v) = uᵀ M v`, so `B(v, v) = q(v)`.
    pub fn bilinear(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let mv = self.gram.mul_vec(v);
        u.iter().zip(&mv).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum()
    }

    /// The linear form `B(v, ·)`.
    pub fn polar(&self, v: &[Scalar]) -> LinearForm {
        LinearForm::new(self.gram.mul_vec(v))
    }

    /// `q(A y)` for `x = A y`; `A` is `n × m` and the result has `m` variables.
    pub fn compose(&self, a: &ExactMatrix) -> QuadraticForm {
        assert_eq!(a.rows(), self.nvars());
        QuadraticForm { gram: a.transpose().mul(&self.gram).mul(a) }
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    /// Minimal number of products of linear forms summing to `q` over an
    /// algebraically closed field: `⌈rank/2⌉`.
    pub fn rank_s(&self) -> usize {
        self.rank().div_ceil(2)
    }

    /// Basis (RREF rows) of the row space of the gram matrix.
    pub fn gradient_span(&self) -> Result<Vec<LinearForm>> {
        if self.is_zero() {
            return degenerate("gradient span of the zero form");
        }
        Ok(self.gradient_span_unchecked())
    }

    pub(crate) fn gradient_span_unchecked(&self) -> Vec<LinearForm> {
        span_basis(&self.gram.row_vecs(), self.nvars()).into_iter().map(LinearForm::new).collect()
    }

    /// `(c, ℓ)` with `q = c·ℓ²` and `ℓ` normalized to leading coefficient 1,
    /// when the gram rank is at most 1. The zero form gives `(0, 0)`.
    pub fn is_square(&self) -> Option<(Scalar, LinearForm)> {
        let n = self.nvars();
        let Some(row) = (0..n).find(|&i| self.gram.row(i).iter().any(|c| !c.is_zero())) else {
            return Some((Scalar::zero(), LinearForm::zero(n)));
        };
        if self.rank() > 1 {
            return None;
        }
        let (_, l) = LinearForm::new(self.gram.row(row).to_vec()).normalized();
        let lead = l.leading_index().unwrap();
        let c = self.gram[(lead, lead)].clone();
        debug_assert!(QuadraticForm::square(&l).scale(&c) == *self);
        Some((c, l))
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        if self.is_zero() {
            return degenerate("irreducibility of the zero form");
        }
        Ok(self.rank() >= 3)
    }

    /// `q = a·b` over ℚ(i) when the gram rank is 1 or 2 and the factors are
    /// rational over ℚ(i). The zero form and rank ≥ 3 give `None`.
    pub fn factor(&self) -> Option<(LinearForm, LinearForm)> {
        let prof = self.gram.rank_profile();
        match prof.rank {
            1 => {
                let (c, l) = self.is_square()?;
                Some((l.scale(&c), l))
            }
            2 => {
                let (p, r) = (prof.pivot_columns[0], prof.pivot_columns[1]);
                let u = LinearForm::new(prof.rref.row(0).to_vec());
                let v = LinearForm::new(prof.rref.row(1).to_vec());
                let alpha = self.gram[(p, p)].clone();
                let beta = self.gram[(p, r)].clone();
                let gamma = self.gram[(r, r)].clone();
                // q = αU² + 2βUV + γV²
                let (a, b) = if alpha.is_zero() {
                    (v.clone(), u.scale(&(&beta + &beta)).add(&v.scale(&gamma)))
                } else {
                    let disc = &(&beta * &beta) - &(&alpha * &gamma);
                    let s = disc.sqrt()?;
                    let r1 = &(&(-&beta) + &s) / &alpha;
                    let r2 = &(&(-&beta) - &s) / &alpha;
                    (u.sub(&v.scale(&r1)).scale(&alpha), u.sub(&v.scale(&r2)))
                };
                debug_assert!(QuadraticForm::product(&a, &b) == *self);
                Some((a, b))
            }
            _ => None,
        }
    }

    /// A vector `v` with `q(v) = 0` and `M v ≠ 0`, by bounded search in the
    /// coordinates of a nonsingular principal block of the gram matrix.
    pub fn find_isotropic(&self) -> Option<Vec<Scalar>> {
        let n = self.nvars();
        let prof = self.gram.rank_profile();
        let s = prof.pivot_columns;
        let r = s.len();
        if r < 2 {
            return None;
        }
        let last = s[r - 1];
        let a = self.gram[(last, last)].clone();
        if a.is_zero() {
            let mut v = vec![Scalar::zero(); n];
            v[last] = Scalar::one();
            return Some(v);
        }
        let free = &s[..r - 1];
        let height: i64 = match r - 1 {
            1 => 1,
            2 => 64,
            3 => 12,
            4 => 6,
            _ => 3,
        };
        for h in 1..=height {
            let mut found = None;
            for_each_shell(free.len(), h, &mut |coords| {
                let mut v = vec![Scalar::zero(); n];
                for (&i, &c) in free.iter().zip(coords) {
                    v[i] = Scalar::from_int(c);
                }
                // q(v + t e_last) = a t² + 2 β t + γ
                let beta = self.polar(&v).coeffs()[last].clone();
                let gamma = self.eval(&v);
                let disc = &(&beta * &beta) - &(&a * &gamma);
                if let Some(root) = disc.sqrt() {
                    v[last] = &(&(-&beta) + &root) / &a;
                    debug_assert!(self.eval(&v).is_zero());
                    found = Some(v);
                    return true;
                }
                false
            });
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Explicit minimal representation `q = Σ a_i b_i` over ℚ(i) where one is
    /// found: hyperbolic planes are split off along isotropic vectors until the
    /// remainder has rank ≤ 2, which is then factored.
    pub fn min_representation(&self) -> Representation {
        let decline = || Representation::NeedsExtension { span: self.gradient_span_unchecked() };
        let mut terms = Vec::new();
        let mut cur = self.clone();
        loop {
            match cur.rank() {
                0 => break,
                1 | 2 => match cur.factor() {
                    Some(ab) => {
                        terms.push(ab);
                        break;
                    }
                    None => return decline(),
                },
                _ => {
                    let Some(v) = cur.find_isotropic() else { return decline() };
                    let a = cur.polar(&v);
                    let j = a.leading_index().expect("isotropic vector outside the radical");
                    let mut w = vec![Scalar::zero(); cur.nvars()];
                    w[j] = a.coeffs()[j].inv().unwrap();
                    let half_qw = &cur.eval(&w) / &Scalar::from_int(2);
                    for (wi, vi) in w.iter_mut().zip(&v) {
                        *wi -= &(&half_qw * vi);
                    }
                    let b = cur.polar(&w);
                    let two_a = a.scale(&Scalar::from_int(2));
                    cur = cur.sub(&QuadraticForm::product(&two_a, &b));
                    terms.push((two_a, b));
                }
            }
        }
        debug_assert!(
            terms.iter().fold(QuadraticForm::zero(self.nvars()), |acc, (a, b)| acc.add(&QuadraticForm::product(a, b)))
                == *self
        );
        Representation::Terms(terms)
    }
}

/// Visit integer vectors of length `k` with max-norm exactly `h`, stopping
/// early when the callback returns true.
fn for_each_shell(k: usize, h: i64, f: &mut dyn FnMut(&[i64]) -> bool) {
    fn rec(i: usize, k: usize, h: i64, on_shell: bool, cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        if i == k {
            return on_shell && f(cur);
        }
        for c in -h..=h {
            cur[i] = c;
            if rec(i + 1, k, h, on_shell || c.abs() == h, cur, f) {
                return true;
            }
        }
        false
    }
    rec(0, k, h, false, &mut vec![0; k], f);
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_poly(), f)
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Resultant in `var` of two polynomials of degree ≤ 2, from the formal 4×4
/// Sylvester matrix (both treated as quadratics in `var`). For
/// `Q₁ = x² + Q₁'` and `Q₂ = x·b₂ − A` this is `A² + b₂²·Q₁'`.
pub fn quad_resultant(q1: &MultiPoly, q2: &MultiPoly, var: usize) -> Result<MultiPoly> {
    if q1.nvars() != q2.nvars() {
        return Err(Error::DimensionMismatch { expected: q1.nvars(), got: q2.nvars() });
    }
    if q1.degree().unwrap_or(0) > 2 || q2.degree().unwrap_or(0) > 2 {
        return precondition("quad_resultant takes polynomials of degree at most 2");
    }
    let d1 = q1.degree_in(var).unwrap_or(0);
    let d2 = q2.degree_in(var).unwrap_or(0);
    if d1 == 0 && d2 == 0 {
        return degenerate("neither polynomial involves the eliminated variable");
    }
    let f = UniPoly::formal(q1, var, 2);
    let g = UniPoly::formal(q2, var, 2);
    Ok(poly_det(&sylvester_matrix(&f, &g)))
}

/// Images of the variables under elimination of the RREF pivot variables of
/// the given independent linear forms (solving `forms = 0`).
pub fn elimination_images(forms: &[LinearForm]) -> Result<(Vec<usize>, Vec<MultiPoly>)> {
    let n = forms.first().map_or(0, LinearForm::nvars);
    if forms.is_empty() {
        return Ok((Vec::new(), (0..n).map(|i| MultiPoly::var(n, i)).collect()));
    }
    let m = ExactMatrix::from_row_slices(&forms.iter().map(|l| l.coeffs.clone()).collect::<Vec<_>>(), n);
    let prof = m.rank_profile();
    if prof.rank < forms.len() {
        return precondition("linear forms are dependent");
    }
    let mut images: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n, i)).collect();
    for (r, &p) in prof.pivot_columns.iter().enumerate() {
        let coeffs: Vec<Scalar> = (0..n)
            .map(|j| if prof.pivot_columns.contains(&j) { Scalar::zero() } else { -&prof.rref[(r, j)] })
            .collect();
        images[p] = MultiPoly::affine(&coeffs, Scalar::zero());
    }
    Ok((prof.pivot_columns, images))
}

/// `q` restricted to the subspace `{forms = 0}`, written in the non-pivot
/// variables. Zero iff `q` lies in the ideal generated by the forms.
pub fn restrict_mod_span(q: &MultiPoly, forms: &[LinearForm]) -> Result<MultiPoly> {
    let (_, images) = elimination_images(forms)?;
    Ok(q.substitute(&images))
}

pub fn restrict_mod_pair(q: &MultiPoly, l1: &LinearForm, l2: &LinearForm) -> Result<MultiPoly> {
    restrict_mod_span(q, &[l1.clone(), l2.clone()])
}

/// Random substitution sending a subspace `V` of linear forms to multiples of
/// a fresh variable `z` (index `nvars`), fixing a coordinate complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionMap {
    pub nvars: usize,
    /// Index of `z` in the target ring of `nvars + 1` variables.
    pub z: usize,
    pub basis: Vec<LinearForm>,
    pub multipliers: Vec<Scalar>,
    /// Coordinate variables completing `basis` to a basis of all linear forms.
    pub complement: Vec<usize>,
    pub seed: u64,
    images: Vec<MultiPoly>,
}

impl ProjectionMap {
    /// Image of `x_i`, a linear polynomial in the `nvars + 1` target variables.
    pub fn images(&self) -> &[MultiPoly] {
        &self.images
    }

    pub fn apply(&self, p: &MultiPoly) -> MultiPoly {
        assert_eq!(p.nvars(), self.nvars);
        p.substitute(&self.images)
    }

    pub fn apply_linear(&self, l: &LinearForm) -> LinearForm {
        LinearForm::from_poly(&self.apply(&l.to_poly())).expect("linear image")
    }

    pub fn apply_form(&self, q: &QuadraticForm) -> QuadraticForm {
        let n = self.nvars;
        let mut a = ExactMatrix::zeros(n, n + 1);
        for (i, img) in self.images.iter().enumerate() {
            for j in 0..=n {
                a[(i, j)] = img.coeff(&Monomial::var(n + 1, j));
            }
        }
        q.compose(&a)
    }
}

pub fn random_projection(v_basis: &[LinearForm], nvars: usize, seed: u64) -> Result<ProjectionMap> {
    if v_basis.iter().any(|l| l.nvars() != nvars) {
        return precondition("basis forms have the wrong number of variables");
    }
    let k = v_basis.len();
    if forms_rank(v_basis) < k {
        return precondition("projection basis is linearly dependent");
    }
    let mut rows: Vec<Vec<Scalar>> = v_basis.iter().map(|l| l.coeffs.clone()).collect();
    let mut complement = Vec::new();
    for i in 0..nvars {
        let mut trial = rows.clone();
        trial.push(LinearForm::var(nvars, i).coeffs);
        if vectors_rank(&trial, nvars) == trial.len() {
            rows = trial;
            complement.push(i);
        }
    }
    let mut prng = rng::seeded(seed);
    let multipliers: Vec<Scalar> = (0..k).map(|_| rng::projection_multiplier(&mut prng)).collect();
    // x = B⁻¹ (basis values); basis value j is c_j z for j < k and the
    // complement coordinate otherwise
    let binv = ExactMatrix::from_row_slices(&rows, nvars).inverse().expect("completed basis is invertible");
    let t = nvars + 1;
    let values: Vec<MultiPoly> =
        (0..nvars)
            .map(|j| {
                if j < k {
                    MultiPoly::var(t, nvars).scale(&multipliers[j])
                } else {
                    MultiPoly::var(t, complement[j - k])
                }
            })
            .collect();
    let images = (0..nvars)
        .map(|i| {
            let mut acc = MultiPoly::zero(t);
            for (j, val) in values.iter().enumerate() {
                let c = &binv[(i, j)];
                if !c.is_zero() {
                    acc = acc.add(&val.scale(c));
                }
            }
            acc
        })
        .collect();
    Ok(ProjectionMap { nvars, z: nvars, basis: v_basis.to_vec(), multipliers, complement, seed, images })
}
