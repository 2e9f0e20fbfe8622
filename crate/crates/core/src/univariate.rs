//! Univariate polynomials: dense over ℚ(i), and the "one variable over the
//! rest" view of a [`MultiPoly`] used for resultants.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{degenerate, Result};
use crate::poly::MultiPoly;
use crate::scalar::Scalar;

/// Dense univariate polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ScalarPoly {
    coeffs: Vec<Scalar>,
}

impl ScalarPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ScalarPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    pub fn zero() -> Self {
        ScalarPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`.
    pub fn linear_root(r: &Scalar) -> Self {
        Self::new(vec![-r, Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, o: &ScalarPoly) -> ScalarPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &ScalarPoly) -> ScalarPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }

    pub fn scale(&self, s: &Scalar) -> ScalarPoly {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &ScalarPoly) -> ScalarPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &ScalarPoly) -> (ScalarPoly, ScalarPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.leading().inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Scalar::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                r[k + j] -= &t;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> ScalarPoly {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().inv().unwrap())
    }

    pub fn derivative(&self) -> ScalarPoly {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &Scalar::from_int(k as i64)).collect())
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn divide_exact(&self, d: &ScalarPoly) -> Option<ScalarPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Squarefree part, made monic. Zero maps to zero.
    pub fn squarefree(&self) -> ScalarPoly {
        if self.is_constant() {
            return if self.is_zero() { Self::zero() } else { Self::constant(Scalar::one()) };
        }
        let g = gcd_unchecked(self, &self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Exact roots when the squarefree part has degree at most 2; otherwise `None`.
    /// Returns `Some(vec![])` when the squarefree part is degree 2 but its roots
    /// lie outside ℚ(i).
    pub fn roots_low_degree(&self) -> Option<Vec<Scalar>> {
        let s = self.squarefree();
        match s.degree() {
            None | Some(0) => Some(Vec::new()),
            Some(1) => Some(vec![-&s.coeff(0)]),
            Some(2) => Some(quadratic_roots(&s.coeff(2), &s.coeff(1), &s.coeff(0)).unwrap_or_default()),
            _ => None,
        }
    }

    /// Exact square root `r` with `r² = self`, if one exists over ℚ(i).
    pub fn sqrt(&self) -> Option<ScalarPoly> {
        let Some(d) = self.degree() else { return Some(Self::zero()) };
        if d % 2 == 1 {
            return None;
        }
        let h = d / 2;
        let lead = self.leading().sqrt()?;
        let two_lead = &lead + &lead;
        let mut r = vec![Scalar::zero(); h + 1];
        r[h] = lead;
        // determine coefficients from the top down
        for k in (0..h).rev() {
            let target = self.coeff(h + k);
            let mut acc = Scalar::zero();
            for i in k + 1..=h {
                let j = h + k - i;
                if j > k && j <= h {
                    acc += &(&r[i] * &r[j]);
                }
            }
            r[k] = &(&target - &acc) / &two_lead;
        }
        let cand = Self::new(r);
        (cand.mul(&cand) == *self).then_some(cand)
    }

    /// Interpolating polynomial through `(xs[k], ys[k])`; the `xs` must be distinct.
    pub fn interpolate(xs: &[Scalar], ys: &[Scalar]) -> ScalarPoly {
        assert_eq!(xs.len(), ys.len());
        // Newton divided differences
        let n = xs.len();
        let mut dd: Vec<Scalar> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = &dd[i] - &dd[i - 1];
                let den = &xs[i] - &xs[i - j];
                dd[i] = &num / &den;
            }
        }
        let mut p = Self::zero();
        for k in (0..n).rev() {
            p = p.mul(&Self::linear_root(&xs[k])).add(&Self::constant(dd[k].clone()));
        }
        p
    }
}

/// Roots of `a t² + b t + c` in ℚ(i), `None` if the discriminant has no square root there.
pub fn quadratic_roots(a: &Scalar, b: &Scalar, c: &Scalar) -> Option<Vec<Scalar>> {
    let disc = &(b * b) - &(&Scalar::from_int(4) * &(a * c));
    let s = disc.sqrt()?;
    let two_a = a + a;
    let r1 = &(&(-b) + &s) / &two_a;
    let r2 = &(&(-b) - &s) / &two_a;
    Some(if r1 == r2 { vec![r1] } else { vec![r1, r2] })
}

fn gcd_unchecked(p: &ScalarPoly, q: &ScalarPoly) -> ScalarPoly {
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let r = a.div_rem(&b).1;
        a = b;
        b = r;
    }
    a.monic()
}

/// Monic gcd of two univariate polynomials.
pub fn uni_gcd(p: &ScalarPoly, q: &ScalarPoly) -> Result<ScalarPoly> {
    if p.is_zero() && q.is_zero() {
        return degenerate("gcd of two zero polynomials");
    }
    Ok(gcd_unchecked(p, q))
}

impl fmt::Display for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = MultiPoly::from_terms(1, self.coeffs.iter().enumerate().map(|(k, c)| (vec![k as u16], c.clone())));
        f.write_str(&p.display_with(&["t".to_string()]))
    }
}

impl fmt::Debug for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A multivariate polynomial viewed as univariate in `var` with coefficients
/// in the remaining variables (the coefficient polynomials keep the full
/// variable count but never involve `var`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    pub var: usize,
    pub coeffs: Vec<MultiPoly>,
}

impl UniPoly {
    pub fn from_multi(p: &MultiPoly, var: usize) -> Self {
        let mut coeffs = p.coefficients_in(var);
        while coeffs.len() > 1 && coeffs.last().is_some_and(MultiPoly::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() == 1 && coeffs[0].is_zero() {
            coeffs.clear();
        }
        UniPoly { var, coeffs }
    }

    /// Formal view with a fixed number of coefficient slots (leading ones may be zero).
    pub fn formal(p: &MultiPoly, var: usize, degree: usize) -> Self {
        let mut coeffs = p.coefficients_in(var);
        assert!(
            coeffs.len() <= degree + 1 || coeffs[degree + 1..].iter().all(MultiPoly::is_zero),
            "formal degree too small"
        );
        coeffs.resize(degree + 1, MultiPoly::zero(p.nvars()));
        UniPoly { var, coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn to_multi(&self) -> MultiPoly {
        let n = self.coeffs.first().map_or(0, MultiPoly::nvars);
        let x = MultiPoly::var(n, self.var);
        let mut acc = MultiPoly::zero(n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&x).add(c);
        }
        acc
    }
}

/// Sylvester matrix of `f` (formal degree m) and `g` (formal degree n):
/// n columns carrying shifted copies of `f`, then m columns of `g`; column `c`
/// of each block holds the coefficients in ascending degree starting at row `c`.
pub fn sylvester_matrix(f: &UniPoly, g: &UniPoly) -> Vec<Vec<MultiPoly>> {
    let m = f.coeffs.len() - 1;
    let n = g.coeffs.len() - 1;
    let nv = f.coeffs[0].nvars();
    let size = m + n;
    let mut s = vec![vec![MultiPoly::zero(nv); size]; size];
    for c in 0..n {
        for (k, a) in f.coeffs.iter().enumerate() {
            s[c + k][c] = a.clone();
        }
    }
    for c in 0..m {
        for (k, b) in g.coeffs.iter().enumerate() {
            s[c + k][n + c] = b.clone();
        }
    }
    s
}

/// Division-free determinant of a square matrix of polynomials, by Laplace
/// expansion over column prefixes (dynamic programming on used-row sets).
pub fn poly_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let size = m.len();
    if size == 0 {
        return MultiPoly::one(0);
    }
    let nv = m[0][0].nvars();
    assert!(size <= 20, "determinant too large for subset expansion");
    let mut dp: Vec<Option<MultiPoly>> = vec![None; 1 << size];
    dp[0] = Some(MultiPoly::one(nv));
    for mask in 0usize..(1 << size) {
        let Some(cur) = dp[mask].take() else { continue };
        let col = mask.count_ones() as usize;
        if col == size {
            dp[mask] = Some(cur);
            continue;
        }
        for r in 0..size {
            if mask & (1 << r) != 0 || m[r][col].is_zero() {
                continue;
            }
            let above = (mask >> (r + 1)).count_ones();
            let mut term = cur.mul(&m[r][col]);
            if above % 2 == 1 {
                term = term.neg();
            }
            let slot = &mut dp[mask | (1 << r)];
            *slot = Some(match slot.take() {
                None => term,
                Some(p) => p.add(&term),
            });
        }
    }
    dp[(1 << size) - 1].take().unwrap_or_else(|| MultiPoly::zero(nv))
}

/// Resultant in `var` with the Sylvester layout above. For actual degrees m, n
/// this is `(-1)^{mn}` times the classical `lc(f)^n Π g(α_i)`, so for instance
/// `Res(x - a, x - b) = b - a`.
pub fn uni_resultant(f: &MultiPoly, g: &MultiPoly, var: usize) -> Result<MultiPoly> {
    if f.is_zero() || g.is_zero() {
        return degenerate("resultant of a zero polynomial");
    }
    let uf = UniPoly::from_multi(f, var);
    let ug = UniPoly::from_multi(g, var);
    if uf.degree() == Some(0) || ug.degree() == Some(0) {
        return degenerate("resultant needs positive degree in the eliminated variable");
    }
    Ok(poly_det(&sylvester_matrix(&uf, &ug)))
}

/// Resultant of two bivariate-in-`(s,t)` polynomials after specialising: both
/// inputs are univariate in `t` with coefficients in `ℚ(i)[s]`; the result is a
/// polynomial in `s`. Computed by evaluation at enough points of `s` and
/// interpolation, with the Sylvester layout and sign of [`uni_resultant`].
pub fn resultant_t(f: &[ScalarPoly], g: &[ScalarPoly]) -> ScalarPoly {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let fdeg = f.iter().filter_map(ScalarPoly::degree).max().unwrap_or(0);
    let gdeg = g.iter().filter_map(ScalarPoly::degree).max().unwrap_or(0);
    let bound = n * fdeg + m * gdeg;
    let xs: Vec<Scalar> = (0..=bound as i64).map(Scalar::from_int).collect();
    let ys: Vec<Scalar> = xs
        .iter()
        .map(|s| {
            let fv: Vec<Scalar> = f.iter().map(|c| c.eval(s)).collect();
            let gv: Vec<Scalar> = g.iter().map(|c| c.eval(s)).collect();
            scalar_sylvester_det(&fv, &gv)
        })
        .collect();
    ScalarPoly::interpolate(&xs, &ys)
}

fn scalar_sylvester_det(f: &[Scalar], g: &[Scalar]) -> Scalar {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut s = crate::matrix::ExactMatrix::zeros(size, size);
    for c in 0..n {
        for (k, a) in f.iter().enumerate() {
            s[(c + k, c)] = a.clone();
        }
    }
    for c in 0..m {
        for (k, b) in g.iter().enumerate() {
            s[(c + k, n + c)] = b.clone();
        }
    }
    s.det()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_examples() {
        let p = ScalarPoly::from_i64(&[-1, 0, 1]);
        let q = ScalarPoly::from_i64(&[-1, 1]);
        assert_eq!(uni_gcd(&p, &q).unwrap(), q);
        let a = ScalarPoly::from_i64(&[1, 0, 1]);
        let b = ScalarPoly::from_i64(&[2, 0, 1]);
        assert_eq!(uni_gcd(&a, &b).unwrap(), ScalarPoly::from_i64(&[1]));
        // (x-1)^2 (x+2) and (x-1)(x+3)
        let xm1 = ScalarPoly::from_i64(&[-1, 1]);
        let f = xm1.mul(&xm1).mul(&ScalarPoly::from_i64(&[2, 1]));
        let g = xm1.mul(&ScalarPoly::from_i64(&[3, 1]));
        assert_eq!(uni_gcd(&f, &g).unwrap(), xm1);
        assert!(uni_gcd(&ScalarPoly::zero(), &ScalarPoly::zero()).is_err());
    }

    #[test]
    fn squarefree_and_roots() {
        let xm1 = ScalarPoly::from_i64(&[-1, 1]);
        let f = xm1.mul(&xm1).mul(&ScalarPoly::from_i64(&[1, 0, 1]));
        let s = f.squarefree();
        assert_eq!(s.degree(), Some(3));
        assert!(s.roots_low_degree().is_none());
        let roots = ScalarPoly::from_i64(&[1, 0, 1]).roots_low_degree().unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&Scalar::i()));
        assert_eq!(ScalarPoly::from_i64(&[-2, 0, 1]).roots_low_degree().unwrap(), vec![]);
    }

    #[test]
    fn poly_sqrt() {
        let p = ScalarPoly::from_i64(&[1, 2, 3]);
        assert_eq!(p.mul(&p).sqrt().unwrap().mul(&p.mul(&p).sqrt().unwrap()), p.mul(&p));
        assert!(ScalarPoly::from_i64(&[1, 0, 2]).sqrt().is_none());
    }

    #[test]
    fn interpolation_recovers() {
        let p = ScalarPoly::from_i64(&[3, -1, 0, 2]);
        let xs: Vec<Scalar> = (0..5).map(Scalar::from_int).collect();
        let ys: Vec<Scalar> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(ScalarPoly::interpolate(&xs, &ys), p);
    }

    #[test]
    fn resultant_examples() {
        let (x, a, b) = (MultiPoly::var(3, 0), MultiPoly::var(3, 1), MultiPoly::var(3, 2));
        let r = uni_resultant(&x.sub(&a), &x.sub(&b), 0).unwrap();
        assert_eq!(r, b.sub(&a));
        let xx = MultiPoly::var(1, 0);
        let one = MultiPoly::one(1);
        assert!(uni_resultant(&xx.mul(&xx).sub(&one), &xx.sub(&one), 0).unwrap().is_zero());
        assert!(uni_resultant(&MultiPoly::zero(1), &xx, 0).is_err());
    }

    #[test]
    fn interpolated_resultant_matches_symbolic() {
        // f = t^2 + s, g = (s+1) t - 2 as polynomials in (s, t)
        let s = MultiPoly::var(2, 0);
        let t = MultiPoly::var(2, 1);
        let f = t.mul(&t).add(&s);
        let g = s.add(&MultiPoly::one(2)).mul(&t).sub(&MultiPoly::constant(2, Scalar::from_int(2)));
        let sym = uni_resultant(&f, &g, 1).unwrap();
        let fv = vec![ScalarPoly::from_i64(&[0, 1]), ScalarPoly::zero(), ScalarPoly::from_i64(&[1])];
        let gv = vec![ScalarPoly::from_i64(&[-2]), ScalarPoly::from_i64(&[1, 1])];
        let num = resultant_t(&fv, &gv);
        for k in -3..4 {
            let sv = Scalar::from_int(k);
            assert_eq!(sym.eval(&[sv.clone(), Scalar::zero()]), num.eval(&sv));
        }
    }
}
