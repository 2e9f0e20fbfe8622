//! Sparse multivariate polynomials over ℚ(i).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Exponent vector ordered graded-lexicographically: higher total degree is
/// larger, ties broken by comparing exponents from variable 0 upward.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exps(exps: Vec<u16>) -> Self {
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All monomials of exact total degree `d` in `nvars` variables, in
    /// ascending grlex order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left as u16;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[i] = e as u16;
                rec(i + 1, left - e, cur, out);
            }
        }
        if nvars == 0 {
            return if d == 0 { vec![Monomial(Vec::new())] } else { Vec::new() };
        }
        let mut out = Vec::new();
        rec(0, d, &mut vec![0; nvars], &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Scalar::one());
        p
    }

    /// Affine form `Σ coeffs[i]·x_i + constant`.
    pub fn affine(coeffs: &[Scalar], constant: Scalar) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, constant);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u16>, Scalar)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, var: usize) -> Option<u16> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division by a nonzero scalar.
    pub fn div_scalar(&self, s: &Scalar) -> MultiPoly {
        let inv = s.inv().expect("division by zero scalar");
        self.scale(&inv)
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(u32::from(e));
                }
            }
            acc += &t;
        }
        acc
    }

    /// Compose with `x_i ↦ images[i]`; all images share one target ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map_or(0, MultiPoly::nvars);
        assert!(images.iter().all(|p| p.nvars == target), "images must share nvars");
        let maxdeg: Vec<u16> = (0..self.nvars).map(|i| self.degree_in(i).unwrap_or(0)).collect();
        let powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .zip(&maxdeg)
            .map(|(img, &d)| {
                let mut v = vec![Self::one(target)];
                for _ in 0..d {
                    let next = v.last().unwrap().mul(img);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Substitute `x_var ↦ value` leaving the variable count unchanged.
    pub fn specialize(&self, var: usize, value: &Scalar) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[var];
            e[var] = 0;
            out.add_term(Monomial(e), c * &value.pow(u32::from(k)));
        }
        out
    }

    /// Coefficients of `x_var^0, x_var^1, …` as polynomials not involving `x_var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[var] as usize;
            e[var] = 0;
            out[k].add_term(Monomial(e), c.clone());
        }
        out
    }

    pub fn partial_derivative(&self, var: usize) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let k = m.0[var];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[var] -= 1;
            out.add_term(Monomial(e), c * &Scalar::from_int(i64::from(k)));
        }
        out
    }

    /// Re-embed into a ring with `nvars` variables, mapping variable `i` to
    /// `positions[i]`.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> MultiPoly {
        assert_eq!(positions.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[positions[i]] += k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Drop variables that do not occur, keeping the listed ones in order.
    /// Panics if a dropped variable occurs.
    pub fn project(&self, keep: &[usize]) -> MultiPoly {
        let mut out = Self::zero(keep.len());
        for (m, c) in &self.terms {
            let used = m.0.iter().enumerate().filter(|(_, &e)| e > 0).all(|(i, _)| keep.contains(&i));
            assert!(used, "project: dropped variable occurs");
            out.add_term(Monomial(keep.iter().map(|&i| m.0[i]).collect()), c.clone());
        }
        out
    }

    /// Rescale so the grlex-leading coefficient is 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.div_scalar(&c.clone()),
        }
    }

    /// Render with the given variable names, highest term first.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                    .collect();
            let (neg, mag) = if c.is_real() && c.re() < &num_rational::BigRational::zero() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                s.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    s.push_str(&mag.to_string());
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }

    pub fn default_names(nvars: usize) -> Vec<String> {
        const N: [&str; 4] = ["x", "y", "z", "w"];
        if nvars <= 4 {
            N[..nvars].iter().map(|s| s.to_string()).collect()
        } else {
            (0..nvars).map(|i| format!("x{i}")).collect()
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Self::default_names(self.nvars)))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn difference_of_squares() {
        let (x, y) = (v(2, 0), v(2, 1));
        let p = x.add(&y).mul(&x.sub(&y));
        assert_eq!(p, x.mul(&x).sub(&y.mul(&y)));
        assert!(p.mul(&MultiPoly::zero(2)).is_zero());
    }

    #[test]
    fn intro_identity() {
        let (x, y, z, w) = (v(4, 0), v(4, 1), v(4, 2), v(4, 3));
        let q1 = x.mul(&y).add(&z.mul(&w));
        let q2 = x.mul(&y).sub(&z.mul(&w));
        let lhs = q1.pow(2).sub(&q2.pow(2));
        let xyzw = x.mul(&y).mul(&z).mul(&w);
        assert_eq!(lhs, xyzw.scale(&Scalar::from_int(4)));
    }

    #[test]
    fn substitution_examples() {
        let (x, y) = (v(2, 0), v(2, 1));
        assert_eq!(x.mul(&y).substitute(&[x.clone(), x.clone()]), x.mul(&x));

        let (x, y, z, w) = (v(4, 0), v(4, 1), v(4, 2), v(4, 3));
        let zero = MultiPoly::zero(4);
        let p = x.mul(&x).add(&y.mul(&z));
        assert_eq!(p.substitute(&[x.clone(), zero.clone(), zero, w.clone()]), x.mul(&x));

        let q = x.mul(&y).add(&z.mul(&w));
        let r = q.substitute(&[x.add(&z), y.clone(), z.clone(), w.clone()]);
        assert_eq!(r, x.mul(&y).add(&z.mul(&y)).add(&z.mul(&w)));
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::from_exps(vec![2, 0]);
        let b = Monomial::from_exps(vec![1, 1]);
        let c = Monomial::from_exps(vec![0, 3]);
        assert!(b < a && a < c);
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
    }

    #[test]
    fn coefficient_views() {
        let (x, y) = (v(2, 0), v(2, 1));
        let p = x.mul(&x).mul(&y).add(&x).add(&y);
        let cs = p.coefficients_in(0);
        assert_eq!(cs, vec![y.clone(), MultiPoly::one(2), y.clone()]);
        assert_eq!(
            p.specialize(0, &Scalar::from_int(2)),
            y.scale(&Scalar::from_int(5)).add(&MultiPoly::constant(2, Scalar::from_int(2)))
        );
        assert_eq!(p.to_string(), "x^2*y + x + y");
    }
}
