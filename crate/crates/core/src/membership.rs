//! Radical membership `Q ∈ √(Q₁, Q₂)` for two quadratic generators.
//!
//! The prover solves `Q^k = A·Q₁ + B·Q₂` as an exact linear system. The
//! falsifier restricts everything to a random affine plane and compares the
//! resultants `Res_t(Q₁|, Q₂|)` and `Res_t(Q₁|, Q|)`: a factor of the first
//! that does not divide the second locates a common zero of `Q₁, Q₂` where
//! `Q ≠ 0`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{precondition, Result};
use crate::matrix::vectors_rank;
use crate::poly::{Monomial, MultiPoly};
use crate::quadratic::{restrict_mod_span, LinearForm, QuadraticForm};
use crate::rng::{self, Prng};
use crate::scalar::Scalar;
use crate::sparse::{solve_sparse, SparseRow};
use crate::univariate::{resultant_t, uni_gcd, ScalarPoly};

pub const DEFAULT_KMAX: u32 = 4;
pub const DEFAULT_PLANES: usize = 50;
/// Integer plane coordinates are drawn from `[-PLANE_COORD, PLANE_COORD]`.
pub const PLANE_COORD: i64 = 32;

/// Affine plane `x = p0 + s·u + t·v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plane {
    pub p0: Vec<Scalar>,
    pub u: Vec<Scalar>,
    pub v: Vec<Scalar>,
}

impl Plane {
    pub fn random(rng: &mut Prng, n: usize) -> Plane {
        loop {
            let p0 = rng::random_vector(rng, n, PLANE_COORD);
            let u = rng::random_vector(rng, n, PLANE_COORD);
            let v = rng::random_vector(rng, n, PLANE_COORD);
            if vectors_rank(&[u.clone(), v.clone()], n) == 2 {
                return Plane { p0, u, v };
            }
        }
    }

    /// Images of the coordinates as polynomials in `(s, t)`.
    pub fn images(&self) -> Vec<MultiPoly> {
        (0..self.p0.len())
            .map(|i| MultiPoly::affine(&[self.u[i].clone(), self.v[i].clone()], self.p0[i].clone()))
            .collect()
    }

    /// Restriction of `p`, as coefficients in `t` (each a polynomial in `s`).
    pub fn restrict(&self, p: &MultiPoly) -> Vec<ScalarPoly> {
        let r = p.substitute(&self.images());
        r.coefficients_in(1)
            .iter()
            .map(|c| {
                let d = c.degree_in(0).unwrap_or(0) as usize;
                let mut v = vec![Scalar::zero(); d + 1];
                for (m, x) in c.terms() {
                    v[m.exps()[0] as usize] = x.clone();
                }
                ScalarPoly::new(v)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonMemberEvidence {
    /// `factor` divides the squarefree part of `r12 = Res_t(Q₁|, Q₂|)` and is
    /// coprime to `r1q = Res_t(Q₁|, Q|)`; every root `s₀` of it yields a common
    /// zero of `Q₁, Q₂` on the plane at which `Q ≠ 0`.
    Plane { plane: Plane, plane_index: usize, factor: ScalarPoly, r12: ScalarPoly, r1q: ScalarPoly },
    /// An exact point with `Q₁ = Q₂ = 0` and `Q ≠ 0`.
    CommonZero { point: Vec<Scalar> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipVerdict {
    /// `Q^k = cofactor_a·Q₁ + cofactor_b·Q₂`.
    Member {
        k: u32,
        cofactor_a: MultiPoly,
        cofactor_b: MultiPoly,
    },
    NonMember(NonMemberEvidence),
    Unknown {
        kmax: u32,
        planes_tried: usize,
    },
}

impl MembershipVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipVerdict::Member { .. })
    }

    pub fn is_non_member(&self) -> bool {
        matches!(self, MembershipVerdict::NonMember(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            MembershipVerdict::Member { .. } => "Member",
            MembershipVerdict::NonMember(_) => "NonMember",
            MembershipVerdict::Unknown { .. } => "Unknown",
        }
    }

    /// Re-check the certificate from scratch.
    pub fn verify(&self, q: &MultiPoly, q1: &QuadraticForm, q2: &QuadraticForm) -> bool {
        match self {
            MembershipVerdict::Member { k, cofactor_a, cofactor_b } => {
                q.pow(*k).sub(&cofactor_a.mul(&q1.to_poly())).sub(&cofactor_b.mul(&q2.to_poly())).is_zero()
            }
            MembershipVerdict::NonMember(NonMemberEvidence::CommonZero { point }) => {
                q1.eval(point).is_zero() && q2.eval(point).is_zero() && !q.eval(point).is_zero()
            }
            MembershipVerdict::NonMember(NonMemberEvidence::Plane { plane, factor, .. }) => {
                match falsify_on_plane(q, q1, q2, plane) {
                    PlaneOutcome::Evidence { factor: f, .. } => f == *factor,
                    _ => false,
                }
            }
            MembershipVerdict::Unknown { .. } => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub kmax: u32,
    pub planes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { kmax: DEFAULT_KMAX, planes: DEFAULT_PLANES }
    }
}

/// Solve `Q^k = A·Q₁ + B·Q₂` with `A, B` homogeneous of degree `deg(Q^k) − 2`.
pub fn ideal_membership_power(
    q: &MultiPoly,
    q1: &QuadraticForm,
    q2: &QuadraticForm,
    k: u32,
) -> Option<(MultiPoly, MultiPoly)> {
    let n = q1.nvars();
    let target = q.pow(k.max(1));
    if target.is_zero() {
        return Some((MultiPoly::zero(n), MultiPoly::zero(n)));
    }
    let d = target.degree().unwrap();
    if d < 2 || !target.is_homogeneous() {
        return None;
    }
    let unknowns = Monomial::all_of_degree(n, d - 2);
    let m = unknowns.len();
    let gens = [q1.to_poly(), q2.to_poly()];
    let mut row_of: HashMap<Monomial, usize> = HashMap::new();
    let mut rows: Vec<SparseRow> = Vec::new();
    let mut row_index = |mono: Monomial, rows: &mut Vec<SparseRow>| -> usize {
        *row_of.entry(mono).or_insert_with(|| {
            rows.push(SparseRow::new());
            rows.len() - 1
        })
    };
    for (g, gen) in gens.iter().enumerate() {
        for (j, mu) in unknowns.iter().enumerate() {
            for (nu, c) in gen.terms() {
                let r = row_index(mu.mul(nu), &mut rows);
                rows[r].insert(g * m + j, c.clone());
            }
        }
    }
    let mut rhs = vec![Scalar::zero(); rows.len()];
    for (mono, c) in target.terms() {
        let r = row_index(mono.clone(), &mut rows);
        if r >= rhs.len() {
            rhs.resize(r + 1, Scalar::zero());
        }
        rhs[r] = c.clone();
    }
    let x = solve_sparse(rows, rhs, 2 * m)?;
    let a = MultiPoly::from_terms(n, unknowns.iter().zip(&x[..m]).map(|(mu, c)| (mu.exps().to_vec(), c.clone())));
    let b = MultiPoly::from_terms(n, unknowns.iter().zip(&x[m..]).map(|(mu, c)| (mu.exps().to_vec(), c.clone())));
    debug_assert!(target.sub(&a.mul(&gens[0])).sub(&b.mul(&gens[1])).is_zero());
    Some((a, b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaneOutcome {
    Evidence {
        factor: ScalarPoly,
        r12: ScalarPoly,
        r1q: ScalarPoly,
    },
    NoEvidence,
    /// Guards fired: a leading coefficient in `t` vanishes or the restricted
    /// `Q₁, Q₂` share a component. The caller should resample.
    Degenerate,
}

/// Plane-restriction resultant test.
pub fn falsify_on_plane(q: &MultiPoly, q1: &QuadraticForm, q2: &QuadraticForm, plane: &Plane) -> PlaneOutcome {
    // leading coefficients in t are the constants Q₁(v), Q₂(v), Q(v)
    if q1.eval(&plane.v).is_zero() || q2.eval(&plane.v).is_zero() {
        return PlaneOutcome::Degenerate;
    }
    let top = q.homogeneous_part(q.degree().unwrap_or(0));
    if q.is_constant() || top.eval(&plane.v).is_zero() {
        return PlaneOutcome::Degenerate;
    }
    let f1 = plane.restrict(&q1.to_poly());
    let f2 = plane.restrict(&q2.to_poly());
    let fq = plane.restrict(q);
    let r12 = resultant_t(&f1, &f2);
    if r12.is_zero() {
        return PlaneOutcome::Degenerate;
    }
    let r1q = resultant_t(&f1, &fq);
    let sq = r12.squarefree();
    let h = if r1q.is_zero() {
        ScalarPoly::constant(Scalar::one())
    } else {
        let g = uni_gcd(&sq, &r1q).expect("nonzero inputs");
        sq.div_rem(&g).0.monic()
    };
    if h.is_constant() {
        PlaneOutcome::NoEvidence
    } else {
        PlaneOutcome::Evidence { factor: h, r12, r1q }
    }
}

fn check_generators(q: &MultiPoly, q1: &QuadraticForm, q2: &QuadraticForm) -> Result<()> {
    let n = q1.nvars();
    if q2.nvars() != n || q.nvars() != n {
        return precondition("Q, Q1, Q2 must have the same number of variables");
    }
    if q1.is_zero() || q2.is_zero() {
        return precondition("generators must be nonzero");
    }
    if vectors_rank(&[q1.coefficients(), q2.coefficients()], q1.coefficients().len()) < 2 {
        return precondition("generators are scalar multiples of each other");
    }
    if !q.is_homogeneous() {
        return precondition("Q must be homogeneous");
    }
    Ok(())
}

/// Common linear factor of two independent quadratics, with the cofactors.
fn common_linear_factor(q1: &QuadraticForm, q2: &QuadraticForm) -> Option<(LinearForm, LinearForm, LinearForm)> {
    let (a1, b1) = q1.factor()?;
    let (a2, b2) = q2.factor()?;
    for (l, c1) in [(&a1, &b1), (&b1, &a1)] {
        for (m, c2) in [(&a2, &b2), (&b2, &a2)] {
            if vectors_rank(&[l.coeffs().to_vec(), m.coeffs().to_vec()], l.nvars()) == 1 {
                // m = λ l, so Q₂ = l·(λ c2)
                let j = l.leading_index().unwrap();
                let lambda = &m.coeffs()[j] / &l.coeffs()[j];
                return Some((l.clone(), c1.clone(), c2.scale(&lambda)));
            }
        }
    }
    None
}

/// Random point of the subspace `{forms = 0}` at which `q` does not vanish.
fn point_off(q: &MultiPoly, forms: &[LinearForm], rng: &mut Prng) -> Option<Vec<Scalar>> {
    let n = q.nvars();
    if restrict_mod_span(q, forms).ok()?.is_zero() {
        return None;
    }
    let (pivots, images) = crate::quadratic::elimination_images(forms).ok()?;
    for _ in 0..64 {
        let mut free: Vec<Scalar> = rng::random_vector(rng, n, PLANE_COORD);
        for &p in &pivots {
            free[p] = Scalar::zero();
        }
        let point: Vec<Scalar> = images.iter().map(|im| im.eval(&free)).collect();
        if !q.eval(&point).is_zero() {
            return Some(point);
        }
    }
    None
}

/// Three-valued radical membership with the given exponent and plane budgets.
pub fn radical_member(
    q: &MultiPoly,
    q1: &QuadraticForm,
    q2: &QuadraticForm,
    budget: Budget,
    seed: u64,
) -> Result<MembershipVerdict> {
    check_generators(q, q1, q2)?;
    let n = q1.nvars();
    let mut rng = rng::seeded(seed);
    if q.is_zero() {
        return Ok(MembershipVerdict::Member { k: 1, cofactor_a: MultiPoly::zero(n), cofactor_b: MultiPoly::zero(n) });
    }
    // a shared linear factor makes V(Q₁, Q₂) contain a hyperplane, which
    // every plane meets in a common curve; decide such pairs directly
    let shared = common_linear_factor(q1, q2);
    if let Some((l, c1, c2)) = &shared {
        let hit = point_off(q, std::slice::from_ref(l), &mut rng)
            .or_else(|| point_off(q, &[c1.clone(), c2.clone()], &mut rng));
        if let Some(point) = hit {
            return Ok(MembershipVerdict::NonMember(NonMemberEvidence::CommonZero { point }));
        }
    }
    let kmax = budget.kmax.max(1);
    let per_round = budget.planes.div_ceil(kmax as usize);
    let mut tried = 0usize;
    let mut attempts = 0usize;
    for k in 1..=kmax {
        if let Some((a, b)) = ideal_membership_power(q, q1, q2, k) {
            return Ok(MembershipVerdict::Member { k, cofactor_a: a, cofactor_b: b });
        }
        if shared.is_some() {
            continue;
        }
        let round_end = (tried + per_round).min(budget.planes);
        while tried < round_end && attempts < 4 * budget.planes + 16 {
            attempts += 1;
            let plane = Plane::random(&mut rng, n);
            match falsify_on_plane(q, q1, q2, &plane) {
                PlaneOutcome::Degenerate => continue,
                PlaneOutcome::NoEvidence => tried += 1,
                PlaneOutcome::Evidence { factor, r12, r1q } => {
                    return Ok(MembershipVerdict::NonMember(NonMemberEvidence::Plane {
                        plane,
                        plane_index: tried,
                        factor,
                        r12,
                        r1q,
                    }));
                }
            }
        }
    }
    Ok(MembershipVerdict::Unknown { kmax, planes_tried: tried })
}

/// Random rational point helper shared with tests and generators.
pub fn random_point(rng: &mut Prng, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| Scalar::from_int(rng.gen_range(-PLANE_COORD..=PLANE_COORD))).collect()
}
