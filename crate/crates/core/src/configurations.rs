//! Robust Sylvester–Gallai and Edelstein–Kelly configurations: exact
//! incidence counts, the EK dimension certifier, and the hypothesis checkers
//! for sets of quadratics.
//!
//! "The span of `p` and `q` contains `r`" is tested exactly. Points are first
//! expressed in coordinates of a basis of their span; for a fixed `p`, two
//! points `q, r` independent of `p` span the same plane with `p` iff their
//! images modulo `p` are proportional, so each incidence count is a hash
//! lookup on normalized quotient directions.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{precondition, Error, Result};
use crate::matrix::{vectors_rank, ExactMatrix};
use crate::membership::{radical_member, Budget, MembershipVerdict};
use crate::quadratic::{forms_rank, LinearForm, QuadraticForm};
use crate::rng;
use crate::scalar::Scalar;
use crate::structure::{classify, pencil_square, span_case, PencilSquare};

/// Implementation constant in the certified bound `|𝓘| ≤ C/δ³`. The greedy
/// phase runs at most `2/δ` steps adding `1 + 100/δ²` points each, and the
/// final disjoint-neighborhood phase adds at most `1/δ`:
/// `2/δ + 200/δ³ + 1/δ ≤ 203/δ³` for `δ ≤ 1`.
pub const EK_CONSTANT: u64 = 203;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Vec<Scalar>>,
    color: Option<u8>,
}

fn direction_key(v: &[Scalar]) -> Option<Vec<Scalar>> {
    let lead = v.iter().find(|c| !c.is_zero())?;
    let inv = lead.inv().unwrap();
    Some(v.iter().map(|c| c * &inv).collect())
}

impl PointSet {
    /// Points must be nonzero, of equal length and pairwise independent.
    pub fn new(points: Vec<Vec<Scalar>>, color: Option<u8>) -> Result<Self> {
        if let Some(c) = color {
            if !(1..=3).contains(&c) {
                return precondition(format!("color {c} is not in 1..=3"));
            }
        }
        if let Some(first) = points.first() {
            let n = first.len();
            if let Some(p) = points.iter().find(|p| p.len() != n) {
                return Err(Error::DimensionMismatch { expected: n, got: p.len() });
            }
        }
        check_independent(points.iter().map(|p| p.as_slice()), |i| format!("point {i}"))?;
        Ok(PointSet { points, color })
    }

    pub fn from_i64(rows: &[&[i64]], color: Option<u8>) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&c| Scalar::from_int(c)).collect()).collect(), color)
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    pub fn color(&self) -> Option<u8> {
        self.color
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ambient(&self) -> Option<usize> {
        self.points.first().map(Vec::len)
    }

    pub fn dim(&self) -> usize {
        self.ambient().map_or(0, |n| vectors_rank(&self.points, n))
    }
}

fn check_independent<'a>(points: impl Iterator<Item = &'a [Scalar]>, name: impl Fn(usize) -> String) -> Result<()> {
    let mut seen: HashMap<Vec<Scalar>, usize> = HashMap::new();
    for (i, p) in points.enumerate() {
        let Some(k) = direction_key(p) else { return precondition(format!("{} is zero", name(i))) };
        if let Some(j) = seen.insert(k, i) {
            return precondition(format!("{} and {} are linearly dependent", name(j), name(i)));
        }
    }
    Ok(())
}

/// Coordinates of each vector in the basis of their common span.
fn reduce(vs: &[&[Scalar]]) -> (Vec<Vec<Scalar>>, usize) {
    if vs.is_empty() {
        return (Vec::new(), 0);
    }
    let prof = ExactMatrix::from_rows(vs.iter().map(|v| v.to_vec()).collect()).rank_profile();
    let coords = vs.iter().map(|v| prof.pivot_columns.iter().map(|&c| v[c].clone()).collect()).collect();
    (coords, prof.rank)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Int(Vec<i128>),
    Exact(Vec<Scalar>),
}

/// Points in reduced coordinates. When every coordinate is rational and the
/// primitive integer multiples are small, keys are computed in `i128`.
struct Pts {
    exact: Vec<Vec<Scalar>>,
    ints: Option<Vec<Vec<i128>>>,
}

const INT_LIMIT: i128 = 1 << 60;

fn primitive_int(v: &[Scalar]) -> Option<Vec<i128>> {
    if !v.iter().all(Scalar::is_real) {
        return None;
    }
    let den = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.re().denom()));
    let nums: Vec<BigInt> = v.iter().map(|c| c.re().numer() * (&den / c.re().denom())).collect();
    let g = nums.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    nums.iter().map(|x| i128::try_from(x / &g).ok().filter(|y| y.abs() < INT_LIMIT)).collect()
}

fn int_direction(r: Vec<i128>) -> Option<Vec<i128>> {
    let lead = *r.iter().find(|&&c| c != 0)?;
    let g = r.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    let g = if lead < 0 { -g } else { g };
    Some(r.into_iter().map(|x| x / g).collect())
}

impl Pts {
    fn new(exact: Vec<Vec<Scalar>>) -> Self {
        let ints = exact.iter().map(|v| primitive_int(v)).collect();
        Pts { exact, ints }
    }

    fn pivot(&self, p: usize) -> usize {
        self.exact[p].iter().position(|c| !c.is_zero()).expect("nonzero point")
    }

    /// Key of `x` modulo `p`: equal for two points iff together with `p`
    /// they span the same plane; `None` when `x` is proportional to `p`.
    fn key(&self, p: usize, piv: usize, x: usize) -> Option<Key> {
        if let Some(ints) = &self.ints {
            let (pv, xv) = (&ints[p], &ints[x]);
            let r = xv.iter().zip(pv).map(|(a, b)| pv[piv] * a - xv[piv] * b).collect();
            return int_direction(r).map(Key::Int);
        }
        let (pv, xv) = (&self.exact[p], &self.exact[x]);
        let f = &xv[piv] / &pv[piv];
        let r: Vec<Scalar> = xv.iter().zip(pv).map(|(a, b)| a - &(&f * b)).collect();
        direction_key(&r).map(Key::Exact)
    }
}

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den.max(1)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SGReport {
    /// Largest `δ` for which the set is a δ-SG configuration: `min_i count_i / m`.
    pub delta_hat: BigRational,
    pub dim: usize,
    /// `count_i`: partners `j` of `i` whose span with `i` holds a third point.
    pub counts: Vec<usize>,
    /// `(i, j, k)` with `i < j` and `v_k ∈ span{v_i, v_j}`, first `k` per pair.
    pub witness_triples: Vec<(usize, usize, usize)>,
}

/// For each position `a` in `idx`: the number of partners whose span with
/// it holds a third point of `idx`, and `(b, c)` position pairs with `a < b`.
fn sg_counts(pts: &Pts, idx: &[usize]) -> Vec<(usize, Vec<(usize, usize)>)> {
    (0..idx.len())
        .into_par_iter()
        .map(|a| {
            let piv = pts.pivot(idx[a]);
            let mut classes: HashMap<Key, Vec<usize>> = HashMap::new();
            let mut keys = Vec::with_capacity(idx.len());
            for (b, &x) in idx.iter().enumerate() {
                let k = if b == a { None } else { pts.key(idx[a], piv, x) };
                if let Some(k) = &k {
                    classes.entry(k.clone()).or_default().push(b);
                }
                keys.push(k);
            }
            let mut count = 0;
            let mut triples = Vec::new();
            for (b, k) in keys.iter().enumerate() {
                let Some(k) = k else { continue };
                let class = &classes[k];
                if class.len() >= 2 {
                    count += 1;
                    if a < b {
                        let third = *class.iter().find(|&&t| t != b).unwrap();
                        triples.push((b, third));
                    }
                }
            }
            (count, triples)
        })
        .collect()
}

pub fn check_delta_sg(ps: &PointSet) -> Result<SGReport> {
    let m = ps.len();
    let Some(n) = ps.ambient() else {
        return Ok(SGReport {
            delta_hat: BigRational::zero(),
            dim: 0,
            counts: Vec::new(),
            witness_triples: Vec::new(),
        });
    };
    debug_assert!(ps.points.iter().all(|p| p.len() == n));
    let (coords, dim) = reduce(&ps.points.iter().map(Vec::as_slice).collect::<Vec<_>>());
    let per = sg_counts(&Pts::new(coords), &(0..m).collect::<Vec<_>>());
    let counts: Vec<usize> = per.iter().map(|(c, _)| *c).collect();
    let mut witness_triples = Vec::new();
    for (i, (_, ts)) in per.into_iter().enumerate() {
        witness_triples.extend(ts.into_iter().map(|(j, k)| (i, j, k)));
    }
    let delta_hat = counts.iter().min().map_or(BigRational::zero(), |&c| ratio(c, m));
    Ok(SGReport { delta_hat, dim, counts, witness_triples })
}

/// `(set, index)` with `set ∈ 0..3` into the caller's three point sets.
pub type PointRef = (usize, usize);

struct EkFrame {
    pts: Pts,
    offset: [usize; 3],
    sizes: [usize; 3],
    extra: Vec<Vec<Scalar>>,
    dim: usize,
}

fn ek_frame(t: [&PointSet; 3], extra: &[Vec<Scalar>]) -> Result<EkFrame> {
    if t.iter().any(|s| s.is_empty()) {
        return precondition("EK point sets must be nonempty");
    }
    let n = t[0].ambient().unwrap();
    for s in &t[1..] {
        if s.ambient() != Some(n) {
            return Err(Error::DimensionMismatch { expected: n, got: s.ambient().unwrap() });
        }
    }
    if let Some(w) = extra.iter().find(|w| w.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: w.len() });
    }
    let all: Vec<(PointRef, &[Scalar])> =
        (0..3).flat_map(|s| t[s].points.iter().enumerate().map(move |(i, p)| ((s, i), p.as_slice()))).collect();
    check_independent(all.iter().map(|(_, p)| *p), |i| {
        let (s, j) = all[i].0;
        format!("T{}[{j}]", s + 1)
    })?;
    let mut vs: Vec<&[Scalar]> = all.iter().map(|(_, p)| *p).collect();
    vs.extend(extra.iter().map(Vec::as_slice));
    let (mut coords, dim) = reduce(&vs);
    let extra_c = coords.split_off(all.len());
    let sizes = [t[0].len(), t[1].len(), t[2].len()];
    let offset = [0, sizes[0], sizes[0] + sizes[1]];
    Ok(EkFrame { pts: Pts::new(coords), offset, sizes, extra: extra_c, dim })
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

impl EkFrame {
    fn id(&self, r: PointRef) -> usize {
        self.offset[r.0] + r.1
    }

    fn point(&self, r: PointRef) -> &[Scalar] {
        &self.pts.exact[self.id(r)]
    }

    fn refs(&self, s: usize) -> impl Iterator<Item = PointRef> {
        (0..self.sizes[s]).map(move |i| (s, i))
    }

    /// Keys modulo `p` of every point of set `s`.
    fn keys_mod(&self, p: PointRef, s: usize) -> Vec<Option<Key>> {
        let pid = self.id(p);
        let piv = self.pts.pivot(pid);
        self.refs(s).map(|r| self.pts.key(pid, piv, self.id(r))).collect()
    }

    /// `Γ_j(p)` and `Γ_k(p)` for `p = T_i[idx]`, where `{j, k}` are the
    /// other two sets in increasing order.
    fn neighborhoods(&self, i: usize, idx: usize) -> [Vec<usize>; 2] {
        let (j, k) = others(i);
        let kj = self.keys_mod((i, idx), j);
        let kk = self.keys_mod((i, idx), k);
        let sj: HashSet<&Key> = kj.iter().flatten().collect();
        let sk: HashSet<&Key> = kk.iter().flatten().collect();
        let gj =
            kj.iter().enumerate().filter(|(_, x)| x.as_ref().is_some_and(|x| sk.contains(x))).map(|(a, _)| a).collect();
        let gk =
            kk.iter().enumerate().filter(|(_, x)| x.as_ref().is_some_and(|x| sj.contains(x))).map(|(a, _)| a).collect();
        [gj, gk]
    }

    /// Smallest neighborhood fraction over all points except `skip`, with the
    /// point attaining it.
    fn min_fraction(&self, skip: &HashSet<PointRef>) -> Option<(BigRational, PointRef)> {
        let refs: Vec<PointRef> = (0..3).flat_map(|s| self.refs(s)).filter(|r| !skip.contains(r)).collect();
        let fr: Vec<(BigRational, PointRef)> = refs
            .par_iter()
            .map(|&(s, i)| {
                let (j, k) = others(s);
                let [gj, gk] = self.neighborhoods(s, i);
                let a = ratio(gj.len(), self.sizes[j]);
                let b = ratio(gk.len(), self.sizes[k]);
                (a.min(b), (s, i))
            })
            .collect();
        fr.into_iter().min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EKCheck {
    pub holds: bool,
    pub dim: usize,
    /// A cross-color pair whose span misses the third set.
    pub missing: Option<(PointRef, PointRef)>,
}

/// Exact (δ = 1) Edelstein–Kelly property.
pub fn check_ek(t: [&PointSet; 3]) -> Result<EKCheck> {
    let f = ek_frame(t, &[])?;
    for s in 0..3 {
        let (j, k) = others(s);
        for i in 0..f.sizes[s] {
            let [gj, gk] = f.neighborhoods(s, i);
            for (other, g) in [(j, gj), (k, gk)] {
                if g.len() < f.sizes[other] {
                    let miss = (0..f.sizes[other]).find(|x| !g.contains(x)).unwrap();
                    return Ok(EKCheck { holds: false, dim: f.dim, missing: Some(((s, i), (other, miss))) });
                }
            }
        }
    }
    Ok(EKCheck { holds: true, dim: f.dim, missing: None })
}

/// Largest `δ` for which the three sets form a δ-EK configuration; fractions
/// are counted against `|T_j|`.
pub fn check_delta_ek(t: [&PointSet; 3]) -> Result<BigRational> {
    let f = ek_frame(t, &[])?;
    Ok(f.min_fraction(&HashSet::new()).map(|(d, _)| d).unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Balanced,
    Unbalanced,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EkOptions {
    /// Classes `V(p,q)₁` of size at least `cover_cutoff · δ² · m₁` get a representative.
    pub cover_cutoff: BigRational,
    /// Unbalanced iff `m₃^split ≤ m₁`.
    pub split_exponent: u32,
    /// Balanced-regime resamples before proceeding with the last sample.
    pub retries: usize,
}

impl Default for EkOptions {
    fn default() -> Self {
        EkOptions { cover_cutoff: ratio(1, 100), split_exponent: 3, retries: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EKCertificate {
    /// The spanning set 𝓘, in the order points were added.
    pub spanning_set: Vec<PointRef>,
    pub regime: Regime,
    /// `⌊C/δ³⌋ + |exceptional|`.
    pub size_bound_claimed: u64,
    /// Points added by the greedy soundness fallback.
    pub fallback_extensions: usize,
    /// Greedy iterations (unbalanced) or samples drawn (balanced).
    pub steps: usize,
    pub span_dim: usize,
    pub w_dim: usize,
    /// Exact check that `span(𝓘 ∪ W)` contains every point.
    pub verified: bool,
}

/// Incremental row echelon basis for span membership.
#[derive(Clone, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    fn residual(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut r = x.to_vec();
        for (piv, row) in &self.rows {
            if !r[*piv].is_zero() {
                let f = r[*piv].clone();
                for (a, b) in r.iter_mut().zip(row) {
                    *a -= &(&f * b);
                }
            }
        }
        r
    }

    fn contains(&self, x: &[Scalar]) -> bool {
        self.residual(x).iter().all(Zero::is_zero)
    }

    fn insert(&mut self, x: &[Scalar]) -> bool {
        let r = self.residual(x);
        let Some(piv) = r.iter().position(|c| !c.is_zero()) else { return false };
        let inv = r[piv].inv().unwrap();
        self.rows.push((piv, r.iter().map(|c| c * &inv).collect()));
        true
    }
}

fn cube_bound(delta: &BigRational) -> u64 {
    let b = BigRational::from_integer(BigInt::from(EK_CONSTANT)) / (delta * delta * delta);
    u64::try_from(b.floor().to_integer()).unwrap_or(u64::MAX)
}

/// Certify that the union of a δ-EK configuration spans a space of dimension
/// `O(1/δ³)` by constructing a small spanning subset 𝓘.
///
/// `w` is a pre-spanned subspace (points inside it are exempt from the EK
/// property) and `exceptional` lists points exempt from it and placed in 𝓘
/// up front. The result is always sound: points left uncovered by the
/// constructive phase are added greedily and counted in
/// `fallback_extensions`.
pub fn certify_ek_span(
    t: [&PointSet; 3],
    delta: &BigRational,
    seed: u64,
    w: Option<&[Vec<Scalar>]>,
    exceptional: &[PointRef],
    opts: &EkOptions,
) -> Result<EKCertificate> {
    if *delta <= BigRational::zero() || *delta > BigRational::one() {
        return precondition("delta must lie in (0, 1]");
    }
    let w = w.unwrap_or(&[]);
    let f = ek_frame(t, w)?;
    if let Some(&(s, i)) = exceptional.iter().find(|&&(s, i)| s > 2 || i >= f.sizes[s]) {
        return precondition(format!("exceptional point T{}[{i}] does not exist", s + 1));
    }
    let mut wspan = Echelon::default();
    for v in &f.extra {
        wspan.insert(v);
    }
    let w_dim = wspan.rows.len();
    let mut exempt: HashSet<PointRef> = exceptional.iter().copied().collect();
    for s in 0..3 {
        for (i, r) in f.refs(s).enumerate() {
            if w_dim > 0 && wspan.contains(f.point(r)) {
                exempt.insert((s, i));
            }
        }
    }
    if let Some((frac, (s, i))) = f.min_fraction(&exempt) {
        if frac < *delta {
            return precondition(format!("T{}[{i}] has neighborhood fraction {frac} < delta {delta}", s + 1));
        }
    }

    // sort sets by size, largest first
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&s| std::cmp::Reverse(f.sizes[s]));
    let m: Vec<usize> = order.iter().map(|&s| f.sizes[s]).collect();
    let (s1, s2, s3) = (order[0], order[1], order[2]);
    let unbalanced = (m[2] as u128).pow(opts.split_exponent) <= m[0] as u128;
    let point = |r: PointRef| f.point(r);

    let mut span = wspan.clone();
    let mut chosen: Vec<PointRef> = Vec::new();
    let add = |r: PointRef, span: &mut Echelon, chosen: &mut Vec<PointRef>| {
        if !chosen.contains(&r) {
            chosen.push(r);
            span.insert(point(r));
        }
    };
    for &r in exceptional {
        add(r, &mut span, &mut chosen);
    }
    let mut steps = 0;
    let regime = if unbalanced {
        let cutoff = &opts.cover_cutoff * delta * delta * BigRational::from_integer(BigInt::from(m[0]));
        while let Some(p) = (0..m[1]).find(|&i| !span.contains(point((s2, i)))) {
            steps += 1;
            add((s2, p), &mut span, &mut chosen);
            let mut classes: HashMap<Key, Vec<usize>> = HashMap::new();
            for (i, k) in f.keys_mod((s2, p), s1).into_iter().enumerate() {
                if let Some(k) = k {
                    classes.entry(k).or_default().push(i);
                }
            }
            let mut seen = HashSet::new();
            for k in f.keys_mod((s2, p), s3) {
                let Some(k) = k else { continue };
                if !seen.insert(k.clone()) {
                    continue;
                }
                if let Some(class) = classes.get(&k) {
                    if ratio(class.len(), 1) >= cutoff {
                        add((s1, class[0]), &mut span, &mut chosen);
                    }
                }
            }
        }
        // maximal subset of the smallest set with disjoint neighborhoods in the largest
        let mut covered: HashSet<usize> = HashSet::new();
        for i in 0..m[2] {
            let [g_a, g_b] = f.neighborhoods(s3, i);
            let g = if s1 < s2 { g_a } else { g_b };
            if g.iter().all(|x| !covered.contains(x)) {
                covered.extend(g);
                add((s3, i), &mut span, &mut chosen);
            }
        }
        Regime::Unbalanced
    } else {
        let mut r = rng::seeded(seed);
        let mut sample: Vec<usize> = Vec::new();
        for attempt in 0..=opts.retries {
            steps += 1;
            sample = (0..m[0]).filter(|_| r.gen_range(0..m[0]) < m[1]).collect();
            if attempt == opts.retries || balanced_sample_ok(&f, s1, s2, s3, &sample, delta, &exempt) {
                break;
            }
        }
        let members =
            (0..m[1]).map(|i| (s2, i)).chain((0..m[2]).map(|i| (s3, i))).chain(sample.iter().map(|&i| (s1, i)));
        for rf in members {
            if !span.contains(point(rf)) {
                add(rf, &mut span, &mut chosen);
            }
        }
        Regime::Balanced
    };

    let mut fallback_extensions = 0;
    for s in 0..3 {
        for i in 0..f.sizes[s] {
            if !span.contains(point((s, i))) {
                fallback_extensions += 1;
                add((s, i), &mut span, &mut chosen);
            }
        }
    }
    let verified = (0..3).all(|s| f.refs(s).all(|r| span.contains(f.point(r))));
    Ok(EKCertificate {
        spanning_set: chosen,
        regime,
        size_bound_claimed: cube_bound(delta).saturating_add(exceptional.len() as u64),
        fallback_extensions,
        steps,
        span_dim: span.rows.len(),
        w_dim,
        verified,
    })
}

/// The sample is accepted when it has at most `2·m₂` points and the union
/// with the two smaller sets is a (δ/8)-SG configuration.
fn balanced_sample_ok(
    f: &EkFrame,
    s1: usize,
    s2: usize,
    s3: usize,
    sample: &[usize],
    delta: &BigRational,
    exempt: &HashSet<PointRef>,
) -> bool {
    let m2 = f.sizes[s2];
    if sample.len() > 2 * m2 {
        return false;
    }
    let refs: Vec<PointRef> = f.refs(s2).chain(f.refs(s3)).chain(sample.iter().map(|&i| (s1, i))).collect();
    let ids: Vec<usize> = refs.iter().map(|&r| f.id(r)).collect();
    let counts = sg_counts(&f.pts, &ids);
    let need = delta / BigRational::from_integer(BigInt::from(8));
    refs.iter().zip(&counts).all(|(r, (c, _))| exempt.contains(r) || ratio(*c, refs.len()) >= need)
}

/// Per-triple case labels found by the classifier on witnessed triples; a
/// triple may carry several labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CaseCensus {
    pub span: usize,
    pub pencil_square: usize,
    pub codim2: usize,
    pub unknown: usize,
}

impl CaseCensus {
    fn record(&mut self, labels: &[&str]) {
        if labels.is_empty() {
            self.unknown += 1;
        }
        for l in labels {
            match *l {
                "Span" => self.span += 1,
                "PencilSquare" => self.pencil_square += 1,
                _ => self.codim2 += 1,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairOutcome {
    pub a: PointRef,
    pub b: PointRef,
    /// Index of a form in the search set lying in `√(Q_a, Q_b)`.
    pub witness: Option<usize>,
    /// Membership exponent for the witness.
    pub power: Option<u32>,
    /// Candidates the membership engine could not decide.
    pub undetermined: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSetReport {
    pub hypothesis_holds: bool,
    pub pairs: Vec<PairOutcome>,
    /// Pairs where every candidate was refuted.
    pub missing_pairs: Vec<(PointRef, PointRef)>,
    /// Pairs without a witness where some candidate stayed undecided.
    pub undetermined_pairs: Vec<(PointRef, PointRef)>,
    pub span_dim: usize,
    /// Exact span dimension of each input set (one entry for the SG checker).
    pub set_span_dims: Vec<usize>,
    pub case_census: CaseCensus,
}

fn mix(seed: u64, parts: &[usize]) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        h = (h ^ p as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 31;
    }
    h
}

fn coeff_rank(forms: &[&QuadraticForm]) -> usize {
    let Some(f) = forms.first() else { return 0 };
    let n = f.nvars();
    vectors_rank(&forms.iter().map(|q| q.coefficients()).collect::<Vec<_>>(), n * (n + 1) / 2)
}

fn check_quadratic_family(forms: &[(PointRef, &QuadraticForm)]) -> Result<()> {
    let name = |r: PointRef| format!("T{}[{}]", r.0 + 1, r.1);
    let Some((_, f0)) = forms.first() else { return Ok(()) };
    for &(r, q) in forms {
        if q.nvars() != f0.nvars() {
            return Err(Error::DimensionMismatch { expected: f0.nvars(), got: q.nvars() });
        }
        if q.is_zero() || q.rank() == 2 {
            return precondition(format!("{} is neither irreducible nor a square", name(r)));
        }
    }
    let coeffs: Vec<Vec<Scalar>> = forms.iter().map(|(_, q)| q.coefficients()).collect();
    check_independent(coeffs.iter().map(Vec::as_slice), |i| name(forms[i].0))
}

/// Witness index with its membership power, and the undecided candidates.
type PairSearch = (Option<(usize, u32)>, Vec<usize>);

/// Search `candidates` for a form in `√(Q_a, Q_b)`: span members first, then
/// the membership engine in index order.
fn search_pair(
    qa: &QuadraticForm,
    qb: &QuadraticForm,
    candidates: &[(usize, &QuadraticForm)],
    budget: Budget,
    seed: u64,
) -> Result<PairSearch> {
    for &(k, q) in candidates {
        if span_case(q, qa, qb)?.is_some() {
            return Ok((Some((k, 1)), Vec::new()));
        }
    }
    let mut undetermined = Vec::new();
    for &(k, q) in candidates {
        match radical_member(&q.to_poly(), qa, qb, budget, mix(seed, &[k]))? {
            MembershipVerdict::Member { k: pw, .. } => return Ok((Some((k, pw)), undetermined)),
            MembershipVerdict::NonMember(_) => {}
            MembershipVerdict::Unknown { .. } => undetermined.push(k),
        }
    }
    Ok((None, undetermined))
}

fn assemble(
    pairs: Vec<PairOutcome>,
    census_input: Vec<Option<(&QuadraticForm, &QuadraticForm, &QuadraticForm)>>,
    budget: Budget,
    seed: u64,
    span_dim: usize,
    set_span_dims: Vec<usize>,
) -> Result<QuadSetReport> {
    let mut case_census = CaseCensus::default();
    for (idx, triple) in census_input.into_iter().enumerate() {
        if let Some((q, q1, q2)) = triple {
            let c = classify(q, q1, q2, budget, mix(seed, &[idx, usize::MAX]))?;
            case_census.record(&c.labels());
        }
    }
    let missing_pairs =
        pairs.iter().filter(|p| p.witness.is_none() && p.undetermined.is_empty()).map(|p| (p.a, p.b)).collect();
    let undetermined_pairs =
        pairs.iter().filter(|p| p.witness.is_none() && !p.undetermined.is_empty()).map(|p| (p.a, p.b)).collect();
    Ok(QuadSetReport {
        hypothesis_holds: pairs.iter().all(|p| p.witness.is_some()),
        pairs,
        missing_pairs,
        undetermined_pairs,
        span_dim,
        set_span_dims,
        case_census,
    })
}

/// Hypothesis of the quadratic Sylvester–Gallai theorem: for every pair
/// `i ≠ j` some `Q_k`, `k ∉ {i, j}`, lies in `√(Q_i, Q_j)`.
pub fn check_quadratic_sg(forms: &[QuadraticForm], budget: Budget, seed: u64) -> Result<QuadSetReport> {
    let tagged: Vec<(PointRef, &QuadraticForm)> = forms.iter().enumerate().map(|(i, q)| ((0, i), q)).collect();
    check_quadratic_family(&tagged)?;
    let m = forms.len();
    let pair_list: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let results = pair_list
        .par_iter()
        .map(|&(i, j)| {
            let cands: Vec<(usize, &QuadraticForm)> =
                (0..m).filter(|&k| k != i && k != j).map(|k| (k, &forms[k])).collect();
            search_pair(&forms[i], &forms[j], &cands, budget, mix(seed, &[i, j]))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    let mut census = Vec::new();
    for (&(i, j), (w, undetermined)) in pair_list.iter().zip(results) {
        census.push(w.map(|(k, _)| (&forms[k], &forms[i], &forms[j])));
        pairs.push(PairOutcome { a: (0, i), b: (0, j), witness: w.map(|x| x.0), power: w.map(|x| x.1), undetermined });
    }
    let all: Vec<&QuadraticForm> = forms.iter().collect();
    let dim = coeff_rank(&all);
    assemble(pairs, census, budget, seed, dim, vec![dim])
}

/// Hypothesis of the colored quadratic theorem: for every pair from two
/// different sets some form of the third set lies in their radical.
pub fn check_quadratic_ek(t: [&[QuadraticForm]; 3], budget: Budget, seed: u64) -> Result<QuadSetReport> {
    let tagged: Vec<(PointRef, &QuadraticForm)> =
        (0..3).flat_map(|s| t[s].iter().enumerate().map(move |(i, q)| ((s, i), q))).collect();
    check_quadratic_family(&tagged)?;
    let mut pair_list = Vec::new();
    for a in 0..3 {
        for b in a + 1..3 {
            for i in 0..t[a].len() {
                for j in 0..t[b].len() {
                    pair_list.push(((a, i), (b, j)));
                }
            }
        }
    }
    let results = pair_list
        .par_iter()
        .map(|&((a, i), (b, j))| {
            let c = 3 - a - b;
            let cands: Vec<(usize, &QuadraticForm)> = t[c].iter().enumerate().collect();
            search_pair(&t[a][i], &t[b][j], &cands, budget, mix(seed, &[a, i, b, j]))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    let mut census = Vec::new();
    for (&((a, i), (b, j)), (w, undetermined)) in pair_list.iter().zip(results) {
        let c = 3 - a - b;
        census.push(w.map(|(k, _)| (&t[c][k], &t[a][i], &t[b][j])));
        pairs.push(PairOutcome { a: (a, i), b: (b, j), witness: w.map(|x| x.0), power: w.map(|x| x.1), undetermined });
    }
    let all: Vec<&QuadraticForm> = tagged.iter().map(|(_, q)| *q).collect();
    let set_dims = (0..3).map(|s| coeff_rank(&t[s].iter().collect::<Vec<_>>())).collect();
    assemble(pairs, census, budget, seed, coeff_rank(&all), set_dims)
}

// ---------------------------------------------------------------------------
// Generators

/// `per_line` points on each of three concurrent lines of the projective
/// plane: `(t, 0, 1)`, `(0, t, 1)`, `(t, t, 1)` for `t = 1..=per_line`.
pub fn three_line_family(per_line: usize) -> PointSet {
    let mut pts = Vec::new();
    for t in 1..=per_line as i64 {
        pts.push(vec![t, 0, 1]);
        pts.push(vec![0, t, 1]);
        pts.push(vec![t, t, 1]);
    }
    let rows: Vec<&[i64]> = pts.iter().map(Vec::as_slice).collect();
    PointSet::from_i64(&rows, None).expect("distinct affine points")
}

#[derive(Clone, Debug)]
pub struct PlantedEk {
    pub sets: [PointSet; 3],
    /// Guaranteed lower bound on the EK fraction of every point.
    pub delta: BigRational,
    pub ambient_dim: usize,
}

/// Three colored sets spread round-robin over `planes` two-dimensional
/// subspaces of a fixed 4-dimensional subspace of `ℚⁿ`. Two points on a
/// common plane span it, so each point sees at least `⌊m_j / planes⌋` partners
/// of each other color.
pub fn planted_ek(sizes: [usize; 3], planes: usize, n: usize, seed: u64) -> Result<PlantedEk> {
    if n < 4 || planes < 2 {
        return precondition("planted EK family needs n ≥ 4 and at least two planes");
    }
    if sizes.iter().any(|&m| m < planes) {
        return precondition("every set needs a point on every plane");
    }
    let mut r = rng::seeded(seed);
    let basis: Vec<(Vec<Scalar>, Vec<Scalar>)> = loop {
        let pl: Vec<(Vec<Scalar>, Vec<Scalar>)> =
            (0..planes).map(|_| (rng::random_vector(&mut r, 4, 5), rng::random_vector(&mut r, 4, 5))).collect();
        let ok = (0..planes).all(|a| {
            (a + 1..planes)
                .all(|b| vectors_rank(&[pl[a].0.clone(), pl[a].1.clone(), pl[b].0.clone(), pl[b].1.clone()], 4) == 4)
        });
        if ok {
            break pl;
        }
    };
    let embed = loop {
        let e = ExactMatrix::from_rows((0..n).map(|_| rng::random_vector(&mut r, 4, 9)).collect());
        if e.rank() == 4 {
            break e;
        }
    };
    let mut counter = vec![0i64; planes];
    let mut sets = Vec::new();
    for (s, &m) in sizes.iter().enumerate() {
        let mut pts = Vec::with_capacity(m);
        for j in 0..m {
            let a = j % planes;
            counter[a] += 1;
            let t = Scalar::from_int(counter[a]);
            let v: Vec<Scalar> = basis[a].0.iter().zip(&basis[a].1).map(|(u, w)| u + &(&t * w)).collect();
            pts.push(embed.mul_vec(&v));
        }
        sets.push(PointSet::new(pts, Some(s as u8 + 1))?);
    }
    let delta = sizes.iter().map(|&m| ratio(m / planes, m)).min().unwrap();
    let sets: [PointSet; 3] = sets.try_into().unwrap();
    Ok(PlantedEk { sets, delta, ambient_dim: 4 })
}

const ZETA: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

fn zeta(k: usize) -> Scalar {
    Scalar::gaussian(ZETA[k].0, ZETA[k].1)
}

/// The twelve lines `x − ζy`, `y − ζz`, `z − ζx` with `ζ⁴ = 1`: any two of
/// them have a third in their span.
pub fn fermat_lines() -> Vec<LinearForm> {
    let mut out = Vec::new();
    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
        for k in 0..4 {
            let mut c = vec![Scalar::zero(); 3];
            c[a] = Scalar::one();
            c[b] = -&zeta(k);
            out.push(LinearForm::new(c));
        }
    }
    out
}

/// Colored family `T₁ = {A − ζB}`, `T₂ = {B − ζC}`, `T₃ = {C − ζA}` over
/// random irreducible `A, B, C`: the span of a cross pair holds a member of
/// the third set.
pub fn colored_quadratic_family(nvars: usize, seed: u64) -> Result<[Vec<QuadraticForm>; 3]> {
    if nvars < 3 {
        return precondition("colored family needs at least 3 variables");
    }
    let mut r = rng::seeded(seed);
    loop {
        let abc: Vec<QuadraticForm> = (0..3).map(|_| rng::random_quadratic(&mut r, nvars, 3)).collect();
        if coeff_rank(&abc.iter().collect::<Vec<_>>()) < 3 {
            continue;
        }
        let sets: Vec<Vec<QuadraticForm>> =
            (0..3).map(|s| (0..4).map(|k| abc[s].sub(&abc[(s + 1) % 3].scale(&zeta(k)))).collect()).collect();
        if sets.iter().flatten().all(|q| q.rank() >= 3) {
            return Ok(sets.try_into().unwrap());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilFamily {
    pub q1: QuadraticForm,
    pub q2: QuadraticForm,
    /// Members `F_i = Q₁ + ℓ_i² = β_i Q₂ + b_i²`.
    pub members: Vec<QuadraticForm>,
}

/// A pencil with two rank-2 members `Q₁ − β_t Q₂ = a_t a′_t` and family
/// members obtained from the splittings `b − ℓ = s·a_t`, `b + ℓ = a′_t / s`.
pub fn gen_pencil_family(nvars: usize, scalings: usize, seed: u64) -> Result<PencilFamily> {
    if nvars < 4 {
        return precondition("pencil family needs at least 4 variables");
    }
    let mut r = rng::seeded(seed);
    loop {
        let a: Vec<LinearForm> = (0..4).map(|_| rng::random_linear_form(&mut r, nvars, 4)).collect();
        if forms_rank(&a) < 4 {
            continue;
        }
        let (b1, b2) = (Scalar::from_int(1), Scalar::from_int(-2));
        let p1 = QuadraticForm::product(&a[0], &a[1]);
        let p2 = QuadraticForm::product(&a[2], &a[3]);
        let q2 = p1.sub(&p2).scale(&(&b2 - &b1).inv().unwrap());
        let q1 = p1.add(&q2.scale(&b1));
        if q1.rank() < 3 || q2.rank() < 3 {
            continue;
        }
        let half = Scalar::from_frac(1, 2);
        let mut members = Vec::new();
        for (x, y) in [(&a[0], &a[1]), (&a[2], &a[3])] {
            for s in 1..=scalings as i64 {
                let s = Scalar::from_int(s);
                let l = y.scale(&s.inv().unwrap()).sub(&x.scale(&s)).scale(&half);
                members.push(q1.add(&QuadraticForm::square(&l)));
            }
        }
        return Ok(PencilFamily { q1, q2, members });
    }
}

/// Recover `ℓ_i` and `b_i` (up to scale) for every member and return them
/// with the exact rank of their span. Errors if a member does not have the
/// required shape.
pub fn pencil_family_forms(f: &PencilFamily) -> Result<(Vec<LinearForm>, usize)> {
    let mut forms = Vec::new();
    for (i, m) in f.members.iter().enumerate() {
        let Some((_, l)) = m.sub(&f.q1).is_square() else {
            return precondition(format!("member {i} minus Q1 is not a square"));
        };
        match pencil_square(&f.q2, m)? {
            Some(PencilSquare::Explicit { l: b, .. }) => {
                forms.push(l);
                forms.push(b);
            }
            _ => return precondition(format!("member {i} is not a square modulo the span of Q2")),
        }
    }
    let rank = forms_rank(&forms);
    Ok((forms, rank))
}
