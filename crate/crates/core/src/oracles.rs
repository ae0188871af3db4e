//! Brute-force checks that share no code path with the exact engine:
//! lattice-point counts of dilated moment polytopes, the monomial-basis
//! approximations `S_m` and `δ_m`, and randomized membership audits.

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::invariants::{delta, ToricValuation};
use crate::linalg::{self, RationalVector};
use crate::toric::{fmt_vec, Scope, ToricCouple};
use crate::walls::{membership, SemiAlgebraicSet};
use crate::{Integer, Rational};

/// Lattice points of `{p : ⟨p, v_i⟩ ≥ -rhs_i}`: their number and the sum
/// of their coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSample {
    pub m: u32,
    pub count: u64,
    pub coordinate_sum: Vec<i128>,
}

fn to_i64(v: &Integer) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::InvalidInput("lattice scan exceeds 64-bit range".into()))
}

/// Vertices found by solving every `d`-subset of the facet equations.
fn brute_vertices(normals: &[RationalVector], rhs: &[Rational]) -> Vec<RationalVector> {
    let d = normals[0].len();
    let n = normals.len();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let rows: Vec<RationalVector> = idx.iter().map(|&i| normals[i].clone()).collect();
        let b: Vec<Rational> = idx.iter().map(|&i| -rhs[i].clone()).collect();
        if let Some(p) = linalg::solve(&rows, &b) {
            if (0..n).all(|i| !(linalg::dot(&p, &normals[i]) + &rhs[i]).is_negative()) {
                out.push(p);
            }
        }
        // Next combination in lexicographic order.
        let mut i = d;
        loop {
            if i == 0 {
                out.sort();
                out.dedup();
                return out;
            }
            i -= 1;
            if idx[i] < n - d + i {
                idx[i] += 1;
                for j in i + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Scans the bounding box slab by slab in the first coordinate.
pub fn lattice_sample(normals: &[Vec<i64>], rhs: &[i64], m: u32) -> LatticeSample {
    let d = normals[0].len();
    let nq: Vec<RationalVector> = normals.iter().map(|v| linalg::qvec(v)).collect();
    let rq: Vec<Rational> = rhs.iter().map(|&r| Rational::from_integer(r.into())).collect();
    let verts = brute_vertices(&nq, &rq);
    if verts.is_empty() {
        return LatticeSample { m, count: 0, coordinate_sum: vec![0; d] };
    }
    let lo: Vec<i64> = (0..d)
        .map(|i| verts.iter().map(|v| v[i].floor().to_integer()).min().unwrap().to_i64().unwrap())
        .collect();
    let hi: Vec<i64> = (0..d)
        .map(|i| verts.iter().map(|v| v[i].ceil().to_integer()).max().unwrap().to_i64().unwrap())
        .collect();
    let slabs: Vec<(u64, Vec<i128>)> = (lo[0]..=hi[0])
        .into_par_iter()
        .map(|first| {
            let mut count = 0u64;
            let mut sum = vec![0i128; d];
            let mut p = lo.clone();
            p[0] = first;
            loop {
                if normals
                    .iter()
                    .zip(rhs)
                    .all(|(v, r)| v.iter().zip(&p).map(|(a, b)| a * b).sum::<i64>() + r >= 0)
                {
                    count += 1;
                    for (s, &c) in sum.iter_mut().zip(&p) {
                        *s += c as i128;
                    }
                }
                let mut i = d - 1;
                loop {
                    if i == 0 {
                        return (count, sum);
                    }
                    p[i] += 1;
                    if p[i] <= hi[i] {
                        break;
                    }
                    p[i] = lo[i];
                    i -= 1;
                }
            }
        })
        .collect();
    let mut count = 0;
    let mut coordinate_sum = vec![0i128; d];
    for (c, s) in slabs {
        count += c;
        for (a, b) in coordinate_sum.iter_mut().zip(s) {
            *a += b;
        }
    }
    LatticeSample { m, count, coordinate_sum }
}

/// Lattice points of `m·P(x)` with the floor convention `⌊m·b_i(x)⌋`.
pub fn couple_lattice_sample(c: &ToricCouple, x: &[Rational], m: u32) -> Result<LatticeSample> {
    if m == 0 {
        return Err(Error::InvalidInput("dilation must be positive".into()));
    }
    if x.len() != c.k() || !c.in_closure(x) {
        return Err(Error::OutsideDomain(format!("x = {} is not in the weak log Fano closure", fmt_vec(x))));
    }
    let mq = Rational::from_integer(m.into());
    let normals = c.fan().rays().iter().map(|r| r.iter().map(to_i64).collect()).collect::<Result<Vec<Vec<i64>>>>()?;
    let rhs = c
        .b_at(x)
        .iter()
        .map(|b| to_i64(&(b * &mq).floor().to_integer()))
        .collect::<Result<Vec<i64>>>()?;
    Ok(lattice_sample(&normals, &rhs, m))
}

/// `#(m·P(x) ∩ Z^d) / m^d`.
pub fn ehrhart_volume_oracle(c: &ToricCouple, x: &[Rational], m: u32) -> Result<Rational> {
    let s = couple_lattice_sample(c, x, m)?;
    Ok(Rational::new(s.count.into(), Integer::from(m).pow(c.dim() as u32)))
}

fn min_over_vertices(c: &ToricCouple, x: &[Rational], u: &[Rational]) -> Rational {
    let normals: Vec<RationalVector> = (0..c.n_rays()).map(|i| c.fan().ray_q(i)).collect();
    brute_vertices(&normals, &c.b_at(x))
        .iter()
        .map(|v| linalg::dot(v, u))
        .min()
        .expect("nonempty polytope")
}

fn s_m_from_sample(sample: &LatticeSample, min: &Rational, u: &[Rational]) -> Rational {
    let m = Rational::from_integer(sample.m.into());
    let n = Rational::from_integer(sample.count.into());
    let pair: Rational = sample
        .coordinate_sum
        .iter()
        .zip(u)
        .map(|(s, ui)| Rational::from_integer((*s).into()) * ui)
        .sum();
    (pair - &n * &m * min) / (m * n)
}

/// `S_m(u) = (1/(m N_m)) Σ_p (⟨p, u⟩ - m·min_{P(x)} ⟨·, u⟩)` over the
/// lattice points of `m·P(x)`.
pub fn s_m_oracle(c: &ToricCouple, x: &[Rational], u: &ToricValuation, m: u32) -> Result<Rational> {
    let sample = couple_lattice_sample(c, x, m)?;
    if sample.count == 0 {
        return Err(Error::ZeroVolume);
    }
    let dir = u.direction();
    Ok(s_m_from_sample(&sample, &min_over_vertices(c, x, &dir), &dir))
}

/// Log discrepancy from a ray-basis expansion of `u` in its cone.
fn oracle_log_discrepancy(c: &ToricCouple, x: &[Rational], u: &[Rational]) -> Rational {
    let fan = c.fan();
    let cone = (0..fan.max_cones().len()).find(|&i| fan.cone_contains(i, u)).expect("complete fan");
    let rays = &fan.max_cones()[cone];
    let gens: Vec<RationalVector> = rays.iter().map(|&i| fan.ray_q(i)).collect();
    let basis: Vec<usize> = linalg::independent_rows(&gens);
    // Solve u = Σ λ_i v_i: transpose of the ray matrix.
    let d = u.len();
    let cols: Vec<RationalVector> = (0..d).map(|r| basis.iter().map(|&b| gens[b][r].clone()).collect()).collect();
    let lambda = linalg::solve(&cols, u).expect("basis spans");
    let b = c.b_at(x);
    basis.iter().zip(&lambda).map(|(&bi, l)| l * &b[rays[bi]]).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMOracle {
    pub value: Rational,
    pub minimizer: RationalVector,
    pub directions: usize,
}

/// Minimum of `A(u)/S_m(u)` over the fan rays and `extra` seeded random
/// integer directions with entries in `[-5, 5]`.
pub fn delta_m_oracle_with(c: &ToricCouple, x: &[Rational], m: u32, extra: usize, seed: u64) -> Result<DeltaMOracle> {
    let sample = couple_lattice_sample(c, x, m)?;
    if sample.count == 0 {
        return Err(Error::ZeroVolume);
    }
    let d = c.dim();
    let mut dirs: Vec<RationalVector> = (0..c.n_rays()).map(|i| c.fan().ray_q(i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while dirs.len() < c.n_rays() + extra {
        let v: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
        if v.iter().any(|&t| t != 0) {
            dirs.push(linalg::qvec(&v));
        }
    }
    let mut best: Option<(Rational, RationalVector)> = None;
    for u in &dirs {
        let s = s_m_from_sample(&sample, &min_over_vertices(c, x, u), u);
        if !s.is_positive() {
            continue;
        }
        let r = oracle_log_discrepancy(c, x, u) / s;
        if best.as_ref().is_none_or(|(b, _)| &r < b) {
            best = Some((r, u.clone()));
        }
    }
    let (value, minimizer) = best.ok_or(Error::ZeroVolume)?;
    Ok(DeltaMOracle { value, minimizer, directions: dirs.len() })
}

pub fn delta_m_oracle(c: &ToricCouple, x: &[Rational], m: u32) -> Result<DeltaMOracle> {
    delta_m_oracle_with(c, x, m, 200, 0)
}

/// Seeded rational points of `P`: convex combinations of its vertices with
/// integer weights.
pub fn random_points(c: &ToricCouple, n: usize, seed: u64) -> Vec<RationalVector> {
    let verts = c.coeff_polytope().vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let w: Vec<i64> = verts.iter().map(|_| rng.gen_range(0..=24)).collect();
            let total: i64 = w.iter().sum();
            if total == 0 {
                continue;
            }
            let mut x = vec![Rational::zero(); c.k()];
            for (v, &wi) in verts.iter().zip(&w) {
                x = linalg::add(&x, &linalg::scale(v, &Rational::new(wi.into(), total.into())));
            }
            break x;
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub x: RationalVector,
    pub membership: bool,
    pub direct: bool,
    pub delta: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub checked: usize,
    pub members: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Direct evaluation: log Fano in `P` and `δ(x) ≥ τ`.
pub fn direct_membership(c: &ToricCouple, x: &[Rational], tau: &Rational) -> (bool, Option<Rational>) {
    if !c.is_log_fano(x, Scope::Coefficient) {
        return (false, None);
    }
    let d = delta(c, x).ok().map(|d| d.delta);
    (d.as_ref().is_some_and(|d| d >= tau), d)
}

pub fn audit_points(c: &ToricCouple, set: &SemiAlgebraicSet, tau: &Rational, points: &[RationalVector]) -> AuditReport {
    let results: Vec<(bool, Option<Discrepancy>)> = points
        .par_iter()
        .map(|x| {
            let m = membership(set, x);
            let (direct, delta) = direct_membership(c, x, tau);
            let disc = (m != direct).then(|| Discrepancy { x: x.clone(), membership: m, direct, delta });
            (m, disc)
        })
        .collect();
    AuditReport {
        checked: points.len(),
        members: results.iter().filter(|(m, _)| *m).count(),
        discrepancies: results.into_iter().filter_map(|(_, d)| d).collect(),
    }
}

pub fn random_audit(c: &ToricCouple, set: &SemiAlgebraicSet, tau: &Rational, n: usize, seed: u64) -> AuditReport {
    audit_points(c, set, tau, &random_points(c, n, seed))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosednessReport {
    pub sequences: usize,
    /// Sequences whose terms all lie in the set and whose limit lies in
    /// `P ∩ LF`.
    pub applicable: usize,
    pub failures: Vec<RationalVector>,
}

impl ClosednessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Sequences `x_n = L + (y - L)/2^n` with `y` a member and `L` a boundary
/// candidate: a chamber vertex of a piece, a rational root of a constraint
/// or a random point of `P`. Whenever all terms are members and `L` is in
/// `P ∩ LF`, `L` must be a member.
pub fn closedness_audit(c: &ToricCouple, set: &SemiAlgebraicSet, sequences: usize, terms: u32, seed: u64) -> ClosednessReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = random_points(c, 400, seed ^ 0x5eed);
    let members: Vec<&RationalVector> = pool.iter().filter(|x| membership(set, x)).collect();
    let mut limits: Vec<RationalVector> = Vec::new();
    for piece in &set.pieces {
        limits.extend(piece.chamber.vertices().iter().cloned());
        if set.ambient_dim == 1 {
            let (lo, hi) = (piece.chamber.vertices()[0][0].clone(), piece.chamber.vertices().last().unwrap()[0].clone());
            for con in &piece.inequalities {
                for r in crate::algebraic::isolate_roots(&con.poly.to_int_poly(), &lo, &hi) {
                    if let Some(q) = r.as_rational() {
                        limits.push(vec![q]);
                    }
                }
            }
        }
    }
    limits.extend(pool.iter().take(64).cloned());
    limits.sort();
    limits.dedup();
    if members.is_empty() || limits.is_empty() {
        return ClosednessReport { sequences: 0, applicable: 0, failures: Vec::new() };
    }
    let jobs: Vec<(RationalVector, RationalVector)> = (0..sequences)
        .map(|_| {
            let l = limits[rng.gen_range(0..limits.len())].clone();
            let y = members[rng.gen_range(0..members.len())].clone();
            (l, y)
        })
        .collect();
    let outcomes: Vec<(bool, bool)> = jobs
        .par_iter()
        .map(|(l, y)| {
            let diff = linalg::sub(y, l);
            let all_in = (1..=terms).all(|n| {
                let t = Rational::new(Integer::one(), Integer::one() << n);
                membership(set, &linalg::add(l, &linalg::scale(&diff, &t)))
            });
            let applicable = all_in && c.is_log_fano(l, Scope::Coefficient);
            (applicable, applicable && !membership(set, l))
        })
        .collect();
    ClosednessReport {
        sequences,
        applicable: outcomes.iter().filter(|(a, _)| *a).count(),
        failures: jobs
            .into_iter()
            .zip(&outcomes)
            .filter(|(_, (_, f))| *f)
            .map(|((l, _), _)| l)
            .collect(),
    }
}

/// `|a/b - 1|` as a float, for reporting oracle tolerances.
pub fn relative_error(a: &Rational, b: &Rational) -> f64 {
    let r = a / b - Rational::one();
    r.abs().to_f64().unwrap_or(f64::INFINITY)
}

/// Least common multiple of the denominators of `x`; dilations by its
/// multiples make `m·b_i(x)` integral for integral divisors.
pub fn integral_dilation(x: &[Rational]) -> Integer {
    x.iter().fold(Integer::one(), |l, v| l.lcm(v.denom()))
}
