//! Log discrepancy, expected vanishing order, β and the toric δ-invariant
//! of toric couples, evaluated exactly along monomial valuations.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::chambers::{ChamberComplex, PiecewiseRationalFunction, RationalPiece};
use crate::error::{Error, Result};
use crate::geometry::{fan_refinement, first_moment, min_support, normal_fan, Fan, RationalPolyhedron};
use crate::linalg::{self, RationalVector};
use crate::poly::MultiPoly;
use crate::toric::{fmt_vec, AffineForm, Scope, ToricCouple};
use crate::{Integer, Rational};

/// Monomial valuation `wt_u`, stored as a primitive lattice vector times a
/// positive rational multiplier.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ToricValuation {
    primitive: Vec<Integer>,
    multiplier: Rational,
}

impl ToricValuation {
    pub fn new(u: &[Rational]) -> Result<Self> {
        if u.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput("valuation direction must be nonzero".into()));
        }
        let primitive = linalg::primitive_integer(u);
        let i = primitive.iter().position(|v| !v.is_zero()).unwrap();
        let multiplier = &u[i] / Rational::from_integer(primitive[i].clone());
        Ok(Self { primitive, multiplier })
    }

    pub fn from_ints(u: &[i64]) -> Result<Self> {
        Self::new(&linalg::qvec(u))
    }

    pub fn primitive(&self) -> &[Integer] {
        &self.primitive
    }

    pub fn multiplier(&self) -> &Rational {
        &self.multiplier
    }

    pub fn direction(&self) -> RationalVector {
        self.primitive
            .iter()
            .map(|v| Rational::from_integer(v.clone()) * &self.multiplier)
            .collect()
    }

    pub fn scaled(&self, lambda: &Rational) -> Self {
        assert!(lambda.is_positive());
        Self {
            primitive: self.primitive.clone(),
            multiplier: &self.multiplier * lambda,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantRecord {
    pub a: Rational,
    pub s: Rational,
    pub beta: Rational,
    /// `A/S`, defined when `S > 0`.
    pub ratio: Option<Rational>,
    pub x: RationalVector,
    pub u: ToricValuation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub ray: Vec<Integer>,
    pub a: Rational,
    pub s: Rational,
    pub ratio: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaResult {
    pub delta: Rational,
    pub minimizer: ToricValuation,
    /// Rays examined, in lexicographic order.
    pub candidates: Vec<Candidate>,
}

fn require_closure(c: &ToricCouple, x: &[Rational]) -> Result<()> {
    if x.len() != c.k() {
        return Err(Error::DimensionMismatch { expected: c.k(), got: x.len() });
    }
    if !c.in_closure(x) {
        return Err(Error::OutsideDomain(format!(
            "x = {} is not in the log Fano closure",
            fmt_vec(x)
        )));
    }
    Ok(())
}

fn require_lf(c: &ToricCouple, x: &[Rational]) -> Result<()> {
    require_closure(c, x)?;
    if !c.is_log_fano(x, Scope::Orthant) {
        return Err(Error::OutsideDomain(format!("x = {} is not log Fano", fmt_vec(x))));
    }
    Ok(())
}

fn check_u(c: &ToricCouple, u: &ToricValuation) -> Result<()> {
    if u.primitive.len() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), got: u.primitive.len() });
    }
    Ok(())
}

/// `A` as an affine function of `x`: on the cone σ containing `u` the
/// log discrepancy is `-⟨m_σ(x), u⟩`.
pub fn log_discrepancy_form(c: &ToricCouple, u: &[Rational]) -> AffineForm {
    let cone = c.fan().containing_cone(u).expect("complete fan");
    let f = c.cone_functional(cone).pair(u);
    f.negated()
}

pub fn log_discrepancy(c: &ToricCouple, x: &[Rational], u: &ToricValuation) -> Result<Rational> {
    check_u(c, u)?;
    require_closure(c, x)?;
    Ok(log_discrepancy_form(c, &u.direction()).eval(x))
}

fn s_from_polytope(p: &RationalPolyhedron, u: &[Rational]) -> Result<Rational> {
    let (vol, mom) = first_moment(p)?;
    if vol.is_zero() {
        return Err(Error::ZeroVolume);
    }
    Ok(linalg::dot(&mom, u) / vol - min_support(p, u)?)
}

/// `S(wt_u) = ⟨barycenter(P(x)), u⟩ - min_{P(x)} ⟨·, u⟩`.
pub fn s_invariant(c: &ToricCouple, x: &[Rational], u: &ToricValuation) -> Result<Rational> {
    check_u(c, u)?;
    let p = c.anticanonical_polytope(x)?;
    s_from_polytope(&p, &u.direction())
}

pub fn beta(c: &ToricCouple, x: &[Rational], u: &ToricValuation) -> Result<InvariantRecord> {
    let a = log_discrepancy(c, x, u)?;
    let s = s_invariant(c, x, u)?;
    let ratio = s.is_positive().then(|| &a / &s);
    Ok(InvariantRecord {
        beta: &a - &s,
        a,
        s,
        ratio,
        x: x.to_vec(),
        u: u.clone(),
    })
}

/// Rays of the common refinement of the fan and the normal fan of `p`.
/// When every maximal cone of the fan lies in a normal cone of `p` the
/// refinement is the fan itself.
pub fn candidate_rays(fan: &Fan, p: &RationalPolyhedron) -> Result<Vec<Vec<Integer>>> {
    let nf = normal_fan(p)?;
    let refines = fan.max_cones().iter().all(|cone| {
        nf.max_cones().iter().enumerate().any(|(j, _)| {
            cone.iter().all(|&i| nf.cone_contains(j, &fan.ray_q(i)))
        })
    });
    let mut rays = if refines {
        fan.rays().to_vec()
    } else {
        fan_refinement(fan, &nf)?.rays().to_vec()
    };
    rays.sort();
    rays.dedup();
    Ok(rays)
}

/// Exact toric δ: the minimum of `A/S` over the rays of the common
/// refinement of the fan and the normal fan of `P(x)`. Ties go to the
/// lexicographically first ray.
pub fn delta(c: &ToricCouple, x: &[Rational]) -> Result<DeltaResult> {
    require_closure(c, x)?;
    let p = c.anticanonical_polytope(x)?;
    if !p.is_full_dimensional() {
        return Err(Error::OutsideDomain(format!("P(x) has zero volume at x = {}", fmt_vec(x))));
    }
    let (vol, mom) = first_moment(&p)?;
    let mut candidates = Vec::new();
    for ray in candidate_rays(c.fan(), &p)? {
        let u = linalg::int_to_q(&ray);
        let a = log_discrepancy_form(c, &u).eval(x);
        let s = linalg::dot(&mom, &u) / &vol - min_support(&p, &u)?;
        let ratio = &a / &s;
        candidates.push(Candidate { ray, a, s, ratio });
    }
    let best = candidates
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.ratio.cmp(&b.ratio).then(i.cmp(j)))
        .map(|(_, c)| c.clone())
        .ok_or(Error::EmptyDomain)?;
    Ok(DeltaResult {
        delta: best.ratio,
        minimizer: ToricValuation::new(&linalg::int_to_q(&best.ray))?,
        candidates,
    })
}

/// K-semistability of the log Fano pair at `x`: `δ ≥ 1`.
pub fn is_kss(c: &ToricCouple, x: &[Rational]) -> Result<bool> {
    require_lf(c, x)?;
    Ok(delta(c, x)?.delta >= Rational::one())
}

/// Normalized Futaki invariant of the product test configuration induced
/// by `u`, fixed to equal `β(u; x)`.
pub fn futaki_product_tc(c: &ToricCouple, x: &[Rational], u: &ToricValuation) -> Result<Rational> {
    require_lf(c, x)?;
    Ok(beta(c, x, u)?.beta)
}

/// `x ↦ β(u; x)` per chamber: numerator `(A + h_u)·V - ⟨M, u⟩`, denominator
/// `V`, with `V` the volume and `M` the first moment of `P(x)`.
pub fn beta_function(c: &ToricCouple, u: &ToricValuation) -> Result<PiecewiseRationalFunction> {
    check_u(c, u)?;
    let complex = ChamberComplex::new(c, Scope::Coefficient)?;
    Ok(beta_function_on(c, &complex, &u.direction()))
}

pub fn beta_function_on(c: &ToricCouple, complex: &ChamberComplex, u: &[Rational]) -> PiecewiseRationalFunction {
    let a = log_discrepancy_form(c, u);
    let pieces = complex
        .chambers
        .iter()
        .filter(|ch| ch.is_big())
        .map(|ch| {
            let (num, den) = beta_parts(ch, &a, u, &Rational::one(), c.k());
            RationalPiece { cell: ch.cell.clone(), num, den }
        })
        .collect();
    PiecewiseRationalFunction { nvars: c.k(), pieces }
}

/// `((A + τ h_u)·V - τ⟨M, u⟩, V)`: the sign of the first entry is that of
/// `A - τ S` wherever `V > 0`.
pub(crate) fn beta_parts(
    ch: &crate::chambers::Chamber,
    a: &AffineForm,
    u: &[Rational],
    tau: &Rational,
    k: usize,
) -> (MultiPoly, MultiPoly) {
    let h = ch.min_support_form(u);
    let affine = MultiPoly::affine(&a.b, &a.a).add(&MultiPoly::affine(&h.b, &h.a).scale(tau));
    let pair = ch
        .moment
        .iter()
        .zip(u)
        .fold(MultiPoly::zero(k), |acc, (m, ui)| acc.add(&m.scale(ui)));
    (affine.mul(&ch.volume).sub(&pair.scale(tau)), ch.volume.clone())
}

/// Least common multiple of the denominators of a rational vector.
pub fn common_denominator(v: &[Rational]) -> Integer {
    v.iter().fold(Integer::one(), |l, x| l.lcm(x.denom()))
}
