//! Intersection numbers of nef toric classes, CM degrees of product
//! families `X × P¹ → P¹`, and the Futaki–CM weight identity.

use num_traits::{One, Signed, Zero};

use crate::chambers::{interpolate_on_cell, ChamberComplex};
use crate::error::{Error, Result};
use crate::geometry::volume::factorial;
use crate::geometry::{mixed_volume, volume, RationalPolyhedron};
use crate::invariants::{beta, log_discrepancy, ToricValuation};
use crate::linalg::{self, RationalVector};
use crate::poly::MultiPoly;
use crate::toric::{fmt_vec, nef_polytope, Scope, ToricCouple};
use crate::Rational;

/// A torus-invariant divisor class on the couple's variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassSpec {
    /// `-K_X - Σ x_j D_j`.
    LogAnticanonical(RationalVector),
    /// `Σ c_i V_i`, one coefficient per ray.
    Divisor(RationalVector),
}

impl ClassSpec {
    pub fn coefficients(&self, c: &ToricCouple) -> Result<RationalVector> {
        match self {
            ClassSpec::LogAnticanonical(x) => {
                if x.len() != c.k() {
                    return Err(Error::DimensionMismatch { expected: c.k(), got: x.len() });
                }
                Ok(c.b_at(x))
            }
            ClassSpec::Divisor(v) => Ok(v.clone()),
        }
    }
}

/// `D_1 ⋯ D_d = d!·MV(P_{D_1}, …, P_{D_d})` for nef classes.
pub fn intersection_number(c: &ToricCouple, classes: &[ClassSpec]) -> Result<Rational> {
    let d = c.dim();
    if classes.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: classes.len() });
    }
    let mut polys = Vec::with_capacity(d);
    for (i, cl) in classes.iter().enumerate() {
        let coeffs = cl.coefficients(c)?;
        polys.push(nef_polytope(c.fan(), &coeffs)?.ok_or(Error::NotNef(i))?);
    }
    Ok(mixed_volume(&polys)? * factorial(d))
}

fn binomial(n: usize, k: usize) -> Rational {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn lift(p: &[RationalVector], last: &Rational) -> Vec<RationalVector> {
    p.iter()
        .map(|v| {
            let mut w = v.clone();
            w.push(last.clone());
            w
        })
        .collect()
}

/// `deg λ_CM = -(p₁*L - x_j F)^{d+1}` on `X × P¹` with `L = -K_X - Σ x_i D_i`,
/// expanded by multilinearity into `(d+1)`-dimensional mixed volumes of
/// `P(x) × {0}` and the fibre segment `{0} × [0, 1]`.
pub fn cm_degree_at(c: &ToricCouple, j: usize, x: &[Rational]) -> Result<Rational> {
    if j >= c.k() {
        return Err(Error::InvalidInput(format!("no divisor with index {j}")));
    }
    if !c.in_closure(x) {
        return Err(Error::NotNef(j));
    }
    let d = c.dim();
    let p = c.anticanonical_polytope(x)?;
    let base = RationalPolyhedron::from_points(d + 1, &lift(p.vertices(), &Rational::zero()))?;
    let origin = vec![Rational::zero(); d];
    let mut top = origin.clone();
    top.push(Rational::one());
    let mut bottom = origin;
    bottom.push(Rational::zero());
    let fibre = RationalPolyhedron::from_points(d + 1, &[bottom, top])?;
    let mut total = Rational::zero();
    let coeff = -x[j].clone();
    for t in 0..=d + 1 {
        let mut args = vec![base.clone(); d + 1 - t];
        args.extend(std::iter::repeat_n(fibre.clone(), t));
        let mv = mixed_volume(&args)? * factorial(d + 1);
        total += binomial(d + 1, t) * num_traits::pow(coeff.clone(), t) * mv;
    }
    Ok(-total)
}

/// Closed form of the same degree: only the term with one fibre factor
/// survives, giving `(d+1)·x_j·d!·vol(P(x))`.
pub fn cm_degree_oracle(c: &ToricCouple, j: usize, x: &[Rational]) -> Result<Rational> {
    let d = c.dim();
    let p = c.anticanonical_polytope(x)?;
    Ok(Rational::from_integer((d + 1).into()) * &x[j] * factorial(d) * volume(&p)?)
}

#[derive(Clone, Debug)]
pub struct CMPolynomial {
    pub cell: RationalPolyhedron,
    pub poly: MultiPoly,
}

/// CM degree of the product family with divisor `j` moving in a pencil, as
/// one polynomial per chamber of the coefficient domain.
#[derive(Clone, Debug)]
pub struct CMDegree {
    pub moving: usize,
    pub pieces: Vec<CMPolynomial>,
}

impl CMDegree {
    pub fn eval(&self, x: &[Rational]) -> Option<Rational> {
        self.pieces.iter().find(|p| p.cell.contains(x)).map(|p| p.poly.eval(x))
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.iter().filter_map(|p| p.poly.total_degree()).max().unwrap_or(0)
    }
}

pub fn cm_degree_product_family(c: &ToricCouple, j: usize) -> Result<CMDegree> {
    let complex = ChamberComplex::new(c, Scope::Coefficient)?;
    let d = c.dim();
    let pieces = complex
        .chambers
        .iter()
        .map(|ch| {
            let poly = interpolate_on_cell(&ch.cell, &ch.witness, d + 1, 1, |x| Ok(vec![cm_degree_at(c, j, x)?]))?
                .remove(0);
            Ok(CMPolynomial { cell: ch.cell.clone(), poly })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CMDegree { moving: j, pieces })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FutCmCheck {
    /// `(d+1)·L^d·β(u; x)`.
    pub from_beta: Rational,
    /// `(d+1)·L^d·A(u) - (d+1)!·vol(Q)` with `Q` the region under
    /// `⟨m, u⟩ - min_P ⟨·, u⟩` over `P(x)`.
    pub from_weight: Rational,
    pub consistent: bool,
    /// `from_weight / from_beta`, when the latter is nonzero.
    pub ratio: Option<Rational>,
}

pub fn fut_cm_identity_check(c: &ToricCouple, x: &[Rational], u: &ToricValuation) -> Result<FutCmCheck> {
    if !c.is_log_fano(x, Scope::Orthant) {
        return Err(Error::OutsideDomain(format!("x = {} is not log Fano", fmt_vec(x))));
    }
    let d = c.dim();
    let p = c.anticanonical_polytope(x)?;
    let l_d = factorial(d) * volume(&p)?;
    let d1 = Rational::from_integer((d + 1).into());
    let from_beta = &d1 * &l_d * beta(c, x, u)?.beta;

    let dir = u.direction();
    let h = p
        .vertices()
        .iter()
        .map(|v| linalg::dot(v, &dir))
        .min()
        .ok_or(Error::EmptyPolyhedron)?;
    let mut pts = lift(p.vertices(), &Rational::zero());
    pts.extend(p.vertices().iter().map(|v| {
        let mut w = v.clone();
        w.push(linalg::dot(v, &dir) - &h);
        w
    }));
    let q = RationalPolyhedron::from_points(d + 1, &pts)?;
    let from_weight = &d1 * &l_d * log_discrepancy(c, x, u)? - factorial(d + 1) * volume(&q)?;
    let ratio = (!from_beta.is_zero()).then(|| &from_weight / &from_beta);
    Ok(FutCmCheck {
        consistent: from_beta == from_weight,
        from_beta,
        from_weight,
        ratio,
    })
}

/// Sign of the degree just above zero, a positivity diagnostic.
pub fn is_positive_at(deg: &CMDegree, x: &[Rational]) -> bool {
    deg.eval(x).is_some_and(|v| v.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qf};
    use crate::toric::fixtures::*;

    fn p1p2(divisor: &[i64]) -> ToricCouple {
        let f = fan(
            3,
            &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, -1, -1]],
            &[&[0, 2, 3], &[0, 3, 4], &[0, 4, 2], &[1, 2, 3], &[1, 3, 4], &[1, 4, 2]],
        );
        couple(f, &[divisor], interval(q(0), qf(1, 2)))
    }

    fn class(a: i64, b: i64) -> ClassSpec {
        ClassSpec::Divisor(vec![q(a), q(0), q(b), q(0), q(0)])
    }

    #[test]
    fn p1p2_intersections() {
        let c = p1p2(&[1, 1, 1, 1, 0]);
        assert_eq!(intersection_number(&c, &[class(1, 2), class(1, 2), class(1, 2)]).unwrap(), q(12));
        assert_eq!(intersection_number(&c, &[class(2, 3), class(2, 3), class(2, 3)]).unwrap(), q(54));
        let half = ClassSpec::LogAnticanonical(vec![qf(1, 2)]);
        assert_eq!(intersection_number(&c, &[half.clone(), half.clone(), half]).unwrap(), q(12));
        assert_eq!(
            intersection_number(&c, &[class(1, 2), class(-1, 2), class(1, 2)]),
            Err(Error::NotNef(1))
        );
    }

    #[test]
    fn p2_self_intersection_and_mixed() {
        let c = p2_line();
        let k = ClassSpec::LogAnticanonical(vec![q(0)]);
        assert_eq!(intersection_number(&c, &[k.clone(), k]).unwrap(), q(9));
        let pp = couple(p1p1(), &[&[1, 0, 1, 0]], interval(q(0), q(1)));
        let fibre = ClassSpec::Divisor(vec![q(1), q(0), q(0), q(0)]);
        let section = ClassSpec::Divisor(vec![q(0), q(1), q(0), q(0)]);
        assert_eq!(intersection_number(&pp, &[fibre, section]).unwrap(), q(1));
    }

    #[test]
    fn full_boundary_cm() {
        let c = p2_boundary();
        let deg = cm_degree_product_family(&c, 0).unwrap();
        assert!(deg.max_degree() <= 3);
        let x = MultiPoly::var(1, 0);
        let one_minus = MultiPoly::constant(1, q(1)).sub(&x);
        let expected = x.mul(&one_minus).mul(&one_minus).scale(&q(27));
        assert_eq!(deg.pieces[0].poly, expected);
        for v in [qf(1, 4), qf(1, 2)] {
            assert_eq!(cm_degree_at(&c, 0, std::slice::from_ref(&v)).unwrap(), cm_degree_oracle(&c, 0, &[v]).unwrap());
        }
        assert_eq!(deg.eval(&[q(0)]), Some(q(0)));
        assert!(is_positive_at(&deg, &[qf(1, 100)]));
    }

    #[test]
    fn fut_cm_examples() {
        let c = p2_line();
        let r = fut_cm_identity_check(&c, &[q(0)], &ToricValuation::from_ints(&[1, 0]).unwrap()).unwrap();
        assert!(r.consistent);
        assert_eq!(r.from_beta, q(0));
        let u = ToricValuation::from_ints(&[-1, -1]).unwrap();
        let r = fut_cm_identity_check(&c, &[qf(1, 2)], &u).unwrap();
        assert!(r.consistent);
        assert_eq!(r.ratio, Some(q(1)));
        // 3 · (25/4) · (-1/3)
        assert_eq!(r.from_beta, qf(-25, 4));
        let r3 = fut_cm_identity_check(&c, &[qf(1, 2)], &u.scaled(&q(3))).unwrap();
        assert_eq!(r3.from_weight / r.from_weight, q(3));
    }
}
