//! Toric couples `(X, Σ D_j)` with a coefficient polytope, the divisor class
//! `-K_X - Σ x_j D_j` as a function of `x`, and the coefficient-space domains
//! (R-Cartier, log Fano, weak log Fano).

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{volume, Fan, Inequality, RationalPolyhedron};
use crate::linalg::{self, RationalVector};
use crate::{Integer, Rational};

/// An affine function `b + ⟨a, x⟩` of the coefficient vector.
pub type AffineForm = Inequality;

/// A point of `M_Q` depending affinely on `x`: `constant + Σ_j x_j linear[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub constant: RationalVector,
    pub linear: Vec<RationalVector>,
}

impl AffineMap {
    pub fn eval(&self, x: &[Rational]) -> RationalVector {
        let mut m = self.constant.clone();
        for (xj, l) in x.iter().zip(&self.linear) {
            m = linalg::add(&m, &linalg::scale(l, xj));
        }
        m
    }

    /// `x ↦ ⟨self(x), u⟩`.
    pub fn pair(&self, u: &[Rational]) -> AffineForm {
        AffineForm::new(
            linalg::dot(&self.constant, u),
            self.linear.iter().map(|l| linalg::dot(l, u)).collect(),
        )
    }
}

pub(crate) fn form_add(f: &AffineForm, g: &AffineForm) -> AffineForm {
    AffineForm::new(&f.b + &g.b, linalg::add(&f.a, &g.a))
}

pub(crate) fn form_is_zero(f: &AffineForm) -> bool {
    f.b.is_zero() && f.is_trivial()
}

/// Which ambient set the coefficient domains are intersected with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scope {
    /// `R^k_{≥0}` only.
    Orthant,
    /// `R^k_{≥0} ∩ P`.
    #[default]
    Coefficient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Indices into the closure's vertex list.
    pub vertices: Vec<usize>,
    pub dim: usize,
    /// Whether the relative interior of the face belongs to the open domain.
    pub in_domain: bool,
}

/// Closure of a coefficient domain with per-face membership of the domain.
#[derive(Clone, Debug)]
pub struct Domain {
    pub closure: RationalPolyhedron,
    pub faces: Vec<Face>,
}

impl Domain {
    pub fn face_of(&self, x: &[Rational]) -> Option<&Face> {
        // The smallest face containing x is the one cut out by the tight
        // inequalities.
        let verts = self.closure.vertices();
        let tight: Vec<&Inequality> = self
            .closure
            .h_rep()
            .iter()
            .filter(|h| h.eval(x).is_zero())
            .collect();
        let set: Vec<usize> = (0..verts.len())
            .filter(|&i| tight.iter().all(|h| h.eval(&verts[i]).is_zero()))
            .collect();
        self.faces.iter().find(|f| f.vertices == set)
    }

    /// Membership in the (not necessarily closed) domain.
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.closure.contains(x) && self.face_of(x).is_some_and(|f| f.in_domain)
    }
}

/// Data certifying the Cartier and positivity properties of the class at a
/// rational `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFunctionCertificate {
    pub x: RationalVector,
    /// `m_σ(x)` per maximal cone.
    pub functionals: Vec<RationalVector>,
    /// Per wall, the least value of `⟨m_σ, v_i⟩ + b_i` over rays `v_i` of
    /// either cone off the wall.
    pub wall_slack: Vec<Rational>,
}

impl SupportFunctionCertificate {
    pub fn is_nef(&self) -> bool {
        self.wall_slack.iter().all(|s| !s.is_negative())
    }

    pub fn is_ample(&self) -> bool {
        self.wall_slack.iter().all(|s| s.is_positive())
    }
}

#[derive(Clone, Debug)]
pub struct ToricCouple {
    fan: Fan,
    divisors: Vec<Vec<Integer>>,
    names: Vec<String>,
    coeff_polytope: RationalPolyhedron,
    bases: Vec<Vec<usize>>,
    functionals: Vec<AffineMap>,
    closure_rows: Vec<AffineForm>,
    strict_forms: Vec<AffineForm>,
}

impl ToricCouple {
    pub fn new(
        fan: Fan,
        divisors: Vec<Vec<Integer>>,
        names: Vec<String>,
        coeff_polytope: RationalPolyhedron,
    ) -> Result<Self> {
        let n = fan.rays().len();
        let k = divisors.len();
        if k == 0 {
            return Err(Error::InvalidInput("at least one divisor is required".into()));
        }
        if names.len() != k {
            return Err(Error::InvalidInput("one name per divisor is required".into()));
        }
        for (j, a) in divisors.iter().enumerate() {
            if a.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: a.len() });
            }
            if a.iter().any(Signed::is_negative) {
                return Err(Error::InvalidInput(format!("divisor {j} has a negative coefficient")));
            }
            if a.iter().all(Zero::is_zero) {
                return Err(Error::InvalidInput(format!("divisor {j} is zero")));
            }
        }
        if coeff_polytope.dim() != k {
            return Err(Error::DimensionMismatch { expected: k, got: coeff_polytope.dim() });
        }
        let p = match coeff_polytope.dualize() {
            Err(Error::EmptyPolyhedron) => return Err(Error::EmptyCoeffPolytope),
            r => r?,
        };
        if !p.is_bounded() {
            return Err(Error::InvalidInput("coefficient polytope is unbounded".into()));
        }
        let unit = |x: &Rational| !x.is_negative() && x <= &Rational::one();
        if p.vertices().iter().any(|v| !v.iter().all(unit)) {
            return Err(Error::InvalidInput("coefficient polytope is not contained in [0,1]^k".into()));
        }
        let mut c = Self {
            fan,
            divisors,
            names,
            coeff_polytope: p,
            bases: Vec::new(),
            functionals: Vec::new(),
            closure_rows: Vec::new(),
            strict_forms: Vec::new(),
        };
        for cone in c.fan.max_cones() {
            let gens: Vec<RationalVector> = cone.iter().map(|&i| c.fan.ray_q(i)).collect();
            let basis: Vec<usize> = linalg::independent_rows(&gens).into_iter().map(|r| cone[r]).collect();
            c.functionals.push(c.vertex_map(&basis).expect("cone basis is independent"));
            c.bases.push(basis);
        }
        c.closure_rows = c.build_closure_rows();
        c.strict_forms = (0..c.n_rays()).map(|i| c.b_form(i)).collect();
        c.strict_forms.extend(c.convexity_forms());
        Ok(c)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn k(&self) -> usize {
        self.divisors.len()
    }

    pub fn n_rays(&self) -> usize {
        self.fan.rays().len()
    }

    pub fn divisors(&self) -> &[Vec<Integer>] {
        &self.divisors
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn coeff_polytope(&self) -> &RationalPolyhedron {
        &self.coeff_polytope
    }

    /// `b_i(x) = 1 - Σ_j x_j a_{ji}`.
    pub fn b_form(&self, i: usize) -> AffineForm {
        AffineForm::new(
            Rational::one(),
            self.divisors.iter().map(|a| -Rational::from_integer(a[i].clone())).collect(),
        )
    }

    pub fn b_at(&self, x: &[Rational]) -> RationalVector {
        (0..self.n_rays()).map(|i| self.b_form(i).eval(x)).collect()
    }

    /// `m_B(x) = -V_B^{-1} b_B(x)` for `d` independent rays `B`, or `None`
    /// when they are dependent.
    pub fn vertex_map(&self, basis: &[usize]) -> Option<AffineMap> {
        let rows: Vec<RationalVector> = basis.iter().map(|&i| self.fan.ray_q(i)).collect();
        let inv = linalg::inverse(&rows)?;
        let apply = |rhs: Vec<Rational>| -> RationalVector {
            linalg::mat_vec(&inv, &rhs).into_iter().map(|v| -v).collect()
        };
        let constant = apply(basis.iter().map(|&i| self.b_form(i).b).collect());
        let linear = (0..self.k())
            .map(|j| apply(basis.iter().map(|&i| self.b_form(i).a[j].clone()).collect()))
            .collect();
        Some(AffineMap { constant, linear })
    }

    /// `m_σ(x)` for maximal cone `c`, determined by a basis of its rays.
    pub fn cone_functional(&self, c: usize) -> &AffineMap {
        &self.functionals[c]
    }

    /// `x ↦ ⟨m(x), v_i⟩ + b_i(x)`.
    pub fn slack_form(&self, m: &AffineMap, i: usize) -> AffineForm {
        form_add(&m.pair(&self.fan.ray_q(i)), &self.b_form(i))
    }

    fn orthant(&self) -> Vec<AffineForm> {
        (0..self.k())
            .map(|j| {
                let mut a = vec![Rational::zero(); self.k()];
                a[j] = Rational::one();
                AffineForm::new(Rational::zero(), a)
            })
            .collect()
    }

    /// Linear conditions for the class to be R-Cartier.
    pub fn rc_equalities(&self) -> Vec<AffineForm> {
        let mut out = BTreeSet::new();
        for (c, cone) in self.fan.max_cones().iter().enumerate() {
            for &i in cone {
                if self.bases[c].contains(&i) {
                    continue;
                }
                let f = self.slack_form(&self.functionals[c], i);
                if !form_is_zero(&f) {
                    out.insert(normalized_form(&f));
                }
            }
        }
        out.into_iter().map(|(b, a)| AffineForm::new(b, a)).collect()
    }

    /// Wall-local convexity forms; nef is `≥ 0` for all, ample `> 0`.
    pub fn convexity_forms(&self) -> Vec<AffineForm> {
        let mut out = Vec::new();
        for w in self.fan.walls() {
            let (c0, c1) = w.cones;
            for (own, other) in [(c0, c1), (c1, c0)] {
                for &i in &self.fan.max_cones()[other] {
                    if !w.rays.contains(&i) {
                        out.push(self.slack_form(&self.functionals[own], i));
                    }
                }
            }
        }
        out
    }

    fn closure_rows(&self, scope: Scope) -> Vec<AffineForm> {
        let mut rows = self.closure_rows.clone();
        if scope == Scope::Coefficient {
            rows.extend(self.coeff_polytope.h_rep().iter().cloned());
        }
        rows
    }

    fn build_closure_rows(&self) -> Vec<AffineForm> {
        let mut rows = self.orthant();
        for e in self.rc_equalities() {
            rows.push(e.negated());
            rows.push(e);
        }
        rows.extend((0..self.n_rays()).map(|i| self.b_form(i)));
        rows.extend(self.convexity_forms());
        rows
    }

    pub fn rc_domain(&self) -> Result<RationalPolyhedron> {
        let mut rows = self.orthant();
        for e in self.rc_equalities() {
            rows.push(e.negated());
            rows.push(e);
        }
        RationalPolyhedron::from_inequalities(self.k(), rows).dualize_or_empty()
    }

    /// The common closure of the log Fano and weak log Fano domains.
    pub fn closure(&self, scope: Scope) -> Result<RationalPolyhedron> {
        RationalPolyhedron::from_inequalities(self.k(), self.closure_rows(scope)).dualize_or_empty()
    }

    /// Affine forms that must be strictly positive on the log Fano domain.
    pub fn lf_strict_forms(&self) -> &[AffineForm] {
        &self.strict_forms
    }

    pub fn lf_domain(&self, scope: Scope) -> Result<Domain> {
        let closure = self.closure(scope)?;
        let strict = self.lf_strict_forms();
        let faces = faces_with(&closure, |verts| {
            strict.iter().all(|f| verts.iter().any(|v| !f.eval(v).is_zero()))
        });
        Ok(Domain { closure, faces })
    }

    pub fn wlf_domain(&self, scope: Scope) -> Result<Domain> {
        let closure = self.closure(scope)?;
        let klt: Vec<AffineForm> = (0..self.n_rays()).map(|i| self.b_form(i)).collect();
        let faces = faces_with(&closure, |verts| {
            if !klt.iter().all(|f| verts.iter().any(|v| !f.eval(v).is_zero())) {
                return false;
            }
            // vol^{1/d} is concave on the nef region, so positivity at one
            // relative-interior point gives positivity on the whole face.
            let c = centroid(verts);
            self.polytope_unchecked(&c)
                .and_then(|p| volume(&p))
                .is_ok_and(|v| v.is_positive())
        });
        Ok(Domain { closure, faces })
    }

    pub fn in_rc(&self, x: &[Rational]) -> bool {
        x.iter().all(|v| !v.is_negative()) && self.rc_equalities().iter().all(|e| e.eval(x).is_zero())
    }

    /// `x` in the closure (R-Cartier, `b ≥ 0`, nef, `x ≥ 0`), ignoring `P`.
    pub fn in_closure(&self, x: &[Rational]) -> bool {
        x.len() == self.k() && self.closure_rows.iter().all(|h| !h.eval(x).is_negative())
    }

    pub fn is_klt(&self, x: &[Rational]) -> bool {
        self.b_at(x).iter().all(Signed::is_positive)
    }

    pub fn is_log_fano(&self, x: &[Rational], scope: Scope) -> bool {
        (scope == Scope::Orthant || self.coeff_polytope.contains(x))
            && self.in_closure(x)
            && self.lf_strict_forms().iter().all(|f| f.eval(x).is_positive())
    }

    pub fn is_weak_log_fano(&self, x: &[Rational], scope: Scope) -> bool {
        (scope == Scope::Orthant || self.coeff_polytope.contains(x))
            && self.in_closure(x)
            && self.is_klt(x)
            && self
                .polytope_unchecked(x)
                .and_then(|p| volume(&p))
                .is_ok_and(|v| v.is_positive())
    }

    pub fn certificate(&self, x: &[Rational]) -> Result<SupportFunctionCertificate> {
        self.check_len(x)?;
        if !self.in_rc(x) {
            return Err(Error::OutsideDomain("class is not R-Cartier at x".into()));
        }
        let functionals = self.functionals.iter().map(|m| m.eval(x)).collect();
        let mut wall_slack = Vec::new();
        for w in self.fan.walls() {
            let (c0, c1) = w.cones;
            let mut least: Option<Rational> = None;
            for (own, other) in [(c0, c1), (c1, c0)] {
                for &i in &self.fan.max_cones()[other] {
                    if !w.rays.contains(&i) {
                        let s = self.slack_form(&self.functionals[own], i).eval(x);
                        least = Some(least.map_or(s.clone(), |l| l.min(s)));
                    }
                }
            }
            wall_slack.push(least.unwrap_or_else(Rational::zero));
        }
        Ok(SupportFunctionCertificate { x: x.to_vec(), functionals, wall_slack })
    }

    fn check_len(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.k() {
            return Err(Error::DimensionMismatch { expected: self.k(), got: x.len() });
        }
        Ok(())
    }

    pub(crate) fn polytope_unchecked(&self, x: &[Rational]) -> Result<RationalPolyhedron> {
        let b = self.b_at(x);
        let h = (0..self.n_rays())
            .map(|i| Inequality::new(b[i].clone(), self.fan.ray_q(i)))
            .collect();
        RationalPolyhedron::from_inequalities(self.dim(), h).dualize()
    }

    /// Moment polytope `P(x) = {m : ⟨m, v_i⟩ ≥ -b_i(x)}` for `x` in the
    /// closure.
    pub fn anticanonical_polytope(&self, x: &[Rational]) -> Result<RationalPolyhedron> {
        self.check_len(x)?;
        if !self.in_closure(x) {
            return Err(Error::OutsideDomain(format!(
                "x = {} is not in the weak log Fano closure",
                fmt_vec(x)
            )));
        }
        self.polytope_unchecked(x)
    }
}

/// Polytope `{m : ⟨m, v_i⟩ ≥ -c_i}` of the divisor `Σ c_i V_i`, or `None`
/// unless the divisor is Q-Cartier and nef on the fan.
pub fn nef_polytope(fan: &Fan, coeffs: &[Rational]) -> Result<Option<RationalPolyhedron>> {
    let n = fan.rays().len();
    if coeffs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: coeffs.len() });
    }
    for cone in fan.max_cones() {
        let gens: Vec<RationalVector> = cone.iter().map(|&i| fan.ray_q(i)).collect();
        let basis: Vec<usize> = linalg::independent_rows(&gens).into_iter().map(|r| cone[r]).collect();
        let rows: Vec<RationalVector> = basis.iter().map(|&i| fan.ray_q(i)).collect();
        let rhs: Vec<Rational> = basis.iter().map(|&i| -coeffs[i].clone()).collect();
        let m = linalg::solve(&rows, &rhs).expect("cone basis is independent");
        for i in 0..n {
            let slack = linalg::dot(&m, &fan.ray_q(i)) + &coeffs[i];
            if (cone.contains(&i) && !slack.is_zero()) || slack.is_negative() {
                return Ok(None);
            }
        }
    }
    let h = (0..n).map(|i| Inequality::new(coeffs[i].clone(), fan.ray_q(i))).collect();
    Ok(Some(RationalPolyhedron::from_inequalities(fan.dim(), h).dualize()?))
}

pub(crate) fn fmt_vec(x: &[Rational]) -> String {
    let parts: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub(crate) fn normalized_form(f: &AffineForm) -> (Rational, RationalVector) {
    // Equalities are sign-free: fix the sign by the first nonzero entry.
    let n = f.normalized();
    let first = std::iter::once(&n.b).chain(n.a.iter()).find(|v| !v.is_zero()).cloned();
    if first.is_some_and(|v| v.is_negative()) {
        let m = n.negated();
        (m.b, m.a)
    } else {
        (n.b, n.a)
    }
}

fn centroid(verts: &[RationalVector]) -> RationalVector {
    let n = Rational::from_integer(verts.len().into());
    let mut c = vec![Rational::zero(); verts[0].len()];
    for v in verts {
        c = linalg::add(&c, v);
    }
    c.into_iter().map(|v| v / &n).collect()
}

/// All nonempty faces of a polytope as vertex-index sets, flagged by `keep`
/// applied to the face's vertices.
fn faces_with(p: &RationalPolyhedron, keep: impl Fn(&[RationalVector]) -> bool) -> Vec<Face> {
    let verts = p.vertices();
    if verts.is_empty() {
        return Vec::new();
    }
    let facets: Vec<BTreeSet<usize>> = p.incidence().into_iter().map(|s| s.into_iter().collect()).collect();
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier = vec![(0..verts.len()).collect::<BTreeSet<usize>>()];
    while let Some(f) = frontier.pop() {
        let key: Vec<usize> = f.iter().copied().collect();
        if !all.insert(key) {
            continue;
        }
        for g in &facets {
            let h: BTreeSet<usize> = f.intersection(g).copied().collect();
            if !h.is_empty() && h != f {
                frontier.push(h);
            }
        }
    }
    let mut faces: Vec<Face> = all
        .into_iter()
        .map(|vs| {
            let pts: Vec<RationalVector> = vs.iter().map(|&i| verts[i].clone()).collect();
            let dirs: Vec<RationalVector> = pts[1..].iter().map(|v| linalg::sub(v, &pts[0])).collect();
            Face {
                dim: linalg::rank(&dirs),
                in_domain: keep(&pts),
                vertices: vs,
            }
        })
        .collect();
    faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));
    faces
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::geometry::volume;
    use crate::linalg::{q, qf, qvec};

    #[test]
    fn p2_line_domains() {
        let c = p2_line();
        let rc = c.rc_domain().unwrap();
        assert_eq!(rc.vertices(), &[qvec(&[0])]);
        assert_eq!(rc.rays().len(), 1);
        let lf = c.lf_domain(Scope::Orthant).unwrap();
        assert_eq!(lf.closure.vertices(), &[qvec(&[0]), qvec(&[1])]);
        assert!(lf.contains(&[q(0)]));
        assert!(lf.contains(&[qf(1, 2)]));
        assert!(!lf.contains(&[q(1)]));
        let wlf = c.wlf_domain(Scope::Orthant).unwrap();
        assert!(!wlf.contains(&[q(1)]));
        let scoped = c.lf_domain(Scope::Coefficient).unwrap();
        assert_eq!(scoped.closure.vertices(), &[qvec(&[0]), vec![qf(1, 2)]]);
        assert!(scoped.faces.iter().all(|f| f.in_domain));
    }

    #[test]
    fn p2_line_polytope() {
        let c = p2_line();
        let p = c.anticanonical_polytope(&[qf(1, 2)]).unwrap();
        assert_eq!(p.vertices(), &[qvec(&[-1, -1]), vec![q(-1), qf(3, 2)], vec![qf(3, 2), q(-1)]]);
        assert_eq!(volume(&p).unwrap(), qf(25, 8));
        assert_eq!(
            c.anticanonical_polytope(&[q(2)]),
            Err(Error::OutsideDomain("x = (2) is not in the weak log Fano closure".into()))
        );
    }

    #[test]
    fn p1p1_half_boundary() {
        let c = couple(p1p1(), &[&[1, 0, 1, 0]], interval(q(0), q(1)));
        let lf = c.lf_domain(Scope::Orthant).unwrap();
        assert_eq!(lf.closure.vertices(), &[qvec(&[0]), qvec(&[1])]);
        assert!(lf.contains(&[qf(99, 100)]));
        assert!(!lf.contains(&[q(1)]));
    }

    #[test]
    fn f1_fibre_is_nef_not_ample_at_one() {
        let c = f1_fibre();
        let lf = c.lf_domain(Scope::Orthant).unwrap();
        // -K - xE is nef for x ≤ 1 and ample for x < 1; at x = 1 klt fails too.
        assert_eq!(lf.closure.vertices(), &[qvec(&[0]), qvec(&[1])]);
        let cert = c.certificate(&[q(1)]).unwrap();
        assert!(cert.is_nef() && !cert.is_ample());
        assert!(c.certificate(&[qf(1, 2)]).unwrap().is_ample());
        let p = c.anticanonical_polytope(&[q(0)]).unwrap();
        assert_eq!(volume(&p).unwrap(), q(4));
    }

    #[test]
    fn f1_exceptional_ample_but_not_klt_at_one() {
        let c = f1_exceptional();
        assert!(c.certificate(&[q(1)]).unwrap().is_ample());
        let lf = c.lf_domain(Scope::Orthant).unwrap();
        let wlf = c.wlf_domain(Scope::Orthant).unwrap();
        assert_eq!(lf.closure.vertices(), &[qvec(&[0]), qvec(&[1])]);
        assert!(!lf.contains(&[q(1)]) && !wlf.contains(&[q(1)]));
    }

    #[test]
    fn f1_fiber_direction() {
        // x·F with F the fibre class V_{e1}: nef until the ray -e1-e2 collapses.
        let c = couple(f1(), &[&[1, 0, 0, 0]], interval(q(0), q(1)));
        let wlf = c.wlf_domain(Scope::Orthant).unwrap();
        let lf = c.lf_domain(Scope::Orthant).unwrap();
        assert_eq!(wlf.closure.vertices(), lf.closure.vertices());
        for f in &lf.faces {
            let w = wlf.faces.iter().find(|g| g.vertices == f.vertices).unwrap();
            assert!(!f.in_domain || w.in_domain);
        }
    }

    #[test]
    fn k2_domain() {
        let c = couple(
            p2(),
            &[&[1, 0, 0], &[0, 1, 1]],
            RationalPolyhedron::from_inequalities(
                2,
                vec![
                    Inequality::new(q(0), qvec(&[1, 0])),
                    Inequality::new(q(0), qvec(&[0, 1])),
                    Inequality::new(q(1), qvec(&[-1, 0])),
                    Inequality::new(q(1), qvec(&[0, -1])),
                ],
            ),
        );
        let lf = c.lf_domain(Scope::Coefficient).unwrap();
        assert_eq!(lf.closure.vertices().len(), 4);
        assert!(lf.contains(&[qf(1, 2), qf(1, 2)]));
        assert!(!lf.contains(&[q(1), qf(1, 2)]));
        assert!(lf.contains(&[q(0), q(0)]));
    }

    #[test]
    fn non_simplicial_rc_slice() {
        // Fan over the faces of the cube [-1,1]^3, six quadrilateral cones.
        let rays: Vec<Vec<i64>> = (0..8)
            .map(|m| (0..3).map(|b| if m >> b & 1 == 1 { 1 } else { -1 }).collect())
            .collect();
        let rr: Vec<&[i64]> = rays.iter().map(|r| r.as_slice()).collect();
        let mut cones: Vec<Vec<usize>> = Vec::new();
        for axis in 0..3 {
            for side in [0, 1] {
                cones.push((0..8).filter(|m| (m >> axis) & 1 == side).collect());
            }
        }
        let cr: Vec<&[usize]> = cones.iter().map(|c| c.as_slice()).collect();
        let f = fan(3, &rr, &cr);
        assert!(!f.is_simplicial());
        let c = couple(f, &[&[0, 0, 0, 0, 0, 0, 0, 1]], interval(q(0), q(1)));
        let rc = c.rc_domain().unwrap();
        assert_eq!(rc.vertices(), &[qvec(&[0])]);
        assert!(rc.rays().is_empty());
        assert!(c.in_rc(&[q(0)]));
        assert!(!c.in_rc(&[qf(1, 2)]));
    }

    #[test]
    fn smooth_rc_is_orthant() {
        let c = couple(p1p1(), &[&[1, 1, 0, 0]], interval(q(0), q(1)));
        let rc = c.rc_domain().unwrap();
        assert_eq!(rc.h_rep().len(), 1);
        assert_eq!(rc.rays(), &[qvec(&[1])]);
    }

    #[test]
    fn rejects_bad_input() {
        let r = ToricCouple::new(p2(), vec![ivec(&[0, 0, 0])], vec!["D".into()], interval(q(0), q(1)));
        assert!(matches!(r, Err(Error::InvalidInput(_))));
        let r = ToricCouple::new(p2(), vec![ivec(&[0, 0, 1])], vec!["D".into()], interval(q(1), q(0)));
        assert_eq!(r.unwrap_err(), Error::EmptyCoeffPolytope);
    }
}
