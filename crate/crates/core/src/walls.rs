//! δ-level sets `{x ∈ P ∩ LF : δ(x) ≥ τ}` as semi-algebraic sets, k = 1
//! walls as algebraic numbers, and chamber decompositions of `P`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::algebraic::{isolate_roots, rational_between, sign_at, AlgebraicNumber, Sign};
use crate::chambers::{Chart, ChamberComplex};
use crate::error::{Error, Result};
use crate::geometry::RationalPolyhedron;
use crate::invariants::{beta_parts, candidate_rays, delta, log_discrepancy_form, DeltaResult};
use crate::linalg::{self, RationalVector};
use crate::poly::{IntPolynomial, MultiPoly, QPoly};
use crate::toric::{Scope, ToricCouple};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    /// Integer coefficients, content one.
    pub poly: MultiPoly,
    /// `> 0` when set, `≥ 0` otherwise.
    pub strict: bool,
}

impl Constraint {
    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = self.poly.eval(x);
        if self.strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }
}

#[derive(Clone, Debug)]
pub struct SemiAlgebraicPiece {
    pub chamber: RationalPolyhedron,
    /// Affine hull equations of the chamber, when it is lower-dimensional.
    pub equalities: Vec<MultiPoly>,
    pub inequalities: Vec<Constraint>,
}

impl SemiAlgebraicPiece {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.chamber.contains(x)
            && self.equalities.iter().all(|e| e.eval(x).is_zero())
            && self.inequalities.iter().all(|c| c.holds(x))
    }
}

#[derive(Clone, Debug)]
pub struct SemiAlgebraicSet {
    pub ambient_dim: usize,
    pub pieces: Vec<SemiAlgebraicPiece>,
}

impl SemiAlgebraicSet {
    pub fn empty(ambient_dim: usize) -> Self {
        Self { ambient_dim, pieces: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

pub fn membership(s: &SemiAlgebraicSet, x: &[Rational]) -> bool {
    x.len() == s.ambient_dim && s.pieces.iter().any(|p| p.contains(x))
}

fn affine_poly(b: &Rational, a: &[Rational]) -> MultiPoly {
    MultiPoly::affine(b, a)
}

/// `{x ∈ P ∩ LF : δ(x) ≥ τ}`.
pub fn level_set(c: &ToricCouple, tau: &Rational) -> Result<SemiAlgebraicSet> {
    match ChamberComplex::new(c, Scope::Coefficient) {
        Ok(complex) => level_set_on(c, &complex, tau),
        Err(Error::EmptyDomain) => Ok(SemiAlgebraicSet::empty(c.k())),
        Err(e) => Err(e),
    }
}

/// The K-semistable domain: `level_set` at `τ = 1`.
pub fn kss_domain(c: &ToricCouple) -> Result<SemiAlgebraicSet> {
    level_set(c, &Rational::one())
}

pub fn level_set_on(c: &ToricCouple, complex: &ChamberComplex, tau: &Rational) -> Result<SemiAlgebraicSet> {
    if !tau.is_positive() {
        return Err(Error::InvalidInput("tau must be positive".into()));
    }
    let k = c.k();
    let strict_forms = c.lf_strict_forms();
    let mut pieces = Vec::new();
    'chambers: for ch in &complex.chambers {
        if !ch.is_big() {
            continue;
        }
        let p = c.polytope_unchecked(&ch.witness)?;
        let mut inequalities: Vec<Constraint> = Vec::new();
        let mut push = |poly: MultiPoly, strict: bool| -> bool {
            if let Some(v) = poly.as_constant() {
                return v.is_positive() || (!strict && v.is_zero());
            }
            let con = Constraint { poly: poly.primitive(), strict };
            if !inequalities.contains(&con) {
                inequalities.push(con);
            }
            true
        };
        for ray in candidate_rays(c.fan(), &p)? {
            let u = linalg::int_to_q(&ray);
            let a = log_discrepancy_form(c, &u);
            let (num, _) = beta_parts(ch, &a, &u, tau, k);
            if !push(num, false) {
                continue 'chambers;
            }
        }
        for f in strict_forms {
            let verts = ch.cell.vertices();
            if verts.iter().all(|v| f.eval(v).is_positive()) {
                continue;
            }
            if verts.iter().all(|v| f.eval(v).is_zero()) {
                continue 'chambers;
            }
            push(affine_poly(&f.b, &f.a), true);
        }
        let equalities = ch
            .cell
            .implicit_equalities()
            .into_iter()
            .filter(|h| !h.is_trivial())
            .map(|h| affine_poly(&h.b, &h.a).primitive())
            .fold(Vec::new(), |mut acc: Vec<MultiPoly>, e| {
                if !acc.contains(&e) && !acc.contains(&e.neg()) {
                    acc.push(e);
                }
                acc
            });
        pieces.push(SemiAlgebraicPiece {
            chamber: ch.cell.clone(),
            equalities,
            inequalities,
        });
    }
    Ok(SemiAlgebraicSet { ambient_dim: k, pieces })
}

/// Integer univariate polynomial with the orientation of `p` kept.
fn univariate(p: &MultiPoly) -> IntPolynomial {
    let q = p.to_qpoly();
    let l = crate::invariants::common_denominator(&q.0);
    IntPolynomial::new(q.0.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect())
}

fn one() -> IntPolynomial {
    IntPolynomial::from_i64(&[1])
}

fn sign_poly_at(p: &MultiPoly, a: &AlgebraicNumber) -> Sign {
    sign_at(&univariate(p), &one(), a).expect("constant denominator")
}

/// Exact membership at an algebraic point of a one-dimensional set.
pub fn membership_at(s: &SemiAlgebraicSet, a: &AlgebraicNumber) -> bool {
    if let Some(r) = a.as_rational() {
        return membership(s, &[r]);
    }
    s.pieces.iter().any(|piece| {
        piece
            .chamber
            .h_rep()
            .iter()
            .all(|h| sign_poly_at(&affine_poly(&h.b, &h.a), a) != Sign::Negative)
            && piece.equalities.iter().all(|e| sign_poly_at(e, a) == Sign::Zero)
            && piece.inequalities.iter().all(|c| match sign_poly_at(&c.poly, a) {
                Sign::Positive => true,
                Sign::Zero => !c.strict,
                Sign::Negative => false,
            })
    })
}

fn interval_of(p: &RationalPolyhedron) -> (Rational, Rational) {
    let v = p.vertices();
    (v[0][0].clone(), v[v.len() - 1][0].clone())
}

/// Sorted, deduplicated.
fn normalize_points(mut pts: Vec<AlgebraicNumber>) -> Vec<AlgebraicNumber> {
    pts.sort_by(|a, b| a.cmp_algebraic(b));
    pts.dedup_by(|a, b| a.cmp_algebraic(b) == Ordering::Equal);
    pts
}

/// Every point of `(a, b)` where the status of the level set might change.
fn candidates_k1(complex: &ChamberComplex, set: &SemiAlgebraicSet, a: &Rational, b: &Rational) -> Vec<AlgebraicNumber> {
    let mut pts = Vec::new();
    for ch in &complex.chambers {
        let (lo, hi) = interval_of(&ch.cell);
        pts.push(AlgebraicNumber::from_rational(&lo));
        pts.push(AlgebraicNumber::from_rational(&hi));
    }
    for piece in &set.pieces {
        let (lo, hi) = interval_of(&piece.chamber);
        for con in &piece.inequalities {
            pts.extend(isolate_roots(&univariate(&con.poly), &lo, &hi));
        }
    }
    normalize_points(
        pts.into_iter()
            .filter(|p| p.cmp_rational(a) == Ordering::Greater && p.cmp_rational(b) == Ordering::Less)
            .collect(),
    )
}

#[derive(Clone, Debug)]
pub struct WallCertificate {
    pub wall: AlgebraicNumber,
    pub left_probe: Rational,
    pub right_probe: Rational,
    /// Membership left of, at and right of the wall.
    pub status: [bool; 3],
    /// A constraint of the level set vanishing at the wall, with its signs
    /// at the left probe, the wall and the right probe.
    pub binding: Option<(IntPolynomial, [Sign; 3])>,
    /// `δ` at the probes, where defined.
    pub delta_left: Option<Rational>,
    pub delta_right: Option<Rational>,
}

fn require_k1(c: &ToricCouple) -> Result<(Rational, Rational)> {
    if c.k() != 1 {
        return Err(Error::NotOneDimensional(c.k()));
    }
    Ok(interval_of(c.coeff_polytope()))
}

fn delta_if_defined(c: &ToricCouple, x: &[Rational]) -> Option<Rational> {
    delta(c, x).ok().map(|d| d.delta)
}

/// Walls in the interior of `P = [a, b]` with certificates.
pub fn walls_k1_certified(c: &ToricCouple, tau: &Rational) -> Result<Vec<WallCertificate>> {
    let (a, b) = require_k1(c)?;
    let complex = match ChamberComplex::new(c, Scope::Coefficient) {
        Ok(cx) => cx,
        Err(Error::EmptyDomain) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let set = level_set_on(c, &complex, tau)?;
    let cands = candidates_k1(&complex, &set, &a, &b);
    let mut bounds = vec![AlgebraicNumber::from_rational(&a)];
    bounds.extend(cands.iter().cloned());
    bounds.push(AlgebraicNumber::from_rational(&b));
    let probes: Vec<Rational> = bounds.windows(2).map(|w| rational_between(&w[0], &w[1])).collect();
    let mut out = Vec::new();
    for (i, w) in cands.into_iter().enumerate() {
        let (lp, rp) = (probes[i].clone(), probes[i + 1].clone());
        let status = [membership(&set, std::slice::from_ref(&lp)), membership_at(&set, &w), membership(&set, std::slice::from_ref(&rp))];
        if status[0] == status[1] && status[1] == status[2] {
            continue;
        }
        let binding = set
            .pieces
            .iter()
            .flat_map(|p| p.inequalities.iter())
            .map(|con| univariate(&con.poly))
            .find(|p| sign_at(p, &one(), &w) == Ok(Sign::Zero))
            .map(|p| {
                let s = |r: &Rational| Sign::of(&p.eval(r));
                let signs = [s(&lp), Sign::Zero, s(&rp)];
                (p, signs)
            });
        out.push(WallCertificate {
            delta_left: delta_if_defined(c, std::slice::from_ref(&lp)),
            delta_right: delta_if_defined(c, std::slice::from_ref(&rp)),
            wall: w,
            left_probe: lp,
            right_probe: rp,
            status,
            binding,
        });
    }
    Ok(out)
}

/// Boundary points in the interior of `P = [a, b]` of the level set.
pub fn walls_k1(c: &ToricCouple, tau: &Rational) -> Result<Vec<AlgebraicNumber>> {
    Ok(walls_k1_certified(c, tau)?.into_iter().map(|w| w.wall).collect())
}

/// Union of the walls of several couples sharing one coefficient interval:
/// on each complementary interval every couple has constant status.
pub fn batch_walls_k1(couples: &[ToricCouple], tau: &Rational) -> Result<Vec<AlgebraicNumber>> {
    let mut all = Vec::new();
    let mut range = None;
    for c in couples {
        let r = require_k1(c)?;
        match &range {
            None => range = Some(r),
            Some(prev) if *prev != r => {
                return Err(Error::InvalidInput("batch couples must share the coefficient interval".into()))
            }
            _ => {}
        }
        all.extend(walls_k1(c, tau)?);
    }
    Ok(normalize_points(all))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// Inside the level set: log Fano with `δ ≥ τ`.
    Above,
    Below,
}

impl Status {
    fn of(inside: bool) -> Self {
        if inside {
            Status::Above
        } else {
            Status::Below
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Above => "above",
            Status::Below => "below",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Endpoint {
    pub value: AlgebraicNumber,
    pub closed: bool,
}

#[derive(Clone, Debug)]
pub enum CellShape {
    Interval { lo: Endpoint, hi: Endpoint },
    /// Part of a chamber of the complex (or of `P` outside the log Fano
    /// closure when `outside_closure` is set).
    Region { polytope: RationalPolyhedron, outside_closure: bool },
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub shape: CellShape,
    pub status: Status,
    pub witness: RationalVector,
    pub witness_delta: Option<DeltaResult>,
    /// Status recomputed at the witness from δ directly agrees.
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct ChamberDecomposition {
    pub tau: Rational,
    pub cells: Vec<Cell>,
}

fn direct_status(c: &ToricCouple, x: &[Rational], tau: &Rational) -> (bool, Option<DeltaResult>) {
    let d = delta(c, x).ok();
    let inside = c.is_log_fano(x, Scope::Coefficient) && d.as_ref().is_some_and(|d| &d.delta >= tau);
    (inside, d)
}

fn make_cell(c: &ToricCouple, set: &SemiAlgebraicSet, tau: &Rational, shape: CellShape, witness: RationalVector) -> Cell {
    let inside = membership(set, &witness);
    let (direct, witness_delta) = direct_status(c, &witness, tau);
    Cell {
        shape,
        status: Status::of(inside),
        witness,
        witness_delta,
        verified: inside == direct,
    }
}

pub fn chamber_decomposition(c: &ToricCouple, tau: &Rational) -> Result<ChamberDecomposition> {
    let set = level_set(c, tau)?;
    let cells = if c.k() == 1 { cells_k1(c, &set, tau)? } else { cells_general(c, &set, tau)? };
    Ok(ChamberDecomposition { tau: tau.clone(), cells })
}

fn cells_k1(c: &ToricCouple, set: &SemiAlgebraicSet, tau: &Rational) -> Result<Vec<Cell>> {
    let (a, b) = require_k1(c)?;
    let walls = walls_k1(c, tau)?;
    let mut pts = vec![AlgebraicNumber::from_rational(&a)];
    pts.extend(walls);
    if a != b {
        pts.push(AlgebraicNumber::from_rational(&b));
    }
    let point_status: Vec<bool> = pts.iter().map(|p| membership_at(set, p)).collect();
    let gaps: Vec<Rational> = pts.windows(2).map(|w| rational_between(&w[0], &w[1])).collect();
    let gap_status: Vec<bool> = gaps.iter().map(|g| membership(set, std::slice::from_ref(g))).collect();
    let mut cells = Vec::new();
    // A point joins the gap to its left when statuses match, else the gap
    // to its right, else it forms a cell of its own.
    let joins_left = |i: usize| i > 0 && point_status[i] == gap_status[i - 1];
    let joins_right = |i: usize| i < gaps.len() && point_status[i] == gap_status[i] && !joins_left(i);
    for i in 0..pts.len() {
        if !joins_left(i) && !joins_right(i) {
            let w = pts[i].as_rational().unwrap_or_else(|| rational_between(&pts[i], &pts[i]));
            let e = Endpoint { value: pts[i].clone(), closed: true };
            cells.push(make_cell(c, set, tau, CellShape::Interval { lo: e.clone(), hi: e }, vec![w]));
        }
        if i < gaps.len() {
            let lo = Endpoint { value: pts[i].clone(), closed: joins_right(i) };
            let hi = Endpoint { value: pts[i + 1].clone(), closed: joins_left(i + 1) };
            cells.push(make_cell(c, set, tau, CellShape::Interval { lo, hi }, vec![gaps[i].clone()]));
        }
    }
    Ok(cells)
}

/// Grid points of increasing denominator inside `cell`, in chart
/// coordinates of its affine hull.
fn find_witness(
    cell: &RationalPolyhedron,
    interior: bool,
    accept: impl Fn(&[Rational]) -> bool,
) -> Option<RationalVector> {
    let verts = cell.vertices();
    let base = cell.vertex_centroid()?;
    if (!interior || cell.contains_relative_interior(&base)) && accept(&base) && verts.len() == 1 {
        return Some(base);
    }
    let chart = Chart::of(cell, base.clone());
    let coords: Vec<RationalVector> = verts.iter().map(|v| chart.coords(v)).collect();
    let r = chart.free.len();
    let lo: Vec<Rational> = (0..r).map(|i| coords.iter().map(|c| c[i].clone()).min().unwrap()).collect();
    let hi: Vec<Rational> = (0..r).map(|i| coords.iter().map(|c| c[i].clone()).max().unwrap()).collect();
    for n in 1..=24i64 {
        let den = Rational::from_integer(n.into());
        let ranges: Vec<Vec<Rational>> = (0..r)
            .map(|i| {
                let a = (&lo[i] * &den).ceil().to_integer();
                let b = (&hi[i] * &den).floor().to_integer();
                let mut v = Vec::new();
                let mut j = a;
                while j <= b {
                    v.push(Rational::from_integer(j.clone()) / &den);
                    j += 1;
                }
                v
            })
            .collect();
        let mut idx = vec![0usize; r];
        if ranges.iter().any(Vec::is_empty) {
            continue;
        }
        loop {
            let t: Vec<Rational> = idx.iter().zip(&ranges).map(|(&i, rg)| rg[i].clone()).collect();
            let x = chart.lift(&t);
            let ok = if interior { cell.contains_relative_interior(&x) } else { cell.contains(&x) };
            if ok && accept(&x) {
                return Some(x);
            }
            let mut pos = 0;
            loop {
                if pos == r {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < ranges[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == r {
                break;
            }
        }
    }
    None
}

fn cells_general(c: &ToricCouple, set: &SemiAlgebraicSet, tau: &Rational) -> Result<Vec<Cell>> {
    let complex = match ChamberComplex::new(c, Scope::Coefficient) {
        Ok(cx) => Some(cx),
        Err(Error::EmptyDomain) => None,
        Err(e) => return Err(e),
    };
    let mut cells = Vec::new();
    for ch in complex.iter().flat_map(|cx| cx.chambers.iter()) {
        let inside = |x: &[Rational]| membership(set, x);
        let w_in = find_witness(&ch.cell, true, inside).or_else(|| find_witness(&ch.cell, false, inside));
        let w_out = find_witness(&ch.cell, true, |x| !membership(set, x));
        for w in [w_in, w_out].into_iter().flatten() {
            let shape = CellShape::Region { polytope: ch.cell.clone(), outside_closure: false };
            cells.push(make_cell(c, set, tau, shape, w));
        }
    }
    let p = c.coeff_polytope();
    let closure = c.closure(Scope::Coefficient)?;
    if closure.vertices() == p.vertices() {
        return Ok(cells);
    }
    if let Some(w) = find_witness(p, true, |x| !c.in_closure(x)) {
        let shape = CellShape::Region { polytope: p.clone(), outside_closure: true };
        cells.push(make_cell(c, set, tau, shape, w));
    }
    Ok(cells)
}

/// Evaluates a univariate polynomial given in ascending rational
/// coefficients; used by callers that build probes by hand.
pub fn eval_q(coeffs: &[Rational], x: &Rational) -> Rational {
    QPoly::new(coeffs.to_vec()).eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Inequality;
    use crate::linalg::{q, qf, qvec};
    use crate::toric::fixtures::*;

    #[test]
    fn kss_domain_of_line_is_origin() {
        let c = p2_line();
        let s = kss_domain(&c).unwrap();
        assert!(membership(&s, &[q(0)]));
        for x in [qf(1, 100), qf(1, 4), qf(1, 2)] {
            assert!(!membership(&s, &[x]));
        }
    }

    #[test]
    fn level_set_three_quarters() {
        let c = p2_line();
        let s = level_set(&c, &qf(3, 4)).unwrap();
        assert!(membership(&s, &[qf(1, 3)]));
        assert!(!membership(&s, &[qf(17, 50)]));
        assert!(membership(&s, &[q(0)]));
        assert!(!membership(&SemiAlgebraicSet::empty(1), &[q(0)]));
    }

    #[test]
    fn full_boundary_level_set() {
        let c = p2_boundary();
        let s = kss_domain(&c).unwrap();
        for x in [q(0), qf(1, 4), qf(99, 100)] {
            assert!(membership(&s, &[x]));
        }
        assert!(!membership(&s, &[q(1)]));
        assert!(walls_k1(&c, &q(1)).unwrap().is_empty());
    }

    #[test]
    fn line_wall() {
        let c = p2_line();
        let w = walls_k1_certified(&c, &qf(3, 4)).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].wall.as_rational(), Some(qf(1, 3)));
        assert_eq!(w[0].wall.poly(), &IntPolynomial::from_i64(&[-1, 3]));
        assert_eq!(w[0].status, [true, true, false]);
        let (_, signs) = w[0].binding.clone().unwrap();
        assert_eq!(signs, [Sign::Positive, Sign::Zero, Sign::Negative]);
    }

    #[test]
    fn line_decomposition() {
        let c = p2_line();
        let d = chamber_decomposition(&c, &qf(3, 4)).unwrap();
        assert_eq!(d.cells.len(), 2);
        assert!(d.cells.iter().all(|c| c.verified));
        assert_eq!(d.cells[0].status, Status::Above);
        assert_eq!(d.cells[0].witness, vec![qf(1, 4)]);
        assert_eq!(d.cells[1].status, Status::Below);
        assert_eq!(d.cells[1].witness, vec![qf(2, 5)]);
        match &d.cells[0].shape {
            CellShape::Interval { lo, hi } => assert!(lo.closed && hi.closed),
            _ => panic!(),
        }
        match &d.cells[1].shape {
            CellShape::Interval { lo, hi } => assert!(!lo.closed && hi.closed),
            _ => panic!(),
        }
    }

    #[test]
    fn point_cell() {
        let d = chamber_decomposition(&p2_line(), &q(1)).unwrap();
        assert_eq!(d.cells.len(), 2);
        assert_eq!(d.cells[0].witness, vec![q(0)]);
        assert_eq!(d.cells[0].status, Status::Above);
    }

    #[test]
    fn symmetric_k2_single_cell() {
        let c = couple(
            p1p1(),
            &[&[1, 0, 1, 0], &[0, 1, 0, 1]],
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
        let d = chamber_decomposition(&c, &q(1)).unwrap();
        assert_eq!(d.cells.len(), 1);
        assert_eq!(d.cells[0].status, Status::Above);
        assert!(d.cells[0].verified);
    }

    #[test]
    fn batch_merges() {
        let w = batch_walls_k1(&[p2_line(), p2_line()], &qf(3, 4)).unwrap();
        assert_eq!(w.len(), 1);
    }
}
