//! Chamber complex of the coefficient domain: the cells on which the
//! combinatorial type of the moment polytope is constant, with exact
//! polynomial volume and first-moment functions on each cell.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::volume::{factorial, first_moment};
use crate::geometry::RationalPolyhedron;
use crate::linalg::{self, RationalVector};
use crate::poly::multivariate::principal_lattice;
use crate::poly::MultiPoly;
use crate::toric::{normalized_form, AffineForm, AffineMap, Scope, ToricCouple};
use crate::Rational;

/// Affine chart of a polyhedron's affine hull by its non-pivot coordinates.
#[derive(Clone, Debug)]
pub struct Chart {
    pub base: RationalVector,
    pub free: Vec<usize>,
    dirs: Vec<RationalVector>,
}

impl Chart {
    pub fn of(cell: &RationalPolyhedron, base: RationalVector) -> Self {
        let n = cell.dim();
        let mut eqs: Vec<RationalVector> = cell.implicit_equalities().iter().map(|h| h.a.clone()).collect();
        let pivots = if eqs.is_empty() { Vec::new() } else { linalg::rref(&mut eqs) };
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let dirs = free
            .iter()
            .map(|&f| {
                let mut d = vec![Rational::zero(); n];
                d[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    d[p] = -eqs[r][f].clone();
                }
                d
            })
            .collect();
        Self { base, free, dirs }
    }

    pub fn coords(&self, x: &[Rational]) -> RationalVector {
        self.free.iter().map(|&f| x[f].clone()).collect()
    }

    pub fn lift(&self, t: &[Rational]) -> RationalVector {
        let mut x = self.base.clone();
        for ((ti, &f), d) in t.iter().zip(&self.free).zip(&self.dirs) {
            x = linalg::add(&x, &linalg::scale(d, &(ti - &self.base[f])));
        }
        x
    }
}

/// Interpolates the vector-valued function `f`, polynomial of degree at
/// most `degree` on `cell`, from nodes `w + ε·α` of the principal lattice
/// around the relative-interior point `w`. The result is a polynomial in
/// the free coordinates of the hull chart, valid on the hull.
pub fn interpolate_on_cell<F>(
    cell: &RationalPolyhedron,
    witness: &[Rational],
    degree: usize,
    width: usize,
    f: F,
) -> Result<Vec<MultiPoly>>
where
    F: Fn(&[Rational]) -> Result<Vec<Rational>> + Sync,
{
    let chart = Chart::of(cell, witness.to_vec());
    let t0 = chart.coords(witness);
    let alphas = principal_lattice(t0.len(), degree);
    let mut eps = Rational::one();
    let nodes = loop {
        let nodes: Vec<RationalVector> = alphas
            .iter()
            .map(|a| {
                t0.iter()
                    .zip(a)
                    .map(|(t, &k)| t + &eps * Rational::from_integer(k.into()))
                    .collect()
            })
            .collect();
        if nodes.iter().all(|t| cell.contains(&chart.lift(t))) {
            break nodes;
        }
        eps /= Rational::from_integer(2.into());
    };
    let values: Vec<Vec<Rational>> = nodes
        .par_iter()
        .map(|t| {
            let v = f(&chart.lift(t))?;
            debug_assert_eq!(v.len(), width);
            Ok(v)
        })
        .collect::<Result<_>>()?;
    (0..width)
        .map(|c| {
            let col: Vec<Rational> = values.iter().map(|v| v[c].clone()).collect();
            MultiPoly::interpolate(&nodes, &col, degree)
                .map(|p| p.reindex(cell.dim(), &chart.free))
                .ok_or_else(|| Error::InvalidInput("interpolation nodes are not unisolvent".into()))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Chamber {
    pub cell: RationalPolyhedron,
    /// Vertex centroid of the cell.
    pub witness: RationalVector,
    /// Lebesgue volume of `P(x)`.
    pub volume: MultiPoly,
    /// `∫_{P(x)} m dm`.
    pub moment: Vec<MultiPoly>,
    /// Vertices of `P(x)` as affine maps, sorted by their value at the witness.
    pub vertices: Vec<AffineMap>,
}

impl Chamber {
    /// `x ↦ min_{P(x)} ⟨·, u⟩` on this chamber.
    pub fn min_support_form(&self, u: &[Rational]) -> AffineForm {
        self.vertices
            .iter()
            .map(|m| m.pair(u))
            .min_by(|f, g| f.eval(&self.witness).cmp(&g.eval(&self.witness)))
            .expect("chamber has vertices")
    }

    pub fn is_big(&self) -> bool {
        !self.volume.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct ChamberComplex {
    pub domain: RationalPolyhedron,
    pub chambers: Vec<Chamber>,
}

impl ChamberComplex {
    pub fn new(c: &ToricCouple, scope: Scope) -> Result<Self> {
        let domain = c.closure(scope)?;
        Self::over(c, domain)
    }

    pub fn over(c: &ToricCouple, domain: RationalPolyhedron) -> Result<Self> {
        if domain.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let active = active_sets(c, &domain)?;
        let mut hyperplanes = BTreeSet::new();
        for (_, forms) in &active {
            for g in forms {
                if !g.is_trivial() {
                    hyperplanes.insert(normalized_form(g));
                }
            }
        }
        let mut cells = vec![domain.clone()];
        for (b, a) in hyperplanes {
            let h = AffineForm::new(b, a);
            let mut next = Vec::with_capacity(cells.len());
            for cell in cells {
                let vals: Vec<Rational> = cell.vertices().iter().map(|v| h.eval(v)).collect();
                if vals.iter().any(Signed::is_positive) && vals.iter().any(Signed::is_negative) {
                    next.push(cell.with_inequality(h.clone()).dualize()?);
                    next.push(cell.with_inequality(h.negated()).dualize()?);
                } else {
                    next.push(cell);
                }
            }
            cells = next;
        }
        let d = c.dim();
        let mut chambers = cells
            .into_par_iter()
            .map(|cell| build_chamber(c, &active, cell, d))
            .collect::<Result<Vec<_>>>()?;
        chambers.sort_by(|a, b| a.witness.cmp(&b.witness));
        Ok(Self { domain, chambers })
    }

    pub fn locate(&self, x: &[Rational]) -> Option<&Chamber> {
        self.chambers.iter().find(|ch| ch.cell.contains(x))
    }
}

type ActiveSet = (AffineMap, Vec<AffineForm>);

/// d-subsets of rays with invertible matrix, as vertex maps plus their
/// feasibility forms, restricted to those feasible somewhere on `domain`.
fn active_sets(c: &ToricCouple, domain: &RationalPolyhedron) -> Result<Vec<ActiveSet>> {
    let n = c.n_rays();
    let d = c.dim();
    let combos = combinations(n, d);
    let found: Vec<Option<ActiveSet>> = combos
        .par_iter()
        .map(|basis| {
            let Some(m) = c.vertex_map(basis) else {
                return Ok(None);
            };
            let forms: Vec<AffineForm> = (0..n)
                .filter(|i| !basis.contains(i))
                .map(|i| c.slack_form(&m, i))
                .collect();
            let mut region = domain.clone();
            for f in &forms {
                region = region.with_inequality(f.clone());
            }
            let region = region.dualize_or_empty()?;
            Ok((!region.is_empty()).then_some((m, forms)))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

fn build_chamber(c: &ToricCouple, active: &[ActiveSet], cell: RationalPolyhedron, d: usize) -> Result<Chamber> {
    let witness = cell.vertex_centroid().ok_or(Error::EmptyDomain)?;
    let mut seen = BTreeSet::new();
    let mut vertices: Vec<(RationalVector, AffineMap)> = Vec::new();
    for (m, forms) in active {
        if forms.iter().all(|f| !f.eval(&witness).is_negative()) {
            let at = m.eval(&witness);
            if seen.insert(at.clone()) {
                vertices.push((at, m.clone()));
            }
        }
    }
    vertices.sort_by(|a, b| a.0.cmp(&b.0));
    let polys = interpolate_on_cell(&cell, &witness, d + 1, d + 1, |x| {
        let p = c.polytope_unchecked(x)?;
        let (v, mut mom) = first_moment(&p)?;
        mom.insert(0, v);
        Ok(mom)
    })?;
    let mut polys = polys.into_iter();
    let volume = polys.next().expect("volume column");
    Ok(Chamber {
        cell,
        witness,
        volume,
        moment: polys.collect(),
        vertices: vertices.into_iter().map(|(_, m)| m).collect(),
    })
}

/// One rational function per chamber.
#[derive(Clone, Debug)]
pub struct RationalPiece {
    pub cell: RationalPolyhedron,
    pub num: MultiPoly,
    pub den: MultiPoly,
}

#[derive(Clone, Debug)]
pub struct PiecewiseRationalFunction {
    pub nvars: usize,
    pub pieces: Vec<RationalPiece>,
}

impl PiecewiseRationalFunction {
    /// Value at `x` from the first piece containing it, or `None` outside
    /// the pieces or where the denominator vanishes.
    pub fn eval(&self, x: &[Rational]) -> Option<Rational> {
        let piece = self.pieces.iter().find(|p| p.cell.contains(x))?;
        let den = piece.den.eval(x);
        (!den.is_zero()).then(|| piece.num.eval(x) / den)
    }
}

/// `x ↦ d!·vol(P(x))` over the log Fano closure intersected with `P`.
pub fn volume_function(c: &ToricCouple) -> Result<PiecewiseRationalFunction> {
    let complex = ChamberComplex::new(c, Scope::Coefficient)?;
    Ok(normalized_volume(c, &complex))
}

pub fn normalized_volume(c: &ToricCouple, complex: &ChamberComplex) -> PiecewiseRationalFunction {
    let f = factorial(c.dim());
    PiecewiseRationalFunction {
        nvars: c.k(),
        pieces: complex
            .chambers
            .iter()
            .map(|ch| RationalPiece {
                cell: ch.cell.clone(),
                num: ch.volume.scale(&f),
                den: MultiPoly::constant(c.k(), Rational::one()),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{volume, Inequality};
    use crate::linalg::{q, qf, qvec};
    use crate::toric::fixtures::*;

    fn x() -> MultiPoly {
        MultiPoly::var(1, 0)
    }

    fn one_minus(a: i64) -> MultiPoly {
        MultiPoly::constant(1, q(1)).sub(&x().scale(&q(a)))
    }

    #[test]
    fn full_boundary_volume() {
        let c = p2_boundary();
        let v = volume_function(&c).unwrap();
        assert_eq!(v.pieces.len(), 1);
        let expected = one_minus(1).mul(&one_minus(1)).scale(&q(9));
        assert_eq!(v.pieces[0].num, expected);
    }

    #[test]
    fn line_volume() {
        let c = p2_line();
        let v = volume_function(&c).unwrap();
        assert_eq!(v.pieces.len(), 1);
        let three_minus = MultiPoly::constant(1, q(3)).sub(&x());
        assert_eq!(v.pieces[0].num, three_minus.mul(&three_minus));
        assert_eq!(v.eval(&[q(0)]), Some(q(9)));
        assert_eq!(v.eval(&[qf(1, 2)]), Some(qf(25, 4)));
    }

    #[test]
    fn p1p2_volume() {
        let f = fan(
            3,
            &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, -1, -1]],
            &[&[0, 2, 3], &[0, 3, 4], &[0, 4, 2], &[1, 2, 3], &[1, 3, 4], &[1, 4, 2]],
        );
        let c = couple(f, &[&[1, 1, 1, 1, 0]], interval(q(0), qf(1, 2)));
        let v = volume_function(&c).unwrap();
        let expected = MultiPoly::constant(1, q(2))
            .sub(&x().scale(&q(2)))
            .mul(&MultiPoly::constant(1, q(3)).sub(&x().scale(&q(2))).mul(&MultiPoly::constant(1, q(3)).sub(&x().scale(&q(2)))))
            .scale(&q(3));
        assert_eq!(v.pieces.len(), 1);
        assert_eq!(v.pieces[0].num, expected);
        assert_eq!(v.eval(&[qf(1, 2)]), Some(q(12)));
    }

    #[test]
    fn f1_fiber_chambers_agree_with_direct_volumes() {
        // x·(V_{e1} + V_{-e1-e2}) changes the combinatorial type of P(x).
        let c = couple(f1(), &[&[1, 0, 0, 1]], interval(q(0), q(1)));
        let complex = ChamberComplex::new(&c, Scope::Coefficient).unwrap();
        for t in 0..=10 {
            let x = vec![qf(t, 10)];
            let Some(ch) = complex.locate(&x) else { continue };
            let p = c.anticanonical_polytope(&x).unwrap();
            assert_eq!(ch.volume.eval(&x), volume(&p).unwrap());
        }
    }

    #[test]
    fn k2_chambers_cover_and_match() {
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
        let complex = ChamberComplex::new(&c, Scope::Coefficient).unwrap();
        for a in 0..=4 {
            for b in 0..=4 {
                let x = vec![qf(a, 4), qf(b, 4)];
                let ch = complex.locate(&x).expect("covered");
                let p = c.anticanonical_polytope(&x).unwrap();
                assert_eq!(ch.volume.eval(&x), volume(&p).unwrap());
                let (_, mom) = first_moment(&p).unwrap();
                for (m, e) in ch.moment.iter().zip(&mom) {
                    assert_eq!(&m.eval(&x), e);
                }
            }
        }
    }

    #[test]
    fn chart_on_lower_dimensional_cell() {
        let cell = RationalPolyhedron::from_points(2, &[qvec(&[0, 1]), qvec(&[1, 0])]).unwrap();
        let chart = Chart::of(&cell, vec![qf(1, 2), qf(1, 2)]);
        assert_eq!(chart.free.len(), 1);
        let p = chart.lift(&[qf(1, 4)]);
        assert!(cell.contains(&p));
    }
}
