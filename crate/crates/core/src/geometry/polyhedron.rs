//! Rational polyhedra in H- and V-representation.
//!
//! Vertex enumeration is the double-description method applied to the
//! homogenized cone `{(t, m) : t·b + A·m ≥ 0, t ≥ 0}`; convex hulls run the
//! same routine on the polar cone. Every generator is kept as a primitive
//! integer direction so entries stay small.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, dot, RationalVector};
use crate::Rational;

pub const MAX_DIM: usize = 6;

/// Affine inequality `b + ⟨a, m⟩ ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub b: Rational,
    pub a: RationalVector,
}

impl Inequality {
    pub fn new(b: Rational, a: RationalVector) -> Self {
        Self { b, a }
    }

    pub fn eval(&self, m: &[Rational]) -> Rational {
        &self.b + dot(&self.a, m)
    }

    pub fn negated(&self) -> Self {
        Self {
            b: -self.b.clone(),
            a: self.a.iter().map(|x| -x).collect(),
        }
    }

    /// Positive rescaling to coprime integer data, the canonical form.
    pub fn normalized(&self) -> Self {
        let mut all = vec![self.b.clone()];
        all.extend(self.a.iter().cloned());
        if all.iter().all(Zero::is_zero) {
            return self.clone();
        }
        let ints = linalg::primitive_integer(&all);
        let mut it = ints.into_iter().map(Rational::from_integer);
        let b = it.next().unwrap();
        Self { b, a: it.collect() }
    }

    fn homogeneous(&self) -> RationalVector {
        let mut v = vec![self.b.clone()];
        v.extend(self.a.iter().cloned());
        v
    }

    pub fn is_trivial(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep {
    pub vertices: Vec<RationalVector>,
    pub rays: Vec<RationalVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolyhedron {
    dim: usize,
    h_rep: Vec<Inequality>,
    v_rep: Option<VRep>,
}

fn lex_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    a.iter().cmp(b.iter())
}

impl RationalPolyhedron {
    pub fn from_inequalities(dim: usize, h_rep: Vec<Inequality>) -> Self {
        Self {
            dim,
            h_rep,
            v_rep: None,
        }
    }

    /// The empty polyhedron, carrying an empty V-representation.
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            h_rep: vec![Inequality::new(-Rational::one(), vec![Rational::zero(); dim])],
            v_rep: Some(VRep {
                vertices: Vec::new(),
                rays: Vec::new(),
            }),
        }
    }

    /// True when the V-representation is known and has no generators.
    pub fn is_empty(&self) -> bool {
        self.v_rep
            .as_ref()
            .is_some_and(|v| v.vertices.is_empty() && v.rays.is_empty())
    }

    /// The full space `R^dim` (no inequalities).
    pub fn universe(dim: usize) -> Self {
        Self::from_inequalities(dim, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h_rep(&self) -> &[Inequality] {
        &self.h_rep
    }

    pub fn v_rep(&self) -> Option<&VRep> {
        self.v_rep.as_ref()
    }

    /// Vertices; empty when the V-representation has not been computed.
    pub fn vertices(&self) -> &[RationalVector] {
        self.v_rep.as_ref().map_or(&[], |v| &v.vertices)
    }

    pub fn rays(&self) -> &[RationalVector] {
        self.v_rep.as_ref().map_or(&[], |v| &v.rays)
    }

    pub fn is_bounded(&self) -> bool {
        self.v_rep.as_ref().is_some_and(|v| v.rays.is_empty())
    }

    pub fn contains(&self, m: &[Rational]) -> bool {
        self.h_rep.iter().all(|h| !h.eval(m).is_negative())
    }

    /// Membership in the relative interior: every inequality that is not an
    /// implicit equality holds strictly.
    pub fn contains_relative_interior(&self, m: &[Rational]) -> bool {
        let generators = self.vertices();
        self.h_rep.iter().all(|h| {
            let v = h.eval(m);
            if v.is_positive() {
                return true;
            }
            v.is_zero()
                && generators.iter().all(|g| h.eval(g).is_zero())
                && self.rays().iter().all(|r| dot(&h.a, r).is_zero())
        })
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut h = self.h_rep.clone();
        h.extend(other.h_rep.iter().cloned());
        Self::from_inequalities(self.dim, h)
    }

    pub fn with_inequality(&self, ineq: Inequality) -> Self {
        let mut h = self.h_rep.clone();
        h.push(ineq);
        Self::from_inequalities(self.dim, h)
    }

    /// Dimension of the affine hull (requires the V-representation).
    pub fn affine_dim(&self) -> usize {
        let verts = self.vertices();
        let Some(v0) = verts.first() else {
            return 0;
        };
        let mut dirs: Vec<RationalVector> =
            verts[1..].iter().map(|v| linalg::sub(v, v0)).collect();
        dirs.extend(self.rays().iter().cloned());
        linalg::rank(&dirs)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == self.dim
    }

    /// Average of the vertices: a rational point of the relative interior
    /// for bounded polyhedra.
    pub fn vertex_centroid(&self) -> Option<RationalVector> {
        let verts = self.vertices();
        if verts.is_empty() {
            return None;
        }
        let n = Rational::from_integer(verts.len().into());
        let mut c = vec![Rational::zero(); self.dim];
        for v in verts {
            c = linalg::add(&c, v);
        }
        Some(c.into_iter().map(|x| x / &n).collect())
    }

    /// Computes the V-representation, drops redundant inequalities and
    /// returns the polyhedron with both representations populated.
    pub fn dualize(&self) -> Result<Self> {
        if self.dim > MAX_DIM {
            return Err(Error::DimensionOverflow(self.dim));
        }
        for h in &self.h_rep {
            if h.a.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: h.a.len(),
                });
            }
        }
        let (vertices, rays) = enumerate_generators(self.dim, &self.h_rep)?;
        let v_rep = VRep { vertices, rays };
        let h_rep = irredundant(self.dim, &self.h_rep, &v_rep);
        Ok(Self {
            dim: self.dim,
            h_rep,
            v_rep: Some(v_rep),
        })
    }

    /// As `dualize`, mapping infeasibility to `RationalPolyhedron::empty`.
    pub fn dualize_or_empty(&self) -> Result<Self> {
        match self.dualize() {
            Err(Error::EmptyPolyhedron) => Ok(Self::empty(self.dim)),
            r => r,
        }
    }

    /// Dualized copy, or `self` when both representations are present.
    pub fn ensure_dual(&self) -> Result<Self> {
        if self.v_rep.is_some() {
            Ok(self.clone())
        } else {
            self.dualize()
        }
    }

    /// Convex hull of finitely many points, with both representations.
    pub fn from_points(dim: usize, points: &[RationalVector]) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionOverflow(dim));
        }
        let Some(p0) = points.first() else {
            return Err(Error::EmptyPolyhedron);
        };
        let mut h_rep = Vec::new();
        // Affine hull equations: (b, a) with b + <a, p> = 0 for all points.
        let rows: Vec<RationalVector> = points
            .iter()
            .map(|p| {
                let mut r = vec![Rational::one()];
                r.extend(p.iter().cloned());
                r
            })
            .collect();
        for e in linalg::null_space(&rows, dim + 1) {
            let ineq = Inequality::new(e[0].clone(), e[1..].to_vec());
            h_rep.push(ineq.negated());
            h_rep.push(ineq);
        }
        let dirs: Vec<RationalVector> = points[1..].iter().map(|p| linalg::sub(p, p0)).collect();
        let mut echelon = dirs.clone();
        let pivots = linalg::rref(&mut echelon);
        let r = pivots.len();
        if r > 0 {
            // Facets of the hull projected onto the pivot coordinates, which
            // are an affine chart of the hull.
            let proj: Vec<RationalVector> = rows
                .iter()
                .map(|row| {
                    let mut v = vec![Rational::one()];
                    v.extend(pivots.iter().map(|&c| row[c + 1].clone()));
                    v
                })
                .collect();
            for w in cone_extreme_rays(&proj, r + 1)? {
                let mut a = vec![Rational::zero(); dim];
                for (i, &c) in pivots.iter().enumerate() {
                    a[c] = w[i + 1].clone();
                }
                h_rep.push(Inequality::new(w[0].clone(), a));
            }
        }
        Self::from_inequalities(dim, h_rep).dualize()
    }

    /// Vertex indices lying on each inequality of the H-representation.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let verts = self.vertices();
        self.h_rep
            .iter()
            .map(|h| {
                verts
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| h.eval(v).is_zero())
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect()
    }

    /// Inequalities tight on every generator.
    pub fn implicit_equalities(&self) -> Vec<&Inequality> {
        self.h_rep
            .iter()
            .filter(|h| {
                self.vertices().iter().all(|v| h.eval(v).is_zero())
                    && self.rays().iter().all(|r| dot(&h.a, r).is_zero())
            })
            .collect()
    }
}

/// Small fixed-capacity bitset used for the zero sets of the DD method.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(n: usize) -> Self {
        Self(vec![0; n.div_ceil(64).max(1)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn is_superset(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

fn primitive(v: &[Rational]) -> RationalVector {
    linalg::primitive_integer(v)
        .into_iter()
        .map(Rational::from_integer)
        .collect()
}

/// Extreme rays of the pointed cone `{y ∈ R^n : ⟨g, y⟩ ≥ 0 for g in rows}`.
///
/// Returns `Error::Lineality` when the constraint rows do not have full rank.
pub(crate) fn cone_extreme_rays(rows: &[RationalVector], n: usize) -> Result<Vec<RationalVector>> {
    let init = linalg::independent_rows(rows);
    if init.len() < n {
        return Err(Error::Lineality);
    }
    let basis: Vec<RationalVector> = init.iter().map(|&i| rows[i].clone()).collect();
    let inv = linalg::inverse(&basis).expect("independent rows");
    let m = rows.len();
    let mut rays: Vec<(RationalVector, ZeroSet)> = (0..n)
        .map(|j| {
            let col: RationalVector = inv.iter().map(|row| row[j].clone()).collect();
            let mut z = ZeroSet::new(m);
            for (k, &i) in init.iter().enumerate() {
                if k != j {
                    z.insert(i);
                }
            }
            (primitive(&col), z)
        })
        .collect();
    // Rows already satisfied tightly by the initial rays must be recorded.
    for (i, row) in rows.iter().enumerate() {
        if init.contains(&i) {
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|(r, _)| dot(row, r)).collect();
        let mut next: Vec<(RationalVector, ZeroSet)> = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (k, v) in vals.iter().enumerate() {
            if v.is_positive() {
                pos.push(k);
                next.push(rays[k].clone());
            } else if v.is_zero() {
                let mut r = rays[k].clone();
                r.1.insert(i);
                next.push(r);
            } else {
                neg.push(k);
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].1.and(&rays[q].1);
                if common.count() + 2 < n {
                    continue;
                }
                let adjacent = rays.iter().enumerate().all(|(k, (_, z))| {
                    k == p || k == q || !z.is_superset(&common)
                });
                if !adjacent {
                    continue;
                }
                let vp = &vals[p];
                let vq = &vals[q];
                let combo: RationalVector = rays[q]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(yq, yp)| vp * yq - vq * yp)
                    .collect();
                let mut z = common;
                z.insert(i);
                next.push((primitive(&combo), z));
            }
        }
        rays = next;
    }
    let mut out: Vec<RationalVector> = rays.into_iter().map(|(r, _)| r).collect();
    out.sort_by(|a, b| lex_cmp(a, b));
    out.dedup();
    Ok(out)
}

fn enumerate_generators(
    dim: usize,
    h_rep: &[Inequality],
) -> Result<(Vec<RationalVector>, Vec<RationalVector>)> {
    let mut rows: Vec<RationalVector> = h_rep.iter().map(Inequality::homogeneous).collect();
    let mut t_row = vec![Rational::zero(); dim + 1];
    t_row[0] = Rational::one();
    rows.push(t_row);
    let normals: Vec<RationalVector> = h_rep.iter().map(|h| h.a.clone()).collect();
    if linalg::rank(&normals) < dim {
        // Pin the lineality directions to decide emptiness before rejecting.
        let mut pinned = h_rep.to_vec();
        for l in linalg::null_space(&normals, dim) {
            let e = Inequality::new(Rational::zero(), l);
            pinned.push(e.negated());
            pinned.push(e);
        }
        enumerate_generators(dim, &pinned)?;
        return Err(Error::Lineality);
    }
    let gens = cone_extreme_rays(&rows, dim + 1)?;
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for g in gens {
        let t = &g[0];
        if t.is_zero() {
            rays.push(primitive(&g[1..]));
        } else {
            vertices.push(g[1..].iter().map(|x| x / t).collect::<RationalVector>());
        }
    }
    if vertices.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    vertices.sort_by(|a, b| lex_cmp(a, b));
    vertices.dedup();
    rays.sort_by(|a, b| lex_cmp(a, b));
    rays.dedup();
    Ok((vertices, rays))
}

fn irredundant(dim: usize, h_rep: &[Inequality], v: &VRep) -> Vec<Inequality> {
    let tight = |h: &Inequality| -> (Vec<usize>, Vec<usize>) {
        let tv = (0..v.vertices.len())
            .filter(|&i| h.eval(&v.vertices[i]).is_zero())
            .collect();
        let tr = (0..v.rays.len())
            .filter(|&i| dot(&h.a, &v.rays[i]).is_zero())
            .collect();
        (tv, tr)
    };
    let face_dim = |tv: &[usize], tr: &[usize]| -> Option<usize> {
        let v0 = &v.vertices[*tv.first()?];
        let mut dirs: Vec<RationalVector> = tv[1..]
            .iter()
            .map(|&i| linalg::sub(&v.vertices[i], v0))
            .collect();
        dirs.extend(tr.iter().map(|&i| v.rays[i].clone()));
        Some(linalg::rank(&dirs))
    };
    let all_v: Vec<usize> = (0..v.vertices.len()).collect();
    let all_r: Vec<usize> = (0..v.rays.len()).collect();
    let pdim = face_dim(&all_v, &all_r).unwrap_or(0);

    let mut equalities: Vec<RationalVector> = Vec::new();
    let mut facets: Vec<(Vec<usize>, Vec<usize>, Inequality)> = Vec::new();
    for h in h_rep {
        let h = h.normalized();
        let (tv, tr) = tight(&h);
        if tv.len() == v.vertices.len() && tr.len() == v.rays.len() {
            if !h.is_trivial() {
                equalities.push(h.homogeneous());
            }
            continue;
        }
        if pdim == 0 {
            continue;
        }
        if face_dim(&tv, &tr) == Some(pdim - 1)
            && !facets.iter().any(|(fv, fr, _)| *fv == tv && *fr == tr)
        {
            facets.push((tv, tr, h));
        }
    }
    let mut out: Vec<Inequality> = Vec::new();
    for i in linalg::independent_rows(&equalities) {
        let e = Inequality::new(equalities[i][0].clone(), equalities[i][1..].to_vec()).normalized();
        out.push(e.negated());
        out.push(e);
    }
    out.extend(facets.into_iter().map(|(_, _, h)| h));
    let _ = dim;
    out.sort_by(|x, y| lex_cmp(&x.a, &y.a).then_with(|| x.b.cmp(&y.b)));
    out.dedup();
    out
}
