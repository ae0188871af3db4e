//! Exact volumes and first moments through a pulling triangulation.
//!
//! The triangulation cones the anchor vertex over every facet that misses it
//! and recurses into those facets; its simplices are vertex-index tuples, so
//! the same combinatorics serves volume and moment.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::polyhedron::RationalPolyhedron;
use crate::linalg::{self, RationalVector};
use crate::Rational;

pub(crate) fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n as u64).product::<u64>().into())
}

fn affine_rank(verts: &[RationalVector], idx: &[usize]) -> usize {
    let Some(&i0) = idx.first() else {
        return 0;
    };
    let dirs: Vec<RationalVector> = idx[1..]
        .iter()
        .map(|&i| linalg::sub(&verts[i], &verts[i0]))
        .collect();
    linalg::rank(&dirs)
}

/// Pulling triangulation of the face with vertex set `face` (of dimension
/// `face_dim`), anchored at `anchor` when it lies in the face, otherwise at
/// the smallest vertex index.
fn triangulate_face(
    verts: &[RationalVector],
    incidence: &[Vec<usize>],
    face: &[usize],
    face_dim: usize,
    anchor: Option<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if face_dim == 0 {
        out.push(vec![face[0]]);
        return;
    }
    let a = anchor.filter(|a| face.contains(a)).unwrap_or(face[0]);
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for inc in incidence {
        let sub: Vec<usize> = face.iter().copied().filter(|i| inc.contains(i)).collect();
        if sub.len() == face.len() || sub.contains(&a) || sub.is_empty() {
            continue;
        }
        if affine_rank(verts, &sub) == face_dim - 1 && !facets.contains(&sub) {
            facets.push(sub);
        }
    }
    for f in facets {
        let mut simplices = Vec::new();
        triangulate_face(verts, incidence, &f, face_dim - 1, None, &mut simplices);
        for mut s in simplices {
            s.insert(0, a);
            out.push(s);
        }
    }
}

/// Simplices (vertex-index tuples) of the triangulation anchored at the
/// vertex `anchor`. Requires a bounded full-dimensional polytope.
pub fn triangulation(p: &RationalPolyhedron, anchor: usize) -> Vec<Vec<usize>> {
    let verts = p.vertices();
    let incidence = p.incidence();
    let all: Vec<usize> = (0..verts.len()).collect();
    let mut out = Vec::new();
    triangulate_face(verts, &incidence, &all, p.dim(), Some(anchor), &mut out);
    out
}

fn simplex_det(verts: &[RationalVector], s: &[usize]) -> Rational {
    let v0 = &verts[s[0]];
    let m: Vec<RationalVector> = s[1..].iter().map(|&i| linalg::sub(&verts[i], v0)).collect();
    linalg::det(&m).abs()
}

fn bounded_dual(p: &RationalPolyhedron) -> Result<RationalPolyhedron> {
    let p = p.ensure_dual()?;
    if !p.rays().is_empty() {
        return Err(Error::Unbounded);
    }
    Ok(p)
}

/// Lebesgue volume; zero for lower-dimensional polytopes.
pub fn volume(p: &RationalPolyhedron) -> Result<Rational> {
    volume_with_anchor(p, 0)
}

/// Volume from the triangulation anchored at vertex `anchor` (any choice
/// gives the same value).
pub fn volume_with_anchor(p: &RationalPolyhedron, anchor: usize) -> Result<Rational> {
    let p = bounded_dual(p)?;
    if !p.is_full_dimensional() {
        return Ok(Rational::zero());
    }
    let verts = p.vertices();
    let total = triangulation(&p, anchor)
        .iter()
        .fold(Rational::zero(), |acc, s| acc + simplex_det(verts, s));
    Ok(total / factorial(p.dim()))
}

/// Volume together with the first moment `∫_p m dm`.
pub fn first_moment(p: &RationalPolyhedron) -> Result<(Rational, RationalVector)> {
    let p = bounded_dual(p)?;
    let d = p.dim();
    if !p.is_full_dimensional() {
        return Ok((Rational::zero(), vec![Rational::zero(); d]));
    }
    let verts = p.vertices();
    let mut vol = Rational::zero();
    let mut mom = vec![Rational::zero(); d];
    let n_plus_1 = Rational::from_integer((d + 1).into());
    for s in triangulation(&p, 0) {
        let v = simplex_det(verts, &s) / factorial(d);
        let mut centroid = vec![Rational::zero(); d];
        for &i in &s {
            centroid = linalg::add(&centroid, &verts[i]);
        }
        for (m, c) in mom.iter_mut().zip(centroid) {
            *m += &v * c / &n_plus_1;
        }
        vol += v;
    }
    Ok((vol, mom))
}

/// Barycenter of a full-dimensional polytope.
pub fn moment(p: &RationalPolyhedron) -> Result<RationalVector> {
    let (vol, mom) = first_moment(p)?;
    if vol.is_zero() {
        return Err(Error::ZeroVolume);
    }
    Ok(mom.into_iter().map(|m| m / &vol).collect())
}

/// `min_{m ∈ p} ⟨m, u⟩` over a bounded polyhedron.
pub fn min_support(p: &RationalPolyhedron, u: &[Rational]) -> Result<Rational> {
    let p = bounded_dual(p)?;
    p.vertices()
        .iter()
        .map(|v| linalg::dot(v, u))
        .min()
        .ok_or(Error::EmptyPolyhedron)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polyhedron::Inequality;
    use crate::linalg::{q, qf, qvec};

    fn from_pts(d: usize, pts: &[&[i64]]) -> RationalPolyhedron {
        let pts: Vec<RationalVector> = pts.iter().map(|p| qvec(p)).collect();
        RationalPolyhedron::from_points(d, &pts).unwrap()
    }

    fn box_poly(lo: &[i64], hi: &[i64]) -> RationalPolyhedron {
        let d = lo.len();
        let mut h = Vec::new();
        for i in 0..d {
            let mut a = vec![q(0); d];
            a[i] = q(1);
            h.push(Inequality::new(q(-lo[i]), a.clone()));
            a[i] = q(-1);
            h.push(Inequality::new(q(hi[i]), a));
        }
        RationalPolyhedron::from_inequalities(d, h).dualize().unwrap()
    }

    #[test]
    fn triangle_volume_and_barycenter() {
        let t = from_pts(2, &[&[-1, -1], &[2, -1], &[-1, 2]]);
        assert_eq!(volume(&t).unwrap(), qf(9, 2));
        assert_eq!(moment(&t).unwrap(), qvec(&[0, 0]));
        assert_eq!(min_support(&t, &qvec(&[1, 0])).unwrap(), q(-1));
        assert_eq!(min_support(&t, &qvec(&[-1, -1])).unwrap(), q(-1));
    }

    #[test]
    fn cube_and_rectangle() {
        assert_eq!(volume(&box_poly(&[0, 0, 0], &[1, 1, 1])).unwrap(), q(1));
        let r = box_poly(&[0, 0], &[2, 1]);
        assert_eq!(moment(&r).unwrap(), vec![q(1), qf(1, 2)]);
    }

    #[test]
    fn shifted_triangle_volume() {
        let t = RationalPolyhedron::from_points(
            2,
            &[qvec(&[-1, -1]), vec![q(-1), qf(3, 2)], vec![qf(3, 2), q(-1)]],
        )
        .unwrap();
        assert_eq!(volume(&t).unwrap(), qf(25, 8));
    }

    #[test]
    fn anchor_independence() {
        let p = from_pts(3, &[&[0, 0, 0], &[3, 0, 0], &[0, 2, 0], &[0, 0, 1], &[2, 2, 1], &[1, 0, 2]]);
        let v0 = volume(&p).unwrap();
        for a in 0..p.vertices().len() {
            assert_eq!(volume_with_anchor(&p, a).unwrap(), v0);
        }
    }

    #[test]
    fn degenerate_and_errors() {
        let seg = from_pts(2, &[&[0, 0], &[1, 0]]);
        assert_eq!(volume(&seg).unwrap(), q(0));
        assert_eq!(moment(&seg), Err(Error::ZeroVolume));
        let point = from_pts(2, &[&[0, 0]]);
        assert_eq!(min_support(&point, &qvec(&[3, 7])).unwrap(), q(0));
        let orthant = RationalPolyhedron::from_inequalities(
            1,
            vec![Inequality::new(q(0), qvec(&[1]))],
        );
        assert_eq!(volume(&orthant), Err(Error::Unbounded));
    }
}
