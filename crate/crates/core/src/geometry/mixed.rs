//! Minkowski sums and mixed volumes.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::polyhedron::RationalPolyhedron;
use crate::geometry::volume::{factorial, volume};
use crate::linalg::{self, RationalVector};
use crate::Rational;

pub fn minkowski_sum(ps: &[&RationalPolyhedron]) -> Result<RationalPolyhedron> {
    let Some(first) = ps.first() else {
        return Err(Error::EmptyPolyhedron);
    };
    let d = first.dim();
    let mut points: Vec<RationalVector> = vec![vec![Rational::zero(); d]];
    for p in ps {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.dim(),
            });
        }
        let p = p.ensure_dual()?;
        if !p.is_bounded() {
            return Err(Error::Unbounded);
        }
        let mut next = Vec::with_capacity(points.len() * p.vertices().len());
        for a in &points {
            for v in p.vertices() {
                next.push(linalg::add(a, v));
            }
        }
        next.sort();
        next.dedup();
        points = next;
    }
    RationalPolyhedron::from_points(d, &points)
}

/// Nonnegative dilation `s·p` of a bounded polytope.
pub fn dilate(p: &RationalPolyhedron, s: &Rational) -> Result<RationalPolyhedron> {
    let p = p.ensure_dual()?;
    let pts: Vec<RationalVector> = p.vertices().iter().map(|v| linalg::scale(v, s)).collect();
    RationalPolyhedron::from_points(p.dim(), &pts)
}

/// Mixed volume normalized so that `MV(P, …, P) = vol(P)`, by
/// inclusion–exclusion over the Minkowski sums of all nonempty subfamilies.
pub fn mixed_volume(ps: &[RationalPolyhedron]) -> Result<Rational> {
    let Some(first) = ps.first() else {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: 0,
        });
    };
    let d = first.dim();
    if ps.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: ps.len(),
        });
    }
    let duals: Vec<RationalPolyhedron> = ps.iter().map(|p| p.ensure_dual()).collect::<Result<_>>()?;
    if duals.iter().any(|p| !p.is_bounded()) {
        return Err(Error::Unbounded);
    }
    let mut total = Rational::zero();
    for mask in 1u32..(1 << d) {
        let members: Vec<&RationalPolyhedron> = (0..d).filter(|i| mask >> i & 1 == 1).map(|i| &duals[i]).collect();
        let v = volume(&minkowski_sum(&members)?)?;
        if (d - members.len()).is_multiple_of(2) {
            total += v;
        } else {
            total -= v;
        }
    }
    Ok(total / factorial(d))
}

/// `d!·MV`, the intersection-number normalization.
pub fn normalized_mixed_volume(ps: &[RationalPolyhedron]) -> Result<Rational> {
    let d = ps.first().map_or(0, RationalPolyhedron::dim);
    Ok(mixed_volume(ps)? * factorial(d))
}
