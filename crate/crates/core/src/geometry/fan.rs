//! Complete rational fans, normal fans of polytopes and common refinements.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::polyhedron::{cone_extreme_rays, RationalPolyhedron, MAX_DIM};
use crate::linalg::{self, RationalVector};
use crate::{Integer, Rational};

/// Codimension-one face shared by two maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub cones: (usize, usize),
    /// Ray indices spanning the wall.
    pub rays: Vec<usize>,
    /// Normal pointing into `cones.0`.
    pub normal: RationalVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<Integer>>,
    max_cones: Vec<Vec<usize>>,
    /// True for the trivial fan whose single cone is all of `R^dim`.
    whole_space: bool,
    walls: Vec<Wall>,
    facets: Vec<Vec<(RationalVector, Vec<usize>)>>,
}

impl Fan {
    /// Builds and validates a complete fan: primitive rays, full-dimensional
    /// strongly convex cones whose listed rays are extreme, every facet
    /// shared with exactly one opposite cone and a covering degree of one.
    pub fn new(dim: usize, rays: Vec<Vec<Integer>>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionOverflow(dim));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            if !linalg::is_primitive(r) {
                return Err(Error::NonPrimitiveRay(i));
            }
        }
        let mut used = vec![false; rays.len()];
        let mut facets = Vec::with_capacity(max_cones.len());
        for (ci, cone) in max_cones.iter().enumerate() {
            let mut sorted = cone.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != cone.len() || sorted.iter().any(|&i| i >= rays.len()) {
                return Err(Error::InvalidFan(format!("cone {ci} has invalid ray indices")));
            }
            for &i in cone {
                used[i] = true;
            }
            let gens: Vec<RationalVector> = cone.iter().map(|&i| linalg::int_to_q(&rays[i])).collect();
            if linalg::rank(&gens) < dim {
                return Err(Error::InvalidFan(format!("cone {ci} is not full-dimensional")));
            }
            let normals = cone_extreme_rays(&gens, dim)?;
            if linalg::rank(&normals) < dim {
                return Err(Error::InvalidFan(format!("cone {ci} is not strongly convex")));
            }
            let mut fs = Vec::new();
            for w in normals {
                let tight: Vec<usize> = cone
                    .iter()
                    .copied()
                    .filter(|&i| linalg::dot(&w, &linalg::int_to_q(&rays[i])).is_zero())
                    .collect();
                fs.push((w, tight));
            }
            for &i in cone {
                let through: Vec<RationalVector> = fs
                    .iter()
                    .filter(|(_, t)| t.contains(&i))
                    .map(|(w, _)| w.clone())
                    .collect();
                if linalg::rank(&through) + 1 < dim {
                    return Err(Error::InvalidFan(format!(
                        "ray {i} is not an extreme ray of cone {ci}"
                    )));
                }
            }
            facets.push(fs);
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::InvalidFan(format!("ray {i} lies in no maximal cone")));
        }
        let mut fan = Self {
            dim,
            rays,
            max_cones,
            whole_space: false,
            walls: Vec::new(),
            facets,
        };
        fan.walls = fan.match_walls()?;
        fan.check_covering_degree()?;
        Ok(fan)
    }

    /// The fan with the single cone `R^dim`.
    pub fn trivial(dim: usize) -> Self {
        Self {
            dim,
            rays: Vec::new(),
            max_cones: vec![Vec::new()],
            whole_space: true,
            walls: Vec::new(),
            facets: vec![Vec::new()],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<Integer>] {
        &self.rays
    }

    pub fn ray_q(&self, i: usize) -> RationalVector {
        linalg::int_to_q(&self.rays[i])
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn is_whole_space(&self) -> bool {
        self.whole_space
    }

    /// Inward facet normals of maximal cone `c`, each with the rays on it.
    pub fn cone_facets(&self, c: usize) -> &[(RationalVector, Vec<usize>)] {
        &self.facets[c]
    }

    pub fn is_simplicial(&self) -> bool {
        self.max_cones.iter().all(|c| c.len() == self.dim)
    }

    pub fn cone_contains(&self, c: usize, u: &[Rational]) -> bool {
        self.facets[c]
            .iter()
            .all(|(w, _)| !linalg::dot(w, u).is_negative())
    }

    /// First maximal cone containing `u`.
    pub fn containing_cone(&self, u: &[Rational]) -> Option<usize> {
        (0..self.max_cones.len()).find(|&c| self.cone_contains(c, u))
    }

    fn match_walls(&self) -> Result<Vec<Wall>> {
        let mut walls = Vec::new();
        for (ci, fs) in self.facets.iter().enumerate() {
            for (w, tight) in fs {
                let mut partners = Vec::new();
                for (cj, gs) in self.facets.iter().enumerate() {
                    if cj == ci {
                        continue;
                    }
                    for (w2, tight2) in gs {
                        let opposite = linalg::add(w, w2).iter().all(Zero::is_zero)
                            || (linalg::rank(&[w.clone(), w2.clone()]) == 1
                                && linalg::dot(w, w2).is_negative());
                        if opposite && tight2 == tight {
                            partners.push(cj);
                        }
                    }
                }
                match partners.len() {
                    0 => {
                        return Err(Error::IncompleteFan(format!(
                            "facet of cone {ci} spanned by rays {tight:?} borders no other cone"
                        )))
                    }
                    1 => {
                        if ci < partners[0] {
                            walls.push(Wall {
                                cones: (ci, partners[0]),
                                rays: tight.clone(),
                                normal: w.clone(),
                            });
                        }
                    }
                    _ => {
                        return Err(Error::InvalidFan(format!(
                            "facet of cone {ci} spanned by rays {tight:?} is shared by several cones"
                        )))
                    }
                }
            }
        }
        Ok(walls)
    }

    /// Counts the cones containing a generic point in their interior.
    fn check_covering_degree(&self) -> Result<()> {
        let normals: Vec<&RationalVector> = self.facets.iter().flatten().map(|(w, _)| w).collect();
        let mut t = Rational::new(7.into(), 3.into());
        let point = loop {
            let mut u = Vec::with_capacity(self.dim);
            let mut x = Rational::one();
            for _ in 0..self.dim {
                u.push(x.clone());
                x *= &t;
            }
            if normals.iter().all(|w| !linalg::dot(w, &u).is_zero()) {
                break u;
            }
            t += Rational::new(1.into(), 5.into());
        };
        let mut inside = 0;
        for c in 0..self.max_cones.len() {
            if self.cone_contains(c, &point) {
                inside += 1;
            }
        }
        let neg: RationalVector = point.iter().map(|x| -x).collect();
        let inside_neg = (0..self.max_cones.len())
            .filter(|&c| self.cone_contains(c, &neg))
            .count();
        match (inside, inside_neg) {
            (1, 1) => Ok(()),
            (0, _) | (_, 0) => Err(Error::IncompleteFan(
                "a generic direction is covered by no maximal cone".into(),
            )),
            _ => Err(Error::InvalidFan("maximal cones overlap".into())),
        }
    }

    /// Set-level equality (rays and cones compared as sets of vectors).
    pub fn same_as(&self, other: &Fan) -> bool {
        let cones = |f: &Fan| -> BTreeSet<BTreeSet<Vec<Integer>>> {
            f.max_cones
                .iter()
                .map(|c| c.iter().map(|&i| f.rays[i].clone()).collect())
                .collect()
        };
        self.dim == other.dim && self.whole_space == other.whole_space && cones(self) == cones(other)
    }
}

/// Normal fan (inner normals, vertex normal cones) of a full-dimensional
/// polytope. Lower-dimensional input yields `LowerDimensional` carrying a
/// basis of the lineality space.
pub fn normal_fan(p: &RationalPolyhedron) -> Result<Fan> {
    let p = p.ensure_dual()?;
    if !p.rays().is_empty() {
        return Err(Error::Unbounded);
    }
    let d = p.dim();
    if !p.is_full_dimensional() {
        let v0 = &p.vertices()[0];
        let dirs: Vec<RationalVector> = p.vertices()[1..].iter().map(|v| linalg::sub(v, v0)).collect();
        let lineality = linalg::null_space(&dirs, d)
            .iter()
            .map(|l| linalg::primitive_integer(l))
            .collect();
        return Err(Error::LowerDimensional { lineality });
    }
    let mut rays: Vec<Vec<Integer>> = p.h_rep().iter().map(|h| linalg::primitive_integer(&h.a)).collect();
    rays.sort();
    rays.dedup();
    let index = |a: &RationalVector| -> usize {
        let r = linalg::primitive_integer(a);
        rays.binary_search(&r).expect("facet normal present")
    };
    let mut cones: Vec<Vec<usize>> = p
        .vertices()
        .iter()
        .map(|v| {
            let mut c: Vec<usize> = p
                .h_rep()
                .iter()
                .filter(|h| h.eval(v).is_zero())
                .map(|h| index(&h.a))
                .collect();
            c.sort_unstable();
            c
        })
        .collect();
    cones.sort();
    Fan::new(d, rays, cones)
}

/// Coarsest common refinement: all full-dimensional pairwise intersections
/// of maximal cones.
pub fn fan_refinement(f1: &Fan, f2: &Fan) -> Result<Fan> {
    if f1.dim != f2.dim {
        return Err(Error::DimensionMismatch {
            expected: f1.dim,
            got: f2.dim,
        });
    }
    let d = f1.dim;
    if f1.whole_space && f2.whole_space {
        return Ok(Fan::trivial(d));
    }
    let mut ray_cones: Vec<Vec<Vec<Integer>>> = Vec::new();
    for i in 0..f1.max_cones.len() {
        for j in 0..f2.max_cones.len() {
            let rows: Vec<RationalVector> = f1.facets[i]
                .iter()
                .chain(f2.facets[j].iter())
                .map(|(w, _)| w.clone())
                .collect();
            let gens = cone_extreme_rays(&rows, d)?;
            if linalg::rank(&gens) < d {
                continue;
            }
            let mut c: Vec<Vec<Integer>> = gens.iter().map(|g| linalg::primitive_integer(g)).collect();
            c.sort();
            ray_cones.push(c);
        }
    }
    let mut rays: Vec<Vec<Integer>> = ray_cones.iter().flatten().cloned().collect();
    rays.sort();
    rays.dedup();
    let mut cones: Vec<Vec<usize>> = ray_cones
        .iter()
        .map(|c| c.iter().map(|r| rays.binary_search(r).unwrap()).collect())
        .collect();
    cones.sort();
    cones.dedup();
    Fan::new(d, rays, cones)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polyhedron::Inequality;
    use crate::linalg::{q, qvec};

    pub(crate) fn ivec(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    fn p2() -> Fan {
        Fan::new(
            2,
            vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, -1])],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap()
    }

    fn p1p1() -> Fan {
        Fan::new(
            2,
            vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, 0]), ivec(&[0, -1])],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .unwrap()
    }

    #[test]
    fn p2_walls() {
        let f = p2();
        assert_eq!(f.walls().len(), 3);
        assert!(f.is_simplicial());
    }

    #[test]
    fn rejects_bad_fans() {
        let r = Fan::new(2, vec![ivec(&[2, 0]), ivec(&[0, 1])], vec![vec![0, 1]]);
        assert_eq!(r, Err(Error::NonPrimitiveRay(0)));
        let incomplete = Fan::new(
            2,
            vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, 0])],
            vec![vec![0, 1], vec![1, 2]],
        );
        assert!(matches!(incomplete, Err(Error::IncompleteFan(_))));
        let overlapping = Fan::new(
            2,
            vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, -1]), ivec(&[1, 1])],
            vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![0, 3]],
        );
        assert!(overlapping.is_err());
    }

    #[test]
    fn normal_fan_of_triangle_and_square() {
        let t = RationalPolyhedron::from_points(2, &[qvec(&[-1, -1]), qvec(&[2, -1]), qvec(&[-1, 2])]).unwrap();
        let f = normal_fan(&t).unwrap();
        assert_eq!(f.rays(), &[ivec(&[-1, -1]), ivec(&[0, 1]), ivec(&[1, 0])]);
        assert!(f.same_as(&p2()));
        let sq = RationalPolyhedron::from_points(
            2,
            &[qvec(&[-1, -1]), qvec(&[1, -1]), qvec(&[1, 1]), qvec(&[-1, 1])],
        )
        .unwrap();
        assert!(normal_fan(&sq).unwrap().same_as(&p1p1()));
    }

    #[test]
    fn normal_fan_of_segment_is_flagged() {
        let seg = RationalPolyhedron::from_inequalities(
            2,
            vec![
                Inequality::new(q(0), qvec(&[1, 0])),
                Inequality::new(q(1), qvec(&[-1, 0])),
                Inequality::new(q(0), qvec(&[0, 1])),
                Inequality::new(q(0), qvec(&[0, -1])),
            ],
        );
        match normal_fan(&seg) {
            Err(Error::LowerDimensional { lineality }) => assert_eq!(lineality, vec![ivec(&[0, 1])]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn refinements() {
        let f = p2();
        assert!(fan_refinement(&f, &f).unwrap().same_as(&f));
        assert!(fan_refinement(&f, &Fan::trivial(2)).unwrap().same_as(&f));
        let r = fan_refinement(&f, &p1p1()).unwrap();
        assert_eq!(
            r.rays(),
            &[ivec(&[-1, -1]), ivec(&[-1, 0]), ivec(&[0, -1]), ivec(&[0, 1]), ivec(&[1, 0])]
        );
        assert_eq!(r.max_cones().len(), 5);
    }

    #[test]
    fn containing_cone_lookup() {
        let f = p2();
        let c = f.containing_cone(&qvec(&[-1, 0])).unwrap();
        assert_eq!(f.max_cones()[c], vec![1, 2]);
    }
}
