//! Exact linear algebra over the rationals.
//!
//! Matrices are plain row vectors; all routines are small dense Gaussian
//! eliminations, which is all the dimensions here (at most 7 columns) need.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::{Integer, Rational};

pub type RationalVector = Vec<Rational>;
pub type RationalMatrix = Vec<RationalVector>;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qvec(xs: &[i64]) -> RationalVector {
    xs.iter().map(|&x| q(x)).collect()
}

pub fn int_to_q(v: &[Integer]) -> RationalVector {
    v.iter().cloned().map(Rational::from_integer).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> RationalVector {
    a.iter().map(|x| x * s).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut RationalMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[RationalVector]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Indices of a maximal linearly independent subset of `rows`, chosen greedily
/// in order.
pub fn independent_rows(rows: &[RationalVector]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: RationalMatrix = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        basis.push(r.clone());
        if rank(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

/// Basis of `{y : rows · y = 0}` in `ncols` unknowns.
pub fn null_space(rows: &[RationalVector], ncols: usize) -> RationalMatrix {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solves the square system `a · x = b`; `None` when `a` is singular.
pub fn solve(a: &[RationalVector], b: &[Rational]) -> Option<RationalVector> {
    let n = a.len();
    let mut m: RationalMatrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

pub fn inverse(a: &[RationalVector]) -> Option<RationalMatrix> {
    let n = a.len();
    let mut m: RationalMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det(a: &[RationalVector]) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for j in c..n {
                    let t = &m[c][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
    }
    d
}

pub fn mat_vec(m: &[RationalVector], v: &[Rational]) -> RationalVector {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Positive rescaling of a nonzero rational vector to a primitive integer one.
pub fn primitive_integer(v: &[Rational]) -> Vec<Integer> {
    let lcm = v
        .iter()
        .fold(Integer::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Integer> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(Integer::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn is_primitive(v: &[Integer]) -> bool {
    v.iter().fold(Integer::zero(), |acc, x| acc.gcd(x)).is_one()
}

pub fn int_gcd_all(v: &[Integer]) -> Integer {
    v.iter().fold(Integer::zero(), |acc, x| acc.gcd(x)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_and_inverts() {
        let a = vec![qvec(&[2, 1]), qvec(&[1, 3])];
        let x = solve(&a, &qvec(&[3, 5])).unwrap();
        assert_eq!(x, vec![qf(4, 5), qf(7, 5)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_vec(&inv, &qvec(&[3, 5])), x);
        assert_eq!(det(&a), q(5));
    }

    #[test]
    fn singular_systems() {
        let a = vec![qvec(&[1, 2]), qvec(&[2, 4])];
        assert!(solve(&a, &qvec(&[1, 2])).is_none());
        assert!(inverse(&a).is_none());
        assert_eq!(det(&a), q(0));
        assert_eq!(rank(&a), 1);
    }

    #[test]
    fn null_space_is_orthogonal() {
        let rows = vec![qvec(&[1, 1, 1])];
        let ns = null_space(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(dot(&rows[0], &v).is_zero());
        }
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![qf(2, 3), qf(-4, 3), q(0)];
        let p = primitive_integer(&v);
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(-2), BigInt::from(0)]);
        assert!(is_primitive(&p));
    }
}
