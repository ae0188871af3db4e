//! Sparse multivariate polynomials over Q and exact interpolation on the
//! principal lattice.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::univariate::{IntPolynomial, QPoly};
use crate::linalg::solve;
use crate::{Integer, Rational};

pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    /// `c0 + Σ c_i x_i`.
    pub fn affine(c0: &Rational, coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, c0.clone());
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.iter().sum::<u32>() as usize).max()
    }

    /// The constant value if the polynomial has no nonconstant terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    /// Positive rational multiple with coprime integer coefficients.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = Integer::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut g = Integer::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c * Rational::from_integer(l.clone())).to_integer());
        }
        self.scale(&Rational::new(l, g.abs()))
    }

    /// Reinterprets a polynomial in `self.nvars` variables as one in
    /// `nvars` variables, mapping local variable `i` to `indices[i]`.
    pub fn reindex(&self, nvars: usize, indices: &[usize]) -> Self {
        assert_eq!(indices.len(), self.nvars);
        let mut p = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[indices[i]] += k;
            }
            p.add_term(ne, c.clone());
        }
        p
    }

    /// Substitutes `x_i = subs[i]`, each a polynomial in a common ring.
    pub fn compose(&self, subs: &[MultiPoly]) -> MultiPoly {
        assert_eq!(subs.len(), self.nvars);
        let n = subs.first().map_or(0, |s| s.nvars);
        let mut acc = MultiPoly::zero(n);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(n, c.clone());
            for (s, &k) in subs.iter().zip(e) {
                for _ in 0..k {
                    t = t.mul(s);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Univariate view; panics unless `nvars == 1`.
    pub fn to_qpoly(&self) -> QPoly {
        assert_eq!(self.nvars, 1);
        let deg = self.total_degree().unwrap_or(0);
        let mut c = vec![Rational::zero(); deg + 1];
        for (e, v) in &self.terms {
            c[e[0] as usize] = v.clone();
        }
        QPoly::new(c)
    }

    pub fn to_int_poly(&self) -> IntPolynomial {
        IntPolynomial::from_rational(&self.to_qpoly())
    }

    /// Exact interpolation through `points` in the monomial basis of total
    /// degree at most `degree`. Returns `None` if the nodes are not
    /// unisolvent.
    pub fn interpolate(points: &[Vec<Rational>], values: &[Rational], degree: usize) -> Option<Self> {
        let n = points.first().map_or(0, |p| p.len());
        let monos = principal_lattice(n, degree);
        if monos.len() != points.len() || values.len() != points.len() {
            return None;
        }
        let rows: Vec<Vec<Rational>> = points
            .iter()
            .map(|x| {
                monos
                    .iter()
                    .map(|e| {
                        x.iter()
                            .zip(e)
                            .map(|(xi, &k)| num_traits::pow(xi.clone(), k as usize))
                            .product()
                    })
                    .collect()
            })
            .collect();
        let coeffs = solve(&rows, values)?;
        Some(Self::from_terms(n, monos.into_iter().zip(coeffs)))
    }
}

/// All exponent vectors in `n` variables with total degree at most `degree`,
/// in graded order.
pub fn principal_lattice(n: usize, degree: usize) -> Vec<Exponent> {
    fn rec(n: usize, left: u32, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, degree as u32, &mut Vec::new(), &mut out);
    out.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(e.clone())));
    out
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qf};

    #[test]
    fn arithmetic_and_eval() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        assert_eq!(p.eval(&[q(3), q(2)]), q(5));
        assert_eq!(p.total_degree(), Some(2));
        assert_eq!(p.to_string(), "x1^2 - x2^2");
    }

    #[test]
    fn lattice_size() {
        assert_eq!(principal_lattice(2, 3).len(), 10);
        assert_eq!(principal_lattice(1, 4).len(), 5);
        assert_eq!(principal_lattice(0, 4).len(), 1);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let target = x.mul(&x).mul(&y).add(&MultiPoly::constant(2, qf(1, 3))).sub(&y.scale(&q(2)));
        let eps = qf(1, 7);
        let base = [qf(1, 5), qf(2, 9)];
        let alphas = principal_lattice(2, 3);
        let pts: Vec<Vec<Rational>> = alphas
            .iter()
            .map(|a| base.iter().zip(a).map(|(b, &k)| b + &eps * q(k as i64)).collect())
            .collect();
        let vals: Vec<Rational> = pts.iter().map(|p| target.eval(p)).collect();
        assert_eq!(MultiPoly::interpolate(&pts, &vals, 3).unwrap(), target);
    }

    #[test]
    fn primitive_and_univariate() {
        let p = MultiPoly::affine(&qf(1, 2), &[qf(-3, 2)]);
        assert_eq!(p.primitive().to_int_poly(), IntPolynomial::from_i64(&[-1, 3]));
        let r = MultiPoly::var(1, 0).reindex(3, &[2]);
        assert_eq!(r.eval(&[q(0), q(0), q(4)]), q(4));
    }
}
