//! Real algebraic numbers: a square-free integer polynomial together with an
//! isolating interval `(lo, hi]` holding exactly one of its roots. An exact
//! rational root is stored with `lo == hi`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::univariate::{IntPolynomial, QPoly, SturmSequence};
use crate::{Integer, Rational};

/// Width every isolated root is refined to before it is returned.
pub fn default_width() -> Rational {
    Rational::new(Integer::one(), Integer::one() << 40)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: &Rational) -> Self {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn mul(self, o: Sign) -> Sign {
        match (self, o) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Negative => "-",
            Sign::Zero => "0",
            Sign::Positive => "+",
        }
    }
}

/// Cached state of an algebraic number; refinement only ever narrows it.
#[derive(Clone, Debug)]
struct Isolation {
    lo: Rational,
    hi: Rational,
}

pub struct AlgebraicNumber {
    poly: IntPolynomial,
    qpoly: QPoly,
    sturm: SturmSequence,
    interval: Mutex<Isolation>,
}

impl Clone for AlgebraicNumber {
    fn clone(&self) -> Self {
        let iso = self.interval.lock().unwrap().clone();
        Self {
            poly: self.poly.clone(),
            qpoly: self.qpoly.clone(),
            sturm: self.sturm.clone(),
            interval: Mutex::new(iso),
        }
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.interval();
        write!(f, "AlgebraicNumber({} in ({lo}, {hi}])", self.poly)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => {
                let (lo, hi) = self.interval();
                write!(f, "root of {} in ({lo}, {hi}]", self.poly)
            }
        }
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_algebraic(other) == Ordering::Equal
    }
}

impl AlgebraicNumber {
    fn from_parts(poly: IntPolynomial, lo: Rational, hi: Rational) -> Self {
        let qpoly = poly.to_rational();
        let sturm = SturmSequence::new(&qpoly);
        Self {
            poly,
            qpoly,
            sturm,
            interval: Mutex::new(Isolation { lo, hi }),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        let poly = IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]);
        Self::from_parts(poly, r.clone(), r.clone())
    }

    /// Builds the root of `poly` in `(lo, hi]`, checking that the interval
    /// isolates exactly one root of its square-free part.
    pub fn new(poly: &IntPolynomial, lo: Rational, hi: Rational) -> Result<Self> {
        let sf = poly.square_free();
        let a = Self::from_parts(sf, lo.clone(), hi.clone());
        if lo > hi || (lo == hi && !a.qpoly.eval(&lo).is_zero()) {
            return Err(Error::InvalidInput("interval does not isolate a root".into()));
        }
        if lo < hi && a.sturm.count(&lo, &hi) != 1 {
            return Err(Error::InvalidInput("interval does not isolate exactly one root".into()));
        }
        Ok(a)
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn interval(&self) -> (Rational, Rational) {
        let iso = self.interval.lock().unwrap();
        (iso.lo.clone(), iso.hi.clone())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        let (lo, hi) = self.interval();
        (lo == hi).then_some(lo)
    }

    /// Halves the isolating interval once; collapses onto an exact root when
    /// a midpoint hits it.
    fn bisect(&self) {
        let mut iso = self.interval.lock().unwrap();
        if iso.lo == iso.hi {
            return;
        }
        let mid = (&iso.lo + &iso.hi) / Rational::from_integer(2.into());
        if self.sturm.count(&iso.lo, &mid) == 1 {
            if self.qpoly.eval(&mid).is_zero() {
                iso.lo = mid.clone();
            }
            iso.hi = mid;
        } else {
            iso.lo = mid;
        }
    }

    /// Refines until the interval width is at most `width`.
    pub fn refine_to(&self, width: &Rational) {
        loop {
            let (lo, hi) = self.interval();
            if &hi - &lo <= *width {
                return;
            }
            self.bisect();
        }
    }

    /// Replaces the defining polynomial by a linear one when the root is
    /// rational. Rational roots of a primitive integer polynomial have a
    /// denominator dividing the leading coefficient, so once the interval is
    /// narrower than `1/lc²` the simplest rational inside is the only
    /// candidate.
    fn detect_rational(self) -> Self {
        if self.as_rational().is_some() {
            let r = self.as_rational().unwrap();
            return Self::from_rational(&r);
        }
        let lc = self.poly.leading().cloned().unwrap_or_else(Integer::one).abs();
        let bound = Rational::new(Integer::one(), &lc * &lc + Integer::one());
        self.refine_to(&bound);
        if let Some(r) = self.as_rational() {
            return Self::from_rational(&r);
        }
        let (lo, hi) = self.interval();
        let candidate = if self.qpoly.eval(&hi).is_zero() {
            Some(hi)
        } else {
            let s = simplest_between(&lo, &hi);
            (s.denom() <= &lc && self.qpoly.eval(&s).is_zero()).then_some(s)
        };
        match candidate {
            Some(r) => Self::from_rational(&r),
            None => self,
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        loop {
            let (lo, hi) = self.interval();
            if lo == hi {
                return lo.cmp(q);
            }
            if q <= &lo {
                return Ordering::Greater;
            }
            if q > &hi {
                return Ordering::Less;
            }
            if self.qpoly.eval(q).is_zero() {
                return Ordering::Equal;
            }
            if q == &hi {
                return Ordering::Less;
            }
            self.bisect();
        }
    }

    /// Exact comparison; equality is decided through the gcd of the two
    /// defining polynomials.
    pub fn cmp_algebraic(&self, other: &Self) -> Ordering {
        if let Some(r) = other.as_rational() {
            return self.cmp_rational(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.cmp_rational(&r).reverse();
        }
        let g = self.qpoly.gcd(&other.qpoly);
        if g.degree().is_some_and(|d| d > 0) {
            let (a_lo, a_hi) = self.interval();
            let (b_lo, b_hi) = other.interval();
            let lo = a_lo.max(b_lo);
            let hi = a_hi.min(b_hi);
            if lo < hi && SturmSequence::new(&g).count(&lo, &hi) > 0 {
                return Ordering::Equal;
            }
        }
        loop {
            let (a_lo, a_hi) = self.interval();
            let (b_lo, b_hi) = other.interval();
            if a_hi <= b_lo {
                return Ordering::Less;
            }
            if b_hi <= a_lo {
                return Ordering::Greater;
            }
            if a_hi - a_lo >= b_hi - b_lo {
                self.bisect();
            } else {
                other.bisect();
            }
        }
    }

    fn has_common_root(&self, p: &QPoly) -> bool {
        let (lo, hi) = self.interval();
        if lo == hi {
            return p.eval(&lo).is_zero();
        }
        let g = self.qpoly.gcd(p);
        g.degree().is_some_and(|d| d > 0) && SturmSequence::new(&g).count(&lo, &hi) > 0
    }

    /// Sign of a polynomial nonvanishing at this number.
    fn sign_of_nonzero(&self, p: &QPoly) -> Sign {
        let sturm = SturmSequence::new(p);
        loop {
            let (lo, hi) = self.interval();
            if lo == hi {
                return Sign::of(&p.eval(&lo));
            }
            if sturm.count(&lo, &hi) == 0 {
                return Sign::of(&p.eval(&hi));
            }
            self.bisect();
        }
    }

    /// Float approximation for display only.
    pub fn approx(&self) -> f64 {
        let (lo, hi) = self.interval();
        let mid = (lo + hi) / Rational::from_integer(2.into());
        let n: f64 = mid.numer().to_string().parse().unwrap_or(f64::NAN);
        let d: f64 = mid.denom().to_string().parse().unwrap_or(f64::NAN);
        n / d
    }
}

/// A rational strictly between `a < b`, the simplest one separating their
/// isolating intervals.
pub fn rational_between(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Rational {
    loop {
        let (a_lo, a_hi) = a.interval();
        let (b_lo, b_hi) = b.interval();
        if a_hi < b_lo {
            return simplest_between(&a_hi, &b_lo);
        }
        if a_hi - a_lo >= b_hi - b_lo {
            a.bisect();
        } else {
            b.bisect();
        }
    }
}

/// Smallest-denominator rational in the open interval `(a, b)`, `a < b`.
pub fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    assert!(a < b);
    let fl = a.floor();
    let next = &fl + Rational::one();
    if next < *b {
        // Prefer the integer of least absolute value in the interval.
        if a.is_negative() && b.is_positive() {
            return Rational::zero();
        }
        if b.is_negative() || b.is_zero() {
            let c = b.ceil() - Rational::one();
            if c > *a {
                return c;
            }
        }
        return next;
    }
    let a1 = a - &fl;
    let b1 = b - &fl;
    let inner = if a1.is_zero() {
        b1.recip().floor() + Rational::one()
    } else {
        simplest_between(&b1.recip(), &a1.recip())
    };
    fl + inner.recip()
}

/// Smallest-denominator rational in the closed interval `[a, b]`.
pub fn simplest_in_closed(a: &Rational, b: &Rational) -> Rational {
    if a == b {
        return a.clone();
    }
    let inner = simplest_between(a, b);
    [a.clone(), b.clone(), inner]
        .into_iter()
        .min_by(|x, y| x.denom().cmp(y.denom()).then_with(|| x.abs().cmp(&y.abs())))
        .unwrap()
}

/// All distinct real roots of `p` in `[lo, hi]`, increasing, each refined to
/// width at most `2^-40`; rational roots come back exact with a linear
/// defining polynomial.
pub fn isolate_roots(p: &IntPolynomial, lo: &Rational, hi: &Rational) -> Vec<AlgebraicNumber> {
    if p.is_zero() || lo > hi {
        return Vec::new();
    }
    let sf = p.square_free();
    if sf.degree() == Some(0) {
        return Vec::new();
    }
    let q = sf.to_rational();
    let sturm = SturmSequence::new(&q);
    let mut intervals: Vec<(Rational, Rational)> = Vec::new();
    if q.eval(lo).is_zero() {
        intervals.push((lo.clone(), lo.clone()));
    }
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        match sturm.count(&a, &b) {
            0 => {}
            1 => {
                if q.eval(&b).is_zero() {
                    intervals.push((b.clone(), b));
                } else {
                    intervals.push((a, b));
                }
            }
            _ => {
                let mid = (&a + &b) / Rational::from_integer(2.into());
                stack.push((mid.clone(), b));
                stack.push((a, mid));
            }
        }
    }
    intervals.sort();
    let width = default_width();
    intervals
        .into_iter()
        .map(|(a, b)| {
            let n = AlgebraicNumber::from_parts(sf.clone(), a, b);
            n.refine_to(&width);
            n.detect_rational()
        })
        .collect()
}

/// Exact sign of `num/den` at `a`.
pub fn sign_at(num: &IntPolynomial, den: &IntPolynomial, a: &AlgebraicNumber) -> Result<Sign> {
    let nq = num.to_rational();
    let dq = den.to_rational();
    if dq.is_zero() || a.has_common_root(&dq) {
        return Err(Error::DenominatorVanishes);
    }
    if nq.is_zero() || a.has_common_root(&nq) {
        return Ok(Sign::Zero);
    }
    Ok(a.sign_of_nonzero(&nq).mul(a.sign_of_nonzero(&dq)))
}

/// Exact trichotomy against a rational.
pub fn compare(a: &AlgebraicNumber, q: &Rational) -> Ordering {
    a.cmp_rational(q)
}
