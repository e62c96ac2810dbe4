//! Exact scalar arithmetic: arbitrary-precision rationals, dense polynomials
//! in the single variable `u`, rational functions of `u` kept in a canonical
//! form, and Taylor expansion at `u = ∞` in the variable `t = 1/u`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational number. Zero is `0/1`, the denominator is
/// always positive, and numerator/denominator are coprime — `num_rational`
/// maintains exactly the invariants we need.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense univariate polynomial in `u` over [`Rational`]. `coeffs[i]` is the
/// coefficient of `u^i`; there are never trailing zeros, and the zero
/// polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    /// Coefficients low degree to high, given as integers.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `a*u + b`.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_ints(&[b, a])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient; panics on the zero polynomial.
    pub fn lc(&self) -> &Rational {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn eval(&self, u0: &Rational) -> Rational {
        // Horner, highest coefficient first.
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * u0 + c;
        }
        acc
    }

    /// Exact division with remainder over the rationals.
    /// Panics if `den` is zero.
    pub fn divrem(&self, den: &UPoly) -> (UPoly, UPoly) {
        assert!(!den.is_zero(), "polynomial division by zero");
        let dlc = den.lc().clone();
        let dd = den.degree().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd; // quotient degree being produced
            let q = &rem[rem.len() - 1] / &dlc;
            if !q.is_zero() {
                for (i, dc) in den.coeffs.iter().enumerate() {
                    let idx = k + i;
                    let sub = &q * dc;
                    rem[idx] = &rem[idx] - sub;
                }
                quo[k] = q;
            }
            rem.pop(); // leading entry is now exactly zero
        }
        (UPoly::from_coeffs(quo), UPoly::from_coeffs(rem))
    }

    /// Monic polynomial gcd by the Euclidean algorithm over the rationals.
    /// `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let lc = a.lc().clone();
            a.scale(&lc.recip())
        }
    }

    /// The unique positive rational `c` such that `c * self` has coprime
    /// integer coefficients and a positive leading coefficient.
    /// Panics on the zero polynomial.
    fn int_normalizer(&self) -> Rational {
        assert!(!self.is_zero());
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = num_integer::lcm(den_lcm, c.denom().clone());
        }
        let mut num_gcd = BigInt::zero();
        for c in &self.coeffs {
            num_gcd = num_integer::gcd(num_gcd, (c.numer() * &den_lcm / c.denom()).abs());
        }
        let mut norm = Rational::new(den_lcm, num_gcd);
        if self.lc().is_negative() {
            norm = -norm;
        }
        norm
    }

    /// Rendering with integer coefficients, highest degree first, in the
    /// form `c_k*u^k+...+c_0` (e.g. `-2*u+2`, `4*u^2-10*u+6`, `0`).
    pub fn text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            debug_assert!(c.is_integer(), "text rendering expects integer coefficients");
            let mag = c.numer().abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push('-');
            } else {
                out.push('+');
            }
            if !mag.is_one() || i == 0 {
                out.push_str(&mag.to_string());
                if i > 0 {
                    out.push('*');
                }
            }
            if i >= 1 {
                out.push('u');
            }
            if i >= 2 {
                out.push('^');
                out.push_str(&i.to_string());
            }
        }
        out
    }

    /// Number of nonzero monomials.
    pub fn monomial_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        UPoly::from_coeffs(out)
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        UPoly::from_coeffs(out)
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        UPoly::from_coeffs(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Rational function of `u` in canonical form: `num/den` with
/// `gcd(num, den) = 1` over the rationals, and `den` scaled to have coprime
/// integer coefficients with positive leading coefficient (the extracted
/// rational factor is absorbed into `num`, whose coefficients may therefore
/// be non-integer). Equal values always have identical representations, so
/// derived equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: UPoly,
    den: UPoly,
}

impl RatFunc {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: UPoly::one() };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let norm = den.int_normalizer();
        num = num.scale(&norm);
        den = den.scale(&norm);
        RatFunc { num, den }
    }

    pub fn zero() -> Self {
        RatFunc { num: UPoly::zero(), den: UPoly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: UPoly::one(), den: UPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn from_rational(c: Rational) -> Self {
        RatFunc { num: UPoly::constant(c), den: UPoly::one() }
    }

    pub fn from_poly(p: UPoly) -> Self {
        RatFunc { num: p, den: UPoly::one() }
    }

    /// `1 / p` for a nonzero polynomial `p`.
    pub fn inv_poly(p: UPoly) -> Self {
        Self::new(UPoly::one(), p)
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == UPoly::one() && self.den == UPoly::one()
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::Pole("division by the zero rational function".into()));
        }
        Ok(RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Exact evaluation at `u = u0`; a denominator root is a [`Error::Pole`].
    pub fn eval(&self, u0: &Rational) -> Result<Rational> {
        let d = self.den.eval(u0);
        if d.is_zero() {
            return Err(Error::Pole(format!("{self} at u = {u0}")));
        }
        Ok(self.num.eval(u0) / d)
    }

    /// Taylor coefficients in `t = 1/u` up to `t^order`. Requires
    /// `deg num <= deg den`; anything else is an [`Error::Improper`].
    pub fn expand_at_infinity(&self, order: usize) -> Result<TruncSeries> {
        if self.is_zero() {
            return Ok(TruncSeries::zero(order));
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        if dn > dd {
            return Err(Error::Improper(format!(
                "numerator degree {dn} exceeds denominator degree {dd} in {self}"
            )));
        }
        // In t = 1/u: num/den = N(t)/D(t) with N_j = num[dd - j], D_j = den[dd - j]
        // (index j is the power of t; entries beyond the stored range are zero).
        // D(0) = leading coefficient of den, nonzero, so ordinary power-series
        // division applies.
        let npow = |j: usize| {
            if j > dd { Rational::zero() } else { self.num.coeff(dd - j) }
        };
        let dpow = |j: usize| {
            if j > dd { Rational::zero() } else { self.den.coeff(dd - j) }
        };
        let d0 = dpow(0);
        let mut cs: Vec<Rational> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = npow(k);
            for j in 1..=k {
                acc -= dpow(j) * &cs[k - j];
            }
            cs.push(acc / &d0);
        }
        Ok(TruncSeries { coeffs: cs })
    }

    /// The pair `(d*num, d*den)` where `d` is the least common multiple of
    /// the numerator's coefficient denominators: both parts have integer
    /// coefficients and no common integer content. This is what all textual
    /// and JSON output renders.
    pub fn int_pair(&self) -> (UPoly, UPoly) {
        if self.is_zero() {
            return (UPoly::zero(), UPoly::one());
        }
        let mut d = BigInt::one();
        for c in self.num.coeffs() {
            d = num_integer::lcm(d, c.denom().clone());
        }
        let d = Rational::from_integer(d);
        (self.num.scale(&d), self.den.scale(&d))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        // Cross-cancel before multiplying so intermediate degrees stay small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = if g1.degree() == Some(0) { self.num.clone() } else { self.num.divrem(&g1).0 };
        let d2 = if g1.degree() == Some(0) { rhs.den.clone() } else { rhs.den.divrem(&g1).0 };
        let n2 = if g2.degree() == Some(0) { rhs.num.clone() } else { rhs.num.divrem(&g2).0 };
        let d1 = if g2.degree() == Some(0) { self.den.clone() } else { self.den.divrem(&g2).0 };
        RatFunc::new(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    /// `(c_k*u^k+...+c_0)/(d_m*u^m+...+d_0)` with integer coefficients; the
    /// denominator is omitted when it is 1, the numerator is parenthesized
    /// only when it has several monomials, the denominator only when it is
    /// non-constant.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.int_pair();
        let nt = num.text();
        if den == UPoly::one() {
            return write!(f, "{nt}");
        }
        if num.monomial_count() > 1 {
            write!(f, "({nt})")?;
        } else {
            write!(f, "{nt}")?;
        }
        let dt = den.text();
        if den.degree() == Some(0) {
            write!(f, "/{dt}")
        } else {
            write!(f, "/({dt})")
        }
    }
}

/// Truncated Taylor series in `t = 1/u`: `coeffs[r]` is the coefficient of
/// `t^r`, and the truncation order is `coeffs.len() - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, r: usize) -> &Rational {
        &self.coeffs[r]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Termwise sum; both series must have the same truncation order.
    pub fn add(&self, rhs: &TruncSeries) -> TruncSeries {
        assert_eq!(self.order(), rhs.order(), "mismatched truncation orders");
        TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_u_minus(b: i64) -> UPoly {
        UPoly::linear(2, -b)
    }

    #[test]
    fn add_combines_over_common_denominator() {
        // (-1) + 1/(2u-1) = -(2u-2)/(2u-1)
        let a = RatFunc::from_int(-1);
        let b = RatFunc::inv_poly(two_u_minus(1));
        let sum = &a + &b;
        assert_eq!(sum, RatFunc::new(UPoly::from_ints(&[2, -2]), two_u_minus(1)));
        assert_eq!(sum.to_string(), "(-2*u+2)/(2*u-1)");
    }

    #[test]
    fn self_quotient_cancels() {
        let p = RatFunc::from_poly(two_u_minus(1));
        let q = p.div(&p).unwrap();
        assert!(q.is_one());
        assert_eq!(q.to_string(), "1");
    }

    #[test]
    fn product_of_inverses() {
        // 1/(2u-2) * 1/(2u-3) = 1/((2u-2)(2u-3)) = 1/(4u^2-10u+6)
        let a = RatFunc::inv_poly(two_u_minus(2));
        let b = RatFunc::inv_poly(two_u_minus(3));
        let prod = &a * &b;
        assert_eq!(prod, RatFunc::new(UPoly::one(), &two_u_minus(2) * &two_u_minus(3)));
        assert_eq!(prod.to_string(), "1/(4*u^2-10*u+6)");
    }

    #[test]
    fn canonical_form_is_unique() {
        let a = RatFunc::new(UPoly::from_ints(&[-4, 2]), UPoly::from_ints(&[-2, 2]));
        // (2u-4)/(2u-2) reduces to (u-2)/(u-1) with integer coprime denominator.
        assert_eq!(a.to_string(), "(u-2)/(u-1)");
        let diff = &a - &a;
        assert!(diff.is_zero());
        assert_eq!(diff, RatFunc::zero());
        assert_eq!(diff.to_string(), "0");
    }

    #[test]
    fn display_scales_fractional_numerators() {
        // -(2u-3)/(2(u-1)) stores den = u-1, num = -u+3/2; prints with the
        // common factor restored.
        let a = RatFunc::new(UPoly::from_ints(&[3, -2]), UPoly::from_ints(&[-2, 2]));
        assert_eq!(a.to_string(), "(-2*u+3)/(2*u-2)");
        let half = RatFunc::from_rational(ratio(1, 2));
        assert_eq!(half.to_string(), "1/2");
        let neg = RatFunc::new(UPoly::from_ints(&[-1]), UPoly::from_ints(&[-2, 2]));
        assert_eq!(neg.to_string(), "-1/(2*u-2)");
    }

    #[test]
    fn eval_and_poles() {
        let a = RatFunc::inv_poly(two_u_minus(1));
        assert_eq!(a.eval(&rat(1)).unwrap(), rat(1));
        let b = RatFunc::new(UPoly::from_ints(&[-2, 2]), two_u_minus(1));
        assert!(matches!(b.eval(&ratio(1, 2)), Err(Error::Pole(_))));
        let c = RatFunc::new(UPoly::from_ints(&[0, 1]), UPoly::from_ints(&[1, 1]));
        assert_eq!(c.eval(&rat(0)).unwrap(), rat(0));
    }

    #[test]
    fn eval_is_multiplicative() {
        let a = RatFunc::new(UPoly::from_ints(&[1, 3]), two_u_minus(3));
        let b = RatFunc::new(UPoly::from_ints(&[-2, 0, 1]), UPoly::from_ints(&[5, 1]));
        let u0 = rat(7);
        assert_eq!(
            (&a * &b).eval(&u0).unwrap(),
            a.eval(&u0).unwrap() * b.eval(&u0).unwrap()
        );
    }

    #[test]
    fn expansion_at_infinity() {
        // 1/(2u-1) = t/2 + t^2/4 + t^3/8 + ...
        let a = RatFunc::inv_poly(two_u_minus(1));
        let s = a.expand_at_infinity(3).unwrap();
        assert_eq!(
            s.coeffs(),
            &[rat(0), ratio(1, 2), ratio(1, 4), ratio(1, 8)]
        );

        let one = RatFunc::one().expand_at_infinity(2).unwrap();
        assert_eq!(one.coeffs(), &[rat(1), rat(0), rat(0)]);

        let u2 = RatFunc::from_poly(UPoly::from_ints(&[0, 0, 1]));
        assert!(matches!(u2.expand_at_infinity(1), Err(Error::Improper(_))));
    }

    #[test]
    fn expansion_is_additive() {
        let a = RatFunc::new(UPoly::from_ints(&[1, 1]), UPoly::from_ints(&[3, 0, 2]));
        let b = RatFunc::inv_poly(two_u_minus(5));
        let lhs = (&a + &b).expand_at_infinity(6).unwrap();
        let rhs = a
            .expand_at_infinity(6)
            .unwrap()
            .add(&b.expand_at_infinity(6).unwrap());
        assert_eq!(lhs, rhs);
    }
}
