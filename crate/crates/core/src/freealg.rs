//! The free noncommutative algebra over [`RatFunc`] on generator symbols
//! `b[p,q](u-s)`, and its expansion into mode symbols `b[p,q]^(r)` along
//! `t = 1/u`. No relation between generators is ever imposed: two elements
//! are equal exactly when their canonical term maps coincide.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalars::{rat, Rational, RatFunc};
use crate::Result;

/// One generator symbol `b_p^q(u - shift)`: `p` is the row index, `q` the
/// column index of the generating matrix entry. The derived ordering is
/// lexicographic on `(p, q, shift)`, which fixes every emitted term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenSym {
    pub p: usize,
    pub q: usize,
    pub shift: usize,
}

/// A noncommutative monomial: an ordered sequence of generator symbols.
/// The empty word is the multiplicative unit.
pub type Word = Vec<GenSym>;

/// Finite linear combination of words with [`RatFunc`] coefficients.
/// Zero coefficients are never stored, and the map's ordering is the
/// canonical (lexicographic) term order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgElem {
    terms: BTreeMap<Word, RatFunc>,
}

impl AlgElem {
    pub fn zero() -> Self {
        AlgElem { terms: BTreeMap::new() }
    }

    /// The unit: the empty word with coefficient 1.
    pub fn one() -> Self {
        Self::scalar(RatFunc::one())
    }

    /// A scalar multiple of the empty word.
    pub fn scalar(c: RatFunc) -> Self {
        Self::from_word(Vec::new(), c)
    }

    pub fn from_word(word: Word, coeff: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        AlgElem { terms }
    }

    /// The single symbol `b_p^q(u - shift)` with coefficient 1.
    pub fn sym(p: usize, q: usize, shift: usize) -> Self {
        Self::from_word(vec![GenSym { p, q, shift }], RatFunc::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, word: &Word) -> RatFunc {
        self.terms.get(word).cloned().unwrap_or_else(RatFunc::zero)
    }

    /// Add `coeff * word` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, word: Word, coeff: &RatFunc) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(coeff.clone());
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &AlgElem) -> AlgElem {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &AlgElem) -> AlgElem {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), &-c);
        }
        out
    }

    pub fn neg(&self) -> AlgElem {
        AlgElem { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    /// Word concatenation left-to-right with coefficient products.
    pub fn mul(&self, rhs: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                let mut w = Vec::with_capacity(w1.len() + w2.len());
                w.extend_from_slice(w1);
                w.extend_from_slice(w2);
                out.add_term(w, &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> AlgElem {
        if c.is_zero() {
            return AlgElem::zero();
        }
        AlgElem { terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect() }
    }
}

/// Mode symbol `b_pq^(r)`: the coefficient of `u^{-r}` in the series
/// `b_p^q(u)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeriesGen {
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

/// Truncated series in `t = 1/u` whose coefficients are noncommutative
/// polynomials in mode symbols with rational coefficients. `coeffs[m]` is
/// the coefficient of `t^m`; the truncation order is `coeffs.len() - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesElem {
    coeffs: Vec<BTreeMap<Vec<SeriesGen>, Rational>>,
}

impl SeriesElem {
    pub fn zero(order: usize) -> Self {
        SeriesElem { coeffs: vec![BTreeMap::new(); order + 1] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &BTreeMap<Vec<SeriesGen>, Rational> {
        &self.coeffs[m]
    }

    fn add_term(&mut self, m: usize, word: Vec<SeriesGen>, c: &Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs[m].entry(word) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &SeriesElem) -> SeriesElem {
        assert_eq!(self.order(), rhs.order(), "mismatched truncation orders");
        let mut out = self.clone();
        for (m, terms) in rhs.coeffs.iter().enumerate() {
            for (w, c) in terms {
                out.add_term(m, w.clone(), c);
            }
        }
        out
    }

    /// Truncated product; the result's order is the smaller of the two.
    pub fn mul(&self, rhs: &SeriesElem) -> SeriesElem {
        let order = self.order().min(rhs.order());
        let mut out = SeriesElem::zero(order);
        for (m1, t1) in self.coeffs.iter().enumerate().take(order + 1) {
            for (m2, t2) in rhs.coeffs.iter().enumerate().take(order + 1 - m1) {
                for (w1, c1) in t1 {
                    for (w2, c2) in t2 {
                        let mut w = Vec::with_capacity(w1.len() + w2.len());
                        w.extend_from_slice(w1);
                        w.extend_from_slice(w2);
                        out.add_term(m1 + m2, w, &(c1 * c2));
                    }
                }
            }
        }
        out
    }

    /// Substitute a scalar value for every mode symbol and collapse each
    /// coefficient to a rational number.
    pub fn eval_modes(&self, f: impl Fn(usize, usize, usize) -> Rational) -> Vec<Rational> {
        self.coeffs
            .iter()
            .map(|terms| {
                let mut acc = Rational::zero();
                for (w, c) in terms {
                    let mut prod = c.clone();
                    for g in w {
                        prod *= f(g.p, g.q, g.r);
                    }
                    acc += prod;
                }
                acc
            })
            .collect()
    }

    /// Deterministic plain-text rendering, one line per power of `t`.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for (m, terms) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("t^{m}:"));
            if terms.is_empty() {
                out.push_str(" 0");
            }
            for (i, (w, c)) in terms.iter().enumerate() {
                out.push_str(if i == 0 { " " } else { " + " });
                out.push_str(&c.to_string());
                for g in w {
                    out.push_str(&format!(" * b[{},{}]^({})", g.p, g.q, g.r));
                }
            }
            out.push('\n');
        }
        out
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Substitute `b_p^q(u-s) -> sum_r b_pq^(r) * (u-s)^{-r}` into `a`, expand
/// every rational-function coefficient at infinity, and truncate at
/// `t^order`. Word order of the mode symbols follows the original word
/// order. Fails if some coefficient is improper at infinity.
pub fn expand_series(a: &AlgElem, order: usize) -> Result<SeriesElem> {
    let mut out = SeriesElem::zero(order);
    for (word, coeff) in a.terms() {
        let scalar = coeff.expand_at_infinity(order)?;
        // Partial products of the letter expansions, truncated throughout.
        let mut acc = SeriesElem::zero(order);
        acc.add_term(0, Vec::new(), &Rational::one());
        for g in word {
            let mut letter = SeriesElem::zero(order);
            // (u-s)^{-r} = sum_{m >= r} C(m-1, m-r) s^{m-r} t^m for r >= 1;
            // the r = 0 mode is the constant symbol.
            letter.add_term(0, vec![SeriesGen { p: g.p, q: g.q, r: 0 }], &Rational::one());
            for m in 1..=order {
                let mut spow = Rational::one();
                for r in (1..=m).rev() {
                    // spow = s^(m-r) maintained incrementally from r = m down.
                    let c = Rational::from_integer(binomial(m - 1, m - r)) * &spow;
                    letter.add_term(m, vec![SeriesGen { p: g.p, q: g.q, r }], &c);
                    spow *= rat(g.shift as i64);
                }
            }
            acc = acc.mul(&letter);
        }
        for (m, terms) in (0..=order).map(|m| (m, acc.coeff(m).clone())) {
            for (w, c) in terms {
                for (ms, sc) in scalar.coeffs().iter().enumerate() {
                    if m + ms > order {
                        break;
                    }
                    out.add_term(m + ms, w.clone(), &(&c * sc));
                }
            }
        }
    }
    Ok(out)
}
