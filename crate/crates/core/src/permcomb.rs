//! Symmetric-group machinery: permutations with cycle decomposition and
//! word restriction, the index set `I_n` of tuples `(k_1,...,k_n)` with
//! `i <= k_i <= n`, the bijection `κ ↔ η` on that set, and the rational
//! `α`-coefficients attached to tuples and permutations.
//!
//! Composition convention, used everywhere: `(σ∘τ)(x) = σ(τ(x))`. A product
//! of transpositions written left to right applies the rightmost factor
//! first. A "transposition" `(j,j)` is the identity.

use std::collections::BTreeSet;
use std::fmt;

use crate::scalars::{RatFunc, UPoly};
use crate::{Error, Result};

/// A permutation of `{1..n}`, stored as its image table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>, // images[i-1] = σ(i), values in 1..=n
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (1..=n).collect() }
    }

    /// The transposition `(a,b)`; `(a,a)` is the identity.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        assert!(1 <= a && a <= n && 1 <= b && b <= n, "transposition out of range");
        let mut p = Self::identity(n);
        p.images.swap(a - 1, b - 1);
        p
    }

    pub fn from_images(images: Vec<usize>) -> Self {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            assert!(1 <= v && v <= n && !seen[v - 1], "not a bijection of 1..={n}");
            seen[v - 1] = true;
        }
        Perm { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `self ∘ rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Perm) -> Perm {
        assert_eq!(self.n(), rhs.n());
        Perm { images: rhs.images.iter().map(|&v| self.images[v - 1]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v - 1] = i + 1;
        }
        Perm { images }
    }

    /// `+1` or `-1`; a transposition has sign `-1` and the sign is
    /// multiplicative under composition.
    pub fn sign(&self) -> i64 {
        let mut sign = 1;
        for cycle in self.cycles() {
            if cycle.len() % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// Canonical cycle decomposition: every cycle word starts at its
    /// minimum, cycles are sorted by minimum, fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start - 1] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x - 1] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Delete from each cycle word every letter outside `g`; restricted
    /// words of length >= 2 still act as cycles, everything else is fixed.
    pub fn word_restriction(&self, g: &BTreeSet<usize>) -> Perm {
        let mut out = Perm::identity(self.n());
        for cycle in self.cycles() {
            let kept: Vec<usize> = cycle.into_iter().filter(|x| g.contains(x)).collect();
            if kept.len() >= 2 {
                for w in kept.windows(2) {
                    out.images[w[0] - 1] = w[1];
                }
                out.images[kept[kept.len() - 1] - 1] = kept[0];
            }
        }
        out
    }

    /// Cycle notation, e.g. `(1,3)(2)`.
    pub fn format_cycles(&self) -> String {
        let mut out = String::new();
        for cycle in self.cycles() {
            out.push('(');
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&x.to_string());
            }
            out.push(')');
        }
        out
    }

    /// Parse cycle notation over `{1..n}`; elements not mentioned are
    /// fixed, repeated elements are rejected.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Perm> {
        let err = |col: usize, msg: &str| Error::Parse { line: 1, col, msg: msg.into() };
        let mut images: Vec<usize> = (1..=n).collect();
        let mut seen = vec![false; n];
        let bytes = s.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            if bytes[pos] != b'(' {
                return Err(err(pos + 1, "expected '('"));
            }
            let close = s[pos..]
                .find(')')
                .map(|k| pos + k)
                .ok_or_else(|| err(pos + 1, "unclosed cycle"))?;
            let mut cycle = Vec::new();
            for part in s[pos + 1..close].split(',') {
                let x: usize = part
                    .trim()
                    .parse()
                    .map_err(|_| err(pos + 2, "expected an integer"))?;
                if x < 1 || x > n {
                    return Err(err(pos + 2, "cycle element out of range"));
                }
                if seen[x - 1] {
                    return Err(err(pos + 2, "repeated cycle element"));
                }
                seen[x - 1] = true;
                cycle.push(x);
            }
            if cycle.is_empty() {
                return Err(err(pos + 1, "empty cycle"));
            }
            for w in cycle.windows(2) {
                images[w[0] - 1] = w[1];
            }
            images[cycle[cycle.len() - 1] - 1] = cycle[0];
            pos = close + 1;
        }
        Ok(Perm::from_images(images))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_cycles())
    }
}

/// All of `S_n` in lexicographic order of image tables.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, images: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if images.len() == n {
            out.push(Perm { images: images.clone() });
            return;
        }
        for v in 1..=n {
            if !used[v - 1] {
                used[v - 1] = true;
                images.push(v);
                rec(n, images, used, out);
                images.pop();
                used[v - 1] = false;
            }
        }
    }
    rec(n, &mut images, &mut used, &mut out);
    out
}

/// An element of `I_n`: a tuple `(k_1,...,k_n)` with `i <= k_i <= n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IdxTuple {
    k: Vec<usize>,
}

impl IdxTuple {
    pub fn new(k: Vec<usize>) -> Self {
        let n = k.len();
        for (i, &ki) in k.iter().enumerate() {
            assert!(i < ki && ki <= n, "tuple entry {ki} at position {} outside [{}, {n}]", i + 1, i + 1);
        }
        IdxTuple { k }
    }

    pub fn n(&self) -> usize {
        self.k.len()
    }

    /// `k_i`, 1-based.
    pub fn at(&self, i: usize) -> usize {
        self.k[i - 1]
    }

    pub fn entries(&self) -> &[usize] {
        &self.k
    }
}

/// All of `I_n` in lexicographic order; there are `n!` tuples.
pub fn enum_in(n: usize) -> Vec<IdxTuple> {
    assert!(n >= 1, "enum_in needs n >= 1");
    let mut out = Vec::new();
    let mut k = Vec::with_capacity(n);
    fn rec(n: usize, k: &mut Vec<usize>, out: &mut Vec<IdxTuple>) {
        if k.len() == n {
            out.push(IdxTuple { k: k.clone() });
            return;
        }
        let i = k.len() + 1;
        for v in i..=n {
            k.push(v);
            rec(n, k, out);
            k.pop();
        }
    }
    rec(n, &mut k, &mut out);
    out
}

/// Denominator `n - 2u - 2 + i` as a polynomial in `u`.
fn alpha_den(n: usize, i: usize) -> UPoly {
    UPoly::linear(-2, (n + i) as i64 - 2)
}

/// `α(κ) = Π_{i : k_i > i} 1/(n - 2u - 2 + i)`.
pub fn alpha_kappa(kappa: &IdxTuple, n: usize) -> RatFunc {
    let mut out = RatFunc::one();
    for i in 1..=n {
        if kappa.at(i) > i {
            out = &out * &RatFunc::inv_poly(alpha_den(n, i));
        }
    }
    out
}

/// The product of transpositions `(n,k_n)(n-1,k_{n-1})...(i,k_i)`,
/// rightmost factor applied first.
pub fn q_kappa(kappa: &IdxTuple, i: usize) -> Perm {
    let n = kappa.n();
    assert!(1 <= i && i <= n);
    let mut acc = Perm::identity(n);
    for j in i..=n {
        acc = Perm::transposition(n, j, kappa.at(j)).compose(&acc);
    }
    acc
}

/// `η_i = q_κ^{[i]}(i)` where `q_κ^{[i]}` is [`q_kappa`] at depth `i`.
pub fn kappa_to_eta(kappa: &IdxTuple) -> IdxTuple {
    let n = kappa.n();
    // q^{[i]} = q^{[i+1]} ∘ (i, k_i), built downward.
    let mut acc = Perm::identity(n);
    let mut eta = vec![0; n];
    for i in (1..=n).rev() {
        acc = acc.compose(&Perm::transposition(n, i, kappa.at(i)));
        eta[i - 1] = acc.apply(i);
    }
    IdxTuple::new(eta)
}

/// Inverse of [`kappa_to_eta`]: `k_n = η_n`, then downward
/// `k_i = (i+1,k_{i+1})...(n,k_n) (η_i)`.
pub fn eta_to_kappa(eta: &IdxTuple) -> IdxTuple {
    let n = eta.n();
    let mut k = vec![0; n];
    // acc = inverse of the already-built tail product.
    let mut acc = Perm::identity(n);
    for i in (1..=n).rev() {
        k[i - 1] = acc.apply(eta.at(i));
        acc = Perm::transposition(n, i, k[i - 1]).compose(&acc);
    }
    IdxTuple::new(k)
}

/// The permutation `p_η`, built by the downward recursion
/// `p^{[n]} = Id`, `p^{[i]} = p^{[i+1]} ∘ (i, (p^{[i+1]})^{-1}(η_i))`.
pub fn p_eta(eta: &IdxTuple) -> Perm {
    let n = eta.n();
    let mut p = Perm::identity(n);
    for i in (1..n).rev() {
        let target = p.inverse().apply(eta.at(i));
        p = p.compose(&Perm::transposition(n, i, target));
    }
    p
}

/// `ᾱ(σ) = Π_g 1/(n - 2u - 2 + g)` over all `g` that are not the maximum
/// of their cycle.
pub fn alpha_bar(sigma: &Perm, n: usize) -> RatFunc {
    let mut out = RatFunc::one();
    for cycle in sigma.cycles() {
        let max = *cycle.iter().max().unwrap();
        for &g in &cycle {
            if g != max {
                out = &out * &RatFunc::inv_poly(alpha_den(n, g));
            }
        }
    }
    out
}

/// The cycle data a tuple `η` induces on positions: one increasing cycle
/// per image value, formed by its sorted preimage positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaData {
    pub eta: IdxTuple,
    /// Sorted distinct values of `η`.
    pub image: Vec<usize>,
    /// Product of the disjoint increasing preimage cycles.
    pub gamma: Perm,
    /// Minima of those cycles.
    pub gmin: BTreeSet<usize>,
    /// Maxima of those cycles.
    pub gmax: BTreeSet<usize>,
}

pub fn eta_data(eta: &IdxTuple) -> EtaData {
    let n = eta.n();
    let image: BTreeSet<usize> = eta.entries().iter().copied().collect();
    let mut gamma = Perm::identity(n);
    let mut gmin = BTreeSet::new();
    let mut gmax = BTreeSet::new();
    for &v in &image {
        let pre: Vec<usize> = (1..=n).filter(|&i| eta.at(i) == v).collect();
        for w in pre.windows(2) {
            gamma.images[w[0] - 1] = w[1];
        }
        gamma.images[pre[pre.len() - 1] - 1] = pre[0];
        gmin.insert(pre[0]);
        gmax.insert(pre[pre.len() - 1]);
    }
    EtaData { eta: eta.clone(), image: image.into_iter().collect(), gamma, gmin, gmax }
}

/// All permutations of `{1..n}` acting trivially off the image of `η`,
/// in a deterministic order; there are `|Im(η)|!` of them.
pub fn s_eta(eta: &IdxTuple) -> Vec<Perm> {
    let n = eta.n();
    let image: Vec<usize> = eta_data(eta).image;
    let m = image.len();
    all_perms(m)
        .into_iter()
        .map(|tau| {
            let mut sigma = Perm::identity(n);
            for (j, &x) in image.iter().enumerate() {
                sigma.images[x - 1] = image[tau.apply(j + 1) - 1];
            }
            sigma
        })
        .collect()
}

/// `α(σ,η) = (-1)^σ Π_{i : η_i > i} 1/(2u + 2 - i - n)`.
pub fn alpha_sigma_eta(sigma: &Perm, eta: &IdxTuple, n: usize) -> RatFunc {
    let mut out = RatFunc::from_int(sigma.sign());
    for i in 1..=n {
        if eta.at(i) > i {
            out = &out * &RatFunc::inv_poly(UPoly::linear(2, 2 - (i + n) as i64));
        }
    }
    out
}
