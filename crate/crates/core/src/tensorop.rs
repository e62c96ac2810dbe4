//! Sparse operators on `(C^n)^⊗n` with free-algebra entries: slot
//! permutations, Yang `R`-matrices, antisymmetrizers over slot ranges, the
//! rank-corrected `Π_k` operators, and the generating matrix embedded at a
//! slot. The slot count always equals the local dimension `n`.

use std::collections::BTreeMap;

use crate::freealg::AlgElem;
use crate::permcomb::Perm;
use crate::scalars::{RatFunc, UPoly};

/// Basis label for `(C^n)^⊗n`: entry `i` (1-based values in `1..=n`) is the
/// factor occupying slot `i + 1`.
pub type MultiIdx = Vec<usize>;

/// All `n^n` multi-indices in lexicographic order.
pub fn all_multi_indices(n: usize) -> Vec<MultiIdx> {
    let mut out = Vec::with_capacity(n.pow(n as u32));
    let mut cur = vec![1; n];
    loop {
        out.push(cur.clone());
        // Odometer increment.
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            if cur[i - 1] < n {
                cur[i - 1] += 1;
                for c in cur.iter_mut().skip(i) {
                    *c = 1;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Sparse operator: column-major map `col -> row -> entry`. Zero entries
/// are never stored; two operators are equal exactly when they are equal
/// as matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TOp {
    n: usize,
    cols: BTreeMap<MultiIdx, BTreeMap<MultiIdx, AlgElem>>,
}

/// A sparse column vector over the same basis.
pub type Column = BTreeMap<MultiIdx, AlgElem>;

impl TOp {
    pub fn zero(n: usize) -> Self {
        TOp { n, cols: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut cols = BTreeMap::new();
        for m in all_multi_indices(n) {
            let mut col = BTreeMap::new();
            col.insert(m.clone(), AlgElem::one());
            cols.insert(m, col);
        }
        TOp { n, cols }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_entries(&self) -> usize {
        self.cols.values().map(|c| c.len()).sum()
    }

    pub fn entry(&self, row: &MultiIdx, col: &MultiIdx) -> AlgElem {
        self.cols
            .get(col)
            .and_then(|c| c.get(row))
            .cloned()
            .unwrap_or_else(AlgElem::zero)
    }

    pub fn columns(&self) -> impl Iterator<Item = (&MultiIdx, &Column)> {
        self.cols.iter()
    }

    /// Add `val` to the `(row, col)` entry, dropping it if it cancels.
    pub fn add_entry(&mut self, row: MultiIdx, col: MultiIdx, val: &AlgElem) {
        if val.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        let column = self.cols.entry(col.clone()).or_default();
        match column.entry(row) {
            Entry::Vacant(e) => {
                e.insert(val.clone());
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(val);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        if column.is_empty() {
            self.cols.remove(&col);
        }
    }

    pub fn add(&self, rhs: &TOp) -> TOp {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (c, col) in &rhs.cols {
            for (r, v) in col {
                out.add_entry(r.clone(), c.clone(), v);
            }
        }
        out
    }

    pub fn sub(&self, rhs: &TOp) -> TOp {
        self.add(&rhs.scale(&RatFunc::from_int(-1)))
    }

    pub fn scale(&self, c: &RatFunc) -> TOp {
        if c.is_zero() {
            return TOp::zero(self.n);
        }
        TOp {
            n: self.n,
            cols: self
                .cols
                .iter()
                .map(|(cl, col)| {
                    (cl.clone(), col.iter().map(|(r, v)| (r.clone(), v.scale(c))).collect())
                })
                .collect(),
        }
    }

    /// Operator product `self * rhs`, with entry products taken in that
    /// left-to-right order (entries do not commute).
    pub fn mul(&self, rhs: &TOp) -> TOp {
        assert_eq!(self.n, rhs.n);
        let mut out = TOp::zero(self.n);
        for (c, rcol) in &rhs.cols {
            for (m, y) in rcol {
                if let Some(xcol) = self.cols.get(m) {
                    for (r, x) in xcol {
                        out.add_entry(r.clone(), c.clone(), &x.mul(y));
                    }
                }
            }
        }
        out
    }

    /// The column of `self` at basis vector `v`.
    pub fn apply_basis(&self, v: &MultiIdx) -> Column {
        self.cols.get(v).cloned().unwrap_or_default()
    }

    /// Apply to a sparse column vector: entry products are
    /// `operator entry * vector entry` in that order.
    pub fn apply_column(&self, v: &Column) -> Column {
        let mut out = Column::new();
        for (m, val) in v {
            if let Some(xcol) = self.cols.get(m) {
                for (r, x) in xcol {
                    let prod = x.mul(val);
                    column_add(&mut out, r, &prod);
                }
            }
        }
        out
    }
}

/// Accumulate `val` onto `col[row]`, never storing zeros.
pub fn column_add(col: &mut Column, row: &MultiIdx, val: &AlgElem) {
    if val.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match col.entry(row.clone()) {
        Entry::Vacant(e) => {
            e.insert(val.clone());
        }
        Entry::Occupied(mut e) => {
            let sum = e.get().add(val);
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// The operator sending the vector in slot `i` to slot `pi(i)`: the entry
/// at `(row, col)` is 1 exactly when `row[pi(i)] = col[i]` for all `i`.
/// Composition matches permutation composition.
pub fn perm_op(pi: &Perm) -> TOp {
    let n = pi.n();
    let mut out = TOp::zero(n);
    for c in all_multi_indices(n) {
        let mut r = vec![0; n];
        for i in 1..=n {
            r[pi.apply(i) - 1] = c[i - 1];
        }
        out.add_entry(r, c, &AlgElem::one());
    }
    out
}

/// The slot swap `P_{ij}`; `P_{ii}` is the identity.
pub fn p_swap(i: usize, j: usize, n: usize) -> TOp {
    assert!(1 <= i && i <= n && 1 <= j && j <= n, "slot index out of range");
    perm_op(&Perm::transposition(n, i, j))
}

/// Yang matrix factor acting on slots `i, j`: `Id - P_{ij}/arg` for a
/// nonzero polynomial argument.
pub fn r_op(i: usize, j: usize, arg: &UPoly, n: usize) -> TOp {
    assert!(!arg.is_zero(), "R factor with zero argument");
    let inv = RatFunc::inv_poly(arg.clone());
    let mut out = TOp::identity(n);
    let neg = AlgElem::scalar(&RatFunc::zero() - &inv);
    for c in all_multi_indices(n) {
        let mut r = c.clone();
        r.swap(i - 1, j - 1);
        out.add_entry(r, c, &neg);
    }
    out
}

/// Which slots an antisymmetrizer acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AntiKind {
    /// All `n` slots.
    Full,
    /// The first `k` slots.
    First(usize),
    /// The last `m` slots (the "primed" antisymmetrizer).
    Prime(usize),
}

/// Signed sum of slot permutations over the requested slot range, e.g. the
/// full antisymmetrizer sends `v_1⊗...⊗v_n` to
/// `Σ_σ (-1)^σ v_{σ(1)}⊗...⊗v_{σ(n)}`.
pub fn antisym(n: usize, kind: AntiKind) -> TOp {
    let (lo, hi) = match kind {
        AntiKind::Full => (1, n),
        AntiKind::First(k) => {
            assert!(k <= n, "first-{k} antisymmetrizer on {n} slots");
            (1, k)
        }
        AntiKind::Prime(m) => {
            assert!(m <= n, "last-{m} antisymmetrizer on {n} slots");
            (n - m + 1, n)
        }
    };
    let width = hi + 1 - lo;
    let mut out = TOp::zero(n);
    for tau in crate::permcomb::all_perms(width) {
        // Extend the permutation of {lo..hi} by the identity elsewhere.
        let mut images: Vec<usize> = (1..=n).collect();
        for off in 0..width {
            images[lo - 1 + off] = lo - 1 + tau.apply(off + 1);
        }
        let sign = RatFunc::from_int(tau.sign());
        out = out.add(&perm_op(&Perm::from_images(images)).scale(&sign));
    }
    out
}

/// `Π_k = Id - (2u - k - n + 2)^{-1} Σ_{i=k+1}^n P_{ki}`; `Π_n` is the
/// identity (empty sum).
pub fn pi_k(k: usize, n: usize) -> TOp {
    assert!(1 <= k && k <= n, "slot index out of range");
    let mut out = TOp::identity(n);
    if k == n {
        return out;
    }
    let inv = RatFunc::inv_poly(UPoly::linear(2, 2 - (k + n) as i64));
    let neg = &RatFunc::zero() - &inv;
    for i in k + 1..=n {
        out = out.add(&p_swap(k, i, n).scale(&neg));
    }
    out
}

/// The generating matrix embedded at slot `s` with argument `u - shift`:
/// the entry at `(row, col)` is the symbol `b_{row[s]}^{col[s]}(u - shift)`
/// whenever `row` and `col` agree off slot `s`.
pub fn b_slot(s: usize, shift: usize, n: usize) -> TOp {
    assert!(1 <= s && s <= n, "slot index out of range");
    let mut out = TOp::zero(n);
    for c in all_multi_indices(n) {
        for p in 1..=n {
            let mut r = c.clone();
            r[s - 1] = p;
            let val = AlgElem::sym(p, c[s - 1], shift);
            out.add_entry(r, c.clone(), &val);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcomb::all_perms;

    #[test]
    fn swap_moves_basis_vectors() {
        let p = p_swap(1, 2, 2);
        let col = p.apply_basis(&vec![1, 2]);
        assert_eq!(col.len(), 1);
        assert!(col.get(&vec![2, 1]).unwrap().coeff_of(&vec![]).is_one());
        assert_eq!(p.mul(&p), TOp::identity(2));
        assert_eq!(p_swap(2, 2, 2), TOp::identity(2));
    }

    #[test]
    fn perm_op_is_a_homomorphism() {
        for s in all_perms(3) {
            for t in all_perms(3) {
                assert_eq!(perm_op(&s).mul(&perm_op(&t)), perm_op(&s.compose(&t)));
            }
        }
        assert_eq!(perm_op(&Perm::identity(3)).num_entries(), 27);
    }

    #[test]
    fn r_op_entries() {
        let r = r_op(1, 2, &UPoly::linear(1, 0), 2);
        assert!(r.entry(&vec![1, 2], &vec![1, 2]).coeff_of(&vec![]).is_one());
        let off = r.entry(&vec![2, 1], &vec![1, 2]);
        assert_eq!(
            off.coeff_of(&vec![]),
            &RatFunc::zero() - &RatFunc::inv_poly(UPoly::linear(1, 0))
        );
    }

    #[test]
    fn r_op_product_rule() {
        // R(arg) R(-arg) = (1 - 1/arg^2) Id, using P^2 = Id.
        let arg = UPoly::linear(2, -1);
        let narg = -&arg;
        let lhs = r_op(1, 2, &arg, 2).mul(&r_op(1, 2, &narg, 2));
        let factor = &RatFunc::one()
            - &RatFunc::new(UPoly::one(), &arg * &arg);
        assert_eq!(lhs, TOp::identity(2).scale(&factor));
    }

    #[test]
    fn antisym_basics() {
        assert_eq!(antisym(1, AntiKind::Full), TOp::identity(1));
        let a3 = antisym(3, AntiKind::Full);
        let col = a3.apply_basis(&vec![1, 2, 3]);
        assert_eq!(col.len(), 6);
        for v in col.values() {
            let c = v.coeff_of(&vec![]);
            assert!(c == RatFunc::one() || c == RatFunc::from_int(-1));
        }
    }

    #[test]
    fn primed_antisym_absorption() {
        // (m-1)! A'_m = A'_m A'_{m-1} on 4 slots.
        for m in 2..=4usize {
            let am = antisym(4, AntiKind::Prime(m));
            let am1 = antisym(4, AntiKind::Prime(m - 1));
            let fact: i64 = (1..m as i64).product();
            assert_eq!(am.scale(&RatFunc::from_int(fact)), am.mul(&am1));
        }
    }

    #[test]
    fn pi_k_shape() {
        assert_eq!(pi_k(2, 2), TOp::identity(2));
        let expected = TOp::identity(2).sub(
            &p_swap(1, 2, 2).scale(&RatFunc::inv_poly(UPoly::linear(2, -1))),
        );
        assert_eq!(pi_k(1, 2), expected);
    }

    #[test]
    fn r_chain_meets_pi_under_antisym() {
        // A'_{n-k} (R_{k,k+1} ... R_{k,n}) = A'_{n-k} Π_k = Π_k A'_{n-k},
        // with R_{ij} evaluated at 2u - i - j + 2.
        for n in 2..=3usize {
            for k in 1..=n {
                let prime = antisym(n, AntiKind::Prime(n - k));
                let mut chain = TOp::identity(n);
                for j in k + 1..=n {
                    let arg = UPoly::linear(2, 2 - (k + j) as i64);
                    chain = chain.mul(&r_op(k, j, &arg, n));
                }
                let pik = pi_k(k, n);
                assert_eq!(prime.mul(&chain), prime.mul(&pik));
                assert_eq!(prime.mul(&pik), pik.mul(&prime));
            }
        }
    }

    #[test]
    fn b_slot_entries() {
        let b = b_slot(1, 0, 1);
        assert_eq!(b.num_entries(), 1);
        let e = b.entry(&vec![1], &vec![1]);
        assert!(e.coeff_of(&vec![crate::freealg::GenSym { p: 1, q: 1, shift: 0 }]).is_one());

        let b = b_slot(1, 3, 2);
        let e = b.entry(&vec![2, 1], &vec![1, 1]);
        assert!(e.coeff_of(&vec![crate::freealg::GenSym { p: 2, q: 1, shift: 3 }]).is_one());
        // Rows and columns differing off slot 1 never connect.
        assert!(b.entry(&vec![2, 1], &vec![1, 2]).is_zero());
    }

    #[test]
    fn swap_conjugates_slot_embedding() {
        // P_{ij} B_i = B_j P_{ij}
        for (i, j) in [(1usize, 2usize), (1, 3), (2, 3)] {
            let p = p_swap(i, j, 3);
            assert_eq!(p.mul(&b_slot(i, 1, 3)), b_slot(j, 1, 3).mul(&p));
        }
    }

    #[test]
    fn product_entry_by_hand() {
        let prod = b_slot(1, 0, 2).mul(&b_slot(2, 1, 2));
        let e = prod.entry(&vec![1, 2], &vec![1, 2]);
        let word = vec![
            crate::freealg::GenSym { p: 1, q: 1, shift: 0 },
            crate::freealg::GenSym { p: 2, q: 2, shift: 1 },
        ];
        assert!(e.coeff_of(&word).is_one());
        assert_eq!(e.num_terms(), 1);
    }

    #[test]
    fn alternating_rows_after_full_antisym() {
        // M = A_n X has M[σ·r, c] = sign(σ) M[r, c] for every σ.
        for n in 2..=3usize {
            let x = b_slot(1, 0, n).mul(&pi_k(1, n));
            let m = antisym(n, AntiKind::Full).mul(&x);
            for sigma in all_perms(n) {
                for (c, col) in m.columns() {
                    for (r, v) in col {
                        let mut sr = vec![0; n];
                        for i in 1..=n {
                            sr[sigma.apply(i) - 1] = r[i - 1];
                        }
                        let expect = v.scale(&RatFunc::from_int(sigma.sign()));
                        assert_eq!(m.entry(&sr, c), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn apply_column_matches_mul() {
        let x = pi_k(1, 2);
        let y = b_slot(2, 1, 2);
        let prod = x.mul(&y);
        for c in all_multi_indices(2) {
            let via_vec = x.apply_column(&y.apply_basis(&c));
            assert_eq!(via_vec, prod.apply_basis(&c));
        }
    }
}
