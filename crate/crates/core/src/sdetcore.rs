//! The Sklyanin determinant itself: seven independent ways to compute it,
//! the column extraction that defines it, a mutual cross-check harness, and
//! diagonal specialization with the leading-coefficient law.
//!
//! The determinant of the `n x n` generating matrix `B(u)` is obtained by
//! antisymmetrizing an ordered product of slot-embedded copies
//! `B_1(u), ..., B_n(u-n+1)` interleaved with scalar correction factors,
//! then reading off the coefficient of the fully antisymmetric vector. The
//! routes differ in how the interleaving is organized:
//!
//! * `def` — chains of Yang `R`-matrix factors between the `B` slots.
//! * `pi`  — one rank-corrected factor `Π_k` between consecutive slots.
//! * `bp`  — expansion of every `Π_k` into slot swaps, summed over the
//!   index set `I_n` with coefficients `α(κ)`.
//! * `qa`  — swaps commuted to the front as one collected permutation per
//!   tuple `κ`, with the slot of each `B` factor rewritten accordingly.
//! * `qb`  — the same sum reindexed over `η` tuples via the `κ ↔ η`
//!   bijection, with the front permutation built recursively.
//! * `qc`  — the sum regrouped over all of `S_n`, the slot data recovered
//!   by word restriction, and coefficients `ᾱ(σ)`.
//! * `thm` — a closed formula: an explicit monomial template per `(σ, η)`
//!   pair with Einstein-style summation over its free indices.
//!
//! All seven must agree exactly; `cross_check` verifies that, operator
//! equalities included, and never patches over a mismatch.

use crate::freealg::{expand_series, AlgElem, SeriesElem, Word};
use crate::permcomb::{
    alpha_bar, alpha_kappa, alpha_sigma_eta, all_perms, enum_in, eta_data, p_eta, q_kappa,
    s_eta, Perm,
};
use crate::scalars::{rat, RatFunc, Rational, UPoly};
use crate::tensorop::{
    all_multi_indices, antisym, b_slot, column_add, perm_op, pi_k, r_op, AntiKind, Column,
    MultiIdx, TOp,
};
use crate::{Error, Result};

/// The seven computation routes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    Def,
    Pi,
    Bp,
    Qa,
    Qb,
    Qc,
    Thm,
}

impl Path {
    pub const ALL: [Path; 7] = [
        Path::Def,
        Path::Pi,
        Path::Bp,
        Path::Qa,
        Path::Qb,
        Path::Qc,
        Path::Thm,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Path::Def => "def",
            Path::Pi => "pi",
            Path::Bp => "bp",
            Path::Qa => "qa",
            Path::Qb => "qb",
            Path::Qc => "qc",
            Path::Thm => "thm",
        }
    }

    pub fn parse(s: &str) -> Result<Path> {
        Path::ALL
            .iter()
            .copied()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Range(format!("unknown path `{s}`")))
    }
}

impl std::fmt::Display for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed determinant: every word has length `n` and carries the shifts
/// `(0, 1, ..., n-1)` left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdetResult {
    pub n: usize,
    pub path: Path,
    pub value: AlgElem,
}

impl SdetResult {
    /// Check the word-shape invariant.
    pub fn validate(&self) -> Result<()> {
        check_word_shape(&self.value, self.n)
    }
}

pub(crate) fn check_word_shape(value: &AlgElem, n: usize) -> Result<()> {
    for (word, _) in value.terms() {
        if word.len() != n {
            return Err(Error::Shape(format!(
                "word of length {} in a result for n = {n}",
                word.len()
            )));
        }
        for (k, g) in word.iter().enumerate() {
            if g.shift != k {
                return Err(Error::Shape(format!(
                    "letter {k} carries shift {} instead of {k}",
                    g.shift
                )));
            }
            if g.p < 1 || g.p > n || g.q < 1 || g.q > n {
                return Err(Error::Shape(format!(
                    "letter index ({}, {}) outside 1..={n}",
                    g.p, g.q
                )));
            }
        }
    }
    Ok(())
}

/// The argument `2u - i - j + 2` of the abbreviated `R`-factor on slots
/// `(i, j)`.
fn r_arg(i: usize, j: usize) -> UPoly {
    UPoly::linear(2, 2 - (i + j) as i64)
}

/// One factor of a bracket product in symbolic form. Factors act on sparse
/// columns directly, so a long product is only ever a list of descriptors —
/// nothing the size of an operator is built from them.
#[derive(Clone, Debug)]
enum Factor {
    /// Slot permutation sending the vector in slot `i` to slot `pi(i)`.
    Perm(Perm),
    /// Generating matrix at slot `s` with argument `u - shift`.
    B { s: usize, shift: usize },
    /// Yang factor `Id - P_{ij}/arg` on slots `i, j`.
    R { i: usize, j: usize, arg: UPoly },
    /// `Π_k = Id - (2u - k - n + 2)^{-1} Σ_{i=k+1}^n P_{ki}`.
    Pi(usize),
}

impl Factor {
    /// Apply to a sparse column. Entry products are
    /// `factor entry * vector entry` in that order, matching
    /// [`TOp::apply_column`] on the materialized factor.
    fn apply_column(&self, v: &Column, n: usize) -> Column {
        let mut out = Column::new();
        match self {
            Factor::Perm(pi) => {
                for (c, val) in v {
                    let mut r = vec![0; n];
                    for i in 1..=n {
                        r[pi.apply(i) - 1] = c[i - 1];
                    }
                    column_add(&mut out, &r, val);
                }
            }
            Factor::B { s, shift } => {
                for (c, val) in v {
                    for p in 1..=n {
                        let mut r = c.clone();
                        r[s - 1] = p;
                        let prod = AlgElem::sym(p, c[s - 1], *shift).mul(val);
                        column_add(&mut out, &r, &prod);
                    }
                }
            }
            Factor::R { i, j, arg } => {
                let neg = &RatFunc::zero() - &RatFunc::inv_poly(arg.clone());
                for (c, val) in v {
                    column_add(&mut out, c, val);
                    let mut r = c.clone();
                    r.swap(i - 1, j - 1);
                    column_add(&mut out, &r, &val.scale(&neg));
                }
            }
            Factor::Pi(k) => {
                for (c, val) in v {
                    column_add(&mut out, c, val);
                }
                if *k < n {
                    let neg = &RatFunc::zero()
                        - &RatFunc::inv_poly(UPoly::linear(2, 2 - (k + n) as i64));
                    for (c, val) in v {
                        let scaled = val.scale(&neg);
                        for i in k + 1..=n {
                            let mut r = c.clone();
                            r.swap(k - 1, i - 1);
                            column_add(&mut out, &r, &scaled);
                        }
                    }
                }
            }
        }
        out
    }

    /// The same factor as a materialized operator.
    fn materialize(&self, n: usize) -> TOp {
        match self {
            Factor::Perm(pi) => perm_op(pi),
            Factor::B { s, shift } => b_slot(*s, *shift, n),
            Factor::R { i, j, arg } => r_op(*i, *j, arg, n),
            Factor::Pi(k) => pi_k(*k, n),
        }
    }
}

/// Factors of the `R`-matrix bracket
/// `B_1(u) (R_{12}...R_{1k}) B_2(u-1) (R_{23}...R_{2k}) ... B_k(u-k+1)`,
/// in product order.
fn bracket_factors(n: usize, k: usize) -> Vec<Factor> {
    assert!(1 <= k && k <= n, "bracket depth {k} outside 1..={n}");
    let mut out = Vec::new();
    for t in 1..=k {
        out.push(Factor::B { s: t, shift: t - 1 });
        for j in t + 1..=k {
            out.push(Factor::R { i: t, j, arg: r_arg(t, j) });
        }
    }
    out
}

/// Factors of the `Π`-form bracket
/// `B_1(u) Π_1 B_2(u-1) Π_2 ... Π_{n-1} B_n(u-n+1)`, in product order.
fn bracket_pi_factors(n: usize) -> Vec<Factor> {
    let mut out = Vec::new();
    for t in 1..=n {
        out.push(Factor::B { s: t, shift: t - 1 });
        if t < n {
            out.push(Factor::Pi(t));
        }
    }
    out
}

fn product(factors: &[Factor], n: usize) -> TOp {
    let mut acc = factors[0].materialize(n);
    for f in &factors[1..] {
        acc = acc.mul(&f.materialize(n));
    }
    acc
}

/// The `R`-matrix bracket of depth `k` as a materialized operator.
pub fn bracket(n: usize, k: usize) -> TOp {
    product(&bracket_factors(n, k), n)
}

/// The `Π`-form bracket as a materialized operator.
pub fn bracket_pi(n: usize) -> TOp {
    product(&bracket_pi_factors(n), n)
}

/// A sum of scalar multiples of ordered factor products. Columns of the
/// represented operator can be streamed one basis vector at a time, so the
/// full operator never has to be held in memory.
struct TermSum {
    n: usize,
    terms: Vec<(RatFunc, Vec<Factor>)>,
}

impl TermSum {
    /// The represented operator's column at basis vector `c`, charged
    /// against the memory cap as it grows.
    fn column(&self, c: &MultiIdx) -> Result<Column> {
        self.column_inner(c, true)
    }

    fn column_inner(&self, c: &MultiIdx, enforce_cap: bool) -> Result<Column> {
        let mut out = Column::new();
        for (coeff, factors) in &self.terms {
            let mut v = Column::new();
            v.insert(c.clone(), AlgElem::one());
            for f in factors.iter().rev() {
                v = f.apply_column(&v, self.n);
                if enforce_cap {
                    charge_terms(column_terms(&out) + column_terms(&v))?;
                }
            }
            for (r, val) in &v {
                column_add(&mut out, r, &val.scale(coeff));
            }
        }
        Ok(out)
    }

    fn materialize(&self) -> TOp {
        let mut out = TOp::zero(self.n);
        for c in all_multi_indices(self.n) {
            let col = self
                .column_inner(&c, false)
                .expect("uncapped column construction cannot fail");
            for (r, val) in col {
                out.add_entry(r, c.clone(), &val);
            }
        }
        out
    }
}

/// Term sum for a path's operator form. `Thm` has no operator form.
fn term_sum(n: usize, path: Path) -> TermSum {
    let terms = match path {
        Path::Def => vec![(RatFunc::one(), bracket_factors(n, n))],
        Path::Pi => vec![(RatFunc::one(), bracket_pi_factors(n))],
        Path::Bp => enum_in(n)
            .into_iter()
            .map(|kappa| {
                let mut factors = Vec::new();
                for i in 1..=n {
                    factors.push(Factor::B { s: i, shift: i - 1 });
                    if kappa.at(i) != i {
                        factors.push(Factor::Perm(Perm::transposition(n, i, kappa.at(i))));
                    }
                }
                (alpha_kappa(&kappa, n), factors)
            })
            .collect(),
        Path::Qa => enum_in(n)
            .into_iter()
            .map(|kappa| {
                let mut factors = vec![Factor::Perm(q_kappa(&kappa, 1).inverse())];
                for i in 1..=n {
                    factors.push(Factor::B { s: q_kappa(&kappa, i).apply(i), shift: i - 1 });
                }
                (alpha_kappa(&kappa, n), factors)
            })
            .collect(),
        Path::Qb => enum_in(n)
            .into_iter()
            .map(|eta| {
                let mut factors = vec![Factor::Perm(p_eta(&eta).inverse())];
                for i in 1..=n {
                    factors.push(Factor::B { s: eta.at(i), shift: i - 1 });
                }
                (alpha_kappa(&eta, n), factors)
            })
            .collect(),
        Path::Qc => all_perms(n)
            .into_iter()
            .map(|sigma| {
                let mut factors = vec![Factor::Perm(sigma.inverse())];
                for i in 1..=n {
                    let g = (i..=n).collect();
                    factors.push(Factor::B {
                        s: sigma.word_restriction(&g).apply(i),
                        shift: i - 1,
                    });
                }
                (alpha_bar(&sigma, n), factors)
            })
            .collect(),
        Path::Thm => panic!("the closed formula has no operator form"),
    };
    TermSum { n, terms }
}

/// The operator forms of the four expansion routes (materialized; for the
/// streamed variant used by [`cross_check`] the operator is never built).
pub fn expand_bp(n: usize) -> TOp {
    term_sum(n, Path::Bp).materialize()
}

pub fn expand_qa(n: usize) -> TOp {
    term_sum(n, Path::Qa).materialize()
}

pub fn expand_qb(n: usize) -> TOp {
    term_sum(n, Path::Qb).materialize()
}

pub fn expand_qc(n: usize) -> TOp {
    term_sum(n, Path::Qc).materialize()
}

fn identity_idx(n: usize) -> MultiIdx {
    (1..=n).collect()
}

/// One component of the antisymmetrized column: `(A_n v)[m]` is the signed
/// sum of `v` at the rows `σ^{-1}·m` over all slot permutations `σ`.
fn antisymmetrized_component(n: usize, v: &Column, m: &MultiIdx, perms: &[Perm]) -> AlgElem {
    let mut comp = AlgElem::zero();
    for sigma in perms {
        let r: MultiIdx = (1..=n).map(|i| m[sigma.apply(i) - 1]).collect();
        if let Some(val) = v.get(&r) {
            let negate = sigma.sign() < 0;
            for (w, c) in val.terms() {
                if negate {
                    comp.add_term(w.clone(), &-c);
                } else {
                    comp.add_term(w.clone(), c);
                }
            }
        }
    }
    comp
}

/// Collapse a column as the full antisymmetrizer would, but keep only one
/// representative per row orbit: each row is sorted, acquiring the sign of
/// the sorting permutation, and rows with repeated entries drop out. Two
/// columns have equal antisymmetrizations exactly when they collapse
/// identically.
fn antisym_collapse(v: &Column) -> Column {
    let mut out = Column::new();
    for (r, val) in v {
        let mut idx: Vec<usize> = (0..r.len()).collect();
        idx.sort_by_key(|&i| r[i]);
        let sorted: Vec<usize> = idx.iter().map(|&i| r[i]).collect();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        // Sign of the permutation that sorts r: count cycles of idx.
        let mut seen = vec![false; idx.len()];
        let mut sign = 1i64;
        for s in 0..idx.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = idx[x];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        column_add(&mut out, &sorted, &val.scale(&RatFunc::from_int(sign)));
    }
    out
}

/// Extract the scalar the antisymmetrized column is proportional to.
///
/// Computes every component of `A_n · v` (with `v` the column of some bracket
/// form at the identity basis vector) one row at a time, asserts the image is
/// `S * A_n(e_1⊗...⊗e_n)` — the component at every permuted row equals the
/// sign of the permutation times `S`, everything else vanishes — and returns
/// `S`. Each component is an independent signed sum, so streaming them keeps
/// peak memory at a single row even when `v` itself is large.
fn extract_from_column(n: usize, v: &Column) -> Result<AlgElem> {
    let perms = all_perms(n);
    let id = identity_idx(n);
    let base = column_terms(v);
    let s = antisymmetrized_component(n, v, &id, &perms);
    // Rows with a repeated entry vanish identically: a transposition t of
    // two positions carrying the same value fixes m, and pairing σ with tσ
    // cancels the signed sum for any column whatsoever. Scanning them all
    // is an affordable tripwire through n = 4; in deep mode only the
    // permutation rows (where the extracted scalar actually lives) are
    // checked.
    let rows: Vec<MultiIdx> = if n <= 4 {
        all_multi_indices(n)
    } else {
        perms.iter().map(|p| (1..=n).map(|i| p.apply(i)).collect()).collect()
    };
    for m in rows {
        let comp = antisymmetrized_component(n, v, &m, &perms);
        charge_terms(base + s.num_terms() + comp.num_terms())?;
        let mut sorted = m.clone();
        sorted.sort_unstable();
        if sorted == id {
            // Distinct entries over 1..=n: m is the image tuple of a unique
            // permutation, and the row it sits at is that permutation's
            // inverse applied to the identity row (same sign either way).
            let pi = Perm::from_images(m.clone());
            if comp != s.scale(&RatFunc::from_int(pi.sign())) {
                return Err(Error::Extraction(format!(
                    "component at row {m:?} is not sign * base"
                )));
            }
        } else if !comp.is_zero() {
            return Err(Error::Extraction(format!(
                "nonzero component at non-permutation row {m:?}"
            )));
        }
    }
    Ok(s)
}

/// Column extraction from a materialized operator: antisymmetrize the
/// column at the identity basis vector, check the alternating structure,
/// return the proportionality scalar.
pub fn extract_sdet(x: &TOp) -> Result<AlgElem> {
    let n = x.n();
    extract_from_column(n, &x.apply_basis(&identity_idx(n)))
}

/// The closed-formula route: one monomial template per `(σ, η)` pair, free
/// indices summed over `1..=n`.
pub fn sdet_theorem(n: usize) -> AlgElem {
    assert!(n >= 1);
    let mut out = AlgElem::zero();
    for eta in enum_in(n) {
        let d = eta_data(&eta);
        // Free index names: the positions that are not cycle minima. Name
        // t is consumed on the row side at position t and on the column
        // side at the position the cycle maps onto t.
        let free: Vec<usize> = (1..=n).filter(|k| !d.gmin.contains(k)).collect();
        for sigma in s_eta(&eta) {
            let coeff = alpha_sigma_eta(&sigma, &eta, n);
            // Enumerate all assignments of the free names.
            let mut assign = vec![1usize; free.len()];
            loop {
                let value_of = |name: usize| {
                    assign[free.binary_search(&name).expect("free name")]
                };
                let mut word: Word = Vec::with_capacity(n);
                for k in 1..=n {
                    let p = if d.gmin.contains(&k) {
                        sigma.apply(eta.at(k))
                    } else {
                        value_of(k)
                    };
                    let q = if d.gmax.contains(&k) {
                        eta.at(k)
                    } else {
                        value_of(d.gamma.apply(k))
                    };
                    word.push(crate::freealg::GenSym { p, q, shift: k - 1 });
                }
                out.add_term(word, &coeff);
                // Odometer over the assignments.
                let mut pos = free.len();
                loop {
                    if pos == 0 {
                        break;
                    }
                    if assign[pos - 1] < n {
                        assign[pos - 1] += 1;
                        for a in assign.iter_mut().skip(pos) {
                            *a = 1;
                        }
                        break;
                    }
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
            }
        }
    }
    out
}

/// Compute the determinant along one route.
pub fn sdet(n: usize, path: Path) -> Result<SdetResult> {
    if n < 1 {
        return Err(Error::Range(format!("n = {n} must be at least 1")));
    }
    let value = match path {
        Path::Thm => sdet_theorem(n),
        _ => {
            let ts = term_sum(n, path);
            extract_from_column(n, &ts.column(&identity_idx(n))?)?
        }
    };
    charge_terms(value.num_terms())?;
    let result = SdetResult { n, path, value };
    result.validate()?;
    Ok(result)
}

/// One line of a cross-check report.
#[derive(Clone, Debug)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    /// First differing entry on failure.
    pub detail: Option<String>,
}

/// Outcome of [`cross_check`]: assertions as pass/fail lines plus purely
/// informational notes that are recorded without being asserted.
#[derive(Clone, Debug)]
pub struct CrossReport {
    pub n: usize,
    pub lines: Vec<CheckLine>,
    pub info: Vec<String>,
}

impl CrossReport {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }
}

fn first_column_diff(lhs: &Column, rhs: &Column, col: &MultiIdx) -> String {
    let rows: std::collections::BTreeSet<&MultiIdx> = lhs.keys().chain(rhs.keys()).collect();
    for r in rows {
        let a = lhs.get(r).cloned().unwrap_or_else(AlgElem::zero);
        let b = rhs.get(r).cloned().unwrap_or_else(AlgElem::zero);
        if a != b {
            let d = a.sub(&b);
            let sample = d
                .terms()
                .next()
                .map(|(w, c)| {
                    let mut one = AlgElem::zero();
                    one.add_term(w.clone(), c);
                    crate::emit::to_text(&one)
                })
                .unwrap_or_default();
            return format!("col {col:?} row {r:?}: difference starts with {sample}");
        }
    }
    String::new()
}

/// Optional memory guard, read once from `SDET_MEM_CAP_MB`. The heavy
/// computations charge their live term counts against it (at a rough
/// per-term byte estimate), so an n = 5 stress run degrades into a clean
/// budget error instead of an OOM kill.
static MEM_CAP: std::sync::OnceLock<Option<usize>> = std::sync::OnceLock::new();

fn mem_cap_bytes() -> Option<usize> {
    *MEM_CAP.get_or_init(|| {
        std::env::var("SDET_MEM_CAP_MB")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .map(|mb| mb.saturating_mul(1 << 20))
    })
}

fn charge_terms(live_terms: usize) -> Result<()> {
    // Word, coefficient, and map overhead for one stored term; measured on
    // n = 5 columns, where coefficient denominators reach degree ~10.
    const BYTES_PER_TERM: usize = 512;
    if let Some(cap) = mem_cap_bytes() {
        let used = live_terms.saturating_mul(BYTES_PER_TERM);
        if used > cap {
            return Err(Error::Budget(format!(
                "~{} MB of live terms exceed SDET_MEM_CAP_MB ({} MB)",
                used >> 20,
                cap >> 20
            )));
        }
    }
    Ok(())
}

fn column_terms(c: &Column) -> usize {
    c.values().map(|v| v.num_terms()).sum()
}

/// Mutually verify every route at the given size.
///
/// Asserted, as report lines: the four expansion operators and the `Π`-form
/// pipeline are equal entry-by-entry; the `R`-matrix pipeline agrees after
/// antisymmetrization; and all seven extracted determinants are identical.
/// Operator-level comparisons run for `n <= 4` (for larger `n` only the
/// extracted values are compared — noted in `info`). The operators are
/// streamed column by column, so nothing quadratic in `n^n` is ever stored.
///
/// Recorded in `info`, never asserted: whether the antisymmetrized pipeline
/// equals the determinant times the full antisymmetrizer as a complete
/// matrix identity (for `n <= 3`). That stronger identity needs relations
/// between the generators, so in the free algebra it is informational only.
pub fn cross_check(n: usize) -> Result<CrossReport> {
    if n < 1 {
        return Err(Error::Range(format!("n = {n} must be at least 1")));
    }
    let mut lines = Vec::new();
    let mut info = Vec::new();

    let streamed: [(Path, TermSum); 5] = [
        (Path::Pi, term_sum(n, Path::Pi)),
        (Path::Bp, term_sum(n, Path::Bp)),
        (Path::Qa, term_sum(n, Path::Qa)),
        (Path::Qb, term_sum(n, Path::Qb)),
        (Path::Qc, term_sum(n, Path::Qc)),
    ];
    let def_sum = term_sum(n, Path::Def);

    if n <= 4 {
        // (a) operator equality among the Π-form and the four expansions,
        // compared as adjacent pairs; (b) the R-matrix pipeline agrees with
        // the Π-form after antisymmetrization.
        let mut pair_fail: [Option<String>; 4] = [None, None, None, None];
        let mut anti_fail: Option<String> = None;
        for c in all_multi_indices(n) {
            let cols: Vec<Column> = streamed
                .iter()
                .map(|(_, ts)| ts.column(&c))
                .collect::<Result<_>>()?;
            let def_col = def_sum.column(&c)?;
            let live = cols.iter().map(column_terms).sum::<usize>() + column_terms(&def_col);
            charge_terms(live)?;
            for (k, fail) in pair_fail.iter_mut().enumerate() {
                if fail.is_none() && cols[k] != cols[k + 1] {
                    *fail = Some(first_column_diff(&cols[k], &cols[k + 1], &c));
                }
            }
            if anti_fail.is_none() {
                let lhs = antisym_collapse(&def_col);
                let rhs = antisym_collapse(&cols[0]);
                if lhs != rhs {
                    anti_fail = Some(first_column_diff(&lhs, &rhs, &c));
                }
            }
        }
        for (k, fail) in pair_fail.into_iter().enumerate() {
            lines.push(CheckLine {
                name: format!(
                    "operator {} == {}",
                    streamed[k].0.as_str(),
                    streamed[k + 1].0.as_str()
                ),
                pass: fail.is_none(),
                detail: fail,
            });
        }
        lines.push(CheckLine {
            name: "antisymmetrized def == antisymmetrized pi".into(),
            pass: anti_fail.is_none(),
            detail: anti_fail,
        });
    } else {
        info.push(format!(
            "n = {n}: operator-level comparisons skipped (quadratic in n^n); extracted values compared on all routes"
        ));
    }

    // (c) all seven extracted determinants agree.
    let mut values: Vec<(Path, AlgElem)> = Vec::new();
    for path in Path::ALL {
        values.push((path, sdet(n, path)?.value));
    }
    charge_terms(values.iter().map(|(_, v)| v.num_terms()).sum())?;
    for pair in values.windows(2) {
        let (pa, va) = &pair[0];
        let (pb, vb) = &pair[1];
        let pass = va == vb;
        let detail = if pass {
            None
        } else {
            let d = va.sub(vb);
            Some(format!(
                "values differ in {} terms; first: {}",
                d.num_terms(),
                d.terms()
                    .next()
                    .map(|(w, c)| {
                        let mut one = AlgElem::zero();
                        one.add_term(w.clone(), c);
                        crate::emit::to_text(&one)
                    })
                    .unwrap_or_default()
            ))
        };
        lines.push(CheckLine {
            name: format!("sdet {} == {}", pa.as_str(), pb.as_str()),
            pass,
            detail,
        });
    }

    if n <= 3 {
        // Informational: the full matrix identity in the free algebra.
        let s = &values.iter().find(|(p, _)| *p == Path::Def).unwrap().1;
        let lhs = antisym(n, AntiKind::Full).mul(&bracket_pi(n));
        let mut rhs = TOp::zero(n);
        for (c, col) in antisym(n, AntiKind::Full).columns() {
            for (r, val) in col {
                rhs.add_entry(r.clone(), c.clone(), &s.mul(val));
            }
        }
        let holds = lhs == rhs;
        info.push(format!(
            "full matrix identity (antisymmetrizer * pipeline == sdet * antisymmetrizer) \
             in the free algebra at n = {n}: {holds} (informational, not asserted)"
        ));
    }

    Ok(CrossReport { n, lines, info })
}

/// Exact operator check that the primed antisymmetrizer absorbs the
/// `R`-chain out of slot `k` into the corrected factor:
/// `A' R_{k,k+1}...R_{k,n} = A' Π_k = Π_k A'`. Streamed column by column,
/// so the products are never materialized (this is what makes n = 5
/// feasible).
pub fn check_chain_absorption(n: usize, k: usize) -> bool {
    assert!(n >= 2 && k >= 1 && k < n, "need 1 <= k < n");
    let prime = antisym(n, AntiKind::Prime(n - k));
    let pi = pi_k(k, n);
    let chain: Vec<TOp> = (k + 1..=n).map(|j| r_op(k, j, &r_arg(k, j), n)).collect();
    for c in all_multi_indices(n) {
        let mut basis = Column::new();
        basis.insert(c.clone(), AlgElem::one());
        let mut va = basis.clone();
        for f in chain.iter().rev() {
            va = f.apply_column(&va);
        }
        va = prime.apply_column(&va);
        let vb = prime.apply_column(&pi.apply_column(&basis));
        let vc = pi.apply_column(&prime.apply_column(&basis));
        if va != vb || vb != vc {
            return false;
        }
    }
    true
}

/// Substitute the diagonal scalar specialization `b_p^q(u-s) -> δ_pq ε_p`,
/// where `ε_p = +1` for `p <= n - l` and `-1` above. The result is a plain
/// rational function.
pub fn specialize_diag(s: &AlgElem, n: usize, l: usize) -> Result<RatFunc> {
    if l > n {
        return Err(Error::Range(format!("l = {l} outside 0..={n}")));
    }
    check_word_shape(s, n)?;
    let m = n - l;
    let mut out = RatFunc::zero();
    for (word, coeff) in s.terms() {
        let mut sign = 1i64;
        let mut keep = true;
        for g in word {
            if g.p != g.q {
                keep = false;
                break;
            }
            if g.p > m {
                sign = -sign;
            }
        }
        if keep {
            out = &out + &(coeff * &RatFunc::from_int(sign));
        }
    }
    Ok(out)
}

/// Limit of the diagonal specialization as `u -> ∞`: the ratio of leading
/// coefficients when numerator and denominator degrees match, `0` when the
/// numerator's degree is lower. A higher numerator degree cannot arise
/// from a determinant and is reported as improper.
pub fn leading(s: &AlgElem, n: usize, l: usize) -> Result<Rational> {
    let r = specialize_diag(s, n, l)?;
    if r.is_zero() {
        return Ok(rat(0));
    }
    let dn = r.num().degree().unwrap();
    let dd = r.den().degree().unwrap();
    match dn.cmp(&dd) {
        std::cmp::Ordering::Greater => Err(Error::Improper(format!(
            "specialized value {r} diverges at infinity"
        ))),
        std::cmp::Ordering::Less => Ok(rat(0)),
        std::cmp::Ordering::Equal => Ok(r.num().lc() / r.den().lc()),
    }
}

/// Series form of a determinant: expand every letter into mode symbols and
/// every coefficient at `u = ∞`, truncating at `t^order`.
pub fn series_coeffs(s: &AlgElem, n: usize, order: usize) -> Result<SeriesElem> {
    check_word_shape(s, n)?;
    expand_series(s, order)
}

/// The `ε`-substitution on mode symbols: the order-zero mode of `b_p^q`
/// becomes `δ_pq ε_p`, higher modes stay; used to check the series route
/// against [`leading`].
pub fn eval_modes_diag(series: &SeriesElem, n: usize, l: usize) -> Vec<Rational> {
    assert!(l <= n, "l = {l} outside 0..={n}");
    let m = n - l;
    series.eval_modes(|p, q, r| {
        if r == 0 {
            if p == q {
                if p <= m { rat(1) } else { rat(-1) }
            } else {
                rat(0)
            }
        } else {
            // Higher modes are killed only for the order-zero comparison;
            // callers look at the t^0 entry where they never contribute.
            rat(0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::GenSym;
    use crate::permcomb::IdxTuple;

    fn golden_n2() -> AlgElem {
        // b_1^1(u) b_2^2(u-1)
        //   - (2u-2)/(2u-1) b_2^1(u) b_1^2(u-1)
        //   + 1/(2u-1) b_2^2(u) b_2^2(u-1)
        let w = |a: (usize, usize), b: (usize, usize)| {
            vec![
                GenSym { p: a.0, q: a.1, shift: 0 },
                GenSym { p: b.0, q: b.1, shift: 1 },
            ]
        };
        let mut out = AlgElem::zero();
        out.add_term(w((1, 1), (2, 2)), &RatFunc::one());
        out.add_term(
            w((2, 1), (1, 2)),
            &RatFunc::new(UPoly::from_ints(&[2, -2]), UPoly::linear(2, -1)),
        );
        out.add_term(w((2, 2), (2, 2)), &RatFunc::inv_poly(UPoly::linear(2, -1)));
        out
    }

    #[test]
    fn trivial_size_one() {
        for path in Path::ALL {
            let r = sdet(1, path).unwrap();
            assert_eq!(r.value, AlgElem::sym(1, 1, 0));
        }
    }

    #[test]
    fn bracket_base_cases() {
        assert_eq!(bracket(2, 1), b_slot(1, 0, 2));
        // n = k = 2: B_1(u) R_12(2u-1) B_2(u-1)
        let expect = b_slot(1, 0, 2)
            .mul(&r_op(1, 2, &UPoly::linear(2, -1), 2))
            .mul(&b_slot(2, 1, 2));
        assert_eq!(bracket(2, 2), expect);
        // Π-form at n = 2 spelled out.
        let pi_form = b_slot(1, 0, 2).mul(&pi_k(1, 2)).mul(&b_slot(2, 1, 2));
        assert_eq!(bracket_pi(2), pi_form);
    }

    #[test]
    fn expansions_equal_pipeline_as_operators() {
        for n in 1..=3usize {
            let pi = bracket_pi(n);
            assert_eq!(expand_bp(n), pi, "bp at n = {n}");
            assert_eq!(expand_qa(n), pi, "qa at n = {n}");
            assert_eq!(expand_qb(n), pi, "qb at n = {n}");
            assert_eq!(expand_qc(n), pi, "qc at n = {n}");
        }
    }

    #[test]
    fn antisymmetrized_pipelines_agree() {
        for n in 2..=3usize {
            let a = antisym(n, AntiKind::Full);
            assert_eq!(a.mul(&bracket(n, n)), a.mul(&bracket_pi(n)));
        }
    }

    #[test]
    fn extraction_on_identity() {
        let s = extract_sdet(&TOp::identity(2)).unwrap();
        assert_eq!(s, AlgElem::one());
    }

    #[test]
    fn n2_value_on_every_path() {
        let golden = golden_n2();
        for path in Path::ALL {
            let r = sdet(2, path).unwrap();
            assert_eq!(r.value, golden, "path {path}");
        }
    }

    #[test]
    fn theorem_n3_spot_coefficients() {
        let v = sdet_theorem(3);
        let w = |a: (usize, usize), b: (usize, usize), c: (usize, usize)| {
            vec![
                GenSym { p: a.0, q: a.1, shift: 0 },
                GenSym { p: b.0, q: b.1, shift: 1 },
                GenSym { p: c.0, q: c.1, shift: 2 },
            ]
        };
        assert!(v.coeff_of(&w((1, 1), (2, 2), (3, 3))).is_one());
        // Coefficient -(2u-3)/(2u-2) of b_2^1(u) b_1^2(u-1) b_3^3(u-2).
        let c = v.coeff_of(&w((2, 1), (1, 2), (3, 3)));
        assert_eq!(c, RatFunc::new(UPoly::from_ints(&[3, -2]), UPoly::from_ints(&[-2, 2])));
    }

    #[test]
    fn qb_single_tuple_contribution() {
        // The (2,2) tuple at n = 2 contributes, after extraction data,
        // 1/(2u-1) (b_2^1(u) b_1^2(u-1) + b_2^2(u) b_2^2(u-1)) with the
        // front factor carrying the swap; check the streamed column of
        // that single term against the structure.
        let eta = IdxTuple::new(vec![2, 2]);
        let coeff = alpha_kappa(&eta, 2);
        let front = perm_op(&p_eta(&eta).inverse());
        let term = front
            .mul(&b_slot(2, 0, 2))
            .mul(&b_slot(2, 1, 2))
            .scale(&coeff);
        let s = extract_sdet(&term).unwrap();
        let mut expect = AlgElem::zero();
        let inv = RatFunc::inv_poly(UPoly::linear(2, -1));
        expect.add_term(
            vec![GenSym { p: 2, q: 1, shift: 0 }, GenSym { p: 1, q: 2, shift: 1 }],
            &inv,
        );
        expect.add_term(
            vec![GenSym { p: 2, q: 2, shift: 0 }, GenSym { p: 2, q: 2, shift: 1 }],
            &inv,
        );
        assert_eq!(s, expect);
    }

    #[test]
    fn cross_check_small_sizes() {
        for n in 1..=3 {
            let report = cross_check(n).unwrap();
            assert!(report.all_pass(), "n = {n}: {:?}", report.lines);
        }
    }

    #[test]
    fn full_matrix_identity_is_recorded_not_asserted() {
        let report = cross_check(2).unwrap();
        let note = report
            .info
            .iter()
            .find(|s| s.contains("full matrix identity"))
            .expect("informational note present");
        // In the free algebra the full identity genuinely fails at n = 2;
        // the report records that without failing.
        assert!(note.contains("false"));
        assert!(report.all_pass());
    }

    #[test]
    fn specialization_and_leading() {
        let s = sdet(2, Path::Thm).unwrap().value;
        for l in 0..=2usize {
            let lim = leading(&s, 2, l).unwrap();
            let expect = if l % 2 == 0 { rat(1) } else { rat(-1) };
            assert_eq!(lim, expect, "l = {l}");
        }
        assert!(matches!(
            specialize_diag(&s, 2, 5),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn series_route_matches_leading() {
        for l in 0..=2usize {
            let s = sdet(2, Path::Thm).unwrap().value;
            let series = series_coeffs(&s, 2, 1).unwrap();
            let vals = eval_modes_diag(&series, 2, l);
            let expect = if l % 2 == 0 { rat(1) } else { rat(-1) };
            assert_eq!(vals[0], expect, "l = {l}");
        }
    }

    #[test]
    fn word_shape_is_validated() {
        let mut bad = AlgElem::zero();
        bad.add_term(vec![GenSym { p: 1, q: 1, shift: 1 }], &RatFunc::one());
        assert!(check_word_shape(&bad, 1).is_err());
        let r = sdet(3, Path::Pi).unwrap();
        assert!(r.validate().is_ok());
    }
}
