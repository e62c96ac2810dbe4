//! Deterministic serialization of determinant values: canonical term text
//! with an exact parser, a JSON form whose integers are decimal strings, a
//! LaTeX table layout, and structural comparison against golden files.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::Value;

use crate::freealg::{AlgElem, GenSym, Word};
use crate::scalars::{RatFunc, Rational, UPoly};
use crate::sdetcore::{check_word_shape, Path, SdetResult};
use crate::{Error, Result};

fn letter_text(g: &GenSym) -> String {
    if g.shift == 0 {
        format!("b[{},{}](u)", g.p, g.q)
    } else {
        format!("b[{},{}](u-{})", g.p, g.q, g.shift)
    }
}

fn word_text(word: &Word) -> String {
    word.iter().map(letter_text).collect::<Vec<_>>().join(" * ")
}

/// Canonical text: one term per line, `coeff * b[p,q](u-s) * ...`, terms in
/// word order. The zero element renders as `0`.
pub fn to_text(value: &AlgElem) -> String {
    if value.is_zero() {
        return "0\n".into();
    }
    let mut out = String::new();
    for (word, coeff) in value.terms() {
        out.push_str(&coeff.to_string());
        for g in word {
            out.push_str(" * ");
            out.push_str(&letter_text(g));
        }
        out.push('\n');
    }
    out
}

/// Parse the canonical text form. Blank lines and `#` comments are
/// ignored; errors carry the 1-based line and column.
pub fn from_text(s: &str) -> Result<AlgElem> {
    let mut out = AlgElem::zero();
    for (i, raw) in s.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, coeff) = parse_term(line, i + 1)?;
        out.add_term(word, &coeff);
    }
    Ok(out)
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn parse_term(line: &str, lineno: usize) -> Result<(Word, RatFunc)> {
    let mut chunks: Vec<(usize, &str)> = Vec::new();
    let mut start = 0;
    for (pos, _) in line.match_indices(" * ") {
        if pos >= start {
            chunks.push((start, &line[start..pos]));
            start = pos + 3;
        }
    }
    chunks.push((start, &line[start..]));
    let (c0, coeff_text) = chunks[0];
    let coeff = parse_ratfunc(coeff_text, lineno, c0 + 1)?;
    let mut word = Word::new();
    for &(col, chunk) in &chunks[1..] {
        word.push(parse_letter(chunk, lineno, col + 1)?);
    }
    Ok((word, coeff))
}

fn parse_letter(s: &str, line: usize, col: usize) -> Result<GenSym> {
    let fail = |off: usize, msg: &str| parse_err(line, col + off, msg);
    let rest = s
        .strip_prefix("b[")
        .ok_or_else(|| fail(0, "expected `b[`"))?;
    let comma = rest.find(',').ok_or_else(|| fail(2, "expected `,`"))?;
    let p: usize = rest[..comma]
        .parse()
        .map_err(|_| fail(2, "bad row index"))?;
    let rest2 = &rest[comma + 1..];
    let close = rest2.find(']').ok_or_else(|| fail(comma + 3, "expected `]`"))?;
    let q: usize = rest2[..close]
        .parse()
        .map_err(|_| fail(comma + 3, "bad column index"))?;
    let tail = &rest2[close + 1..];
    let arg_off = 2 + comma + 1 + close + 1;
    let inner = tail
        .strip_prefix("(u")
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| fail(arg_off, "expected `(u)` or `(u-k)`"))?;
    let shift = if inner.is_empty() {
        0
    } else {
        inner
            .strip_prefix('-')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| fail(arg_off + 2, "bad shift"))?
    };
    if p == 0 || q == 0 {
        return Err(fail(1, "indices are 1-based"));
    }
    Ok(GenSym { p, q, shift })
}

fn parse_ratfunc(s: &str, line: usize, col: usize) -> Result<RatFunc> {
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    let mut slash = None;
    for (i, b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(parse_err(line, col + i, "unbalanced `)`"));
                }
            }
            b'/' if depth == 0 => {
                if slash.is_some() {
                    return Err(parse_err(line, col + i, "second `/`"));
                }
                slash = Some(i);
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(parse_err(line, col, "unbalanced `(`"));
    }
    let (num_s, den_s) = match slash {
        Some(i) => (&s[..i], Some((i + 1, &s[i + 1..]))),
        None => (s, None),
    };
    let num = parse_poly_group(num_s, line, col)?;
    let den = match den_s {
        Some((off, d)) => parse_poly_group(d, line, col + off)?,
        None => UPoly::one(),
    };
    if den.is_zero() {
        return Err(parse_err(line, col, "zero denominator"));
    }
    Ok(RatFunc::new(num, den))
}

/// A polynomial, optionally wrapped in one outer pair of parentheses.
fn parse_poly_group(s: &str, line: usize, col: usize) -> Result<UPoly> {
    if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        // Only strip if the outer pair matches (depth stays positive).
        let mut depth = 1i32;
        let mut outer = true;
        for b in inner.bytes() {
            match b {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        outer = false;
                        break;
                    }
                }
                _ => {}
            }
        }
        if outer {
            return parse_poly(inner, line, col + 1);
        }
    }
    parse_poly(s, line, col)
}

/// `[sign] mono { (+|-) mono }` where `mono` is `INT`, `INT*u[^k]`, or
/// `u[^k]`.
fn parse_poly(s: &str, line: usize, col: usize) -> Result<UPoly> {
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut acc: Vec<(usize, Rational)> = Vec::new();
    let fail = |i: usize, msg: &str| parse_err(line, col + i, msg);
    if bytes.is_empty() {
        return Err(fail(0, "empty coefficient"));
    }
    loop {
        let mut negative = false;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            negative = bytes[i] == b'-';
            i += 1;
        }
        let mut coeff: Option<BigInt> = None;
        if i < bytes.len() && bytes[i].is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            coeff = Some(
                BigInt::from_str(&s[start..i]).map_err(|_| fail(start, "bad integer"))?,
            );
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
                if i >= bytes.len() || bytes[i] != b'u' {
                    return Err(fail(i, "expected `u`"));
                }
            } else {
                // Pure integer monomial.
                let c = coeff.take().unwrap();
                let c = if negative { -c } else { c };
                acc.push((0, Rational::from_integer(c)));
                if i == bytes.len() {
                    break;
                }
                if bytes[i] == b'+' || bytes[i] == b'-' {
                    continue;
                }
                return Err(fail(i, "expected `+` or `-`"));
            }
        }
        if i >= bytes.len() || bytes[i] != b'u' {
            return Err(fail(i, "expected monomial"));
        }
        i += 1;
        let mut deg = 1usize;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            deg = s[start..i].parse().map_err(|_| fail(start, "bad exponent"))?;
        }
        let c = coeff.unwrap_or_else(|| BigInt::from(1));
        let c = if negative { -c } else { c };
        acc.push((deg, Rational::from_integer(c)));
        if i == bytes.len() {
            break;
        }
        if bytes[i] != b'+' && bytes[i] != b'-' {
            return Err(fail(i, "expected `+` or `-`"));
        }
    }
    let top = acc.iter().map(|(d, _)| *d).max().unwrap_or(0);
    let mut coeffs = vec![Rational::from_integer(BigInt::from(0)); top + 1];
    for (d, c) in acc {
        coeffs[d] += c;
    }
    Ok(UPoly::from_coeffs(coeffs))
}

fn int_strings(p: &UPoly) -> Vec<Value> {
    p.coeffs()
        .iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            Value::String(c.to_integer().to_string())
        })
        .collect()
}

/// JSON form. Coefficients are the canonical integer pair, lowest degree
/// first, each integer a decimal string so no magnitude can overflow.
pub fn to_json(r: &SdetResult) -> Result<Vec<u8>> {
    r.validate()?;
    let mut terms = Vec::new();
    for (word, coeff) in r.value.terms() {
        let (num, den) = coeff.int_pair();
        let word_arr: Vec<Value> = word
            .iter()
            .map(|g| {
                Value::Array(vec![
                    Value::from(g.p as u64),
                    Value::from(g.q as u64),
                    Value::from(g.shift as u64),
                ])
            })
            .collect();
        terms.push(serde_json::json!({
            "coeff": { "num": int_strings(&num), "den": int_strings(&den) },
            "word": word_arr,
        }));
    }
    let doc = serde_json::json!({
        "n": r.n as u64,
        "path": r.path.as_str(),
        "terms": terms,
    });
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("serializing a Value");
    bytes.push(b'\n');
    Ok(bytes)
}

fn schema_err(msg: &str) -> Error {
    Error::Shape(format!("json: {msg}"))
}

fn poly_from_strings(v: &Value, what: &str) -> Result<UPoly> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema_err(&format!("{what} is not an array")))?;
    let mut coeffs = Vec::with_capacity(arr.len());
    for s in arr {
        let s = s
            .as_str()
            .ok_or_else(|| schema_err(&format!("{what} entry is not a string")))?;
        let i = BigInt::from_str(s).map_err(|_| schema_err(&format!("bad integer in {what}")))?;
        coeffs.push(Rational::from_integer(i));
    }
    Ok(UPoly::from_coeffs(coeffs))
}

pub fn from_json(bytes: &[u8]) -> Result<SdetResult> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        line: e.line(),
        col: e.column(),
        msg: e.to_string(),
    })?;
    let n = v["n"].as_u64().ok_or_else(|| schema_err("missing n"))? as usize;
    let path = Path::parse(
        v["path"].as_str().ok_or_else(|| schema_err("missing path"))?,
    )?;
    let terms = v["terms"]
        .as_array()
        .ok_or_else(|| schema_err("missing terms"))?;
    let mut value = AlgElem::zero();
    for t in terms {
        let num = poly_from_strings(&t["coeff"]["num"], "num")?;
        let den = poly_from_strings(&t["coeff"]["den"], "den")?;
        if den.is_zero() {
            return Err(schema_err("zero denominator"));
        }
        let word_arr = t["word"]
            .as_array()
            .ok_or_else(|| schema_err("missing word"))?;
        let mut word = Word::new();
        for g in word_arr {
            let triple = g
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| schema_err("letter is not a [p,q,s] triple"))?;
            let get = |k: usize| {
                triple[k]
                    .as_u64()
                    .ok_or_else(|| schema_err("letter entry is not an integer"))
            };
            word.push(GenSym {
                p: get(0)? as usize,
                q: get(1)? as usize,
                shift: get(2)? as usize,
            });
        }
        value.add_term(word, &RatFunc::new(num, den));
    }
    let r = SdetResult { n, path, value };
    r.validate()?;
    Ok(r)
}

fn latex_upoly(p: &UPoly) -> String {
    let d = match p.degree() {
        None => return "0".into(),
        Some(d) => d,
    };
    let mut out = String::new();
    for k in (0..=d).rev() {
        let c = p.coeff(k);
        if c == Rational::from_integer(BigInt::from(0)) {
            continue;
        }
        debug_assert!(c.is_integer());
        let i = c.to_integer();
        let mag = i.magnitude().to_string();
        if out.is_empty() {
            if i.sign() == num_bigint::Sign::Minus {
                out.push('-');
            }
        } else if i.sign() == num_bigint::Sign::Minus {
            out.push('-');
        } else {
            out.push('+');
        }
        if k == 0 || mag != "1" {
            out.push_str(&mag);
        }
        if k >= 1 {
            out.push('u');
        }
        if k >= 2 {
            out.push_str(&format!("^{{{k}}}"));
        }
    }
    out
}

/// The coefficient in LaTeX, split into a sign and a magnitude. `1`
/// renders as an empty magnitude so it can be dropped before a bracket.
fn latex_coeff(c: &RatFunc) -> (bool, String) {
    let (num, den) = c.int_pair();
    let negative = *num.lc() < Rational::from_integer(BigInt::from(0));
    let num = if negative { num.scale(&crate::scalars::rat(-1)) } else { num };
    let den_is_one = den.degree() == Some(0) && den.lc().is_integer() && den.lc().to_integer() == BigInt::from(1);
    let text = if den_is_one {
        if num.degree() == Some(0) && num.lc().to_integer() == BigInt::from(1) {
            String::new()
        } else if num.monomial_count() >= 2 {
            format!("\\left({}\\right)", latex_upoly(&num))
        } else {
            latex_upoly(&num)
        }
    } else {
        format!("\\frac{{{}}}{{{}}}", latex_upoly(&num), latex_upoly(&den))
    };
    (negative, text)
}

fn latex_bracket(word: &Word) -> String {
    let upper: Vec<String> = word.iter().map(|g| g.q.to_string()).collect();
    let lower: Vec<String> = word.iter().map(|g| g.p.to_string()).collect();
    format!(
        "\\left|\\begin{{matrix}}{}\\\\{}\\end{{matrix}}\\right|",
        upper.join("&"),
        lower.join("&")
    )
}

/// LaTeX rendering: every word becomes a two-row table (upper row the
/// column indices, lower row the row indices), and terms sharing a
/// coefficient are grouped, in order of first occurrence.
pub fn to_latex(value: &AlgElem, n: usize) -> Result<String> {
    check_word_shape(value, n)?;
    let mut groups: Vec<(RatFunc, Vec<String>)> = Vec::new();
    for (word, coeff) in value.terms() {
        let bracket = latex_bracket(word);
        match groups.iter_mut().find(|(c, _)| c == coeff) {
            Some((_, list)) => list.push(bracket),
            None => groups.push((coeff.clone(), vec![bracket])),
        }
    }
    let mut out = String::new();
    for (k, (coeff, brackets)) in groups.iter().enumerate() {
        let (negative, text) = latex_coeff(coeff);
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push('\n');
            out.push_str(if negative { "- " } else { "+ " });
        }
        out.push_str(text.as_str());
        if brackets.len() == 1 {
            out.push_str(&brackets[0]);
        } else {
            out.push_str("\\left(");
            out.push_str(&brackets.join(" + "));
            out.push_str("\\right)");
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    Ok(out)
}

/// A parsed golden file: the size header plus the transcribed value.
#[derive(Clone, Debug)]
pub struct GoldenFile {
    pub n: usize,
    pub value: AlgElem,
}

/// Parse golden-file text: `#` comments and blank lines, one `n: <size>`
/// header, then canonical term lines.
pub fn parse_golden(text: &str) -> Result<GoldenFile> {
    let mut n: Option<usize> = None;
    let mut value = AlgElem::zero();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n:") {
            if n.is_some() {
                return Err(parse_err(i + 1, 1, "duplicate `n:` header"));
            }
            n = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| parse_err(i + 1, 4, "bad size"))?,
            );
            continue;
        }
        let (word, coeff) = parse_term(line, i + 1)?;
        value.add_term(word, &coeff);
    }
    let n = n.ok_or_else(|| parse_err(1, 1, "missing `n:` header"))?;
    check_word_shape(&value, n)?;
    Ok(GoldenFile { n, value })
}

#[derive(Clone, Debug)]
pub struct GoldenReport {
    pub n: usize,
    pub matched: bool,
    /// First differing word with both coefficients, on mismatch.
    pub detail: Option<String>,
}

/// Compare a computed value against golden text.
pub fn golden_compare_text(s: &AlgElem, text: &str) -> Result<GoldenReport> {
    let g = parse_golden(text)?;
    let words: BTreeSet<&Word> = s
        .terms()
        .map(|(w, _)| w)
        .chain(g.value.terms().map(|(w, _)| w))
        .collect();
    let mut detail = None;
    for w in words {
        let computed = s.coeff_of(w);
        let golden = g.value.coeff_of(w);
        if computed != golden {
            detail = Some(format!(
                "word {}: computed {computed}, golden {golden}",
                word_text(w)
            ));
            break;
        }
    }
    Ok(GoldenReport { n: g.n, matched: detail.is_none(), detail })
}

/// Compare a computed value against a golden file on disk.
pub fn golden_compare(s: &AlgElem, path: &std::path::Path) -> Result<GoldenReport> {
    let text = std::fs::read_to_string(path)?;
    golden_compare_text(s, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdetcore::{sdet, Path};

    #[test]
    fn text_of_trivial_size() {
        let r = sdet(1, Path::Thm).unwrap();
        assert_eq!(to_text(&r.value), "1 * b[1,1](u)\n");
    }

    #[test]
    fn text_of_middle_term() {
        let r = sdet(2, Path::Pi).unwrap();
        let text = to_text(&r.value);
        assert!(text.contains("(-2*u+2)/(2*u-1) * b[2,1](u) * b[1,2](u-1)\n"));
    }

    #[test]
    fn text_roundtrips() {
        for n in 1..=3usize {
            let r = sdet(n, Path::Thm).unwrap();
            assert_eq!(from_text(&to_text(&r.value)).unwrap(), r.value);
        }
        assert!(from_text("0\n").unwrap().is_zero());
        assert_eq!(from_text(&to_text(&AlgElem::zero())).unwrap(), AlgElem::zero());
    }

    #[test]
    fn parser_reports_positions() {
        match from_text("1 * b[1,1](u)\n1 * b[1,2](v)\n") {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 2);
                assert!(col > 4);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            from_text("(2*u/(2)"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(from_text("u^"), Err(Error::Parse { .. })));
    }

    #[test]
    fn parser_handles_every_coefficient_shape() {
        for s in [
            "1", "-1", "1/2", "-1/2", "2*u", "(-2*u+2)/(2*u-1)", "(u-2)/(u-1)",
            "1/(4*u^2-10*u+6)", "(-u+2)/(2*u^2-5*u+3)",
        ] {
            let c = parse_ratfunc(s, 1, 1).unwrap();
            assert_eq!(c.to_string(), s, "canonical display survives parsing");
        }
    }

    #[test]
    fn json_roundtrips_and_is_deterministic() {
        for n in 1..=3usize {
            let r = sdet(n, Path::Qb).unwrap();
            let bytes = to_json(&r).unwrap();
            let back = from_json(&bytes).unwrap();
            assert_eq!(back.n, r.n);
            assert_eq!(back.path, r.path);
            assert_eq!(back.value, r.value);
            assert_eq!(bytes, to_json(&r).unwrap());
        }
    }

    #[test]
    fn json_schema_of_trivial_size() {
        let r = sdet(1, Path::Def).unwrap();
        let v: Value = serde_json::from_slice(&to_json(&r).unwrap()).unwrap();
        assert_eq!(v["n"], 1);
        assert_eq!(v["path"], "def");
        assert_eq!(v["terms"][0]["word"], serde_json::json!([[1, 1, 0]]));
        assert_eq!(v["terms"][0]["coeff"]["num"], serde_json::json!(["1"]));
        assert_eq!(v["terms"][0]["coeff"]["den"], serde_json::json!(["1"]));
    }

    #[test]
    fn json_rejects_malformed_documents() {
        assert!(matches!(from_json(b"{"), Err(Error::Parse { .. })));
        assert!(matches!(
            from_json(br#"{"n": 1, "path": "zz", "terms": []}"#),
            Err(Error::Range(_))
        ));
        assert!(matches!(
            from_json(br#"{"n": 1, "terms": []}"#),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn latex_single_words() {
        let mut one = AlgElem::zero();
        one.add_term(
            vec![
                GenSym { p: 1, q: 1, shift: 0 },
                GenSym { p: 2, q: 2, shift: 1 },
                GenSym { p: 3, q: 3, shift: 2 },
            ],
            &RatFunc::one(),
        );
        assert_eq!(
            to_latex(&one, 3).unwrap(),
            "\\left|\\begin{matrix}1&2&3\\\\1&2&3\\end{matrix}\\right|"
        );
        let r = sdet(1, Path::Thm).unwrap();
        assert_eq!(
            to_latex(&r.value, 1).unwrap(),
            "\\left|\\begin{matrix}1\\\\1\\end{matrix}\\right|"
        );
    }

    #[test]
    fn latex_groups_by_coefficient() {
        let r = sdet(2, Path::Thm).unwrap();
        let tex = to_latex(&r.value, 2).unwrap();
        assert!(tex.starts_with("\\left|\\begin{matrix}1&2\\\\1&2\\end{matrix}\\right|"));
        assert!(tex.contains("- \\frac{2u-2}{2u-1}\\left|\\begin{matrix}1&2\\\\2&1\\end{matrix}\\right|"));
        assert!(tex.contains("+ \\frac{1}{2u-1}\\left|\\begin{matrix}2&2\\\\2&2\\end{matrix}\\right|"));
        // Shared coefficients collapse into one group.
        let n3 = sdet(3, Path::Thm).unwrap();
        let tex3 = to_latex(&n3.value, 3).unwrap();
        assert!(tex3.contains("\\right| + \\left|"));
        assert!(to_latex(&r.value, 3).is_err());
    }

    #[test]
    fn golden_text_comparison() {
        let r = sdet(2, Path::Qc).unwrap();
        let good = "# transcription\nn: 2\n1 * b[1,1](u) * b[2,2](u-1)\n\
                    (-2*u+2)/(2*u-1) * b[2,1](u) * b[1,2](u-1)\n\
                    1/(2*u-1) * b[2,2](u) * b[2,2](u-1)\n";
        let report = golden_compare_text(&r.value, good).unwrap();
        assert!(report.matched, "{:?}", report.detail);
        assert_eq!(report.n, 2);

        // One flipped sign must be located at its word.
        let bad = good.replace("(-2*u+2)/(2*u-1)", "(2*u-2)/(2*u-1)");
        let report = golden_compare_text(&r.value, &bad).unwrap();
        assert!(!report.matched);
        let detail = report.detail.unwrap();
        assert!(detail.contains("b[2,1](u) * b[1,2](u-1)"), "{detail}");

        assert!(golden_compare_text(&r.value, "1 * b[1,1](u)\n").is_err());
    }
}
