//! Line-oriented polynomial file format.
//!
//! ```text
//! poly v1 mod 97
//! # either one dense line ...
//! dense 3 0 5
//! # ... or term lines with strictly increasing exponents
//! term 5 2
//! ```

use std::fmt::Write as _;

use super::{DensePoly, Poly, SparsePoly};
use crate::error::{Error, Result};
use crate::ring::{PrimeField, Ring};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses a polynomial file. Dense input is normalized (trailing zeros
/// dropped); coefficients must be canonical residues.
pub fn parse(src: &str) -> Result<(PrimeField, Poly)> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let field = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["poly", "v1", "mod", p] => {
            let p: u64 = p.parse().map_err(|_| perr(hline, format!("bad modulus `{p}`")))?;
            PrimeField::new(p).map_err(|e| perr(hline, e.to_string()))?
        }
        _ => return Err(perr(hline, "expected header `poly v1 mod <p>`")),
    };
    let p = field.modulus();
    let num = |line: usize, tok: &str| -> Result<u64> {
        tok.parse::<u64>().map_err(|_| perr(line, format!("bad integer `{tok}`")))
    };
    let coeff = |line: usize, tok: &str| -> Result<u64> {
        let c = num(line, tok)?;
        if c >= p {
            return Err(perr(line, format!("coefficient {c} is not a residue mod {p}")));
        }
        Ok(c)
    };

    let mut dense: Option<Vec<u64>> = None;
    let mut terms: Vec<(u64, u64)> = Vec::new();
    for (line, text) in lines {
        let mut toks = text.split_whitespace();
        match toks.next() {
            Some("dense") => {
                if dense.is_some() || !terms.is_empty() {
                    return Err(perr(line, "`dense` must be the only body line"));
                }
                dense = Some(toks.map(|t| coeff(line, t)).collect::<Result<_>>()?);
            }
            Some("term") => {
                if dense.is_some() {
                    return Err(perr(line, "cannot mix `term` and `dense` lines"));
                }
                let (Some(c), Some(e), None) = (toks.next(), toks.next(), toks.next()) else {
                    return Err(perr(line, "expected `term <coeff> <exp>`"));
                };
                let (c, e) = (coeff(line, c)?, num(line, e)?);
                if c == 0 {
                    return Err(perr(line, "term coefficient must be nonzero"));
                }
                if terms.last().is_some_and(|&(_, prev)| prev >= e) {
                    return Err(perr(line, "term exponents must be strictly increasing"));
                }
                terms.push((c, e));
            }
            Some(other) => return Err(perr(line, format!("unknown directive `{other}`"))),
            None => unreachable!("blank lines are filtered"),
        }
    }
    let poly = match dense {
        Some(c) => Poly::Dense(DensePoly::new(c)),
        None => Poly::Sparse(SparsePoly::from_sorted_unchecked(terms)),
    };
    Ok((field, poly))
}

pub fn serialize(field: &PrimeField, poly: &Poly) -> String {
    let mut out = format!("poly v1 mod {}\n", field.modulus());
    match poly {
        Poly::Dense(d) => {
            out.push_str("dense");
            for c in d.coeffs() {
                write!(out, " {c}").unwrap();
            }
            out.push('\n');
        }
        Poly::Sparse(s) => {
            for (c, e) in s.terms() {
                writeln!(out, "term {c} {e}").unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_dense_and_sparse() {
        let (f, p) = parse("poly v1 mod 97\n# comment\n\ndense 3 0 5 0 0  # trailing\n").unwrap();
        assert_eq!(f, PrimeField::new(97).unwrap());
        assert_eq!(p, Poly::Dense(DensePoly::new(vec![3, 0, 5])));

        let (_, p) = parse("poly v1 mod 97\nterm 5 2\nterm 1 100\n").unwrap();
        assert_eq!(p, Poly::Sparse(SparsePoly::new(vec![(5, 2), (1, 100)]).unwrap()));

        let (_, p) = parse("poly v1 mod 7\n").unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "",
            "poly v2 mod 97\n",
            "poly v1 mod 91\n",
            "poly v1 mod 97\ndense 97\n",
            "poly v1 mod 97\nterm 1 5\nterm 1 5\n",
            "poly v1 mod 97\nterm 0 5\n",
            "poly v1 mod 97\nterm 1\n",
            "poly v1 mod 97\ndense 1\nterm 1 3\n",
            "poly v1 mod 97\nterm 1 3\ndense 1\n",
            "poly v1 mod 97\ncoeffs 1 2\n",
        ] {
            assert!(matches!(parse(bad), Err(Error::Parse { .. })), "{bad:?}");
        }
    }

    #[test]
    fn line_numbers_reported() {
        match parse("poly v1 mod 97\n\n# x\nterm 1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn serialize_format() {
        let f = PrimeField::new(97).unwrap();
        assert_eq!(serialize(&f, &Poly::Dense(DensePoly::new(vec![1, 2]))), "poly v1 mod 97\ndense 1 2\n");
        let s = SparsePoly::new(vec![(5, 2)]).unwrap();
        assert_eq!(serialize(&f, &Poly::Sparse(s)), "poly v1 mod 97\nterm 5 2\n");
    }
}
