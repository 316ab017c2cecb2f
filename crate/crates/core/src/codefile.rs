//! Text format for generator matrices.
//!
//! ```text
//! # comment
//! q k n [modulus]
//! k lines of n integers in [0, q)
//! ```
//!
//! The modulus is the base-p digit encoding of the monic polynomial defining
//! GF(p^m); it may be omitted for prime fields and for fields with a default
//! modulus. Several codes are separated by blank lines.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gfield::{Elem, Field};
use crate::gfmatrix::Matrix;
use crate::lincode::GeneratorMatrix;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn numbers(line: usize, text: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| parse_err(line, format!("expected a non-negative integer, found {:?}", t))))
        .collect()
}

/// Parses every code in `text`.
pub fn parse_codes(text: &str) -> Result<Vec<GeneratorMatrix>> {
    let mut fields: HashMap<(u64, Option<u64>), Arc<Field>> = HashMap::new();
    let mut codes = Vec::new();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#'))
        .peekable();
    loop {
        while lines.next_if(|(_, l)| l.is_empty()).is_some() {}
        let Some((hline, header)) = lines.next() else {
            break;
        };
        let h = numbers(hline, header)?;
        let (q, k, n, modulus) = match h[..] {
            [q, k, n] => (q, k, n, None),
            [q, k, n, m] => (q, k, n, Some(m)),
            _ => return Err(parse_err(hline, "header must be \"q k n [modulus]\"")),
        };
        if k == 0 || n == 0 {
            return Err(parse_err(hline, "k and n must be positive"));
        }
        let field = match fields.get(&(q, modulus)) {
            Some(f) => f.clone(),
            None => {
                let f = match modulus {
                    Some(m) => Field::with_modulus(q, m),
                    None => Field::new(q),
                }
                .map_err(|e| parse_err(hline, e.to_string()))?;
                fields.insert((q, modulus), f.clone());
                f
            }
        };
        let mut rows = Vec::with_capacity(k as usize);
        for r in 0..k {
            let Some((line, text)) = lines.next().filter(|(_, l)| !l.is_empty()) else {
                return Err(parse_err(hline, format!("expected {} rows, found {}", k, r)));
            };
            let row = numbers(line, text)?;
            if row.len() as u64 != n {
                return Err(parse_err(line, format!("expected {} entries, found {}", n, row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= q) {
                return Err(parse_err(line, format!("entry {} is not in [0, {})", x, q)));
            }
            rows.push(row.into_iter().map(|x| x as Elem).collect::<Vec<_>>());
        }
        if let Some(&(line, _)) = lines.peek().filter(|(_, l)| !l.is_empty()) {
            return Err(parse_err(line, format!("expected a blank line after {} rows", k)));
        }
        let m = Matrix::from_rows(&field, &rows).map_err(|e| parse_err(hline, e.to_string()))?;
        let g = GeneratorMatrix::new(m).map_err(|e| parse_err(hline, e.to_string()))?;
        codes.push(g);
    }
    Ok(codes)
}

/// Parses exactly one code.
pub fn parse_code(text: &str) -> Result<GeneratorMatrix> {
    let mut codes = parse_codes(text)?;
    match codes.len() {
        1 => Ok(codes.pop().expect("one code")),
        n => Err(parse_err(0, format!("expected one code, found {}", n))),
    }
}

/// Writes one code, header included, without a trailing blank line.
pub fn write_code(out: &mut String, g: &GeneratorMatrix) {
    let f = g.field();
    write!(out, "{} {} {}", f.q(), g.k(), g.n()).expect("string write");
    if let Some(m) = f.modulus_encoded() {
        write!(out, " {}", m).expect("string write");
    }
    out.push('\n');
    for r in 0..g.k() {
        let row: Vec<String> = g.matrix().row(r).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

/// Serializes codes separated by blank lines; [`parse_codes`] reads it back.
pub fn emit_codes(codes: &[GeneratorMatrix]) -> String {
    let mut out = String::new();
    for (i, g) in codes.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_code(&mut out, g);
    }
    out
}
