//! Two text forms for polynomials, both round-tripping with the printers:
//! a numeric list "c0,c1,...,cn" (ascending degree) and a human form like
//! "T^2+2T+1" (descending degree).

use super::{FieldCtx, FieldPolyError, Poly};

/// "c0,c1,...,cn" with the zero polynomial printed as "0".
pub fn format_numeric(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    p.coeffs()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Human form in descending powers: "T^2+2T+1", "T", "2", "0".
pub fn format_human(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for (i, &c) in p.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "T".to_string(),
            (1, c) => format!("{c}T"),
            (i, 1) => format!("T^{i}"),
            (i, c) => format!("{c}T^{i}"),
        };
        terms.push(t);
    }
    terms.join("+")
}

/// Parses either text form; the human form is recognized by the presence of
/// 'T' or 't'.  Coefficients are reduced mod q, and '-' is accepted in the
/// human form.
pub fn parse_poly(ctx: &FieldCtx, s: &str) -> Result<Poly, FieldPolyError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(FieldPolyError::Parse(s.to_string(), "empty input".into()));
    }
    if t.contains('T') || t.contains('t') {
        parse_human(ctx, t).map_err(|m| FieldPolyError::Parse(s.to_string(), m))
    } else {
        parse_numeric(ctx, t).map_err(|m| FieldPolyError::Parse(s.to_string(), m))
    }
}

fn parse_numeric(ctx: &FieldCtx, s: &str) -> Result<Poly, String> {
    let mut coeffs = Vec::new();
    for part in s.split(',') {
        let v: u64 = part
            .trim()
            .parse()
            .map_err(|_| format!("bad coefficient {:?}", part.trim()))?;
        coeffs.push(v % ctx.q());
    }
    Ok(Poly::from_raw(coeffs))
}

fn parse_human(ctx: &FieldCtx, s: &str) -> Result<Poly, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coeffs: Vec<u64> = Vec::new();
    let mut add_term = |coeff: u64, exp: usize, negative: bool| {
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        let c = coeff % ctx.q();
        coeffs[exp] = if negative {
            ctx.sub(coeffs[exp], c)
        } else {
            ctx.add(coeffs[exp], c)
        };
    };

    // Split into sign-prefixed terms.
    let bytes = compact.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let negative = match bytes[i] {
            b'+' => {
                i += 1;
                false
            }
            b'-' => {
                i += 1;
                true
            }
            _ => false,
        };
        let start = i;
        while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            i += 1;
        }
        let term = &compact[start..i];
        if term.is_empty() {
            return Err("dangling sign".into());
        }
        let (coeff, exp) = parse_term(term)?;
        add_term(coeff, exp, negative);
    }
    Ok(Poly::from_raw(coeffs))
}

/// One term: digits, "T", "T^k", "cT", "cT^k", with an optional '*'.
fn parse_term(term: &str) -> Result<(u64, usize), String> {
    let tpos = term.find(['T', 't']);
    match tpos {
        None => {
            let c: u64 = term
                .parse()
                .map_err(|_| format!("bad constant term {term:?}"))?;
            Ok((c, 0))
        }
        Some(pos) => {
            let head = term[..pos].trim_end_matches('*');
            let coeff = if head.is_empty() {
                1
            } else {
                head.parse()
                    .map_err(|_| format!("bad coefficient in {term:?}"))?
            };
            let tail = &term[pos + 1..];
            let exp = if tail.is_empty() {
                1
            } else if let Some(e) = tail.strip_prefix('^') {
                e.parse().map_err(|_| format!("bad exponent in {term:?}"))?
            } else {
                return Err(format!("unexpected {tail:?} after T"));
            };
            Ok((coeff, exp))
        }
    }
}
