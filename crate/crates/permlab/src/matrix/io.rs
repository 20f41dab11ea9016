//! Matrix text format shared by the library and the command line: a
//! `matrix <n> <field-tag>` header, then `n` rows of `n` whitespace-separated
//! scalar literals.  `#` starts a comment anywhere on a line; blank lines are
//! skipped.  Parse errors carry 1-indexed line numbers.
//!
//! Reading is permissive about the declared tag: each entry is parsed in the
//! requested field first, then through the exact embedding ladder (rational
//! into anything, Gaussian into cyclotomic or float, cyclotomic literals into
//! float), so a `rational` file loads into any field while a narrowing read
//! fails only on entries that are actually not representable.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::scalar::{CyclotomicNumber, Scalar};

/// Field declared in a matrix file header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldTag {
    Rational,
    Gaussian,
    Cyclotomic(u32),
    Float,
}

impl FieldTag {
    pub fn parse(text: &str) -> Option<FieldTag> {
        match text {
            "rational" => Some(FieldTag::Rational),
            "gaussian" => Some(FieldTag::Gaussian),
            "cyc40" => Some(FieldTag::Cyclotomic(40)),
            "float" => Some(FieldTag::Float),
            _ => {
                let n: u32 = text.strip_prefix("cycN:")?.parse().ok()?;
                (n > 0).then_some(FieldTag::Cyclotomic(n))
            }
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "rational"),
            FieldTag::Gaussian => write!(f, "gaussian"),
            FieldTag::Cyclotomic(40) => write!(f, "cyc40"),
            FieldTag::Cyclotomic(n) => write!(f, "cycN:{n}"),
            FieldTag::Float => write!(f, "float"),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Lines that carry content, with their 1-indexed numbers; comments stripped.
fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let line = line.trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// Dimension and declared field from the header, without touching entries.
pub fn peek_header(text: &str) -> Result<(usize, FieldTag)> {
    let (line, header) = significant_lines(text)
        .next()
        .ok_or_else(|| parse_err(1, "empty file; expected `matrix <n> <field-tag>`"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("matrix") {
        return Err(parse_err(line, "expected header `matrix <n> <field-tag>`"));
    }
    let n: usize = words
        .next()
        .and_then(|w| w.parse().ok())
        .ok_or_else(|| parse_err(line, "bad dimension in header"))?;
    let tag_text = words
        .next()
        .ok_or_else(|| parse_err(line, "missing field tag in header"))?;
    let tag = FieldTag::parse(tag_text).ok_or_else(|| {
        parse_err(
            line,
            format!("unknown field tag `{tag_text}`; expected rational, gaussian, cyc40, cycN:<N>, or float"),
        )
    })?;
    if let Some(extra) = words.next() {
        return Err(parse_err(line, format!("unexpected `{extra}` after field tag")));
    }
    Ok((n, tag))
}

/// One literal in the requested field, falling back to the exact embedding
/// ladder for literals of smaller fields.
fn parse_entry<T: Scalar>(token: &str, prec: usize) -> Result<T> {
    match T::parse(token, prec) {
        Ok(v) => Ok(v),
        Err(first) => {
            match CyclotomicNumber::parse(token, prec).and_then(|c| T::from_cyclotomic(&c)) {
                Ok(v) => Ok(v),
                // a value-level failure (e.g. not representable) is more
                // informative than the original syntax complaint
                Err(Error::ScalarLiteral { .. }) => Err(first),
                Err(second) => Err(second),
            }
        }
    }
}

pub fn parse_matrix<T: Scalar>(text: &str, prec: usize) -> Result<SquareMatrix<T>> {
    let (n, _tag) = peek_header(text)?;
    let mut lines = significant_lines(text).skip(1);
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n);
    for _ in 0..n {
        let Some((line_no, row_text)) = lines.next() else {
            let last = text.lines().count().max(1);
            return Err(parse_err(
                last,
                format!("expected {n} rows, file ended after {}", rows.len()),
            ));
        };
        let tokens: Vec<&str> = row_text.split_whitespace().collect();
        if tokens.len() != n {
            return Err(parse_err(
                line_no,
                format!("expected {n} entries, found {}", tokens.len()),
            ));
        }
        let mut row = Vec::with_capacity(n);
        for token in tokens {
            row.push(parse_entry(token, prec).map_err(|e| parse_err(line_no, e.to_string()))?);
        }
        rows.push(row);
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(parse_err(line_no, "trailing content after matrix rows"));
    }
    SquareMatrix::from_rows(rows)
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// The most specific tag covering every entry: cyclotomic matrices whose
/// entries all lie in a smaller field get the smaller field's tag.
pub fn field_tag_for<T: Scalar>(m: &SquareMatrix<T>) -> FieldTag {
    match T::NAME {
        "rational" => FieldTag::Rational,
        "gaussian" => FieldTag::Gaussian,
        "float" => FieldTag::Float,
        _ => {
            let mut l: u32 = 1;
            for i in 0..m.size() {
                for j in 0..m.size() {
                    l = lcm(l, m.at(i, j).conductor());
                }
            }
            match l {
                1 => FieldTag::Rational,
                // conductor-4 values print as cyc(4)[..] literals
                2 | 4 => FieldTag::Cyclotomic(4),
                n => FieldTag::Cyclotomic(n),
            }
        }
    }
}

pub fn render_matrix<T: Scalar>(m: &SquareMatrix<T>) -> String {
    let mut out = format!("matrix {} {}\n", m.size(), field_tag_for(m));
    for i in 0..m.size() {
        let row: Vec<String> = (0..m.size()).map(|j| m.at(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_matrix_file<T: Scalar>(path: impl AsRef<Path>, prec: usize) -> Result<SquareMatrix<T>> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix(&text, prec)
}

pub fn write_matrix_file<T: Scalar>(path: impl AsRef<Path>, m: &SquareMatrix<T>) -> Result<()> {
    std::fs::write(path, render_matrix(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{builtin_drury, builtin_shchesnovich};
    use crate::scalar::{rat, ApproxComplex, GaussianRational, Rational, DEFAULT_PRECISION};

    #[test]
    fn rational_round_trip() {
        let m = SquareMatrix::from_fn(3, |i, j| {
            rat(i as i64 * 3 - j as i64, 1 + (i + 2 * j) as i64)
        });
        let text = render_matrix(&m);
        assert!(text.starts_with("matrix 3 rational\n"), "{text}");
        let back: SquareMatrix<Rational> = parse_matrix(&text, 0).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn gaussian_round_trip() {
        let m = builtin_shchesnovich().matrix;
        let text = render_matrix(&m);
        assert!(text.starts_with("matrix 5 gaussian\n"), "{text}");
        let back: SquareMatrix<GaussianRational> = parse_matrix(&text, 0).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn drury_round_trips_at_conductor_40() {
        let m = builtin_drury().matrix;
        let text = render_matrix(&m);
        assert!(text.starts_with("matrix 7 cyc40\n"), "{text}");
        let back: SquareMatrix<CyclotomicNumber> = parse_matrix(&text, 0).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# correlation example\n\nmatrix 2 rational # header\n1 1/2\n\n1/2 1 # last row\n# trailing banner\n";
        let m: SquareMatrix<Rational> = parse_matrix(text, 0).unwrap();
        assert_eq!(*m.at(0, 1), rat(1, 2));
    }

    #[test]
    fn errors_carry_one_indexed_lines() {
        let bad_entry = "matrix 2 rational\n1 2\n3 oops\n";
        match parse_matrix::<Rational>(bad_entry, 0).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected error {e}"),
        }

        let bad_count = "# banner\nmatrix 2 rational\n1 2 3\n";
        match parse_matrix::<Rational>(bad_count, 0).unwrap_err() {
            Error::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("expected 2 entries"), "{msg}");
            }
            e => panic!("unexpected error {e}"),
        }

        let no_header = "1 2\n3 4\n";
        match parse_matrix::<Rational>(no_header, 0).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            e => panic!("unexpected error {e}"),
        }

        let truncated = "matrix 3 rational\n1 2 3\n";
        assert!(matches!(
            parse_matrix::<Rational>(truncated, 0),
            Err(Error::Parse { line: 2, .. })
        ));

        let trailing = "matrix 1 rational\n5\n6\n";
        assert!(matches!(
            parse_matrix::<Rational>(trailing, 0),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn unknown_tag_is_rejected_with_the_valid_list() {
        match parse_matrix::<Rational>("matrix 2 octonion\n", 0).unwrap_err() {
            Error::Parse { line, msg } => {
                assert_eq!(line, 1);
                assert!(msg.contains("cycN:<N>"), "{msg}");
            }
            e => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn embedding_ladder_reads_smaller_fields() {
        let rational_file = "matrix 2 rational\n1 1/2\n1/2 1\n";
        let as_float: SquareMatrix<ApproxComplex> =
            parse_matrix(rational_file, DEFAULT_PRECISION).unwrap();
        assert!((as_float.at(0, 1).re_f64() - 0.5).abs() < 1e-15);

        let gaussian_file = "matrix 2 gaussian\n1 1/2+3/4*i\n1/2-3/4*i 1\n";
        let as_cyc: SquareMatrix<CyclotomicNumber> = parse_matrix(gaussian_file, 0).unwrap();
        assert_eq!(
            *as_cyc.at(0, 1),
            CyclotomicNumber::from_gaussian(&GaussianRational::new(rat(1, 2), rat(3, 4)))
        );

        // narrowing reads succeed exactly when every entry is representable
        let complex_entry = "matrix 1 gaussian\n2+3*i\n";
        assert!(parse_matrix::<Rational>(complex_entry, 0).is_err());
        let rational_cyc = SquareMatrix::from_fn(2, |i, j| {
            CyclotomicNumber::from_rational(&rat((i + j) as i64, 3))
        });
        let text = render_matrix(&rational_cyc);
        assert!(text.starts_with("matrix 2 rational\n"), "{text}");
        let back: SquareMatrix<Rational> = parse_matrix(&text, 0).unwrap();
        assert_eq!(*back.at(1, 1), rat(2, 3));
    }

    #[test]
    fn float_files_parse_components_at_requested_precision() {
        let text = "matrix 2 float\n1 0.25+0.5*i\n0.25-0.5*i 1e0\n";
        let m: SquareMatrix<ApproxComplex> = parse_matrix(text, DEFAULT_PRECISION).unwrap();
        assert!((m.at(0, 1).im_f64() - 0.5).abs() < 1e-15);
        assert!((m.at(1, 1).re_f64() - 1.0).abs() < 1e-15);
        let rendered = render_matrix(&m);
        assert!(rendered.starts_with("matrix 2 float\n"), "{rendered}");
        let back: SquareMatrix<ApproxComplex> = parse_matrix(&rendered, DEFAULT_PRECISION).unwrap();
        assert_eq!(back.at(0, 1).im_f64(), m.at(0, 1).im_f64());
    }
}
