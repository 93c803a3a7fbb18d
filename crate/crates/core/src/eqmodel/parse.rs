//! Text form of an [`EquationSpec`].
//!
//! ```text
//! equation  := "D2y" ( sign term )* "=" poly
//! sign      := "+" | "-"
//! term      := drag | source
//! drag      := "(" number "/x" ")" "*" "Dy"
//! source    := [ number "*" ] [ "x^" integer "*" ] func
//! func      := "y" [ "^" integer ] | "exp(" [ sign ] [ number "*" ] "y" ")" | "1"
//! poly      := [ sign ] item ( sign item )*
//! item      := number [ "*" "x^" integer ] | "x^" integer
//! ```
//!
//! Whitespace is ignored. Every `x^j` means `x^{jα}`, so one string serves
//! any order. A bare number in the source list is a constant term, and a
//! bare `x` stands for `x^1`. Positions in errors are byte offsets.

use thiserror::Error;

use super::{EquationSpec, SourceKind, SourceTerm};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("parse error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unsupported term `{name}` at position {position}")]
    Unsupported { position: usize, name: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. } | ParseError::Unsupported { position, .. } => {
                *position
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eq => "`=`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(position: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        position,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'=' => Tok::Eq,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lit = &text[start..i];
                let v: f64 = lit
                    .parse()
                    .map_err(|_| syntax(start, format!("malformed number `{lit}`")))?;
                out.push((Tok::Num(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expected(&self, what: &str) -> ParseError {
        syntax(
            self.pos(),
            format!("expected {what}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.expected(what))
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == name => {
                self.bump();
                Ok(())
            }
            _ => Err(self.expected(&format!("`{name}`"))),
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        match *self.peek() {
            Tok::Num(v) => {
                self.bump();
                Ok(v)
            }
            _ => Err(self.expected("a number")),
        }
    }

    fn integer(&mut self) -> Result<u32, ParseError> {
        let pos = self.pos();
        let v = self.number()?;
        if v.fract() != 0.0 || v < 0.0 || v > f64::from(u32::MAX) {
            return Err(syntax(
                pos,
                format!("expected a non-negative integer, found {v}"),
            ));
        }
        Ok(v as u32)
    }

    fn sign(&mut self) -> Option<f64> {
        match self.peek() {
            Tok::Plus => {
                self.bump();
                Some(1.0)
            }
            Tok::Minus => {
                self.bump();
                Some(-1.0)
            }
            _ => None,
        }
    }

    /// `x`, `x^j`; the leading `x` has already been seen by the caller.
    fn x_power(&mut self) -> Result<usize, ParseError> {
        self.expect_ident("x")?;
        if *self.peek() == Tok::Caret {
            self.bump();
            Ok(self.integer()? as usize)
        } else {
            Ok(1)
        }
    }

    fn func(&mut self) -> Result<SourceKind, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) if name == "y" => {
                self.bump();
                if *self.peek() == Tok::Caret {
                    self.bump();
                    Ok(SourceKind::Power(self.integer()?))
                } else {
                    Ok(SourceKind::Power(1))
                }
            }
            Tok::Ident(name) if name == "exp" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let mut lambda = self.sign().unwrap_or(1.0);
                if let Tok::Num(v) = *self.peek() {
                    self.bump();
                    self.expect(Tok::Star, "`*`")?;
                    lambda *= v;
                }
                self.expect_ident("y")?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(SourceKind::Exp(lambda))
            }
            Tok::Num(1.0) => {
                self.bump();
                Ok(SourceKind::Power(0))
            }
            Tok::Ident(name) => Err(ParseError::Unsupported {
                position: pos,
                name,
            }),
            _ => Err(self.expected("`y`, `y^n`, `exp(-y)` or `1`")),
        }
    }

    fn drag(&mut self) -> Result<f64, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let k = self.number()?;
        self.expect(Tok::Slash, "`/`")?;
        self.expect_ident("x")?;
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Star, "`*`")?;
        self.expect_ident("Dy")?;
        Ok(k)
    }

    fn source(&mut self, sign: f64) -> Result<SourceTerm, ParseError> {
        let mut c = sign;
        if let Tok::Num(v) = *self.peek() {
            let save = self.at;
            self.bump();
            if *self.peek() == Tok::Star {
                self.bump();
                c *= v;
            } else {
                // A bare number is a constant term; `1` goes through `func`.
                self.at = save;
                if v != 1.0 {
                    self.bump();
                    return Ok(SourceTerm::new(c * v, 0, SourceKind::Power(0)));
                }
            }
        }
        let mut s = 0;
        if self.is_ident("x") {
            s = self.x_power()?;
            self.expect(Tok::Star, "`*` after the x power")?;
        }
        let kind = self.func()?;
        Ok(SourceTerm::new(c, s, kind))
    }

    fn poly(&mut self) -> Result<Vec<f64>, ParseError> {
        let mut rhs: Vec<f64> = Vec::new();
        let mut sign = self.sign().unwrap_or(1.0);
        loop {
            let (c, j) = match self.peek().clone() {
                Tok::Num(v) => {
                    self.bump();
                    if *self.peek() == Tok::Star {
                        self.bump();
                        (v, self.x_power()?)
                    } else {
                        (v, 0)
                    }
                }
                Tok::Ident(name) if name == "x" => (1.0, self.x_power()?),
                Tok::Ident(name) => {
                    return Err(ParseError::Unsupported {
                        position: self.pos(),
                        name,
                    })
                }
                _ => return Err(self.expected("a number or `x^j`")),
            };
            if rhs.len() <= j {
                rhs.resize(j + 1, 0.0);
            }
            rhs[j] += sign * c;
            match self.sign() {
                Some(s) => sign = s,
                None => break,
            }
        }
        while rhs.last() == Some(&0.0) {
            rhs.pop();
        }
        Ok(rhs)
    }

    fn equation(&mut self) -> Result<(f64, Vec<SourceTerm>, Vec<f64>), ParseError> {
        self.expect_ident("D2y")?;
        let mut k = 0.0;
        let mut terms = Vec::new();
        loop {
            match self.peek() {
                Tok::Eq => break,
                Tok::Plus | Tok::Minus => {
                    let sign = self.sign().unwrap_or(1.0);
                    if *self.peek() == Tok::LParen {
                        k += sign * self.drag()?;
                    } else {
                        terms.push(self.source(sign)?);
                    }
                }
                _ => return Err(self.expected("`+`, `-` or `=`")),
            }
        }
        self.expect(Tok::Eq, "`=`")?;
        let rhs = self.poly()?;
        if *self.peek() != Tok::End {
            return Err(self.expected("end of input"));
        }
        Ok((k, terms, rhs))
    }
}

/// Parses the equation text; `alpha`, `y0` and `dy0` are supplied separately.
/// The result is not validated.
pub fn parse_equation(
    text: &str,
    alpha: f64,
    y0: f64,
    dy0: f64,
) -> Result<EquationSpec, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let (k, terms, rhs) = p.equation()?;
    Ok(EquationSpec {
        alpha,
        k,
        terms,
        rhs,
        y0,
        dy0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use SourceKind::*;

    fn parse(text: &str) -> EquationSpec {
        parse_equation(text, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn classic_forms() {
        let s = parse("D2y + (2/x)*Dy + y = 0");
        assert_eq!(s.k, 2.0);
        assert_eq!(s.terms, vec![SourceTerm::new(1.0, 0, Power(1))]);
        assert!(s.rhs.is_empty());

        let s = parse("D2y + (2/x)*Dy + y^3 = 6 + x^6");
        assert_eq!(s.terms, vec![SourceTerm::new(1.0, 0, Power(3))]);
        assert_eq!(s.rhs, vec![6.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);

        let s = parse("D2y + (2/x)*Dy - exp(-y) = 0");
        assert_eq!(s.terms, vec![SourceTerm::new(-1.0, 0, Exp(-1.0))]);
    }

    #[test]
    fn shifted_and_scaled_terms() {
        let s = parse("D2y+(2/x)*Dy-8*x^2*y-6*y=0");
        assert_eq!(
            s.terms,
            vec![
                SourceTerm::new(-8.0, 2, Power(1)),
                SourceTerm::new(-6.0, 0, Power(1))
            ]
        );
        let s = parse("D2y + (2/x)*Dy + 4*x^2*y^2 = 0");
        assert_eq!(s.terms, vec![SourceTerm::new(4.0, 2, Power(2))]);
        let s = parse("D2y + (2/x)*Dy + y = 6 + 12*x^1 + x^2 + x^3");
        assert_eq!(s.rhs, vec![6.0, 12.0, 1.0, 1.0]);
        let s = parse("D2y + (2/x)*Dy + y = 6 + 12*x + x^2 - 0.5*x^3");
        assert_eq!(s.rhs, vec![6.0, 12.0, 1.0, -0.5]);
    }

    #[test]
    fn constants_and_exp_rates() {
        assert_eq!(
            parse("D2y + (2/x)*Dy + 1 = 0").terms,
            vec![SourceTerm::new(1.0, 0, Power(0))]
        );
        assert_eq!(
            parse("D2y + (2/x)*Dy + y^0 = 0").terms,
            vec![SourceTerm::new(1.0, 0, Power(0))]
        );
        assert_eq!(
            parse("D2y - 3 = 0").terms,
            vec![SourceTerm::new(-3.0, 0, Power(0))]
        );
        assert_eq!(
            parse("D2y + 2*x^1*1 = 0").terms,
            vec![SourceTerm::new(2.0, 1, Power(0))]
        );
        assert_eq!(
            parse("D2y + 0.5*exp(2*y) = 0").terms,
            vec![SourceTerm::new(0.5, 0, Exp(2.0))]
        );
        assert_eq!(parse("D2y + exp(y) = -1").rhs, vec![-1.0]);
        let s = parse("D2y = 1e-3");
        assert_eq!(s.k, 0.0);
        assert_eq!(s.rhs, vec![1e-3]);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_equation("D2y +", 1.0, 1.0, 0.0).unwrap_err();
        assert_eq!(e.position(), 5);
        assert!(e.to_string().contains("position 5"), "{e}");

        let e = parse_equation("D2y + sin(y) = 0", 1.0, 1.0, 0.0).unwrap_err();
        assert_eq!(
            e,
            ParseError::Unsupported {
                position: 6,
                name: "sin".into()
            }
        );

        let e = parse_equation("D2y + y^2.5 = 0", 1.0, 1.0, 0.0).unwrap_err();
        assert_eq!(e.position(), 8);

        assert!(parse_equation("D2y + y = 0 0", 1.0, 1.0, 0.0).is_err());
        assert!(parse_equation("Dy + y = 0", 1.0, 1.0, 0.0).is_err());
        assert!(parse_equation("D2y + y # 0", 1.0, 1.0, 0.0).is_err());
        assert!(parse_equation("D2y + (2/y)*Dy = 0", 1.0, 1.0, 0.0).is_err());
    }
}
