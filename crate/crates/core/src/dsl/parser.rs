use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::{DslError, DslErrorKind, Span};

/// Largest exponent literal accepted in a polynomial.
pub const MAX_EXPONENT: u64 = 4096;

pub fn parse(src: &str) -> Result<SourceFile, DslError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let mut statements = Vec::new();
    while p.peek() != &Tok::Eof {
        statements.push(p.statement()?);
    }
    Ok(SourceFile { statements })
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

fn syntax(msg: impl Into<String>, span: Span) -> DslError {
    DslError::new(DslErrorKind::Syntax(msg.into()), span)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, DslError> {
        if self.peek() == &tok {
            Ok(self.bump().span)
        } else {
            Err(syntax(
                format!("expected `{}`, found {}", tok.text(), self.peek().describe()),
                self.span(),
            ))
        }
    }

    fn name(&mut self, what: &str) -> Result<Name, DslError> {
        match self.peek().clone() {
            Tok::Ident(text) => {
                let span = self.bump().span;
                Ok(Name { text, span })
            }
            other => Err(syntax(format!("expected {what}, found {}", other.describe()), self.span())),
        }
    }

    fn int(&mut self, what: &str) -> Result<(u64, Span), DslError> {
        match *self.peek() {
            Tok::Int(v) => Ok((v, self.bump().span)),
            ref other => Err(syntax(format!("expected {what}, found {}", other.describe()), self.span())),
        }
    }

    fn statement(&mut self) -> Result<Stmt, DslError> {
        let start = self.span();
        match self.peek() {
            Tok::Prime => {
                self.bump();
                let (v, span) = self.int("a prime")?;
                if crate::polycore::PrimeField::new(v).is_err() {
                    return Err(DslError::new(DslErrorKind::NotPrime(v), span));
                }
                Ok(Stmt::Prime(v, start.to(self.prev_span())))
            }
            Tok::Ring => self.ring(start).map(Stmt::Ring),
            Tok::Map => self.map(start).map(Stmt::Map),
            Tok::Check => self.check(start).map(Stmt::Check),
            other => Err(syntax(
                format!("expected `prime`, `ring`, `map` or `check`, found {}", other.describe()),
                start,
            )),
        }
    }

    fn ring(&mut self, start: Span) -> Result<RingDecl, DslError> {
        self.bump();
        let name = self.name("a ring name")?;
        self.expect(Tok::Eq)?;
        if self.eat(&Tok::Invert) {
            let var = self.name("a variable")?;
            self.expect(Tok::In)?;
            let base = self.name("a ring name")?;
            return Ok(RingDecl {
                name,
                body: RingBody::Invert { var, base },
                span: start.to(self.prev_span()),
            });
        }
        let base = match self.peek() {
            Tok::Ident(_) => Some(self.name("a ring name")?),
            _ => None,
        };
        self.expect(Tok::LBracket)?;
        let mut vars = Vec::new();
        if self.peek() != &Tok::RBracket {
            loop {
                vars.push(self.name("a variable")?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RBracket)?;
        let mut relations = Vec::new();
        if self.eat(&Tok::Slash) {
            self.expect(Tok::LParen)?;
            loop {
                relations.push(self.poly()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
        }
        Ok(RingDecl {
            name,
            body: RingBody::Adjoin { base, vars, relations },
            span: start.to(self.prev_span()),
        })
    }

    fn map(&mut self, start: Span) -> Result<MapDecl, DslError> {
        self.bump();
        let name = self.name("a map name")?;
        self.expect(Tok::Colon)?;
        let source = self.name("a source ring")?;
        self.expect(Tok::Arrow)?;
        let target = self.name("a target ring")?;
        self.expect(Tok::LBrace)?;
        let mut images = Vec::new();
        while self.peek() != &Tok::RBrace {
            let var = self.name("a source variable")?;
            self.expect(Tok::Arrow)?;
            let img = self.poly()?;
            images.push((var, img));
            self.eat(&Tok::Comma);
        }
        self.expect(Tok::RBrace)?;
        Ok(MapDecl {
            name,
            source,
            target,
            images,
            span: start.to(self.prev_span()),
        })
    }

    fn check(&mut self, start: Span) -> Result<CheckDirective, DslError> {
        self.bump();
        let kind_name = self.name("a check kind")?;
        let target = self.name("a map or ring name")?;
        let mut opts: Vec<(Name, Name)> = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            let key = self.name("an option")?;
            self.expect(Tok::Eq)?;
            let value = match self.peek().clone() {
                Tok::Int(v) => Name {
                    text: v.to_string(),
                    span: self.bump().span,
                },
                _ => self.name("an option value")?,
            };
            if opts.iter().any(|(k, _)| k.text == key.text) {
                return Err(DslError::new(DslErrorKind::InvalidOption(format!("duplicate option `{}`", key.text)), key.span));
            }
            opts.push((key, value));
        }
        let kind = check_kind(&kind_name, &opts)?;
        Ok(CheckDirective {
            kind,
            target,
            span: start.to(self.prev_span()),
        })
    }

    fn poly(&mut self) -> Result<PolyExpr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let add = match self.peek() {
                Tok::Plus => true,
                Tok::Minus => false,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span().to(rhs.span());
            lhs = if add {
                PolyExpr::Add(Box::new(lhs), Box::new(rhs), span)
            } else {
                PolyExpr::Sub(Box::new(lhs), Box::new(rhs), span)
            };
        }
    }

    fn term(&mut self) -> Result<PolyExpr, DslError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Star) {
            let rhs = self.unary()?;
            let span = lhs.span().to(rhs.span());
            lhs = PolyExpr::Mul(Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PolyExpr, DslError> {
        if self.peek() == &Tok::Minus {
            let start = self.bump().span;
            let inner = self.unary()?;
            let span = start.to(inner.span());
            return Ok(PolyExpr::Neg(Box::new(inner), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<PolyExpr, DslError> {
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let (e, espan) = self.int("an exponent")?;
        if e > MAX_EXPONENT {
            return Err(syntax(format!("exponent {e} exceeds {MAX_EXPONENT}"), espan));
        }
        let span = base.span().to(espan);
        Ok(PolyExpr::Pow(Box::new(base), e, span))
    }

    fn atom(&mut self) -> Result<PolyExpr, DslError> {
        match self.peek().clone() {
            Tok::Int(v) => Ok(PolyExpr::Int(v, self.bump().span)),
            Tok::Ident(text) => Ok(PolyExpr::Var(Name {
                text,
                span: self.bump().span,
            })),
            Tok::LParen => {
                self.bump();
                let inner = self.poly()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(syntax(format!("expected a polynomial, found {}", other.describe()), self.span())),
        }
    }
}

fn check_kind(kind: &Name, opts: &[(Name, Name)]) -> Result<CheckKind, DslError> {
    let allowed: &[&str] = match kind.text.as_str() {
        "omega" | "kunz" => &[],
        "frobenius" => &["e", "mode"],
        "classify" => &["emax"],
        "lifts" => &["ext"],
        other => {
            return Err(DslError::new(
                DslErrorKind::InvalidOption(format!(
                    "unknown check `{other}` (expected omega, frobenius, kunz, classify or lifts)"
                )),
                kind.span,
            ))
        }
    };
    for (k, _) in opts {
        if !allowed.contains(&k.text.as_str()) {
            return Err(DslError::new(
                DslErrorKind::InvalidOption(format!("`{}` is not an option of `check {}`", k.text, kind.text)),
                k.span,
            ));
        }
    }
    let get = |key: &str| opts.iter().find(|(k, _)| k.text == key).map(|(_, v)| v);
    let positive = |key: &str, default: u32| -> Result<u32, DslError> {
        match get(key) {
            None => Ok(default),
            Some(v) => match v.text.parse::<u32>() {
                Ok(n) if (1..=8).contains(&n) => Ok(n),
                _ => Err(DslError::new(
                    DslErrorKind::InvalidOption(format!("`{key}` must be an integer in 1..=8")),
                    v.span,
                )),
            },
        }
    };
    Ok(match kind.text.as_str() {
        "omega" => CheckKind::Omega,
        "kunz" => CheckKind::Kunz,
        "classify" => CheckKind::Classify {
            emax: positive("emax", 2)?,
        },
        "frobenius" => {
            let mode = match get("mode").map(|v| (v.text.as_str(), v.span)) {
                None | Some(("iso", _)) => FrobeniusMode::Iso,
                Some(("surjective", _)) => FrobeniusMode::Surjective,
                Some(("injective", _)) => FrobeniusMode::Injective,
                Some((_, span)) => {
                    return Err(DslError::new(
                        DslErrorKind::InvalidOption("`mode` must be surjective, injective or iso".into()),
                        span,
                    ))
                }
            };
            CheckKind::Frobenius {
                e: positive("e", 1)?,
                mode,
            }
        }
        _ => {
            let ext = match get("ext").map(|v| (v.text.as_str(), v.span)) {
                None | Some(("bank", _)) => LiftExtension::Bank,
                Some(("dual", _)) => LiftExtension::Dual,
                Some(("pinf", _)) => LiftExtension::PInfinitesimal,
                Some((_, span)) => {
                    return Err(DslError::new(
                        DslErrorKind::InvalidOption("`ext` must be dual, pinf or bank".into()),
                        span,
                    ))
                }
            };
            CheckKind::Lifts { ext }
        }
    })
}
