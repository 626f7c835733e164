use std::fmt;

use super::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyExpr {
    Int(u64, Span),
    Var(Name),
    Neg(Box<PolyExpr>, Span),
    Add(Box<PolyExpr>, Box<PolyExpr>, Span),
    Sub(Box<PolyExpr>, Box<PolyExpr>, Span),
    Mul(Box<PolyExpr>, Box<PolyExpr>, Span),
    Pow(Box<PolyExpr>, u64, Span),
}

impl PolyExpr {
    pub fn span(&self) -> Span {
        match self {
            PolyExpr::Int(_, s)
            | PolyExpr::Neg(_, s)
            | PolyExpr::Add(_, _, s)
            | PolyExpr::Sub(_, _, s)
            | PolyExpr::Mul(_, _, s)
            | PolyExpr::Pow(_, _, s) => *s,
            PolyExpr::Var(n) => n.span,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            PolyExpr::Add(..) | PolyExpr::Sub(..) => 1,
            PolyExpr::Mul(..) => 2,
            PolyExpr::Neg(..) => 3,
            PolyExpr::Pow(..) => 4,
            PolyExpr::Int(..) | PolyExpr::Var(_) => 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingBody {
    /// `base[vars] / (relations)`; no base means the prime field.
    Adjoin {
        base: Option<Name>,
        vars: Vec<Name>,
        relations: Vec<PolyExpr>,
    },
    /// `invert var in base`.
    Invert { var: Name, base: Name },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingDecl {
    pub name: Name,
    pub body: RingBody,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDecl {
    pub name: Name,
    pub source: Name,
    pub target: Name,
    pub images: Vec<(Name, PolyExpr)>,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrobeniusMode {
    Surjective,
    Injective,
    Iso,
}

impl FrobeniusMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FrobeniusMode::Surjective => "surjective",
            FrobeniusMode::Injective => "injective",
            FrobeniusMode::Iso => "iso",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiftExtension {
    /// Dual numbers at the rational points.
    Dual,
    /// `F_p[ε]/(ε^p)` at the rational points.
    PInfinitesimal,
    /// The whole deformation bank.
    Bank,
}

impl LiftExtension {
    pub fn as_str(self) -> &'static str {
        match self {
            LiftExtension::Dual => "dual",
            LiftExtension::PInfinitesimal => "pinf",
            LiftExtension::Bank => "bank",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Omega,
    Frobenius { e: u32, mode: FrobeniusMode },
    Kunz,
    Classify { emax: u32 },
    Lifts { ext: LiftExtension },
}

impl CheckKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            CheckKind::Omega => "omega",
            CheckKind::Frobenius { .. } => "frobenius",
            CheckKind::Kunz => "kunz",
            CheckKind::Classify { .. } => "classify",
            CheckKind::Lifts { .. } => "lifts",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckDirective {
    pub kind: CheckKind,
    pub target: Name,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Prime(u64, Span),
    Ring(RingDecl),
    Map(MapDecl),
    Check(CheckDirective),
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SourceFile {
    pub statements: Vec<Stmt>,
}

// canonical printer

struct Child<'a>(&'a PolyExpr, u8);

impl fmt::Display for Child<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyExpr::Int(v, _) => write!(f, "{v}"),
            PolyExpr::Var(n) => write!(f, "{}", n.text),
            PolyExpr::Neg(a, _) => write!(f, "-{}", Child(a, 3)),
            PolyExpr::Add(a, b, _) => write!(f, "{} + {}", Child(a, 1), Child(b, 2)),
            PolyExpr::Sub(a, b, _) => write!(f, "{} - {}", Child(a, 1), Child(b, 2)),
            PolyExpr::Mul(a, b, _) => write!(f, "{} * {}", Child(a, 2), Child(b, 3)),
            PolyExpr::Pow(a, e, _) => write!(f, "{}^{e}", Child(a, 5)),
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Prime(p, _) => write!(f, "prime {p}"),
            Stmt::Ring(r) => {
                write!(f, "ring {} = ", r.name)?;
                match &r.body {
                    RingBody::Adjoin { base, vars, relations } => {
                        if let Some(b) = base {
                            write!(f, "{b}")?;
                        }
                        write!(f, "[{}]", join(vars))?;
                        if !relations.is_empty() {
                            write!(f, " / ({})", join(relations))?;
                        }
                        Ok(())
                    }
                    RingBody::Invert { var, base } => write!(f, "invert {var} in {base}"),
                }
            }
            Stmt::Map(m) => {
                write!(f, "map {} : {} -> {} {{", m.name, m.source, m.target)?;
                let parts: Vec<String> = m.images.iter().map(|(v, p)| format!("{v} -> {p}")).collect();
                if parts.is_empty() {
                    write!(f, " }}")
                } else {
                    write!(f, " {} }}", parts.join(", "))
                }
            }
            Stmt::Check(c) => {
                write!(f, "check {} {}", c.kind.keyword(), c.target)?;
                match c.kind {
                    CheckKind::Frobenius { e, mode } => write!(f, " e={e} mode={}", mode.as_str()),
                    CheckKind::Classify { emax } => write!(f, " emax={emax}"),
                    CheckKind::Lifts { ext } => write!(f, " ext={}", ext.as_str()),
                    CheckKind::Omega | CheckKind::Kunz => Ok(()),
                }
            }
        }
    }
}

impl fmt::Display for SourceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
