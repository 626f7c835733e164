use std::collections::HashMap;

use super::ast::*;
use super::{parse, DslError, DslErrorKind, Span};
use crate::algebra::{AlgebraMap, RingPresentation, RESIDUE_ORDER};
use crate::budget::Budget;
use crate::error::Error;
use crate::polycore::{Poly, PrimeField};

/// Elaborated source: every ring flattened to one presentation over F_p
/// with its declared base recorded.
#[derive(Clone, Debug)]
pub struct Program {
    pub field: PrimeField,
    pub rings: Vec<(String, RingPresentation)>,
    pub maps: Vec<(String, AlgebraMap)>,
    pub checks: Vec<CheckDirective>,
}

impl Program {
    pub fn ring(&self, name: &str) -> Option<&RingPresentation> {
        self.rings.iter().find(|(n, _)| n == name).map(|(_, r)| r)
    }

    /// A declared map, or the structure map of a declared ring.
    pub fn map(&self, name: &str) -> Option<AlgebraMap> {
        self.maps
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m.clone())
            .or_else(|| self.ring(name).map(RingPresentation::structure_map))
    }
}

pub fn load(src: &str, budget: &Budget) -> Result<Program, DslError> {
    elaborate(&parse(src)?, budget)
}

fn kernel(e: Error, span: Span) -> DslError {
    let kind = match e {
        Error::NotWellDefined { relation } => DslErrorKind::NotWellDefined { relation },
        Error::NotPrime(p) => DslErrorKind::NotPrime(p),
        other => DslErrorKind::Kernel(other),
    };
    DslError::new(kind, span)
}

fn to_poly(expr: &PolyExpr, names: &[String], field: PrimeField) -> Result<Poly, DslError> {
    let n = names.len();
    Ok(match expr {
        PolyExpr::Int(v, _) => Poly::constant(field, n, RESIDUE_ORDER, field.from_u64(*v) as i64),
        PolyExpr::Var(name) => {
            let i = names
                .iter()
                .position(|v| *v == name.text)
                .ok_or_else(|| DslError::new(DslErrorKind::UnknownVariable(name.text.clone()), name.span))?;
            Poly::var(field, n, RESIDUE_ORDER, i)
        }
        PolyExpr::Neg(a, _) => -&to_poly(a, names, field)?,
        PolyExpr::Add(a, b, _) => &to_poly(a, names, field)? + &to_poly(b, names, field)?,
        PolyExpr::Sub(a, b, _) => &to_poly(a, names, field)? - &to_poly(b, names, field)?,
        PolyExpr::Mul(a, b, _) => &to_poly(a, names, field)? * &to_poly(b, names, field)?,
        PolyExpr::Pow(a, e, _) => to_poly(a, names, field)?.pow(*e),
    })
}

struct Elaborator<'a> {
    field: PrimeField,
    decls: HashMap<&'a str, &'a RingDecl>,
    done: HashMap<String, RingPresentation>,
    visiting: Vec<String>,
    budget: &'a Budget,
}

impl Elaborator<'_> {
    fn base(&mut self, name: &Name) -> Result<RingPresentation, DslError> {
        if let Some(r) = self.done.get(&name.text) {
            return Ok(r.clone());
        }
        if self.visiting.contains(&name.text) {
            return Err(DslError::new(DslErrorKind::CyclicBase(name.text.clone()), name.span));
        }
        let decl = *self
            .decls
            .get(name.text.as_str())
            .ok_or_else(|| DslError::new(DslErrorKind::UnknownName(name.text.clone()), name.span))?;
        self.ring(decl)
    }

    fn ring(&mut self, decl: &RingDecl) -> Result<RingPresentation, DslError> {
        if let Some(r) = self.done.get(&decl.name.text) {
            return Ok(r.clone());
        }
        self.visiting.push(decl.name.text.clone());
        let ring = self.build(decl)?;
        self.visiting.pop();
        self.done.insert(decl.name.text.clone(), ring.clone());
        Ok(ring)
    }

    fn build(&mut self, decl: &RingDecl) -> Result<RingPresentation, DslError> {
        let field = self.field;
        let name = decl.name.text.clone();
        let (base, new_vars, relations): (Option<RingPresentation>, Vec<Name>, Vec<&PolyExpr>) = match &decl.body {
            RingBody::Adjoin { base, vars, relations } => {
                let base = base.as_ref().map(|b| self.base(b)).transpose()?;
                (base, vars.clone(), relations.iter().collect())
            }
            RingBody::Invert { var, base } => {
                let b = self.base(base)?;
                if !b.var_names().contains(&var.text) {
                    return Err(DslError::new(DslErrorKind::UnknownVariable(var.text.clone()), var.span));
                }
                let mut fresh = format!("{}_inv", var.text);
                while b.var_names().contains(&fresh) {
                    fresh.push('\'');
                }
                let names: Vec<String> = b.var_names().iter().cloned().chain([fresh.clone()]).collect();
                let i = b.var_names().iter().position(|v| *v == var.text).unwrap();
                let n = names.len();
                let rel = &(&Poly::var(field, n, RESIDUE_ORDER, i) * &Poly::var(field, n, RESIDUE_ORDER, n - 1))
                    - &Poly::one(field, n, RESIDUE_ORDER);
                return self.assemble(name, Some(b), names, vec![rel], decl.span);
            }
        };
        let mut names: Vec<String> = base.as_ref().map(|b| b.var_names().to_vec()).unwrap_or_default();
        for v in &new_vars {
            if names.contains(&v.text) {
                return Err(DslError::new(DslErrorKind::DuplicateName(v.text.clone()), v.span));
            }
            names.push(v.text.clone());
        }
        let rels = relations
            .into_iter()
            .map(|r| to_poly(r, &names, field))
            .collect::<Result<Vec<_>, _>>()?;
        self.assemble(name, base, names, rels, decl.span)
    }

    fn assemble(
        &self,
        name: String,
        base: Option<RingPresentation>,
        names: Vec<String>,
        extra: Vec<Poly>,
        span: Span,
    ) -> Result<RingPresentation, DslError> {
        let n = names.len();
        let Some(base) = base else {
            return RingPresentation::new(name, self.field, names, extra).map_err(|e| kernel(e, span));
        };
        let nb = base.nvars();
        let pos: Vec<usize> = (0..nb).collect();
        let mut rels: Vec<Poly> = base.relations().iter().map(|r| r.embed(n, &pos, RESIDUE_ORDER)).collect();
        rels.extend(extra);
        let plain = RingPresentation::new(name, self.field, names, rels).map_err(|e| kernel(e, span))?;
        let images = (0..nb).map(|i| plain.var(i)).collect();
        plain
            .with_base(&base, images, (nb..n).collect(), self.budget)
            .map_err(|e| kernel(e, span))
    }
}

fn claim<'a>(n: &'a Name, names: &mut Vec<&'a str>) -> Result<(), DslError> {
    if names.contains(&n.text.as_str()) {
        return Err(DslError::new(DslErrorKind::DuplicateName(n.text.clone()), n.span));
    }
    names.push(&n.text);
    Ok(())
}

pub fn elaborate(file: &SourceFile, budget: &Budget) -> Result<Program, DslError> {
    let mut field: Option<PrimeField> = None;
    let mut decls: HashMap<&str, &RingDecl> = HashMap::new();
    let mut order: Vec<&RingDecl> = Vec::new();
    let mut map_decls: Vec<&MapDecl> = Vec::new();
    let mut checks: Vec<&CheckDirective> = Vec::new();
    let mut names: Vec<&str> = Vec::new();
    for stmt in &file.statements {
        match stmt {
            Stmt::Prime(v, span) => {
                if field.is_some() {
                    return Err(DslError::new(DslErrorKind::DuplicatePrime, *span));
                }
                field = Some(PrimeField::new(*v).map_err(|e| kernel(e, *span))?);
            }
            Stmt::Ring(r) => {
                if field.is_none() {
                    return Err(DslError::new(DslErrorKind::MissingPrime, r.span));
                }
                claim(&r.name, &mut names)?;
                decls.insert(&r.name.text, r);
                order.push(r);
            }
            Stmt::Map(m) => {
                claim(&m.name, &mut names)?;
                map_decls.push(m);
            }
            Stmt::Check(c) => checks.push(c),
        }
    }
    let Some(field) = field else {
        let span = file.statements.first().map_or(Span::default(), |s| match s {
            Stmt::Map(m) => m.span,
            Stmt::Check(c) => c.span,
            Stmt::Prime(_, s) => *s,
            Stmt::Ring(r) => r.span,
        });
        return Err(DslError::new(DslErrorKind::MissingPrime, span));
    };
    let mut el = Elaborator {
        field,
        decls,
        done: HashMap::new(),
        visiting: Vec::new(),
        budget,
    };
    let mut rings = Vec::new();
    for decl in order {
        rings.push((decl.name.text.clone(), el.ring(decl)?));
    }
    let lookup = |n: &Name| -> Result<RingPresentation, DslError> {
        rings
            .iter()
            .find(|(k, _)| *k == n.text)
            .map(|(_, r)| r.clone())
            .ok_or_else(|| DslError::new(DslErrorKind::UnknownName(n.text.clone()), n.span))
    };
    let mut maps = Vec::new();
    for m in map_decls {
        let (source, target) = (lookup(&m.source)?, lookup(&m.target)?);
        let mut images: Vec<Option<Poly>> = vec![None; source.nvars()];
        for (var, expr) in &m.images {
            let i = source
                .var_names()
                .iter()
                .position(|v| *v == var.text)
                .ok_or_else(|| DslError::new(DslErrorKind::UnknownVariable(var.text.clone()), var.span))?;
            if images[i].is_some() {
                return Err(DslError::new(DslErrorKind::DuplicateName(var.text.clone()), var.span));
            }
            images[i] = Some(to_poly(expr, target.var_names(), field)?);
        }
        if m.images.len() != source.nvars() {
            return Err(DslError::new(
                DslErrorKind::WrongVariableCount {
                    expected: source.nvars(),
                    found: m.images.len(),
                },
                m.name.span,
            ));
        }
        let images = images.into_iter().map(Option::unwrap).collect();
        let map = AlgebraMap::check_map(images, &source, &target, budget).map_err(|e| kernel(e, m.span))?;
        maps.push((m.name.text.clone(), map));
    }
    let program = Program {
        field,
        rings,
        maps,
        checks: checks.into_iter().cloned().collect(),
    };
    for c in &program.checks {
        if program.map(&c.target.text).is_none() {
            return Err(DslError::new(DslErrorKind::UnknownName(c.target.text.clone()), c.target.span));
        }
    }
    Ok(program)
}
