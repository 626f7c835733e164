use std::fmt;

use super::{RingPresentation, RESIDUE_ORDER};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::polycore::Poly;

/// Ring map given by the images of the source variables.
#[derive(Clone)]
pub struct AlgebraMap {
    source: RingPresentation,
    target: RingPresentation,
    images: Vec<Poly>,
}

impl fmt::Debug for AlgebraMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .source
            .var_names()
            .iter()
            .zip(&self.images)
            .map(|(v, img)| format!("{v} -> {}", self.target.format(img)))
            .collect();
        write!(
            f,
            "{} -> {} {{ {} }}",
            self.source.name(),
            self.target.name(),
            parts.join(", ")
        )
    }
}

impl AlgebraMap {
    /// Validates that every source relation maps to zero.
    pub fn check_map(
        images: Vec<Poly>,
        source: &RingPresentation,
        target: &RingPresentation,
        budget: &Budget,
    ) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(Error::mismatch(format!(
                "{} images for the {} variables of `{}`",
                images.len(),
                source.nvars(),
                source.name()
            )));
        }
        if source.field() != target.field() {
            return Err(Error::mismatch("map between rings of different characteristic"));
        }
        // images are kept as given so that variable images stay recognizable
        let images = images
            .iter()
            .map(|g| target.check_element(g))
            .collect::<Result<Vec<_>>>()?;
        let map = AlgebraMap {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        for (k, rel) in source.relations().iter().enumerate() {
            if !map.apply(rel, budget)?.is_zero() {
                return Err(Error::NotWellDefined { relation: k });
            }
        }
        Ok(map)
    }

    pub(crate) fn new_unchecked(
        source: RingPresentation,
        target: RingPresentation,
        images: Vec<Poly>,
    ) -> Self {
        AlgebraMap {
            source,
            target,
            images: images.into_iter().map(|g| g.with_order(RESIDUE_ORDER)).collect(),
        }
    }

    pub fn identity(ring: &RingPresentation) -> Self {
        let images = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        AlgebraMap::new_unchecked(ring.clone(), ring.clone(), images)
    }

    pub fn source(&self) -> &RingPresentation {
        &self.source
    }

    pub fn target(&self) -> &RingPresentation {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    /// Image of a source element, reduced in the target.
    pub fn apply(&self, f: &Poly, budget: &Budget) -> Result<Poly> {
        let f = self.source.check_element(f)?;
        self.target.substitute(&f, &self.images, budget)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &AlgebraMap, budget: &Budget) -> Result<AlgebraMap> {
        if !self.target.same_ring(&then.source) {
            return Err(Error::mismatch(format!(
                "cannot compose: target `{}` is not source `{}`",
                self.target.name(),
                then.source.name()
            )));
        }
        let images = self
            .images
            .iter()
            .map(|g| then.apply(g, budget))
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgebraMap {
            source: self.source.clone(),
            target: then.target.clone(),
            images,
        })
    }

    /// Equal as maps: images agree in the target.
    pub fn agrees_with(&self, other: &AlgebraMap, budget: &Budget) -> Result<bool> {
        if !self.source.same_ring(&other.source) || !self.target.same_ring(&other.target) {
            return Ok(false);
        }
        for (a, b) in self.images.iter().zip(&other.images) {
            if !self.target.equal(a, b, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices `k` with `images[j] = x_k` for distinct `k`, when every base
    /// variable maps to a distinct target variable.
    pub fn base_variable_positions(&self) -> Option<Vec<usize>> {
        let mut seen = vec![false; self.target.nvars()];
        let mut out = Vec::with_capacity(self.images.len());
        for img in &self.images {
            let (m, c) = match img.terms() {
                [(m, c)] => (m, *c),
                _ => return None,
            };
            if c != 1 || m.degree() != 1 {
                return None;
            }
            let k = m.support().next()?;
            if seen[k] {
                return None;
            }
            seen[k] = true;
            out.push(k);
        }
        Some(out)
    }
}
