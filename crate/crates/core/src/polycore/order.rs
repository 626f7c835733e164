use std::cmp::Ordering;

use serde::Serialize;

use super::monomial::Monomial;

/// Monomial orders. `Block { split }` compares the variables `[0, split)` by
/// grevlex first and breaks ties by grevlex on the rest, which makes it an
/// elimination order for the leading block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    Block { split: usize },
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        other => return other,
    }
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        if x != y {
            // smaller exponent in the last differing variable wins
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exponents(), b.exponents());
        match *self {
            MonomialOrder::Grevlex => grevlex(ea, eb),
            MonomialOrder::Lex => ea.cmp(eb),
            MonomialOrder::Block { split } => {
                let s = split.min(ea.len());
                grevlex(&ea[..s], &eb[..s]).then_with(|| grevlex(&ea[s..], &eb[s..]))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn grevlex_examples() {
        let o = MonomialOrder::Grevlex;
        // x^2 > xy > y^2 > x > y > 1
        let chain = [m(&[2, 0]), m(&[1, 1]), m(&[0, 2]), m(&[1, 0]), m(&[0, 1]), m(&[0, 0])];
        for w in chain.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater);
        }
        // x y^0 z^2 vs x^0 y^2 z: same degree, last var z: 2 > 1 so second is larger
        assert_eq!(o.cmp(&m(&[1, 0, 2]), &m(&[0, 2, 1])), Ordering::Less);
    }

    #[test]
    fn block_eliminates_leading_block() {
        let o = MonomialOrder::Block { split: 1 };
        // x beats any power of y
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 50])), Ordering::Greater);
    }
}
