//! Free words in `P_v`, `S_e`, `S_e*` reduced letter by letter, independent of
//! the monomial product. Used as a cross-check of the normal form: reducing a
//! word under either strategy and normalizing must agree with multiplying the
//! letters as elements.

use std::sync::Arc;

use num_bigint::BigInt;

use super::algebra::{Lpa, LpaElement, Monomial};
use super::laurent::Laurent;
use crate::graph::{Graph, Path};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    P(usize),
    S(usize),
    /// `S_e*`.
    T(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

enum Step {
    Keep,
    Zero,
    Replace(Letter),
}

fn step(g: &Graph, a: Letter, b: Letter) -> Step {
    use Letter::*;
    let gate = |ok: bool, l: Letter| if ok { Step::Replace(l) } else { Step::Zero };
    match (a, b) {
        (P(v), P(w)) => gate(v == w, P(v)),
        (P(v), S(e)) => gate(g.source(e) == v, S(e)),
        (S(e), P(w)) => gate(g.range(e) == w, S(e)),
        (P(v), T(e)) => gate(g.range(e) == v, T(e)),
        (T(e), P(w)) => gate(g.source(e) == w, T(e)),
        (T(e), S(f)) => gate(e == f, P(g.range(e))),
        (S(e), S(f)) if g.range(e) != g.source(f) => Step::Zero,
        (T(e), T(f)) if g.source(e) != g.range(f) => Step::Zero,
        (S(e), T(f)) if g.range(e) != g.range(f) => Step::Zero,
        _ => Step::Keep,
    }
}

/// Reduces a nonempty word to `S_x S_y*` or to zero (`None`). Only the
/// relations that send a letter pair to one letter or to zero are used; (CK2)
/// is left to normalization.
pub fn reduce(g: &Graph, word: &[Letter], strategy: Strategy) -> Option<Monomial> {
    assert!(!word.is_empty(), "the empty word is the unit, not a monomial");
    let mut w = word.to_vec();
    loop {
        let positions: Box<dyn Iterator<Item = usize>> = match strategy {
            Strategy::Leftmost => Box::new(0..w.len().saturating_sub(1)),
            Strategy::Rightmost => Box::new((0..w.len().saturating_sub(1)).rev()),
        };
        let mut changed = false;
        for i in positions {
            match step(g, w[i], w[i + 1]) {
                Step::Keep => continue,
                Step::Zero => return None,
                Step::Replace(l) => {
                    w.splice(i..i + 2, [l]);
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            return Some(to_monomial(g, &w));
        }
    }
}

/// Irreducible words are `P_v` or `S…S T…T` with composable letters.
fn to_monomial(g: &Graph, w: &[Letter]) -> Monomial {
    if let [Letter::P(v)] = w {
        return Monomial::vertex(*v);
    }
    let xs: Vec<usize> = w.iter().filter_map(|l| if let Letter::S(e) = l { Some(*e) } else { None }).collect();
    let mut ys: Vec<usize> = w.iter().filter_map(|l| if let Letter::T(e) = l { Some(*e) } else { None }).collect();
    debug_assert_eq!(xs.len() + ys.len(), w.len(), "irreducible words carry no vertex letter");
    ys.reverse();
    let meet = match (xs.last(), ys.last()) {
        (Some(&e), _) => g.range(e),
        (None, Some(&e)) => g.range(e),
        (None, None) => unreachable!("nonempty word"),
    };
    let start = |edges: &[usize]| edges.first().map_or(meet, |&e| g.source(e));
    Monomial { x: Path { start: start(&xs), edges: xs }, y: Path { start: start(&ys), edges: ys } }
}

pub fn letter_element(lpa: &Arc<Lpa>, l: Letter) -> LpaElement {
    match l {
        Letter::P(v) => LpaElement::vertex(lpa, v),
        Letter::S(e) => LpaElement::edge(lpa, e),
        Letter::T(e) => LpaElement::edge_star(lpa, e),
    }
}

/// The normalized element of a reduced word.
pub fn word_element(lpa: &Arc<Lpa>, word: &[Letter], strategy: Strategy) -> LpaElement {
    match reduce(lpa.graph(), word, strategy) {
        None => LpaElement::zero(lpa),
        Some(m) => LpaElement::from_terms(lpa, [(m, Laurent::constant(BigInt::from(1)))]),
    }
}

/// Every letter of a graph, vertices first.
pub fn alphabet(g: &Graph) -> Vec<Letter> {
    let mut out: Vec<Letter> = (0..g.vertex_count()).map(Letter::P).collect();
    out.extend((0..g.edge_count()).map(Letter::S));
    out.extend((0..g.edge_count()).map(Letter::T));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambda() -> Arc<Lpa> {
        Lpa::new(
            Graph::new(
                ["w", "vbar"],
                [("a", "w", "w"), ("b", "w", "w"), ("f", "w", "vbar"), ("ebar", "vbar", "vbar")],
            )
            .unwrap(),
        )
    }

    #[test]
    fn ck1_and_orthogonality() {
        let a = lambda();
        let g = a.graph();
        let (ea, eb) = (g.find_edge("a").unwrap(), g.find_edge("b").unwrap());
        assert_eq!(reduce(g, &[Letter::T(ea), Letter::S(ea)], Strategy::Leftmost), Some(Monomial::vertex(0)));
        assert_eq!(reduce(g, &[Letter::T(ea), Letter::S(eb)], Strategy::Rightmost), None);
    }

    #[test]
    fn ck2_comes_from_normalization() {
        let a = lambda();
        let g = a.graph();
        let e = g.find_edge("ebar").unwrap();
        let p = word_element(&a, &[Letter::S(e), Letter::T(e)], Strategy::Leftmost);
        assert_eq!(p, LpaElement::vertex(&a, 1));
    }

    #[test]
    fn agrees_with_products_on_a_long_word() {
        let a = lambda();
        let g = a.graph();
        let id = |s: &str| g.find_edge(s).unwrap();
        let word = [Letter::S(id("a")), Letter::S(id("f")), Letter::P(1), Letter::T(id("f")), Letter::S(id("f")), Letter::T(id("ebar"))];
        let product = word.iter().map(|&l| letter_element(&a, l)).reduce(|x, y| &x * &y).unwrap();
        for s in [Strategy::Leftmost, Strategy::Rightmost] {
            assert_eq!(word_element(&a, &word, s), product);
        }
    }
}
