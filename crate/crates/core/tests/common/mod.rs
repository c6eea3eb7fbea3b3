//! Generators and property bodies shared by the property suite and the
//! acceptance runner.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use trimgraph::intlin::{exactness_check, smith_normal_form, FGAbelianGroup, GroupHom, IntMatrix};
use trimgraph::lpa::word::{alphabet, letter_element, word_element, Letter, Strategy as Order};
use trimgraph::{Graph, Laurent, Lpa, LpaElement};

pub const CASES: u32 = 1000;

pub fn config() -> Config {
    Config { cases: CASES, failure_persistence: None, ..Config::default() }
}

/// Graphs on 1..=3 vertices with up to 5 edges, parallel edges and loops allowed.
pub fn graph() -> impl Strategy<Value = Graph> {
    (1usize..=3)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..=5)))
        .prop_map(|(n, es)| {
            let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let edges: Vec<(String, String, String)> =
                es.iter().enumerate().map(|(i, (s, r))| (format!("e{i}"), vs[*s].clone(), vs[*r].clone())).collect();
            Graph::new(vs, edges).expect("generated ids are distinct")
        })
}

/// A graph together with `k` words of length 1..=6 over its letters.
pub fn graph_and_words(k: usize) -> impl Strategy<Value = (Graph, Vec<Vec<Letter>>)> {
    graph().prop_flat_map(move |g| {
        let letters = alphabet(&g);
        let word = prop::collection::vec(prop::sample::select(letters), 1..=6);
        (Just(g), prop::collection::vec(word, k))
    })
}

fn product(lpa: &Arc<Lpa>, w: &[Letter]) -> LpaElement {
    w.iter().skip(1).fold(letter_element(lpa, w[0]), |acc, &l| &acc * &letter_element(lpa, l))
}

/// A small element: a word with coefficient `c·u^k`, plus the constant 1 when `one`.
fn element(lpa: &Arc<Lpa>, w: &[Letter], c: i64, k: i64, one: bool) -> LpaElement {
    let x = product(lpa, w).scale(&Laurent::term(c, k));
    if one {
        &x + &LpaElement::one(lpa)
    } else {
        x
    }
}

/// Coefficient `c`, `u`-exponent and whether to add 1, per word.
pub type Coeffs = Vec<(i64, i64, bool)>;

pub fn lpa_input() -> impl Strategy<Value = (Graph, Vec<Vec<Letter>>, Coeffs)> {
    (graph_and_words(3), prop::collection::vec((-3i64..=3, -2i64..=2, any::<bool>()), 3))
        .prop_map(|((g, ws), cs)| (g, ws, cs))
}

pub fn prop_confluence(g: &Graph, w: &[Letter]) -> Result<(), TestCaseError> {
    let lpa = Lpa::new(g.clone());
    let left = word_element(&lpa, w, Order::Leftmost);
    let right = word_element(&lpa, w, Order::Rightmost);
    prop_assert_eq!(&left, &right);
    prop_assert_eq!(&left, &product(&lpa, w));
    Ok(())
}

fn three(g: &Graph, ws: &[Vec<Letter>], cs: &[(i64, i64, bool)]) -> (Arc<Lpa>, Vec<LpaElement>) {
    let lpa = Lpa::new(g.clone());
    let xs = ws.iter().zip(cs).map(|(w, &(c, k, one))| element(&lpa, w, c, k, one)).collect();
    (lpa, xs)
}

pub fn prop_associative(g: &Graph, ws: &[Vec<Letter>], cs: &[(i64, i64, bool)]) -> Result<(), TestCaseError> {
    let (_, x) = three(g, ws, cs);
    prop_assert_eq!(&(&x[0] * &x[1]) * &x[2], &x[0] * &(&x[1] * &x[2]));
    Ok(())
}

pub fn prop_involution(g: &Graph, ws: &[Vec<Letter>], cs: &[(i64, i64, bool)]) -> Result<(), TestCaseError> {
    let (_, x) = three(g, ws, cs);
    let ab = &x[0] * &x[1];
    prop_assert_eq!(ab.star(), &x[1].star() * &x[0].star());
    prop_assert_eq!(x[2].star().star(), x[2].clone());
    Ok(())
}

/// `(xy)_d = Σ_{i+j=d} x_i y_j` for the gauge-homogeneous parts.
pub fn prop_gauge_additive(g: &Graph, ws: &[Vec<Letter>], cs: &[(i64, i64, bool)]) -> Result<(), TestCaseError> {
    let (lpa, x) = three(g, ws, cs);
    let (a, b) = (&x[0] + &x[2], x[1].clone());
    let ab = &a * &b;
    let (da, db) = (a.gauge_degrees(), b.gauge_degrees());
    for d in ab.gauge_degrees() {
        prop_assert!(da.iter().any(|i| db.contains(&(d - i))), "degree {} not a sum", d);
    }
    let sums: BTreeSet<i64> = da.iter().flat_map(|i| db.iter().map(move |j| i + j)).collect();
    for d in sums {
        let mut expect = LpaElement::zero(&lpa);
        for i in &da {
            expect = &expect + &(&a.homogeneous_part(*i) * &b.homogeneous_part(d - i));
        }
        prop_assert_eq!(ab.homogeneous_part(d), expect);
    }
    Ok(())
}

pub fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
        .prop_map(|rows| IntMatrix::from_rows(&rows))
}

pub fn prop_snf(m: &IntMatrix) -> Result<(), TestCaseError> {
    let s = smith_normal_form(m);
    prop_assert!(s.verify(m), "SNF fails for {:?}", m.to_i64_rows());
    prop_assert_eq!(&(&s.u * m) * &s.v, s.s.clone());
    let det = |x: &IntMatrix| x.determinant();
    prop_assert!(det(&s.u) == BigInt::from(1) || det(&s.u) == BigInt::from(-1));
    prop_assert!(det(&s.v) == BigInt::from(1) || det(&s.v) == BigInt::from(-1));
    Ok(())
}

/// `A --f--> B --g--> C` with `B` finite (orders 2..=4), `A` and `C` mixing
/// `ℤ` (order 0) and finite summands. Raw entries lie in `[−3, 3]` and are
/// adjusted only where well-definedness forces it. In `exact_bias` mode the
/// columns of `f` are drawn from `ker g`, found by enumeration.
#[derive(Clone, Debug)]
pub struct Triple {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: Vec<i64>,
    pub f: Vec<Vec<i64>>,
    pub g: Vec<Vec<i64>>,
}

fn orders(range: std::ops::RangeInclusive<usize>, allow_free: bool) -> impl Strategy<Value = Vec<i64>> {
    let o = if allow_free { prop::sample::select(vec![0i64, 2, 3, 4]).boxed() } else { (2i64..=4).boxed() };
    prop::collection::vec(o, range)
}

/// Forces `src_order · m[i][j] ≡ 0` in the target summand `i`.
fn well_defined(m: &mut [Vec<i64>], src: &[i64], tgt: &[i64]) {
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let (s, t) = (src[j], tgt[i]);
            if t == 0 {
                if s != 0 {
                    *x = 0;
                }
            } else if s != 0 && (s * *x).rem_euclid(t) != 0 {
                *x = (*x * (t / s.gcd(&t))).rem_euclid(t);
            }
        }
    }
}

fn elements(b: &[i64]) -> Vec<Vec<i64>> {
    b.iter().fold(vec![Vec::new()], |acc, &n| {
        acc.into_iter().flat_map(|p| (0..n).map(move |x| [p.clone(), vec![x]].concat())).collect()
    })
}

fn apply(m: &[Vec<i64>], x: &[i64], tgt: &[i64]) -> Vec<i64> {
    m.iter()
        .zip(tgt)
        .map(|(row, &t)| {
            let y: i64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            if t == 0 {
                y
            } else {
                y.rem_euclid(t)
            }
        })
        .collect()
}

pub fn triple() -> impl Strategy<Value = Triple> {
    (orders(0..=4, true), orders(1..=3, false), orders(0..=4, true), any::<bool>(), any::<u64>())
        .prop_flat_map(|(a, b, c, bias, seed)| {
            let f = prop::collection::vec(prop::collection::vec(-3i64..=3, a.len()), b.len());
            let g = prop::collection::vec(prop::collection::vec(-3i64..=3, b.len()), c.len());
            (Just(a), Just(b), Just(c), f, g, Just(bias), Just(seed))
        })
        .prop_map(|(a, b, c, mut f, mut g, bias, seed)| {
            well_defined(&mut g, &b, &c);
            if bias {
                let ker: Vec<Vec<i64>> =
                    elements(&b).into_iter().filter(|x| apply(&g, x, &c).iter().all(|&y| y == 0)).collect();
                for j in 0..a.len() {
                    let pick = &ker[((seed >> (8 * j)) as usize) % ker.len()];
                    for (i, row) in f.iter_mut().enumerate() {
                        row[j] = pick[i];
                    }
                }
            }
            well_defined(&mut f, &a, &b);
            Triple { a, b, c, f, g }
        })
}

/// Brute force: `im f` as the closure of `f`'s columns in the finite `B`,
/// `ker g` by enumeration.
pub fn oracle_exact(t: &Triple) -> bool {
    let all = elements(&t.b);
    let ker: BTreeSet<Vec<i64>> = all.into_iter().filter(|x| apply(&t.g, x, &t.c).iter().all(|&y| y == 0)).collect();
    let cols: Vec<Vec<i64>> = (0..t.a.len())
        .map(|j| t.f.iter().zip(&t.b).map(|(row, &n)| row[j].rem_euclid(n)).collect())
        .collect();
    let mut image: BTreeSet<Vec<i64>> = BTreeSet::from([vec![0; t.b.len()]]);
    loop {
        let next: BTreeSet<Vec<i64>> = image
            .iter()
            .flat_map(|x| cols.iter().map(move |c| x.iter().zip(c).zip(&t.b).map(|((p, q), n)| (p + q).rem_euclid(*n)).collect()))
            .chain(image.iter().cloned())
            .collect();
        if next.len() == image.len() {
            break;
        }
        image = next;
    }
    image == ker
}

fn group(orders: &[i64]) -> FGAbelianGroup {
    FGAbelianGroup::from_orders(orders.iter().map(|&d| BigInt::from(d)))
}

fn hom(src: &[i64], tgt: &[i64], m: &[Vec<i64>]) -> GroupHom {
    let matrix = if m.is_empty() || src.is_empty() {
        IntMatrix::zeros(tgt.len(), src.len())
    } else {
        IntMatrix::from_rows(m)
    };
    GroupHom::new(group(src), group(tgt), matrix).expect("entries adjusted to be well defined")
}

pub fn prop_exactness(t: &Triple) -> Result<(), TestCaseError> {
    let f = hom(&t.a, &t.b, &t.f);
    let g = hom(&t.b, &t.c, &t.g);
    let lib = exactness_check(&f, &g).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(lib, oracle_exact(t), "{:?}", t);
    Ok(())
}

/// Runs one property for `CASES` cases; `Err` carries the minimal failure.
pub fn run<S: Strategy>(s: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    TestRunner::new(config()).run(&s, test).map_err(|e| e.to_string())
}
