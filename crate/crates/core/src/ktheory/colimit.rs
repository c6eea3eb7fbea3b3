//! `K₀` of an AF algebra as the colimit of its Bratteli maps, with a
//! deliberately small recognizer: a label is attached only when one of
//! three rules fires, and `Unrecognized` keeps the raw data otherwise.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::bratteli::BratteliDiagram;
use crate::intlin::{kernel_basis, smith_normal_form, solve, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColimitData {
    /// `ℤ^rank` with the same connecting matrix at every level.
    Stationary { rank: usize, matrix: IntMatrix },
    Sequence { ranks: Vec<usize>, maps: Vec<IntMatrix> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColimitLabel {
    Free(usize),
    /// `⊕ᵢ ℤ[1/mᵢ]` (with `mᵢ = 1` meaning `ℤ`); the columns of `eigenbasis`
    /// are integer eigenvectors for the `mᵢ`, and form a unimodular matrix.
    Localized { factors: Vec<BigInt>, eigenbasis: IntMatrix },
    /// `⊕_ℕ ℤ`.
    FreeCountable,
    Unrecognized,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColimitGroup {
    pub data: ColimitData,
    pub label: ColimitLabel,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColimitReport {
    pub kind: &'static str,
    pub label: String,
    pub ranks: Vec<usize>,
}

impl ColimitLabel {
    pub fn pretty(&self) -> String {
        match self {
            ColimitLabel::Free(0) => "0".into(),
            ColimitLabel::Free(1) => "ℤ".into(),
            ColimitLabel::Free(r) => format!("ℤ^{r}"),
            ColimitLabel::Localized { factors, .. } => factors
                .iter()
                .map(|m| if m.is_one() { "ℤ".to_string() } else { format!("ℤ[1/{m}]") })
                .collect::<Vec<_>>()
                .join(" ⊕ "),
            ColimitLabel::FreeCountable => "⊕_ℕ ℤ".into(),
            ColimitLabel::Unrecognized => "unrecognized".into(),
        }
    }
}

impl fmt::Display for ColimitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

fn is_unimodular(m: &IntMatrix) -> bool {
    m.rows() == m.cols() && m.determinant().abs().is_one()
}

/// Full column rank with all invariant factors 1: a split injection.
fn is_left_invertible(m: &IntMatrix) -> bool {
    let snf = smith_normal_form(m);
    snf.rank == m.cols() && snf.invariant_factors().iter().all(One::is_one)
}

fn recognize_stationary(rank: usize, b: &IntMatrix) -> ColimitLabel {
    if rank == 0 || is_unimodular(b) {
        return ColimitLabel::Free(rank);
    }
    let bound = b.max_abs_row_sum().max(BigInt::one());
    let mut factors = Vec::new();
    let mut columns = Vec::new();
    let mut m = BigInt::one();
    while m <= bound {
        let mut shifted = b.clone();
        for i in 0..rank {
            shifted.add_at(i, i, -m.clone());
        }
        for v in kernel_basis(&shifted) {
            factors.push(m.clone());
            columns.push(v);
        }
        m += 1;
    }
    if columns.len() != rank {
        return ColimitLabel::Unrecognized;
    }
    let eigenbasis = IntMatrix::from_columns(rank, &columns);
    if !is_unimodular(&eigenbasis) {
        return ColimitLabel::Unrecognized;
    }
    ColimitLabel::Localized { factors, eigenbasis }
}

fn recognize_sequence(ranks: &[usize], maps: &[IntMatrix]) -> ColimitLabel {
    if maps.is_empty() {
        return ColimitLabel::Free(ranks[0]);
    }
    let tail = &maps[maps.len().saturating_sub(3)..];
    if tail.iter().all(is_unimodular) {
        return ColimitLabel::Free(*ranks.last().expect("nonempty"));
    }
    let last = &ranks[ranks.len().saturating_sub(3)..];
    let growing = last.len() == 3 && last.windows(2).all(|w| w[0] < w[1]);
    if growing && maps.iter().all(is_left_invertible) {
        return ColimitLabel::FreeCountable;
    }
    ColimitLabel::Unrecognized
}

pub fn bratteli_k0_colimit(b: &BratteliDiagram) -> ColimitGroup {
    let ranks: Vec<usize> = b.blocks.iter().map(Vec::len).collect();
    if b.is_stationary() && b.maps.len() >= 2 {
        let matrix = b.maps.last().expect("at least two maps").clone();
        let rank = ranks[1];
        let label = recognize_stationary(rank, &matrix);
        return ColimitGroup { data: ColimitData::Stationary { rank, matrix }, label };
    }
    let label = recognize_sequence(&ranks, &b.maps);
    ColimitGroup { data: ColimitData::Sequence { ranks, maps: b.maps.clone() }, label }
}

impl ColimitGroup {
    pub fn report(&self) -> ColimitReport {
        let (kind, ranks) = match &self.data {
            ColimitData::Stationary { rank, .. } => ("stationary", vec![*rank]),
            ColimitData::Sequence { ranks, .. } => ("sequence", ranks.clone()),
        };
        ColimitReport { kind, label: self.label.pretty(), ranks }
    }

    /// Membership of `numerators / denom` in the recognized subgroup of `ℚ^r`
    /// (stationary `Localized` labels only): in eigenbasis coordinates the
    /// `i`-th entry must lie in `ℤ[1/mᵢ]`.
    pub fn label_contains(&self, numerators: &[BigInt], denom: &BigInt) -> Option<bool> {
        let ColimitLabel::Localized { factors, eigenbasis } = &self.label else {
            return None;
        };
        let coords = solve(eigenbasis, numerators).expect("unimodular bases solve every integer vector");
        Some(coords.iter().zip(factors).all(|(x, m)| {
            let mut d = denom / x.gcd(denom);
            loop {
                let g = d.gcd(m);
                if g.is_one() {
                    break;
                }
                d /= g;
            }
            d.is_one()
        }))
    }
}

/// `q = numerators / denom` lies in `∪_{n ≤ max_n} B⁻ⁿ ℤ^r` iff some
/// `Bⁿ · numerators` is divisible by `denom`.
pub fn stationary_oracle_contains(b: &IntMatrix, numerators: &[BigInt], denom: &BigInt, max_n: usize) -> bool {
    let mut v = numerators.to_vec();
    for _ in 0..=max_n {
        if v.iter().all(|x| x.mod_floor(denom).is_zero()) {
            return true;
        }
        v = b.mul_vec(&v);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::ktheory::fixed_point_bratteli;

    fn colimit_of(g: &Graph) -> ColimitGroup {
        bratteli_k0_colimit(&fixed_point_bratteli(g, 8))
    }

    #[test]
    fn o2_is_dyadic() {
        let g = Graph::new(["w"], [("a", "w", "w"), ("b", "w", "w")]).unwrap();
        let c = colimit_of(&g);
        assert_eq!(c.label.pretty(), "ℤ[1/2]");
        let two = BigInt::from(2);
        assert_eq!(c.label_contains(&[BigInt::from(3)], &BigInt::from(8)), Some(true));
        assert_eq!(c.label_contains(&[BigInt::from(1)], &BigInt::from(3)), Some(false));
        assert!(stationary_oracle_contains(&IntMatrix::from_rows(&[vec![2]]), &[BigInt::from(3)], &two.pow(3), 12));
    }

    #[test]
    fn lambda_is_z_plus_dyadic() {
        let g = Graph::new(
            ["w", "vbar"],
            [("a", "w", "w"), ("b", "w", "w"), ("f", "w", "vbar"), ("ebar", "vbar", "vbar")],
        )
        .unwrap();
        assert_eq!(colimit_of(&g).label.pretty(), "ℤ ⊕ ℤ[1/2]");
    }

    #[test]
    fn toeplitz_is_free_countable() {
        let g = Graph::new(["v0_0", "v1_0"], [("e0_0", "v0_0", "v0_0"), ("e01_0", "v0_0", "v1_0")]).unwrap();
        assert_eq!(colimit_of(&g).label, ColimitLabel::FreeCountable);
    }

    #[test]
    fn unimodular_stationary_is_free() {
        let g = Graph::new(["v0", "v1"], [("e0", "v0", "v0"), ("e0_1", "v0", "v1"), ("e1", "v1", "v1")]).unwrap();
        assert_eq!(colimit_of(&g).label, ColimitLabel::Free(2));
        let point = Graph::new(["p"], Vec::<(&str, &str, &str)>::new()).unwrap();
        assert_eq!(colimit_of(&point).label, ColimitLabel::Free(1));
    }

    #[test]
    fn irrational_eigenvalues_are_unrecognized() {
        // A = [[3,1],[1,1]]: det 2, characteristic polynomial t² − 4t + 2.
        let g = Graph::new(
            ["x", "y"],
            [("a1", "x", "x"), ("a2", "x", "x"), ("a3", "x", "x"), ("b", "x", "y"), ("c", "y", "x"), ("d", "y", "y")],
        )
        .unwrap();
        let c = colimit_of(&g);
        assert!(matches!(c.data, ColimitData::Stationary { .. }));
        assert_eq!(c.label, ColimitLabel::Unrecognized);
    }
}
