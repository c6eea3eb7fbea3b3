//! Milnor's clutching idempotent for a unitary `U` over the base of a pullback.
//!
//! With lifts `C ↦ U`, `D ↦ U*` in `B`,
//!
//! ```text
//! p_U = [ (1, C(2−DC)D)   (0, C(2−DC)(1−DC)) ]
//!       [ (0, (1−DC)D)    (0, (1−DC)²)       ]
//! ```
//!
//! and `∂[U] = [p_U] − [diag(1, 0)]`.

use num_bigint::BigInt;
use serde::Serialize;

use super::MvError;
use crate::lpa::{GenHom, Lpa, LpaElement};

#[derive(Clone, Debug)]
pub struct PairElement {
    pub a: LpaElement,
    pub b: LpaElement,
}

#[derive(Clone, Debug)]
pub struct MilnorIdempotent {
    /// Row-major 2×2.
    pub entries: [[PairElement; 2]; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct MilnorOutcome {
    pub entries: Vec<Vec<(String, String)>>,
    /// `z ∈ C*(E)` with `ρ(z) = (0, 1 − q)`.
    pub z: String,
    /// `−∂[U] = [z]` as coefficients on the `[P_v]` of `E`.
    pub neg_boundary: Vec<(String, String)>,
}

impl MilnorOutcome {
    pub fn neg_boundary_label(&self) -> String {
        if self.neg_boundary.is_empty() {
            return "0".into();
        }
        self.neg_boundary
            .iter()
            .map(|(l, c)| match c.as_str() {
                "1" => l.clone(),
                "-1" => format!("-{l}"),
                c => format!("{c}{l}"),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn mat_mul(x: &[[LpaElement; 2]; 2], y: &[[LpaElement; 2]; 2]) -> [[LpaElement; 2]; 2] {
    let e = |i: usize, j: usize| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_star(x: &[[LpaElement; 2]; 2]) -> [[LpaElement; 2]; 2] {
    [[x[0][0].star(), x[1][0].star()], [x[0][1].star(), x[1][1].star()]]
}

fn side(p: &MilnorIdempotent, pick: fn(&PairElement) -> &LpaElement) -> [[LpaElement; 2]; 2] {
    let e = |i: usize, j: usize| pick(&p.entries[i][j]).clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Builds `p_U` and checks both agreement equations, `p = p*` and `p = p²`.
/// `sigma1: A → base`, `sigma2: B → base`.
pub fn milnor_idempotent(
    sigma1: &GenHom,
    sigma2: &GenHom,
    u: &LpaElement,
    c: &LpaElement,
    d: &LpaElement,
) -> Result<MilnorIdempotent, MvError> {
    if !Lpa::same_algebra(u.lpa(), sigma2.target()) || !Lpa::same_algebra(sigma1.target(), sigma2.target()) {
        return Err(MvError::Milnor("U must live in the common base".into()));
    }
    if !u.is_unitary() {
        return Err(MvError::Milnor(format!("U = {u} is not unitary")));
    }
    if sigma2.apply(c)? != *u {
        return Err(MvError::Milnor(format!("σ₂(C) = {} differs from U", sigma2.apply(c)?)));
    }
    if sigma2.apply(d)? != u.star() {
        return Err(MvError::Milnor(format!("σ₂(D) = {} differs from U*", sigma2.apply(d)?)));
    }
    let b_one = LpaElement::one(c.lpa());
    let two = b_one.scale_int(2);
    let dc = d * c;
    let r = &b_one - &dc;
    let k = c * &(&two - &dc);
    let b = [[&k * d, &k * &r], [&r * d, &r * &r]];
    let a_one = LpaElement::one(sigma1.source());
    let a_zero = LpaElement::zero(sigma1.source());
    let a = [[a_one, a_zero.clone()], [a_zero.clone(), a_zero]];
    let [[a00, a01], [a10, a11]] = a;
    let [[b00, b01], [b10, b11]] = b;
    let p = MilnorIdempotent {
        entries: [
            [PairElement { a: a00, b: b00 }, PairElement { a: a01, b: b01 }],
            [PairElement { a: a10, b: b10 }, PairElement { a: a11, b: b11 }],
        ],
    };
    for (i, row) in p.entries.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let (l, r) = (sigma1.apply(&x.a)?, sigma2.apply(&x.b)?);
            if l != r {
                return Err(MvError::Milnor(format!("entry ({i},{j}) disagrees over the base: {l} vs {r}")));
            }
        }
    }
    let pb = side(&p, |x| &x.b);
    if mat_star(&pb).iter().flatten().zip(pb.iter().flatten()).any(|(x, y)| x != y) {
        return Err(MvError::Milnor("p is not self-adjoint".into()));
    }
    let sq = mat_mul(&pb, &pb);
    if let Some((x, y)) = sq.iter().flatten().zip(pb.iter().flatten()).find(|(x, y)| x != y) {
        return Err(MvError::Milnor(format!("p² ≠ p, defect {}", x - y)));
    }
    Ok(p)
}

/// `−∂[U] = [z]` when only the top-left `B`-entry `q` is nonzero: then
/// `[p] − [diag(1,0)] = −[(0, 1 − q)]`, and `(0, 1 − q) = ρ(z)` for `z` read in
/// `C*(E)` by identifiers. `rho1: E → A`, `rho2: E → B`.
pub fn boundary_class(p: &MilnorIdempotent, rho1: &GenHom, rho2: &GenHom) -> Result<MilnorOutcome, MvError> {
    let e = &p.entries;
    if !(e[0][1].b.is_zero() && e[1][0].b.is_zero() && e[1][1].b.is_zero()) {
        return Err(MvError::Refused("p has nonzero off-diagonal or lower entries".into()));
    }
    let q = &e[0][0].b;
    let one_minus_q = &LpaElement::one(q.lpa()) - q;
    let z = one_minus_q.reinterpret(rho1.source())?;
    if !rho1.apply(&z)?.is_zero() {
        return Err(MvError::Milnor(format!("ρ₁(z) ≠ 0 for z = {z}")));
    }
    if rho2.apply(&z)? != one_minus_q {
        return Err(MvError::Milnor(format!("ρ₂(z) ≠ 1 − q for z = {z}")));
    }
    let g = z.graph();
    let comb = z.vertex_combination().ok_or_else(|| MvError::Refused(format!("z = {z} is not a vertex combination")))?;
    let neg_boundary = comb
        .into_iter()
        .filter(|(_, c)| *c != BigInt::from(0))
        .map(|(v, c)| (format!("[P_{}]", g.vertex_id(v)), c.to_string()))
        .collect();
    let entries = e
        .iter()
        .map(|row| row.iter().map(|x| (x.a.to_string(), x.b.to_string())).collect())
        .collect();
    Ok(MilnorOutcome { entries, z: z.to_string(), neg_boundary })
}
