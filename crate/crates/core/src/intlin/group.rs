use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use super::matrix::IntMatrix;
use super::snf::{lattice_basis, smith_normal_form, solve, solve_with};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix does not respect the torsion of the source (coordinate {0})")]
    IllDefined(usize),
    #[error("maps are not composable")]
    NotComposable,
    #[error("quotient {0} has torsion; the extension is not determined")]
    NonSplit(String),
    #[error("unknown generator label `{0}`")]
    UnknownLabel(String),
}

/// Labeled ambient generators and their relation to the canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub labels: Vec<String>,
    /// Canonical coordinates of each ambient generator (one column per label).
    pub to_canonical: IntMatrix,
    /// An ambient representative of each canonical coordinate (one column each).
    pub lifts: IntMatrix,
}

/// `⊕ᵢ ℤ/orders[i]`, where an order of 0 marks a free coordinate and every
/// other order is at least 2. Elements are coordinate vectors; torsion
/// coordinates are kept reduced into `[0, order)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FGAbelianGroup {
    orders: Vec<BigInt>,
    presentation: Option<Presentation>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GroupSummary {
    pub rank: usize,
    pub torsion: Vec<String>,
}

impl FGAbelianGroup {
    pub fn trivial() -> Self {
        FGAbelianGroup { orders: Vec::new(), presentation: None }
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup { orders: vec![BigInt::zero(); rank], presentation: None }
    }

    /// Orders of 1 are dropped; negative orders are normalized.
    pub fn from_orders<I: IntoIterator<Item = BigInt>>(orders: I) -> Self {
        FGAbelianGroup {
            orders: orders.into_iter().map(|d| d.abs()).filter(|d| !d.is_one()).collect(),
            presentation: None,
        }
    }

    /// Free group on named generators, with the identity presentation.
    pub fn free_labeled(labels: Vec<String>) -> Self {
        let n = labels.len();
        FGAbelianGroup {
            orders: vec![BigInt::zero(); n],
            presentation: Some(Presentation {
                labels,
                to_canonical: IntMatrix::identity(n),
                lifts: IntMatrix::identity(n),
            }),
        }
    }

    /// `ℤ^rows / im(m)`, with ambient generators named by `labels` when given.
    pub fn cokernel(m: &IntMatrix, labels: Option<Vec<String>>) -> Self {
        let snf = smith_normal_form(m);
        let n = m.rows();
        let keep: Vec<usize> = (0..n)
            .filter(|&i| i >= snf.rank || !snf.s.get(i, i).is_one())
            .collect();
        let orders = keep
            .iter()
            .map(|&i| if i < snf.rank { snf.s.get(i, i).clone() } else { BigInt::zero() })
            .collect();
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| format!("e{i}")).collect());
        assert_eq!(labels.len(), n, "one label per row");
        FGAbelianGroup {
            orders,
            presentation: Some(Presentation {
                labels,
                to_canonical: snf.u.select_rows(&keep),
                lifts: snf.u_inv.select_columns(&keep),
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.presentation.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.orders.iter().filter(|d| d.is_zero()).count()
    }

    pub fn is_free(&self) -> bool {
        self.orders.iter().all(Zero::is_zero)
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// Invariant factors `d₁ | d₂ | …` (each ≥ 2) and free rank.
    pub fn invariants(&self) -> (Vec<BigInt>, usize) {
        let torsion: Vec<BigInt> = self.orders.iter().filter(|d| !d.is_zero()).cloned().collect();
        let diag = IntMatrix::from_columns(
            torsion.len(),
            &(0..torsion.len())
                .map(|j| {
                    let mut c = vec![BigInt::zero(); torsion.len()];
                    c[j] = torsion[j].clone();
                    c
                })
                .collect::<Vec<_>>(),
        );
        let factors = smith_normal_form(&diag)
            .invariant_factors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        (factors, self.rank())
    }

    pub fn is_isomorphic(&self, other: &FGAbelianGroup) -> bool {
        self.invariants() == other.invariants()
    }

    pub fn summary(&self) -> GroupSummary {
        let (t, rank) = self.invariants();
        GroupSummary { rank, torsion: t.iter().map(ToString::to_string).collect() }
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.dim()]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<BigInt> {
        let mut v = self.zero();
        v[i] = BigInt::one();
        self.reduce(&v)
    }

    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim(), "element has wrong length");
        v.iter()
            .zip(&self.orders)
            .map(|(x, d)| if d.is_zero() { x.clone() } else { x.mod_floor(d) })
            .collect()
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Class of an ambient vector under the presentation.
    pub fn class_of(&self, ambient: &[BigInt]) -> Option<Vec<BigInt>> {
        let p = self.presentation.as_ref()?;
        Some(self.reduce(&p.to_canonical.mul_vec(ambient)))
    }

    pub fn class_of_label(&self, label: &str) -> Result<Vec<BigInt>, GroupError> {
        let p = self.presentation.as_ref().ok_or_else(|| GroupError::UnknownLabel(label.into()))?;
        let idx = p
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| GroupError::UnknownLabel(label.into()))?;
        Ok(self.reduce(&p.to_canonical.column(idx)))
    }

    /// The class of every labeled generator, in label order.
    pub fn generator_classes(&self) -> Vec<(String, Vec<BigInt>)> {
        match &self.presentation {
            Some(p) => p
                .labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.clone(), self.reduce(&p.to_canonical.column(i))))
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn with_presentation(mut self, p: Presentation) -> Self {
        self.presentation = Some(p);
        self
    }

    pub fn direct_sum(&self, other: &FGAbelianGroup) -> FGAbelianGroup {
        let mut orders = self.orders.clone();
        orders.extend(other.orders.iter().cloned());
        FGAbelianGroup { orders, presentation: None }
    }

    /// Relation lattice `diag(orders)` as columns; free coordinates contribute zero columns.
    fn relation_matrix(&self) -> IntMatrix {
        let n = self.dim();
        let mut m = IntMatrix::zeros(n, n);
        for (i, d) in self.orders.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    /// Human-readable form such as `ℤ² ⊕ ℤ/2`.
    pub fn pretty(&self) -> String {
        let (torsion, rank) = self.invariants();
        let mut parts = Vec::new();
        match rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            r => parts.push(format!("ℤ^{r}")),
        }
        parts.extend(torsion.iter().map(|d| format!("ℤ/{d}")));
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// A homomorphism in canonical coordinates: column `j` is the image of the
/// `j`-th source coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FGAbelianGroup,
    target: FGAbelianGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: FGAbelianGroup, target: FGAbelianGroup, matrix: IntMatrix) -> Result<Self, GroupError> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(GroupError::Dimension(format!(
                "{}x{} matrix for a map from rank-{} to rank-{} coordinates",
                matrix.rows(),
                matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        for (j, d) in source.orders.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let image: Vec<BigInt> = matrix.column(j).into_iter().map(|x| x * d).collect();
            if !target.is_zero_element(&image) {
                return Err(GroupError::IllDefined(j));
            }
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn zero(source: FGAbelianGroup, target: FGAbelianGroup) -> Self {
        let matrix = IntMatrix::zeros(target.dim(), source.dim());
        GroupHom { source, target, matrix }
    }

    pub fn identity(g: FGAbelianGroup) -> Self {
        let matrix = IntMatrix::identity(g.dim());
        GroupHom { source: g.clone(), target: g, matrix }
    }

    pub fn source(&self) -> &FGAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FGAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&self.matrix.mul_vec(v))
    }

    pub fn is_zero(&self) -> bool {
        (0..self.source.dim()).all(|j| self.target.is_zero_element(&self.matrix.column(j)))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom, GroupError> {
        if self.target.orders != other.source.orders {
            return Err(GroupError::NotComposable);
        }
        GroupHom::new(self.source.clone(), other.target.clone(), &other.matrix * &self.matrix)
    }

    pub fn negate(&self) -> GroupHom {
        GroupHom { source: self.source.clone(), target: self.target.clone(), matrix: -&self.matrix }
    }

    /// `(a, b) ↦ self(a) + other(b)` on `A ⊕ B`.
    pub fn juxtapose(&self, other: &GroupHom) -> Result<GroupHom, GroupError> {
        if self.target.orders != other.target.orders {
            return Err(GroupError::Dimension("juxtaposed maps need a common target".into()));
        }
        GroupHom::new(
            self.source.direct_sum(&other.source),
            self.target.clone(),
            self.matrix.hstack(&other.matrix),
        )
    }

    /// `a ↦ (self(a), other(a))` into `B ⊕ C`.
    pub fn pair(&self, other: &GroupHom) -> Result<GroupHom, GroupError> {
        if self.source.orders != other.source.orders {
            return Err(GroupError::Dimension("paired maps need a common source".into()));
        }
        GroupHom::new(
            self.source.clone(),
            self.target.direct_sum(&other.target),
            self.matrix.vstack(&other.matrix),
        )
    }

    /// `ℤ^n`-lattice of target coordinates whose class lies in the image.
    fn image_lattice(&self) -> IntMatrix {
        self.matrix.hstack(&self.target.relation_matrix())
    }

    /// `ℤ^n`-lattice of source coordinates mapping to zero.
    fn kernel_lattice(&self) -> IntMatrix {
        let m = self.matrix.hstack(&self.target.relation_matrix());
        let n = self.source.dim();
        let snf = smith_normal_form(&m);
        let cols: Vec<Vec<BigInt>> = (snf.rank..m.cols())
            .map(|j| snf.v.column(j)[..n].to_vec())
            .collect();
        IntMatrix::from_columns(n, &cols)
    }

    /// The kernel as a group together with its inclusion into the source.
    pub fn kernel(&self) -> (FGAbelianGroup, GroupHom) {
        let n = self.source.dim();
        let basis = lattice_basis(&self.kernel_lattice());
        let bmat = IntMatrix::from_columns(n, &basis);
        let snf = smith_normal_form(&bmat);
        let relations: Vec<Vec<BigInt>> = self
            .source
            .orders
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| {
                let mut c = vec![BigInt::zero(); n];
                c[i] = d.clone();
                solve_with(&snf, basis.len(), &c).expect("torsion relations lie in the kernel lattice")
            })
            .collect();
        let rel = IntMatrix::from_columns(basis.len(), &relations);
        let labels = (0..basis.len()).map(|i| format!("k{i}")).collect();
        let group = FGAbelianGroup::cokernel(&rel, Some(labels));
        let lifts = &group.presentation.as_ref().expect("cokernel has a presentation").lifts;
        let inclusion = GroupHom::new(group.clone(), self.source.clone(), &bmat * lifts)
            .expect("inclusion of a kernel is well defined");
        (group, inclusion)
    }

    /// The cokernel as a group together with the projection from the target.
    pub fn cokernel(&self) -> (FGAbelianGroup, GroupHom) {
        let group = FGAbelianGroup::cokernel(&self.image_lattice(), None);
        let proj = group.presentation.as_ref().expect("cokernel has a presentation").to_canonical.clone();
        let hom = GroupHom::new(self.target.clone(), group.clone(), proj)
            .expect("projection onto a cokernel is well defined");
        (group, hom)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }
}

/// Does some integer combination of the columns of `lattice` equal `v`?
fn in_lattice(lattice: &IntMatrix, v: &[BigInt]) -> bool {
    solve(lattice, v).is_some()
}

/// `im f = ker g` at the middle group.
pub fn exactness_check(f: &GroupHom, g: &GroupHom) -> Result<bool, GroupError> {
    if f.target.orders != g.source.orders {
        return Err(GroupError::NotComposable);
    }
    let image = f.image_lattice();
    let kernel = g.kernel_lattice();
    let image_in_kernel = image.columns().iter().all(|c| g.target.is_zero_element(&g.matrix.mul_vec(c)));
    let kernel_in_image = kernel.columns().iter().all(|c| in_lattice(&image, c));
    Ok(image_in_kernel && kernel_in_image)
}

/// `sub ⊕ quot`, refusing when `quot` has torsion.
pub fn solve_split_extension(sub: &FGAbelianGroup, quot: &FGAbelianGroup) -> Result<FGAbelianGroup, GroupError> {
    if !quot.is_free() {
        return Err(GroupError::NonSplit(quot.pretty()));
    }
    Ok(sub.direct_sum(quot))
}
