//! The Clifford group `Γ`, its even part `Γ⁺` and `Spin`, together with the
//! vector representation `χ(u): x ↦ u x u⁻¹`, the norm `N(u) = τ(u) u`,
//! reflection factorization of orthogonal matrices and the spinor norm.

use thiserror::Error;

use crate::clifford::{CliffordCtx, CliffordError, Multivector, Parity};
use crate::field::{FieldError, Scalar};
use crate::linalg::{is_zero_vec, unit_vector, vec_add, vec_scale, vec_sub, Matrix, Vector};
use crate::quadratic::QSpace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("element does not lie in the Clifford group")]
    NotInGamma,
    #[error("reversion(u)·u is not a scalar")]
    NormNotScalar,
    #[error("matrix does not preserve the quadratic form")]
    NotOrthogonal,
    #[error("orthogonal matrix has determinant -1")]
    NotSpecialOrthogonal,
}

/// An orthogonal transformation of the ambient quadratic space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthMatrix {
    matrix: Matrix,
    det: Scalar,
}

impl OrthMatrix {
    pub fn new(space: &QSpace, matrix: Matrix) -> Result<OrthMatrix, GroupError> {
        if matrix.rows() != space.dim() || !matrix.is_square() || !space.preserves_form(&matrix) {
            return Err(GroupError::NotOrthogonal);
        }
        let det = matrix.det();
        Ok(OrthMatrix { matrix, det })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn det(&self) -> &Scalar {
        &self.det
    }

    pub fn is_special(&self) -> bool {
        self.det.is_one()
    }
}

/// A multivector certified to lie in `Γ(V, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    mv: Multivector,
    inverse: Multivector,
    parity: Parity,
    norm: Scalar,
    chi: Matrix,
}

impl GroupElement {
    pub fn new(ctx: &CliffordCtx, mv: Multivector) -> Result<GroupElement, GroupError> {
        ctx.check(&mv)?;
        let parity = mv.parity().ok_or(GroupError::NotInGamma)?;
        let inverse = ctx.inverse(&mv).map_err(|_| GroupError::NotInGamma)?;
        let chi = conjugation_matrix(ctx, &mv, &inverse).ok_or(GroupError::NotInGamma)?;
        let norm = ctx
            .mul(&mv.reversion(), &mv)
            .as_scalar(ctx.field())
            .ok_or(GroupError::NormNotScalar)?;
        Ok(GroupElement {
            mv,
            inverse,
            parity,
            norm,
            chi,
        })
    }

    pub fn from_vectors(ctx: &CliffordCtx, vs: &[Vector]) -> Result<GroupElement, GroupError> {
        GroupElement::new(ctx, ctx.vector_product(vs)?)
    }

    pub fn mv(&self) -> &Multivector {
        &self.mv
    }

    pub fn inverse(&self) -> &Multivector {
        &self.inverse
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_even(&self) -> bool {
        self.parity == Parity::Even
    }

    pub fn norm(&self) -> &Scalar {
        &self.norm
    }

    /// Matrix of `x ↦ u x u⁻¹` in user coordinates.
    pub fn chi(&self) -> &Matrix {
        &self.chi
    }

    pub fn is_spin(&self) -> bool {
        self.is_even() && self.norm.is_one()
    }

    pub fn mul(&self, ctx: &CliffordCtx, other: &GroupElement) -> GroupElement {
        GroupElement::new(ctx, ctx.mul(&self.mv, &other.mv)).expect("Γ is closed under products")
    }

    pub fn invert(&self, ctx: &CliffordCtx) -> GroupElement {
        GroupElement::new(ctx, self.inverse.clone()).expect("Γ is closed under inverses")
    }

    /// Recomputes every cached invariant from scratch.
    pub fn revalidate(&self, ctx: &CliffordCtx) -> bool {
        GroupElement::new(ctx, self.mv.clone()).is_ok_and(|g| g == *self)
    }
}

fn conjugation_matrix(ctx: &CliffordCtx, u: &Multivector, inv: &Multivector) -> Option<Matrix> {
    let n = ctx.dim();
    let field = ctx.field();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let x = ctx.embed_vector(&unit_vector(field, n, i)).ok()?;
        let y = ctx.sandwich(u, &x, inv);
        cols.push(ctx.extract_vector(&y).ok()?);
    }
    Some(Matrix::from_columns(field, n, &cols))
}

pub fn in_gamma(ctx: &CliffordCtx, u: &Multivector) -> bool {
    GroupElement::new(ctx, u.clone()).is_ok()
}

pub fn is_spin(ctx: &CliffordCtx, u: &Multivector) -> bool {
    GroupElement::new(ctx, u.clone()).is_ok_and(|g| g.is_spin())
}

/// `N(x)` when `x ∈ Γ`, checked on the internal generators without building a
/// full [`GroupElement`].
pub fn gamma_norm(ctx: &CliffordCtx, x: &Multivector) -> Option<Scalar> {
    x.parity()?;
    let rev = x.reversion();
    let norm = ctx.mul(&rev, x).as_scalar(ctx.field())?;
    let inv = rev.scale(&norm.inv()?);
    (0..ctx.dim())
        .all(|i| {
            let y = ctx.sandwich(x, &ctx.generator(i), &inv);
            y.terms().iter().all(|(b, _)| b.count_ones() == 1)
        })
        .then_some(norm)
}

/// Multiplicative order of an invertible element, if at most `cap`.
pub fn element_order(ctx: &CliffordCtx, x: &Multivector, cap: u64) -> Option<u64> {
    let one = ctx.one();
    let mut acc = x.clone();
    for k in 1..=cap {
        if acc == one {
            return Some(k);
        }
        acc = ctx.mul(&acc, x);
    }
    None
}

pub fn vector_rep(ctx: &CliffordCtx, u: &GroupElement) -> Result<OrthMatrix, GroupError> {
    OrthMatrix::new(ctx.space(), u.chi().clone())
}

/// Vectors `v₁, …, v_k` (`k ≤ n`, all anisotropic) with
/// `S_{v₁} ∘ ⋯ ∘ S_{v_k} = M`.
pub fn reflection_factorize(space: &QSpace, m: &OrthMatrix) -> Vec<Vector> {
    let field = space.field();
    let n = space.dim();
    let mut cur = m.matrix.clone();
    let all: Vec<Vector> = (0..n).map(|i| unit_vector(field, n, i)).collect();
    let (mut basis, _) = space
        .diagonalize_span(&all)
        .expect("nondegenerate space diagonalizes");
    let mut out = Vec::new();
    while !basis.is_empty() {
        if basis.iter().all(|x| cur.mul_vec(x) == *x) {
            break;
        }
        if let Some(x) = fixed_anisotropic(space, &basis, &cur) {
            basis = perp_within(space, &basis, &x);
        } else if let Some(x) = moving_step(space, &basis, &cur) {
            let w = vec_sub(&cur.mul_vec(&x), &x);
            cur = space.reflection(&w).mul(&cur);
            out.push(w);
            basis = perp_within(space, &basis, &x);
        } else {
            // (M - 1)U is totally isotropic; one reflection breaks the deadlock
            let v = basis[0].clone();
            cur = space.reflection(&v).mul(&cur);
            out.push(v);
        }
    }
    debug_assert!(cur.is_identity());
    out
}

/// Orthogonal basis of `span(basis) ∩ x⊥` for anisotropic `x` in the span.
fn perp_within(space: &QSpace, basis: &[Vector], x: &Vector) -> Vec<Vector> {
    let bxx = space.b(x, x);
    let pivot = basis
        .iter()
        .position(|u| !space.b(u, x).is_zero())
        .expect("anisotropic x pairs with some basis vector");
    let projected: Vec<Vector> = basis
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != pivot)
        .map(|(_, u)| vec_sub(u, &vec_scale(x, &(&space.b(u, x) / &bxx))))
        .collect();
    space
        .diagonalize_span(&projected)
        .expect("complement of an anisotropic vector is nondegenerate")
        .0
}

fn fixed_anisotropic(space: &QSpace, basis: &[Vector], m: &Matrix) -> Option<Vector> {
    let field = space.field();
    let n = space.dim();
    let k = basis.len();
    let moved: Vec<Vector> = basis.iter().map(|u| vec_sub(&m.mul_vec(u), u)).collect();
    let coeffs = Matrix::from_columns(field, n, &moved).kernel();
    let fixed: Vec<Vector> = coeffs
        .iter()
        .map(|c| {
            (0..k).fold(vec![field.zero(); n], |acc, i| {
                vec_add(&acc, &vec_scale(&basis[i], &c[i]))
            })
        })
        .collect();
    if let Some(v) = fixed.iter().find(|v| !space.q(v).is_zero()) {
        return Some(v.clone());
    }
    for i in 0..fixed.len() {
        for j in i + 1..fixed.len() {
            if !space.b(&fixed[i], &fixed[j]).is_zero() {
                return Some(vec_add(&fixed[i], &fixed[j]));
            }
        }
    }
    None
}

/// Anisotropic `x` in the span with `M x - x` anisotropic.
fn moving_step(space: &QSpace, basis: &[Vector], m: &Matrix) -> Option<Vector> {
    let field = space.field();
    let good = |x: &Vector| {
        !space.q(x).is_zero() && {
            let d = vec_sub(&m.mul_vec(x), x);
            !is_zero_vec(&d) && !space.q(&d).is_zero()
        }
    };
    if let Some(x) = basis.iter().find(|x| good(x)) {
        return Some(x.clone());
    }
    let bound = match field.order() {
        Some(p) => (p - 1) as i64,
        None => 3,
    };
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            for c in 1..=bound {
                let x = vec_add(&basis[i], &vec_scale(&basis[j], &field.from_i64(c)));
                if good(&x) {
                    return Some(x);
                }
            }
        }
    }
    let p = field.order()?;
    let k = basis.len() as u32;
    let total = p.checked_pow(k)?;
    (1..total).find_map(|idx| {
        let mut rest = idx;
        let mut x = vec![field.zero(); space.dim()];
        for u in basis {
            let c = field.from_i64((rest % p) as i64);
            rest /= p;
            x = vec_add(&x, &vec_scale(u, &c));
        }
        good(&x).then_some(x)
    })
}

/// Square class of `∏ q(vᵢ)` over any reflection factorization.
pub fn spinor_norm(space: &QSpace, m: &OrthMatrix) -> Result<Scalar, GroupError> {
    if !m.is_special() {
        return Err(GroupError::NotSpecialOrthogonal);
    }
    let field = space.field();
    let prod = reflection_factorize(space, m)
        .iter()
        .fold(field.one(), |acc, v| &acc * &space.q(v));
    Ok(field.square_class(&prod)?)
}

/// `u = v₁ ⋯ v_{2r}` with `χ(u) = M`, defined up to a nonzero scalar.
pub fn lift_so(ctx: &CliffordCtx, m: &OrthMatrix) -> Result<GroupElement, GroupError> {
    if !m.is_special() {
        return Err(GroupError::NotSpecialOrthogonal);
    }
    let vs = reflection_factorize(ctx.space(), m);
    GroupElement::from_vectors(ctx, &vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn vecf(field: Field, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| field.from_i64(x)).collect()
    }

    fn compose(space: &QSpace, vs: &[Vector]) -> Matrix {
        vs.iter()
            .fold(Matrix::identity(space.field(), space.dim()), |acc, v| {
                acc.mul(&space.reflection(v))
            })
    }

    #[test]
    fn membership_examples() {
        let q = Field::rationals();
        let ctx = CliffordCtx::new(QSpace::hyperbolic(q, 1)).unwrap();
        let v = ctx.embed_vector(&vecf(q, &[1, 2])).unwrap();
        assert!(in_gamma(&ctx, &v));
        let e = ctx.embed_vector(&vecf(q, &[1, 0])).unwrap();
        assert!(!in_gamma(&ctx, &ctx.one().add(&e)));
        assert!(in_gamma(&ctx, &Multivector::scalar(q.from_i64(7))));
        assert!(!in_gamma(&ctx, &Multivector::zero()));
    }

    #[test]
    fn chi_of_a_vector_is_minus_reflection() {
        let q = Field::rationals();
        let space = QSpace::hyperbolic(q, 2);
        let ctx = CliffordCtx::new(space.clone()).unwrap();
        let v = vecf(q, &[1, 3, 0, 1]);
        let g = GroupElement::from_vectors(&ctx, &[v.clone()]).unwrap();
        assert_eq!(*g.chi(), space.reflection(&v).scale(&q.from_i64(-1)));
        assert_eq!(*g.norm(), space.q(&v));
        assert_eq!(g.parity(), Parity::Odd);
    }

    #[test]
    fn chi_of_e_plus_beta_f() {
        let q = Field::rationals();
        let ctx = CliffordCtx::new(QSpace::hyperbolic(q, 1)).unwrap();
        let beta = q.from_i64(3);
        let g = GroupElement::from_vectors(&ctx, &[vec![q.one(), beta.clone()]]).unwrap();
        // -S_v swaps the isotropic lines: e ↦ β f, f ↦ e / β
        let expected = Matrix::from_rows(
            q,
            vec![
                vec![q.zero(), beta.inv().unwrap()],
                vec![beta.clone(), q.zero()],
            ],
        );
        assert_eq!(*g.chi(), expected);
    }

    #[test]
    fn torus_plane_maps_to_diagonal() {
        let q = Field::rationals();
        let ctx = CliffordCtx::new(QSpace::hyperbolic(q, 1)).unwrap();
        let lam = q.ratio(5, 2).unwrap();
        let g = GroupElement::from_vectors(&ctx, &[vecf(q, &[1, 1]), vec![q.one(), lam.clone()]])
            .unwrap();
        assert_eq!(
            *g.chi(),
            Matrix::diagonal(q, &[lam.clone(), lam.inv().unwrap()])
        );
        assert_eq!(*g.norm(), lam);
        assert!(g.is_even());
        assert!(!g.is_spin());
    }

    #[test]
    fn norm_and_spin_examples() {
        let q = Field::rationals();
        let ctx = CliffordCtx::new(QSpace::hyperbolic(q, 1)).unwrap();
        let one = GroupElement::new(&ctx, ctx.one()).unwrap();
        assert!(one.norm().is_one());
        assert!(one.chi().is_identity());
        assert!(is_spin(&ctx, &Multivector::scalar(q.from_i64(-1))));
        let t = ctx
            .vector_product(&[vecf(q, &[1, 1]), vecf(q, &[1, 1])])
            .unwrap();
        assert!(is_spin(&ctx, &t));
        let t2 = ctx
            .vector_product(&[vecf(q, &[1, 1]), vecf(q, &[1, 2])])
            .unwrap();
        assert!(!is_spin(&ctx, &t2));
    }

    #[test]
    fn factorize_identity_and_single_reflection() {
        let q = Field::rationals();
        let space = QSpace::hyperbolic(q, 2);
        let id = OrthMatrix::new(&space, Matrix::identity(q, 4)).unwrap();
        assert!(reflection_factorize(&space, &id).is_empty());
        let v = vecf(q, &[1, 1, 2, 0]);
        let s = OrthMatrix::new(&space, space.reflection(&v)).unwrap();
        let vs = reflection_factorize(&space, &s);
        assert_eq!(vs.len(), 1);
        assert_eq!(compose(&space, &vs), *s.matrix());
    }

    #[test]
    fn factorize_plane_rotation() {
        let q = Field::rationals();
        let space = QSpace::hyperbolic(q, 1);
        let lam = q.from_i64(4);
        let m = OrthMatrix::new(
            &space,
            Matrix::diagonal(q, &[lam.clone(), lam.inv().unwrap()]),
        )
        .unwrap();
        let vs = reflection_factorize(&space, &m);
        assert_eq!(vs.len(), 2);
        assert_eq!(compose(&space, &vs), *m.matrix());
        assert_eq!(spinor_norm(&space, &m).unwrap(), q.one());
        let m3 = OrthMatrix::new(
            &space,
            Matrix::diagonal(q, &[q.from_i64(3), q.ratio(1, 3).unwrap()]),
        )
        .unwrap();
        assert_eq!(spinor_norm(&space, &m3).unwrap(), q.from_i64(3));
    }

    #[test]
    fn totally_isotropic_defect() {
        // M - 1 has image span(e₁, e₂), which is also the fixed space
        let f3 = Field::prime(3).unwrap();
        let space = QSpace::hyperbolic(f3, 2);
        let mut rows = vec![vec![f3.zero(); 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = f3.one();
        }
        rows[0][3] = f3.one();
        rows[2][1] = f3.from_i64(-1);
        let m = Matrix::from_rows(f3, rows);
        assert!(space.preserves_form(&m));
        let om = OrthMatrix::new(&space, m).unwrap();
        let vs = reflection_factorize(&space, &om);
        assert!(vs.len() <= 4);
        assert_eq!(vs.len() % 2, 0);
        assert_eq!(compose(&space, &vs), *om.matrix());
    }

    #[test]
    fn lift_round_trip() {
        let q = Field::rationals();
        let space = QSpace::hyperbolic_plus(q, 1, &[q.from_i64(2)]).unwrap();
        let ctx = CliffordCtx::new(space.clone()).unwrap();
        let vs = [
            vecf(q, &[1, 2, 1]),
            vecf(q, &[0, 1, 3]),
            vecf(q, &[2, 1, 1]),
            vecf(q, &[1, 1, 0]),
        ];
        let m = OrthMatrix::new(&space, compose(&space, &vs)).unwrap();
        let u = lift_so(&ctx, &m).unwrap();
        assert_eq!(u.chi(), m.matrix());
        assert!(u.is_even());
        let odd = OrthMatrix::new(&space, space.reflection(&vs[0])).unwrap();
        assert_eq!(lift_so(&ctx, &odd), Err(GroupError::NotSpecialOrthogonal));
        assert_eq!(
            spinor_norm(&space, &odd),
            Err(GroupError::NotSpecialOrthogonal)
        );
    }

    #[test]
    fn non_orthogonal_rejected() {
        let q = Field::rationals();
        let space = QSpace::hyperbolic(q, 1);
        let m = Matrix::diagonal(q, &[q.from_i64(2), q.from_i64(2)]);
        assert_eq!(OrthMatrix::new(&space, m), Err(GroupError::NotOrthogonal));
    }
}
