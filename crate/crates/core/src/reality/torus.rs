use crate::clifford::{CliffordCtx, Multivector};
use crate::field::{Field, Scalar};
use crate::groups::GroupElement;
use crate::linalg::{poly_roots, vec_add, vec_scale, Matrix, Vector};
use crate::quadratic::{Subspace, WittBasis};

use super::{sign, RealityCertificate, RealityError, Relation};

/// `λ₀ ∏ (eᵢ + fᵢ)(eᵢ + λᵢ fᵢ)` relative to a Witt basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusElement {
    pub lambda0: Scalar,
    pub lambdas: Vec<Scalar>,
    pub basis: WittBasis,
}

impl TorusElement {
    pub fn new(
        lambda0: Scalar,
        lambdas: Vec<Scalar>,
        basis: WittBasis,
    ) -> Result<TorusElement, RealityError> {
        if lambda0.is_zero() || lambdas.iter().any(Scalar::is_zero) {
            return Err(RealityError::ZeroParameter);
        }
        if lambdas.len() != basis.witt_index() {
            return Err(RealityError::WittIndexMismatch {
                expected: basis.witt_index(),
                got: lambdas.len(),
            });
        }
        Ok(TorusElement {
            lambda0,
            lambdas,
            basis,
        })
    }

    /// `λ₀² ∏ λᵢ`.
    pub fn norm(&self) -> Scalar {
        self.lambdas
            .iter()
            .fold(&self.lambda0 * &self.lambda0, |acc, l| &acc * l)
    }

    pub fn multivector(&self, ctx: &CliffordCtx) -> Multivector {
        let mut vs = Vec::with_capacity(2 * self.lambdas.len());
        for ((e, f), l) in self.basis.pairs.iter().zip(&self.lambdas) {
            vs.push(vec_add(e, f));
            vs.push(vec_add(e, &vec_scale(f, l)));
        }
        ctx.vector_product(&vs)
            .expect("Witt vectors have ambient length")
            .scale(&self.lambda0)
    }

    pub fn element(&self, ctx: &CliffordCtx) -> Result<GroupElement, RealityError> {
        Ok(GroupElement::new(ctx, self.multivector(ctx))?)
    }

    /// `diag(λ₁, λ₁⁻¹, …, 1, …)` in Witt coordinates, returned in user
    /// coordinates.
    pub fn predicted_chi(&self, field: Field) -> Matrix {
        let mut d = Vec::with_capacity(self.basis.span_dim());
        for l in &self.lambdas {
            d.push(l.clone());
            d.push(l.inv().expect("nonzero parameter"));
        }
        d.resize(self.basis.span_dim(), field.one());
        let c = self.basis.change(field);
        c.mul(&Matrix::diagonal(field, &d))
            .mul(&c.inverse().expect("Witt basis is a basis"))
    }

    /// Reads off torus parameters when `t` lies in the standard torus of
    /// `basis`.
    pub fn recognize(
        ctx: &CliffordCtx,
        basis: &WittBasis,
        t: &GroupElement,
    ) -> Option<TorusElement> {
        let field = ctx.field();
        let w = basis.to_witt_coords(field, t.chi())?;
        let n = w.rows();
        for i in 0..n {
            for j in 0..n {
                if i != j && !w.get(i, j).is_zero() {
                    return None;
                }
            }
        }
        let m = basis.witt_index();
        let mut lambdas = Vec::with_capacity(m);
        for i in 0..m {
            let l = w.get(2 * i, 2 * i).clone();
            if l.inv().as_ref() != Some(w.get(2 * i + 1, 2 * i + 1)) {
                return None;
            }
            lambdas.push(l);
        }
        if (2 * m..n).any(|i| !w.get(i, i).is_one()) {
            return None;
        }
        let unit = TorusElement::new(field.one(), lambdas.clone(), basis.clone()).ok()?;
        let u = unit.multivector(ctx);
        let ratio = ctx.mul(t.mv(), &ctx.inverse(&u).ok()?);
        let lambda0 = ratio.as_scalar(field)?;
        TorusElement::new(lambda0, lambdas, basis.clone()).ok()
    }
}

pub fn make_torus_element(
    ctx: &CliffordCtx,
    lambda0: Scalar,
    lambdas: Vec<Scalar>,
    basis: &WittBasis,
) -> Result<GroupElement, RealityError> {
    TorusElement::new(lambda0, lambdas, basis.clone())?.element(ctx)
}

/// `(-1)^{m(m-1)/2}`.
pub fn standard_sign(field: Field, m: usize) -> Scalar {
    sign(field, m * m.saturating_sub(1) / 2)
}

/// `(-1)^{m(m+1)/2}`.
pub fn corollary_sign(field: Field, m: usize) -> Scalar {
    sign(field, m * (m + 1) / 2)
}

/// Involution `u = v₁ ⋯ v_{2r} / c` over an orthogonal basis of `w`, where
/// `c² = (-1)^r ∏ q(vᵢ)`.
pub fn involution_lift(ctx: &CliffordCtx, w: &Subspace) -> Result<GroupElement, RealityError> {
    let space = ctx.space();
    let field = ctx.field();
    if w.dim() % 2 != 0 {
        return Err(RealityError::PreconditionViolated(format!(
            "subspace dimension {} is odd",
            w.dim()
        )));
    }
    if w.dim() == 0 {
        return Ok(GroupElement::new(ctx, ctx.one())?);
    }
    if space.restricted_gram(&w.basis).det().is_zero() {
        return Err(crate::quadratic::SpaceError::DegenerateSubspace.into());
    }
    let (vs, qs) = space.diagonalize_span(&w.basis)?;
    let r = w.dim() / 2;
    let kappa = qs.iter().fold(sign(field, r), |acc, q| &acc * q);
    match field.is_square(&kappa)? {
        Some(c) => {
            let u = ctx
                .vector_product(&vs)?
                .scale(&c.inv().expect("nonzero root"));
            Ok(GroupElement::new(ctx, u)?)
        }
        None => Err(RealityError::NotLiftable(field.square_class(&kappa)?)),
    }
}

fn pair_sums(basis: &WittBasis, skip: usize) -> Vec<Vector> {
    basis
        .pairs
        .iter()
        .skip(skip)
        .map(|(e, f)| vec_add(e, f))
        .collect()
}

/// `s = ∏ (eᵢ + fᵢ)`.
pub fn standard_conjugator(
    ctx: &CliffordCtx,
    basis: &WittBasis,
) -> Result<GroupElement, RealityError> {
    if basis.witt_index() == 0 {
        return Err(RealityError::PreconditionViolated(
            "Witt index is zero".into(),
        ));
    }
    Ok(GroupElement::from_vectors(ctx, &pair_sums(basis, 0))?)
}

/// `s = ∏_{i≥2} (eᵢ + fᵢ)` for a torus element with `λ₁ = -1` and `m` odd.
pub fn minus_conjugator(ctx: &CliffordCtx, t: &TorusElement) -> Result<GroupElement, RealityError> {
    let m = t.lambdas.len();
    if m % 2 == 0 {
        return Err(RealityError::PreconditionViolated(format!(
            "Witt index {m} is even"
        )));
    }
    if !t.lambdas[0].is_minus_one() {
        return Err(RealityError::PreconditionViolated("λ₁ ≠ -1".into()));
    }
    Ok(GroupElement::from_vectors(ctx, &pair_sums(&t.basis, 1))?)
}

/// `e₀ (e₁ + d⁻¹ f₁)(e₂ + f₂) ⋯ (e_m + f_m)` with `d = q(e₀)`.
pub fn odd_split_raw(ctx: &CliffordCtx, basis: &WittBasis) -> Result<Multivector, RealityError> {
    let [e0] = basis.anisotropic.as_slice() else {
        return Err(RealityError::PreconditionViolated(
            "anisotropic part must be a single vector".into(),
        ));
    };
    let Some((e1, f1)) = basis.pairs.first() else {
        return Err(RealityError::PreconditionViolated(
            "Witt index is zero".into(),
        ));
    };
    let d = ctx.space().q(e0);
    let mut vs = vec![
        e0.clone(),
        vec_add(e1, &vec_scale(f1, &d.inv().expect("anisotropic"))),
    ];
    vs.extend(pair_sums(basis, 1));
    Ok(ctx.vector_product(&vs)?)
}

/// Spin conjugator for a torus element in odd dimension. For odd `m` this
/// is [`odd_split_raw`]; for even `m` the raw product is odd and the even
/// standard conjugator is used instead.
pub fn odd_split_conjugator(
    ctx: &CliffordCtx,
    t: &GroupElement,
    basis: &WittBasis,
) -> Result<RealityCertificate, RealityError> {
    if ctx.dim() % 2 == 0 || basis.anisotropic.len() != 1 {
        return Err(RealityError::PreconditionViolated(
            "needs odd dimension with a one-dimensional anisotropic part".into(),
        ));
    }
    if TorusElement::recognize(ctx, basis, t).is_none() {
        let one = ctx.field().one();
        let roots = poly_roots(&t.chi().charpoly());
        return Err(if roots.iter().all(|(r, _)| *r == one) {
            RealityError::NoRationalEigenvalue
        } else {
            RealityError::PreconditionViolated(
                "element is not in the standard torus of the basis".into(),
            )
        });
    }
    let s = if basis.witt_index() % 2 == 1 {
        odd_split_raw(ctx, basis)?
    } else {
        standard_conjugator(ctx, basis)?.mv().clone()
    };
    RealityCertificate::new(ctx, t, s, Relation::NormInverse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::QSpace;
    use crate::reality::Membership;

    fn q() -> Field {
        Field::rationals()
    }

    fn setup(m: usize, aniso: &[i64]) -> (CliffordCtx, WittBasis) {
        let f = q();
        let ds: Vec<Scalar> = aniso.iter().map(|&d| f.from_i64(d)).collect();
        let space = QSpace::hyperbolic_plus(f, m, &ds).unwrap();
        let basis = space.witt_decompose().unwrap();
        (CliffordCtx::new(space).unwrap(), basis)
    }

    fn ints(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| q().from_i64(x)).collect()
    }

    #[test]
    fn torus_chi_and_norm() {
        let (ctx, basis) = setup(1, &[]);
        let t = TorusElement::new(q().one(), ints(&[5]), basis.clone()).unwrap();
        let g = t.element(&ctx).unwrap();
        assert_eq!(*g.chi(), t.predicted_chi(q()));
        assert_eq!(*g.norm(), q().from_i64(5));
        let id = make_torus_element(&ctx, q().one(), ints(&[1]), &basis).unwrap();
        assert!(id.chi().is_identity());
        let half = q().ratio(1, 2).unwrap();
        let spin = make_torus_element(&ctx, half, ints(&[4]), &basis).unwrap();
        assert!(spin.is_spin());
        assert_eq!(
            make_torus_element(&ctx, q().zero(), ints(&[4]), &basis),
            Err(RealityError::ZeroParameter)
        );
    }

    #[test]
    fn recognize_round_trip() {
        let (ctx, basis) = setup(2, &[3]);
        let t = TorusElement::new(q().from_i64(-2), ints(&[3, 7]), basis.clone()).unwrap();
        let g = t.element(&ctx).unwrap();
        assert_eq!(TorusElement::recognize(&ctx, &basis, &g), Some(t));
    }

    #[test]
    fn standard_conjugator_m2() {
        let (ctx, basis) = setup(2, &[]);
        let t = make_torus_element(&ctx, q().one(), ints(&[2, 3]), &basis).unwrap();
        let s = standard_conjugator(&ctx, &basis).unwrap();
        let lhs = ctx.sandwich(s.mv(), t.mv(), s.inverse());
        assert_eq!(lhs, t.inverse().scale(&q().from_i64(6)));
        assert_eq!(
            ctx.mul(s.mv(), s.mv()),
            Multivector::scalar(q().from_i64(-1))
        );
        assert!(s.norm().is_one());
    }

    #[test]
    fn standard_conjugator_parity_and_sign() {
        let (ctx, basis) = setup(1, &[]);
        let s = standard_conjugator(&ctx, &basis).unwrap();
        assert!(!s.is_even());
        assert_eq!(ctx.mul(s.mv(), s.mv()), ctx.one());
        let (ctx4, basis4) = setup(4, &[]);
        let s4 = standard_conjugator(&ctx4, &basis4).unwrap();
        assert_eq!(ctx4.mul(s4.mv(), s4.mv()), ctx4.one());
        assert_eq!(standard_sign(q(), 4), q().one());
    }

    #[test]
    fn minus_conjugator_examples() {
        let (ctx, basis) = setup(3, &[]);
        let t = TorusElement::new(q().one(), ints(&[-1, 2, 3]), basis).unwrap();
        let tg = t.element(&ctx).unwrap();
        let s = minus_conjugator(&ctx, &t).unwrap();
        assert!(s.is_even());
        assert_eq!(
            ctx.mul(s.mv(), s.mv()),
            Multivector::scalar(q().from_i64(-1))
        );
        let cert =
            RealityCertificate::new(&ctx, &tg, s.mv().clone(), Relation::MinusNormInverse).unwrap();
        assert_eq!(
            cert.relation.target(&tg),
            tg.inverse().scale(&q().from_i64(6))
        );

        let (ctx1, basis1) = setup(1, &[]);
        let t1 = TorusElement::new(q().one(), ints(&[-1]), basis1.clone()).unwrap();
        let s1 = minus_conjugator(&ctx1, &t1).unwrap();
        assert_eq!(*s1.mv(), ctx1.one());
        let tg1 = t1.element(&ctx1).unwrap();
        assert!(tg1.norm().is_minus_one());
        assert_eq!(ctx1.mul(tg1.mv(), tg1.mv()), ctx1.one());
        RealityCertificate::new(&ctx1, &tg1, s1.mv().clone(), Relation::MinusNormInverse).unwrap();

        let bad = TorusElement::new(q().one(), ints(&[2]), basis1).unwrap();
        assert!(matches!(
            minus_conjugator(&ctx1, &bad),
            Err(RealityError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn odd_split_dim3() {
        let (ctx, basis) = setup(1, &[3]);
        let t = make_torus_element(&ctx, q().one(), ints(&[2]), &basis).unwrap();
        let raw = odd_split_raw(&ctx, &basis).unwrap();
        let cert = odd_split_conjugator(&ctx, &t, &basis).unwrap();
        assert_eq!(*cert.s.mv(), raw);
        assert!(cert.s_norm.is_one());
        assert_eq!(cert.s_in, Membership::Spin);
        assert_eq!(cert.s_squared, Some(corollary_sign(q(), 1)));
        assert!(cert.verify(&ctx).all());
    }

    #[test]
    fn odd_split_dim5_raw_formula_is_odd() {
        let (ctx, basis) = setup(2, &[3]);
        let t = make_torus_element(&ctx, q().one(), ints(&[2, 5]), &basis).unwrap();
        let raw = GroupElement::new(&ctx, odd_split_raw(&ctx, &basis).unwrap()).unwrap();
        assert!(!raw.is_even());
        assert!(raw.norm().is_one());
        RealityCertificate::new(&ctx, &t, raw.mv().clone(), Relation::NormInverse).unwrap();
        let cert = odd_split_conjugator(&ctx, &t, &basis).unwrap();
        assert_eq!(cert.s_in, Membership::Spin);
        assert_eq!(cert.s_squared, Some(corollary_sign(q(), 2)));
    }

    #[test]
    fn odd_split_without_rational_eigenvalue() {
        let f = q();
        let space = QSpace::diagonal(f, &ints(&[1, 1, 1])).unwrap();
        let ctx = CliffordCtx::new(space.clone()).unwrap();
        let basis = space.witt_decompose().unwrap();
        assert_eq!(basis.witt_index(), 0);
        let g = GroupElement::from_vectors(&ctx, &[ints(&[1, 0, 0]), ints(&[2, 1, 0])]).unwrap();
        assert!(matches!(
            odd_split_conjugator(&ctx, &g, &basis),
            Err(RealityError::PreconditionViolated(_))
        ));
        let (ctx3, basis3) = setup(1, &[1]);
        let v = vec![f.one(), f.one(), f.zero()];
        let w = vec![f.zero(), f.zero(), f.one()];
        let rot = GroupElement::from_vectors(&ctx3, &[vec_add(&v, &w), v.clone()]).unwrap();
        assert_eq!(
            odd_split_conjugator(&ctx3, &rot, &basis3).err(),
            Some(RealityError::NoRationalEigenvalue)
        );
    }

    #[test]
    fn corollary_signs() {
        assert_eq!(corollary_sign(q(), 1), q().from_i64(-1));
        assert_eq!(corollary_sign(q(), 3), q().one());
        assert_eq!(corollary_sign(q(), 4), q().one());
    }

    #[test]
    fn involution_lift_examples() {
        let f = q();
        let (ctx, _) = setup(1, &[]);
        let w = Subspace::new(f, vec![ints(&[1, 1]), ints(&[1, -1])]).unwrap();
        let u = involution_lift(&ctx, &w).unwrap();
        assert_eq!(ctx.mul(u.mv(), u.mv()), ctx.one());
        assert_eq!(*u.chi(), Matrix::identity(f, 2).scale(&f.from_i64(-1)));

        let f3 = Field::prime(3).unwrap();
        let space3 = QSpace::diagonal(f3, &[f3.one(), f3.one()]).unwrap();
        let ctx3 = CliffordCtx::new(space3).unwrap();
        let w3 = Subspace::new(
            f3,
            vec![vec![f3.one(), f3.zero()], vec![f3.zero(), f3.one()]],
        )
        .unwrap();
        assert_eq!(
            involution_lift(&ctx3, &w3).err(),
            Some(RealityError::NotLiftable(f3.from_i64(2)))
        );

        let space4 = QSpace::diagonal(f, &ints(&[1, 1, 1, 1])).unwrap();
        let ctx4 = CliffordCtx::new(space4).unwrap();
        let all = Subspace::new(
            f,
            (0..4)
                .map(|i| crate::linalg::unit_vector(f, 4, i))
                .collect(),
        )
        .unwrap();
        let u4 = involution_lift(&ctx4, &all).unwrap();
        assert_eq!(ctx4.mul(u4.mv(), u4.mv()), ctx4.one());
    }

    #[test]
    fn degenerate_subspace_rejected() {
        let f = q();
        let (ctx, _) = setup(2, &[]);
        let w = Subspace::new(f, vec![ints(&[1, 0, 0, 0]), ints(&[0, 0, 1, 0])]).unwrap();
        assert_eq!(
            involution_lift(&ctx, &w).err(),
            Some(RealityError::Space(
                crate::quadratic::SpaceError::DegenerateSubspace
            ))
        );
    }
}
