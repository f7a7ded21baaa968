use std::collections::BTreeSet;

use crate::clifford::{CliffordCtx, Multivector};
use crate::field::Scalar;
use crate::groups::{element_order, gamma_norm, GroupElement};
use crate::linalg::{coefficient_tuples, vec_add, vec_scale, vec_sub, Vector};
use crate::quadratic::QSpace;

use super::eigen::{eigen_split, EigenSplit};
use super::{RealityCertificate, RealityError, Relation};

/// Largest multiplicative order probed by the finite-field semisimplicity test.
const ORDER_CAP: u64 = 1 << 20;

/// Outcome of the Spin-level reality decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Real(RealityCertificate),
    NotReal(String),
    Undecided(String),
}

impl Decision {
    pub fn label(&self) -> &'static str {
        match self {
            Decision::Real(_) => "real",
            Decision::NotReal(_) => "not-real",
            Decision::Undecided(_) => "undecided",
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Decision::Real(_))
    }
}

/// `t = τ₁ τ₂` with `τᵢ² = εᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionPair {
    pub tau1: GroupElement,
    pub tau2: GroupElement,
    pub eps1: Scalar,
    pub eps2: Scalar,
}

impl InvolutionPair {
    pub fn verify(&self, ctx: &CliffordCtx, t: &GroupElement) -> bool {
        ctx.mul(self.tau1.mv(), self.tau2.mv()) == *t.mv()
            && ctx.mul(self.tau1.mv(), self.tau1.mv()) == Multivector::scalar(self.eps1.clone())
            && ctx.mul(self.tau2.mv(), self.tau2.mv()) == Multivector::scalar(self.eps2.clone())
    }
}

/// Vector factors of a conjugator, block by block.
struct Plan {
    factors: Vec<Option<Vector>>,
    /// `e + f` factors that may be rescaled to `e + c f`.
    free: Vec<(usize, Vector, Vector)>,
    /// Unused vectors of `V₁`, tied to the factor sharing their plane.
    spare: Vec<(Option<usize>, Vector)>,
    /// Factors drawn from `V₁`.
    fixed: Vec<usize>,
}

impl Plan {
    fn push(&mut self, v: Vector) -> usize {
        self.factors.push(Some(v));
        self.factors.len() - 1
    }

    fn len(&self) -> usize {
        self.factors.iter().flatten().count()
    }

    fn add_pairs(&mut self, pairs: impl IntoIterator<Item = (Vector, Vector)>, fixed: bool) {
        for (e, f) in pairs {
            let i = self.push(vec_add(&e, &f));
            if fixed {
                self.fixed.push(i);
                self.spare.push((Some(i), vec_sub(&e, &f)));
            }
            self.free.push((i, e, f));
        }
    }

    fn add_spare(&mut self) -> bool {
        if self.spare.is_empty() {
            return false;
        }
        let (tie, v) = self.spare.remove(0);
        if let Some(i) = tie {
            self.free.retain(|(j, _, _)| *j != i);
        }
        self.push(v);
        true
    }

    fn drop_fixed(&mut self) -> bool {
        let untied = self
            .fixed
            .iter()
            .copied()
            .find(|i| !self.free.iter().any(|(j, _, _)| j == i));
        let Some(i) = untied.or_else(|| self.fixed.first().copied()) else {
            return false;
        };
        self.fixed.retain(|j| *j != i);
        self.free.retain(|(j, _, _)| *j != i);
        self.factors[i] = None;
        true
    }
}

/// Builds `s` as a product of pairwise orthogonal vectors: `eᵢ + fᵢ` over
/// each `W_λ`, a Witt-adapted half basis of `V₋₁`, and with `include_fixed`
/// a half basis of `V₁`. With `want_even` the length is adjusted by one
/// `V₁` vector. The norm is normalized to 1 by a square root or by
/// rescaling a free pair factor.
fn assemble(
    ctx: &CliffordCtx,
    split: &EigenSplit,
    include_fixed: bool,
    want_even: bool,
) -> Result<Multivector, RealityError> {
    let space = ctx.space();
    let field = ctx.field();
    let mut plan = Plan {
        factors: Vec::new(),
        free: Vec::new(),
        spare: Vec::new(),
        fixed: Vec::new(),
    };
    for p in &split.pairs {
        plan.add_pairs(p.pairs().map(|(e, f)| (e.clone(), f.clone())), false);
    }
    if split.minus_one.dim() > 0 {
        let wb = space.witt_decompose_span(&split.minus_one.basis)?;
        plan.add_pairs(wb.pairs.clone(), false);
        let half = wb.anisotropic.len() / 2;
        for v in wb.anisotropic.into_iter().take(half) {
            plan.push(v);
        }
    }
    if include_fixed && split.one.dim() > 0 {
        let wb = space.witt_decompose_span(&split.one.basis)?;
        plan.add_pairs(wb.pairs.clone(), true);
        let half = wb.anisotropic.len() / 2;
        for (k, v) in wb.anisotropic.into_iter().enumerate() {
            if k < half {
                let i = plan.push(v);
                plan.fixed.push(i);
            } else {
                plan.spare.push((None, v));
            }
        }
    }
    if want_even && plan.len() % 2 == 1 {
        let k = plan.len();
        // prefer the length whose sign (-1)^{k(k-1)/2} is +1 in even dimension
        let prefer_drop = ctx.dim() % 2 == 0 && (k - 1) % 4 == 0;
        let fixed_up = if prefer_drop {
            plan.drop_fixed() || plan.add_spare()
        } else {
            plan.add_spare() || plan.drop_fixed()
        };
        if !fixed_up {
            return Err(RealityError::NoNormOneConjugator);
        }
    }
    let norm = plan
        .factors
        .iter()
        .flatten()
        .fold(field.one(), |acc, v| &acc * &space.q(v));
    let mut scale = field.one();
    match field.is_square(&norm)? {
        Some(c) => scale = c.inv().expect("nonzero root"),
        None => {
            let (i, e, f) = plan
                .free
                .first()
                .cloned()
                .ok_or(RealityError::NoNormOneConjugator)?;
            let d_inv = norm.inv().expect("anisotropic factors");
            plan.factors[i] = Some(vec_add(&e, &vec_scale(&f, &d_inv)));
        }
    }
    let vs: Vec<Vector> = plan.factors.into_iter().flatten().collect();
    Ok(ctx.vector_product(&vs)?.scale(&scale))
}

fn relation_for(t: &GroupElement) -> Relation {
    if t.norm().is_one() {
        Relation::Inverse
    } else {
        Relation::NormInverse
    }
}

/// Γ-level conjugator: product of standard conjugators over the `W_λ` and
/// `V₋₁` blocks, with relation `s t s⁻¹ = N(t) t⁻¹`.
pub fn blockwise_conjugator(
    ctx: &CliffordCtx,
    t: &GroupElement,
) -> Result<RealityCertificate, RealityError> {
    if !t.is_even() {
        return Err(RealityError::NotInGammaPlus);
    }
    let split = eigen_split(ctx, t)?;
    let s = assemble(ctx, &split, false, false)?;
    RealityCertificate::new(ctx, t, s, Relation::NormInverse)
}

/// Even conjugator of norm 1 drawing on every eigenspace block, so that
/// `s ∈ Spin`.
pub fn spin_conjugator(
    ctx: &CliffordCtx,
    t: &GroupElement,
) -> Result<RealityCertificate, RealityError> {
    if !t.is_even() {
        return Err(RealityError::NotInGammaPlus);
    }
    let split = eigen_split(ctx, t)?;
    spin_conjugator_from(ctx, t, &split)
}

fn spin_conjugator_from(
    ctx: &CliffordCtx,
    t: &GroupElement,
    split: &EigenSplit,
) -> Result<RealityCertificate, RealityError> {
    let s = assemble(ctx, split, true, true)?;
    RealityCertificate::new(ctx, t, s, relation_for(t))
}

pub(crate) fn check_semisimple(ctx: &CliffordCtx, t: &GroupElement) -> Result<(), RealityError> {
    if let Some(p) = ctx.field().order() {
        let order = element_order(ctx, t.mv(), ORDER_CAP)
            .ok_or_else(|| RealityError::Undecided(format!("element order exceeds {ORDER_CAP}")))?;
        if order % p == 0 {
            return Err(RealityError::NotSemisimple);
        }
    }
    Ok(())
}

/// Decides whether a semisimple `t ∈ Spin` is conjugate to `t⁻¹` in Spin,
/// returning a verified certificate for every positive answer.
pub fn is_real_semisimple_spin(
    ctx: &CliffordCtx,
    t: &GroupElement,
) -> Result<Decision, RealityError> {
    if !t.is_spin() {
        return Err(RealityError::NotInSpin);
    }
    check_semisimple(ctx, t)?;
    let split = match eigen_split(ctx, t) {
        Ok(s) => s,
        Err(RealityError::EigenvaluesNotRational) => {
            return Ok(Decision::Undecided(
                "eigenvalues of χ(t) lie outside the base field".into(),
            ))
        }
        Err(e) => return Err(e),
    };
    let n = ctx.dim();
    if n % 4 == 2 && !split.has_eigenvalue_one() {
        return Ok(Decision::NotReal(
            "dim ≡ 2 mod 4 and 1 is not an eigenvalue of χ(t)".into(),
        ));
    }
    match spin_conjugator_from(ctx, t, &split) {
        Ok(cert) => Ok(Decision::Real(cert)),
        Err(RealityError::NoNormOneConjugator) if t.mv() == t.inverse() => Ok(Decision::Real(
            RealityCertificate::new(ctx, t, ctx.one(), Relation::Inverse)?,
        )),
        Err(RealityError::NoNormOneConjugator) => Ok(Decision::Undecided(if n % 4 == 3 {
            "dim ≡ 3 mod 4 and the split-torus construction does not apply".into()
        } else {
            "no norm-one conjugator is available from the eigenspace blocks".into()
        })),
        Err(e) => Err(e),
    }
}

/// `τ₁ = s⁻¹`, `τ₂ = s t`.
pub fn involution_decompose(
    ctx: &CliffordCtx,
    t: &GroupElement,
    cert: &RealityCertificate,
) -> Result<InvolutionPair, RealityError> {
    let inverse_relation = match cert.relation {
        Relation::Inverse => true,
        Relation::NormInverse => t.norm().is_one(),
        Relation::MinusNormInverse => t.norm().is_minus_one(),
    };
    if !inverse_relation || cert.t.mv() != t.mv() {
        return Err(RealityError::WrongRelation);
    }
    let tau1 = cert.s.invert(ctx);
    let tau2 = cert.s.mul(ctx, t);
    let square = |g: &GroupElement| {
        ctx.mul(g.mv(), g.mv())
            .as_scalar(ctx.field())
            .filter(|x| x.is_one() || x.is_minus_one())
            .ok_or(RealityError::SquareNotSign)
    };
    let eps1 = square(&tau1)?;
    let eps2 = square(&tau2)?;
    let pair = InvolutionPair {
        tau1,
        tau2,
        eps1,
        eps2,
    };
    if !pair.verify(ctx, t) {
        return Err(RealityError::RelationFails(Relation::Inverse));
    }
    Ok(pair)
}

/// Whether `q(V₁) ⊂ N(Z_{Γ⁺}(t))` for a strongly regular `t` in odd
/// dimension. Over a finite field the centralizer is enumerated from the
/// linear space `{x ∈ C₀ : x t = t x}`; `budget` bounds its size.
pub fn oddcase_condition(
    ctx: &CliffordCtx,
    t: &GroupElement,
    budget: u64,
) -> Result<bool, RealityError> {
    let field = ctx.field();
    if ctx.dim() % 2 == 0 {
        return Err(RealityError::PreconditionViolated(
            "dimension is even".into(),
        ));
    }
    if !t.is_even() {
        return Err(RealityError::NotInGammaPlus);
    }
    let split = eigen_split(ctx, t)?;
    if !split.is_strongly_regular() {
        return Err(RealityError::NotStronglyRegular);
    }
    let d = fixed_norm(ctx.space(), &split)?;
    if field.is_finite() {
        let norms = centralizer_norms(ctx, t, budget)?;
        return Ok(norms.contains(&d));
    }
    if field.is_square(&d)?.is_some() || !split.pairs.is_empty() {
        return Ok(true);
    }
    let minus_split = split.minus_one.dim() > 0
        && ctx
            .space()
            .witt_decompose_span(&split.minus_one.basis)?
            .witt_index()
            > 0;
    if minus_split {
        return Ok(true);
    }
    Err(RealityError::Undecided(
        "norm image of a non-split torus over the rationals".into(),
    ))
}

fn fixed_norm(space: &QSpace, split: &EigenSplit) -> Result<Scalar, RealityError> {
    let (vs, qs) = space.diagonalize_span(&split.one.basis)?;
    debug_assert!(!vs.is_empty());
    Ok(qs[0].clone())
}

/// Norms of every element of `Z_{Γ⁺}(t)`, by exhaustive enumeration.
pub(crate) fn centralizer_norms(
    ctx: &CliffordCtx,
    t: &GroupElement,
    budget: u64,
) -> Result<BTreeSet<Scalar>, RealityError> {
    let field = ctx.field();
    let basis = ctx.even_solutions(t.mv(), &field.one());
    let dim = basis.len();
    let tuples = coefficient_tuples(field, dim)
        .filter(|_| {
            field
                .order()
                .and_then(|p| p.checked_pow(dim as u32))
                .is_some_and(|n| n <= budget)
        })
        .ok_or(RealityError::CentralizerTooLarge { dim })?;
    let mut norms = BTreeSet::new();
    for coeffs in tuples {
        let x = basis
            .iter()
            .zip(&coeffs)
            .fold(Multivector::zero(), |acc, (b, c)| acc.add(&b.scale(c)));
        if let Some(nx) = gamma_norm(ctx, &x) {
            norms.insert(nx);
        }
    }
    Ok(norms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::linalg::Matrix;
    use crate::reality::{make_torus_element, standard_sign, Membership};

    fn ints(f: Field, xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| f.from_i64(x)).collect()
    }

    fn split_ctx(f: Field, m: usize, aniso: &[i64]) -> (CliffordCtx, crate::quadratic::WittBasis) {
        let space = QSpace::hyperbolic_plus(f, m, &ints(f, aniso)).unwrap();
        let basis = space.witt_decompose().unwrap();
        (CliffordCtx::new(space).unwrap(), basis)
    }

    /// Spin element of the standard torus: `λ₀ = 1/μ` with `∏ λᵢ = μ²`.
    fn spin_torus(
        ctx: &CliffordCtx,
        basis: &crate::quadratic::WittBasis,
        lambdas: &[i64],
        mu: i64,
    ) -> GroupElement {
        let f = ctx.field();
        let t = make_torus_element(ctx, f.from_i64(mu).inv().unwrap(), ints(f, lambdas), basis)
            .unwrap();
        assert!(t.is_spin());
        t
    }

    #[test]
    fn blockwise_on_standard_torus_matches_standard() {
        let q = Field::rationals();
        let (ctx, basis) = split_ctx(q, 2, &[]);
        let t = make_torus_element(&ctx, q.one(), ints(q, &[2, 3]), &basis).unwrap();
        let cert = blockwise_conjugator(&ctx, &t).unwrap();
        assert!(cert.verify(&ctx).all());
        assert_eq!(cert.s_squared, Some(standard_sign(q, 2)));
    }

    #[test]
    fn blockwise_supported_on_moving_block() {
        let q = Field::rationals();
        let (ctx, basis) = split_ctx(q, 2, &[]);
        let t = make_torus_element(&ctx, q.one(), ints(q, &[1, 2]), &basis).unwrap();
        let cert = blockwise_conjugator(&ctx, &t).unwrap();
        assert!(cert.verify(&ctx).all());
        // s is a single vector in the second hyperbolic plane
        let v = ctx.extract_vector(cert.s.mv()).unwrap();
        assert!(v[0].is_zero() && v[1].is_zero());
    }

    #[test]
    fn blockwise_minus_identity() {
        let q = Field::rationals();
        let (ctx, _) = split_ctx(q, 2, &[]);
        let e = ctx.internal_basis().columns();
        let t = GroupElement::from_vectors(&ctx, &e).unwrap();
        assert_eq!(*t.chi(), Matrix::identity(q, 4).scale(&q.from_i64(-1)));
        let cert = blockwise_conjugator(&ctx, &t).unwrap();
        assert!(cert.verify(&ctx).all());
    }

    #[test]
    fn dim4_spin_torus_is_real_with_minus_sign() {
        let q = Field::rationals();
        let (ctx, basis) = split_ctx(q, 2, &[]);
        let t = spin_torus(&ctx, &basis, &[2, 8], 4);
        let Decision::Real(cert) = is_real_semisimple_spin(&ctx, &t).unwrap() else {
            panic!("expected real");
        };
        assert_eq!(cert.s_in, Membership::Spin);
        let pair = involution_decompose(&ctx, &t, &cert).unwrap();
        assert!(pair.eps1.is_minus_one() && pair.eps2.is_minus_one());
    }

    #[test]
    fn dim6_without_eigenvalue_one_is_not_real() {
        let q = Field::rationals();
        let (ctx, basis) = split_ctx(q, 3, &[]);
        let t = spin_torus(&ctx, &basis, &[2, 3, 6], 6);
        assert!(matches!(
            is_real_semisimple_spin(&ctx, &t).unwrap(),
            Decision::NotReal(_)
        ));
        let t5 = spin_torus(&ctx, &basis, &[2, 3, 5 * 5 * 6], 30);
        assert!(matches!(
            is_real_semisimple_spin(&ctx, &t5).unwrap(),
            Decision::NotReal(_)
        ));
    }

    #[test]
    fn dim6_with_eigenvalue_one_is_real() {
        let q = Field::rationals();
        let (ctx, basis) = split_ctx(q, 3, &[]);
        let t = spin_torus(&ctx, &basis, &[1, 3, 12], 6);
        let Decision::Real(cert) = is_real_semisimple_spin(&ctx, &t).unwrap() else {
            panic!("expected real");
        };
        assert!(cert.verify(&ctx).all());
        assert_eq!(cert.s_in, Membership::Spin);
        let pair = involution_decompose(&ctx, &t, &cert).unwrap();
        assert!(pair.verify(&ctx, &t));
    }

    #[test]
    fn dim8_gives_involutions() {
        let q = Field::rationals();
        let (ctx, basis) = split_ctx(q, 4, &[]);
        let t = spin_torus(&ctx, &basis, &[2, 3, 5, 30], 30);
        let Decision::Real(cert) = is_real_semisimple_spin(&ctx, &t).unwrap() else {
            panic!("expected real");
        };
        let pair = involution_decompose(&ctx, &t, &cert).unwrap();
        assert!(pair.eps1.is_one() && pair.eps2.is_one());
    }

    #[test]
    fn trivial_decomposition() {
        let q = Field::rationals();
        let (ctx, _) = split_ctx(q, 1, &[]);
        let one = GroupElement::new(&ctx, ctx.one()).unwrap();
        let cert = RealityCertificate::new(&ctx, &one, ctx.one(), Relation::Inverse).unwrap();
        let pair = involution_decompose(&ctx, &one, &cert).unwrap();
        assert_eq!(*pair.tau1.mv(), ctx.one());
        assert_eq!(*pair.tau2.mv(), ctx.one());
    }

    #[test]
    fn central_elements_are_real_in_every_dimension() {
        let f = Field::prime(3).unwrap();
        for (m, aniso) in [(1, &[1][..]), (1, &[1, 1, 1][..]), (3, &[1][..])] {
            let (ctx, _) = split_ctx(f, m, aniso);
            for c in [f.one(), -f.one()] {
                let t = GroupElement::new(&ctx, ctx.scalar(c)).unwrap();
                match is_real_semisimple_spin(&ctx, &t).unwrap() {
                    Decision::Real(cert) => assert!(cert.verify(&ctx).all()),
                    other => panic!("dim {}: {other:?}", ctx.dim()),
                }
            }
        }
    }

    #[test]
    fn wrong_relation_rejected() {
        let q = Field::rationals();
        let (ctx, basis) = split_ctx(q, 2, &[]);
        let t = make_torus_element(&ctx, q.one(), ints(q, &[2, 3]), &basis).unwrap();
        let cert = blockwise_conjugator(&ctx, &t).unwrap();
        assert_eq!(
            involution_decompose(&ctx, &t, &cert),
            Err(RealityError::WrongRelation)
        );
    }

    #[test]
    fn not_in_spin_rejected() {
        let q = Field::rationals();
        let (ctx, basis) = split_ctx(q, 2, &[]);
        let t = make_torus_element(&ctx, q.one(), ints(q, &[2, 3]), &basis).unwrap();
        assert_eq!(
            is_real_semisimple_spin(&ctx, &t),
            Err(RealityError::NotInSpin)
        );
    }

    #[test]
    fn oddcase_examples() {
        let f5 = Field::prime(5).unwrap();
        let (ctx, basis) = split_ctx(f5, 1, &[1]);
        let t = make_torus_element(&ctx, f5.one(), ints(f5, &[2]), &basis).unwrap();
        assert!(oddcase_condition(&ctx, &t, 1 << 20).unwrap());

        let f3 = Field::prime(3).unwrap();
        let (ctx3, basis3) = split_ctx(f3, 1, &[2]);
        let t3 = make_torus_element(&ctx3, f3.one(), ints(f3, &[2]), &basis3).unwrap();
        // λ = -1 here, so V₋₁ is the hyperbolic plane and the torus norm image is all of F₃*
        assert!(oddcase_condition(&ctx3, &t3, 1 << 20).unwrap());

        let one = GroupElement::new(&ctx, ctx.one()).unwrap();
        assert_eq!(
            oddcase_condition(&ctx, &one, 1 << 20),
            Err(RealityError::NotStronglyRegular)
        );
    }
}
