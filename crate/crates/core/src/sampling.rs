//! Seeded random inputs for the property suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clifford::{CliffordCtx, Multivector};
use crate::field::{Field, Scalar};
use crate::groups::{lift_so, GroupElement, OrthMatrix};
use crate::linalg::{is_zero_vec, vec_add, vec_scale, vec_sub, Matrix, Vector};
use crate::quadratic::{QSpace, Subspace};

pub type SeededRng = ChaCha8Rng;

const ATTEMPTS: usize = 2000;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over `F_p`; over `ℚ`, numerator in `[-9, 9]` and denominator in `[1, 5]`.
pub fn scalar(field: Field, rng: &mut SeededRng) -> Scalar {
    match field.order() {
        Some(p) => field.from_i64(rng.gen_range(0..p) as i64),
        None => field
            .ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))
            .expect("nonzero denominator"),
    }
}

pub fn nonzero_scalar(field: Field, rng: &mut SeededRng) -> Scalar {
    loop {
        let x = scalar(field, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn vector(field: Field, n: usize, rng: &mut SeededRng) -> Vector {
    (0..n).map(|_| scalar(field, rng)).collect()
}

/// Random combination of the given spanning vectors.
fn combination(field: Field, span: &[Vector], rng: &mut SeededRng) -> Vector {
    let n = span[0].len();
    span.iter().fold(vec![field.zero(); n], |acc, v| {
        vec_add(&acc, &vec_scale(v, &scalar(field, rng)))
    })
}

pub fn anisotropic_vector(space: &QSpace, rng: &mut SeededRng) -> Vector {
    loop {
        let v = vector(space.field(), space.dim(), rng);
        if !space.q(&v).is_zero() {
            return v;
        }
    }
}

/// Each blade coefficient is nonzero with probability `density`.
pub fn multivector(ctx: &CliffordCtx, density: f64, rng: &mut SeededRng) -> Multivector {
    let mut terms = Vec::new();
    for b in 0..1u32 << ctx.dim() {
        if rng.gen_bool(density) {
            terms.push((b, scalar(ctx.field(), rng)));
        }
    }
    Multivector::from_terms(terms)
}

/// Product of `k` random anisotropic vectors.
pub fn gamma_element(ctx: &CliffordCtx, k: usize, rng: &mut SeededRng) -> GroupElement {
    let vs: Vec<Vector> = (0..k)
        .map(|_| anisotropic_vector(ctx.space(), rng))
        .collect();
    GroupElement::from_vectors(ctx, &vs).expect("anisotropic vectors")
}

/// `∏ v S_u(v) / q(v)` over `k` random pairs; each factor has norm 1.
pub fn spin_element(ctx: &CliffordCtx, k: usize, rng: &mut SeededRng) -> GroupElement {
    let space = ctx.space();
    let mut acc = ctx.one();
    for _ in 0..k {
        let v = anisotropic_vector(space, rng);
        let u = anisotropic_vector(space, rng);
        let w = space.reflection(&u).mul_vec(&v);
        let qv = space.q(&v);
        let factor = ctx
            .vector_product(&[v, w])
            .expect("dimension")
            .scale(&qv.inv().expect("anisotropic"));
        acc = ctx.mul(&acc, &factor);
    }
    GroupElement::new(ctx, acc).expect("product of vectors")
}

/// A random `d`-dimensional nondegenerate subspace of `span(within)`.
pub fn nondegenerate_subspace(
    space: &QSpace,
    within: &[Vector],
    d: usize,
    rng: &mut SeededRng,
) -> Option<Subspace> {
    if d > within.len() {
        return None;
    }
    for _ in 0..ATTEMPTS {
        let basis: Vec<Vector> = (0..d)
            .map(|_| combination(space.field(), within, rng))
            .collect();
        let gram = space.restricted_gram(&basis);
        if !gram.det().is_zero() {
            return Subspace::new(space.field(), basis).ok();
        }
    }
    None
}

/// `(λ₀, λ₁, …, λ_m)`, all nonzero.
pub fn torus_parameters(field: Field, m: usize, rng: &mut SeededRng) -> (Scalar, Vec<Scalar>) {
    (
        nonzero_scalar(field, rng),
        (0..m).map(|_| nonzero_scalar(field, rng)).collect(),
    )
}

/// Eigenspace layout of a semisimple `χ(t)`: `dim V₁`, `dim V₋₁` and one
/// hyperbolic plane per listed eigenvalue `λ ≠ ±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemisimplePlan {
    pub one: usize,
    pub minus_one: usize,
    pub lambdas: Vec<Scalar>,
}

/// A random layout for dimension `n`: `k` planes with eigenvalues outside
/// `{0, ±1}`, the rest split between `V₁` and an even `V₋₁`. `None` when the
/// field has no such eigenvalues and `k > 0` was drawn.
pub fn random_plan(field: Field, n: usize, rng: &mut SeededRng) -> Option<SemisimplePlan> {
    let k = rng.gen_range(0..=n / 2);
    let rest = n - 2 * k;
    let minus_one = 2 * rng.gen_range(0..=rest / 2);
    let mut lambdas = Vec::with_capacity(k);
    for _ in 0..k {
        let l = (0..ATTEMPTS)
            .map(|_| nonzero_scalar(field, rng))
            .find(|l| !l.is_one() && !l.is_minus_one())?;
        lambdas.push(l);
    }
    Some(SemisimplePlan {
        one: rest - minus_one,
        minus_one,
        lambdas,
    })
}

fn hyperbolic_pair(
    space: &QSpace,
    within: &[Vector],
    rng: &mut SeededRng,
) -> Option<(Vector, Vector)> {
    let field = space.field();
    for _ in 0..ATTEMPTS {
        let e = combination(field, within, rng);
        if is_zero_vec(&e) || !space.q(&e).is_zero() {
            continue;
        }
        let g = combination(field, within, rng);
        let b = space.polar(&e, &g).ok()?;
        let Some(b_inv) = b.inv() else { continue };
        // f = (g − q(g)/B(e,g) e) / B(e,g) is isotropic with B(e, f) = 1
        let f = vec_scale(
            &vec_sub(&g, &vec_scale(&e, &(&space.q(&g) * &b_inv))),
            &b_inv,
        );
        return Some((e, f));
    }
    None
}

/// A random element of `Spin` whose `χ` realizes `plan`, built from a
/// random orthogonal splitting and lifted through `SO`. `None` when the
/// splitting fails or the lift has nonsquare norm.
pub fn semisimple_spin(
    ctx: &CliffordCtx,
    plan: &SemisimplePlan,
    rng: &mut SeededRng,
) -> Option<GroupElement> {
    let space = ctx.space();
    let field = ctx.field();
    let n = ctx.dim();
    if plan.one + plan.minus_one + 2 * plan.lambdas.len() != n || plan.minus_one % 2 == 1 {
        return None;
    }
    let mut rest: Vec<Vector> = Matrix::identity(field, n).columns();
    let mut columns = Vec::new();
    let mut diag = Vec::new();
    let one = nondegenerate_subspace(space, &rest, plan.one, rng)?;
    rest = space.orthogonal_complement(&one.basis);
    columns.extend(one.basis);
    diag.extend(std::iter::repeat(field.one()).take(plan.one));
    for lambda in &plan.lambdas {
        let (e, f) = hyperbolic_pair(space, &rest, rng)?;
        let mut used = columns.clone();
        used.push(e.clone());
        used.push(f.clone());
        rest = space.orthogonal_complement(&used);
        columns.push(e);
        columns.push(f);
        diag.push(lambda.clone());
        diag.push(lambda.inv()?);
    }
    columns.extend(rest);
    diag.extend(std::iter::repeat(-field.one()).take(plan.minus_one));
    let basis = Matrix::from_columns(field, n, &columns);
    let g = basis
        .mul(&Matrix::diagonal(field, &diag))
        .mul(&basis.inverse()?);
    let orth = OrthMatrix::new(space, g).ok()?;
    let u = lift_so(ctx, &orth).ok()?;
    let c = field.is_square(u.norm()).ok()??;
    let sign = if rng.gen_bool(0.5) {
        field.one()
    } else {
        -field.one()
    };
    let s = u.mv().scale(&(&sign * &c.inv()?));
    GroupElement::new(ctx, s).ok()
}
