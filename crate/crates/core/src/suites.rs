//! Seeded property suites over a fixed quadratic space. Each suite draws
//! from its own stream, so results do not depend on scheduling.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::{CliffordCtx, Multivector};
use crate::groups::{lift_so, reflection_factorize, spinor_norm, OrthMatrix};
use crate::linalg::Matrix;
use crate::reality::{
    involution_lift, minus_conjugator, sign, standard_conjugator, standard_sign, RealityError,
    TorusElement,
};
use crate::sampling::{self, SeededRng};

/// One identity, the number of instances checked and how many failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckLine>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }
}

#[derive(Default)]
struct Tally {
    lines: Vec<CheckLine>,
}

impl Tally {
    fn record(&mut self, name: &str, ok: bool) {
        let line = match self.lines.iter_mut().find(|l| l.name == name) {
            Some(l) => l,
            None => {
                self.lines.push(CheckLine {
                    name: name.to_string(),
                    checked: 0,
                    failed: 0,
                });
                self.lines.last_mut().expect("just pushed")
            }
        };
        line.checked += 1;
        if !ok {
            line.failed += 1;
        }
    }

    fn finish(self, suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            checks: self.lines,
        }
    }
}

pub const SUITES: [&str; 4] = ["algebra", "groups", "lifting", "torus"];

/// Associativity, `x² = q(x)`, `xy + yx = B(x, y)`, reversion and grade
/// involution against products.
pub fn algebra_suite(ctx: &CliffordCtx, samples: usize, rng: &mut SeededRng) -> SuiteReport {
    let space = ctx.space();
    let field = ctx.field();
    let mut t = Tally::default();
    for _ in 0..samples {
        let [x, y, z] = [0, 1, 2].map(|_| sampling::multivector(ctx, 0.5, rng));
        let xy = ctx.mul(&x, &y);
        t.record(
            "associativity",
            ctx.mul(&xy, &z) == ctx.mul(&x, &ctx.mul(&y, &z)),
        );
        t.record(
            "reversion anti-automorphism",
            xy.reversion() == ctx.mul(&y.reversion(), &x.reversion()),
        );
        t.record(
            "grade involution automorphism",
            xy.grade_involution() == ctx.mul(&x.grade_involution(), &y.grade_involution()),
        );
        let a = sampling::vector(field, ctx.dim(), rng);
        let b = sampling::vector(field, ctx.dim(), rng);
        let (va, vb) = (
            ctx.embed_vector(&a).expect("dim"),
            ctx.embed_vector(&b).expect("dim"),
        );
        t.record(
            "square equals q",
            ctx.mul(&va, &va) == ctx.scalar(space.q(&a)),
        );
        let anti = ctx.mul(&va, &vb).add(&ctx.mul(&vb, &va));
        t.record(
            "anticommutator equals B",
            anti == ctx.scalar(space.polar(&a, &b).expect("dim")),
        );
    }
    t.finish("algebra")
}

/// `Γ` membership, multiplicativity of `χ` and `N`, reflection
/// factorization, spinor norm and lifting through `SO`.
pub fn group_suite(ctx: &CliffordCtx, samples: usize, rng: &mut SeededRng) -> SuiteReport {
    let space = ctx.space();
    let field = ctx.field();
    let n = ctx.dim();
    let mut t = Tally::default();
    for _ in 0..samples {
        let k = rng.gen_range(1..=n);
        let u = sampling::gamma_element(ctx, k, rng);
        let v = sampling::gamma_element(ctx, rng.gen_range(1..=n), rng);
        let uv = u.mul(ctx, &v);
        t.record("chi preserves the form", space.preserves_form(u.chi()));
        t.record("chi multiplicative", *uv.chi() == u.chi().mul(v.chi()));
        t.record("norm multiplicative", *uv.norm() == u.norm() * v.norm());
        t.record("parity of vector products", u.is_even() == (k % 2 == 0));
        let m = OrthMatrix::new(space, u.chi().clone()).expect("orthogonal");
        let vs = reflection_factorize(space, &m);
        let composed = vs.iter().fold(Matrix::identity(field, n), |acc, x| {
            acc.mul(&space.reflection(x))
        });
        t.record(
            "reflection factorization",
            composed == *m.matrix() && vs.len() <= n,
        );
        if u.is_even() {
            let sn = spinor_norm(space, &m).expect("special");
            t.record(
                "spinor norm equals norm class",
                Some(sn) == field.square_class(u.norm()).ok(),
            );
            let lift = lift_so(ctx, &m).expect("special");
            let ratio = ctx.mul(lift.mv(), u.inverse()).as_scalar(field);
            t.record(
                "lift through SO up to scalar",
                ratio.is_some_and(|r| !r.is_zero()),
            );
        }
        let s = sampling::spin_element(ctx, rng.gen_range(1..=n), rng);
        t.record("spin samples have norm one", s.is_spin());
    }
    t.finish("groups")
}

/// Involutions from even-dimensional nondegenerate subspaces.
pub fn lifting_suite(ctx: &CliffordCtx, samples: usize, rng: &mut SeededRng) -> SuiteReport {
    let space = ctx.space();
    let field = ctx.field();
    let n = ctx.dim();
    let mut t = Tally::default();
    if n < 2 {
        return t.finish("lifting");
    }
    let all = Matrix::identity(field, n).columns();
    for _ in 0..samples {
        let r = rng.gen_range(1..=n / 2);
        let Some(w) = sampling::nondegenerate_subspace(space, &all, 2 * r, rng) else {
            continue;
        };
        let disc = space.discriminant(&w).expect("nondegenerate");
        let class = field
            .square_class(&(&sign(field, r) * &disc))
            .expect("nonzero");
        match involution_lift(ctx, &w) {
            Ok(u) => {
                t.record("lift exists iff class is 1", class.is_one());
                t.record("lift squares to one", ctx.mul(u.mv(), u.mv()) == ctx.one());
                let acts = w.basis.iter().all(|x| {
                    let y = u.chi().mul_vec(x);
                    y.iter().zip(x).all(|(a, b)| *a == -b)
                }) && space
                    .orthogonal_complement(&w.basis)
                    .iter()
                    .all(|x| u.chi().mul_vec(x) == *x);
                t.record("lift acts as -1 on W and 1 on its complement", acts);
            }
            Err(RealityError::NotLiftable(c)) => {
                t.record("lift exists iff class is 1", !class.is_one());
                t.record("obstruction class reported", c == class);
            }
            Err(_) => t.record("lift exists iff class is 1", false),
        }
    }
    t.finish("lifting")
}

/// Standard torus of the space's own Witt basis: `χ`, `N` and the
/// conjugators `∏ (eᵢ + fᵢ)` and `∏_{i≥2} (eᵢ + fᵢ)`.
pub fn torus_suite(ctx: &CliffordCtx, samples: usize, rng: &mut SeededRng) -> SuiteReport {
    let field = ctx.field();
    let mut t = Tally::default();
    let basis = ctx.space().witt_decompose().expect("nondegenerate");
    let m = basis.witt_index();
    if m == 0 {
        return t.finish("torus");
    }
    let s = standard_conjugator(ctx, &basis).expect("Witt basis");
    let s_inv = s.inverse().clone();
    for _ in 0..samples {
        let (l0, mut ls) = sampling::torus_parameters(field, m, rng);
        if m % 2 == 1 && rng.gen_bool(0.5) {
            ls[0] = -field.one();
        }
        let torus = TorusElement::new(l0, ls, basis.clone()).expect("nonzero parameters");
        let el = torus.element(ctx).expect("torus element");
        t.record(
            "chi is diagonal in Witt coordinates",
            *el.chi() == torus.predicted_chi(field),
        );
        t.record(
            "norm is lambda0 squared times product",
            *el.norm() == torus.norm(),
        );
        let target = el.inverse().scale(el.norm());
        t.record(
            "standard conjugator",
            ctx.sandwich(s.mv(), el.mv(), &s_inv) == target,
        );
        if torus.lambdas[0].is_minus_one() && m % 2 == 1 {
            let sm = minus_conjugator(ctx, &torus).expect("preconditions hold");
            let ok = ctx.sandwich(sm.mv(), el.mv(), sm.inverse()) == target.neg()
                && sm.norm().is_one()
                && ctx.mul(sm.mv(), sm.mv())
                    == Multivector::scalar(sign(field, (m - 1) * (m.saturating_sub(2)) / 2));
            t.record("minus conjugator", ok);
        }
    }
    let ok =
        s.norm().is_one() && ctx.mul(s.mv(), s.mv()) == Multivector::scalar(standard_sign(field, m));
    t.record("standard conjugator norm and square", ok);
    t.finish("torus")
}

/// Runs the named suites in parallel, each seeded by `seed` and its index.
pub fn verify_identities(
    ctx: &CliffordCtx,
    suites: &[&str],
    seed: u64,
    samples: usize,
) -> Vec<SuiteReport> {
    suites
        .par_iter()
        .map(|name| {
            let idx = SUITES.iter().position(|s| s == name).expect("known suite") as u64;
            let mut rng = sampling::rng(seed.wrapping_mul(31).wrapping_add(idx));
            match *name {
                "algebra" => algebra_suite(ctx, samples, &mut rng),
                "groups" => group_suite(ctx, samples, &mut rng),
                "lifting" => lifting_suite(ctx, samples, &mut rng),
                _ => torus_suite(ctx, samples, &mut rng),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::quadratic::QSpace;

    #[test]
    fn suites_pass_on_small_spaces() {
        for (p, form) in [
            (5, "hyperbolic:3"),
            (0, "hyperbolic:2+diag:[1,3]"),
            (7, "hyperbolic:1+diag:[2]"),
        ] {
            let f = if p == 0 {
                Field::rationals()
            } else {
                Field::prime(p).unwrap()
            };
            let ctx = CliffordCtx::new(QSpace::from_shorthand(f, form).unwrap()).unwrap();
            for r in verify_identities(&ctx, &SUITES, 1, 15) {
                assert!(r.passed(), "{form}: {r:?}");
                assert!(r.checks.iter().all(|c| c.checked > 0), "{form}: {r:?}");
            }
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let f = Field::prime(5).unwrap();
        let ctx = CliffordCtx::new(QSpace::hyperbolic(f, 2)).unwrap();
        assert_eq!(
            verify_identities(&ctx, &SUITES, 4, 5),
            verify_identities(&ctx, &SUITES, 4, 5)
        );
    }
}
