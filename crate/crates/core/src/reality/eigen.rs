use crate::clifford::CliffordCtx;
use crate::field::Scalar;
use crate::groups::GroupElement;
use crate::linalg::{poly_roots, vec_add, vec_scale, Matrix, Vector};
use crate::quadratic::Subspace;

use super::RealityError;

/// `W_λ = V_λ ⊕ V_{λ⁻¹}` with `V_λ` spanned by `e` and `V_{λ⁻¹}` by the
/// `B`-dual vectors `f`, so `(eᵢ, fᵢ)` are hyperbolic pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenPair {
    pub lambda: Scalar,
    pub e: Vec<Vector>,
    pub f: Vec<Vector>,
}

impl EigenPair {
    pub fn w(&self) -> Subspace {
        Subspace {
            basis: self.e.iter().chain(&self.f).cloned().collect(),
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Vector, &Vector)> {
        self.e.iter().zip(&self.f)
    }
}

/// `V = V₁ ⊕ V₋₁ ⊕ ⨁ W_λ` for a semisimple `χ(t)` with eigenvalues in the
/// base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenSplit {
    pub one: Subspace,
    pub minus_one: Subspace,
    pub pairs: Vec<EigenPair>,
}

impl EigenSplit {
    pub fn has_eigenvalue_one(&self) -> bool {
        self.one.dim() > 0
    }

    pub fn has_eigenvalue_minus_one(&self) -> bool {
        self.minus_one.dim() > 0
    }

    /// Centralizer in Spin is a maximal torus: `±1` eigenspaces of
    /// dimension at most 2 and every other eigenvalue simple.
    pub fn is_strongly_regular(&self) -> bool {
        self.one.dim() <= 2
            && self.minus_one.dim() <= 2
            && self.pairs.iter().all(|p| p.e.len() == 1)
    }

    /// Eigenvalues with multiplicity, ascending.
    pub fn eigenvalues(&self) -> Vec<(Scalar, usize)> {
        let mut out = Vec::new();
        if let Some(v) = self.one.basis.first() {
            let one = v[0].field().one();
            out.push((one, self.one.dim()));
        }
        if let Some(v) = self.minus_one.basis.first() {
            let m1 = -v[0].field().one();
            out.push((m1, self.minus_one.dim()));
        }
        for p in &self.pairs {
            let inv = p.lambda.inv().expect("nonzero eigenvalue");
            out.push((p.lambda.clone(), p.e.len()));
            out.push((inv, p.f.len()));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

fn eigenspace(m: &Matrix, lambda: &Scalar) -> Vec<Vector> {
    let field = m.field();
    m.sub(&Matrix::identity(field, m.rows()).scale(lambda))
        .kernel()
}

pub fn eigen_split(ctx: &CliffordCtx, t: &GroupElement) -> Result<EigenSplit, RealityError> {
    let field = ctx.field();
    let space = ctx.space();
    let m = t.chi();
    let n = m.rows();
    let roots = poly_roots(&m.charpoly());
    if roots.iter().map(|r| r.1).sum::<usize>() != n {
        return Err(RealityError::EigenvaluesNotRational);
    }
    let mut spaces = Vec::with_capacity(roots.len());
    for (lambda, mult) in &roots {
        let basis = eigenspace(m, lambda);
        if basis.len() != *mult {
            return Err(RealityError::NotSemisimple);
        }
        spaces.push((lambda.clone(), basis));
    }
    let one = field.one();
    let minus_one = -field.one();
    let find = |l: &Scalar| spaces.iter().find(|(x, _)| x == l).map(|(_, b)| b.clone());
    let mut pairs = Vec::new();
    for (lambda, plus) in &spaces {
        if *lambda == one || *lambda == minus_one {
            continue;
        }
        let inv = lambda.inv().expect("nonzero eigenvalue");
        if inv > *lambda {
            continue;
        }
        let minus = find(&inv).ok_or(RealityError::NotSemisimple)?;
        let k = plus.len();
        let mut g = Matrix::zeros(field, k, k);
        for i in 0..k {
            for j in 0..k {
                g.set(i, j, space.polar(&plus[i], &minus[j])?);
            }
        }
        let c = g.inverse().ok_or(RealityError::NotSemisimple)?;
        let f = (0..k)
            .map(|col| {
                (0..k).fold(vec![field.zero(); n], |acc, j| {
                    vec_add(&acc, &vec_scale(&minus[j], c.get(j, col)))
                })
            })
            .collect();
        pairs.push(EigenPair {
            lambda: lambda.clone(),
            e: plus.clone(),
            f,
        });
    }
    Ok(EigenSplit {
        one: Subspace {
            basis: find(&one).unwrap_or_default(),
        },
        minus_one: Subspace {
            basis: find(&minus_one).unwrap_or_default(),
        },
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::quadratic::QSpace;
    use crate::reality::make_torus_element;

    #[test]
    fn torus_split() {
        let q = Field::rationals();
        let space = QSpace::hyperbolic(q, 2);
        let basis = space.witt_decompose().unwrap();
        let ctx = CliffordCtx::new(space.clone()).unwrap();
        let t =
            make_torus_element(&ctx, q.one(), vec![q.from_i64(2), q.from_i64(3)], &basis).unwrap();
        let split = eigen_split(&ctx, &t).unwrap();
        assert_eq!(split.one.dim(), 0);
        assert_eq!(split.minus_one.dim(), 0);
        let lambdas: Vec<Scalar> = split.pairs.iter().map(|p| p.lambda.clone()).collect();
        assert_eq!(lambdas, vec![q.from_i64(2), q.from_i64(3)]);
        for p in &split.pairs {
            for (e, f) in p.pairs() {
                assert!(space.q(e).is_zero());
                assert!(space.q(f).is_zero());
                assert!(space.polar(e, f).unwrap().is_one());
            }
        }
        assert!(split.is_strongly_regular());
    }

    #[test]
    fn identity_split() {
        let q = Field::rationals();
        let ctx = CliffordCtx::new(QSpace::hyperbolic(q, 2)).unwrap();
        let one = GroupElement::new(&ctx, ctx.one()).unwrap();
        let split = eigen_split(&ctx, &one).unwrap();
        assert_eq!(split.one.dim(), 4);
        assert!(split.pairs.is_empty());
        assert!(!split.is_strongly_regular());
    }

    #[test]
    fn irrational_eigenvalues() {
        let q = Field::rationals();
        let ctx = CliffordCtx::new(QSpace::diagonal(q, &[q.one(), q.one()]).unwrap()).unwrap();
        let r =
            GroupElement::from_vectors(&ctx, &[vec![q.one(), q.zero()], vec![q.one(), q.one()]])
                .unwrap();
        assert_eq!(
            eigen_split(&ctx, &r),
            Err(RealityError::EigenvaluesNotRational)
        );
    }

    #[test]
    fn unipotent_is_not_semisimple() {
        let q = Field::rationals();
        let space = QSpace::hyperbolic(q, 2);
        let ctx = CliffordCtx::new(space).unwrap();
        // product of reflections in e₁+f₁ and e₁+f₁+e₂ is a nontrivial unipotent
        let v = vec![q.one(), q.one(), q.zero(), q.zero()];
        let w = vec![q.one(), q.one(), q.one(), q.zero()];
        let u = GroupElement::from_vectors(&ctx, &[v, w]).unwrap();
        assert_eq!(eigen_split(&ctx, &u), Err(RealityError::NotSemisimple));
    }
}
