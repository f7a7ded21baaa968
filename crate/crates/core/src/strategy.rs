//! Named registries of conjugator constructions and reality deciders.

use std::sync::OnceLock;

use crate::clifford::CliffordCtx;
use crate::groups::GroupElement;
use crate::linalg::Matrix;
use crate::oracle::{
    centralizer_coset_decide, enumerate_spin, real_in_group, Caps, GroupTable, OracleError,
};
use crate::quadratic::WittBasis;
use crate::reality::{
    blockwise_conjugator, is_real_semisimple_spin, minus_conjugator, odd_split_conjugator,
    spin_conjugator, standard_conjugator, Decision, RealityCertificate, RealityError, Relation,
    TorusElement,
};

/// Builds a conjugator `s` for `t` relative to a fixed Witt basis.
pub trait ConjugatorStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn conjugate(
        &self,
        ctx: &CliffordCtx,
        basis: &WittBasis,
        t: &GroupElement,
    ) -> Result<RealityCertificate, RealityError>;
}

fn torus_of(
    ctx: &CliffordCtx,
    basis: &WittBasis,
    t: &GroupElement,
) -> Result<TorusElement, RealityError> {
    TorusElement::recognize(ctx, basis, t).ok_or_else(|| {
        RealityError::PreconditionViolated("element is not in the standard torus".into())
    })
}

/// `∏ (eᵢ + fᵢ)` for torus elements.
pub struct Standard;

impl ConjugatorStrategy for Standard {
    fn name(&self) -> &'static str {
        "standard"
    }

    fn conjugate(
        &self,
        ctx: &CliffordCtx,
        basis: &WittBasis,
        t: &GroupElement,
    ) -> Result<RealityCertificate, RealityError> {
        torus_of(ctx, basis, t)?;
        let s = standard_conjugator(ctx, basis)?;
        RealityCertificate::new(ctx, t, s.mv().clone(), Relation::NormInverse)
    }
}

/// `∏_{i≥2} (eᵢ + fᵢ)` for torus elements with `λ₁ = -1`, `m` odd.
pub struct Minus;

impl ConjugatorStrategy for Minus {
    fn name(&self) -> &'static str {
        "minus"
    }

    fn conjugate(
        &self,
        ctx: &CliffordCtx,
        basis: &WittBasis,
        t: &GroupElement,
    ) -> Result<RealityCertificate, RealityError> {
        let torus = torus_of(ctx, basis, t)?;
        let s = minus_conjugator(ctx, &torus)?;
        RealityCertificate::new(ctx, t, s.mv().clone(), Relation::MinusNormInverse)
    }
}

/// `e₀ (e₁ + d⁻¹ f₁) ∏_{i≥2} (eᵢ + fᵢ)` in odd dimension.
pub struct OddSplit;

impl ConjugatorStrategy for OddSplit {
    fn name(&self) -> &'static str {
        "odd-split"
    }

    fn conjugate(
        &self,
        ctx: &CliffordCtx,
        basis: &WittBasis,
        t: &GroupElement,
    ) -> Result<RealityCertificate, RealityError> {
        odd_split_conjugator(ctx, t, basis)
    }
}

/// Eigenspace blocks of a semisimple `t ∈ Γ⁺`.
pub struct Blockwise;

impl ConjugatorStrategy for Blockwise {
    fn name(&self) -> &'static str {
        "blockwise"
    }

    fn conjugate(
        &self,
        ctx: &CliffordCtx,
        _: &WittBasis,
        t: &GroupElement,
    ) -> Result<RealityCertificate, RealityError> {
        blockwise_conjugator(ctx, t)
    }
}

/// Even, norm-one conjugator from all eigenspace blocks.
pub struct SpinLevel;

impl ConjugatorStrategy for SpinLevel {
    fn name(&self) -> &'static str {
        "spin"
    }

    fn conjugate(
        &self,
        ctx: &CliffordCtx,
        _: &WittBasis,
        t: &GroupElement,
    ) -> Result<RealityCertificate, RealityError> {
        spin_conjugator(ctx, t)
    }
}

pub struct ConjugatorRegistry {
    strategies: Vec<Box<dyn ConjugatorStrategy>>,
}

impl Default for ConjugatorRegistry {
    fn default() -> Self {
        ConjugatorRegistry {
            strategies: vec![
                Box::new(Standard),
                Box::new(Minus),
                Box::new(OddSplit),
                Box::new(Blockwise),
                Box::new(SpinLevel),
            ],
        }
    }
}

impl ConjugatorRegistry {
    pub fn register(&mut self, strategy: Box<dyn ConjugatorStrategy>) {
        self.strategies.push(strategy);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.iter().map(|s| s.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn ConjugatorStrategy> {
        self.strategies
            .iter()
            .find(|s| s.name() == name)
            .map(Box::as_ref)
    }

    /// First strategy, in registration order, that yields a certificate.
    pub fn first_success(
        &self,
        ctx: &CliffordCtx,
        basis: &WittBasis,
        t: &GroupElement,
    ) -> Result<(&'static str, RealityCertificate), RealityError> {
        let mut last = RealityError::PreconditionViolated("no strategy registered".into());
        for s in &self.strategies {
            match s.conjugate(ctx, basis, t) {
                Ok(cert) => return Ok((s.name(), cert)),
                Err(e) => last = e,
            }
        }
        Err(last)
    }
}

/// Decides whether `t ∈ Spin` is conjugate to `t⁻¹` inside `Spin`.
pub trait RealityDecider: Send + Sync {
    fn name(&self) -> &'static str;
    fn decide(&self, ctx: &CliffordCtx, t: &GroupElement) -> Result<Decision, OracleError>;
}

/// Eigenspace construction; works over any field.
pub struct Constructive;

impl RealityDecider for Constructive {
    fn name(&self) -> &'static str {
        "constructive"
    }

    fn decide(&self, ctx: &CliffordCtx, t: &GroupElement) -> Result<Decision, OracleError> {
        Ok(is_real_semisimple_spin(ctx, t)?)
    }
}

/// Exhaustive scan of the conjugators of `χ(t)` in `SO`.
pub struct Coset {
    pub budget: u64,
}

impl RealityDecider for Coset {
    fn name(&self) -> &'static str {
        "coset"
    }

    fn decide(&self, ctx: &CliffordCtx, t: &GroupElement) -> Result<Decision, OracleError> {
        let out = centralizer_coset_decide(ctx, t, self.budget)?;
        Ok(match out.witness_mv {
            Some(s) => Decision::Real(RealityCertificate::witness(ctx, t, s, Relation::Inverse)?),
            None => Decision::NotReal(format!(
                "no conjugator among {} lifts of {} SO-level candidates",
                out.lifts_scanned, out.so_candidates
            )),
        })
    }
}

/// Full enumeration of `Spin` and a scan for `s t s⁻¹ = t⁻¹`. The table of
/// the first space seen is kept for later calls on the same form.
pub struct Exhaustive {
    caps: Caps,
    table: OnceLock<(Matrix, Result<GroupTable, OracleError>)>,
}

impl Exhaustive {
    pub fn new(caps: Caps) -> Exhaustive {
        Exhaustive {
            caps,
            table: OnceLock::new(),
        }
    }
}

impl RealityDecider for Exhaustive {
    fn name(&self) -> &'static str {
        "exhaustive"
    }

    fn decide(&self, ctx: &CliffordCtx, t: &GroupElement) -> Result<Decision, OracleError> {
        if !t.is_spin() {
            return Err(RealityError::NotInSpin.into());
        }
        let gram = ctx.space().gram();
        let (key, cached) = self
            .table
            .get_or_init(|| (gram.clone(), enumerate_spin(ctx, self.caps)));
        let fresh;
        let table = if key == gram {
            cached.as_ref().map_err(Clone::clone)?
        } else {
            fresh = enumerate_spin(ctx, self.caps)?;
            &fresh
        };
        Ok(match real_in_group(ctx, t.mv(), table) {
            Some(s) => Decision::Real(RealityCertificate::witness(ctx, t, s, Relation::Inverse)?),
            None => Decision::NotReal(format!(
                "no conjugator among {} elements of Spin",
                table.order()
            )),
        })
    }
}

pub struct DeciderRegistry {
    deciders: Vec<Box<dyn RealityDecider>>,
}

impl DeciderRegistry {
    pub fn new(budget: u64, caps: Caps) -> DeciderRegistry {
        DeciderRegistry {
            deciders: vec![
                Box::new(Constructive),
                Box::new(Coset { budget }),
                Box::new(Exhaustive::new(caps)),
            ],
        }
    }

    pub fn register(&mut self, decider: Box<dyn RealityDecider>) {
        self.deciders.push(decider);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.deciders.iter().map(|d| d.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn RealityDecider> {
        self.deciders
            .iter()
            .find(|d| d.name() == name)
            .map(Box::as_ref)
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn RealityDecider> {
        self.deciders.iter().map(Box::as_ref)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::quadratic::QSpace;
    use crate::reality::make_torus_element;

    #[test]
    fn registry_names_and_lookup() {
        let reg = ConjugatorRegistry::default();
        assert_eq!(
            reg.names(),
            vec!["standard", "minus", "odd-split", "blockwise", "spin"]
        );
        assert!(reg.get("minus").is_some());
        assert!(reg.get("missing").is_none());
        let deciders = DeciderRegistry::new(1 << 20, Caps::default());
        assert_eq!(
            deciders.names(),
            vec!["constructive", "coset", "exhaustive"]
        );
    }

    #[test]
    fn strategies_on_a_torus() {
        let q = Field::rationals();
        let space = QSpace::hyperbolic(q, 3);
        let basis = space.witt_decompose().unwrap();
        let ctx = CliffordCtx::new(space).unwrap();
        let t = make_torus_element(
            &ctx,
            q.one(),
            vec![q.from_i64(-1), q.from_i64(2), q.from_i64(3)],
            &basis,
        )
        .unwrap();
        let reg = ConjugatorRegistry::default();
        let (name, cert) = reg.first_success(&ctx, &basis, &t).unwrap();
        assert_eq!(name, "standard");
        assert!(cert.verify(&ctx).all());
        let minus = reg
            .get("minus")
            .unwrap()
            .conjugate(&ctx, &basis, &t)
            .unwrap();
        assert_eq!(minus.relation, Relation::MinusNormInverse);
        assert!(reg
            .get("odd-split")
            .unwrap()
            .conjugate(&ctx, &basis, &t)
            .is_err());
    }

    #[test]
    fn deciders_agree_on_small_spin() {
        let f = Field::prime(5).unwrap();
        let space = QSpace::hyperbolic(f, 2);
        let basis = space.witt_decompose().unwrap();
        let ctx = CliffordCtx::new(space).unwrap();
        // λ₀ = 1, λ = (2, 3): norm 6 = 1
        let t =
            make_torus_element(&ctx, f.one(), vec![f.from_i64(2), f.from_i64(3)], &basis).unwrap();
        assert!(t.is_spin());
        let reg = DeciderRegistry::new(1 << 20, Caps::default());
        for d in reg.iter() {
            let decision = d.decide(&ctx, &t).unwrap();
            assert!(decision.is_real(), "{}", d.name());
        }
    }
}
