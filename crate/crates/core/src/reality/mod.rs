//! Constructive reality: the standard torus, involution lifts, explicit
//! conjugators `s t s⁻¹ = N(t) t⁻¹`, the Spin-level decision procedure and
//! the decomposition `t = τ₁ τ₂`.

mod decide;
mod eigen;
mod torus;

use serde::Serialize;
use thiserror::Error;

use crate::clifford::{CliffordCtx, CliffordError, Multivector};
use crate::field::{Field, FieldError, Scalar};
use crate::groups::{GroupElement, GroupError};
use crate::quadratic::SpaceError;

pub use decide::{
    blockwise_conjugator, involution_decompose, is_real_semisimple_spin, oddcase_condition,
    spin_conjugator, Decision, InvolutionPair,
};
pub use eigen::{eigen_split, EigenPair, EigenSplit};
pub use torus::{
    corollary_sign, involution_lift, make_torus_element, minus_conjugator, odd_split_conjugator,
    odd_split_raw, standard_conjugator, standard_sign, TorusElement,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealityError {
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("torus parameters must be nonzero")]
    ZeroParameter,
    #[error("{got} torus parameters given for Witt index {expected}")]
    WittIndexMismatch { expected: usize, got: usize },
    #[error("subspace does not lift to an involution; obstruction class {0}")]
    NotLiftable(Scalar),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("χ(t) has eigenvalues outside the base field")]
    EigenvaluesNotRational,
    #[error("element is not semisimple")]
    NotSemisimple,
    #[error("χ(t) has no eigenvalue in the base field")]
    NoRationalEigenvalue,
    #[error("element is not strongly regular")]
    NotStronglyRegular,
    #[error("element is not in Spin")]
    NotInSpin,
    #[error("element is not in Γ⁺")]
    NotInGammaPlus,
    #[error("certificate relation is not s t s⁻¹ = t⁻¹")]
    WrongRelation,
    #[error("conjugator fails the relation {0}")]
    RelationFails(Relation),
    #[error("s² is not ±1")]
    SquareNotSign,
    #[error("no norm-one conjugator is available from the eigenspace blocks")]
    NoNormOneConjugator,
    #[error("operation requires a finite field, got {0}")]
    NotFiniteField(Field),
    #[error("centralizer of dimension {dim} exceeds the enumeration budget")]
    CentralizerTooLarge { dim: usize },
    #[error("undecided: {0}")]
    Undecided(String),
}

/// Target of a conjugation certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `s t s⁻¹ = t⁻¹`
    Inverse,
    /// `s t s⁻¹ = N(t) t⁻¹`
    NormInverse,
    /// `s t s⁻¹ = -N(t) t⁻¹`
    MinusNormInverse,
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Relation::Inverse => "s t s⁻¹ = t⁻¹",
            Relation::NormInverse => "s t s⁻¹ = N(t) t⁻¹",
            Relation::MinusNormInverse => "s t s⁻¹ = -N(t) t⁻¹",
        })
    }
}

impl Relation {
    pub fn target(self, t: &GroupElement) -> Multivector {
        match self {
            Relation::Inverse => t.inverse().clone(),
            Relation::NormInverse => t.inverse().scale(t.norm()),
            Relation::MinusNormInverse => t.inverse().scale(&-t.norm()),
        }
    }
}

/// Smallest group of the tower containing an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Gamma,
    GammaPlus,
    Spin,
}

impl Membership {
    pub fn of(g: &GroupElement) -> Membership {
        if g.is_spin() {
            Membership::Spin
        } else if g.is_even() {
            Membership::GammaPlus
        } else {
            Membership::Gamma
        }
    }
}

/// A verified conjugator `s` for `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealityCertificate {
    pub t: GroupElement,
    pub s: GroupElement,
    pub relation: Relation,
    /// `s²` when it is a scalar; always `±1` for constructed conjugators.
    pub s_squared: Option<Scalar>,
    pub s_norm: Scalar,
    pub s_in: Membership,
}

/// Independent re-verification of every certificate identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateChecks {
    pub relation_holds: bool,
    pub s_squared_matches: bool,
    pub norm_is_one: bool,
    pub membership_holds: bool,
}

impl CertificateChecks {
    pub fn all(&self) -> bool {
        self.relation_holds && self.s_squared_matches && self.norm_is_one && self.membership_holds
    }
}

impl RealityCertificate {
    /// Builds and checks a certificate; fails unless the relation holds and
    /// `s² = ±1`.
    pub fn new(
        ctx: &CliffordCtx,
        t: &GroupElement,
        s: Multivector,
        relation: Relation,
    ) -> Result<RealityCertificate, RealityError> {
        let cert = RealityCertificate::witness(ctx, t, s, relation)?;
        match &cert.s_squared {
            Some(x) if x.is_one() || x.is_minus_one() => Ok(cert),
            _ => Err(RealityError::SquareNotSign),
        }
    }

    /// Any `s ∈ Γ` satisfying the relation, with no condition on `s²`.
    pub fn witness(
        ctx: &CliffordCtx,
        t: &GroupElement,
        s: Multivector,
        relation: Relation,
    ) -> Result<RealityCertificate, RealityError> {
        let s = GroupElement::new(ctx, s)?;
        if ctx.sandwich(s.mv(), t.mv(), s.inverse()) != relation.target(t) {
            return Err(RealityError::RelationFails(relation));
        }
        let s_squared = ctx.mul(s.mv(), s.mv()).as_scalar(ctx.field());
        Ok(RealityCertificate {
            t: t.clone(),
            s_norm: s.norm().clone(),
            s_in: Membership::of(&s),
            s,
            relation,
            s_squared,
        })
    }

    pub fn verify(&self, ctx: &CliffordCtx) -> CertificateChecks {
        let s = self.s.mv();
        let s_inv = ctx.inverse(s).ok();
        let relation_holds = s_inv
            .as_ref()
            .is_some_and(|inv| ctx.sandwich(s, self.t.mv(), inv) == self.relation.target(&self.t));
        let s_squared_matches = ctx.mul(s, s).as_scalar(ctx.field()) == self.s_squared;
        let norm = ctx.mul(&s.reversion(), s).as_scalar(ctx.field());
        let norm_is_one = norm.as_ref().is_some_and(Scalar::is_one);
        let membership_holds =
            GroupElement::new(ctx, s.clone()).is_ok_and(|g| Membership::of(&g) == self.s_in);
        CertificateChecks {
            relation_holds,
            s_squared_matches,
            norm_is_one,
            membership_holds,
        }
    }
}

/// `(-1)^e` in the field.
pub(crate) fn sign(field: Field, e: usize) -> Scalar {
    if e % 2 == 0 {
        field.one()
    } else {
        -field.one()
    }
}
