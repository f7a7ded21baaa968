//! Brute-force ground truth over small prime fields: group enumeration by
//! closure, conjugacy classes with explicit witnesses, and an exhaustive
//! centralizer-coset decision for elements too large to enumerate around.

mod classes;
mod coset;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::clifford::{CliffordCtx, Multivector};
use crate::field::{Field, FieldError, Scalar};
use crate::groups::GroupError;
use crate::linalg::{coefficient_tuples, is_zero_vec, Vector};
use crate::quadratic::{QSpace, SpaceError};
use crate::reality::RealityError;

pub use classes::{
    class_report, conjugacy_classes, feit_zuckerman_check, kernel_and_spinor_check, real_in_group,
    ClassInfo, ClassReport, Conjugacy, ExactSequenceCheck, GammaRealityCheck,
};
pub use coset::{centralizer_coset_decide, CosetOutcome};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle requires a finite field, got {0}")]
    NotFiniteField(Field),
    #[error("dimension {dim} exceeds the enumeration cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("group order {order} exceeds the cap {cap}")]
    OrderCapExceeded { order: u64, cap: u64 },
    #[error("centralizer search space of size {size} exceeds the budget {budget}")]
    CentralizerTooLarge { size: u64, budget: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Reality(#[from] RealityError),
}

/// Resource limits for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub max_order: u64,
    pub max_dim: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_order: 1_000_000,
            max_dim: 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    Spin,
    GammaPlus,
    Gamma,
}

/// `|SO(V)|` over `F_q` from the Witt index.
pub fn so_order(space: &QSpace) -> Result<Option<u64>, OracleError> {
    let Some(q) = space.field().order() else {
        return Ok(None);
    };
    let n = space.dim();
    let m = (n / 2) as u32;
    let pow = |e: u32| q.checked_pow(e);
    let mut acc = 1u64;
    let mut mul = |x: Option<u64>| {
        acc = x.and_then(|x| acc.checked_mul(x)).unwrap_or(u64::MAX);
    };
    for i in 1..=m {
        if n % 2 == 1 || i < m {
            mul(pow(2 * i).map(|x| x - 1));
        }
    }
    if n % 2 == 1 {
        mul(pow(m * m));
    } else if m > 0 {
        mul(pow(m * (m - 1)));
        let plus = space.witt_decompose()?.witt_index() == m as usize;
        mul(pow(m).map(|x| if plus { x - 1 } else { x + 1 }));
    }
    Ok(Some(acc))
}

/// Order of the enumerated group: `|Spin| = |SO|` once `dim ≥ 2`,
/// `|Γ⁺| = (q-1)|SO|` and `|Γ| = 2|Γ⁺|`.
pub fn predicted_order(space: &QSpace, kind: GroupKind) -> Result<Option<u64>, OracleError> {
    let Some(so) = so_order(space)? else {
        return Ok(None);
    };
    let q = space.field().order().expect("finite");
    Ok(Some(match kind {
        GroupKind::Spin if space.dim() == 1 => 2,
        GroupKind::Spin => so,
        GroupKind::GammaPlus => so.saturating_mul(q - 1),
        GroupKind::Gamma => so.saturating_mul(2 * (q - 1)),
    }))
}

/// An enumerated finite group of multivectors in canonical form, sorted.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub kind: GroupKind,
    pub field: Field,
    pub dim: usize,
    pub predicted_order: u64,
    elements: Vec<Multivector>,
    index: HashMap<Multivector, usize>,
    generators: Vec<Multivector>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Multivector] {
        &self.elements
    }

    pub fn generators(&self) -> &[Multivector] {
        &self.generators
    }

    pub fn index_of(&self, x: &Multivector) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn contains(&self, x: &Multivector) -> bool {
        self.index.contains_key(x)
    }
}

/// `x⁻¹ = τ(x) / N(x)` for `x ∈ Γ`.
pub fn gamma_inverse(ctx: &CliffordCtx, x: &Multivector) -> Multivector {
    let rev = x.reversion();
    let n = ctx.mul(&rev, x).scalar_part(ctx.field());
    rev.scale(&n.inv().expect("group element"))
}

fn all_vectors(field: Field, n: usize) -> Vec<Vector> {
    coefficient_tuples(field, n)
        .expect("finite field")
        .filter(|v| !is_zero_vec(v))
        .collect()
}

fn primitive_root(field: Field) -> Scalar {
    let p = field.order().expect("finite");
    field
        .units()
        .expect("finite")
        .into_iter()
        .find(|g| (1..p - 1).all(|k| !g.pow(k).is_one()))
        .expect("cyclic unit group")
}

fn candidates(ctx: &CliffordCtx, kind: GroupKind) -> Vec<Multivector> {
    let field = ctx.field();
    let space = ctx.space();
    let vectors: Vec<(Multivector, Scalar)> = all_vectors(field, ctx.dim())
        .into_iter()
        .map(|v| (ctx.embed_vector(&v).expect("dimension"), space.q(&v)))
        .filter(|(_, q)| !q.is_zero())
        .collect();
    let scalar = || ctx.scalar(primitive_root(field));
    match kind {
        GroupKind::Gamma => std::iter::once(scalar())
            .chain(vectors.into_iter().map(|(v, _)| v))
            .collect(),
        GroupKind::Spin | GroupKind::GammaPlus => {
            let pairs = vectors.par_iter().flat_map_iter(|(v, qv)| {
                vectors
                    .iter()
                    .filter(move |(_, qw)| kind == GroupKind::GammaPlus || (qv * qw).is_one())
                    .map(move |(w, _)| ctx.mul(v, w))
            });
            let mut out: Vec<Multivector> = pairs.collect();
            if kind == GroupKind::GammaPlus {
                out.insert(0, scalar());
            }
            out
        }
    }
}

struct Closure {
    elements: Vec<Multivector>,
    index: HashMap<Multivector, usize>,
    cap: u64,
}

impl Closure {
    fn insert(&mut self, xs: Vec<Multivector>) -> Result<Vec<Multivector>, OracleError> {
        let mut fresh = Vec::new();
        for x in xs {
            if !self.index.contains_key(&x) {
                self.index.insert(x.clone(), self.elements.len());
                self.elements.push(x.clone());
                fresh.push(x);
            }
        }
        if self.elements.len() as u64 > self.cap {
            return Err(OracleError::OrderCapExceeded {
                order: self.elements.len() as u64,
                cap: self.cap,
            });
        }
        Ok(fresh)
    }
}

/// Closure of the generator candidates under right multiplication. A
/// candidate is kept only when it is not already in the group generated so
/// far. `shuffle` permutes the candidate order.
pub fn enumerate(
    ctx: &CliffordCtx,
    kind: GroupKind,
    caps: Caps,
    shuffle: Option<u64>,
) -> Result<GroupTable, OracleError> {
    let field = ctx.field();
    if !field.is_finite() {
        return Err(OracleError::NotFiniteField(field));
    }
    if ctx.dim() > caps.max_dim {
        return Err(OracleError::DimensionCap {
            dim: ctx.dim(),
            cap: caps.max_dim,
        });
    }
    let predicted = predicted_order(ctx.space(), kind)?.expect("finite");
    if predicted > caps.max_order {
        return Err(OracleError::OrderCapExceeded {
            order: predicted,
            cap: caps.max_order,
        });
    }
    let mut cands = candidates(ctx, kind);
    if let Some(seed) = shuffle {
        cands.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut state = Closure {
        elements: vec![ctx.one()],
        index: HashMap::from([(ctx.one(), 0)]),
        cap: caps.max_order,
    };
    let mut generators: Vec<Multivector> = Vec::new();
    for g in cands {
        if state.index.contains_key(&g) {
            continue;
        }
        generators.push(g.clone());
        let products: Vec<Multivector> =
            state.elements.par_iter().map(|x| ctx.mul(x, &g)).collect();
        let mut frontier = state.insert(products)?;
        while !frontier.is_empty() {
            let products: Vec<Multivector> = frontier
                .par_iter()
                .flat_map_iter(|x| generators.iter().map(move |h| ctx.mul(x, h)))
                .collect();
            frontier = state.insert(products)?;
        }
    }
    let mut elements = state.elements;
    elements.sort();
    let index = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, x)| (x, i))
        .collect();
    Ok(GroupTable {
        kind,
        field,
        dim: ctx.dim(),
        predicted_order: predicted,
        elements,
        index,
        generators,
    })
}

pub fn enumerate_spin(ctx: &CliffordCtx, caps: Caps) -> Result<GroupTable, OracleError> {
    enumerate(ctx, GroupKind::Spin, caps, None)
}

/// Order of `t` coprime to `p`.
pub fn is_semisimple_ff(ctx: &CliffordCtx, t: &Multivector) -> Result<bool, OracleError> {
    let p = ctx
        .field()
        .order()
        .ok_or(OracleError::NotFiniteField(ctx.field()))?;
    let order = crate::groups::element_order(ctx, t, u64::MAX).expect("finite group element");
    Ok(order % p != 0)
}
