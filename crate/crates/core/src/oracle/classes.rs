use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::{CliffordCtx, Multivector};
use crate::field::Scalar;
use crate::groups::{element_order, spinor_norm, GroupElement, OrthMatrix};

use super::{gamma_inverse, GroupKind, GroupTable, OracleError};

/// Orbits of a table under conjugation by a generating set, with a
/// conjugator `c` for every element `x = c r c⁻¹` of the class of `r`.
#[derive(Clone, Debug)]
pub struct Conjugacy {
    class_of: Vec<usize>,
    conjugator: Vec<Multivector>,
    reps: Vec<usize>,
    sizes: Vec<usize>,
}

impl Conjugacy {
    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn representative(&self, class: usize) -> usize {
        self.reps[class]
    }

    pub fn size(&self, class: usize) -> usize {
        self.sizes[class]
    }

    pub fn conjugator(&self, i: usize) -> &Multivector {
        &self.conjugator[i]
    }

    /// `s` with `s x s⁻¹ = x⁻¹`, when `x⁻¹` lies in the same orbit.
    pub fn witness(&self, ctx: &CliffordCtx, table: &GroupTable, i: usize) -> Option<Multivector> {
        let x = &table.elements()[i];
        let j = table.index_of(&gamma_inverse(ctx, x))?;
        if self.class_of[i] != self.class_of[j] {
            return None;
        }
        // x = c r c⁻¹, x⁻¹ = d r d⁻¹, so d c⁻¹ sends x to x⁻¹
        let c_inv = gamma_inverse(ctx, &self.conjugator[i]);
        Some(ctx.mul(&self.conjugator[j], &c_inv))
    }
}

/// Orbit decomposition of `table` under `x ↦ g x g⁻¹`, `g` ranging over
/// `gens`, which must normalize the table. Representatives are the least
/// elements of their classes.
pub fn conjugacy_classes(ctx: &CliffordCtx, table: &GroupTable, gens: &[Multivector]) -> Conjugacy {
    let n = table.order();
    let pairs: Vec<(Multivector, Multivector)> = gens
        .iter()
        .map(|g| (g.clone(), gamma_inverse(ctx, g)))
        .collect();
    let mut class_of = vec![usize::MAX; n];
    let mut conjugator = vec![Multivector::zero(); n];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for start in 0..n {
        if class_of[start] != usize::MAX {
            continue;
        }
        let class = reps.len();
        reps.push(start);
        class_of[start] = class;
        conjugator[start] = ctx.one();
        let mut size = 1;
        let mut frontier = vec![start];
        while !frontier.is_empty() {
            let images: Vec<(usize, Multivector)> = frontier
                .par_iter()
                .flat_map_iter(|&i| {
                    let x = &table.elements()[i];
                    let c = &conjugator[i];
                    pairs.iter().map(move |(g, g_inv)| {
                        let y = ctx.sandwich(g, x, g_inv);
                        let j = table.index_of(&y).expect("generators normalize the table");
                        (j, ctx.mul(g, c))
                    })
                })
                .collect();
            frontier.clear();
            for (j, c) in images {
                if class_of[j] == usize::MAX {
                    class_of[j] = class;
                    conjugator[j] = c;
                    size += 1;
                    frontier.push(j);
                }
            }
        }
        sizes.push(size);
    }
    Conjugacy {
        class_of,
        conjugator,
        reps,
        sizes,
    }
}

/// Exhaustive scan for `s` in the table with `s t s⁻¹ = t⁻¹`: `1` when it
/// works, otherwise the least element that does.
pub fn real_in_group(
    ctx: &CliffordCtx,
    t: &Multivector,
    table: &GroupTable,
) -> Option<Multivector> {
    let t_inv = gamma_inverse(ctx, t);
    if *t == t_inv {
        return Some(ctx.one());
    }
    table
        .elements()
        .par_iter()
        .find_first(|s| ctx.mul(s, t) == ctx.mul(&t_inv, s))
        .cloned()
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassInfo {
    pub representative: Vec<(Vec<usize>, String)>,
    pub size: usize,
    pub order: u64,
    pub is_semisimple: bool,
    pub is_real: bool,
    pub witness: Option<Vec<(Vec<usize>, String)>>,
    pub witness_verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub group: GroupKind,
    pub field: String,
    pub dim: usize,
    pub order: usize,
    pub predicted_order: u64,
    pub class_count: usize,
    pub real_class_count: usize,
    pub semisimple_class_count: usize,
    pub semisimple_real_count: usize,
    pub classes: Vec<ClassInfo>,
}

impl ClassReport {
    pub fn sizes_sum(&self) -> usize {
        self.classes.iter().map(|c| c.size).sum()
    }

    /// Every semisimple class is real with a verified witness.
    pub fn semisimple_all_real(&self) -> bool {
        self.classes
            .iter()
            .filter(|c| c.is_semisimple)
            .all(|c| c.is_real && c.witness_verified)
    }
}

/// Conjugacy classes of an enumerated group under its own generators, with
/// order, semisimplicity, realness and a verified witness per class.
pub fn class_report(
    ctx: &CliffordCtx,
    table: &GroupTable,
) -> Result<(ClassReport, Conjugacy), OracleError> {
    let p = table
        .field
        .order()
        .ok_or(OracleError::NotFiniteField(table.field))?;
    let conj = conjugacy_classes(ctx, table, table.generators());
    let classes: Vec<ClassInfo> = (0..conj.class_count())
        .into_par_iter()
        .map(|k| {
            let i = conj.representative(k);
            let t = &table.elements()[i];
            let order = element_order(ctx, t, table.order() as u64).expect("finite group");
            let witness = conj.witness(ctx, table, i);
            let witness_verified = witness.as_ref().is_some_and(|s| {
                ctx.sandwich(s, t, &gamma_inverse(ctx, s)) == gamma_inverse(ctx, t)
                    && table.contains(s)
            });
            ClassInfo {
                representative: t.to_json_terms(),
                size: conj.size(k),
                order,
                is_semisimple: order % p != 0,
                is_real: witness.is_some(),
                witness: witness.map(|s| s.to_json_terms()),
                witness_verified,
            }
        })
        .collect();
    let count = |f: &dyn Fn(&ClassInfo) -> bool| classes.iter().filter(|c| f(c)).count();
    let report = ClassReport {
        group: table.kind,
        field: table.field.to_string(),
        dim: table.dim,
        order: table.order(),
        predicted_order: table.predicted_order,
        class_count: classes.len(),
        real_class_count: count(&|c| c.is_real),
        semisimple_class_count: count(&|c| c.is_semisimple),
        semisimple_real_count: count(&|c| c.is_semisimple && c.is_real),
        classes,
    };
    Ok((report, conj))
}

/// Reality of Spin elements inside the full Clifford group.
#[derive(Clone, Debug, Serialize)]
pub struct GammaRealityCheck {
    pub spin_order: usize,
    pub gamma_order: usize,
    pub real_in_gamma: usize,
    pub witnesses_verified: usize,
}

impl GammaRealityCheck {
    pub fn passed(&self) -> bool {
        self.real_in_gamma == self.spin_order && self.witnesses_verified == self.spin_order
    }
}

/// Conjugates the Spin table by the vector generators of `Γ` and checks that
/// every element meets its inverse.
pub fn feit_zuckerman_check(
    ctx: &CliffordCtx,
    spin: &GroupTable,
    gamma: &GroupTable,
) -> Result<GammaRealityCheck, OracleError> {
    let vectors: Vec<Multivector> = gamma
        .generators()
        .iter()
        .filter(|g| g.is_odd())
        .cloned()
        .collect();
    let conj = conjugacy_classes(ctx, spin, &vectors);
    let results: Vec<(bool, bool)> = (0..spin.order())
        .into_par_iter()
        .map(|i| match conj.witness(ctx, spin, i) {
            Some(s) => {
                let t = &spin.elements()[i];
                let ok = gamma.contains(&s)
                    && ctx.sandwich(&s, t, &gamma_inverse(ctx, &s)) == gamma_inverse(ctx, t);
                (true, ok)
            }
            None => (false, false),
        })
        .collect();
    Ok(GammaRealityCheck {
        spin_order: spin.order(),
        gamma_order: gamma.order(),
        real_in_gamma: results.iter().filter(|r| r.0).count(),
        witnesses_verified: results.iter().filter(|r| r.1).count(),
    })
}

/// `ker χ ∩ Γ⁺ = F*` and `spinor_norm(χ(u)) = [N(u)]` over a `Γ⁺` table.
#[derive(Clone, Debug, Serialize)]
pub struct ExactSequenceCheck {
    pub order: usize,
    pub kernel_size: usize,
    pub kernel_is_scalars: bool,
    pub unit_count: usize,
    pub spinor_norm_matches: usize,
}

impl ExactSequenceCheck {
    pub fn passed(&self) -> bool {
        self.kernel_is_scalars
            && self.kernel_size == self.unit_count
            && self.spinor_norm_matches == self.order
    }
}

pub fn kernel_and_spinor_check(
    ctx: &CliffordCtx,
    table: &GroupTable,
) -> Result<ExactSequenceCheck, OracleError> {
    let field = table.field;
    let units = field.units().ok_or(OracleError::NotFiniteField(field))?;
    let rows: Vec<Result<(bool, bool, bool), OracleError>> = table
        .elements()
        .par_iter()
        .map(|u| {
            let g = GroupElement::new(ctx, u.clone())?;
            let in_kernel = g.chi().is_identity();
            let scalar = u.as_scalar(field).is_some();
            let m = OrthMatrix::new(ctx.space(), g.chi().clone())?;
            let sn: Scalar = spinor_norm(ctx.space(), &m)?;
            let matches = sn == field.square_class(g.norm())?;
            Ok((in_kernel, scalar, matches))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let kernel: Vec<&(bool, bool, bool)> = rows.iter().filter(|r| r.0).collect();
    Ok(ExactSequenceCheck {
        order: rows.len(),
        kernel_size: kernel.len(),
        kernel_is_scalars: kernel.iter().all(|r| r.1),
        unit_count: units.len(),
        spinor_norm_matches: rows.iter().filter(|r| r.2).count(),
    })
}
