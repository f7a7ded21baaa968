use serde::Serialize;

use crate::clifford::{CliffordCtx, Multivector};
use crate::field::{Field, Scalar};
use crate::groups::{lift_so, GroupElement, OrthMatrix};
use crate::linalg::{coefficient_tuples, Matrix, Vector};
use crate::reality::{eigen_split, RealityError};

use super::OracleError;

/// Result of an exhaustive scan of all Spin conjugators `t → t⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetOutcome {
    pub witness: Option<Vec<(Vec<usize>, String)>>,
    #[serde(skip)]
    pub witness_mv: Option<Multivector>,
    /// Dimension of `{x ∈ C₀ : x t = t x}`.
    pub centralizer_dim: usize,
    pub so_candidates: u64,
    pub lifts_scanned: u64,
    pub exhausted: bool,
}

/// All `d × d` matrices `A` with `Aᵀ G A = G`.
fn orthogonal_group(field: Field, gram: &Matrix) -> Vec<Matrix> {
    let d = gram.rows();
    if d == 0 {
        return vec![Matrix::identity(field, 0)];
    }
    coefficient_tuples(field, d * d)
        .expect("finite field")
        .map(|xs| Matrix::from_rows(field, xs.chunks(d).map(<[Scalar]>::to_vec).collect()))
        .filter(|a| a.transpose().mul(gram).mul(a) == *gram)
        .collect()
}

fn general_linear(field: Field, k: usize) -> Vec<Matrix> {
    coefficient_tuples(field, k * k)
        .expect("finite field")
        .map(|xs| Matrix::from_rows(field, xs.chunks(k).map(<[Scalar]>::to_vec).collect()))
        .filter(|a| !a.det().is_zero())
        .collect()
}

fn place(target: &mut Matrix, block: &Matrix, row: usize, col: usize) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            target.set(row + i, col + j, block.get(i, j).clone());
        }
    }
}

/// Decides reality of a semisimple `t ∈ Spin` with rational eigenvalues by
/// scanning every `g ∈ SO(V)` with `g χ(t) g⁻¹ = χ(t)⁻¹`, lifting each to
/// `Γ⁺` and testing all scalar multiples. The conjugators of `χ(t)` form the
/// coset `g₀ Z_O(χ(t))`, where `g₀` swaps each `V_λ` with `V_{λ⁻¹}` and
/// `Z_O(χ(t)) = O(V₁) × O(V₋₁) × ∏ GL(V_λ)`. `budget` bounds both the
/// per-block enumeration and the size of the searched coset.
pub fn centralizer_coset_decide(
    ctx: &CliffordCtx,
    t: &GroupElement,
    budget: u64,
) -> Result<CosetOutcome, OracleError> {
    let field = ctx.field();
    let p = field.order().ok_or(OracleError::NotFiniteField(field))?;
    if !t.is_spin() {
        return Err(RealityError::NotInSpin.into());
    }
    let split = eigen_split(ctx, t)?;
    let space = ctx.space();
    let n = ctx.dim();
    let d1 = split.one.dim();
    let d2 = split.minus_one.dim();
    let ks: Vec<usize> = split.pairs.iter().map(|p| p.e.len()).collect();
    let too_large = |size: Option<u64>| OracleError::CentralizerTooLarge {
        size: size.unwrap_or(u64::MAX),
        budget,
    };
    let block_cost = |d: usize| p.checked_pow((d * d) as u32).filter(|&c| c <= budget);
    for d in [d1, d2].into_iter().chain(ks.iter().copied()) {
        if block_cost(d).is_none() {
            return Err(too_large(p.checked_pow((d * d) as u32)));
        }
    }
    let mut columns: Vec<Vector> = split.one.basis.clone();
    columns.extend(split.minus_one.basis.iter().cloned());
    for pair in &split.pairs {
        columns.extend(pair.e.iter().cloned());
        columns.extend(pair.f.iter().cloned());
    }
    let basis = Matrix::from_columns(field, n, &columns);
    let basis_inv = basis.inverse().expect("eigenvectors span V");

    let o1 = orthogonal_group(field, &space.restricted_gram(&split.one.basis));
    let o2 = orthogonal_group(field, &space.restricted_gram(&split.minus_one.basis));
    let gls: Vec<Vec<Matrix>> = ks.iter().map(|&k| general_linear(field, k)).collect();
    let size = [o1.len(), o2.len()]
        .into_iter()
        .chain(gls.iter().map(Vec::len))
        .try_fold(1u64, |acc, x| acc.checked_mul(x as u64));
    if size.is_none_or(|s| s > budget) {
        return Err(too_large(size));
    }

    let mut swap = Matrix::zeros(field, n, n);
    for i in 0..d1 + d2 {
        swap.set(i, i, field.one());
    }
    let mut offset = d1 + d2;
    for &k in &ks {
        for i in 0..k {
            swap.set(offset + i, offset + k + i, field.one());
            swap.set(offset + k + i, offset + i, field.one());
        }
        offset += 2 * k;
    }

    let t_inv = t.inverse();
    let units = field.units().expect("finite");
    let mut outcome = CosetOutcome {
        witness: None,
        witness_mv: None,
        centralizer_dim: ctx.even_solutions(t.mv(), &field.one()).len(),
        so_candidates: 0,
        lifts_scanned: 0,
        exhausted: true,
    };
    let mut choice = vec![0usize; 2 + gls.len()];
    let radices: Vec<usize> = [o1.len(), o2.len()]
        .into_iter()
        .chain(gls.iter().map(Vec::len))
        .collect();
    loop {
        let mut c = Matrix::zeros(field, n, n);
        place(&mut c, &o1[choice[0]], 0, 0);
        place(&mut c, &o2[choice[1]], d1, d1);
        let mut offset = d1 + d2;
        for (idx, &k) in ks.iter().enumerate() {
            let m = &gls[idx][choice[2 + idx]];
            place(&mut c, m, offset, offset);
            place(
                &mut c,
                &m.inverse().expect("invertible").transpose(),
                offset + k,
                offset + k,
            );
            offset += 2 * k;
        }
        let g = basis.mul(&swap.mul(&c)).mul(&basis_inv);
        if g.det().is_one() {
            outcome.so_candidates += 1;
            let orth = OrthMatrix::new(space, g)?;
            let u = lift_so(ctx, &orth)?;
            for a in &units {
                outcome.lifts_scanned += 1;
                let s = u.mv().scale(a);
                let norm = u.norm() * &(a * a);
                if norm.is_one() && ctx.mul(&s, t.mv()) == ctx.mul(t_inv, &s) {
                    outcome.witness = Some(s.to_json_terms());
                    outcome.witness_mv = Some(s);
                    outcome.exhausted = false;
                    return Ok(outcome);
                }
            }
        }
        // odometer over the block choices
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(outcome);
            }
            choice[pos] += 1;
            if choice[pos] < radices[pos] {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}
