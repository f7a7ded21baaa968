//! Multivector arithmetic in the Clifford algebra `C(V, q)`.
//!
//! Multivectors are sparse maps from blades to scalars. A blade is a bitmask
//! over an internal *orthogonal* basis of `V` (chosen by
//! [`QSpace::orthogonal_diagonalize`]); generators anticommute and square to
//! their q-value, which keeps the product sign rule exact. User-facing
//! vectors are converted on [`CliffordCtx::embed_vector`] and
//! [`CliffordCtx::extract_vector`].

use std::fmt;

use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, Vector};
use crate::quadratic::QSpace;

/// Largest supported dimension; the algebra has `2^n` blades.
pub const MAX_DIM: usize = 12;

/// Largest dimension for which non-versor elements are inverted by a dense
/// linear solve.
const DENSE_INVERSE_MAX_DIM: usize = 10;

pub type Blade = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("dimension {0} exceeds the supported maximum of {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("vector of length {got} given for a space of dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("multivector does not belong to this algebra")]
    ContextMismatch,
    #[error("multivector is not invertible")]
    NotInvertible,
    #[error("multivector is not a pure vector")]
    NotAVector,
    #[error("cannot parse multivector: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_grade(k: u32) -> Parity {
        if k % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// Sparse multivector with terms sorted by blade and no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Multivector {
    terms: Vec<(Blade, Scalar)>,
}

impl Multivector {
    pub fn zero() -> Multivector {
        Multivector { terms: Vec::new() }
    }

    pub fn scalar(s: Scalar) -> Multivector {
        Multivector::from_terms(vec![(0, s)])
    }

    pub fn blade(b: Blade, s: Scalar) -> Multivector {
        Multivector::from_terms(vec![(b, s)])
    }

    /// Normalizes an arbitrary term list: sorts, merges repeated blades and
    /// drops zeros.
    pub fn from_terms(mut terms: Vec<(Blade, Scalar)>) -> Multivector {
        terms.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(Blade, Scalar)> = Vec::with_capacity(terms.len());
        for (b, s) in terms {
            match out.last_mut() {
                Some((lb, ls)) if *lb == b => *ls += &s,
                _ => out.push((b, s)),
            }
        }
        out.retain(|(_, s)| !s.is_zero());
        Multivector { terms: out }
    }

    pub fn terms(&self) -> &[(Blade, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, b: Blade) -> Option<&Scalar> {
        self.terms
            .binary_search_by_key(&b, |t| t.0)
            .ok()
            .map(|i| &self.terms[i].1)
    }

    /// Grade-0 coefficient.
    pub fn scalar_part(&self, field: Field) -> Scalar {
        self.coefficient(0).cloned().unwrap_or_else(|| field.zero())
    }

    /// `Some(c)` if the multivector is the scalar `c` (including zero).
    pub fn as_scalar(&self, field: Field) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(field.zero()),
            [(0, s)] => Some(s.clone()),
            _ => None,
        }
    }

    pub fn grade_project(&self, k: u32) -> Multivector {
        Multivector {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.count_ones() == k)
                .cloned()
                .collect(),
        }
    }

    pub fn is_even(&self) -> bool {
        self.terms.iter().all(|(b, _)| b.count_ones() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.iter().all(|(b, _)| b.count_ones() % 2 == 1)
    }

    /// Homogeneous parity; `None` for mixed elements. Zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        if self.is_even() {
            Some(Parity::Even)
        } else if self.is_odd() {
            Some(Parity::Odd)
        } else {
            None
        }
    }

    pub fn max_grade(&self) -> Option<u32> {
        self.terms.iter().map(|(b, _)| b.count_ones()).max()
    }

    pub fn add(&self, other: &Multivector) -> Multivector {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Multivector::from_terms(terms)
    }

    pub fn sub(&self, other: &Multivector) -> Multivector {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Multivector {
        Multivector {
            terms: self.terms.iter().map(|(b, s)| (*b, -s)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Multivector {
        if c.is_zero() {
            return Multivector::zero();
        }
        Multivector {
            terms: self.terms.iter().map(|(b, s)| (*b, s * c)).collect(),
        }
    }

    /// Reverses the order of every product: grade `k` picks up
    /// `(-1)^{k(k-1)/2}`.
    pub fn reversion(&self) -> Multivector {
        Multivector {
            terms: self
                .terms
                .iter()
                .map(|(b, s)| {
                    let k = b.count_ones();
                    if (k * k.saturating_sub(1) / 2) % 2 == 1 {
                        (*b, -s)
                    } else {
                        (*b, s.clone())
                    }
                })
                .collect(),
        }
    }

    /// Grade `k` picks up `(-1)^k`.
    pub fn grade_involution(&self) -> Multivector {
        Multivector {
            terms: self
                .terms
                .iter()
                .map(|(b, s)| {
                    if b.count_ones() % 2 == 1 {
                        (*b, -s)
                    } else {
                        (*b, s.clone())
                    }
                })
                .collect(),
        }
    }

    /// Text form `[[[1,2], "3/2"], …]` with 1-based internal basis indices.
    pub fn to_json_terms(&self) -> Vec<(Vec<usize>, String)> {
        self.terms
            .iter()
            .map(|(b, s)| (blade_indices(*b), s.to_string()))
            .collect()
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, s)| {
                if *b == 0 {
                    format!("({s})")
                } else {
                    let idx: Vec<String> =
                        blade_indices(*b).iter().map(|i| i.to_string()).collect();
                    format!("({s})u{}", idx.join("u"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// 1-based indices of the generators in a blade.
pub fn blade_indices(b: Blade) -> Vec<usize> {
    (0..32)
        .filter(|i| b & (1 << i) != 0)
        .map(|i| i + 1)
        .collect()
}

/// Whether moving the generators of `b` past those of `a` into canonical
/// order flips the sign.
fn reorder_negates(a: Blade, b: Blade) -> bool {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    swaps % 2 == 1
}

/// Algebra context: the quadratic space plus its internal orthogonal basis.
#[derive(Clone, Debug)]
pub struct CliffordCtx {
    space: QSpace,
    /// Columns are the internal orthogonal basis in user coordinates.
    basis: Matrix,
    basis_inv: Matrix,
    diag: Vec<Scalar>,
    /// Product of the generator q-values over each blade.
    blade_q: Vec<Scalar>,
}

impl CliffordCtx {
    pub fn new(space: QSpace) -> Result<CliffordCtx, CliffordError> {
        let n = space.dim();
        if n > MAX_DIM {
            return Err(CliffordError::DimensionTooLarge(n));
        }
        let (basis, diag) = space.orthogonal_diagonalize();
        let basis_inv = basis.inverse().expect("orthogonal basis is invertible");
        let field = space.field();
        let blade_q = (0..1u32 << n)
            .map(|b| {
                (0..n)
                    .filter(|i| b & (1 << i) != 0)
                    .fold(field.one(), |acc, i| &acc * &diag[i])
            })
            .collect();
        Ok(CliffordCtx {
            space,
            basis,
            basis_inv,
            diag,
            blade_q,
        })
    }

    pub fn space(&self) -> &QSpace {
        &self.space
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Internal orthogonal basis as columns in user coordinates.
    pub fn internal_basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn internal_q_values(&self) -> &[Scalar] {
        &self.diag
    }

    pub fn one(&self) -> Multivector {
        Multivector::scalar(self.field().one())
    }

    pub fn scalar(&self, s: Scalar) -> Multivector {
        Multivector::scalar(s)
    }

    /// Validates that a multivector lives in this algebra.
    pub fn check(&self, a: &Multivector) -> Result<(), CliffordError> {
        let limit = 1u32 << self.dim();
        let field = self.field();
        if a.terms.iter().all(|(b, s)| *b < limit && field.contains(s)) {
            Ok(())
        } else {
            Err(CliffordError::ContextMismatch)
        }
    }

    pub fn embed_vector(&self, x: &[Scalar]) -> Result<Multivector, CliffordError> {
        if x.len() != self.dim() {
            return Err(CliffordError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let y = self.basis_inv.mul_vec(x);
        Ok(Multivector::from_terms(
            y.into_iter()
                .enumerate()
                .map(|(i, c)| (1 << i, c))
                .collect(),
        ))
    }

    /// Internal generator `u_i` (0-based).
    pub fn generator(&self, i: usize) -> Multivector {
        Multivector::blade(1 << i, self.field().one())
    }

    pub fn extract_vector(&self, a: &Multivector) -> Result<Vector, CliffordError> {
        let n = self.dim();
        let mut y = vec![self.field().zero(); n];
        for (b, s) in &a.terms {
            if b.count_ones() != 1 {
                return Err(CliffordError::NotAVector);
            }
            y[b.trailing_zeros() as usize] = s.clone();
        }
        Ok(self.basis.mul_vec(&y))
    }

    /// Geometric product.
    pub fn mul(&self, a: &Multivector, b: &Multivector) -> Multivector {
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ba, sa) in &a.terms {
            for (bb, sb) in &b.terms {
                let q = &self.blade_q[(ba & bb) as usize];
                if q.is_zero() {
                    continue;
                }
                let mut c = &(sa * sb) * q;
                if reorder_negates(*ba, *bb) {
                    c = -c;
                }
                terms.push((ba ^ bb, c));
            }
        }
        Multivector::from_terms(terms)
    }

    pub fn try_mul(&self, a: &Multivector, b: &Multivector) -> Result<Multivector, CliffordError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Left-to-right product of a sequence; the empty product is 1.
    pub fn product<'a, I: IntoIterator<Item = &'a Multivector>>(&self, items: I) -> Multivector {
        items
            .into_iter()
            .fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// Product of user-coordinate vectors `v1 v2 … vk`.
    pub fn vector_product(&self, vs: &[Vector]) -> Result<Multivector, CliffordError> {
        let mut acc = self.one();
        for v in vs {
            acc = self.mul(&acc, &self.embed_vector(v)?);
        }
        Ok(acc)
    }

    /// `u x v`.
    pub fn sandwich(&self, u: &Multivector, x: &Multivector, v: &Multivector) -> Multivector {
        self.mul(&self.mul(u, x), v)
    }

    /// Inverse via `reversion(a) / (reversion(a) a)` when that is a nonzero
    /// scalar.
    pub fn versor_inverse(&self, a: &Multivector) -> Option<Multivector> {
        let r = a.reversion();
        let n = self.mul(&r, a).as_scalar(self.field())?;
        let inv = n.inv()?;
        let candidate = r.scale(&inv);
        (self.mul(a, &candidate).as_scalar(self.field()))
            .filter(Scalar::is_one)
            .map(|_| candidate)
    }

    pub fn inverse(&self, a: &Multivector) -> Result<Multivector, CliffordError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(CliffordError::NotInvertible);
        }
        if let Some(inv) = self.versor_inverse(a) {
            return Ok(inv);
        }
        if self.dim() > DENSE_INVERSE_MAX_DIM {
            return Err(CliffordError::NotInvertible);
        }
        let size = 1usize << self.dim();
        let field = self.field();
        let mut lmul = Matrix::zeros(field, size, size);
        for j in 0..size {
            let col = self.mul(a, &Multivector::blade(j as Blade, field.one()));
            for (b, s) in col.terms {
                lmul.set(b as usize, j, s);
            }
        }
        let mut rhs = vec![field.zero(); size];
        rhs[0] = field.one();
        let x = lmul.solve(&rhs).ok_or(CliffordError::NotInvertible)?;
        let inv = Multivector::from_terms(
            x.into_iter()
                .enumerate()
                .map(|(i, s)| (i as Blade, s))
                .collect(),
        );
        let one = self.one();
        if self.mul(a, &inv) == one && self.mul(&inv, a) == one {
            Ok(inv)
        } else {
            Err(CliffordError::NotInvertible)
        }
    }

    /// Basis of the linear space `{x ∈ C₀ : x a = c · a x}`.
    pub fn even_solutions(&self, a: &Multivector, c: &Scalar) -> Vec<Multivector> {
        let field = self.field();
        let even: Vec<Blade> = (0..1u32 << self.dim())
            .filter(|b| b.count_ones() % 2 == 0)
            .collect();
        let mut m = Matrix::zeros(field, 1 << self.dim(), even.len());
        for (j, &b) in even.iter().enumerate() {
            let x = Multivector::blade(b, field.one());
            let col = self.mul(&x, a).sub(&self.mul(a, &x).scale(c));
            for (bb, s) in col.terms {
                m.set(bb as usize, j, s);
            }
        }
        m.kernel()
            .into_iter()
            .map(|v| {
                Multivector::from_terms(
                    v.into_iter()
                        .enumerate()
                        .map(|(j, s)| (even[j], s))
                        .collect(),
                )
            })
            .collect()
    }

    /// Parses the text form produced by [`Multivector::to_json_terms`].
    pub fn parse_terms(
        &self,
        terms: &[(Vec<usize>, String)],
    ) -> Result<Multivector, CliffordError> {
        let field = self.field();
        let mut out = Vec::with_capacity(terms.len());
        for (idx, s) in terms {
            let mut b: Blade = 0;
            for &i in idx {
                if i == 0 || i > self.dim() || b & (1 << (i - 1)) != 0 {
                    return Err(CliffordError::Parse(format!(
                        "bad blade index list {idx:?}"
                    )));
                }
                b |= 1 << (i - 1);
            }
            let c = field
                .parse(s)
                .map_err(|e| CliffordError::Parse(e.to_string()))?;
            // index lists need not be sorted; reorder into canonical blade order
            let mut sign_negative = false;
            let mut seen: Vec<usize> = Vec::new();
            for &i in idx {
                sign_negative ^= seen.iter().filter(|&&j| j > i).count() % 2 == 1;
                seen.push(i);
            }
            out.push((b, if sign_negative { -c } else { c }));
        }
        Ok(Multivector::from_terms(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vector;

    fn hyperbolic(field: Field, m: usize) -> CliffordCtx {
        CliffordCtx::new(QSpace::hyperbolic(field, m)).unwrap()
    }

    fn vecq(field: Field, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| field.from_i64(x)).collect()
    }

    #[test]
    fn embed_zero_and_generators() {
        let q = Field::rationals();
        let ctx = hyperbolic(q, 1);
        assert!(ctx.embed_vector(&vecq(q, &[0, 0])).unwrap().is_zero());
        let u = ctx.internal_basis().column(0);
        assert_eq!(ctx.embed_vector(&u).unwrap(), ctx.generator(0));
        assert!(matches!(
            ctx.embed_vector(&vecq(q, &[1])),
            Err(CliffordError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn isotropic_vectors_square_to_zero_and_pair_to_one() {
        let q = Field::rationals();
        let ctx = hyperbolic(q, 1);
        let e = ctx.embed_vector(&vecq(q, &[1, 0])).unwrap();
        let f = ctx.embed_vector(&vecq(q, &[0, 1])).unwrap();
        assert!(ctx.mul(&e, &e).is_zero());
        assert_eq!(ctx.mul(&e, &f).add(&ctx.mul(&f, &e)), ctx.one());
    }

    #[test]
    fn torus_factors_multiply() {
        let q = Field::rationals();
        let ctx = hyperbolic(q, 1);
        let e = vecq(q, &[1, 0]);
        let factor = |lambda: i64| {
            let a = ctx.embed_vector(&vecq(q, &[1, 1])).unwrap();
            let b = ctx
                .embed_vector(&vec![e[0].clone(), q.from_i64(lambda)])
                .unwrap();
            ctx.mul(&a, &b)
        };
        assert_eq!(ctx.mul(&factor(2), &factor(3)), factor(6));
    }

    #[test]
    fn reversion_of_ef() {
        let q = Field::rationals();
        let ctx = hyperbolic(q, 1);
        let e = ctx.embed_vector(&vecq(q, &[1, 0])).unwrap();
        let f = ctx.embed_vector(&vecq(q, &[0, 1])).unwrap();
        let ef = ctx.mul(&e, &f);
        assert_eq!(ef.reversion(), ctx.mul(&f, &e));
        assert_eq!(ef.reversion(), ctx.one().sub(&ef));
        assert_eq!(e.reversion(), e);
        assert_eq!(ef.reversion().reversion(), ef);
    }

    #[test]
    fn grade_involution_examples() {
        let q = Field::rationals();
        let ctx = hyperbolic(q, 1);
        let e = ctx.embed_vector(&vecq(q, &[1, 0])).unwrap();
        let f = ctx.embed_vector(&vecq(q, &[0, 1])).unwrap();
        let ef = ctx.mul(&e, &f);
        assert_eq!(ef.grade_involution(), ef);
        assert_eq!(e.grade_involution(), e.neg());
        assert_eq!(ctx.one().grade_involution(), ctx.one());
    }

    #[test]
    fn grade_projection_of_ef() {
        let q = Field::rationals();
        let ctx = hyperbolic(q, 1);
        let e = ctx.embed_vector(&vecq(q, &[1, 0])).unwrap();
        let f = ctx.embed_vector(&vecq(q, &[0, 1])).unwrap();
        let ef = ctx.mul(&e, &f);
        assert_eq!(
            ef.grade_project(0),
            Multivector::scalar(q.ratio(1, 2).unwrap())
        );
        assert_eq!(
            ef.grade_project(2),
            Multivector::blade(0b11, q.ratio(-1, 2).unwrap())
        );
        assert_eq!(e.grade_project(1), e);
        assert!(ef.is_even());
    }

    #[test]
    fn inverses() {
        let q = Field::rationals();
        let ctx =
            CliffordCtx::new(QSpace::diagonal(q, &[q.from_i64(3), q.one()]).unwrap()).unwrap();
        let v = ctx.embed_vector(&vecq(q, &[1, 0])).unwrap();
        assert_eq!(ctx.inverse(&v).unwrap(), v.scale(&q.ratio(1, 3).unwrap()));

        let h = hyperbolic(q, 1);
        let e = h.embed_vector(&vecq(q, &[1, 0])).unwrap();
        assert_eq!(h.inverse(&e), Err(CliffordError::NotInvertible));

        let lam = q.from_i64(5);
        let epf = h.embed_vector(&vecq(q, &[1, 1])).unwrap();
        let eplf = h.embed_vector(&vec![q.one(), lam.clone()]).unwrap();
        let t = h.mul(&epf, &eplf);
        let expected = h.mul(&eplf, &epf).scale(&lam.inv().unwrap());
        assert_eq!(h.inverse(&t).unwrap(), expected);
    }

    #[test]
    fn dense_inverse_of_non_versor() {
        let q = Field::rationals();
        let ctx = CliffordCtx::new(QSpace::diagonal(q, &[q.one(), q.one()]).unwrap()).unwrap();
        // 2 + u1 is invertible but not a versor
        let a = Multivector::from_terms(vec![(0, q.from_i64(2)), (1, q.one())]);
        let inv = ctx.inverse(&a).unwrap();
        assert_eq!(ctx.mul(&a, &inv), ctx.one());
        // 1 + u1 is a zero divisor since u1^2 = 1
        let z = Multivector::from_terms(vec![(0, q.one()), (1, q.one())]);
        assert_eq!(ctx.inverse(&z), Err(CliffordError::NotInvertible));
    }

    #[test]
    fn extract_round_trip_and_errors() {
        let q = Field::rationals();
        let ctx = hyperbolic(q, 2);
        let x = vecq(q, &[1, -2, 3, 5]);
        assert_eq!(
            ctx.extract_vector(&ctx.embed_vector(&x).unwrap()).unwrap(),
            x
        );
        assert_eq!(
            ctx.extract_vector(&ctx.one()),
            Err(CliffordError::NotAVector)
        );
        let e = ctx.embed_vector(&unit_vector(q, 4, 0)).unwrap();
        let f = ctx.embed_vector(&unit_vector(q, 4, 1)).unwrap();
        assert_eq!(
            ctx.extract_vector(&ctx.mul(&e, &f)),
            Err(CliffordError::NotAVector)
        );
    }

    #[test]
    fn text_form_round_trip() {
        let q = Field::rationals();
        let ctx = hyperbolic(q, 1);
        let a = ctx
            .parse_terms(&[(vec![1, 2], "3/2".into()), (vec![], "1".into())])
            .unwrap();
        assert_eq!(
            a.to_json_terms(),
            vec![(vec![], "1".to_string()), (vec![1, 2], "3/2".to_string())]
        );
        let swapped = ctx.parse_terms(&[(vec![2, 1], "3/2".into())]).unwrap();
        assert_eq!(swapped, Multivector::blade(0b11, q.ratio(-3, 2).unwrap()));
        assert!(ctx.parse_terms(&[(vec![3], "1".into())]).is_err());
    }

    #[test]
    fn context_mismatch_detected() {
        let q = Field::rationals();
        let ctx = hyperbolic(q, 1);
        let big = Multivector::blade(0b100, q.one());
        assert_eq!(
            ctx.try_mul(&big, &ctx.one()),
            Err(CliffordError::ContextMismatch)
        );
        let f5 = Field::prime(5).unwrap();
        let other = Multivector::scalar(f5.one());
        assert_eq!(
            ctx.try_mul(&other, &ctx.one()),
            Err(CliffordError::ContextMismatch)
        );
    }

    #[test]
    fn dimension_cap() {
        let q = Field::rationals();
        assert_eq!(
            CliffordCtx::new(QSpace::hyperbolic(q, 7)).err(),
            Some(CliffordError::DimensionTooLarge(14))
        );
    }
}
