//! Quadratic spaces, orthogonal bases, Witt decomposition and discriminants.
//!
//! The Gram matrix stores the polar form `B` (no factor ½), so
//! `q(x) = B(x, x) / 2`.

use thiserror::Error;

use crate::field::{Field, FieldError, Scalar};
use crate::linalg::{dot, is_zero_vec, unit_vector, vec_add, vec_scale, vec_sub, Matrix, Vector};

/// Box bound for the rational isotropic search over three coordinates.
const RATIONAL_BOX: i64 = 50;
/// Smaller box used for four-coordinate searches.
const RATIONAL_BOX_4: i64 = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("quadratic form is degenerate")]
    Degenerate,
    #[error("restriction of the form to the subspace is degenerate")]
    DegenerateSubspace,
    #[error("vector of length {got} given for a space of dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspace basis is linearly dependent")]
    DependentBasis,
    #[error("bounded isotropic vector search exhausted over the rationals")]
    IsotropicSearchFailed,
    #[error("cannot parse form {0:?}")]
    BadShorthand(String),
}

/// A nondegenerate quadratic space `(F^n, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSpace {
    field: Field,
    gram: Matrix,
}

impl QSpace {
    pub fn from_gram(gram: Matrix) -> Result<QSpace, SpaceError> {
        let field = gram.field();
        Field::new(field.spec())?;
        if !gram.is_square() || gram.rows() == 0 {
            return Err(SpaceError::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(SpaceError::NotSymmetric);
        }
        if gram.det().is_zero() {
            return Err(SpaceError::Degenerate);
        }
        Ok(QSpace { field, gram })
    }

    /// Orthogonal sum of `m` hyperbolic planes, basis `e1, f1, …, em, fm`.
    pub fn hyperbolic(field: Field, m: usize) -> QSpace {
        Self::hyperbolic_plus(field, m, &[]).expect("hyperbolic form is nondegenerate")
    }

    /// `m` hyperbolic planes followed by diagonal vectors with the given
    /// q-values (Gram entries `2d`).
    pub fn hyperbolic_plus(
        field: Field,
        m: usize,
        q_values: &[Scalar],
    ) -> Result<QSpace, SpaceError> {
        let n = 2 * m + q_values.len();
        let mut g = Matrix::zeros(field, n, n);
        for i in 0..m {
            g.set(2 * i, 2 * i + 1, field.one());
            g.set(2 * i + 1, 2 * i, field.one());
        }
        for (k, d) in q_values.iter().enumerate() {
            field.check(d)?;
            g.set(2 * m + k, 2 * m + k, d + d);
        }
        QSpace::from_gram(g)
    }

    /// Diagonal form with the given q-values.
    pub fn diagonal(field: Field, q_values: &[Scalar]) -> Result<QSpace, SpaceError> {
        Self::hyperbolic_plus(field, 0, q_values)
    }

    /// Parses `hyperbolic:m`, `hyperbolic:m+anisotropic:[d,…]` or
    /// `diag:[d,…]`; the bracketed values are q-values.
    pub fn from_shorthand(field: Field, form: &str) -> Result<QSpace, SpaceError> {
        let bad = || SpaceError::BadShorthand(form.to_string());
        let mut m = 0usize;
        let mut diag = Vec::new();
        for part in form.split('+') {
            let part = part.trim();
            let (kind, arg) = part.split_once(':').ok_or_else(bad)?;
            match kind.trim() {
                "hyperbolic" => m += arg.trim().parse::<usize>().map_err(|_| bad())?,
                "anisotropic" | "diag" => {
                    let inner = arg
                        .trim()
                        .strip_prefix('[')
                        .and_then(|s| s.strip_suffix(']'))
                        .ok_or_else(bad)?;
                    for v in inner.split(',').filter(|s| !s.trim().is_empty()) {
                        diag.push(field.parse(v)?);
                    }
                }
                _ => return Err(bad()),
            }
        }
        if m == 0 && diag.is_empty() {
            return Err(bad());
        }
        QSpace::hyperbolic_plus(field, m, &diag)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    fn check_len(&self, x: &[Scalar]) -> Result<(), SpaceError> {
        if x.len() != self.dim() {
            return Err(SpaceError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `B(x, y) = xᵀ G y`.
    pub fn polar(&self, x: &[Scalar], y: &[Scalar]) -> Result<Scalar, SpaceError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.b(x, y))
    }

    pub(crate) fn b(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        dot(x, &self.gram.mul_vec(y))
    }

    pub fn q(&self, x: &[Scalar]) -> Scalar {
        let two = self.field.from_i64(2);
        &self.b(x, x) / &two
    }

    /// Gram matrix of `B` restricted to the span of `basis`.
    pub fn restricted_gram(&self, basis: &[Vector]) -> Matrix {
        let k = basis.len();
        let mut g = Matrix::zeros(self.field, k, k);
        for i in 0..k {
            for j in i..k {
                let v = self.b(&basis[i], &basis[j]);
                g.set(i, j, v.clone());
                g.set(j, i, v);
            }
        }
        g
    }

    /// Orthogonal basis (columns) with the nonzero q-values of each column.
    pub fn orthogonal_diagonalize(&self) -> (Matrix, Vec<Scalar>) {
        let n = self.dim();
        let basis: Vec<Vector> = (0..n).map(|i| unit_vector(self.field, n, i)).collect();
        let (vs, qs) = self
            .diagonalize_span(&basis)
            .expect("nondegenerate space diagonalizes");
        (Matrix::from_columns(self.field, n, &vs), qs)
    }

    /// Orthogonal basis of `span(basis)`; fails when the restriction is
    /// degenerate.
    pub fn diagonalize_span(
        &self,
        basis: &[Vector],
    ) -> Result<(Vec<Vector>, Vec<Scalar>), SpaceError> {
        let mut vs: Vec<Vector> = basis.to_vec();
        let mut out = Vec::new();
        let mut qs = Vec::new();
        while !vs.is_empty() {
            let idx = match vs.iter().position(|v| !self.q(v).is_zero()) {
                Some(i) => i,
                None => {
                    let mut found = None;
                    'outer: for i in 0..vs.len() {
                        for j in i + 1..vs.len() {
                            if !self.b(&vs[i], &vs[j]).is_zero() {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    let (i, j) = found.ok_or(SpaceError::DegenerateSubspace)?;
                    let a = vec_add(&vs[i], &vs[j]);
                    let b = vec_sub(&vs[i], &vs[j]);
                    vs[i] = a;
                    vs[j] = b;
                    i
                }
            };
            let v = vs.remove(idx);
            let two_q = self.b(&v, &v);
            for w in vs.iter_mut() {
                let c = &self.b(w, &v) / &two_q;
                if !c.is_zero() {
                    *w = vec_sub(w, &vec_scale(&v, &c));
                }
            }
            qs.push(self.q(&v));
            out.push(v);
        }
        Ok((out, qs))
    }

    /// Witt decomposition of the whole space.
    pub fn witt_decompose(&self) -> Result<WittBasis, SpaceError> {
        let n = self.dim();
        let basis: Vec<Vector> = (0..n).map(|i| unit_vector(self.field, n, i)).collect();
        self.witt_decompose_span(&basis)
    }

    /// Witt decomposition of a nondegenerate subspace given by a basis.
    pub fn witt_decompose_span(&self, basis: &[Vector]) -> Result<WittBasis, SpaceError> {
        for v in basis {
            self.check_len(v)?;
        }
        if self.restricted_gram(basis).det().is_zero() {
            return Err(SpaceError::DegenerateSubspace);
        }
        let mut current: Vec<Vector> = basis.to_vec();
        let mut pairs = Vec::new();
        while !current.is_empty() {
            let Some(e) = self.find_isotropic(&current)? else {
                break;
            };
            let x = current
                .iter()
                .find(|x| !self.b(&e, x).is_zero())
                .expect("nondegenerate span pairs every isotropic vector")
                .clone();
            let bex = self.b(&e, &x);
            let coef = &self.q(&x) / &(&bex * &bex);
            let f = vec_sub(&vec_scale(&x, &bex.inv().unwrap()), &vec_scale(&e, &coef));
            // project the rest onto the complement of span(e, f)
            let projected: Vec<Vector> = current
                .iter()
                .map(|u| {
                    let ue = self.b(u, &e);
                    let uf = self.b(u, &f);
                    vec_sub(&vec_sub(u, &vec_scale(&e, &uf)), &vec_scale(&f, &ue))
                })
                .collect();
            current = independent_prefix(self.field, &projected);
            pairs.push((e, f));
        }
        let (anisotropic, _) = self.diagonalize_span(&current)?;
        Ok(WittBasis {
            dim: self.dim(),
            pairs,
            anisotropic,
        })
    }

    /// A nonzero isotropic vector in `span(basis)`, `None` if the span is
    /// anisotropic.
    fn find_isotropic(&self, basis: &[Vector]) -> Result<Option<Vector>, SpaceError> {
        if let Some(v) = basis.iter().find(|v| self.q(v).is_zero()) {
            return Ok(Some(v.clone()));
        }
        let (us, qs) = self.diagonalize_span(basis)?;
        for i in 0..us.len() {
            for j in i + 1..us.len() {
                let r = -(&qs[i] / &qs[j]);
                if let Some(c) = self.field.is_square(&r)? {
                    return Ok(Some(vec_add(&us[i], &vec_scale(&us[j], &c))));
                }
            }
        }
        if us.len() < 3 {
            return Ok(None);
        }
        if self.field.is_finite() {
            let p = self.field.order().unwrap() as i64;
            for x in 0..p {
                let x = self.field.from_i64(x);
                let val = -(&(&(&qs[0] * &x) * &x + &qs[2]) / &qs[1]);
                let y = if val.is_zero() {
                    Some(self.field.zero())
                } else {
                    self.field.is_square(&val)?
                };
                if let Some(y) = y {
                    let v = vec_add(
                        &vec_add(&vec_scale(&us[0], &x), &vec_scale(&us[1], &y)),
                        &us[2],
                    );
                    debug_assert!(self.q(&v).is_zero());
                    return Ok(Some(v));
                }
            }
            unreachable!("ternary forms over finite fields are isotropic");
        }
        rational_box_search(self.field, &us, &qs)
    }

    pub fn discriminant(&self, w: &Subspace) -> Result<Scalar, SpaceError> {
        for v in &w.basis {
            self.check_len(v)?;
        }
        if self.restricted_gram(&w.basis).det().is_zero() {
            return Err(SpaceError::DegenerateSubspace);
        }
        let (_, qs) = self.diagonalize_span(&w.basis)?;
        let prod = qs.iter().fold(self.field.one(), |acc, x| &acc * x);
        Ok(self.field.square_class(&prod)?)
    }

    /// Basis of `{x : B(x, s) = 0 for all s in span}`.
    pub fn orthogonal_complement(&self, span: &[Vector]) -> Vec<Vector> {
        if span.is_empty() {
            let n = self.dim();
            return (0..n).map(|i| unit_vector(self.field, n, i)).collect();
        }
        let rows: Vec<Vector> = span.iter().map(|s| self.gram.mul_vec(s)).collect();
        Matrix::from_rows(self.field, rows).kernel()
    }

    /// Reflection `S_v(x) = x - B(v,x)/q(v) v` as a matrix.
    pub fn reflection(&self, v: &[Scalar]) -> Matrix {
        let n = self.dim();
        let qv = self.q(v);
        let inv = qv.inv().expect("reflection in an anisotropic vector");
        let mut m = Matrix::identity(self.field, n);
        let gv = self.gram.mul_vec(v);
        for i in 0..n {
            for j in 0..n {
                let delta = &(&v[i] * &gv[j]) * &inv;
                if !delta.is_zero() {
                    let x = m.get(i, j) - &delta;
                    m.set(i, j, x);
                }
            }
        }
        m
    }

    /// `Mᵀ G M = G`.
    pub fn preserves_form(&self, m: &Matrix) -> bool {
        m.rows() == self.dim() && m.transpose().mul(&self.gram).mul(m) == self.gram
    }

    pub fn witt_index_reference(&self) -> usize {
        witt_index_finite(self)
    }
}

fn independent_prefix(field: Field, vs: &[Vector]) -> Vec<Vector> {
    let mut kept: Vec<Vector> = Vec::new();
    for v in vs {
        if is_zero_vec(v) {
            continue;
        }
        let mut trial = kept.clone();
        trial.push(v.clone());
        if Matrix::from_rows(field, trial.clone()).rank() == trial.len() {
            kept = trial;
        }
    }
    kept
}

fn rational_box_search(
    field: Field,
    us: &[Vector],
    qs: &[Scalar],
) -> Result<Option<Vector>, SpaceError> {
    let positive = |x: &Scalar| {
        x.as_rational().map_or(false, |r| {
            r > &num_rational::BigRational::from_integer(0.into())
        })
    };
    if qs.iter().all(positive) || qs.iter().all(|x| !positive(x)) {
        // definite over the reals, so anisotropic over Q
        return Ok(None);
    }
    let k = us.len();
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                if i == j || j == l || i == l || i > l {
                    continue;
                }
                for z in 1..=RATIONAL_BOX {
                    let z = field.from_i64(z);
                    for x in 0..=RATIONAL_BOX {
                        let x = field.from_i64(x);
                        let rest = &(&qs[i] * &(&x * &x)) + &(&qs[l] * &(&z * &z));
                        let val = -(&rest / &qs[j]);
                        let y = if val.is_zero() {
                            Some(field.zero())
                        } else {
                            field.is_square(&val)?
                        };
                        if let Some(y) = y {
                            let v = vec_add(
                                &vec_add(&vec_scale(&us[i], &x), &vec_scale(&us[j], &y)),
                                &vec_scale(&us[l], &z),
                            );
                            return Ok(Some(v));
                        }
                    }
                }
            }
        }
    }
    if k >= 4 {
        let idx = [0usize, 1, 2, 3];
        let b = RATIONAL_BOX_4;
        for w in 1..=b {
            for x in 0..=b {
                for z in 0..=b {
                    let (w, x, z) = (field.from_i64(w), field.from_i64(x), field.from_i64(z));
                    let rest = &(&(&qs[idx[0]] * &(&x * &x)) + &(&qs[idx[2]] * &(&z * &z)))
                        + &(&qs[idx[3]] * &(&w * &w));
                    let val = -(&rest / &qs[idx[1]]);
                    let y = if val.is_zero() {
                        Some(field.zero())
                    } else {
                        field.is_square(&val)?
                    };
                    if let Some(y) = y {
                        let mut v = vec_scale(&us[0], &x);
                        v = vec_add(&v, &vec_scale(&us[1], &y));
                        v = vec_add(&v, &vec_scale(&us[2], &z));
                        v = vec_add(&v, &vec_scale(&us[3], &w));
                        return Ok(Some(v));
                    }
                }
            }
        }
    }
    Err(SpaceError::IsotropicSearchFailed)
}

/// Witt index over a finite field from dimension and discriminant.
fn witt_index_finite(space: &QSpace) -> usize {
    let n = space.dim();
    if n % 2 == 1 {
        return (n - 1) / 2;
    }
    let (_, qs) = space.orthogonal_diagonalize();
    let field = space.field();
    let mut d = qs.iter().fold(field.one(), |acc, x| &acc * x);
    if (n / 2) % 2 == 1 {
        d = -d;
    }
    match field.is_square(&d) {
        Ok(Some(_)) => n / 2,
        _ => n / 2 - 1,
    }
}

/// Span of a list of vectors in an ambient [`QSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub basis: Vec<Vector>,
}

impl Subspace {
    pub fn new(field: Field, basis: Vec<Vector>) -> Result<Subspace, SpaceError> {
        if !basis.is_empty() && Matrix::from_rows(field, basis.clone()).rank() != basis.len() {
            return Err(SpaceError::DependentBasis);
        }
        Ok(Subspace { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Hyperbolic pairs `(eᵢ, fᵢ)` plus an orthogonal anisotropic complement, all
/// in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittBasis {
    dim: usize,
    pub pairs: Vec<(Vector, Vector)>,
    pub anisotropic: Vec<Vector>,
}

impl WittBasis {
    pub fn witt_index(&self) -> usize {
        self.pairs.len()
    }

    pub fn span_dim(&self) -> usize {
        2 * self.pairs.len() + self.anisotropic.len()
    }

    /// Basis vectors ordered `e1, f1, …, em, fm, anisotropic…`.
    pub fn ordered(&self) -> Vec<Vector> {
        let mut out = Vec::with_capacity(self.span_dim());
        for (e, f) in &self.pairs {
            out.push(e.clone());
            out.push(f.clone());
        }
        out.extend(self.anisotropic.iter().cloned());
        out
    }

    /// Columns are the ordered Witt basis in ambient coordinates.
    pub fn change(&self, field: Field) -> Matrix {
        Matrix::from_columns(field, self.dim, &self.ordered())
    }

    /// Expresses an ambient-coordinate operator in Witt coordinates.
    pub fn to_witt_coords(&self, field: Field, m: &Matrix) -> Option<Matrix> {
        let c = self.change(field);
        Some(c.inverse()?.mul(m).mul(&c))
    }

    /// Checks every defining identity by direct evaluation.
    pub fn verify(&self, space: &QSpace) -> bool {
        let zero_q = |v: &Vector| space.q(v).is_zero();
        for (i, (e, f)) in self.pairs.iter().enumerate() {
            if !zero_q(e) || !zero_q(f) {
                return false;
            }
            for (j, (e2, f2)) in self.pairs.iter().enumerate() {
                let want_one = i == j;
                let bef = space.b(e, f2);
                if (want_one && !bef.is_one()) || (!want_one && !bef.is_zero()) {
                    return false;
                }
                if i != j && (!space.b(e, e2).is_zero() || !space.b(f, f2).is_zero()) {
                    return false;
                }
            }
            for a in &self.anisotropic {
                if !space.b(e, a).is_zero() || !space.b(f, a).is_zero() {
                    return false;
                }
            }
        }
        for (i, a) in self.anisotropic.iter().enumerate() {
            if space.q(a).is_zero() {
                return false;
            }
            for b in &self.anisotropic[i + 1..] {
                if !space.b(a, b).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Exhaustively decides whether a space over a small prime field has a
/// nonzero isotropic vector.
pub fn has_isotropic_vector_exhaustive(space: &QSpace) -> bool {
    let field = space.field();
    let p = field.order().expect("finite field") as usize;
    let n = space.dim();
    let total = p.pow(n as u32);
    (1..total).any(|mut code| {
        let v: Vector = (0..n)
            .map(|_| {
                let c = code % p;
                code /= p;
                field.from_i64(c as i64)
            })
            .collect();
        space.q(&v).is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn m(field: Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    fn v(field: Field, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| field.from_i64(x)).collect()
    }

    #[test]
    fn gram_validation() {
        let h = QSpace::from_gram(m(q(), &[&[0, 1], &[1, 0]])).unwrap();
        assert!(h.q(&v(q(), &[1, 0])).is_zero());
        assert!(h.q(&v(q(), &[0, 1])).is_zero());
        let f3 = Field::prime(3).unwrap();
        let s = QSpace::from_gram(m(f3, &[&[2, 0], &[0, 2]])).unwrap();
        assert!(s.q(&v(f3, &[1, 0])).is_one());
        assert_eq!(
            QSpace::from_gram(m(q(), &[&[0, 0], &[0, 2]])),
            Err(SpaceError::Degenerate)
        );
        assert_eq!(
            QSpace::from_gram(m(q(), &[&[0, 1], &[2, 0]])),
            Err(SpaceError::NotSymmetric)
        );
    }

    #[test]
    fn polar_values() {
        let h = QSpace::hyperbolic(q(), 1);
        assert!(h
            .polar(&v(q(), &[1, 0]), &v(q(), &[0, 1]))
            .unwrap()
            .is_one());
        assert!(h
            .polar(&v(q(), &[0, 0]), &v(q(), &[3, 4]))
            .unwrap()
            .is_zero());
        let s = QSpace::from_gram(m(q(), &[&[2, 0], &[0, 2]])).unwrap();
        let x = v(q(), &[1, 1]);
        assert_eq!(s.polar(&x, &x).unwrap(), q().from_i64(4));
        assert_eq!(s.q(&x), q().from_i64(2));
        assert!(matches!(
            s.polar(&v(q(), &[1]), &x),
            Err(SpaceError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn diagonalize_hyperbolic_plane() {
        let h = QSpace::hyperbolic(q(), 1);
        let (basis, qs) = h.orthogonal_diagonalize();
        assert_eq!(basis.column(0), v(q(), &[1, 1]));
        assert_eq!(basis.column(1), v(q(), &[1, -1]));
        assert_eq!(qs, vec![q().one(), q().from_i64(-1)]);
    }

    #[test]
    fn diagonal_input_keeps_identity_basis() {
        let f3 = Field::prime(3).unwrap();
        let s = QSpace::from_gram(m(f3, &[&[2, 0], &[0, 2]])).unwrap();
        let (basis, qs) = s.orthogonal_diagonalize();
        assert!(basis.is_identity());
        assert_eq!(qs, vec![f3.one(), f3.one()]);
    }

    #[test]
    fn witt_hyperbolic_plane() {
        let h = QSpace::hyperbolic(q(), 1);
        let w = h.witt_decompose().unwrap();
        assert_eq!(w.witt_index(), 1);
        assert!(w.anisotropic.is_empty());
        assert!(w.verify(&h));
    }

    #[test]
    fn witt_anisotropic_plane_over_f3() {
        let f3 = Field::prime(3).unwrap();
        let s = QSpace::diagonal(f3, &[f3.one(), f3.one()]).unwrap();
        let w = s.witt_decompose().unwrap();
        assert_eq!(w.witt_index(), 0);
        assert_eq!(w.anisotropic.len(), 2);
        assert!(!has_isotropic_vector_exhaustive(&s));
    }

    #[test]
    fn witt_split_rational_plane() {
        let s = QSpace::diagonal(q(), &[q().one(), q().from_i64(-1)]).unwrap();
        let w = s.witt_decompose().unwrap();
        assert_eq!(w.witt_index(), 1);
        let (e, f) = &w.pairs[0];
        assert_eq!(e, &v(q(), &[1, 1]));
        let quarter = q().ratio(1, 4).unwrap();
        assert_eq!(f, &vec![quarter.clone(), -quarter]);
        assert!(s.b(e, f).is_one());
        assert!(w.verify(&s));
    }

    #[test]
    fn definite_rational_form_is_anisotropic() {
        let s = QSpace::diagonal(q(), &[q().one(), q().one(), q().one()]).unwrap();
        let w = s.witt_decompose().unwrap();
        assert_eq!(w.witt_index(), 0);
    }

    #[test]
    fn rational_ternary_search_finds_pythagorean_triple() {
        // x^2 + y^2 - z^2 has no two-term isotropic vector with these weights
        let s = QSpace::diagonal(q(), &[q().one(), q().from_i64(2), q().from_i64(-3)]).unwrap();
        let w = s.witt_decompose().unwrap();
        assert_eq!(w.witt_index(), 1);
        assert!(w.verify(&s));
    }

    #[test]
    fn hyperbolic_shorthand_keeps_standard_pairs() {
        let f5 = Field::prime(5).unwrap();
        let s = QSpace::from_shorthand(f5, "hyperbolic:2+anisotropic:[3]").unwrap();
        assert_eq!(s.dim(), 5);
        let w = s.witt_decompose().unwrap();
        assert_eq!(w.witt_index(), 2);
        assert!(w.change(f5).is_identity());
        assert!(QSpace::from_shorthand(f5, "bogus:1").is_err());
    }

    #[test]
    fn discriminants() {
        let h = QSpace::hyperbolic(q(), 1);
        let whole = Subspace::new(q(), vec![v(q(), &[1, 0]), v(q(), &[0, 1])]).unwrap();
        assert_eq!(h.discriminant(&whole).unwrap(), q().from_i64(-1));
        let s = QSpace::diagonal(q(), &[q().from_i64(12), q().one()]).unwrap();
        let line = Subspace::new(q(), vec![v(q(), &[1, 0])]).unwrap();
        assert_eq!(s.discriminant(&line).unwrap(), q().from_i64(3));
        let f5 = Field::prime(5).unwrap();
        let t = QSpace::diagonal(f5, &[f5.one(), f5.one(), f5.from_i64(2)]).unwrap();
        let w = Subspace::new(f5, vec![v(f5, &[1, 0, 0]), v(f5, &[0, 1, 0])]).unwrap();
        assert!(t.discriminant(&w).unwrap().is_one());
        let iso = Subspace::new(q(), vec![v(q(), &[1, 0])]).unwrap();
        assert_eq!(h.discriminant(&iso), Err(SpaceError::DegenerateSubspace));
    }

    #[test]
    fn witt_index_matches_exhaustive_search_small_dims() {
        for p in [3u64, 5, 7] {
            let f = Field::prime(p).unwrap();
            let ns = f.least_nonsquare().unwrap();
            for diag in [
                vec![f.one(), f.one()],
                vec![f.one(), ns.clone()],
                vec![f.one(), -f.one()],
                vec![f.one(), f.one(), ns.clone()],
                vec![f.one(), f.one(), f.one(), ns.clone()],
                vec![f.one(), f.one(), f.one(), f.one()],
            ] {
                let s = QSpace::diagonal(f, &diag).unwrap();
                let w = s.witt_decompose().unwrap();
                assert!(w.verify(&s));
                assert_eq!(w.witt_index(), s.witt_index_reference());
                // index 0 exactly when no isotropic vector exists
                assert_eq!(w.witt_index() > 0, has_isotropic_vector_exhaustive(&s));
                // anisotropic remainder is really anisotropic
                if !w.anisotropic.is_empty() && w.anisotropic.len() <= 4 {
                    let rest = QSpace::from_gram(s.restricted_gram(&w.anisotropic)).unwrap();
                    assert!(!has_isotropic_vector_exhaustive(&rest));
                }
            }
        }
    }

    #[test]
    fn reflection_fixes_complement_and_negates_vector() {
        let s = QSpace::diagonal(q(), &[q().one(), q().from_i64(3)]).unwrap();
        let a = v(q(), &[1, 1]);
        let r = s.reflection(&a);
        assert_eq!(r.mul_vec(&a), vec_scale(&a, &q().from_i64(-1)));
        assert!(s.preserves_form(&r));
        assert!(r.mul(&r).is_identity());
    }
}
