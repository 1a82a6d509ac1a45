//! Alternating, quadratic and Hermitian forms on V = F^n, isotropy tests,
//! projective points, and the explicit form-preserving linear maps
//! (symmetry generators t_a and the transvections / Siegel maps tau).

use std::fmt;

use thiserror::Error;

use crate::field::{conj_q, FieldElement, FiniteField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("vector dimension {got} does not match form dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("form is degenerate")]
    Degenerate,
    #[error("gram data is not compatible with the form kind")]
    BadGram,
    #[error("hermitian form requires a field of order q^2")]
    BadHermitianField,
    #[error("generator parameter must satisfy a + a^q = 0")]
    TraceCondition,
    #[error("vectors must be nonzero")]
    ZeroVector,
    #[error("u, v must span a totally isotropic/singular subspace")]
    NotTotallyIsotropic,
    #[error("siegel map on a quadratic form requires <u> != <v>")]
    EqualDirections,
    #[error("operation is not defined for this form kind")]
    UnsupportedKind,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("zero vector does not define a projective point")]
    ZeroPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Alternating,
    Quadratic,
    Hermitian,
}

/// A nondegenerate form on F^n together with the data needed to evaluate
/// it: the Gram matrix (alternating, Hermitian) or the upper-triangular
/// coefficient matrix of the quadratic polynomial.
#[derive(Clone)]
pub struct FormSpec {
    kind: FormKind,
    dim: usize,
    field: FiniteField,
    gram: Vec<Vec<FieldElement>>,
    /// Subfield order q when the form is Hermitian over GF(q^2).
    sub_q: Option<u64>,
}

impl fmt::Debug for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} form on {:?}^{}", self.kind, self.field, self.dim)
    }
}

/// A 1-dimensional subspace, stored via the unique representative whose
/// first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq)]
pub struct ProjectivePoint {
    coords: Vec<FieldElement>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<FieldElement>) -> Result<ProjectivePoint, FormError> {
        let lead = coords.iter().position(|c| !c.is_zero());
        let Some(lead) = lead else {
            return Err(FormError::ZeroPoint);
        };
        let inv = coords[lead].inverse().expect("nonzero leading coordinate");
        let coords = coords.iter().map(|c| c * &inv).collect();
        Ok(ProjectivePoint { coords })
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// Lexicographic key over coefficient encodings; fixes the canonical
    /// point order of every constructed geometry.
    pub fn sort_key(&self) -> Vec<u64> {
        self.coords.iter().map(|c| c.encoding()).collect()
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c.encoding())?;
        }
        write!(f, ">")
    }
}

impl FormSpec {
    pub fn alternating(
        field: FiniteField,
        gram: Vec<Vec<FieldElement>>,
    ) -> Result<Self, FormError> {
        let dim = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != dim {
                return Err(FormError::BadGram);
            }
            if !row[i].is_zero() {
                return Err(FormError::BadGram);
            }
            for j in 0..dim {
                if gram[i][j] != gram[j][i].neg() {
                    return Err(FormError::BadGram);
                }
            }
        }
        let spec = FormSpec {
            kind: FormKind::Alternating,
            dim,
            field,
            gram,
            sub_q: None,
        };
        spec.check_nondegenerate()?;
        Ok(spec)
    }

    pub fn quadratic(field: FiniteField, upper: Vec<Vec<FieldElement>>) -> Result<Self, FormError> {
        let dim = upper.len();
        for (i, row) in upper.iter().enumerate() {
            if row.len() != dim {
                return Err(FormError::BadGram);
            }
            if row.iter().take(i).any(|c| !c.is_zero()) {
                return Err(FormError::BadGram);
            }
        }
        let spec = FormSpec {
            kind: FormKind::Quadratic,
            dim,
            field,
            gram: upper,
            sub_q: None,
        };
        spec.check_nondegenerate()?;
        Ok(spec)
    }

    pub fn hermitian(
        field: FiniteField,
        q: u64,
        gram: Vec<Vec<FieldElement>>,
    ) -> Result<Self, FormError> {
        if q.checked_mul(q) != Some(field.order()) {
            return Err(FormError::BadHermitianField);
        }
        let dim = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != dim {
                return Err(FormError::BadGram);
            }
            for j in 0..dim {
                let conj = conj_q(&gram[j][i], q).expect("hermitian base field");
                if gram[i][j] != conj {
                    return Err(FormError::BadGram);
                }
            }
        }
        let spec = FormSpec {
            kind: FormKind::Hermitian,
            dim,
            field,
            gram,
            sub_q: Some(q),
        };
        spec.check_nondegenerate()?;
        Ok(spec)
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Subfield order q of a Hermitian form over GF(q^2).
    pub fn sub_q(&self) -> Option<u64> {
        self.sub_q
    }

    fn conj(&self, x: &FieldElement) -> FieldElement {
        match self.sub_q {
            Some(q) => conj_q(x, q).expect("hermitian base field"),
            None => x.clone(),
        }
    }

    fn check_dim(&self, v: &[FieldElement]) -> Result<(), FormError> {
        if v.len() != self.dim {
            return Err(FormError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// The scalar value of the form at one vector: Q(x) for quadratic
    /// kind, kappa(x,x) / H(x,x) otherwise.
    pub fn eval(&self, x: &[FieldElement]) -> Result<FieldElement, FormError> {
        self.check_dim(x)?;
        match self.kind {
            FormKind::Quadratic => {
                let mut acc = self.field.zero();
                for i in 0..self.dim {
                    for j in i..self.dim {
                        if self.gram[i][j].is_zero() {
                            continue;
                        }
                        acc = &acc + &(&(&self.gram[i][j] * &x[i]) * &x[j]);
                    }
                }
                Ok(acc)
            }
            _ => self.eval_pair(x, x),
        }
    }

    /// The bilinear/sesquilinear value at a pair. For the quadratic kind
    /// this is the associated bilinear form f(x,y) = Q(x+y) - Q(x) - Q(y).
    pub fn eval_pair(
        &self,
        x: &[FieldElement],
        y: &[FieldElement],
    ) -> Result<FieldElement, FormError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        match self.kind {
            FormKind::Quadratic => {
                let sum: Vec<FieldElement> = x.iter().zip(y).map(|(a, b)| a + b).collect();
                let qs = self.eval(&sum)?;
                let qx = self.eval(x)?;
                let qy = self.eval(y)?;
                Ok(&(&qs - &qx) - &qy)
            }
            FormKind::Alternating => {
                let mut acc = self.field.zero();
                for i in 0..self.dim {
                    if x[i].is_zero() {
                        continue;
                    }
                    for j in 0..self.dim {
                        if self.gram[i][j].is_zero() || y[j].is_zero() {
                            continue;
                        }
                        acc = &acc + &(&(&self.gram[i][j] * &x[i]) * &y[j]);
                    }
                }
                Ok(acc)
            }
            FormKind::Hermitian => {
                let mut acc = self.field.zero();
                for i in 0..self.dim {
                    if x[i].is_zero() {
                        continue;
                    }
                    for j in 0..self.dim {
                        if self.gram[i][j].is_zero() || y[j].is_zero() {
                            continue;
                        }
                        let cy = self.conj(&y[j]);
                        acc = &acc + &(&(&self.gram[i][j] * &x[i]) * &cy);
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Scaling-invariant isotropy/singularity test for a projective point.
    pub fn is_isotropic(&self, pt: &ProjectivePoint) -> Result<bool, FormError> {
        Ok(self.eval(pt.coords())?.is_zero())
    }

    /// Orthogonality under the (associated) bilinear/sesquilinear form;
    /// two isotropic points are collinear in the geometry iff orthogonal.
    pub fn orthogonal(&self, x: &[FieldElement], y: &[FieldElement]) -> Result<bool, FormError> {
        Ok(self.eval_pair(x, y)?.is_zero())
    }

    /// The Gram matrix of the (associated) bilinear/sesquilinear form.
    fn pair_gram(&self) -> Vec<Vec<FieldElement>> {
        match self.kind {
            FormKind::Quadratic => {
                // U + U^T
                let mut b = vec![vec![self.field.zero(); self.dim]; self.dim];
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        b[i][j] = &self.gram[i][j] + &self.gram[j][i];
                    }
                }
                b
            }
            _ => self.gram.clone(),
        }
    }

    /// Nondegeneracy by brute-force radical computation: the radical of
    /// the pair form must be zero, except that for a quadratic form in
    /// characteristic 2 a radical vector is admissible when Q does not
    /// vanish on it (parabolic case).
    fn check_nondegenerate(&self) -> Result<(), FormError> {
        let b = self.pair_gram();
        let null = nullspace(&b, &self.field);
        if null.is_empty() {
            return Ok(());
        }
        if self.kind != FormKind::Quadratic {
            return Err(FormError::Degenerate);
        }
        // enumerate the radical and require Q != 0 away from the origin
        let field = &self.field;
        let order = field.order();
        let rdim = null.len() as u32;
        let total = order.pow(rdim);
        if total > 1 << 20 {
            return Err(FormError::Degenerate);
        }
        for code in 1..total {
            let mut v = vec![field.zero(); self.dim];
            let mut c = code;
            for basis in &null {
                let coeff = field.from_encoding(c % order);
                c /= order;
                for (vi, bi) in v.iter_mut().zip(basis) {
                    *vi = &*vi + &(&coeff * bi);
                }
            }
            if self.eval(&v)?.is_zero() {
                return Err(FormError::Degenerate);
            }
        }
        Ok(())
    }
}

/// Basis of the right null space of a square matrix over a finite field.
pub(crate) fn nullspace(mat: &[Vec<FieldElement>], field: &FiniteField) -> Vec<Vec<FieldElement>> {
    let n = mat.len();
    if n == 0 {
        return Vec::new();
    }
    let mut a: Vec<Vec<FieldElement>> = mat.to_vec();
    let mut pivot_col_of_row = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, pr);
        let inv = a[row][col].inverse().expect("pivot nonzero");
        for c in 0..n {
            a[row][c] = &a[row][c] * &inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..n {
                    let sub = &factor * &a[row][c];
                    a[r][c] = &a[r][c] - &sub;
                }
            }
        }
        pivot_col_of_row.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let pivots: Vec<usize> = pivot_col_of_row;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![field.zero(); n];
        v[fc] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = a[r][fc].neg();
        }
        basis.push(v);
    }
    basis
}

/// An invertible n x n matrix acting on column vectors (x -> Mx).
#[derive(Clone, PartialEq, Eq)]
pub struct LinearMap {
    mat: Vec<Vec<FieldElement>>,
    field: FiniteField,
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearMap(dim {})", self.mat.len())
    }
}

impl LinearMap {
    pub fn new(mat: Vec<Vec<FieldElement>>, field: FiniteField) -> Result<LinearMap, FormError> {
        let n = mat.len();
        if mat.iter().any(|r| r.len() != n) {
            return Err(FormError::BadGram);
        }
        let map = LinearMap { mat, field };
        if !map.is_invertible() {
            return Err(FormError::SingularMatrix);
        }
        Ok(map)
    }

    pub fn identity(field: FiniteField, n: usize) -> LinearMap {
        let mut mat = vec![vec![field.zero(); n]; n];
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = field.one();
        }
        LinearMap { mat, field }
    }

    /// Builds the matrix of a linear map from its images of the standard
    /// basis vectors (column i = images[i]).
    pub fn from_basis_images(
        images: &[Vec<FieldElement>],
        field: FiniteField,
    ) -> Result<LinearMap, FormError> {
        let n = images.len();
        let mut mat = vec![vec![field.zero(); n]; n];
        for (j, img) in images.iter().enumerate() {
            if img.len() != n {
                return Err(FormError::BadGram);
            }
            for i in 0..n {
                mat[i][j] = img[i].clone();
            }
        }
        LinearMap::new(mat, field)
    }

    pub fn dim(&self) -> usize {
        self.mat.len()
    }

    pub fn matrix(&self) -> &[Vec<FieldElement>] {
        &self.mat
    }

    fn is_invertible(&self) -> bool {
        nullspace(&self.mat, &self.field).is_empty()
    }

    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let n = self.mat.len();
        assert_eq!(v.len(), n, "vector dimension");
        let mut out = vec![self.field.zero(); n];
        for i in 0..n {
            let mut acc = self.field.zero();
            for j in 0..n {
                if self.mat[i][j].is_zero() || v[j].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.mat[i][j] * &v[j]);
            }
            out[i] = acc;
        }
        out
    }

    pub fn apply_point(&self, pt: &ProjectivePoint) -> Result<ProjectivePoint, FormError> {
        ProjectivePoint::new(self.apply(pt.coords()))
    }

    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        // (self . other)(x) = self(other(x))
        let n = self.mat.len();
        let mut mat = vec![vec![self.field.zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.field.zero();
                for k in 0..n {
                    if self.mat[i][k].is_zero() || other.mat[k][j].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&self.mat[i][k] * &other.mat[k][j]);
                }
                mat[i][j] = acc;
            }
        }
        LinearMap {
            mat,
            field: self.field.clone(),
        }
    }

    /// Exact isometry test via matrix identities: M^T A M = A for the
    /// (sesqui)bilinear Gram A, and equality of quadratic coefficient
    /// matrices after symmetrization for the quadratic kind.
    pub fn preserves(&self, form: &FormSpec) -> bool {
        let n = self.mat.len();
        if n != form.dim() {
            return false;
        }
        match form.kind {
            FormKind::Quadratic => {
                // compare Q(Mx) and Q(x) as quadratic polynomials
                let mut transformed = vec![vec![form.field.zero(); n]; n];
                // B = M^T U M
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = form.field.zero();
                        for k in 0..n {
                            for l in 0..n {
                                if self.mat[k][i].is_zero()
                                    || form.gram[k][l].is_zero()
                                    || self.mat[l][j].is_zero()
                                {
                                    continue;
                                }
                                let term = &(&self.mat[k][i] * &form.gram[k][l]) * &self.mat[l][j];
                                acc = &acc + &term;
                            }
                        }
                        transformed[i][j] = acc;
                    }
                }
                for i in 0..n {
                    for j in i..n {
                        let lhs = if i == j {
                            transformed[i][i].clone()
                        } else {
                            &transformed[i][j] + &transformed[j][i]
                        };
                        let rhs = form.gram[i][j].clone();
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
                true
            }
            FormKind::Alternating | FormKind::Hermitian => {
                // M^T A sigma(M) = A
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = form.field.zero();
                        for k in 0..n {
                            for l in 0..n {
                                if self.mat[k][i].is_zero()
                                    || form.gram[k][l].is_zero()
                                    || self.mat[l][j].is_zero()
                                {
                                    continue;
                                }
                                let mj = form.conj(&self.mat[l][j]);
                                let term = &(&self.mat[k][i] * &form.gram[k][l]) * &mj;
                                acc = &acc + &term;
                            }
                        }
                        if acc != form.gram[i][j] {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }
}

fn standard_basis(field: &FiniteField, n: usize) -> Vec<Vec<FieldElement>> {
    (0..n)
        .map(|i| {
            let mut v = vec![field.zero(); n];
            v[i] = field.one();
            v
        })
        .collect()
}

/// The symmetry generator t_a about <e_1>: x -> x + a * form(x, e_1) * e_1.
/// For the Hermitian kind the parameter must have trace zero (a + a^q = 0);
/// the quadratic kind admits no such generator.
pub fn symmetry_generator_ta(form: &FormSpec, a: &FieldElement) -> Result<LinearMap, FormError> {
    if form.kind == FormKind::Quadratic {
        return Err(FormError::UnsupportedKind);
    }
    if form.kind == FormKind::Hermitian {
        let q = form.sub_q.expect("hermitian forms carry q");
        let tr = a + &conj_q(a, q).expect("hermitian base field");
        if !tr.is_zero() {
            return Err(FormError::TraceCondition);
        }
    }
    let n = form.dim();
    let field = form.field().clone();
    let basis = standard_basis(&field, n);
    let e1 = &basis[0];
    let images: Vec<Vec<FieldElement>> = basis
        .iter()
        .map(|ej| {
            let coeff = &form.eval_pair(ej, e1).expect("dimensions match") * a;
            ej.iter().zip(e1).map(|(c, e)| c + &(&coeff * e)).collect()
        })
        .collect();
    let map = LinearMap::from_basis_images(&images, field)?;
    debug_assert!(map.preserves(form));
    Ok(map)
}

/// The transvection / Siegel transformation
/// tau_{alpha,u,v}: x -> x + alpha*f(x,u)*v - alpha^sigma * f(v,x)^sigma * u,
/// for u, v spanning a totally isotropic/singular subspace.
pub fn transvection_tau(
    form: &FormSpec,
    alpha: &FieldElement,
    u: &[FieldElement],
    v: &[FieldElement],
) -> Result<LinearMap, FormError> {
    form.check_dim(u)?;
    form.check_dim(v)?;
    if u.iter().all(|c| c.is_zero()) || v.iter().all(|c| c.is_zero()) {
        return Err(FormError::ZeroVector);
    }
    if !form.eval(u)?.is_zero() || !form.eval(v)?.is_zero() || !form.eval_pair(u, v)?.is_zero() {
        return Err(FormError::NotTotallyIsotropic);
    }
    if form.kind == FormKind::Quadratic {
        let pu = ProjectivePoint::new(u.to_vec())?;
        let pv = ProjectivePoint::new(v.to_vec())?;
        if pu == pv {
            return Err(FormError::EqualDirections);
        }
    }
    let n = form.dim();
    let field = form.field().clone();
    let alpha_conj = form.conj(alpha);
    let basis = standard_basis(&field, n);
    let images: Vec<Vec<FieldElement>> = basis
        .iter()
        .map(|x| {
            let c1 = &form.eval_pair(x, u).expect("dimensions match") * alpha;
            let c2 = &form.conj(&form.eval_pair(v, x).expect("dimensions match")) * &alpha_conj;
            x.iter()
                .zip(v.iter().zip(u.iter()))
                .map(|(xi, (vi, ui))| &(xi + &(&c1 * vi)) - &(&c2 * ui))
                .collect()
        })
        .collect();
    let map = LinearMap::from_basis_images(&images, field)?;
    debug_assert!(map.preserves(form));
    Ok(map)
}

/// The trace-zero set {a in GF(q^2) : a + a^q = 0}; it has exactly q
/// elements and parametrizes the Hermitian symmetry generators.
pub fn trace_zero_elements(field: &FiniteField, q: u64) -> Result<Vec<FieldElement>, FormError> {
    if q.checked_mul(q) != Some(field.order()) {
        return Err(FormError::BadHermitianField);
    }
    Ok(field
        .elements()
        .filter(|a| {
            let c = conj_q(a, q).expect("quadratic extension");
            (a + &c).is_zero()
        })
        .collect())
}
