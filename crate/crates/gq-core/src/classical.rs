//! Constructors for the five classical generalized quadrangles from their
//! explicit forms: W(3,q), Q(4,q), Q-(5,q), H(3,q^2) and H(4,q^2). Points
//! are the isotropic/singular projective points; lines are the totally
//! isotropic/singular 2-spaces, realized as their point sets.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::field::{FieldElement, FiniteField};
use crate::forms::{self, FormError, FormKind, FormSpec, LinearMap, ProjectivePoint};
use crate::geometry::{verify_gq, GeneralizedQuadrangle, GeometryFile, GqError};

/// Refuse to materialize geometries above this many points unless forced.
pub const SIZE_CAP: u64 = 5000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassicalError {
    #[error("{0} is not a prime power >= 2")]
    NotPrimePower(u64),
    #[error(
        "geometry would have {points} points, above the cap of {cap}; pass force to build anyway"
    )]
    SizeRefusal { points: u64, cap: u64 },
    #[error("standard basis point e{index} is not isotropic for this family")]
    BasisPointNotIsotropic { index: usize },
    #[error("built geometry has order {got:?}, expected {expected:?}")]
    OrderMismatch {
        expected: (u32, u32),
        got: (u32, u32),
    },
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Gq(#[from] GqError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    W3,
    Q4,
    Qminus5,
    H3,
    H4,
}

impl FamilyTag {
    pub fn parse(text: &str) -> Option<FamilyTag> {
        match text {
            "W3" | "w3" => Some(FamilyTag::W3),
            "Q4" | "q4" => Some(FamilyTag::Q4),
            "Qminus5" | "qminus5" | "Q5minus" | "Qm5" | "qm5" => Some(FamilyTag::Qminus5),
            "H3" | "h3" => Some(FamilyTag::H3),
            "H4" | "h4" => Some(FamilyTag::H4),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyTag::W3 => "W3",
            FamilyTag::Q4 => "Q4",
            FamilyTag::Qminus5 => "Qminus5",
            FamilyTag::H3 => "H3",
            FamilyTag::H4 => "H4",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FamilyTag::W3 | FamilyTag::H3 => 4,
            FamilyTag::Q4 | FamilyTag::H4 => 5,
            FamilyTag::Qminus5 => 6,
        }
    }

    /// The order (s, t) of the family at parameter q.
    pub fn expected_order(&self, q: u64) -> (u64, u64) {
        match self {
            FamilyTag::W3 | FamilyTag::Q4 => (q, q),
            FamilyTag::Qminus5 => (q, q * q),
            FamilyTag::H3 => (q * q, q),
            FamilyTag::H4 => (q * q, q * q * q),
        }
    }

    pub fn expected_points(&self, q: u64) -> u64 {
        let (s, t) = self.expected_order(q);
        (1 + s) * (1 + s * t)
    }
}

pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut n = q;
            let mut f = 0;
            while n % p == 0 {
                n /= p;
                f += 1;
            }
            return (n == 1).then_some((p, f));
        }
        p += 1;
    }
    Some((q, 1))
}

// ---- the five forms, with deterministic coefficient choices ----

pub fn symplectic_form(q: u64) -> Result<FormSpec, ClassicalError> {
    let (p, f) = prime_power(q).ok_or(ClassicalError::NotPrimePower(q))?;
    let field = FiniteField::new(p, f).expect("prime power");
    let z = field.zero();
    let one = field.one();
    let m1 = one.neg();
    // kappa(x,y) = x1 y2 - x2 y1 + x3 y4 - x4 y3
    let gram = vec![
        vec![z.clone(), one.clone(), z.clone(), z.clone()],
        vec![m1.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), one.clone()],
        vec![z.clone(), z.clone(), m1, z.clone()],
    ];
    Ok(FormSpec::alternating(field, gram)?)
}

pub fn parabolic_form(q: u64) -> Result<FormSpec, ClassicalError> {
    let (p, f) = prime_power(q).ok_or(ClassicalError::NotPrimePower(q))?;
    let field = FiniteField::new(p, f).expect("prime power");
    let z = field.zero();
    let one = field.one();
    // Q(x) = x1 x2 + x3 x4 + x5^2
    let mut upper = vec![vec![z.clone(); 5]; 5];
    upper[0][1] = one.clone();
    upper[2][3] = one.clone();
    upper[4][4] = one;
    Ok(FormSpec::quadratic(field, upper)?)
}

pub fn elliptic_form(q: u64) -> Result<FormSpec, ClassicalError> {
    let (p, f) = prime_power(q).ok_or(ClassicalError::NotPrimePower(q))?;
    let field = FiniteField::new(p, f).expect("prime power");
    let (a, b) = irreducible_quadratic(&field);
    let z = field.zero();
    let one = field.one();
    // Q(x) = x1 x2 + x3 x4 + x5^2 + a x5 x6 + b x6^2
    let mut upper = vec![vec![z.clone(); 6]; 6];
    upper[0][1] = one.clone();
    upper[2][3] = one.clone();
    upper[4][4] = one;
    upper[4][5] = a;
    upper[5][5] = b;
    Ok(FormSpec::quadratic(field, upper)?)
}

/// The coefficients (a, b) with the smallest encodings such that
/// X^2 + aX + b is irreducible over the field.
fn irreducible_quadratic(field: &FiniteField) -> (FieldElement, FieldElement) {
    for a in field.elements() {
        for b in field.elements() {
            let has_root = field
                .elements()
                .any(|x| (&(&(&x * &x) + &(&a * &x)) + &b).is_zero());
            if !has_root {
                return (a, b);
            }
        }
    }
    unreachable!("irreducible quadratics exist over every finite field")
}

pub fn hermitian_form(q: u64, dim: usize) -> Result<FormSpec, ClassicalError> {
    let (p, f) = prime_power(q).ok_or(ClassicalError::NotPrimePower(q))?;
    let field = FiniteField::new(p, 2 * f).expect("prime power");
    let z = field.zero();
    let one = field.one();
    // H(x,y) = x1 y2^q + x2 y1^q + x3 y4^q + x4 y3^q (+ x5 y5^q)
    let mut gram = vec![vec![z.clone(); dim]; dim];
    gram[0][1] = one.clone();
    gram[1][0] = one.clone();
    gram[2][3] = one.clone();
    gram[3][2] = one.clone();
    if dim == 5 {
        gram[4][4] = one;
    }
    Ok(FormSpec::hermitian(field, q, gram)?)
}

pub fn family_form(family: FamilyTag, q: u64) -> Result<FormSpec, ClassicalError> {
    match family {
        FamilyTag::W3 => symplectic_form(q),
        FamilyTag::Q4 => parabolic_form(q),
        FamilyTag::Qminus5 => elliptic_form(q),
        FamilyTag::H3 => hermitian_form(q, 4),
        FamilyTag::H4 => hermitian_form(q, 5),
    }
}

/// A classical geometry together with its coordinate model.
#[derive(Debug)]
pub struct BuiltGeometry {
    pub family: FamilyTag,
    pub q: u64,
    pub gq: GeneralizedQuadrangle,
    pub form: FormSpec,
    pub points: Vec<ProjectivePoint>,
    pub warnings: Vec<String>,
    point_index: HashMap<Vec<u64>, u32>,
}

impl BuiltGeometry {
    /// Index of a projective point within the geometry, if isotropic.
    pub fn point_of(&self, pt: &ProjectivePoint) -> Option<u32> {
        self.point_index.get(&pt.sort_key()).copied()
    }

    /// Index of the standard basis point <e_{i+1}> (0-based i).
    pub fn basis_point(&self, i: usize) -> Result<u32, ClassicalError> {
        let field = self.form.field();
        let n = self.form.dim();
        assert!(i < n, "basis index in range");
        let mut coords = vec![field.zero(); n];
        coords[i] = field.one();
        let pt = ProjectivePoint::new(coords).expect("basis vector is nonzero");
        self.point_of(&pt)
            .ok_or(ClassicalError::BasisPointNotIsotropic { index: i + 1 })
    }

    /// The standard basis points that are isotropic, as (basis index,
    /// point index) pairs in basis order.
    pub fn canonical_basis_points(&self) -> Vec<(usize, u32)> {
        (0..self.form.dim())
            .filter_map(|i| self.basis_point(i).ok().map(|p| (i, p)))
            .collect()
    }

    pub fn to_geometry_file(&self) -> GeometryFile {
        let (s, t) = self.gq.order();
        GeometryFile {
            family: self.family.name().to_string(),
            q: self.q,
            order: [s, t],
            points: self
                .points
                .iter()
                .map(|p| p.coords().iter().map(|c| c.coeffs().to_vec()).collect())
                .collect(),
            lines: self.gq.lines().to_vec(),
        }
    }

    /// The symmetry generators about <e_1> provided by the family: the
    /// maps t_a for a in F (symplectic) or for trace-zero a (Hermitian).
    /// Q(4,q) and Q-(5,q) provide none.
    pub fn symmetry_generators_at_e1(&self) -> Result<Vec<LinearMap>, ClassicalError> {
        let field = self.form.field();
        let params: Vec<FieldElement> = match self.form.kind() {
            FormKind::Alternating => field.elements().collect(),
            FormKind::Hermitian => {
                let q = self.form.sub_q().expect("hermitian forms carry q");
                forms::trace_zero_elements(field, q)?
            }
            FormKind::Quadratic => Vec::new(),
        };
        let mut out = Vec::new();
        for a in params {
            out.push(forms::symmetry_generator_ta(&self.form, &a)?);
        }
        Ok(out)
    }
}

/// Enumerates all projective points of the form's space in canonical
/// (lexicographic) order.
fn projective_points(field: &FiniteField, n: usize) -> Vec<ProjectivePoint> {
    let order = field.order();
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let count = order.checked_pow(free as u32).expect("desk-scale space");
        for code in 0..count {
            let mut coords = vec![field.zero(); n];
            coords[lead] = field.one();
            let mut c = code;
            for slot in coords.iter_mut().skip(lead + 1) {
                *slot = field.from_encoding(c % order);
                c /= order;
            }
            out.push(ProjectivePoint::new(coords).expect("leading 1"));
        }
    }
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out
}

/// Builds the classical generalized quadrangle for the family at q and
/// verifies it against the expected order.
pub fn build(family: FamilyTag, q: u64, force: bool) -> Result<BuiltGeometry, ClassicalError> {
    if prime_power(q).is_none() {
        return Err(ClassicalError::NotPrimePower(q));
    }
    let expected_points = family.expected_points(q);
    if expected_points > SIZE_CAP && !force {
        return Err(ClassicalError::SizeRefusal {
            points: expected_points,
            cap: SIZE_CAP,
        });
    }
    let mut warnings = Vec::new();
    if family == FamilyTag::Q4 && q % 2 == 0 {
        warnings.push(
            "Q4 with even q builds a valid quadrangle, but the central-symmetry \
             statements verified by this toolkit are specific to odd q"
                .to_string(),
        );
    }
    let form = family_form(family, q)?;
    let field = form.field().clone();
    let n = form.dim();

    let mut points = Vec::new();
    for pt in projective_points(&field, n) {
        if form.is_isotropic(&pt)? {
            points.push(pt);
        }
    }
    let point_index: HashMap<Vec<u64>, u32> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.sort_key(), i as u32))
        .collect();

    // lines: close each orthogonal isotropic pair to the projective
    // points of the plane it spans
    let mut line_set: BTreeSet<Vec<u32>> = BTreeSet::new();
    for (i, x) in points.iter().enumerate() {
        for (j, y) in points.iter().enumerate().skip(i + 1) {
            if !form.orthogonal(x.coords(), y.coords())? {
                continue;
            }
            let mut line = Vec::with_capacity(field.order() as usize + 1);
            line.push(j as u32);
            for lambda in field.elements() {
                let combo: Vec<FieldElement> = x
                    .coords()
                    .iter()
                    .zip(y.coords())
                    .map(|(xc, yc)| xc + &(&lambda * yc))
                    .collect();
                let p = ProjectivePoint::new(combo).expect("x nonzero");
                let idx = point_index
                    .get(&p.sort_key())
                    .copied()
                    .expect("points of a totally isotropic plane are isotropic");
                line.push(idx);
            }
            line.sort_unstable();
            line.dedup();
            line_set.insert(line);
        }
    }

    let labels: Vec<String> = points
        .iter()
        .map(|p| {
            let parts: Vec<String> = p
                .coords()
                .iter()
                .map(|c| c.encoding().to_string())
                .collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let gq = verify_gq(labels, line_set.into_iter().collect())?;

    let (es, et) = family.expected_order(q);
    let expected = (es as u32, et as u32);
    if gq.order() != expected {
        return Err(ClassicalError::OrderMismatch {
            expected,
            got: gq.order(),
        });
    }

    Ok(BuiltGeometry {
        family,
        q,
        gq,
        form,
        points,
        warnings,
        point_index,
    })
}
