//! Exact arithmetic in GF(p^f), including the Frobenius conjugation
//! x -> x^q used by Hermitian forms on GF(q^2).
//!
//! Fields are immutable after construction and cheap to clone (shared
//! interior). Elements are dense coefficient vectors over GF(p) reduced
//! against a deterministic irreducible modulus, so runs are reproducible.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field order {0} overflows the supported element range")]
    OrderTooLarge(u64),
    #[error("operands belong to different fields")]
    MismatchedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field order {order} is not q^2 for q = {q}")]
    NotQuadraticExtension { order: u64, q: u64 },
}

#[derive(Debug, PartialEq, Eq)]
struct FieldData {
    p: u64,
    f: u32,
    /// Monic irreducible modulus, coefficients c_0..c_f with c_f = 1.
    modulus: Vec<u64>,
}

/// The field GF(p^f) with a fixed modulus choice.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldData>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.f)
    }
}

/// An element of a [`FiniteField`], stored as f coefficients over GF(p).
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FiniteField,
    coeffs: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---- dense polynomial helpers over GF(p), little-endian coefficients ----

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    // m is monic
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for i in 0..=dm {
                let sub = (lead * m[i]) % p;
                let idx = shift + i;
                a[idx] = (a[idx] + p - sub) % p;
            }
        }
        a.pop();
    }
    trim(&mut a);
    a
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(prod, m, p)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = poly_rem(base.to_vec(), m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul_mod(&result, &b, m, p);
        }
        b = poly_mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // make b monic before reducing
        let lead = *b.last().unwrap();
        if lead != 1 {
            let inv = mod_inverse(lead, p);
            for c in b.iter_mut() {
                *c = (*c * inv) % p;
            }
        }
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p prime, a != 0 mod p
    let mut t = (0i128, 1i128);
    let mut r = (p as i128, (a % p) as i128);
    while r.1 != 0 {
        let q = r.0 / r.1;
        t = (t.1, t.0 - q * t.1);
        r = (r.1, r.0 - q * r.1);
    }
    (t.0.rem_euclid(p as i128)) as u64
}

/// True iff the monic polynomial m of degree f is irreducible over GF(p).
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let f = (m.len() - 1) as u32;
    if f == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^(p^f) == x mod m
    let mut xp = x.clone();
    for _ in 0..f {
        xp = poly_powmod(&xp, p, m, p);
    }
    let mut diff = xp.clone();
    sub_poly(&mut diff, &x, p);
    if !diff.is_empty() {
        return false;
    }
    // gcd(x^(p^(f/l)) - x, m) == 1 for each prime l | f
    let mut n = f;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            primes.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    for l in primes {
        let e = f / l;
        let mut xq = x.clone();
        for _ in 0..e {
            xq = poly_powmod(&xq, p, m, p);
        }
        sub_poly(&mut xq, &x, p);
        let g = poly_gcd(m.to_vec(), xq, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn sub_poly(a: &mut Vec<u64>, b: &[u64], p: u64) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (i, &bi) in b.iter().enumerate() {
        a[i] = (a[i] + p - bi) % p;
    }
    trim(a);
}

impl FiniteField {
    /// Builds GF(p^f). The modulus is the smallest monic irreducible
    /// polynomial of degree f in the base-p encoding of its coefficient
    /// vector, which makes construction deterministic across runs.
    pub fn new(p: u64, f: u32) -> Result<FiniteField, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if f == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = p
            .checked_pow(f)
            .ok_or(FieldError::OrderTooLarge(u64::MAX))?;
        if order > (1 << 40) {
            return Err(FieldError::OrderTooLarge(order));
        }
        let modulus = Self::find_modulus(p, f);
        Ok(FiniteField(Arc::new(FieldData { p, f, modulus })))
    }

    fn find_modulus(p: u64, f: u32) -> Vec<u64> {
        // enumerate lower coefficients (c_0, .., c_{f-1}) by ascending
        // base-p encoding; the first irreducible wins
        let count = p.pow(f);
        for enc in 0..count {
            let mut m = Vec::with_capacity(f as usize + 1);
            let mut e = enc;
            for _ in 0..f {
                m.push(e % p);
                e /= p;
            }
            m.push(1);
            if is_irreducible(&m, p) {
                return m;
            }
        }
        unreachable!("an irreducible polynomial of degree {f} exists over GF({p})")
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.f
    }

    pub fn order(&self) -> u64 {
        self.0.p.pow(self.0.f)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: vec![0; self.0.f as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_encoding(1)
    }

    /// The element whose base-p coefficient encoding is `enc`.
    pub fn from_encoding(&self, enc: u64) -> FieldElement {
        assert!(enc < self.order(), "encoding out of range");
        let mut coeffs = Vec::with_capacity(self.0.f as usize);
        let mut e = enc;
        for _ in 0..self.0.f {
            coeffs.push(e % self.0.p);
            e /= self.0.p;
        }
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    /// Embeds an integer via reduction mod p (constant polynomial).
    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.0.p as i64;
        let c = n.rem_euclid(p) as u64;
        let mut coeffs = vec![0; self.0.f as usize];
        coeffs[0] = c;
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    pub fn element(&self, coeffs: Vec<u64>) -> FieldElement {
        assert_eq!(coeffs.len(), self.0.f as usize, "coefficient vector length");
        let coeffs = coeffs.into_iter().map(|c| c % self.0.p).collect();
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    /// All field elements in ascending encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |e| self.from_encoding(e))
    }

    /// The generator x of the polynomial basis (equals 0 for f = 1 only
    /// in the degenerate sense; callers use it for extension fields).
    pub fn generator(&self) -> FieldElement {
        if self.0.f == 1 {
            self.from_int(1)
        } else {
            self.from_encoding(self.0.p)
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Base-p encoding of the coefficient vector; defines the canonical
    /// element order used for deterministic point enumeration.
    pub fn encoding(&self) -> u64 {
        let p = self.field.0.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    fn check_same_field(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MismatchedFields)
        }
    }

    pub fn arith(&self, other: &FieldElement, op: BinOp) -> Result<FieldElement, FieldError> {
        self.check_same_field(other)?;
        match op {
            BinOp::Add => Ok(self.add_raw(other)),
            BinOp::Sub => Ok(self.sub_raw(other)),
            BinOp::Mul => Ok(self.mul_raw(other)),
            BinOp::Div => {
                let inv = other.inverse()?;
                Ok(self.mul_raw(&inv))
            }
        }
    }

    fn add_raw(&self, other: &FieldElement) -> FieldElement {
        let p = self.field.0.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn sub_raw(&self, other: &FieldElement) -> FieldElement {
        let p = self.field.0.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn mul_raw(&self, other: &FieldElement) -> FieldElement {
        let data = &self.field.0;
        let mut a = self.coeffs.clone();
        let mut b = other.coeffs.clone();
        trim(&mut a);
        trim(&mut b);
        let prod = if a.is_empty() || b.is_empty() {
            Vec::new()
        } else {
            poly_mul_mod(&a, &b, &data.modulus, data.p)
        };
        let mut coeffs = prod;
        coeffs.resize(data.f as usize, 0);
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> FieldElement {
        let p = self.field.0.p;
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn inverse(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // x^(p^f - 2); the unit group has order p^f - 1
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        let data = &self.field.0;
        let mut base = self.coeffs.clone();
        trim(&mut base);
        let out = poly_powmod(&base, e, &data.modulus, data.p);
        let mut coeffs = out;
        coeffs.resize(data.f as usize, 0);
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }
}

/// The conjugation x -> x^q on a field of order q^2. It is an involutive
/// automorphism fixing exactly the GF(q)-subfield.
pub fn conj_q(x: &FieldElement, q: u64) -> Result<FieldElement, FieldError> {
    let order = x.field().order();
    if q.checked_mul(q) != Some(order) {
        return Err(FieldError::NotQuadraticExtension { order, q });
    }
    Ok(x.pow(q))
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}#{}", self.field, self.encoding())
    }
}

macro_rules! bin_op_impl {
    ($trait:ident, $method:ident, $op:expr) => {
        impl std::ops::$trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.arith(rhs, $op).expect("field element operands")
            }
        }
    };
}
bin_op_impl!(Add, add, BinOp::Add);
bin_op_impl!(Sub, sub, BinOp::Sub);
bin_op_impl!(Mul, mul, BinOp::Mul);
