//! Dense integer polynomials with exact arbitrary-precision arithmetic,
//! plus the primitive-PRS gcd and rational helpers needed by the
//! divisor-certificate machinery.

use num::bigint::Sign;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use num::BigInt;

/// An integer polynomial in one variable, dense ascending coefficients,
/// no trailing zeros (canonical form).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl std::fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "q")?,
                1 => write!(f, "{a}q")?,
                _ if a.is_one() => write!(f, "q^{i}")?,
                _ => write!(f, "{a}q^{i}")?,
            }
        }
        Ok(())
    }
}

impl IntPoly {
    pub fn zero() -> IntPoly {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> IntPoly {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> IntPoly {
        let mut p = IntPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn x() -> IntPoly {
        IntPoly {
            coeffs: vec![BigInt::zero(), BigInt::one()],
        }
    }

    /// x^n with an integer coefficient.
    pub fn monomial(c: BigInt, n: usize) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = c;
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        let mut p = IntPoly {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - other.coeff(i));
        }
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact division; None when the divisor does not divide self over Z.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let dd = divisor.degree().unwrap();
        let mut rem = self.clone();
        let mut quo = vec![BigInt::zero(); self.coeffs.len().saturating_sub(dd)];
        let lead = divisor.leading();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                return None;
            }
            let (qc, r) = num::Integer::div_rem(&rem.leading(), &lead);
            if !r.is_zero() {
                return None;
            }
            let shift = dr - dd;
            quo[shift] = qc.clone();
            let term = divisor.mul(&IntPoly::monomial(qc, shift));
            rem = rem.sub(&term);
            if rem.is_zero() {
                break;
            }
        }
        let mut q = IntPoly { coeffs: quo };
        q.trim();
        Some(q)
    }

    /// Remainder of self by a monic divisor (exact over Z).
    pub fn rem_monic(&self, divisor: &IntPoly) -> IntPoly {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.degree().expect("nonzero divisor");
        let mut rem = self.clone();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let term = divisor.mul(&IntPoly::monomial(rem.leading(), dr - dd));
            rem = rem.sub(&term);
        }
        rem
    }

    /// Content: the nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num::Integer::gcd(&g, c);
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a / &c).collect(),
        }
    }

    /// Polynomial gcd via the primitive pseudo-remainder sequence; the
    /// result is primitive with positive leading coefficient (it equals
    /// the monic Q[x]-gcd up to that normalization).
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = pseudo_rem(&a, &b);
            a = b;
            b = if r.is_zero() {
                IntPoly::zero()
            } else {
                r.primitive()
            };
        }
        a.primitive()
    }
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b over Z.
fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let da = a.degree().expect("nonzero a");
    let db = b.degree().expect("nonzero b");
    assert!(da >= db);
    let lead = b.leading();
    let mut rem = a.scale(&lead.pow((da - db + 1) as u32));
    while let Some(dr) = rem.degree() {
        if dr < db {
            break;
        }
        let qc = rem.leading() / &lead;
        let term = b.mul(&IntPoly::monomial(qc, dr - db));
        rem = rem.sub(&term);
    }
    rem
}

/// Remainder of num/den over Q, returned only when all remainder
/// coefficients are integers.
pub fn rational_rem(num: &IntPoly, den: &IntPoly) -> Option<IntPoly> {
    let dd = den.degree()?;
    let lead = BigRational::from(den.leading());
    let mut rem: Vec<BigRational> = num
        .coeffs()
        .iter()
        .cloned()
        .map(BigRational::from)
        .collect();
    while rem.len() > dd {
        let top = rem.last().unwrap().clone();
        if !top.is_zero() {
            let factor = &top / &lead;
            let shift = rem.len() - 1 - dd;
            for i in 0..=dd {
                let delta = &factor * BigRational::from(den.coeff(i));
                rem[shift + i] -= delta;
            }
        }
        rem.pop();
    }
    while rem.last().is_some_and(|c| c.is_zero()) {
        rem.pop();
    }
    let mut coeffs = Vec::with_capacity(rem.len());
    for c in rem {
        if !c.denom().is_one() {
            return None;
        }
        coeffs.push(c.numer().clone());
    }
    let mut p = IntPoly { coeffs };
    p.trim();
    Some(p)
}

/// Solves the square rational linear system M y = rhs by Gaussian
/// elimination; None when the matrix is singular.
pub fn solve_rational(mat: &[Vec<BigInt>], rhs: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = mat.len();
    assert!(mat.iter().all(|r| r.len() == n) && rhs.len() == n);
    let mut a: Vec<Vec<BigRational>> = mat
        .iter()
        .map(|r| r.iter().cloned().map(BigRational::from).collect())
        .collect();
    let mut b: Vec<BigRational> = rhs.iter().cloned().map(BigRational::from).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        b[col] *= &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c2 in col..n {
                    let delta = &factor * &a[col][c2];
                    a[r][c2] -= delta;
                }
                let delta = &factor * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some(b)
}

/// Positive sign helper for BigInt construction in tests and data.
pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// b^e for BigInt base and u32 exponent.
pub fn big_pow(b: &BigInt, e: u32) -> BigInt {
    b.pow(e)
}

/// The p-adic valuation and p-part of n (n nonzero).
pub fn p_part(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    assert!(!n.is_zero());
    let mut m = n.abs();
    let mut k = 0u32;
    loop {
        let (q, r) = num::Integer::div_rem(&m, p);
        if r.is_zero() {
            m = q;
            k += 1;
        } else {
            break;
        }
    }
    (k, big_pow(p, k))
}

/// Value sign normalization for reports.
pub fn sign_of(n: &BigInt) -> Sign {
    n.sign()
}
