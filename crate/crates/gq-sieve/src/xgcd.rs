//! Divisor certificates u(q)(f(q)-1) + v(q)h(q) = c(q): a Bezout-style
//! identity over Z[x] whose right side c bounds the divisors shared by
//! f(q)-1 and h(q). The certificate computed here has minimal positive
//! content among all integer certificates of gcd degree.

use num::traits::{One, Signed, Zero};
use num::{BigInt, Integer};
use thiserror::Error;

use crate::poly::{solve_rational, IntPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum XgcdError {
    #[error("inputs must be nonzero")]
    ZeroInput,
    #[error("h must be monic for certificate computation")]
    NotMonic,
    #[error("linear system for the certificate is singular")]
    Singular,
}

/// A verified identity u * (f - 1) + v * h = c over Z[x].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub u: IntPoly,
    pub v: IntPoly,
    pub c: IntPoly,
    /// The primitive gcd of f - 1 and h; c = content * g.
    pub g: IntPoly,
    /// The minimal positive integer multiplier.
    pub content: BigInt,
}

impl Certificate {
    /// Re-checks the polynomial identity.
    pub fn verify(&self, f: &IntPoly, h: &IntPoly) -> bool {
        let fm1 = f.sub(&IntPoly::one());
        self.u.mul(&fm1).add(&self.v.mul(h)) == self.c
            && self.c == self.g.scale(&self.content)
            && self.c.degree() == fm1.gcd(h).degree()
    }
}

/// Computes the content-minimal certificate for f - 1 and h (h monic).
///
/// With g = gcd(f-1, h) monic, F = (f-1)/g and H = h/g, a certificate
/// with target m*g and deg u < deg H exists iff u = m*y where y is the
/// unique rational solution of (u*F mod H) = 1; reducing any integral
/// certificate mod the monic H preserves integrality, so the minimal m
/// is exactly the least common denominator of y.
pub fn poly_xgcd_cert(f: &IntPoly, h: &IntPoly) -> Result<Certificate, XgcdError> {
    let fm1 = f.sub(&IntPoly::one());
    if fm1.is_zero() || h.is_zero() {
        return Err(XgcdError::ZeroInput);
    }
    if !h.is_monic() {
        return Err(XgcdError::NotMonic);
    }
    let g = fm1.gcd(h);
    debug_assert!(g.is_monic(), "divisors of a monic polynomial are monic");
    let big_f = fm1.div_exact(&g).expect("gcd divides");
    let big_h = h.div_exact(&g).expect("gcd divides");
    let dim = big_h.degree().expect("h nonzero");

    if dim == 0 {
        // h = g: take u = 0, v = 1, c = h
        let cert = Certificate {
            u: IntPoly::zero(),
            v: IntPoly::one(),
            c: g.clone(),
            g,
            content: BigInt::one(),
        };
        debug_assert!(cert.verify(f, h));
        return Ok(cert);
    }

    // multiplication-by-F matrix on Z[x]/(H): column j = x^j * F mod H
    let mut mat = vec![vec![BigInt::zero(); dim]; dim];
    for j in 0..dim {
        let col = IntPoly::monomial(BigInt::one(), j)
            .mul(&big_f)
            .rem_monic(&big_h);
        for (i, row) in mat.iter_mut().enumerate() {
            row[j] = col.coeff(i);
        }
    }
    let mut rhs = vec![BigInt::zero(); dim];
    rhs[0] = BigInt::one();
    let y = solve_rational(&mat, &rhs).ok_or(XgcdError::Singular)?;

    let mut content = BigInt::one();
    for c in &y {
        content = content.lcm(c.denom());
    }
    content = content.abs();

    let u_coeffs: Vec<BigInt> = y
        .iter()
        .map(|c| {
            let scaled = c * num::BigRational::from(content.clone());
            debug_assert!(scaled.denom().is_one());
            scaled.numer().clone()
        })
        .collect();
    let mut u = IntPoly::zero();
    for (i, c) in u_coeffs.into_iter().enumerate() {
        u = u.add(&IntPoly::monomial(c, i));
    }
    let v = IntPoly::constant(content.clone())
        .sub(&u.mul(&big_f))
        .div_exact(&big_h)
        .expect("H is monic and divides the residual");
    let c = g.scale(&content);
    let cert = Certificate {
        u,
        v,
        c,
        g,
        content,
    };
    debug_assert!(cert.verify(f, h));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::PhiProduct;
    use crate::poly::big;

    fn cert_for(v_spec: &str, gp_spec: &str) -> Certificate {
        let f = PhiProduct::parse(v_spec).unwrap().numerator_poly();
        let h = PhiProduct::parse(gp_spec).unwrap().numerator_poly();
        let cert = poly_xgcd_cert(&f, &h).unwrap();
        assert!(cert.verify(&f, &h));
        cert
    }

    #[test]
    fn trivial_case_f_minus_one_equals_h() {
        // f - 1 = h: certificate is c = h with the (u, v) = (0, 1) split
        let h = IntPoly::from_i64(&[0, 2, 0, 0, 1]);
        let f = h.add(&IntPoly::one());
        let cert = poly_xgcd_cert(&f, &h).unwrap();
        assert_eq!(cert.c, h);
        assert_eq!(cert.u, IntPoly::zero());
        assert_eq!(cert.v, IntPoly::one());
    }

    #[test]
    fn numeric_divisibility_consequence() {
        // any common divisor of f(q)-1 and h(q) divides c(q)
        let f = PhiProduct::parse("Phi2*Phi3*Phi6")
            .unwrap()
            .numerator_poly();
        let h = PhiProduct::parse("q^6*Phi1^2*Phi2")
            .unwrap()
            .numerator_poly();
        let cert = poly_xgcd_cert(&f, &h).unwrap();
        for q in [2i64, 3, 5, 7, 9, 11, 13, 25, 49] {
            let fv = f.eval(&big(q)) - 1;
            let hv = h.eval(&big(q));
            let g = num::Integer::gcd(&fv, &hv);
            let cv = cert.c.eval(&big(q));
            assert!(cv.clone() % g == big(0), "q={q}");
        }
    }

    #[test]
    fn gcd_degree_matches() {
        let cert = cert_for("Phi2*Phi3*Phi6", "q^6*Phi1^2*Phi2");
        assert_eq!(cert.c.degree(), Some(1));
    }
}
