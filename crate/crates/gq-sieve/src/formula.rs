//! Group-order and point-count formulas: an optional rational prefactor
//! 1/d0 with d0 in {1, gcd(2,q-1), gcd(3,q-1), gcd(3,q+1), gcd(4,q+1)},
//! an integer constant (kept in factored form), a power of q, and a
//! multiset of cyclotomic factors.

use num::traits::{One, Zero};
use num::{BigInt, Integer};
use thiserror::Error;

use crate::cyclotomic::{cyclotomic, phi_eval};
use crate::poly::IntPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("cannot parse formula term `{0}`")]
    BadTerm(String),
    #[error("formula value at q = {q} is not divisible by its prefactor")]
    NonIntegral { q: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prefactor {
    One,
    /// gcd(2, q-1)
    D,
    /// gcd(3, q-1)
    EPlus,
    /// gcd(3, q+1)
    EMinus,
    /// gcd(4, q+1)
    FMinus,
}

impl Prefactor {
    pub fn value(&self, q: u64) -> u64 {
        let q = q as i64;
        let g = match self {
            Prefactor::One => return 1,
            Prefactor::D => (2i64, q - 1),
            Prefactor::EPlus => (3, q - 1),
            Prefactor::EMinus => (3, q + 1),
            Prefactor::FMinus => (4, q + 1),
        };
        g.0.gcd(&g.1) as u64
    }
}

/// constant * q^N * prod Phi_i(q)^{m_i}, all divided by the prefactor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiProduct {
    pub prefactor: Prefactor,
    /// Prime factorization of the integer constant.
    pub constant_factors: Vec<(u64, u32)>,
    pub q_exponent: u32,
    /// (cyclotomic index, multiplicity), ascending by index.
    pub phi_factors: Vec<(u32, u32)>,
}

impl PhiProduct {
    pub fn one() -> PhiProduct {
        PhiProduct {
            prefactor: Prefactor::One,
            constant_factors: Vec::new(),
            q_exponent: 0,
            phi_factors: Vec::new(),
        }
    }

    pub fn constant(&self) -> BigInt {
        let mut c = BigInt::one();
        for &(p, e) in &self.constant_factors {
            c *= BigInt::from(p).pow(e);
        }
        c
    }

    /// The numerator polynomial constant * x^N * prod Phi_i^{m_i}
    /// (prefactor not included).
    pub fn numerator_poly(&self) -> IntPoly {
        let mut p = IntPoly::monomial(self.constant(), self.q_exponent as usize);
        for &(i, m) in &self.phi_factors {
            let phi = cyclotomic(i);
            for _ in 0..m {
                p = p.mul(&phi);
            }
        }
        p
    }

    /// Exact value at q; errors if the prefactor does not divide it.
    pub fn eval(&self, q: u64) -> Result<BigInt, FormulaError> {
        let qq = BigInt::from(q);
        let mut value = self.constant() * qq.pow(self.q_exponent);
        for &(i, m) in &self.phi_factors {
            value *= phi_eval(i, &qq).pow(m);
        }
        let d0 = BigInt::from(self.prefactor.value(q));
        let (quo, rem) = value.div_rem(&d0);
        if !rem.is_zero() {
            return Err(FormulaError::NonIntegral { q });
        }
        Ok(quo)
    }

    /// Parses the `*`-separated grammar: an optional `1/d`, `1/e+`,
    /// `1/e-` or `1/f-` prefactor, integer factors `A` or `A^M`,
    /// a `q` or `q^N` power, and cyclotomic factors `PhiI` or `PhiI^M`.
    pub fn parse(text: &str) -> Result<PhiProduct, FormulaError> {
        let mut out = PhiProduct::one();
        for term in text.split('*').map(str::trim) {
            if term.is_empty() {
                return Err(FormulaError::BadTerm(term.to_string()));
            }
            if let Some(pf) = match term {
                "1/d" => Some(Prefactor::D),
                "1/e+" => Some(Prefactor::EPlus),
                "1/e-" => Some(Prefactor::EMinus),
                "1/f-" => Some(Prefactor::FMinus),
                _ => None,
            } {
                out.prefactor = pf;
                continue;
            }
            let (base, exp) = match term.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<u32>()
                        .map_err(|_| FormulaError::BadTerm(term.to_string()))?,
                ),
                None => (term, 1),
            };
            if base == "q" {
                out.q_exponent += exp;
            } else if let Some(idx) = base.strip_prefix("Phi") {
                let i: u32 = idx
                    .parse()
                    .map_err(|_| FormulaError::BadTerm(term.to_string()))?;
                match out.phi_factors.iter_mut().find(|(j, _)| *j == i) {
                    Some((_, m)) => *m += exp,
                    None => out.phi_factors.push((i, exp)),
                }
            } else {
                let n: u64 = base
                    .parse()
                    .map_err(|_| FormulaError::BadTerm(term.to_string()))?;
                if n == 0 {
                    return Err(FormulaError::BadTerm(term.to_string()));
                }
                for (p, e) in factorize(n) {
                    match out.constant_factors.iter_mut().find(|(r, _)| *r == p) {
                        Some((_, m)) => *m += e * exp,
                        None => out.constant_factors.push((p, e * exp)),
                    }
                }
            }
        }
        out.phi_factors.sort_unstable();
        out.constant_factors.sort_unstable();
        Ok(out)
    }
}

/// Trial-division factorization; the case data constants are small.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All divisors of the factored integer, ascending.
pub fn divisors_of_factored(factors: &[(u64, u32)]) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for &(p, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        let bp = BigInt::from(p);
        for d in &out {
            let mut power = BigInt::one();
            for _ in 0..=e {
                next.push(d * &power);
                power *= &bp;
            }
        }
        out = next;
    }
    out.sort();
    out
}
