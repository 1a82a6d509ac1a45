//! Feasible-pair machinery: decompositions of v = (1+s)(1+st), the
//! intrinsic quadrangle-parameter checks, and the full per-candidate
//! constraint battery used by the case scans.

use num::traits::{One, Zero};
use num::{BigInt, Integer};
use serde::Serialize;

use crate::formula::divisors_of_factored;
use crate::poly::p_part;

/// All (s, t) with s, t >= 2 and (1+s)(1+st) = v, ascending in s.
pub fn decompositions(v: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut s = 2u64;
    while (1 + s) * (1 + 2 * s) <= v {
        if v % (1 + s) == 0 {
            let rest = v / (1 + s) - 1;
            if rest % s == 0 {
                let t = rest / s;
                if t >= 2 {
                    out.push((s, t));
                }
            }
        }
        s += 1;
    }
    out
}

/// Intrinsic feasibility for a thick quadrangle order: the inequalities
/// s <= t^2 and t <= s^2, and s + t | st(t+1).
pub fn intrinsic_ok(s: u64, t: u64) -> bool {
    let (s, t) = (s as u128, t as u128);
    s <= t * t && t <= s * s && (s * t * (t + 1)) % (s + t) == 0
}

/// Decompositions surviving the intrinsic checks.
pub fn feasible_decompositions(v: u64) -> Vec<(u64, u64)> {
    decompositions(v)
        .into_iter()
        .filter(|&(s, t)| intrinsic_ok(s, t))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
}

/// The per-candidate evaluation record. Checks run in a fixed order and
/// stop at the first failure; survivors carry the full pass list.
#[derive(Debug, Clone, Serialize)]
pub struct CandidateTrace {
    pub s: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    pub checks: Vec<CheckOutcome>,
    pub survived: bool,
}

/// A surviving pair with its trace.
#[derive(Debug, Clone, Serialize)]
pub struct FeasiblePair {
    pub s: String,
    pub t: String,
    pub trace: CandidateTrace,
}

/// Constraint inputs for one scanned q in a case.
pub struct ScanContext {
    pub q: u64,
    /// Defining characteristic (the prime of q).
    pub r0: u64,
    /// |G_p| as an exact integer.
    pub gp_value: BigInt,
    /// Lower-bound exponent: requires (1+s)^den > q^num.
    pub beta: (u32, u32),
}

/// Candidate values of s: divisors of c(q) whose r0-part equals the
/// r0-part of v - 1. The factorization of c(q) is assembled from the
/// constant factors of c and the power of q it carries.
pub fn candidate_s_values(
    c_constant_factors: &[(u64, u32)],
    c_q_exponent: u32,
    r0: u64,
    f_exp: u32,
    v_minus_1: &BigInt,
) -> Vec<BigInt> {
    let mut factors: Vec<(u64, u32)> = c_constant_factors.to_vec();
    let q_contrib = c_q_exponent * f_exp;
    if q_contrib > 0 {
        match factors.iter_mut().find(|(p, _)| *p == r0) {
            Some((_, e)) => *e += q_contrib,
            None => factors.push((r0, q_contrib)),
        }
    }
    factors.sort_unstable();
    let (e0, r0_part) = p_part(v_minus_1, &BigInt::from(r0));
    let available = factors
        .iter()
        .find(|(p, _)| *p == r0)
        .map_or(0, |&(_, e)| e);
    if e0 > available {
        return Vec::new();
    }
    let rest: Vec<(u64, u32)> = factors.into_iter().filter(|(p, _)| *p != r0).collect();
    let mut out: Vec<BigInt> = divisors_of_factored(&rest)
        .into_iter()
        .map(|d| d * &r0_part)
        .collect();
    out.sort();
    out
}

/// Runs the full constraint battery for one candidate s against v.
pub fn check_candidate(v: &BigInt, s: &BigInt, ctx: &ScanContext) -> CandidateTrace {
    let mut checks = Vec::new();
    let mut t_str = None;
    let push = |checks: &mut Vec<CheckOutcome>, name: &'static str, pass: bool| -> bool {
        checks.push(CheckOutcome { name, pass });
        pass
    };

    let survived = 'battery: {
        let v_minus_1 = v - BigInt::one();
        if !push(&mut checks, "s-divides-gp", (&ctx.gp_value % s).is_zero()) {
            break 'battery false;
        }
        if !push(&mut checks, "s-coprime-v", s.gcd(v).is_one()) {
            break 'battery false;
        }
        if !push(
            &mut checks,
            "s-divides-v-minus-1",
            (&v_minus_1 % s).is_zero(),
        ) {
            break 'battery false;
        }
        let (num, den) = ctx.beta;
        let s1 = s + BigInt::one();
        let beta_ok = s1.pow(den) > BigInt::from(ctx.q).pow(num);
        if !push(&mut checks, "beta-bound", beta_ok) {
            break 'battery false;
        }
        // t from v = (1+s)(1+st)
        let (q1, r1) = v.div_rem(&s1);
        if !push(&mut checks, "one-plus-s-divides-v", r1.is_zero()) {
            break 'battery false;
        }
        let (t, r2) = (q1 - BigInt::one()).div_rem(s);
        if !push(&mut checks, "t-integral", r2.is_zero()) {
            break 'battery false;
        }
        t_str = Some(t.to_string());
        if !push(&mut checks, "t-thick", t >= BigInt::from(2)) {
            break 'battery false;
        }
        if !push(
            &mut checks,
            "r-divides-t",
            (&t % BigInt::from(ctx.r0)).is_zero(),
        ) {
            break 'battery false;
        }
        let higman = s <= &(&t * &t) && t <= s * s;
        if !push(&mut checks, "higman", higman) {
            break 'battery false;
        }
        let sum_div = ((s * &t * (&t + BigInt::one())) % (s + &t)).is_zero();
        if !push(&mut checks, "sum-divides", sum_div) {
            break 'battery false;
        }
        // the exact-integer point-count bounds (1+s)^4 > v, (1+s)^5 < v^2
        let bounds = s1.pow(4) > *v && s1.pow(5) < v * v;
        push(&mut checks, "point-count-bounds", bounds)
    };

    CandidateTrace {
        s: s.to_string(),
        t: t_str,
        checks,
        survived,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::big;

    #[test]
    fn decompositions_of_40() {
        // v = 40 = (1+3)(1+9): the W(3,3) parameters survive
        assert_eq!(decompositions(40), vec![(3, 3)]);
        assert_eq!(feasible_decompositions(40), vec![(3, 3)]);
    }

    #[test]
    fn decomposition_requires_thickness() {
        // 1600 = (1+3)(1+3*133) is a decomposition but not feasible
        assert_eq!(decompositions(1600), vec![(3, 133)]);
        assert!(feasible_decompositions(1600).is_empty());
    }

    #[test]
    fn brute_force_equivalence_sample() {
        for v in 15u64..=20_000 {
            let direct: Vec<(u64, u64)> = (2..)
                .take_while(|&s| (1 + s) * (1 + 2 * s) <= v)
                .flat_map(|s| {
                    (2..)
                        .map(move |t| (s, t))
                        .take_while(move |&(s, t)| (1 + s) * (1 + s * t) <= v)
                })
                .filter(|&(s, t)| (1 + s) * (1 + s * t) == v)
                .collect();
            assert_eq!(decompositions(v), direct, "v = {v}");
        }
    }

    #[test]
    fn candidate_enumeration_g2() {
        // G2 at q = 3: c(q) = 5q, v - 1 = q * Phi5(q) with Phi5(3) = 121
        let v_minus_1 = big(3 * 121);
        let cands = candidate_s_values(&[(5, 1)], 1, 3, 1, &v_minus_1);
        assert_eq!(cands, vec![big(3), big(15)]);
    }

    #[test]
    fn candidate_enumeration_merges_characteristic() {
        // q = 5: c(q) = 5q = 25; the 5-part of v-1 is 5, so s = 5 only
        let v_minus_1 = big(5 * 781);
        let cands = candidate_s_values(&[(5, 1)], 1, 5, 1, &v_minus_1);
        assert_eq!(cands, vec![big(5)]);
    }
}
