//! Unit groups of the quadratic orders F_q[x][s] attached to a form.
//!
//! Here s generates the order belonging to u^2 + b*uv + c*v^2, meaning
//! s^2 = b*s - c, and the norm of u + v*s is exactly the form value N(u, v).
//! The element is a unit of the order exactly when N(u, v) is a nonzero
//! constant. Which units exist is governed by the case of the form:
//!
//! * imaginary or inseparable: constants only;
//! * split with distinct roots: two independent constant factors;
//! * split with a double root r: constants times the unipotent family
//!   1 + w*(s - r), w ranging over F_q[x];
//! * real: constants times the powers of a fundamental unit, found here by
//!   continued fractions.
//!
//! In the real case the expansion of a root of the form closes a period, and
//! the convergent matrix of one full period fixes that root; reading the
//! matrix off in the basis {1, s} yields a unit whose norm is +-1 (it equals
//! the matrix determinant). The period is detected on exact states, so the
//! result is the fundamental choice, not a proper power.
//!
//! [`pell_fundamental`] specializes to u^2 - D*v^2 = 1 in odd characteristic
//! and post-processes the fundamental unit so the norm is exactly 1, either
//! by a constant twist (when the norm defect is a square) or by squaring.
//!
//! Returned pairs are canonicalized: among all constant multiples of the
//! unit and of its conjugate, the representative with the smallest (u, v) in
//! the degree-then-coefficients order is picked, which makes outputs
//! reproducible across runs.

use crate::cfrac::CfExpansion;
use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::poly::Poly;
use crate::quadring::{CaseKind, QuadContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitGroupDescription {
    /// Imaginary or inseparable: units are the constants F_q*.
    ConstantsOnly,
    /// Split with distinct roots: units are pairs of constants.
    SplitConstants,
    /// Split with a double root: constants times 1 + w*(s - root).
    UnipotentFamily { root: Poly },
    /// Real: constants times powers of the generator u + v*s.
    FundamentalUnit { u: Poly, v: Poly, norm: Fq },
}

/// Fundamental unit of a real quadratic order, in the coordinates of the
/// monic form the context was built from.
pub fn fundamental_unit(ctx: &QuadContext, max_steps: usize) -> Result<(Poly, Poly)> {
    if !ctx.scale().is_one() {
        return Err(Error::invalid("fundamental units need a monic form"));
    }
    if !ctx.is_real() {
        return Err(Error::invalid("fundamental units exist only for real forms"));
    }
    let (u_n, v_n) = if ctx.field().characteristic_two() {
        unit_char2(ctx, max_steps)?
    } else {
        unit_odd(ctx, max_steps)?
    };
    let (u, v) = ctx
        .from_normalized(&u_n, &v_n)
        .expect("a monic scale always divides");
    Ok(canonical_associate(ctx, &u, &v))
}

/// Structure of the unit group for any case of the form.
pub fn unit_group_description(
    ctx: &QuadContext,
    max_steps: usize,
) -> Result<UnitGroupDescription> {
    match ctx.case() {
        CaseKind::Imaginary | CaseKind::Inseparable => Ok(UnitGroupDescription::ConstantsOnly),
        CaseKind::RationalSplit { root } => {
            if &ctx.other_root(root) == root {
                Ok(UnitGroupDescription::UnipotentFamily { root: ctx.root_to_monic(root) })
            } else {
                Ok(UnitGroupDescription::SplitConstants)
            }
        }
        CaseKind::Real => {
            let (u, v) = fundamental_unit(ctx, max_steps)?;
            let (un, vn) = ctx.to_normalized(&u, &v);
            let norm = ctx
                .norm(&un, &vn)
                .constant_value()
                .ok_or_else(|| Error::internal("unit with nonconstant norm"))?;
            Ok(UnitGroupDescription::FundamentalUnit { u, v, norm })
        }
    }
}

/// Least nontrivial solution of u^2 - D*v^2 = 1 over F_q[x], odd q.
pub fn pell_fundamental(cap_d: &Poly, max_steps: usize) -> Result<(Poly, Poly)> {
    let f = cap_d.field().clone();
    if f.characteristic_two() {
        return Err(Error::Unsupported(
            "u^2 - Dv^2 = (u - sqrt(D)v)^2 in characteristic 2; no Pell theory there".into(),
        ));
    }
    let ctx = QuadContext::from_monic(&Poly::zero(&f), &-cap_d)?;
    match ctx.case() {
        CaseKind::Real => {}
        CaseKind::RationalSplit { .. } => {
            return Err(Error::Unsupported(
                "D is a perfect square; only constant solutions exist".into(),
            ));
        }
        _ => {
            return Err(Error::Unsupported(
                "D is imaginary; only the trivial solutions u = +-1, v = 0 exist".into(),
            ));
        }
    }
    // b = 0 here, so normalized and input coordinates agree.
    let (u, v) = unit_odd(&ctx, max_steps)?;
    let alpha = ctx
        .norm(&u, &v)
        .constant_value()
        .ok_or_else(|| Error::internal("unit with nonconstant norm"))?;
    let (u, v) = if alpha == f.one() {
        (u, v)
    } else if let Some(root) = f.sqrt(f.inv(alpha)?) {
        // A constant twist fixes the norm without growing degrees.
        (u.scale(root), v.scale(root))
    } else {
        // Square the unit and cancel the defect.
        let (u2, v2) = ctx.mul_pair((&u, &v), (&u, &v));
        let ia = f.inv(alpha)?;
        (u2.scale(ia), v2.scale(ia))
    };
    // Canonicalize among the norm-preserving associates.
    let minus = |p: &Poly| -p;
    let mut best = (u.clone(), v.clone());
    for cand in [
        (minus(&u), minus(&v)),
        (u.clone(), minus(&v)),
        (minus(&u), v.clone()),
    ] {
        if pair_key(&cand) < pair_key(&best) {
            best = cand;
        }
    }
    let check = ctx.norm(&best.0, &best.1);
    if !check.is_one() {
        return Err(Error::internal("Pell normalization lost the unit norm"));
    }
    Ok(best)
}

/// Characteristic 2: the expansion of the positive root of the reduced form
/// is purely periodic; the unit is read off at the first state repeat.
fn unit_char2(ctx: &QuadContext, max_steps: usize) -> Result<(Poly, Poly)> {
    let mut e = CfExpansion::of_large_root(ctx.b(), ctx.c())?;
    let key0 = e.state_key();
    let (a0, b0, c0) = {
        let (a, b, c) = e.triple();
        (a.clone(), b.clone(), c.clone())
    };
    let mut spent = 0usize;
    loop {
        if spent >= max_steps {
            return Err(Error::BudgetExceeded(
                "continued fraction period exceeded the step budget".into(),
            ));
        }
        let st = e.step()?;
        spent += 1;
        if e.state_key() != key0 {
            continue;
        }
        let v_big = st.q.exact_div(&a0)?;
        if st.p != &st.q_prev - &(&v_big * &b0) || st.p_prev != -&(&v_big * &c0) {
            return Err(Error::internal("period matrix does not fix its quadratic"));
        }
        // The period matrix fixes theta, so q_prev + q*theta is a unit.
        let (u, v) = (st.q_prev, st.q);
        if !ctx.norm(&u, &v).is_one() {
            return Err(Error::internal("period unit norm is not 1"));
        }
        return Ok((u, v));
    }
}

/// Odd characteristic: expand sqrt(C) for C = -c until the states turn
/// reduced, then close one period of the purely periodic tail and express
/// the fixed-point unit in the basis {1, sqrt(C)}.
fn unit_odd(ctx: &QuadContext, max_steps: usize) -> Result<(Poly, Poly)> {
    let f = ctx.field().clone();
    let cap_c = -ctx.c();
    let mut e = CfExpansion::of_surd(&cap_c)?;
    let mut spent = 0usize;
    while !e.is_reduced()? {
        if spent >= max_steps {
            return Err(Error::BudgetExceeded(
                "continued fraction did not reach a reduced state".into(),
            ));
        }
        e.step()?;
        spent += 1;
    }
    let mut r = e.restarted();
    let key = r.state_key();
    let (a_star, b_star, c_star) = {
        let (a, b, c) = r.triple();
        (a.clone(), b.clone(), c.clone())
    };
    let sigma_star = r.sigma();
    loop {
        if spent >= max_steps {
            return Err(Error::BudgetExceeded(
                "continued fraction period exceeded the step budget".into(),
            ));
        }
        let st = r.step()?;
        spent += 1;
        if r.state_key() != key {
            continue;
        }
        // theta* = (p theta* + p_prev)/(q theta* + q_prev) forces, by
        // coefficient matching against a* theta*^2 + b* theta* + c* = 0:
        //     p = q_prev - V b*,   p_prev = -V c*,   V = q / a*.
        let v_big = st.q.exact_div(&a_star)?;
        if st.p != &st.q_prev - &(&v_big * &b_star) || st.p_prev != -&(&v_big * &c_star) {
            return Err(Error::internal("period matrix does not fix its quadratic"));
        }
        // The unit q theta* + q_prev, rewritten via theta* =
        // (-b* + sigma* S)/(2a*) and S = 2 zeta sqrt(C):
        let half = f.inv(f.from_int(2)).expect("odd characteristic");
        let x_part = (&st.p + &st.q_prev).scale(half);
        let lc_s = f
            .sqrt(r.discriminant().leading())
            .expect("discriminant 4C has square leading coefficient");
        let lc_delta = f.sqrt(cap_c.leading()).expect("real case");
        let zeta = f.div(lc_s, f.mul(f.from_int(2), lc_delta))?;
        if zeta != f.one() && zeta != f.neg(f.one()) {
            return Err(Error::internal("square root normalizations disagree by a non-sign"));
        }
        let y_part = v_big.scale(f.mul(sigma_star, zeta));
        match ctx.norm(&x_part, &y_part).constant_value() {
            Some(c0) if c0 == f.one() || c0 == f.neg(f.one()) => {}
            _ => return Err(Error::internal("period unit norm is not +-1")),
        }
        return Ok((x_part, y_part));
    }
}

/// Smallest representative among the constant multiples of (u, v) and of its
/// conjugate, ordered by degree then top-down coefficients.
fn canonical_associate(ctx: &QuadContext, u: &Poly, v: &Poly) -> (Poly, Poly) {
    let f = ctx.field();
    let b_pre = ctx.monic_b();
    // The conjugate in the pre-shift presentation; this is the involution
    // that preserves u^2 + b*uv + c*v^2, so every candidate stays a unit.
    let conj = (u + &(&b_pre * v), -v);
    let mut best: Option<(Poly, Poly)> = None;
    for lam in f.elements() {
        if lam.is_zero() {
            continue;
        }
        for base in [&(u.clone(), v.clone()), &conj] {
            let cand = (base.0.scale(lam), base.1.scale(lam));
            if best.as_ref().is_none_or(|b| pair_key(&cand) < pair_key(b)) {
                best = Some(cand);
            }
        }
    }
    best.expect("at least one candidate")
}

fn poly_key(p: &Poly) -> (u64, Vec<u32>) {
    let len = p.coeffs().len() as u64;
    let rev: Vec<u32> = p.coeffs().iter().rev().map(|e| e.index()).collect();
    (len, rev)
}

/// Degree-then-top-coefficients order on pairs, shared with the solvers so
/// every canonical choice sorts the same way.
pub(crate) fn pair_key(pair: &(Poly, Poly)) -> ((u64, Vec<u32>), (u64, Vec<u32>)) {
    (poly_key(&pair.0), poly_key(&pair.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{Field, Fq};

    fn p(field: &Field, ints: &[i64]) -> Poly {
        Poly::from_ints(field, ints)
    }

    /// All units u + v*t with v != 0 within the given degree box.
    fn brute_units(b: &Poly, c: &Poly, max_du: i64, max_dv: i64) -> Vec<(Poly, Poly)> {
        let f = b.field();
        let mut out = Vec::new();
        for v in all_polys(f, max_dv) {
            if v.is_zero() {
                continue;
            }
            for u in all_polys(f, max_du) {
                let n = &(&(&u * &u) + &(&(b * &u) * &v)) + &(&(c * &v) * &v);
                if n.is_constant() && !n.is_zero() {
                    out.push((u.clone(), v.clone()));
                }
            }
        }
        out
    }

    fn all_polys(f: &Field, max_deg: i64) -> Vec<Poly> {
        let len = (max_deg + 1) as usize;
        let mut out = Vec::new();
        let mut counter = vec![0u32; len];
        loop {
            out.push(Poly::from_coeffs(f, counter.iter().map(|&i| Fq(i)).collect()));
            let mut pos = 0;
            loop {
                if pos == len {
                    return out;
                }
                counter[pos] += 1;
                if counter[pos] < f.q() {
                    break;
                }
                counter[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn char2_smallest_real_order() {
        let f = Field::new(2, 1).unwrap();
        let ctx = QuadContext::from_monic(&Poly::x(&f), &Poly::one(&f)).unwrap();
        let (u, v) = fundamental_unit(&ctx, 1000).unwrap();
        assert_eq!((u, v), (Poly::zero(&f), Poly::one(&f)));
    }

    #[test]
    fn char2_period_two_order() {
        let f = Field::new(2, 1).unwrap();
        let ctx = QuadContext::from_monic(&p(&f, &[0, 0, 1]), &Poly::x(&f)).unwrap();
        let (u, v) = fundamental_unit(&ctx, 1000).unwrap();
        assert_eq!((u.clone(), v.clone()), (Poly::one(&f), Poly::x(&f)));
        // Minimality against brute force: no unit has smaller v-degree.
        let all = brute_units(&p(&f, &[0, 0, 1]), &Poly::x(&f), 4, 0);
        assert!(all.is_empty(), "no unit should have constant v");
    }

    #[test]
    fn char2_shifted_presentation() {
        // b = x^2, c = x^3 normalizes with a shift; the unit must come back
        // in the original coordinates.
        let f = Field::new(2, 1).unwrap();
        let b = p(&f, &[0, 0, 1]);
        let c = p(&f, &[0, 0, 0, 1]);
        let ctx = QuadContext::from_monic(&b, &c).unwrap();
        let (u, v) = fundamental_unit(&ctx, 1000).unwrap();
        assert_eq!((u.clone(), v.clone()), (p(&f, &[1, 1]), Poly::one(&f)));
        let n = &(&(&u * &u) + &(&(&b * &u) * &v)) + &(&(&c * &v) * &v);
        assert!(n.is_one());
    }

    #[test]
    fn odd_fundamental_unit_f3() {
        let f = Field::new(3, 1).unwrap();
        // C = x^2 + 1: normalized form u^2 - C v^2.
        let ctx = QuadContext::from_monic(&Poly::zero(&f), &p(&f, &[-1, 0, -1])).unwrap();
        let (u, v) = fundamental_unit(&ctx, 1000).unwrap();
        assert_eq!((u.clone(), v.clone()), (Poly::x(&f), Poly::one(&f)));
        match unit_group_description(&ctx, 1000).unwrap() {
            UnitGroupDescription::FundamentalUnit { norm, .. } => {
                assert_eq!(norm, f.neg(f.one()));
            }
            other => panic!("expected a fundamental unit, got {other:?}"),
        }
    }

    #[test]
    fn pell_f3_frozen() {
        let f = Field::new(3, 1).unwrap();
        let d = p(&f, &[1, 0, 1]);
        let (u, v) = pell_fundamental(&d, 1000).unwrap();
        assert_eq!((u, v), (p(&f, &[2, 0, 1]), Poly::x(&f)));
    }

    #[test]
    fn pell_f5_frozen_and_minimal() {
        let f = Field::new(5, 1).unwrap();
        let d = p(&f, &[2, 0, 1]);
        let (u, v) = pell_fundamental(&d, 1000).unwrap();
        assert_eq!((u.clone(), v.clone()), (p(&f, &[1, 0, 1]), Poly::x(&f)));
        // Brute force: the least v-degree among nontrivial solutions is 1.
        let mut best: Option<(Poly, Poly)> = None;
        for vv in all_polys(&f, 1) {
            if vv.is_zero() {
                continue;
            }
            for uu in all_polys(&f, 2) {
                let n = &(&uu * &uu) - &(&(&d * &vv) * &vv);
                if n.is_one()
                    && best
                        .as_ref()
                        .is_none_or(|bst| pair_key(&(uu.clone(), vv.clone())) < pair_key(bst))
                {
                    best = Some((uu.clone(), vv.clone()));
                }
            }
        }
        assert_eq!(best, Some((u, v)));
    }

    #[test]
    fn pell_rejects_bad_shapes() {
        let f2 = Field::new(2, 1).unwrap();
        assert!(matches!(
            pell_fundamental(&p(&f2, &[0, 1]), 100),
            Err(Error::Unsupported(_))
        ));
        let f3 = Field::new(3, 1).unwrap();
        // Perfect square.
        assert!(matches!(
            pell_fundamental(&p(&f3, &[0, 0, 1]), 100),
            Err(Error::Unsupported(_))
        ));
        // Odd degree: imaginary.
        assert!(matches!(
            pell_fundamental(&p(&f3, &[0, 0, 0, 1]), 100),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn odd_unit_with_completed_square() {
        // b = x over F_5 normalizes by a shift; unit must satisfy the
        // original form.
        let f = Field::new(5, 1).unwrap();
        let b = Poly::x(&f);
        let c = Poly::one(&f);
        let ctx = QuadContext::from_monic(&b, &c).unwrap();
        let (u, v) = fundamental_unit(&ctx, 2000).unwrap();
        assert!(!v.is_zero());
        let n = &(&(&u * &u) + &(&(&b * &u) * &v)) + &(&(&c * &v) * &v);
        assert!(n.is_constant() && !n.is_zero(), "norm {} not constant", n);
    }

    #[test]
    fn f7_fundamental_unit_is_minimal() {
        let f = Field::new(7, 1).unwrap();
        let cap_c = p(&f, &[1, 0, 1]);
        let ctx = QuadContext::from_monic(&Poly::zero(&f), &-&cap_c).unwrap();
        let (_, v) = fundamental_unit(&ctx, 4000).unwrap();
        let dv = v.deg().finite().expect("nontrivial unit");
        // No unit within the brute-force box beats the v-degree.
        let all = brute_units(&Poly::zero(&f), &-&cap_c, 2, 1);
        let min_dv = all
            .iter()
            .map(|(_, vv)| vv.deg().finite().unwrap())
            .min()
            .expect("brute force finds units");
        assert_eq!(dv, min_dv);
    }

    #[test]
    fn descriptions_for_degenerate_cases() {
        let f = Field::new(3, 1).unwrap();
        // Imaginary: C = x^3.
        let im = QuadContext::from_monic(&Poly::zero(&f), &p(&f, &[0, 0, 0, -1])).unwrap();
        assert_eq!(
            unit_group_description(&im, 100).unwrap(),
            UnitGroupDescription::ConstantsOnly
        );
        // Split distinct roots: t^2 - x^2.
        let sp = QuadContext::from_monic(&Poly::zero(&f), &p(&f, &[0, 0, -1])).unwrap();
        assert_eq!(
            unit_group_description(&sp, 100).unwrap(),
            UnitGroupDescription::SplitConstants
        );
        // Double root: u^2 + 2x*uv + x^2*v^2 = (u + xv)^2, so z^2 - 2xz + x^2
        // has the double root x.
        let dbl = QuadContext::from_monic(&p(&f, &[0, 2]), &p(&f, &[0, 0, 1])).unwrap();
        match unit_group_description(&dbl, 100).unwrap() {
            UnitGroupDescription::UnipotentFamily { root } => {
                assert_eq!(root, Poly::x(&f));
                let val = &(&(&root * &root) - &(&p(&f, &[0, 2]) * &root)) + &p(&f, &[0, 0, 1]);
                assert!(val.is_zero());
            }
            other => panic!("expected a unipotent family, got {other:?}"),
        }
        // Inseparable over F_2.
        let f2 = Field::new(2, 1).unwrap();
        let insep = QuadContext::from_monic(&Poly::zero(&f2), &Poly::x(&f2)).unwrap();
        assert_eq!(
            unit_group_description(&insep, 100).unwrap(),
            UnitGroupDescription::ConstantsOnly
        );
        assert!(fundamental_unit(&insep, 100).is_err());
    }

    #[test]
    fn fundamental_unit_powers_stay_units() {
        let f = Field::new(3, 1).unwrap();
        let ctx = QuadContext::from_monic(&Poly::zero(&f), &p(&f, &[-1, 0, -1])).unwrap();
        let (u, v) = fundamental_unit(&ctx, 1000).unwrap();
        let (u2, v2) = ctx.mul_pair((&u, &v), (&u, &v));
        let n = ctx.norm(&u2, &v2);
        assert!(n.is_constant() && !n.is_zero());
        // The square is not fundamental: strictly larger v-degree.
        assert!(v2.deg() > v.deg());
    }
}
