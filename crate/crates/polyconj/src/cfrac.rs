//! Continued fractions of quadratic irrationals in F_q((1/x)).
//!
//! A quadratic irrational theta is carried around as an exact triple
//! (a, b, c) of polynomials with a*theta^2 + b*theta + c = 0, never as a
//! truncated series. One expansion step extracts the polynomial part A of
//! theta and replaces theta by 1/(theta - A); on triples this is the
//! substitution t -> t + A followed by inversion:
//!
//! ```text
//! (a, b, c)  ->  (a, b + 2aA, aA^2 + bA + c)  ->  swap outer entries
//! ```
//!
//! Both moves preserve the discriminant b^2 - 4ac and the content of the
//! triple, so every state along an expansion stays primitive and shares one
//! discriminant D. Series only enter per step, recomputed from the exact
//! triple at whatever precision the polynomial part needs, so there is no
//! error accumulation over long periods.
//!
//! Triples are only determined by their root up to a scalar, and root
//! sequences of real quadratics can repeat with the triple off by some
//! constant (a quasi-period). Detecting periods on raw triples would then
//! overshoot, so every state is rescaled to monic `a`. In odd characteristic
//! the root is pinned down by a multiplier `sigma` with
//! theta = (-b + sigma*S)/(2a), where S is one fixed canonical series with
//! S^2 = D0 for the starting discriminant D0; sigma starts at +-1, is
//! untouched by the shift, flips under inversion, and absorbs the monic
//! rescaling, so sigma^2 * D0 = b^2 - 4ac holds at every state. The pair
//! (monic triple, sigma) determines theta exactly and is the period key. In
//! characteristic 2 the expansion only ever visits reduced states, where
//! exactly one root has positive degree, and that root is b/a * (s + 1) with
//! s the small solution of s^2 + s = ac/b^2; the monic triple alone is the
//! key.
//!
//! Convergents p_n/q_n follow the usual two-term recurrence and satisfy
//! p_n q_{n-1} - p_{n-1} q_n = (-1)^{n+1}, which is asserted in debug builds.

use crate::error::{Error, Result};
use crate::gf::{Field, Fq};
use crate::laurent::LaurentSeries;
use crate::poly::{Degree, Poly};

/// Hashable snapshot of an expansion state, used for period detection.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CfKey {
    a: Vec<u32>,
    b: Vec<u32>,
    c: Vec<u32>,
    sigma: u32,
}

/// One expansion step: the partial quotient it emitted and the convergents
/// up to and including it.
#[derive(Clone, Debug)]
pub struct CfStep {
    pub quotient: Poly,
    pub p: Poly,
    pub q: Poly,
    pub p_prev: Poly,
    pub q_prev: Poly,
}

#[derive(Clone)]
pub struct CfExpansion {
    field: Field,
    a: Poly,
    b: Poly,
    c: Poly,
    /// Root-selection multiplier in odd characteristic; zero (unused) in
    /// characteristic 2.
    sigma: Fq,
    /// Discriminant of the starting triple; later triples have
    /// sigma^2 * disc.
    disc: Poly,
    steps: usize,
    p_m1: Poly,
    p_m2: Poly,
    q_m1: Poly,
    q_m2: Poly,
}

impl CfExpansion {
    /// Expansion of the canonical square root of C (odd characteristic,
    /// C of even degree >= 2 with square leading coefficient).
    pub fn of_surd(cap_c: &Poly) -> Result<CfExpansion> {
        let field = cap_c.field().clone();
        if field.characteristic_two() {
            return Err(Error::invalid("of_surd requires odd characteristic"));
        }
        let a = Poly::one(&field);
        let b = Poly::zero(&field);
        let c = -cap_c;
        let disc = discriminant(&a, &b, &c);
        // theta_0 = sqrt(C) has leading coefficient sqrt(lc C); expressed as
        // (-b + tau*S)/(2a) with S the canonical root of D = 4C this forces
        // tau = 2*sqrt(lc C)/lc(S), which must be +-1.
        let lc_c = match cap_c.deg().finite() {
            Some(d) if d >= 2 && d % 2 == 0 => cap_c.leading(),
            _ => return Err(Error::invalid("square root expansion needs deg C even and >= 2")),
        };
        let zeta = field
            .sqrt(lc_c)
            .ok_or_else(|| Error::invalid("leading coefficient of C must be a square"))?;
        let lc_s = field
            .sqrt(disc.leading())
            .expect("lc D = 4 lc C is a square");
        let sigma = field.div(field.mul(field.from_int(2), zeta), lc_s)?;
        if sigma != field.one() && sigma != field.neg(field.one()) {
            return Err(Error::internal("surd sign is not +-1"));
        }
        Ok(CfExpansion::fresh(field, a, b, c, sigma, disc))
    }

    /// Expansion of the positive-degree root of t^2 + bt + c in
    /// characteristic 2; requires the reduced shape deg c < 2 deg b.
    pub fn of_large_root(b: &Poly, c: &Poly) -> Result<CfExpansion> {
        let field = b.field().clone();
        if !field.characteristic_two() {
            return Err(Error::invalid("of_large_root requires characteristic 2"));
        }
        let db = match b.deg().finite() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::invalid("large root expansion needs deg b >= 1")),
        };
        if c.is_zero() || c.deg() >= 2 * db {
            return Err(Error::invalid("large root expansion needs 0 < deg-bounded c"));
        }
        let a = Poly::one(&field);
        let disc = discriminant(&a, b, c);
        let zero = field.zero();
        Ok(CfExpansion::fresh(field, a, b.clone(), c.clone(), zero, disc))
    }

    fn fresh(field: Field, a: Poly, b: Poly, c: Poly, sigma: Fq, disc: Poly) -> CfExpansion {
        let one = Poly::one(&field);
        let zero = Poly::zero(&field);
        CfExpansion {
            field,
            a,
            b,
            c,
            sigma,
            disc,
            steps: 0,
            p_m1: one.clone(),
            p_m2: zero.clone(),
            q_m1: zero,
            q_m2: one,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn triple(&self) -> (&Poly, &Poly, &Poly) {
        (&self.a, &self.b, &self.c)
    }

    pub fn sigma(&self) -> Fq {
        self.sigma
    }

    pub fn discriminant(&self) -> &Poly {
        &self.disc
    }

    pub fn steps_taken(&self) -> usize {
        self.steps
    }

    pub fn state_key(&self) -> CfKey {
        let idx = |p: &Poly| p.coeffs().iter().map(|e| e.index()).collect();
        CfKey { a: idx(&self.a), b: idx(&self.b), c: idx(&self.c), sigma: self.sigma.index() }
    }

    /// Same state, convergents reset to the seed values. Used to expand the
    /// purely periodic tail on its own.
    pub fn restarted(&self) -> CfExpansion {
        CfExpansion::fresh(
            self.field.clone(),
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.sigma,
            self.disc.clone(),
        )
    }

    /// Reduced means deg theta >= 1 while the conjugate root has negative
    /// degree; such states are exactly the ones on periodic cycles.
    pub fn is_reduced(&self) -> Result<bool> {
        let da = self.a.deg().finite().expect("a stays nonzero");
        let dc = match self.c.deg().finite() {
            Some(d) => d,
            None => return Ok(false),
        };
        if self.field.characteristic_two() {
            let db = match self.b.deg().finite() {
                Some(d) => d,
                None => return Ok(false),
            };
            return Ok(db - da >= 1 && dc < db);
        }
        let theta = self.root_series(-2)?;
        match theta.deg() {
            Ok(Degree::Fin(d)) if d >= 1 => Ok(dc - da - d < 0),
            _ => Ok(false),
        }
    }

    /// Emit the next partial quotient and advance.
    pub fn step(&mut self) -> Result<CfStep> {
        let theta = self.root_series(-2)?;
        let quotient = theta.polynomial_part()?;
        if quotient.deg() < 1 {
            return Err(Error::internal(
                "partial quotient of degree < 1: input was rational or not an expansion state",
            ));
        }
        // Shift by the quotient, then invert: see module docs.
        let two = self.field.from_int(2);
        let shifted_b = &self.b + &(&self.a * &quotient).scale(two);
        let value = &(&(&self.a * &quotient) + &self.b) * &quotient;
        let shifted_c = &value + &self.c;
        if shifted_c.is_zero() {
            return Err(Error::internal("expansion hit a rational root"));
        }
        self.c = std::mem::replace(&mut self.a, shifted_c);
        self.b = shifted_b;
        self.sigma = self.field.neg(self.sigma);
        self.canonicalize();
        debug_assert!(self.primitive(), "triple content must stay trivial");
        debug_assert!(self.sigma_consistent(), "sigma^2 * D0 must match the triple");
        if self.field.characteristic_two() {
            let da = self.a.deg().finite().unwrap();
            let db = self.b.deg().finite().expect("b nonzero in char 2 states");
            let dc = self.c.deg().finite().unwrap_or(i64::MIN / 2);
            debug_assert!(da + dc < 2 * db, "characteristic 2 states stay reduced");
        }
        // Convergents.
        let p_new = &(&quotient * &self.p_m1) + &self.p_m2;
        let q_new = &(&quotient * &self.q_m1) + &self.q_m2;
        self.p_m2 = std::mem::replace(&mut self.p_m1, p_new);
        self.q_m2 = std::mem::replace(&mut self.q_m1, q_new);
        self.steps += 1;
        debug_assert!(self.det_is_unit(), "convergent determinant must be +-1");
        Ok(CfStep {
            quotient,
            p: self.p_m1.clone(),
            q: self.q_m1.clone(),
            p_prev: self.p_m2.clone(),
            q_prev: self.q_m2.clone(),
        })
    }

    /// The tracked root as a series known down to `floor`.
    pub fn root_series(&self, floor: i64) -> Result<LaurentSeries> {
        if self.field.characteristic_two() {
            self.root_series_char2(floor)
        } else {
            self.root_series_odd(floor)
        }
    }

    /// theta = (-b + tau*S)/(2a), S the canonical square root of D.
    fn root_series_odd(&self, floor: i64) -> Result<LaurentSeries> {
        let f = &self.field;
        let da = self.a.deg().finite().expect("a nonzero");
        let ds = self.disc.deg().finite().expect("D nonzero") / 2;
        let db = self.b.deg().finite().unwrap_or(i64::MIN / 2);
        let hi_num = ds.max(db);
        let num_floor = floor + da - 1;
        let s = LaurentSeries::from_poly(&self.disc).sqrt_to(num_floor)?;
        let num = &LaurentSeries::from_poly(&-&self.b) + &s.scale(self.sigma);
        let denom = self.a.scale(f.from_int(2));
        let inv = LaurentSeries::from_poly(&denom).inv_to(floor - hi_num - 1)?;
        Ok(&num * &inv)
    }

    /// theta = (b/a)(s + 1), s the small root of s^2 + s = ac/b^2.
    fn root_series_char2(&self, floor: i64) -> Result<LaurentSeries> {
        let f = &self.field;
        let da = self.a.deg().finite().expect("a nonzero");
        let db = self.b.deg().finite().expect("b nonzero");
        let ac = &self.a * &self.c;
        let dac = ac.deg().finite().expect("c nonzero");
        debug_assert!(dac < 2 * db, "series root needs a reduced state");
        let z_floor = floor - (db - da) - 1;
        let b_sq = &self.b * &self.b;
        let inv_b2 = LaurentSeries::from_poly(&b_sq).inv_to(z_floor - dac - 1)?;
        let w = &LaurentSeries::from_poly(&ac) * &inv_b2;
        let s = w.artin_schreier_root_to(z_floor)?;
        let z = &s + &LaurentSeries::from_poly(&Poly::one(f));
        let inv_a = LaurentSeries::from_poly(&self.a).inv_to(floor - db - 1)?;
        let m = &LaurentSeries::from_poly(&self.b) * &inv_a;
        Ok(&m * &z)
    }

    /// Rescale the triple to monic `a`, folding the multiplier into sigma so
    /// the tracked root is unchanged. Makes state keys canonical per root,
    /// which is what lets quasi-periods be seen as periods.
    fn canonicalize(&mut self) {
        let lc = self.a.leading();
        if lc == self.field.one() {
            return;
        }
        let inv = self.field.inv(lc).expect("a stays nonzero");
        self.a = self.a.scale(inv);
        self.b = self.b.scale(inv);
        self.c = self.c.scale(inv);
        self.sigma = self.field.mul(self.sigma, inv);
    }

    fn sigma_consistent(&self) -> bool {
        if self.field.characteristic_two() {
            return true;
        }
        let s2 = self.field.mul(self.sigma, self.sigma);
        discriminant(&self.a, &self.b, &self.c) == self.disc.scale(s2)
    }

    fn primitive(&self) -> bool {
        let g = self.a.gcd(&self.b).gcd(&self.c);
        g.is_one() || (g.is_constant() && !g.is_zero())
    }

    fn det_is_unit(&self) -> bool {
        let det = &(&self.p_m1 * &self.q_m2) - &(&self.p_m2 * &self.q_m1);
        match det.constant_value() {
            Some(v) => v == self.field.one() || v == self.field.neg(self.field.one()),
            None => false,
        }
    }
}

impl std::fmt::Debug for CfExpansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CfExpansion {{ ({})t^2 + ({})t + ({}), sigma: {}, steps: {} }}",
            self.a,
            self.b,
            self.c,
            self.field.format_element(self.sigma),
            self.steps
        )
    }
}

fn discriminant(a: &Poly, b: &Poly, c: &Poly) -> Poly {
    let four = Poly::constant(a.field(), a.field().from_int(4));
    &(b * b) - &(&four * &(a * c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use std::collections::HashMap;

    fn p(field: &Field, ints: &[i64]) -> Poly {
        Poly::from_ints(field, ints)
    }

    #[test]
    fn surd_expansion_f3() {
        // sqrt(x^2+1) over F_3 = [x; 2x, 2x, 2x, ...].
        let f = Field::new(3, 1).unwrap();
        let cap_c = p(&f, &[1, 0, 1]);
        let mut e = CfExpansion::of_surd(&cap_c).unwrap();
        let s0 = e.step().unwrap();
        assert_eq!(s0.quotient, Poly::x(&f));
        assert_eq!(s0.p, Poly::x(&f));
        assert!(s0.q.is_one());
        let key1 = e.state_key();
        let s1 = e.step().unwrap();
        assert_eq!(s1.quotient, p(&f, &[0, 2]));
        let s2 = e.step().unwrap();
        assert_eq!(s2.quotient, p(&f, &[0, 2]));
        assert_eq!(e.state_key(), key1, "period 1 after the initial step");
    }

    #[test]
    fn surd_start_is_not_reduced_but_tail_is() {
        let f = Field::new(3, 1).unwrap();
        let cap_c = p(&f, &[1, 0, 1]);
        let mut e = CfExpansion::of_surd(&cap_c).unwrap();
        // sqrt(C) has conjugate -sqrt(C) of positive degree: not reduced.
        assert!(!e.is_reduced().unwrap());
        e.step().unwrap();
        assert!(e.is_reduced().unwrap());
    }

    #[test]
    fn char2_period_one() {
        // t^2 + xt + 1 over F_2: the large root + b expands with quotient x
        // forever, state repeating immediately.
        let f = Field::new(2, 1).unwrap();
        let mut e = CfExpansion::of_large_root(&Poly::x(&f), &Poly::one(&f)).unwrap();
        let key0 = e.state_key();
        let s0 = e.step().unwrap();
        assert_eq!(s0.quotient, Poly::x(&f));
        assert_eq!(e.state_key(), key0);
        assert!(e.is_reduced().unwrap());
    }

    #[test]
    fn char2_period_two() {
        // t^2 + x^2 t + x over F_2: quotients alternate x^2, x.
        let f = Field::new(2, 1).unwrap();
        let b = p(&f, &[0, 0, 1]);
        let c = Poly::x(&f);
        let mut e = CfExpansion::of_large_root(&b, &c).unwrap();
        let key0 = e.state_key();
        let s0 = e.step().unwrap();
        assert_eq!(s0.quotient, p(&f, &[0, 0, 1]));
        assert_ne!(e.state_key(), key0);
        let s1 = e.step().unwrap();
        assert_eq!(s1.quotient, Poly::x(&f));
        assert_eq!(e.state_key(), key0, "period 2");
        // p_1 + Delta*q_1 should be a norm-one unit: N(x^3+1, x) = 1 for the
        // form u^2 + b uv + c v^2.
        assert_eq!(s1.p, p(&f, &[1, 0, 0, 1]));
        assert_eq!(s1.q, Poly::x(&f));
        let n = &(&(&s1.p * &s1.p) + &(&(&b * &s1.p) * &s1.q)) + &(&(&c * &s1.q) * &s1.q);
        assert!(n.is_one());
    }

    #[test]
    fn convergents_approximate_the_root() {
        // deg(q_n * theta - p_n) = -deg q_{n+1}: the defining property of
        // best approximations, checked against deep series.
        let f = Field::new(3, 1).unwrap();
        let cap_c = p(&f, &[2, 1, 0, 0, 1]); // x^4 + x + 2
        let mut e = CfExpansion::of_surd(&cap_c).unwrap();
        let theta = e.root_series(-40).unwrap();
        let mut hist: Vec<(Poly, Poly)> = Vec::new();
        for _ in 0..6 {
            let st = e.step().unwrap();
            hist.push((st.p.clone(), st.q.clone()));
        }
        for w in hist.windows(2) {
            let (pn, qn) = &w[0];
            let (_, qn1) = &w[1];
            let err = &(&LaurentSeries::from_poly(qn) * &theta)
                - &LaurentSeries::from_poly(pn);
            let got = err.deg().unwrap();
            let want = -(qn1.deg().finite().unwrap());
            assert_eq!(got, want, "approximation order after {}", pn);
        }
    }

    #[test]
    fn periods_close_for_several_surds(){
        // Period detection on a few real discriminants; also exercises the
        // determinant and primitivity debug assertions over longer runs.
        let f = Field::new(5, 1).unwrap();
        for c_ints in [[2i64, 0, 1], [3, 1, 1], [1, 2, 1]] {
            let cap_c = p(&f, &c_ints);
            if cap_c.poly_sqrt().is_some() {
                continue;
            }
            let mut e = CfExpansion::of_surd(&cap_c).unwrap();
            let mut seen: HashMap<CfKey, usize> = HashMap::new();
            let mut closed = false;
            for n in 0..200 {
                if let Some(first) = seen.insert(e.state_key(), n) {
                    assert!(first > 0 || n > 0);
                    closed = true;
                    break;
                }
                e.step().unwrap();
            }
            assert!(closed, "no period within 200 steps for C = {}", cap_c);
        }
    }

    #[test]
    fn rejects_wrong_characteristic_and_shapes() {
        let f2 = Field::new(2, 1).unwrap();
        let f3 = Field::new(3, 1).unwrap();
        assert!(CfExpansion::of_surd(&p(&f2, &[1, 0, 1])).is_err());
        assert!(CfExpansion::of_large_root(&Poly::x(&f3), &Poly::one(&f3)).is_err());
        // deg C odd: no square root series.
        assert!(CfExpansion::of_surd(&p(&f3, &[0, 0, 0, 1])).is_err());
        // c too big relative to b: not a reduced shape.
        assert!(CfExpansion::of_large_root(&Poly::x(&f2), &p(&f2, &[0, 0, 1])).is_err());
    }

    #[test]
    fn restart_resets_convergents_only() {
        let f = Field::new(3, 1).unwrap();
        let mut e = CfExpansion::of_surd(&p(&f, &[1, 0, 1])).unwrap();
        e.step().unwrap();
        e.step().unwrap();
        let r = e.restarted();
        assert_eq!(r.state_key(), e.state_key());
        assert_eq!(r.steps_taken(), 0);
    }
}
