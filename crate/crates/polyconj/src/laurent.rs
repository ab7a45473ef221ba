//! Laurent series at infinity with explicit precision tracking.
//!
//! Quadratic irrationalities over F_q(x) live in F_q((1/x)): series in
//! descending powers of x. Every series here carries either full knowledge
//! (`prec_floor == None`, a finite Laurent polynomial) or a precision floor:
//! coefficients of x^e for e >= floor are exactly right, anything below is
//! unknown. Arithmetic propagates floors pessimistically, so a coefficient
//! the API hands out is always correct; asking below the floor is
//! [`Error::PrecisionExhausted`], never a wrong answer.
//!
//! Floors combine the way convolution mixes windows. For a product, the
//! coefficient of x^e sums terms a_i * b_(e-i); it is known only when no
//! unknown coefficient can reach it, which pins the result floor at
//! max(floor_a + hi_b, floor_b + hi_a). Inversion by long division keeps
//! relative precision: n known coefficients in, n correct coefficients out.
//!
//! Two solvers live here because they are pure series recursions. Odd
//! characteristic gets [`LaurentSeries::sqrt_to`] (leading-coefficient
//! recursion). Characteristic 2 gets [`LaurentSeries::artin_schreier_root_to`],
//! solving s^2 + s = w for deg w < 0 by the telescoping sum
//! s = w + w^2 + w^4 + w^8 + ..., which converges in the 1/x-adic topology
//! because squaring doubles (negative) degrees.

use crate::error::{Error, Result};
use crate::gf::{Field, Fq};
use crate::poly::{Degree, Poly};
use std::fmt;
use std::ops::{Add, Mul, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    /// Exponent of coeffs[0]; meaningful only when coeffs is nonempty.
    hi: i64,
    /// coeffs[i] is the coefficient of x^(hi - i). For inexact series the
    /// window is exactly [prec_floor, hi]; for exact series both ends are
    /// trimmed of zeros.
    coeffs: Vec<Fq>,
    /// Known-correct down to this exponent inclusive; None means exact.
    prec_floor: Option<i64>,
}

impl LaurentSeries {
    pub fn zero(field: &Field) -> LaurentSeries {
        LaurentSeries { field: field.clone(), hi: 0, coeffs: Vec::new(), prec_floor: None }
    }

    /// The zero-so-far series: all of x^floor and above is known to vanish,
    /// below that nothing is known.
    pub fn zero_to(field: &Field, floor: i64) -> LaurentSeries {
        LaurentSeries { field: field.clone(), hi: floor - 1, coeffs: Vec::new(), prec_floor: Some(floor) }
    }

    pub fn monomial(field: &Field, c: Fq, e: i64) -> LaurentSeries {
        if c.is_zero() {
            return LaurentSeries::zero(field);
        }
        LaurentSeries { field: field.clone(), hi: e, coeffs: vec![c], prec_floor: None }
    }

    pub fn from_poly(p: &Poly) -> LaurentSeries {
        let mut coeffs: Vec<Fq> = p.coeffs().to_vec();
        coeffs.reverse();
        let hi = coeffs.len() as i64 - 1;
        let mut s = LaurentSeries { field: p.field().clone(), hi, coeffs, prec_floor: None };
        s.normalize();
        s
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_exact(&self) -> bool {
        self.prec_floor.is_none()
    }

    pub fn prec_floor(&self) -> Option<i64> {
        self.prec_floor
    }

    /// Degree of the series. Unknown (all known coefficients vanish but the
    /// tail might not) reports PrecisionExhausted.
    pub fn deg(&self) -> Result<Degree> {
        if !self.coeffs.is_empty() {
            return Ok(Degree::Fin(self.hi));
        }
        match self.prec_floor {
            None => Ok(Degree::NegInf),
            Some(_) => Err(Error::PrecisionExhausted),
        }
    }

    /// Leading coefficient; same knowledge requirements as [`Self::deg`].
    pub fn leading(&self) -> Result<Fq> {
        match self.deg()? {
            Degree::NegInf => Ok(Fq::ZERO),
            Degree::Fin(_) => Ok(self.coeffs[0]),
        }
    }

    /// Coefficient of x^e, refusing to guess below the floor.
    pub fn coeff(&self, e: i64) -> Result<Fq> {
        if let Some(floor) = self.prec_floor {
            if e < floor {
                return Err(Error::PrecisionExhausted);
            }
        }
        if self.coeffs.is_empty() || e > self.hi {
            return Ok(Fq::ZERO);
        }
        let off = self.hi - e;
        if off as usize >= self.coeffs.len() {
            // Below the stored window of an exact series: zero.
            return Ok(Fq::ZERO);
        }
        Ok(self.coeffs[off as usize])
    }

    /// Forget everything below the given exponent.
    pub fn truncate_to(&self, floor: i64) -> LaurentSeries {
        let lo_stored = self.hi - self.coeffs.len() as i64 + 1;
        if self.prec_floor.is_none() && (self.coeffs.is_empty() || lo_stored >= floor) {
            return self.clone();
        }
        let new_floor = match self.prec_floor {
            None => floor,
            Some(f) => f.max(floor),
        };
        let mut coeffs = Vec::new();
        if !self.coeffs.is_empty() && self.hi >= new_floor {
            let keep = (self.hi - new_floor + 1).min(self.coeffs.len() as i64) as usize;
            coeffs.extend_from_slice(&self.coeffs[..keep]);
            // An exact series stores nothing below its support; refill the
            // window with known zeros.
            coeffs.resize((self.hi - new_floor + 1) as usize, self.field.zero());
        }
        let mut s = LaurentSeries {
            field: self.field.clone(),
            hi: self.hi,
            coeffs,
            prec_floor: Some(new_floor),
        };
        s.normalize();
        s
    }

    pub fn scale(&self, c: Fq) -> LaurentSeries {
        if c.is_zero() {
            return match self.prec_floor {
                None => LaurentSeries::zero(&self.field),
                Some(f) => LaurentSeries::zero_to(&self.field, f),
            };
        }
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        LaurentSeries { field: self.field.clone(), hi: self.hi, coeffs, prec_floor: self.prec_floor }
    }

    /// Multiply by x^n.
    pub fn shift(&self, n: i64) -> LaurentSeries {
        LaurentSeries {
            field: self.field.clone(),
            hi: self.hi + n,
            coeffs: self.coeffs.clone(),
            prec_floor: self.prec_floor.map(|f| f + n),
        }
    }

    pub fn neg(&self) -> LaurentSeries {
        let coeffs = self.coeffs.iter().map(|&a| self.field.neg(a)).collect();
        LaurentSeries { field: self.field.clone(), hi: self.hi, coeffs, prec_floor: self.prec_floor }
    }

    /// The terms with exponent >= 0, as a polynomial. Needs the constant
    /// term to be known: an inexact series must have floor <= 0.
    pub fn polynomial_part(&self) -> Result<Poly> {
        if let Some(f) = self.prec_floor {
            if f > 0 {
                return Err(Error::PrecisionExhausted);
            }
        }
        if self.coeffs.is_empty() || self.hi < 0 {
            return Ok(Poly::zero(&self.field));
        }
        let mut out = vec![self.field.zero(); self.hi as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let e = self.hi - i as i64;
            if e < 0 {
                break;
            }
            out[e as usize] = c;
        }
        Ok(Poly::from_coeffs(&self.field, out))
    }

    /// Multiplicative inverse, correct down to x^floor. Needs a known
    /// leading coefficient; inexact inputs support only relative precision
    /// (n known terms give n correct output terms).
    pub fn inv_to(&self, floor: i64) -> Result<LaurentSeries> {
        if self.coeffs.is_empty() {
            return match self.prec_floor {
                None => Err(Error::DivisionByZero),
                Some(_) => Err(Error::PrecisionExhausted),
            };
        }
        let f = &self.field;
        let out_hi = -self.hi;
        if let Some(fl) = self.prec_floor {
            let attainable = fl - 2 * self.hi;
            if floor < attainable {
                return Err(Error::PrecisionExhausted);
            }
        }
        // Exact monomials invert exactly.
        if self.prec_floor.is_none() && self.coeffs.len() == 1 {
            return Ok(LaurentSeries::monomial(f, f.inv(self.coeffs[0])?, out_hi));
        }
        let count = out_hi - floor + 1;
        if count <= 0 {
            return Ok(LaurentSeries::zero_to(f, floor));
        }
        let lead_inv = f.inv(self.coeffs[0])?;
        let mut out = Vec::with_capacity(count as usize);
        out.push(lead_inv);
        for m in 1..count as usize {
            let mut acc = f.zero();
            for i in 1..=m.min(self.coeffs.len() - 1) {
                acc = f.add(acc, f.mul(self.coeffs[i], out[m - i]));
            }
            out.push(f.neg(f.mul(acc, lead_inv)));
        }
        let mut s = LaurentSeries { field: f.clone(), hi: out_hi, coeffs: out, prec_floor: Some(floor) };
        s.normalize();
        Ok(s)
    }

    /// Square root down to x^floor, odd characteristic. The degree must be
    /// even and the leading coefficient a square; the root returned is the
    /// one whose leading coefficient is the field's canonical square root.
    pub fn sqrt_to(&self, floor: i64) -> Result<LaurentSeries> {
        let f = &self.field;
        if f.characteristic_two() {
            return Err(Error::invalid("sqrt_to is for odd characteristic"));
        }
        if self.coeffs.is_empty() {
            return match self.prec_floor {
                None => Ok(LaurentSeries::zero(f)),
                Some(_) => Err(Error::PrecisionExhausted),
            };
        }
        if self.hi % 2 != 0 {
            return Err(Error::invalid("series of odd degree has no square root"));
        }
        let s0 = f
            .sqrt(self.coeffs[0])
            .ok_or_else(|| Error::invalid("leading coefficient is not a square"))?;
        let out_hi = self.hi / 2;
        if let Some(fl) = self.prec_floor {
            let known = self.hi - fl + 1;
            let attainable = out_hi - (known - 1);
            if floor < attainable {
                return Err(Error::PrecisionExhausted);
            }
        }
        let count = out_hi - floor + 1;
        if count <= 0 {
            return Ok(LaurentSeries::zero_to(f, floor));
        }
        let two_s0_inv = f.inv(f.mul(f.from_int(2), s0))?;
        let mut out = Vec::with_capacity(count as usize);
        out.push(s0);
        for m in 1..count as usize {
            // Coefficient of x^(hi - m) in out^2 is sum_{i+j=m} out_i out_j.
            let mut acc = self.coeffs.get(m).copied().unwrap_or(Fq::ZERO);
            for i in 1..m {
                acc = f.sub(acc, f.mul(out[i], out[m - i]));
            }
            out.push(f.mul(acc, two_s0_inv));
        }
        let mut s = LaurentSeries { field: f.clone(), hi: out_hi, coeffs: out, prec_floor: Some(floor) };
        s.normalize();
        Ok(s)
    }

    /// Coefficientwise squaring for characteristic 2: (sum c x^e)^2 is
    /// sum c^2 x^(2e).
    fn square_char2(&self) -> LaurentSeries {
        debug_assert!(self.field.characteristic_two());
        let f = &self.field;
        if self.coeffs.is_empty() {
            return LaurentSeries {
                field: f.clone(),
                hi: 2 * self.hi + 1,
                coeffs: Vec::new(),
                prec_floor: self.prec_floor.map(|fl| 2 * fl),
            };
        }
        let mut coeffs = vec![f.zero(); 2 * (self.coeffs.len() - 1) + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = f.mul(c, c);
        }
        let mut s = LaurentSeries {
            field: f.clone(),
            hi: 2 * self.hi,
            coeffs,
            prec_floor: self.prec_floor.map(|fl| 2 * fl),
        };
        s.normalize();
        s
    }

    /// Solves s^2 + s = self in characteristic 2, for series of negative
    /// degree, via s = w + w^2 + w^4 + ... The returned root is the one of
    /// negative degree; the other root is this plus 1.
    pub fn artin_schreier_root_to(&self, floor: i64) -> Result<LaurentSeries> {
        let f = &self.field;
        if !f.characteristic_two() {
            return Err(Error::invalid("artin_schreier_root_to is for characteristic 2"));
        }
        if self.eff_hi().is_some_and(|h| h >= 0) {
            return Err(Error::invalid("artin_schreier_root_to needs deg < 0"));
        }
        if let Some(fl) = self.prec_floor {
            if fl > floor {
                return Err(Error::PrecisionExhausted);
            }
        }
        if self.coeffs.is_empty() && self.prec_floor.is_none() {
            return Ok(LaurentSeries::zero(f));
        }
        let mut acc = LaurentSeries::zero_to(f, floor);
        let mut term = self.truncate_to(floor);
        while !term.coeffs.is_empty() && term.hi >= floor {
            acc = &acc + &term;
            term = term.square_char2().truncate_to(floor);
        }
        Ok(acc)
    }

    /// Do two series agree on every exponent down to the given floor? Both
    /// must actually know that range.
    pub fn agrees_to(&self, other: &LaurentSeries, floor: i64) -> Result<bool> {
        let top = self.hi.max(other.hi).max(floor);
        for e in floor..=top {
            if self.coeff(e)? != other.coeff(e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn normalize(&mut self) {
        match self.prec_floor {
            None => {
                while self.coeffs.first().is_some_and(|c| c.is_zero()) {
                    self.coeffs.remove(0);
                    self.hi -= 1;
                }
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
                if self.coeffs.is_empty() {
                    self.hi = 0;
                }
            }
            Some(floor) => {
                debug_assert!(
                    self.coeffs.is_empty() || self.hi - self.coeffs.len() as i64 + 1 == floor,
                    "inexact window must end exactly at the floor"
                );
                while self.coeffs.first().is_some_and(|c| c.is_zero()) {
                    self.coeffs.remove(0);
                    self.hi -= 1;
                }
                if self.coeffs.is_empty() {
                    self.hi = floor - 1;
                }
            }
        }
    }

    /// Effective highest exponent that might carry a nonzero coefficient:
    /// None means provably zero everywhere (the exact zero series).
    fn eff_hi(&self) -> Option<i64> {
        if !self.coeffs.is_empty() {
            Some(self.hi)
        } else {
            self.prec_floor.map(|f| f - 1)
        }
    }

    fn lo_stored(&self) -> i64 {
        self.hi - self.coeffs.len() as i64 + 1
    }
}

fn add_series(a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
    assert_eq!(a.field, b.field, "mixed fields in series +");
    let f = &a.field;
    let floor = match (a.prec_floor, b.prec_floor) {
        (None, None) => None,
        (Some(x), None) => Some(x),
        (None, Some(y)) => Some(y),
        (Some(x), Some(y)) => Some(x.max(y)),
    };
    let tops = [a.eff_hi(), b.eff_hi()];
    let top = match (tops[0], tops[1]) {
        (None, None) => {
            return match floor {
                None => LaurentSeries::zero(f),
                Some(fl) => LaurentSeries::zero_to(f, fl),
            }
        }
        (Some(x), None) => x,
        (None, Some(y)) => y,
        (Some(x), Some(y)) => x.max(y),
    };
    let lo = match floor {
        Some(fl) => fl,
        None => {
            let mut lo = i64::MAX;
            if !a.coeffs.is_empty() {
                lo = lo.min(a.lo_stored());
            }
            if !b.coeffs.is_empty() {
                lo = lo.min(b.lo_stored());
            }
            lo
        }
    };
    if lo > top {
        return match floor {
            None => LaurentSeries::zero(f),
            Some(fl) => LaurentSeries::zero_to(f, fl),
        };
    }
    let mut coeffs = Vec::with_capacity((top - lo + 1) as usize);
    for e in (lo..=top).rev() {
        let ca = a.coeff(e).expect("within combined window");
        let cb = b.coeff(e).expect("within combined window");
        coeffs.push(f.add(ca, cb));
    }
    let mut s = LaurentSeries { field: f.clone(), hi: top, coeffs, prec_floor: floor };
    s.normalize();
    s
}

fn mul_series(a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
    assert_eq!(a.field, b.field, "mixed fields in series *");
    let f = &a.field;
    let (ha, hb) = match (a.eff_hi(), b.eff_hi()) {
        // Multiplying by the exact zero gives the exact zero, whatever the
        // other factor's precision.
        (None, _) | (_, None) => return LaurentSeries::zero(f),
        (Some(x), Some(y)) => (x, y),
    };
    let floor = match (a.prec_floor, b.prec_floor) {
        (None, None) => None,
        (Some(fa), None) => Some(fa + hb),
        (None, Some(fb)) => Some(fb + ha),
        (Some(fa), Some(fb)) => Some((fa + hb).max(fb + ha)),
    };
    let top = ha + hb;
    let lo = match floor {
        Some(fl) => fl,
        None => a.lo_stored() + b.lo_stored(),
    };
    if a.coeffs.is_empty() || b.coeffs.is_empty() || lo > top {
        return match floor {
            None => LaurentSeries::zero(f),
            Some(fl) => LaurentSeries::zero_to(f, fl),
        };
    }
    let mut coeffs = Vec::with_capacity((top - lo + 1) as usize);
    for e in (lo..=top).rev() {
        let mut acc = f.zero();
        for (i, &ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ea = a.hi - i as i64;
            let eb = e - ea;
            if eb < b.lo_stored() || eb > b.hi {
                continue;
            }
            let cb = b.coeffs[(b.hi - eb) as usize];
            acc = f.add(acc, f.mul(ca, cb));
        }
        coeffs.push(acc);
    }
    let mut s = LaurentSeries { field: f.clone(), hi: top, coeffs, prec_floor: floor };
    s.normalize();
    s
}

fn sub_series(a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
    add_series(a, &b.neg())
}

macro_rules! series_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl $trait<&LaurentSeries> for &LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: &LaurentSeries) -> LaurentSeries {
                $impl_fn(self, rhs)
            }
        }
        impl $trait<LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: LaurentSeries) -> LaurentSeries {
                $impl_fn(&self, &rhs)
            }
        }
    };
}

series_binop!(Add, add, add_series);
series_binop!(Sub, sub, sub_series);
series_binop!(Mul, mul, mul_series);

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, "+")?;
            }
            wrote = true;
            let e = self.hi - i as i64;
            let cs = self.field.format_element(c);
            let coeff_text = if cs.contains('+') { format!("({cs})") } else { cs };
            if e == 0 {
                write!(f, "{coeff_text}")?;
            } else {
                if !c.is_one() {
                    write!(f, "{coeff_text}*")?;
                }
                if e == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{e}")?;
                }
            }
        }
        match self.prec_floor {
            None => {
                if !wrote {
                    write!(f, "0")?;
                }
            }
            Some(fl) => {
                if wrote {
                    write!(f, "+")?;
                }
                write!(f, "O(x^{})", fl - 1)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use proptest::prelude::*;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    fn f3() -> Field {
        Field::new(3, 1).unwrap()
    }

    #[test]
    fn display_and_windows() {
        let f = f2();
        let p = Poly::from_ints(&f, &[1, 1, 1]);
        let s = LaurentSeries::from_poly(&p);
        assert_eq!(s.to_string(), "x^2+x+1");
        assert!(s.is_exact());
        let t = s.truncate_to(1);
        assert_eq!(t.to_string(), "x^2+x+O(x^0)");
        assert_eq!(t.coeff(1).unwrap(), f.one());
        assert!(t.coeff(0).is_err());
        assert_eq!(t.coeff(5).unwrap(), f.zero());
        let z = LaurentSeries::zero_to(&f, -3);
        assert_eq!(z.to_string(), "O(x^-4)");
        assert!(z.deg().is_err());
    }

    #[test]
    fn arithmetic_matches_polynomials() {
        let f = f3();
        let a = Poly::from_ints(&f, &[1, 2, 0, 1]);
        let b = Poly::from_ints(&f, &[2, 1, 1]);
        let sa = LaurentSeries::from_poly(&a);
        let sb = LaurentSeries::from_poly(&b);
        assert_eq!(&sa + &sb, LaurentSeries::from_poly(&(&a + &b)));
        assert_eq!(&sa * &sb, LaurentSeries::from_poly(&(&a * &b)));
        assert_eq!(&sa - &sb, LaurentSeries::from_poly(&(&a - &b)));
    }

    #[test]
    fn product_floor_is_conservative() {
        let f = f2();
        // (x + 1 + O(x^-3)) * (x^2 + O(x^-1)): the unknown x^-1 tail of the
        // second factor times the x of the first lands at x^0, so the
        // product only knows x^1 and up.
        let a = &LaurentSeries::from_poly(&Poly::from_ints(&f, &[1, 1]))
            + &LaurentSeries::zero_to(&f, -2);
        let b = &LaurentSeries::from_poly(&Poly::from_ints(&f, &[0, 0, 1]))
            + &LaurentSeries::zero_to(&f, 0);
        assert_eq!(a.prec_floor(), Some(-2));
        let prod = &a * &b;
        assert_eq!(prod.prec_floor(), Some(1));
        assert_eq!(prod.coeff(3).unwrap(), f.one());
        assert_eq!(prod.coeff(2).unwrap(), f.one());
        assert!(prod.coeff(0).is_err());
    }

    #[test]
    fn inverse_against_product() {
        let f = f2();
        let p = Poly::from_ints(&f, &[1, 1, 1]);
        let s = LaurentSeries::from_poly(&p);
        let inv = s.inv_to(-12).unwrap();
        assert_eq!(inv.deg().unwrap(), Degree::Fin(-2));
        let prod = &s * &inv;
        let one = LaurentSeries::from_poly(&Poly::one(&f));
        assert!(prod.agrees_to(&one, -10).unwrap());
        // Relative precision: 5 known coefficients in, 5 out.
        let trunc = &s + &LaurentSeries::zero_to(&f, -2);
        assert!(trunc.inv_to(-6).unwrap().agrees_to(&inv, -6).unwrap());
        assert!(trunc.inv_to(-7).is_err());
        // Monomials invert exactly.
        let m = LaurentSeries::monomial(&f, f.one(), 3);
        assert!(m.inv_to(-100).unwrap().is_exact());
        assert!(LaurentSeries::zero(&f).inv_to(-1).is_err());
        assert!(LaurentSeries::zero_to(&f, -1).inv_to(0).is_err());
    }

    #[test]
    fn sqrt_odd_characteristic() {
        let f = f3();
        // sqrt(x^2+1) = x + 2*x^-1 + x^-3 + ... over F_3; verify by squaring.
        let c = Poly::from_ints(&f, &[1, 0, 1]);
        let s = LaurentSeries::from_poly(&c);
        let r = s.sqrt_to(-8).unwrap();
        assert_eq!(r.deg().unwrap(), Degree::Fin(1));
        assert_eq!(r.coeff(1).unwrap(), f.one());
        assert_eq!(r.coeff(-1).unwrap(), f.from_int(2));
        assert!((&r * &r).agrees_to(&s, -6).unwrap());
        // Leading coefficient must be the canonical field square root.
        assert_eq!(r.leading().unwrap(), f.sqrt(f.one()).unwrap());
        let odd_deg = LaurentSeries::from_poly(&Poly::from_ints(&f, &[0, 1]));
        assert!(odd_deg.sqrt_to(-4).is_err());
        let f5 = Field::new(5, 1).unwrap();
        let non_sq = LaurentSeries::from_poly(&Poly::from_ints(&f5, &[0, 0, 2]));
        assert!(non_sq.sqrt_to(-4).is_err());
    }

    #[test]
    fn artin_schreier_small_root() {
        let f = f2();
        // Solve s^2 + s = x^-2: s = x^-2 + x^-4 + x^-8 + ... Then
        // D = x*s solves D^2 + x*D + 1 = 0, with terms x^-1, x^-3, x^-7, ...
        let w = LaurentSeries::monomial(&f, f.one(), -2);
        let s = w.artin_schreier_root_to(-16).unwrap();
        let check = &(&s.square_char2() + &s) - &w;
        assert!(check.agrees_to(&LaurentSeries::zero(&f), -15).unwrap());
        let d = s.shift(1);
        assert_eq!(d.coeff(-1).unwrap(), f.one());
        assert_eq!(d.coeff(-3).unwrap(), f.one());
        assert_eq!(d.coeff(-5).unwrap(), f.zero());
        assert_eq!(d.coeff(-7).unwrap(), f.one());
        // Substitute into the quadratic: D^2 + x*D + 1 = 0 through precision.
        let x = LaurentSeries::from_poly(&Poly::x(&f));
        let one = LaurentSeries::from_poly(&Poly::one(&f));
        let residual = &(&(&d * &d) + &(&x * &d)) + &one;
        assert!(residual.agrees_to(&LaurentSeries::zero(&f), -14).unwrap());
        // Positive degree input is rejected.
        let bad = LaurentSeries::from_poly(&Poly::x(&f));
        assert!(bad.artin_schreier_root_to(-4).is_err());
    }

    #[test]
    fn polynomial_part_knowledge() {
        let f = f3();
        let p = Poly::from_ints(&f, &[1, 2, 1]);
        let s = LaurentSeries::from_poly(&p);
        assert_eq!(s.polynomial_part().unwrap(), p);
        let inv = LaurentSeries::from_poly(&Poly::x(&f)).inv_to(-5).unwrap();
        assert!(inv.polynomial_part().unwrap().is_zero());
        let not_enough = s.truncate_to(1);
        assert!(not_enough.polynomial_part().is_err());
        let mixed = &LaurentSeries::from_poly(&Poly::from_ints(&f, &[0, 0, 2])) + &inv;
        assert_eq!(mixed.polynomial_part().unwrap(), Poly::from_ints(&f, &[0, 0, 2]));
    }

    fn arb_poly(field: Field, max_len: usize) -> impl Strategy<Value = Poly> {
        let q = field.q();
        prop::collection::vec(0..q, 0..=max_len)
            .prop_map(move |v| Poly::from_coeffs(&field, v.into_iter().map(Fq).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn series_ring_matches_poly_ring(a in arb_poly(f3(), 6), b in arb_poly(f3(), 6)) {
            let sa = LaurentSeries::from_poly(&a);
            let sb = LaurentSeries::from_poly(&b);
            prop_assert_eq!(&sa * &sb, LaurentSeries::from_poly(&(&a * &b)));
            prop_assert_eq!(&sa + &sb, LaurentSeries::from_poly(&(&a + &b)));
        }

        #[test]
        fn inverse_is_two_sided(a in arb_poly(f3(), 6)) {
            prop_assume!(!a.is_zero());
            let s = LaurentSeries::from_poly(&a);
            let d = a.deg().finite().unwrap();
            let inv = s.inv_to(-12 - 2 * d).unwrap();
            let one = LaurentSeries::from_poly(&Poly::one(&f3()));
            prop_assert!((&s * &inv).agrees_to(&one, -10).unwrap());
            prop_assert!((&inv * &s).agrees_to(&one, -10).unwrap());
        }

        #[test]
        fn sqrt_squares_back(a in arb_poly(f3(), 4)) {
            prop_assume!(!a.is_zero());
            let sq = &a * &a;
            let s = LaurentSeries::from_poly(&sq);
            let d = a.deg().finite().unwrap();
            let r = s.sqrt_to(-10 - d).unwrap();
            prop_assert!((&r * &r).agrees_to(&s, -8).unwrap());
            // The root agrees with +-a everywhere it is known.
            let pa = LaurentSeries::from_poly(&a);
            let na = LaurentSeries::from_poly(&(-&a));
            prop_assert!(r.agrees_to(&pa, -6).unwrap() || r.agrees_to(&na, -6).unwrap());
        }

        #[test]
        fn artin_schreier_solves_quadratic(b in arb_poly(f2(), 3)) {
            prop_assume!(!b.is_zero());
            // Shift b down so the right-hand side has negative degree.
            let shift = -(b.deg().finite().unwrap() + 1) - 1;
            let w = LaurentSeries::from_poly(&b).shift(shift);
            let s = w.artin_schreier_root_to(-20).unwrap();
            let residual = &(&s.square_char2() + &s) - &w;
            prop_assert!(residual.agrees_to(&LaurentSeries::zero(&f2()), -18).unwrap());
        }
    }
}
