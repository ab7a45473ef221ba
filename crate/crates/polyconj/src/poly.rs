//! Dense univariate polynomials over F_q.
//!
//! A [`Poly`] owns its coefficient vector (little endian, no trailing zeros)
//! and a handle to its field, so the usual operators work directly on
//! references: `&f * &g`, `&f + &g`. Mixing polynomials over different fields
//! panics, the same policy as element arithmetic in [`crate::gf`].
//!
//! Degrees live in [`Degree`], which makes deg 0 = NegInf explicit instead of
//! hiding it in a -1 convention; `Degree` compares against plain integers so
//! bounds checks read the way they are written on paper.
//!
//! The text format, produced by `Display` and consumed by [`Poly::parse`],
//! writes terms highest power first, joined by `+`, with `*` between a
//! coefficient and its power of x. Coefficients whose own text contains a `+`
//! (extension field elements like `a+1`) are parenthesized, everything else
//! appears bare: `(a+1)*x^2+2*x+a`, `x^3+x+1`, `0`. Parsing is slightly more
//! lenient than printing (whitespace is tolerated, repeated powers are
//! accumulated) but every printed form round-trips exactly.

use crate::error::{Error, Result};
use crate::gf::{Field, Fq};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Degree of a polynomial; the zero polynomial gets `NegInf`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Degree {
    NegInf,
    Fin(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::NegInf => None,
            Degree::Fin(d) => Some(d),
        }
    }

    /// Shift by an integer; NegInf is absorbing.
    pub fn plus(self, n: i64) -> Degree {
        match self {
            Degree::NegInf => Degree::NegInf,
            Degree::Fin(d) => Degree::Fin(d + n),
        }
    }

    /// Degree of a product: sum with NegInf absorbing.
    pub fn add_deg(self, other: Degree) -> Degree {
        match (self, other) {
            (Degree::Fin(a), Degree::Fin(b)) => Degree::Fin(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl PartialEq<i64> for Degree {
    fn eq(&self, n: &i64) -> bool {
        matches!(self, Degree::Fin(d) if d == n)
    }
}

impl PartialOrd<i64> for Degree {
    fn partial_cmp(&self, n: &i64) -> Option<Ordering> {
        match self {
            Degree::NegInf => Some(Ordering::Less),
            Degree::Fin(d) => d.partial_cmp(n),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Fin(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    /// Little-endian coefficients, trailing zeros stripped; empty = 0.
    coeffs: Vec<Fq>,
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn constant(field: &Field, c: Fq) -> Poly {
        let coeffs = if c.is_zero() { Vec::new() } else { vec![c] };
        Poly { field: field.clone(), coeffs }
    }

    pub fn x(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: vec![field.zero(), field.one()] }
    }

    pub fn monomial(field: &Field, c: Fq, power: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero(field);
        }
        let mut coeffs = vec![field.zero(); power + 1];
        coeffs[power] = c;
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_coeffs(field: &Field, mut coeffs: Vec<Fq>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    /// Convenience constructor from integer coefficients, little endian.
    pub fn from_ints(field: &Field, ints: &[i64]) -> Poly {
        let coeffs = ints.iter().map(|&n| field.from_int(n)).collect();
        Poly::from_coeffs(field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    /// Coefficient of x^i, zero beyond the stored length.
    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn deg(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::NegInf
        } else {
            Degree::Fin(self.coeffs.len() as i64 - 1)
        }
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// The value of a constant polynomial, None when deg > 0.
    pub fn constant_value(&self) -> Option<Fq> {
        match self.coeffs.len() {
            0 => Some(Fq::ZERO),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    /// True when the polynomial is a nonzero constant, i.e. a unit of F_q[x].
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn scale(&self, c: Fq) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.field);
        }
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        Poly { field: self.field.clone(), coeffs }
    }

    pub fn mul_x_pow(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { field: self.field.clone(), coeffs }
    }

    pub fn eval(&self, x: Fq) -> Fq {
        let mut acc = self.field.zero();
        for &c in self.coeffs.iter().rev() {
            acc = self.field.add(self.field.mul(acc, x), c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.field.mul(self.field.from_int(i as i64), c))
            .collect();
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        assert_eq!(self.field, d.field, "mixed fields in div_rem");
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv(d.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![f.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c.is_zero() {
                continue;
            }
            quo[i - dd] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] = f.sub(rem[i - dd + j], f.mul(c, dc));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(f, quo), Poly::from_coeffs(f, rem)))
    }

    /// Division that must be exact; a nonzero remainder is a caller bug.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::internal(format!("exact division left remainder {r}")))
        }
    }

    /// Does self divide f? The zero polynomial divides only itself.
    pub fn divides(&self, f: &Poly) -> bool {
        if self.is_zero() {
            return f.is_zero();
        }
        match f.div_rem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Monic associate together with the leading coefficient scaled away.
    pub fn make_monic(&self) -> Result<(Poly, Fq)> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lead = self.leading();
        Ok((self.scale(self.field.inv(lead)?), lead))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("divisor checked nonzero");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.make_monic().expect("nonzero").0
        }
    }

    /// Extended gcd: returns monic g and s, t with s*self + t*other = g.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("divisor checked nonzero");
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let lead = r0.leading();
        let inv = f.inv(lead).expect("nonzero");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// All monic divisors, by exhaustive trial division of candidate degrees.
    /// Only sensible for the small degrees this crate meets; the count is
    /// q^(deg/2)-ish in the worst case, so callers budget accordingly.
    pub fn monic_divisors(&self) -> Vec<Poly> {
        let f = &self.field;
        if self.is_zero() {
            return Vec::new();
        }
        let deg = self.coeffs.len() - 1;
        let mut out = Vec::new();
        for d in 0..=deg {
            let mut counter = vec![0u32; d];
            loop {
                let mut coeffs: Vec<Fq> = counter.iter().map(|&i| Fq(i)).collect();
                coeffs.push(f.one());
                let cand = Poly::from_coeffs(f, coeffs);
                if cand.divides(self) {
                    out.push(cand);
                }
                // Odometer over all q^d coefficient vectors.
                let mut pos = 0;
                loop {
                    if pos == d {
                        break;
                    }
                    counter[pos] += 1;
                    if counter[pos] < f.q() {
                        break;
                    }
                    counter[pos] = 0;
                    pos += 1;
                }
                if pos == d {
                    break;
                }
            }
        }
        out
    }

    /// Exact polynomial square root, if one exists.
    pub fn poly_sqrt(&self) -> Option<Poly> {
        let f = &self.field;
        if self.is_zero() {
            return Some(self.clone());
        }
        let deg = self.coeffs.len() - 1;
        if deg % 2 != 0 {
            return None;
        }
        let half = deg / 2;
        let lead = f.sqrt(self.leading())?;
        let mut root = vec![f.zero(); half + 1];
        root[half] = lead;
        if f.characteristic_two() {
            // Squaring is coefficientwise in characteristic 2: a square has
            // only even powers, and the root reads them off directly.
            for (i, &c) in self.coeffs.iter().enumerate() {
                if i % 2 == 1 {
                    if !c.is_zero() {
                        return None;
                    }
                } else {
                    root[i / 2] = f.sqrt(c).expect("char 2 squares always exist");
                }
            }
        } else {
            // Match coefficients downward: in root^2 the x^(half+j)
            // coefficient is 2*root[half]*root[j] plus products of already
            // determined coefficients root[j+1..half].
            let two_lead_inv = f.inv(f.mul(f.from_int(2), lead)).expect("odd char, lead nonzero");
            for j in (0..half).rev() {
                let mut acc = self.coeff(half + j);
                for i in (j + 1)..half {
                    acc = f.sub(acc, f.mul(root[i], root[half + j - i]));
                }
                root[j] = f.mul(acc, two_lead_inv);
            }
        }
        let candidate = Poly::from_coeffs(f, root);
        if &(&candidate * &candidate) == self {
            Some(candidate)
        } else {
            None
        }
    }

    /// Roots in the base field, by direct evaluation.
    pub fn roots(&self) -> Vec<Fq> {
        if self.is_zero() {
            return Vec::new();
        }
        self.field.elements().filter(|&x| self.eval(x).is_zero()).collect()
    }

    /// Parses the display grammar back into a polynomial.
    pub fn parse(field: &Field, s: &str) -> Result<Poly> {
        let src = s.trim();
        if src.is_empty() {
            return Err(Error::invalid("empty polynomial text"));
        }
        let mut depth = 0i32;
        for ch in src.chars() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(Error::invalid(format!("unbalanced ')' in '{src}'")));
                    }
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::invalid(format!("unbalanced '(' in '{src}'")));
        }
        let mut out = Poly::zero(field);
        for term in split_top_level(src, '+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::invalid(format!("empty term in '{src}'")));
            }
            let (c, e) = parse_term(field, term)?;
            out = &out + &Poly::monomial(field, c, e);
        }
        Ok(out)
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_term(field: &Field, term: &str) -> Result<(Fq, usize)> {
    let factors: Vec<&str> = split_top_level(term, '*').into_iter().map(str::trim).collect();
    if factors.iter().any(|f| f.is_empty()) {
        return Err(Error::invalid(format!("empty factor in term '{term}'")));
    }
    let (coeff_factors, x_part) = match factors.last() {
        Some(last) if last.starts_with('x') => (&factors[..factors.len() - 1], Some(*last)),
        _ => (&factors[..], None),
    };
    if let Some(bad) = coeff_factors.iter().find(|f| f.contains('x')) {
        return Err(Error::invalid(format!("misplaced '{bad}' in term '{term}'")));
    }
    let coeff = if coeff_factors.is_empty() {
        field.one()
    } else {
        let joined = coeff_factors.join("*");
        let inner = strip_outer_parens(&joined);
        field.parse_element(inner)?
    };
    let power = match x_part {
        None => 0,
        Some("x") => 1,
        Some(xp) => {
            let e_text = xp
                .strip_prefix("x^")
                .ok_or_else(|| Error::invalid(format!("invalid power '{xp}'")))?;
            let e: usize = e_text
                .parse()
                .map_err(|_| Error::invalid(format!("invalid exponent '{e_text}'")))?;
            if e > 1_000_000 {
                return Err(Error::invalid(format!("exponent {e} is unreasonably large")));
            }
            e
        }
    };
    Ok((coeff, power))
}

fn strip_outer_parens(s: &str) -> &str {
    let bytes = s.as_bytes();
    if bytes.first() != Some(&b'(') || bytes.last() != Some(&b')') {
        return s;
    }
    // Only strip when the opening paren matches the final one.
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return if i == s.len() - 1 { &s[1..s.len() - 1] } else { s };
                }
            }
            _ => {}
        }
    }
    s
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let cs = self.field.format_element(c);
            let needs_parens = cs.contains('+');
            let coeff_text = if needs_parens { format!("({cs})") } else { cs };
            match i {
                0 => write!(f, "{coeff_text}")?,
                _ => {
                    if !c.is_one() {
                        write!(f, "{coeff_text}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn add_impl(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.field, b.field, "mixed fields in +");
    let f = &a.field;
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut coeffs = Vec::with_capacity(n);
    for i in 0..n {
        coeffs.push(f.add(a.coeff(i), b.coeff(i)));
    }
    Poly::from_coeffs(f, coeffs)
}

fn sub_impl(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.field, b.field, "mixed fields in -");
    let f = &a.field;
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut coeffs = Vec::with_capacity(n);
    for i in 0..n {
        coeffs.push(f.sub(a.coeff(i), b.coeff(i)));
    }
    Poly::from_coeffs(f, coeffs)
}

fn mul_impl(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.field, b.field, "mixed fields in *");
    let f = &a.field;
    if a.is_zero() || b.is_zero() {
        return Poly::zero(f);
    }
    let mut coeffs = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, &ca) in a.coeffs.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, &cb) in b.coeffs.iter().enumerate() {
            coeffs[i + j] = f.add(coeffs[i + j], f.mul(ca, cb));
        }
    }
    Poly::from_coeffs(f, coeffs)
}

fn neg_impl(a: &Poly) -> Poly {
    let coeffs = a.coeffs.iter().map(|&c| a.field.neg(c)).collect();
    Poly { field: a.field.clone(), coeffs }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                $impl_fn(self, rhs)
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                $impl_fn(&self, &rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                $impl_fn(&self, rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                $impl_fn(self, &rhs)
            }
        }
    };
}

binop!(Add, add, add_impl);
binop!(Sub, sub, sub_impl);
binop!(Mul, mul, mul_impl);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        neg_impl(self)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        neg_impl(&self)
    }
}
