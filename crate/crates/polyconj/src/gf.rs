//! Finite fields F_q with q = p^k up to 2^16.
//!
//! A [`Field`] owns eagerly built exponent, logarithm, inverse and square root
//! tables, so element arithmetic after construction is table lookups plus a
//! short digit loop for addition. Elements are plain indices ([`Fq`]) into
//! those tables: cheap to copy, meaningless without their field.
//!
//! Extension fields are F_p[a]/(m(a)) for a monic irreducible m of degree k.
//! The index of an element encodes its coordinates in the power basis
//! 1, a, ..., a^(k-1) as base-p digits, least significant first. When no
//! modulus is supplied the field picks a canonical one: the monic irreducible
//! of degree k whose coefficient vector, read as a base-p integer with the
//! constant term least significant, is smallest. That rule yields a^2+a+1
//! for F_4, a^3+a+1 for F_8 and a^2+1 for F_9.
//!
//! Mixing elements of two different fields is a programming error and panics;
//! everything reachable from user input (bad parameters, reducible moduli,
//! malformed element text) returns [`Error`] instead.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Element of a finite field, stored as an index in 0..q.
///
/// Arithmetic lives on [`Field`]; an `Fq` by itself only supports equality,
/// ordering (by index, used for canonical tie-breaking) and hashing.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(pub(crate) u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq({})", self.0)
    }
}

struct FieldData {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus digits, little endian, length k+1; empty when k = 1.
    modulus: Vec<u32>,
    /// exp[i] = g^i as an index, doubled length so log sums need no reduction.
    exp: Vec<u32>,
    /// log[e] for e in 1..q; log[0] is a sentinel never read.
    log: Vec<u32>,
    /// inv[e] for e in 1..q; inv[0] is a sentinel never read.
    inv: Vec<u32>,
    /// sqrt[e], or u32::MAX when e has no square root.
    sqrt: Vec<u32>,
    gen_index: u32,
}

/// A finite field F_q, shared by reference.
///
/// Clones are cheap (one atomic increment). Two fields compare equal when
/// they have the same characteristic, degree and modulus, so independently
/// constructed copies of "the" F_9 interoperate.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.k == other.0.k
                && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.q)
        } else {
            write!(f, "F_{} ({})", self.0.q, format_a_poly(&self.0.modulus))
        }
    }
}

const MAX_Q: u64 = 1 << 16;

impl Field {
    /// Builds F_(p^k) with the canonical modulus.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        let (p, k) = validate_pk(p, k)?;
        if k == 1 {
            return build(p, k, Vec::new());
        }
        let modulus = default_modulus(p, k);
        build(p, k, modulus)
    }

    /// Builds F_(p^k) with an explicit monic irreducible modulus of degree k,
    /// given as little-endian digits over F_p (length k+1, leading digit 1).
    pub fn with_modulus(p: u32, k: u32, modulus: &[u32]) -> Result<Field> {
        let (p, k) = validate_pk(p, k)?;
        if k == 1 {
            return Err(Error::invalid("modulus is only meaningful for k > 1"));
        }
        if modulus.len() != (k + 1) as usize {
            return Err(Error::invalid(format!(
                "modulus must have degree {k} (got {} digits, expected {})",
                modulus.len(),
                k + 1
            )));
        }
        if modulus.iter().any(|&d| d >= p) {
            return Err(Error::invalid("modulus digit out of range"));
        }
        if modulus[k as usize] != 1 {
            return Err(Error::invalid("modulus must be monic"));
        }
        if !is_irreducible(p, modulus) {
            return Err(Error::invalid(format!(
                "modulus {} is reducible over F_{p}",
                format_a_poly(modulus)
            )));
        }
        build(p, k, modulus.to_vec())
    }

    /// Parses a field header line: `field p=<prime> k=<deg> [modulus=<poly in a>]`.
    pub fn parse_header(s: &str) -> Result<Field> {
        let mut p: Option<u32> = None;
        let mut k: Option<u32> = None;
        let mut modulus: Option<String> = None;
        let mut tokens = s.split_whitespace();
        match tokens.next() {
            Some("field") => {}
            _ => return Err(Error::invalid("field header must start with 'field'")),
        }
        for tok in tokens {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("expected key=value, got '{tok}'")))?;
            match key {
                "p" => {
                    if p.is_some() {
                        return Err(Error::invalid("duplicate key 'p'"));
                    }
                    p = Some(parse_u32(value, "p")?);
                }
                "k" => {
                    if k.is_some() {
                        return Err(Error::invalid("duplicate key 'k'"));
                    }
                    k = Some(parse_u32(value, "k")?);
                }
                "modulus" => {
                    if modulus.is_some() {
                        return Err(Error::invalid("duplicate key 'modulus'"));
                    }
                    modulus = Some(value.to_string());
                }
                other => {
                    return Err(Error::invalid(format!("unknown field header key '{other}'")))
                }
            }
        }
        let p = p.ok_or_else(|| Error::invalid("field header missing p"))?;
        let k = k.ok_or_else(|| Error::invalid("field header missing k"))?;
        match modulus {
            None => Field::new(p, k),
            Some(text) => {
                if k == 1 {
                    return Err(Error::invalid("modulus is only meaningful for k > 1"));
                }
                let digits = parse_a_poly(p, &text)?;
                let mut full = digits;
                if full.len() > (k + 1) as usize {
                    return Err(Error::invalid(format!("modulus degree exceeds k={k}")));
                }
                full.resize((k + 1) as usize, 0);
                Field::with_modulus(p, k, &full)
            }
        }
    }

    /// The canonical header line for this field, round-trippable through
    /// [`Field::parse_header`]. The modulus is always spelled out for k > 1.
    pub fn header(&self) -> String {
        let d = &self.0;
        if d.k == 1 {
            format!("field p={} k=1", d.p)
        } else {
            format!("field p={} k={} modulus={}", d.p, d.k, format_a_poly(&d.modulus))
        }
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn characteristic_two(&self) -> bool {
        self.0.p == 2
    }

    /// All q elements, in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(Fq)
    }

    /// A fixed generator of the multiplicative group (smallest index that
    /// has order q-1).
    pub fn generator(&self) -> Fq {
        Fq(self.0.gen_index)
    }

    /// A fixed non-square, for odd q. Every non-square is this value times a
    /// square, so quadratic equations only need testing against 1 and this.
    pub fn non_square(&self) -> Option<Fq> {
        if self.0.p == 2 {
            None
        } else {
            Some(Fq(self.0.gen_index))
        }
    }

    /// Element with the given index, checked against q.
    pub fn element(&self, index: u32) -> Result<Fq> {
        if index < self.0.q {
            Ok(Fq(index))
        } else {
            Err(Error::invalid(format!("element index {index} out of range for {self:?}")))
        }
    }

    /// The image of an integer under Z -> F_q (lands in the prime subfield).
    pub fn from_int(&self, n: i64) -> Fq {
        let p = self.0.p as i64;
        Fq(n.rem_euclid(p) as u32)
    }

    pub fn zero(&self) -> Fq {
        Fq(0)
    }

    pub fn one(&self) -> Fq {
        Fq(1)
    }

    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        let d = &self.0;
        debug_assert!(x.0 < d.q && y.0 < d.q);
        if d.p == 2 {
            return Fq(x.0 ^ y.0);
        }
        if d.k == 1 {
            let s = x.0 + y.0;
            return Fq(if s >= d.p { s - d.p } else { s });
        }
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while a != 0 || b != 0 {
            let s = (a % d.p + b % d.p) % d.p;
            out += s * place;
            a /= d.p;
            b /= d.p;
            place *= d.p;
        }
        Fq(out)
    }

    pub fn neg(&self, x: Fq) -> Fq {
        let d = &self.0;
        if d.p == 2 {
            return x;
        }
        if d.k == 1 {
            return Fq(if x.0 == 0 { 0 } else { d.p - x.0 });
        }
        let mut a = x.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while a != 0 {
            let digit = a % d.p;
            if digit != 0 {
                out += (d.p - digit) * place;
            }
            a /= d.p;
            place *= d.p;
        }
        Fq(out)
    }

    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        if x.0 == 0 || y.0 == 0 {
            return Fq(0);
        }
        let d = &self.0;
        Fq(d.exp[(d.log[x.0 as usize] + d.log[y.0 as usize]) as usize])
    }

    pub fn inv(&self, x: Fq) -> Result<Fq> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Fq(self.0.inv[x.0 as usize]))
    }

    pub fn div(&self, x: Fq, y: Fq) -> Result<Fq> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: Fq, n: u64) -> Fq {
        let d = &self.0;
        if x.0 == 0 {
            return if n == 0 { Fq(1) } else { Fq(0) };
        }
        if d.q == 2 {
            return Fq(1);
        }
        let m = (d.q - 1) as u64;
        let e = (d.log[x.0 as usize] as u64 * (n % m)) % m;
        Fq(d.exp[e as usize])
    }

    /// Square root in the field. In characteristic 2 every element has
    /// exactly one; in odd characteristic the squares get the root with the
    /// smaller index and non-squares get None.
    pub fn sqrt(&self, x: Fq) -> Option<Fq> {
        let r = self.0.sqrt[x.0 as usize];
        if r == u32::MAX {
            None
        } else {
            Some(Fq(r))
        }
    }

    pub fn is_square(&self, x: Fq) -> bool {
        self.0.sqrt[x.0 as usize] != u32::MAX
    }

    /// Frobenius x -> x^p.
    pub fn frobenius(&self, x: Fq) -> Fq {
        self.pow(x, self.0.p as u64)
    }

    /// Base-p digits of the index: coordinates in the power basis, least
    /// significant first, trimmed.
    pub fn digits(&self, x: Fq) -> Vec<u32> {
        index_to_digits(self.0.p, x.0)
    }

    /// Element from power-basis coordinates (little endian, each < p, at
    /// most k of them).
    pub fn from_digits(&self, digits: &[u32]) -> Result<Fq> {
        let d = &self.0;
        if digits.len() > d.k as usize {
            return Err(Error::invalid("too many digits for this field"));
        }
        if digits.iter().any(|&v| v >= d.p) {
            return Err(Error::invalid("digit out of range"));
        }
        Ok(Fq(digits_to_index(d.p, digits)))
    }

    /// Canonical text for an element: a decimal residue when k = 1, otherwise
    /// a polynomial in `a` like `2*a^2+a+1` (highest power first, zero terms
    /// omitted, unit coefficients implied).
    pub fn format_element(&self, x: Fq) -> String {
        if self.0.k == 1 {
            return x.0.to_string();
        }
        format_a_poly(&index_to_digits(self.0.p, x.0))
    }

    /// Parses element text in the same grammar [`Field::format_element`]
    /// emits. Prime fields take plain decimals; extension fields take sums of
    /// `coeff*a^i` terms (`a` and `a^i` with implied coefficient allowed).
    pub fn parse_element(&self, s: &str) -> Result<Fq> {
        let d = &self.0;
        if d.k == 1 {
            let trimmed = s.trim();
            let n: u64 = trimmed
                .parse()
                .map_err(|_| Error::invalid(format!("expected a decimal residue, got '{trimmed}'")))?;
            return Ok(Fq((n % d.p as u64) as u32));
        }
        let digits = parse_a_poly(d.p, s)?;
        if digits.len() > d.k as usize {
            return Err(Error::invalid(format!(
                "element '{}' has degree >= k={} in a",
                s.trim(),
                d.k
            )));
        }
        Ok(Fq(digits_to_index(d.p, &digits)))
    }
}

fn validate_pk(p: u32, k: u32) -> Result<(u32, u32)> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("p={p} is not prime")));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let q = (p as u64).checked_pow(k).ok_or_else(|| Error::invalid("q overflows"))?;
    if q > MAX_Q {
        return Err(Error::invalid(format!("q = {p}^{k} exceeds 2^16")));
    }
    Ok((p, k))
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn parse_u32(s: &str, what: &str) -> Result<u32> {
    s.parse()
        .map_err(|_| Error::invalid(format!("invalid value for {what}: '{s}'")))
}

fn index_to_digits(p: u32, mut idx: u32) -> Vec<u32> {
    let mut out = Vec::new();
    while idx != 0 {
        out.push(idx % p);
        idx /= p;
    }
    out
}

fn digits_to_index(p: u32, digits: &[u32]) -> u32 {
    let mut out = 0u32;
    for &d in digits.iter().rev() {
        out = out * p + d;
    }
    out
}

/// Formats digit vectors as polynomials in `a`: `a^3+2*a+1`.
fn format_a_poly(digits: &[u32]) -> String {
    let mut terms: Vec<String> = Vec::new();
    for (i, &d) in digits.iter().enumerate().rev() {
        if d == 0 {
            continue;
        }
        let term = match (d, i) {
            (d, 0) => d.to_string(),
            (1, 1) => "a".to_string(),
            (1, i) => format!("a^{i}"),
            (d, 1) => format!("{d}*a"),
            (d, i) => format!("{d}*a^{i}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// Parses a polynomial in `a` over F_p into trimmed little-endian digits.
fn parse_a_poly(p: u32, s: &str) -> Result<Vec<u32>> {
    let src = s.trim();
    if src.is_empty() {
        return Err(Error::invalid("empty element text"));
    }
    let mut digits: Vec<u32> = Vec::new();
    for raw_term in src.split('+') {
        let term = raw_term.trim();
        if term.is_empty() {
            return Err(Error::invalid(format!("empty term in '{src}'")));
        }
        let (coeff, power) = parse_a_term(p, term)?;
        if digits.len() <= power {
            digits.resize(power + 1, 0);
        }
        digits[power] = (digits[power] + coeff) % p;
    }
    while digits.last() == Some(&0) {
        digits.pop();
    }
    Ok(digits)
}

fn parse_a_term(p: u32, term: &str) -> Result<(u32, usize)> {
    let (coeff_text, apart) = match term.split_once('*') {
        Some((c, rest)) => (Some(c.trim()), Some(rest.trim())),
        None => {
            if term.starts_with('a') {
                (None, Some(term))
            } else {
                (Some(term), None)
            }
        }
    };
    let coeff = match coeff_text {
        None => 1,
        Some(c) => {
            let n: u64 = c
                .parse()
                .map_err(|_| Error::invalid(format!("invalid coefficient '{c}'")))?;
            (n % p as u64) as u32
        }
    };
    let power = match apart {
        None => 0,
        Some("a") => 1,
        Some(ap) => {
            let rest = ap
                .strip_prefix("a^")
                .ok_or_else(|| Error::invalid(format!("invalid term '{term}'")))?;
            let e: usize = rest
                .parse()
                .map_err(|_| Error::invalid(format!("invalid exponent in '{term}'")))?;
            e
        }
    };
    Ok((coeff, power))
}

/// Smallest monic irreducible of degree k over F_p, where "smallest" reads
/// the coefficient vector as a base-p integer, constant digit least
/// significant. Equivalently: substitute a = p and minimize the value.
fn default_modulus(p: u32, k: u32) -> Vec<u32> {
    let k = k as usize;
    let total = (p as u64).pow(k as u32);
    for m in 0..total {
        let mut digits = vec![0u32; k + 1];
        digits[k] = 1;
        let mut rest = m;
        for digit in digits.iter_mut().take(k) {
            *digit = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        if is_irreducible(p, &digits) {
            return digits;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

/// Irreducibility by trial division with every monic polynomial of degree
/// 1..=deg/2. Fields here are tiny, so this is plenty fast.
fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let total = (p as u64).pow(d as u32);
        for m in 0..total {
            let mut divisor = vec![0u32; d + 1];
            divisor[d] = 1;
            let mut rest = m;
            for digit in divisor.iter_mut().take(d) {
                *digit = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            if raw_rem(p, f, &divisor).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Remainder of x by a monic divisor, digit vectors over F_p, trimmed.
fn raw_rem(p: u32, x: &[u32], m: &[u32]) -> Vec<u32> {
    let md = m.len() - 1;
    let mut r: Vec<u32> = x.to_vec();
    while r.len() > md {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - md;
        if lead != 0 {
            for i in 0..=md {
                let sub = (lead as u64 * m[i] as u64 % p as u64) as u32;
                let pos = shift + i;
                r[pos] = ((r[pos] + p) - sub % p) % p;
            }
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

fn raw_mul(p: u32, x: &[u32], y: &[u32]) -> Vec<u32> {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; x.len() + y.len() - 1];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            out[i + j] = ((out[i + j] as u64 + a as u64 * b as u64) % p as u64) as u32;
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Carry-less multiply-and-reduce for characteristic 2: indices are bit
/// masks of the power-basis coordinates, so the whole job is shifts and xors.
fn mul_idx_char2(x: u32, y: u32, modulus_bits: u32, k: u32) -> u32 {
    let mut prod: u64 = 0;
    let (mut a, b) = (x as u64, y as u64);
    let mut shift = 0;
    while a != 0 {
        if a & 1 != 0 {
            prod ^= (b as u64) << shift;
        }
        a >>= 1;
        shift += 1;
    }
    let mbits = modulus_bits as u64;
    let mut d = 63 - prod.leading_zeros() as i64;
    while prod != 0 && d >= k as i64 {
        prod ^= mbits << (d - k as i64);
        d = 63 - prod.leading_zeros() as i64;
    }
    prod as u32
}

fn mul_idx(p: u32, k: u32, modulus: &[u32], x: u32, y: u32) -> u32 {
    if p == 2 {
        let mbits = digits_to_index(2, modulus);
        return mul_idx_char2(x, y, mbits, k);
    }
    if k == 1 {
        return ((x as u64 * y as u64) % p as u64) as u32;
    }
    let xd = index_to_digits(p, x);
    let yd = index_to_digits(p, y);
    let prod = raw_mul(p, &xd, &yd);
    let r = raw_rem(p, &prod, modulus);
    digits_to_index(p, &r)
}

fn pow_idx(p: u32, k: u32, modulus: &[u32], mut base: u32, mut e: u64) -> u32 {
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_idx(p, k, modulus, acc, base);
        }
        base = mul_idx(p, k, modulus, base, base);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d as u64 * d as u64 <= n as u64 {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn build(p: u32, k: u32, modulus: Vec<u32>) -> Result<Field> {
    let q = p.pow(k);
    let gen_index = if q == 2 {
        1
    } else {
        let factors = prime_factors(q - 1);
        let mut found = None;
        for g in 2..q {
            let ok = factors
                .iter()
                .all(|&f| pow_idx(p, k, &modulus, g, ((q - 1) / f) as u64) != 1);
            if ok {
                found = Some(g);
                break;
            }
        }
        found.ok_or_else(|| Error::internal("no multiplicative generator found"))?
    };

    let order = (q - 1) as usize;
    let mut exp = vec![0u32; 2 * order];
    let mut log = vec![u32::MAX; q as usize];
    let mut cur = 1u32;
    for (i, slot) in exp.iter_mut().take(order).enumerate() {
        *slot = cur;
        log[cur as usize] = i as u32;
        cur = mul_idx(p, k, &modulus, cur, gen_index);
    }
    if cur != 1 {
        return Err(Error::internal("generator order is not q-1"));
    }
    for i in 0..order {
        exp[order + i] = exp[i];
    }

    let mut inv = vec![0u32; q as usize];
    for i in 0..order {
        inv[exp[i] as usize] = exp[(order - i) % order];
    }

    let mut sqrt = vec![u32::MAX; q as usize];
    sqrt[0] = 0;
    if p == 2 {
        for i in 0..order {
            // x = g^i, so x^(q/2) squares back to x^q = x.
            let e = (i as u64 * (q as u64 / 2)) % order as u64;
            sqrt[exp[i] as usize] = exp[e as usize];
        }
    } else {
        for i in (0..order).step_by(2) {
            let r1 = exp[i / 2];
            let r2 = exp[i / 2 + order / 2];
            sqrt[exp[i] as usize] = r1.min(r2);
        }
    }

    Ok(Field(Arc::new(FieldData {
        p,
        k,
        q,
        modulus,
        exp,
        log,
        inv,
        sqrt,
        gen_index,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, k: u32) -> Field {
        Field::new(p, k).unwrap()
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(f(2, 2).header(), "field p=2 k=2 modulus=a^2+a+1");
        assert_eq!(f(2, 3).header(), "field p=2 k=3 modulus=a^3+a+1");
        assert_eq!(f(3, 2).header(), "field p=3 k=2 modulus=a^2+1");
        assert_eq!(f(5, 1).header(), "field p=5 k=1");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Field::new(4, 1).is_err());
        assert!(Field::new(1, 1).is_err());
        assert!(Field::new(2, 0).is_err());
        assert!(Field::new(2, 17).is_err());
        assert!(Field::new(257, 2).is_err());
        // (a+1)^2 = a^2+1 over F_2 is reducible.
        assert!(Field::with_modulus(2, 2, &[1, 0, 1]).is_err());
        // Non-monic.
        assert!(Field::with_modulus(3, 2, &[1, 0, 2]).is_err());
    }

    #[test]
    fn accepts_alternative_modulus() {
        // a^3+a^2+1 is the other irreducible cubic over F_2.
        let g = Field::with_modulus(2, 3, &[1, 0, 1, 1]).unwrap();
        assert_eq!(g.header(), "field p=2 k=3 modulus=a^3+a^2+1");
        assert_ne!(g, f(2, 3));
        for x in g.elements() {
            assert_eq!(g.pow(x, 8), x);
        }
    }

    fn check_axioms(field: &Field) {
        let els: Vec<Fq> = field.elements().collect();
        for &x in &els {
            assert_eq!(field.add(x, field.zero()), x);
            assert_eq!(field.mul(x, field.one()), x);
            assert_eq!(field.add(x, field.neg(x)), field.zero());
            assert_eq!(field.pow(x, field.q() as u64), x, "Fermat fails for {x:?}");
            if !x.is_zero() {
                let ix = field.inv(x).unwrap();
                assert_eq!(field.mul(x, ix), field.one());
            }
        }
        for &x in &els {
            for &y in &els {
                assert_eq!(field.add(x, y), field.add(y, x));
                assert_eq!(field.mul(x, y), field.mul(y, x));
                assert_eq!(
                    field.frobenius(field.add(x, y)),
                    field.add(field.frobenius(x), field.frobenius(y))
                );
                for &z in &els {
                    assert_eq!(field.add(field.add(x, y), z), field.add(x, field.add(y, z)));
                    assert_eq!(field.mul(field.mul(x, y), z), field.mul(x, field.mul(y, z)));
                    assert_eq!(
                        field.mul(x, field.add(y, z)),
                        field.add(field.mul(x, y), field.mul(x, z))
                    );
                }
            }
        }
    }

    #[test]
    fn field_axioms_small() {
        check_axioms(&f(2, 1));
        check_axioms(&f(2, 2));
        check_axioms(&f(3, 1));
        check_axioms(&f(3, 2));
        check_axioms(&f(2, 3));
        check_axioms(&f(5, 1));
        check_axioms(&f(7, 1));
    }

    #[test]
    fn square_roots() {
        for field in [f(2, 1), f(2, 2), f(2, 4), f(2, 8)] {
            for x in field.elements() {
                let r = field.sqrt(x).expect("char 2: every element is a square");
                assert_eq!(field.mul(r, r), x);
            }
        }
        for field in [f(3, 1), f(3, 2), f(5, 1), f(5, 2), f(13, 1)] {
            let mut squares = 0;
            for x in field.elements() {
                if let Some(r) = field.sqrt(x) {
                    assert_eq!(field.mul(r, r), x);
                    squares += 1;
                } else {
                    assert!(!field.is_square(x));
                }
            }
            assert_eq!(squares, (field.q() as usize + 1) / 2);
            let nu = field.non_square().unwrap();
            assert!(!field.is_square(nu));
        }
    }

    #[test]
    fn generator_has_full_order() {
        for field in [f(2, 4), f(3, 3), f(7, 2), f(251, 2)] {
            let g = field.generator();
            let mut seen = std::collections::HashSet::new();
            let mut cur = field.one();
            for _ in 0..field.q() - 1 {
                assert!(seen.insert(cur));
                cur = field.mul(cur, g);
            }
            assert_eq!(cur, field.one());
        }
    }

    #[test]
    fn format_parse_roundtrip() {
        for field in [f(2, 3), f(3, 2), f(5, 1), f(2, 4), f(5, 2)] {
            for x in field.elements() {
                let s = field.format_element(x);
                assert_eq!(field.parse_element(&s).unwrap(), x, "text was '{s}'");
            }
        }
        let g = f(3, 2);
        assert_eq!(g.format_element(g.element(5).unwrap()), "a+2");
        assert_eq!(g.format_element(g.element(6).unwrap()), "2*a");
        assert_eq!(g.parse_element("2*a^1").unwrap(), g.element(6).unwrap());
        assert_eq!(g.parse_element(" a + 2 ").unwrap(), g.element(5).unwrap());
        assert!(g.parse_element("a^2").is_err());
        assert!(g.parse_element("b+1").is_err());
        let p5 = f(5, 1);
        assert_eq!(p5.parse_element("7").unwrap(), p5.element(2).unwrap());
        assert!(p5.parse_element("a").is_err());
    }

    #[test]
    fn header_roundtrip() {
        for field in [f(2, 1), f(2, 3), f(3, 2), f(13, 1)] {
            let h = field.header();
            assert_eq!(Field::parse_header(&h).unwrap(), field);
        }
        assert!(Field::parse_header("p=2 k=1").is_err());
        assert!(Field::parse_header("field p=2").is_err());
        assert!(Field::parse_header("field p=2 k=1 modulus=a").is_err());
        assert!(Field::parse_header("field p=2 k=2 junk=1").is_err());
        assert!(Field::parse_header("field p=2 k=2 p=3").is_err());
        let custom = Field::parse_header("field p=2 k=3 modulus=a^3+a^2+1").unwrap();
        assert_eq!(custom.header(), "field p=2 k=3 modulus=a^3+a^2+1");
    }

    #[test]
    fn arithmetic_matches_known_tables() {
        // F_4 = {0, 1, a, a+1} with a^2 = a+1.
        let g = f(2, 2);
        let a = g.element(2).unwrap();
        let a1 = g.element(3).unwrap();
        assert_eq!(g.mul(a, a), a1);
        assert_eq!(g.mul(a, a1), g.one());
        assert_eq!(g.add(a, a1), g.one());
        // F_9 with a^2 = -1: (a+1)^2 = a^2 + 2a + 1 = 2a.
        let h = f(3, 2);
        let ap1 = h.parse_element("a+1").unwrap();
        assert_eq!(h.mul(ap1, ap1), h.parse_element("2*a").unwrap());
    }

    #[test]
    fn large_field_builds() {
        let big = f(251, 2);
        assert_eq!(big.q(), 63001);
        let x = big.element(12345).unwrap();
        let y = big.element(54321).unwrap();
        assert_eq!(big.mul(x, y), big.mul(y, x));
        assert_eq!(big.mul(x, big.inv(x).unwrap()), big.one());
        let two16 = f(2, 16);
        assert_eq!(two16.q(), 65536);
        let x = two16.element(40000).unwrap();
        assert_eq!(two16.pow(x, 65536), x);
        let r = two16.sqrt(x).unwrap();
        assert_eq!(two16.mul(r, r), x);
    }
}
