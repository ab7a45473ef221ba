//! Quadratic forms u^2 + b*uv + c*v^2 over F_q[x] and their normalization.
//!
//! Everything downstream (continued fractions, units, the norm equation
//! solver) works with a monic binary quadratic form. The form is the norm
//! form of the F_q[x]-algebra generated by an element s with s^2 = b*s - c:
//! N(u + v*s) = (u + v*s)(u + v*conj(s)) = u^2 + b*uv + c*v^2, since the two
//! conjugate roots sum to b and multiply to c. A [`QuadContext`] holds such
//! a form after two normalization passes, together with the bookkeeping to
//! translate solutions back to the caller's coordinates:
//!
//! 1. A general form a*u^2 + b*uv + c*v^2 = d is monicized by multiplying
//!    through by a and setting u1 = a*u, which turns it into
//!    u1^2 + b*u1*v + (a*c)*v^2 = a*d. The back-map divides by a and only
//!    accepts u1 divisible by a.
//! 2. Changes of variable u = u' + h*v strip c down to a canonical size.
//!    These substitutions never touch b in characteristic 2 (the cross term
//!    acquires 2*h*v^2 = 0) and are used there to shrink deg c below deg b;
//!    in odd characteristic a single substitution h = -b/2 completes the
//!    square, leaving b = 0. The sum of the h's is stored as `shift`.
//!
//! Classification happens during pass 2 and lands in [`CaseKind`]:
//!
//! * `RationalSplit`: z^2 - bz + c has roots in F_q[x]; the form factors into
//!   two linear pieces. In characteristic 2 with b != 0 this is detected by
//!   the reduction loop terminating with c = 0 exactly (a polynomial root of
//!   negative degree would have to vanish); in odd characteristic by the
//!   completed square b^2/4 - c being a perfect square.
//! * `Inseparable`: characteristic 2, b = 0, c not a square. The form is a
//!   perfect square of a linear form over the inseparable extension; norm
//!   equations have at most one solution.
//! * `Real`: the roots are honest Laurent series at infinity, one of positive
//!   and one of negative degree. The unit group is infinite and continued
//!   fractions apply. Normalized shape: deg c < deg b (char 2), or b = 0 with
//!   -c nonsquare of even degree and square leading coefficient (odd).
//! * `Imaginary`: the roots live in no degree-2 series extension (odd degree
//!   discriminant or a leading coefficient obstruction). Norm equations have
//!   finitely many solutions, found by bounded enumeration.

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::poly::{Degree, Poly};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseKind {
    /// The normalized form factors as (u + root*v)(u + (b - root)*v);
    /// `root` is a root of z^2 - bz + c for the normalized b, c.
    RationalSplit { root: Poly },
    /// Characteristic 2, b = 0, c a non-square.
    Inseparable,
    Real,
    Imaginary,
}

#[derive(Clone)]
pub struct QuadContext {
    field: Field,
    /// Normalized middle coefficient: the original b in characteristic 2,
    /// zero in odd characteristic.
    b: Poly,
    /// Normalized constant coefficient.
    c: Poly,
    /// Monicization multiplier (the original leading form coefficient).
    scale: Poly,
    /// Accumulated substitution: u_monic = u_normalized + shift * v.
    shift: Poly,
    case: CaseKind,
}

impl QuadContext {
    /// Context for the form a*u^2 + b*uv + c*v^2 (a nonzero).
    pub fn from_form(a: &Poly, b: &Poly, c: &Poly) -> Result<QuadContext> {
        assert_eq!(a.field(), b.field(), "mixed fields in form");
        assert_eq!(a.field(), c.field(), "mixed fields in form");
        if a.is_zero() {
            return Err(Error::invalid("leading form coefficient must be nonzero"));
        }
        let field = a.field().clone();
        let c1 = a * c;
        if field.characteristic_two() {
            classify_char2(field, b.clone(), c1, a.clone())
        } else {
            classify_odd(field, b.clone(), c1, a.clone())
        }
    }

    /// Context for the monic form u^2 + b*uv + c*v^2.
    pub fn from_monic(b: &Poly, c: &Poly) -> Result<QuadContext> {
        QuadContext::from_form(&Poly::one(b.field()), b, c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn c(&self) -> &Poly {
        &self.c
    }

    pub fn scale(&self) -> &Poly {
        &self.scale
    }

    pub fn shift(&self) -> &Poly {
        &self.shift
    }

    pub fn case(&self) -> &CaseKind {
        &self.case
    }

    pub fn is_real(&self) -> bool {
        matches!(self.case, CaseKind::Real)
    }

    /// Discriminant b^2 - 4c of the normalized form.
    pub fn discriminant(&self) -> Poly {
        let four = Poly::constant(&self.field, self.field.from_int(4));
        &(&self.b * &self.b) - &(&four * &self.c)
    }

    /// Middle coefficient of the monicized form before the shift, i.e. of
    /// the presentation `from_normalized` maps into (up to the scale).
    pub fn monic_b(&self) -> Poly {
        let two = self.field.from_int(2);
        &self.b - &self.shift.scale(two)
    }

    /// Constant coefficient of the monicized pre-shift form.
    pub fn monic_c(&self) -> Poly {
        let h2 = &self.shift * &self.shift;
        &(&self.c + &h2) - &(&self.b * &self.shift)
    }

    /// The norm u^2 + b*uv + c*v^2 in normalized coordinates.
    pub fn norm(&self, u: &Poly, v: &Poly) -> Poly {
        let uu = u * u;
        let buv = &(&self.b * u) * v;
        let cvv = &(&self.c * v) * v;
        &(&uu + &buv) + &cvv
    }

    /// Conjugate of u + v*s: the generator's conjugate is b - s, so the
    /// coordinates move to (u + b*v, -v). Multiplying an element by its
    /// conjugate yields (norm, 0).
    pub fn conj_pair(&self, u: &Poly, v: &Poly) -> (Poly, Poly) {
        (u + &(&self.b * v), -v)
    }

    /// Product (u1 + v1*s)(u2 + v2*s) using s^2 = b*s - c.
    pub fn mul_pair(&self, x: (&Poly, &Poly), y: (&Poly, &Poly)) -> (Poly, Poly) {
        let (u1, v1) = x;
        let (u2, v2) = y;
        let u = &(u1 * u2) - &(&(&self.c * v1) * v2);
        let v = &(&(u1 * v2) + &(u2 * v1)) + &(&(&self.b * v1) * v2);
        (u, v)
    }

    /// The other root of z^2 - bz + c given one of them; the two sum to b.
    pub fn other_root(&self, r: &Poly) -> Poly {
        &self.b - r
    }

    /// Map a root of the normalized z^2 - bz + c back to a root for the
    /// monicized pre-shift presentation. Coordinates transform by
    /// (u, v) -> (u - shift*v, v), so generators (and roots with them) move
    /// the other way: r -> r - shift.
    pub fn root_to_monic(&self, r: &Poly) -> Poly {
        r - &self.shift
    }

    /// Right-hand sides transform as d -> a*d under monicization.
    pub fn transformed_rhs(&self, d: &Poly) -> Poly {
        &self.scale * d
    }

    /// Caller coordinates to normalized coordinates.
    pub fn to_normalized(&self, u: &Poly, v: &Poly) -> (Poly, Poly) {
        (&(&self.scale * u) - &(&self.shift * v), v.clone())
    }

    /// Normalized coordinates back to caller coordinates; None when the
    /// monicization divisibility fails (the normalized solution does not
    /// descend).
    pub fn from_normalized(&self, u_norm: &Poly, v: &Poly) -> Option<(Poly, Poly)> {
        let u1 = u_norm + &(&self.shift * v);
        match u1.div_rem(&self.scale) {
            Ok((q, r)) if r.is_zero() => Some((q, v.clone())),
            _ => None,
        }
    }
}

impl fmt::Debug for QuadContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QuadContext {{ u^2 + ({})uv + ({})v^2, case: {:?}, scale: {}, shift: {} }}",
            self.b, self.c, self.case, self.scale, self.shift
        )
    }
}

fn make(
    field: Field,
    b: Poly,
    c: Poly,
    scale: Poly,
    shift: Poly,
    case: CaseKind,
) -> QuadContext {
    QuadContext { field, b, c, scale, shift, case }
}

/// Characteristic 2: b is invariant under u -> u + h*v, which adds
/// h^2 + b*h to c. Reduce deg c below deg b, peeling leading terms.
fn classify_char2(field: Field, b: Poly, c: Poly, scale: Poly) -> Result<QuadContext> {
    if b.is_zero() {
        let case = match c.poly_sqrt() {
            Some(root) => CaseKind::RationalSplit { root },
            None => CaseKind::Inseparable,
        };
        let shift = Poly::zero(&field);
        return Ok(make(field, b, c, scale, shift, case));
    }
    let db = b.deg().finite().expect("b nonzero");
    let mut c = c;
    let mut shift = Poly::zero(&field);
    let case = loop {
        if c.is_zero() {
            break CaseKind::RationalSplit { root: Poly::zero(&field) };
        }
        let dc = c.deg().finite().expect("c nonzero here");
        let h = if dc >= 2 * db {
            if dc % 2 == 1 {
                break CaseKind::Imaginary;
            }
            if dc > 2 * db {
                // Kill the leading term with a monomial multiple of b:
                // h = rho * x^m * b makes lc(h^2) = lc(c) and deg(b*h) < dc.
                let rho = field
                    .div(field.sqrt(c.leading()).expect("char 2"), b.leading())
                    .expect("b nonzero");
                let m = (dc / 2 - db) as usize;
                Poly::monomial(&field, rho, m) * &b
            } else {
                // deg c = 2 deg b: a constant multiple h = tau*b works only
                // if tau^2 + tau = lc(c)/lc(b)^2 has a root in F_q.
                let b0 = b.leading();
                let c0 = c.leading();
                let b0sq = field.mul(b0, b0);
                let tau = field.elements().find(|&t| {
                    let lhs = field.mul(b0sq, field.add(field.mul(t, t), t));
                    lhs == c0
                });
                match tau {
                    Some(t) => b.scale(t),
                    None => break CaseKind::Imaginary,
                }
            }
        } else if dc >= db {
            // deg b <= deg c < 2 deg b: substitute the quotient of c by b;
            // c = b*Q + r becomes Q^2 + r, strictly smaller.
            let (q, _r) = c.div_rem(&b)?;
            q
        } else {
            break CaseKind::Real;
        };
        let new_c = &(&c + &(&h * &h)) + &(&b * &h);
        debug_assert!(new_c.deg() < c.deg(), "reduction must strictly shrink c");
        c = new_c;
        shift = &shift + &h;
    };
    Ok(make(field, b, c, scale, shift, case))
}

/// Odd characteristic: complete the square. u -> u - (b/2)v zeroes b and
/// sends c to c - b^2/4; rationality means b^2/4 - c is a perfect square.
fn classify_odd(field: Field, b: Poly, c: Poly, scale: Poly) -> Result<QuadContext> {
    let half = field.inv(field.from_int(2)).expect("odd characteristic");
    let h = b.scale(field.neg(half));
    let quarter = field.mul(half, half);
    let cap_c = &(&b * &b).scale(quarter) - &c; // C = b^2/4 - c
    let c_norm = -&cap_c;
    let zero = Poly::zero(&field);
    let case = if cap_c.is_zero() {
        CaseKind::RationalSplit { root: zero.clone() }
    } else if let Some(root) = cap_c.poly_sqrt() {
        CaseKind::RationalSplit { root }
    } else {
        match cap_c.deg() {
            Degree::Fin(d) if d % 2 == 0 && field.is_square(cap_c.leading()) => CaseKind::Real,
            _ => CaseKind::Imaginary,
        }
    };
    Ok(make(field, zero, c_norm, scale, h, case))
}
