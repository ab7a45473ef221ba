//! Brute-force reference implementations for differential testing.
//!
//! Everything in this module enumerates exhaustively and checks the defining
//! equations by direct substitution. Nothing is shared with the algebraic
//! solvers beyond field and polynomial arithmetic: no quadratic-ring
//! normalization, no continued fractions, no degree theory. The point is
//! independence; when a clever path and one of these scans agree on small
//! instances, a bug would have to be present in both to go unnoticed.
//!
//! Enumeration order is lexicographic over little-endian coefficient
//! vectors (the constant coefficient of the first unknown ticks fastest),
//! so runs are reproducible and "the first witness found" is well defined.
//! Every entry point takes a state budget and refuses up front when the scan
//! would exceed it.

use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::poly::Poly;

/// Odometer over tuples of polynomials. `widths[i]` is the coefficient
/// vector length of slot i, so slot i ranges over all polynomials of degree
/// at most `widths[i] - 1`, each exactly once.
struct TupleOdometer {
    q: u32,
    digits: Vec<u32>,
    widths: Vec<usize>,
    done: bool,
}

impl TupleOdometer {
    fn new(q: u32, widths: Vec<usize>) -> TupleOdometer {
        let total = widths.iter().sum();
        TupleOdometer { q, digits: vec![0; total], widths, done: false }
    }

    /// Total number of states, for budget checks.
    fn states(q: u32, widths: &[usize]) -> u128 {
        let mut n: u128 = 1;
        for _ in 0..widths.iter().sum::<usize>() {
            n = n.saturating_mul(q as u128);
        }
        n
    }

    /// Materialize slot `i` of the current state as a polynomial.
    fn slot(&self, field: &crate::gf::Field, i: usize) -> Poly {
        let start: usize = self.widths[..i].iter().sum();
        let digits = &self.digits[start..start + self.widths[i]];
        Poly::from_coeffs(field, digits.iter().map(|&d| Fq(d)).collect())
    }

    /// Advance to the next state; false when the space is exhausted.
    fn step(&mut self) -> bool {
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < self.q {
                return true;
            }
            *d = 0;
        }
        self.done = true;
        false
    }
}

fn mat_mul(a: &[Poly; 4], b: &[Poly; 4]) -> [Poly; 4] {
    [
        &(&a[0] * &b[0]) + &(&a[1] * &b[2]),
        &(&a[0] * &b[1]) + &(&a[1] * &b[3]),
        &(&a[2] * &b[0]) + &(&a[3] * &b[2]),
        &(&a[2] * &b[1]) + &(&a[3] * &b[3]),
    ]
}

/// First matrix U (in enumeration order) with entries of degree at most
/// `max_deg` satisfying U*A = B*U and det U a nonzero constant, or None when
/// the whole space contains no such U. Matrices are row-major [p, q, r, s].
pub fn brute_decide(
    a: &[Poly; 4],
    b: &[Poly; 4],
    max_deg: i64,
    budget: u64,
) -> Result<Option<[Poly; 4]>> {
    if max_deg < 0 {
        return Err(Error::invalid("matrix entry degree cap must be nonnegative"));
    }
    let field = a[0].field().clone();
    let width = max_deg as usize + 1;
    let widths = vec![width; 4];
    if TupleOdometer::states(field.q(), &widths) > budget as u128 {
        return Err(Error::BudgetExceeded(format!(
            "brute conjugacy scan needs q^{} states",
            4 * width
        )));
    }
    let mut odo = TupleOdometer::new(field.q(), widths);
    loop {
        let u = [
            odo.slot(&field, 0),
            odo.slot(&field, 1),
            odo.slot(&field, 2),
            odo.slot(&field, 3),
        ];
        // det first: it is the cheaper filter and rejects almost everything.
        let det = &(&u[0] * &u[3]) - &(&u[1] * &u[2]);
        if det.is_unit() && mat_mul(&u, a) == mat_mul(b, &u) {
            return Ok(Some(u));
        }
        if !odo.step() {
            return Ok(None);
        }
    }
}

/// All (u, v) with entry degrees at most `max_deg` satisfying
/// u^2 + b*uv + c*v^2 = d, in enumeration order.
pub fn brute_norm_solutions(
    b: &Poly,
    c: &Poly,
    d: &Poly,
    max_deg: i64,
    budget: u64,
) -> Result<Vec<(Poly, Poly)>> {
    scan_pairs(b, c, max_deg, budget, |n| n == d)
}

/// All (u, v) with entry degrees at most `max_deg` whose norm
/// u^2 + b*uv + c*v^2 is a nonzero constant, i.e. the units of the order,
/// sorted by degree (enumeration order within a degree).
pub fn brute_units(
    b: &Poly,
    c: &Poly,
    max_deg: i64,
    budget: u64,
) -> Result<Vec<(Poly, Poly)>> {
    let mut out = scan_pairs(b, c, max_deg, budget, |n| n.is_unit())?;
    out.sort_by_key(|(u, v)| u.deg().max(v.deg()));
    Ok(out)
}

fn scan_pairs(
    b: &Poly,
    c: &Poly,
    max_deg: i64,
    budget: u64,
    keep: impl Fn(&Poly) -> bool,
) -> Result<Vec<(Poly, Poly)>> {
    if max_deg < 0 {
        return Err(Error::invalid("pair degree cap must be nonnegative"));
    }
    let field = b.field().clone();
    let width = max_deg as usize + 1;
    let widths = vec![width; 2];
    if TupleOdometer::states(field.q(), &widths) > budget as u128 {
        return Err(Error::BudgetExceeded(format!(
            "brute pair scan needs q^{} states",
            2 * width
        )));
    }
    let mut out = Vec::new();
    let mut odo = TupleOdometer::new(field.q(), widths);
    loop {
        let u = odo.slot(&field, 0);
        let v = odo.slot(&field, 1);
        let n = &(&(&u * &u) + &(&(b * &u) * &v)) + &(&(c * &v) * &v);
        if keep(&n) {
            out.push((u, v));
        }
        if !odo.step() {
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    fn p(f: &Field, ints: &[i64]) -> Poly {
        Poly::from_ints(f, ints)
    }

    fn mat(f: &Field, rows: [&[i64]; 4]) -> [Poly; 4] {
        [p(f, rows[0]), p(f, rows[1]), p(f, rows[2]), p(f, rows[3])]
    }

    #[test]
    fn identity_pair_yields_identity() {
        let f = f2();
        let a = mat(&f, [&[0], &[1], &[0, 1], &[0]]);
        let u = brute_decide(&a, &a, 0, 1 << 20).unwrap().unwrap();
        assert_eq!(u, mat(&f, [&[1], &[0], &[0], &[1]]));
    }

    #[test]
    fn worked_pair_has_unique_constant_witness() {
        // A = [[0,1],[x,0]], B = [[x,x+1],[x,x]]. Solving the four entry
        // equations of U*A = B*U over constants by hand leaves p = q = s,
        // r = 0, so the only invertible solution is [[1,1],[0,1]].
        let f = f2();
        let a = mat(&f, [&[0], &[1], &[0, 1], &[0]]);
        let b = mat(&f, [&[0, 1], &[1, 1], &[0, 1], &[0, 1]]);
        let u = brute_decide(&a, &b, 0, 1 << 20).unwrap().unwrap();
        assert_eq!(u, mat(&f, [&[1], &[1], &[0], &[1]]));
        // And it verifies.
        assert_eq!(mat_mul(&u, &a), mat_mul(&b, &u));
    }

    #[test]
    fn trace_mismatch_is_never_conjugate() {
        let f = f2();
        let a = mat(&f, [&[0], &[1], &[0, 1], &[0]]);
        let b = mat(&f, [&[1], &[1], &[0, 1], &[0]]);
        assert_eq!(brute_decide(&a, &b, 2, 1 << 20).unwrap(), None);
    }

    #[test]
    fn norm_solutions_real_order() {
        // u^2 + x*uv + v^2 = 1 over F_2 at degree <= 1: the four unit powers
        // that fit, each checked by substitution below.
        let f = f2();
        let b = Poly::x(&f);
        let c = Poly::one(&f);
        let d = Poly::one(&f);
        let got = brute_norm_solutions(&b, &c, &d, 1, 1 << 20).unwrap();
        let want = vec![
            (p(&f, &[1]), p(&f, &[0])),
            (p(&f, &[0]), p(&f, &[1])),
            (p(&f, &[0, 1]), p(&f, &[1])),
            (p(&f, &[1]), p(&f, &[0, 1])),
        ];
        for (u, v) in &want {
            let n = &(&(u * u) + &(&(&b * u) * v)) + &(&(&c * v) * v);
            assert!(n.is_one());
        }
        assert_eq!(got.len(), want.len());
        for w in &want {
            assert!(got.contains(w), "missing {:?}", w);
        }
    }

    #[test]
    fn zero_rhs_contains_origin() {
        let f = f2();
        let got =
            brute_norm_solutions(&Poly::x(&f), &Poly::one(&f), &Poly::zero(&f), 1, 1 << 20)
                .unwrap();
        assert!(got.contains(&(Poly::zero(&f), Poly::zero(&f))));
    }

    #[test]
    fn imaginary_order_has_no_small_solutions() {
        // b = x, c = x^3 leaves no room for u^2 + x*uv + x^3*v^2 = x.
        let f = f2();
        let b = Poly::x(&f);
        let c = p(&f, &[0, 0, 0, 1]);
        let got = brute_norm_solutions(&b, &c, &Poly::x(&f), 2, 1 << 20).unwrap();
        assert!(got.is_empty());
        // Its units at degree <= 2 are the constants alone.
        let units = brute_units(&b, &c, 2, 1 << 20).unwrap();
        assert_eq!(units, vec![(Poly::one(&f), Poly::zero(&f))]);
    }

    #[test]
    fn budget_is_enforced() {
        let f = f2();
        let a = mat(&f, [&[0], &[1], &[0, 1], &[0]]);
        assert!(matches!(
            brute_decide(&a, &a, 10, 1 << 20),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
