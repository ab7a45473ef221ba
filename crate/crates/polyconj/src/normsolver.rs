//! Complete solution of norm equations u^2 + b*uv + c*v^2 = d over F_q[x].
//!
//! The shape of the solution set depends on the case of the form:
//!
//! * split: the form factors into two linear pieces, and solving reduces to
//!   enumerating factorizations of d (distinct roots) or to a polynomial
//!   square root plus an infinite linear family (double root);
//! * inseparable (char 2, b = 0, c not a square): splitting c and d into
//!   even and odd parts turns the equation into two linear conditions with
//!   at most one solution;
//! * imaginary: leading-term analysis bounds deg v by (deg d - deg c)/2, and
//!   u is recovered per v, so the solution set is finite and enumerable;
//! * real: there is a norm-one unit e of positive degree, solutions come in
//!   orbits w*e^l, and a finite window of base solutions w (bounded deg v)
//!   describes everything.
//!
//! In the real case downstream consumers additionally need the orbit members
//! that satisfy divisibility side conditions. Because multiplication by a
//! norm-one unit is invertible modulo any polynomial, the residues of orbit
//! coordinates are purely periodic; [`residue_period`] finds the exact pair
//! period and [`filtered_solutions`] scans one full period per base
//! solution, which covers every orbit member in both directions.
//!
//! All public functions take and return coordinates of the monic form the
//! context was built from (contexts with a non-trivial monicization scale
//! are rejected; monicize first and transform the right-hand side). Internal
//! work happens in the fully normalized coordinates and is mapped back at
//! the boundaries. Every emitted solution is verified by substitution before
//! it is returned; enumeration sizes are checked against an explicit state
//! budget up front.

use crate::error::{Error, Result};
use crate::gf::{Field, Fq};
use crate::poly::Poly;
use crate::quadring::{CaseKind, QuadContext};
use crate::units::pair_key;

/// The infinite part of a split solution set: (u, v) = (u_base + w*u_slope, w)
/// with w ranging over all of F_q[x].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFamily {
    pub u_base: Poly,
    pub u_slope: Poly,
}

impl LinearFamily {
    /// The family member at parameter w.
    pub fn instance(&self, w: &Poly) -> (Poly, Poly) {
        (&self.u_base + &(w * &self.u_slope), w.clone())
    }

    /// Whether a concrete pair lies on this family.
    pub fn contains(&self, u: &Poly, v: &Poly) -> bool {
        u == &(&self.u_base + &(v * &self.u_slope))
    }
}

/// Solutions of a split or inseparable equation: a finite list plus zero or
/// more one-parameter families.
#[derive(Clone, Debug, Default)]
pub struct RationalSolutions {
    pub finite: Vec<(Poly, Poly)>,
    pub families: Vec<LinearFamily>,
}

/// Solutions of a real-case equation: every solution is base * unit^l for a
/// listed base pair and some integer l. The base list is complete for the
/// degree window that generates all orbits (it may also carry a few extra
/// orbit members, which is harmless), and the unit has norm exactly one.
#[derive(Clone, Debug)]
pub struct SolutionFamily {
    ctx: QuadContext,
    base: Vec<(Poly, Poly)>,
    unit: (Poly, Poly),
}

impl SolutionFamily {
    /// Base solutions, in the coordinates of the monic form.
    pub fn base_solutions(&self) -> Vec<(Poly, Poly)> {
        self.base
            .iter()
            .map(|(u, v)| self.to_caller(u, v))
            .collect()
    }

    /// The norm-one unit whose powers generate each orbit, in the
    /// coordinates of the monic form.
    pub fn unit(&self) -> (Poly, Poly) {
        self.to_caller(&self.unit.0, &self.unit.1)
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    /// The orbit member base[i] * unit^l, in the coordinates of the monic
    /// form. Negative l multiplies by the conjugate (= inverse) instead.
    pub fn member(&self, i: usize, l: i64) -> (Poly, Poly) {
        let (u, v) = self.member_normalized(i, l);
        self.to_caller(&u, &v)
    }

    fn member_normalized(&self, i: usize, l: i64) -> (Poly, Poly) {
        let step = if l >= 0 {
            self.unit.clone()
        } else {
            self.ctx.conj_pair(&self.unit.0, &self.unit.1)
        };
        let mut cur = self.base[i].clone();
        for _ in 0..l.unsigned_abs() {
            cur = self.ctx.mul_pair((&cur.0, &cur.1), (&step.0, &step.1));
        }
        cur
    }

    fn to_caller(&self, u: &Poly, v: &Poly) -> (Poly, Poly) {
        self.ctx
            .from_normalized(u, v)
            .expect("scale-one contexts always descend")
    }
}

/// One divisibility side condition on solutions, evaluated in the monic
/// form's coordinates: modulus | coeff_u*u + coeff_v*v.
#[derive(Clone, Debug)]
pub struct DivisibilityCondition {
    pub coeff_u: Poly,
    pub coeff_v: Poly,
    pub modulus: Poly,
}

impl DivisibilityCondition {
    pub fn passes(&self, u: &Poly, v: &Poly) -> bool {
        let combo = &(&self.coeff_u * u) + &(&self.coeff_v * v);
        match combo.div_rem(&self.modulus) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }
}

/// The full solution set, in the shape appropriate for the case.
#[derive(Clone, Debug)]
pub enum SolutionSet {
    Finite(Vec<(Poly, Poly)>),
    Families {
        finite: Vec<(Poly, Poly)>,
        families: Vec<LinearFamily>,
    },
    Real(SolutionFamily),
}

/// Solve u^2 + b*uv + c*v^2 = d for any case, dispatching to the per-case
/// solvers below. `max_steps` caps continued fraction work in the real case.
pub fn solve(
    ctx: &QuadContext,
    d: &Poly,
    max_steps: usize,
    budget: u64,
) -> Result<SolutionSet> {
    match ctx.case() {
        CaseKind::RationalSplit { .. } | CaseKind::Inseparable => {
            let rs = solve_rational(ctx, d, budget)?;
            if rs.families.is_empty() {
                Ok(SolutionSet::Finite(rs.finite))
            } else {
                Ok(SolutionSet::Families {
                    finite: rs.finite,
                    families: rs.families,
                })
            }
        }
        CaseKind::Imaginary => Ok(SolutionSet::Finite(solve_imaginary(ctx, d, budget)?)),
        CaseKind::Real => {
            let unit = crate::units::fundamental_unit(ctx, max_steps)?;
            Ok(SolutionSet::Real(solve_real_base(ctx, d, &unit, budget)?))
        }
    }
}

/// Solve a split or inseparable equation completely.
///
/// Distinct roots: the form is (u + r1*v)(u + r2*v); every solution comes
/// from an ordered factorization d = A*B via v = (B - A)/(r2 - r1),
/// u = A - r1*v, and the d = 0 case degenerates into the two families
/// u = -r_i * v. Double root r: the form is (u + r*v)^2, so d must be a
/// polynomial square e^2 and u + r*v = (+-)e gives one family per sign.
/// Inseparable: splitting into even and odd parts in x (c = c0(x^2) +
/// x*c1(x^2) and likewise d) yields u^2-part + c0*v^2-part = d0 and
/// c1*v^2-part = d1; the second pins v^2-part by exact division, the first
/// then pins u^2-part, and coefficientwise square roots (bijective in
/// characteristic 2) recover u and v, so there is at most one solution.
pub fn solve_rational(ctx: &QuadContext, d: &Poly, budget: u64) -> Result<RationalSolutions> {
    require_monic_scale(ctx)?;
    let f = ctx.field().clone();
    match ctx.case() {
        CaseKind::RationalSplit { root } => {
            let alpha = root.clone();
            let beta = ctx.other_root(root);
            let mut out = RationalSolutions::default();
            if alpha == beta {
                // (u + alpha*v)^2 = d.
                if d.is_zero() {
                    out.families.push(map_family(ctx, &Poly::zero(&f), &-&alpha));
                } else if let Some(e) = d.poly_sqrt() {
                    out.families.push(map_family(ctx, &e, &-&alpha));
                    if !f.characteristic_two() {
                        out.families.push(map_family(ctx, &-&e, &-&alpha));
                    }
                }
                return Ok(out);
            }
            if d.is_zero() {
                out.families.push(map_family(ctx, &Poly::zero(&f), &-&alpha));
                out.families.push(map_family(ctx, &Poly::zero(&f), &-&beta));
                return Ok(out);
            }
            // Ordered factorizations d = A * B over scalars times monic
            // divisors.
            let lc = d.leading();
            let d_monic = d.scale(f.inv(lc)?);
            let states = pow_u128(f.q(), d_monic.deg().finite().unwrap_or(0).max(0) as u32);
            if states > budget as u128 {
                return Err(Error::BudgetExceeded(
                    "divisor scan for the split case is too large".into(),
                ));
            }
            let gap = &beta - &alpha;
            let mut found = Vec::new();
            for m in d_monic.monic_divisors() {
                let other = d_monic.exact_div(&m).expect("divisor divides");
                for gamma in f.elements() {
                    if gamma.is_zero() {
                        continue;
                    }
                    let a_part = m.scale(gamma);
                    let b_part = other.scale(f.mul(lc, f.inv(gamma)?));
                    let diff = &b_part - &a_part;
                    let v = match diff.exact_div(&gap) {
                        Ok(v) => v,
                        Err(_) => continue,
                    };
                    let u = &a_part - &(&alpha * &v);
                    if ctx.norm(&u, &v) == *d {
                        found.push(map_point(ctx, &u, &v));
                    }
                }
            }
            out.finite = dedup_pairs(found);
            Ok(out)
        }
        CaseKind::Inseparable => {
            let (c0, c1) = even_odd_parts(ctx.c());
            let (d0, d1) = even_odd_parts(d);
            debug_assert!(!c1.is_zero(), "inseparable c has a nonzero odd part");
            let mut out = RationalSolutions::default();
            let v_sq = match d1.exact_div(&c1) {
                Ok(v) => v,
                Err(_) => return Ok(out),
            };
            let u_sq = &d0 + &(&c0 * &v_sq);
            let u = coeff_sqrt_expand(&u_sq);
            let v = coeff_sqrt_expand(&v_sq);
            if ctx.norm(&u, &v) == *d {
                out.finite.push(map_point(ctx, &u, &v));
            }
            Ok(out)
        }
        _ => Err(Error::invalid(
            "rational solver needs a split or inseparable form",
        )),
    }
}

/// Solve an imaginary equation completely.
///
/// If deg(c) + 2 deg(v) exceeded deg(d), the top term of c*v^2 would have to
/// cancel against u^2 or b*uv, and in every imaginary shape that cancellation
/// is impossible: an odd deg(c) breaks the parity of 2 deg(u), a non-square
/// obstruction blocks the leading coefficients in odd characteristic, and in
/// the boundary shape deg(c) = 2 deg(b) a cancellation would solve exactly
/// the constant equation whose insolubility made the form imaginary. So
/// deg v <= (deg d - deg c)/2 (one extra degree of slack is enumerated
/// anyway), and u is recovered per v.
pub fn solve_imaginary(ctx: &QuadContext, d: &Poly, budget: u64) -> Result<Vec<(Poly, Poly)>> {
    require_monic_scale(ctx)?;
    if ctx.case() != &CaseKind::Imaginary {
        return Err(Error::invalid("imaginary solver needs an imaginary form"));
    }
    let f = ctx.field().clone();
    if d.is_zero() {
        // Imaginary forms are anisotropic.
        return Ok(vec![(Poly::zero(&f), Poly::zero(&f))]);
    }
    let dd = d.deg().finite().expect("nonzero");
    let dc = ctx.c().deg().finite().expect("imaginary c is nonzero");
    let bound = (dd - dc).div_euclid(2) + 1;
    let mut found = Vec::new();
    for v in bounded_polys(&f, bound, budget)? {
        for u in recover_u(ctx, d, &v) {
            if ctx.norm(&u, &v) == *d {
                found.push(map_point(ctx, &u, &v));
            }
        }
    }
    Ok(dedup_pairs(found))
}

/// Find the base solutions of a real-case equation.
///
/// `unit` is the fundamental unit of the order (as returned by
/// [`crate::units::fundamental_unit`] for this context); it is squared here
/// if its norm is -1, since only norm-one units map solutions to solutions.
/// Writing k for the degree of the resulting generator, every orbit contains
/// a representative with deg v <= max(deg d, k) - deg b (characteristic 2)
/// or deg v <= max(k-1, deg d) - deg(c)/2 (odd characteristic), so
/// enumerating v in that window with per-v recovery of u lists a generating
/// set for all solutions.
pub fn solve_real_base(
    ctx: &QuadContext,
    d: &Poly,
    unit: &(Poly, Poly),
    budget: u64,
) -> Result<SolutionFamily> {
    require_monic_scale(ctx)?;
    if ctx.case() != &CaseKind::Real {
        return Err(Error::invalid("real solver needs a real form"));
    }
    let f = ctx.field().clone();
    let (u0, v0) = ctx.to_normalized(&unit.0, &unit.1);
    let norm = ctx
        .norm(&u0, &v0)
        .constant_value()
        .ok_or_else(|| Error::invalid("generator must be a unit of the order"))?;
    let one = (u0.clone(), v0.clone());
    let gen = if norm == f.one() {
        one
    } else if norm == f.neg(f.one()) {
        ctx.mul_pair((&u0, &v0), (&u0, &v0))
    } else {
        return Err(Error::invalid("generator must have norm +-1"));
    };
    let fam_ctx = ctx.clone();
    if d.is_zero() {
        // Real forms are anisotropic.
        return Ok(SolutionFamily {
            ctx: fam_ctx,
            base: vec![(Poly::zero(&f), Poly::zero(&f))],
            unit: gen,
        });
    }
    let dd = d.deg().finite().expect("nonzero");
    let dv_gen = gen
        .1
        .deg()
        .finite()
        .ok_or_else(|| Error::invalid("generator must have a nonzero series part"))?;
    let bound = if f.characteristic_two() {
        let db = ctx.b().deg().finite().expect("real char-2 b is nonzero");
        let k = dv_gen + db;
        dd.max(k) - db
    } else {
        let half_dc = ctx.c().deg().finite().expect("real c is nonzero") / 2;
        let k = dv_gen + half_dc;
        (k - 1).max(dd) - half_dc
    };
    let mut found = Vec::new();
    for v in bounded_polys(&f, bound, budget)? {
        for u in recover_u(ctx, d, &v) {
            if ctx.norm(&u, &v) == *d {
                found.push((u, v.clone()));
            }
        }
    }
    found.sort_by_cached_key(pair_key);
    found.dedup();
    Ok(SolutionFamily {
        ctx: fam_ctx,
        base: found,
        unit: gen,
    })
}

/// The exact period of the orbit coordinates modulo `modulus`: the least
/// T >= 1 with (u_{l+T}, v_{l+T}) = (u_l, v_l) mod modulus for all l, where
/// (u_l, v_l) are the coordinates of unit^l. Because the unit has norm one
/// it is invertible modulo everything, so the residue sequence is purely
/// periodic and the period is the first return to the starting state (1, 0).
pub fn residue_period(
    ctx: &QuadContext,
    unit: &(Poly, Poly),
    modulus: &Poly,
    budget: u64,
) -> Result<u64> {
    require_monic_scale(ctx)?;
    if modulus.is_zero() {
        return Err(Error::invalid("residue period needs a nonzero modulus"));
    }
    if modulus.is_constant() {
        return Ok(1);
    }
    let f = ctx.field().clone();
    let (u0, v0) = ctx.to_normalized(&unit.0, &unit.1);
    if !ctx.norm(&u0, &v0).is_one() {
        return Err(Error::invalid("residue period needs a norm-one unit"));
    }
    let dp = modulus.deg().finite().unwrap() as u32;
    let state_space = pow_u128(f.q(), 2 * dp);
    let start = (Poly::one(&f), Poly::zero(&f));
    let mut cur = start.clone();
    let mut steps: u64 = 0;
    loop {
        let (su, sv) = ctx.mul_pair((&cur.0, &cur.1), (&u0, &v0));
        cur = (rem(&su, modulus), rem(&sv, modulus));
        steps += 1;
        if cur == start {
            break;
        }
        if steps as u128 >= state_space {
            return Err(Error::internal(
                "residue state space exhausted without a period",
            ));
        }
        if steps >= budget {
            return Err(Error::BudgetExceeded(
                "residue period exceeds the state budget".into(),
            ));
        }
    }
    #[cfg(debug_assertions)]
    if steps as u128 > pow_u128(f.q(), dp) {
        eprintln!(
            "note: residue period {} exceeds q^deg(P) = {} for modulus {}",
            steps,
            pow_u128(f.q(), dp),
            modulus
        );
    }
    Ok(steps)
}

/// All orbit members passing every divisibility condition, with l ranging
/// over one full combined period per base solution. The residues of the
/// condition values are periodic in l with period dividing the pair period
/// of each modulus, and pure periodicity covers negative l too, so the
/// returned set represents every solution class. Output is deduplicated and
/// sorted, in the monic form's coordinates.
pub fn filtered_solutions(
    fam: &SolutionFamily,
    conds: &[DivisibilityCondition],
    budget: u64,
) -> Result<Vec<(Poly, Poly)>> {
    if fam.base.is_empty() {
        return Ok(Vec::new());
    }
    let unit_caller = fam.unit();
    let mut period: u128 = 1;
    for cond in conds {
        let t = residue_period(&fam.ctx, &unit_caller, &cond.modulus, budget)?;
        period = lcm_u128(period, t as u128);
        if period > budget as u128 {
            return Err(Error::BudgetExceeded(
                "combined residue period exceeds the state budget".into(),
            ));
        }
    }
    let total = period.saturating_mul(fam.base.len() as u128);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded(
            "orbit scan exceeds the state budget".into(),
        ));
    }
    let mut out = Vec::new();
    for base in &fam.base {
        let mut cur = base.clone();
        for _ in 0..period {
            let (u, v) = fam.to_caller(&cur.0, &cur.1);
            if conds.iter().all(|c| c.passes(&u, &v)) {
                out.push((u, v));
            }
            cur = fam
                .ctx
                .mul_pair((&cur.0, &cur.1), (&fam.unit.0, &fam.unit.1));
        }
    }
    Ok(dedup_pairs(out))
}

/// First solution of the monic equation that passes every condition, found
/// by scanning v ascending by degree (odometer order inside each degree)
/// with per-v recovery of u. The scan stops at the first hit, so it can
/// confirm solvable instances whose complete solution structure (fundamental
/// unit, orbit periods, full enumeration windows) is out of budget; it can
/// never refute, and exhausting the budget without a hit is an error, not a
/// no. `budget` caps the number of v candidates examined.
pub fn scan_solutions(
    ctx: &QuadContext,
    d: &Poly,
    conds: &[DivisibilityCondition],
    budget: u64,
) -> Result<Option<(Poly, Poly)>> {
    require_monic_scale(ctx)?;
    let f = ctx.field().clone();
    let q = f.q() as u128;
    let mut spent: u64 = 0;
    let mut deg: i64 = -1;
    loop {
        let block: u128 = if deg < 0 {
            1
        } else {
            (q - 1).saturating_mul(q.saturating_pow(deg.min(127) as u32))
        };
        let mut i: u128 = 0;
        while i < block {
            spent += 1;
            if spent > budget {
                return Err(Error::BudgetExceeded(
                    "first-hit scan exhausted the state budget without a solution".into(),
                ));
            }
            let v = nth_poly_of_degree(&f, deg, i);
            let mut hits: Vec<(Poly, Poly)> = recover_u(ctx, d, &v)
                .into_iter()
                .filter(|u| ctx.norm(u, &v) == *d)
                .map(|u| map_point(ctx, &u, &v))
                .collect();
            hits.sort_by_cached_key(pair_key);
            for (u, w) in hits {
                if conds.iter().all(|c| c.passes(&u, &w)) {
                    return Ok(Some((u, w)));
                }
            }
            i += 1;
        }
        deg += 1;
    }
}

/// The i-th polynomial of exact degree `deg` (negative deg: the zero
/// polynomial): the lower coefficients are the base-q digits of i, the
/// leading coefficient steps through 1..q slowest.
fn nth_poly_of_degree(f: &Field, deg: i64, i: u128) -> Poly {
    if deg < 0 {
        return Poly::zero(f);
    }
    let q = f.q() as u128;
    let mut coeffs = Vec::with_capacity(deg as usize + 1);
    let mut n = i;
    for _ in 0..deg {
        coeffs.push(Fq((n % q) as u32));
        n /= q;
    }
    coeffs.push(Fq(1 + (n % (q - 1)) as u32));
    Poly::from_coeffs(f, coeffs)
}

/// Recover all u with u^2 + b*uv + c*v^2 = d for a fixed v, in normalized
/// coordinates. In characteristic 2 this is the additive equation
/// u^2 + (bv)u = d + cv^2; in odd characteristic b = 0 leaves u^2 = d - cv^2
/// and a polynomial square root.
pub(crate) fn recover_u(ctx: &QuadContext, d: &Poly, v: &Poly) -> Vec<Poly> {
    let f = ctx.field();
    if f.characteristic_two() {
        let g = ctx.b() * v;
        let rhs = d + &(&(ctx.c() * v) * v);
        char2_additive_roots(&g, &rhs)
    } else {
        let rhs = d - &(&(ctx.c() * v) * v);
        match rhs.poly_sqrt() {
            Some(u) if u.is_zero() => vec![u],
            Some(u) => vec![u.clone(), -&u],
            None => Vec::new(),
        }
    }
}

/// All u in F_q[x] with u^2 + g*u = rhs, characteristic 2. The map
/// u -> u^2 + g*u is F_2-linear with kernel {0, g}, so there are zero, one
/// (g = 0) or two solutions; a particular one is found by Gaussian
/// elimination over F_2 on coefficient digits, using the degree bound
/// deg u <= max(deg g, deg(rhs)/2) + 1 from leading terms.
fn char2_additive_roots(g: &Poly, rhs: &Poly) -> Vec<Poly> {
    let f = g.field().clone();
    if g.is_zero() {
        return rhs.poly_sqrt().into_iter().collect();
    }
    if rhs.is_zero() {
        return vec![Poly::zero(&f), g.clone()];
    }
    let dg = g.deg().finite().unwrap();
    let dr = rhs.deg().finite().unwrap();
    let bound = (dg.max((dr + 1) / 2) + 1) as usize;
    let k = f.k() as usize;
    let unknowns = (bound + 1) * k;
    let out_len = (2 * bound).max(dg as usize + bound).max(dr as usize) + 1;
    let rows = out_len * k;
    let words = unknowns / 64 + 2;
    let mut matrix = vec![vec![0u64; words]; rows];
    for i in 0..=bound {
        for j in 0..k {
            let mut digits = vec![0u32; k];
            digits[j] = 1;
            let basis = f.from_digits(&digits).expect("unit digit vector");
            let e = Poly::monomial(&f, basis, i);
            let image = &(&e * &e) + &(g * &e);
            let col = i * k + j;
            set_column_bits(&mut matrix, &f, &image, col, k);
        }
    }
    set_column_bits(&mut matrix, &f, rhs, unknowns, k);
    match gf2_solve(&mut matrix, unknowns) {
        None => Vec::new(),
        Some(bits) => {
            let mut coeffs = Vec::with_capacity(bound + 1);
            for i in 0..=bound {
                let digits: Vec<u32> =
                    (0..k).map(|j| u32::from(bits[i * k + j])).collect();
                coeffs.push(f.from_digits(&digits).expect("binary digits"));
            }
            let u = Poly::from_coeffs(&f, coeffs);
            let other = &u + g;
            if other == u {
                vec![u]
            } else {
                vec![u, other]
            }
        }
    }
}

/// Scatter the F_2 digits of a polynomial's coefficients into column `col`
/// of the row-major GF(2) matrix.
fn set_column_bits(matrix: &mut [Vec<u64>], f: &Field, p: &Poly, col: usize, k: usize) {
    for (i, &coef) in p.coeffs().iter().enumerate() {
        for (j, &digit) in f.digits(coef).iter().enumerate() {
            if digit != 0 {
                let row = i * k + j;
                matrix[row][col / 64] |= 1u64 << (col % 64);
            }
        }
    }
}

/// Solve the augmented GF(2) system in place (last logical column is the
/// right-hand side). Returns one solution with free variables set to zero,
/// or None when inconsistent.
fn gf2_solve(matrix: &mut [Vec<u64>], unknowns: usize) -> Option<Vec<bool>> {
    let rows = matrix.len();
    let get = |m: &[Vec<u64>], r: usize, c: usize| m[r][c / 64] >> (c % 64) & 1 == 1;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..unknowns {
        let Some(p) = (rank..rows).find(|&r| get(matrix, r, col)) else {
            continue;
        };
        matrix.swap(rank, p);
        let pivot_row = matrix[rank].clone();
        for (r, row) in matrix.iter_mut().enumerate() {
            if r != rank && row[col / 64] >> (col % 64) & 1 == 1 {
                for (w, pw) in row.iter_mut().zip(&pivot_row) {
                    *w ^= pw;
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    // Any leftover row with a nonzero right-hand side is a contradiction.
    for r in rank..rows {
        if get(matrix, r, unknowns) {
            return None;
        }
    }
    let mut bits = vec![false; unknowns];
    for &(r, c) in &pivots {
        bits[c] = get(matrix, r, unknowns);
    }
    Some(bits)
}

/// p(x) = even(x^2) + x * odd(x^2); returns (even, odd) in the halved
/// variable.
fn even_odd_parts(p: &Poly) -> (Poly, Poly) {
    let f = p.field();
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (i, &c) in p.coeffs().iter().enumerate() {
        if i % 2 == 0 {
            even.push(c);
        } else {
            odd.push(c);
        }
    }
    (Poly::from_coeffs(f, even), Poly::from_coeffs(f, odd))
}

/// Given w(y), the unique u(x) with u(x)^2 = w(x^2) in characteristic 2:
/// coefficientwise square roots spread back over x.
fn coeff_sqrt_expand(w: &Poly) -> Poly {
    let f = w.field();
    let coeffs = w
        .coeffs()
        .iter()
        .map(|&c| f.sqrt(c).expect("squaring is bijective in characteristic 2"))
        .collect();
    Poly::from_coeffs(f, coeffs)
}

fn require_monic_scale(ctx: &QuadContext) -> Result<()> {
    if ctx.scale().is_one() {
        Ok(())
    } else {
        Err(Error::invalid(
            "norm solvers work on monic forms; monicize and transform the right-hand side first",
        ))
    }
}

/// Map a normalized solution to the monic form's coordinates.
fn map_point(ctx: &QuadContext, u: &Poly, v: &Poly) -> (Poly, Poly) {
    ctx.from_normalized(u, v)
        .expect("scale-one contexts always descend")
}

/// Map a normalized family u = s + t*w to the monic form's coordinates:
/// the shift substitution keeps it linear with slope t + shift.
fn map_family(ctx: &QuadContext, s: &Poly, t: &Poly) -> LinearFamily {
    LinearFamily {
        u_base: map_point(ctx, s, &Poly::zero(ctx.field())).0,
        u_slope: t + ctx.shift(),
    }
}

/// All polynomials of degree <= bound, little-endian odometer order, after a
/// budget check. A negative bound leaves only the zero polynomial.
pub(crate) fn bounded_polys(f: &Field, bound: i64, budget: u64) -> Result<Vec<Poly>> {
    let width = (bound + 1).max(0) as u32;
    let states = pow_u128(f.q(), width);
    if states > budget as u128 {
        return Err(Error::BudgetExceeded(format!(
            "enumeration of q^{} polynomials exceeds the state budget",
            width
        )));
    }
    let mut out = Vec::with_capacity(states as usize);
    let mut digits = vec![0u32; width as usize];
    loop {
        out.push(Poly::from_coeffs(
            f,
            digits.iter().map(|&d| Fq(d)).collect(),
        ));
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return Ok(out);
            }
            digits[pos] += 1;
            if digits[pos] < f.q() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

fn dedup_pairs(mut v: Vec<(Poly, Poly)>) -> Vec<(Poly, Poly)> {
    v.sort_by_cached_key(pair_key);
    v.dedup();
    v
}

fn rem(p: &Poly, m: &Poly) -> Poly {
    p.div_rem(m).expect("nonzero modulus").1
}

fn pow_u128(q: u32, e: u32) -> u128 {
    let mut n: u128 = 1;
    for _ in 0..e {
        n = n.saturating_mul(q as u128);
    }
    n
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm_u128(a: u128, b: u128) -> u128 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd_u128(a, b)).saturating_mul(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::oracle::brute_norm_solutions;
    use proptest::prelude::*;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    fn f3() -> Field {
        Field::new(3, 1).unwrap()
    }

    fn p(f: &Field, ints: &[i64]) -> Poly {
        Poly::from_ints(f, ints)
    }

    const BUDGET: u64 = 1 << 22;

    /// The caller-coordinate norm, straight from the monic form's (b, c).
    fn norm_bc(b: &Poly, c: &Poly, u: &Poly, v: &Poly) -> Poly {
        &(&(u * u) + &(&(b * u) * v)) + &(&(c * v) * v)
    }

    /// Check the solver's finite output against the exhaustive scan inside a
    /// degree cap: everything it returns satisfies the equation, and
    /// everything the scan finds is either listed or on a family.
    fn check_against_brute(
        b: &Poly,
        c: &Poly,
        d: &Poly,
        finite: &[(Poly, Poly)],
        families: &[LinearFamily],
        cap: i64,
    ) {
        for (u, v) in finite {
            assert_eq!(norm_bc(b, c, u, v), *d, "bad solution ({u}, {v})");
        }
        for fam in families {
            for w in [p(b.field(), &[0]), p(b.field(), &[1]), p(b.field(), &[0, 1])] {
                let (u, v) = fam.instance(&w);
                assert_eq!(norm_bc(b, c, &u, &v), *d, "bad family member at {w}");
            }
        }
        let brute = brute_norm_solutions(b, c, d, cap, 1 << 24).unwrap();
        for (u, v) in &brute {
            let listed = finite.contains(&(u.clone(), v.clone()));
            let on_family = families.iter().any(|fam| fam.contains(u, v));
            assert!(listed || on_family, "missed ({u}, {v})");
        }
    }

    #[test]
    fn split_distinct_roots_factored() {
        // b = 1, c = x^2 + x over F_2 factors as (u + x*v)(u + (x+1)*v).
        let f = f2();
        let b = Poly::one(&f);
        let c = p(&f, &[0, 1, 1]);
        let ctx = QuadContext::from_monic(&b, &c).unwrap();
        assert!(matches!(ctx.case(), CaseKind::RationalSplit { .. }));
        for d in [Poly::x(&f), p(&f, &[1, 1]), p(&f, &[0, 0, 1]), Poly::one(&f)] {
            let rs = solve_rational(&ctx, &d, BUDGET).unwrap();
            assert!(rs.families.is_empty());
            check_against_brute(&b, &c, &d, &rs.finite, &[], 4);
        }
    }

    #[test]
    fn split_zero_rhs_gives_two_families() {
        let f = f2();
        let ctx = QuadContext::from_monic(&Poly::one(&f), &p(&f, &[0, 1, 1])).unwrap();
        let rs = solve_rational(&ctx, &Poly::zero(&f), BUDGET).unwrap();
        assert_eq!(rs.families.len(), 2);
        assert!(rs.finite.is_empty());
        // The families include the origin and are genuine solutions.
        let zero = Poly::zero(&f);
        assert!(rs.families.iter().all(|fam| fam.contains(&zero, &zero)));
        check_against_brute(
            &Poly::one(&f),
            &p(&f, &[0, 1, 1]),
            &zero,
            &[],
            &rs.families,
            3,
        );
    }

    #[test]
    fn split_double_root_odd_char() {
        // u^2 + 2x*uv + x^2*v^2 = (u + xv)^2 over F_3.
        let f = f3();
        let b = p(&f, &[0, 2]);
        let c = p(&f, &[0, 0, 1]);
        let ctx = QuadContext::from_monic(&b, &c).unwrap();
        let square = p(&f, &[1, 2, 1]); // (x+1)^2
        let rs = solve_rational(&ctx, &square, BUDGET).unwrap();
        assert_eq!(rs.families.len(), 2);
        check_against_brute(&b, &c, &square, &[], &rs.families, 3);
        // A non-square right side has no solutions at all.
        let rs = solve_rational(&ctx, &Poly::x(&f), BUDGET).unwrap();
        assert!(rs.finite.is_empty() && rs.families.is_empty());
        check_against_brute(&b, &c, &Poly::x(&f), &[], &[], 3);
    }

    #[test]
    fn inseparable_has_at_most_one_solution() {
        // c = x^2 + x is not a square over F_2.
        let f = f2();
        let zero = Poly::zero(&f);
        let c = p(&f, &[0, 1, 1]);
        let ctx = QuadContext::from_monic(&zero, &c).unwrap();
        assert_eq!(ctx.case(), &CaseKind::Inseparable);
        // d = 1: even part 1, odd part 0, so v = 0 and u = 1.
        let rs = solve_rational(&ctx, &Poly::one(&f), BUDGET).unwrap();
        assert_eq!(rs.finite, vec![(Poly::one(&f), zero.clone())]);
        // d = x: odd part 1 forces the v-part to 1/c1 = 1, u = x.
        let rs = solve_rational(&ctx, &Poly::x(&f), BUDGET).unwrap();
        assert_eq!(rs.finite, vec![(Poly::x(&f), Poly::one(&f))]);
        // d = x^3 leaves no solution: v-part would be x/1 = x, u-part
        // x^2*... check by the substitution filter instead of by hand.
        let rs = solve_rational(&ctx, &p(&f, &[0, 0, 0, 1]), BUDGET).unwrap();
        check_against_brute(&zero, &c, &p(&f, &[0, 0, 0, 1]), &rs.finite, &[], 4);
    }

    #[test]
    fn imaginary_char2_frozen() {
        let f = f2();
        let b = Poly::x(&f);
        let c = p(&f, &[0, 0, 0, 1]);
        let ctx = QuadContext::from_monic(&b, &c).unwrap();
        assert_eq!(ctx.case(), &CaseKind::Imaginary);
        let one = solve_imaginary(&ctx, &Poly::one(&f), BUDGET).unwrap();
        assert_eq!(one, vec![(Poly::one(&f), Poly::zero(&f))]);
        let cubic = solve_imaginary(&ctx, &c, BUDGET).unwrap();
        assert!(cubic.contains(&(Poly::zero(&f), Poly::one(&f))));
        check_against_brute(&b, &c, &c, &cubic, &[], 3);
        let linear = solve_imaginary(&ctx, &Poly::x(&f), BUDGET).unwrap();
        assert!(linear.is_empty());
        check_against_brute(&b, &c, &Poly::x(&f), &[], &[], 3);
    }

    #[test]
    fn imaginary_odd_char_vs_brute() {
        let f = f3();
        let zero = Poly::zero(&f);
        let c = p(&f, &[0, 0, 0, 1]);
        let ctx = QuadContext::from_monic(&zero, &c).unwrap();
        assert_eq!(ctx.case(), &CaseKind::Imaginary);
        for ints in [&[1][..], &[0, 1], &[1, 0, 0, 1], &[2, 1, 1]] {
            let d = p(&f, ints);
            let got = solve_imaginary(&ctx, &d, BUDGET).unwrap();
            check_against_brute(&zero, &c, &d, &got, &[], 3);
        }
    }

    #[test]
    fn real_char2_base_and_orbit() {
        let f = f2();
        let b = Poly::x(&f);
        let c = Poly::one(&f);
        let ctx = QuadContext::from_monic(&b, &c).unwrap();
        let unit = crate::units::fundamental_unit(&ctx, 1000).unwrap();
        // d = 1: the three window units found by hand.
        let fam = solve_real_base(&ctx, &Poly::one(&f), &unit, BUDGET).unwrap();
        let base = fam.base_solutions();
        assert!(base.contains(&(Poly::one(&f), Poly::zero(&f))));
        assert!(base.contains(&(Poly::zero(&f), Poly::one(&f))));
        assert!(base.contains(&(Poly::x(&f), Poly::one(&f))));
        // Orbit closure: members at l = -2..2 are all solutions, and the
        // brute scan at degree <= 2 is covered by them.
        let mut seen = Vec::new();
        for i in 0..fam.len() {
            for l in -2..=2 {
                let (u, v) = fam.member(i, l);
                assert!(norm_bc(&b, &c, &u, &v).is_one());
                seen.push((u, v));
            }
        }
        for (u, v) in brute_norm_solutions(&b, &c, &Poly::one(&f), 2, 1 << 20).unwrap() {
            assert!(seen.contains(&(u.clone(), v.clone())), "missed ({u}, {v})");
        }
        // d = x^2 + x + 1 is not represented: empty base, and the brute
        // scan agrees out to degree 3.
        let fam = solve_real_base(&ctx, &p(&f, &[1, 1, 1]), &unit, BUDGET).unwrap();
        assert!(fam.is_empty());
        let brute = brute_norm_solutions(&b, &c, &p(&f, &[1, 1, 1]), 3, 1 << 20).unwrap();
        assert!(brute.is_empty());
    }

    #[test]
    fn real_odd_char_squares_negative_norm_generator() {
        let f = f3();
        let c = p(&f, &[-1, 0, -1]); // u^2 - (x^2+1) v^2
        let ctx = QuadContext::from_monic(&Poly::zero(&f), &c).unwrap();
        let unit = crate::units::fundamental_unit(&ctx, 1000).unwrap();
        assert_eq!(
            norm_bc(&Poly::zero(&f), &c, &unit.0, &unit.1),
            -&Poly::one(&f),
            "fundamental unit here has norm -1"
        );
        let fam = solve_real_base(&ctx, &Poly::one(&f), &unit, BUDGET).unwrap();
        let (gu, gv) = fam.unit();
        assert!(norm_bc(&Poly::zero(&f), &c, &gu, &gv).is_one());
        let base = fam.base_solutions();
        assert_eq!(
            base,
            vec![
                (Poly::one(&f), Poly::zero(&f)),
                (p(&f, &[2]), Poly::zero(&f)),
            ]
        );
        // Desk-scale completeness: orbit members within |l| <= 2 cover the
        // brute scan at degree <= 2.
        let mut seen = Vec::new();
        for i in 0..fam.len() {
            for l in -2..=2 {
                seen.push(fam.member(i, l));
            }
        }
        for sol in brute_norm_solutions(&Poly::zero(&f), &c, &Poly::one(&f), 2, 1 << 20).unwrap()
        {
            assert!(seen.contains(&sol), "missed {:?}", sol);
        }
    }

    #[test]
    fn residue_period_frozen_values() {
        let f = f2();
        let ctx = QuadContext::from_monic(&Poly::x(&f), &Poly::one(&f)).unwrap();
        let unit = (Poly::x(&f), Poly::one(&f));
        assert_eq!(
            residue_period(&ctx, &unit, &Poly::x(&f), BUDGET).unwrap(),
            2
        );
        assert_eq!(
            residue_period(&ctx, &unit, &Poly::one(&f), BUDGET).unwrap(),
            1
        );
        let m = p(&f, &[1, 1, 1]);
        let t = residue_period(&ctx, &unit, &m, BUDGET).unwrap();
        assert!(t >= 1 && (t as u128) <= pow_u128(2, 4));
        // The defining property, checked directly on unit powers.
        let fam = SolutionFamily {
            ctx: ctx.clone(),
            base: vec![(Poly::one(&f), Poly::zero(&f))],
            unit: ctx.to_normalized(&unit.0, &unit.1),
        };
        for l in 0..2 * t {
            let (u1, v1) = fam.member(0, l as i64);
            let (u2, v2) = fam.member(0, (l + t) as i64);
            assert_eq!(rem(&u1, &m), rem(&u2, &m));
            assert_eq!(rem(&v1, &m), rem(&v2, &m));
        }
        assert!(residue_period(&ctx, &unit, &Poly::zero(&f), BUDGET).is_err());
    }

    #[test]
    fn filtering_with_trivial_conditions_keeps_everything() {
        let f = f2();
        let ctx = QuadContext::from_monic(&Poly::x(&f), &Poly::one(&f)).unwrap();
        let unit = crate::units::fundamental_unit(&ctx, 1000).unwrap();
        let fam = solve_real_base(&ctx, &Poly::one(&f), &unit, BUDGET).unwrap();
        let all = filtered_solutions(&fam, &[], BUDGET).unwrap();
        assert_eq!(all.len(), fam.len());
        let unit_mod = DivisibilityCondition {
            coeff_u: Poly::one(&f),
            coeff_v: Poly::zero(&f),
            modulus: Poly::one(&f),
        };
        let same = filtered_solutions(&fam, &[unit_mod], BUDGET).unwrap();
        assert_eq!(same, all);
    }

    #[test]
    fn filtering_by_divisibility_selects_the_right_orbit_members() {
        let f = f2();
        let b = Poly::x(&f);
        let c = Poly::one(&f);
        let ctx = QuadContext::from_monic(&b, &c).unwrap();
        let unit = crate::units::fundamental_unit(&ctx, 1000).unwrap();
        let d = p(&f, &[0, 0, 1]);
        let fam = solve_real_base(&ctx, &d, &unit, BUDGET).unwrap();
        assert!(!fam.is_empty());
        // Ask for x | u.
        let cond = DivisibilityCondition {
            coeff_u: Poly::one(&f),
            coeff_v: Poly::zero(&f),
            modulus: Poly::x(&f),
        };
        let got = filtered_solutions(&fam, &[cond.clone()], BUDGET).unwrap();
        assert!(!got.is_empty());
        for (u, v) in &got {
            assert!(cond.passes(u, v));
            assert_eq!(norm_bc(&b, &c, u, v), d);
        }
        // Cross-check against a direct scan of the same orbit window.
        let t = residue_period(&ctx, &fam.unit(), &Poly::x(&f), BUDGET).unwrap();
        let mut direct = Vec::new();
        for i in 0..fam.len() {
            for l in 0..t {
                let (u, v) = fam.member(i, l as i64);
                if cond.passes(&u, &v) {
                    direct.push((u, v));
                }
            }
        }
        assert_eq!(dedup_pairs(direct), got);
    }

    #[test]
    fn first_hit_scan_confirms_without_a_complete_solve() {
        let f = f2();
        let b = Poly::x(&f);
        let c = Poly::one(&f);
        let ctx = QuadContext::from_monic(&b, &c).unwrap();
        let d = p(&f, &[0, 0, 1]);
        // No conditions: the scan returns a verified solution quickly.
        let (u, v) = scan_solutions(&ctx, &d, &[], BUDGET).unwrap().unwrap();
        assert_eq!(norm_bc(&b, &c, &u, &v), d);
        // A divisibility condition is honored by the hit.
        let cond = DivisibilityCondition {
            coeff_u: Poly::one(&f),
            coeff_v: Poly::zero(&f),
            modulus: Poly::x(&f),
        };
        let (u, v) = scan_solutions(&ctx, &d, &[cond.clone()], BUDGET)
            .unwrap()
            .unwrap();
        assert!(cond.passes(&u, &v));
        assert_eq!(norm_bc(&b, &c, &u, &v), d);
        // The scan can only confirm: running out of budget is an error,
        // never a refutation.
        assert!(matches!(
            scan_solutions(&ctx, &d, &[], 0),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn additive_char2_solver_agrees_with_scan() {
        // Every (g, rhs) with small degrees: compare against brute root
        // enumeration, including the solvable/insoluble split.
        let f = Field::new(2, 2).unwrap();
        for g in bounded_polys(&f, 1, 1 << 10).unwrap() {
            for rhs in bounded_polys(&f, 2, 1 << 10).unwrap() {
                let got = char2_additive_roots(&g, &rhs);
                for u in &got {
                    assert_eq!(&(&(u * u) + &(&g * u)), &rhs);
                }
                let expect: Vec<Poly> = bounded_polys(&f, 3, 1 << 20)
                    .unwrap()
                    .into_iter()
                    .filter(|u| &(&(u * u) + &(&g * u)) == &rhs)
                    .collect();
                assert_eq!(got.len(), expect.len(), "g = {g}, rhs = {rhs}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn solve_is_sound_and_brute_complete_char2(
            b in prop::collection::vec(0u32..2, 0..3),
            c in prop::collection::vec(0u32..2, 0..4),
            d in prop::collection::vec(0u32..2, 0..4),
        ) {
            let f = f2();
            let to_poly = |v: &Vec<u32>| Poly::from_coeffs(&f, v.iter().map(|&i| Fq(i)).collect());
            let (b, c, d) = (to_poly(&b), to_poly(&c), to_poly(&d));
            check_solve(&b, &c, &d);
        }

        #[test]
        fn solve_is_sound_and_brute_complete_odd(
            b in prop::collection::vec(0u32..3, 0..3),
            c in prop::collection::vec(0u32..3, 0..4),
            d in prop::collection::vec(0u32..3, 0..3),
        ) {
            let f = f3();
            let to_poly = |v: &Vec<u32>| Poly::from_coeffs(&f, v.iter().map(|&i| Fq(i)).collect());
            let (b, c, d) = (to_poly(&b), to_poly(&c), to_poly(&d));
            check_solve(&b, &c, &d);
        }
    }

    /// Shared body of the proptests: run the dispatching solver and check
    /// soundness of everything returned plus coverage of a small brute scan.
    fn check_solve(b: &Poly, c: &Poly, d: &Poly) {
        if c.is_zero() {
            return; // not a quadratic form in v at all
        }
        let ctx = QuadContext::from_monic(b, c).unwrap();
        let set = match solve(&ctx, d, 4000, BUDGET) {
            Ok(s) => s,
            Err(Error::BudgetExceeded(_)) => return,
            Err(e) => panic!("solver failed: {e:?}"),
        };
        let cap = 2;
        let brute = brute_norm_solutions(b, c, d, cap, 1 << 22).unwrap();
        match set {
            SolutionSet::Finite(finite) => {
                check_against_brute(b, c, d, &finite, &[], cap);
            }
            SolutionSet::Families { finite, families } => {
                check_against_brute(b, c, d, &finite, &families, cap);
            }
            SolutionSet::Real(fam) => {
                let mut seen = Vec::new();
                for i in 0..fam.len() {
                    for l in -3..=3 {
                        let (u, v) = fam.member(i, l);
                        assert_eq!(norm_bc(b, c, &u, &v), *d);
                        seen.push((u, v));
                    }
                }
                for sol in &brute {
                    assert!(seen.contains(sol), "missed {:?}", sol);
                }
            }
        }
    }
}
