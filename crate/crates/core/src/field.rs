//! Exact truncated arithmetic in the ring of integers of a totally ramified
//! finite extension of the 2-adic numbers.
//!
//! An extension is described by a degree-`e` Eisenstein polynomial `E` over
//! the 2-adic integers; the uniformizer `pi` is a root of `E`.  Elements of
//! `O/p^N` are stored in canonical coefficient form `sum a_i pi^i` with
//! `a_i` reduced modulo `2^ceil((N-i)/e)`, so equality at a fixed precision
//! is plain equality of representatives and valuations are read off the
//! coefficients without any cancellation analysis.

use crate::error::{Error, Result};
use rand::Rng;
use std::fmt;

/// Largest supported ramification index.
pub const MAX_E: usize = 4;

/// Largest supported working precision (in pi-adic digits).
pub const MAX_PREC: u32 = 48;

/// Valuation of a truncated element.  `AtLeast(N)` is reported for elements
/// indistinguishable from zero at precision `N`; a definite valuation is
/// always strictly below the precision it was measured at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    AtLeast(i64),
}

impl Valuation {
    /// True when the valuation is certainly `>= bound`.
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::AtLeast(n) => n >= bound,
        }
    }

    /// True when the valuation is certainly `== 0`.
    pub fn is_unit(self) -> bool {
        matches!(self, Valuation::Finite(0))
    }

    pub fn shifted(self, delta: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + delta),
            Valuation::AtLeast(n) => Valuation::AtLeast(n + delta),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

/// An element of `O/p^N` in canonical coefficient form.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncElem {
    coeffs: [u64; MAX_E],
    prec: u32,
}

impl fmt::Debug for TruncElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]@{}", self.prec)
    }
}

/// A totally ramified extension of Q2 given by an Eisenstein polynomial,
/// together with the cached unit `u = pi^e / 2` and its inverse.
#[derive(Clone)]
pub struct FieldSpec {
    e: u32,
    max_prec: u32,
    eisenstein: Vec<i64>,
    /// Coefficients of `pi^e = -(c_0 + c_1 pi + ... + c_{e-1} pi^{e-1})`,
    /// i.e. the element `2u`, as raw (unmasked) 2-adic words.
    two_u: [u64; MAX_E],
    unit_u: TruncElem,
    unit_u_inv: TruncElem,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec(e={}, E={:?}, N={})", self.e, self.eisenstein, self.max_prec)
    }
}

#[inline]
fn bit_mask(bits: u32) -> u64 {
    if bits == 0 {
        0
    } else if bits >= 64 {
        !0
    } else {
        (1u64 << bits) - 1
    }
}

impl FieldSpec {
    /// Builds the field `Q2(pi)` with `E(pi) = 0`, checking the Eisenstein
    /// conditions, and caches `u = pi^e/2` at precision `prec`.
    ///
    /// `eisenstein` lists `E` coefficients constant-term first, including the
    /// leading 1.  `(1, [-2, 1])` is `Q2` itself with `pi = 2`.
    pub fn new(e: u32, eisenstein: &[i64], prec: u32) -> Result<FieldSpec> {
        if e == 0 || e as usize > MAX_E {
            return Err(Error::Unsupported(format!(
                "ramification index {e} outside supported range 1..={MAX_E}"
            )));
        }
        if prec < e.max(1) {
            return Err(Error::PrecisionTooSmall(format!(
                "precision {prec} is below the ramification index {e}"
            )));
        }
        if prec > MAX_PREC {
            return Err(Error::Unsupported(format!(
                "precision {prec} exceeds supported maximum {MAX_PREC}"
            )));
        }
        if eisenstein.len() != e as usize + 1 {
            return Err(Error::NotEisenstein(format!(
                "expected {} coefficients for degree {e}, got {}",
                e + 1,
                eisenstein.len()
            )));
        }
        if eisenstein[e as usize] != 1 {
            return Err(Error::NotEisenstein("leading coefficient must be 1".into()));
        }
        if eisenstein[0] % 2 != 0 || (eisenstein[0] / 2) % 2 == 0 {
            return Err(Error::NotEisenstein(
                "constant term must have 2-adic valuation exactly 1".into(),
            ));
        }
        for (i, &c) in eisenstein.iter().enumerate().take(e as usize).skip(1) {
            if c % 2 != 0 {
                return Err(Error::NotEisenstein(format!(
                    "coefficient of x^{i} must be even"
                )));
            }
        }

        let mut two_u = [0u64; MAX_E];
        let mut u_coeffs = [0u64; MAX_E];
        for i in 0..e as usize {
            let neg = (eisenstein[i] as u64).wrapping_neg();
            two_u[i] = neg;
            u_coeffs[i] = (eisenstein[i] / 2) as u64;
            u_coeffs[i] = u_coeffs[i].wrapping_neg();
        }

        let mut field = FieldSpec {
            e,
            max_prec: prec,
            eisenstein: eisenstein.to_vec(),
            two_u,
            unit_u: TruncElem { coeffs: [0; MAX_E], prec },
            unit_u_inv: TruncElem { coeffs: [0; MAX_E], prec },
        };
        let u = field.canonical(u_coeffs, prec);
        if !field.valuation(u).is_unit() {
            return Err(Error::NotEisenstein(
                "pi^e/2 is not a unit; polynomial is not Eisenstein".into(),
            ));
        }
        field.unit_u = u;
        field.unit_u_inv = field.invert_unit(u)?;
        Ok(field)
    }

    pub fn ramification_index(&self) -> u32 {
        self.e
    }

    pub fn max_prec(&self) -> u32 {
        self.max_prec
    }

    pub fn eisenstein(&self) -> &[i64] {
        &self.eisenstein
    }

    /// The cached unit `u = pi^e / 2`, truncated to `prec`.
    pub fn unit_u(&self, prec: u32) -> TruncElem {
        self.truncate(self.unit_u, prec)
    }

    /// The cached inverse `u^{-1}`, truncated to `prec`.
    pub fn unit_u_inv(&self, prec: u32) -> TruncElem {
        self.truncate(self.unit_u_inv, prec)
    }

    /// Number of 2-adic digits stored for the coefficient of `pi^i` at the
    /// given precision.
    #[inline]
    pub fn digit_bits(&self, prec: u32, i: usize) -> u32 {
        if i >= self.e as usize || i as u32 >= prec {
            0
        } else {
            (prec - i as u32).div_ceil(self.e)
        }
    }

    #[inline]
    fn canonical(&self, mut coeffs: [u64; MAX_E], prec: u32) -> TruncElem {
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c &= bit_mask(self.digit_bits(prec, i));
        }
        TruncElem { coeffs, prec }
    }

    pub fn zero(&self, prec: u32) -> TruncElem {
        TruncElem { coeffs: [0; MAX_E], prec }
    }

    pub fn one(&self, prec: u32) -> TruncElem {
        self.from_i64(1, prec)
    }

    pub fn from_i64(&self, v: i64, prec: u32) -> TruncElem {
        let mut coeffs = [0u64; MAX_E];
        coeffs[0] = v as u64;
        self.canonical(coeffs, prec)
    }

    /// `pi^k` at the given precision.
    pub fn pi_pow(&self, k: u32, prec: u32) -> TruncElem {
        let mut x = self.one(prec);
        for _ in 0..k {
            x = self.truncate(self.mul_by_pi(x), prec);
        }
        x
    }

    pub fn truncate(&self, a: TruncElem, prec: u32) -> TruncElem {
        debug_assert!(prec <= a.prec);
        self.canonical(a.coeffs, prec)
    }

    pub fn add(&self, a: TruncElem, b: TruncElem) -> Result<TruncElem> {
        if a.prec != b.prec {
            return Err(Error::PrecisionMismatch { lhs: a.prec, rhs: b.prec });
        }
        let mut coeffs = [0u64; MAX_E];
        for i in 0..self.e as usize {
            coeffs[i] = a.coeffs[i].wrapping_add(b.coeffs[i]);
        }
        Ok(self.canonical(coeffs, a.prec))
    }

    pub fn neg(&self, a: TruncElem) -> TruncElem {
        let mut coeffs = [0u64; MAX_E];
        for i in 0..self.e as usize {
            coeffs[i] = a.coeffs[i].wrapping_neg();
        }
        self.canonical(coeffs, a.prec)
    }

    pub fn sub(&self, a: TruncElem, b: TruncElem) -> Result<TruncElem> {
        self.add(a, self.neg(b))
    }

    /// Product in `Z[x]/(E(x))`, folded to degree `< e` and canonicalized.
    pub fn mul(&self, a: TruncElem, b: TruncElem) -> Result<TruncElem> {
        if a.prec != b.prec {
            return Err(Error::PrecisionMismatch { lhs: a.prec, rhs: b.prec });
        }
        let e = self.e as usize;
        let mut tmp = [0u64; 2 * MAX_E - 1];
        for i in 0..e {
            let ai = a.coeffs[i];
            if ai == 0 {
                continue;
            }
            for j in 0..e {
                tmp[i + j] = tmp[i + j].wrapping_add(ai.wrapping_mul(b.coeffs[j]));
            }
        }
        // Fold pi^k for k >= e using pi^e = 2u; descending k never revisits
        // an already-final coefficient.
        for k in (e..=(2 * e).saturating_sub(2)).rev() {
            let c = tmp[k];
            if c == 0 {
                continue;
            }
            tmp[k] = 0;
            for i in 0..e {
                tmp[k - e + i] = tmp[k - e + i].wrapping_add(c.wrapping_mul(self.two_u[i]));
            }
        }
        let mut coeffs = [0u64; MAX_E];
        coeffs[..e].copy_from_slice(&tmp[..e]);
        Ok(self.canonical(coeffs, a.prec))
    }

    /// `a * pi`, exact; the result carries one more digit of precision.
    pub fn mul_by_pi(&self, a: TruncElem) -> TruncElem {
        let e = self.e as usize;
        let mut coeffs = [0u64; MAX_E];
        for i in 0..e.saturating_sub(1) {
            coeffs[i + 1] = a.coeffs[i];
        }
        let top = a.coeffs[e - 1];
        if top != 0 {
            for i in 0..e {
                coeffs[i] = coeffs[i].wrapping_add(top.wrapping_mul(self.two_u[i]));
            }
        }
        self.canonical(coeffs, a.prec + 1)
    }

    /// `2a`, exact; gains `e` digits of precision.
    pub fn double_exact(&self, a: TruncElem) -> TruncElem {
        let mut coeffs = [0u64; MAX_E];
        for i in 0..self.e as usize {
            coeffs[i] = a.coeffs[i].wrapping_mul(2);
        }
        self.canonical(coeffs, a.prec + self.e)
    }

    /// `a / pi` for `a` of valuation at least 1; loses one digit.
    pub fn div_by_pi(&self, a: TruncElem) -> Result<TruncElem> {
        if a.prec < 2 {
            return Err(Error::PrecisionExhausted("div_by_pi below precision 2".into()));
        }
        if a.coeffs[0] & 1 != 0 {
            return Err(Error::ShapeViolation("element not divisible by pi".into()));
        }
        let e = self.e as usize;
        let prec = a.prec;
        let mut coeffs = [0u64; MAX_E];
        for i in 1..e {
            coeffs[i - 1] = a.coeffs[i];
        }
        let shifted = self.canonical(coeffs, prec - 1);
        // a_0 = 2 b_0 and 2/pi = u^{-1} pi^{e-1}.
        let b0 = a.coeffs[0] >> 1;
        if b0 == 0 {
            return Ok(shifted);
        }
        let mut t = [0u64; MAX_E];
        let u_inv = self.unit_u_inv;
        for i in 0..e {
            t[i] = u_inv.coeffs[i].wrapping_mul(b0);
        }
        let t = self.canonical(t, prec - 1);
        let correction = self.mul(t, self.pi_pow(self.e - 1, prec - 1))?;
        self.add(shifted, correction)
    }

    /// Smallest `i` with a nonzero canonical digit at `pi^i`, or
    /// `AtLeast(N)` when every stored digit vanishes.  The canonical form
    /// makes this exact: distinct monomials have distinct valuations.
    pub fn valuation(&self, a: TruncElem) -> Valuation {
        let mut best: Option<i64> = None;
        for i in 0..self.e as usize {
            let c = a.coeffs[i];
            if c == 0 {
                continue;
            }
            let v = i as i64 + self.e as i64 * c.trailing_zeros() as i64;
            best = Some(match best {
                Some(b) => b.min(v),
                None => v,
            });
        }
        match best {
            Some(v) => Valuation::Finite(v),
            None => Valuation::AtLeast(a.prec as i64),
        }
    }

    /// Multiplicative inverse of a unit, by Newton iteration lifted from the
    /// residue field.
    pub fn invert_unit(&self, a: TruncElem) -> Result<TruncElem> {
        match self.valuation(a) {
            Valuation::Finite(0) => {}
            Valuation::Finite(v) => return Err(Error::NotAUnit(v)),
            Valuation::AtLeast(n) => return Err(Error::NotAUnit(n)),
        }
        let two = self.from_i64(2, a.prec);
        let mut x = self.one(a.prec);
        let mut iters = 0u32;
        let mut reached = 1u64;
        while reached < a.prec as u64 {
            reached *= 2;
            iters += 1;
        }
        for _ in 0..=iters {
            let ax = self.mul(a, x)?;
            let t = self.sub(two, ax)?;
            x = self.mul(x, t)?;
        }
        debug_assert_eq!(self.mul(a, x)?, self.one(a.prec));
        Ok(x)
    }

    /// All canonical representatives of `O/p^prec`.
    pub fn enumerate(&self, prec: u32) -> Vec<TruncElem> {
        self.enumerate_window(0, prec)
    }

    /// All canonical representatives of `p^low / p^high`, as elements at
    /// precision `high` with valuation at least `low`.
    pub fn enumerate_window(&self, low: u32, high: u32) -> Vec<TruncElem> {
        assert!(low <= high);
        let e = self.e as usize;
        let mut steps = [0u64; MAX_E];
        let mut counts = [1u64; MAX_E];
        let mut total = 1u64;
        for i in 0..e {
            let lo_bits = self.digit_bits(low, i);
            let hi_bits = self.digit_bits(high, i);
            steps[i] = 1u64 << lo_bits;
            counts[i] = 1u64 << (hi_bits - lo_bits);
            total *= counts[i];
        }
        let mut out = Vec::with_capacity(total as usize);
        let mut idx = [0u64; MAX_E];
        loop {
            let mut coeffs = [0u64; MAX_E];
            for i in 0..e {
                coeffs[i] = idx[i] * steps[i];
            }
            out.push(self.canonical(coeffs, high));
            let mut i = 0;
            loop {
                if i == e {
                    return out;
                }
                idx[i] += 1;
                if idx[i] < counts[i] {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    /// Size of `p^low / p^high` (residue field has order 2).
    pub fn window_size(&self, low: u32, high: u32) -> u64 {
        1u64 << (high - low)
    }

    pub fn random_elem<R: Rng>(&self, prec: u32, rng: &mut R) -> TruncElem {
        let mut coeffs = [0u64; MAX_E];
        for (i, c) in coeffs.iter_mut().enumerate().take(self.e as usize) {
            *c = rng.gen::<u64>() & bit_mask(self.digit_bits(prec, i));
        }
        self.canonical(coeffs, prec)
    }

    pub fn random_unit<R: Rng>(&self, prec: u32, rng: &mut R) -> TruncElem {
        let mut x = self.random_elem(prec, rng);
        x.coeffs[0] |= 1;
        x
    }

    /// Renders `a` as a polynomial in pi, for reports and errors.
    pub fn render(&self, a: TruncElem) -> String {
        let e = self.e as usize;
        let mut parts = Vec::new();
        for i in 0..e {
            if a.coeffs[i] != 0 {
                parts.push(match i {
                    0 => format!("{}", a.coeffs[i]),
                    1 => format!("{}*pi", a.coeffs[i]),
                    _ => format!("{}*pi^{}", a.coeffs[i], i),
                });
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl TruncElem {
    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Raw canonical coefficients (constant term first).
    pub fn coeffs(&self) -> &[u64; MAX_E] {
        &self.coeffs
    }
}

/// An element of a fractional ideal: `num * pi^{-shift}` with `num`
/// integral.  The denoted value is known modulo `p^(num.prec - shift)`;
/// construction never lets that effective precision go negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FracElem {
    num: TruncElem,
    shift: u32,
}

impl FracElem {
    pub fn from_trunc(num: TruncElem) -> FracElem {
        FracElem { num, shift: 0 }
    }

    /// `num * pi^{-shift}`, canonicalized to minimal shift.
    pub fn new(field: &FieldSpec, num: TruncElem, shift: u32) -> Result<FracElem> {
        if num.prec < shift {
            return Err(Error::PrecisionExhausted(format!(
                "fractional shift {shift} exceeds numerator precision {}",
                num.prec
            )));
        }
        let mut out = FracElem { num, shift };
        out.reduce(field)?;
        Ok(out)
    }

    fn reduce(&mut self, field: &FieldSpec) -> Result<()> {
        if self.num.is_zero() {
            self.num = field.truncate(self.num, self.num.prec - self.shift);
            self.shift = 0;
            return Ok(());
        }
        while self.shift > 0 && field.valuation(self.num).at_least(1) {
            self.num = field.div_by_pi(self.num)?;
            self.shift -= 1;
        }
        Ok(())
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn num(&self) -> TruncElem {
        self.num
    }

    /// Digits of precision available for the denoted value.
    pub fn effective_prec(&self) -> i64 {
        self.num.prec as i64 - self.shift as i64
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the element lies in `O` (no residual denominator).
    pub fn is_integral(&self) -> bool {
        self.shift == 0
    }

    /// The integral value, failing on genuine denominators.
    pub fn as_trunc(&self) -> Result<TruncElem> {
        if self.shift != 0 {
            return Err(Error::ShapeViolation("element has a pi-denominator".into()));
        }
        Ok(self.num)
    }

    pub fn valuation(&self, field: &FieldSpec) -> Valuation {
        field.valuation(self.num).shifted(-(self.shift as i64))
    }

    fn align(field: &FieldSpec, a: FracElem, b: FracElem) -> Result<(TruncElem, TruncElem, u32)> {
        let shift = a.shift.max(b.shift);
        let mut na = a.num;
        for _ in 0..shift - a.shift {
            na = field.mul_by_pi(na);
        }
        let mut nb = b.num;
        for _ in 0..shift - b.shift {
            nb = field.mul_by_pi(nb);
        }
        let prec = na.prec.min(nb.prec);
        Ok((field.truncate(na, prec), field.truncate(nb, prec), shift))
    }

    pub fn add(self, rhs: FracElem, field: &FieldSpec) -> Result<FracElem> {
        let (a, b, shift) = FracElem::align(field, self, rhs)?;
        FracElem::new(field, field.add(a, b)?, shift)
    }

    pub fn sub(self, rhs: FracElem, field: &FieldSpec) -> Result<FracElem> {
        self.add(rhs.neg(field), field)
    }

    pub fn neg(self, field: &FieldSpec) -> FracElem {
        FracElem { num: field.neg(self.num), shift: self.shift }
    }

    pub fn mul(self, rhs: FracElem, field: &FieldSpec) -> Result<FracElem> {
        let prec = self.num.prec.min(rhs.num.prec);
        let product = field.mul(field.truncate(self.num, prec), field.truncate(rhs.num, prec))?;
        FracElem::new(field, product, self.shift + rhs.shift)
    }

    /// Equality of denoted values at the shared effective precision.
    pub fn eq_at_prec(self, rhs: FracElem, field: &FieldSpec) -> Result<bool> {
        Ok(self.sub(rhs, field)?.is_zero())
    }

    pub fn render(&self, field: &FieldSpec) -> String {
        if self.shift == 0 {
            field.render(self.num)
        } else {
            format!("({}) * pi^-{}", field.render(self.num), self.shift)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn q2(prec: u32) -> FieldSpec {
        FieldSpec::new(1, &[-2, 1], prec).unwrap()
    }

    fn ram2(prec: u32) -> FieldSpec {
        FieldSpec::new(2, &[-2, 0, 1], prec).unwrap()
    }

    #[test]
    fn make_field_q2_has_unit_one() {
        let f = q2(6);
        assert_eq!(f.unit_u(6), f.one(6));
        assert_eq!(f.pi_pow(1, 6), f.from_i64(2, 6));
    }

    #[test]
    fn make_field_pi_squared_two() {
        let f = ram2(8);
        assert_eq!(f.unit_u(8), f.one(8));
        let pi = f.pi_pow(1, 8);
        assert_eq!(f.mul(pi, pi).unwrap(), f.from_i64(2, 8));
    }

    #[test]
    fn make_field_pi_squared_six() {
        let f = FieldSpec::new(2, &[-6, 0, 1], 8).unwrap();
        // u = pi^2/2 = 3, reduced mod 2^4.
        assert_eq!(f.unit_u(8), f.from_i64(3, 8));
    }

    #[test]
    fn rejects_non_eisenstein() {
        assert!(matches!(FieldSpec::new(2, &[-4, 0, 1], 8), Err(Error::NotEisenstein(_))));
        assert!(matches!(FieldSpec::new(2, &[-2, 1, 1], 8), Err(Error::NotEisenstein(_))));
        assert!(matches!(FieldSpec::new(2, &[-2, 0, 2], 8), Err(Error::NotEisenstein(_))));
        assert!(matches!(FieldSpec::new(2, &[-2, 0, 1], 1), Err(Error::PrecisionTooSmall(_))));
    }

    #[test]
    fn add_examples() {
        let f = q2(3);
        let a = f.from_i64(3, 3);
        let b = f.from_i64(6, 3);
        assert_eq!(f.add(a, b).unwrap(), f.from_i64(1, 3)); // 9 mod 8
        assert_eq!(f.add(a, f.zero(3)).unwrap(), a);
    }

    #[test]
    fn add_canonical_in_ramified_field() {
        // pi + pi = 2 pi, with a_1 reduced mod 2^ceil(3/2) = 4 at N = 4.
        let f = ram2(4);
        let pi = f.pi_pow(1, 4);
        let two_pi = f.add(pi, pi).unwrap();
        assert_eq!(two_pi.coeffs()[0], 0);
        assert_eq!(two_pi.coeffs()[1], 2);
        assert_eq!(f.valuation(two_pi), Valuation::Finite(3));
    }

    #[test]
    fn mul_examples() {
        let f = q2(3);
        assert_eq!(f.mul(f.from_i64(3, 3), f.from_i64(3, 3)).unwrap(), f.one(3));
        let g = ram2(8);
        let pi = g.pi_pow(1, 8);
        assert_eq!(g.mul(pi, pi).unwrap(), g.from_i64(2, 8));
        let a = g.random_elem(8, &mut StdRng::seed_from_u64(1));
        assert_eq!(g.mul(a, g.one(8)).unwrap(), a);
    }

    #[test]
    fn invert_examples() {
        let f = q2(3);
        assert_eq!(f.invert_unit(f.from_i64(3, 3)).unwrap(), f.from_i64(3, 3));
        assert_eq!(f.invert_unit(f.one(3)).unwrap(), f.one(3));
        let g = q2(4);
        // Extended Euclid mod 16: 5 * 13 = 65 = 1 + 4*16.
        assert_eq!(g.invert_unit(g.from_i64(5, 4)).unwrap(), g.from_i64(13, 4));
        assert!(matches!(g.invert_unit(g.from_i64(2, 4)), Err(Error::NotAUnit(1))));
    }

    #[test]
    fn valuation_examples() {
        let f = q2(5);
        assert_eq!(f.valuation(f.from_i64(4, 5)), Valuation::Finite(2));
        assert_eq!(f.valuation(f.zero(5)), Valuation::AtLeast(5));
        let g = ram2(6);
        assert_eq!(g.valuation(g.from_i64(2, 6)), Valuation::Finite(2));
        assert_eq!(g.valuation(g.pi_pow(3, 6)), Valuation::Finite(3));
    }

    #[test]
    fn exhaustive_unit_inverses_small_precision() {
        for f in [q2(4), ram2(4)] {
            for a in f.enumerate(4) {
                if f.valuation(a).is_unit() {
                    let inv = f.invert_unit(a).unwrap();
                    assert_eq!(f.mul(a, inv).unwrap(), f.one(4));
                }
            }
        }
    }

    #[test]
    fn exhaustive_ring_axioms_tiny() {
        for f in [q2(4), ram2(4)] {
            let elems = f.enumerate(4);
            for &a in &elems {
                for &b in &elems {
                    assert_eq!(f.add(a, b).unwrap(), f.add(b, a).unwrap());
                    assert_eq!(f.mul(a, b).unwrap(), f.mul(b, a).unwrap());
                    for &c in &elems {
                        let ab_c = f.mul(f.mul(a, b).unwrap(), c).unwrap();
                        let a_bc = f.mul(a, f.mul(b, c).unwrap()).unwrap();
                        assert_eq!(ab_c, a_bc);
                        let lhs = f.mul(a, f.add(b, c).unwrap()).unwrap();
                        let rhs = f.add(f.mul(a, b).unwrap(), f.mul(a, c).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                        let add_assoc1 = f.add(f.add(a, b).unwrap(), c).unwrap();
                        let add_assoc2 = f.add(a, f.add(b, c).unwrap()).unwrap();
                        assert_eq!(add_assoc1, add_assoc2);
                    }
                }
            }
        }
    }

    #[test]
    fn valuation_multiplicative_on_random_pairs() {
        let mut rng = StdRng::seed_from_u64(42);
        for f in [q2(12), ram2(12)] {
            let mut checked = 0;
            while checked < 10_000 {
                let a = f.random_elem(12, &mut rng);
                let b = f.random_elem(12, &mut rng);
                let (Valuation::Finite(va), Valuation::Finite(vb)) =
                    (f.valuation(a), f.valuation(b))
                else {
                    continue;
                };
                if va + vb >= 12 {
                    continue;
                }
                let ab = f.mul(a, b).unwrap();
                assert_eq!(f.valuation(ab), Valuation::Finite(va + vb));
                checked += 1;
            }
        }
    }

    #[test]
    fn two_equals_pi_e_over_u() {
        for f in [q2(8), ram2(8), FieldSpec::new(2, &[-6, 0, 1], 8).unwrap()] {
            let e = f.ramification_index();
            assert_eq!(f.valuation(f.from_i64(2, 8)), Valuation::Finite(e as i64));
            assert!(f.valuation(f.unit_u(8)).is_unit());
            let two_u = f.double_exact(f.unit_u(8));
            let two_u = f.truncate(two_u, 8);
            assert_eq!(two_u, f.pi_pow(e, 8));
        }
    }

    #[test]
    fn frac_examples() {
        let f = q2(6);
        let one_over_pi = FracElem::new(&f, f.one(6), 1).unwrap();
        let sum = one_over_pi.add(one_over_pi, &f).unwrap();
        // 1/pi + 1/pi = 2/pi = 1 in Q2.
        assert!(sum.is_integral());
        assert_eq!(sum.as_trunc().unwrap(), f.one(5));

        let quarter = FracElem::new(&f, f.one(6), 2).unwrap();
        assert_eq!(quarter.valuation(&f), Valuation::Finite(-2));

        let x = FracElem::from_trunc(f.from_i64(5, 6));
        let y = FracElem::new(&f, f.from_i64(3, 6), 1).unwrap();
        let xy = x.mul(y, &f).unwrap();
        assert_eq!(xy.shift(), 1);
        assert_eq!(xy.num(), f.from_i64(15, 6));
    }

    #[test]
    fn frac_shift_alignment_in_ramified_field() {
        let f = ram2(8);
        let a = FracElem::new(&f, f.from_i64(1, 8), 3).unwrap();
        let b = FracElem::new(&f, f.pi_pow(1, 8), 3).unwrap(); // = pi^-2
        assert_eq!(b.shift(), 2);
        let s = a.add(b, &f).unwrap();
        let direct = FracElem::new(&f, f.add(f.one(8), f.pi_pow(1, 8)).unwrap(), 3).unwrap();
        assert!(s.eq_at_prec(direct, &f).unwrap());
    }

    #[test]
    fn frac_precision_guard() {
        let f = q2(4);
        assert!(matches!(
            FracElem::new(&f, f.one(4), 5),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    proptest! {
        #[test]
        fn canonicalization_idempotent(seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            for f in [q2(9), ram2(9), FieldSpec::new(3, &[-2, 2, 0, 1], 9).unwrap()] {
                let a = f.random_elem(9, &mut rng);
                let again = f.truncate(a, 9);
                prop_assert_eq!(a, again);
            }
        }

        #[test]
        fn mul_by_pi_and_div_by_pi_roundtrip(seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            for f in [q2(9), ram2(9)] {
                let a = f.random_elem(9, &mut rng);
                let up = f.mul_by_pi(a);
                let down = f.div_by_pi(up).unwrap();
                prop_assert_eq!(down, a);
            }
        }

        #[test]
        fn frac_mul_shift_additivity(seed in any::<u64>(), s in 0u32..3, t in 0u32..3) {
            let mut rng = StdRng::seed_from_u64(seed);
            let f = ram2(10);
            let x = FracElem::new(&f, f.random_unit(10, &mut rng), s).unwrap();
            let y = FracElem::new(&f, f.random_unit(10, &mut rng), t).unwrap();
            let xy = x.mul(y, &f).unwrap();
            prop_assert_eq!(
                xy.valuation(&f),
                Valuation::Finite(-(s as i64) - (t as i64))
            );
        }
    }
}
