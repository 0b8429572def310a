//! Truncated arithmetic in F((∂⁻¹)), the field of formal pseudo-differential
//! operators: Laurent series in ∂⁻¹ with the commutation rule
//! `∂ⁿ·a = Σᵢ (n choose i) a⁽ⁱ⁾ ∂ⁿ⁻ⁱ` (generalized binomials for n < 0).
//!
//! Every value carries the lowest exponent it is guaranteed to know
//! (`low`); exponents below it are truncated. Each operation computes the
//! exact window its result is certified on, so truncation never fabricates
//! coefficients. Finite exact elements (embedded operators and functions)
//! carry a sentinel `low` far below anything reachable.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::field::{binomial, RationalFunction};
use crate::fraction::PdoFraction;
use crate::intop::IntegrationOp;

/// Sentinel `low` for values that are exact (no truncated tail).
const EXACT_LOW: i64 = i64::MIN / 4;

/// Relative precision used when inverting an exact element.
const DEFAULT_INV_WIDTH: i64 = 16;

/// A truncated formal pseudo-differential operator: nonzero coefficients of
/// ∂ⁿ for `n ≥ low`, exponents below `low` unknown.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalPdo {
    terms: BTreeMap<i64, RationalFunction>,
    low: i64,
}

impl FormalPdo {
    fn make(mut terms: BTreeMap<i64, RationalFunction>, low: i64) -> Self {
        terms.retain(|e, c| *e >= low && !c.is_zero());
        FormalPdo { terms, low }
    }

    /// The exact zero element.
    pub fn zero() -> Self {
        FormalPdo {
            terms: BTreeMap::new(),
            low: EXACT_LOW,
        }
    }

    /// Zero to the given precision window.
    pub fn zero_to(low: i64) -> Self {
        FormalPdo {
            terms: BTreeMap::new(),
            low,
        }
    }

    pub fn one() -> Self {
        FormalPdo::from_fn(RationalFunction::one())
    }

    /// An exact single term `a·∂ⁿ`.
    pub fn term(a: RationalFunction, n: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !a.is_zero() {
            terms.insert(n, a);
        }
        FormalPdo {
            terms,
            low: EXACT_LOW,
        }
    }

    /// ∂ⁿ (any integer n), exact.
    pub fn d_pow(n: i64) -> Self {
        FormalPdo::term(RationalFunction::one(), n)
    }

    pub fn from_fn(a: RationalFunction) -> Self {
        FormalPdo::term(a, 0)
    }

    /// Embeds a differential operator exactly.
    pub fn from_diffop(p: &DiffOp) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.insert(k as i64, c.clone());
            }
        }
        FormalPdo {
            terms,
            low: EXACT_LOW,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.low <= EXACT_LOW
    }

    /// No known nonzero coefficients (may still hide truncated terms).
    pub fn is_zero_to_precision(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest exponent the value is certified on.
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Number of certified coefficient slots from the order down, when the
    /// value is truncated and nonzero.
    pub fn precision(&self) -> Option<i64> {
        if self.is_exact() {
            return None;
        }
        self.order().map(|o| o - self.low + 1)
    }

    /// Largest exponent the true value could have a term at.
    fn top(&self) -> i64 {
        self.order().unwrap_or(self.low - 1)
    }

    pub fn coeff(&self, n: i64) -> RationalFunction {
        self.terms
            .get(&n)
            .cloned()
            .unwrap_or_else(RationalFunction::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &RationalFunction)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Restricts to exponents ≥ `low` (never extends the window).
    pub fn truncate(&self, low: i64) -> Self {
        let low = low.max(self.low);
        FormalPdo::make(self.terms.clone(), low)
    }

    pub fn neg(&self) -> Self {
        FormalPdo {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            low: self.low,
        }
    }

    pub fn add(&self, rhs: &FormalPdo) -> Self {
        let low = self.low.max(rhs.low);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(*e).or_insert_with(RationalFunction::zero);
            *entry = &*entry + c;
        }
        FormalPdo::make(terms, low)
    }

    pub fn sub(&self, rhs: &FormalPdo) -> Self {
        self.add(&rhs.neg())
    }

    /// Product, truncated to the window both factors can certify:
    /// `low = max(low₁ + top₂, low₂ + top₁)`. Exact × exact stays exact
    /// when the expansion terminates (no negative power meets a
    /// non-polynomial coefficient); otherwise the result gets a default
    /// window, recorded in its `low`.
    pub fn mul(&self, rhs: &FormalPdo) -> Self {
        let low = if self.is_exact() && rhs.is_exact() {
            let terminating = self.terms.keys().all(|m| *m >= 0)
                || rhs.terms.values().all(|b| b.as_polynomial().is_some());
            if terminating {
                EXACT_LOW
            } else {
                self.top() + rhs.top() - 2 * DEFAULT_INV_WIDTH
            }
        } else {
            (self.low + rhs.top()).max(rhs.low + self.top())
        };
        let mut terms: BTreeMap<i64, RationalFunction> = BTreeMap::new();
        for (&n, b) in &rhs.terms {
            // derivative chain of b, shared across all left terms
            let mut b_derivs: Vec<RationalFunction> = vec![b.clone()];
            for (&m, a) in &self.terms {
                // a∂ᵐ·b∂ⁿ = Σᵢ (m choose i)·a·b⁽ⁱ⁾·∂^{m+n−i}
                let mut i: i64 = 0;
                loop {
                    let e = m + n - i;
                    if e < low {
                        break;
                    }
                    let binom = binomial(m, i as u32);
                    if binom.is_zero() {
                        break; // m ≥ 0 exhausted
                    }
                    while b_derivs.len() <= i as usize {
                        b_derivs.push(b_derivs.last().unwrap().derivative());
                    }
                    let b_deriv = &b_derivs[i as usize];
                    if b_deriv.is_zero() {
                        break; // derivatives of b terminated
                    }
                    let c = &(a * b_deriv) * &RationalFunction::constant(binom);
                    let entry = terms.entry(e).or_insert_with(RationalFunction::zero);
                    *entry = &*entry + &c;
                    i += 1;
                }
            }
        }
        FormalPdo::make(terms, low)
    }

    /// Termwise derivation `D(Σ aₑ∂ᵉ) = Σ e·aₑ∂^{e−1}`.
    pub fn d_formal(&self) -> Self {
        let low = if self.is_exact() {
            EXACT_LOW
        } else {
            self.low - 1
        };
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| **e != 0)
            .map(|(e, c)| (*e - 1, c * &RationalFunction::from_i64(*e)))
            .collect();
        FormalPdo::make(terms, low)
    }

    /// Two-sided inverse to the certified precision, by leading-term
    /// corrections. Exact inputs are truncated to a default window first
    /// (their inverse is an infinite series in general).
    pub fn inv(&self) -> Result<Self> {
        let k = self.order().ok_or(Error::ZeroToPrecision)?;
        let width = if self.is_exact() {
            DEFAULT_INV_WIDTH
        } else {
            k - self.low + 1
        };
        let f = self.truncate(k - width + 1);
        let lead_inv = f.coeff(k).inv()?;

        let mut g = FormalPdo::term(lead_inv.clone(), -k);
        let mut residual = FormalPdo::one().sub(&f.mul(&g));
        while let Some(j) = residual.order() {
            let correction = FormalPdo::term(&residual.coeff(j) * &lead_inv, j - k);
            g = g.add(&correction);
            residual = residual.sub(&f.mul(&correction));
        }
        // 1 − f·g vanishes on its window, so g is certified down to
        // residual.low − k.
        Ok(g.truncate(residual.low - k))
    }

    /// Expansion of a fraction: `den⁻¹·num` with `precision` certified
    /// coefficients below the order of the result.
    pub fn expand_fraction(f: &PdoFraction, precision: u32) -> Self {
        let precision = precision.max(1) as i64;
        if f.is_zero() {
            return FormalPdo::zero_to(-precision);
        }
        let den = FormalPdo::from_diffop(f.den());
        let num = FormalPdo::from_diffop(f.num());
        let d = f.den().degree().expect("den nonzero") as i64;
        let den_t = den.truncate(d - precision + 1);
        let inv = den_t.inv().expect("monic denominator is invertible");
        inv.mul(&num)
    }

    /// Expansion of an integration operator, certified for exponents
    /// ≥ −precision.
    pub fn expand_intop(i: &IntegrationOp, precision: u32) -> Self {
        let low = -(precision as i64);
        let d_inv = FormalPdo::d_pow(-1).truncate(low);
        let mut acc = FormalPdo::from_fn(i.scalar().clone());
        for (a, b) in i.tensors() {
            let term = FormalPdo::from_fn(a.clone())
                .mul(&d_inv.mul(&FormalPdo::from_fn(b.clone())));
            acc = acc.add(&term);
        }
        acc
    }

    /// Equality of every coefficient on the common certified window.
    pub fn agrees_with(&self, other: &FormalPdo) -> bool {
        let low = self.low.max(other.low);
        self.truncate(low) == other.truncate(low)
    }
}

fn fmt_formal_term(
    f: &mut fmt::Formatter<'_>,
    c: &RationalFunction,
    e: i64,
) -> fmt::Result {
    let trivial = c.is_one();
    if !trivial || e == 0 {
        if c.needs_parens_in_product() {
            write!(f, "({})", c)?;
        } else {
            write!(f, "{}", c)?;
        }
    }
    if e == 0 {
        return Ok(());
    }
    if !trivial {
        write!(f, "*")?;
    }
    if e == 1 {
        write!(f, "d")
    } else {
        write!(f, "d^{}", e)
    }
}

impl fmt::Display for FormalPdo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let negative = c.display_sign_negative();
            let printed = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            fmt_formal_term(f, &printed, *e)?;
            first = false;
        }
        if self.is_exact() {
            if first {
                write!(f, "0")?;
            }
            return Ok(());
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(d^{})", self.low - 1)
    }
}

impl fmt::Debug for FormalPdo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::DiffOp;
    use crate::field::Polynomial;

    fn x() -> RationalFunction {
        RationalFunction::var()
    }

    fn int(n: i64) -> RationalFunction {
        RationalFunction::from_i64(n)
    }

    #[test]
    fn mul_commutation_examples() {
        // ∂·x = x∂ + 1
        let p = FormalPdo::d_pow(1).mul(&FormalPdo::from_fn(x()));
        assert_eq!(p.coeff(1), x());
        assert_eq!(p.coeff(0), int(1));
        assert!(p.is_exact());

        // ∂⁻¹·x = x∂⁻¹ − ∂⁻² (terminates: x'' = 0)
        let p = FormalPdo::d_pow(-1).mul(&FormalPdo::from_fn(x()));
        assert_eq!(p.coeff(-1), x());
        assert_eq!(p.coeff(-2), int(-1));
        assert!(p.coeff(-3).is_zero());
        assert!(p.is_exact());

        // f·1 = f
        let f = FormalPdo::from_diffop(&DiffOp::new(vec![x(), int(1)]));
        assert_eq!(f.mul(&FormalPdo::one()), f);
    }

    #[test]
    fn mul_truncates_nonterminating_series() {
        // ∂⁻¹·(1/x) has infinitely many terms; the window must bound it.
        let f = FormalPdo::d_pow(-1)
            .truncate(-5)
            .mul(&FormalPdo::from_fn(x().inv().unwrap()));
        assert_eq!(f.low(), -5);
        assert_eq!(f.coeff(-1), x().inv().unwrap());
        // (−1 choose 1)·(1/x)' = (−1)(−1/x²) = 1/x²
        assert_eq!(
            f.coeff(-2),
            RationalFunction::new(Polynomial::one(), Polynomial::from_i64(&[0, 0, 1])).unwrap()
        );
    }

    #[test]
    fn inv_examples() {
        // ∂⁻¹ inverts ∂
        let inv = FormalPdo::d_pow(1).inv().unwrap();
        assert_eq!(inv.coeff(-1), int(1));
        assert_eq!(inv.order(), Some(-1));

        // (∂ − 1)⁻¹ = ∂⁻¹ + ∂⁻² + ∂⁻³ + …
        let f = FormalPdo::d_pow(1).sub(&FormalPdo::one());
        let inv = f.inv().unwrap();
        for e in 1..=10 {
            assert_eq!(inv.coeff(-e), int(1), "coefficient of d^-{}", e);
        }

        assert_eq!(FormalPdo::zero().inv(), Err(Error::ZeroToPrecision));
        assert_eq!(FormalPdo::zero_to(-4).inv(), Err(Error::ZeroToPrecision));
    }

    #[test]
    fn inv_is_two_sided_to_precision() {
        let samples = vec![
            FormalPdo::from_diffop(&DiffOp::new(vec![x(), int(1)])),
            FormalPdo::from_diffop(&DiffOp::new(vec![int(1), x(), int(1)])),
            FormalPdo::d_pow(-2).add(&FormalPdo::from_fn(x())),
        ];
        for f in samples {
            let g = f.inv().unwrap();
            let fg = f.mul(&g);
            let gf = g.mul(&f);
            assert!(fg.agrees_with(&FormalPdo::one()), "f·g ≠ 1 for f = {}", f);
            assert!(gf.agrees_with(&FormalPdo::one()), "g·f ≠ 1 for f = {}", f);
        }
    }

    #[test]
    fn derivation_examples() {
        // D(∂⁻¹) = −∂⁻²
        let d = FormalPdo::d_pow(-1).d_formal();
        assert_eq!(d.coeff(-2), int(-1));
        // D(a∂⁰) = 0
        assert!(FormalPdo::from_fn(x()).d_formal().is_zero_to_precision());
    }

    #[test]
    fn derivation_is_a_derivation() {
        let f = FormalPdo::d_pow(-1).truncate(-8).mul(&FormalPdo::from_fn(x()));
        let g = FormalPdo::from_diffop(&DiffOp::new(vec![x(), int(1)]));
        let lhs = f.mul(&g).d_formal();
        let rhs = f.d_formal().mul(&g).add(&f.mul(&g.d_formal()));
        assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn mul_is_associative_to_precision() {
        let samples = vec![
            FormalPdo::d_pow(-1).truncate(-8),
            FormalPdo::from_fn(x()).add(&FormalPdo::d_pow(-2).truncate(-9)),
            FormalPdo::from_diffop(&DiffOp::new(vec![x(), int(1)])),
            FormalPdo::term(x().inv().unwrap(), -1).truncate(-7),
        ];
        for a in &samples {
            for b in &samples {
                for c in &samples {
                    let left = a.mul(b).mul(c);
                    let right = a.mul(&b.mul(c));
                    assert!(left.agrees_with(&right), "({})·({})·({})", a, b, c);
                }
            }
        }
    }

    #[test]
    fn nonnegative_powers_match_operator_products() {
        let ops = vec![
            DiffOp::d(),
            DiffOp::new(vec![x(), int(1)]),
            DiffOp::new(vec![int(1), x().inv().unwrap(), int(2)]),
        ];
        for p in &ops {
            for q in &ops {
                let series = FormalPdo::from_diffop(p).mul(&FormalPdo::from_diffop(q));
                assert_eq!(series, FormalPdo::from_diffop(&(p * q)));
            }
        }
    }

    #[test]
    fn expand_fraction_examples() {
        // ∂⁻¹
        let e = FormalPdo::expand_fraction(&PdoFraction::d_inv(), 4);
        assert_eq!(e.order(), Some(-1));
        assert_eq!(e.coeff(-1), int(1));

        // (∂−1)⁻¹ at precision 3: exactly ∂⁻¹ + ∂⁻² + ∂⁻³
        let f = PdoFraction::new(DiffOp::new(vec![int(-1), int(1)]), DiffOp::one()).unwrap();
        let e = FormalPdo::expand_fraction(&f, 3);
        assert_eq!(e.low(), -3);
        let mut expected = FormalPdo::zero_to(-3);
        for k in 1..=3 {
            expected = expected.add(&FormalPdo::d_pow(-k));
        }
        assert_eq!(e, expected);

        // order of the expansion equals the valuation
        for f in [
            PdoFraction::from(DiffOp::new(vec![x(), int(1)])),
            PdoFraction::new(DiffOp::d_pow(2), DiffOp::new(vec![int(0), int(1), int(1)]))
                .unwrap(),
            PdoFraction::d_inv(),
        ] {
            let e = FormalPdo::expand_fraction(&f, 6);
            assert_eq!(e.order(), f.ord());
        }
    }

    #[test]
    fn expand_intop_examples() {
        let e = FormalPdo::expand_intop(&IntegrationOp::d_inv(), 4);
        assert_eq!(e.coeff(-1), int(1));
        assert_eq!(e.order(), Some(-1));

        // x∂⁻¹ − ∂⁻¹x matches the series of ∂⁻²
        let i = &IntegrationOp::tensor(x(), int(1)) - &IntegrationOp::tensor(int(1), x());
        let lhs = FormalPdo::expand_intop(&i, 6);
        let d2 = &PdoFraction::d_inv() * &PdoFraction::d_inv();
        let rhs = FormalPdo::expand_fraction(&d2, 6);
        assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn expand_is_multiplicative_on_intops() {
        let i = IntegrationOp::tensor(x(), int(1));
        let j = IntegrationOp::tensor(int(1), &x() + &int(1));
        let prod = i.try_mul(&j).unwrap();
        let lhs = FormalPdo::expand_intop(&prod, 8);
        let rhs = FormalPdo::expand_intop(&i, 8).mul(&FormalPdo::expand_intop(&j, 8));
        assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn right_multiplication_by_function_identity() {
        // f·a = Σ (1/i!)·a⁽ⁱ⁾·Dⁱ(f), truncated to the common window
        let samples = vec![
            FormalPdo::expand_fraction(&PdoFraction::d_inv(), 10),
            FormalPdo::expand_fraction(
                &PdoFraction::new(DiffOp::new(vec![x(), int(1)]), DiffOp::new(vec![int(1), x()]))
                    .unwrap(),
                10,
            ),
        ];
        let args = vec![x(), &x() * &x(), x().inv().unwrap()];
        for f in &samples {
            for a in &args {
                let lhs = f.mul(&FormalPdo::from_fn(a.clone()));
                let mut rhs = FormalPdo::zero_to(lhs.low());
                let mut df = f.clone();
                let mut a_deriv = a.clone();
                let mut factorial_inv = RationalFunction::one();
                let mut i = 1i64;
                loop {
                    let term = FormalPdo::from_fn(&a_deriv * &factorial_inv).mul(&df);
                    rhs = rhs.add(&term);
                    if df.top() < rhs.low() {
                        break;
                    }
                    df = df.d_formal();
                    a_deriv = a_deriv.derivative();
                    factorial_inv =
                        &factorial_inv * &RationalFunction::from_i64(i).inv().unwrap();
                    i += 1;
                }
                assert!(lhs.agrees_with(&rhs), "f = {}, a = {}", f, a);
            }
        }
    }

    #[test]
    fn display_with_marker() {
        let f = FormalPdo::term(x(), -1)
            .sub(&FormalPdo::d_pow(-2))
            .truncate(-4);
        assert_eq!(f.to_string(), "x*d^-1 - d^-2 + O(d^-5)");
        assert_eq!(FormalPdo::zero_to(-4).to_string(), "O(d^-5)");
        assert_eq!(FormalPdo::zero().to_string(), "0");
    }
}
