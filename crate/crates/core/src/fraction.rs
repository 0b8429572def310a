//! The field F(∂) of rational pseudo-differential operators: normalized Ore
//! fractions P⁻¹Q over the ring of differential operators.
//!
//! A fraction is kept in its minimal presentation: the denominator is monic
//! and shares no left factor with the numerator. Minimality of the
//! denominator degree is exactly left-coprimality, and the monic convention
//! pins down the remaining scalar freedom, so structural equality decides
//! semantic equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::diffop::{annihilator, gcld, kernel_poly_basis, lclm, DiffOp};
use crate::error::{Error, Result};
use crate::field::{c_independent, rat, Polynomial, RationalFunction};
use crate::intop::{IntegrationOp, MixedOp};

/// A rational pseudo-differential operator `den⁻¹ · num` in minimal
/// presentation. Zero is canonically `(1, 0)`.
#[derive(Clone, PartialEq, Eq)]
pub struct PdoFraction {
    den: DiffOp,
    num: DiffOp,
}

impl PdoFraction {
    /// Builds `den⁻¹·num` and normalizes: the common left factor is removed
    /// and the denominator is made monic by a scalar from the left.
    pub fn new(den: DiffOp, num: DiffOp) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(PdoFraction::zero());
        }
        let g = gcld(&den, &num)?;
        let (den0, r) = den.left_divide(&g)?;
        debug_assert!(r.is_zero());
        let (num0, r) = num.left_divide(&g)?;
        debug_assert!(r.is_zero());
        let lead_inv = den0.leading().expect("den nonzero").inv()?;
        let out = PdoFraction {
            den: den0.scale(&lead_inv),
            num: num0.scale(&lead_inv),
        };
        debug_assert!(gcld(&out.den, &out.num).map_or(false, |g| g.is_one()));
        Ok(out)
    }

    pub fn zero() -> Self {
        PdoFraction {
            den: DiffOp::one(),
            num: DiffOp::zero(),
        }
    }

    pub fn one() -> Self {
        PdoFraction {
            den: DiffOp::one(),
            num: DiffOp::one(),
        }
    }

    /// ∂⁻¹ as a fraction.
    pub fn d_inv() -> Self {
        PdoFraction {
            den: DiffOp::d(),
            num: DiffOp::one(),
        }
    }

    pub fn den(&self) -> &DiffOp {
        &self.den
    }

    pub fn num(&self) -> &DiffOp {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// True when the element lies in the subring of differential operators.
    pub fn is_operator(&self) -> bool {
        self.den.is_one()
    }

    /// The degree of the minimal denominator.
    pub fn length(&self) -> usize {
        self.den.degree().expect("den is never zero")
    }

    /// The order valuation `deg(num) − deg(den)`; `None` (minus infinity)
    /// for the zero element. Well defined on any presentation.
    pub fn ord(&self) -> Option<i64> {
        let n = self.num.degree()? as i64;
        Some(n - self.den.degree().expect("den nonzero") as i64)
    }

    /// Membership in the valuation subring of nonpositive order.
    pub fn in_valuation_ring(&self) -> bool {
        self.ord().map_or(true, |o| o <= 0)
    }

    /// The monic operator whose kernel is the pole space of the fraction.
    pub fn pol_op(&self) -> DiffOp {
        self.den.clone()
    }

    /// The monic operator whose kernel is the zero space of the fraction.
    pub fn zer_op(&self) -> Result<DiffOp> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.num.monic())
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        PdoFraction::new(self.num.clone(), self.den.clone())
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = PdoFraction::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

impl From<DiffOp> for PdoFraction {
    fn from(p: DiffOp) -> Self {
        PdoFraction {
            den: DiffOp::one(),
            num: p,
        }
    }
}

impl From<RationalFunction> for PdoFraction {
    fn from(a: RationalFunction) -> Self {
        DiffOp::from_fn(a).into()
    }
}

impl Add for &PdoFraction {
    type Output = PdoFraction;
    fn add(self, rhs: &PdoFraction) -> PdoFraction {
        // Common left multiple of the denominators: L = U·P₁ = V·P₂ gives
        // P₁⁻¹Q₁ + P₂⁻¹Q₂ = L⁻¹(U·Q₁ + V·Q₂).
        let (l, u, v) = lclm(&self.den, &rhs.den).expect("denominators are nonzero");
        let num = &(&u * &self.num) + &(&v * &rhs.num);
        PdoFraction::new(l, num).expect("lclm is nonzero")
    }
}

impl Sub for &PdoFraction {
    type Output = PdoFraction;
    fn sub(self, rhs: &PdoFraction) -> PdoFraction {
        self + &-rhs
    }
}

impl Neg for &PdoFraction {
    type Output = PdoFraction;
    fn neg(self) -> PdoFraction {
        // Sign changes preserve coprimality and the monic denominator.
        PdoFraction {
            den: self.den.clone(),
            num: -&self.num,
        }
    }
}

impl Mul for &PdoFraction {
    type Output = PdoFraction;
    fn mul(self, rhs: &PdoFraction) -> PdoFraction {
        if self.is_zero() || rhs.is_zero() {
            return PdoFraction::zero();
        }
        if rhs.den.is_one() {
            // Q₁·Q₂ needs no Ore step.
            return PdoFraction::new(self.den.clone(), &self.num * &rhs.num)
                .expect("den nonzero");
        }
        // Rewrite Q₁·P₂⁻¹ = A⁻¹·B from A·Q₁ = B·P₂, then
        // (P₁⁻¹Q₁)(P₂⁻¹Q₂) = (A·P₁)⁻¹(B·Q₂).
        let (_, a, b) = lclm(&self.num, &rhs.den).expect("both nonzero");
        PdoFraction::new(&a * &self.den, &b * &rhs.num).expect("den nonzero")
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for PdoFraction {
            type Output = PdoFraction;
            fn $method(self, rhs: PdoFraction) -> PdoFraction {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for PdoFraction {
    type Output = PdoFraction;
    fn neg(self) -> PdoFraction {
        -&self
    }
}

/// Constructs a fraction with prescribed pole and zero spaces: the
/// denominator annihilates `poles`, the numerator is a scalar multiple of
/// the annihilator of `zeros`, and the scalar is drawn from a deterministic
/// sequence (x, x², …, then small sums of powers) until the presentation is
/// left-coprime. Existence is guaranteed abstractly; the bounded search
/// fails loudly rather than looping.
pub fn fraction_with_poles_zeros(
    poles: &[RationalFunction],
    zeros: &[RationalFunction],
    budget: u32,
) -> Result<PdoFraction> {
    if !c_independent(poles) || !c_independent(zeros) {
        return Err(Error::DependentInput);
    }
    let ann = |fs: &[RationalFunction]| -> Result<DiffOp> {
        if fs.is_empty() {
            Ok(DiffOp::one())
        } else {
            annihilator(fs, true)
        }
    };
    let p_v = ann(poles)?;
    let p_w = ann(zeros)?;

    let xpow = |k: usize| -> RationalFunction { Polynomial::monomial(rat(1), k).into() };
    let mut candidates: Vec<RationalFunction> = (1..=budget as usize).map(xpow).collect();
    let combo_max = (budget as usize).min(4);
    for i in 0..=combo_max {
        for j in (i + 1)..=combo_max {
            candidates.push(&xpow(i) + &xpow(j));
            candidates.push(&xpow(i) - &xpow(j));
        }
    }

    for a in candidates {
        if a.is_zero() {
            continue;
        }
        let num = p_w.scale(&a);
        if gcld(&p_v, &num)?.is_one() {
            return Ok(PdoFraction { den: p_v, num });
        }
    }
    Err(Error::SearchBudgetExceeded { budget })
}

impl PdoFraction {
    /// Splits the fraction as a differential operator plus an integration
    /// operator: `self = D + den⁻¹R` with `deg R < deg den`, the inverse of
    /// the denominator built through a chain of first-order factors
    /// `∂ − s'/s` found from polynomial kernel elements, each inverted as
    /// `s∂⁻¹s⁻¹`.
    ///
    /// Over rational functions the factor chain or an inner antiderivative
    /// can fail to exist; both obstructions surface as errors.
    pub fn separate(&self) -> Result<(DiffOp, IntegrationOp)> {
        let (d_part, r) = self.num.left_divide(&self.den)?;
        if r.is_zero() {
            return Ok((d_part, IntegrationOp::zero()));
        }

        let bound = kernel_search_bound(&self.den);
        let mut factors_inverted: Vec<IntegrationOp> = Vec::new();
        let mut p = self.den.clone();
        while p.degree() != Some(0) {
            let basis = kernel_poly_basis(&p, bound);
            let Some(s) = basis.first() else {
                return Err(Error::DenominatorNotSplit { bound });
            };
            let s_rf: RationalFunction = s.clone().into();
            let (q, _factor) = p.factor_by_solution(&s_rf)?;
            // (∂ − s'/s)⁻¹ = s ∂⁻¹ s⁻¹
            factors_inverted.push(IntegrationOp::new(
                RationalFunction::zero(),
                vec![(s_rf.clone(), s_rf.inv()?)],
            ));
            p = q;
        }
        debug_assert!(p.is_one(), "monic chain ends at the identity");

        // den⁻¹·R = I₁·I₂⋯I_m·R, assembled right to left in the mixed ring.
        let mut acc = MixedOp::from_diff(r);
        for inv in factors_inverted.iter().rev() {
            acc = MixedOp::from_int(inv.clone()).try_mul(&acc)?;
        }
        assert!(
            acc.diff_part().is_zero(),
            "an element of negative order has no differential part"
        );
        let int = acc.into_int_part();
        let back = &PdoFraction::from(d_part.clone()) + &int.to_fraction();
        assert!(back == *self, "separated parts must reassemble exactly");
        Ok((d_part, int))
    }
}

/// Degree cap for the polynomial kernel searches inside `separate`.
fn kernel_search_bound(p: &DiffOp) -> usize {
    let coeff_deg = p
        .coeffs()
        .iter()
        .map(|c| {
            c.num()
                .degree()
                .unwrap_or(0)
                .max(c.den().degree().unwrap_or(0))
        })
        .max()
        .unwrap_or(0);
    coeff_deg + p.degree().unwrap_or(0) + 8
}

impl fmt::Display for PdoFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})^-1 * ({})", self.den, self.num)
    }
}

impl fmt::Debug for PdoFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
