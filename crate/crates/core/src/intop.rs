//! The ring F⟨∂⁻¹⟩ of integration operators in the normal form
//! `a + Σ aᵢ∂⁻¹bᵢ`, plus the mixed sums F⟨∂⟩ + F⟨∂⁻¹⟩ needed to multiply
//! integration operators by differential operators.
//!
//! Multiplication rewrites every inner `∂⁻¹g∂⁻¹` through
//! `∂⁻¹u'∂⁻¹ = u∂⁻¹ − ∂⁻¹u`, which needs `u = ∫g` to be a rational
//! function. Over polynomial coefficients this always holds; otherwise the
//! product fails with an explicit obstruction.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::diffop::{annihilator, DiffOp};
use crate::error::{Error, Result};
use crate::field::{echelonize, RationalFunction};
use crate::fraction::PdoFraction;

/// An integration operator `scalar + Σ aᵢ∂⁻¹bᵢ` in canonical form: the
/// `bᵢ` are a reduced-echelon set, the `aᵢ` are nonzero and linearly
/// independent over the constants, and the number of tensors is the tensor
/// rank of the element.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegrationOp {
    scalar: RationalFunction,
    tensors: Vec<(RationalFunction, RationalFunction)>,
}

impl IntegrationOp {
    /// Builds the canonical form of `scalar + Σ aᵢ∂⁻¹bᵢ`.
    ///
    /// Alternates echelonizing the right factors (rewriting the left ones
    /// accordingly) with eliminating dependencies among the left factors;
    /// the tensor count strictly drops on every rewrite, so the loop
    /// reaches the unique minimal-rank presentation.
    pub fn new(
        scalar: RationalFunction,
        tensors: Vec<(RationalFunction, RationalFunction)>,
    ) -> Self {
        let mut tensors: Vec<(RationalFunction, RationalFunction)> = tensors
            .into_iter()
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .collect();
        loop {
            if tensors.is_empty() {
                break;
            }
            // Echelonize the b-side and regroup the a-coefficients.
            let bs: Vec<RationalFunction> = tensors.iter().map(|t| t.1.clone()).collect();
            let (b_basis, b_coords) = echelonize(&bs);
            let mut regrouped: Vec<(RationalFunction, RationalFunction)> = Vec::new();
            for (j, e) in b_basis.iter().enumerate() {
                let mut aj = RationalFunction::zero();
                for (i, (a, _)) in tensors.iter().enumerate() {
                    let c = &b_coords[i][j];
                    if !c.is_zero() {
                        aj = &aj + &(&RationalFunction::constant(c.clone()) * a);
                    }
                }
                if !aj.is_zero() {
                    regrouped.push((aj, e.clone()));
                }
            }
            tensors = regrouped;
            if tensors.is_empty() {
                break;
            }

            // If the a-side is independent the form is canonical.
            let a_list: Vec<RationalFunction> = tensors.iter().map(|t| t.0.clone()).collect();
            let (a_basis, a_coords) = echelonize(&a_list);
            if a_basis.len() == tensors.len() {
                break;
            }
            // Rewrite over the a-side basis; the new b's need echelonizing,
            // so loop again. Rank strictly decreases here.
            let mut rewritten: Vec<(RationalFunction, RationalFunction)> = Vec::new();
            for (k, f) in a_basis.iter().enumerate() {
                let mut gk = RationalFunction::zero();
                for (j, (_, b)) in tensors.iter().enumerate() {
                    let c = &a_coords[j][k];
                    if !c.is_zero() {
                        gk = &gk + &(&RationalFunction::constant(c.clone()) * b);
                    }
                }
                if !gk.is_zero() {
                    rewritten.push((f.clone(), gk));
                }
            }
            tensors = rewritten;
        }
        IntegrationOp { scalar, tensors }
    }

    pub fn zero() -> Self {
        IntegrationOp {
            scalar: RationalFunction::zero(),
            tensors: Vec::new(),
        }
    }

    /// ∂⁻¹.
    pub fn d_inv() -> Self {
        IntegrationOp {
            scalar: RationalFunction::zero(),
            tensors: vec![(RationalFunction::one(), RationalFunction::one())],
        }
    }

    pub fn from_scalar(a: RationalFunction) -> Self {
        IntegrationOp {
            scalar: a,
            tensors: Vec::new(),
        }
    }

    /// `a∂⁻¹b` as a canonical element.
    pub fn tensor(a: RationalFunction, b: RationalFunction) -> Self {
        IntegrationOp::new(RationalFunction::zero(), vec![(a, b)])
    }

    pub fn scalar(&self) -> &RationalFunction {
        &self.scalar
    }

    pub fn tensors(&self) -> &[(RationalFunction, RationalFunction)] {
        &self.tensors
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.tensors.is_empty()
    }

    /// The tensor rank of the canonical form.
    pub fn rank(&self) -> usize {
        self.tensors.len()
    }

    pub fn has_polynomial_coeffs(&self) -> bool {
        self.scalar.as_polynomial().is_some()
            && self
                .tensors
                .iter()
                .all(|(a, b)| a.as_polynomial().is_some() && b.as_polynomial().is_some())
    }

    /// The echelon basis of the span of the left tensor factors — the pole
    /// space of a canonical minimal-rank element.
    pub fn pol(&self) -> Vec<RationalFunction> {
        let a_list: Vec<RationalFunction> = self.tensors.iter().map(|t| t.0.clone()).collect();
        echelonize(&a_list).0
    }

    /// Product in the ring; every cross term `∂⁻¹(bᵢcⱼ)∂⁻¹` requires a
    /// rational antiderivative of `bᵢcⱼ`.
    pub fn try_mul(&self, rhs: &IntegrationOp) -> Result<IntegrationOp> {
        let scalar = &self.scalar * &rhs.scalar;
        let mut tensors: Vec<(RationalFunction, RationalFunction)> = Vec::new();
        for (c, d) in &rhs.tensors {
            tensors.push((&self.scalar * c, d.clone()));
        }
        for (a, b) in &self.tensors {
            tensors.push((a.clone(), b * &rhs.scalar));
        }
        for (a, b) in &self.tensors {
            for (c, d) in &rhs.tensors {
                // a∂⁻¹b·c∂⁻¹d = (a·u)∂⁻¹d − a∂⁻¹(u·d), u = ∫(b·c)
                let u = (b * c)
                    .antiderivative()
                    .map_err(|_| Error::AntiderivativeObstruction)?;
                tensors.push((a * &u, d.clone()));
                tensors.push((-a, &u * d));
            }
        }
        Ok(IntegrationOp::new(scalar, tensors))
    }

    /// Converts to a fraction: the denominator annihilates the left tensor
    /// factors, which lands the product back in F⟨∂⟩. For canonical input
    /// the resulting length equals the tensor rank.
    pub fn to_fraction(&self) -> PdoFraction {
        if self.tensors.is_empty() {
            return PdoFraction::from(DiffOp::from_fn(self.scalar.clone()));
        }
        let a_list: Vec<RationalFunction> = self.tensors.iter().map(|t| t.0.clone()).collect();
        let p = annihilator(&a_list, true).expect("canonical left factors are independent");
        let mut q = &p * &DiffOp::from_fn(self.scalar.clone());
        for (a, b) in &self.tensors {
            // P·a∂⁻¹b = S·b with P·a = S·∂ (the remainder is P(a) = 0).
            let pa = &p * &DiffOp::from_fn(a.clone());
            let (s, rem) = pa.right_divide(&DiffOp::d()).expect("∂ is nonzero");
            debug_assert!(rem.is_zero(), "annihilated coefficient leaves no remainder");
            q = &q + &(&s * &DiffOp::from_fn(b.clone()));
        }
        PdoFraction::new(p, q).expect("annihilator is nonzero")
    }

    /// `(∂⁻¹a' − a)⁻¹ = ∂⁻¹(a⁻¹)' − a⁻¹`.
    pub fn first_order_inverse(a: &RationalFunction) -> Result<IntegrationOp> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        let a_inv = a.inv()?;
        Ok(IntegrationOp::new(
            -&a_inv,
            vec![(RationalFunction::one(), a_inv.derivative())],
        ))
    }
}

impl Add for &IntegrationOp {
    type Output = IntegrationOp;
    fn add(self, rhs: &IntegrationOp) -> IntegrationOp {
        let mut tensors = self.tensors.clone();
        tensors.extend(rhs.tensors.iter().cloned());
        IntegrationOp::new(&self.scalar + &rhs.scalar, tensors)
    }
}

impl Sub for &IntegrationOp {
    type Output = IntegrationOp;
    fn sub(self, rhs: &IntegrationOp) -> IntegrationOp {
        self + &-rhs
    }
}

impl Neg for &IntegrationOp {
    type Output = IntegrationOp;
    fn neg(self) -> IntegrationOp {
        IntegrationOp {
            scalar: -&self.scalar,
            tensors: self.tensors.iter().map(|(a, b)| (-a, b.clone())).collect(),
        }
    }
}

impl Add for IntegrationOp {
    type Output = IntegrationOp;
    fn add(self, rhs: IntegrationOp) -> IntegrationOp {
        &self + &rhs
    }
}

impl Sub for IntegrationOp {
    type Output = IntegrationOp;
    fn sub(self, rhs: IntegrationOp) -> IntegrationOp {
        &self - &rhs
    }
}

impl Neg for IntegrationOp {
    type Output = IntegrationOp;
    fn neg(self) -> IntegrationOp {
        -&self
    }
}

fn fmt_tensor(
    f: &mut fmt::Formatter<'_>,
    a: &RationalFunction,
    b: &RationalFunction,
) -> fmt::Result {
    if !a.is_one() {
        if a.needs_parens_in_product() {
            write!(f, "({})*", a)?;
        } else {
            write!(f, "{}*", a)?;
        }
    }
    write!(f, "d^-1")?;
    if !b.is_one() {
        if b.needs_parens_in_product() {
            write!(f, "*({})", b)?;
        } else {
            write!(f, "*{}", b)?;
        }
    }
    Ok(())
}

impl fmt::Display for IntegrationOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        if !self.scalar.is_zero() {
            write!(f, "{}", self.scalar)?;
            first = false;
        }
        for (a, b) in &self.tensors {
            let negative = a.display_sign_negative();
            let a_printed = if negative { -a } else { a.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            fmt_tensor(f, &a_printed, b)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for IntegrationOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// An element of F⟨∂⟩ + F⟨∂⁻¹⟩ in split canonical form: the differential
/// part carries every ∂ⁿ, n ≥ 0 (including the scalar), and the integral
/// part is a canonical integration operator with zero scalar.
#[derive(Clone, PartialEq, Eq)]
pub struct MixedOp {
    diff: DiffOp,
    int: IntegrationOp,
}

impl MixedOp {
    pub fn zero() -> Self {
        MixedOp {
            diff: DiffOp::zero(),
            int: IntegrationOp::zero(),
        }
    }

    pub fn from_diff(diff: DiffOp) -> Self {
        MixedOp {
            diff,
            int: IntegrationOp::zero(),
        }
    }

    /// The scalar of the integration operator moves into the ∂⁰ slot.
    pub fn from_int(int: IntegrationOp) -> Self {
        let scalar = int.scalar.clone();
        let tensors = IntegrationOp {
            scalar: RationalFunction::zero(),
            tensors: int.tensors,
        };
        MixedOp {
            diff: DiffOp::from_fn(scalar),
            int: tensors,
        }
    }

    pub fn from_parts(diff: DiffOp, int: IntegrationOp) -> Self {
        &MixedOp::from_diff(diff) + &MixedOp::from_int(int)
    }

    pub fn diff_part(&self) -> &DiffOp {
        &self.diff
    }

    pub fn int_part(&self) -> &IntegrationOp {
        &self.int
    }

    pub fn into_int_part(self) -> IntegrationOp {
        self.int
    }

    /// The whole element as an integration operator, when the differential
    /// part is at most a scalar.
    pub fn as_integration_op(&self) -> Option<IntegrationOp> {
        if self.diff.degree().map_or(true, |d| d == 0) {
            Some(IntegrationOp {
                scalar: self.diff.coeff(0),
                tensors: self.int.tensors.clone(),
            })
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.diff.is_zero() && self.int.is_zero()
    }

    pub fn has_polynomial_coeffs(&self) -> bool {
        self.diff.has_polynomial_coeffs() && self.int.has_polynomial_coeffs()
    }

    pub fn to_fraction(&self) -> PdoFraction {
        &PdoFraction::from(self.diff.clone()) + &self.int.to_fraction()
    }

    /// Product in F(∂), staying inside F⟨∂⟩ + F⟨∂⁻¹⟩. Only the cross terms
    /// between two integral parts can hit the antiderivative obstruction.
    pub fn try_mul(&self, rhs: &MixedOp) -> Result<MixedOp> {
        let dd = MixedOp::from_diff(&self.diff * &rhs.diff);
        let di = mul_diff_int(&self.diff, &rhs.int);
        let id = mul_int_diff(&self.int, &rhs.diff);
        let ii = MixedOp::from_int(self.int.try_mul(&rhs.int)?);
        Ok(&(&dd + &di) + &(&id + &ii))
    }
}

/// `∂ᵏ · (b∂⁻¹c)`, by ∂·(b∂⁻¹c) = bc + b'∂⁻¹c.
fn d_pow_times_tensor(k: usize, b: &RationalFunction, c: &RationalFunction) -> MixedOp {
    if k == 0 {
        return MixedOp {
            diff: DiffOp::zero(),
            int: IntegrationOp::tensor(b.clone(), c.clone()),
        };
    }
    let diff = &DiffOp::d_pow(k - 1) * &DiffOp::from_fn(b * c);
    &MixedOp::from_diff(diff) + &d_pow_times_tensor(k - 1, &b.derivative(), c)
}

fn mul_diff_int(d: &DiffOp, i: &IntegrationOp) -> MixedOp {
    debug_assert!(i.scalar.is_zero());
    let mut acc = MixedOp::zero();
    for (k, a) in d.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (b, c) in &i.tensors {
            let term = d_pow_times_tensor(k, b, c);
            // multiply by the function a on the left
            let scaled = MixedOp {
                diff: term.diff.scale(a),
                int: IntegrationOp::new(
                    RationalFunction::zero(),
                    term.int
                        .tensors
                        .iter()
                        .map(|(u, v)| (a * u, v.clone()))
                        .collect(),
                ),
            };
            acc = &acc + &scaled;
        }
    }
    acc
}

/// `∂⁻¹ · g∂ᵏ`, by ∂⁻¹g∂ = g − ∂⁻¹g'.
fn d_inv_times_diff_term(g: &RationalFunction, k: usize) -> MixedOp {
    if k == 0 {
        return MixedOp {
            diff: DiffOp::zero(),
            int: IntegrationOp::tensor(RationalFunction::one(), g.clone()),
        };
    }
    let diff = DiffOp::monomial(g.clone(), k - 1);
    &MixedOp::from_diff(diff) - &d_inv_times_diff_term(&g.derivative(), k - 1)
}

fn mul_int_diff(i: &IntegrationOp, d: &DiffOp) -> MixedOp {
    debug_assert!(i.scalar.is_zero());
    let mut acc = MixedOp::zero();
    for (b, c) in &i.tensors {
        for (k, w) in d.coeffs().iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let term = d_inv_times_diff_term(&(c * w), k);
            let scaled = MixedOp {
                diff: term.diff.scale(b),
                int: IntegrationOp::new(
                    RationalFunction::zero(),
                    term.int
                        .tensors
                        .iter()
                        .map(|(u, v)| (b * u, v.clone()))
                        .collect(),
                ),
            };
            acc = &acc + &scaled;
        }
    }
    acc
}

impl Add for &MixedOp {
    type Output = MixedOp;
    fn add(self, rhs: &MixedOp) -> MixedOp {
        let int = &self.int + &rhs.int;
        debug_assert!(int.scalar.is_zero());
        MixedOp {
            diff: &self.diff + &rhs.diff,
            int,
        }
    }
}

impl Sub for &MixedOp {
    type Output = MixedOp;
    fn sub(self, rhs: &MixedOp) -> MixedOp {
        self + &-rhs
    }
}

impl Neg for &MixedOp {
    type Output = MixedOp;
    fn neg(self) -> MixedOp {
        MixedOp {
            diff: -&self.diff,
            int: -&self.int,
        }
    }
}

impl Add for MixedOp {
    type Output = MixedOp;
    fn add(self, rhs: MixedOp) -> MixedOp {
        &self + &rhs
    }
}

impl Sub for MixedOp {
    type Output = MixedOp;
    fn sub(self, rhs: MixedOp) -> MixedOp {
        &self - &rhs
    }
}

impl Neg for MixedOp {
    type Output = MixedOp;
    fn neg(self) -> MixedOp {
        -&self
    }
}

impl From<DiffOp> for MixedOp {
    fn from(d: DiffOp) -> Self {
        MixedOp::from_diff(d)
    }
}

impl From<IntegrationOp> for MixedOp {
    fn from(i: IntegrationOp) -> Self {
        MixedOp::from_int(i)
    }
}

impl fmt::Display for MixedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.diff.is_zero(), self.int.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.diff),
            (true, false) => write!(f, "{}", self.int),
            (false, false) => write!(f, "{} + {}", self.diff, self.int),
        }
    }
}

impl fmt::Debug for MixedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
