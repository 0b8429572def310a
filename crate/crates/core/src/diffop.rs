//! The ring F⟨∂⟩ of differential operators over the rational functions,
//! with the commutation rule ∂a = a∂ + a'.
//!
//! Degrees obey deg(PQ) = deg P + deg Q and deg(P+Q) ≤ max(deg P, deg Q);
//! the zero operator has degree `None` (minus infinity). Both one-sided
//! Euclidean divisions exist, giving GCRD/GCLD by the Euclidean loop and
//! least common left multiples by the extended scheme.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{
    c_independent, derivative_rows, det_rf, nullspace, rat, Polynomial, Rational, RationalFunction,
};

/// A differential operator `a₀ + a₁∂ + … + a_n∂ⁿ`; `coeffs[i]` holds the
/// coefficient of ∂ⁱ and the leading coefficient is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    coeffs: Vec<RationalFunction>,
}

impl DiffOp {
    pub fn new(mut coeffs: Vec<RationalFunction>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        DiffOp { coeffs }
    }

    pub fn zero() -> Self {
        DiffOp { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DiffOp::from_fn(RationalFunction::one())
    }

    /// The generator ∂.
    pub fn d() -> Self {
        DiffOp::new(vec![RationalFunction::zero(), RationalFunction::one()])
    }

    /// ∂ⁿ.
    pub fn d_pow(n: usize) -> Self {
        let mut coeffs = vec![RationalFunction::zero(); n + 1];
        coeffs[n] = RationalFunction::one();
        DiffOp { coeffs }
    }

    /// The multiplication operator by `a` (degree 0, or zero).
    pub fn from_fn(a: RationalFunction) -> Self {
        DiffOp::new(vec![a])
    }

    /// `a·∂ⁿ`.
    pub fn monomial(a: RationalFunction, n: usize) -> Self {
        if a.is_zero() {
            return DiffOp::zero();
        }
        let mut coeffs = vec![RationalFunction::zero(); n + 1];
        coeffs[n] = a;
        DiffOp { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; `None` is the minus-infinity degree of the zero operator.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&RationalFunction> {
        self.coeffs.last()
    }

    /// Coefficient of ∂ᵏ (zero when out of range).
    pub fn coeff(&self, k: usize) -> RationalFunction {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(RationalFunction::zero)
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    /// Left-multiplication by a function: `a·P` scales every coefficient.
    pub fn scale(&self, a: &RationalFunction) -> DiffOp {
        if a.is_zero() {
            return DiffOp::zero();
        }
        DiffOp {
            coeffs: self.coeffs.iter().map(|c| a * c).collect(),
        }
    }

    /// Divide on the left by the leading coefficient.
    pub fn monic(&self) -> DiffOp {
        match self.leading() {
            None => DiffOp::zero(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient nonzero")),
        }
    }

    /// Operator applied as a function: `P(f) = Σ aᵢ f⁽ⁱ⁾`.
    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        let mut acc = RationalFunction::zero();
        let mut derivative = f.clone();
        for a in &self.coeffs {
            acc = &acc + &(a * &derivative);
            derivative = derivative.derivative();
        }
        acc
    }

    /// `∂·P` — one left composition with the generator.
    fn d_compose(&self) -> DiffOp {
        // ∂·(Σ aᵢ∂ⁱ) = Σ (aᵢ' ∂ⁱ + aᵢ ∂^{i+1})
        let mut coeffs = vec![RationalFunction::zero(); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs[i] = &coeffs[i] + &a.derivative();
            coeffs[i + 1] = &coeffs[i + 1] + a;
        }
        DiffOp::new(coeffs)
    }

    /// True when every coefficient is a polynomial.
    pub fn has_polynomial_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.as_polynomial().is_some())
    }

    /// Right Euclidean division: `self = q·d + r` with `deg r < deg d`.
    pub fn right_divide(&self, d: &DiffOp) -> Result<(DiffOp, DiffOp)> {
        let dd = d.degree().ok_or(Error::DivisionByZeroOperator)?;
        let d_lead_inv = d.leading().unwrap().inv()?;
        let mut rem = self.clone();
        let mut quo = DiffOp::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let t = rem.leading().unwrap() * &d_lead_inv;
            let term = DiffOp::monomial(t, rd - dd);
            rem = &rem - &(&term * d);
            quo = &quo + &term;
        }
        Ok((quo, rem))
    }

    /// Left Euclidean division: `self = d·q + r` with `deg r < deg d`.
    pub fn left_divide(&self, d: &DiffOp) -> Result<(DiffOp, DiffOp)> {
        let dd = d.degree().ok_or(Error::DivisionByZeroOperator)?;
        let d_lead_inv = d.leading().unwrap().inv()?;
        let mut rem = self.clone();
        let mut quo = DiffOp::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            // Leading coefficient of d·(t∂ᵏ) is lc(d)·t.
            let t = rem.leading().unwrap() * &d_lead_inv;
            let term = DiffOp::monomial(t, rd - dd);
            rem = &rem - &(d * &term);
            quo = &quo + &term;
        }
        Ok((quo, rem))
    }
}

impl Mul for &DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        if self.is_zero() || rhs.is_zero() {
            return DiffOp::zero();
        }
        // P·Q = Σ aᵢ (∂ⁱ·Q), building ∂ⁱ·Q incrementally.
        let mut acc = DiffOp::zero();
        let mut power = rhs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = power.d_compose();
            }
            if !a.is_zero() {
                acc = &acc + &power.scale(a);
            }
        }
        acc
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DiffOp::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DiffOp::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for DiffOp {
            type Output = DiffOp;
            fn $method(self, rhs: DiffOp) -> DiffOp {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        -&self
    }
}

impl From<RationalFunction> for DiffOp {
    fn from(a: RationalFunction) -> Self {
        DiffOp::from_fn(a)
    }
}

/// Monic greatest common right divisor, by the right-division Euclidean loop.
///
/// Remainders are rescaled monic each step (a left unit, harmless for
/// right divisibility); without this the coefficient fractions compound
/// across steps and the loop crawls.
pub fn gcrd(p: &DiffOp, q: &DiffOp) -> Result<DiffOp> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut a = p.clone();
    let mut b = q.clone();
    while !b.is_zero() {
        let (_, r) = a.right_divide(&b)?;
        a = b;
        b = r.monic();
    }
    Ok(a.monic())
}

/// Monic greatest common left divisor, by the left-division Euclidean loop.
///
/// The loop preserves the right ideal `P·R + Q·R`, so the result is
/// normalized by a unit on the right: `g · lc(g)⁻¹`. Left-scaling would not
/// preserve left-divisibility by the common factors.
pub fn gcld(p: &DiffOp, q: &DiffOp) -> Result<DiffOp> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroInput);
    }
    // Right-multiplication by a unit preserves left divisibility, so each
    // remainder can be normalized to leading coefficient 1.
    let right_normalize = |r: &DiffOp| -> Result<DiffOp> {
        let u = r.leading().expect("nonzero").inv()?;
        Ok(r * &DiffOp::from_fn(u))
    };
    let mut a = p.clone();
    let mut b = q.clone();
    while !b.is_zero() {
        let (_, r) = a.left_divide(&b)?;
        a = b;
        b = if r.is_zero() { r } else { right_normalize(&r)? };
    }
    right_normalize(&a)
}

/// Least common left multiple with its multipliers: `L = U·P = V·Q`, `L`
/// monic of minimal degree. Computed by the extended Euclidean scheme on
/// right divisions, tracking cofactors with `rᵢ = uᵢ·P + vᵢ·Q`.
pub fn lclm(p: &DiffOp, q: &DiffOp) -> Result<(DiffOp, DiffOp, DiffOp)> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut r_prev = p.clone();
    let mut r_cur = q.clone();
    let (mut u_prev, mut v_prev) = (DiffOp::one(), DiffOp::zero());
    let (mut u_cur, mut v_cur) = (DiffOp::zero(), DiffOp::one());
    loop {
        let (quo, rem) = r_prev.right_divide(&r_cur)?;
        let u_next = &u_prev - &(&quo * &u_cur);
        let v_next = &v_prev - &(&quo * &v_cur);
        if rem.is_zero() {
            // u_next·P + v_next·Q = 0, so u_next·P = −v_next·Q is the lclm.
            let l = &u_next * p;
            let lead_inv = l
                .leading()
                .expect("cofactor row of the Euclidean scheme is nonzero")
                .inv()?;
            let l = l.scale(&lead_inv);
            let u = u_next.scale(&lead_inv);
            let v = (-&v_next).scale(&lead_inv);
            debug_assert_eq!(l, &v * q);
            return Ok((l, u, v));
        }
        // Rescale the whole row monic; a common left scalar keeps the
        // identity rᵢ = uᵢ·P + vᵢ·Q intact and the divisions cheap.
        let c = rem.leading().expect("nonzero remainder").inv()?;
        r_prev = r_cur;
        r_cur = rem.scale(&c);
        u_prev = u_cur;
        u_cur = u_next.scale(&c);
        v_prev = v_cur;
        v_cur = v_next.scale(&c);
    }
}

/// The operator of degree `n = fs.len()` annihilating exactly the span of
/// `fs`, by the bordered-Wronskian determinant. The coefficient of y⁽ᵏ⁾ is
/// the signed minor obtained by deleting derivative row `k`; with `monic`
/// the output is divided by its leading coefficient (±the Wronskian).
pub fn annihilator(fs: &[RationalFunction], monic: bool) -> Result<DiffOp> {
    if fs.is_empty() {
        return Err(Error::DependentSolutions);
    }
    if !c_independent(fs) {
        return Err(Error::DependentSolutions);
    }
    let n = fs.len();
    let rows = derivative_rows(fs, n + 1);
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let minor: Vec<Vec<RationalFunction>> = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, row)| row.clone())
            .collect();
        let mut c = det_rf(minor);
        if k % 2 == 1 {
            c = -&c;
        }
        coeffs.push(c);
    }
    let op = DiffOp::new(coeffs);
    debug_assert_eq!(op.degree(), Some(n));
    Ok(if monic { op.monic() } else { op })
}

/// Reduced-echelon basis (ascending degree) of the polynomial kernel
/// `{y ∈ C[x] : deg y ≤ degree_bound, P(y) = 0}`, by an exact linear solve
/// on the coefficients. The result never exceeds `deg P` elements.
pub fn kernel_poly_basis(p: &DiffOp, degree_bound: usize) -> Vec<Polynomial> {
    if p.is_zero() {
        return Vec::new();
    }
    // Column j: P(x^j), all brought over one common denominator.
    let images: Vec<RationalFunction> = (0..=degree_bound)
        .map(|j| p.apply(&Polynomial::monomial(rat(1), j).into()))
        .collect();
    let common_den = images
        .iter()
        .fold(Polynomial::one(), |acc, f| Polynomial::lcm(&acc, f.den()));
    let numerators: Vec<Polynomial> = images
        .iter()
        .map(|f| f.num() * &common_den.exact_div(f.den()))
        .collect();
    let height = numerators
        .iter()
        .filter_map(|q| q.degree())
        .max()
        .map_or(1, |d| d + 1);
    let rows: Vec<Vec<Rational>> = (0..height)
        .map(|k| numerators.iter().map(|q| q.coeff(k)).collect())
        .collect();
    let kernel = nullspace(rows, degree_bound + 1);

    // Canonicalize: reduce the solution vectors with pivots on the lowest
    // degree first, then return by ascending degree.
    let mut vecs = kernel;
    crate::field::rref(&mut vecs);
    let mut basis: Vec<Polynomial> = vecs.into_iter().map(Polynomial::new).collect();
    basis.sort_by_key(|q| q.degree());
    debug_assert!(basis.len() <= p.degree().unwrap_or(0));
    basis
}

impl DiffOp {
    /// Splits off the first-order right factor `R = ∂ − s'/s` determined by
    /// a kernel element `s`, returning `(Q, R)` with `self = Q·R` exactly.
    pub fn factor_by_solution(&self, s: &RationalFunction) -> Result<(DiffOp, DiffOp)> {
        if s.is_zero() || !self.apply(s).is_zero() {
            return Err(Error::NotASolution);
        }
        let log_deriv = s.derivative().checked_div(s)?;
        let r = DiffOp::new(vec![-&log_deriv, RationalFunction::one()]);
        let (q, rem) = self.right_divide(&r)?;
        debug_assert!(
            rem.is_zero(),
            "a kernel element always yields an exact right factor"
        );
        Ok((q, r))
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, c: &RationalFunction, k: usize) -> fmt::Result {
    let trivial = c.is_one();
    if !trivial || k == 0 {
        // multi-term coefficients need grouping: against `*d^k`, and against
        // the sign the caller may have placed before a constant term
        if c.needs_parens_in_product() {
            write!(f, "({})", c)?;
        } else {
            write!(f, "{}", c)?;
        }
    }
    if k == 0 {
        return Ok(());
    }
    if !trivial {
        write!(f, "*")?;
    }
    if k == 1 {
        write!(f, "d")
    } else {
        write!(f, "d^{}", k)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
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
            fmt_term(f, &printed, k)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
