//! The differential field F of rational functions over the exact rationals,
//! with derivation d/dx.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::linalg;
use super::polynomial::Polynomial;
use super::rational::{rat, Rational};
use crate::error::{Error, Result};

/// A rational function `num/den` in canonical form: `gcd(num, den) = 1`,
/// `den` monic and nonzero. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Polynomial, den: Polynomial) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RationalFunction {
                num,
                den: Polynomial::one(),
            };
        }
        let g = Polynomial::gcd(&num, &den);
        let num = num.exact_div(&g);
        let den = den.exact_div(&g);
        let lead = den.leading().expect("den nonzero").recip();
        RationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Polynomial::one().into()
    }

    /// The variable `x`.
    pub fn var() -> Self {
        Polynomial::x().into()
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::constant(c).into()
    }

    pub fn from_i64(n: i64) -> Self {
        RationalFunction::constant(rat(n))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Returns the numerator if the denominator is 1.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.degree().map_or(true, |d| d == 0)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents invert (error on zero base).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RationalFunction::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Quotient-rule derivative, reduced.
    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let den = &self.den * &self.den;
        Self::reduced(num, den)
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.derivative();
        }
        f
    }

    /// Evaluation at 0; errors when 0 is a pole.
    pub fn eval_at_zero(&self) -> Result<Rational> {
        let d = self.den.eval_at_zero();
        if d.is_zero() {
            return Err(Error::PoleAtZero);
        }
        Ok(self.num.eval_at_zero() / d)
    }

    pub fn eval(&self, at: &Rational) -> Result<Rational> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(Error::PoleAtZero);
        }
        Ok(self.num.eval(at) / d)
    }

    /// The rational antiderivative `g` with `g' = self`, when one exists.
    ///
    /// The polynomial part is integrated termwise with zero constant term;
    /// the proper part goes through Hermite–Ostrogradsky reduction
    /// (`A/D = (B/D⁻)' + C/D*` with `D⁻ = gcd(D, D')`, `D* = D/D⁻`). A
    /// nonzero logarithmic remainder `C` means some residue is nonzero and
    /// no rational antiderivative exists.
    pub fn antiderivative(&self) -> Result<Self> {
        let (quo, rem) = self.num.div_rem(&self.den);
        let poly_part = quo.antiderivative();
        if rem.is_zero() {
            return Ok(poly_part.into());
        }

        let d = &self.den;
        let d_minus = Polynomial::gcd(d, &d.derivative());
        let d_star = d.exact_div(&d_minus);
        // t = D⁻' · D* / D⁻ is a polynomial (standard multiplicity count).
        let t = (&d_minus.derivative() * &d_star).exact_div(&d_minus);

        // Unknowns: B (deg < deg D⁻) then C (deg < deg D*), matched against
        // rem = B'·D* − B·t + C·D⁻ coefficient by coefficient.
        let nb = d_minus.degree().expect("gcd of nonzero inputs");
        let nc = d_star.degree().expect("den/gcd nonzero");
        let ncols = nb + nc;
        let max_deg = d.degree().unwrap() + 1;

        let mut columns: Vec<Polynomial> = Vec::with_capacity(ncols);
        for j in 0..nb {
            let basis = Polynomial::monomial(rat(1), j);
            let contrib = &(&basis.derivative() * &d_star) - &(&basis * &t);
            columns.push(contrib);
        }
        for j in 0..nc {
            columns.push(&Polynomial::monomial(rat(1), j) * &d_minus);
        }

        let rows: Vec<Vec<Rational>> = (0..max_deg)
            .map(|k| columns.iter().map(|p| p.coeff(k)).collect())
            .collect();
        let rhs: Vec<Rational> = (0..max_deg).map(|k| rem.coeff(k)).collect();
        let sol = linalg::solve(&rows, &rhs, ncols)
            .expect("Hermite reduction system is always consistent");

        let c_poly = Polynomial::new(sol[nb..].to_vec());
        if !c_poly.is_zero() {
            return Err(Error::NoRationalAntiderivative);
        }
        let b_poly = Polynomial::new(sol[..nb].to_vec());
        let proper = Self::reduced(b_poly, d_minus);
        Ok(&RationalFunction::from(poly_part) + &proper)
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::reduced(num, &self.den * &rhs.den)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RationalFunction::reduced(num, &self.den * &rhs.den)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

fn multi_term(p: &Polynomial) -> bool {
    p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
}

impl RationalFunction {
    /// True when the canonical text form starts with a top-level `+`/`-`
    /// chain and therefore needs parentheses inside a product.
    pub(crate) fn needs_parens_in_product(&self) -> bool {
        self.den.is_one() && multi_term(&self.num)
    }

    /// Sign used for pretty-printing sums of terms.
    pub(crate) fn display_sign_negative(&self) -> bool {
        self.num.leading().map_or(false, |l| l.is_negative())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if multi_term(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        // den is monic, so a single-term denominator is a plain power of x
        // and binds correctly without parentheses.
        if multi_term(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
