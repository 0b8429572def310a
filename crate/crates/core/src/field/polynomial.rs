//! Dense univariate polynomials over the exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{rat, Rational};

fn int_content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

/// Coefficients cleared to a primitive integer vector (sign kept as is).
fn int_primitive(p: &Polynomial) -> Vec<BigInt> {
    let den_lcm = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&den_lcm / c.denom()))
        .collect();
    let content = int_content(&ints);
    ints.into_iter().map(|c| c / &content).collect()
}

/// Pseudo-remainder of integer polynomials: the remainder of lc(b)^k·a by b,
/// computed without leaving the integers. Requires b nonempty.
fn int_pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = b.last().expect("divisor nonzero");
    let mut r = a.to_vec();
    while r.len() > db {
        let lr = r.last().expect("trimmed below").clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        let shift = r.len() - 1 - db;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &lr * bc;
        }
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    r
}

/// A polynomial in `x` with rational coefficients, stored densely by
/// ascending exponent. The zero polynomial has an empty coefficient list;
/// otherwise the leading coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(rat(1))
    }

    /// The variable `x`.
    pub fn x() -> Self {
        Polynomial::new(vec![rat(0), rat(1)])
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Polynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Coefficient of `x^k` (zero when out of range).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn eval_at_zero(&self) -> Rational {
        self.coeff(0)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    /// The antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Polynomial {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / rat(k as i64 + 1));
        }
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => Polynomial::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    /// Panics if `d` is zero.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = d.degree().expect("division by the zero polynomial");
        let dl = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (Polynomial::zero(), self.clone());
        }
        let mut quo = vec![Rational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let t = &rem[k] / &dl;
            let shift = k - dd;
            for (i, dc) in d.coeffs.iter().enumerate() {
                let prod = dc * &t;
                rem[shift + i] -= prod;
            }
            quo[shift] = t;
        }
        (Polynomial::new(quo), Polynomial::new(rem))
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn exact_div(&self, d: &Polynomial) -> Polynomial {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "exact_div: nonzero remainder");
        q
    }

    /// Monic greatest common divisor.
    ///
    /// Runs a primitive pseudo-remainder sequence over the integers, which
    /// keeps intermediate coefficients small; plain monic Euclid over the
    /// rationals blows up quickly on the operator workloads above this.
    pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        let mut u = int_primitive(a);
        let mut v = int_primitive(b);
        if u.len() < v.len() {
            std::mem::swap(&mut u, &mut v);
        }
        loop {
            let r = int_pseudo_rem(&u, &v);
            if r.is_empty() {
                break;
            }
            let c = int_content(&r);
            u = v;
            v = r.into_iter().map(|x| x / &c).collect();
        }
        Polynomial::new(
            v.into_iter()
                .map(num_rational::BigRational::from_integer)
                .collect(),
        )
        .monic()
    }

    pub fn lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
        if a.is_zero() || b.is_zero() {
            return Polynomial::zero();
        }
        let g = Polynomial::gcd(a, b);
        (a * b).exact_div(&g).monic()
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        Polynomial::new(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - rhs.coeff(k));
        }
        Polynomial::new(coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Renders one monomial `c * x^k` in canonical expression syntax, without a
/// leading sign (the caller decides between `+` and `-`).
fn fmt_monomial(f: &mut fmt::Formatter<'_>, c: &Rational, k: usize) -> fmt::Result {
    if k == 0 {
        return write!(f, "{}", c);
    }
    if !c.is_one() {
        write!(f, "{}*", c)?;
    }
    if k == 1 {
        write!(f, "x")
    } else {
        write!(f, "x^{}", k)
    }
}

impl fmt::Display for Polynomial {
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
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            fmt_monomial(f, &c.abs(), k)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
