//! Seeded random generators shared by the integration suites. Everything
//! is deterministic: each suite fixes its own seed.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use orecalc_core::diffop::DiffOp;
use orecalc_core::field::{rat, ratio, Polynomial, RationalFunction};
use orecalc_core::fraction::PdoFraction;
use orecalc_core::intop::{IntegrationOp, MixedOp};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn rand_rational(rng: &mut StdRng) -> num_rational::BigRational {
    let num = rng.random_range(-3i64..=3);
    let den = rng.random_range(1i64..=2);
    ratio(num, den)
}

pub fn rand_poly(rng: &mut StdRng, max_deg: usize) -> Polynomial {
    let deg = rng.random_range(0..=max_deg);
    Polynomial::new((0..=deg).map(|_| rand_rational(rng)).collect())
}

pub fn rand_poly_nonzero(rng: &mut StdRng, max_deg: usize) -> Polynomial {
    loop {
        let p = rand_poly(rng, max_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

/// A small rational function: polynomial numerator over one of a few small
/// monic denominators.
pub fn rand_rf(rng: &mut StdRng, max_deg: usize) -> RationalFunction {
    let num = rand_poly(rng, max_deg);
    let den = match rng.random_range(0..4) {
        0 | 1 => Polynomial::one(),
        2 => Polynomial::x(),
        _ => Polynomial::from_i64(&[1, 1]),
    };
    RationalFunction::new(num, den).expect("nonzero denominator")
}

pub fn rand_rf_nonzero(rng: &mut StdRng, max_deg: usize) -> RationalFunction {
    loop {
        let f = rand_rf(rng, max_deg);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Operator of degree exactly ≤ max_deg with rational-function coefficients.
pub fn rand_op(rng: &mut StdRng, max_deg: usize, coeff_deg: usize) -> DiffOp {
    let deg = rng.random_range(0..=max_deg);
    DiffOp::new((0..=deg).map(|_| rand_rf(rng, coeff_deg)).collect())
}

pub fn rand_op_nonzero(rng: &mut StdRng, max_deg: usize, coeff_deg: usize) -> DiffOp {
    loop {
        let p = rand_op(rng, max_deg, coeff_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Operator with polynomial coefficients.
pub fn rand_poly_op(rng: &mut StdRng, max_deg: usize, coeff_deg: usize) -> DiffOp {
    let deg = rng.random_range(0..=max_deg);
    DiffOp::new(
        (0..=deg)
            .map(|_| RationalFunction::from(rand_poly(rng, coeff_deg)))
            .collect(),
    )
}

pub fn rand_poly_op_nonzero(rng: &mut StdRng, max_deg: usize, coeff_deg: usize) -> DiffOp {
    loop {
        let p = rand_poly_op(rng, max_deg, coeff_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Polynomial with small integer coefficients.
pub fn rand_int_poly(rng: &mut StdRng, max_deg: usize) -> Polynomial {
    let deg = rng.random_range(0..=max_deg);
    Polynomial::new((0..=deg).map(|_| rat(rng.random_range(-2i64..=2))).collect())
}

fn rand_int_op(rng: &mut StdRng, max_deg: usize, coeff_deg: usize) -> DiffOp {
    let deg = rng.random_range(0..=max_deg);
    DiffOp::new(
        (0..=deg)
            .map(|_| RationalFunction::from(rand_int_poly(rng, coeff_deg)))
            .collect(),
    )
}

pub fn rand_fraction(rng: &mut StdRng) -> PdoFraction {
    rand_fraction_sized(rng, 2)
}

/// Fraction whose raw numerator and denominator have degree ≤ `max_deg`.
pub fn rand_fraction_sized(rng: &mut StdRng, max_deg: usize) -> PdoFraction {
    let den = loop {
        let p = rand_int_op(rng, max_deg, 1);
        if !p.is_zero() {
            break p;
        }
    };
    let num = rand_int_op(rng, max_deg, 1);
    PdoFraction::new(den, num).expect("nonzero denominator")
}

/// Canonical integration operator with polynomial coefficients.
pub fn rand_intop(rng: &mut StdRng, max_rank: usize, coeff_deg: usize) -> IntegrationOp {
    let count = rng.random_range(0..=max_rank);
    let tensors = (0..count)
        .map(|_| {
            (
                RationalFunction::from(rand_poly_nonzero(rng, coeff_deg)),
                RationalFunction::from(rand_poly_nonzero(rng, coeff_deg)),
            )
        })
        .collect();
    let scalar = RationalFunction::from(rand_poly(rng, coeff_deg));
    IntegrationOp::new(scalar, tensors)
}

/// Ring element with polynomial coefficients (differential plus tensors).
pub fn rand_mixed(rng: &mut StdRng) -> MixedOp {
    let diff = rand_poly_op(rng, 2, 2);
    let int = rand_intop(rng, 2, 2);
    MixedOp::from_parts(diff, int)
}
