//! The differential field F of rational functions: exact scalars,
//! polynomials, rational functions, and the Wronskian/echelon toolkit used
//! to detect linear (in)dependence over the constants.

mod linalg;
mod polynomial;
mod rational;
mod ratfun;

pub use polynomial::Polynomial;
pub use rational::{binomial, factorial, rat, ratio, Rational};
pub use ratfun::RationalFunction;

pub(crate) use linalg::{det_rf, nullspace, rref};

/// Rows of successive derivatives: row `i` holds the `i`-th derivatives of
/// the inputs; `count` rows are produced.
pub(crate) fn derivative_rows(fs: &[RationalFunction], count: usize) -> Vec<Vec<RationalFunction>> {
    let mut rows = Vec::with_capacity(count);
    let mut current: Vec<RationalFunction> = fs.to_vec();
    for _ in 0..count {
        rows.push(current.clone());
        current = current.iter().map(|f| f.derivative()).collect();
    }
    rows
}

/// The Wronskian determinant of the given functions (1 for the empty list).
pub fn wronskian(fs: &[RationalFunction]) -> RationalFunction {
    let n = fs.len();
    if n == 0 {
        return RationalFunction::one();
    }
    det_rf(derivative_rows(fs, n))
}

/// Linear independence over the constants: nonvanishing of the Wronskian.
pub fn c_independent(fs: &[RationalFunction]) -> bool {
    !wronskian(fs).is_zero()
}

/// Reduced-echelon basis of the span of `fs` over the constants, together
/// with the coordinates of every input in that basis.
///
/// The inputs are brought to a common monic denominator and the numerator
/// coefficient vectors are row-reduced with columns ordered by descending
/// exponent, so e.g. the span of `{x+1, x-1}` gets the basis `[x, 1]`.
pub fn echelonize(
    fs: &[RationalFunction],
) -> (Vec<RationalFunction>, Vec<Vec<Rational>>) {
    if fs.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let common_den = fs
        .iter()
        .fold(Polynomial::one(), |acc, f| Polynomial::lcm(&acc, f.den()));
    let numerators: Vec<Polynomial> = fs
        .iter()
        .map(|f| f.num() * &common_den.exact_div(f.den()))
        .collect();
    let width = numerators
        .iter()
        .filter_map(|p| p.degree())
        .max()
        .map_or(0, |d| d + 1);

    // Column j holds the coefficient of x^(width-1-j): descending exponents.
    let to_vector = |p: &Polynomial| -> Vec<Rational> {
        (0..width).map(|j| p.coeff(width - 1 - j)).collect()
    };
    let mut rows: Vec<Vec<Rational>> = numerators.iter().map(to_vector).collect();
    let pivots = rref(&mut rows);

    let den_rf: RationalFunction = common_den.into();
    let basis: Vec<RationalFunction> = rows
        .iter()
        .map(|v| {
            let coeffs: Vec<Rational> = (0..width).map(|k| v[width - 1 - k].clone()).collect();
            let p = Polynomial::new(coeffs);
            RationalFunction::from(p)
                .checked_div(&den_rf)
                .expect("common denominator is nonzero")
        })
        .collect();

    // A reduced-echelon basis vector has a 1 in its pivot column and zeros
    // at the other pivots, so coordinates can be read off directly.
    let coords: Vec<Vec<Rational>> = numerators
        .iter()
        .map(|p| {
            let v = to_vector(p);
            pivots.iter().map(|&c| v[c].clone()).collect()
        })
        .collect();

    (basis, coords)
}
