//! Command-line front end for exact differential-operator arithmetic.

use clap::{Parser, Subcommand, ValueEnum};

use orecalc_core::cocycle::{
    cocycle_defect, sigma0_closed_form, sigma0_oracle, sigma1, CircleBasisIndex,
};
use orecalc_core::diffop::{annihilator, kernel_poly_basis, DiffOp};
use orecalc_core::expr::{
    eval_str, json_of_diffop, json_of_formal, json_of_fraction, json_of_intop, json_of_value,
};
use orecalc_core::field::{wronskian, Rational, RationalFunction};
use orecalc_core::formal::FormalPdo;
use orecalc_core::fraction::{fraction_with_poles_zeros, PdoFraction};
use orecalc_core::intop::MixedOp;
use orecalc_core::{Error, Result};

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "orecalc",
    about = "Exact calculator for differential operators, Ore fractions, \
             integration operators and formal series over rational functions",
    version
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression in the operator tower.
    Eval { expr: String },
    /// Minimal presentation of a fraction: denominator, numerator, length.
    Minimal { expr: String },
    /// Apply a differential operator to a rational function.
    Apply { op: String, func: String },
    /// Wronskian determinant of the given functions.
    Wronskian { funcs: Vec<String> },
    /// The operator annihilating exactly the span of the given functions.
    Annihilator {
        funcs: Vec<String>,
        /// Normalize to a monic operator.
        #[arg(long)]
        monic: bool,
    },
    /// Basis of polynomial kernel elements up to a degree bound.
    Kernel {
        op: String,
        #[arg(long)]
        bound: usize,
    },
    /// Split off the first-order right factor determined by a solution.
    Factor {
        op: String,
        #[arg(long)]
        solution: String,
    },
    /// The operator whose kernel is the pole space of a fraction.
    Poles { expr: String },
    /// The operator whose kernel is the zero space of a fraction.
    Zeros { expr: String },
    /// Construct a fraction with prescribed pole and zero spaces.
    Construct {
        /// Comma-separated pole-space basis.
        #[arg(long, default_value = "")]
        poles: String,
        /// Comma-separated zero-space basis.
        #[arg(long, default_value = "")]
        zeros: String,
        #[arg(long, default_value_t = 8)]
        budget: u32,
    },
    /// Canonical normal form of an integration operator.
    #[command(name = "intop-normal")]
    IntopNormal { expr: String },
    /// Split a fraction into differential and integration parts.
    Separate { expr: String },
    /// Formal series expansion in powers of the inverse generator.
    Expand {
        expr: String,
        #[arg(long)]
        prec: u32,
    },
    /// The order valuation of an expression.
    Ord { expr: String },
    /// The trace cocycle of two ring elements with polynomial coefficients.
    Cocycle {
        p: String,
        q: String,
        /// Evaluate the closed form (requires a∂ⁿ and b∂⁻¹c shapes).
        #[arg(long, conflicts_with = "oracle")]
        closed_form: bool,
        /// Evaluate the trace oracle (the default).
        #[arg(long)]
        oracle: bool,
    },
    /// The circle cocycle on basis elements z^m (d/dz)^n, z^r (d/dz)^s.
    #[command(allow_negative_numbers = true)]
    Sigma1 { m: i64, n: u32, r: i64, s: u32 },
    /// 2-cocycle sum over a triple; always zero.
    #[command(name = "cocycle-defect")]
    CocycleDefect { p: String, q: String, r: String },
    /// TSV table of circle-cocycle values over a grid.
    #[command(name = "cocycle-table")]
    CocycleTable {
        #[arg(long)]
        mmax: u32,
        #[arg(long)]
        nmax: u32,
    },
}

fn parse_function(text: &str) -> Result<RationalFunction> {
    eval_str(text)?.as_function()
}

fn parse_operator(text: &str) -> Result<DiffOp> {
    eval_str(text)?.as_operator()
}

fn parse_function_list(text: &str) -> Result<Vec<RationalFunction>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_function)
        .collect()
}

fn parse_mixed(text: &str) -> Result<MixedOp> {
    let fraction = eval_str(text)?.as_fraction();
    let (diff, int) = fraction.separate()?;
    Ok(MixedOp::from_parts(diff, int))
}

fn functions_output(funcs: &[RationalFunction], format: Format) -> String {
    match format {
        Format::Text => funcs
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => serde_json::Value::Array(
            funcs
                .iter()
                .map(|f| serde_json::Value::String(f.to_string()))
                .collect(),
        )
        .to_string(),
    }
}

fn fraction_output(f: &PdoFraction, format: Format) -> String {
    match format {
        Format::Text => f.to_string(),
        Format::Json => json_of_fraction(f).to_string(),
    }
}

fn operator_output(p: &DiffOp, format: Format) -> String {
    match format {
        Format::Text => p.to_string(),
        Format::Json => json_of_diffop(p).to_string(),
    }
}

fn run(cli: Cli) -> Result<String> {
    let format = cli.format;
    match cli.command {
        Command::Eval { expr } => {
            let v = eval_str(&expr)?;
            Ok(match format {
                Format::Text => v.to_string(),
                Format::Json => json_of_value(&v).to_string(),
            })
        }
        Command::Minimal { expr } => {
            let f = eval_str(&expr)?.as_fraction();
            Ok(match format {
                Format::Text => format!(
                    "den: {}\nnum: {}\nlength: {}",
                    f.den(),
                    f.num(),
                    f.length()
                ),
                Format::Json => serde_json::json!({
                    "den": f.den().to_string(),
                    "num": f.num().to_string(),
                    "length": f.length(),
                })
                .to_string(),
            })
        }
        Command::Apply { op, func } => {
            let p = parse_operator(&op)?;
            let f = parse_function(&func)?;
            let result = p.apply(&f);
            Ok(match format {
                Format::Text => result.to_string(),
                Format::Json => serde_json::Value::String(result.to_string()).to_string(),
            })
        }
        Command::Wronskian { funcs } => {
            let fs = funcs
                .iter()
                .map(|s| parse_function(s))
                .collect::<Result<Vec<_>>>()?;
            let w = wronskian(&fs);
            Ok(match format {
                Format::Text => w.to_string(),
                Format::Json => serde_json::Value::String(w.to_string()).to_string(),
            })
        }
        Command::Annihilator { funcs, monic } => {
            let fs = funcs
                .iter()
                .map(|s| parse_function(s))
                .collect::<Result<Vec<_>>>()?;
            let p = annihilator(&fs, monic)?;
            Ok(operator_output(&p, format))
        }
        Command::Kernel { op, bound } => {
            let p = parse_operator(&op)?;
            let basis = kernel_poly_basis(&p, bound);
            let as_rf: Vec<RationalFunction> =
                basis.into_iter().map(RationalFunction::from).collect();
            Ok(functions_output(&as_rf, format))
        }
        Command::Factor { op, solution } => {
            let p = parse_operator(&op)?;
            let s = parse_function(&solution)?;
            let (left, right) = p.factor_by_solution(&s)?;
            Ok(match format {
                Format::Text => format!("left: {}\nright: {}", left, right),
                Format::Json => serde_json::json!({
                    "left": left.to_string(),
                    "right": right.to_string(),
                })
                .to_string(),
            })
        }
        Command::Poles { expr } => {
            let f = eval_str(&expr)?.as_fraction();
            Ok(operator_output(&f.pol_op(), format))
        }
        Command::Zeros { expr } => {
            let f = eval_str(&expr)?.as_fraction();
            Ok(operator_output(&f.zer_op()?, format))
        }
        Command::Construct {
            poles,
            zeros,
            budget,
        } => {
            let v = parse_function_list(&poles)?;
            let w = parse_function_list(&zeros)?;
            let f = fraction_with_poles_zeros(&v, &w, budget)?;
            Ok(fraction_output(&f, format))
        }
        Command::IntopNormal { expr } => {
            let mixed = parse_mixed(&expr)?;
            let Some(intop) = mixed.as_integration_op() else {
                return Err(Error::KindMismatch {
                    expected: "an integration operator (no positive powers)",
                });
            };
            Ok(match format {
                Format::Text => intop.to_string(),
                Format::Json => json_of_intop(&intop).to_string(),
            })
        }
        Command::Separate { expr } => {
            let f = eval_str(&expr)?.as_fraction();
            let (diff, int) = f.separate()?;
            Ok(match format {
                Format::Text => format!("diff: {}\nint: {}", diff, int),
                Format::Json => serde_json::json!({
                    "diff": json_of_diffop(&diff),
                    "int": json_of_intop(&int),
                })
                .to_string(),
            })
        }
        Command::Expand { expr, prec } => {
            let f = eval_str(&expr)?.as_fraction();
            let series = FormalPdo::expand_fraction(&f, prec);
            Ok(match format {
                Format::Text => series.to_string(),
                Format::Json => json_of_formal(&series).to_string(),
            })
        }
        Command::Ord { expr } => {
            let f = eval_str(&expr)?.as_fraction();
            Ok(match format {
                Format::Text => f.ord().map_or("-inf".to_string(), |o| o.to_string()),
                Format::Json => serde_json::json!({ "ord": f.ord() }).to_string(),
            })
        }
        Command::Cocycle {
            p,
            q,
            closed_form,
            oracle: _,
        } => {
            let pm = parse_mixed(&p)?;
            let qm = parse_mixed(&q)?;
            let value = if closed_form {
                closed_form_of(&pm, &qm)?
            } else {
                sigma0_oracle(&pm, &qm)?
            };
            Ok(match format {
                Format::Text => value.to_string(),
                Format::Json => serde_json::json!({ "value": value.to_string() }).to_string(),
            })
        }
        Command::Sigma1 { m, n, r, s } => {
            let value = sigma1(CircleBasisIndex::new(m, n), CircleBasisIndex::new(r, s))?;
            Ok(match format {
                Format::Text => value.to_string(),
                Format::Json => serde_json::json!({ "value": value.to_string() }).to_string(),
            })
        }
        Command::CocycleDefect { p, q, r } => {
            let value = cocycle_defect(&parse_mixed(&p)?, &parse_mixed(&q)?, &parse_mixed(&r)?)?;
            Ok(match format {
                Format::Text => value.to_string(),
                Format::Json => serde_json::json!({ "value": value.to_string() }).to_string(),
            })
        }
        Command::CocycleTable { mmax, nmax } => {
            let mut out = String::from("m\tn\tr\ts\tvalue");
            let mrange = -(mmax as i64)..=mmax as i64;
            for m in mrange.clone() {
                for n in 0..=nmax {
                    for r in mrange.clone() {
                        for s in 0..=nmax {
                            let value =
                                sigma1(CircleBasisIndex::new(m, n), CircleBasisIndex::new(r, s))?;
                            out.push_str(&format!("\n{}\t{}\t{}\t{}\t{}", m, n, r, s, value));
                        }
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Closed-form cocycle evaluation for inputs of the shapes a∂ⁿ and b∂⁻¹c.
fn closed_form_of(p: &MixedOp, q: &MixedOp) -> Result<Rational> {
    let shape_err = Error::KindMismatch {
        expected: "a monomial a*d^n and a single tensor b*d^-1*c",
    };
    if !p.int_part().is_zero() || !q.diff_part().is_zero() {
        return Err(shape_err);
    }
    let diff = p.diff_part();
    let n = diff.degree().ok_or_else(|| shape_err.clone())?;
    let nonzero: Vec<usize> = (0..=n).filter(|&k| !diff.coeff(k).is_zero()).collect();
    if nonzero != [n] {
        return Err(shape_err);
    }
    let a = diff
        .coeff(n)
        .as_polynomial()
        .cloned()
        .ok_or(Error::NonPolynomialCoefficient)?;
    let tensors = q.int_part().tensors();
    if tensors.len() != 1 {
        return Err(shape_err);
    }
    let (b, c) = &tensors[0];
    let b = b
        .as_polynomial()
        .cloned()
        .ok_or(Error::NonPolynomialCoefficient)?;
    let c = c
        .as_polynomial()
        .cloned()
        .ok_or(Error::NonPolynomialCoefficient)?;
    Ok(sigma0_closed_form(&a, n as u32, &b, &c))
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => println!("{}", output),
        Err(e) => {
            eprintln!("error: {}", e);
            let code = match e {
                Error::Syntax { .. } => 2,
                Error::RankNotStabilized { .. } => 4,
                _ => 3,
            };
            std::process::exit(code);
        }
    }
}
