//! JSON shapes shared by the subcommands. Integers are decimal strings and
//! rationals carry `num`, `den` and a display decimal, so nothing loses
//! precision in transit.

use intersectlab::exactmath::rational_to_decimal;
use intersectlab::search::SearchReport;
use intersectlab::setfamilies::io;
use intersectlab::shadows::ShadowReport;
use intersectlab::{BigInt, BigRational, Family, RealInterval};
use num_bigint::Sign;
use serde_json::{json, Value};

pub const DECIMAL_DIGITS: u32 = 20;

pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn rational(x: &BigRational) -> Value {
    json!({
        "num": x.numer().to_string(),
        "den": x.denom().to_string(),
        "decimal": rational_to_decimal(x, DECIMAL_DIGITS),
    })
}

/// `x` truncated toward zero to `digits` places, so every printed digit is
/// a digit of `x` itself.
pub fn truncated_decimal(x: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (x * BigRational::from_integer(scale)).trunc().to_integer();
    let negative = scaled.sign() == Sign::Minus || (x.numer().sign() == Sign::Minus && scaled.sign() == Sign::NoSign);
    let mut body = scaled.magnitude().to_string();
    if digits == 0 {
        return format!("{}{body}", if negative { "-" } else { "" });
    }
    while body.len() <= digits as usize {
        body.insert(0, '0');
    }
    let split = body.len() - digits as usize;
    format!("{}{}.{}", if negative { "-" } else { "" }, &body[..split], &body[split..])
}

/// Number of decimal places a tolerance justifies.
pub fn digits_for(tol: &BigRational) -> u32 {
    let mut d = 0;
    let mut step = BigRational::from_integer(BigInt::from(1));
    let ten = BigRational::from_integer(BigInt::from(10));
    while &step > tol && d < 60 {
        step /= ten.clone();
        d += 1;
    }
    d
}

/// Tolerance used internally so the midpoint's printed digits are not
/// disturbed by the interval width.
pub fn working_tolerance(tol: &BigRational) -> BigRational {
    tol / BigRational::from_integer(BigInt::from(1_000_000u32))
}

/// Interval endpoints plus the digits of the midpoint that the tolerance supports.
pub fn interval(x: &RealInterval, digits: u32) -> Value {
    json!({
        "lo": rational(x.lo()),
        "hi": rational(x.hi()),
        "decimal": truncated_decimal(&x.midpoint(), digits),
    })
}

pub fn family(f: &Family) -> Value {
    json!({
        "n": f.ground_n(),
        "k": f.uniform_k(),
        "size": f.len(),
        "members": f.iter().map(|s| s.to_vec()).collect::<Vec<_>>(),
        "text": io::to_text(f),
    })
}

pub fn search_report(r: &SearchReport) -> Value {
    json!({
        "n": r.n,
        "k": r.k,
        "r": r.r,
        "t": r.t,
        "nontrivial": r.nontrivial,
        "optimum": int(&r.optimum),
        "witness": family(&r.witness),
        "all_optima_are_t_stars": r.all_optima_are_t_stars,
        "nodes_explored": r.nodes_explored,
        "empty": r.empty,
        "infeasible": r.infeasible,
    })
}

pub fn shadow_report(r: &ShadowReport) -> Value {
    json!({
        "input_size": int(&r.input_size),
        "output_size": int(&r.output_size),
        "bound": rational(&r.bound),
        "bound_satisfied": r.bound_satisfied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use intersectlab::exactmath::rat;

    #[test]
    fn truncation() {
        assert_eq!(truncated_decimal(&rat(2, 3), 4), "0.6666");
        assert_eq!(truncated_decimal(&rat(-2, 3), 2), "-0.66");
        assert_eq!(truncated_decimal(&rat(-1, 300), 2), "-0.00");
        assert_eq!(truncated_decimal(&rat(123, 1), 0), "123");
        assert_eq!(truncated_decimal(&rat(5, 4), 3), "1.250");
    }

    #[test]
    fn tolerance_digits() {
        assert_eq!(digits_for(&rat(1, 1_000_000_000_000)), 12);
        assert_eq!(digits_for(&rat(1, 20)), 2);
        assert_eq!(digits_for(&rat(1, 1)), 0);
    }
}
