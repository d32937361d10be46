//! Exact rational helpers.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

const GRID: i128 = 1_000_000_000;

/// Parses `"0.25"`, `"1/4"` or `"3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = text.split_once('/') {
        let num: i128 = num.trim().parse().map_err(|_| bad())?;
        let den: i128 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if frac_part.len() > 18 {
        return Err(bad());
    }
    let int_val: i128 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| bad())? };
    let den = 10i128.pow(frac_part.len() as u32);
    let frac_val: i128 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
    let value = Rational::new(int_val * den + frac_val, den);
    Ok(if neg { -value } else { value })
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Largest grid point `x <= approx` with `ok(x)`, walking down from the float estimate.
fn floor_to_grid(approx: f64, ok: impl Fn(&Rational) -> bool) -> Rational {
    let mut steps = (approx * GRID as f64).floor() as i128;
    steps = steps.clamp(1, GRID / 2 - 1);
    loop {
        let x = Rational::new(steps, GRID);
        if ok(&x) || steps == 1 {
            return x;
        }
        steps -= 1;
    }
}

/// ε′ for the level loop: the smaller root of `(1−2x)(1−x) = 1/(1+ε)`, rounded down
/// to a 1e-9 grid so that `(1−2ε′)(1−ε′)(1+ε) ≥ 1` still holds exactly.
pub fn eps_prime(eps: &Rational) -> Rational {
    let e = to_f64(eps);
    let root = (3.0 - (1.0 + 8.0 / (1.0 + e)).sqrt()) / 4.0;
    let one = Rational::one();
    floor_to_grid(root, |x| {
        let two = Rational::from_integer(2);
        (one - two * x) * (one - x) * (one + eps) >= one
    })
}

/// ε′ for the sampling path: the smaller root of `(1+x)²/(1−x) = 1+ε`, rounded down
/// so that `(1+ε′)² ≤ (1+ε)(1−ε′)` holds exactly.
pub fn sampling_eps_prime(eps: &Rational) -> Rational {
    let e = to_f64(eps);
    let b = 3.0 + e;
    let root = (-b + (b * b + 4.0 * e).sqrt()) / 2.0;
    let one = Rational::one();
    floor_to_grid(root, |x| (one + x) * (one + x) <= (one + eps) * (one - x))
}

pub fn ceil_to_u64(r: &Rational) -> u64 {
    let c = r.ceil();
    if c <= Rational::zero() {
        0
    } else {
        c.to_integer() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_and_fraction() {
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1, 4));
        assert_eq!(parse_rational("1/4").unwrap(), Rational::new(1, 4));
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3));
        assert_eq!(parse_rational(".5").unwrap(), Rational::new(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn eps_prime_is_close_to_the_root_and_safe() {
        for eps in ["1", "0.5", "0.25", "0.1", "1/7"] {
            let eps = parse_rational(eps).unwrap();
            let x = eps_prime(&eps);
            let one = Rational::one();
            let two = Rational::from_integer(2);
            assert!((one - two * x) * (one - x) * (one + eps) >= one);
            let bumped = x + Rational::new(2, GRID);
            assert!((one - two * bumped) * (one - bumped) * (one + eps) < one);
            assert!(x > Rational::zero() && x < Rational::new(1, 2));
        }
        // ε = 1: 2x² − 3x + 1/2 = 0 → x = (3 − √5)/4
        let x = to_f64(&eps_prime(&Rational::one()));
        assert!((x - (3.0 - 5f64.sqrt()) / 4.0).abs() < 1e-8);
    }

    #[test]
    fn sampling_eps_prime_is_safe() {
        for eps in ["1", "0.5", "0.25"] {
            let eps = parse_rational(eps).unwrap();
            let x = sampling_eps_prime(&eps);
            let one = Rational::one();
            assert!((one + x) * (one + x) <= (one + eps) * (one - x));
            let bumped = x + Rational::new(2, GRID);
            assert!((one + bumped) * (one + bumped) > (one + eps) * (one - bumped));
        }
    }
}
