//! Exact rational helpers for supports, confidences and densities.

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{FcaError, Result};

/// A non-negative exact fraction.
pub type Fraction = Ratio<u64>;

/// `count / total`, with `0/0` read as zero.
pub fn ratio(count: usize, total: usize) -> Fraction {
    if total == 0 {
        Fraction::zero()
    } else {
        Fraction::new(count as u64, total as u64)
    }
}

/// Exact test `count / total >= threshold` without rounding.
pub fn meets(count: usize, total: usize, threshold: &Fraction) -> bool {
    (count as u128) * (*threshold.denom() as u128) >= (*threshold.numer() as u128) * (total as u128)
}

/// Parses `"p/q"`, a decimal such as `"0.35"`, or an integer.
pub fn parse_fraction(text: &str) -> Result<Fraction> {
    let bad = |reason| FcaError::Threshold {
        name: "fraction",
        value: text.to_string(),
        reason,
    };
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| bad("numerator is not a non-negative integer"))?;
        let q: u64 = q.trim().parse().map_err(|_| bad("denominator is not a positive integer"))?;
        if q == 0 {
            return Err(bad("zero denominator"));
        }
        return Ok(Fraction::new(p, q));
    }
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad("empty number"));
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad("not a fraction or decimal"));
    }
    if frac.len() > 18 {
        return Err(bad("too many decimal places"));
    }
    let denom = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad("integer part overflows"))? };
    let frac_val: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad("fraction part overflows"))? };
    let numer = int
        .checked_mul(denom)
        .and_then(|v| v.checked_add(frac_val))
        .ok_or_else(|| bad("value overflows"))?;
    Ok(Fraction::new(numer, denom))
}

/// Parses a fraction and checks it lies in `[0, 1]`.
pub fn parse_unit_fraction(name: &'static str, text: &str) -> Result<Fraction> {
    let f = parse_fraction(text).map_err(|e| match e {
        FcaError::Threshold { value, reason, .. } => FcaError::Threshold { name, value, reason },
        other => other,
    })?;
    check_unit(name, &f)?;
    Ok(f)
}

pub(crate) fn check_unit(name: &'static str, f: &Fraction) -> Result<()> {
    if f.numer() > f.denom() {
        return Err(FcaError::Threshold {
            name,
            value: f.to_string(),
            reason: "must lie in [0, 1]",
        });
    }
    Ok(())
}

pub fn to_f64(f: &Fraction) -> f64 {
    *f.numer() as f64 / *f.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_notations() {
        assert_eq!(parse_fraction("1/3").unwrap(), Fraction::new(1, 3));
        assert_eq!(parse_fraction("0.6").unwrap(), Fraction::new(3, 5));
        assert_eq!(parse_fraction(".5").unwrap(), Fraction::new(1, 2));
        assert_eq!(parse_fraction("1").unwrap(), Fraction::new(1, 1));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("-0.2").is_err());
        assert!(parse_unit_fraction("min-supp", "3/2").is_err());
    }

    #[test]
    fn meets_is_exact() {
        assert!(meets(1, 3, &Fraction::new(1, 3)));
        assert!(!meets(1, 3, &parse_fraction("0.3334").unwrap()));
        assert!(meets(0, 0, &Fraction::zero()));
    }
}
