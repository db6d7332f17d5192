use serde_json::Value;

/// Rounds to 12 significant digits; serde_json then prints the shortest
/// representation of the rounded value.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn num(x: f64) -> Value {
    Value::from(sig12(x))
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_to_twelve_digits() {
        assert_eq!(sig12(0.2), 0.2);
        assert_eq!(sig12(0.0), 0.0);
        assert_eq!(sig12(1.0 / 3.0).to_string(), "0.333333333333");
        assert_eq!(sig12(0.323_292_804_986_532_7).to_string(), "0.323292804987");
        assert_eq!(sig12(-1234567.890123456).to_string(), "-1234567.89012");
        assert_eq!(sig12(0.19999999999999998), 0.2);
    }
}
