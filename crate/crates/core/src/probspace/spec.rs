//! Textual distribution specs used by the command line:
//!
//! ```text
//! normal(mu,sigma) | exp(rate) | t(nu) | pareto(alpha) | discrete(v1:p1,v2:p2,...)
//! ```
//!
//! Numbers may be written as decimals or as fractions `a/b`, which keeps
//! weights such as `2/3` exact enough to sum to one.

use super::{make_discrete, make_exponential, make_normal, make_pareto, make_student_t, Distribution};
use crate::error::{Error, Result};

fn spec_error(input: &str, reason: impl Into<String>) -> Error {
    Error::Spec {
        input: input.to_string(),
        reason: reason.into(),
    }
}

fn parse_number(input: &str, token: &str) -> Result<f64> {
    let token = token.trim();
    let value = match token.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| spec_error(input, format!("bad number `{token}`")))?;
            let den: f64 = den.trim().parse().map_err(|_| spec_error(input, format!("bad number `{token}`")))?;
            num / den
        }
        None => token
            .parse()
            .map_err(|_| spec_error(input, format!("bad number `{token}`")))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(spec_error(input, format!("`{token}` is not finite")))
    }
}

/// Parses a decimal or a fraction `a/b`.
pub fn parse_real(token: &str) -> Result<f64> {
    parse_number(token, token)
}

/// Parses a distribution spec.
pub fn parse_distribution(input: &str) -> Result<Distribution> {
    let s = input.trim();
    let open = s.find('(').ok_or_else(|| spec_error(input, "expected `name(...)`"))?;
    if !s.ends_with(')') {
        return Err(spec_error(input, "missing closing parenthesis"));
    }
    let name = s[..open].trim().to_ascii_lowercase();
    let body = &s[open + 1..s.len() - 1];
    let args: Vec<&str> = if body.trim().is_empty() {
        Vec::new()
    } else {
        body.split(',').collect()
    };
    let numbers = |expected: usize| -> Result<Vec<f64>> {
        if args.len() != expected {
            return Err(spec_error(
                input,
                format!("`{name}` takes {expected} argument(s), got {}", args.len()),
            ));
        }
        args.iter().map(|a| parse_number(input, a)).collect()
    };
    let dist = match name.as_str() {
        "normal" | "norm" | "n" => {
            let v = numbers(2)?;
            make_normal(v[0], v[1])?.into()
        }
        "exp" | "exponential" => make_exponential(numbers(1)?[0])?.into(),
        "t" | "student_t" => make_student_t(numbers(1)?[0])?.into(),
        "pareto" => make_pareto(numbers(1)?[0])?.into(),
        "discrete" => {
            if args.is_empty() {
                return Err(spec_error(input, "discrete needs at least one `value:prob` pair"));
            }
            let mut support = Vec::with_capacity(args.len());
            let mut probs = Vec::with_capacity(args.len());
            for pair in &args {
                let (v, p) = pair
                    .split_once(':')
                    .ok_or_else(|| spec_error(input, format!("expected `value:prob`, got `{}`", pair.trim())))?;
                support.push(parse_number(input, v)?);
                probs.push(parse_number(input, p)?);
            }
            make_discrete(&support, &probs)?.into()
        }
        other => return Err(spec_error(input, format!("unknown distribution `{other}`"))),
    };
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        assert!(matches!(parse_distribution("normal(0,1)").unwrap(), Distribution::Parametric(_)));
        assert!(parse_distribution(" exp(2) ").is_ok());
        assert!(parse_distribution("t(4)").is_ok());
        assert!(parse_distribution("pareto(4)").is_ok());
        let d = parse_distribution("discrete(0:2/3, 5:1/3)").unwrap();
        match d {
            Distribution::Discrete(law) => assert_eq!(law.support(), &[0.0, 5.0]),
            _ => panic!("expected a discrete law"),
        }
        assert!(parse_distribution("discrete(-1:0.5,1:0.5)").is_ok());
    }

    #[test]
    fn rejects_malformed_specs() {
        for bad in [
            "normal(0)",
            "normal(0,-1)",
            "gamma(2)",
            "exp 1",
            "discrete()",
            "discrete(1:0.5,0:0.5)",
            "discrete(0:0.5,1:0.4)",
            "pareto(x)",
            "t(1/0)",
        ] {
            assert!(parse_distribution(bad).is_err(), "{bad}");
        }
    }
}
