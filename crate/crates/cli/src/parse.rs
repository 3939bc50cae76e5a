use std::path::Path;

use isotone_core::capacity::{DistortionFn, SubsetMask};

use crate::io::{parse_json, read_json, CliError};

/// `identity`, `sqrt`, `power:<alpha>`, `pl:<x>,<y>;<x>,<y>;...`, inline
/// JSON (`{"kind": ...}`), or a path to a JSON file.
pub fn distortion(spec: &str) -> Result<DistortionFn, CliError> {
    let spec = spec.trim();
    if spec == "identity" {
        return Ok(DistortionFn::identity());
    }
    if spec == "sqrt" {
        return DistortionFn::power(0.5).map_err(CliError::input);
    }
    if let Some(alpha) = spec.strip_prefix("power:") {
        let alpha: f64 = alpha
            .parse()
            .map_err(|_| CliError::Input(format!("bad exponent in distortion {spec:?}")))?;
        return DistortionFn::power(alpha).map_err(CliError::input);
    }
    if let Some(knots) = spec.strip_prefix("pl:") {
        let knots = knots
            .split(';')
            .map(|pair| {
                let (x, y) = pair.split_once(',')?;
                Some((x.trim().parse().ok()?, y.trim().parse().ok()?))
            })
            .collect::<Option<Vec<(f64, f64)>>>()
            .ok_or_else(|| CliError::Input(format!("bad knot list in distortion {spec:?}")))?;
        return DistortionFn::piecewise_linear(knots).map_err(CliError::input);
    }
    if spec.starts_with('{') {
        return parse_json(Path::new("<inline distortion>"), spec);
    }
    read_json(Path::new(spec))
}

/// `full`, a decimal mask, or `0b`/`0x` prefixed.
pub fn subset(spec: &str, n: usize) -> Result<SubsetMask, CliError> {
    let full: SubsetMask = if n == 0 { 0 } else { SubsetMask::MAX >> (32 - n) };
    let parsed = if spec == "full" {
        Ok(full)
    } else if let Some(bits) = spec.strip_prefix("0b") {
        SubsetMask::from_str_radix(bits, 2)
    } else if let Some(hex) = spec.strip_prefix("0x") {
        SubsetMask::from_str_radix(hex, 16)
    } else {
        spec.parse()
    };
    match parsed {
        Ok(mask) if mask & !full == 0 => Ok(mask),
        Ok(mask) => Err(CliError::Input(format!(
            "subset {mask:#b} has elements outside a ground set of size {n}"
        ))),
        Err(_) => Err(CliError::Input(format!("bad subset {spec:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distortion_specs() {
        assert_eq!(distortion("identity").unwrap(), DistortionFn::identity());
        assert_eq!(distortion("sqrt").unwrap(), DistortionFn::power(0.5).unwrap());
        assert_eq!(distortion("power:0.3").unwrap(), DistortionFn::power(0.3).unwrap());
        assert_eq!(
            distortion("pl:0,0;0.5,0.8;1,1").unwrap(),
            DistortionFn::piecewise_linear(vec![(0.0, 0.0), (0.5, 0.8), (1.0, 1.0)]).unwrap()
        );
        assert_eq!(
            distortion(r#"{"kind": "power", "alpha": 0.5}"#).unwrap(),
            DistortionFn::power(0.5).unwrap()
        );
        assert!(distortion("power:2").is_err());
        assert!(distortion("pl:0,0;1").is_err());
    }

    #[test]
    fn subset_specs() {
        assert_eq!(subset("full", 3).unwrap(), 0b111);
        assert_eq!(subset("3", 2).unwrap(), 3);
        assert_eq!(subset("0b101", 3).unwrap(), 5);
        assert_eq!(subset("0x3", 2).unwrap(), 3);
        assert!(subset("8", 3).is_err());
        assert!(subset("x", 3).is_err());
        assert_eq!(subset("full", 20).unwrap(), (1 << 20) - 1);
    }
}
