//! Named registry of (sequence, closed form) pairs.
//!
//! Fixed names: `geom-plus`, `geom-minus`, `log-plus`, `log-minus`, `exp`,
//! `cos`, `sin`, `polytopic-d<k>-{plus,minus}`, `lucas-s<..>-t<..>`,
//! `table:<path>`. The plus/minus suffix names the sign in the
//! denominator (1 ∓ x): `geom-minus` is 1/(1-x) with coefficients (+1)^n,
//! `geom-plus` is 1/(1+x) with coefficients (-1)^n.

use std::fs;
use std::path::Path;

use crate::closed_forms::ClosedForm;
use crate::coefficients::SequenceSpec;
use crate::error::{Error, Result};
use crate::scalar::{parse_complex, Scalar};

/// A named coefficient sequence with its generating function.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisteredPair {
    pub name: String,
    pub spec: SequenceSpec,
    pub form: ClosedForm,
}

impl RegisteredPair {
    fn from_form(name: &str, form: ClosedForm) -> Self {
        Self {
            name: name.to_string(),
            spec: form.paired_spec(),
            form,
        }
    }
}

/// The eight pairs exercised by the identity sweep.
pub fn default_pairs() -> Vec<RegisteredPair> {
    [
        "geom-minus",
        "geom-plus",
        "log-minus",
        "log-plus",
        "exp",
        "cos",
        "sin",
        "polytopic-d2-minus",
    ]
    .iter()
    .map(|name| lookup(name).expect("built-in pair"))
    .collect()
}

fn sign_suffix(suffix: &str) -> Result<i8> {
    match suffix {
        // Denominator sign: "minus" means 1/(1-x), i.e. coefficient base +1.
        "minus" => Ok(1),
        "plus" => Ok(-1),
        other => Err(Error::Parse(format!("expected plus/minus, got '{other}'"))),
    }
}

/// Resolves a registry name to its pair.
pub fn lookup(name: &str) -> Result<RegisteredPair> {
    if let Some(rest) = name.strip_prefix("polytopic-d") {
        let (d_str, sign_str) = rest
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("bad polytopic name '{name}'")))?;
        let d: u32 = d_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad polytopic dimension in '{name}'")))?;
        let sigma = sign_suffix(sign_str)?;
        let form = ClosedForm::PolytopicGF { d, sigma };
        let pair = RegisteredPair::from_form(name, form);
        pair.spec.validate()?;
        return Ok(pair);
    }
    if let Some(rest) = name.strip_prefix("lucas-s") {
        let sep = rest
            .rfind("-t")
            .ok_or_else(|| Error::Parse(format!("bad lucas name '{name}'")))?;
        let s = parse_complex(&rest[..sep])?;
        let t = parse_complex(&rest[sep + 2..])?;
        let pair = RegisteredPair::from_form(name, ClosedForm::LucasGF { s, t });
        pair.spec.validate()?;
        return Ok(pair);
    }
    if let Some(path) = name.strip_prefix("table:") {
        let coeffs = load_table(Path::new(path))?;
        return Ok(RegisteredPair::from_form(
            name,
            ClosedForm::TableGF { coeffs },
        ));
    }
    let form = match name {
        "geom-minus" => ClosedForm::Geometric { sigma: 1 },
        "geom-plus" => ClosedForm::Geometric { sigma: -1 },
        "log-minus" => ClosedForm::Log { sigma: 1 },
        "log-plus" => ClosedForm::Log { sigma: -1 },
        "exp" => ClosedForm::Exp,
        "cos" => ClosedForm::Cos,
        "sin" => ClosedForm::Sin,
        other => return Err(Error::Parse(format!("unknown spec/form name '{other}'"))),
    };
    Ok(RegisteredPair::from_form(name, form))
}

/// Reads a table file: one complex literal per line, `#` comments allowed.
pub fn load_table(path: &Path) -> Result<Vec<Scalar>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
    let mut coeffs = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(idx) => &line[..idx],
            None => line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        coeffs.push(parse_complex(line)?);
    }
    let spec = SequenceSpec::Table(coeffs.clone());
    spec.validate()?;
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::scalar;

    #[test]
    fn default_pairs_are_eight_and_sound() {
        let pairs = default_pairs();
        assert_eq!(pairs.len(), 8);
        for pair in &pairs {
            assert_eq!(pair.spec, pair.form.paired_spec(), "{}", pair.name);
        }
    }

    #[test]
    fn lucas_name_with_negative_t() {
        let pair = lookup("lucas-s3-t-2").unwrap();
        assert_eq!(
            pair.spec,
            SequenceSpec::Lucas {
                s: scalar(3.0, 0.0),
                t: scalar(-2.0, 0.0)
            }
        );
    }

    #[test]
    fn polytopic_name_parses() {
        let pair = lookup("polytopic-d3-plus").unwrap();
        assert_eq!(pair.spec, SequenceSpec::Polytopic { d: 3, sigma: -1 });
    }

    #[test]
    fn unknown_name_errors() {
        assert!(lookup("not-a-pair").is_err());
    }

    #[test]
    fn table_file_round_trip() {
        let dir = std::env::temp_dir().join("lambertheta-registry-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("coeffs.txt");
        std::fs::write(&path, "# header\n1\n0.5-0.25i\n\n2 # inline\n").unwrap();
        let coeffs = load_table(&path).unwrap();
        assert_eq!(
            coeffs,
            vec![scalar(1.0, 0.0), scalar(0.5, -0.25), scalar(2.0, 0.0)]
        );
    }
}
