//! Text form of norm specifications: `lp:P`, `h:S`, `hq:Q`, `besov:S,P,Q`,
//! `local_h1:R` and `hmu:MU`, with `inf` for infinite exponents.

use kgsl::field::NormSpec;

fn number(text: &str) -> Result<f64, String> {
    match text.trim() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|_| format!("cannot parse '{t}' as a number")),
    }
}

fn numbers<const K: usize>(kind: &str, args: &str) -> Result<[f64; K], String> {
    let parts: Vec<&str> = args.split(',').collect();
    if parts.len() != K {
        return Err(format!("{kind} takes {K} parameter(s), got '{args}'"));
    }
    let mut out = [0.0; K];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = number(part)?;
    }
    Ok(out)
}

pub fn parse_norm_spec(text: &str) -> Result<NormSpec, String> {
    let (kind, args) = text
        .split_once(':')
        .ok_or_else(|| format!("norm spec '{text}' must look like kind:params"))?;
    let kind = kind.trim().to_ascii_lowercase();
    Ok(match kind.as_str() {
        "lp" => {
            let [p] = numbers(&kind, args)?;
            NormSpec::Lp { p }
        }
        "h" | "sobolev" => {
            let [s] = numbers(&kind, args)?;
            NormSpec::Sobolev { s }
        }
        "hq" | "sobolev_lq" => {
            let [q] = numbers(&kind, args)?;
            NormSpec::SobolevLq { q }
        }
        "besov" => {
            let [s, p, q] = numbers(&kind, args)?;
            NormSpec::Besov { s, p, q }
        }
        "local_h1" => {
            let [radius] = numbers(&kind, args)?;
            NormSpec::LocalH1 { radius }
        }
        "hmu" => {
            let [mu] = numbers(&kind, args)?;
            NormSpec::HMu { mu }
        }
        other => return Err(format!("unknown norm kind '{other}'")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        assert_eq!(
            parse_norm_spec("besov:0.25,inf,2").unwrap(),
            NormSpec::Besov {
                s: 0.25,
                p: f64::INFINITY,
                q: 2.0
            }
        );
        assert_eq!(parse_norm_spec("lp:16").unwrap(), NormSpec::Lp { p: 16.0 });
        assert_eq!(parse_norm_spec("local_h1:6").unwrap(), NormSpec::LocalH1 { radius: 6.0 });
        assert!(parse_norm_spec("besov:1,2").is_err());
        assert!(parse_norm_spec("lq:2").is_err());
        assert!(parse_norm_spec("lp").is_err());
    }
}
