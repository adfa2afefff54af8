//! Named states and channels: `ghz:4`, `w:3`, `bell:phi+`, `maxent:3`,
//! `hor33:a=0.5`, `dephasing:0.01`, `thermal:0.01:0.1`.

use std::path::Path;
use std::str::FromStr;

use entk::dynamics::ChannelKind;
use entk::families::FamilyId;
use entk::io::{parse_state, AnyState};
use entk::state::{bell, ghz, maximally_entangled, w_state, BellKind};

use crate::error::{CliError, CliResult};

fn parse_num<T: FromStr>(text: &str, what: &str) -> CliResult<T> {
    text.trim().parse().map_err(|_| CliError::Parse(format!("cannot read {what} from {text:?}")))
}

/// Parses `name[:arg]`. `a` fills in a missing family parameter.
pub fn named_state(input: &str, a: Option<f64>) -> CliResult<AnyState> {
    let (name, arg) = match input.split_once(':') {
        Some((n, rest)) => (n.trim().to_ascii_lowercase(), Some(rest.trim())),
        None => (input.trim().to_ascii_lowercase(), None),
    };
    let need = |what: &str| arg.ok_or_else(|| CliError::Parse(format!("{name} needs {what}, as in {name}:{what}")));
    let state = match name.as_str() {
        "ghz" => AnyState::Pure(ghz(parse_num(need("N")?, "N")?)?),
        "w" => AnyState::Pure(w_state(parse_num(need("N")?, "N")?)?),
        "maxent" => AnyState::Pure(maximally_entangled(parse_num(need("d")?, "d")?)?),
        "bell" => {
            let kind = match need("kind")?.to_ascii_lowercase().as_str() {
                "phi+" => BellKind::PhiPlus,
                "phi-" => BellKind::PhiMinus,
                "psi+" => BellKind::PsiPlus,
                "psi-" => BellKind::PsiMinus,
                other => return Err(CliError::Parse(format!("unknown Bell state {other:?} (phi+, phi-, psi+, psi-)"))),
            };
            AnyState::Pure(bell(kind))
        }
        family => {
            let id = FamilyId::from_str(family).map_err(|_| CliError::Parse(format!("unknown state name {family:?}")))?;
            let value = match arg {
                Some(arg) => parse_num(arg.strip_prefix("a=").unwrap_or(arg), "a")?,
                None => a.ok_or_else(|| CliError::Parse(format!("{id} needs a parameter, as in {id}:a=0.5")))?,
            };
            AnyState::Mixed(id.build(value)?)
        }
    };
    Ok(state)
}

/// Reads a state from a JSON file, or from a name if no such file exists.
pub fn load_state(input: &str, a: Option<f64>) -> CliResult<AnyState> {
    let path = Path::new(input);
    if !path.is_file() {
        return named_state(input, a).map_err(|e| match e {
            CliError::Parse(m) if !input.contains(':') && looks_like_path(input) => {
                CliError::Parse(format!("cannot read {input}: no such file ({m})"))
            }
            other => other,
        });
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {input}: {e}")))?;
    match parse_state(&text) {
        Err(e) => Err(CliError::Parse(format!(
            "malformed state file {input} at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))),
        Ok(state) => Ok(state?),
    }
}

fn looks_like_path(s: &str) -> bool {
    s.contains('/') || s.contains('.')
}

/// Parses `kind:gamma` or `thermal:gamma:nbar`.
pub fn channel(input: &str) -> CliResult<ChannelKind> {
    let parts: Vec<&str> = input.split(':').collect();
    let gamma = |i: usize| -> CliResult<f64> {
        parts.get(i).ok_or_else(|| CliError::Parse(format!("channel {input:?} is missing a rate"))).and_then(|s| parse_num(s, "rate"))
    };
    let arity = |n: usize| -> CliResult<()> {
        if parts.len() == n {
            Ok(())
        } else {
            Err(CliError::Parse(format!("channel {input:?} takes {} parameter(s)", n - 1)))
        }
    };
    let ch = match parts[0].to_ascii_lowercase().as_str() {
        "zero" | "zero-temperature" | "damping" => {
            arity(2)?;
            ChannelKind::ZeroTemperature { gamma: gamma(1)? }
        }
        "infinite" | "infinite-temperature" => {
            arity(2)?;
            ChannelKind::InfiniteTemperature { gamma: gamma(1)? }
        }
        "dephasing" => {
            arity(2)?;
            ChannelKind::Dephasing { gamma: gamma(1)? }
        }
        "thermal" => {
            arity(3)?;
            ChannelKind::Thermal { gamma: gamma(1)?, nbar: parse_num(parts[2], "mean occupation")? }
        }
        other => {
            return Err(CliError::Parse(format!(
                "unknown channel {other:?} (zero, thermal, infinite, dephasing)"
            )))
        }
    };
    ch.validate()?;
    Ok(ch)
}
