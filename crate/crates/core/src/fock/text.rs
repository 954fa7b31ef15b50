use super::{GeneratorId, Kind, Mode, State};
use crate::error::{Error, Result};
use crate::rational::{fmt_q_full, parse_q};

pub(super) fn format_state(s: &State) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = s
        .terms()
        .map(|(m, c)| {
            let body = if m.is_empty() {
                "|0>".to_string()
            } else {
                m.modes().iter().map(|md| format!("{}({})", md.gen, md.m)).collect::<Vec<_>>().join(" ")
            };
            format!("{} * {}", fmt_q_full(c), body)
        })
        .collect();
    terms.join(" + ")
}

fn parse_mode(tok: &str) -> Result<Mode> {
    let bad = || Error::Parse(format!("bad mode token `{tok}`"));
    let inner = tok.strip_prefix("g[").ok_or_else(bad)?;
    let (gen, rest) = inner.split_once(']').ok_or_else(bad)?;
    let m: i32 =
        rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let parts: Vec<&str> = gen.split(',').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let kind = Kind::from_name(parts[1]).ok_or_else(bad)?;
    let slot = parts[0];
    let (sector_char, copy) = slot.split_at(1);
    let expected = if kind.is_odd() { "e" } else { "s" };
    if sector_char != expected {
        return Err(bad());
    }
    let copy: u16 = copy.parse().map_err(|_| bad())?;
    let index: u16 = parts[2].parse().map_err(|_| bad())?;
    if copy == 0 || index == 0 || m > -1 {
        return Err(bad());
    }
    Ok(Mode { gen: GeneratorId { kind, copy, index }, m })
}

pub(super) fn parse_state(s: &str) -> Result<State> {
    let s = s.trim();
    let mut out = State::zero();
    if s == "0" {
        return Ok(out);
    }
    for term in s.split(" + ") {
        let (c, body) = term.split_once(" * ").ok_or_else(|| Error::Parse(format!("bad term `{term}`")))?;
        let c = parse_q(c)?;
        let body = body.trim();
        let modes: Vec<Mode> =
            if body == "|0>" { Vec::new() } else { body.split_whitespace().map(parse_mode).collect::<Result<_>>()? };
        out.add_scaled(&State::from_modes(&modes, num_traits::One::one())?, &c);
    }
    Ok(out)
}
