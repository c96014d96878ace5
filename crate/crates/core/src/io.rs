//! Text formats for profiles and matchings.
//!
//! ```text
//! profile v1
//! side U: a1 a2
//! side W: b1 b2
//! a1: b1
//! a2: b1 b2
//! b1: a2 a1
//! b2: a2
//! ```

use std::collections::HashMap;

use crate::error::{Diagnostic, Error, Result};
use crate::matching::Matching;
use crate::profile::{validate_profile, AgentId, Profile, RawProfile, Side, Violation};

const HEADER: &str = "profile v1";

fn diag(line: usize, message: impl Into<String>) -> Diagnostic {
    Diagnostic { line, message: message.into() }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.contains(':') && !s.chars().any(char::is_whitespace)
}

/// Content lines with their 1-based numbers; comments and blanks dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses a profile, reporting every syntax and validation problem with the
/// line it comes from.
pub fn parse_profile(text: &str) -> Result<Profile> {
    let mut errs = Vec::new();
    let mut lines = content_lines(text.strip_prefix('\u{feff}').unwrap_or(text));

    match lines.next() {
        Some((_, HEADER)) => {}
        Some((n, l)) => return Err(Error::Parse(vec![diag(n, format!("expected `{HEADER}`, found `{l}`"))])),
        None => return Err(Error::Parse(vec![diag(1, "empty file")])),
    }

    let mut sides: [Option<(usize, Vec<String>)>; 2] = [None, None];
    let mut agent_lines: Vec<(usize, String, Vec<String>)> = Vec::new();
    for (n, l) in lines {
        let Some((head, rest)) = l.split_once(':') else {
            errs.push(diag(n, format!("expected `name: list`, found `{l}`")));
            continue;
        };
        let head = head.trim();
        let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        if let Some(bad) = names.iter().find(|s| !valid_name(s)) {
            errs.push(diag(n, format!("invalid name `{bad}`")));
            continue;
        }
        let slot = match head {
            "side U" => Some(0),
            "side W" => Some(1),
            _ => None,
        };
        match slot {
            Some(i) if sides[i].is_some() => errs.push(diag(n, format!("`{head}` given twice"))),
            Some(i) if !agent_lines.is_empty() => {
                errs.push(diag(n, format!("`{head}` must come before agent lines")));
                sides[i] = Some((n, names));
            }
            Some(i) => sides[i] = Some((n, names)),
            None if !valid_name(head) => errs.push(diag(n, format!("invalid agent name `{head}`"))),
            None => agent_lines.push((n, head.to_string(), names)),
        }
    }
    let [Some((u_line, u_names)), Some((w_line, w_names))] = sides else {
        for (i, s) in sides.iter().enumerate() {
            if s.is_none() {
                errs.push(diag(1, format!("missing `side {}:` line", ["U", "W"][i])));
            }
        }
        return Err(Error::Parse(errs));
    };

    let mut index: HashMap<&str, AgentId> = HashMap::new();
    for (side, names, line) in [(Side::U, &u_names, u_line), (Side::W, &w_names, w_line)] {
        for (i, name) in names.iter().enumerate() {
            if index.insert(name, AgentId { side, index: i }).is_some() {
                errs.push(diag(line, format!("agent `{name}` declared twice")));
            }
        }
    }

    let mut u_lists: Vec<Option<(usize, Vec<usize>)>> = vec![None; u_names.len()];
    let mut w_lists: Vec<Option<(usize, Vec<usize>)>> = vec![None; w_names.len()];
    for (n, owner, list) in &agent_lines {
        let Some(&x) = index.get(owner.as_str()) else {
            errs.push(diag(*n, format!("unknown agent `{owner}`")));
            continue;
        };
        let mut idx = Vec::with_capacity(list.len());
        for y in list {
            match index.get(y.as_str()) {
                Some(a) if a.side != x.side => idx.push(a.index),
                Some(_) => errs.push(diag(*n, format!("`{owner}` lists `{y}` from its own side"))),
                None => errs.push(diag(*n, format!("`{owner}` lists unknown agent `{y}`"))),
            }
        }
        let slot = match x.side {
            Side::U => &mut u_lists[x.index],
            Side::W => &mut w_lists[x.index],
        };
        if slot.is_some() {
            errs.push(diag(*n, format!("second list for `{owner}`")));
        } else {
            *slot = Some((*n, idx));
        }
    }
    for (side, lists, names, line) in [(Side::U, &u_lists, &u_names, u_line), (Side::W, &w_lists, &w_names, w_line)] {
        for (i, l) in lists.iter().enumerate() {
            if l.is_none() {
                errs.push(diag(line, format!("no preference line for `{}` (side {side:?})", names[i])));
            }
        }
    }
    if !errs.is_empty() {
        errs.sort_by_key(|d| d.line);
        return Err(Error::Parse(errs));
    }

    let line_of = |x: AgentId| -> usize {
        let l = match x.side {
            Side::U => &u_lists[x.index],
            Side::W => &w_lists[x.index],
        };
        l.as_ref().map_or(0, |(n, _)| *n)
    };
    let raw = RawProfile {
        u_lists: u_lists.iter().map(|l| l.as_ref().unwrap().1.clone()).collect(),
        w_lists: w_lists.iter().map(|l| l.as_ref().unwrap().1.clone()).collect(),
        u_names: u_names.clone(),
        w_names: w_names.clone(),
    };
    validate_profile(&raw).map_err(|e| match e {
        Error::InvalidProfile(vs) => {
            let name = |x: AgentId| match x.side {
                Side::U => u_names[x.index].as_str(),
                Side::W => w_names[x.index].as_str(),
            };
            let mut ds: Vec<Diagnostic> = vs
                .iter()
                .map(|v| match *v {
                    Violation::AsymmetricAcceptability { from, to } => diag(
                        line_of(from),
                        format!(
                            "`{}` lists `{}`, but `{}` does not list `{}`",
                            name(from),
                            name(to),
                            name(to),
                            name(from)
                        ),
                    ),
                    Violation::DuplicateEntry { owner, agent } => {
                        diag(line_of(owner), format!("`{}` lists `{}` more than once", name(owner), name(agent)))
                    }
                    ref other => diag(0, other.to_string()),
                })
                .collect();
            ds.sort_by_key(|d| d.line);
            Error::Parse(ds)
        }
        other => other,
    })
}

/// Canonical text: header, both sides, then `U` lists and `W` lists in
/// index order.
pub fn serialize_profile(p: &Profile) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    out.push_str(&format!("side U: {}\n", p.u_names().join(" ")));
    out.push_str(&format!("side W: {}\n", p.w_names().join(" ")));
    for x in p.agents() {
        let other = x.side.other();
        let list: Vec<&str> = p.list(x).iter().map(|&i| p.name(AgentId { side: other, index: i })).collect();
        if list.is_empty() {
            out.push_str(&format!("{}:\n", p.name(x)));
        } else {
            out.push_str(&format!("{}: {}\n", p.name(x), list.join(" ")));
        }
    }
    out
}

/// One `u w` pair per line, in either order; `#` comments allowed.
pub fn parse_matching(text: &str, p: &Profile) -> Result<Matching> {
    let mut errs = Vec::new();
    let mut m = Matching::empty(p.n_u(), p.n_w());
    for (n, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            errs.push(diag(n, format!("expected two agent names, found `{l}`")));
            continue;
        }
        let (Some(x), Some(y)) = (p.find(toks[0]), p.find(toks[1])) else {
            for t in &toks {
                if p.find(t).is_none() {
                    errs.push(diag(n, format!("unknown agent `{t}`")));
                }
            }
            continue;
        };
        let (u, w) = match (x.side, y.side) {
            (Side::U, Side::W) => (x.index, y.index),
            (Side::W, Side::U) => (y.index, x.index),
            _ => {
                errs.push(diag(n, format!("`{}` and `{}` are on the same side", toks[0], toks[1])));
                continue;
            }
        };
        if !p.acceptable(u, w) {
            errs.push(diag(n, format!("`{}` and `{}` are not mutually acceptable", toks[0], toks[1])));
            continue;
        }
        if m.u_mate(u).is_some() || m.w_mate(w).is_some() {
            let dup = if m.u_mate(u).is_some() { p.name(AgentId::u(u)) } else { p.name(AgentId::w(w)) };
            errs.push(diag(n, format!("agent `{dup}` appears twice")));
            continue;
        }
        m.set_pair(u, w);
    }
    if errs.is_empty() {
        Ok(m)
    } else {
        Err(Error::Parse(errs))
    }
}

pub fn serialize_matching(m: &Matching, p: &Profile) -> String {
    m.pairs().map(|(u, w)| format!("{} {}\n", p.name(AgentId::u(u)), p.name(AgentId::w(w)))).collect()
}
