//! Element and group names accepted on the command line.
//!
//! An element is a word in `g`, `h1` (alias `h`) and `h2`, each optionally
//! followed by a power: `g4h1`, `g2`, `h2`, `id`.

use std::collections::BTreeMap;

use hypermirror::group::{GroupElement, SignedPerm, Subgroup};
use hypermirror::sections::{lifts, MonomialAutomorphism};

use crate::error::{CliError, Result};

pub fn parse_element(word: &str) -> Result<MonomialAutomorphism> {
    let bad = || CliError::Usage(format!("unknown element {word:?}; expected a word like g, g4, h1, h2, g4h1 or id"));
    let w = word.trim().to_ascii_lowercase();
    if w == "id" || w == "1" {
        return Ok(MonomialAutomorphism::identity());
    }
    let chars: Vec<char> = w.chars().collect();
    let mut out = MonomialAutomorphism::identity();
    let mut i = 0;
    if chars.is_empty() {
        return Err(bad());
    }
    while i < chars.len() {
        let base = match chars[i] {
            'g' => {
                i += 1;
                lifts::g()
            }
            'h' => {
                i += 1;
                match chars.get(i) {
                    Some('1') => {
                        i += 1;
                        lifts::h1()
                    }
                    Some('2') => {
                        i += 1;
                        lifts::h2()
                    }
                    _ => lifts::h1(),
                }
            }
            _ => return Err(bad()),
        };
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let power: i64 = if start == i { 1 } else { w[start..i].parse().map_err(|_| bad())? };
        out = out.mul(&base.pow(power));
    }
    Ok(out)
}

/// Lattice part of a named element; the twist is dropped.
pub fn parse_lattice_element(word: &str) -> Result<SignedPerm> {
    if word.eq_ignore_ascii_case("minus-id") {
        return Ok(SignedPerm::minus_identity());
    }
    Ok(*parse_element(word)?.lattice_part())
}

/// `l1`, `l2`, or an element name for the cyclic group it generates.
pub fn parse_group(name: &str) -> Result<Subgroup<MonomialAutomorphism>> {
    match name.to_ascii_lowercase().as_str() {
        "l1" => Ok(lifts::l1()),
        "l2" => Ok(lifts::l2()),
        other => Ok(Subgroup::generate(&[parse_element(other)?])),
    }
}

/// Names `g^i`, `g^i·h1` or `g^i·h2` for the elements of `group` that
/// have that form, which covers every element of `l1` and `l2`.
pub fn word_names(group: &Subgroup<MonomialAutomorphism>) -> BTreeMap<MonomialAutomorphism, String> {
    let mut names = BTreeMap::new();
    let tails = [("", MonomialAutomorphism::identity()), ("h1", lifts::h1()), ("h2", lifts::h2())];
    for (tail, t) in &tails {
        for i in 0..8 {
            let x = lifts::g().pow(i).mul(t);
            if !group.contains(&x) || names.contains_key(&x) {
                continue;
            }
            let head = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            let name = match (head.is_empty(), tail.is_empty()) {
                (true, true) => "id".to_string(),
                (true, false) => tail.to_string(),
                (false, true) => head,
                (false, false) => format!("{head}·{tail}"),
            };
            names.insert(x, name);
        }
    }
    names
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        assert_eq!(parse_element("g4h1").unwrap(), lifts::g().pow(4).mul(&lifts::h1()));
        assert_eq!(parse_element("h").unwrap(), lifts::h1());
        assert_eq!(parse_element("g8").unwrap(), MonomialAutomorphism::identity());
        assert!(parse_element("x").is_err());
        assert!(parse_element("").is_err());
        assert_eq!(parse_lattice_element("g4").unwrap(), SignedPerm::minus_identity());
    }

    #[test]
    fn names_cover_the_group() {
        let names = word_names(&lifts::l1());
        assert_eq!(names.len(), 16);
        assert_eq!(names[&lifts::g().pow(4).mul(&lifts::h1())], "g^4·h1");
    }
}
