use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::element::Letter;
use super::model::GroupModel;
use super::GroupError;

fn superscript_digit(c: char) -> Option<u32> {
    match c {
        '⁰' => Some(0),
        '¹' => Some(1),
        '²' => Some(2),
        '³' => Some(3),
        '⁴' => Some(4),
        '⁵' => Some(5),
        '⁶' => Some(6),
        '⁷' => Some(7),
        '⁸' => Some(8),
        '⁹' => Some(9),
        _ => None,
    }
}

/// Parses words such as `ab`, `b⁻¹a`, `t²s`, `a^-1.b^3` or `1`.
pub(crate) fn parse_word(model: &GroupModel, text: &str) -> Result<Vec<Letter>, GroupError> {
    let chars: Vec<char> = text.chars().collect();
    let labels: Vec<Vec<char>> = model.labels().iter().map(|l| l.chars().collect()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '.' || c == '*' || c == '·' {
            i += 1;
            continue;
        }
        let best = labels
            .iter()
            .enumerate()
            .filter(|(_, l)| chars[i..].starts_with(l))
            .max_by_key(|(_, l)| l.len());
        let Some((gen, label)) = best else {
            if c == '1' || c == 'e' || c == 'ε' {
                i += 1;
                continue;
            }
            return Err(GroupError::Parse(format!("unknown symbol at {i} in {text:?}")));
        };
        i += label.len();
        let mut negative = false;
        let mut exponent: Option<u64> = None;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                negative = chars[i] == '-';
                i += 1;
            }
            let start = i;
            let mut e = 0u64;
            while i < chars.len() && chars[i].is_ascii_digit() {
                e = e * 10 + u64::from(chars[i] as u8 - b'0');
                i += 1;
            }
            if i == start {
                return Err(GroupError::Parse(format!("missing exponent in {text:?}")));
            }
            exponent = Some(e);
        } else if i < chars.len() && (chars[i] == '⁻' || superscript_digit(chars[i]).is_some()) {
            if chars[i] == '⁻' {
                negative = true;
                i += 1;
            }
            let start = i;
            let mut e = 0u64;
            while i < chars.len() {
                let Some(d) = superscript_digit(chars[i]) else { break };
                e = e * 10 + u64::from(d);
                i += 1;
            }
            if i == start {
                return Err(GroupError::Parse(format!("missing exponent in {text:?}")));
            }
            exponent = Some(e);
        }
        let e = exponent.unwrap_or(1);
        if e > 1_000_000 {
            return Err(GroupError::Parse(format!("exponent too large in {text:?}")));
        }
        let letter = Letter::new(gen as u32, negative);
        out.extend(core::iter::repeat_n(letter, e as usize));
    }
    Ok(out)
}

/// Inverse of [`parse_word`]: runs of a letter are written with exponents.
pub(crate) fn format_word(model: &GroupModel, word: &[Letter]) -> String {
    if word.is_empty() {
        return String::from("1");
    }
    let sep = if model.labels().iter().all(|l| l.chars().count() == 1) { "" } else { "." };
    let mut out = String::new();
    let mut i = 0;
    while i < word.len() {
        let mut j = i;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        if i > 0 {
            out.push_str(sep);
        }
        out.push_str(&model.labels()[word[i].gen as usize]);
        let run = j - i;
        if word[i].inv {
            let _ = write!(out, "^-{run}");
        } else if run > 1 {
            let _ = write!(out, "^{run}");
        }
        i = j;
    }
    out
}
