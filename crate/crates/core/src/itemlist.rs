//! Plain-text itemset lists.
//!
//! One itemset per line, items space-separated (attribute names, or ids when
//! the dataset has no names). The empty itemset is written `{}`. A line may
//! end with a support count in parentheses, e.g. `a b (12)`. Blank lines and
//! lines starting with `#` are ignored when reading.

use std::fmt::Write as _;

use crate::dataset::{ItemId, Itemset};
use crate::error::{Error, Result};

pub fn format_line(set: &Itemset, support: Option<usize>, names: &[String]) -> String {
    let mut line = set.display(names);
    if let Some(s) = support {
        let _ = write!(line, " ({s})");
    }
    line
}

pub fn write_list<'a, I>(sets: I, names: &[String]) -> String
where
    I: IntoIterator<Item = (&'a Itemset, Option<usize>)>,
{
    let mut out = String::new();
    for (set, support) in sets {
        out.push_str(&format_line(set, support, names));
        out.push('\n');
    }
    out
}

/// Parses one non-comment line. `resolve` maps an item token to an id.
pub fn parse_line<F>(line: &str, line_no: usize, resolve: F) -> Result<(Itemset, Option<usize>)>
where
    F: Fn(&str) -> Option<ItemId>,
{
    let err = |message: String| Error::Parse { line: line_no, message };
    let mut tokens: Vec<&str> = line.split_whitespace().collect();
    let mut support = None;
    if let Some(last) = tokens.last() {
        if let Some(inner) = last.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            support = Some(inner.parse().map_err(|_| err(format!("invalid support {last:?}")))?);
            tokens.pop();
        }
    }
    if tokens == ["{}"] {
        return Ok((Itemset::empty(), support));
    }
    let mut items = Vec::with_capacity(tokens.len());
    for tok in tokens {
        items.push(resolve(tok).ok_or_else(|| err(format!("unknown item {tok:?}")))?);
    }
    Ok((Itemset::new(items), support))
}

pub fn parse_list<F>(text: &str, resolve: F) -> Result<Vec<(Itemset, Option<usize>)>>
where
    F: Fn(&str) -> Option<ItemId>,
{
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(n, l)| parse_line(l, n, &resolve))
        .collect()
}

/// Resolver for bare non-negative integer ids below `n_attrs`.
pub fn numeric_ids(n_attrs: usize) -> impl Fn(&str) -> Option<ItemId> {
    move |tok| tok.parse::<ItemId>().ok().filter(|&i| i < n_attrs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_and_parses() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let sets = [Itemset::empty(), Itemset::new([0, 2])];
        let text = write_list(sets.iter().map(|s| (s, Some(3))), &names);
        assert_eq!(text, "{} (3)\na c (3)\n");
        let back = parse_list(&text, |t| names.iter().position(|n| n == t)).unwrap();
        assert_eq!(back, vec![(Itemset::empty(), Some(3)), (Itemset::new([0, 2]), Some(3))]);
    }

    #[test]
    fn rejects_unknown_and_negative_ids() {
        assert!(matches!(parse_list("0 1\n-1\n", numeric_ids(4)), Err(Error::Parse { line: 2, .. })));
        assert!(parse_list("0 9\n", numeric_ids(4)).is_err());
        assert!(parse_list("0 (x)\n", numeric_ids(4)).is_err());
    }
}
