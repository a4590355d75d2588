//! Graph steganography. Each word of a message becomes an integer: the
//! concatenated Huffman codes of its letters with a `1` prepended so leading
//! zeros survive the trip through decimal. A separator value `alpha` stands
//! for spaces and every point is multiplied by `beta`; the resulting (x, y)
//! series reads like an ordinary data set.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Letter to binary-code mapping. Frequencies are kept when the table was
/// built from a message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuffmanTable {
    codes: BTreeMap<char, String>,
    frequencies: BTreeMap<char, u64>,
}

impl HuffmanTable {
    /// Wraps an explicit table, checking that it is a non-empty prefix-free
    /// set of binary strings.
    pub fn from_codes(codes: BTreeMap<char, String>) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::InvalidTable("table is empty".into()));
        }
        for (letter, code) in &codes {
            if *letter == ' ' {
                return Err(Error::InvalidTable(
                    "space cannot be coded; it separates words".into(),
                ));
            }
            if code.is_empty() || !code.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Error::InvalidTable(format!(
                    "code {code:?} for {letter:?} is not binary"
                )));
            }
        }
        let mut sorted: Vec<(&String, &char)> = codes.iter().map(|(l, c)| (c, l)).collect();
        sorted.sort();
        // In lexicographic order any prefix sits immediately before some code it prefixes.
        for pair in sorted.windows(2) {
            if pair[1].0.starts_with(pair[0].0.as_str()) {
                return Err(Error::InvalidTable(format!(
                    "code {} for {:?} is a prefix of {} for {:?}",
                    pair[0].0, pair[0].1, pair[1].0, pair[1].1
                )));
            }
        }
        Ok(Self {
            codes,
            frequencies: BTreeMap::new(),
        })
    }

    pub fn codes(&self) -> &BTreeMap<char, String> {
        &self.codes
    }

    pub fn code(&self, letter: char) -> Option<&str> {
        self.codes.get(&letter).map(String::as_str)
    }

    /// Letter counts the table was built from (empty for explicit tables).
    pub fn frequencies(&self) -> &BTreeMap<char, u64> {
        &self.frequencies
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Σ frequency × code length over the recorded frequencies.
    pub fn weighted_length(&self) -> u64 {
        self.frequencies
            .iter()
            .map(|(l, f)| f * self.codes[l].len() as u64)
            .sum()
    }

    /// Kraft sum Σ 2^-len.
    pub fn kraft_sum(&self) -> f64 {
        self.codes
            .values()
            .map(|c| 0.5f64.powi(c.len() as i32))
            .sum()
    }

    /// True when the code is a full binary tree (Kraft sum exactly 1).
    pub fn is_complete(&self) -> bool {
        let max = self.codes.values().map(String::len).max().unwrap_or(0);
        if max >= 64 {
            return (self.kraft_sum() - 1.0).abs() < 1e-12;
        }
        let total: u128 = self.codes.values().map(|c| 1u128 << (max - c.len())).sum();
        total == 1u128 << max
    }

    fn reverse(&self) -> HashMap<&str, char> {
        self.codes.iter().map(|(l, c)| (c.as_str(), *l)).collect()
    }
}

/// Builds a canonical Huffman code from the letter frequencies of `message`
/// (spaces excluded).
///
/// Merges always take the lightest subtree, breaking weight ties by the
/// smallest letter the subtree contains; codes are then reassigned
/// canonically in (length, letter) order.
pub fn build_table(message: &str) -> Result<HuffmanTable> {
    let mut frequencies = BTreeMap::new();
    for c in message.chars().filter(|&c| c != ' ') {
        *frequencies.entry(c).or_insert(0u64) += 1;
    }
    if frequencies.len() < 2 {
        return Err(Error::AlphabetTooSmall(frequencies.len()));
    }

    // Each subtree tracks the letters it contains; every merge deepens them by one.
    let mut members: Vec<Vec<char>> = Vec::new();
    let mut heap = BinaryHeap::new();
    for (&letter, &f) in &frequencies {
        heap.push(Reverse((f, letter, members.len())));
        members.push(vec![letter]);
    }
    let mut lengths: BTreeMap<char, usize> = frequencies.keys().map(|&c| (c, 0)).collect();
    while heap.len() > 1 {
        let Reverse((wa, ma, a)) = heap.pop().unwrap();
        let Reverse((wb, mb, b)) = heap.pop().unwrap();
        let mut merged = std::mem::take(&mut members[a]);
        merged.append(&mut members[b]);
        for c in &merged {
            *lengths.get_mut(c).unwrap() += 1;
        }
        heap.push(Reverse((wa + wb, ma.min(mb), members.len())));
        members.push(merged);
    }

    let mut order: Vec<(usize, char)> = lengths.iter().map(|(&c, &l)| (l, c)).collect();
    order.sort();
    let mut codes = BTreeMap::new();
    let mut code: u128 = 0;
    let mut prev_len = order[0].0;
    for (i, &(len, letter)) in order.iter().enumerate() {
        if i > 0 {
            code = (code + 1) << (len - prev_len);
        }
        prev_len = len;
        codes.insert(letter, format!("{code:0len$b}"));
    }
    Ok(HuffmanTable { codes, frequencies })
}

/// `1` followed by the letters' codes, read as a binary number.
pub fn encode_word(word: &str, table: &HuffmanTable) -> Result<BigUint> {
    let mut bits = String::from("1");
    for c in word.chars() {
        bits.push_str(table.code(c).ok_or(Error::UnknownLetter(c))?);
    }
    Ok(BigUint::parse_bytes(bits.as_bytes(), 2).expect("bits are binary digits"))
}

/// Drops the leading `1` and parses the remaining bits greedily.
pub fn decode_value(value: &BigUint, table: &HuffmanTable) -> Result<String> {
    if *value < BigUint::from(2u8) {
        return Err(Error::InvalidParameter(format!(
            "word values are at least 2, got {value}"
        )));
    }
    let bits = value.to_str_radix(2);
    let lookup = table.reverse();
    let max_len = table.codes.values().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    let mut start = 1;
    for end in 2..=bits.len() {
        let chunk = &bits[start..end];
        if let Some(&letter) = lookup.get(chunk) {
            out.push(letter);
            start = end;
        } else if chunk.len() >= max_len {
            return Err(Error::DanglingBits(bits[start..].to_string()));
        }
    }
    if start < bits.len() {
        return Err(Error::DanglingBits(bits[start..].to_string()));
    }
    Ok(out)
}

/// Shared secret between sender and receiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphKey {
    pub alpha: u64,
    pub beta: u64,
    pub table: HuffmanTable,
}

#[derive(Serialize, Deserialize)]
struct KeyFile {
    alpha: u64,
    beta: u64,
    table: BTreeMap<String, String>,
}

impl GraphKey {
    pub fn new(alpha: u64, beta: u64, table: HuffmanTable) -> Result<Self> {
        if alpha == 0 || beta == 0 {
            return Err(Error::InvalidParameter(format!(
                "alpha and beta must be positive, got {alpha} and {beta}"
            )));
        }
        Ok(Self { alpha, beta, table })
    }

    /// `{"alpha": .., "beta": .., "table": {"<letter>": "<bits>"}}`
    pub fn to_json(&self) -> String {
        let file = KeyFile {
            alpha: self.alpha,
            beta: self.beta,
            table: self
                .table
                .codes
                .iter()
                .map(|(l, c)| (l.to_string(), c.clone()))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("key serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: KeyFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidTable(format!("key file: {e}")))?;
        let mut codes = BTreeMap::new();
        for (k, v) in file.table {
            let mut chars = k.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => {
                    codes.insert(c, v);
                }
                _ => {
                    return Err(Error::InvalidTable(format!(
                        "key {k:?} is not a single letter"
                    )))
                }
            }
        }
        GraphKey::new(file.alpha, file.beta, HuffmanTable::from_codes(codes)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphSeries {
    pub title: Option<String>,
    pub points: Vec<(u64, BigUint)>,
}

impl GraphSeries {
    pub fn y_values(&self) -> Vec<BigUint> {
        self.points.iter().map(|(_, y)| y.clone()).collect()
    }
}

pub fn encode_series(message: &str, key: &GraphKey) -> Result<GraphSeries> {
    let beta = BigUint::from(key.beta);
    let alpha = BigUint::from(key.alpha);
    let mut ys = Vec::new();
    for (i, word) in message.split(' ').filter(|w| !w.is_empty()).enumerate() {
        if i > 0 {
            ys.push(&alpha * &beta);
        }
        let v = encode_word(word, &key.table)?;
        if v == alpha {
            return Err(Error::InvalidParameter(format!(
                "word {word:?} encodes to alpha {alpha}; pick another alpha"
            )));
        }
        ys.push(v * &beta);
    }
    Ok(GraphSeries {
        title: None,
        points: ys
            .into_iter()
            .enumerate()
            .map(|(i, y)| (i as u64 + 1, y))
            .collect(),
    })
}

pub fn decode_series(series: &GraphSeries, key: &GraphKey) -> Result<String> {
    let beta = BigUint::from(key.beta);
    let alpha = BigUint::from(key.alpha);
    let mut out = String::new();
    for (_, y) in &series.points {
        if !(y % &beta).is_zero() {
            return Err(Error::NotDivisible {
                value: y.to_string(),
                beta: key.beta,
            });
        }
        let q = y / &beta;
        if q == alpha {
            out.push(' ');
        } else {
            out.push_str(&decode_value(&q, &key.table)?);
        }
    }
    Ok(out)
}

/// CSV: optional `# title: ...` line, then `x,y`, then one point per line.
pub fn serialize_series(series: &GraphSeries) -> String {
    let mut out = String::new();
    if let Some(title) = &series.title {
        let _ = writeln!(out, "# title: {}", title.replace(['\r', '\n'], " "));
    }
    out.push_str("x,y\n");
    for (x, y) in &series.points {
        let _ = writeln!(out, "{x},{y}");
    }
    out
}

pub fn parse_series(text: &str) -> Result<GraphSeries> {
    let malformed = |line: usize, reason: String| Error::MalformedCsv { line, reason };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let mut title = None;
    let (mut n, mut first) = lines
        .next()
        .ok_or_else(|| malformed(1, "empty input, expected header `x,y`".into()))?;
    if let Some(rest) = first.strip_prefix('#') {
        let rest = rest.trim_start();
        let t = rest
            .strip_prefix("title:")
            .ok_or_else(|| malformed(n, format!("unrecognized comment {first:?}")))?;
        title = Some(t.strip_prefix(' ').unwrap_or(t).to_string());
        (n, first) = lines
            .next()
            .ok_or_else(|| malformed(n + 1, "missing header `x,y`".into()))?;
    }
    if first.trim() != "x,y" {
        return Err(malformed(
            n,
            format!("expected header `x,y`, found {first:?}"),
        ));
    }
    let mut points = Vec::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let (x, y) = line
            .split_once(',')
            .ok_or_else(|| malformed(n, format!("expected `x,y`, found {line:?}")))?;
        let x: u64 = x
            .trim()
            .parse()
            .map_err(|_| malformed(n, format!("x value {x:?} is not an integer")))?;
        let y = y.trim();
        let y = (!y.is_empty() && y.bytes().all(|b| b.is_ascii_digit()))
            .then(|| BigUint::parse_bytes(y.as_bytes(), 10))
            .flatten()
            .filter(|v| !v.is_zero())
            .ok_or_else(|| malformed(n, format!("y value {y:?} is not a positive integer")))?;
        points.push((x, y));
    }
    Ok(GraphSeries { title, points })
}

/// A valid Huffman code for "this is a test": t 11, s 10, i 00, h 010, a 0110, e 0111.
pub fn example_table() -> HuffmanTable {
    let codes = [
        ('t', "11"),
        ('s', "10"),
        ('i', "00"),
        ('h', "010"),
        ('a', "0110"),
        ('e', "0111"),
    ]
    .into_iter()
    .map(|(l, c)| (l, c.to_string()))
    .collect();
    HuffmanTable::from_codes(codes).expect("example table is prefix-free")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn worked_example_word_values() {
        let t = example_table();
        assert_eq!(encode_word("is", &t).unwrap(), big(18));
        assert_eq!(encode_word("t", &t).unwrap(), big(7));
        assert_eq!(encode_word("a", &t).unwrap(), big(22));
        assert_eq!(decode_value(&big(18), &t).unwrap(), "is");
    }

    #[test]
    fn dangling_bits() {
        let t = example_table();
        assert_eq!(
            decode_value(&big(2), &t),
            Err(Error::DanglingBits("0".into()))
        );
        assert!(decode_value(&big(1), &t).is_err());
    }

    #[test]
    fn unknown_letter() {
        assert_eq!(
            encode_word("ix", &example_table()),
            Err(Error::UnknownLetter('x'))
        );
    }

    #[test]
    fn frequencies_of_example() {
        let t = build_table("this is a test").unwrap();
        let f: Vec<(char, u64)> = t.frequencies().iter().map(|(&c, &n)| (c, n)).collect();
        assert_eq!(
            f,
            vec![('a', 1), ('e', 1), ('h', 1), ('i', 2), ('s', 3), ('t', 3)]
        );
        assert_eq!(t.weighted_length(), 27);
        assert!(t.is_complete());
    }

    #[test]
    fn canonical_codes_for_example() {
        let t = build_table("this is a test").unwrap();
        let codes: Vec<(char, &str)> = t.codes().iter().map(|(&c, s)| (c, s.as_str())).collect();
        assert_eq!(
            codes,
            vec![
                ('a', "1110"),
                ('e', "1111"),
                ('h', "110"),
                ('i', "00"),
                ('s', "01"),
                ('t', "10")
            ]
        );
    }

    #[test]
    fn two_symbols() {
        let t = build_table("ab").unwrap();
        assert_eq!(t.code('a'), Some("0"));
        assert_eq!(t.code('b'), Some("1"));
    }

    #[test]
    fn alphabet_too_small() {
        assert_eq!(build_table("aaa a"), Err(Error::AlphabetTooSmall(1)));
        assert_eq!(build_table("   "), Err(Error::AlphabetTooSmall(0)));
    }

    #[test]
    fn rejects_non_prefix_free() {
        let codes = [('a', "0"), ('b', "01")]
            .into_iter()
            .map(|(l, c)| (l, c.to_string()))
            .collect();
        assert!(matches!(
            HuffmanTable::from_codes(codes),
            Err(Error::InvalidTable(_))
        ));
        let codes = [('a', "0"), ('b', "12")]
            .into_iter()
            .map(|(l, c)| (l, c.to_string()))
            .collect();
        assert!(matches!(
            HuffmanTable::from_codes(codes),
            Err(Error::InvalidTable(_))
        ));
    }

    #[test]
    fn series_with_separators() {
        let key = GraphKey::new(1, 5, example_table()).unwrap();
        let s = encode_series("is is", &key).unwrap();
        assert_eq!(s.y_values(), vec![big(90), big(5), big(90)]);
        assert_eq!(
            s.points.iter().map(|p| p.0).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
        assert_eq!(decode_series(&s, &key).unwrap(), "is is");

        let wrong = GraphKey::new(1, 3, example_table()).unwrap();
        assert!(matches!(
            decode_series(&s, &wrong),
            Err(Error::NotDivisible { beta: 3, .. })
        ));
    }

    #[test]
    fn single_word_identity_scale() {
        let key = GraphKey::new(1, 1, example_table()).unwrap();
        assert_eq!(encode_series("is", &key).unwrap().y_values(), vec![big(18)]);
        assert_eq!(decode_series(&GraphSeries::default(), &key).unwrap(), "");
    }

    #[test]
    fn repeated_spaces_collapse() {
        let key = GraphKey::new(1, 2, example_table()).unwrap();
        let s = encode_series("  is   this ", &key).unwrap();
        assert_eq!(decode_series(&s, &key).unwrap(), "is this");
    }

    #[test]
    fn alpha_collision_detected() {
        let key = GraphKey::new(7, 1, example_table()).unwrap();
        assert!(matches!(
            encode_series("t", &key),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn csv_format() {
        let s = GraphSeries {
            title: None,
            points: vec![(1, big(18))],
        };
        assert_eq!(serialize_series(&s), "x,y\n1,18\n");
        let titled = GraphSeries {
            title: Some("Rainfall (mm)".into()),
            ..s.clone()
        };
        let text = serialize_series(&titled);
        assert_eq!(text, "# title: Rainfall (mm)\nx,y\n1,18\n");
        assert_eq!(parse_series(&text).unwrap(), titled);
        assert_eq!(parse_series("x,y\r\n1,18\r\n").unwrap(), s);
    }

    #[test]
    fn csv_errors() {
        assert_eq!(
            parse_series("x,y\n1,abc\n"),
            Err(Error::MalformedCsv {
                line: 2,
                reason: "y value \"abc\" is not a positive integer".into()
            })
        );
        assert!(matches!(
            parse_series(""),
            Err(Error::MalformedCsv { line: 1, .. })
        ));
        assert!(matches!(
            parse_series("a,b\n"),
            Err(Error::MalformedCsv { line: 1, .. })
        ));
        assert!(matches!(
            parse_series("x,y\n12\n"),
            Err(Error::MalformedCsv { line: 2, .. })
        ));
        assert!(matches!(
            parse_series("x,y\n1,0\n"),
            Err(Error::MalformedCsv { line: 2, .. })
        ));
    }

    #[test]
    fn key_json_shape() {
        let key = GraphKey::new(1, 5, example_table()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&key.to_json()).unwrap();
        assert_eq!(v["alpha"], 1);
        assert_eq!(v["beta"], 5);
        assert_eq!(v["table"]["t"], "11");
        assert_eq!(v["table"]["e"], "0111");
        assert_eq!(GraphKey::from_json(&key.to_json()).unwrap(), key);
        assert!(GraphKey::from_json(r#"{"alpha":1,"beta":0,"table":{"a":"0","b":"1"}}"#).is_err());
        assert!(GraphKey::from_json(r#"{"alpha":1,"beta":2,"table":{"ab":"0"}}"#).is_err());
    }

    #[test]
    fn leading_one_preserves_leading_zeros() {
        let t = example_table();
        // "is" is 0010: plain binary would read 2 and lose the two leading zeros.
        let plain = BigUint::parse_bytes(b"0010", 2).unwrap();
        assert_eq!(plain.to_str_radix(2), "10");
        assert_eq!(
            decode_value(&encode_word("is", &t).unwrap(), &t).unwrap(),
            "is"
        );
    }

    proptest! {
        #[test]
        fn word_round_trip(word in "[thisae]{1,12}") {
            let t = example_table();
            let v = encode_word(&word, &t).unwrap();
            prop_assert!(v >= big(2));
            prop_assert_eq!(decode_value(&v, &t).unwrap(), word);
        }

        #[test]
        fn built_tables_are_complete_and_deterministic(msg in "[a-f ]{2,40}") {
            prop_assume!(msg.chars().filter(|&c| c != ' ').collect::<std::collections::BTreeSet<_>>().len() >= 2);
            let a = build_table(&msg).unwrap();
            prop_assert!(a.is_complete());
            prop_assert_eq!(&a, &build_table(&msg).unwrap());
            prop_assert!(HuffmanTable::from_codes(a.codes().clone()).is_ok());
        }

        #[test]
        fn csv_round_trip(title in proptest::option::of("[ -~]{0,20}"),
                          ys in proptest::collection::vec(1u64..u64::MAX, 0..20)) {
            let s = GraphSeries {
                title,
                points: ys.into_iter().enumerate().map(|(i, y)| (i as u64 + 1, big(y))).collect(),
            };
            prop_assert_eq!(parse_series(&serialize_series(&s)).unwrap(), s);
        }
    }
}
