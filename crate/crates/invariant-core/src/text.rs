//! The term-language text format.
//!
//! Datasets are written as constructor terms, e.g.
//!
//! ```text
//! IMPLIES(TimePoint(1429188806320),
//!     BIGAND(List(OccupyNode(664), OccupyNode(665))))
//! ```
//!
//! [`parse`] accepts the format with insignificant whitespace between
//! tokens, quoted or bare text payloads, and both `(a,b)` and `a,b` integer
//! tuple spellings. [`print()`] (also the [`Display`](core::fmt::Display)
//! impl on [`Formula`]) emits one canonical style; `parse(print(f))` is
//! structurally equal to `f`.
//!
//! Payload classification: a `TimePoint` payload that is all digits becomes
//! an epoch timestamp, anything else is calendar text captured verbatim up
//! to the balancing parenthesis. A bare `ComponentState` payload becomes an
//! integer tuple when it is two or three comma-separated integers, a number
//! when it is a single integer or decimal token, and otherwise text
//! captured verbatim.

use alloc::borrow::ToOwned;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::decimal::Decimal;
use crate::formula::{Formula, StateValue, Timestamp};

/// Byte range into the parser input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

/// A syntax error with the deepest position the parser reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "expected {} but found {} at byte {}",
            self.expected, self.found, self.span.start
        )
    }
}

impl core::error::Error for ParseError {}

/// Parses one formula; the whole input must be consumed (trailing
/// whitespace aside).
pub fn parse(input: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        input: input.as_bytes(),
        pos: 0,
    };
    let formula = parser.term()?;
    parser.skip_ws();
    if parser.pos < parser.input.len() {
        return Err(parser.error_here("end of input"));
    }
    Ok(formula)
}

/// Renders the canonical text of a formula. Equivalent to `f.to_string()`.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(&b) = self.input.get(self.pos) {
            if b == b' ' || b == b'\t' || b == b'\r' || b == b'\n' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn error_at(&self, span: SourceSpan, expected: &str, found: impl Into<String>) -> ParseError {
        ParseError {
            span,
            expected: expected.to_owned(),
            found: found.into(),
        }
    }

    fn error_here(&self, expected: &str) -> ParseError {
        let (found, end) = match self.peek() {
            Some(b) => (alloc::format!("'{}'", b as char), self.pos + 1),
            None => ("end of input".to_owned(), self.pos),
        };
        self.error_at(
            SourceSpan {
                start: self.pos,
                end,
            },
            expected,
            found,
        )
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here(&alloc::format!("'{}'", byte as char)))
        }
    }

    /// Reads a constructor or keyword name: `[A-Za-z][A-Za-z0-9_]*`.
    fn name(&mut self) -> Result<(&'a str, SourceSpan), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(&b) = self.input.get(self.pos) {
            if b.is_ascii_alphanumeric() || b == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start || !self.input[start].is_ascii_alphabetic() {
            self.pos = start;
            return Err(self.error_here("a constructor name"));
        }
        let span = SourceSpan {
            start,
            end: self.pos,
        };
        let text = core::str::from_utf8(&self.input[start..self.pos]).expect("ascii name");
        Ok((text, span))
    }

    fn term(&mut self) -> Result<Formula, ParseError> {
        let (name, span) = self.name()?;
        match name {
            "TRUE" => self.nullary(Formula::True),
            "FALSE" => self.nullary(Formula::False),
            "AND" => self.binary(Formula::and),
            "OR" => self.binary(Formula::or),
            "IMPLIES" => self.binary(Formula::implies),
            "NOT" => {
                self.expect(b'(')?;
                let inner = self.term()?;
                self.expect(b')')?;
                Ok(Formula::not(inner))
            }
            "BIGAND" => self.big(Formula::BigAnd),
            "BIGOR" => self.big(Formula::BigOr),
            "TimePoint" => self.time_point(),
            "Owner" => Ok(Formula::Owner(self.text_payload()?)),
            "Component" => Ok(Formula::Component(self.text_payload()?)),
            "ComponentState" => self.component_state(),
            "Occupy3DPoint" => {
                self.expect(b'(')?;
                let x = self.int()?;
                self.expect(b',')?;
                let y = self.int()?;
                self.expect(b',')?;
                let z = self.int()?;
                self.expect(b')')?;
                Ok(Formula::Occupy3DPoint(x, y, z))
            }
            "OccupyNode" => {
                self.expect(b'(')?;
                let (id, id_span) = self.uint()?;
                let id = core::num::NonZeroU64::new(id)
                    .ok_or_else(|| self.error_at(id_span, "a node id of at least 1", "'0'"))?;
                self.expect(b')')?;
                Ok(Formula::OccupyNode(id))
            }
            other => Err(self.error_at(
                span,
                "a known constructor",
                alloc::format!("'{other}'"),
            )),
        }
    }

    /// `TRUE` and `FALSE` appear both bare and with empty parentheses.
    fn nullary(&mut self, value: Formula) -> Result<Formula, ParseError> {
        let mark = self.pos;
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            self.expect(b')')?;
        } else {
            self.pos = mark;
        }
        Ok(value)
    }

    fn binary(&mut self, build: fn(Formula, Formula) -> Formula) -> Result<Formula, ParseError> {
        self.expect(b'(')?;
        let left = self.term()?;
        self.expect(b',')?;
        let right = self.term()?;
        self.expect(b')')?;
        Ok(build(left, right))
    }

    fn big(&mut self, build: fn(Vec<Formula>) -> Formula) -> Result<Formula, ParseError> {
        self.expect(b'(')?;
        let (keyword, span) = self.name()?;
        if keyword != "List" {
            return Err(self.error_at(span, "'List'", alloc::format!("'{keyword}'")));
        }
        self.expect(b'(')?;
        let mut items = Vec::new();
        self.skip_ws();
        if self.peek() != Some(b')') {
            loop {
                items.push(self.term()?);
                self.skip_ws();
                if self.peek() == Some(b',') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(b')')?;
        self.expect(b')')?;
        Ok(build(items))
    }

    /// Captures everything up to the parenthesis balancing the most recent
    /// opener, verbatim.
    fn balanced_raw(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        let mut depth = 0usize;
        while let Some(&b) = self.input.get(self.pos) {
            match b {
                b'(' => depth += 1,
                b')' => {
                    if depth == 0 {
                        let text = core::str::from_utf8(&self.input[start..self.pos])
                            .map_err(|_| self.error_here("valid UTF-8 payload"))?;
                        return Ok(text);
                    }
                    depth -= 1;
                }
                _ => {}
            }
            self.pos += 1;
        }
        Err(self.error_here("')'"))
    }

    fn time_point(&mut self) -> Result<Formula, ParseError> {
        self.expect(b'(')?;
        let start = self.pos;
        let raw = self.balanced_raw()?;
        if raw.is_empty() {
            return Err(self.error_here("a timestamp payload"));
        }
        let stamp = if raw.bytes().all(|b| b.is_ascii_digit()) {
            let millis = raw.parse::<u64>().map_err(|_| {
                self.error_at(
                    SourceSpan {
                        start,
                        end: self.pos,
                    },
                    "an epoch timestamp within 64 bits",
                    alloc::format!("'{raw}'"),
                )
            })?;
            Timestamp::EpochMillis(millis)
        } else {
            Timestamp::CalendarText(raw.to_owned())
        };
        self.expect(b')')?;
        Ok(Formula::TimePoint(stamp))
    }

    /// `Owner`/`Component` payload: quoted or bare text. Bare text is
    /// captured verbatim, including any interior whitespace.
    fn text_payload(&mut self) -> Result<String, ParseError> {
        self.expect(b'(')?;
        let raw_start = self.pos;
        self.skip_ws();
        let label = if self.peek() == Some(b'"') {
            self.quoted()?
        } else {
            self.pos = raw_start;
            let raw = self.balanced_raw()?;
            if raw.is_empty() {
                return Err(self.error_here("a label"));
            }
            raw.to_owned()
        };
        self.expect(b')')?;
        Ok(label)
    }

    fn quoted(&mut self) -> Result<String, ParseError> {
        debug_assert_eq!(self.peek(), Some(b'"'));
        self.pos += 1;
        let start = self.pos;
        while let Some(&b) = self.input.get(self.pos) {
            if b == b'"' {
                let text = core::str::from_utf8(&self.input[start..self.pos])
                    .map_err(|_| self.error_here("valid UTF-8 payload"))?;
                self.pos += 1;
                return Ok(text.to_owned());
            }
            self.pos += 1;
        }
        Err(self.error_here("a closing '\"'"))
    }

    fn component_state(&mut self) -> Result<Formula, ParseError> {
        self.expect(b'(')?;
        let raw_start = self.pos;
        self.skip_ws();
        let value = match self.peek() {
            Some(b'"') => StateValue::Text(self.quoted()?),
            Some(b'(') => {
                self.pos += 1;
                let tuple = self.tuple_items()?;
                self.expect(b')')?;
                StateValue::IntTuple(tuple)
            }
            _ => {
                self.pos = raw_start;
                let start = self.pos;
                let raw = self.balanced_raw()?;
                if raw.is_empty() {
                    return Err(self.error_here("a state value"));
                }
                self.classify_bare_state(raw, start)?
            }
        };
        self.expect(b')')?;
        Ok(Formula::ComponentState(value))
    }

    /// Parenthesized tuple body: one to three comma-separated integers.
    fn tuple_items(&mut self) -> Result<Vec<i64>, ParseError> {
        let mut items = Vec::new();
        loop {
            items.push(self.int()?);
            self.skip_ws();
            if self.peek() == Some(b',') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if items.len() > 3 {
            return Err(self.error_here("a tuple of at most three integers"));
        }
        Ok(items)
    }

    fn classify_bare_state(&self, raw: &str, start: usize) -> Result<StateValue, ParseError> {
        let span = SourceSpan {
            start,
            end: start + raw.len(),
        };
        let parts: Vec<&str> = raw.split(',').collect();
        if parts.len() >= 2 {
            let ints: Option<Vec<i64>> =
                parts.iter().map(|p| parse_int_token(p.trim())).collect();
            if let Some(ints) = ints {
                if ints.len() > 3 {
                    return Err(self.error_at(
                        span,
                        "a tuple of at most three integers",
                        alloc::format!("'{raw}'"),
                    ));
                }
                return Ok(StateValue::IntTuple(ints));
            }
        } else {
            let token = raw.trim();
            if let Some(value) = parse_int_token(token) {
                return Ok(StateValue::Number(Decimal::from_int(value)));
            }
            if let Some(value) = parse_decimal_token(token) {
                return Ok(StateValue::Number(value));
            }
        }
        Ok(StateValue::Text(raw.to_owned()))
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = core::str::from_utf8(&self.input[start..self.pos]).expect("ascii digits");
        parse_int_token(text).ok_or_else(|| {
            self.pos = start;
            self.error_here("an integer")
        })
    }

    fn uint(&mut self) -> Result<(u64, SourceSpan), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error_here("an unsigned integer"));
        }
        let span = SourceSpan {
            start,
            end: self.pos,
        };
        let text = core::str::from_utf8(&self.input[start..self.pos]).expect("ascii digits");
        let value = text
            .parse::<u64>()
            .map_err(|_| self.error_at(span, "an unsigned integer within 64 bits", alloc::format!("'{text}'")))?;
        Ok((value, span))
    }
}

/// A complete signed integer token, or `None`.
fn parse_int_token(token: &str) -> Option<i64> {
    let rest = token.strip_prefix('-').unwrap_or(token);
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    token.parse::<i64>().ok()
}

/// A complete `digits.digits` token with an optional sign, or `None`.
fn parse_decimal_token(token: &str) -> Option<Decimal> {
    let (negative, rest) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    let dot = rest.find('.')?;
    let (int_part, frac_part) = (&rest[..dot], &rest[dot + 1..]);
    if int_part.is_empty()
        || frac_part.is_empty()
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let mut mantissa: i64 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        mantissa = mantissa
            .checked_mul(10)?
            .checked_add(i64::from(b - b'0'))?;
    }
    if negative {
        mantissa = -mantissa;
    }
    let scale = u8::try_from(frac_part.len()).ok()?;
    Some(Decimal::new(mantissa, scale))
}

/// True when a label prints without quotes.
fn bare_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

fn write_label(f: &mut fmt::Formatter<'_>, label: &str) -> fmt::Result {
    if bare_label(label) {
        f.write_str(label)
    } else {
        write!(f, "\"{label}\"")
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Timestamp::EpochMillis(millis) => write!(f, "{millis}"),
            Timestamp::CalendarText(raw) => f.write_str(raw),
        }
    }
}

impl fmt::Display for StateValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateValue::Number(value) => write!(f, "{value}"),
            StateValue::IntTuple(values) => {
                f.write_char('(')?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        f.write_char(',')?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_char(')')
            }
            // An all-digit label would read back as a number, so it is
            // quoted even though it fits the bare character set.
            StateValue::Text(text) => {
                if bare_label(text) && !text.bytes().all(|b| b.is_ascii_digit()) {
                    f.write_str(text)
                } else {
                    write!(f, "\"{text}\"")
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::And(l, r) => write!(f, "AND({l},{r})"),
            Formula::Or(l, r) => write!(f, "OR({l},{r})"),
            Formula::Not(inner) => write!(f, "NOT({inner})"),
            Formula::Implies(p, c) => write!(f, "IMPLIES({p},{c})"),
            Formula::BigAnd(items) => write_big(f, "BIGAND", items),
            Formula::BigOr(items) => write_big(f, "BIGOR", items),
            Formula::True => f.write_str("TRUE()"),
            Formula::False => f.write_str("FALSE()"),
            Formula::TimePoint(stamp) => write!(f, "TimePoint({stamp})"),
            Formula::Owner(label) => {
                f.write_str("Owner(")?;
                write_label(f, label)?;
                f.write_char(')')
            }
            Formula::Component(label) => {
                f.write_str("Component(")?;
                write_label(f, label)?;
                f.write_char(')')
            }
            Formula::ComponentState(value) => write!(f, "ComponentState({value})"),
            Formula::Occupy3DPoint(x, y, z) => write!(f, "Occupy3DPoint({x},{y},{z})"),
            Formula::OccupyNode(id) => write!(f, "OccupyNode({id})"),
        }
    }
}

fn write_big(f: &mut fmt::Formatter<'_>, name: &str, items: &[Formula]) -> fmt::Result {
    f.write_str(name)?;
    f.write_str("(List(")?;
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    f.write_str("))")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;
    use alloc::vec;

    fn roundtrip(input: &str) -> Formula {
        let parsed = parse(input).expect("fixture parses");
        let printed = print(&parsed);
        let reparsed = parse(&printed).expect("canonical text parses");
        assert_eq!(parsed, reparsed, "round trip changed the tree");
        reparsed
    }

    #[test]
    fn parses_depth_scan_pair() {
        let f = parse("IMPLIES(Occupy3DPoint(-1,1,2),ComponentState(0,0))").unwrap();
        assert_eq!(
            f,
            F::implies(F::Occupy3DPoint(-1, 1, 2), F::state_tuple([0, 0]))
        );
    }

    #[test]
    fn parses_constants_with_and_without_parens() {
        assert_eq!(parse("TRUE()").unwrap(), F::True);
        assert_eq!(parse("TRUE").unwrap(), F::True);
        assert_eq!(parse("FALSE()").unwrap(), F::False);
    }

    #[test]
    fn tuple_forms_are_equivalent() {
        let nested = parse("ComponentState((41,49,39))").unwrap();
        let bare = parse("ComponentState(41, 49 ,39)").unwrap();
        assert_eq!(nested, bare);
        assert_eq!(print(&nested), "ComponentState((41,49,39))");
    }

    #[test]
    fn single_integer_state_is_a_number() {
        assert_eq!(
            parse("ComponentState(770)").unwrap(),
            F::state_number(Decimal::from_int(770))
        );
        assert_eq!(
            parse("ComponentState((770))").unwrap(),
            F::state_tuple([770])
        );
    }

    #[test]
    fn decimal_states_keep_their_marker() {
        let five = parse("ComponentState(5.0)").unwrap();
        assert_eq!(five, F::state_number(Decimal::new(5, 0)));
        assert_eq!(print(&five), "ComponentState(5.0)");
        let half = parse("ComponentState(5.5)").unwrap();
        assert_eq!(print(&half), "ComponentState(5.5)");
    }

    #[test]
    fn bare_and_quoted_labels() {
        assert_eq!(parse("Owner(\"Points\")").unwrap(), F::owner("Points"));
        assert_eq!(parse("Owner(ID)").unwrap(), F::owner("ID"));
        assert_eq!(
            parse("Component(stackEjectorExtendSol)").unwrap(),
            F::component("stackEjectorExtendSol")
        );
        // Canonical printing only quotes labels that need it.
        assert_eq!(print(&F::owner("Points")), "Owner(Points)");
        assert_eq!(print(&F::owner("two words")), "Owner(\"two words\")");
    }

    #[test]
    fn text_state_values() {
        assert_eq!(
            parse("ComponentState(melbourne)").unwrap(),
            F::state_text("melbourne")
        );
        // Digit-only text needs quotes to stay text.
        let digits = F::state_text("770");
        assert_eq!(print(&digits), "ComponentState(\"770\")");
        assert_eq!(parse(&print(&digits)).unwrap(), digits);
    }

    #[test]
    fn epoch_and_calendar_time_points() {
        assert_eq!(
            parse("TimePoint(1429188806320)").unwrap(),
            F::time_point(1429188806320)
        );
        assert_eq!(
            parse("TimePoint(Wed Jul 27 09:11:28 UTC 2016)").unwrap(),
            F::calendar_time("Wed Jul 27 09:11:28 UTC 2016")
        );
        assert_eq!(
            parse("TimePoint(1st December 201511:04AM)").unwrap(),
            F::calendar_time("1st December 201511:04AM")
        );
    }

    #[test]
    fn calendar_text_round_trips_verbatim() {
        let t = roundtrip("TimePoint(8th December 201511:05AM)");
        assert_eq!(print(&t), "TimePoint(8th December 201511:05AM)");
    }

    #[test]
    fn whitespace_between_tokens_is_insignificant() {
        let compact = parse("BIGAND(List(OccupyNode(1),OccupyNode(2)))").unwrap();
        let spread = parse("BIGAND( List(\n  OccupyNode( 1 ) ,\n  OccupyNode( 2 )\n) )").unwrap();
        assert_eq!(compact, spread);
    }

    #[test]
    fn empty_list_prints_and_parses() {
        assert_eq!(parse("BIGAND(List())").unwrap(), F::BigAnd(vec![]));
        assert_eq!(print(&F::BigAnd(vec![])), "BIGAND(List())");
        assert_eq!(print(&F::BigOr(vec![])), "BIGOR(List())");
    }

    #[test]
    fn nested_connectives_round_trip() {
        roundtrip("NOT(OR(TRUE(),AND(FALSE(),IMPLIES(TRUE(),FALSE()))))");
        roundtrip("BIGOR(List(NOT(TRUE()), BIGAND(List())))");
    }

    #[test]
    fn unknown_constructor_is_named() {
        let err = parse("SOMETHING(1)").unwrap_err();
        assert_eq!(err.found, "'SOMETHING'");
        assert_eq!(err.span, SourceSpan { start: 0, end: 9 });
    }

    #[test]
    fn trailing_comma_is_rejected() {
        let err = parse("BIGAND(List(TRUE(),))").unwrap_err();
        assert_eq!(err.expected, "a constructor name");
    }

    #[test]
    fn ellipsis_is_rejected() {
        assert!(parse("BIGAND(List(TRUE(), ...))").is_err());
    }

    #[test]
    fn truncated_input_reports_end_of_input() {
        let err = parse("IMPLIES(TRUE(),").unwrap_err();
        assert_eq!(err.found, "end of input");
        assert_eq!(err.span.start, 15);
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        let err = parse("TRUE() FALSE()").unwrap_err();
        assert_eq!(err.expected, "end of input");
    }

    #[test]
    fn zero_node_id_is_rejected() {
        let err = parse("OccupyNode(0)").unwrap_err();
        assert_eq!(err.expected, "a node id of at least 1");
    }

    #[test]
    fn oversized_tuples_are_rejected() {
        assert!(parse("ComponentState((1,2,3,4))").is_err());
        assert!(parse("ComponentState(1,2,3,4)").is_err());
    }

    #[test]
    fn mixed_comma_payload_stays_text() {
        assert_eq!(
            parse("ComponentState(1,abc)").unwrap(),
            F::state_text("1,abc")
        );
    }

    #[test]
    fn reprint_is_stable() {
        let inputs = [
            "IMPLIES(Occupy3DPoint(-1,1,2),ComponentState(0,0))",
            "IMPLIES(AND(TimePoint(Wed Jul 27 09:11:28 UTC 2016),Component(stackEjectorExtendSol)),ComponentState(5.0))",
            "IMPLIES(Owner(\"Points\"), BIGAND(List(ComponentState((41,49,39)))))",
        ];
        for input in inputs {
            let once = print(&parse(input).unwrap());
            let twice = print(&parse(&once).unwrap());
            assert_eq!(once, twice, "input: {input}");
        }
    }
}
