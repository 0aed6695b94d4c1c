//! Recursive-descent parser for the one-line axiom syntax.
//!
//! ```text
//! axiom      := premise ("&" premise)* "->" conclusion
//! premise    := pred | "!" pred | COMPWORD "(" pred "," pred ")"
//! pred       := "Prop(" var "," arg ")" | "Rel(" var "," var "," arg ")"
//! conclusion := COMPWORD "(" pred "," pred ")" | "before(" pred ")" | "after(" pred ")"
//! ```
//!
//! Parsing happens in two passes: a syntactic pass that builds generic
//! call nodes and free-text atoms (reporting byte offsets), and a lowering
//! pass that checks predicate names and arities.

use super::comparator::Comparator;
use super::syntax::{canonical_argument, EntityVar, Formula, Literal, Predicate};
use super::{FolError, Violation};

#[derive(Debug)]
enum Item<'a> {
    Call(Call<'a>),
    Atom { text: &'a str, offset: usize },
}

#[derive(Debug)]
struct Call<'a> {
    name: &'a str,
    offset: usize,
    args: Vec<Item<'a>>,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, FolError> {
        Err(FolError::Syntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), FolError> {
        if self.eat(token) {
            Ok(())
        } else {
            match self.peek() {
                Some(c) => self.error(format!("expected `{token}`, found `{c}`")),
                None => self.error(format!("expected `{token}`, found end of input")),
            }
        }
    }

    fn ident(&mut self) -> Option<(&'a str, usize)> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 || !self.rest().starts_with(|c: char| c.is_ascii_alphabetic()) {
            return None;
        }
        self.pos += len;
        Some((&self.src[start..start + len], start))
    }

    fn call(&mut self) -> Result<Call<'a>, FolError> {
        self.skip_ws();
        let Some((name, offset)) = self.ident() else {
            return match self.peek() {
                Some(c) => self.error(format!("expected a predicate name, found `{c}`")),
                None => self.error("expected a predicate, found end of input"),
            };
        };
        self.expect("(")?;
        let mut args = vec![self.item()?];
        while self.eat(",") {
            args.push(self.item()?);
        }
        self.expect(")")?;
        Ok(Call { name, offset, args })
    }

    /// Either a nested call (identifier directly followed by `(`) or a
    /// free-text atom running up to the next `,` or `)`.
    fn item(&mut self) -> Result<Item<'a>, FolError> {
        self.skip_ws();
        let save = self.pos;
        if self.ident().is_some() {
            self.skip_ws();
            if self.peek() == Some('(') {
                self.pos = save;
                return self.call().map(Item::Call);
            }
        }
        self.pos = save;
        let end = self
            .rest()
            .find([',', ')', '(', '\n', '\r'])
            .map(|i| self.pos + i)
            .unwrap_or(self.src.len());
        let text = &self.src[self.pos..end];
        let offset = self.pos;
        self.pos = end;
        match self.peek() {
            Some(',') | Some(')') => {}
            Some(c) => return self.error(format!("unexpected `{c}` inside argument")),
            None => return self.error("unterminated argument list"),
        }
        if text.trim().is_empty() {
            return Err(FolError::Syntax {
                offset,
                message: "empty argument".into(),
            });
        }
        Ok(Item::Atom { text, offset })
    }
}

/// Parses one axiom line into a formula without checking template shape.
pub fn parse_formula(text: &str) -> Result<Formula, FolError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    if cur.rest().is_empty() {
        return cur.error("empty input");
    }
    let mut raw_premises = vec![premise(&mut cur)?];
    while cur.eat("&") {
        raw_premises.push(premise(&mut cur)?);
    }
    cur.expect("->")?;
    let raw_conclusion = cur.call()?;
    cur.skip_ws();
    if !cur.rest().is_empty() {
        return cur.error("trailing input after conclusion");
    }

    let mut violations = Vec::new();
    let premises = raw_premises
        .into_iter()
        .filter_map(|(negated, call)| {
            lower(call, &mut violations).map(|predicate| Literal { negated, predicate })
        })
        .collect();
    let conclusion = lower(raw_conclusion, &mut violations);
    match conclusion {
        Some(conclusion) if violations.is_empty() => Ok(Formula {
            premises,
            conclusion,
        }),
        _ => Err(FolError::Validation(violations)),
    }
}

fn premise<'a>(cur: &mut Cursor<'a>) -> Result<(bool, Call<'a>), FolError> {
    let negated = cur.eat("!");
    Ok((negated, cur.call()?))
}

fn lower(call: Call<'_>, violations: &mut Vec<Violation>) -> Option<Predicate> {
    let arity = |expected: usize, violations: &mut Vec<Violation>| {
        if call.args.len() != expected {
            violations.push(Violation::Arity {
                predicate: call.name.to_string(),
                expected,
                found: call.args.len(),
            });
            false
        } else {
            true
        }
    };

    if call.name.eq_ignore_ascii_case("prop") {
        if !arity(2, violations) {
            return None;
        }
        let mut args = call.args.into_iter();
        let entity = entity(args.next()?, violations);
        let property = atom(args.next()?, violations);
        Some(Predicate::Prop {
            entity: entity?,
            property: property?,
        })
    } else if call.name.eq_ignore_ascii_case("rel") {
        if !arity(3, violations) {
            return None;
        }
        let mut args = call.args.into_iter();
        let subject = entity(args.next()?, violations);
        let object = entity(args.next()?, violations);
        let relation = atom(args.next()?, violations);
        Some(Predicate::Rel {
            subject: subject?,
            object: object?,
            relation: relation?,
        })
    } else if let Some(c) = Comparator::from_word(call.name) {
        let expected = if c.is_temporal() { 1 } else { 2 };
        if !arity(expected, violations) {
            return None;
        }
        let mut inner: Vec<Predicate> = Vec::with_capacity(expected);
        for item in call.args {
            match item {
                Item::Call(sub) => inner.push(lower(sub, violations)?),
                Item::Atom { text, offset } => {
                    violations.push(Violation::ExpectedPredicate {
                        found: text.trim().to_string(),
                        offset,
                    });
                    return None;
                }
            }
        }
        let mut inner = inner.into_iter();
        if c.is_temporal() {
            Some(Predicate::temporal(c, inner.next()?))
        } else {
            Some(Predicate::comp(c, inner.next()?, inner.next()?))
        }
    } else {
        violations.push(Violation::UnknownPredicate {
            name: call.name.to_string(),
            offset: call.offset,
        });
        None
    }
}

fn entity(item: Item<'_>, violations: &mut Vec<Violation>) -> Option<EntityVar> {
    match item {
        Item::Atom { text, offset } => {
            let v = EntityVar::parse(text.trim());
            if v.is_none() {
                violations.push(Violation::ExpectedEntity {
                    found: text.trim().to_string(),
                    offset,
                });
            }
            v
        }
        Item::Call(call) => {
            violations.push(Violation::ExpectedEntity {
                found: call.name.to_string(),
                offset: call.offset,
            });
            None
        }
    }
}

fn atom(item: Item<'_>, violations: &mut Vec<Violation>) -> Option<String> {
    match item {
        Item::Atom { text, .. } => Some(canonical_argument(text)),
        Item::Call(call) => {
            violations.push(Violation::ExpectedArgument {
                found: call.name.to_string(),
                offset: call.offset,
            });
            None
        }
    }
}
