//! Text formats for diagrams and webs, with line and column error reporting.
//!
//! Diagram words read `width W; X i; A i; U i`, where `X` is a crossing,
//! `A` a cap and `U` a cup at 1-based position `i`. Items are separated by
//! `;` or newlines and `#` starts a comment.
//!
//! Webs are s-expressions over `(id k)`, `(cap k)`, `(cup k)`, `(m k l)`,
//! `(s k l)`, `(v3 k l m)`, `(ten t1 t2)` and `(cmp t1 t2)`, where
//! `(cmp a b)` applies `b` first.

use spweb::diagram::{Gen, SliceWord};
use spweb::webcompile::Web;
use thiserror::Error;

/// A parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    /// Line of the offending token.
    pub line: usize,
    /// Column of the offending token.
    pub col: usize,
    /// What went wrong.
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Token {
    text: String,
    line: usize,
    col: usize,
}

fn err<T>(t: &Token, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line: t.line, col: t.col, msg: msg.into() })
}

/// Splits text into tokens; `(`, `)` and `;` are single-character tokens.
fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut cur: Option<Token> = None;
        for (ci, ch) in line.chars().enumerate() {
            let pos = (li + 1, ci + 1);
            if ch.is_whitespace() || matches!(ch, '(' | ')' | ';') {
                if let Some(t) = cur.take() {
                    out.push(t);
                }
                if !ch.is_whitespace() {
                    out.push(Token { text: ch.to_string(), line: pos.0, col: pos.1 });
                }
            } else {
                cur.get_or_insert_with(|| Token { text: String::new(), line: pos.0, col: pos.1 }).text.push(ch);
            }
        }
        if let Some(t) = cur.take() {
            out.push(t);
        }
        out.push(Token { text: "\n".into(), line: li + 1, col: line.chars().count() + 1 });
    }
    out
}

fn end_token(text: &str) -> Token {
    let lines: Vec<&str> = text.lines().collect();
    let line = lines.len().max(1);
    let col = lines.last().map(|l| l.chars().count() + 1).unwrap_or(1);
    Token { text: String::new(), line, col }
}

fn number(t: &Token) -> Result<usize, ParseError> {
    t.text.parse().or_else(|_| err(t, format!("expected a non-negative integer, found {:?}", t.text)))
}

/// Parses a diagram word.
pub fn parse_diagram_dsl(text: &str) -> Result<SliceWord, ParseError> {
    let tokens = tokenize(text);
    let mut items: Vec<Vec<Token>> = vec![vec![]];
    for t in tokens {
        if t.text == ";" || t.text == "\n" {
            items.push(vec![]);
        } else {
            items.last_mut().expect("nonempty").push(t);
        }
    }
    let items: Vec<Vec<Token>> = items.into_iter().filter(|i| !i.is_empty()).collect();
    let Some(first) = items.first() else {
        return err(&end_token(text), "expected `width <n>`");
    };
    if first[0].text != "width" || first.len() != 2 {
        return err(&first[0], "expected `width <n>` as the first item");
    }
    let width = number(&first[1])?;
    let mut gens = Vec::new();
    let mut current = width;
    for item in &items[1..] {
        let head = &item[0];
        if item.len() != 2 {
            return err(head, format!("expected `<X|A|U> <position>`, found {} tokens", item.len()));
        }
        let i = number(&item[1])?;
        let g = match head.text.as_str() {
            "X" | "x" => Gen::Cross(i),
            "A" | "a" => Gen::Cap(i),
            "U" | "u" => Gen::Cup(i),
            other => return err(head, format!("unknown generator {other:?}")),
        };
        let ok = match g {
            Gen::Cross(i) | Gen::Cap(i) => i >= 1 && i < current,
            Gen::Cup(i) => i >= 1 && i <= current + 1,
        };
        if !ok {
            return err(&item[1], format!("position {i} out of range at width {current}"));
        }
        match g {
            Gen::Cap(_) => current -= 2,
            Gen::Cup(_) => current += 2,
            Gen::Cross(_) => {}
        }
        gens.push(g);
    }
    SliceWord::new(width, gens).map_err(|e| ParseError { line: first[0].line, col: first[0].col, msg: e.to_string() })
}

struct WebParser {
    tokens: Vec<Token>,
    pos: usize,
    end: Token,
}

impl WebParser {
    fn peek(&self) -> &Token {
        self.tokens.get(self.pos).unwrap_or(&self.end)
    }

    fn next(&mut self) -> Token {
        let t = self.peek().clone();
        self.pos += 1;
        t
    }

    fn expect(&mut self, s: &str) -> Result<Token, ParseError> {
        let t = self.next();
        if t.text != s {
            let found = if t.text.is_empty() { "end of input".to_string() } else { format!("{:?}", t.text) };
            return err(&t, format!("expected `{s}`, found {found}"));
        }
        Ok(t)
    }

    fn term(&mut self) -> Result<Web, ParseError> {
        self.expect("(")?;
        let head = self.next();
        let arity = match head.text.as_str() {
            "id" | "cap" | "cup" => 1,
            "m" | "s" => 2,
            "v3" => 3,
            "ten" | "cmp" => 0,
            "" => return err(&head, "unexpected end of input"),
            other => return err(&head, format!("unknown constructor {other:?}")),
        };
        let w = if arity == 0 {
            let a = self.term()?;
            let b = self.term()?;
            if head.text == "ten" {
                Web::ten(a, b)
            } else {
                Web::cmp(a, b)
            }
        } else {
            let mut args = Vec::with_capacity(arity);
            for _ in 0..arity {
                let t = self.next();
                args.push(number(&t)?);
            }
            match head.text.as_str() {
                "id" => Web::Id(args[0]),
                "cap" => Web::CapW(args[0]),
                "cup" => Web::CupW(args[0]),
                "m" => Web::Merge(args[0], args[1]),
                "s" => Web::Split(args[0], args[1]),
                _ => Web::Vertex3(args[0], args[1], args[2]),
            }
        };
        self.expect(")")?;
        Ok(w)
    }
}

/// Parses a web term.
pub fn parse_web_dsl(text: &str) -> Result<Web, ParseError> {
    let tokens: Vec<Token> = tokenize(text).into_iter().filter(|t| t.text != "\n").collect();
    if let Some(t) = tokens.iter().find(|t| t.text == ";") {
        return err(t, "unexpected `;`");
    }
    let mut p = WebParser { tokens, pos: 0, end: end_token(text) };
    let w = p.term()?;
    let rest = p.peek().clone();
    if !rest.text.is_empty() {
        return err(&rest, format!("unexpected trailing input {:?}", rest.text));
    }
    Ok(w)
}
