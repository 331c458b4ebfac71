//! Intelligent-query mini-language.
//!
//! ```text
//! query    := possessive | of_form | name
//! possessive := name POSS relation "?"?
//! of_form  := relation "of" name "?"?
//! POSS     := "'s" | "’s" | "'" after a trailing s
//! relation := advisor[s] | advisee[s] | collaborator[s] | citer[s] | team
//! ```
//!
//! Keywords are case-insensitive. Anything else is a plain name search, so
//! parsing never fails. When a name itself contains a possessive, the last
//! possessive before a trailing relation keyword wins.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Advisor,
    Advisees,
    Collaborators,
    Citers,
    Team,
}

impl Relation {
    pub const ALL: [Relation; 5] =
        [Relation::Advisor, Relation::Advisees, Relation::Collaborators, Relation::Citers, Relation::Team];

    pub fn keyword(self) -> &'static str {
        match self {
            Relation::Advisor => "advisor",
            Relation::Advisees => "advisees",
            Relation::Collaborators => "collaborators",
            Relation::Citers => "citers",
            Relation::Team => "team",
        }
    }

    fn from_keyword(word: &str) -> Option<Self> {
        match word.to_lowercase().as_str() {
            "advisor" | "advisors" => Some(Relation::Advisor),
            "advisee" | "advisees" => Some(Relation::Advisees),
            "collaborator" | "collaborators" => Some(Relation::Collaborators),
            "citer" | "citers" => Some(Relation::Citers),
            "team" => Some(Relation::Team),
            _ => None,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for Relation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Relation::from_keyword(s).ok_or_else(|| format!("unknown relation `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QueryAst {
    NameSearch { name: String },
    RelationQuery { name: String, relation: Relation },
}

impl QueryAst {
    pub fn name(&self) -> &str {
        match self {
            QueryAst::NameSearch { name } | QueryAst::RelationQuery { name, .. } => name,
        }
    }

    pub fn relation(&self) -> Option<Relation> {
        match self {
            QueryAst::NameSearch { .. } => None,
            QueryAst::RelationQuery { relation, .. } => Some(*relation),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.name().is_empty()
    }
}

/// Canonical text form; re-parsing a relation query yields an equal AST.
impl fmt::Display for QueryAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryAst::NameSearch { name } => f.write_str(name),
            QueryAst::RelationQuery { name, relation } => write!(f, "{name}'s {relation}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TokenKind {
    Word,
    Possessive,
}

/// A token with its byte span in the (trimmed) input.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    kind: TokenKind,
    text: &'a str,
    start: usize,
}

const POSSESSIVE_SUFFIXES: [&str; 2] = ["'s", "’s"];
const APOSTROPHES: [char; 2] = ['\'', '’'];

fn tokenize(input: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut offset = 0;
    for piece in input.split_whitespace() {
        let start = offset + input[offset..].find(piece).expect("piece comes from input");
        offset = start + piece.len();
        if POSSESSIVE_SUFFIXES.contains(&piece) {
            tokens.push(Token { kind: TokenKind::Possessive, text: piece, start });
            continue;
        }
        let split = POSSESSIVE_SUFFIXES
            .iter()
            .find_map(|suf| piece.strip_suffix(suf).filter(|stem| !stem.is_empty()))
            .or_else(|| {
                // "James'" → "James" + possessive
                APOSTROPHES.iter().find_map(|ap| {
                    piece.strip_suffix(*ap).filter(|stem| stem.ends_with(['s', 'S']))
                })
            });
        match split {
            Some(stem) => {
                tokens.push(Token { kind: TokenKind::Word, text: stem, start });
                tokens.push(Token { kind: TokenKind::Possessive, text: &piece[stem.len()..], start: start + stem.len() });
            }
            None => tokens.push(Token { kind: TokenKind::Word, text: piece, start }),
        }
    }
    tokens
}

struct Parser<'a> {
    input: &'a str,
    tokens: Vec<Token<'a>>,
}

impl<'a> Parser<'a> {
    fn relation_at(&self, idx: usize) -> Option<Relation> {
        let t = self.tokens.get(idx)?;
        (t.kind == TokenKind::Word).then(|| Relation::from_keyword(t.text.trim_end_matches('?'))).flatten()
    }

    /// `name POSS relation`, the relation being the final token.
    fn possessive(&self) -> Option<QueryAst> {
        let n = self.tokens.len();
        if n < 3 {
            return None;
        }
        let relation = self.relation_at(n - 1)?;
        let poss = self.tokens[n - 2];
        if poss.kind != TokenKind::Possessive {
            return None;
        }
        let name = self.input[..poss.start].trim();
        (!name.is_empty()).then(|| QueryAst::RelationQuery { name: name.to_owned(), relation })
    }

    /// `relation of name`.
    fn of_form(&self) -> Option<QueryAst> {
        if self.tokens.len() < 3 {
            return None;
        }
        let relation = self.relation_at(0)?;
        let of = self.tokens[1];
        if of.kind != TokenKind::Word || !of.text.eq_ignore_ascii_case("of") {
            return None;
        }
        let name = self.input[of.start + of.text.len()..].trim().trim_end_matches('?').trim_end();
        (!name.is_empty()).then(|| QueryAst::RelationQuery { name: name.to_owned(), relation })
    }
}

/// Total parser: every input yields an AST. Blank input gives a name search
/// with an empty name, which callers reject.
pub fn parse_query(text: &str) -> QueryAst {
    let input = text.trim();
    let parser = Parser { input, tokens: tokenize(input) };
    parser
        .possessive()
        .or_else(|| parser.of_form())
        .unwrap_or_else(|| QueryAst::NameSearch { name: input.to_owned() })
}
