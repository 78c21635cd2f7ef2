//! Textual DSL for categories, locally discrete 2-categories and strictly
//! tabulated pseudofunctor data.
//!
//! A document is a sequence of blocks:
//!
//! ```text
//! category C { objects a b; arrows f: a -> b; relations g.f = id(a); }
//! twocat B { objects o; arrows s: o -> o; relations s.s = id(o); }
//! pseudofunctor P from B^op x B to Cat { on (o,o): V; on (s,id_o): { x -> y }; }
//! ```
//!
//! Words are dot-separated generator names read right-to-left (`g.f` means
//! "f first, then g"); `id(a)` is the empty word at `a`. The exact grammar is
//! documented in `docs/grammar.md` and frozen by golden tests; the printer is
//! canonical, so `print ∘ parse ∘ print = print`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, Fun, Nat};
use crate::presentations::{realize, CatPresentation, Realized, Word};
use crate::pseudo::{constant_pseudofunctor, PseudoFun};
use crate::twocat::{Fin2Cat, Shape};

/// A parsed DSL document: blocks in source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    /// `category NAME { … }`
    Category(CatPresentation),
    /// `twocat NAME { … }` — same body; realized as a locally discrete
    /// 2-category (all 2-cells identities).
    TwoCat(CatPresentation),
    /// `pseudofunctor NAME from SHAPE to Cat { … }`
    PseudoFunctor(PfDecl),
}

/// A pseudofunctor block before elaboration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfDecl {
    pub name: String,
    /// Shape factors: (block name, contravariant?).
    pub factors: Vec<(String, bool)>,
    pub body: PfBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PfBody {
    /// `constant V;` — the constant pseudofunctor at a declared category.
    Constant(String),
    Explicit(PfExplicit),
}

/// Explicit object/arrow/φ assignments. Mapping entry lists keep source
/// order; the printer reproduces them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PfExplicit {
    /// shape object name → declared category name.
    pub on_objects: BTreeMap<String, String>,
    /// shape 1-cell name → object/morphism mapping entries.
    pub on_arrows: BTreeMap<String, Vec<(String, String)>>,
    /// `phi(g,f)` overrides, keyed (g, f).
    pub phi2: BTreeMap<(String, String), PhiSpec>,
    /// `phi(a)` overrides, keyed by shape object.
    pub phi0: BTreeMap<String, PhiSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhiSpec {
    Identity,
    /// Component table: value-category object → morphism.
    Components(Vec<(String, String)>),
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Comma,
    Dot,
    Eq,
    Arrow, // ->
    Op,    // ^op
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '*' | '\'')
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut column = 1usize;
    let mut chars = text.chars().peekable();
    let err = |line: usize, column: usize, msg: String| Error::SyntaxError { line, column, msg };
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while let Some(&d) = chars.peek() {
                if d == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        let tok = match c {
            '{' => {
                bump(&mut chars);
                Tok::LBrace
            }
            '}' => {
                bump(&mut chars);
                Tok::RBrace
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            ':' => {
                bump(&mut chars);
                Tok::Colon
            }
            ';' => {
                bump(&mut chars);
                Tok::Semi
            }
            ',' => {
                bump(&mut chars);
                Tok::Comma
            }
            '.' => {
                bump(&mut chars);
                Tok::Dot
            }
            '=' => {
                bump(&mut chars);
                Tok::Eq
            }
            '-' => {
                bump(&mut chars);
                match chars.peek() {
                    Some('>') => {
                        bump(&mut chars);
                        Tok::Arrow
                    }
                    _ => return Err(err(l, col, "expected '->'".into())),
                }
            }
            '^' => {
                bump(&mut chars);
                let mut word = String::new();
                while let Some(&d) = chars.peek() {
                    if ident_char(d) {
                        word.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                if word != "op" {
                    return Err(err(l, col, format!("expected '^op', found '^{word}'")));
                }
                Tok::Op
            }
            c if ident_char(c) => {
                let mut word = String::new();
                while let Some(&d) = chars.peek() {
                    if ident_char(d) {
                        word.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                Tok::Ident(word)
            }
            other => return Err(err(l, col, format!("unexpected character '{other}'"))),
        };
        out.push(Spanned { tok, line: l, column: col });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end_line: usize,
    end_column: usize,
}

impl Parser {
    fn err_at(&self, msg: impl Into<String>) -> Error {
        let (line, column) = match self.toks.get(self.pos) {
            Some(s) => (s.line, s.column),
            None => (self.end_line, self.end_column),
        };
        Error::SyntaxError { line, column, msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn next(&mut self, what: &str) -> Result<Tok> {
        let t = self
            .toks
            .get(self.pos)
            .map(|s| s.tok.clone())
            .ok_or_else(|| self.err_at(format!("expected {what}, found end of input")))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        let found = self.next(what)?;
        if found != t {
            self.pos -= 1;
            return Err(self.err_at(format!("expected {what}")));
        }
        Ok(())
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.next(what)? {
            Tok::Ident(s) => Ok(s),
            _ => {
                self.pos -= 1;
                Err(self.err_at(format!("expected {what}")))
            }
        }
    }

    /// Keyword = a specific identifier.
    fn keyword(&mut self, kw: &str) -> Result<()> {
        let s = self.ident(&format!("'{kw}'"))?;
        if s != kw {
            self.pos -= 1;
            return Err(self.err_at(format!("expected '{kw}', found '{s}'")));
        }
        Ok(())
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    /// A token: an identifier or a parenthesized comma-separated tuple of
    /// tokens, reassembled into the engine's `"(a,b)"` tuple naming.
    fn token(&mut self) -> Result<String> {
        if matches!(self.peek(), Some(Tok::LParen)) {
            self.expect(Tok::LParen, "'('")?;
            let mut parts = vec![self.token()?];
            while matches!(self.peek(), Some(Tok::Comma)) {
                self.expect(Tok::Comma, "','")?;
                parts.push(self.token()?);
            }
            self.expect(Tok::RParen, "')'")?;
            Ok(format!("({})", parts.join(",")))
        } else {
            self.ident("a name")
        }
    }

    /// A token possibly extended by dots (composite morphism names such as
    /// `h.g.f` appearing as mapping values).
    fn dotted_token(&mut self) -> Result<String> {
        let mut s = self.token()?;
        while matches!(self.peek(), Some(Tok::Dot)) {
            self.expect(Tok::Dot, "'.'")?;
            let part = self.token()?;
            s.push('.');
            s.push_str(&part);
        }
        Ok(s)
    }

    /// A word in a presentation: `id(a)` or `g.f` (right-to-left).
    /// Returns (generators leftmost-first, identity object if empty).
    fn word(&mut self) -> Result<(Vec<String>, Option<String>)> {
        if self.at_keyword("id") {
            // Only treat `id` as the empty word when followed by '('.
            if matches!(self.toks.get(self.pos + 1).map(|s| &s.tok), Some(Tok::LParen)) {
                self.keyword("id")?;
                self.expect(Tok::LParen, "'('")?;
                let o = self.ident("an object name")?;
                self.expect(Tok::RParen, "')'")?;
                return Ok((vec![], Some(o)));
            }
        }
        let mut gens = vec![self.ident("a generator name")?];
        while matches!(self.peek(), Some(Tok::Dot)) {
            self.expect(Tok::Dot, "'.'")?;
            gens.push(self.ident("a generator name")?);
        }
        Ok((gens, None))
    }

    fn presentation_body(&mut self, name: &str) -> Result<CatPresentation> {
        let mut p = CatPresentation::new(name);
        // Deferred relations: boundaries can only be typed once all arrows
        // are known, and `relations` may precede `arrows` in principle.
        let mut rels: Vec<((Vec<String>, Option<String>), (Vec<String>, Option<String>))> =
            Vec::new();
        self.expect(Tok::LBrace, "'{'")?;
        while !matches!(self.peek(), Some(Tok::RBrace)) {
            let section = self.ident("'objects', 'arrows' or 'relations'")?;
            match section.as_str() {
                "objects" => {
                    while matches!(self.peek(), Some(Tok::Ident(_))) {
                        let o = self.ident("an object name")?;
                        p.object(o);
                    }
                    self.expect(Tok::Semi, "';'")?;
                }
                "arrows" => loop {
                    let f = self.ident("an arrow name")?;
                    self.expect(Tok::Colon, "':'")?;
                    let s = self.ident("a source object")?;
                    self.expect(Tok::Arrow, "'->'")?;
                    let t = self.ident("a target object")?;
                    p.arrow(f, s, t);
                    match self.next("',' or ';'")? {
                        Tok::Comma => continue,
                        Tok::Semi => break,
                        _ => {
                            self.pos -= 1;
                            return Err(self.err_at("expected ',' or ';'"));
                        }
                    }
                },
                "relations" => loop {
                    let lhs = self.word()?;
                    self.expect(Tok::Eq, "'='")?;
                    let rhs = self.word()?;
                    rels.push((lhs, rhs));
                    match self.next("',' or ';'")? {
                        Tok::Comma => continue,
                        Tok::Semi => break,
                        _ => {
                            self.pos -= 1;
                            return Err(self.err_at("expected ',' or ';'"));
                        }
                    }
                },
                other => {
                    self.pos -= 1;
                    return Err(self.err_at(format!(
                        "expected 'objects', 'arrows' or 'relations', found '{other}'"
                    )));
                }
            }
        }
        self.expect(Tok::RBrace, "'}'")?;
        for (lhs, rhs) in rels {
            let l = typed_word(&p, &lhs)?;
            let r = typed_word(&p, &rhs)?;
            p.relation(l, r)?;
        }
        Ok(p)
    }

    fn pf_decl(&mut self) -> Result<PfDecl> {
        let name = self.ident("a pseudofunctor name")?;
        self.keyword("from")?;
        let mut factors = Vec::new();
        loop {
            let f = self.ident("a shape factor")?;
            let op = if matches!(self.peek(), Some(Tok::Op)) {
                self.expect(Tok::Op, "'^op'")?;
                true
            } else {
                false
            };
            factors.push((f, op));
            if self.at_keyword("x") {
                self.keyword("x")?;
                continue;
            }
            break;
        }
        self.keyword("to")?;
        self.keyword("Cat")?;
        self.expect(Tok::LBrace, "'{'")?;
        let mut body: Option<PfBody> = None;
        let mut explicit = PfExplicit::default();
        let mut saw_explicit = false;
        while !matches!(self.peek(), Some(Tok::RBrace)) {
            let kw = self.ident("'constant', 'on' or 'phi'")?;
            match kw.as_str() {
                "constant" => {
                    let v = self.ident("a category name")?;
                    self.expect(Tok::Semi, "';'")?;
                    if body.is_some() || saw_explicit {
                        self.pos -= 1;
                        return Err(self.err_at("'constant' must be the only item"));
                    }
                    body = Some(PfBody::Constant(v));
                }
                "on" => {
                    saw_explicit = true;
                    let key = self.token()?;
                    self.expect(Tok::Colon, "':'")?;
                    if matches!(self.peek(), Some(Tok::LBrace)) {
                        let entries = self.mapping_block()?;
                        self.expect(Tok::Semi, "';'")?;
                        explicit.on_arrows.insert(key, entries);
                    } else {
                        let v = self.ident("a category name")?;
                        self.expect(Tok::Semi, "';'")?;
                        explicit.on_objects.insert(key, v);
                    }
                }
                "phi" => {
                    saw_explicit = true;
                    self.expect(Tok::LParen, "'('")?;
                    let first = self.token()?;
                    let second = if matches!(self.peek(), Some(Tok::Comma)) {
                        self.expect(Tok::Comma, "','")?;
                        Some(self.token()?)
                    } else {
                        None
                    };
                    self.expect(Tok::RParen, "')'")?;
                    self.expect(Tok::Colon, "':'")?;
                    let spec = if self.at_keyword("identity") {
                        self.keyword("identity")?;
                        PhiSpec::Identity
                    } else {
                        PhiSpec::Components(self.mapping_block()?)
                    };
                    self.expect(Tok::Semi, "';'")?;
                    match second {
                        Some(f) => {
                            explicit.phi2.insert((first, f), spec);
                        }
                        None => {
                            explicit.phi0.insert(first, spec);
                        }
                    }
                }
                other => {
                    self.pos -= 1;
                    return Err(self.err_at(format!(
                        "expected 'constant', 'on' or 'phi', found '{other}'"
                    )));
                }
            }
        }
        self.expect(Tok::RBrace, "'}'")?;
        if body.is_some() && saw_explicit {
            return Err(self.err_at("'constant' cannot be mixed with 'on'/'phi' items"));
        }
        let body = body.unwrap_or(PfBody::Explicit(explicit));
        Ok(PfDecl { name, factors, body })
    }

    /// `{ k -> v, k -> v }` (possibly empty).
    fn mapping_block(&mut self) -> Result<Vec<(String, String)>> {
        self.expect(Tok::LBrace, "'{'")?;
        let mut out = Vec::new();
        if matches!(self.peek(), Some(Tok::RBrace)) {
            self.expect(Tok::RBrace, "'}'")?;
            return Ok(out);
        }
        loop {
            let k = self.dotted_token()?;
            self.expect(Tok::Arrow, "'->'")?;
            let v = self.dotted_token()?;
            out.push((k, v));
            match self.next("',' or '}'")? {
                Tok::Comma => continue,
                Tok::RBrace => break,
                _ => {
                    self.pos -= 1;
                    return Err(self.err_at("expected ',' or '}'"));
                }
            }
        }
        Ok(out)
    }
}

/// Type a raw word against the presentation's arrows.
fn typed_word(p: &CatPresentation, w: &(Vec<String>, Option<String>)) -> Result<Word> {
    // DSL words read right-to-left (`g.f` applies f first), while
    // `CatPresentation::word` takes generators first-applied-first.
    let gens: Vec<&str> = w.0.iter().rev().map(|s| s.as_str()).collect();
    p.word(&gens, w.1.as_deref())
}

/// Parse a whole document.
pub fn parse_document(text: &str) -> Result<Document> {
    let toks = lex(text)?;
    let (end_line, end_column) = text.lines().enumerate().last().map_or((1, 1), |(i, l)| {
        (i + 1, l.chars().count() + 1)
    });
    let mut p = Parser { toks, pos: 0, end_line, end_column };
    let mut items = Vec::new();
    while p.peek().is_some() {
        let kw = p.ident("'category', 'twocat' or 'pseudofunctor'")?;
        match kw.as_str() {
            "category" => {
                let name = p.ident("a category name")?;
                items.push(Item::Category(p.presentation_body(&name)?));
            }
            "twocat" => {
                let name = p.ident("a 2-category name")?;
                items.push(Item::TwoCat(p.presentation_body(&name)?));
            }
            "pseudofunctor" => {
                items.push(Item::PseudoFunctor(p.pf_decl()?));
            }
            other => {
                p.pos -= 1;
                return Err(p.err_at(format!(
                    "expected 'category', 'twocat' or 'pseudofunctor', found '{other}'"
                )));
            }
        }
    }
    if items.is_empty() {
        return Err(Error::SyntaxError {
            line: 1,
            column: 1,
            msg: "empty document: expected at least one block".into(),
        });
    }
    Ok(Document { items })
}

/// Parse a document and return its first `category` block.
pub fn parse_presentation(text: &str) -> Result<CatPresentation> {
    let doc = parse_document(text)?;
    doc.items
        .iter()
        .find_map(|i| match i {
            Item::Category(p) => Some(p.clone()),
            _ => None,
        })
        .ok_or(Error::SyntaxError {
            line: 1,
            column: 1,
            msg: "document contains no 'category' block".into(),
        })
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

fn print_word(w: &Word) -> String {
    if w.gens.is_empty() {
        format!("id({})", w.src)
    } else {
        // Stored first-applied-first; written right-to-left.
        w.gens.iter().rev().cloned().collect::<Vec<_>>().join(".")
    }
}

fn print_presentation(kw: &str, p: &CatPresentation, out: &mut String) {
    out.push_str(&format!("{kw} {} {{\n", p.name));
    if !p.objects.is_empty() {
        let objs: Vec<&str> = p.objects.iter().map(|s| s.as_str()).collect();
        out.push_str(&format!("  objects {};\n", objs.join(" ")));
    }
    if !p.arrows.is_empty() {
        let arrows: Vec<String> =
            p.arrows.iter().map(|(f, (s, t))| format!("{f}: {s} -> {t}")).collect();
        out.push_str(&format!("  arrows {};\n", arrows.join(", ")));
    }
    if !p.relations.is_empty() {
        let rels: Vec<String> = p
            .relations
            .iter()
            .map(|(l, r)| format!("{} = {}", print_word(l), print_word(r)))
            .collect();
        out.push_str(&format!("  relations {};\n", rels.join(", ")));
    }
    out.push_str("}\n");
}

fn print_mapping(entries: &[(String, String)]) -> String {
    if entries.is_empty() {
        return "{ }".into();
    }
    let parts: Vec<String> = entries.iter().map(|(k, v)| format!("{k} -> {v}")).collect();
    format!("{{ {} }}", parts.join(", "))
}

/// Canonical printer; idempotent under parse (`print ∘ parse ∘ print = print`).
pub fn print_document(doc: &Document) -> String {
    let mut out = String::new();
    for (i, item) in doc.items.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match item {
            Item::Category(p) => print_presentation("category", p, &mut out),
            Item::TwoCat(p) => print_presentation("twocat", p, &mut out),
            Item::PseudoFunctor(d) => {
                let factors: Vec<String> = d
                    .factors
                    .iter()
                    .map(|(n, op)| if *op { format!("{n}^op") } else { n.clone() })
                    .collect();
                out.push_str(&format!(
                    "pseudofunctor {} from {} to Cat {{\n",
                    d.name,
                    factors.join(" x ")
                ));
                match &d.body {
                    PfBody::Constant(v) => out.push_str(&format!("  constant {v};\n")),
                    PfBody::Explicit(e) => {
                        for (k, v) in &e.on_objects {
                            out.push_str(&format!("  on {k}: {v};\n"));
                        }
                        for (k, entries) in &e.on_arrows {
                            out.push_str(&format!("  on {k}: {};\n", print_mapping(entries)));
                        }
                        for (a, spec) in &e.phi0 {
                            match spec {
                                PhiSpec::Identity => out.push_str(&format!("  phi({a}): identity;\n")),
                                PhiSpec::Components(c) => {
                                    out.push_str(&format!("  phi({a}): {};\n", print_mapping(c)))
                                }
                            }
                        }
                        for ((g, f), spec) in &e.phi2 {
                            match spec {
                                PhiSpec::Identity => {
                                    out.push_str(&format!("  phi({g},{f}): identity;\n"))
                                }
                                PhiSpec::Components(c) => {
                                    out.push_str(&format!("  phi({g},{f}): {};\n", print_mapping(c)))
                                }
                            }
                        }
                    }
                }
                out.push_str("}\n");
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Elaboration
// ---------------------------------------------------------------------------

/// Elaborated document: realized categories, locally discrete 2-categories,
/// and pseudofunctors with their shapes, in declaration order.
#[derive(Debug, Clone)]
pub struct Elaborated {
    pub cats: BTreeMap<String, Realized>,
    pub twocats: BTreeMap<String, Fin2Cat>,
    pub pfs: Vec<PfElab>,
}

#[derive(Debug, Clone)]
pub struct PfElab {
    pub name: String,
    pub p: PseudoFun,
    pub shape: Shape,
}

impl Elaborated {
    /// Resolve a shape factor name: a `twocat` block, or a `category` block
    /// promoted to a locally discrete 2-category.
    fn factor(&self, name: &str) -> Result<Fin2Cat> {
        if let Some(t) = self.twocats.get(name) {
            return Ok(t.clone());
        }
        if let Some(r) = self.cats.get(name) {
            return Ok(Fin2Cat::from_cat(&r.cat));
        }
        Err(Error::BoundaryError(format!("unknown shape factor '{name}'")))
    }

    fn value_cat(&self, name: &str) -> Result<&FinCat> {
        self.cats
            .get(name)
            .map(|r| &r.cat)
            .ok_or_else(|| Error::BoundaryError(format!("unknown category '{name}'")))
    }
}

/// Build a functor table leniently: mapping keys are split into object and
/// morphism entries; identity-morphism images are filled in automatically.
/// Name existence is enforced (dangling names are input errors) but
/// functoriality is left to `check_pseudofunctor`.
fn lenient_fun(
    cell: &str,
    dom: &FinCat,
    cod: &FinCat,
    entries: &[(String, String)],
) -> Result<Fun> {
    let mut omap = BTreeMap::new();
    let mut mmap = BTreeMap::new();
    for (k, v) in entries {
        if dom.objects.contains(k) {
            if !cod.objects.contains(v) {
                return Err(Error::BoundaryError(format!(
                    "on {cell}: '{v}' is not an object of the target category"
                )));
            }
            omap.insert(k.clone(), v.clone());
        } else if dom.mor.contains_key(k) {
            if !cod.mor.contains_key(v) {
                return Err(Error::BoundaryError(format!(
                    "on {cell}: '{v}' is not a morphism of the target category"
                )));
            }
            mmap.insert(k.clone(), v.clone());
        } else {
            return Err(Error::BoundaryError(format!(
                "on {cell}: '{k}' is neither an object nor a morphism of the source category"
            )));
        }
    }
    for o in &dom.objects {
        if !omap.contains_key(o) {
            return Err(Error::BoundaryError(format!("on {cell}: no image for object '{o}'")));
        }
    }
    for (m, (s, _)) in &dom.mor {
        if !mmap.contains_key(m) {
            if dom.id_of(s) == m {
                mmap.insert(m.clone(), cod.id_of(&omap[s]).to_string());
            } else {
                return Err(Error::BoundaryError(format!(
                    "on {cell}: no image for morphism '{m}'"
                )));
            }
        }
    }
    Ok(Fun { dom: dom.clone(), cod: cod.clone(), omap, mmap })
}

fn phi_nat(label: &str, src: Fun, tgt: Fun, spec: Option<&PhiSpec>) -> Result<Nat> {
    match spec {
        None | Some(PhiSpec::Identity) => Ok(Nat::identity(&src)),
        Some(PhiSpec::Components(entries)) => {
            let mut comp = BTreeMap::new();
            for (k, v) in entries {
                if !src.dom.objects.contains(k) {
                    return Err(Error::BoundaryError(format!(
                        "{label}: component key '{k}' is not an object"
                    )));
                }
                if !src.cod.mor.contains_key(v) {
                    return Err(Error::BoundaryError(format!(
                        "{label}: component '{v}' is not a morphism"
                    )));
                }
                comp.insert(k.clone(), v.clone());
            }
            for o in &src.dom.objects {
                if !comp.contains_key(o) {
                    return Err(Error::BoundaryError(format!(
                        "{label}: missing component at '{o}'"
                    )));
                }
            }
            Ok(Nat { src, tgt, comp })
        }
    }
}

/// Realize every block. Categories and 2-categories are realized through the
/// quotient engine; pseudofunctors are tabulated leniently, leaving semantic
/// verdicts to `check_pseudofunctor`.
pub fn elaborate(doc: &Document, budget: u64) -> Result<Elaborated> {
    let mut el = Elaborated { cats: BTreeMap::new(), twocats: BTreeMap::new(), pfs: Vec::new() };
    for item in &doc.items {
        match item {
            Item::Category(p) => {
                let r = realize(p, budget)?;
                el.cats.insert(p.name.clone(), r);
            }
            Item::TwoCat(p) => {
                let r = realize(p, budget)?;
                el.twocats.insert(p.name.clone(), Fin2Cat::from_cat(&r.cat));
            }
            Item::PseudoFunctor(d) => {
                let mut factors = Vec::new();
                for (n, op) in &d.factors {
                    factors.push((el.factor(n)?, *op));
                }
                let shape = Shape::new(factors);
                let p = match &d.body {
                    PfBody::Constant(v) => {
                        constant_pseudofunctor(el.value_cat(v)?, &shape.total)
                    }
                    PfBody::Explicit(e) => elaborate_explicit(&el, d, e, &shape)?,
                };
                el.pfs.push(PfElab { name: d.name.clone(), p, shape });
            }
        }
    }
    Ok(el)
}

fn elaborate_explicit(
    el: &Elaborated,
    d: &PfDecl,
    e: &PfExplicit,
    shape: &Shape,
) -> Result<PseudoFun> {
    let total = &shape.total;
    let mut ob: BTreeMap<String, FinCat> = BTreeMap::new();
    for o in &total.objects {
        let Some(v) = e.on_objects.get(o) else {
            return Err(Error::BoundaryError(format!(
                "pseudofunctor {}: missing 'on {o}: CATEGORY;'",
                d.name
            )));
        };
        ob.insert(o.clone(), el.value_cat(v)?.clone());
    }
    for k in e.on_objects.keys() {
        if !total.objects.contains(k) {
            return Err(Error::BoundaryError(format!(
                "pseudofunctor {}: '{k}' is not an object of the shape",
                d.name
            )));
        }
    }
    let mut on1: BTreeMap<String, Fun> = BTreeMap::new();
    for (f, (s, t)) in &total.onecells {
        let dom = &ob[s];
        let cod = &ob[t];
        if let Some(entries) = e.on_arrows.get(f) {
            on1.insert(f.clone(), lenient_fun(f, dom, cod, entries)?);
        } else if total.id1_of(s) == f {
            on1.insert(f.clone(), Fun::identity(dom));
        } else {
            return Err(Error::BoundaryError(format!(
                "pseudofunctor {}: missing 'on {f}: {{ … }};'",
                d.name
            )));
        }
    }
    for k in e.on_arrows.keys() {
        if !total.onecells.contains_key(k) {
            return Err(Error::BoundaryError(format!(
                "pseudofunctor {}: '{k}' is not a 1-cell of the shape",
                d.name
            )));
        }
    }
    // All 2-cells of elaborated shapes are identities (locally discrete
    // factors), so their images are identity transformations.
    let mut on2: BTreeMap<String, Nat> = BTreeMap::new();
    for (t, _) in total.all2() {
        let (s, _) = total.two_boundary(&t);
        on2.insert(t, Nat::identity(&on1[&s]));
    }
    let mut phi2: BTreeMap<(String, String), Nat> = BTreeMap::new();
    for (g, f) in total.composable1() {
        let comp = crate::fincat::compose_fun(&on1[&g], &on1[&f])?;
        let gf = total.hc1(&g, &f).to_string();
        let spec = e.phi2.get(&(g.clone(), f.clone()));
        phi2.insert(
            (g.clone(), f.clone()),
            phi_nat(&format!("phi({g},{f})"), comp, on1[&gf].clone(), spec)?,
        );
    }
    for (g, f) in e.phi2.keys() {
        if !phi2.contains_key(&(g.clone(), f.clone())) {
            return Err(Error::BoundaryError(format!(
                "pseudofunctor {}: phi({g},{f}) does not name a composable pair",
                d.name
            )));
        }
    }
    let mut phi0: BTreeMap<String, Nat> = BTreeMap::new();
    for a in &total.objects {
        let i = total.id1_of(a).to_string();
        let spec = e.phi0.get(a);
        phi0.insert(
            a.clone(),
            phi_nat(&format!("phi({a})"), on1[&i].clone(), Fun::identity(&ob[a]), spec)?,
        );
    }
    for a in e.phi0.keys() {
        if !total.objects.contains(a) {
            return Err(Error::BoundaryError(format!(
                "pseudofunctor {}: phi({a}) does not name a shape object",
                d.name
            )));
        }
    }
    Ok(PseudoFun { dom: total.clone(), ob, on1, on2, phi2, phi0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codescent::{bicoend, pi0_oracle};
    use crate::pseudo::check_pseudofunctor;

    const SAMPLE: &str = r#"
# A two-object group-like gadget.
category V { objects p q; arrows f: p -> q, g: q -> p; relations g.f = id(p), f.g = id(q); }
twocat B { objects o; arrows s: o -> o; relations s.s = id(o); }
pseudofunctor P from B^op x B to Cat { constant V; }
"#;

    #[test]
    fn round_trip_is_idempotent() {
        let doc = parse_document(SAMPLE).unwrap();
        let once = print_document(&doc);
        let twice = print_document(&parse_document(&once).unwrap());
        assert_eq!(once, twice);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_document("category C {\n  objects a\n}").unwrap_err();
        match err {
            Error::SyntaxError { line, column, .. } => {
                assert_eq!(line, 3);
                assert_eq!(column, 1);
            }
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn boundary_errors_reject_illtyped_relations() {
        let err = parse_document(
            "category C { objects a b; arrows f: a -> b, g: a -> b; relations g.f = id(a); }",
        )
        .unwrap_err();
        assert!(matches!(err, Error::BoundaryError(_)), "got {err:?}");
    }

    #[test]
    fn empty_input_is_a_syntax_error() {
        assert!(matches!(parse_document(""), Err(Error::SyntaxError { .. })));
    }

    #[test]
    fn parse_presentation_returns_the_first_category() {
        let p = parse_presentation(SAMPLE).unwrap();
        assert_eq!(p.name, "V");
        assert_eq!(p.arrows.len(), 2);
        assert_eq!(p.relations.len(), 2);
    }

    #[test]
    fn elaborated_constant_block_checks_and_computes() {
        let doc = parse_document(SAMPLE).unwrap();
        let el = elaborate(&doc, 500_000).unwrap();
        let pf = &el.pfs[0];
        assert!(check_pseudofunctor(&pf.p).is_pass());
        let c = bicoend(&pf.p, &pf.shape, 500_000).unwrap();
        // Constant at a connected category: a single connected component.
        assert_eq!(pi0_oracle(&c.data).len(), 1);
    }

    #[test]
    fn explicit_mappings_elaborate_to_a_valid_pseudofunctor() {
        let src = r#"
category S { objects x0 x1 x2 x3; }
twocat B { objects o; arrows s: o -> o; relations s.s = id(o); }
pseudofunctor P from B^op x B to Cat {
  on (o,o): S;
  on (s,id_o): { x0 -> x2, x1 -> x3, x2 -> x0, x3 -> x1 };
  on (id_o,s): { x0 -> x1, x1 -> x0, x2 -> x3, x3 -> x2 };
  on (s,s): { x0 -> x3, x1 -> x2, x2 -> x1, x3 -> x0 };
}
"#;
        let doc = parse_document(src).unwrap();
        let el = elaborate(&doc, 500_000).unwrap();
        let pf = &el.pfs[0];
        assert!(check_pseudofunctor(&pf.p).is_pass());
        // Swap-action coend: {x0, x3} and {x1, x2} merge pairwise.
        let c = bicoend(&pf.p, &pf.shape, 500_000).unwrap();
        assert_eq!(c.sol.apex.pi0().len(), 2);
    }

    #[test]
    fn nonfunctorial_mappings_elaborate_but_fail_the_checker() {
        let src = r#"
category S { objects x0 x1; }
twocat B { objects o; arrows s: o -> o; relations s.s = id(o); }
pseudofunctor P from B^op x B to Cat {
  on (o,o): S;
  on (s,id_o): { x0 -> x1, x1 -> x0 };
  on (id_o,s): { x0 -> x0, x1 -> x1 };
  on (s,s): { x0 -> x0, x1 -> x1 };
}
"#;
        // (s,id)∘(s,id) = (id,id) forces the swap squared to be the identity,
        // but (s,s) ≠ (s,id)∘(id,s) breaks strict functoriality.
        let doc = parse_document(src).unwrap();
        let el = elaborate(&doc, 500_000).unwrap();
        let rep = check_pseudofunctor(&el.pfs[0].p);
        assert!(!rep.is_pass());
        assert!(rep.first_failure().is_some());
    }

    #[test]
    fn free_endomorphism_exhausts_the_budget() {
        let src = "category F { objects a; arrows e: a -> a; }";
        let doc = parse_document(src).unwrap();
        let err = elaborate(&doc, 10_000).unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted(_)));
    }
}
