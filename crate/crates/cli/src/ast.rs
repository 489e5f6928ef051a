//! Syntax tree of the pair-description language.

use std::fmt;

use hecke_core::pair::Caps;

/// Byte range into the source text, with the 1-based line and column of its start.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Catalog constructors and their parameter counts.
pub const BUILTINS: &[(&str, usize)] = &[("bs", 1), ("lamplighter", 1), ("dihedral", 0), ("translation", 0), ("free2", 0)];

pub fn builtin_arity(name: &str) -> Option<usize> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|&(_, a)| a)
}

/// The point named in `contraction(x)`: an integer, or a word applied to the domain base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractionPoint {
    Int(i64),
    Word(String),
}

impl fmt::Display for ContractionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContractionPoint::Int(v) => write!(f, "{v}"),
            ContractionPoint::Word(w) => write!(f, "{w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairExpr {
    Builtin { name: String, params: Vec<i64>, span: Span },
    Ref { name: String, span: Span },
    Wreath { bottom: Box<PairExpr>, top: Box<PairExpr>, span: Span },
    IterWreath { expr: Box<PairExpr>, k: u32, span: Span },
    Hnn { expr: Box<PairExpr>, point: ContractionPoint, span: Span },
    Perfectize { expr: Box<PairExpr>, span: Span },
}

impl PairExpr {
    pub fn span(&self) -> Span {
        match self {
            PairExpr::Builtin { span, .. }
            | PairExpr::Ref { span, .. }
            | PairExpr::Wreath { span, .. }
            | PairExpr::IterWreath { span, .. }
            | PairExpr::Hnn { span, .. }
            | PairExpr::Perfectize { span, .. } => *span,
        }
    }

    /// The same tree with every span reset, for structural comparison.
    pub fn without_spans(&self) -> PairExpr {
        let span = Span::default();
        let boxed = |e: &PairExpr| Box::new(e.without_spans());
        match self {
            PairExpr::Builtin { name, params, .. } => PairExpr::Builtin { name: name.clone(), params: params.clone(), span },
            PairExpr::Ref { name, .. } => PairExpr::Ref { name: name.clone(), span },
            PairExpr::Wreath { bottom, top, .. } => PairExpr::Wreath { bottom: boxed(bottom), top: boxed(top), span },
            PairExpr::IterWreath { expr, k, .. } => PairExpr::IterWreath { expr: boxed(expr), k: *k, span },
            PairExpr::Hnn { expr, point, .. } => PairExpr::Hnn { expr: boxed(expr), point: point.clone(), span },
            PairExpr::Perfectize { expr, .. } => PairExpr::Perfectize { expr: boxed(expr), span },
        }
    }
}

impl fmt::Display for PairExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairExpr::Builtin { name, params, .. } => {
                write!(f, "{name}(")?;
                for (i, p) in params.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            PairExpr::Ref { name, .. } => write!(f, "{name}"),
            PairExpr::Wreath { bottom, top, .. } => write!(f, "wreath({bottom}, {top})"),
            PairExpr::IterWreath { expr, k, .. } => write!(f, "iterwreath({expr}, {k})"),
            PairExpr::Hnn { expr, point, .. } => write!(f, "hnn({expr}, contraction({point}))"),
            PairExpr::Perfectize { expr, .. } => write!(f, "perfectize({expr})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verb {
    Verify,
    Orbits,
    Index,
    Scale,
    Ball,
    Complete,
    Filter,
    Rank,
    Tower,
}

impl Verb {
    pub const ALL: [Verb; 9] =
        [Verb::Verify, Verb::Orbits, Verb::Index, Verb::Scale, Verb::Ball, Verb::Complete, Verb::Filter, Verb::Rank, Verb::Tower];

    pub fn name(self) -> &'static str {
        match self {
            Verb::Verify => "verify",
            Verb::Orbits => "orbits",
            Verb::Index => "index",
            Verb::Scale => "scale",
            Verb::Ball => "ball",
            Verb::Complete => "complete",
            Verb::Filter => "filter",
            Verb::Rank => "rank",
            Verb::Tower => "tower",
        }
    }

    pub fn from_name(name: &str) -> Option<Verb> {
        Verb::ALL.into_iter().find(|v| v.name() == name)
    }

    /// Options accepted by the verb.
    pub fn options(self) -> &'static [OptionName] {
        use OptionName::*;
        match self {
            Verb::Verify | Verb::Index | Verb::Complete => &[Depth, Caps, Output, Format],
            Verb::Orbits | Verb::Ball => &[Radius, Caps, Output, Format],
            Verb::Scale => &[Steps, Depth, Caps, Output, Format],
            Verb::Filter => &[Output, Format],
            Verb::Rank => &[Certificate, Output, Format],
            Verb::Tower => &[N, Seed, Output, Format],
        }
    }

    /// Output formats accepted by the verb; the first is the default.
    pub fn formats(self) -> &'static [Format] {
        match self {
            Verb::Ball => &[Format::Text, Format::Json, Format::Dot],
            _ => &[Format::Text, Format::Json],
        }
    }
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OptionName {
    Depth,
    Radius,
    Steps,
    Caps,
    Output,
    Format,
    N,
    Seed,
    Certificate,
}

impl OptionName {
    /// Canonical printing order.
    pub const ALL: [OptionName; 9] = [
        OptionName::Depth,
        OptionName::Radius,
        OptionName::Steps,
        OptionName::N,
        OptionName::Seed,
        OptionName::Certificate,
        OptionName::Caps,
        OptionName::Format,
        OptionName::Output,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OptionName::Depth => "depth",
            OptionName::Radius => "radius",
            OptionName::Steps => "steps",
            OptionName::Caps => "caps",
            OptionName::Output => "output",
            OptionName::Format => "format",
            OptionName::N => "n",
            OptionName::Seed => "seed",
            OptionName::Certificate => "certificate",
        }
    }

    pub fn from_name(name: &str) -> Option<OptionName> {
        OptionName::ALL.into_iter().find(|o| o.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Dot => "dot",
        }
    }

    pub fn from_name(name: &str) -> Option<Format> {
        [Format::Text, Format::Json, Format::Dot].into_iter().find(|f| f.name() == name)
    }
}

/// Seed of the tower: the abstract seed with declared facts, or a pair expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Seed {
    Abstract,
    Expr(PairExpr),
}

/// A pair-valued argument of type `word`, kept as source text until a pair resolves it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordArg {
    pub text: String,
    pub span: Span,
}

/// A file path argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathArg {
    pub path: String,
    pub span: Span,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Options {
    pub depth: Option<usize>,
    pub radius: Option<usize>,
    pub steps: Option<usize>,
    pub caps: Option<Caps>,
    pub output: Option<PathArg>,
    pub format: Option<Format>,
    pub n: Option<u32>,
    pub seed: Option<Seed>,
    pub certificate: Option<PathArg>,
}

/// Positional arguments, by verb.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Verify { target: PairExpr },
    Orbits { target: PairExpr },
    Index { target: PairExpr, words: Vec<WordArg> },
    Scale { target: PairExpr, word: Option<WordArg> },
    Ball { target: PairExpr },
    Complete { target: PairExpr, word: WordArg },
    FilterCompare { lhs: PathArg, rhs: PathArg },
    FilterShow { file: PathArg },
    Rank { target: Option<PairExpr> },
    Tower,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub verb: Verb,
    pub action: Action,
    pub options: Options,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Binding { name: String, expr: PairExpr, span: Span },
    Command(Command),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub statements: Vec<Statement>,
}

fn strip_word(w: &WordArg) -> WordArg {
    WordArg { text: w.text.clone(), span: Span::default() }
}

fn strip_path(p: &PathArg) -> PathArg {
    PathArg { path: p.path.clone(), span: Span::default() }
}

impl Command {
    pub fn without_spans(&self) -> Command {
        let action = match &self.action {
            Action::Verify { target } => Action::Verify { target: target.without_spans() },
            Action::Orbits { target } => Action::Orbits { target: target.without_spans() },
            Action::Index { target, words } => {
                Action::Index { target: target.without_spans(), words: words.iter().map(strip_word).collect() }
            }
            Action::Scale { target, word } => Action::Scale { target: target.without_spans(), word: word.as_ref().map(strip_word) },
            Action::Ball { target } => Action::Ball { target: target.without_spans() },
            Action::Complete { target, word } => Action::Complete { target: target.without_spans(), word: strip_word(word) },
            Action::FilterCompare { lhs, rhs } => Action::FilterCompare { lhs: strip_path(lhs), rhs: strip_path(rhs) },
            Action::FilterShow { file } => Action::FilterShow { file: strip_path(file) },
            Action::Rank { target } => Action::Rank { target: target.as_ref().map(PairExpr::without_spans) },
            Action::Tower => Action::Tower,
        };
        let o = &self.options;
        let options = Options {
            output: o.output.as_ref().map(strip_path),
            certificate: o.certificate.as_ref().map(strip_path),
            seed: o.seed.as_ref().map(|s| match s {
                Seed::Abstract => Seed::Abstract,
                Seed::Expr(e) => Seed::Expr(e.without_spans()),
            }),
            ..o.clone()
        };
        Command { verb: self.verb, action, options, span: Span::default() }
    }
}

impl Program {
    pub fn without_spans(&self) -> Program {
        let statements = self
            .statements
            .iter()
            .map(|s| match s {
                Statement::Binding { name, expr, .. } => {
                    Statement::Binding { name: name.clone(), expr: expr.without_spans(), span: Span::default() }
                }
                Statement::Command(c) => Statement::Command(c.without_spans()),
            })
            .collect();
        Program { statements }
    }
}
