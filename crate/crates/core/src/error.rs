use std::fmt;

/// A syntax or resolution error in one of the text formats, with a 1-based
/// line and (where known) a 1-based column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        Self { line: None, column: None, message: message.into() }
    }

    /// Line 0 means "the file as a whole".
    pub fn at_line(line: usize, message: impl Into<String>) -> Self {
        Self { line: (line > 0).then_some(line), column: None, message: message.into() }
    }

    pub fn at_column(column: usize, message: impl Into<String>) -> Self {
        Self { line: None, column: Some(column), message: message.into() }
    }

    /// Attaches a line number to an error raised while parsing a single line.
    pub fn on_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            (None, Some(c)) => write!(f, "column {c}: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}
