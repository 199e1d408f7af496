//! Words over a finite alphabet and bar-separated sentences of words.

use std::fmt;

use crate::error::{Error, Result};

/// A finite sequence of generator ids; the empty word is the unit `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letter(id: u8) -> Self {
        Word(vec![id])
    }

    /// Shorthand for tests and examples: `'a'` is generator 0, `'b'` is 1, and so on.
    pub fn from_chars(s: &str) -> Self {
        Word(s.bytes().map(|c| c - b'a').collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// The subword read off at the given (increasing) positions.
    pub fn subword(&self, positions: &[usize]) -> Word {
        Word(positions.iter().map(|&i| self.0[i]).collect())
    }

    /// Subword at the positions whose bits are set in `mask`.
    pub fn sub_by_mask(&self, mask: u64) -> Word {
        Word(
            (0..self.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.0[i])
                .collect(),
        )
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        if self.0.iter().all(|&c| c < 26) {
            for &c in &self.0 {
                write!(f, "{}", (b'a' + c) as char)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

/// A sequence of nonempty words, written `w1|w2|...`; the empty sentence is the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sentence(pub Vec<Word>);

impl Sentence {
    pub fn empty() -> Self {
        Sentence(Vec::new())
    }

    /// Builds a sentence, dropping empty words (they are the unit of each factor).
    pub fn new(words: Vec<Word>) -> Self {
        Sentence(words.into_iter().filter(|w| !w.is_empty()).collect())
    }

    pub fn single(w: Word) -> Self {
        Sentence::new(vec![w])
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of letters.
    pub fn degree(&self) -> usize {
        self.0.iter().map(Word::len).sum()
    }

    /// Bar product: `(u1|u2)·(v1) = u1|u2|v1`.
    pub fn bar(&self, other: &Sentence) -> Sentence {
        let mut words = self.0.clone();
        words.extend(other.0.iter().cloned());
        Sentence(words)
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// Generator names; words are written with dot-separated names, e.g. `a.b.a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.len() > u8::MAX as usize {
            return Err(Error::InvalidArgument("at most 255 generators".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains(['.', '|', ',']) {
                return Err(Error::InvalidArgument(format!("bad generator name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidArgument(format!("duplicate generator `{n}`")));
            }
        }
        Ok(Alphabet { names })
    }

    /// Generators named `a`, `b`, `c`, ...
    pub fn letters(size: usize) -> Self {
        assert!(size <= 26);
        Alphabet {
            names: (0..size).map(|i| ((b'a' + i as u8) as char).to_string()).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.0.iter().find(|&&c| c as usize >= self.size()) {
            Some(&letter) => Err(Error::AlphabetMismatch {
                letter,
                size: self.size(),
            }),
            None => Ok(()),
        }
    }

    pub fn concat(&self, w1: &Word, w2: &Word) -> Result<Word> {
        self.check(w1)?;
        self.check(w2)?;
        Ok(w1.concat(w2))
    }

    /// Parses `a.b.a`; the empty string and `1` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let t = text.trim();
        if t.is_empty() || t == "1" && !self.names.iter().any(|n| n == "1") {
            return Ok(Word::empty());
        }
        t.split('.')
            .map(|name| {
                self.names
                    .iter()
                    .position(|n| n == name.trim())
                    .map(|i| i as u8)
                    .ok_or_else(|| Error::Parse(format!("unknown generator `{name}` in `{t}`")))
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.0.iter()
            .map(|&c| {
                self.names
                    .get(c as usize)
                    .cloned()
                    .unwrap_or_else(|| c.to_string())
            })
            .collect::<Vec<_>>()
            .join(".")
    }

    /// All words of exactly the given length, in lexicographic order.
    pub fn words_of_length(&self, len: usize) -> Vec<Word> {
        words_of_length(self.size(), len)
    }

    /// All words of length `0..=max_len`, shortest first.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|l| self.words_of_length(l)).collect()
    }
}

pub fn words_of_length(size: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..size as u8).map(move |c| {
                    let mut l = w.0.clone();
                    l.push(c);
                    Word(l)
                })
            })
            .collect();
    }
    out
}
