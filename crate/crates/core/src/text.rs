use serde::{Deserialize, Serialize};
use unicode_segmentation::UnicodeSegmentation;

use crate::error::{Error, Result};

/// Reserved placeholder the predictor fills in.
pub const MASK: &str = "[MASK]";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenMode {
    #[default]
    Whitespace,
    /// One token per grapheme cluster.
    Char,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LangProfile {
    pub token_mode: TokenMode,
    /// Whether the script has case, i.e. whether recasing is meaningful.
    pub bicameral: bool,
    /// Characters drawn by insert/substitute character operations. When unset
    /// the characters of the sentence being corrupted are used.
    pub alphabet: Option<String>,
}

impl Default for LangProfile {
    fn default() -> Self {
        LangProfile {
            token_mode: TokenMode::Whitespace,
            bicameral: true,
            alphabet: None,
        }
    }
}

impl LangProfile {
    pub fn whitespace() -> Self {
        Self::default()
    }

    pub fn char_level() -> Self {
        LangProfile {
            token_mode: TokenMode::Char,
            bicameral: false,
            alphabet: None,
        }
    }

    pub fn joiner(&self) -> &'static str {
        match self.token_mode {
            TokenMode::Whitespace => " ",
            TokenMode::Char => "",
        }
    }

    /// Alphabet graphemes, if one is configured.
    pub fn alphabet_graphemes(&self) -> Option<Vec<String>> {
        self.alphabet.as_ref().map(|a| {
            let mut gs: Vec<String> = graphemes(a)
                .filter(|g| !is_whitespace(g))
                .map(str::to_owned)
                .collect();
            gs.sort();
            gs.dedup();
            gs
        })
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(alphabet) = &self.alphabet {
            if alphabet.chars().any(char::is_whitespace) {
                return Err(Error::config("alphabet must not contain whitespace"));
            }
            if alphabet.is_empty() {
                return Err(Error::config("alphabet must not be empty"));
            }
        }
        Ok(())
    }
}

/// An ordered, non-empty list of non-empty tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TokenSeq(Vec<String>);

impl TokenSeq {
    pub fn new(tokens: Vec<String>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::EmptyInput);
        }
        if tokens.iter().any(String::is_empty) {
            return Err(Error::Input("empty token".into()));
        }
        Ok(TokenSeq(tokens))
    }

    pub fn from_strs(tokens: &[&str]) -> Result<Self> {
        Self::new(tokens.iter().map(|t| (*t).to_owned()).collect())
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn into_tokens(self) -> Vec<String> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_mask(&self) -> bool {
        self.0.iter().any(|t| t == MASK)
    }
}

impl AsRef<[String]> for TokenSeq {
    fn as_ref(&self) -> &[String] {
        &self.0
    }
}

/// One line of a parallel corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentencePair {
    pub id: usize,
    pub source_en: String,
    pub target: String,
}

pub fn tokenize(text: &str, profile: &LangProfile) -> Result<TokenSeq> {
    let tokens: Vec<String> = match profile.token_mode {
        TokenMode::Whitespace => text.split_whitespace().map(str::to_owned).collect(),
        TokenMode::Char => graphemes(text)
            .filter(|g| !is_whitespace(g))
            .map(str::to_owned)
            .collect(),
    };
    if tokens.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(TokenSeq(tokens))
}

pub fn detokenize<S: AsRef<str>>(tokens: &[S], profile: &LangProfile) -> String {
    let joiner = profile.joiner();
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            out.push_str(joiner);
        }
        out.push_str(t.as_ref());
    }
    out
}

pub fn graphemes(text: &str) -> impl Iterator<Item = &str> {
    text.graphemes(true)
}

pub fn is_whitespace(grapheme: &str) -> bool {
    grapheme.chars().all(char::is_whitespace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whitespace_split_collapses_runs() {
        let seq = tokenize("a  b", &LangProfile::whitespace()).unwrap();
        assert_eq!(seq.tokens(), ["a", "b"]);
    }

    #[test]
    fn char_mode_is_one_token_per_grapheme() {
        let seq = tokenize("ab", &LangProfile::char_level()).unwrap();
        assert_eq!(seq.tokens(), ["a", "b"]);
        // combining acute stays attached, whitespace dropped
        let seq = tokenize("e\u{301} 中", &LangProfile::char_level()).unwrap();
        assert_eq!(seq.tokens(), ["e\u{301}", "中"]);
    }

    #[test]
    fn blank_input_is_rejected() {
        assert!(matches!(
            tokenize("   ", &LangProfile::whitespace()),
            Err(Error::EmptyInput)
        ));
        assert!(matches!(
            tokenize(" \t", &LangProfile::char_level()),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn detokenize_joins_by_mode() {
        assert_eq!(detokenize(&["a", "b"], &LangProfile::whitespace()), "a b");
        assert_eq!(detokenize(&["a", "b"], &LangProfile::char_level()), "ab");
    }

    #[test]
    fn sentinel_survives_round_trip() {
        let p = LangProfile::whitespace();
        let text = detokenize(&["x", MASK, "z"], &p);
        assert_eq!(tokenize(&text, &p).unwrap().tokens(), ["x", MASK, "z"]);
    }

    #[test]
    fn token_seq_rejects_empty_tokens() {
        assert!(TokenSeq::from_strs(&[]).is_err());
        assert!(TokenSeq::from_strs(&["a", ""]).is_err());
    }

    #[test]
    fn alphabet_with_whitespace_is_invalid() {
        let p = LangProfile {
            alphabet: Some("ab c".into()),
            ..LangProfile::default()
        };
        assert!(p.validate().is_err());
    }
}
