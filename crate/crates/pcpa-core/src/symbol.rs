//! Interned-free validated token types for input symbols, stack symbols and
//! state names.
//!
//! Both [`Symbol`] and [`StateId`] are thin wrappers around owned strings
//! that enforce a conservative token charset at construction time. Keeping
//! the charset tight means rendered traces and serialized files never need
//! quoting or escaping.

use alloc::borrow::ToOwned;
use alloc::string::String;
use core::fmt;

/// Characters permitted in token names: ASCII alphanumerics, `_`, `'`
/// (used by generated states such as `q0'pr1`) and `$` (the conventional
/// end-of-input marker for multi-head machines).
fn is_token_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '$'
}

fn check_token(s: &str) -> Result<(), TokenError> {
    if s.is_empty() {
        return Err(TokenError::Empty);
    }
    match s.chars().find(|&c| !is_token_char(c)) {
        None => Ok(()),
        Some(c) => Err(TokenError::BadChar(c)),
    }
}

/// Error produced when constructing a [`Symbol`] or [`StateId`] from an
/// invalid string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenError {
    /// The token was the empty string.
    Empty,
    /// The token contained a character outside the permitted set.
    BadChar(char),
}

impl fmt::Display for TokenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenError::Empty => write!(f, "token must not be empty"),
            TokenError::BadChar(c) => write!(
                f,
                "token contains illegal character {c:?}; allowed: ASCII alphanumerics, '_', '\\'', '$'"
            ),
        }
    }
}

impl core::error::Error for TokenError {}

macro_rules! token_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            /// Validates and wraps a token string.
            pub fn new(s: &str) -> Result<Self, TokenError> {
                check_token(s)?;
                Ok(Self(s.to_owned()))
            }

            /// The token text.
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }

        impl core::str::FromStr for $name {
            type Err = TokenError;
            fn from_str(s: &str) -> Result<Self, TokenError> {
                Self::new(s)
            }
        }
    };
}

token_type! {
    /// A validated input or stack symbol.
    ///
    /// Symbols are ordinary tokens over ASCII alphanumerics plus `_`, `'`
    /// and `$`; multi-character symbols such as `Z1` or `K2` are common.
    Symbol
}

token_type! {
    /// A validated state name of one automaton component.
    StateId
}

/// Convenience constructor used pervasively in tests and fixtures.
///
/// # Panics
/// Panics if `s` is not a valid token.
pub fn sym(s: &str) -> Symbol {
    Symbol::new(s).expect("invalid symbol token")
}

/// Convenience constructor used pervasively in tests and fixtures.
///
/// # Panics
/// Panics if `s` is not a valid token.
pub fn state(s: &str) -> StateId {
    StateId::new(s).expect("invalid state token")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_plain_and_decorated_tokens() {
        for t in ["a", "Z1", "q0'pr1", "End_2", "$", "x$'_9"] {
            assert!(Symbol::new(t).is_ok(), "should accept {t:?}");
            assert!(StateId::new(t).is_ok(), "should accept {t:?}");
        }
    }

    #[test]
    fn rejects_empty_and_bad_chars() {
        assert_eq!(Symbol::new(""), Err(TokenError::Empty));
        assert_eq!(Symbol::new("a b"), Err(TokenError::BadChar(' ')));
        assert_eq!(Symbol::new("a,b"), Err(TokenError::BadChar(',')));
        assert_eq!(StateId::new("q#"), Err(TokenError::BadChar('#')));
    }

    #[test]
    fn display_is_raw_text() {
        use alloc::format;
        assert_eq!(format!("{}", sym("Z1")), "Z1");
        assert_eq!(format!("{:?}", state("q0")), "q0");
    }
}
