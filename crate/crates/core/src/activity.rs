use alloc::string::String;
use core::borrow::Borrow;
use core::fmt;

/// An activity label. Labels live in their own namespace, separate from
/// place and transition identifiers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Activity(String);

impl Activity {
    pub fn new(label: impl Into<String>) -> Self {
        Activity(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Activity {
    fn from(s: &str) -> Self {
        Activity(s.into())
    }
}

impl From<String> for Activity {
    fn from(s: String) -> Self {
        Activity(s)
    }
}

impl Borrow<str> for Activity {
    fn borrow(&self) -> &str {
        &self.0
    }
}
