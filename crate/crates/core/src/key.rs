use std::fmt;

use serde::{Deserialize, Serialize};

/// A heap key: a signed 64-bit value, or the bottom element that sorts below
/// every value.
///
/// Bottom only ever exists transiently inside `delete`, which lowers the
/// target to bottom and then removes the minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExtKey {
    // Variant order matters: the derived `Ord` puts `Bottom` first.
    Bottom,
    Value(i64),
}

impl ExtKey {
    pub fn is_bottom(self) -> bool {
        matches!(self, ExtKey::Bottom)
    }

    pub fn value(self) -> Option<i64> {
        match self {
            ExtKey::Bottom => None,
            ExtKey::Value(v) => Some(v),
        }
    }
}

impl From<i64> for ExtKey {
    fn from(v: i64) -> Self {
        ExtKey::Value(v)
    }
}

impl fmt::Display for ExtKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtKey::Bottom => f.write_str("-inf"),
            ExtKey::Value(v) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bottom_below_extremes() {
        assert!(ExtKey::Bottom < ExtKey::Value(i64::MIN));
        assert!(ExtKey::Bottom < ExtKey::Value(0));
        assert_eq!(ExtKey::Bottom, ExtKey::Bottom);
    }

    proptest! {
        #[test]
        fn value_order_matches_integers(a: i64, b: i64) {
            prop_assert_eq!(ExtKey::Value(a) <= ExtKey::Value(b), a <= b);
            prop_assert!(ExtKey::Bottom < ExtKey::Value(a));
        }
    }
}
