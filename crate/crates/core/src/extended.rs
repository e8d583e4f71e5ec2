use core::cmp::Ordering;
use core::fmt;

/// A real number or `+∞`; the value type of every divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PositiveInfinity,
}

impl ExtendedReal {
    /// Wraps `x`, mapping `+inf` to [`ExtendedReal::PositiveInfinity`].
    ///
    /// Panics on NaN or `-inf`, neither of which a divergence can produce.
    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtendedReal::PositiveInfinity
        } else {
            assert!(x.is_finite(), "extended real payload must be finite, got {x}");
            ExtendedReal::Finite(x)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::PositiveInfinity => None,
        }
    }

    /// The value as an `f64`, with `+∞` as `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(x) => x,
            ExtendedReal::PositiveInfinity => f64::INFINITY,
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(x: f64) -> Self {
        ExtendedReal::from_f64(x)
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (Finite(_), PositiveInfinity) => Some(Ordering::Less),
            (PositiveInfinity, Finite(_)) => Some(Ordering::Greater),
            (PositiveInfinity, PositiveInfinity) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // -0 prints as "0"
            ExtendedReal::Finite(x) if *x == 0.0 => write!(f, "0"),
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::PositiveInfinity => write!(f, "inf"),
        }
    }
}
