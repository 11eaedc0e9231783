//! Bit-exact two's-complement fixed-point arithmetic with explicit bit
//! growth.
//!
//! A value is a mantissa scaled by `2^-F`. Formats carry one sign bit, `I`
//! integer bits and `F` fraction bits, total width `1 + I + F` capped at 64.
//! Arithmetic never rounds: additions grow the integer field by one bit and
//! multiplications concatenate both fields, so results are exact until
//! [`FixedValue::truncate_to`] drops low fraction bits and saturates back to
//! an output format. This mirrors datapaths that keep enough dynamic range
//! internally and truncate once at the module boundary.

use std::cmp::Ordering;
use std::error::Error;
use std::fmt;

/// Maximum modeled total width in bits.
pub const MAX_WIDTH: u32 = 64;

/// Rounding behavior of [`quantize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundingMode {
    /// Round to nearest, ties to even mantissa.
    RoundNearestEven,
    /// Truncate toward negative infinity on the mantissa.
    Truncate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    /// Total width outside `2..=64`.
    WidthOutOfRange { width: u32 },
    /// Could not parse a descriptor string.
    BadDescriptor(String),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::WidthOutOfRange { width } => {
                write!(f, "total width {width} outside 2..={MAX_WIDTH}")
            }
            FormatError::BadDescriptor(s) => write!(f, "bad format descriptor {s:?}"),
        }
    }
}

impl Error for FormatError {}

/// Two's-complement format: 1 sign bit, `integer_bits`, `fraction_bits`.
/// Representable values are `[-2^I, 2^I - 2^-F]` in steps of `2^-F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixedPointFormat {
    pub integer_bits: u32,
    pub fraction_bits: u32,
}

impl FixedPointFormat {
    pub fn new(integer_bits: u32, fraction_bits: u32) -> Result<Self, FormatError> {
        let fmt = FixedPointFormat {
            integer_bits,
            fraction_bits,
        };
        let width = fmt.total_bits();
        if !(2..=MAX_WIDTH).contains(&width) {
            return Err(FormatError::WidthOutOfRange { width });
        }
        Ok(fmt)
    }

    pub fn total_bits(&self) -> u32 {
        1 + self.integer_bits + self.fraction_bits
    }

    pub fn max_mantissa(&self) -> i128 {
        (1i128 << (self.total_bits() - 1)) - 1
    }

    pub fn min_mantissa(&self) -> i128 {
        -(1i128 << (self.total_bits() - 1))
    }

    pub fn max_value(&self) -> f64 {
        self.max_mantissa() as f64 * (self.fraction_bits as f64).exp2().recip()
    }

    pub fn min_value(&self) -> f64 {
        self.min_mantissa() as f64 * (self.fraction_bits as f64).exp2().recip()
    }

    /// Descriptor string `s<I>.<F>`, e.g. `s1.6` for 1 sign, 1 integer and 6
    /// fraction bits.
    pub fn descriptor(&self) -> String {
        format!("s{}.{}", self.integer_bits, self.fraction_bits)
    }

    /// Parses a descriptor produced by [`FixedPointFormat::descriptor`].
    pub fn parse(s: &str) -> Result<Self, FormatError> {
        let bad = || FormatError::BadDescriptor(s.to_string());
        let rest = s.strip_prefix('s').ok_or_else(bad)?;
        let (i_str, f_str) = rest.split_once('.').ok_or_else(bad)?;
        let integer_bits: u32 = i_str.parse().map_err(|_| bad())?;
        let fraction_bits: u32 = f_str.parse().map_err(|_| bad())?;
        FixedPointFormat::new(integer_bits, fraction_bits)
    }
}

impl fmt::Display for FixedPointFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

/// A fixed-point value: `mantissa * 2^-fraction_bits` in a given format.
#[derive(Debug, Clone, Copy)]
pub struct FixedValue {
    mantissa: i128,
    format: FixedPointFormat,
}

impl FixedValue {
    /// Wraps a raw mantissa.
    ///
    /// # Panics
    ///
    /// Panics if the mantissa does not fit the format.
    pub fn from_mantissa(mantissa: i128, format: FixedPointFormat) -> Self {
        assert!(
            (format.min_mantissa()..=format.max_mantissa()).contains(&mantissa),
            "mantissa {mantissa} out of range for {format}"
        );
        FixedValue { mantissa, format }
    }

    pub fn zero(format: FixedPointFormat) -> Self {
        FixedValue {
            mantissa: 0,
            format,
        }
    }

    pub fn mantissa(&self) -> i128 {
        self.mantissa
    }

    pub fn format(&self) -> FixedPointFormat {
        self.format
    }

    pub fn to_f64(&self) -> f64 {
        self.mantissa as f64 * (self.format.fraction_bits as f64).exp2().recip()
    }

    /// Exact sum. The output keeps the shared fraction width and grows the
    /// integer field to `max(I_a, I_b) + 1`, so it can never overflow.
    ///
    /// # Panics
    ///
    /// Panics on a fraction-bit mismatch or if the grown width would exceed
    /// [`MAX_WIDTH`].
    pub fn add(&self, other: &FixedValue) -> FixedValue {
        assert_eq!(
            self.format.fraction_bits, other.format.fraction_bits,
            "fraction-bit mismatch: {} vs {}",
            self.format, other.format
        );
        let fmt = grown_format(
            self.format.integer_bits.max(other.format.integer_bits) + 1,
            self.format.fraction_bits,
        );
        FixedValue {
            mantissa: self.mantissa + other.mantissa,
            format: fmt,
        }
    }

    /// Exact difference, with the same growth rule as [`FixedValue::add`].
    pub fn sub(&self, other: &FixedValue) -> FixedValue {
        assert_eq!(
            self.format.fraction_bits, other.format.fraction_bits,
            "fraction-bit mismatch: {} vs {}",
            self.format, other.format
        );
        let fmt = grown_format(
            self.format.integer_bits.max(other.format.integer_bits) + 1,
            self.format.fraction_bits,
        );
        FixedValue {
            mantissa: self.mantissa - other.mantissa,
            format: fmt,
        }
    }

    /// Exact product: fraction bits add, integer bits add. The one corner
    /// where the sum of integer bits cannot hold the result (both operands at
    /// their format minimum) grows one further bit rather than give up
    /// exactness.
    ///
    /// # Panics
    ///
    /// Panics if the resulting width exceeds [`MAX_WIDTH`].
    pub fn mul(&self, other: &FixedValue) -> FixedValue {
        let mantissa = self.mantissa * other.mantissa;
        let mut integer_bits = self.format.integer_bits + other.format.integer_bits;
        let fraction_bits = self.format.fraction_bits + other.format.fraction_bits;
        let mut fmt = grown_format(integer_bits, fraction_bits);
        if mantissa > fmt.max_mantissa() {
            integer_bits += 1;
            fmt = grown_format(integer_bits, fraction_bits);
        }
        FixedValue {
            mantissa,
            format: fmt,
        }
    }

    /// Exact widening to a larger fraction width (a pure wiring operation in
    /// hardware).
    pub fn with_fraction_bits(&self, fraction_bits: u32) -> FixedValue {
        assert!(fraction_bits >= self.format.fraction_bits);
        let shift = fraction_bits - self.format.fraction_bits;
        let fmt = grown_format(self.format.integer_bits, fraction_bits);
        FixedValue {
            mantissa: self.mantissa << shift,
            format: fmt,
        }
    }

    /// Exact widening of the integer field (sign extension; pure wiring).
    pub fn with_integer_bits(&self, integer_bits: u32) -> FixedValue {
        assert!(integer_bits >= self.format.integer_bits);
        FixedValue {
            mantissa: self.mantissa,
            format: grown_format(integer_bits, self.format.fraction_bits),
        }
    }

    /// Absolute value, grown by one integer bit so the format minimum stays
    /// representable.
    pub fn abs(&self) -> FixedValue {
        FixedValue {
            mantissa: self.mantissa.abs(),
            format: grown_format(self.format.integer_bits + 1, self.format.fraction_bits),
        }
    }

    /// Drops low fraction bits (truncation toward negative infinity on the
    /// mantissa) and saturates into the target format.
    pub fn truncate_to(&self, fmt: FixedPointFormat) -> FixedValue {
        let mantissa = if fmt.fraction_bits <= self.format.fraction_bits {
            self.mantissa >> (self.format.fraction_bits - fmt.fraction_bits)
        } else {
            self.mantissa << (fmt.fraction_bits - self.format.fraction_bits)
        };
        FixedValue {
            mantissa: mantissa.clamp(fmt.min_mantissa(), fmt.max_mantissa()),
            format: fmt,
        }
    }

    /// Componentwise `max(self, 0)` staying in the same format.
    pub fn clamp_low_at_zero(&self) -> FixedValue {
        FixedValue {
            mantissa: self.mantissa.max(0),
            format: self.format,
        }
    }

    /// `min(self, limit)` staying in `self`'s format, so the wire width never
    /// depends on which side wins.
    ///
    /// # Panics
    ///
    /// Panics if the limit is not exactly representable in `self`'s format.
    pub fn clamp_high_at(&self, limit: &FixedValue) -> FixedValue {
        assert_eq!(
            self.format.fraction_bits, limit.format.fraction_bits,
            "fraction-bit mismatch: {} vs {}",
            self.format, limit.format
        );
        assert!(
            (self.format.min_mantissa()..=self.format.max_mantissa()).contains(&limit.mantissa),
            "clamp limit {} not representable in {}",
            limit,
            self.format
        );
        FixedValue {
            mantissa: self.mantissa.min(limit.mantissa),
            format: self.format,
        }
    }
}

fn grown_format(integer_bits: u32, fraction_bits: u32) -> FixedPointFormat {
    FixedPointFormat::new(integer_bits, fraction_bits).unwrap_or_else(|e| {
        panic!("internal format grew past the modeled width: {e}");
    })
}

// Comparisons are by exact represented value, so values in different formats
// order consistently. Widths stay ≤ 64 so the cross-shifted mantissas fit
// comfortably in i128.
impl PartialEq for FixedValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for FixedValue {}

impl PartialOrd for FixedValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FixedValue {
    fn cmp(&self, other: &Self) -> Ordering {
        let fa = self.format.fraction_bits;
        let fb = other.format.fraction_bits;
        let common = fa.max(fb);
        let lhs = self.mantissa << (common - fa);
        let rhs = other.mantissa << (common - fb);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for FixedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.to_f64(), self.format)
    }
}

/// Quantizes a real number into `fmt`, saturating at the representable range.
pub fn quantize(x: f64, fmt: FixedPointFormat, mode: RoundingMode) -> FixedValue {
    assert!(x.is_finite(), "cannot quantize non-finite input");
    let scaled = x * (fmt.fraction_bits as f64).exp2();
    let mantissa = match mode {
        RoundingMode::RoundNearestEven => scaled.round_ties_even(),
        RoundingMode::Truncate => scaled.floor(),
    };
    // `as` saturates on overflow, then the format range clamp applies.
    let mantissa = (mantissa as i128).clamp(fmt.min_mantissa(), fmt.max_mantissa());
    FixedValue {
        mantissa,
        format: fmt,
    }
}

/// Quantizes a whole vector into one format.
pub fn quantize_vector(v: &[f64], fmt: FixedPointFormat, mode: RoundingMode) -> Vec<FixedValue> {
    v.iter().map(|&x| quantize(x, fmt, mode)).collect()
}
