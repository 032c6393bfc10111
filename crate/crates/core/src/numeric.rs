//! Small numeric helpers shared by every module: compensated summation,
//! the verification tolerance, the Normal CDF and real formatting.

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of an iterator of reals.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Relative tolerance with an absolute floor.
///
/// Two values agree when `|a - b| <= max(absolute, relative * scale)`, where
/// `scale` is the magnitude of the quantities that were summed to produce
/// them (at least `max(|a|, |b|)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub relative: f64,
    pub absolute: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            relative: 1e-9,
            absolute: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn with_relative(relative: f64) -> Self {
        Tolerance {
            relative,
            ..Tolerance::default()
        }
    }

    /// Largest admissible difference for values of the given magnitude.
    pub fn bound(&self, scale: f64) -> f64 {
        self.absolute.max(self.relative * scale.abs())
    }

    pub fn agrees(&self, a: f64, b: f64, scale: f64) -> bool {
        let scale = scale.abs().max(a.abs()).max(b.abs());
        (a - b).abs() <= self.bound(scale)
    }
}

/// Standard Normal cumulative distribution function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Formats a real with 17 significant digits in positional notation.
///
/// The output always parses back to the identical `f64`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:?}");
    }
    // `{:e}` yields the exact decimal exponent of the shortest representation.
    let sci = format!("{:.16e}", x);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    let decimals = (16 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// SplitMix64 finalizer, used to derive independent seeds from a base seed.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut terms = vec![1e16];
        terms.extend(std::iter::repeat(1.0).take(1000));
        terms.push(-1e16);
        assert_eq!(compensated_sum(terms), 1000.0);
    }

    #[test]
    fn format_real_has_17_significant_digits() {
        assert_eq!(format_real(0.5), "0.50000000000000000");
        assert_eq!(format_real(1.0), "1.0000000000000000");
        assert_eq!(format_real(0.3), "0.29999999999999999");
        assert_eq!(format_real(12.5), "12.500000000000000");
        assert_eq!(format_real(0.0), "0.0");
    }

    #[test]
    fn format_real_round_trips() {
        for &x in &[0.1, 1.0 / 3.0, 2.0f64.sqrt() / 7.0, 1e-7, 123456.789, -0.25, 5e-300] {
            let s = format_real(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(0.1) - 0.539_827_837_277_029).abs() < 1e-15);
        assert!((normal_cdf(-1.96) - 0.024_997_895_148_220_435).abs() < 1e-15);
        assert!((normal_cdf(8.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tolerance_uses_scale() {
        let tol = Tolerance::default();
        assert!(tol.agrees(1.0, 1.0 + 1e-10, 0.0));
        assert!(!tol.agrees(1.0, 1.0 + 1e-8, 0.0));
        assert!(tol.agrees(1.0, 1.0 + 1e-8, 1e3));
        assert!(tol.agrees(0.0, 1e-13, 0.0));
    }
}
