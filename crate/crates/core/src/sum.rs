//! Compensated (Neumaier) summation.
//!
//! The preference functional is a sum of many small signed terms at the
//! 1e-4 scale; plain left-to-right accumulation loses digits exactly where
//! the verdict tolerances live. Every row sum in this crate goes through
//! [`CompensatedSum`] in a fixed order so results are reproducible
//! bit-for-bit across runs and platforms.

/// Running sum with a Neumaier error term.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add one term, keeping the rounding error in the compensation slot.
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// The compensated total.
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Sum an iterator of terms with compensation, in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = CompensatedSum::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}
