use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, lit, to_f64, Real};

/// Finite union of disjoint closed arcs of the unit circle, stored as
/// angular intervals inside `[0, 2π]` sorted by start.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcSet<T: Real> {
    arcs: Vec<(T, T)>,
    total_measure: T,
}

fn two_pi<T: Real>() -> T {
    T::PI() + T::PI()
}

impl<T: Real> ArcSet<T> {
    /// Each `(α, β)` must satisfy `α < β ≤ α + 2π`. Arcs are reduced mod 2π
    /// (an arc crossing angle 0 is split) and must not overlap; arcs that
    /// merely touch are merged.
    pub fn new(arcs: impl IntoIterator<Item = (T, T)>) -> Result<Self> {
        let tp = two_pi::<T>();
        let slack = lit::<T>(1e-12);
        let mut pieces = Vec::new();
        for (alpha, beta) in arcs {
            if !alpha.is_finite() || !beta.is_finite() {
                return Err(Error::InvalidArcSet("non-finite endpoint".into()));
            }
            let len = beta - alpha;
            if !(len > T::zero()) {
                return Err(Error::InvalidArcSet(format!(
                    "arc [{alpha}, {beta}] has nonpositive length"
                )));
            }
            if len > tp + slack {
                return Err(Error::InvalidArcSet(format!(
                    "arc [{alpha}, {beta}] is longer than 2π"
                )));
            }
            let len = len.min(tp);
            let start = alpha - (alpha / tp).floor() * tp;
            let start = if start >= tp { T::zero() } else { start };
            if start + len > tp {
                pieces.push((start, tp));
                pieces.push((T::zero(), start + len - tp));
            } else {
                pieces.push((start, start + len));
            }
        }
        if pieces.is_empty() {
            return Err(Error::DegenerateE { measure: 0.0 });
        }
        pieces.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let mut merged: Vec<(T, T)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            if let Some(last) = merged.last_mut() {
                if a < last.1 - slack {
                    return Err(Error::InvalidArcSet(format!(
                        "arcs [{}, {}] and [{a}, {b}] overlap",
                        last.0, last.1
                    )));
                }
                if a <= last.1 {
                    last.1 = last.1.max(b);
                    continue;
                }
            }
            merged.push((a, b));
        }
        let total = compensated_sum(merged.iter().map(|(a, b)| *b - *a));
        if !(total > T::zero()) || total > tp + slack {
            return Err(Error::DegenerateE {
                measure: to_f64(total),
            });
        }
        Ok(Self {
            arcs: merged,
            total_measure: total,
        })
    }

    pub fn full() -> Self {
        Self {
            arcs: vec![(T::zero(), two_pi())],
            total_measure: two_pi(),
        }
    }

    /// Single arc of the given measure centred at `centre`.
    pub fn centered(centre: T, measure: T) -> Result<Self> {
        let half = measure * lit(0.5);
        Self::new([(centre - half, centre + half)])
    }

    pub fn arcs(&self) -> &[(T, T)] {
        &self.arcs
    }

    pub fn total_measure(&self) -> T {
        self.total_measure
    }

    /// True when the set is the whole circle up to rounding.
    pub fn is_full(&self) -> bool {
        self.total_measure >= two_pi::<T>() - lit(1e-12)
    }
}
