//! Laguerre polynomials and overlaps of position-displaced Fock states.
//!
//! Everything here takes the dimensionless coupling `g = λ/ω0` and is a
//! pure function of its arguments.

use crate::error::{Error, Result};

/// Degree `n` and associated index `alpha` of `L_n^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LaguerreOrder {
    pub n: usize,
    pub alpha: usize,
}

impl LaguerreOrder {
    pub fn new(n: usize, alpha: usize) -> Self {
        Self { n, alpha }
    }

    /// Plain (non-associated) Laguerre polynomial `L_n`.
    pub fn plain(n: usize) -> Self {
        Self { n, alpha: 0 }
    }
}

/// Ratio `λ/ω0`, finite and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DimensionlessCoupling(f64);

impl DimensionlessCoupling {
    pub fn new(g: f64) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::Domain(format!(
                "coupling ratio must be finite, got {g}"
            )));
        }
        if g < 0.0 {
            return Err(Error::Domain(format!(
                "coupling ratio must be >= 0, got {g}"
            )));
        }
        Ok(Self(g))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Associated Laguerre polynomial `L_n^alpha(x)` for `x >= 0`.
///
/// Degrees 0 and 1 are closed form; higher degrees use the forward
/// three-term recurrence in `n`.
pub fn laguerre(order: LaguerreOrder, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "Laguerre argument must be finite and >= 0, got {x}"
        )));
    }
    Ok(laguerre_unchecked(order.n, order.alpha as f64, x))
}

pub(crate) fn laguerre_unchecked(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `⟨M_-|N_+⟩`: overlap of Fock states displaced in opposite directions by
/// `g` each.
///
/// Evaluated as `e^{-2g²} (2g)^{N-M} √(M!/N!) L_M^{N-M}(4g²)` with the
/// indices sorted so that `M <= N`. The result is therefore symmetric in
/// its two indices; the `(-1)^{M-N}` factor a displacement matrix element
/// picks up below the diagonal is not applied.
pub fn displaced_overlap(m: usize, n: usize, g: DimensionlessCoupling) -> f64 {
    let (lo, hi) = if m <= n { (m, n) } else { (n, m) };
    let g = g.value();
    let two_g = 2.0 * g;

    // √(lo!/hi!) (2g)^{hi-lo} as a running product.
    let mut prefactor = 1.0;
    for k in (lo + 1)..=hi {
        prefactor *= two_g / (k as f64).sqrt();
    }

    let x = 4.0 * g * g;
    (-2.0 * g * g).exp() * prefactor * laguerre_unchecked(lo, (hi - lo) as f64, x)
}

/// Same as [`displaced_overlap`] but taking a raw `g` and validating it.
pub fn displaced_overlap_checked(m: usize, n: usize, g: f64) -> Result<f64> {
    Ok(displaced_overlap(m, n, DimensionlessCoupling::new(g)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: f64) -> DimensionlessCoupling {
        DimensionlessCoupling::new(v).unwrap()
    }

    #[test]
    fn low_degrees_are_closed_form() {
        for alpha in [0, 1, 5, 30] {
            assert_eq!(laguerre(LaguerreOrder::new(0, alpha), 7.3).unwrap(), 1.0);
        }
        let l1 = laguerre(LaguerreOrder::plain(1), 0.4).unwrap();
        assert!((l1 - 0.6).abs() < 1e-15);
    }

    #[test]
    fn second_degree_from_series() {
        // L_2(x) = 1 - 2x + x²/2, so L_2(2) = -1.
        let v = laguerre(LaguerreOrder::plain(2), 2.0).unwrap();
        assert!((v + 1.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(laguerre(LaguerreOrder::plain(3), -0.1).is_err());
        assert!(laguerre(LaguerreOrder::plain(3), f64::NAN).is_err());
        assert!(laguerre(LaguerreOrder::plain(3), f64::INFINITY).is_err());
        assert!(DimensionlessCoupling::new(-1.0).is_err());
        assert!(DimensionlessCoupling::new(f64::NAN).is_err());
        assert!(displaced_overlap_checked(0, 1, f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn overlap_examples() {
        let v = displaced_overlap(0, 0, g(1.0));
        assert!((v - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(displaced_overlap(3, 3, g(0.0)), 1.0);
        assert_eq!(displaced_overlap(2, 5, g(0.0)), 0.0);
        let v = displaced_overlap(0, 1, g(0.5));
        assert!((v - 0.6065306597126334).abs() < 1e-12, "{v}");
    }

    #[test]
    fn overlap_is_symmetric_bitwise() {
        for m in 0..12 {
            for n in 0..12 {
                for gv in [0.0, 0.3, 1.1, 2.5] {
                    let a = displaced_overlap(m, n, g(gv));
                    let b = displaced_overlap(n, m, g(gv));
                    assert_eq!(a.to_bits(), b.to_bits());
                }
            }
        }
    }

    #[test]
    fn large_index_gap_stays_finite() {
        let v = displaced_overlap(0, 400, g(1.0));
        assert!(v.is_finite());
        assert!(v.abs() < 1e-100);
    }
}
