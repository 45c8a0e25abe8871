//! Truncated power series in one variable over [`Scalar`].
//!
//! A series carries an explicit truncation order: coefficients of t^k are
//! known exactly for k < trunc and unknown beyond. Orders computed from a
//! series are certified, never guessed; when every known coefficient
//! vanishes, the order is only known to be at least the truncation.

use crate::scalar::Scalar;

pub const EXACT: usize = usize::MAX / 4;

/// Power series known modulo t^trunc. `coeffs[k]` is the t^k coefficient;
/// entries at or beyond `trunc` are absent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    pub coeffs: Vec<Scalar>,
    pub trunc: usize,
}

/// Result of an exact order computation on a truncated series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderOutcome {
    /// Nonzero coefficient found at this order (certified).
    Finite(usize),
    /// All known coefficients vanish: order >= trunc, possibly infinite.
    AtLeast(usize),
}

impl Series {
    pub fn zero(trunc: usize) -> Series {
        Series {
            coeffs: vec![],
            trunc,
        }
    }

    pub fn constant(c: Scalar, trunc: usize) -> Series {
        Series {
            coeffs: vec![c],
            trunc,
        }
        .normalized()
    }

    pub fn monomial(c: Scalar, k: usize, trunc: usize) -> Series {
        if c.is_zero() || k >= trunc {
            return Series::zero(trunc);
        }
        let mut coeffs = vec![Scalar::zero(); k + 1];
        coeffs[k] = c;
        Series { coeffs, trunc }
    }

    /// Exact polynomial viewed as a series (truncation sentinel EXACT).
    pub fn from_poly(coeffs: Vec<Scalar>) -> Series {
        Series {
            coeffs,
            trunc: EXACT,
        }
        .normalized()
    }

    fn normalized(mut self) -> Series {
        if self.coeffs.len() > self.trunc {
            self.coeffs.truncate(self.trunc);
        }
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Series) -> Series {
        let trunc = self.trunc.min(other.trunc);
        let n = self.coeffs.len().max(other.coeffs.len()).min(trunc);
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k).add_ref(&other.coeff(k)));
        }
        Series { coeffs, trunc }.normalized()
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| c.neg_ref()).collect(),
            trunc: self.trunc,
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        // Valid window: min over truncation shifted by the other factor's valuation.
        let va = self.valuation_lower_bound();
        let vb = other.valuation_lower_bound();
        let trunc = (self.trunc + vb).min(other.trunc + va).min(EXACT);
        let n = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1).min(trunc);
        let mut coeffs = vec![Scalar::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        Series { coeffs, trunc }.normalized()
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| a.mul_ref(c)).collect(),
            trunc: self.trunc,
        }
        .normalized()
    }

    /// Multiply by t^k.
    pub fn shift_up(&self, k: usize) -> Series {
        if self.coeffs.is_empty() {
            return Series::zero(self.trunc.saturating_add(k).min(EXACT));
        }
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Series {
            coeffs,
            trunc: self.trunc.saturating_add(k).min(EXACT),
        }
        .normalized()
    }

    pub fn pow(&self, e: usize) -> Series {
        let mut acc = Series::constant(Scalar::one(), EXACT);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Known valuation lower bound: index of the first known-nonzero
    /// coefficient, or the known-zero prefix length.
    fn valuation_lower_bound(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    /// Certified t-order.
    pub fn order(&self) -> OrderOutcome {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => OrderOutcome::Finite(k),
            None => OrderOutcome::AtLeast(self.trunc),
        }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Series {
        if self.coeffs.len() <= 1 {
            return Series::zero(self.trunc.saturating_sub(1).max(1));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul_ref(&Scalar::from_int(k as i64)))
            .collect();
        Series {
            coeffs,
            trunc: if self.trunc >= EXACT {
                EXACT
            } else {
                self.trunc.saturating_sub(1).max(1)
            },
        }
        .normalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn arithmetic_and_orders() {
        let t = Series::monomial(Scalar::one(), 1, 10);
        let t3 = t.pow(3);
        assert_eq!(t3.order(), OrderOutcome::Finite(3));
        // cubing a series known mod t^10 with valuation 1 certifies mod t^12
        let z = t3.sub(&t3);
        assert_eq!(z.order(), OrderOutcome::AtLeast(12));
        // multiplication respects valuations when widening the window
        let a = Series::monomial(s(2), 4, 8); // known mod t^8, val 4
        let b = Series::monomial(s(3), 5, 9); // known mod t^9, val 5
        let p = a.mul(&b);
        assert_eq!(p.coeff(9), s(6));
        // window: min(8+5, 9+4) = 13
        assert_eq!(p.trunc, 13);
    }

    #[test]
    fn derivative() {
        // d/dt (t^2 + 2t^3) = 2t + 6t^2
        let p = Series::from_poly(vec![s(0), s(0), s(1), s(2)]);
        let d = p.derivative();
        assert_eq!(d.coeff(1), s(2));
        assert_eq!(d.coeff(2), s(6));
    }
}
