//! Truncated formal power series in `q` with arbitrary-precision integer
//! coefficients, and the q-Pochhammer products used by every generating
//! function in the crate.
//!
//! A [`TruncatedSeries`] of order `N` stores exactly `N + 1` coefficients and
//! represents its value modulo `q^(N+1)`. Binary operations require both
//! operands to share the same order; there is no implicit re-truncation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigInt::one(), order)
    }

    pub fn constant(value: impl Into<BigInt>, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value.into();
        s
    }

    /// `coeff * q^exponent`, which is zero when `exponent > order`.
    pub fn monomial(coeff: impl Into<BigInt>, exponent: u64, order: usize) -> Self {
        let mut s = Self::zero(order);
        if let Some(slot) = usize::try_from(exponent).ok().and_then(|e| s.coeffs.get_mut(e)) {
            *slot = coeff.into();
        }
        s
    }

    /// Builds a series from its low-order coefficients, zero-filling the rest.
    pub fn from_coeffs<I, C>(coeffs: I, order: usize) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        let mut v: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        if v.len() > order + 1 {
            return Err(Error::TooManyCoefficients { len: v.len(), order });
        }
        v.resize(order + 1, BigInt::zero());
        Ok(Self { coeffs: v })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^n`; zero past the truncation order.
    pub fn coeff(&self, n: usize) -> BigInt {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x + y)
            .collect();
        Ok(Self { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x - y)
            .collect();
        Ok(Self { coeffs })
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Multiplication by `q^exponent`.
    pub fn shift(&self, exponent: u64) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        let Ok(e) = usize::try_from(exponent) else {
            return out;
        };
        if e <= order {
            out.coeffs[e..].clone_from_slice(&self.coeffs[..=order - e]);
        }
        out
    }

    /// Truncated Cauchy product (schoolbook).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let order = self.order();
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs[..=order - i].iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Multiplicative inverse modulo `q^(N+1)`. The constant term must be a
    /// unit of the integers.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.abs() != BigInt::one() {
            return Err(Error::NonUnitConstant);
        }
        let order = self.order();
        let mut inv: Vec<BigInt> = Vec::with_capacity(order + 1);
        inv.push(c0.clone());
        for n in 1..=order {
            let mut acc = BigInt::zero();
            for i in 1..=n {
                let c = &self.coeffs[i];
                if !c.is_zero() {
                    acc += c * &inv[n - i];
                }
            }
            // c0 is its own inverse
            inv.push(-(c0 * acc));
        }
        Ok(Self { coeffs: inv })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.invert()?)
    }

    /// In-place multiplication by `1 - sign * q^exponent`.
    pub(crate) fn mul_binomial(&mut self, sign: Sign, exponent: u64) {
        let order = self.order();
        if exponent == 0 {
            match sign {
                Sign::Plus => self.coeffs.iter_mut().for_each(|c| c.set_zero()),
                Sign::Minus => self.coeffs.iter_mut().for_each(|c| *c *= 2),
            }
            return;
        }
        let Some(e) = usize::try_from(exponent).ok().filter(|&e| e <= order) else {
            return;
        };
        for i in (e..=order).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            let prev = &lo[i - e];
            if prev.is_zero() {
                continue;
            }
            match sign {
                Sign::Plus => hi[0] -= prev,
                Sign::Minus => hi[0] += prev,
            }
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{mag}q^{i}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// The sign `s` in a factor `1 - s q^e`; [`Sign::Minus`] gives `1 + q^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Length {
    Finite(u64),
    Infinite,
}

/// `(sign * q^offset; q^step)_length`, i.e. the product of
/// `1 - sign * q^(offset + i * step)` for `0 <= i < length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PochSpec {
    pub sign: Sign,
    pub offset: u64,
    pub step: u64,
    pub length: Length,
}

impl PochSpec {
    pub fn finite(sign: Sign, offset: u64, step: u64, length: u64) -> Self {
        Self {
            sign,
            offset,
            step,
            length: Length::Finite(length),
        }
    }

    pub fn infinite(sign: Sign, offset: u64, step: u64) -> Self {
        Self {
            sign,
            offset,
            step,
            length: Length::Infinite,
        }
    }
}

/// Expands a q-Pochhammer product to the given order.
///
/// Infinite products stop at the first factor whose exponent exceeds the
/// order, since that factor and every later one is `1` modulo `q^(N+1)`.
/// A zero step with zero offset is allowed for finite lengths: each factor is
/// then the constant `1 - sign`.
pub fn pochhammer(spec: PochSpec, order: usize) -> Result<TruncatedSeries> {
    let mut out = TruncatedSeries::one(order);
    let limit = order as u64;
    match spec.length {
        Length::Infinite => {
            if spec.step == 0 || spec.offset == 0 {
                return Err(Error::DivergentProduct);
            }
            let mut e = spec.offset;
            while e <= limit {
                out.mul_binomial(spec.sign, e);
                e += spec.step;
            }
        }
        Length::Finite(k) => {
            for i in 0..k {
                let e = spec.offset.saturating_add(i.saturating_mul(spec.step));
                // exponents never decrease, so the rest are all 1
                if e > limit {
                    break;
                }
                out.mul_binomial(spec.sign, e);
                if spec.sign == Sign::Plus && e == 0 {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// `(-q;q)_inf / (q;q)_inf`, whose coefficients count overpartitions.
pub fn overpartition_gf(order: usize) -> TruncatedSeries {
    let num = pochhammer(PochSpec::infinite(Sign::Minus, 1, 1), order)
        .expect("offset and step are positive");
    let den = pochhammer(PochSpec::infinite(Sign::Plus, 1, 1), order)
        .expect("offset and step are positive");
    num.div(&den).expect("(q;q)_inf has constant term 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(coeffs: &[i64], order: usize) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(coeffs.iter().copied(), order).unwrap()
    }

    #[test]
    fn from_coeffs_zero_fills() {
        assert_eq!(s(&[1], 3).coeffs(), &[1, 0, 0, 0].map(BigInt::from));
        assert_eq!(s(&[0, 1], 2), TruncatedSeries::monomial(1, 1, 2));
        assert_eq!(s(&[1, -1], 4).coeffs().len(), 5);
        assert_eq!(
            TruncatedSeries::from_coeffs([1, 2, 3], 1),
            Err(Error::TooManyCoefficients { len: 3, order: 1 })
        );
    }

    #[test]
    fn add_examples() {
        assert_eq!(s(&[1, -1], 3).add(&s(&[0, 1], 3)).unwrap(), s(&[1], 3));
        let x = s(&[3, 0, -7], 3);
        assert_eq!(TruncatedSeries::zero(3).add(&x).unwrap(), x);
        assert_eq!(s(&[1, 2], 3).add(&s(&[1, 2], 3)).unwrap(), s(&[2, 4], 3));
        assert_eq!(
            s(&[1], 3).add(&s(&[1], 4)),
            Err(Error::OrderMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn mul_examples() {
        assert_eq!(s(&[1, -1], 3).mul(&s(&[1, 1, 1, 1], 3)).unwrap(), s(&[1], 3));
        let x = s(&[5, -2, 0, 9], 3);
        assert_eq!(x.mul(&TruncatedSeries::one(3)).unwrap(), x);
        assert_eq!(s(&[1, 1], 2).mul(&s(&[1, 1], 2)).unwrap(), s(&[1, 2, 1], 2));
        assert!(s(&[1], 2).mul(&s(&[1], 3)).is_err());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(s(&[1, -1], 3).invert().unwrap(), s(&[1, 1, 1, 1], 3));
        assert_eq!(s(&[1], 3).invert().unwrap(), s(&[1], 3));
        assert_eq!(s(&[1, 1], 3).invert().unwrap(), s(&[1, -1, 1, -1], 3));
        assert_eq!(s(&[-1, 1], 2).invert().unwrap(), s(&[-1, -1, -1], 2));
        assert_eq!(s(&[2, 1], 3).invert(), Err(Error::NonUnitConstant));
        assert_eq!(s(&[0, 1], 3).invert(), Err(Error::NonUnitConstant));
    }

    #[test]
    fn shift_truncates() {
        assert_eq!(s(&[1, 2, 3], 3).shift(2), s(&[0, 0, 1, 2], 3));
        assert!(s(&[1, 2, 3], 3).shift(4).is_zero());
        assert!(s(&[1], 3).shift(u64::MAX).is_zero());
    }

    #[test]
    fn pochhammer_examples() {
        let p = pochhammer(PochSpec::finite(Sign::Minus, 1, 1, 2), 4).unwrap();
        assert_eq!(p, s(&[1, 1, 1, 1], 4));
        let empty = pochhammer(PochSpec::finite(Sign::Plus, 1, 2, 0), 4).unwrap();
        assert_eq!(empty, TruncatedSeries::one(4));
        let degenerate = pochhammer(PochSpec::finite(Sign::Minus, 0, 0, 3), 2).unwrap();
        assert_eq!(degenerate, s(&[8], 2));
        let vanishing = pochhammer(PochSpec::finite(Sign::Plus, 0, 1, 3), 2).unwrap();
        assert!(vanishing.is_zero());
    }

    #[test]
    fn pochhammer_divergent() {
        for spec in [
            PochSpec::infinite(Sign::Plus, 0, 1),
            PochSpec::infinite(Sign::Minus, 1, 0),
        ] {
            assert_eq!(pochhammer(spec, 5), Err(Error::DivergentProduct));
        }
    }

    #[test]
    fn euler_product_matches_pentagonal_numbers() {
        // (q;q)_inf = sum (-1)^j q^{j(3j-1)/2} over all integers j
        let order = 40;
        let mut expected = vec![0i64; order + 1];
        for j in -6i64..=6 {
            let e = j * (3 * j - 1) / 2;
            if (0..=order as i64).contains(&e) {
                expected[e as usize] += if j % 2 == 0 { 1 } else { -1 };
            }
        }
        let euler = pochhammer(PochSpec::infinite(Sign::Plus, 1, 1), order).unwrap();
        assert_eq!(euler, s(&expected, order));
    }

    #[test]
    fn overpartition_gf_small() {
        assert_eq!(overpartition_gf(4), s(&[1, 2, 4, 8, 14], 4));
        assert_eq!(overpartition_gf(0), s(&[1], 0));
    }

    #[test]
    fn overpartition_gf_is_positive_and_nondecreasing() {
        let gf = overpartition_gf(60);
        let c = gf.coeffs();
        assert!(c.iter().all(|x| x.is_positive()));
        assert!(c.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn display_renders_terms() {
        assert_eq!(s(&[1, -1, 0, 3], 3).to_string(), "1 - q + 3q^3 + O(q^4)");
        assert_eq!(TruncatedSeries::zero(1).to_string(), "0 + O(q^2)");
    }

    fn unit_series() -> impl Strategy<Value = TruncatedSeries> {
        (0usize..=64, prop::bool::ANY).prop_flat_map(|(order, neg)| {
            prop::collection::vec(-5i64..=5, order).prop_map(move |tail| {
                let head = if neg { -1 } else { 1 };
                let coeffs = std::iter::once(head).chain(tail);
                TruncatedSeries::from_coeffs(coeffs, order).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn invert_is_two_sided_inverse(x in unit_series()) {
            let inv = x.invert().unwrap();
            let one = TruncatedSeries::one(x.order());
            prop_assert_eq!(x.mul(&inv).unwrap(), one.clone());
            prop_assert_eq!(inv.mul(&x).unwrap(), one);
        }

        #[test]
        fn pochhammer_extends_by_one_factor(
            neg in prop::bool::ANY,
            offset in 0u64..6,
            step in 0u64..5,
            k in 0u64..10,
            order in 0usize..40,
        ) {
            let sign = if neg { Sign::Minus } else { Sign::Plus };
            let shorter = pochhammer(PochSpec::finite(sign, offset, step, k), order).unwrap();
            let longer = pochhammer(PochSpec::finite(sign, offset, step, k + 1), order).unwrap();
            let e = offset + k * step;
            let factor = match sign {
                Sign::Plus => TruncatedSeries::one(order).sub(&TruncatedSeries::monomial(1, e, order)),
                Sign::Minus => TruncatedSeries::one(order).add(&TruncatedSeries::monomial(1, e, order)),
            }.unwrap();
            prop_assert_eq!(longer, shorter.mul(&factor).unwrap());
        }
    }
}
