//! Univariate (quasi)polynomials with rational coefficients, fitted to exact samples.

use crate::rational::{qi, Rational};
use num_traits::{One, Zero};
use std::fmt;

/// Fitted (quasi)polynomial in the degree `k`.
///
/// `classes[j]` holds the coefficients (highest power first) of the
/// constituent used for `k ≡ valid_from + j (mod period)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightPolynomial {
    classes: Vec<Vec<Rational>>,
    valid_from: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FitError {
    #[error("no quasipolynomial of degree {degree} and period <= {max_period} fits the samples")]
    NoFit { degree: usize, max_period: usize },
}

impl WeightPolynomial {
    pub fn polynomial(coefficients: Vec<Rational>, valid_from: u64) -> Self {
        Self {
            classes: vec![coefficients],
            valid_from,
        }
    }

    pub fn period(&self) -> usize {
        self.classes.len()
    }

    pub fn valid_from(&self) -> u64 {
        self.valid_from
    }

    pub fn degree(&self) -> usize {
        self.classes[0].len().saturating_sub(1)
    }

    pub fn is_polynomial(&self) -> bool {
        self.period() == 1
    }

    /// Coefficients of the first constituent, highest power first.
    pub fn coefficients(&self) -> &[Rational] {
        &self.classes[0]
    }

    pub fn classes(&self) -> &[Vec<Rational>] {
        &self.classes
    }

    /// Coefficient of `k^(degree - i)`; `i = 0` is the leading term.
    /// Only meaningful for true polynomials.
    pub fn coefficient(&self, i: usize) -> Rational {
        self.classes[0].get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, k: u64) -> Rational {
        let period = self.period() as i64;
        let class = (k as i64 - self.valid_from as i64).rem_euclid(period) as usize;
        horner(&self.classes[class], &qi(k as i64))
    }
}

impl fmt::Display for WeightPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, class) in self.classes.iter().enumerate() {
            if self.period() > 1 {
                write!(f, "[k ≡ {} mod {}] ", self.valid_from + j as u64, self.period())?;
            }
            let d = class.len().saturating_sub(1);
            let terms: Vec<String> = class
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| match d - i {
                    0 => crate::rational::format_rational(c),
                    1 => format!("({})k", crate::rational::format_rational(c)),
                    e => format!("({})k^{e}", crate::rational::format_rational(c)),
                })
                .collect();
            if terms.is_empty() {
                write!(f, "0")?;
            } else {
                write!(f, "{}", terms.join(" + "))?;
            }
            if j + 1 < self.period() {
                write!(f, "; ")?;
            }
        }
        Ok(())
    }
}

pub fn horner(coefficients: &[Rational], x: &Rational) -> Rational {
    coefficients
        .iter()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Interpolating polynomial through `(xs[i], ys[i])`, returned with exactly
/// `xs.len()` coefficients, highest power first.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let n = xs.len();
    // Newton divided differences.
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // Expand the Newton form, lowest power first.
    let mut acc: Vec<Rational> = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        // acc = acc * (x - xs[i]) + dd[i]
        let mut next = vec![Rational::zero(); n];
        for (p, c) in acc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if p + 1 < n {
                next[p + 1] += c;
            }
            next[p] -= c * &xs[i];
        }
        next[0] += &dd[i];
        acc = next;
    }
    acc.reverse();
    acc
}

/// Fits a quasipolynomial of the given degree to `sample(k)` for
/// `k = start, start + 1, ...`, trying periods `1..=max_period` in turn.
///
/// Each residue class is interpolated on its first `degree + 1` samples and
/// verified on the next `verify` samples.
pub fn fit_quasi<F>(
    mut sample: F,
    degree: usize,
    start: u64,
    verify: usize,
    max_period: usize,
) -> Result<WeightPolynomial, FitError>
where
    F: FnMut(u64) -> Rational,
{
    let per_class = degree + 1 + verify;
    let mut cache: Vec<Rational> = Vec::new();
    let mut value = |k: u64, cache: &mut Vec<Rational>| -> Rational {
        let idx = (k - start) as usize;
        while cache.len() <= idx {
            let next = start + cache.len() as u64;
            cache.push(sample(next));
        }
        cache[idx].clone()
    };
    'period: for period in 1..=max_period {
        let mut classes = Vec::with_capacity(period);
        for class in 0..period {
            let ks: Vec<u64> = (0..per_class)
                .map(|i| start + class as u64 + (i * period) as u64)
                .collect();
            let xs: Vec<Rational> = ks[..=degree].iter().map(|&k| qi(k as i64)).collect();
            let ys: Vec<Rational> = ks[..=degree]
                .iter()
                .map(|&k| value(k, &mut cache))
                .collect();
            let coeffs = interpolate(&xs, &ys);
            for &k in &ks[degree + 1..] {
                if horner(&coeffs, &qi(k as i64)) != value(k, &mut cache) {
                    continue 'period;
                }
            }
            classes.push(coeffs);
        }
        if classes.windows(2).all(|w| w[0] == w[1]) {
            classes.truncate(1);
        }
        return Ok(WeightPolynomial {
            classes,
            valid_from: start,
        });
    }
    Err(FitError::NoFit { degree, max_period })
}

/// `x^e` as a rational for small non-negative exponents.
pub fn rpow(x: u64, e: u32) -> Rational {
    let mut out = Rational::one();
    let base = qi(x as i64);
    for _ in 0..e {
        out *= &base;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn interpolation_recovers_cubic() {
        let f = |x: i64| qi(2 * x * x * x - x + 5);
        let xs: Vec<Rational> = (1..=4).map(qi).collect();
        let ys: Vec<Rational> = (1..=4).map(f).collect();
        assert_eq!(interpolate(&xs, &ys), vec![qi(2), qi(0), qi(-1), qi(5)]);
    }

    #[test]
    fn floor_square_quarter_has_period_two() {
        let fit = fit_quasi(|k| qi(((k * k) / 4) as i64), 2, 1, 3, 4).unwrap();
        assert_eq!(fit.period(), 2);
        // odd k: (k^2 - 1)/4, even k: k^2/4
        assert_eq!(fit.classes()[0], vec![q(1, 4), qi(0), q(-1, 4)]);
        assert_eq!(fit.classes()[1], vec![q(1, 4), qi(0), qi(0)]);
        for k in 1..20 {
            assert_eq!(fit.eval(k), qi(((k * k) / 4) as i64));
        }
    }

    #[test]
    fn period_above_limit_is_rejected() {
        let err = fit_quasi(|k| qi((k % 5) as i64), 0, 1, 2, 4).unwrap_err();
        assert_eq!(
            err,
            FitError::NoFit {
                degree: 0,
                max_period: 4
            }
        );
    }

    #[test]
    fn zero_samples_fit_zero() {
        let fit = fit_quasi(|_| qi(0), 3, 1, 4, 4).unwrap();
        assert!(fit.is_polynomial());
        assert!(fit.coefficients().iter().all(|c| c.is_zero()));
    }
}
