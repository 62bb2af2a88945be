//! Conformable derivative operators on sampled data.
//!
//! The conformable derivative of order `alpha` acts on differentiable
//! functions of a positive coordinate as `D^alpha f(s) = s^(1-alpha) f'(s)`,
//! and its square expands to `(1-alpha) s^(1-2alpha) f' + s^(2-2alpha) f''`.
//! The operators here evaluate those identities with second-order finite
//! differences on arbitrary (possibly non-uniform) positive grids.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Order `alpha` of a conformable derivative, restricted to `0 < alpha <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub const ONE: FractionalOrder = FractionalOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

/// Strictly increasing set of positive sample coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    points: Vec<f64>,
}

impl Grid1D {
    /// Smallest admissible coordinate; keeps `s^(1-2alpha)` finite.
    pub const MIN_COORDINATE: f64 = 1e-6;
    pub const MIN_POINTS: usize = 3;

    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < Self::MIN_POINTS {
            return Err(Error::GridTooSmall {
                required: Self::MIN_POINTS,
                actual: points.len(),
            });
        }
        for (i, &p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite(i));
            }
            if p < Self::MIN_COORDINATE {
                return Err(Error::NonPositiveGrid {
                    index: i,
                    value: p,
                    floor: Self::MIN_COORDINATE,
                });
            }
            if i > 0 && p <= points[i - 1] {
                return Err(Error::NonIncreasingGrid(i));
            }
        }
        Ok(Self { points })
    }

    /// `count` equally spaced points from `min` to `max` inclusive.
    pub fn uniform(min: f64, max: f64, count: usize) -> Result<Self> {
        if count < Self::MIN_POINTS {
            return Err(Error::GridTooSmall {
                required: Self::MIN_POINTS,
                actual: count,
            });
        }
        let step = (max - min) / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| min + step * i as f64).collect();
        points[count - 1] = max;
        Self::new(points)
    }

    /// Points equally spaced in the conformable variable `u = s^alpha / alpha`.
    ///
    /// On such a grid the stencil error of `D^alpha D^alpha` is balanced
    /// between small and large `s`; for `alpha = 1` it is the uniform grid.
    pub fn conformable_uniform(min: f64, max: f64, count: usize, order: FractionalOrder) -> Result<Self> {
        let a = order.value();
        if a == 1.0 {
            return Self::uniform(min, max, count);
        }
        if count < Self::MIN_POINTS {
            return Err(Error::GridTooSmall {
                required: Self::MIN_POINTS,
                actual: count,
            });
        }
        if !(min >= Self::MIN_COORDINATE) {
            return Err(Error::NonPositiveGrid {
                index: 0,
                value: min,
                floor: Self::MIN_COORDINATE,
            });
        }
        let u0 = min.powf(a) / a;
        let u1 = max.powf(a) / a;
        let step = (u1 - u0) / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| (a * (u0 + step * i as f64)).powf(1.0 / a)).collect();
        points[0] = min;
        points[count - 1] = max;
        Self::new(points)
    }

    #[inline]
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    fn require(&self, n: usize) -> Result<()> {
        if self.len() < n {
            Err(Error::GridTooSmall {
                required: n,
                actual: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Complex samples of a function on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: Grid1D,
    values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.points().iter().map(|&s| f(s)).collect();
        Self::new(grid, values)
    }

    pub fn from_real_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |s| Complex64::new(f(s), 0.0))
    }

    pub fn from_real(grid: Grid1D, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Pointwise `f(s, value)`; the grid is preserved.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Result<Self> {
        let values = self
            .grid
            .points()
            .iter()
            .zip(&self.values)
            .map(|(&s, &v)| f(s, v))
            .collect();
        Self::new(self.grid.clone(), values)
    }

    /// Pointwise combination with another field on the same grid.
    pub fn zip_with(&self, other: &SampledField, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::Domain("fields live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Self::new(self.grid.clone(), values)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Sup-norm ignoring `skip` nodes at each end of the grid.
    pub fn interior_sup_norm(&self, skip: usize) -> f64 {
        let n = self.values.len();
        if n <= 2 * skip {
            return 0.0;
        }
        self.values[skip..n - skip].iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Finite-difference weights for derivatives `0..=order` at `z` using the
/// nodes `x` (Fornberg's recursion). Returns `w[k][j]`.
pub(crate) fn fornberg_weights(z: f64, x: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] *= c4 / c3;
        }
        c1 = c2;
    }
    c
}

/// Stencil start index and width for derivative `order` (1 or 2) at node `i`.
fn stencil(i: usize, n: usize, order: usize) -> (usize, usize) {
    if i == 0 {
        (0, order + 2)
    } else if i == n - 1 {
        (n - order - 2, order + 2)
    } else {
        (i - 1, 3)
    }
}

fn fd(field: &SampledField, order: usize) -> Vec<Complex64> {
    let s = field.grid.points();
    let v = &field.values;
    let n = s.len();
    (0..n)
        .map(|i| {
            let (start, width) = stencil(i, n, order);
            let w = fornberg_weights(s[i], &s[start..start + width], order);
            w[order]
                .iter()
                .zip(&v[start..start + width])
                .map(|(&wk, &vk)| vk * wk)
                .sum()
        })
        .collect()
}

/// Ordinary first derivative: central three-point stencil in the interior,
/// one-sided three-point stencils at the ends.
pub fn derivative(f: &SampledField) -> Result<SampledField> {
    f.grid.require(3)?;
    SampledField::new(f.grid.clone(), fd(f, 1))
}

/// Ordinary second derivative: central three-point stencil in the interior,
/// one-sided four-point stencils at the ends.
pub fn second_derivative(f: &SampledField) -> Result<SampledField> {
    f.grid.require(5)?;
    SampledField::new(f.grid.clone(), fd(f, 2))
}

/// `D^alpha f = s^(1-alpha) f'`.
pub fn conformable_derivative(f: &SampledField, order: FractionalOrder) -> Result<SampledField> {
    let a = order.value();
    let d1 = derivative(f)?;
    d1.map(|s, v| v * s.powf(1.0 - a))
}

/// `D^alpha D^alpha f = (1-alpha) s^(1-2alpha) f' + s^(2-2alpha) f''`.
pub fn conformable_second_derivative(f: &SampledField, order: FractionalOrder) -> Result<SampledField> {
    let a = order.value();
    let d2 = second_derivative(f)?;
    let d1 = derivative(f)?;
    let values = f
        .grid
        .points()
        .iter()
        .zip(d1.values.iter().zip(&d2.values))
        .map(|(&s, (&g1, &g2))| g1 * ((1.0 - a) * s.powf(1.0 - 2.0 * a)) + g2 * s.powf(2.0 - 2.0 * a))
        .collect();
    SampledField::new(f.grid.clone(), values)
}

/// Conformable exponential `exp(rate * t^alpha / alpha)`, the eigenfunction
/// of `D^alpha` with eigenvalue `rate`.
pub fn conformable_exp(rate: f64, order: FractionalOrder, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("conformable exponential needs t > 0, got {t}")));
    }
    let a = order.value();
    Ok((rate * t.powf(a) / a).exp())
}
