//! Globally adaptive Gauss-Kronrod (7/15) quadrature on `(0, infinity)`.

use crate::error::{Error, Result};

// Kronrod abscissae on [-1, 1] (non-negative half); odd indices are the
// 7-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerance, truncation point and effort limit for half-line integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub y_max: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            y_max: 16.0,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, y_max: f64, max_subdivisions: usize) -> Result<Self> {
        let s = Self {
            rel_tol,
            y_max,
            max_subdivisions,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::Domain(format!(
                "quadrature tolerance must lie in (0, 1e-2], got {}",
                self.rel_tol
            )));
        }
        if !(self.y_max.is_finite() && self.y_max > 0.0) {
            return Err(Error::Domain(format!("y_max must be positive, got {}", self.y_max)));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be positive".into()));
        }
        Ok(())
    }

    pub fn with_tolerance(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        res_k += WGK[j] * s;
        if j % 2 == 1 {
            res_g += WG[j / 2] * s;
        }
    }
    let value = res_k * half;
    if !value.is_finite() {
        return Err(Error::Quadrature(format!("integrand not finite on [{a}, {b}]")));
    }
    Ok(Segment {
        a,
        b,
        value,
        error: ((res_k - res_g) * half).abs(),
    })
}

/// Adaptive integral over the finite interval `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, max_subdivisions: usize) -> Result<f64> {
    let mut segments = vec![kronrod(&f, a, b)?];
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        if err <= rel_tol * total.abs() || err <= f64::MIN_POSITIVE {
            return Ok(total);
        }
        if segments.len() >= max_subdivisions {
            return Err(Error::Quadrature(format!(
                "no convergence after {max_subdivisions} subdivisions (estimate {total}, error {err})"
            )));
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segments.push(kronrod(&f, s.a, mid)?);
        segments.push(kronrod(&f, mid, s.b)?);
    }
}

/// `int_0^infinity f(y) dy`: adaptive on `(0, y_max]`, with the cutoff
/// doubled until the next interval `[y_max, 2 y_max]` is negligible.
pub fn integrate_halfline(f: impl Fn(f64) -> f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let mut y_max = spec.y_max;
    let mut total = integrate(&f, 0.0, y_max, spec.rel_tol, spec.max_subdivisions)?;
    for _ in 0..8 {
        let tail = integrate(&f, y_max, 2.0 * y_max, spec.rel_tol, spec.max_subdivisions)?;
        total += tail;
        if tail.abs() <= spec.rel_tol * total.abs() {
            return Ok(total);
        }
        y_max *= 2.0;
    }
    Err(Error::Quadrature(format!(
        "tail beyond y = {y_max} is not negligible; integrand may not decay"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rule_exactness() {
        // K15 integrates degree 22 exactly, G7 degree 13.
        for deg in [0, 5, 13, 22] {
            let seg = kronrod(&|x: f64| x.powi(deg), 0.0, 1.0).unwrap();
            assert!((seg.value - 1.0 / (deg as f64 + 1.0)).abs() < 1e-15, "deg {deg}");
        }
        assert!(kronrod(&|x: f64| x.powi(13), 0.0, 1.0).unwrap().error < 1e-15);
        let weights: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        assert!((weights - 2.0).abs() < 1e-15);
    }

    #[test]
    fn reference_integrals() {
        let spec = QuadratureSpec::default();
        let v = integrate_halfline(|y| (-y).exp(), &spec).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let v = integrate_halfline(|y| (-y * y).exp(), &spec).unwrap();
        assert!((v - PI.sqrt() / 2.0).abs() < 1e-10);
        assert!((v - 0.886227).abs() < 1e-6);
        let v = integrate_halfline(|y| y * y * (-y * y).exp(), &spec).unwrap();
        assert!((v - PI.sqrt() / 4.0).abs() < 1e-10);
        assert!((v - 0.443113).abs() < 1e-6);
    }

    #[test]
    fn short_cutoff_is_extended() {
        let spec = QuadratureSpec::new(1e-10, 1.0, 500).unwrap();
        let v = integrate_halfline(|y| (-y).exp(), &spec).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn failures_are_reported() {
        let spec = QuadratureSpec::default();
        assert!(matches!(
            integrate_halfline(|_| f64::NAN, &spec),
            Err(Error::Quadrature(_))
        ));
        assert!(matches!(integrate_halfline(|_| 1.0, &spec), Err(Error::Quadrature(_))));
        let tight = QuadratureSpec::new(1e-12, 10.0, 2).unwrap();
        assert!(integrate_halfline(|y| (50.0 * y).sin().abs() * (-y).exp(), &tight).is_err());
        assert!(QuadratureSpec::new(0.5, 10.0, 10).is_err());
    }

    #[test]
    fn endpoint_power_singularity() {
        // y^0.6 e^-y has a derivative singularity at 0; Gamma(1.6) = 0.8935153493...
        let v = integrate_halfline(|y: f64| y.powf(0.6) * (-y).exp(), &QuadratureSpec::default()).unwrap();
        assert!((v - 0.893_515_349_287_690_2).abs() < 1e-9);
    }
}
