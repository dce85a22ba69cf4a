//! Standard normal distribution function and its inverse.
//!
//! `phi` evaluates the lower tail through Hart's double-precision rational
//! approximation (as published by Cody/West) with a continued-fraction
//! tail for |x| ≥ 7.07. `phi_inv` starts from Acklam's rational
//! approximation and polishes the result with Halley steps against `phi`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Lower-tail probability P[Z ≤ x] for a standard normal Z.
pub fn phi(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::OutOfRange {
            name: "x",
            value: x,
            expected: "a finite real",
        });
    }
    Ok(cdf(x))
}

/// Quantile function: the x with phi(x) = p.
pub fn phi_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            expected: "a probability in (0, 1)",
        });
    }
    Ok(quantile(p))
}

// Highest degree first.
const NUM: [f64; 7] = [
    3.526_249_659_989_11e-2,
    0.700_383_064_443_688,
    6.373_962_203_531_65,
    33.912_866_078_383,
    112.079_291_497_871,
    221.213_596_169_931,
    220.206_867_912_376,
];
const DEN: [f64; 8] = [
    8.838_834_764_831_84e-2,
    1.755_667_163_182_64,
    16.064_177_579_207,
    86.780_732_202_946_1,
    296.564_248_779_674,
    637.333_633_378_831,
    793.826_512_519_948,
    440.413_735_824_752,
];

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

pub(crate) fn cdf(x: f64) -> f64 {
    let ax = x.abs();
    let tail = if ax > 37.0 {
        0.0
    } else {
        let e = (-0.5 * ax * ax).exp();
        if ax < 7.071_067_811_865_47 {
            horner(&NUM, ax) * e / horner(&DEN, ax)
        } else {
            let cf = ax + 1.0 / (ax + 2.0 / (ax + 3.0 / (ax + 4.0 / (ax + 0.65))));
            e / cf / SQRT_2PI
        }
    };
    let p = if x > 0.0 { 1.0 - tail } else { tail };
    p.clamp(0.0, 1.0)
}

fn density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    }
}

pub(crate) fn quantile(p: f64) -> f64 {
    // Work in the lower half so the residual is computed on the small tail.
    if p > 0.5 {
        return -quantile(1.0 - p);
    }
    let mut x = acklam(p);
    for _ in 0..2 {
        let e = cdf(x) - p;
        let u = e / density(x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

/// A one-sided confidence level together with its significance and z-value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceSpec {
    level: f64,
    alpha: f64,
    z: f64,
}

impl ConfidenceSpec {
    /// Builds the spec for `level` in (0.5, 1), with `z = phi_inv(level)`.
    pub fn new(level: f64) -> Result<Self> {
        if !(level > 0.5 && level < 1.0) {
            return Err(Error::OutOfRange {
                name: "confidence level",
                value: level,
                expected: "a probability in (0.5, 1)",
            });
        }
        Ok(Self {
            level,
            alpha: 1.0 - level,
            z: quantile(level),
        })
    }

    /// Builds the spec from an explicit positive quantile, e.g. a tabulated
    /// 1.645; the level is then `phi(z)`.
    pub fn from_z(z: f64) -> Result<Self> {
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::OutOfRange {
                name: "z",
                value: z,
                expected: "a finite positive real",
            });
        }
        let level = cdf(z);
        if level >= 1.0 {
            return Err(Error::OutOfRange {
                name: "z",
                value: z,
                expected: "a quantile with phi(z) < 1",
            });
        }
        Ok(Self {
            level,
            alpha: 1.0 - level,
            z,
        })
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    /// Significance `1 - level`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

/// Same as [`ConfidenceSpec::new`].
pub fn confidence_spec(level: f64) -> Result<ConfidenceSpec> {
    ConfidenceSpec::new(level)
}
