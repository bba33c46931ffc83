use std::f64::consts::PI;

use crate::{Error, Result, C64};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

fn pole_index(z: C64) -> Option<i64> {
    if z.re > 0.5 || z.im.abs() > 1e-13 {
        return None;
    }
    let n = z.re.round();
    ((z.re - n).abs() < 1e-13).then_some(n as i64)
}

/// Principal branch of `ln Γ(z)`.
///
/// Satisfies `ln Γ(z + 1) = ln Γ(z) + ln z` off the non-positive real axis.
pub fn log_gamma(z: C64) -> Result<C64> {
    if let Some(n) = pole_index(z) {
        return Err(Error::GammaPole { z, n });
    }
    if z.re < 0.5 {
        // reflection, with the branch offset that keeps the result principal
        let branch = C64::new(0.0, (2.0 * PI).copysign(z.im) * (0.5 * z.re + 0.25).floor());
        return Ok(C64::new(LN_PI, 0.0) + branch - ln_sin_pi(z) - lanczos(C64::new(1.0, 0.0) - z));
    }
    Ok(lanczos(z))
}

fn lanczos(z: C64) -> C64 {
    let z = z - 1.0;
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    C64::new(LN_SQRT_2PI, 0.0) + (z + 0.5) * t.ln() - t + x.ln()
}

/// Principal `ln sin(πz)`, stable for large `|Im z|`.
fn ln_sin_pi(z: C64) -> C64 {
    let w = z * PI;
    if w.im.abs() < 20.0 {
        return w.sin().ln();
    }
    let i = C64::new(0.0, 1.0);
    let raw = if w.im > 0.0 {
        -i * w + (C64::new(1.0, 0.0) - (2.0 * i * w).exp()).ln() + C64::new(-std::f64::consts::LN_2, PI / 2.0)
    } else {
        i * w + (C64::new(1.0, 0.0) - (-2.0 * i * w).exp()).ln() + C64::new(-std::f64::consts::LN_2, -PI / 2.0)
    };
    let mut im = raw.im - 2.0 * PI * (raw.im / (2.0 * PI)).round();
    if im <= -PI {
        im += 2.0 * PI;
    }
    C64::new(raw.re, im)
}

/// `ln(1 + w)` without cancellation for small `w`.
fn ln1p(w: C64) -> C64 {
    let u = C64::new(1.0, 0.0) + w;
    let d = u - 1.0;
    if d == C64::new(0.0, 0.0) {
        return w;
    }
    u.ln() * (w / d)
}

/// `Σ lnΓ(num + s) − Σ lnΓ(den + s)` for balanced argument lists
/// (equal counts, equal sums) and large shifts `s`.
///
/// The large `z ln z − z` parts of the Lanczos form cancel analytically, so
/// the result keeps absolute accuracy when each log-gamma is huge. Returns
/// `None` when some argument needs the reflection formula.
pub(crate) fn ln_gamma_ratio_shifted(num: &[C64], den: &[C64], s: f64) -> Option<C64> {
    if num.len() != den.len() || num.iter().chain(den).any(|a| a.re + s < 0.5) {
        return None;
    }
    let big = s + LANCZOS_G - 0.5;
    let mut acc = C64::new(0.0, 0.0);
    for (args, sign) in [(num, 1.0), (den, -1.0)] {
        for &a in args {
            let z = a + s - 1.0;
            let mut x = C64::new(LANCZOS[0], 0.0);
            for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
                x += c / (z + i as f64);
            }
            let t = a + big;
            acc += ((t - LANCZOS_G) * ln1p(a / big) + x.ln()) * sign;
        }
    }
    Some(acc)
}

pub fn gamma(z: C64) -> Result<C64> {
    log_gamma(z).map(|l| l.exp())
}

/// `ln(∏Γ(num) / ∏Γ(den))` as a sum of principal log-gammas.
pub fn ln_gamma_ratio(num: &[C64], den: &[C64]) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for (side, args, sign) in [("numerator", num, 1.0), ("denominator", den, -1.0)] {
        for (index, &z) in args.iter().enumerate() {
            let l = log_gamma(z).map_err(|e| Error::RatioPole {
                side,
                index,
                source: Box::new(e),
            })?;
            acc += l * sign;
        }
    }
    Ok(acc)
}

pub fn gamma_ratio(num: &[C64], den: &[C64]) -> Result<C64> {
    ln_gamma_ratio(num, den).map(|l| l.exp())
}

const BERNOULLI: [(f64, f64); 21] = [
    (1.0, 1.0),
    (-1.0, 2.0),
    (1.0, 6.0),
    (0.0, 1.0),
    (-1.0, 30.0),
    (0.0, 1.0),
    (1.0, 42.0),
    (0.0, 1.0),
    (-1.0, 30.0),
    (0.0, 1.0),
    (5.0, 66.0),
    (0.0, 1.0),
    (-691.0, 2730.0),
    (0.0, 1.0),
    (7.0, 6.0),
    (0.0, 1.0),
    (-3617.0, 510.0),
    (0.0, 1.0),
    (43867.0, 798.0),
    (0.0, 1.0),
    (-174611.0, 330.0),
];

/// Bernoulli number `B_n` (with `B_1 = −1/2`), `n ≤ 20`.
pub fn bernoulli_number(n: usize) -> f64 {
    let (p, q) = BERNOULLI[n];
    p / q
}

/// Bernoulli polynomial `B_n(x)`, `n ≤ 20`.
pub fn bernoulli_poly(n: usize, x: C64) -> C64 {
    let mut binom = 1.0;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..=n {
        if k > 0 {
            binom = binom * (n - k + 1) as f64 / k as f64;
        }
        let b = bernoulli_number(k);
        if b != 0.0 {
            acc += x.powu((n - k) as u32) * (binom * b);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn classical_values() {
        assert!(log_gamma(c(1.0)).unwrap().norm() < 1e-15);
        assert!(log_gamma(c(2.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c(0.5)).unwrap();
        assert!((half - c(PI.sqrt().ln())).norm() < 1e-14);
        // Γ(5) = 24
        assert!(rel(gamma(c(5.0)).unwrap(), c(24.0)) < 1e-14);
        // Γ(−1/2) = −2√π
        assert!(rel(gamma(c(-0.5)).unwrap(), c(-2.0 * PI.sqrt())) < 1e-14);
    }

    #[test]
    fn matches_high_precision_values() {
        // reference values from a 30-digit evaluation
        let cases = [
            (C64::new(0.3, 0.7), C64::new(-0.093_170_312_498_134_18, -1.223_957_365_713_688_7)),
            (C64::new(-2.2, 1.5), C64::new(-3.365_907_644_223_251, -6.915_120_245_097_539)),
            (C64::new(12.0, -30.0), C64::new(-6.821_617_109_423_758, -87.948_161_277_706_04)),
            (C64::new(0.25, 0.0), C64::new(1.288_022_524_698_077_5, 0.0)),
        ];
        for (z, want) in cases {
            let got = log_gamma(z).unwrap();
            assert!((got - want).norm() < 1e-12, "lnΓ({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn recurrence_on_grid() {
        for re in [-7.3, -2.6, -0.4, 0.1, 0.45, 0.6, 1.9, 6.2, 23.0] {
            for im in [-25.0, -3.1, -0.8, 0.0, 0.2, 1.7, 9.0, 40.0] {
                let z = C64::new(re, im);
                let d = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap() - z.ln();
                assert!(d.norm() < 1e-12, "z = {z}: {d}");
            }
        }
    }

    #[test]
    fn reflection_on_grid() {
        for re in [-3.3, -0.7, 0.2, 0.5, 1.4, 2.8] {
            for im in [-1.5, -0.3, 0.0, 0.6, 2.0] {
                let z = C64::new(re, im);
                let lhs = gamma(z).unwrap() * gamma(C64::new(1.0, 0.0) - z).unwrap() * (z * PI).sin();
                assert!(rel(lhs, c(PI)) < 1e-10, "z = {z}");
            }
        }
    }

    #[test]
    fn poles_are_reported() {
        for n in [0, -1, -4] {
            match log_gamma(c(n as f64)) {
                Err(Error::GammaPole { n: m, .. }) => assert_eq!(m, n),
                other => panic!("expected pole, got {other:?}"),
            }
        }
        match gamma_ratio(&[c(1.0)], &[c(-2.0)]) {
            Err(Error::RatioPole { side, index, .. }) => {
                assert_eq!(side, "denominator");
                assert_eq!(index, 0);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            gamma_ratio(&[c(2.0), c(0.0)], &[]),
            Err(Error::RatioPole { side: "numerator", index: 1, .. })
        ));
    }

    #[test]
    fn quarter_ratio() {
        let r = gamma_ratio(&[c(0.25)], &[c(0.75)]).unwrap();
        assert!((r - c(2.958_675_119_188_639)).norm() < 1e-12);
        let a = C64::new(0.4, -1.1);
        assert!((gamma_ratio(&[a], &[a]).unwrap() - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn bernoulli_polynomials() {
        // B_2(x) = x² − x + 1/6, B_3(x) = x³ − 3x²/2 + x/2
        let x = C64::new(0.3, -0.2);
        assert!((bernoulli_poly(2, x) - (x * x - x + 1.0 / 6.0)).norm() < 1e-15);
        assert!((bernoulli_poly(3, x) - (x * x * x - x * x * 1.5 + x * 0.5)).norm() < 1e-15);
        // B_n(1 − x) = (−1)^n B_n(x)
        for n in 0..=12 {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            let d = bernoulli_poly(n, C64::new(1.0, 0.0) - x) - bernoulli_poly(n, x) * s;
            assert!(d.norm() < 1e-11, "n = {n}");
        }
    }

    proptest::proptest! {
        #[test]
        fn ratio_reciprocal(ar in -3.0f64..3.0, ai in -3.0f64..3.0, br in 0.1f64..4.0, bi in -3.0f64..3.0) {
            let (a, b) = (C64::new(ar, ai), C64::new(br, bi));
            proptest::prop_assume!(pole_index(a).is_none());
            let p = gamma_ratio(&[a], &[b]).unwrap() * gamma_ratio(&[b], &[a]).unwrap();
            proptest::prop_assert!((p - c(1.0)).norm() < 1e-10);
        }
    }
}
