//! Sampling families with nonincreasing densities: their densities, CDFs,
//! quantiles, samplers, tail profiles near zero, and normalizing sequences.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::math::{
    exp, fabs, ln_gamma_unchecked, log, pow, reg_lower_gamma, reg_upper_gamma,
    upper_gamma_small_s,
};
use crate::rng::Stream;

/// Tagged description of a sampling family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Uniform(0, 1].
    Uniform,
    /// Density `x^{-a} (1-x) / B(1-a, 2)` on `(0, 1]`, `a` in `[0, 1)`.
    BetaType { a: f64 },
    /// Mixture density `int (1/y) 1[0,y](x) dGamma_c(y)` on `(0, inf)`,
    /// `c` in `(0, 1]`.
    GammaMixture { c: f64 },
    /// Two-component Subbotin location mixture transformed to `(0, 1]`.
    SubbotinMixture { r: f64, eps: f64, mu: f64 },
    /// Lehmann-alternative mixture: cdf `(1-eps) y + eps y^gamma` on `(0, 1]`.
    Lehmann { gamma: f64, eps: f64 },
}

/// Growth hypothesis satisfied by the density at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthClass {
    /// Bounded at zero.
    G0,
    /// Logarithmic growth `(log 1/x)^beta`.
    G1,
    /// Polynomial growth `x^{-alpha}`.
    G2,
}

/// Extreme-value exponent and tail constants of a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailProfile {
    /// Exponent with `n F0(a_n x) -> x^gamma`; equals `1 - alpha` under G2.
    pub gamma: f64,
    pub class: GrowthClass,
    /// Log power under G1.
    pub beta: Option<f64>,
    /// `C1` constant under G0/G1, when the family fixes one.
    pub c1: Option<f64>,
    /// `alpha` under G2.
    pub alpha: Option<f64>,
    /// `C2` constant under G2.
    pub c2: Option<f64>,
    /// `(C2/(1-alpha))^{1/(1-alpha)}` under G2.
    pub c2_tilde: Option<f64>,
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Uniform => Ok(()),
            Family::BetaType { a } => {
                if (0.0..1.0).contains(&a) {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument { what: "beta a", value: a })
                }
            }
            Family::GammaMixture { c } => {
                if c > 0.0 && c <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument { what: "gammamix c", value: c })
                }
            }
            Family::SubbotinMixture { r, eps, mu } => {
                if !(r >= 1.0) {
                    Err(Error::InvalidArgument { what: "subbotin r", value: r })
                } else if !(eps > 0.0 && eps < 1.0) {
                    Err(Error::InvalidArgument { what: "subbotin eps", value: eps })
                } else if !(mu > 0.0) {
                    Err(Error::InvalidArgument { what: "subbotin mu", value: mu })
                } else {
                    Ok(())
                }
            }
            Family::Lehmann { gamma, eps } => {
                if !(gamma > 0.0 && gamma < 1.0) {
                    Err(Error::InvalidArgument { what: "lehmann gamma", value: gamma })
                } else if !(eps > 0.0 && eps < 1.0) {
                    Err(Error::InvalidArgument { what: "lehmann eps", value: eps })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Right endpoint of the support.
    pub fn support_max(&self) -> f64 {
        match self {
            Family::GammaMixture { .. } => f64::INFINITY,
            _ => 1.0,
        }
    }

    /// Density at `x` inside the support.
    pub fn density(&self, x: f64) -> Result<f64> {
        self.validate()?;
        if !(x > 0.0) || x > self.support_max() {
            return Err(Error::InvalidArgument { what: "density x", value: x });
        }
        Ok(match *self {
            Family::Uniform => 1.0,
            Family::BetaType { a } => pow(x, -a) * (1.0 - x) * (1.0 - a) * (2.0 - a),
            Family::GammaMixture { c } => {
                upper_gamma_small_s(c - 1.0, x)? * exp(-ln_gamma_unchecked(c))
            }
            Family::SubbotinMixture { r, eps, mu } => {
                if x == 1.0 {
                    1.0 - eps
                } else {
                    let z = subbotin_survival_inverse(r, x)?;
                    let arg = (pow(fabs(z - mu), r) - pow(fabs(z), r)) / r;
                    1.0 - eps + eps * exp(-arg)
                }
            }
            Family::Lehmann { gamma, eps } => 1.0 - eps + eps * gamma * pow(x, gamma - 1.0),
        })
    }

    /// Right limit of the density at zero (possibly infinite).
    pub fn density_limit_at_zero(&self) -> f64 {
        match *self {
            Family::Uniform => 1.0,
            Family::BetaType { a } => {
                if a == 0.0 {
                    2.0
                } else {
                    f64::INFINITY
                }
            }
            Family::GammaMixture { .. } => f64::INFINITY,
            Family::SubbotinMixture { r, eps, mu } => {
                if r == 1.0 {
                    1.0 - eps + eps * exp(mu)
                } else {
                    f64::INFINITY
                }
            }
            Family::Lehmann { .. } => f64::INFINITY,
        }
    }

    /// Distribution function at `x >= 0` (clamped to 1 beyond the support).
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::InvalidArgument { what: "cdf x", value: x });
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        if x >= self.support_max() {
            return Ok(1.0);
        }
        Ok(match *self {
            Family::Uniform => x,
            Family::BetaType { a } => (2.0 - a) * pow(x, 1.0 - a) - (1.0 - a) * pow(x, 2.0 - a),
            Family::GammaMixture { c } => {
                let f = upper_gamma_small_s(c - 1.0, x)? * exp(-ln_gamma_unchecked(c));
                (x * f + reg_lower_gamma(c, x)?).min(1.0)
            }
            Family::SubbotinMixture { r, eps, mu } => {
                let z = subbotin_survival_inverse(r, x)?;
                (1.0 - eps) * x + eps * subbotin_survival(r, z - mu)?
            }
            Family::Lehmann { gamma, eps } => (1.0 - eps) * x + eps * pow(x, gamma),
        })
    }

    /// Quantile: the `u`-th root of the cdf, accurate to `1e-10` in cdf terms.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        self.validate()?;
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::InvalidArgument { what: "quantile u", value: u });
        }
        match *self {
            Family::Uniform => Ok(u),
            _ => self.invert_cdf(u),
        }
    }

    // Bracketed bisection to width 1e-14 (relative) plus one Newton polish.
    fn invert_cdf(&self, u: f64) -> Result<f64> {
        let mut lo = 0.0;
        let mut hi = if self.support_max().is_finite() {
            self.support_max()
        } else {
            let mut h = 1.0;
            let mut grow = 0;
            while self.cdf(h)? < u {
                h *= 2.0;
                grow += 1;
                if grow > 200 {
                    return Err(Error::InvalidArgument { what: "quantile bracket", value: u });
                }
            }
            h
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid)? < u {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-14 * hi.max(1.0) {
                break;
            }
        }
        let mut x = 0.5 * (lo + hi);
        let f = self.density(x)?;
        if f > 0.0 && f.is_finite() {
            let step = (self.cdf(x)? - u) / f;
            let pol = x - step;
            if pol > lo && pol < hi {
                x = pol;
            }
        }
        Ok(x)
    }

    /// Draw `n` i.i.d. observations.
    ///
    /// The gamma mixture uses its two-stage form (`Y ~ Gamma(c)`,
    /// `X | Y ~ Uniform(0, Y)`); the other families invert their cdfs, so a
    /// fixed seed fixes the sample.
    pub fn sample(&self, n: usize, rng: &mut Stream) -> Result<Vec<f64>> {
        self.validate()?;
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let mut out = Vec::with_capacity(n);
        match *self {
            Family::Uniform => {
                for _ in 0..n {
                    out.push(rng.uniform_open());
                }
            }
            Family::GammaMixture { c } => {
                for _ in 0..n {
                    let y = rng.gamma(c);
                    out.push(y * rng.uniform_open());
                }
            }
            _ => {
                for _ in 0..n {
                    out.push(self.quantile(rng.uniform_open())?);
                }
            }
        }
        Ok(out)
    }

    /// Exponent, growth class, and tail constants at zero.
    pub fn tail_profile(&self) -> Result<TailProfile> {
        self.validate()?;
        Ok(match *self {
            Family::Uniform => TailProfile {
                gamma: 1.0,
                class: GrowthClass::G0,
                beta: None,
                c1: Some(1.0),
                alpha: None,
                c2: None,
                c2_tilde: None,
            },
            Family::BetaType { a } => {
                let c2 = (1.0 - a) * (2.0 - a);
                g2_profile(a, c2)
            }
            Family::GammaMixture { c } => {
                if c < 1.0 {
                    let alpha = 1.0 - c;
                    let c2 = 1.0 / (alpha * exp(ln_gamma_unchecked(1.0 - alpha)));
                    g2_profile(alpha, c2)
                } else {
                    TailProfile {
                        gamma: 1.0,
                        class: GrowthClass::G1,
                        beta: Some(1.0),
                        c1: Some(1.0),
                        alpha: None,
                        c2: None,
                        c2_tilde: None,
                    }
                }
            }
            Family::SubbotinMixture { r, eps, mu } => {
                if r == 1.0 {
                    TailProfile {
                        gamma: 1.0,
                        class: GrowthClass::G0,
                        beta: None,
                        c1: Some(1.0 - eps + eps * exp(mu)),
                        alpha: None,
                        c2: None,
                        c2_tilde: None,
                    }
                } else {
                    // Slowly varying tail; the paper pins the normalizing
                    // sequence, not a log-power constant.
                    TailProfile {
                        gamma: 1.0,
                        class: GrowthClass::G1,
                        beta: None,
                        c1: None,
                        alpha: None,
                        c2: None,
                        c2_tilde: None,
                    }
                }
            }
            Family::Lehmann { gamma, eps } => g2_profile(1.0 - gamma, eps * gamma),
        })
    }

    /// Spatial scale `a_n` with `n F0(a_n) -> 1`.
    pub fn normalizing_sequence(&self, n: u64) -> Result<f64> {
        self.validate()?;
        if n < 2 {
            return Err(Error::InvalidArgument { what: "n", value: n as f64 });
        }
        let nf = n as f64;
        match *self {
            Family::Uniform => Ok(1.0 / nf),
            Family::GammaMixture { c } if c == 1.0 => Ok(1.0 / (nf * log(nf))),
            Family::SubbotinMixture { r, eps, mu } => {
                if r == 1.0 {
                    Ok(1.0 / (nf * (1.0 - eps + eps * exp(mu))))
                } else {
                    if nf * eps <= 1.0 {
                        return Err(Error::InvalidArgument { what: "n*eps", value: nf * eps });
                    }
                    let z = subbotin_survival_inverse(r, 1.0 / (nf * eps))?;
                    subbotin_survival(r, z + mu)
                }
            }
            _ => {
                let profile = self.tail_profile()?;
                let c2_tilde = profile.c2_tilde.expect("remaining families are G2");
                Ok(1.0 / (c2_tilde * pow(nf, 1.0 / profile.gamma)))
            }
        }
    }

    /// Max over the grid of `|n F0(a_n x) - x^gamma|` (analytic, no sampling).
    pub fn validate_gnedenko(&self, n: u64, x_grid: &[f64]) -> Result<f64> {
        let a_n = self.normalizing_sequence(n)?;
        let gamma = self.tail_profile()?.gamma;
        let mut worst: f64 = 0.0;
        for &x in x_grid {
            if !(x > 0.0) {
                return Err(Error::InvalidArgument { what: "grid x", value: x });
            }
            let dev = fabs(n as f64 * self.cdf(a_n * x)? - pow(x, gamma));
            worst = worst.max(dev);
        }
        Ok(worst)
    }
}

fn g2_profile(alpha: f64, c2: f64) -> TailProfile {
    let gamma = 1.0 - alpha;
    TailProfile {
        gamma,
        class: GrowthClass::G2,
        beta: None,
        c1: None,
        alpha: Some(alpha),
        c2: Some(c2),
        c2_tilde: Some(pow(c2 / gamma, 1.0 / gamma)),
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Uniform => write!(f, "uniform"),
            Family::BetaType { a } => write!(f, "beta:a={a}"),
            Family::GammaMixture { c } => write!(f, "gammamix:c={c}"),
            Family::SubbotinMixture { r, eps, mu } => {
                write!(f, "subbotin:r={r},eps={eps},mu={mu}")
            }
            Family::Lehmann { gamma, eps } => write!(f, "lehmann:gl={gamma},eps={eps}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `uniform`, `beta:a=<v>`, `gammamix:c=<v>`,
    /// `subbotin:r=<v>,eps=<v>,mu=<v>`, `lehmann:gl=<v>,eps=<v>`.
    fn from_str(spec: &str) -> Result<Family> {
        fn params<'a>(rest: &'a str, keys: &[&str], out: &mut [f64]) -> Result<()> {
            let mut seen = [false; 3];
            for part in rest.split(',') {
                let (k, v) = part
                    .split_once('=')
                    .ok_or(Error::FamilySpec { reason: "expected key=value" })?;
                let idx = keys
                    .iter()
                    .position(|&key| key == k.trim())
                    .ok_or(Error::FamilySpec { reason: "unknown parameter" })?;
                let value: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::FamilySpec { reason: "unparsable number" })?;
                out[idx] = value;
                seen[idx] = true;
            }
            if seen[..keys.len()].iter().all(|&s| s) {
                Ok(())
            } else {
                Err(Error::FamilySpec { reason: "missing parameter" })
            }
        }

        let spec = spec.trim();
        let family = match spec.split_once(':') {
            None => match spec {
                "uniform" => Family::Uniform,
                _ => return Err(Error::FamilySpec { reason: "unknown family" }),
            },
            Some((head, rest)) => match head {
                "beta" => {
                    let mut v = [0.0; 3];
                    params(rest, &["a"], &mut v)?;
                    Family::BetaType { a: v[0] }
                }
                "gammamix" => {
                    let mut v = [0.0; 3];
                    params(rest, &["c"], &mut v)?;
                    Family::GammaMixture { c: v[0] }
                }
                "subbotin" => {
                    let mut v = [0.0; 3];
                    params(rest, &["r", "eps", "mu"], &mut v)?;
                    Family::SubbotinMixture { r: v[0], eps: v[1], mu: v[2] }
                }
                "lehmann" => {
                    let mut v = [0.0; 3];
                    params(rest, &["gl", "eps"], &mut v)?;
                    Family::Lehmann { gamma: v[0], eps: v[1] }
                }
                _ => return Err(Error::FamilySpec { reason: "unknown family" }),
            },
        };
        family.validate()?;
        Ok(family)
    }
}

/// Normalizing constant `C_r = 2 Gamma(1/r) r^{1/r - 1}` of the Subbotin
/// density `exp(-|y|^r / r) / C_r`.
pub fn subbotin_norm_constant(r: f64) -> f64 {
    2.0 * exp(ln_gamma_unchecked(1.0 / r)) * pow(r, 1.0 / r - 1.0)
}

/// Subbotin (generalized Gaussian) density.
pub fn subbotin_density(r: f64, z: f64) -> Result<f64> {
    check_r(r)?;
    Ok(exp(-pow(fabs(z), r) / r) / subbotin_norm_constant(r))
}

/// Subbotin distribution function; `r = 2` is the standard normal.
pub fn subbotin_cdf(r: f64, z: f64) -> Result<f64> {
    check_r(r)?;
    let half = 0.5 * reg_lower_gamma(1.0 / r, pow(fabs(z), r) / r)?;
    Ok(if z >= 0.0 { 0.5 + half } else { 0.5 - half })
}

/// Upper tail `1 - Phi_r(z)`, computed without cancellation.
pub fn subbotin_survival(r: f64, z: f64) -> Result<f64> {
    check_r(r)?;
    let half = 0.5 * reg_upper_gamma(1.0 / r, pow(fabs(z), r) / r)?;
    Ok(if z >= 0.0 { half } else { 1.0 - half })
}

/// Solve `1 - Phi_r(z) = q` for `q` in `(0, 1)`.
///
/// Bracketed bisection to relative width 1e-14 with one Newton polish;
/// robust deep in the tail, where the normalizing sequences need it.
pub fn subbotin_survival_inverse(r: f64, q: f64) -> Result<f64> {
    check_r(r)?;
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument { what: "survival q", value: q });
    }
    if q > 0.5 {
        return Ok(-(subbotin_survival_inverse(r, 1.0 - q)?));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while subbotin_survival(r, hi)? > q {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::InvalidArgument { what: "survival bracket", value: q });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if subbotin_survival(r, mid)? > q {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    let mut z = 0.5 * (lo + hi);
    let pdf = subbotin_density(r, z)?;
    if pdf > 0.0 {
        let poln = z + (subbotin_survival(r, z)? - q) / pdf;
        if poln > lo && poln < hi {
            z = poln;
        }
    }
    Ok(z)
}

/// Quantile of the Subbotin distribution.
pub fn subbotin_quantile(r: f64, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidArgument { what: "quantile u", value: u });
    }
    subbotin_survival_inverse(r, 1.0 - u)
}

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument { what: "subbotin r", value: r })
    }
}
