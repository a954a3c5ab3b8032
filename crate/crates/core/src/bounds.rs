//! Divisibility exponents μ_j, ν_j, ε_m and d*, the window of possibly
//! nonvanishing compactly supported cohomology degrees, and checkers for
//! the zeta-level consequences (Ax–Katz divisibility of point counts and
//! Newton slopes of the reconstructed zeta function).
//!
//! Only the weakest consequence, that every reciprocal root and pole is
//! divisible by q^{μ₀}, is visible from the zeta function alone; the
//! degree-resolved bounds are reported as numbers, not certified.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{counts, estimate_dimension, PolySystem, Region};
use crate::series::{newton_polygon, ord_p, pade_reconstruct_auto, zeta_series, RationalFunction};
use crate::Limits;

/// (n; d₁ ≥ … ≥ d_r; dim Z), optionally for Z ⊂ ℙ^n (bounds then use n + 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub n: u32,
    pub degrees: Vec<u32>,
    pub dim: u32,
    #[serde(default)]
    pub projective: bool,
}

impl DegreeProfile {
    /// Sorts the degrees and validates the profile. A negative dimension
    /// (empty Z) is refused with [`Error::EmptyVariety`].
    pub fn new(n: u32, mut degrees: Vec<u32>, dim: i32, projective: bool) -> Result<Self> {
        if dim < 0 {
            return Err(Error::EmptyVariety);
        }
        let dim = dim as u32;
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        if degrees.iter().any(|&d| d == 0) {
            return Err(Error::Range("degrees must be positive".into()));
        }
        if dim > n {
            return Err(Error::Range(format!("dim Z = {dim} exceeds n = {n}")));
        }
        if (n - dim) as usize > degrees.len() {
            return Err(Error::Range(format!(
                "codimension {} exceeds the number of equations {}",
                n - dim,
                degrees.len()
            )));
        }
        Ok(DegreeProfile { n, degrees, dim, projective })
    }

    pub fn r(&self) -> u32 {
        self.degrees.len() as u32
    }

    /// c = n − dim Z.
    pub fn codim(&self) -> u32 {
        self.n - self.dim
    }

    pub fn is_complete_intersection(&self) -> bool {
        self.codim() == self.r()
    }

    /// The ambient count entering the numerators: n, or n + 1 for ℙ^n.
    fn ambient(&self) -> i64 {
        self.n as i64 + self.projective as i64
    }

    fn d1(&self) -> i64 {
        self.degrees.first().copied().unwrap_or(1) as i64
    }

    /// Largest m with ε_m defined: dim Z − (n − r), or None when negative.
    pub fn eps_range(&self) -> Option<u32> {
        let top = self.dim as i64 - (self.n as i64 - self.r() as i64);
        (top >= 0).then_some(top as u32)
    }
}

fn ceil_div_clamped(num: i64, den: i64) -> u32 {
    if num <= 0 {
        0
    } else {
        ((num + den - 1) / den) as u32
    }
}

/// d_i* = d_i for i ≤ c; 1 if i > c and d_i = d₁; 0 otherwise.
pub fn d_star(profile: &DegreeProfile) -> Vec<u32> {
    let c = profile.codim() as usize;
    let d1 = profile.d1() as u32;
    profile
        .degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| if i < c { d } else if d == d1 { 1 } else { 0 })
        .collect()
}

fn check_j(profile: &DegreeProfile, j: u32) -> Result<()> {
    if j > profile.dim {
        return Err(Error::Range(format!("j = {j} outside 0..={}", profile.dim)));
    }
    Ok(())
}

/// μ_j = j + max(0, ⌈(n − j − Σd_i)/d₁⌉).
pub fn mu(profile: &DegreeProfile, j: u32) -> Result<u32> {
    check_j(profile, j)?;
    let sum: i64 = profile.degrees.iter().map(|&d| d as i64).sum();
    Ok(j + ceil_div_clamped(profile.ambient() - j as i64 - sum, profile.d1()))
}

/// ν_j = j + max(0, ⌈(n − j − Σd_i*)/d₁⌉).
pub fn nu(profile: &DegreeProfile, j: u32) -> Result<u32> {
    check_j(profile, j)?;
    let sum: i64 = d_star(profile).iter().map(|&d| d as i64).sum();
    Ok(j + ceil_div_clamped(profile.ambient() - j as i64 - sum, profile.d1()))
}

/// ε_m = max(0, ⌈(n − (d₁ + … + d_{r−m} + d*_{r−m+1} + … + d*_r))/d₁⌉)
/// for 0 ≤ m ≤ dim Z − (n − r).
pub fn eps(profile: &DegreeProfile, m: u32) -> Result<u32> {
    let top = profile
        .eps_range()
        .ok_or_else(|| Error::Range("dim Z < n − r: no ε is defined".into()))?;
    if m > top {
        return Err(Error::Range(format!("m = {m} outside 0..={top}")));
    }
    let split = (profile.r() - m) as usize;
    let ds = d_star(profile);
    let sum: i64 = profile.degrees[..split].iter().map(|&d| d as i64).sum::<i64>()
        + ds[split..].iter().map(|&d| d as i64).sum::<i64>();
    Ok(ceil_div_clamped(profile.ambient() - sum, profile.d1()))
}

/// [max(0, n − r), 2·dim Z]: degrees where H^i_c(Z) may be nonzero.
pub fn degree_window(profile: &DegreeProfile) -> (u32, u32) {
    ((profile.n as i64 - profile.r() as i64).max(0) as u32, 2 * profile.dim)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub profile: DegreeProfile,
    pub d_star: Vec<u32>,
    pub mu: Vec<u32>,
    pub nu: Vec<u32>,
    pub eps: Vec<u32>,
    pub window: (u32, u32),
}

pub fn bound_report(profile: &DegreeProfile) -> Result<BoundReport> {
    let js = 0..=profile.dim;
    Ok(BoundReport {
        profile: profile.clone(),
        d_star: d_star(profile),
        mu: js.clone().map(|j| mu(profile, j)).collect::<Result<_>>()?,
        nu: js.map(|j| nu(profile, j)).collect::<Result<_>>()?,
        eps: match profile.eps_range() {
            Some(top) => (0..=top).map(|m| eps(profile, m)).collect::<Result<_>>()?,
            None => Vec::new(),
        },
        window: degree_window(profile),
    })
}

impl BoundReport {
    /// The six structural invariants, each as (name, holds).
    pub fn invariants(&self) -> Vec<(&'static str, bool)> {
        let ci = self.profile.is_complete_intersection();
        vec![
            ("nu_dominates_mu", self.nu.iter().zip(&self.mu).all(|(n, m)| n >= m)),
            ("nu_nondecreasing", self.nu.windows(2).all(|w| w[1] >= w[0])),
            ("eps_nondecreasing", self.eps.windows(2).all(|w| w[1] >= w[0])),
            ("eps_first_is_mu0", self.eps.first().is_none_or(|&e| e == self.mu[0])),
            ("eps_last_is_nu0", self.eps.last().is_none_or(|&e| e == self.nu[0])),
            ("complete_intersection_nu_is_mu", !ci || self.nu == self.mu),
        ]
    }
}

/// The profile of a system: dim Z from the override if present, else
/// estimated.
pub fn system_profile(system: &PolySystem, projective: bool, seed: u64, limits: &Limits) -> Result<DegreeProfile> {
    let dim = match system.dim_override() {
        Some(d) => d,
        None => estimate_dimension(system, limits.dimension_trials, seed, limits)?,
    };
    DegreeProfile::new(system.n() as u32, system.degrees(), dim, projective)
}

/// Passes iff ord_q(c_k) ≥ μ·k for every k ≥ 1, i.e. iff every reciprocal
/// root of the polynomial (constant term 1) is an algebraic integer
/// divisible by q^μ.
pub fn divisibility_certificate(poly: &[BigInt], q: u64, mu: u32) -> Result<bool> {
    if poly.first().is_none_or(|c| c != &BigInt::from(1)) {
        return Err(Error::Series("divisibility certificate needs constant term 1".into()));
    }
    let (p, a) = prime_power(q)?;
    Ok(poly.iter().enumerate().skip(1).all(|(k, c)| {
        c.is_zero() || ord_p(c, p) >= a as u64 * mu as u64 * k as u64
    }))
}

fn prime_power(q: u64) -> Result<(u64, u32)> {
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| Error::Range(format!("q = {q}")))?;
    let mut a = 0;
    let mut x = q;
    while x % p == 0 {
        x /= p;
        a += 1;
    }
    if x != 1 {
        return Err(Error::Range(format!("{q} is not a prime power")));
    }
    Ok((p, a))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxKatzVerdict {
    pub mu0: u32,
    pub counts: Vec<u64>,
    /// (q^m)^{μ₀} | N_m for every m ≤ M.
    pub divisibility: bool,
    /// The reconstructed zeta function, when Padé succeeded.
    pub zeta: Option<RationalFunction>,
    pub pade_degree: Option<usize>,
    pub numerator_slopes: Vec<BigRational>,
    pub denominator_slopes: Vec<BigRational>,
    /// All slopes ≥ μ₀; None when reconstruction failed.
    pub slopes_ok: Option<bool>,
    pub reconstruction_error: Option<String>,
}

impl AxKatzVerdict {
    pub fn passes(&self) -> bool {
        self.divisibility && self.slopes_ok == Some(true)
    }
}

/// Counts N_1..N_M, checks (q^m)^{μ₀} | N_m, reconstructs ζ_Z at degree
/// ≤ B and checks every Newton slope of numerator and denominator.
pub fn ax_katz_check(system: &PolySystem, terms: u32, pade: usize, cap: u64) -> Result<AxKatzVerdict> {
    let q = system.q();
    let (p, a) = prime_power(q)?;
    let sum: i64 = system.degrees().iter().map(|&d| d as i64).sum();
    let d1 = system.degrees().first().copied().unwrap_or(1) as i64;
    let mu0 = ceil_div_clamped(system.n() as i64 - sum, d1);
    let all: Vec<usize> = (0..system.r()).collect();
    let ns = counts(system, &all, terms, Region::Affine, cap)?;
    let divisibility = ns.iter().enumerate().all(|(i, &n)| {
        let m = i as u32 + 1;
        n == 0 || ord_p(&BigInt::from(n), p) >= (a * m * mu0) as u64
    });
    let series = zeta_series(&ns);
    let mut verdict = AxKatzVerdict {
        mu0,
        counts: ns,
        divisibility,
        zeta: None,
        pade_degree: None,
        numerator_slopes: Vec::new(),
        denominator_slopes: Vec::new(),
        slopes_ok: None,
        reconstruction_error: None,
    };
    match pade_reconstruct_auto(&series, 0, pade) {
        Ok((rf, b)) => {
            let slopes = |poly: &[BigInt]| -> Result<Vec<BigRational>> {
                Ok(newton_polygon(poly, p, a)?.slopes())
            };
            verdict.numerator_slopes = slopes(&rf.numerator)?;
            verdict.denominator_slopes = slopes(&rf.denominator)?;
            let floor = BigRational::from_integer(mu0.into());
            verdict.slopes_ok = Some(
                verdict
                    .numerator_slopes
                    .iter()
                    .chain(&verdict.denominator_slopes)
                    .all(|s| !s.is_negative() && *s >= floor),
            );
            verdict.zeta = Some(rf);
            verdict.pade_degree = Some(b);
        }
        Err(e) => verdict.reconstruction_error = Some(e.to_string()),
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{make_extension, FieldSpec};
    use crate::geometry::MultiPoly;
    use proptest::prelude::*;

    fn profile(n: u32, d: &[u32], dim: i32) -> DegreeProfile {
        DegreeProfile::new(n, d.to_vec(), dim, false).unwrap()
    }

    #[test]
    fn d_star_examples() {
        assert_eq!(d_star(&profile(6, &[2, 2, 2], 4)), vec![2, 2, 1]);
        assert_eq!(d_star(&profile(6, &[3, 2, 2], 4)), vec![3, 2, 0]);
        assert_eq!(d_star(&profile(5, &[3, 2], 3)), vec![3, 2]);
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(mu(&profile(3, &[2], 2), 0).unwrap(), 1);
        let p = profile(6, &[2, 2, 2], 4);
        assert_eq!(nu(&p, 0).unwrap(), 1);
        assert_eq!(mu(&p, 0).unwrap(), 0);
        assert!(matches!(mu(&p, 5), Err(Error::Range(_))));
        assert!(matches!(eps(&p, 2), Err(Error::Range(_))));
        assert_eq!(eps(&p, 0).unwrap(), 0);
        assert_eq!(eps(&p, 1).unwrap(), 1);
        assert!(matches!(DegreeProfile::new(2, vec![1], -1, false), Err(Error::EmptyVariety)));
    }

    #[test]
    fn projective_shift() {
        // Plane cubic in ℙ²: ν_0(3; 3) = 0. Quadric surface in ℙ³: ν_0(4; 2) = 1.
        let cubic = DegreeProfile::new(2, vec![3], 1, true).unwrap();
        assert_eq!(nu(&cubic, 0).unwrap(), 0);
        let quadric = DegreeProfile::new(3, vec![2], 2, true).unwrap();
        assert_eq!(nu(&quadric, 0).unwrap(), 1);
        assert_eq!(nu(&quadric, 1).unwrap(), 2);
    }

    #[test]
    fn window_examples() {
        assert_eq!(degree_window(&profile(2, &[1, 1], 0)), (0, 0));
        assert_eq!(degree_window(&profile(4, &[2, 2], 2)), (2, 4));
        assert_eq!(degree_window(&profile(2, &[1, 1, 1], 0)), (0, 0));
    }

    #[test]
    fn certificate_examples() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(divisibility_certificate(&b(&[1, -9]), 3, 2).unwrap());
        assert!(divisibility_certificate(&b(&[1, -3, 27]), 3, 1).unwrap());
        assert!(!divisibility_certificate(&b(&[1, -1]), 3, 1).unwrap());
        assert!(divisibility_certificate(&b(&[2, -1]), 3, 1).is_err());
    }

    fn system(p: u32, n: usize, polys: &[&[(i64, &[u32])]]) -> PolySystem {
        let spec = FieldSpec::prime(p).unwrap();
        let f = make_extension(&spec, 1, 1 << 20).unwrap();
        let polys = polys
            .iter()
            .map(|t| MultiPoly::from_terms(n, t.iter().map(|(c, e)| (e.to_vec(), f.from_int(*c))), &f).unwrap())
            .collect();
        PolySystem::new(spec, n, polys).unwrap()
    }

    #[test]
    fn ax_katz_examples() {
        let plane = system(3, 3, &[&[(1, &[1, 0, 0]), (1, &[0, 1, 0]), (1, &[0, 0, 1])]]);
        let v = ax_katz_check(&plane, 4, 2, 1 << 20).unwrap();
        assert_eq!(v.mu0, 2);
        assert_eq!(v.counts, vec![9, 81, 729, 6561]);
        assert!(v.passes());
        let hyperbola = system(3, 2, &[&[(1, &[1, 1]), (-1, &[0, 0])]]);
        let v = ax_katz_check(&hyperbola, 6, 3, 1 << 20).unwrap();
        assert_eq!(v.mu0, 0);
        assert!(v.passes(), "{v:?}");
    }

    fn arb_profile() -> impl Strategy<Value = DegreeProfile> {
        (1u32..9, proptest::collection::vec(1u32..6, 1..5), any::<bool>(), any::<u32>()).prop_map(
            |(n, degrees, projective, pick)| {
                let r = degrees.len() as u32;
                let lo = n.saturating_sub(r);
                let dim = lo + pick % (n - lo + 1);
                DegreeProfile::new(n, degrees, dim as i32, projective).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn report_invariants(profile in arb_profile()) {
            let report = bound_report(&profile).unwrap();
            for (name, ok) in report.invariants() {
                prop_assert!(ok, "{} fails for {:?}", name, report);
            }
            prop_assert!(report.d_star.iter().zip(&profile.degrees).all(|(s, d)| s <= d));
        }

        #[test]
        fn certificate_is_multiplicative(a in proptest::collection::vec(-30i64..30, 0..4), b in proptest::collection::vec(-30i64..30, 0..4), mu in 0u32..3) {
            let q = 3u64;
            // Scale coefficient k by q^{μk} so that both factors pass.
            let lift = |v: &[i64]| {
                let mut out = vec![BigInt::from(1)];
                for (k, &c) in v.iter().enumerate() {
                    out.push(BigInt::from(c) * BigInt::from(q).pow(mu * (k as u32 + 1)));
                }
                out
            };
            let (pa, pb) = (lift(&a), lift(&b));
            prop_assert!(divisibility_certificate(&pa, q, mu).unwrap());
            prop_assert!(divisibility_certificate(&pb, q, mu).unwrap());
            let mut prod = vec![BigInt::zero(); pa.len() + pb.len() - 1];
            for (i, x) in pa.iter().enumerate() {
                for (j, y) in pb.iter().enumerate() {
                    prod[i + j] += x * y;
                }
            }
            prop_assert!(divisibility_certificate(&prod, q, mu).unwrap());
        }
    }
}
