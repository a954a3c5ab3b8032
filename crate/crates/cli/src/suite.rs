//! Reproducible test systems: pinned worked examples plus seeded random
//! systems within size limits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zetakit::fields::{make_extension, FieldSpec};
use zetakit::geometry::{MultiPoly, PolySystem};

/// Builds a system over F_p from (coefficient, exponent) term lists.
pub fn system_from_terms(p: u32, n: usize, polys: &[&[(i64, &[u32])]]) -> PolySystem {
    let spec = FieldSpec::prime(p).expect("prime");
    let f = make_extension(&spec, 1, u64::MAX).expect("prime field");
    let polys = polys
        .iter()
        .map(|terms| {
            MultiPoly::from_terms(n, terms.iter().map(|(c, e)| (e.to_vec(), f.from_int(*c))), &f).expect("valid terms")
        })
        .collect();
    PolySystem::new(spec, n, polys).expect("valid system")
}

/// y² = x³ − x over F_3 (x = x₁, y = x₂): the nonsingular plane cubic of the
/// cancellation example.
pub fn intro_cubic() -> PolySystem {
    system_from_terms(3, 2, &[&[(1, &[0, 2]), (-1, &[3, 0]), (1, &[1, 0])]])
}

/// x₁x₂ − 1 over F_5, a copy of G_m.
pub fn hyperbola() -> PolySystem {
    system_from_terms(5, 2, &[&[(1, &[1, 1]), (-1, &[0, 0])]])
}

/// x₁ + x₂ + x₃ and x₁ − x₂ over F_3: a line in A³.
pub fn linear_forms() -> PolySystem {
    system_from_terms(3, 3, &[&[(1, &[1, 0, 0]), (1, &[0, 1, 0]), (1, &[0, 0, 1])], &[(1, &[1, 0, 0]), (-1, &[0, 1, 0])]])
}

pub fn pinned_fixtures() -> Vec<(&'static str, PolySystem)> {
    vec![("intro-cubic", intro_cubic()), ("hyperbola", hyperbola()), ("linear-forms", linear_forms())]
}

/// Shape limits for random systems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteSizes {
    pub count: usize,
    pub primes: Vec<u32>,
    pub max_n: usize,
    pub max_r: usize,
    pub max_degree: u32,
    pub max_terms: usize,
    /// Require p^n ≤ this (affine enumeration budget per extension degree).
    pub max_points: Option<u64>,
    /// Require p^{n+r} ≤ this (budget for the Dwork polynomial's torus).
    pub max_dwork_points: Option<u64>,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes {
            count: 8,
            primes: vec![2, 3, 5],
            max_n: 4,
            max_r: 3,
            max_degree: 3,
            max_terms: 4,
            max_points: None,
            max_dwork_points: None,
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, p: u32, n: usize, sizes: &SuiteSizes) -> MultiPoly {
    let spec = FieldSpec::prime(p).expect("prime");
    let f = make_extension(&spec, 1, u64::MAX).expect("prime field");
    let d = rng.gen_range(1..=sizes.max_degree);
    let mut terms = Vec::new();
    // One term of exact degree d keeps deg f = d.
    let mut top = vec![0u32; n];
    for _ in 0..d {
        top[rng.gen_range(0..n)] += 1;
    }
    terms.push((top, f.from_int(rng.gen_range(1..p) as i64)));
    for _ in 1..rng.gen_range(1..=sizes.max_terms) {
        let k = rng.gen_range(0..=d);
        let mut e = vec![0u32; n];
        for _ in 0..k {
            e[rng.gen_range(0..n)] += 1;
        }
        terms.push((e, f.from_int(rng.gen_range(1..p) as i64)));
    }
    let poly = MultiPoly::from_terms(n, terms, &f).expect("valid terms");
    if poly.degree() == 0 {
        // Cancellation wiped the top term; fall back to a coordinate.
        MultiPoly::var(n, 0)
    } else {
        poly
    }
}

fn fits(p: u32, n: usize, r: usize, sizes: &SuiteSizes) -> bool {
    let pow = |k: usize| (p as u64).checked_pow(k as u32);
    sizes.max_points.is_none_or(|b| pow(n).is_some_and(|x| x <= b))
        && sizes.max_dwork_points.is_none_or(|b| pow(n + r).is_some_and(|x| x <= b))
}

/// `sizes.count` random systems, identical for identical (seed, sizes).
pub fn random_systems(seed: u64, sizes: &SuiteSizes) -> Vec<PolySystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(sizes.count);
    while out.len() < sizes.count {
        let p = sizes.primes[rng.gen_range(0..sizes.primes.len())];
        let n = rng.gen_range(1..=sizes.max_n);
        let r = rng.gen_range(1..=sizes.max_r);
        if !fits(p, n, r, sizes) {
            continue;
        }
        let polys: Vec<MultiPoly> = (0..r).map(|_| random_poly(&mut rng, p, n, sizes)).collect();
        let spec = FieldSpec::prime(p).expect("prime");
        out.push(PolySystem::new(spec, n, polys).expect("positive degrees"));
    }
    out
}

/// The pinned fixtures followed by the random systems.
pub fn generate_suite(seed: u64, sizes: &SuiteSizes) -> Vec<(String, PolySystem)> {
    pinned_fixtures()
        .into_iter()
        .map(|(name, s)| (name.to_string(), s))
        .chain(random_systems(seed, sizes).into_iter().enumerate().map(|(i, s)| (format!("random-{i}"), s)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_deterministic() {
        let sizes = SuiteSizes::default();
        let a: Vec<String> = generate_suite(1, &sizes).iter().map(|(_, s)| s.to_json()).collect();
        let b: Vec<String> = generate_suite(1, &sizes).iter().map(|(_, s)| s.to_json()).collect();
        assert_eq!(a, b);
        let c: Vec<String> = generate_suite(2, &sizes).iter().map(|(_, s)| s.to_json()).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn suite_contains_the_cubic() {
        for seed in 0..3 {
            let suite = generate_suite(seed, &SuiteSizes::default());
            assert!(suite.iter().any(|(name, s)| name == "intro-cubic" && s.to_json() == intro_cubic().to_json()));
        }
    }

    #[test]
    fn sizes_are_respected() {
        let sizes = SuiteSizes { count: 40, max_n: 3, max_r: 2, max_degree: 2, primes: vec![3, 5], max_dwork_points: Some(243), ..Default::default() };
        for s in random_systems(9, &sizes) {
            assert!(s.n() <= 3 && s.r() <= 2 && [3, 5].contains(&s.spec().p));
            assert!(s.degrees().iter().all(|&d| (1..=2).contains(&d)));
            assert!((s.spec().p as u64).pow((s.n() + s.r()) as u32) <= 243);
        }
    }
}
