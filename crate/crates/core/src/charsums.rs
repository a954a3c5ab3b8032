//! Exact arithmetic in ℤ[ζ_p] (with rational coefficients where a division
//! by an integer is needed), the additive character Ψ, toric exponential
//! sums, and the inclusion–exclusion identity tying the exponential sums of
//! g = Σ x_{n+i} f_i to point counts of the coordinate strata Z*_J.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fields::{make_extension, FieldSpec};
use crate::geometry::{count_polys, fold_points, MultiPoly, PolySystem, Region};
use crate::fields::FieldElement;
use crate::series::{Coefficient, TruncatedSeries};

/// An element of ℚ(ζ_p) in the basis 1, ζ, …, ζ^{p−2}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicElement {
    p: u32,
    coords: Vec<BigRational>,
}

impl CyclotomicElement {
    pub fn zero(p: u32) -> Self {
        CyclotomicElement { p, coords: vec![BigRational::zero(); p as usize - 1] }
    }

    pub fn from_int(p: u32, n: impl Into<BigInt>) -> Self {
        Self::from_rational(p, BigRational::from_integer(n.into()))
    }

    pub fn from_rational(p: u32, x: BigRational) -> Self {
        let mut out = Self::zero(p);
        out.coords[0] = x;
        out
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    /// ζ_p^k.
    pub fn zeta_power(p: u32, k: u64) -> Self {
        let mut v = vec![BigRational::zero(); p as usize];
        v[(k % p as u64) as usize] = BigRational::one();
        Self::reduce(p, v)
    }

    /// Σ v_i ζ^i for a length-p vector, reduced with ζ^{p−1} = −Σ_{i<p−1} ζ^i.
    pub fn reduce(p: u32, v: Vec<BigRational>) -> Self {
        assert_eq!(v.len(), p as usize);
        let top = v[p as usize - 1].clone();
        let coords = v[..p as usize - 1].iter().map(|a| a - &top).collect();
        CyclotomicElement { p, coords }
    }

    /// Σ_h hist[h]·ζ^h.
    pub fn from_histogram(p: u32, hist: &[u64]) -> Self {
        Self::reduce(p, hist.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    fn padded(&self) -> Vec<BigRational> {
        let mut v = self.coords.clone();
        v.push(BigRational::zero());
        v
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    /// The Galois automorphism ζ ↦ ζ^c, c prime to p.
    pub fn galois(&self, c: u32) -> Self {
        assert!(c % self.p != 0, "ζ ↦ ζ^c needs c prime to p");
        let mut v = vec![BigRational::zero(); self.p as usize];
        for (i, a) in self.coords.iter().enumerate() {
            let j = (i as u64 * c as u64 % self.p as u64) as usize;
            v[j] += a;
        }
        Self::reduce(self.p, v)
    }
}

impl Coefficient for CyclotomicElement {
    fn zero_like(&self) -> Self {
        Self::zero(self.p)
    }
    fn one_like(&self) -> Self {
        Self::one(self.p)
    }
    fn add(&self, other: &Self) -> Self {
        CyclotomicElement {
            p: self.p,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }
    fn sub(&self, other: &Self) -> Self {
        CyclotomicElement {
            p: self.p,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        // Multiply in ℚ[X]/(X^p − 1), then reduce mod Φ_p.
        let p = self.p as usize;
        let (a, b) = (self.padded(), other.padded());
        let mut v = vec![BigRational::zero(); p];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    v[(i + j) % p] += x * y;
                }
            }
        }
        Self::reduce(self.p, v)
    }
    fn neg(&self) -> Self {
        CyclotomicElement { p: self.p, coords: self.coords.iter().map(|a| -a).collect() }
    }
    fn scale_int(&self, k: &BigInt) -> Self {
        let k = BigRational::from_integer(k.clone());
        CyclotomicElement { p: self.p, coords: self.coords.iter().map(|a| a * &k).collect() }
    }
    fn div_int(&self, k: &BigInt) -> Self {
        let k = BigRational::from_integer(k.clone());
        CyclotomicElement { p: self.p, coords: self.coords.iter().map(|a| a / &k).collect() }
    }
    fn vanishes(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Ψ(x) = ζ_p^{Tr(x)}, Tr the absolute trace of the field `x` lives in.
pub fn character(field: &crate::fields::FiniteField, x: FieldElement) -> CyclotomicElement {
    CyclotomicElement::zeta_power(field.p(), field.trace(x) as u64)
}

/// S*_m(g) = Σ_{x ∈ G_m^N(F_{q^m})} Ψ(g(x)), with N = g.n().
pub fn toric_exp_sum(g: &MultiPoly, spec: &FieldSpec, m: u32, cap: u64) -> Result<CyclotomicElement> {
    let ext = make_extension(spec, m, cap)?;
    let cg = g.compile(&ext);
    let p = spec.p as usize;
    let hist = fold_points(
        &ext,
        g.n(),
        Region::Torus,
        cap,
        || vec![0u64; p],
        |h, x| h[ext.trace(cg.eval(&ext, x)) as usize] += 1,
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    )?;
    Ok(CyclotomicElement::from_histogram(spec.p, &hist))
}

/// S*_1, …, S*_M for one polynomial in N variables.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpSumTable {
    pub torus_dim: usize,
    pub sums: Vec<CyclotomicElement>,
}

pub fn exp_sum_table(g: &MultiPoly, spec: &FieldSpec, terms: u32, cap: u64) -> Result<ExpSumTable> {
    let sums = (1..=terms).map(|m| toric_exp_sum(g, spec, m, cap)).collect::<Result<_>>()?;
    Ok(ExpSumTable { torus_dim: g.n(), sums })
}

/// g = Σ_i x_{n+i} f_i in N = n + r variables (the zero polynomial in n
/// variables when r = 0).
pub fn dwork_construction(system: &PolySystem) -> MultiPoly {
    let n = system.n();
    let big_n = n + system.r();
    system
        .polys()
        .iter()
        .enumerate()
        .fold(MultiPoly::zero(big_n), |acc, (i, f)| {
            acc.add(&f.extend_vars(big_n).mul_var(n + i), system.field())
        })
}

/// Both sides of S*_m(g) = Σ_J (−1)^{r−|J|} q^{m|J|} |Z*_J(F_{q^m})|.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityRecord {
    pub m: u32,
    pub exp_sum: CyclotomicElement,
    pub count_side: BigInt,
    /// (J as 0-based indices, |Z*_J(F_{q^m})|).
    pub strata: Vec<(Vec<usize>, u64)>,
}

fn subsets(r: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << r).map(move |mask| (0..r).filter(|&i| mask >> i & 1 == 1).collect())
}

/// Torus counts |Z*_J(F_{q^m})| for every J ⊆ {0..r}.
pub fn strata_counts(system: &PolySystem, m: u32, cap: u64) -> Result<Vec<(Vec<usize>, u64)>> {
    subsets(system.r())
        .map(|j| {
            let polys = system.subset_polys(&j)?;
            let c = count_polys(system.spec(), system.n(), &polys, m, Region::Torus, cap)?;
            Ok((j, c))
        })
        .collect()
}

/// Evaluates both sides of the identity; a mismatch is an error.
pub fn inclusion_exclusion_check(system: &PolySystem, m: u32, cap: u64) -> Result<IdentityRecord> {
    let g = dwork_construction(system);
    let exp_sum = toric_exp_sum(&g, system.spec(), m, cap)?;
    let strata = strata_counts(system, m, cap)?;
    let r = system.r();
    let qm = BigInt::from(system.q()).pow(m);
    let count_side = strata.iter().fold(BigInt::zero(), |acc, (j, c)| {
        let term = qm.pow(j.len() as u32) * BigInt::from(*c);
        if (r - j.len()) % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    });
    if exp_sum != CyclotomicElement::from_int(system.spec().p, count_side.clone()) {
        return Err(Error::IdentityMismatch { m });
    }
    Ok(IdentityRecord { m, exp_sum, count_side, strata })
}

/// L*(t) = exp(Σ S*_m(g) t^m / m) to order M, over ℚ(ζ_p).
pub fn l_star_series(system: &PolySystem, terms: u32, cap: u64) -> Result<TruncatedSeries<CyclotomicElement>> {
    let g = dwork_construction(system);
    let table = exp_sum_table(&g, system.spec(), terms, cap)?;
    Ok(TruncatedSeries::exp_power_sums(CyclotomicElement::one(system.spec().p), &table.sums))
}

/// The rational coefficients of a cyclotomic series, if all are rational.
pub fn rational_part(series: &TruncatedSeries<CyclotomicElement>) -> Option<TruncatedSeries<BigRational>> {
    series
        .coeffs()
        .iter()
        .map(CyclotomicElement::as_rational)
        .collect::<Option<Vec<_>>>()
        .map(TruncatedSeries::new)
}

/// ∏_J ζ_{Z*_J}(q^{|J|} t)^{(−1)^{r−|J|}} to order M, from torus counts.
pub fn alternating_zeta_product(system: &PolySystem, terms: u32, cap: u64) -> Result<TruncatedSeries<BigRational>> {
    let r = system.r();
    let q = BigInt::from(system.q());
    let mut per_subset: Vec<(Vec<usize>, Vec<u64>)> =
        subsets(r).map(|j| (j, Vec::with_capacity(terms as usize))).collect();
    for m in 1..=terms {
        for (j, c) in strata_counts(system, m, cap)? {
            per_subset.iter_mut().find(|(k, _)| *k == j).expect("same subsets").1.push(c);
        }
    }
    let mut acc = TruncatedSeries::constant(BigRational::one(), terms as usize);
    for (j, counts) in per_subset {
        let zeta = crate::series::zeta_series(&counts).scale_variable(&q.pow(j.len() as u32));
        acc = if (r - j.len()) % 2 == 0 { acc.mul(&zeta) } else { acc.div(&zeta)? };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FiniteField;
    use proptest::prelude::*;

    const CAP: u64 = 1 << 26;

    fn prime_field(p: u32) -> (FieldSpec, FiniteField) {
        let spec = FieldSpec::prime(p).unwrap();
        let f = make_extension(&spec, 1, CAP).unwrap();
        (spec, f)
    }

    fn poly(f: &FiniteField, n: usize, terms: &[(i64, &[u32])]) -> MultiPoly {
        MultiPoly::from_terms(n, terms.iter().map(|(c, e)| (e.to_vec(), f.from_int(*c))), f).unwrap()
    }

    #[test]
    fn character_values() {
        let (_, f3) = prime_field(3);
        assert_eq!(character(&f3, f3.zero()), CyclotomicElement::one(3));
        let z = character(&f3, f3.one());
        let half = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(z.coords(), &[half(0), half(1)]);
        let (_, f5) = prime_field(5);
        let total = f5.elements().fold(CyclotomicElement::zero(5), |acc, x| acc.add(&character(&f5, x)));
        assert!(total.vanishes());
    }

    #[test]
    fn orthogonality_in_extensions() {
        for (p, m) in [(2, 3), (3, 2), (5, 2), (7, 1)] {
            let spec = FieldSpec::prime(p).unwrap();
            let f = make_extension(&spec, m, CAP).unwrap();
            let total = f.elements().fold(CyclotomicElement::zero(p), |acc, x| acc.add(&character(&f, x)));
            assert!(total.vanishes(), "p = {p}, m = {m}");
        }
    }

    #[test]
    fn zeta_is_a_root_of_unity() {
        for p in [2, 3, 5, 7] {
            let z = CyclotomicElement::zeta_power(p, 1);
            let mut acc = CyclotomicElement::one(p);
            for _ in 0..p {
                acc = acc.mul(&z);
            }
            assert_eq!(acc, CyclotomicElement::one(p));
        }
    }

    #[test]
    fn exp_sum_examples() {
        let (s3, f3) = prime_field(3);
        let zero = MultiPoly::zero(2);
        assert_eq!(toric_exp_sum(&zero, &s3, 1, CAP).unwrap(), CyclotomicElement::from_int(3, 4));
        let (s5, f5) = prime_field(5);
        let x = poly(&f5, 1, &[(1, &[1])]);
        assert_eq!(toric_exp_sum(&x, &s5, 1, CAP).unwrap(), CyclotomicElement::from_int(5, -1));
        let g = poly(&f3, 2, &[(1, &[1, 1]), (-1, &[0, 1])]);
        assert_eq!(toric_exp_sum(&g, &s3, 1, CAP).unwrap(), CyclotomicElement::one(3));
    }

    #[test]
    fn construction_examples() {
        let s = PolySystem::from_json(r#"{"p":3,"n":1,"polys":[{"terms":[{"c":1,"e":[1]}]}]}"#).unwrap();
        let g = dwork_construction(&s);
        let (_, f3) = prime_field(3);
        assert_eq!(g, poly(&f3, 2, &[(1, &[1, 1])]));
        let s = PolySystem::from_json(
            r#"{"p":3,"n":2,"polys":[{"terms":[{"c":1,"e":[1,0]},{"c":1,"e":[0,1]}]},{"terms":[{"c":1,"e":[1,1]}]}]}"#,
        )
        .unwrap();
        // Sorted by degree: x1x2 first.
        let g = dwork_construction(&s);
        assert_eq!(g.degree(), 3);
        assert_eq!(g, poly(&f3, 4, &[(1, &[1, 1, 1, 0]), (1, &[1, 0, 0, 1]), (1, &[0, 1, 0, 1])]));
    }

    #[test]
    fn identity_examples() {
        let s = PolySystem::from_json(r#"{"p":3,"n":1,"polys":[{"terms":[{"c":1,"e":[1]},{"c":-1,"e":[0]}]}]}"#)
            .unwrap();
        let rec = inclusion_exclusion_check(&s, 1, CAP).unwrap();
        assert_eq!(rec.count_side, BigInt::one());
        assert_eq!(rec.exp_sum, CyclotomicElement::one(3));
        // Empty torus locus: x1 = 0 has no torus points.
        let s = PolySystem::from_json(r#"{"p":5,"n":2,"polys":[{"terms":[{"c":1,"e":[1,0]}]}]}"#).unwrap();
        for m in 1..=2 {
            inclusion_exclusion_check(&s, m, CAP).unwrap();
        }
    }

    #[test]
    fn l_star_of_zero_polynomial() {
        let s = PolySystem::new(FieldSpec::prime(3).unwrap(), 1, vec![]).unwrap();
        let l = rational_part(&l_star_series(&s, 6, CAP).unwrap()).unwrap();
        let expected = crate::series::RationalFunction::from_integers(&[1, -1], &[1, -3]).unwrap().expand(6);
        assert_eq!(l, expected);
    }

    #[test]
    fn l_star_matches_alternating_product() {
        let s = PolySystem::from_json(r#"{"p":3,"n":1,"polys":[{"terms":[{"c":1,"e":[1]},{"c":-1,"e":[0]}]}]}"#)
            .unwrap();
        let l = rational_part(&l_star_series(&s, 5, CAP).unwrap()).unwrap();
        assert_eq!(l, alternating_zeta_product(&s, 5, CAP).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn galois_equivariance(
            p in prop_oneof![Just(3u32), Just(5)],
            terms in proptest::collection::vec((1i64..5, 0u32..3, 0u32..3), 1..4),
            c in 1u32..5,
        ) {
            prop_assume!(c % p != 0);
            let (spec, f) = prime_field(p);
            let g = MultiPoly::from_terms(2, terms.iter().map(|&(a, e1, e2)| (vec![e1, e2], f.from_int(a))), &f).unwrap();
            let lhs = toric_exp_sum(&g, &spec, 1, CAP).unwrap().galois(c);
            let rhs = toric_exp_sum(&g.scale(f.from_int(c as i64), &f), &spec, 1, CAP).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cyclotomic_ring_axioms(
            p in prop_oneof![Just(2u32), Just(3), Just(5), Just(7)],
            a in proptest::collection::vec(-9i64..9, 7),
            b in proptest::collection::vec(-9i64..9, 7),
            c in proptest::collection::vec(-9i64..9, 7),
        ) {
            let mk = |v: &[i64]| CyclotomicElement::reduce(p, v[..p as usize].iter().map(|&x| BigRational::from_integer(x.into())).collect());
            let (a, b, c) = (mk(&a), mk(&b), mk(&c));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }
    }
}
