//! Truncated power series over exact coefficient rings, rational functions
//! with integer coefficients, and the operations built on them: zeta series
//! from point counts, Dwork's δ and its inverse, Padé reconstruction,
//! p-adic Newton polygons and the weak-visibility search.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ring operations a series coefficient needs. Division is only by
/// nonzero integers.
pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale_int(&self, k: &BigInt) -> Self;
    fn div_int(&self, k: &BigInt) -> Self;
    fn vanishes(&self) -> bool;
}

impl Coefficient for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale_int(&self, k: &BigInt) -> Self {
        self * BigRational::from_integer(k.clone())
    }
    fn div_int(&self, k: &BigInt) -> Self {
        self / BigRational::from_integer(k.clone())
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// c₀ + c₁t + … + c_M t^M + O(t^{M+1}).
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> TruncatedSeries<T> {
    /// `coeffs` must be nonempty; its length is order + 1.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs c_0");
        TruncatedSeries { coeffs }
    }

    /// The constant series `one` to order `m`.
    pub fn constant(one: T, m: usize) -> Self {
        let zero = one.zero_like();
        let mut coeffs = vec![zero; m + 1];
        coeffs[0] = one;
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn truncate(&self, m: usize) -> Self {
        TruncatedSeries { coeffs: self.coeffs[..=m.min(self.order())].to_vec() }
    }

    fn require_unit_constant(&self, what: &str) -> Result<()> {
        if self.coeffs[0] != self.coeffs[0].one_like() {
            return Err(Error::Series(format!("{what} needs constant term 1")));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=m).map(|k| self.coeffs[k].add(&other.coeffs[k])).collect(),
        }
    }

    /// Product to the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let m = self.order().min(other.order());
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; m + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(m + 1) {
            if a.vanishes() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(m + 1 - i) {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Multiplicative inverse of a series with constant term 1.
    pub fn inverse(&self) -> Result<Self> {
        self.require_unit_constant("inversion")?;
        let mut out: Vec<T> = Vec::with_capacity(self.coeffs.len());
        out.push(self.coeffs[0].one_like());
        for k in 1..self.coeffs.len() {
            let mut acc = self.coeffs[0].zero_like();
            for j in 1..=k {
                acc = acc.sub(&self.coeffs[j].mul(&out[k - j]));
            }
            out.push(acc);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Γ(t) ↦ Γ(λt) for an integer λ.
    pub fn scale_variable(&self, lambda: &BigInt) -> Self {
        let mut pow = BigInt::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c.scale_int(&pow);
                pow *= lambda;
                out
            })
            .collect();
        TruncatedSeries { coeffs }
    }

    /// exp(Σ_{k≥1} S_k t^k / k) to order `sums.len()`, via
    /// k·e_k = Σ_{j=1}^{k} S_j e_{k−j}.
    pub fn exp_power_sums(one: T, sums: &[T]) -> Self {
        let mut e: Vec<T> = vec![one.clone()];
        for k in 1..=sums.len() {
            let mut acc = one.zero_like();
            for j in 1..=k {
                acc = acc.add(&sums[j - 1].mul(&e[k - j]));
            }
            e.push(acc.div_int(&BigInt::from(k)));
        }
        TruncatedSeries { coeffs: e }
    }

    /// The S_k with self = exp(Σ S_k t^k / k), k = 1..=order.
    pub fn power_sums(&self) -> Result<Vec<T>> {
        self.require_unit_constant("logarithm")?;
        let mut s: Vec<T> = Vec::with_capacity(self.order());
        for k in 1..=self.order() {
            let mut acc = self.coeffs[k].scale_int(&BigInt::from(k));
            for j in 1..k {
                acc = acc.sub(&s[j - 1].mul(&self.coeffs[k - j]));
            }
            s.push(acc);
        }
        Ok(s)
    }
}

impl TruncatedSeries<BigRational> {
    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// The integer coefficients, if every coefficient is integral.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }
}

/// ζ(t) = exp(Σ N_m t^m / m) to order M = counts.len().
pub fn zeta_series(counts: &[u64]) -> TruncatedSeries<BigRational> {
    let sums: Vec<BigRational> =
        counts.iter().map(|&n| BigRational::from_integer(n.into())).collect();
    TruncatedSeries::exp_power_sums(BigRational::one(), &sums)
}

/// δ(Γ)(t) = Γ(t) / Γ(qt).
pub fn delta<T: Coefficient>(gamma: &TruncatedSeries<T>, q: u64) -> Result<TruncatedSeries<T>> {
    gamma.div(&gamma.scale_variable(&BigInt::from(q)))
}

/// The unique Z with Z(t) = Γ(t)·Z(qt), i.e. ∏_{i≥0} Γ(q^i t), computed by
/// z_k = (1 − q^k)⁻¹ Σ_{j<k} γ_{k−j} q^j z_j.
pub fn delta_inverse<T: Coefficient>(gamma: &TruncatedSeries<T>, q: u64) -> Result<TruncatedSeries<T>> {
    gamma.require_unit_constant("δ⁻¹")?;
    if q < 2 {
        return Err(Error::Series("δ⁻¹ needs q ≥ 2".into()));
    }
    let q = BigInt::from(q);
    let mut qpow = vec![BigInt::one()];
    for k in 1..=gamma.order() {
        let next = &qpow[k - 1] * &q;
        qpow.push(next);
    }
    let mut z: Vec<T> = vec![gamma.coeffs[0].one_like()];
    for k in 1..=gamma.order() {
        let mut acc = gamma.coeffs[0].zero_like();
        for j in 0..k {
            acc = acc.add(&gamma.coeffs[k - j].mul(&z[j]).scale_int(&qpow[j]));
        }
        z.push(acc.div_int(&(BigInt::one() - &qpow[k])));
    }
    Ok(TruncatedSeries { coeffs: z })
}

/// ∏_{i=0}^{L} Γ(q^i t), the partial product approximating δ⁻¹(Γ).
pub fn delta_inverse_partial<T: Coefficient>(
    gamma: &TruncatedSeries<T>,
    q: u64,
    levels: u32,
) -> TruncatedSeries<T> {
    let q = BigInt::from(q);
    let mut lambda = BigInt::one();
    let mut acc = TruncatedSeries::constant(gamma.coeffs[0].one_like(), gamma.order());
    for _ in 0..=levels {
        acc = acc.mul(&gamma.scale_variable(&lambda));
        lambda *= &q;
    }
    acc
}

/// P/Q with P(0) = Q(0) = 1, integer coefficients and gcd(P, Q) = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub numerator: Vec<BigInt>,
    pub denominator: Vec<BigInt>,
}

impl RationalFunction {
    /// Reduces P/Q over ℚ to coprime form with constant terms 1. Fails if
    /// a constant term vanishes or the reduced form is not integral.
    pub fn new(numerator: &[BigRational], denominator: &[BigRational]) -> Result<Self> {
        let p = trim_q(numerator.to_vec());
        let q = trim_q(denominator.to_vec());
        if p.is_empty() || q.is_empty() || p[0].is_zero() || q[0].is_zero() {
            return Err(Error::Series("rational function needs nonzero constant terms".into()));
        }
        let g = poly_gcd_q(&p, &q);
        let (p, _) = poly_divrem_q(&p, &g);
        let (q, _) = poly_divrem_q(&q, &g);
        let p = normalize_constant(&p);
        let q = normalize_constant(&q);
        let to_int = |v: &[BigRational]| -> Result<Vec<BigInt>> {
            v.iter()
                .map(|c| {
                    c.is_integer()
                        .then(|| c.to_integer())
                        .ok_or_else(|| Error::Series(format!("non-integral coefficient {c}")))
                })
                .collect()
        };
        Ok(RationalFunction { numerator: to_int(&p)?, denominator: to_int(&q)? })
    }

    pub fn from_integers(numerator: &[i64], denominator: &[i64]) -> Result<Self> {
        let conv = |v: &[i64]| -> Vec<BigRational> {
            v.iter().map(|&c| BigRational::from_integer(c.into())).collect()
        };
        Self::new(&conv(numerator), &conv(denominator))
    }

    pub fn one() -> Self {
        RationalFunction { numerator: vec![BigInt::one()], denominator: vec![BigInt::one()] }
    }

    /// Power-series expansion to order `m`.
    pub fn expand(&self, m: usize) -> TruncatedSeries<BigRational> {
        let pad = |v: &[BigInt]| {
            let mut out: Vec<BigRational> =
                v.iter().take(m + 1).map(|c| BigRational::from_integer(c.clone())).collect();
            out.resize(m + 1, BigRational::zero());
            TruncatedSeries::new(out)
        };
        pad(&self.numerator)
            .div(&pad(&self.denominator))
            .expect("denominator has constant term 1")
    }

    /// The point counts N_1, …, N_m encoded by a zeta function.
    pub fn counts(&self, m: usize) -> Vec<BigInt> {
        self.expand(m)
            .power_sums()
            .expect("constant term 1")
            .into_iter()
            .map(|s| s.to_integer())
            .collect()
    }

    pub fn numerator_degree(&self) -> usize {
        self.numerator.len() - 1
    }

    pub fn denominator_degree(&self) -> usize {
        self.denominator.len() - 1
    }
}

fn trim_q(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn normalize_constant(v: &[BigRational]) -> Vec<BigRational> {
    let c = v[0].clone();
    v.iter().map(|x| x / &c).collect()
}

fn poly_divrem_q(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim_q(b.to_vec());
    let mut r = trim_q(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut quot = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let c = &r[dr] / &b[db];
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            r[dr - db + j] -= t;
        }
        quot[dr - db] = c;
        r.pop();
        r = trim_q(r);
    }
    (quot, r)
}

fn poly_gcd_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = trim_q(a.to_vec());
    let mut y = trim_q(b.to_vec());
    while !y.is_empty() {
        let (_, r) = poly_divrem_q(&x, &y);
        x = y;
        y = r;
    }
    x
}

/// Solves A·x = b over ℚ; free variables are set to 0. `None` if
/// inconsistent.
fn solve_q(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, piv);
        b.swap(row, piv);
        let inv = a[row][col].recip();
        for j in col..cols {
            a[row][j] = &a[row][j] * &inv;
        }
        b[row] = &b[row] * &inv;
        for i in 0..rows {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..cols {
                    let t = &f * &a[row][j];
                    a[i][j] -= t;
                }
                let t = &f * &b[row];
                b[i] -= t;
            }
        }
        pivots.push(col);
        row += 1;
    }
    if b[row..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

/// Reconstructs P/Q with deg P, deg Q ≤ `max_deg` from a series with at
/// least 2B+1 known coefficients. The first candidate (by total degree)
/// matching through t^{2B} is unique; it is then validated against every
/// remaining coefficient.
pub fn pade_reconstruct(series: &TruncatedSeries<BigRational>, max_deg: usize) -> Result<RationalFunction> {
    let c = series.coeffs();
    let m = series.order();
    if m < 2 * max_deg {
        return Err(Error::Series(format!(
            "degree bound {max_deg} needs {} coefficients, have {}",
            2 * max_deg + 1,
            m + 1
        )));
    }
    if c[0] != BigRational::one() {
        return Err(Error::Series("Padé reconstruction needs constant term 1".into()));
    }
    let at = |k: isize| -> BigRational {
        if k < 0 {
            BigRational::zero()
        } else {
            c[k as usize].clone()
        }
    };
    for total in 0..=2 * max_deg {
        for dq in 0..=total.min(max_deg) {
            let dp = total - dq;
            if dp > max_deg {
                continue;
            }
            // Σ_{j=1}^{dq} q_j c_{k−j} = −c_k for k = dp+1 ..= dp+dq.
            let a: Vec<Vec<BigRational>> = (dp + 1..=dp + dq)
                .map(|k| (1..=dq).map(|j| at(k as isize - j as isize)).collect())
                .collect();
            let b: Vec<BigRational> = (dp + 1..=dp + dq).map(|k| -at(k as isize)).collect();
            let Some(qs) = solve_q(a, b) else { continue };
            let mut qpoly = vec![BigRational::one()];
            qpoly.extend(qs);
            let residual = |k: usize| -> BigRational {
                (0..=dq.min(k)).fold(BigRational::zero(), |acc, j| acc + &qpoly[j] * &c[k - j])
            };
            let ppoly: Vec<BigRational> = (0..=dp).map(residual).collect();
            if (dp + 1..=2 * max_deg).any(|k| !residual(k).is_zero()) {
                continue;
            }
            if let Some(bad) = (2 * max_deg + 1..=m).find(|&k| !residual(k).is_zero()) {
                return Err(Error::PadeValidation { degree: max_deg, index: bad });
            }
            return RationalFunction::new(&ppoly, &qpoly);
        }
    }
    Err(Error::NoPadeSolution(max_deg))
}

/// Tries degree bounds `start, start+1, …, ceiling` (as far as the series
/// length allows) until one reconstructs and validates.
pub fn pade_reconstruct_auto(
    series: &TruncatedSeries<BigRational>,
    start: usize,
    ceiling: usize,
) -> Result<(RationalFunction, usize)> {
    let top = ceiling.min(series.order() / 2);
    let mut last = Error::Series(format!(
        "degree bound {start} needs {} coefficients, have {}",
        2 * start + 1,
        series.order() + 1
    ));
    for b in start..=top {
        match pade_reconstruct(series, b) {
            Ok(r) => return Ok((r, b)),
            Err(e @ (Error::NoPadeSolution(_) | Error::PadeValidation { .. })) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// p-adic valuation of a nonzero integer.
pub fn ord_p(x: &BigInt, p: u64) -> u64 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = 0;
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// Lower convex hull of {(k, ord_p c_k) : c_k ≠ 0}; slopes in ord_q units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Hull vertices (k, ord_p c_k), abscissas strictly increasing.
    pub vertices: Vec<(usize, u64)>,
    /// (slope in ord_q units, horizontal length), slopes increasing.
    pub segments: Vec<(BigRational, usize)>,
}

impl NewtonPolygon {
    /// Slopes with multiplicity, nondecreasing.
    pub fn slopes(&self) -> Vec<BigRational> {
        self.segments
            .iter()
            .flat_map(|(s, len)| std::iter::repeat(s.clone()).take(*len))
            .collect()
    }

    pub fn min_slope(&self) -> Option<BigRational> {
        self.segments.first().map(|(s, _)| s.clone())
    }
}

pub fn newton_polygon(poly: &[BigInt], p: u64, a: u32) -> Result<NewtonPolygon> {
    let pts: Vec<(usize, u64)> = poly
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, ord_p(c, p)))
        .collect();
    if pts.is_empty() {
        return Err(Error::Series("Newton polygon of the zero polynomial".into()));
    }
    // Monotone-chain lower hull; collinear middle points are dropped.
    let mut hull: Vec<(usize, u64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as i128 - x1 as i128) * (pt.1 as i128 - y1 as i128)
                - (y2 as i128 - y1 as i128) * (pt.0 as i128 - x1 as i128);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let dx = (w[1].0 - w[0].0) as i64;
            let dy = w[1].1 as i64 - w[0].1 as i64;
            (BigRational::new(dy.into(), (dx * a as i64).into()), dx as usize)
        })
        .collect();
    Ok(NewtonPolygon { vertices: hull, segments })
}

/// Which side of a zeta function a factor divides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Zero,
    Pole,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisibilityHit {
    pub zeta: usize,
    pub shift: i32,
    pub side: Side,
}

/// F(q^m t) cleared to integer coefficients.
pub fn twist(factor: &[BigInt], q: u64, m: i32) -> Vec<BigInt> {
    let q = BigInt::from(q);
    let deg = factor.len().saturating_sub(1);
    let k = m.unsigned_abs() as usize;
    factor
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if m >= 0 {
                c * num_traits::pow(q.clone(), i * k)
            } else {
                c * num_traits::pow(q.clone(), (deg - i) * k)
            }
        })
        .collect()
}

fn divides_q(f: &[BigInt], g: &[BigInt]) -> bool {
    let f: Vec<BigRational> = f.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let g: Vec<BigRational> = g.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let (_, r) = poly_divrem_q(&g, &f);
    r.is_empty()
}

/// Searches shifts m ∈ [−R, R] for which the twisted factor F(q^m t)
/// divides a numerator (zero side) or denominator (pole side) of one of the
/// given zeta functions. An empty result means "not witnessed in range".
pub fn weak_visibility_check(
    factor: &[BigInt],
    zetas: &[RationalFunction],
    q: u64,
    range: u32,
) -> Result<Vec<VisibilityHit>> {
    let f = {
        let mut f = factor.to_vec();
        while f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
        f
    };
    if f.first() != Some(&BigInt::one()) {
        return Err(Error::Series("visibility factor needs constant term 1".into()));
    }
    if f.len() == 1 {
        return Err(Error::Series("visibility factor must have positive degree".into()));
    }
    let mut hits = Vec::new();
    for m in -(range as i32)..=range as i32 {
        let fm = twist(&f, q, m);
        for (i, z) in zetas.iter().enumerate() {
            if divides_q(&fm, &z.numerator) {
                hits.push(VisibilityHit { zeta: i, shift: m, side: Side::Zero });
            }
            if divides_q(&fm, &z.denominator) {
                hits.push(VisibilityHit { zeta: i, shift: m, side: Side::Pole });
            }
        }
    }
    Ok(hits)
}

/// Reduces a rational number with denominator prime to `modulus`'s prime
/// factors into 0..modulus.
pub fn rational_mod(x: &BigRational, modulus: &BigInt) -> Option<BigInt> {
    let den = x.denom().mod_floor(modulus);
    let ext = den.extended_gcd(modulus);
    if !ext.gcd.is_one() {
        return None;
    }
    Some((x.numer() * ext.x).mod_floor(modulus))
}

/// ord_p of a nonzero rational.
pub fn ord_p_rational(x: &BigRational, p: u64) -> i64 {
    ord_p(x.numer(), p) as i64 - ord_p(x.denom(), p) as i64
}
