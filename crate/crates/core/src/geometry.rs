//! Sparse polynomials over F_q, exhaustive point counting on affine space and
//! the torus, a randomized dimension estimator, and recombination of a
//! system into one whose leading part cuts out the same set with the right
//! codimension at every stage.
//!
//! Dimension and vanishing statements are certified by enumeration over
//! F_{q^s} for small `s` only; they are pointwise surrogates for the
//! scheme-theoretic notions.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{make_extension, FieldElement, FieldSpec, FiniteField};
use crate::Limits;

/// Where points are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// All of A^n.
    Affine,
    /// The torus G_m^n: every coordinate nonzero.
    Torus,
}

/// A polynomial in `n` variables with coefficients in some F_q, stored as a
/// map from exponent vectors to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    /// The variable `x_i` (0-based).
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, FieldElement::from_index(1))
    }

    pub fn monomial(exponents: Vec<u32>, c: FieldElement) -> Self {
        let mut p = Self::zero(exponents.len());
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    /// Builds a polynomial, combining repeated exponent vectors.
    pub fn from_terms<I>(n: usize, terms: I, field: &FiniteField) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, FieldElement)>,
    {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::InvalidSystem(format!(
                    "exponent vector {e:?} has length {}, expected {n}",
                    e.len()
                )));
            }
            p.add_term(e, c, field);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: FieldElement, field: &FiniteField) {
        let entry = self.terms.entry(e).or_insert(FieldElement::ZERO);
        *entry = field.add(*entry, c);
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, FieldElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &MultiPoly, field: &FiniteField) -> MultiPoly {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c, field);
        }
        out
    }

    pub fn scale(&self, c: FieldElement, field: &FiniteField) -> MultiPoly {
        let mut out = Self::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (e, &a) in &self.terms {
            out.terms.insert(e.clone(), field.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly, field: &FiniteField) -> MultiPoly {
        let mut out = Self::zero(self.n);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, field.mul(c1, c2), field);
            }
        }
        out
    }

    /// Re-embeds into `n_new ≥ n` variables; the new variables are appended.
    pub fn extend_vars(&self, n_new: usize) -> MultiPoly {
        assert!(n_new >= self.n);
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let mut e = e.clone();
                e.resize(n_new, 0);
                (e, c)
            })
            .collect();
        MultiPoly { n: n_new, terms }
    }

    /// Multiplies by the variable `x_i`.
    pub fn mul_var(&self, i: usize) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let mut e = e.clone();
                e[i] += 1;
                (e, c)
            })
            .collect();
        MultiPoly { n: self.n, terms }
    }

    /// Sets every variable outside `keep` to zero and renumbers the
    /// remaining ones in the order given.
    pub fn restrict(&self, keep: &[usize]) -> MultiPoly {
        let mut out = Self::zero(keep.len());
        for (e, &c) in &self.terms {
            let dropped = (0..self.n).any(|i| e[i] != 0 && !keep.contains(&i));
            if !dropped {
                out.terms.insert(keep.iter().map(|&i| e[i]).collect(), c);
            }
        }
        out
    }

    /// Maps coefficients through `f` (e.g. an embedding into an extension).
    pub fn map_coefficients(&self, f: impl Fn(FieldElement) -> FieldElement) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, &c)| {
                let c = f(c);
                (!c.is_zero()).then(|| (e.clone(), c))
            })
            .collect();
        MultiPoly { n: self.n, terms }
    }

    /// Evaluation with coefficients already living in `field`.
    pub fn eval(&self, field: &FiniteField, x: &[FieldElement]) -> FieldElement {
        let mut acc = field.zero();
        for (e, &c) in &self.terms {
            let mut t = c;
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    t = field.mul(t, field.pow(x[i], k as u64));
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    /// Prepares the polynomial for repeated evaluation over the extension
    /// `ext` of its coefficient field.
    pub fn compile(&self, ext: &FiniteField) -> CompiledPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let factors = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(i, &k)| (i, k))
                    .collect();
                (ext.embed_base(c.index()), factors)
            })
            .collect();
        let mut max_exp = vec![0u32; self.n];
        for e in self.terms.keys() {
            for (i, &k) in e.iter().enumerate() {
                max_exp[i] = max_exp[i].max(k);
            }
        }
        CompiledPoly { terms, max_exp }
    }
}

/// A polynomial with coefficients embedded into a fixed extension and its
/// monomials flattened to `(variable, exponent)` lists.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(FieldElement, Vec<(usize, u32)>)>,
    max_exp: Vec<u32>,
}

impl CompiledPoly {
    pub fn eval(&self, ext: &FiniteField, x: &[FieldElement]) -> FieldElement {
        let mut acc = ext.zero();
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(i, k) in factors {
                if t.is_zero() {
                    break;
                }
                t = ext.mul(t, if k == 1 { x[i] } else { ext.pow(x[i], k as u64) });
            }
            acc = ext.add(acc, t);
        }
        acc
    }

    /// Evaluation against a table of cached powers `powers[i][k] = x_i^k`.
    pub fn eval_cached(&self, ext: &FiniteField, powers: &[Vec<FieldElement>]) -> FieldElement {
        let mut acc = ext.zero();
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(i, k) in factors {
                t = ext.mul(t, powers[i][k as usize]);
            }
            acc = ext.add(acc, t);
        }
        acc
    }

    pub fn max_exponents(&self) -> &[u32] {
        &self.max_exp
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Enumerates `ext^n` (or the torus) in parallel over the first coordinate,
/// folding every point into a per-worker accumulator.
pub fn fold_points<T, I, S, M>(
    ext: &FiniteField,
    n: usize,
    region: Region,
    cap: u64,
    init: I,
    step: S,
    merge: M,
) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    S: Fn(&mut T, &[FieldElement]) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let lo = match region {
        Region::Affine => 0u32,
        Region::Torus => 1,
    };
    let order = ext.order() as u32;
    let size = ((order - lo) as u128).pow(n as u32);
    if size > cap as u128 {
        return Err(Error::CapExceeded { size, cap });
    }
    if n == 0 {
        let mut acc = init();
        step(&mut acc, &[]);
        return Ok(acc);
    }
    let result = (lo..order)
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            let mut pt = vec![FieldElement::from_index(lo); n];
            pt[0] = FieldElement::from_index(first);
            loop {
                step(&mut acc, &pt);
                let mut i = n - 1;
                loop {
                    if i == 0 {
                        return acc;
                    }
                    let next = pt[i].index() + 1;
                    if next < order {
                        pt[i] = FieldElement::from_index(next);
                        break;
                    }
                    pt[i] = FieldElement::from_index(lo);
                    i -= 1;
                }
            }
        })
        .reduce(&init, &merge);
    Ok(result)
}

/// Counts points of `ext^n` (or the torus) satisfying `pred`.
pub fn count_where<P>(ext: &FiniteField, n: usize, region: Region, cap: u64, pred: P) -> Result<u64>
where
    P: Fn(&[FieldElement]) -> bool + Sync + Send,
{
    fold_points(
        ext,
        n,
        region,
        cap,
        || 0u64,
        |acc, x| {
            if pred(x) {
                *acc += 1
            }
        },
        |a, b| a + b,
    )
}

/// Number of points of `ext^n` (or the torus) where every polynomial in
/// `polys` vanishes.
pub fn count_zeros(
    ext: &FiniteField,
    n: usize,
    polys: &[CompiledPoly],
    region: Region,
    cap: u64,
) -> Result<u64> {
    count_where(ext, n, region, cap, |x| {
        polys.iter().all(|f| f.eval(ext, x).is_zero())
    })
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffFile {
    Int(i64),
    Vec(Vec<i64>),
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    c: CoeffFile,
    e: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PolyFile {
    terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
struct SystemFile {
    p: u32,
    #[serde(default = "one")]
    a: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<Vec<i64>>,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<i32>,
    polys: Vec<PolyFile>,
}

fn one() -> u32 {
    1
}

/// Polynomials f₁, …, f_r in `n` variables over F_q, sorted so that
/// d₁ ≥ d₂ ≥ … ≥ d_r > 0.
#[derive(Clone, Debug)]
pub struct PolySystem {
    field: FiniteField,
    n: usize,
    polys: Vec<MultiPoly>,
    dim_override: Option<i32>,
}

impl PolySystem {
    /// Validates and sorts (stably) by descending degree.
    pub fn new(spec: FieldSpec, n: usize, mut polys: Vec<MultiPoly>) -> Result<Self> {
        let field = make_extension(&spec, 1, u64::MAX)?;
        for (i, f) in polys.iter().enumerate() {
            if f.n() != n {
                return Err(Error::InvalidSystem(format!(
                    "polynomial {} has {} variables, expected {n}",
                    i + 1,
                    f.n()
                )));
            }
            if f.degree() == 0 {
                return Err(Error::InvalidSystem(format!(
                    "polynomial {} has degree 0; all degrees must be positive",
                    i + 1
                )));
            }
        }
        polys.sort_by_key(|f| std::cmp::Reverse(f.degree()));
        Ok(PolySystem { field, n, polys, dim_override: None })
    }

    pub fn with_dim_override(mut self, dim: Option<i32>) -> Self {
        self.dim_override = dim;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let modulus = file
            .modulus
            .map(|m| m.iter().map(|&c| c.rem_euclid(file.p.max(1) as i64) as u32).collect());
        let spec = FieldSpec::new(file.p, file.a, modulus)?;
        let field = make_extension(&spec, 1, u64::MAX)?;
        let mut polys = Vec::with_capacity(file.polys.len());
        for (i, pf) in file.polys.into_iter().enumerate() {
            let mut terms = Vec::with_capacity(pf.terms.len());
            for t in pf.terms {
                let coords: Vec<u32> = match t.c {
                    CoeffFile::Int(v) => vec![v.rem_euclid(spec.p as i64) as u32],
                    CoeffFile::Vec(v) => {
                        if v.len() > spec.a as usize {
                            return Err(Error::Parse(format!(
                                "polynomial {}: coefficient {v:?} has more than a = {} entries",
                                i + 1,
                                spec.a
                            )));
                        }
                        v.iter().map(|&c| c.rem_euclid(spec.p as i64) as u32).collect()
                    }
                };
                terms.push((t.e, field.from_coords(&coords)));
            }
            polys.push(
                MultiPoly::from_terms(file.n, terms, &field)
                    .map_err(|e| Error::Parse(format!("polynomial {}: {e}", i + 1)))?,
            );
        }
        if let Some(d) = file.dim {
            if d < -1 || d > file.n as i32 {
                return Err(Error::Parse(format!("dim {d} outside -1..={}", file.n)));
            }
        }
        Ok(Self::new(spec, file.n, polys)?.with_dim_override(file.dim))
    }

    pub fn to_json(&self) -> String {
        let spec = self.spec();
        let polys = self
            .polys
            .iter()
            .map(|f| PolyFile {
                terms: f
                    .terms()
                    .iter()
                    .map(|(e, &c)| TermFile {
                        c: if spec.a == 1 {
                            CoeffFile::Int(c.index() as i64)
                        } else {
                            CoeffFile::Vec(
                                self.field.coords(c).into_iter().map(|x| x as i64).collect(),
                            )
                        },
                        e: e.clone(),
                    })
                    .collect(),
            })
            .collect();
        let file = SystemFile {
            p: spec.p,
            a: spec.a,
            modulus: spec.modulus.as_ref().map(|m| m.iter().map(|&c| c as i64).collect()),
            n: self.n,
            dim: self.dim_override,
            polys,
        };
        serde_json::to_string(&file).expect("system serializes")
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn spec(&self) -> &FieldSpec {
        self.field.base()
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.polys.iter().map(|f| f.degree()).collect()
    }

    pub fn dim_override(&self) -> Option<i32> {
        self.dim_override
    }

    /// The same system over F_{q^e}, with F_{q^e} as the new base field.
    pub fn base_change(&self, e: u32, cap: u64) -> Result<PolySystem> {
        if e == 1 {
            return Ok(self.clone());
        }
        let ext = make_extension(self.spec(), e, cap)?;
        let polys = self
            .polys
            .iter()
            .map(|f| f.map_coefficients(|c| ext.embed_base(c.index())))
            .collect();
        Ok(PolySystem {
            field: make_extension(&ext.as_spec(), 1, cap)?,
            n: self.n,
            polys,
            dim_override: self.dim_override,
        })
    }

    /// The subsystem {f_i : i ∈ subset} (0-based indices).
    pub fn subset_polys(&self, subset: &[usize]) -> Result<Vec<MultiPoly>> {
        subset
            .iter()
            .map(|&i| {
                self.polys
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::Range(format!("polynomial index {} > r = {}", i + 1, self.r())))
            })
            .collect()
    }
}

/// Number of F_{q^m}-points of Z({f_i : i ∈ subset}) in A^n or G_m^n.
/// Indices are 0-based; the empty subset counts the whole region.
pub fn count(system: &PolySystem, subset: &[usize], m: u32, region: Region, cap: u64) -> Result<u64> {
    let polys = system.subset_polys(subset)?;
    count_polys(system.spec(), system.n(), &polys, m, region, cap)
}

/// [`count`] for an arbitrary list of polynomials over `spec`; constants
/// and the zero polynomial are allowed.
pub fn count_polys(
    spec: &FieldSpec,
    n: usize,
    polys: &[MultiPoly],
    m: u32,
    region: Region,
    cap: u64,
) -> Result<u64> {
    let ext = make_extension(spec, m, cap)?;
    let compiled: Vec<CompiledPoly> = polys.iter().map(|f| f.compile(&ext)).collect();
    count_zeros(&ext, n, &compiled, region, cap)
}

/// Counts N_1, …, N_M of Z in the given region.
pub fn counts(system: &PolySystem, subset: &[usize], terms: u32, region: Region, cap: u64) -> Result<Vec<u64>> {
    (1..=terms).map(|m| count(system, subset, m, region, cap)).collect()
}

/// True iff `f` vanishes at every F_{q^s}-point of Z(system) for s ≤ `s_max`.
pub fn vanishes_identically(f: &MultiPoly, system: &PolySystem, s_max: u32, cap: u64) -> Result<bool> {
    vanishes_on(f, system.spec(), system.n(), system.polys(), s_max, cap)
}

fn vanishes_on(
    f: &MultiPoly,
    spec: &FieldSpec,
    n: usize,
    polys: &[MultiPoly],
    s_max: u32,
    cap: u64,
) -> Result<bool> {
    for s in 1..=s_max {
        let ext = make_extension(spec, s, cap)?;
        let cf = f.compile(&ext);
        let cs: Vec<CompiledPoly> = polys.iter().map(|g| g.compile(&ext)).collect();
        let witnesses = count_where(&ext, n, Region::Affine, cap, |x| {
            cs.iter().all(|g| g.eval(&ext, x).is_zero()) && !cf.eval(&ext, x).is_zero()
        })?;
        if witnesses > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Picks the extension degree for the dimension estimator: the smallest `s`
/// with q^s at least the threshold, or the largest affordable one.
fn slice_degree(q: u64, n: usize, limits: &Limits) -> Result<u32> {
    let affordable = |s: u32| (q as u128).pow(s).pow(n as u32) <= limits.dimension_cap as u128;
    if !affordable(1) {
        return Err(Error::CapExceeded {
            size: (q as u128).pow(n as u32),
            cap: limits.dimension_cap,
        });
    }
    let mut s = 1;
    while (q as u128).pow(s) < limits.constant_field_threshold as u128 {
        if !affordable(s + 1) {
            return Ok(s);
        }
        s += 1;
    }
    Ok(s)
}

fn rank(ext: &FiniteField, rows: &[Vec<FieldElement>]) -> usize {
    let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = ext.inv(m[rank][col]).expect("pivot is nonzero");
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let factor = ext.mul(m[i][col], inv);
                for j in col..cols {
                    let t = ext.mul(factor, m[rank][j]);
                    m[i][j] = ext.sub(m[i][j], t);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of Z(polys) ⊂ A^n over the algebraic closure, estimated by
/// random affine slices over F_{q^s} and cross-checked against point-count
/// growth. Returns −1 when Z has no F_{q^s}-points.
pub fn estimate_dimension_polys(
    spec: &FieldSpec,
    n: usize,
    polys: &[MultiPoly],
    trials: u32,
    seed: u64,
    limits: &Limits,
) -> Result<i32> {
    let q = spec.q();
    let s = slice_degree(q, n, limits)?;
    let ext = make_extension(spec, s, limits.dimension_cap)?;
    let compiled: Vec<CompiledPoly> = polys.iter().map(|f| f.compile(&ext)).collect();
    let n_s = count_zeros(&ext, n, &compiled, Region::Affine, limits.dimension_cap)?;
    if n_s == 0 {
        return Ok(-1);
    }
    if n == 0 {
        return Ok(0);
    }

    let mut slice_dim = slice_estimate(&ext, n, &compiled, trials, seed)?;

    // Growth of point counts: N_s ≈ c·q^{s·dim}.
    let mut growth = Vec::new();
    if s >= 2 {
        let prev = make_extension(spec, s - 1, limits.dimension_cap)?;
        let cp: Vec<CompiledPoly> = polys.iter().map(|f| f.compile(&prev)).collect();
        let n_prev = count_zeros(&prev, n, &cp, Region::Affine, limits.dimension_cap)?;
        if n_prev > 0 {
            growth.push(((n_s as f64 / n_prev as f64).ln() / (q as f64).ln()).round() as i32);
        }
    }
    growth.push(((n_s as f64).ln() / (ext.order() as f64).ln()).round() as i32);
    if !growth.contains(&slice_dim) {
        // A borderline hit rate over a small field can tip the slice test;
        // retry once with more slices before calling it inconclusive.
        slice_dim = slice_estimate(&ext, n, &compiled, 4 * trials, seed ^ 0x511ce)?;
    }
    if growth.contains(&slice_dim) {
        Ok(slice_dim)
    } else {
        Err(Error::InconclusiveDimension { slices: slice_dim, growth: growth[0] })
    }
}

/// Largest codimension d such that at least 3/8 of `trials` random affine
/// subspaces of codimension d meet Z (0 if none does).
fn slice_estimate(ext: &FiniteField, n: usize, compiled: &[CompiledPoly], trials: u32, seed: u64) -> Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let threshold = (3 * trials as usize).div_ceil(8).max(1);
    for d in (1..=n).rev() {
        let free = n - d;
        let mut hits = 0;
        for _ in 0..trials {
            let base: Vec<FieldElement> = (0..n).map(|_| ext.random(&mut rng)).collect();
            let dirs = loop {
                let dirs: Vec<Vec<FieldElement>> = (0..free)
                    .map(|_| (0..n).map(|_| ext.random(&mut rng)).collect())
                    .collect();
                if rank(ext, &dirs) == free {
                    break dirs;
                }
            };
            let hit = count_where(ext, free, Region::Affine, u64::MAX, |t| {
                let x: Vec<FieldElement> = (0..n)
                    .map(|i| {
                        dirs.iter()
                            .zip(t)
                            .fold(base[i], |acc, (v, &ti)| ext.add(acc, ext.mul(v[i], ti)))
                    })
                    .collect();
                compiled.iter().all(|f| f.eval(ext, &x).is_zero())
            })? > 0;
            if hit {
                hits += 1;
            }
        }
        if hits >= threshold {
            return Ok(d as i32);
        }
    }
    Ok(0)
}

/// [`estimate_dimension_polys`] for a system. A `dim` override in the
/// system file is not consulted here.
pub fn estimate_dimension(system: &PolySystem, trials: u32, seed: u64, limits: &Limits) -> Result<i32> {
    estimate_dimension_polys(system.spec(), system.n(), system.polys(), trials, seed, limits)
}

/// Output of [`recombine`]: g = B·f over F_{q^e}.
#[derive(Clone, Debug)]
pub struct Recombination {
    /// The field the constants were drawn from (F_{q^e}).
    pub field: FieldSpec,
    /// Degree `e` of that field over F_q.
    pub extension_degree: u32,
    /// g₁, …, g_r in the original order (not re-sorted).
    pub polys: Vec<MultiPoly>,
    /// Row i holds the coefficients of f₁, …, f_r in g_i.
    pub matrix: Vec<Vec<FieldElement>>,
    /// Stages (1-based indices i of g_i) where f_i vanished on Z(g₁…g_{i−1}).
    pub jumps: Vec<usize>,
    /// Estimated dim Z.
    pub dim: i32,
    /// c = n − dim Z.
    pub codim: usize,
    /// Extensions F_{q^{e s}} over which Z(g) = Z(f) was checked.
    pub verified_levels: Vec<u32>,
}

fn combine(
    field: &FiniteField,
    polys: &[MultiPoly],
    row: &[FieldElement],
    n: usize,
) -> MultiPoly {
    polys
        .iter()
        .zip(row)
        .fold(MultiPoly::zero(n), |acc, (f, &c)| acc.add(&f.scale(c, field), field))
}

/// Replaces f₁, …, f_r by g = B·f with B upper triangular (diagonal in
/// {0, 1}) such that Z(g) = Z(f) and Z(g₁, …, g_m) has dimension n − m for
/// every m ≤ c = n − dim Z. Where f_{m+1} vanishes on Z(g₁, …, g_m) the
/// diagonal entry is 0 (a jump) and g_{m+1} is a combination of later f's.
///
/// Constants come from F_q first; the field is enlarged only after
/// `limits.recombine_draws` failed draws at some stage.
pub fn recombine(system: &PolySystem, seed: u64, limits: &Limits) -> Result<Recombination> {
    let n = system.n();
    let r = system.r();
    let trials = limits.dimension_trials;
    let dim = estimate_dimension(system, trials, seed, limits)?;
    if dim < 0 {
        return Err(Error::EmptyVariety);
    }
    let c = n - dim as usize;
    if c > r {
        return Err(Error::InvalidSystem(format!("codimension {c} exceeds r = {r}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_7ec0);
    let q = system.q();
    let mut last_failure = None;
    let mut e = 1;
    loop {
        // Verification enumerates F_{q^{e s}}^n for s ≤ s_max.
        let affordable = (q as u128).pow(e).pow(n as u32) <= limits.dimension_cap as u128;
        if !affordable {
            let (stage, reason) = last_failure.unwrap_or((1, "no affordable constant field".to_string()));
            return Err(Error::RecombinationFailed { stage, reason });
        }
        let sys = system.base_change(e, limits.enumeration_cap)?;
        match recombine_over(&sys, c, &mut rng, limits)? {
            Ok((polys, matrix, jumps)) => {
                let verified_levels = verify_recombination(&sys, &polys, c, dim, seed, limits)?;
                return Ok(Recombination {
                    field: sys.spec().clone(),
                    extension_degree: e,
                    polys,
                    matrix,
                    jumps,
                    dim,
                    codim: c,
                    verified_levels,
                });
            }
            Err(failure) => {
                last_failure = Some(failure);
                e += 1;
            }
        }
    }
}

type Stages = (Vec<MultiPoly>, Vec<Vec<FieldElement>>, Vec<usize>);

fn recombine_over(
    sys: &PolySystem,
    c: usize,
    rng: &mut ChaCha8Rng,
    limits: &Limits,
) -> Result<std::result::Result<Stages, (usize, String)>> {
    let n = sys.n();
    let r = sys.r();
    let field = sys.field();
    let f = sys.polys();
    let unit = |i: usize| -> Vec<FieldElement> {
        (0..r).map(|j| if i == j { field.one() } else { field.zero() }).collect()
    };
    let mut g = vec![f[0].clone()];
    let mut rows = vec![unit(0)];
    let mut jumps = Vec::new();
    for m in 1..c {
        let target = n as i32 - m as i32 - 1;
        let jump = vanishes_on(&f[m], sys.spec(), n, &g, limits.s_max, limits.enumeration_cap)?;
        let dim_with = |cand: &MultiPoly, salt: u64| -> Result<i32> {
            let mut polys = g.clone();
            polys.push(cand.clone());
            match estimate_dimension_polys(sys.spec(), n, &polys, limits.dimension_trials, salt, limits) {
                Err(Error::InconclusiveDimension { .. }) => Ok(i32::MIN),
                other => other,
            }
        };
        let mut accepted = None;
        if !jump && dim_with(&f[m], m as u64)? == target {
            accepted = Some(unit(m));
        }
        if accepted.is_none() {
            if m + 1 >= r {
                return Ok(Err((m + 1, "no later polynomials to combine".into())));
            }
            for draw in 0..limits.recombine_draws {
                let mut row = if jump { vec![field.zero(); r] } else { unit(m) };
                for slot in row.iter_mut().skip(m + 1) {
                    *slot = field.random_nonzero(rng);
                }
                let cand = combine(field, f, &row, n);
                if cand.degree() == 0 {
                    continue;
                }
                if dim_with(&cand, ((m as u64) << 32) | draw as u64)? == target {
                    accepted = Some(row);
                    break;
                }
            }
        }
        let Some(row) = accepted else {
            return Ok(Err((m + 1, format!("{} draws without reaching dimension {target}", limits.recombine_draws))));
        };
        if jump {
            jumps.push(m + 1);
        }
        g.push(combine(field, f, &row, n));
        rows.push(row);
    }
    for i in c.max(1)..r {
        g.push(f[i].clone());
        rows.push(unit(i));
    }
    Ok(Ok((g, rows, jumps)))
}

fn verify_recombination(
    sys: &PolySystem,
    g: &[MultiPoly],
    c: usize,
    dim: i32,
    seed: u64,
    limits: &Limits,
) -> Result<Vec<u32>> {
    let n = sys.n();
    for (i, (gi, fi)) in g.iter().zip(sys.polys()).enumerate() {
        if gi.degree() > fi.degree() {
            return Err(Error::RecombinationUnverified(format!(
                "deg g_{} = {} exceeds d_{} = {}",
                i + 1,
                gi.degree(),
                i + 1,
                fi.degree()
            )));
        }
    }
    let mut levels = Vec::new();
    for s in 1..=limits.s_max {
        let Ok(ext) = make_extension(sys.spec(), s, limits.enumeration_cap) else {
            break;
        };
        if (ext.order() as u128).pow(n as u32) > limits.enumeration_cap as u128 {
            break;
        }
        let cf: Vec<CompiledPoly> = sys.polys().iter().map(|f| f.compile(&ext)).collect();
        let cg: Vec<CompiledPoly> = g.iter().map(|f| f.compile(&ext)).collect();
        let mismatches = count_where(&ext, n, Region::Affine, limits.enumeration_cap, |x| {
            let zf = cf.iter().all(|f| f.eval(&ext, x).is_zero());
            let zg = cg.iter().all(|f| f.eval(&ext, x).is_zero());
            zf != zg
        })?;
        if mismatches > 0 {
            return Err(Error::RecombinationUnverified(format!(
                "Z(g) and Z(f) differ at {mismatches} points over the degree-{s} extension"
            )));
        }
        levels.push(s);
    }
    if levels.is_empty() {
        return Err(Error::RecombinationUnverified("no extension small enough to enumerate".into()));
    }
    let lead = &g[..c.max(1).min(g.len())];
    let d = estimate_dimension_polys(sys.spec(), n, lead, limits.dimension_trials, seed, limits)?;
    if d != dim {
        return Err(Error::RecombinationUnverified(format!(
            "dim Z(g_1..g_{c}) estimated as {d}, expected {dim}"
        )));
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u64 = 1 << 26;

    pub(crate) fn sys(p: u32, n: usize, polys: &[&[(i64, &[u32])]]) -> PolySystem {
        let spec = FieldSpec::prime(p).unwrap();
        let field = make_extension(&spec, 1, CAP).unwrap();
        let polys = polys
            .iter()
            .map(|terms| {
                MultiPoly::from_terms(
                    n,
                    terms.iter().map(|(c, e)| (e.to_vec(), field.from_int(*c))),
                    &field,
                )
                .unwrap()
            })
            .collect();
        PolySystem::new(spec, n, polys).unwrap()
    }

    #[test]
    fn count_examples() {
        let s = sys(3, 1, &[&[(1, &[1])]]);
        for m in 1..4 {
            assert_eq!(count(&s, &[0], m, Region::Affine, CAP).unwrap(), 1);
        }
        let h = sys(5, 2, &[&[(1, &[1, 1]), (-1, &[0, 0])]]);
        assert_eq!(count(&h, &[0], 1, Region::Affine, CAP).unwrap(), 4);
        assert_eq!(count(&h, &[], 2, Region::Torus, CAP).unwrap(), 24 * 24);
        assert_eq!(count(&h, &[], 2, Region::Affine, CAP).unwrap(), 625);
    }

    #[test]
    fn fermat_cubic_matches_naive_loop() {
        let s = sys(7, 2, &[&[(1, &[3, 0]), (1, &[0, 3]), (1, &[0, 0])]]);
        let mut naive = 0;
        for x in 0..7i64 {
            for y in 0..7i64 {
                if (x * x * x + y * y * y + 1) % 7 == 0 {
                    naive += 1;
                }
            }
        }
        assert_eq!(count(&s, &[0], 1, Region::Affine, CAP).unwrap(), naive);
    }

    #[test]
    fn dimension_examples() {
        let limits = Limits::default();
        let s = sys(3, 3, &[&[(1, &[1, 1, 0])], &[(1, &[1, 0, 1])]]);
        assert_eq!(estimate_dimension(&s, 16, 1, &limits).unwrap(), 2);
        let pt = sys(5, 2, &[&[(1, &[1, 0])], &[(1, &[0, 1])]]);
        assert_eq!(estimate_dimension(&pt, 16, 1, &limits).unwrap(), 0);
        let empty = sys(3, 1, &[&[(1, &[1])], &[(1, &[1]), (-1, &[0])]]);
        assert_eq!(estimate_dimension(&empty, 16, 1, &limits).unwrap(), -1);
    }

    #[test]
    fn degree_zero_rejected() {
        let spec = FieldSpec::prime(3).unwrap();
        let f = MultiPoly::constant(1, FieldElement::from_index(1));
        assert!(matches!(PolySystem::new(spec, 1, vec![f]), Err(Error::InvalidSystem(_))));
    }

    #[test]
    fn vanishing_examples() {
        let s = sys(3, 2, &[&[(1, &[1, 0])]]);
        let x1 = MultiPoly::var(2, 0);
        let x2 = MultiPoly::var(2, 1);
        assert!(vanishes_identically(&x1, &s, 2, CAP).unwrap());
        assert!(!vanishes_identically(&x2, &s, 2, CAP).unwrap());
        assert!(vanishes_identically(&x1.mul(&x2, s.field()), &s, 2, CAP).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"p":3,"a":2,"modulus":[1,0,1],"n":2,
            "polys":[{"terms":[{"c":[0,1],"e":[1,0]},{"c":2,"e":[0,2]}]}]}"#;
        let s = PolySystem::from_json(text).unwrap();
        assert_eq!(s.q(), 9);
        let again = PolySystem::from_json(&s.to_json()).unwrap();
        assert_eq!(again.polys(), s.polys());
        assert!(matches!(PolySystem::from_json("{\"p\":3,"), Err(Error::Parse(_))));
        assert!(matches!(
            PolySystem::from_json(r#"{"p":4,"n":1,"polys":[]}"#),
            Err(Error::NotPrime(4))
        ));
    }

    #[test]
    fn base_change_preserves_counts() {
        let s = sys(3, 2, &[&[(1, &[2, 0]), (1, &[0, 1]), (2, &[0, 0])]]);
        let s2 = s.base_change(2, CAP).unwrap();
        assert_eq!(s2.q(), 9);
        assert_eq!(
            count(&s, &[0], 2, Region::Affine, CAP).unwrap(),
            count(&s2, &[0], 1, Region::Affine, CAP).unwrap()
        );
    }

    #[test]
    fn complete_intersection_is_untouched() {
        let s = sys(3, 3, &[&[(1, &[1, 0, 0])], &[(1, &[0, 1, 0])]]);
        let out = recombine(&s, 3, &Limits::default()).unwrap();
        assert_eq!(out.polys, s.polys());
        assert!(out.jumps.is_empty());
        let f = s.field();
        assert_eq!(out.matrix, vec![vec![f.one(), f.zero()], vec![f.zero(), f.one()]]);
    }

    #[test]
    fn hypersurface_case() {
        let s = sys(3, 3, &[&[(1, &[1, 1, 0])], &[(1, &[1, 0, 1])]]);
        let out = recombine(&s, 5, &Limits::default()).unwrap();
        assert_eq!(out.codim, 1);
        assert_eq!(out.polys[0], s.polys()[0]);
    }

    #[test]
    fn jump_is_detected() {
        let s = sys(3, 3, &[&[(1, &[2, 1, 0])], &[(1, &[1, 1, 0])], &[(1, &[0, 0, 1])]]);
        let out = recombine(&s, 11, &Limits::default()).unwrap();
        assert_eq!(out.jumps, vec![2]);
        let m = &out.matrix;
        assert_eq!(m[1][1], FieldElement::ZERO);
        assert!(!m[1][2].is_zero());
        assert_eq!(m[2][2], FieldElement::from_index(1));
    }
}
