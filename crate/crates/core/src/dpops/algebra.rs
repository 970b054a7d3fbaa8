use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactalg::{binomial, factorial_valuation, require_prime, vp_rational, Matrix};
use crate::{Error, Result};

/// `γ_a(u) θ^b ε^c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DPBasisMonomial {
    pub a: u64,
    pub b: u64,
    pub c: u8,
}

impl DPBasisMonomial {
    pub fn new(a: u64, b: u64, c: u8) -> Self {
        assert!(c <= 1, "ε is exterior");
        DPBasisMonomial { a, b, c }
    }
}

impl std::fmt::Display for DPBasisMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.a > 0 {
            parts.push(format!("g{}", self.a));
        }
        match self.b {
            0 => {}
            1 => parts.push("th".to_string()),
            b => parts.push(format!("th^{b}")),
        }
        if self.c == 1 {
            parts.push("e".to_string());
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Homological degrees of `γ_1`, `θ` and `ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeWeights {
    pub gamma: i64,
    pub theta: i64,
    pub eps: i64,
}

impl DegreeWeights {
    /// `|u| = 2`, `|θ| = 2p`, `|ε| = 2p - 1`.
    pub fn perfectoid(p: u64) -> Self {
        DegreeWeights { gamma: 2, theta: 2 * p as i64, eps: 2 * p as i64 - 1 }
    }

    pub fn degree(&self, m: &DPBasisMonomial) -> i64 {
        self.gamma * m.a as i64 + self.theta * m.b as i64 + self.eps * m.c as i64
    }
}

/// Finite free module on the monomials of degree `<= bound`. Each of the
/// three generators can be switched off, e.g. `Z_p[θ]` alone.
#[derive(Clone, Debug)]
pub struct DPModule {
    pub p: u64,
    pub bound: i64,
    pub weights: DegreeWeights,
    pub gamma: bool,
    pub theta: bool,
    pub eps: bool,
}

impl DPModule {
    pub fn new(p: u64, bound: i64, weights: DegreeWeights) -> Result<Self> {
        require_prime(p)?;
        if weights.gamma <= 0 || weights.theta <= 0 || weights.eps <= 0 {
            return Err(Error::InvalidInput("generator degrees must be positive".into()));
        }
        Ok(DPModule { p, bound, weights, gamma: true, theta: true, eps: true })
    }

    pub fn without_gamma(mut self) -> Self {
        self.gamma = false;
        self
    }

    pub fn without_theta(mut self) -> Self {
        self.theta = false;
        self
    }

    pub fn without_eps(mut self) -> Self {
        self.eps = false;
        self
    }

    pub fn degree(&self, m: &DPBasisMonomial) -> i64 {
        self.weights.degree(m)
    }

    pub fn contains(&self, m: &DPBasisMonomial) -> bool {
        (self.gamma || m.a == 0)
            && (self.theta || m.b == 0)
            && (self.eps || m.c == 0)
            && self.degree(m) <= self.bound
    }

    /// All basis monomials, grouped by degree, sorted within each degree.
    pub fn basis(&self) -> BTreeMap<i64, Vec<DPBasisMonomial>> {
        let mut out: BTreeMap<i64, Vec<DPBasisMonomial>> = BTreeMap::new();
        let w = self.weights;
        for c in 0..=u8::from(self.eps) {
            let mut b = 0u64;
            loop {
                let base = w.theta * b as i64 + w.eps * c as i64;
                if base > self.bound || (!self.theta && b > 0) {
                    break;
                }
                let mut a = 0u64;
                loop {
                    let m = DPBasisMonomial::new(a, b, c);
                    if self.degree(&m) > self.bound || (!self.gamma && a > 0) {
                        break;
                    }
                    out.entry(self.degree(&m)).or_default().push(m);
                    a += 1;
                }
                b += 1;
            }
        }
        for v in out.values_mut() {
            v.sort();
        }
        out
    }
}

pub type DpElement = BTreeMap<DPBasisMonomial, BigRational>;

/// `γ_i γ_j = C(i+j, i) γ_{i+j}`; `None` past the index bound.
pub fn dp_multiply(i: u64, j: u64, bound: Option<u64>) -> Option<(BigInt, u64)> {
    if bound.is_some_and(|b| i + j > b) {
        return None;
    }
    Some((binomial(i + j, i), i + j))
}

/// Product of two monomials, `None` when it contains `ε²`.
pub fn monomial_product(x: &DPBasisMonomial, y: &DPBasisMonomial) -> Option<(BigInt, DPBasisMonomial)> {
    if x.c + y.c > 1 {
        return None;
    }
    let (c, a) = dp_multiply(x.a, y.a, None)?;
    Some((c, DPBasisMonomial::new(a, x.b + y.b, x.c + y.c)))
}

fn add_term(out: &mut DpElement, m: DPBasisMonomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let e = out.entry(m).or_insert_with(BigRational::zero);
    *e += c;
    if e.is_zero() {
        out.remove(&m);
    }
}

pub fn element_product(x: &DpElement, y: &DpElement) -> DpElement {
    let mut out = DpElement::new();
    for (mx, cx) in x {
        for (my, cy) in y {
            if let Some((k, m)) = monomial_product(mx, my) {
                add_term(&mut out, m, BigRational::from_integer(k) * cx * cy);
            }
        }
    }
    out
}

pub fn single(m: DPBasisMonomial, c: BigRational) -> DpElement {
    let mut e = DpElement::new();
    add_term(&mut e, m, c);
    e
}

/// Base-`p` digits of `m`, least significant first.
pub fn base_p_digits(mut m: u64, p: u64) -> Vec<u64> {
    let mut d = Vec::new();
    while m > 0 {
        d.push(m % p);
        m /= p;
    }
    d
}

/// `c_m = m! / prod_k (p^k!)^{m_k}` with `prod_k γ_{p^k}^{m_k} = c_m γ_m`.
pub fn gamma_factorization_unit(p: u64, m: u64) -> BigInt {
    let mut c = BigInt::one();
    let mut acc = 0u64;
    let mut pk = 1u64;
    for mk in base_p_digits(m, p) {
        for _ in 0..mk {
            c *= binomial(acc + pk, pk);
            acc += pk;
        }
        pk *= p;
    }
    c
}

/// `v_p(c_m)` by Legendre; zero for every `m`.
pub fn gamma_factorization_valuation(p: u64, m: u64) -> Result<u64> {
    let mut v = factorial_valuation(p, m)?;
    let mut pk = 1u64;
    for mk in base_p_digits(m, p) {
        v -= mk * factorial_valuation(p, pk)?;
        pk *= p;
    }
    Ok(v)
}

/// Values of a derivation on the generators: `gamma[k] = D(γ_{p^k})` and
/// `D(θ)`. Generators without a listed value go to zero; `D(ε) = 0`.
#[derive(Clone, Debug, Default)]
pub struct DerivationValues {
    pub gamma: Vec<DpElement>,
    pub theta: DpElement,
    pub shift: i64,
}

/// A derivation extended from generator values over the factorization
/// `γ_m = c_m^{-1} prod_k γ_{p^k}^{m_k}`.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub module: DPModule,
    pub values: DerivationValues,
}

impl Derivation {
    fn gamma_value(&self, k: usize) -> DpElement {
        self.values.gamma.get(k).cloned().unwrap_or_default()
    }

    /// `D(γ_m)`.
    pub fn on_gamma(&self, m: u64) -> DpElement {
        let p = self.module.p;
        let digits = base_p_digits(m, p);
        let mut out = DpElement::new();
        for (k, &mk) in digits.iter().enumerate() {
            if mk == 0 {
                continue;
            }
            let dv = self.gamma_value(k);
            if dv.is_empty() {
                continue;
            }
            // Dropping one γ_{p^k} lowers digit k without borrowing, so the
            // remaining factors multiply to c_rest γ_rest.
            let rest = m - num_traits::pow(p, k);
            let factor = single(
                DPBasisMonomial::new(rest, 0, 0),
                BigRational::from_integer(gamma_factorization_unit(p, rest) * BigInt::from(mk)),
            );
            for (mono, c) in element_product(&factor, &dv) {
                add_term(&mut out, mono, c);
            }
        }
        let cm = BigRational::from_integer(gamma_factorization_unit(p, m));
        out.into_iter().map(|(k, v)| (k, v / &cm)).collect()
    }

    pub fn on_monomial(&self, x: &DPBasisMonomial) -> DpElement {
        let mut out = DpElement::new();
        let rest = single(DPBasisMonomial::new(0, x.b, x.c), BigRational::one());
        for (m, c) in element_product(&self.on_gamma(x.a), &rest) {
            add_term(&mut out, m, c);
        }
        if x.b > 0 {
            let head = single(
                DPBasisMonomial::new(x.a, x.b - 1, x.c),
                BigRational::from_integer(BigInt::from(x.b)),
            );
            for (m, c) in element_product(&head, &self.values.theta) {
                add_term(&mut out, m, c);
            }
        }
        out
    }

    pub fn apply(&self, x: &DpElement) -> DpElement {
        let mut out = DpElement::new();
        for (m, c) in x {
            for (n, d) in self.on_monomial(m) {
                add_term(&mut out, n, d * c);
            }
        }
        out
    }

    /// Pairs of basis monomials (with product inside the module) where
    /// `D(xy) != D(x)y + xD(y)`.
    pub fn leibniz_failures(&self) -> Vec<(DPBasisMonomial, DPBasisMonomial)> {
        let all: Vec<DPBasisMonomial> = self.module.basis().into_values().flatten().collect();
        let mut bad = Vec::new();
        for (i, x) in all.iter().enumerate() {
            for y in &all[i..] {
                let Some((k, xy)) = monomial_product(x, y) else { continue };
                if !self.module.contains(&xy) {
                    continue;
                }
                let lhs: DpElement = self
                    .on_monomial(&xy)
                    .into_iter()
                    .map(|(m, c)| (m, c * BigRational::from_integer(k.clone())))
                    .collect();
                let ex = single(*x, BigRational::one());
                let ey = single(*y, BigRational::one());
                let mut rhs = element_product(&self.on_monomial(x), &ey);
                for (m, c) in element_product(&ex, &self.on_monomial(y)) {
                    add_term(&mut rhs, m, c);
                }
                if lhs != rhs {
                    bad.push((*x, *y));
                }
            }
        }
        bad
    }

    /// The matrix form, restricted to the chosen source and target monomials.
    pub fn to_map(
        &self,
        keep_source: impl Fn(&DPBasisMonomial) -> bool,
        keep_target: impl Fn(&DPBasisMonomial) -> bool,
    ) -> Result<GradedLinearMap> {
        let basis = self.module.basis();
        let pick = |f: &dyn Fn(&DPBasisMonomial) -> bool| -> BTreeMap<i64, Vec<DPBasisMonomial>> {
            basis
                .iter()
                .map(|(d, v)| (*d, v.iter().copied().filter(|m| f(m)).collect::<Vec<_>>()))
                .filter(|(_, v)| !v.is_empty())
                .collect()
        };
        let source = pick(&keep_source);
        let target = pick(&keep_target);
        GradedLinearMap::from_fn(source, target, self.values.shift, self.module.bound, |m| {
            self.on_monomial(m)
        })
    }
}

/// Extend generator values to the whole module as a derivation.
pub fn pd_derivation_extend(values: DerivationValues, module: &DPModule) -> Result<Derivation> {
    let d = Derivation { module: module.clone(), values };
    let check = |e: &DpElement, what: &str| -> Result<()> {
        for m in e.keys() {
            if !module.contains(m) {
                return Err(Error::InvalidInput(format!("value of {what} leaves the module: {m}")));
            }
        }
        Ok(())
    };
    for (k, v) in d.values.gamma.iter().enumerate() {
        check(v, &format!("γ_{}", num_traits::pow(module.p, k)))?;
    }
    check(&d.values.theta, "θ")?;
    Ok(d)
}

/// Linear map of graded free modules over `Z_(p)`, one block per source
/// degree: rows are the target basis in degree `d + shift`, columns the
/// source basis in degree `d`.
#[derive(Clone, Debug)]
pub struct GradedLinearMap {
    pub source: BTreeMap<i64, Vec<DPBasisMonomial>>,
    pub target: BTreeMap<i64, Vec<DPBasisMonomial>>,
    pub shift: i64,
    pub blocks: BTreeMap<i64, Matrix<BigRational>>,
    /// Every source degree up to here is present (possibly with an empty
    /// basis); above it the map is unknown.
    pub covered: i64,
}

impl GradedLinearMap {
    pub fn from_fn(
        source: BTreeMap<i64, Vec<DPBasisMonomial>>,
        target: BTreeMap<i64, Vec<DPBasisMonomial>>,
        shift: i64,
        covered: i64,
        image: impl Fn(&DPBasisMonomial) -> DpElement,
    ) -> Result<Self> {
        let mut blocks = BTreeMap::new();
        for (d, cols) in &source {
            let rows = target.get(&(d + shift)).cloned().unwrap_or_default();
            let index: BTreeMap<DPBasisMonomial, usize> =
                rows.iter().enumerate().map(|(i, m)| (*m, i)).collect();
            let mut entries = vec![vec![BigRational::zero(); cols.len()]; rows.len()];
            for (j, m) in cols.iter().enumerate() {
                for (t, c) in image(m) {
                    let Some(&i) = index.get(&t) else {
                        return Err(Error::InvalidInput(format!(
                            "image of {m} has term {t} outside the target"
                        )));
                    };
                    entries[i][j] += c;
                }
            }
            blocks.insert(*d, Matrix::from_rows(entries, cols.len()));
        }
        Ok(GradedLinearMap { source, target, shift, blocks, covered })
    }

    /// Source and target basis sizes in a degree (zero when absent).
    pub fn source_dim(&self, degree: i64) -> usize {
        self.source.get(&degree).map_or(0, |v| v.len())
    }

    pub fn target_dim(&self, degree: i64) -> usize {
        self.target.get(&degree).map_or(0, |v| v.len())
    }

    pub fn block(&self, degree: i64) -> Option<&Matrix<BigRational>> {
        self.blocks.get(&degree)
    }

    /// Image of one source basis element, as target coordinates.
    pub fn column(&self, degree: i64, j: usize) -> Vec<BigRational> {
        let b = &self.blocks[&degree];
        (0..b.rows()).map(|i| b[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|b| b.entries().all(|e| e.is_zero()))
    }

    /// Smallest `p`-adic valuation among the entries; `None` for the zero map.
    pub fn min_valuation(&self, p: u64) -> Option<i64> {
        self.blocks.values().flat_map(|b| b.entries().filter_map(|e| vp_rational(e, p))).min()
    }

    /// `self ∘ other`, defined when `other`'s target is `self`'s source.
    pub fn compose(&self, other: &GradedLinearMap) -> Result<GradedLinearMap> {
        let zero = BigRational::zero();
        let mut blocks = BTreeMap::new();
        for (d, b) in &other.blocks {
            let mid = d + other.shift;
            let cols = other.source[d].len();
            let rows = self.target.get(&(mid + self.shift)).map_or(0, |v| v.len());
            let Some(a) = self.blocks.get(&mid) else {
                blocks.insert(*d, Matrix::filled(rows, cols, zero.clone()));
                continue;
            };
            if self.source.get(&mid) != other.target.get(&mid) {
                return Err(Error::InvalidInput("composable maps need matching bases".into()));
            }
            blocks.insert(*d, a.mul_with(b, &zero, |x, y| x + y, |x, y| x * y));
        }
        Ok(GradedLinearMap {
            source: other.source.clone(),
            target: self.target.clone(),
            shift: self.shift + other.shift,
            blocks,
            covered: other.covered.min(self.covered - other.shift),
        })
    }
}

/// Commuting degree-preserving operators on one graded free module.
#[derive(Clone, Debug)]
pub struct OperatorCube {
    pub basis: BTreeMap<i64, Vec<DPBasisMonomial>>,
    pub ops: Vec<GradedLinearMap>,
}

impl OperatorCube {
    pub fn new(basis: BTreeMap<i64, Vec<DPBasisMonomial>>, ops: Vec<GradedLinearMap>) -> Result<Self> {
        for (i, op) in ops.iter().enumerate() {
            if op.shift != 0 || op.source != basis || op.target != basis {
                return Err(Error::InvalidInput(format!("operator {i} is not an endomorphism")));
            }
        }
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                let ab = ops[i].compose(&ops[j])?;
                let ba = ops[j].compose(&ops[i])?;
                if ab.blocks != ba.blocks {
                    return Err(Error::InvalidInput(format!("operators {i} and {j} do not commute")));
                }
            }
        }
        Ok(OperatorCube { basis, ops })
    }

    /// One basis element in degree 0 with scalar operators.
    pub fn scalars(values: &[BigRational]) -> Result<Self> {
        let m = DPBasisMonomial::new(0, 0, 0);
        let basis: BTreeMap<i64, Vec<DPBasisMonomial>> = [(0, vec![m])].into();
        let ops = values
            .iter()
            .map(|v| {
                GradedLinearMap::from_fn(basis.clone(), basis.clone(), 0, i64::MAX / 4, |x| single(*x, v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        OperatorCube::new(basis, ops)
    }
}
