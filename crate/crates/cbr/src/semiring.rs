//! The quantization algebra: Boolean power series in countably many loop
//! parameters, natural-coefficient polynomials acting on them, and the
//! completion whose elements are families of series keyed by loop-free
//! diagrams and hom signatures.
//!
//! Everything here has finite support; set semantics make addition
//! idempotent, and the canonical storage (no empty series, no zero
//! exponents) makes equality structural.

use std::collections::{BTreeMap, BTreeSet};

use crate::diagram::{compose, tensor, Color, ColoredObject, Diagram};

/// A monomial exponent: finitely many colors with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExponentVector(BTreeMap<Color, u64>);

impl ExponentVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(u32, u64)]) -> Self {
        let mut m = BTreeMap::new();
        for &(k, e) in pairs {
            if e > 0 {
                *m.entry(Color(k)).or_insert(0) += e;
            }
        }
        ExponentVector(m)
    }

    pub fn from_map(m: BTreeMap<Color, u64>) -> Self {
        ExponentVector(m.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &BTreeMap<Color, u64> {
        &self.0
    }

    pub fn mul(&self, other: &ExponentVector) -> ExponentVector {
        let mut m = self.0.clone();
        for (k, e) in &other.0 {
            *m.entry(*k).or_insert(0) += e;
        }
        ExponentVector(m)
    }
}

/// A finite-support Boolean power series: the set of monomials with
/// coefficient 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct BoolSeries(BTreeSet<ExponentVector>);

impl BoolSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        BoolSeries([ExponentVector::new()].into_iter().collect())
    }

    pub fn monomial(v: ExponentVector) -> Self {
        BoolSeries([v].into_iter().collect())
    }

    pub fn from_monomials(ms: impl IntoIterator<Item = ExponentVector>) -> Self {
        BoolSeries(ms.into_iter().collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentVector> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Idempotent addition: support union.
    pub fn add(&self, other: &BoolSeries) -> BoolSeries {
        BoolSeries(self.0.union(&other.0).cloned().collect())
    }

    /// Cauchy product over Boolean coefficients: all pairwise monomial sums.
    pub fn mul(&self, other: &BoolSeries) -> BoolSeries {
        let mut out = BTreeSet::new();
        for a in &self.0 {
            for b in &other.0 {
                out.insert(a.mul(b));
            }
        }
        BoolSeries(out)
    }

    /// The natural partial order of an idempotent monoid: `a ≤ b` iff
    /// `a + b = b`, i.e. support inclusion.
    pub fn le(&self, other: &BoolSeries) -> bool {
        self.0.is_subset(&other.0)
    }
}

/// A polynomial with natural coefficients in the loop indeterminates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NatPoly(BTreeMap<ExponentVector, u64>);

impl NatPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(n: u64) -> Self {
        let mut m = BTreeMap::new();
        if n > 0 {
            m.insert(ExponentVector::new(), n);
        }
        NatPoly(m)
    }

    pub fn variable(k: u32) -> Self {
        let mut m = BTreeMap::new();
        m.insert(ExponentVector::from_pairs(&[(k, 1)]), 1);
        NatPoly(m)
    }

    pub fn add(&self, other: &NatPoly) -> NatPoly {
        let mut m = self.0.clone();
        for (v, c) in &other.0 {
            *m.entry(v.clone()).or_insert(0) += c;
        }
        NatPoly(m)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, u64)> {
        self.0.iter().map(|(v, c)| (v, *c))
    }
}

/// The semimodule action: coefficients collapse through the unique semiring
/// morphism ℕ → 𝔹 and indeterminates map to loop parameters, then the image
/// is Cauchy-multiplied onto the series.
pub fn poly_action(p: &NatPoly, s: &BoolSeries) -> BoolSeries {
    let image = BoolSeries::from_monomials(p.terms().map(|(v, _)| v.clone()));
    image.mul(s)
}

/// The domain/codomain pair indexing a component of the completion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HomSignature {
    pub dom: ColoredObject,
    pub cod: ColoredObject,
}

impl HomSignature {
    pub fn of(d: &Diagram) -> Self {
        HomSignature {
            dom: d.dom().clone(),
            cod: d.cod().clone(),
        }
    }
}

/// A finite-support element of the completion: per hom signature, a family
/// of Boolean series keyed by loop-free diagrams of that signature.
///
/// The stored form is the unique standard presentation: no empty series and
/// no empty signature components, so structural equality is semantic
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QElement {
    components: BTreeMap<HomSignature, BTreeMap<Diagram, BoolSeries>>,
}

impl QElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(
        &self,
    ) -> impl Iterator<Item = (&HomSignature, &BTreeMap<Diagram, BoolSeries>)> {
        self.components.iter()
    }

    /// All (signature, key, series) triples in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&HomSignature, &Diagram, &BoolSeries)> {
        self.components
            .iter()
            .flat_map(|(sig, m)| m.iter().map(move |(d, s)| (sig, d, s)))
    }

    fn insert_term(&mut self, key: Diagram, series: BoolSeries) {
        if series.is_zero() {
            return;
        }
        debug_assert!(key.is_loop_free(), "keys must be loop-free");
        let sig = HomSignature::of(&key);
        let slot = self
            .components
            .entry(sig)
            .or_default()
            .entry(key)
            .or_insert_with(BoolSeries::zero);
        *slot = slot.add(&series);
    }

    /// The natural partial order: componentwise series inclusion.
    pub fn le(&self, other: &QElement) -> bool {
        self.entries().all(|(sig, key, s)| {
            other
                .components
                .get(sig)
                .and_then(|m| m.get(key))
                .map(|t| s.le(t))
                .unwrap_or(false)
        })
    }
}

/// The characteristic element of a morphism: its loop-free part keys a
/// single monomial recording the loop multiset.
pub fn chi(f: &Diagram) -> QElement {
    let loops = ExponentVector::from_map(f.loops().clone());
    let nf = f.normal_form();
    let mut loop_free_nf = nf;
    loop_free_nf.loops.clear();
    let key = loop_free_nf.reassemble();
    let mut q = QElement::zero();
    q.insert_term(key, BoolSeries::monomial(loops));
    q
}

/// Idempotent addition, componentwise and keywise.
pub fn q_add(x: &QElement, y: &QElement) -> QElement {
    let mut out = x.clone();
    for (_, key, s) in y.entries() {
        out.insert_term(key.clone(), s.clone());
    }
    out
}

pub fn q_sum<'a>(family: impl IntoIterator<Item = &'a QElement>) -> QElement {
    family
        .into_iter()
        .fold(QElement::zero(), |acc, x| q_add(&acc, x))
}

/// Bilinear extension of `chi(φ) · chi(ψ) = chi(ψ ∘ φ)`; terms with
/// incompatible signatures contribute zero. Loops created by the composition
/// reappear as monomial factors through the loop-free factoring.
pub fn q_compose_mul(x: &QElement, y: &QElement) -> QElement {
    let mut out = QElement::zero();
    for (_, phi, s1) in x.entries() {
        for (_, psi, s2) in y.entries() {
            if phi.cod() != psi.dom() {
                continue;
            }
            let composite = compose(psi, phi).expect("signatures were checked");
            accumulate_product(&mut out, &composite, s1, s2);
        }
    }
    out
}

/// Bilinear extension of `chi(φ) · chi(ψ) = chi(φ ⊗ ψ)`; always defined.
pub fn q_monoidal_mul(x: &QElement, y: &QElement) -> QElement {
    let mut out = QElement::zero();
    for (_, phi, s1) in x.entries() {
        for (_, psi, s2) in y.entries() {
            let prod = tensor(phi, psi);
            accumulate_product(&mut out, &prod, s1, s2);
        }
    }
    out
}

fn accumulate_product(out: &mut QElement, raw: &Diagram, s1: &BoolSeries, s2: &BoolSeries) {
    let created = ExponentVector::from_map(raw.loops().clone());
    let mut nf = raw.normal_form();
    nf.loops.clear();
    let key = nf.reassemble();
    let series = s1.mul(s2).mul(&BoolSeries::monomial(created));
    out.insert_term(key, series);
}

/// The unit of the monoidal product: `chi(identity(I))`.
pub fn q_monoidal_one() -> QElement {
    chi(&Diagram::identity(&ColoredObject::unit()))
}
