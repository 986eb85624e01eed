//! Linear representations of the colored diagram category from duality
//! structures: a symmetric invertible rational matrix per color. Two
//! independent evaluation paths are provided, direct contraction over the
//! matching and layer-by-layer Kronecker products of generator matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::diagram::{compose, tensor, Color, ColoredObject, Diagram, DiagramError, Side};
use crate::matrix::{MatrixError, Rational, RationalMatrix};

#[derive(Debug, Error)]
pub enum RepresentError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("no duality structure configured for color {0}")]
    UnknownColor(Color),
    #[error("zig-zag equation fails for the supplied matrices")]
    ZigZagFailure,
    #[error("generator word layers are incompatible: {0}")]
    IncompatibleLayers(String),
    #[error("morphism is not loop-free")]
    NotLoopFree,
    #[error("dimension 0 is not allowed")]
    ZeroDimension,
}

/// A self-duality on a `d`-dimensional space: the counit matrix `X` together
/// with its exact inverse, which is the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityStructure {
    dim: usize,
    counit_matrix: RationalMatrix,
    unit_matrix: RationalMatrix,
}

impl DualityStructure {
    /// Build from a symmetric invertible matrix; the unit is derived as the
    /// exact inverse and the zig-zag equation is verified.
    pub fn from_matrix(x: RationalMatrix) -> Result<Self, RepresentError> {
        if !x.is_square() {
            return Err(MatrixError::NotSquare {
                rows: x.rows(),
                cols: x.cols(),
            }
            .into());
        }
        if !x.is_symmetric() {
            return Err(MatrixError::NotSymmetric.into());
        }
        let inv = x.inverse()?;
        let s = DualityStructure {
            dim: x.rows(),
            counit_matrix: x,
            unit_matrix: inv,
        };
        if !s.zig_zag_holds() {
            return Err(RepresentError::ZigZagFailure);
        }
        Ok(s)
    }

    pub fn standard(dim: usize) -> Self {
        DualityStructure {
            dim,
            counit_matrix: RationalMatrix::identity(dim),
            unit_matrix: RationalMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn counit_matrix(&self) -> &RationalMatrix {
        &self.counit_matrix
    }

    pub fn unit_matrix(&self) -> &RationalMatrix {
        &self.unit_matrix
    }

    /// `(e ⊗ 1) ∘ (1 ⊗ i) = 1` with `e = vec(X)ᵀ` and `i = vec(X⁻¹)`.
    fn zig_zag_holds(&self) -> bool {
        let d = self.dim;
        let e = self.counit_row();
        let i = self.unit_column();
        let id = RationalMatrix::identity(d);
        let lhs = e
            .kronecker(&id)
            .mul(&id.kronecker(&i))
            .expect("zig-zag shapes agree");
        lhs == id
    }

    /// The counit as a `1 × d²` row, row-major over index pairs.
    pub fn counit_row(&self) -> RationalMatrix {
        let d = self.dim;
        let mut m = RationalMatrix::zeros(1, d * d);
        for a in 0..d {
            for b in 0..d {
                m.set(0, a * d + b, self.counit_matrix.get(a, b).clone());
            }
        }
        m
    }

    /// The unit as a `d² × 1` column, row-major over index pairs.
    pub fn unit_column(&self) -> RationalMatrix {
        let d = self.dim;
        let mut m = RationalMatrix::zeros(d * d, 1);
        for a in 0..d {
            for b in 0..d {
                m.set(a * d + b, 0, self.unit_matrix.get(a, b).clone());
            }
        }
        m
    }

    /// The scalar `e · i`, i.e. the value of a closed loop in this structure.
    pub fn loop_value(&self) -> Rational {
        self.counit_row()
            .mul(&self.unit_column())
            .expect("row times column")
            .get(0, 0)
            .clone()
    }
}

/// Duality structures per color; the data of the evaluation functor.
#[derive(Debug, Clone, Default)]
pub struct Representation {
    colors: BTreeMap<Color, DualityStructure>,
}

impl Representation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, k: Color, s: DualityStructure) {
        self.colors.insert(k, s);
    }

    /// Identity counit matrices of the given dimensions on colors 0, 1, ….
    pub fn standard(dims: &[usize]) -> Self {
        let mut rep = Representation::new();
        for (k, &d) in dims.iter().enumerate() {
            rep.insert(Color(k as u32), DualityStructure::standard(d));
        }
        rep
    }

    pub fn structure(&self, k: Color) -> Result<&DualityStructure, RepresentError> {
        self.colors.get(&k).ok_or(RepresentError::UnknownColor(k))
    }

    pub fn colors(&self) -> impl Iterator<Item = (Color, &DualityStructure)> {
        self.colors.iter().map(|(k, s)| (*k, s))
    }

    fn dims_of(&self, obj: &ColoredObject) -> Result<Vec<usize>, RepresentError> {
        obj.colors()
            .iter()
            .map(|&k| self.structure(k).map(|s| s.dim()))
            .collect()
    }

    pub fn space_dim(&self, obj: &ColoredObject) -> Result<usize, RepresentError> {
        Ok(self.dims_of(obj)?.iter().product())
    }
}

fn unflatten(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut idx = vec![0usize; dims.len()];
    for pos in (0..dims.len()).rev() {
        idx[pos] = flat % dims[pos];
        flat /= dims[pos];
    }
    idx
}

/// Evaluate a diagram by direct contraction over its matching.
///
/// The result has shape `(∏ d over cod) × (∏ d over dom)` with row-major
/// flattened multi-indices. A through strand contributes a Kronecker delta,
/// a domain-domain pair an entry of `X`, a codomain-codomain pair an entry of
/// `X⁻¹`, and every free loop a factor of the loop value.
pub fn eval(rep: &Representation, f: &Diagram) -> Result<RationalMatrix, RepresentError> {
    let dom_dims = rep.dims_of(f.dom())?;
    let cod_dims = rep.dims_of(f.cod())?;
    let rows: usize = cod_dims.iter().product();
    let cols: usize = dom_dims.iter().product();

    let mut loop_factor = Rational::one();
    for (&k, &n) in f.loops() {
        let v = rep.structure(k)?.loop_value();
        for _ in 0..n {
            loop_factor *= &v;
        }
    }

    let pairs: Vec<_> = f.pairs().collect();
    let mut out = RationalMatrix::zeros(rows, cols);
    for r in 0..rows {
        let j = unflatten(r, &cod_dims);
        for c in 0..cols {
            let i = unflatten(c, &dom_dims);
            let mut v = loop_factor.clone();
            for &(a, b) in &pairs {
                let factor = match (a.side, b.side) {
                    (Side::Dom, Side::Cod) => {
                        if i[a.index] == j[b.index] {
                            continue;
                        }
                        Rational::zero()
                    }
                    (Side::Dom, Side::Dom) => {
                        let x = rep.structure(f.dom().color(a.index))?;
                        x.counit_matrix().get(i[a.index], i[b.index]).clone()
                    }
                    (Side::Cod, Side::Cod) => {
                        let x = rep.structure(f.cod().color(a.index))?;
                        x.unit_matrix().get(j[a.index], j[b.index]).clone()
                    }
                    (Side::Cod, Side::Dom) => unreachable!("pairs are stored ordered"),
                };
                v *= &factor;
                if v.is_zero() {
                    break;
                }
            }
            if !v.is_zero() {
                out.set(r, c, v);
            }
        }
    }
    Ok(out)
}

/// One generator event in a layer of a generator word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    /// No event; the layer is an identity.
    Id,
    Braid(Color, Color),
    Unit(Color),
    Counit(Color),
}

/// A single layer: one generator event at a stated strand position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slice {
    pub event: Event,
    pub pos: usize,
}

/// A word in the elementary generators: a start object and a sequence of
/// layers, each acting at a position of the running boundary object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorWord {
    pub start: ColoredObject,
    pub slices: Vec<Slice>,
}

impl GeneratorWord {
    pub fn new(start: ColoredObject, slices: Vec<Slice>) -> Self {
        GeneratorWord { start, slices }
    }

    /// The boundary object after applying one slice, checking compatibility.
    pub fn apply_slice(obj: &ColoredObject, s: &Slice) -> Result<ColoredObject, RepresentError> {
        let colors = obj.colors();
        let bad = |msg: String| Err(RepresentError::IncompatibleLayers(msg));
        match s.event {
            Event::Id => Ok(obj.clone()),
            Event::Braid(k, l) => {
                if s.pos + 1 >= colors.len() {
                    return bad(format!("braid at {} overruns object {obj}", s.pos));
                }
                if colors[s.pos] != k || colors[s.pos + 1] != l {
                    return bad(format!(
                        "braid({k},{l}) at {} does not match colors of {obj}",
                        s.pos
                    ));
                }
                let mut v = colors.to_vec();
                v.swap(s.pos, s.pos + 1);
                Ok(ColoredObject::new(v))
            }
            Event::Unit(k) => {
                if s.pos > colors.len() {
                    return bad(format!("unit at {} overruns object {obj}", s.pos));
                }
                let mut v = colors.to_vec();
                v.insert(s.pos, k);
                v.insert(s.pos, k);
                Ok(ColoredObject::new(v))
            }
            Event::Counit(k) => {
                if s.pos + 1 >= colors.len() {
                    return bad(format!("counit at {} overruns object {obj}", s.pos));
                }
                if colors[s.pos] != k || colors[s.pos + 1] != k {
                    return bad(format!(
                        "counit({k}) at {} does not match colors of {obj}",
                        s.pos
                    ));
                }
                let mut v = colors.to_vec();
                v.remove(s.pos + 1);
                v.remove(s.pos);
                Ok(ColoredObject::new(v))
            }
        }
    }

    /// The final boundary object, validating every layer.
    pub fn end(&self) -> Result<ColoredObject, RepresentError> {
        let mut obj = self.start.clone();
        for s in &self.slices {
            obj = Self::apply_slice(&obj, s)?;
        }
        Ok(obj)
    }
}

fn slice_diagram(obj: &ColoredObject, s: &Slice) -> Result<Diagram, RepresentError> {
    let gen = match s.event {
        Event::Id => return Ok(Diagram::identity(obj)),
        Event::Braid(k, l) => Diagram::braid(k, l),
        Event::Unit(k) => Diagram::unit(k),
        Event::Counit(k) => Diagram::counit(k),
    };
    // validate against the running object first
    GeneratorWord::apply_slice(obj, s)?;
    let before = ColoredObject::new(obj.colors()[..s.pos].to_vec());
    let after_start = s.pos + gen.dom().len();
    let after = ColoredObject::new(obj.colors()[after_start..].to_vec());
    Ok(tensor(
        &tensor(&Diagram::identity(&before), &gen),
        &Diagram::identity(&after),
    ))
}

/// Interpret a generator word as a diagram by composing its layers.
pub fn fold_word(w: &GeneratorWord) -> Result<Diagram, RepresentError> {
    let mut acc = Diagram::identity(&w.start);
    let mut obj = w.start.clone();
    for s in &w.slices {
        let layer = slice_diagram(&obj, s)?;
        acc = compose(&layer, &acc)?;
        obj = GeneratorWord::apply_slice(&obj, s)?;
    }
    Ok(acc)
}

/// Independent evaluation oracle: Kronecker products of generator matrices,
/// multiplied layer by layer. Agrees exactly with [`eval`] ∘ [`fold_word`].
pub fn eval_word(rep: &Representation, w: &GeneratorWord) -> Result<RationalMatrix, RepresentError> {
    let mut obj = w.start.clone();
    let mut acc = RationalMatrix::identity(rep.space_dim(&obj)?);
    for s in &w.slices {
        let m = slice_matrix(rep, &obj, s)?;
        acc = m.mul(&acc)?;
        obj = GeneratorWord::apply_slice(&obj, s)?;
    }
    Ok(acc)
}

/// The commutation matrix permuting basis tuples `(i, j) ↦ (j, i)`.
fn commutation_matrix(dk: usize, dl: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(dk * dl, dk * dl);
    for i in 0..dk {
        for j in 0..dl {
            // input index (i, j) over (d_k, d_l); output index (j, i)
            m.set(j * dk + i, i * dl + j, Rational::one());
        }
    }
    m
}

fn slice_matrix(
    rep: &Representation,
    obj: &ColoredObject,
    s: &Slice,
) -> Result<RationalMatrix, RepresentError> {
    GeneratorWord::apply_slice(obj, s)?;
    let (genmat, span) = match s.event {
        Event::Id => return Ok(RationalMatrix::identity(rep.space_dim(obj)?)),
        Event::Braid(k, l) => {
            let dk = rep.structure(k)?.dim();
            let dl = rep.structure(l)?.dim();
            (commutation_matrix(dk, dl), 2)
        }
        Event::Unit(k) => (rep.structure(k)?.unit_column(), 0),
        Event::Counit(k) => (rep.structure(k)?.counit_row(), 2),
    };
    let before = ColoredObject::new(obj.colors()[..s.pos].to_vec());
    let after = ColoredObject::new(obj.colors()[s.pos + span..].to_vec());
    let left = RationalMatrix::identity(rep.space_dim(&before)?);
    let right = RationalMatrix::identity(rep.space_dim(&after)?);
    Ok(left.kronecker(&genmat).kronecker(&right))
}

/// Pass/fail record for one relation instance.
#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub relation: &'static str,
    pub colors: Vec<Color>,
    pub diagrams_equal: bool,
    pub matrices_equal: bool,
}

#[derive(Debug, Clone, Default)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.diagrams_equal && c.matrices_equal)
    }
}

/// Both sides of each defining relation, as generator words.
pub fn relation_words(palette: &[Color]) -> Vec<(&'static str, Vec<Color>, GeneratorWord, GeneratorWord)> {
    let mut out = Vec::new();
    for &k in palette {
        let strand = ColoredObject::new(vec![k]);
        // (A1) zig-zag: (e ⊗ 1) ∘ (1 ⊗ i) = 1
        out.push((
            "A1",
            vec![k],
            GeneratorWord::new(
                strand.clone(),
                vec![
                    Slice { event: Event::Unit(k), pos: 1 },
                    Slice { event: Event::Counit(k), pos: 0 },
                ],
            ),
            GeneratorWord::new(strand.clone(), vec![]),
        ));
        // (A3) de-looping: b ∘ i = i
        out.push((
            "A3",
            vec![k],
            GeneratorWord::new(
                ColoredObject::unit(),
                vec![
                    Slice { event: Event::Unit(k), pos: 0 },
                    Slice { event: Event::Braid(k, k), pos: 0 },
                ],
            ),
            GeneratorWord::new(
                ColoredObject::unit(),
                vec![Slice { event: Event::Unit(k), pos: 0 }],
            ),
        ));
    }
    for &k in palette {
        for &l in palette {
            // (A2) sliding
            let start = ColoredObject::new(vec![k, l, k]);
            out.push((
                "A2",
                vec![k, l],
                GeneratorWord::new(
                    start.clone(),
                    vec![
                        Slice { event: Event::Braid(l, k), pos: 1 },
                        Slice { event: Event::Counit(k), pos: 0 },
                    ],
                ),
                GeneratorWord::new(
                    start,
                    vec![
                        Slice { event: Event::Braid(k, l), pos: 0 },
                        Slice { event: Event::Counit(k), pos: 1 },
                    ],
                ),
            ));
            // (A4) double crossing
            let start = ColoredObject::new(vec![k, l]);
            out.push((
                "A4",
                vec![k, l],
                GeneratorWord::new(
                    start.clone(),
                    vec![
                        Slice { event: Event::Braid(k, l), pos: 0 },
                        Slice { event: Event::Braid(l, k), pos: 0 },
                    ],
                ),
                GeneratorWord::new(start, vec![]),
            ));
        }
    }
    for &j in palette {
        for &k in palette {
            for &l in palette {
                // (A5) Yang-Baxter
                let start = ColoredObject::new(vec![j, k, l]);
                out.push((
                    "A5",
                    vec![j, k, l],
                    GeneratorWord::new(
                        start.clone(),
                        vec![
                            Slice { event: Event::Braid(k, l), pos: 1 },
                            Slice { event: Event::Braid(j, l), pos: 0 },
                            Slice { event: Event::Braid(j, k), pos: 1 },
                        ],
                    ),
                    GeneratorWord::new(
                        start,
                        vec![
                            Slice { event: Event::Braid(j, k), pos: 0 },
                            Slice { event: Event::Braid(j, l), pos: 1 },
                            Slice { event: Event::Braid(k, l), pos: 0 },
                        ],
                    ),
                ));
            }
        }
    }
    out
}

/// Check every defining relation on all color tuples from the palette, both
/// as diagram equalities and as exact matrix equalities of the generator-word
/// images.
pub fn verify_relations(
    rep: &Representation,
    palette: &[Color],
) -> Result<RelationReport, RepresentError> {
    let mut report = RelationReport::default();
    for (name, colors, lhs, rhs) in relation_words(palette) {
        let diagrams_equal = fold_word(&lhs)? == fold_word(&rhs)?;
        let matrices_equal = eval_word(rep, &lhs)? == eval_word(rep, &rhs)?;
        report.checks.push(RelationCheck {
            relation: name,
            colors,
            diagrams_equal,
            matrices_equal,
        });
    }
    Ok(report)
}

/// The expected trace of `Y(reflect(f) ∘ f)` for a loop-free `f`:
/// `∏ d_k^{(|c⁻¹(k)| + |c′⁻¹(k)|)/2}`.
pub fn expected_trace(rep: &Representation, f: &Diagram) -> Result<Rational, RepresentError> {
    let mut counts: BTreeMap<Color, u64> = BTreeMap::new();
    for &k in f.dom().colors().iter().chain(f.cod().colors()) {
        *counts.entry(k).or_insert(0) += 1;
    }
    let mut expected = Rational::one();
    for (k, n) in counts {
        debug_assert_eq!(n % 2, 0, "matching forces even color counts");
        let d = Rational::from(BigInt::from(rep.structure(k)?.dim()));
        for _ in 0..(n / 2) {
            expected *= &d;
        }
    }
    Ok(expected)
}

/// Verify the trace identity for a loop-free morphism.
pub fn trace_check(rep: &Representation, f: &Diagram) -> Result<bool, RepresentError> {
    if !f.is_loop_free() {
        return Err(RepresentError::NotLoopFree);
    }
    let m = eval(rep, &compose(&f.reflect(), f)?)?;
    Ok(m.trace() == expected_trace(rep, f)?)
}

/// Outcome of the multiplicative-independence test on a dimension sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaithfulnessVerdict {
    pub faithful: bool,
    /// When not faithful: a nonzero integer vector `l` with `∏ d_k^{l_k} = 1`,
    /// primitive and with positive leading entry.
    pub witness: Option<Vec<i64>>,
}

fn factorize(mut n: u64) -> BTreeMap<u64, u64> {
    let mut f = BTreeMap::new();
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            *f.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        *f.entry(n).or_insert(0) += 1;
    }
    f
}

/// Decide whether the dimension sequence makes the evaluation functor
/// faithful: no `d_k = 1` and multiplicatively independent dims, i.e. the
/// prime-exponent vectors are linearly independent over the rationals.
pub fn is_faithful(dims: &[u64]) -> Result<FaithfulnessVerdict, RepresentError> {
    if dims.iter().any(|&d| d == 0) {
        return Err(RepresentError::ZeroDimension);
    }
    if let Some(i) = dims.iter().position(|&d| d == 1) {
        let mut witness = vec![0i64; dims.len()];
        witness[i] = 1;
        return Ok(FaithfulnessVerdict {
            faithful: false,
            witness: Some(witness),
        });
    }
    // Exponent matrix: one row per dim, one column per prime.
    let mut primes: Vec<u64> = Vec::new();
    let factored: Vec<BTreeMap<u64, u64>> = dims.iter().map(|&d| factorize(d)).collect();
    for f in &factored {
        for &p in f.keys() {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort_unstable();
    let n = dims.len();
    let m = primes.len();
    // Solve lᵀ E = 0 by eliminating on the columns of E over ℚ.
    let mut rows: Vec<Vec<Rational>> = factored
        .iter()
        .map(|f| {
            primes
                .iter()
                .map(|p| Rational::from(BigInt::from(f.get(p).copied().unwrap_or(0))))
                .collect()
        })
        .collect();
    // Track the combination of original rows that produced each current row.
    let mut combo: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut rank = 0usize;
    for col in 0..m {
        let pivot = (rank..n).find(|&r| !rows[r][col].is_zero());
        let pivot = match pivot {
            None => continue,
            Some(p) => p,
        };
        rows.swap(rank, pivot);
        combo.swap(rank, pivot);
        let pv = rows[rank][col].clone();
        for r in 0..n {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pv;
            for c in 0..m {
                let v = &rows[r][c] - &factor * &rows[rank][c];
                rows[r][c] = v;
            }
            for c in 0..n {
                let v = &combo[r][c] - &factor * &combo[rank][c];
                combo[r][c] = v;
            }
        }
        rank += 1;
    }
    if rank == n {
        return Ok(FaithfulnessVerdict {
            faithful: true,
            witness: None,
        });
    }
    // Any zero row's combination is a rational left-kernel vector.
    let zero_row = (0..n)
        .find(|&r| rows[r].iter().all(|x| x.is_zero()))
        .expect("rank deficiency produces a zero row");
    let witness = primitive_integer(&combo[zero_row]);
    Ok(FaithfulnessVerdict {
        faithful: false,
        witness: Some(witness),
    })
}

/// Scale a rational vector to a primitive integer vector with positive
/// leading nonzero entry.
fn primitive_integer(v: &[Rational]) -> Vec<i64> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() {
        gcd = BigInt::one();
    }
    let mut out: Vec<BigInt> = ints.into_iter().map(|x| x / &gcd).collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut out {
                *x = -x.clone();
            }
        }
    }
    out.into_iter()
        .map(|x| i64::try_from(x).expect("witness entries fit in i64 at desk scale"))
        .collect()
}
