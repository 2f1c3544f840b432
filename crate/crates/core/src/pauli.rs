//! Pauli-string algebra and its action on state vectors.
//!
//! Basis convention: qubit `k` is bit `k` of the basis index (little-endian)
//! and `|0>` is the +1 eigenstate of `Z`.
//!
//! A [`PauliString`] with masks `(x, z)` denotes the literal operator product
//! `X^x Z^z`, i.e. `Z` factors act first. A site with both bits set is
//! therefore `XZ = -iY`; the phase lives in the coefficient of the owning
//! [`PauliSum`] term. With this convention
//! `X^x Z^z |b> = (-1)^{popcount(b & z)} |b ^ x>`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest register a [`PauliString`] can address.
pub const MAX_PAULI_QUBITS: usize = 63;
/// Largest register a [`StateVector`] may span.
pub const MAX_STATE_QUBITS: usize = 30;
/// Largest register [`to_dense`] will materialize.
pub const MAX_DENSE_QUBITS: usize = 14;
/// Terms with a coefficient magnitude below this are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

const CHUNK: usize = 1 << 12;
const MAX_TABLE_BITS: usize = 24;

#[inline]
fn parity_sign(bits: u64) -> f64 {
    if bits.count_ones() & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PauliString {
    x: u64,
    z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn new(x_mask: u64, z_mask: u64) -> Self {
        Self {
            x: x_mask,
            z: z_mask,
        }
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    /// `self * other = sign * product`.
    pub fn compose(&self, other: &PauliString) -> (f64, PauliString) {
        // Z^a X^c = (-1)^{|a & c|} X^c Z^a
        let sign = parity_sign(self.z & other.x);
        (sign, PauliString::new(self.x ^ other.x, self.z ^ other.z))
    }

    /// `(X^x Z^z)^dagger = adjoint_sign * X^x Z^z`.
    pub fn adjoint_sign(&self) -> f64 {
        parity_sign(self.x & self.z)
    }

    fn fits(&self, n_qubits: usize) -> bool {
        n_qubits >= 64 || self.support() >> n_qubits == 0
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support() == 0 {
            return write!(f, "I");
        }
        let mut first = true;
        for k in 0..64 {
            let (xb, zb) = ((self.x >> k) & 1, (self.z >> k) & 1);
            let sym = match (xb, zb) {
                (0, 0) => continue,
                (1, 0) => "X",
                (0, 1) => "Z",
                _ => "XZ",
            };
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{sym}{k}")?;
            first = false;
        }
        Ok(())
    }
}

/// A canonical weighted sum of Pauli strings on a fixed register.
#[derive(Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliString, C64>,
}

impl fmt::Debug for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliSum[{}](", self.n_qubits)?;
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)*{:?}", c.re, c.im, p)?;
        }
        write!(f, ")")
    }
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_PAULI_QUBITS {
            return Err(Error::Invalid(format!(
                "qubit count must be in 1..={MAX_PAULI_QUBITS}, got {n_qubits}"
            )));
        }
        Ok(Self {
            n_qubits,
            terms: BTreeMap::new(),
        })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::scalar(n_qubits, C64::new(1.0, 0.0))
    }

    pub fn scalar(n_qubits: usize, value: C64) -> Result<Self> {
        Self::term(n_qubits, value, PauliString::IDENTITY)
    }

    pub fn term(n_qubits: usize, coeff: C64, pauli: PauliString) -> Result<Self> {
        let mut out = Self::zero(n_qubits)?;
        out.push(coeff, pauli)?;
        Ok(out)
    }

    pub fn x(n_qubits: usize, site: usize) -> Result<Self> {
        check_site(site, n_qubits)?;
        Self::term(n_qubits, C64::new(1.0, 0.0), PauliString::new(1 << site, 0))
    }

    pub fn z(n_qubits: usize, site: usize) -> Result<Self> {
        check_site(site, n_qubits)?;
        Self::term(n_qubits, C64::new(1.0, 0.0), PauliString::new(0, 1 << site))
    }

    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C64, PauliString)>,
    {
        let mut out = Self::zero(n_qubits)?;
        for (c, p) in terms {
            out.push(c, p)?;
        }
        Ok(out)
    }

    /// Adds `coeff * pauli`, merging with an existing term and pruning.
    pub fn push(&mut self, coeff: C64, pauli: PauliString) -> Result<()> {
        if !pauli.fits(self.n_qubits) {
            return Err(Error::Index {
                index: 63 - pauli.support().leading_zeros() as usize,
                limit: self.n_qubits,
            });
        }
        let entry = self.terms.entry(pauli).or_insert(C64::new(0.0, 0.0));
        *entry += coeff;
        if entry.norm() < PRUNE_THRESHOLD {
            self.terms.remove(&pauli);
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (PauliString, C64)> + '_ {
        self.terms.iter().map(|(p, c)| (*p, *c))
    }

    pub fn coefficient(&self, pauli: PauliString) -> C64 {
        self.terms.get(&pauli).copied().unwrap_or_default()
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(PauliString::is_diagonal)
    }

    /// Sum of coefficient magnitudes, an upper bound on the operator norm.
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    fn check_same(&self, other: &PauliSum) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.push(c, p)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PauliSum) -> Result<PauliSum> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: C64) -> PauliSum {
        let terms = self
            .terms
            .iter()
            .map(|(p, c)| (*p, c * factor))
            .filter(|(_, c)| c.norm() >= PRUNE_THRESHOLD)
            .collect();
        PauliSum {
            n_qubits: self.n_qubits,
            terms,
        }
    }

    pub fn scale_real(&self, factor: f64) -> PauliSum {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same(other)?;
        let mut out = PauliSum::zero(self.n_qubits)?;
        for (pa, ca) in self.terms() {
            for (pb, cb) in other.terms() {
                let (sign, p) = pa.compose(&pb);
                out.push(ca * cb * sign, p)?;
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> PauliSum {
        let terms = self
            .terms
            .iter()
            .map(|(p, c)| (*p, c.conj() * p.adjoint_sign()))
            .collect();
        PauliSum {
            n_qubits: self.n_qubits,
            terms,
        }
    }

    /// Term-by-term comparison with the adjoint.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms
            .iter()
            .all(|(p, c)| (c - c.conj() * p.adjoint_sign()).norm() <= tol)
    }

    /// Largest coefficient difference over the union of both term sets.
    pub fn max_coefficient_diff(&self, other: &PauliSum) -> f64 {
        let mut worst: f64 = 0.0;
        for (p, c) in self.terms() {
            worst = worst.max((c - other.coefficient(p)).norm());
        }
        for (p, c) in other.terms() {
            worst = worst.max((c - self.coefficient(p)).norm());
        }
        worst
    }
}

fn check_site(site: usize, n_qubits: usize) -> Result<()> {
    if site >= n_qubits {
        return Err(Error::Index {
            index: site,
            limit: n_qubits,
        });
    }
    Ok(())
}

/// Computational-basis level selected by a projector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Zero,
    One,
}

/// `(I + Z)/2` for [`Level::Zero`], `(I - Z)/2` for [`Level::One`].
pub fn projector(site: usize, which: Level, n_qubits: usize) -> Result<PauliSum> {
    check_site(site, n_qubits)?;
    let zsign = match which {
        Level::Zero => 0.5,
        Level::One => -0.5,
    };
    PauliSum::from_terms(
        n_qubits,
        [
            (C64::new(0.5, 0.0), PauliString::IDENTITY),
            (C64::new(zsign, 0.0), PauliString::new(0, 1 << site)),
        ],
    )
}

pub fn multiply(a: &PauliSum, b: &PauliSum) -> Result<PauliSum> {
    a.multiply(b)
}

/// Something that maps amplitude arrays linearly.
pub trait Operator: Sync {
    fn n_qubits(&self) -> usize;

    /// Overwrites `output` with `op * input`.
    fn apply_into(&self, input: &[C64], output: &mut [C64]);

    fn dim(&self) -> usize {
        1 << self.n_qubits()
    }

    /// Dense matrix built column by column from `apply_into`.
    fn dense_matrix(&self) -> Result<DMatrix<C64>> {
        let n = self.n_qubits();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooLarge {
                what: "dense matrix",
                n_qubits: n,
                limit: MAX_DENSE_QUBITS,
            });
        }
        let dim = self.dim();
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        let mut e = vec![C64::default(); dim];
        let mut col = vec![C64::default(); dim];
        for b in 0..dim {
            e[b] = C64::new(1.0, 0.0);
            self.apply_into(&e, &mut col);
            e[b] = C64::default();
            m.column_mut(b).copy_from_slice(&col);
        }
        Ok(m)
    }
}

impl Operator for PauliSum {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn apply_into(&self, input: &[C64], output: &mut [C64]) {
        let terms: Vec<(u64, u64, C64)> = self.terms().map(|(p, c)| (p.x, p.z, c)).collect();
        output
            .par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(chunk, out)| {
                let base = chunk * CHUNK;
                for (off, o) in out.iter_mut().enumerate() {
                    let b = (base + off) as u64;
                    let mut acc = C64::default();
                    for &(x, z, c) in &terms {
                        let src = b ^ x;
                        acc += c * parity_sign(src & z) * input[src as usize];
                    }
                    *o = acc;
                }
            });
    }
}

/// Normalized (unless stated otherwise) amplitudes over `2^n` basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_state_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::Index { index, limit: dim });
        }
        let mut amps = vec![C64::default(); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps raw amplitudes without renormalizing.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        check_state_size(n_qubits)?;
        if amps.len() != 1usize << n_qubits {
            return Err(Error::Invalid(format!(
                "expected {} amplitudes for {n_qubits} qubits, got {}",
                1usize << n_qubits,
                amps.len()
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Domain("cannot normalize a zero or non-finite state".into()));
        }
        let inv = 1.0 / n;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        Ok(inner(&self.amps, &other.amps))
    }

    /// Euclidean distance `||self - other||`.
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

fn check_state_size(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_STATE_QUBITS {
        return Err(Error::TooLarge {
            what: "state vector",
            n_qubits,
            limit: MAX_STATE_QUBITS,
        });
    }
    Ok(())
}

pub(crate) fn norm_sqr(a: &[C64]) -> f64 {
    a.par_chunks(CHUNK)
        .map(|c| c.iter().map(|v| v.norm_sqr()).sum::<f64>())
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

/// `sum_b conj(a_b) b_b`, accumulated per chunk in a fixed order.
pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.conj() * q).sum::<C64>())
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

fn check_op_state(op: &impl Operator, psi: &StateVector) -> Result<()> {
    if op.n_qubits() != psi.n_qubits() {
        return Err(Error::Dimension {
            expected: op.n_qubits(),
            got: psi.n_qubits(),
        });
    }
    Ok(())
}

/// `op |psi>`, not renormalized.
pub fn apply(op: &impl Operator, psi: &StateVector) -> Result<StateVector> {
    check_op_state(op, psi)?;
    let mut out = vec![C64::default(); psi.dim()];
    op.apply_into(psi.amplitudes(), &mut out);
    StateVector::from_amplitudes(psi.n_qubits(), out)
}

/// `<psi|op|psi>`.
pub fn expectation(op: &impl Operator, psi: &StateVector) -> Result<C64> {
    let image = apply(op, psi)?;
    Ok(inner(psi.amplitudes(), image.amplitudes()))
}

/// Expectation of an operator known to be Hermitian; a non-negligible
/// imaginary part is reported as an internal inconsistency.
pub fn expectation_real(op: &PauliSum, psi: &StateVector) -> Result<f64> {
    let v = expectation(op, psi)?;
    let tol = 1e-12 * op.one_norm().max(1.0);
    if v.im.abs() > tol {
        return Err(Error::Consistency(format!(
            "imaginary part {:.3e} in expectation of a Hermitian operator",
            v.im
        )));
    }
    Ok(v.re)
}

/// Explicit matrix of a Pauli sum; refuses registers above [`MAX_DENSE_QUBITS`].
pub fn to_dense(op: &PauliSum) -> Result<DMatrix<C64>> {
    let n = op.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge {
            what: "dense matrix",
            n_qubits: n,
            limit: MAX_DENSE_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for (p, c) in op.terms() {
        for b in 0..dim as u64 {
            m[((b ^ p.x) as usize, b as usize)] += c * parity_sign(b & p.z);
        }
    }
    Ok(m)
}

/// In-place unnormalized Walsh-Hadamard transform:
/// `a'[k] = sum_j a[j] (-1)^{popcount(j & k)}`.
pub(crate) fn walsh_hadamard(a: &mut [C64]) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in a.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*u + *v, *u - *v);
                *u = s;
                *v = d;
            }
        }
        h *= 2;
    }
}

/// Extracts the bits of a fixed mask into a dense index.
#[derive(Clone, Debug)]
struct BitGather {
    // (source shift, run mask, destination shift) per contiguous run
    runs: Vec<(u32, u64, u32)>,
}

impl BitGather {
    fn new(mask: u64) -> Self {
        let mut runs = Vec::new();
        let mut rest = mask;
        let mut dst = 0u32;
        while rest != 0 {
            let start = rest.trailing_zeros();
            let len = (rest >> start).trailing_ones();
            let run = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            runs.push((start, run, dst));
            dst += len;
            rest &= !(run << start);
        }
        Self { runs }
    }

    #[inline]
    fn gather(&self, b: u64) -> usize {
        let mut out = 0u64;
        for &(src, run, dst) in &self.runs {
            out |= ((b >> src) & run) << dst;
        }
        out as usize
    }
}

#[derive(Clone, Debug)]
struct CompiledGroup {
    x: u64,
    gather: BitGather,
    table: Arc<Vec<C64>>,
    scale: C64,
}

/// A Pauli sum regrouped by X mask, with the Z-dependent coefficient of each
/// group tabulated over the group's Z support.
///
/// Applying it costs one table lookup per group per amplitude, independent
/// of how many Pauli strings share the group.
#[derive(Clone, Debug)]
pub struct CompiledOperator {
    n_qubits: usize,
    groups: Vec<CompiledGroup>,
}

impl CompiledOperator {
    pub fn new(op: &PauliSum) -> Result<Self> {
        let mut by_x: BTreeMap<u64, Vec<(u64, C64)>> = BTreeMap::new();
        for (p, c) in op.terms() {
            by_x.entry(p.x).or_default().push((p.z, c));
        }
        let mut groups = Vec::with_capacity(by_x.len());
        for (x, terms) in by_x {
            let support = terms.iter().fold(0u64, |acc, (z, _)| acc | z);
            let bits = support.count_ones() as usize;
            if bits > MAX_TABLE_BITS {
                return Err(Error::TooLarge {
                    what: "coefficient table",
                    n_qubits: bits,
                    limit: MAX_TABLE_BITS,
                });
            }
            let gather = BitGather::new(support);
            let mut table = vec![C64::default(); 1 << bits];
            for (z, c) in terms {
                table[gather.gather(z)] += c;
            }
            walsh_hadamard(&mut table);
            groups.push(CompiledGroup {
                x,
                gather,
                table: Arc::new(table),
                scale: C64::new(1.0, 0.0),
            });
        }
        Ok(Self {
            n_qubits: op.n_qubits(),
            groups,
        })
    }

    /// Weighted sum of compiled operators; tables are shared, not copied.
    pub fn combine<'a, I>(n_qubits: usize, parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C64, &'a CompiledOperator)>,
    {
        let mut groups = Vec::new();
        for (w, part) in parts {
            if part.n_qubits != n_qubits {
                return Err(Error::Dimension {
                    expected: n_qubits,
                    got: part.n_qubits,
                });
            }
            groups.extend(part.groups.iter().map(|g| CompiledGroup {
                scale: g.scale * w,
                ..g.clone()
            }));
        }
        Ok(Self { n_qubits, groups })
    }

    #[inline]
    fn row(&self, b: u64, input: &[C64]) -> C64 {
        let mut acc = C64::default();
        for g in &self.groups {
            let src = b ^ g.x;
            acc += g.scale * g.table[g.gather.gather(src)] * input[src as usize];
        }
        acc
    }

    /// `<psi|op|psi>` without materializing `op|psi>`.
    pub fn expectation(&self, psi: &StateVector) -> Result<C64> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                got: psi.n_qubits(),
            });
        }
        let amps = psi.amplitudes();
        Ok(amps
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(chunk, part)| {
                let base = chunk * CHUNK;
                part.iter()
                    .enumerate()
                    .map(|(off, a)| a.conj() * self.row((base + off) as u64, amps))
                    .sum::<C64>()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .sum())
    }
}

impl Operator for CompiledOperator {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn apply_into(&self, input: &[C64], output: &mut [C64]) {
        output
            .par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(chunk, out)| {
                let base = chunk * CHUNK;
                for (off, o) in out.iter_mut().enumerate() {
                    *o = self.row((base + off) as u64, input);
                }
            });
    }
}
