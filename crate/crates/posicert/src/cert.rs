//! The certificate data model: quadratic-module and preordering
//! representations, the exact verifier, and the JSON wire format.
//!
//! A certificate over generators `s_1, ..., s_m` is a finite sum
//! `sum_e sigma_e * s^e` where `e` ranges over 0/1 exponent vectors and each
//! `sigma_e` is a positive rational combination of squared polynomials.
//! Module-form certificates allow at most one generator per term
//! (`sigma_0 + sum_i sigma_i s_i`); preordering form allows arbitrary 0/1
//! products. Verification expands the certificate exactly and compares it
//! coefficient by coefficient with the target polynomial, so an accepted
//! certificate is an immediate witness that the target is non-negative on
//! the region the generators define. Scalar weights such as `1/(b - a)` are
//! kept as explicit positive coefficients on squares, which stays inside
//! rational arithmetic even when the weight has no rational square root.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::interval::IntervalUnion;
use crate::poly::{is_nonneg, rat, Poly, Rat};
use crate::text::{self, ParseError};

/// An ordered list of defining polynomials for a basic closed
/// semialgebraic set.
#[derive(Clone, Debug)]
pub struct GeneratorSet<const N: usize> {
    gens: Vec<Poly<N>>,
    label: String,
    natural_for: Option<IntervalUnion>,
}

impl<const N: usize> PartialEq for GeneratorSet<N> {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl<const N: usize> Eq for GeneratorSet<N> {}

impl<const N: usize> GeneratorSet<N> {
    pub fn new(gens: Vec<Poly<N>>, label: impl Into<String>) -> Result<Self, CertError> {
        if gens.is_empty() {
            return Err(CertError::EmptyGenerators);
        }
        if let Some(i) = gens.iter().position(|g| g.is_zero()) {
            return Err(CertError::ZeroGenerator { index: i });
        }
        Ok(GeneratorSet { gens, label: label.into(), natural_for: None })
    }

    /// Tag this set as the natural choice of generators for `u`.
    pub fn tagged_natural(mut self, u: IntervalUnion) -> Self {
        self.natural_for = Some(u);
        self
    }

    pub fn gens(&self) -> &[Poly<N>] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn natural_for(&self) -> Option<&IntervalUnion> {
        self.natural_for.as_ref()
    }
}

/// Whether a certificate is module-form or preordering-form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertKind {
    Module,
    Preordering,
}

impl CertKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertKind::Module => "module",
            CertKind::Preordering => "preordering",
        }
    }
}

/// An explicit sum `sum_j c_j * h_j^2` with every `c_j` a positive
/// rational. The empty sum is the zero SOS.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Sos<const N: usize> {
    entries: Vec<(Rat, Poly<N>)>,
}

impl<const N: usize> Sos<N> {
    pub fn zero() -> Self {
        Sos { entries: Vec::new() }
    }

    pub fn new(entries: Vec<(Rat, Poly<N>)>) -> Result<Self, CertError> {
        let mut sos = Sos::zero();
        for (c, h) in entries {
            sos.push(c, h)?;
        }
        Ok(sos)
    }

    /// A single unweighted square.
    pub fn square(h: Poly<N>) -> Self {
        let mut s = Sos::zero();
        s.push(Rat::one(), h).expect("positive coefficient");
        s
    }

    /// Append `c * h^2`. Zero coefficients and zero squares are dropped;
    /// negative coefficients are rejected.
    pub fn push(&mut self, c: Rat, h: Poly<N>) -> Result<(), CertError> {
        if c.is_zero() || h.is_zero() {
            return Ok(());
        }
        if c.is_negative() {
            return Err(CertError::NonpositiveCoeff { coeff: c });
        }
        self.entries.push((c, h));
        Ok(())
    }

    pub fn entries(&self) -> &[(Rat, Poly<N>)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exact expansion `sum_j c_j h_j^2`.
    pub fn expand(&self) -> Poly<N> {
        let mut acc = Poly::zero();
        for (c, h) in &self.entries {
            acc = acc.add(&h.mul(h).scale(c));
        }
        acc
    }

    /// Multiply every square by `g` (used to absorb a squared generator).
    pub fn mul_square(&self, g: &Poly<N>) -> Self {
        Sos { entries: self.entries.iter().map(|(c, h)| (c.clone(), h.mul(g))).collect() }
    }

    /// Product of two SOS values, as the SOS of all pairwise products.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Sos::zero();
        for (ca, ha) in &self.entries {
            for (cb, hb) in &other.entries {
                out.entries.push((ca * cb, ha.mul(hb)));
            }
        }
        out
    }

    /// Scale every coefficient by a positive rational.
    pub fn scale(&self, c: &Rat) -> Result<Self, CertError> {
        if c.is_negative() || c.is_zero() {
            return Err(CertError::NonpositiveCoeff { coeff: c.clone() });
        }
        Ok(Sos { entries: self.entries.iter().map(|(k, h)| (k * c, h.clone())).collect() })
    }

    pub fn concat(&mut self, other: Sos<N>) {
        self.entries.extend(other.entries);
    }
}

/// One term `sigma_e * s^e` of a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertTerm<const N: usize> {
    pub exponent: Vec<u8>,
    pub sos: Sos<N>,
}

/// A verified-by-expansion representation of a polynomial in the quadratic
/// module or preordering of a generator set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<const N: usize> {
    genset: GeneratorSet<N>,
    kind: CertKind,
    terms: Vec<CertTerm<N>>,
}

/// Outcome of exact verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    /// The first differing monomial (in ascending exponent order), with the
    /// coefficient required by the target and the one the expansion has.
    Reject { monomial: String, target_coeff: Rat, expansion_coeff: Rat },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Accept => write!(f, "accept"),
            Verdict::Reject { monomial, target_coeff, expansion_coeff } => write!(
                f,
                "reject at monomial {monomial}: target has {target_coeff}, expansion has {expansion_coeff}"
            ),
        }
    }
}

impl<const N: usize> Certificate<N> {
    /// Build a certificate, canonicalizing term order and validating the
    /// 0/1 exponent shape (and the at-most-one-generator rule for
    /// module-form certificates).
    pub fn new(
        genset: GeneratorSet<N>,
        kind: CertKind,
        terms: Vec<CertTerm<N>>,
    ) -> Result<Self, CertError> {
        let m = genset.len();
        for t in &terms {
            if t.exponent.len() != m {
                return Err(CertError::ExponentLength { expected: m, found: t.exponent.len() });
            }
            if let Some(&bad) = t.exponent.iter().find(|&&e| e > 1) {
                return Err(CertError::ExponentValue { value: bad });
            }
            if kind == CertKind::Module && t.exponent.iter().filter(|&&e| e == 1).count() > 1 {
                return Err(CertError::ModuleShape { exponent: t.exponent.clone() });
            }
        }
        let mut cert = Certificate { genset, kind, terms };
        cert.canonicalize();
        Ok(cert)
    }

    /// The certificate of the constant 1 (single SOS term, no generators).
    pub fn unit(genset: GeneratorSet<N>) -> Self {
        let m = genset.len();
        Certificate {
            genset,
            kind: CertKind::Module,
            terms: vec![CertTerm { exponent: vec![0; m], sos: Sos::square(Poly::one()) }],
        }
    }

    /// The zero certificate (no terms).
    pub fn zero(genset: GeneratorSet<N>, kind: CertKind) -> Self {
        Certificate { genset, kind, terms: Vec::new() }
    }

    fn canonicalize(&mut self) {
        self.terms.retain(|t| !t.sos.is_zero());
        self.terms.sort_by(|a, b| a.exponent.cmp(&b.exponent));
        let mut merged: Vec<CertTerm<N>> = Vec::new();
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.exponent == t.exponent => last.sos.concat(t.sos),
                _ => merged.push(t),
            }
        }
        self.terms = merged;
    }

    pub fn genset(&self) -> &GeneratorSet<N> {
        &self.genset
    }

    pub fn kind(&self) -> CertKind {
        self.kind
    }

    pub fn terms(&self) -> &[CertTerm<N>] {
        &self.terms
    }

    /// Exact expansion `sum_e sigma_e * prod_i s_i^{e_i}`.
    pub fn expand(&self) -> Poly<N> {
        let mut acc = Poly::zero();
        for t in &self.terms {
            let mut prod = t.sos.expand();
            for (i, &e) in t.exponent.iter().enumerate() {
                if e == 1 {
                    prod = prod.mul(&self.genset.gens[i]);
                }
            }
            acc = acc.add(&prod);
        }
        acc
    }

    /// Accept iff the expansion equals `f` exactly, coefficient by
    /// coefficient. On rejection, reports the first differing monomial.
    pub fn verify(&self, f: &Poly<N>) -> Verdict {
        let expansion = self.expand();
        if expansion == *f {
            return Verdict::Accept;
        }
        let mut keys: Vec<[u32; N]> =
            expansion.terms().map(|(e, _)| *e).chain(f.terms().map(|(e, _)| *e)).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let want = f.coeff(&k);
            let got = expansion.coeff(&k);
            if want != got {
                return Verdict::Reject {
                    monomial: monomial_name::<N>(&k),
                    target_coeff: want,
                    expansion_coeff: got,
                };
            }
        }
        unreachable!("expansion differs but no differing coefficient found");
    }

    /// Relabel as a preordering certificate; the expansion is unchanged.
    pub fn to_preordering(&self) -> Self {
        let mut c = self.clone();
        c.kind = CertKind::Preordering;
        c
    }

    /// Sum of two certificates over the same generators.
    pub fn add(&self, other: &Self) -> Result<Self, CertError> {
        if self.genset != other.genset {
            return Err(CertError::GensetMismatch);
        }
        let kind = if self.kind == CertKind::Module && other.kind == CertKind::Module {
            CertKind::Module
        } else {
            CertKind::Preordering
        };
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Certificate::new(self.genset.clone(), kind, terms)
    }

    /// Product of two certificates over the same generators. Exponent
    /// vectors add; any slot reaching 2 is reduced back to 0 by absorbing
    /// the squared generator into the SOS part.
    pub fn mul(&self, other: &Self) -> Result<Self, CertError> {
        if self.genset != other.genset {
            return Err(CertError::GensetMismatch);
        }
        let mut terms: Vec<CertTerm<N>> = Vec::new();
        for ta in &self.terms {
            for tb in &other.terms {
                let mut sos = ta.sos.mul(&tb.sos);
                let mut exponent = vec![0u8; self.genset.len()];
                for i in 0..self.genset.len() {
                    match ta.exponent[i] + tb.exponent[i] {
                        0 => {}
                        1 => exponent[i] = 1,
                        2 => sos = sos.mul_square(&self.genset.gens[i]),
                        _ => unreachable!("exponents are 0/1"),
                    }
                }
                terms.push(CertTerm { exponent, sos });
            }
        }
        Certificate::new(self.genset.clone(), CertKind::Preordering, terms)
    }

    /// Scale by a positive rational, folding it into every SOS coefficient.
    pub fn scale(&self, c: &Rat) -> Result<Self, CertError> {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.sos = t.sos.scale(c)?;
        }
        Ok(out)
    }

    /// Deterministic pseudo-random certificate: the expansion is
    /// non-negative on the generator region by construction, which makes
    /// these the ground-truth positive fixtures for property tests.
    pub fn random(
        genset: GeneratorSet<N>,
        kind: CertKind,
        degree_bound: u32,
        term_count: usize,
        seed: u64,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = genset.len();
        let mut terms = Vec::new();
        for _ in 0..term_count {
            let mut exponent = vec![0u8; m];
            match kind {
                CertKind::Module => {
                    // index m means the sigma_0 slot
                    let pick = rng.gen_range(0..=m);
                    if pick < m {
                        exponent[pick] = 1;
                    }
                }
                CertKind::Preordering => {
                    for e in exponent.iter_mut() {
                        *e = u8::from(rng.gen_bool(0.5));
                    }
                }
            }
            let mut sos = Sos::zero();
            for _ in 0..rng.gen_range(1..=2usize) {
                let coeff = rat(rng.gen_range(1..=4), rng.gen_range(1..=4));
                let square = random_poly::<N>(&mut rng, degree_bound);
                sos.push(coeff, square).expect("positive coefficient");
            }
            terms.push(CertTerm { exponent, sos });
        }
        Certificate::new(genset, kind, terms).expect("randomly built terms are well-formed")
    }
}

fn random_poly<const N: usize>(rng: &mut ChaCha8Rng, degree_bound: u32) -> Poly<N> {
    let mut p = Poly::zero();
    for _ in 0..rng.gen_range(1..=3usize) {
        let mut exps = [0u32; N];
        let mut budget = degree_bound;
        for e in exps.iter_mut() {
            *e = rng.gen_range(0..=budget);
            budget -= *e;
        }
        let coeff = rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        p = p.add(&Poly::monomial(exps, coeff));
    }
    p
}

fn monomial_name<const N: usize>(exps: &[u32; N]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(crate::poly::VAR_NAMES[i].to_string()),
            _ => parts.push(format!("{}^{}", crate::poly::VAR_NAMES[i], e)),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CertError {
    #[error("a generator set must be nonempty")]
    EmptyGenerators,
    #[error("generator {index} is the zero polynomial")]
    ZeroGenerator { index: usize },
    #[error("exponent vector has length {found}, expected {expected}")]
    ExponentLength { expected: usize, found: usize },
    #[error("exponent entries must be 0 or 1, found {value}")]
    ExponentValue { value: u8 },
    #[error("module-form term uses more than one generator: {exponent:?}")]
    ModuleShape { exponent: Vec<u8> },
    #[error("SOS coefficients must be positive, found {coeff}")]
    NonpositiveCoeff { coeff: Rat },
    #[error("certificates are over different generator sets")]
    GensetMismatch,
    #[error("\"variables\" must be 1, 2, or 3, found {0}")]
    BadVariables(u64),
    #[error("unknown certificate kind {0:?}")]
    BadKind(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("malformed certificate JSON: {0}")]
    Json(String),
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CertJson {
    variables: u64,
    generators: Vec<String>,
    kind: String,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exponent: Vec<u8>,
    sos: Vec<SosEntryJson>,
}

#[derive(Serialize, Deserialize)]
struct SosEntryJson {
    coeff: String,
    square: String,
}

impl<const N: usize> Certificate<N> {
    pub fn to_json(&self) -> String {
        let dto = CertJson {
            variables: N as u64,
            generators: self.genset.gens.iter().map(text::poly_to_string).collect(),
            kind: self.kind.as_str().to_string(),
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    exponent: t.exponent.clone(),
                    sos: t
                        .sos
                        .entries()
                        .iter()
                        .map(|(c, h)| SosEntryJson {
                            coeff: rat_string(c),
                            square: text::poly_to_string(h),
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("certificate serialization cannot fail")
    }

    fn from_dto(dto: &CertJson) -> Result<Self, CertError> {
        let gens = dto
            .generators
            .iter()
            .map(|s| text::parse_poly::<N>(s))
            .collect::<Result<Vec<_>, _>>()?;
        let genset = GeneratorSet::new(gens, "")?;
        let kind = match dto.kind.as_str() {
            "module" => CertKind::Module,
            "preordering" => CertKind::Preordering,
            other => return Err(CertError::BadKind(other.to_string())),
        };
        let mut terms = Vec::new();
        for t in &dto.terms {
            let mut sos = Sos::zero();
            for e in &t.sos {
                let coeff = text::parse_rat(&e.coeff)?;
                let square = text::parse_poly::<N>(&e.square)?;
                sos.push(coeff, square)?;
            }
            terms.push(CertTerm { exponent: t.exponent.clone(), sos });
        }
        Certificate::new(genset, kind, terms)
    }
}

fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A certificate of any arity, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateAny {
    Uni(Certificate<1>),
    Bi(Certificate<2>),
    Tri(Certificate<3>),
}

impl CertificateAny {
    pub fn from_json(json: &str) -> Result<Self, CertError> {
        let dto: CertJson = serde_json::from_str(json).map_err(|e| CertError::Json(e.to_string()))?;
        match dto.variables {
            1 => Ok(CertificateAny::Uni(Certificate::from_dto(&dto)?)),
            2 => Ok(CertificateAny::Bi(Certificate::from_dto(&dto)?)),
            3 => Ok(CertificateAny::Tri(Certificate::from_dto(&dto)?)),
            n => Err(CertError::BadVariables(n)),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            CertificateAny::Uni(c) => c.to_json(),
            CertificateAny::Bi(c) => c.to_json(),
            CertificateAny::Tri(c) => c.to_json(),
        }
    }

    pub fn variables(&self) -> usize {
        match self {
            CertificateAny::Uni(_) => 1,
            CertificateAny::Bi(_) => 2,
            CertificateAny::Tri(_) => 3,
        }
    }
}

impl<const N: usize> Certificate<N> {
    /// Parse JSON that must have exactly arity `N`.
    pub fn from_json(json: &str) -> Result<Self, CertError> {
        let dto: CertJson = serde_json::from_str(json).map_err(|e| CertError::Json(e.to_string()))?;
        if dto.variables != N as u64 {
            return Err(CertError::BadVariables(dto.variables));
        }
        Certificate::from_dto(&dto)
    }
}

/// Check that a point satisfies every generator constraint (exactly).
pub fn point_in_region<const N: usize>(genset: &GeneratorSet<N>, point: &[Rat; N]) -> bool {
    genset.gens.iter().all(|g| is_nonneg(&g.eval(point)))
}
