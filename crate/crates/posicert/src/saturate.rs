//! Constructive certificate generation for univariate polynomials
//! non-negative on a compact interval union, over the natural choice of
//! generators.
//!
//! For `U = [a1,b1] u ... u [ak,bk]` the natural generators are
//! `{x - a1, (x - a2)(x - b1), ..., (x - ak)(x - b_{k-1}), bk - x}`. The
//! construction factors the input exactly, absorbs even multiplicities into
//! a square, rewrites roots left of `a1` as `(x - a1) + (a1 - r)`, roots
//! right of `bk` symmetrically, and pairs the sign-changing roots inside
//! each gap through an explicit identity
//! `(x - r)(x - s) = t (x - b)(x - a) + sigma_0` with `t` in `[0,1]` and
//! `sigma_0` a completed-square PSD quadratic. Every returned certificate is
//! re-verified against its input before it leaves this module.
//!
//! The capability boundary is exact arithmetic itself: the odd-multiplicity
//! part must factor over the rationals into pieces of degree at most 2.
//! Conjugate irrational root pairs enter through their rational sum and
//! product, so no root extraction ever happens.

use num_traits::{One, Signed, Zero};

use crate::cert::{CertError, CertKind, CertTerm, Certificate, GeneratorSet, Sos};
use crate::interval::IntervalUnion;
use crate::poly::{rat_int, Rat, UniPoly};
use crate::roots::{
    decide_nonneg_on_u, divrem, factor_low_degree, sturm_count, square_odd_split, NonnegDecision,
    RootsError,
};

#[derive(Debug, thiserror::Error)]
pub enum SaturateError {
    #[error("polynomial is negative on the set: value {value} at x = {witness}")]
    NotNonnegative { witness: Rat, value: Rat },
    #[error("outside factorization capability: the odd-multiplicity part has unfactored piece {factor}")]
    Capability { factor: UniPoly },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("generator set is not the natural set of a single non-degenerate interval")]
    NotNaturalSingleInterval,
    #[error("internal invariant failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Roots(#[from] RootsError),
}

/// The natural choice of generators for `U`, in the canonical order
/// `x - a1`, then `(x - a_{i+1})(x - b_i)` for each gap, then `bk - x`.
pub fn natural_generators(u: &IntervalUnion) -> GeneratorSet<1> {
    let comps = u.components();
    let k = comps.len();
    let mut gens = Vec::with_capacity(k + 1);
    gens.push(UniPoly::x_minus(&comps[0].0));
    for i in 1..k {
        let a_next = UniPoly::x_minus(&comps[i].0);
        let b_prev = UniPoly::x_minus(&comps[i - 1].1);
        gens.push(a_next.mul(&b_prev));
    }
    gens.push(UniPoly::x_minus(&comps[k - 1].1).neg());
    GeneratorSet::new(gens, format!("natural generators of {u}"))
        .expect("natural generators are nonzero")
        .tagged_natural(u.clone())
}

/// Recover the interval union whose natural generators these are, if the
/// list matches the canonical pattern exactly.
pub fn natural_interval_of(gens: &[UniPoly]) -> Option<IntervalUnion> {
    if gens.len() < 2 {
        return None;
    }
    // first generator: x - a1
    let first = &gens[0];
    if first.degree() != Some(1) || first.leading_coeff() != Some(&Rat::one()) {
        return None;
    }
    let a1 = -first.coeff(&[0]);
    // last generator: bk - x
    let last = &gens[gens.len() - 1];
    if last.degree() != Some(1) || *last.leading_coeff()? != -Rat::one() {
        return None;
    }
    let bk = last.coeff(&[0]);
    let mut lows = vec![a1];
    let mut highs = Vec::new();
    for g in &gens[1..gens.len() - 1] {
        // gap generator: (x - a_{i+1})(x - b_i) with b_i < a_{i+1}
        if g.degree() != Some(2) || g.leading_coeff() != Some(&Rat::one()) {
            return None;
        }
        let sum = -g.coeff(&[1]);
        let prod = g.coeff(&[0]);
        let disc = &sum * &sum - rat_int(4) * &prod;
        // need rational roots: disc must be a perfect square of a rational
        let sqrt = rational_sqrt(&disc)?;
        let b_i = (&sum - &sqrt) / rat_int(2);
        let a_next = (&sum + &sqrt) / rat_int(2);
        if b_i >= a_next {
            return None;
        }
        highs.push(b_i);
        lows.push(a_next);
    }
    highs.push(bk);
    let comps: Vec<(Rat, Rat)> = lows.into_iter().zip(highs).collect();
    let u = IntervalUnion::new(comps).ok()?;
    // round-trip check against the canonical order
    let canon = natural_generators(&u);
    if canon.gens() == gens {
        Some(u)
    } else {
        None
    }
}

/// Exact rational square root, if one exists.
fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    let cand = Rat::new(n, d);
    if &(&cand * &cand) == r {
        Some(cand)
    } else {
        None
    }
}

/// The three closure identities between the outer generators
/// `p = x - a1`, `q = bk - x`, and their product, each packaged as a
/// verified certificate over `{p, q}`:
///
/// * `p*q  = (1/(bk-a1)) (q^2 p + p^2 q)`   (module form)
/// * `p    = (1/(bk-a1)) (p^2 + p*q)`       (preordering form)
/// * `q    = (1/(bk-a1)) (q^2 + p*q)`       (preordering form)
///
/// Degenerate sets with `a1 = bk` have no such identities (the scalar
/// `1/(bk - a1)` does not exist); the list is empty then.
pub fn endpoint_identities(u: &IntervalUnion) -> Vec<(UniPoly, Certificate<1>)> {
    let a1 = u.lo().clone();
    let bk = u.hi().clone();
    if a1 == bk {
        return Vec::new();
    }
    let p = UniPoly::x_minus(&a1);
    let q = UniPoly::x_minus(&bk).neg();
    let inv = Rat::one() / (&bk - &a1);
    let gs = GeneratorSet::new(vec![p.clone(), q.clone()], format!("[{a1},{bk}] endpoints"))
        .expect("endpoint generators are nonzero");

    let mut sos_q = Sos::zero();
    sos_q.push(inv.clone(), q.clone()).unwrap();
    let mut sos_p = Sos::zero();
    sos_p.push(inv.clone(), p.clone()).unwrap();
    let mut sos_1 = Sos::zero();
    sos_1.push(inv.clone(), UniPoly::one()).unwrap();

    let id_product = Certificate::new(
        gs.clone(),
        CertKind::Module,
        vec![
            CertTerm { exponent: vec![1, 0], sos: sos_q.clone() },
            CertTerm { exponent: vec![0, 1], sos: sos_p.clone() },
        ],
    )
    .expect("well-formed identity");
    let id_left = Certificate::new(
        gs.clone(),
        CertKind::Preordering,
        vec![
            CertTerm { exponent: vec![0, 0], sos: sos_p },
            CertTerm { exponent: vec![1, 1], sos: sos_1.clone() },
        ],
    )
    .expect("well-formed identity");
    let id_right = Certificate::new(
        gs,
        CertKind::Preordering,
        vec![
            CertTerm { exponent: vec![0, 0], sos: sos_q },
            CertTerm { exponent: vec![1, 1], sos: sos_1 },
        ],
    )
    .expect("well-formed identity");

    let out = vec![(p.mul(&q), id_product), (p, id_left), (q, id_right)];
    for (target, cert) in &out {
        debug_assert!(cert.verify(target).is_accept());
    }
    out
}

/// The weight `t` and completed-square residual for
/// `(x - r)(x - s) = t (x - b)(x - a) + residual`, computed from the
/// rational root sum and product only. The residual discriminant
/// `D(t) = (sum - t(a+b))^2 - 4(1-t)(prod - t*ab)` is a convex quadratic in
/// `t` that is non-positive somewhere on `[0,1]` whenever
/// `b <= r <= s <= a`; the rational vertex, clamped to `[0,1]`, realizes
/// the minimum over the interval.
fn gap_residual(sum: &Rat, prod: &Rat, b: &Rat, a: &Rat) -> Result<(Rat, Sos<1>), SaturateError> {
    let ab = a * b;
    let apb = a + b;
    let quad_a = (a - b) * (a - b);
    let quad_b = rat_int(4) * &ab + rat_int(4) * prod - rat_int(2) * sum * &apb;
    let quad_c = sum * sum - rat_int(4) * prod;
    let disc_at = |t: &Rat| &quad_a * t * t + &quad_b * t + &quad_c;

    let vertex = -&quad_b / (rat_int(2) * &quad_a);
    let mut t = vertex.clamp(Rat::zero(), Rat::one());
    if disc_at(&t).is_positive() {
        // Not reachable for admissible inputs; scan dyadic weights anyway.
        let mut found = None;
        let mut den = 2i64;
        'scan: while den <= 1 << 16 {
            for num in 1..den {
                let cand = Rat::new(num.into(), den.into());
                if !disc_at(&cand).is_positive() {
                    found = Some(cand);
                    break 'scan;
                }
            }
            den *= 2;
        }
        t = found.ok_or_else(|| {
            SaturateError::Internal(format!(
                "no weight t in [0,1] makes (x^2 - {sum}x + {prod}) - t(x - {b})(x - {a}) PSD"
            ))
        })?;
    }

    let mut sos = Sos::zero();
    if t == Rat::one() {
        // leading term cancels: residual is the constant prod - ab
        if *sum != apb {
            return Err(SaturateError::Internal(
                "t = 1 requires the root sum to match the gap endpoint sum".into(),
            ));
        }
        let c = prod - &ab;
        if c.is_negative() {
            return Err(SaturateError::Internal("negative constant residual".into()));
        }
        sos.push(c, UniPoly::one())?;
    } else {
        let lead = Rat::one() - &t;
        let beta = sum - &t * &apb;
        let gamma = prod - &t * &ab;
        let vertex_x = &beta / (rat_int(2) * &lead);
        let constant = &gamma - &beta * &beta / (rat_int(4) * &lead);
        if constant.is_negative() {
            return Err(SaturateError::Internal("residual completion is not PSD".into()));
        }
        sos.push(lead, UniPoly::x_minus(&vertex_x))?;
        sos.push(constant, UniPoly::one())?;
    }

    // exactness check: x^2 - sum*x + prod == t*(x-b)(x-a) + sos
    let target = UniPoly::x()
        .pow(2)
        .sub(&UniPoly::x().scale(sum))
        .add(&UniPoly::constant(prod.clone()));
    let gap_poly = UniPoly::x_minus(b).mul(&UniPoly::x_minus(a));
    let rebuilt = gap_poly.scale(&t).add(&sos.expand());
    if rebuilt != target {
        return Err(SaturateError::Internal("gap residual identity failed to expand".into()));
    }
    Ok((t, sos))
}

/// Certificate for `(x - r)(x - s)` in the preordering of the single gap
/// generator `(x - b)(x - a)`, for `b <= r <= s <= a` with `b < a`.
pub fn gap_pair_certificate(
    r: &Rat,
    s: &Rat,
    b: &Rat,
    a: &Rat,
) -> Result<Certificate<1>, SaturateError> {
    if b >= a {
        return Err(SaturateError::Precondition(format!("need b < a, got b = {b}, a = {a}")));
    }
    if !(b <= r && r <= s && s <= a) {
        return Err(SaturateError::Precondition(format!(
            "need b <= r <= s <= a, got r = {r}, s = {s} in [{b}, {a}]"
        )));
    }
    let sum = r + s;
    let prod = r * s;
    let (t, sos) = gap_residual(&sum, &prod, b, a)?;
    let gap_poly = UniPoly::x_minus(b).mul(&UniPoly::x_minus(a));
    let gs = GeneratorSet::new(vec![gap_poly], format!("gap [{b},{a}]"))?;
    let mut terms = vec![CertTerm { exponent: vec![0], sos }];
    let mut t_sos = Sos::zero();
    t_sos.push(t, UniPoly::one())?;
    terms.push(CertTerm { exponent: vec![1], sos: t_sos });
    let cert = Certificate::new(gs, CertKind::Module, terms)?;
    let target = UniPoly::x_minus(r).mul(&UniPoly::x_minus(s));
    if !cert.verify(&target).is_accept() {
        return Err(SaturateError::Internal("gap pair certificate failed verification".into()));
    }
    Ok(cert)
}

/// Weight of the gap weight `t` used for `(x-r)(x-s)` over `(x-b)(x-a)`;
/// exposed for inspection in tests and reports.
pub fn gap_weight(r: &Rat, s: &Rat, b: &Rat, a: &Rat) -> Result<Rat, SaturateError> {
    let (t, _) = gap_residual(&(r + s), &(r * s), b, a)?;
    Ok(t)
}

struct Assembler {
    u: IntervalUnion,
    genset: GeneratorSet<1>,
}

impl Assembler {
    fn m(&self) -> usize {
        self.genset.len()
    }

    fn term(&self, ones: &[usize], sos: Sos<1>) -> CertTerm<1> {
        let mut exponent = vec![0u8; self.m()];
        for &i in ones {
            exponent[i] = 1;
        }
        CertTerm { exponent, sos }
    }

    fn cert(&self, terms: Vec<CertTerm<1>>) -> Result<Certificate<1>, SaturateError> {
        Ok(Certificate::new(self.genset.clone(), CertKind::Preordering, terms)?)
    }

    /// `x - r` for `r <= a1`, as `1^2 * s_1 + (a1 - r)`.
    fn left_linear(&self, r: &Rat) -> Result<Certificate<1>, SaturateError> {
        let a1 = self.u.lo();
        let mut terms = vec![self.term(&[0], Sos::square(UniPoly::one()))];
        let mut shift = Sos::zero();
        shift.push(a1 - r, UniPoly::one())?;
        terms.push(self.term(&[], shift));
        self.cert(terms)
    }

    /// `r - x` for `r >= bk`, as `1^2 * s_last + (r - bk)`; the caller
    /// accounts for the sign flip against `x - r`.
    fn right_linear(&self, r: &Rat) -> Result<Certificate<1>, SaturateError> {
        let bk = self.u.hi();
        let last = self.m() - 1;
        let mut terms = vec![self.term(&[last], Sos::square(UniPoly::one()))];
        let mut shift = Sos::zero();
        shift.push(r - bk, UniPoly::one())?;
        terms.push(self.term(&[], shift));
        self.cert(terms)
    }

    /// A PSD quadratic `x^2 + p x + q` (negative discriminant), completed
    /// to `(x + p/2)^2 + (q - p^2/4)`.
    fn psd_quadratic(&self, p: &Rat, q: &Rat) -> Result<Certificate<1>, SaturateError> {
        let half_p = p / rat_int(2);
        let c = q - &half_p * &half_p;
        if c.is_negative() {
            return Err(SaturateError::Internal("PSD completion went negative".into()));
        }
        let mut sos = Sos::square(UniPoly::x().add(&UniPoly::constant(half_p)));
        sos.push(c, UniPoly::one())?;
        self.cert(vec![self.term(&[], sos)])
    }

    /// An irreducible quadratic with both (irrational) roots left of `a1`:
    /// `Q = (x - a1)^2 + (2 a1 - sum)(x - a1) + Q(a1)`.
    fn left_quadratic(&self, sum: &Rat, q_at_a1: &Rat) -> Result<Certificate<1>, SaturateError> {
        let a1 = self.u.lo();
        let mut sq = Sos::square(UniPoly::x_minus(a1));
        sq.push(q_at_a1.clone(), UniPoly::one())?;
        let mut lin = Sos::zero();
        lin.push(rat_int(2) * a1 - sum, UniPoly::one())?;
        self.cert(vec![self.term(&[], sq), self.term(&[0], lin)])
    }

    /// Both irrational roots right of `bk`:
    /// `Q = (bk - x)^2 + (sum - 2 bk)(bk - x) + Q(bk)`.
    fn right_quadratic(&self, sum: &Rat, q_at_bk: &Rat) -> Result<Certificate<1>, SaturateError> {
        let bk = self.u.hi();
        let last = self.m() - 1;
        let mut sq = Sos::square(UniPoly::x_minus(bk).neg());
        sq.push(q_at_bk.clone(), UniPoly::one())?;
        let mut lin = Sos::zero();
        lin.push(sum - rat_int(2) * bk, UniPoly::one())?;
        self.cert(vec![self.term(&[], sq), self.term(&[last], lin)])
    }

    /// Roots straddling the whole of `[a1, bk]` (`Q <= 0` there). Produces
    /// a certificate for `-Q` via
    /// `-Q = s_1 s_last + l(a1)/(bk-a1) * s_last + l(bk)/(bk-a1) * s_1`
    /// with `l = -Q - (x - a1)(bk - x)` linear and non-negative at both
    /// endpoints; the caller flips the sign.
    fn straddle_quadratic(
        &self,
        q_at_a1: &Rat,
        q_at_bk: &Rat,
    ) -> Result<Certificate<1>, SaturateError> {
        let a1 = self.u.lo();
        let bk = self.u.hi();
        let last = self.m() - 1;
        let width = bk - a1;
        if width.is_zero() {
            return Err(SaturateError::Internal("straddle recipe needs a1 < bk".into()));
        }
        let mut terms = vec![self.term(&[0, last], Sos::square(UniPoly::one()))];
        let mut at_last = Sos::zero();
        at_last.push(-q_at_a1 / &width, UniPoly::one())?;
        terms.push(self.term(&[last], at_last));
        let mut at_first = Sos::zero();
        at_first.push(-q_at_bk / &width, UniPoly::one())?;
        terms.push(self.term(&[0], at_first));
        self.cert(terms)
    }

    /// A paired factor `(x - r)(x - s)` (given via rational sum/product)
    /// inside gap `g`, over the gap generator at index `g + 1`.
    fn gap_pair(&self, gap: usize, sum: &Rat, prod: &Rat) -> Result<Certificate<1>, SaturateError> {
        let gaps = self.u.gaps();
        let (b, a) = &gaps[gap];
        let (t, sos) = gap_residual(sum, prod, b, a)?;
        let mut terms = vec![self.term(&[], sos)];
        let mut t_sos = Sos::zero();
        t_sos.push(t, UniPoly::one())?;
        terms.push(self.term(&[gap + 1], t_sos));
        self.cert(terms)
    }

    /// Which gap's closed hull `[b_g, a_{g+1}]` contains both points?
    fn fitting_gap(&self, lo: &Rat, hi: &Rat) -> Option<usize> {
        self.u
            .gaps()
            .iter()
            .position(|(b, a)| b <= lo && hi <= a)
    }
}

/// Construct a verified preordering certificate for `f >= 0` on `U` over
/// the natural generators.
///
/// The assembly walks the sign pattern of the rational linear factors: on
/// every stretch where their product is negative, the certificate either
/// rewrites the bounding roots through the endpoint recipes (stretch fully
/// outside `[a1, bk]`), pairs them inside a single gap, or chains the
/// stretch through the degenerate components it crosses — each such point
/// is a double root of `f` whose square donates the two linear copies the
/// chain consumes.
pub fn certify_nonneg_1d(f: &UniPoly, u: &IntervalUnion) -> Result<Certificate<1>, SaturateError> {
    if let NonnegDecision::Negative { witness, value } = decide_nonneg_on_u(f, u) {
        return Err(SaturateError::NotNonnegative { witness, value });
    }
    let genset = natural_generators(u);
    if f.is_zero() {
        return Ok(Certificate::zero(genset, CertKind::Preordering));
    }
    if u.is_all_points() {
        return interpolation_certificate(f, u, genset);
    }
    let asm = Assembler { u: u.clone(), genset: genset.clone() };

    let (unit, mut half, odd) = square_odd_split(f)?;
    let factors = factor_low_degree(&odd)?;
    if let Some(rem) = factors.remainder {
        return Err(SaturateError::Capability { factor: rem });
    }

    let mut negative = unit.is_negative();
    let mut atoms: Vec<Certificate<1>> = Vec::new();
    let mut flips: Vec<Rat> = Vec::new();

    for (factor, mult) in &factors.factors {
        for _ in 0..*mult {
            match factor.degree() {
                Some(1) => flips.push(-factor.coeff(&[0])),
                Some(2) => {
                    let (atom, flip) = quadratic_atom(&asm, factor)?;
                    atoms.push(atom);
                    negative ^= flip;
                }
                _ => return Err(SaturateError::Capability { factor: factor.clone() }),
            }
        }
    }

    flips.sort();
    let sign_negative = negative;
    negative ^= resolve_stretches(&asm, &flips, sign_negative, &mut half, &mut atoms)?;

    let mut square_sos = Sos::zero();
    square_sos.push(unit.abs(), half)?;
    let mut acc = asm.cert(vec![asm.term(&[], square_sos)])?;
    for atom in &atoms {
        acc = acc.mul(atom)?;
    }

    if negative {
        return Err(SaturateError::Internal(
            "sign bookkeeping ended negative on a set with a non-degenerate component".into(),
        ));
    }
    if !acc.verify(f).is_accept() {
        return Err(SaturateError::Internal("assembled certificate failed verification".into()));
    }
    Ok(acc)
}

/// Certificate atom for one irreducible quadratic factor, with a flag for
/// whether the atom certifies `-Q` instead of `Q`.
fn quadratic_atom(
    asm: &Assembler,
    factor: &UniPoly,
) -> Result<(Certificate<1>, bool), SaturateError> {
    let a1 = asm.u.lo().clone();
    let bk = asm.u.hi().clone();
    let sum = -factor.coeff(&[1]);
    let prod = factor.coeff(&[0]);
    let disc = &sum * &sum - rat_int(4) * &prod;
    if disc.is_negative() {
        let p = factor.coeff(&[1]);
        return Ok((asm.psd_quadratic(&p, &prod)?, false));
    }
    // Distinct irrational roots; evaluations at rational points are nonzero.
    let q_a1 = factor.eval_at(&a1);
    let q_bk = factor.eval_at(&bk);
    let vertex = &sum / rat_int(2);
    if q_a1.is_negative() && q_bk.is_negative() {
        return Ok((asm.straddle_quadratic(&q_a1, &q_bk)?, true));
    }
    if !q_a1.is_negative() && vertex < a1 {
        return Ok((asm.left_quadratic(&sum, &q_a1)?, false));
    }
    if !q_bk.is_negative() && vertex > bk {
        return Ok((asm.right_quadratic(&sum, &q_bk)?, false));
    }
    for (g, (b, a)) in asm.u.gaps().iter().enumerate() {
        if sturm_count(factor, b, a)? == 2 {
            return Ok((asm.gap_pair(g, &sum, &prod)?, false));
        }
    }
    // The conjugate pair splits across regions; pairing one irrational root
    // with a rational partner has no rational quadratic certificate.
    Err(SaturateError::Capability { factor: factor.clone() })
}

/// Resolve every stretch where the product of the linear factors (times the
/// accumulated sign) is negative. Returns whether the emitted atoms flip
/// the overall sign an odd number of times.
fn resolve_stretches(
    asm: &Assembler,
    flips: &[Rat],
    sign_negative: bool,
    half: &mut UniPoly,
    atoms: &mut Vec<Certificate<1>>,
) -> Result<bool, SaturateError> {
    let q = flips.len();
    if q == 0 {
        if sign_negative {
            return Err(SaturateError::Internal(
                "flip-free negative polynomial on a set with a non-degenerate component".into(),
            ));
        }
        return Ok(false);
    }
    // Sign on the region (flips[i-1], flips[i]) alternates; the rightmost
    // region (flips[q-1], inf) carries the accumulated sign.
    let region_negative = |right_index: usize| -> bool {
        // right_index = q means the unbounded right region
        sign_negative ^ ((q - right_index) % 2 == 1)
    };

    let mut flipped = false;
    // unbounded left region (-inf, flips[0])
    if region_negative(0) {
        resolve_unbounded_stretch(asm, true, &flips[0], half, atoms, &mut flipped)?;
    }
    // bounded regions
    for i in 1..q {
        if region_negative(i) {
            resolve_bounded_stretch(asm, &flips[i - 1], &flips[i], half, atoms)?;
        }
    }
    // unbounded right region (flips[q-1], inf)
    if region_negative(q) {
        resolve_unbounded_stretch(asm, false, &flips[q - 1], half, atoms, &mut flipped)?;
    }
    Ok(flipped)
}

/// Degenerate components of `U` met by the open stretch, as their points;
/// errors if the stretch crosses a non-degenerate component.
fn degenerate_points_inside(
    asm: &Assembler,
    lo: Option<&Rat>,
    hi: Option<&Rat>,
) -> Result<Vec<Rat>, SaturateError> {
    let mut out = Vec::new();
    for (a, b) in asm.u.components() {
        let intersects = lo.map_or(true, |l| b > l) && hi.map_or(true, |h| a < h);
        if !intersects {
            continue;
        }
        if a != b {
            return Err(SaturateError::Internal(format!(
                "negative stretch crosses the non-degenerate component [{a},{b}]"
            )));
        }
        out.push(a.clone());
    }
    Ok(out)
}

/// Take the pair of linear copies `(x - d)^2` that a chain point consumes
/// out of the square part.
fn donate(half: &mut UniPoly, d: &Rat) -> Result<(), SaturateError> {
    if !half.eval_at(d).is_zero() {
        return Err(SaturateError::Internal(format!(
            "chain point {d} is not a double root of the square part"
        )));
    }
    *half = divrem(half, &UniPoly::x_minus(d)).0;
    Ok(())
}

/// A bounded negative stretch `(r, s)` between two sign flips.
fn resolve_bounded_stretch(
    asm: &Assembler,
    r: &Rat,
    s: &Rat,
    half: &mut UniPoly,
    atoms: &mut Vec<Certificate<1>>,
) -> Result<(), SaturateError> {
    let a1 = asm.u.lo().clone();
    let bk = asm.u.hi().clone();
    let chain = degenerate_points_inside(asm, Some(r), Some(s))?;
    if chain.is_empty() {
        if *s <= a1 {
            atoms.push(asm.left_linear(r)?);
            atoms.push(asm.left_linear(s)?);
        } else if *r >= bk {
            atoms.push(asm.right_linear(r)?);
            atoms.push(asm.right_linear(s)?);
            // two flips cancel
        } else {
            let g = asm.fitting_gap(r, s).ok_or_else(|| {
                SaturateError::Internal(format!("roots {r}, {s} do not fit a single gap"))
            })?;
            atoms.push(asm.gap_pair(g, &(r + s), &(r * s))?);
        }
        return Ok(());
    }
    let mut points = vec![r.clone()];
    points.extend(chain.iter().cloned());
    points.push(s.clone());
    for w in points.windows(2) {
        let g = asm.fitting_gap(&w[0], &w[1]).ok_or_else(|| {
            SaturateError::Internal(format!("chain pair {}, {} does not fit a single gap", w[0], w[1]))
        })?;
        atoms.push(asm.gap_pair(g, &(&w[0] + &w[1]), &(&w[0] * &w[1]))?);
    }
    for d in &chain {
        donate(half, d)?;
    }
    Ok(())
}

/// An unbounded negative stretch: `(-inf, flip)` when `leftward`, else
/// `(flip, inf)`.
fn resolve_unbounded_stretch(
    asm: &Assembler,
    leftward: bool,
    flip: &Rat,
    half: &mut UniPoly,
    atoms: &mut Vec<Certificate<1>>,
    flipped: &mut bool,
) -> Result<(), SaturateError> {
    let a1 = asm.u.lo().clone();
    let bk = asm.u.hi().clone();
    let chain = if leftward {
        degenerate_points_inside(asm, None, Some(flip))?
    } else {
        degenerate_points_inside(asm, Some(flip), None)?
    };
    if chain.is_empty() {
        if leftward {
            if *flip > a1 {
                return Err(SaturateError::Internal(format!(
                    "left stretch misses the set but its flip {flip} is right of {a1}"
                )));
            }
            atoms.push(asm.left_linear(flip)?);
        } else {
            if *flip < bk {
                return Err(SaturateError::Internal(format!(
                    "right stretch misses the set but its flip {flip} is left of {bk}"
                )));
            }
            atoms.push(asm.right_linear(flip)?);
            *flipped = !*flipped;
        }
        return Ok(());
    }
    // Chain through the degenerate points; the outermost one terminates the
    // stretch with an endpoint recipe and must be the extreme point of U.
    let mut points = chain.clone();
    if leftward {
        if points[0] != a1 {
            return Err(SaturateError::Internal(format!(
                "left stretch reaches into U but does not end at {a1}"
            )));
        }
        points.push(flip.clone());
        atoms.push(asm.left_linear(&a1)?);
    } else {
        if *points.last().unwrap() != bk {
            return Err(SaturateError::Internal(format!(
                "right stretch reaches into U but does not end at {bk}"
            )));
        }
        points.insert(0, flip.clone());
        atoms.push(asm.right_linear(&bk)?);
        *flipped = !*flipped;
    }
    for w in points.windows(2) {
        let g = asm.fitting_gap(&w[0], &w[1]).ok_or_else(|| {
            SaturateError::Internal(format!("chain pair {}, {} does not fit a single gap", w[0], w[1]))
        })?;
        atoms.push(asm.gap_pair(g, &(&w[0] + &w[1]), &(&w[0] * &w[1]))?);
    }
    for d in &chain {
        donate(half, d)?;
    }
    Ok(())
}

/// Certificate construction when every component of `U` is a single point
/// `c_1 < ... < c_k`. Squared Lagrange basis polynomials reproduce the
/// values `f(c_i) >= 0`; the difference is divisible by `P = prod (x - c_i)`
/// and both `P` and `-P` are products of distinct natural generators
/// (alternating by index parity), so `P * h` splits through
/// `h = ((h+1)/2)^2 - ((h-1)/2)^2`.
fn interpolation_certificate(
    f: &UniPoly,
    u: &IntervalUnion,
    genset: GeneratorSet<1>,
) -> Result<Certificate<1>, SaturateError> {
    let points: Vec<Rat> = u.components().iter().map(|(a, _)| a.clone()).collect();
    let k = points.len();
    let m = genset.len();
    let mut terms: Vec<CertTerm<1>> = Vec::new();

    for (i, ci) in points.iter().enumerate() {
        let fi = f.eval_at(ci);
        if fi.is_zero() {
            continue;
        }
        let mut basis = UniPoly::one();
        let mut den = Rat::one();
        for (j, cj) in points.iter().enumerate() {
            if j != i {
                basis = basis.mul(&UniPoly::x_minus(cj));
                den *= ci - cj;
            }
        }
        let mut sos = Sos::zero();
        sos.push(fi / (&den * &den), basis)?;
        terms.push(CertTerm { exponent: vec![0; m], sos });
    }

    let lagrange = Certificate::new(genset.clone(), CertKind::Preordering, terms.clone())?;
    let rem = f.sub(&lagrange.expand());
    let mut product = UniPoly::one();
    for c in &points {
        product = product.mul(&UniPoly::x_minus(c));
    }
    let h = rem
        .exact_div(&product)
        .map_err(|_| SaturateError::Internal("interpolation remainder not divisible".into()))?;

    if !h.is_zero() {
        let two = rat_int(2);
        let plus_half = h.add(&UniPoly::one()).scale(&(Rat::one() / &two));
        let minus_half = h.sub(&UniPoly::one()).scale(&(Rat::one() / &two));
        // indices of opposite parity to k multiply to +P, same parity to -P
        let plus_idx: Vec<usize> = (0..=k).filter(|i| i % 2 != k % 2).collect();
        let minus_idx: Vec<usize> = (0..=k).filter(|i| i % 2 == k % 2).collect();
        debug_assert_eq!(product_of(&genset, &plus_idx), product);
        debug_assert_eq!(product_of(&genset, &minus_idx), product.neg());
        let mut e_plus = vec![0u8; m];
        for i in &plus_idx {
            e_plus[*i] = 1;
        }
        let mut e_minus = vec![0u8; m];
        for i in &minus_idx {
            e_minus[*i] = 1;
        }
        terms.push(CertTerm { exponent: e_plus, sos: Sos::square(plus_half) });
        terms.push(CertTerm { exponent: e_minus, sos: Sos::square(minus_half) });
    }

    let cert = Certificate::new(genset, CertKind::Preordering, terms)?;
    if !cert.verify(f).is_accept() {
        return Err(SaturateError::Internal("interpolation certificate failed verification".into()));
    }
    Ok(cert)
}

fn product_of(genset: &GeneratorSet<1>, idx: &[usize]) -> UniPoly {
    let mut p = UniPoly::one();
    for &i in idx {
        p = p.mul(&genset.gens()[i]);
    }
    p
}

/// Rewrite a preordering certificate over the natural generators of a
/// single non-degenerate interval `[a, b]` into module form: every term
/// carrying the product exponent `(1,1)` is split through
/// `(x-a)(b-x) = (1/(b-a)) ((b-x)^2 (x-a) + (x-a)^2 (b-x))`.
pub fn module_form_single_interval(c: &Certificate<1>) -> Result<Certificate<1>, SaturateError> {
    let gens = c.genset().gens();
    let u = match c.genset().natural_for() {
        Some(u) => u.clone(),
        None => natural_interval_of(gens).ok_or(SaturateError::NotNaturalSingleInterval)?,
    };
    if u.num_components() != 1 || u.lo() == u.hi() {
        return Err(SaturateError::NotNaturalSingleInterval);
    }
    let (a, b) = (u.lo().clone(), u.hi().clone());
    let inv = Rat::one() / (&b - &a);
    let p = UniPoly::x_minus(&a);
    let q = UniPoly::x_minus(&b).neg();

    let mut terms = Vec::new();
    for t in c.terms() {
        match (t.exponent[0], t.exponent[1]) {
            (1, 1) => {
                let scaled = t.sos.scale(&inv)?;
                terms.push(CertTerm { exponent: vec![1, 0], sos: scaled.mul_square(&q) });
                terms.push(CertTerm { exponent: vec![0, 1], sos: scaled.mul_square(&p) });
            }
            _ => terms.push(t.clone()),
        }
    }
    let genset = natural_generators(&u);
    let out = Certificate::new(genset, CertKind::Module, terms)?;
    if out.expand() != c.expand() {
        return Err(SaturateError::Internal("module rewrite changed the expansion".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::roots::isolate_roots;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn up(s: &str) -> UniPoly {
        s.parse().unwrap()
    }

    fn iu(s: &str) -> IntervalUnion {
        IntervalUnion::parse(s).unwrap()
    }

    #[test]
    fn natural_generators_follow_the_canonical_list() {
        let gs = natural_generators(&iu("[0,1]"));
        assert_eq!(gs.gens(), &[up("x"), up("1 - x")]);

        let gs = natural_generators(&iu("[0,1]u[2,3]"));
        assert_eq!(gs.gens(), &[up("x"), up("x^2 - 3x + 2"), up("3 - x")]);
        assert_eq!(gs.gens()[1], up("x - 2").mul(&up("x - 1")));

        let gs = natural_generators(&iu("[0,0]"));
        assert_eq!(gs.gens(), &[up("x"), up("0 - x")]);
    }

    #[test]
    fn natural_interval_recovery_round_trips() {
        for s in ["[0,1]", "[0,1]u[2,3]", "[-1,1/2]u[2,2]u[3,7]"] {
            let u = iu(s);
            let gs = natural_generators(&u);
            assert_eq!(natural_interval_of(gs.gens()), Some(u));
        }
        // not natural: wrong order
        assert_eq!(natural_interval_of(&[up("1 - x"), up("x")]), None);
        // not natural: gap quadratic with irrational roots
        assert_eq!(natural_interval_of(&[up("x"), up("x^2 - 2"), up("3 - x")]), None);
    }

    #[test]
    fn endpoint_identities_verify_exactly() {
        let ids = endpoint_identities(&iu("[0,1]"));
        assert_eq!(ids.len(), 3);
        assert_eq!(ids[0].0, up("x - x^2"));
        for (target, cert) in &ids {
            assert!(cert.verify(target).is_accept());
        }
        assert_eq!(ids[1].0, up("x"));
        assert_eq!(ids[2].0, up("1 - x"));
        // first identity is module form, the others carry the product term
        assert_eq!(ids[0].1.kind(), CertKind::Module);
        assert_eq!(ids[1].1.kind(), CertKind::Preordering);

        // scaled interval: x(2 - x) = (1/2)((2-x)^2 x + x^2 (2-x))
        let ids = endpoint_identities(&iu("[0,2]"));
        let target = up("x").mul(&up("2 - x"));
        assert_eq!(ids[0].0, target);
        assert!(ids[0].1.verify(&target).is_accept());

        // degenerate single point: no identities
        assert!(endpoint_identities(&iu("[1,1]")).is_empty());
    }

    #[test]
    fn gap_pair_matches_hand_traced_values() {
        // (x - 1/2)^2 over the gap [0,1]: t = 1/2 and
        // (x-1/2)^2 = (1/2)(x^2 - x) + (1/2)(x - 1/2)^2 + 1/8
        let r = rat(1, 2);
        let c = gap_pair_certificate(&r, &r, &rat_int(0), &rat_int(1)).unwrap();
        assert_eq!(gap_weight(&r, &r, &rat_int(0), &rat_int(1)).unwrap(), rat(1, 2));
        let target = UniPoly::x_minus(&r).pow(2);
        assert!(c.verify(&target).is_accept());
        let sigma0 = &c.terms()[0];
        assert_eq!(sigma0.exponent, vec![0]);
        assert_eq!(
            sigma0.sos.entries(),
            &[(rat(1, 2), up("x - 1/2")), (rat(1, 8), up("1"))]
        );

        // (x - 5/4)(x - 7/4) over [1,2]: t = 5/8,
        // residual (3/8)(x - 3/2)^2 + 3/32
        let (r, s) = (rat(5, 4), rat(7, 4));
        let c = gap_pair_certificate(&r, &s, &rat_int(1), &rat_int(2)).unwrap();
        assert_eq!(gap_weight(&r, &s, &rat_int(1), &rat_int(2)).unwrap(), rat(5, 8));
        let target = UniPoly::x_minus(&r).mul(&UniPoly::x_minus(&s));
        assert!(c.verify(&target).is_accept());
        assert_eq!(
            c.terms()[0].sos.entries(),
            &[(rat(3, 8), up("x - 3/2")), (rat(3, 32), up("1"))]
        );

        // touching case r = b, s = a: t = 1 and empty residual
        let c = gap_pair_certificate(&rat_int(1), &rat_int(2), &rat_int(1), &rat_int(2)).unwrap();
        assert_eq!(gap_weight(&rat_int(1), &rat_int(2), &rat_int(1), &rat_int(2)).unwrap(), rat_int(1));
        assert_eq!(c.terms().len(), 1);
        assert_eq!(c.terms()[0].exponent, vec![1]);

        // precondition violations
        assert!(gap_pair_certificate(&rat_int(0), &rat_int(3), &rat_int(1), &rat_int(2)).is_err());
        assert!(gap_pair_certificate(&rat_int(1), &rat_int(1), &rat_int(2), &rat_int(2)).is_err());
    }

    #[test]
    fn gap_pair_residual_discriminant_nonpositive_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let b = rat(rng.gen_range(-8..=8), rng.gen_range(1..=4));
            let a = &b + rat(rng.gen_range(1..=10), rng.gen_range(1..=4));
            let mut r = &b + (&a - &b) * rat(rng.gen_range(0..=12), 12);
            let mut s = &b + (&a - &b) * rat(rng.gen_range(0..=12), 12);
            if r > s {
                std::mem::swap(&mut r, &mut s);
            }
            let t = gap_weight(&r, &s, &b, &a).unwrap();
            assert!(t >= Rat::zero() && t <= Rat::one());
            let cert = gap_pair_certificate(&r, &s, &b, &a).unwrap();
            let target = UniPoly::x_minus(&r).mul(&UniPoly::x_minus(&s));
            assert!(cert.verify(&target).is_accept());
        }
    }

    #[test]
    fn certify_peels_left_roots() {
        // x(x+1) on [0,1]: x^2 + 1*x over {x, 1-x}
        let f = up("x").mul(&up("x + 1"));
        let u = iu("[0,1]");
        let c = certify_nonneg_1d(&f, &u).unwrap();
        assert!(c.verify(&f).is_accept());
        // structure: sigma_0 carries the square x^2, the s_1 term carries 1
        assert_eq!(c.terms().len(), 2);
        assert_eq!(c.terms()[0].exponent, vec![0, 0]);
        assert_eq!(c.terms()[0].sos.expand(), up("x^2"));
        assert_eq!(c.terms()[1].exponent, vec![1, 0]);
        assert_eq!(c.terms()[1].sos.expand(), up("1"));
    }

    #[test]
    fn certify_recognizes_generator_products() {
        // (x-1)(x-2) on [0,1]u[2,3] is exactly the gap generator
        let f = up("x - 1").mul(&up("x - 2"));
        let u = iu("[0,1]u[2,3]");
        let c = certify_nonneg_1d(&f, &u).unwrap();
        assert!(c.verify(&f).is_accept());
        assert_eq!(c.terms().len(), 1);
        assert_eq!(c.terms()[0].exponent, vec![0, 1, 0]);
        assert_eq!(c.terms()[0].sos.expand(), up("1"));
    }

    #[test]
    fn certify_combines_squares_and_gap_pairs() {
        let f = up("x - 5/4").mul(&up("x - 7/4")).mul(&up("x + 1").pow(2));
        let u = iu("[0,1]u[2,3]");
        let c = certify_nonneg_1d(&f, &u).unwrap();
        assert!(c.verify(&f).is_accept());
    }

    #[test]
    fn certify_handles_negative_and_capability_cases() {
        let u = iu("[0,1]");
        match certify_nonneg_1d(&up("x - 2"), &u) {
            Err(SaturateError::NotNonnegative { witness, value }) => {
                assert!(u.contains(&witness));
                assert!(value.is_negative());
            }
            other => panic!("expected negativity, got {other:?}"),
        }
        // x^4 + x + 1 is positive everywhere but its odd part cannot be
        // factored into degree <= 2 rational pieces
        match certify_nonneg_1d(&up("x^4 + x + 1"), &u) {
            Err(SaturateError::Capability { factor }) => {
                assert_eq!(factor, up("x^4 + x + 1"));
            }
            other => panic!("expected capability error, got {other:?}"),
        }
    }

    #[test]
    fn certify_psd_and_outside_quadratics() {
        // (x^2+1)(x^2-2)... x^2-2 straddles [0,1]: whole product <= 0? No:
        // (x^2+1) > 0 and (x^2 - 2) < 0 on [0,1], so negate to stay nonneg.
        let f = up("x^2 + 1").mul(&up("2 - x^2"));
        let u = iu("[0,1]");
        let c = certify_nonneg_1d(&f, &u).unwrap();
        assert!(c.verify(&f).is_accept());

        // both irrational roots left of the set: x^2 - 2 on [3/2, 2]
        let g = up("x^2 - 2");
        let u2 = iu("[3/2,2]");
        let c2 = certify_nonneg_1d(&g, &u2).unwrap();
        assert!(c2.verify(&g).is_accept());

        // both irrational roots right of the set: x^2 - 2 on [-1, 1]
        let u3 = iu("[-1,1]");
        let c3 = certify_nonneg_1d(&up("2 - x^2"), &u3).unwrap();
        assert!(c3.verify(&up("2 - x^2")).is_accept());

        // irrational conjugate pair inside one gap: +-sqrt(2) both lie in
        // the gap (-3/2, 3/2) of this set
        let u4 = iu("[-2,-3/2]u[3/2,2]");
        let f4 = up("x^2 - 2");
        assert!(decide_nonneg_on_u(&f4, &u4).is_nonneg());
        let c4 = certify_nonneg_1d(&f4, &u4).unwrap();
        assert!(c4.verify(&f4).is_accept());

        // conjugate pair split across regions: -sqrt(2) left of the set,
        // sqrt(2) inside a gap. Non-negative, but pairing an irrational
        // root with a rational partner is outside rational reach.
        let u5 = iu("[-1,1]u[3/2,2]");
        let f5 = up("x^2 - 2").mul(&up("x - 5/4"));
        assert!(decide_nonneg_on_u(&f5, &u5).is_nonneg());
        match certify_nonneg_1d(&f5, &u5) {
            Err(SaturateError::Capability { factor }) => assert_eq!(factor, up("x^2 - 2")),
            other => panic!("expected capability boundary, got {other:?}"),
        }
    }

    #[test]
    fn certify_on_point_sets() {
        // single point
        let u = iu("[0,0]");
        let c = certify_nonneg_1d(&up("x"), &u).unwrap();
        assert!(c.verify(&up("x")).is_accept());
        let c = certify_nonneg_1d(&up("0 - x^2"), &u).unwrap();
        assert!(c.verify(&up("0 - x^2")).is_accept());
        assert!(certify_nonneg_1d(&up("x - 1"), &u).is_err());

        // two points with a negative-leaning polynomial that is zero on U
        let u2 = iu("[0,0]u[1,1]");
        let f2 = up("x").mul(&up("x - 1")).neg(); // x - x^2, zero at both
        let c2 = certify_nonneg_1d(&f2, &u2).unwrap();
        assert!(c2.verify(&f2).is_accept());

        // three points, strictly positive values
        let u3 = iu("[-1,-1]u[0,0]u[2,2]");
        let f3 = up("x^4 + 1/3");
        let c3 = certify_nonneg_1d(&f3, &u3).unwrap();
        assert!(c3.verify(&f3).is_accept());

        // mixed sign values rejected with a witness
        match certify_nonneg_1d(&up("0 - 1 + x^2"), &iu("[0,0]u[2,2]")) {
            Err(SaturateError::NotNonnegative { witness, .. }) => assert_eq!(witness, rat_int(0)),
            other => panic!("expected witness at 0, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_point_succeeds_iff_value_nonneg() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..60 {
            let c = rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
            let u = IntervalUnion::interval(c.clone(), c.clone()).unwrap();
            let mut f = UniPoly::zero();
            for _ in 0..rng.gen_range(1..=4usize) {
                f = f.add(&UniPoly::monomial(
                    [rng.gen_range(0..4u32)],
                    rat(rng.gen_range(-5..=5), rng.gen_range(1..=3)),
                ));
            }
            let ok = !f.eval_at(&c).is_negative();
            match certify_nonneg_1d(&f, &u) {
                Ok(cert) => {
                    assert!(ok, "certified f with f({c}) < 0");
                    assert!(cert.verify(&f).is_accept());
                }
                Err(SaturateError::NotNonnegative { .. }) => assert!(!ok),
                Err(other) => panic!("unexpected error {other:?}"),
            }
        }
    }

    #[test]
    fn completeness_at_capability_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut certified = 0usize;
        for _ in 0..120 {
            let u = random_union(&mut rng);
            let f = random_rooted_poly(&mut rng, &u);
            match decide_nonneg_on_u(&f, &u) {
                NonnegDecision::Nonneg => {
                    let c = certify_nonneg_1d(&f, &u)
                        .unwrap_or_else(|e| panic!("f = {f}, U = {u}: {e}"));
                    assert!(c.verify(&f).is_accept());
                    certified += 1;
                }
                NonnegDecision::Negative { witness, value } => {
                    assert!(u.contains(&witness));
                    assert!(value.is_negative());
                    assert_eq!(f.eval_at(&witness), value);
                }
            }
        }
        assert!(certified > 20, "want a healthy accept rate, got {certified}");
    }

    fn random_union(rng: &mut ChaCha8Rng) -> IntervalUnion {
        let k = rng.gen_range(1..=3usize);
        let mut cursor = rat(rng.gen_range(-8..=0), 2);
        let mut comps = Vec::new();
        for _ in 0..k {
            let a = cursor.clone();
            let b = if rng.gen_bool(0.15) {
                a.clone()
            } else {
                &a + rat(rng.gen_range(1..=6), 2)
            };
            comps.push((a, b.clone()));
            cursor = &b + rat(rng.gen_range(1..=4), 2);
        }
        IntervalUnion::new(comps).unwrap()
    }

    fn random_rooted_poly(rng: &mut ChaCha8Rng, u: &IntervalUnion) -> UniPoly {
        let mut f = UniPoly::constant(rat(rng.gen_range(1..=4), rng.gen_range(1..=3)));
        // square part
        if rng.gen_bool(0.6) {
            let mut s = UniPoly::zero();
            for _ in 0..2 {
                s = s.add(&UniPoly::monomial(
                    [rng.gen_range(0..=2u32)],
                    rat(rng.gen_range(-3..=3), 1),
                ));
            }
            if !s.is_zero() {
                f = f.mul(&s.pow(2));
            }
        }
        // rational roots: outside, at endpoints, or paired in gaps
        let nroots = rng.gen_range(0..=3usize);
        let gaps = u.gaps();
        for _ in 0..nroots {
            match rng.gen_range(0..4u8) {
                0 => {
                    let r = u.lo() - rat(rng.gen_range(0..=4), 2);
                    f = f.mul(&UniPoly::x_minus(&r));
                }
                1 => {
                    let r = u.hi() + rat(rng.gen_range(0..=4), 2);
                    f = f.mul(&UniPoly::x_minus(&r).neg());
                }
                2 if !gaps.is_empty() => {
                    let (b, a) = &gaps[rng.gen_range(0..gaps.len())];
                    let r = b + (a - b) * rat(rng.gen_range(0..=4), 4);
                    let s = b + (a - b) * rat(rng.gen_range(0..=4), 4);
                    f = f.mul(&UniPoly::x_minus(&r)).mul(&UniPoly::x_minus(&s));
                }
                _ => {
                    // a root anywhere; often makes the polynomial negative
                    let r = rat(rng.gen_range(-10..=10), 2);
                    f = f.mul(&UniPoly::x_minus(&r));
                }
            }
        }
        f
    }

    #[test]
    fn module_form_rewrites_the_product_term() {
        let u = iu("[0,1]");
        let gs = natural_generators(&u);
        // sigma * x(1-x) with sigma = y-free square (x+1)^2
        let c = Certificate::new(
            gs.clone(),
            CertKind::Preordering,
            vec![CertTerm { exponent: vec![1, 1], sos: Sos::square(up("x + 1")) }],
        )
        .unwrap();
        let m = module_form_single_interval(&c).unwrap();
        assert_eq!(m.kind(), CertKind::Module);
        assert_eq!(m.expand(), c.expand());
        // sigma(1-x)^2 * x + sigma x^2 * (1-x)
        assert_eq!(m.terms().len(), 2);
        assert_eq!(m.terms()[0].exponent, vec![0, 1]);
        assert_eq!(m.terms()[1].exponent, vec![1, 0]);

        // already-module certificates pass through unchanged in expansion
        let c2 = Certificate::new(
            gs,
            CertKind::Module,
            vec![CertTerm { exponent: vec![0, 1], sos: Sos::square(up("x")) }],
        )
        .unwrap();
        let m2 = module_form_single_interval(&c2).unwrap();
        assert_eq!(m2.expand(), c2.expand());

        // expansion preserved on random certificates
        let gs = natural_generators(&iu("[-1/2,3]"));
        for seed in 0..100 {
            let c = Certificate::random(gs.clone(), CertKind::Preordering, 3, 3, seed);
            let m = module_form_single_interval(&c).unwrap();
            assert_eq!(m.expand(), c.expand());
            assert_eq!(m.kind(), CertKind::Module);
        }

        // nonnatural genset rejected
        let other = GeneratorSet::new(vec![up("x^2"), up("1 - x")], "?").unwrap();
        let bad = Certificate::unit(other);
        assert!(matches!(
            module_form_single_interval(&bad),
            Err(SaturateError::NotNaturalSingleInterval)
        ));
        // degenerate interval rejected
        let degen = Certificate::unit(natural_generators(&iu("[1,1]")));
        assert!(matches!(
            module_form_single_interval(&degen),
            Err(SaturateError::NotNaturalSingleInterval)
        ));
    }

    #[test]
    fn isolation_witnesses_match_gap_membership() {
        // sanity: sqrt(2) really is inside (1, 3/2)
        let ivs = isolate_roots(&up("x^2 - 2")).unwrap();
        let pos = &ivs[1];
        assert!(*pos.hi() <= rat(3, 2) || *pos.lo() >= rat_int(1));
    }
}
