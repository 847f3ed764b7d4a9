//! Exact real-root counting, isolation, sign analysis, and limited
//! factorization for univariate rational polynomials.
//!
//! Counting uses Sturm chains on the square-free part, isolation refines by
//! bisection at rational midpoints, square-free decomposition is Yun's
//! algorithm, and the low-degree factorizer peels rational roots and then
//! searches for quadratic factors by divisor interpolation on an integer
//! model of the polynomial. Everything is exact; there are no floats.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::interval::IntervalUnion;
use crate::poly::{rat, Rat, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootsError {
    #[error("the zero polynomial has no root structure")]
    ZeroPolynomial,
}

/// Quotient and remainder of univariate division.
pub fn divrem(num: &UniPoly, den: &UniPoly) -> (UniPoly, UniPoly) {
    assert!(!den.is_zero(), "division by zero polynomial");
    let dd = den.degree().unwrap();
    let dc = den.leading_coeff().unwrap().clone();
    let mut rem = num.clone();
    let mut quo = UniPoly::zero();
    while let Some(rd) = rem.degree() {
        if rd < dd {
            break;
        }
        let rc = rem.leading_coeff().unwrap().clone();
        let qterm = UniPoly::monomial([rd - dd], &rc / &dc);
        rem = rem.sub(&qterm.mul(den));
        quo = quo.add(&qterm);
    }
    (quo, rem)
}

/// Monic greatest common divisor.
pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut f = a.clone();
    let mut g = b.clone();
    while !g.is_zero() {
        let (_, r) = divrem(&f, &g);
        f = g;
        g = monic(&r);
    }
    monic(&f)
}

/// Scale to leading coefficient 1 (zero stays zero).
pub fn monic(p: &UniPoly) -> UniPoly {
    match p.leading_coeff() {
        Some(c) => p.scale(&(Rat::one() / c)),
        None => UniPoly::zero(),
    }
}

/// The square-free part `p / gcd(p, p')`, monic.
pub fn squarefree_part(p: &UniPoly) -> UniPoly {
    let d = p.derivative(0);
    if d.is_zero() {
        return UniPoly::one();
    }
    let g = gcd(p, &d);
    monic(&divrem(p, &g).0)
}

struct SturmChain {
    seq: Vec<UniPoly>,
}

impl SturmChain {
    fn new(q: &UniPoly) -> Self {
        let mut seq = vec![q.clone()];
        let d = q.derivative(0);
        if !d.is_zero() {
            seq.push(d);
            loop {
                let n = seq.len();
                let (_, r) = divrem(&seq[n - 2], &seq[n - 1]);
                if r.is_zero() {
                    break;
                }
                // Scaling by a positive constant preserves variation counts,
                // so normalize by |leading| before negating.
                let norm = r.scale(&(Rat::one() / r.leading_coeff().unwrap().abs()));
                seq.push(norm.neg());
            }
        }
        SturmChain { seq }
    }

    fn variations(&self, t: &Rat) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for p in &self.seq {
            let v = p.eval_at(t);
            if v.is_zero() {
                continue;
            }
            let neg = v.is_negative();
            if let Some(prev) = last {
                if prev != neg {
                    count += 1;
                }
            }
            last = Some(neg);
        }
        count
    }
}

/// Number of distinct real roots of `p` in the half-open interval `(lo, hi]`.
pub fn sturm_count(p: &UniPoly, lo: &Rat, hi: &Rat) -> Result<usize, RootsError> {
    if p.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    if lo >= hi {
        return Ok(0);
    }
    let mut q = squarefree_part(p);
    if q.degree().unwrap_or(0) == 0 {
        return Ok(0);
    }
    let at_hi = if q.eval_at(hi).is_zero() { 1 } else { 0 };
    for endpoint in [lo, hi] {
        if q.eval_at(endpoint).is_zero() {
            q = divrem(&q, &UniPoly::x_minus(endpoint)).0;
        }
    }
    if q.degree().unwrap_or(0) == 0 {
        return Ok(at_hi);
    }
    let chain = SturmChain::new(&q);
    Ok(chain.variations(lo) - chain.variations(hi) + at_hi)
}

/// An interval `(lo, hi]` containing exactly one real root of a square-free
/// witness polynomial; `lo == hi` marks an exactly known rational root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatingInterval {
    lo: Rat,
    hi: Rat,
    poly: UniPoly,
}

impl IsolatingInterval {
    pub fn exact(r: Rat, poly: UniPoly) -> Self {
        IsolatingInterval { lo: r.clone(), hi: r, poly }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// The exactly known rational root, when there is one.
    pub fn rational_root(&self) -> Option<&Rat> {
        if self.is_point() {
            Some(&self.lo)
        } else {
            None
        }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// One bisection step. Collapses to a point when the root is hit
    /// exactly; otherwise halves the interval.
    pub fn refine(&mut self) {
        if self.is_point() {
            return;
        }
        if self.poly.eval_at(&self.hi).is_zero() {
            self.lo = self.hi.clone();
            return;
        }
        let mid = (&self.lo + &self.hi) / rat(2, 1);
        let vm = self.poly.eval_at(&mid);
        if vm.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        // The unique simple root flips the sign exactly once in (lo, hi].
        let vh = self.poly.eval_at(&self.hi);
        if vm.is_negative() != vh.is_negative() {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn refine_below(&mut self, width: &Rat) {
        while !self.is_point() && self.width() > *width {
            self.refine();
        }
    }
}

/// Isolate all distinct real roots of `p`: pairwise disjoint intervals in
/// ascending order, refined to width at most 1.
pub fn isolate_roots(p: &UniPoly) -> Result<Vec<IsolatingInterval>, RootsError> {
    if p.is_zero() {
        return Err(RootsError::ZeroPolynomial);
    }
    let q = squarefree_part(p);
    if q.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let bound = cauchy_bound(&q);
    let mut out = isolate_within_bracket(&q, &-bound.clone(), &bound);
    for iv in &mut out {
        iv.refine_below(&Rat::one());
    }
    Ok(out)
}

/// Isolate the distinct roots of `q` (square-free, non-constant) lying in
/// the open interval `(a, b)`.
pub fn isolate_open(q: &UniPoly, a: &Rat, b: &Rat) -> Vec<IsolatingInterval> {
    if a >= b {
        return Vec::new();
    }
    let mut qq = q.clone();
    for endpoint in [a, b] {
        if qq.eval_at(endpoint).is_zero() {
            qq = divrem(&qq, &UniPoly::x_minus(endpoint)).0;
        }
    }
    if qq.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    isolate_within_bracket(&qq, a, b)
}

/// Bisection isolation over the bracket `(lo, hi]`; requires
/// `q(lo) != 0` and `q(hi) != 0` is NOT required (a root exactly at `hi` is
/// reported as part of the bracket).
fn isolate_within_bracket(q: &UniPoly, lo: &Rat, hi: &Rat) -> Vec<IsolatingInterval> {
    let chain = SturmChain::new(q);
    let mut out = Vec::new();
    let v_lo = chain.variations(lo);
    let v_hi = chain.variations(hi);
    subdivide(q, &chain, lo, v_lo, hi, v_hi, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn subdivide(
    q: &UniPoly,
    chain: &SturmChain,
    lo: &Rat,
    v_lo: usize,
    hi: &Rat,
    v_hi: usize,
    out: &mut Vec<IsolatingInterval>,
) {
    let count = v_lo - v_hi;
    if count == 0 {
        return;
    }
    if count == 1 {
        if q.eval_at(hi).is_zero() {
            out.push(IsolatingInterval::exact(hi.clone(), q.clone()));
        } else {
            out.push(IsolatingInterval { lo: lo.clone(), hi: hi.clone(), poly: q.clone() });
        }
        return;
    }
    let mid = (lo + hi) / rat(2, 1);
    let v_mid = chain.variations(&mid);
    subdivide(q, chain, lo, v_lo, &mid, v_mid, out);
    subdivide(q, chain, &mid, v_mid, hi, v_hi, out);
}

/// Strict upper bound on the absolute value of every real root.
fn cauchy_bound(q: &UniPoly) -> Rat {
    let lead = q.leading_coeff().unwrap().clone();
    let mut m = Rat::zero();
    let top = q.degree().unwrap();
    for (e, c) in q.terms() {
        if e[0] < top {
            let ratio = (c / &lead).abs();
            if ratio > m {
                m = ratio;
            }
        }
    }
    m + Rat::one()
}

/// Refine a sorted run of isolating intervals until consecutive intervals
/// are strictly separated (`hi_i < lo_{i+1}`) and every non-point interval
/// lies strictly inside `(a, b)` when bounds are supplied.
pub fn separate(intervals: &mut [IsolatingInterval], bounds: Option<(&Rat, &Rat)>) {
    loop {
        let mut settled = true;
        for i in 0..intervals.len() {
            if let Some((a, b)) = bounds {
                let iv = &mut intervals[i];
                while !iv.is_point() && (iv.lo <= *a || iv.hi >= *b) {
                    iv.refine();
                    settled = false;
                }
            }
            if i + 1 < intervals.len() && intervals[i].hi >= intervals[i + 1].lo {
                intervals[i].refine();
                intervals[i + 1].refine();
                settled = false;
            }
        }
        if settled {
            return;
        }
    }
}

/// A factorization `unit * prod factors[i]^mult[i] * remainder` of a
/// univariate polynomial. `remainder` holds any part the factorizer could
/// not split further; `None` means the factorization is complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorList {
    pub unit: Rat,
    pub factors: Vec<(UniPoly, u32)>,
    pub remainder: Option<UniPoly>,
}

impl FactorList {
    pub fn is_complete(&self) -> bool {
        self.remainder.is_none()
    }

    /// Multiply the factorization back out, exactly.
    pub fn reconstruct(&self) -> UniPoly {
        let mut acc = UniPoly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        if let Some(r) = &self.remainder {
            acc = acc.mul(r);
        }
        acc
    }
}

/// Yun square-free decomposition: pairwise coprime square-free monic
/// factors with multiplicities.
pub fn square_free_decompose(p: &UniPoly) -> Result<FactorList, RootsError> {
    let unit = match p.leading_coeff() {
        Some(c) => c.clone(),
        None => return Err(RootsError::ZeroPolynomial),
    };
    let f = monic(p);
    if f.degree().unwrap() == 0 {
        return Ok(FactorList { unit, factors: Vec::new(), remainder: None });
    }
    let deriv = f.derivative(0);
    let g = gcd(&f, &deriv);
    let mut v = divrem(&f, &g).0;
    let mut w = divrem(&deriv, &g).0;
    let mut factors = Vec::new();
    let mut mult = 1u32;
    while v.degree().unwrap_or(0) > 0 {
        let wv = w.sub(&v.derivative(0));
        let h = gcd(&v, &wv);
        if h.degree().unwrap_or(0) > 0 {
            factors.push((h.clone(), mult));
        }
        v = divrem(&v, &h).0;
        w = divrem(&wv, &h).0;
        mult += 1;
    }
    Ok(FactorList { unit, factors, remainder: None })
}

/// Split `p = unit * half^2 * odd` with `odd` the square-free product of
/// the odd-multiplicity factors.
pub fn square_odd_split(p: &UniPoly) -> Result<(Rat, UniPoly, UniPoly), RootsError> {
    let fl = square_free_decompose(p)?;
    let mut half = UniPoly::one();
    let mut odd = UniPoly::one();
    for (f, m) in &fl.factors {
        half = half.mul(&f.pow(m / 2));
        if m % 2 == 1 {
            odd = odd.mul(f);
        }
    }
    Ok((fl.unit, half, odd))
}

const DIVISOR_MAGNITUDE_CAP: u64 = 1_000_000_000_000;
const COMBO_CAP: usize = 400_000;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let m = n.abs();
    let m_u64 = u64::try_from(&m).ok()?;
    if m_u64 == 0 || m_u64 > DIVISOR_MAGNITUDE_CAP {
        return None;
    }
    let mut divs = Vec::new();
    let mut d = 1u64;
    while d.checked_mul(d).map(|sq| sq <= m_u64).unwrap_or(false) {
        if m_u64 % d == 0 {
            divs.push(BigInt::from(d));
            if d != m_u64 / d {
                divs.push(BigInt::from(m_u64 / d));
            }
        }
        d += 1;
    }
    divs.sort();
    Some(divs)
}

/// Clear denominators and content: primitive integer coefficients with
/// positive leading coefficient, as a dense vector.
fn to_primitive_integer(p: &UniPoly) -> Vec<BigInt> {
    let deg = p.degree().unwrap() as usize;
    let mut lcm = BigInt::one();
    for (_, c) in p.terms() {
        lcm = lcm.lcm(c.denom());
    }
    let mut out = vec![BigInt::zero(); deg + 1];
    for (e, c) in p.terms() {
        out[e[0] as usize] = c.numer() * (&lcm / c.denom());
    }
    let mut content = BigInt::zero();
    for c in &out {
        content = content.gcd(c);
    }
    if !content.is_zero() {
        for c in &mut out {
            *c /= &content;
        }
    }
    if out[deg].is_negative() {
        for c in &mut out {
            *c = -c.clone();
        }
    }
    out
}

fn eval_integer(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// All rational roots of a square-free monic polynomial, by the rational
/// root theorem on a primitive integer model. Returns `None` when the
/// coefficients are too large to enumerate divisors.
fn rational_roots(h: &UniPoly) -> Option<Vec<Rat>> {
    let mut h = h.clone();
    let mut roots = Vec::new();
    while h.degree().unwrap_or(0) > 0 && h.coeff(&[0]).is_zero() {
        roots.push(Rat::zero());
        h = divrem(&h, &UniPoly::x()).0;
        // square-free input: x divides at most once, but stay general
    }
    if h.degree().unwrap_or(0) == 0 {
        return Some(roots);
    }
    let coeffs = to_primitive_integer(&h);
    let c0 = coeffs.first().unwrap();
    let clead = coeffs.last().unwrap();
    let nums = divisors(c0)?;
    let dens = divisors(clead)?;
    for n in &nums {
        for d in &dens {
            for sign in [1i64, -1] {
                let cand = Rat::new(n * BigInt::from(sign), d.clone());
                if h.eval_at(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    Some(roots)
}

/// Find one monic quadratic rational factor of `h` (square-free, monic, no
/// rational roots, degree >= 3) by interpolating integer divisor triples.
fn find_quadratic_factor(h: &UniPoly) -> Option<UniPoly> {
    let coeffs = to_primitive_integer(h);
    let sample_xs: [i64; 11] = [0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5];
    let mut evals: Vec<(BigInt, BigInt)> = sample_xs
        .iter()
        .map(|&x| {
            let xb = BigInt::from(x);
            let v = eval_integer(&coeffs, &xb);
            (xb, v)
        })
        .filter(|(_, v)| !v.is_zero())
        .collect();
    evals.sort_by_key(|(_, v)| v.abs());
    if evals.len() < 3 {
        return None;
    }
    let pts: Vec<(Rat, Vec<BigInt>)> = evals
        .iter()
        .take(3)
        .map(|(x, v)| Some((Rat::from_integer(x.clone()), divisors(v)?)))
        .collect::<Option<Vec<_>>>()?;
    let (x0, d0s) = &pts[0];
    let (x1, d1s) = &pts[1];
    let (x2, d2s) = &pts[2];
    let mut combos = 0usize;
    for d0 in signed(d0s) {
        for d1 in signed(d1s) {
            for d2 in signed(d2s) {
                combos += 1;
                if combos > COMBO_CAP {
                    return None;
                }
                let cand = match interpolate_quadratic(x0, &d0, x1, &d1, x2, &d2) {
                    Some(c) => c,
                    None => continue,
                };
                let (q, r) = divrem(h, &cand);
                if r.is_zero() && q.degree().unwrap_or(0) > 0 {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn signed(ds: &[BigInt]) -> impl Iterator<Item = Rat> + '_ {
    ds.iter().flat_map(|d| {
        [Rat::from_integer(d.clone()), Rat::from_integer(-d.clone())]
    })
}

/// Monic quadratic through three points; `None` when the interpolant
/// degenerates below degree 2.
fn interpolate_quadratic(
    x0: &Rat,
    y0: &Rat,
    x1: &Rat,
    y1: &Rat,
    x2: &Rat,
    y2: &Rat,
) -> Option<UniPoly> {
    // Newton's divided differences.
    let f01 = (y1 - y0) / (x1 - x0);
    let f12 = (y2 - y1) / (x2 - x1);
    let c2 = (&f12 - &f01) / (x2 - x0);
    if c2.is_zero() {
        return None;
    }
    let x = UniPoly::x();
    let p = UniPoly::constant(y0.clone())
        .add(&x.sub(&UniPoly::constant(x0.clone())).scale(&f01))
        .add(
            &x.sub(&UniPoly::constant(x0.clone()))
                .mul(&x.sub(&UniPoly::constant(x1.clone())))
                .scale(&c2),
        );
    Some(monic(&p))
}

/// Factor into monic irreducible factors of degree at most 2 where
/// possible: rational-root peeling plus a quadratic-factor search (inputs
/// of degree at most 8). Any stubborn part of degree >= 3 is returned as an
/// explicit flagged remainder rather than guessed at.
pub fn factor_low_degree(p: &UniPoly) -> Result<FactorList, RootsError> {
    let sf = square_free_decompose(p)?;
    let mut factors: Vec<(UniPoly, u32)> = Vec::new();
    let mut remainder = UniPoly::one();
    for (part, mult) in &sf.factors {
        let (complete, partial_rem) = factor_squarefree(part);
        for f in complete {
            factors.push((f, *mult));
        }
        if let Some(r) = partial_rem {
            remainder = remainder.mul(&r.pow(*mult));
        }
    }
    factors.sort_by(|(a, _), (b, _)| {
        a.degree().cmp(&b.degree()).then_with(|| format!("{a}").cmp(&format!("{b}")))
    });
    let remainder = if remainder.degree().unwrap_or(0) == 0 { None } else { Some(remainder) };
    Ok(FactorList { unit: sf.unit, factors, remainder })
}

/// Factor one square-free monic part; returns the complete degree <= 2
/// factors found and any unfactored rest.
fn factor_squarefree(part: &UniPoly) -> (Vec<UniPoly>, Option<UniPoly>) {
    let mut out = Vec::new();
    let mut rest = part.clone();
    match rational_roots(&rest) {
        Some(roots) => {
            for r in roots {
                out.push(UniPoly::x_minus(&r));
                rest = divrem(&rest, &UniPoly::x_minus(&r)).0;
            }
        }
        None => return (out, Some(rest)),
    }
    while rest.degree().unwrap_or(0) >= 3 {
        if rest.degree().unwrap() > 8 {
            return (out, Some(rest));
        }
        match find_quadratic_factor(&rest) {
            Some(q) => {
                out.push(q.clone());
                rest = divrem(&rest, &q).0;
            }
            None => return (out, Some(rest)),
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest);
    }
    (out, None)
}

/// Outcome of the exact nonnegativity decision on an interval union.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonnegDecision {
    Nonneg,
    Negative { witness: Rat, value: Rat },
}

impl NonnegDecision {
    pub fn is_nonneg(&self) -> bool {
        matches!(self, NonnegDecision::Nonneg)
    }
}

/// Decide `p(x) >= 0` for all `x` in `U`, exactly. Endpoints are evaluated
/// directly; the interior of each component is covered by evaluating one
/// rational sample in every root-free stretch, located via Sturm-based
/// isolation of the square-free part.
pub fn decide_nonneg_on_u(p: &UniPoly, u: &IntervalUnion) -> NonnegDecision {
    if p.is_zero() {
        return NonnegDecision::Nonneg;
    }
    for (a, b) in u.components() {
        for endpoint in [a, b] {
            let v = p.eval_at(endpoint);
            if v.is_negative() {
                return NonnegDecision::Negative { witness: endpoint.clone(), value: v };
            }
        }
        if a == b {
            continue;
        }
        let q = squarefree_part(p);
        let mut inner = if q.degree().unwrap_or(0) > 0 {
            isolate_open(&q, a, b)
        } else {
            Vec::new()
        };
        separate(&mut inner, Some((a, b)));
        let mut samples = Vec::new();
        match inner.first() {
            None => samples.push((a + b) / rat(2, 1)),
            Some(first) => {
                samples.push((a + first.lo()) / rat(2, 1));
                for w in inner.windows(2) {
                    samples.push((w[0].hi() + w[1].lo()) / rat(2, 1));
                }
                samples.push((inner.last().unwrap().hi() + b) / rat(2, 1));
            }
        }
        for s in samples {
            let v = p.eval_at(&s);
            if v.is_negative() {
                return NonnegDecision::Negative { witness: s, value: v };
            }
        }
    }
    NonnegDecision::Nonneg
}

/// Exact ordering of two isolated algebraic numbers.
pub fn cmp_algebraic(a: &IsolatingInterval, b: &IsolatingInterval) -> Ordering {
    if let (Some(ra), Some(rb)) = (a.rational_root(), b.rational_root()) {
        return ra.cmp(rb);
    }
    if algebraic_eq(a, b) {
        return Ordering::Equal;
    }
    let mut a = a.clone();
    let mut b = b.clone();
    loop {
        if a.hi() < b.lo() || (b.is_point() && a.hi() < b.lo()) {
            return Ordering::Less;
        }
        if b.hi() < a.lo() {
            return Ordering::Greater;
        }
        if a.is_point() && b.is_point() {
            return a.lo().cmp(b.lo());
        }
        // Points never equal the other root here (equality was excluded),
        // so refinement of the non-point side must eventually separate.
        if a.is_point() {
            // a = r: either r <= b.lo (then r < root(b)) or r > root(b) once b excludes r
            if a.lo() <= b.lo() {
                return Ordering::Less;
            }
            b.refine();
            continue;
        }
        if b.is_point() {
            if b.lo() <= a.lo() {
                return Ordering::Greater;
            }
            a.refine();
            continue;
        }
        a.refine();
        b.refine();
    }
}

/// Exact equality of two isolated algebraic numbers: equal iff the gcd of
/// the witnesses has a root in the overlap of the isolating intervals.
pub fn algebraic_eq(a: &IsolatingInterval, b: &IsolatingInterval) -> bool {
    match (a.rational_root(), b.rational_root()) {
        (Some(ra), Some(rb)) => return ra == rb,
        (Some(ra), None) => {
            return b.poly().eval_at(ra).is_zero() && b.lo() < ra && ra <= b.hi();
        }
        (None, Some(rb)) => {
            return a.poly().eval_at(rb).is_zero() && a.lo() < rb && rb <= a.hi();
        }
        (None, None) => {}
    }
    let g = gcd(a.poly(), b.poly());
    if g.degree().unwrap_or(0) == 0 {
        return false;
    }
    let lo = a.lo().max(b.lo()).clone();
    let hi = a.hi().min(b.hi()).clone();
    if lo >= hi {
        return false;
    }
    sturm_count(&g, &lo, &hi).map(|c| c > 0).unwrap_or(false)
}

/// Exact sign of `p` at an isolated algebraic number: -1, 0, or 1.
pub fn sign_at_algebraic(p: &UniPoly, alpha: &IsolatingInterval) -> i8 {
    if p.is_zero() {
        return 0;
    }
    if let Some(r) = alpha.rational_root() {
        let v = p.eval_at(r);
        return rational_sign(&v);
    }
    // Does p vanish at alpha? Exactly when gcd(p, witness) has the same root.
    let g = gcd(p, alpha.poly());
    if g.degree().unwrap_or(0) > 0
        && sturm_count(&g, alpha.lo(), alpha.hi()).map(|c| c > 0).unwrap_or(false)
    {
        return 0;
    }
    // p(alpha) != 0: shrink until p has no root on the closed interval, then
    // the sign at a rational endpoint is the sign at alpha.
    let mut iv = alpha.clone();
    loop {
        let no_root_inside = sturm_count(p, iv.lo(), iv.hi()).map(|c| c == 0).unwrap_or(true)
            && !p.eval_at(iv.lo()).is_zero();
        if no_root_inside {
            return rational_sign(&p.eval_at(iv.hi()));
        }
        iv.refine();
        if let Some(r) = iv.rational_root() {
            return rational_sign(&p.eval_at(r));
        }
    }
}

fn rational_sign(v: &Rat) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn up(s: &str) -> UniPoly {
        s.parse().unwrap()
    }

    #[test]
    fn sturm_counts_distinct_roots_half_open() {
        assert_eq!(sturm_count(&up("x^2 - 2"), &rat_int(0), &rat_int(2)).unwrap(), 1);
        assert_eq!(sturm_count(&up("x^2 + 1"), &rat_int(-10), &rat_int(10)).unwrap(), 0);
        let p = up("x - 1").pow(2).mul(&up("x - 3"));
        assert_eq!(sturm_count(&p, &rat_int(0), &rat_int(2)).unwrap(), 1);
        // hi endpoint included, lo excluded
        assert_eq!(sturm_count(&up("x^2 - 1"), &rat_int(0), &rat_int(1)).unwrap(), 1);
        assert_eq!(sturm_count(&up("x^2 - 1"), &rat_int(-1), &rat_int(1)).unwrap(), 1);
        assert!(sturm_count(&UniPoly::zero(), &rat_int(0), &rat_int(1)).is_err());
    }

    #[test]
    fn sturm_agrees_with_known_root_multisets() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..500 {
            let nroots = rng.gen_range(0..=6usize);
            let mut p = UniPoly::one();
            let mut roots = Vec::new();
            for _ in 0..nroots {
                let r = rat(rng.gen_range(-8..=8), rng.gen_range(1..=4));
                let mult = rng.gen_range(1..=2u32);
                p = p.mul(&UniPoly::x_minus(&r).pow(mult));
                roots.push(r);
            }
            // pad with a rootless quadratic now and then
            if rng.gen_bool(0.3) {
                p = p.mul(&up("x^2 + 1"));
            }
            if p.degree().unwrap_or(0) > 8 {
                continue;
            }
            let lo = rat(rng.gen_range(-10..=0), 1);
            let hi = &lo + rat(rng.gen_range(1..=12), 1);
            roots.sort();
            roots.dedup();
            let expected = roots.iter().filter(|r| **r > lo && **r <= hi).count();
            assert_eq!(sturm_count(&p, &lo, &hi).unwrap(), expected, "p = {p}, ({lo}, {hi}]");
        }
    }

    #[test]
    fn isolation_brackets_each_root_once() {
        let ivs = isolate_roots(&up("x^2 - 2")).unwrap();
        assert_eq!(ivs.len(), 2);
        for iv in &ivs {
            assert!(iv.width() <= Rat::one());
            // bisection oracle: a simple root flips the sign across the bracket
            let a = iv.poly().eval_at(iv.lo());
            let b = iv.poly().eval_at(iv.hi());
            assert!(a.is_negative() != b.is_negative() || b.is_zero());
        }
        assert!(ivs[0].hi() < ivs[1].lo());

        let point = isolate_roots(&up("x^2")).unwrap();
        assert_eq!(point.len(), 1);
        assert_eq!(point[0].rational_root(), Some(&rat_int(0)));

        assert!(isolate_roots(&up("x^2 + 1")).unwrap().is_empty());
        assert!(isolate_roots(&UniPoly::zero()).is_err());
    }

    #[test]
    fn isolation_handles_clustered_rationals() {
        // roots 1/3, 1/2, 2/3 are not dyadic; intervals must still separate
        let p = up("x - 1").mul(&UniPoly::x_minus(&rat(1, 3))).mul(&UniPoly::x_minus(&rat(1, 2)))
            .mul(&UniPoly::x_minus(&rat(2, 3)));
        let mut ivs = isolate_roots(&p).unwrap();
        assert_eq!(ivs.len(), 4);
        separate(&mut ivs, None);
        for w in ivs.windows(2) {
            assert!(w[0].hi() < w[1].lo());
        }
    }

    #[test]
    fn yun_decomposition_examples() {
        let fl = square_free_decompose(&up("x - 1").pow(2).mul(&up("x + 2"))).unwrap();
        assert_eq!(fl.unit, rat_int(1));
        assert_eq!(fl.factors, vec![(up("x + 2"), 1), (up("x - 1"), 2)]);
        assert_eq!(fl.reconstruct(), up("x - 1").pow(2).mul(&up("x + 2")));

        let fl = square_free_decompose(&up("x^3")).unwrap();
        assert_eq!(fl.factors, vec![(up("x"), 3)]);

        let fl = square_free_decompose(&up("6x^2 - 6")).unwrap();
        assert_eq!(fl.unit, rat_int(6));
        assert_eq!(fl.reconstruct(), up("6x^2 - 6"));
        for (f, _) in &fl.factors {
            assert_eq!(gcd(f, &f.derivative(0)), UniPoly::one(), "{f} not square-free");
        }
        for i in 0..fl.factors.len() {
            for j in i + 1..fl.factors.len() {
                assert_eq!(gcd(&fl.factors[i].0, &fl.factors[j].0), UniPoly::one());
            }
        }
        // the irreducible split of the same input comes from the factorizer
        let fine = factor_low_degree(&up("6x^2 - 6")).unwrap();
        assert_eq!(fine.unit, rat_int(6));
        assert_eq!(fine.factors.len(), 2);
        assert!(fine.factors.contains(&(up("x - 1"), 1)));
        assert!(fine.factors.contains(&(up("x + 1"), 1)));
    }

    #[test]
    fn factor_low_degree_examples() {
        let fl = factor_low_degree(&up("x^4 - 1")).unwrap();
        assert!(fl.is_complete());
        assert_eq!(fl.reconstruct(), up("x^4 - 1"));
        let fs: Vec<_> = fl.factors.iter().map(|(f, m)| (f.to_string(), *m)).collect();
        assert!(fs.contains(&("x - 1".to_string(), 1)));
        assert!(fs.contains(&("x + 1".to_string(), 1)));
        assert!(fs.contains(&("x^2 + 1".to_string(), 1)));

        let fl = factor_low_degree(&up("x^2 - x")).unwrap();
        assert!(fl.is_complete());
        assert_eq!(fl.reconstruct(), up("x^2 - x"));

        // x^4 + x + 1 has no factor of degree <= 2 over the rationals:
        // integer-coefficient oracle over (x^2+ax+b)(x^2+cx+d) with bd = 1.
        let target = up("x^4 + x + 1");
        for a in -3i64..=3 {
            for (b, d) in [(1i64, 1i64), (-1, -1)] {
                for c in -3i64..=3 {
                    let q = up("x^2")
                        .add(&UniPoly::x().scale(&rat_int(a)))
                        .add(&UniPoly::constant(rat_int(b)));
                    let r = up("x^2")
                        .add(&UniPoly::x().scale(&rat_int(c)))
                        .add(&UniPoly::constant(rat_int(d)));
                    assert_ne!(q.mul(&r), target, "unexpected factorization");
                }
            }
        }
        for root in [1i64, -1] {
            assert!(!target.eval_at(&rat_int(root)).is_zero());
        }
        let fl = factor_low_degree(&target).unwrap();
        assert!(!fl.is_complete());
        assert_eq!(fl.remainder, Some(target.clone()));
        assert_eq!(fl.reconstruct(), target);
    }

    #[test]
    fn factor_low_degree_always_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..120 {
            let mut p = UniPoly::constant(rat(rng.gen_range(1..=5), rng.gen_range(1..=3)));
            for _ in 0..rng.gen_range(1..=4usize) {
                if rng.gen_bool(0.7) {
                    let r = rat(rng.gen_range(-5..=5), rng.gen_range(1..=3));
                    p = p.mul(&UniPoly::x_minus(&r).pow(rng.gen_range(1..=2)));
                } else {
                    // irreducible quadratic (negative discriminant)
                    let b = rat(rng.gen_range(-4..=4), 1);
                    let c = &b * &b / rat_int(4) + rat(rng.gen_range(1..=4), 1);
                    p = p.mul(&up("x^2").add(&UniPoly::x().scale(&b)).add(&UniPoly::constant(c)));
                }
            }
            let fl = factor_low_degree(&p).unwrap();
            assert_eq!(fl.reconstruct(), p, "reconstruction must be exact");
            assert!(fl.is_complete(), "built from low-degree pieces: {p}");
        }
    }

    #[test]
    fn nonneg_decision_examples() {
        let u01 = IntervalUnion::parse("[0,1]").unwrap();
        assert!(decide_nonneg_on_u(&up("x - x^2"), &u01).is_nonneg());
        match decide_nonneg_on_u(&up("0 - 1"), &u01) {
            NonnegDecision::Negative { witness, value } => {
                assert!(u01.contains(&witness));
                assert_eq!(value, rat_int(-1));
            }
            d => panic!("expected a witness, got {d:?}"),
        }
        let u = IntervalUnion::parse("[0,1]u[2,3]").unwrap();
        let p = up("x - 1").mul(&up("x - 2"));
        assert!(decide_nonneg_on_u(&p, &u).is_nonneg());
        // dense-sampling cross-check at denominator 64
        for (a, b) in u.components() {
            let steps = 64i64;
            for j in 0..=steps {
                let x = a + (b - a) * rat(j, steps);
                assert!(!p.eval_at(&x).is_negative());
            }
        }
        // interior dip is caught even with flat endpoints
        let dip = up("x - 1").mul(&up("x")).neg(); // -x(x-1) = x - x^2 >= 0; negate again
        assert!(decide_nonneg_on_u(&dip, &u01).is_nonneg());
        let humped = up("x").mul(&up("x - 1")); // negative strictly inside [0,1]
        match decide_nonneg_on_u(&humped, &u01) {
            NonnegDecision::Negative { witness, value } => {
                assert!(value.is_negative());
                assert_eq!(humped.eval_at(&witness), value);
            }
            d => panic!("expected interior witness, got {d:?}"),
        }
    }

    #[test]
    fn degenerate_components_use_point_evaluation() {
        let u = IntervalUnion::parse("[1/3,1/3]").unwrap();
        assert!(decide_nonneg_on_u(&up("x"), &u).is_nonneg());
        assert!(!decide_nonneg_on_u(&up("x - 1"), &u).is_nonneg());
    }

    #[test]
    fn algebraic_comparison_is_exact() {
        let sqrt2 = &isolate_roots(&up("x^2 - 2")).unwrap()[1];
        let sqrt2_again = &isolate_roots(&up("x^4 - 4")).unwrap()[1];
        assert!(algebraic_eq(sqrt2, sqrt2_again));
        assert_eq!(cmp_algebraic(sqrt2, sqrt2_again), Ordering::Equal);

        let sqrt3 = &isolate_roots(&up("x^2 - 3")).unwrap()[1];
        assert!(!algebraic_eq(sqrt2, sqrt3));
        assert_eq!(cmp_algebraic(sqrt2, sqrt3), Ordering::Less);

        let half = IsolatingInterval::exact(rat(1, 2), up("2x - 1"));
        assert_eq!(cmp_algebraic(&half, sqrt2), Ordering::Less);
        assert_eq!(cmp_algebraic(sqrt2, &half), Ordering::Greater);

        // sign of x^2 - 3 at sqrt(2) is negative; at sqrt(2) of x^2 - 2 is zero
        assert_eq!(sign_at_algebraic(&up("x^2 - 3"), sqrt2), -1);
        assert_eq!(sign_at_algebraic(&up("x^2 - 2"), sqrt2), 0);
        assert_eq!(sign_at_algebraic(&up("x"), sqrt2), 1);
    }
}
