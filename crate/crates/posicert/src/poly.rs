//! Sparse exact polynomial arithmetic over the rationals in one, two, or
//! three variables.
//!
//! A polynomial is a map from exponent tuples to nonzero `BigRational`
//! coefficients. The arity is part of the type (`Poly<1>`, `Poly<2>`,
//! `Poly<3>`), so mixing arities is a compile error; promotion between
//! arities is explicit via [`UniPoly::into_bi`] and friends. All arithmetic
//! is exact — there is no floating point anywhere in this crate.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::text;

/// The coefficient field: arbitrary-precision rationals, always reduced.
pub type Rat = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Convenience constructor for small integers as rationals.
pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(num.into())
}

/// Exact exponentiation of a rational.
pub fn rat_pow(base: &Rat, exp: u32) -> Rat {
    let mut acc = Rat::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// Names of the variables, indexed by slot.
pub const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

/// A sparse polynomial in `N` variables with exact rational coefficients.
///
/// Canonical form: no stored coefficient is zero. Two polynomials are equal
/// iff their term maps are equal, so `==` is exact polynomial identity.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly<const N: usize> {
    terms: BTreeMap<[u32; N], Rat>,
}

pub type UniPoly = Poly<1>;
pub type BiPoly = Poly<2>;
pub type TriPoly = Poly<3>;

impl<const N: usize> Poly<N> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0u32; N], c);
        }
        Poly { terms }
    }

    /// The monomial `c * prod_i var_i^exps[i]`.
    pub fn monomial(exps: [u32; N], c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { terms }
    }

    /// The variable with the given slot index (0 = x, 1 = y, 2 = z).
    pub fn var(idx: usize) -> Self {
        assert!(idx < N, "variable index {idx} out of range for arity {N}");
        let mut exps = [0u32; N];
        exps[idx] = 1;
        Self::monomial(exps, Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in one variable, or `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        assert!(var < N);
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Coefficient of the given exponent tuple (zero if absent).
    pub fn coeff(&self, exps: &[u32; N]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Iterate terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(terms: &mut BTreeMap<[u32; N], Rat>, exps: [u32; N], c: Rat) {
        if c.is_zero() {
            return;
        }
        match terms.get_mut(&exps) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    terms.remove(&exps);
                }
            }
            None => {
                terms.insert(exps, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_add(&mut terms, *e, c.clone());
        }
        Poly { terms }
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = [0u32; N];
                for i in 0..N {
                    e[i] = ea[i] + eb[i];
                }
                Self::insert_add(&mut terms, e, ca * cb);
            }
        }
        Poly { terms }
    }

    /// Multiply by an exact scalar.
    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect() }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut sq = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rat; N]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for i in 0..N {
                if e[i] > 0 {
                    term *= rat_pow(&point[i], e[i]);
                }
            }
            acc += term;
        }
        acc
    }

    /// Partial derivative with respect to one variable.
    pub fn derivative(&self, var: usize) -> Self {
        assert!(var < N);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[var] -= 1;
            Self::insert_add(&mut terms, ne, c * Rat::from_integer(e[var].into()));
        }
        Poly { terms }
    }

    /// Coefficients grouped by the power of `var`; each value has the `var`
    /// slot zeroed out. Reassembling `sum_k coeff_k * var^k` reproduces the
    /// polynomial exactly.
    pub fn coeffs_in(&self, var: usize) -> BTreeMap<u32, Poly<N>> {
        assert!(var < N);
        let mut groups: BTreeMap<u32, Poly<N>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[var];
            let mut ne = *e;
            ne[var] = 0;
            let entry = groups.entry(k).or_insert_with(Poly::zero);
            Self::insert_add(&mut entry.terms, ne, c.clone());
        }
        groups.retain(|_, p| !p.is_zero());
        groups
    }

    /// Substitute `replacement` for the variable at `var`, exactly.
    pub fn substitute(&self, var: usize, replacement: &Self) -> Self {
        assert!(var < N);
        let groups = self.coeffs_in(var);
        let max_k = match groups.keys().max() {
            Some(&k) => k,
            None => return Self::zero(),
        };
        // Horner evaluation from the top power down.
        let mut acc = Poly::zero();
        for k in (0..=max_k).rev() {
            acc = acc.mul(replacement);
            if let Some(coeff) = groups.get(&k) {
                acc = acc.add(coeff);
            }
        }
        acc
    }

    /// Exact division: returns `q` with `self = q * den`, or the nonzero
    /// remainder at the point where leading-term division failed.
    pub fn exact_div(&self, den: &Self) -> Result<Self, PolyError<N>> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (de, dc) = den.terms.iter().next_back().map(|(e, c)| (*e, c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        while let Some((re, rc)) = rem.terms.iter().next_back().map(|(e, c)| (*e, c.clone())) {
            let mut qe = [0u32; N];
            for i in 0..N {
                match re[i].checked_sub(de[i]) {
                    Some(d) => qe[i] = d,
                    None => return Err(PolyError::Indivisible { remainder: rem }),
                }
            }
            let qc = &rc / &dc;
            let qterm = Poly::monomial(qe, qc);
            rem = rem.sub(&qterm.mul(den));
            quo = quo.add(&qterm);
        }
        Ok(quo)
    }

    /// Halve every exponent of `var`; errors if any is odd. This is the
    /// inverse of substituting `var -> var^2`.
    pub fn halve_exponents(&self, var: usize) -> Result<Self, PolyError<N>> {
        assert!(var < N);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] % 2 != 0 {
                return Err(PolyError::OddExponent { var, exps: *e });
            }
            let mut ne = *e;
            ne[var] /= 2;
            terms.insert(ne, c.clone());
        }
        Ok(Poly { terms })
    }

    /// True if every exponent of `var` is even.
    pub fn is_even_in(&self, var: usize) -> bool {
        self.terms.keys().all(|e| e[var] % 2 == 0)
    }
}

/// Errors from polynomial arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError<const N: usize> {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible: remainder {}", text::poly_to_string(.remainder))]
    Indivisible { remainder: Poly<N> },
    #[error("exponent of {} is odd in term {exps:?}", VAR_NAMES[*.var])]
    OddExponent { var: usize, exps: [u32; N] },
}

impl UniPoly {
    pub fn x() -> Self {
        Self::var(0)
    }

    /// Evaluate at a single rational.
    pub fn eval_at(&self, x: &Rat) -> Rat {
        self.eval(std::array::from_ref(x))
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    pub fn degree(&self) -> Option<u32> {
        self.degree_in(0)
    }

    /// The linear polynomial `x - r`.
    pub fn x_minus(r: &Rat) -> Self {
        Self::x().sub(&Self::constant(r.clone()))
    }

    /// Embed into two variables (x stays x).
    pub fn into_bi(&self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(e, c)| ([e[0], 0], c.clone())).collect() }
    }

    /// Embed into three variables.
    pub fn into_tri(&self) -> TriPoly {
        TriPoly { terms: self.terms.iter().map(|(e, c)| ([e[0], 0, 0], c.clone())).collect() }
    }
}

impl BiPoly {
    pub fn x() -> Self {
        Self::var(0)
    }

    pub fn y() -> Self {
        Self::var(1)
    }

    /// Coefficient of `y^i` as a univariate polynomial in x.
    pub fn coeff_in_y(&self, i: u32) -> UniPoly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[1] == i {
                terms.insert([e[0]], c.clone());
            }
        }
        UniPoly { terms }
    }

    pub fn into_tri(&self) -> TriPoly {
        TriPoly { terms: self.terms.iter().map(|(e, c)| ([e[0], e[1], 0], c.clone())).collect() }
    }

    /// Demote to one variable if y does not occur.
    pub fn try_into_uni(&self) -> Option<UniPoly> {
        if self.terms.keys().any(|e| e[1] != 0) {
            return None;
        }
        Some(UniPoly { terms: self.terms.iter().map(|(e, c)| ([e[0]], c.clone())).collect() })
    }

    /// Evaluate x only, leaving a univariate polynomial in y.
    pub fn eval_x(&self, x: &Rat) -> UniPoly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            UniPoly::insert_add(&mut terms, [e[1]], c * rat_pow(x, e[0]));
        }
        UniPoly { terms }
    }
}

impl TriPoly {
    pub fn x() -> Self {
        Self::var(0)
    }

    pub fn y() -> Self {
        Self::var(1)
    }

    pub fn z() -> Self {
        Self::var(2)
    }

    /// Coefficient of `z^i` as a polynomial in (x, y).
    pub fn coeff_in_z(&self, i: u32) -> BiPoly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[2] == i {
                terms.insert([e[0], e[1]], c.clone());
            }
        }
        BiPoly { terms }
    }

    /// Demote to two variables if z does not occur.
    pub fn try_into_bi(&self) -> Option<BiPoly> {
        if self.terms.keys().any(|e| e[2] != 0) {
            return None;
        }
        Some(BiPoly { terms: self.terms.iter().map(|(e, c)| ([e[0], e[1]], c.clone())).collect() })
    }
}

impl<const N: usize> fmt::Display for Poly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::poly_to_string(self))
    }
}

impl<const N: usize> fmt::Debug for Poly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly<{N}>({})", text::poly_to_string(self))
    }
}

impl<const N: usize> std::str::FromStr for Poly<N> {
    type Err = text::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        text::parse_poly(s)
    }
}

macro_rules! impl_ops {
    ($($op:ident :: $method:ident => $call:ident),*) => {$(
        impl<const N: usize> std::ops::$op for &Poly<N> {
            type Output = Poly<N>;
            fn $method(self, rhs: Self) -> Poly<N> {
                Poly::$call(self, rhs)
            }
        }
        impl<const N: usize> std::ops::$op for Poly<N> {
            type Output = Poly<N>;
            fn $method(self, rhs: Self) -> Poly<N> {
                Poly::$call(&self, &rhs)
            }
        }
    )*};
}

impl_ops!(Add::add => add, Sub::sub => sub, Mul::mul => mul);

impl<const N: usize> std::ops::Neg for &Poly<N> {
    type Output = Poly<N>;
    fn neg(self) -> Poly<N> {
        Poly::neg(self)
    }
}

impl<const N: usize> std::ops::Neg for Poly<N> {
    type Output = Poly<N>;
    fn neg(self) -> Poly<N> {
        Poly::neg(&self)
    }
}

/// Is the rational non-negative?
pub fn is_nonneg(r: &Rat) -> bool {
    !r.is_negative()
}
