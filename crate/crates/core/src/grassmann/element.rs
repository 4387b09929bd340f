use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, Complex, One, Zero};

use crate::error::{domain, Result};

/// Exact complex rational coefficient.
pub type Coeff = Complex<BigRational>;

/// Maximum number of generators in one algebra (monomials are `u64` masks).
pub const MAX_GENERATORS: usize = 64;

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| crate::Error::Domain(format!("{x} is not finite")))
}

pub fn real(x: BigRational) -> Coeff {
    Complex::new(x, BigRational::zero())
}

pub fn imag(x: BigRational) -> Coeff {
    Complex::new(BigRational::zero(), x)
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Ordered generator list shared by every element of one algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct Generators(Arc<Vec<String>>);

impl Generators {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.len() > MAX_GENERATORS {
            return domain(format!("at most {MAX_GENERATORS} generators supported"));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return domain("generator names must be non-empty");
            }
            if names[..i].contains(n) {
                return domain(format!("duplicate generator {n}"));
            }
        }
        Ok(Self(Arc::new(names)))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| crate::Error::Domain(format!("unknown generator {name}")))
    }
}

impl fmt::Debug for Generators {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Element of the exterior algebra over an ordered generator list.
///
/// A monomial is a bitmask; bit `k` set means generator `k` appears, and the
/// monomial is read in increasing generator order. Zero coefficients are
/// never stored, so structural equality is algebraic equality.
#[derive(Clone, PartialEq)]
pub struct GrassmannElement {
    generators: Generators,
    terms: BTreeMap<u64, Coeff>,
}

fn parity(n: u32) -> bool {
    n % 2 == 1
}

/// Sign of `A · B` for disjoint monomials: one transposition for every pair
/// with a generator of `A` sitting above a generator of `B`.
fn merge_sign(a: u64, b: u64) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let k = rest.trailing_zeros();
        let above = if k == 63 { 0 } else { !0u64 << (k + 1) };
        swaps += (a & above).count_ones();
        rest &= rest - 1;
    }
    parity(swaps)
}

impl GrassmannElement {
    pub fn zero(generators: &Generators) -> Self {
        Self {
            generators: generators.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(generators: &Generators, c: Coeff) -> Self {
        let mut e = Self::zero(generators);
        e.insert(0, c);
        e
    }

    pub fn one(generators: &Generators) -> Self {
        Self::scalar(generators, Coeff::one())
    }

    pub fn generator(generators: &Generators, name: &str) -> Result<Self> {
        let k = generators.index_of(name)?;
        let mut e = Self::zero(generators);
        e.insert(1u64 << k, Coeff::one());
        Ok(e)
    }

    /// Monomial from a list of generator names in the given (not necessarily
    /// canonical) order, with coefficient one.
    pub fn monomial(generators: &Generators, names: &[&str]) -> Result<Self> {
        let mut e = Self::one(generators);
        for n in names {
            e = e.mul(&Self::generator(generators, n)?)?;
        }
        Ok(e)
    }

    fn insert(&mut self, mask: u64, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(existing) => {
                *existing = &*existing + &c;
                if existing.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    pub fn generators(&self) -> &Generators {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Coeff)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, mask: u64) -> Coeff {
        self.terms.get(&mask).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Coefficient of the canonical monomial built from `names`.
    pub fn coefficient_of(&self, names: &[&str]) -> Result<Coeff> {
        let mut mask = 0u64;
        for n in names {
            let bit = 1u64 << self.generators.index_of(n)?;
            if mask & bit != 0 {
                return Ok(Coeff::zero());
            }
            mask |= bit;
        }
        Ok(self.coefficient(mask))
    }

    fn check_universe(&self, other: &Self) -> Result<()> {
        if self.generators != other.generators {
            return domain(format!(
                "generator universes differ: {:?} vs {:?}",
                self.generators, other.generators
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_universe(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Coeff::one())
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero(&self.generators);
        for (m, v) in &self.terms {
            out.insert(*m, v * c);
        }
        out
    }

    /// Graded product; repeated generators annihilate the term.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_universe(other)?;
        let mut out = Self::zero(&self.generators);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let c = ca * cb;
                out.insert(a | b, if merge_sign(*a, *b) { -c } else { c });
            }
        }
        Ok(out)
    }

    /// `[x, y] = xy − yx`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Removes `name` from every monomial containing it after anticommuting
    /// it to the requested end; monomials without it vanish.
    pub fn derivative(&self, name: &str, side: Side) -> Result<Self> {
        let k = self.generators.index_of(name)?;
        let bit = 1u64 << k;
        let below = bit - 1;
        let above = if k == 63 { 0 } else { !0u64 << (k + 1) };
        let mut out = Self::zero(&self.generators);
        for (m, c) in &self.terms {
            if m & bit == 0 {
                continue;
            }
            let hops = match side {
                Side::Left => (m & below).count_ones(),
                Side::Right => (m & above).count_ones(),
            };
            out.insert(m & !bit, if parity(hops) { -c.clone() } else { c.clone() });
        }
        Ok(out)
    }

    /// Even derivation replacing each generator `g` by `rate(g)` in place.
    ///
    /// Used for time derivatives, where `rate(ψ) = ψ̇`. Generators for which
    /// `rate` returns `None` must not occur in the element.
    pub fn derivation(&self, rate: impl Fn(&str) -> Option<String>) -> Result<Self> {
        let names = self.generators.names().to_vec();
        let mut out = Self::zero(&self.generators);
        for (m, c) in &self.terms {
            let present: Vec<usize> = (0..names.len()).filter(|k| m & (1u64 << k) != 0).collect();
            for (slot, &k) in present.iter().enumerate() {
                let Some(target) = rate(&names[k]) else {
                    return domain(format!("no time derivative defined for {}", names[k]));
                };
                let mut term = Self::scalar(&self.generators, c.clone());
                for (pos, &g) in present.iter().enumerate() {
                    let factor = if pos == slot {
                        Self::generator(&self.generators, &target)?
                    } else {
                        Self::generator(&self.generators, &names[g])?
                    };
                    term = term.mul(&factor)?;
                }
                out = out.add(&term)?;
            }
        }
        Ok(out)
    }

    /// Largest monomial degree present, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.count_ones()).max()
    }

    /// Replaces every coefficient by its `f64` approximation, for reporting.
    pub fn approx_terms(&self) -> Vec<(Vec<String>, (f64, f64))> {
        let mut keys: Vec<&u64> = self.terms.keys().collect();
        keys.sort_by_key(|m| (m.count_ones(), **m));
        keys.into_iter()
            .map(|m| {
                let c = &self.terms[m];
                (
                    self.monomial_names(*m),
                    (rational_to_f64(&c.re), rational_to_f64(&c.im)),
                )
            })
            .collect()
    }

    fn monomial_names(&self, mask: u64) -> Vec<String> {
        self.generators
            .names()
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1u64 << k) != 0)
            .map(|(_, n)| n.clone())
            .collect()
    }
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    use num::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn fmt_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `(re,im)` literal, the same syntax the parser accepts.
pub fn fmt_coeff(c: &Coeff) -> String {
    format!("({},{})", fmt_rational(&c.re), fmt_rational(&c.im))
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&u64> = self.terms.keys().collect();
        keys.sort_by_key(|m| (m.count_ones(), **m));
        for (i, m) in keys.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let c = &self.terms[m];
            let names = self.monomial_names(*m);
            if names.is_empty() {
                write!(f, "{}", fmt_coeff(c))?;
            } else if c.is_one() {
                write!(f, "{}", names.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(c), names.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrassmannElement({self})")
    }
}
