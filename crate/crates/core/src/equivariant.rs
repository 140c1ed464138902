//! The integral Chow ring `A*(BG)` of a finite abelian group
//! `G = Z/n1 x ... x Z/nm`, presented as `Z[t1, ..., tm] / (n_i t_i)` with
//! `t_i = c1` of the `i`-th basic character.
//!
//! The ideal is spanned by monomials, so a class is stored as a map from
//! exponent vectors to coefficients, each reduced modulo
//! `gcd{n_i : a_i > 0}` (no reduction for the constant term). Monomials with
//! modulus 1 vanish. This representation is canonical: two classes are equal
//! iff their maps are equal.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BgRing {
    factors: Vec<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EquivariantClass {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl EquivariantClass {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Split by total degree.
    pub fn degree_parts(&self) -> BTreeMap<u32, EquivariantClass> {
        let mut parts: BTreeMap<u32, EquivariantClass> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.iter().sum())
                .or_default()
                .terms
                .insert(m.clone(), c.clone());
        }
        parts
    }

    /// The common degree of all terms, `None` for zero or mixed classes.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|m| m.iter().sum::<u32>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}

impl BgRing {
    pub fn new(factors: &[u64]) -> Self {
        assert!(factors.iter().all(|&n| n > 0), "invariant factors must be positive");
        BgRing {
            factors: factors.to_vec(),
        }
    }

    /// `A*(B{e}) = Z`.
    pub fn integers() -> Self {
        BgRing { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn generator_count(&self) -> usize {
        self.factors.len()
    }

    /// `None` for the constant monomial, otherwise `gcd{n_i : a_i > 0}`.
    pub fn modulus(&self, exps: &[u32]) -> Option<u64> {
        exps.iter()
            .zip(&self.factors)
            .filter(|(&a, _)| a > 0)
            .map(|(_, &n)| n)
            .reduce(|a, b| a.gcd(&b))
    }

    fn insert_term(&self, terms: &mut BTreeMap<Vec<u32>, BigInt>, exps: Vec<u32>, coeff: BigInt) {
        assert_eq!(exps.len(), self.factors.len(), "monomial from another ring");
        let reduced = match self.modulus(&exps) {
            None => coeff,
            Some(m) => coeff.mod_floor(&BigInt::from(m)),
        };
        if !reduced.is_zero() {
            terms.insert(exps, reduced);
        }
    }

    pub fn class_from_terms<I>(&self, terms: I) -> EquivariantClass
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut sums: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            *sums.entry(m).or_default() += c;
        }
        let mut out = BTreeMap::new();
        for (m, c) in sums {
            self.insert_term(&mut out, m, c);
        }
        EquivariantClass { terms: out }
    }

    pub fn zero(&self) -> EquivariantClass {
        EquivariantClass::default()
    }

    pub fn constant(&self, c: impl Into<BigInt>) -> EquivariantClass {
        self.class_from_terms([(vec![0; self.factors.len()], c.into())])
    }

    pub fn one(&self) -> EquivariantClass {
        self.constant(1)
    }

    pub fn generator(&self, i: usize) -> EquivariantClass {
        let mut e = vec![0; self.factors.len()];
        e[i] = 1;
        self.class_from_terms([(e, BigInt::one())])
    }

    /// First Chern class of the character with exponent `character[i]` on the
    /// `i`-th generator: `sum_i (character[i] mod n_i) t_i`.
    pub fn c1(&self, character: &[i64]) -> EquivariantClass {
        assert_eq!(character.len(), self.factors.len(), "character length");
        self.class_from_terms(character.iter().enumerate().map(|(i, &c)| {
            let mut e = vec![0; self.factors.len()];
            e[i] = 1;
            (e, BigInt::from(c))
        }))
    }

    pub fn add(&self, a: &EquivariantClass, b: &EquivariantClass) -> EquivariantClass {
        self.class_from_terms(
            a.terms
                .iter()
                .chain(&b.terms)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn neg(&self, a: &EquivariantClass) -> EquivariantClass {
        self.class_from_terms(a.terms.iter().map(|(m, c)| (m.clone(), -c)))
    }

    pub fn sub(&self, a: &EquivariantClass, b: &EquivariantClass) -> EquivariantClass {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &EquivariantClass, k: &BigInt) -> EquivariantClass {
        self.class_from_terms(a.terms.iter().map(|(m, c)| (m.clone(), c * k)))
    }

    pub fn mul(&self, a: &EquivariantClass, b: &EquivariantClass) -> EquivariantClass {
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                terms.push((m, ca * cb));
            }
        }
        self.class_from_terms(terms)
    }

    pub fn pow(&self, a: &EquivariantClass, mut k: u32) -> EquivariantClass {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Image in `A*(BG) ⊗ Q = Q`: every monomial of positive degree is
    /// torsion, so only the constant term survives.
    pub fn rational_image(&self, a: &EquivariantClass) -> BigInt {
        a.coefficient(&vec![0; self.factors.len()])
    }

    /// `{"[a1,...,am]": coeff, ...}`
    pub fn to_json(&self, a: &EquivariantClass) -> Value {
        let mut map = Map::new();
        for (m, c) in &a.terms {
            map.insert(monomial_key(m), json_integer(c));
        }
        Value::Object(map)
    }

    pub fn from_json(&self, v: &Value) -> Result<EquivariantClass> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidTableDocument("class must be a JSON object".into()))?;
        let mut terms = Vec::with_capacity(obj.len());
        for (k, c) in obj {
            let exps = parse_monomial_key(k)
                .filter(|e| e.len() == self.factors.len())
                .ok_or_else(|| Error::InvalidTableDocument(format!("bad monomial key `{k}`")))?;
            let coeff = match c {
                Value::Number(n) => n.to_string().parse::<BigInt>().ok(),
                Value::String(s) => s.parse::<BigInt>().ok(),
                _ => None,
            }
            .ok_or_else(|| Error::InvalidTableDocument(format!("bad coefficient for `{k}`")))?;
            terms.push((exps, coeff));
        }
        Ok(self.class_from_terms(terms))
    }

    pub fn display<'a>(&'a self, a: &'a EquivariantClass) -> DisplayClass<'a> {
        DisplayClass { ring: self, class: a }
    }
}

pub fn monomial_key(m: &[u32]) -> String {
    let parts: Vec<String> = m.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn parse_monomial_key(k: &str) -> Option<Vec<u32>> {
    let inner = k.trim().strip_prefix('[')?.strip_suffix(']')?.trim();
    if inner.is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|p| p.trim().parse().ok()).collect()
}

/// Integers that fit in `i64` as JSON numbers, larger ones as strings.
pub fn json_integer(c: &BigInt) -> Value {
    match i64::try_from(c) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(c.to_string()),
    }
}

pub struct DisplayClass<'a> {
    ring: &'a BgRing,
    class: &'a EquivariantClass,
}

impl fmt::Display for DisplayClass<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.class.is_zero() {
            return write!(f, "0");
        }
        let single = self.ring.generator_count() == 1;
        let mut first = true;
        for (m, c) in &self.class.terms {
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let c = c.abs();
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| {
                    let t = if single { "t".to_string() } else { format!("t{}", i + 1) };
                    if a == 1 {
                        t
                    } else {
                        format!("{t}^{a}")
                    }
                })
                .collect();
            match (vars.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn c1_examples() {
        let z2 = BgRing::new(&[2]);
        assert_eq!(z2.c1(&[1]), z2.generator(0));
        assert!(z2.c1(&[2]).is_zero());
        let z6 = BgRing::new(&[2, 3]);
        let expect = z6.add(&z6.generator(0), &z6.scale(&z6.generator(1), &BigInt::from(2)));
        assert_eq!(z6.c1(&[1, 2]), expect);
        assert_eq!(z6.c1(&[1, 2]).coefficient(&[0, 1]), BigInt::from(2));
        assert_eq!(z6.c1(&[-1, 5]), expect);
    }

    #[test]
    fn mul_examples() {
        let z2 = BgRing::new(&[2]);
        let t = z2.generator(0);
        let t2 = z2.mul(&t, &t);
        assert_eq!(t2.coefficient(&[2]), BigInt::one());
        assert!(!t2.is_zero());
        let z6 = BgRing::new(&[2, 3]);
        assert!(z6.mul(&z6.generator(0), &z6.generator(1)).is_zero());
        let a = z6.c1(&[1, 1]);
        assert_eq!(z6.add(&a, &z6.zero()), a);
    }

    #[test]
    fn zero_and_degree_parts() {
        let z2 = BgRing::new(&[2]);
        assert!(z2.scale(&z2.generator(0), &BigInt::from(2)).is_zero());
        assert!(z2.zero().degree_parts().is_empty());
        let x = z2.add(&z2.constant(5), &z2.pow(&z2.generator(0), 3));
        let parts = x.degree_parts();
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![0, 3]);
        assert_eq!(x.homogeneous_degree(), None);
        assert_eq!(parts[&3].homogeneous_degree(), Some(3));
        assert_eq!(z2.rational_image(&x), BigInt::from(5));
    }

    #[test]
    fn integer_ring_is_z() {
        let z = BgRing::integers();
        let a = z.constant(6);
        let b = z.constant(-7);
        assert_eq!(z.mul(&a, &b), z.constant(-42));
        assert_eq!(z.rational_image(&z.add(&a, &b)), BigInt::from(-1));
    }

    #[test]
    fn json_round_trip() {
        let r = BgRing::new(&[4, 6]);
        let x = r.class_from_terms([
            (vec![0, 0], BigInt::from(-3)),
            (vec![1, 0], BigInt::from(3)),
            (vec![1, 2], BigInt::from(1)),
        ]);
        let v = r.to_json(&x);
        assert_eq!(v["[0,0]"], Value::from(-3));
        assert_eq!(r.from_json(&v).unwrap(), x);
        assert!(r.from_json(&serde_json::json!({"[1]": 1})).is_err());
        assert_eq!(r.display(&x).to_string(), "-3 + 3*t1 + t1*t2^2");
    }

    fn ring_and_classes() -> impl Strategy<Value = (BgRing, Vec<EquivariantClass>)> {
        prop::collection::vec(1u64..7, 0..3).prop_flat_map(|factors| {
            let ring = BgRing::new(&factors);
            let m = factors.len();
            let term = (prop::collection::vec(0u32..3, m), -9i64..10);
            let class = prop::collection::vec(term, 0..5);
            prop::collection::vec(class, 3).prop_map(move |cs| {
                let classes = cs
                    .into_iter()
                    .map(|ts| ring.class_from_terms(ts.into_iter().map(|(e, c)| (e, c.into()))))
                    .collect();
                (ring.clone(), classes)
            })
        })
    }

    proptest! {
        #[test]
        fn ring_axioms((r, cs) in ring_and_classes()) {
            let (a, b, c) = (&cs[0], &cs[1], &cs[2]);
            prop_assert_eq!(r.mul(&r.mul(a, b), c), r.mul(a, &r.mul(b, c)));
            prop_assert_eq!(r.mul(a, b), r.mul(b, a));
            prop_assert_eq!(r.mul(a, &r.add(b, c)), r.add(&r.mul(a, b), &r.mul(a, c)));
            prop_assert_eq!(r.add(&r.add(a, b), c), r.add(a, &r.add(b, c)));
            prop_assert_eq!(r.mul(a, &r.one()), a.clone());
        }

        #[test]
        fn canonical_form_is_unique((r, cs) in ring_and_classes()) {
            let (a, b) = (&cs[0], &cs[1]);
            prop_assert_eq!(r.sub(a, b).is_zero(), a == b);
            prop_assert!(r.sub(a, a).is_zero());
        }

        #[test]
        fn positive_degree_vanishes_rationally((r, cs) in ring_and_classes()) {
            for (d, part) in cs[0].degree_parts() {
                if d > 0 {
                    prop_assert!(r.rational_image(&part).is_zero());
                    // torsion: some multiple vanishes
                    let order: u64 = r.factors().iter().product();
                    prop_assert!(r.scale(&part, &BigInt::from(order)).is_zero());
                }
            }
        }
    }
}
