//! The stringy product on `A*(X_1)` for `X = [V/G]`.
//!
//! For `BG` the product of class indicators is a pushforward along the
//! third evaluation map of `K_{0,3}(BG, 0)`: a component through the pair
//! `(a, b)` has automorphism group `Z(a) ∩ Z(b)`, and pushing it forward to
//! the sector of `h = ab` (after the `chi -> chi^-1` twist of the third
//! marking) has degree `[C(h) : Z(a) ∩ Z(b)]`.
//!
//! For a diagonal action of an abelian group the product
//! `1_{g1} ⌣ 1_{g2}` lands in the sector of `g1 g2` with coefficient
//! `prod_j c1(chi_j)^{m_j}` in `A*(BG)`, where `m_j = 1` exactly when
//! coordinate `j` carries an obstruction or is an excess normal direction of
//! `V^{g1} ∩ V^{g2}` inside `V^{g1 g2}`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::equivariant::{BgRing, EquivariantClass};
use crate::error::{Error, Result};
use crate::group::{build_group, Elem, FiniteGroup, GroupSpec};
use crate::inertia::{inertia_components, InertiaDecomposition, Sector};
use crate::representation::{ActionSpec, LinearAction};
use crate::twisted_rr::coordinate_obstructions;

pub const DEFAULT_MAX_BASIS: usize = 512;

/// A finite sum `sum_s c_s 1_s` over sectors `s`, keyed by sector position.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StringyClass {
    terms: BTreeMap<usize, EquivariantClass>,
}

impl StringyClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<usize, EquivariantClass> {
        &self.terms
    }

    pub fn coefficient(&self, sector: usize) -> Option<&EquivariantClass> {
        self.terms.get(&sector)
    }

    pub fn add_term(&mut self, ring: &BgRing, sector: usize, c: &EquivariantClass) {
        let sum = match self.terms.get(&sector) {
            Some(old) => ring.add(old, c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&sector);
        } else {
            self.terms.insert(sector, sum);
        }
    }

    pub fn add(&self, ring: &BgRing, other: &StringyClass) -> StringyClass {
        let mut out = self.clone();
        for (&s, c) in &other.terms {
            out.add_term(ring, s, c);
        }
        out
    }

    pub fn sub(&self, ring: &BgRing, other: &StringyClass) -> StringyClass {
        let mut out = self.clone();
        for (&s, c) in &other.terms {
            out.add_term(ring, s, &ring.neg(c));
        }
        out
    }
}

/// Degree of a stringy class: sector age plus equivariant degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grade {
    Zero,
    Homogeneous(BigRational),
    Inhomogeneous,
}

/// A global quotient together with its sectors and coefficient ring.
///
/// The coefficient ring is `A*(BG)` when `G` is given by invariant factors and
/// plain `Z` otherwise.
#[derive(Clone, Debug)]
pub struct Orbifold {
    action: LinearAction,
    inertia: InertiaDecomposition,
    ring: BgRing,
}

impl Orbifold {
    pub fn new(action: LinearAction) -> Result<Self> {
        let inertia = inertia_components(&action)?;
        let ring = match action.group().invariant_factors() {
            Some(f) => BgRing::new(f),
            None => BgRing::integers(),
        };
        Ok(Orbifold {
            action,
            inertia,
            ring,
        })
    }

    pub fn from_specs(group: &GroupSpec, action: &ActionSpec, max_order: usize) -> Result<Self> {
        let g = build_group(group, max_order)?;
        Self::new(LinearAction::new(g, action)?)
    }

    pub fn action(&self) -> &LinearAction {
        &self.action
    }

    pub fn group(&self) -> &FiniteGroup {
        self.action.group()
    }

    pub fn inertia(&self) -> &InertiaDecomposition {
        &self.inertia
    }

    pub fn sectors(&self) -> &[Sector] {
        self.inertia.sectors()
    }

    pub fn ring(&self) -> &BgRing {
        &self.ring
    }

    /// `1_s`
    pub fn basis_class(&self, sector: usize) -> StringyClass {
        let mut x = StringyClass::zero();
        x.add_term(&self.ring, sector, &self.ring.one());
        x
    }

    pub fn unit(&self) -> StringyClass {
        self.basis_class(self.inertia.untwisted())
    }

    pub fn products_supported(&self) -> bool {
        self.action.dim() == 0 || self.action.is_abelian_diagonal()
    }

    /// Canonical serialization of the inputs, the basis of table hashes and caches.
    pub fn canonical_json(&self) -> Value {
        json!({ "group": self.group().spec(), "action": self.action.spec() })
    }

    pub fn content_hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.canonical_json()).expect("serializable");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn product(&self, x: &StringyClass, y: &StringyClass) -> Result<StringyClass> {
        if self.action.dim() == 0 {
            bg_class_product(self, x, y)
        } else if self.action.is_abelian_diagonal() {
            abelian_quotient_product(self, x, y)
        } else {
            Err(Error::UnsupportedProduct(
                "positive-dimensional actions of non-abelian groups".into(),
            ))
        }
    }

    fn check_class(&self, x: &StringyClass) -> Result<()> {
        if x.terms.keys().any(|&s| s >= self.inertia.len()) {
            return Err(Error::MismatchedAction);
        }
        Ok(())
    }
}

/// Structure constants of `[C1] ⌣ [C2]` in `A*_st(BG)`, keyed by class index.
pub fn bg_product(group: &FiniteGroup, c1: usize, c2: usize) -> BTreeMap<usize, u64> {
    let classes = group.conjugacy_classes();
    let (left, right) = (&classes[c1], &classes[c2]);
    let mut pos_right = vec![usize::MAX; group.order()];
    for (i, b) in right.members.iter().enumerate() {
        pos_right[b.index()] = i;
    }
    let width = right.size();
    let pair_index = |a_pos: usize, b: Elem| a_pos * width + pos_right[b.index()];
    let mut pos_left = vec![usize::MAX; group.order()];
    for (i, a) in left.members.iter().enumerate() {
        pos_left[a.index()] = i;
    }

    let mut seen = vec![false; left.size() * width];
    let mut out: BTreeMap<usize, u64> = BTreeMap::new();
    for (ai, &a) in left.members.iter().enumerate() {
        for &b in &right.members {
            let start = pair_index(ai, b);
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit_size = 1usize;
            let mut queue = VecDeque::from([(a, b)]);
            while let Some((x, y)) = queue.pop_front() {
                for &h in group.generators() {
                    let (cx, cy) = (group.conjugate(h, x), group.conjugate(h, y));
                    let idx = pair_index(pos_left[cx.index()], cy);
                    if !seen[idx] {
                        seen[idx] = true;
                        orbit_size += 1;
                        queue.push_back((cx, cy));
                    }
                }
            }
            // |Z(a) ∩ Z(b)| by orbit-stabilizer
            assert_eq!(group.order() % orbit_size, 0);
            let aut = (group.order() / orbit_size) as u64;
            // third marking evaluates to (ab)^-1; the twisted evaluation inverts it back
            let third = group.inverse(group.mul(a, b));
            let target = group.inverse(third);
            let target_class = group.class_index(target);
            let cent = classes[target_class].centralizer_order;
            assert_eq!(cent % aut, 0, "Z(a) ∩ Z(b) is a subgroup of C(ab)");
            *out.entry(target_class).or_default() += cent / aut;
        }
    }

    // The pushforward degrees must count factorizations of a fixed representative.
    for (k, class) in classes.iter().enumerate() {
        let h = class.representative;
        let count = left
            .members
            .iter()
            .filter(|&&a| pos_right[group.mul(group.inverse(a), h).index()] != usize::MAX)
            .count() as u64;
        assert_eq!(
            out.get(&k).copied().unwrap_or(0),
            count,
            "orbit weights disagree with factorization count"
        );
    }
    out
}

fn bg_class_product(orb: &Orbifold, x: &StringyClass, y: &StringyClass) -> Result<StringyClass> {
    orb.check_class(x)?;
    orb.check_class(y)?;
    let ring = &orb.ring;
    let mut out = StringyClass::zero();
    for (&i, cx) in &x.terms {
        for (&j, cy) in &y.terms {
            let coeff = ring.mul(cx, cy);
            let (ci, cj) = (orb.sectors()[i].class_index, orb.sectors()[j].class_index);
            for (k, n) in bg_product(orb.group(), ci, cj) {
                let s = orb.inertia.sector_of_class(k);
                out.add_term(ring, s, &ring.scale(&coeff, &BigInt::from(n)));
            }
        }
    }
    Ok(out)
}

/// Exponents `m_j` of `1_{g1} ⌣ 1_{g2}` for a diagonal abelian action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcessData {
    pub product: Elem,
    /// `h^1` of the pushed-forward eigenline, the obstruction part.
    pub obstruction: Vec<u32>,
    /// 1 where `chi_j(g1 g2)` is trivial but `chi_j(g1)` is not.
    pub normal: Vec<u32>,
    pub m: Vec<u32>,
}

pub fn excess_exponents(action: &LinearAction, g1: Elem, g2: Elem) -> Result<ExcessData> {
    let group = action.group();
    let product = group.mul(g1, g2);
    let obstruction: Vec<u32> = coordinate_obstructions(action, g1, g2)?
        .into_iter()
        .map(|c| c.h1)
        .collect();
    let e1 = action.eigen_exponents(g1)?;
    let e2 = action.eigen_exponents(g2)?;
    let e12 = action.eigen_exponents(product)?;
    let normal: Vec<u32> = e1
        .iter()
        .zip(&e12)
        .map(|(a, p)| u32::from(p.is_trivial() && !a.is_trivial()))
        .collect();
    let m: Vec<u32> = obstruction.iter().zip(&normal).map(|(h, n)| h + n).collect();
    for j in 0..m.len() {
        let by_age = e1[j].fraction() + e2[j].fraction() - e12[j].fraction();
        assert_eq!(
            by_age,
            BigRational::from_integer(m[j].into()),
            "excess exponent disagrees with ages on coordinate {j}"
        );
    }
    Ok(ExcessData {
        product,
        obstruction,
        normal,
        m,
    })
}

/// `1_{g1} ⌣ 1_{g2}` as (target sector, coefficient).
fn abelian_basis_product(orb: &Orbifold, i: usize, j: usize) -> Result<(usize, EquivariantClass)> {
    let chars = orb
        .action
        .characters()
        .ok_or_else(|| Error::UnsupportedProduct("action is not diagonal".into()))?;
    let (g1, g2) = (orb.sectors()[i].representative, orb.sectors()[j].representative);
    let excess = excess_exponents(&orb.action, g1, g2)?;
    let ring = &orb.ring;
    let mut coeff = ring.one();
    for (row, &m) in chars.iter().zip(&excess.m) {
        if m > 0 {
            let chi: Vec<i64> = row.iter().map(|&c| c as i64).collect();
            coeff = ring.mul(&coeff, &ring.pow(&ring.c1(&chi), m));
        }
    }
    let target = orb
        .inertia
        .sector_of_class(orb.group().class_index(excess.product));
    Ok((target, coeff))
}

pub fn abelian_quotient_product(
    orb: &Orbifold,
    x: &StringyClass,
    y: &StringyClass,
) -> Result<StringyClass> {
    if !orb.action.is_abelian_diagonal() {
        return Err(Error::UnsupportedProduct(
            "the abelian product needs a diagonal action of a group given by invariant factors"
                .into(),
        ));
    }
    orb.check_class(x)?;
    orb.check_class(y)?;
    let ring = &orb.ring;
    let mut out = StringyClass::zero();
    for (&i, cx) in &x.terms {
        for (&j, cy) in &y.terms {
            let (k, tau) = abelian_basis_product(orb, i, j)?;
            out.add_term(ring, k, &ring.mul(&ring.mul(cx, cy), &tau));
        }
    }
    Ok(out)
}

pub fn grade(orb: &Orbifold, x: &StringyClass) -> Grade {
    let mut degrees = BTreeSet::new();
    for (&s, c) in &x.terms {
        for d in c.degree_parts().into_keys() {
            degrees.insert(&orb.sectors()[s].age + BigRational::from_integer(d.into()));
        }
    }
    let mut it = degrees.into_iter();
    match (it.next(), it.next()) {
        (None, _) => Grade::Zero,
        (Some(d), None) => Grade::Homogeneous(d),
        _ => Grade::Inhomogeneous,
    }
}

/// Number of sectors of each age.
pub fn poincare_polynomial(action: &LinearAction) -> Result<BTreeMap<BigRational, u64>> {
    let inertia = inertia_components(action)?;
    let mut out = BTreeMap::new();
    for s in inertia.sectors() {
        *out.entry(s.age.clone()).or_default() += 1;
    }
    Ok(out)
}

/// All products of basis classes `1_i ⌣ 1_j`, row-major.
#[derive(Clone, Debug)]
pub struct RingTable {
    orbifold: Orbifold,
    products: Vec<StringyClass>,
    hash: String,
}

pub fn ring_table(orb: &Orbifold, max_basis: usize) -> Result<RingTable> {
    let n = orb.inertia.len();
    if n > max_basis {
        return Err(Error::SizeBound {
            what: "ring table basis",
            size: n,
            bound: max_basis,
        });
    }
    if !orb.products_supported() {
        return Err(Error::UnsupportedProduct(
            "positive-dimensional actions of non-abelian groups".into(),
        ));
    }
    let products: Vec<StringyClass> = (0..n * n)
        .into_par_iter()
        .map(|p| orb.product(&orb.basis_class(p / n), &orb.basis_class(p % n)))
        .collect::<Result<_>>()?;
    Ok(RingTable {
        hash: orb.content_hash(),
        orbifold: orb.clone(),
        products,
    })
}

impl RingTable {
    pub fn orbifold(&self) -> &Orbifold {
        &self.orbifold
    }

    pub fn basis(&self) -> &[Sector] {
        self.orbifold.sectors()
    }

    pub fn len(&self) -> usize {
        self.basis().len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis().is_empty()
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &StringyClass {
        &self.products[i * self.len() + j]
    }

    /// Coefficient of `1_k` in `1_i ⌣ 1_j`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> EquivariantClass {
        self.basis_product(i, j)
            .coefficient(k)
            .cloned()
            .unwrap_or_default()
    }

    /// Bilinear extension of the table.
    pub fn multiply(&self, x: &StringyClass, y: &StringyClass) -> StringyClass {
        let ring = self.orbifold.ring();
        // collect raw terms per sector and reduce once at the end
        let mut raw: BTreeMap<usize, Vec<(Vec<u32>, BigInt)>> = BTreeMap::new();
        for (&i, cx) in &x.terms {
            for (&j, cy) in &y.terms {
                let c = ring.mul(cx, cy);
                if c.is_zero() {
                    continue;
                }
                for (&k, t) in &self.basis_product(i, j).terms {
                    let acc = raw.entry(k).or_default();
                    for (ma, ca) in c.terms() {
                        for (mb, cb) in t.terms() {
                            acc.push((ma.iter().zip(mb).map(|(a, b)| a + b).collect(), ca * cb));
                        }
                    }
                }
            }
        }
        let mut out = StringyClass::zero();
        for (k, terms) in raw {
            out.add_term(ring, k, &ring.class_from_terms(terms));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let ring = self.orbifold.ring();
        let labels: Vec<&str> = self.basis().iter().map(|s| s.label.as_str()).collect();
        let basis: Vec<Value> = self.basis().iter().map(sector_json).collect();
        let mut products = Vec::with_capacity(self.products.len());
        for i in 0..self.len() {
            for j in 0..self.len() {
                let mut result = Map::new();
                for (&k, c) in &self.basis_product(i, j).terms {
                    result.insert(labels[k].to_string(), ring.to_json(c));
                }
                products.push(json!({
                    "left": labels[i],
                    "right": labels[j],
                    "result": result,
                }));
            }
        }
        json!({
            "group": self.orbifold.group().spec(),
            "action": self.orbifold.action().spec(),
            "coefficient_ring": { "invariant_factors": ring.factors() },
            "hash": self.hash,
            "basis": basis,
            "products": products,
        })
    }

    /// Reads a table document produced by [`RingTable::to_json`], keeping the
    /// stored products rather than recomputing them.
    pub fn from_json(doc: &Value, max_order: usize) -> Result<Self> {
        let bad = |m: &str| Error::InvalidTableDocument(m.to_string());
        let group: GroupSpec = serde_json::from_value(doc.get("group").cloned().ok_or_else(|| bad("missing `group`"))?)
            .map_err(|e| bad(&format!("group: {e}")))?;
        let action: ActionSpec = serde_json::from_value(doc.get("action").cloned().ok_or_else(|| bad("missing `action`"))?)
            .map_err(|e| bad(&format!("action: {e}")))?;
        let orb = Orbifold::from_specs(&group, &action, max_order)?;
        let hash = doc
            .get("hash")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing `hash`"))?;
        if hash != orb.content_hash() {
            return Err(bad("hash does not match group and action"));
        }
        let basis = doc
            .get("basis")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `basis`"))?;
        let labels: Vec<&str> = basis
            .iter()
            .map(|b| b.get("label").and_then(Value::as_str).unwrap_or(""))
            .collect();
        let expected: Vec<&str> = orb.sectors().iter().map(|s| s.label.as_str()).collect();
        if labels != expected {
            return Err(bad("basis order differs from the computed sector order"));
        }
        let n = labels.len();
        let mut products = vec![None; n * n];
        let entries = doc
            .get("products")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `products`"))?;
        let ring = orb.ring().clone();
        let position = |v: Option<&Value>| -> Result<usize> {
            let l = v.and_then(Value::as_str).ok_or_else(|| bad("product entry without label"))?;
            orb.inertia()
                .position_of_label(l)
                .ok_or_else(|| bad(&format!("unknown sector `{l}`")))
        };
        for e in entries {
            let (i, j) = (position(e.get("left"))?, position(e.get("right"))?);
            let result = e
                .get("result")
                .and_then(Value::as_object)
                .ok_or_else(|| bad("product entry without `result`"))?;
            let mut x = StringyClass::zero();
            for (label, c) in result {
                let k = position(Some(&Value::String(label.clone())))?;
                x.add_term(&ring, k, &ring.from_json(c)?);
            }
            if products[i * n + j].replace(x).is_some() {
                return Err(bad("duplicate product entry"));
            }
        }
        let products = products
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("table is missing products"))?;
        Ok(RingTable {
            hash: hash.to_string(),
            orbifold: orb,
            products,
        })
    }
}

pub fn sector_json(s: &Sector) -> Value {
    json!({
        "label": s.label,
        "age": s.age.to_string(),
        "index_r": s.index_r,
        "fixed_dim": s.fixed_dim,
        "aut_order_x1": s.aut_order_x1,
        "aut_order_x1bar": s.aut_order_x1bar,
        "class_size": s.class_size,
        "untwisted": s.is_untwisted,
    })
}

/// Outcome of one family of checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub checked: usize,
    pub counterexample: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    fn new(name: &'static str) -> Self {
        CheckReport {
            name,
            checked: 0,
            counterexample: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativityReport {
    pub basis_triples: usize,
    pub sampled_triples: usize,
    pub counterexample: Option<String>,
}

impl AssociativityReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn describe(tbl: &RingTable, x: &StringyClass) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let ring = tbl.orbifold.ring();
    x.terms
        .iter()
        .map(|(&s, c)| format!("({})*1_{}", ring.display(c), tbl.basis()[s].label))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Random class over the table's coefficient ring: each sector present with
/// probability 1/2, coefficients with up to three small terms of degree <= 2
/// in each generator.
pub fn random_class(tbl: &RingTable, rng: &mut impl Rng) -> StringyClass {
    let ring = tbl.orbifold.ring();
    let m = ring.generator_count();
    let mut x = StringyClass::zero();
    for s in 0..tbl.len() {
        if rng.gen_bool(0.5) {
            let terms: Vec<(Vec<u32>, BigInt)> = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let e = (0..m).map(|_| rng.gen_range(0..=2)).collect();
                    (e, BigInt::from(rng.gen_range(-5i64..=5)))
                })
                .collect();
            x.add_term(ring, s, &ring.class_from_terms(terms));
        }
    }
    x
}

/// `(x⌣y)⌣z = x⌣(y⌣z)` on every basis triple, then on `samples` random triples.
pub fn verify_associativity(tbl: &RingTable, samples: usize, seed: u64) -> AssociativityReport {
    let n = tbl.len();
    let ring = tbl.orbifold.ring();
    let basis_failure = (0..n * n * n).into_par_iter().find_first(|&t| {
        let (i, j, k) = (t / (n * n), (t / n) % n, t % n);
        let lhs = tbl.multiply(tbl.basis_product(i, j), &tbl.orbifold.basis_class(k));
        let rhs = tbl.multiply(&tbl.orbifold.basis_class(i), tbl.basis_product(j, k));
        lhs != rhs
    });
    if let Some(t) = basis_failure {
        let (i, j, k) = (t / (n * n), (t / n) % n, t % n);
        let lhs = tbl.multiply(tbl.basis_product(i, j), &tbl.orbifold.basis_class(k));
        let rhs = tbl.multiply(&tbl.orbifold.basis_class(i), tbl.basis_product(j, k));
        return AssociativityReport {
            basis_triples: t + 1,
            sampled_triples: 0,
            counterexample: Some(format!(
                "(1_{a} 1_{b}) 1_{c} = {} but 1_{a} (1_{b} 1_{c}) = {}",
                describe(tbl, &lhs),
                describe(tbl, &rhs),
                a = tbl.basis()[i].label,
                b = tbl.basis()[j].label,
                c = tbl.basis()[k].label,
            )),
        };
    }
    // draw sequentially so the sample set depends only on the seed
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<[StringyClass; 3]> = (0..samples)
        .map(|_| std::array::from_fn(|_| random_class(tbl, &mut rng)))
        .collect();
    let failure = triples.par_iter().position_first(|[x, y, z]| {
        tbl.multiply(&tbl.multiply(x, y), z) != tbl.multiply(x, &tbl.multiply(y, z))
    });
    if let Some(s) = failure {
        let [x, y, z] = &triples[s];
        let lhs = tbl.multiply(&tbl.multiply(x, y), z);
        let rhs = tbl.multiply(x, &tbl.multiply(y, z));
        return AssociativityReport {
            basis_triples: n * n * n,
            sampled_triples: s + 1,
            counterexample: Some(format!(
                "sampled triple x = {}, y = {}, z = {}: difference {}",
                describe(tbl, x),
                describe(tbl, y),
                describe(tbl, z),
                describe(tbl, &lhs.sub(ring, &rhs)),
            )),
        };
    }
    AssociativityReport {
        basis_triples: n * n * n,
        sampled_triples: samples,
        counterexample: None,
    }
}

/// The untwisted class is a two-sided unit.
pub fn verify_identity(tbl: &RingTable) -> CheckReport {
    let mut report = CheckReport::new("identity");
    let e = tbl.orbifold.inertia().untwisted();
    for i in 0..tbl.len() {
        report.checked += 1;
        let b = tbl.orbifold.basis_class(i);
        if *tbl.basis_product(e, i) != b || *tbl.basis_product(i, e) != b {
            report.counterexample = Some(format!("1_e is not a unit on 1_{}", tbl.basis()[i].label));
            break;
        }
    }
    report
}

pub fn verify_commutativity(tbl: &RingTable) -> CheckReport {
    let mut report = CheckReport::new("commutativity");
    'outer: for i in 0..tbl.len() {
        for j in i..tbl.len() {
            report.checked += 1;
            if tbl.basis_product(i, j) != tbl.basis_product(j, i) {
                report.counterexample = Some(format!(
                    "1_{a} 1_{b} != 1_{b} 1_{a}",
                    a = tbl.basis()[i].label,
                    b = tbl.basis()[j].label
                ));
                break 'outer;
            }
        }
    }
    report
}

/// `grade(1_i ⌣ 1_j) = grade(1_i) + grade(1_j)` whenever the product is
/// nonzero; for diagonal abelian actions also the exact age identity
/// `a(g1) + a(g2) = a(g1 g2) + sum_j m_j` on every pair.
pub fn verify_grading(tbl: &RingTable) -> CheckReport {
    let mut report = CheckReport::new("grading");
    let orb = &tbl.orbifold;
    for i in 0..tbl.len() {
        for j in 0..tbl.len() {
            report.checked += 1;
            let (si, sj) = (&tbl.basis()[i], &tbl.basis()[j]);
            let expected = &si.age + &sj.age;
            let prod = tbl.basis_product(i, j);
            let graded = match grade(orb, prod) {
                Grade::Zero => true,
                Grade::Homogeneous(d) => d == expected,
                Grade::Inhomogeneous => false,
            };
            let identity = if orb.action().is_abelian_diagonal() && orb.action().dim() > 0 {
                match excess_exponents(orb.action(), si.representative, sj.representative) {
                    Ok(ex) => {
                        let age12 = orb
                            .action()
                            .age(ex.product)
                            .map(|a| a.total)
                            .unwrap_or_else(|_| BigRational::zero());
                        let msum: u32 = ex.m.iter().sum();
                        expected == age12 + BigRational::from_integer(msum.into())
                    }
                    Err(_) => false,
                }
            } else {
                true
            };
            if !(graded && identity) {
                report.counterexample = Some(format!(
                    "grade of 1_{} 1_{} is not {expected}",
                    si.label, sj.label
                ));
                return report;
            }
        }
    }
    report
}
