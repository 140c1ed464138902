//! Finite groups with dense element handles.
//!
//! Every group is stored with a canonical element ordering so that all
//! downstream labels (sectors, table rows, moduli components) are
//! deterministic:
//!
//! * abelian groups `Z/n1 x ... x Z/nm`: lexicographic on exponent vectors,
//! * permutation groups: lexicographic on the image list `[p(1), ..., p(N)]`,
//! * explicit tables: the order of the table rows.
//!
//! Permutations compose right to left, `(ab)(x) = a(b(x))`, and points are
//! numbered from 1 in cycle notation.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ORDER: usize = 100_000;

/// Groups up to this order get a precomputed multiplication table.
const DENSE_LIMIT: usize = 1024;

/// Dense handle into the element table of one [`FiniteGroup`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u32);

impl Elem {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    fn new(i: usize) -> Self {
        Elem(i as u32)
    }
}

/// JSON group description. Exactly one of the three shapes:
/// `{"abelian": [n1, ...]}`, `{"permutations": [[cycle, ...], ...], "points": N}`
/// or `{"table": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Abelian(AbelianSpec),
    Permutations(PermutationSpec),
    Table(TableSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianSpec {
    pub abelian: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermutationSpec {
    pub permutations: Vec<Vec<Vec<u32>>>,
    pub points: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub table: Vec<Vec<u32>>,
}

impl GroupSpec {
    pub fn abelian(factors: &[u64]) -> Self {
        GroupSpec::Abelian(AbelianSpec {
            abelian: factors.to_vec(),
        })
    }

    pub fn permutations(points: u32, generators: Vec<Vec<Vec<u32>>>) -> Self {
        GroupSpec::Permutations(PermutationSpec {
            permutations: generators,
            points,
        })
    }

    pub fn table(table: Vec<Vec<u32>>) -> Self {
        GroupSpec::Table(TableSpec { table })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    /// Least member under the canonical element order.
    pub representative: Elem,
    /// Sorted.
    pub members: Vec<Elem>,
    pub centralizer_order: u64,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Abelian {
        factors: Vec<u64>,
    },
    Permutation {
        images: Vec<Vec<u32>>,
        lookup: HashMap<Vec<u32>, u32>,
    },
    Table {
        table: Vec<u32>,
    },
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    spec: GroupSpec,
    repr: Repr,
    order: usize,
    dense: Option<Vec<u32>>,
    identity: Elem,
    inverses: Vec<u32>,
    orders: Vec<u64>,
    generators: Vec<Elem>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<u32>,
}

pub fn build_group(spec: &GroupSpec, max_order: usize) -> Result<FiniteGroup> {
    FiniteGroup::build(spec, max_order)
}

impl FiniteGroup {
    pub fn build(spec: &GroupSpec, max_order: usize) -> Result<Self> {
        match spec {
            GroupSpec::Abelian(a) => Self::from_invariant_factors(&a.abelian, max_order),
            GroupSpec::Permutations(p) => {
                Self::from_permutations(p.points, &p.permutations, max_order)
            }
            GroupSpec::Table(t) => Self::from_table(&t.table, max_order),
        }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::from_invariant_factors(&[n], DEFAULT_MAX_ORDER)
    }

    pub fn symmetric(n: u32) -> Result<Self> {
        let gens = match n {
            0 | 1 => vec![],
            2 => vec![vec![vec![1, 2]]],
            _ => vec![vec![vec![1, 2]], vec![(1..=n).collect()]],
        };
        Self::from_permutations(n.max(1), &gens, DEFAULT_MAX_ORDER)
    }

    fn from_invariant_factors(factors: &[u64], max_order: usize) -> Result<Self> {
        if let Some(pos) = factors.iter().position(|&n| n == 0) {
            return Err(Error::ZeroInvariantFactor(pos));
        }
        let mut order: usize = 1;
        for &n in factors {
            order = usize::try_from(n)
                .ok()
                .and_then(|n| order.checked_mul(n))
                .filter(|&o| o <= max_order)
                .ok_or(Error::GroupTooLarge {
                    order: usize::MAX,
                    bound: max_order,
                })?;
        }
        let generators = (0..factors.len())
            .filter(|&i| factors[i] > 1)
            .map(|i| {
                let mut e = vec![0; factors.len()];
                e[i] = 1;
                Elem::new(encode_mixed_radix(factors, &e))
            })
            .collect();
        let repr = Repr::Abelian {
            factors: factors.to_vec(),
        };
        Ok(Self::finish(GroupSpec::abelian(factors), repr, order, Elem(0), generators))
    }

    fn from_permutations(points: u32, gens: &[Vec<Vec<u32>>], max_order: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::InvalidPermutation("points must be at least 1".into()));
        }
        let n = points as usize;
        let mut gen_images = Vec::with_capacity(gens.len());
        for cycles in gens {
            let mut img: Vec<u32> = (0..points).collect();
            let mut seen = vec![false; n];
            for cycle in cycles {
                for &p in cycle {
                    if p == 0 || p > points {
                        return Err(Error::InvalidPermutation(format!(
                            "point {p} outside 1..={points}"
                        )));
                    }
                    if std::mem::replace(&mut seen[p as usize - 1], true) {
                        return Err(Error::InvalidPermutation(format!(
                            "point {p} appears twice in one generator"
                        )));
                    }
                }
                for (i, &p) in cycle.iter().enumerate() {
                    let next = cycle[(i + 1) % cycle.len()];
                    img[p as usize - 1] = next - 1;
                }
            }
            gen_images.push(img);
        }

        let identity: Vec<u32> = (0..points).collect();
        let mut found: HashMap<Vec<u32>, ()> = HashMap::new();
        let mut elements = vec![identity.clone()];
        found.insert(identity, ());
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gen_images {
                let prod = compose(g, &elements[i]);
                if !found.contains_key(&prod) {
                    if elements.len() + 1 > max_order {
                        return Err(Error::GroupTooLarge {
                            order: elements.len() + 1,
                            bound: max_order,
                        });
                    }
                    found.insert(prod.clone(), ());
                    elements.push(prod);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        elements.sort();
        let lookup: HashMap<Vec<u32>, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let generators = gen_images.iter().map(|g| Elem(lookup[g])).collect();
        let order = elements.len();
        let repr = Repr::Permutation {
            images: elements,
            lookup,
        };
        let spec = GroupSpec::permutations(points, gens.to_vec());
        Ok(Self::finish(spec, repr, order, Elem(0), generators))
    }

    fn from_table(rows: &[Vec<u32>], max_order: usize) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if n > max_order {
            return Err(Error::GroupTooLarge {
                order: n,
                bound: max_order,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x as usize >= n) {
                return Err(Error::InvalidTable(format!("entry {bad} in row {i} out of range")));
            }
            table.extend_from_slice(row);
        }
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidTable("no two-sided identity".into()))?;
        for x in 0..n {
            if !(0..n).any(|y| at(x, y) == identity && at(y, x) == identity) {
                return Err(Error::InvalidTable(format!("element {x} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NonAssociative { a, b, c });
                    }
                }
            }
        }

        // Greedy generating set: add the first element outside the current subgroup.
        let mut generators: Vec<Elem> = Vec::new();
        let mut inside = vec![false; n];
        inside[identity] = true;
        let mut members = vec![identity];
        for x in 0..n {
            if inside[x] {
                continue;
            }
            generators.push(Elem::new(x));
            let mut queue: VecDeque<usize> = members.iter().copied().collect();
            while let Some(m) = queue.pop_front() {
                for g in &generators {
                    let p = at(g.index(), m);
                    if !inside[p] {
                        inside[p] = true;
                        members.push(p);
                        queue.push_back(p);
                    }
                }
            }
        }

        let repr = Repr::Table { table };
        Ok(Self::finish(
            GroupSpec::table(rows.to_vec()),
            repr,
            n,
            Elem::new(identity),
            generators,
        ))
    }

    fn finish(spec: GroupSpec, repr: Repr, order: usize, identity: Elem, generators: Vec<Elem>) -> Self {
        let mut group = FiniteGroup {
            spec,
            repr,
            order,
            dense: None,
            identity,
            inverses: Vec::new(),
            orders: Vec::new(),
            generators,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        if order <= DENSE_LIMIT {
            let mut dense = Vec::with_capacity(order * order);
            for a in 0..order {
                for b in 0..order {
                    dense.push(group.mul_slow(Elem::new(a), Elem::new(b)).0);
                }
            }
            group.dense = Some(dense);
        }
        group.inverses = (0..order).map(|g| group.inverse_slow(Elem::new(g)).0).collect();
        group.orders = (0..order)
            .map(|g| {
                let g = Elem::new(g);
                let mut r = 1;
                let mut x = g;
                while x != identity {
                    x = group.mul(x, g);
                    r += 1;
                }
                r
            })
            .collect();
        group.compute_classes();
        group
    }

    fn compute_classes(&mut self) {
        let n = self.order;
        let mut class_of = vec![u32::MAX; n];
        let mut classes = Vec::new();
        if matches!(self.repr, Repr::Abelian { .. }) {
            for g in 0..n {
                classes.push(ConjugacyClass {
                    representative: Elem::new(g),
                    members: vec![Elem::new(g)],
                    centralizer_order: n as u64,
                });
            }
        } else {
            let mut seen = vec![false; n];
            for g in 0..n {
                if seen[g] {
                    continue;
                }
                seen[g] = true;
                let mut members = vec![Elem::new(g)];
                let mut queue = VecDeque::from([Elem::new(g)]);
                while let Some(x) = queue.pop_front() {
                    for &h in &self.generators {
                        let y = self.conjugate(h, x);
                        if !seen[y.index()] {
                            seen[y.index()] = true;
                            members.push(y);
                            queue.push_back(y);
                        }
                    }
                }
                members.sort();
                classes.push(ConjugacyClass {
                    representative: members[0],
                    centralizer_order: (n / members.len()) as u64,
                    members,
                });
            }
        }
        classes.sort_by_key(|c| (c.members.len(), c.representative));
        for (ci, c) in classes.iter().enumerate() {
            for m in &c.members {
                class_of[m.index()] = ci as u32;
            }
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        match &self.repr {
            Repr::Abelian { factors } => {
                let ea = decode_mixed_radix(factors, a.index());
                let eb = decode_mixed_radix(factors, b.index());
                let sum: Vec<u64> = ea
                    .iter()
                    .zip(&eb)
                    .zip(factors)
                    .map(|((x, y), n)| (x + y) % n)
                    .collect();
                Elem::new(encode_mixed_radix(factors, &sum))
            }
            Repr::Permutation { images, lookup } => {
                Elem(lookup[&compose(&images[a.index()], &images[b.index()])])
            }
            Repr::Table { table } => Elem(table[a.index() * self.order + b.index()]),
        }
    }

    fn inverse_slow(&self, g: Elem) -> Elem {
        match &self.repr {
            Repr::Abelian { factors } => {
                let e = decode_mixed_radix(factors, g.index());
                let inv: Vec<u64> = e.iter().zip(factors).map(|(x, n)| (n - x) % n).collect();
                Elem::new(encode_mixed_radix(factors, &inv))
            }
            Repr::Permutation { images, lookup } => {
                let img = &images[g.index()];
                let mut inv = vec![0u32; img.len()];
                for (x, &y) in img.iter().enumerate() {
                    inv[y as usize] = x as u32;
                }
                Elem(lookup[&inv])
            }
            Repr::Table { .. } => (0..self.order)
                .map(Elem::new)
                .find(|&h| self.mul_slow(g, h) == self.identity)
                .expect("table validated to have inverses"),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = Elem> + Clone {
        (0..self.order).map(Elem::new)
    }

    pub fn element(&self, index: usize) -> Option<Elem> {
        (index < self.order).then(|| Elem::new(index))
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.dense {
            Some(t) => Elem(t[a.index() * self.order + b.index()]),
            None => self.mul_slow(a, b),
        }
    }

    pub fn inverse(&self, g: Elem) -> Elem {
        Elem(self.inverses[g.index()])
    }

    pub fn pow(&self, g: Elem, k: u64) -> Elem {
        let k = k % self.element_order(g);
        (0..k).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    /// `h g h^-1`
    pub fn conjugate(&self, h: Elem, g: Elem) -> Elem {
        self.mul(self.mul(h, g), self.inverse(h))
    }

    pub fn commute(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn element_order(&self, g: Elem) -> u64 {
        self.orders[g.index()]
    }

    /// Counts `#{h : hg = gh}` directly.
    pub fn centralizer_order(&self, g: Elem) -> u64 {
        self.elements().filter(|&h| self.commute(h, g)).count() as u64
    }

    /// Order of `Z(a) ∩ Z(b)`.
    pub fn joint_centralizer_order(&self, a: Elem, b: Elem) -> u64 {
        self.elements()
            .filter(|&h| self.commute(h, a) && self.commute(h, b))
            .count() as u64
    }

    /// Classes sorted by (size, representative).
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_index(&self, g: Elem) -> usize {
        self.class_of[g.index()] as usize
    }

    pub fn class_of(&self, g: Elem) -> &ConjugacyClass {
        &self.classes[self.class_index(g)]
    }

    pub fn is_commutative(&self) -> bool {
        self.classes.len() == self.order
    }

    /// Invariant factors when the group was built from an abelian spec.
    pub fn invariant_factors(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Abelian { factors } => Some(factors),
            _ => None,
        }
    }

    /// Exponent vector of `g` for groups built from invariant factors.
    pub fn exponents(&self, g: Elem) -> Option<Vec<u64>> {
        match &self.repr {
            Repr::Abelian { factors } => Some(decode_mixed_radix(factors, g.index())),
            _ => None,
        }
    }

    pub fn from_exponents(&self, exps: &[u64]) -> Option<Elem> {
        match &self.repr {
            Repr::Abelian { factors } if exps.len() == factors.len() => {
                let reduced: Vec<u64> = exps.iter().zip(factors).map(|(e, n)| e % n).collect();
                Some(Elem::new(encode_mixed_radix(factors, &reduced)))
            }
            _ => None,
        }
    }

    /// Canonical printable name of an element.
    ///
    /// Abelian elements print as exponent vectors `[1,0]`, permutations in
    /// 1-based cycle notation `(1 2)(3 4)` with `()` for the identity, and
    /// table elements as `#i`.
    pub fn label(&self, g: Elem) -> String {
        match &self.repr {
            Repr::Abelian { factors } => {
                let e = decode_mixed_radix(factors, g.index());
                let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                format!("[{}]", parts.join(","))
            }
            Repr::Permutation { images, .. } => cycle_notation(&images[g.index()]),
            Repr::Table { .. } => format!("#{}", g.index()),
        }
    }

    /// Inverse of [`FiniteGroup::label`], tolerant of extra whitespace.
    pub fn parse_label(&self, label: &str) -> Result<Elem> {
        let normalized = normalize_label(label);
        self.elements()
            .find(|&g| normalize_label(&self.label(g)) == normalized)
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.spec {
            GroupSpec::Abelian(a) if a.abelian.is_empty() => write!(f, "trivial group"),
            GroupSpec::Abelian(a) => {
                let parts: Vec<String> = a.abelian.iter().map(|n| format!("Z/{n}")).collect();
                write!(f, "{}", parts.join(" x "))
            }
            GroupSpec::Permutations(p) => {
                write!(f, "permutation group of order {} on {} points", self.order, p.points)
            }
            GroupSpec::Table(_) => write!(f, "group of order {} given by a table", self.order),
        }
    }
}

fn normalize_label(s: &str) -> String {
    let s = s.replace(['[', ']', '(', ')', ','], " $0 ");
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn cycle_notation(img: &[u32]) -> String {
    let mut seen = vec![false; img.len()];
    let mut out = String::new();
    for start in 0..img.len() {
        if seen[start] || img[start] as usize == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut x = img[start] as usize;
        while x != start {
            seen[x] = true;
            cycle.push(x + 1);
            x = img[x] as usize;
        }
        let parts: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
        out.push('(');
        out.push_str(&parts.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

fn encode_mixed_radix(factors: &[u64], exps: &[u64]) -> usize {
    factors
        .iter()
        .zip(exps)
        .fold(0usize, |acc, (&n, &e)| acc * n as usize + e as usize)
}

fn decode_mixed_radix(factors: &[u64], mut index: usize) -> Vec<u64> {
    let mut e = vec![0; factors.len()];
    for i in (0..factors.len()).rev() {
        let n = factors[i] as usize;
        e[i] = (index % n) as u64;
        index /= n;
    }
    e
}
