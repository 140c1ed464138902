//! Linear actions on `C^n` given by exact eigenvalue exponents.
//!
//! An element `g` of order `r` acts on coordinate `j` by `zeta_r^{k_j}` with
//! `0 <= k_j < r`. Its age is `sum_j k_j / r`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};

/// The eigenvalue `zeta_r^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Eigen {
    pub k: u64,
    pub r: u64,
}

impl Eigen {
    pub fn new(k: u64, r: u64) -> Self {
        Eigen { k, r }
    }

    pub fn is_trivial(self) -> bool {
        self.k == 0
    }

    /// `k / r` as an exact rational in `[0, 1)`.
    pub fn fraction(self) -> BigRational {
        BigRational::new(BigInt::from(self.k), BigInt::from(self.r))
    }
}

/// JSON action description: `{"dim": n, "characters": [[...], ...]}` for a
/// diagonal action of an abelian group (one row per coordinate, one column
/// per invariant factor), or `{"dim": n, "class_eigen": {label: [[k, r], ...]}}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub characters: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_eigen: Option<BTreeMap<String, Vec<[u64; 2]>>>,
}

impl ActionSpec {
    pub fn point() -> Self {
        ActionSpec::default()
    }

    pub fn diagonal(characters: Vec<Vec<i64>>) -> Self {
        ActionSpec {
            dim: characters.len(),
            characters: Some(characters),
            class_eigen: None,
        }
    }
}

#[derive(Clone, Debug)]
enum ActionData {
    Point,
    /// Rows reduced into `[0, n_i)`.
    Characters(Vec<Vec<u64>>),
    /// Indexed by conjugacy class.
    ClassEigen(Vec<Option<Vec<Eigen>>>),
}

#[derive(Clone, Debug)]
pub struct LinearAction {
    group: FiniteGroup,
    spec: ActionSpec,
    dim: usize,
    data: ActionData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgeVector {
    pub per_coordinate: Vec<BigRational>,
    pub total: BigRational,
}

impl LinearAction {
    pub fn point(group: FiniteGroup) -> Self {
        LinearAction {
            group,
            spec: ActionSpec::point(),
            dim: 0,
            data: ActionData::Point,
        }
    }

    /// Diagonal action with `characters[j][i]` the exponent of coordinate `j`
    /// on the `i`-th cyclic generator.
    pub fn diagonal(group: FiniteGroup, characters: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(group, &ActionSpec::diagonal(characters))
    }

    pub fn new(group: FiniteGroup, spec: &ActionSpec) -> Result<Self> {
        let data = match (&spec.characters, &spec.class_eigen) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidAction(
                    "give either `characters` or `class_eigen`, not both".into(),
                ))
            }
            (None, None) if spec.dim == 0 => ActionData::Point,
            (None, None) => {
                return Err(Error::InvalidAction(format!(
                    "dim {} needs `characters` or `class_eigen`",
                    spec.dim
                )))
            }
            (Some(chars), None) => Self::check_characters(&group, spec.dim, chars)?,
            (None, Some(eigen)) => Self::check_class_eigen(&group, spec.dim, eigen)?,
        };
        Ok(LinearAction {
            group,
            spec: spec.clone(),
            dim: spec.dim,
            data,
        })
    }

    fn check_characters(group: &FiniteGroup, dim: usize, chars: &[Vec<i64>]) -> Result<ActionData> {
        let factors = group.invariant_factors().ok_or_else(|| {
            Error::InvalidAction("`characters` needs a group given by invariant factors".into())
        })?;
        if chars.len() != dim {
            return Err(Error::InvalidAction(format!(
                "{} character rows for dim {dim}",
                chars.len()
            )));
        }
        let mut rows = Vec::with_capacity(dim);
        for (j, row) in chars.iter().enumerate() {
            if row.len() != factors.len() {
                return Err(Error::InvalidAction(format!(
                    "character row {j} has {} entries, group has {} factors",
                    row.len(),
                    factors.len()
                )));
            }
            rows.push(
                row.iter()
                    .zip(factors)
                    .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                    .collect(),
            );
        }
        Ok(ActionData::Characters(rows))
    }

    fn check_class_eigen(
        group: &FiniteGroup,
        dim: usize,
        given: &BTreeMap<String, Vec<[u64; 2]>>,
    ) -> Result<ActionData> {
        let mut per_class: Vec<Option<Vec<Eigen>>> = vec![None; group.conjugacy_classes().len()];
        per_class[group.class_index(group.identity())] = Some(vec![Eigen::new(0, 1); dim]);
        for (label, pairs) in given {
            let g = group.parse_label(label)?;
            let order = group.element_order(g);
            if pairs.len() != dim {
                return Err(Error::InvalidAction(format!(
                    "class `{label}` lists {} eigenvalues for dim {dim}",
                    pairs.len()
                )));
            }
            let mut eigen = Vec::with_capacity(dim);
            for &[k, r] in pairs {
                if r == 0 || k >= r || !order.is_multiple_of(r) {
                    return Err(Error::InvalidAction(format!(
                        "eigenvalue [{k},{r}] for `{label}` (element order {order})"
                    )));
                }
                eigen.push(Eigen::new(k * (order / r), order));
            }
            eigen.sort();
            let slot = &mut per_class[group.class_index(g)];
            if slot.as_ref().is_some_and(|old| *old != eigen) {
                return Err(Error::InvalidAction(format!(
                    "conflicting eigen data for the class of `{label}`"
                )));
            }
            *slot = Some(eigen);
        }
        Ok(ActionData::ClassEigen(per_class))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn spec(&self) -> &ActionSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True for diagonal actions of a group given by invariant factors,
    /// including `dim = 0`.
    pub fn is_abelian_diagonal(&self) -> bool {
        match self.data {
            ActionData::Characters(_) => true,
            ActionData::Point => self.group.invariant_factors().is_some(),
            ActionData::ClassEigen(_) => false,
        }
    }

    /// Reduced character rows of a diagonal action.
    pub fn characters(&self) -> Option<&[Vec<u64>]> {
        match &self.data {
            ActionData::Characters(rows) => Some(rows),
            ActionData::Point if self.group.invariant_factors().is_some() => Some(&[]),
            _ => None,
        }
    }

    pub fn eigen_exponents(&self, g: Elem) -> Result<Vec<Eigen>> {
        let r = self.group.element_order(g);
        match &self.data {
            ActionData::Point => Ok(Vec::new()),
            ActionData::Characters(rows) => {
                let factors = self.group.invariant_factors().expect("checked at construction");
                let exps = self.group.exponents(g).expect("abelian group");
                Ok(rows
                    .iter()
                    .map(|row| {
                        // sum_i chi[i] * e_i / n_i, measured in units of 1/r
                        let k = row
                            .iter()
                            .zip(&exps)
                            .zip(factors)
                            .map(|((&c, &e), &n)| {
                                let scale = r / (n / num_integer::gcd(e, n));
                                let e_red = e / num_integer::gcd(e, n);
                                (c as u128 * e_red as u128 * scale as u128) % r as u128
                            })
                            .sum::<u128>()
                            % r as u128;
                        Eigen::new(k as u64, r)
                    })
                    .collect())
            }
            ActionData::ClassEigen(per_class) => per_class[self.group.class_index(g)]
                .clone()
                .ok_or_else(|| Error::MissingEigenData(self.group.label(g))),
        }
    }

    pub fn age(&self, g: Elem) -> Result<AgeVector> {
        let per_coordinate: Vec<BigRational> =
            self.eigen_exponents(g)?.into_iter().map(Eigen::fraction).collect();
        let total = per_coordinate
            .iter()
            .fold(BigRational::zero(), |acc, a| acc + a);
        Ok(AgeVector {
            per_coordinate,
            total,
        })
    }

    pub fn fixed_subspace_dim(&self, g: Elem) -> Result<usize> {
        Ok(self
            .eigen_exponents(g)?
            .iter()
            .filter(|e| e.is_trivial())
            .count())
    }
}
