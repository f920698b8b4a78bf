//! Explicit finite groups and the group-theoretic side of Chebotarev
//! counting: conjugacy classes, class functions with exact cyclotomic
//! values, direct and fiber products, and small character tables.
//!
//! Elements are opaque handles `0..order`. Small groups are backed by a
//! dense multiplication table; larger ones by hashed canonical forms
//! (see [`FiniteGroup::from_generators`]) or by a dedicated
//! implementation of [`GroupOps`] such as GL2(F_p).

mod chartable;
mod classes;
mod classfn;
pub mod cyclotomic;
mod doc;
mod hom;
pub mod named;
mod structure;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

pub use chartable::{character_table_small, inner_product, CharacterTable};
pub use classes::{conjugacy_classes, conjugacy_classes_by_orbits, ConjClassPartition};
pub use classfn::{matching_fraction, zero_fraction, ClassFunction};
pub use cyclotomic::CycValue;
pub use doc::{ClassDoc, ClassFunctionDoc, CycValueDoc, GroupDoc};
pub use hom::{direct_product, fiber_product, quotient, FiberProduct, GroupHom, QuotientMap};
pub use structure::{center, derived_subgroup, element_order, exponent, is_abelian, is_nilpotent, upper_central_series};

use crate::limits::limits;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group order {order} exceeds the configured bound {bound}")]
    OrderBoundExceeded { order: u64, bound: u64 },
    #[error("product order overflows the configured bound {bound}")]
    OrderOverflow { bound: u64 },
    #[error("class functions live on different groups ({0} vs {1})")]
    GroupMismatch(String, String),
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("map onto {0} is not surjective")]
    NotSurjective(String),
    #[error("quotient maps have different targets ({0} vs {1})")]
    MismatchedTargets(String, String),
    #[error("{classes} conjugacy classes exceed the character-table bound {bound}")]
    ClassCountExceeded { classes: u64, bound: u64 },
    #[error("no prime l = 1 mod {exponent} below {bound} for the character-table method")]
    NoSuitablePrime { exponent: u64, bound: u64 },
    #[error("character table computation failed: {0}")]
    CharacterTable(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Multiplication on element handles `0..order()`.
pub trait GroupOps: Send + Sync {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    /// A generating set; class computation conjugates by these only.
    fn generators(&self) -> Vec<usize>;
    fn label(&self, a: usize) -> String {
        format!("g{a}")
    }
    /// Whether the axioms still need an exhaustive check.
    fn needs_validation(&self) -> bool {
        false
    }
}

/// What the group is known to be, beyond its multiplication.
#[derive(Clone)]
pub enum GroupKind {
    Generic,
    /// GL2(F_p) with the element encoding of [`crate::gl2fp`].
    Gl2 { p: u64 },
    /// Handles are `left * |right| + right`.
    DirectProduct(FiniteGroup, FiniteGroup),
}

struct GroupInner {
    id: u64,
    name: String,
    ops: Arc<dyn GroupOps>,
    kind: GroupKind,
    classes: OnceLock<Result<Arc<ConjClassPartition>, GroupError>>,
    validated: OnceLock<Result<(), GroupError>>,
}

/// Immutable finite group, cheap to clone and safe to share across threads.
/// Two handles are equal only if they come from the same construction.
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupInner>);

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

impl FiniteGroup {
    pub fn new(name: impl Into<String>, ops: Arc<dyn GroupOps>, kind: GroupKind) -> Self {
        FiniteGroup(Arc::new(GroupInner {
            id: NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed),
            name: name.into(),
            ops,
            kind,
            classes: OnceLock::new(),
            validated: OnceLock::new(),
        }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn kind(&self) -> &GroupKind {
        &self.0.kind
    }

    pub fn ops(&self) -> &Arc<dyn GroupOps> {
        &self.0.ops
    }

    pub fn order(&self) -> usize {
        self.0.ops.order()
    }

    pub fn identity(&self) -> usize {
        self.0.ops.identity()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.ops.mul(a, b)
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.0.ops.inv(a)
    }

    pub fn generators(&self) -> Vec<usize> {
        self.0.ops.generators()
    }

    pub fn label(&self, a: usize) -> String {
        self.0.ops.label(a)
    }

    /// `g x g^{-1}`
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, x: usize, mut k: u64) -> usize {
        let mut acc = self.identity();
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Same multiplication, but forgetting any product structure, so that
    /// classes are recomputed by orbit enumeration.
    pub fn flatten(&self) -> FiniteGroup {
        FiniteGroup::new(
            format!("{} (flat)", self.name()),
            Arc::clone(&self.0.ops),
            GroupKind::Generic,
        )
    }

    /// Checks the group axioms. Cached; a no-op for groups built by
    /// closure, which satisfy the axioms by construction.
    pub fn validate(&self) -> Result<(), GroupError> {
        self.0
            .validated
            .get_or_init(|| {
                if self.0.ops.needs_validation() {
                    validate_axioms(self)
                } else {
                    Ok(())
                }
            })
            .clone()
    }

    /// Builds a group from an explicit Cayley table `table[a][b] = a*b`.
    /// Shape and identity are checked here; associativity and inverses on
    /// first use (or by [`FiniteGroup::validate`]).
    pub fn from_cayley_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let name = name.into();
        let ops = TableOps::from_rows(table)?;
        Ok(FiniteGroup::new(name, Arc::new(ops), GroupKind::Generic))
    }

    /// Closes `gens` under multiplication. Groups up to the table bound are
    /// stored as a dense table; larger ones keep hashed element forms.
    pub fn from_generators<E, F, L>(
        name: impl Into<String>,
        identity: E,
        gens: Vec<E>,
        mul: F,
        label: L,
    ) -> Result<Self, GroupError>
    where
        E: Clone + Eq + Hash + Send + Sync + 'static,
        F: Fn(&E, &E) -> E + Send + Sync + 'static,
        L: Fn(&E) -> String + Send + Sync + 'static,
    {
        let bound = limits().max_enumeration_order;
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<E, usize> = HashMap::from([(identity, 0)]);
        // parent[x] = (y, s) with elems[x] = elems[y] * gens[s]
        let mut parent: Vec<(usize, usize)> = vec![(0, usize::MAX)];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (s, g) in gens.iter().enumerate() {
                let y = mul(&elems[x], g);
                if !index.contains_key(&y) {
                    if elems.len() as u64 >= bound {
                        return Err(GroupError::OrderBoundExceeded {
                            order: elems.len() as u64 + 1,
                            bound,
                        });
                    }
                    index.insert(y.clone(), elems.len());
                    parent.push((x, s));
                    queue.push_back(elems.len());
                    elems.push(y);
                }
            }
        }
        let gen_handles: Vec<usize> = {
            let mut hs: Vec<usize> = gens.iter().map(|g| index[g]).collect();
            hs.sort_unstable();
            hs.dedup();
            hs.retain(|&h| h != 0);
            hs
        };
        let n = elems.len();
        let labels: Vec<String> = elems.iter().map(&label).collect();
        if n as u64 <= limits().max_table_order {
            let mut table = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    table[a * n + b] = index[&mul(&elems[a], &elems[b])] as u32;
                }
            }
            let ops = TableOps::from_flat(n, table, gen_handles, Some(labels), false)?;
            return Ok(FiniteGroup::new(name, Arc::new(ops), GroupKind::Generic));
        }
        // Inverses along the BFS tree: (y*s)^{-1} = s^{-1} * y^{-1}.
        let gen_inverse: Vec<usize> = gens
            .iter()
            .map(|g| {
                let mut prev = g.clone();
                let mut cur = mul(&prev, g);
                while index[&cur] != 0 {
                    prev = cur;
                    cur = mul(&prev, g);
                }
                index[&prev]
            })
            .collect();
        let mut inverse = vec![0usize; n];
        for x in 1..n {
            let (y, s) = parent[x];
            inverse[x] = index[&mul(&elems[gen_inverse[s]], &elems[inverse[y]])];
        }
        let ops = HashedOps {
            elems,
            index,
            mul,
            inverse,
            gens: gen_handles,
            labels,
        };
        Ok(FiniteGroup::new(name, Arc::new(ops), GroupKind::Generic))
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.0.name)
            .field("order", &self.order())
            .finish()
    }
}

/// Dense multiplication table.
pub(crate) struct TableOps {
    n: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: usize,
    gens: Vec<usize>,
    labels: Option<Vec<String>>,
    unchecked: bool,
}

impl TableOps {
    fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::InvalidGroup("empty table".into()));
        }
        if n as u64 > limits().max_validate_order {
            return Err(GroupError::OrderBoundExceeded {
                order: n as u64,
                bound: limits().max_validate_order,
            });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::InvalidGroup(format!("row {i} has length {} (expected {n})", row.len())));
            }
            for &v in row {
                if v >= n {
                    return Err(GroupError::InvalidGroup(format!("entry {v} out of range in row {i}")));
                }
                flat.push(v as u32);
            }
        }
        let gens = greedy_generators_flat(n, &flat);
        Self::from_flat(n, flat, gens, None, true)
    }

    fn from_flat(
        n: usize,
        table: Vec<u32>,
        gens: Vec<usize>,
        labels: Option<Vec<String>>,
        unchecked: bool,
    ) -> Result<Self, GroupError> {
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] as usize == x && table[x * n + e] as usize == x))
            .ok_or_else(|| GroupError::InvalidGroup("no two-sided identity".into()))?;
        let mut inverse = vec![u32::MAX; n];
        for a in 0..n {
            if let Some(b) = (0..n).find(|&b| table[a * n + b] as usize == identity) {
                inverse[a] = b as u32;
            }
        }
        Ok(TableOps {
            n,
            table,
            inverse,
            identity,
            gens,
            labels,
            unchecked,
        })
    }
}

/// Generators found greedily: each element not yet reached by right
/// multiplication from the current set joins it.
fn greedy_generators_flat(n: usize, table: &[u32]) -> Vec<usize> {
    let mut reached = vec![false; n];
    let mut gens = Vec::new();
    for cand in 0..n {
        if reached[cand] {
            continue;
        }
        gens.push(cand);
        // closure of the generated set under right multiplication by gens
        let mut queue: VecDeque<usize> = (0..n).filter(|&x| reached[x]).chain(gens.iter().copied()).collect();
        for &g in &gens {
            reached[g] = true;
        }
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = table[x * n + g] as usize;
                if !reached[y] {
                    reached[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    gens
}

impl GroupOps for TableOps {
    fn order(&self) -> usize {
        self.n
    }

    fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    fn inv(&self, a: usize) -> usize {
        let i = self.inverse[a];
        assert!(i != u32::MAX, "element {a} has no inverse (table not validated)");
        i as usize
    }

    fn generators(&self) -> Vec<usize> {
        self.gens.clone()
    }

    fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => format!("g{a}"),
        }
    }

    fn needs_validation(&self) -> bool {
        self.unchecked
    }
}

/// Elements kept in canonical form and located through a hash map.
struct HashedOps<E, F> {
    elems: Vec<E>,
    index: HashMap<E, usize>,
    mul: F,
    inverse: Vec<usize>,
    gens: Vec<usize>,
    labels: Vec<String>,
}

impl<E, F> GroupOps for HashedOps<E, F>
where
    E: Clone + Eq + Hash + Send + Sync,
    F: Fn(&E, &E) -> E + Send + Sync,
{
    fn order(&self) -> usize {
        self.elems.len()
    }

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&(self.mul)(&self.elems[a], &self.elems[b])]
    }

    fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    fn generators(&self) -> Vec<usize> {
        self.gens.clone()
    }

    fn label(&self, a: usize) -> String {
        self.labels[a].clone()
    }
}

/// Identity, inverses and associativity. Associativity uses Light's test:
/// `(x g) y = x (g y)` for every `x, y` and every `g` in a generating set.
fn validate_axioms(g: &FiniteGroup) -> Result<(), GroupError> {
    let n = g.order();
    if n as u64 > limits().max_validate_order {
        return Err(GroupError::OrderBoundExceeded {
            order: n as u64,
            bound: limits().max_validate_order,
        });
    }
    let ops = g.ops();
    let e = ops.identity();
    for x in 0..n {
        if ops.mul(e, x) != x || ops.mul(x, e) != x {
            return Err(GroupError::InvalidGroup(format!("identity fails on {}", ops.label(x))));
        }
    }
    // Inverses via a search so that a broken table cannot panic here.
    for x in 0..n {
        let has_inverse = (0..n).any(|y| ops.mul(x, y) == e && ops.mul(y, x) == e);
        if !has_inverse {
            return Err(GroupError::InvalidGroup(format!("{} has no two-sided inverse", ops.label(x))));
        }
    }
    for s in ops.generators() {
        for x in 0..n {
            let xs = ops.mul(x, s);
            for y in 0..n {
                if ops.mul(xs, y) != ops.mul(x, ops.mul(s, y)) {
                    return Err(GroupError::InvalidGroup(format!(
                        "non-associative table: ({}*{})*{} != {}*({}*{})",
                        ops.label(x),
                        ops.label(s),
                        ops.label(y),
                        ops.label(x),
                        ops.label(s),
                        ops.label(y)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Dense table for a group given by handles; used for quotients and
/// subgroups small enough to tabulate.
pub(crate) fn table_group(name: String, n: usize, mul: impl Fn(usize, usize) -> usize, labels: Vec<String>) -> Result<FiniteGroup, GroupError> {
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = mul(a, b) as u32;
        }
    }
    let gens = greedy_generators_flat(n, &table);
    let ops = TableOps::from_flat(n, table, gens, Some(labels), false)?;
    Ok(FiniteGroup::new(name, Arc::new(ops), GroupKind::Generic))
}
