//! Finite groups stored as full multiplication tables.
//!
//! Element 0 is always the identity. Conjugacy-class and subgroup
//! representatives are chosen as minimal element indices so that every derived
//! listing is reproducible.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};

/// Default cap on the order of groups built by closure.
pub const DEFAULT_ORDER_CAP: usize = 5040;

/// Order cap honoring the `ORBK_ORDER_CAP` environment override.
pub fn order_cap() -> usize {
    std::env::var("ORBK_ORDER_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_ORDER_CAP)
}

/// Tables up to this order get an exhaustive associativity check.
const FULL_ASSOCIATIVITY_LIMIT: usize = 512;
const SAMPLED_TRIPLES: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    generators: Vec<usize>,
    permutations: Option<PermutationProvenance>,
}

/// The permutation representation a group was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationProvenance {
    pub points: usize,
    /// Image vector of every element, indexed by element.
    pub images: Vec<Vec<usize>>,
    /// Input generators, as given.
    pub generators: Vec<Vec<usize>>,
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // (p ∘ q)(i) = p(q(i))
    q.iter().map(|&i| p[i]).collect()
}

fn check_permutation(k: usize, p: &[usize], which: usize) -> Result<()> {
    if p.len() != k {
        return Err(Error::validation(format!("generator {which} has {} images, expected {k}", p.len())));
    }
    let mut seen = vec![false; k];
    for &x in p {
        if x >= k || seen[x] {
            return Err(Error::validation(format!("generator {which} is not a bijection of 0..{k}")));
        }
        seen[x] = true;
    }
    Ok(())
}

impl FiniteGroup {
    /// Closure of permutation generators on `k` points, using the default order cap.
    pub fn from_permutations(k: usize, generators: &[Vec<usize>]) -> Result<Self> {
        Self::from_permutations_capped(k, generators, order_cap())
    }

    /// Closure of permutation generators under composition.
    ///
    /// Elements are numbered breadth-first: level `n+1` holds the new products
    /// `x·s` for `x` in level `n`, sorted by image vector.
    pub fn from_permutations_capped(k: usize, generators: &[Vec<usize>], cap: usize) -> Result<Self> {
        for (i, p) in generators.iter().enumerate() {
            check_permutation(k, p, i)?;
        }
        let identity: Vec<usize> = (0..k).collect();
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut elems: Vec<Vec<usize>> = vec![identity.clone()];
        index.insert(identity, 0);
        let mut level = vec![0usize];
        while !level.is_empty() {
            let mut fresh: Vec<Vec<usize>> = Vec::new();
            let mut fresh_set: HashSet<Vec<usize>> = HashSet::new();
            for &x in &level {
                for s in generators {
                    let p = compose(&elems[x], s);
                    if !index.contains_key(&p) && fresh_set.insert(p.clone()) {
                        fresh.push(p);
                    }
                }
            }
            fresh.sort();
            level.clear();
            for p in fresh {
                let id = elems.len();
                if id >= cap {
                    return Err(Error::OrderCap { cap, reached: id + 1 });
                }
                index.insert(p.clone(), id);
                elems.push(p);
                level.push(id);
            }
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(&elems[a], &elems[b])] as u32;
            }
        }
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inverses[a] = b as u32;
                    break;
                }
            }
        }
        let mut gens: Vec<usize> = generators.iter().map(|s| index[s]).filter(|&g| g != 0).collect();
        gens.dedup();
        Ok(FiniteGroup {
            order: n,
            table,
            inverses,
            generators: gens,
            permutations: Some(PermutationProvenance { points: k, images: elems, generators: generators.to_vec() }),
        })
    }

    /// Builds a group from a multiplication table, validating every group axiom.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::validation("table: empty table"));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::validation(format!("table[{i}]: expected {n} entries, found {}", r.len())));
            }
            if let Some(&bad) = r.iter().find(|&&x| x >= n) {
                return Err(Error::validation(format!("table[{i}]: entry {bad} out of range")));
            }
        }
        for (g, row) in rows.iter().enumerate() {
            if rows[0][g] != g || row[0] != g {
                return Err(Error::validation(format!(
                    "identity axiom: element 0 must be the identity (fails at element {g})"
                )));
            }
        }
        // Latin square
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                if std::mem::replace(&mut seen_row[rows[i][j]], true) {
                    return Err(Error::validation(format!("latin square axiom: row {i} repeats {}", rows[i][j])));
                }
                if std::mem::replace(&mut seen_col[rows[j][i]], true) {
                    return Err(Error::validation(format!("latin square axiom: column {i} repeats {}", rows[j][i])));
                }
            }
        }
        let table: Vec<u32> = rows.iter().flatten().map(|&x| x as u32).collect();
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            let b = (0..n).find(|&b| rows[a][b] == 0).expect("latin square has an inverse");
            if rows[b][a] != 0 {
                return Err(Error::validation(format!("inverse axiom: element {a} has no two-sided inverse")));
            }
            inverses[a] = b as u32;
        }
        let mut g = FiniteGroup { order: n, table, inverses, generators: Vec::new(), permutations: None };
        if let Some((a, b, c)) = g.find_nonassociative_triple() {
            return Err(Error::validation(format!("associativity axiom: fails for ({a}, {b}, {c})")));
        }
        g.generators = g.greedy_generators();
        Ok(g)
    }

    /// Builds a table group without re-validating; the caller guarantees the axioms.
    pub(crate) fn from_raw_table(order: usize, table: Vec<u32>) -> Self {
        let mut inverses = vec![0u32; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverses[a] = b as u32;
                    break;
                }
            }
        }
        let mut g = FiniteGroup { order, table, inverses, generators: Vec::new(), permutations: None };
        g.generators = g.greedy_generators();
        g
    }

    /// Exhaustive for small tables, a fixed pseudo-random sample above that.
    pub(crate) fn find_nonassociative_triple(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Some((a, b, c));
                        }
                    }
                }
            }
            return None;
        }
        let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % n as u64) as usize
        };
        for _ in 0..SAMPLED_TRIPLES {
            let (a, b, c) = (next(), next(), next());
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Some((a, b, c));
            }
        }
        None
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = Subgroup::generated(self, &[]);
        for g in 1..self.order {
            if !span.contains(g) {
                gens.push(g);
                span = Subgroup::generated(self, &gens);
            }
        }
        gens
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_raw_table(1, vec![0])
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `x g x⁻¹`
    #[inline]
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        let mut acc = 0;
        let mut base = g;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, g| num_integer::lcm(acc, self.element_order(g)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A generating set: the input generators for permutation groups, otherwise
    /// the greedy set of minimal indices.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn permutations(&self) -> Option<&PermutationProvenance> {
        self.permutations.as_ref()
    }

    /// Multiplication table as nested rows.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn center(&self) -> Subgroup {
        let elements = (0..self.order).filter(|&z| (0..self.order).all(|x| self.mul(z, x) == self.mul(x, z))).collect();
        Subgroup { elements, kind: SubgroupKind::Generic }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: (0..self.order).collect(), kind: SubgroupKind::Generic }
    }

    pub fn conjugacy_classes(&self) -> ConjugacyClassSet {
        ConjugacyClassSet::new(self)
    }

    pub fn centralizer(&self, g: usize) -> Subgroup {
        let elements = (0..self.order).filter(|&x| self.mul(x, g) == self.mul(g, x)).collect();
        Subgroup { elements, kind: SubgroupKind::Centralizer }
    }

    pub fn normalizer(&self, s: &Subgroup) -> Subgroup {
        let elements =
            (0..self.order).filter(|&x| s.elements.iter().all(|&h| s.contains(self.conjugate(h, x)))).collect();
        Subgroup { elements, kind: SubgroupKind::Normalizer }
    }

    pub fn cyclic(&self, g: usize) -> Subgroup {
        let mut elements = vec![0];
        let mut x = g;
        while x != 0 {
            elements.push(x);
            x = self.mul(x, g);
        }
        elements.sort_unstable();
        Subgroup { elements, kind: SubgroupKind::Cyclic }
    }

    /// One entry per conjugacy class of cyclic subgroups, in order of the
    /// minimal-index generator; the trivial subgroup comes first.
    pub fn cyclic_subgroup_classes(&self) -> Vec<CyclicSubgroupClass> {
        let mut covered = vec![false; self.order];
        let mut out = Vec::new();
        for g in 0..self.order {
            if covered[g] {
                continue;
            }
            let c = self.cyclic(g);
            let mut seen: HashSet<Vec<usize>> = HashSet::new();
            for x in 0..self.order {
                let mut conj: Vec<usize> = c.elements.iter().map(|&h| self.conjugate(h, x)).collect();
                conj.sort_unstable();
                if seen.insert(conj.clone()) {
                    let n = conj.len();
                    for &h in &conj {
                        if self.element_order(h) == n {
                            covered[h] = true;
                        }
                    }
                }
            }
            let normalizer = self.normalizer(&c);
            let centralizer = self.centralizer(g);
            let c_order = c.order();
            let galois_exponents = normalizer
                .elements
                .iter()
                .map(|&n| {
                    let target = self.conjugate(g, n);
                    (0..c_order.max(1)).find(|&k| self.pow(g, k) == target).expect("normalizer preserves C")
                })
                .collect();
            out.push(CyclicSubgroupClass { generator: g, subgroup: c, normalizer, centralizer, galois_exponents });
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupKind {
    Centralizer,
    Normalizer,
    Cyclic,
    Generic,
}

/// A subgroup as a sorted list of element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
    kind: SubgroupKind,
}

impl Subgroup {
    /// Validates closure and returns the subgroup.
    pub fn new(group: &FiniteGroup, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(Error::validation("subgroup must contain the identity"));
        }
        if elements.iter().any(|&e| e >= group.order()) {
            return Err(Error::validation("subgroup element out of range"));
        }
        let s = Subgroup { elements, kind: SubgroupKind::Generic };
        for &a in &s.elements {
            if !s.contains(group.inv(a)) {
                return Err(Error::validation(format!("subgroup not closed under inverse of {a}")));
            }
            for &b in &s.elements {
                if !s.contains(group.mul(a, b)) {
                    return Err(Error::validation(format!("subgroup not closed: {a}·{b}")));
                }
            }
        }
        Ok(s)
    }

    pub fn trivial() -> Self {
        Subgroup { elements: vec![0], kind: SubgroupKind::Generic }
    }

    /// Subgroup generated by the given elements.
    pub fn generated(group: &FiniteGroup, gens: &[usize]) -> Self {
        let mut inside = vec![false; group.order()];
        inside[0] = true;
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for &s in gens {
                let y = group.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    queue.push(y);
                }
            }
        }
        let elements = (0..group.order()).filter(|&i| inside[i]).collect();
        Subgroup { elements, kind: SubgroupKind::Generic }
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn kind(&self) -> SubgroupKind {
        self.kind
    }

    /// `x H x⁻¹`
    pub fn conjugated(&self, group: &FiniteGroup, x: usize) -> Subgroup {
        let mut elements: Vec<usize> = self.elements.iter().map(|&h| group.conjugate(h, x)).collect();
        elements.sort_unstable();
        Subgroup { elements, kind: self.kind }
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let elements = self.elements.iter().copied().filter(|&g| other.contains(g)).collect();
        Subgroup { elements, kind: SubgroupKind::Generic }
    }

    /// The subgroup as a group in its own right. Local index `i` corresponds to
    /// `embedding[i]` in the ambient group; local 0 is the identity.
    pub fn as_group(&self, group: &FiniteGroup) -> (FiniteGroup, Vec<usize>) {
        let n = self.order();
        let local = |g: usize| self.elements.binary_search(&g).expect("closed subgroup");
        let mut table = vec![0u32; n * n];
        for (i, &a) in self.elements.iter().enumerate() {
            for (j, &b) in self.elements.iter().enumerate() {
                table[i * n + j] = local(group.mul(a, b)) as u32;
            }
        }
        (FiniteGroup::from_raw_table(n, table), self.elements.clone())
    }
}

/// Partition of a group into conjugacy classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClassSet {
    class_of: Vec<usize>,
    representatives: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl ConjugacyClassSet {
    fn new(group: &FiniteGroup) -> Self {
        let n = group.order();
        let mut class_of = vec![usize::MAX; n];
        let mut representatives = Vec::new();
        let mut members = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let id = representatives.len();
            let mut orbit = Vec::new();
            for x in 0..n {
                let c = group.conjugate(g, x);
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    orbit.push(c);
                }
            }
            orbit.sort_unstable();
            representatives.push(g);
            members.push(orbit);
        }
        ConjugacyClassSet { class_of, representatives, members }
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn representative(&self, class: usize) -> usize {
        self.representatives[class]
    }

    pub fn members(&self, class: usize) -> &[usize] {
        &self.members[class]
    }

    pub fn size(&self, class: usize) -> usize {
        self.members[class].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }
}

/// A conjugacy class of cyclic subgroups `C = ⟨generator⟩` with its normalizer,
/// centralizer and the action of the normalizer on `C`.
#[derive(Clone, Debug)]
pub struct CyclicSubgroupClass {
    pub generator: usize,
    pub subgroup: Subgroup,
    pub normalizer: Subgroup,
    pub centralizer: Subgroup,
    /// For each normalizer element `n` (in normalizer order), the exponent `k`
    /// with `n c n⁻¹ = c^k`.
    pub galois_exponents: Vec<usize>,
}

impl CyclicSubgroupClass {
    /// Order of `W_G(C) = N_G(C)/Z_G(C)`.
    pub fn weyl_order(&self) -> usize {
        self.normalizer.order() / self.centralizer.order()
    }
}

/// Standard permutation groups used by fixtures and the CLI.
pub mod named {
    use super::*;

    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        if n <= 1 {
            return FiniteGroup::from_permutations(1, &[]);
        }
        FiniteGroup::from_permutations(n, &[(0..n).map(|i| (i + 1) % n).collect()])
    }

    pub fn symmetric(n: usize) -> Result<FiniteGroup> {
        match n {
            0 | 1 => FiniteGroup::from_permutations(1, &[]),
            2 => FiniteGroup::from_permutations(2, &[vec![1, 0]]),
            _ => {
                let mut t: Vec<usize> = (0..n).collect();
                t.swap(0, 1);
                let c: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
                FiniteGroup::from_permutations(n, &[t, c])
            }
        }
    }

    pub fn alternating(n: usize) -> Result<FiniteGroup> {
        if n < 3 {
            return FiniteGroup::from_permutations(n.max(1), &[]);
        }
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| {
                let mut p: Vec<usize> = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                p
            })
            .collect();
        FiniteGroup::from_permutations(n, &gens)
    }

    /// Dihedral group of order `2n` acting on the vertices of an `n`-gon.
    pub fn dihedral(n: usize) -> Result<FiniteGroup> {
        let r: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let s: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        FiniteGroup::from_permutations(n, &[r, s])
    }

    /// Klein four-group generated by two disjoint transpositions.
    pub fn klein_four() -> Result<FiniteGroup> {
        FiniteGroup::from_permutations(4, &[vec![1, 0, 2, 3], vec![0, 1, 3, 2]])
    }

    /// Parses names such as `C5`, `S4`, `A4`, `D6`, `V4`, `Q8`, `C2xC2`.
    pub fn by_name(name: &str) -> Option<Result<FiniteGroup>> {
        let upper = name.trim().to_ascii_uppercase();
        if upper == "V4" || upper == "C2XC2" {
            return Some(klein_four());
        }
        if upper == "Q8" {
            // quaternion units acting on themselves by left multiplication
            let i = vec![2, 3, 1, 0, 6, 7, 5, 4];
            let j = vec![4, 5, 7, 6, 1, 0, 2, 3];
            return Some(FiniteGroup::from_permutations(8, &[i, j]));
        }
        let (head, tail) = upper.split_at(1);
        let n: usize = tail.parse().ok()?;
        match head {
            "C" | "Z" => Some(cyclic(n)),
            "S" => Some(symmetric(n)),
            "A" => Some(alternating(n)),
            "D" => Some(dihedral(n)),
            _ => None,
        }
    }
}
