//! Permutations, permutation groups, and integer partitions.
//!
//! Everything here fixes one global convention: permutations of degree n are
//! enumerated in lexicographic order of their image vectors, and
//! `lex_rank`/`from_lex_rank` are the bijection with `0..n!`. The Schur power
//! matrix indexes its rows and columns by exactly this order, so the ABI is
//! shared and must not drift.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

const RANK_GUARD: usize = 20; // 20! still fits in u64
pub const DEFAULT_CLOSURE_CAP: usize = 3_628_800; // 10!

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// A permutation of {0..n-1}, stored as its image vector. Text I/O uses
/// 1-indexed cycle notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::Invalid("empty permutation".to_string()));
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::Invalid(format!(
                    "images {images:?} are not a bijection on 0..{n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self o rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.degree(), rhs.degree());
        Permutation {
            images: rhs.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Multiplicative order.
    pub fn order(&self) -> usize {
        self.cycle_type().iter().fold(1, |acc, &l| {
            acc / num_integer::gcd(acc, l) * l
        })
    }

    /// Cycle lengths including fixed points, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// +1 or -1.
    pub fn sign(&self) -> i64 {
        let flips: usize = self.cycle_type().iter().map(|l| l - 1).sum();
        if flips % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Position in the lexicographic enumeration of S_n, in `0..n!`.
    pub fn lex_rank(&self) -> u64 {
        let n = self.degree();
        debug_assert!(n <= RANK_GUARD);
        let mut rank = 0u64;
        for i in 0..n {
            let smaller = self.images[i + 1..]
                .iter()
                .filter(|&&v| v < self.images[i])
                .count() as u64;
            rank += smaller * factorial(n - 1 - i);
        }
        rank
    }

    /// Inverse of `lex_rank`.
    pub fn from_lex_rank(n: usize, rank: u64) -> Result<Self> {
        if n == 0 || n > RANK_GUARD {
            return Err(Error::SizeGuard(format!(
                "lex rank supports 1 <= n <= {RANK_GUARD}, got {n}"
            )));
        }
        if rank >= factorial(n) {
            return Err(Error::Invalid(format!("rank {rank} out of range for n = {n}")));
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let mut images = Vec::with_capacity(n);
        let mut r = rank;
        for i in 0..n {
            let f = factorial(n - 1 - i);
            let idx = (r / f) as usize;
            r %= f;
            images.push(pool.remove(idx));
        }
        Ok(Permutation { images })
    }

    /// Parse 1-indexed cycle notation: `(1 2)(3 4)`, `(1 2 3)`, `()` or `e`
    /// for the identity. Points not mentioned are fixed.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        let bad = |msg: String| Error::ScalarLiteral {
            text: text.to_string(),
            msg,
        };
        let mut images: Vec<usize> = (0..n).collect();
        let trimmed = text.trim();
        if trimmed == "e" || trimmed == "()" {
            return Ok(Permutation { images });
        }
        let mut moved = vec![false; n];
        let mut rest = trimmed;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| bad("expected '('".to_string()))?;
            if !rest[..open].trim().is_empty() {
                return Err(bad(format!("unexpected text {:?}", &rest[..open])));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| bad("unclosed cycle".to_string()))?;
            let body = &rest[open + 1..close];
            rest = &rest[close + 1..];
            let pts: Vec<usize> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|e| bad(format!("bad point {s:?}: {e}")))
                })
                .collect::<Result<_>>()?;
            if pts.is_empty() {
                continue;
            }
            for &p in &pts {
                if p == 0 || p > n {
                    return Err(bad(format!("point {p} outside 1..={n}")));
                }
                if moved[p - 1] {
                    return Err(bad(format!("point {p} appears twice")));
                }
                moved[p - 1] = true;
            }
            for w in 0..pts.len() {
                images[pts[w] - 1] = pts[(w + 1) % pts.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }
}

impl fmt::Display for Permutation {
    /// 1-indexed cycle notation with fixed points omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.images[i];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A subgroup of some S_n, fully enumerated, elements in lexicographic order.
#[derive(Clone, Debug)]
pub struct PermGroup {
    n: usize,
    elements: Vec<Permutation>,
    generators: Vec<Permutation>,
    index: HashMap<Vec<usize>, usize>,
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.elements == other.elements
    }
}
impl Eq for PermGroup {}

fn bfs_closure(n: usize, gens: &[Permutation], cap: usize) -> Result<Vec<Permutation>> {
    let e = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(e.clone());
    let mut queue = VecDeque::from([e]);
    let mut out = Vec::new();
    while let Some(x) = queue.pop_front() {
        out.push(x.clone());
        for g in gens {
            let y = x.compose(g);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::ClosureCap(cap));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    out.sort();
    Ok(out)
}

impl PermGroup {
    pub fn from_generators(n: usize, generators: Vec<Permutation>) -> Result<Self> {
        Self::from_generators_capped(n, generators, DEFAULT_CLOSURE_CAP)
    }

    pub fn from_generators_capped(
        n: usize,
        generators: Vec<Permutation>,
        cap: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("degree must be positive".to_string()));
        }
        for g in &generators {
            if g.degree() != n {
                return Err(Error::DimensionMismatch(format!(
                    "generator degree {} != {n}",
                    g.degree()
                )));
            }
        }
        let elements = bfs_closure(n, &generators, cap)?;
        Ok(Self::from_sorted_elements(n, elements, generators))
    }

    fn from_sorted_elements(
        n: usize,
        elements: Vec<Permutation>,
        generators: Vec<Permutation>,
    ) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.images.clone(), i))
            .collect();
        PermGroup {
            n,
            elements,
            generators,
            index,
        }
    }

    pub fn trivial(n: usize) -> Self {
        PermGroup::from_generators(n, Vec::new()).expect("n >= 1")
    }

    /// All of S_n, enumerated directly in lexicographic order.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || factorial(n.min(RANK_GUARD)) as usize > DEFAULT_CLOSURE_CAP {
            return Err(Error::SizeGuard(format!(
                "symmetric group enumeration capped at 10!, got n = {n}"
            )));
        }
        let elements: Vec<Permutation> = (0..factorial(n))
            .map(|r| Permutation::from_lex_rank(n, r).expect("rank in range"))
            .collect();
        let generators = if n == 1 {
            Vec::new()
        } else {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let mut gens = vec![Permutation::from_images(swap).unwrap()];
            if n > 2 {
                gens.push(Permutation::from_images(cycle).unwrap());
            }
            gens
        };
        Ok(Self::from_sorted_elements(n, elements, generators))
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(&p.images).copied()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(&p.images)
    }

    pub fn identity_index(&self) -> usize {
        self.index_of(&Permutation::identity(self.n))
            .expect("groups contain the identity")
    }

    /// Conjugacy classes as sorted lists of element indices, ordered by their
    /// smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for i in 0..self.order() {
            if seen[i] {
                continue;
            }
            seen[i] = true;
            let mut class = vec![i];
            let mut stack = vec![i];
            while let Some(x) = stack.pop() {
                for g in &self.elements {
                    let y = g.compose(&self.elements[x]).compose(&g.inverse());
                    let yi = self.index_of(&y).expect("closed under conjugation");
                    if !seen[yi] {
                        seen[yi] = true;
                        class.push(yi);
                        stack.push(yi);
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// A short generating sequence rebuilt from scratch: scan elements in
    /// lexicographic order, keeping each one that enlarges the closure. The
    /// chain at least doubles per kept element, so its length is at most
    /// log2 of the order.
    pub fn generating_chain(&self) -> Vec<Permutation> {
        let mut chain: Vec<Permutation> = Vec::new();
        let mut closed = 1usize;
        for p in &self.elements {
            if closed == self.order() {
                break;
            }
            if p.is_identity() {
                continue;
            }
            let mut trial = chain.clone();
            trial.push(p.clone());
            let c = bfs_closure(self.n, &trial, self.order() + 1)
                .expect("closure stays inside the group")
                .len();
            if c > closed {
                chain = trial;
                closed = c;
            }
        }
        chain
    }

    /// Every subgroup, found by closing the lattice upward from the trivial
    /// group. Deterministic order: by order, then by element-index list.
    pub fn all_subgroups(&self) -> Result<Vec<PermGroup>> {
        const SUBGROUP_GUARD: usize = 1000;
        if self.order() > SUBGROUP_GUARD {
            return Err(Error::SizeGuard(format!(
                "subgroup enumeration supports order <= {SUBGROUP_GUARD}, got {}",
                self.order()
            )));
        }
        let key_of = |elems: &[Permutation]| -> Vec<usize> {
            let mut k: Vec<usize> = elems
                .iter()
                .map(|p| self.index_of(p).expect("subgroup element in parent"))
                .collect();
            k.sort_unstable();
            k
        };
        let trivial_gens: Vec<Permutation> = Vec::new();
        let trivial_elems = bfs_closure(self.n, &trivial_gens, 2)?;
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        found.insert(key_of(&trivial_elems));
        let mut work: Vec<(Vec<Permutation>, Vec<Permutation>)> =
            vec![(trivial_elems, trivial_gens)];
        let mut i = 0;
        while i < work.len() {
            let (elems, gens) = work[i].clone();
            i += 1;
            for g in &self.elements {
                if elems.contains(g) {
                    continue;
                }
                let mut trial = gens.clone();
                trial.push(g.clone());
                let closure = bfs_closure(self.n, &trial, self.order() + 1)?;
                if found.insert(key_of(&closure)) {
                    work.push((closure, trial));
                }
            }
        }
        let mut subs: Vec<PermGroup> = work
            .into_iter()
            .map(|(elems, gens)| Self::from_sorted_elements(self.n, elems, gens))
            .collect();
        subs.sort_by_key(|h| (h.order(), key_of(&h.elements)));
        Ok(subs)
    }
}

/// An integer partition: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Invalid("empty partition".to_string()));
        }
        if parts.iter().any(|&p| p == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid(format!(
                "parts {parts:?} are not weakly decreasing positive integers"
            )));
        }
        Ok(Partition { parts })
    }

    /// Comma list, e.g. `3,1,1`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<usize> = text
            .split(',')
            .map(|s| {
                s.trim().parse::<usize>().map_err(|e| Error::ScalarLiteral {
                    text: text.to_string(),
                    msg: format!("bad part {s:?}: {e}"),
                })
            })
            .collect::<Result<_>>()?;
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.parts[0];
        let parts = (0..cols)
            .map(|j| self.parts.iter().filter(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }

    /// Number of standard Young tableaux (= degree of the associated
    /// irreducible character), by the hook length formula.
    pub fn syt_count(&self) -> u64 {
        let n = self.n();
        let conj = self.conjugate();
        let mut hooks = 1u128;
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                hooks *= (row - j + conj.parts[j] - i - 1) as u128;
            }
        }
        (factorial(n) as u128 / hooks) as u64
    }

    /// All partitions of n, in descending lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition {
                    parts: prefix.clone(),
                });
                return;
            }
            for p in (1..=remaining.min(max)).rev() {
                prefix.push(p);
                rec(remaining - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_roundtrip_is_lexicographic() {
        let seq: Vec<Vec<usize>> = (0..6)
            .map(|r| Permutation::from_lex_rank(3, r).unwrap().images().to_vec())
            .collect();
        assert_eq!(
            seq,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![2, 1, 0],
            ]
        );
        for r in 0..24 {
            let p = Permutation::from_lex_rank(4, r).unwrap();
            assert_eq!(p.lex_rank(), r);
        }
        assert_eq!(Permutation::identity(7).lex_rank(), 0);
        assert!(Permutation::from_lex_rank(3, 6).is_err());
    }

    #[test]
    fn compose_inverse_sign() {
        let a = Permutation::parse_cycles(4, "(1 2)").unwrap();
        let b = Permutation::parse_cycles(4, "(2 3 4)").unwrap();
        // (a o b)(2) = a(b(2)): b sends 2 -> 3, a fixes 3
        assert_eq!(a.compose(&b).apply(1), 2);
        assert!(a.compose(&a).is_identity());
        assert!(b.compose(&b.inverse()).is_identity());
        assert_eq!(a.sign(), -1);
        assert_eq!(b.sign(), 1);
        assert_eq!(a.compose(&b).sign(), a.sign() * b.sign());
        assert_eq!(b.order(), 3);
        assert_eq!(a.compose(&b).cycle_type(), vec![4]);
    }

    #[test]
    fn cycle_notation_round_trips() {
        for text in ["(1 2)(3 4)", "(1 2 3 4)", "(2 4)", "()"] {
            let p = Permutation::parse_cycles(4, text).unwrap();
            assert_eq!(p.to_string(), text);
            assert_eq!(
                Permutation::parse_cycles(4, &p.to_string()).unwrap(),
                p
            );
        }
        assert_eq!(Permutation::parse_cycles(3, "(1,2,3)").unwrap().to_string(), "(1 2 3)");
        assert!(Permutation::parse_cycles(3, "(1 4)").is_err());
        assert!(Permutation::parse_cycles(3, "(1 1)").is_err());
        assert!(Permutation::parse_cycles(3, "(1 2").is_err());
    }

    #[test]
    fn closure_examples() {
        let t = PermGroup::from_generators(3, vec![]).unwrap();
        assert_eq!(t.order(), 1);
        assert!(t.element(0).is_identity());

        let c3 = PermGroup::from_generators(
            3,
            vec![Permutation::parse_cycles(3, "(1 2 3)").unwrap()],
        )
        .unwrap();
        assert_eq!(c3.order(), 3);

        let s4 = PermGroup::from_generators(
            4,
            vec![
                Permutation::parse_cycles(4, "(1 2)").unwrap(),
                Permutation::parse_cycles(4, "(1 2 3 4)").unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s4.order(), 24);
        // elements come out lex sorted and indexable
        for (i, p) in s4.elements().iter().enumerate() {
            assert_eq!(p.lex_rank() as usize, i);
            assert_eq!(s4.index_of(p), Some(i));
        }
        assert_eq!(s4, PermGroup::symmetric(4).unwrap());

        assert!(matches!(
            PermGroup::from_generators_capped(
                4,
                vec![
                    Permutation::parse_cycles(4, "(1 2)").unwrap(),
                    Permutation::parse_cycles(4, "(1 2 3 4)").unwrap(),
                ],
                10,
            ),
            Err(Error::ClosureCap(10))
        ));
    }

    #[test]
    fn conjugacy_classes_of_s3() {
        let s3 = PermGroup::symmetric(3).unwrap();
        let classes = s3.conjugacy_classes();
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        for class in &classes {
            let t = s3.element(class[0]).cycle_type();
            assert!(class.iter().all(|&i| s3.element(i).cycle_type() == t));
        }
    }

    #[test]
    fn subgroup_lattice_of_s4() {
        let s4 = PermGroup::symmetric(4).unwrap();
        let subs = s4.all_subgroups().unwrap();
        assert_eq!(subs.len(), 30);
        let mut by_order: HashMap<usize, usize> = HashMap::new();
        for h in &subs {
            *by_order.entry(h.order()).or_insert(0) += 1;
            assert!(h.elements().iter().all(|p| s4.contains(p)));
            // closed under composition
            let p = h.element(h.order() - 1).compose(h.element(0));
            assert!(h.contains(&p));
        }
        let expect: HashMap<usize, usize> =
            [(1, 1), (2, 9), (3, 4), (4, 7), (6, 4), (8, 3), (12, 1), (24, 1)]
                .into_iter()
                .collect();
        assert_eq!(by_order, expect);
    }

    #[test]
    fn generating_chains_are_short() {
        let s4 = PermGroup::symmetric(4).unwrap();
        for h in s4.all_subgroups().unwrap() {
            let chain = h.generating_chain();
            assert!(chain.len() <= 4);
            let rebuilt = PermGroup::from_generators(4, chain).unwrap();
            assert_eq!(rebuilt, h);
        }
    }

    #[test]
    fn partitions() {
        assert!(Partition::new(vec![2, 3]).is_err());
        assert!(Partition::new(vec![3, 0]).is_err());
        assert_eq!(Partition::parse("3,1,1").unwrap().n(), 5);
        assert_eq!(Partition::all(5).len(), 7);
        assert_eq!(Partition::all(10).len(), 42);
        // descending lex: first is (n), last is (1^n)
        let all = Partition::all(4);
        assert_eq!(all[0].parts(), &[4]);
        assert_eq!(all.last().unwrap().parts(), &[1, 1, 1, 1]);
        assert_eq!(Partition::parse("2,1").unwrap().syt_count(), 2);
        assert_eq!(Partition::parse("3,2").unwrap().syt_count(), 5);
        assert_eq!(Partition::parse("5").unwrap().syt_count(), 1);
        assert_eq!(Partition::parse("1,1,1,1").unwrap().syt_count(), 1);
        assert_eq!(
            Partition::parse("3,1").unwrap().conjugate().parts(),
            &[2, 1, 1]
        );
        // degrees over all of S_5 square-sum to 5!
        let sq: u64 = Partition::all(5)
            .iter()
            .map(|l| l.syt_count() * l.syt_count())
            .sum();
        assert_eq!(sq, 120);
    }
}
