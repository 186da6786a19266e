//! Definite Horn formulas and forward-chaining inference.
//!
//! A definite clause `b1 … bk -> h` says: whenever every body vertex is
//! present, the head vertex is too. A [`DefiniteCnf`] is a deduplicated set
//! of such clauses over one ground set, kept in canonical order (by head,
//! then by body size, then by body bitmask).
//!
//! [`DefiniteCnf::forward_chain`] computes the least model containing a
//! starting set by saturating rounds: round `i+1` adds the heads of all
//! clauses whose bodies lie inside the round-`i` set. The reported step
//! count is the number of rounds that added at least one vertex, so an
//! already-closed input takes 0 steps.
//!
//! # Text format
//!
//! Header line `n <N>`, then one clause per line as
//! `b1 b2 … bk -> h` (an empty body is written `-> h`). `#` comments as in
//! the set-family format; blank lines are ignored.

use std::fmt;
use std::str::FromStr;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::par;
use crate::set_family::{canonical_cmp, GroundSet, SetFamily, VSet};

/// One definite clause `body -> head` with `head ∉ body`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DefiniteClause {
    body: u64,
    head: u8,
}

impl DefiniteClause {
    /// Builds a clause, requiring `head ∉ body` and `head` in the ground set.
    pub fn new(ground: GroundSet, body: VSet, head: usize) -> Result<DefiniteClause> {
        if body.ground() != ground {
            return Err(Error::GroundSetMismatch { left: ground.n(), right: body.ground().n() });
        }
        if head >= ground.n() {
            return Err(Error::InvalidInput(format!(
                "head {head} outside ground set of size {}",
                ground.n()
            )));
        }
        if body.contains(head) {
            return Err(Error::InvalidInput(format!(
                "head {head} appears in body {body}"
            )));
        }
        Ok(DefiniteClause { body: body.mask(), head: head as u8 })
    }

    /// Body bitmask.
    pub fn body_mask(&self) -> u64 {
        self.body
    }

    /// Head vertex.
    pub fn head(&self) -> usize {
        self.head as usize
    }
}

/// A definite Horn formula: a canonical, deduplicated set of clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiniteCnf {
    ground: GroundSet,
    clauses: Vec<(u64, u8)>,
}

fn clause_cmp(a: &(u64, u8), b: &(u64, u8)) -> std::cmp::Ordering {
    a.1.cmp(&b.1).then_with(|| canonical_cmp(a.0, b.0))
}

impl DefiniteCnf {
    /// Formula with no clauses (constant true).
    pub fn empty(ground: GroundSet) -> DefiniteCnf {
        DefiniteCnf { ground, clauses: Vec::new() }
    }

    /// Formula from clauses; sorts canonically and deduplicates.
    pub fn new(ground: GroundSet, clauses: impl IntoIterator<Item = DefiniteClause>) -> DefiniteCnf {
        let mut cs: Vec<(u64, u8)> = clauses.into_iter().map(|c| (c.body, c.head)).collect();
        cs.sort_unstable_by(clause_cmp);
        cs.dedup();
        DefiniteCnf { ground, clauses: cs }
    }

    /// The *circular* formula of a hypergraph: for every hyperedge `H` and
    /// every `v ∈ H`, the clause `H∖{v} -> v`. Empty hyperedges contribute
    /// nothing; singleton hyperedges contribute empty-body clauses.
    pub fn circular(h: &SetFamily) -> DefiniteCnf {
        let mut cs: Vec<(u64, u8)> = Vec::new();
        for &edge in h.masks() {
            let mut rest = edge;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                cs.push((edge & !bit, bit.trailing_zeros() as u8));
                rest ^= bit;
            }
        }
        cs.sort_unstable_by(clause_cmp);
        cs.dedup();
        DefiniteCnf { ground: h.ground(), clauses: cs }
    }

    /// The owning ground set.
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    /// Number of clauses.
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    /// Is the formula empty (constant true)?
    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Clauses in canonical order.
    pub fn clauses(&self) -> impl Iterator<Item = DefiniteClause> + '_ {
        self.clauses.iter().map(|&(body, head)| DefiniteClause { body, head })
    }

    /// Raw `(body mask, head)` pairs in canonical order.
    pub fn raw_clauses(&self) -> &[(u64, u8)] {
        &self.clauses
    }

    /// Does `x` satisfy every clause?
    pub fn is_model_mask(&self, x: u64) -> bool {
        self.clauses
            .iter()
            .all(|&(body, head)| body & !x != 0 || x >> head & 1 == 1)
    }

    /// Does `x` satisfy every clause?
    pub fn is_model(&self, x: &VSet) -> bool {
        self.is_model_mask(x.mask())
    }

    /// One saturation round: `x` plus the heads of all clauses whose body
    /// lies inside `x`.
    pub fn forward_chain_one_step_mask(&self, x: u64) -> u64 {
        let mut next = x;
        for &(body, head) in &self.clauses {
            if body & !x == 0 {
                next |= 1 << head;
            }
        }
        next
    }

    /// One saturation round over vertex sets.
    pub fn forward_chain_one_step(&self, x: &VSet) -> VSet {
        self.ground
            .vset(self.forward_chain_one_step_mask(x.mask()))
            .expect("one step stays inside the ground set")
    }

    /// Least model containing `x`, with the number of rounds that added a
    /// vertex (0 when `x` is already closed).
    pub fn forward_chain_mask(&self, x: u64) -> (u64, usize) {
        let mut current = x;
        let mut steps = 0;
        loop {
            let next = self.forward_chain_one_step_mask(current);
            if next == current {
                return (current, steps);
            }
            current = next;
            steps += 1;
        }
    }

    /// Least model containing `x`, with the round count.
    pub fn forward_chain(&self, x: &VSet) -> (VSet, usize) {
        let (mask, steps) = self.forward_chain_mask(x.mask());
        (self.ground.vset(mask).expect("closure stays inside the ground set"), steps)
    }

    /// Least model containing `x`.
    pub fn closure(&self, x: &VSet) -> VSet {
        self.forward_chain(x).0
    }

    /// Is `x` closed under all clauses (a model)?
    pub fn is_true_set(&self, x: &VSet) -> bool {
        self.is_model(x)
    }

    /// Closure of every subset, indexed by mask. Charged as `2^n` states.
    pub fn closure_table(&self, budget: &Budget) -> Result<Vec<u64>> {
        let n = self.ground.n() as u32;
        budget.charge_log2(n)?;
        let clauses = self.clauses.clone();
        let table = par::map_range(0..1u64 << n, move |x| {
            let mut current = x;
            loop {
                let mut next = current;
                for &(body, head) in &clauses {
                    if body & !current == 0 {
                        next |= 1 << head;
                    }
                }
                if next == current {
                    return current;
                }
                current = next;
            }
        });
        Ok(table)
    }

    /// Is `body -> head` a consequence of the formula? Requires
    /// `head ∉ body`. Holds exactly when the head lies in the body's
    /// closure.
    pub fn is_implicate(&self, body: &VSet, head: usize) -> Result<bool> {
        if head >= self.ground.n() {
            return Err(Error::InvalidInput(format!(
                "head {head} outside ground set of size {}",
                self.ground.n()
            )));
        }
        if body.contains(head) {
            return Err(Error::InvalidInput(format!("head {head} appears in body {body}")));
        }
        let (closed, _) = self.forward_chain_mask(body.mask());
        Ok(closed >> head & 1 == 1)
    }

    /// All prime implicates `B -> v`: consequences where no single body
    /// vertex can be dropped (equivalently, by monotonicity of closure, no
    /// proper sub-body suffices).
    pub fn prime_implicates(&self, budget: &Budget) -> Result<DefiniteCnf> {
        let n = self.ground.n();
        budget.charge((1u64 << n).saturating_mul(n as u64 + 1))?;
        let table = self.closure_table(budget)?;
        let mut out: Vec<(u64, u8)> = Vec::new();
        for body in 0..1u64 << n {
            let derived = table[body as usize] & !body;
            if derived == 0 {
                continue;
            }
            let mut heads = derived;
            while heads != 0 {
                let bit = heads & heads.wrapping_neg();
                heads ^= bit;
                let mut prime = true;
                let mut rest = body;
                while rest != 0 {
                    let u = rest & rest.wrapping_neg();
                    rest ^= u;
                    if table[(body ^ u) as usize] & bit != 0 {
                        prime = false;
                        break;
                    }
                }
                if prime {
                    out.push((body, bit.trailing_zeros() as u8));
                }
            }
        }
        out.sort_unstable_by(clause_cmp);
        Ok(DefiniteCnf { ground: self.ground, clauses: out })
    }

    /// Inclusion-minimal sets whose closure is the whole ground set.
    pub fn minimal_keys(&self, budget: &Budget) -> Result<SetFamily> {
        let n = self.ground.n();
        budget.charge((1u64 << n).saturating_mul(n as u64 + 1))?;
        let table = self.closure_table(budget)?;
        let full = self.ground.full_mask();
        let mut keys: Vec<u64> = Vec::new();
        for x in 0..1u64 << n {
            if table[x as usize] != full {
                continue;
            }
            // Closure is monotone, so minimality only needs single deletions.
            let mut minimal = true;
            let mut rest = x;
            while rest != 0 {
                let u = rest & rest.wrapping_neg();
                rest ^= u;
                if table[(x ^ u) as usize] == full {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                keys.push(x);
            }
        }
        SetFamily::from_masks(self.ground, keys)
    }

    /// Inclusion-maximal closed sets other than the ground set itself.
    pub fn max_nontrivial_true_sets(&self, budget: &Budget) -> Result<SetFamily> {
        let n = self.ground.n();
        budget.charge((1u64 << n).saturating_mul(n as u64 + 1))?;
        let table = self.closure_table(budget)?;
        let full = self.ground.full_mask();
        let mut out: Vec<u64> = Vec::new();
        for x in 0..1u64 << n {
            if table[x as usize] != x || x == full {
                continue;
            }
            // x is maximal iff every proper closed superset is the ground
            // set; by monotonicity it is enough that adding any one vertex
            // closes to the ground set.
            let mut outside = full & !x;
            let mut maximal = true;
            while outside != 0 {
                let v = outside & outside.wrapping_neg();
                outside ^= v;
                if table[(x | v) as usize] != full {
                    maximal = false;
                    break;
                }
            }
            if maximal {
                out.push(x);
            }
        }
        SetFamily::from_masks(self.ground, out)
    }

    /// All closed sets (models).
    pub fn true_sets(&self, budget: &Budget) -> Result<SetFamily> {
        let n = self.ground.n() as u32;
        budget.charge_log2(n)?;
        let mut out = Vec::new();
        for x in 0..1u64 << n {
            if self.is_model_mask(x) {
                out.push(x);
            }
        }
        SetFamily::from_masks(self.ground, out)
    }

    /// The largest subset `S ⊆ x` every element of which is implied by the
    /// rest of `S` (computed by peeling; the result is independent of the
    /// peeling order).
    pub fn core_implicate_set(&self, x: &VSet) -> VSet {
        let mut s = x.mask();
        loop {
            let mut removed = false;
            let mut rest = s;
            while rest != 0 {
                let v = rest & rest.wrapping_neg();
                rest ^= v;
                let (closed, _) = self.forward_chain_mask(s & !v);
                if closed & v == 0 {
                    s &= !v;
                    removed = true;
                }
            }
            if !removed {
                return self.ground.vset(s).expect("core stays inside the ground set");
            }
        }
    }

    /// Do two formulas over the same ground set have the same models?
    pub fn equivalent(&self, other: &DefiniteCnf, budget: &Budget) -> Result<bool> {
        if self.ground != other.ground {
            return Err(Error::GroundSetMismatch {
                left: self.ground.n(),
                right: other.ground.n(),
            });
        }
        let n = self.ground.n() as u32;
        budget.charge_log2(n)?;
        let a = self.clone();
        let b = other.clone();
        Ok(par::all_range(0..1u64 << n, move |x| {
            a.is_model_mask(x) == b.is_model_mask(x)
        }))
    }
}

impl fmt::Display for DefiniteCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.ground.n())?;
        for &(body, head) in &self.clauses {
            for v in 0..self.ground.n() {
                if body >> v & 1 == 1 {
                    write!(f, "{v} ")?;
                }
            }
            writeln!(f, "-> {head}")?;
        }
        Ok(())
    }
}

impl FromStr for DefiniteCnf {
    type Err = Error;

    fn from_str(s: &str) -> Result<DefiniteCnf> {
        let mut ground: Option<GroundSet> = None;
        let mut clauses: Vec<DefiniteClause> = Vec::new();
        for (idx, raw) in s.split('\n').enumerate() {
            let line_no = idx + 1;
            let body_text = raw.split('#').next().unwrap_or("").trim();
            if body_text.is_empty() {
                continue;
            }
            match ground {
                None => {
                    let mut it = body_text.split_whitespace();
                    match (it.next(), it.next(), it.next()) {
                        (Some("n"), Some(num), None) => {
                            let n: usize = num.parse().map_err(|_| {
                                Error::parse(line_no, format!("bad ground set size `{num}`"))
                            })?;
                            ground = Some(
                                GroundSet::new(n).map_err(|e| Error::parse(line_no, e.to_string()))?,
                            );
                        }
                        _ => {
                            return Err(Error::parse(
                                line_no,
                                format!("expected header `n <N>`, found `{body_text}`"),
                            ))
                        }
                    }
                }
                Some(g) => {
                    let (lhs, rhs) = body_text.split_once("->").ok_or_else(|| {
                        Error::parse(line_no, format!("clause `{body_text}` is missing `->`"))
                    })?;
                    let parse_vertex = |tok: &str| -> Result<usize> {
                        let v: usize = tok.parse().map_err(|_| {
                            Error::parse(line_no, format!("bad vertex index `{tok}`"))
                        })?;
                        if v >= g.n() {
                            return Err(Error::parse(
                                line_no,
                                format!("vertex {v} outside ground set of size {}", g.n()),
                            ));
                        }
                        Ok(v)
                    };
                    let mut body = Vec::new();
                    for tok in lhs.split_whitespace() {
                        body.push(parse_vertex(tok)?);
                    }
                    let mut heads = rhs.split_whitespace();
                    let head_tok = heads
                        .next()
                        .ok_or_else(|| Error::parse(line_no, "missing head after `->`"))?;
                    if heads.next().is_some() {
                        return Err(Error::parse(line_no, "definite clauses have exactly one head"));
                    }
                    let head = parse_vertex(head_tok)?;
                    let body = g.vset_from_iter(body).map_err(|e| Error::parse(line_no, e.to_string()))?;
                    clauses.push(
                        DefiniteClause::new(g, body, head)
                            .map_err(|e| Error::parse(line_no, e.to_string()))?,
                    );
                }
            }
        }
        let ground = ground.ok_or_else(|| Error::parse(1, "missing header `n <N>`"))?;
        Ok(DefiniteCnf::new(ground, clauses))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf(n: usize, clauses: &[(&[usize], usize)]) -> DefiniteCnf {
        let g = GroundSet::new(n).unwrap();
        DefiniteCnf::new(
            g,
            clauses.iter().map(|(body, head)| {
                DefiniteClause::new(g, g.vset_from_iter(body.iter().copied()).unwrap(), *head)
                    .unwrap()
            }),
        )
    }

    #[test]
    fn chaining_counts_productive_rounds() {
        let phi = cnf(3, &[(&[0], 1), (&[1], 2)]);
        let g = phi.ground();
        let (closed, steps) = phi.forward_chain(&g.vset_from_iter([0]).unwrap());
        assert_eq!(closed.mask(), 0b111);
        assert_eq!(steps, 2);
        let (closed, steps) = phi.forward_chain(&g.vset(0b111).unwrap());
        assert_eq!(closed.mask(), 0b111);
        assert_eq!(steps, 0);
        let (_, steps) = phi.forward_chain(&g.vset(0).unwrap());
        assert_eq!(steps, 0);
    }

    #[test]
    fn empty_bodies_fire_immediately() {
        let phi = cnf(2, &[(&[], 0), (&[0], 1)]);
        let (closed, steps) = phi.forward_chain_mask(0);
        assert_eq!(closed, 0b11);
        assert_eq!(steps, 2);
    }

    #[test]
    fn one_step_adds_only_direct_heads() {
        let phi = cnf(3, &[(&[0], 1), (&[1], 2)]);
        assert_eq!(phi.forward_chain_one_step_mask(0b001), 0b011);
    }

    #[test]
    fn clause_construction_rejects_head_in_body() {
        let g = GroundSet::new(3).unwrap();
        let body = g.vset_from_iter([0, 1]).unwrap();
        assert!(DefiniteClause::new(g, body, 0).is_err());
        assert!(DefiniteClause::new(g, body, 2).is_ok());
    }

    #[test]
    fn implicates_are_heads_of_closures() {
        let phi = cnf(4, &[(&[0, 1], 2), (&[2], 3)]);
        let g = phi.ground();
        let b01 = g.vset_from_iter([0, 1]).unwrap();
        assert!(phi.is_implicate(&b01, 3).unwrap());
        let b0 = g.vset_from_iter([0]).unwrap();
        assert!(!phi.is_implicate(&b0, 3).unwrap());
        assert!(phi.is_implicate(&b01, 2).unwrap());
        assert!(phi.is_implicate(&g.vset(0b0011).unwrap(), 3).unwrap());
        assert!(phi.is_implicate(&g.vset(0b0111).unwrap(), 3).unwrap());
    }

    /// Oracle: prime implicates by scanning all (body, head) pairs and
    /// checking minimality against every proper sub-body.
    fn prime_implicates_brute(phi: &DefiniteCnf) -> Vec<(u64, u8)> {
        let n = phi.ground().n();
        let mut implicates: Vec<(u64, u8)> = Vec::new();
        for body in 0..1u64 << n {
            let (closed, _) = phi.forward_chain_mask(body);
            for head in 0..n {
                if body >> head & 1 == 0 && closed >> head & 1 == 1 {
                    implicates.push((body, head as u8));
                }
            }
        }
        let mut prime: Vec<(u64, u8)> = Vec::new();
        for &(body, head) in &implicates {
            let dominated = implicates
                .iter()
                .any(|&(b2, h2)| h2 == head && b2 != body && b2 & !body == 0);
            if !dominated {
                prime.push((body, head));
            }
        }
        prime.sort_unstable_by(clause_cmp);
        prime
    }

    #[test]
    fn prime_implicates_match_subset_scan_oracle() {
        let cases = [
            cnf(4, &[(&[0, 1], 2), (&[2], 3), (&[1, 3], 0)]),
            cnf(3, &[(&[], 1), (&[1, 2], 0)]),
            cnf(5, &[(&[0], 1), (&[1], 0), (&[0, 2], 3), (&[3, 4], 2)]),
            cnf(3, &[]),
        ];
        for phi in cases {
            let fast = phi.prime_implicates(&Budget::default()).unwrap();
            assert_eq!(fast.raw_clauses(), prime_implicates_brute(&phi).as_slice());
        }
    }

    #[test]
    fn minimal_keys_match_subset_scan_oracle() {
        let phi = cnf(4, &[(&[0], 1), (&[1], 0), (&[0, 2], 3), (&[1, 3], 2)]);
        let keys = phi.minimal_keys(&Budget::default()).unwrap();
        // Oracle: all closure-spanning sets, filtered to inclusion-minimal.
        let n = phi.ground().n();
        let full = phi.ground().full_mask();
        let spanning: Vec<u64> =
            (0..1u64 << n).filter(|&x| phi.forward_chain_mask(x).0 == full).collect();
        let minimal: Vec<u64> = spanning
            .iter()
            .copied()
            .filter(|&x| !spanning.iter().any(|&y| y != x && y & !x == 0))
            .collect();
        let oracle = SetFamily::from_masks(phi.ground(), minimal).unwrap();
        assert_eq!(keys, oracle);
    }

    #[test]
    fn max_nontrivial_true_sets_match_subset_scan_oracle() {
        let phi = cnf(4, &[(&[0, 1], 2), (&[2, 3], 0)]);
        let fast = phi.max_nontrivial_true_sets(&Budget::default()).unwrap();
        let n = phi.ground().n();
        let full = phi.ground().full_mask();
        let closed: Vec<u64> =
            (0..1u64 << n).filter(|&x| phi.is_model_mask(x) && x != full).collect();
        let maximal: Vec<u64> = closed
            .iter()
            .copied()
            .filter(|&x| !closed.iter().any(|&y| y != x && x & !y == 0))
            .collect();
        let oracle = SetFamily::from_masks(phi.ground(), maximal).unwrap();
        assert_eq!(fast, oracle);
    }

    #[test]
    fn circular_formula_rotates_every_hyperedge() {
        let g = GroundSet::new(3).unwrap();
        let h = SetFamily::from_masks(g, [0b011u64, 0b100]).unwrap();
        let phi = DefiniteCnf::circular(&h);
        let expected = cnf(3, &[(&[1], 0), (&[0], 1), (&[], 2)]);
        assert_eq!(phi, expected);
    }

    #[test]
    fn core_is_order_independent_and_self_implied() {
        let phi = cnf(4, &[(&[0], 1), (&[1], 0), (&[0, 1], 2)]);
        let g = phi.ground();
        let x = g.vset(0b0111).unwrap();
        let core = phi.core_implicate_set(&x);
        assert_eq!(core.mask(), 0b0111); // 0↔1 and 01→2: every element recoverable
        let y = g.vset(0b1011).unwrap();
        let core_y = phi.core_implicate_set(&y);
        assert_eq!(core_y.mask(), 0b0011); // 3 is never a head; 2 ∉ y
        // Every element of the core is implied by the rest of the core.
        for v in core_y.iter() {
            assert!(phi.is_implicate(&core_y.without(v), v).unwrap());
        }
    }

    #[test]
    fn equivalence_compares_models() {
        let a = cnf(3, &[(&[0], 1), (&[1], 2)]);
        let b = cnf(3, &[(&[0], 1), (&[1], 2), (&[0], 2)]); // redundant clause
        assert!(a.equivalent(&b, &Budget::default()).unwrap());
        let c = cnf(3, &[(&[0], 1)]);
        assert!(!a.equivalent(&c, &Budget::default()).unwrap());
    }

    #[test]
    fn format_round_trips() {
        let phi = cnf(4, &[(&[0, 1], 2), (&[], 3), (&[2, 3], 0)]);
        let text = phi.to_string();
        assert_eq!(text, "n 4\n2 3 -> 0\n0 1 -> 2\n-> 3\n");
        let back: DefiniteCnf = text.parse().unwrap();
        assert_eq!(back, phi);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = "n 3\n0 1 -> 9\n".parse::<DefiniteCnf>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = "n 3\n0 1 2\n".parse::<DefiniteCnf>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = "n 3\n0 -> 0\n".parse::<DefiniteCnf>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn true_sets_are_the_models() {
        let phi = cnf(3, &[(&[0], 1)]);
        let t = phi.true_sets(&Budget::default()).unwrap();
        let expected: Vec<u64> = (0..8u64).filter(|&x| !(x & 1 == 1 && x & 2 == 0)).collect();
        let oracle = SetFamily::from_masks(phi.ground(), expected).unwrap();
        assert_eq!(t, oracle);
    }
}
