//! Ground sets, vertex sets, and finite set families with the four
//! operators everything else is built from.
//!
//! A ground set is `{0, 1, …, n−1}` with `n ≤ 64`; a vertex set is a `u64`
//! bitmask over it (vertex `i` ↔ bit `i`). A [`SetFamily`] keeps its members
//! in *canonical order*: ascending by size, ties broken by the numeric value
//! of the bitmask. All serialization and reporting uses that order, so equal
//! families always print identically.
//!
//! The four structural operators:
//!
//! * [`SetFamily::complement_family`] — replace every member by its
//!   complement in the ground set.
//! * [`SetFamily::minimal_transversals`] — the minimal sets meeting every
//!   member (the dual hypergraph). Conventions: the empty family has the
//!   single transversal `∅`; the family `{∅}` has none at all; any other
//!   family containing `∅` is rejected.
//! * [`SetFamily::intersection_closure`] — all intersections of subfamilies;
//!   the empty intersection is the full ground set, which is therefore
//!   always a member.
//! * [`SetFamily::union_closure`] — all unions of subfamilies; the empty
//!   union makes `∅` always a member.
//!
//! # Text format
//!
//! A family is stored as a header line `n <N>` followed by one line per
//! member: the member's vertices in ascending order, space-separated. A
//! blank line denotes the empty set. `#` starts a comment running to the
//! end of the line; lines that contain only a comment are skipped entirely
//! (they do *not* denote the empty set). A trailing newline at end of file
//! is not a member.

use std::fmt;
use std::str::FromStr;

use crate::budget::Budget;
use crate::error::{Error, Result};

/// The ground set `{0, …, n−1}`, `1 ≤ n ≤ 64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    /// A ground set with `n` vertices; `1 ≤ n ≤ 64`.
    pub fn new(n: usize) -> Result<GroundSet> {
        if n == 0 || n > 64 {
            return Err(Error::BadParams(format!("ground set size {n} outside 1..=64")));
        }
        Ok(GroundSet { n })
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Bitmask with all `n` vertex bits set.
    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            !0
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// The full ground set as a vertex set.
    pub fn universe(&self) -> VSet {
        VSet { ground: *self, mask: self.full_mask() }
    }

    /// The empty vertex set.
    pub fn empty(&self) -> VSet {
        VSet { ground: *self, mask: 0 }
    }

    /// Vertex set from a bitmask, which must stay inside the ground set.
    pub fn vset(&self, mask: u64) -> Result<VSet> {
        if mask & !self.full_mask() != 0 {
            return Err(Error::InvalidInput(format!(
                "bitmask {mask:#x} has vertices outside a {}-element ground set",
                self.n
            )));
        }
        Ok(VSet { ground: *self, mask })
    }

    /// Vertex set from explicit vertex indices.
    pub fn vset_from_iter(&self, vs: impl IntoIterator<Item = usize>) -> Result<VSet> {
        let mut mask = 0u64;
        for v in vs {
            if v >= self.n {
                return Err(Error::InvalidInput(format!(
                    "vertex {v} outside a {}-element ground set",
                    self.n
                )));
            }
            mask |= 1 << v;
        }
        Ok(VSet { ground: *self, mask })
    }
}

/// A subset of a ground set, stored as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VSet {
    ground: GroundSet,
    mask: u64,
}

impl VSet {
    /// The owning ground set.
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    /// Raw bitmask (vertex `i` ↔ bit `i`).
    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Number of vertices in the set.
    pub fn card(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Is this the empty set?
    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Does the set contain vertex `v`?
    pub fn contains(&self, v: usize) -> bool {
        v < self.ground.n && self.mask >> v & 1 == 1
    }

    /// Is `self ⊆ other`?
    pub fn is_subset_of(&self, other: &VSet) -> bool {
        self.mask & !other.mask == 0
    }

    /// Set with vertex `v` added.
    pub fn with(&self, v: usize) -> VSet {
        debug_assert!(v < self.ground.n);
        VSet { ground: self.ground, mask: self.mask | 1 << v }
    }

    /// Set with vertex `v` removed.
    pub fn without(&self, v: usize) -> VSet {
        VSet { ground: self.ground, mask: self.mask & !(1 << v) }
    }

    /// Union.
    pub fn union(&self, other: &VSet) -> VSet {
        VSet { ground: self.ground, mask: self.mask | other.mask }
    }

    /// Intersection.
    pub fn intersect(&self, other: &VSet) -> VSet {
        VSet { ground: self.ground, mask: self.mask & other.mask }
    }

    /// Set difference `self ∖ other`.
    pub fn minus(&self, other: &VSet) -> VSet {
        VSet { ground: self.ground, mask: self.mask & !other.mask }
    }

    /// Complement within the ground set.
    pub fn complement(&self) -> VSet {
        VSet { ground: self.ground, mask: !self.mask & self.ground.full_mask() }
    }

    /// Ascending iterator over the vertices in the set.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mask = self.mask;
        (0..self.ground.n).filter(move |&v| mask >> v & 1 == 1)
    }
}

impl fmt::Display for VSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for v in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// Canonical member order: ascending size, then ascending bitmask value.
pub fn canonical_cmp(a: u64, b: u64) -> std::cmp::Ordering {
    a.count_ones().cmp(&b.count_ones()).then(a.cmp(&b))
}

/// Ascending iterator over all masks of `size` bits inside an `n`-bit
/// universe (Gosper's hack); masks come out in increasing numeric order.
pub fn masks_of_size(n: usize, size: usize) -> impl Iterator<Item = u64> {
    let full = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
    let first = if size == 64 { !0u64 } else { (1u64 << size) - 1 };
    let mut cur = if size > n { None } else { Some(first) };
    std::iter::from_fn(move || {
        let mask = cur?;
        cur = match mask & mask.wrapping_neg() {
            0 => None, // mask == 0: the single empty set
            c => match mask.checked_add(c) {
                None => None, // the ones block ran off the top of the word
                Some(r) => {
                    let next = (((r ^ mask) >> 2) / c) | r;
                    (next & !full == 0).then_some(next)
                }
            },
        };
        Some(mask)
    })
}

/// All `2^n` masks of an `n`-bit universe in canonical order (size, then
/// numeric value). Only sensible for small `n`; callers budget-check first.
pub fn all_masks_canonical(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(1usize << n);
    for k in 0..=n {
        out.extend(masks_of_size(n, k));
    }
    out
}

/// A finite family of subsets of one ground set, kept deduplicated and in
/// canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    ground: GroundSet,
    sets: Vec<u64>,
}

impl SetFamily {
    /// The empty family over `ground`.
    pub fn empty(ground: GroundSet) -> SetFamily {
        SetFamily { ground, sets: Vec::new() }
    }

    /// Family from raw masks; sorts canonically, deduplicates, and checks
    /// every mask fits the ground set.
    pub fn from_masks(ground: GroundSet, masks: impl IntoIterator<Item = u64>) -> Result<SetFamily> {
        let mut sets: Vec<u64> = Vec::new();
        for m in masks {
            if m & !ground.full_mask() != 0 {
                return Err(Error::InvalidInput(format!(
                    "bitmask {m:#x} has vertices outside a {}-element ground set",
                    ground.n
                )));
            }
            sets.push(m);
        }
        sets.sort_unstable_by(|&a, &b| canonical_cmp(a, b));
        sets.dedup();
        Ok(SetFamily { ground, sets })
    }

    /// Family holding the given vertex sets (all over the same ground set).
    pub fn from_sets(ground: GroundSet, sets: impl IntoIterator<Item = VSet>) -> Result<SetFamily> {
        let mut masks = Vec::new();
        for s in sets {
            if s.ground != ground {
                return Err(Error::GroundSetMismatch { left: ground.n, right: s.ground.n });
            }
            masks.push(s.mask);
        }
        SetFamily::from_masks(ground, masks)
    }

    /// The owning ground set.
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    /// Number of member sets.
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    /// Is the family empty (no members at all)?
    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Member masks in canonical order.
    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    /// Members as vertex sets, canonical order.
    pub fn iter(&self) -> impl Iterator<Item = VSet> + '_ {
        let ground = self.ground;
        self.sets.iter().map(move |&mask| VSet { ground, mask })
    }

    /// Is `mask` a member?
    pub fn contains_mask(&self, mask: u64) -> bool {
        // Canonical order is a total order, so membership is a binary search.
        self.sets.binary_search_by(|&m| canonical_cmp(m, mask)).is_ok()
    }

    /// Does the family have a member that is a subset of `mask`?
    pub fn has_member_within(&self, mask: u64) -> bool {
        self.sets.iter().any(|&m| m & !mask == 0)
    }

    /// Does the family have a member containing `mask`?
    pub fn has_member_containing(&self, mask: u64) -> bool {
        self.sets.iter().any(|&m| mask & !m == 0)
    }

    /// `x` is independent of this family viewed as forbidden sets: no
    /// member is a subset of `x`.
    pub fn is_independent(&self, x: &VSet) -> bool {
        !self.has_member_within(x.mask)
    }

    /// Is the family an antichain (no member contained in another)?
    pub fn is_sperner(&self) -> bool {
        // Members are sorted by size, so containment can only point backwards.
        for (i, &outer) in self.sets.iter().enumerate() {
            for &inner in &self.sets[..i] {
                if inner & !outer == 0 && inner != outer {
                    return false;
                }
            }
        }
        true
    }

    /// First containment violating the antichain property, canonical order.
    pub fn sperner_violation(&self) -> Option<(VSet, VSet)> {
        for (i, &outer) in self.sets.iter().enumerate() {
            for &inner in &self.sets[..i] {
                if inner & !outer == 0 && inner != outer {
                    return Some((
                        VSet { ground: self.ground, mask: inner },
                        VSet { ground: self.ground, mask: outer },
                    ));
                }
            }
        }
        None
    }

    /// The inclusion-minimal members.
    pub fn minimal_sets(&self) -> SetFamily {
        let mut keep: Vec<u64> = Vec::new();
        // Canonical order puts smaller sets first, so each member only needs
        // checking against already-kept (smaller or equal sized) members.
        for &m in &self.sets {
            if !keep.iter().any(|&k| k & !m == 0) {
                keep.push(m);
            }
        }
        SetFamily { ground: self.ground, sets: keep }
    }

    /// The inclusion-maximal members.
    pub fn maximal_sets(&self) -> SetFamily {
        let mut keep: Vec<u64> = Vec::new();
        for &m in self.sets.iter().rev() {
            if !keep.iter().any(|&k| m & !k == 0) {
                keep.push(m);
            }
        }
        keep.reverse();
        SetFamily { ground: self.ground, sets: keep }
    }

    /// Complementwise image: `{V ∖ S : S ∈ family}`.
    pub fn complement_family(&self) -> SetFamily {
        let full = self.ground.full_mask();
        let mut sets: Vec<u64> = self.sets.iter().map(|&m| !m & full).collect();
        sets.sort_unstable_by(|&a, &b| canonical_cmp(a, b));
        SetFamily { ground: self.ground, sets }
    }

    /// Is `x` a transversal (does it intersect every member)?
    pub fn is_transversal(&self, x: &VSet) -> bool {
        self.sets.iter().all(|&m| m & x.mask != 0)
    }

    /// The family of all inclusion-minimal transversals.
    ///
    /// Conventions: the empty family dualizes to `{∅}`; `{∅}` dualizes to
    /// the empty family; any other family containing `∅` is an error since
    /// nothing can intersect the empty set.
    pub fn minimal_transversals(&self, budget: &Budget) -> Result<SetFamily> {
        if self.sets.is_empty() {
            return SetFamily::from_masks(self.ground, [0u64]);
        }
        if self.sets == [0] {
            return Ok(SetFamily::empty(self.ground));
        }
        if self.sets[0] == 0 {
            return Err(Error::EmptyHyperedge);
        }
        let meter = budget.meter();
        // Multiply one hyperedge at a time, keeping the partial result
        // minimal by absorption after each step.
        let mut trans: Vec<u64> = vec![0];
        for &edge in &self.sets {
            let mut cand: Vec<u64> = Vec::with_capacity(trans.len());
            for &t in &trans {
                if t & edge != 0 {
                    cand.push(t);
                } else {
                    let mut rest = edge;
                    while rest != 0 {
                        let bit = rest & rest.wrapping_neg();
                        cand.push(t | bit);
                        rest ^= bit;
                    }
                }
            }
            meter.tick(cand.len() as u64)?;
            cand.sort_unstable_by(|&a, &b| canonical_cmp(a, b));
            cand.dedup();
            // Absorption sweep in canonical order: a strict subset has
            // strictly fewer vertices, so each candidate only needs checking
            // against the kept sets from earlier size classes.
            let mut kept: Vec<u64> = Vec::with_capacity(cand.len());
            let mut smaller_end = 0usize;
            let mut cur_size = 0u32;
            for &c in &cand {
                let size = c.count_ones();
                if size > cur_size {
                    smaller_end = kept.len();
                    cur_size = size;
                }
                meter.tick(1 + smaller_end as u64 / 16)?;
                if !kept[..smaller_end].iter().any(|&k| k & !c == 0) {
                    kept.push(c);
                }
            }
            trans = kept;
        }
        Ok(SetFamily { ground: self.ground, sets: trans })
    }

    /// Closure under pairwise (hence arbitrary) intersection. The empty
    /// intersection is the ground set, so the result always contains it.
    pub fn intersection_closure(&self, budget: &Budget) -> Result<SetFamily> {
        let meter = budget.meter();
        let mut closed: Vec<u64> = vec![self.ground.full_mask()];
        for &m in &self.sets {
            let mut add: Vec<u64> = Vec::new();
            for &c in &closed {
                let x = c & m;
                if !closed.contains(&x) && !add.contains(&x) {
                    add.push(x);
                }
            }
            meter.tick((closed.len() + add.len()) as u64)?;
            closed.extend(add);
        }
        closed.sort_unstable_by(|&a, &b| canonical_cmp(a, b));
        Ok(SetFamily { ground: self.ground, sets: closed })
    }

    /// Closure under pairwise (hence arbitrary) union. The empty union is
    /// `∅`, so the result always contains it.
    pub fn union_closure(&self, budget: &Budget) -> Result<SetFamily> {
        let meter = budget.meter();
        let mut closed: Vec<u64> = vec![0];
        for &m in &self.sets {
            let mut add: Vec<u64> = Vec::new();
            for &c in &closed {
                let x = c | m;
                if !closed.contains(&x) && !add.contains(&x) {
                    add.push(x);
                }
            }
            meter.tick((closed.len() + add.len()) as u64)?;
            closed.extend(add);
        }
        closed.sort_unstable_by(|&a, &b| canonical_cmp(a, b));
        Ok(SetFamily { ground: self.ground, sets: closed })
    }
}

/// Maximal independent-set complements: the bases of a circuit family,
/// computed as the complements of the minimal transversals
/// (`bases = C^{dc}`). The input must be an antichain.
pub fn bases_of(circuits: &SetFamily, budget: &Budget) -> Result<SetFamily> {
    require_sperner(circuits)?;
    Ok(circuits.minimal_transversals(budget)?.complement_family())
}

/// Inverse of [`bases_of`]: the minimal sets dependent on every exchange,
/// computed as `circuits = B^{cd}`. The input must be an antichain.
pub fn circuits_of(bases: &SetFamily, budget: &Budget) -> Result<SetFamily> {
    require_sperner(bases)?;
    bases.complement_family().minimal_transversals(budget)
}

fn require_sperner(f: &SetFamily) -> Result<()> {
    if let Some((inner, outer)) = f.sperner_violation() {
        return Err(Error::NotSperner { inner: inner.to_string(), outer: outer.to_string() });
    }
    Ok(())
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.ground.n)?;
        for &m in &self.sets {
            let mut first = true;
            for v in 0..self.ground.n {
                if m >> v & 1 == 1 {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "{v}")?;
                    first = false;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for SetFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<SetFamily> {
        let mut lines: Vec<&str> = s.split('\n').collect();
        // A trailing newline produces one final empty segment; it is an
        // artifact of the encoding, not an empty-set member.
        if lines.last() == Some(&"") {
            lines.pop();
        }
        let mut ground: Option<GroundSet> = None;
        let mut masks: Vec<u64> = Vec::new();
        for (idx, raw) in lines.iter().enumerate() {
            let line_no = idx + 1;
            let had_comment = raw.contains('#');
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                if had_comment {
                    continue; // comment-only line
                }
                match ground {
                    // blank line after the header: the empty set
                    Some(_) => masks.push(0),
                    None => {
                        return Err(Error::parse(line_no, "expected header `n <N>` first"))
                    }
                }
                continue;
            }
            match ground {
                None => {
                    let mut it = body.split_whitespace();
                    match (it.next(), it.next(), it.next()) {
                        (Some("n"), Some(num), None) => {
                            let n: usize = num.parse().map_err(|_| {
                                Error::parse(line_no, format!("bad ground set size `{num}`"))
                            })?;
                            ground = Some(GroundSet::new(n).map_err(|e| {
                                Error::parse(line_no, e.to_string())
                            })?);
                        }
                        _ => {
                            return Err(Error::parse(
                                line_no,
                                format!("expected header `n <N>`, found `{body}`"),
                            ))
                        }
                    }
                }
                Some(g) => {
                    let mut mask = 0u64;
                    for tok in body.split_whitespace() {
                        let v: usize = tok.parse().map_err(|_| {
                            Error::parse(line_no, format!("bad vertex index `{tok}`"))
                        })?;
                        if v >= g.n() {
                            return Err(Error::parse(
                                line_no,
                                format!("vertex {v} outside ground set of size {}", g.n()),
                            ));
                        }
                        mask |= 1 << v;
                    }
                    masks.push(mask);
                }
            }
        }
        let ground = ground.ok_or_else(|| Error::parse(1, "missing header `n <N>`"))?;
        SetFamily::from_masks(ground, masks)
    }
}
