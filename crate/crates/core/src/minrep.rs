//! Minimum-size representations of matroid circuit families.
//!
//! A circuit family `C` can be presented more compactly than by listing every
//! circuit. This module measures three such presentations:
//!
//! * a **generator** subfamily `G ⊆ C` that recovers all of `C` through
//!   repeated elimination products ([`generate_closure`]),
//! * a **circuit subsystem** `D ⊆ C` whose circular formula already proves
//!   every membership implication `v ∈ T(C − v)` of the full family,
//! * a bare **clause set** drawn from the circular formula of `C`.
//!
//! [`min_generator`], [`min_circuit_subsystem`] and [`min_circuit_clauses`]
//! compute exact minima by certificate-first exhaustive search: items whose
//! removal breaks validity are forced into every solution, and when the
//! forced items alone are valid the minimum is certified without
//! enumeration. For simple binary matroids the chordless circuits
//! ([`chordless_circuits`]) are that forced set, and for uniform matroids
//! closed-form constructions ([`uniform_interval_generator`],
//! [`uniform_star_representation`], [`covering_doubling_representation`],
//! [`rank2_group_representation`], [`uniform_clause_representation`])
//! give small witnesses directly.

use std::collections::BTreeMap;

use crate::budget::{Budget, Meter};
use crate::designs;
use crate::error::{Error, Result};
use crate::horn::{DefiniteClause, DefiniteCnf};
use crate::matroid::{binomial, Matroid};
use crate::par;
use crate::set_family::{canonical_cmp, masks_of_size, GroundSet, SetFamily, VSet};

/// Largest item pool the exact searches will index (pools are tracked as
/// 128-bit subsets).
const POOL_LIMIT: usize = 128;

/// Above this many candidate subsets per size level, the subsystem search
/// switches from plain lexicographic enumeration to branch-and-bound.
const COMBO_LIMIT: u64 = 2_000_000;

// ---------------------------------------------------------------------------
// Generation by elimination products
// ---------------------------------------------------------------------------

/// One round of elimination products inside `f`: the result is `g` together
/// with every set `(x₁ ∪ x₂) − v` that lies in `f`, for distinct members
/// `x₁, x₂` of `g` and `v ∈ x₁ ∩ x₂`.
///
/// Errors with [`Error::SubsetViolation`] if `g` is not a subfamily of `f`.
pub fn generate_one_step(g: &SetFamily, f: &SetFamily, budget: &Budget) -> Result<SetFamily> {
    check_subfamily(g, f)?;
    let meter = budget.meter();
    let mut out: Vec<u64> = g.masks().to_vec();
    for (i, &a) in g.masks().iter().enumerate() {
        for &b in &g.masks()[..i] {
            meter.tick(1)?;
            let mut common = a & b;
            let union = a | b;
            while common != 0 {
                let v = common & common.wrapping_neg();
                common ^= v;
                let product = union & !v;
                if f.contains_mask(product) {
                    out.push(product);
                }
            }
        }
    }
    SetFamily::from_masks(g.ground(), out)
}

/// Iterates [`generate_one_step`] to a fixed point. Returns the closure
/// `⟨g⟩` inside `f` and the number of productive rounds (0 when `g` is
/// already closed; the closure of the empty family is empty).
pub fn generate_closure(
    g: &SetFamily,
    f: &SetFamily,
    budget: &Budget,
) -> Result<(SetFamily, usize)> {
    check_subfamily(g, f)?;
    let mut cur = g.clone();
    let mut rounds = 0;
    loop {
        let next = generate_one_step(&cur, f, budget)?;
        if next.len() == cur.len() {
            return Ok((cur, rounds));
        }
        cur = next;
        rounds += 1;
    }
}

fn check_subfamily(g: &SetFamily, f: &SetFamily) -> Result<()> {
    if g.ground() != f.ground() {
        return Err(Error::GroundSetMismatch {
            left: g.ground().n(),
            right: f.ground().n(),
        });
    }
    for &m in g.masks() {
        if !f.contains_mask(m) {
            return Err(Error::SubsetViolation(format!(
                "{} is not a member of the ambient family",
                g.ground().vset(m).expect("mask fits the shared ground set")
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Chordless circuits
// ---------------------------------------------------------------------------

/// The chordless circuits of a simple binary matroid: circuits `c` with no
/// shorter circuit `c'` satisfying `|c' ∖ c| = 1`.
///
/// Requires a simple matroid constructed from a binary matrix; errors with
/// [`Error::NotSimpleBinary`] otherwise.
pub fn chordless_circuits(m: &Matroid) -> Result<SetFamily> {
    if !m.is_binary() || !m.is_simple() {
        return Err(Error::NotSimpleBinary(
            "chordless circuits are only defined here for simple binary matroids".into(),
        ));
    }
    let masks = m.circuits().masks();
    let keep = masks.iter().copied().filter(|&c| {
        !masks
            .iter()
            .any(|&d| d != c && d.count_ones() < c.count_ones() && (d & !c).count_ones() == 1)
    });
    SetFamily::from_masks(m.ground(), keep)
}

// ---------------------------------------------------------------------------
// Representation costs
// ---------------------------------------------------------------------------

/// Which size measure a representation minimizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Fewest circuits generating the family by elimination products.
    Generator,
    /// Fewest circuits whose circular formula proves all membership
    /// implications of the full family.
    Circuits,
    /// Fewest individual clauses from the circular formula doing the same.
    Clauses,
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Objective::Generator => "generator",
            Objective::Circuits => "circuits",
            Objective::Clauses => "clauses",
        })
    }
}

/// How a minimum (or bound) is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Certificate-first exhaustive search; always exact.
    Exact,
    /// Use the chordless circuits of a simple binary matroid, reporting
    /// exactness only when the removal certificate confirms them.
    Chordless,
    /// Closed-form construction for uniform matroids.
    Uniform,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Chordless => "chordless",
            Method::Uniform => "uniform",
        })
    }
}

/// A verified witness achieving a reported representation size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A subfamily of the circuit family.
    Circuits(SetFamily),
    /// A subset of the circular formula's clauses.
    Clauses(DefiniteCnf),
}

impl Witness {
    /// Number of circuits or clauses in the witness.
    pub fn len(&self) -> usize {
        match self {
            Witness::Circuits(f) => f.len(),
            Witness::Clauses(c) => c.len(),
        }
    }

    /// Is the witness empty?
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Result of a representation-size computation.
#[derive(Clone, Debug)]
pub struct RepresentationCost {
    /// The measure that was minimized.
    pub objective: Objective,
    /// Witness size; the exact minimum when `exact` is true, otherwise an
    /// upper bound.
    pub value: usize,
    /// A witness of size `value` that verifies under the objective's
    /// validity predicate.
    pub witness: Witness,
    /// Whether `value` is certified to be the minimum.
    pub exact: bool,
    /// `Some(true)` when the minimum witness is certified unique,
    /// `Some(false)` when another minimum witness was found, `None` when
    /// uniqueness was not determined.
    pub unique: Option<bool>,
}

// ---------------------------------------------------------------------------
// Shared search machinery
// ---------------------------------------------------------------------------

/// Requirement table of a circuit family: for every circuit `c` and `v ∈ c`,
/// the body `c − v` must derive `v`. Grouped per body, in canonical body
/// order.
fn closure_requirements(circuits: &SetFamily) -> Vec<(u64, u64)> {
    let mut map: BTreeMap<u64, u64> = BTreeMap::new();
    for &c in circuits.masks() {
        let mut rest = c;
        while rest != 0 {
            let v = rest & rest.wrapping_neg();
            rest ^= v;
            *map.entry(c & !v).or_insert(0) |= v;
        }
    }
    let mut reqs: Vec<(u64, u64)> = map.into_iter().collect();
    reqs.sort_unstable_by(|a, b| canonical_cmp(a.0, b.0));
    reqs
}

/// Forward-chaining closure of `start` under the circuits of `pool` selected
/// by `chosen`: a circuit with exactly one member outside the current set
/// pulls that member in.
fn circuit_chain_mask(pool: &[u64], chosen: u128, start: u64) -> u64 {
    let mut x = start;
    loop {
        let mut changed = false;
        let mut bits = chosen;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let missing = pool[i] & !x;
            if missing != 0 && missing & (missing - 1) == 0 {
                x |= missing;
                changed = true;
            }
        }
        if !changed {
            return x;
        }
    }
}

/// Forward-chaining closure of `start` under the selected clauses.
fn clause_chain_mask(pool: &[(u64, u8)], chosen: u128, start: u64) -> u64 {
    let mut x = start;
    loop {
        let mut changed = false;
        let mut bits = chosen;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (body, head) = pool[i];
            let head_bit = 1u64 << head;
            if body & !x == 0 && x & head_bit == 0 {
                x |= head_bit;
                changed = true;
            }
        }
        if !changed {
            return x;
        }
    }
}

fn subsystem_valid(pool: &[u64], chosen: u128, reqs: &[(u64, u64)]) -> bool {
    reqs.iter()
        .all(|&(body, heads)| heads & !circuit_chain_mask(pool, chosen, body) == 0)
}

fn clauses_valid(pool: &[(u64, u8)], chosen: u128, reqs: &[(u64, u64)]) -> bool {
    reqs.iter()
        .all(|&(body, heads)| heads & !clause_chain_mask(pool, chosen, body) == 0)
}

fn pool_all(plen: usize) -> u128 {
    if plen == 128 {
        !0
    } else {
        (1u128 << plen) - 1
    }
}

/// Items whose removal from the full pool breaks validity. Every such item
/// belongs to every valid subset (validity is monotone under adding items),
/// so the returned set is a lower-bound certificate.
fn essential_items(
    plen: usize,
    valid: &mut impl FnMut(u128) -> Result<bool>,
) -> Result<u128> {
    let all = pool_all(plen);
    let mut e = 0u128;
    for i in 0..plen {
        if !valid(all & !(1u128 << i))? {
            e |= 1u128 << i;
        }
    }
    Ok(e)
}

/// Scans all size-`t` completions of the essential set (in lexicographic
/// pool order) for validity. Returns the first valid subset and whether it
/// was the only one at this size. Because every valid subset contains the
/// essentials and completions are enumerated lexicographically, the first
/// hit is the lexicographically least witness of this size.
fn combo_level(
    e_mask: u128,
    rest: &[usize],
    t: usize,
    meter: &Meter,
    valid: &mut impl FnMut(u128) -> Result<bool>,
) -> Result<Option<(u128, bool)>> {
    if t > rest.len() {
        return Ok(None);
    }
    let mut idx: Vec<usize> = (0..t).collect();
    let mut first: Option<u128> = None;
    loop {
        meter.tick(1)?;
        let mut mask = e_mask;
        for &p in &idx {
            mask |= 1u128 << rest[p];
        }
        if valid(mask)? {
            match first {
                None => first = Some(mask),
                Some(w) => return Ok(Some((w, false))),
            }
        }
        // Advance to the next combination of `rest` indices.
        let mut i = t;
        loop {
            if i == 0 {
                return Ok(first.map(|w| (w, true)));
            }
            i -= 1;
            if idx[i] != i + rest.len() - t {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Pool items that can produce the first new derivation from `body`:
/// for circuits, those with exactly one member outside `body`.
fn circuit_servers(pool: &[u64], body: u64) -> Vec<u16> {
    pool.iter()
        .enumerate()
        .filter(|&(_, &h)| (h & !body).count_ones() == 1)
        .map(|(i, _)| i as u16)
        .collect()
}

// ---------------------------------------------------------------------------
// Branch-and-bound for the circuit-subsystem objective
// ---------------------------------------------------------------------------

/// Depth-first search state for minimum circuit subsystems. Branches on the
/// first requirement body with no first-step server, or failing that on the
/// first body whose closure stalls; in both cases any valid superset must
/// contain one of the enumerated candidates, and candidates already explored
/// are forbidden in later branches, so each valid subset is visited once.
#[derive(Clone)]
struct SubsystemSearch<'a> {
    pool: &'a [u64],
    reqs: &'a [(u64, u64)],
    /// Per requirement, the pool items serving its first step.
    servers: &'a [Vec<u16>],
    /// Per pool item, the requirements it serves.
    serves: &'a [Vec<u16>],
    /// Largest number of requirements any single item serves.
    max_serve: usize,
    /// `Some(r)` enables the facet-slot bound for the uniform case where
    /// every circuit has `r + 1` members and every body needs the whole
    /// ground set.
    slot_r: Option<u32>,
    served: Vec<u32>,
    unserved: usize,
    chosen: Vec<u16>,
    chosen_mask: u128,
}

impl<'a> SubsystemSearch<'a> {
    fn choose(&mut self, i: u16) {
        for &r in &self.serves[i as usize] {
            if self.served[r as usize] == 0 {
                self.unserved -= 1;
            }
            self.served[r as usize] += 1;
        }
        self.chosen.push(i);
        self.chosen_mask |= 1u128 << i;
    }

    fn unchoose(&mut self, i: u16) {
        for &r in &self.serves[i as usize] {
            self.served[r as usize] -= 1;
            if self.served[r as usize] == 0 {
                self.unserved += 1;
            }
        }
        self.chosen.pop();
        self.chosen_mask &= !(1u128 << i);
    }

    /// Chosen circuits sharing all but one member with no other chosen
    /// circuit. In a valid uniform subsystem every member has such a
    /// partner (the closure of each of its bodies must grow past the
    /// circuit itself, and the first step beyond it is a partner), and one
    /// future circuit can fix at most `r + 1` deficits (partner slots and
    /// unserved-body slots occupy distinct members of that circuit).
    fn lonely_count(&self, r: u32) -> usize {
        self.chosen
            .iter()
            .filter(|&&i| {
                !self.chosen.iter().any(|&j| {
                    j != i && (self.pool[i as usize] & self.pool[j as usize]).count_ones() == r
                })
            })
            .count()
    }

    fn dfs(&mut self, k: usize, meter: &Meter, mut forbidden: u128) -> Result<Option<u128>> {
        meter.tick(1)?;
        let slack = k - self.chosen.len();
        if self.unserved > 0 {
            if (self.unserved + self.max_serve - 1) / self.max_serve > slack {
                return Ok(None);
            }
            if let Some(r) = self.slot_r {
                if self.unserved + self.lonely_count(r) > (r as usize + 1) * slack {
                    return Ok(None);
                }
            }
            let b = self
                .served
                .iter()
                .position(|&c| c == 0)
                .expect("an unserved requirement exists");
            for ci in 0..self.servers[b].len() {
                let i = self.servers[b][ci];
                if forbidden & (1u128 << i) != 0 {
                    continue;
                }
                self.choose(i);
                let got = self.dfs(k, meter, forbidden)?;
                self.unchoose(i);
                if got.is_some() {
                    return Ok(got);
                }
                forbidden |= 1u128 << i;
            }
            return Ok(None);
        }
        // Every requirement has a first step; check full closures.
        meter.tick(self.reqs.len() as u64 * self.chosen.len() as u64 / 8 + 1)?;
        let mut stalled: Option<u64> = None;
        for &(body, heads) in self.reqs {
            let closure = circuit_chain_mask(self.pool, self.chosen_mask, body);
            if heads & !closure != 0 {
                stalled = Some(closure);
                break;
            }
        }
        let Some(s) = stalled else {
            return Ok(Some(self.chosen_mask));
        };
        if slack == 0 {
            return Ok(None);
        }
        for i in 0..self.pool.len() as u16 {
            let bit = 1u128 << i;
            if self.chosen_mask & bit != 0 || forbidden & bit != 0 {
                continue;
            }
            if (self.pool[i as usize] & !s).count_ones() != 1 {
                continue;
            }
            self.choose(i);
            let got = self.dfs(k, meter, forbidden)?;
            self.unchoose(i);
            if got.is_some() {
                return Ok(got);
            }
            forbidden |= bit;
        }
        Ok(None)
    }

    /// One size level, splitting the root branching across worker threads.
    /// Branch `i` forbids the candidates of branches `0..i`, so the
    /// subtrees partition the search space and the lowest-index success is
    /// returned deterministically.
    fn run_level(&self, k: usize, meter: &Meter) -> Result<Option<u128>> {
        if self.unserved == 0 || self.chosen.len() >= k {
            let mut solo = self.clone();
            return solo.dfs(k, meter, 0);
        }
        let b = self
            .served
            .iter()
            .position(|&c| c == 0)
            .expect("an unserved requirement exists");
        let cands = &self.servers[b];
        let found = par::find_map_first_index(cands.len(), |ci| {
            let mut branch = self.clone();
            branch.choose(cands[ci]);
            let mut forbidden = 0u128;
            for &c in &cands[..ci] {
                forbidden |= 1u128 << c;
            }
            match branch.dfs(k, meter, forbidden) {
                Ok(None) => None,
                Ok(Some(w)) => Some(Ok(w)),
                Err(e) => Some(Err(e)),
            }
        });
        found.transpose()
    }
}

// ---------------------------------------------------------------------------
// Minimum generator
// ---------------------------------------------------------------------------

/// Minimum number of circuits that generate the whole circuit family of `m`
/// by elimination products.
///
/// `Method::Exact` certifies the minimum (and uniqueness);
/// `Method::Chordless` requires a simple binary matroid. The uniform method
/// does not apply to this objective.
pub fn min_generator(m: &Matroid, method: Method, budget: &Budget) -> Result<RepresentationCost> {
    let circuits = m.circuits();
    let pool = circuits.masks();
    let plen = pool.len();
    if plen > POOL_LIMIT {
        return Err(Error::InvalidInput(format!(
            "{plen} circuits exceed the {POOL_LIMIT}-item search pool"
        )));
    }
    let meter = budget.meter();

    // Table of elimination products between pool members, as pool subsets.
    let mut by_value: Vec<(u64, usize)> = pool.iter().copied().enumerate().map(|(i, m)| (m, i)).collect();
    by_value.sort_unstable();
    let index_of = |mask: u64| -> Option<usize> {
        by_value
            .binary_search_by_key(&mask, |p| p.0)
            .ok()
            .map(|i| by_value[i].1)
    };
    let mut products = vec![0u128; plen * plen];
    for i in 0..plen {
        for j in 0..i {
            meter.tick(1)?;
            let union = pool[i] | pool[j];
            let mut common = pool[i] & pool[j];
            let mut cell = 0u128;
            while common != 0 {
                let v = common & common.wrapping_neg();
                common ^= v;
                if let Some(k) = index_of(union & !v) {
                    cell |= 1u128 << k;
                }
            }
            products[i * plen + j] = cell;
        }
    }
    let all = pool_all(plen);
    let closure_of = |start: u128| -> u128 {
        let mut cur = start;
        loop {
            let mut next = cur;
            let mut ibits = cur;
            while ibits != 0 {
                let i = ibits.trailing_zeros() as usize;
                ibits &= ibits - 1;
                let mut jbits = cur & ((1u128 << i) - 1);
                while jbits != 0 {
                    let j = jbits.trailing_zeros() as usize;
                    jbits &= jbits - 1;
                    next |= products[i * plen + j];
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    };
    let mut valid = |mask: u128| -> Result<bool> {
        meter.tick(plen as u64 * plen as u64 / 16 + 1)?;
        Ok(closure_of(mask) == all)
    };

    match method {
        Method::Uniform => Err(Error::BadParams(
            "the generator objective supports the exact and chordless methods".into(),
        )),
        Method::Chordless => {
            let d = chordless_circuits(m)?;
            let d_mask = family_pool_mask(pool, &d);
            certified_from_subset(
                Objective::Generator,
                pool,
                m.ground(),
                d_mask,
                plen,
                &mut valid,
            )
        }
        Method::Exact => {
            let e_mask = essential_items(plen, &mut valid)?;
            if valid(e_mask)? {
                return circuits_cost(Objective::Generator, pool, m.ground(), e_mask, true, Some(true));
            }
            let e_len = e_mask.count_ones() as usize;
            let rest: Vec<usize> = (0..plen).filter(|&i| e_mask & (1u128 << i) == 0).collect();
            for k in e_len + 1..=plen {
                if let Some((w, uniq)) = combo_level(e_mask, &rest, k - e_len, &meter, &mut valid)? {
                    return circuits_cost(Objective::Generator, pool, m.ground(), w, true, Some(uniq));
                }
            }
            unreachable!("the full circuit family generates itself");
        }
    }
}

// ---------------------------------------------------------------------------
// Minimum circuit subsystem
// ---------------------------------------------------------------------------

/// Minimum number of circuits whose circular formula still proves
/// `v ∈ T(c − v)` for every circuit `c` of `m` and every `v ∈ c`.
///
/// `Method::Exact` certifies the minimum; `Method::Chordless` requires a
/// simple binary matroid. The uniform method does not apply to this
/// objective (use [`covering_doubling_representation`] or
/// [`uniform_star_representation`] for constructive upper bounds).
pub fn min_circuit_subsystem(
    m: &Matroid,
    method: Method,
    budget: &Budget,
) -> Result<RepresentationCost> {
    let circuits = m.circuits();
    let pool = circuits.masks();
    let plen = pool.len();
    if plen > POOL_LIMIT {
        return Err(Error::InvalidInput(format!(
            "{plen} circuits exceed the {POOL_LIMIT}-item search pool"
        )));
    }
    let meter = budget.meter();
    let reqs = closure_requirements(circuits);
    let mut valid = |mask: u128| -> Result<bool> {
        meter.tick(reqs.len() as u64 * plen as u64 / 8 + 1)?;
        Ok(subsystem_valid(pool, mask, &reqs))
    };

    match method {
        Method::Uniform => Err(Error::BadParams(
            "the circuit-subsystem objective supports the exact and chordless methods".into(),
        )),
        Method::Chordless => {
            let d = chordless_circuits(m)?;
            let d_mask = family_pool_mask(pool, &d);
            certified_from_subset(
                Objective::Circuits,
                pool,
                m.ground(),
                d_mask,
                plen,
                &mut valid,
            )
        }
        Method::Exact => {
            if plen == 0 {
                return circuits_cost(Objective::Circuits, pool, m.ground(), 0, true, Some(true));
            }
            debug_assert!(subsystem_valid(pool, pool_all(plen), &reqs));
            let e_mask = essential_items(plen, &mut valid)?;
            if valid(e_mask)? {
                return circuits_cost(Objective::Circuits, pool, m.ground(), e_mask, true, Some(true));
            }
            let e_len = e_mask.count_ones() as usize;
            let rest: Vec<usize> = (0..plen).filter(|&i| e_mask & (1u128 << i) == 0).collect();

            // First-step service data for bounds, branching and prefilters.
            let servers: Vec<Vec<u16>> =
                reqs.iter().map(|&(body, _)| circuit_servers(pool, body)).collect();
            let mut serves: Vec<Vec<u16>> = vec![Vec::new(); plen];
            let mut server_masks: Vec<u128> = vec![0; reqs.len()];
            for (r, list) in servers.iter().enumerate() {
                for &i in list {
                    serves[i as usize].push(r as u16);
                    server_masks[r] |= 1u128 << i;
                }
            }
            let max_serve = serves.iter().map(Vec::len).max().unwrap_or(0).max(1);
            let lb_serve = (reqs.len() + max_serve - 1) / max_serve;
            let n = m.ground().n();
            let slot_r = (m.is_uniform() && m.rank_full() + 2 <= n)
                .then_some(m.rank_full() as u32);

            let mut base = SubsystemSearch {
                pool,
                reqs: &reqs,
                servers: &servers,
                serves: &serves,
                max_serve,
                slot_r,
                served: vec![0; reqs.len()],
                unserved: reqs.len(),
                chosen: Vec::new(),
                chosen_mask: 0,
            };
            let mut ebits = e_mask;
            while ebits != 0 {
                let i = ebits.trailing_zeros() as u16;
                ebits &= ebits - 1;
                base.choose(i);
            }

            let mut prefiltered = |mask: u128| -> Result<bool> {
                if server_masks.iter().any(|&sm| mask & sm == 0) {
                    return Ok(false);
                }
                valid(mask)
            };
            let start = (e_len + 1).max(lb_serve);
            for k in start..=plen {
                if binomial(rest.len(), k - e_len) <= COMBO_LIMIT {
                    if let Some((w, uniq)) =
                        combo_level(e_mask, &rest, k - e_len, &meter, &mut prefiltered)?
                    {
                        return circuits_cost(Objective::Circuits, pool, m.ground(), w, true, Some(uniq));
                    }
                } else if let Some(w) = base.run_level(k, &meter)? {
                    return circuits_cost(Objective::Circuits, pool, m.ground(), w, true, None);
                }
            }
            unreachable!("the full circuit family is always a valid subsystem");
        }
    }
}

// ---------------------------------------------------------------------------
// Minimum clause set
// ---------------------------------------------------------------------------

/// Minimum number of clauses of the circular formula of `m`'s circuits that
/// still prove `v ∈ T(c − v)` for every circuit `c` and `v ∈ c`.
///
/// `Method::Exact` certifies the minimum. `Method::Chordless` requires a
/// simple binary matroid and measures the clauses of its chordless
/// circuits. `Method::Uniform` requires a uniform matroid and uses
/// [`uniform_clause_representation`]; the bound is exact because distinct
/// bodies can only be served by clauses with exactly that body, forcing one
/// clause per body.
pub fn min_circuit_clauses(
    m: &Matroid,
    method: Method,
    budget: &Budget,
) -> Result<RepresentationCost> {
    let circuits = m.circuits();
    let formula = DefiniteCnf::circular(circuits);
    let pool = formula.raw_clauses();
    let plen = pool.len();
    let meter = budget.meter();
    let reqs = closure_requirements(circuits);

    // Bodies that only clauses with exactly that body can serve: each needs
    // its own clause, and distinct bodies need distinct clauses.
    let forced_bodies = reqs
        .iter()
        .filter(|&&(body, _)| {
            !pool
                .iter()
                .any(|&(b, h)| b != body && b & !body == 0 && body & (1u64 << h) == 0)
        })
        .count();

    match method {
        Method::Uniform => {
            if !m.is_uniform() {
                return Err(Error::BadParams(
                    "the uniform method requires a uniform matroid".into(),
                ));
            }
            uniform_clause_cost(m, forced_bodies, &reqs, budget)
        }
        Method::Chordless => {
            let d = chordless_circuits(m)?;
            if plen > POOL_LIMIT {
                return Err(Error::InvalidInput(format!(
                    "{plen} clauses exceed the {POOL_LIMIT}-item search pool"
                )));
            }
            let mut d_mask = 0u128;
            for (i, &(body, head)) in pool.iter().enumerate() {
                if d.contains_mask(body | (1u64 << head)) {
                    d_mask |= 1u128 << i;
                }
            }
            let mut valid = |mask: u128| -> Result<bool> {
                meter.tick(reqs.len() as u64 * plen as u64 / 8 + 1)?;
                Ok(clauses_valid(pool, mask, &reqs))
            };
            certified_clause_subset(&formula, d_mask, plen, &mut valid)
        }
        Method::Exact => {
            if m.is_uniform() {
                // Searching the clause pool is hopeless at C(n, r) scale,
                // but the forced-body count meets the constructive witness,
                // which certifies the minimum directly.
                return uniform_clause_cost(m, forced_bodies, &reqs, budget);
            }
            if plen > POOL_LIMIT {
                return Err(Error::InvalidInput(format!(
                    "{plen} clauses exceed the {POOL_LIMIT}-item search pool"
                )));
            }
            if plen == 0 {
                return clause_cost(&formula, 0, true, Some(true));
            }
            let mut valid = |mask: u128| -> Result<bool> {
                meter.tick(reqs.len() as u64 * plen as u64 / 8 + 1)?;
                Ok(clauses_valid(pool, mask, &reqs))
            };
            debug_assert!(clauses_valid(pool, pool_all(plen), &reqs));
            let e_mask = essential_items(plen, &mut valid)?;
            if valid(e_mask)? {
                return clause_cost(&formula, e_mask, true, Some(true));
            }
            let e_len = e_mask.count_ones() as usize;
            let rest: Vec<usize> = (0..plen).filter(|&i| e_mask & (1u128 << i) == 0).collect();
            let mut server_masks: Vec<u128> = vec![0; reqs.len()];
            for (r, &(body, _)) in reqs.iter().enumerate() {
                for (i, &(b, h)) in pool.iter().enumerate() {
                    if b & !body == 0 && body & (1u64 << h) == 0 {
                        server_masks[r] |= 1u128 << i;
                    }
                }
            }
            let mut prefiltered = |mask: u128| -> Result<bool> {
                if server_masks.iter().any(|&sm| mask & sm == 0) {
                    return Ok(false);
                }
                valid(mask)
            };
            let start = (e_len + 1).max(forced_bodies);
            for k in start..=plen {
                if let Some((w, uniq)) =
                    combo_level(e_mask, &rest, k - e_len, &meter, &mut prefiltered)?
                {
                    return clause_cost(&formula, w, true, Some(uniq));
                }
            }
            unreachable!("the complete circular formula is always valid");
        }
    }
}

/// Certified clause minimum for a uniform matroid: the constructive witness
/// has one clause per body, matching the forced-body lower bound.
fn uniform_clause_cost(
    m: &Matroid,
    forced_bodies: usize,
    reqs: &[(u64, u64)],
    budget: &Budget,
) -> Result<RepresentationCost> {
    let n = m.ground().n();
    let r = m.rank_full();
    let cnf = uniform_clause_representation(n, r, budget)?;
    let ok = reqs
        .iter()
        .all(|&(body, heads)| heads & !cnf.forward_chain_mask(body).0 == 0);
    if !ok {
        return Err(Error::InvalidInput(
            "constructed clause set fails its own validity requirements".into(),
        ));
    }
    let exact = forced_bodies == cnf.len();
    Ok(RepresentationCost {
        objective: Objective::Clauses,
        value: cnf.len(),
        witness: Witness::Clauses(cnf),
        exact,
        unique: None,
    })
}

// ---------------------------------------------------------------------------
// Witness assembly helpers
// ---------------------------------------------------------------------------

fn family_pool_mask(pool: &[u64], sub: &SetFamily) -> u128 {
    let mut mask = 0u128;
    for &m in sub.masks() {
        let i = pool
            .binary_search_by(|&x| canonical_cmp(x, m))
            .expect("subfamily members appear in the circuit pool");
        mask |= 1u128 << i;
    }
    mask
}

/// Validates a proposed subset, reporting it exact (and unique) only when it
/// coincides with the removal-essential items; otherwise it is returned as
/// an upper bound.
fn certified_from_subset(
    objective: Objective,
    pool: &[u64],
    ground: GroundSet,
    d_mask: u128,
    plen: usize,
    valid: &mut impl FnMut(u128) -> Result<bool>,
) -> Result<RepresentationCost> {
    if !valid(d_mask)? {
        return Err(Error::InvalidInput(
            "proposed circuit subset fails the objective's validity requirements".into(),
        ));
    }
    let e_mask = essential_items(plen, valid)?;
    let exact = e_mask == d_mask;
    circuits_cost(objective, pool, ground, d_mask, exact, exact.then_some(true))
}

fn certified_clause_subset(
    formula: &DefiniteCnf,
    d_mask: u128,
    plen: usize,
    valid: &mut impl FnMut(u128) -> Result<bool>,
) -> Result<RepresentationCost> {
    if !valid(d_mask)? {
        return Err(Error::InvalidInput(
            "proposed clause subset fails the objective's validity requirements".into(),
        ));
    }
    let e_mask = essential_items(plen, valid)?;
    let exact = e_mask == d_mask;
    clause_cost(formula, d_mask, exact, exact.then_some(true))
}

fn circuits_cost(
    objective: Objective,
    pool: &[u64],
    ground: GroundSet,
    mask: u128,
    exact: bool,
    unique: Option<bool>,
) -> Result<RepresentationCost> {
    let mut picks = Vec::new();
    let mut bits = mask;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        picks.push(pool[i]);
    }
    let family = SetFamily::from_masks(ground, picks)?;
    Ok(RepresentationCost {
        objective,
        value: family.len(),
        witness: Witness::Circuits(family),
        exact,
        unique,
    })
}

fn clause_cost(
    formula: &DefiniteCnf,
    mask: u128,
    exact: bool,
    unique: Option<bool>,
) -> Result<RepresentationCost> {
    let ground = formula.ground();
    let pool = formula.raw_clauses();
    let mut picks = Vec::new();
    let mut bits = mask;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let (body, head) = pool[i];
        picks.push(DefiniteClause::new(ground, ground.vset(body)?, head as usize)?);
    }
    let cnf = DefiniteCnf::new(ground, picks);
    Ok(RepresentationCost {
        objective: Objective::Clauses,
        value: cnf.len(),
        witness: Witness::Clauses(cnf),
        exact,
        unique,
    })
}

// ---------------------------------------------------------------------------
// Constructions for uniform circuit families
// ---------------------------------------------------------------------------

/// The `n − r` consecutive windows `{s, …, s + r}` for `s = 0..n−r−1`: a
/// minimum generator of the size-`(r+1)` uniform circuit family.
pub fn uniform_interval_generator(n: usize, r: usize) -> Result<SetFamily> {
    if n > 64 || r < 1 || r >= n {
        return Err(Error::BadParams(format!(
            "interval generator needs 1 ≤ r < n ≤ 64, got n={n} r={r}"
        )));
    }
    let ground = GroundSet::new(n)?;
    let window = (1u64 << (r + 1)) - 1;
    SetFamily::from_masks(ground, (0..n - r).map(|s| window << s))
}

/// All size-`(r+1)` subsets containing the centre `v`: a circuit subsystem
/// of the size-`(r+1)` uniform family with `C(n−1, r)` members.
pub fn uniform_star_representation(
    n: usize,
    r: usize,
    v: usize,
    budget: &Budget,
) -> Result<SetFamily> {
    if n > 64 || r < 1 || r + 2 > n || v >= n {
        return Err(Error::BadParams(format!(
            "star representation needs 1 ≤ r ≤ n−2 and v < n ≤ 64, got n={n} r={r} v={v}"
        )));
    }
    budget.charge(binomial(n - 1, r))?;
    let ground = GroundSet::new(n)?;
    let centre = 1u64 << v;
    let blocks = masks_of_size(n - 1, r).map(|m| {
        let low = m & (centre - 1);
        let high = if v + 1 >= 64 { 0 } else { (m >> v) << (v + 1) };
        low | high | centre
    });
    SetFamily::from_masks(ground, blocks)
}

/// Cyclic interval shift. A set with a single cyclic interval rotates one
/// position clockwise. Otherwise the longest interval (ties: smallest
/// numeric start) grows one position at its clockwise end, and the next
/// interval clockwise loses its own clockwise end; the result keeps the
/// original size and strictly grows the longest interval.
pub fn phi_shift(t: &VSet) -> Result<VSet> {
    let n = t.ground().n();
    let mask = t.mask();
    let full = t.ground().full_mask();
    if mask == 0 || mask == full {
        return Err(Error::BadParams(
            "the interval shift is defined for proper nonempty sets".into(),
        ));
    }
    let has = |v: usize| mask & (1u64 << v) != 0;
    let succ = |v: usize| (v + 1) % n;
    let pred = |v: usize| (v + n - 1) % n;
    let starts: Vec<usize> = (0..n).filter(|&v| has(v) && !has(pred(v))).collect();
    if starts.len() == 1 {
        let rotated = ((mask << 1) | (mask >> (n - 1))) & full;
        return t.ground().vset(rotated);
    }
    let end_of = |s: usize| {
        let mut e = s;
        while has(succ(e)) {
            e = succ(e);
        }
        e
    };
    let len_of = |s: usize| (end_of(s) + n - s) % n + 1;
    let longest = *starts
        .iter()
        .min_by_key(|&&s| (std::cmp::Reverse(len_of(s)), s))
        .expect("at least two intervals");
    let grown = succ(end_of(longest));
    let next = *starts
        .iter()
        .filter(|&&s| s != longest)
        .min_by_key(|&&s| (s + n - longest) % n)
        .expect("at least two intervals");
    let retired = end_of(next);
    t.ground()
        .vset((mask | (1u64 << grown)) & !(1u64 << retired))
}

/// Doubles a covering into a circuit subsystem of the size-`(r+1)` uniform
/// family: the blocks of an `(n, r+1, r)`-covering together with their
/// interval shifts. Errors with [`Error::NotCoveringSystem`] if `cover`
/// does not cover every `r`-subset.
pub fn covering_doubling_representation(
    n: usize,
    r: usize,
    cover: &SetFamily,
    budget: &Budget,
) -> Result<SetFamily> {
    if n > 64 || r < 1 || r >= n {
        return Err(Error::BadParams(format!(
            "doubling needs 1 ≤ r < n ≤ 64, got n={n} r={r}"
        )));
    }
    if cover.ground().n() != n {
        return Err(Error::GroundSetMismatch { left: n, right: cover.ground().n() });
    }
    let spec = designs::DesignSpec::new(designs::DesignKind::Covering, n, r + 1, r)?;
    let report = designs::verify_design(&spec, cover, budget)?;
    if !report.valid {
        return Err(Error::NotCoveringSystem(format!(
            "input family is not an ({n}, {}, {r})-covering: {}",
            r + 1,
            report
                .defect
                .map(|d| d.to_string())
                .unwrap_or_else(|| "unknown defect".into())
        )));
    }
    if r + 1 == n {
        // The only block is the whole ground set, which has no shift; the
        // covering alone is already a valid subsystem.
        return Ok(cover.clone());
    }
    let mut masks: Vec<u64> = cover.masks().to_vec();
    for t in cover.iter() {
        masks.push(phi_shift(&t)?.mask());
    }
    SetFamily::from_masks(cover.ground(), masks)
}

/// A grouped representation for the rank-two (all-triples) circuit family
/// on large ground sets.
#[derive(Clone, Debug)]
pub struct Rank2Representation {
    /// The triple family; a valid circuit subsystem of the rank-two
    /// uniform family (every pair derives the whole ground set).
    pub family: SetFamily,
    /// Number of five-element groups in the layout.
    pub groups: usize,
    /// Size of the residual block.
    pub residual: usize,
}

/// Builds a rank-two circuit subsystem from a grouped layout: the ground
/// set splits into `p` groups of five and a residual block `B` of size
/// `b = (n mod 30) ± 15` (sign chosen so that `p ≡ 3 (mod 6)`). Blocks are
/// all triples with two members in one group and one in `B`, all triples
/// with two members in `B` and one outside, and thirty triples per triple
/// system block on the groups that tie same-position pairs of two groups to
/// a shifted position of a third.
pub fn rank2_group_representation(n: usize, budget: &Budget) -> Result<Rank2Representation> {
    if !(46..=64).contains(&n) {
        return Err(Error::BadParams(format!(
            "the grouped rank-two layout needs 46 ≤ n ≤ 64, got n={n}"
        )));
    }
    let m30 = n % 30;
    let b = if m30 >= 17 { m30 - 15 } else { m30 + 15 };
    let p = (n - b) / 5;
    debug_assert_eq!(5 * p + b, n);
    debug_assert_eq!(p % 6, 3);

    let ground = GroundSet::new(n)?;
    let b_start = 5 * p;
    let expected = 10 * p * b + (n - b) * binomial(b, 2) as usize + 5 * p * (p - 1);
    budget.charge(expected as u64)?;

    let mut masks: Vec<u64> = Vec::with_capacity(expected);
    // Two members in one group, one in the residual block.
    for g in 0..p {
        for i in 0..5 {
            for j in i + 1..5 {
                for w in b_start..n {
                    masks.push((1 << (5 * g + i)) | (1 << (5 * g + j)) | (1 << w));
                }
            }
        }
    }
    // Two members in the residual block, one outside it.
    for u in b_start..n {
        for v in u + 1..n {
            for w in 0..b_start {
                masks.push((1 << u) | (1 << v) | (1 << w));
            }
        }
    }
    // Cross-group triples driven by a triple system on the groups: for each
    // system block, each of its three rotations pins a same-position pair
    // in two groups to position +1 and +2 of the third group.
    let system = designs::steiner_triple_bose(p)?;
    for block in system.iter() {
        let pts: Vec<usize> = block.iter().collect();
        let (x, y, z) = (pts[0], pts[1], pts[2]);
        for &(f, s, t) in &[(x, y, z), (y, z, x), (x, z, y)] {
            for i in 0..5 {
                for delta in [1, 2] {
                    masks.push(
                        (1 << (5 * f + i)) | (1 << (5 * s + i)) | (1 << (5 * t + (i + delta) % 5)),
                    );
                }
            }
        }
    }
    let family = SetFamily::from_masks(ground, masks)?;
    debug_assert_eq!(family.len(), expected);
    Ok(Rank2Representation { family, groups: p, residual: b })
}

/// One clause per `r`-subset `X`: the head is the successor of the end of
/// the cyclic interval of `X` with the smallest numeric start. Forward
/// chaining from any `r`-subset reaches the whole ground set, and since
/// every body can only be served by its own clause the `C(n, r)` size is
/// the exact clause minimum for the size-`(r+1)` uniform family.
pub fn uniform_clause_representation(n: usize, r: usize, budget: &Budget) -> Result<DefiniteCnf> {
    if n > 64 || r < 1 || r >= n {
        return Err(Error::BadParams(format!(
            "clause representation needs 1 ≤ r ≤ n−1 and n ≤ 64, got n={n} r={r}"
        )));
    }
    budget.charge(binomial(n, r))?;
    let ground = GroundSet::new(n)?;
    let mut clauses = Vec::new();
    for body in masks_of_size(n, r) {
        let has = |v: usize| body & (1u64 << v) != 0;
        let start = (0..n)
            .find(|&v| has(v) && !has((v + n - 1) % n))
            .expect("a proper nonempty set has an interval start");
        let mut end = start;
        while has((end + 1) % n) {
            end = (end + 1) % n;
        }
        let head = (end + 1) % n;
        clauses.push(DefiniteClause::new(ground, ground.vset(body)?, head)?);
    }
    Ok(DefiniteCnf::new(ground, clauses))
}
