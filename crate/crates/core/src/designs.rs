//! Covering, Turán, Steiner and implication systems on small ground sets.
//!
//! A *covering* `(n, q, r)`-system is a family of `q`-blocks containing
//! every `r`-subset; a *Steiner* system contains every `r`-subset exactly
//! once; a *Turán* `(n, t, k)`-system is a family of `k`-blocks hitting the
//! inside of every `t`-subset; an *implication* `(n, q, r)`-system is a
//! family of `q`-blocks whose circular formula chains every `r`-subset up to
//! the whole ground set. The two classical notions are complementary
//! ([`turan_covering_complement`]), and implication systems sit between a
//! covering and its double.
//!
//! Besides the verifier, the module provides the standard closed-form
//! bounds ([`schonheim_bound`], [`fort_hedlund`]), exhaustive minimum
//! searches ([`covering_number_bruteforce`], [`steiner_number_bruteforce`],
//! [`implication_number_bruteforce`]), a greedy upper bound
//! ([`greedy_covering`]) and the quasigroup construction of triple systems
//! ([`steiner_triple_bose`]).

use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::matroid::{binomial, Matroid};
use crate::minrep::{min_circuit_subsystem, Method, Witness};
use crate::par;
use crate::set_family::{masks_of_size, GroundSet, SetFamily, VSet};

/// The four design flavours the verifier understands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DesignKind {
    /// Every `r`-subset lies inside at least one block.
    Covering,
    /// Every `t`-subset contains at least one block.
    Turan,
    /// Every `r`-subset lies inside exactly one block.
    Steiner,
    /// Every `r`-subset forward-chains to the whole ground set under the
    /// family's circular formula.
    Implication,
}

impl std::fmt::Display for DesignKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DesignKind::Covering => "covering",
            DesignKind::Turan => "turan",
            DesignKind::Steiner => "steiner",
            DesignKind::Implication => "implication",
        })
    }
}

/// Parameters of a design: block size `block` and subset size `target`
/// over an `n`-element ground set. Coverings, Steiner and implication
/// systems need `block > target`; Turán systems need `target > block`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DesignSpec {
    /// Which property to check.
    pub kind: DesignKind,
    /// Ground-set size.
    pub n: usize,
    /// Size of every block in the family.
    pub block: usize,
    /// Size of the subsets the property quantifies over.
    pub target: usize,
}

impl DesignSpec {
    /// Validates the parameter ordering for the given kind.
    pub fn new(kind: DesignKind, n: usize, block: usize, target: usize) -> Result<DesignSpec> {
        if n > 64 {
            return Err(Error::BadParams(format!("ground set size {n} exceeds 64")));
        }
        let ok = match kind {
            DesignKind::Turan => n >= target && target > block && block >= 1,
            _ => n >= block && block > target && target >= 1,
        };
        if !ok {
            return Err(Error::BadParams(format!(
                "invalid {kind} parameters n={n} block={block} target={target}"
            )));
        }
        Ok(DesignSpec { kind, n, block, target })
    }

    /// Header comment for serialized design families, e.g.
    /// `# design covering n=7 q=3 r=2`. Parsers skip comment lines, so the
    /// header is informational only.
    pub fn header(&self) -> String {
        format!("# design {} n={} q={} r={}", self.kind, self.n, self.block, self.target)
    }
}

/// The first witness against a design property, in canonical subset order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DesignDefect {
    /// The subset lies inside no block.
    Uncovered(VSet),
    /// The subset contains no block.
    NoBlockInside(VSet),
    /// The subset lies inside more than one block.
    MultiplyCovered(VSet),
    /// Forward chaining from the subset stalls before the full ground set.
    NotImplied {
        /// The starting subset.
        start: VSet,
        /// The stalled closure.
        closure: VSet,
    },
}

impl std::fmt::Display for DesignDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DesignDefect::Uncovered(x) => write!(f, "{x} is not inside any block"),
            DesignDefect::NoBlockInside(x) => write!(f, "{x} contains no block"),
            DesignDefect::MultiplyCovered(x) => write!(f, "{x} lies inside more than one block"),
            DesignDefect::NotImplied { start, closure } => {
                write!(f, "{start} only derives {closure}")
            }
        }
    }
}

/// Outcome of [`verify_design`].
#[derive(Clone, Debug)]
pub struct DesignReport {
    /// The checked parameters.
    pub spec: DesignSpec,
    /// Whether the family satisfies the property.
    pub valid: bool,
    /// First counterexample subset when invalid.
    pub defect: Option<DesignDefect>,
    /// Number of blocks in the family.
    pub family_size: usize,
}

/// Checks a block family against a design property, reporting the first
/// violating subset in canonical order. Errors with
/// [`Error::NonUniformFamily`] if some member does not have the block size.
pub fn verify_design(spec: &DesignSpec, f: &SetFamily, budget: &Budget) -> Result<DesignReport> {
    if f.ground().n() != spec.n {
        return Err(Error::GroundSetMismatch { left: spec.n, right: f.ground().n() });
    }
    for m in f.iter() {
        if m.card() != spec.block {
            return Err(Error::NonUniformFamily(format!(
                "block {m} has {} members, expected {}",
                m.card(),
                spec.block
            )));
        }
    }
    budget.charge(binomial(spec.n, spec.target).saturating_mul(f.len() as u64 + 1))?;
    let ground = f.ground();
    let full = ground.full_mask();
    let mut defect = None;
    for x in masks_of_size(spec.n, spec.target) {
        let found = match spec.kind {
            DesignKind::Covering => {
                if f.has_member_containing(x) {
                    None
                } else {
                    Some(DesignDefect::Uncovered(ground.vset(x)?))
                }
            }
            DesignKind::Turan => {
                if f.has_member_within(x) {
                    None
                } else {
                    Some(DesignDefect::NoBlockInside(ground.vset(x)?))
                }
            }
            DesignKind::Steiner => {
                let count = f.masks().iter().filter(|&&b| x & !b == 0).count();
                match count {
                    0 => Some(DesignDefect::Uncovered(ground.vset(x)?)),
                    1 => None,
                    _ => Some(DesignDefect::MultiplyCovered(ground.vset(x)?)),
                }
            }
            DesignKind::Implication => {
                let closure = rotation_chain(f.masks(), x);
                if closure == full {
                    None
                } else {
                    Some(DesignDefect::NotImplied {
                        start: ground.vset(x)?,
                        closure: ground.vset(closure)?,
                    })
                }
            }
        };
        if found.is_some() {
            defect = found;
            break;
        }
    }
    Ok(DesignReport { spec: *spec, valid: defect.is_none(), defect, family_size: f.len() })
}

/// Forward chaining where each block fires its last missing member.
fn rotation_chain(blocks: &[u64], start: u64) -> u64 {
    let mut x = start;
    loop {
        let mut changed = false;
        for &b in blocks {
            let missing = b & !x;
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

/// The nested-ceiling covering bound
/// `⌈n/q ⌈(n−1)/(q−1) ⌈ … ⌈(n−r+1)/(q−r+1)⌉ … ⌉⌉⌉`.
pub fn schonheim_bound(n: usize, q: usize, r: usize) -> Result<u64> {
    if !(n >= q && q > r && r >= 1) {
        return Err(Error::BadParams(format!(
            "the covering bound needs n ≥ q > r ≥ 1, got n={n} q={q} r={r}"
        )));
    }
    let mut acc: u128 = 1;
    for i in (0..r).rev() {
        let num = (n - i) as u128 * acc;
        let den = (q - i) as u128;
        acc = num.div_ceil(den);
    }
    Ok(u64::try_from(acc).unwrap_or(u64::MAX))
}

/// Minimum number of triples covering all pairs of an `n`-set, in closed
/// form by the residue of `n` mod 6.
pub fn fort_hedlund(n: usize) -> Result<u64> {
    if !(3..=u32::MAX as usize).contains(&n) {
        return Err(Error::BadParams(format!("triple coverings need n ≥ 3, got n={n}")));
    }
    let n = n as u64;
    Ok(match n % 6 {
        0 => n * n / 6,
        1 | 3 => (n * n - n) / 6,
        2 | 4 => (n * n + 2) / 6,
        _ => (n * n - n + 4) / 6,
    })
}

/// Shared state of the covering searches: which `r`-subsets each block
/// covers, and which blocks can cover each `r`-subset.
struct CoverTables {
    blocks: Vec<u64>,
    cover_bits: Vec<u128>,
    candidates: Vec<Vec<u32>>,
    all: u128,
    max_cover: usize,
}

fn cover_tables(n: usize, q: usize, r: usize) -> Result<CoverTables> {
    if !(n >= q && q > r && r >= 1 && n <= 64) {
        return Err(Error::BadParams(format!(
            "covering parameters need n ≥ q > r ≥ 1 and n ≤ 64, got n={n} q={q} r={r}"
        )));
    }
    let rsets: Vec<u64> = masks_of_size(n, r).collect();
    if rsets.len() > 128 {
        return Err(Error::InvalidInput(format!(
            "{} target subsets exceed the 128-item coverage tracker",
            rsets.len()
        )));
    }
    let blocks: Vec<u64> = masks_of_size(n, q).collect();
    let mut cover_bits = vec![0u128; blocks.len()];
    let mut candidates = vec![Vec::new(); rsets.len()];
    for (bi, &b) in blocks.iter().enumerate() {
        for (ri, &x) in rsets.iter().enumerate() {
            if x & !b == 0 {
                cover_bits[bi] |= 1u128 << ri;
                candidates[ri].push(bi as u32);
            }
        }
    }
    let all = if rsets.len() == 128 { !0 } else { (1u128 << rsets.len()) - 1 };
    Ok(CoverTables {
        blocks,
        cover_bits,
        candidates,
        all,
        max_cover: binomial(q, r) as usize,
    })
}

impl CoverTables {
    /// Depth-first search for a covering of exactly `k` blocks, branching
    /// on the lowest uncovered subset; explored candidates are forbidden in
    /// later branches so each block set is visited once.
    fn dfs(
        &self,
        k: usize,
        chosen: &mut Vec<u32>,
        covered: u128,
        forbidden: &mut [bool],
        meter: &Meter,
    ) -> Result<Option<Vec<u32>>> {
        meter.tick(1)?;
        if covered == self.all {
            return Ok(Some(chosen.clone()));
        }
        let left = k - chosen.len();
        if left == 0 {
            return Ok(None);
        }
        let uncovered = (self.all & !covered).count_ones() as usize;
        if (uncovered + self.max_cover - 1) / self.max_cover > left {
            return Ok(None);
        }
        let u = (self.all & !covered).trailing_zeros() as usize;
        let mut fenced: Vec<u32> = Vec::new();
        let mut found = None;
        for &b in &self.candidates[u] {
            if forbidden[b as usize] {
                continue;
            }
            chosen.push(b);
            found = self.dfs(k, chosen, covered | self.cover_bits[b as usize], forbidden, meter)?;
            chosen.pop();
            if found.is_some() {
                break;
            }
            forbidden[b as usize] = true;
            fenced.push(b);
        }
        for b in fenced {
            forbidden[b as usize] = false;
        }
        Ok(found)
    }

    /// One size level split over worker threads at the root branching; the
    /// lowest-index success wins deterministically.
    fn level(&self, k: usize, meter: &Meter) -> Result<Option<Vec<u32>>> {
        let u = self.all.trailing_zeros() as usize;
        let cands = &self.candidates[u];
        par::find_map_first_index(cands.len(), |ci| {
            let b = cands[ci];
            let mut forbidden = vec![false; self.blocks.len()];
            for &prev in &cands[..ci] {
                forbidden[prev as usize] = true;
            }
            let mut chosen = vec![b];
            match self.dfs(k, &mut chosen, self.cover_bits[b as usize], &mut forbidden, meter) {
                Ok(None) => None,
                Ok(Some(w)) => Some(Ok(w)),
                Err(e) => Some(Err(e)),
            }
        })
        .transpose()
    }

    fn family(&self, n: usize, chosen: &[u32]) -> Result<SetFamily> {
        SetFamily::from_masks(
            GroundSet::new(n)?,
            chosen.iter().map(|&b| self.blocks[b as usize]),
        )
    }
}

/// Exact covering number `c(n, q, r)` with a witness, by iterative
/// deepening from the counting bound `⌈C(n,r)/C(q,r)⌉`. Starting below any
/// sharper closed-form bound keeps those bounds honestly testable against
/// this search.
pub fn covering_number_bruteforce(
    n: usize,
    q: usize,
    r: usize,
    budget: &Budget,
) -> Result<(usize, SetFamily)> {
    let tables = cover_tables(n, q, r)?;
    let meter = budget.meter();
    let total = tables.all.count_ones() as u64;
    let start = total.div_ceil(tables.max_cover as u64).max(1) as usize;
    for k in start..=tables.blocks.len() {
        if let Some(chosen) = tables.level(k, &meter)? {
            return Ok((k, tables.family(n, &chosen)?));
        }
    }
    unreachable!("the family of all q-subsets covers every r-subset");
}

/// Existence search for an `(n, q, r)` Steiner system: a covering where
/// every `r`-subset lies in exactly one block. Returns the block count and
/// a witness, or `None` when no such system exists (including the immediate
/// case where `C(q,r)` does not divide `C(n,r)`).
pub fn steiner_number_bruteforce(
    n: usize,
    q: usize,
    r: usize,
    budget: &Budget,
) -> Result<Option<(usize, SetFamily)>> {
    let tables = cover_tables(n, q, r)?;
    let total = tables.all.count_ones() as u64;
    let per_block = tables.max_cover as u64;
    if total % per_block != 0 {
        return Ok(None);
    }
    let k = (total / per_block) as usize;
    let meter = budget.meter();

    fn exact(
        tables: &CoverTables,
        chosen: &mut Vec<u32>,
        covered: u128,
        meter: &Meter,
    ) -> Result<Option<Vec<u32>>> {
        meter.tick(1)?;
        if covered == tables.all {
            return Ok(Some(chosen.clone()));
        }
        let u = (tables.all & !covered).trailing_zeros() as usize;
        for &b in &tables.candidates[u] {
            if tables.cover_bits[b as usize] & covered != 0 {
                continue;
            }
            chosen.push(b);
            let found = exact(tables, chosen, covered | tables.cover_bits[b as usize], meter)?;
            chosen.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    let mut chosen = Vec::new();
    match exact(&tables, &mut chosen, 0, &meter)? {
        Some(w) => {
            debug_assert_eq!(w.len(), k);
            Ok(Some((k, tables.family(n, &w)?)))
        }
        None => Ok(None),
    }
}

/// Exact minimum size of an implication `(n, r+1, r)`-system with a
/// witness. The validity requirement coincides with the circuit-subsystem
/// requirement of the size-`(r+1)` uniform circuit family, so this
/// delegates to that exact search.
pub fn implication_number_bruteforce(
    n: usize,
    r: usize,
    budget: &Budget,
) -> Result<(usize, SetFamily)> {
    if !(n >= 2 && r >= 1 && r < n) {
        return Err(Error::BadParams(format!(
            "implication systems need 1 ≤ r < n, got n={n} r={r}"
        )));
    }
    let m = Matroid::uniform(n, r)?;
    let cost = min_circuit_subsystem(&m, Method::Exact, budget)?;
    let Witness::Circuits(family) = cost.witness else {
        unreachable!("the circuit-subsystem objective returns a circuit witness")
    };
    Ok((cost.value, family))
}

/// Greedy covering: repeatedly add the block covering the most still
/// uncovered `r`-subsets (ties broken by block order). A fast upper bound
/// for [`covering_number_bruteforce`].
pub fn greedy_covering(n: usize, q: usize, r: usize, budget: &Budget) -> Result<SetFamily> {
    let tables = cover_tables(n, q, r)?;
    let meter = budget.meter();
    let mut covered = 0u128;
    let mut chosen = Vec::new();
    while covered != tables.all {
        meter.tick(tables.blocks.len() as u64)?;
        let best = (0..tables.blocks.len())
            .max_by_key(|&b| {
                (
                    (tables.cover_bits[b] & !covered).count_ones(),
                    std::cmp::Reverse(b),
                )
            })
            .expect("at least one block exists");
        covered |= tables.cover_bits[best];
        chosen.push(best as u32);
    }
    tables.family(n, &chosen)
}

/// Triple system on `p ≡ 3 (mod 6)` points via the odd idempotent
/// quasigroup `i ∘ j = (i + j)(m+1)/2 mod m` on `m = p/3` rows: points are
/// `(i, ℓ) ↦ 3i + ℓ`, blocks are the `m` rows `{3i, 3i+1, 3i+2}` together
/// with `{(i,ℓ), (j,ℓ), (i∘j, ℓ+1)}` for `i < j`. Every pair of points
/// lies in exactly one block.
pub fn steiner_triple_bose(p: usize) -> Result<SetFamily> {
    if p > 64 {
        return Err(Error::BadParams(format!("ground set size {p} exceeds 64")));
    }
    if p < 3 || p % 6 != 3 {
        return Err(Error::BadResidue(format!(
            "the triple-system construction needs p ≡ 3 (mod 6), got p={p}"
        )));
    }
    let m = p / 3;
    let half = (m + 1) / 2;
    let ground = GroundSet::new(p)?;
    let mut masks: Vec<u64> = (0..m).map(|i| 0b111u64 << (3 * i)).collect();
    for i in 0..m {
        for j in i + 1..m {
            let k = (i + j) * half % m;
            for l in 0..3 {
                masks.push((1 << (3 * i + l)) | (1 << (3 * j + l)) | (1 << (3 * k + (l + 1) % 3)));
            }
        }
    }
    let family = SetFamily::from_masks(ground, masks)?;
    debug_assert_eq!(family.len(), p * (p - 1) / 6);
    Ok(family)
}

/// Complements every block: a covering `(n, q, r)`-system becomes a Turán
/// `(n, n−r, n−q)`-system and vice versa. The input must verify as the
/// kind claimed by `spec`; the returned spec describes the complement.
pub fn turan_covering_complement(
    spec: &DesignSpec,
    f: &SetFamily,
    budget: &Budget,
) -> Result<(DesignSpec, SetFamily)> {
    let flipped = match spec.kind {
        DesignKind::Covering => DesignKind::Turan,
        DesignKind::Turan => DesignKind::Covering,
        _ => {
            return Err(Error::BadParams(
                "complementation is defined between covering and turan systems".into(),
            ))
        }
    };
    let out = DesignSpec::new(flipped, spec.n, spec.n - spec.block, spec.n - spec.target)?;
    let report = verify_design(spec, f, budget)?;
    if !report.valid {
        return Err(Error::InvalidInput(format!(
            "input family is not a valid {} system: {}",
            spec.kind,
            report.defect.map(|d| d.to_string()).unwrap_or_else(|| "unknown defect".into())
        )));
    }
    Ok((out, f.complement_family()))
}
