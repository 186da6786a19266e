//! Boolean functions as explicit truth tables, and the implicate-set
//! machinery built on them.
//!
//! A [`BoolFn`] stores one bit per subset of the ground set, so it is the
//! ground truth against which formula-level shortcuts are verified. The
//! central gadget is the *superset-intersection table*: for every set `X`,
//! the intersection of all true supersets of `X` (all-ones when there are
//! none). `B -> v` is an implicate exactly when bit `v` survives in the
//! table entry for `B`, and an *implicate set* is an `I` all of whose
//! elements are implied by the rest of `I`.
//!
//! Two derived operators live here: the minimal majorant of a function
//! among those whose implicate structure is hypergraph-shaped (the circular
//! formula of the implicate-set family), and the implicate dual, whose true
//! sets are the complements of the implicate sets.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::horn::DefiniteCnf;
use crate::par;
use crate::set_family::{GroundSet, SetFamily, VSet};

/// A Boolean function on subsets of a ground set, stored as a truth table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolFn {
    ground: GroundSet,
    bits: Vec<u64>,
}

impl BoolFn {
    /// Tabulates `f` over all `2^n` subsets. Charged as `2^n` states.
    pub fn from_fn(ground: GroundSet, budget: &Budget, f: impl Fn(u64) -> bool + Sync) -> Result<BoolFn> {
        let n = ground.n() as u32;
        budget.charge_log2(n)?;
        let words = 1usize << n.saturating_sub(6);
        let bits = par::map_range(0..words as u64, |w| {
            let mut word = 0u64;
            let lanes = if n >= 6 { 64 } else { 1u64 << n };
            for b in 0..lanes {
                if f(w << 6 | b) {
                    word |= 1 << b;
                }
            }
            word
        });
        Ok(BoolFn { ground, bits })
    }

    /// Truth table of a definite Horn formula (true = model).
    pub fn from_cnf(phi: &DefiniteCnf, budget: &Budget) -> Result<BoolFn> {
        BoolFn::from_fn(phi.ground(), budget, |x| phi.is_model_mask(x))
    }

    /// The owning ground set.
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    /// Value on the subset with bitmask `x`.
    pub fn value(&self, x: u64) -> bool {
        self.bits[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    /// Number of true subsets.
    pub fn count_true(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// The family of all true subsets.
    pub fn true_sets(&self, budget: &Budget) -> Result<SetFamily> {
        let n = self.ground.n() as u32;
        budget.charge_log2(n)?;
        let masks: Vec<u64> = (0..1u64 << n).filter(|&x| self.value(x)).collect();
        SetFamily::from_masks(self.ground, masks)
    }

    /// Is the function definite Horn: the ground set is true and the true
    /// sets are closed under intersection?
    pub fn is_definite_horn(&self, budget: &Budget) -> Result<bool> {
        let full = self.ground.full_mask();
        if !self.value(full) {
            return Ok(false);
        }
        let trues: Vec<u64> = (0..=full).filter(|&x| self.value(x)).collect();
        budget.charge((trues.len() as u64).saturating_mul(trues.len() as u64))?;
        for (i, &a) in trues.iter().enumerate() {
            for &b in &trues[..i] {
                if !self.value(a & b) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// For every subset `X`, the intersection of all true supersets of `X`
    /// (including `X` itself); all-ones when no true superset exists.
    /// Charged as `2^n · n` states.
    pub fn superset_intersection_table(&self, budget: &Budget) -> Result<Vec<u64>> {
        let n = self.ground.n();
        budget.charge((1u64 << n).saturating_mul(n as u64 + 1))?;
        let size = 1usize << n;
        let mut cap = vec![!0u64; size];
        // Adding a vertex strictly increases the mask as an integer, so a
        // descending scan sees every superset entry before it is needed.
        for x in (0..size as u64).rev() {
            let mut acc = if self.value(x) { x } else { !0 };
            let mut outside = self.ground.full_mask() & !x;
            while outside != 0 {
                let v = outside & outside.wrapping_neg();
                outside ^= v;
                acc &= cap[(x | v) as usize];
            }
            cap[x as usize] = acc;
        }
        Ok(cap)
    }

    /// Is `body -> head` satisfied by every true superset of `body`?
    /// Requires `head ∉ body`. (Vacuously true when `body` has no true
    /// superset.)
    pub fn is_implicate(&self, body: &VSet, head: usize, budget: &Budget) -> Result<bool> {
        if head >= self.ground.n() {
            return Err(Error::InvalidInput(format!(
                "head {head} outside ground set of size {}",
                self.ground.n()
            )));
        }
        if body.contains(head) {
            return Err(Error::InvalidInput(format!("head {head} appears in body {body}")));
        }
        let cap = self.superset_intersection_table(budget)?;
        Ok(cap[body.mask() as usize] >> head & 1 == 1)
    }

    /// All implicate sets: subsets `I` such that for every `v ∈ I`,
    /// `I∖{v} -> v` is an implicate. The empty set always qualifies.
    pub fn implicate_sets(&self, budget: &Budget) -> Result<SetFamily> {
        let cap = self.superset_intersection_table(budget)?;
        let n = self.ground.n();
        let mut out: Vec<u64> = Vec::new();
        for x in 0..1u64 << n {
            let mut ok = true;
            let mut rest = x;
            while rest != 0 {
                let v = rest & rest.wrapping_neg();
                rest ^= v;
                if cap[(x & !v) as usize] & v == 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(x);
            }
        }
        SetFamily::from_masks(self.ground, out)
    }

    /// The minimal majorant whose implicate structure is hypergraph-shaped:
    /// the circular formula of this function's implicate-set family.
    pub fn hypergraph_horn_majorant(&self, budget: &Budget) -> Result<DefiniteCnf> {
        Ok(DefiniteCnf::circular(&self.implicate_sets(budget)?))
    }

    /// The implicate dual: the function whose true sets are exactly the
    /// complements of this function's implicate sets.
    pub fn implicate_dual(&self, budget: &Budget) -> Result<BoolFn> {
        let isets = self.implicate_sets(budget)?;
        let full = self.ground.full_mask();
        let mut dual = BoolFn {
            ground: self.ground,
            bits: vec![0u64; self.bits.len()],
        };
        for &i in isets.masks() {
            let y = !i & full;
            dual.bits[(y >> 6) as usize] |= 1 << (y & 63);
        }
        Ok(dual)
    }
}

/// Is the formula *hypergraph Horn*: does every false set `F` admit an
/// implicate set `I` with exactly one element outside `F`?
pub fn is_hypergraph_horn(phi: &DefiniteCnf, budget: &Budget) -> Result<bool> {
    Ok(hypergraph_horn_violation(phi, budget)?.is_none())
}

/// First (by bitmask value) false set witnessing that the formula is not
/// hypergraph Horn, or `None` when it is.
pub fn hypergraph_horn_violation(phi: &DefiniteCnf, budget: &Budget) -> Result<Option<VSet>> {
    let f = BoolFn::from_cnf(phi, budget)?;
    let isets = f.implicate_sets(budget)?;
    let n = phi.ground().n();
    budget.charge((1u64 << n).saturating_mul(isets.len() as u64))?;
    for x in 0..1u64 << n {
        if f.value(x) {
            continue;
        }
        let reachable = isets.masks().iter().any(|&i| (i & !x).count_ones() == 1);
        if !reachable {
            return Ok(Some(phi.ground().vset(x)?));
        }
    }
    Ok(None)
}
