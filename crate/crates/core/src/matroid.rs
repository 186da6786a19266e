//! Circuit families, matroids, binary (GF(2)) representations, and the
//! equivalence criteria connecting them to Horn inference.
//!
//! A [`Matroid`] is built from a circuit family that passes the three
//! circuit axioms: no empty circuit, circuits form an antichain, and the
//! elimination axiom (any two distinct circuits sharing an element contain
//! a third circuit avoiding it). Rank is evaluated through the basis
//! family `bases = C^{dc}` as `r(X) = max_B |B ∩ X|`; closure, hyperplanes
//! (`C^{dcdc}`), flats, and cocircuits (`C^{dcd}`) all derive from it.
//!
//! [`characterization_report`] evaluates, independently of one another,
//! eleven criteria that are all equivalent to the elimination axiom for a
//! nontrivial antichain; each failing criterion carries its smallest
//! witness. [`is_matroid_horn`] recognizes whether a definite Horn formula
//! is the circular formula of matroid circuits by inspecting its prime
//! implicates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::horn::DefiniteCnf;
use crate::par;
use crate::set_family::{
    all_masks_canonical, bases_of, canonical_cmp, masks_of_size, GroundSet, SetFamily, VSet,
};

/// Why a family is not a valid circuit family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CircuitAxiomViolation {
    /// The empty set is a member.
    EmptyCircuit,
    /// One member contains another.
    NotAntichain { inner: VSet, outer: VSet },
    /// Two circuits sharing `common` have no third circuit inside their
    /// union minus `common`.
    EliminationFails { c1: VSet, c2: VSet, common: usize },
}

impl fmt::Display for CircuitAxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircuitAxiomViolation::EmptyCircuit => {
                write!(f, "the empty set is listed as a circuit")
            }
            CircuitAxiomViolation::NotAntichain { inner, outer } => {
                write!(f, "circuit {inner} is contained in circuit {outer}")
            }
            CircuitAxiomViolation::EliminationFails { c1, c2, common } => write!(
                f,
                "circuits {c1} and {c2} share {common} but no circuit lies in their union minus {common}"
            ),
        }
    }
}

/// Checks the three circuit axioms, returning the first violation in
/// canonical order (`None` = valid circuit family).
pub fn check_circuit_axioms(c: &SetFamily) -> Option<CircuitAxiomViolation> {
    if c.contains_mask(0) {
        return Some(CircuitAxiomViolation::EmptyCircuit);
    }
    if let Some((inner, outer)) = c.sperner_violation() {
        return Some(CircuitAxiomViolation::NotAntichain { inner, outer });
    }
    let g = c.ground();
    let masks = c.masks();
    for i in 0..masks.len() {
        for j in 0..i {
            let (a, b) = (masks[j], masks[i]);
            let mut shared = a & b;
            while shared != 0 {
                let u = shared & shared.wrapping_neg();
                shared ^= u;
                let target = (a | b) & !u;
                if !c.has_member_within(target) {
                    return Some(CircuitAxiomViolation::EliminationFails {
                        c1: g.vset(a).expect("member mask"),
                        c2: g.vset(b).expect("member mask"),
                        common: u.trailing_zeros() as usize,
                    });
                }
            }
        }
    }
    None
}

/// A matrix over GF(2), stored column-major as row-bitmasks
/// (`rows ≤ 64`, `cols ≤ 64`).
///
/// # Text format
///
/// Header line `rows cols`, then `rows` lines of `cols` space-separated
/// `0`/`1` entries. `#` comments as elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    col_bits: Vec<u64>,
}

impl BinaryMatrix {
    /// Matrix from column vectors given as row-bitmask integers.
    pub fn from_columns(rows: usize, col_bits: Vec<u64>) -> Result<BinaryMatrix> {
        if rows == 0 || rows > 64 {
            return Err(Error::BadParams(format!("row count {rows} outside 1..=64")));
        }
        if col_bits.is_empty() || col_bits.len() > 64 {
            return Err(Error::BadParams(format!(
                "column count {} outside 1..=64",
                col_bits.len()
            )));
        }
        let full = if rows == 64 { !0u64 } else { (1u64 << rows) - 1 };
        for (j, &c) in col_bits.iter().enumerate() {
            if c & !full != 0 {
                return Err(Error::InvalidInput(format!(
                    "column {j} has entries outside {rows} rows"
                )));
            }
        }
        Ok(BinaryMatrix { rows, cols: col_bits.len(), col_bits })
    }

    /// Vertex–edge incidence matrix of a graph (the usual source of
    /// binary provenance). Column `j` has ones at the endpoints of edge `j`.
    pub fn graph_incidence(vertices: usize, edges: &[(usize, usize)]) -> Result<BinaryMatrix> {
        let mut cols = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= vertices || v >= vertices {
                return Err(Error::BadParams(format!(
                    "edge ({u},{v}) outside {vertices} vertices"
                )));
            }
            let mut c = 0u64;
            c |= 1 << u;
            c ^= 1 << v; // a self-loop yields the zero column (a loop element)
            cols.push(c);
        }
        BinaryMatrix::from_columns(vertices, cols)
    }

    /// Incidence matrix of the complete graph on `vertices` vertices, edges
    /// ordered lexicographically: (0,1), (0,2), …, (1,2), ….
    pub fn complete_graph_incidence(vertices: usize) -> Result<BinaryMatrix> {
        let mut edges = Vec::new();
        for u in 0..vertices {
            for v in u + 1..vertices {
                edges.push((u, v));
            }
        }
        BinaryMatrix::graph_incidence(vertices, &edges)
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns (the ground set size of the column matroid).
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// GF(2) rank of the column subset selected by `colmask`.
    pub fn rank_of_columns(&self, colmask: u64) -> usize {
        let mut pivots: Vec<u64> = Vec::new();
        let mut rest = colmask;
        while rest != 0 {
            let jbit = rest & rest.wrapping_neg();
            rest ^= jbit;
            let mut v = self.col_bits[jbit.trailing_zeros() as usize];
            for &p in &pivots {
                let lead = 1u64 << (63 - p.leading_zeros());
                if v & lead != 0 {
                    v ^= p;
                }
            }
            if v != 0 {
                pivots.push(v);
            }
        }
        pivots.len()
    }

    /// GF(2) rank of the whole matrix.
    pub fn rank(&self) -> usize {
        let full = if self.cols == 64 { !0u64 } else { (1u64 << self.cols) - 1 };
        self.rank_of_columns(full)
    }

    /// Minimal GF(2)-dependent column sets, enumerated by size with
    /// antichain pruning. Charged as `2^cols` states.
    pub fn circuits(&self, budget: &Budget) -> Result<SetFamily> {
        budget.charge_log2(self.cols as u32)?;
        let meter = budget.meter();
        let ground = GroundSet::new(self.cols)?;
        let mut found: Vec<u64> = Vec::new();
        for k in 1..=self.cols {
            for mask in masks_of_size(self.cols, k) {
                meter.tick(1 + found.len() as u64 / 16)?;
                if found.iter().any(|&c| c & !mask == 0) {
                    continue; // contains a smaller circuit: not minimal
                }
                if self.rank_of_columns(mask) < k {
                    found.push(mask);
                }
            }
        }
        SetFamily::from_masks(ground, found)
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.col_bits[j] >> i & 1)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for BinaryMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<BinaryMatrix> {
        let mut dims: Option<(usize, usize)> = None;
        let mut col_bits: Vec<u64> = Vec::new();
        let mut row_idx = 0usize;
        for (idx, raw) in s.split('\n').enumerate() {
            let line_no = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            match dims {
                None => {
                    let mut it = body.split_whitespace();
                    let parse = |tok: Option<&str>| -> Result<usize> {
                        tok.ok_or_else(|| Error::parse(line_no, "expected `rows cols` header"))?
                            .parse()
                            .map_err(|_| Error::parse(line_no, "bad number in `rows cols` header"))
                    };
                    let r = parse(it.next())?;
                    let c = parse(it.next())?;
                    if it.next().is_some() {
                        return Err(Error::parse(line_no, "expected exactly `rows cols`"));
                    }
                    if r == 0 || r > 64 || c == 0 || c > 64 {
                        return Err(Error::parse(line_no, "rows and cols must be in 1..=64"));
                    }
                    dims = Some((r, c));
                    col_bits = vec![0u64; c];
                }
                Some((rows, cols)) => {
                    if row_idx >= rows {
                        return Err(Error::parse(line_no, format!("more than {rows} rows")));
                    }
                    let entries: Vec<&str> = body.split_whitespace().collect();
                    if entries.len() != cols {
                        return Err(Error::parse(
                            line_no,
                            format!("expected {cols} entries, found {}", entries.len()),
                        ));
                    }
                    for (j, tok) in entries.iter().enumerate() {
                        match *tok {
                            "0" => {}
                            "1" => col_bits[j] |= 1 << row_idx,
                            other => {
                                return Err(Error::parse(
                                    line_no,
                                    format!("entry `{other}` is not 0 or 1"),
                                ))
                            }
                        }
                    }
                    row_idx += 1;
                }
            }
        }
        let (rows, _) = dims.ok_or_else(|| Error::parse(1, "missing `rows cols` header"))?;
        if row_idx != rows {
            return Err(Error::parse(
                row_idx + 2,
                format!("expected {rows} rows, found {row_idx}"),
            ));
        }
        BinaryMatrix::from_columns(rows, col_bits)
    }
}

/// A matroid given by its circuits, with bases cached for rank queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    ground: GroundSet,
    circuits: SetFamily,
    bases: SetFamily,
    rank: usize,
    binary: bool,
}

impl Matroid {
    /// Validates the circuit axioms and builds the matroid
    /// (`bases = C^{dc}`).
    pub fn from_circuits(circuits: SetFamily, budget: &Budget) -> Result<Matroid> {
        if let Some(v) = check_circuit_axioms(&circuits) {
            return Err(Error::CircuitAxiom(v.to_string()));
        }
        let bases = bases_of(&circuits, budget)?;
        let rank = bases.masks().first().map_or(0, |b| b.count_ones() as usize);
        debug_assert!(bases.masks().iter().all(|b| b.count_ones() as usize == rank));
        Ok(Matroid { ground: circuits.ground(), circuits, bases, rank, binary: false })
    }

    /// The uniform matroid `U(n,r)`: every `(r+1)`-set is a circuit, every
    /// `r`-set a basis. Requires `r ≤ n`.
    pub fn uniform(n: usize, r: usize) -> Result<Matroid> {
        let ground = GroundSet::new(n)?;
        if r > n {
            return Err(Error::BadParams(format!("rank {r} exceeds ground set size {n}")));
        }
        let circuits = SetFamily::from_masks(ground, masks_of_size(n, r + 1))?;
        let bases = SetFamily::from_masks(ground, masks_of_size(n, r))?;
        Ok(Matroid { ground, circuits, bases, rank: r, binary: false })
    }

    /// Column matroid of a GF(2) matrix; the result carries binary
    /// provenance, unlocking the chordless-circuit machinery.
    pub fn from_binary(matrix: &BinaryMatrix, budget: &Budget) -> Result<Matroid> {
        let circuits = matrix.circuits(budget)?;
        let ground = circuits.ground();
        let rank = matrix.rank();
        let mut basis_masks = Vec::new();
        for mask in masks_of_size(matrix.cols(), rank) {
            if matrix.rank_of_columns(mask) == rank {
                basis_masks.push(mask);
            }
        }
        let bases = SetFamily::from_masks(ground, basis_masks)?;
        Ok(Matroid { ground, circuits, bases, rank, binary: true })
    }

    /// The ground set.
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    /// Circuit family.
    pub fn circuits(&self) -> &SetFamily {
        &self.circuits
    }

    /// Basis family.
    pub fn bases(&self) -> &SetFamily {
        &self.bases
    }

    /// Rank of the whole ground set.
    pub fn rank_full(&self) -> usize {
        self.rank
    }

    /// Was this matroid constructed from a GF(2) matrix?
    pub fn is_binary(&self) -> bool {
        self.binary
    }

    /// No loops (1-circuits) and no parallel pairs (2-circuits)?
    pub fn is_simple(&self) -> bool {
        self.circuits.masks().iter().all(|c| c.count_ones() > 2)
    }

    /// Is the uniform structure present: every circuit of size `rank+1`
    /// and every `rank`-set a basis?
    pub fn is_uniform(&self) -> bool {
        let n = self.ground.n();
        let r = self.rank;
        self.bases.len() == binomial(n, r) as usize
            && self.circuits.len() == binomial(n, r + 1) as usize
    }

    /// Rank of a subset: the largest overlap with a basis.
    pub fn rank_of_mask(&self, x: u64) -> usize {
        self.bases
            .masks()
            .iter()
            .map(|&b| (b & x).count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Rank of a subset.
    pub fn rank(&self, x: &VSet) -> usize {
        self.rank_of_mask(x.mask())
    }

    /// Rank of every subset, indexed by mask. Charged as `2^n` states.
    pub fn rank_table(&self, budget: &Budget) -> Result<Vec<u8>> {
        let n = self.ground.n() as u32;
        budget.charge_log2(n)?;
        let bases: Vec<u64> = self.bases.masks().to_vec();
        Ok(par::map_range(0..1u64 << n, move |x| {
            bases.iter().map(|&b| (b & x).count_ones()).max().unwrap_or(0) as u8
        }))
    }

    /// Matroid closure: all vertices whose addition keeps the rank.
    pub fn closure(&self, x: &VSet) -> VSet {
        let base_rank = self.rank_of_mask(x.mask());
        let mut out = x.mask();
        let mut outside = self.ground.full_mask() & !x.mask();
        while outside != 0 {
            let v = outside & outside.wrapping_neg();
            outside ^= v;
            if self.rank_of_mask(x.mask() | v) == base_rank {
                out |= v;
            }
        }
        self.ground.vset(out).expect("closure stays inside the ground set")
    }

    /// Cocircuits: minimal sets meeting every basis (`C^{dcd}`).
    pub fn dual_circuits(&self, budget: &Budget) -> Result<SetFamily> {
        self.bases.minimal_transversals(budget)
    }

    /// Hyperplanes: complements of the cocircuits (`C^{dcdc}`).
    pub fn hyperplanes(&self, budget: &Budget) -> Result<SetFamily> {
        Ok(self.dual_circuits(budget)?.complement_family())
    }

    /// Flats: closure of the hyperplane family under intersection (always
    /// includes the ground set).
    pub fn flats(&self, budget: &Budget) -> Result<SetFamily> {
        self.hyperplanes(budget)?.intersection_closure(budget)
    }

    /// The dual matroid (binary provenance is inherited: duals of binary
    /// matroids are binary).
    pub fn dual(&self, budget: &Budget) -> Result<Matroid> {
        let mut m = Matroid::from_circuits(self.dual_circuits(budget)?, budget)?;
        m.binary = self.binary;
        Ok(m)
    }

    /// The circular formula of the circuit family.
    pub fn circular_formula(&self) -> DefiniteCnf {
        DefiniteCnf::circular(&self.circuits)
    }
}

/// Binomial coefficient as u64 (saturating; fine at desk scale).
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    acc
}

/// One independently computed criterion with its smallest counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Criterion {
    fn ok() -> Criterion {
        Criterion { holds: true, witness: None }
    }

    fn fail(witness: String) -> Criterion {
        Criterion { holds: false, witness: Some(witness) }
    }
}

/// Eleven independently evaluated criteria on a circuit candidate family
/// `C` and the circular formula `h = Φ_C`. For any nontrivial antichain
/// they are mutually equivalent, so [`CharacterizationReport::consistent`]
/// is expected to hold whether or not the family is a matroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterizationReport {
    /// The circuit elimination axiom itself.
    pub circuit_elimination: Criterion,
    /// Minimal spanning keys of `h` coincide with `C^{dc}`.
    pub keys_match_bases: Criterion,
    /// Maximal proper closed sets of `h` coincide with `C^{dcdc}`.
    pub max_true_sets_match_hyperplanes: Criterion,
    /// Closed sets of `h` are exactly the intersections of `C^{dcdc}`.
    pub true_sets_match_flat_lattice: Criterion,
    /// Adding `v` preserves rank iff some circuit sits in `X+v` through `v`.
    pub rank_preserving_additions_have_near_circuit: Criterion,
    /// Closure under `h` preserves rank.
    pub closure_preserves_rank: Criterion,
    /// Closure under `h` equals the set of rank-preserving additions.
    pub closure_matches_rank_kernel: Criterion,
    /// Closure under `h` is reached after a single saturation round.
    pub closure_needs_one_round: Criterion,
    /// The self-implied core equals the rank-preserving deletions.
    pub core_matches_rank_preserving_deletions: Criterion,
    /// No circuit has exactly one vertex outside any member of `C^{dcdc}`.
    pub circuits_never_almost_inside_hyperplane: Criterion,
    /// The prime implicates of `h` are exactly the rotations of the
    /// candidate family itself, i.e. the complete formula is `Φ_C`.
    pub complete_formula_is_circular: Criterion,
}

impl CharacterizationReport {
    /// All criteria paired with stable snake_case labels, fixed order.
    pub fn entries(&self) -> [(&'static str, &Criterion); 11] {
        [
            ("circuit_elimination", &self.circuit_elimination),
            ("keys_match_bases", &self.keys_match_bases),
            ("max_true_sets_match_hyperplanes", &self.max_true_sets_match_hyperplanes),
            ("true_sets_match_flat_lattice", &self.true_sets_match_flat_lattice),
            (
                "rank_preserving_additions_have_near_circuit",
                &self.rank_preserving_additions_have_near_circuit,
            ),
            ("closure_preserves_rank", &self.closure_preserves_rank),
            ("closure_matches_rank_kernel", &self.closure_matches_rank_kernel),
            ("closure_needs_one_round", &self.closure_needs_one_round),
            (
                "core_matches_rank_preserving_deletions",
                &self.core_matches_rank_preserving_deletions,
            ),
            (
                "circuits_never_almost_inside_hyperplane",
                &self.circuits_never_almost_inside_hyperplane,
            ),
            ("complete_formula_is_circular", &self.complete_formula_is_circular),
        ]
    }

    /// Do all criteria agree with each other?
    pub fn consistent(&self) -> bool {
        let first = self.circuit_elimination.holds;
        self.entries().iter().all(|(_, c)| c.holds == first)
    }

    /// Do all criteria hold (the family is matroid circuits)?
    pub fn all_hold(&self) -> bool {
        self.entries().iter().all(|(_, c)| c.holds)
    }
}

fn family_mismatch_witness(
    a: &SetFamily,
    b: &SetFamily,
    a_name: &str,
    b_name: &str,
) -> Option<String> {
    let g = a.ground();
    let only_a = a.masks().iter().copied().find(|&m| !b.contains_mask(m));
    let only_b = b.masks().iter().copied().find(|&m| !a.contains_mask(m));
    match (only_a, only_b) {
        (None, None) => None,
        (Some(m), None) => Some(format!("{} in {a_name} but not {b_name}", g.vset(m).unwrap())),
        (None, Some(m)) => Some(format!("{} in {b_name} but not {a_name}", g.vset(m).unwrap())),
        (Some(ma), Some(mb)) => {
            if canonical_cmp(ma, mb).is_le() {
                Some(format!("{} in {a_name} but not {b_name}", g.vset(ma).unwrap()))
            } else {
                Some(format!("{} in {b_name} but not {a_name}", g.vset(mb).unwrap()))
            }
        }
    }
}

/// Groups a formula's clauses by `body ∪ {head}` and checks that every
/// group contains all of its rotations. On success returns the family of
/// group sets; on failure, the offending set and a missing head.
fn rotation_groups(phi: &DefiniteCnf) -> std::result::Result<SetFamily, (u64, usize)> {
    let mut groups: BTreeMap<u64, u64> = BTreeMap::new();
    for &(body, head) in phi.raw_clauses() {
        *groups.entry(body | 1 << head).or_insert(0) |= 1 << head;
    }
    for (&set, &heads) in &groups {
        if heads != set {
            let missing = (set & !heads).trailing_zeros() as usize;
            return Err((set, missing));
        }
    }
    let family = SetFamily::from_masks(phi.ground(), groups.keys().copied())
        .expect("group masks are unions of clause masks, all inside the ground set");
    Ok(family)
}

/// Evaluates the eleven equivalence criteria for a candidate circuit
/// family. Requires a *nontrivial antichain*: nonempty, no empty member,
/// no containments, and not just the full ground set.
pub fn characterization_report(
    circuits: &SetFamily,
    budget: &Budget,
) -> Result<CharacterizationReport> {
    let g = circuits.ground();
    let n = g.n();
    let full = g.full_mask();
    if circuits.is_empty() {
        return Err(Error::InvalidInput("empty circuit candidate family".into()));
    }
    if circuits.contains_mask(0) {
        return Err(Error::InvalidInput(
            "the empty set cannot be a circuit candidate".into(),
        ));
    }
    if let Some((inner, outer)) = circuits.sperner_violation() {
        return Err(Error::NotSperner { inner: inner.to_string(), outer: outer.to_string() });
    }
    if circuits.masks() == [full] {
        return Err(Error::InvalidInput(
            "the family consisting of the full ground set alone is excluded".into(),
        ));
    }
    budget.charge((1u64 << n).saturating_mul(n as u64 + 1))?;

    let h = DefiniteCnf::circular(circuits);
    let closure_tab = h.closure_table(budget)?;
    let bases = bases_of(circuits, budget)?;
    let hyper = bases.minimal_transversals(budget)?.complement_family();
    let rank_tab: Vec<u8> = {
        let basis_masks: Vec<u64> = bases.masks().to_vec();
        par::map_range(0..1u64 << n, move |x| {
            basis_masks.iter().map(|&b| (b & x).count_ones()).max().unwrap_or(0) as u8
        })
    };
    let order = all_masks_canonical(n);

    let circuit_elimination = match check_circuit_axioms(circuits) {
        None => Criterion::ok(),
        Some(v) => Criterion::fail(v.to_string()),
    };

    let keys = h.minimal_keys(budget)?;
    let keys_match_bases = match family_mismatch_witness(&keys, &bases, "keys", "bases") {
        None => Criterion::ok(),
        Some(w) => Criterion::fail(w),
    };

    let max_true = h.max_nontrivial_true_sets(budget)?;
    let max_true_sets_match_hyperplanes =
        match family_mismatch_witness(&max_true, &hyper, "maximal closed sets", "hyperplane family")
        {
            None => Criterion::ok(),
            Some(w) => Criterion::fail(w),
        };

    let true_sets = h.true_sets(budget)?;
    let flat_lattice = hyper.intersection_closure(budget)?;
    let true_sets_match_flat_lattice =
        match family_mismatch_witness(&true_sets, &flat_lattice, "closed sets", "flat lattice") {
            None => Criterion::ok(),
            Some(w) => Criterion::fail(w),
        };

    let mut rank_preserving_additions_have_near_circuit = Criterion::ok();
    'outer_near: for &x in &order {
        let mut outside = full & !x;
        while outside != 0 {
            let v = outside & outside.wrapping_neg();
            outside ^= v;
            let rank_keeps = rank_tab[(x | v) as usize] == rank_tab[x as usize];
            let near_circuit = circuits
                .masks()
                .iter()
                .any(|&c| c & v != 0 && c & !(x | v) == 0);
            if rank_keeps != near_circuit {
                let vtx = v.trailing_zeros();
                rank_preserving_additions_have_near_circuit = Criterion::fail(format!(
                    "X = {}, v = {vtx}: rank preserved = {rank_keeps}, circuit through v inside X+v = {near_circuit}",
                    g.vset(x).unwrap()
                ));
                break 'outer_near;
            }
        }
    }

    let mut closure_preserves_rank = Criterion::ok();
    for &x in &order {
        let cx = closure_tab[x as usize];
        if rank_tab[cx as usize] != rank_tab[x as usize] {
            closure_preserves_rank = Criterion::fail(format!(
                "X = {}: rank {} but its closure {} has rank {}",
                g.vset(x).unwrap(),
                rank_tab[x as usize],
                g.vset(cx).unwrap(),
                rank_tab[cx as usize]
            ));
            break;
        }
    }

    let mut closure_matches_rank_kernel = Criterion::ok();
    for &x in &order {
        let mut kernel = 0u64;
        for v in 0..n {
            if rank_tab[(x | 1 << v) as usize] == rank_tab[x as usize] {
                kernel |= 1 << v;
            }
        }
        if closure_tab[x as usize] != kernel {
            closure_matches_rank_kernel = Criterion::fail(format!(
                "X = {}: closure {} but rank-preserving additions {}",
                g.vset(x).unwrap(),
                g.vset(closure_tab[x as usize]).unwrap(),
                g.vset(kernel).unwrap()
            ));
            break;
        }
    }

    let mut closure_needs_one_round = Criterion::ok();
    for &x in &order {
        if closure_tab[x as usize] != h.forward_chain_one_step_mask(x) {
            closure_needs_one_round = Criterion::fail(format!(
                "X = {}: one round gives {}, closure is {}",
                g.vset(x).unwrap(),
                g.vset(h.forward_chain_one_step_mask(x)).unwrap(),
                g.vset(closure_tab[x as usize]).unwrap()
            ));
            break;
        }
    }

    let mut core_matches_rank_preserving_deletions = Criterion::ok();
    for &x in &order {
        let core = h.core_implicate_set(&g.vset(x).unwrap()).mask();
        let mut deletions = 0u64;
        let mut inside = x;
        while inside != 0 {
            let v = inside & inside.wrapping_neg();
            inside ^= v;
            if rank_tab[(x & !v) as usize] == rank_tab[x as usize] {
                deletions |= v;
            }
        }
        if core != deletions {
            core_matches_rank_preserving_deletions = Criterion::fail(format!(
                "X = {}: core {} but rank-preserving deletions {}",
                g.vset(x).unwrap(),
                g.vset(core).unwrap(),
                g.vset(deletions).unwrap()
            ));
            break;
        }
    }

    let mut circuits_never_almost_inside_hyperplane = Criterion::ok();
    'outer_gap: for &c in circuits.masks() {
        for &t in hyper.masks() {
            if (c & !t).count_ones() == 1 {
                circuits_never_almost_inside_hyperplane = Criterion::fail(format!(
                    "circuit {} has exactly one vertex outside {}",
                    g.vset(c).unwrap(),
                    g.vset(t).unwrap()
                ));
                break 'outer_gap;
            }
        }
    }

    let prime = h.prime_implicates(budget)?;
    let complete_formula_is_circular = match rotation_groups(&prime) {
        Ok(groups) => {
            match family_mismatch_witness(&groups, circuits, "prime implicate sets", "candidates") {
                None => Criterion::ok(),
                Some(w) => Criterion::fail(w),
            }
        }
        Err((set, missing)) => Criterion::fail(format!(
            "prime implicates on {} lack the rotation with head {missing}",
            g.vset(set).unwrap()
        )),
    };

    Ok(CharacterizationReport {
        circuit_elimination,
        keys_match_bases,
        max_true_sets_match_hyperplanes,
        true_sets_match_flat_lattice,
        rank_preserving_additions_have_near_circuit,
        closure_preserves_rank,
        closure_matches_rank_kernel,
        closure_needs_one_round,
        core_matches_rank_preserving_deletions,
        circuits_never_almost_inside_hyperplane,
        complete_formula_is_circular,
    })
}

/// Why [`is_matroid_horn`] answered the way it did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatroidHornReason {
    /// The prime implicates form the circular formula of a valid circuit
    /// family.
    RecognizedCircular,
    /// The formula has no implicates at all (constant true; in particular
    /// the empty formula).
    ConstantTrue,
    /// Some prime-implicate group is missing a rotation.
    RotationIncomplete { set: VSet, missing_head: usize },
    /// The recovered family violates a circuit axiom.
    CircuitAxiomFails(String),
}

/// Outcome of matroid-Horn recognition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidHornReport {
    pub matroid_horn: bool,
    /// The recovered circuit family when recognition succeeds.
    pub circuits: Option<SetFamily>,
    pub reason: MatroidHornReason,
}

/// Is the formula equivalent to the circular formula of matroid circuits?
/// Decided structurally on the prime implicates: they must split into
/// full rotation groups whose sets satisfy the circuit axioms.
pub fn is_matroid_horn(phi: &DefiniteCnf, budget: &Budget) -> Result<MatroidHornReport> {
    let prime = phi.prime_implicates(budget)?;
    if prime.is_empty() {
        return Ok(MatroidHornReport {
            matroid_horn: false,
            circuits: None,
            reason: MatroidHornReason::ConstantTrue,
        });
    }
    match rotation_groups(&prime) {
        Err((set, missing_head)) => Ok(MatroidHornReport {
            matroid_horn: false,
            circuits: None,
            reason: MatroidHornReason::RotationIncomplete {
                set: phi.ground().vset(set)?,
                missing_head,
            },
        }),
        Ok(family) => match check_circuit_axioms(&family) {
            Some(v) => Ok(MatroidHornReport {
                matroid_horn: false,
                circuits: None,
                reason: MatroidHornReason::CircuitAxiomFails(v.to_string()),
            }),
            None => Ok(MatroidHornReport {
                matroid_horn: true,
                circuits: Some(family),
                reason: MatroidHornReason::RecognizedCircular,
            }),
        },
    }
}
