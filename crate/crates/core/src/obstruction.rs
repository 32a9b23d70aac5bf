//! Formality obstruction calculus.
//!
//! A morphism from E(g) to D with structure maps F_1 = h, F_2, ... has, at
//! each order n, a defect
//!
//!   zeta_n(g_1..g_n) =
//!       1/2 sum_{k+l=n} 1/(k! l!) sum_{perms} eps q(F_k(..), F_l(..))
//!     -     sum_{i<j} eps_{ij} F_{n-1}(q(g_i,g_j), ..hats..)
//!
//! with q(A, B) = (-1)^{deg A}[A, B] on either side and Koszul signs in the
//! shifted parities. The maps satisfy delta(F_n) = zeta_n; at each order the
//! defect is delta-closed, and the cohomology class of zeta_n, read off as
//! the cochain f o zeta_n, is the obstruction to solving for F_n. When the
//! obstruction cochain is a coboundary d(psi), replacing F_{n-1} by
//! F_{n-1} - h o psi kills it: f o zeta_n is precisely reduced by d(psi),
//! because the differential on cochains is the linearization of f o zeta_n
//! in the top structure map (an identity the tests check directly).
//!
//! The bracket-pattern census and the two-dimensional vanishing argument
//! live here as well: admissible cochains are wedge products of iterated
//! brackets of polyvector components whose coefficients depend only on the
//! argument degrees, so they are classified by bracket trees with a source
//! assignment, up to permutations of the polyvectors and of the component
//! indices.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::cochain::{ce_differential, is_coboundary, twisted_bracket, Cochain, WedgeBasis};
use crate::drinfeld::bracket_g;
use crate::error::CoreError;
use crate::exterior::{LieBasis, PolyVector};
use crate::hkr::Hkr;
use crate::scalar::Scalar;
use crate::tensor::TensorElement;

/// The structure maps F_1 = h, F_2, ..., stored extensionally on sorted
/// basis tuples of E(g) within the cutoff.
pub struct StructureMaps {
    wb: Arc<WedgeBasis>,
    /// tables[n] holds F_n for n >= 2.
    tables: BTreeMap<usize, BTreeMap<Vec<u16>, TensorElement>>,
}

impl fmt::Debug for StructureMaps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<(usize, usize)> = self.tables.iter().map(|(n, t)| (*n, t.len())).collect();
        f.debug_struct("StructureMaps")
            .field("tables", &sizes)
            .finish()
    }
}

impl StructureMaps {
    pub fn new(wb: Arc<WedgeBasis>) -> Self {
        StructureMaps {
            wb,
            tables: BTreeMap::new(),
        }
    }

    pub fn wedge_basis(&self) -> &Arc<WedgeBasis> {
        &self.wb
    }

    pub fn max_order(&self) -> usize {
        self.tables.keys().max().copied().unwrap_or(1)
    }

    pub fn table(&self, n: usize) -> Option<&BTreeMap<Vec<u16>, TensorElement>> {
        self.tables.get(&n)
    }

    pub fn set_value(&mut self, n: usize, tuple: Vec<u16>, value: TensorElement) {
        debug_assert!(n >= 2 && tuple.len() == n);
        self.tables.entry(n).or_default().insert(tuple, value);
    }

    /// Expected tensor arity of F_n on the tuple; the scalar line absorbs
    /// everything below it.
    fn value_arity(&self, n: usize, tuple: &[u16]) -> i64 {
        let degs: i64 = tuple.iter().map(|&i| self.wb.degree(i as usize)).sum();
        (degs + 1 - n as i64).max(-1)
    }

    /// F_n on a basis tuple in any argument order. F_1 is the
    /// antisymmetrization map h; higher maps are table lookups extended by
    /// graded symmetry; absent entries are zero.
    pub fn value(&self, hkr: &Hkr, n: usize, tuple: &[u16]) -> Result<TensorElement, CoreError> {
        debug_assert_eq!(tuple.len(), n);
        let algebra = self.wb.lie().algebra().clone();
        if n == 1 {
            let gamma = self.wb.polyvector(tuple[0] as usize);
            return hkr.h(&gamma);
        }
        let zero_arity = self.value_arity(n, tuple);
        match self.wb.koszul_sort(tuple) {
            None => Ok(TensorElement::zero(algebra, zero_arity)),
            Some((sorted, sign)) => match self.tables.get(&n).and_then(|t| t.get(&sorted)) {
                None => Ok(TensorElement::zero(algebra, zero_arity)),
                Some(v) => Ok(v.scale(&sign)),
            },
        }
    }

    /// F_n with the first argument a linear combination of basis wedges.
    pub fn value_lin(
        &self,
        hkr: &Hkr,
        n: usize,
        first: &PolyVector,
        rest: &[u16],
    ) -> Result<TensorElement, CoreError> {
        let mut out: Option<TensorElement> = None;
        for (t, c) in first.terms() {
            let idx = self.wb.index_of(t).ok_or_else(|| {
                CoreError::CutoffExceeded(format!("wedge {:?} escapes the enumerated domain", t))
            })?;
            let mut tuple = Vec::with_capacity(rest.len() + 1);
            tuple.push(idx as u16);
            tuple.extend_from_slice(rest);
            let v = self.value(hkr, n, &tuple)?.scale(c);
            out = Some(match out {
                None => v,
                Some(acc) => {
                    if acc.is_zero() && acc.arity() != v.arity() {
                        v
                    } else if v.is_zero() && acc.arity() != v.arity() {
                        acc
                    } else {
                        acc.add(&v)?
                    }
                }
            });
        }
        Ok(out.unwrap_or_else(|| TensorElement::zero(self.wb.lie().algebra().clone(), -1)))
    }
}

/// q(A, B) = (-1)^{arity A}[A, B]_G for tensors. The scalar line D^{-1} is
/// central here: structure maps may take scalar values (the differential
/// kills them), and on cohomology a wedge-arity-zero factor brackets to
/// zero, so consistency forces [K, -] = 0 rather than an error.
fn twisted_bracket_d(a: &TensorElement, b: &TensorElement) -> Result<TensorElement, CoreError> {
    if a.is_zero() || b.is_zero() || a.arity() < 0 || b.arity() < 0 {
        let arity = (a.arity() + b.arity()).max(-1);
        return Ok(TensorElement::zero(a.algebra().clone(), arity));
    }
    Ok(bracket_g(a, b)?.scale(&Scalar::sign(a.arity().rem_euclid(2) as usize)))
}

/// The order-n defect of the morphism with the given structure maps,
/// evaluated on a basis tuple.
pub fn defect(
    hkr: &Hkr,
    maps: &StructureMaps,
    n: usize,
    tuple: &[u16],
) -> Result<TensorElement, CoreError> {
    debug_assert!(n >= 2 && tuple.len() == n);
    let wb = maps.wedge_basis().clone();
    let algebra = wb.lie().algebra().clone();
    let degs: i64 = tuple.iter().map(|&i| wb.degree(i as usize)).sum();
    let target_arity = (degs + 2 - n as i64).max(-1);
    let mut out = TensorElement::zero(algebra.clone(), target_arity);

    // bracket part
    for k in 1..n {
        let l = n - k;
        let norm =
            &(&Scalar::from_ratio(1, 2) * &Scalar::inv_factorial(k)) * &Scalar::inv_factorial(l);
        for perm in (0..n).permutations(n) {
            let eps = wb.koszul_sign_of_perm(tuple, &perm);
            let left: Vec<u16> = perm[..k].iter().map(|&p| tuple[p]).collect();
            let right: Vec<u16> = perm[k..].iter().map(|&p| tuple[p]).collect();
            let a = maps.value(hkr, k, &left)?;
            if a.is_zero() || a.arity() < 0 {
                continue;
            }
            let b = maps.value(hkr, l, &right)?;
            if b.is_zero() || b.arity() < 0 {
                continue;
            }
            let term = twisted_bracket_d(&a, &b)?.scale(&(&norm * &eps));
            out = out.add(&term)?;
        }
    }

    // inserted-bracket part
    for i in 0..n {
        for j in (i + 1)..n {
            let gi = wb.polyvector(tuple[i] as usize);
            let gj = wb.polyvector(tuple[j] as usize);
            let merged = twisted_bracket(&gi, &gj)?;
            if merged.is_zero() {
                continue;
            }
            let mut rest: Vec<u16> = Vec::with_capacity(n - 2);
            for (p, &a) in tuple.iter().enumerate() {
                if p != i && p != j {
                    rest.push(a);
                }
            }
            let term = maps.value_lin(hkr, n - 1, &merged, &rest)?;
            if term.is_zero() {
                continue;
            }
            let sign = wb.sign_extract_pair(tuple, i, j);
            out = out.sub(&term.scale(&sign))?;
        }
    }
    Ok(out)
}

/// Solves delta(F_2(g1, g2)) = zeta_2(g1, g2) for every sorted basis pair
/// within the cutoff. Solvability is the computational content of the
/// induced-bracket identity: the class of the right-hand side vanishes.
pub fn solve_f2(hkr: &Hkr, wb: &Arc<WedgeBasis>) -> Result<StructureMaps, CoreError> {
    let mut maps = StructureMaps::new(wb.clone());
    for tuple in wb.arg_tuples(2) {
        let rhs = defect(hkr, &maps, 2, &tuple)?;
        let value = if rhs.arity() <= 0 {
            // the scalar line carries the zero differential
            if !rhs.is_zero() {
                return Err(CoreError::RhsNotExact(format!("{:?}", rhs)));
            }
            TensorElement::zero(wb.lie().algebra().clone(), -1)
        } else {
            hkr.solve_delta(&rhs)?
        };
        maps.set_value(2, tuple, value);
    }
    Ok(maps)
}

/// The first obstruction cochain Q_3 = f o zeta_3 built from F_1 = h and
/// the solved F_2: a ternary cochain of map degree -1.
pub fn obstruction_cocycle(hkr: &Hkr, maps: &StructureMaps) -> Result<Cochain, CoreError> {
    let wb = maps.wedge_basis().clone();
    let mut q3 = Cochain::zero(wb.clone(), 3, -1);
    for tuple in wb.arg_tuples(3) {
        let z = defect(hkr, maps, 3, &tuple)?;
        q3.set_value(tuple, hkr.f(&z)?);
    }
    Ok(q3)
}

/// f o zeta_n as a cochain of map degree 2 - n.
pub fn defect_cocycle(hkr: &Hkr, maps: &StructureMaps, n: usize) -> Result<Cochain, CoreError> {
    let wb = maps.wedge_basis().clone();
    let mut q = Cochain::zero(wb.clone(), n, 2 - n as i64);
    for tuple in wb.arg_tuples(n) {
        let z = defect(hkr, maps, n, &tuple)?;
        q.set_value(tuple, hkr.f(&z)?);
    }
    Ok(q)
}

/// Absorbs an exact obstruction: F_{n-1} becomes F_{n-1} - h o psi, which
/// subtracts d(psi) from the order-n obstruction cochain.
pub fn absorb_witness(
    hkr: &Hkr,
    maps: &mut StructureMaps,
    n: usize,
    psi: &Cochain,
) -> Result<(), CoreError> {
    debug_assert_eq!(psi.args(), n - 1);
    let wb = maps.wedge_basis().clone();
    for tuple in wb.arg_tuples(n - 1) {
        let correction = hkr.h(&psi.value(&tuple))?;
        if correction.is_zero() {
            continue;
        }
        let current = maps.value(hkr, n - 1, &tuple)?;
        let updated = if current.is_zero() && current.arity() != correction.arity() {
            correction.scale(&-Scalar::one())
        } else {
            current.sub(&correction)?
        };
        maps.set_value(n - 1, tuple.clone(), updated);
    }
    Ok(())
}

/// Report of the order-by-order analysis of the first obstruction.
#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub q3_is_zero: bool,
    pub q3_closed: bool,
    pub q3_exact: bool,
    pub witness_reproduces: bool,
    pub tuples_checked: usize,
    pub q3: Cochain,
    pub witness: Option<Cochain>,
}

/// Builds F_2, the first obstruction cochain, checks closedness, and
/// produces an exact coboundary witness.
pub fn analyze_first_obstruction(
    hkr: &Hkr,
    wb: &Arc<WedgeBasis>,
) -> Result<ObstructionReport, CoreError> {
    let maps = solve_f2(hkr, wb)?;
    let q3 = obstruction_cocycle(hkr, &maps)?;
    let closed = ce_differential(&q3)?.is_zero();
    let witness = if closed { is_coboundary(&q3)? } else { None };
    let (exact, reproduces) = match &witness {
        None => (false, false),
        Some(psi) => {
            let back = ce_differential(psi)?;
            (true, back.sub(&q3)?.is_zero())
        }
    };
    Ok(ObstructionReport {
        q3_is_zero: q3.is_zero(),
        q3_closed: closed,
        q3_exact: exact,
        witness_reproduces: reproduces,
        tuples_checked: wb.arg_tuples(3).len(),
        q3,
        witness,
    })
}

// ---------------------------------------------------------------------------
// bracket-pattern census
// ---------------------------------------------------------------------------

/// A rooted bracket expression whose leaves name (polyvector slot,
/// component slot) pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PatternTree {
    Leaf { arg: u8, comp: u8 },
    Node(Box<PatternTree>, Box<PatternTree>),
}

impl PatternTree {
    fn leaf(arg: u8, comp: u8) -> Self {
        PatternTree::Leaf { arg, comp }
    }

    fn node(l: PatternTree, r: PatternTree) -> Self {
        PatternTree::Node(Box::new(l), Box::new(r))
    }

    pub fn bracket_count(&self) -> usize {
        match self {
            PatternTree::Leaf { .. } => 0,
            PatternTree::Node(l, r) => 1 + l.bracket_count() + r.bracket_count(),
        }
    }

    pub fn leaves(&self) -> Vec<(u8, u8)> {
        match self {
            PatternTree::Leaf { arg, comp } => vec![(*arg, *comp)],
            PatternTree::Node(l, r) => {
                let mut out = l.leaves();
                out.extend(r.leaves());
                out
            }
        }
    }
}

impl fmt::Display for PatternTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTree::Leaf { arg, comp } => {
                let name = [b'x', b'y', b'z', b'w'][*arg as usize % 4] as char;
                write!(f, "{name}{comp}")
            }
            PatternTree::Node(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

/// A census entry: the explicit bracket forest of a term type, with all
/// remaining components of each polyvector wedged on. Coefficients of
/// admissible cochains depend only on the argument degrees, so the census
/// carries no scalars. `wildcard_brackets` counts unconstrained two-leaf
/// brackets standing for a family of types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketPattern {
    pub num_args: usize,
    pub trees: Vec<PatternTree>,
    pub wildcard_brackets: usize,
}

impl fmt::Display for BracketPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.trees.iter().map(|t| t.to_string()).collect();
        for _ in 0..self.wildcard_brackets {
            parts.push("[*,*']".into());
        }
        parts.push("(rest)".into());
        write!(f, "{}", parts.join(" ^ "))
    }
}

impl BracketPattern {
    pub fn bracket_count(&self) -> usize {
        self.trees
            .iter()
            .map(PatternTree::bracket_count)
            .sum::<usize>()
            + self.wildcard_brackets
    }

    pub fn component_count(&self) -> usize {
        self.trees.iter().map(|t| t.leaves().len()).sum::<usize>() + 2 * self.wildcard_brackets
    }

    /// Every component slot appears exactly once across the bracket trees.
    pub fn slots_distinct(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        for t in &self.trees {
            for leaf in t.leaves() {
                if !seen.insert(leaf) {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds a left comb [[[s1,s2],s3],...] over the source sequence, handing
/// out component indices per source in reading order.
fn comb_from_sources(sources: &[u8]) -> PatternTree {
    let mut next_comp = [0u8; 4];
    let mut take = |src: u8| {
        let c = next_comp[src as usize];
        next_comp[src as usize] += 1;
        PatternTree::leaf(src, c)
    };
    let mut tree = PatternTree::node(take(sources[0]), take(sources[1]));
    for &s in &sources[2..] {
        tree = PatternTree::node(tree, take(s));
    }
    tree
}

fn swap01(s: u8) -> u8 {
    match s {
        0 => 1,
        1 => 0,
        other => other,
    }
}

/// Census of the term types of an admissible ternary cochain built from
/// three bracket operations, classified up to permutation of the
/// polyvectors and of the component indices.
///
/// - 4 components: a single four-leaf comb whose innermost bracket joins
///   two distinct polyvectors; the two outer slots never both come from the
///   polyvector absent from the innermost bracket.
/// - 5 components: a three-leaf comb with a distinct-source innermost
///   bracket, wedged with one unconstrained bracket (a family).
/// - 6 components: three two-leaf brackets, pairwise distinct as source
///   pairs, covering every polyvector, and never with exactly two
///   same-source brackets.
pub fn enumerate_patterns(
    num_args: usize,
    num_brackets: usize,
    total_components: usize,
) -> Result<Vec<BracketPattern>, CoreError> {
    if num_args != 3 || num_brackets != 3 || !(4..=6).contains(&total_components) {
        return Err(CoreError::Unsupported(format!(
            "census is defined for 3 arguments, 3 brackets, 4..6 components; got ({num_args}, {num_brackets}, {total_components})"
        )));
    }
    let patterns = match total_components {
        4 => {
            let mut classes: Vec<(u8, u8)> = Vec::new();
            for s3 in 0..3u8 {
                for s4 in 0..3u8 {
                    if s3 == 2 && s4 == 2 {
                        continue;
                    }
                    // canonical representative under exchanging the two
                    // innermost polyvectors
                    let cand = (s3, s4);
                    let swapped = (swap01(s3), swap01(s4));
                    let canon = cand.min(swapped);
                    if !classes.contains(&canon) {
                        classes.push(canon);
                    }
                }
            }
            classes.sort();
            classes
                .into_iter()
                .map(|(s3, s4)| BracketPattern {
                    num_args: 3,
                    trees: vec![comb_from_sources(&[0, 1, s3, s4])],
                    wildcard_brackets: 0,
                })
                .collect()
        }
        5 => {
            // three-leaf comb + one family bracket; s3 canonicalized under
            // the innermost exchange
            [2u8, 0u8]
                .into_iter()
                .map(|s3| BracketPattern {
                    num_args: 3,
                    trees: vec![comb_from_sources(&[0, 1, s3])],
                    wildcard_brackets: 1,
                })
                .collect()
        }
        6 => {
            let pairs: Vec<(u8, u8)> = vec![(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];
            let mut classes: Vec<Vec<(u8, u8)>> = Vec::new();
            for combo in pairs.iter().combinations(3) {
                let multiset: Vec<(u8, u8)> = combo.iter().map(|p| **p).collect();
                // every polyvector contributes a bracketed component
                let mut used = [false; 3];
                for (a, b) in &multiset {
                    used[*a as usize] = true;
                    used[*b as usize] = true;
                }
                if !used.iter().all(|&u| u) {
                    continue;
                }
                // exactly two same-source brackets cannot arise
                let loops = multiset.iter().filter(|(a, b)| a == b).count();
                if loops == 2 {
                    continue;
                }
                // canonicalize under relabeling the polyvectors
                let canon = (0..3u8)
                    .permutations(3)
                    .map(|perm| {
                        let mut relabeled: Vec<(u8, u8)> = multiset
                            .iter()
                            .map(|(a, b)| {
                                let (x, y) = (perm[*a as usize], perm[*b as usize]);
                                (x.min(y), x.max(y))
                            })
                            .collect();
                        relabeled.sort();
                        relabeled
                    })
                    .min()
                    .expect("nonempty");
                if !classes.contains(&canon) {
                    classes.push(canon);
                }
            }
            // order: no self-bracket first, then one, then three
            classes.sort_by_key(|c| {
                (
                    c.iter().filter(|(a, b)| a == b).count(),
                    std::cmp::Reverse(c.clone()),
                )
            });
            classes
                .into_iter()
                .map(|pairs| {
                    let mut next_comp = [0u8; 4];
                    let mut take = |src: u8| {
                        let c = next_comp[src as usize];
                        next_comp[src as usize] += 1;
                        PatternTree::leaf(src, c)
                    };
                    let trees = pairs
                        .into_iter()
                        .map(|(a, b)| {
                            let l = take(a);
                            let r = take(b);
                            PatternTree::node(l, r)
                        })
                        .collect();
                    BracketPattern {
                        num_args: 3,
                        trees,
                        wildcard_brackets: 0,
                    }
                })
                .collect()
        }
        _ => unreachable!(),
    };
    Ok(patterns)
}

// ---------------------------------------------------------------------------
// two-dimensional vanishing
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

fn tree_shapes(brackets: usize) -> Vec<Shape> {
    if brackets == 0 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for left in 0..brackets {
        let right = brackets - 1 - left;
        for l in tree_shapes(left) {
            for r in tree_shapes(right) {
                out.push(Shape::Node(Box::new(l.clone()), Box::new(r)));
            }
        }
    }
    out
}

/// All multisets of positive bracket counts summing to `total`.
fn forest_partitions(total: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if total == 0 {
            out.push(acc.clone());
            return;
        }
        for next in (1..=total.min(max)).rev() {
            acc.push(next);
            rec(total - next, next, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, &mut Vec::new(), &mut out);
    out
}

/// Evaluates a shape on a sequence of Lie-basis leaf values, consuming the
/// slice front to back; the value is an element of g.
fn eval_shape(
    lie: &Arc<LieBasis>,
    shape: &Shape,
    leaves: &mut std::slice::Iter<'_, usize>,
) -> PolyVector {
    match shape {
        Shape::Leaf => {
            let idx = *leaves.next().expect("enough leaves");
            PolyVector::basis_vector(lie.clone(), idx)
        }
        Shape::Node(l, r) => {
            let a = eval_shape(lie, l, leaves);
            let b = eval_shape(lie, r, leaves);
            crate::exterior::ext_bracket(&a, &b).expect("same basis")
        }
    }
}

/// Outcome of the two-dimensional vanishing analysis for n-argument
/// cochains of the critical degree over a two-dimensional algebra.
#[derive(Clone, Debug)]
pub struct VanishingReport {
    pub n: usize,
    pub brackets: usize,
    pub max_second_generator_components: usize,
    pub counting_certificate: bool,
    pub direct_evaluations: usize,
    pub direct_all_zero: bool,
}

/// For an n-argument cochain of degree 1-n over a two-dimensional algebra,
/// every term carries 2n-1 brackets while at most n+1 components of the
/// second generator are available; for n > 2 the count forces vanishing.
/// For n = 3 the claim is also verified by direct evaluation of every
/// 5-bracket forest on every assignment of components drawn from the
/// basis polyvectors.
pub fn verify_2d_vanishing(lie: &Arc<LieBasis>, n: usize) -> Result<VanishingReport, CoreError> {
    if lie.len() != 2 {
        return Err(CoreError::Unsupported(
            "the vanishing argument needs a two-dimensional Lie algebra".into(),
        ));
    }
    if n < 3 {
        return Err(CoreError::Unsupported("the lemma applies for n > 2".into()));
    }
    let brackets = 2 * n - 1;
    let max_e2 = n + 1;
    let counting = brackets > max_e2;

    let mut evaluations = 0usize;
    let mut all_zero = true;
    if n == 3 {
        // argument tuples: sorted multisets of length 4 over {e1, e2, e1^e2}
        let args: Vec<Vec<usize>> = (0..3usize)
            .combinations_with_replacement(4)
            .map(|c| c.to_vec())
            .collect();
        // component pool per argument kind: e1 -> [0], e2 -> [1], wedge -> [0,1]
        let comps_of = |kind: usize| -> Vec<usize> {
            match kind {
                0 => vec![0],
                1 => vec![1],
                _ => vec![0, 1],
            }
        };
        let mut avail_pairs: Vec<(usize, usize)> = Vec::new();
        for tuple in &args {
            let mut avail = [0usize; 2];
            for &kind in tuple {
                for c in comps_of(kind) {
                    avail[c] += 1;
                }
            }
            let pair = (avail[0], avail[1]);
            if !avail_pairs.contains(&pair) {
                avail_pairs.push(pair);
            }
        }

        let shapes_cache: Vec<Vec<Shape>> = (0..=brackets).map(tree_shapes).collect();
        for partition in forest_partitions(brackets) {
            let leaves_total: usize = partition.iter().map(|b| b + 1).sum();
            if leaves_total > 8 {
                continue; // more leaves than any four arguments can supply
            }
            // all shape combinations for this partition
            let choices: Vec<&Vec<Shape>> = partition.iter().map(|&b| &shapes_cache[b]).collect();
            let mut idx = vec![0usize; choices.len()];
            loop {
                let forest: Vec<&Shape> = idx.iter().zip(&choices).map(|(&i, c)| &c[i]).collect();
                for &(a0, a1) in &avail_pairs {
                    // leaf values with counts within the available pool
                    for assignment in 0u32..(1 << leaves_total) {
                        let values: Vec<usize> = (0..leaves_total)
                            .map(|b| ((assignment >> b) & 1) as usize)
                            .collect();
                        let ones = values.iter().sum::<usize>();
                        if ones > a1 || leaves_total - ones > a0 {
                            continue;
                        }
                        evaluations += 1;
                        let mut it = values.iter();
                        let mut product: Option<PolyVector> = None;
                        for shape in &forest {
                            let v = eval_shape(lie, shape, &mut it);
                            product = Some(match product {
                                None => v,
                                Some(p) => p.wedge(&v)?,
                            });
                            if product.as_ref().is_some_and(PolyVector::is_zero) {
                                break;
                            }
                        }
                        // skipped leaves belong to trees after an early zero
                        if let Some(p) = product {
                            if !p.is_zero() {
                                all_zero = false;
                            }
                        }
                    }
                }
                // next shape combination
                let mut pos = 0;
                loop {
                    if pos == idx.len() {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] < choices[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
        }
    }

    Ok(VanishingReport {
        n,
        brackets,
        max_second_generator_components: max_e2,
        counting_certificate: counting,
        direct_evaluations: evaluations,
        direct_all_zero: all_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebraSpec;
    use crate::exterior::lyndon_basis;

    fn setup(generators: usize, cutoff: usize) -> (Hkr, Arc<WedgeBasis>) {
        let basis = lyndon_basis(generators, cutoff).unwrap();
        let hkr = Hkr::new(basis.clone(), cutoff);
        let wb = WedgeBasis::new(basis, cutoff);
        (hkr, wb)
    }

    fn setup_borel(cutoff: usize) -> (Hkr, Arc<WedgeBasis>) {
        let basis = crate::exterior::LieBasis::new(LieAlgebraSpec::borel()).unwrap();
        let hkr = Hkr::new(basis.clone(), cutoff);
        let wb = WedgeBasis::new(basis, cutoff);
        (hkr, wb)
    }

    #[test]
    fn f2_on_borel_generators_vanishes() {
        let (hkr, wb) = setup_borel(2);
        let maps = solve_f2(&hkr, &wb).unwrap();
        // (e1, e2): the commutator of primitives equals the bracket, so the
        // right-hand side is zero and the free-variables-zero rule gives 0
        let v = maps.value(&hkr, 2, &[0, 1]).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn f2_vanishes_when_one_argument_is_a_vector() {
        let (hkr, wb) = setup(2, 4);
        let maps = solve_f2(&hkr, &wb).unwrap();
        for tuple in wb.arg_tuples(2) {
            let has_vector = tuple.iter().any(|&i| wb.arity(i as usize) == 1);
            if has_vector {
                let v = maps.value(&hkr, 2, &tuple).unwrap();
                assert!(v.is_zero(), "F2 nonzero on {:?}", tuple);
            }
        }
    }

    #[test]
    fn f2_solves_its_defect() {
        let (hkr, wb) = setup(2, 4);
        let maps = solve_f2(&hkr, &wb).unwrap();
        for tuple in wb.arg_tuples(2) {
            let rhs = defect(&hkr, &StructureMaps::new(wb.clone()), 2, &tuple).unwrap();
            let v = maps.value(&hkr, 2, &tuple).unwrap();
            if v.arity() >= 0 {
                assert_eq!(crate::drinfeld::differential(&v), rhs, "at {:?}", tuple);
            } else {
                assert!(rhs.is_zero());
            }
        }
        // there is a genuinely nonzero F2 at this cutoff
        let nonzero = wb
            .arg_tuples(2)
            .iter()
            .any(|t| !maps.value(&hkr, 2, t).unwrap().is_zero());
        assert!(nonzero, "expected a nonzero F2 value at cutoff 4");
    }

    #[test]
    fn defect_values_are_closed() {
        let (hkr, wb) = setup(2, 4);
        let maps = solve_f2(&hkr, &wb).unwrap();
        for tuple in wb.arg_tuples(3) {
            let z = defect(&hkr, &maps, 3, &tuple).unwrap();
            if z.arity() >= 0 {
                assert!(
                    crate::drinfeld::differential(&z).is_zero(),
                    "defect not closed at {:?}",
                    tuple
                );
            }
        }
    }

    #[test]
    fn differential_is_defect_linearization() {
        // replacing F_2 by F_2 + h o psi changes f o zeta_3 by exactly the
        // differential of psi; this pins the cochain convention against the
        // structure-map convention
        for (hkr, wb) in [setup(2, 4), setup_borel(2)] {
            let maps0 = solve_f2(&hkr, &wb).unwrap();
            let q0 = defect_cocycle(&hkr, &maps0, 3).unwrap();
            // pseudo-random binary psi of map degree -1
            let mut psi = Cochain::zero(wb.clone(), 2, -1);
            let mut counter = 0i64;
            for t in wb.arg_tuples(2) {
                let degs: i64 = t.iter().map(|&i| wb.degree(i as usize)).sum();
                let arity = degs - 1 + 1;
                if arity < 0 {
                    continue;
                }
                let lie = wb.lie().clone();
                let mut v = PolyVector::zero(lie.clone());
                let w: usize = t.iter().map(|&i| wb.weight(i as usize)).sum();
                for cand in
                    super::super::hkr::Hkr::new(lie.clone(), w).wedge_tuples(arity as usize, w)
                {
                    counter += 1;
                    v.add_term(cand, Scalar::from_int((counter % 5) - 2));
                }
                if lie.algebra().cutoff().is_none() {
                    // filtered case: any wedge of the right arity
                    for wt in 0..=2usize {
                        for cand in super::super::hkr::Hkr::new(lie.clone(), 2)
                            .wedge_tuples(arity as usize, wt)
                        {
                            counter += 1;
                            v.add_term(cand, Scalar::from_int((counter % 5) - 2));
                        }
                    }
                }
                psi.set_value(t, v);
            }
            let mut maps1 = solve_f2(&hkr, &wb).unwrap();
            // F_2 + h o psi
            for t in wb.arg_tuples(2) {
                let corr = hkr.h(&psi.value(&t)).unwrap();
                if corr.is_zero() {
                    continue;
                }
                let cur = maps1.value(&hkr, 2, &t).unwrap();
                let updated = if cur.is_zero() && cur.arity() != corr.arity() {
                    corr
                } else {
                    cur.add(&corr).unwrap()
                };
                maps1.set_value(2, t, updated);
            }
            let q1 = defect_cocycle(&hkr, &maps1, 3).unwrap();
            let delta_q = q1.sub(&q0).unwrap();
            let dpsi = ce_differential(&psi).unwrap();
            assert!(
                delta_q.sub(&dpsi).unwrap().is_zero(),
                "linearization mismatch"
            );
        }
    }

    #[test]
    fn first_obstruction_free2() {
        let (hkr, wb) = setup(2, 4);
        let report = analyze_first_obstruction(&hkr, &wb).unwrap();
        assert!(report.q3_closed);
        assert!(report.q3_exact);
        assert!(report.witness_reproduces);
    }

    #[test]
    fn census_counts() {
        assert_eq!(enumerate_patterns(3, 3, 4).unwrap().len(), 4);
        assert_eq!(enumerate_patterns(3, 3, 5).unwrap().len(), 2);
        assert_eq!(enumerate_patterns(3, 3, 6).unwrap().len(), 4);
        assert!(enumerate_patterns(3, 3, 7).is_err());
        assert!(enumerate_patterns(2, 3, 4).is_err());
    }

    #[test]
    fn census_matches_printed_types() {
        let four: Vec<String> = enumerate_patterns(3, 3, 4)
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(
            four,
            vec![
                "[[[x0,y0],x1],x2] ^ (rest)",
                "[[[x0,y0],x1],y1] ^ (rest)",
                "[[[x0,y0],x1],z0] ^ (rest)",
                "[[[x0,y0],z0],x1] ^ (rest)",
            ]
        );
        let five: Vec<String> = enumerate_patterns(3, 3, 5)
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(
            five,
            vec![
                "[[x0,y0],z0] ^ [*,*'] ^ (rest)",
                "[[x0,y0],x1] ^ [*,*'] ^ (rest)",
            ]
        );
        let six: Vec<String> = enumerate_patterns(3, 3, 6)
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(
            six,
            vec![
                "[x0,y0] ^ [x1,z0] ^ [y1,z1] ^ (rest)",
                "[x0,x1] ^ [x2,y0] ^ [y1,z0] ^ (rest)",
                "[x0,x1] ^ [x2,y0] ^ [x3,z0] ^ (rest)",
                "[x0,x1] ^ [y0,y1] ^ [z0,z1] ^ (rest)",
            ]
        );
        for p in enumerate_patterns(3, 3, 6).unwrap() {
            assert!(p.slots_distinct());
            assert_eq!(p.bracket_count(), 3);
            assert_eq!(p.component_count(), 6);
        }
    }

    #[test]
    fn two_dimensional_vanishing() {
        let lie = crate::exterior::LieBasis::new(LieAlgebraSpec::borel()).unwrap();
        let report = verify_2d_vanishing(&lie, 3).unwrap();
        assert!(report.counting_certificate);
        assert!(report.direct_all_zero);
        assert!(report.direct_evaluations > 0);
        for n in 4..=6 {
            let r = verify_2d_vanishing(&lie, n).unwrap();
            assert!(r.counting_certificate, "counting fails at n={n}");
        }
        // a bracket of equal basis elements vanishes
        let e1 = PolyVector::basis_vector(lie.clone(), 0);
        assert!(crate::exterior::ext_bracket(&e1, &e1).unwrap().is_zero());
    }
}
