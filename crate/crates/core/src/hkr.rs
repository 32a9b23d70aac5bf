//! The quasi-isomorphism pair between (D, delta) and E(g).
//!
//! f sends a tensor to the wedge of the degree-one components of the PBW
//! symmetrization of its factors, killing any summand with a factor outside
//! g; it vanishes on coboundaries. h antisymmetrizes a wedge into D with a
//! 1/k! normalization, which is forced by f o h = id; its image consists of
//! cocycles. Cohomology is computed blockwise by (arity, word degree) with
//! exact kernel/rank computations, never globally: the differential
//! preserves total word degree, so the blocks are finite and independent.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use itertools::Itertools;

use crate::algebra::{Monomial, NCElement};
use crate::drinfeld::{bracket_g, differential, CheckOutcome};
use crate::error::CoreError;
use crate::exterior::{ext_bracket, LieBasis, PolyVector};
use crate::linalg::SparseMatrix;
use crate::scalar::Scalar;
use crate::tensor::{tuples_of_degree, TensorElement};

/// Tensor product of a list of enveloping-algebra elements.
pub fn tensor_of(elements: &[NCElement]) -> TensorElement {
    assert!(!elements.is_empty());
    let algebra = elements[0].algebra().clone();
    let mut partial: Vec<(Vec<Monomial>, Scalar)> = vec![(Vec::new(), Scalar::one())];
    for el in elements {
        let mut next = Vec::with_capacity(partial.len() * el.terms().len().max(1));
        for (prefix, c) in &partial {
            for (m, k) in el.terms() {
                let mut p2 = prefix.clone();
                p2.push(m.clone());
                next.push((p2, c * k));
            }
        }
        partial = next;
    }
    let mut out = TensorElement::zero(algebra, elements.len() as i64 - 1);
    for (tuple, c) in partial {
        out.add_term(tuple, c);
    }
    out
}

/// f: D -> E(g). Applies the PBW isomorphism factorwise, keeps only
/// summands in which every factor lies in g, and wedges those factors in
/// order. On the scalar line f is the identity onto the empty wedge.
pub fn map_f(basis: &Arc<LieBasis>, phi: &TensorElement) -> Result<PolyVector, CoreError> {
    if phi.algebra() != basis.algebra() {
        return Err(CoreError::AlgebraMismatch);
    }
    let mut out = PolyVector::zero(basis.clone());
    if phi.arity() < 0 {
        for c in phi.terms().values() {
            out.add_term(Vec::new(), c.clone());
        }
        return Ok(out);
    }
    for (tuple, c) in phi.terms() {
        // product over factors of the g-components of sigma(factor)
        let mut partial: Vec<(Vec<u16>, Scalar)> = vec![(Vec::new(), c.clone())];
        for m in tuple {
            let linear = basis.sigma_linear_monomial(m)?;
            if linear.is_empty() {
                partial.clear();
                break;
            }
            let mut next = Vec::with_capacity(partial.len() * linear.len());
            for (prefix, pc) in &partial {
                for (idx, k) in &linear {
                    let mut p2 = prefix.clone();
                    p2.push(*idx);
                    next.push((p2, pc * k));
                }
            }
            partial = next;
        }
        for (factors, coeff) in partial {
            out.add_term(factors, coeff);
        }
    }
    Ok(out)
}

/// h: E(g) -> D. On a wedge of k factors,
/// h(g_1 ^ ... ^ g_k) = (1/k!) sum over permutations of the signed tensor;
/// on the scalar line h is the inclusion into D^{-1}.
///
/// The input must be homogeneous in wedge arity so the image lands in a
/// single graded piece of D.
pub fn map_h(basis: &Arc<LieBasis>, gamma: &PolyVector) -> Result<TensorElement, CoreError> {
    if gamma.basis() != basis {
        return Err(CoreError::BasisMismatch);
    }
    let algebra = basis.algebra().clone();
    let Some(m) = gamma.homogeneous_arity() else {
        if gamma.is_zero() {
            return Ok(TensorElement::zero(algebra, -1));
        }
        return Err(CoreError::ArityMismatch(
            "h needs a wedge-homogeneous input".into(),
        ));
    };
    if m == 0 {
        let mut out = TensorElement::zero(algebra, -1);
        for c in gamma.terms().values() {
            out.add_term(Vec::new(), c.clone());
        }
        return Ok(out);
    }
    let mut out = TensorElement::zero(algebra.clone(), m as i64 - 1);
    let norm = Scalar::inv_factorial(m);
    for (indices, c) in gamma.terms() {
        let scale = c * &norm;
        for perm in (0..m).permutations(m) {
            let sign = permutation_sign(&perm);
            let factors: Vec<NCElement> = perm
                .iter()
                .map(|&p| basis.element(indices[p] as usize).clone())
                .collect();
            let tens = tensor_of(&factors);
            for (tuple, k) in tens.terms() {
                out.add_term(tuple.clone(), &(&scale * &sign) * k);
            }
        }
    }
    Ok(out)
}

fn permutation_sign(perm: &[usize]) -> Scalar {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    Scalar::sign(inversions)
}

/// One block of the differential delta: D^k(w) -> D^{k+1}(w).
pub struct DeltaBlock {
    pub domain: Vec<Vec<Monomial>>,
    pub domain_index: BTreeMap<Vec<Monomial>, usize>,
    pub codomain: Vec<Vec<Monomial>>,
    pub codomain_index: BTreeMap<Vec<Monomial>, usize>,
    pub matrix: SparseMatrix,
}

/// Shared context: a Lie basis plus cached differential blocks and the
/// enumerated wedge basis of E(g) within the sweep cutoff.
pub struct Hkr {
    basis: Arc<LieBasis>,
    cutoff: usize,
    max_block_dim: usize,
    delta_blocks: Mutex<BTreeMap<(i64, usize), Arc<DeltaBlock>>>,
}

impl Hkr {
    pub fn new(basis: Arc<LieBasis>, cutoff: usize) -> Self {
        Hkr {
            basis,
            cutoff,
            max_block_dim: 200_000,
            delta_blocks: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn with_block_guard(mut self, max_block_dim: usize) -> Self {
        self.max_block_dim = max_block_dim;
        self
    }

    pub fn basis(&self) -> &Arc<LieBasis> {
        &self.basis
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn f(&self, phi: &TensorElement) -> Result<PolyVector, CoreError> {
        map_f(&self.basis, phi)
    }

    pub fn h(&self, gamma: &PolyVector) -> Result<TensorElement, CoreError> {
        map_h(&self.basis, gamma)
    }

    /// The differential block D^k(w) -> D^{k+1}(w), cached.
    pub fn delta_block(&self, k: i64, w: usize) -> Result<Arc<DeltaBlock>, CoreError> {
        if let Some(hit) = self.delta_blocks.lock().unwrap().get(&(k, w)) {
            return Ok(hit.clone());
        }
        let algebra = self.basis.algebra();
        let domain = tuples_of_degree(algebra, k, w);
        let codomain = tuples_of_degree(algebra, k + 1, w);
        if domain.len().max(codomain.len()) > self.max_block_dim {
            return Err(CoreError::BlockTooLarge(
                domain.len().max(codomain.len()),
                self.max_block_dim,
            ));
        }
        let domain_index: BTreeMap<Vec<Monomial>, usize> = domain
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let codomain_index: BTreeMap<Vec<Monomial>, usize> = codomain
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let mut matrix = SparseMatrix::zero(codomain.len(), domain.len());
        for (col, tuple) in domain.iter().enumerate() {
            let mut el = TensorElement::zero(algebra.clone(), k);
            el.add_term(tuple.clone(), Scalar::one());
            let image = differential(&el);
            for (t, c) in image.terms() {
                let row = codomain_index
                    .get(t)
                    .expect("differential preserves total degree");
                matrix.add_to(*row, col, c);
            }
        }
        let block = Arc::new(DeltaBlock {
            domain,
            domain_index,
            codomain,
            codomain_index,
            matrix,
        });
        self.delta_blocks
            .lock()
            .unwrap()
            .insert((k, w), block.clone());
        Ok(block)
    }

    /// Solves delta(x) = rhs with free variables zero, blockwise per word
    /// degree. Errors with `RhsNotExact` when the system is inconsistent,
    /// i.e. when rhs is not a coboundary.
    pub fn solve_delta(&self, rhs: &TensorElement) -> Result<TensorElement, CoreError> {
        let target_arity = rhs.arity();
        assert!(target_arity >= 0, "rhs must live in D^k, k >= 0");
        let algebra = self.basis.algebra().clone();
        if target_arity == 0 {
            // delta vanishes on the scalar line
            return if rhs.is_zero() {
                Ok(TensorElement::zero(algebra, -1))
            } else {
                Err(CoreError::RhsNotExact(format!("{:?}", rhs)))
            };
        }
        // split by weight
        let mut by_weight: BTreeMap<usize, Vec<(&Vec<Monomial>, &Scalar)>> = BTreeMap::new();
        for (t, c) in rhs.terms() {
            by_weight
                .entry(crate::tensor::tuple_degree(t))
                .or_default()
                .push((t, c));
        }
        let mut x = TensorElement::zero(algebra, target_arity - 1);
        for (w, terms) in by_weight {
            let block = self.delta_block(target_arity - 1, w)?;
            let mut b = vec![Scalar::zero(); block.codomain.len()];
            for (t, c) in terms {
                let row = block
                    .codomain_index
                    .get(t)
                    .ok_or_else(|| CoreError::RhsNotExact(format!("{:?}", rhs)))?;
                b[*row] = c.clone();
            }
            let sol = block
                .matrix
                .solve(&b)?
                .ok_or_else(|| CoreError::RhsNotExact(format!("{:?}", rhs)))?;
            for (col, c) in sol.into_iter().enumerate() {
                if !c.is_zero() {
                    x.add_term(block.domain[col].clone(), c);
                }
            }
        }
        debug_assert_eq!(&differential(&x), rhs);
        Ok(x)
    }

    /// Strictly increasing index tuples in the Lie basis with total weight
    /// exactly w and the given number of factors.
    pub fn wedge_tuples(&self, factors: usize, w: usize) -> Vec<Vec<u16>> {
        let mut out = Vec::new();
        fn rec(
            basis: &LieBasis,
            start: usize,
            factors_left: usize,
            remaining: usize,
            acc: &mut Vec<u16>,
            out: &mut Vec<Vec<u16>>,
        ) {
            if factors_left == 0 {
                if remaining == 0 {
                    out.push(acc.clone());
                }
                return;
            }
            for i in start..basis.len() {
                let wi = basis.weight(i);
                if wi <= remaining {
                    acc.push(i as u16);
                    rec(basis, i + 1, factors_left - 1, remaining - wi, acc, out);
                    acc.pop();
                }
            }
        }
        rec(&self.basis, 0, factors, w, &mut Vec::new(), &mut out);
        out
    }

    /// All wedge basis tuples of any arity with total weight <= cutoff,
    /// including the empty wedge.
    pub fn all_wedge_tuples(&self) -> Vec<Vec<u16>> {
        let mut out = vec![Vec::new()];
        for w in 1..=self.cutoff {
            for factors in 1..=w {
                out.extend(self.wedge_tuples(factors, w));
            }
        }
        out
    }

    /// Expected cohomology dimension of the (arity k, weight w) block:
    /// the number of (k+1)-factor wedges of total weight w.
    pub fn expected_h_dim(&self, k: i64, w: usize) -> usize {
        if k == -1 {
            return usize::from(w == 0);
        }
        self.wedge_tuples((k + 1) as usize, w).len()
    }

    /// Computed cohomology dimension of one block:
    /// dim ker(delta at (k,w)) - rank(delta at (k-1,w)).
    pub fn h_dim(&self, k: i64, w: usize) -> Result<usize, CoreError> {
        if k == -1 {
            // delta vanishes on the scalar line and nothing maps into it
            return Ok(usize::from(w == 0));
        }
        let out_block = self.delta_block(k, w)?;
        let ker = out_block.matrix.cols() - out_block.matrix.rank();
        let rank_in = if k == 0 {
            // D^{-1} -> D^0 is the zero map
            0
        } else {
            self.delta_block(k - 1, w)?.matrix.rank()
        };
        Ok(ker - rank_in)
    }

    /// Dimension table rows for arities -1..=max_arity, weights 0..=cutoff.
    pub fn cohomology_table(&self, max_arity: usize) -> Result<Vec<BlockDims>, CoreError> {
        let mut rows = Vec::new();
        for k in -1..=(max_arity as i64) {
            for w in 0..=self.cutoff {
                let computed = self.h_dim(k, w)?;
                let expected = self.expected_h_dim(k, w);
                rows.push(BlockDims {
                    arity: k,
                    weight: w,
                    h_dim: computed,
                    expected,
                });
            }
        }
        Ok(rows)
    }
}

/// One row of the blockwise cohomology table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDims {
    pub arity: i64,
    pub weight: usize,
    pub h_dim: usize,
    pub expected: usize,
}

/// Full verification of the identification of H(D) with E(g):
///
/// (a) f o h = id on the wedge basis within cutoff;
/// (b) f(delta Phi) = 0 for every basis tensor (f is a chain map to a
///     zero-differential target);
/// (c) delta(h(gamma)) = 0 (h lands in cocycles);
/// (d) blockwise cohomology dimensions match wedge-power dimensions,
///     including the scalar line at arity -1;
/// (e) f([h(g1), h(g2)]_G) = [g1, g2] on basis pairs (within the cutoff for
///     the free kind, whose complex is truncated).
pub fn verify_hkr(hkr: &Hkr, max_arity: usize) -> Result<Vec<CheckOutcome>, CoreError> {
    let basis = hkr.basis().clone();
    let algebra = basis.algebra().clone();
    let mut outcomes = Vec::new();
    let wedges = hkr.all_wedge_tuples();

    // (a) f o h = id
    {
        let mut bad = None;
        for t in &wedges {
            let gamma = PolyVector::wedge_monomial(basis.clone(), t.clone(), Scalar::one());
            let back = map_f(&basis, &map_h(&basis, &gamma)?)?;
            if back != gamma {
                bad = Some(format!("{:?}", gamma));
                break;
            }
        }
        outcomes.push(outcome("fh_identity", wedges.len(), bad));
    }

    // (b) f o delta = 0 on basis tensors
    {
        let mut bad = None;
        let mut count = 0;
        'outer: for k in 0..=max_arity as i64 {
            for w in 0..=hkr.cutoff() {
                for tuple in tuples_of_degree(&algebra, k, w) {
                    count += 1;
                    let mut el = TensorElement::zero(algebra.clone(), k);
                    el.add_term(tuple.clone(), Scalar::one());
                    if !map_f(&basis, &differential(&el))?.is_zero() {
                        bad = Some(format!("{:?}", el));
                        break 'outer;
                    }
                }
            }
        }
        outcomes.push(outcome("f_kills_coboundaries", count, bad));
    }

    // (c) delta o h = 0
    {
        let mut bad = None;
        for t in &wedges {
            let gamma = PolyVector::wedge_monomial(basis.clone(), t.clone(), Scalar::one());
            if !differential(&map_h(&basis, &gamma)?).is_zero() {
                bad = Some(format!("{:?}", gamma));
                break;
            }
        }
        outcomes.push(outcome("h_lands_in_cocycles", wedges.len(), bad));
    }

    // (d) cohomology dimensions per block
    {
        let rows = hkr.cohomology_table(max_arity)?;
        let bad = rows.iter().find(|r| r.h_dim != r.expected).map(|r| {
            format!(
                "arity {} weight {}: {} != {}",
                r.arity, r.weight, r.h_dim, r.expected
            )
        });
        outcomes.push(outcome("cohomology_dimensions", rows.len(), bad));
    }

    // (e) induced bracket
    {
        let pairs: Vec<&Vec<u16>> = wedges.iter().filter(|t| !t.is_empty()).collect();
        let mut bad = None;
        let mut count = 0;
        'outer: for t1 in &pairs {
            for t2 in &pairs {
                let g1 = PolyVector::wedge_monomial(basis.clone(), (*t1).clone(), Scalar::one());
                let g2 = PolyVector::wedge_monomial(basis.clone(), (*t2).clone(), Scalar::one());
                if let Some(cut) = algebra.cutoff() {
                    if g1.max_weight() + g2.max_weight() > cut {
                        continue;
                    }
                }
                count += 1;
                let lhs = map_f(
                    &basis,
                    &bracket_g(&map_h(&basis, &g1)?, &map_h(&basis, &g2)?)?,
                )?;
                let rhs = ext_bracket(&g1, &g2)?;
                if lhs != rhs {
                    bad = Some(format!("{:?} , {:?}", g1, g2));
                    break 'outer;
                }
            }
        }
        outcomes.push(outcome("induced_bracket", count, bad));
    }

    Ok(outcomes)
}

fn outcome(name: &str, checked: usize, bad: Option<String>) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        pass: bad.is_none(),
        checked,
        counterexample: bad,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebraSpec;
    use crate::exterior::lyndon_basis;

    fn free2_hkr() -> Hkr {
        Hkr::new(lyndon_basis(2, 3).unwrap(), 3)
    }

    #[test]
    fn f_examples() {
        let hkr = free2_hkr();
        let basis = hkr.basis().clone();
        let alg = basis.algebra().clone();
        let e1 = NCElement::generator(alg.clone(), 0);
        let e2 = NCElement::generator(alg.clone(), 1);
        // f(e1 (x) e2) = e1 ^ e2
        let t = tensor_of(&[e1.clone(), e2.clone()]);
        let expected = PolyVector::wedge_monomial(basis.clone(), vec![0, 1], Scalar::one());
        assert_eq!(hkr.f(&t).unwrap(), expected);
        // f(1) = 0 at arity 0
        let one = TensorElement::from_nc(&NCElement::one(alg.clone()));
        assert!(hkr.f(&one).unwrap().is_zero());
        // f(e1 e2) = (1/2)[e1,e2]
        let prod = crate::algebra::nc_mul(&e1, &e2).unwrap();
        let f = hkr.f(&TensorElement::from_nc(&prod)).unwrap();
        let idx = basis.index_of_name("[e1,e2]").unwrap();
        let expected =
            PolyVector::basis_vector(basis.clone(), idx).scale(&Scalar::from_ratio(1, 2));
        assert_eq!(f, expected);
    }

    #[test]
    fn h_examples() {
        let hkr = free2_hkr();
        let basis = hkr.basis().clone();
        let alg = basis.algebra().clone();
        // h(e) = e
        let v = PolyVector::basis_vector(basis.clone(), 0);
        let hv = hkr.h(&v).unwrap();
        assert_eq!(
            hv,
            TensorElement::from_nc(&NCElement::generator(alg.clone(), 0))
        );
        // h(e1 ^ e2) = (1/2)(e1 (x) e2 - e2 (x) e1)
        let w = PolyVector::wedge_monomial(basis.clone(), vec![0, 1], Scalar::one());
        let hw = hkr.h(&w).unwrap();
        let e1 = NCElement::generator(alg.clone(), 0);
        let e2 = NCElement::generator(alg.clone(), 1);
        let expected = tensor_of(&[e1.clone(), e2.clone()])
            .sub(&tensor_of(&[e2, e1]))
            .unwrap()
            .scale(&Scalar::from_ratio(1, 2));
        assert_eq!(hw, expected);
        // h on the scalar line is the inclusion
        let c = PolyVector::scalar(basis.clone(), Scalar::from_ratio(3, 4));
        let hc = hkr.h(&c).unwrap();
        assert_eq!(hc.arity(), -1);
        assert_eq!(hc.terms().get(&Vec::new()), Some(&Scalar::from_ratio(3, 4)));
    }

    #[test]
    fn h_dimension_blocks_free2() {
        let hkr = free2_hkr();
        // H^{-1} is the scalar line
        assert_eq!(hkr.h_dim(-1, 0).unwrap(), 1);
        // (k=0, w=1): the two generators
        assert_eq!(hkr.h_dim(0, 1).unwrap(), 2);
        // (k=0, w=0): the unit is not a cocycle
        assert_eq!(hkr.h_dim(0, 0).unwrap(), 0);
        // (k=1, w=2): e1 ^ e2
        assert_eq!(hkr.h_dim(1, 2).unwrap(), 1);
    }

    #[test]
    fn full_hkr_free2() {
        let hkr = free2_hkr();
        for oc in verify_hkr(&hkr, 2).unwrap() {
            assert!(oc.pass, "{} failed: {:?}", oc.name, oc.counterexample);
        }
    }

    #[test]
    fn full_hkr_borel() {
        let basis = LieBasis::new(LieAlgebraSpec::borel()).unwrap();
        let hkr = Hkr::new(basis, 3);
        for oc in verify_hkr(&hkr, 2).unwrap() {
            assert!(oc.pass, "{} failed: {:?}", oc.name, oc.counterexample);
        }
        // H^1 block totals dim ^2 b = 1
        let total: usize = (0..=3).map(|w| hkr.h_dim(1, w).unwrap()).sum();
        assert_eq!(total, 1);
    }

    #[test]
    fn abelian_line_has_no_higher_cohomology() {
        let hkr = Hkr::new(lyndon_basis(1, 2).unwrap(), 2);
        for k in 1..=2i64 {
            for w in 0..=2usize {
                assert_eq!(hkr.h_dim(k, w).unwrap(), 0, "H^{k} at weight {w}");
            }
        }
    }

    #[test]
    fn solve_delta_roundtrip() {
        // delta of something is solvable and the solution maps back
        let hkr = free2_hkr();
        let alg = hkr.basis().algebra().clone();
        let e1 = NCElement::generator(alg.clone(), 0);
        let e2 = NCElement::generator(alg.clone(), 1);
        let x0 = tensor_of(&[crate::algebra::nc_mul(&e1, &e2).unwrap(), e2.clone()]);
        let rhs = differential(&x0);
        assert!(!rhs.is_zero());
        let x = hkr.solve_delta(&rhs).unwrap();
        assert_eq!(differential(&x), rhs);
        // something that is not exact: a generator is a cocycle that is not
        // a coboundary
        let bad = TensorElement::from_nc(&e1);
        assert!(matches!(
            hkr.solve_delta(&bad),
            Err(CoreError::RhsNotExact(_))
        ));
    }
}
