//! The graded Lie algebra E(g): exterior powers of a Lie basis with the
//! bracket extended from g as a biderivation.
//!
//! For the free kind the Lie basis consists of standard bracketings of
//! Lyndon words up to the degree cutoff, ordered by (weight, lex); counts
//! per degree match the Witt numbers and linear independence is certified
//! by rank computation on word coordinates.
//!
//! Grading convention: a wedge of m factors has DGLA degree m-1, matching
//! the identification of H^k(D) with the (k+1)-st exterior power. The
//! extended bracket is
//!
//!   [a_1^...^a_p, b_1^...^b_q]
//!     = (-1)^{(p-1)(q-1)} sum_{i,j} (-1)^{i+j}
//!         [a_i,b_j] ^ a_1^..^{a_i}^..^a_p ^ b_1^..^{b_j}^..^b_q
//!
//! (hats mark omitted factors, indices 1-based). The overall normalization
//! (-1)^{(p-1)(q-1)} is pinned by the induced-bracket identity
//! f([h(x), h(y)]_G) = [x, y]: computing both routes on x = y = a^b over a
//! free algebra forces [a^b, a^b] = -2 a^b^[a,b]. Restricted to vectors the
//! bracket is the Lie bracket of g, and graded antisymmetry and Jacobi hold
//! for the shifted degrees; the verification suite checks all of this
//! exhaustively.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::algebra::{commutator, AlgebraKind, LieAlgebraSpec, Monomial, NCElement, SymElement};
use crate::error::CoreError;
use crate::linalg::SparseMatrix;
use crate::scalar::Scalar;
use crate::tensor::monomials_of_degree;

/// All Lyndon words over `alphabet` letters with length in 1..=max_len,
/// in Duval order (lexicographic).
pub fn lyndon_words(alphabet: usize, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut w = vec![0u8];
    loop {
        if w.len() <= max_len {
            out.push(w.clone());
        }
        // Duval: extend periodically to max length, then increment the tail
        let len = w.len();
        let mut ext = Vec::with_capacity(max_len);
        while ext.len() < max_len {
            ext.push(w[ext.len() % len]);
        }
        w = ext;
        while let Some(&last) = w.last() {
            if last as usize == alphabet - 1 {
                w.pop();
            } else {
                break;
            }
        }
        if w.is_empty() {
            break;
        }
        *w.last_mut().unwrap() += 1;
    }
    out
}

/// Number of Lyndon words of length d over an n-letter alphabet
/// (the necklace/Witt count).
pub fn witt_dimension(n: usize, d: usize) -> usize {
    fn moebius(mut m: usize) -> i64 {
        let mut mu = 1i64;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                m /= p;
                if m % p == 0 {
                    return 0;
                }
                mu = -mu;
            }
            p += 1;
        }
        if m > 1 {
            mu = -mu;
        }
        mu
    }
    let mut total = 0i64;
    for e in 1..=d {
        if d % e == 0 {
            total += moebius(e) * (n as i64).pow((d / e) as u32);
        }
    }
    (total / d as i64) as usize
}

fn is_lyndon(w: &[u8]) -> bool {
    if w.is_empty() {
        return false;
    }
    for i in 1..w.len() {
        if w[i..] <= *w {
            return false;
        }
    }
    true
}

/// Standard (right) factorization of a Lyndon word of length >= 2:
/// the right factor is the lexicographically smallest proper suffix.
fn standard_factorization(w: &[u8]) -> (Vec<u8>, Vec<u8>) {
    debug_assert!(w.len() >= 2 && is_lyndon(w));
    let mut best = 1;
    for i in 2..w.len() {
        if w[i..] < w[best..] {
            best = i;
        }
    }
    (w[..best].to_vec(), w[best..].to_vec())
}

/// Bracket-notation name for a standard bracketing, e.g. "[e1,[e1,e2]]".
fn bracketing_name(algebra: &LieAlgebraSpec, w: &[u8]) -> String {
    if w.len() == 1 {
        return algebra.generator_name(w[0] as usize);
    }
    let (u, v) = standard_factorization(w);
    format!(
        "[{},{}]",
        bracketing_name(algebra, &u),
        bracketing_name(algebra, &v)
    )
}

fn bracketing_element(algebra: &Arc<LieAlgebraSpec>, w: &[u8]) -> NCElement {
    if w.len() == 1 {
        return NCElement::generator(algebra.clone(), w[0] as usize);
    }
    let (u, v) = standard_factorization(w);
    let a = bracketing_element(algebra, &u);
    let b = bracketing_element(algebra, &v);
    commutator(&a, &b).expect("same algebra")
}

/// An ordered basis of the Lie algebra g inside its enveloping algebra,
/// with cached symmetrization data for the PBW isomorphism.
pub struct LieBasis {
    algebra: Arc<LieAlgebraSpec>,
    elements: Vec<NCElement>,
    weights: Vec<usize>,
    names: Vec<String>,
    /// [x_i, x_j] in basis coordinates.
    bracket_table: Vec<Vec<Vec<(u16, Scalar)>>>,
    sym_cache: Mutex<BTreeMap<Vec<u16>, NCElement>>,
    sigma_cache: Mutex<BTreeMap<Monomial, SymElement>>,
}

impl fmt::Debug for LieBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieBasis")
            .field("names", &self.names)
            .finish()
    }
}

impl PartialEq for LieBasis {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.names == other.names
    }
}
impl Eq for LieBasis {}

impl LieBasis {
    /// Basis of the underlying Lie algebra: Lyndon bracketings for the free
    /// kind (up to the cutoff), the given basis for structure constants.
    pub fn new(algebra: Arc<LieAlgebraSpec>) -> Result<Arc<Self>, CoreError> {
        match algebra.kind() {
            AlgebraKind::Free { generators, cutoff } => {
                let (generators, cutoff) = (*generators, *cutoff);
                let mut words = lyndon_words(generators, cutoff);
                words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
                let elements: Vec<NCElement> = words
                    .iter()
                    .map(|w| bracketing_element(&algebra, w))
                    .collect();
                let weights: Vec<usize> = words.iter().map(Vec::len).collect();
                let names: Vec<String> =
                    words.iter().map(|w| bracketing_name(&algebra, w)).collect();
                for d in 1..=cutoff {
                    let count = weights.iter().filter(|&&w| w == d).count();
                    if count != witt_dimension(generators, d) {
                        return Err(CoreError::InvalidAlgebra(format!(
                            "Lyndon count at degree {d} is {count}, expected {}",
                            witt_dimension(generators, d)
                        )));
                    }
                }
                let basis = LieBasis::build(algebra, elements, weights, names)?;
                basis.check_independence()?;
                Ok(basis)
            }
            AlgebraKind::StructureConstants { names, .. } => {
                let n = names.len();
                let elements: Vec<NCElement> = (0..n)
                    .map(|i| NCElement::generator(algebra.clone(), i))
                    .collect();
                let weights = vec![1usize; n];
                let names = names.clone();
                LieBasis::build(algebra, elements, weights, names)
            }
        }
    }

    fn build(
        algebra: Arc<LieAlgebraSpec>,
        elements: Vec<NCElement>,
        weights: Vec<usize>,
        names: Vec<String>,
    ) -> Result<Arc<Self>, CoreError> {
        let n = elements.len();
        let mut table = vec![vec![Vec::new(); n]; n];
        match algebra.kind() {
            AlgebraKind::StructureConstants { table: sc, .. } => {
                for i in 0..n {
                    for j in 0..n {
                        table[i][j] = sc[i][j]
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(k, c)| (k as u16, c.clone()))
                            .collect();
                    }
                }
            }
            AlgebraKind::Free { .. } => {
                // coordinates of [x_i, x_j]; the commutator is weight-graded
                // and brackets beyond the cutoff vanish in the quotient
                for i in 0..n {
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let br = commutator(&elements[i], &elements[j])?;
                        if br.is_zero() {
                            continue;
                        }
                        let w = weights[i] + weights[j];
                        let coords =
                            express_in_span(&elements, &weights, w, &br).ok_or_else(|| {
                                CoreError::InvalidAlgebra(format!(
                                    "bracket of basis elements {i},{j} is not in the Lie span"
                                ))
                            })?;
                        table[i][j] = coords;
                    }
                }
            }
        }
        Ok(Arc::new(LieBasis {
            algebra,
            elements,
            weights,
            names,
            bracket_table: table,
            sym_cache: Mutex::new(BTreeMap::new()),
            sigma_cache: Mutex::new(BTreeMap::new()),
        }))
    }

    fn check_independence(&self) -> Result<(), CoreError> {
        let max_w = self.weights.iter().copied().max().unwrap_or(0);
        for w in 1..=max_w {
            let idxs: Vec<usize> = (0..self.len()).filter(|&i| self.weights[i] == w).collect();
            if idxs.is_empty() {
                continue;
            }
            let words = monomials_of_degree(&self.algebra, w);
            let word_index: BTreeMap<&Monomial, usize> =
                words.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut m = SparseMatrix::zero(words.len(), idxs.len());
            for (col, &i) in idxs.iter().enumerate() {
                for (mon, c) in self.elements[i].terms() {
                    m.set(word_index[mon], col, c.clone());
                }
            }
            if m.rank() != idxs.len() {
                return Err(CoreError::InvalidAlgebra(format!(
                    "basis elements of weight {w} are linearly dependent"
                )));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraSpec> {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &NCElement {
        &self.elements[i]
    }

    pub fn weight(&self, i: usize) -> usize {
        self.weights[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// [x_i, x_j] in basis coordinates.
    pub fn bracket(&self, i: usize, j: usize) -> &[(u16, Scalar)] {
        &self.bracket_table[i][j]
    }

    /// Symmetrized product of a sorted multiset of basis elements:
    /// sym(g_1 ... g_k) = (1/k!) sum over permutations of the product.
    pub fn sym_multiset(&self, multiset: &[u16]) -> NCElement {
        debug_assert!(multiset.windows(2).all(|w| w[0] <= w[1]));
        if multiset.is_empty() {
            return NCElement::one(self.algebra.clone());
        }
        if let Some(hit) = self.sym_cache.lock().unwrap().get(multiset) {
            return hit.clone();
        }
        // grouping the permutations by their first factor gives
        // sym(m) = (1/k) sum_v count_v * x_v * sym(m - v)
        let k = multiset.len();
        let mut acc = NCElement::zero(self.algebra.clone());
        let mut i = 0;
        while i < k {
            let v = multiset[i];
            let mut count = 1;
            while i + count < k && multiset[i + count] == v {
                count += 1;
            }
            let mut rest = multiset.to_vec();
            rest.remove(i);
            let tail = self.sym_multiset(&rest);
            let prod = crate::algebra::nc_mul(&self.elements[v as usize], &tail).unwrap();
            acc = acc
                .add(&prod.scale(&Scalar::from_int(count as i64)))
                .unwrap();
            i += count;
        }
        let result = acc.scale(&Scalar::from_ratio(1, k as i64));
        self.sym_cache
            .lock()
            .unwrap()
            .insert(multiset.to_vec(), result.clone());
        result
    }

    /// sym extended linearly from multisets to all of S(g).
    pub fn sym(&self, s: &SymElement) -> NCElement {
        let mut out = NCElement::zero(self.algebra.clone());
        for (multiset, c) in s.terms() {
            out = out.add(&self.sym_multiset(multiset).scale(c)).unwrap();
        }
        out
    }

    /// All sorted multisets of basis indices with total weight w.
    pub fn multisets_of_weight(&self, w: usize) -> Vec<Vec<u16>> {
        let mut out = Vec::new();
        let n = self.len();
        fn rec(
            basis: &LieBasis,
            start: usize,
            remaining: usize,
            acc: &mut Vec<u16>,
            out: &mut Vec<Vec<u16>>,
            n: usize,
        ) {
            if remaining == 0 {
                out.push(acc.clone());
                return;
            }
            for i in start..n {
                let wi = basis.weights[i];
                if wi <= remaining {
                    acc.push(i as u16);
                    rec(basis, i, remaining - wi, acc, out, n);
                    acc.pop();
                }
            }
        }
        rec(self, 0, w, &mut Vec::new(), &mut out, n);
        out.sort();
        out
    }

    /// sigma = sym^{-1} on one canonical monomial, solved blockwise by
    /// weight; the whole block is cached on first use.
    fn sigma_monomial(&self, m: &Monomial) -> Result<SymElement, CoreError> {
        if let Some(hit) = self.sigma_cache.lock().unwrap().get(m) {
            return Ok(hit.clone());
        }
        let w = m.degree();
        if let Some(cut) = self.algebra.cutoff() {
            if w > cut {
                return Err(CoreError::CutoffExceeded(format!("{:?}", m)));
            }
        }
        // sym is filtered, not graded, over structure constants: sym of a
        // weight-w multiset may contain monomials of lower degree. Solve on
        // the full filtration block of weight <= w.
        let mut multisets = Vec::new();
        let mut words = Vec::new();
        for d in 0..=w {
            multisets.extend(self.multisets_of_weight(d));
            words.extend(monomials_of_degree(&self.algebra, d));
        }
        if multisets.len() != words.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "S(g) block of weight <= {w} has {} multisets but U has {} monomials",
                multisets.len(),
                words.len()
            )));
        }
        let word_index: BTreeMap<&Monomial, usize> =
            words.iter().enumerate().map(|(i, mo)| (mo, i)).collect();
        let mut mat = SparseMatrix::zero(words.len(), multisets.len());
        for (col, ms) in multisets.iter().enumerate() {
            for (mon, c) in self.sym_multiset(ms).terms() {
                mat.set(word_index[mon], col, c.clone());
            }
        }
        let mut solved: Vec<(Monomial, SymElement)> = Vec::new();
        for (row_target, mon) in words.iter().enumerate() {
            let mut rhs = vec![Scalar::zero(); words.len()];
            rhs[row_target] = Scalar::one();
            let x = mat
                .solve(&rhs)?
                .ok_or_else(|| CoreError::DimensionMismatch("sym block is singular".into()))?;
            let mut s = SymElement::zero();
            for (col, coef) in x.into_iter().enumerate() {
                if !coef.is_zero() {
                    s.add_term(multisets[col].clone(), coef);
                }
            }
            solved.push((mon.clone(), s));
        }
        let mut cache = self.sigma_cache.lock().unwrap();
        for (mon, s) in solved {
            cache.insert(mon, s);
        }
        Ok(cache.get(m).expect("block contains the monomial").clone())
    }

    /// The PBW isomorphism sigma: U(g) -> S(g), inverse of sym.
    pub fn sigma(&self, a: &NCElement) -> Result<SymElement, CoreError> {
        if a.algebra() != &self.algebra {
            return Err(CoreError::AlgebraMismatch);
        }
        let mut out = SymElement::zero();
        for (m, c) in a.terms() {
            let s = self.sigma_monomial(m)?;
            for (ms, k) in s.terms() {
                out.add_term(ms.clone(), c * k);
            }
        }
        Ok(out)
    }

    /// The g-component of sigma(a): coordinates on the Lie basis.
    pub fn sigma_linear(&self, a: &NCElement) -> Result<Vec<(u16, Scalar)>, CoreError> {
        Ok(self.sigma(a)?.linear_part())
    }

    /// The g-component of sigma on a single canonical monomial.
    pub fn sigma_linear_monomial(&self, m: &Monomial) -> Result<Vec<(u16, Scalar)>, CoreError> {
        Ok(self.sigma_monomial(m)?.linear_part())
    }
}

/// Express an element lying in the span of the weight-w basis elements in
/// basis coordinates, or None if it is not in the span.
fn express_in_span(
    elements: &[NCElement],
    weights: &[usize],
    w: usize,
    target: &NCElement,
) -> Option<Vec<(u16, Scalar)>> {
    let algebra = target.algebra();
    let idxs: Vec<usize> = (0..elements.len()).filter(|&i| weights[i] == w).collect();
    let words = monomials_of_degree(algebra, w);
    let word_index: BTreeMap<&Monomial, usize> =
        words.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut m = SparseMatrix::zero(words.len(), idxs.len());
    for (col, &i) in idxs.iter().enumerate() {
        for (mon, c) in elements[i].terms() {
            m.set(*word_index.get(mon)?, col, c.clone());
        }
    }
    let mut rhs = vec![Scalar::zero(); words.len()];
    for (mon, c) in target.terms() {
        rhs[*word_index.get(mon)?] = c.clone();
    }
    let x = m.solve(&rhs).ok()??;
    Some(
        x.into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(col, c)| (idxs[col] as u16, c))
            .collect(),
    )
}

/// Sparse element of E(g): a map from strictly increasing tuples of Lie
/// basis indices to coefficients. The empty tuple is the scalar line.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyVector {
    basis: Arc<LieBasis>,
    terms: BTreeMap<Vec<u16>, Scalar>,
}

impl fmt::Debug for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| {
                if t.is_empty() {
                    format!("{}", c)
                } else {
                    let names: Vec<&str> = t.iter().map(|&i| self.basis.name(i as usize)).collect();
                    format!("{} * {}", c, names.join(" ^ "))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl PolyVector {
    pub fn zero(basis: Arc<LieBasis>) -> Self {
        PolyVector {
            basis,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(basis: Arc<LieBasis>, c: Scalar) -> Self {
        let mut pv = PolyVector::zero(basis);
        pv.add_term(Vec::new(), c);
        pv
    }

    pub fn basis_vector(basis: Arc<LieBasis>, i: usize) -> Self {
        let mut pv = PolyVector::zero(basis);
        pv.add_term(vec![i as u16], Scalar::one());
        pv
    }

    pub fn wedge_monomial(basis: Arc<LieBasis>, indices: Vec<u16>, c: Scalar) -> Self {
        let mut pv = PolyVector::zero(basis);
        pv.add_term(indices, c);
        pv
    }

    pub fn basis(&self) -> &Arc<LieBasis> {
        &self.basis
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u16>, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds c * (wedge of the given factors), canonicalizing: factors are
    /// sorted ascending with the permutation sign, repeats collapse to zero.
    pub fn add_term(&mut self, mut indices: Vec<u16>, mut c: Scalar) {
        if c.is_zero() {
            return;
        }
        // insertion sort tracking the sign
        for i in 1..indices.len() {
            let mut j = i;
            while j > 0 && indices[j - 1] > indices[j] {
                indices.swap(j - 1, j);
                c = -c;
                j -= 1;
            }
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(indices) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &PolyVector) -> Result<PolyVector, CoreError> {
        if self.basis != other.basis {
            return Err(CoreError::BasisMismatch);
        }
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PolyVector) -> Result<PolyVector, CoreError> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, s: &Scalar) -> PolyVector {
        if s.is_zero() {
            return PolyVector::zero(self.basis.clone());
        }
        let mut out = PolyVector::zero(self.basis.clone());
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c * s);
        }
        out
    }

    /// Wedge product.
    pub fn wedge(&self, other: &PolyVector) -> Result<PolyVector, CoreError> {
        if self.basis != other.basis {
            return Err(CoreError::BasisMismatch);
        }
        let mut out = PolyVector::zero(self.basis.clone());
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                let mut t = ta.clone();
                t.extend_from_slice(tb);
                out.add_term(t, ca * cb);
            }
        }
        Ok(out)
    }

    /// True if every stored wedge has exactly `m` factors.
    pub fn is_homogeneous_of_arity(&self, m: usize) -> bool {
        self.terms.keys().all(|t| t.len() == m)
    }

    /// Wedge arity if nonzero and homogeneous.
    pub fn homogeneous_arity(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let first = it.next()?.len();
        it.all(|t| t.len() == first).then_some(first)
    }

    /// Total weight of a wedge monomial (sum of factor weights).
    pub fn monomial_weight(&self, t: &[u16]) -> usize {
        t.iter().map(|&i| self.basis.weight(i as usize)).sum()
    }

    pub fn max_weight(&self) -> usize {
        self.terms
            .keys()
            .map(|t| self.monomial_weight(t))
            .max()
            .unwrap_or(0)
    }
}

/// The biderivation extension of the Lie bracket of g to E(g).
pub fn ext_bracket(g1: &PolyVector, g2: &PolyVector) -> Result<PolyVector, CoreError> {
    if g1.basis() != g2.basis() {
        return Err(CoreError::BasisMismatch);
    }
    let basis = g1.basis().clone();
    let mut out = PolyVector::zero(basis.clone());
    for (ta, ca) in g1.terms() {
        let p = ta.len();
        for (tb, cb) in g2.terms() {
            let q = tb.len();
            if p == 0 || q == 0 {
                continue;
            }
            let prefactor = Scalar::sign((p - 1) * (q - 1));
            let c0 = &(ca * cb) * &prefactor;
            for i in 0..p {
                for j in 0..q {
                    let coords = basis.bracket(ta[i] as usize, tb[j] as usize);
                    if coords.is_empty() {
                        continue;
                    }
                    let sign = Scalar::sign(i + j); // (-1)^{(i+1)+(j+1)}
                    for (k, kc) in coords {
                        let mut tuple = Vec::with_capacity(p + q - 1);
                        tuple.push(*k);
                        tuple.extend(
                            ta.iter()
                                .enumerate()
                                .filter(|(a, _)| *a != i)
                                .map(|(_, v)| *v),
                        );
                        tuple.extend(
                            tb.iter()
                                .enumerate()
                                .filter(|(b, _)| *b != j)
                                .map(|(_, v)| *v),
                        );
                        out.add_term(tuple, &(&c0 * &sign) * kc);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// True iff r (homogeneous of wedge-arity 2) satisfies [r, r] = 0 exactly.
pub fn is_triangular(r: &PolyVector) -> Result<bool, CoreError> {
    if !r.is_homogeneous_of_arity(2) {
        return Err(CoreError::ArityMismatch(
            "r must be homogeneous of wedge-arity 2".into(),
        ));
    }
    Ok(ext_bracket(r, r)?.is_zero())
}

/// The Lyndon basis of the free Lie algebra, expanded into word coordinates.
pub fn lyndon_basis(
    generator_count: usize,
    degree_cutoff: usize,
) -> Result<Arc<LieBasis>, CoreError> {
    let algebra = LieAlgebraSpec::free(generator_count, degree_cutoff)?;
    LieBasis::new(algebra)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_counts() {
        assert_eq!(lyndon_basis(2, 1).unwrap().len(), 2);
        assert_eq!(lyndon_basis(2, 2).unwrap().len(), 3);
        assert_eq!(lyndon_basis(2, 3).unwrap().len(), 5);
        assert_eq!(lyndon_basis(2, 5).unwrap().len(), 2 + 1 + 2 + 3 + 6);
        assert_eq!(lyndon_basis(3, 3).unwrap().len(), 3 + 3 + 8);
    }

    #[test]
    fn lyndon_degree_three_names() {
        let basis = lyndon_basis(2, 3).unwrap();
        let names: Vec<&str> = (0..basis.len()).map(|i| basis.name(i)).collect();
        assert_eq!(
            names,
            vec!["e1", "e2", "[e1,e2]", "[e1,[e1,e2]]", "[[e1,e2],e2]"]
        );
    }

    #[test]
    fn borel_basis_brackets() {
        let basis = LieBasis::new(LieAlgebraSpec::borel()).unwrap();
        assert_eq!(basis.bracket(0, 1), &[(0, Scalar::from_int(2))]);
        assert_eq!(basis.bracket(1, 0), &[(0, Scalar::from_int(-2))]);
    }

    #[test]
    fn sigma_fixes_degree_one() {
        let basis = lyndon_basis(2, 3).unwrap();
        for i in 0..basis.len() {
            let s = basis.sigma(basis.element(i)).unwrap();
            assert_eq!(s.terms().len(), 1);
            let (ms, c) = s.terms().iter().next().unwrap();
            assert_eq!(ms, &vec![i as u16]);
            assert!(c.is_one());
        }
        let one = NCElement::one(basis.algebra().clone());
        assert_eq!(basis.sigma(&one).unwrap(), SymElement::one());
    }

    #[test]
    fn sigma_of_word_e1e2() {
        // sigma(e1 e2) = e1.e2 + (1/2)[e1,e2]
        let basis = lyndon_basis(2, 3).unwrap();
        let alg = basis.algebra().clone();
        let e1 = NCElement::generator(alg.clone(), 0);
        let e2 = NCElement::generator(alg.clone(), 1);
        let prod = crate::algebra::nc_mul(&e1, &e2).unwrap();
        let s = basis.sigma(&prod).unwrap();
        let mut expected = SymElement::zero();
        expected.add_term(vec![0, 1], Scalar::one());
        expected.add_term(vec![2], Scalar::from_ratio(1, 2));
        assert_eq!(s, expected);
    }

    #[test]
    fn sigma_inverts_sym() {
        for basis in [
            lyndon_basis(2, 3).unwrap(),
            LieBasis::new(LieAlgebraSpec::borel()).unwrap(),
        ] {
            for w in 0..=3usize {
                for ms in basis.multisets_of_weight(w) {
                    let u = basis.sym_multiset(&ms);
                    let back = basis.sigma(&u).unwrap();
                    let expected = SymElement::from_multiset(ms.clone(), Scalar::one());
                    assert_eq!(back, expected, "sigma(sym) != id at {:?}", ms);
                }
            }
        }
    }

    #[test]
    fn ext_bracket_restricts_to_lie_bracket() {
        let basis = LieBasis::new(LieAlgebraSpec::borel()).unwrap();
        let e1 = PolyVector::basis_vector(basis.clone(), 0);
        let e2 = PolyVector::basis_vector(basis.clone(), 1);
        let br = ext_bracket(&e1, &e2).unwrap();
        assert_eq!(br, e1.scale(&Scalar::from_int(2)));
    }

    #[test]
    fn ext_bracket_vector_with_wedge() {
        // [e1, e1^e2] = e1 ^ [e1,e2] = 2 e1^e1 = 0 over the Borel algebra
        let basis = LieBasis::new(LieAlgebraSpec::borel()).unwrap();
        let e1 = PolyVector::basis_vector(basis.clone(), 0);
        let w = PolyVector::wedge_monomial(basis.clone(), vec![0, 1], Scalar::one());
        assert!(ext_bracket(&e1, &w).unwrap().is_zero());
        // [e2, e1^e2] = [e2,e1] ^ e2 = -2 e1^e2
        let e2 = PolyVector::basis_vector(basis.clone(), 1);
        let br = ext_bracket(&e2, &w).unwrap();
        assert_eq!(br, w.scale(&Scalar::from_int(-2)));
    }

    #[test]
    fn square_of_two_form_on_free_three() {
        // [a^b, a^b] = -2 a^b^[a,b] over the free Lie algebra on 3 generators
        let basis = lyndon_basis(3, 2).unwrap();
        let ab = PolyVector::wedge_monomial(basis.clone(), vec![0, 1], Scalar::one());
        let sq = ext_bracket(&ab, &ab).unwrap();
        let idx_ab = basis.index_of_name("[e1,e2]").unwrap() as u16;
        let expected =
            PolyVector::wedge_monomial(basis.clone(), vec![0, 1, idx_ab], Scalar::from_int(-2));
        assert_eq!(sq, expected);
        assert!(!is_triangular(&ab).unwrap());
    }

    #[test]
    fn triangularity_examples() {
        // Borel: ^3 of a 2-dimensional space vanishes
        let basis = LieBasis::new(LieAlgebraSpec::borel()).unwrap();
        let r = PolyVector::wedge_monomial(basis.clone(), vec![0, 1], Scalar::one());
        assert!(is_triangular(&r).unwrap());
        let zero = PolyVector::zero(basis.clone());
        assert!(is_triangular(&zero).unwrap());
        let v = PolyVector::basis_vector(basis, 0);
        assert!(is_triangular(&v).is_err());
    }

    #[test]
    fn wedge_canonicalization() {
        let basis = lyndon_basis(2, 2).unwrap();
        let mut pv = PolyVector::zero(basis.clone());
        pv.add_term(vec![1, 0], Scalar::one());
        let mut expected = PolyVector::zero(basis.clone());
        expected.add_term(vec![0, 1], -Scalar::one());
        assert_eq!(pv, expected);
        let mut repeated = PolyVector::zero(basis);
        repeated.add_term(vec![1, 1], Scalar::one());
        assert!(repeated.is_zero());
    }

    #[test]
    fn biderivation_recursion() {
        // independent direct expansion of the bracket against a wedge:
        // [g, g1 ^ g2] = (-1)^{(p-1) q2} [g, g1] ^ g2 + g1 ^ [g, g2]
        // with p the arity of g and q2 the arity of g2. For a vector g the
        // signs collapse to the plain biderivation rule.
        let basis = lyndon_basis(2, 3).unwrap();
        let mut homogeneous: Vec<PolyVector> = Vec::new();
        for i in 0..basis.len() {
            homogeneous.push(PolyVector::basis_vector(basis.clone(), i));
        }
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                homogeneous.push(PolyVector::wedge_monomial(
                    basis.clone(),
                    vec![i as u16, j as u16],
                    Scalar::one(),
                ));
            }
        }
        for g in &homogeneous {
            for g1 in &homogeneous {
                for g2 in &homogeneous {
                    let p = g.homogeneous_arity().unwrap();
                    let q2 = g2.homogeneous_arity().unwrap();
                    let lhs = ext_bracket(g, &g1.wedge(g2).unwrap()).unwrap();
                    let first = ext_bracket(g, g1)
                        .unwrap()
                        .wedge(g2)
                        .unwrap()
                        .scale(&Scalar::sign((p - 1) * q2));
                    let second = g1.wedge(&ext_bracket(g, g2).unwrap()).unwrap();
                    assert_eq!(
                        lhs,
                        first.add(&second).unwrap(),
                        "recursion fails at {:?}, {:?}, {:?}",
                        g,
                        g1,
                        g2
                    );
                }
            }
        }
    }

    #[test]
    fn graded_antisymmetry_and_jacobi() {
        // over the free basis on 2 generators, cutoff 3, wedges of arity <= 2
        let basis = lyndon_basis(2, 3).unwrap();
        let mut elems: Vec<PolyVector> = Vec::new();
        for i in 0..basis.len() {
            elems.push(PolyVector::basis_vector(basis.clone(), i));
        }
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                elems.push(PolyVector::wedge_monomial(
                    basis.clone(),
                    vec![i as u16, j as u16],
                    Scalar::one(),
                ));
            }
        }
        let deg = |pv: &PolyVector| pv.homogeneous_arity().unwrap() - 1;
        for a in &elems {
            for b in &elems {
                let ka = deg(a);
                let kb = deg(b);
                let lhs = ext_bracket(a, b).unwrap();
                let rhs = ext_bracket(b, a).unwrap().scale(&-Scalar::sign(ka * kb));
                assert_eq!(lhs, rhs, "antisymmetry fails at {:?}, {:?}", a, b);
            }
        }
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    let ka = deg(a);
                    let kb = deg(b);
                    let lhs = ext_bracket(a, &ext_bracket(b, c).unwrap()).unwrap();
                    let r1 = ext_bracket(&ext_bracket(a, b).unwrap(), c).unwrap();
                    let r2 = ext_bracket(b, &ext_bracket(a, c).unwrap())
                        .unwrap()
                        .scale(&Scalar::sign(ka * kb));
                    assert_eq!(
                        lhs,
                        r1.add(&r2).unwrap(),
                        "Jacobi fails at {:?}, {:?}, {:?}",
                        a,
                        b,
                        c
                    );
                }
            }
        }
    }
}
