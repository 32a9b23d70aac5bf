//! Elements of the graded space D with D^k the (k+1)-fold tensor power of
//! the enveloping algebra and D^{-1} the scalar line.
//!
//! A [`TensorElement`] is a sparse map from (k+1)-tuples of canonical
//! monomials to exact coefficients. For a free-kind algebra any stored tuple
//! has total word degree at most the cutoff; tuples produced beyond it are
//! dropped (the quotient is consistent because every operation on D
//! preserves total word degree).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{mul_monomials, LieAlgebraSpec, Monomial, NCElement};
use crate::error::CoreError;
use crate::scalar::Scalar;

/// Sparse element of D^arity; arity -1 encodes the scalar line.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorElement {
    algebra: Arc<LieAlgebraSpec>,
    arity: i64,
    terms: BTreeMap<Vec<Monomial>, Scalar>,
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0[{}]", self.arity);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| {
                let slots: Vec<String> = t.iter().map(|m| format!("{:?}", m)).collect();
                format!("{} * {}", c, slots.join(" (x) "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl TensorElement {
    pub fn zero(algebra: Arc<LieAlgebraSpec>, arity: i64) -> Self {
        assert!(arity >= -1, "tensor arity must be >= -1");
        TensorElement {
            algebra,
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// Scalar c viewed as an element of D^{-1}.
    pub fn scalar(algebra: Arc<LieAlgebraSpec>, c: Scalar) -> Self {
        let mut el = TensorElement::zero(algebra, -1);
        el.add_term(Vec::new(), c);
        el
    }

    /// I (x) I ... (x) I with `arity`+1 slots.
    pub fn unit(algebra: Arc<LieAlgebraSpec>, arity: i64) -> Self {
        assert!(arity >= 0);
        let tuple = vec![Monomial::unit(&algebra); (arity + 1) as usize];
        let mut el = TensorElement::zero(algebra, arity);
        el.add_term(tuple, Scalar::one());
        el
    }

    /// An NCElement viewed as an element of D^0.
    pub fn from_nc(a: &NCElement) -> Self {
        let mut el = TensorElement::zero(a.algebra().clone(), 0);
        for (m, c) in a.terms() {
            el.add_term(vec![m.clone()], c.clone());
        }
        el
    }

    /// The D^0 component as an NCElement (arity must be 0).
    pub fn to_nc(&self) -> NCElement {
        assert_eq!(self.arity, 0);
        let mut out = NCElement::zero(self.algebra.clone());
        for (t, c) in &self.terms {
            out.add_term(t[0].clone(), c.clone());
        }
        out
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraSpec> {
        &self.algebra
    }

    pub fn arity(&self) -> i64 {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Monomial>, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total word degree of the largest stored tuple.
    pub fn max_weight(&self) -> usize {
        self.terms
            .keys()
            .map(|t| tuple_degree(t))
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, tuple: Vec<Monomial>, c: Scalar) {
        debug_assert_eq!(tuple.len() as i64, self.arity + 1);
        if c.is_zero() {
            return;
        }
        if let Some(cut) = self.algebra.cutoff() {
            if tuple_degree(&tuple) > cut {
                return;
            }
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(tuple) {
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

    pub fn add(&self, other: &TensorElement) -> Result<TensorElement, CoreError> {
        if self.algebra != other.algebra {
            return Err(CoreError::AlgebraMismatch);
        }
        if self.arity != other.arity {
            return Err(CoreError::ArityMismatch(format!(
                "{} vs {}",
                self.arity, other.arity
            )));
        }
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TensorElement) -> Result<TensorElement, CoreError> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, s: &Scalar) -> TensorElement {
        if s.is_zero() {
            return TensorElement::zero(self.algebra.clone(), self.arity);
        }
        let mut out = TensorElement::zero(self.algebra.clone(), self.arity);
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c * s);
        }
        out
    }

    /// Componentwise product in U^{(x)(k+1)} of two same-arity elements.
    pub fn mul(&self, other: &TensorElement) -> Result<TensorElement, CoreError> {
        if self.algebra != other.algebra {
            return Err(CoreError::AlgebraMismatch);
        }
        if self.arity != other.arity {
            return Err(CoreError::ArityMismatch(format!(
                "{} vs {}",
                self.arity, other.arity
            )));
        }
        if self.arity < 0 {
            // scalars multiply as scalars
            let mut out = TensorElement::zero(self.algebra.clone(), -1);
            for a in self.terms.values() {
                for b in other.terms.values() {
                    out.add_term(Vec::new(), a * b);
                }
            }
            return Ok(out);
        }
        let mut out = TensorElement::zero(self.algebra.clone(), self.arity);
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                mul_tuples_into(&self.algebra, ta, tb, &(ca * cb), &mut out);
            }
        }
        Ok(out)
    }

    /// Appends unit slots on the right: D^k -> D^{k+extra}.
    pub fn extend_right(&self, extra: usize) -> TensorElement {
        assert!(self.arity >= 0);
        let unit = Monomial::unit(&self.algebra);
        let mut out = TensorElement::zero(self.algebra.clone(), self.arity + extra as i64);
        for (t, c) in &self.terms {
            let mut t2 = t.clone();
            t2.extend(std::iter::repeat(unit.clone()).take(extra));
            out.add_term(t2, c.clone());
        }
        out
    }

    /// Prepends unit slots on the left.
    pub fn extend_left(&self, extra: usize) -> TensorElement {
        assert!(self.arity >= 0);
        let unit = Monomial::unit(&self.algebra);
        let mut out = TensorElement::zero(self.algebra.clone(), self.arity + extra as i64);
        for (t, c) in &self.terms {
            let mut t2 = vec![unit.clone(); extra];
            t2.extend_from_slice(t);
            out.add_term(t2, c.clone());
        }
        out
    }

    /// Applies the coproduct at slot `l`, expanding it into `k+1` slots.
    pub fn coproduct_at(&self, l: usize, k: usize) -> TensorElement {
        assert!(self.arity >= 0 && (l as i64) <= self.arity);
        if k == 0 {
            return self.clone();
        }
        let mut out = TensorElement::zero(self.algebra.clone(), self.arity + k as i64);
        for (t, c) in &self.terms {
            for (parts, mult) in self.algebra.monomial_coproduct(k, &t[l]).iter() {
                let mut t2 = Vec::with_capacity(t.len() + k);
                t2.extend_from_slice(&t[..l]);
                t2.extend_from_slice(parts);
                t2.extend_from_slice(&t[l + 1..]);
                out.add_term(t2, c * mult);
            }
        }
        out
    }
}

pub fn tuple_degree(tuple: &[Monomial]) -> usize {
    tuple.iter().map(Monomial::degree).sum()
}

/// out += c * (componentwise product of ta and tb).
fn mul_tuples_into(
    algebra: &Arc<LieAlgebraSpec>,
    ta: &[Monomial],
    tb: &[Monomial],
    c: &Scalar,
    out: &mut TensorElement,
) {
    // expand slot by slot; straightening can branch per slot
    let mut partial: Vec<(Vec<Monomial>, Scalar)> = vec![(Vec::with_capacity(ta.len()), c.clone())];
    for (ma, mb) in ta.iter().zip(tb.iter()) {
        let products = mul_monomials(algebra, ma, mb);
        if products.is_empty() {
            return;
        }
        let mut next = Vec::with_capacity(partial.len() * products.len());
        for (prefix, pc) in &partial {
            for (m, k) in &products {
                let mut p2 = prefix.clone();
                p2.push(m.clone());
                next.push((p2, pc * k));
            }
        }
        partial = next;
    }
    for (tuple, coeff) in partial {
        out.add_term(tuple, coeff);
    }
}

/// The coproduct of an element of U, landing in D^1 = U (x) U.
pub fn coproduct(a: &NCElement) -> TensorElement {
    iterated_coproduct(a, 1)
}

/// Delta^k: U -> U^{(x)(k+1)}; Delta^0 is the identity.
pub fn iterated_coproduct(a: &NCElement, k: usize) -> TensorElement {
    let mut out = TensorElement::zero(a.algebra().clone(), k as i64);
    for (m, c) in a.terms() {
        for (parts, mult) in a.algebra().monomial_coproduct(k, m).iter() {
            out.add_term(parts.clone(), c * mult);
        }
    }
    out
}

/// All canonical monomials of the given total degree, in canonical order.
pub fn monomials_of_degree(algebra: &Arc<LieAlgebraSpec>, d: usize) -> Vec<Monomial> {
    let n = algebra.generator_count();
    match algebra.kind() {
        crate::algebra::AlgebraKind::Free { cutoff, .. } => {
            if d > *cutoff {
                return Vec::new();
            }
            let mut out = Vec::new();
            let total = (n as u64).pow(d as u32);
            for idx in 0..total {
                let mut w = Vec::with_capacity(d);
                let mut rest = idx;
                for _ in 0..d {
                    w.push((rest % n as u64) as u8);
                    rest /= n as u64;
                }
                w.reverse();
                out.push(Monomial::Word(w));
            }
            out.sort();
            out
        }
        crate::algebra::AlgebraKind::StructureConstants { .. } => {
            let mut out = Vec::new();
            let mut exps = vec![0u32; n];
            fn rec(exps: &mut Vec<u32>, slot: usize, remaining: u32, out: &mut Vec<Monomial>) {
                if slot + 1 == exps.len() {
                    exps[slot] = remaining;
                    out.push(Monomial::Pbw(exps.clone()));
                    exps[slot] = 0;
                    return;
                }
                for take in 0..=remaining {
                    exps[slot] = take;
                    rec(exps, slot + 1, remaining - take, out);
                    exps[slot] = 0;
                }
            }
            rec(&mut exps, 0, d as u32, &mut out);
            out.sort();
            out
        }
    }
}

/// Basis tuples of D^arity with the given total degree, in canonical order.
pub fn tuples_of_degree(algebra: &Arc<LieAlgebraSpec>, arity: i64, w: usize) -> Vec<Vec<Monomial>> {
    assert!(arity >= -1);
    if arity == -1 {
        return if w == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let slots = (arity + 1) as usize;
    let mut out = Vec::new();
    fn rec(
        algebra: &Arc<LieAlgebraSpec>,
        slots_left: usize,
        remaining: usize,
        acc: &mut Vec<Monomial>,
        out: &mut Vec<Vec<Monomial>>,
    ) {
        if slots_left == 0 {
            if remaining == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for d in 0..=remaining {
            for m in monomials_of_degree(algebra, d) {
                acc.push(m);
                rec(algebra, slots_left - 1, remaining - d, acc, out);
                acc.pop();
            }
        }
    }
    rec(algebra, slots, w, &mut Vec::new(), &mut out);
    out.sort();
    out
}
