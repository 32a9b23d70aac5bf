//! The DGLA structure on D: differential, circle product, and bracket.
//!
//! The differential uses only the coproduct, so it preserves total word
//! degree exactly in both algebra kinds. The circle product inserts one
//! element into the slots of another through iterated coproducts; the
//! bracket is its graded commutator. The differential is inner:
//! delta(Phi) = [I(x)I, Phi].
//!
//! The scalar line D^{-1} carries the zero differential and is excluded
//! from the circle product and the bracket; no insertion rule for scalars
//! exists in this complex.

use std::sync::Arc;

use crate::algebra::{LieAlgebraSpec, Monomial};
use crate::error::CoreError;
use crate::scalar::Scalar;
use crate::tensor::{tuples_of_degree, TensorElement};

/// delta: D^k -> D^{k+1},
/// delta(Phi) = Phi (x) I - sum_{l=0..k} (-1)^{k-l} Delta_l Phi + (-1)^k I (x) Phi;
/// zero on the scalar line.
pub fn differential(phi: &TensorElement) -> TensorElement {
    let k = phi.arity();
    if k < 0 {
        return TensorElement::zero(phi.algebra().clone(), 0);
    }
    let mut out = phi.extend_right(1);
    for l in 0..=k {
        let sign = Scalar::sign((k - l) as usize);
        let term = phi.coproduct_at(l as usize, 1).scale(&-sign);
        out = out.add(&term).expect("same arity by construction");
    }
    let last = phi.extend_left(1).scale(&Scalar::sign(k as usize));
    out.add(&last).expect("same arity by construction")
}

/// Phi1 o Phi2 = sum_{i=0..k1} (-1)^{i k2} Delta^{k2}_i Phi1 * (Phi2)_i,
/// products taken componentwise in U^{(x)(k1+k2+1)}.
pub fn circle(phi1: &TensorElement, phi2: &TensorElement) -> Result<TensorElement, CoreError> {
    if phi1.algebra() != phi2.algebra() {
        return Err(CoreError::AlgebraMismatch);
    }
    if phi1.arity() < 0 || phi2.arity() < 0 {
        return Err(CoreError::ScalarOperand);
    }
    let k1 = phi1.arity() as usize;
    let k2 = phi2.arity() as usize;
    let algebra = phi1.algebra().clone();
    let mut out = TensorElement::zero(algebra.clone(), (k1 + k2) as i64);
    let unit = Monomial::unit(&algebra);
    for i in 0..=k1 {
        let sign = Scalar::sign(i * k2);
        // Delta^{k2} applied in slot i of Phi1
        let expanded = phi1.coproduct_at(i, k2);
        // (Phi2)_i = I (x) .. (x) Phi2 (at slot i) (x) .. (x) I
        let mut inserted = TensorElement::zero(algebra.clone(), (k1 + k2) as i64);
        for (t2, c2) in phi2.terms() {
            let mut tuple = Vec::with_capacity(k1 + k2 + 1);
            tuple.extend(std::iter::repeat(unit.clone()).take(i));
            tuple.extend_from_slice(t2);
            tuple.extend(std::iter::repeat(unit.clone()).take(k1 - i));
            inserted.add_term(tuple, c2.clone());
        }
        let prod = expanded.mul(&inserted)?;
        out = out.add(&prod.scale(&sign))?;
    }
    Ok(out)
}

/// [Phi1, Phi2]_G = Phi1 o Phi2 - (-1)^{k1 k2} Phi2 o Phi1.
pub fn bracket_g(phi1: &TensorElement, phi2: &TensorElement) -> Result<TensorElement, CoreError> {
    let k1 = phi1.arity();
    let k2 = phi2.arity();
    let first = circle(phi1, phi2)?;
    let second = circle(phi2, phi1)?;
    first.sub(&second.scale(&Scalar::sign((k1 * k2) as usize)))
}

/// Basis element of D^k from a single tuple.
fn basis_element(algebra: &Arc<LieAlgebraSpec>, tuple: &[Monomial]) -> TensorElement {
    let mut el = TensorElement::zero(algebra.clone(), tuple.len() as i64 - 1);
    el.add_term(tuple.to_vec(), Scalar::one());
    el
}

/// Outcome of one verified identity family.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub checked: usize,
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    fn pass(name: &str, checked: usize) -> Self {
        CheckOutcome {
            name: name.into(),
            pass: true,
            checked,
            counterexample: None,
        }
    }

    fn fail(name: &str, checked: usize, witness: String) -> Self {
        CheckOutcome {
            name: name.into(),
            pass: false,
            checked,
            counterexample: Some(witness),
        }
    }
}

/// Exhaustive DGLA verification over all basis tuples with arity at most
/// `max_arity` and total word degree at most `degree_cutoff`:
///
/// (a) delta o delta = 0,
/// (b) delta(Phi) = [I(x)I, Phi],
/// (c) graded antisymmetry of the bracket over basis pairs,
/// (d) graded Jacobi over basis triples.
///
/// Identity failures are report content, not errors. The first
/// counterexample found is included in the report.
pub fn verify_dgla(
    algebra: &Arc<LieAlgebraSpec>,
    max_arity: usize,
    degree_cutoff: usize,
) -> Vec<CheckOutcome> {
    let mut basis: Vec<Vec<Monomial>> = Vec::new();
    for arity in 0..=max_arity {
        for w in 0..=degree_cutoff {
            basis.extend(tuples_of_degree(algebra, arity as i64, w));
        }
    }
    let elements: Vec<TensorElement> = basis.iter().map(|t| basis_element(algebra, t)).collect();
    let mut outcomes = Vec::new();

    // (a) delta^2 = 0
    {
        let mut bad = None;
        for el in &elements {
            let dd = differential(&differential(el));
            if !dd.is_zero() {
                bad = Some(format!("{:?}", el));
                break;
            }
        }
        outcomes.push(match bad {
            None => CheckOutcome::pass("delta_squared_zero", elements.len()),
            Some(w) => CheckOutcome::fail("delta_squared_zero", elements.len(), w),
        });
    }

    // (b) delta(Phi) = [I(x)I, Phi]
    {
        let unit2 = TensorElement::unit(algebra.clone(), 1);
        let mut bad = None;
        for el in &elements {
            let lhs = differential(el);
            let rhs = bracket_g(&unit2, el).expect("arities >= 0");
            if lhs != rhs {
                bad = Some(format!("{:?}", el));
                break;
            }
        }
        outcomes.push(match bad {
            None => CheckOutcome::pass("inner_derivation", elements.len()),
            Some(w) => CheckOutcome::fail("inner_derivation", elements.len(), w),
        });
    }

    // (c) [x,y] + (-1)^{k1 k2} [y,x] = 0 over all basis pairs
    {
        let mut bad = None;
        let mut count = 0usize;
        'outer: for a in &elements {
            for b in &elements {
                count += 1;
                let k1 = a.arity();
                let k2 = b.arity();
                let lhs = bracket_g(a, b).unwrap();
                let rhs = bracket_g(b, a)
                    .unwrap()
                    .scale(&Scalar::sign((k1 * k2) as usize));
                if lhs.add(&rhs).unwrap() != TensorElement::zero(algebra.clone(), k1 + k2) {
                    bad = Some(format!("{:?} , {:?}", a, b));
                    break 'outer;
                }
            }
        }
        outcomes.push(match bad {
            None => CheckOutcome::pass("graded_antisymmetry", count),
            Some(w) => CheckOutcome::fail("graded_antisymmetry", count, w),
        });
    }

    // (d) [a,[b,c]] = [[a,b],c] + (-1)^{k1 k2} [b,[a,c]].
    // Free kind: exhaustive; any triple of total degree beyond the cutoff
    // has all six double brackets identically zero in the quotient, so
    // those triples hold vacuously and are skipped. Filtered kind:
    // exhaustive over the reduced range (arity <= 1, degree <= 2), then
    // deterministic sampling across the full range.
    {
        let mut bad = None;
        let mut count = 0usize;
        let jacobi_check = |a: &TensorElement, b: &TensorElement, c: &TensorElement| -> bool {
            let k1 = a.arity();
            let k2 = b.arity();
            let lhs = bracket_g(a, &bracket_g(b, c).unwrap()).unwrap();
            let r1 = bracket_g(&bracket_g(a, b).unwrap(), c).unwrap();
            let r2 = bracket_g(b, &bracket_g(a, c).unwrap())
                .unwrap()
                .scale(&Scalar::sign((k1 * k2) as usize));
            lhs == r1.add(&r2).unwrap()
        };
        if algebra.cutoff().is_some() {
            let cut = algebra.cutoff().unwrap();
            'outer: for (ia, a) in elements.iter().enumerate() {
                for (ib, b) in elements.iter().enumerate().skip(ia) {
                    for c in elements.iter().skip(ib) {
                        if a.max_weight() + b.max_weight() + c.max_weight() > cut {
                            continue;
                        }
                        count += 1;
                        if !jacobi_check(a, b, c) {
                            bad = Some(format!("{:?} , {:?} , {:?}", a, b, c));
                            break 'outer;
                        }
                    }
                }
            }
        } else {
            let reduced: Vec<&TensorElement> = elements
                .iter()
                .filter(|e| e.arity() <= 1 && e.max_weight() <= 2.min(degree_cutoff))
                .collect();
            'outer2: for (ia, a) in reduced.iter().enumerate() {
                for (ib, b) in reduced.iter().enumerate().skip(ia) {
                    for c in reduced.iter().skip(ib) {
                        count += 1;
                        if !jacobi_check(a, b, c) {
                            bad = Some(format!("{:?} , {:?} , {:?}", a, b, c));
                            break 'outer2;
                        }
                    }
                }
            }
            // deterministic xorshift sampling over the full range
            if bad.is_none() && !elements.is_empty() {
                let mut state = 0x9e3779b97f4a7c15u64;
                let mut next = || {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state % elements.len() as u64) as usize
                };
                for _ in 0..200 {
                    let (a, b, c) = (&elements[next()], &elements[next()], &elements[next()]);
                    count += 1;
                    if !jacobi_check(a, b, c) {
                        bad = Some(format!("{:?} , {:?} , {:?}", a, b, c));
                        break;
                    }
                }
            }
        }
        outcomes.push(match bad {
            None => CheckOutcome::pass("graded_jacobi", count),
            Some(w) => CheckOutcome::fail("graded_jacobi", count, w),
        });
    }

    outcomes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::NCElement;

    fn free2() -> Arc<LieAlgebraSpec> {
        LieAlgebraSpec::free(2, 3).unwrap()
    }

    #[test]
    fn differential_of_unit() {
        // delta(I) = I (x) I
        let alg = free2();
        let one = TensorElement::from_nc(&NCElement::one(alg.clone()));
        assert_eq!(differential(&one), TensorElement::unit(alg, 1));
    }

    #[test]
    fn differential_of_generator_vanishes() {
        let alg = free2();
        let e = TensorElement::from_nc(&NCElement::generator(alg.clone(), 0));
        assert!(differential(&e).is_zero());
    }

    #[test]
    fn differential_of_unit_square_vanishes() {
        let alg = free2();
        let unit2 = TensorElement::unit(alg, 1);
        assert!(differential(&unit2).is_zero());
    }

    #[test]
    fn differential_on_scalar_line_is_zero() {
        let alg = free2();
        let c = TensorElement::scalar(alg, Scalar::from_ratio(3, 2));
        let d = differential(&c);
        assert_eq!(d.arity(), 0);
        assert!(d.is_zero());
    }

    #[test]
    fn circle_unit_examples() {
        let alg = free2();
        let unit1 = TensorElement::from_nc(&NCElement::one(alg.clone()));
        let unit2 = TensorElement::unit(alg.clone(), 1);
        // (I (x) I) o I = 2 I (x) I
        assert_eq!(
            circle(&unit2, &unit1).unwrap(),
            unit2.scale(&Scalar::from_int(2))
        );
        // I o (I (x) I) = I (x) I
        assert_eq!(circle(&unit1, &unit2).unwrap(), unit2);
        // [I (x) I, I] = I (x) I
        assert_eq!(bracket_g(&unit2, &unit1).unwrap(), unit2);
    }

    #[test]
    fn circle_on_arity_zero_is_multiplication() {
        let alg = LieAlgebraSpec::borel();
        let e1 = NCElement::generator(alg.clone(), 0);
        let e2 = NCElement::generator(alg.clone(), 1);
        let t1 = TensorElement::from_nc(&e1);
        let t2 = TensorElement::from_nc(&e2);
        let c = circle(&t2, &t1).unwrap();
        assert_eq!(c.to_nc(), crate::algebra::nc_mul(&e2, &e1).unwrap());
    }

    #[test]
    fn borel_bracket_is_commutator_on_arity_zero() {
        // [e1, e2]_G = e1 e2 - e2 e1 = 2 e1
        let alg = LieAlgebraSpec::borel();
        let e1 = TensorElement::from_nc(&NCElement::generator(alg.clone(), 0));
        let e2 = TensorElement::from_nc(&NCElement::generator(alg.clone(), 1));
        let br = bracket_g(&e1, &e2).unwrap();
        assert_eq!(br, e1.scale(&Scalar::from_int(2)));
        // [e, e]_G = 0 at arity 0
        assert!(bracket_g(&e1, &e1).unwrap().is_zero());
    }

    #[test]
    fn scalar_operands_are_rejected() {
        let alg = free2();
        let c = TensorElement::scalar(alg.clone(), Scalar::one());
        let unit1 = TensorElement::from_nc(&NCElement::one(alg));
        assert!(circle(&c, &unit1).is_err());
        assert!(circle(&unit1, &c).is_err());
        assert!(bracket_g(&c, &unit1).is_err());
    }

    #[test]
    fn dgla_axioms_abelian_one_dim() {
        let alg = LieAlgebraSpec::free(1, 2).unwrap();
        for outcome in verify_dgla(&alg, 2, 2) {
            assert!(
                outcome.pass,
                "{} failed: {:?}",
                outcome.name, outcome.counterexample
            );
        }
    }

    #[test]
    fn dgla_axioms_small_free() {
        let alg = LieAlgebraSpec::free(2, 2).unwrap();
        for outcome in verify_dgla(&alg, 1, 2) {
            assert!(
                outcome.pass,
                "{} failed: {:?}",
                outcome.name, outcome.counterexample
            );
        }
    }
}
