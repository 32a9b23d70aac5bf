//! Order-by-order twist quantization of triangular r-matrices.
//!
//! The structure maps F_1 = h, F_2, ..., F_N of a morphism from E(g) into D
//! are solved inductively: at each order n the defect zeta_n is delta-closed
//! and its cohomology class f o zeta_n is the obstruction. When the class is
//! a coboundary d(psi), replacing F_{n-1} by F_{n-1} - h o psi removes it,
//! after which delta(F_n) = zeta_n is solved exactly per basis tuple with
//! free variables zero. An order where the class fails to be a coboundary
//! would falsify formality at that order and raises an error carrying the
//! class.
//!
//! With the maps in hand, a triangular r gives the Maurer-Cartan twist
//! rho = sum_m (1/m!) h^m F_m(r,...,r) and the element T = I(x)I + rho. Two
//! residuals are computed independently order by order: the Maurer-Cartan
//! equation delta(rho) + 1/2 [rho, rho] = 0 and the cocycle equation
//! T_{12,3} T_{12} = T_{1,23} T_{23} in the triple tensor power. They must
//! vanish simultaneously.

use std::sync::Arc;

use crate::cochain::{ce_differential, is_coboundary, WedgeBasis};
use crate::drinfeld::{bracket_g, differential};
use crate::error::CoreError;
use crate::exterior::{is_triangular, PolyVector};
use crate::hkr::Hkr;
use crate::hpoly::{HPoly, SeriesCoeff};
use crate::obstruction::{defect, defect_cocycle, solve_f2, StructureMaps};
use crate::scalar::Scalar;
use crate::tensor::TensorElement;

/// Hard guard on the inductive order; each order multiplies the work.
pub const MAX_STRUCTURE_ORDER: usize = 6;

impl SeriesCoeff for TensorElement {
    fn zero_like(&self) -> Self {
        TensorElement::zero(self.algebra().clone(), self.arity())
    }
    fn add(&self, other: &Self) -> Self {
        TensorElement::add(self, other).expect("series coefficients share arity")
    }
    fn scale(&self, s: &Scalar) -> Self {
        TensorElement::scale(self, s)
    }
    fn is_zero(&self) -> bool {
        TensorElement::is_zero(self)
    }
}

/// A truncated series with arity-one tensor coefficients; coefficient m is
/// the h^m term, and the constant term is zero for a Maurer-Cartan series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSeries {
    series: HPoly<TensorElement>,
}

impl TwistSeries {
    pub fn zero(hkr: &Hkr, order_cap: usize) -> Self {
        let zero = TensorElement::zero(hkr.basis().algebra().clone(), 1);
        TwistSeries {
            series: HPoly::constant(zero, order_cap),
        }
    }

    pub fn order_cap(&self) -> usize {
        self.series.order_cap()
    }

    /// Coefficient of h^m.
    pub fn coeff(&self, m: usize) -> &TensorElement {
        self.series.coeff(m)
    }

    pub fn set_coeff(&mut self, m: usize, value: TensorElement) {
        assert_eq!(value.arity(), 1, "twist coefficients live in U (x) U");
        let mut coeffs: Vec<TensorElement> = self.series.coeffs().to_vec();
        coeffs[m] = value;
        self.series = HPoly::new(coeffs);
    }

    pub fn series(&self) -> &HPoly<TensorElement> {
        &self.series
    }
}

/// Solves the structure maps F_1..F_N over the wedge basis. F_1 = h and
/// F_2 come from the pair defect; every higher order first clears its
/// obstruction class (absorbing an exact witness into the previous map)
/// and then solves delta(F_n) = zeta_n tuple by tuple.
pub fn solve_structure_maps(
    hkr: &Hkr,
    wb: &Arc<WedgeBasis>,
    order: usize,
) -> Result<StructureMaps, CoreError> {
    if order == 0 || order > MAX_STRUCTURE_ORDER {
        return Err(CoreError::Unsupported(format!(
            "order must be between 1 and {MAX_STRUCTURE_ORDER}"
        )));
    }
    let mut maps = if order >= 2 {
        solve_f2(hkr, wb)?
    } else {
        StructureMaps::new(wb.clone())
    };
    for n in 3..=order {
        let q = defect_cocycle(hkr, &maps, n)?;
        if !q.is_zero() {
            if !ce_differential(&q)?.is_zero() {
                return Err(CoreError::Obstructed {
                    order: n,
                    class: format!("{:?} is not closed", q),
                });
            }
            let Some(psi) = is_coboundary(&q)? else {
                return Err(CoreError::Obstructed {
                    order: n,
                    class: format!("{:?}", q),
                });
            };
            crate::obstruction::absorb_witness(hkr, &mut maps, n, &psi)?;
            let cleared = defect_cocycle(hkr, &maps, n)?;
            if !cleared.is_zero() {
                return Err(CoreError::Obstructed {
                    order: n,
                    class: format!("witness absorption left {:?}", cleared),
                });
            }
        }
        for tuple in wb.arg_tuples(n) {
            let rhs = defect(hkr, &maps, n, &tuple)?;
            let value = if rhs.arity() <= 0 {
                if !rhs.is_zero() {
                    return Err(CoreError::RhsNotExact(format!("{:?}", rhs)));
                }
                TensorElement::zero(wb.lie().algebra().clone(), -1)
            } else {
                hkr.solve_delta(&rhs)?
            };
            maps.set_value(n, tuple, value);
        }
    }
    Ok(maps)
}

/// The Maurer-Cartan twist of a triangular r-matrix:
/// rho_m = (1/m!) F_m(r, ..., r) for m = 1..=N.
pub fn twist_mc(
    hkr: &Hkr,
    maps: &StructureMaps,
    r: &PolyVector,
    order: usize,
) -> Result<TwistSeries, CoreError> {
    if !is_triangular(r)? {
        return Err(CoreError::NotTriangular);
    }
    let wb = maps.wedge_basis().clone();
    let mut rho = TwistSeries::zero(hkr, order);
    if r.is_zero() {
        return Ok(rho);
    }
    // r in wedge-basis coordinates
    let r_coords: Vec<(u16, Scalar)> = r
        .terms()
        .iter()
        .map(|(t, c)| {
            wb.index_of(t)
                .map(|i| (i as u16, c.clone()))
                .ok_or_else(|| {
                    CoreError::CutoffExceeded(format!(
                        "r term {:?} outside the enumerated domain",
                        t
                    ))
                })
        })
        .collect::<Result<_, _>>()?;
    for m in 1..=order {
        // multilinear expansion of F_m(r,...,r)
        let mut total: Option<TensorElement> = None;
        let mut stack: Vec<(Vec<u16>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for _ in 0..m {
            let mut next = Vec::with_capacity(stack.len() * r_coords.len());
            for (tuple, c) in &stack {
                for (idx, k) in &r_coords {
                    let mut t2 = tuple.clone();
                    t2.push(*idx);
                    next.push((t2, c * k));
                }
            }
            stack = next;
        }
        for (tuple, c) in stack {
            let v = maps.value(hkr, m, &tuple)?;
            if v.is_zero() {
                continue;
            }
            if v.arity() != 1 {
                return Err(CoreError::ArityMismatch(format!(
                    "F_{m} on an r-tuple has arity {}, expected 1",
                    v.arity()
                )));
            }
            let scaled = v.scale(&c);
            total = Some(match total {
                None => scaled,
                Some(acc) => acc.add(&scaled)?,
            });
        }
        if let Some(v) = total {
            rho.set_coeff(m, v.scale(&Scalar::inv_factorial(m)));
        }
    }
    Ok(rho)
}

/// Maurer-Cartan residual per order: coefficient m of
/// delta(rho) + 1/2 [rho, rho]_G, for m = 0..=N.
pub fn mc_residuals(rho: &TwistSeries) -> Result<Vec<TensorElement>, CoreError> {
    let cap = rho.order_cap();
    let algebra = rho.coeff(0).algebra().clone();
    let mut out = Vec::with_capacity(cap + 1);
    for m in 0..=cap {
        let mut res = differential(rho.coeff(m));
        for i in 0..=m {
            let j = m - i;
            let a = rho.coeff(i);
            let b = rho.coeff(j);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let br = bracket_g(a, b)?.scale(&Scalar::from_ratio(1, 2));
            res = res.add(&br)?;
        }
        let _ = &algebra;
        out.push(res);
    }
    Ok(out)
}

/// The element T = I(x)I + rho as a truncated series in D^1.
pub fn build_t(hkr: &Hkr, rho: &TwistSeries) -> TwistSeries {
    let mut t = rho.clone();
    let unit = TensorElement::unit(hkr.basis().algebra().clone(), 1);
    let zeroth = t.coeff(0).clone();
    t.set_coeff(
        0,
        if zeroth.is_zero() {
            unit
        } else {
            zeroth.add(&unit).expect("arity 1")
        },
    );
    t
}

/// Cocycle-equation residuals per order: coefficient m of
/// (Delta(x)I)(T) (T(x)I) - (I(x)Delta)(T) (I(x)T) in the triple tensor
/// power, for m = 0..=N.
pub fn cyb_residuals(t: &TwistSeries) -> Result<Vec<TensorElement>, CoreError> {
    let lift = |f: &dyn Fn(&TensorElement) -> TensorElement| -> HPoly<TensorElement> {
        HPoly::new(t.series().coeffs().iter().map(|c| f(c)).collect())
    };
    let t12 = lift(&|c| c.extend_right(1));
    let t23 = lift(&|c| c.extend_left(1));
    let t12_3 = lift(&|c| c.coproduct_at(0, 1));
    let t1_23 = lift(&|c| c.coproduct_at(1, 1));
    let mul = |a: &TensorElement, b: &TensorElement| a.mul(b).expect("arity 2 throughout");
    let lhs = t12_3.mul_with(&t12, mul);
    let rhs = t1_23.mul_with(&t23, mul);
    Ok(lhs.sub(&rhs).coeffs().to_vec())
}

/// Everything the quantization run reports: the solved maps are implicit in
/// rho and T; the residual vectors are computed independently.
#[derive(Clone, Debug)]
pub struct QuantizationRun {
    pub rho: TwistSeries,
    pub t: TwistSeries,
    pub mc_residuals: Vec<TensorElement>,
    pub cyb_residuals: Vec<TensorElement>,
}

impl QuantizationRun {
    pub fn mc_zero(&self) -> bool {
        self.mc_residuals.iter().all(TensorElement::is_zero)
    }

    pub fn cyb_zero(&self) -> bool {
        self.cyb_residuals.iter().all(TensorElement::is_zero)
    }
}

/// Full pipeline: solve maps, twist r, build T, compute both residuals.
pub fn quantize(
    hkr: &Hkr,
    wb: &Arc<WedgeBasis>,
    r: &PolyVector,
    order: usize,
) -> Result<QuantizationRun, CoreError> {
    let maps = solve_structure_maps(hkr, wb, order)?;
    let rho = twist_mc(hkr, &maps, r, order)?;
    let t = build_t(hkr, &rho);
    let mc = mc_residuals(&rho)?;
    let cyb = cyb_residuals(&t)?;
    Ok(QuantizationRun {
        rho,
        t,
        mc_residuals: mc,
        cyb_residuals: cyb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{LieAlgebraSpec, NCElement};
    use crate::exterior::LieBasis;
    use crate::hkr::tensor_of;

    fn setup_borel() -> (Hkr, Arc<WedgeBasis>) {
        let basis = LieBasis::new(LieAlgebraSpec::borel()).unwrap();
        let hkr = Hkr::new(basis.clone(), 2);
        let wb = WedgeBasis::new(basis, 2);
        (hkr, wb)
    }

    #[test]
    fn first_coefficient_is_h_of_r() {
        let (hkr, wb) = setup_borel();
        let maps = solve_structure_maps(&hkr, &wb, 1).unwrap();
        let basis = hkr.basis().clone();
        let r = PolyVector::wedge_monomial(basis.clone(), vec![0, 1], Scalar::one());
        let rho = twist_mc(&hkr, &maps, &r, 1).unwrap();
        let alg = basis.algebra().clone();
        let e1 = NCElement::generator(alg.clone(), 0);
        let e2 = NCElement::generator(alg.clone(), 1);
        let expected = tensor_of(&[e1.clone(), e2.clone()])
            .sub(&tensor_of(&[e2, e1]))
            .unwrap()
            .scale(&Scalar::from_ratio(1, 2));
        assert_eq!(rho.coeff(1), &expected);
        assert!(rho.coeff(0).is_zero());
    }

    #[test]
    fn zero_r_gives_zero_twist() {
        let (hkr, wb) = setup_borel();
        let maps = solve_structure_maps(&hkr, &wb, 2).unwrap();
        let r = PolyVector::zero(hkr.basis().clone());
        let rho = twist_mc(&hkr, &maps, &r, 2).unwrap();
        assert!(rho.series().is_zero());
        // T = I (x) I; both sides of the cocycle equation coincide
        let t = build_t(&hkr, &rho);
        let cyb = cyb_residuals(&t).unwrap();
        assert!(cyb.iter().all(TensorElement::is_zero));
    }

    #[test]
    fn non_triangular_r_is_rejected() {
        let basis = crate::exterior::lyndon_basis(3, 3).unwrap();
        let hkr = Hkr::new(basis.clone(), 3);
        let wb = WedgeBasis::new(basis.clone(), 3);
        let maps = StructureMaps::new(wb);
        let r = PolyVector::wedge_monomial(basis, vec![0, 1], Scalar::one());
        assert!(matches!(
            twist_mc(&hkr, &maps, &r, 1),
            Err(CoreError::NotTriangular)
        ));
    }

    #[test]
    fn borel_quantization_order_two() {
        let (hkr, wb) = setup_borel();
        let basis = hkr.basis().clone();
        let r = PolyVector::wedge_monomial(basis, vec![0, 1], Scalar::one());
        let run = quantize(&hkr, &wb, &r, 2).unwrap();
        assert!(run.mc_zero(), "MC residuals: {:?}", run.mc_residuals);
        assert!(run.cyb_zero(), "cocycle residuals: {:?}", run.cyb_residuals);
        // T = I(x)I + h(r) + ...
        assert_eq!(
            run.t.coeff(0),
            &TensorElement::unit(hkr.basis().algebra().clone(), 1)
        );
    }

    #[test]
    fn residuals_signal_a_broken_series() {
        // drop the order-2 coefficient: both residuals must flag order 2
        let (hkr, wb) = setup_borel();
        let basis = hkr.basis().clone();
        let r = PolyVector::wedge_monomial(basis, vec![0, 1], Scalar::one());
        let run = quantize(&hkr, &wb, &r, 2).unwrap();
        let mut broken = run.rho.clone();
        let arity1_zero = TensorElement::zero(hkr.basis().algebra().clone(), 1);
        broken.set_coeff(2, arity1_zero);
        let mc = mc_residuals(&broken).unwrap();
        let is_mc_zero = mc.iter().all(TensorElement::is_zero);
        let t = build_t(&hkr, &broken);
        let cyb = cyb_residuals(&t).unwrap();
        let is_cyb_zero = cyb.iter().all(TensorElement::is_zero);
        // the two independent checks agree, and both reject the broken series
        assert_eq!(is_mc_zero, is_cyb_zero);
        assert!(!is_mc_zero);
    }
}
