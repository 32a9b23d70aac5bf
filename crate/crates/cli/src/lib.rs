//! Report builders behind the `drinfeld` command-line tool.
//!
//! Each builder runs one verification suite at the given parameters and
//! returns a [`Report`]; the binary serializes it to stdout and exits 0
//! only when every check passed. Builders are separated from the binary so
//! integration tests can compare reports byte for byte.

use std::str::FromStr;
use std::sync::Arc;

use drinfeld::cochain::{ce_differential, WedgeBasis};
use drinfeld::error::CoreError;
use drinfeld::expr::{format_polyvector, format_tensor, parse_polyvector};
use drinfeld::exterior::{is_triangular, LieBasis};
use drinfeld::hkr::{verify_hkr, Hkr};
use drinfeld::obstruction::{analyze_first_obstruction, verify_2d_vanishing};
use drinfeld::report::{Check, Report};
use drinfeld::twist::quantize;
use drinfeld::LieAlgebraSpec;

/// Algebra selector: `borel` or `free:N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraArg {
    Borel,
    Free(usize),
}

impl FromStr for AlgebraArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "borel" {
            return Ok(AlgebraArg::Borel);
        }
        if let Some(n) = s.strip_prefix("free:") {
            let n: usize = n
                .parse()
                .map_err(|_| format!("invalid generator count in `{s}`"))?;
            if n == 0 {
                return Err("free algebra needs at least one generator".into());
            }
            return Ok(AlgebraArg::Free(n));
        }
        Err(format!(
            "unknown algebra `{s}` (expected `borel` or `free:N`)"
        ))
    }
}

impl AlgebraArg {
    pub fn label(&self) -> String {
        match self {
            AlgebraArg::Borel => "borel".into(),
            AlgebraArg::Free(n) => format!("free:{n}"),
        }
    }

    pub fn spec(&self, cutoff: usize) -> Result<Arc<LieAlgebraSpec>, CoreError> {
        match self {
            AlgebraArg::Borel => Ok(LieAlgebraSpec::borel()),
            AlgebraArg::Free(n) => LieAlgebraSpec::free(*n, cutoff),
        }
    }
}

fn context(
    algebra: &AlgebraArg,
    cutoff: usize,
    max_block_dim: usize,
) -> Result<(Hkr, Arc<WedgeBasis>), CoreError> {
    let spec = algebra.spec(cutoff)?;
    let basis = LieBasis::new(spec)?;
    let hkr = Hkr::new(basis.clone(), cutoff).with_block_guard(max_block_dim);
    let wb = WedgeBasis::new(basis, cutoff);
    Ok((hkr, wb))
}

fn cochain_witness(cochain: &drinfeld::cochain::Cochain) -> serde_json::Value {
    let wb = cochain.wedge_basis();
    let entries: Vec<serde_json::Value> = cochain
        .values()
        .iter()
        .map(|(tuple, value)| {
            let args: Vec<String> = tuple
                .iter()
                .map(|&i| {
                    wb.tuple(i as usize)
                        .iter()
                        .map(|&j| wb.lie().name(j as usize).to_string())
                        .collect::<Vec<_>>()
                        .join(" ^ ")
                })
                .collect();
            serde_json::json!({
                "args": args,
                "value": format_polyvector(value),
            })
        })
        .collect();
    serde_json::Value::Array(entries)
}

/// DGLA axiom suite: square-zero differential, inner derivation, graded
/// antisymmetry, graded Jacobi, exhaustive over basis tuples.
pub fn cmd_verify_dgla(
    algebra: &AlgebraArg,
    cutoff: usize,
    max_arity: usize,
) -> Result<Report, CoreError> {
    let spec = algebra.spec(cutoff)?;
    let mut report = Report::new("verify-dgla");
    report
        .param("algebra", algebra.label())
        .param("cutoff", cutoff as u64)
        .param("max_arity", max_arity as u64);
    for oc in drinfeld::drinfeld::verify_dgla(&spec, max_arity, cutoff) {
        report.checks.push(Check::from(&oc));
    }
    Ok(report)
}

/// Cohomology identification suite with the blockwise dimension table.
pub fn cmd_cohomology(
    algebra: &AlgebraArg,
    cutoff: usize,
    max_arity: usize,
    max_block_dim: usize,
) -> Result<Report, CoreError> {
    let (hkr, _) = context(algebra, cutoff, max_block_dim)?;
    let mut report = Report::new("cohomology");
    report
        .param("algebra", algebra.label())
        .param("cutoff", cutoff as u64)
        .param("max_arity", max_arity as u64);
    for oc in verify_hkr(&hkr, max_arity)? {
        report.checks.push(Check::from(&oc));
    }
    let table: Vec<serde_json::Value> = hkr
        .cohomology_table(max_arity)?
        .into_iter()
        .map(|row| {
            serde_json::json!({
                "arity": row.arity,
                "weight": row.weight,
                "h_dim": row.h_dim,
                "expected": row.expected,
            })
        })
        .collect();
    report.witness("dimension_table", serde_json::Value::Array(table));
    Ok(report)
}

/// First-obstruction suite: closedness, exactness, witness verification,
/// and optionally the two-dimensional vanishing analysis.
pub fn cmd_obstruction(
    algebra: &AlgebraArg,
    cutoff: usize,
    max_block_dim: usize,
    check_2d_vanishing: Option<usize>,
) -> Result<Report, CoreError> {
    let (hkr, wb) = context(algebra, cutoff, max_block_dim)?;
    let mut report = Report::new("obstruction");
    report
        .param("algebra", algebra.label())
        .param("cutoff", cutoff as u64);

    let analysis = analyze_first_obstruction(&hkr, &wb)?;
    report.check(
        "f2_consistent",
        true,
        format!("structure map solved on {} pairs", wb.arg_tuples(2).len()),
    );
    report.check(
        "q3_closed",
        analysis.q3_closed,
        format!(
            "{} argument triples checked{}",
            analysis.tuples_checked,
            if analysis.q3_is_zero {
                "; the cocycle vanishes identically at this cutoff"
            } else {
                ""
            }
        ),
    );
    report.check(
        "q3_exact",
        analysis.q3_exact,
        if analysis.q3_exact {
            "coboundary witness found".into()
        } else {
            "no coboundary witness".into()
        },
    );
    report.check(
        "witness_reproduces",
        analysis.witness_reproduces,
        "differential of the witness reproduces the cocycle exactly".into(),
    );
    report.witness("q3", cochain_witness(&analysis.q3));
    if let Some(psi) = &analysis.witness {
        report.witness("psi", cochain_witness(psi));
    }

    if let Some(n) = check_2d_vanishing {
        let vr = verify_2d_vanishing(hkr.basis(), n)?;
        report.param("check_2d_vanishing", n as u64);
        report.check(
            "vanishing_counting_certificate",
            vr.counting_certificate,
            format!(
                "{} brackets exceed the {} available second-generator components",
                vr.brackets, vr.max_second_generator_components
            ),
        );
        if vr.n == 3 {
            report.check(
                "vanishing_direct_evaluation",
                vr.direct_all_zero,
                format!("{} evaluations, all zero", vr.direct_evaluations),
            );
        }
    }
    Ok(report)
}

/// Twist quantization suite: structure maps, Maurer-Cartan residuals, and
/// the cocycle equation for T, order by order.
pub fn cmd_quantize(
    algebra: &AlgebraArg,
    cutoff: usize,
    max_block_dim: usize,
    r_text: &str,
    order: usize,
) -> Result<Report, CoreError> {
    let (hkr, wb) = context(algebra, cutoff, max_block_dim)?;
    let r = parse_polyvector(hkr.basis(), r_text)?;
    let mut report = Report::new("quantize");
    report
        .param("algebra", algebra.label())
        .param("cutoff", cutoff as u64)
        .param("order", order as u64)
        .param("r", r_text);

    if !is_triangular(&r)? {
        return Err(CoreError::NotTriangular);
    }
    report.check("r_triangular", true, "[r, r] = 0 exactly".into());

    let run = quantize(&hkr, &wb, &r, order)?;
    report.check(
        "structure_maps_solved",
        true,
        format!("orders 1..={order} solved without obstruction"),
    );
    let mc_detail: Vec<String> = run
        .mc_residuals
        .iter()
        .enumerate()
        .map(|(m, r)| format!("order {m}: {}", if r.is_zero() { "0" } else { "nonzero" }))
        .collect();
    report.check(
        "maurer_cartan_residual_zero",
        run.mc_zero(),
        mc_detail.join("; "),
    );
    let cyb_detail: Vec<String> = run
        .cyb_residuals
        .iter()
        .enumerate()
        .map(|(m, r)| format!("order {m}: {}", if r.is_zero() { "0" } else { "nonzero" }))
        .collect();
    report.check(
        "cocycle_equation_residual_zero",
        run.cyb_zero(),
        cyb_detail.join("; "),
    );
    report.check(
        "residuals_agree",
        run.mc_zero() == run.cyb_zero(),
        "the two independent residual computations agree".into(),
    );

    let t_coeffs: Vec<serde_json::Value> = (0..=order)
        .map(|m| serde_json::Value::String(format_tensor(run.t.coeff(m))))
        .collect();
    report.witness("t_coefficients", serde_json::Value::Array(t_coeffs));
    let mc: Vec<serde_json::Value> = run
        .mc_residuals
        .iter()
        .map(|r| serde_json::Value::String(format_tensor(r)))
        .collect();
    report.witness("mc_residuals", serde_json::Value::Array(mc));
    let cyb: Vec<serde_json::Value> = run
        .cyb_residuals
        .iter()
        .map(|r| serde_json::Value::String(format_tensor(r)))
        .collect();
    report.witness("cyb_residuals", serde_json::Value::Array(cyb));
    Ok(report)
}

/// Sanity helper used by tests: a closed cochain's differential is zero.
pub fn cochain_is_closed(c: &drinfeld::cochain::Cochain) -> Result<bool, CoreError> {
    Ok(ce_differential(c)?.is_zero())
}
