//! Named verification suites over the exact algebra and the numerical
//! machinery, shared by the `verify` command and the acceptance tests.
//!
//! Each suite bundles related checks and reports one pass/fail line per
//! check. Suites that sample random inputs derive them from a caller-chosen
//! seed so reruns are reproducible; the seed is recorded in the report
//! either way. The symbolic sweep suites accept an optional dimension cap
//! so a command-line run can shorten them; the default ranges are the ones
//! the acceptance gate relies on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeff::{
    a_coeff, a_coeff_dim_step, a_coeff_recurrence, b_coeff, coeff_sums, double_factorial, rat,
    rat_int, sigma, triangle, CoeffFamily, Rational, TriangleRow,
};
use crate::numerics::{
    integral_identity_check, pairing, residual_grid, ring_point_gap, slope_fit, structural_check,
    Extrapolation, FitDirection, FitKind, IntegralIdentity, PairingSpec, QuadratureSpec,
    SlopeSpec, StencilSpec, StructuralRelation,
};
use crate::solutions::{
    build, decompose_a_in_l, eval_ring, eval_termsum, RingIntegrand, Solution, SolutionFamily,
};
use crate::termalg::{
    apply_operator, apply_operator_x, check_rearrangement, check_rearrangement_x, phi_x,
    random_termsum_1d, random_termsum_2d, transform_fa, transform_fl, transform_x, Monomial2D,
    OperatorKind, RearrangementId, TermSum2D,
};
use crate::{domain_err, DomainError};
use num::One;

/// One named pass/fail line inside a suite report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// The outcome of one verification suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            checks: Vec::new(),
            pass: true,
        }
    }

    fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.pass &= pass;
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }
}

/// Every suite name `run_suite` accepts, in the order `run_all` uses.
pub const SUITE_NAMES: [&str; 10] = [
    "annihilation",
    "transforms",
    "rearrangements",
    "triangles",
    "sums",
    "residuals",
    "identities",
    "structural",
    "pairing",
    "asymptotics",
];

/// The subset of suites that work purely in exact arithmetic.
pub const SYMBOLIC_SUITES: [&str; 5] = [
    "annihilation",
    "transforms",
    "rearrangements",
    "triangles",
    "sums",
];

/// The subset of suites that rely on floating-point numerics.
pub const NUMERIC_SUITES: [&str; 5] = [
    "residuals",
    "identities",
    "structural",
    "pairing",
    "asymptotics",
];

/// Sparse numeric overrides for suite runs. `None` fields keep the pinned
/// defaults the acceptance gate relies on; setting a field rebinds that
/// knob in every numeric suite that uses it (the symbolic suites are
/// exact and take no tuning).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SuiteTunables {
    pub quad_abs_tol: Option<f64>,
    pub quad_rel_tol: Option<f64>,
    pub quad_max_depth: Option<u32>,
    pub fd_h: Option<f64>,
    pub fd_order: Option<u8>,
    pub pair_rho0: Option<f64>,
    pub pair_eps_ratio: Option<f64>,
    pub pair_steps: Option<u32>,
    pub fit_samples: Option<usize>,
}

impl SuiteTunables {
    /// Apply the quadrature overrides on top of `base`.
    pub fn quad(&self, base: QuadratureSpec) -> QuadratureSpec {
        QuadratureSpec {
            abs_tol: self.quad_abs_tol.unwrap_or(base.abs_tol),
            rel_tol: self.quad_rel_tol.unwrap_or(base.rel_tol),
            max_depth: self.quad_max_depth.unwrap_or(base.max_depth),
            ..base
        }
    }

    /// Apply the finite-difference overrides on top of `base`.
    pub fn stencil(&self, base: StencilSpec) -> StencilSpec {
        StencilSpec {
            h: self.fd_h.unwrap_or(base.h),
            order: self.fd_order.unwrap_or(base.order),
        }
    }

    /// Apply the excision-limit overrides on top of `base`.
    pub fn pairing_spec(&self, base: PairingSpec) -> PairingSpec {
        PairingSpec {
            rho0: self.pair_rho0.unwrap_or(base.rho0),
            eps_ratio: self.pair_eps_ratio.unwrap_or(base.eps_ratio),
            steps: self.pair_steps.unwrap_or(base.steps),
            ..base
        }
    }

    /// Apply the fit-sampling overrides on top of `base`.
    pub fn slope(&self, base: SlopeSpec) -> SlopeSpec {
        SlopeSpec {
            samples: self.fit_samples.unwrap_or(base.samples),
            ..base
        }
    }
}

/// Run one suite by name with its default ranges.
pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport, DomainError> {
    run_suite_configured(name, seed, None, &SuiteTunables::default())
}

/// Run one suite by name, optionally capping the symbolic dimension sweeps
/// at `max_n`. Numeric suites ignore the cap (their ranges are part of the
/// guarantees they state).
pub fn run_suite_capped(
    name: &str,
    seed: u64,
    max_n: Option<u32>,
) -> Result<SuiteReport, DomainError> {
    run_suite_configured(name, seed, max_n, &SuiteTunables::default())
}

/// Run one suite by name with a symbolic-sweep cap and numeric overrides.
pub fn run_suite_configured(
    name: &str,
    seed: u64,
    max_n: Option<u32>,
    tunables: &SuiteTunables,
) -> Result<SuiteReport, DomainError> {
    if let Some(cap) = max_n {
        if cap < 4 {
            return domain_err(format!("suite cap must be at least 4, got {cap}"));
        }
    }
    match name {
        "annihilation" => annihilation_suite_capped(seed, max_n),
        "transforms" => transforms_suite_capped(seed, max_n),
        "rearrangements" => rearrangements_suite_capped(seed, max_n),
        "triangles" => triangles_suite_capped(seed, max_n),
        "sums" => sums_suite_capped(seed, max_n),
        "residuals" => residuals_suite_with(seed, tunables),
        "identities" => identities_suite_with(seed, tunables),
        "structural" => structural_suite_with(seed, tunables),
        "pairing" => pairing_suite_with(seed, tunables),
        "asymptotics" => asymptotics_suite_with(seed, tunables),
        other => domain_err(format!(
            "unknown suite {other:?}; known suites: {}",
            SUITE_NAMES.join(" ")
        )),
    }
}

/// Run every suite in the canonical order.
pub fn run_all(seed: u64) -> Result<Vec<SuiteReport>, DomainError> {
    SUITE_NAMES.iter().map(|s| run_suite(s, seed)).collect()
}

fn cap_hi(default: u32, cap: Option<u32>) -> u32 {
    cap.map(|c| c.min(default)).unwrap_or(default)
}

fn point_sum(family: SolutionFamily, n: u32) -> Result<TermSum2D, DomainError> {
    match build(family, n)? {
        Solution::PointRz { sum } => Ok(sum),
        _ => domain_err(format!("{family} in n = {n} is not an (r z) point field")),
    }
}

fn ring_integrand(family: SolutionFamily, n: u32) -> Result<RingIntegrand, DomainError> {
    match build(family, n)? {
        Solution::Ring { integrand } => Ok(integrand),
        _ => domain_err(format!("{family} in n = {n} is not a ring field")),
    }
}

/// Frozen low-dimension rows of the end-normalized odd triangle
/// (rows n = 3 5 .. 15; entries k = 3 5 .. n as reduced fractions).
const A_ROWS: [&[(i64, i64)]; 7] = [
    &[(1, 1)],
    &[(1, 1), (1, 1)],
    &[(1, 1), (2, 3), (1, 1)],
    &[(1, 1), (3, 5), (3, 5), (1, 1)],
    &[(1, 1), (4, 7), (18, 35), (4, 7), (1, 1)],
    &[(1, 1), (5, 9), (10, 21), (10, 21), (5, 9), (1, 1)],
    &[(1, 1), (6, 11), (5, 11), (100, 231), (5, 11), (6, 11), (1, 1)],
];

/// Frozen low-dimension rows of the unit-sum odd triangle.
const B_ROWS: [&[(i64, i64)]; 7] = [
    &[(1, 1)],
    &[(1, 2), (1, 2)],
    &[(3, 8), (1, 4), (3, 8)],
    &[(5, 16), (3, 16), (3, 16), (5, 16)],
    &[(35, 128), (5, 32), (9, 64), (5, 32), (35, 128)],
    &[(63, 256), (35, 256), (15, 128), (15, 128), (35, 256), (63, 256)],
    &[
        (231, 1024),
        (63, 512),
        (105, 1024),
        (25, 256),
        (105, 1024),
        (63, 512),
        (231, 1024),
    ],
];

fn row_matches(row: &TriangleRow, frozen: &[(i64, i64)]) -> bool {
    row.values.len() == frozen.len()
        && row
            .values
            .iter()
            .zip(frozen)
            .all(|(v, &(p, q))| *v == rat(p, q))
}

/// Coefficient triangles against frozen tables, plus agreement of the
/// closed form with both recurrences.
pub fn triangles_suite(seed: u64) -> Result<SuiteReport, DomainError> {
    triangles_suite_capped(seed, None)
}

fn triangles_suite_capped(seed: u64, cap: Option<u32>) -> Result<SuiteReport, DomainError> {
    let mut report = SuiteReport::new("triangles", seed);
    let hi = cap_hi(15, cap);
    let hi = if hi % 2 == 0 { hi - 1 } else { hi };

    for (family, frozen, label) in [
        (CoeffFamily::AOdd, &A_ROWS, "a"),
        (CoeffFamily::BOdd, &B_ROWS, "b"),
    ] {
        let rows = triangle(family, hi)?;
        for (row, want) in rows.iter().zip(frozen.iter()) {
            report.push(
                format!("{label}-triangle row n = {}", row.n),
                row_matches(row, want),
                format!("{} entries against the frozen table", row.values.len()),
            );
        }
    }

    if hi >= 11 {
        report.push(
            "a-coefficient spot value k = 7 n = 11",
            a_coeff(7, 11)? == rat(18, 35),
            format!("got {}; expected 18/35", a_coeff(7, 11)?),
        );
    }
    if hi >= 15 {
        report.push(
            "b-coefficient spot value k = 7 n = 15",
            b_coeff(7, 15)? == rat(105, 1024),
            format!("got {}; expected 105/1024", b_coeff(7, 15)?),
        );
    }

    let mut agree = true;
    let mut detail = format!(
        "closed form agrees with the in-row and cross-row recurrences for odd n = 3..{hi}"
    );
    'rows: for n in (3..=hi).step_by(2) {
        let mut k = 3;
        while k <= n {
            let closed = a_coeff(k, n)?;
            if a_coeff_recurrence(k, n)? != closed {
                agree = false;
                detail = format!("in-row recurrence differs at k = {k} n = {n}");
                break 'rows;
            }
            if n >= 5 && k <= n - 2 && a_coeff_dim_step(k, n)? != closed {
                agree = false;
                detail = format!("dimension-step form differs at k = {k} n = {n}");
                break 'rows;
            }
            k += 2;
        }
    }
    report.push("a-coefficient recurrences", agree, detail);

    Ok(report)
}

/// Exact row sums, the auxiliary vanishing sums, and the sphere-area
/// identity.
pub fn sums_suite(seed: u64) -> Result<SuiteReport, DomainError> {
    sums_suite_capped(seed, None)
}

fn sums_suite_capped(seed: u64, cap: Option<u32>) -> Result<SuiteReport, DomainError> {
    let mut report = SuiteReport::new("sums", seed);
    let hi = cap_hi(201, cap);
    let hi = if hi % 2 == 0 { hi - 1 } else { hi };
    let sigma_hi = cap_hi(50, cap);

    let mut b_ok = true;
    let mut a_ok = true;
    let mut aux_k_ok = true;
    let mut aux_nk_ok = true;
    let mut b_detail = format!("sum of each b-row is 1 for odd n = 3..{hi}");
    let mut a_detail = format!("sum of each a-row is (n-3)!!/(n-4)!! for odd n = 3..{hi}");
    let mut aux_k_detail = format!("sum of a(k n)/(k-4) vanishes for odd n = 5..{hi}");
    let mut aux_nk_detail = format!("sum of a(k n)/(n-k-1) vanishes for odd n = 5..{hi}");
    let zero = Rational::from_integer(0.into());
    for n in (3..=hi).step_by(2) {
        let sums = coeff_sums(n)?;
        if b_ok && sums.sum_b != Rational::one() {
            b_ok = false;
            b_detail = format!("b-row sum differs from 1 at n = {n}");
        }
        let want_a = Rational::new(
            double_factorial(n as i64 - 3)?,
            double_factorial(n as i64 - 4)?,
        );
        if a_ok && sums.sum_a != want_a {
            a_ok = false;
            a_detail = format!("a-row sum differs from (n-3)!!/(n-4)!! at n = {n}");
        }
        if n >= 5 {
            if aux_k_ok && sums.aux_inv_k_minus_4.as_ref() != Some(&zero) {
                aux_k_ok = false;
                aux_k_detail = format!("1/(k-4)-weighted sum fails to vanish at n = {n}");
            }
            if aux_nk_ok && sums.aux_inv_n_minus_k_minus_1.as_ref() != Some(&zero) {
                aux_nk_ok = false;
                aux_nk_detail = format!("1/(n-k-1)-weighted sum fails to vanish at n = {n}");
            }
        }
    }
    report.push("b-row sums", b_ok, b_detail);
    report.push("a-row sums", a_ok, a_detail);
    report.push("auxiliary sum over 1/(k-4)", aux_k_ok, aux_k_detail);
    report.push("auxiliary sum over 1/(n-k-1)", aux_nk_ok, aux_nk_detail);

    if hi >= 9 {
        let s9 = coeff_sums(9)?;
        report.push(
            "row sums spot values n = 9",
            s9.sum_a == rat(16, 5) && s9.sum_b == Rational::one(),
            format!("a-row {}; b-row {}", s9.sum_a, s9.sum_b),
        );
    }

    let mut sigma_ok = true;
    let mut sigma_detail = format!(
        "sigma(n) (n-2) equals sigma(2) sigma(n-2) exactly for n = 3..{sigma_hi}"
    );
    let sigma2 = sigma(2)?;
    for n in 3..=sigma_hi {
        let lhs = sigma(n)?.scale(&rat_int(n as i64 - 2));
        let rhs = sigma2.mul(&sigma(n - 2)?);
        if lhs != rhs {
            sigma_ok = false;
            sigma_detail = format!("identity fails at n = {n}");
            break;
        }
    }
    report.push("sigma identity", sigma_ok, sigma_detail);
    let s4 = sigma(4)?;
    report.push(
        "sigma spot value n = 4",
        s4.coeff == rat_int(2) && s4.pi_power == 2,
        format!("got {s4}; expected 2 pi^2"),
    );

    Ok(report)
}

/// Exact annihilation of every point family by its operator, the even
/// z-derivative closed form, and the n = 4 log-difference field.
pub fn annihilation_suite(seed: u64) -> Result<SuiteReport, DomainError> {
    annihilation_suite_capped(seed, None)
}

fn annihilation_suite_capped(seed: u64, cap: Option<u32>) -> Result<SuiteReport, DomainError> {
    let mut report = SuiteReport::new("annihilation", seed);
    let odd_hi = {
        let h = cap_hi(51, cap);
        if h % 2 == 0 {
            h - 1
        } else {
            h
        }
    };
    let even_hi = {
        let h = cap_hi(50, cap);
        if h % 2 == 1 {
            h - 1
        } else {
            h
        }
    };
    let xi_hi = cap_hi(50, cap);

    let run_family = |report: &mut SuiteReport,
                          name: &str,
                          family: SolutionFamily,
                          ns: Vec<u32>,
                          detail: String|
     -> Result<(), DomainError> {
        let mut ok = true;
        let mut det = detail;
        for n in ns {
            let sum = point_sum(family, n)?;
            let image = apply_operator(family.operator(), n, &sum)?;
            if !image.is_zero() {
                ok = false;
                det = format!("nonzero image at n = {n}");
                break;
            }
        }
        report.push(name, ok, det);
        Ok(())
    };

    run_family(
        &mut report,
        "anti-z annihilates psi odd rows",
        SolutionFamily::Psi,
        (3..=odd_hi).step_by(2).collect(),
        format!("odd n = 3..{odd_hi} all map to the empty sum"),
    )?;
    run_family(
        &mut report,
        "anti-z annihilates psi even rows",
        SolutionFamily::Psi,
        (4..=even_hi).step_by(2).collect(),
        format!("even n = 4..{even_hi} all map to the empty sum"),
    )?;
    run_family(
        &mut report,
        "anti-z annihilates psi-bar",
        SolutionFamily::PsiBar,
        (3..=odd_hi).step_by(2).collect(),
        format!("unit-sum rows odd n = 3..{odd_hi} all map to the empty sum"),
    )?;
    run_family(
        &mut report,
        "laplacian annihilates xi",
        SolutionFamily::Xi,
        (2..=xi_hi).collect(),
        format!("n = 2..{xi_hi} all map to the empty sum"),
    )?;
    run_family(
        &mut report,
        "anti-z annihilates psi-tilde-4",
        SolutionFamily::PsiTilde4,
        vec![4],
        "the n = 4 log difference maps to the empty sum".to_string(),
    )?;

    let mut phi_ok = true;
    let mut phi_detail = format!("x-frame laplacian kills the point field for n = 2..{xi_hi}");
    for n in 2..=xi_hi {
        let phi = phi_x(n)?;
        if !apply_operator_x(OperatorKind::LaplaceX, n, &phi)?.is_zero() {
            phi_ok = false;
            phi_detail = format!("nonzero image at n = {n}");
            break;
        }
    }
    report.push("x-frame laplacian annihilates phi", phi_ok, phi_detail);

    let mut dz_ok = true;
    let mut dz_detail = format!(
        "d/dz of the even field is exactly -z^(n-3) Rbar^-(n-2) for even n = 4..{even_hi}"
    );
    for n in (4..=even_hi).step_by(2) {
        let psi = point_sum(SolutionFamily::Psi, n)?;
        let want = TermSum2D::new(vec![Monomial2D::power(
            rat_int(-1),
            0,
            n as i32 - 3,
            -(n as i32 - 2),
        )]);
        if !psi.d_z().sub(&want).is_zero() {
            dz_ok = false;
            dz_detail = format!("closed form differs at n = {n}");
            break;
        }
    }
    report.push("even z-derivative closed form", dz_ok, dz_detail);

    Ok(report)
}

/// Dimension-raising transforms rebuild both ladders, and the odd field
/// decomposes over weighted copies of the radial kernel.
pub fn transforms_suite(seed: u64) -> Result<SuiteReport, DomainError> {
    transforms_suite_capped(seed, None)
}

fn transforms_suite_capped(seed: u64, cap: Option<u32>) -> Result<SuiteReport, DomainError> {
    let mut report = SuiteReport::new("transforms", seed);
    let even_hi = {
        let h = cap_hi(50, cap);
        if h % 2 == 1 {
            h - 1
        } else {
            h
        }
    };
    let odd_hi = even_hi - 1;
    let dec_hi = {
        let h = cap_hi(51, cap);
        if h % 2 == 0 {
            h - 1
        } else {
            h
        }
    };

    let chain = |report: &mut SuiteReport,
                 name: &str,
                 family: SolutionFamily,
                 start: u32,
                 last: u32,
                 anti: bool|
     -> Result<(), DomainError> {
        let mut cur = point_sum(family, start)?;
        let mut ok = true;
        let mut detail = format!("chain from n = {start} reaches n = {last}");
        let mut n = start + 2;
        while n <= last {
            cur = if anti {
                transform_fa(n, &cur)?
            } else {
                transform_fl(n, &cur)?
            };
            if !cur.sub(&point_sum(family, n)?).is_zero() {
                ok = false;
                detail = format!("chain leaves the family at n = {n}");
                break;
            }
            n += 2;
        }
        report.push(name, ok, detail);
        Ok(())
    };

    chain(&mut report, "laplace transform chain xi odd", SolutionFamily::Xi, 3, odd_hi, false)?;
    chain(&mut report, "laplace transform chain xi even", SolutionFamily::Xi, 4, even_hi, false)?;
    chain(&mut report, "anti transform chain psi odd", SolutionFamily::Psi, 3, odd_hi, true)?;
    chain(&mut report, "anti transform chain psi even", SolutionFamily::Psi, 4, even_hi, true)?;

    for (start, last) in [(2u32, even_hi), (3, odd_hi)] {
        let mut cur = phi_x(start)?;
        let mut ok = true;
        let mut detail = format!("chain from n = {start} reaches n = {last}");
        let mut n = start + 2;
        while n <= last {
            cur = transform_x(n, &cur)?;
            if !cur.sub(&phi_x(n)?).is_zero() {
                ok = false;
                detail = format!("chain leaves the family at n = {n}");
                break;
            }
            n += 2;
        }
        report.push(
            format!("x-frame transform chain from n = {start}"),
            ok,
            detail,
        );
    }

    let mut dec_ok = true;
    let mut dec_detail = format!(
        "weighted kernel decomposition rebuilds the field for odd n = 3..{dec_hi}"
    );
    for n in (3..=dec_hi).step_by(2) {
        let parts = decompose_a_in_l(n)?;
        let mut rebuilt = TermSum2D::new(vec![]);
        for (c, k) in &parts {
            let kernel = point_sum(SolutionFamily::Xi, *k)?;
            rebuilt = rebuilt.add(&kernel.mul_powers(0, *k as i32 - 3, 0).scale(c));
        }
        if !rebuilt.sub(&point_sum(SolutionFamily::Psi, n)?).is_zero() {
            dec_ok = false;
            dec_detail = format!("decomposition differs from the field at n = {n}");
            break;
        }
    }
    report.push("kernel decomposition", dec_ok, dec_detail);

    if dec_hi >= 9 {
        let parts9 = decompose_a_in_l(9)?;
        let want9: Vec<(Rational, u32)> = vec![
            (rat_int(1), 3),
            (rat(3, 5), 5),
            (rat(3, 5), 7),
            (rat_int(1), 9),
        ];
        report.push(
            "kernel decomposition spot values n = 9",
            parts9 == want9,
            "weights 1 3/5 3/5 1 on kernels k = 3 5 7 9".to_string(),
        );
    }

    Ok(report)
}

/// Operator rearrangement identities on seeded random term sums.
pub fn rearrangements_suite(seed: u64) -> Result<SuiteReport, DomainError> {
    rearrangements_suite_capped(seed, None)
}

fn rearrangements_suite_capped(seed: u64, cap: Option<u32>) -> Result<SuiteReport, DomainError> {
    let mut report = SuiteReport::new("rearrangements", seed);
    let hi = cap_hi(12, cap);
    const SUMS_PER_DIM: usize = 100;
    for id in RearrangementId::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ok = true;
        let mut detail = format!("n = 3..{hi} with {SUMS_PER_DIM} random sums per dimension");
        'dims: for n in 3..=hi {
            for _ in 0..SUMS_PER_DIM {
                let zero = if id.is_rz_frame() {
                    let ts = random_termsum_2d(&mut rng, 4);
                    check_rearrangement(id, n, &ts)?.is_zero()
                } else {
                    let ts = random_termsum_1d(&mut rng, 4);
                    check_rearrangement_x(id, n, &ts)?.is_zero()
                };
                if !zero {
                    ok = false;
                    detail = format!("nonzero difference at n = {n}");
                    break 'dims;
                }
            }
        }
        report.push(format!("identity {id}"), ok, detail);
    }
    Ok(report)
}

/// Finite-difference residuals of the ring fields under their operators,
/// plus the off-axis residual of the n = 4 log-difference field.
pub fn residuals_suite(seed: u64) -> Result<SuiteReport, DomainError> {
    residuals_suite_with(seed, &SuiteTunables::default())
}

fn residuals_suite_with(seed: u64, t: &SuiteTunables) -> Result<SuiteReport, DomainError> {
    let mut report = SuiteReport::new("residuals", seed);
    // The field under the stencil must be far more accurate than the
    // residual it is supposed to reveal; 1e-12 keeps the quadrature noise
    // below the order estimate at h = 5e-3.
    let quad = t.quad(QuadratureSpec {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        ..QuadratureSpec::default()
    });
    let spec = t.stencil(StencilSpec { h: 1e-2, order: 2 });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const NUM_POINTS: usize = 20;
    const RING_RADIUS: f64 = 1.0;

    let cases: [(SolutionFamily, std::ops::RangeInclusive<u32>); 3] = [
        (SolutionFamily::PsiRing, 3..=9),
        (SolutionFamily::Chi, 3..=9),
        (SolutionFamily::XiRing, 3..=7),
    ];
    for (family, ns) in cases {
        for n in ns {
            let integrand = ring_integrand(family, n)?;
            let points: Vec<[f64; 2]> = (0..NUM_POINTS)
                .map(|_| [rng.gen_range(0.6..1.8), rng.gen_range(0.6..1.8)])
                .collect();
            let mut field = |r: f64, z: f64| {
                eval_ring(&integrand, r, z, RING_RADIUS, &quad).map(|e| e.value)
            };
            let res = residual_grid(family.operator(), n, &mut field, &points, &spec, 1.9)?;
            let max_res = res.residuals.iter().cloned().fold(0.0_f64, f64::max);
            report.push(
                format!("{family} n = {n} residual order"),
                res.pass,
                format!(
                    "median order {:.2}; max residual {:.2e} at h = {:.0e}",
                    res.order_estimate, max_res, spec.h
                ),
            );
        }
    }

    let tilde = point_sum(SolutionFamily::PsiTilde4, 4)?;
    let points: Vec<[f64; 2]> = (0..NUM_POINTS)
        .map(|_| [rng.gen_range(0.6..1.8), rng.gen_range(0.6..1.8)])
        .collect();
    let mut field = |r: f64, z: f64| eval_termsum(&tilde, r, z);
    let res = residual_grid(OperatorKind::AntiZ, 4, &mut field, &points, &spec, 1.9)?;
    let max_res = res.residuals.iter().cloned().fold(0.0_f64, f64::max);
    report.push(
        "psi-tilde-4 residual order",
        res.pass,
        format!(
            "median order {:.2}; max residual {:.2e} at h = {:.0e}",
            res.order_estimate, max_res, spec.h
        ),
    );

    Ok(report)
}

/// Ring-average integral identities vanish on random parameter draws.
pub fn identities_suite(seed: u64) -> Result<SuiteReport, DomainError> {
    identities_suite_with(seed, &SuiteTunables::default())
}

fn identities_suite_with(seed: u64, t: &SuiteTunables) -> Result<SuiteReport, DomainError> {
    let mut report = SuiteReport::new("identities", seed);
    let quad = t.quad(QuadratureSpec {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        ..QuadratureSpec::default()
    });
    const TOLERANCE: f64 = 1e-9;
    const DRAWS: usize = 10;

    let mut identities = Vec::new();
    for k in [3u32, 5, 7, 9] {
        identities.push(IntegralIdentity::CosPower { k });
    }
    for k in [3u32, 5, 7, 9] {
        identities.push(IntegralIdentity::PlainPower { k });
    }
    identities.push(IntegralIdentity::CosLog);
    identities.push(IntegralIdentity::CosLogPlanar);

    for identity in identities {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ok = true;
        let mut worst = 0.0_f64;
        for _ in 0..DRAWS {
            let (r, z, a) = if matches!(identity, IntegralIdentity::CosLogPlanar) {
                (rng.gen_range(0.4..0.9), 0.0, rng.gen_range(1.4..2.0))
            } else {
                (
                    rng.gen_range(0.6..1.4),
                    rng.gen_range(0.8..1.6),
                    rng.gen_range(0.6..1.4),
                )
            };
            let check = integral_identity_check(identity, r, z, a, TOLERANCE, &quad)?;
            worst = worst.max(check.value.abs());
            ok &= check.pass;
        }
        report.push(
            format!("identity {identity}"),
            ok,
            format!("max deviation {worst:.2e} over {DRAWS} draws; tolerance {TOLERANCE:.0e}"),
        );
    }

    Ok(report)
}

/// Angular-factor lift relations verified by finite differences at random
/// points.
pub fn structural_suite(seed: u64) -> Result<SuiteReport, DomainError> {
    structural_suite_with(seed, &SuiteTunables::default())
}

fn structural_suite_with(seed: u64, t: &SuiteTunables) -> Result<SuiteReport, DomainError> {
    let mut report = SuiteReport::new("structural", seed);
    let spec = t.stencil(StencilSpec { h: 1e-2, order: 2 });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const NUM_POINTS: usize = 5;

    let cases = [
        (StructuralRelation::CartesianLift { component: 0 }, 3u32),
        (StructuralRelation::CartesianLift { component: 1 }, 4),
        (StructuralRelation::CartesianLift { component: 2 }, 5),
        (StructuralRelation::CartesianLift { component: 0 }, 6),
        (StructuralRelation::CosPhiLift, 4),
        (StructuralRelation::CosPhiLift, 5),
        (StructuralRelation::CosThetaLift, 4),
        (StructuralRelation::CosThetaLift, 5),
        (StructuralRelation::DoubleAngularLift, 4),
        (StructuralRelation::DoubleAngularLift, 5),
    ];
    for (relation, n) in cases {
        let res = structural_check(relation, n, &mut rng, NUM_POINTS, &spec, 1.9)?;
        report.push(
            format!("{relation} n = {n} order"),
            res.pass,
            format!(
                "median order {:.2} over {NUM_POINTS} points",
                res.order_estimate
            ),
        );
    }

    Ok(report)
}

/// Excision pairings recover the expected source strengths, and the two
/// iterated limit orders agree where both are defined.
pub fn pairing_suite(seed: u64) -> Result<SuiteReport, DomainError> {
    pairing_suite_with(seed, &SuiteTunables::default())
}

fn pairing_suite_with(seed: u64, t: &SuiteTunables) -> Result<SuiteReport, DomainError> {
    let mut report = SuiteReport::new("pairing", seed);
    let quad = t.quad(QuadratureSpec::default());
    let spec = t.pairing_spec(PairingSpec::default());
    let mut order_gaps: Vec<(String, f64)> = Vec::new();

    let cases = [
        (SolutionFamily::PsiBar, vec![3u32, 5, 7]),
        (SolutionFamily::Psi, vec![3, 5, 7]),
        (SolutionFamily::Xi, vec![3, 4]),
    ];
    for (family, ns) in cases {
        for n in ns {
            let rep = pairing(family, n, &spec, &quad)?;
            let expected = rep.expected.unwrap_or(f64::NAN);
            report.push(
                format!("{family} n = {n} pairing"),
                rep.pass.unwrap_or(false),
                format!(
                    "extrapolated {:.6}; expected {expected:.6}; tolerance {:.0e}",
                    rep.extrapolated, rep.tolerance
                ),
            );
            if let (Some(ef), Some(tf)) = (rep.eps_first, rep.eta_first) {
                let gap = (ef - tf).abs() / rep.extrapolated.abs().max(1.0);
                order_gaps.push((format!("{family} n = {n}"), gap));
            }
        }
    }

    // The even case approaches zero like s log(s) along the joint path and
    // needs a deeper excision sequence to clear the absolute band.
    let even_spec = t.pairing_spec(PairingSpec {
        steps: 12,
        extrapolation: Extrapolation::Richardson,
        ..PairingSpec::default()
    });
    let rep = pairing(SolutionFamily::Psi, 4, &even_spec, &quad)?;
    report.push(
        "psi n = 4 pairing",
        rep.pass.unwrap_or(false),
        format!(
            "extrapolated {:.2e}; expected 0 within {:.0e}",
            rep.extrapolated, rep.tolerance
        ),
    );

    let worst = order_gaps
        .iter()
        .cloned()
        .fold(("none".to_string(), 0.0_f64), |acc, it| {
            if it.1 > acc.1 {
                it
            } else {
                acc
            }
        });
    report.push(
        "limit order independence",
        worst.1 <= 1e-2,
        format!(
            "largest gap between limit orders {:.2e} at {}",
            worst.1, worst.0
        ),
    );

    Ok(report)
}

/// Far-zone decay exponents and log coefficients, source-plane behavior,
/// and the shrinking-ring limit toward the point fields.
pub fn asymptotics_suite(seed: u64) -> Result<SuiteReport, DomainError> {
    asymptotics_suite_with(seed, &SuiteTunables::default())
}

fn asymptotics_suite_with(seed: u64, t: &SuiteTunables) -> Result<SuiteReport, DomainError> {
    let mut report = SuiteReport::new("asymptotics", seed);
    let quad = t.quad(QuadratureSpec::default());
    // Far-zone ring samples are tiny cos-weighted integrals; the absolute
    // tolerance must sit well below the smallest sampled value.
    let quad_ring = t.quad(QuadratureSpec {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        ..QuadratureSpec::default()
    });
    let far = t.slope(SlopeSpec::for_direction(FitDirection::RLarge));
    let plane = t.slope(SlopeSpec::for_direction(FitDirection::ZAxis));

    for n in [3u32, 5, 7, 9] {
        let fit = slope_fit(
            SolutionFamily::PsiBar,
            n,
            None,
            FitDirection::RLarge,
            FitKind::PowerLaw,
            &far,
            &quad,
        )?;
        report.push(
            format!("psi-bar n = {n} far-zone exponent"),
            (fit.slope + 1.0).abs() <= 0.05,
            format!("slope {:.4}; expected -1 within 0.05", fit.slope),
        );
    }
    for n in [3u32, 5, 7, 9] {
        let fit = slope_fit(
            SolutionFamily::PsiRing,
            n,
            Some(1.0),
            FitDirection::RLarge,
            FitKind::PowerLaw,
            &far,
            &quad_ring,
        )?;
        report.push(
            format!("psi-ring n = {n} far-zone exponent"),
            (fit.slope + 1.0).abs() <= 0.05,
            format!("slope {:.4}; expected -1 within 0.05", fit.slope),
        );
    }
    for n in [4u32, 6, 8] {
        let fit = slope_fit(
            SolutionFamily::Psi,
            n,
            None,
            FitDirection::RLarge,
            FitKind::LogCoefficient,
            &far,
            &quad,
        )?;
        report.push(
            format!("psi n = {n} far-zone log coefficient"),
            (fit.slope - 1.0).abs() <= 0.05,
            format!("coefficient {:.4}; expected 1 within 0.05", fit.slope),
        );
    }
    for n in [4u32, 6, 8] {
        let fit = slope_fit(
            SolutionFamily::Chi,
            n,
            Some(1.0),
            FitDirection::RLarge,
            FitKind::LogCoefficient,
            &far,
            &quad_ring,
        )?;
        report.push(
            format!("chi n = {n} far-zone log coefficient"),
            (fit.slope - 1.0).abs() <= 0.05,
            format!("coefficient {:.4}; expected 1 within 0.05", fit.slope),
        );
    }

    for n in [3u32, 5, 7, 9] {
        let fit = slope_fit(
            SolutionFamily::PsiBar,
            n,
            None,
            FitDirection::ZAxis,
            FitKind::PowerLaw,
            &plane,
            &quad,
        )?;
        report.push(
            format!("psi-bar n = {n} source-plane exponent"),
            (fit.slope + 1.0).abs() <= 1e-6,
            format!("slope {:.10}; expected -1 within 1e-6", fit.slope),
        );
    }
    for n in [4u32, 6, 8] {
        let fit = slope_fit(
            SolutionFamily::Psi,
            n,
            None,
            FitDirection::ZAxis,
            FitKind::LogCoefficient,
            &plane,
            &quad,
        )?;
        report.push(
            format!("psi n = {n} source-plane log form"),
            (fit.slope - 1.0).abs() <= 1e-6 && fit.intercept.abs() <= 1e-9,
            format!(
                "coefficient {:.10}; intercept {:.2e}; expected 1 and 0",
                fit.slope, fit.intercept
            ),
        );
    }

    for n in 3..=6u32 {
        let fit = slope_fit(
            SolutionFamily::Xi,
            n,
            None,
            FitDirection::RLarge,
            FitKind::PowerLaw,
            &far,
            &quad,
        )?;
        let want = -(n as f64 - 2.0);
        report.push(
            format!("xi n = {n} far-zone exponent"),
            (fit.slope - want).abs() <= 0.02,
            format!("slope {:.4}; expected {want} within 0.02", fit.slope),
        );
    }

    let gap_points = [(0.9, 1.1), (1.3, 0.7), (0.6, 1.4)];
    for n in [5u32, 6] {
        let g1 = ring_point_gap(n, 0.1, &gap_points, &quad)?;
        let g2 = ring_point_gap(n, 0.05, &gap_points, &quad)?;
        let g3 = ring_point_gap(n, 0.025, &gap_points, &quad)?;
        let r12 = g1 / g2;
        let r23 = g2 / g3;
        report.push(
            format!("chi n = {n} ring-to-point gap decay"),
            r12 >= 1.8 && r23 >= 1.8,
            format!("gap ratios {r12:.2} and {r23:.2} under radius halving; expected at least 1.8"),
        );
    }

    let near = t.slope(SlopeSpec::for_direction(FitDirection::RSmall));
    let fit = slope_fit(
        SolutionFamily::PsiRing,
        5,
        Some(1.0),
        FitDirection::RSmall,
        FitKind::PowerLaw,
        &near,
        &quad_ring,
    )?;
    report.push(
        "psi-ring n = 5 near-axis exponent (reported)",
        true,
        format!("slope {:.4} toward the axis; informational only", fit.slope),
    );

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_suites_pass() {
        for name in ["triangles", "sums", "annihilation", "transforms"] {
            let report = run_suite(name, 0).unwrap();
            for check in &report.checks {
                assert!(check.pass, "{name}: {} ({})", check.name, check.detail);
            }
            assert!(report.pass);
            assert!(!report.checks.is_empty());
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nonsense", 0).is_err());
        assert!(run_suite_capped("triangles", 0, Some(3)).is_err());
    }

    #[test]
    fn seed_is_recorded() {
        let report = run_suite("triangles", 7).unwrap();
        assert_eq!(report.seed, 7);
        assert_eq!(report.suite, "triangles");
    }

    #[test]
    fn capped_sweeps_shrink() {
        let full = run_suite("triangles", 0).unwrap();
        let capped = run_suite_capped("triangles", 0, Some(7)).unwrap();
        assert!(capped.checks.len() < full.checks.len());
        assert!(capped.pass);
        let sums = run_suite_capped("sums", 0, Some(21)).unwrap();
        assert!(sums.pass);
        assert!(sums.checks[0].detail.contains("3..21"));
    }

    #[test]
    fn identities_suite_passes() {
        let report = identities_suite(0).unwrap();
        assert!(report.pass, "{:?}", report.checks);
        assert_eq!(report.checks.len(), 10);
    }

    #[test]
    fn structural_suite_passes() {
        let report = structural_suite(0).unwrap();
        assert!(report.pass, "{:?}", report.checks);
        assert_eq!(report.checks.len(), 10);
    }
}
