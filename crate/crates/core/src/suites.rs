//! Seeded random inputs and the verification suites behind `tatezeta verify`.
//! Every suite runs over the reference configurations; reports are ordered
//! by case index and contain no timing, so a fixed seed reproduces them
//! byte for byte.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{int, rat, Rational};
use crate::characters::Character;
use crate::duality::DualityLab;
use crate::error::{Error, Result};
use crate::fourier::{character_step, coset_measure, fourier, fourier_shell, haar_integral, harr, poisson_check, Sign};
use crate::localfield::{reference_configs, KElement, LocalField};
use crate::padic::check_riemann_lebesgue;
use crate::scalars::{CycScalar, LaurentPoly, RationalFunc};
use crate::stepfun::{g_alpha, g_beta_up, ShellFunction, StepFunction};
use crate::zeta::{gauss_sum, h_n, rho_closed, verify_fe, zeta_integral, zeta_shell, G_bracket};

/// Random inputs. All draws go through the caller's RNG.
pub mod gen {
    use super::*;

    /// Σ_{lo ≤ j < hi} c_j π^j with uniform digits.
    pub fn kelement(rng: &mut impl Rng, field: &LocalField, lo: i64, hi: i64) -> KElement {
        let digits: Vec<(i64, u64)> = (lo..hi).map(|j| (j, rng.gen_range(0..field.ell()))).collect();
        field.from_digits(&digits).expect("digits in range")
    }

    /// An element of exact valuation v, with `depth` digits.
    pub fn of_valuation(rng: &mut impl Rng, field: &LocalField, v: i64, depth: i64) -> KElement {
        let lead = field.pi_pow(v).scale(&int(rng.gen_range(1..field.ell()) as i64));
        &lead + &kelement(rng, field, v + 1, v + depth.max(1))
    }

    pub fn nonzero(rng: &mut impl Rng, field: &LocalField, lo: i64, hi: i64) -> KElement {
        let v = rng.gen_range(lo..hi);
        of_valuation(rng, field, v, hi - lo)
    }

    pub fn small_rational(rng: &mut impl Rng) -> Rational {
        rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
    }

    /// r_1 + r_2·ζ_M^k, sometimes with a √q part.
    pub fn scalar(rng: &mut impl Rng, field: &LocalField) -> CycScalar {
        let cyc = field.cyc();
        let m = cyc.conductor() as i64;
        let mut s = CycScalar::from_rational(cyc, small_rational(rng));
        s += &CycScalar::root(cyc, rng.gen_range(0..m)).scale(&small_rational(rng));
        if rng.gen_bool(0.25) {
            s += &CycScalar::root(cyc, rng.gen_range(0..m))
                .mul_sqrtq()
                .scale(&small_rational(rng));
        }
        s
    }

    pub fn nonzero_scalar(rng: &mut impl Rng, field: &LocalField) -> CycScalar {
        loop {
            let s = scalar(rng, field);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// A coset a + 𝔩^N with N in [−1, 2] and a of depth ≤ 2 digits.
    pub fn coset_term(rng: &mut impl Rng, field: &LocalField) -> (KElement, i64) {
        let n = rng.gen_range(-1..=2);
        (kelement(rng, field, n - 2, n), n)
    }

    /// A coset a + 𝔩^N that avoids 0.
    pub fn coset_term_avoiding_zero(rng: &mut impl Rng, field: &LocalField) -> (KElement, i64) {
        let n = rng.gen_range(-1..=3);
        let v = rng.gen_range(n - 3..n);
        (of_valuation(rng, field, v, n - v), n)
    }

    pub fn step(rng: &mut impl Rng, field: &Arc<LocalField>, max_terms: usize) -> StepFunction {
        let k = rng.gen_range(1..=max_terms);
        let terms = (0..k)
            .map(|_| {
                let (a, n) = coset_term(rng, field);
                (a.reduce(n), scalar(rng, field))
            })
            .collect();
        StepFunction::from_terms(field, terms).expect("finite terms")
    }

    pub fn step_avoiding_zero(rng: &mut impl Rng, field: &Arc<LocalField>, max_terms: usize) -> StepFunction {
        let k = rng.gen_range(1..=max_terms);
        let terms = (0..k)
            .map(|_| {
                let (a, n) = coset_term_avoiding_zero(rng, field);
                (a.reduce(n), scalar(rng, field))
            })
            .collect();
        StepFunction::from_terms(field, terms).expect("finite terms")
    }

    /// Adds c·1_{b+𝔩^M} (b+𝔩^M avoiding 0 when f does) so that ∫f = 0.
    pub fn compensate(rng: &mut impl Rng, f: StepFunction) -> StepFunction {
        let field = f.field().clone();
        let integral = haar_integral(&f);
        if integral.is_zero() {
            return f;
        }
        let (b, m) = coset_term_avoiding_zero(rng, &field);
        let c = -(integral.div(&coset_measure(&field, m)).expect("measure is a unit"));
        let g = f.add(&StepFunction::indicator_at(&field, &b, m).scale(&c)).unwrap();
        debug_assert!(haar_integral(&g).is_zero());
        g
    }

    /// Support in K^× and ∫ f = 0: admissible for the local functional equation.
    pub fn admissible(rng: &mut impl Rng, field: &Arc<LocalField>, max_terms: usize) -> StepFunction {
        loop {
            let f = step_avoiding_zero(rng, field, max_terms);
            let f = compensate(rng, f);
            if !f.is_zero() {
                return f;
            }
        }
    }

    pub fn zero_integral(rng: &mut impl Rng, field: &Arc<LocalField>, max_terms: usize) -> StepFunction {
        let f = step(rng, field, max_terms);
        compensate(rng, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Inversion,
    Poisson,
    Fe,
    Duality,
    Tables,
    Rl,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Inversion,
        Suite::Poisson,
        Suite::Fe,
        Suite::Duality,
        Suite::Tables,
        Suite::Rl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Inversion => "inversion",
            Suite::Poisson => "poisson",
            Suite::Fe => "fe",
            Suite::Duality => "duality",
            Suite::Tables => "tables",
            Suite::Rl => "rl",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "inversion" => Suite::Inversion,
            "poisson" => Suite::Poisson,
            "fe" => Suite::Fe,
            "duality" => Suite::Duality,
            "tables" => Suite::Tables,
            "rl" => Suite::Rl,
            "all" => Suite::All,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuiteResult {
    pub suite: String,
    pub config: String,
    pub cases: usize,
    pub passed: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(suite: Suite, field: &LocalField) -> Self {
        SuiteResult {
            suite: suite.name().into(),
            config: config_label(field),
            cases: 0,
            passed: 0,
            first_failure: None,
        }
    }

    /// Records one case; errors count as failures.
    fn record(&mut self, case: usize, outcome: Result<std::result::Result<(), String>>) {
        self.cases += 1;
        let failure = match outcome {
            Ok(Ok(())) => {
                self.passed += 1;
                return;
            }
            Ok(Err(msg)) => msg,
            Err(e) => format!("error {}: {e}", e.kind()),
        };
        if self.first_failure.is_none() {
            self.first_failure = Some(format!("case {case}: {failure}"));
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub seed: u64,
    pub cases: usize,
    pub results: Vec<SuiteResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(SuiteResult::ok)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).unwrap();
        v["pass"] = self.all_passed().into();
        v
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("seed {} cases {}\n", self.seed, self.cases);
        for r in &self.results {
            let _ = writeln!(
                s,
                "{:<10} {:<10} {:>5}/{:<5} {}",
                r.suite,
                r.config,
                r.passed,
                r.cases,
                if r.ok() { "PASS" } else { "FAIL" }
            );
            if let Some(f) = &r.first_failure {
                let _ = writeln!(s, "    first failure: {f}");
            }
        }
        let _ = writeln!(s, "{}", if self.all_passed() { "ALL PASS" } else { "FAILURES" });
        s
    }
}

pub fn config_label(field: &LocalField) -> String {
    format!("ell={},e={}", field.ell(), field.e())
}

/// A stream per (seed, suite, configuration).
pub fn rng_for(seed: u64, suite: Suite, config: usize) -> ChaCha8Rng {
    let tag = (Suite::EACH.iter().position(|&s| s == suite).unwrap_or(7) as u64) << 8 | config as u64;
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ tag)
}

pub fn reference_fields() -> Vec<Arc<LocalField>> {
    reference_configs()
        .into_iter()
        .map(|p| LocalField::new(p).expect("reference config"))
        .collect()
}

pub fn run(suite: Suite, cases: usize, seed: u64) -> Result<Report> {
    let fields = reference_fields();
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    let mut results = Vec::new();
    for s in suites {
        for (i, field) in fields.iter().enumerate() {
            let mut rng = rng_for(seed, s, i);
            results.push(run_one(s, field, cases, &mut rng)?);
        }
    }
    Ok(Report { seed, cases, results })
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn run_one(suite: Suite, field: &Arc<LocalField>, cases: usize, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let mut res = SuiteResult::new(suite, field);
    match suite {
        Suite::Inversion => {
            for i in 0..cases {
                let f = gen::step(rng, field, 4);
                res.record(i, inversion_case(&f));
            }
        }
        Suite::Poisson => {
            for i in 0..cases {
                let f = gen::step(rng, field, 3);
                let h = gen::kelement(rng, field, -2, 2);
                let lam = gen::nonzero(rng, field, -1, 2);
                let t = gen::kelement(rng, field, -2, 2);
                res.record(i, classic_laws_case(&f, &h, &lam, &t));
            }
        }
        Suite::Fe => {
            for level in 0..=2 {
                let chars = Character::all_of_level(field, level)?;
                if chars.is_empty() {
                    continue;
                }
                for i in 0..cases {
                    let chi = &chars[rng.gen_range(0..chars.len())];
                    let f = gen::admissible(rng, field, 3);
                    let g = gen::admissible(rng, field, 3);
                    let out = verify_fe(&f, &g, chi).map(|ok| check(ok, || format!("level {level}: identity fails")));
                    res.record(i, out);
                }
            }
        }
        Suite::Duality => {
            let mut i = 0;
            for (r, n) in duality_shapes(field) {
                res.record(i, duality_case(field, r, n));
                i += 1;
            }
        }
        Suite::Tables => {
            let mut i = 0;
            for n in 0..=3 {
                for m in 0..=3 {
                    for chi in Character::all_of_level(field, m)? {
                        res.record(i, h_table_case(&chi, n));
                        i += 1;
                    }
                }
            }
            for a in [5, 10, 25] {
                res.record(i, family_case(field, &int(a)));
                i += 1;
            }
            res.record(i, alpha_independence_case(field));
        }
        Suite::Rl => {
            for i in 0..cases {
                let f = gen::zero_integral(rng, field, 4);
                let out = check_riemann_lebesgue(&f).map(|c| {
                    check(
                        c.data.integral_zero && c.bounded_support && c.vanishes_near_zero,
                        || format!("witness rejected: {:?}", c.data),
                    )
                });
                res.record(i, out);
            }
        }
        Suite::All => unreachable!("expanded by run"),
    }
    Ok(res)
}

type CaseResult = Result<std::result::Result<(), String>>;

pub fn inversion_case(f: &StepFunction) -> CaseResult {
    let back = fourier(&fourier(f, Sign::Zeta)?, Sign::ZetaInv)?;
    Ok(check(back == *f, || "F⁻¹F f ≠ f".into()))
}

/// Translation, dilation and Poisson summation for one (f, h, λ, t).
pub fn classic_laws_case(f: &StepFunction, h: &KElement, lam: &KElement, t: &KElement) -> CaseResult {
    let field = f.field();
    let fhat = fourier(f, Sign::Zeta)?;
    // f(x − h) ↦ ζ^{tr(hy)} f̂(y)
    let lhs = fourier(&f.translate(h)?, Sign::Zeta)?;
    let floor = fhat.terms().iter().map(|(c, _)| c.min_valuation()).min().unwrap_or(0);
    let rhs = fhat.mul(&character_step(field, h, floor, Sign::Zeta)?)?;
    if lhs != rhs {
        return Ok(Err("translation law fails".into()));
    }
    // f(λx) ↦ |λ|^{−1} f̂(y/λ)
    let lhs = fourier(&f.dilate(lam)?, Sign::Zeta)?;
    let rhs = fhat.dilate(&lam.inv()?)?.scale_rational(&(int(1) / harr(field, lam)?));
    if lhs != rhs {
        return Ok(Err("dilation law fails".into()));
    }
    let pc = poisson_check(f, t)?;
    Ok(check(pc.equal, || format!("Poisson: {} vs {}", pc.lhs, pc.rhs)))
}

/// (r, N) with r, N ≥ 0 and |𝔩^{−r}/𝔩^N| = ℓ^{N+r} ≤ 81.
pub fn duality_shapes(field: &LocalField) -> Vec<(i64, i64)> {
    let cap = crate::duality::CLASSIFY_CAP as u64;
    let mut out = vec![];
    for total in 0..=12i64 {
        if field.ell().pow(total as u32) > cap {
            break;
        }
        for r in 0..=total {
            out.push((r, total - r));
        }
    }
    out
}

pub fn duality_case(field: &Arc<LocalField>, r: i64, n: i64) -> CaseResult {
    let lab = DualityLab::new(field, r, n)?;
    if !lab.verify_perfect()? {
        return Ok(Err(format!("(r,N)=({r},{n}): pairing not perfect")));
    }
    let cls = lab.classify_grouplikes()?;
    if !cls.holds() {
        return Ok(Err(format!("(r,N)=({r},{n}): grouplike classification {cls:?}")));
    }
    Ok(check(lab.verify_level_compat()?, || {
        format!("(r,N)=({r},{n}): level compatibility")
    }))
}

fn const_poly(field: &LocalField, c: CycScalar) -> LaurentPoly {
    LaurentPoly::constant(c).mul(&LaurentPoly::one(field.cyc()))
}

/// The example-(b) table entry for Z(h_n, χ̃χ_λ) (`hat = false`) or
/// Z(ĥ_n, χ̃χ_λ) (`hat = true`), with λ formal. For ℓ = 2 the trivial
/// character takes the level-0 column.
pub fn h_table_entry(chi: &Character, n: i64, hat: bool) -> Result<LaurentPoly> {
    let field = chi.field();
    let cyc = field.cyc();
    let d = field.delta();
    let q = int(field.q() as i64);
    let m = chi.level();
    let lam = crate::scalars::lambda(cyc);
    let one = LaurentPoly::one(cyc);
    let mono = |c: CycScalar, k: i64| LaurentPoly::monomial(c, k);
    let zero = LaurentPoly::zero(cyc);
    let small = n <= 1;
    Ok(match (hat, small, m) {
        // q^{−δ/2−2}(1 − λ)
        (false, true, 0) => one.sub(&lam).scale(&CycScalar::sqrtq_pow(cyc, -d - 4)),
        // q^{−δ/2−1}(1 − λ/q)
        (false, true, 1) => one
            .sub(&lam.scale(&CycScalar::from_rational(cyc, int(1) / &q)))
            .scale(&CycScalar::sqrtq_pow(cyc, -d - 2)),
        // −q^{−1}λ^{−δ−1}(1 − λ^{−1})
        (true, true, 0) => {
            mono(CycScalar::from_rational(cyc, int(-1) / &q), -d - 1).mul(&one.sub(&mono(CycScalar::one(cyc), -1)))
        }
        // q^{−1}λ^{−δ−1}(1 − λ^{−1})G(χ̃)
        (true, true, 1) => mono(CycScalar::from_rational(cyc, int(1) / &q), -d - 1)
            .mul(&one.sub(&mono(CycScalar::one(cyc), -1)))
            .scale(&gauss_sum(chi)?),
        (false, false, m) if m == n => const_poly(field, CycScalar::sqrtq_pow(cyc, -d - 2 * n)),
        (true, false, m) if m == n => {
            mono(CycScalar::from_rational(cyc, crate::arith::rat_pow(&q, -n)), -d - n).scale(&gauss_sum(chi)?)
        }
        _ => zero,
    })
}

pub fn h_table_case(chi: &Character, n: i64) -> CaseResult {
    let field = chi.field();
    let h = h_n(field, n)?;
    let hhat = fourier(&h, Sign::Zeta)?;
    for (hat, f) in [(false, &h), (true, &hhat)] {
        let got = zeta_integral(f, chi)?.value;
        let want = RationalFunc::from_poly(h_table_entry(chi, n, hat)?);
        if !got.equals(&want) {
            return Ok(Err(format!(
                "n={n} level={} {}: got {got}, table {want}",
                chi.level(),
                if hat { "ĥ" } else { "h" }
            )));
        }
    }
    Ok(Ok(()))
}

/// Closed form of ĝ_α.
pub fn g_alpha_hat_closed(field: &Arc<LocalField>, alpha: &Rational) -> Result<ShellFunction> {
    let cyc = field.cyc();
    let d = field.delta();
    let q = int(field.q() as i64);
    let one = int(1);
    let pre = CycScalar::sqrtq_pow(cyc, -d).scale(&(&one / (&one - alpha / &q)));
    let ball =
        ShellFunction::from_step(StepFunction::ball(field, -d)).scale(&CycScalar::from_rational(cyc, &one - &one / &q));
    let tail = g_beta_up(field, &(alpha / &q))?.scale(&CycScalar::from_rational(cyc, -(&one - alpha) / &q));
    Ok(ball.add(&tail)?.scale(&pre))
}

/// Closed form of the transform of g^β.
pub fn g_beta_hat_closed(field: &Arc<LocalField>, beta: &Rational) -> Result<ShellFunction> {
    let cyc = field.cyc();
    let d = field.delta();
    let q = int(field.q() as i64);
    let one = int(1);
    let pre = CycScalar::sqrtq_pow(cyc, d).scale(&(&one / (&one - beta * &q)));
    let ball = ShellFunction::from_step(StepFunction::ball(field, 0)).scale(&CycScalar::from_rational(cyc, &q - &one));
    let tail = g_alpha(field, &(beta * &q))?.scale(&CycScalar::from_rational(cyc, -(&q * (&one - beta))));
    Ok(ball.add(&tail)?.scale(&pre))
}

/// 1/(1 − αλ) − λ^{−1−δ}/(1 − α/λ).
fn bracket(field: &LocalField, alpha: &Rational) -> Result<RationalFunc> {
    let cyc = field.cyc();
    let d = field.delta();
    let one = LaurentPoly::one(cyc);
    let a = CycScalar::from_rational(cyc, alpha.clone());
    let first = RationalFunc::new(one.clone(), one.sub(&crate::scalars::lambda(cyc).scale(&a)))?;
    let second = RationalFunc::new(
        LaurentPoly::monomial(CycScalar::one(cyc), -1 - d),
        one.sub(&LaurentPoly::monomial(a, -1)),
    )?;
    Ok(first.sub(&second))
}

/// Z(G[α], χ_λ) in closed form.
pub fn bracket_zeta_closed(field: &Arc<LocalField>, alpha: &Rational) -> Result<RationalFunc> {
    let cyc = field.cyc();
    let q = int(field.q() as i64);
    let c = CycScalar::sqrtq_pow(cyc, -field.delta()).scale(&(int(1) - int(1) / &q));
    Ok(bracket(field, alpha)?.scale(&c))
}

/// Z(FT(G[α]), χ_λ^*) in closed form.
pub fn bracket_hat_zeta_closed(field: &Arc<LocalField>, alpha: &Rational) -> Result<RationalFunc> {
    let cyc = field.cyc();
    let d = field.delta();
    let q = int(field.q() as i64);
    let one = LaurentPoly::one(cyc);
    let lam = crate::scalars::lambda(cyc);
    let qinv = CycScalar::from_rational(cyc, int(1) / &q);
    let pre = LaurentPoly::monomial(
        CycScalar::from_rational(cyc, crate::arith::rat_pow(&q, -d) * (int(1) - int(1) / &q)),
        d,
    );
    let ratio = RationalFunc::new(
        one.sub(&lam.scale(&qinv)),
        one.sub(&LaurentPoly::monomial(CycScalar::one(cyc), -1)),
    )?;
    Ok(RationalFunc::from_poly(pre).mul(&ratio).mul(&bracket(field, alpha)?))
}

/// The ρ-independence ratio Z(G[α], χ_λ)/Z(FT(G[α]), χ_λ^*).
pub fn bracket_ratio(field: &Arc<LocalField>, alpha: &Rational) -> Result<RationalFunc> {
    let chi = Character::unramified(field);
    let g = G_bracket(field, alpha)?;
    let z = zeta_shell(&g, &chi)?.value;
    let zh = zeta_shell(&fourier_shell(&g, Sign::Zeta)?, &chi.dual()?)?.value;
    z.div(&zh)
}

/// The g_α family for one α (= β): transforms of g_α and g^β, both G[α] zeta
/// integrals, vanishing for a ramified χ̃, and the truncation degree bound.
pub fn family_case(field: &Arc<LocalField>, alpha: &Rational) -> CaseResult {
    let ga = g_alpha(field, alpha)?;
    if !fourier_shell(&ga, Sign::Zeta)?.equals(&g_alpha_hat_closed(field, alpha)?)? {
        return Ok(Err(format!("ĝ_α closed form, α={alpha}")));
    }
    let gb = g_beta_up(field, alpha)?;
    if !fourier_shell(&gb, Sign::Zeta)?.equals(&g_beta_hat_closed(field, alpha)?)? {
        return Ok(Err(format!("transform of g^β closed form, β={alpha}")));
    }
    let chi = Character::unramified(field);
    let g = G_bracket(field, alpha)?;
    if !zeta_shell(&g, &chi)?.value.equals(&bracket_zeta_closed(field, alpha)?) {
        return Ok(Err(format!("Z(G[α]) closed form, α={alpha}")));
    }
    let gh = fourier_shell(&g, Sign::Zeta)?;
    if !zeta_shell(&gh, &chi.dual()?)?
        .value
        .equals(&bracket_hat_zeta_closed(field, alpha)?)
    {
        return Ok(Err(format!("Z(FT G[α], χ*) closed form, α={alpha}")));
    }
    for chi in Character::all_of_level(field, 1)?
        .into_iter()
        .chain(Character::all_of_level(field, 2)?)
    {
        if !zeta_shell(&g, &chi)?.value.is_zero() || !zeta_shell(&gh, &chi)?.value.is_zero() {
            return Ok(Err(format!("ramified zeta integral of G[α] nonzero, α={alpha}")));
        }
    }
    for t in [3, 7] {
        let b = truncation_order(&ga, t)?;
        if b.is_some_and(|b| b < t + 1) {
            return Ok(Err(format!("truncation T={t}: λ-order {b:?}")));
        }
    }
    Ok(Ok(()))
}

/// Minimal λ-degree of the numerator of Z(F, χ_λ) − Z(truncate(F, T), χ_λ)
/// over a common denominator (`None` when the difference vanishes).
pub fn truncation_order(f: &ShellFunction, t: i64) -> Result<Option<i64>> {
    let chi = Character::unramified(f.field());
    let full = zeta_shell(f, &chi)?.value;
    let part = zeta_integral(&f.truncate(t)?, &chi)?.value;
    let diff = full.sub(&part);
    let num = diff.num().mul(&LaurentPoly::one(f.field().cyc()));
    Ok(num.min_exp().map(|a| a - diff.den().min_exp().unwrap_or(0)))
}

/// The ratio is the same rational function for α ∈ {5, 10, 25}, and equals ρ.
pub fn alpha_independence_case(field: &Arc<LocalField>) -> CaseResult {
    let rho = rho_closed(&Character::unramified(field))?.value;
    for a in [5, 10, 25] {
        let r = bracket_ratio(field, &int(a))?;
        if !r.equals(&rho) {
            return Ok(Err(format!("α={a}: ratio {r} differs from {rho}")));
        }
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass_and_repeat() {
        let a = run(Suite::Inversion, 3, 7).unwrap();
        assert!(a.all_passed(), "{}", a.to_text());
        assert_eq!(a, run(Suite::Inversion, 3, 7).unwrap());
        let p = run(Suite::Poisson, 3, 1).unwrap();
        assert!(p.all_passed(), "{}", p.to_text());
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn generators_meet_their_contracts() {
        let mut rng = rng_for(3, Suite::Fe, 0);
        for field in reference_fields() {
            for _ in 0..10 {
                let f = gen::admissible(&mut rng, &field, 3);
                assert!(f.value_at_zero().is_zero());
                assert!(haar_integral(&f).is_zero());
                let x = gen::of_valuation(&mut rng, &field, -2, 3);
                assert_eq!(x.valuation(), Some(-2));
            }
        }
    }
}
