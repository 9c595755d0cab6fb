//! Algebraic invariants over random inputs. Each case draws a seed and a
//! reference configuration; the library's own generators build the objects.

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tatezeta::characters::Character;
use tatezeta::fourier::{fourier, Sign};
use tatezeta::localfield::LocalField;
use tatezeta::padic::{PadicContext, Vp};
use tatezeta::scalars::CycScalar;
use tatezeta::stepfun::StepFunction;
use tatezeta::suites::{gen, reference_fields};

fn setup(config: usize, seed: u64) -> (Arc<LocalField>, ChaCha8Rng) {
    let k = reference_fields().swap_remove(config);
    (k, ChaCha8Rng::seed_from_u64(seed))
}

/// Contexts are expensive to build (degree 54 for ℓ = 3), so each is built once.
fn context(config: usize, precision: u32) -> &'static PadicContext {
    static CACHE: OnceLock<Vec<(PadicContext, PadicContext)>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        reference_fields()
            .iter()
            .map(|k| {
                (
                    PadicContext::new(k.cyc(), 5, 20).unwrap(),
                    PadicContext::new(k.cyc(), 5, 40).unwrap(),
                )
            })
            .collect()
    });
    if precision == 20 {
        &all[config].0
    } else {
        &all[config].1
    }
}

fn config() -> impl Strategy<Value = usize> {
    0..3usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(c in config(), seed in any::<u64>()) {
        let (k, mut r) = setup(c, seed);
        let x = gen::scalar(&mut r, &k);
        let y = gen::scalar(&mut r, &k);
        let z = gen::nonzero_scalar(&mut r, &k);
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!((&z * &z.inv().unwrap()).is_one());
        let s = CycScalar::sqrtq(k.cyc());
        prop_assert_eq!(&s * &s, CycScalar::from_int(k.cyc(), k.q() as i64));
    }

    #[test]
    fn local_field_arithmetic(c in config(), seed in any::<u64>()) {
        let (k, mut r) = setup(c, seed);
        let x = gen::kelement(&mut r, &k, -3, 3);
        let y = gen::kelement(&mut r, &k, -3, 3);
        let u = gen::nonzero(&mut r, &k, -3, 3);
        prop_assert_eq!((&x + &y).trace(), x.trace() + y.trace());
        prop_assert_eq!(&u * &u.inv().unwrap(), k.one());
        if let (Some(vx), Some(vu)) = (x.valuation(), u.valuation()) {
            prop_assert_eq!((&x * &u).valuation(), Some(vx + vu));
        }
        if let (Some(vx), Some(vy)) = (x.valuation(), y.valuation()) {
            prop_assert!((&x + &y).valuation().is_none_or(|v| v >= vx.min(vy)));
        }
        let (v, w) = u.split_unit().unwrap();
        prop_assert_eq!(w.valuation(), Some(0));
        prop_assert_eq!(&k.pi_pow(v) * &w, u);
    }

    #[test]
    fn canonical_form_is_idempotent(c in config(), seed in any::<u64>()) {
        let (k, mut r) = setup(c, seed);
        let f = gen::step(&mut r, &k, 5);
        let again = StepFunction::from_terms(&k, f.terms().to_vec()).unwrap();
        prop_assert_eq!(&again, &f);
        // a refined partition canonicalizes back to the same function
        let bottom = f.terms().iter().map(|(c, _)| c.level).max().unwrap_or(0) + 1;
        let fine = StepFunction::from_terms(&k, f.refine_to(bottom).unwrap()).unwrap();
        prop_assert_eq!(fine, f);
    }

    #[test]
    fn translation_and_dilation_invert(c in config(), seed in any::<u64>()) {
        let (k, mut r) = setup(c, seed);
        let f = gen::step(&mut r, &k, 4);
        let h = gen::kelement(&mut r, &k, -2, 2);
        let lam = gen::nonzero(&mut r, &k, -2, 2);
        prop_assert_eq!(f.translate(&h).unwrap().translate(&-&h).unwrap(), f.clone());
        prop_assert_eq!(f.dilate(&lam).unwrap().dilate(&lam.inv().unwrap()).unwrap(), f.clone());
        let x = gen::kelement(&mut r, &k, -3, 3);
        prop_assert_eq!(f.translate(&h).unwrap().evaluate(&x), f.evaluate(&(&x - &h)));
        prop_assert_eq!(f.dilate(&lam).unwrap().evaluate(&x), f.evaluate(&(&lam * &x)));
    }

    #[test]
    fn fourier_inverts_and_is_linear(c in config(), seed in any::<u64>()) {
        let (k, mut r) = setup(c, seed);
        let f = gen::step(&mut r, &k, 4);
        let g = gen::step(&mut r, &k, 4);
        let s = gen::scalar(&mut r, &k);
        let ff = fourier(&f, Sign::Zeta).unwrap();
        prop_assert_eq!(fourier(&ff, Sign::ZetaInv).unwrap(), f.clone());
        let lhs = fourier(&f.add(&g.scale(&s)).unwrap(), Sign::Zeta).unwrap();
        let rhs = ff.add(&fourier(&g, Sign::Zeta).unwrap().scale(&s)).unwrap();
        prop_assert_eq!(lhs, rhs);
        // f̂(0) is the integral of f
        let integral = f.terms().iter().fold(CycScalar::zero(k.cyc()), |acc, (c, v)| {
            &acc + &(v * &CycScalar::sqrtq_pow(k.cyc(), -2 * c.level - k.delta()))
        });
        prop_assert_eq!(ff.value_at_zero(), integral);
    }

    #[test]
    fn characters_are_multiplicative(c in config(), seed in any::<u64>(), level in 0i64..=3) {
        let (k, mut r) = setup(c, seed);
        let chars = Character::all_up_to_level(&k, level).unwrap();
        let chi = &chars[(seed as usize) % chars.len()];
        let u = gen::of_valuation(&mut r, &k, 0, 4);
        let w = gen::of_valuation(&mut r, &k, 0, 4);
        prop_assert_eq!(
            chi.unit_value(&(&u * &w)).unwrap(),
            &chi.unit_value(&u).unwrap() * &chi.unit_value(&w).unwrap()
        );
        let x = gen::nonzero(&mut r, &k, -3, 3);
        let y = gen::nonzero(&mut r, &k, -3, 3);
        prop_assert_eq!(chi.eval(&(&x * &y)).unwrap(), chi.eval(&x).unwrap().mul(&chi.eval(&y).unwrap()));
        // the dual character is an involution
        let back = chi.dual().unwrap().dual().unwrap();
        prop_assert_eq!(back.level(), chi.level());
        prop_assert_eq!(back.table(), chi.table());
        prop_assert_eq!(back.eval(&x).unwrap(), chi.eval(&x).unwrap());
    }

    #[test]
    fn embedding_is_a_ring_map(c in config(), seed in any::<u64>()) {
        let (k, mut r) = setup(c, seed);
        let ctx = context(c, 20);
        let x = gen::scalar(&mut r, &k);
        let y = gen::scalar(&mut r, &k);
        let (ex, ey) = (ctx.embed(&x).unwrap(), ctx.embed(&y).unwrap());
        prop_assert_eq!(ctx.embed(&(&x * &y)).unwrap(), ctx.mul(&ex, &ey));
        prop_assert_eq!(ctx.embed(&(&x + &y)).unwrap(), ctx.add(&ex, &ey));
        prop_assert_eq!(ctx.embed(&CycScalar::one(k.cyc())).unwrap(), ctx.from_int(1));
    }

    #[test]
    fn p_adic_valuation_axioms(c in config(), seed in any::<u64>()) {
        let (k, mut r) = setup(c, seed);
        let ctx = context(c, 40);
        let x = gen::nonzero_scalar(&mut r, &k);
        let y = gen::nonzero_scalar(&mut r, &k);
        let fin = |v: Vp| match v {
            Vp::Finite(n) => n,
            Vp::Infinite => unreachable!("nonzero scalar"),
        };
        let (vx, vy) = (fin(ctx.vp(&x).unwrap()), fin(ctx.vp(&y).unwrap()));
        prop_assert_eq!(fin(ctx.vp(&(&x * &y)).unwrap()), vx + vy);
        let sum = &x + &y;
        if !sum.is_zero() {
            prop_assert!(fin(ctx.vp(&sum).unwrap()) >= vx.min(vy));
        }
        prop_assert_eq!(ctx.vp(&CycScalar::from_int(k.cyc(), 25)).unwrap(), Vp::Finite(2));
        prop_assert_eq!(ctx.vp(&CycScalar::root(k.cyc(), 1)).unwrap(), Vp::Finite(0));
    }
}
