//! Randomized invariant suites shared by the property tests and the acceptance run.
//! Each suite returns `Err` with the minimal failing input on violation.

#![allow(dead_code)]

use hermcert::curves::{base_divisor_factor, pullback, RationalCurve};
use hermcert::decomp::{distinguished_basis, rebase_distinguished};
use hermcert::spectra::{exact_squares, jacobi_eigh, psd_exact, to_float};
use hermcert::{GaussRat, HermitianForm, HoloSection, MonomialBasis, Sign};
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, FileFailurePersistence, RngAlgorithm, RngSeed, TestRng, TestRunner};

pub const CASES: u32 = 200;

fn runner(seed: u64, cases: u32) -> TestRunner {
    let mut cfg = Config::with_cases(cases);
    cfg.rng_algorithm = RngAlgorithm::ChaCha;
    cfg.rng_seed = RngSeed::Fixed(seed);
    cfg.failure_persistence = Some(Box::new(FileFailurePersistence::Off));
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    TestRunner::new_with_rng(cfg, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

fn check<S: Strategy>(seed: u64, cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(seed, cases).run(&s, f).map_err(|e| e.to_string())
}

fn gauss() -> impl Strategy<Value = GaussRat> {
    (-4i64..=4, -3i64..=3, 1i64..=3).prop_map(|(a, b, d)| GaussRat::new(BigRational::new(a.into(), d.into()), BigRational::new(b.into(), d.into())))
}

fn point(n: usize) -> impl Strategy<Value = Vec<GaussRat>> {
    prop::collection::vec(gauss(), n + 1)
}

/// Sparse section of degree `d` in `n + 1` variables.
pub fn section(n: usize, d: u32) -> impl Strategy<Value = HoloSection> {
    let dim = MonomialBasis::new(n, d).len();
    prop::collection::vec((0..dim, gauss()), 1..=3.min(dim).max(1)).prop_map(move |terms| {
        let basis = MonomialBasis::new(n, d);
        let t: Vec<_> = terms.into_iter().map(|(i, c)| (basis.elements()[i].clone(), c)).collect();
        HoloSection::from_terms(n, d, t).unwrap()
    })
}

/// `Σ w_i |s_i|²` with small rational weights of either sign.
pub fn form(n: usize, d: u32, max_terms: usize) -> impl Strategy<Value = HermitianForm> {
    prop::collection::vec(((-3i64..=3).prop_filter("nonzero", |w| *w != 0), 1i64..=2, section(n, d)), 1..=max_terms).prop_map(
        move |terms| {
            let t: Vec<_> = terms.into_iter().map(|(w, q, s)| (BigRational::new(w.into(), q.into()), s)).collect();
            HermitianForm::from_weighted_squares(&t).unwrap()
        },
    )
}

fn shape() -> impl Strategy<Value = (usize, u32)> {
    (1usize..=2, 1u32..=3)
}

/// Sums, differences, scalings, products, powers and pullbacks stay Hermitian.
pub fn hermitian_closure(seed: u64, cases: u32) -> Result<(), String> {
    let s = shape().prop_flat_map(|(n, d)| (form(n, d, 4), form(n, d, 4), 1u32..=2, section(1, 1), section(1, 1), section(1, 1)));
    check(seed, cases, s, |(a, b, e, h0, h1, h2)| {
        let n = a.n();
        let mut out = vec![a.add(&b).unwrap(), a.sub(&b).unwrap(), a.scale(&BigRational::new((-5).into(), 7.into())), a.product(&b).unwrap(), a.pow(e)];
        let comps = [h0, h1, h2];
        if let Ok(c) = RationalCurve::new(comps[..=n].to_vec()) {
            out.push(pullback(&a, &c).unwrap());
        }
        for f in out {
            prop_assert!(f.is_hermitian());
        }
        Ok(())
    })
}

/// `(A·B)(v, v̄) = A(v, v̄)·B(v, v̄)` and `(A·B)(v, w̄) = A(v, w̄)·B(v, w̄)`, exactly.
pub fn product_homomorphism(seed: u64, cases: u32) -> Result<(), String> {
    let s = (1usize..=2, 1u32..=2, 1u32..=2).prop_flat_map(|(n, d, e)| (form(n, d, 3), form(n, e, 3), point(n), point(n)));
    check(seed, cases, s, |(a, b, v, w)| {
        let ab = a.product(&b).unwrap();
        prop_assert_eq!(ab.eval_diag(&v).unwrap(), a.eval_diag(&v).unwrap() * b.eval_diag(&v).unwrap());
        prop_assert_eq!(ab.eval_pair(&v, &w).unwrap(), &a.eval_pair(&v, &w).unwrap() * &b.eval_pair(&v, &w).unwrap());
        Ok(())
    })
}

/// Re-mixing a distinguished basis keeps the exact signature and the form.
pub fn signature_invariance(seed: u64, cases: u32) -> Result<(), String> {
    let s = shape().prop_flat_map(|(n, d)| (form(n, d, 5), any::<u64>()));
    check(seed, cases, s, |(p, mix)| {
        prop_assume!(!p.is_zero());
        let exact = exact_squares(&p).signature();
        let b = distinguished_basis(&p).unwrap();
        prop_assert_eq!((b.k, b.l), exact);
        let rb = rebase_distinguished(&b, mix);
        prop_assert_eq!((rb.k, rb.l), exact);
        let scale = p.frobenius_f().max(1.0);
        prop_assert!(rb.reexpand().distance_to(&p).unwrap() <= 1e-7 * scale);
        Ok(())
    })
}

/// `Σ|f|² − Σ|g|²` re-expands to `P` to within 1e-7 relative.
pub fn reexpansion_residual(seed: u64, cases: u32) -> Result<(), String> {
    let s = (1usize..=3, 1u32..=4).prop_flat_map(|(n, d)| form(n, d, 6));
    check(seed, cases, s, |p| {
        prop_assume!(!p.is_zero());
        let b = distinguished_basis(&p).unwrap();
        let r = b.reexpand().distance_to(&p).unwrap();
        prop_assert!(r <= 1e-7 * p.frobenius_f().max(1.0), "residual {r}");
        Ok(())
    })
}

fn binary_curve(n_target: usize, deg: u32) -> impl Strategy<Value = RationalCurve> {
    prop::collection::vec(section(1, deg), n_target + 1).prop_filter_map("degenerate curve", |c| {
        if c.iter().all(HoloSection::is_zero) {
            None
        } else {
            RationalCurve::new(c).ok()
        }
    })
}

/// `(P∘γ)∘g = P∘(γ∘g)` for a curve `γ` and a reparametrization `g` of ℙ¹.
pub fn pullback_functoriality(seed: u64, cases: u32) -> Result<(), String> {
    let s = (1usize..=2, 1u32..=2).prop_flat_map(|(n, d)| (form(n, d, 3), binary_curve(n, 2), binary_curve(1, 2)));
    check(seed, cases, s, |(p, gamma, g)| {
        let composed: Vec<HoloSection> = gamma.components().iter().map(|h| h.compose(g.components()).unwrap()).collect();
        let lhs = pullback(&pullback(&p, &gamma).unwrap(), &g).unwrap();
        let rhs = match composed.iter().all(HoloSection::is_zero) {
            true => return Ok(()),
            false => pullback(&p, &RationalCurve::new(composed).unwrap()).unwrap(),
        };
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

/// `|s_D|² ⊗ residual = P` for forms on ℙ¹ with a planted common factor.
pub fn factorization_exactness(seed: u64, cases: u32) -> Result<(), String> {
    let s = (0u32..=2, 1u32..=3).prop_flat_map(|(k, d)| (section(1, k), form(1, d, 4)));
    check(seed, cases, s, |(f, q)| {
        prop_assume!(!f.is_zero() && !q.is_zero());
        let planted = f.degree();
        let p = HermitianForm::from_squares(&[(Sign::Plus, f)]).unwrap().product(&q).unwrap();
        let dv = base_divisor_factor(&p).unwrap();
        let back = HermitianForm::from_squares(&[(Sign::Plus, dv.s_d.clone())]).unwrap().product(&dv.residual).unwrap();
        prop_assert_eq!(back, p);
        prop_assert!(dv.s_d.degree() >= planted);
        prop_assert_eq!(exact_squares(&dv.residual).signature(), exact_squares(&q).signature());
        Ok(())
    })
}

/// Diagonal part with weights in 1..=4 plus a few signed squares; full rank
/// in general, so the smallest eigenvalue is rarely near zero.
fn spread_form(d: u32) -> impl Strategy<Value = HermitianForm> {
    let dim = d as usize + 1;
    (
        prop::collection::vec(1i64..=4, dim),
        prop::collection::vec(((-6i64..=3).prop_filter("nonzero", |w| *w != 0), section(1, d)), 1..=6),
    )
        .prop_map(move |(diag, sq)| {
            let basis = MonomialBasis::new(1, d);
            let mut t: Vec<(BigRational, HoloSection)> = diag
                .into_iter()
                .zip(basis.elements())
                .map(|(w, a)| (BigRational::from_integer(w.into()), HoloSection::monomial(a.clone(), GaussRat::int(1))))
                .collect();
            t.extend(sq.into_iter().map(|(w, s)| (BigRational::from_integer(w.into()), s)));
            HermitianForm::from_weighted_squares(&t).unwrap()
        })
}

/// Exact PSD decision agrees with the sign of the smallest Jacobi eigenvalue
/// away from rounding level. Dimensions up to 50.
pub fn psd_float_agreement(seed: u64, cases: u32) -> Result<(), String> {
    let s = (1u32..=49).prop_flat_map(spread_form);
    check(seed, cases, s, |p| {
        let m = to_float(&p).unwrap();
        let eig = jacobi_eigh(&m).unwrap();
        let min = eig.values.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assume!(min.abs() > 1e-9 * m.frobenius().max(1.0));
        prop_assert_eq!(psd_exact(&p), min > 0.0, "min eigenvalue {}", min);
        Ok(())
    })
}
