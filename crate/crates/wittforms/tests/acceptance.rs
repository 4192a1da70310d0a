//! Acceptance suite: every criterion below runs exactly (tolerance zero) and
//! prints one line with its statistics. Run with
//! `cargo test -p wittforms --test acceptance -- --nocapture` to see them.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wittforms::algebras::{AlgElem, AlgMat, InvAlgebra};
use wittforms::cli::{self, Command, RunOptions};
use wittforms::cohomology::{symbol_cup, CohClass, Payload};
use wittforms::error::Error;
use wittforms::Result as WfResult;
use wittforms::hermitian::HermForm;
use wittforms::morita::{morita_lift, star_product, MatrixHermForm};
use wittforms::oracle;
use wittforms::pairs::HermPair;
use wittforms::quadforms::{e_chain_bound, pfister, QuadForm};
use wittforms::scalars::{
    hilbert_symbol_rat, ramification_set, square_class, BaseField, FieldElem,
};

fn q() -> BaseField {
    BaseField::rationals()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn quat(a: i64, b: i64) -> InvAlgebra {
    InvAlgebra::quaternion(q().from_int(a), q().from_int(b)).unwrap()
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

/// Non-split quaternion algebras over Q used across the suite.
fn nonsplit_quaternions() -> Vec<InvAlgebra> {
    let candidates = [(-1, -1), (-1, -3), (-2, -5), (-1, -7), (-3, -5), (2, -5)];
    let algs: Vec<InvAlgebra> = candidates
        .iter()
        .map(|&(a, b)| quat(a, b))
        .filter(|alg| !alg.is_split().unwrap())
        .collect();
    assert!(algs.len() >= 5, "need at least 5 non-split algebras");
    algs
}

#[test]
fn criterion_01_symplectic_closed_formulas() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let algs = nonsplit_quaternions();
    let mut checked = 0usize;
    while checked < 200 {
        let alg = &algs[rng.gen_range(0..algs.len())];
        let r = rng.gen_range(1..=4usize);
        let entries: Vec<FieldElem> = (0..r).map(|_| q().from_int(nonzero(&mut rng, 20))).collect();
        let h = HermForm::diagonal(alg, 1, &entries).unwrap();
        let brauer = alg.brauer_class().unwrap().class;

        // e_1 = 0 via the trace form
        assert!(h.e_n(1).unwrap().is_zero());

        // e_2 = r (D): the trace-form route against the closed formula,
        // computed here independently
        let e2_trace = h.e_n(2).unwrap();
        let e2_formula = if r % 2 == 1 {
            brauer.clone()
        } else {
            CohClass::zero(q(), 2)
        };
        assert_eq!(e2_trace, e2_formula, "e_2 routes differ");

        if r % 2 == 0 {
            // e_3 = ((-1)^{r/2} prod lambda) cup (D)
            let e3_trace = h.e_n(3).unwrap();
            let mut prod = q().from_int(if (r / 2) % 2 == 1 { -1 } else { 1 });
            for e in &entries {
                prod = prod.mul(e).unwrap();
            }
            let e3_formula = symbol_cup(&[&prod], &brauer).unwrap();
            assert_eq!(e3_trace, e3_formula, "e_3 routes differ");
        } else {
            assert!(matches!(
                h.e_n(3),
                Err(Error::PreviousInvariantNonzero(_))
            ));
        }
        // the built-in assertion layer agrees as well
        h.e_n_checked(2).unwrap();
        checked += 1;
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 1 PASS: {} forms over {} non-split quaternion algebras, \
         e_1/e_2/e_3 closed formulas vs trace forms, 100% agreement in {:?}",
        checked,
        algs.len(),
        elapsed
    );
    assert!(elapsed.as_secs() < 10, "criterion 1 exceeded 10 s");
}

#[test]
fn criterion_02_unitary_closed_formulas() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let params = [-1i64, 2, 3, 5, -2, 7];
    let algs: Vec<InvAlgebra> = params
        .iter()
        .map(|&c| InvAlgebra::quad_etale(q().from_int(c)).unwrap())
        .collect();
    assert!(algs.iter().all(|a| !a.is_split().unwrap()));
    let mut checked = 0usize;
    while checked < 200 {
        let idx = rng.gen_range(0..algs.len());
        let alg = &algs[idx];
        let c = q().from_int(params[idx]);
        let c_class = CohClass::from_square_class(q(), square_class(&c).unwrap());
        let r = rng.gen_range(1..=4usize);
        let entries: Vec<FieldElem> = (0..r).map(|_| q().from_int(nonzero(&mut rng, 20))).collect();
        let h = HermForm::diagonal(alg, 1, &entries).unwrap();

        // e_1 = r (c]
        let e1_trace = h.e_n(1).unwrap();
        let e1_formula = if r % 2 == 1 {
            c_class.clone()
        } else {
            CohClass::zero(q(), 1)
        };
        assert_eq!(e1_trace, e1_formula, "e_1 routes differ");

        if r % 2 == 0 {
            // e_2 = ((-1)^{r/2} prod lambda) cup (c]
            let e2_trace = h.e_n(2).unwrap();
            let mut prod = q().from_int(if (r / 2) % 2 == 1 { -1 } else { 1 });
            for e in &entries {
                prod = prod.mul(e).unwrap();
            }
            let e2_formula = symbol_cup(&[&prod], &c_class).unwrap();
            assert_eq!(e2_trace, e2_formula, "e_2 routes differ");
        }
        h.e_n_checked(1).unwrap();
        checked += 1;
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 2 PASS: {} forms over {} quadratic field extensions, \
         e_1/e_2 closed formulas vs trace forms, 100% agreement in {:?}",
        checked,
        algs.len(),
        elapsed
    );
    assert!(elapsed.as_secs() < 10, "criterion 2 exceeded 10 s");
}

#[test]
fn criterion_03_hyperbolicity_biconditional() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let quats = nonsplit_quaternions();
    let etales: Vec<InvAlgebra> = [-1i64, 2, -5]
        .iter()
        .map(|&c| InvAlgebra::quad_etale(q().from_int(c)).unwrap())
        .collect();
    let mut checked = 0usize;
    let mut hyperbolic_seen = 0usize;
    let mut sample = |h: &HermForm| {
        let hyp = h.is_hyperbolic().unwrap();
        // the e_n chain up to max(3, ceil(log2 dim) + 1) on the trace form
        let chain = h.e_chain_vanishes().unwrap();
        assert_eq!(hyp, chain, "Theorem biconditional failed");
        if hyp {
            hyperbolic_seen += 1;
        }
        checked += 1;
    };
    for round in 0..260 {
        let alg = if round % 2 == 0 {
            quats[rng.gen_range(0..quats.len())].clone()
        } else {
            etales[rng.gen_range(0..etales.len())].clone()
        };
        let r = rng.gen_range(1..=3usize);
        let entries: Vec<FieldElem> = (0..r).map(|_| q().from_int(nonzero(&mut rng, 15))).collect();
        let h = HermForm::diagonal(&alg, 1, &entries).unwrap();
        sample(&h);
        // forced hyperbolic: h perp -h
        sample(&h.orthogonal_sum(&h.negate()).unwrap());
        // forced anisotropic: positive definite over a definite quaternion
        if round % 4 == 0 {
            let pos: Vec<FieldElem> = (0..r)
                .map(|_| q().from_int(rng.gen_range(1..=15)))
                .collect();
            let def = HermForm::diagonal(&quats[0], 1, &pos).unwrap();
            assert!(!def.is_hyperbolic().unwrap());
            sample(&def);
        }
    }
    assert!(checked >= 500);
    assert!(hyperbolic_seen >= 200);
    println!(
        "criterion 3 PASS: {checked} hermitian forms ({hyperbolic_seen} hyperbolic), \
         is_hyperbolic <=> all e_n = 0, 100% agreement"
    );
}

#[test]
fn criterion_04_morita_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let bases: Vec<InvAlgebra> = vec![
        quat(-1, -1),
        quat(-1, -3),
        InvAlgebra::quad_etale(q().from_int(-1)).unwrap(),
        InvAlgebra::quad_etale(q().from_int(2)).unwrap(),
        InvAlgebra::split(q()),
    ];
    let mut checked = 0usize;
    while checked < 100 {
        let alg = &bases[checked % bases.len()];
        let split_base = alg == &bases[4];
        let m = rng.gen_range(1..=2usize);
        // over the split base the invariants live on pairs, which need even
        // rank; keep m * s even there
        let s = if split_base && m == 1 {
            2
        } else {
            rng.gen_range(1..=2usize)
        };
        let f_entries: Vec<FieldElem> =
            (0..m).map(|_| q().from_int(nonzero(&mut rng, 9))).collect();
        let f = HermForm::diagonal(alg, 1, &f_entries).unwrap();
        let phi_entries: Vec<FieldElem> = (0..(m * s))
            .map(|_| q().from_int(nonzero(&mut rng, 9)))
            .collect();
        let phi = HermForm::diagonal(alg, 1, &phi_entries).unwrap();
        let g: MatrixHermForm = morita_lift(&f, &phi).unwrap();

        // e_n through a hermitian form (quaternion/etale) or a pair (split)
        let e_of = |form: &HermForm, n: u32| -> WfResult<CohClass> {
            if split_base {
                HermPair::new(form.clone(), None)?.e_n(n)
            } else {
                form.e_n(n)
            }
        };

        // e_n(g) (defined through the reduction) = e_n(f * g)
        let reduced = star_product(&f, &g).unwrap();
        let g_reduced = wittforms::morita::morita_reduce(&g).unwrap();
        for n in 1..=3u32 {
            let lhs = e_of(&g_reduced, n);
            let rhs = e_of(&reduced, n);
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => assert_eq!(a, b, "Morita invariance failed at n = {n}"),
                (Err(_), Err(_)) => break,
                _ => panic!("definedness differs between the two routes"),
            }
        }
        // the choice of reference only matters up to a scalar
        let lam = q().from_int(nonzero(&mut rng, 9));
        let f_scaled = f.scale(&lam).unwrap();
        let reduced_scaled = star_product(&f_scaled, &g).unwrap();
        for n in 1..=3u32 {
            let lhs = e_of(&reduced, n);
            let rhs = e_of(&reduced_scaled, n);
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => assert_eq!(a, b, "scalar dependence at n = {n}"),
                (Err(_), Err(_)) => break,
                _ => panic!("definedness differs under reference scaling"),
            }
        }
        // hyperbolic forms stay hyperbolic through the star product
        let hyp = phi.orthogonal_sum(&phi.negate()).unwrap();
        let hyp_lift = morita_lift(&f, &hyp).unwrap();
        let hyp_star = star_product(&f, &hyp_lift).unwrap();
        let preserved = if split_base {
            HermPair::new(hyp_star, None).unwrap().is_hyperbolic().unwrap()
        } else {
            hyp_star.is_hyperbolic().unwrap()
        };
        assert!(preserved, "star product must preserve hyperbolicity");
        checked += 1;
    }
    println!(
        "criterion 4 PASS: {checked} (f, g) samples across 5 base algebras, \
         e_n(g) = e_n(f*g) with scalar-independent reduction, 100% agreement"
    );
}

#[test]
fn criterion_05_quadratic_form_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let mut pfister_checked = 0usize;
    while pfister_checked < 100 {
        let n = rng.gen_range(1..=4usize);
        let slots: Vec<FieldElem> = (0..(n - 1))
            .map(|_| q().from_int(nonzero(&mut rng, 9)))
            .collect();
        let last = q().from_int(nonzero(&mut rng, 9));
        let form = pfister(&slots, &last).unwrap();
        let lhs = form.e_n(n as u32).unwrap();
        let last_class = CohClass::from_square_class(q(), square_class(&last).unwrap());
        let refs: Vec<&FieldElem> = slots.iter().collect();
        let rhs = symbol_cup(&refs, &last_class).unwrap();
        assert_eq!(lhs, rhs, "e_n of a Pfister form is the symbol cup");
        pfister_checked += 1;
    }
    let mut kernel_checked = 0usize;
    while kernel_checked < 100 {
        let n = rng.gen_range(1..=4usize);
        // a sum of two (n+1)-fold Pfister forms lies in ker(e_n)
        let mut sum: Option<QuadForm> = None;
        for _ in 0..2 {
            let slots: Vec<FieldElem> =
                (0..n).map(|_| q().from_int(nonzero(&mut rng, 9))).collect();
            let last = q().from_int(nonzero(&mut rng, 9));
            let p = pfister(&slots, &last).unwrap();
            sum = Some(match sum {
                None => p,
                Some(acc) => acc.orthogonal_sum(&p).unwrap(),
            });
        }
        let sum = sum.unwrap();
        assert!(
            sum.e_n(n as u32).unwrap().is_zero(),
            "kernel law failed at n = {n}"
        );
        kernel_checked += 1;
    }
    println!(
        "criterion 5 PASS: {pfister_checked} Pfister forms match their symbol cups, \
         {kernel_checked} higher Pfister sums vanish under e_n, 100%"
    );
}

#[test]
fn criterion_06_oracle_equivalence() {
    let start = Instant::now();
    let bound = oracle::DEFAULT_SEARCH_BOUND;
    let mut checked = 0usize;

    // odd characteristic: full enumeration of diagonal forms of dim <= 4
    for (p, k) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
        let field = BaseField::finite(p, k, None).unwrap();
        let ctx = field.fq().unwrap().clone();
        let units = ctx.order() - 1;
        for d in 1..=4usize {
            let total = (units as u128).pow(d as u32);
            assert!(total <= 100_000);
            for mut idx in 0..total {
                let entries: Vec<FieldElem> = (0..d)
                    .map(|_| {
                        let pick = (idx % units as u128) as u64 + 1;
                        idx /= units as u128;
                        let coeffs: Vec<i64> =
                            ctx.from_index(pick).iter().map(|&c| c as i64).collect();
                        field.from_coeffs(&coeffs).unwrap()
                    })
                    .collect();
                let form = QuadForm::diagonal(field.clone(), entries).unwrap();
                assert_eq!(
                    form.is_isotropic().unwrap(),
                    oracle::exhaustive_isotropy(&form, bound).unwrap().is_some()
                );
                let (w, _) = form.witt_decompose().unwrap();
                assert_eq!(w, oracle::exhaustive_witt_index(&form, bound).unwrap());
                checked += 1;
            }
        }
    }

    // characteristic 2: coefficient matrices, enumerated or sampled
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for (p, k) in [(2u64, 1u32), (2, 2), (2, 3)] {
        let field = BaseField::finite(p, k, None).unwrap();
        let ctx = field.fq().unwrap().clone();
        let qord = ctx.order();
        for d in 1..=4usize {
            let cells = d * (d + 1) / 2;
            let total = (qord as u128).pow(cells as u32);
            let samples: Vec<Vec<u64>> = if total <= 100_000 {
                (0..total)
                    .map(|mut idx| {
                        (0..cells)
                            .map(|_| {
                                let v = (idx % qord as u128) as u64;
                                idx /= qord as u128;
                                v
                            })
                            .collect()
                    })
                    .collect()
            } else {
                (0..1000)
                    .map(|_| (0..cells).map(|_| rng.gen_range(0..qord)).collect())
                    .collect()
            };
            for cell_vals in samples {
                let mut coeffs = vec![vec![field.zero(); d]; d];
                let mut it = cell_vals.iter();
                for i in 0..d {
                    for j in i..d {
                        let v = *it.next().unwrap();
                        let cv: Vec<i64> =
                            ctx.from_index(v).iter().map(|&c| c as i64).collect();
                        coeffs[i][j] = field.from_coeffs(&cv).unwrap();
                    }
                }
                let form = match QuadForm::char2(field.clone(), coeffs) {
                    Ok(f) => f,
                    Err(_) => continue, // degenerate coefficient matrix
                };
                assert_eq!(
                    form.is_isotropic().unwrap(),
                    oracle::exhaustive_isotropy(&form, bound).unwrap().is_some()
                );
                if d % 2 == 0 {
                    let (w, _) = form.witt_decompose().unwrap();
                    assert_eq!(w, oracle::exhaustive_witt_index(&form, bound).unwrap());
                }
                checked += 1;
            }
        }
    }

    // characteristic-2 pairs: the associated-form bridge against the scan
    let mut pair_checked = 0usize;
    for (p, k) in [(2u64, 1u32), (2, 2), (2, 3)] {
        let field = BaseField::finite(p, k, None).unwrap();
        let alg = InvAlgebra::split(field.clone());
        for d in [2usize, 4] {
            let mut built = 0usize;
            let mut attempts = 0usize;
            while built < 10 && attempts < 400 {
                attempts += 1;
                let Some(pair) = random_char2_pair(&mut rng, &alg, d) else {
                    continue;
                };
                let via_class = pair.is_isotropic().unwrap();
                let via_scan = oracle::exhaustive_pair_isotropy(&pair, bound).unwrap();
                assert_eq!(via_class, via_scan, "pair bridge failed");
                if pair.is_hyperbolic().unwrap() {
                    assert!(via_scan);
                }
                built += 1;
                pair_checked += 1;
            }
            assert!(built >= 5, "not enough valid pairs sampled");
        }
    }

    let elapsed = start.elapsed();
    println!(
        "criterion 6 PASS: {checked} finite-field forms and {pair_checked} char-2 pairs \
         match the exhaustive oracle, 100% in {elapsed:?}"
    );
    assert!(elapsed.as_secs() < 60, "criterion 6 exceeded 60 s");
}

/// Random characteristic-2 pair of the given dimension: an alternating
/// nondegenerate Gram plus a semi-trace solved from the linear condition
/// G l + l^T G = G.
fn random_char2_pair(
    rng: &mut ChaCha8Rng,
    alg: &InvAlgebra,
    d: usize,
) -> Option<HermPair> {
    let field = alg.field().clone();
    let ctx = field.fq().unwrap().clone();
    let qord = ctx.order();
    let rand_elem = |rng: &mut ChaCha8Rng| {
        let coeffs: Vec<i64> = ctx
            .from_index(rng.gen_range(0..qord))
            .iter()
            .map(|&c| c as i64)
            .collect();
        field.from_coeffs(&coeffs).unwrap()
    };
    // alternating Gram
    let mut g = vec![vec![field.zero(); d]; d];
    for i in 0..d {
        for j in (i + 1)..d {
            let v = rand_elem(rng);
            g[i][j] = v.clone();
            g[j][i] = v;
        }
    }
    let gram: AlgMat = g
        .iter()
        .map(|row| row.iter().map(|e| alg.from_base(e.clone())).collect())
        .collect();
    let h = HermForm::new(alg.clone(), 1, gram).ok()?;
    // solve G l + l^T G = G entrywise: unknowns l[u][v]
    let n = d * d;
    let mut mat = vec![vec![field.zero(); n + 1]; n];
    for i in 0..d {
        for j in 0..d {
            let row = i * d + j;
            // sum_k g[i][k] l[k][j] + sum_k l[k][i] g[k][j] = g[i][j]
            for k in 0..d {
                let c1 = g[i][k].clone();
                let idx1 = k * d + j;
                mat[row][idx1] = mat[row][idx1].add(&c1).unwrap();
                let c2 = g[k][j].clone();
                let idx2 = k * d + i;
                mat[row][idx2] = mat[row][idx2].add(&c2).unwrap();
            }
            mat[row][n] = g[i][j].clone();
        }
    }
    let solution = solve_linear(&field, &mut mat, n)?;
    let l: AlgMat = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| alg.from_base(solution[i * d + j].clone()))
                .collect()
        })
        .collect();
    HermPair::new(h, Some(l)).ok()
}

/// Gaussian elimination on an augmented matrix over a field; one solution.
fn solve_linear(
    field: &BaseField,
    mat: &mut [Vec<FieldElem>],
    n: usize,
) -> Option<Vec<FieldElem>> {
    let rows = mat.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut r = 0usize;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].inv().unwrap();
        for j in 0..=n {
            mat[r][j] = mat[r][j].mul(&inv).unwrap();
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..=n {
                    let t = mat[r][j].mul(&f).unwrap();
                    mat[i][j] = mat[i][j].sub(&t).unwrap();
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
    }
    // consistency
    for i in r..rows {
        if !mat[i][n].is_zero() {
            return None;
        }
    }
    let mut sol = vec![field.zero(); n];
    for (c, piv) in pivot_of_col.iter().enumerate() {
        if let Some(row) = piv {
            sol[c] = mat[*row][n].clone();
        }
    }
    Some(sol)
}

#[test]
fn criterion_07_hilbert_product_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let mut checked = 0usize;
    while checked < 1000 {
        let a = BigRational::new(
            BigInt::from(nonzero(&mut rng, 900)),
            BigInt::from(rng.gen_range(1..=60)),
        );
        let b = BigRational::new(
            BigInt::from(nonzero(&mut rng, 900)),
            BigInt::from(rng.gen_range(1..=60)),
        );
        let set = ramification_set(&a, &b).unwrap();
        assert_eq!(set.len() % 2, 0, "odd ramification set for ({a}, {b})");
        checked += 1;
    }
    // the brute-force two-adic oracle agrees with the symbol on all 64
    // square-class pairs; the strict mod-8 scan is exact on odd units
    let classes: Vec<i64> = vec![1, 3, 5, 7, 2, 6, 10, 14];
    for &a in &classes {
        for &b in &classes {
            assert_eq!(
                oracle::hilbert_two_adic_oracle(&rat(a), &rat(b)).unwrap(),
                hilbert_symbol_rat(&rat(a), &rat(b), &wittforms::scalars::Place::two()).unwrap(),
                "two-adic oracle mismatch at ({a}, {b})"
            );
        }
    }
    for &a in &[1i64, 3, 5, 7] {
        for &b in &[1i64, 3, 5, 7] {
            assert_eq!(
                oracle::hilbert_two_adic_oracle_units_mod8(a, b),
                hilbert_symbol_rat(&rat(a), &rat(b), &wittforms::scalars::Place::two()).unwrap(),
            );
        }
    }
    println!(
        "criterion 7 PASS: {checked} random symbols have even ramification sets; \
         the two-adic brute-force oracle matches on all 64 square-class pairs"
    );
}

#[test]
fn criterion_08_relative_e3_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(48);
    let algs = nonsplit_quaternions();
    // scaling invariance: relative_e3(lambda h, h) = 0. The degree-(4.4.1)
    // bookkeeping makes e_3(-h perp lambda h) = (lambda^{dr}) cup (D) with
    // dr = ind(D) rk(h) / 2, so the vanishing statement is a theorem exactly
    // when dr is even; the suite asserts it there, 100%.
    let mut checked = 0usize;
    while checked < 100 {
        let alg = &algs[rng.gen_range(0..algs.len())];
        let r = 2 * rng.gen_range(1..=2usize);
        let entries: Vec<FieldElem> = (0..r).map(|_| q().from_int(nonzero(&mut rng, 12))).collect();
        let h = HermForm::diagonal(alg, 1, &entries).unwrap();
        let lam = q().from_int(nonzero(&mut rng, 12));
        let scaled = h.scale(&lam).unwrap();
        let rel = scaled.relative_e3(&h).unwrap();
        assert!(rel.is_zero(), "relative e_3 of (lambda h, h) must vanish");
        checked += 1;
    }
    // for odd dr the difference is the explicit class (lambda) cup (D);
    // verify the trace-form route against that closed form
    let mut odd_checked = 0usize;
    let mut nonzero_seen = 0usize;
    while odd_checked < 50 {
        let alg = &algs[rng.gen_range(0..algs.len())];
        let r = [1usize, 3][rng.gen_range(0..2)];
        let entries: Vec<FieldElem> = (0..r).map(|_| q().from_int(nonzero(&mut rng, 12))).collect();
        let h = HermForm::diagonal(alg, 1, &entries).unwrap();
        let lam_int = nonzero(&mut rng, 12);
        let lam = q().from_int(lam_int);
        let rel = h.scale(&lam).unwrap().relative_e3(&h).unwrap();
        let expected = symbol_cup(&[&lam], &alg.brauer_class().unwrap().class).unwrap();
        assert_eq!(rel, expected, "odd-rank relative e_3 closed form");
        if !rel.is_zero() {
            nonzero_seen += 1;
        }
        odd_checked += 1;
    }
    assert!(nonzero_seen > 0, "the odd-rank obstruction should be visible");
    println!(
        "criterion 8 PASS: {checked} even-rank (h, lambda) with relative_e3(lambda h, h) = 0 \
         (100%); {odd_checked} odd-rank samples match the closed form, {nonzero_seen} nonzero"
    );
}

#[test]
fn criterion_09_quaternionic_pair_e1() {
    let mut rng = ChaCha8Rng::seed_from_u64(49);
    let algs = [quat(-1, -1), quat(-1, -3)];
    let split_algs = [quat(1, 5), quat(4, 7), quat(2, -1)];
    let mut hyperbolic_checked = 0usize;
    let mut specialization_checked = 0usize;
    let mut attempts = 0usize;
    while (hyperbolic_checked < 100 || specialization_checked < 100) && attempts < 4000 {
        attempts += 1;
        let alg = &algs[attempts % 2];
        let r = rng.gen_range(1..=3usize);
        let Some(gram) = random_skew_gram(&mut rng, alg, r) else {
            continue;
        };
        let h = match HermForm::new(alg.clone(), -1, gram.clone()) {
            Ok(h) => h,
            Err(_) => continue,
        };
        let p = HermPair::new(h, None).unwrap();
        // (i) the class vanishes on hyperbolic constructions
        if hyperbolic_checked < 100 {
            let sum = p.orthogonal_sum(&p.negate().unwrap()).unwrap();
            assert!(
                sum.quaternionic_e1().unwrap().is_zero(),
                "e_1 of p perp -p must vanish"
            );
            hyperbolic_checked += 1;
        }
        // (ii) the same coordinates over a split symbol: the reduced-norm
        // formula matches the discriminant computed through the explicit
        // splitting (asserted inside e_n)
        if specialization_checked < 100 {
            let split_alg = &split_algs[attempts % split_algs.len()];
            let regram = transplant_gram(split_alg, &gram);
            if let Ok(hs) = HermForm::new(split_alg.clone(), -1, regram) {
                let ps = HermPair::new(hs, None).unwrap();
                let e1 = ps.e_n(1).unwrap();
                assert!(matches!(*e1.payload(), Payload::SquareClass(_)));
                specialization_checked += 1;
            }
        }
    }
    assert!(hyperbolic_checked >= 100);
    assert!(specialization_checked >= 100);
    println!(
        "criterion 9 PASS: {hyperbolic_checked} hyperbolic constructions vanish; \
         {specialization_checked} split specializations match the reduced-norm formula"
    );
}

fn random_skew_gram(rng: &mut ChaCha8Rng, alg: &InvAlgebra, r: usize) -> Option<AlgMat> {
    let f = alg.field().clone();
    let mut rand_quat = |pure: bool| -> AlgElem {
        let t = if pure { 0 } else { rng.gen_range(-5..=5) };
        alg.from_coords(&[
            f.from_int(t),
            f.from_int(rng.gen_range(-5..=5)),
            f.from_int(rng.gen_range(-5..=5)),
            f.from_int(rng.gen_range(-5..=5)),
        ])
        .unwrap()
    };
    let mut gram = alg.mat_zero(r, r);
    for i in 0..r {
        gram[i][i] = rand_quat(true);
        for j in (i + 1)..r {
            let v = rand_quat(false);
            gram[j][i] = alg.neg(&alg.invol(&v).unwrap()).unwrap();
            gram[i][j] = v;
        }
    }
    Some(gram)
}

/// Reinterpret quaternion coordinates over another symbol.
fn transplant_gram(alg: &InvAlgebra, gram: &AlgMat) -> AlgMat {
    gram.iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    AlgElem::Quat { t, x, y, z } => alg
                        .from_coords(&[t.clone(), x.clone(), y.clone(), z.clone()])
                        .unwrap(),
                    _ => unreachable!(),
                })
                .collect()
        })
        .collect()
}

#[test]
fn criterion_10_cli_conformance() {
    // the three worked examples produce byte-identical canonical reports
    let cases: Vec<(Command, &str, &str)> = vec![
        (
            Command::Invariants,
            r#"{"field":{"kind":"Q"},"algebra":{"kind":"quaternion","a":-1,"b":-1},"form":{"type":"hermitian","epsilon":1,"gram":[[[1,0,0,0]]]}}"#,
            r#"{"errors":[],"input_canonical":{"algebra":{"a":"-1","b":"-1","kind":"quaternion"},"field":{"kind":"Q"},"form":{"epsilon":1,"gram":[[["1","0","0","0"]]],"type":"hermitian"}},"results":{"e":[{"n":1,"square_class":"1"},{"n":2,"places":[2,"inf"]}]},"version":"0.1.0"}"#,
        ),
        (
            Command::IsHyperbolic,
            r#"{"field":{"kind":"Q"},"algebra":{"kind":"quaternion","a":-1,"b":-1},"form":{"type":"hermitian","epsilon":1,"gram":[[[1,0,0,0],[0,0,0,0]],[[0,0,0,0],[-1,0,0,0]]]}}"#,
            r#"{"errors":[],"input_canonical":{"algebra":{"a":"-1","b":"-1","kind":"quaternion"},"field":{"kind":"Q"},"form":{"epsilon":1,"gram":[[["1","0","0","0"],["0","0","0","0"]],[["0","0","0","0"],["-1","0","0","0"]]],"type":"hermitian"}},"results":{"hyperbolic":true,"routes_agree":true},"version":"0.1.0"}"#,
        ),
        (
            Command::OracleCheck,
            r#"{"field":{"kind":"GF","p":3,"k":1}}"#,
            r#"{"errors":[],"input_canonical":{"algebra":{"kind":"split"},"field":{"k":1,"kind":"GF","modulus":[0,1],"p":3}},"results":{"checked":14,"mismatches":0},"version":"0.1.0"}"#,
        ),
    ];
    for (cmd, doc, golden) in &cases {
        let first = cli::run_command(*cmd, doc, &RunOptions::default());
        let second = cli::run_command(*cmd, doc, &RunOptions::default());
        assert!(first.ok());
        assert_eq!(first.to_json(), second.to_json(), "reports must be stable");
        assert_eq!(&first.to_json(), golden, "golden report changed");
    }

    // schema round trip over a 50-document corpus
    let corpus = build_corpus();
    assert_eq!(corpus.len(), 50);
    for doc in &corpus {
        let parsed = cli::parse_document(doc).unwrap();
        let emitted = cli::emit_document(&parsed);
        let reparsed = cli::parse_value(&emitted).unwrap();
        assert_eq!(parsed.field, reparsed.field);
        assert_eq!(parsed.algebra, reparsed.algebra);
        assert_eq!(parsed.form, reparsed.form);
        assert_eq!(parsed.form2, reparsed.form2);
        assert_eq!(
            serde_json::to_string(&emitted).unwrap(),
            serde_json::to_string(&cli::emit_document(&reparsed)).unwrap()
        );
    }
    println!(
        "criterion 10 PASS: 3 worked examples reproduce byte-identical reports; \
         50-document schema round trip"
    );
}

fn build_corpus() -> Vec<String> {
    let mut docs = Vec::new();
    // quadratic forms over Q
    for i in 0..10i64 {
        docs.push(format!(
            r#"{{"field":{{"kind":"Q"}},"form":{{"type":"quadratic","diag":[{},"-{}/{}",{}]}}}}"#,
            i + 1,
            i + 2,
            2 * i + 3,
            -(i + 5)
        ));
    }
    // quadratic forms over odd finite fields (entries nonzero mod p)
    for i in 0..8i64 {
        let p = [3i64, 5, 7, 11][i as usize % 4];
        docs.push(format!(
            r#"{{"field":{{"kind":"GF","p":{},"k":1}},"form":{{"type":"quadratic","diag":[{},{}]}}}}"#,
            p,
            i % 2 + 1,
            i % (p - 1) + 1
        ));
    }
    // characteristic-2 forms
    for i in 0..8i64 {
        docs.push(format!(
            r#"{{"field":{{"kind":"GF","p":2,"k":{}}},"form":{{"type":"quadratic2","upper":[[1,1],[0,{}]]}}}}"#,
            i % 3 + 1,
            i % 2
        ));
    }
    // hermitian forms over quaternions
    for i in 0..8i64 {
        docs.push(format!(
            r#"{{"field":{{"kind":"Q"}},"algebra":{{"kind":"quaternion","a":-1,"b":{}}},"form":{{"type":"hermitian","gram":[[[{},0,0,0]]]}}}}"#,
            -(2 * i + 1),
            i + 1
        ));
    }
    // unitary forms over etale extensions
    for i in 0..8i64 {
        docs.push(format!(
            r#"{{"field":{{"kind":"Q"}},"algebra":{{"kind":"quad_etale","c":"{}"}},"form":{{"type":"hermitian","gram":[[["{}",0]]]}}}}"#,
            [-1, 2, 3, 5][i as usize % 4],
            i + 1
        ));
    }
    // pairs: split char-2 and quaternionic skew
    for i in 0..4i64 {
        docs.push(format!(
            r#"{{"field":{{"kind":"GF","p":2,"k":1}},"form":{{"type":"pair","gram":[[0,1],[1,0]],"l":[[1,{}],[{},0]]}}}}"#,
            i % 2,
            i % 2
        ));
    }
    for i in 0..4i64 {
        docs.push(format!(
            r#"{{"field":{{"kind":"Q"}},"algebra":{{"kind":"quaternion","a":-1,"b":-1}},"form":{{"type":"pair","gram":[[[0,{},0,{}]]]}}}}"#,
            i + 1,
            i % 3
        ));
    }
    docs
}

#[test]
fn acceptance_summary_note() {
    // all arithmetic in this suite is exact: every criterion above asserts
    // with tolerance zero
    let places: BTreeSet<wittforms::scalars::Place> =
        ramification_set(&rat(-1), &rat(-1)).unwrap();
    assert_eq!(places.len(), 2);
    let bound = e_chain_bound(16);
    assert_eq!(bound, 5);
}
