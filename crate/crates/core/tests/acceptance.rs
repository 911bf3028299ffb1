//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so that every criterion prints a
//! PASS/FAIL line. Pass criterion numbers as arguments to run a subset:
//! `cargo test -p toepkern --test acceptance -- 2 5`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use toepkern::boundary::{lemma21_outer, outer_from_fn, DEFAULT_GRID};
use toepkern::hardy::{classify_and_factor, minimal_theta_rational, theta_membership_defect};
use toepkern::maximal::{
    hitt_maximal_verify, maximal_pair, maximality_status, scalar_maximal, verify_maximal_decomp, MaximalityStatus,
};
use toepkern::minimal::{kmin_pair_scalar, kmin_pair_vector, kmin_vector, premain_verify, theorem23_symbol, Branch};
use toepkern::toeplitz::{
    build_truncated, kernel_basis, kernel_dim_at_zero, kernel_inclusion_check, near_invariance_check,
    shift_invariance_test,
};
use toepkern::{AnalyticFn, FiniteBlaschke, MatrixSymbol, Polynomial, RationalFn, Result};

const N: usize = DEFAULT_GRID;

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

// ---------------------------------------------------------------------
// Independent numerics: direct FFT projections on plain sample vectors.

fn fft_coeffs(samples: &[C]) -> Vec<C> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf.iter().map(|x| x / n as f64).collect()
}

/// `(nonnegative, negative)` Fourier energy of boundary samples.
fn split_energy(samples: &[C]) -> (f64, f64) {
    let co = fft_coeffs(samples);
    let half = co.len() / 2;
    let pos = co[..half].iter().map(|x| x.norm_sqr()).sum::<f64>();
    let neg = co[half..].iter().map(|x| x.norm_sqr()).sum::<f64>();
    (pos, neg)
}

fn point(k: usize, n: usize) -> C {
    C::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)
}

fn samples_of(f: &RationalFn, n: usize) -> Vec<C> {
    (0..n).map(|k| f.eval_unchecked(point(k, n))).collect()
}

/// `||P(G f)|| / ||f||` computed from raw samples.
fn oracle_residual(g: &MatrixSymbol, f: &[Vec<C>]) -> f64 {
    let n = g.grid_size();
    let mut num = 0.0;
    for i in 0..g.dim() {
        let row: Vec<C> = (0..n)
            .map(|k| (0..g.dim()).map(|j| g.grid(i, j).samples()[k] * f[j][k]).sum())
            .collect();
        num += split_energy(&row).0;
    }
    let den: f64 = f.iter().map(|x| x.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64).sum();
    (num / den).sqrt()
}

/// Relative negative-frequency mass.
fn oracle_negative(samples: &[C]) -> f64 {
    let (pos, neg) = split_energy(samples);
    (neg / (pos + neg)).sqrt()
}

fn oracle_winding(samples: &[C]) -> i64 {
    let mut total = 0.0;
    for k in 0..samples.len() {
        let a = samples[k];
        let b = samples[(k + 1) % samples.len()];
        total += (b / a).arg();
    }
    (total / std::f64::consts::TAU).round() as i64
}

// ---------------------------------------------------------------------
// Random inputs.

fn in_disc(rng: &mut ChaCha8Rng, rmax: f64) -> C {
    C::from_polar(rmax * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn in_annulus(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> C {
    C::from_polar(rng.gen_range(rmin..rmax), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn gaussianish(rng: &mut ChaCha8Rng) -> C {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn poly_from_roots(lead: C, roots: &[C]) -> Polynomial {
    Polynomial::from_roots(lead, roots)
}

fn rational(num: Polynomial, den: Polynomial) -> RationalFn {
    RationalFn::new(num, den).expect("nonzero denominator")
}

/// Random outer rational: zeros `|r| >= 1.25`, poles `|w| >= 1.3`.
fn random_outer(rng: &mut ChaCha8Rng, max_zeros: usize, max_poles: usize) -> RationalFn {
    let nz = rng.gen_range(0..=max_zeros);
    let np = rng.gen_range(0..=max_poles);
    let zeros: Vec<C> = (0..nz).map(|_| in_annulus(rng, 1.25, 2.5)).collect();
    let poles: Vec<C> = (0..np).map(|_| in_annulus(rng, 1.3, 3.0)).collect();
    let lead = C::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
    let num = poly_from_roots(lead, &zeros);
    let den = poly_from_roots(c(1.0, 0.0), &poles);
    // Normalise so that the size is of order one on the circle.
    let f = rational(num, den);
    let scale = samples_of(&f, 64).iter().map(|v| v.norm()).fold(0.0, f64::max);
    f.scale(c(1.0 / scale, 0.0))
}

/// Random rational with numerator degree `<= max_deg` (roots away from
/// the circle) and poles `|w| >= 1.3`; returns the function and the
/// number of numerator roots in the disc.
fn random_rational(rng: &mut ChaCha8Rng, max_deg: usize, max_poles: usize) -> (RationalFn, usize) {
    let d = rng.gen_range(0..=max_deg);
    let mut inside = 0;
    let roots: Vec<C> = (0..d)
        .map(|_| {
            if rng.gen_bool(0.5) {
                inside += 1;
                in_disc(rng, 0.8)
            } else {
                in_annulus(rng, 1.25, 2.5)
            }
        })
        .collect();
    let np = rng.gen_range(0..=max_poles);
    let poles: Vec<C> = (0..np).map(|_| in_annulus(rng, 1.3, 3.0)).collect();
    let lead = C::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
    (rational(poly_from_roots(lead, &roots), poly_from_roots(c(1.0, 0.0), &poles)), inside)
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> RationalFn {
    let d = rng.gen_range(0..=max_deg);
    let coeffs: Vec<C> = (0..=d).map(|_| gaussianish(rng)).collect();
    RationalFn::from_poly(Polynomial::new(coeffs))
}

fn blaschke(zeros: Vec<C>) -> FiniteBlaschke {
    FiniteBlaschke::from_zeros(zeros).expect("zeros in the disc")
}

// ---------------------------------------------------------------------

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

/// Model-space dimensions.
fn criterion_1() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let (mut worst_res, mut worst_gap, mut bad) = (0.0f64, f64::INFINITY, Vec::new());
    for case in 0..20 {
        let deg = rng.gen_range(1..=6);
        let zeros: Vec<C> = (0..deg).map(|_| in_disc(&mut rng, 0.85)).collect();
        let b = blaschke(zeros);
        let g = MatrixSymbol::scalar(b.to_rational().boundary_conjugate()?, N)?;
        let basis = kernel_basis(&build_truncated(&g, 256)?, 1e-8)?;
        let oracle: f64 = (0..basis.dim())
            .map(|j| basis.grids(j, N).map(|v| oracle_residual(&g, &[v[0].samples().to_vec()])))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let res = basis.residuals().iter().copied().fold(oracle, f64::max);
        worst_res = worst_res.max(res);
        worst_gap = worst_gap.min(basis.gap());
        if basis.dim() != deg || basis.gap() < 1e6 || res >= 1e-8 {
            bad.push(format!("case {case}: deg {deg}, dim {}", basis.dim()));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(10),
        format!("20 cases, worst residual {worst_res:.1e}, min gap {worst_gap:.1e}, {:.1} s {}", elapsed.as_secs_f64(), bad.join("; ")),
    )
}

/// Scalar minimal kernels: residual, exact dimension, stability under doubling.
fn criterion_2() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    let (mut worst, mut bad) = (0.0f64, Vec::new());
    for case in 0..50 {
        let (phi, inside) = random_rational(&mut rng, 4, 2);
        let r = kmin_vector(std::slice::from_ref(&phi), 0, N)?;
        let g = r.symbol.as_ref().expect("symbol");
        let res = r.residuals[0].max(oracle_residual(g, &[samples_of(&phi, N)]));
        worst = worst.max(res);
        let h = classify_and_factor(&phi)?;
        let exact = minimal_theta_rational(&h.require_inner()?.to_rational())?.lcm(&FiniteBlaschke::z_power(1)).degree();
        let d1 = kernel_basis(&build_truncated(g, 128)?, 1e-8)?.dim();
        let d2 = kernel_basis(&build_truncated(g, 256)?, 1e-8)?.dim();
        // Counted roots in the disc give the expected dimension independently.
        if res >= 1e-7 || exact != inside + 1 || d1 != exact || d2 != exact {
            bad.push(format!("case {case}: inside {inside}, exact {exact}, dims {d1}/{d2}, res {res:.1e}"));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(30),
        format!("50 cases, worst residual {worst:.1e}, {:.1} s {}", elapsed.as_secs_f64(), bad.join("; ")),
    )
}

/// Vector minimal kernels, n = 2 and 3.
fn criterion_3() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst_res, mut worst_ratio, mut bad) = (0.0f64, 0.0f64, Vec::new());
    for case in 0..6 {
        let n = if case < 3 { 2 } else { 3 };
        let phis: Vec<RationalFn> = (0..n).map(|_| random_rational(&mut rng, 3, 1).0).collect();
        let pivot = n - 1;
        let r = kmin_vector(&phis, pivot, N)?;
        let g = r.symbol.as_ref().expect("symbol");
        let phi_s: Vec<Vec<C>> = phis.iter().map(|f| samples_of(f, N)).collect();
        let res = r.residuals[0].max(oracle_residual(g, &phi_s));
        worst_res = worst_res.max(res);
        let basis = kernel_basis(&build_truncated(g, 128)?, 1e-8)?;
        let phi_norm = (0..N).map(|k| phi_s.iter().map(|x| x[k].norm_sqr()).sum::<f64>().sqrt()).fold(0.0, f64::max);
        for j in 0..basis.dim() {
            let v = basis.grids(j, N)?;
            let v_norm = (0..N).map(|k| v.iter().map(|x| x.samples()[k].norm_sqr()).sum::<f64>().sqrt()).fold(0.0, f64::max);
            for a in 0..n {
                for b in 0..n {
                    for k in 0..N {
                        let cross = v[a].samples()[k] * phi_s[b][k] - v[b].samples()[k] * phi_s[a][k];
                        worst_ratio = worst_ratio.max(cross.norm() / (v_norm * phi_norm));
                    }
                }
            }
        }
        let other = theorem23_symbol(&phis, 0, N)?;
        let mutual = kernel_inclusion_check(g, &other, 128, 1e-5)? && kernel_inclusion_check(&other, g, 128, 1e-5)?;
        if res >= 1e-6 || basis.is_empty() || !mutual {
            bad.push(format!("case {case} (n = {n}): res {res:.1e}, dim {}, mutual {mutual}", basis.dim()));
        }
    }
    outcome(
        bad.is_empty() && worst_ratio < 1e-6,
        format!("6 vectors, worst residual {worst_res:.1e}, max cross-ratio deviation {worst_ratio:.1e} {}", bad.join("; ")),
    )
}

/// The two counterexamples to maximal functions.
fn criterion_4() -> Result<Outcome> {
    let zbar = RationalFn::z_pow(-1);
    let diag = MatrixSymbol::diag(vec![zbar.clone(), zbar], N)?;
    let v1 = maximality_status(&diag, 256, 1e-8)?;
    let rows = vec![
        vec![RationalFn::one(), RationalFn::constant(c(-1.0, 0.0))],
        vec![RationalFn::zero(), RationalFn::zero()],
    ];
    let h = MatrixSymbol::from_rational_rows(rows, N)?;
    let t = build_truncated(&h, 256)?;
    let b = kernel_basis(&t, 1e-8)?;
    let shift = shift_invariance_test(&t, &b)?;
    let v2 = maximality_status(&h, 256, 1e-8)?;
    let dim0 = kernel_dim_at_zero(&kernel_basis(&build_truncated(&diag, 256)?, 1e-8)?)?;
    outcome(
        v1.dim_at_zero == 2 && dim0 == 2 && v1.status == MaximalityStatus::NoMaxDimAtZero && shift && v2.status == MaximalityStatus::NoMaxShiftInvariant,
        format!("diag: dim_at_zero {}, {:?}; [[1,-1],[0,0]]: shift invariant {shift}, {:?}", v1.dim_at_zero, v1.status, v2.status),
    )
}

/// Invertible pairs.
fn criterion_5() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_res, mut worst_sup, mut bad, mut cases) = (0.0f64, 0.0f64, Vec::new(), 0);
    while cases < 20 {
        let phi = [random_poly(&mut rng, 3), random_poly(&mut rng, 3)];
        let psi = [random_poly(&mut rng, 3), random_poly(&mut rng, 3)];
        let det = &(&phi[0] * &psi[1]) - &(&psi[0] * &phi[1]);
        if det.is_zero() || det.zeros().iter().any(|z| (z.norm() - 1.0).abs() < 0.02) {
            continue;
        }
        cases += 1;
        let r = kmin_pair_vector(&phi, &[psi[0].clone().into(), psi[1].clone().into()], N)?;
        let g = r.symbol.as_ref().expect("symbol");
        let a = oracle_residual(g, &[samples_of(&phi[0], N), samples_of(&phi[1], N)]);
        let b = oracle_residual(g, &[samples_of(&psi[0], N), samples_of(&psi[1], N)]);
        let res = a.max(b).max(r.residuals.iter().copied().fold(0.0, f64::max));
        let sup = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| g.grid(i, j).samples().iter().map(|v| v.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        worst_res = worst_res.max(res);
        worst_sup = worst_sup.max(sup);
        if r.branch != Branch::VectorPairInvertible || res >= 1e-6 || sup > 1.0 + 1e-8 {
            bad.push(format!("case {cases}: {:?}, res {res:.1e}, sup {sup}", r.branch));
        }
    }
    outcome(bad.is_empty(), format!("20 pairs, worst residual {worst_res:.1e}, max entry sup {worst_sup:.9} {}", bad.join("; ")))
}

/// The worked degenerate pair φ = (1, z), ψ = (z, z²).
fn criterion_6() -> Result<Outcome> {
    let phi = [RationalFn::one(), RationalFn::z()];
    let psi = [RationalFn::z(), RationalFn::z_pow(2)];
    let r = kmin_pair_vector(&phi, &[psi[0].clone().into(), psi[1].clone().into()], N)?;
    let g = r.symbol.as_ref().expect("symbol");
    let theta_ok = r.theta.as_ref().is_some_and(|t| t.degree() == 3 && t.zeros().iter().all(|z| z.norm() < 1e-12));
    let a = oracle_residual(g, &[samples_of(&phi[0], N), samples_of(&phi[1], N)]);
    let b = oracle_residual(g, &[samples_of(&psi[0], N), samples_of(&psi[1], N)]);
    let t = build_truncated(g, 128)?;
    let basis = kernel_basis(&t, 1e-8)?;
    let shift = shift_invariance_test(&t, &basis)?;
    outcome(
        theta_ok && a < 1e-6 && b < 1e-6 && !shift && r.branch == Branch::VectorPairTriangular,
        format!("theta = z^3: {theta_ok}, residuals {a:.1e} / {b:.1e}, kernel dim {}, shift invariant {shift}", basis.dim()),
    )
}

fn counts(idx: &[usize]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &i in idx {
        *m.entry(i).or_insert(0) += 1;
    }
    m
}

/// Exact zero multiset of a Blaschke product in pool indices.
fn as_indices(b: &FiniteBlaschke, pool: &[C]) -> Option<Vec<usize>> {
    b.zeros().iter().map(|z| pool.iter().position(|p| p == z)).collect()
}

/// Blaschke lattice laws and the two-theta membership equivalence.
fn criterion_7() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pool: Vec<C> = (0..5).map(|_| in_disc(&mut rng, 0.8)).collect();
    pool.push(c(0.0, 0.0));
    let mut lattice_bad = 0;
    for _ in 0..200 {
        let ia: Vec<usize> = (0..rng.gen_range(0..=8)).map(|_| rng.gen_range(0..pool.len())).collect();
        let ib: Vec<usize> = (0..rng.gen_range(0..=8)).map(|_| rng.gen_range(0..pool.len())).collect();
        let a = blaschke(ia.iter().map(|&i| pool[i]).collect());
        let b = blaschke(ib.iter().map(|&i| pool[i]).collect());
        let (ca, cb) = (counts(&ia), counts(&ib));
        let keys: Vec<usize> = (0..pool.len()).collect();
        let min: BTreeMap<usize, usize> = keys
            .iter()
            .map(|&k| (k, (*ca.get(&k).unwrap_or(&0)).min(*cb.get(&k).unwrap_or(&0))))
            .filter(|x| x.1 > 0)
            .collect();
        let max: BTreeMap<usize, usize> = keys
            .iter()
            .map(|&k| (k, (*ca.get(&k).unwrap_or(&0)).max(*cb.get(&k).unwrap_or(&0))))
            .filter(|x| x.1 > 0)
            .collect();
        let a_le_b = keys.iter().all(|k| ca.get(k).unwrap_or(&0) <= cb.get(k).unwrap_or(&0));
        let g = a.gcd(&b);
        let l = a.lcm(&b);
        let ok = as_indices(&g, &pool).map(|i| counts(&i)) == Some(min)
            && as_indices(&l, &pool).map(|i| counts(&i)) == Some(max)
            && a.divides(&b) == a_le_b
            && g.divides(&a)
            && g.divides(&b)
            && a.divides(&l)
            && b.divides(&l)
            && g.degree() + l.degree() == a.degree() + b.degree();
        if !ok {
            lattice_bad += 1;
        }
    }
    let (mut member_bad, mut positives) = (0, 0);
    for _ in 0..100 {
        let poles: Vec<usize> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..pool.len() - 1)).collect();
        let den = poles.iter().fold(Polynomial::one(), |acc, &i| &acc * &Polynomial::new(vec![c(1.0, 0.0), -pool[i].conj()]));
        let num = random_poly(&mut rng, 2);
        let h = rational(num.num().clone(), den);
        let minimal = minimal_theta_rational(&h)?;
        let pick = |rng: &mut ChaCha8Rng| {
            let extra = blaschke((0..rng.gen_range(0..=2)).map(|_| pool[rng.gen_range(0..pool.len())]).collect());
            if rng.gen_bool(0.6) {
                minimal.mul(&extra)
            } else {
                let m = minimal.zeros().len();
                let mut zs: Vec<C> = minimal.zeros().to_vec();
                if m > 0 {
                    zs.remove(rng.gen_range(0..m));
                }
                blaschke(zs).mul(&extra)
            }
        };
        let t1 = pick(&mut rng);
        let t2 = pick(&mut rng);
        // Numeric membership against the exact lattice statement.
        let numeric = theta_membership_defect(&h, &t1)? < 1e-8 && theta_membership_defect(&h, &t2)? < 1e-8;
        let exact = minimal.divides(&t1.gcd(&t2));
        positives += usize::from(exact);
        if numeric != exact {
            member_bad += 1;
        }
    }
    outcome(
        lattice_bad == 0 && member_bad == 0 && positives > 0 && positives < 100,
        format!("200 lattice pairs ({lattice_bad} failures), 100 membership cases ({positives} members, {member_bad} mismatches)"),
    )
}

/// Minimality of minimal_theta.
fn criterion_8() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst_in, mut least_out, mut bad) = (0.0f64, f64::INFINITY, 0);
    let defect = |h: &RationalFn, t: &FiniteBlaschke| -> f64 {
        let s: Vec<C> = (0..N)
            .map(|k| {
                let z = point(k, N);
                z.conj() * t.eval(z) * h.eval_unchecked(z).conj()
            })
            .collect();
        oracle_negative(&s)
    };
    for _ in 0..100 {
        let (h, _) = random_rational(&mut rng, 3, 2);
        let theta = minimal_theta_rational(&h)?;
        let d = defect(&h, &theta);
        worst_in = worst_in.max(d);
        let mut ok = d < 1e-8;
        for i in 0..theta.degree() {
            let dropped = defect(&h, &theta.without_zero(i));
            least_out = least_out.min(dropped);
            ok &= dropped >= 1e-4;
        }
        if !ok {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("100 functions, worst defect {worst_in:.1e}, smallest defect after dropping a zero {least_out:.1e}"))
}

/// Outer functions with prescribed modulus.
fn criterion_9() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut ok = true;
    let check = |u: &toepkern::OuterNumeric, target: &dyn Fn(C) -> f64| -> (f64, bool) {
        let s = u.boundary().samples();
        let err = (0..N).map(|k| (s[k].norm() - target(point(k, N))).abs()).fold(0.0, f64::max);
        let analytic = oracle_negative(s) < 1e-10;
        (err, analytic && oracle_winding(s) == 0 && u.winding_number() == 0)
    };
    // |2 - z| is the modulus of the outer function 2 - z itself.
    let u = outer_from_fn(N, |z| (c(2.0, 0.0) - z).norm())?;
    let (err, fine) = check(&u, &|z| (c(2.0, 0.0) - z).norm());
    let phase = u.value_at_zero() / 2.0;
    let exact = (0..N)
        .map(|k| (u.boundary().samples()[k] - phase * (c(2.0, 0.0) - point(k, N))).norm())
        .fold(0.0, f64::max);
    worst = worst.max(err);
    ok &= fine && err < 1e-6 && exact < 1e-6;
    for _ in 0..10 {
        let phis: Vec<RationalFn> = (0..rng.gen_range(1..=3)).map(|_| random_rational(&mut rng, 3, 1).0).collect();
        let hs = phis.iter().map(classify_and_factor).collect::<Result<Vec<_>>>()?;
        let u = lemma21_outer(&hs, N)?;
        let (err, fine) = check(&u, &|z| 1.0 + phis.iter().map(|f| f.eval_unchecked(z).norm()).sum::<f64>());
        worst = worst.max(err);
        ok &= fine && err < 1e-6;
    }
    let u = outer_from_fn(N, |_| 3.0)?;
    let (cerr, fine) = check(&u, &|_| 3.0);
    let cval = (0..N).map(|k| (u.boundary().samples()[k] - c(3.0, 0.0)).norm()).fold(0.0, f64::max);
    ok &= fine && cerr < 1e-10 && cval < 1e-10;
    outcome(ok, format!("|2 - z| exact to {exact:.1e}, worst sup error {worst:.1e}, constant target error {cval:.1e}"))
}

/// Near invariance under division by inner divisors.
fn criterion_10() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut worst, mut bad) = (0.0f64, 0);
    for case in 0..40 {
        let n = if case < 30 { 1 } else { 2 };
        let deg = rng.gen_range(1..=3);
        let common = blaschke((0..deg).map(|_| in_disc(&mut rng, 0.8)).collect());
        let phis: Vec<RationalFn> = (0..n).map(|_| &common.to_rational() * &random_rational(&mut rng, 2, 1).0).collect();
        let g = kmin_vector(&phis, n - 1, N)?.symbol.expect("symbol");
        let keep = rng.gen_range(1..=deg);
        let eta = blaschke(common.zeros()[..keep].to_vec());
        let inputs: Vec<AnalyticFn> = phis.iter().cloned().map(AnalyticFn::from).collect();
        let res = near_invariance_check(&g, &inputs, &eta)?;
        let divided: Vec<Vec<C>> = phis.iter().map(|f| samples_of(&(f / &eta.to_rational()), N)).collect();
        let oracle = oracle_residual(&g, &divided);
        worst = worst.max(res).max(oracle);
        if res >= 1e-6 || oracle >= 1e-6 {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("30 scalar + 10 vector kernels, worst residual after division {worst:.1e}"))
}

/// Maximal-function round trips.
fn criterion_11() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut bad, mut worst_res) = (Vec::new(), 0.0f64);
    for case in 0..30 {
        let theta = blaschke((0..rng.gen_range(0..=3)).map(|_| in_disc(&mut rng, 0.8)).collect());
        let fo = random_outer(&mut rng, 2, 1);
        let g = &(&(&theta.to_rational() * &fo).boundary_conjugate()? * &RationalFn::z_pow(-1)) / &fo;
        let basis = FiniteBlaschke::z_power(1).mul(&theta).takenaka_basis();
        let k = basis.iter().fold(RationalFn::zero(), |acc, e| &acc + &e.scale(gaussianish(&mut rng)));
        let seed = &fo * &k;
        let m = scalar_maximal(&g, &seed, N)?;
        let decomp = verify_maximal_decomp(&g, &m, 128, N)?;
        let premain = premain_verify(&g, std::slice::from_ref(&m), N)?;
        // The maximal function must itself lie in the kernel.
        let res = oracle_residual(&MatrixSymbol::scalar(g.clone(), N)?, &[samples_of(&m, N)]);
        worst_res = worst_res.max(res);
        if !decomp || !premain.holds || res >= 1e-6 {
            bad.push(format!("case {case}: decomp {decomp}, premain {}, residual {res:.1e}", premain.holds));
        }
    }
    let mut hitt_ok = 0;
    for _ in 0..10 {
        let theta = blaschke((0..rng.gen_range(0..=3)).map(|_| in_disc(&mut rng, 0.8)).collect());
        let inner = FiniteBlaschke::z_power(1).mul(&theta);
        let q = random_outer(&mut rng, 2, 1);
        let g = &(&(&theta.to_rational() * &q).boundary_conjugate()? * &RationalFn::z_pow(-1)) / &q;
        if hitt_maximal_verify(&g, &q, &inner, N)? {
            hitt_ok += 1;
        }
    }
    outcome(
        bad.is_empty() && hitt_ok == 10,
        format!("30 round trips (worst kernel residual {worst_res:.1e}), {hitt_ok}/10 model-space pairs {}", bad.join("; ")),
    )
}

/// Cross-module consistency.
fn criterion_12() -> Result<Outcome> {
    let id = vec![vec![RationalFn::one(), RationalFn::zero()], vec![RationalFn::zero(), RationalFn::one()]];
    let zi = vec![vec![RationalFn::z(), RationalFn::zero()], vec![RationalFn::zero(), RationalFn::z()]];
    let tuple = maximal_pair(&id, &zi, N)?;
    let phi = [tuple[0][0].clone(), tuple[0][1].clone()];
    let psi = [AnalyticFn::from(tuple[1][0].clone()), AnalyticFn::from(tuple[1][1].clone())];
    let r = kmin_pair_vector(&phi, &psi, N)?;
    let g = r.symbol.as_ref().expect("symbol");
    // ker T_{conj(z) I} is exactly the constants of C^2.
    let constants = MatrixSymbol::diag(vec![RationalFn::z_pow(-1), RationalFn::z_pow(-1)], N)?;
    let dim = kernel_basis(&build_truncated(g, 64)?, 1e-8)?.dim();
    let mutual = kernel_inclusion_check(g, &constants, 64, 1e-5)? && kernel_inclusion_check(&constants, g, 64, 1e-5)?;

    let s = kmin_pair_scalar(&RationalFn::z(), &AnalyticFn::from(RationalFn::one()), N)?;
    let gs = s.symbol.as_ref().expect("symbol");
    let b = kernel_basis(&build_truncated(gs, 64)?, 1e-8)?;
    let outside: f64 = (0..b.dim())
        .flat_map(|j| (2..64).map(move |f| (j, f)))
        .map(|(j, f)| b.coeff(j, f, 0).norm())
        .fold(0.0, f64::max);
    outcome(
        dim == 2 && mutual && b.dim() == 2 && outside < 1e-12,
        format!("pair kernel dim {dim}, mutual inclusion {mutual}; kmin(z, 1) dim {}, max coefficient beyond degree 1 {outside:.1e}", b.dim()),
    )
}

const CRITERIA: [(&str, fn() -> Result<Outcome>); 12] = [
    ("model-space dimensions", criterion_1),
    ("scalar minimal kernels", criterion_2),
    ("vector minimal kernels n = 2, 3", criterion_3),
    ("maximal-function counterexamples", criterion_4),
    ("invertible pairs", criterion_5),
    ("degenerate worked pair", criterion_6),
    ("Blaschke lattice laws", criterion_7),
    ("minimal theta minimality", criterion_8),
    ("outer construction", criterion_9),
    ("near invariance", criterion_10),
    ("maximal-function round trips", criterion_11),
    ("cross-module consistency", criterion_12),
];

fn main() {
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in CRITERIA.iter().enumerate() {
        let id = i + 1;
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {id:>2} {} {name}: {} ({:.1} s)",
            if pass { "PASS" } else { "FAIL" },
            detail.trim_end(),
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
