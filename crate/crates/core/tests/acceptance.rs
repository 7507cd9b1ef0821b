//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any of them fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{c, dense, distinct, eig2, horner, mul, rank, same_multiset, same_set, show, Dense};
use num_complex::Complex64;
use soc::algebra::{block_algebra, network_algebra, nogo_witness_pair, trivial_algebra, PAlgebra};
use soc::basechange::{
    check_hochschild_transport, check_residue_transport, check_spectral_mapping, check_spectrum_transport,
    FunctorRegistry,
};
use soc::linalg::{
    eigenvalues, poly_apply, resolvent, resolvent_identity_residual, ComplexMatrix, SpectrumSet,
};
use soc::operad::{matrix_block_operad, trivial_operad, PairWeight, WeightedDigraph};
use soc::random::{self, RandomAlgebraOptions};
use soc::spectral::{analytic_spectrum, decompose, naive_spectrum, operadic_spectrum, residue};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

// written as `!cond` so that a NaN fails
macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn real(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_real(rows)
}

fn nilpotent_pair() -> (ComplexMatrix, ComplexMatrix) {
    (real(&[&[0.0, 1.0], &[0.0, 0.0]]), real(&[&[0.0, 0.0], &[1.0, 0.0]]))
}

fn within(limit: Duration, t: Instant) -> Result<Duration, String> {
    let took = t.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn block_interaction() -> Verdict {
    let t = Instant::now();
    let (alpha, beta) = nilpotent_pair();
    let z = ComplexMatrix::zeros(2, 2);
    let a = block_algebra(&z, &alpha, &beta, &z).map_err(|e| e.to_string())?;
    let s = analytic_spectrum(&a, 4).map_err(|e| e.to_string())?;
    let at1 = s.interaction_at("1").with_tolerance(1e-10);

    // αβ by hand, then its eigenvalues from trace and determinant
    let ab = mul(&dense(&alpha), &dense(&beta));
    let want = eig2(&ab);
    ensure!(
        want.iter().all(|&w| at1.contains(w)),
        "interaction at 1 is {:?}, expected to contain {want:?}",
        at1.values()
    );
    ensure!(at1.contains(c(0.0, 0.0)) && at1.contains(c(1.0, 0.0)), "{:?} misses 0 or 1", at1.values());

    // eigenvalues of [[0, α], [β, 0]] are ±√μ for μ ∈ σ(αβ)
    let block_oracle: Vec<Complex64> = want.iter().flat_map(|m| [m.sqrt(), -m.sqrt()]).collect();
    let got = eigenvalues(&a.assembled_operator(), 1e-8).map_err(|e| e.to_string())?;
    ensure!(
        same_multiset(got.values(), &block_oracle, 1e-8),
        "block eigenvalues {:?}, oracle {block_oracle:?}",
        got.values()
    );
    ensure!(
        same_multiset(got.values(), &[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1e-8),
        "block eigenvalues {:?}",
        got.values()
    );
    let took = within(Duration::from_secs(1), t)?;
    Ok(format!("interaction at 1 = {}, block spectrum {{-1, 0, 0, 1}}, {took:?}", show(at1.values())))
}

fn network_two_cycle() -> Verdict {
    let t = Instant::now();
    let (w1, w2) = (2.0, 3.0);
    let g = WeightedDigraph::cycle(&[c(w1, 0.0), c(w2, 0.0)]);
    let a = network_algebra(&g).map_err(|e| e.to_string())?;
    let s = analytic_spectrum(&a, 4).map_err(|e| e.to_string())?;
    let oracle = c(w1 * w2, 0.0);
    ensure!(
        s.interaction.len() == 1 && (s.interaction.values()[0] - oracle).norm() < 1e-12,
        "interaction {:?}, expected exactly {{{oracle}}}",
        s.interaction.values()
    );
    ensure!(s.per_color.values().all(SpectrumSet::is_empty), "per-color spectra should be empty");
    ensure!(s.missing_distinguished.len() == 2, "both colors lack distinguished maps");
    ensure!(naive_spectrum(&a, 1e-8).is_err(), "naive spectrum needs distinguished maps");
    let took = within(Duration::from_secs(1), t)?;
    Ok(format!("interaction = {{6}}, naive spectra empty, {took:?}"))
}

fn recovery() -> Verdict {
    let mut rng = random::seeded(3);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let a = random::trivial(&mut rng, 16);
        let n = a.total_dim();
        let s = operadic_spectrum(&a).map_err(|e| format!("sample {i}: {e}"))?;
        ensure!(s.total_dimension == n, "sample {i}: total {} != dim {n}", s.total_dimension);
        let w = s.witness();
        ensure!(w.shape() == (n, n), "sample {i}: witness is {:?}", w.shape());
        let inv = w.inverse().map_err(|e| format!("sample {i}: witness not invertible: {e}"))?;
        let cond = w.one_norm() * inv.one_norm();
        ensure!(cond.is_finite(), "sample {i}: condition number {cond}");
        let id = ComplexMatrix::identity(n);
        let residual = w.mul(&inv).distance(&id).max(inv.mul(&w).distance(&id));
        ensure!(residual < 1e-9, "sample {i}: residual {residual:e}");
        worst = worst.max(residual);
    }
    Ok(format!("50 algebras, total = dim A, worst inverse residual {worst:.1e}"))
}

fn no_go() -> Verdict {
    let (a, b) = nogo_witness_pair();
    let (na, nb) = (
        naive_spectrum(&a, 1e-8).map_err(|e| e.to_string())?,
        naive_spectrum(&b, 1e-8).map_err(|e| e.to_string())?,
    );
    for (col, sa) in &na {
        let sb = &nb[col];
        ensure!(sa.approx_eq(sb), "naive spectra differ at {col}");
        ensure!(
            same_set(&distinct(sa.values(), 1e-8), &[c(1.0, 0.0)], 1e-8),
            "naive spectrum at {col} is {:?}",
            sa.values()
        );
    }
    // oracle: Σ dim A_c plus rank θ_B times dim P(1;1) = 1
    let base: usize = a.components().values().sum();
    let theta_rank = rank(&dense(b.structure("theta").unwrap()), 1e-12);
    let (ta, tb) = (
        operadic_spectrum(&a).map_err(|e| e.to_string())?.total_dimension,
        operadic_spectrum(&b).map_err(|e| e.to_string())?.total_dimension,
    );
    ensure!((ta, tb) == (base, base + theta_rank), "totals {ta}, {tb}; oracle {base}, {}", base + theta_rank);
    ensure!((ta, tb) == (4, 6), "totals {ta}, {tb}");
    Ok("naive spectra equal ({1} per color), operadic totals 4 vs 6".into())
}

fn residue_dimensions() -> Verdict {
    let t = residue(&trivial_operad()).total_dimension;
    let m = residue(&matrix_block_operad()).total_dimension;
    ensure!((t, m) == (1, 2), "residue dimensions {t}, {m}");
    Ok("trivial 1, matrix_block 2".into())
}

fn builtin_algebras() -> Vec<(&'static str, PAlgebra)> {
    let (alpha, beta) = nilpotent_pair();
    let z = ComplexMatrix::zeros(2, 2);
    let mut triangle = WeightedDigraph::new(["a", "b", "c"])
        .edge("a", "b", c(1.0, 0.0))
        .edge("b", "c", c(2.0, 0.0))
        .edge("c", "a", c(3.0, 0.0))
        .edge("a", "c", c(0.5, 0.0));
    triangle.pair_weights.push(PairWeight {
        first: "b->c".into(),
        second: "a->c".into(),
        weight: c(1.0, 0.0),
    });
    let (na, nb) = nogo_witness_pair();
    vec![
        ("trivial", trivial_algebra(3, Some(real(&[&[2.0, 1.0, 0.0], &[0.0, 3.0, 0.0], &[0.0, 0.0, 5.0]]))).unwrap()),
        ("block", block_algebra(&ComplexMatrix::real_diag(&[1.0, 2.0]), &alpha, &beta, &ComplexMatrix::real_diag(&[3.0, -1.0])).unwrap()),
        ("block(zero diagonal)", block_algebra(&z, &alpha, &beta, &z).unwrap()),
        ("network(two cycle)", network_algebra(&WeightedDigraph::cycle(&[c(2.0, 0.0), c(3.0, 0.0)])).unwrap()),
        ("network(triangle)", network_algebra(&triangle).unwrap()),
        ("nogo A", na),
        ("nogo B", nb),
    ]
}

fn basechange_matrix() -> Verdict {
    let t = Instant::now();
    let reg = FunctorRegistry::builtin();
    let coeffs = [c(1.0, 0.0), c(-2.0, 0.0), c(0.5, 0.0)];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (name, a) in builtin_algebras() {
        for fname in ["identity", "complexification", "forgetful"] {
            let f = reg.get(fname).map_err(|e| e.to_string())?;
            let reports = [
                check_residue_transport(a.operad(), f),
                check_hochschild_transport(&a, f),
                check_spectrum_transport(&a, f),
                check_spectral_mapping(&a, &coeffs, 1e-8).map_err(|e| format!("{name}: {e}"))?,
            ];
            for r in reports {
                ensure!(r.pass, "{name} × {fname}: {} failed: {:?}", r.check, r.details);
                worst = worst.max(r.max_deviation);
                count += 1;
            }
        }
    }
    ensure!(worst < 1e-9, "max deviation {worst:e}");
    let took = within(Duration::from_secs(30), t)?;
    Ok(format!("{count} checks pass, max deviation {worst:.1e}, {took:?}"))
}

fn classical_mapping() -> Verdict {
    let mut rng = random::seeded(7);
    for i in 0..100 {
        let n = 1 + i % 8;
        let (m, eig) = random::diagonalizable(&mut rng, n);
        let coeffs = random::polynomial(&mut rng, 5);
        let pm = poly_apply(&m, &coeffs).map_err(|e| e.to_string())?;
        let got = eigenvalues(&pm, 1e-7).map_err(|e| e.to_string())?;
        // oracle: the polynomial evaluated at the eigenvalues the matrix was built from
        let want: Vec<Complex64> = eig.iter().map(|&z| horner(&coeffs, z)).collect();
        ensure!(
            same_multiset(got.values(), &want, 1e-7),
            "sample {i}: σ(p(M)) = {:?}, p(σ(M)) = {want:?}",
            got.values()
        );
        ensure!(
            got.approx_eq(&SpectrumSet::new(want, 1e-7)),
            "sample {i}: spectrum sets differ"
        );
    }
    Ok("100 matrices, σ(p(M)) = p(σ(M)) within 1e-7".into())
}

fn corollaries() -> Verdict {
    let mut rng = random::seeded(11);
    let zero = RandomAlgebraOptions {
        zero_interaction: true,
        ..Default::default()
    };
    let mut with_ops = 0;
    for i in 0..200 {
        let a = random::unital_algebra(&mut rng, &zero);
        let d = decompose(&a);
        ensure!(d.cross_dimension() == 0, "sample {i}: cross dimension {}", d.cross_dimension());
        if !d.cross.is_empty() {
            with_ops += 1;
        }
    }
    let mut isolated = 0;
    for i in 0..200 {
        let a = random::partial_unit_algebra(&mut rng, &RandomAlgebraOptions::default());
        let d = decompose(&a);
        for col in a.operad().colors() {
            if a.operad().endo_dim(col) == 0 {
                isolated += 1;
                ensure!(d.local[col] == 0, "sample {i}: color {col} has local {}", d.local[col]);
            }
        }
    }
    ensure!(with_ops > 0 && isolated > 0, "samples never exercised the statements");
    Ok(format!(
        "vanishing on 200 algebras ({with_ops} with interaction ops), isolation on 200 ({isolated} isolated colors)"
    ))
}

fn reconstruction() -> Verdict {
    let mut samples = builtin_algebras();
    samples.push(("trivial(dim 1)", trivial_algebra(1, None).unwrap()));
    let mut rng = random::seeded(13);
    let randoms: Vec<(&str, PAlgebra)> = (0..100).map(|_| ("random", random::any_algebra(&mut rng))).collect();
    let n_builtin = samples.len();
    for (name, a) in samples.into_iter().chain(randoms) {
        let d = decompose(&a).total();
        let s = operadic_spectrum(&a).map_err(|e| format!("{name}: {e}"))?;
        ensure!(s.total_dimension == d, "{name}: coequalizer {} vs decomposition {d}", s.total_dimension);
    }
    Ok(format!("{n_builtin} constructor algebras and 100 random ones agree"))
}

fn resolvent_identity() -> Verdict {
    let mut rng = random::seeded(17);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let n = 1 + i % 8;
        let (m, eig) = random::diagonalizable(&mut rng, n);
        let z = random::point_off(&mut rng, &eig, 3.0, 0.25);
        let w = random::point_off(&mut rng, &eig, 3.0, 0.25);
        let res = resolvent_identity_residual(&m, z, w).map_err(|e| format!("sample {i}: {e}"))?;
        ensure!(res < 1e-8, "sample {i}: residual {res:e}");
        // oracle: (zI − M)·R(z) = I computed by hand
        let rz: Dense = dense(&resolvent(&m, z).map_err(|e| e.to_string())?);
        let shifted: Dense = dense(&ComplexMatrix::scalar_identity(n, z).sub(&m));
        let prod = mul(&shifted, &rz);
        for (r, row) in prod.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                let want = if r == k { 1.0 } else { 0.0 };
                ensure!((v - want).norm() < 1e-9, "sample {i}: (zI-M)R(z) off by {}", (v - want).norm());
            }
        }
        worst = worst.max(res);
    }
    Ok(format!("100 triples, worst residual {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("block interaction", block_interaction),
        ("network two-cycle", network_two_cycle),
        ("recovery", recovery),
        ("no-go separation", no_go),
        ("residue dimensions", residue_dimensions),
        ("base-change matrix", basechange_matrix),
        ("classical spectral mapping", classical_mapping),
        ("decomposition corollaries", corollaries),
        ("reconstruction consistency", reconstruction),
        ("resolvent identity", resolvent_identity),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(detail) => println!("[{:>2}] PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[{:>2}] FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
