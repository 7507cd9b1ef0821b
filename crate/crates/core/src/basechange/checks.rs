use std::collections::BTreeMap;

use super::{pushforward_algebra, pushforward_operad, FunctorHandle};
use crate::algebra::{poly_calculus, validate_algebra, PAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, poly_apply, poly_eval, rank, ComplexMatrix, ComplexNumber, SpectrumSet};
use crate::operad::{validate_operad, ColoredOperad};
use crate::report::CheckReport;
use crate::spectral::{
    analytic_spectrum_with, hochschild, operadic_spectrum, residue, residue_universal_map, AnalyticOptions,
};

/// Deviation bound shared by the transport checks.
pub const CHECK_TOLERANCE: f64 = 1e-9;

/// Largest dimension used when testing witness coherence.
const COHERENCE_DIM: usize = 3;

fn relative(d: f64, a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    d / a.frobenius_norm().max(b.frobenius_norm()).max(1.0)
}

fn functor_sanity(rep: &mut CheckReport, f: &FunctorHandle) {
    let coh = f.coherence(COHERENCE_DIM);
    if !coh.singular.is_empty() {
        rep.fail(format!("functor `{}` has non-invertible witnesses at {:?}", f.name(), coh.singular));
    }
    rep.deviation("witness coherence", coh.deviation, CHECK_TOLERANCE);
}

/// Records whether `m` is square and invertible, and how well its inverse
/// reproduces the identity.
fn require_invertible(rep: &mut CheckReport, what: &str, m: &ComplexMatrix) {
    if !m.is_square() {
        rep.fail(format!("{what} is {}x{}, not square", m.rows(), m.cols()));
        return;
    }
    if m.rows() == 0 {
        return;
    }
    if rank(m) < m.rows() {
        rep.fail(format!("{what} is singular"));
        return;
    }
    match m.inverse() {
        Ok(inv) => {
            let res = m.mul(&inv).distance(&ComplexMatrix::identity(m.rows()));
            rep.deviation(format!("{what} inverse residual"), res, CHECK_TOLERANCE);
        }
        Err(e) => rep.fail(format!("{what}: {e}")),
    }
}

/// Inverse of the witness `F(φ ⊗ A_{c₁} ⊗ ⋯) ← φ ⊗ F(A_{c₁}) ⊗ ⋯` for every
/// operation in `labels`, keyed by label.
fn witness_inverses(a: &PAlgebra, f: &FunctorHandle) -> Result<BTreeMap<String, ComplexMatrix>> {
    let mut out = BTreeMap::new();
    for (label, sig) in a.operad().basis_ops() {
        let mut dims = vec![1];
        dims.extend(sig.inputs.iter().map(|c| a.dim(c)));
        let w = f.iterated_witness(&dims);
        let inv = if w.rows() == 0 { w } else { w.inverse()? };
        out.insert(label.to_string(), inv);
    }
    Ok(out)
}

/// `F(O_P^res) ≅ O_{F_*P}^res` through the universal map of the right-hand
/// residue into `F(O_P^res)`.
pub fn check_residue_transport(p: &ColoredOperad, f: &FunctorHandle) -> CheckReport {
    let mut rep = CheckReport::new("residue_transport");
    rep.note(format!("functor {}", f.name()));
    functor_sanity(&mut rep, f);
    let q = match pushforward_operad(p, f) {
        Ok(q) => q,
        Err(e) => {
            rep.fail(e.to_string());
            return rep;
        }
    };
    if validate_operad(p).is_valid() {
        let v = validate_operad(&q);
        if !v.is_valid() {
            rep.fail(format!("pushforward operad has {} axiom violation(s)", v.violations.len()));
        }
    }
    let (left, right) = (residue(p), residue(&q));
    rep.dim("F(residue)", left.total_dimension);
    rep.dim("residue(F_*P)", right.total_dimension);
    rep.expect_equal("residue dimension", left.total_dimension, right.total_dimension);
    if left.summands != right.summands {
        rep.fail("summand dimensions differ");
        return rep;
    }
    let mut corrector = BTreeMap::new();
    for c in p.colors() {
        match f.map_matrix(&left.inclusion(c).expect("color of p")) {
            Ok(m) => {
                corrector.insert(c.clone(), m);
            }
            Err(e) => {
                rep.fail(e.to_string());
                return rep;
            }
        }
    }
    let u = match residue_universal_map(&q, &corrector) {
        Ok(u) => u,
        Err(e) => {
            rep.fail(e.to_string());
            return rep;
        }
    };
    for c in p.colors() {
        let incl = right.inclusion(c).expect("color of q");
        let d = u.mul(&incl).distance(&corrector[c]);
        rep.deviation(format!("u∘ι_{c}"), d, CHECK_TOLERANCE);
        if let (Some(uq), Some(up)) = (q.unit(c), p.unit(c)) {
            let basis = &q.space(&crate::operad::OperationSignature::unary(c)).expect("unit space").basis;
            let vq: Vec<ComplexNumber> = basis.iter().map(|l| uq.coeff(l)).collect();
            let vp: Vec<ComplexNumber> = basis.iter().map(|l| f.map_scalar(up.coeff(l)) * f.unit_witness()).collect();
            let lhs = ComplexMatrix::column_vector(&u.mul(&incl).mul_vec(&vq));
            let rhs = ComplexMatrix::column_vector(&corrector[c].mul_vec(&vp));
            rep.deviation(format!("unit of {c}"), lhs.distance(&rhs), CHECK_TOLERANCE);
        }
    }
    require_invertible(&mut rep, "residue comparison", &u);
    rep
}

/// `F(Hoch(A)) ≅ Hoch(F_*A)`: the level-1 comparison turns `F(d_i)` into
/// `d_i'`, and the induced map on coequalizers is invertible.
pub fn check_hochschild_transport(a: &PAlgebra, f: &FunctorHandle) -> CheckReport {
    let mut rep = CheckReport::new("hochschild_transport");
    rep.note(format!("functor {}", f.name()));
    functor_sanity(&mut rep, f);
    let run = |rep: &mut CheckReport| -> Result<()> {
        let fa = pushforward_algebra(a, f)?;
        if validate_algebra(a).is_valid() && !validate_algebra(&fa).is_valid() {
            rep.fail("pushforward algebra fails validation");
        }
        let (h, hf) = (hochschild(a)?, hochschild(&fa)?);
        rep.dim("F(Hoch)", h.dimension);
        rep.dim("Hoch(F_*A)", hf.dimension);
        rep.expect_equal("Hochschild dimension", h.dimension, hf.dimension);

        let inv = witness_inverses(a, f)?;
        let blocks: Vec<&ComplexMatrix> = h
            .bar1
            .summands
            .iter()
            .map(|s| &inv[s.operation.as_deref().expect("level 1")])
            .collect();
        let c1 = ComplexMatrix::block_diag(&blocks);
        for (i, (d, df)) in h.bar1.faces.iter().zip(&hf.bar1.faces).enumerate() {
            let lhs = f.map_matrix(d)?;
            let rhs = df.mul(&c1);
            rep.deviation(format!("F(d{i}) vs d{i}'"), relative(lhs.distance(&rhs), &lhs, &rhs), CHECK_TOLERANCE);
        }
        let m = hf.projection.mul(&f.map_matrix(&h.section)?);
        let lhs = m.mul(&f.map_matrix(&h.projection)?);
        rep.deviation(
            "induced map is well defined",
            relative(lhs.distance(&hf.projection), &lhs, &hf.projection),
            CHECK_TOLERANCE,
        );
        require_invertible(rep, "induced map on realizations", &m);
        Ok(())
    };
    if let Err(e) = run(&mut rep) {
        rep.fail(e.to_string());
    }
    rep
}

/// `σ_{F_*P}(F_*A) ≅ F(σ_P(A))` with the comparison assembled from the
/// monoidal witnesses on each interaction summand.
pub fn check_spectrum_transport(a: &PAlgebra, f: &FunctorHandle) -> CheckReport {
    let mut rep = CheckReport::new("spectrum_transport");
    rep.note(format!("functor {}", f.name()));
    functor_sanity(&mut rep, f);
    let run = |rep: &mut CheckReport| -> Result<()> {
        let fa = pushforward_algebra(a, f)?;
        let (s, sf) = (operadic_spectrum(a)?, operadic_spectrum(&fa)?);
        rep.dim("F(spectrum)", s.total_dimension);
        rep.dim("spectrum(F_*A)", sf.total_dimension);
        rep.dim("local", s.decomposition.totals.local);
        rep.dim("cross", s.decomposition.totals.cross);
        rep.expect_equal("spectrum dimension", s.total_dimension, sf.total_dimension);
        rep.expect_equal("cross dimension", s.decomposition.totals.cross, sf.decomposition.totals.cross);
        let inv = witness_inverses(a, f)?;
        let mut parts = Vec::new();
        for b in &s.blocks {
            let mut diag = vec![ComplexMatrix::identity(a.dim(&b.color))];
            diag.extend(b.operations.iter().map(|l| inv[l].clone()));
            let x = ComplexMatrix::block_diag(&diag.iter().collect::<Vec<_>>());
            parts.push(x.kron(&ComplexMatrix::identity(b.residue_dimension)));
        }
        let comparison = ComplexMatrix::block_diag(&parts.iter().collect::<Vec<_>>());
        let m = sf.witness().mul(&comparison).mul(&f.map_matrix(&s.section())?);
        let lhs = m.mul(&f.map_matrix(&s.witness())?);
        let rhs = sf.witness().mul(&comparison);
        rep.deviation("witnesses commute", relative(lhs.distance(&rhs), &lhs, &rhs), CHECK_TOLERANCE);
        require_invertible(rep, "induced map on spectra", &m);
        Ok(())
    };
    if let Err(e) = run(&mut rep) {
        rep.fail(e.to_string());
    }
    rep
}

/// Compares the analytic spectrum of `p(A)` with the image under `p` of that
/// of `A`, per color and per loop composite.
///
/// An algebra with no distinguished maps at all is checked on its loops
/// only. One with some but not all fails with `MissingDistinguished`.
pub fn check_spectral_mapping(a: &PAlgebra, coeffs: &[ComplexNumber], tol: f64) -> Result<CheckReport> {
    check_spectral_mapping_with(a, coeffs, &AnalyticOptions { tolerance: tol, ..Default::default() })
}

pub fn check_spectral_mapping_with(a: &PAlgebra, coeffs: &[ComplexNumber], opts: &AnalyticOptions) -> Result<CheckReport> {
    let tol = opts.tolerance;
    let mut rep = CheckReport::new("spectral_mapping");
    let pointed = !a.distinguished_maps().is_empty();
    if pointed {
        if let Some(c) = a.operad().colors().iter().find(|c| a.dim(c) > 0 && a.distinguished(c).is_none()) {
            return Err(Error::MissingDistinguished(c.clone()));
        }
    } else {
        rep.note("no distinguished endomorphisms; only loop composites are compared");
    }
    let p = |z: ComplexNumber| poly_eval(coeffs, z);
    let fa = if pointed {
        match poly_calculus(a, coeffs) {
            Ok(x) => x,
            Err(Error::ValidationFailure(n)) => {
                rep.fail(format!("algebra fails validation with {n} violation(s)"));
                return Ok(rep);
            }
            Err(e) => return Err(e),
        }
    } else {
        a.clone()
    };
    let sa = analytic_spectrum_with(a, opts)?;
    let sf = analytic_spectrum_with(&fa, opts)?;
    rep.dim("colors", a.operad().colors().len());
    rep.dim("loops", sa.loops.len());

    let compare = |rep: &mut CheckReport, what: String, got: &SpectrumSet, want: &SpectrumSet| {
        let got = got.with_tolerance(tol);
        let want = want.with_tolerance(tol);
        match got.matching_distance(&want) {
            Some(d) => rep.deviation(what, d, tol),
            None => rep.fail(format!("{what}: {} values vs {}", got.len(), want.len())),
        }
    };

    for c in a.operad().colors() {
        compare(&mut rep, format!("color {c}"), &sf.per_color[c], &sa.per_color[c].map(p));
    }
    let mut realized = SpectrumSet::empty(tol);
    for l in &sa.loops {
        let fm = poly_apply(&l.composite(a), coeffs)?;
        let got = eigenvalues(&fm, tol)?;
        compare(&mut rep, format!("loop {}", l.operations.join(",")), &got, &l.spectrum.map(p));
        realized = realized.union(&got);
    }
    let lhs = sf.per_color.values().fold(realized, |acc, s| acc.union(s)).dedup();
    let rhs = sa.union.map(p).dedup();
    compare(&mut rep, "union".to_string(), &lhs, &rhs);
    Ok(rep)
}
