//! Numerical checks of solved weights: the current at a vertex, projector and
//! braid algebra, Yang-Baxter, commuting transfer matrices, the μ → 0, ∞
//! limits, and the completely packed loop model.
//!
//! Matrix residuals use the Frobenius norm.  Samples come from
//! [`MuSampler`](crate::sampling::MuSampler) so every report is reproducible
//! from its seed.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::baxterizer::{AmplitudeSolution, SolveVerdict};
use crate::category::{twist_edge_ratio, CategoryData, ObjectLabel};
use crate::error::{domain, Error, Result};
use crate::report::{Check, VerificationReport};
use crate::sampling::{near_any, MuSampler};
use crate::tree_rep::{
    braid_op, enumerate_trees, projector_op, r_op, transfer_matrix, Boundary, FusionTreeBasis, Sense,
};

pub const DEFAULT_SEED: u64 = 20_240_601;

fn fro(m: &DMatrix<Complex64>) -> f64 {
    m.norm()
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Relative distance of `x` from the line through `y`: `min_c ‖x − c y‖ / ‖x‖`.
pub fn proportionality_residual(x: &DMatrix<Complex64>, y: &DMatrix<Complex64>) -> (f64, Complex64) {
    let yy: Complex64 = y.iter().map(|v| v.norm_sqr()).sum::<f64>().into();
    let yx: Complex64 = y.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
    let c = yx / yy;
    ((x - y * c).norm() / x.norm(), c)
}

fn epistemic_label(cat: &CategoryData) -> &'static str {
    if cat.name.starts_with("TY") {
        "conjecture check"
    } else {
        "conjecture check (quantum-group case)"
    }
}

/// `A_b √d_b F^{ρ φ̄ b}_ρ(ρ, a) (1/y + μ) − A_a √d_a F^{ρ a φ}_ρ(ρ, b) (1 + μ/y)`
/// with `y = Ω_ρ^{ρb}/Ω_ρ^{ρa}`, for every `a, b` with `N_{aφ}^b ≠ 0`.
/// In bracket notation the two F-symbols are `F_{ρa}[φ b; ρρ]` and
/// `F_{ρb}[a φ; ρρ]`; the dual on φ only matters when φ is not self-dual.
pub fn verify_current_vertex(
    cat: &CategoryData,
    rho: ObjectLabel,
    phi: ObjectLabel,
    solution: &AmplitudeSolution,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let f = cat.fsym()?;
    if solution.verdict == SolveVerdict::Inconsistent {
        return domain("current vertex check needs a consistent solution");
    }
    let r = rho.0;
    let p = phi.0;
    let pbar = cat.rules.dual(p);
    let channels = cat.rules.product(r, r);
    let mut sampler = MuSampler::new(seed);
    let mut worst = 0.0f64;
    let mut at = String::new();
    let mut count = 0;
    for _ in 0..samples {
        let mu = sampler.next_mu_avoiding(&solution.poles);
        for &a in &channels {
            for &b in &channels {
                if cat.rules.n(a, p, b) == 0 {
                    continue;
                }
                let ia = solution.channel_by_id(a).ok_or_else(|| Error::Domain("solution lacks a channel".into()))?;
                let ib = solution.channel_by_id(b).ok_or_else(|| Error::Domain("solution lacks a channel".into()))?;
                let aa = solution.amplitude_index(ia, mu)?;
                let ab = solution.amplitude_index(ib, mu)?;
                let y = twist_edge_ratio(cat, rho, ObjectLabel(a), ObjectLabel(b))?;
                let f1 = f.get(r, pbar, b, r, r, a);
                let f2 = f.get(r, a, p, r, r, b);
                let t1 = ab * cat.d(b).sqrt() * f1 * (1.0 / y + mu);
                let t2 = aa * cat.d(a).sqrt() * f2 * (1.0 + mu / y);
                let scale = t1.norm().max(t2.norm()).max(1e-300);
                let res = (t1 - t2).norm() / scale;
                count += 1;
                if res > worst {
                    worst = res;
                    at = format!("edge ({}, {}) at mu = {mu}", cat.labels.names()[a], cat.labels.names()[b]);
                }
            }
        }
    }
    let mut report = VerificationReport::new();
    report.push(
        Check::new("current_vertex", &cat.name, worst, 1e-10)
            .param("rho", cat.name_of(rho))
            .param("phi", cat.name_of(phi))
            .samples(count)
            .seed(seed)
            .detail(at),
    );
    Ok(report)
}

fn per_block_residual(basis: &FusionTreeBasis, lhs: &DMatrix<Complex64>, rhs: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for idx in basis.blocks().values() {
        let pick = |m: &DMatrix<Complex64>| DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]);
        let (l, r) = (pick(lhs), pick(rhs));
        let scale = fro(&l).max(fro(&r));
        if scale > 0.0 {
            worst = worst.max(fro(&(l - r)) / scale);
        }
    }
    worst
}

/// `R_j(μ) R_{j+1}(μμ') R_j(μ') = R_{j+1}(μ') R_j(μμ') R_{j+1}(μ)` at every
/// site of an OPEN_ALL basis with `len ≥ 3` strands; worst relative block
/// residual over the samples.
pub fn verify_ybe(
    cat: &Arc<CategoryData>,
    rho: ObjectLabel,
    solution: &AmplitudeSolution,
    len: usize,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    cat.fsym()?;
    if len < 3 {
        return domain("Yang-Baxter check needs L >= 3");
    }
    if len > 8 {
        return Err(Error::SizeCap(format!("L = {len} > 8")));
    }
    let basis = enumerate_trees(cat, rho, len, Boundary::OpenAll)?;
    let mut sampler = MuSampler::new(seed);
    let mut worst = 0.0f64;
    let mut skipped = 0;
    let mut used = 0;
    let mut draws = 0;
    while used < samples && draws < 20 * samples.max(1) {
        draws += 1;
        let mu = sampler.next_mu_avoiding(&solution.poles);
        let mu2 = sampler.next_mu_avoiding(&solution.poles);
        if near_any(mu * mu2, &solution.poles) {
            skipped += 1;
            continue;
        }
        let r = |m: Complex64, j: usize| r_op(solution, m, j, &basis).map(|o| o.matrix);
        for j in 1..len - 1 {
            let lhs = r(mu, j)? * r(mu * mu2, j + 1)? * r(mu2, j)?;
            let rhs = r(mu2, j + 1)? * r(mu * mu2, j)? * r(mu, j + 1)?;
            worst = worst.max(per_block_residual(&basis, &lhs, &rhs));
        }
        used += 1;
    }
    let mut report = VerificationReport::new();
    report.push(
        Check::new("ybe", &cat.name, worst, 1e-8)
            .param("rho", cat.name_of(rho))
            .param("phi", &solution.phi)
            .param("L", len)
            .param("basis_dim", basis.dim())
            .samples(used)
            .seed(seed)
            .detail(format!("{}; {skipped} pole collisions skipped", epistemic_label(cat))),
    );
    Ok(report)
}

/// `‖[T(μ), T(μ')]‖ / (‖T(μ)‖ ‖T(μ')‖)` on a periodic basis of L ≤ 8 sites.
pub fn verify_commuting_transfer(
    cat: &Arc<CategoryData>,
    rho: ObjectLabel,
    solution: &AmplitudeSolution,
    len: usize,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    cat.fsym()?;
    if len > 8 {
        return Err(Error::SizeCap(format!("L = {len} > 8")));
    }
    let basis = enumerate_trees(cat, rho, len, Boundary::Periodic)?;
    let mut sampler = MuSampler::new(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let mu = sampler.next_mu_avoiding(&solution.poles);
        let mu2 = sampler.next_mu_avoiding(&solution.poles);
        let t1 = transfer_matrix(solution, mu, &basis)?.matrix;
        let t2 = transfer_matrix(solution, mu2, &basis)?.matrix;
        let comm = &t1 * &t2 - &t2 * &t1;
        worst = worst.max(fro(&comm) / (fro(&t1) * fro(&t2)));
    }
    let mut report = VerificationReport::new();
    report.push(
        Check::new("commuting_transfer", &cat.name, worst, 1e-8)
            .param("rho", cat.name_of(rho))
            .param("phi", &solution.phi)
            .param("L", len)
            .param("basis_dim", basis.dim())
            .samples(samples)
            .seed(seed)
            .detail(epistemic_label(cat)),
    );
    Ok(report)
}

pub const LARGE_MU: f64 = 1e8;
pub const SMALL_MU: f64 = 1e-8;

/// Which braid sense a matrix is proportional to, with the residual.
pub fn match_braid(x: &DMatrix<Complex64>, over: &DMatrix<Complex64>, under: &DMatrix<Complex64>) -> (Sense, f64) {
    let (ro, _) = proportionality_residual(x, over);
    let (ru, _) = proportionality_residual(x, under);
    if ro <= ru {
        (Sense::Over, ro)
    } else {
        (Sense::Under, ru)
    }
}

/// `R(1) ∝ 𝟙`, and the braid sense reached as μ → ∞ and μ → 0.
pub fn verify_braid_limits(
    cat: &Arc<CategoryData>,
    rho: ObjectLabel,
    solution: &AmplitudeSolution,
) -> Result<VerificationReport> {
    cat.fsym()?;
    let basis = enumerate_trees(cat, rho, 3, Boundary::OpenAll)?;
    let mut report = VerificationReport::new();
    let one = Complex64::new(1.0, 0.0);
    let r1 = r_op(solution, one, 1, &basis)?.matrix;
    let a_ref = solution.amplitude_at(&solution.reference, one)?;
    let id = DMatrix::<Complex64>::identity(basis.dim(), basis.dim()) * a_ref;
    report
        .push(Check::new("r_at_one", &cat.name, max_abs(&(r1 - id)), 1e-12).param("rho", cat.name_of(rho)).samples(1));
    let over = braid_op(&basis, 1, Sense::Over)?.matrix;
    let under = braid_op(&basis, 1, Sense::Under)?.matrix;
    for (name, mu) in [("limit_large_mu", LARGE_MU), ("limit_small_mu", SMALL_MU)] {
        let r = r_op(solution, Complex64::new(mu, 0.0), 1, &basis)?.matrix;
        let (sense, res) = match_braid(&r, &over, &under);
        report.push(
            Check::new(name, &cat.name, res, 1e-6)
                .param("rho", cat.name_of(rho))
                .param("mu", mu)
                .samples(1)
                .detail(format!("matched {}", if sense == Sense::Over { "over" } else { "under" })),
        );
    }
    Ok(report)
}

/// Compare the overcrossing with the loop-model generators built from `q`:
/// `q^{-1/2} e − q^{1/2} 𝟙` and `q^{1/2} e − q^{-1/2} 𝟙`, `e = d_ρ P^0`.
pub fn braid_vs_loop(cat: &Arc<CategoryData>, rho: ObjectLabel, q: Complex64) -> Result<Check> {
    let basis = enumerate_trees(cat, rho, 3, Boundary::OpenAll)?;
    let over = braid_op(&basis, 1, Sense::Over)?.matrix;
    let e = projector_op(&basis, ObjectLabel(0), 1)?.matrix * Complex64::from(cat.d(rho.0));
    let id = DMatrix::<Complex64>::identity(basis.dim(), basis.dim());
    let sq = q.sqrt();
    let b_loop = &e * sq.inv() - &id * sq;
    let bbar_loop = &e * sq - &id * sq.inv();
    let (r_b, _) = proportionality_residual(&over, &b_loop);
    let (r_bbar, _) = proportionality_residual(&over, &bbar_loop);
    let (which, res) = if r_b <= r_bbar { ("B", r_b) } else { ("Bbar", r_bbar) };
    Ok(Check::new("braid_vs_loop", &cat.name, res, 1e-9)
        .param("rho", cat.name_of(rho))
        .param("q", q)
        .detail(format!("overcrossing proportional to loop {which}")))
}

fn all_channels(cat: &CategoryData, rho: ObjectLabel) -> Vec<usize> {
    cat.rules.product(rho.0, rho.0)
}

/// Orthogonality, completeness and hermiticity of the channel projectors at
/// every site of an OPEN_ALL basis with `len` strands; Temperley-Lieb relations
/// when `ρ⊗ρ = 0 ⊕ χ`; block preservation.
pub fn verify_projector_algebra(cat: &Arc<CategoryData>, rho: ObjectLabel, len: usize) -> Result<VerificationReport> {
    cat.fsym()?;
    let basis = enumerate_trees(cat, rho, len, Boundary::OpenAll)?;
    let dim = basis.dim();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let chans = all_channels(cat, rho);
    let (mut orth, mut compl, mut herm, mut blocks) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut per_site: Vec<Vec<DMatrix<Complex64>>> = Vec::new();
    for j in 1..len {
        let ps: Vec<_> =
            chans.iter().map(|&c| projector_op(&basis, ObjectLabel(c), j).map(|o| o.matrix)).collect::<Result<_>>()?;
        let mut sum = DMatrix::zeros(dim, dim);
        for (x, px) in ps.iter().enumerate() {
            sum += px;
            herm = herm.max(max_abs(&(px - px.adjoint())));
            blocks = blocks.max(off_block(&basis, px));
            for (y, py) in ps.iter().enumerate() {
                let want = if x == y { px.clone() } else { DMatrix::zeros(dim, dim) };
                orth = orth.max(max_abs(&(px * py - want)));
            }
        }
        compl = compl.max(max_abs(&(sum - &id)));
        per_site.push(ps);
    }
    let fam = &cat.name;
    let sites = len.saturating_sub(1);
    let mut report = VerificationReport::new();
    let tag = |c: Check| c.param("rho", cat.name_of(rho)).param("L", len).param("basis_dim", dim).samples(sites);
    report.push(tag(Check::new("projector_orthogonality", fam, orth, 1e-10)));
    report.push(tag(Check::new("projector_completeness", fam, compl, 1e-10)));
    report.push(tag(Check::new("projector_hermiticity", fam, herm, 1e-10)));
    report.push(tag(Check::new("block_preservation", fam, blocks, 1e-12)));

    if chans.len() == 2 && chans[0] == 0 {
        let d = cat.d(rho.0);
        let es: Vec<DMatrix<Complex64>> = per_site.iter().map(|ps| &ps[0] * Complex64::from(d)).collect();
        let mut sq = 0.0f64;
        let mut tl = 0.0f64;
        let mut far = 0.0f64;
        for (i, e) in es.iter().enumerate() {
            sq = sq.max(max_abs(&(e * e - e * Complex64::from(d))));
            if let Some(e2) = es.get(i + 1) {
                tl = tl.max(max_abs(&(e * e2 * e - e)));
                tl = tl.max(max_abs(&(e2 * e * e2 - e2)));
            }
            if let Some(e3) = es.get(i + 2) {
                far = far.max(max_abs(&(e * e3 - e3 * e)));
            }
        }
        report.push(tag(Check::new("tl_e_squared", fam, sq, 1e-10)).detail(format!("e^2 = d e with d = {d}")));
        report.push(tag(Check::new("tl_eee", fam, tl, 1e-10)));
        report.push(tag(Check::new("tl_far_commute", fam, far, 1e-10)));
    }
    Ok(report)
}

fn off_block(basis: &FusionTreeBasis, m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for (r, sr) in basis.states.iter().enumerate() {
        for (c, sc) in basis.states.iter().enumerate() {
            if (sr[0], sr[basis.len]) != (sc[0], sc[basis.len]) {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    worst
}

/// `B B̄ = 𝟙` and `B_j B_{j+1} B_j = B_{j+1} B_j B_{j+1}` on an OPEN_ALL basis.
pub fn verify_braid_relations(cat: &Arc<CategoryData>, rho: ObjectLabel, len: usize) -> Result<VerificationReport> {
    cat.fsym()?;
    let basis = enumerate_trees(cat, rho, len, Boundary::OpenAll)?;
    let dim = basis.dim();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let over: Vec<_> = (1..len).map(|j| braid_op(&basis, j, Sense::Over).map(|o| o.matrix)).collect::<Result<_>>()?;
    let under: Vec<_> = (1..len).map(|j| braid_op(&basis, j, Sense::Under).map(|o| o.matrix)).collect::<Result<_>>()?;
    let mut inv = 0.0f64;
    let mut r3 = 0.0f64;
    for i in 0..over.len() {
        inv = inv.max(max_abs(&(&over[i] * &under[i] - &id)));
        if i + 1 < over.len() {
            let (a, b) = (&over[i], &over[i + 1]);
            r3 = r3.max(max_abs(&(a * b * a - b * a * b)));
        }
    }
    let mut report = VerificationReport::new();
    let tag = |c: Check| c.param("rho", cat.name_of(rho)).param("L", len).param("basis_dim", dim);
    report.push(tag(Check::new("reidemeister2", &cat.name, inv, 1e-9)));
    report.push(tag(Check::new("reidemeister3", &cat.name, r3, 1e-9)));
    Ok(report)
}

// ---------------------------------------------------------------------------
// Completely packed loop model

/// `C/A_1 = (μ − 1)/(q − q^{-1} μ)` with `μ = e^u`.
pub fn loop_c_over_a1(q: Complex64, mu: Complex64) -> Complex64 {
    (mu - 1.0) / (q - mu / q)
}

/// Residuals of the four diagram relations with `A_1 ≡ 1` and `C` from
/// [`loop_c_over_a1`] (or `c_fn` when given, for mutation tests).
pub fn loop_functional_residuals(
    q: Complex64,
    mu: Complex64,
    mu2: Complex64,
    c_fn: Option<&dyn Fn(Complex64) -> Complex64>,
) -> [f64; 3] {
    let c = |m: Complex64| match c_fn {
        Some(f) => f(m),
        None => loop_c_over_a1(q, m),
    };
    let d = q + q.inv();
    let a1 = |_m: Complex64| Complex64::new(1.0, 0.0);
    let (cu, cv, cuv) = (c(mu), c(mu2), c(mu * mu2));
    let first = (a1(mu) * a1(mu * mu2) * a1(mu2) - a1(mu2) * a1(mu * mu2) * a1(mu)).norm();
    let second = (cu * cuv * a1(mu) - a1(mu2) * cuv * cu).norm();
    let lhs = a1(mu) * cuv * a1(mu2);
    let rhs = d * cv * a1(mu * mu2) * cu + a1(mu2) * a1(mu * mu2) * cu + cv * a1(mu * mu2) * a1(mu) + cu * cuv * cv;
    [first, second, (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0)]
}

/// The loop-model functional equation at `samples` seeded `(u, u')` pairs.
pub fn loop_functional_check(q: Complex64, samples: usize, seed: u64) -> VerificationReport {
    loop_functional_check_with(q, samples, seed, None)
}

pub fn loop_functional_check_with(
    q: Complex64,
    samples: usize,
    seed: u64,
    c_fn: Option<&dyn Fn(Complex64) -> Complex64>,
) -> VerificationReport {
    let mut sampler = MuSampler::new(seed);
    let pole = q * q;
    let mut worst = [0.0f64; 3];
    for _ in 0..samples {
        let (mu, mu2) = loop {
            let a = sampler.next_mu_avoiding(&[pole]);
            let b = sampler.next_mu_avoiding(&[pole]);
            if !near_any(a * b, &[pole]) {
                break (a, b);
            }
        };
        let r = loop_functional_residuals(q, mu, mu2, c_fn);
        for i in 0..3 {
            worst[i] = worst[i].max(r[i]);
        }
    }
    let mut report = VerificationReport::new();
    let fam = "completely-packed-loops";
    let tag = |c: Check| c.param("q", q).samples(samples).seed(seed);
    report.push(tag(Check::new("loop_first_diagram", fam, worst[0], 1e-10)));
    report.push(tag(Check::new("loop_second_third_diagram", fam, worst[1], 1e-10)));
    report.push(tag(Check::new("loop_functional_equation", fam, worst[2], 1e-10)));
    report
}

pub const LOOP_MAX_VERTICES: usize = 16;

/// Vertices of half-row `r`: strand pairs `(2i, 2i+1)` on even rows and
/// `(2i+1, 2i+2 mod W)` on odd rows, `W = 2 Lx`.
fn row_pairs(w: usize, r: usize) -> Vec<(usize, usize)> {
    (0..w / 2).map(|i| if r % 2 == 0 { (2 * i, 2 * i + 1) } else { (2 * i + 1, (2 * i + 2) % w) }).collect()
}

fn check_torus(lx: usize, ly: usize) -> Result<()> {
    if lx == 0 || ly == 0 {
        return domain("torus dimensions must be positive");
    }
    if lx * ly > LOOP_MAX_VERTICES {
        return Err(Error::SizeCap(format!("{lx} x {ly} torus has more than {LOOP_MAX_VERTICES} vertices")));
    }
    Ok(())
}

/// Torus partition function by summing all `2^V` vertex resolutions and
/// tracing loops.  Weights: `a1` for the straight-through resolution, `c` for
/// the cup-cap resolution, `d` per closed loop.
pub fn loop_partition_weights(d: Complex64, a1: Complex64, c: Complex64, lx: usize, ly: usize) -> Result<Complex64> {
    check_torus(lx, ly)?;
    let w = 2 * lx;
    let v = lx * ly;
    // point (r, p): bottom of half-row r at strand p; top of row r is (r+1 mod ly, p)
    let pt = |r: usize, p: usize| (r % ly) * w + p;
    let mut z = Complex64::new(0.0, 0.0);
    for mask in 0u32..(1u32 << v) {
        let mut uf: Vec<usize> = (0..w * ly).collect();
        let mut n_e = 0;
        let mut vi = 0;
        for r in 0..ly {
            for (p, p2) in row_pairs(w, r) {
                let cup = mask >> vi & 1 == 1;
                vi += 1;
                if cup {
                    n_e += 1;
                    union(&mut uf, pt(r, p), pt(r, p2));
                    union(&mut uf, pt(r + 1, p), pt(r + 1, p2));
                } else {
                    union(&mut uf, pt(r, p), pt(r + 1, p));
                    union(&mut uf, pt(r, p2), pt(r + 1, p2));
                }
            }
        }
        let loops = (0..w * ly).filter(|&x| find(&mut uf, x) == x).count();
        z += c.powi(n_e) * a1.powi(v as i32 - n_e) * d.powi(loops as i32);
    }
    Ok(z)
}

fn find(uf: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while uf[r] != r {
        r = uf[r];
    }
    let mut y = x;
    while uf[y] != r {
        let next = uf[y];
        uf[y] = r;
        y = next;
    }
    r
}

fn union(uf: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(uf, a), find(uf, b));
    if ra != rb {
        uf[ra] = rb;
    }
}

/// Same partition function by a connectivity transfer matrix: states are
/// pairings of the `W` bottom points and `W` current top points; closed loops
/// are counted as they form, and the top is glued to the bottom at the end.
pub fn loop_partition_transfer(d: Complex64, a1: Complex64, c: Complex64, lx: usize, ly: usize) -> Result<Complex64> {
    check_torus(lx, ly)?;
    let w = 2 * lx;
    let start: Vec<u8> = (0..2 * w).map(|i| ((i + w) % (2 * w)) as u8).collect();
    let mut states: HashMap<Vec<u8>, Complex64> = HashMap::from([(start, Complex64::new(1.0, 0.0))]);
    for r in 0..ly {
        for (p, p2) in row_pairs(w, r) {
            let mut next: HashMap<Vec<u8>, Complex64> = HashMap::new();
            for (s, wt) in &states {
                *next.entry(s.clone()).or_default() += wt * a1;
                let (t, t2) = (w + p, w + p2);
                let mut s2 = s.clone();
                let mut factor = c;
                if s[t] as usize == t2 {
                    factor *= d;
                } else {
                    let (x, y) = (s[t] as usize, s[t2] as usize);
                    s2[x] = y as u8;
                    s2[y] = x as u8;
                }
                s2[t] = t2 as u8;
                s2[t2] = t as u8;
                *next.entry(s2).or_default() += wt * factor;
            }
            states = next;
        }
    }
    let mut z = Complex64::new(0.0, 0.0);
    for (s, wt) in states {
        let mut uf: Vec<usize> = (0..2 * w).collect();
        for (i, &j) in s.iter().enumerate() {
            union(&mut uf, i, j as usize);
        }
        for i in 0..w {
            union(&mut uf, i, w + i);
        }
        let loops = (0..2 * w).filter(|&x| find(&mut uf, x) == x).count();
        z += wt * d.powi(loops as i32);
    }
    Ok(z)
}

/// Loop-model weights at `μ`: `A_1 = 1`, `C = (μ − 1)/(q − q^{-1} μ)`, `d = q + q^{-1}`.
pub fn loop_weights(q: Complex64, mu: Complex64) -> (Complex64, Complex64, Complex64) {
    (q + q.inv(), Complex64::new(1.0, 0.0), loop_c_over_a1(q, mu))
}

pub fn loop_partition_enumeration(q: Complex64, mu: Complex64, lx: usize, ly: usize) -> Result<Complex64> {
    let (d, a1, c) = loop_weights(q, mu);
    loop_partition_weights(d, a1, c, lx, ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one_torus_by_hand() {
        // straight: two vertical loops; cup-cap: one loop
        let (d, a1, c) = (Complex64::new(1.3, 0.2), Complex64::new(0.7, -0.1), Complex64::new(-0.4, 0.9));
        let want = a1 * d * d + c * d;
        let z = loop_partition_weights(d, a1, c, 1, 1).unwrap();
        assert!((z - want).norm() < 1e-14);
        let z2 = loop_partition_transfer(d, a1, c, 1, 1).unwrap();
        assert!((z2 - want).norm() < 1e-14);
    }

    #[test]
    fn all_straight_weights() {
        let d = Complex64::new(1.7, 0.0);
        let z = loop_partition_weights(d, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), 2, 2).unwrap();
        // every strand closes on itself: W = 4 vertical loops
        assert!((z - d.powi(4)).norm() < 1e-12);
    }

    #[test]
    fn size_cap() {
        assert!(matches!(
            loop_partition_weights(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), 5, 4),
            Err(Error::SizeCap(_))
        ));
    }

    #[test]
    fn u_zero_reduces_to_a1_terms() {
        let q = Complex64::from_polar(1.0, std::f64::consts::PI / 5.0);
        let one = Complex64::new(1.0, 0.0);
        let r = loop_functional_residuals(q, one, Complex64::new(0.4, 1.1), None);
        assert!(r.iter().all(|x| *x < 1e-15));
    }
}
