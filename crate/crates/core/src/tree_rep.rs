//! Fusion-tree (height) bases and the operators acting on them.
//!
//! A state is a height sequence `(h_0, …, h_L)` with `h_{j+1} ∈ h_j ⊗ ρ`.
//! The operator at site `j` changes `h_j` only, with coefficients fixed by the
//! neighbours `h_{j−1}` and `h_{j+1}`.  The channel projector is
//!
//! ```text
//! P^χ(h, h') = F^{h_{j−1} ρ ρ}_{h_{j+1}}(h, χ) · conj F^{h_{j−1} ρ ρ}_{h_{j+1}}(h', χ)
//! ```
//!
//! which is Hermitian and idempotent because each F block is unitary.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::baxterizer::AmplitudeSolution;
use crate::category::{twist_factor, CategoryData, ObjectLabel};
use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Boundary {
    /// Fixed `(h_0, h_L)`.
    Open(ObjectLabel, ObjectLabel),
    /// Every admissible boundary pair, one block each.
    OpenAll,
    /// `h_0 = h_L`.
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Over,
    Under,
}

#[derive(Clone, Debug)]
pub struct FusionTreeBasis {
    pub cat: Arc<CategoryData>,
    pub rho: ObjectLabel,
    pub len: usize,
    pub bc: Boundary,
    /// Height sequences `(h_0, …, h_L)`, lexicographically ordered.
    pub states: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

pub fn enumerate_trees(cat: &Arc<CategoryData>, rho: ObjectLabel, len: usize, bc: Boundary) -> Result<FusionTreeBasis> {
    cat.check_label(rho)?;
    if !cat.capabilities().baxterisable {
        return Err(Error::Capability(format!("{} is not baxterisable", cat.name)));
    }
    let n = cat.n_objects();
    let starts: Vec<usize> = match bc {
        Boundary::Open(h0, hl) => {
            cat.check_label(h0)?;
            cat.check_label(hl)?;
            vec![h0.0]
        }
        _ => (0..n).collect(),
    };
    let mut states = Vec::new();
    let mut path = Vec::with_capacity(len + 1);
    for h0 in starts {
        path.clear();
        path.push(h0);
        extend(cat, rho.0, len, &mut path, &mut states);
    }
    states.retain(|s| match bc {
        Boundary::Open(_, hl) => s[len] == hl.0,
        Boundary::OpenAll => true,
        Boundary::Periodic => s[len] == s[0],
    });
    let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    Ok(FusionTreeBasis { cat: Arc::clone(cat), rho, len, bc, states, index })
}

fn extend(cat: &CategoryData, rho: usize, len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if path.len() == len + 1 {
        out.push(path.clone());
        return;
    }
    let last = *path.last().unwrap();
    for h in cat.rules.product(last, rho) {
        path.push(h);
        extend(cat, rho, len, path, out);
        path.pop();
    }
}

impl FusionTreeBasis {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, state: &[usize]) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn is_periodic(&self) -> bool {
        self.bc == Boundary::Periodic
    }

    /// State indices grouped by boundary pair `(h_0, h_L)`.
    pub fn blocks(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut out: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, s) in self.states.iter().enumerate() {
            out.entry((s[0], s[self.len])).or_default().push(i);
        }
        out
    }

    fn check_site(&self, j: usize) -> Result<()> {
        let ok = if self.is_periodic() { (1..=self.len).contains(&j) } else { j >= 1 && j < self.len };
        if ok {
            Ok(())
        } else {
            domain(format!("site {j} outside the basis (L = {}, {:?})", self.len, self.bc))
        }
    }

    /// Positions of `(h_{j−1}, h_j, h_{j+1})` in a stored state.
    fn site_positions(&self, j: usize) -> (usize, usize, usize) {
        if self.is_periodic() {
            let l = self.len;
            ((j + l - 1) % l, j % l, (j + 1) % l)
        } else {
            (j - 1, j, j + 1)
        }
    }

    fn with_height(&self, state: &[usize], pos: usize, h: usize) -> Vec<usize> {
        let mut s = state.to_vec();
        s[pos] = h;
        if self.is_periodic() && pos == 0 {
            s[self.len] = h;
        }
        s
    }

    pub fn render(&self, i: usize) -> String {
        let names = self.cat.labels.names();
        self.states[i].iter().map(|&h| names[h].as_str()).collect::<Vec<_>>().join(",")
    }
}

/// Local weights `W(h, h') = Σ_χ w_χ F(h, χ) conj F(h', χ)` for every
/// neighbour pair `(h_{j−1}, h_{j+1})`.
#[derive(Clone, Debug)]
pub struct LocalRule {
    table: HashMap<(usize, usize), Vec<(usize, usize, Complex64)>>,
}

impl LocalRule {
    pub fn channel_sum(cat: &CategoryData, rho: ObjectLabel, weights: &[(usize, Complex64)]) -> Result<LocalRule> {
        let f = cat.fsym()?;
        let n = cat.n_objects();
        let r = rho.0;
        let mut table = HashMap::new();
        for hm in 0..n {
            let mids = cat.rules.product(hm, r);
            for hp in 0..n {
                let hs: Vec<usize> = mids.iter().copied().filter(|&h| cat.rules.n(h, r, hp) > 0).collect();
                if hs.is_empty() {
                    continue;
                }
                let mut entries = Vec::new();
                for &h in &hs {
                    for &h2 in &hs {
                        let w: Complex64 = weights
                            .iter()
                            .map(|&(chi, w)| w * f.get(hm, r, r, hp, h, chi) * f.get(hm, r, r, hp, h2, chi).conj())
                            .sum();
                        entries.push((h, h2, w));
                    }
                }
                table.insert((hm, hp), entries);
            }
        }
        Ok(LocalRule { table })
    }

    fn entries(&self, hm: usize, hp: usize) -> &[(usize, usize, Complex64)] {
        self.table.get(&(hm, hp)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn dense(&self, basis: &FusionTreeBasis, j: usize) -> Result<DMatrix<Complex64>> {
        basis.check_site(j)?;
        let (pm, pc, pp) = basis.site_positions(j);
        let dim = basis.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (col, s) in basis.states.iter().enumerate() {
            for &(h, h2, w) in self.entries(s[pm], s[pp]) {
                if h2 != s[pc] {
                    continue;
                }
                if let Some(row) = basis.index_of(&basis.with_height(s, pc, h)) {
                    m[(row, col)] += w;
                }
            }
        }
        Ok(m)
    }

    pub fn apply(&self, basis: &FusionTreeBasis, j: usize, v: &DVector<Complex64>) -> DVector<Complex64> {
        let (pm, pc, pp) = basis.site_positions(j);
        let mut out = DVector::zeros(v.len());
        for (col, s) in basis.states.iter().enumerate() {
            let x = v[col];
            if x.is_zero() {
                continue;
            }
            for &(h, h2, w) in self.entries(s[pm], s[pp]) {
                if h2 != s[pc] {
                    continue;
                }
                if let Some(row) = basis.index_of(&basis.with_height(s, pc, h)) {
                    out[row] += w * x;
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearOp {
    pub matrix: DMatrix<Complex64>,
    /// Site the operator acts on; `None` for products such as transfer matrices.
    pub site: Option<usize>,
}

#[derive(Serialize)]
struct OpDocument<'a> {
    rows: usize,
    cols: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    site: Option<usize>,
    basis: &'a [String],
    /// Row-major `[re, im]` entries.
    data: Vec<[f64; 2]>,
}

impl LinearOp {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn to_json(&self, basis: &FusionTreeBasis) -> String {
        let labels: Vec<String> = (0..basis.dim()).map(|i| basis.render(i)).collect();
        let m = &self.matrix;
        let mut data = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                data.push([m[(r, c)].re, m[(r, c)].im]);
            }
        }
        let doc = OpDocument { rows: m.nrows(), cols: m.ncols(), site: self.site, basis: &labels, data };
        serde_json::to_string(&doc).expect("operator serialises")
    }
}

fn channels_of(basis: &FusionTreeBasis) -> Vec<usize> {
    basis.cat.rules.product(basis.rho.0, basis.rho.0)
}

pub fn projector_op(basis: &FusionTreeBasis, chi: ObjectLabel, j: usize) -> Result<LinearOp> {
    let cat = &basis.cat;
    cat.check_label(chi)?;
    if !channels_of(basis).contains(&chi.0) {
        return domain(format!(
            "{} is not a channel of {} x {}",
            cat.name_of(chi),
            cat.name_of(basis.rho),
            cat.name_of(basis.rho)
        ));
    }
    let rule = LocalRule::channel_sum(cat, basis.rho, &[(chi.0, Complex64::new(1.0, 0.0))])?;
    Ok(LinearOp { matrix: rule.dense(basis, j)?, site: Some(j) })
}

/// `Ω_χ^{ρρ}` per channel; inverted for the undercrossing.
pub fn braid_weights(cat: &CategoryData, rho: ObjectLabel, sense: Sense) -> Result<Vec<(usize, Complex64)>> {
    cat.rules
        .product(rho.0, rho.0)
        .into_iter()
        .map(|chi| {
            let w = twist_factor(cat, ObjectLabel(chi), rho, rho)?;
            Ok((chi, if sense == Sense::Over { w } else { w.inv() }))
        })
        .collect()
}

/// `B_j = Σ_χ Ω_χ^{ρρ} P_j^χ` (inverse twists for `Under`).
pub fn braid_op(basis: &FusionTreeBasis, j: usize, sense: Sense) -> Result<LinearOp> {
    let cat = &basis.cat;
    cat.twists()?;
    let rule = LocalRule::channel_sum(cat, basis.rho, &braid_weights(cat, basis.rho, sense)?)?;
    Ok(LinearOp { matrix: rule.dense(basis, j)?, site: Some(j) })
}

fn check_solution_matches(solution: &AmplitudeSolution, basis: &FusionTreeBasis) -> Result<()> {
    let cat = &basis.cat;
    if solution.rho != cat.name_of(basis.rho) || solution.family != cat.name {
        return domain(format!(
            "solution for {} rho={} used on a {} rho={} basis",
            solution.family,
            solution.rho,
            cat.name,
            cat.name_of(basis.rho)
        ));
    }
    let mut sol_ids: Vec<usize> = solution.channels.iter().map(|c| c.id).collect();
    sol_ids.sort();
    if sol_ids != channels_of(basis) {
        return domain("solution channels differ from the channels of rho x rho");
    }
    Ok(())
}

/// Local rule of `R(μ) = Σ_χ A_χ(μ) P^χ`.
pub fn r_rule(solution: &AmplitudeSolution, mu: Complex64, basis: &FusionTreeBasis) -> Result<LocalRule> {
    check_solution_matches(solution, basis)?;
    let weights = (0..solution.channels.len())
        .map(|i| Ok((solution.channels[i].id, solution.amplitude_index(i, mu)?)))
        .collect::<Result<Vec<_>>>()?;
    LocalRule::channel_sum(&basis.cat, basis.rho, &weights)
}

pub fn r_op(solution: &AmplitudeSolution, mu: Complex64, j: usize, basis: &FusionTreeBasis) -> Result<LinearOp> {
    let rule = r_rule(solution, mu, basis)?;
    Ok(LinearOp { matrix: rule.dense(basis, j)?, site: Some(j) })
}

/// Row-to-row transfer matrix on a periodic basis.
///
/// The periodic row is threaded through one auxiliary height: the product
/// `R_L ⋯ R_1` acts on an open chain `(b_0, a_0, …, a_{L−1}, a_0)` and the
/// amplitude of `(b_0, …, b_{L−1}, b_0, a_0)` is `T[b, a]`.  The last face
/// thereby wraps onto the first, which is what makes the family commute.
/// At `μ = 1` every `R` is the identity and `T` is the one-step translation.
pub fn transfer_matrix(solution: &AmplitudeSolution, mu: Complex64, basis: &FusionTreeBasis) -> Result<LinearOp> {
    if !basis.is_periodic() {
        return domain("transfer matrix needs a periodic basis");
    }
    let l = basis.len;
    if l < 2 {
        return domain("transfer matrix needs L >= 2");
    }
    let open = enumerate_trees(&basis.cat, basis.rho, l + 1, Boundary::OpenAll)?;
    let rule = r_rule(solution, mu, &open)?;
    let n = basis.dim();
    let mut t = DMatrix::zeros(n, n);
    let mut by_first: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, s) in basis.states.iter().enumerate() {
        by_first.entry(s[0]).or_default().push(i);
    }
    for (ia, a) in basis.states.iter().enumerate() {
        for (&b0, rows) in &by_first {
            let mut src = Vec::with_capacity(l + 2);
            src.push(b0);
            src.extend_from_slice(&a[..l]);
            src.push(a[0]);
            let Some(si) = open.index_of(&src) else { continue };
            let mut v = DVector::zeros(open.dim());
            v[si] = Complex64::new(1.0, 0.0);
            for j in 1..=l {
                v = rule.apply(&open, j, &v);
            }
            for &ib in rows {
                let b = &basis.states[ib];
                let mut dst = Vec::with_capacity(l + 2);
                dst.extend_from_slice(&b[..l]);
                dst.push(b[0]);
                dst.push(a[0]);
                if let Some(di) = open.index_of(&dst) {
                    t[(ib, ia)] += v[di];
                }
            }
        }
    }
    Ok(LinearOp { matrix: t, site: None })
}

/// Height adjacency `Ñ_{h h'} = N_{h ρ}^{h'}`.
pub fn height_adjacency(cat: &CategoryData, rho: ObjectLabel) -> DMatrix<f64> {
    let n = cat.n_objects();
    DMatrix::from_fn(n, n, |h, h2| cat.rules.n(h, rho.0, h2) as f64)
}

pub fn identity(dim: usize) -> DMatrix<Complex64> {
    DMatrix::identity(dim, dim)
}
