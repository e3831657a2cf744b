//! Tensor-product graphs and the conserved-current constraint.
//!
//! Each edge `a → b` of the graph imposes
//!
//! ```text
//! A_b / A_a = (Ω_ρ^{ρb} + μ Ω_ρ^{ρa}) / (Ω_ρ^{ρa} + μ Ω_ρ^{ρb}) = (y + μ) / (1 + μ y),
//! y = Ω_ρ^{ρb} / Ω_ρ^{ρa}
//! ```
//!
//! Amplitudes are propagated along a spanning tree as rational functions of μ;
//! every remaining edge closes a cycle whose identity is tested by evaluation.

use std::collections::VecDeque;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::LieTwistData;
use crate::category::{rational_phase, twist_edge_ratio, CategoryData, ObjectLabel};
use crate::error::{domain, Error, Result};
use crate::poly::{Poly, Rational};
use crate::sampling::MuSampler;

/// Seed of the deterministic cycle-check sample points.
pub const CYCLE_SEED: u64 = 0x5eed_c1c1e;
pub const CYCLE_TOL: f64 = 1e-9;
const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Channel {
    /// Object id in the category (channel index for twist-only data).
    pub id: usize,
    pub name: String,
    #[serde(serialize_with = "ser_rational")]
    pub delta: Rational64,
    /// `ν_χ^{ρρ}`.
    pub nu: i8,
}

fn ser_rational<S: serde::Serializer>(x: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", x.numer(), x.denom()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorProductGraph {
    pub family: String,
    pub rho: String,
    pub phi: String,
    pub channels: Vec<Channel>,
    /// Edges `(a, b)` as channel indices, meaning `N_{aφ}^b ≠ 0`.  When the
    /// reverse relation also holds the pair is stored once with `a < b`.
    pub edges: Vec<(usize, usize)>,
    pub oriented: bool,
}

impl TensorProductGraph {
    pub fn channel_index(&self, name: &str) -> Option<usize> {
        self.channels.iter().position(|c| c.name == name)
    }

    /// `Ω_ρ^{ρb} / Ω_ρ^{ρa}` for channel indices.
    pub fn twist_ratio(&self, a: usize, b: usize) -> Complex64 {
        let (ca, cb) = (&self.channels[a], &self.channels[b]);
        rational_phase(cb.delta - ca.delta) * (ca.nu * cb.nu) as f64
    }

    /// Identity channel when present, else the lowest id.
    pub fn reference(&self) -> usize {
        self.channels.iter().position(|c| c.id == 0 && c.name == "0").unwrap_or(0)
    }

    fn components(&self) -> usize {
        let n = self.channels.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        (0..n).filter(|&x| find(&mut parent, x) == x).count()
    }

    /// Number of independent cycles, `E − V + components`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.components() - self.channels.len()
    }
}

fn graph_from_relation(
    family: String,
    rho: String,
    phi: String,
    channels: Vec<Channel>,
    related: impl Fn(usize, usize) -> bool,
) -> TensorProductGraph {
    let n = channels.len();
    let mut edges = Vec::new();
    let mut oriented = false;
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let fwd = related(a, b);
            let back = related(b, a);
            if fwd && back {
                if a < b {
                    edges.push((a, b));
                }
            } else if fwd {
                edges.push((a, b));
                oriented = true;
            }
        }
    }
    TensorProductGraph { family, rho, phi, channels, edges, oriented }
}

/// Vertices: channels of ρ⊗ρ.  Edges: `N_{aφ}^b ≠ 0`, `a ≠ b`.
pub fn build_tp_graph(cat: &CategoryData, rho: ObjectLabel, phi: ObjectLabel) -> Result<TensorProductGraph> {
    cat.check_label(rho)?;
    cat.check_label(phi)?;
    let tw = cat.twists()?;
    if cat.rules.n(phi.0, rho.0, rho.0) == 0 {
        return domain(format!(
            "current cannot terminate: {} is not in {} x {}",
            cat.name_of(rho),
            cat.name_of(phi),
            cat.name_of(rho)
        ));
    }
    let channels: Vec<Channel> = cat
        .rules
        .product(rho.0, rho.0)
        .into_iter()
        .map(|c| {
            let nu = tw
                .nu(c, rho.0, rho.0)
                .ok_or_else(|| Error::Domain(format!("missing nu for channel {}", cat.labels.names()[c])))?;
            Ok(Channel { id: c, name: cat.labels.names()[c].clone(), delta: tw.delta[c], nu })
        })
        .collect::<Result<_>>()?;
    let ids: Vec<usize> = channels.iter().map(|c| c.id).collect();
    Ok(graph_from_relation(
        cat.name.clone(),
        cat.name_of(rho).to_string(),
        cat.name_of(phi).to_string(),
        channels,
        |a, b| cat.rules.n(ids[a], phi.0, ids[b]) > 0,
    ))
}

/// Graph for a twist-only family from its declared adjacency.
pub fn build_lie_tp_graph(data: &LieTwistData, phi: &str) -> Result<TensorProductGraph> {
    let edges = data.edges(phi)?;
    let channels = data
        .channels
        .iter()
        .enumerate()
        .map(|(i, name)| Channel { id: i, name: name.clone(), delta: data.delta(i), nu: data.signs[i] })
        .collect();
    let related = |a: usize, b: usize| edges.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b));
    let phi_name = if phi == "𝒜" { "A" } else { phi };
    Ok(graph_from_relation(data.name.clone(), data.rho.clone(), phi_name.to_string(), channels, related))
}

/// `(y + μ)/(1 + μ y)` for a twist ratio `y`; the constant −1 when `y = −1`.
pub fn ratio_from_twist(y: Complex64, mu: Complex64) -> Result<Complex64> {
    if (y + 1.0).norm() < DEGENERATE_TOL {
        return Ok(Complex64::new(-1.0, 0.0));
    }
    let den = 1.0 + mu * y;
    if den.norm() < 1e-14 {
        return Err(Error::Pole { mu, detail: format!("edge ratio denominator 1 + mu*y vanishes (y = {y})") });
    }
    Ok((y + mu) / den)
}

/// `A_b/A_a` demanded by the edge `a → b`.
pub fn edge_ratio(
    cat: &CategoryData,
    rho: ObjectLabel,
    a: ObjectLabel,
    b: ObjectLabel,
    mu: Complex64,
) -> Result<Complex64> {
    ratio_from_twist(twist_edge_ratio(cat, rho, a, b)?, mu)
}

/// The edge factor as a rational function of μ.
fn edge_factor(y: Complex64) -> Rational {
    if (y + 1.0).norm() < DEGENERATE_TOL {
        Rational { num: Poly::constant(Complex64::new(-1.0, 0.0)), den: Poly::one() }
    } else {
        Rational { num: Poly::linear(y, Complex64::new(1.0, 0.0)), den: Poly::linear(Complex64::new(1.0, 0.0), y) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanningTree {
    BreadthFirst,
    DepthFirst,
    /// Depth-first with a seeded random neighbour order.
    Shuffled(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolveVerdict {
    TreeUnique,
    CycleConsistent,
    Underdetermined { components: usize },
    Inconsistent,
}

impl SolveVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            SolveVerdict::TreeUnique => "TREE_UNIQUE",
            SolveVerdict::CycleConsistent => "CYCLE_CONSISTENT",
            SolveVerdict::Underdetermined { .. } => "UNDERDETERMINED",
            SolveVerdict::Inconsistent => "INCONSISTENT",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelAmplitude {
    pub label: String,
    #[serde(skip)]
    pub id: usize,
    pub num: Poly,
    pub den: Poly,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleCheck {
    /// Vertices around the cycle, starting from the tail of the closing edge.
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    /// Closing (non-tree) edge.
    pub closing_edge: [String; 2],
    pub residual: f64,
    pub samples: usize,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmplitudeSolution {
    pub family: String,
    pub rho: String,
    pub phi: String,
    pub verdict: SolveVerdict,
    pub reference: String,
    pub channels: Vec<ChannelAmplitude>,
    pub poles: Vec<Complex64>,
    pub edges: Vec<[String; 2]>,
    pub oriented: bool,
    pub cycles: Vec<CycleCheck>,
    #[serde(skip)]
    tree_factors: Vec<Rational>,
    #[serde(skip)]
    paths: Vec<Vec<usize>>,
}

pub fn solve_central(cat: &CategoryData, rho: ObjectLabel, phi: ObjectLabel) -> Result<AmplitudeSolution> {
    Ok(solve_graph(&build_tp_graph(cat, rho, phi)?, SpanningTree::BreadthFirst))
}

pub fn solve_graph(graph: &TensorProductGraph, strategy: SpanningTree) -> AmplitudeSolution {
    let n = graph.channels.len();
    // adjacency: (neighbour, edge index)
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(a, b)) in graph.edges.iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    for list in &mut adj {
        list.sort();
    }
    let mut rng = match strategy {
        SpanningTree::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    if let Some(rng) = rng.as_mut() {
        for list in &mut adj {
            list.shuffle(rng);
        }
    }

    let factor_for = |u: usize, v: usize, e: usize| -> Rational {
        let (a, b) = graph.edges[e];
        let f = edge_factor(graph.twist_ratio(a, b));
        if (a, b) == (u, v) {
            f
        } else {
            Rational { num: f.den, den: f.num }
        }
    };

    let mut t = TreeBuilder {
        visited: vec![false; n],
        parent: vec![None; n],
        paths: vec![Vec::new(); n],
        tree_factors: Vec::new(),
        amp: vec![Rational::one(); n],
        tree_edge: vec![false; graph.edges.len()],
    };

    let mut roots = vec![graph.reference()];
    roots.extend((0..n).filter(|&x| x != graph.reference()));
    let mut components = 0;
    for root in roots {
        if n == 0 || t.visited[root] {
            continue;
        }
        components += 1;
        t.visited[root] = true;
        match strategy {
            SpanningTree::BreadthFirst => {
                let mut queue = VecDeque::from([root]);
                while let Some(u) = queue.pop_front() {
                    for &(v, e) in &adj[u] {
                        if !t.visited[v] {
                            t.attach(u, v, e, factor_for(u, v, e));
                            queue.push_back(v);
                        }
                    }
                }
            }
            _ => {
                let mut stack = vec![(root, 0usize)];
                while let Some(top) = stack.last_mut() {
                    let (u, pos) = *top;
                    if pos < adj[u].len() {
                        top.1 += 1;
                        let (v, e) = adj[u][pos];
                        if !t.visited[v] {
                            t.attach(u, v, e, factor_for(u, v, e));
                            stack.push((v, 0));
                        }
                    } else {
                        stack.pop();
                    }
                }
            }
        }
    }
    let TreeBuilder { parent, paths, tree_factors, amp, tree_edge, .. } = t;

    let mut poles: Vec<Complex64> = Vec::new();
    for f in &tree_factors {
        if f.den.degree() == 1 {
            let root = -f.den.0[0] / f.den.0[1];
            if !poles.iter().any(|p| (p - root).norm() < 1e-12) {
                poles.push(root);
            }
        }
    }
    poles.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let name = |i: usize| graph.channels[i].name.clone();
    let mut cycles = Vec::new();
    let e_count = graph.edges.len();
    for (e, &(a, b)) in graph.edges.iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        let y = graph.twist_ratio(a, b);
        let f = edge_factor(y);
        let mut sampler = MuSampler::new(CYCLE_SEED);
        let mut all_poles = poles.clone();
        if f.den.degree() == 1 {
            all_poles.push(-f.den.0[0] / f.den.0[1]);
        }
        let n_samples = 2 * e_count + 1;
        let mut worst = 0.0f64;
        for _ in 0..n_samples {
            let mu = sampler.next_mu_avoiding(&all_poles);
            // cleared form: N_b D_a fden − N_a D_b fnum
            let t1 = amp[b].num.eval(mu) * amp[a].den.eval(mu) * f.den.eval(mu);
            let t2 = amp[a].num.eval(mu) * amp[b].den.eval(mu) * f.num.eval(mu);
            let scale = t1.norm().max(t2.norm()).max(f64::MIN_POSITIVE);
            worst = worst.max((t1 - t2).norm() / scale);
        }
        let (vertices, edges) = cycle_through(&parent, a, b, &name);
        cycles.push(CycleCheck {
            vertices,
            edges,
            closing_edge: [name(a), name(b)],
            residual: worst,
            samples: n_samples,
            consistent: worst < CYCLE_TOL,
        });
    }

    let verdict = if cycles.iter().any(|c| !c.consistent) {
        SolveVerdict::Inconsistent
    } else if components > 1 {
        SolveVerdict::Underdetermined { components }
    } else if !cycles.is_empty() {
        SolveVerdict::CycleConsistent
    } else {
        SolveVerdict::TreeUnique
    };

    let channels = (0..n)
        .map(|i| ChannelAmplitude {
            label: name(i),
            id: graph.channels[i].id,
            num: amp[i].num.clone(),
            den: amp[i].den.clone(),
        })
        .collect();
    AmplitudeSolution {
        family: graph.family.clone(),
        rho: graph.rho.clone(),
        phi: graph.phi.clone(),
        verdict,
        reference: if n > 0 { name(graph.reference()) } else { String::new() },
        channels,
        poles,
        edges: graph.edges.iter().map(|&(a, b)| [name(a), name(b)]).collect(),
        oriented: graph.oriented,
        cycles,
        tree_factors,
        paths,
    }
}

struct TreeBuilder {
    visited: Vec<bool>,
    parent: Vec<Option<(usize, usize)>>,
    paths: Vec<Vec<usize>>,
    tree_factors: Vec<Rational>,
    amp: Vec<Rational>,
    tree_edge: Vec<bool>,
}

impl TreeBuilder {
    fn attach(&mut self, u: usize, v: usize, e: usize, f: Rational) {
        self.visited[v] = true;
        self.tree_edge[e] = true;
        self.amp[v] = self.amp[u].mul(&f);
        let mut path = self.paths[u].clone();
        path.push(self.tree_factors.len());
        self.paths[v] = path;
        self.tree_factors.push(f);
        self.parent[v] = Some((u, e));
    }
}

/// Tree path `a → lca → b` followed by the closing edge back to `a`.
fn cycle_through(
    parent: &[Option<(usize, usize)>],
    a: usize,
    b: usize,
    name: &dyn Fn(usize) -> String,
) -> (Vec<String>, Vec<[String; 2]>) {
    let ancestors = |mut x: usize| {
        let mut v = vec![x];
        while let Some((p, _)) = parent[x] {
            v.push(p);
            x = p;
        }
        v
    };
    let up_a = ancestors(a);
    let up_b = ancestors(b);
    let lca = *up_a.iter().find(|x| up_b.contains(x)).unwrap_or(&a);
    let mut verts: Vec<usize> = up_a.iter().take_while(|&&x| x != lca).copied().collect();
    verts.push(lca);
    let tail: Vec<usize> = up_b.iter().take_while(|&&x| x != lca).copied().collect();
    verts.extend(tail.iter().rev());
    let mut edges: Vec<[String; 2]> = verts.windows(2).map(|w| [name(w[0]), name(w[1])]).collect();
    edges.push([name(b), name(a)]);
    (verts.into_iter().map(name).collect(), edges)
}

impl AmplitudeSolution {
    pub fn channel_index(&self, label: &str) -> Result<usize> {
        self.channels
            .iter()
            .position(|c| c.label == label)
            .ok_or_else(|| Error::Domain(format!("'{label}' is not a channel of this solution")))
    }

    pub fn channel_by_id(&self, id: usize) -> Option<usize> {
        self.channels.iter().position(|c| c.id == id)
    }

    pub fn amplitude_index(&self, i: usize, mu: Complex64) -> Result<Complex64> {
        let c = &self.channels[i];
        let den = c.den.eval(mu);
        let scale: f64 = c.den.0.iter().map(|x| x.norm()).sum::<f64>() * mu.norm().max(1.0).powi(c.den.degree() as i32);
        if den.norm() <= 1e-13 * scale {
            return Err(Error::Pole { mu, detail: format!("amplitude of channel {} is singular", c.label) });
        }
        Ok(c.num.eval(mu) / den)
    }

    /// `A_χ(μ)` in the solver normalisation (reference channel ≡ 1).
    pub fn amplitude_at(&self, chi: &str, mu: Complex64) -> Result<Complex64> {
        self.amplitude_index(self.channel_index(chi)?, mu)
    }

    /// `A_χ(μ) / A_ref(μ)` for any choice of reference channel.
    pub fn ratio_at(&self, chi: &str, relative_to: &str, mu: Complex64) -> Result<Complex64> {
        let den = self.amplitude_at(relative_to, mu)?;
        if den.norm() < 1e-300 {
            return Err(Error::Pole { mu, detail: format!("amplitude of {relative_to} vanishes") });
        }
        Ok(self.amplitude_at(chi, mu)? / den)
    }

    /// Amplitudes multiplied by the product of all tree-edge denominators:
    /// polynomials in μ with the same ratios.
    pub fn cleared(&self) -> Vec<Poly> {
        (0..self.channels.len())
            .map(|i| {
                let mut p = Poly::one();
                for (slot, f) in self.tree_factors.iter().enumerate() {
                    p = if self.paths[i].contains(&slot) { p.mul(&f.num) } else { p.mul(&f.den) };
                }
                p
            })
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.channels.iter().map(|c| c.num.degree().max(c.den.degree())).max().unwrap_or(0)
    }

    /// Copy with one channel's amplitude multiplied by `factor`.
    pub fn perturbed(&self, channel: usize, factor: Complex64) -> AmplitudeSolution {
        let mut s = self.clone();
        s.channels[channel].num = s.channels[channel].num.scale(factor);
        s
    }

    /// Replace every amplitude by a fixed complex constant (negative controls).
    pub fn with_constant_amplitudes(&self, values: &[Complex64]) -> AmplitudeSolution {
        let mut s = self.clone();
        for (c, v) in s.channels.iter_mut().zip(values) {
            c.num = Poly::constant(*v);
            c.den = Poly::one();
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serialises")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyRow {
    pub rho: String,
    pub phi: String,
    pub verdict: String,
    pub channels: usize,
    pub edges: usize,
    pub cycle_rank: usize,
    pub shape: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_cycle: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

fn classify_row(graph: &TensorProductGraph) -> ClassifyRow {
    let sol = solve_graph(graph, SpanningTree::BreadthFirst);
    let rank = graph.cycle_rank();
    let failed = sol.cycles.iter().find(|c| !c.consistent);
    ClassifyRow {
        rho: graph.rho.clone(),
        phi: graph.phi.clone(),
        verdict: sol.verdict.tag().to_string(),
        channels: graph.channels.len(),
        edges: graph.edges.len(),
        cycle_rank: rank,
        shape: match (rank, graph.components()) {
            (0, 1) => "tree".into(),
            (0, c) => format!("forest of {c}"),
            (r, _) => format!("{r} cycle(s)"),
        },
        failed_cycle: failed.map(|c| c.vertices.clone()),
        residual: sol.cycles.iter().map(|c| c.residual).reduce(f64::max),
    }
}

/// Every simple ρ and every φ ≠ 0 with ρ ∈ φ⊗ρ.
pub fn classify_pairs(cat: &CategoryData) -> Result<Vec<ClassifyRow>> {
    cat.twists()?;
    let mut rows = Vec::new();
    for rho in cat.objects() {
        for phi in cat.objects().skip(1) {
            if cat.rules.n(phi.0, rho.0, rho.0) == 0 {
                continue;
            }
            rows.push(classify_row(&build_tp_graph(cat, rho, phi)?));
        }
    }
    Ok(rows)
}

pub fn classify_lie(data: &LieTwistData) -> Result<Vec<ClassifyRow>> {
    data.phis().into_iter().map(|phi| Ok(classify_row(&build_lie_tp_graph(data, phi)?))).collect()
}
