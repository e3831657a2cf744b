//! Built-in category families.
//!
//! Full categories (fusion, dimensions, twists and F-symbols): su(2)_k, the
//! minimal-model family A_{k+1} and the Z_M Tambara-Yamagami categories.
//! Twist-only families (so(n)_k, sp(2m)_k, (G2)_k) carry just the channel
//! spins, signs and declared tensor-product graphs for the vector ρ.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::category::{compute_quantum_dims, CategoryData, FSymbolTable, FusionRules, LabelTable, TwistData};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    Su2K,
    MinimalA,
    TambaraYamagami,
    SoN,
    Sp2M,
    G2,
}

impl Family {
    pub fn key(self) -> &'static str {
        match self {
            Family::Su2K => "su2",
            Family::MinimalA => "minimal",
            Family::TambaraYamagami => "ty",
            Family::SoN => "so",
            Family::Sp2M => "sp",
            Family::G2 => "g2",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().as_str() {
            "su2" | "su2k" | "su(2)" => Ok(Family::Su2K),
            "minimal" | "minimal_a" | "a" => Ok(Family::MinimalA),
            "ty" | "tambara_yamagami" | "tambara-yamagami" => Ok(Family::TambaraYamagami),
            "so" | "so_n" | "son" => Ok(Family::SoN),
            "sp" | "sp_2m" | "sp2m" => Ok(Family::Sp2M),
            "g2" => Ok(Family::G2),
            _ => Err(Error::Domain(format!("unknown family '{s}'"))),
        }
    }

    pub fn all() -> [Family; 6] {
        [Family::Su2K, Family::MinimalA, Family::TambaraYamagami, Family::SoN, Family::Sp2M, Family::G2]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    /// Level k (unused for Tambara-Yamagami).
    pub k: i64,
    /// n for so(n), m for sp(2m), M for Tambara-Yamagami.
    pub rank: i64,
}

impl FamilySpec {
    pub fn su2(k: i64) -> Self {
        FamilySpec { family: Family::Su2K, k, rank: 0 }
    }
    pub fn minimal(k: i64) -> Self {
        FamilySpec { family: Family::MinimalA, k, rank: 0 }
    }
    pub fn ty(m: i64) -> Self {
        FamilySpec { family: Family::TambaraYamagami, k: 0, rank: m }
    }
    pub fn so(n: i64, k: i64) -> Self {
        FamilySpec { family: Family::SoN, k, rank: n }
    }
    pub fn sp(m: i64, k: i64) -> Self {
        FamilySpec { family: Family::Sp2M, k, rank: m }
    }
    pub fn g2(k: i64) -> Self {
        FamilySpec { family: Family::G2, k, rank: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Domain(format!("{}: {msg}", self.family.key())));
        match self.family {
            Family::TambaraYamagami if self.rank < 2 => bad("M must be >= 2"),
            Family::TambaraYamagami => Ok(()),
            _ if self.k < 1 => bad("level k must be >= 1"),
            Family::SoN if self.rank < 3 => bad("n must be >= 3"),
            Family::Sp2M if self.rank < 2 => bad("m must be >= 2"),
            _ => Ok(()),
        }
    }

    pub fn build(&self) -> Result<Built> {
        self.validate()?;
        Ok(match self.family {
            Family::Su2K => Built::Full(build_su2k(self.k)?),
            Family::MinimalA => Built::Full(build_minimal_a(self.k)?),
            Family::TambaraYamagami => Built::Full(build_tambara_yamagami(self.rank)?),
            _ => Built::TwistOnly(build_lie_twist_data(self)?),
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Su2K => write!(f, "su(2)_{}", self.k),
            Family::MinimalA => write!(f, "A_{}", self.k + 1),
            Family::TambaraYamagami => write!(f, "TY_{}", self.rank),
            Family::SoN => write!(f, "so({})_{}", self.rank, self.k),
            Family::Sp2M => write!(f, "sp({})_{}", 2 * self.rank, self.k),
            Family::G2 => write!(f, "(G2)_{}", self.k),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Built {
    Full(CategoryData),
    TwistOnly(LieTwistData),
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyInfo {
    pub family: &'static str,
    pub name: &'static str,
    pub params: &'static str,
    pub baxterisable: bool,
    pub representable: bool,
}

pub fn catalog_list() -> Vec<FamilyInfo> {
    let row =
        |family, name, params, representable| FamilyInfo { family, name, params, baxterisable: true, representable };
    vec![
        row("su2", "su(2)_k", "--level k (k >= 1)", true),
        row("minimal", "A_{k+1}", "--level k (k >= 1)", true),
        row("ty", "Z_M Tambara-Yamagami", "--M M (M >= 2)", true),
        row("so", "so(n)_k, rho = V", "--n n (n >= 3) --level k (k >= 1)", false),
        row("sp", "sp(2m)_k, rho = V", "--m m (m >= 2) --level k (k >= 1)", false),
        row("g2", "(G2)_k, rho = V", "--level k (k >= 1)", false),
    ]
}

fn spin_name(a2: usize) -> String {
    if a2 % 2 == 0 {
        (a2 / 2).to_string()
    } else {
        format!("{a2}/2")
    }
}

fn su2_admissible(k: usize, a: usize, b: usize, c: usize) -> bool {
    (a + b + c) % 2 == 0 && a.abs_diff(b) <= c && c <= a + b && a + b + c <= 2 * k
}

/// Quantum integers `[n] = sin(nπ/(k+2)) / sin(π/(k+2))` and their factorials.
struct QNumbers {
    fact: Vec<f64>,
}

impl QNumbers {
    fn new(k: usize, max: usize) -> Self {
        let h = (k + 2) as f64;
        let s1 = (PI / h).sin();
        let mut fact = vec![1.0; max + 1];
        for n in 1..=max {
            fact[n] = fact[n - 1] * (n as f64 * PI / h).sin() / s1;
        }
        QNumbers { fact }
    }

    fn qint(&self, n: usize) -> f64 {
        self.fact[n] / self.fact[n - 1]
    }

    /// Triangle coefficient for doubled spins.
    fn triangle(&self, a: usize, b: usize, c: usize) -> f64 {
        let f = &self.fact;
        (f[(a + b - c) / 2] * f[(a + c - b) / 2] * f[(b + c - a) / 2] / f[(a + b + c) / 2 + 1]).sqrt()
    }

    /// Quantum 6j symbol `{a b e; c d f}` by the Racah sum (doubled spins).
    fn sixj(&self, a: usize, b: usize, e: usize, c: usize, d: usize, f: usize) -> f64 {
        let t = [(a + b + e) / 2, (c + d + e) / 2, (a + f + d) / 2, (c + b + f) / 2];
        let p = [(a + b + c + d) / 2, (b + d + e + f) / 2, (a + c + e + f) / 2];
        let lo = *t.iter().max().unwrap();
        let hi = *p.iter().min().unwrap();
        let fa = &self.fact;
        let mut sum = 0.0;
        for z in lo..=hi {
            let mut den = 1.0;
            for ti in t {
                den *= fa[z - ti];
            }
            for pi in p {
                den *= fa[pi - z];
            }
            let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * fa[z + 1] / den;
        }
        self.triangle(a, b, e) * self.triangle(c, d, e) * self.triangle(a, f, d) * self.triangle(c, b, f) * sum
    }
}

/// Vertex gauge `i^{mn+np+pm}` with `m, n, p` the three pair-spins of the vertex.
fn vertex_gauge(a: usize, b: usize, c: usize) -> Complex64 {
    let m = (a + b - c) / 2;
    let n = (b + c - a) / 2;
    let p = (a + c - b) / 2;
    match (m * n + n * p + p * m) % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn su2_fusion(k: usize) -> (LabelTable, FusionRules) {
    let n = k + 1;
    let labels = LabelTable::new((0..n).map(spin_name).collect());
    let mut rules = FusionRules::new(n, (0..n).collect());
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if su2_admissible(k, a, b, c) {
                    rules.set(a, b, c, 1);
                }
            }
        }
    }
    (labels, rules)
}

/// F-symbols for the su(2)_k fusion rules.
///
/// Built from the real quantum 6j symbol, then multiplied by the 3-cocycle sign
/// `(-1)^{p(a)p(b)p(c)}` (p = parity of the doubled spin) and conjugated by the
/// vertex gauge above.  The textbook 6j table has `F^{½½½}_½(0,0) = -1/d`; the
/// cocycle and gauge make the loop identities hold with positive signs, which
/// is what the pre-cancellation identity uses.  The result is still unitary and
/// satisfies the pentagon.
fn su2_fsymbols(k: usize, rules: &FusionRules) -> FSymbolTable {
    let n = k + 1;
    let q = QNumbers::new(k, 2 * k + 2);
    let mut table = FSymbolTable::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if (a + b + c + d) % 2 != 0 {
                        continue;
                    }
                    for e in rules.product(a, b) {
                        if rules.n(e, c, d) == 0 {
                            continue;
                        }
                        for f in rules.product(b, c) {
                            if rules.n(a, f, d) == 0 {
                                continue;
                            }
                            let sign = if ((a + b + c + d) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                            let mut v = sign * (q.qint(e + 1) * q.qint(f + 1)).sqrt() * q.sixj(a, b, e, c, d, f);
                            if a % 2 == 1 && b % 2 == 1 && c % 2 == 1 {
                                v = -v;
                            }
                            let g = vertex_gauge(a, b, e) * vertex_gauge(e, c, d)
                                / (vertex_gauge(b, c, f) * vertex_gauge(a, f, d));
                            table.insert(a, b, c, d, e, f, g * v);
                        }
                    }
                }
            }
        }
    }
    table
}

fn su2_like(
    k: i64,
    name: String,
    delta: impl Fn(usize) -> Rational64,
    nu: impl Fn(usize, usize, usize) -> i8,
) -> Result<CategoryData> {
    if k < 1 {
        return Err(Error::Domain("level k must be >= 1".into()));
    }
    let k = k as usize;
    let (labels, rules) = su2_fusion(k);
    let dims = compute_quantum_dims(&rules)?;
    let n = k + 1;
    let mut nu_table = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if rules.n(b, c, a) > 0 {
                    nu_table.insert((a, b, c), nu(a, b, c));
                }
            }
        }
    }
    let twists = TwistData { delta: (0..n).map(delta).collect(), nu: nu_table, placeholder_spins: Vec::new() };
    let f = su2_fsymbols(k, &rules);
    Ok(CategoryData { name, labels, rules, dims, twists: Some(twists), f: Some(f) })
}

/// su(2)_k: spins 0, ½, …, k/2 with `Δ_a = a(a+1)/(k+2)` and `ν_a^{bc} = (−1)^{b+c−a}`.
pub fn build_su2k(k: i64) -> Result<CategoryData> {
    let kk = k;
    su2_like(
        k,
        format!("su(2)_{k}"),
        |a2| Rational64::new((a2 * (a2 + 2)) as i64, 4 * (kk + 2)),
        |a2, b2, c2| if ((b2 + c2 - a2) / 2) % 2 == 0 { 1 } else { -1 },
    )
}

/// A_{k+1}: su(2)_k fusion and F-symbols, `Δ_a = a² − a(a+1)/(k+2)`, all `ν = +1`.
pub fn build_minimal_a(k: i64) -> Result<CategoryData> {
    let kk = k;
    su2_like(
        k,
        format!("A_{}", k + 1),
        |a2| {
            let a2 = a2 as i64;
            Rational64::new(a2 * a2, 4) - Rational64::new(a2 * (a2 + 2), 4 * (kk + 2))
        },
        |_, _, _| 1,
    )
}

/// Z_M Tambara-Yamagami with symmetric bicharacter `χ(a,b) = ω^{ab}` and
/// Frobenius-Schur indicator +1.  Objects `0..M−1` then `X` (id M).
pub fn build_tambara_yamagami(m: i64) -> Result<CategoryData> {
    if m < 2 {
        return Err(Error::Domain("M must be >= 2".into()));
    }
    let mu = m as usize;
    let x = mu;
    let n = mu + 1;
    let mut names: Vec<String> = (0..mu).map(|a| a.to_string()).collect();
    names.push("X".into());
    let labels = LabelTable::new(names);
    let dual: Vec<usize> = (0..n).map(|a| if a == x { x } else { (mu - a) % mu }).collect();
    let mut rules = FusionRules::new(n, dual);
    for a in 0..mu {
        for b in 0..mu {
            rules.set(a, b, (a + b) % mu, 1);
        }
        rules.set(a, x, x, 1);
        rules.set(x, a, x, 1);
        rules.set(x, x, a, 1);
    }
    let dims = compute_quantum_dims(&rules)?;

    let omega = |p: usize| Complex64::from_polar(1.0, 2.0 * PI * ((p % mu) as f64) / m as f64);
    let inv_sqrt = 1.0 / (m as f64).sqrt();
    let mut f = FSymbolTable::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for e in rules.product(a, b) {
                        if rules.n(e, c, d) == 0 {
                            continue;
                        }
                        for g in rules.product(b, c) {
                            if rules.n(a, g, d) == 0 {
                                continue;
                            }
                            let v = match (a == x, b == x, c == x) {
                                (true, true, true) => omega(e * g) * inv_sqrt,
                                (false, true, false) => omega(mu - (a * c) % mu),
                                (true, false, true) => omega(mu - (b * d) % mu),
                                _ => Complex64::new(1.0, 0.0),
                            };
                            f.insert(a, b, c, d, e, g, v);
                        }
                    }
                }
            }
        }
    }

    let mut nu = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if rules.n(b, c, a) > 0 {
                    nu.insert((a, b, c), 1);
                }
            }
        }
    }
    let mut delta: Vec<Rational64> = (0..mu).map(|a| Rational64::new((a * (mu - a)) as i64, m)).collect();
    delta.push(Rational64::new(1, 16));
    let twists = TwistData { delta, nu, placeholder_spins: vec![x] };
    Ok(CategoryData { name: format!("TY_{m}"), labels, rules, dims, twists: Some(twists), f: Some(f) })
}

/// Channel data for the vector representation of a Lie-type category:
/// spins from quadratic Casimirs, `Δ = C/(k + h)`, and declared graphs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LieTwistData {
    pub spec: FamilySpec,
    pub name: String,
    pub dual_coxeter: i64,
    pub rho: String,
    pub channels: Vec<String>,
    #[serde(serialize_with = "ser_rationals")]
    pub casimirs: Vec<Rational64>,
    /// `ν_χ^{VV}` per channel.
    pub signs: Vec<i8>,
    /// For each admissible φ, the declared edges (channel indices).
    pub tp_adjacency: Vec<(String, Vec<(usize, usize)>)>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&format!("{}/{}", x.numer(), x.denom()))?;
    }
    seq.end()
}

impl LieTwistData {
    pub fn q_denominator(&self) -> i64 {
        self.spec.k + self.dual_coxeter
    }

    /// `q = exp(iπ/(k + h))`.
    pub fn q(&self) -> Complex64 {
        Complex64::from_polar(1.0, PI / self.q_denominator() as f64)
    }

    pub fn delta(&self, channel: usize) -> Rational64 {
        self.casimirs[channel] / Rational64::from_integer(self.q_denominator())
    }

    pub fn channel(&self, name: &str) -> Result<usize> {
        let alias = match name {
            "𝒜" | "adj" => "A",
            other => other,
        };
        self.channels
            .iter()
            .position(|c| c == alias)
            .ok_or_else(|| Error::Domain(format!("{} has no channel '{name}'", self.name)))
    }

    pub fn phis(&self) -> Vec<&str> {
        self.tp_adjacency.iter().map(|(p, _)| p.as_str()).collect()
    }

    pub fn edges(&self, phi: &str) -> Result<&[(usize, usize)]> {
        let phi = if phi == "𝒜" { "A" } else { phi };
        self.tp_adjacency.iter().find(|(p, _)| p == phi).map(|(_, e)| e.as_slice()).ok_or_else(|| {
            Error::Domain(format!(
                "{}: no declared tensor-product graph for phi = {phi} (declared: {})",
                self.name,
                self.phis().join(", ")
            ))
        })
    }
}

pub fn build_lie_twist_data(spec: &FamilySpec) -> Result<LieTwistData> {
    spec.validate()?;
    let r = |p: i64, q: i64| Rational64::new(p, q);
    let strs = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    // channel order: 0, A, S (and V for G2)
    let line_graphs = vec![("A".to_string(), vec![(0, 1), (1, 2)]), ("S".to_string(), vec![(0, 2), (2, 1)])];
    match spec.family {
        Family::SoN => {
            let n = spec.rank;
            Ok(LieTwistData {
                spec: *spec,
                name: spec.to_string(),
                dual_coxeter: n - 2,
                rho: "V".into(),
                channels: strs(&["0", "A", "S"]),
                casimirs: vec![r(0, 1), r(n - 2, 1), r(n, 1)],
                signs: vec![1, -1, 1],
                tp_adjacency: line_graphs,
            })
        }
        Family::Sp2M => {
            let m = spec.rank;
            Ok(LieTwistData {
                spec: *spec,
                name: spec.to_string(),
                dual_coxeter: m + 1,
                rho: "V".into(),
                channels: strs(&["0", "A", "S"]),
                casimirs: vec![r(0, 1), r(m, 1), r(m + 1, 1)],
                signs: vec![-1, -1, 1],
                tp_adjacency: line_graphs,
            })
        }
        Family::G2 => Ok(LieTwistData {
            spec: *spec,
            name: spec.to_string(),
            dual_coxeter: 4,
            rho: "V".into(),
            channels: strs(&["0", "A", "S", "V"]),
            casimirs: vec![r(0, 1), r(4, 1), r(14, 3), r(2, 1)],
            signs: vec![1, -1, 1, -1],
            tp_adjacency: vec![("A".to_string(), vec![(0, 1), (1, 2), (2, 3)])],
        }),
        _ => Err(Error::Capability(format!("{} is not a twist-only family", spec.family.key()))),
    }
}

/// The channel conventionally used as normalisation for the catalog examples, if any.
pub fn conventional_reference(spec: &FamilySpec, rho: &str, phi: &str) -> Option<&'static str> {
    match (spec.family, rho, phi) {
        (Family::Su2K | Family::MinimalA, "1/2", "1") => Some("1"),
        (Family::SoN | Family::Sp2M, _, "A") => Some("A"),
        (Family::SoN | Family::Sp2M, _, "S") => Some("S"),
        (Family::G2, _, "A") => Some("A"),
        (Family::TambaraYamagami, "X", _) => Some("0"),
        _ => None,
    }
}
