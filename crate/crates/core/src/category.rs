//! Fusion and braided-fusion category data, with exhaustive axiom checks.
//!
//! F-symbols use the standard convention: `F^{abc}_d(e, f)` is the coefficient
//! of the tree `(a (b c)_f)_d` in the expansion of `((a b)_e c)_d`.  The
//! bracket notation `F_{tt'}[r s; a b]` is the same number as `F^{a r s}_b(t, t')`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::report::{Check, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ObjectLabel(pub usize);

impl ObjectLabel {
    pub const IDENTITY: ObjectLabel = ObjectLabel(0);

    pub fn id(self) -> usize {
        self.0
    }
}

/// Display names for the dense ids `0..n`.  Half-integer spins are stored
/// doubled in the ids and rendered as "1/2", "3/2", ...
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelTable {
    names: Vec<String>,
}

impl LabelTable {
    pub fn new(names: Vec<String>) -> Self {
        LabelTable { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, a: ObjectLabel) -> &str {
        &self.names[a.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Accepts the display name, or any spelling of the same number
    /// ("0.5" for "1/2", "2/2" for "1").
    pub fn parse(&self, s: &str) -> Result<ObjectLabel> {
        let s = s.trim();
        if let Some(i) = self.names.iter().position(|n| n == s) {
            return Ok(ObjectLabel(i));
        }
        if let Some(v) = numeric_value(s) {
            if let Some(i) = self.names.iter().position(|n| numeric_value(n).is_some_and(|w| (w - v).abs() < 1e-12)) {
                return Ok(ObjectLabel(i));
            }
        }
        domain(format!("unknown object label '{s}' (known: {})", self.names.join(", ")))
    }
}

fn numeric_value(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().ok()?;
            let q: f64 = q.trim().parse().ok()?;
            (q != 0.0).then(|| p / q)
        }
        None => s.parse().ok(),
    }
}

/// Multiplicity-free fusion rules `N_{ab}^c ∈ {0, 1}` with a duality map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRules {
    n: usize,
    table: Vec<u8>,
    dual: Vec<usize>,
}

impl FusionRules {
    pub fn new(n: usize, dual: Vec<usize>) -> Self {
        assert_eq!(dual.len(), n);
        FusionRules { n, table: vec![0; n * n * n], dual }
    }

    pub fn n_objects(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn n(&self, a: usize, b: usize, c: usize) -> u8 {
        self.table[(a * self.n + b) * self.n + c]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: u8) {
        let n = self.n;
        self.table[(a * n + b) * n + c] = v;
    }

    #[inline]
    pub fn dual(&self, a: usize) -> usize {
        self.dual[a]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    /// Sorted list of `c` with `N_{ab}^c > 0`.
    pub fn product(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.n).filter(|&c| self.n(a, b, c) > 0).collect()
    }

    pub fn is_self_dual(&self) -> bool {
        (0..self.n).all(|a| self.dual[a] == a)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumDims {
    pub d: Vec<f64>,
}

impl QuantumDims {
    pub fn get(&self, a: usize) -> f64 {
        self.d[a]
    }
}

/// Topological spins (exact) and the signs `ν_a^{bc}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistData {
    pub delta: Vec<Rational64>,
    /// `ν_a^{bc}` keyed by `(a, b, c)`; present exactly where `N_{bc}^a ≠ 0`.
    pub nu: BTreeMap<(usize, usize, usize), i8>,
    /// Objects whose spin is a stored placeholder that no solver path reads.
    pub placeholder_spins: Vec<usize>,
}

impl TwistData {
    pub fn nu(&self, a: usize, b: usize, c: usize) -> Option<i8> {
        self.nu.get(&(a, b, c)).copied()
    }
}

/// `exp(iπ x)` for an exact rational `x`, reduced mod 2 before going to floats.
pub fn rational_phase(x: Rational64) -> Complex64 {
    let two = Rational64::from_integer(2);
    let mut r = x % two;
    if r.is_negative() {
        r += two;
    }
    let angle = PI * (*r.numer() as f64) / (*r.denom() as f64);
    Complex64::from_polar(1.0, angle)
}

pub type FKey = [u16; 6];

/// Sparse F-symbol table keyed in the standard order `(a, b, c, d, e, f)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FSymbolTable {
    entries: HashMap<FKey, Complex64>,
}

impl FSymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    fn key(a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> FKey {
        [a as u16, b as u16, c as u16, d as u16, e as u16, f as u16]
    }

    pub fn insert(&mut self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize, v: Complex64) {
        self.entries.insert(Self::key(a, b, c, d, e, f), v);
    }

    /// `F^{abc}_d(e, f)`; zero for inadmissible or absent entries.
    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Complex64 {
        self.entries.get(&Self::key(a, b, c, d, e, f)).copied().unwrap_or_else(Complex64::zero)
    }

    /// Bracket notation `F_{tt'}[r s; a b]`.
    pub fn bracket(&self, t: usize, tp: usize, r: usize, s: usize, a: usize, b: usize) -> Complex64 {
        self.get(a, r, s, b, t, tp)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries sorted by key, for deterministic export.
    pub fn sorted_entries(&self) -> Vec<(FKey, Complex64)> {
        let mut v: Vec<_> = self.entries.iter().map(|(k, v)| (*k, *v)).collect();
        v.sort_by_key(|e| e.0);
        v
    }

    pub fn entry_mut(&mut self, key: FKey) -> Option<&mut Complex64> {
        self.entries.get_mut(&key)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capabilities {
    pub baxterisable: bool,
    pub representable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CategoryData {
    pub name: String,
    pub labels: LabelTable,
    pub rules: FusionRules,
    pub dims: QuantumDims,
    pub twists: Option<TwistData>,
    pub f: Option<FSymbolTable>,
}

impl CategoryData {
    pub fn n_objects(&self) -> usize {
        self.rules.n_objects()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectLabel> {
        (0..self.n_objects()).map(ObjectLabel)
    }

    pub fn capabilities(&self) -> Capabilities {
        let baxterisable = self.twists.is_some();
        Capabilities { baxterisable, representable: baxterisable && self.f.is_some() }
    }

    pub fn label(&self, name: &str) -> Result<ObjectLabel> {
        self.labels.parse(name)
    }

    pub fn name_of(&self, a: ObjectLabel) -> &str {
        self.labels.name(a)
    }

    pub fn check_label(&self, a: ObjectLabel) -> Result<()> {
        if a.0 < self.n_objects() {
            Ok(())
        } else {
            domain(format!("label id {} out of range 0..{}", a.0, self.n_objects()))
        }
    }

    #[inline]
    pub fn d(&self, a: usize) -> f64 {
        self.dims.d[a]
    }

    pub fn twists(&self) -> Result<&TwistData> {
        self.twists.as_ref().ok_or_else(|| Error::Capability(format!("{} carries no twist data", self.name)))
    }

    pub fn fsym(&self) -> Result<&FSymbolTable> {
        if !self.capabilities().representable {
            return Err(Error::Capability(format!("{} carries no F-symbols", self.name)));
        }
        Ok(self.f.as_ref().expect("representable implies F"))
    }
}

pub fn fusion_product(cat: &CategoryData, a: ObjectLabel, b: ObjectLabel) -> Result<Vec<ObjectLabel>> {
    cat.check_label(a)?;
    cat.check_label(b)?;
    Ok(cat.rules.product(a.0, b.0).into_iter().map(ObjectLabel).collect())
}

/// The dimension vector is the Perron vector of `Σ_a N̂_a`, which has strictly
/// positive entries for any fusion ring; `d_a` is then read off with `d_0 = 1`.
pub fn compute_quantum_dims(rules: &FusionRules) -> Result<QuantumDims> {
    let ring = check_fusion_ring(rules);
    if let Some(bad) = ring.checks.iter().find(|c| !c.passed()) {
        return Err(Error::Axiom(format!("{} fails: {}", bad.check, bad.detail.clone().unwrap_or_default())));
    }
    let n = rules.n_objects();
    if n == 0 {
        return Err(Error::Axiom("empty label set".into()));
    }
    let mut s = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                s[b * n + c] += rules.n(a, b, c) as f64;
            }
        }
    }
    let mut v = vec![1.0; n];
    for _ in 0..100_000 {
        let mut w = vec![0.0; n];
        for b in 0..n {
            for c in 0..n {
                w[b] += s[b * n + c] * v[c];
            }
        }
        let norm = w.iter().cloned().fold(0.0, f64::max);
        w.iter_mut().for_each(|x| *x /= norm);
        let change = w.iter().zip(&v).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        v = w;
        if change < 1e-16 {
            break;
        }
    }
    let v0 = v[0];
    let mut d: Vec<f64> = v.iter().map(|x| x / v0).collect();
    d[0] = 1.0;
    // Symmetrise over duals so d_a = d_ā holds bit-exactly.
    for a in 0..n {
        let b = rules.dual(a);
        if b > a {
            let m = 0.5 * (d[a] + d[b]);
            d[a] = m;
            d[b] = m;
        }
    }
    Ok(QuantumDims { d })
}

pub fn check_fusion_ring(rules: &FusionRules) -> VerificationReport {
    let n = rules.n_objects();
    let mut report = VerificationReport::new();
    let fam = "fusion-ring";

    let mut bad = None;
    'id: for a in 0..n {
        for b in 0..n {
            let want = u8::from(a == b);
            if rules.n(a, 0, b) != want || rules.n(0, a, b) != want {
                bad = Some(format!("N_(a0)^b with a={a}, b={b}"));
                break 'id;
            }
        }
    }
    report.push(flag_check("identity", fam, bad));

    let mut bad = None;
    'comm: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if rules.n(a, b, c) != rules.n(b, a, c) {
                    bad = Some(format!("(a,b,c)=({a},{b},{c})"));
                    break 'comm;
                }
            }
        }
    }
    report.push(flag_check("commutativity", fam, bad));

    let mut bad = None;
    'dual: for a in 0..n {
        let ad = rules.dual(a);
        if ad >= n || rules.dual(ad) != a {
            bad = Some(format!("dual map not an involution at {a}"));
            break;
        }
        for b in 0..n {
            if rules.n(a, b, 0) != u8::from(b == ad) {
                bad = Some(format!("N_(ab)^0 with a={a}, b={b}"));
                break 'dual;
            }
        }
    }
    report.push(flag_check("duality", fam, bad));

    let mut bad = None;
    'assoc: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let lhs: u32 = (0..n).map(|e| rules.n(a, b, e) as u32 * rules.n(e, c, d) as u32).sum();
                    let rhs: u32 = (0..n).map(|f| rules.n(b, c, f) as u32 * rules.n(a, f, d) as u32).sum();
                    if lhs != rhs {
                        bad = Some(format!("(a,b,c,d)=({a},{b},{c},{d}): {lhs} != {rhs}"));
                        break 'assoc;
                    }
                }
            }
        }
    }
    report.push(flag_check("associativity", fam, bad));
    report
}

fn flag_check(name: &str, family: &str, counterexample: Option<String>) -> Check {
    match counterexample {
        None => Check::new(name, family, 0.0, 0.5),
        Some(c) => Check::new(name, family, 1.0, 0.5).detail(c),
    }
}

/// Dimension consistency: `d_a d_b = Σ_c N_{ab}^c d_c`, `d_a = d_ā`, `d_0 = 1`.
pub fn check_quantum_dims(cat: &CategoryData, tol: f64) -> VerificationReport {
    let n = cat.n_objects();
    let mut worst = 0.0f64;
    let mut at = None;
    for a in 0..n {
        for b in 0..n {
            let sum: f64 = (0..n).map(|c| cat.rules.n(a, b, c) as f64 * cat.d(c)).sum();
            let r = (cat.d(a) * cat.d(b) - sum).abs();
            if r > worst {
                worst = r;
                at = Some(format!("(a,b)=({},{})", cat.labels.names()[a], cat.labels.names()[b]));
            }
        }
        let r = (cat.d(a) - cat.d(cat.rules.dual(a))).abs();
        if r > worst {
            worst = r;
            at = Some(format!("d_a != d_abar at {}", cat.labels.names()[a]));
        }
    }
    worst = worst.max((cat.d(0) - 1.0).abs());
    let mut c = Check::new("dabc", &cat.name, worst, tol).samples(n * n);
    if let Some(at) = at {
        c = c.detail(at);
    }
    let mut report = VerificationReport::new();
    report.push(c);
    report
}

/// `Ω_a^{bc} = ν_a^{bc} exp(iπ(Δ_b + Δ_c − Δ_a))`.
pub fn twist_factor(cat: &CategoryData, a: ObjectLabel, b: ObjectLabel, c: ObjectLabel) -> Result<Complex64> {
    for x in [a, b, c] {
        cat.check_label(x)?;
    }
    let tw = cat.twists()?;
    if cat.rules.n(b.0, c.0, a.0) == 0 {
        return domain(format!(
            "inadmissible triple: {} not in {} x {}",
            cat.name_of(a),
            cat.name_of(b),
            cat.name_of(c)
        ));
    }
    let nu = tw.nu(a.0, b.0, c.0).ok_or_else(|| {
        Error::Domain(format!("no nu entry for ({}, {}, {})", cat.name_of(a), cat.name_of(b), cat.name_of(c)))
    })?;
    let x = tw.delta[b.0] + tw.delta[c.0] - tw.delta[a.0];
    Ok(rational_phase(x) * nu as f64)
}

/// `Ω_ρ^{ρb} / Ω_ρ^{ρa}`, in its gauge-free form `ν_a^{ρρ} ν_b^{ρρ} exp(iπ(Δ_b − Δ_a))`.
pub fn twist_edge_ratio(cat: &CategoryData, rho: ObjectLabel, a: ObjectLabel, b: ObjectLabel) -> Result<Complex64> {
    for x in [rho, a, b] {
        cat.check_label(x)?;
    }
    let tw = cat.twists()?;
    let nu = |x: ObjectLabel| {
        tw.nu(x.0, rho.0, rho.0).ok_or_else(|| {
            Error::Domain(format!("{} is not a channel of {} x {}", cat.name_of(x), cat.name_of(rho), cat.name_of(rho)))
        })
    };
    let sign = nu(a)? * nu(b)?;
    Ok(rational_phase(tw.delta[b.0] - tw.delta[a.0]) * sign as f64)
}

/// `Δ_0 = 0`, `ν` support equals the fusion support, the identity for
/// `ν_0^{cc}`, and `|Ω| = 1` on every admissible triple.
pub fn check_twist_data(cat: &CategoryData, tol: f64) -> Result<VerificationReport> {
    let tw = cat.twists()?;
    let n = cat.n_objects();
    let mut report = VerificationReport::new();

    let mut support = None;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let has = tw.nu(a, b, c).is_some();
                if has != (cat.rules.n(b, c, a) > 0) {
                    support.get_or_insert_with(|| format!("nu support mismatch at ({a},{b},{c})"));
                }
                if let Some(s) = tw.nu(a, b, c) {
                    if s != 1 && s != -1 {
                        support.get_or_insert_with(|| format!("nu not a sign at ({a},{b},{c})"));
                    }
                }
            }
        }
    }
    if !tw.delta[0].is_zero() {
        support.get_or_insert_with(|| "Delta_0 != 0".into());
    }
    report.push(flag_check("twist-support", &cat.name, support).param("n_objects", n));

    let mut bad = None;
    let mut count = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if let (Some(lhs), Some(x), Some(y)) = (tw.nu(0, c, c), tw.nu(a, b, c), tw.nu(b, a, c)) {
                    count += 1;
                    if lhs != x * y {
                        bad.get_or_insert_with(|| format!("(a,b,c)=({a},{b},{c})"));
                    }
                }
            }
        }
    }
    report.push(flag_check("nuid", &cat.name, bad).samples(count));

    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if cat.rules.n(b, c, a) > 0 {
                    let w = twist_factor(cat, ObjectLabel(a), ObjectLabel(b), ObjectLabel(c))?;
                    worst = worst.max((w.norm() - 1.0).abs());
                }
            }
        }
    }
    report.push(Check::new("twist-unimodular", &cat.name, worst, tol));
    Ok(report)
}

struct Worst {
    value: f64,
    at: Option<String>,
    count: usize,
}

impl Worst {
    fn new() -> Self {
        Worst { value: 0.0, at: None, count: 0 }
    }

    fn see(&mut self, r: f64, at: impl FnOnce() -> String) {
        self.count += 1;
        if r > self.value || r.is_nan() {
            self.value = if r.is_nan() { f64::INFINITY } else { r };
            self.at = Some(at());
        }
    }

    fn into_check(self, name: &str, family: &str, tol: f64) -> Check {
        let mut c = Check::new(name, family, self.value, tol).samples(self.count);
        if let Some(at) = self.at {
            c = c.detail(at);
        }
        c
    }
}

/// Pentagon, F0 special values, the rotation identity and unitarity, each
/// exhaustively over admissible label tuples.
pub fn check_f_identities(cat: &CategoryData, tol: f64) -> Result<VerificationReport> {
    let f = cat.fsym()?;
    let n = cat.n_objects();
    let r = &cat.rules;
    let nm = |a: usize| cat.labels.names()[a].clone();
    let mut report = VerificationReport::new();

    // (F^{fcd}_e)_{gl} (F^{abl}_e)_{fk} = Σ_h (F^{abc}_g)_{fh} (F^{ahd}_e)_{gk} (F^{bcd}_k)_{hl}
    let mut pent = Worst::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for fl in r.product(a, b) {
                        for g in r.product(fl, c) {
                            for e in r.product(g, d) {
                                for l in r.product(c, d) {
                                    for k in r.product(b, l) {
                                        let lhs = f.get(fl, c, d, e, g, l) * f.get(a, b, l, e, fl, k);
                                        let rhs: Complex64 = (0..n)
                                            .map(|h| {
                                                f.get(a, b, c, g, fl, h)
                                                    * f.get(a, h, d, e, g, k)
                                                    * f.get(b, c, d, k, h, l)
                                            })
                                            .sum();
                                        pent.see((lhs - rhs).norm(), || {
                                            format!(
                                                "(a,b,c,d,e,f,g,k,l)=({},{},{},{},{},{},{},{},{})",
                                                nm(a),
                                                nm(b),
                                                nm(c),
                                                nm(d),
                                                nm(e),
                                                nm(fl),
                                                nm(g),
                                                nm(k),
                                                nm(l)
                                            )
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report.push(pent.into_check("pentagon", &cat.name, tol));

    let mut f0 = Worst::new();
    for a in 0..n {
        for rr in 0..n {
            for b in r.product(a, rr) {
                // F^{a r 0}_b(t, t') = δ_{tb} δ_{t'r}
                for t in 0..n {
                    for tp in 0..n {
                        let want = if t == b && tp == rr { 1.0 } else { 0.0 };
                        let v = f.get(a, rr, 0, b, t, tp);
                        f0.see((v - want).norm(), || {
                            format!("F^(a r 0)_b, (a,r,b,t,t')=({},{},{},{},{})", nm(a), nm(rr), nm(b), nm(t), nm(tp))
                        });
                    }
                }
            }
            let rb = r.dual(rr);
            for s in r.product(a, rr) {
                // F^{a r r̄}_a(s, 0) = sqrt(d_s / (d_a d_r))
                let want = (cat.d(s) / (cat.d(a) * cat.d(rr))).sqrt();
                let v = f.get(a, rr, rb, a, s, 0);
                f0.see((v - want).norm(), || format!("F^(a r rbar)_a(s,0), (a,r,s)=({},{},{})", nm(a), nm(rr), nm(s)));
            }
        }
        let ab = r.dual(a);
        for s in r.product(ab, a) {
            let want = (cat.d(s) / (cat.d(a) * cat.d(a))).sqrt();
            let v = f.get(a, ab, a, a, 0, s);
            f0.see((v - want).norm(), || format!("F^(a abar a)_a(0,s), (a,s)=({},{})", nm(a), nm(s)));
        }
    }
    report.push(f0.into_check("f0", &cat.name, tol));

    // Three rotations of one tetrahedral evaluation must agree:
    //   sqrt(dα dγ / db) F^{aγα}_c(β, b)
    //   sqrt(dα dβ / dc) F^{β̄ab}_α(γ̄, c)
    //   sqrt(dγ dβ / da) F^{γb̄c}_β(ᾱ, a)
    let mut rot = Worst::new();
    let dd = |x: usize| cat.d(x);
    for a in 0..n {
        for g in 0..n {
            for beta in r.product(a, g) {
                for al in 0..n {
                    for b in r.product(g, al) {
                        for c in r.product(beta, al) {
                            if r.n(a, b, c) == 0 {
                                continue;
                            }
                            let x = f.get(a, g, al, c, beta, b) * (dd(al) * dd(g) / dd(b)).sqrt();
                            let y = f.get(r.dual(beta), a, b, al, r.dual(g), c) * (dd(al) * dd(beta) / dd(c)).sqrt();
                            let z = f.get(g, r.dual(b), c, beta, r.dual(al), a) * (dd(g) * dd(beta) / dd(a)).sqrt();
                            rot.see((x - y).norm().max((x - z).norm()), || {
                                format!(
                                    "(a,b,c,alpha,beta,gamma)=({},{},{},{},{},{})",
                                    nm(a),
                                    nm(b),
                                    nm(c),
                                    nm(al),
                                    nm(beta),
                                    nm(g)
                                )
                            });
                        }
                    }
                }
            }
        }
    }
    report.push(rot.into_check("usefulid", &cat.name, tol));

    let mut uni = Worst::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let es: Vec<usize> = r.product(a, b).into_iter().filter(|&e| r.n(e, c, d) > 0).collect();
                    let fs: Vec<usize> = r.product(b, c).into_iter().filter(|&x| r.n(a, x, d) > 0).collect();
                    if es.is_empty() && fs.is_empty() {
                        continue;
                    }
                    if es.len() != fs.len() {
                        uni.see(1.0, || {
                            format!("non-square block (a,b,c,d)=({},{},{},{})", nm(a), nm(b), nm(c), nm(d))
                        });
                        continue;
                    }
                    let mut worst = 0.0f64;
                    for &e1 in &es {
                        for &e2 in &es {
                            let s: Complex64 =
                                fs.iter().map(|&x| f.get(a, b, c, d, e1, x) * f.get(a, b, c, d, e2, x).conj()).sum();
                            let want = if e1 == e2 { 1.0 } else { 0.0 };
                            worst = worst.max((s - want).norm());
                        }
                    }
                    uni.see(worst, || format!("(a,b,c,d)=({},{},{},{})", nm(a), nm(b), nm(c), nm(d)));
                }
            }
        }
    }
    report.push(uni.into_check("unitarity", &cat.name, tol));
    Ok(report)
}

// ---------------------------------------------------------------------------
// JSON document

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryDocument {
    pub name: String,
    pub labels: Vec<String>,
    pub dual: Vec<String>,
    #[serde(rename = "N")]
    pub n: Vec<[String; 3]>,
    #[serde(rename = "Delta", skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nu: Option<Vec<(String, String, String, i8)>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub placeholder_spins: Vec<String>,
    /// Entries `[r, s, a, b, t, t', [re, im]]` for `F_{tt'}[r s; a b]`.
    #[serde(rename = "F", skip_serializing_if = "Option::is_none", default)]
    pub f: Option<Vec<(String, String, String, String, String, String, [f64; 2])>>,
    pub capabilities: Capabilities,
}

fn rational_to_string(x: Rational64) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn rational_from_str(s: &str) -> Result<Rational64> {
    let bad = || Error::Format(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p, q))
        }
        None => Ok(Rational64::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

impl CategoryData {
    pub fn to_document(&self) -> CategoryDocument {
        let n = self.n_objects();
        let nm = |a: usize| self.labels.names()[a].clone();
        let mut triples = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.rules.n(a, b, c) > 0 {
                        triples.push([nm(a), nm(b), nm(c)]);
                    }
                }
            }
        }
        let (delta, nu, placeholder_spins) = match &self.twists {
            Some(t) => (
                Some(t.delta.iter().map(|x| rational_to_string(*x)).collect()),
                Some(t.nu.iter().map(|(&(a, b, c), &s)| (nm(a), nm(b), nm(c), s)).collect()),
                t.placeholder_spins.iter().map(|&a| nm(a)).collect(),
            ),
            None => (None, None, Vec::new()),
        };
        let f = self.f.as_ref().map(|table| {
            table
                .sorted_entries()
                .into_iter()
                .map(|(k, v)| {
                    let k = k.map(|x| nm(x as usize));
                    // standard (a,b,c,d,e,f) -> bracket (r,s,a,b,t,t') = (b,c,a,d,e,f)
                    (k[1].clone(), k[2].clone(), k[0].clone(), k[3].clone(), k[4].clone(), k[5].clone(), [v.re, v.im])
                })
                .collect()
        });
        CategoryDocument {
            name: self.name.clone(),
            labels: self.labels.names().to_vec(),
            dual: (0..n).map(|a| nm(self.rules.dual(a))).collect(),
            n: triples,
            delta,
            nu,
            placeholder_spins,
            f,
            capabilities: self.capabilities(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("category serialises")
    }

    pub fn from_document(doc: &CategoryDocument) -> Result<CategoryData> {
        let labels = LabelTable::new(doc.labels.clone());
        let n = labels.len();
        let id = |s: &str| -> Result<usize> {
            labels.names().iter().position(|x| x == s).ok_or_else(|| Error::Format(format!("unknown label '{s}'")))
        };
        if doc.dual.len() != n {
            return Err(Error::Format("dual list length differs from labels".into()));
        }
        let dual = doc.dual.iter().map(|s| id(s)).collect::<Result<Vec<_>>>()?;
        let mut rules = FusionRules::new(n, dual);
        for [a, b, c] in &doc.n {
            rules.set(id(a)?, id(b)?, id(c)?, 1);
        }
        let dims = compute_quantum_dims(&rules)?;
        let twists = match (&doc.delta, &doc.nu) {
            (Some(delta), Some(nu)) => {
                if delta.len() != n {
                    return Err(Error::Format("Delta length differs from labels".into()));
                }
                let delta = delta.iter().map(|s| rational_from_str(s)).collect::<Result<Vec<_>>>()?;
                let mut table = BTreeMap::new();
                for (a, b, c, s) in nu {
                    table.insert((id(a)?, id(b)?, id(c)?), *s);
                }
                let placeholder_spins = doc.placeholder_spins.iter().map(|s| id(s)).collect::<Result<Vec<_>>>()?;
                Some(TwistData { delta, nu: table, placeholder_spins })
            }
            (None, None) => None,
            _ => return Err(Error::Format("Delta and nu must be given together".into())),
        };
        let f = match &doc.f {
            Some(entries) => {
                let mut table = FSymbolTable::new();
                for (r, s, a, b, t, tp, [re, im]) in entries {
                    table.insert(id(a)?, id(r)?, id(s)?, id(b)?, id(t)?, id(tp)?, Complex64::new(*re, *im));
                }
                Some(table)
            }
            None => None,
        };
        Ok(CategoryData { name: doc.name.clone(), labels, rules, dims, twists, f })
    }

    pub fn from_json(s: &str) -> Result<CategoryData> {
        let doc: CategoryDocument = serde_json::from_str(s)?;
        Self::from_document(&doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_phase_reduces_mod_two() {
        let a = rational_phase(Rational64::new(7, 2));
        let b = rational_phase(Rational64::new(-1, 2));
        assert!((a - b).norm() < 1e-15);
        assert!((rational_phase(Rational64::new(1, 1)) + 1.0).norm() < 1e-15);
    }

    #[test]
    fn label_parse_accepts_numeric_spellings() {
        let t = LabelTable::new(vec!["0".into(), "1/2".into(), "1".into()]);
        assert_eq!(t.parse("1/2").unwrap(), ObjectLabel(1));
        assert_eq!(t.parse("0.5").unwrap(), ObjectLabel(1));
        assert_eq!(t.parse("2/2").unwrap(), ObjectLabel(2));
        assert!(t.parse("X").is_err());
    }

    #[test]
    fn trivial_category_dims() {
        let mut rules = FusionRules::new(1, vec![0]);
        rules.set(0, 0, 0, 1);
        assert!(check_fusion_ring(&rules).all_pass());
        assert_eq!(compute_quantum_dims(&rules).unwrap().d, vec![1.0]);
    }

    #[test]
    fn non_associative_rules_rejected() {
        // Fibonacci ring, then an identity-breaking N_{01}^0
        let mut rules = FusionRules::new(2, vec![0, 1]);
        rules.set(0, 0, 0, 1);
        rules.set(0, 1, 1, 1);
        rules.set(1, 0, 1, 1);
        rules.set(1, 1, 0, 1);
        rules.set(1, 1, 1, 1);
        assert!(check_fusion_ring(&rules).all_pass());
        rules.set(0, 1, 0, 1);
        assert!(matches!(compute_quantum_dims(&rules), Err(Error::Axiom(_))));
    }
}
