//! Concrete mixed-integer formulations of combinatorial polytopes over
//! complete graphs, brute-force oracles for their vertices, and the checks
//! that compare the two.

mod bimod;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use bimod::{bimodularity_check, mutate_entry, BimodularityReport};

use crate::caps::caps;
use crate::error::{Error, Result};
use crate::exactgeom::{contains_point, prune_to_vertices, AffineMap, HPolyhedron, VPolytope};
use crate::linalg::{QMatrix, QVector};
use crate::milef::{mixed_integer_hull_image, Milef};
use crate::rational::Rational;

/// An undirected simple graph on `0..n` with edges `(v, w)`, `v < w`.
///
/// Edges are oriented from the lower to the higher endpoint, so `δ⁺(v)` (the
/// edges entering `v`) are those whose higher endpoint is `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

/// The complete graph `K_n` is the graph every generator starts from.
pub type CompleteGraph = Graph;

impl Graph {
    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|v| (v + 1..n).map(move |w| (v, w))).collect();
        Graph { n, edges }
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, v: usize, w: usize) -> Option<usize> {
        let key = (v.min(w), v.max(w));
        self.edges.iter().position(|&e| e == key)
    }

    pub fn without_edge(&self, e: usize) -> Graph {
        let mut edges = self.edges.clone();
        edges.remove(e);
        Graph { n: self.n, edges }
    }

    /// Edges incident to `v`.
    pub fn delta(&self, v: usize) -> Vec<usize> {
        (0..self.m()).filter(|&e| self.edges[e].0 == v || self.edges[e].1 == v).collect()
    }

    /// Edges entering `v` under the low-to-high orientation.
    pub fn delta_in(&self, v: usize) -> Vec<usize> {
        (0..self.m()).filter(|&e| self.edges[e].1 == v).collect()
    }

    /// Edges leaving `v` under the low-to-high orientation.
    pub fn delta_out(&self, v: usize) -> Vec<usize> {
        (0..self.m()).filter(|&e| self.edges[e].0 == v).collect()
    }

    fn degrees(&self, subset: u64) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for (e, &(v, w)) in self.edges.iter().enumerate() {
            if subset >> e & 1 == 1 {
                deg[v] += 1;
                deg[w] += 1;
            }
        }
        deg
    }

    fn indicator(&self, subset: u64) -> QVector {
        (0..self.m()).map(|e| Rational::from_integer((subset >> e & 1) as i64)).collect()
    }

    fn cut_vector(&self, side: &[bool]) -> QVector {
        self.edges.iter().map(|&(v, w)| Rational::from_integer((side[v] != side[w]) as i64)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Matching,
    PerfectMatching,
    Vjoin,
    Cut,
    #[serde(rename = "oddcut")]
    OddCut,
    #[serde(rename = "oddcut-dominant")]
    OddCutDominant,
    Tsp,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Matching,
        Family::PerfectMatching,
        Family::Vjoin,
        Family::Cut,
        Family::OddCut,
        Family::OddCutDominant,
        Family::Tsp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Matching => "matching",
            Family::PerfectMatching => "perfect-matching",
            Family::Vjoin => "vjoin",
            Family::Cut => "cut",
            Family::OddCut => "oddcut",
            Family::OddCutDominant => "oddcut-dominant",
            Family::Tsp => "tsp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown family `{s}`")))
    }
}

fn require_subset_sweep(g: &Graph) -> Result<()> {
    let cap = caps().oracle_edges;
    if g.m() > cap {
        return Err(Error::ResourceCap { what: "oracle edge count", requested: g.m() as u128, limit: cap as u128 });
    }
    Ok(())
}

fn require_even(n: usize, what: &str) -> Result<()> {
    if n % 2 == 1 || n < 2 {
        return Err(Error::Precondition(format!("{what} needs an even number of vertices, got {n}")));
    }
    Ok(())
}

fn subsets_where(g: &Graph, keep: impl Fn(&[usize]) -> bool) -> Result<Vec<QVector>> {
    require_subset_sweep(g)?;
    Ok((0u64..1 << g.m()).filter(|&s| keep(&g.degrees(s))).map(|s| g.indicator(s)).collect())
}

/// Characteristic vectors of all matchings of `g`.
pub fn matchings(g: &Graph) -> Result<Vec<QVector>> {
    subsets_where(g, |deg| deg.iter().all(|&d| d <= 1))
}

fn cuts(g: &Graph, odd_only: bool) -> Result<Vec<QVector>> {
    if g.n > 20 {
        return Err(Error::ResourceCap { what: "cut oracle vertex count", requested: g.n as u128, limit: 20 });
    }
    let mut out = BTreeSet::new();
    for s in 0u32..1 << g.n {
        if odd_only && s.count_ones() % 2 == 0 {
            continue;
        }
        let side: Vec<bool> = (0..g.n).map(|v| s >> v & 1 == 1).collect();
        out.insert(g.cut_vector(&side));
    }
    Ok(out.into_iter().collect())
}

/// Characteristic vectors of Hamiltonian cycles of `K_n`.
pub fn tours(n: usize) -> Result<Vec<QVector>> {
    if n < 3 {
        return Err(Error::Precondition(format!("tours need at least 3 vertices, got {n}")));
    }
    if n > caps().tsp_n.max(8) {
        return Err(Error::ResourceCap { what: "tour oracle vertex count", requested: n as u128, limit: caps().tsp_n.max(8) as u128 });
    }
    let g = Graph::complete(n);
    let mut out = BTreeSet::new();
    let mut rest: Vec<usize> = (1..n).collect();
    permute(&mut rest, 0, &mut |p| {
        let mut x = QVector::zeros(g.m());
        let mut prev = 0;
        for &v in p.iter().chain(std::iter::once(&0)) {
            x[g.edge_index(prev, v).expect("complete graph")] = Rational::one();
            prev = v;
        }
        out.insert(x);
    });
    Ok(out.into_iter().collect())
}

fn permute(a: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == a.len() {
        f(a);
        return;
    }
    for i in k..a.len() {
        a.swap(k, i);
        permute(a, k + 1, f);
        a.swap(k, i);
    }
}

/// Exact vertex set of the family's polytope over `K_n`, by enumeration.
///
/// For the odd-cut dominant this is the truncation to the unit cube: the
/// vertices of the hull of all 0/1 vectors that dominate an odd cut.
pub fn oracle_vertices(family: Family, n: usize) -> Result<VPolytope> {
    let g = Graph::complete(n);
    let pts = match family {
        Family::Matching => matchings(&g)?,
        Family::PerfectMatching => subsets_where(&g, |deg| deg.iter().all(|&d| d == 1))?,
        Family::Vjoin => subsets_where(&g, |deg| deg.iter().all(|&d| d % 2 == 1))?,
        Family::Cut => cuts(&g, false)?,
        Family::OddCut => {
            require_even(n, "the odd-cut oracle")?;
            cuts(&g, true)?
        }
        Family::OddCutDominant => {
            require_even(n, "the odd-cut oracle")?;
            require_subset_sweep(&g)?;
            let odd = cuts(&g, true)?;
            let up: Vec<QVector> = (0u64..1 << g.m())
                .map(|s| g.indicator(s))
                .filter(|x| odd.iter().any(|c| c.iter().zip(x.iter()).all(|(a, b)| a <= b)))
                .collect();
            prune_to_vertices(&up)?
        }
        Family::Tsp => tours(n)?,
    };
    VPolytope::from_points(g.m(), pts)
}

/// A generated formulation together with what it should produce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulationBundle {
    pub family: Family,
    pub n: usize,
    pub target_name: String,
    pub milef: Milef,
    /// Filled from the oracle when present; otherwise computed on verification.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_vertices: Option<VPolytope>,
    /// Extra constraints on the lifted space applied before verification,
    /// used to make dominants bounded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification_window: Option<HPolyhedron>,
}

impl FormulationBundle {
    fn new(family: Family, n: usize, milef: Milef) -> Self {
        FormulationBundle {
            family,
            n,
            target_name: format!("{family}({n})"),
            milef,
            expected_vertices: None,
            verification_window: None,
        }
    }

    /// Fill `expected_vertices` from the oracle.
    pub fn with_oracle(mut self) -> Result<Self> {
        self.expected_vertices = Some(oracle_vertices(self.family, self.n)?);
        Ok(self)
    }
}

fn nonneg(q: &mut HPolyhedron, j: usize) {
    let d = q.ambient_dim();
    q.add_ineq(&QVector::unit(d, j).neg(), Rational::zero());
}

fn upper(q: &mut HPolyhedron, j: usize, b: i64) {
    let d = q.ambient_dim();
    q.add_ineq(&QVector::unit(d, j), Rational::from_integer(b));
}

fn sum_row(d: usize, terms: &[(usize, i64)]) -> QVector {
    let mut r = QVector::zeros(d);
    for &(j, c) in terms {
        r[j] += Rational::from_integer(c);
    }
    r
}

/// `{x ≥ 0 : x(δ(v)) ≤ 1}` with integral `x(δ⁺(v))` for every vertex.
pub fn matching_milef_graph(g: &Graph) -> Result<Milef> {
    let m = g.m();
    let mut q = HPolyhedron::universe(m);
    for e in 0..m {
        nonneg(&mut q, e);
    }
    for v in 0..g.n {
        let terms: Vec<(usize, i64)> = g.delta(v).into_iter().map(|e| (e, 1)).collect();
        q.add_ineq(&sum_row(m, &terms), Rational::one());
    }
    let mut sigma = QMatrix::zeros(g.n, m);
    for v in 0..g.n {
        for e in g.delta_in(v) {
            sigma[(v, e)] = Rational::one();
        }
    }
    Milef::new(q, AffineMap::linear(sigma), AffineMap::identity(m))
}

pub fn matching_milef(n: usize) -> Result<FormulationBundle> {
    if n < 2 {
        return Err(Error::Precondition("matching needs at least 2 vertices".into()));
    }
    Ok(FormulationBundle::new(Family::Matching, n, matching_milef_graph(&Graph::complete(n))?))
}

/// Variables `(x, z)`: `0 ≤ x ≤ 1`, `x(δ⁺(v)) − x(δ⁻(v)) = 2 z_v + 1`, `z` integral.
pub fn vjoin_milef(n: usize) -> Result<FormulationBundle> {
    require_even(n, "the V-join formulation")?;
    let g = Graph::complete(n);
    let m = g.m();
    let l = m + n;
    let mut q = HPolyhedron::universe(l);
    for e in 0..m {
        nonneg(&mut q, e);
        upper(&mut q, e, 1);
    }
    for v in 0..n {
        let mut terms: Vec<(usize, i64)> = g.delta_in(v).into_iter().map(|e| (e, 1)).collect();
        terms.extend(g.delta_out(v).into_iter().map(|e| (e, -1)));
        terms.push((m + v, -2));
        q.add_eq(&sum_row(l, &terms), Rational::one());
    }
    let sigma = AffineMap::coordinates(l, &(m..l).collect::<Vec<_>>());
    let pi = AffineMap::coordinates(l, &(0..m).collect::<Vec<_>>());
    Ok(FormulationBundle::new(Family::Vjoin, n, Milef::new(q, sigma, pi)?))
}

/// Variables `(x, y)` with `x, y` in the unit cube and, per edge `{v,w}`,
/// `x ≥ y_v − y_w`, `x ≥ y_w − y_v`, `x ≤ y_v + y_w`, `x ≤ 2 − y_v − y_w`.
fn cut_system(g: &Graph) -> HPolyhedron {
    let (m, n) = (g.m(), g.n);
    let l = m + n;
    let mut q = HPolyhedron::universe(l);
    for j in 0..l {
        nonneg(&mut q, j);
        upper(&mut q, j, 1);
    }
    for (e, &(v, w)) in g.edges.iter().enumerate() {
        let (yv, yw) = (m + v, m + w);
        q.add_ineq(&sum_row(l, &[(yv, 1), (yw, -1), (e, -1)]), Rational::zero());
        q.add_ineq(&sum_row(l, &[(yw, 1), (yv, -1), (e, -1)]), Rational::zero());
        q.add_ineq(&sum_row(l, &[(e, 1), (yv, -1), (yw, -1)]), Rational::zero());
        q.add_ineq(&sum_row(l, &[(e, 1), (yv, 1), (yw, 1)]), Rational::from_integer(2));
    }
    q
}

pub fn cut_milef(n: usize) -> Result<FormulationBundle> {
    if n < 2 {
        return Err(Error::Precondition("cut needs at least 2 vertices".into()));
    }
    let g = Graph::complete(n);
    let l = g.m() + n;
    let sigma = AffineMap::coordinates(l, &(g.m()..l).collect::<Vec<_>>());
    let pi = AffineMap::coordinates(l, &(0..g.m()).collect::<Vec<_>>());
    Ok(FormulationBundle::new(Family::Cut, n, Milef::new(cut_system(&g), sigma, pi)?))
}

/// The cut system with one more integrality constraint, `(Σ y_v − 1)/2 ∈ ℤ`,
/// which selects the shores of odd cardinality.
pub fn odd_cut_milef(n: usize) -> Result<FormulationBundle> {
    require_even(n, "the odd-cut formulation")?;
    let g = Graph::complete(n);
    let m = g.m();
    let l = m + n;
    let mut sm = QMatrix::zeros(n + 1, l);
    let mut offset = QVector::zeros(n + 1);
    let half = Rational::new(1, 2);
    for v in 0..n {
        sm[(v, m + v)] = Rational::one();
        sm[(n, m + v)] = half.clone();
    }
    offset[n] = -half;
    let pi = AffineMap::coordinates(l, &(0..m).collect::<Vec<_>>());
    Ok(FormulationBundle::new(Family::OddCut, n, Milef::new(cut_system(&g), AffineMap::new(sm, offset)?, pi)?))
}

/// Arcs of the complete digraph in lexicographic order.
pub fn arcs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|v| (0..n).filter(move |&w| w != v).map(move |w| (v, w))).collect()
}

/// Variables `(x, x̄, y, z)` over the complete digraph: `x_{vw} = x̄_{(v,w)} + x̄_{(w,v)}`,
/// `x̄ ≥ 0`, `y_w − y_v ≤ x̄_{(v,w)}`, `Σ y = 2z + 1`, with `(y, z)` integral.
///
/// The polyhedron is unbounded (it describes a dominant); the bundle carries a
/// verification window `x ≤ 1`, `−1 ≤ y ≤ 2`.
pub fn odd_cut_dominant_bimodular(n: usize) -> Result<FormulationBundle> {
    require_even(n, "the odd-cut dominant formulation")?;
    let g = Graph::complete(n);
    let a = arcs(n);
    let (m, na) = (g.m(), a.len());
    let (xb, y0, z) = (m, m + na, m + na + n);
    let l = z + 1;
    let mut q = HPolyhedron::universe(l);
    for (e, &(v, w)) in g.edges.iter().enumerate() {
        let f = a.iter().position(|&p| p == (v, w)).expect("arc");
        let b = a.iter().position(|&p| p == (w, v)).expect("arc");
        q.add_eq(&sum_row(l, &[(e, 1), (xb + f, -1), (xb + b, -1)]), Rational::zero());
    }
    for (i, &(v, w)) in a.iter().enumerate() {
        nonneg(&mut q, xb + i);
        q.add_ineq(&sum_row(l, &[(y0 + w, 1), (y0 + v, -1), (xb + i, -1)]), Rational::zero());
    }
    let mut parity: Vec<(usize, i64)> = (0..n).map(|v| (y0 + v, 1)).collect();
    parity.push((z, -2));
    q.add_eq(&sum_row(l, &parity), Rational::one());
    let sigma = AffineMap::coordinates(l, &(y0..l).collect::<Vec<_>>());
    let pi = AffineMap::coordinates(l, &(0..m).collect::<Vec<_>>());
    let mut window = HPolyhedron::universe(l);
    for e in 0..m {
        upper(&mut window, e, 1);
    }
    for v in 0..n {
        upper(&mut window, y0 + v, 2);
        window.add_ineq(&QVector::unit(l, y0 + v).neg(), Rational::one());
    }
    let mut b = FormulationBundle::new(Family::OddCutDominant, n, Milef::new(q, sigma, pi)?);
    b.verification_window = Some(window);
    Ok(b)
}

/// The constraint matrix of the conic odd-cut program over `(x̄, y, z)`:
/// rows `−x̄ ≤ 0`, rows `y_w − y_v − x̄_{(v,w)} ≤ 0`, and the row `Σ y − 2z`.
///
/// With `pointed` an extra unit row `−y_0 ≤ 0` is appended.
pub fn odd_cut_conic_matrix(n: usize, pointed: bool) -> QMatrix {
    let a = arcs(n);
    let na = a.len();
    let cols = na + n + 1;
    let mut rows: Vec<QVector> = Vec::new();
    for i in 0..na {
        rows.push(sum_row(cols, &[(i, -1)]));
    }
    for (i, &(v, w)) in a.iter().enumerate() {
        rows.push(sum_row(cols, &[(na + w, 1), (na + v, -1), (i, -1)]));
    }
    let mut parity: Vec<(usize, i64)> = (0..n).map(|v| (na + v, 1)).collect();
    parity.push((na + n, -2));
    rows.push(sum_row(cols, &parity));
    if pointed {
        rows.push(sum_row(cols, &[(na, -1)]));
    }
    QMatrix::from_rows(&rows, cols)
}

/// Code of vertex `i` among the TSP labels: the `bits`-digit binary expansion of `i`.
fn code(i: usize, bits: usize) -> Vec<i64> {
    (0..bits).rev().map(|b| (i >> b & 1) as i64).collect()
}

/// Variables `(x, y_0..y_{n−1}, λ)`: each `y_v ∈ R^ℓ` with `ℓ = ⌈log₂ n⌉`, and
/// per edge `{v,w}` a simplex block `λ` over the vertices `(s, s', z)` of the
/// auxiliary polytope with `(y_v, y_w, x_{vw}) = Σ λ (s, s', z)`.
///
/// Labels are the first `n` binary codes and the reference tour is `0–1–…–(n−1)–0`.
pub fn tsp_milef(n: usize) -> Result<FormulationBundle> {
    if n < 4 {
        return Err(Error::Precondition(format!("the TSP formulation needs n ≥ 4, got {n}")));
    }
    let cap = caps().tsp_n;
    if n > cap {
        return Err(Error::ResourceCap { what: "TSP vertex count", requested: n as u128, limit: cap as u128 });
    }
    let g = Graph::complete(n);
    let m = g.m();
    let bits = usize::BITS as usize - (n - 1).leading_zeros() as usize;
    let aux = tsp_aux_vertices(n);
    let k = aux.len();
    let y0 = m;
    let lam0 = m + n * bits;
    let l = lam0 + m * k;
    let mut q = HPolyhedron::universe(l);
    for e in 0..m {
        nonneg(&mut q, e);
        upper(&mut q, e, 1);
    }
    for (e, &(v, w)) in g.edges.iter().enumerate() {
        let base = lam0 + e * k;
        for i in 0..k {
            nonneg(&mut q, base + i);
        }
        let ones: Vec<(usize, i64)> = (0..k).map(|i| (base + i, 1)).collect();
        q.add_eq(&sum_row(l, &ones), Rational::one());
        for b in 0..bits {
            let mut rv: Vec<(usize, i64)> = vec![(y0 + v * bits + b, -1)];
            let mut rw: Vec<(usize, i64)> = vec![(y0 + w * bits + b, -1)];
            for (i, (s, t, _)) in aux.iter().enumerate() {
                rv.push((base + i, s[b]));
                rw.push((base + i, t[b]));
            }
            q.add_eq(&sum_row(l, &rv), Rational::zero());
            q.add_eq(&sum_row(l, &rw), Rational::zero());
        }
        let mut rx: Vec<(usize, i64)> = vec![(e, -1)];
        for (i, (_, _, z)) in aux.iter().enumerate() {
            rx.push((base + i, *z));
        }
        q.add_eq(&sum_row(l, &rx), Rational::zero());
    }
    let sigma = AffineMap::coordinates(l, &(y0..lam0).collect::<Vec<_>>());
    let pi = AffineMap::coordinates(l, &(0..m).collect::<Vec<_>>());
    Ok(FormulationBundle::new(Family::Tsp, n, Milef::new(q, sigma, pi)?))
}

/// Vertices `(s, s', z)` of the TSP auxiliary polytope: ordered pairs of
/// distinct codes with `z = 1` exactly when their vertices are adjacent on
/// the reference tour.
pub fn tsp_aux_vertices(n: usize) -> Vec<(Vec<i64>, Vec<i64>, i64)> {
    let bits = usize::BITS as usize - (n - 1).leading_zeros() as usize;
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let adjacent = (a + 1) % n == b || (b + 1) % n == a;
            out.push((code(a, bits), code(b, bits), adjacent as i64));
        }
    }
    out
}

pub fn generate(family: Family, n: usize) -> Result<FormulationBundle> {
    match family {
        Family::Matching => matching_milef(n),
        Family::Vjoin => vjoin_milef(n),
        Family::Cut => cut_milef(n),
        Family::OddCut => odd_cut_milef(n),
        Family::OddCutDominant => odd_cut_dominant_bimodular(n),
        Family::Tsp => tsp_milef(n),
        Family::PerfectMatching => {
            let b = vjoin_milef(n)?;
            let (phi, tau2) = vjoin_cardinality_face(n);
            let m = crate::milef::restrict_to_face(&b.milef, &phi, &tau2)?;
            Ok(FormulationBundle::new(Family::PerfectMatching, n, m))
        }
    }
}

/// `φ(x) = 𝟙ᵀx − n/2` and `τ₂ = id`: the face of the V-join polytope made of
/// the V-joins with `n/2` edges, which are exactly the perfect matchings.
pub fn vjoin_cardinality_face(n: usize) -> (AffineMap, AffineMap) {
    let m = n * (n - 1) / 2;
    let ones = QMatrix::from_rows(&[QVector(vec![Rational::one(); m])], m);
    let phi = AffineMap::new(ones, QVector(vec![-Rational::new(n as i64, 2)])).expect("shapes agree");
    (phi, AffineMap::identity(m))
}

/// `φ(x) = x_e` and `τ₂` dropping coordinate `e`: the matchings avoiding `e`.
pub fn edge_face(n: usize, e: usize) -> (AffineMap, AffineMap) {
    let m = n * (n - 1) / 2;
    let phi = AffineMap::coordinates(m, &[e]);
    let keep: Vec<usize> = (0..m).filter(|&j| j != e).collect();
    (phi, AffineMap::coordinates(m, &keep))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub target_name: String,
    pub pass: bool,
    pub computed_count: usize,
    pub expected_count: usize,
    /// Expected vertices absent from the computed hull.
    pub missing: Vec<QVector>,
    /// Computed vertices that the oracle does not list.
    pub extra: Vec<QVector>,
    /// Whether a verification window was applied.
    pub windowed: bool,
}

/// Compare the hull of the bundle's formulation with the oracle's vertex set.
pub fn verify_bundle(b: &FormulationBundle) -> Result<VerifyReport> {
    let mut m = b.milef.clone();
    if let Some(w) = &b.verification_window {
        m.q = crate::exactgeom::intersect(&m.q, w)?;
    }
    let computed = mixed_integer_hull_image(&m)?;
    let expected = match &b.expected_vertices {
        Some(v) => v.clone(),
        None => oracle_vertices(b.family, b.n)?,
    };
    let have: BTreeSet<&QVector> = computed.vertices.iter().collect();
    let want: BTreeSet<&QVector> = expected.vertices.iter().collect();
    let missing: Vec<QVector> = want.difference(&have).map(|&x| x.clone()).collect();
    let extra: Vec<QVector> = have.difference(&want).map(|&x| x.clone()).collect();
    Ok(VerifyReport {
        target_name: b.target_name.clone(),
        pass: missing.is_empty() && extra.is_empty(),
        computed_count: computed.vertices.len(),
        expected_count: expected.vertices.len(),
        missing,
        extra,
        windowed: b.verification_window.is_some(),
    })
}

/// Whether `x` lies in `conv(points) + R^d_{≥0}`.
pub fn in_dominant(points: &[QVector], x: &[Rational]) -> Result<bool> {
    let d = x.len();
    let rays: Vec<QVector> = (0..d).map(|j| QVector::unit(d, j)).collect();
    contains_point(&VPolytope::new(d, points.to_vec(), rays)?, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milef::mixed_integer_hull;

    #[test]
    fn oracle_counts() {
        let count = |f, n| oracle_vertices(f, n).unwrap().vertices.len();
        assert_eq!(count(Family::Matching, 4), 10);
        assert_eq!(count(Family::Vjoin, 4), 8);
        assert_eq!(count(Family::OddCut, 4), 4);
        assert_eq!(count(Family::Cut, 3), 4);
        assert_eq!(count(Family::Cut, 4), 8);
        assert_eq!(count(Family::Tsp, 4), 3);
        assert_eq!(count(Family::PerfectMatching, 4), 3);
    }

    #[test]
    fn orientation() {
        let g = Graph::complete(3);
        assert_eq!(g.edges, vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.delta_in(2), vec![1, 2]);
        assert_eq!(g.delta_out(0), vec![0, 1]);
        assert_eq!(g.delta(1), vec![0, 2]);
    }

    #[test]
    fn small_bundles_verify() {
        assert!(verify_bundle(&matching_milef(2).unwrap()).unwrap().pass);
        assert!(verify_bundle(&matching_milef(3).unwrap()).unwrap().pass);
        assert!(verify_bundle(&cut_milef(3).unwrap()).unwrap().pass);
        let r = verify_bundle(&vjoin_milef(2).unwrap()).unwrap();
        assert!(r.pass && r.computed_count == 1);
    }

    #[test]
    fn lifted_and_projected_hulls_agree() {
        let b = matching_milef(3).unwrap();
        let lifted = mixed_integer_hull(&b.milef).unwrap().map(&b.milef.pi).unwrap();
        let img = mixed_integer_hull_image(&b.milef).unwrap();
        assert_eq!(prune_to_vertices(&lifted.vertices).unwrap(), img.vertices);
    }

    #[test]
    fn corrupted_matching_fails() {
        let mut b = matching_milef(3).unwrap();
        let drop = b.milef.q.n_ineq() - 1;
        b.milef.q = b.milef.q.without_ineqs(&[drop]);
        let r = verify_bundle(&b).unwrap();
        assert!(!r.pass && !r.extra.is_empty());
    }

    #[test]
    fn tsp_aux_has_ordered_pairs() {
        assert_eq!(tsp_aux_vertices(4).len(), 12);
        assert_eq!(tsp_aux_vertices(5).len(), 20);
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
            assert_eq!(serde_json::to_string(&f).unwrap(), format!("\"{}\"", f.name()));
        }
    }
}
