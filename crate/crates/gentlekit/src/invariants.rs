//! Derived invariants of a gentle algebra: Euler form in both bases, ∇, Dynkin
//! type, the AAG invariant (two routes), Coxeter matrix and polynomial (two
//! routes), and a comparable fingerprint.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact_linalg::{int_to_json, IntMatrix, IntPolynomial};
use crate::quiver::GentleQuiver;
use crate::ribbon::{ForbiddenRibbon, RibbonGraph};
use crate::walks::{anti_walks, faces};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),
}

fn mismatch(msg: impl Into<String>) -> InvariantError {
    InvariantError::InternalMismatch(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynkinType {
    A(usize),
    D(usize),
    C(usize),
    /// Non-unit form of rank 1: half of it is A₁.
    HalfA1,
    /// The form is not connected; no type is assigned.
    Disconnected,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(r) => write!(f, "A{r}"),
            DynkinType::D(r) => write!(f, "D{r}"),
            DynkinType::C(r) => write!(f, "C{r}"),
            DynkinType::HalfA1 => f.write_str("HalfA1"),
            DynkinType::Disconnected => f.write_str("Disconnected"),
        }
    }
}

/// The Dynkin type decision tree, shared by both bases.
/// `threads` is 2|Q0| − |Q1| (the number of permitted threads).
pub fn dynkin_type(unit: bool, nabla: u8, threads: i64, rank: usize) -> DynkinType {
    if unit {
        if nabla == 0 && threads >= 4 {
            DynkinType::D(rank)
        } else {
            DynkinType::A(rank)
        }
    } else if threads >= 2 {
        DynkinType::C(rank)
    } else {
        DynkinType::HalfA1
    }
}

/// Connectedness of a form: the graph of nonzero off-diagonal Gram entries is connected.
pub fn is_connected_form(gram: &IntMatrix) -> bool {
    let n = gram.rows();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && i != j && !gram.get(i, j).is_zero() {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerAnalysis {
    pub cartan: IntMatrix,
    /// C + Cᵗʳ.
    pub gram_projectives: IntMatrix,
    /// Inc(G)·Inc(G)ᵗʳ, to be compared with `gram_projectives`.
    pub incidence_gram: IntMatrix,
    /// Inc(▲)·Inc(▲)ᵗʳ; present only for finite global dimension.
    pub gram_simples: Option<IntMatrix>,
    pub nabla: u8,
    pub rank: usize,
    pub corank: usize,
    pub unit_projectives: bool,
    pub dynkin_projectives: DynkinType,
    pub unit_simples: Option<bool>,
    pub connected_simples: Option<bool>,
    pub dynkin_simples: Option<DynkinType>,
    /// Gram diagonals halved: q_i in each basis.
    pub diag_projectives: Vec<i64>,
    pub diag_simples: Option<Vec<i64>>,
}

impl EulerAnalysis {
    /// C + Cᵗʳ = Inc(G)·Inc(G)ᵗʳ.
    pub fn projective_identity_holds(&self) -> bool {
        self.gram_projectives == self.incidence_gram
    }

    /// C·(Inc(▲)Inc(▲)ᵗʳ)·Cᵗʳ = C + Cᵗʳ, or `None` for infinite global dimension.
    pub fn simples_identity_holds(&self) -> Option<bool> {
        let gs = self.gram_simples.as_ref()?;
        Some(&(&self.cartan * gs) * &self.cartan.transpose() == self.gram_projectives)
    }
}

fn halved_diagonal(m: &IntMatrix) -> Vec<i64> {
    (0..m.rows())
        .map(|i| {
            let d: BigInt = m.get(i, i) / 2;
            i64::try_from(d).expect("diagonal fits in i64")
        })
        .collect()
}

pub fn euler_analysis(q: &GentleQuiver) -> EulerAnalysis {
    let g = RibbonGraph::from_gentle(q);
    let c = q.cartan_matrix();
    let gram = &c + &c.transpose();
    let inc = g.incidence_plus();
    let incidence_gram = &inc * &inc.transpose();
    let nabla = g.is_bipartite() as u8;
    let (rank, corank) = gram.rank_corank();
    let threads = 2 * q.n() as i64 - q.base().num_arrows() as i64;
    let diag_p = halved_diagonal(&gram);
    let unit_p = diag_p.iter().all(|&d| d == 1);
    let dyn_p = dynkin_type(unit_p, nabla, threads, rank);

    let gram_simples = ForbiddenRibbon::from_gentle(q).ok().map(|f| {
        let m = f.incidence_matrix();
        &m * &m.transpose()
    });
    let diag_s = gram_simples.as_ref().map(halved_diagonal);
    let unit_s = diag_s.as_ref().map(|d| d.iter().all(|&x| x == 1));
    let connected_s = gram_simples.as_ref().map(is_connected_form);
    let dyn_s = match (unit_s, connected_s) {
        (Some(_), Some(false)) => Some(DynkinType::Disconnected),
        (Some(u), Some(true)) => Some(dynkin_type(u, nabla, threads, rank)),
        _ => None,
    };
    EulerAnalysis {
        cartan: c,
        gram_projectives: gram,
        incidence_gram,
        gram_simples,
        nabla,
        rank,
        corank,
        unit_projectives: unit_p,
        dynkin_projectives: dyn_p,
        unit_simples: unit_s,
        connected_simples: connected_s,
        dynkin_simples: dyn_s,
        diag_projectives: diag_p,
        diag_simples: diag_s,
    }
}

/// Multiset of pairs (n, m) with multiplicities.
pub type Aag = BTreeMap<(i64, i64), usize>;

/// AAG from faces: ((ℓ − deg°)/2, (ℓ + deg°)/2) per face.
pub fn aag_from_faces(g: &RibbonGraph) -> Aag {
    let mut out = Aag::new();
    for f in faces(g) {
        *out.entry(f.aag_pair()).or_default() += 1;
    }
    out
}

/// AAG from orbits: Φ = Φ1∘Φ2 on forbidden threads gives (|O|, Σ ℓ), and Φ'
/// on full-cycle arrows gives (0, |O|).
pub fn aag_from_orbits(q: &GentleQuiver) -> Result<Aag, InvariantError> {
    let p1 = q.phi1().map_err(mismatch)?;
    let p2 = q.phi2().map_err(mismatch)?;
    let forb = q.forbidden();
    let phi: Vec<usize> = (0..forb.len()).map(|k| p1[p2[k]]).collect();
    let mut out = Aag::new();
    let mut seen = vec![false; forb.len()];
    for s in 0..forb.len() {
        if seen[s] {
            continue;
        }
        let (mut size, mut total, mut cur) = (0i64, 0i64, s);
        while !seen[cur] {
            seen[cur] = true;
            size += 1;
            total += forb[cur].len() as i64;
            cur = phi[cur];
        }
        if cur != s {
            return Err(mismatch(format!(
                "Φ is not a permutation (thread {})",
                forb[s].name
            )));
        }
        *out.entry((size, total)).or_default() += 1;
    }
    let pp = q.phi_prime();
    let mut seen: BTreeMap<usize, bool> = BTreeMap::new();
    for &a in pp.keys() {
        if seen.contains_key(&a) {
            continue;
        }
        let (mut size, mut cur) = (0i64, a);
        while !seen.contains_key(&cur) {
            seen.insert(cur, true);
            size += 1;
            cur = pp[&cur];
        }
        *out.entry((0, size)).or_default() += 1;
    }
    Ok(out)
}

/// AAG invariant, computed from faces and checked against the orbit route.
pub fn aag_invariant(q: &GentleQuiver) -> Result<Aag, InvariantError> {
    let g = RibbonGraph::from_gentle(q);
    let by_faces = aag_from_faces(&g);
    let by_orbits = aag_from_orbits(q)?;
    if by_faces != by_orbits {
        return Err(mismatch(format!(
            "AAG routes disagree: faces {} vs orbits {}",
            aag_to_string(&by_faces),
            aag_to_string(&by_orbits)
        )));
    }
    Ok(by_faces)
}

pub fn aag_to_string(a: &Aag) -> String {
    let parts: Vec<String> = a
        .iter()
        .flat_map(|(&(n, m), &k)| std::iter::repeat_n(format!("({n},{m})"), k))
        .collect();
    format!("{{{}}}", parts.join(","))
}

pub fn aag_to_json(a: &Aag) -> Value {
    Value::Array(
        a.iter()
            .map(|(&(n, m), &k)| json!({"n": n, "m": m, "count": k}))
            .collect(),
    )
}

/// (z−1)^{e}·Π_{n>0} (zⁿ − (−1)^{n+m})^{φ(n,m)}, where `e` = |Q1| − |Q0| may be
/// negative (then the division must be exact).
pub fn aag_polynomial(aag: &Aag, e: i64) -> Option<IntPolynomial> {
    let mut p = IntPolynomial::one();
    for (&(n, m), &k) in aag {
        if n == 0 {
            continue;
        }
        let sign = if (n + m) % 2 == 0 { -1 } else { 1 };
        let f = IntPolynomial::monomial_plus(n as usize, sign).pow(k as u32);
        p = &p * &f;
    }
    let z1 = IntPolynomial::from_i64(&[-1, 1]);
    if e >= 0 {
        Some(&p * &z1.pow(e as u32))
    } else {
        p.div_exact(&z1.pow((-e) as u32))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coxeter {
    /// Ĵ: columns inc(OT(α)), one per vertex of G.
    pub j_hat: IntMatrix,
    /// Ψ = I − ĴĴᵗʳCᵗʳ.
    pub matrix: IntMatrix,
    /// Ψ⁻¹ = I − ĴĴᵗʳC.
    pub inverse: IntMatrix,
    pub poly: IntPolynomial,
    pub poly_from_aag: IntPolynomial,
}

pub fn j_hat(g: &RibbonGraph) -> IntMatrix {
    let cols: Vec<Vec<i64>> = anti_walks(g)
        .iter()
        .map(|w| w.incidence_vector(g))
        .collect();
    IntMatrix::from_columns(g.num_edges(), &cols)
}

pub fn coxeter(q: &GentleQuiver) -> Result<Coxeter, InvariantError> {
    let g = RibbonGraph::from_gentle(q);
    let n = q.n();
    let c = q.cartan_matrix();
    let j = j_hat(&g);
    let jj = &j * &j.transpose();
    let id = IntMatrix::identity(n);
    let matrix = &id - &(&jj * &c.transpose());
    let inverse = &id - &(&jj * &c);
    if &matrix * &inverse != id {
        return Err(mismatch("Ψ·(I − ĴĴᵗʳC) ≠ I"));
    }
    let poly = matrix.char_poly().expect("square");
    let aag = aag_invariant(q)?;
    let e = q.base().num_arrows() as i64 - n as i64;
    let poly_from_aag = aag_polynomial(&aag, e)
        .ok_or_else(|| mismatch("AAG product is not divisible by the (z−1) power"))?;
    if poly != poly_from_aag {
        return Err(mismatch(format!(
            "Coxeter polynomial {poly} ≠ AAG product {poly_from_aag}"
        )));
    }
    Ok(Coxeter {
        j_hat: j,
        matrix,
        inverse,
        poly,
        poly_from_aag,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub num_q_vertices: usize,
    pub num_q_arrows: usize,
    pub num_g_vertices: usize,
    pub num_g_edges: usize,
    pub num_faces: usize,
    pub bipartite: bool,
    pub nabla: u8,
    pub corank: usize,
    pub det_cartan: BigInt,
    pub aag: Aag,
    pub coxeter_poly: IntPolynomial,
    /// Sorted (ℓ, deg°) of all faces.
    pub face_profile: Vec<(usize, i64)>,
}

pub fn fingerprint(q: &GentleQuiver) -> Result<Fingerprint, InvariantError> {
    let g = RibbonGraph::from_gentle(q);
    let ea = euler_analysis(q);
    let cox = coxeter(q)?;
    let fs = faces(&g);
    let mut profile: Vec<(usize, i64)> = fs.iter().map(|f| (f.len(), f.closed_degree)).collect();
    profile.sort();
    Ok(Fingerprint {
        num_q_vertices: q.n(),
        num_q_arrows: q.base().num_arrows(),
        num_g_vertices: g.num_vertices(),
        num_g_edges: g.num_edges(),
        num_faces: fs.len(),
        bipartite: g.is_bipartite(),
        nabla: ea.nabla,
        corank: ea.corank,
        det_cartan: ea.cartan.det().expect("square"),
        aag: aag_invariant(q)?,
        coxeter_poly: cox.poly,
        face_profile: profile,
    })
}

impl Fingerprint {
    /// Field name → rendered value, in a fixed order.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("numQVertices", self.num_q_vertices.to_string()),
            ("numQArrows", self.num_q_arrows.to_string()),
            ("numGVertices", self.num_g_vertices.to_string()),
            ("numGEdges", self.num_g_edges.to_string()),
            ("numFaces", self.num_faces.to_string()),
            ("bipartite", self.bipartite.to_string()),
            ("nabla", self.nabla.to_string()),
            ("corank", self.corank.to_string()),
            ("detCartan", self.det_cartan.to_string()),
            ("aag", aag_to_string(&self.aag)),
            ("coxeterPoly", self.coxeter_poly.to_string()),
            ("faceProfile", format!("{:?}", self.face_profile)),
        ]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "numQVertices": self.num_q_vertices,
            "numQArrows": self.num_q_arrows,
            "numGVertices": self.num_g_vertices,
            "numGEdges": self.num_g_edges,
            "numFaces": self.num_faces,
            "bipartite": self.bipartite,
            "nabla": self.nabla,
            "corank": self.corank,
            "detCartan": int_to_json(&self.det_cartan),
            "aag": aag_to_json(&self.aag),
            "coxeterPoly": self.coxeter_poly.to_json(),
            "faceProfile": self.face_profile.iter().map(|(l, d)| json!([l, d])).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NotDerivedEquivalent,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NotDerivedEquivalent => "not derived equivalent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    /// (field, left value, right value) for every differing field.
    pub differences: Vec<(&'static str, String, String)>,
    pub verdict: Verdict,
}

impl Comparison {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "differences": self.differences.iter().map(|(f, a, b)| json!({"field": f, "left": a, "right": b})).collect::<Vec<_>>(),
        })
    }
}

pub fn compare(a: &Fingerprint, b: &Fingerprint) -> Comparison {
    let differences: Vec<_> = a
        .fields()
        .into_iter()
        .zip(b.fields())
        .filter(|((_, x), (_, y))| x != y)
        .map(|((f, x), (_, y))| (f, x, y))
        .collect();
    let verdict = if differences.is_empty() {
        Verdict::Inconclusive
    } else {
        Verdict::NotDerivedEquivalent
    };
    Comparison {
        differences,
        verdict,
    }
}

/// Everything `analyze` reports.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub euler: EulerAnalysis,
    pub aag: Aag,
    pub coxeter: Coxeter,
    pub fingerprint: Fingerprint,
}

/// Full analysis with every cross-check enforced.
pub fn analyze(q: &GentleQuiver) -> Result<AnalysisReport, InvariantError> {
    let euler = euler_analysis(q);
    if !euler.projective_identity_holds() {
        return Err(mismatch("C + Cᵗʳ ≠ Inc(G)·Inc(G)ᵗʳ"));
    }
    if euler.simples_identity_holds() == Some(false) {
        return Err(mismatch("C·Inc(▲)Inc(▲)ᵗʳ·Cᵗʳ ≠ C + Cᵗʳ"));
    }
    let arrows = q.base().num_arrows() as i64;
    let verts = q.n() as i64;
    if euler.corank as i64 != arrows - verts + euler.nabla as i64 {
        return Err(mismatch("corank differs from |Q1| − |Q0| + ∇"));
    }
    let aag = aag_invariant(q)?;
    let coxeter = coxeter(q)?;
    let fingerprint = fingerprint(q)?;
    Ok(AnalysisReport {
        euler,
        aag,
        coxeter,
        fingerprint,
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> Value {
        let e = &self.euler;
        json!({
            "cartan": e.cartan.to_json(),
            "gramProjectives": e.gram_projectives.to_json(),
            "gramSimples": e.gram_simples.as_ref().map(IntMatrix::to_json),
            "nabla": e.nabla,
            "rank": e.rank,
            "corank": e.corank,
            "unitInProjectives": e.unit_projectives,
            "unitInSimples": e.unit_simples,
            "connectedInSimples": e.connected_simples,
            "dynkinProjectives": e.dynkin_projectives.to_string(),
            "dynkinSimples": e.dynkin_simples.map(|d| d.to_string()),
            "qDiagonalProjectives": e.diag_projectives,
            "qDiagonalSimples": e.diag_simples,
            "aag": aag_to_json(&self.aag),
            "coxeterMatrix": self.coxeter.matrix.to_json(),
            "coxeterPoly": self.coxeter.poly.to_json(),
            "coxeterPolyText": self.coxeter.poly.to_string(),
            "coxeterPalindromic": self.coxeter.poly.is_palindromic(),
            "fingerprint": self.fingerprint.to_json(),
        })
    }
}

/// Checks that Ψ is an integral isometry-like automorphism: det Ψ = ±1.
pub fn coxeter_is_unimodular(c: &Coxeter) -> bool {
    let d = c.matrix.det().expect("square");
    d.is_one() || (-d).is_one()
}
