//! Perfect complexes as walks: string and band complex descriptors, their
//! K₀ classes, root classification, class enumeration, and AR triangles.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact_linalg::{qform_eval_i64, short_vectors, IntMatrix};
use crate::ribbon::RibbonGraph;
use crate::walks::{canonical_pair, enumerate_reduced_walks, is_belt, plus_ops, Walk, WalkError};

/// Largest walk length accepted by [`enumerate_perfect_classes`].
pub const MAX_ENUMERATION_LEN: usize = 16;
pub const DEFAULT_ENUMERATION_LEN: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivedError {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("walk is not reduced")]
    NotReduced,
    #[error("walk is not a belt")]
    NotABelt,
    #[error("band fibre dimension must be positive")]
    ZeroFibre,
    #[error("length bound {0} exceeds the limit {MAX_ENUMERATION_LEN}")]
    BoundTooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub degree: i64,
    /// Index of the projective P_i, i.e. of the edge of G.
    pub projective: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexMap {
    pub from: usize,
    pub to: usize,
    /// Arrow names of the permitted path p(i, j).
    pub path: Vec<String>,
    /// True when the map runs from term t+1 back to term t.
    pub reversed: bool,
}

/// Arrows α_{a+1} … α_b at the vertex of half-edges at positions a < b.
fn path_between(g: &RibbonGraph, v: usize, a: usize, b: usize) -> Vec<String> {
    (a + 1..=b).map(|t| g.arrow_name(v, t)).collect()
}

/// X(m, w): a string complex. A trivial walk gives the zero complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringComplex {
    pub m: i64,
    pub walk: Walk,
    pub terms: Vec<Term>,
    pub maps: Vec<ComplexMap>,
}

impl StringComplex {
    pub fn build(g: &RibbonGraph, m: i64, w: &Walk) -> Result<Self, DerivedError> {
        if !w.is_reduced() {
            return Err(DerivedError::NotReduced);
        }
        let ds = w.prefix_degrees(g)?;
        let e = w.edges();
        let terms = e
            .iter()
            .zip(&ds)
            .map(|(oe, d)| Term {
                degree: m + d,
                projective: oe.edge,
            })
            .collect();
        let mut maps = Vec::new();
        for t in 0..e.len().saturating_sub(1) {
            let (i, j) = (e[t], e[t + 1]);
            let (hs, ht) = (i.sh(g), j.th(g));
            let v = g.vertex_of(hs);
            let (a, b) = (g.pos(hs), g.pos(ht));
            maps.push(if a < b {
                ComplexMap {
                    from: t,
                    to: t + 1,
                    path: path_between(g, v, a, b),
                    reversed: false,
                }
            } else {
                ComplexMap {
                    from: t + 1,
                    to: t,
                    path: path_between(g, v, b, a),
                    reversed: true,
                }
            });
        }
        Ok(StringComplex {
            m,
            walk: w.clone(),
            terms,
            maps,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// (−1)^m · inc(w).
    pub fn k0_class(&self, g: &RibbonGraph) -> Vec<i64> {
        let s = if self.m.rem_euclid(2) == 0 { 1 } else { -1 };
        self.walk
            .incidence_vector(g)
            .into_iter()
            .map(|x| s * x)
            .collect()
    }

    /// Σ (−1)^{deg} [term], computed from the terms alone.
    pub fn alternating_class(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for t in &self.terms {
            v[t.projective] += if t.degree.rem_euclid(2) == 0 { 1 } else { -1 };
        }
        v
    }

    pub fn to_json(&self, g: &RibbonGraph) -> Value {
        json!({
            "shift": self.m,
            "walk": self.walk.to_text(g),
            "terms": self.terms.iter().map(|t| json!({"degree": t.degree, "projective": g.edges()[t.projective].name})).collect::<Vec<_>>(),
            "maps": self.maps.iter().map(|m| json!({"from": m.from, "to": m.to, "path": m.path, "reversed": m.reversed})).collect::<Vec<_>>(),
        })
    }
}

/// X(m, w, μ) with μ a d×d companion block, kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandComplex {
    pub m: i64,
    pub belt: Walk,
    pub fibre_dim: usize,
}

impl BandComplex {
    pub fn new(
        g: &RibbonGraph,
        m: i64,
        belt: Walk,
        fibre_dim: usize,
    ) -> Result<Self, DerivedError> {
        if fibre_dim == 0 {
            return Err(DerivedError::ZeroFibre);
        }
        if !is_belt(g, &belt) {
            return Err(DerivedError::NotABelt);
        }
        Ok(BandComplex { m, belt, fibre_dim })
    }

    /// The closed walk w_[L] (the belt without its repeated last edge).
    pub fn core(&self) -> Walk {
        self.belt.prefix(self.belt.len() - 1)
    }

    /// (−1)^m · d · inc(w_[L]).
    pub fn k0_class(&self, g: &RibbonGraph) -> Vec<i64> {
        let s = if self.m.rem_euclid(2) == 0 { 1 } else { -1 } * self.fibre_dim as i64;
        self.core()
            .incidence_vector(g)
            .into_iter()
            .map(|x| s * x)
            .collect()
    }

    /// Alternating sum over the d-fold terms of the core.
    pub fn alternating_class(&self, g: &RibbonGraph) -> Result<Vec<i64>, DerivedError> {
        let x = StringComplex::build(g, self.m, &self.core())?;
        Ok(x.alternating_class(g.num_edges())
            .into_iter()
            .map(|v| v * self.fibre_dim as i64)
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootClass {
    Zero,
    One,
    Two,
    Other(i64),
}

impl RootClass {
    pub fn from_value(v: i64) -> Self {
        match v {
            0 => RootClass::Zero,
            1 => RootClass::One,
            2 => RootClass::Two,
            x => RootClass::Other(x),
        }
    }

    pub fn label(self) -> String {
        match self {
            RootClass::Zero => "0-root".into(),
            RootClass::One => "1-root".into(),
            RootClass::Two => "2-root".into(),
            RootClass::Other(v) => format!("other (q = {v})"),
        }
    }
}

/// q(x) from the projectives Gram matrix C + Cᵗʳ.
pub fn q_value(gram: &IntMatrix, x: &[i64]) -> i64 {
    let v: BigInt =
        qform_eval_i64(gram, x).expect("Gram matrix of an Euler form has even diagonal");
    v.to_i64().expect("q value fits in i64")
}

pub fn root_classify(gram: &IntMatrix, x: &[i64]) -> RootClass {
    RootClass::from_value(q_value(gram, x))
}

/// Open / closed-even / closed-odd by endpoints and length only.
pub fn expected_root_class(g: &RibbonGraph, w: &Walk) -> RootClass {
    if !w.is_closed(g) {
        RootClass::One
    } else if w.len().is_multiple_of(2) {
        RootClass::Zero
    } else {
        RootClass::Two
    }
}

/// Classes of string complexes up to a length bound, each with a canonical witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectClasses {
    pub max_len: usize,
    /// class → canonical (m, w) with m ∈ {0, 1}.
    pub classes: BTreeMap<Vec<i64>, (i64, Walk)>,
}

impl PerfectClasses {
    pub fn nonzero(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.classes.keys().filter(|x| x.iter().any(|&c| c != 0))
    }

    pub fn count_with_value(&self, gram: &IntMatrix, value: i64) -> usize {
        self.nonzero().filter(|x| q_value(gram, x) == value).count()
    }
}

pub fn enumerate_perfect_classes(
    g: &RibbonGraph,
    max_len: usize,
) -> Result<PerfectClasses, DerivedError> {
    if max_len > MAX_ENUMERATION_LEN {
        return Err(DerivedError::BoundTooLarge(max_len));
    }
    let mut classes: BTreeMap<Vec<i64>, (i64, Walk)> = BTreeMap::new();
    for w in enumerate_reduced_walks(g, max_len) {
        for m in 0..2 {
            let (cm, cw) = canonical_pair(g, m, &w)?;
            let x = StringComplex::build(g, cm, &cw)?.k0_class(g);
            let witness = (cm.rem_euclid(2), cw);
            classes
                .entry(x)
                .and_modify(|old| {
                    if (witness.1.len(), &witness.1, witness.0) < (old.1.len(), &old.1, old.0) {
                        *old = witness.clone();
                    }
                })
                .or_insert(witness);
        }
    }
    Ok(PerfectClasses { max_len, classes })
}

/// Counts behind the root-system statement for a positive Euler form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystemCheck {
    pub n: usize,
    pub multi_clock: bool,
    pub walk_nonzero: usize,
    pub walk_ones: usize,
    pub walk_twos: usize,
    pub box_ones: usize,
    pub box_twos: usize,
    /// Walk 1-roots coincide with all 1-roots of q, and walk 2-roots are 2-roots of q.
    pub sets_agree: bool,
}

impl RootSystemCheck {
    pub fn expected_total(&self) -> usize {
        if self.multi_clock {
            self.n * self.n + self.n
        } else {
            2 * self.n * self.n
        }
    }

    pub fn saturated(&self) -> bool {
        let ones_ok = self.multi_clock || self.walk_ones == 2 * (self.n * self.n - self.n);
        self.sets_agree
            && ones_ok
            && self.walk_nonzero == self.expected_total()
            && self.box_ones == self.walk_ones
    }
}

/// Compares walk classes with a brute-force enumeration of short vectors of q;
/// `None` when q is not positive definite.
pub fn root_system_check(
    gram: &IntMatrix,
    nabla: u8,
    classes: &PerfectClasses,
) -> Option<RootSystemCheck> {
    let short = short_vectors(gram, 2)?;
    let box_one: Vec<&Vec<i64>> = short
        .iter()
        .filter(|(_, v)| *v == 1)
        .map(|(x, _)| x)
        .collect();
    let box_two: std::collections::BTreeSet<&Vec<i64>> = short
        .iter()
        .filter(|(_, v)| *v == 2)
        .map(|(x, _)| x)
        .collect();
    let walk_one: std::collections::BTreeSet<&Vec<i64>> = classes
        .nonzero()
        .filter(|x| q_value(gram, x) == 1)
        .collect();
    let walk_two: Vec<&Vec<i64>> = classes
        .nonzero()
        .filter(|x| q_value(gram, x) == 2)
        .collect();
    let sets_agree = box_one.len() == walk_one.len()
        && box_one.iter().all(|x| walk_one.contains(x))
        && walk_two.iter().all(|x| box_two.contains(x))
        && classes.nonzero().all(|x| matches!(q_value(gram, x), 1 | 2));
    Some(RootSystemCheck {
        n: gram.rows(),
        multi_clock: nabla == 1,
        walk_nonzero: classes.nonzero().count(),
        walk_ones: walk_one.len(),
        walk_twos: walk_two.len(),
        box_ones: box_one.len(),
        box_twos: box_two.len(),
        sets_agree,
    })
}

/// The triangle X(m,w) → X(m+m(w), ₊w) ⊕ X(m, w₊) → X(m+m(w), ₊w₊) → X(m−1, w).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ARTriangle {
    pub start: StringComplex,
    /// Nonzero middle summands.
    pub middle: Vec<StringComplex>,
    pub end: StringComplex,
    pub shift: i64,
}

impl ARTriangle {
    /// [start] − Σ[middle] + [end].
    pub fn k0_defect(&self, g: &RibbonGraph) -> Vec<i64> {
        let mut v = self.start.k0_class(g);
        for x in &self.middle {
            for (a, b) in v.iter_mut().zip(x.k0_class(g)) {
                *a -= b;
            }
        }
        for (a, b) in v.iter_mut().zip(self.end.k0_class(g)) {
            *a += b;
        }
        v
    }

    pub fn to_json(&self, g: &RibbonGraph) -> Value {
        json!({
            "shift": self.shift,
            "start": {"m": self.start.m, "walk": self.start.walk.to_text(g)},
            "middle": self.middle.iter().map(|x| json!({"m": x.m, "walk": x.walk.to_text(g)})).collect::<Vec<_>>(),
            "end": {"m": self.end.m, "walk": self.end.walk.to_text(g)},
        })
    }
}

pub fn ar_translate(g: &RibbonGraph, m: i64, w: &Walk) -> Result<ARTriangle, DerivedError> {
    if !w.is_reduced() {
        return Err(DerivedError::NotReduced);
    }
    let p = plus_ops(g, w)?;
    let start = StringComplex::build(g, m, w)?;
    let mut middle = Vec::new();
    for (mm, ww) in [(m + p.m_shift, &p.left), (m, &p.right)] {
        if !ww.is_trivial() {
            middle.push(StringComplex::build(g, mm, ww)?);
        }
    }
    let end = StringComplex::build(g, m + p.m_shift, &p.both)?;
    Ok(ARTriangle {
        start,
        middle,
        end,
        shift: p.m_shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GentleInstance;

    fn loop_inst() -> GentleInstance {
        GentleInstance::from_quiver_text("vertices 1; arrow a1: 1 -> 1; rel a1.a1;").unwrap()
    }

    #[test]
    fn loop_complexes() {
        let inst = loop_inst();
        let g = &inst.graph;
        let w = Walk::parse("1 1 1", g).unwrap();
        let x = StringComplex::build(g, 0, &w).unwrap();
        assert_eq!(x.terms.len(), 3);
        assert!(x.maps.iter().all(|m| m.path == vec!["a1".to_string()]));
        let two = StringComplex::build(g, 0, &Walk::parse("1 1", g).unwrap()).unwrap();
        assert_eq!(two.k0_class(g), vec![0]);
    }

    #[test]
    fn loop_classes() {
        let inst = loop_inst();
        let pc = enumerate_perfect_classes(&inst.graph, 6).unwrap();
        let keys: Vec<_> = pc.classes.keys().cloned().collect();
        assert_eq!(keys, vec![vec![-1], vec![0], vec![1]]);
        assert!(enumerate_perfect_classes(&inst.graph, 40).is_err());
    }

    #[test]
    fn loop_triangle() {
        let inst = loop_inst();
        let g = &inst.graph;
        let t = ar_translate(g, 0, &Walk::parse("1", g).unwrap()).unwrap();
        assert_eq!(t.shift, -1);
        assert_eq!(t.middle.len(), 1);
        assert_eq!(t.middle[0].walk.to_text(g), "1 1");
        assert_eq!(t.end.walk.to_text(g), "1");
        assert_eq!(t.k0_defect(g), vec![0]);
    }
}
