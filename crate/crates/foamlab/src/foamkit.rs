//! Foam triples `(S, Delta, phi)` over the genus-0 real base.
//!
//! `Delta` is a generalized graph (segment edges between distinct
//! vertices, plus isolated circles). `S` is a disjoint union of component
//! covers with involution lifts, and `phi` glues each oval of each
//! component onto a closed walk in `Delta`. The normality conditions:
//!
//! (a) the walks cover all of `Delta`;
//! (b) each walk traverses its edges injectively (an embedded circle);
//! (c) per surface component, each open edge of `Delta` is hit by at most
//!     one arc of the fixed-point set;
//! (d) at each graph vertex, the link of the glued space is connected.
//!
//! An object satisfying everything except (c) is a pseudofoam.

use crate::error::{Error, Result};
use crate::permcore::all_permutations;
use crate::realcover::{
    admissible_component, realize_cw, validate_monodromy, ComponentCover, CWSurface, Oval,
    RealBase, UnionFind,
};

/// Component-count guard for the weak-isomorphism search.
pub const WEAK_ISO_COMPONENT_CAP: usize = 6;
/// Degree guard for the weak-isomorphism conjugation search.
pub const WEAK_ISO_DEGREE_CAP: usize = 8;

/// An edge of a generalized graph: a segment between two distinct
/// vertices, or an isolated circle (`ends = None`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub id: String,
    pub ends: Option<(usize, usize)>,
}

/// A generalized graph: ordinary multigraph edges plus isolated circles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<GraphEdge>,
}

impl GeneralizedGraph {
    /// The compressed base graph: a cycle with `n` vertices and arcs, or
    /// a single isolated circle when `n = 0`.
    pub fn base_cycle(n: usize) -> GeneralizedGraph {
        if n == 0 {
            return GeneralizedGraph {
                vertices: vec![],
                edges: vec![GraphEdge {
                    id: "c".into(),
                    ends: None,
                }],
            };
        }
        GeneralizedGraph {
            vertices: (1..=n).map(|j| format!("b{j}")).collect(),
            edges: (1..=n)
                .map(|i| GraphEdge {
                    id: format!("a{i}"),
                    ends: Some((i - 1, i % n)),
                })
                .collect(),
        }
    }
}

/// Structural report for a generalized graph.
#[derive(Clone, Debug, Default)]
pub struct GraphReport {
    pub self_loops: Vec<String>,
    pub duplicate_ids: Vec<String>,
    pub dangling_endpoints: Vec<String>,
}

impl GraphReport {
    pub fn is_valid(&self) -> bool {
        self.self_loops.is_empty()
            && self.duplicate_ids.is_empty()
            && self.dangling_endpoints.is_empty()
    }
}

/// Flags self-loop segments, duplicate identifiers, and out-of-range
/// endpoints.
pub fn validate_graph(g: &GeneralizedGraph) -> GraphReport {
    let mut report = GraphReport::default();
    let mut seen = std::collections::HashSet::new();
    for v in &g.vertices {
        if !seen.insert(format!("v:{v}")) {
            report.duplicate_ids.push(v.clone());
        }
    }
    for e in &g.edges {
        if !seen.insert(format!("e:{}", e.id)) {
            report.duplicate_ids.push(e.id.clone());
        }
        if let Some((a, b)) = e.ends {
            if a >= g.vertices.len() || b >= g.vertices.len() {
                report.dangling_endpoints.push(e.id.clone());
            } else if a == b {
                report.self_loops.push(e.id.clone());
            }
        }
    }
    report
}

/// Direction of one walk step along a segment edge. `Forward` runs from
/// `ends.0` to `ends.1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Forward,
    Backward,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Forward => Dir::Backward,
            Dir::Backward => Dir::Forward,
        }
    }
}

/// The gluing of one oval: a closed walk in the graph. `vertices[m]` is
/// the graph vertex between `steps[m]` and `steps[m+1]` (cyclically); a
/// walk along an isolated circle is a single step with no vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OvalWalk {
    pub component: usize,
    pub oval: usize,
    pub steps: Vec<(usize, Dir)>,
    pub vertices: Vec<usize>,
}

/// The full gluing map: one walk per oval of every component.
pub type GluingMap = Vec<OvalWalk>;

/// Outcome of the normality conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoamClass {
    Foam,
    Pseudofoam,
    Invalid,
}

/// Per-condition results; `classify` derives the headline verdict.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub graph_valid: bool,
    pub walks_valid: bool,
    pub cond_a: bool,
    pub cond_b: bool,
    pub cond_c: bool,
    pub cond_d: bool,
    pub connected: bool,
}

impl ConditionReport {
    pub fn classify(&self) -> FoamClass {
        let structural = self.graph_valid && self.walks_valid;
        if structural && self.cond_a && self.cond_b && self.cond_d && self.connected {
            if self.cond_c {
                FoamClass::Foam
            } else {
                FoamClass::Pseudofoam
            }
        } else {
            FoamClass::Invalid
        }
    }
}

/// A foam candidate: base, components with realized cell structures,
/// graph, gluing, and the stored condition report.
#[derive(Clone, Debug)]
pub struct Foam {
    pub base: RealBase,
    pub components: Vec<ComponentCover>,
    pub cw: Vec<CWSurface>,
    pub ovals: Vec<Vec<Oval>>,
    pub graph: GeneralizedGraph,
    pub gluing: GluingMap,
    pub report: ConditionReport,
}

impl Foam {
    pub fn classification(&self) -> FoamClass {
        self.report.classify()
    }

    /// Builds a foam from explicit parts and evaluates the conditions.
    /// Components must carry valid monodromy and lifts; the graph and
    /// walks are taken as supplied (structural defects show up in the
    /// report, out-of-range indices are hard errors).
    pub fn from_parts(
        base: RealBase,
        components: Vec<ComponentCover>,
        graph: GeneralizedGraph,
        gluing: GluingMap,
    ) -> Result<Foam> {
        let mut cw = Vec::new();
        let mut ovals = Vec::new();
        for c in &components {
            let rep = validate_monodromy(c);
            if !rep.all_valid() || c.lift.is_none() {
                return Err(Error::InvalidInput(format!(
                    "component '{}' lacks a valid monodromy/lift pair: {}",
                    c.name,
                    rep.failures().join("; ")
                )));
            }
            let t = c.lift.clone().expect("lift present");
            let surface = realize_cw(c, &t)?;
            let ov = surface.ovals()?;
            cw.push(surface);
            ovals.push(ov);
        }
        for w in &gluing {
            if w.component >= components.len() || w.oval >= ovals[w.component].len() {
                return Err(Error::InvalidInput(format!(
                    "walk references unknown oval ({}, {})",
                    w.component, w.oval
                )));
            }
            for &(e, _) in &w.steps {
                if e >= graph.edges.len() {
                    return Err(Error::InvalidInput(format!(
                        "walk references unknown edge index {e}"
                    )));
                }
            }
            for &v in &w.vertices {
                if v >= graph.vertices.len() {
                    return Err(Error::InvalidInput(format!(
                        "walk references unknown vertex index {v}"
                    )));
                }
            }
        }
        let mut foam = Foam {
            base,
            components,
            cw,
            ovals,
            graph,
            gluing,
            report: ConditionReport {
                graph_valid: false,
                walks_valid: false,
                cond_a: false,
                cond_b: false,
                cond_c: false,
                cond_d: false,
                connected: false,
            },
        };
        foam.report = check_foam_conditions(&foam);
        Ok(foam)
    }
}

fn walk_well_formed(g: &GeneralizedGraph, w: &OvalWalk) -> bool {
    if w.steps.is_empty() {
        return false;
    }
    // A circle step stands alone and carries no vertices.
    if w.steps.iter().any(|&(e, _)| g.edges[e].ends.is_none()) {
        return w.steps.len() == 1 && w.vertices.is_empty();
    }
    if w.vertices.len() != w.steps.len() {
        return false;
    }
    let m = w.steps.len();
    for i in 0..m {
        let (e, dir) = w.steps[i];
        let (a, b) = g.edges[e].ends.expect("segment");
        let exit = match dir {
            Dir::Forward => b,
            Dir::Backward => a,
        };
        if w.vertices[i] != exit {
            return false;
        }
        let (e2, dir2) = w.steps[(i + 1) % m];
        let (a2, b2) = g.edges[e2].ends.expect("segment");
        let entry = match dir2 {
            Dir::Forward => a2,
            Dir::Backward => b2,
        };
        if entry != exit {
            return false;
        }
    }
    true
}

/// Evaluates conditions (a)-(d) plus global connectedness of the glued
/// space; purely a report, never an error.
pub fn check_foam_conditions(f: &Foam) -> ConditionReport {
    let graph_valid = validate_graph(&f.graph).is_valid();

    // Exactly one walk per oval, each structurally a closed walk.
    let mut walks_valid = f.gluing.iter().all(|w| walk_well_formed(&f.graph, w));
    let mut seen_ovals = std::collections::HashSet::new();
    for w in &f.gluing {
        if !seen_ovals.insert((w.component, w.oval)) {
            walks_valid = false;
        }
    }
    let total_ovals: usize = f.ovals.iter().map(|o| o.len()).sum();
    if seen_ovals.len() != total_ovals {
        walks_valid = false;
    }

    // (a) every edge of Delta is in the image of phi.
    let mut covered = vec![false; f.graph.edges.len()];
    for w in &f.gluing {
        for &(e, _) in &w.steps {
            covered[e] = true;
        }
    }
    let cond_a = covered.iter().all(|&c| c);

    // (b) each walk hits each of its edges once (embedded circle).
    let cond_b = f.gluing.iter().all(|w| {
        let mut seen = std::collections::HashSet::new();
        w.steps.iter().all(|&(e, _)| seen.insert(e))
    });

    // (c) per component, each open edge meets at most one fixed arc.
    let mut cond_c = true;
    for ci in 0..f.components.len() {
        let mut hits = vec![0usize; f.graph.edges.len()];
        for w in f.gluing.iter().filter(|w| w.component == ci) {
            for &(e, _) in &w.steps {
                hits[e] += 1;
            }
        }
        if hits.iter().any(|&h| h > 1) {
            cond_c = false;
        }
    }

    // (d) the link at each graph vertex is connected. Nodes are the
    // edge-ends at the vertex; each surface point on a walk through the
    // vertex joins the edge-end it arrives on to the one it leaves on.
    let mut cond_d = true;
    if walks_valid && graph_valid {
        for v in 0..f.graph.vertices.len() {
            let mut node_ids = std::collections::HashMap::new();
            for (e, edge) in f.graph.edges.iter().enumerate() {
                if let Some((a, b)) = edge.ends {
                    if a == v {
                        node_ids.insert((e, 0u8), node_ids.len());
                    }
                    if b == v {
                        node_ids.insert((e, 1u8), node_ids.len());
                    }
                }
            }
            if node_ids.is_empty() {
                // An isolated graph vertex has an empty (disconnected by
                // convention) punctured neighbourhood.
                cond_d = false;
                continue;
            }
            let mut uf = UnionFind::new(node_ids.len());
            for w in &f.gluing {
                let m = w.steps.len();
                for i in 0..m.min(w.vertices.len().max(m)) {
                    if w.vertices.is_empty() || w.vertices[i % w.vertices.len()] != v {
                        continue;
                    }
                    let (e, dir) = w.steps[i];
                    let exit_end = match dir {
                        Dir::Forward => 1u8,
                        Dir::Backward => 0u8,
                    };
                    let (e2, dir2) = w.steps[(i + 1) % m];
                    let entry_end = match dir2 {
                        Dir::Forward => 0u8,
                        Dir::Backward => 1u8,
                    };
                    if let (Some(&x), Some(&y)) =
                        (node_ids.get(&(e, exit_end)), node_ids.get(&(e2, entry_end)))
                    {
                        uf.union(x, y);
                    }
                }
            }
            let mut roots = std::collections::HashSet::new();
            for i in 0..node_ids.len() {
                roots.insert(uf.find(i));
            }
            if roots.len() > 1 {
                cond_d = false;
            }
        }
    } else {
        cond_d = false;
    }

    // Connectedness of the glued space: graph cells plus components.
    let nv = f.graph.vertices.len();
    let ne = f.graph.edges.len();
    let nc = f.components.len();
    let mut uf = UnionFind::new(nv + ne + nc);
    for (e, edge) in f.graph.edges.iter().enumerate() {
        if let Some((a, b)) = edge.ends {
            if a < nv && b < nv {
                uf.union(nv + e, a);
                uf.union(nv + e, b);
            }
        }
    }
    for w in &f.gluing {
        for &(e, _) in &w.steps {
            uf.union(nv + ne + w.component, nv + e);
        }
    }
    let connected = if nv + ne + nc == 0 {
        false
    } else {
        let root = uf.find(0);
        (0..nv + ne + nc).all(|i| uf.find(i) == root)
    };

    ConditionReport {
        graph_valid,
        walks_valid,
        cond_a,
        cond_b,
        cond_c,
        cond_d,
        connected,
    }
}

/// Builds the compressed pseudofoam of a family of admissible components:
/// `Delta` is the base circle cut by the branch points, and each oval is
/// glued by its arc traversal.
pub fn assemble_compressed(base: RealBase, comps: &[ComponentCover]) -> Result<Foam> {
    let n = base.n;
    if n == 1 {
        return Err(Error::InvalidInput(
            "a single branch point cuts the circle into a self-loop, \
             which is not a generalized graph"
                .into(),
        ));
    }
    let mut components = Vec::new();
    let mut gluing: GluingMap = Vec::new();
    for (ci, c) in comps.iter().enumerate() {
        if c.points() != n {
            return Err(Error::InvalidInput(format!(
                "component '{}' has {} branch points, base has {n}",
                c.name,
                c.points()
            )));
        }
        let t = c.lift.clone().ok_or_else(|| {
            Error::InvalidInput(format!("component '{}' has no involution lift", c.name))
        })?;
        if !admissible_component(c, &t)? {
            return Err(Error::Inadmissible {
                name: c.name.clone(),
                detail: "an oval misses or repeats a base arc".into(),
            });
        }
        let cw = realize_cw(c, &t)?;
        let ovals = cw.ovals()?;
        for (oi, oval) in ovals.iter().enumerate() {
            if n == 0 {
                gluing.push(OvalWalk {
                    component: ci,
                    oval: oi,
                    steps: vec![(0, Dir::Forward)],
                    vertices: vec![],
                });
                continue;
            }
            let mut steps = Vec::new();
            let mut verts = Vec::new();
            for (m, &e) in oval.edges.iter().enumerate() {
                let arc = cw.edges[e].arc;
                let exit_branch = cw.vertices[oval.vertices[m]].branch;
                let dir = if exit_branch == arc % n + 1 && n > 1 {
                    Dir::Forward
                } else {
                    Dir::Backward
                };
                steps.push((arc - 1, dir));
                verts.push(exit_branch - 1);
            }
            gluing.push(OvalWalk {
                component: ci,
                oval: oi,
                steps,
                vertices: verts,
            });
        }
        components.push(c.clone());
    }
    Foam::from_parts(base, components, GeneralizedGraph::base_cycle(n), gluing)
}

/// Re-derives the compressed pseudofoam from the stored components;
/// idempotent on compressed foams.
pub fn compress(f: &Foam) -> Result<Foam> {
    assemble_compressed(f.base, &f.components)
}

/// Expansion data: a finer graph `Delta'` with a surjection onto the
/// foam's graph and reassigned walks that commute with it.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub graph: GeneralizedGraph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub gluing: GluingMap,
}

fn project_walk(exp: &Expansion, old: &GeneralizedGraph, w: &OvalWalk) -> Result<OvalWalk> {
    let mut steps = Vec::new();
    for &(e, dir) in &w.steps {
        let img = exp.edge_map[e];
        let dir = match (exp.graph.edges[e].ends, old.edges[img].ends) {
            (None, None) => dir,
            (Some((a, b)), Some((ia, ib))) => {
                let (ma, mb) = (exp.vertex_map[a], exp.vertex_map[b]);
                if (ma, mb) == (ia, ib) {
                    dir
                } else if (ma, mb) == (ib, ia) {
                    dir.flip()
                } else {
                    return Err(Error::InvalidExpansion(format!(
                        "edge '{}' does not map incidence-preservingly",
                        exp.graph.edges[e].id
                    )));
                }
            }
            _ => {
                return Err(Error::InvalidExpansion(format!(
                    "edge '{}' maps a circle to a segment or vice versa",
                    exp.graph.edges[e].id
                )))
            }
        };
        steps.push((img, dir));
    }
    let vertices = w.vertices.iter().map(|&v| exp.vertex_map[v]).collect();
    Ok(OvalWalk {
        component: w.component,
        oval: w.oval,
        steps,
        vertices,
    })
}

fn cyclically_equal(a: &OvalWalk, b: &OvalWalk) -> bool {
    if a.steps.len() != b.steps.len() {
        return false;
    }
    let m = a.steps.len();
    (0..m).any(|r| {
        (0..m).all(|i| a.steps[(i + r) % m] == b.steps[i])
            && (0..a.vertices.len()).all(|i| {
                a.vertices.is_empty() || a.vertices[(i + r) % m] == b.vertices[i]
            })
    })
}

/// Rebuilds a foam over the finer graph described by `expansion`,
/// validating surjectivity, incidence preservation, and commutation of
/// the reassigned walks; the result is checked from scratch.
pub fn expand(f: &Foam, expansion: &Expansion) -> Result<Foam> {
    let g = &expansion.graph;
    if !validate_graph(g).is_valid() {
        return Err(Error::InvalidExpansion("expanded graph is invalid".into()));
    }
    if expansion.vertex_map.len() != g.vertices.len()
        || expansion.edge_map.len() != g.edges.len()
    {
        return Err(Error::InvalidExpansion(
            "surjection tables do not match the expanded graph".into(),
        ));
    }
    if expansion
        .vertex_map
        .iter()
        .any(|&v| v >= f.graph.vertices.len())
        || expansion.edge_map.iter().any(|&e| e >= f.graph.edges.len())
    {
        return Err(Error::InvalidExpansion("surjection hits unknown cells".into()));
    }
    let mut v_hit = vec![false; f.graph.vertices.len()];
    for &v in &expansion.vertex_map {
        v_hit[v] = true;
    }
    let mut e_hit = vec![false; f.graph.edges.len()];
    for &e in &expansion.edge_map {
        e_hit[e] = true;
    }
    if !v_hit.iter().all(|&h| h) || !e_hit.iter().all(|&h| h) {
        return Err(Error::InvalidExpansion(
            "surjectivity violated: some cell of the base graph is not covered".into(),
        ));
    }
    // Every oval keeps a walk, and its projection matches the old walk.
    for old_walk in &f.gluing {
        let new_walk = expansion
            .gluing
            .iter()
            .find(|w| w.component == old_walk.component && w.oval == old_walk.oval)
            .ok_or_else(|| {
                Error::InvalidExpansion(format!(
                    "no reassigned walk for oval ({}, {})",
                    old_walk.component, old_walk.oval
                ))
            })?;
        let projected = project_walk(expansion, &f.graph, new_walk)?;
        if !cyclically_equal(&projected, old_walk) {
            return Err(Error::InvalidExpansion(format!(
                "walk for oval ({}, {}) does not commute with the surjection",
                old_walk.component, old_walk.oval
            )));
        }
    }
    Foam::from_parts(
        f.base,
        f.components.clone(),
        g.clone(),
        expansion.gluing.clone(),
    )
}

/// The identity expansion of a foam's own graph.
pub fn identity_expansion(f: &Foam) -> Expansion {
    Expansion {
        graph: f.graph.clone(),
        vertex_map: (0..f.graph.vertices.len()).collect(),
        edge_map: (0..f.graph.edges.len()).collect(),
        gluing: f.gluing.clone(),
    }
}

/// Rotates the base marking by `s` arcs: `p'_j = p_{j+s}` (cyclically)
/// and `t' = x -> C_s(t(x))`; the lift condition is preserved.
pub fn rotate_component(c: &ComponentCover, s: usize) -> Result<ComponentCover> {
    let n = c.points();
    if n == 0 || s == 0 {
        return Ok(c.clone());
    }
    let partials = c.partial_products()?;
    let monodromy = (0..n)
        .map(|j| c.monodromy[(j + s) % n].clone())
        .collect();
    let lift = match &c.lift {
        None => None,
        Some(t) => Some(t.compose(&partials[s % n])?),
    };
    Ok(ComponentCover {
        name: c.name.clone(),
        degree: c.degree,
        monodromy,
        lift,
    })
}

/// Reverses the base orientation: monodromy becomes
/// `(p_n^-1, .., p_1^-1)` with the lift kept. This relabeling is a
/// heuristic, available behind the `allow_reflection` flag only.
pub fn reflect_component(c: &ComponentCover) -> ComponentCover {
    let monodromy = c.monodromy.iter().rev().map(|p| p.inverse()).collect();
    ComponentCover {
        name: c.name.clone(),
        degree: c.degree,
        monodromy,
        lift: c.lift.clone(),
    }
}

fn components_match(a: &ComponentCover, b: &ComponentCover) -> bool {
    if a.degree != b.degree || a.points() != b.points() {
        return false;
    }
    let (ta, tb) = match (&a.lift, &b.lift) {
        (Some(x), Some(y)) => (x, y),
        _ => return false,
    };
    // Simultaneous conjugation q with q^-1 p q = p' for monodromy and lift.
    'outer: for q in all_permutations(a.degree) {
        let qi = q.inverse();
        for (pa, pb) in a.monodromy.iter().zip(&b.monodromy) {
            let conj = qi.compose(pa).and_then(|x| x.compose(&q));
            match conj {
                Ok(c) if &c == pb => {}
                _ => continue 'outer,
            }
        }
        match qi.compose(ta).and_then(|x| x.compose(&q)) {
            Ok(c) if &c == tb => return true,
            _ => {}
        }
    }
    false
}

fn match_all(
    left: &[ComponentCover],
    right: &[ComponentCover],
    used: &mut Vec<bool>,
    idx: usize,
) -> bool {
    if idx == left.len() {
        return true;
    }
    for j in 0..right.len() {
        if !used[j] && components_match(&left[idx], &right[j]) {
            used[j] = true;
            if match_all(left, right, used, idx + 1) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// Weak isomorphism: the compressed forms agree up to a rotation of the
/// base marking, a matching of components, and per-component
/// conjugations. `allow_reflection` additionally tries the
/// orientation-reversing relabeling (off by default in the CLI).
pub fn weak_iso(f1: &Foam, f2: &Foam, allow_reflection: bool) -> Result<bool> {
    for f in [f1, f2] {
        if f.components.len() > WEAK_ISO_COMPONENT_CAP {
            return Err(Error::Guardrail(format!(
                "weak_iso limited to {WEAK_ISO_COMPONENT_CAP} components"
            )));
        }
        if f.components.iter().any(|c| c.degree > WEAK_ISO_DEGREE_CAP) {
            return Err(Error::Guardrail(format!(
                "weak_iso limited to degree {WEAK_ISO_DEGREE_CAP}"
            )));
        }
    }
    let c1 = compress(f1)?;
    let c2 = compress(f2)?;
    if c1.base.n != c2.base.n || c1.components.len() != c2.components.len() {
        return Ok(false);
    }
    let n = c1.base.n;
    let rotations = if n == 0 { 1 } else { n };
    let mut candidates: Vec<Vec<ComponentCover>> = Vec::new();
    for s in 0..rotations {
        let rotated: Result<Vec<_>> =
            c1.components.iter().map(|c| rotate_component(c, s)).collect();
        candidates.push(rotated?);
    }
    if allow_reflection {
        let base: Vec<Vec<ComponentCover>> = candidates.clone();
        for cand in base {
            candidates.push(cand.iter().map(reflect_component).collect());
        }
    }
    for cand in &candidates {
        let mut used = vec![false; c2.components.len()];
        if match_all(cand, &c2.components, &mut used, 0) {
            return Ok(true);
        }
    }
    Ok(false)
}
