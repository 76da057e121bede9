//! One Klein-surface component over the genus-0 real base.
//!
//! The base is the Riemann sphere with `n` branch points `b_1..b_n` on the
//! real circle in counterclockwise order, arcs `e_i` from `b_i` to
//! `b_{i+1}`, and the basepoint on the circle inside arc `e_n`. The real
//! structure acts on the fundamental group by the fixed convention
//! `sigma*(x_j) = c_{j-1} x_j^-1 c_{j-1}^-1` with `c_j = x_1..x_j`, which
//! makes `sigma*` an exact involution.
//!
//! Cellular model of a cover with monodromy `(p_1..p_n)`: the sphere is
//! cut along the circle into two hemisphere disks, each lifting to `d`
//! faces. The arc lift over `e_i` indexed by upper sheet `s` borders the
//! upper face `s` and the lower face `C_i^-1(s)`, where `C_i` is the image
//! of `c_i`. With this gluing the standard generator `x_j` has monodromy
//! exactly `p_j` and the vertices over `b_j` are the cycles of `p_j`.

use crate::error::{Error, Result};
use crate::permcore::{
    all_permutations, word_image, FreeGroupContext, Permutation, Word,
};

/// Cap on cells a single complex may allocate.
pub const CELL_LIMIT: usize = 1_000_000;
/// Cap on the degree for brute-force lift searches.
pub const LIFT_SEARCH_DEGREE_CAP: usize = 8;

/// The genus-0 base with `n` branch points on its single real circle.
/// `n = 0` is the model foam base: one vertex-free circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RealBase {
    pub n: usize,
}

impl RealBase {
    pub fn new(n: usize) -> Self {
        RealBase { n }
    }

    pub fn ctx(&self) -> FreeGroupContext {
        FreeGroupContext::new(self.n)
    }
}

/// One component `(S_i, tau_i)`: branch monodromy plus an optional
/// involution lift.
#[derive(Clone, Debug)]
pub struct ComponentCover {
    pub name: String,
    pub degree: usize,
    pub monodromy: Vec<Permutation>,
    pub lift: Option<Permutation>,
}

impl ComponentCover {
    pub fn new(name: impl Into<String>, degree: usize, monodromy: Vec<Permutation>) -> Self {
        ComponentCover {
            name: name.into(),
            degree,
            monodromy,
            lift: None,
        }
    }

    pub fn with_lift(mut self, t: Permutation) -> Self {
        self.lift = Some(t);
        self
    }

    pub fn points(&self) -> usize {
        self.monodromy.len()
    }

    /// Partial products `C_0..C_n` with `C_i` the image of `x_1..x_i`.
    pub fn partial_products(&self) -> Result<Vec<Permutation>> {
        let mut out = Vec::with_capacity(self.points() + 1);
        let mut acc = Permutation::identity(self.degree);
        out.push(acc.clone());
        for p in &self.monodromy {
            acc = acc.compose(p)?;
            out.push(acc.clone());
        }
        Ok(out)
    }
}

/// The fixed word `sigma*(x_j) = c_{j-1} x_j^-1 c_{j-1}^-1`.
pub fn sigma_star(ctx: &FreeGroupContext, j: usize) -> Result<Word> {
    if j < 1 || j > ctx.n {
        return Err(Error::GeneratorOutOfRange(j as i64, ctx.n));
    }
    let mut letters: Vec<i64> = (1..j as i64).collect();
    letters.push(-(j as i64));
    letters.extend((1..j as i64).rev().map(|k| -k));
    Word::from_letters(letters)
}

/// `sigma*` for every generator.
pub fn sigma_words(ctx: &FreeGroupContext) -> Vec<Word> {
    (1..=ctx.n)
        .map(|j| sigma_star(ctx, j).expect("j in range"))
        .collect()
}

/// Applies `sigma*` letter by letter to a whole word (freely reduced).
pub fn sigma_star_word(ctx: &FreeGroupContext, w: &Word) -> Result<Word> {
    let mut out = Word::empty();
    for &l in w.letters() {
        let j = l.unsigned_abs() as usize;
        let img = sigma_star(ctx, j)?;
        out = out.concat(&if l > 0 { img } else { img.inverse() });
    }
    Ok(out.reduce())
}

/// Validation report for a component's monodromy and lift.
#[derive(Clone, Debug)]
pub struct MonodromyReport {
    pub degrees_consistent: bool,
    pub product_identity: bool,
    pub transitive: bool,
    /// None when no lift is attached.
    pub lift_involution: Option<bool>,
    pub lift_condition: Option<bool>,
}

impl MonodromyReport {
    pub fn monodromy_valid(&self) -> bool {
        self.degrees_consistent && self.product_identity && self.transitive
    }

    pub fn all_valid(&self) -> bool {
        self.monodromy_valid()
            && self.lift_involution.unwrap_or(true)
            && self.lift_condition.unwrap_or(true)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut f = Vec::new();
        if !self.degrees_consistent {
            f.push("monodromy degrees inconsistent");
        }
        if !self.product_identity {
            f.push("monodromy product is not the identity");
        }
        if !self.transitive {
            f.push("monodromy is not transitive (cover disconnected)");
        }
        if self.lift_involution == Some(false) {
            f.push("lift is not an involution");
        }
        if self.lift_condition == Some(false) {
            f.push("lift does not satisfy t p_j t = rho(sigma*(x_j))");
        }
        f
    }
}

fn tuple_transitive(degree: usize, monodromy: &[Permutation]) -> bool {
    let mut seen = vec![false; degree];
    seen[0] = true;
    let mut stack = vec![1usize];
    while let Some(x) = stack.pop() {
        for p in monodromy {
            for y in [p.apply(x), p.inverse().apply(x)] {
                if !seen[y - 1] {
                    seen[y - 1] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Whether `t` satisfies `t p_j t = rho(sigma*(x_j))` for all `j`.
pub fn lift_condition_holds(c: &ComponentCover, t: &Permutation) -> Result<bool> {
    if t.degree() != c.degree {
        return Ok(false);
    }
    let ctx = FreeGroupContext::new(c.points());
    for j in 1..=c.points() {
        let lhs = t.compose(&c.monodromy[j - 1])?.compose(t)?;
        let rhs = word_image(&sigma_star(&ctx, j)?, &c.monodromy)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks product identity, transitivity, and (when a lift is attached)
/// the involution and conjugation conditions. Failures go in the report.
pub fn validate_monodromy(c: &ComponentCover) -> MonodromyReport {
    let degrees_consistent =
        c.degree >= 1 && c.monodromy.iter().all(|p| p.degree() == c.degree);
    let (product_identity, transitive) = if degrees_consistent {
        let prod = c
            .partial_products()
            .map(|ps| ps.last().expect("C_0 exists").clone());
        (
            prod.map(|p| p.is_identity()).unwrap_or(false),
            tuple_transitive(c.degree, &c.monodromy),
        )
    } else {
        (false, false)
    };
    let (lift_involution, lift_condition) = match &c.lift {
        None => (None, None),
        Some(t) => {
            let inv = t.degree() == c.degree && t.is_involution();
            let cond = if degrees_consistent {
                lift_condition_holds(c, t).unwrap_or(false)
            } else {
                false
            };
            (Some(inv), Some(cond))
        }
    };
    MonodromyReport {
        degrees_consistent,
        product_identity,
        transitive,
        lift_involution,
        lift_condition,
    }
}

fn require_valid(c: &ComponentCover) -> Result<()> {
    let rep = validate_monodromy(c);
    if !rep.monodromy_valid() {
        return Err(Error::InvalidInput(format!(
            "component '{}': {}",
            c.name,
            rep.failures().join("; ")
        )));
    }
    Ok(())
}

/// Genus by Riemann-Hurwitz: `chi = 2d - sum_j (d - cycles(p_j))`.
pub fn genus_rh(c: &ComponentCover) -> Result<usize> {
    require_valid(c)?;
    let d = c.degree as i64;
    let mut chi = 2 * d;
    for p in &c.monodromy {
        chi -= d - p.cycle_count() as i64;
    }
    if chi % 2 != 0 || chi > 2 {
        return Err(Error::Internal(format!(
            "impossible Euler characteristic {chi} for a connected cover"
        )));
    }
    Ok(((2 - chi) / 2) as usize)
}

/// All involutions `t` with `t p_j t = rho(sigma*(x_j))`, in lexicographic
/// order of image arrays. May be empty.
pub fn involution_lifts(c: &ComponentCover) -> Result<Vec<Permutation>> {
    require_valid(c)?;
    if c.degree > LIFT_SEARCH_DEGREE_CAP {
        return Err(Error::Guardrail(format!(
            "lift search limited to degree {LIFT_SEARCH_DEGREE_CAP}, got {}",
            c.degree
        )));
    }
    let mut out = Vec::new();
    for t in all_permutations(c.degree) {
        if t.is_involution() && lift_condition_holds(c, &t)? {
            out.push(t);
        }
    }
    Ok(out)
}

/// A 0-cell: a cycle of `p_branch` (1-based branch index).
#[derive(Clone, Debug)]
pub struct VertexCell {
    pub branch: usize,
    pub cycle: Vec<usize>,
}

/// A 1-cell over arc `arc` (1-based), indexed by its upper sheet. `ends`,
/// when present, are vertex indices at `b_arc` and `b_{arc+1}`. The `n=0`
/// base circle is the single edge with no ends.
#[derive(Clone, Debug)]
pub struct EdgeCell {
    pub arc: usize,
    pub sheet: usize,
    pub ends: Option<(usize, usize)>,
}

/// A 2-cell: a lifted hemisphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceCell {
    Upper(usize),
    Lower(usize),
}

/// The cellular involution as index maps on the three cell lists.
#[derive(Clone, Debug)]
pub struct CellInvolution {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub face_map: Vec<usize>,
}

/// An oval: a cyclic list of fixed edge cells; `vertices[m]` sits between
/// `edges[m]` and `edges[m+1]` (empty for the vertex-free circle).
#[derive(Clone, Debug)]
pub struct Oval {
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

/// Cellular realization of a component cover, optionally with the
/// involution induced by a lift.
#[derive(Clone, Debug)]
pub struct CWSurface {
    pub degree: usize,
    pub arcs: usize,
    pub vertices: Vec<VertexCell>,
    pub edges: Vec<EdgeCell>,
    pub faces: Vec<FaceCell>,
    pub involution: Option<CellInvolution>,
    /// Partial products `C_0..C_n`.
    partials: Vec<Permutation>,
}

impl CWSurface {
    fn build(c: &ComponentCover, t: Option<&Permutation>) -> Result<CWSurface> {
        require_valid(c)?;
        let d = c.degree;
        let n = c.points();
        if let Some(t) = t {
            if !(t.degree() == d && t.is_involution() && lift_condition_holds(c, t)?) {
                return Err(Error::InvalidInput(format!(
                    "component '{}': '{}' is not a valid involution lift",
                    c.name, t
                )));
            }
        }
        let partials = c.partial_products()?;

        if n == 0 {
            // Special two-cell base structure: one vertex-free circle edge
            // and two hemisphere faces. Only the trivial cover lives here.
            if d != 1 {
                return Err(Error::InvalidInput(
                    "only degree-1 covers exist over the vertex-free base".into(),
                ));
            }
            let involution = t.map(|_| CellInvolution {
                vertex_map: vec![],
                edge_map: vec![0],
                face_map: vec![1, 0],
            });
            let cw = CWSurface {
                degree: d,
                arcs: 0,
                vertices: vec![],
                edges: vec![EdgeCell {
                    arc: 0,
                    sheet: 1,
                    ends: None,
                }],
                faces: vec![FaceCell::Upper(1), FaceCell::Lower(1)],
                involution,
                partials,
            };
            cw.verify(c)?;
            return Ok(cw);
        }

        let cell_count = n * d + n * d + 2 * d;
        if cell_count > CELL_LIMIT {
            return Err(Error::CellLimit(cell_count, CELL_LIMIT));
        }

        let mut vertices = Vec::new();
        let mut vertex_at = vec![vec![0usize; d]; n];
        for j in 1..=n {
            for cyc in c.monodromy[j - 1].cycles() {
                let idx = vertices.len();
                for &s in &cyc {
                    vertex_at[j - 1][s - 1] = idx;
                }
                vertices.push(VertexCell { branch: j, cycle: cyc });
            }
        }

        let mut edges = Vec::with_capacity(n * d);
        for i in 1..=n {
            let next = i % n + 1;
            for s in 1..=d {
                edges.push(EdgeCell {
                    arc: i,
                    sheet: s,
                    ends: Some((vertex_at[i - 1][s - 1], vertex_at[next - 1][s - 1])),
                });
            }
        }

        let mut faces = Vec::with_capacity(2 * d);
        for s in 1..=d {
            faces.push(FaceCell::Upper(s));
        }
        for r in 1..=d {
            faces.push(FaceCell::Lower(r));
        }

        let involution = t.map(|t| {
            let vertex_map = vertices
                .iter()
                
                .map(|v| {
                    let a = v.cycle[0];
                    let image = partials[v.branch].apply(t.apply(a));
                    vertex_at[v.branch - 1][image - 1]
                })
                .collect();
            let edge_map = edges
                .iter()
                .map(|e| {
                    let image = partials[e.arc].apply(t.apply(e.sheet));
                    (e.arc - 1) * d + (image - 1)
                })
                .collect();
            let face_map = (0..2 * d)
                .map(|f| {
                    if f < d {
                        d + t.apply(f + 1) - 1
                    } else {
                        t.apply(f - d + 1) - 1
                    }
                })
                .collect();
            CellInvolution {
                vertex_map,
                edge_map,
                face_map,
            }
        });

        let cw = CWSurface {
            degree: d,
            arcs: n,
            vertices,
            edges,
            faces,
            involution,
            partials,
        };
        cw.verify(c)?;
        Ok(cw)
    }

    /// Euler characteristic; the vertex-free circle contributes 0, so the
    /// `n = 0` sphere still has chi = 2.
    pub fn euler_characteristic(&self) -> i64 {
        if self.arcs == 0 {
            return 2;
        }
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn genus(&self) -> Result<usize> {
        let chi = self.euler_characteristic();
        if chi % 2 != 0 || chi > 2 {
            return Err(Error::Internal(format!("bad Euler characteristic {chi}")));
        }
        Ok(((2 - chi) / 2) as usize)
    }

    /// The two faces bordering an edge: `Upper(s)` and `Lower(C_i^-1(s))`.
    fn edge_faces(&self, e: usize) -> (usize, usize) {
        let d = self.degree;
        if self.arcs == 0 {
            return (0, 1);
        }
        let edge = &self.edges[e];
        let lower = self.partials[edge.arc].inverse().apply(edge.sheet);
        (edge.sheet - 1, d + lower - 1)
    }

    fn is_connected(&self) -> bool {
        let nv = self.vertices.len();
        let ne = self.edges.len();
        let nf = self.faces.len();
        let total = nv + ne + nf;
        if total == 0 {
            return true;
        }
        let mut uf = UnionFind::new(total);
        for (ei, e) in self.edges.iter().enumerate() {
            if let Some((a, b)) = e.ends {
                uf.union(nv + ei, a);
                uf.union(nv + ei, b);
            }
            let (fa, fb) = self.edge_faces(ei);
            uf.union(nv + ei, nv + ne + fa);
            uf.union(nv + ei, nv + ne + fb);
        }
        let root = uf.find(0);
        (0..total).all(|i| uf.find(i) == root)
    }

    /// Programmatic check of every structural invariant; run at build time.
    fn verify(&self, c: &ComponentCover) -> Result<()> {
        let chi = self.euler_characteristic();
        if chi % 2 != 0 {
            return Err(Error::Internal(format!("odd Euler characteristic {chi}")));
        }
        let g = genus_rh(c)?;
        if self.genus()? != g {
            return Err(Error::Internal(format!(
                "cellular genus {} disagrees with Riemann-Hurwitz {g}",
                self.genus()?
            )));
        }
        if !self.is_connected() {
            return Err(Error::Internal("complex is not connected".into()));
        }
        if let Some(inv) = &self.involution {
            for (i, &m) in inv.vertex_map.iter().enumerate() {
                if inv.vertex_map[m] != i {
                    return Err(Error::Internal("vertex map is not an involution".into()));
                }
            }
            for (i, &m) in inv.edge_map.iter().enumerate() {
                if inv.edge_map[m] != i {
                    return Err(Error::Internal("edge map is not an involution".into()));
                }
                // Boundary compatibility: ends map to mapped ends.
                match (self.edges[i].ends, self.edges[m].ends) {
                    (Some((a, b)), Some((a2, b2))) => {
                        if inv.vertex_map[a] != a2 || inv.vertex_map[b] != b2 {
                            return Err(Error::Internal(
                                "edge map does not commute with boundary".into(),
                            ));
                        }
                    }
                    (None, None) => {}
                    _ => {
                        return Err(Error::Internal(
                            "edge map mixes circle and segment cells".into(),
                        ))
                    }
                }
                let (fa, fb) = self.edge_faces(i);
                let (ga, gb) = self.edge_faces(m);
                if !(inv.face_map[fa] == gb && inv.face_map[fb] == ga)
                    && !(inv.face_map[fa] == ga && inv.face_map[fb] == gb)
                {
                    return Err(Error::Internal(
                        "edge map does not commute with face incidence".into(),
                    ));
                }
            }
            for (i, &m) in inv.face_map.iter().enumerate() {
                if inv.face_map[m] != i {
                    return Err(Error::Internal("face map is not an involution".into()));
                }
                let swaps = matches!(
                    (self.faces[i], self.faces[m]),
                    (FaceCell::Upper(_), FaceCell::Lower(_))
                        | (FaceCell::Lower(_), FaceCell::Upper(_))
                );
                if !swaps {
                    return Err(Error::Internal(
                        "involution must exchange hemisphere families".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn fixed_edges(&self) -> Vec<usize> {
        match &self.involution {
            None => vec![],
            Some(inv) => (0..self.edges.len())
                .filter(|&e| inv.edge_map[e] == e)
                .collect(),
        }
    }

    pub fn fixed_vertices(&self) -> Vec<usize> {
        match &self.involution {
            None => vec![],
            Some(inv) => (0..self.vertices.len())
                .filter(|&v| inv.vertex_map[v] == v)
                .collect(),
        }
    }

    /// Connected components of the fixed subcomplex, each certified to be
    /// a circle (every fixed vertex carries exactly two fixed edge-ends).
    pub fn ovals(&self) -> Result<Vec<Oval>> {
        let inv = self
            .involution
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("no involution attached".into()))?;
        if self.arcs == 0 {
            // The fixed set is the base circle itself.
            debug_assert_eq!(inv.edge_map, vec![0]);
            return Ok(vec![Oval {
                edges: vec![0],
                vertices: vec![],
            }]);
        }
        let fixed_edges = self.fixed_edges();
        let fixed_vertex: Vec<bool> = (0..self.vertices.len())
            .map(|v| inv.vertex_map[v] == v)
            .collect();
        // Fixed edge-ends per fixed vertex.
        let mut ends_at: Vec<Vec<(usize, u8)>> = vec![Vec::new(); self.vertices.len()];
        for &e in &fixed_edges {
            let (a, b) = self.edges[e].ends.expect("segments for n >= 1");
            if !fixed_vertex[a] || !fixed_vertex[b] {
                return Err(Error::Internal(
                    "fixed edge with a non-fixed endpoint".into(),
                ));
            }
            ends_at[a].push((e, 0));
            ends_at[b].push((e, 1));
        }
        for (v, ends) in ends_at.iter().enumerate() {
            if fixed_vertex[v] && ends.len() != 2 {
                return Err(Error::Internal(format!(
                    "fixed subcomplex is not a 1-manifold: vertex {v} has {} fixed edge-ends",
                    ends.len()
                )));
            }
        }
        let mut visited = vec![false; self.edges.len()];
        let mut ovals = Vec::new();
        for &start in &fixed_edges {
            if visited[start] {
                continue;
            }
            let mut edges = Vec::new();
            let mut verts = Vec::new();
            let mut cur = start;
            let mut exit_end: u8 = 1;
            loop {
                visited[cur] = true;
                edges.push(cur);
                let (a, b) = self.edges[cur].ends.expect("segment");
                let v = if exit_end == 0 { a } else { b };
                verts.push(v);
                let (nxt, enter_end) = *ends_at[v]
                    .iter()
                    .find(|&&(e, end)| !(e == cur && end == exit_end))
                    .ok_or_else(|| Error::Internal("broken oval walk".into()))?;
                if nxt == start && enter_end == 0 {
                    break;
                }
                cur = nxt;
                exit_end = 1 - enter_end;
            }
            ovals.push(Oval {
                edges,
                vertices: verts,
            });
        }
        Ok(ovals)
    }

    /// Components of the complement of the fixed set; the quotient by the
    /// involution is orientable iff the ovals separate the surface.
    pub fn quotient_orientable(&self) -> Result<bool> {
        let inv = self
            .involution
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("no involution attached".into()))?;
        if self.arcs == 0 {
            return Ok(true); // sphere minus its circle: two disks
        }
        let nv = self.vertices.len();
        let ne = self.edges.len();
        let nf = self.faces.len();
        let mut uf = UnionFind::new(nv + ne + nf);
        let edge_fixed = |e: usize| inv.edge_map[e] == e;
        let vert_fixed = |v: usize| inv.vertex_map[v] == v;
        for e in 0..ne {
            if edge_fixed(e) {
                continue;
            }
            let (fa, fb) = self.edge_faces(e);
            uf.union(nv + e, nv + ne + fa);
            uf.union(nv + e, nv + ne + fb);
            if let Some((a, b)) = self.edges[e].ends {
                if !vert_fixed(a) {
                    uf.union(nv + e, a);
                }
                if !vert_fixed(b) {
                    uf.union(nv + e, b);
                }
            }
        }
        let mut roots = std::collections::HashSet::new();
        for f in 0..nf {
            roots.insert(uf.find(nv + ne + f));
        }
        Ok(roots.len() >= 2)
    }
}

/// Builds the cellular realization of a cover with its involution lift,
/// verifying every structural invariant programmatically.
pub fn realize_cw(c: &ComponentCover, t: &Permutation) -> Result<CWSurface> {
    CWSurface::build(c, Some(t))
}

/// Cellular realization without an involution (Euler-characteristic use).
pub fn realize_cw_bare(c: &ComponentCover) -> Result<CWSurface> {
    CWSurface::build(c, None)
}

/// Number of ovals and the ovals themselves, via the fixed subcomplex.
pub fn count_ovals(c: &ComponentCover, t: &Permutation) -> Result<(usize, Vec<Oval>)> {
    let cw = realize_cw(c, t)?;
    let ovals = cw.ovals()?;
    Ok((ovals.len(), ovals))
}

/// Admissibility: every oval traverses each base arc exactly once.
pub fn admissible_component(c: &ComponentCover, t: &Permutation) -> Result<bool> {
    let cw = realize_cw(c, t)?;
    let ovals = cw.ovals()?;
    if c.points() == 0 {
        return Ok(true);
    }
    for oval in &ovals {
        let mut per_arc = vec![0usize; c.points()];
        for &e in &oval.edges {
            per_arc[cw.edges[e].arc - 1] += 1;
        }
        if per_arc.iter().any(|&k| k != 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Plain union-find used by the cellular computations.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
        }
    }
}
