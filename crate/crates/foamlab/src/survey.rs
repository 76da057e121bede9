//! Bound checks and exhaustive small-degree enumeration.
//!
//! The three oval-count corollaries are evaluated in exact integer
//! arithmetic (the fractional `2^(r-3)` term is held in eighths). Their
//! hypotheses are keyed to the tau-hat-level predicates used in their
//! proofs: pairwise distinctness of the involutions for the `42(g-1)`
//! bound, pairwise non-conjugacy (the proxy for "not weakly equivalent")
//! for the other two.

use crate::error::{Error, Result};
use crate::famforge::{
    build_family, verify_axioms, families_equivalent, EquippedFamily, LiftPolicy,
};
use crate::permcore::{all_permutations, Permutation};
use crate::realcover::{
    admissible_component, involution_lifts, realize_cw, validate_monodromy, ComponentCover,
    RealBase,
};

/// Default guardrails for enumeration.
pub const DEFAULT_MAX_DEGREE: usize = 3;
pub const DEFAULT_MAX_POINTS: usize = 4;
pub const DEFAULT_MAX_COMPONENTS: usize = 2;

/// How two real forms of the regular cover relate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormRelation {
    Equal,
    Conjugate,
    NonConjugate,
}

/// Pairwise comparison of the involutions `tau_hat_i`. Equality is
/// literal; conjugacy is brute-forced over the extended group
/// `G cup G*tau_hat_1` acting on the sheets (deck transformations are
/// left multiplications). Non-conjugacy is the implemented proxy for
/// "not weakly equivalent".
pub fn classify_real_forms(f: &EquippedFamily) -> Vec<Vec<FormRelation>> {
    let order = f.group.order();
    let mut extended: Vec<Permutation> = Vec::with_capacity(2 * order);
    for g in 0..order {
        let images = (0..order).map(|x| f.group.mul(g, x) + 1).collect();
        extended.push(Permutation::from_images(images).expect("bijection"));
    }
    let tau1 = &f.tau_hats[0];
    let with_tau: Vec<Permutation> = extended
        .iter()
        .map(|u| u.compose(tau1).expect("same degree"))
        .collect();
    extended.extend(with_tau);

    let r = f.r();
    let mut matrix = vec![vec![FormRelation::Equal; r]; r];
    #[allow(clippy::needless_range_loop)]
    for i in 0..r {
        for j in 0..r {
            if f.tau_hats[i] == f.tau_hats[j] {
                matrix[i][j] = FormRelation::Equal;
                continue;
            }
            let conj = extended.iter().any(|u| {
                u.inverse()
                    .compose(&f.tau_hats[i])
                    .and_then(|x| x.compose(u))
                    .map(|x| x == f.tau_hats[j])
                    .unwrap_or(false)
            });
            matrix[i][j] = if conj {
                FormRelation::Conjugate
            } else {
                FormRelation::NonConjugate
            };
        }
    }
    matrix
}

/// Whether `S_i / tau_i = S_hat / G_i` is orientable: true iff the ovals
/// separate the component surface.
pub fn component_quotient_orientable(f: &EquippedFamily, i: usize) -> Result<bool> {
    let c = &f.components[i];
    let t = c
        .lift
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("component has no lift".into()))?;
    realize_cw(c, t)?.quotient_orientable()
}

/// `42(hat_g - 1)`, the ceiling for both oval sums.
pub fn oval_sum_ceiling(hat_genus: usize) -> i64 {
    42 * (hat_genus as i64 - 1)
}

/// Integer square root (floor).
fn isqrt(x: i64) -> i64 {
    if x < 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as i64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Exact check of `r <= 2(sqrt(hat_g) + 1)`.
pub fn real_form_count_bound_holds(r: usize, hat_genus: usize) -> bool {
    let (r, g) = (r as i64, hat_genus as i64);
    r <= 2 || (r - 2) * (r - 2) <= 4 * g
}

/// `2(sqrt(hat_g) + 1)` as an exact integer when `hat_g` is a perfect
/// square (for display), `None` otherwise.
pub fn real_form_count_rhs_exact(hat_genus: usize) -> Option<i64> {
    let g = hat_genus as i64;
    let s = isqrt(g);
    (s * s == g).then_some(2 * (s + 1))
}

/// The cap on `r` for even `hat_g`.
pub const EVEN_GENUS_FORM_CAP: i64 = 4;

/// `2 hat_g - 2 + 2^(r-3)(9 - r)` held in eighths so the `r < 3` cases
/// stay integral.
pub fn sharp_oval_rhs_eighths(hat_genus: usize, r: usize) -> i64 {
    let (g, r) = (hat_genus as i64, r as i64);
    8 * (2 * g - 2) + (1i64 << r.min(60)) * (9 - r)
}

/// The weaker cap `2 hat_g + 30` (strict).
pub fn weak_oval_cap(hat_genus: usize) -> i64 {
    2 * hat_genus as i64 + 30
}

/// One evaluated inequality.
#[derive(Clone, Debug)]
pub struct BoundRecord {
    pub name: &'static str,
    pub applicable: bool,
    pub reason: String,
    pub lhs: i64,
    pub rhs_display: String,
    /// Exact `lhs <= rhs`, evaluated whenever `applicable`.
    pub holds: bool,
}

/// The full bound suite plus its hypothesis diagnostics.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub records: Vec<BoundRecord>,
    pub relations: Vec<Vec<FormRelation>>,
    pub all_distinct: bool,
    pub all_nonconjugate: bool,
    pub quotients_orientable: Vec<bool>,
}

impl BoundReport {
    /// No applicable record fails.
    pub fn all_hold(&self) -> bool {
        self.records.iter().all(|r| !r.applicable || r.holds)
    }
}

/// Evaluates the three corollary bounds. Everything below `hat_g > 1` is
/// reported "not applicable", mirroring the scope of the statements.
pub fn check_corollaries(f: &EquippedFamily) -> Result<BoundReport> {
    let relations = classify_real_forms(f);
    let r = f.r();
    let mut all_distinct = true;
    let mut all_nonconjugate = true;
    #[allow(clippy::needless_range_loop)]
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            if relations[i][j] == FormRelation::Equal {
                all_distinct = false;
            }
            if relations[i][j] != FormRelation::NonConjugate {
                all_nonconjugate = false;
            }
        }
    }
    let quotients_orientable: Vec<bool> = (0..r)
        .map(|i| component_quotient_orientable(f, i))
        .collect::<Result<_>>()?;

    let hat = f.hat_genus as i64;
    let genus_ok = f.hat_genus > 1;
    let sum_k: i64 = f.component_ovals.iter().map(|&k| k as i64).sum();
    let sum_k_hat: i64 = f.hat_ovals.iter().map(|&k| k as i64).sum();
    let ri = r as i64;

    let mut records = Vec::new();

    let c1_applicable = genus_ok && all_distinct;
    let c1_reason = if !genus_ok {
        "requires hat_g > 1".to_string()
    } else if !all_distinct {
        "requires pairwise distinct involutions".to_string()
    } else {
        "hypotheses satisfied".to_string()
    };
    let ceiling = oval_sum_ceiling(f.hat_genus);
    records.push(BoundRecord {
        name: "oval-sum bound (real forms)",
        applicable: c1_applicable,
        reason: c1_reason.clone(),
        lhs: sum_k,
        rhs_display: format!("42(hat_g - 1) = {ceiling}"),
        holds: sum_k <= ceiling,
    });
    records.push(BoundRecord {
        name: "oval-sum bound (regular-cover forms)",
        applicable: c1_applicable,
        reason: c1_reason,
        lhs: sum_k_hat,
        rhs_display: format!("42(hat_g - 1) = {ceiling}"),
        holds: sum_k_hat <= ceiling,
    });

    let c2_applicable = genus_ok && all_nonconjugate;
    let c2_reason = if !genus_ok {
        "requires hat_g > 1".to_string()
    } else if !all_nonconjugate {
        "requires pairwise non-conjugate involutions".to_string()
    } else {
        "hypotheses satisfied".to_string()
    };
    // r <= 2(sqrt(hat_g) + 1), exactly: r <= 2 or (r - 2)^2 <= 4 hat_g.
    records.push(BoundRecord {
        name: "real-form count bound",
        applicable: c2_applicable,
        reason: c2_reason.clone(),
        lhs: ri,
        rhs_display: match real_form_count_rhs_exact(f.hat_genus) {
            Some(v) => format!("2(sqrt(hat_g) + 1) = {v}"),
            None => "2(sqrt(hat_g) + 1)".to_string(),
        },
        holds: real_form_count_bound_holds(f.r(), f.hat_genus),
    });
    records.push(BoundRecord {
        name: "real-form count bound (even genus)",
        applicable: c2_applicable && hat % 2 == 0,
        reason: if hat % 2 == 0 {
            c2_reason
        } else {
            "requires even hat_g".to_string()
        },
        lhs: ri,
        rhs_display: EVEN_GENUS_FORM_CAP.to_string(),
        holds: ri <= EVEN_GENUS_FORM_CAP,
    });

    let c3_shape = ri == 3 || ri == 4 || quotients_orientable.iter().all(|&b| b);
    let c3_applicable = genus_ok && all_nonconjugate && c3_shape;
    let c3_reason = if !genus_ok {
        "requires hat_g > 1".to_string()
    } else if !all_nonconjugate {
        "requires pairwise non-conjugate involutions".to_string()
    } else if !c3_shape {
        "requires r in {3,4} or all orientable quotients".to_string()
    } else {
        "hypotheses satisfied".to_string()
    };
    // 2 hat_g - 2 + 2^(r-3) (9 - r), held in eighths to stay integral.
    let rhs_eighths = sharp_oval_rhs_eighths(f.hat_genus, f.r());
    records.push(BoundRecord {
        name: "sharp oval-sum bound",
        applicable: c3_applicable,
        reason: c3_reason.clone(),
        lhs: sum_k,
        rhs_display: if rhs_eighths % 8 == 0 {
            format!("2 hat_g - 2 + 2^(r-3)(9 - r) = {}", rhs_eighths / 8)
        } else {
            format!("2 hat_g - 2 + 2^(r-3)(9 - r) = {rhs_eighths}/8")
        },
        holds: 8 * sum_k <= rhs_eighths,
    });
    records.push(BoundRecord {
        name: "sharp oval-sum bound (weak form)",
        applicable: c3_applicable,
        reason: c3_reason,
        lhs: sum_k,
        rhs_display: format!("2 hat_g + 30 = {} (strict)", weak_oval_cap(f.hat_genus)),
        holds: sum_k < weak_oval_cap(f.hat_genus),
    });

    Ok(BoundReport {
        records,
        relations,
        all_distinct,
        all_nonconjugate,
        quotients_orientable,
    })
}

/// All monodromy tuples of length `n` in degree `d` with product identity
/// and a transitive action, in deterministic lexicographic order.
pub fn transitive_tuples(d: usize, n: usize) -> Vec<Vec<Permutation>> {
    if n == 0 {
        return if d == 1 { vec![vec![]] } else { vec![] };
    }
    let perms = all_permutations(d);
    let mut out = Vec::new();
    let mut idx = vec![0usize; n - 1];
    loop {
        let mut acc = Permutation::identity(d);
        let mut tuple: Vec<Permutation> = Vec::with_capacity(n);
        for &k in &idx {
            tuple.push(perms[k].clone());
            acc = acc.compose(&perms[k]).expect("same degree");
        }
        tuple.push(acc.inverse());
        let c = ComponentCover::new("probe", d, tuple.clone());
        if validate_monodromy(&c).monodromy_valid() {
            out.push(tuple);
        }
        // Advance the odometer.
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                break;
            }
            idx[pos] += 1;
            if idx[pos] < perms.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == idx.len() {
            break;
        }
    }
    out
}

/// Canonical key of a (monodromy, lift) pair under simultaneous
/// conjugation: the lexicographic minimum of the conjugated image arrays.
pub fn canonical_component_key(monodromy: &[Permutation], lift: &Permutation) -> Vec<usize> {
    let d = lift.degree();
    let mut best: Option<Vec<usize>> = None;
    for q in all_permutations(d) {
        let qi = q.inverse();
        let mut key = Vec::with_capacity((monodromy.len() + 1) * d);
        for p in monodromy.iter().chain(std::iter::once(lift)) {
            let conj = qi.compose(p).and_then(|x| x.compose(&q)).expect("same degree");
            key.extend_from_slice(conj.images());
        }
        if best.as_ref().map(|b| &key < b).unwrap_or(true) {
            best = Some(key);
        }
    }
    best.expect("at least the identity conjugator")
}

/// Limits for the enumerator. `unlocked` permits exceeding the default
/// guardrails (set by the CLI when `FOAMLAB_LIMITS` is present).
#[derive(Clone, Copy, Debug)]
pub struct EnumLimits {
    pub max_degree: usize,
    pub points: usize,
    pub max_components: usize,
    pub unlocked: bool,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits {
            max_degree: DEFAULT_MAX_DEGREE,
            points: DEFAULT_MAX_POINTS,
            max_components: DEFAULT_MAX_COMPONENTS,
            unlocked: false,
        }
    }
}

/// The deduplicated pool of admissible components at the given limits:
/// every transitive tuple with every valid lift, one representative per
/// simultaneous-conjugation class, deterministically ordered.
pub fn component_pool(limits: &EnumLimits) -> Result<Vec<ComponentCover>> {
    let mut seen = std::collections::HashSet::new();
    let mut pool = Vec::new();
    for d in 1..=limits.max_degree {
        for tuple in transitive_tuples(d, limits.points) {
            let c = ComponentCover::new("probe", d, tuple.clone());
            for t in involution_lifts(&c)? {
                if !admissible_component(&c, &t)? {
                    continue;
                }
                let key = canonical_component_key(&tuple, &t);
                if seen.insert((d, key)) {
                    let name = format!("c{}", pool.len() + 1);
                    pool.push(ComponentCover::new(name, d, tuple.clone()).with_lift(t));
                }
            }
        }
    }
    Ok(pool)
}

/// Exhaustive enumeration of equipped families: all multisets of up to
/// `max_components` pool components, built through the full pipeline,
/// kept only if every axiom passes, and deduplicated by
/// [`families_equivalent`]. Deterministic order.
pub fn enumerate_families(limits: &EnumLimits) -> Result<Vec<EquippedFamily>> {
    if !limits.unlocked
        && (limits.max_degree > DEFAULT_MAX_DEGREE
            || limits.points > DEFAULT_MAX_POINTS
            || limits.max_components > DEFAULT_MAX_COMPONENTS)
    {
        return Err(Error::Guardrail(format!(
            "enumeration limited to degree {DEFAULT_MAX_DEGREE}, \
             {DEFAULT_MAX_POINTS} points, {DEFAULT_MAX_COMPONENTS} components \
             (set FOAMLAB_LIMITS to override)"
        )));
    }
    let pool = component_pool(limits)?;
    let base = RealBase::new(limits.points);
    let mut families: Vec<EquippedFamily> = Vec::new();
    // Multisets as non-decreasing index tuples, sizes 1..=max_components.
    let mut stack: Vec<Vec<usize>> = (0..pool.len()).map(|i| vec![i]).collect();
    stack.reverse();
    let mut selections: Vec<Vec<usize>> = Vec::new();
    while let Some(sel) = stack.pop() {
        selections.push(sel.clone());
        if sel.len() < limits.max_components {
            for j in (*sel.last().expect("nonempty")..pool.len()).rev() {
                let mut next = sel.clone();
                next.push(j);
                stack.push(next);
            }
        }
    }
    selections.sort();
    for sel in selections {
        let comps: Vec<ComponentCover> = sel.iter().map(|&i| pool[i].clone()).collect();
        let family = match build_family(base, &comps, LiftPolicy::Given) {
            Ok(f) => f,
            Err(Error::Inadmissible { .. }) | Err(Error::IncompatibleLifts(_)) => continue,
            Err(e) => return Err(e),
        };
        if !verify_axioms(&family).all_pass() {
            continue;
        }
        let mut duplicate = false;
        for earlier in &families {
            if families_equivalent(earlier, &family).unwrap_or(false) {
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            families.push(family);
        }
    }
    Ok(families)
}

/// One row of the extremal table.
#[derive(Clone, Debug)]
pub struct ExtremalRow {
    pub family_index: usize,
    pub r: usize,
    pub hat_genus: usize,
    pub sum_k: usize,
    pub sum_k_hat: usize,
    /// `42(hat_g - 1) - sum k_hat_i`.
    pub margin: i64,
    pub all_nonconjugate: bool,
}

/// Ranked summary of a family stream.
#[derive(Clone, Debug)]
pub struct ExtremalReport {
    pub rows: Vec<ExtremalRow>,
    pub note: Option<String>,
}

/// Ranks families with `hat_g > 1` by their oval sums and bound margins.
pub fn extremal_report(families: &[EquippedFamily]) -> Result<ExtremalReport> {
    let mut rows = Vec::new();
    for (i, f) in families.iter().enumerate() {
        if f.hat_genus <= 1 {
            continue;
        }
        let bounds = check_corollaries(f)?;
        let sum_k: usize = f.component_ovals.iter().sum();
        let sum_k_hat: usize = f.hat_ovals.iter().sum();
        rows.push(ExtremalRow {
            family_index: i,
            r: f.r(),
            hat_genus: f.hat_genus,
            sum_k,
            sum_k_hat,
            margin: 42 * (f.hat_genus as i64 - 1) - sum_k_hat as i64,
            all_nonconjugate: bounds.all_nonconjugate,
        });
    }
    rows.sort_by(|a, b| {
        b.sum_k_hat
            .cmp(&a.sum_k_hat)
            .then(a.family_index.cmp(&b.family_index))
    });
    let note = if rows.is_empty() {
        Some("no families with hat_g > 1 in the stream".to_string())
    } else {
        None
    };
    Ok(ExtremalReport { rows, note })
}
