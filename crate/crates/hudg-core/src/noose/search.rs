//! Candidate enumeration and the noose dynamic program.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};

use super::{valid_combination, well_spaced, CandidateNoose, Corner, NooseEdge, SPACING_SLACK};
use crate::error::{Error, Result};
use crate::graph::{DiskGraph, IndependentSet};
use crate::hgeom::minkowski::MVec;
use crate::hgeom::{circumcenter, dist, perpendicular_bisector, HPoint, IdealPoint};

/// Caps on enumeration work; exceeding either aborts the whole enumeration
/// (all-or-nothing, since a partial candidate list would break exactness).
#[derive(Debug, Clone)]
pub struct EnumerationBudget {
    pub steps: u64,
    pub max_candidates: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self { steps: 50_000_000, max_candidates: 400_000 }
    }
}

impl EnumerationBudget {
    /// Scale the default budget (used by the HUDG_BUDGET environment knob).
    pub fn scaled(factor: f64) -> Self {
        let d = Self::default();
        Self {
            steps: (d.steps as f64 * factor) as u64,
            max_candidates: (d.max_candidates as f64 * factor) as usize,
        }
    }
}

// One ideal-corner option anchored at a site: the partner site, the end
// selector, the ideal point, and its lightlike vector.
#[derive(Clone)]
struct IdealOpt {
    partner: usize,
    plus: bool,
    pos: IdealPoint,
    light: MVec,
}

struct Ctx<'a> {
    g: &'a DiskGraph,
    mink: Vec<MVec>,
    compat: Vec<Vec<bool>>,
    ideal_opts: Vec<Vec<IdealOpt>>,
    steps: u64,
    budget: EnumerationBudget,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a DiskGraph, budget: EnumerationBudget) -> Self {
        let n = g.len();
        let mink: Vec<MVec> = g.centers().iter().map(|p| p.to_minkowski()).collect();
        let threshold = 2.0 * g.radius() + SPACING_SLACK;
        let mut compat = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && dist(g.center(i), g.center(j)) > threshold {
                    compat[i][j] = true;
                }
            }
        }
        let mut ideal_opts: Vec<Vec<IdealOpt>> = vec![Vec::new(); n];
        for u in 0..n {
            for x in 0..n {
                if !compat[u][x] {
                    continue;
                }
                if let Ok(b) = perpendicular_bisector(g.center(u), g.center(x)) {
                    let (minus, plus) = b.endpoints();
                    for (sel, pos) in [(false, minus), (true, plus)] {
                        ideal_opts[u].push(IdealOpt {
                            partner: x,
                            plus: sel,
                            pos,
                            light: pos.to_light(),
                        });
                    }
                }
            }
        }
        Self { g, mink, compat, ideal_opts, steps: 0, budget }
    }

    fn step(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget.steps {
            return Err(Error::BudgetExceeded {
                context: "noose enumeration step budget".into(),
                partial: None,
            });
        }
        Ok(())
    }

    // The ray from `site` to the ideal point stays in site's cell w.r.t.
    // every visited site: B(light, site - z) >= 0 with slack towards keeping.
    fn ray_stays_in_cell(&self, site: usize, light: MVec, visited: &[usize]) -> bool {
        visited.iter().all(|&z| {
            z == site || light.dot(self.mink[site].sub(self.mink[z])) >= -1e-12
        })
    }

    // Ideal corner for the sorted pair with the given end selector.
    fn ideal_corner(&self, a: usize, b: usize, plus: bool, pos: IdealPoint) -> Corner {
        let pair = (a.min(b), a.max(b));
        // The cached position was computed for bisector(center(u), center(x));
        // canonicalize the selector to the sorted pair's bisector.
        if a <= b {
            Corner::Ideal { pair, plus, pos }
        } else {
            // bisector(b, a) endpoints are the same two points with the
            // orientation flipped, so the selector inverts.
            Corner::Ideal { pair, plus: !plus, pos }
        }
    }
}

/// All candidate nooses over at most `w` visited sites whose connectors are
/// circumcenters of site triples, ideal bisector endpoints joined by an arc,
/// or a single shared ideal bisector endpoint. Both orientations of every
/// curve are retained as distinct candidates.
pub fn enumerate_candidates(
    g: &DiskGraph,
    w: usize,
    budget: &EnumerationBudget,
) -> Result<Vec<CandidateNoose>> {
    assert!(w >= 1, "width must be at least 1");
    let mut ctx = Ctx::new(g, budget.clone());
    let mut out: Vec<CandidateNoose> = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let n = g.len();
    let mut seq: Vec<usize> = Vec::with_capacity(w);
    for s1 in 0..n {
        seq.push(s1);
        extend_sequences(&mut ctx, w, &mut seq, &mut seen, &mut out)?;
        seq.pop();
    }
    Ok(out)
}

// Depth-first over site sequences: the first entry is the minimum index,
// later entries are any pairwise-compatible sites above it.
fn extend_sequences(
    ctx: &mut Ctx,
    w: usize,
    seq: &mut Vec<usize>,
    seen: &mut HashSet<Vec<u64>>,
    out: &mut Vec<CandidateNoose>,
) -> Result<()> {
    emit_sequence(ctx, seq, seen, out)?;
    if seq.len() == w {
        return Ok(());
    }
    let s1 = seq[0];
    for v in (s1 + 1)..ctx.g.len() {
        if seq.contains(&v) || !seq.iter().all(|&u| ctx.compat[u][v]) {
            continue;
        }
        seq.push(v);
        extend_sequences(ctx, w, seq, seen, out)?;
        seq.pop();
    }
    Ok(())
}

// All connector choices for one visited-site cycle.
fn emit_sequence(
    ctx: &mut Ctx,
    seq: &[usize],
    seen: &mut HashSet<Vec<u64>>,
    out: &mut Vec<CandidateNoose>,
) -> Result<()> {
    let k = seq.len();
    let mut gap_options: Vec<Vec<Vec<Corner>>> = Vec::with_capacity(k);
    for i in 0..k {
        let a = seq[i];
        let b = seq[(i + 1) % k];
        let mut opts: Vec<Vec<Corner>> = Vec::new();
        if k >= 2 {
            // Finite Voronoi connector: circumcenter(a, b, w).
            for t in 0..ctx.g.len() {
                if t == a || t == b {
                    continue;
                }
                if !ctx.compat[t][a] || !ctx.compat[t][b] {
                    continue;
                }
                if !seq.iter().all(|&z| z == t || z == a || z == b || ctx.compat[t][z]) {
                    continue;
                }
                if let Some(pos) = circumcenter(ctx.g.center(a), ctx.g.center(b), ctx.g.center(t)) {
                    // No visited site may be closer to the corner than its triple.
                    let d0 = dist(&pos, ctx.g.center(a));
                    if seq
                        .iter()
                        .all(|&z| z == a || z == b || dist(&pos, ctx.g.center(z)) >= d0 - 1e-9)
                    {
                        let mut triple = [a, b, t];
                        triple.sort_unstable();
                        opts.push(vec![Corner::Voronoi { triple, pos }]);
                    }
                }
            }
            // Single shared ideal corner (two rays meeting at one ideal end
            // of bisector(a, b)); covers fully unbounded leaf nooses.
            if ctx.compat[a][b] {
                if let Ok(bis) = perpendicular_bisector(ctx.g.center(a), ctx.g.center(b)) {
                    let (minus, plus) = bis.endpoints();
                    for (sel, pos) in [(false, minus), (true, plus)] {
                        let light = pos.to_light();
                        if ctx.ray_stays_in_cell(a, light, seq)
                            && ctx.ray_stays_in_cell(b, light, seq)
                        {
                            let pair = (a.min(b), a.max(b));
                            let plus_sel = if a <= b { sel } else { !sel };
                            opts.push(vec![Corner::Ideal { pair, plus: plus_sel, pos }]);
                        }
                    }
                }
            }
        }
        // Ideal pair joined by a boundary arc: one corner anchored at each
        // flanking site. An ideal Voronoi vertex of the solution's diagram
        // survives every site of the solution, so the lightlike direction
        // must stay in the cells of both the anchor and the partner.
        let eligible = |site: usize, o: &IdealOpt| {
            seq.iter().all(|&z| z == o.partner || ctx.compat[o.partner][z])
                && ctx.ray_stays_in_cell(site, o.light, seq)
                && ctx.ray_stays_in_cell(o.partner, o.light, seq)
        };
        let from_a: Vec<(usize, Corner)> = ctx.ideal_opts[a]
            .iter()
            .filter(|o| eligible(a, o))
            .map(|o| (o.partner, ctx.ideal_corner(a, o.partner, o.plus, o.pos)))
            .collect();
        let from_b: Vec<(usize, Corner)> = ctx.ideal_opts[b]
            .iter()
            .filter(|o| eligible(b, o))
            .map(|o| (o.partner, ctx.ideal_corner(b, o.partner, o.plus, o.pos)))
            .collect();
        for (xa, ca) in &from_a {
            for (xb, cb) in &from_b {
                // Both partners belong to the prospective independent set,
                // so distinct partners must be mutually compatible.
                if xa != xb && !ctx.compat[*xa][*xb] {
                    continue;
                }
                if ca.key() != cb.key() {
                    opts.push(vec![*ca, *cb]);
                }
            }
        }
        if opts.is_empty() {
            return Ok(()); // this gap is unconnectable; no fallback geometry
        }
        gap_options.push(opts);
    }
    // Cartesian product over the gaps.
    let mut corners: Vec<Corner> = Vec::new();
    product_gaps(ctx, seq, &gap_options, 0, &mut corners, seen, out)
}

fn product_gaps(
    ctx: &mut Ctx,
    seq: &[usize],
    gap_options: &[Vec<Vec<Corner>>],
    gap: usize,
    corners: &mut Vec<Corner>,
    seen: &mut HashSet<Vec<u64>>,
    out: &mut Vec<CandidateNoose>,
) -> Result<()> {
    if gap == seq.len() {
        ctx.step()?;
        return finish_candidate(ctx, seq, corners.clone(), seen, out);
    }
    for opt in &gap_options[gap] {
        // Corners may not repeat anywhere on the cycle.
        let dup = opt.iter().any(|c| corners.iter().any(|d| d.key() == c.key()));
        if dup {
            continue;
        }
        corners.push(Corner::Site(seq[gap]));
        let len_before = corners.len();
        corners.extend_from_slice(opt);
        product_gaps(ctx, seq, gap_options, gap + 1, corners, seen, out)?;
        corners.truncate(len_before - 1);
    }
    Ok(())
}

fn finish_candidate(
    ctx: &mut Ctx,
    seq: &[usize],
    corners: Vec<Corner>,
    seen: &mut HashSet<Vec<u64>>,
    out: &mut Vec<CandidateNoose>,
) -> Result<()> {
    let noose = match CandidateNoose::assemble(corners, ctx.g) {
        Ok(n) => n,
        Err(_) => return Ok(()),
    };
    // Referenced sites (circumcenter thirds, bisector partners) belong to
    // the prospective independent set; if unvisited they must stay at
    // distance at least r from the curve.
    let mut referenced: Vec<usize> = Vec::new();
    for c in noose.corners() {
        match c {
            Corner::Voronoi { triple, .. } => referenced.extend_from_slice(triple),
            Corner::Ideal { pair, .. } => {
                referenced.push(pair.0);
                referenced.push(pair.1);
            }
            Corner::Site(_) => {}
        }
    }
    referenced.sort_unstable();
    referenced.dedup();
    // Every referenced site sits in the prospective independent set, so the
    // whole reference set must be pairwise compatible...
    for (k, &z1) in referenced.iter().enumerate() {
        for &z2 in &referenced[k + 1..] {
            if !ctx.compat[z1][z2] {
                return Ok(());
            }
        }
    }
    // ...and unvisited referenced sites keep distance r from the curve.
    for z in referenced {
        if !seq.contains(&z)
            && noose.polygon_site_distance(ctx.g.center(z), ctx.g) < ctx.g.radius() - SPACING_SLACK
        {
            return Ok(());
        }
    }
    let key = noose.canonical_key();
    if seen.insert(key) {
        if out.len() >= ctx.budget.max_candidates {
            return Err(Error::BudgetExceeded {
                context: "noose candidate cap".into(),
                partial: None,
            });
        }
        out.push(noose);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Dynamic program.

#[derive(Debug, Clone)]
pub struct DpOutcome {
    pub size: usize,
    pub witness: IndependentSet,
    pub candidates: usize,
    pub width: usize,
}

#[derive(Clone, Copy)]
enum Choice {
    Leaf,
    Combine(usize, usize),
}

/// Maximum independent set via the candidate-noose dynamic program at width
/// cap `w`. Sound for every `w` (the witness is always independent);
/// complete once `w` reaches the true decomposition width.
pub fn dp_max_is(g: &DiskGraph, w: usize, budget: &EnumerationBudget) -> Result<DpOutcome> {
    let n = g.len();
    if n == 0 {
        return Ok(DpOutcome {
            size: 0,
            witness: IndependentSet::new(Vec::new()),
            candidates: 0,
            width: w,
        });
    }
    let cands = enumerate_candidates(g, w, budget)?;
    let m = cands.len();
    // Deterministic processing order: increasing interior-area key (children
    // tile their parents, so children come first).
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        cands[a]
            .interior_area_key()
            .total_cmp(&cands[b].interior_area_key())
            .then_with(|| cands[a].canonical_key().cmp(&cands[b].canonical_key()))
    });
    let mut rank = vec![0usize; m];
    for (pos, &i) in order.iter().enumerate() {
        rank[i] = pos;
    }
    let index_of: HashMap<Vec<u64>, usize> =
        (0..m).map(|i| (cands[i].canonical_key(), i)).collect();

    let combos = build_combos(g, &cands, &index_of, &rank, budget)?;

    let mut partial: Vec<usize> = cands.iter().map(|c| c.visited().len()).collect();
    let mut choice: Vec<Choice> = vec![Choice::Leaf; m];
    for _pass in 0..64 {
        let mut changed = false;
        for &(pi, li, ri, overlap) in &combos {
            let cand_val = partial[li] + partial[ri] - overlap;
            if cand_val > partial[pi] {
                partial[pi] = cand_val;
                choice[pi] = Choice::Combine(li, ri);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // Top level: a bare hierarchy is an independent set, and pairing a noose
    // with its reversal closes the decomposition at the root.
    let mut best_size = 1usize;
    let mut best_witness: Vec<usize> = vec![0];
    for i in 0..m {
        if partial[i] > best_size {
            best_size = partial[i];
            best_witness = collect_witness(&cands, &choice, i);
        }
        let rev_key = cands[i].reversed().canonical_key();
        if let Some(&ri) = index_of.get(&rev_key) {
            let total = partial[i] + partial[ri] - cands[i].visited().len();
            if total > best_size {
                let mut wtn = collect_witness(&cands, &choice, i);
                wtn.extend(collect_witness(&cands, &choice, ri));
                best_size = total;
                best_witness = wtn;
            }
        }
    }
    let witness = IndependentSet::new(best_witness);
    if witness.len() != best_size || !witness.is_valid(g) {
        return Err(Error::AuditFailure(format!(
            "noose DP produced an inconsistent witness: claimed {best_size}, got {} (valid: {})",
            witness.len(),
            witness.is_valid(g)
        )));
    }
    Ok(DpOutcome { size: best_size, witness, candidates: m, width: w })
}

// All structurally matching, valid, well-spaced (parent, left, right)
// triples. Found by splitting each parent's boundary at two corners into
// paths A and B, looking up candidates whose boundary contains A (their
// remainder is the interface), and reconstructing the right child as
// B + reversed interface.
fn build_combos(
    g: &DiskGraph,
    cands: &[CandidateNoose],
    index_of: &HashMap<Vec<u64>, usize>,
    rank: &[usize],
    budget: &EnumerationBudget,
) -> Result<Vec<(usize, usize, usize, usize)>> {
    let m = cands.len();
    // Path index: candidate X and positions (i, j) such that the complement
    // X[j->i] (the would-be interface) contains no arcs.
    let mut paths: HashMap<u64, Vec<(u32, u16, u16)>> = HashMap::new();
    for (xi, x) in cands.iter().enumerate() {
        let len = x.corners().len();
        let arc_edges: Vec<bool> =
            x.edges().iter().map(|e| matches!(e, NooseEdge::Arc(..))).collect();
        for i in 0..len {
            for j in 0..len {
                if i == j {
                    continue;
                }
                let mut has_arc = false;
                let mut e = j;
                while e != i {
                    if arc_edges[e] {
                        has_arc = true;
                        break;
                    }
                    e = (e + 1) % len;
                }
                if has_arc {
                    continue;
                }
                let h = path_hash(x, i, j);
                paths.entry(h).or_default().push((xi as u32, i as u16, j as u16));
            }
        }
    }

    let mut scan_work: u64 = 0;
    let mut seen: HashSet<(u32, u32, u32)> = HashSet::new();
    let mut combos: Vec<(usize, usize, usize, usize)> = Vec::new();
    for pi in 0..m {
        let parent = &cands[pi];
        let len = parent.corners().len();
        for i in 0..len {
            for j in 0..len {
                if i == j {
                    continue;
                }
                // Each combination is discoverable through either child, so
                // only look up shared paths covering at least half of the
                // parent boundary; their entry lists are far shorter.
                if (j + len - i) % len < len.div_ceil(2) {
                    continue;
                }
                let h = path_hash(parent, i, j);
                let Some(entries) = paths.get(&h) else { continue };
                scan_work += entries.len() as u64;
                if scan_work > budget.steps {
                    return Err(Error::BudgetExceeded {
                        context: "noose DP combination scan".into(),
                        partial: None,
                    });
                }
                let p_before = parent.edge_key_at((i + len - 1) % len);
                let p_after = parent.edge_key_at(j);
                for &(li, li_i, li_j) in entries {
                    let li = li as usize;
                    if li == pi {
                        continue;
                    }
                    let left = &cands[li];
                    let llen = left.corners().len();
                    // Maximal shared path only: the curves must diverge just
                    // outside both path ends.
                    if left.edge_key_at((li_i as usize + llen - 1) % llen) == p_before
                        || left.edge_key_at(li_j as usize) == p_after
                    {
                        continue;
                    }
                    let Some(ri) =
                        lookup_right(parent, i, j, left, li_i as usize, li_j as usize, index_of)
                    else {
                        continue;
                    };
                    if ri == pi || ri == li {
                        continue;
                    }
                    if !seen.insert((pi as u32, li as u32, ri as u32)) {
                        continue;
                    }
                    let right = &cands[ri];
                    if valid_combination(parent, left, right, g)
                        && well_spaced(parent, left, right, g)
                    {
                        let overlap = intersect_count(cands[li].visited(), cands[ri].visited());
                        combos.push((pi, li, ri, overlap));
                    }
                }
            }
        }
    }
    combos.sort_by_key(|&(p, l, r, _)| (rank[p], rank[l], rank[r]));
    Ok(combos)
}

fn intersect_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

fn collect_witness(cands: &[CandidateNoose], choice: &[Choice], idx: usize) -> Vec<usize> {
    let mut out: Vec<usize> = cands[idx].visited().to_vec();
    if let Choice::Combine(l, r) = choice[idx] {
        out.extend(collect_witness(cands, choice, l));
        out.extend(collect_witness(cands, choice, r));
    }
    out.sort_unstable();
    out.dedup();
    out
}

// Hash of the directed boundary path from corner position i to j (corner
// keys, edge kinds, and arc extents).
fn path_hash(x: &CandidateNoose, i: usize, j: usize) -> u64 {
    let len = x.corners().len();
    let mut h = DefaultHasher::new();
    let mut p = i;
    loop {
        x.corners()[p].key().hash(&mut h);
        if p == j {
            break;
        }
        let q = (p + 1) % len;
        // Edge marker: arcs carry their clockwise start corner key.
        let marker = match (&x.corners()[p], &x.corners()[q]) {
            (Corner::Ideal { .. }, Corner::Ideal { .. }) => {
                if x.clockwise() {
                    x.corners()[p].key() | 1 << 63
                } else {
                    x.corners()[q].key() | 1 << 63
                }
            }
            _ => 0,
        };
        marker.hash(&mut h);
        p = q;
    }
    h.finish()
}

// Construct the right child's corner cycle from the parent's B-path and the
// reversed interface, and look it up among the candidates.
fn lookup_right(
    parent: &CandidateNoose,
    i: usize,
    j: usize,
    left: &CandidateNoose,
    li: usize,
    lj: usize,
    index_of: &HashMap<Vec<u64>, usize>,
) -> Option<usize> {
    let plen = parent.corners().len();
    let llen = left.corners().len();
    // B: parent path j -> i. Interface (in L): lj -> li; reversed: li -> lj.
    let mut keys: Vec<u64> = Vec::new();
    let mut p = j;
    loop {
        keys.push(parent.corners()[p].key());
        if p == i {
            break;
        }
        p = (p + 1) % plen;
    }
    // Interface interior corners, reversed (strictly between lj and li).
    let mut interior: Vec<u64> = Vec::new();
    let mut q = (lj + 1) % llen;
    while q != li {
        interior.push(left.corners()[q].key());
        q = (q + 1) % llen;
    }
    interior.reverse();
    keys.extend(interior);
    index_of.get(&super::minimal_rotation(&keys)).copied()
}

// ---------------------------------------------------------------------------
// Width ramping.

#[derive(Debug, Clone)]
pub struct RampOutcome {
    pub size: usize,
    pub witness: IndependentSet,
    pub width_used: usize,
    pub stabilized: bool,
    pub candidates: usize,
}

/// Default width cap: ⌈c (1 + log n / max(r, 0.1))⌉ with c = 4.
pub fn default_width_cap(n: usize, r: f64) -> usize {
    let c = 4.0;
    (c * (1.0 + (n.max(2) as f64).ln() / r.max(0.1))).ceil() as usize
}

/// Run the DP with increasing width until two consecutive widths agree (the
/// stabilization certificate) or the cap is reached.
pub fn mis_exact_ramp(
    g: &DiskGraph,
    w_cap: usize,
    budget: &EnumerationBudget,
) -> Result<RampOutcome> {
    let mut prev: Option<DpOutcome> = None;
    for w in 2..=w_cap.max(2) {
        let out = dp_max_is(g, w, budget)?;
        if let Some(p) = prev {
            if p.size == out.size {
                return Ok(RampOutcome {
                    size: out.size,
                    witness: out.witness,
                    width_used: w,
                    stabilized: true,
                    candidates: out.candidates,
                });
            }
        }
        prev = Some(out);
    }
    let last = prev.expect("at least one width ran");
    Ok(RampOutcome {
        size: last.size,
        witness: last.witness,
        width_used: last.width,
        stabilized: false,
        candidates: last.candidates,
    })
}
