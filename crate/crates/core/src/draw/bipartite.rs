use crate::draw::DrawReport;
use crate::error::{Error, Result};
use crate::geometry::{on_segment, point_segment_dist, segments_conflict, Point, Segment};
use crate::metrics::length_stats;
use crate::model::{Drawing, PlaneGraph, QuadBuilder, SplitStep};

/// Draw a maximal bipartite plane graph with every edge length strictly
/// inside (1, 1 + eps), replaying its split witness: the base 4-cycle is a
/// square of side 1 + eps/2; each step places the new vertex inside a
/// shrinking disk around an anchor corner of the affected face, probing
/// directions and radii and validating each candidate with exact
/// predicates.
///
/// A resumable partial drawing.
#[derive(Clone)]
struct PartialDrawing {
    b: QuadBuilder,
    pts: Vec<Point>,
    step: usize,
}

/// Placement choices steer future feasibility in chaotic ways, so the
/// drawing runs under a schedule of placement policies with a
/// ratchet-and-retreat driver: the furthest partial drawing is kept as a
/// checkpoint, failing policies retry from it, and persistent failure at
/// one frontier retreats to an earlier checkpoint.
pub fn draw_bipartite_maximal(witness: &[SplitStep], eps: f64) -> Result<(PlaneGraph, DrawReport)> {
    if !(eps > 0.0) {
        return Err(Error::InvalidEpsilon);
    }
    // Long witnesses: replay with a relaxed window (which the ensemble
    // handles comfortably), then polish every length into the strict
    // window under exact planarity gating.
    if witness.len() > 60 {
        for relax in [2.0, 3.0, 4.5] {
            if let Ok(out) = draw_ensemble(witness, eps * relax, 80) {
                if let Some(done) = polish_window(out, eps) {
                    return Ok(done);
                }
            }
        }
    }
    draw_ensemble(witness, eps, 300 + 10 * witness.len() as u32)
}

fn draw_ensemble(
    witness: &[SplitStep],
    eps: f64,
    budget_attempts: u32,
) -> Result<(PlaneGraph, DrawReport)> {
    // (quality floor, window budget, strict): strict policies fail a step
    // rather than accept a placement below the floor, since desperate
    // placements poison everything downstream.
    let policies = [
        (0.25f64, 0.0f64, true),
        (0.1, 0.0, true),
        (0.4, 0.0, true),
        (0.25, 0.15, true),
        (0.1, 0.0, false),
        (0.05, 0.0, true),
        (0.03, 0.0, false),
        (0.01, 0.0, false),
    ];
    // Base square side: midpoint of the first step's most constrained
    // window across the policy schedule (budget <= 0.7).
    let start = |budget: f64, twist: u32| -> PartialDrawing {
        let pad0 = budget * eps;
        let side = 1.0 + (0.4 * pad0 + eps - pad0) / 2.0;
        // Rotate the base square so axis-aligned symmetries do not seed
        // exactly collinear configurations.
        let theta = 0.3779644730092272 + 0.09 * twist as f64;
        let (sin, cos) = theta.sin_cos();
        let corner = |x: f64, y: f64| Point::new(x * cos - y * sin, x * sin + y * cos);
        PartialDrawing {
            b: QuadBuilder::new(),
            pts: vec![
                corner(0.0, 0.0),
                corner(side, 0.0),
                corner(side, side),
                corner(0.0, side),
            ],
            step: 0,
        }
    };

    let mut last = Error::PrecisionExhausted { step: 0 };
    let mut best_state: Option<PartialDrawing> = None;
    // Checkpoint trail at a fixed step stride, so retreats can reach far
    // behind the frontier (dead ends can be created dozens of steps before
    // they bite).
    let stride = 5usize;
    let mut trail: std::collections::BTreeMap<usize, PartialDrawing> =
        std::collections::BTreeMap::new();
    let mut resume_cap = usize::MAX; // resume from trail entries <= cap
    let mut stuck = 0u32;
    let mut retreat = stride;
    let mut attempt = 0u32;
    while attempt < budget_attempts {
        let (quality, budget, strict) = policies[(attempt as usize) % policies.len()];
        let twist = attempt; // every attempt perturbs differently
        // Interleave ratcheted and fresh starts: checkpoints give
        // monotone progress, fresh runs keep the attempts decorrelated.
        let resume = trail.range(..=resume_cap).next_back().map(|(_, cp)| cp);
        let mut state = match resume {
            Some(cp) if attempt % 2 == 0 => cp.clone(),
            _ => start(budget, twist),
        };
        attempt += 1;
        let mut run_snaps: Vec<PartialDrawing> = Vec::new();
        let outcome = draw_tail(
            witness,
            &mut state,
            eps,
            quality * eps,
            budget,
            twist,
            strict,
            stride,
            &mut run_snaps,
        );
        for snap in run_snaps {
            trail.entry(snap.step).or_insert(snap);
        }
        match outcome {
            Ok(out) => return Ok(out),
            Err(e) => {
                if std::env::var_os("ELR_DEBUG_BIP").is_some() {
                    eprintln!("attempt {attempt} q={quality} b={budget} t={twist}: {e}");
                }
                let reached = state.step;
                let frontier = best_state.as_ref().map_or(0, |b| b.step);
                if reached > frontier {
                    best_state = Some(state.clone());
                    trail.insert(reached, state.clone());
                    stuck = 0;
                    retreat = stride;
                    resume_cap = usize::MAX;
                }
                if reached <= frontier {
                    stuck += 1;
                    if stuck >= 6 {
                        // Deepen the retreat exponentially.
                        resume_cap = frontier.saturating_sub(retreat);
                        retreat = (retreat * 2).min(witness.len());
                        stuck = 0;
                    }
                }
                last = e;
            }
        }
    }
    if let (Some(st), Some(path)) = (best_state, std::env::var_os("ELR_DUMP_BIP")) {
        let mut out = String::new();
        out.push_str(&format!("{}\n", st.step));
        for p in &st.pts {
            out.push_str(&format!("{:.17e} {:.17e}\n", p.x, p.y));
        }
        for r in &st.b.rotation {
            let strs: Vec<String> = r.iter().map(|t| t.to_string()).collect();
            out.push_str(&strs.join(" "));
            out.push('\n');
        }
        let _ = std::fs::write(path, out);
    }
    Err(last)
}

#[allow(clippy::too_many_arguments)]
fn draw_tail(
    witness: &[SplitStep],
    state: &mut PartialDrawing,
    eps: f64,
    quality: f64,
    budget: f64,
    twist: u32,
    strict: bool,
    stride: usize,
    snaps: &mut Vec<PartialDrawing>,
) -> Result<(PlaneGraph, DrawReport)> {
    let b = &mut state.b;
    let pts = &mut state.pts;

    let n_steps = witness.len().max(1) as f64;
    for (step_idx, &step) in witness.iter().enumerate().skip(state.step) {
        let SplitStep { v, u, w } = step;
        let ms = b.arc(v, u, w)?;
        // Length window for this step: later steps may use more of the
        // (1, 1 + eps) budget, so early placements leave room. The
        // reserve decays geometrically so early steps keep a workable
        // window even for long witnesses.
        let pad = budget * eps * 0.05f64.powf(step_idx as f64 / n_steps);
        let wlo = 1.0 + 0.4 * pad;
        let whi = 1.0 + eps - pad;

        // Anchor corners to probe around: the splitting vertex, and for a
        // plain degree-2 insertion also the face's opposite corner (the
        // corner at v can be arbitrarily degenerate).
        let mut anchors = vec![(v, u, w)];
        if ms.is_empty() {
            let face = b.to_plane_graph().trace_face(u, v);
            if face.len() == 4 {
                anchors.push((face[3], w, u));
            }
        }

        // Opposite corners of the faces collapsing onto the new vertex:
        // every simple quad has an interior diagonal, so placements exist
        // along the diagonal directions even in needle-shaped faces.
        let mut diag_corners: Vec<u32> = Vec::new();
        {
            let g = b.to_plane_graph();
            let mut around = Vec::with_capacity(ms.len() + 2);
            around.push(u);
            around.extend_from_slice(&ms);
            around.push(w);
            for pair in around.windows(2) {
                let face = g.trace_face(pair[0], v);
                if face.len() == 4 {
                    diag_corners.push(face[3]);
                }
                let _ = pair;
            }
        }

        // Link targets of the new vertex.
        let mut targets = Vec::with_capacity(ms.len() + 2);
        targets.push(u);
        targets.extend_from_slice(&ms);
        targets.push(w);

        let edges = b.edges();
        let kept: Vec<(u32, u32)> = edges
            .iter()
            .copied()
            .filter(|&(a, c)| !(a == v && ms.contains(&c)) && !(c == v && ms.contains(&a)))
            .collect();
        let kept_segs: Vec<(Segment, [f64; 4])> = kept
            .iter()
            .map(|&(a, c)| {
                let s = Segment::new(pts[a as usize], pts[c as usize]);
                (s, seg_bbox(&s))
            })
            .collect();

        // Post-split rotations that the placement must realize
        // geometrically (the new vertex marked with a sentinel id).
        const X_ID: u32 = u32::MAX;
        let mut rot_checks: Vec<(u32, Vec<u32>)> = Vec::new();
        {
            let mut at_u = b.rotation[u as usize].clone();
            let iu = at_u.iter().position(|&t| t == v).unwrap();
            at_u.insert(iu, X_ID);
            rot_checks.push((u, at_u));
            let mut at_w = b.rotation[w as usize].clone();
            let iw = at_w.iter().position(|&t| t == v).unwrap();
            at_w.insert(iw + 1, X_ID);
            rot_checks.push((w, at_w));
            for &m in &ms {
                let at_m: Vec<u32> = b.rotation[m as usize]
                    .iter()
                    .map(|&t| if t == v { X_ID } else { t })
                    .collect();
                rot_checks.push((m, at_m));
            }
        }

        let mut best: Option<(Point, f64)> = None;
        let mut tried = 0usize;
        for &(anchor, au, aw) in &anchors {
            let pa = pts[anchor as usize];
            let mut margin = f64::INFINITY;
            for &t in &targets {
                let l = pa.dist(pts[t as usize]);
                margin = margin.min(l - wlo).min(whi - l);
            }
            if margin <= 0.0 {
                continue;
            }
            let r0 = (margin * 0.9).min(0.5);
            if r0 <= 0.0 {
                continue;
            }
            // Floors scale with the local margin: lineage margins decay
            // geometrically by design, and absolute floors would turn
            // every deep step into a desperate one.
            let good_enough = quality * margin / eps;

            let ang = |t: u32| -> f64 {
                let p = pts[t as usize];
                (p.y - pa.y).atan2(p.x - pa.x)
            };
            let ang_u = ang(au);
            let mut width = ang_u - ang(aw);
            while width <= 0.0 {
                width += std::f64::consts::TAU;
            }
            // Candidate directions inside the clockwise sector from au to
            // aw: bisector-style fractions; offsets hugging either boundary
            // ray (feasible cones can be thin slivers along one side when
            // the corner is nearly degenerate or reflex); directions
            // shadowing the target rays and opposing the target fan, for
            // needle-shaped neighborhoods.
            let mut fractions: Vec<f64> =
                vec![0.5, 0.25, 0.75, 0.125, 0.375, 0.625, 0.875, 0.0625, 0.9375];
            for delta in [
                0.35, 0.15, 0.06, 0.025, 0.01, 0.004, 0.0015, 5e-4, 2e-4, 8e-5, 3e-5, 1e-5,
            ] {
                if 2.0 * delta < width {
                    fractions.push(delta / width);
                    fractions.push(1.0 - delta / width);
                }
            }
            let into_sector = |theta: f64| -> Option<f64> {
                let mut off = ang_u - theta;
                while off < 0.0 {
                    off += std::f64::consts::TAU;
                }
                while off >= std::f64::consts::TAU {
                    off -= std::f64::consts::TAU;
                }
                if off > 1e-12 && off < width - 1e-12 {
                    Some(off / width)
                } else {
                    None
                }
            };
            let fan_center = {
                let first = ang(targets[0]);
                let mut sum = 0.0;
                for &t in &targets {
                    let mut a = ang(t) - first;
                    while a > std::f64::consts::PI {
                        a -= std::f64::consts::TAU;
                    }
                    while a < -std::f64::consts::PI {
                        a += std::f64::consts::TAU;
                    }
                    sum += a;
                }
                first + sum / targets.len() as f64
            };
            let mut phi = 0.2f64;
            while phi > 1e-10 {
                for s in [1.0, -1.0] {
                    if let Some(f) = into_sector(fan_center + std::f64::consts::PI + s * phi) {
                        fractions.push(f);
                    }
                }
                phi *= 0.4;
            }
            for &t in &targets {
                for nudge in [0.0, 1e-3, -1e-3, 1e-6, -1e-6, 1e-9, -1e-9] {
                    if let Some(f) = into_sector(ang(t) + nudge) {
                        fractions.push(f);
                    }
                    if let Some(f) = into_sector(ang(t) + std::f64::consts::PI + nudge) {
                        fractions.push(f);
                    }
                }
            }
            // Interior-diagonal directions of the affected faces (every
            // simple quad has an interior diagonal, so these see the
            // opposite corners even in needle-shaped quads) and corridor
            // bisectors between consecutive targets, probed early.
            let mut diag_fracs = Vec::new();
            for &z in &diag_corners {
                if z != anchor {
                    for nudge in [0.0, 1e-4, -1e-4] {
                        if let Some(f) = into_sector(ang(z) + nudge) {
                            diag_fracs.push(f);
                        }
                    }
                }
            }
            for pair in targets.windows(2) {
                let (a1, a2) = (ang(pair[0]), ang(pair[1]));
                let mut half = (a2 - a1) / 2.0;
                if (a2 - a1).abs() > std::f64::consts::PI {
                    half += std::f64::consts::PI;
                }
                if let Some(f) = into_sector(a1 + half) {
                    diag_fracs.push(f);
                }
            }
            fractions.splice(0..0, diag_fracs);
            // Perturbation for retry diversity: keep the principled
            // candidates first and rotate only the tail.
            if twist > 0 && fractions.len() > 16 {
                let tail = &mut fractions[12..];
                let k = (twist as usize * 13) % tail.len();
                tail.rotate_left(k);
            }

            let score_of =
                |x: Point| placement_score(x, &targets, pts, wlo, whi, &rot_checks);

            // Evaluate the candidate grid keeping the healthiest placement
            // (max-min of spatial clearance and length margins). The
            // quality knob sets how early a good-enough spot ends the
            // sweep, trading placement health against search breadth.
            // Radii preferring a few multiples of the quality floor:
            // large radii eat face interiors, microscopic ones poison
            // later corners.
            let r_pref = (0.35 * margin * 1.13f64.powi((twist % 17) as i32)).min(r0);
            let mut radii: Vec<f64> = Vec::with_capacity(30);
            let mut r = r0;
            while r > 1e-13 {
                radii.push(r);
                r *= 0.7;
            }
            radii.sort_by(|a, b| {
                let ka = (a / r_pref).ln().abs();
                let kb = (b / r_pref).ln().abs();
                ka.total_cmp(&kb)
            });
            for &f in &fractions {
                let theta = ang_u - f * width;
                let dir = (theta.cos(), theta.sin());
                for &r in &radii {
                    if let Some((_, s)) = best {
                        if r <= s {
                            continue;
                        }
                    }
                    let x = Point::new(pa.x + r * dir.0, pa.y + r * dir.1);
                    tried += 1;
                    if placement_ok(x, &targets, &kept_segs, &pts, wlo, whi, &rot_checks) {
                        let score = score_of(x);
                        if best.map_or(true, |(_, s)| score > s) {
                            best = Some((x, score));
                        }
                    }
                }
                if best.map_or(false, |(_, s)| s >= good_enough) || tried > 60_000 {
                    break;
                }
            }
            if best.map_or(false, |(_, s)| s >= good_enough) {
                break;
            }
        }

        // Dense local fallback: desperate steps get a fine sweep of the
        // anchor sectors (the feasible set can be a pinch sliver between
        // near-parallel rays, thinner than the main grids).
        if best.is_none() {
            for &(anchor, au, aw) in &anchors {
                let pa = pts[anchor as usize];
                let mut margin = f64::INFINITY;
                for &t in &targets {
                    let l = pa.dist(pts[t as usize]);
                    margin = margin.min(l - wlo).min(whi - l);
                }
                if margin <= 0.0 {
                    continue;
                }
                let r0 = (margin * 0.95).min(0.5);
                let ang = |t: u32| -> f64 {
                    let p = pts[t as usize];
                    (p.y - pa.y).atan2(p.x - pa.x)
                };
                let ang_u = ang(au);
                let mut width = ang_u - ang(aw);
                while width <= 0.0 {
                    width += std::f64::consts::TAU;
                }
                let score_of = |x: Point| -> f64 {
                    let mut score = f64::INFINITY;
                    for p in pts.iter() {
                        score = score.min(x.dist(*p));
                    }
                    for &t in &targets {
                        let l = x.dist(pts[t as usize]);
                        score = score.min((l - wlo).min(whi - l) * 2.0);
                    }
                    score
                };
                for i in 0..96 {
                    let f = (i as f64 + 0.5) / 96.0;
                    let theta = ang_u - f * width;
                    let dir = (theta.cos(), theta.sin());
                    for j in 0..48 {
                        let r = r0 * 0.82f64.powi(j);
                        let x = Point::new(pa.x + r * dir.0, pa.y + r * dir.1);
                        if placement_ok(x, &targets, &kept_segs, &pts, wlo, whi, &rot_checks) {
                            let score = score_of(x);
                            if best.map_or(true, |(_, s)| score > s) {
                                best = Some((x, score));
                            }
                            break;
                        }
                    }
                }
                if best.is_some() {
                    break;
                }
            }
        }

        // Lens family: the valid region is the intersection of the open
        // annuli (1, 1 + eps) around the targets. Sample it directly from
        // the farthest target pair: both lobes of their circle
        // intersections, a grid of radii, and tangential offsets. This
        // finds spots no face-corner sector reaches and lets placements
        // spread across lobes instead of piling up.
        {
            let score_of =
                |x: Point| placement_score(x, &targets, pts, wlo, whi, &rot_checks);
            let (mut t1, mut t2, mut dmax) = (targets[0], targets[0], -1.0f64);
            for (i, &a) in targets.iter().enumerate() {
                for &c in targets.iter().skip(i + 1) {
                    let d = pts[a as usize].dist(pts[c as usize]);
                    if d > dmax {
                        (t1, t2, dmax) = (a, c, d);
                    }
                }
            }
            let (p1, p2) = (pts[t1 as usize], pts[t2 as usize]);
            let d = dmax.max(1e-12);
            let mx = (p1.x + p2.x) / 2.0;
            let my = (p1.y + p2.y) / 2.0;
            let ux = (p2.x - p1.x) / d;
            let uy = (p2.y - p1.y) / d;
            for rho_f in [0.5, 0.25, 0.75, 0.1, 0.9] {
                let rho = wlo + rho_f * (whi - wlo);
                let h2 = rho * rho - d * d / 4.0;
                if h2 <= 0.0 {
                    continue;
                }
                let h = h2.sqrt();
                for side in [1.0, -1.0] {
                    for slide in [0.0, 0.3, -0.3, 0.6, -0.6] {
                        let along = slide * eps;
                        let x = Point::new(
                            mx + along * ux - side * h * uy,
                            my + along * uy + side * h * ux,
                        );
                        if placement_ok(x, &targets, &kept_segs, &pts, wlo, whi, &rot_checks) {
                            let score = score_of(x);
                            if best.map_or(true, |(_, s)| score > s) {
                                best = Some((x, score));
                            }
                        }
                    }
                }
            }
        }
        // Projection solver: when the sampled families leave only poor or
        // no placements, iterate cyclic projections onto the analytic
        // constraints (shrunk length annuli around every target plus the
        // rotation wedges at the anchor and targets), from several starts.
        // The exact validity gate still decides.
        if best.map_or(true, |(_, s)| s < quality) {
            let pa = pts[v as usize];
            let score_of =
                |x: Point| placement_score(x, &targets, pts, wlo, whi, &rot_checks);
            // Wedge constraints: x must lie clockwise of ray (hub -> right)
            // and counterclockwise of ray (hub -> left), expressed as
            // signed-area half-planes through the hub.
            struct Wedge {
                hub: Point,
                right: Point, // x strictly clockwise of hub->right
                left: Point,  // x strictly counterclockwise of hub->left
            }
            let mut wedges: Vec<Wedge> = Vec::new();
            {
                // At the split vertex: between u (cw start) and w (cw end).
                wedges.push(Wedge {
                    hub: pa,
                    right: pts[u as usize],
                    left: pts[w as usize],
                });
                // At u: x sits immediately before v clockwise.
                let rot_u = &b.rotation[u as usize];
                let iu = rot_u.iter().position(|&t| t == v).unwrap();
                let prev = rot_u[(iu + rot_u.len() - 1) % rot_u.len()];
                wedges.push(Wedge {
                    hub: pts[u as usize],
                    right: pts[prev as usize],
                    left: pts[v as usize],
                });
                // At w: x sits immediately after v clockwise.
                let rot_w = &b.rotation[w as usize];
                let iw = rot_w.iter().position(|&t| t == v).unwrap();
                let next = rot_w[(iw + 1) % rot_w.len()];
                wedges.push(Wedge {
                    hub: pts[w as usize],
                    right: pts[v as usize],
                    left: pts[next as usize],
                });
            }
            let tau = std::f64::consts::TAU;
            let mut starts: Vec<Point> = Vec::new();
            {
                // Near-anchor starts across the sector and lens lobes.
                let ang_u2 = {
                    let p = pts[u as usize];
                    (p.y - pa.y).atan2(p.x - pa.x)
                };
                for k in 0..12 {
                    let th = ang_u2 - tau * (k as f64 + 0.5) / 12.0;
                    let r = 0.25 * (whi - wlo) * (1.0 + (k % 3) as f64);
                    starts.push(Point::new(pa.x + r * th.cos(), pa.y + r * th.sin()));
                }
            }
            for x0 in starts {
                let mut x = x0;
                for _ in 0..140 {
                    // Project onto shrunk annuli.
                    let (mlo, mhi) = (wlo + 0.1 * (whi - wlo), whi - 0.1 * (whi - wlo));
                    for &t in &targets {
                        let pt = pts[t as usize];
                        let d = x.dist(pt).max(1e-18);
                        let clamped = d.clamp(mlo, mhi);
                        if clamped != d {
                            let f = clamped / d;
                            x = Point::new(pt.x + (x.x - pt.x) * f, pt.y + (x.y - pt.y) * f);
                        }
                    }
                    // Project onto wedge half-planes (rotate around hub).
                    for wd in &wedges {
                        let rel = (x.x - wd.hub.x, x.y - wd.hub.y);
                        let rr = (rel.0 * rel.0 + rel.1 * rel.1).sqrt().max(1e-18);
                        let angx = rel.1.atan2(rel.0);
                        let angr = (wd.right.y - wd.hub.y).atan2(wd.right.x - wd.hub.x);
                        let angl = (wd.left.y - wd.hub.y).atan2(wd.left.x - wd.hub.x);
                        // Clockwise offset of x from the right ray, and the
                        // wedge's clockwise width from right to left.
                        let mut offx = angr - angx;
                        while offx < 0.0 {
                            offx += tau;
                        }
                        let mut wid = angr - angl;
                        while wid <= 0.0 {
                            wid += tau;
                        }
                        if offx > wid {
                            // Snap just inside the nearer boundary.
                            let margin = (wid * 0.05).min(1e-3);
                            let target_ang = if offx - wid < tau - offx {
                                angl + margin
                            } else {
                                angr - margin
                            };
                            x = Point::new(
                                wd.hub.x + rr * target_ang.cos(),
                                wd.hub.y + rr * target_ang.sin(),
                            );
                        }
                    }
                }
                if placement_ok(x, &targets, &kept_segs, &pts, wlo, whi, &rot_checks) {
                    let score = score_of(x);
                    if best.map_or(true, |(_, s)| score > s) {
                        best = Some((x, score));
                    }
                }
            }
        }
        if strict {
            // Reject only catastrophic placements: lineage margins decay
            // by design, so the floor here is loose and absolute.
            if let Some((_, sc)) = best {
                if sc < 2e-4 * eps {
                    return Err(Error::PrecisionExhausted { step: step_idx });
                }
            }
        }
        let (x, _) = best.ok_or(Error::PrecisionExhausted { step: step_idx })?;
        b.split(step)?;
        pts.push(x);
        state.step = step_idx + 1;
        if state.step % stride == 0 {
            snaps.push(PartialDrawing {
                b: b.clone(),
                pts: pts.clone(),
                step: state.step,
            });
        }
    }

    let graph = b.to_plane_graph();
    let drawing = Drawing::new(pts.clone())?;
    let stats = length_stats(&graph.edges, &drawing)?;
    if stats.min_len <= 1.0 || stats.max_len >= 1.0 + eps {
        return Err(Error::PrecisionExhausted {
            step: witness.len(),
        });
    }
    let report = DrawReport {
        drawing,
        stats,
        theoretical_bound: 1.0 + eps,
    };
    Ok((graph, report))
}


/// Placement health: distance to existing vertices, margins inside the
/// length window, and angular clearance of the new edges at their hubs
/// (ray-stacked edges poison later steps even when spatially separated).
fn placement_score(
    x: Point,
    targets: &[u32],
    pts: &[Point],
    wlo: f64,
    whi: f64,
    rot_checks: &[(u32, Vec<u32>)],
) -> f64 {
    const X_ID: u32 = u32::MAX;
    let mut score = f64::INFINITY;
    for p in pts.iter() {
        score = score.min(x.dist(*p));
    }
    for &t in targets {
        let l = x.dist(pts[t as usize]);
        score = score.min((l - wlo).min(whi - l) * 2.0);
    }
    for (vid, order) in rot_checks {
        let hub = pts[*vid as usize];
        let ix = match order.iter().position(|&t| t == X_ID) {
            Some(i) => i,
            None => continue,
        };
        let d = order.len();
        let ax = (x.y - hub.y).atan2(x.x - hub.x);
        for nb in [order[(ix + d - 1) % d], order[(ix + 1) % d]] {
            if nb == X_ID {
                continue;
            }
            let pn = pts[nb as usize];
            let an = (pn.y - hub.y).atan2(pn.x - hub.x);
            let mut gap = (ax - an).abs();
            if gap > std::f64::consts::PI {
                gap = std::f64::consts::TAU - gap;
            }
            score = score.min(gap * hub.dist(x) * 3.0);
        }
    }
    score
}

/// Pull every edge length into the strict (1, 1 + eps) window by damped
/// per-vertex moves, accepting a move only if it keeps the drawing planar
/// (exact predicates on the vertex's incident edges against everything)
/// and rotation-faithful at the vertex and its neighbors.
fn polish_window(
    input: (PlaneGraph, DrawReport),
    eps: f64,
) -> Option<(PlaneGraph, DrawReport)> {
    let (graph, report) = input;
    let mut pts = report.drawing.points.clone();
    let n = pts.len();
    let target_lo = 1.0 + 0.04 * eps;
    let target_hi = 1.0 + 0.96 * eps;
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ei, &(u, v)) in graph.edges.iter().enumerate() {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
        incident[u as usize].push(ei);
        incident[v as usize].push(ei);
    }
    let seg_of = |pts: &[Point], a: u32, b: u32| Segment::new(pts[a as usize], pts[b as usize]);

    let move_ok = |pts: &[Point], v: usize, q: Point, bbs: &[[f64; 4]]| -> bool {
        // Coincidence and rotation at v and each neighbor.
        for (i, p) in pts.iter().enumerate() {
            if i != v && *p == q {
                return false;
            }
        }
        let order: Vec<Point> = adj[v].iter().map(|&t| pts[t as usize]).collect();
        if !cw_realized(q, order.into_iter()) {
            return false;
        }
        for &t in &adj[v] {
            let hub = pts[t as usize];
            let order = adj[t as usize].iter().map(|&z| {
                if z as usize == v {
                    q
                } else {
                    pts[z as usize]
                }
            });
            if !cw_realized(hub, order) {
                return false;
            }
        }
        // Incident edges against everything else, exactly (bbox-gated).
        for &t in &adj[v] {
            let ns = Segment::new(q, pts[t as usize]);
            let nb = seg_bbox(&ns);
            for (i, p) in pts.iter().enumerate() {
                if i == v || i as u32 == t {
                    continue;
                }
                if p.x >= nb[0] && p.x <= nb[1] && p.y >= nb[2] && p.y <= nb[3]
                    && on_segment(*p, ns.a, ns.b)
                {
                    return false;
                }
            }
            for (ei, &(a, b)) in graph.edges.iter().enumerate() {
                if a as usize == v || b as usize == v || a == t || b == t {
                    continue;
                }
                let bb = &bbs[ei];
                if nb[1] < bb[0] || bb[1] < nb[0] || nb[3] < bb[2] || bb[3] < nb[2] {
                    continue;
                }
                if segments_conflict(ns, seg_of(pts, a, b)) {
                    return false;
                }
            }
        }
        // The moved vertex must not land on a non-incident edge.
        for &(a, b) in &graph.edges {
            if a as usize == v || b as usize == v {
                continue;
            }
            if on_segment(q, pts[a as usize], pts[b as usize]) {
                return false;
            }
        }
        true
    };

    let mut best_worst = f64::INFINITY;
    let mut stagnant = 0u32;
    for sweep in 0..150 {
        let mut worst = 0.0f64;
        let mut moved_any = false;
        let order: Vec<usize> = if sweep % 2 == 0 {
            (0..n).collect()
        } else {
            (0..n).rev().collect()
        };
        let mut bbs: Vec<[f64; 4]> = graph
            .edges
            .iter()
            .map(|&(a, b)| seg_bbox(&seg_of(&pts, a, b)))
            .collect();
        for v in order {
            // Gradient of the window penalty at v.
            let (mut gx, mut gy) = (0.0f64, 0.0f64);
            let mut local_worst = 0.0f64;
            for &t in &adj[v] {
                let pt = pts[t as usize];
                let d = pts[v].dist(pt).max(1e-18);
                let err = if d < target_lo {
                    d - target_lo
                } else if d > target_hi {
                    d - target_hi
                } else {
                    0.0
                };
                if err != 0.0 {
                    local_worst = local_worst.max(err.abs());
                    gx += err * (pts[v].x - pt.x) / d;
                    gy += err * (pts[v].y - pt.y) / d;
                }
            }
            worst = worst.max(local_worst);
            if local_worst == 0.0 {
                continue;
            }
            let gn = (gx * gx + gy * gy).sqrt();
            if gn == 0.0 {
                continue;
            }
            let mut step = (local_worst * 0.6).min(0.2 * eps);
            for _ in 0..12 {
                let q = Point::new(pts[v].x - step * gx / gn, pts[v].y - step * gy / gn);
                if move_ok(&pts, v, q, &bbs) {
                    pts[v] = q;
                    for &ei in &incident[v] {
                        let (a, b) = graph.edges[ei];
                        bbs[ei] = seg_bbox(&seg_of(&pts, a, b));
                    }
                    moved_any = true;
                    break;
                }
                step *= 0.5;
            }
        }
        if worst == 0.0 {
            break;
        }
        if worst < best_worst * 0.995 {
            best_worst = worst;
            stagnant = 0;
        } else {
            stagnant += 1;
            if stagnant > 12 {
                return None;
            }
        }
        if !moved_any {
            return None;
        }
        let _ = sweep;
    }

    let drawing = Drawing::new(pts).ok()?;
    let stats = length_stats(&graph.edges, &drawing).ok()?;
    if !(stats.min_len > 1.0 && stats.max_len < 1.0 + eps) {
        return None;
    }
    let verdict = crate::metrics::verify_planar_straightline(&graph.edges, &drawing);
    if !verdict.ok {
        return None;
    }
    Some((
        graph,
        DrawReport {
            drawing,
            stats,
            theoretical_bound: 1.0 + eps,
        },
    ))
}

fn seg_bbox(s: &Segment) -> [f64; 4] {
    [
        s.a.x.min(s.b.x),
        s.a.x.max(s.b.x),
        s.a.y.min(s.b.y),
        s.a.y.max(s.b.y),
    ]
}

/// True iff the neighbor points, taken in the given combinatorial clockwise
/// order, wind clockwise around the center: exactly one cyclic ascent of
/// angle and no ties. Keeping every placement rotation-faithful is what
/// lets later steps trust the traced faces geometrically.
fn cw_realized(center: Point, order: impl Iterator<Item = Point>) -> bool {
    let angles: Vec<f64> = order
        .map(|p| (p.y - center.y).atan2(p.x - center.x))
        .collect();
    if angles.len() <= 2 {
        // Degenerate only if two neighbors sit at the same angle.
        return angles.len() < 2 || angles[0] != angles[1];
    }
    let mut ascents = 0;
    for i in 0..angles.len() {
        let a = angles[i];
        let b = angles[(i + 1) % angles.len()];
        if b == a {
            return false;
        }
        if b > a {
            ascents += 1;
        }
    }
    ascents == 1
}

/// Exact validity of a candidate position for the new vertex: all its
/// edges in the open length window, no coincidence or on-segment
/// incidence, and no crossing with any kept segment.
fn placement_ok(
    x: Point,
    targets: &[u32],
    kept_segs: &[(Segment, [f64; 4])],
    pts: &[Point],
    wlo: f64,
    whi: f64,
    rot_checks: &[(u32, Vec<u32>)],
) -> bool {
    const X_ID: u32 = u32::MAX;
    // The combinatorial rotations must be realized by the geometry.
    if !cw_realized(x, targets.iter().map(|&t| pts[t as usize])) {
        return false;
    }
    for (vid, order) in rot_checks {
        let center = pts[*vid as usize];
        let ok = cw_realized(
            center,
            order
                .iter()
                .map(|&t| if t == X_ID { x } else { pts[t as usize] }),
        );
        if !ok {
            return false;
        }
    }
    for &t in targets {
        let l = x.dist(pts[t as usize]);
        if !(l > wlo && l < whi) {
            return false;
        }
    }
    for p in pts {
        if *p == x {
            return false;
        }
    }
    for (s, bb) in kept_segs {
        if x.x >= bb[0] && x.x <= bb[1] && x.y >= bb[2] && x.y <= bb[3] && on_segment(x, s.a, s.b)
        {
            return false;
        }
    }
    for (i, &t) in targets.iter().enumerate() {
        let pt = pts[t as usize];
        let ns = Segment::new(x, pt);
        let nb = seg_bbox(&ns);
        // Kept vertices must not lie on the new segment.
        for (vi, p) in pts.iter().enumerate() {
            if vi as u32 == t {
                continue;
            }
            if p.x >= nb[0] && p.x <= nb[1] && p.y >= nb[2] && p.y <= nb[3] && on_segment(*p, x, pt)
            {
                return false;
            }
        }
        for (s, bb) in kept_segs {
            if nb[1] < bb[0] || bb[1] < nb[0] || nb[3] < bb[2] || bb[3] < nb[2] {
                continue;
            }
            if segments_conflict(ns, *s) {
                return false;
            }
        }
        for &t2 in targets.iter().skip(i + 1) {
            let os = Segment::new(x, pts[t2 as usize]);
            if segments_conflict(ns, os) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_bipartite_from_script, gen_bipartite_random};
    use crate::metrics::verify_planar_straightline;

    fn check(witness: &[SplitStep], eps: f64) -> DrawReport {
        let (graph, report) = draw_bipartite_maximal(witness, eps).unwrap();
        let verdict = verify_planar_straightline(&graph.edges, &report.drawing);
        assert!(verdict.ok, "{:?}", verdict.violations.first());
        assert!(report.stats.min_len > 1.0);
        assert!(report.stats.max_len < 1.0 + eps);
        // The drawn graph replays the witness.
        let rebuilt = gen_bipartite_from_script(witness).unwrap();
        assert_eq!(rebuilt.edges(), graph.edges);
        report
    }

    #[test]
    fn base_square() {
        let report = check(&[], 0.1);
        assert_eq!(report.stats.ratio, 1.0);
    }

    #[test]
    fn one_insertion() {
        let report = check(&[SplitStep { v: 1, u: 0, w: 2 }], 0.1);
        assert!(report.stats.ratio < 1.1);
    }

    #[test]
    fn random_graphs() {
        for seed in 0..6u64 {
            let (_, witness) = gen_bipartite_random(40, seed).unwrap();
            check(&witness, 0.08);
        }
    }

    #[test]
    fn epsilon_validation() {
        assert!(matches!(
            draw_bipartite_maximal(&[], -1.0),
            Err(Error::InvalidEpsilon)
        ));
    }
}
