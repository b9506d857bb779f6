use elr_core::generators::gen_bipartite_random;
use elr_core::geometry::{on_segment, segments_conflict, Point, Segment};
use elr_core::model::{QuadBuilder, SplitStep};
use std::collections::BTreeMap;

fn main() {
    let (_, witness) = gen_bipartite_random(200, 2).unwrap();
    let txt = std::fs::read_to_string("/tmp/wall.txt").unwrap();
    let mut lines = txt.lines();
    let step_idx: usize = lines.next().unwrap().parse().unwrap();
    let n = 4 + step_idx;
    let pts: Vec<Point> = (0..n)
        .map(|_| {
            let l = lines.next().unwrap();
            let mut it = l.split_whitespace();
            Point::new(it.next().unwrap().parse().unwrap(), it.next().unwrap().parse().unwrap())
        })
        .collect();
    // rebuild builder by replay (rotations in the dump are redundant)
    let mut b = QuadBuilder::new();
    for &s in &witness[..step_idx] {
        b.split(s).unwrap();
    }
    let step: SplitStep = witness[step_idx];
    println!("blocking step {}: {:?}", step_idx, step);
    let arc = b.arc(step.v, step.u, step.w).unwrap();
    println!("arc {:?} deg(v)={}", arc, b.degree(step.v));
    let pv = pts[step.v as usize];
    let eps = 0.05f64;
    let mut targets = vec![step.u];
    targets.extend(&arc);
    targets.push(step.w);
    for &t in &targets {
        let p = pts[t as usize];
        println!("  t{t}: ang {:.6} dist {:.6}", (p.y - pv.y).atan2(p.x - pv.x), pv.dist(p));
    }
    let kept: Vec<(u32, u32)> = b.edges().iter().copied()
        .filter(|&(a, c)| !(a == step.v && arc.contains(&c)) && !(c == step.v && arc.contains(&a)))
        .collect();
    const X_ID: u32 = u32::MAX;
    let mut rot_checks: Vec<(u32, Vec<u32>)> = Vec::new();
    {
        let (v, u, w) = (step.v, step.u, step.w);
        let mut at_u = b.rotation[u as usize].clone();
        let iu = at_u.iter().position(|&t| t == v).unwrap();
        at_u.insert(iu, X_ID);
        rot_checks.push((u, at_u));
        let mut at_w = b.rotation[w as usize].clone();
        let iw = at_w.iter().position(|&t| t == v).unwrap();
        at_w.insert(iw + 1, X_ID);
        rot_checks.push((w, at_w));
        for &m in &arc {
            rot_checks.push((m, b.rotation[m as usize].iter().map(|&t| if t == v { X_ID } else { t }).collect()));
        }
    }
    let cw_ok = |center: Point, order: &[Point]| -> bool {
        let angles: Vec<f64> = order.iter().map(|p| (p.y - center.y).atan2(p.x - center.x)).collect();
        if angles.len() <= 2 { return angles.len() < 2 || angles[0] != angles[1]; }
        let mut asc = 0;
        for i in 0..angles.len() {
            let a = angles[i]; let b2 = angles[(i + 1) % angles.len()];
            if b2 == a { return false; }
            if b2 > a { asc += 1; }
        }
        asc == 1
    };
    let mut hist: BTreeMap<String, usize> = BTreeMap::new();
    let mut found = 0;
    let mut best: Option<(Point, f64)> = None;
    for gx in 0..400 {
        for gy in 0..400 {
            // polar around v across the whole plane region near targets
            let theta = std::f64::consts::TAU * gx as f64 / 400.0;
            let r = 1.3 * (gy as f64 + 0.5) / 400.0;
            let x = Point::new(pv.x + r * theta.cos(), pv.y + r * theta.sin());
            let mut reason = String::from("ok");
            'diag: {
                for &t in &targets {
                    let l = x.dist(pts[t as usize]);
                    if !(l > 1.0 && l < 1.0 + eps) { reason = "len".into(); break 'diag; }
                }
                if !cw_ok(x, &targets.iter().map(|&t| pts[t as usize]).collect::<Vec<_>>()) { reason = "rot-x".into(); break 'diag; }
                for (vid, order) in &rot_checks {
                    let c = pts[*vid as usize];
                    let ptsv: Vec<Point> = order.iter().map(|&t| if t == X_ID { x } else { pts[t as usize] }).collect();
                    if !cw_ok(c, &ptsv) { reason = format!("rot-{vid}"); break 'diag; }
                }
                for &(a, c) in &kept {
                    if on_segment(x, pts[a as usize], pts[c as usize]) { reason = "x-on".into(); break 'diag; }
                }
                for (i, &t) in targets.iter().enumerate() {
                    let ns = Segment::new(x, pts[t as usize]);
                    for (vi, p) in pts.iter().enumerate() {
                        if vi as u32 != t && on_segment(*p, ns.a, ns.b) { reason = "v-on-new".into(); break 'diag; }
                    }
                    for &(a, c) in &kept {
                        if segments_conflict(ns, Segment::new(pts[a as usize], pts[c as usize])) { reason = format!("X ({a},{c})"); break 'diag; }
                    }
                    for &t2 in targets.iter().skip(i + 1) {
                        if segments_conflict(ns, Segment::new(x, pts[t2 as usize])) { reason = "nXn".into(); break 'diag; }
                    }
                }
            }
            if reason == "ok" {
                found += 1;
                let mut sc = f64::INFINITY;
                for p in &pts { sc = sc.min(x.dist(*p)); }
                if best.as_ref().map_or(true, |(_, s)| sc > *s) { best = Some((x, sc)); }
            } else { *hist.entry(reason).or_default() += 1; }
        }
    }
    println!("feasible: {found}/160000");
    if let Some((x, s)) = best { println!("best ({:.6}, {:.6}) score {s:.6} r-from-v {:.6}", x.x, x.y, pv.dist(x)); }
    let mut v: Vec<_> = hist.into_iter().collect();
    v.sort_by_key(|(_, c)| std::cmp::Reverse(*c));
    for (r, c) in v.iter().take(8) { println!("  {c}: {r}"); }
}
