use swarmwave::sim::gen::{gen_figure1a, gen_figure1b, gen_grid_polygon, GridShape};
use swarmwave::sim::{run, Protocol, Scenario, Termination};

fn suite_audits() -> Vec<String> {
    [
        "collision_free",
        "convexity",
        "hull_area_monotone",
        "boundary_identity",
        "hole_bound",
        "invert_roundtrip",
        "segment_non_overlap",
        "degeneracy_flow",
        "corner_distance",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn wave_case(shape: GridShape, side: usize, spacing: f64, max_rounds: usize) {
    let config = match gen_grid_polygon(shape, side, spacing) {
        Ok(c) => c,
        Err(e) => {
            println!("{shape:?}{side} @ {spacing}: gen failed: {e}");
            return;
        }
    };
    let pairs: Vec<(f64, f64)> = config.positions().iter().map(|p| (p.x, p.y)).collect();
    let n = pairs.len();
    let label = format!("{shape:?}{side}-{spacing}");
    let mut sc = Scenario::new(&label, Protocol::Wave, 0.3, pairs);
    sc.audits = suite_audits();
    sc.max_rounds = max_rounds;
    let start = std::time::Instant::now();
    let t = run(&sc);
    let ms = start.elapsed().as_millis();
    let steps = t.records.len().saturating_sub(1);
    let min_gap = t
        .records
        .iter()
        .filter_map(|r| r.min_pairwise_distance)
        .fold(f64::INFINITY, f64::min);
    let d0 = t.records.first().map(|r| r.diameter).unwrap_or(f64::NAN);
    let d1 = t.records.last().map(|r| r.diameter).unwrap_or(f64::NAN);
    let syms: std::collections::BTreeSet<usize> =
        t.records.iter().map(|r| r.symmetricity).collect();
    println!(
        "{shape:?}{side} @ {spacing}: n={n} term={:?} steps={steps} fails={} d {d0:.3}->{d1:.3} min_gap={min_gap:.3e} sym={syms:?} [{ms}ms]",
        t.termination,
        t.audit_failures(),
    );
    for r in &t.records {
        for (name, out) in &r.audit_results {
            if !out.pass {
                println!("    round {} {name}: {}", r.round, out.detail);
            }
        }
    }
}

fn figure_case(name: &str, sc: Scenario) {
    let start = std::time::Instant::now();
    let t = run(&sc);
    let ms = start.elapsed().as_millis();
    let steps = t.records.len().saturating_sub(1);
    let syms: std::collections::BTreeSet<usize> =
        t.records.iter().map(|r| r.symmetricity).collect();
    let disconnected: Vec<usize> = t
        .records
        .iter()
        .filter(|r| !r.connected)
        .map(|r| r.round)
        .take(3)
        .collect();
    let min_gap = t
        .records
        .iter()
        .filter_map(|r| r.min_pairwise_distance)
        .fold(f64::INFINITY, f64::min);
    let d1 = t.records.last().map(|r| r.diameter).unwrap_or(f64::NAN);
    println!(
        "{name}: term={:?} steps={steps} fails={} sym={syms:?} first_disconnected={disconnected:?} min_gap={min_gap:.3e} d_end={d1:.3} [{ms}ms]",
        t.termination,
        t.audit_failures(),
    );
    let mut shown = 0;
    for r in &t.records {
        for (audit, out) in &r.audit_results {
            if !out.pass && shown < 6 {
                println!("    round {} {audit}: {}", r.round, out.detail);
                shown += 1;
            }
        }
    }
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let wants = |k: &str| args.is_empty() || args.iter().any(|a| a == k);

    if wants("suite") {
        wave_case(GridShape::Square, 5, 0.70, 400);
        wave_case(GridShape::Square, 7, 0.55, 400);
        wave_case(GridShape::Square, 7, 0.60, 400);
        wave_case(GridShape::Square, 7, 0.65, 400);
        wave_case(GridShape::Square, 9, 0.40, 400);
        wave_case(GridShape::Square, 9, 0.45, 400);
        wave_case(GridShape::Square, 9, 0.50, 400);
        wave_case(GridShape::Square, 11, 0.30, 400);
        wave_case(GridShape::Square, 11, 0.35, 400);
        wave_case(GridShape::Square, 13, 0.25, 400);
        wave_case(GridShape::Square, 13, 0.28, 400);
        wave_case(GridShape::Square, 15, 0.20, 400);
        wave_case(GridShape::Square, 15, 0.21, 400);
        wave_case(GridShape::Hexagon, 4, 0.70, 400);
        wave_case(GridShape::Hexagon, 4, 0.75, 400);
        wave_case(GridShape::Hexagon, 5, 0.55, 400);
        wave_case(GridShape::Hexagon, 5, 0.60, 400);
    }
    if wants("long") {
        // Post-fix behavior of the old failing case: must no longer die in
        // the boundary walk; audit failures at depth are expected.
        wave_case(GridShape::Square, 9, 0.70, 400);
    }
    if wants("hull") {
        // Hull area must be non-increasing under the averaging step; the
        // audit reported growth at figure1a round 2, so recompute it raw.
        use swarmwave::geom::{connectivity_boundary, convex_hull, signed_area, Configuration};
        let sc = gen_figure1a();
        let mut config = Configuration::from_pairs(&sc.positions).unwrap();
        let params = sc.gta_params().unwrap();
        for round in 0..6 {
            let pts = config.positions();
            let hull = convex_hull(pts, 1e-9);
            let poly: Vec<_> = hull.iter().map(|&i| pts[i]).collect();
            let area = signed_area(&poly).abs();
            let cyc = connectivity_boundary(&config, 1e-9).unwrap();
            println!(
                "round {round}: hull verts={} area={area:.9} cycle len={} cycle area={:.9}",
                hull.len(),
                cyc.len(),
                cyc.signed_area()
            );
            if round == 2 || round == 3 {
                println!("  hull ids: {hull:?}");
                for &i in &hull {
                    println!("    {i}: ({:.9}, {:.9})", pts[i].x, pts[i].y);
                }
                if round == 2 {
                    for &i in &[0usize, 18, 69, 89, 95, 77, 26, 6] {
                        println!("    dropped {i}: ({:.9}, {:.9})", pts[i].x, pts[i].y);
                    }
                }
            }
            config = swarmwave::gta::step(&config, &params).unwrap();
        }
    }
    if wants("walkdbg") {
        let config = gen_grid_polygon(GridShape::Square, 9, 0.7).unwrap();
        let pairs: Vec<(f64, f64)> = config.positions().iter().map(|p| (p.x, p.y)).collect();
        let mut sc = Scenario::new("grid9-debug", Protocol::Wave, 0.3, pairs);
        sc.audits = vec![];
        sc.max_rounds = 400;
        let t = run(&sc);
        println!("debug run: term={:?} records={}", t.termination, t.records.len());
        let last = t.records.last().unwrap();
        let cfg = swarmwave::geom::Configuration::from_pairs(&last.positions).unwrap();
        match swarmwave::geom::connectivity_boundary(&cfg, 1e-9) {
            Ok(c) => println!("last config walk ok: len={} degenerate={}", c.len(), c.degenerate),
            Err(e) => println!("last config walk err: {e}"),
        }
        // Nearest-neighbor histogram of the last config.
        let pts = cfg.positions();
        let mut gaps: Vec<(f64, usize, usize)> = Vec::new();
        for i in 0..pts.len() {
            let mut best = (f64::INFINITY, usize::MAX);
            for j in 0..pts.len() {
                if i != j {
                    let d = pts[i].dist(pts[j]);
                    if d < best.0 {
                        best = (d, j);
                    }
                }
            }
            gaps.push((best.0, i, best.1));
        }
        gaps.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for (d, i, j) in gaps.iter().take(12) {
            println!("  gap {d:.3e}: {i} <-> {j}");
        }
        std::fs::write(
            "/tmp/walkdbg.json",
            serde_json::to_string(&last.positions).unwrap(),
        )
        .unwrap();
        println!("wrote /tmp/walkdbg.json");
    }
    if wants("fig1a") {
        use swarmwave::geom::{connectivity_boundary, largest_empty_circle, Configuration};
        let build = |cols: i64, rows: i64, s: f64, hole: f64| -> Vec<(f64, f64)> {
            let mut pts = Vec::new();
            for i in 0..cols {
                for j in 0..rows {
                    let x = s * (i - (cols - 1) / 2) as f64;
                    let y = s * (j - (rows - 1) / 2) as f64;
                    if (x * x + y * y).sqrt() <= hole {
                        continue;
                    }
                    pts.push((x, y));
                }
            }
            pts
        };
        // Grid scale of the cluster-split figure: lattice spacing 1/sqrt(2)
        // under viewing range 2+sqrt(2), renormalized to unit range.
        let s = (f64::sqrt(2.0) - 1.0) / 2.0;
        for &(cols, rows, s, hole, eps, cap) in &[
            // Wave near-gathers anything with diameter <= 2+sqrt(2), so the
            // rectangle must exceed that for the hole rejection to fire.
            (21i64, 13i64, s, 0.52, 0.25, 2000usize),
            (13, 9, 0.29, 0.52, 0.25, 2000),
            (15, 11, 0.26, 0.52, 0.25, 2000),
            (17, 13, s, 0.52, 0.25, 2000),
        ] {
            let pts = build(cols, rows, s, hole);
            let cfg = Configuration::from_pairs(&pts).unwrap();
            let lec = connectivity_boundary(&cfg, 1e-9)
                .ok()
                .and_then(|c| largest_empty_circle(&cfg, &c).ok())
                .map(|c| c.diameter())
                .unwrap_or(f64::NAN);
            let label = format!("{cols}x{rows} s={s} hole={hole} eps={eps} n={} lec={lec:.3}", pts.len());
            let mut sc = Scenario::new(&label, Protocol::Gta, eps, pts);
            sc.max_rounds = cap;
            sc.audits = vec![
                "symmetry_preserved".into(),
                "collision_free".into(),
                "hull_area_monotone".into(),
            ];
            figure_case(&label, sc);
        }
    }
    if wants("fig1b") {
        let s = (f64::sqrt(2.0) - 1.0) / 2.0;
        for &(side, gap, cap) in &[(10usize, 0.3f64, 70usize), (20, 0.3, 70)] {
            let mut pts = Vec::new();
            for i in 0..side {
                for j in 0..side {
                    let cx = -gap - s * i as f64;
                    let cy = -gap - s * j as f64;
                    pts.push((cx, cy));
                    pts.push((-cx, -cy));
                }
            }
            let label = format!("clusters {side}x{side} gap={gap} n={}", pts.len());
            let mut sc = Scenario::new(&label, Protocol::Gta, 0.5, pts);
            sc.max_rounds = cap;
            sc.audits = vec![
                "symmetry_preserved".into(),
                "collision_free".into(),
                "hull_area_monotone".into(),
            ];
            figure_case(&label, sc);
        }
    }
    if wants("walk2") {
        use swarmwave::geom::{connectivity_boundary, Configuration, Point};
        let raw: Vec<(f64, f64)> =
            serde_json::from_str(&std::fs::read_to_string("/tmp/walkdbg.json").unwrap()).unwrap();
        let pts: Vec<Point<f64>> = raw.iter().map(|&(x, y)| Point::new(x, y)).collect();
        // Collapse sub-tolerance piles by hand, keeping the member farthest
        // from the centroid, mirroring what the boundary walk does.
        let n = pts.len();
        let cx = pts.iter().map(|p| p.x).sum::<f64>() / n as f64;
        let cy = pts.iter().map(|p| p.y).sum::<f64>() / n as f64;
        let c = Point::new(cx, cy);
        let mut keep: Vec<Point<f64>> = Vec::new();
        'outer: for (i, &p) in pts.iter().enumerate() {
            for (j, &q) in pts.iter().enumerate() {
                if j != i && p.dist(q) <= 1e-9 {
                    // Keep only the pile member farthest from the centroid.
                    if (q.dist(c), i) > (p.dist(c), j) && q.dist(c) > p.dist(c) {
                        continue 'outer;
                    }
                    if q.dist(c) == p.dist(c) && j < i {
                        continue 'outer;
                    }
                }
            }
            keep.push(p);
        }
        println!("reduced from {} to {} points", n, keep.len());
        let check = |set: &[Point<f64>]| -> bool {
            let cfg = Configuration::new(set.to_vec()).unwrap();
            match connectivity_boundary(&cfg, 1e-9) {
                Err(e) => e.to_string().contains("failed to close"),
                Ok(_) => false,
            }
        };
        println!("reduced config errors: {}", check(&keep));
        if check(&keep) {
            // Greedy minimization: drop any point whose removal keeps the error.
            let mut cur = keep.clone();
            loop {
                let mut shrunk = false;
                let mut i = 0;
                while i < cur.len() {
                    let mut t = cur.clone();
                    t.remove(i);
                    if t.len() >= 3 && check(&t) {
                        cur = t;
                        shrunk = true;
                    } else {
                        i += 1;
                    }
                }
                if !shrunk {
                    break;
                }
            }
            println!("minimal failing set ({} points):", cur.len());
            for p in &cur {
                println!("  ({:.17e}, {:.17e})", p.x, p.y);
            }
        }
    }
    if wants("figures") {
        figure_case("figure1a", gen_figure1a());
        figure_case("figure1b", gen_figure1b());
        let mut wave1a = gen_figure1a();
        wave1a.protocol = Protocol::Wave;
        wave1a.epsilon = 0.3;
        let t = run(&wave1a);
        println!(
            "figure1a-wave: term={:?} records={}",
            t.termination,
            t.records.len()
        );
        assert!(matches!(t.termination, Termination::Error(_)));
    }
}
