//! `verify-all`: every table, search and structural check in one run.

use serde::Serialize;
use serde_json::json;

use gqm_core::chsh::{chsh_maximize, chsh_maximize_sequential, ChshOptions};
use gqm_core::correlation::{joint_probabilities, two_particle_table, ProductObservable};
use gqm_core::field::FieldSpec;
use gqm_core::geometry::{enumerate_lines, enumerate_planes, product_grid_check};
use gqm_core::group::{cycle_census, fingerprint, fingerprint_match, ImageKind, SymmetryGroup};
use gqm_core::hv::{analyze, entangled_sweep, restricted_gap_check, Literal, Verdict};
use gqm_core::observable::SpinSystem;
use gqm_core::perm::alternating_group;
use gqm_core::projective::{bracket, enumerate_states};
use gqm_core::reference::{parse_row, ONE_PARTICLE, SIX_POINT_CENSUS, TWO_PARTICLE};
use gqm_core::twostate::{build_multiplets, TwoParticleSystem};
use gqm_core::{abs_value, r, Rational};

use crate::report::{Report, Table};
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type Outcome = Result<String, String>;

fn fmt_row(v: &[Rational]) -> String {
    v.iter()
        .map(Rational::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn table1() -> Outcome {
    let sys = SpinSystem::new(2).map_err(|e| e.to_string())?;
    let rows = sys.one_particle_table(false);
    if rows.len() != ONE_PARTICLE.len() {
        return Err(format!(
            "expected {} rows, got {}",
            ONE_PARTICLE.len(),
            rows.len()
        ));
    }
    for (row, (obs, state, want)) in rows.iter().zip(ONE_PARTICLE) {
        let got = vec![row.p_plus, row.p_minus, row.expectation];
        let want = parse_row(want);
        if row.observable != obs || row.state != state || got != want {
            return Err(format!(
                "row {obs}/{state}: expected {}, got {}/{}: {}",
                fmt_row(&want),
                row.observable,
                row.state,
                fmt_row(&got)
            ));
        }
    }
    Ok("9 rows match".into())
}

pub fn table2() -> Outcome {
    let two = TwoParticleSystem::new(2).map_err(|e| e.to_string())?;
    let rows = two_particle_table(&two).map_err(|e| e.to_string())?;
    if rows.len() != TWO_PARTICLE.len() {
        return Err(format!(
            "expected {} rows, got {}",
            TWO_PARTICLE.len(),
            rows.len()
        ));
    }
    for (row, (obs, state, want)) in rows.iter().zip(TWO_PARTICLE) {
        let mut got = row.p.to_vec();
        got.push(row.correlation);
        let want = parse_row(want);
        if row.observable != obs || row.state != state || got != want {
            return Err(format!(
                "row {obs}/{state}: expected {}, got {}/{}: {}",
                fmt_row(&want),
                row.observable,
                row.state,
                fmt_row(&got)
            ));
        }
    }
    Ok("54 rows match".into())
}

pub fn chsh_q2() -> Outcome {
    let two = TwoParticleSystem::new(2).map_err(|e| e.to_string())?;
    let res = chsh_maximize(&two, ChshOptions::default());
    if res.max_abs != r(2, 1) {
        return Err(format!("max |value| expected 2, got {}", res.max_abs));
    }
    let spin = two.spin();
    let s = two.state_index("S").map_err(|e| e.to_string())?;
    let idx = |n: &str| -> Result<usize, String> {
        let o = spin.parse_observable(n).map_err(|e| e.to_string())?;
        res.observables
            .iter()
            .position(|&x| x == o)
            .ok_or_else(|| format!("{n} not in the search"))
    };
    for (set, want) in [
        (["X", "Y", "Y", "X"], r(-2, 1)),
        (["X", "Z", "Y", "Z"], r(2, 1)),
    ] {
        let settings = [idx(set[0])?, idx(set[1])?, idx(set[2])?, idx(set[3])?];
        match res.find_achiever(s, settings) {
            Some(a) if a.value == want => {}
            Some(a) => {
                return Err(format!(
                    "({},{};{},{}) on S: expected {want}, got {}",
                    set[0], set[1], set[2], set[3], a.value
                ))
            }
            None => {
                return Err(format!(
                    "({},{};{},{}) on S is not an achiever",
                    set[0], set[1], set[2], set[3]
                ))
            }
        }
    }
    let mags = res.magnitudes();
    if mags != vec![r(2, 3), r(2, 1)] {
        return Err(format!(
            "magnitudes expected {{2/3, 2}}, got {{{}}}",
            fmt_row(&mags)
        ));
    }
    Ok(format!(
        "max 2 with {} achievers in {} configurations; magnitudes {{2/3, 2}}",
        res.achievers.len(),
        res.evaluated
    ))
}

pub fn chsh_regression(q: usize) -> Outcome {
    let two = TwoParticleSystem::new(q).map_err(|e| e.to_string())?;
    let res = chsh_maximize(&two, ChshOptions::default());
    let detail = format!(
        "max |value| = {} over {} configurations",
        res.max_abs, res.evaluated
    );
    if (2..=5).contains(&q) && res.max_abs != r(2, 1) {
        return Err(format!("expected 2; {detail}"));
    }
    Ok(detail)
}

pub fn hv_singlet() -> Outcome {
    let two = TwoParticleSystem::new(2).map_err(|e| e.to_string())?;
    let spin = two.spin();
    let s = two.state_index("S").map_err(|e| e.to_string())?;
    let set = spin.canonical_observables();
    let a = analyze(&two, s, &set).map_err(|e| e.to_string())?;
    let survivors = a.survivors.as_ref().map_or(usize::MAX, Vec::len);
    if survivors != 0 || a.verdict != Verdict::NoHiddenVariables {
        return Err(format!("expected 0 of 64 survivors, got {survivors}"));
    }
    let lit = |p: u8, name: &str, v: i8| -> Result<Literal, String> {
        let o = spin.parse_observable(name).map_err(|e| e.to_string())?;
        let i = set
            .iter()
            .position(|&x| x == o)
            .ok_or("observable missing")?;
        Ok(Literal {
            particle: p,
            observable: i,
            value: v,
        })
    };
    for (from, to) in [
        (lit(1, "X", 1)?, lit(2, "Z", 1)?),
        (lit(2, "Z", 1)?, lit(1, "Y", 1)?),
    ] {
        if !a.implications.iter().any(|e| e.from == from && e.to == to) {
            return Err(format!("missing implication {from:?} => {to:?}"));
        }
    }
    let cycle = a.contradiction.as_ref().ok_or("no contradiction cycle")?;
    if cycle.len() < 3 || cycle.first() != cycle.last() || !cycle.contains(&cycle[0].negate()) {
        return Err("contradiction cycle is malformed".into());
    }
    let gap = restricted_gap_check(&two).map_err(|e| e.to_string())?;
    let third = r(1, 3);
    if !gap.ok || gap.p_y1z2_plus_minus != third || gap.p_z1y2_minus_plus != third {
        return Err(format!(
            "restricted check: {} survivors, {} with (Y1,Z2)=(+,-), {} with (Z1,Y2)=(-,+), probabilities {} and {}",
            gap.survivors.len(),
            gap.y1z2_plus_minus,
            gap.z1y2_minus_plus,
            gap.p_y1z2_plus_minus,
            gap.p_z1y2_minus_plus
        ));
    }
    Ok(format!(
        "0 of 64 survive; contradiction cycle of length {}; restricted set keeps {} survivors, none anti-correlated",
        cycle.len() - 1,
        gap.survivors.len()
    ))
}

pub fn hv_sweep(q: usize) -> Outcome {
    let two = TwoParticleSystem::new(q).map_err(|e| e.to_string())?;
    let sweep = entangled_sweep(&two);
    match sweep.iter().find(|(_, survives)| *survives) {
        Some((s, _)) => Err(format!(
            "state {} admits hidden variables",
            two.states()[*s].label
        )),
        None => Ok(format!(
            "no survivors on any of {} entangled states",
            sweep.len()
        )),
    }
}

pub fn state_counts() -> Outcome {
    for (q, want) in [(2, 3), (3, 4), (4, 5), (5, 6)] {
        let n = SpinSystem::new(q)
            .map_err(|e| e.to_string())?
            .states()
            .len();
        if n != want {
            return Err(format!("q = {q}: expected {want} states, got {n}"));
        }
    }
    let two = TwoParticleSystem::new(2).map_err(|e| e.to_string())?;
    let (total, product) = (two.states().len(), two.product_count());
    if (total, product) != (15, 9) {
        return Err(format!(
            "expected 15 states with 9 product, got {total} with {product}"
        ));
    }
    let g = SymmetryGroup::new(two.spin()).map_err(|e| e.to_string())?;
    let s = two.state_index("S").map_err(|e| e.to_string())?;
    let orbit = two.local_orbit(&g, s);
    if orbit.len() != 6 || !two.entangled_indices().all(|i| orbit.contains(&i)) {
        return Err(format!(
            "local orbit of S has {} states, expected the 6 entangled",
            orbit.len()
        ));
    }
    let m = build_multiplets(&two, &g).map_err(|e| e.to_string())?;
    let sizes = (m.singlet.len(), m.triplet.len(), m.doublet.len());
    if sizes != (1, 3, 2) {
        return Err(format!(
            "multiplet sizes expected 1/3/2, got {}/{}/{}",
            sizes.0, sizes.1, sizes.2
        ));
    }
    Ok("3/4/5/6 states; 9 product + 6 entangled in one local orbit; multiplets 1/3/2".into())
}

pub fn geometry() -> Outcome {
    let f = FieldSpec::of_order(2).map_err(|e| e.to_string())?;
    let pts = enumerate_states(&f, 4).map_err(|e| e.to_string())?;
    let lines = enumerate_lines(&f, &pts).map_err(|e| e.to_string())?;
    let planes = enumerate_planes(&f, &pts, &lines).map_err(|e| e.to_string())?;
    let grid = product_grid_check(&f, &pts, &lines).map_err(|e| e.to_string())?;
    if lines.len() != 35 {
        return Err(format!("expected 35 lines, got {}", lines.len()));
    }
    for (p, pt) in pts.iter().enumerate() {
        let n = lines.iter().filter(|l| l.points.contains(&p)).count();
        if n != 7 {
            return Err(format!("point {} lies on {n} lines, expected 7", pt.label));
        }
    }
    if planes.planes.len() != 15 || planes.planes_per_line.iter().any(|&n| n != 3) {
        return Err("expected 15 planes with 3 through every line".into());
    }
    if !grid.ok || grid.grid_lines.len() != 6 {
        return Err(format!(
            "product grid check failed with {} grid lines",
            grid.grid_lines.len()
        ));
    }
    Ok("35 lines, 7 per point, 15 planes, 3 per line; grid and transversals hold".into())
}

pub fn groups() -> Outcome {
    let want = [
        (2, 6, ImageKind::Symmetric),
        (3, 24, ImageKind::Symmetric),
        (4, 60, ImageKind::Alternating),
        (5, 120, ImageKind::Other),
    ];
    for (q, order, kind) in want {
        let sys = SpinSystem::new(q).map_err(|e| e.to_string())?;
        let g = SymmetryGroup::new(&sys).map_err(|e| e.to_string())?;
        let image = g.image();
        if g.order() != order || image.kind != kind {
            return Err(format!(
                "q = {q}: expected order {order} ({kind:?}), got {} ({:?})",
                g.order(),
                image.kind
            ));
        }
    }
    Ok("orders 6/24/60/120; images S3, S4, A5 and a 120-element subgroup of S6".into())
}

pub fn census() -> Outcome {
    let sys = SpinSystem::new(5).map_err(|e| e.to_string())?;
    let g = SymmetryGroup::new(&sys).map_err(|e| e.to_string())?;
    let rows = cycle_census(&g);
    let got: Vec<usize> = rows.iter().map(|r| r.group_count).collect();
    let want: Vec<usize> = SIX_POINT_CENSUS.iter().map(|c| c.3).collect();
    if got != want {
        return Err(format!("column expected {want:?}, got {got:?}"));
    }
    for (row, c) in rows.iter().zip(SIX_POINT_CENSUS) {
        if row.cycle_type != c.0 || row.sign != c.1 || row.symmetric_count != c.2 {
            return Err(format!(
                "row {:?} differs from the reference ordering",
                row.cycle_type
            ));
        }
    }
    let perms = g.permutations();
    let fp = fingerprint(&perms).map_err(|e| e.to_string())?;
    if fp.classes.len() != 7 || (fp.even, fp.odd) != (60, 60) {
        return Err(format!(
            "expected 7 classes and a 60/60 split, got {} classes and {}/{}",
            fp.classes.len(),
            fp.even,
            fp.odd
        ));
    }
    let even: Vec<_> = perms.into_iter().filter(|p| p.parity() > 0).collect();
    let even_fp = fingerprint(&even).map_err(|e| e.to_string())?;
    let a5 = fingerprint(&alternating_group(5)).map_err(|e| e.to_string())?;
    if !fingerprint_match(&even_fp, &a5) {
        return Err("even half does not match A5".into());
    }
    Ok("column 20,24,30,0,20,0,10,15,0,0,1; 7 classes; 60/60; even half matches A5".into())
}

pub fn pairing() -> Outcome {
    for q in 2..=5 {
        let sys = SpinSystem::new(q).map_err(|e| e.to_string())?;
        let f = sys.field();
        for (i, d) in sys.duals().iter().enumerate() {
            for (j, s) in sys.states().iter().enumerate() {
                let b = bracket(f, &d.rep, &s.rep).map_err(|e| e.to_string())?;
                let want = u32::from(i != j);
                if abs_value(b) != want {
                    return Err(format!(
                        "q = {q}: |<{}|{}>| expected {want}",
                        d.label, s.label
                    ));
                }
            }
        }
        for a in f.elements() {
            for b in f.elements() {
                if abs_value(f.mul(a, b)) != abs_value(a) * abs_value(b) {
                    return Err(format!(
                        "q = {q}: |{}·{}| is not multiplicative",
                        f.name(a),
                        f.name(b)
                    ));
                }
            }
        }
    }
    Ok("pairing and abs multiplicativity hold for q = 2..5".into())
}

pub fn factorization() -> Outcome {
    for q in [2, 3] {
        let two = TwoParticleSystem::new(q).map_err(|e| e.to_string())?;
        let spin = two.spin();
        let obs = spin.enumerate_observables();
        let n = spin.states().len();
        for r1 in 0..n {
            for s1 in 0..n {
                let st = two.tensor(r1, s1);
                for &a in &obs {
                    for &b in &obs {
                        let pa = spin.outcome_probabilities(a, r1);
                        let pb = spin.outcome_probabilities(b, s1);
                        let joint = joint_probabilities(
                            &two,
                            ProductObservable {
                                first: a,
                                second: b,
                            },
                            st,
                        );
                        let want = [
                            pa.p_plus * pb.p_plus,
                            pa.p_plus * pb.p_minus,
                            pa.p_minus * pb.p_plus,
                            pa.p_minus * pb.p_minus,
                        ];
                        if joint.p != want {
                            return Err(format!(
                                "q = {q}: {}⊗{} on {} does not factorize",
                                spin.observable_name(a),
                                spin.observable_name(b),
                                two.states()[st].label
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok("joint probabilities factorize on every product state for q = 2, 3".into())
}

pub fn determinism() -> Outcome {
    for q in [2, 3] {
        let two = TwoParticleSystem::new(q).map_err(|e| e.to_string())?;
        for prune in [true, false] {
            let opts = ChshOptions {
                include_product: false,
                prune,
            };
            let seq = chsh_maximize_sequential(&two, opts);
            let par = chsh_maximize(&two, opts);
            if seq != par {
                return Err(format!(
                    "q = {q}: sequential and parallel searches differ (prune = {prune})"
                ));
            }
        }
    }
    #[cfg(feature = "parallel")]
    {
        let mut hashes = Vec::new();
        for t in [1, 4] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| e.to_string())?;
            let rep = pool
                .install(|| crate::commands::chsh(2, false, true, 1000))
                .map_err(|e| e.to_string())?;
            hashes.push(rep.content_hash());
        }
        if hashes[0] != hashes[1] {
            return Err(format!(
                "chsh hash differs across thread counts: {} vs {}",
                hashes[0], hashes[1]
            ));
        }
    }
    Ok("sequential and parallel searches agree; hashes stable across thread counts".into())
}

/// Checks for `q`: the published q = 2 material plus every cross-q check.
pub fn checks(q: usize) -> Result<Vec<(String, Outcome)>, CliError> {
    SpinSystem::new(q)?;
    let mut out: Vec<(String, Outcome)> = Vec::new();
    if q == 2 {
        out.push(("one-particle table".into(), table1()));
        out.push(("two-particle table".into(), table2()));
        out.push(("chsh q=2".into(), chsh_q2()));
        out.push(("hidden variables on S".into(), hv_singlet()));
        out.push(("state counts".into(), state_counts()));
        out.push(("geometry".into(), geometry()));
    } else {
        out.push((format!("chsh q={q}"), chsh_regression(q)));
        out.push((format!("hidden-variable sweep q={q}"), hv_sweep(q)));
    }
    out.push(("group structure".into(), groups()));
    out.push(("six-point census".into(), census()));
    out.push(("pairing and abs".into(), pairing()));
    out.push(("factorization".into(), factorization()));
    for k in [3, 4, 5] {
        if k != q {
            out.push((format!("chsh regression q={k}"), chsh_regression(k)));
        }
    }
    for k in 2..=5 {
        if k != q {
            out.push((format!("hidden-variable sweep q={k}"), hv_sweep(k)));
        }
    }
    out.push(("determinism".into(), determinism()));
    Ok(out)
}

pub fn verify_all(q: usize) -> Result<Report, CliError> {
    let results = checks(q)?;
    let list: Vec<Check> = results
        .into_iter()
        .map(|(name, o)| {
            let (passed, detail) = match o {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            Check {
                name,
                passed,
                detail,
            }
        })
        .collect();
    let failure = list
        .iter()
        .find(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.detail));
    let passed = failure.is_none();
    let mut t = Table::new("Checks", &["check", "result", "detail"]);
    for c in &list {
        t.push([
            c.name.as_str(),
            if c.passed { "pass" } else { "FAIL" },
            c.detail.as_str(),
        ]);
    }
    let failed = list.iter().filter(|c| !c.passed).count();
    let mut report = Report::new(
        "verify-all",
        format!("verify-all --q {q}"),
        json!({"q": q}),
        "Verification",
        json!({"q": q, "checks": list, "passed": passed}),
    )
    .summary("checks", list.len())
    .summary("failed", failed)
    .summary("result", if passed { "pass" } else { "FAIL" })
    .table(t, true);
    report.passed = Some(passed);
    report.failure = failure;
    Ok(report)
}
