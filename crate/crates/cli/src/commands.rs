//! One report builder per subcommand.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use gqm_core::chsh::{chsh_maximize, ChshOptions};
use gqm_core::correlation::two_particle_table;
use gqm_core::geometry::{enumerate_lines, enumerate_planes, product_grid_check};
use gqm_core::group::{
    cycle_census, fingerprint, fingerprint_match, format_cycle_type, format_matrix,
    GroupFingerprint, SymmetryGroup,
};
use gqm_core::hv::{analyze, format_literal, restricted_gap_check};
use gqm_core::observable::{Observable, SpinSystem};
use gqm_core::perm::{alternating_group, symmetric_group, Permutation};
use gqm_core::projective::{derive_dual_basis, enumerate_states, format_coords};
use gqm_core::twostate::{alternate_singlet_forms, build_multiplets, TwoParticleSystem};
use gqm_core::{FieldSpec, Rational};

use crate::report::{Report, Table};
use crate::{verify, CliError, Command};

/// Largest vector space `states` will enumerate.
pub const MAX_VECTORS: usize = 1 << 20;
/// Largest number of CHSH configurations a single run may evaluate.
pub const MAX_CHSH_EVALUATIONS: u64 = 5_000_000_000;
/// Largest symmetric group enumerated for the census.
pub const MAX_CENSUS_DEGREE: usize = 8;

pub fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::FieldTable { p, n, irreducible } => field_table(*p, *n, irreducible.as_deref()),
        Command::States { q, n_levels } => states(*q, *n_levels),
        Command::Geometry { q } => geometry(*q),
        Command::ProbTable { q, signed } => prob_table(*q, *signed),
        Command::TwoStates { q } => two_states(*q),
        Command::CorrTable { q } => corr_table(*q),
        Command::Chsh {
            q,
            include_product,
            no_prune,
            max_achievers,
        } => chsh(*q, *include_product, !*no_prune, *max_achievers),
        Command::HvCheck {
            q,
            state,
            observables,
        } => hv_check(*q, state, observables.as_deref()),
        Command::Group { q, witness } => group(*q, witness.as_deref()),
        Command::S6Census { q } => census(*q),
        Command::VerifyAll { q } => verify::verify_all(*q),
    }
}

fn rat(x: Rational) -> String {
    x.to_string()
}

pub fn field_table(p: u32, n: u32, irreducible: Option<&[u32]>) -> Result<Report, CliError> {
    let f = FieldSpec::build(p, n, irreducible)?;
    let table = gqm_core::field::FieldTable::from(&f);
    let mut invocation = format!("field-table --p {p} --n {n}");
    if let Some(poly) = irreducible {
        let parts: Vec<String> = poly.iter().map(u32::to_string).collect();
        invocation.push_str(&format!(" --irreducible {}", parts.join(",")));
    }
    let names = f.names().to_vec();
    let grid = |title: &str, op: &str, data: &[Vec<u8>]| {
        let mut headers = vec![op.to_string()];
        headers.extend(names.iter().cloned());
        let mut t = Table {
            title: title.to_string(),
            headers,
            rows: Vec::new(),
        };
        for (i, row) in data.iter().enumerate() {
            let mut cells = vec![names[i].clone()];
            cells.extend(row.iter().map(|&k| names[k as usize].clone()));
            t.rows.push(cells);
        }
        t
    };
    let poly: Vec<String> = f.irreducible().iter().map(u32::to_string).collect();
    let report = Report::new(
        "field-table",
        invocation,
        json!({"p": p, "n": n, "irreducible": irreducible}),
        &format!("GF({})", f.q()),
        serde_json::to_value(&table).map_err(|e| CliError::Internal(e.to_string()))?,
    )
    .summary("q", f.q())
    .summary("irreducible (c0..cn)", poly.join(","))
    .summary("generator", f.name(f.generator()))
    .table(grid("Addition", "+", &table.add), false)
    .table(grid("Multiplication", "×", &table.mul), false);
    Ok(report)
}

pub fn states(q: usize, levels: usize) -> Result<Report, CliError> {
    let f = FieldSpec::of_order(q)?;
    if (q as f64).powi(levels as i32) > MAX_VECTORS as f64 {
        return Err(CliError::Usage(format!(
            "q^N = {q}^{levels} exceeds the enumeration limit of {MAX_VECTORS} vectors"
        )));
    }
    let pts = enumerate_states(&f, levels)?;
    let duals = if levels == 2 {
        Some(derive_dual_basis(&f, &pts)?)
    } else {
        None
    };
    let mut t = if duals.is_some() {
        Table::new("States", &["label", "coords", "dual", "dual coords"])
    } else {
        Table::new("States", &["label", "coords"])
    };
    let mut list = Vec::new();
    for (i, s) in pts.iter().enumerate() {
        let coords = format_coords(&f, &s.rep);
        let mut entry = json!({"label": s.label, "coords": coords});
        match &duals {
            Some(d) => {
                let dc = format_coords(&f, &d[i].rep);
                t.push([s.label.clone(), coords, d[i].label.clone(), dc.clone()]);
                entry["dual"] = json!({"label": d[i].label, "coords": dc});
            }
            None => t.push([s.label.clone(), coords]),
        }
        list.push(entry);
    }
    Ok(Report::new(
        "states",
        format!("states --q {q} --n-levels {levels}"),
        json!({"q": q, "n_levels": levels}),
        &format!("States of GQM({levels},{q})"),
        json!({"q": q, "n_levels": levels, "count": pts.len(), "states": list}),
    )
    .summary("count", pts.len())
    .table(t, true))
}

pub fn geometry(q: usize) -> Result<Report, CliError> {
    let f = FieldSpec::of_order(q)?;
    let pts = enumerate_states(&f, 4)?;
    let lines = enumerate_lines(&f, &pts)?;
    let planes = enumerate_planes(&f, &pts, &lines)?;
    let grid = product_grid_check(&f, &pts, &lines)?;
    let per_point: Vec<usize> = (0..pts.len())
        .map(|p| lines.iter().filter(|l| l.points.contains(&p)).count())
        .collect();
    let uniform = |v: &[usize]| {
        if v.iter().all(|&x| x == v[0]) {
            v[0].to_string()
        } else {
            "varies".to_string()
        }
    };
    let mut lt = Table::new("Lines", &["line", "points"]);
    for (i, l) in lines.iter().enumerate() {
        lt.push([(i + 1).to_string(), l.labels.join(" ")]);
    }
    let mut dt = Table::new(
        "Entangled states as grid transversals",
        &["state", "transversals"],
    );
    for d in &grid.decompositions {
        let ts: Vec<String> = d.transversals.iter().map(|t| t.join(" + ")).collect();
        dt.push([d.state.clone(), ts.join("; ")]);
    }
    let plane_sets: Vec<Vec<String>> = planes
        .planes
        .iter()
        .map(|p| p.points.iter().map(|&i| pts[i].label.clone()).collect())
        .collect();
    let body = json!({
        "q": q,
        "points": pts.len(),
        "lines": lines.len(),
        "lines_per_point": per_point,
        "planes": planes.planes.len(),
        "planes_per_line": planes.planes_per_line,
        "line_list": lines.iter().map(|l| l.labels.clone()).collect::<Vec<_>>(),
        "plane_list": plane_sets,
        "grid": grid,
    });
    Ok(Report::new(
        "geometry",
        format!("geometry --q {q}"),
        json!({"q": q}),
        "PG(3,2) incidence",
        body,
    )
    .summary("points", pts.len())
    .summary("lines", lines.len())
    .summary("lines per point", uniform(&per_point))
    .summary("planes", planes.planes.len())
    .summary("planes per line", uniform(&planes.planes_per_line))
    .summary("product grid lines", grid.grid_lines.len())
    .summary("grid ok", grid.ok)
    .table(lt, true)
    .table(dt, false))
}

pub fn prob_table(q: usize, signed: bool) -> Result<Report, CliError> {
    let sys = SpinSystem::new(q)?;
    let rows = sys.one_particle_table(signed);
    let mut t = Table::new(
        "Outcome probabilities",
        &["observable", "state", "P(+)", "P(-)", "expectation"],
    );
    for r in &rows {
        t.push([
            r.observable.clone(),
            r.state.clone(),
            rat(r.p_plus),
            rat(r.p_minus),
            rat(r.expectation),
        ]);
    }
    let invocation = if signed {
        format!("prob-table --q {q} --signed")
    } else {
        format!("prob-table --q {q}")
    };
    Ok(Report::new(
        "prob-table",
        invocation,
        json!({"q": q, "signed": signed}),
        &format!("One-particle probabilities, GQM(2,{q})"),
        json!({"q": q, "rows": rows}),
    )
    .summary("rows", rows.len())
    .table(t, true))
}

pub fn two_states(q: usize) -> Result<Report, CliError> {
    let two = TwoParticleSystem::new(q)?;
    let f = two.field();
    let mut t = Table::new("Two-particle states", &["label", "coords", "entangled"]);
    let mut list = Vec::new();
    for s in two.states() {
        let coords = format_coords(f, &s.coords);
        t.push([s.label.clone(), coords.clone(), s.entangled.to_string()]);
        list.push(json!({"label": s.label, "coords": coords, "entangled": s.entangled}));
    }
    let mut body = json!({
        "q": q,
        "product": two.product_count(),
        "entangled": two.entangled_indices().len(),
        "states": list,
    });
    let mut report_extra = Vec::new();
    if q == 2 {
        let g = SymmetryGroup::new(two.spin())?;
        let m = build_multiplets(&two, &g)?;
        let forms = alternate_singlet_forms(&two)?;
        let local = two.local_orbit(&g, two.state_index("S")?);
        report_extra.push(("singlet", m.singlet.join(" ")));
        report_extra.push(("triplet", m.triplet.join(" ")));
        report_extra.push(("doublet", m.doublet.join(" ")));
        report_extra.push(("local orbit of S", local.len().to_string()));
        body["multiplets"] = json!(m);
        body["singlet_forms"] = json!(forms);
        body["local_orbit_size"] = json!(local.len());
    }
    let mut report = Report::new(
        "two-states",
        format!("two-states --q {q}"),
        json!({"q": q}),
        &format!("Two-particle states, q = {q}"),
        body,
    )
    .summary("total", two.states().len())
    .summary("product", two.product_count())
    .summary("entangled", two.entangled_indices().len());
    for (k, v) in report_extra {
        report = report.summary(k, v);
    }
    Ok(report.table(t, true))
}

pub fn corr_table(q: usize) -> Result<Report, CliError> {
    let two = TwoParticleSystem::new(q)?;
    let rows = two_particle_table(&two)?;
    let mut t = Table::new(
        "Correlations",
        &["observable", "state", "++", "+-", "-+", "--", "E"],
    );
    let mut list = Vec::new();
    for r in &rows {
        let mut cells = vec![r.observable.clone(), r.state.clone()];
        cells.extend(r.p.iter().map(|&x| rat(x)));
        cells.push(rat(r.correlation));
        t.rows.push(cells);
        list.push(json!({
            "observable": r.observable,
            "state": r.state,
            "p_pp": r.p[0],
            "p_pm": r.p[1],
            "p_mp": r.p[2],
            "p_mm": r.p[3],
            "correlation": r.correlation,
        }));
    }
    Ok(Report::new(
        "corr-table",
        format!("corr-table --q {q}"),
        json!({"q": q}),
        "Two-particle correlations on the entangled states",
        json!({"q": q, "rows": list}),
    )
    .summary("rows", rows.len())
    .table(t, true))
}

pub fn chsh(
    q: usize,
    include_product: bool,
    prune: bool,
    max_achievers: usize,
) -> Result<Report, CliError> {
    let two = TwoParticleSystem::new(q)?;
    let m = two.spin().enumerate_observables().len() as u64;
    let n = if prune { m / 2 } else { m };
    let scope = if include_product {
        two.states().len()
    } else {
        two.entangled_indices().len()
    } as u64;
    let work = scope * n.pow(4);
    if work > MAX_CHSH_EVALUATIONS {
        return Err(CliError::Usage(format!(
            "search would evaluate {work} configurations (limit {MAX_CHSH_EVALUATIONS})"
        )));
    }
    let res = chsh_maximize(
        &two,
        ChshOptions {
            include_product,
            prune,
        },
    );
    let name = |i: usize| res.observable_name(&two, i);
    let shown = if max_achievers == 0 {
        res.achievers.len()
    } else {
        max_achievers.min(res.achievers.len())
    };
    let mut at = Table::new("Achievers", &["A1", "A2", "B1", "B2", "state", "value"]);
    let mut list = Vec::new();
    for a in &res.achievers[..shown] {
        let [a1, a2, b1, b2] = a.settings.map(name);
        let state = two.states()[a.state].label.clone();
        at.push([
            a1.clone(),
            a2.clone(),
            b1.clone(),
            b2.clone(),
            state.clone(),
            rat(a.value),
        ]);
        list.push(
            json!({"A1": a1, "A2": a2, "B1": b1, "B2": b2, "state": state, "value": a.value}),
        );
    }
    let mut ht = Table::new("Histogram of |value|", &["|value|", "count"]);
    for (v, c) in &res.histogram {
        ht.push([rat(*v), c.to_string()]);
    }
    let mut invocation = format!("chsh --q {q}");
    if include_product {
        invocation.push_str(" --include-product");
    }
    if !prune {
        invocation.push_str(" --no-prune");
    }
    if max_achievers != 1000 {
        invocation.push_str(&format!(" --max-achievers {max_achievers}"));
    }
    let body = json!({
        "q": q,
        "scope": if include_product { "all" } else { "entangled" },
        "pruned": prune,
        "evaluated": res.evaluated,
        "max_abs": res.max_abs,
        "achiever_count": res.achievers.len(),
        "achievers_truncated": shown < res.achievers.len(),
        "achievers": list,
        "histogram": res.histogram.iter().map(|(v, c)| json!({"value": v, "count": c})).collect::<Vec<_>>(),
    });
    Ok(Report::new(
        "chsh",
        invocation,
        json!({"q": q, "include_product": include_product, "prune": prune, "max_achievers": max_achievers}),
        &format!("CHSH maximum, q = {q}"),
        body,
    )
    .summary("scope", if include_product { "all states" } else { "entangled states" })
    .summary("pruned", prune)
    .summary("configurations", res.evaluated)
    .summary("max |value|", rat(res.max_abs))
    .summary("achievers", res.achievers.len())
    .summary("listed", shown)
    .table(at, true)
    .table(ht, false))
}

fn parse_observables(sys: &SpinSystem, spec: Option<&str>) -> Result<Vec<Observable>, CliError> {
    let Some(spec) = spec else {
        return Ok(sys.canonical_observables());
    };
    let set: Vec<Observable> = spec
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| sys.parse_observable(s.trim()))
        .collect::<Result<_, _>>()?;
    if set.is_empty() {
        return Err(CliError::Usage("observable set is empty".into()));
    }
    Ok(set)
}

fn outcome(x: i8, y: i8) -> String {
    let s = |v: i8| if v > 0 { '+' } else { '-' };
    format!("{}{}", s(x), s(y))
}

pub fn hv_check(q: usize, state: &str, observables: Option<&str>) -> Result<Report, CliError> {
    let two = TwoParticleSystem::new(q)?;
    let spin = two.spin();
    let s = two.state_index(state)?;
    let set = parse_observables(spin, observables)?;
    let names: Vec<String> = set.iter().map(|&o| spin.observable_name(o)).collect();
    let a = analyze(&two, s, &set)?;
    let label = two.states()[s].label.clone();

    let mut ft = Table::new("Forbidden outcomes", &["observables", "outcome"]);
    let forbidden: Vec<Value> = a
        .forbidden
        .iter()
        .map(|f| {
            let obs = format!("{}1{}2", names[f.first], names[f.second]);
            let out = outcome(f.x, f.y);
            ft.push([obs.clone(), out.clone()]);
            json!({"observables": obs, "outcome": out})
        })
        .collect();
    let lit = |l| format_literal(&names, l);
    let mut it = Table::new("Implications", &["from", "to"]);
    let implications: Vec<Value> = a
        .implications
        .iter()
        .map(|e| {
            it.push([lit(e.from), lit(e.to)]);
            json!({"from": lit(e.from), "to": lit(e.to)})
        })
        .collect();
    let survivors = a.survivors.as_ref().map(|list| {
        list.iter()
            .map(|asg| {
                let mut m = BTreeMap::new();
                for p in 1..=2u8 {
                    for (i, n) in names.iter().enumerate() {
                        m.insert(format!("{n}{p}"), asg.value(p, i));
                    }
                }
                m
            })
            .collect::<Vec<_>>()
    });
    let survivor_count = survivors.as_ref().map(Vec::len);
    let contradiction: Option<Vec<String>> = a
        .contradiction
        .as_ref()
        .map(|c| c.iter().map(|&l| lit(l)).collect());

    let mut body = json!({
        "q": q,
        "state": label,
        "observables": names,
        "assignments": 1u128 << (2 * set.len()).min(127),
        "forbidden": forbidden,
        "survivors": survivors,
        "survivor_count": survivor_count,
        "implications": implications,
        "contradiction": contradiction,
        "verdict": a.verdict,
        "method": if survivors.is_some() { "enumeration and implication graph" } else { "implication graph" },
    });
    let mut report_summary = vec![
        ("state", label.clone()),
        ("observables", names.join(",")),
        ("forbidden outcomes", a.forbidden.len().to_string()),
        (
            "survivors",
            match survivor_count {
                Some(c) => format!("{c} of {}", 1u64 << (2 * set.len())),
                None => "not enumerated".to_string(),
            },
        ),
        ("verdict", a.verdict.to_string()),
    ];
    if let Some(c) = &contradiction {
        report_summary.push(("contradiction", c.join(" ⇒ ")));
    }
    if q == 2 && label == "S" {
        let g = restricted_gap_check(&two)?;
        report_summary.push((
            "restricted {Y,Z}",
            format!(
                "{} survivors, (Y1,Z2)=(+,-) in {}, (Z1,Y2)=(-,+) in {}, quantum probabilities {} and {}",
                g.survivors.len(),
                g.y1z2_plus_minus,
                g.z1y2_minus_plus,
                g.p_y1z2_plus_minus,
                g.p_z1y2_minus_plus
            ),
        ));
        body["restricted"] = json!({
            "observables": ["Y", "Z"],
            "survivor_count": g.survivors.len(),
            "y1z2_plus_minus": g.y1z2_plus_minus,
            "z1y2_minus_plus": g.z1y2_minus_plus,
            "p_y1z2_plus_minus": g.p_y1z2_plus_minus,
            "p_z1y2_minus_plus": g.p_z1y2_minus_plus,
            "ok": g.ok,
        });
    }
    let mut invocation = format!("hv-check --q {q} --state {label}");
    if observables.is_some() {
        invocation.push_str(&format!(" --observables {}", names.join(",")));
    }
    let mut report = Report::new(
        "hv-check",
        invocation,
        json!({"q": q, "state": label, "observables": names}),
        &format!("Hidden-variable check on {label}"),
        body,
    );
    for (k, v) in report_summary {
        report = report.summary(k, v);
    }
    Ok(report.table(ft, false).table(it, false))
}

/// Reference groups the permutation image is compared against.
pub fn reference_groups() -> Vec<(String, GroupFingerprint)> {
    let mut out = Vec::new();
    for n in 2..=6 {
        out.push((
            format!("S{n}"),
            fingerprint(&symmetric_group(n)).expect("S_n is closed"),
        ));
        out.push((
            format!("A{n}"),
            fingerprint(&alternating_group(n)).expect("A_n is closed"),
        ));
    }
    out
}

/// Name of the first reference group with a matching fingerprint.
pub fn identify(fp: &GroupFingerprint) -> Option<String> {
    reference_groups()
        .into_iter()
        .filter(|(_, r)| r.order == fp.order)
        .find(|(_, r)| fingerprint_match(fp, r))
        .map(|(name, _)| name)
}

pub fn group(q: usize, witness: Option<&str>) -> Result<Report, CliError> {
    let sys = SpinSystem::new(q)?;
    let g = SymmetryGroup::new(&sys)?;
    let fp = fingerprint(&g.permutations())?;
    let image = g.image();
    let identification = identify(&fp);
    let mut ct = Table::new(
        "Conjugacy classes",
        &["element order", "size", "cycle type", "sign"],
    );
    for c in &fp.classes {
        ct.push([
            c.element_order.to_string(),
            c.size.to_string(),
            format_cycle_type(&c.cycle_type),
            if c.parity > 0 {
                "+".into()
            } else {
                "-".to_string()
            },
        ]);
    }
    let mut body = json!({
        "q": q,
        "order": g.order(),
        "degree": g.degree(),
        "image": image,
        "parity_split": {"even": fp.even, "odd": fp.odd},
        "fingerprint": fp,
        "identification": identification,
    });
    let mut report = Report::new(
        "group",
        match witness {
            Some(w) => format!("group --q {q} --witness {w}"),
            None => format!("group --q {q}"),
        },
        json!({"q": q, "witness": witness}),
        &format!("PGL(2,{q}) on {} states", g.degree()),
        Value::Null,
    )
    .summary("order", g.order())
    .summary("image in S_n", format!("{:?}", image.kind))
    .summary("parity split", format!("{} even, {} odd", fp.even, fp.odd))
    .summary("conjugacy classes", fp.classes.len())
    .summary(
        "identification",
        identification.clone().unwrap_or_else(|| "none".into()),
    );
    if let Some(w) = witness {
        let perm = Permutation::parse(w, g.degree())?;
        let found = g.witness(&perm).ok();
        body["witness"] = json!({
            "permutation": perm.to_cycle_string(),
            "realizable": found.is_some(),
            "matrix": found.map(|e| format_matrix(sys.field(), &e.matrix)),
        });
        report = report.summary(
            "witness",
            match found {
                Some(e) => format!("{} ← {}", perm, format_matrix(sys.field(), &e.matrix)),
                None => format!("{perm} is not realizable"),
            },
        );
    }
    report.body = body;
    Ok(report.table(ct, true))
}

pub fn census(q: usize) -> Result<Report, CliError> {
    if q + 1 > MAX_CENSUS_DEGREE {
        return Err(CliError::Usage(format!(
            "census enumerates S_{}, above the supported degree {MAX_CENSUS_DEGREE}",
            q + 1
        )));
    }
    let sys = SpinSystem::new(q)?;
    let g = SymmetryGroup::new(&sys)?;
    let rows = cycle_census(&g);
    let n = g.degree();
    let sn = format!("S{n}");
    let pgl = format!("PGL(2,{q})");
    let mut t = Table::new("Cycle-type census", &["cycle type", "sign", &sn, &pgl]);
    for r in &rows {
        t.push([
            format_cycle_type(&r.cycle_type),
            if r.sign > 0 {
                "+".into()
            } else {
                "-".to_string()
            },
            r.symmetric_count.to_string(),
            r.group_count.to_string(),
        ]);
    }
    let total_s: usize = rows.iter().map(|r| r.symmetric_count).sum();
    let total_g: usize = rows.iter().map(|r| r.group_count).sum();
    t.push([
        "total".to_string(),
        String::new(),
        total_s.to_string(),
        total_g.to_string(),
    ]);
    let column: Vec<usize> = rows.iter().map(|r| r.group_count).collect();
    let classes = fingerprint(&g.permutations())?.classes.len();
    Ok(Report::new(
        "s6-census",
        format!("s6-census --q {q}"),
        json!({"q": q}),
        &format!("{pgl} inside {sn}"),
        json!({"q": q, "degree": n, "rows": rows, "column": column, "total": total_g, "classes": classes}),
    )
    .summary("column", column.iter().map(usize::to_string).collect::<Vec<_>>().join(", "))
    .summary("total", total_g)
    .summary("conjugacy classes", classes)
    .table(t, true))
}
