use std::path::Path;

use cayauto_core::characteristics::{
    avg_length_exact, avg_length_mc, ball_family, folner_exact, folner_upper, growth_from,
    interval_family, lamplighter_rectangle_family, FolnerReport,
};
use cayauto_core::oracles::{
    oracle_g2, oracle_lamplighter, oracle_lamplighter_s1, oracle_wreath_z2_over, oracle_zm,
    visit_oracle, walk_drift_grid, walk_range_grid, walk_range_grid_by, Group, OracleGroup,
    OracleVisitor, WalkFunctionalEstimate, ORACLE_NAMES,
};
use cayauto_core::presentations::{
    isomorphic_to_oracle, load_bundle, preset, save_bundle, validate, PRESET_NAMES,
};
use cayauto_core::series::{classify_growth, fit_power, fit_recurrence, Window};
use cayauto_core::{ClassTTransducer, GraphPresentation, Translation, Word};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::args::{Cli, Command, Family, FitMode, GroupArg, Method, Source};
use crate::output::{meta_json, Cell, Table};
use crate::{CliError, Outcome};

type Res<T> = Result<T, CliError>;

/// Commands whose output is a JSON document whatever `--format` says.
pub(crate) fn always_json(c: &Command) -> bool {
    matches!(c, Command::Translate { .. } | Command::Fit { .. })
}

fn base_meta(cli: &Cli, echo: &str) -> Vec<(String, String)> {
    vec![
        ("version".into(), env!("CARGO_PKG_VERSION").into()),
        ("command".into(), cli.command.name().into()),
        ("args".into(), echo.into()),
        ("seed".into(), cli.seed.to_string()),
    ]
}

fn finish(cli: &Cli, echo: &str, mut t: Table) -> String {
    let mut meta = base_meta(cli, echo);
    meta.append(&mut t.meta);
    t.meta = meta;
    t.render(cli.format)
}

fn json_doc(cli: &Cli, echo: &str, body: Value) -> String {
    let mut doc = json!({ "meta": meta_json(&base_meta(cli, echo)) });
    if let (Some(d), Value::Object(b)) = (doc.as_object_mut(), body) {
        d.extend(b);
    }
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

fn load(source: &Source) -> Res<(GraphPresentation, String)> {
    match (&source.preset, &source.bundle) {
        (Some(name), None) => preset(name)
            .map(|p| (p, name.clone()))
            .map_err(|_| {
                CliError::Config(format!(
                    "unknown preset '{name}' (known: {})",
                    PRESET_NAMES.join(", ")
                ))
            }),
        (None, Some(dir)) => load_bundle(dir)
            .map(|p| (p, dir.display().to_string()))
            .map_err(|e| CliError::Config(format!("cannot load bundle {}: {e}", dir.display()))),
        _ => Err(CliError::Config("give exactly one of --preset or --bundle".into())),
    }
}

fn transducer(source: &Source) -> Res<(ClassTTransducer, String)> {
    let (p, name) = load(source)?;
    Ok((ClassTTransducer::from_presentation(p)?, name))
}

fn render_word(p: &GraphPresentation, w: &[u8]) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        p.alphabet().render_word(w)
    }
}

fn parse_word(p: &GraphPresentation, s: &str) -> Res<Word> {
    if s == "ε" {
        return Ok(Vec::new());
    }
    p.alphabet()
        .parse_word(s)
        .map_err(|e| CliError::Config(format!("bad word '{s}': {e}")))
}

fn parse_rational(s: &str) -> Res<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| CliError::Config(format!("bad rational '{s}', expected e.g. 1/5")))
}

fn rational_cells(r: &BigRational) -> [Cell; 3] {
    [
        Cell::int(r.numer()),
        Cell::int(r.denom()),
        Cell::Float(r.to_f64().unwrap_or(f64::NAN)),
    ]
}

/// Oracle name for a group and generating set.
fn oracle_name(g: &GroupArg) -> Res<String> {
    let name = g.group.as_str();
    let resolved = match (name, g.gens.as_deref()) {
        (_, None | Some("default")) => name,
        ("lamplighter" | "lamplighter-s1", Some("S1")) => "lamplighter-s1",
        ("lamplighter" | "lamplighter-s1", Some("S1prime" | "S1'")) => "lamplighter",
        (_, Some(s)) => {
            return Err(CliError::Config(format!(
                "generating set '{s}' is not available for group '{name}'"
            )))
        }
    };
    if !ORACLE_NAMES.contains(&resolved) {
        return Err(CliError::Config(format!(
            "unknown group '{name}' (known: {})",
            ORACLE_NAMES.join(", ")
        )));
    }
    Ok(resolved.to_string())
}

pub(crate) fn execute(cli: &Cli, echo: &str) -> Res<Outcome> {
    match &cli.command {
        Command::List => {
            let mut t = Table::new(&["kind", "name"]);
            for p in PRESET_NAMES {
                t.push(vec![Cell::Text("preset".into()), Cell::Text(p.into())]);
            }
            for g in ORACLE_NAMES {
                t.push(vec![Cell::Text("group".into()), Cell::Text(g.to_string())]);
            }
            Ok(Outcome::ok(finish(cli, echo, t)))
        }
        Command::Validate { source } => {
            let (p, name) = load(source)?;
            let report = validate(&p)?;
            let mut t = Table::new(&["check", "passed", "detail"]);
            t.meta("presentation", &name);
            for c in &report.checks {
                t.push(vec![
                    Cell::Text(c.name.clone()),
                    Cell::Bool(c.passed),
                    Cell::Text(c.detail.clone().unwrap_or_default()),
                ]);
            }
            let failed = report.failures().count();
            Ok(Outcome {
                text: finish(cli, echo, t),
                code: i32::from(failed > 0),
                message: (failed > 0).then(|| format!("{failed} check(s) failed")),
            })
        }
        Command::Translate { source, word } => {
            let (t, name) = transducer(source)?;
            let p = t.presentation();
            let x = parse_word(p, word)?;
            let body = match t.translate(&x) {
                Translation::Accepted(ys) => json!({
                    "presentation": name,
                    "input": render_word(p, &x),
                    "labels": p.labels(),
                    "outputs": ys.iter().map(|y| render_word(p, y)).collect::<Vec<_>>(),
                    "accepted": true,
                }),
                Translation::Rejected => json!({
                    "presentation": name,
                    "input": render_word(p, &x),
                    "labels": p.labels(),
                    "outputs": [],
                    "accepted": false,
                }),
            };
            Ok(Outcome::ok(json_doc(cli, echo, body)))
        }
        Command::Growth { source, n, base_word } => {
            let (t, name) = transducer(source)?;
            let w0 = match base_word {
                Some(s) => parse_word(t.presentation(), s)?,
                None => t.base_word().to_vec(),
            };
            let rec = growth_from(&t, &w0, *n)?;
            let mut tab = Table::new(&["n", "b_n", "frontier"]);
            tab.meta("presentation", &name)
                .meta("base_word", render_word(t.presentation(), &w0))
                .meta("N", n);
            for (i, (b, f)) in rec.values.iter().zip(&rec.frontier_sizes).enumerate() {
                tab.push(vec![Cell::int(i), Cell::int(b), Cell::int(f)]);
            }
            Ok(Outcome::ok(finish(cli, echo, tab)))
        }
        Command::Folner {
            source,
            epsilon,
            family,
            max,
            label,
            size_budget,
            radius,
            node_budget,
        } => {
            let (t, name) = transducer(source)?;
            let eps = parse_rational(epsilon)?;
            let report: FolnerReport = match family {
                Family::Ball => folner_upper(&t, ball_family(&t, *max)?, &eps)?,
                Family::Interval => {
                    let step = match label {
                        Some(l) => t.presentation().label_index(l).ok_or_else(|| {
                            CliError::Config(format!("presentation has no label '{l}'"))
                        })?,
                        None => 0,
                    };
                    folner_upper(&t, interval_family(&t, step, *max)?, &eps)?
                }
                Family::Rectangle => folner_upper(&t, lamplighter_rectangle_family(&t, *max)?, &eps)?,
                Family::Exact => folner_exact(&t, &eps, *size_budget, *radius, *node_budget)?,
            };
            let mut tab = Table::new(&[
                "family",
                "epsilon_num",
                "epsilon_den",
                "size",
                "boundary",
                "ratio_num",
                "ratio_den",
                "ratio_float",
                "exact_over_radius",
                "set",
            ]);
            tab.meta("presentation", &name).meta("epsilon", &eps);
            let fam = format!("{family:?}").to_lowercase();
            let [rn, rd, rf] = rational_cells(&report.ratio);
            let p = t.presentation();
            tab.push(vec![
                Cell::Text(fam),
                Cell::int(eps.numer()),
                Cell::int(eps.denom()),
                Cell::int(report.set.len()),
                Cell::int(report.boundary.len()),
                rn,
                rd,
                rf,
                Cell::Text(report.exact_over_radius.map(|r| r.to_string()).unwrap_or_default()),
                Cell::Text(report.set.iter().map(|w| render_word(p, w)).collect::<Vec<_>>().join(" ")),
            ]);
            Ok(Outcome::ok(finish(cli, echo, tab)))
        }
        Command::Avglen {
            source,
            n,
            method,
            samples,
            max_distinct,
        } => {
            let (t, name) = transducer(source)?;
            let w0 = t.base_word().to_vec();
            match method {
                Method::Exact => {
                    let series = avg_length_exact(&t, &w0, *n, *max_distinct)?;
                    let mut tab = Table::new(&["n", "l_n_num", "l_n_den", "l_n_float", "distinct_words"]);
                    tab.meta("presentation", &name).meta("N", n).meta("method", "exact");
                    if let Some(i) = series.truncated_at {
                        tab.meta("truncated_at", i);
                    }
                    for r in &series.records {
                        let [a, b, c] = rational_cells(&r.mean());
                        tab.push(vec![Cell::int(r.n), a, b, c, Cell::int(r.distinct_words)]);
                    }
                    let text = finish(cli, echo, tab);
                    Ok(match series.truncated_at {
                        Some(i) => Outcome {
                            text,
                            code: 1,
                            message: Some(format!(
                                "partial results: distinct-word budget exceeded at n = {i}"
                            )),
                        },
                        None => Outcome::ok(text),
                    })
                }
                Method::Mc => {
                    let mut tab = Table::new(&["n", "mean", "stderr", "samples"]);
                    tab.meta("presentation", &name).meta("N", n).meta("method", "mc");
                    for i in 1..=*n {
                        let e = avg_length_mc(&t, &w0, i, *samples, cli.seed)?;
                        tab.push(vec![
                            Cell::int(e.n),
                            Cell::Float(e.mean),
                            Cell::Float(e.stderr),
                            Cell::int(e.samples),
                        ]);
                    }
                    Ok(Outcome::ok(finish(cli, echo, tab)))
                }
            }
        }
        Command::Drift {
            group,
            n_grid,
            samples,
            cap,
        } => {
            let name = oracle_name(group)?;
            let est = visit_oracle(
                &name,
                Drift {
                    ns: n_grid,
                    samples: *samples,
                    seed: cli.seed,
                    cap: *cap,
                },
            )??;
            Ok(Outcome::ok(finish(cli, echo, walk_table(&name, est))))
        }
        Command::Range {
            group,
            n_grid,
            samples,
            base,
        } => {
            let name = oracle_name(group)?;
            let (ns, s, seed) = (n_grid.as_slice(), *samples, cli.seed);
            let est = if *base {
                match name.as_str() {
                    "lamplighter" => walk_range_grid_by(&oracle_lamplighter(), ns, s, seed, |g| g.pos)?,
                    "lamplighter-s1" => walk_range_grid_by(&oracle_lamplighter_s1(), ns, s, seed, |g| g.pos)?,
                    "lamplighter-z2" => {
                        walk_range_grid_by(&oracle_wreath_z2_over(&oracle_zm(2)?), ns, s, seed, |g| g.pos.clone())?
                    }
                    "g2" => walk_range_grid_by(&oracle_g2(), ns, s, seed, |g| g.pos)?,
                    other => {
                        return Err(CliError::Config(format!(
                            "--base needs a wreath product, got '{other}'"
                        )))
                    }
                }
            } else {
                visit_oracle(&name, Range { ns, samples: s, seed })??
            };
            let mut tab = walk_table(&name, est);
            tab.meta("projected", base);
            Ok(Outcome::ok(finish(cli, echo, tab)))
        }
        Command::Fit {
            input,
            mode,
            x,
            y,
            max_order,
            holdout,
            window,
        } => {
            let body = fit(input, *mode, x.as_deref(), y.as_deref(), *max_order, *holdout, window)?;
            Ok(Outcome::ok(json_doc(cli, echo, body)))
        }
        Command::Ball { group, radius } => {
            let name = oracle_name(group)?;
            let spheres = visit_oracle(&name, Spheres(*radius))?;
            let mut tab = Table::new(&["r", "sphere", "ball"]);
            tab.meta("group", &name);
            let mut total = 0usize;
            for (r, s) in spheres.iter().enumerate() {
                total += s;
                tab.push(vec![Cell::int(r), Cell::int(s), Cell::int(total)]);
            }
            Ok(Outcome::ok(finish(cli, echo, tab)))
        }
        Command::IsoCheck { source, group, radius } => {
            let (p, name) = load(source)?;
            let gname = match group {
                Some(g) => g.clone(),
                None if source.preset.is_some() => name.clone(),
                None => return Err(CliError::Config("--group is required with --bundle".into())),
            };
            let gname = oracle_name(&GroupArg {
                group: gname,
                gens: None,
            })?;
            let (vertices, conflict) = visit_oracle(&gname, Iso { p: &p, radius: *radius })??;
            let mut tab = Table::new(&["radius", "vertices", "isomorphic", "conflict"]);
            tab.meta("presentation", &name).meta("group", &gname);
            tab.push(vec![
                Cell::int(radius),
                Cell::int(vertices),
                Cell::Bool(conflict.is_none()),
                Cell::Text(conflict.clone().unwrap_or_default()),
            ]);
            Ok(Outcome {
                text: finish(cli, echo, tab),
                code: i32::from(conflict.is_some()),
                message: conflict.map(|c| format!("not isomorphic: {c}")),
            })
        }
        Command::Export { source, dir } => {
            let (p, name) = load(source)?;
            save_bundle(&p, dir)?;
            let mut tab = Table::new(&["file"]);
            tab.meta("presentation", &name).meta("dir", dir.display());
            tab.push(vec![Cell::Text("domain.atm".into())]);
            for j in 0..p.num_labels() {
                tab.push(vec![Cell::Text(format!("edge_{j}.atm"))]);
            }
            tab.push(vec![Cell::Text("meta.json".into())]);
            Ok(Outcome::ok(finish(cli, echo, tab)))
        }
    }
}

fn walk_table(group: &str, est: Vec<WalkFunctionalEstimate>) -> Table {
    let mut t = Table::new(&["n", "mean", "stderr", "samples", "invalid"]);
    t.meta("group", group);
    for e in est {
        t.push(vec![
            Cell::int(e.n),
            Cell::Float(e.mean),
            Cell::Float(e.stderr),
            Cell::int(e.samples),
            Cell::int(e.invalid),
        ]);
    }
    t
}

struct Drift<'a> {
    ns: &'a [usize],
    samples: usize,
    seed: u64,
    cap: u64,
}

impl OracleVisitor for Drift<'_> {
    type Output = cayauto_core::Result<Vec<WalkFunctionalEstimate>>;
    fn visit<G: Group + 'static>(self, o: OracleGroup<G>) -> Self::Output {
        walk_drift_grid(&o, self.ns, self.samples, self.seed, self.cap)
    }
}

struct Range<'a> {
    ns: &'a [usize],
    samples: usize,
    seed: u64,
}

impl OracleVisitor for Range<'_> {
    type Output = cayauto_core::Result<Vec<WalkFunctionalEstimate>>;
    fn visit<G: Group + 'static>(self, o: OracleGroup<G>) -> Self::Output {
        walk_range_grid(&o, self.ns, self.samples, self.seed)
    }
}

struct Spheres(usize);

impl OracleVisitor for Spheres {
    type Output = Vec<usize>;
    fn visit<G: Group + 'static>(self, o: OracleGroup<G>) -> Self::Output {
        o.sphere_sizes(self.0)
    }
}

struct Iso<'a> {
    p: &'a GraphPresentation,
    radius: usize,
}

impl OracleVisitor for Iso<'_> {
    type Output = cayauto_core::Result<(usize, Option<String>)>;
    fn visit<G: Group + 'static>(self, o: OracleGroup<G>) -> Self::Output {
        let r = isomorphic_to_oracle(self.p, &o, self.radius)?;
        Ok((r.mapping.len(), r.conflict))
    }
}

fn read_columns(path: &Path) -> Res<(Vec<String>, Vec<Vec<String>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let bad = |e: csv::Error| CliError::Config(format!("bad CSV in {}: {e}", path.display()));
    let headers: Vec<String> = rdr.headers().map_err(bad)?.iter().map(String::from).collect();
    let mut cols = vec![Vec::new(); headers.len()];
    for rec in rdr.records() {
        for (c, v) in cols.iter_mut().zip(rec.map_err(bad)?.iter()) {
            c.push(v.to_string());
        }
    }
    Ok((headers, cols))
}

fn column<'a>(headers: &[String], cols: &'a [Vec<String>], name: &str) -> Res<&'a [String]> {
    headers
        .iter()
        .position(|h| h == name)
        .map(|i| cols[i].as_slice())
        .ok_or_else(|| CliError::Config(format!("no column '{name}' (have: {})", headers.join(", "))))
}

fn parse_all<T: std::str::FromStr>(col: &[String], name: &str) -> Res<Vec<T>> {
    col.iter()
        .map(|v| {
            v.parse()
                .map_err(|_| CliError::Config(format!("column '{name}': cannot parse '{v}'")))
        })
        .collect()
}

fn fit(
    input: &Path,
    mode: FitMode,
    x: Option<&str>,
    y: Option<&str>,
    max_order: usize,
    holdout: usize,
    window: &str,
) -> Res<Value> {
    let (headers, cols) = read_columns(input)?;
    let input = input.display().to_string();
    match mode {
        FitMode::Recurrence => {
            let y = y.unwrap_or("b_n");
            let seq: Vec<BigInt> = parse_all(column(&headers, &cols, y)?, y)?;
            let fit = fit_recurrence(&seq, max_order, holdout)?;
            Ok(json!({
                "mode": "recurrence",
                "input": input,
                "column": y,
                "terms": seq.len(),
                "max_order": max_order,
                "found": fit.is_some(),
                "order": fit.as_ref().map(|f| f.order),
                "coefficients": fit.as_ref().map(|f| f.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
                "prefix_len": fit.as_ref().map(|f| f.prefix_len),
                "holdout": holdout,
            }))
        }
        FitMode::Power => {
            let (xn, yn) = (x.unwrap_or("n"), y.unwrap_or("mean"));
            let xs: Vec<f64> = parse_all(column(&headers, &cols, xn)?, xn)?;
            let ys: Vec<f64> = parse_all(column(&headers, &cols, yn)?, yn)?;
            let w: Window = window.parse()?;
            let f = fit_power(&xs, &ys, w)?;
            Ok(json!({
                "mode": "power",
                "input": input,
                "x": xn,
                "y": yn,
                "exponent": f.exponent,
                "intercept": f.intercept,
                "window": [f.window.0, f.window.1],
                "residual_rms": f.residual_rms,
            }))
        }
        FitMode::Classify => {
            let y = y.unwrap_or("b_n");
            let seq: Vec<BigUint> = parse_all(column(&headers, &cols, y)?, y)?;
            let class = classify_growth(&seq);
            Ok(json!({
                "mode": "classify",
                "input": input,
                "column": y,
                "terms": seq.len(),
                "growth": serde_json::to_value(class).expect("serializable"),
            }))
        }
    }
}
