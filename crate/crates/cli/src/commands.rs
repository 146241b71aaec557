use std::sync::{Arc, Mutex};

use selfsim_core::checks::{
    automorphisms_for, check_self_similarity, derived_length_survey, fpf_search, frattini_rank,
    gs_report, property_iv_check, property_v_check, theorem1_engine, CertificateReport,
    SimilarityStructure, SurveyRow, Theorem1Outcome, Theorem1Report, TrailEntry, Verdict,
};
use selfsim_core::group::{
    abelian_invariants, derived_series, derived_subgroup, exponent, lower_central_series, quotient,
    Automorphism, Elem, FiniteGroup, GroupConfig, GroupDump, Subgroup,
};
use selfsim_core::matrix::{
    conjugation_automorphism, standard_conjugators, t_map_similarity, MatrixKind,
};
use selfsim_core::presentation::{
    parse_word, permutation_closure_order, todd_coxeter, zassenhaus_depth, EnumerationLimits, Word,
};
use serde_json::{json, Map, Value};

use crate::aut::parse_aut;
use crate::family::{build, load_presentation, Built, FamilySpec};
use crate::report::{num, nums, Report};
use crate::{Cli, CliError, Command};

/// Largest index for which `tc` cross-checks the order by permutation closure.
const CROSSCHECK_LIMIT: usize = 4096;

fn config(cli: &Cli, env_cap: Option<&str>) -> Result<GroupConfig, CliError> {
    let mut cfg = GroupConfig {
        seed: cli.seed,
        ..GroupConfig::default()
    };
    let cap = match (cli.table_cap, env_cap) {
        (Some(c), _) => Some(c),
        (None, Some(text)) => Some(text.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{}={text:?} is not an integer",
                crate::TABLE_CAP_ENV
            ))
        })?),
        (None, None) => None,
    };
    if let Some(c) = cap {
        cfg = cfg.with_table_cap(c);
    }
    Ok(cfg)
}

fn config_echo(cfg: &GroupConfig, built: Option<&Built>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("seed".into(), num(cfg.seed));
    m.insert("table_cap".into(), num(cfg.table_cap));
    m.insert("cap".into(), num(cfg.cap));
    if let Some(b) = built {
        m.insert("family".into(), json!(b.spec.to_string()));
        for (k, v) in &b.details {
            m.insert(k.clone(), v.clone());
        }
    }
    m
}

fn command_echo(cli: &Cli) -> String {
    match &cli.command {
        Command::Build { spec, table } => {
            format!("build {spec}{}", if *table { " --table" } else { "" })
        }
        Command::Report { spec } => format!("report {spec}"),
        Command::Selfsim { spec, phi, auts } => {
            let mut s = format!("selfsim {spec} --phi={phi}");
            for a in auts {
                s.push_str(&format!(" --aut={a}"));
            }
            s
        }
        Command::Theorem1 { spec, sigma, phi } => {
            format!("theorem1 {spec} --sigma={sigma} --phi={phi}")
        }
        Command::Fpf { spec, order } => format!("fpf {spec} --order={order}"),
        Command::Transfer { spec, metabelian } => {
            format!(
                "transfer {spec}{}",
                if *metabelian { " --metabelian" } else { "" }
            )
        }
        Command::Prop4 { spec, sigma } => format!("prop4 {spec} --sigma={sigma}"),
        Command::Gs {
            spec,
            d,
            r,
            upper_bound,
        } => {
            let mut s = "gs".to_string();
            if let Some(spec) = spec {
                s.push_str(&format!(" {spec}"));
            }
            if let Some(d) = d {
                s.push_str(&format!(" --d={d}"));
            }
            if let Some(r) = r {
                s.push_str(&format!(" --r={r}"));
            }
            if *upper_bound {
                s.push_str(" --upper-bound");
            }
            s
        }
        Command::Tc { file, subgroup } => match subgroup {
            Some(w) => format!("tc {file} --subgroup={w}"),
            None => format!("tc {file}"),
        },
        Command::Zdepth { file, p, degree } => format!("zdepth {file} --p={p} --degree={degree}"),
    }
}

/// Runs the command; the flag says whether every verdict passed.
pub fn execute(cli: &Cli, env_cap: Option<&str>) -> Result<(bool, Report), CliError> {
    let cfg = config(cli, env_cap)?;
    let construct =
        |spec: &str| -> Result<Built, CliError> { build(&FamilySpec::parse(spec)?, &cfg) };
    let (passed, built, payload) = match &cli.command {
        Command::Build { spec, table } => {
            let b = construct(spec)?;
            let dump = GroupDump::new(&b.group, *table);
            let payload = serde_json::to_value(dump).expect("dump serializes");
            (true, Some(b), payload)
        }
        Command::Report { spec } => {
            let b = construct(spec)?;
            let payload = group_report(&b, &cfg)?;
            (true, Some(b), payload)
        }
        Command::Selfsim { spec, phi, auts } => {
            let b = construct(spec)?;
            let (passed, payload) = selfsim(&b, phi, auts, &cfg)?;
            (passed, Some(b), payload)
        }
        Command::Theorem1 { spec, sigma, phi } => {
            let b = construct(spec)?;
            let (passed, payload) = theorem1(&b, sigma, phi, &cfg)?;
            (passed, Some(b), payload)
        }
        Command::Fpf { spec, order } => {
            let b = construct(spec)?;
            let (passed, payload) = fpf(&b, *order)?;
            (passed, Some(b), payload)
        }
        Command::Transfer { spec, metabelian } => {
            let b = construct(spec)?;
            let (passed, payload) = transfer(&b, *metabelian, &cfg)?;
            (passed, Some(b), payload)
        }
        Command::Prop4 { spec, sigma } => {
            let b = construct(spec)?;
            let s = parse_aut(&b.group, b.aut_context(), sigma)?;
            let holds = property_iv_check(&b.group, &s);
            let payload = json!({
                "sigma_order": num(s.order()),
                "holds": holds,
            });
            (holds, Some(b), payload)
        }
        Command::Gs {
            spec,
            d,
            r,
            upper_bound,
        } => {
            let (d, r, upper, b) = match (spec, d, r) {
                (Some(spec), None, None) => {
                    let b = construct(spec)?;
                    let pres = b.presentation.as_ref().ok_or_else(|| {
                        CliError::Usage("gs needs a presentation family to read off r".into())
                    })?;
                    let r = pres.relators().len() as u64;
                    (frattini_rank(&b.group) as u64, r, true, Some(b))
                }
                (None, Some(d), Some(r)) => (*d, *r, *upper_bound, None),
                _ => {
                    return Err(CliError::Usage(
                        "gs takes either a presentation family or both --d and --r".into(),
                    ))
                }
            };
            let g = gs_report(d, r, upper);
            let payload = json!({
                "d": num(g.d),
                "r": num(g.r),
                "four_r": num(4 * u128::from(g.r)),
                "d_squared": num(u128::from(g.d) * u128::from(g.d)),
                "holds": g.holds,
                "r_is_upper_bound": g.r_is_upper_bound,
                "caveat": g.caveat,
            });
            (g.holds, b, payload)
        }
        Command::Tc { file, subgroup } => (
            true,
            None,
            coset_enumeration(file, subgroup.as_deref(), &cfg)?,
        ),
        Command::Zdepth { file, p, degree } => (true, None, zdepth(file, *p, *degree)?),
    };
    Ok((
        passed,
        Report {
            command: command_echo(cli),
            config: config_echo(&cfg, built.as_ref()),
            payload,
        },
    ))
}

fn enc(g: &FiniteGroup, x: Elem) -> Value {
    Value::String(hex::encode(g.encoding(x)))
}

fn group_report(b: &Built, cfg: &GroupConfig) -> Result<Value, CliError> {
    let g = &b.group;
    let derived = derived_series(g)?;
    let lower = lower_central_series(g)?;
    let commutator = derived_subgroup(g, &Subgroup::whole(g));
    let (ab, _) = quotient(g, &commutator, cfg)?;
    let invariants = abelian_invariants(&ab)?;
    Ok(json!({
        "order": num(g.order()),
        "prime": num(g.prime()),
        "mode": if g.is_table_backed() { "table" } else { "oracle" },
        "generators": g.generators().iter().map(|&x| enc(g, x)).collect::<Vec<_>>(),
        "exponent": num(exponent(g)),
        "derived_series": nums(derived.iter().map(Subgroup::order)),
        "derived_length": num(derived.len() - 1),
        "lower_central_series": nums(lower.iter().map(Subgroup::order)),
        "nilpotency_class": num(lower.len() - 1),
        "abelianization": nums(invariants.0.iter()),
        "frattini_rank": num(frattini_rank(g)),
        "filtration_quotient_orders": nums(b.filtration.quotient_orders()),
    }))
}

/// The `φ` maps named by `--phi`. Verdict-style failures of the maps
/// themselves come back as `Err(Ok(message))`.
fn similarity(
    b: &Built,
    phi: &str,
    cfg: &GroupConfig,
) -> Result<Result<SimilarityStructure, String>, CliError> {
    let g = b.group.clone();
    let f = b.filtration.clone();
    let built = match phi {
        "ppower" => {
            let p = g.prime() as i64;
            SimilarityStructure::from_element_map(f, cfg, |_, x| g.pow(x, p))
        }
        "tmap" => match b.spec {
            FamilySpec::Matrix {
                kind: MatrixKind::Lambda,
                p,
                k,
            } => t_map_similarity(f, p, k, cfg),
            _ => {
                return Err(CliError::Usage(
                    "--phi=tmap needs a sl2lambda family".into(),
                ))
            }
        },
        path => return file_similarity(b, path, cfg),
    };
    Ok(match built {
        Ok(s) => Ok(s),
        Err(e @ (selfsim_core::Error::NotWellDefined(_) | selfsim_core::Error::NotIso(_))) => {
            Err(e.to_string())
        }
        Err(e) => return Err(e.into()),
    })
}

/// Lines `level source target`: `φ_level` sends the coset of `source` in
/// `G_{level-1}/G_level` to that of `target`. One line per coset suffices.
fn file_similarity(
    b: &Built,
    path: &str,
    cfg: &GroupConfig,
) -> Result<Result<SimilarityStructure, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    let g = &b.group;
    let element = |s: &str| -> Result<Elem, CliError> {
        let bytes = hex::decode(s)
            .map_err(|e| CliError::Usage(format!("{path}: bad encoding {s:?}: {e}")))?;
        g.index_of(&bytes)
            .ok_or_else(|| CliError::Usage(format!("{path}: {s} is not an element of the group")))
    };
    let mut pairs: Vec<(usize, Elem, Elem)> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [level, src, dst] = fields[..] else {
            return Err(CliError::Usage(format!(
                "{path}:{}: expected `level source target`",
                n + 1
            )));
        };
        let level: usize = level
            .parse()
            .map_err(|_| CliError::Usage(format!("{path}:{}: bad level {level:?}", n + 1)))?;
        pairs.push((level, element(src)?, element(dst)?));
    }
    let missing = Mutex::new(None);
    let f = &b.filtration;
    let s = SimilarityStructure::from_element_map(f.clone(), cfg, |i, x| {
        let gi = f.level(i);
        let hit = pairs
            .iter()
            .find(|&&(l, src, _)| l == i && gi.contains(g.mul(g.inv(src), x)));
        match hit {
            Some(&(_, _, dst)) => dst,
            None => {
                missing.lock().unwrap().get_or_insert((i, x));
                g.identity()
            }
        }
    });
    if let Some((i, x)) = missing.into_inner().unwrap() {
        return Ok(Err(format!(
            "no line gives φ_{i} on the coset of {}",
            hex::encode(g.encoding(x))
        )));
    }
    Ok(match s {
        Ok(s) => Ok(s),
        Err(e @ (selfsim_core::Error::NotWellDefined(_) | selfsim_core::Error::NotIso(_))) => {
            Err(e.to_string())
        }
        Err(e) => return Err(e.into()),
    })
}

fn verdict_json(name: &str, v: &Verdict) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), json!(name));
    m.insert("verdict".into(), json!(v.label()));
    if let Some(d) = v.detail() {
        m.insert("witness".into(), json!(d));
    }
    Value::Object(m)
}

fn certificate_json(r: &CertificateReport) -> Value {
    json!({
        "regime": r.regime.map(|x| x.to_string()),
        "automorphisms": r.automorphism_count.map(num),
        "checks": r.checks.iter().map(|(n, v)| verdict_json(n, v)).collect::<Vec<_>>(),
        "passed": r.passed(),
    })
}

/// Supplied automorphisms: the `--aut` list, or the standard conjugations
/// for matrix families when none is given.
fn supplied_automorphisms(b: &Built, specs: &[String]) -> Result<Vec<Automorphism>, CliError> {
    if specs.is_empty() {
        if let Some(ring) = b.spec.ring() {
            return standard_conjugators(ring)
                .iter()
                .map(|m| conjugation_automorphism(&b.group, m).map_err(CliError::from))
                .collect();
        }
    }
    specs
        .iter()
        .map(|s| parse_aut(&b.group, b.aut_context(), s))
        .collect()
}

fn certify(
    b: &Built,
    s: &Result<SimilarityStructure, String>,
    aut_specs: &[String],
) -> Result<CertificateReport, CliError> {
    match s {
        Ok(s) => {
            let supplied = supplied_automorphisms(b, aut_specs)?;
            let (auts, regime) = automorphisms_for(&b.group, &supplied)?;
            Ok(check_self_similarity(s, &auts, regime))
        }
        Err(msg) => {
            let mut r = CertificateReport::default();
            r.checks
                .push(("phi_well_defined".into(), Verdict::Fail(msg.clone())));
            Ok(r)
        }
    }
}

fn selfsim(
    b: &Built,
    phi: &str,
    auts: &[String],
    cfg: &GroupConfig,
) -> Result<(bool, Value), CliError> {
    let s = similarity(b, phi, cfg)?;
    let report = certify(b, &s, auts)?;
    let mut payload = Map::new();
    payload.insert("phi".into(), json!(phi));
    payload.insert(
        "quotient_orders".into(),
        nums(b.filtration.quotient_orders()),
    );
    payload.insert("certificate".into(), certificate_json(&report));
    Ok((report.passed(), Value::Object(payload)))
}

fn trail_json(t: &[TrailEntry]) -> Value {
    Value::Array(
        t.iter()
            .map(|e| {
                json!({
                    "level": num(e.level),
                    "representative": hex::encode(&e.representative),
                    "sigma_fixed": e.sigma_fixed,
                })
            })
            .collect(),
    )
}

fn theorem1_json(r: &Theorem1Report) -> Value {
    let outcome = match &r.outcome {
        Theorem1Outcome::FixedPointFree => json!({ "kind": "fixed_point_free" }),
        Theorem1Outcome::FixedPointAtBase { representative } => json!({
            "kind": "fixed_point_at_base",
            "representative": hex::encode(representative),
        }),
        Theorem1Outcome::PropagationFailure { level, reason } => json!({
            "kind": "propagation_failure",
            "level": num(level),
            "reason": reason,
        }),
    };
    json!({
        "depth": num(r.depth),
        "sigma_order": num(r.sigma_order),
        "levels": r.levels.iter().map(|l| json!({
            "level": num(l.level),
            "quotient_order": num(l.quotient_order),
            "derived_length": num(l.derived_length),
            "fixed_order": num(l.fixed_order),
        })).collect::<Vec<_>>(),
        "minimal_fixed_level": r.minimal_fixed_level.map(num),
        "trail": trail_json(&r.trail),
        "deep_trail": trail_json(&r.deep_trail),
        "outcome": outcome,
        "dichotomy_holds": r.dichotomy_holds(),
    })
}

fn theorem1(
    b: &Built,
    sigma: &str,
    phi: &str,
    cfg: &GroupConfig,
) -> Result<(bool, Value), CliError> {
    let s = match similarity(b, phi, cfg)? {
        Ok(s) => s,
        Err(msg) => return Err(CliError::Usage(format!("--phi={phi}: {msg}"))),
    };
    let sigma_aut = parse_aut(&b.group, b.aut_context(), sigma)?;
    let cert = certify(b, &Ok(s.clone()), &[sigma.to_string()])?;
    let report = theorem1_engine(&s, &sigma_aut)?;
    let payload = json!({
        "phi": phi,
        "certificate": certificate_json(&cert),
        "report": theorem1_json(&report),
    });
    Ok((report.dichotomy_holds(), payload))
}

fn row_json(row: &SurveyRow) -> Value {
    json!({
        "label": row.label,
        "order": num(row.order),
        "levels": row.levels.iter().map(|l| json!({
            "level": num(l.level),
            "quotient_order": num(l.quotient_order),
            "fpf": l.fpf,
            "derived_length": num(l.derived_length),
            "nilpotency_class": num(l.nilpotency_class),
        })).collect::<Vec<_>>(),
        "error": row.error,
    })
}

fn fpf(b: &Built, n: usize) -> Result<(bool, Value), CliError> {
    let g = &b.group;
    let found = fpf_search(g, n)?;
    let survey = found.first().map(|first| {
        let family = std::iter::once((b.spec.to_string(), Ok(b.filtration.clone())));
        derived_length_survey(family, |_| Ok(first.clone()), n)
    });
    let payload = json!({
        "n": num(n),
        "count": num(found.len()),
        "automorphisms": found
            .iter()
            .map(|s| g.generators().iter().map(|&x| enc(g, s.apply(x))).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "survey": survey.map(|t| row_json(&t.rows[0])),
    });
    Ok((!found.is_empty(), payload))
}

fn transfer(b: &Built, metabelian: bool, cfg: &GroupConfig) -> Result<(bool, Value), CliError> {
    let q: Arc<FiniteGroup> = if metabelian {
        let series = derived_series(&b.group)?;
        match series.get(2) {
            Some(second) if !second.is_trivial() => quotient(&b.group, second, cfg)?.0,
            _ => b.group.clone(),
        }
    } else {
        b.group.clone()
    };
    let reports = property_v_check(&q, cfg)?;
    let all = reports.iter().all(|r| r.holds());
    let payload = json!({
        "quotient_order": num(q.order()),
        "abelianization_order": num(reports.first().map_or(0, |r| r.abelianization_order)),
        "rows": reports.iter().map(|r| json!({
            "subgroup_order": num(r.subgroup.order()),
            "index": num(r.index),
            "kernel_order": num(r.kernel_order),
            "holds": r.holds(),
        })).collect::<Vec<_>>(),
        "all_hold": all,
    });
    Ok((all, payload))
}

fn coset_enumeration(
    file: &str,
    subgroup: Option<&str>,
    cfg: &GroupConfig,
) -> Result<Value, CliError> {
    let pres = load_presentation(file)?;
    let words: Vec<Word> = subgroup
        .map(|s| {
            s.split(';')
                .filter(|w| !w.trim().is_empty())
                .map(|w| parse_word(w, pres.generators()))
                .collect::<Result<_, _>>()
        })
        .transpose()?
        .unwrap_or_default();
    let table = todd_coxeter(&pres, &words, EnumerationLimits::default())?;
    let crosscheck = if words.is_empty() && table.index() <= CROSSCHECK_LIMIT {
        let order = permutation_closure_order(&table, cfg.cap)?;
        if order != table.index() {
            return Err(selfsim_core::Error::OracleInconsistent(format!(
                "permutation closure has order {order}, coset table {}",
                table.index()
            ))
            .into());
        }
        json!({ "method": "permutation closure", "order": num(order) })
    } else {
        Value::Null
    };
    Ok(json!({
        "presentation": pres.to_string(),
        "subgroup": words.iter().map(|w| pres.show(w)).collect::<Vec<_>>(),
        "index": num(table.index()),
        "cosets_defined": num(table.total_defined),
        "crosscheck": crosscheck,
    }))
}

fn zdepth(file: &str, p: u32, degree: usize) -> Result<Value, CliError> {
    if !(2..=251).contains(&p) || !(2..p).all(|d| !p.is_multiple_of(d)) {
        return Err(CliError::Usage(format!("--p={p} is not a prime")));
    }
    let pres = load_presentation(file)?;
    let rows: Vec<Value> = pres
        .relators()
        .iter()
        .map(|r| {
            json!({
                "relator": pres.show(r),
                "depth": zassenhaus_depth(r, p, degree).to_string(),
            })
        })
        .collect();
    Ok(json!({
        "p": num(p),
        "degree": num(degree),
        "relators": rows,
    }))
}
