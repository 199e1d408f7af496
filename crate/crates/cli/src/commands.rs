//! Subcommand implementations.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use serde_json::{json, Value};

use ncprob::bell::{self, BellAngles, Card};
use ncprob::clt::{self, Binomial, Deconcatenation, GradedCoalgebra, StateForm, Unshuffle};
use ncprob::cumulants::{moments_to_cumulants, CumulantFunctional, CumulantKind};
use ncprob::partitions::{self, PartitionKind};
use ncprob::prelie::magnus_report;
use ncprob::scalar::{self, format_scalar, to_f64};
use ncprob::shuffle::{self, ChainKind};
use ncprob::wick::{self, SentenceState};
use ncprob::{Alphabet, FunctionalFile, LinComb, Model, MomentFunctional, Word};

use crate::output::{columns, float, Output};
use crate::{
    BellCommand, Cli, CoalgebraKind, Command, CumulantsCommand, ShuffleCommand, StateSource,
    WickCommand,
};

/// Word length used when neither the input nor `--max-degree` fixes one.
const MODEL_DEGREE: usize = 6;

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Partitions { kind, n, count } => partitions(cli, *kind, *n, *count),
        Command::Cumulants(CumulantsCommand::Convert { kind, source, out }) => {
            let phi = load(source.input.as_deref(), source.model)?;
            convert(cli, *kind, &phi, out.as_deref())
        }
        Command::Magnus { source, check } => {
            if check != "monotone" {
                bail!("unsupported check `{check}` (expected `monotone`)");
            }
            let phi = load(source.input.as_deref(), source.model)?;
            magnus(cli, &phi)
        }
        Command::Shuffle(ShuffleCommand::Spectrum { kind, n, decimal }) => spectrum(cli, *kind, *n, *decimal),
        Command::Shuffle(ShuffleCommand::Mix {
            kind,
            n,
            steps,
            start,
            decimal,
        }) => mix(cli, *kind, *n, *steps, start, *decimal),
        Command::Clt {
            coalgebra,
            state,
            element,
            n,
            order,
        } => {
            let phi = load_state(state)?;
            let x = phi
                .alphabet()
                .parse_word(element)
                .with_context(|| format!("element `{element}`"))?;
            let size = phi.alphabet().size();
            match coalgebra {
                CoalgebraKind::Deconcat => clt_table(
                    &Deconcatenation { alphabet_size: size },
                    &StateForm::from_moments(&phi),
                    &x,
                    element,
                    n,
                    *order,
                ),
                CoalgebraKind::Unshuffle => clt_table(
                    &Unshuffle { alphabet_size: size },
                    &StateForm::from_moments(&phi),
                    &x,
                    element,
                    n,
                    *order,
                ),
                CoalgebraKind::Binomial => {
                    if size != 1 {
                        bail!("the binomial coalgebra needs a single-generator state, got {size} generators");
                    }
                    clt_table(
                        &Binomial,
                        &StateForm::from_moments_binomial(&phi),
                        &x.len(),
                        element,
                        n,
                        *order,
                    )
                }
            }
        }
        Command::Wick(WickCommand::Classical { state, n }) => classical_wick(&load_state(state)?, *n),
        Command::Wick(WickCommand::Free {
            state,
            word,
            via_cumulants,
        }) => free_wick(&load_state(state)?, word, *via_cumulants),
        Command::Bell(cmd) => bell(cli, cmd),
    }
}

fn load_state(s: &StateSource) -> Result<MomentFunctional> {
    load(s.input.as_deref(), s.model)
}

/// Reads a moment file, a cumulant file (converted back to moments), or a model.
fn load(input: Option<&Path>, model: Option<Model>) -> Result<MomentFunctional> {
    if let Some(m) = model {
        return Ok(MomentFunctional::model(m));
    }
    let path = input.context("no input given (use --in or --model)")?;
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let file = FunctionalFile::from_json(&text).with_context(|| format!("malformed file {}", path.display()))?;
    let phi = match file.kind {
        Some(_) => CumulantFunctional::from_file(&file).and_then(|c| c.to_moments()),
        None => MomentFunctional::from_file(&file),
    };
    phi.with_context(|| format!("invalid functional in {}", path.display()))
}

fn degree(cli: &Cli, phi: &MomentFunctional) -> usize {
    cli.max_degree.or(phi.max_degree()).unwrap_or(MODEL_DEGREE)
}

fn partitions(cli: &Cli, kind: PartitionKind, n: usize, count: bool) -> Result<Output> {
    let bound = cli.bound.unwrap_or(partitions::DEFAULT_BOUND);
    let ps = partitions::enumerate_bounded(kind, n, bound)?;
    if count {
        let c = ps.len().to_string();
        return Ok(Output::new(c.clone(), json!({ "kind": kind.name(), "n": n, "count": ps.len() }))
            .table(&["kind", "n", "count"], vec![vec![kind.name().into(), n.to_string(), c]]));
    }
    let texts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
    let rows = texts
        .iter()
        .zip(&ps)
        .map(|(t, p)| vec![t.clone(), p.num_blocks().to_string()])
        .collect();
    Ok(Output::new(
        texts.join("\n"),
        json!({ "kind": kind.name(), "n": n, "count": ps.len(), "partitions": texts }),
    )
    .table(&["partition", "blocks"], rows))
}

fn convert(cli: &Cli, kind: CumulantKind, phi: &MomentFunctional, out: Option<&Path>) -> Result<Output> {
    let d = degree(cli, phi);
    let c = moments_to_cumulants(kind, phi, d)?;
    let file = c.to_file();
    let text = file.to_json();
    let json: Value = serde_json::from_str(&text)?;
    let rows = file.moments.iter().map(|(w, v)| vec![w.clone(), v.clone()]).collect();
    let pretty = match out {
        Some(path) => {
            fs::write(path, format!("{text}\n")).with_context(|| format!("cannot write {}", path.display()))?;
            format!("wrote {} {} cumulants up to degree {d} to {}", file.moments.len(), kind.name(), path.display())
        }
        None => text,
    };
    Ok(Output::new(pretty, json).table(&["word", "cumulant"], rows))
}

fn magnus(cli: &Cli, phi: &MomentFunctional) -> Result<Output> {
    let d = degree(cli, phi);
    let report = magnus_report(phi, d)?;
    let verdict = |b: bool| if b { "equal" } else { "differ" };
    let rows: Vec<Vec<String>> = report
        .degrees
        .iter()
        .map(|v| {
            vec![
                v.degree.to_string(),
                verdict(v.free_to_monotone).into(),
                verdict(v.boolean_to_monotone).into(),
            ]
        })
        .collect();
    let header = ["degree", "free_to_monotone", "boolean_to_monotone"];
    let json = json!({
        "max_degree": d,
        "all_hold": report.all_hold(),
        "degrees": report.degrees.iter().map(|v| json!({
            "degree": v.degree,
            "free_to_monotone": v.free_to_monotone,
            "boolean_to_monotone": v.boolean_to_monotone,
        })).collect::<Vec<_>>(),
    });
    Ok(Output::new(columns(&header, &rows), json).table(&header, rows))
}

fn shuffle_bound(cli: &Cli) -> usize {
    cli.bound.unwrap_or(shuffle::DEFAULT_BOUND)
}

fn spectrum(cli: &Cli, kind: ChainKind, n: usize, decimal: bool) -> Result<Output> {
    let chain = shuffle::build_chain_bounded(kind, n, shuffle_bound(cli))?;
    let spec = shuffle::spectrum(&chain)?;
    let mut header = vec!["eigenvalue", "multiplicity"];
    if decimal {
        header.push("decimal");
    }
    let rows: Vec<Vec<String>> = spec
        .iter()
        .map(|(l, m)| {
            let mut r = vec![format_scalar(l), m.to_string()];
            if decimal {
                r.push(float(to_f64(l)));
            }
            r
        })
        .collect();
    let json = json!({
        "kind": kind.to_string(),
        "n": n,
        "spectrum": spec.iter().map(|(l, m)| json!({
            "eigenvalue": format_scalar(l),
            "multiplicity": m,
        })).collect::<Vec<_>>(),
    });
    Ok(Output::new(columns(&header, &rows), json).table(&header, rows))
}

fn mix(cli: &Cli, kind: ChainKind, n: usize, steps: usize, start: &str, decimal: bool) -> Result<Output> {
    let chain = shuffle::build_chain_bounded(kind, n, shuffle_bound(cli))?;
    let deck = shuffle::parse_deck(start, n).with_context(|| format!("start deck `{start}`"))?;
    let p = shuffle::iterate_distribution(&chain, &chain.point_mass(&deck), steps)?;
    let exact: Vec<String> = p.iter().map(format_scalar).collect();
    let decimals: Vec<String> = p.iter().map(|x| float(to_f64(x))).collect();
    let mut pretty = exact.join(", ");
    if decimal {
        pretty = format!("{pretty}\n{}", decimals.join(", "));
    }
    let decks: Vec<String> = chain.decks().iter().map(|d| d.to_string()).collect();
    let rows = decks
        .iter()
        .zip(exact.iter().zip(&decimals))
        .map(|(d, (e, f))| vec![d.clone(), e.clone(), f.clone()])
        .collect();
    let json = json!({
        "kind": kind.to_string(),
        "n": n,
        "steps": steps,
        "start": deck.to_string(),
        "decks": decks,
        "probabilities": exact,
    });
    Ok(Output::new(pretty, json).table(&["deck", "probability", "decimal"], rows))
}

fn clt_table<C: GradedCoalgebra>(
    c: &C,
    phi: &StateForm<C::Elem>,
    x: &C::Elem,
    label: &str,
    ns: &[u64],
    order: usize,
) -> Result<Output> {
    let k = c.degree(x);
    let limit = clt::clt_limit_with_order(c, phi, x, order)?;
    let exact_scaling = k % order == 0;
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for &n in ns {
        let value = clt::convolution_power(c, phi, &BigInt::from(n), x)?;
        let (scaled, deviation) = if exact_scaling {
            let s = &value / scalar::from_big(BigInt::from(n).pow((k / order) as u32));
            let dev = &s - &limit;
            (format_scalar(&s), format_scalar(&dev))
        } else {
            let s = to_f64(&value) / (n as f64).powf(k as f64 / order as f64);
            (float(s), float(s - to_f64(&limit)))
        };
        entries.push(json!({
            "n": n,
            "value": format_scalar(&value),
            "scaled": scaled,
            "deviation": deviation,
        }));
        rows.push(vec![n.to_string(), format_scalar(&value), scaled, deviation]);
    }
    let header = ["n", "value", "scaled", "deviation"];
    let pretty = format!(
        "element {label}, degree {k}, order {order}\nlimit = {}\n{}",
        format_scalar(&limit),
        columns(&header, &rows)
    );
    let json = json!({
        "element": label,
        "degree": k,
        "order": order,
        "limit": format_scalar(&limit),
        "rows": entries,
    });
    Ok(Output::new(pretty, json).table(&header, rows))
}

fn classical_wick(phi: &MomentFunctional, n: usize) -> Result<Output> {
    let p = wick::classical_wick(phi, n)?;
    let rows: Vec<Vec<String>> = p.terms().map(|(k, c)| vec![k.to_string(), format_scalar(c)]).collect();
    let json = json!({
        "n": n,
        "polynomial": p.to_string(),
        "coefficients": rows.iter().map(|r| json!({ "power": r[0], "coefficient": r[1] })).collect::<Vec<_>>(),
    });
    Ok(Output::new(format!("W(x^{n}) = {p}"), json).table(&["power", "coefficient"], rows))
}

fn format_word(alphabet: &Alphabet, w: &Word) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        alphabet.format_word(w)
    }
}

fn format_expansion(alphabet: &Alphabet, c: &LinComb<Word>) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    let terms: Vec<_> = c.iter().collect();
    for (i, (w, x)) in terms.into_iter().rev().enumerate() {
        let neg = x < &scalar::int(0);
        let abs = if neg { -x.clone() } else { x.clone() };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let word = format_word(alphabet, w);
        if abs == scalar::int(1) {
            out.push_str(&word);
        } else if w.is_empty() {
            out.push_str(&format_scalar(&abs));
        } else {
            out.push_str(&format!("{}·{word}", format_scalar(&abs)));
        }
    }
    out
}

fn free_wick(phi: &MomentFunctional, word: &str, via_cumulants: bool) -> Result<Output> {
    let alphabet = phi.alphabet().clone();
    let w = alphabet.parse_word(word).with_context(|| format!("word `{word}`"))?;
    let state = SentenceState::new(phi.clone());
    let e = if via_cumulants {
        wick::free_wick_via_cumulants(&state, &w)?
    } else {
        wick::free_wick(&state, &w)?
    };
    let rows: Vec<Vec<String>> = e
        .result
        .iter()
        .map(|(v, c)| vec![format_word(&alphabet, v), format_scalar(c)])
        .collect();
    let json = json!({
        "word": word,
        "terms": rows.iter().map(|r| json!({ "word": r[0], "coefficient": r[1] })).collect::<Vec<_>>(),
    });
    let pretty = format!("W({word}) = {}", format_expansion(&alphabet, &e.result));
    Ok(Output::new(pretty, json).table(&["word", "coefficient"], rows))
}

fn bell(cli: &Cli, cmd: &BellCommand) -> Result<Output> {
    match cmd {
        BellCommand::Factor { angles } => {
            let a = BellAngles::parse(angles).with_context(|| format!("angles `{angles}`"))?;
            let b = bell::bell_factor(&a);
            Ok(Output::new(float(b), json!({ "angles": a, "bell_factor": b }))
                .table(&["bell_factor"], vec![vec![float(b)]]))
        }
        BellCommand::Game { angles, trials } => {
            let a = BellAngles::parse(angles).with_context(|| format!("angles `{angles}`"))?;
            game(&a, *trials, cli.seed)
        }
        BellCommand::Classical => {
            let bound = bell::classical_bound();
            let header = ["a_r", "a_n", "b_r", "b_n", "value"];
            let rows: Vec<Vec<String>> = bound
                .values
                .iter()
                .map(|(s, v)| {
                    vec![s.a_r.to_string(), s.a_n.to_string(), s.b_r.to_string(), s.b_n.to_string(), v.to_string()]
                })
                .collect();
            let pretty = format!("{}\nminimum = {}", columns(&header, &rows), bound.min);
            Ok(Output::new(pretty, serde_json::to_value(&bound)?).table(&header, rows))
        }
        BellCommand::Defect { angles } => {
            let t: Vec<f64> = angles
                .split(',')
                .map(bell::parse_angle)
                .collect::<ncprob::Result<_>>()
                .with_context(|| format!("angles `{angles}`"))?;
            let [t1, t2, t3] = t[..] else {
                bail!("angles `{angles}`: expected three comma-separated angles, got {}", t.len());
            };
            let d = bell::total_probability_defect(t1, t2, t3);
            let closed = bell::total_probability_defect_closed_form(t1, t2, t3);
            let json = json!({ "angles": [t1, t2, t3], "defect": d, "closed_form": closed });
            Ok(Output::new(format!("defect = {}\nclosed form = {}", float(d), float(closed)), json)
                .table(&["defect", "closed_form"], vec![vec![float(d), float(closed)]]))
        }
    }
}

fn game(a: &BellAngles, trials: u64, seed: u64) -> Result<Output> {
    let rec = bell::simulate_game(a, trials, seed)?;
    let header = ["alice", "bob", "trials", "agreements", "rate"];
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for alice in Card::ALL {
        for bob in Card::ALL {
            let c = rec.cell(alice, bob);
            let rate = rec.agreement_rate(alice, bob);
            rows.push(vec![
                alice.symbol().to_string(),
                bob.symbol().to_string(),
                c.trials.to_string(),
                c.agreements.to_string(),
                float(rate),
            ]);
            cells.push(json!({
                "alice": alice.symbol().to_string(),
                "bob": bob.symbol().to_string(),
                "trials": c.trials,
                "agreements": c.agreements,
                "rate": rate,
            }));
        }
    }
    let exact = bell::bell_factor(a);
    let pretty = format!(
        "{}\nempirical bell factor = {}\nstandard error = {}\nexact bell factor = {}",
        columns(&header, &rows),
        float(rec.empirical_factor),
        float(rec.standard_error),
        float(exact)
    );
    let json = json!({
        "angles": a,
        "seed": seed,
        "trials": trials,
        "counts": cells,
        "empirical_factor": rec.empirical_factor,
        "standard_error": rec.standard_error,
        "exact_factor": exact,
    });
    Ok(Output::new(pretty, json).table(&header, rows))
}
