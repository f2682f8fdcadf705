//! Subcommand dispatch.

use serde_json::{json, Map, Value};

use bohr_core as core;
use bohr_core::{doc, BlockMode, BohrAlgebra, FiniteOrtholattice, MonotoneSection};
use bohr_matrix as mat;
use bohr_matrix::{ContextBohr, ContextPoset, MatProjection, Tol};

use crate::output::{json_line, read_file, CliError};
use crate::paper_example;
use crate::{Cli, Command, Format, Mode};

pub fn run(cli: &Cli) -> Result<String, CliError> {
    if cli.budget < 1 {
        return Err(CliError::domain("budget must be at least 1"));
    }
    let tol = Tol {
        proj: cli.tol_proj,
        val: cli.tol_val,
        iter_cap: cli.iter_cap,
        iter_cauchy: 1e-10,
    };
    tol.validate().map_err(CliError::from)?;
    let mode = match cli.mode {
        Mode::All => BlockMode::All,
        Mode::Maximal => BlockMode::Maximal,
        Mode::Single => BlockMode::SingleGenerated,
    };
    match &cli.command {
        Command::Classify { lattice } => classify(cli, lattice),
        Command::Blocks { lattice } => blocks(cli, lattice, mode),
        Command::Bohrify { lattice } => bohrify_cmd(cli, lattice, mode),
        Command::Implies { lattice, lhs, rhs } => {
            heyting_binary(cli, lattice, mode, lhs, Some(rhs), false)
        }
        Command::Negate { lattice, elem } => heyting_binary(cli, lattice, mode, elem, None, false),
        Command::Sasaki { lattice, lhs, rhs } => {
            heyting_binary(cli, lattice, mode, lhs, Some(rhs), true)
        }
        Command::Idl { lattice } => idl(cli, lattice),
        Command::BrunsLakser { lattice } => bruns_lakser_cmd(cli, lattice),
        Command::Points { lattice } => points(cli, lattice),
        Command::MatContext { matrices, contexts, meet_closure, no_trivial } => {
            mat_context(cli, &tol, matrices, contexts, *meet_closure, *no_trivial)
        }
        Command::MatSpectrum { matrices, contexts, elem } => {
            mat_spectrum(cli, &tol, matrices, contexts, elem)
        }
        Command::Daseinise { matrices, contexts, target } => {
            daseinise_cmd(cli, &tol, matrices, contexts, target)
        }
        Command::Valuate { matrices, contexts, state, target } => {
            valuate(cli, &tol, matrices, contexts, state, target, false)
        }
        Command::Pairing { matrices, contexts, state, target } => {
            valuate(cli, &tol, matrices, contexts, state, target, true)
        }
        Command::PaperExample => paper_example::run(cli),
    }
}

fn load_lattice(path: &str) -> Result<FiniteOrtholattice, CliError> {
    Ok(doc::parse_lattice(&read_file(path)?)?)
}

fn classify(cli: &Cli, path: &str) -> Result<String, CliError> {
    let lat = load_lattice(path)?;
    let r = lat.classify();
    match cli.format {
        Format::Dot => Ok(lat.hasse_dot()),
        Format::JsonLike => {
            let mut o = Map::new();
            o.insert("elements".into(), json!(lat.n()));
            o.insert("is_lattice".into(), json!(r.is_lattice));
            o.insert("is_orthocomplemented".into(), json!(r.is_orthocomplemented));
            o.insert("is_orthomodular".into(), json!(r.is_orthomodular));
            o.insert("is_distributive".into(), json!(r.is_distributive));
            o.insert("is_boolean".into(), json!(r.is_boolean));
            if let Some((x, y)) = r.orthomodular_witness {
                o.insert(
                    "orthomodular_witness".into(),
                    json!([lat.label(x), lat.label(y)]),
                );
            }
            if let Some((x, y, z)) = r.distributive_witness {
                o.insert(
                    "distributive_witness".into(),
                    json!([lat.label(x), lat.label(y), lat.label(z)]),
                );
            }
            Ok(json_line(&Value::Object(o)))
        }
        Format::Table => {
            let mut s = format!("lattice: {} elements\n", lat.n());
            s += &format!("  lattice:            {}\n", r.is_lattice);
            s += &format!("  orthocomplemented:  {}\n", r.is_orthocomplemented);
            s += &format!("  orthomodular:       {}\n", r.is_orthomodular);
            s += &format!("  distributive:       {}\n", r.is_distributive);
            s += &format!("  boolean:            {}\n", r.is_boolean);
            if let Some((x, y, z)) = r.distributive_witness {
                let m = lat.meet(x, lat.join(y, z));
                let j = lat.join(lat.meet(x, y), lat.meet(x, z));
                s += &format!(
                    "  distributivity witness: {} ∧ ({} ∨ {}) = {} ≠ {} = ({} ∧ {}) ∨ ({} ∧ {})\n",
                    lat.label(x),
                    lat.label(y),
                    lat.label(z),
                    lat.label(m),
                    lat.label(j),
                    lat.label(x),
                    lat.label(y),
                    lat.label(x),
                    lat.label(z),
                );
            }
            if let Some((x, y)) = r.orthomodular_witness {
                s += &format!("  orthomodularity witness: ({}, {})\n", lat.label(x), lat.label(y));
            }
            Ok(s)
        }
    }
}

fn blocks(cli: &Cli, path: &str, mode: BlockMode) -> Result<String, CliError> {
    let lat = load_lattice(path)?;
    let p = core::enumerate_blocks(&lat, mode, cli.budget)?;
    let rep = core::verify_partial_boolean(&p);
    match cli.format {
        Format::JsonLike => {
            let mut o = Map::new();
            o.insert("count".into(), json!(p.n_blocks()));
            o.insert(
                "blocks".into(),
                Value::Array(
                    (0..p.n_blocks()).map(|i| json!(p.carrier_labels(i))).collect(),
                ),
            );
            o.insert("partial_boolean_ok".into(), json!(rep.all_pass()));
            Ok(json_line(&Value::Object(o)))
        }
        _ => {
            let mut s = format!("{} Boolean blocks\n", p.n_blocks());
            for i in 0..p.n_blocks() {
                s += &format!("  B{i}: {{{}}}\n", p.carrier_labels(i).join(", "));
            }
            s += "partial Boolean coherence:\n";
            for b in &rep.bullets {
                s += &format!(
                    "  [{}] {}{}\n",
                    if b.pass { "ok" } else { "FAIL" },
                    b.name,
                    b.witness.as_deref().map(|w| format!(" — {w}")).unwrap_or_default()
                );
            }
            Ok(s)
        }
    }
}

fn make_algebra(
    lat: &FiniteOrtholattice,
    mode: BlockMode,
    budget: u64,
) -> Result<BohrAlgebra, CliError> {
    let p = core::enumerate_blocks(lat, mode, budget)?;
    Ok(core::bohrify(&p, budget))
}

fn bohrify_cmd(cli: &Cli, path: &str, mode: BlockMode) -> Result<String, CliError> {
    let lat = load_lattice(path)?;
    let alg = make_algebra(&lat, mode, cli.budget)?;
    let mut o = Map::new();
    o.insert("blocks".into(), json!(alg.poset().n_blocks()));
    match alg.section_count() {
        Some(c) => {
            o.insert("sections".into(), json!(c));
        }
        None => {
            o.insert("sections".into(), json!(format!("more than the budget {}", cli.budget)));
        }
    }
    if let Some(w) = alg.flat_product_witness() {
        o.insert(
            "product_decomposition".into(),
            json!({
                "upper_block_sizes": w.block_sizes,
                "sections": w.section_count,
            }),
        );
    }
    match cli.format {
        Format::JsonLike => Ok(json_line(&Value::Object(o))),
        _ => {
            let mut s = format!("blocks: {}\n", alg.poset().n_blocks());
            s += &match alg.section_count() {
                Some(c) => format!("monotone sections: {c}\n"),
                None => format!("monotone sections: more than the budget {}\n", cli.budget),
            };
            if let Some(w) = alg.flat_product_witness() {
                s += &format!(
                    "decomposition: product of upper blocks {:?} plus top = {}\n",
                    w.block_sizes, w.section_count
                );
            }
            Ok(s)
        }
    }
}

fn section_rows(alg: &BohrAlgebra, s: &MonotoneSection) -> Vec<(String, String)> {
    let p = alg.poset();
    (0..p.n_blocks())
        .map(|i| {
            (
                format!("B{i}{{{}}}", p.carrier_labels(i).join(",")),
                p.label(s.value(i)).to_string(),
            )
        })
        .collect()
}

fn heyting_binary(
    cli: &Cli,
    path: &str,
    mode: BlockMode,
    lhs: &str,
    rhs: Option<&str>,
    sasaki: bool,
) -> Result<String, CliError> {
    let lat = load_lattice(path)?;
    let alg = make_algebra(&lat, mode, cli.budget)?;
    let lx = lat
        .id_of(lhs)
        .ok_or_else(|| CliError::parse(format!("unknown element `{lhs}`")))?;
    if sasaki {
        let rhs = rhs.expect("sasaki takes two elements");
        let rx = lat
            .id_of(rhs)
            .ok_or_else(|| CliError::parse(format!("unknown element `{rhs}`")))?;
        let rep = core::sasaki_report(&lat, &alg, lx, rx)?;
        return match cli.format {
            Format::JsonLike => {
                let rows: Vec<Value> = rep
                    .rows
                    .iter()
                    .map(|r| {
                        json!({
                            "block": r.block,
                            "case": r.case,
                            "sasaki": lat.label(r.hook_side),
                            "heyting": lat.label(r.heyting_side),
                            "agree": r.agree,
                        })
                    })
                    .collect();
                Ok(json_line(&json!({
                    "hook": lat.label(rep.hook),
                    "rows": rows,
                    "agreement_blocks": rep.agreement,
                    "case_formulas_match": rep.case_formulas_match,
                })))
            }
            _ => {
                let mut s = format!(
                    "{} ⇒_S {} = {}\n",
                    lhs,
                    rhs,
                    lat.label(rep.hook)
                );
                s += "block | D(x ⇒_S y) | D(x) ⇒ D(y) | agree\n";
                for r in &rep.rows {
                    s += &format!(
                        "  B{}  | {:10} | {:11} | {}\n",
                        r.block,
                        lat.label(r.hook_side),
                        lat.label(r.heyting_side),
                        r.agree
                    );
                }
                s += &format!("case formulas match: {}\n", rep.case_formulas_match);
                Ok(s)
            }
        };
    }
    let result = match rhs {
        Some(rhs) => {
            let rx = lat
                .id_of(rhs)
                .ok_or_else(|| CliError::parse(format!("unknown element `{rhs}`")))?;
            alg.implies(&alg.embed_d(lx), &alg.embed_d(rx))?
        }
        None => alg.negate(&alg.embed_d(lx))?,
    };
    match cli.format {
        Format::JsonLike => Ok(json_line(&doc::section_to_json(alg.poset(), &result))),
        _ => {
            let mut s = String::new();
            for (block, val) in section_rows(&alg, &result) {
                s += &format!("  {block} ↦ {val}\n");
            }
            Ok(s)
        }
    }
}

fn idl(cli: &Cli, path: &str) -> Result<String, CliError> {
    let lat = load_lattice(path)?;
    let (frame, iso) = core::ideal_completion(&lat, cli.budget)?;
    match cli.format {
        Format::JsonLike => {
            let mut o = Map::new();
            o.insert("members".into(), json!(frame.len()));
            o.insert("frame".into(), doc::frame_to_json(&frame));
            o.insert(
                "principal_isomorphism".into(),
                Value::Array(
                    iso.iter()
                        .map(|&(x, idx)| json!([lat.label(x), idx]))
                        .collect(),
                ),
            );
            Ok(json_line(&Value::Object(o)))
        }
        _ => Ok(format!(
            "ideals: {} (order-isomorphic to the lattice: {})\n",
            frame.len(),
            iso.len() == frame.len()
        )),
    }
}

fn bruns_lakser_cmd(cli: &Cli, path: &str) -> Result<String, CliError> {
    let lat = load_lattice(path)?;
    let bl = core::bruns_lakser(&lat, cli.budget)?;
    let member_labels = |m: &core::Bits| -> Vec<String> {
        m.iter_ones().map(|e| lat.label(e as u16).to_string()).collect()
    };
    match cli.format {
        Format::JsonLike => {
            let mut o = Map::new();
            o.insert("definitional_count".into(), json!(bl.definitional.len()));
            if let Some(fam) = &bl.printed_family {
                o.insert("printed_family_count".into(), json!(fam.len()));
            }
            o.insert(
                "only_definitional".into(),
                Value::Array(bl.only_definitional.iter().map(|m| json!(member_labels(m))).collect()),
            );
            o.insert(
                "only_printed_family".into(),
                Value::Array(
                    bl.only_family
                        .iter()
                        .map(|f| {
                            json!({
                                "member": member_labels(&f.member),
                                "fails_at": lat.label(f.witness),
                                "lhs": lat.label(f.lhs),
                                "rhs": lat.label(f.rhs),
                            })
                        })
                        .collect(),
                ),
            );
            o.insert("notes".into(), json!(bl.notes));
            Ok(json_line(&Value::Object(o)))
        }
        _ => {
            let mut s = format!("distributive ideals (verbatim definition): {}\n", bl.definitional.len());
            if let Some(fam) = &bl.printed_family {
                s += &format!("printed union family: {}\n", fam.len());
            }
            s += &format!(
                "only in the definitional set: {}\n",
                bl.only_definitional.len()
            );
            for m in &bl.only_definitional {
                s += &format!("  {{{}}}\n", member_labels(m).join(", "));
            }
            s += &format!("only in the printed family: {}\n", bl.only_family.len());
            for f in bl.only_family.iter().take(8) {
                s += &format!(
                    "  {{{}}} fails at l = {}: (⋁M)∧l = {} ≠ {} = ⋁(m∧l)\n",
                    member_labels(&f.member).join(", "),
                    lat.label(f.witness),
                    lat.label(f.lhs),
                    lat.label(f.rhs)
                );
            }
            if bl.only_family.len() > 8 {
                s += &format!("  … and {} more\n", bl.only_family.len() - 8);
            }
            for n in &bl.notes {
                s += &format!("note: {n}\n");
            }
            Ok(s)
        }
    }
}

fn points(cli: &Cli, path: &str) -> Result<String, CliError> {
    let lat = load_lattice(path)?;
    let (frame, _) = core::ideal_completion(&lat, cli.budget)?;
    let pts = core::frame_points(&frame);
    match cli.format {
        Format::JsonLike => {
            let arr: Vec<Value> = pts
                .iter()
                .map(|p| {
                    json!({
                        "prime_member": frame.member_labels(p.prime_member),
                        "true_on": p.assignment.count(),
                    })
                })
                .collect();
            Ok(json_line(&json!({"points": pts.len(), "detail": arr})))
        }
        _ => Ok(format!("frame points: {}\n", pts.len())),
    }
}

struct MatInputs {
    cb: ContextBohr,
}

fn load_mat(
    cli: &Cli,
    tol: &Tol,
    matrices: &str,
    contexts: &str,
    meet_closure: bool,
    add_trivial: bool,
) -> Result<(mat::doc::MatrixDoc, MatInputs), CliError> {
    let mdoc = mat::doc::parse_matrices(&read_file(matrices)?)?;
    let ctxs = mat::doc::parse_contexts(&mdoc, &read_file(contexts)?, tol)?;
    let poset = ContextPoset::new(mdoc.dim, ctxs, meet_closure, add_trivial, tol)?;
    let cb = ContextBohr::new(poset, cli.budget, *tol)?;
    Ok((mdoc, MatInputs { cb }))
}

fn mat_context(
    cli: &Cli,
    tol: &Tol,
    matrices: &str,
    contexts: &str,
    meet_closure: bool,
    no_trivial: bool,
) -> Result<String, CliError> {
    let (_, inputs) = load_mat(cli, tol, matrices, contexts, meet_closure, !no_trivial)?;
    let poset = &inputs.cb.poset;
    match cli.format {
        Format::JsonLike => {
            let ctxs: Vec<Value> = (0..poset.len())
                .map(|i| {
                    json!({
                        "atoms": poset.context(i).k(),
                        "coarser_than": (0..poset.len()).filter(|&j| poset.leq(i, j) && j != i).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(json_line(&json!({
                "dim": poset.dim(),
                "contexts": ctxs,
                "bottom": poset.bottom(),
            })))
        }
        _ => {
            let mut s = format!("context poset: {} contexts over M_{}\n", poset.len(), poset.dim());
            for i in 0..poset.len() {
                let above: Vec<String> = (0..poset.len())
                    .filter(|&j| poset.leq(i, j) && j != i)
                    .map(|j| format!("C{j}"))
                    .collect();
                s += &format!(
                    "  C{i}: {} atoms{}{}\n",
                    poset.context(i).k(),
                    if i == poset.bottom() { " (bottom)" } else { "" },
                    if above.is_empty() {
                        String::new()
                    } else {
                        format!(", refined by {}", above.join(", "))
                    }
                );
            }
            Ok(s)
        }
    }
}

fn mat_spectrum(
    cli: &Cli,
    tol: &Tol,
    matrices: &str,
    contexts: &str,
    elem: &str,
) -> Result<String, CliError> {
    let mdoc = mat::doc::parse_matrices(&read_file(matrices)?)?;
    let ctxs = mat::doc::parse_contexts(&mdoc, &read_file(contexts)?, tol)?;
    if ctxs.is_empty() {
        return Err(CliError::parse("need at least one context"));
    }
    let a = mdoc.get(elem)?;
    let mut out = String::new();
    let mut arr = Vec::new();
    let mut hits = 0;
    for (ci, c) in ctxs.iter().enumerate() {
        match mat::spectral_open(c, ci, a, tol) {
            Ok(open) => {
                hits += 1;
                let rels = mat::spectrum_relations(c, a, a, tol)?;
                let all = rels.iter().all(|r| r.pass);
                out += &format!(
                    "C{ci}: D({elem}) = atoms {:?} of {} — relations {}\n",
                    open.atom_set.ids(),
                    c.k(),
                    if all { "pass" } else { "FAIL" }
                );
                arr.push(json!({
                    "context": ci,
                    "atom_set": open.atom_set.ids(),
                    "relations_pass": all,
                }));
            }
            Err(mat::MatrixError::NotInContext(_)) => {
                out += &format!("C{ci}: `{elem}` does not lie in this context\n");
                arr.push(json!({ "context": ci, "atom_set": Value::Null }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    if hits == 0 {
        return Err(CliError::domain(format!(
            "`{elem}` lies in none of the given contexts"
        )));
    }
    match cli.format {
        Format::JsonLike => Ok(json_line(&json!({ "opens": arr }))),
        _ => Ok(out),
    }
}

fn daseinise_cmd(
    cli: &Cli,
    tol: &Tol,
    matrices: &str,
    contexts: &str,
    target: &str,
) -> Result<String, CliError> {
    let (mdoc, inputs) = load_mat(cli, tol, matrices, contexts, false, true)?;
    let p = MatProjection::new(mdoc.get(target)?.clone(), tol)?;
    let s = inputs.cb.daseinise(&p)?;
    let cb = &inputs.cb;
    match cli.format {
        Format::JsonLike => {
            let mut o = Map::new();
            for ci in 0..cb.poset.len() {
                let proj = cb.section_projection(&s, ci);
                let rank = proj.trace().re.round() as i64;
                o.insert(format!("C{ci}"), json!(format!("rank {rank}")));
            }
            Ok(json_line(&Value::Object(o)))
        }
        _ => {
            let mut out = String::new();
            for ci in 0..cb.poset.len() {
                let proj = cb.section_projection(&s, ci);
                out += &format!("  C{ci} ↦ rank {}\n", proj.trace().re.round() as i64);
            }
            Ok(out)
        }
    }
}

fn valuate(
    cli: &Cli,
    tol: &Tol,
    matrices: &str,
    contexts: &str,
    state: &str,
    target: &str,
    use_pairing: bool,
) -> Result<String, CliError> {
    let (mdoc, inputs) = load_mat(cli, tol, matrices, contexts, false, true)?;
    let rho = mat::doc::parse_state(&read_file(state)?, tol)?;
    let p = MatProjection::new(mdoc.get(target)?.clone(), tol)?;
    let cb = &inputs.cb;
    let s = cb.daseinise(&p)?;
    let upper = if use_pairing {
        let member = cb.basis_member(&s);
        let via_pairing = mat::pairing(cb, &rho, &member)?;
        let via_kripke = mat::kripke_valuation(cb, &rho, &s)?;
        if via_pairing.contexts != via_kripke.contexts {
            return Err(CliError::domain(
                "pairing and Kripke valuation disagree on a basis member",
            ));
        }
        via_pairing
    } else {
        mat::kripke_valuation(cb, &rho, &s)?
    };
    match cli.format {
        Format::JsonLike => Ok(json_line(&json!({
            "true_in": upper.contexts.ids(),
            "upward_closed": upper.upward_closed,
        }))),
        _ => Ok(format!(
            "true in contexts: {:?} (upward closed: {})\n",
            upper.contexts.ids(),
            upper.upward_closed
        )),
    }
}
