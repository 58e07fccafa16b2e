//! Command-line front end. Every report is JSON on stdout or `--out`.
//!
//! Exit codes: 0 success, 1 failed verdict under `--strict`, 2 usage or input
//! error, 3 cost guard exceeded.

use std::collections::HashMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::engine::{
    builtin, check_model_complete_bounded, ec_models, find_universal_equivalent, kaiser_hull_pi2,
    pi1_separator, rank_one_selection, BoundedClass, EcVerdict, SeparationReport,
};
use crate::error::{Error, Result};
use crate::formula::{
    levy_classify, morleyize, parse, parse_inferring, print, to_prenex, Formula, MorleyKind,
    Signature,
};
use crate::hf::{collapse, encode, hf_eval, hf_universe, quotient_check, HFSet, PointedCode};
use crate::structure::{
    atomic_diagram, enumerate_embeddings, enumerate_structures, satisfies, EnumerationLimits,
    FinStructure,
};
use crate::templates::TemplateBounds;
use crate::translate::{check_universal_form, translate, translate_expanded, verify_translation};
use crate::{par, suite};

/// Largest number of assignments `eval` and `hf eval` will enumerate.
const MAX_ASSIGNMENTS: usize = 1 << 20;

#[derive(Debug, Parser)]
#[command(
    name = "modelcomp",
    version,
    about = "Finite-scale model companionship workbench"
)]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (0 uses every core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Seed recorded in the report.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Exit with status 1 when the computed verdict is a failure.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct FormulaArgs {
    /// Formula in S-expression syntax.
    #[arg(long)]
    pub formula: String,
    /// Signature as a JSON file or inline JSON; inferred from the formula when absent.
    #[arg(long)]
    pub sig: Option<String>,
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    /// Class file, or a built-in name (graphs, cliques, non-edge, triangle-free,
    /// equality, linear-orders), optionally prefixed with `morleyized:`.
    #[arg(long)]
    pub class: String,
    /// Size bound for built-in classes.
    #[arg(long, default_value_t = 3)]
    pub size: usize,
    #[arg(long, default_value_t = 1)]
    pub qrank: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Levy class of a formula (levy_classify).
    Classify(FormulaArgs),
    /// Prenex normal form (to_prenex).
    Prenex(FormulaArgs),
    /// Definitional expansion by relation symbols for each --formula (morleyize).
    Morleyize {
        #[arg(long, required = true)]
        formula: Vec<String>,
        #[arg(long)]
        sig: Option<String>,
    },
    /// Satisfying assignments of a formula in a structure (satisfies).
    Eval {
        #[arg(long)]
        structure: String,
        #[arg(long)]
        formula: String,
    },
    /// All embeddings between two structures (enumerate_embeddings).
    Embeddings {
        /// Source then target structure.
        #[arg(long, num_args = 1, required = true)]
        structure: Vec<String>,
    },
    /// Atomic diagram of a structure (atomic_diagram).
    Diagram {
        #[arg(long)]
        structure: String,
    },
    /// Models of the axioms up to isomorphism (enumerate_structures).
    Enum {
        #[arg(long)]
        sig: String,
        /// Axiom; repeatable.
        #[arg(long)]
        formula: Vec<String>,
        #[arg(long)]
        size: usize,
    },
    /// Bounded existential-closedness verdict per model (ec_models).
    Ec(ClassArgs),
    /// Universal separator between two classes (pi1_separator).
    Separate {
        /// First class (the separator holds in it), then second class.
        #[arg(long, num_args = 1, required = true)]
        class: Vec<String>,
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value_t = 2)]
        qrank: usize,
        #[arg(long, default_value_t = 2)]
        max_vars: usize,
    },
    /// Bounded Robinson test (check_model_complete_bounded).
    Modelcomplete(ClassArgs),
    /// Bounded Π₂ hull of the ec models (kaiser_hull_pi2).
    Hull {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, default_value_t = 2)]
        max_vars: usize,
    },
    /// Universal formula equivalent to a Σ₁ formula over a class (find_universal_equivalent).
    UnivEquiv {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        formula: String,
    },
    /// Hereditarily finite sets and their codes (hf::encode, collapse, hf_eval, hf_universe, quotient_check).
    Hf {
        #[command(subcommand)]
        command: HfCommand,
    },
    /// Membership formula to code formula (translate).
    Translate {
        #[arg(long)]
        formula: String,
    },
    /// Exhaustive check of a translation on codes of bounded domain (verify_translation).
    VerifyTranslation {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// Restrict assignments to HF(k).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Universal form over codes and its exhaustive check (check_universal_form).
    UniversalForm {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
    /// Acceptance criteria 1 to 9 (suite::run_suite).
    Suite,
}

#[derive(Debug, Subcommand)]
pub enum HfCommand {
    /// Canonical code of a set (encode).
    Encode {
        #[arg(long)]
        set: String,
    },
    /// Collapse of a code file or inline code JSON (collapse).
    Decode {
        #[arg(long)]
        code: String,
    },
    /// Satisfying assignments of a membership formula over HF(k) (hf_eval).
    Eval {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        k: usize,
    },
    /// The sets of HF(k) with their Ackermann codes (hf_universe).
    Universe {
        #[arg(long)]
        k: usize,
    },
    /// Exhaustive quotient check of codes on at most m nodes (quotient_check).
    Quotient {
        /// Largest code domain
        #[arg(long)]
        m: usize,
        /// HF level the classes are compared against
        #[arg(long)]
        k: usize,
    },
}

/// Parse `argv`, run, and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match par::with_jobs(cli.jobs, || execute(&cli.command, cli.jobs)) {
        Ok((mut report, ok)) => {
            if let (Some(seed), Value::Object(map)) = (cli.seed, &mut report) {
                map.insert("seed".into(), json!(seed));
            }
            if let Err(e) = emit(&report, cli.out.as_deref()) {
                eprintln!("error: {e}");
                return 2;
            }
            if cli.strict && !ok {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_guard() {
                3
            } else {
                2
            }
        }
    }
}

fn emit(report: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(report)? + "\n";
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

/// A file path or inline JSON.
fn read_source(s: &str) -> Result<String> {
    if s.trim_start().starts_with('{') {
        Ok(s.to_string())
    } else {
        Ok(std::fs::read_to_string(s)?)
    }
}

fn formula_with(text: &str, sig: Option<&str>) -> Result<(Formula, Signature)> {
    match sig {
        Some(s) => {
            let sig = Signature::from_json(&read_source(s)?)?;
            Ok((parse(text, &sig)?, sig))
        }
        None => parse_inferring(text),
    }
}

fn load_class(arg: &str, size: usize) -> Result<BoundedClass> {
    if Path::new(arg).is_file() {
        return BoundedClass::from_json(&std::fs::read_to_string(arg)?);
    }
    match arg.strip_prefix("morleyized:") {
        Some(name) => {
            let c = builtin::by_name(name, size)?;
            let mr = morleyize(
                &c.signature,
                &rank_one_selection(&c.signature, TemplateBounds::default())?,
            )?;
            c.morleyized(&mr)
        }
        None => builtin::by_name(arg, size),
    }
}

fn load_structure(s: &str) -> Result<FinStructure> {
    FinStructure::from_json(&read_source(s)?, None)
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

/// Every assignment of `vars` over `0..n`, in lexicographic order.
fn assignments(vars: usize, n: usize) -> Result<Vec<Vec<usize>>> {
    let total = (n as u128).pow(vars as u32);
    if total > MAX_ASSIGNMENTS as u128 {
        return Err(Error::CostGuard(format!(
            "{total} assignments exceed {MAX_ASSIGNMENTS}"
        )));
    }
    Ok((0..total as usize)
        .map(|mut i| {
            let mut t = vec![0; vars];
            for slot in t.iter_mut().rev() {
                *slot = i % n;
                i /= n;
            }
            t
        })
        .collect())
}

fn execute(cmd: &Command, jobs: usize) -> Result<(Value, bool)> {
    Ok(match cmd {
        Command::Classify(a) => {
            let (f, _) = formula_with(&a.formula, a.sig.as_deref())?;
            (json!({ "class": levy_classify(&f) }), true)
        }
        Command::Prenex(a) => {
            let (f, _) = formula_with(&a.formula, a.sig.as_deref())?;
            let p = to_prenex(&f);
            (
                json!({ "prenex": print(&p), "class": levy_classify(&p) }),
                true,
            )
        }
        Command::Morleyize { formula, sig } => {
            let sig = match sig {
                Some(s) => Signature::from_json(&read_source(s)?)?,
                None => {
                    let mut all = Signature::empty();
                    for t in formula {
                        all = crate::formula::infer_signature(&parse_inferring(t)?.0, all)?;
                    }
                    all
                }
            };
            let selected = formula
                .iter()
                .map(|t| Ok((parse(t, &sig)?, MorleyKind::Relation)))
                .collect::<Result<Vec<_>>>()?;
            (to_value(&morleyize(&sig, &selected)?)?, true)
        }
        Command::Eval { structure, formula } => {
            let m = load_structure(structure)?;
            let f = parse(formula, m.signature())?;
            let vars = f.free_vars();
            let mut sat = Vec::new();
            for t in assignments(vars.len(), m.size())? {
                let a: HashMap<String, usize> =
                    vars.iter().cloned().zip(t.iter().copied()).collect();
                if satisfies(&m, &f, &a)? {
                    sat.push(t);
                }
            }
            let holds = vars.is_empty() && !sat.is_empty();
            let ok = !vars.is_empty() || holds;
            let mut r = json!({ "formula": print(&f), "free_vars": vars, "satisfying": sat });
            if f.is_sentence() {
                r["holds"] = json!(holds);
            }
            (r, ok)
        }
        Command::Embeddings { structure } => {
            let [src, tgt] = structure.as_slice() else {
                return Err(Error::Unsupported(
                    "embeddings needs exactly two --structure values".into(),
                ));
            };
            let es = enumerate_embeddings(&load_structure(src)?, &load_structure(tgt)?)?;
            let ok = !es.is_empty();
            (
                json!({ "count": es.len(), "embeddings": es.iter().map(|e| &e.map).collect::<Vec<_>>() }),
                ok,
            )
        }
        Command::Diagram { structure } => {
            let d = atomic_diagram(&load_structure(structure)?)?;
            (
                json!({
                    "constants": d.constants,
                    "sentences": d.sentences.iter().map(print).collect::<Vec<_>>(),
                }),
                true,
            )
        }
        Command::Enum { sig, formula, size } => {
            let sig = Signature::from_json(&read_source(sig)?)?;
            let axioms = formula
                .iter()
                .map(|t| parse(t, &sig))
                .collect::<Result<Vec<_>>>()?;
            let ms = enumerate_structures(&sig, *size, &axioms, EnumerationLimits::default())?;
            let ok = !ms.is_empty();
            (
                json!({ "count": ms.len(), "models": ms.iter().map(FinStructure::to_file).collect::<Vec<_>>() }),
                ok,
            )
        }
        Command::Ec(a) => {
            let c = load_class(&a.class, a.size)?;
            let rs = ec_models(&c, a.qrank)?;
            let ok = rs.iter().all(|r| r.verdict != EcVerdict::Refuted);
            (json!({ "models": c.len(), "reports": rs }), ok)
        }
        Command::Separate {
            class,
            size,
            qrank,
            max_vars,
        } => {
            let [t, s] = class.as_slice() else {
                return Err(Error::Unsupported(
                    "separate needs exactly two --class values".into(),
                ));
            };
            let r = pi1_separator(
                &load_class(t, *size)?,
                &load_class(s, *size)?,
                *qrank,
                *max_vars,
                TemplateBounds::default(),
            )?;
            let ok = matches!(r, SeparationReport::Separator { .. });
            (to_value(&r)?, ok)
        }
        Command::Modelcomplete(a) => {
            let r = check_model_complete_bounded(&load_class(&a.class, a.size)?, a.qrank)?;
            let ok = r.passes;
            (to_value(&r)?, ok)
        }
        Command::Hull { class, max_vars } => {
            let c = load_class(&class.class, class.size)?;
            (
                to_value(&kaiser_hull_pi2(
                    &c,
                    class.qrank,
                    *max_vars,
                    TemplateBounds::default(),
                )?)?,
                true,
            )
        }
        Command::UnivEquiv { class, formula } => {
            let c = load_class(&class.class, class.size)?;
            let f = parse(formula, &c.signature)?;
            let r = find_universal_equivalent(&f, &c, class.qrank, TemplateBounds::default())?;
            let ok = r.is_some();
            (
                json!({ "formula": print(&f), "equivalent": r.as_ref().map(print) }),
                ok,
            )
        }
        Command::Hf { command } => hf(command)?,
        Command::Translate { formula } => {
            let f = parse(formula, &Signature::membership_only())?;
            let expanded = translate_expanded(&f)?;
            (
                json!({
                    "formula": print(&f),
                    "translation": print(&translate(&f)?),
                    "expanded": print(&expanded),
                    "class": levy_classify(&f.desugar_bounded()),
                    "expanded_class": levy_classify(&expanded),
                }),
                true,
            )
        }
        Command::VerifyTranslation { formula, m, k } => {
            let f = parse(formula, &Signature::membership_only())?;
            let r = verify_translation(&f, *m, *k)?;
            let ok = r.passes;
            (to_value(&r)?, ok)
        }
        Command::UniversalForm { formula, m } => {
            let f = parse(formula, &Signature::membership_only())?;
            let r = check_universal_form(&f, *m)?;
            let ok = r.passes;
            (to_value(&r)?, ok)
        }
        Command::Suite => {
            let r = suite::run_suite(jobs);
            let ok = r.passed;
            (to_value(&r)?, ok)
        }
    })
}

fn hf(cmd: &HfCommand) -> Result<(Value, bool)> {
    Ok(match cmd {
        HfCommand::Encode { set } => {
            let a: HFSet = set.parse()?;
            (to_value(&encode(&a))?, true)
        }
        HfCommand::Decode { code } => {
            let c = PointedCode::from_json(&read_source(code)?)?;
            let a = collapse(&c)?;
            (
                json!({ "set": a.to_string(), "ackermann": a.ackermann().ok() }),
                true,
            )
        }
        HfCommand::Eval { formula, k } => {
            let f = parse(formula, &Signature::membership_only())?;
            let universe = hf_universe(*k)?;
            let vars = f.free_vars();
            let mut sat = Vec::new();
            for t in assignments(vars.len(), universe.len())? {
                let a: HashMap<String, HFSet> = vars
                    .iter()
                    .cloned()
                    .zip(t.iter().map(|&i| universe[i].clone()))
                    .collect();
                if hf_eval(&f, *k, &a)? {
                    sat.push(
                        t.iter()
                            .map(|&i| universe[i].to_string())
                            .collect::<Vec<_>>(),
                    );
                }
            }
            let holds = vars.is_empty() && !sat.is_empty();
            let mut r =
                json!({ "formula": print(&f), "k": k, "free_vars": vars, "satisfying": sat });
            if f.is_sentence() {
                r["holds"] = json!(holds);
            }
            (r, !f.is_sentence() || holds)
        }
        HfCommand::Universe { k } => {
            let sets = hf_universe(*k)?
                .into_iter()
                .map(|a| Ok(json!({ "set": a.to_string(), "ackermann": a.ackermann()? })))
                .collect::<Result<Vec<_>>>()?;
            (json!({ "k": k, "size": sets.len(), "sets": sets }), true)
        }
        HfCommand::Quotient { m, k } => {
            let r = quotient_check(*m, *k)?;
            let ok = r.passes;
            (to_value(&r)?, ok)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(args: &[&str]) -> Value {
        let cli =
            Cli::try_parse_from(std::iter::once("modelcomp").chain(args.iter().copied())).unwrap();
        execute(&cli.command, 0).unwrap().0
    }

    #[test]
    fn classify_bounded() {
        assert_eq!(
            value(&["classify", "--formula", "(forall-in w x (in w y))"]),
            json!({ "class": "Delta0" })
        );
    }

    #[test]
    fn encode_pair() {
        assert_eq!(
            value(&["hf", "encode", "--set", "{{},{{}}}"]),
            json!({ "domain": 3, "rel": [[1, 0], [2, 0], [1, 2]] })
        );
    }

    #[test]
    fn decode_inline() {
        let v = value(&["hf", "decode", "--code", r#"{"domain":2,"rel":[[1,0]]}"#]);
        assert_eq!(v["set"], "{{}}");
    }

    #[test]
    fn usage_error_exits_two() {
        assert_eq!(run(["modelcomp", "classify"]), 2);
        assert_eq!(run(["modelcomp", "classify", "--formula", "(forall"]), 2);
    }

    #[test]
    fn guard_exits_three() {
        assert_eq!(run(["modelcomp", "hf", "universe", "--k", "7"]), 3);
    }

    #[test]
    fn eval_sentence() {
        let s = r#"{"size":2,"relations":{"E":[[0,1],[1,0]]}}"#;
        let v = value(&[
            "eval",
            "--structure",
            s,
            "--formula",
            "(forall x (exists y (E x y)))",
        ]);
        assert_eq!(v["holds"], true);
    }

    #[test]
    fn every_help_names_its_operation() {
        use clap::CommandFactory;
        let cmd = Cli::command();
        for sub in cmd
            .get_subcommands()
            .chain(cmd.find_subcommand("hf").unwrap().get_subcommands())
        {
            let about = sub.get_about().map(|a| a.to_string()).unwrap_or_default();
            assert!(about.contains('('), "{} help: {about}", sub.get_name());
        }
    }
}
