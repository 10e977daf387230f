//! Command dispatch and report rendering. Exit status convention:
//! 0 = completed, 1 = usage/input error, 2 = counterexample found.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::constructions::{product_spec, syntactic_quotient};
use crate::equations::{
    check_equation, EquationCheckResult, EquationClass, MorphismMode, SatisfiedReport,
};
use crate::error::Error;
use crate::format::{
    load_alphabet, load_automaton, load_recognizer, save_recognizer, save_vpa,
};
use crate::morphism::RecognizerSpec;
use crate::profinite::separates;
use crate::translate::{ext_algebra_to_vpa, vpa_to_ext_algebra};
use crate::words::enumerate_well_matched;
use crate::Result;

/// Default cap on enumerable morphisms for `separate` and `--morphisms all`.
const MORPHISM_CAP: usize = 100_000;

#[derive(Parser)]
#[command(
    name = "extalg",
    about = "Finite Ext-algebra recognizers for visibly pushdown languages",
    disable_help_subcommand = true
)]
struct Cli {
    /// Emit structured key=value reports instead of prose.
    #[arg(long, global = true)]
    porcelain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Vcl,
    Vcl0,
}

#[derive(Clone, Copy, ValueEnum)]
enum MorphismsArg {
    Canonical,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a recognizer file, complete its op closure and validate it.
    Validate {
        file: PathBuf,
        /// Validate the declared tables as-is, without closure completion.
        #[arg(long)]
        raw: bool,
    },
    /// Minimize a recognizer to its syntactic quotient.
    Minimize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate an automaton file (vpa or vca) into a recognizer.
    FromVpa {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate a recognizer into a visibly pushdown automaton.
    ToVpa {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Test one word against a recognizer ('-' denotes the empty word).
    Accepts { file: PathBuf, word: String },
    /// List all well-matched words over an alphabet up to a length bound.
    Enumerate {
        alphabet_file: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Pair two recognizers over one alphabet; accepts the intersection.
    Product {
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a counterexample to a class-defining equation.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        max_context: usize,
        #[arg(long, value_enum, default_value = "canonical")]
        morphisms: MorphismsArg,
    },
    /// Search for a morphism separating two well-matched words.
    Separate {
        file: PathBuf,
        first: String,
        second: String,
    },
}

/// Parses and runs one invocation; returns the process exit status.
pub fn run_command<O: Write, E: Write>(
    args: &[String],
    out: &mut O,
    err: &mut E,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(parse_err) => {
            // Help and version requests are completed runs, not errors.
            let _ = write!(err, "{parse_err}");
            return if parse_err.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(&cli, out) {
        Ok(status) => status,
        Err(error) => {
            let _ = writeln!(err, "error: {error}");
            1
        }
    }
}

fn dispatch<O: Write>(cli: &Cli, out: &mut O) -> Result<i32> {
    let porcelain = cli.porcelain;
    match &cli.command {
        Command::Validate { file, raw } => {
            let loaded = load_recognizer(file, !raw);
            match loaded {
                Ok((spec, report)) => {
                    if porcelain {
                        writeln!(out, "result=valid")?;
                        writeln!(out, "elements={}", spec.algebra().size())?;
                        writeln!(out, "ops={}", spec.algebra().op_count())?;
                        writeln!(out, "added={}", report.added.len())?;
                        for (name, what) in &report.added {
                            writeln!(out, "added.{name}={what}")?;
                        }
                    } else {
                        writeln!(
                            out,
                            "valid: {} elements, {} ops",
                            spec.algebra().size(),
                            spec.algebra().op_count()
                        )?;
                        if report.added.is_empty() {
                            writeln!(out, "closure completion added nothing")?;
                        } else {
                            writeln!(out, "closure completion added {} ops:", report.added.len())?;
                            for (name, what) in &report.added {
                                writeln!(out, "  + {name}: {what}")?;
                            }
                        }
                    }
                    Ok(0)
                }
                Err(Error::Validation(violations)) => {
                    if porcelain {
                        writeln!(out, "result=invalid")?;
                        for (i, violation) in violations.iter().enumerate() {
                            writeln!(out, "violation.{i}={violation}")?;
                        }
                    } else {
                        writeln!(out, "invalid:")?;
                        for violation in &violations {
                            writeln!(out, "  - {violation}")?;
                        }
                    }
                    Ok(1)
                }
                Err(other) => Err(other),
            }
        }
        Command::Minimize { file, output } => {
            let (spec, _) = load_recognizer(file, true)?;
            let (minimized, _) = syntactic_quotient(&spec)?;
            emit_recognizer(out, &minimized, output, porcelain, |o| {
                writeln!(
                    o,
                    "minimized: {} -> {} elements",
                    spec.algebra().size(),
                    minimized.algebra().size()
                )
                .map_err(Error::from)
            })?;
            Ok(0)
        }
        Command::FromVpa { file, output } => {
            let vpa = load_automaton(file)?.into_vpa();
            let spec = vpa_to_ext_algebra(&vpa)?;
            emit_recognizer(out, &spec, output, porcelain, |o| {
                writeln!(
                    o,
                    "translated: {} states -> {} elements, {} ops",
                    vpa.states.len(),
                    spec.algebra().size(),
                    spec.algebra().op_count()
                )
                .map_err(Error::from)
            })?;
            Ok(0)
        }
        Command::ToVpa { file, output } => {
            let (spec, _) = load_recognizer(file, true)?;
            let vpa = ext_algebra_to_vpa(&spec);
            let text = save_vpa(&vpa);
            match output {
                Some(path) => {
                    std::fs::write(path, text)?;
                    writeln!(
                        out,
                        "translated: {} elements -> {} states, {} stack symbols",
                        spec.algebra().size(),
                        vpa.states.len(),
                        vpa.stack_symbols.len()
                    )?;
                }
                None => write!(out, "{text}")?,
            }
            Ok(0)
        }
        Command::Accepts { file, word } => {
            let (spec, _) = load_recognizer(file, true)?;
            let word = spec.alphabet().cli_word(word)?;
            match spec.accepts(&word) {
                Ok(true) => {
                    writeln!(out, "{}", if porcelain { "result=accept" } else { "accept" })?;
                    Ok(0)
                }
                Ok(false) => {
                    writeln!(out, "{}", if porcelain { "result=reject" } else { "reject" })?;
                    Ok(0)
                }
                Err(Error::NotWellMatched(_)) => {
                    if porcelain {
                        writeln!(out, "result=reject")?;
                        writeln!(out, "reason=not-well-matched")?;
                    } else {
                        writeln!(out, "reject (not well-matched)")?;
                    }
                    Ok(0)
                }
                Err(other) => Err(other),
            }
        }
        Command::Enumerate {
            alphabet_file,
            max_len,
        } => {
            let alphabet = load_alphabet(alphabet_file)?;
            let words = enumerate_well_matched(&alphabet, *max_len);
            for word in &words {
                if porcelain {
                    writeln!(out, "word={word}")?;
                } else {
                    writeln!(out, "{word}")?;
                }
            }
            if porcelain {
                writeln!(out, "count={}", words.len())?;
            }
            Ok(0)
        }
        Command::Product {
            left,
            right,
            output,
        } => {
            let (first, _) = load_recognizer(left, true)?;
            let (second, _) = load_recognizer(right, true)?;
            let product = product_spec(&first, &second)?;
            emit_recognizer(out, &product, output, porcelain, |o| {
                writeln!(
                    o,
                    "product: {} x {} = {} elements",
                    first.algebra().size(),
                    second.algebra().size(),
                    product.algebra().size()
                )
                .map_err(Error::from)
            })?;
            Ok(0)
        }
        Command::Check {
            file,
            class,
            max_context,
            morphisms,
        } => {
            let (spec, _) = load_recognizer(file, true)?;
            let class = match class {
                ClassArg::Vcl => EquationClass::Vcl,
                ClassArg::Vcl0 => EquationClass::ZeroVcl,
            };
            let mode = match morphisms {
                MorphismsArg::Canonical => MorphismMode::Canonical,
                MorphismsArg::All => MorphismMode::All { cap: MORPHISM_CAP },
            };
            match check_equation(&spec, class, *max_context, mode)? {
                EquationCheckResult::Satisfied(report) => {
                    print_satisfied(out, &report, porcelain)?;
                    Ok(0)
                }
                EquationCheckResult::Counterexample(cex) => {
                    cex.verify()?;
                    let algebra = cex.morphism.algebra();
                    if porcelain {
                        writeln!(out, "result=counterexample")?;
                        writeln!(out, "class={}", cex.class.name())?;
                        writeln!(out, "mode={}", mode.name())?;
                        writeln!(out, "max-context={max_context}")?;
                        writeln!(out, "u={}", cex.outer.left())?;
                        writeln!(out, "v={}", cex.outer.right())?;
                        writeln!(out, "uprime={}", cex.inner.left())?;
                        writeln!(out, "vprime={}", cex.inner.right())?;
                        for (name, value) in &cex.assignment {
                            writeln!(out, "{name}={}", algebra.element_name(*value))?;
                        }
                        writeln!(out, "left={}", algebra.element_name(cex.left_value))?;
                        writeln!(out, "right={}", algebra.element_name(cex.right_value))?;
                        writeln!(out, "which={}", cex.which)?;
                        writeln!(out, "left-term={}", cex.left_term)?;
                        writeln!(out, "right-term={}", cex.right_term)?;
                    } else {
                        writeln!(
                            out,
                            "counterexample to the {} equation (max context {max_context}, {} morphism):",
                            cex.class.name(),
                            mode.name()
                        )?;
                        writeln!(out, "  u  = {}", cex.outer.left())?;
                        writeln!(out, "  v  = {}", cex.outer.right())?;
                        writeln!(out, "  u' = {}", cex.inner.left())?;
                        writeln!(out, "  v' = {}", cex.inner.right())?;
                        for (name, value) in &cex.assignment {
                            writeln!(out, "  {name}  = {}", algebra.element_name(*value))?;
                        }
                        writeln!(
                            out,
                            "  left  = {} = {}",
                            cex.left_term,
                            algebra.element_name(cex.left_value)
                        )?;
                        writeln!(
                            out,
                            "  right = {} = {}",
                            cex.right_term,
                            algebra.element_name(cex.right_value)
                        )?;
                    }
                    Ok(2)
                }
            }
        }
        Command::Separate {
            file,
            first,
            second,
        } => {
            let (spec, _) = load_recognizer(file, true)?;
            let alphabet = spec.alphabet().clone();
            let x = alphabet.cli_word(first)?;
            let y = alphabet.cli_word(second)?;
            match separates(spec.algebra(), &alphabet, &x, &y, MORPHISM_CAP)? {
                Some(witness) => {
                    let algebra = witness.algebra();
                    let vx = witness.evaluate(&x)?;
                    let vy = witness.evaluate(&y)?;
                    if porcelain {
                        writeln!(out, "result=separated")?;
                        for (&(a, b), &op) in witness.ext_images() {
                            writeln!(out, "ext.{a}.{b}={}", algebra.op_name(op))?;
                        }
                        for (&c, &e) in witness.internal_images() {
                            writeln!(out, "letter.{c}={}", algebra.element_name(e))?;
                        }
                        writeln!(out, "first={}", algebra.element_name(vx))?;
                        writeln!(out, "second={}", algebra.element_name(vy))?;
                    } else {
                        writeln!(out, "separated by the morphism:")?;
                        for (&(a, b), &op) in witness.ext_images() {
                            writeln!(out, "  ext[{a},{b}] -> {}", algebra.op_name(op))?;
                        }
                        for (&c, &e) in witness.internal_images() {
                            writeln!(out, "  {c} -> {}", algebra.element_name(e))?;
                        }
                        writeln!(out, "  {x} -> {}", algebra.element_name(vx))?;
                        writeln!(out, "  {y} -> {}", algebra.element_name(vy))?;
                    }
                }
                None => {
                    if porcelain {
                        writeln!(out, "result=not-separated")?;
                    } else {
                        writeln!(out, "not separated by any morphism into this algebra")?;
                    }
                }
            }
            Ok(0)
        }
    }
}

fn print_satisfied<O: Write>(
    out: &mut O,
    report: &SatisfiedReport,
    porcelain: bool,
) -> Result<()> {
    if porcelain {
        writeln!(out, "result=satisfied")?;
        writeln!(out, "class={}", report.class.name())?;
        writeln!(out, "mode={}", report.mode.name())?;
        writeln!(out, "max-context={}", report.max_context_len)?;
        writeln!(out, "contexts={}", report.contexts_enumerated)?;
        writeln!(out, "deduped={}", report.contexts_deduped)?;
        writeln!(out, "pairs={}", report.pairs_checked)?;
        writeln!(out, "morphisms={}", report.morphisms_checked)?;
        writeln!(out, "note=not-a-membership-proof")?;
    } else {
        writeln!(out, "no counterexample within bounds (NOT a membership proof)")?;
        writeln!(
            out,
            "  checked {} context pairs ({} contexts, {} after dedup), {} morphism(s), max context {}",
            report.pairs_checked,
            report.contexts_enumerated,
            report.contexts_deduped,
            report.morphisms_checked,
            report.max_context_len
        )?;
    }
    Ok(())
}

fn emit_recognizer<O: Write>(
    out: &mut O,
    spec: &RecognizerSpec,
    output: &Option<PathBuf>,
    _porcelain: bool,
    summary: impl Fn(&mut O) -> Result<()>,
) -> Result<()> {
    let text = save_recognizer(spec);
    match output {
        Some(path) => {
            std::fs::write(path, text)?;
            summary(out)?;
        }
        None => write!(out, "{text}")?,
    }
    Ok(())
}

/// Convenience used by tests: run with string output.
pub fn run_for_test(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("extalg".to_string())
        .chain(args.iter().map(|s| s.to_string()))
        .collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let status = run_command(&argv, &mut out, &mut err);
    (
        status,
        String::from_utf8(out).expect("utf8 output"),
        String::from_utf8(err).expect("utf8 output"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_one() {
        let (status, _, err) = run_for_test(&["frobnicate"]);
        assert_eq!(status, 1);
        assert!(!err.is_empty());
    }

    #[test]
    fn help_is_not_an_error() {
        let (status, _, _) = run_for_test(&["--help"]);
        assert_eq!(status, 0);
    }
}
