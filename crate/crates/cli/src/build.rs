use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use detrep::constructions::{self, WaringDecomposition};
use detrep::pencil::json;
use detrep::Construction;
use serde::Serialize;

use crate::{Outcome, UsageError};

#[derive(Args)]
pub struct BuildArgs {
    /// grenet, regular-det, equivariant-perm, equivariant-det, quadric-half,
    /// quadric-full, trivial-det or waring.
    pub construction: String,
    /// Size parameter (m for the cyclic constructions, s or M for quadrics).
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of variables of a Waring decomposition (defaults to --m).
    #[arg(long)]
    pub n: Option<usize>,
    /// Waring: sum over all 2^n sign vectors.
    #[arg(long)]
    pub symmetric: bool,
    /// Grenet: keep the (-1)^(m+1) sign instead of fixing it.
    #[arg(long)]
    pub raw_sign: bool,
    /// Aligned human-readable output instead of JSON.
    #[arg(long)]
    pub pretty: bool,
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct WaringTerm {
    coeff: String,
    signs: Vec<i64>,
}

#[derive(Serialize)]
struct WaringDoc {
    n: usize,
    symmetric: bool,
    terms: Vec<WaringTerm>,
}

fn waring_text(w: &WaringDecomposition, pretty: bool) -> String {
    if pretty {
        let mut out = String::new();
        for (c, eps) in &w.terms {
            let form: Vec<String> = eps
                .iter()
                .enumerate()
                .map(|(j, e)| format!("{}x{}", if *e < 0 { "-" } else { "+" }, j + 1))
                .collect();
            out.push_str(&format!("{c:>12} * ({})^{}\n", form.join(" "), w.n));
        }
        return out;
    }
    let doc = WaringDoc {
        n: w.n,
        symmetric: w.symmetric,
        terms: w
            .terms
            .iter()
            .map(|(c, e)| WaringTerm {
                coeff: c.to_string(),
                signs: e.clone(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("serializable") + "\n"
}

pub fn run(args: BuildArgs) -> Result<Outcome, UsageError> {
    let text = if args.construction == "waring" {
        let n = args
            .n
            .or(args.m)
            .ok_or_else(|| UsageError("waring needs --n".into()))?;
        waring_text(&constructions::waring_terms(n, args.symmetric)?, args.pretty)
    } else {
        let c = Construction::from_str(&args.construction)?;
        let m = args.m.ok_or_else(|| UsageError("missing --m".into()))?;
        let p = match c {
            Construction::Grenet => constructions::grenet(m, !args.raw_sign)?,
            _ => constructions::build(c, m)?,
        };
        if args.pretty {
            p.pretty()
        } else {
            json::export_json(&p) + "\n"
        }
    };
    match args.output {
        Some(path) => fs::write(&path, text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(Outcome::Pass)
}
