//! Command-line front end. Every subcommand delegates to one library
//! operation and prints a deterministic text report.
//!
//! Exit policy: status 0 covers both success and report-level FAIL lines
//! (scripts read those from the report); nonzero status means a tool error
//! (bad arguments, parse failure, or an operation error), printed as
//! `error[CODE]: message`.

use crate::deform::{self, Direction};
use crate::diagram::CylinderDiagram;
use crate::fixtures;
use crate::flow;
use crate::format::{self, parse_scalar_literal};
use crate::relations;
use crate::render::render_svg;
use crate::scalar::FieldScalar;
use crate::surgery;
use crate::trace::diagram_hash;
use std::fmt::Write as _;
use std::str::FromStr;

const USAGE: &str = "\
cyldeck <command> [args] [flags]

commands:
  validate <surface>                structural checks, genus, zero orders
  stratum <surface>                 zero orders and genus
  graph <surface>                   cylinder adjacencies and distances
  moduli <surface>                  circumference, height, modulus table
  eta <surface>                     rel-direction signs from graph parity
  deform <surface> --time T         move along the rel direction
  collapse <surface> --direction D  move to the first collapse
  continue <surface> --direction D --time U
                                    collapse, then continue through it
  subclasses <surface> --direction D
                                    the three sub-equivalence classes
  perturb <surface>                 small move making moduli ratios irrational
  simultaneous <surface>            both-direction collapse report
  relations <surface>               relation spaces of moduli and 1/lengths
  facts2 <surface>                  the twisted-relation identity checks
  standard-position <surface> --saddle S [--direction D]
                                    align a saddle over its involution image
  vertical <surface> [--budget N]   vertical cylinder decomposition
  rotate <surface> [--budget N]     rotate a vertically periodic surface
  classify <surface> [--direction D]
                                    saddle lengths by bordering class
  alternation <surface> [--direction D]
                                    boundary-word alternation check
  cover-check <X> <Y> <assignment>  verify a branched covering
  render <surface>                  SVG picture on stdout
  fixture <NAME>                    print a shipped surface file
  batch <surface>...                validate many files concurrently

flags:
  --format text|svg   output format where applicable (default text)
  --direction +|-     motion direction (default -)
  --time LITERAL      field scalar literal, e.g. 1/2 or -1+3/2r2
  --budget N          separatrix crossing budget (default 100000)
  --seed N            seed echoed into reports for randomized harnesses
  --saddle S          saddle label

surfaces may be file paths or shipped fixture names (TORUS, MNEMONIC,
QUAD3, DOUBLED, BC2, NONALT). CYLDECK_COLOR=1 colorizes PASS/FAIL lines.
";

struct Flags {
    format: String,
    direction: Direction,
    time: Option<FieldScalar>,
    budget: usize,
    saddle: Option<String>,
    seed: u64,
    color: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            format: "text".into(),
            direction: Direction::Minus,
            time: None,
            budget: 100_000,
            saddle: None,
            seed: 0,
            color: std::env::var("CYLDECK_COLOR").map(|v| v == "1").unwrap_or(false),
        }
    }
}

fn pass_fail(flags: &Flags, ok: bool) -> String {
    match (ok, flags.color) {
        (true, true) => "\x1b[32mPASS\x1b[0m".into(),
        (false, true) => "\x1b[31mFAIL\x1b[0m".into(),
        (true, false) => "PASS".into(),
        (false, false) => "FAIL".into(),
    }
}

#[derive(Debug)]
struct CliError {
    code: &'static str,
    message: String,
}

impl CliError {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

type CliResult = Result<String, CliError>;

fn load_surface(path: &str) -> Result<CylinderDiagram, CliError> {
    if let Some(d) = fixtures::by_name(path) {
        return Ok(d);
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new("E-IO", format!("{path}: {e}")))?;
    format::parse_surface(&text).map_err(|e| CliError::new("E-PARSE", format!("{path}: {e}")))
}

fn eta_of(d: &CylinderDiagram) -> Result<deform::EtaVector, CliError> {
    deform::build_eta(d).map_err(|e| CliError::new("E-ETA", e.to_string()))
}

fn parse_flags(args: &[String]) -> Result<(Vec<String>, Flags), CliError> {
    let mut flags = Flags::default();
    let mut positional = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let a = args[i].clone();
        let take_value = |i: &mut usize| -> Result<String, CliError> {
            *i += 1;
            args.get(*i)
                .cloned()
                .ok_or_else(|| CliError::new("E-ARGS", format!("flag {a} needs a value")))
        };
        match args[i].as_str() {
            "--format" => flags.format = take_value(&mut i)?,
            "--direction" => {
                let v = take_value(&mut i)?;
                flags.direction =
                    Direction::from_str(&v).map_err(|e| CliError::new("E-ARGS", e))?;
            }
            "--time" => {
                let v = take_value(&mut i)?;
                flags.time =
                    Some(parse_scalar_literal(&v).map_err(|e| CliError::new("E-ARGS", e))?);
            }
            "--budget" => {
                let v = take_value(&mut i)?;
                flags.budget = v
                    .parse()
                    .map_err(|_| CliError::new("E-ARGS", "bad --budget"))?;
            }
            "--seed" => {
                let v = take_value(&mut i)?;
                flags.seed = v.parse().map_err(|_| CliError::new("E-ARGS", "bad --seed"))?;
            }
            "--saddle" => flags.saddle = Some(take_value(&mut i)?),
            other if other.starts_with("--") => {
                return Err(CliError::new("E-ARGS", format!("unknown flag {other}")))
            }
            _ => positional.push(args[i].clone()),
        }
        i += 1;
    }
    Ok((positional, flags))
}

fn cmd_validate(d: &CylinderDiagram, flags: &Flags) -> CliResult {
    let report = d.validate();
    let mut out = String::new();
    writeln!(out, "validation: {}", pass_fail(flags, report.is_valid())).unwrap();
    for v in &report.violations {
        writeln!(out, "  violation: {v}").unwrap();
    }
    if let Some(g) = report.genus {
        writeln!(out, "genus: {g}").unwrap();
        if report.zero_orders.is_empty() {
            writeln!(out, "singularities: none (torus)").unwrap();
        } else {
            let orders: Vec<String> = report.zero_orders.iter().map(|k| k.to_string()).collect();
            writeln!(out, "zero orders: ({})", orders.join(",")).unwrap();
        }
        writeln!(out, "connected: {}", report.connected).unwrap();
    }
    Ok(out)
}

fn cmd_stratum(d: &CylinderDiagram) -> CliResult {
    let report = d.validate();
    if !report.is_valid() {
        return Err(CliError::new("E-INVALID", "surface fails validation"));
    }
    let (orders, genus) = d.stratum();
    let mut out = String::new();
    let text: Vec<String> = orders.iter().map(|k| k.to_string()).collect();
    writeln!(
        out,
        "stratum: H({})",
        if text.is_empty() { "-".into() } else { text.join(",") }
    )
    .unwrap();
    writeln!(out, "genus: {genus}").unwrap();
    Ok(out)
}

fn cmd_graph(d: &CylinderDiagram) -> CliResult {
    let g = d.cylinder_graph();
    let mut out = String::new();
    writeln!(out, "vertices: {}", g.vertex_ids.join(" ")).unwrap();
    for (&(a, b), labels) in &g.edges {
        writeln!(
            out,
            "edge {} -- {} via {}",
            g.vertex_ids[a],
            g.vertex_ids[b],
            labels.join(",")
        )
        .unwrap();
    }
    for i in 0..g.vertex_ids.len() {
        for j in (i + 1)..g.vertex_ids.len() {
            if let Some(dd) = g.distance(i, j) {
                writeln!(out, "d({}, {}) = {dd}", g.vertex_ids[i], g.vertex_ids[j]).unwrap();
            }
        }
    }
    Ok(out)
}

fn cmd_moduli(d: &CylinderDiagram) -> CliResult {
    let mut out = String::new();
    writeln!(out, "id circumference height modulus").unwrap();
    for (c, (circ, h, m)) in d.cylinders.iter().zip(d.moduli()) {
        writeln!(out, "{} {} {} {}", c.id, circ, h, m).unwrap();
    }
    writeln!(out, "area: {}", d.area()).unwrap();
    Ok(out)
}

fn cmd_eta(d: &CylinderDiagram) -> CliResult {
    let eta = eta_of(d)?;
    let mut out = String::new();
    let q: Vec<String> = eta
        .cylinder_ids
        .iter()
        .zip(&eta.signs)
        .map(|(id, s)| format!("{id}={}", if *s > 0 { "+1" } else { "-1" }))
        .collect();
    writeln!(out, "q: {}", q.join(" ")).unwrap();
    let terms: Vec<String> = eta
        .cylinder_ids
        .iter()
        .zip(&eta.signs)
        .map(|(id, s)| format!("{}{}*", if *s > 0 { "+" } else { "-" }, id))
        .collect();
    writeln!(out, "eta = i({}) up to global sign", terms.join(" ")).unwrap();
    writeln!(out, "base: {}", eta.base).unwrap();
    Ok(out)
}

fn cmd_deform(d: &CylinderDiagram, flags: &Flags) -> CliResult {
    let t = flags
        .time
        .clone()
        .ok_or_else(|| CliError::new("E-ARGS", "deform needs --time"))?;
    let eta = eta_of(d)?;
    let moved = deform::apply_twist(d, &eta.as_twist_vector(), &t)
        .map_err(|e| CliError::new("E-DEFORM", e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "moved along eta by {t}").unwrap();
    for c in &moved.cylinders {
        writeln!(out, "height {} = {}", c.id, c.height).unwrap();
    }
    writeln!(out, "hash: {:016x}", diagram_hash(&moved)).unwrap();
    out.push_str(&format::write_surface(&moved));
    Ok(out)
}

fn cmd_collapse(d: &CylinderDiagram, flags: &Flags) -> CliResult {
    let eta = eta_of(d)?;
    let event = surgery::move_until_collapse(d, &eta, flags.direction)
        .map_err(|e| CliError::new("E-COLLAPSE", e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "t* = {}", event.time).unwrap();
    writeln!(out, "collapsed: {}", event.collapsed.join(" ")).unwrap();
    writeln!(out, "result: {} cylinders", event.resulting.cylinders.len()).unwrap();
    writeln!(out, "hash: {:016x}", diagram_hash(&event.resulting)).unwrap();
    out.push_str(&format::write_surface(&event.resulting));
    Ok(out)
}

fn cmd_continue(d: &CylinderDiagram, flags: &Flags) -> CliResult {
    let u = flags
        .time
        .clone()
        .ok_or_else(|| CliError::new("E-ARGS", "continue needs --time"))?;
    let eta = eta_of(d)?;
    let event = surgery::move_until_collapse(d, &eta, flags.direction)
        .map_err(|e| CliError::new("E-COLLAPSE", e.to_string()))?;
    let moved = surgery::continue_through_collapse(&event, flags.direction, &u)
        .map_err(|e| CliError::new("E-CONTINUE", e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "t* = {}; continued {u} beyond the collapse", event.time).unwrap();
    writeln!(out, "result: {} cylinders", moved.cylinders.len()).unwrap();
    writeln!(out, "hash: {:016x}", diagram_hash(&moved)).unwrap();
    out.push_str(&format::write_surface(&moved));
    Ok(out)
}

fn cmd_subclasses(d: &CylinderDiagram, flags: &Flags) -> CliResult {
    let eta = eta_of(d)?;
    let p = deform::partition_subequivalence(d, &eta, flags.direction)
        .map_err(|e| CliError::new("E-PARTITION", e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "A1: {}", p.a1.join(" ")).unwrap();
    writeln!(out, "A2: {}", p.a2.join(" ")).unwrap();
    writeln!(out, "A3: {}", p.a3.join(" ")).unwrap();
    for (i, h) in p.class_heights.iter().enumerate() {
        if let Some(h) = h {
            writeln!(out, "height A{}: {h}", i + 1).unwrap();
        }
    }
    writeln!(out, "verification: {}", pass_fail(flags, p.verified())).unwrap();
    for fail in &p.verification_failures {
        writeln!(out, "  {fail}").unwrap();
    }
    Ok(out)
}

fn cmd_perturb(d: &CylinderDiagram) -> CliResult {
    let eta = eta_of(d)?;
    let mut out = String::new();
    match deform::perturb_along_eta(d, &eta)
        .map_err(|e| CliError::new("E-PERTURB", e.to_string()))?
    {
        deform::PerturbOutcome::Unchanged => {
            writeln!(out, "already satisfies the irrational-ratio condition (t = 0)").unwrap();
        }
        deform::PerturbOutcome::Perturbed { time, diagram } => {
            writeln!(out, "moved by t = {time}").unwrap();
            writeln!(out, "hash: {:016x}", diagram_hash(&diagram)).unwrap();
            out.push_str(&format::write_surface(&diagram));
        }
        deform::PerturbOutcome::AlreadyDegenerate { pair } => {
            writeln!(
                out,
                "degenerate: {} and {} keep a rational modulus ratio for every rational time",
                pair.0, pair.1
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn cmd_simultaneous(d: &CylinderDiagram, flags: &Flags) -> CliResult {
    let eta = eta_of(d)?;
    let r = deform::check_simultaneous_collapse(d, &eta);
    let mut out = String::new();
    for (name, dc) in [("+", &r.plus), ("-", &r.minus)] {
        writeln!(
            out,
            "direction {name}: contracting {{{}}} simultaneous: {}",
            dc.contracting.join(" "),
            dc.simultaneous
        )
        .unwrap();
    }
    writeln!(
        out,
        "no arithmetic-type obstruction: {}",
        pass_fail(flags, !r.obstruction)
    )
    .unwrap();
    Ok(out)
}

fn cmd_relations(d: &CylinderDiagram) -> CliResult {
    let moduli: Vec<FieldScalar> = d.cylinders.iter().map(|c| c.modulus()).collect();
    let w = relations::relation_space(&moduli, relations::RelationSource::Moduli)
        .map_err(|e| CliError::new("E-RELATIONS", e.to_string()))?;
    let recips: Vec<FieldScalar> = d
        .cylinders
        .iter()
        .map(|c| c.circumference().inv().expect("positive"))
        .collect();
    let u = relations::relation_space(&recips, relations::RelationSource::ReciprocalLengths)
        .map_err(|e| CliError::new("E-RELATIONS", e.to_string()))?;
    let a = relations::arithmeticity_diagnostic(d);
    let mut out = String::new();
    writeln!(out, "moduli {w}").unwrap();
    writeln!(out, "reciprocal-lengths {u}").unwrap();
    writeln!(
        out,
        "reciprocal span dimension: {} ({})",
        a.reciprocal_span_dim,
        if a.arithmetic_type {
            "arithmetic-type"
        } else {
            "nonarithmetic-compatible"
        }
    )
    .unwrap();
    Ok(out)
}

fn cmd_facts2(d: &CylinderDiagram, flags: &Flags) -> CliResult {
    let eta = eta_of(d)?;
    let report = relations::verify_facts2(d, &eta)
        .map_err(|e| CliError::new("E-FACTS2", e.to_string()))?;
    let mut out = String::new();
    writeln!(
        out,
        "(i) coordinate model dimension 2: {}",
        pass_fail(flags, report.dim_ok)
    )
    .unwrap();
    writeln!(
        out,
        "(ii) memberships (moduli, signed reciprocals): {} {}",
        pass_fail(flags, report.membership_moduli),
        pass_fail(flags, report.membership_signed_reciprocals)
    )
    .unwrap();
    writeln!(
        out,
        "(iii) twisted-relation identity: {}",
        pass_fail(flags, report.twisted_match)
    )
    .unwrap();
    writeln!(out, "overall: {}", pass_fail(flags, report.pass())).unwrap();
    Ok(out)
}

fn cmd_standard_position(d: &CylinderDiagram, flags: &Flags) -> CliResult {
    let saddle = flags
        .saddle
        .clone()
        .ok_or_else(|| CliError::new("E-ARGS", "standard-position needs --saddle"))?;
    let eta = eta_of(d)?;
    let sp = deform::standard_position(d, &eta, flags.direction, &saddle)
        .map_err(|e| CliError::new("E-STDPOS", e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "aligned saddle {saddle}; shear parameter alpha = {}", sp.alpha).unwrap();
    writeln!(
        out,
        "vertical witness: circumference {} height {}",
        sp.witness.circumference, sp.witness.height
    )
    .unwrap();
    let profile: Vec<String> = sp
        .witness
        .crossing_profile
        .iter()
        .map(|(id, n)| format!("{id}:{n}"))
        .collect();
    writeln!(out, "crossings: {}", profile.join(" ")).unwrap();
    writeln!(out, "hash: {:016x}", diagram_hash(&sp.diagram)).unwrap();
    out.push_str(&format::write_surface(&sp.diagram));
    Ok(out)
}

fn cmd_vertical(d: &CylinderDiagram, flags: &Flags) -> CliResult {
    let dec = flow::vertical_decomposition(d, flags.budget)
        .map_err(|e| CliError::new("E-VERTICAL", e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "vertical cylinders: {}", dec.cylinders.len()).unwrap();
    for (i, v) in dec.cylinders.iter().enumerate() {
        let profile: Vec<String> = v
            .crossing_profile
            .iter()
            .map(|(id, n)| format!("{id}:{n}"))
            .collect();
        writeln!(
            out,
            "V{i}: circumference {} height {} crossings {}",
            v.circumference,
            v.height,
            profile.join(" ")
        )
        .unwrap();
    }
    let classes = flow::vertical_subequivalence_classes(&dec);
    writeln!(out, "vertical sub-equivalence classes: {}", classes.len()).unwrap();
    Ok(out)
}

fn cmd_rotate(d: &CylinderDiagram, flags: &Flags) -> CliResult {
    let dec = flow::vertical_decomposition(d, flags.budget)
        .map_err(|e| CliError::new("E-VERTICAL", e.to_string()))?;
    let rotated = flow::rotate_vertical(d, &dec);
    let mut out = String::new();
    writeln!(out, "rotated: {} cylinders", rotated.cylinders.len()).unwrap();
    writeln!(out, "hash: {:016x}", diagram_hash(&rotated)).unwrap();
    out.push_str(&format::write_surface(&rotated));
    Ok(out)
}

fn cmd_classify(d: &CylinderDiagram, flags: &Flags) -> CliResult {
    let eta = eta_of(d)?;
    let p = deform::partition_subequivalence(d, &eta, flags.direction)
        .map_err(|e| CliError::new("E-PARTITION", e.to_string()))?;
    let classes = flow::classify_saddle_lengths(d, &p)
        .map_err(|e| CliError::new("E-CLASSIFY", e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "ell = {} ({} saddles)", classes.ell, classes.ell_saddles.len()).unwrap();
    writeln!(out, "x = {} ({} saddles)", classes.x, classes.x_saddles.len()).unwrap();
    writeln!(out, "ell saddles: {}", classes.ell_saddles.join(" ")).unwrap();
    writeln!(out, "x saddles: {}", classes.x_saddles.join(" ")).unwrap();
    if classes.arithmetic_degenerate {
        writeln!(
            out,
            "warning: ell/x is rational (arithmetic-type surface); the clean split needs a quadratic ratio"
        )
        .unwrap();
    }
    Ok(out)
}

fn cmd_alternation(d: &CylinderDiagram, flags: &Flags) -> CliResult {
    let eta = eta_of(d)?;
    let p = deform::partition_subequivalence(d, &eta, flags.direction)
        .map_err(|e| CliError::new("E-PARTITION", e.to_string()))?;
    let report = flow::check_alternation(d, &p);
    let mut out = String::new();
    writeln!(out, "alternation: {}", pass_fail(flags, report.ok())).unwrap();
    for (id, side, word) in &report.violations {
        let w: Vec<String> = word.iter().map(|c| format!("A{c}")).collect();
        writeln!(out, "  violation: {id} {side} word ({})", w.join(",")).unwrap();
    }
    Ok(out)
}

fn parse_assignment(text: &str) -> Result<crate::cover::TileAssignment, CliError> {
    let mut assignment = crate::cover::TileAssignment::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        // map <xcyl> <ycyl> <count> <offset as scalar5>
        if tokens.len() != 9 || tokens[0] != "map" {
            return Err(CliError::new(
                "E-PARSE",
                format!("assignment line {}: want 'map X Y count a b c d e'", i + 1),
            ));
        }
        let count: usize = tokens[3].parse().map_err(|_| {
            CliError::new("E-PARSE", format!("assignment line {}: bad count", i + 1))
        })?;
        let offset = parse_scalar5_tokens(&tokens[4..9])
            .map_err(|e| CliError::new("E-PARSE", format!("assignment line {}: {e}", i + 1)))?;
        assignment.insert(
            tokens[1].to_string(),
            crate::cover::TileSpec {
                quotient_id: tokens[2].to_string(),
                count,
                offset,
            },
        );
    }
    Ok(assignment)
}

fn parse_scalar5_tokens(tokens: &[&str]) -> Result<FieldScalar, String> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    if tokens.len() != 5 {
        return Err("scalar wants 5 integers".into());
    }
    let mut ints = Vec::new();
    for t in tokens {
        ints.push(t.parse::<BigInt>().map_err(|_| format!("bad integer {t}"))?);
    }
    let d: u64 = ints[4].to_string().parse().map_err(|_| "bad discriminant")?;
    let a = BigRational::new(ints[0].clone(), ints[1].clone());
    let b = BigRational::new(ints[2].clone(), ints[3].clone());
    FieldScalar::try_new(a, b, d).map_err(|e| e.to_string())
}

/// Canonical serialization of a cover witness, re-verifiable bit-exactly.
pub fn write_witness(witness: &crate::cover::CoverWitness) -> String {
    let mut out = String::new();
    writeln!(out, "degree {}", witness.degree).unwrap();
    let mut keys: Vec<&String> = witness.assignment.keys().collect();
    keys.sort();
    for k in keys {
        let spec = &witness.assignment[k];
        writeln!(
            out,
            "map {} {} {} {}",
            k,
            spec.quotient_id,
            spec.count,
            format::scalar5(&spec.offset)
        )
        .unwrap();
    }
    let mut orders = witness.branch_orders.clone();
    orders.sort();
    for (up, down, local) in orders {
        writeln!(out, "branch order {up} over {down} local degree {local}").unwrap();
    }
    out.push_str(&format::write_surface(&witness.quotient));
    out
}

fn cmd_cover_check(paths: &[String], flags: &Flags) -> CliResult {
    if paths.len() != 3 {
        return Err(CliError::new("E-ARGS", "cover-check wants <X> <Y> <assignment>"));
    }
    let x = load_surface(&paths[0])?;
    let y = load_surface(&paths[1])?;
    let text = std::fs::read_to_string(&paths[2])
        .map_err(|e| CliError::new("E-IO", format!("{}: {e}", paths[2])))?;
    let assignment = parse_assignment(&text)?;
    match crate::cover::verify_cover(&x, &y, &assignment) {
        Ok(witness) => {
            let mut out = String::new();
            writeln!(out, "cover: {}", pass_fail(flags, true)).unwrap();
            out.push_str(&write_witness(&witness));
            Ok(out)
        }
        Err(e) => {
            // Verification failures are report-level, not tool errors.
            let mut out = String::new();
            writeln!(out, "cover: {}", pass_fail(flags, false)).unwrap();
            writeln!(out, "  {e}").unwrap();
            Ok(out)
        }
    }
}

fn cmd_batch(paths: &[String], flags: &Flags) -> CliResult {
    // Independent validations run concurrently; output is assembled in
    // input order.
    let handles: Vec<std::thread::JoinHandle<(String, String)>> = paths
        .iter()
        .map(|p| {
            let p = p.clone();
            let color = flags.color;
            std::thread::spawn(move || {
                let flags = Flags { color, ..Flags::default() };
                let text = match load_surface(&p) {
                    Ok(d) => cmd_validate(&d, &flags)
                        .unwrap_or_else(|e| format!("error[{}]: {}\n", e.code, e.message)),
                    Err(e) => format!("error[{}]: {}\n", e.code, e.message),
                };
                (p, text)
            })
        })
        .collect();
    let mut out = String::new();
    for h in handles {
        let (p, text) = h.join().expect("batch worker");
        writeln!(out, "== {p} ==").unwrap();
        out.push_str(&text);
    }
    Ok(out)
}

/// Run a command line; report text goes to `out`. Returns the exit status.
pub fn run(args: &[String], out: &mut String) -> i32 {
    let (positional, flags) = match parse_flags(args) {
        Ok(v) => v,
        Err(e) => {
            out.push_str(&format!("error[{}]: {}\n", e.code, e.message));
            return 2;
        }
    };
    if positional.is_empty() {
        out.push_str(USAGE);
        return 2;
    }
    let command = positional[0].as_str();
    let rest = &positional[1..];
    let need_surface = |rest: &[String]| -> Result<CylinderDiagram, CliError> {
        let path = rest
            .first()
            .ok_or_else(|| CliError::new("E-ARGS", format!("{command} needs a surface")))?;
        load_surface(path)
    };
    // Seed is accepted everywhere for harness uniformity; nothing in the
    // present commands draws randomness.
    let _ = flags.seed;
    let result: CliResult = match command {
        "help" | "--help" => Ok(USAGE.to_string()),
        "validate" => need_surface(rest).and_then(|d| cmd_validate(&d, &flags)),
        "stratum" => need_surface(rest).and_then(|d| cmd_stratum(&d)),
        "graph" => need_surface(rest).and_then(|d| cmd_graph(&d)),
        "moduli" => need_surface(rest).and_then(|d| cmd_moduli(&d)),
        "eta" => need_surface(rest).and_then(|d| cmd_eta(&d)),
        "deform" => need_surface(rest).and_then(|d| cmd_deform(&d, &flags)),
        "collapse" => need_surface(rest).and_then(|d| cmd_collapse(&d, &flags)),
        "continue" => need_surface(rest).and_then(|d| cmd_continue(&d, &flags)),
        "subclasses" => need_surface(rest).and_then(|d| cmd_subclasses(&d, &flags)),
        "perturb" => need_surface(rest).and_then(|d| cmd_perturb(&d)),
        "simultaneous" => need_surface(rest).and_then(|d| cmd_simultaneous(&d, &flags)),
        "relations" => need_surface(rest).and_then(|d| cmd_relations(&d)),
        "facts2" => need_surface(rest).and_then(|d| cmd_facts2(&d, &flags)),
        "standard-position" => {
            need_surface(rest).and_then(|d| cmd_standard_position(&d, &flags))
        }
        "vertical" => need_surface(rest).and_then(|d| cmd_vertical(&d, &flags)),
        "rotate" => need_surface(rest).and_then(|d| cmd_rotate(&d, &flags)),
        "classify" => need_surface(rest).and_then(|d| cmd_classify(&d, &flags)),
        "alternation" => need_surface(rest).and_then(|d| cmd_alternation(&d, &flags)),
        "cover-check" => cmd_cover_check(rest, &flags),
        "render" => need_surface(rest).and_then(|d| match flags.format.as_str() {
            "svg" | "text" => Ok(render_svg(&d)),
            other => Err(CliError::new("E-ARGS", format!("unknown format {other}"))),
        }),
        "fixture" => rest
            .first()
            .and_then(|n| fixtures::by_name(n))
            .map(|d| format::write_surface(&d))
            .ok_or_else(|| {
                CliError::new(
                    "E-ARGS",
                    format!(
                        "unknown fixture; choose from {}",
                        fixtures::FIXTURE_NAMES.join(" ")
                    ),
                )
            }),
        "batch" => cmd_batch(rest, &flags),
        other => Err(CliError::new("E-ARGS", format!("unknown command {other:?}"))),
    };
    match result {
        Ok(text) => {
            out.push_str(&text);
            0
        }
        Err(e) => {
            out.push_str(&format!("error[{}]: {}\n", e.code, e.message));
            2
        }
    }
}

/// Binary entry point.
pub fn run_main() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut out = String::new();
    let status = run(&args, &mut out);
    print!("{out}");
    status
}
