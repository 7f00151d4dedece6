// SPDX-License-Identifier: Apache-2.0

//! Batch front end: one command per invocation, JSON on stdin (or `--in`),
//! JSON on stdout. Exit codes: 0 ok, 1 malformed input, 2 verification
//! failure, 64 usage error.

use std::io::Read;
use std::path::PathBuf;

use clap::Parser;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cremona_core::cremona::{base_forest, homaloidal_type, predicted_composition_degree};
use cremona_core::exact::HomPoly;
use cremona_core::sarkisov::{factorize, jonquieres_centers, run as replay};
use cremona_core::threefold::{self, QuarticData};
use cremona_core::{Config, CremonaMap, CurvePoint, Error, HomaloidalType, SarkisovTrace, WeierstrassCurve};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const COMMANDS: [&str; 10] = [
    "curve-add",
    "translate",
    "compose",
    "dec-check",
    "base-forest",
    "noether",
    "factorize",
    "vp-verify",
    "jonquieres",
    "threefold-check",
];

pub const USAGE: &str = "\
usage: cremona <command> [--config <path>] [--seed <int>] [--json] [--trace-file <path>] [--in <path>]

commands:
  curve-add        {curve, P, Q}                 -> {sum}
  translate        {curve, P}                    -> {map, type, notation}
  compose          {outer, inner} | {curve, P, Q} -> {degree, ...}
  dec-check        {map, curve | cubic [, generator]} -> {preserves, sampled}
  base-forest      {map [, curve | cubic]}       -> {forest, type, notation, noether}
  noether          {d, mults}                    -> {notation, noether, de_jonquieres}
  factorize        {map, curve | cubic}          -> one JSON link per line
  vp-verify        {trace | map, curve | cubic [, assert_dec]} -> {verified, ...}
  jonquieres       {map, curve | cubic}          -> {convention, grouped, blocks, centers}
  threefold-check  {A, B, C} | {}                -> report

curve = {\"p\": \"num/den\", \"q\": \"num/den\"} for y^2 = x^3 + p x + q; points are
{\"x\": .., \"y\": ..} or \"O\"; maps are {\"deg\": d, \"components\": [poly, poly, poly]}.
";

#[derive(Parser, Debug)]
#[command(name = "cremona", disable_help_flag = true, disable_version_flag = true)]
struct Flags {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON output; the only format, accepted for compatibility.
    #[arg(long)]
    json: bool,
    #[arg(long = "trace-file")]
    trace_file: Option<PathBuf>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn fail(code: i32, msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Output { stdout: String::new(), stderr, code }
    }
}

enum Failure {
    Malformed(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Verification(_) | Error::Stuck(_) | Error::StepCap(_) => Failure::Verify(e.to_string()),
            _ => Failure::Malformed(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Malformed(format!("malformed input: {e}"))
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// Runs `command` with `args` (flags only); input is read from `stdin`
/// unless `--in` is given.
pub fn run<S: AsRef<str>>(command: &str, args: &[S], stdin: &mut dyn Read) -> Output {
    if command == "help" || command == "--help" || command == "-h" {
        return Output::ok(USAGE.to_string());
    }
    if !COMMANDS.contains(&command) {
        return Output::fail(EXIT_USAGE, format!("unknown command {command:?}\n{USAGE}"));
    }
    let argv = std::iter::once("cremona").chain(args.iter().map(|a| a.as_ref()));
    let flags = match Flags::try_parse_from(argv) {
        Ok(f) => f,
        Err(e) => return Output::fail(EXIT_USAGE, format!("{e}\n{USAGE}")),
    };
    match dispatch(command, &flags, stdin) {
        Ok(out) => out,
        Err(Failure::Malformed(m)) => Output::fail(EXIT_MALFORMED, m),
        Err(Failure::Verify(m)) => Output::fail(EXIT_VERIFY, m),
    }
}

/// Entry point for a full argument vector (program name excluded).
pub fn run_argv<S: AsRef<str>>(argv: &[S], stdin: &mut dyn Read) -> Output {
    match argv.split_first() {
        Some((cmd, rest)) => run(cmd.as_ref(), rest, stdin),
        None => Output::fail(EXIT_USAGE, USAGE),
    }
}

fn config(flags: &Flags) -> Res<Config> {
    let mut cfg = match &flags.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Malformed(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text)?
        }
        None => Config::default(),
    };
    if let Some(s) = flags.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn read_input(flags: &Flags, stdin: &mut dyn Read) -> Res<String> {
    match &flags.input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Malformed(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| Failure::Malformed(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn parse<T: DeserializeOwned>(text: &str) -> Res<T> {
    Ok(serde_json::from_str(text)?)
}

fn line(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("results serialize") + "\n"
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveWire {
    p: String,
    q: String,
}

impl CurveWire {
    /// Goes through the constructor so singular curves are rejected.
    fn build(&self) -> Res<WeierstrassCurve> {
        let p = cremona_core::exact::parse_rational(&self.p)?;
        let q = cremona_core::exact::parse_rational(&self.q)?;
        Ok(WeierstrassCurve::new(p, q)?)
    }
}

fn on_curve(c: &WeierstrassCurve, pt: &CurvePoint) -> Res<()> {
    if !c.contains(pt) {
        return Err(Error::NotOnCurve.into());
    }
    Ok(())
}

/// A plane cubic given either as a Weierstrass curve or as a ternary form.
#[derive(Deserialize)]
struct CubicInput {
    curve: Option<CurveWire>,
    cubic: Option<HomPoly>,
}

impl CubicInput {
    fn get(&self) -> Res<Option<HomPoly>> {
        match (&self.curve, &self.cubic) {
            (Some(_), Some(_)) => Err(Failure::Malformed("give either curve or cubic, not both".into())),
            (Some(c), None) => Ok(Some(c.build()?.equation())),
            (None, Some(f)) => Ok(Some(f.clone())),
            (None, None) => Ok(None),
        }
    }

    fn require(&self) -> Res<HomPoly> {
        self.get()?.ok_or_else(|| Failure::Malformed("missing curve or cubic".into()))
    }
}

fn dispatch(command: &str, flags: &Flags, stdin: &mut dyn Read) -> Res<Output> {
    let cfg = config(flags)?;
    let text = read_input(flags, stdin)?;
    match command {
        "curve-add" => curve_add(&text),
        "translate" => translate(&text),
        "compose" => compose(&text),
        "dec-check" => dec_check(&text, &cfg),
        "base-forest" => forest(&text, &cfg),
        "noether" => noether(&text),
        "factorize" => factorize_cmd(&text, &cfg, flags),
        "vp-verify" => vp_verify(&text, &cfg),
        "jonquieres" => jonquieres(&text, &cfg),
        "threefold-check" => threefold_check(&text, &cfg),
        _ => unreachable!("command list checked by the caller"),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurvePoints {
    curve: CurveWire,
    #[serde(rename = "P")]
    p: CurvePoint,
    #[serde(rename = "Q")]
    q: Option<CurvePoint>,
}

fn curve_add(text: &str) -> Res<Output> {
    let inp: CurvePoints = parse(text)?;
    let c = inp.curve.build()?;
    let q = inp.q.ok_or_else(|| Failure::Malformed("missing Q".into()))?;
    on_curve(&c, &inp.p)?;
    on_curve(&c, &q)?;
    Ok(Output::ok(line(&json!({ "sum": c.add(&inp.p, &q)? }))))
}

fn translate(text: &str) -> Res<Output> {
    let inp: CurvePoints = parse(text)?;
    if inp.q.is_some() {
        return Err(Failure::Malformed("translate takes a single point P".into()));
    }
    let c = inp.curve.build()?;
    on_curve(&c, &inp.p)?;
    let f = c.translation_map(&inp.p)?;
    let ty = if f.degree() == 1 { HomaloidalType::new(1, vec![]) } else { homaloidal_type(&f)? };
    Ok(Output::ok(line(&json!({ "map": f, "type": ty, "notation": ty.to_string() }))))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ComposeInput {
    Maps {
        outer: CremonaMap,
        inner: CremonaMap,
    },
    Translations {
        curve: CurveWire,
        #[serde(rename = "P")]
        p: CurvePoint,
        #[serde(rename = "Q")]
        q: CurvePoint,
    },
}

fn compose(text: &str) -> Res<Output> {
    match parse::<ComposeInput>(text)? {
        ComposeInput::Maps { outer, inner } => {
            let h = outer.compose(&inner)?;
            Ok(Output::ok(line(&json!({ "degree": h.degree(), "map": h }))))
        }
        ComposeInput::Translations { curve, p, q } => {
            // φ_Q ∘ φ_P, against the degree predicted from the two base
            // forests (φ_P⁻¹ = φ_{⊖P}) and the degree of φ_{P⊕Q}.
            let c = curve.build()?;
            on_curve(&c, &p)?;
            on_curve(&c, &q)?;
            let (fp, fq) = (c.translation_map(&p)?, c.translation_map(&q)?);
            let h = fq.compose(&fp)?;
            let predicted = if fp.degree() > 1 && fq.degree() > 1 {
                Some(predicted_composition_degree(&c.translation_map(&c.neg(&p)?)?, &fq)?)
            } else {
                None
            };
            let sum = c.translation_map(&c.add(&p, &q)?)?;
            Ok(Output::ok(line(&json!({
                "degree": h.degree(),
                "predicted_degree": predicted,
                "sum_degree": sum.degree(),
                "map": h,
            }))))
        }
    }
}

#[derive(Deserialize)]
struct MapCubic {
    map: CremonaMap,
    #[serde(flatten)]
    cubic: CubicInput,
    generator: Option<CurvePoint>,
    assert_dec: Option<bool>,
}

fn dec_check(text: &str, cfg: &Config) -> Res<Output> {
    let inp: MapCubic = parse(text)?;
    let cubic = inp.cubic.require()?;
    let preserves = inp.map.preserves_curve(&cubic)?;
    // The sampled test needs a Weierstrass curve and a point of infinite order.
    let sampled = match (&inp.cubic.curve, &inp.generator) {
        (Some(cw), Some(g)) => {
            let c = cw.build()?;
            on_curve(&c, g)?;
            let pts: Vec<_> = c.sample_points(g, cfg.sample_count, &[])?.iter().map(|p| p.to_projective()).collect();
            Some(inp.map.is_in_dec(&cubic, &pts)?)
        }
        (None, Some(_)) => return Err(Failure::Malformed("generator needs a Weierstrass curve".into())),
        _ => None,
    };
    Ok(Output::ok(line(&json!({ "preserves": preserves, "sampled": sampled }))))
}

fn forest(text: &str, cfg: &Config) -> Res<Output> {
    let inp: MapCubic = parse(text)?;
    let cubic = inp.cubic.get()?;
    let f = base_forest(&inp.map, cubic.as_ref(), None, &mut cfg.rng())?;
    let ty = HomaloidalType::new(inp.map.degree(), f.mults());
    Ok(Output::ok(line(&json!({ "forest": f, "type": ty, "notation": ty.to_string(), "noether": ty.noether_check() }))))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoetherInput {
    d: u32,
    mults: Vec<u32>,
}

fn noether(text: &str) -> Res<Output> {
    let inp: NoetherInput = parse(text)?;
    let t = HomaloidalType::new(inp.d, inp.mults);
    Ok(Output::ok(line(&json!({
        "notation": t.to_string(),
        "noether": t.noether_check(),
        "de_jonquieres": t.is_de_jonquieres(),
    }))))
}

fn trace_for(inp: &MapCubic, cfg: &Config) -> Res<SarkisovTrace> {
    Ok(factorize(&inp.map, &inp.cubic.require()?, cfg)?)
}

fn factorize_cmd(text: &str, cfg: &Config, flags: &Flags) -> Res<Output> {
    let inp: MapCubic = parse(text)?;
    let t = trace_for(&inp, cfg)?;
    if let Some(p) = &flags.trace_file {
        let full = serde_json::to_string_pretty(&t).expect("traces serialize") + "\n";
        std::fs::write(p, full).map_err(|e| Failure::Malformed(format!("{}: {e}", p.display())))?;
    }
    let mut out = Output::ok(t.json_lines());
    for l in &t.lints {
        out.stderr.push_str(&format!("lint: {l}\n"));
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceInput {
    trace: SarkisovTrace,
    assert_dec: Option<bool>,
}

fn vp_verify(text: &str, cfg: &Config) -> Res<Output> {
    let value: Value = parse(text)?;
    let (trace, asserted, replayed) = if value.get("trace").is_some() {
        // A recorded trace is replayed from its initial state and must match.
        let inp: TraceInput = serde_json::from_value(value)?;
        let again = replay(inp.trace.initial.clone(), inp.trace.in_dec, cfg.step_cap)?;
        let same = again.links == inp.trace.links && again.states == inp.trace.states && again.all_vp == inp.trace.all_vp;
        (inp.trace, inp.assert_dec, Some(same))
    } else {
        let inp: MapCubic = serde_json::from_value(value)?;
        let t = trace_for(&inp, cfg)?;
        (t, inp.assert_dec, None)
    };
    let asserted = asserted.unwrap_or(trace.in_dec == Some(true));
    let non_vp: Vec<usize> = trace.links.iter().enumerate().filter(|(_, l)| !l.vp).map(|(i, _)| i).collect();
    let verified = replayed != Some(false) && !(asserted && !non_vp.is_empty());
    let report = json!({
        "verified": verified,
        "all_vp": trace.all_vp,
        "in_dec": trace.in_dec,
        "dec_asserted": asserted,
        "replay_matches": replayed,
        "links": trace.links.len(),
        "non_vp": non_vp,
    });
    let mut out = Output::ok(line(&report));
    if !verified {
        out.code = EXIT_VERIFY;
        out.stderr = if replayed == Some(false) {
            "recorded trace differs from its replay\n".into()
        } else {
            format!("Dec membership asserted but links {non_vp:?} are not volume preserving\n")
        };
    }
    Ok(out)
}

fn jonquieres(text: &str, cfg: &Config) -> Res<Output> {
    let inp: MapCubic = parse(text)?;
    let t = trace_for(&inp, cfg)?;
    Ok(Output::ok(line(&jonquieres_centers(&t))))
}

fn threefold_check(text: &str, cfg: &Config) -> Res<Output> {
    let q = if text.trim().is_empty() || parse::<Value>(text)? == json!({}) {
        QuarticData::desk_instance()
    } else {
        parse::<QuarticData>(text)?
    };
    let r = threefold::check(&q, &mut cfg.rng())?;
    let ok = r.involution && r.preserves_quartic && r.base_lines.len() == 6 && r.bs_not_in_quartic;
    let mut out = Output::ok(line(&r));
    if !ok {
        out.code = EXIT_VERIFY;
        out.stderr = "threefold checks failed\n".into();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(cmd: &str, args: &[&str], input: &str) -> Output {
        run(cmd, args, &mut input.as_bytes())
    }

    #[test]
    fn unknown_command_prints_usage() {
        let o = go("frobnicate", &[], "");
        assert_eq!(o.code, EXIT_USAGE);
        assert!(o.stderr.contains("usage: cremona"));
    }

    #[test]
    fn bad_flag_is_a_usage_error() {
        assert_eq!(go("noether", &["--bogus"], "").code, EXIT_USAGE);
    }

    #[test]
    fn noether_round_trip() {
        let o = go("noether", &[], r#"{"d": 4, "mults": [3, 1, 1, 1, 1, 1, 1]}"#);
        assert_eq!(o.code, 0);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["noether"], true);
        assert_eq!(v["de_jonquieres"], true);
    }

    #[test]
    fn malformed_json_exits_one() {
        assert_eq!(go("noether", &[], "{").code, EXIT_MALFORMED);
        assert_eq!(go("curve-add", &[], r#"{"curve": {"p": "0", "q": "0"}, "P": "O", "Q": "O"}"#).code, EXIT_MALFORMED);
    }

    #[test]
    fn config_is_validated() {
        let dir = std::env::temp_dir().join(format!("cremona-cli-cfg-{}", std::process::id()));
        std::fs::write(&dir, r#"{"sample_count": 1}"#).unwrap();
        let o = go("noether", &["--config", dir.to_str().unwrap()], r#"{"d": 1, "mults": []}"#);
        std::fs::remove_file(&dir).ok();
        assert_eq!(o.code, EXIT_MALFORMED);
    }
}
