//! Certificate text format.
//!
//! ```text
//! # free text
//! instance n=21 r=2
//! provenance constructed-strict
//! tool antichain-0.1.0
//! levels 2 3 4
//! set 1 2
//! set 1 3
//! end
//! ```
//!
//! Any number of blocks per file. Elements are one-based and strictly
//! increasing, fields are separated by one space, lines end in LF. The
//! `provenance` and `tool` lines are optional; a missing provenance reads
//! as `external`. Parsing is strict: anything else is an error.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::bounds::{construction_applicability, level_cap, Applicability};
use crate::construct::{build_construction, Tier};
use crate::error::{Error, Result};
use crate::family::{Family, GroundSize, SubsetCode};
use crate::search::{feasible_exact_profile, Outcome, ProfileInstance, SearchBudget};
use crate::TOOL_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ConstructedStrict,
    ConstructedRelaxed,
    Search,
    External,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ConstructedStrict => "constructed-strict",
            Provenance::ConstructedRelaxed => "constructed-relaxed",
            Provenance::Search => "search",
            Provenance::External => "external",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "constructed-strict" => Provenance::ConstructedStrict,
            "constructed-relaxed" => Provenance::ConstructedRelaxed,
            "search" => Provenance::Search,
            "external" => Provenance::External,
            _ => return Err(format!("unknown provenance `{s}`")),
        })
    }
}

impl From<Tier> for Provenance {
    fn from(tier: Tier) -> Self {
        match tier {
            Tier::Strict => Provenance::ConstructedStrict,
            Tier::Relaxed => Provenance::ConstructedRelaxed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub r: usize,
    /// Claimed occurring levels, increasing.
    pub levels: Vec<usize>,
    pub provenance: Provenance,
    pub tool_version: Option<String>,
    pub family: Family,
    /// Comment lines without the leading `# `.
    pub comments: Vec<String>,
}

impl Certificate {
    /// Claims exactly the levels `family` occupies.
    pub fn new(family: Family, r: usize, provenance: Provenance) -> Self {
        Certificate {
            r,
            levels: family.level_profile().occurring(),
            provenance,
            tool_version: Some(TOOL_VERSION.to_string()),
            family,
            comments: Vec::new(),
        }
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comments.push(comment.into());
        self
    }

    pub fn n(&self) -> u32 {
        self.family.ground().get()
    }

    /// Header claims agree with the body and every field is printable.
    pub fn check(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::HeaderMismatch("r must be at least 1".into()));
        }
        let occurring = self.family.level_profile().occurring();
        if self.levels != occurring {
            return Err(Error::HeaderMismatch(format!(
                "claimed levels {:?}, body occupies {:?}",
                self.levels, occurring
            )));
        }
        if let Some(c) = self.comments.iter().find(|c| c.contains(['\n', '\r'])) {
            return Err(Error::HeaderMismatch(format!("comment {c:?} spans lines")));
        }
        if let Some(v) = &self.tool_version {
            if !valid_word(v) {
                return Err(Error::HeaderMismatch(format!(
                    "tool version {v:?} is not one word"
                )));
            }
        }
        Ok(())
    }
}

fn valid_word(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_graphic())
}

/// The exact text `write_certificate` emits.
pub fn to_text(c: &Certificate) -> Result<String> {
    c.check()?;
    let mut out = String::new();
    for comment in &c.comments {
        if comment.is_empty() {
            out.push_str("#\n");
        } else {
            out.push_str("# ");
            out.push_str(comment);
            out.push('\n');
        }
    }
    out.push_str(&format!("instance n={} r={}\n", c.n(), c.r));
    out.push_str(&format!("provenance {}\n", c.provenance));
    if let Some(v) = &c.tool_version {
        out.push_str(&format!("tool {v}\n"));
    }
    out.push_str("levels");
    for t in &c.levels {
        out.push_str(&format!(" {t}"));
    }
    out.push('\n');
    for s in c.family.members() {
        out.push_str("set");
        for e in s.elements() {
            out.push_str(&format!(" {e}"));
        }
        out.push('\n');
    }
    out.push_str("end\n");
    Ok(out)
}

/// Refuses certificates whose header contradicts the body. Returns bytes written.
pub fn write_certificate<W: Write>(c: &Certificate, mut out: W) -> Result<usize> {
    let text = to_text(c)?;
    out.write_all(text.as_bytes())?;
    Ok(text.len())
}

pub fn write_certificates<W: Write>(certs: &[Certificate], mut out: W) -> Result<usize> {
    let mut text = String::new();
    for c in certs {
        text.push_str(&to_text(c)?);
    }
    out.write_all(text.as_bytes())?;
    Ok(text.len())
}

/// Exactly one block.
pub fn read_certificate(text: &str) -> Result<Certificate> {
    let mut certs = parse_certificates(text)?;
    match certs.len() {
        1 => Ok(certs.pop().unwrap()),
        k => Err(Error::Parse {
            line: 1,
            reason: format!("expected one certificate, found {k}"),
        }),
    }
}

pub fn read_certificate_file(path: &Path) -> Result<Vec<Certificate>> {
    let bytes = fs::read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::Parse {
        line: 1 + bytes[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count(),
        reason: "not UTF-8".into(),
    })?;
    parse_certificates(text)
}

fn perr(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

/// Decimal without sign or leading zeros.
fn number<T: FromStr>(line: usize, s: &str) -> Result<T> {
    let ok =
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if !ok {
        return Err(perr(line, format!("`{s}` is not a plain decimal number")));
    }
    s.parse()
        .map_err(|_| perr(line, format!("`{s}` is out of range")))
}

fn keyed<T: FromStr>(line: usize, field: &str, key: &str) -> Result<T> {
    match field.strip_prefix(key).and_then(|f| f.strip_prefix('=')) {
        Some(v) => number(line, v),
        None => Err(perr(
            line,
            format!("expected `{key}=<int>`, found `{field}`"),
        )),
    }
}

#[derive(PartialEq)]
enum Expect {
    Instance,
    Provenance,
    Tool,
    Levels,
    Body,
}

struct Block {
    ground: GroundSize,
    r: usize,
    provenance: Option<Provenance>,
    tool_version: Option<String>,
    levels: Vec<usize>,
    members: Vec<SubsetCode>,
    seen: BTreeSet<u64>,
    comments: Vec<String>,
}

pub fn parse_certificates(text: &str) -> Result<Vec<Certificate>> {
    let mut certs = Vec::new();
    let mut comments = Vec::new();
    let mut block: Option<Block> = None;
    let mut expect = Expect::Instance;
    let mut line_no = 0;

    if !text.is_empty() && !text.ends_with('\n') {
        let last = text.split('\n').count();
        return Err(perr(last, "missing final newline"));
    }
    for line in text.split_terminator('\n') {
        line_no += 1;
        if line.contains('\r') {
            return Err(perr(line_no, "carriage return"));
        }
        if line.is_empty() {
            return Err(perr(line_no, "blank line"));
        }
        if line.starts_with('#') {
            if expect != Expect::Instance {
                return Err(perr(line_no, "comment inside a block"));
            }
            match line {
                "#" => comments.push(String::new()),
                _ => match line.strip_prefix("# ") {
                    Some(c) => comments.push(c.to_string()),
                    None => return Err(perr(line_no, "comments start with `# `")),
                },
            }
            continue;
        }
        if line.starts_with(' ') || line.ends_with(' ') || line.contains("  ") {
            return Err(perr(line_no, "fields must be separated by single spaces"));
        }
        let mut fields = line.split(' ');
        let directive = fields.next().unwrap_or_default();
        let rest: Vec<&str> = fields.collect();

        match (directive, &expect) {
            ("instance", Expect::Instance) => {
                let [nf, rf] = rest[..] else {
                    return Err(perr(line_no, "expected `instance n=<int> r=<int>`"));
                };
                let n: u32 = keyed(line_no, nf, "n")?;
                let r: usize = keyed(line_no, rf, "r")?;
                let ground = GroundSize::new(n).map_err(|e| perr(line_no, e.to_string()))?;
                if r == 0 {
                    return Err(perr(line_no, "r must be at least 1"));
                }
                block = Some(Block {
                    ground,
                    r,
                    provenance: None,
                    tool_version: None,
                    levels: Vec::new(),
                    members: Vec::new(),
                    seen: BTreeSet::new(),
                    comments: std::mem::take(&mut comments),
                });
                expect = Expect::Provenance;
            }
            ("provenance", Expect::Provenance) => {
                let b = block.as_mut().unwrap();
                let [tag] = rest[..] else {
                    return Err(perr(line_no, "expected `provenance <tag>`"));
                };
                b.provenance = Some(tag.parse().map_err(|e: String| perr(line_no, e))?);
                expect = Expect::Tool;
            }
            ("tool", Expect::Provenance | Expect::Tool) => {
                let b = block.as_mut().unwrap();
                let [v] = rest[..] else {
                    return Err(perr(line_no, "expected `tool <version>`"));
                };
                if !valid_word(v) {
                    return Err(perr(line_no, "tool version must be printable ASCII"));
                }
                b.tool_version = Some(v.to_string());
                expect = Expect::Levels;
            }
            ("levels", Expect::Provenance | Expect::Tool | Expect::Levels) => {
                let b = block.as_mut().unwrap();
                let n = b.ground.get() as usize;
                for f in rest {
                    let t: usize = number(line_no, f)?;
                    if t > n {
                        return Err(perr(line_no, format!("level {t} exceeds n = {n}")));
                    }
                    if b.levels.last().is_some_and(|&prev| prev >= t) {
                        return Err(perr(line_no, "levels must be strictly increasing"));
                    }
                    b.levels.push(t);
                }
                expect = Expect::Body;
            }
            ("set", Expect::Body) => {
                let b = block.as_mut().unwrap();
                let n = b.ground.get();
                let mut bits = 0u64;
                let mut prev = 0u32;
                for f in rest {
                    let e: u32 = number(line_no, f)?;
                    if e == 0 {
                        return Err(perr(line_no, "elements are one-based"));
                    }
                    if e > n {
                        return Err(perr(line_no, format!("element {e} exceeds n = {n}")));
                    }
                    if e == prev {
                        return Err(perr(line_no, format!("repeated element {e}")));
                    }
                    if e < prev {
                        return Err(perr(line_no, "elements must be strictly increasing"));
                    }
                    prev = e;
                    bits |= 1 << (e - 1);
                }
                if !b.seen.insert(bits) {
                    return Err(perr(line_no, "repeated set"));
                }
                b.members.push(SubsetCode::from_raw(bits));
            }
            ("end", Expect::Body) => {
                let b = block.take().unwrap();
                if !rest.is_empty() {
                    return Err(perr(line_no, "`end` takes no fields"));
                }
                let family =
                    Family::new(b.ground, b.members).map_err(|e| perr(line_no, e.to_string()))?;
                let cert = Certificate {
                    r: b.r,
                    levels: b.levels,
                    provenance: b.provenance.unwrap_or(Provenance::External),
                    tool_version: b.tool_version,
                    family,
                    comments: b.comments,
                };
                let occurring = cert.family.level_profile().occurring();
                if occurring != cert.levels {
                    return Err(Error::HeaderMismatch(format!(
                        "block ending on line {line_no}: claimed levels {:?}, body occupies {:?}",
                        cert.levels, occurring
                    )));
                }
                certs.push(cert);
                expect = Expect::Instance;
            }
            ("instance" | "provenance" | "tool" | "levels" | "set" | "end", _) => {
                return Err(perr(line_no, format!("`{directive}` out of place")));
            }
            _ => {
                let shown: String = directive.chars().take(32).collect();
                return Err(perr(line_no, format!("unknown directive `{shown}`")));
            }
        }
    }
    if expect != Expect::Instance {
        return Err(perr(line_no + 1, "unterminated block"));
    }
    if !comments.is_empty() {
        return Err(perr(line_no, "comment after the last block"));
    }
    Ok(certs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub antichain: bool,
    pub multiplicity_ok: bool,
    pub levels: BTreeMap<usize, usize>,
    pub num_levels: usize,
    pub matches_claim: bool,
    pub g_bound_consistent: bool,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.matches_claim && self.g_bound_consistent
    }
}

/// Recomputes everything from the body; the provenance tag is ignored.
pub fn verify_certificate(c: &Certificate) -> VerificationReport {
    let profile = c.family.level_profile();
    let antichain = c.family.is_antichain();
    let multiplicity_ok = c.r >= 1 && profile.counts().values().all(|&k| k >= c.r);
    let num_levels = profile.num_levels();
    let matches_claim = antichain && multiplicity_ok && profile.occurring() == c.levels;
    let cap = level_cap(c.n(), c.r.min(u32::MAX as usize) as u32) as usize;
    VerificationReport {
        antichain,
        multiplicity_ok,
        levels: profile.counts().clone(),
        num_levels,
        matches_claim,
        g_bound_consistent: num_levels <= cap,
    }
}

#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub r2: std::ops::RangeInclusive<u32>,
    pub r3: std::ops::RangeInclusive<u32>,
    /// Values of `r` for the `n = 2r + 5` file.
    pub plus5: std::ops::RangeInclusive<u32>,
    /// Per-instance search budget.
    pub budget: SearchBudget,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            r2: 4..=21,
            r3: 9..=24,
            plus5: 4..=4,
            budget: SearchBudget::seconds(60),
        }
    }
}

impl CorpusConfig {
    pub fn heavy() -> Self {
        CorpusConfig {
            plus5: 4..=11,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusMethod {
    ConstructedStrict,
    ConstructedRelaxed,
    Search,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusStatus {
    Certified,
    Infeasible,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifestEntry {
    pub file: String,
    pub n: u32,
    pub r: u32,
    pub levels: Vec<usize>,
    pub method: CorpusMethod,
    pub status: CorpusStatus,
    pub nodes: u64,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BudgetSummary {
    pub max_nodes: Option<u64>,
    pub wall_secs: Option<f64>,
    pub threads: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub budget: BudgetSummary,
    pub files: Vec<String>,
    pub entries: Vec<ManifestEntry>,
    /// `(r, n)` pairs left undecided.
    pub unknown: Vec<(u32, u32)>,
}

/// One certificate for `(n, r)` at levels `2..=n-2`, by construction when it
/// applies and by search otherwise.
fn certify_instance(n: u32, r: u32, budget: &SearchBudget) -> (Option<Certificate>, ManifestEntry) {
    let start = Instant::now();
    let levels: Vec<usize> = (2..=n as usize - 2).collect();
    let mut entry = ManifestEntry {
        file: String::new(),
        n,
        r,
        levels: levels.clone(),
        method: CorpusMethod::Search,
        status: CorpusStatus::Unknown,
        nodes: 0,
        elapsed_ms: 0,
    };
    let cert = match construction_applicability(n, r) {
        Applicability::Strict(_) | Applicability::Relaxed(_) => {
            let c = build_construction(n, r).expect("applicable construction builds");
            entry.method = match c.tier() {
                Tier::Strict => CorpusMethod::ConstructedStrict,
                Tier::Relaxed => CorpusMethod::ConstructedRelaxed,
            };
            let tier = c.tier();
            let comment = format!("construction, n = {n}, r = {r}");
            Some(Certificate::new(c.family, r as usize, tier.into()).with_comment(comment))
        }
        Applicability::Inapplicable(_) => {
            let inst = ProfileInstance::new(n, r as usize, levels).expect("levels lie in 2..=n-2");
            let out = feasible_exact_profile(&inst, budget);
            entry.nodes = out.stats.nodes;
            match out.outcome {
                Outcome::Feasible(f) => {
                    let comment = format!("exact-profile search, {} nodes", out.stats.nodes);
                    Some(Certificate::new(f, r as usize, Provenance::Search).with_comment(comment))
                }
                Outcome::Infeasible => {
                    entry.status = CorpusStatus::Infeasible;
                    None
                }
                Outcome::Unknown => None,
            }
        }
    };
    if let Some(c) = &cert {
        let report = verify_certificate(c);
        assert!(
            report.all_ok(),
            "corpus certificate for ({n}, {r}) failed: {report:?}"
        );
        entry.status = CorpusStatus::Certified;
    }
    entry.elapsed_ms = start.elapsed().as_millis() as u64;
    (cert, entry)
}

/// Writes the three corpus files and `manifest.json` into `dir`.
pub fn regenerate_corpus(dir: &Path, config: &CorpusConfig) -> Result<Manifest> {
    fs::create_dir_all(dir)?;
    let mut groups: Vec<(String, Vec<(u32, u32)>)> = Vec::new();
    if !config.r2.is_empty() {
        groups.push((
            format!("r2_n_{}_to_{}.txt", config.r2.start(), config.r2.end()),
            config.r2.clone().map(|n| (n, 2)).collect(),
        ));
    }
    if !config.r3.is_empty() {
        groups.push((
            format!("r3_n_{}_to_{}.txt", config.r3.start(), config.r3.end()),
            config.r3.clone().map(|n| (n, 3)).collect(),
        ));
    }
    if !config.plus5.is_empty() {
        groups.push((
            format!(
                "2r_plus_5_r_{}_to_{}.txt",
                config.plus5.start(),
                config.plus5.end()
            ),
            config.plus5.clone().map(|r| (2 * r + 5, r)).collect(),
        ));
    }
    for (_, instances) in &groups {
        if let Some(&(n, r)) = instances
            .iter()
            .find(|&&(n, r)| !(4..=64).contains(&n) || r < 1)
        {
            return Err(Error::Domain(format!("corpus instance n = {n}, r = {r}")));
        }
    }

    let mut manifest = Manifest {
        tool: TOOL_VERSION.to_string(),
        budget: BudgetSummary {
            max_nodes: config.budget.max_nodes,
            wall_secs: config.budget.wall_time.map(|d| d.as_secs_f64()),
            threads: config.budget.threads,
        },
        files: Vec::new(),
        entries: Vec::new(),
        unknown: Vec::new(),
    };
    for (name, instances) in groups {
        let mut certs = Vec::new();
        for (n, r) in instances {
            let (cert, mut entry) = certify_instance(n, r, &config.budget);
            if let Some(c) = cert {
                entry.file = name.clone();
                certs.push(c);
            }
            if entry.status == CorpusStatus::Unknown {
                manifest.unknown.push((r, n));
            }
            manifest.entries.push(entry);
        }
        let path: PathBuf = dir.join(&name);
        write_certificates(&certs, fs::File::create(&path)?)?;
        manifest.files.push(name);
    }
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join("manifest.json"), json + "\n")?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Certificate {
        let f = Family::from_sets(3, &[vec![1], vec![2]]).unwrap();
        Certificate::new(f, 2, Provenance::External)
    }

    #[test]
    fn body_lines() {
        let text = to_text(&small()).unwrap();
        let body: Vec<&str> = text.lines().filter(|l| l.starts_with("set")).collect();
        assert_eq!(body, ["set 1", "set 2"]);
        assert!(text.starts_with("instance n=3 r=2\nprovenance external\n"));
        assert!(text.ends_with("levels 1\nset 1\nset 2\nend\n"));
    }

    #[test]
    fn round_trip_21_2() {
        let c = build_construction(21, 2).unwrap();
        let tier = c.tier();
        let cert = Certificate::new(c.family, 2, tier.into()).with_comment("r = 2");
        let text = to_text(&cert).unwrap();
        let back = read_certificate(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(to_text(&back).unwrap(), text);
        let report = verify_certificate(&back);
        assert!(report.all_ok());
        assert_eq!(report.num_levels, 18);
    }

    #[test]
    fn header_gate() {
        let mut c = small();
        c.levels = vec![1, 2];
        let mut buf = Vec::new();
        assert!(matches!(
            write_certificate(&c, &mut buf),
            Err(Error::HeaderMismatch(_))
        ));
        assert!(buf.is_empty());
    }

    fn line_of(text: &str) -> usize {
        match parse_certificates(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn strict_parse() {
        let ok = "instance n=3 r=1\nlevels 2\nset 1 2\nend\n";
        assert_eq!(
            parse_certificates(ok).unwrap()[0].provenance,
            Provenance::External
        );
        assert_eq!(line_of("instance n=3 r=1\nlevels 2\nset 0 2\nend\n"), 3);
        assert_eq!(line_of("instance n=3 r=1\nlevels 2\nset 1 1\nend\n"), 3);
        assert_eq!(line_of("instance n=3 r=1\nlevels 2\nset 2 1\nend\n"), 3);
        assert_eq!(line_of("instance n=3 r=1\nlevels 2\nset 1 4\nend\n"), 3);
        assert_eq!(line_of("instance n=3 r=1\nlevels 2\nset 01 2\nend\n"), 3);
        assert_eq!(line_of("instance n=3 r=1\nlevels 2\nset 1  2\nend\n"), 3);
        assert_eq!(line_of("instance n=3 r=1\nlevel 2\nset 1 2\nend\n"), 2);
        assert_eq!(line_of("instance n=3 r=1\nlevels 2\nset 1 2\n"), 4);
        assert_eq!(line_of("instance n=3 r=1\r\nlevels 2\nset 1 2\nend\n"), 1);
        assert_eq!(line_of("instance n=3 r=1\nlevels 2\nset 1 2\nend"), 4);
        assert_eq!(line_of("instance n=65 r=1\nlevels\nend\n"), 1);
        assert_eq!(line_of("instance n=3 r=0\nlevels\nend\n"), 1);
        assert_eq!(
            line_of("instance n=3 r=1\nlevels 2\nset 1 2\nset 1 2\nend\n"),
            4
        );
        assert_eq!(
            line_of("instance n=3 r=1\nlevels 2\n# x\nset 1 2\nend\n"),
            3
        );
        assert_eq!(line_of("#x\ninstance n=3 r=1\nlevels\nend\n"), 1);
        assert_eq!(line_of("instance n=3 r=1\nlevels\nend\n# x\n"), 4);
        assert_eq!(
            line_of("instance n=3 r=1\ntool a\nprovenance search\nlevels\nend\n"),
            3
        );
        assert_eq!(
            line_of("instance n=3 r=1\nprovenance guess\nlevels\nend\n"),
            2
        );
    }

    #[test]
    fn header_mismatch_on_read() {
        let text = "instance n=3 r=1\nlevels 1\nset 1 2\nend\n";
        assert!(matches!(
            parse_certificates(text),
            Err(Error::HeaderMismatch(_))
        ));
    }

    #[test]
    fn multiple_blocks_and_comments() {
        let text =
            "# first\n#\ninstance n=4 r=1\nprovenance search\ntool x-1\nlevels 0\nset\nend\n\
                    instance n=2 r=2\nlevels 1\nset 1\nset 2\nend\n";
        let certs = parse_certificates(text).unwrap();
        assert_eq!(certs.len(), 2);
        assert_eq!(certs[0].comments, ["first", ""]);
        assert_eq!(certs[0].tool_version.as_deref(), Some("x-1"));
        assert_eq!(certs[1].tool_version, None);
        assert!(parse_certificates("").unwrap().is_empty());
        let mut again = Vec::new();
        write_certificates(&certs, &mut again).unwrap();
        let again = String::from_utf8(again).unwrap();
        assert_eq!(parse_certificates(&again).unwrap(), certs);
    }

    #[test]
    fn verification_failures() {
        // one set short on a level holding exactly r
        let c = build_construction(21, 2).unwrap();
        let level2 = c.family.level(2);
        assert_eq!(level2.len(), 2);
        let dropped = level2[0];
        let rest = c.family.members().iter().copied().filter(|&s| s != dropped);
        let f = Family::new(c.family.ground(), rest).unwrap();
        let report = verify_certificate(&Certificate::new(f, 2, Provenance::External));
        assert!(report.antichain);
        assert!(!report.multiplicity_ok);
        assert!(!report.matches_claim);

        // n - 2 levels on n = 4
        let f = Family::from_sets(4, &[vec![1], vec![2, 3]]).unwrap();
        let report = verify_certificate(&Certificate::new(f, 2, Provenance::External));
        assert_eq!(report.num_levels, 2);
        assert!(!report.g_bound_consistent);

        // claim differs from body
        let mut cert = small();
        cert.levels = vec![2];
        assert!(!verify_certificate(&cert).matches_claim);
    }
}
