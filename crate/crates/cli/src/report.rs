//! Line-delimited JSON reports and the human summary.

use std::collections::BTreeMap;
use std::io::Write;

use jetlie_core::{CheckOutcome, Verdict};
use jetlie_kernel::Point;
use serde::Serialize;

pub const FLOW_SIGN: &str = "generator = -(d/dp) at p = 0";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Pass,
    Fail,
}

/// What a check saw, before comparing with what it expected.
#[derive(Clone, Debug, Default)]
pub struct Observation {
    pub holds: bool,
    pub detail: String,
    pub residual: Option<String>,
    pub witness: Option<BTreeMap<String, String>>,
    pub value: Option<String>,
}

fn witness_map(pt: &Point) -> BTreeMap<String, String> {
    pt.iter().map(|(s, q)| (s.name().to_string(), q.to_string())).collect()
}

impl Observation {
    pub fn holds(detail: impl Into<String>) -> Self {
        Observation {
            holds: true,
            detail: detail.into(),
            ..Default::default()
        }
    }

    pub fn fails(detail: impl Into<String>) -> Self {
        Observation {
            holds: false,
            detail: detail.into(),
            ..Default::default()
        }
    }

    pub fn check(ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            Self::holds(detail)
        } else {
            Self::fails(detail)
        }
    }

    pub fn from_verdict(v: &Verdict, detail: impl Into<String>) -> Self {
        match v {
            Verdict::Pass => Self::holds(detail),
            Verdict::Fail { residual, witness, value } => Observation {
                holds: false,
                detail: detail.into(),
                residual: Some(residual.to_string()),
                witness: Some(witness_map(witness)),
                value: Some(value.to_string()),
            },
        }
    }

    /// Holds when every outcome passes; otherwise reports the first failure.
    pub fn from_outcomes(outs: &[CheckOutcome]) -> Self {
        match outs.iter().find(|o| !o.passed()) {
            None => {
                let mut fields: Vec<&str> = Vec::new();
                let mut targets: Vec<&str> = Vec::new();
                for o in outs {
                    if !fields.contains(&o.field.as_str()) {
                        fields.push(&o.field);
                    }
                    if !targets.contains(&o.target.as_str()) {
                        targets.push(&o.target);
                    }
                }
                Self::holds(format!("{} annihilated by {}", targets.join(", "), fields.join(", ")))
            }
            Some(o) => Self::from_verdict(&o.verdict, format!("{} does not annihilate {}", o.field, o.target)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub record: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub flow_sign: &'static str,
}

impl Header {
    pub fn new(command: &str, seed: u64) -> Self {
        Header {
            record: "header",
            tool: "jetlie",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            flow_sign: FLOW_SIGN,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub record: &'static str,
    pub id: String,
    pub group: String,
    pub criteria: Vec<u8>,
    pub description: String,
    pub expected: Expect,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    /// Wall time; kept out of the structured report so that reruns compare equal.
    #[serde(skip)]
    pub millis: u128,
}

impl CheckRecord {
    pub fn new(id: &str, group: &str, description: &str, expected: Expect, obs: Observation) -> Self {
        let matches = obs.holds == (expected == Expect::Pass);
        CheckRecord {
            record: "check",
            id: id.to_string(),
            group: group.to_string(),
            criteria: Vec::new(),
            description: description.to_string(),
            expected,
            status: if matches { Status::Pass } else { Status::Fail },
            detail: obs.detail,
            residual: obs.residual,
            witness: obs.witness,
            value: obs.value,
            millis: 0,
        }
    }

    pub fn error(id: &str, group: &str, description: &str, expected: Expect, msg: String) -> Self {
        CheckRecord {
            record: "check",
            id: id.to_string(),
            group: group.to_string(),
            criteria: Vec::new(),
            description: description.to_string(),
            expected,
            status: Status::Error,
            detail: msg,
            residual: None,
            witness: None,
            value: None,
            millis: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
struct Summary {
    record: &'static str,
    pass: usize,
    fail: usize,
    error: usize,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub header: Header,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            header: Header::new(command, seed),
            checks: Vec::new(),
        }
    }

    fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    /// 2 on any error, else 1 on any failure, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Error) > 0 {
            2
        } else if self.count(Status::Fail) > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        out.push_str(&line(&self.header));
        out.push('\n');
        for c in &self.checks {
            out.push_str(&line(c));
            out.push('\n');
        }
        let summary = Summary {
            record: "summary",
            pass: self.count(Status::Pass),
            fail: self.count(Status::Fail),
            error: self.count(Status::Error),
        };
        out.push_str(&line(&summary));
        out.push('\n');
        out
    }

    pub fn write_human(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "jetlie {} | seed {} | {}", self.header.command, self.header.seed, FLOW_SIGN)?;
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS ",
                Status::Fail => "FAIL ",
                Status::Error => "ERROR",
            };
            let exp = if c.expected == Expect::Fail { " (expected not to hold)" } else { "" };
            writeln!(w, "{} {}{} [{} ms] {}", tag, c.id, exp, c.millis, c.detail)?;
            if c.status != Status::Pass {
                if let Some(r) = &c.residual {
                    writeln!(w, "      residual: {}", r)?;
                }
                if let Some(wt) = &c.witness {
                    let pts: Vec<String> = wt.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
                    writeln!(w, "      witness: {}", pts.join(", "))?;
                }
            }
        }
        writeln!(
            w,
            "{} passed, {} failed, {} errors",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Error)
        )
    }
}

fn line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report records serialize")
}
