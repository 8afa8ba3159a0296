use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "reeb-kit-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A step that cannot be checked numerically. It is listed, not verified,
    /// and does not fail the report.
    Assumed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    pub claim: String,
    pub expected: Value,
    pub computed: Value,
    pub tolerance: Option<f64>,
    pub status: Status,
    /// `false` only for failed records.
    pub pass: bool,
    pub detail: Value,
}

impl Record {
    pub fn new(
        name: &str,
        claim: &str,
        expected: Value,
        computed: Value,
        tolerance: Option<f64>,
        ok: bool,
    ) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self {
            name: name.into(),
            claim: claim.into(),
            expected,
            computed,
            tolerance,
            status,
            pass: ok,
            detail: Value::Null,
        }
    }

    pub fn assumed(name: &str, claim: &str, detail: &str) -> Self {
        Self {
            name: name.into(),
            claim: claim.into(),
            expected: Value::Null,
            computed: Value::Null,
            tolerance: None,
            status: Status::Assumed,
            pass: true,
            detail: Value::String(detail.into()),
        }
    }

    /// A sub-check that could not be carried out.
    pub fn error(name: &str, claim: &str, expected: Value, error: impl ToString) -> Self {
        let mut r = Self::new(name, claim, expected, Value::Null, None, false);
        r.detail = serde_json::json!({ "error": error.to_string() });
        r
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub pass: bool,
    pub config: Value,
    pub provenance: Value,
    pub records: Vec<Record>,
}

impl VerificationReport {
    pub fn new(config: Value, provenance: Value, records: Vec<Record>) -> Self {
        let pass = records.iter().all(|r| r.pass);
        Self {
            schema: SCHEMA,
            pass,
            config,
            provenance,
            records,
        }
    }

    pub fn record(&self, name: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per record, for stderr.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let tag = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Assumed => "assumed",
            };
            out.push_str(&format!("{tag:>7}  {}\n", r.name));
        }
        let failed = self.failed().count();
        out.push_str(&format!(
            "{} records, {failed} failed: {}\n",
            self.records.len(),
            if self.pass { "PASS" } else { "FAIL" }
        ));
        out
    }
}
