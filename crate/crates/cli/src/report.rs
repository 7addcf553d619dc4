use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn from_pass(pass: bool) -> Status {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// What a command prints: JSON under `--json`, `text` otherwise.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub details: Value,
    #[serde(skip)]
    pub text: String,
}

impl Report {
    pub fn new(command: &str, status: Status, details: impl Serialize, text: String) -> Report {
        Report {
            command: command.to_string(),
            status,
            details: serde_json::to_value(details).expect("report details serialize"),
            text,
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            s
        } else {
            let mut s = self.text.clone();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s.push_str(&format!("status: {}\n", serde_json::to_value(self.status).unwrap().as_str().unwrap()));
            s
        }
    }
}
