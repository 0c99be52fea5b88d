use serde::Serialize;
use serde_json::{Map, Value};
use wpcurve::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StageStatus {
    Ok,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub name: String,
    pub status: StageStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

/// Command record: per-stage status plus named results. Once a stage fails
/// the remaining ones are recorded as skipped.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub command: String,
    pub stages: Vec<Stage>,
    pub results: Map<String, Value>,
    #[serde(skip)]
    pub error: Option<Error>,
}

impl Summary {
    pub fn new(command: &str) -> Self {
        Summary { command: command.into(), stages: Vec::new(), results: Map::new(), error: None }
    }

    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Option<T> {
        if self.error.is_some() {
            self.stages.push(Stage { name: name.into(), status: StageStatus::Skipped, message: None });
            return None;
        }
        match f() {
            Ok(v) => {
                self.stages.push(Stage { name: name.into(), status: StageStatus::Ok, message: None });
                Some(v)
            }
            Err(e) => {
                self.stages.push(Stage {
                    name: name.into(),
                    status: StageStatus::Failed,
                    message: Some(e.to_string()),
                });
                self.error = Some(e);
                None
            }
        }
    }

    pub fn put<T: Serialize>(&mut self, key: &str, value: T) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.results.insert(key.into(), v);
    }
}
