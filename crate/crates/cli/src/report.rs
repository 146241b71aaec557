use serde_json::{Map, Value};

/// `{command, config, payload, version}` with keys in that order. Numbers
/// are written as decimal strings.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub config: Map<String, Value>,
    pub payload: Value,
}

impl Report {
    pub fn render(&self) -> String {
        let mut top = Map::new();
        top.insert("command".into(), Value::String(self.command.clone()));
        top.insert("config".into(), Value::Object(self.config.clone()));
        top.insert("payload".into(), self.payload.clone());
        top.insert(
            "version".into(),
            Value::String(concat!("selfsim ", env!("CARGO_PKG_VERSION")).into()),
        );
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("report serializes");
        s.push('\n');
        s
    }
}

/// A number as a decimal string.
pub fn num(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

pub fn nums<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(num).collect())
}
