use coverdeg::io::SCHEMA_VERSION;
use coverdeg::rational::{format_rational, Rational};
use toml::{Table, Value};

/// A report table whose keys keep insertion order.
pub struct Report(Table);

impl Report {
    pub fn new(command: &str) -> Self {
        let mut t = Table::new();
        t.insert("schema_version".into(), Value::Integer(i64::from(SCHEMA_VERSION)));
        t.insert("command".into(), Value::String(command.into()));
        Report(t)
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.into(), value.into());
        self
    }

    /// Embeds any serializable value as a sub-table.
    pub fn embed<T: serde::Serialize>(&mut self, key: &str, value: &T) -> &mut Self {
        let v = Value::try_from(value).expect("report sections serialize");
        self.0.insert(key.into(), v);
        self
    }

    pub fn finish(self) -> String {
        toml::to_string(&self.0).expect("report serializes")
    }
}

pub fn rationals(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(format_rational(x))).collect())
}

pub fn ints<T: Copy + Into<i64>>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::Integer(x.into())).collect())
}

pub fn table(entries: Vec<(&str, Value)>) -> Value {
    Value::Table(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

pub fn count(n: usize) -> Value {
    Value::Integer(n as i64)
}
