//! Integer encoding for JSON output. Values beyond 2^53 are written as decimal
//! strings so that consumers parsing numbers as doubles stay exact.

use serde_json::Value;

const EXACT_DOUBLE_LIMIT: u64 = 1 << 53;

pub fn int_value(v: i64) -> Value {
    if v.unsigned_abs() > EXACT_DOUBLE_LIMIT {
        Value::String(v.to_string())
    } else {
        Value::from(v)
    }
}

/// Accepts a JSON integer or a decimal string.
pub fn value_int(v: &Value) -> Option<i64> {
    match v {
        Value::Number(n) => n.as_i64(),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}
