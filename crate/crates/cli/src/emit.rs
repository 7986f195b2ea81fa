//! Output formatting: JSON and CSV with reproducible float encoding.
//!
//! Every `f64` is rendered as `{:.16e}` (scientific notation, 17
//! significant digits). Seventeen digits uniquely identify a double, so a
//! reader parsing the emitted text recovers the exact binary value and
//! repeated runs produce byte-identical output.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

/// Compact JSON formatter whose only deviation from the default is the
/// fixed 17-significant-digit float encoding.
struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize a JSON value compactly with full-precision floats. Keys of
/// every object are emitted in sorted order.
pub fn to_json_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    String::from_utf8(out).expect("JSON serializer emits UTF-8")
}

/// One CSV field holding a float; `NaN` marks values undefined at this row.
pub fn csv_float(value: f64) -> String {
    if value.is_nan() {
        "NaN".to_string()
    } else {
        format!("{value:.16e}")
    }
}
