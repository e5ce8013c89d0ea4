//! Number formatting shared by every output: 12 significant digits,
//! trailing zeros dropped, `null` in JSON for non-finite values.

use std::io;

use quadstab_core::{Complex64, Matrix};
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{json, Value};

/// `x` with 12 significant digits, shortest form.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}", trim_zeros(mant), exp)
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

struct G12;

impl Formatter for G12 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
}

/// Compact JSON with 12-digit floats and a trailing newline.
pub fn to_json(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, G12);
    value.serialize(&mut ser).expect("serializing a Value cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// JSON number, or `null` when not finite.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn complex(z: Complex64) -> Value {
    json!({"re": num(z.re), "im": num(z.im)})
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(m.to_rows().into_iter().map(|r| Value::Array(r.into_iter().map(num).collect())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_float(1.0), "1");
        assert_eq!(fmt_float(-0.5), "-0.5");
        assert_eq!(fmt_float(0.25515518153991441), "0.25515518154");
        assert_eq!(fmt_float(1.0954451150103321), "1.09544511501");
        assert_eq!(fmt_float(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt_float(1.5e-7), "1.5e-7");
        assert_eq!(fmt_float(9.9999999999999e5), "1000000");
        assert_eq!(fmt_float(f64::NAN), "nan");
    }

    #[test]
    fn formatted_values_reparse_to_themselves() {
        for x in [std::f64::consts::PI, -1.0 / 3.0, 6.02e23, 1e-300, 0.1 + 0.2] {
            let s = fmt_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(fmt_float(back), s);
        }
    }

    #[test]
    fn json_uses_null_for_non_finite() {
        let v = json!({"a": num(f64::INFINITY), "b": num(0.1 + 0.2), "n": 3});
        assert_eq!(to_json(&v), "{\"a\":null,\"b\":0.3,\"n\":3}\n");
    }
}
