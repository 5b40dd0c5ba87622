//! Verification records and their JSON/CSV flattening.

use serde::{Deserialize, Serialize};

/// How a record's status is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimKind {
    /// Explicit bound, pass iff `margin >= -tolerance`.
    Check,
    /// Unspecified constant; the measured value is reported.
    Report,
    /// Finite monotone trend across checkpoints, pass iff strictly increasing.
    Trend,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Report,
}

/// One verified (or reported) instance of a claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub suite: String,
    pub claim: String,
    pub params: String,
    pub kind: ClaimKind,
    pub status: Status,
    #[serde(with = "float_text")]
    pub value: f64,
    #[serde(with = "opt_float_text")]
    pub bound: Option<f64>,
    #[serde(with = "opt_float_text")]
    pub margin: Option<f64>,
    pub tolerance: f64,
}

/// Finite floats as JSON numbers, the rest as `"inf"`, `"-inf"` or `"nan"`.
mod float_text {
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&super::format_g17(*x))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a float: {other}"))),
            },
        }
    }
}

mod opt_float_text {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => super::float_text::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::float_text")] f64);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

impl VerificationRecord {
    fn base(suite: &str, claim: &str, params: String, kind: ClaimKind, value: f64, tol: f64) -> Self {
        VerificationRecord {
            suite: suite.into(),
            claim: claim.into(),
            params,
            kind,
            status: Status::Report,
            value,
            bound: None,
            margin: None,
            tolerance: tol,
        }
    }

    /// Pass iff `margin >= -tol`; a NaN margin fails.
    pub fn check(suite: &str, claim: &str, params: String, value: f64, bound: f64, margin: f64, tol: f64) -> Self {
        let mut r = Self::base(suite, claim, params, ClaimKind::Check, value, tol);
        r.bound = Some(bound);
        r.margin = Some(margin);
        r.status = if margin >= -tol { Status::Pass } else { Status::Fail };
        r
    }

    /// `value <= bound`.
    pub fn upper(suite: &str, claim: &str, params: String, value: f64, bound: f64, tol: f64) -> Self {
        Self::check(suite, claim, params, value, bound, bound - value, tol)
    }

    /// `value >= bound`.
    pub fn lower(suite: &str, claim: &str, params: String, value: f64, bound: f64, tol: f64) -> Self {
        Self::check(suite, claim, params, value, bound, value - bound, tol)
    }

    /// Residual of an identity, pass iff `residual <= tol`.
    pub fn residual(suite: &str, claim: &str, params: String, residual: f64, tol: f64) -> Self {
        Self::upper(suite, claim, params, residual, 0.0, tol)
    }

    pub fn report(suite: &str, claim: &str, params: String, value: f64, tol: f64) -> Self {
        Self::base(suite, claim, params, ClaimKind::Report, value, tol)
    }

    /// Strictly increasing `values`; margin is the smallest step, value the last entry.
    pub fn trend(suite: &str, claim: &str, params: String, values: &[f64], tol: f64) -> Self {
        let mut r = Self::base(
            suite,
            claim,
            params,
            ClaimKind::Trend,
            values.last().copied().unwrap_or(f64::NAN),
            tol,
        );
        let step = values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        r.bound = values.first().copied();
        r.margin = Some(step);
        r.status = if values.len() >= 2 && step > 0.0 {
            Status::Pass
        } else {
            Status::Fail
        };
        r
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn csv_row(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(format_g17).unwrap_or_default();
        vec![
            self.suite.clone(),
            self.claim.clone(),
            self.params.clone(),
            enum_name(&self.kind),
            enum_name(&self.status),
            format_g17(self.value),
            opt(self.bound),
            opt(self.margin),
            format_g17(self.tolerance),
        ]
    }
}

pub const CSV_HEADER: [&str; 9] = [
    "suite", "claim", "params", "kind", "status", "value", "bound", "margin", "tolerance",
];

fn enum_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

/// Orders records by claim, then params, then suite.
pub fn sort_records(records: &mut [VerificationRecord]) {
    records.sort_by(|a, b| {
        (&a.claim, &a.params, &a.suite).cmp(&(&b.claim, &b.params, &b.suite))
    });
}

pub fn records_to_json(records: &[VerificationRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records always serialize")
}

/// `%.17g`: 17 significant digits, trailing zeros removed, exponent form
/// outside `1e-5 <= |x| < 1e17`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let digits = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", digits, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mant), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
