//! Report records and the 9-significant-digit number formatting shared by
//! every JSON and CSV writer.

use serde::{Deserialize, Serialize, Serializer};

/// Relative tolerance applied to every `holds` decision.
pub const REL_TOL: f64 = 1e-6;

/// Rounds to 9 significant digits. Non-finite values pass through.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// Text form of [`round9`], with `inf`, `-inf` and `nan` for non-finite values.
pub fn fmt9(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{}", round9(x))
    }
}

/// Serde adapters writing floats with 9 significant digits.
///
/// JSON has no infinity, so non-finite values are written as the strings
/// `"inf"`, `"-inf"` or `"nan"`.
pub mod sig9 {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(round9(*x))
        } else {
            s.serialize_str(&fmt9(*x))
        }
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Num {
            F(f64),
            S(String),
        }
        match Num::deserialize(d)? {
            Num::F(x) => Ok(x),
            Num::S(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
            use serde::ser::SerializeSeq;
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&Sig9(*x))?;
            }
            seq.end()
        }
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => super::serialize(v, s),
                None => s.serialize_none(),
            }
        }
    }

    pub mod opt_vec {
        use super::*;

        pub fn serialize<S: Serializer>(xs: &Option<Vec<f64>>, s: S) -> Result<S::Ok, S::Error> {
            match xs {
                Some(v) => super::vec::serialize(v, s),
                None => s.serialize_none(),
            }
        }
    }
}

/// Newtype that serializes through [`sig9`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig9(pub f64);

impl Serialize for Sig9 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        sig9::serialize(&self.0, s)
    }
}

/// Which inequality a [`BoundReport`] checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    /// `||J^α f||_p ≤ (t1-t0)^α / Γ(α+1) ||f||_p`.
    IntoItself,
    /// `[J^α f]_{L_w^{p/(1-pα)}} ≤ K_{α,p} ||f||_p`.
    WeakType,
    /// `||J^α f||_{p/(1-pα)} ≤ C_{α,p} ||f||_p`.
    StrongCritical,
    /// `||J^α f||_q ≤ C_{α,p} (t1-t0)^{(p-q)/pq + α} ||f||_p` for `q` below critical.
    StrongSubcritical,
    /// `||J^α f||_q ≤ K_{α,1} ((t1-t0)^{1-q(1-α)} / (1-q(1-α)))^{1/q} ||f||_1`.
    StrongP1,
    /// `[f]_{L_w^p} ≤ ||f||_p`.
    Chebyshev,
    /// `||f||_p ≤ (q/(q-p))^{1/p} (t1-t0)^{(q-p)/pq} [f]_{L_w^q}`.
    EmbeddingStrongWeak,
    /// `[f]_{L_w^p} ≤ (t1-t0)^{(q-p)/pq} ||f||_q`.
    EmbeddingWeakStrong,
    /// `[f]_{L_w^p} ≤ (q/(q-p))^{1/p} (t1-t0)^{(q-p)/pq} [f]_{L_w^q}`.
    EmbeddingWeakWeak,
}

/// Exponents and interval an inequality instance was checked on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundContext {
    #[serde(with = "sig9")]
    pub p: f64,
    #[serde(serialize_with = "sig9::opt::serialize")]
    pub alpha: Option<f64>,
    #[serde(with = "sig9")]
    pub q: f64,
    #[serde(with = "sig9")]
    pub t0: f64,
    #[serde(with = "sig9")]
    pub t1: f64,
}

/// Observed sides of one inequality instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub inequality_id: InequalityId,
    #[serde(with = "sig9")]
    pub lhs: f64,
    #[serde(with = "sig9")]
    pub rhs: f64,
    #[serde(with = "sig9")]
    pub constant_used: f64,
    pub holds: bool,
    #[serde(with = "sig9")]
    pub slack: f64,
    pub context: BoundContext,
    pub seed: Option<u64>,
    /// Additive allowance for discretization error on top of [`REL_TOL`].
    #[serde(with = "sig9")]
    pub grid_tolerance: f64,
}

impl BoundReport {
    /// Builds a report whose right side is `constant · norm_factor`.
    pub fn new(
        inequality_id: InequalityId,
        lhs: f64,
        constant_used: f64,
        norm_factor: f64,
        grid_tolerance: f64,
        context: BoundContext,
    ) -> Self {
        let rhs = if norm_factor == 0.0 { 0.0 } else { constant_used * norm_factor };
        let mut report = BoundReport {
            inequality_id,
            lhs,
            rhs,
            constant_used,
            holds: false,
            slack: 0.0,
            context,
            seed: None,
            grid_tolerance,
        };
        report.refresh();
        report
    }

    fn refresh(&mut self) {
        self.slack = self.rhs - self.lhs;
        self.holds = self.lhs <= self.rhs + REL_TOL * self.rhs.abs() + self.grid_tolerance;
    }

    /// The same instance with the constant multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.constant_used *= factor;
        out.rhs *= factor;
        out.refresh();
        out
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// `lhs / rhs`, or 0 when both sides vanish.
    pub fn ratio(&self) -> f64 {
        if self.lhs == 0.0 {
            0.0
        } else {
            self.lhs / self.rhs
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(fmt9(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt9(2.0), "2");
        assert_eq!(fmt9(1.234_567_890_123e-7), "0.000000123456789");
        assert_eq!(fmt9(f64::INFINITY), "inf");
        assert_eq!(round9(123_456_789_012.0), 123_456_789_000.0);
    }

    #[test]
    fn report_holds_and_rescale() {
        let ctx = BoundContext { p: 2.0, alpha: Some(0.25), q: 4.0, t0: 0.0, t1: 1.0 };
        let r = BoundReport::new(InequalityId::WeakType, 0.9, 1.3, 1.0, 0.0, ctx);
        assert!(r.holds);
        assert!((r.slack - 0.4).abs() < 1e-15);
        let t = r.rescaled(0.5);
        assert!(!t.holds);
        let zero = BoundReport::new(InequalityId::WeakType, 0.0, 1.3, 0.0, 0.0, ctx);
        assert!(zero.holds && zero.slack == 0.0);
    }

    #[test]
    fn infinity_serializes_as_string() {
        let json = serde_json::to_string(&Sig9(f64::INFINITY)).unwrap();
        assert_eq!(json, "\"inf\"");
        let json = serde_json::to_string(&Sig9(0.1 + 0.2)).unwrap();
        assert_eq!(json, "0.3");
    }
}
