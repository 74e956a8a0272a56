//! Exact norm values: rationals and scaled logarithms of integers.
//!
//! A value is either `Exact(q)` or `offset + scale * log_base(arg)` with
//! integer `arg >= 1` and integer `base >= 2`. Construction canonicalizes:
//! bases and arguments are reduced to primitive (non-perfect-power) roots,
//! so every value that is secretly rational becomes `Exact`. Comparing a
//! logarithmic value against a rational, or two values over the same base,
//! is decided exactly by integer exponentiation. Only comparisons across
//! multiplicatively unrelated bases fall back to adaptive-precision interval
//! arithmetic, which either decides or reports `Undecidable`.

use num::bigint::{BigInt, Sign};
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NormError {
    #[error("comparison undecidable at max precision ({0} fractional bits)")]
    Undecidable(u32),
    #[error("invalid norm value: {0}")]
    Invalid(String),
}

/// Maximum fractional bits tried before a cross-base comparison gives up.
pub const MAX_CMP_PRECISION: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormValue {
    Exact(BigRational),
    Log {
        arg: BigInt,
        base: u32,
        scale: BigRational,
        offset: BigRational,
    },
}

fn brat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Largest k with n = d^k for some d >= 2; returns (d, k). k = 1 when n is
/// not a perfect power.
fn primitive_root(n: &BigInt) -> (BigInt, u32) {
    debug_assert!(*n >= BigInt::from(2));
    let max_k = n.bits() as u32; // d >= 2 forces k <= log2(n)
    for k in (2..=max_k).rev() {
        let d = n.nth_root(k);
        if num::pow::pow(d.clone(), k as usize) == *n {
            let (dd, kk) = primitive_root(&d);
            return (dd, kk * k);
        }
    }
    (n.clone(), 1)
}

impl NormValue {
    pub fn exact(q: BigRational) -> Self {
        NormValue::Exact(q)
    }

    pub fn from_int(n: i64) -> Self {
        NormValue::Exact(brat_int(n))
    }

    pub fn from_big(n: BigInt) -> Self {
        NormValue::Exact(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    /// `offset + scale * log_base(arg)`, canonicalized.
    pub fn log_full(
        arg: BigInt,
        base: u32,
        scale: BigRational,
        offset: BigRational,
    ) -> Result<Self, NormError> {
        if base < 2 {
            return Err(NormError::Invalid(format!("log base {base} < 2")));
        }
        if arg < BigInt::one() {
            return Err(NormError::Invalid(format!("log argument {arg} < 1")));
        }
        if scale.is_zero() || arg.is_one() {
            return Ok(NormValue::Exact(offset));
        }
        // Reduce the base to its primitive root: log_{c^j} = (1/j) log_c.
        let (b_root, j) = primitive_root(&BigInt::from(base));
        let base = u32::try_from(&b_root).expect("root of a u32 fits");
        let scale = scale / brat_int(j as i64);
        // Reduce the argument likewise: log(d^k) = k log(d).
        let (a_root, k) = primitive_root(&arg);
        let scale = scale * brat_int(k as i64);
        if a_root == b_root {
            return Ok(NormValue::Exact(offset + scale));
        }
        Ok(NormValue::Log {
            arg: a_root,
            base,
            scale,
            offset,
        })
    }

    /// `log_base(arg)` for a positive integer argument.
    pub fn log(arg: BigInt, base: u32) -> Self {
        Self::log_full(arg, base, BigRational::one(), BigRational::zero())
            .expect("valid log construction")
    }

    pub fn log2_of_int(n: u64) -> Self {
        Self::log(BigInt::from(n), 2)
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, NormValue::Exact(q) if q.is_zero())
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            NormValue::Exact(q) => Some(q),
            _ => None,
        }
    }

    pub fn add_rat(&self, q: &BigRational) -> NormValue {
        match self {
            NormValue::Exact(x) => NormValue::Exact(x + q),
            NormValue::Log {
                arg,
                base,
                scale,
                offset,
            } => NormValue::Log {
                arg: arg.clone(),
                base: *base,
                scale: scale.clone(),
                offset: offset + q,
            },
        }
    }

    pub fn sub_rat(&self, q: &BigRational) -> NormValue {
        self.add_rat(&(-q))
    }

    pub fn mul_rat(&self, q: &BigRational) -> NormValue {
        if q.is_zero() {
            return NormValue::zero();
        }
        match self {
            NormValue::Exact(x) => NormValue::Exact(x * q),
            NormValue::Log {
                arg,
                base,
                scale,
                offset,
            } => NormValue::Log {
                arg: arg.clone(),
                base: *base,
                scale: scale * q,
                offset: offset * q,
            },
        }
    }

    pub fn halve(&self) -> NormValue {
        self.mul_rat(&BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    pub fn try_cmp(&self, other: &NormValue) -> Result<Ordering, NormError> {
        match (self, other) {
            (NormValue::Exact(a), NormValue::Exact(b)) => Ok(a.cmp(b)),
            (NormValue::Log { .. }, NormValue::Exact(q)) => self.cmp_rational(q),
            (NormValue::Exact(q), NormValue::Log { .. }) => {
                other.cmp_rational(q).map(Ordering::reverse)
            }
            (
                NormValue::Log {
                    arg: a1,
                    base: b1,
                    scale: s1,
                    offset: o1,
                },
                NormValue::Log {
                    arg: a2,
                    base: b2,
                    scale: s2,
                    offset: o2,
                },
            ) => {
                if b1 == b2 {
                    Ok(cmp_same_base(a1, s1, o1, a2, s2, o2, *b1))
                } else {
                    self.cmp_interval(other)
                }
            }
        }
    }

    pub fn cmp_rational(&self, q: &BigRational) -> Result<Ordering, NormError> {
        match self {
            NormValue::Exact(x) => Ok(x.cmp(q)),
            NormValue::Log {
                arg,
                base,
                scale,
                offset,
            } => {
                // offset + scale*log_b(arg) vs q  <=>  log_b(arg) vs (q-offset)/scale
                let r = (q - offset) / scale;
                let ord = cmp_log_vs_rational(arg, *base, &r);
                Ok(if scale.is_negative() {
                    ord.reverse()
                } else {
                    ord
                })
            }
        }
    }

    /// max(0, self); always decidable since the zero side is rational.
    pub fn max_zero(&self) -> NormValue {
        match self.cmp_rational(&BigRational::zero()).expect("vs rational") {
            Ordering::Less => NormValue::zero(),
            _ => self.clone(),
        }
    }

    pub fn is_positive_value(&self) -> bool {
        self.cmp_rational(&BigRational::zero()).expect("vs rational") == Ordering::Greater
    }

    /// Largest integer n with n <= self.
    pub fn floor_int(&self) -> BigInt {
        match self {
            NormValue::Exact(q) => q.floor().to_integer(),
            NormValue::Log {
                arg,
                base,
                scale,
                offset,
            } => {
                // log_b(arg) lies in [0, bits(arg)], giving rational bounds.
                let lbound = brat_int(0);
                let ubound = brat_int(arg.bits() as i64 + 1);
                let (lo, hi) = if scale.is_negative() {
                    (offset + scale * &ubound, offset + scale * &lbound)
                } else {
                    (offset + scale * &lbound, offset + scale * &ubound)
                };
                let mut lo = lo.floor().to_integer();
                let mut hi = hi.ceil().to_integer();
                // binary search: floor = max n with n <= value
                while lo < hi {
                    let mid: BigInt = (&lo + &hi + 1) / 2;
                    let m = BigRational::from_integer(mid.clone());
                    match self.cmp_rational(&m).expect("vs rational") {
                        Ordering::Less => hi = mid - 1,
                        _ => lo = mid,
                    }
                }
                lo
            }
        }
    }

    /// self + other when the sum is representable (same log family or a
    /// rational side); None otherwise.
    pub fn try_add(&self, other: &NormValue) -> Option<NormValue> {
        match (self, other) {
            (NormValue::Exact(a), NormValue::Exact(b)) => Some(NormValue::Exact(a + b)),
            (NormValue::Log { .. }, NormValue::Exact(q)) => Some(self.add_rat(q)),
            (NormValue::Exact(q), NormValue::Log { .. }) => Some(other.add_rat(q)),
            (
                NormValue::Log {
                    arg: a1,
                    base: b1,
                    scale: s1,
                    offset: o1,
                },
                NormValue::Log {
                    arg: a2,
                    base: b2,
                    scale: s2,
                    offset: o2,
                },
            ) => {
                if b1 != b2 {
                    return None;
                }
                if a1 == a2 {
                    return Some(
                        NormValue::log_full(a1.clone(), *b1, s1 + s2, o1 + o2).ok()?,
                    );
                }
                // s1 log(a1) + s2 log(a2) = (1/d) log(a1^{d s1} a2^{d s2})
                let d = s1.denom().lcm(s2.denom());
                let n1 = (s1 * BigRational::from_integer(d.clone())).to_integer();
                let n2 = (s2 * BigRational::from_integer(d.clone())).to_integer();
                if n1.is_negative() || n2.is_negative() {
                    return None;
                }
                let arg = pow_big(a1, &n1) * pow_big(a2, &n2);
                NormValue::log_full(
                    arg,
                    *b1,
                    BigRational::new(BigInt::one(), d),
                    o1 + o2,
                )
                .ok()
            }
        }
    }

    pub fn try_sub(&self, other: &NormValue) -> Option<NormValue> {
        let negated = other.mul_rat(&brat_int(-1));
        self.try_add(&negated)
    }

    fn cmp_interval(&self, other: &NormValue) -> Result<Ordering, NormError> {
        let mut prec = 32;
        while prec <= MAX_CMP_PRECISION {
            let (alo, ahi) = self.interval(prec);
            let (blo, bhi) = other.interval(prec);
            if ahi < blo {
                return Ok(Ordering::Less);
            }
            if bhi < alo {
                return Ok(Ordering::Greater);
            }
            prec *= 2;
        }
        Err(NormError::Undecidable(MAX_CMP_PRECISION))
    }

    /// Rational bounds on the value, width shrinking with precision.
    pub fn interval(&self, prec: u32) -> (BigRational, BigRational) {
        match self {
            NormValue::Exact(q) => (q.clone(), q.clone()),
            NormValue::Log {
                arg,
                base,
                scale,
                offset,
            } => {
                let (alo, ahi) = log2_interval(arg, prec);
                let (blo, bhi) = log2_interval(&BigInt::from(*base), prec);
                // log_b(arg) = log2(arg) / log2(base); base >= 2 keeps blo >= 1 > 0
                let qlo = &alo / &bhi;
                let qhi = &ahi / &blo;
                let (vlo, vhi) = if scale.is_negative() {
                    (scale * qhi, scale * qlo)
                } else {
                    (scale * qlo, scale * qhi)
                };
                (offset + vlo, offset + vhi)
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            NormValue::Exact(q) => serde_json::json!({ "exact": q.to_string() }),
            NormValue::Log {
                arg,
                base,
                scale,
                offset,
            } => {
                let arg_json = match u64::try_from(arg) {
                    Ok(n) => serde_json::json!(n),
                    Err(_) => serde_json::json!(arg.to_string()),
                };
                serde_json::json!({ "log": {
                    "arg": arg_json,
                    "base": base,
                    "scale": scale.to_string(),
                    "offset": offset.to_string(),
                }})
            }
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, NormError> {
        let obj = v
            .as_object()
            .ok_or_else(|| NormError::Invalid("norm value must be an object".into()))?;
        if let Some(e) = obj.get("exact") {
            let s = e
                .as_str()
                .map(str::to_owned)
                .or_else(|| e.as_i64().map(|n| n.to_string()))
                .ok_or_else(|| NormError::Invalid("exact must be a rational string".into()))?;
            let q: BigRational = s
                .parse()
                .map_err(|_| NormError::Invalid(format!("bad rational {s:?}")))?;
            return Ok(NormValue::Exact(q));
        }
        if let Some(l) = obj.get("log") {
            let arg = match l.get("arg") {
                Some(serde_json::Value::Number(n)) => BigInt::from(
                    n.as_u64()
                        .ok_or_else(|| NormError::Invalid("log arg not a u64".into()))?,
                ),
                Some(serde_json::Value::String(s)) => s
                    .parse()
                    .map_err(|_| NormError::Invalid(format!("bad log arg {s:?}")))?,
                _ => return Err(NormError::Invalid("log missing arg".into())),
            };
            let base = l
                .get("base")
                .and_then(|b| b.as_u64())
                .ok_or_else(|| NormError::Invalid("log missing base".into()))?;
            let parse_rat = |key: &str| -> Result<BigRational, NormError> {
                match l.get(key) {
                    None => Ok(BigRational::zero()),
                    Some(serde_json::Value::String(s)) => s
                        .parse()
                        .map_err(|_| NormError::Invalid(format!("bad {key} {s:?}"))),
                    Some(serde_json::Value::Number(n)) => Ok(brat_int(
                        n.as_i64()
                            .ok_or_else(|| NormError::Invalid(format!("bad {key}")))?,
                    )),
                    _ => Err(NormError::Invalid(format!("bad {key}"))),
                }
            };
            let scale = match l.get("scale") {
                None => BigRational::one(),
                _ => parse_rat("scale")?,
            };
            let offset = parse_rat("offset")?;
            let base =
                u32::try_from(base).map_err(|_| NormError::Invalid("log base too large".into()))?;
            return Self::log_full(arg, base, scale, offset);
        }
        Err(NormError::Invalid(
            "norm value needs an \"exact\" or \"log\" field".into(),
        ))
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Exact(q) => write!(f, "{q}"),
            NormValue::Log {
                arg,
                base,
                scale,
                offset,
            } => {
                if offset.is_zero() {
                    write!(f, "{scale}*log_{base}({arg})")
                } else {
                    write!(f, "{offset} + {scale}*log_{base}({arg})")
                }
            }
        }
    }
}

impl serde::Serialize for NormValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for NormValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        NormValue::from_json(&v).map_err(serde::de::Error::custom)
    }
}

fn pow_big(base: &BigInt, exp: &BigInt) -> BigInt {
    let e = u64::try_from(exp).expect("nonnegative exponent");
    let mut result = BigInt::one();
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    result
}

/// log_base(arg) vs p/d, decided by comparing arg^d against base^p.
/// Values of r outside [0, bits(arg)) are settled without exponentiating,
/// keeping both powers near d * bits(arg) in size.
fn cmp_log_vs_rational(arg: &BigInt, base: u32, r: &BigRational) -> Ordering {
    debug_assert!(*arg >= BigInt::from(2));
    let p = r.numer().clone();
    let d = r.denom().clone();
    if p.is_negative() {
        // arg^d >= 2 > base^p
        return Ordering::Greater;
    }
    // log_base(arg) <= log_2(arg) < bits(arg), since arg < 2^bits(arg)
    if *r >= BigRational::from_integer(BigInt::from(arg.bits())) {
        return Ordering::Less;
    }
    let lhs = pow_big(arg, &d);
    let rhs = pow_big(&BigInt::from(base), &p);
    lhs.cmp(&rhs)
}

/// Same-base comparison: o1 + s1 log_b(a1) vs o2 + s2 log_b(a2),
/// reduced to one integer comparison after clearing denominators.
fn cmp_same_base(
    a1: &BigInt,
    s1: &BigRational,
    o1: &BigRational,
    a2: &BigInt,
    s2: &BigRational,
    o2: &BigRational,
    base: u32,
) -> Ordering {
    let c = o2 - o1;
    let d = s1.denom().lcm(s2.denom()).lcm(c.denom());
    let df = BigRational::from_integer(d);
    let n1 = (s1 * &df).to_integer();
    let n2 = (s2 * &df).to_integer();
    let m = (&c * &df).to_integer();
    // n1 log(a1) vs n2 log(a2) + m log(base), all integer weights
    let mut lhs = BigInt::one();
    let mut rhs = BigInt::one();
    if n1.is_negative() {
        rhs *= pow_big(a1, &-&n1);
    } else {
        lhs *= pow_big(a1, &n1);
    }
    if n2.is_negative() {
        lhs *= pow_big(a2, &-&n2);
    } else {
        rhs *= pow_big(a2, &n2);
    }
    if m.is_negative() {
        lhs *= pow_big(&BigInt::from(base), &-&m);
    } else {
        rhs *= pow_big(&BigInt::from(base), &m);
    }
    lhs.cmp(&rhs)
}

/// Rational bounds on log2(x) with gap about 2^(1-prec).
fn log2_interval(x: &BigInt, prec: u32) -> (BigRational, BigRational) {
    debug_assert!(x.sign() == Sign::Plus);
    if x.is_one() {
        return (BigRational::zero(), BigRational::zero());
    }
    let e = x.bits() - 1;
    let p = (prec + 8) as u64;
    // scaled mantissa in [2^p, 2^(p+1)): x * 2^(p-e), floor and ceil tracks
    let (mut mlo, mut mhi) = if e <= p {
        let m = x << (p - e);
        (m.clone(), m)
    } else {
        let shift = e - p;
        let lo = x >> shift;
        let rem_nonzero = (&lo << shift) != *x;
        let hi = if rem_nonzero { &lo + 1 } else { lo.clone() };
        (lo, hi)
    };
    let two_pow_p1 = BigInt::one() << (p + 1);
    let round_up: BigInt = (BigInt::one() << p) - 1;
    let mut flo = BigRational::zero();
    let mut fhi = BigRational::zero();
    let mut w = BigRational::new(BigInt::one(), BigInt::from(2));
    let half = w.clone();
    for _ in 0..prec {
        mlo = (&mlo * &mlo) >> p;
        if mlo >= two_pow_p1 {
            flo += &w;
            mlo >>= 1;
        }
        mhi = ((&mhi * &mhi) + &round_up) >> p;
        if mhi >= two_pow_p1 {
            fhi += &w;
            mhi = (&mhi + 1) >> 1;
        }
        w *= &half;
    }
    // remaining fraction on the hi track is below the last weight
    fhi += &w + &w;
    let eb = BigRational::from_integer(BigInt::from(e));
    (&eb + flo, eb + fhi)
}
