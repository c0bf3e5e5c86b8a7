use std::fmt;
use std::str::FromStr;

use finpolylog_core::field::is_prime;
use finpolylog_core::ExactRational;
use serde::{Serialize, Serializer};

/// Odd primes given as `5,7,11` or `5..31` (primes only), or a mix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeList(pub Vec<u32>);

impl FromStr for PrimeList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            if let Some((a, b)) = part.split_once("..") {
                let a: u32 = num(a)?;
                let b: u32 = num(b)?;
                if a > b {
                    return Err(format!("empty range {part}"));
                }
                out.extend((a.max(3)..=b).filter(|&p| is_prime(p as u64)));
            } else {
                let p: u32 = num(part)?;
                if p == 2 || !is_prime(p as u64) {
                    return Err(format!("{p} is not an odd prime"));
                }
                out.push(p);
            }
        }
        if out.is_empty() {
            return Err(format!("no odd primes in '{s}'"));
        }
        out.sort_unstable();
        out.dedup();
        Ok(PrimeList(out))
    }
}

impl fmt::Display for PrimeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for PrimeList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Inclusive range `a..b`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Range {
    pub start: usize,
    pub end: usize,
}

impl Range {
    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").unwrap_or((s, s));
        let (start, end) = (num(a)?, num(b)?);
        if start > end {
            return Err(format!("empty range {s}"));
        }
        Ok(Range { start, end })
    }
}

/// `n=q`, fixing `lambda_n` to the rational `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaChoice {
    pub n: usize,
    pub value: ExactRational,
}

impl FromStr for LambdaChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (n, v) = s
            .split_once('=')
            .ok_or_else(|| format!("expected n=value, got '{s}'"))?;
        let value = v
            .trim()
            .parse::<ExactRational>()
            .map_err(|_| format!("not a rational: '{v}'"))?;
        Ok(LambdaChoice { n: num(n)?, value })
    }
}

impl Serialize for LambdaChoice {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}={}", self.n, self.value))
    }
}

fn num<T: FromStr>(s: &str) -> Result<T, String> {
    s.trim().parse().map_err(|_| format!("not a number: '{}'", s.trim()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_lists() {
        assert_eq!("5..13".parse::<PrimeList>().unwrap().0, vec![5, 7, 11, 13]);
        assert_eq!("2..7,5".parse::<PrimeList>().unwrap().0, vec![3, 5, 7]);
        assert!("4".parse::<PrimeList>().is_err());
        assert!("2".parse::<PrimeList>().is_err());
        assert!("24..28".parse::<PrimeList>().is_err());
        assert!("9..3".parse::<PrimeList>().is_err());
    }

    #[test]
    fn ranges_and_lambdas() {
        assert_eq!("3..10".parse::<Range>().unwrap(), Range { start: 3, end: 10 });
        assert_eq!("4".parse::<Range>().unwrap().iter().count(), 1);
        let l: LambdaChoice = "3=1/2".parse().unwrap();
        assert_eq!(l.n, 3);
        assert!("3:1/2".parse::<LambdaChoice>().is_err());
    }
}
