use std::fmt;
use std::str::FromStr;

use abflux_core::grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

/// `[name=]start:stop:steps[:log|:lin]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: Option<String>,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        match self.scale {
            Scale::Linear => grid::linear(self.start, self.stop, self.steps),
            Scale::Log => grid::logarithmic(self.start, self.stop, self.steps),
        }
    }

    pub fn with_scale(mut self, scale: Scale) -> Result<Self, String> {
        self.scale = scale;
        self.check()?;
        Ok(self)
    }

    fn check(&self) -> Result<(), String> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err("sweep bounds must be finite".into());
        }
        if self.start >= self.stop {
            return Err(format!("sweep start {} must be below stop {}", self.start, self.stop));
        }
        if self.steps < 2 {
            return Err(format!("sweep needs at least 2 steps, got {}", self.steps));
        }
        if self.scale == Scale::Log && self.start <= 0.0 {
            return Err("log sweep needs a positive start".into());
        }
        Ok(())
    }
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (parameter, range) = match s.split_once('=') {
            Some((name, rest)) if !name.trim().is_empty() => (Some(name.trim().to_string()), rest),
            Some(_) => return Err("empty sweep parameter name".into()),
            None => (None, s),
        };
        let parts: Vec<&str> = range.split(':').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!("expected start:stop:steps[:log], got '{range}'"));
        }
        let num = |t: &str| t.parse::<f64>().map_err(|_| format!("'{t}' is not a number"));
        let steps = parts[2].parse::<usize>().map_err(|_| format!("'{}' is not a step count", parts[2]))?;
        let scale = match parts.get(3).copied() {
            None | Some("lin") | Some("linear") => Scale::Linear,
            Some("log") => Scale::Log,
            Some(other) => return Err(format!("unknown scale '{other}', expected lin or log")),
        };
        let spec = SweepSpec { parameter, start: num(parts[0])?, stop: num(parts[1])?, steps, scale };
        spec.check()?;
        Ok(spec)
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.parameter {
            write!(f, "{p}=")?;
        }
        write!(f, "{}:{}:{}", self.start, self.stop, self.steps)?;
        if self.scale == Scale::Log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_linear() {
        let s: SweepSpec = "alpha=0:1:17".parse().unwrap();
        assert_eq!(s.parameter.as_deref(), Some("alpha"));
        assert_eq!(s.values().len(), 17);
        assert_eq!(s.values()[16], 1.0);
        assert_eq!(s.to_string(), "alpha=0:1:17");
    }

    #[test]
    fn parses_log() {
        let s: SweepSpec = "1:100:3:log".parse().unwrap();
        assert_eq!(s.parameter, None);
        assert!((s.values()[1] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["alpha=1:0:5", "0:1:1", "0:1:5:log", "0:1", "a:1:3", "=0:1:3", "0:1:3:cubic"] {
            assert!(bad.parse::<SweepSpec>().is_err(), "{bad}");
        }
    }
}
