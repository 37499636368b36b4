//! Flag parsing into a validated run configuration. Every report echoes its
//! config, and the echo re-parses to an equal `RunConfig`.

use acf_core::fields::{PairSpec, PoleSpec, TwoPhaseCase};
use acf_core::geometry::LinkSpace;
use acf_core::grid::GridConfig;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinkSpec {
    RoundSphere {
        #[serde(rename = "N")]
        n: u32,
    },
    Circle {
        c: f64,
    },
    Suspension1d {
        #[serde(rename = "N")]
        n: u32,
        y_measure: f64,
    },
}

impl LinkSpec {
    /// Parse `sphere:3`, `circle:6.283`, or `suspension:4:6.283`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["sphere", n] => Ok(LinkSpec::RoundSphere {
                n: n.parse()
                    .map_err(|_| format!("--link: bad dimension {n:?}"))?,
            }),
            ["circle", c] => Ok(LinkSpec::Circle {
                c: c.parse()
                    .map_err(|_| format!("--link: bad circumference {c:?}"))?,
            }),
            ["suspension", n, m] => Ok(LinkSpec::Suspension1d {
                n: n.parse()
                    .map_err(|_| format!("--link: bad dimension {n:?}"))?,
                y_measure: m
                    .parse()
                    .map_err(|_| format!("--link: bad fibre measure {m:?}"))?,
            }),
            _ => Err(format!(
                "--link: expected sphere:<N>, circle:<c>, or suspension:<N>:<y_measure>, got {s:?}"
            )),
        }
    }

    pub fn build(&self) -> acf_core::Result<LinkSpace> {
        match self {
            LinkSpec::RoundSphere { n } => LinkSpace::round_sphere(*n),
            LinkSpec::Circle { c } => LinkSpace::circle(*c),
            LinkSpec::Suspension1d { n, y_measure } => LinkSpace::suspension(*n, *y_measure),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case")]
pub enum CaseSpec {
    Halfspace {
        k1: f64,
        k2: f64,
        /// "north", "south", or an angle (circle links).
        pole: String,
    },
    Homogeneous {
        k1: f64,
        k2: f64,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        theta0: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        l1: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        l2: Option<f64>,
        #[serde(default)]
        start: f64,
    },
}

impl CaseSpec {
    /// Parse `halfspace:k1=1,k2=1[,pole=north|south|<angle>]` or
    /// `homogeneous:theta0=1.0,k1=1,k2=1` / `homogeneous:l1=..,l2=..,k1=..,k2=..[,start=..]`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let (head, rest) = s
            .split_once(':')
            .ok_or(format!("--case: missing parameters in {s:?}"))?;
        let mut kv = std::collections::BTreeMap::new();
        for item in rest.split(',') {
            let (k, v) = item
                .split_once('=')
                .ok_or(format!("--case: expected key=value, got {item:?}"))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let num = |kv: &std::collections::BTreeMap<String, String>,
                   key: &str|
         -> Result<Option<f64>, String> {
            kv.get(key)
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|_| format!("--case: bad number for {key}: {v:?}"))
                })
                .transpose()
        };
        match head {
            "halfspace" => Ok(CaseSpec::Halfspace {
                k1: num(&kv, "k1")?.ok_or("--case: halfspace needs k1")?,
                k2: num(&kv, "k2")?.ok_or("--case: halfspace needs k2")?,
                pole: kv.get("pole").cloned().unwrap_or_else(|| "north".into()),
            }),
            "homogeneous" => {
                let spec = CaseSpec::Homogeneous {
                    k1: num(&kv, "k1")?.ok_or("--case: homogeneous needs k1")?,
                    k2: num(&kv, "k2")?.ok_or("--case: homogeneous needs k2")?,
                    theta0: num(&kv, "theta0")?,
                    l1: num(&kv, "l1")?,
                    l2: num(&kv, "l2")?,
                    start: num(&kv, "start")?.unwrap_or(0.0),
                };
                Ok(spec)
            }
            other => Err(format!(
                "--case: unknown builder {other:?} (use halfspace or homogeneous)"
            )),
        }
    }

    pub fn build(&self, link_spec: &LinkSpec, grid: &GridConfig) -> Result<TwoPhaseCase, String> {
        match self {
            CaseSpec::Halfspace { k1, k2, pole } => {
                let n = match link_spec {
                    LinkSpec::RoundSphere { n } => *n,
                    LinkSpec::Circle { c } if (*c - 2.0 * PI).abs() < 1e-12 => 2,
                    _ => {
                        return Err(
                            "halfspace case needs a round sphere (or the full circle)".into()
                        )
                    }
                };
                let pole_spec = match pole.as_str() {
                    "north" => PoleSpec::North,
                    "south" => PoleSpec::South,
                    angle => PoleSpec::Angle(angle.parse::<f64>().map_err(|_| {
                        format!("pole must be north, south, or an angle; got {angle:?}")
                    })?),
                };
                acf_core::fields::build_halfspace_pair(n, *k1, *k2, pole_spec, grid)
                    .map_err(|e| e.to_string())
            }
            CaseSpec::Homogeneous {
                k1,
                k2,
                theta0,
                l1,
                l2,
                start,
            } => {
                let link = link_spec.build().map_err(|e| e.to_string())?;
                let pair = match (theta0, l1, l2) {
                    (Some(t), None, None) => PairSpec::CapPair { theta0: *t },
                    (None, Some(a), Some(b)) => PairSpec::ArcPair {
                        start: *start,
                        l1: *a,
                        l2: *b,
                    },
                    _ => return Err("homogeneous case needs either theta0 or l1+l2".into()),
                };
                acf_core::fields::build_homogeneous_pair(&link, pair, *k1, *k2, grid)
                    .map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Sweep {
    /// Parse `lo:hi:n`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:n, got {s:?}"));
        }
        Ok(Sweep {
            lo: parts[0]
                .parse()
                .map_err(|_| format!("bad number {:?}", parts[0]))?,
            hi: parts[1]
                .parse()
                .map_err(|_| format!("bad number {:?}", parts[1]))?,
            n: parts[2]
                .parse()
                .map_err(|_| format!("bad count {:?}", parts[2]))?,
        })
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1).max(1) as f64)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub monotonicity: f64,
    pub fh_deficit: f64,
    pub rigidity_constancy: f64,
    pub chain: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            monotonicity: 1e-6,
            fh_deficit: 1e-6,
            rigidity_constancy: 1e-4,
            chain: 1e-3,
        }
    }
}

/// Normalized, validated configuration of one CLI run; echoed verbatim into
/// every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub link: Option<LinkSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub case: Option<CaseSpec>,
    /// (radial nodes, link nodes).
    pub grid: (usize, usize),
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r_window: Option<Sweep>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta_sweep: Option<Sweep>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub arc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub radial_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truncate: Option<(usize, f64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scale: Option<(f64, f64)>,
    pub tolerances: Tolerances,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.into(),
            link: None,
            case: None,
            grid: (512, 256),
            r_window: None,
            theta_sweep: None,
            cap: None,
            arc: None,
            radial_factor: None,
            truncate: None,
            scale: None,
            tolerances: Tolerances::default(),
            format: OutputFormat::Csv,
        }
    }

    pub fn grid_config(&self, r_max: f64) -> GridConfig {
        GridConfig::default()
            .with_nodes(self.grid.0, self.grid.1)
            .with_r_max(r_max)
    }

    /// Range checks shared by all commands; command-specific checks run at
    /// dispatch. Violations exit with status 2.
    pub fn validate(&self) -> Result<(), String> {
        if self.grid.0 < 16 || self.grid.1 < 16 {
            return Err(format!(
                "--grid: sizes must be at least 16, got {:?}",
                self.grid
            ));
        }
        if let Some(w) = &self.r_window {
            if !(w.lo > 0.0 && w.hi > w.lo && w.n >= 3) {
                return Err(format!(
                    "--r: need 0 < lo < hi and n ≥ 3, got {}:{}:{}",
                    w.lo, w.hi, w.n
                ));
            }
        }
        if let Some(t) = &self.theta_sweep {
            if !(t.lo > 0.0 && t.hi < PI && t.hi > t.lo && t.n >= 2) {
                return Err(format!(
                    "--theta: need 0 < lo < hi < π, got {}:{}:{}",
                    t.lo, t.hi, t.n
                ));
            }
        }
        if let Some(cap) = self.cap {
            if !(cap > 0.0 && cap < PI) {
                return Err(format!(
                    "--cap/--theta: cap radius must lie in (0, π), got {cap}"
                ));
            }
        }
        if let Some(arc) = self.arc {
            if !(arc > 0.0 && arc <= 2.0 * PI) {
                return Err(format!("--arc: length must lie in (0, 2π], got {arc}"));
            }
        }
        let t = &self.tolerances;
        if t.monotonicity <= 0.0
            || t.fh_deficit <= 0.0
            || t.rigidity_constancy <= 0.0
            || t.chain <= 0.0
        {
            return Err("tolerances must be positive".into());
        }
        if let Some(link) = &self.link {
            link.build().map_err(|e| e.to_string())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn link_parsing() {
        assert_eq!(
            LinkSpec::parse("sphere:3").unwrap(),
            LinkSpec::RoundSphere { n: 3 }
        );
        assert_eq!(
            LinkSpec::parse("circle:6.2").unwrap(),
            LinkSpec::Circle { c: 6.2 }
        );
        assert!(LinkSpec::parse("torus:1").is_err());
        // circumference validation happens at build time
        let bad = LinkSpec::Circle { c: 7.0 };
        let err = bad.build().unwrap_err().to_string();
        assert!(err.contains("circumference exceeds 2π"), "{err}");
    }

    #[test]
    fn case_parsing() {
        let c = CaseSpec::parse("halfspace:k1=1,k2=2,pole=south").unwrap();
        assert_eq!(
            c,
            CaseSpec::Halfspace {
                k1: 1.0,
                k2: 2.0,
                pole: "south".into()
            }
        );
        let c = CaseSpec::parse("homogeneous:theta0=1.2,k1=1,k2=1").unwrap();
        match c {
            CaseSpec::Homogeneous {
                theta0: Some(t), ..
            } => assert_eq!(t, 1.2),
            other => panic!("{other:?}"),
        }
        assert!(CaseSpec::parse("halfspace:k1=1").is_err());
        assert!(CaseSpec::parse("bogus:k1=1,k2=1").is_err());
    }

    #[test]
    fn sweep_parsing_and_validation() {
        let s = Sweep::parse("0.1:2:200").unwrap();
        assert_eq!(s.n, 200);
        assert_eq!(s.points().len(), 200);
        assert!(Sweep::parse("1:2").is_err());

        let mut cfg = RunConfig::new("eigen");
        cfg.cap = Some(0.0);
        assert!(cfg.validate().is_err());
        cfg.cap = Some(1.0);
        assert!(cfg.validate().is_ok());
        cfg.grid = (8, 256);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let mut cfg = RunConfig::new("acf");
        cfg.link = Some(LinkSpec::RoundSphere { n: 3 });
        cfg.case = Some(CaseSpec::parse("halfspace:k1=1,k2=1").unwrap());
        cfg.r_window = Some(Sweep::parse("0.1:2:200").unwrap());
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }
}
