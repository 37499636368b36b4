//! Report number formatting: 17 significant digits, enough to round-trip f64.

pub fn sig17(x: f64) -> String {
    if x == 0.0 {
        return "0.0000000000000000e0".into();
    }
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    #[test]
    fn round_trips() {
        for &x in &[1.0, -3.25e-17, std::f64::consts::PI, 0.1, 1e300] {
            let s = super::sig17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }
}
