use std::f64::consts::PI;

/// Parses an angle in radians. Accepts plain numbers and multiples of `pi`
/// such as `pi`, `-pi/4`, `2pi/3`, `2*pi`, `0.5pi`.
pub fn parse_phase(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let bad = || format!("cannot parse phase '{text}'; use radians or forms like pi, pi/2, 2pi/3");
    let Some(at) = s.find("pi") else {
        return s.parse::<f64>().map_err(|_| bad()).and_then(|x| finite(x).ok_or_else(bad));
    };
    let (head, tail) = (&s[..at], &s[at + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let denom = match tail {
        "" => 1.0,
        t => t.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
    };
    if denom == 0.0 {
        return Err(bad());
    }
    finite(coef * PI / denom).ok_or_else(bad)
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}
