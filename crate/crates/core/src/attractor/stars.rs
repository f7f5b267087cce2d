//! Star values: thresholds `ξ_s` whose orbit lands on the repelling fixed
//! point 3/4 after `s` steps, with every intermediate point below 1/2.

use crate::error::{Error, Result};
use crate::roots::bisect;
use crate::scalar::{clip, logistic, period_two_limit};

/// `ξ_2 = (2 + √3) / 4`.
pub fn xi2() -> f64 {
    (2.0 + 3f64.sqrt()) / 4.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarValue {
    pub s: u32,
    pub value: f64,
    /// `f^s(value) - 3/4` at the returned root.
    pub residual: f64,
}

/// `f_c^s(c) - 3/4`, iterating the threshold map with threshold `c` from `c`.
pub fn star_gap(s: u32, c: f64) -> f64 {
    let mut x = c;
    for _ in 0..s {
        x = clip(logistic(x), c).state;
    }
    x - 0.75
}

/// Root of [`star_gap`] inside `bracket`, refined to machine precision.
pub fn find_star(s: u32, bracket: (f64, f64)) -> Result<StarValue> {
    if s < 2 {
        return Err(Error::Parameter(format!("star index s = {s} must be >= 2")));
    }
    let value = bisect(|c| star_gap(s, c), bracket.0, bracket.1, 0.0)?;
    let mut x = value;
    for i in 1..s {
        x = clip(logistic(x), value).state;
        if x >= 0.5 {
            return Err(Error::Parameter(format!(
                "root {value} in [{}, {}] has iterate {i} = {x} >= 1/2",
                bracket.0, bracket.1
            )));
        }
    }
    Ok(StarValue {
        s,
        value,
        residual: star_gap(s, value),
    })
}

/// `ξ_2, ..., ξ_max_s`. Each bracket is seeded by extrapolating the previous
/// spacing with ratio 1/4 and widened until the gap changes sign.
pub fn star_values(max_s: u32) -> Result<Vec<StarValue>> {
    let mut out: Vec<StarValue> = Vec::new();
    for s in 2..=max_s {
        let bracket = match out.as_slice() {
            [] => (period_two_limit(), 1.0),
            [.., prev] => {
                let before = if out.len() >= 2 {
                    out[out.len() - 2].value
                } else {
                    period_two_limit()
                };
                extrapolated_bracket(s, prev.value, prev.value - before)?
            }
        };
        out.push(find_star(s, bracket)?);
    }
    Ok(out)
}

fn extrapolated_bracket(s: u32, prev: f64, spacing: f64) -> Result<(f64, f64)> {
    // star_gap is positive just right of the previous star and negative at 1.
    let mut lo_off = spacing / 16.0;
    let mut hi_off = spacing;
    for _ in 0..64 {
        if star_gap(s, prev + lo_off) > 0.0 {
            break;
        }
        lo_off /= 4.0;
    }
    for _ in 0..64 {
        if prev + hi_off >= 1.0 || star_gap(s, prev + hi_off) < 0.0 {
            break;
        }
        hi_off *= 2.0;
    }
    let (lo, hi) = (prev + lo_off, (prev + hi_off).min(1.0));
    if star_gap(s, lo) > 0.0 && star_gap(s, hi) < 0.0 {
        Ok((lo, hi))
    } else {
        Err(Error::Bracket { lo, hi })
    }
}

/// Successive spacing ratios `(ξ_{s+1} - ξ_s) / (ξ_s - ξ_{s-1})`, paired with `s`.
pub fn spacing_ratios(stars: &[StarValue]) -> Vec<(u32, f64)> {
    stars
        .windows(3)
        .map(|w| {
            (
                w[1].s,
                (w[2].value - w[1].value) / (w[1].value - w[0].value),
            )
        })
        .collect()
}
