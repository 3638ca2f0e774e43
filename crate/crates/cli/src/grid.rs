//! Length-grid parsing.
//!
//! Two forms:
//! - explicit comma list: `1,10,100,1000`
//! - log-spaced: `log:LO:HI` (quarter-decade points) or `log:LO:HI:N`
//!   for exactly `N` points, rounded to integers and deduplicated.

pub fn parse_grid(text: &str) -> Result<Vec<u64>, String> {
    let grid = if let Some(rest) = text.strip_prefix("log:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 && parts.len() != 3 {
            return Err(format!("log grid must be log:LO:HI or log:LO:HI:N, got {text}"));
        }
        let lo: f64 = parts[0].parse().map_err(|_| format!("bad grid bound {}", parts[0]))?;
        let hi: f64 = parts[1].parse().map_err(|_| format!("bad grid bound {}", parts[1]))?;
        if !(lo >= 1.0) || !(hi > lo) {
            return Err(format!("log grid needs 1 <= LO < HI, got {text}"));
        }
        let points = if parts.len() == 3 {
            parts[2].parse::<usize>().map_err(|_| format!("bad point count {}", parts[2]))?
        } else {
            (4.0 * (hi / lo).log10()).round() as usize + 1
        };
        if points < 2 {
            return Err("log grid needs at least 2 points".into());
        }
        let mut out: Vec<u64> = (0..points)
            .map(|i| {
                let f = i as f64 / (points - 1) as f64;
                (lo * (hi / lo).powf(f)).round() as u64
            })
            .collect();
        out.dedup();
        out
    } else {
        let mut out = Vec::new();
        for part in text.split(',') {
            let v: u64 =
                part.trim().parse().map_err(|_| format!("bad grid entry {part}"))?;
            out.push(v);
        }
        out
    };
    if grid.is_empty() {
        return Err("grid is empty".into());
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(format!("grid must be strictly increasing: {grid:?}"));
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_log_specs() {
        assert_eq!(parse_grid("1,10,100").unwrap(), vec![1, 10, 100]);
        let g = parse_grid("log:10:10000").unwrap();
        assert_eq!(g.len(), 13);
        assert_eq!(*g.first().unwrap(), 10);
        assert_eq!(*g.last().unwrap(), 10000);
        let g = parse_grid("log:1:100:3").unwrap();
        assert_eq!(g, vec![1, 10, 100]);
    }

    #[test]
    fn rejects_malformed_grids() {
        assert!(parse_grid("").is_err());
        assert!(parse_grid("5,4").is_err());
        assert!(parse_grid("log:100:10").is_err());
        assert!(parse_grid("log:10").is_err());
        assert!(parse_grid("a,b").is_err());
    }
}
