//! Barcodes drawn as horizontal segments, one row per interval, grouped by
//! degree. Essential intervals run to the right edge and end in an arrow.

use std::fmt::Write as _;

use nerveseq::barcode::{Barcode, Death};

const ROW: f64 = 14.0;
const LEFT: f64 = 60.0;
const WIDTH: f64 = 520.0;

pub fn render(barcode: &Barcode, title: &str) -> String {
    let births = barcode.iter().flat_map(|(_, bars)| bars.iter().map(|b| b.birth));
    let deaths = barcode.iter().flat_map(|(_, bars)| {
        bars.iter().filter_map(|b| match b.death {
            Death::Finite(d) => Some(d),
            Death::Infinite => None,
        })
    });
    let births: Vec<i64> = births.collect();
    let lo = births.iter().copied().min().unwrap_or(0);
    let hi = births.into_iter().chain(deaths).max().unwrap_or(1).max(lo + 1) + 1;
    let x = |v: i64| LEFT + (v - lo) as f64 / (hi - lo) as f64 * WIDTH;
    let rows: usize = barcode.iter().map(|(_, bars)| bars.len() + 1).sum();
    let height = 40.0 + rows as f64 * ROW + 30.0;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{height}" font-family="monospace" font-size="11">"#,
        LEFT + WIDTH + 30.0
    );
    let _ = writeln!(out, r#"<text x="{LEFT}" y="16">{}</text>"#, escape(title));
    let mut y = 34.0;
    for (q, bars) in barcode.iter() {
        let _ = writeln!(out, r#"<text x="4" y="{}">H{q}</text>"#, y + 4.0);
        y += ROW;
        for bar in bars {
            let x0 = x(bar.birth);
            let (x1, arrow) = match bar.death {
                Death::Finite(d) => (x(d), false),
                Death::Infinite => (LEFT + WIDTH + 10.0, true),
            };
            let _ = writeln!(out, r#"<line x1="{x0:.1}" y1="{y}" x2="{x1:.1}" y2="{y}" stroke="black" stroke-width="3"/>"#);
            if arrow {
                let _ = writeln!(
                    out,
                    r#"<polygon points="{:.1},{} {:.1},{} {:.1},{}" fill="black"/>"#,
                    x1,
                    y - 4.0,
                    x1 + 8.0,
                    y,
                    x1,
                    y + 4.0
                );
            }
            y += ROW;
        }
    }
    let axis = y + 6.0;
    let _ = writeln!(out, r#"<line x1="{LEFT}" y1="{axis}" x2="{}" y2="{axis}" stroke="gray"/>"#, LEFT + WIDTH);
    let step = ((hi - lo) / 10).max(1);
    let mut t = lo;
    while t <= hi {
        let _ = writeln!(out, r#"<text x="{:.1}" y="{}" text-anchor="middle">{t}</text>"#, x(t), axis + 14.0);
        t += step;
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use nerveseq::barcode::Interval;

    #[test]
    fn draws_every_bar() {
        let mut b = Barcode::new();
        b.push(0, Interval::essential(0));
        b.push(1, Interval::finite(2, 5));
        let svg = render(&b, "x < y");
        assert_eq!(svg.matches("<line").count(), 3);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(svg.contains("x &lt; y"));
    }

    #[test]
    fn empty_barcode_still_renders() {
        let svg = render(&Barcode::new(), "empty");
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
