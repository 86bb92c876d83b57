//! Standard quivers used throughout the tests and the acceptance matrix.

use crate::quiver::{Quiver, RawArrow, RawQuiver};

fn build(vertices: &[&str], arrows: &[(&str, &str)]) -> Quiver {
    let raw = RawQuiver {
        vertices: vertices.iter().map(|s| s.to_string()).collect(),
        arrows: arrows
            .iter()
            .enumerate()
            .map(|(i, (t, h))| RawArrow {
                id: format!("a{}", i + 1),
                tail: t.to_string(),
                head: h.to_string(),
            })
            .collect(),
    };
    Quiver::new(&raw).expect("catalog quivers are valid")
}

/// Kronecker quiver: two arrows `1 -> 2`.
pub fn kronecker() -> Quiver {
    build(&["1", "2"], &[("1", "2"), ("1", "2")])
}

/// Acyclic cycle with one source and one sink joined by paths of `long`
/// and `short` arrows; its non-homogeneous tubes have ranks `long` and
/// `short`. `a_tilde(1, 1)` is the Kronecker quiver.
pub fn a_tilde(long: usize, short: usize) -> Quiver {
    assert!(long >= 1 && short >= 1);
    let n = long + short;
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let sink = n - 1;
    let mut arrows = Vec::new();
    let mut path = |inner: std::ops::Range<usize>| {
        let mut prev = 0;
        for v in inner {
            arrows.push((prev, v));
            prev = v;
        }
        arrows.push((prev, sink));
    };
    path(1..long);
    path(long..long + short - 1);
    let v: Vec<&str> = names.iter().map(String::as_str).collect();
    let a: Vec<(&str, &str)> = arrows.iter().map(|&(t, h)| (v[t], v[h])).collect();
    build(&v, &a)
}

/// `1 -> 2, 2 -> 3, 1 -> 3`.
pub fn a2_acyclic() -> Quiver {
    a_tilde(2, 1)
}

/// Four sources `a1, a2, b1, b2` each with one arrow into the sink `z`.
pub fn d4_star() -> Quiver {
    build(
        &["a1", "a2", "b1", "b2", "z"],
        &[("a1", "z"), ("a2", "z"), ("b1", "z"), ("b2", "z")],
    )
}

/// `a1, a2 -> z1 -> z2 <- b1, b2`.
pub fn d5() -> Quiver {
    build(
        &["a1", "a2", "z1", "b1", "b2", "z2"],
        &[("a1", "z1"), ("a2", "z1"), ("z1", "z2"), ("b1", "z2"), ("b2", "z2")],
    )
}

/// Three arms of length two pointing into the centre `z`.
pub fn e6() -> Quiver {
    build(
        &["a1", "a2", "b1", "b2", "c1", "c2", "z"],
        &[
            ("a1", "a2"),
            ("a2", "z"),
            ("b1", "b2"),
            ("b2", "z"),
            ("c1", "c2"),
            ("c2", "z"),
        ],
    )
}

pub fn e7() -> Quiver {
    build(
        &["a1", "a2", "a3", "b1", "b2", "b3", "c", "z"],
        &[
            ("a1", "a2"),
            ("a2", "a3"),
            ("a3", "z"),
            ("b1", "b2"),
            ("b2", "b3"),
            ("b3", "z"),
            ("c", "z"),
        ],
    )
}

pub fn e8() -> Quiver {
    build(
        &["a1", "a2", "a3", "a4", "a5", "b1", "b2", "c", "z"],
        &[
            ("a1", "a2"),
            ("a2", "a3"),
            ("a3", "a4"),
            ("a4", "a5"),
            ("a5", "z"),
            ("b1", "b2"),
            ("b2", "z"),
            ("c", "z"),
        ],
    )
}

/// Dynkin path `1 -> 2 -> ... -> n`.
pub fn path(n: usize) -> Quiver {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let v: Vec<&str> = names.iter().map(String::as_str).collect();
    let a: Vec<(&str, &str)> = v.windows(2).map(|w| (w[0], w[1])).collect();
    build(&v, &a)
}

/// Two vertices joined by three arrows.
pub fn three_kronecker() -> Quiver {
    build(&["1", "2"], &[("1", "2"), ("1", "2"), ("1", "2")])
}
