//! Standard triangulations used as seeds.

use crate::surface::MarkedSurface;
use crate::triangulation::{IdealTriangulation, Side};

fn bmark(c: usize, j: usize) -> String {
    format!("b{c}_{j}")
}

fn bseg(c: usize, j: usize) -> String {
    format!("s{c}_{j}")
}

fn arc(i: usize) -> String {
    format!("e{i}")
}

fn build(surface: MarkedSurface, n_arcs: usize, segs: Vec<String>, tris: Vec<[String; 3]>, corners: Vec<[String; 3]>) -> IdealTriangulation {
    let arcs: Vec<String> = (0..n_arcs).map(arc).collect();
    IdealTriangulation::from_labels(surface, &arcs, &segs, &tris, &corners).expect("builder produces a valid triangulation")
}

/// Fan triangulation of a disc with `k >= 3` boundary marks, all diagonals at `b0_0`.
pub fn polygon(k: usize) -> IdealTriangulation {
    assert!(k >= 3);
    let side_from_0 = |j: usize| if j == 1 { bseg(0, 0) } else { arc(j - 2) };
    let side_to_0 = |j: usize| if j == k - 1 { bseg(0, k - 1) } else { arc(j - 2) };
    let mut tris = Vec::new();
    let mut corners = Vec::new();
    for j in 1..k - 1 {
        tris.push([side_from_0(j), bseg(0, j), side_to_0(j + 1)]);
        corners.push([bmark(0, 0), bmark(0, j), bmark(0, j + 1)]);
    }
    let segs = (0..k).map(|j| bseg(0, j)).collect();
    build(MarkedSurface::disc(k as u32), k - 3, segs, tris, corners)
}

/// Star triangulation of a once-punctured disc with `k` boundary marks: one arc
/// from the puncture `p0` to every mark.
pub fn once_punctured_disc(k: usize) -> IdealTriangulation {
    assert!(k >= 1);
    let mut tris = Vec::new();
    let mut corners = Vec::new();
    for j in 0..k {
        let j1 = (j + 1) % k;
        tris.push([arc(j), bseg(0, j), arc(j1)]);
        corners.push(["p0".to_string(), bmark(0, j), bmark(0, j1)]);
    }
    let segs = (0..k).map(|j| bseg(0, j)).collect();
    build(MarkedSurface { genus: 0, punctures: 1, boundary: vec![k as u32] }, k, segs, tris, corners)
}

/// Annulus with `k1` marks on the outer and `k2` on the inner boundary.
pub fn annulus(k1: usize, k2: usize) -> IdealTriangulation {
    assert!(k1 >= 1 && k2 >= 1);
    // Arcs A_0..A_k1 join outer marks to b1_0; B_1..B_{k2-1} join b0_0 to inner marks.
    let a = |j: usize| arc(j);
    let b = |l: usize| {
        if l == 0 {
            arc(k1)
        } else if l == k2 {
            arc(0)
        } else {
            arc(k1 + l)
        }
    };
    let mut tris = Vec::new();
    let mut corners = Vec::new();
    for j in 0..k1 {
        tris.push([a(j + 1), bseg(0, j), a(j)]);
        corners.push([bmark(1, 0), bmark(0, (j + 1) % k1), bmark(0, j)]);
    }
    for l in 0..k2 {
        tris.push([bseg(1, l), b(l + 1), b(l)]);
        corners.push([bmark(1, l), bmark(1, (l + 1) % k2), bmark(0, 0)]);
    }
    let segs = (0..k1).map(|j| bseg(0, j)).chain((0..k2).map(|l| bseg(1, l))).collect();
    build(MarkedSurface { genus: 0, punctures: 0, boundary: vec![k1 as u32, k2 as u32] }, k1 + k2, segs, tris, corners)
}

/// Two triangles glued along all three sides; every puncture has valency 2.
pub fn three_punctured_sphere() -> IdealTriangulation {
    let s = |x: &str| x.to_string();
    build(
        MarkedSurface { genus: 0, punctures: 3, boundary: vec![] },
        3,
        vec![],
        vec![[s("e0"), s("e1"), s("e2")], [s("e0"), s("e2"), s("e1")]],
        vec![[s("p0"), s("p1"), s("p2")], [s("p1"), s("p0"), s("p2")]],
    )
}

/// Square torus cut along a diagonal; the single puncture is `p0`.
pub fn torus_one_puncture() -> IdealTriangulation {
    let s = |x: &str| x.to_string();
    build(
        MarkedSurface { genus: 1, punctures: 1, boundary: vec![] },
        3,
        vec![],
        vec![[s("e0"), s("e1"), s("e2")], [s("e0"), s("e1"), s("e2")]],
        vec![[s("p0"), s("p0"), s("p0")], [s("p0"), s("p0"), s("p0")]],
    )
}

/// Adds a puncture inside triangle `t` joined by three new arcs to its corners.
pub fn star_subdivide(tri: &IdealTriangulation, t: usize, puncture: &str) -> IdealTriangulation {
    let n = tri.n();
    let mut arcs: Vec<String> = tri.arcs().to_vec();
    for k in 0..3 {
        let mut label = arc(n + k);
        let mut bump = n + 3;
        while arcs.contains(&label) {
            label = arc(bump);
            bump += 1;
        }
        arcs.push(label);
    }
    let mut vertices = tri.vertices().to_vec();
    vertices.push(puncture.to_string());
    let q = vertices.len() - 1;
    let mut triangles = tri.triangles().to_vec();
    let mut corners = tri.corners().to_vec();
    let s = triangles[t];
    let c = corners[t];
    let g = |i: usize| Side::Arc(n + i % 3);
    let new: Vec<([Side; 3], [usize; 3])> =
        (0..3).map(|i| ([s[i], g(i + 1), g(i)], [c[i], c[(i + 1) % 3], q])).collect();
    triangles[t] = new[0].0;
    corners[t] = new[0].1;
    for (sides, cs) in new.into_iter().skip(1) {
        triangles.push(sides);
        corners.push(cs);
    }
    let mut surface = tri.surface().clone();
    surface.punctures += 1;
    IdealTriangulation::from_parts(surface, arcs, tri.boundary_segments().to_vec(), vertices, triangles, corners)
        .expect("subdivision is valid")
}
