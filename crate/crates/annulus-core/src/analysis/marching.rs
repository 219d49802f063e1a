//! Marching squares over the interior lattice with explicit handling of
//! exactly-zero corners, so zero lines that run along lattice rows (mirror
//! axes of the directional derivative) come out as clean polylines.

use std::collections::HashMap;

use crate::geom::Point;
use crate::grid::Grid;

/// Where a zero crossing sits: on a node, or strictly inside a lattice edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum CrossId {
    Node(u32, u32),
    /// Horizontal edge from (ix, iy) to (ix+1, iy); fraction stored separately.
    HEdge(u32, u32),
    /// Vertical edge from (ix, iy) to (ix, iy+1).
    VEdge(u32, u32),
}

pub struct MarchedCurve {
    pub points: Vec<Point>,
    pub closed: bool,
}

/// Extracts the zero set of a node-sampled function over all cells whose
/// four corners are defined (`None` corners are skipped). Values whose
/// magnitude is at most `snap` count as exactly zero.
pub fn march_zero_set<F>(grid: &Grid, value: F, snap: f64) -> Vec<MarchedCurve>
where
    F: Fn(usize, usize) -> Option<f64>,
{
    let sign = |v: f64| -> i8 {
        if v.abs() <= snap {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    };

    let mut positions: HashMap<CrossId, Point> = HashMap::new();
    let mut segments: Vec<(CrossId, CrossId)> = Vec::new();
    let mut full_edges: Vec<(CrossId, CrossId)> = Vec::new();

    let node_pos = |id: CrossId, positions: &mut HashMap<CrossId, Point>, p: Point| {
        positions.entry(id).or_insert(p);
    };

    for iy in 0..grid.ny() - 1 {
        for ix in 0..grid.nx() - 1 {
            let corners = [
                (ix, iy),
                (ix + 1, iy),
                (ix + 1, iy + 1),
                (ix, iy + 1),
            ];
            let mut vals = [0.0f64; 4];
            let mut ok = true;
            for (k, &(cx, cy)) in corners.iter().enumerate() {
                match value(cx, cy) {
                    Some(v) => vals[k] = v,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let signs = [sign(vals[0]), sign(vals[1]), sign(vals[2]), sign(vals[3])];
            if signs.iter().all(|&s| s > 0) || signs.iter().all(|&s| s < 0) {
                continue;
            }

            // cell edges in cyclic order: bottom, right, top, left
            let edges: [(usize, usize, CrossId); 4] = [
                (0, 1, CrossId::HEdge(ix as u32, iy as u32)),
                (1, 2, CrossId::VEdge(ix as u32 + 1, iy as u32)),
                (3, 2, CrossId::HEdge(ix as u32, iy as u32 + 1)),
                (0, 3, CrossId::VEdge(ix as u32, iy as u32)),
            ];

            let mut crossings: Vec<CrossId> = Vec::with_capacity(4);
            let push_unique = |id: CrossId, crossings: &mut Vec<CrossId>| {
                if !crossings.contains(&id) {
                    crossings.push(id);
                }
            };

            // per-edge state: full-zero edge, strict crossing (with its
            // parameter), or nothing
            let mut full_zero = [false; 4];
            let mut strict_t = [f64::NAN; 4];
            for (e, &(ka, kb, edge_id)) in edges.iter().enumerate() {
                let (sa, sb) = (signs[ka], signs[kb]);
                let (pa, pb) = (
                    grid.node_point(corners[ka].0, corners[ka].1),
                    grid.node_point(corners[kb].0, corners[kb].1),
                );
                if sa == 0 && sb == 0 {
                    full_zero[e] = true;
                    let ia = CrossId::Node(corners[ka].0 as u32, corners[ka].1 as u32);
                    let ib = CrossId::Node(corners[kb].0 as u32, corners[kb].1 as u32);
                    node_pos(ia, &mut positions, pa);
                    node_pos(ib, &mut positions, pb);
                    let key = if ia_le(ia, ib) { (ia, ib) } else { (ib, ia) };
                    full_edges.push(key);
                } else if sa * sb < 0 {
                    let t = vals[ka] / (vals[ka] - vals[kb]);
                    strict_t[e] = t;
                    node_pos(edge_id, &mut positions, pa.add(pb.sub(pa).scale(t)));
                    push_unique(edge_id, &mut crossings);
                }
            }

            // zero corners emit a node crossing when the curve genuinely
            // enters the cell (the two adjacent corners have opposite signs)
            for k in 0..4 {
                if signs[k] == 0 {
                    let prev = signs[(k + 3) % 4];
                    let next = signs[(k + 1) % 4];
                    if prev * next < 0 {
                        let id = CrossId::Node(corners[k].0 as u32, corners[k].1 as u32);
                        node_pos(id, &mut positions, grid.node_point(corners[k].0, corners[k].1));
                        push_unique(id, &mut crossings);
                    }
                }
            }

            match crossings.len() {
                1 => {
                    // A curve crossing a zero line that runs along a lattice
                    // edge (e.g. the ring remnant through a symmetry axis):
                    // the bilinear zero set connects the strict crossing
                    // straight to the opposite full-zero edge at the same
                    // parameter, forming the junction point there.
                    let cross_edge = (0..4).find(|&e| !strict_t[e].is_nan());
                    if let Some(e) = cross_edge {
                        let opp = (e + 2) % 4;
                        if full_zero[opp] && crossings[0] == edges[e].2 {
                            let (ka, kb, opp_id) = edges[opp];
                            let pa = grid.node_point(corners[ka].0, corners[ka].1);
                            let pb = grid.node_point(corners[kb].0, corners[kb].1);
                            let t = strict_t[e];
                            node_pos(opp_id, &mut positions, pa.add(pb.sub(pa).scale(t)));
                            segments.push((crossings[0], opp_id));
                        }
                    }
                }
                2 => segments.push((crossings[0], crossings[1])),
                4 => {
                    // saddle cell: disambiguate by the bilinear center sample
                    let center = 0.25 * (vals[0] + vals[1] + vals[2] + vals[3]);
                    // order crossings by edge: bottom, right, top, left
                    let by_edge: Vec<CrossId> = edges
                        .iter()
                        .filter_map(|&(_, _, id)| crossings.iter().copied().find(|c| *c == id))
                        .collect();
                    if by_edge.len() == 4 {
                        let (b, r, t, l) = (by_edge[0], by_edge[1], by_edge[2], by_edge[3]);
                        if (center > 0.0) == (signs[0] > 0) {
                            segments.push((b, r));
                            segments.push((t, l));
                        } else {
                            segments.push((b, l));
                            segments.push((t, r));
                        }
                    }
                }
                _ => {} // tangency or junction; neighbors carry the curve
            }
        }
    }

    // adjacent cells emit shared zero edges twice; dedupe in a stable order
    full_edges.sort_by_key(|&(a, b)| (format_id(a), format_id(b)));
    full_edges.dedup();
    segments.extend(full_edges);
    link_segments(segments, &positions)
}

fn ia_le(a: CrossId, b: CrossId) -> bool {
    format_id(a) <= format_id(b)
}

fn format_id(id: CrossId) -> (u8, u32, u32) {
    match id {
        CrossId::Node(x, y) => (0, x, y),
        CrossId::HEdge(x, y) => (1, x, y),
        CrossId::VEdge(x, y) => (2, x, y),
    }
}

/// Chains segments sharing endpoint ids into polylines; open chains first
/// (started from degree-1 ids), remaining cycles marked closed.
fn link_segments(
    segments: Vec<(CrossId, CrossId)>,
    positions: &HashMap<CrossId, Point>,
) -> Vec<MarchedCurve> {
    let mut adjacency: HashMap<CrossId, Vec<usize>> = HashMap::new();
    for (i, &(a, b)) in segments.iter().enumerate() {
        adjacency.entry(a).or_default().push(i);
        adjacency.entry(b).or_default().push(i);
    }
    let mut used = vec![false; segments.len()];
    let mut curves = Vec::new();

    let walk = |start_seg: usize, used: &mut Vec<bool>, start_from: CrossId| -> Vec<CrossId> {
        let mut chain = vec![start_from];
        let mut current = start_from;
        let mut seg = start_seg;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next_id = if a == current { b } else { a };
            chain.push(next_id);
            current = next_id;
            let next_seg = adjacency
                .get(&current)
                .and_then(|list| list.iter().copied().find(|&s| !used[s]));
            match next_seg {
                Some(s) => seg = s,
                None => break,
            }
        }
        chain
    };

    // open chains
    let endpoints: Vec<CrossId> = adjacency
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(k, _)| *k)
        .collect();
    let mut endpoints = endpoints;
    endpoints.sort_by_key(|&id| format_id(id));
    for id in endpoints {
        let seg = adjacency[&id].iter().copied().find(|&s| !used[s]);
        if let Some(seg) = seg {
            let chain = walk(seg, &mut used, id);
            curves.push(MarchedCurve {
                points: chain.iter().map(|c| positions[c]).collect(),
                closed: false,
            });
        }
    }
    // remaining cycles
    for start in 0..segments.len() {
        if !used[start] {
            let chain = walk(start, &mut used, segments[start].0);
            let mut points: Vec<Point> = chain.iter().map(|c| positions[c]).collect();
            let closed = chain.first() == chain.last();
            if closed && points.len() > 1 {
                points.pop();
            }
            curves.push(MarchedCurve { points, closed });
        }
    }
    curves
}
