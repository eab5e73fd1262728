//! Incremental upper convex hull over a convex polygonal rim.
//!
//! The rim `C_0..C_{n-1}` sits at height 0 and every lifted point projects
//! strictly inside it with nonnegative height. We close the rim with a
//! virtual apex below the plane, so the starting polytope is a cone with a
//! flat fan on top, and then insert the lifted points one at a time. Only the
//! top of the polytope ever changes: the cone's side faces cannot be seen
//! from the prism above the rim.

use std::collections::HashMap;

pub(crate) const VISIBILITY_EPS: f64 = 1e-10;

pub(crate) type P3 = [f64; 3];

#[derive(Debug, Clone)]
struct Face {
    v: [usize; 3],
    // nb[i] is the face across edge (v[i], v[i+1])
    nb: [usize; 3],
    normal: P3,
    offset: f64,
    alive: bool,
}

fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: P3, b: P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn plane(a: P3, b: P3, c: P3) -> (P3, f64) {
    let n = cross(sub(b, a), sub(c, a));
    let len = dot(n, n).sqrt();
    if len < 1e-300 {
        return ([0.0; 3], 0.0);
    }
    let n = [n[0] / len, n[1] / len, n[2] / len];
    (n, dot(n, a))
}

pub(crate) struct Hull {
    pub points: Vec<P3>,
    faces: Vec<Face>,
    n_rim: usize,
}

impl Hull {
    /// Cone over the rim polygon (counter-clockwise, at z = 0) with its apex
    /// at `(0, 0, -1)`, topped by a fan from `C_0`.
    pub fn over_rim(rim: &[[f64; 2]]) -> Hull {
        let n = rim.len();
        debug_assert!(n >= 3);
        let mut points: Vec<P3> = rim.iter().map(|c| [c[0], c[1], 0.0]).collect();
        let apex = n;
        points.push([0.0, 0.0, -1.0]);

        let mut tris: Vec<[usize; 3]> = Vec::with_capacity(2 * n - 2);
        for k in 0..n {
            tris.push([apex, (k + 1) % n, k]);
        }
        for k in 1..n - 1 {
            tris.push([0, k, k + 1]);
        }
        let mut edge_owner: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * tris.len());
        for (f, t) in tris.iter().enumerate() {
            for i in 0..3 {
                edge_owner.insert((t[i], t[(i + 1) % 3]), f);
            }
        }
        let faces = tris
            .iter()
            .map(|&t| {
                let mut nb = [0; 3];
                for i in 0..3 {
                    nb[i] = edge_owner[&(t[(i + 1) % 3], t[i])];
                }
                let (normal, offset) = plane(points[t[0]], points[t[1]], points[t[2]]);
                Face {
                    v: t,
                    nb,
                    normal,
                    offset,
                    alive: true,
                }
            })
            .collect();
        Hull {
            points,
            faces,
            n_rim: n,
        }
    }

    pub fn apex(&self) -> usize {
        self.n_rim
    }

    fn distance(&self, f: usize, p: P3) -> f64 {
        let face = &self.faces[f];
        dot(face.normal, p) - face.offset
    }

    /// Adds `p` to the hull. Returns `false` when the point is inside (or on)
    /// the current hull, or when the visible region is numerically ambiguous.
    pub fn insert(&mut self, p: P3) -> bool {
        let mut seed = usize::MAX;
        let mut best = VISIBILITY_EPS;
        for (f, face) in self.faces.iter().enumerate() {
            if face.alive {
                let d = self.distance(f, p);
                if d > best {
                    best = d;
                    seed = f;
                }
            }
        }
        if seed == usize::MAX {
            return false;
        }

        let mut visible = vec![seed];
        let mut is_visible = HashMap::new();
        is_visible.insert(seed, true);
        let mut head = 0;
        while head < visible.len() {
            let f = visible[head];
            head += 1;
            for &g in &self.faces[f].nb {
                if is_visible.contains_key(&g) {
                    continue;
                }
                let vis = self.distance(g, p) > VISIBILITY_EPS;
                is_visible.insert(g, vis);
                if vis {
                    visible.push(g);
                }
            }
        }

        // horizon edges (a, b, outside face, its edge slot), keyed by a
        let mut horizon: HashMap<usize, (usize, usize, usize)> = HashMap::new();
        for &f in &visible {
            let face = &self.faces[f];
            for i in 0..3 {
                let g = face.nb[i];
                if is_visible[&g] {
                    continue;
                }
                let (a, b) = (face.v[i], face.v[(i + 1) % 3]);
                let slot = match self.faces[g].nb.iter().position(|&x| x == f) {
                    Some(s) => s,
                    None => return false,
                };
                if horizon.insert(a, (b, g, slot)).is_some() {
                    return false;
                }
            }
        }
        let start = match horizon.keys().min() {
            Some(&s) => s,
            None => return false,
        };
        let mut cycle = Vec::with_capacity(horizon.len());
        let mut a = start;
        loop {
            let &(b, g, slot) = match horizon.get(&a) {
                Some(e) => e,
                None => return false,
            };
            cycle.push((a, b, g, slot));
            a = b;
            if a == start || cycle.len() > horizon.len() {
                break;
            }
        }
        if a != start || cycle.len() != horizon.len() {
            return false;
        }

        let pi = self.points.len();
        self.points.push(p);
        let base = self.faces.len();
        let k = cycle.len();
        for (j, &(a, b, g, slot)) in cycle.iter().enumerate() {
            let (normal, offset) = plane(self.points[a], self.points[b], p);
            self.faces.push(Face {
                v: [a, b, pi],
                nb: [g, base + (j + 1) % k, base + (j + k - 1) % k],
                normal,
                offset,
                alive: true,
            });
            self.faces[g].nb[slot] = base + j;
        }
        for &f in &visible {
            self.faces[f].alive = false;
        }
        true
    }

    /// Live faces not touching the virtual apex.
    pub fn top_faces(&self) -> impl Iterator<Item = ([usize; 3], P3)> + '_ {
        let apex = self.apex();
        self.faces
            .iter()
            .filter(move |f| f.alive && !f.v.contains(&apex))
            .map(|f| (f.v, f.normal))
    }

    #[cfg(test)]
    fn check_consistency(&self) {
        for (i, f) in self.faces.iter().enumerate().filter(|(_, f)| f.alive) {
            for s in 0..3 {
                let g = &self.faces[f.nb[s]];
                assert!(g.alive, "face {i} borders a dead face");
                let (a, b) = (f.v[s], f.v[(s + 1) % 3]);
                let back = (0..3).find(|&t| g.v[t] == b && g.v[(t + 1) % 3] == a);
                assert!(back.is_some(), "face {i} edge {s} has no twin");
                assert_eq!(g.nb[back.unwrap()], i);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rim(n: usize) -> Vec<[f64; 2]> {
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                [t.cos(), t.sin()]
            })
            .collect()
    }

    #[test]
    fn initial_polytope_is_closed() {
        let h = Hull::over_rim(&rim(7));
        h.check_consistency();
        assert_eq!(h.top_faces().count(), 5);
        assert!(h.top_faces().all(|(_, n)| (n[2] - 1.0).abs() < 1e-15));
    }

    #[test]
    fn single_apex_gives_fan() {
        let mut h = Hull::over_rim(&rim(6));
        assert!(h.insert([0.0, 0.0, 1.0]));
        h.check_consistency();
        let top: Vec<_> = h.top_faces().collect();
        assert_eq!(top.len(), 6);
        assert!(top.iter().all(|(v, _)| v.contains(&7)));
    }

    #[test]
    fn points_below_are_rejected() {
        let mut h = Hull::over_rim(&rim(8));
        assert!(h.insert([0.0, 0.0, 1.0]));
        assert!(!h.insert([0.1, 0.1, 0.2]));
        assert!(!h.insert([0.2, 0.0, 0.0]));
        h.check_consistency();
        assert_eq!(h.top_faces().count(), 8);
    }

    #[test]
    fn many_points_keep_adjacency() {
        let mut h = Hull::over_rim(&rim(40));
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let r = 0.95 * next().sqrt();
            let t = 2.0 * PI * next();
            let z = 1.0 - r * r + 0.05 * next();
            h.insert([r * t.cos(), r * t.sin(), z]);
        }
        h.check_consistency();
        // every inserted point lies on or below every top plane
        for (v, n) in h.top_faces() {
            let off = dot(n, h.points[v[0]]);
            for p in &h.points {
                assert!(dot(n, *p) - off <= 1e-9);
            }
        }
    }
}
