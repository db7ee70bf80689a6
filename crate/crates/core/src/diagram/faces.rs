//! Face structure of a diagram derived from its rotation system.
//!
//! A dart is an edge traversed away from one of its ends; darts are indexed
//! by the end they leave.  Faces are traced by turning to the previous port
//! at every crossing and by continuing counterclockwise along the boundary
//! circle at every boundary point.  The face of sector `(i, i+1)` at a
//! crossing is the face of the dart leaving port `i`.

use super::planar::{port_add, End, PlanarDiagram, UnionFind};

/// One face: its darts, its corners and the boundary gaps it touches.
#[derive(Clone, Debug, Default)]
pub struct Face {
    /// Darts in traversal order, identified by the end they leave.
    pub darts: Vec<End>,
    /// Corners `(crossing, i)` meaning the sector between ports `i` and `i+1`.
    pub corners: Vec<(u32, u8)>,
    /// Boundary gaps `g` (between points `g` and `g+1`) contained in the face.
    pub gaps: Vec<u32>,
}

/// Faces of a diagram with a dart-to-face lookup table.
#[derive(Clone, Debug)]
pub struct FaceData {
    face_of: Vec<u32>,
    faces: Vec<Face>,
    points: usize,
    crossings: usize,
}

impl FaceData {
    /// Traces all faces of `d`.
    pub fn new(d: &PlanarDiagram) -> Self {
        let n = d.end_count();
        let b = d.point_count() as u32;
        let mut face_of = vec![u32::MAX; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if face_of[start] != u32::MAX {
                continue;
            }
            let id = faces.len() as u32;
            let mut face = Face::default();
            let mut e = d.end_at(start);
            loop {
                let i = d.end_index(e);
                if face_of[i] != u32::MAX {
                    break;
                }
                face_of[i] = id;
                face.darts.push(e);
                match e {
                    End::Port(c, p) => face.corners.push((c, p)),
                    End::Point(x) => face.gaps.push((x + b - 1) % b),
                }
                e = match d.partner(e) {
                    End::Port(c, j) => End::Port(c, port_add(j, -1)),
                    End::Point(x) => End::Point((x + 1) % b),
                };
            }
            faces.push(face);
        }
        Self { face_of, faces, points: d.point_count(), crossings: d.crossing_count() }
    }

    /// Number of traced face cycles.
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// All faces.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// One face by id.
    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    fn index(&self, e: End) -> usize {
        match e {
            End::Port(c, p) => 4 * c as usize + p as usize,
            End::Point(x) => 4 * self.crossings + x as usize,
        }
    }

    /// Face containing the dart that leaves `e`.
    pub fn dart_face(&self, e: End) -> usize {
        self.face_of[self.index(e)] as usize
    }

    /// Face of sector `(i, i+1)` at crossing `c`.
    pub fn sector_face(&self, c: u32, i: u8) -> usize {
        self.dart_face(End::Port(c, i))
    }

    /// Face containing boundary gap `g` (between points `g` and `g+1`).
    pub fn gap_face(&self, g: u32) -> usize {
        self.dart_face(End::Point((g + 1) % self.points as u32))
    }

    /// True when the face touches the disk boundary.
    pub fn is_boundary_face(&self, f: usize) -> bool {
        !self.faces[f].gaps.is_empty()
    }

    /// Union-find over faces merging across every edge not marked as a wall.
    /// `is_wall` receives one end of each edge.
    pub fn regions(&self, d: &PlanarDiagram, is_wall: impl Fn(End) -> bool) -> UnionFind {
        let mut uf = UnionFind::new(self.faces.len());
        for i in 0..d.end_count() {
            let e = d.end_at(i);
            let f = d.partner(e);
            if d.end_index(f) < i || is_wall(e) {
                continue;
            }
            uf.union(self.dart_face(e), self.dart_face(f));
        }
        uf
    }
}
