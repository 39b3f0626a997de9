"""
Exact low-dimensional pictures of M: the planar boundary as four circle
arcs, a triangle mesh of the 3D body, Wavefront OBJ export, and point
lists for the disk segment A and the triangles T_{alpha,beta}.
"""
import collections
import io
import logging
import math

import numpy as np

from .body import SQRT2, TWO_MINUS_SQRT2, BodySpec, radial_extent
from .bounds import triangle_feasible
from .exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

# (tag, centre, radius, start angle, end angle), counter-clockwise from (sqrt(2), 0)
ARCS_2D = (
    ("outer", (0.0, 0.0), SQRT2, 0.0, 0.5 * math.pi),
    ("mixed_center_e1", (SQRT2, 0.0), 2.0, 0.75 * math.pi, math.pi),
    ("inner", (0.0, 0.0), TWO_MINUS_SQRT2, math.pi, 1.5 * math.pi),
    ("mixed_center_e2", (0.0, SQRT2), 2.0, 1.5 * math.pi, 1.75 * math.pi),
)


class BoundaryPolyline2D:
    """
    Closed counter-clockwise loop of boundary points of M in the plane.
    `arc_tags[i]` names the arc carrying segment i (vertex i to i+1).
    """

    def __init__(self, vertices: np.ndarray, arc_tags: list):
        self.vertices = np.asarray(vertices, dtype=float)
        self.arc_tags = list(arc_tags)

    def segments(self) -> np.ndarray:
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    def perimeter(self) -> float:
        return float(np.sum(np.linalg.norm(self.segments(), axis=1)))

    def signed_area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def is_ccw(self) -> bool:
        return self.signed_area() > 0.0

    def is_simple(self) -> bool:
        """
        The loop is star-shaped about the origin, so it is simple iff the
        polar angle of the vertices strictly increases once around.
        """
        angles = np.unwrap(np.arctan2(self.vertices[:, 1], self.vertices[:, 0]))
        steps = np.diff(np.append(angles, angles[0] + 2.0 * math.pi))
        return bool(np.all(steps > 0.0))

    def to_rows(self) -> list:
        return [(float(x), float(y)) for x, y in self.vertices]

    def to_dict(self):
        return {
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
            "arc_tags": self.arc_tags,
        }


def boundary_polyline_2d(points_per_arc: int) -> BoundaryPolyline2D:
    """
    Boundary of M in R^2: the sqrt(2)-arc in the (+,+) quadrant, the
    (2 - sqrt(2))-arc in (-,-), and radius-2 arcs centred at sqrt(2) e1
    (quadrant (-,+)) and sqrt(2) e2 (quadrant (+,-)). Arc end points are
    the exact circle intersections (+-sqrt(2), 0), (0, +-sqrt(2)) and
    (sqrt(2) - 2) e_i; each arc gets `points_per_arc` vertices, its end
    point being the next arc's first vertex.
    """
    if isinstance(points_per_arc, bool) or int(points_per_arc) != points_per_arc or points_per_arc < 2:
        raise InvalidParameterError("points_per_arc must be an integer >= 2")
    m = int(points_per_arc)
    vertices = []
    tags = []
    for tag, (cx, cy), radius, t0, t1 in ARCS_2D:
        t = t0 + (t1 - t0) * np.arange(m) / m
        pts = np.column_stack([cx + radius * np.cos(t), cy + radius * np.sin(t)])
        # the arc starts exactly on the axis
        pts[0] = _axis_point(tag)
        vertices.append(pts)
        tags.extend([tag] * m)
    return BoundaryPolyline2D(np.vstack(vertices), tags)


def _axis_point(tag: str):
    return {
        "outer": (SQRT2, 0.0),
        "mixed_center_e1": (0.0, SQRT2),
        "inner": (SQRT2 - 2.0, 0.0),
        "mixed_center_e2": (0.0, SQRT2 - 2.0),
    }[tag]


class TriangleMesh3D:
    """
    Triangle mesh with outward (counter-clockwise seen from outside)
    faces. `groups`, when present, maps group names to face indices.
    """

    def __init__(self, vertices: np.ndarray, faces: np.ndarray, groups: dict = None):
        self.vertices = np.asarray(vertices, dtype=float)
        self.faces = np.asarray(faces, dtype=np.int64)
        self.groups = groups

    def edge_counts(self) -> collections.Counter:
        """
        Number of faces on each undirected edge.
        """
        f = self.faces
        edges = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        edges.sort(axis=1)
        return collections.Counter(map(tuple, edges.tolist()))

    def is_watertight(self) -> bool:
        return all(c == 2 for c in self.edge_counts().values())

    def signed_volume(self) -> float:
        """
        Enclosed volume by the divergence theorem: sum of det(v0, v1, v2) / 6.
        """
        v = self.vertices[self.faces]
        return float(np.sum(np.einsum("ij,ij->i", v[:, 0], np.cross(v[:, 1], v[:, 2])))) / 6.0

    def max_edge_length(self) -> float:
        v = self.vertices[self.faces]
        lengths = np.linalg.norm(v - np.roll(v, -1, axis=1), axis=2)
        return float(np.max(lengths))

    def width(self, theta) -> float:
        proj = self.vertices @ np.asarray(theta, dtype=float)
        return float(np.max(proj) - np.min(proj))

    def face_octants(self) -> list:
        """
        Sign pattern such as "+-+" of each face centroid.
        """
        centroids = self.vertices[self.faces].mean(axis=1)
        return ["".join("+" if c >= 0 else "-" for c in row) for row in centroids]


def _octahedron_faces():
    for sx in (1, -1):
        for sy in (1, -1):
            for sz in (1, -1):
                a = (sx, 0, 0)
                b = (0, sy, 0)
                c = (0, 0, sz)
                if sx * sy * sz < 0:
                    b, c = c, b
                yield np.array(a), np.array(b), np.array(c)


def mesh_3d(subdivision_level: int) -> TriangleMesh3D:
    """
    Mesh of M in R^3 from the octahedron with vertices +-e_i, each face
    split into 4^(level-1) triangles, projected to the sphere and scaled
    by the radial function. Octant boundaries, where the boundary of M is
    not smooth, run along mesh edges.
    """
    if isinstance(subdivision_level, bool) or int(subdivision_level) != subdivision_level or subdivision_level < 1:
        raise InvalidParameterError("subdivision_level must be an integer >= 1")
    freq = 2 ** (int(subdivision_level) - 1)
    index = {}
    keys = []
    faces = []

    def vertex(key):
        if key not in index:
            index[key] = len(keys)
            keys.append(key)
        return index[key]

    for a, b, c in _octahedron_faces():
        grid = {}
        for i in range(freq + 1):
            for j in range(freq + 1 - i):
                key = tuple((a * (freq - i - j) + b * i + c * j).tolist())
                grid[i, j] = vertex(key)
        for i in range(freq):
            for j in range(freq - i):
                faces.append((grid[i, j], grid[i + 1, j], grid[i, j + 1]))
                if i + j < freq - 1:
                    faces.append((grid[i + 1, j], grid[i + 1, j + 1], grid[i, j + 1]))

    points = np.array(keys, dtype=float)
    directions = points / np.linalg.norm(points, axis=1, keepdims=True)
    rho = radial_extent(BodySpec(3), directions)
    logger.debug("mesh level %d: %d vertices, %d faces", subdivision_level, len(keys), len(faces))
    return TriangleMesh3D(directions * rho[:, None], np.array(faces, dtype=np.int64))


def export_obj(mesh: TriangleMesh3D, colorize_by_octant: bool = False) -> bytes:
    """
    Wavefront OBJ text: `v x y z` records, then 1-indexed `f i j k`
    records. With `colorize_by_octant`, faces are grouped by the sign
    pattern of their centroid, one `g`/`usemtl` pair per octant.
    """
    out = io.StringIO()
    out.write("# body of constant width 2 in R^3\n")
    for x, y, z in mesh.vertices:
        out.write("v {!r} {!r} {!r}\n".format(float(x), float(y), float(z)))
    if colorize_by_octant:
        by_octant = collections.defaultdict(list)
        for i, octant in enumerate(mesh.face_octants()):
            by_octant[octant].append(i)
        for octant in sorted(by_octant):
            out.write("g octant_{}\n".format(octant))
            out.write("usemtl octant_{}\n".format(octant))
            for i in by_octant[octant]:
                out.write("f {} {} {}\n".format(*(int(x) + 1 for x in mesh.faces[i])))
    else:
        for face in mesh.faces:
            out.write("f {} {} {}\n".format(*(int(x) + 1 for x in face)))
    return out.getvalue().encode("utf-8")


def write_obj(mesh: TriangleMesh3D, path, colorize_by_octant: bool = False):
    with open(path, "wb") as fh:
        fh.write(export_obj(mesh, colorize_by_octant))


def parse_obj(data) -> TriangleMesh3D:
    """
    Read `v`, `f`, and `g` records of an OBJ file (bytes or str). Face
    entries of the form `i/j/k` keep only the vertex index.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    vertices = []
    faces = []
    groups = {}
    current = None
    for line in data.splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            vertices.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            idx = [int(p.split("/")[0]) - 1 for p in parts[1:]]
            if len(idx) != 3:
                raise InvalidParameterError("only triangular faces are supported")
            if current is not None:
                groups[current].append(len(faces))
            faces.append(idx)
        elif parts[0] == "g":
            current = " ".join(parts[1:])
            groups.setdefault(current, [])
    return TriangleMesh3D(
        np.array(vertices, dtype=float).reshape(-1, 3),
        np.array(faces, dtype=np.int64).reshape(-1, 3),
        groups or None,
    )


def disk_segment_plot_data(points: int = 200) -> list:
    """
    Outline of A as a closed point list: the arc from (0, 2 - sqrt(2)) to
    (sqrt(2), 0), then back along the axes through the origin.
    """
    if points < 2:
        raise InvalidParameterError("points must be >= 2")
    phi = np.linspace(0.0, 0.25 * math.pi, points)
    arc = [(2.0 * math.sin(p), max(2.0 * math.cos(p) - SQRT2, 0.0)) for p in phi]
    arc[0] = (0.0, TWO_MINUS_SQRT2)
    arc[-1] = (SQRT2, 0.0)
    return arc + [(0.0, 0.0), (0.0, TWO_MINUS_SQRT2)]


def triangle_plot_data(alpha: float, beta: float) -> list:
    """
    Closed outline of T_{alpha,beta}. Raises for nonpositive intercepts;
    infeasible triangles are still drawn.
    """
    triangle_feasible(alpha, beta)
    return [(0.0, 0.0), (float(alpha), 0.0), (0.0, float(beta)), (0.0, 0.0)]
