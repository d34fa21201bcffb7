"""Perforated-domain specifications and structured conforming triangulations.

Two mesh families cover every experiment in the lab: polar tensor grids for
disks and annuli (curved boundaries approximated by inscribed polygons) and
Cartesian tensor grids for rectangles with axis-aligned rectangular holes
(exact geometry). Hole boundary edges are tagged separately from the outer
boundary so Robin terms can be assembled per boundary component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "OUTER",
    "HOLE",
    "Disk",
    "Rect",
    "ProblemSpec",
    "Mesh",
    "build_annulus_mesh",
    "build_disk_mesh",
    "build_rect_mesh",
    "build_rect_with_hole_mesh",
    "refine",
    "annulus_rings",
    "annulus_mesh_family",
    "disk_mesh_family",
    "save_mesh",
    "load_mesh",
    "match_vertices",
    "P1Interpolator",
]

OUTER = "OUTER"
HOLE = "HOLE"


# ----------------------------------------------------------------------------
# Problem specification
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Disk:
    """Disk of given radius, centered at the origin or at the hole center."""
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def circumradius(self):
        return self.radius

    @property
    def perimeter(self):
        return 2.0 * math.pi * self.radius


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle of half-widths (ax, ay); ay defaults to ax (square)."""
    ax: float
    ay: float = None

    def __post_init__(self):
        if self.ay is None:
            object.__setattr__(self, "ay", self.ax)
        if self.ax <= 0 or self.ay <= 0:
            raise ValueError("half-widths must be positive")

    @property
    def circumradius(self):
        return math.hypot(self.ax, self.ay)

    @property
    def perimeter(self):
        return 4.0 * (self.ax + self.ay)


@dataclass(frozen=True)
class ProblemSpec:
    """Domain, scaled hole, and Robin parameter of one experiment.

    The hole at scale eps is ``hole_center + eps * hole``; its closure must
    fit, with margin, inside the largest ball around ``hole_center`` that is
    contained in the domain.
    """
    domain: object
    hole: object = None
    hole_center: tuple = (0.0, 0.0)
    eps: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.eps <= 1.0:
            raise ValueError("eps must lie in (0, 1]")
        if self.hole is not None:
            r0 = self.clearance()
            if r0 <= 0:
                raise ValueError("hole center lies outside the domain")
            if self.eps * self.hole.circumradius >= r0:
                raise ValueError("scaled hole is not strictly inside the domain")
            if 2.0 * self.eps * self.hole.circumradius >= r0:
                raise ValueError("hole diameter exceeds distance to the boundary")

    def clearance(self):
        """Distance from the hole center to the domain boundary."""
        x, y = self.hole_center
        if isinstance(self.domain, Disk):
            return self.domain.radius - math.hypot(x, y)
        return min(self.domain.ax - abs(x), self.domain.ay - abs(y))

    def with_eps(self, eps):
        return replace(self, eps=eps)


# ----------------------------------------------------------------------------
# Mesh container
# ----------------------------------------------------------------------------

@dataclass
class Mesh:
    """Conforming triangulation with tagged boundary edges.

    vertices: (n, 2) float array. triangles: (m, 3) int array, counter-
    clockwise. boundary_edges: (b, 2) int array with a parallel ``tags`` list
    of OUTER / HOLE strings. Treated as immutable once built.
    """
    vertices: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    tags: list

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        self.triangles = np.asarray(self.triangles, dtype=np.int64)
        self.boundary_edges = np.asarray(self.boundary_edges, dtype=np.int64).reshape(-1, 2)
        self.tags = list(self.tags)

    # -- geometry ------------------------------------------------------------

    def signed_areas(self):
        p = self.vertices[self.triangles]
        return 0.5 * ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
                      - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1]))

    def area(self):
        return float(np.sum(self.signed_areas()))

    @property
    def h_max(self):
        p = self.vertices[self.triangles]
        e = np.concatenate([p[:, 1] - p[:, 0], p[:, 2] - p[:, 1], p[:, 0] - p[:, 2]])
        return float(np.max(np.hypot(e[:, 0], e[:, 1])))

    def edge_lengths(self, tag=None):
        idx = np.arange(len(self.tags)) if tag is None else np.flatnonzero(
            np.asarray(self.tags) == tag)
        e = self.boundary_edges[idx]
        d = self.vertices[e[:, 1]] - self.vertices[e[:, 0]]
        return np.hypot(d[:, 0], d[:, 1])

    def boundary_length(self, tag):
        return float(np.sum(self.edge_lengths(tag)))

    def boundary_vertices(self, tag=None):
        idx = np.arange(len(self.tags)) if tag is None else np.flatnonzero(
            np.asarray(self.tags) == tag)
        return np.unique(self.boundary_edges[idx])

    # -- validation ----------------------------------------------------------

    def validate(self):
        """Check positivity, conformity, and the boundary tag partition."""
        areas = self.signed_areas()
        if np.any(areas <= 0):
            raise ValueError("triangle with non-positive signed area")
        counts = {}
        for tri in self.triangles:
            for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                key = (min(a, b), max(a, b))
                counts[key] = counts.get(key, 0) + 1
        if any(c > 2 for c in counts.values()):
            raise ValueError("edge shared by more than two triangles")
        boundary = {k for k, c in counts.items() if c == 1}
        tagged = {(min(a, b), max(a, b)) for a, b in self.boundary_edges}
        if boundary != tagged:
            raise ValueError("tagged boundary edges do not match mesh boundary")
        if len(tagged) != len(self.boundary_edges):
            raise ValueError("duplicate boundary edge tags")
        for t in self.tags:
            if t not in (OUTER, HOLE):
                raise ValueError(f"unknown boundary tag {t!r}")
        return True


# ----------------------------------------------------------------------------
# Structured builders
# ----------------------------------------------------------------------------

def _graded_radii(rho, R, n_intervals, grading):
    """Radial nodes on [rho, R], spacing growing geometrically away from rho."""
    if grading < 1.0:
        raise ValueError("grading must be >= 1")
    if grading == 1.0:
        return np.linspace(rho, R, n_intervals + 1)
    w = grading ** np.arange(n_intervals)
    cuts = np.concatenate([[0.0], np.cumsum(w)]) / np.sum(w)
    return rho + (R - rho) * cuts


def build_annulus_mesh(R, rho, n_r, n_theta, grading=1.15):
    """Polar tensor-grid triangulation of the annulus {rho <= r <= R}.

    ``n_r`` counts radial node rings (>= 2), ``n_theta`` angular sectors
    (>= 8). Radial spacing is geometrically graded toward r = rho with the
    given ratio. Inner ring edges are tagged HOLE, outer ring edges OUTER.
    """
    if rho <= 0 or R <= 0:
        raise ValueError("radii must be positive")
    if rho >= R:
        raise ValueError("need rho < R")
    if n_r < 2 or n_theta < 8:
        raise ValueError("need n_r >= 2 and n_theta >= 8")
    radii = _graded_radii(rho, R, n_r - 1, grading)
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    rr, tt = np.meshgrid(radii, theta, indexing="ij")
    vertices = np.column_stack([(rr * np.cos(tt)).ravel(), (rr * np.sin(tt)).ravel()])

    def vid(i, j):
        return i * n_theta + (j % n_theta)

    tris = []
    for i in range(n_r - 1):
        for j in range(n_theta):
            # quad corners: (a, b) on ring i, (d, c) on ring i+1; CCW is a-c-b / a-d-c
            a, b = vid(i, j), vid(i, j + 1)
            c, d = vid(i + 1, j + 1), vid(i + 1, j)
            tris.append((a, c, b))
            tris.append((a, d, c))
    edges, tags = [], []
    for j in range(n_theta):
        edges.append((vid(0, j), vid(0, j + 1)))
        tags.append(HOLE)
        edges.append((vid(n_r - 1, j), vid(n_r - 1, j + 1)))
        tags.append(OUTER)
    return Mesh(vertices, np.array(tris), np.array(edges), tags)


def build_disk_mesh(R, n_r, n_theta, grading=1.0):
    """Polar triangulation of the full disk: center fan plus n_r node rings.

    Grading > 1 concentrates rings toward the outer boundary, matching the
    annulus convention under the swap rho <-> R; the default is uniform.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    if n_r < 1 or n_theta < 8:
        raise ValueError("need n_r >= 1 and n_theta >= 8")
    if grading == 1.0:
        radii = np.linspace(0.0, R, n_r + 1)[1:]
    else:
        w = grading ** np.arange(n_r)[::-1]
        radii = R * np.cumsum(w) / np.sum(w)
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    rr, tt = np.meshgrid(radii, theta, indexing="ij")
    ring = np.column_stack([(rr * np.cos(tt)).ravel(), (rr * np.sin(tt)).ravel()])
    vertices = np.vstack([[[0.0, 0.0]], ring])

    def vid(i, j):
        return 1 + i * n_theta + (j % n_theta)

    tris = []
    for j in range(n_theta):
        tris.append((0, vid(0, j), vid(0, j + 1)))
    for i in range(n_r - 1):
        for j in range(n_theta):
            a, b = vid(i, j), vid(i, j + 1)
            c, d = vid(i + 1, j + 1), vid(i + 1, j)
            tris.append((a, c, b))
            tris.append((a, d, c))
    edges = [(vid(n_r - 1, j), vid(n_r - 1, j + 1)) for j in range(n_theta)]
    return Mesh(vertices, np.array(tris), np.array(edges), [OUTER] * n_theta)


def _breaks_with_lines(lo, hi, n_cell, lines, snap_frac=0.35):
    """Uniform breaks on [lo, hi] with extra lines inserted exactly.

    Base breaks closer than ``snap_frac`` of the base spacing to an inserted
    line are dropped, which avoids sliver cells.
    """
    base = np.linspace(lo, hi, n_cell + 1)
    spacing = (hi - lo) / n_cell
    keep = np.ones(len(base), dtype=bool)
    for line in lines:
        if not lo < line < hi:
            raise ValueError("inserted grid line outside the domain")
        close = np.abs(base - line) < snap_frac * spacing
        close[0] = close[-1] = False
        keep &= ~close
    breaks = np.unique(np.concatenate([base[keep], np.asarray(lines, dtype=float)]))
    return breaks


def _tensor_mesh(xb, yb, hole_box=None):
    """Triangulate a tensor grid, skipping cells inside ``hole_box`` if given."""
    nx, ny = len(xb) - 1, len(yb) - 1
    xx, yy = np.meshgrid(xb, yb, indexing="ij")
    vertices = np.column_stack([xx.ravel(), yy.ravel()])

    def vid(i, j):
        return i * (ny + 1) + j

    tris = []
    for i in range(nx):
        for j in range(ny):
            if hole_box is not None:
                x0, x1, y0, y1 = hole_box
                cx = 0.5 * (xb[i] + xb[i + 1])
                cy = 0.5 * (yb[j] + yb[j + 1])
                if x0 < cx < x1 and y0 < cy < y1:
                    continue
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    tris = np.array(tris)
    counts = {}
    for tri in tris:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            key = (min(a, b), max(a, b))
            counts[key] = counts.get(key, 0) + 1
    edges, tags = [], []
    tol = 1e-12 * max(xb[-1] - xb[0], yb[-1] - yb[0])
    for (a, b), c in counts.items():
        if c != 1:
            continue
        pa, pb = vertices[a], vertices[b]
        on_outer = (
            (abs(pa[0] - xb[0]) < tol and abs(pb[0] - xb[0]) < tol)
            or (abs(pa[0] - xb[-1]) < tol and abs(pb[0] - xb[-1]) < tol)
            or (abs(pa[1] - yb[0]) < tol and abs(pb[1] - yb[0]) < tol)
            or (abs(pa[1] - yb[-1]) < tol and abs(pb[1] - yb[-1]) < tol)
        )
        edges.append((a, b))
        tags.append(OUTER if on_outer else HOLE)
    used = np.unique(np.concatenate([tris.ravel(), np.array(edges).ravel()]))
    remap = -np.ones(len(vertices), dtype=np.int64)
    remap[used] = np.arange(len(used))
    return Mesh(vertices[used], remap[tris], remap[np.array(edges)], tags)


def build_rect_mesh(ax, ay, n_cell, extra_x=(), extra_y=()):
    """Cartesian triangulation of [-ax, ax] x [-ay, ay], no hole.

    ``extra_x`` / ``extra_y`` insert grid lines exactly, so a perforated and
    an unperforated mesh can share identical node positions.
    """
    if ax <= 0 or ay <= 0:
        raise ValueError("half-widths must be positive")
    xb = _breaks_with_lines(-ax, ax, n_cell, extra_x)
    yb = _breaks_with_lines(-ay, ay, n_cell, extra_y)
    return _tensor_mesh(xb, yb)


def build_rect_with_hole_mesh(ax, ay, hole_center, half_width, n_cell):
    """Rectangle with an axis-aligned square hole; grid lines hit the hole edges.

    The hole is the square of the given half-width centered at
    ``hole_center``; it must lie strictly inside the domain. Hole-edge
    segments are tagged HOLE, the outer rectangle OUTER. Cartesian cells tile
    the geometry exactly, so areas and the hole perimeter carry no
    discretization error.
    """
    if ax <= 0 or ay <= 0:
        raise ValueError("half-widths must be positive")
    if half_width <= 0:
        raise ValueError("hole half-width must be positive")
    cx, cy = hole_center
    if not (-ax < cx - half_width and cx + half_width < ax
            and -ay < cy - half_width and cy + half_width < ay):
        raise ValueError("hole touches or leaves the domain")
    xb = _breaks_with_lines(-ax, ax, n_cell, (cx - half_width, cx + half_width))
    yb = _breaks_with_lines(-ay, ay, n_cell, (cy - half_width, cy + half_width))
    box = (cx - half_width, cx + half_width, cy - half_width, cy + half_width)
    return _tensor_mesh(xb, yb, hole_box=box)


def refine(mesh):
    """Uniform red refinement: each triangle into four, tags inherited.

    Midpoints stay on the straight edges of the parent mesh, so curved
    boundaries keep their polygonal geometry; use the ``*_mesh_family``
    builders when the geometric error must shrink with h.
    """
    verts = [tuple(p) for p in mesh.vertices]
    mid_cache = {}

    def midpoint(a, b):
        key = (min(a, b), max(a, b))
        if key not in mid_cache:
            verts.append(tuple(0.5 * (mesh.vertices[a] + mesh.vertices[b])))
            mid_cache[key] = len(verts) - 1
        return mid_cache[key]

    tris = []
    for a, b, c in mesh.triangles:
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        tris += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
    edges, tags = [], []
    for (a, b), t in zip(mesh.boundary_edges, mesh.tags):
        m = midpoint(a, b)
        edges += [(a, m), (m, b)]
        tags += [t, t]
    return Mesh(np.array(verts), np.array(tris), np.array(edges), tags)


def annulus_rings(R, rho, grading=1.15, first_layer=0.7, n_min=12):
    """Number of radial rings so the first layer is at most first_layer * rho.

    Fields driven by hole data vary on the scale of the hole radius, so the
    graded mesh must start with a layer comparable to rho.
    """
    if grading <= 1.0:
        raise ValueError("adaptive ring count needs grading > 1")
    target = first_layer * rho
    ratio = 1.0 + (R - rho) * (grading - 1.0) / target
    n = int(math.ceil(math.log(ratio) / math.log(grading))) + 1
    return max(n_min, n)


def annulus_mesh_family(R, rho, n_r, n_theta, grading=1.15, levels=2):
    """Annulus meshes of increasing resolution, boundary nodes on the true circles.

    Level l doubles both counts and takes the square root of the grading
    ratio, which keeps the same smooth radial distribution while halving h;
    the polygonal boundary error then scales like h^2 as well.
    """
    out = []
    g = grading
    for l in range(levels):
        out.append(build_annulus_mesh(R, rho, (n_r - 1) * 2 ** l + 1,
                                      n_theta * 2 ** l, g))
        g = math.sqrt(g)
    return out


def disk_mesh_family(R, n_r, n_theta, grading=1.0, levels=2):
    """Disk meshes of increasing resolution (see annulus_mesh_family)."""
    out = []
    g = grading
    for l in range(levels):
        out.append(build_disk_mesh(R, n_r * 2 ** l, n_theta * 2 ** l, g))
        g = math.sqrt(g) if g != 1.0 else 1.0
    return out


# ----------------------------------------------------------------------------
# Plain-text mesh exchange format
# ----------------------------------------------------------------------------

def save_mesh(mesh, path):
    """Write the three-section whitespace format (vertices/triangles/boundary_edges)."""
    with open(path, "w") as f:
        f.write(f"vertices {len(mesh.vertices)}\n")
        for x, y in mesh.vertices:
            f.write(f"{float(x)!r} {float(y)!r}\n")
        f.write(f"triangles {len(mesh.triangles)}\n")
        for a, b, c in mesh.triangles:
            f.write(f"{a} {b} {c}\n")
        f.write(f"boundary_edges {len(mesh.boundary_edges)}\n")
        for (a, b), t in zip(mesh.boundary_edges, mesh.tags):
            f.write(f"{a} {b} {t}\n")


def load_mesh(path):
    """Read a mesh written by :func:`save_mesh`."""
    with open(path) as f:
        tokens = f.read().split()
    pos = 0

    def expect(word):
        nonlocal pos
        if tokens[pos] != word:
            raise ValueError(f"expected section {word!r}, got {tokens[pos]!r}")
        pos += 1
        n = int(tokens[pos])
        pos += 1
        return n

    n = expect("vertices")
    vertices = np.array(tokens[pos:pos + 2 * n], dtype=float).reshape(n, 2)
    pos += 2 * n
    m = expect("triangles")
    triangles = np.array(tokens[pos:pos + 3 * m], dtype=np.int64).reshape(m, 3)
    pos += 3 * m
    b = expect("boundary_edges")
    edges, tags = [], []
    for _ in range(b):
        edges.append((int(tokens[pos]), int(tokens[pos + 1])))
        tags.append(tokens[pos + 2])
        pos += 3
    return Mesh(vertices, triangles, np.array(edges), tags)


# ----------------------------------------------------------------------------
# Node matching and P1 evaluation
# ----------------------------------------------------------------------------

def match_vertices(mesh_a, mesh_b, tol=1e-9):
    """Indices into mesh_b.vertices matching each vertex of mesh_a exactly.

    Intended for meshes built on a common tensor grid. Raises if any vertex
    of mesh_a has no counterpart within ``tol``.
    """
    scale = max(1.0, float(np.max(np.abs(mesh_b.vertices))))
    lookup = {}
    for i, p in enumerate(mesh_b.vertices):
        lookup[(round(p[0] / (tol * scale)), round(p[1] / (tol * scale)))] = i
    out = np.empty(len(mesh_a.vertices), dtype=np.int64)
    for i, p in enumerate(mesh_a.vertices):
        key = (round(p[0] / (tol * scale)), round(p[1] / (tol * scale)))
        if key not in lookup:
            raise ValueError(f"vertex {p} of mesh_a not found in mesh_b")
        out[i] = lookup[key]
    return out


class P1Interpolator:
    """Point evaluation of a P1 field via a uniform background bin grid."""

    def __init__(self, mesh, values, nbins=None):
        self.mesh = mesh
        self.values = np.asarray(values, dtype=float)
        pts = mesh.vertices
        self.lo = pts.min(axis=0)
        self.hi = pts.max(axis=0)
        ntri = len(mesh.triangles)
        self.n = nbins or max(4, int(math.sqrt(ntri / 2)))
        self.bins = [[] for _ in range(self.n * self.n)]
        self.span = np.maximum(self.hi - self.lo, 1e-300)
        for t, tri in enumerate(mesh.triangles):
            p = pts[tri]
            i0, j0 = np.floor((p.min(axis=0) - self.lo) / self.span * self.n).astype(int)
            i1, j1 = np.floor((p.max(axis=0) - self.lo) / self.span * self.n).astype(int)
            for i in range(max(i0, 0), min(i1, self.n - 1) + 1):
                for j in range(max(j0, 0), min(j1, self.n - 1) + 1):
                    self.bins[i * self.n + j].append(t)

    def _bary(self, t, x, y):
        # barycentric coordinates via sub-triangle areas
        a, b, c = self.mesh.vertices[self.mesh.triangles[t]]
        det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
        l1 = ((b[0] - x) * (c[1] - y) - (c[0] - x) * (b[1] - y)) / det
        l2 = ((c[0] - x) * (a[1] - y) - (a[0] - x) * (c[1] - y)) / det
        return l1, l2, 1.0 - l1 - l2

    def _candidates(self, i, j):
        """Bin candidates, expanding in rings when the home bin is empty."""
        home = self.bins[i * self.n + j]
        if home:
            return home
        for radius in range(1, self.n):
            found = []
            for ii in range(max(i - radius, 0), min(i + radius, self.n - 1) + 1):
                for jj in range(max(j - radius, 0), min(j + radius, self.n - 1) + 1):
                    if max(abs(ii - i), abs(jj - j)) == radius:
                        found.extend(self.bins[ii * self.n + jj])
            if found:
                return found
        return range(len(self.mesh.triangles))

    def evaluate(self, points):
        """Values at an (n, 2) array of points; clips to the nearest triangle.

        Points are expected inside (or marginally outside) the meshed
        region; querying far-away points falls back to the closest triangle,
        which is slow and rarely what the caller wants.
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.empty(len(points))
        for idx, (x, y) in enumerate(points):
            i = int(np.clip((x - self.lo[0]) / self.span[0] * self.n, 0, self.n - 1))
            j = int(np.clip((y - self.lo[1]) / self.span[1] * self.n, 0, self.n - 1))
            best, best_t = -1e30, -1
            for t in self._candidates(i, j):
                l1, l2, l3 = self._bary(t, x, y)
                worst = min(l1, l2, l3)
                if worst > best:
                    best, best_t = worst, t
                if worst >= -1e-12:
                    break
            l1, l2, l3 = self._bary(best_t, x, y)
            l1, l2 = max(l1, 0.0), max(l2, 0.0)
            l3 = max(1.0 - l1 - l2, 0.0)
            s = l1 + l2 + l3
            vals = self.values[self.mesh.triangles[best_t]]
            out[idx] = (l1 * vals[0] + l2 * vals[1] + l3 * vals[2]) / s
        return out
