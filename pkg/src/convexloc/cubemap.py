"""Constant-time 3D point location via cube-map direction cells.

Directions from a strictly interior reference point x_t are classified onto
the six faces of an axis-aligned cube centered at x_t, each face split into
resolution x resolution square cells.  Every polyhedron face is projected
onto the cube faces it is visible on and listed in every cell its footprint
can touch; a query then maps its direction to one cell with a handful of
arithmetic operations and evaluates only that cell's candidate faces.

The projection is conservative: each clipped footprint is covered by the
full rectangle of cells spanning its (s, t) extent, padded by a small
constant.  Footprints whose clipped area vanishes are dropped; any direction
through such a sliver lies on the shared edge of adjacent faces, and the
neighbouring face that shares that edge has a non-degenerate footprint
there, so the deciding boundary plane is still listed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .baselines import EvalCounter, _csr_sort
from .core import (CapExceeded, Containment, ConvexPolyhedron,
                   ReferenceNotInterior, ZeroDirection, _default_scale,
                   centroid, classify_min, plane_eval)

FACE_NAMES = ("+X", "-X", "+Y", "-Y", "+Z", "-Z")
RES_CAP = 1024
RES_PER_FACE = 4.0         # target cells per polyhedron face
_RECT_PAD = 1e-9           # cell-cover padding in (s, t) units
_AREA_DROP = 1e-15         # clipped footprints below this area are slivers

# For dominant axis a, the (u, v) axes forming the face coordinates.
_UV = ((1, 2), (0, 2), (0, 1))


def _cell_of(s: float, resolution: int) -> int:
    return min(max(int(math.floor((s + 1.0) * 0.5 * resolution)), 0), resolution - 1)


def cubemap_cell(x_t, resolution: int, p, eps_len: float | None = None):
    """Cube-map cell (face, i, j) of the direction x_t -> p.

    face 0..5 means +X, -X, +Y, -Y, +Z, -Z; the dominant axis is the largest
    absolute component, ties resolved in X, Y, Z order.  i indexes the first
    remaining axis (ascending), j the second, each by floor((s+1)/2 * R)
    clamped to [0, R-1].  Raises ZeroDirection when p ~ x_t.
    """
    x_t = np.asarray(x_t, dtype=float)
    p = np.asarray(p, dtype=float)
    if eps_len is None:
        eps_len = 1e-12 * _default_scale(x_t, p)
    d = p - x_t
    if float(np.linalg.norm(d)) < eps_len:
        raise ZeroDirection("query coincides with the reference point")
    ad = np.abs(d)
    axis = int(np.argmax(ad))
    dom = float(d[axis])
    face = 2 * axis + (1 if dom < 0.0 else 0)
    ua, va = _UV[axis]
    s = float(d[ua]) / abs(dom)
    t = float(d[va]) / abs(dom)
    return face, _cell_of(s, resolution), _cell_of(t, resolution)


def _clip_halfspace(pts, fvals):
    """One Sutherland-Hodgman pass: keep the fvals >= 0 side."""
    out = []
    n = len(pts)
    for k in range(n):
        a, b = k, (k + 1) % n
        fa, fb = fvals[a], fvals[b]
        if fa >= 0.0:
            out.append(pts[a])
        if (fa >= 0.0) != (fb >= 0.0):
            t = fa / (fa - fb)
            pa, pb = pts[a], pts[b]
            out.append((pa[0] + t * (pb[0] - pa[0]),
                        pa[1] + t * (pb[1] - pa[1]),
                        pa[2] + t * (pb[2] - pa[2])))
    return out


def _rect_overlaps(pts, s0, s1, t0, t1, tol):
    """Separating-axis test between a convex 2D polygon and a rectangle.

    The rectangle axes are assumed already tested (callers scan only cells
    in the polygon's bounding rectangle), so only polygon edges remain.
    """
    corners = ((s0, t0), (s1, t0), (s1, t1), (s0, t1))
    n = len(pts)
    for k in range(n):
        x1, y1 = pts[k]
        x2, y2 = pts[(k + 1) % n]
        nx, ny = y1 - y2, x2 - x1
        if max(nx * (cx - x1) + ny * (cy - y1) for cx, cy in corners) < -tol:
            return False
    return True


def project_face_conservative(face_vertices, x_t, resolution: int,
                              scan_exact: bool = False,
                              eps_len: float | None = None):
    """Cube-map cells that the face can decide queries for, as (face, i, j).

    The face ring is clipped against each cube-face frustum (apex x_t); the
    surviving part is projected to (s, t) face coordinates and covered by the
    rectangle of cells spanning its extent, padded by a small constant.  With
    scan_exact the rectangle is tightened to cells actually overlapping the
    footprint.  The clip keeps a margin eps_len in front of the apex, so
    projection never divides by zero.
    """
    ring = np.asarray(face_vertices, dtype=float)
    x_t = np.asarray(x_t, dtype=float)
    if eps_len is None:
        eps_len = 1e-12 * _default_scale(ring, x_t)
    base = [tuple(q) for q in (ring - x_t)]
    cells = []
    for face in range(6):
        axis = face >> 1
        sigma = 1.0 if face % 2 == 0 else -1.0
        ua, va = _UV[axis]
        pts = base
        for coeff_u, coeff_v, off in ((0.0, 0.0, -eps_len), (-1.0, 0.0, 0.0),
                                      (1.0, 0.0, 0.0), (0.0, -1.0, 0.0),
                                      (0.0, 1.0, 0.0)):
            fvals = [sigma * q[axis] + coeff_u * q[ua] + coeff_v * q[va] + off
                     for q in pts]
            pts = _clip_halfspace(pts, fvals)
            if len(pts) < 3:
                break
        if len(pts) < 3:
            continue
        proj = [(q[ua] / (sigma * q[axis]), q[va] / (sigma * q[axis])) for q in pts]
        area2 = 0.0
        for k in range(len(proj)):
            s1, t1 = proj[k]
            s2, t2 = proj[(k + 1) % len(proj)]
            area2 += s1 * t2 - s2 * t1
        if abs(area2) < 2.0 * _AREA_DROP:
            continue
        if area2 < 0.0:
            proj.reverse()
        ss = [q[0] for q in proj]
        tt = [q[1] for q in proj]
        i0 = _cell_of(min(ss) - _RECT_PAD, resolution)
        i1 = _cell_of(max(ss) + _RECT_PAD, resolution)
        j0 = _cell_of(min(tt) - _RECT_PAD, resolution)
        j1 = _cell_of(max(tt) + _RECT_PAD, resolution)
        step = 2.0 / resolution
        for i in range(i0, i1 + 1):
            cs0 = -1.0 + i * step
            for j in range(j0, j1 + 1):
                if scan_exact:
                    ct0 = -1.0 + j * step
                    if not _rect_overlaps(proj, cs0, cs0 + step, ct0, ct0 + step,
                                          1e-12):
                        continue
                cells.append((face, i, j))
    return cells


@dataclass(frozen=True)
class CubeMapIndex3:
    """Cube-map cell index around reference point x_t.

    Cells are flattened as (face * resolution + i) * resolution + j; edges of
    the CSR arrays hold candidate polyhedron face indices per cell.
    """

    poly: ConvexPolyhedron
    x_t: np.ndarray
    resolution: int
    offsets: np.ndarray
    faces_flat: np.ndarray
    counts: np.ndarray
    max_occupancy: int
    mean_occupancy: float

    def cell_faces(self, face: int, i: int, j: int) -> np.ndarray:
        flat = (face * self.resolution + i) * self.resolution + j
        return self.faces_flat[self.offsets[flat]:self.offsets[flat + 1]]

    @cached_property
    def padded_faces(self) -> np.ndarray:
        from .baselines import _padded_table
        return _padded_table(self.offsets, self.faces_flat, self.counts)


def default_cubemap_resolution(n_faces: int) -> int:
    want = int(math.ceil(math.sqrt(RES_PER_FACE * n_faces / 6.0)))
    return max(4, min(want, RES_CAP))


def build_cubemap_index(poly: ConvexPolyhedron, resolution: int | None = None,
                        x_t=None, scan_exact: bool = False) -> CubeMapIndex3:
    """Build the cube-map index; O(F + cells) for bounded footprints.

    Raises ReferenceNotInterior when x_t is not strictly inside.
    """
    if x_t is None:
        x_t = centroid(poly)
    x_t = np.array(x_t, dtype=float)
    if float(plane_eval(poly.halfspaces, x_t).min()) <= poly.tol.eps_q:
        raise ReferenceNotInterior("reference point must be strictly inside")

    if resolution is None:
        resolution = default_cubemap_resolution(poly.n_faces)
    else:
        resolution = int(resolution)
        if resolution < 1:
            raise ValueError("resolution must be >= 1")
        if resolution > RES_CAP:
            warnings.warn(f"cube-map resolution {resolution} clamped to {RES_CAP}",
                          CapExceeded, stacklevel=2)
            resolution = RES_CAP

    cell_ids = []
    face_ids = []
    for k, ring in enumerate(poly.faces):
        for face, i, j in project_face_conservative(
                poly.vertices[list(ring)], x_t, resolution,
                scan_exact=scan_exact, eps_len=poly.tol.eps_len):
            cell_ids.append((face * resolution + i) * resolution + j)
            face_ids.append(k)
    n_cells = 6 * resolution * resolution
    offsets, faces_flat, counts = _csr_sort(np.asarray(cell_ids, dtype=np.int64),
                                            np.asarray(face_ids, dtype=np.int64),
                                            n_cells)
    if int(counts.min()) < 1:
        raise AssertionError("cube-map construction produced an empty cell")

    for arr in (offsets, faces_flat, counts, x_t):
        arr.setflags(write=False)
    return CubeMapIndex3(poly=poly, x_t=x_t, resolution=resolution,
                         offsets=offsets, faces_flat=faces_flat, counts=counts,
                         max_occupancy=int(counts.max()),
                         mean_occupancy=float(counts.mean()))


def locate_cubemap(idx: CubeMapIndex3, p, counter: EvalCounter | None = None) -> Containment:
    """O(1) query: direction cell lookup, then the cell's candidate faces."""
    poly = idx.poly
    eps_q = poly.tol.eps_q
    p = np.asarray(p, dtype=float)
    if not bool(poly.aabb.contains(p, pad=eps_q)):
        return Containment.OUTSIDE
    if float(np.linalg.norm(p - idx.x_t)) <= poly.tol.eps_len:
        return Containment.INSIDE
    face, i, j = cubemap_cell(idx.x_t, idx.resolution, p, eps_len=poly.tol.eps_len)
    hs = poly.halfspaces
    m = math.inf
    for f in idx.cell_faces(face, i, j):
        m = min(m, hs[f, 0] * p[0] + hs[f, 1] * p[1] + hs[f, 2] * p[2] + hs[f, 3])
        if counter is not None:
            counter.evals += 1
    return classify_min(m, eps_q)


def locate_cubemap_batch(idx: CubeMapIndex3, points) -> np.ndarray:
    poly = idx.poly
    eps_q = poly.tol.eps_q
    res = idx.resolution
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.full(len(pts), np.int8(Containment.OUTSIDE))
    inbox = poly.aabb.contains(pts, pad=eps_q)
    if not inbox.any():
        return out
    sub = pts[inbox]
    d = sub - idx.x_t
    near = (d ** 2).sum(axis=1) <= poly.tol.eps_len ** 2
    codes = np.full(len(sub), np.int8(Containment.INSIDE))
    far = ~near
    if far.any():
        df = d[far]
        ad = np.abs(df)
        axis = np.argmax(ad, axis=1)
        rows = np.arange(len(df))
        dom = df[rows, axis]
        face = 2 * axis + (dom < 0.0)
        uv = np.asarray(_UV, dtype=np.int64)
        s = df[rows, uv[axis, 0]] / np.abs(dom)
        t = df[rows, uv[axis, 1]] / np.abs(dom)
        i = np.clip(np.floor((s + 1.0) * 0.5 * res), 0, res - 1).astype(np.int64)
        j = np.clip(np.floor((t + 1.0) * 0.5 * res), 0, res - 1).astype(np.int64)
        flat = (face * res + i) * res + j
        cand = idx.padded_faces[flat]
        hc = poly.halfspaces[cand]
        q = sub[far]
        vals = (hc[..., 0] * q[:, None, 0] + hc[..., 1] * q[:, None, 1]
                + hc[..., 2] * q[:, None, 2] + hc[..., 3])
        codes[far] = classify_min(vals.min(axis=1), eps_q)
    out[inbox] = codes
    return out
