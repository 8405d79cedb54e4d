"""Constant-time 2D point location via angular slabs.

The polygon boundary is radially monotone around any strictly interior
reference point x_T: every ray from x_T crosses exactly one edge.  Rays are
keyed by where they exit an inflated bounding box, measured as arc length u
along the box perimeter.  Dividing [0, U) into n_slabs equal intervals and
listing, per interval, every edge whose angular span touches it yields an
index with O(1) expected candidates per query: one multiply-and-floor finds
the slab, and only its few listed edges are evaluated.

Build cost is O(N + n_slabs); with well-separated vertices the default slab
count keeps at most two candidate edges per slab.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .baselines import EvalCounter, _csr_sort, _padded_table, _run_expand
from .core import (Aabb, CapExceeded, Containment, ConvexPolygon,
                   ReferenceNotInterior, SLAB_CAP, ZeroDirection,
                   centroid, classify_min, plane_eval)

BOX_INFLATION = 1.01       # keeps box corners off polygon vertices
SLABS_PER_EDGE = 4         # default slab budget multiplier


def boundary_param(box: Aabb, x_t, p, eps_len: float | None = None) -> float:
    """Arc-length position u in [0, U) where ray x_t -> p exits the box.

    u runs counter-clockwise from the corner (x_max, y_min): up the right
    side, along the top, down the left side, along the bottom.  U equals the
    box perimeter 2*(W+H).  Strictly monotone in the ray angle, continuous
    across corners.  Raises ZeroDirection when p ~ x_t.
    """
    if eps_len is None:
        eps_len = 1e-12 * box.diagonal
    x_t = np.asarray(x_t, dtype=float)
    p = np.asarray(p, dtype=float)
    dx = float(p[0] - x_t[0])
    dy = float(p[1] - x_t[1])
    if math.hypot(dx, dy) < eps_len:
        raise ZeroDirection("query coincides with the reference point")
    lox, loy = float(box.lo[0]), float(box.lo[1])
    hix, hiy = float(box.hi[0]), float(box.hi[1])
    w = hix - lox
    h = hiy - loy
    tx = math.inf if dx == 0.0 else ((hix if dx > 0.0 else lox) - float(x_t[0])) / dx
    ty = math.inf if dy == 0.0 else ((hiy if dy > 0.0 else loy) - float(x_t[1])) / dy
    if tx <= ty:
        ey = min(max(float(x_t[1]) + tx * dy, loy), hiy)
        u = (ey - loy) if dx > 0.0 else h + w + (hiy - ey)
    else:
        ex = min(max(float(x_t[0]) + ty * dx, lox), hix)
        u = h + (hix - ex) if dy > 0.0 else 2.0 * h + w + (ex - lox)
    total = 2.0 * (w + h)
    return u - total if u >= total else u


def boundary_param_batch(box: Aabb, x_t, points) -> np.ndarray:
    """Vectorized boundary_param; callers must mask zero directions first."""
    x_t = np.asarray(x_t, dtype=float)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    dx = pts[:, 0] - x_t[0]
    dy = pts[:, 1] - x_t[1]
    lox, loy = float(box.lo[0]), float(box.lo[1])
    hix, hiy = float(box.hi[0]), float(box.hi[1])
    w = hix - lox
    h = hiy - loy
    with np.errstate(divide="ignore", invalid="ignore"):
        tx = np.where(dx > 0.0, (hix - x_t[0]) / dx,
                      np.where(dx < 0.0, (lox - x_t[0]) / dx, np.inf))
        ty = np.where(dy > 0.0, (hiy - x_t[1]) / dy,
                      np.where(dy < 0.0, (loy - x_t[1]) / dy, np.inf))
        vertical = tx <= ty
        ey = np.clip(x_t[1] + tx * dy, loy, hiy)
        ex = np.clip(x_t[0] + ty * dx, lox, hix)
    u = np.where(vertical,
                 np.where(dx > 0.0, ey - loy, h + w + (hiy - ey)),
                 np.where(dy > 0.0, h + (hix - ex), 2.0 * h + w + (ex - lox)))
    total = 2.0 * (w + h)
    return np.where(u >= total, u - total, u)


@dataclass(frozen=True)
class PolarIndex2:
    """Angular slab index around reference point x_t.

    Slab i covers boundary-parameter interval [i*U/n, (i+1)*U/n); edges is a
    CSR list of candidate edge indices per slab.  All arrays are immutable.
    """

    poly: ConvexPolygon
    x_t: np.ndarray
    box: Aabb
    perimeter: float
    n_slabs: int
    offsets: np.ndarray
    edges: np.ndarray
    counts: np.ndarray
    max_occupancy: int
    mean_occupancy: float

    def slab_of(self, u) -> np.ndarray:
        i = np.floor(np.asarray(u, dtype=float) * (self.n_slabs / self.perimeter))
        return (i.astype(np.int64)) % self.n_slabs

    def slab_edges(self, i: int) -> np.ndarray:
        return self.edges[self.offsets[i]:self.offsets[i + 1]]

    @cached_property
    def padded_edges(self) -> np.ndarray:
        return _padded_table(self.offsets, self.edges, self.counts)


def default_polar_slab_count(poly: ConvexPolygon, x_t, perimeter: float) -> int:
    """Slab budget: at least SLABS_PER_EDGE per edge, and fine enough that a
    slab's arc is shorter than the image of the shortest edge under the most
    pessimistic angular compression seen from x_t."""
    v = poly.vertices
    nxt = np.roll(v, -1, axis=0)
    edge_len = np.linalg.norm(nxt - v, axis=1)
    mid = 0.5 * (v + nxt)
    d_mid = np.linalg.norm(mid - x_t, axis=1)
    d_vert = np.linalg.norm(v - x_t, axis=1)
    ell = float(edge_len.min()) * float(d_mid.min()) / float(d_vert.max())
    want = max(SLABS_PER_EDGE * poly.n, int(math.ceil(perimeter / ell)))
    return max(poly.n, min(want, SLAB_CAP))


def build_polar_index(poly: ConvexPolygon, n_slabs: int | None = None,
                      x_t=None) -> PolarIndex2:
    """Build the angular slab index in O(N + n_slabs).

    Vertices are mapped to boundary parameters with the same code path used
    by queries, so an edge's slab interval (closed, endpoints included) is
    guaranteed to cover every slab a query ray hitting that edge can map to.
    Raises ReferenceNotInterior when x_t is not strictly inside.
    """
    if x_t is None:
        x_t = centroid(poly)
    x_t = np.array(x_t, dtype=float)
    if float(plane_eval(poly.halfplanes, x_t).min()) <= poly.tol.eps_q:
        raise ReferenceNotInterior("reference point must be strictly inside")

    box = poly.aabb.inflated(BOX_INFLATION)
    w = float(box.hi[0] - box.lo[0])
    h = float(box.hi[1] - box.lo[1])
    perimeter = 2.0 * (w + h)

    if n_slabs is None:
        n_slabs = default_polar_slab_count(poly, x_t, perimeter)
    else:
        n_slabs = int(n_slabs)
        if n_slabs < 1:
            raise ValueError("n_slabs must be >= 1")
        if n_slabs > SLAB_CAP:
            warnings.warn(f"polar slab count {n_slabs} clamped to {SLAB_CAP}",
                          CapExceeded, stacklevel=2)
            n_slabs = SLAB_CAP

    u = boundary_param_batch(box, x_t, poly.vertices)
    s = np.floor(u * (n_slabs / perimeter)).astype(np.int64) % n_slabs
    s_next = np.roll(s, -1)
    runs = (s_next - s) % n_slabs + 1
    slab_ids = _run_expand(s, runs) % n_slabs
    edge_ids = np.repeat(np.arange(poly.n, dtype=np.int32), runs)
    offsets, edges, counts = _csr_sort(slab_ids, edge_ids, n_slabs)
    if int(counts.min()) < 1:
        raise AssertionError("polar slab construction produced an empty slab")

    for arr in (offsets, edges, counts, x_t):
        arr.setflags(write=False)
    return PolarIndex2(poly=poly, x_t=x_t, box=box, perimeter=perimeter,
                       n_slabs=n_slabs, offsets=offsets, edges=edges,
                       counts=counts, max_occupancy=int(counts.max()),
                       mean_occupancy=float(counts.mean()))


def locate_polar(idx: PolarIndex2, p, counter: EvalCounter | None = None) -> Containment:
    """O(1) query: slab lookup by one floor, then the slab's candidate edges.

    Points outside the polygon's bounding box (beyond the eps_q band) are
    rejected without any edge evaluation; a point within eps_len of x_t is
    Inside by construction.
    """
    poly = idx.poly
    eps_q = poly.tol.eps_q
    x, y = float(p[0]), float(p[1])
    lo, hi = poly.aabb.lo, poly.aabb.hi
    if (x < lo[0] - eps_q or x > hi[0] + eps_q
            or y < lo[1] - eps_q or y > hi[1] + eps_q):
        return Containment.OUTSIDE
    if math.hypot(x - idx.x_t[0], y - idx.x_t[1]) <= poly.tol.eps_len:
        return Containment.INSIDE
    u = boundary_param(idx.box, idx.x_t, (x, y), eps_len=poly.tol.eps_len)
    i = int(u * (idx.n_slabs / idx.perimeter)) % idx.n_slabs
    hp = poly.halfplanes
    m = math.inf
    for e in idx.slab_edges(i):
        m = min(m, hp[e, 0] * x + hp[e, 1] * y + hp[e, 2])
        if counter is not None:
            counter.evals += 1
    return classify_min(m, eps_q)


def locate_polar_batch(idx: PolarIndex2, points) -> np.ndarray:
    poly = idx.poly
    eps_q = poly.tol.eps_q
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.full(len(pts), np.int8(Containment.OUTSIDE))
    inbox = poly.aabb.contains(pts, pad=eps_q)
    if not inbox.any():
        return out
    sub = pts[inbox]
    near = ((sub - idx.x_t) ** 2).sum(axis=1) <= poly.tol.eps_len ** 2
    codes = np.full(len(sub), np.int8(Containment.INSIDE))
    far = ~near
    if far.any():
        q = sub[far]
        u = boundary_param_batch(idx.box, idx.x_t, q)
        slabs = (np.floor(u * (idx.n_slabs / idx.perimeter)).astype(np.int64)
                 % idx.n_slabs)
        cand = idx.padded_edges[slabs]
        hc = poly.halfplanes[cand]
        vals = hc[..., 0] * q[:, None, 0] + hc[..., 1] * q[:, None, 1] + hc[..., 2]
        codes[far] = classify_min(vals.min(axis=1), eps_q)
    out[inbox] = codes
    return out
