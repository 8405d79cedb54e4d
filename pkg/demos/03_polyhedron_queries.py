"""Cube-map point location on a convex polyhedron.

An affinely deformed icosphere is indexed by projecting each face onto the
six faces of a direction cube around an interior point x_t.  A query maps
its direction to one cell with a few arithmetic operations and evaluates
only that cell's candidate faces, no matter how many faces the solid has.
"""

import numpy as np

from convexloc import (Containment, EvalCounter, FACE_NAMES, GenSpec3,
                       build_cubemap_index, cubemap_cell,
                       gen_convex_polyhedron, locate_cubemap,
                       locate_linear_3d)


def main():
    poly = gen_convex_polyhedron(GenSpec3(level=2, seed=11))
    idx = build_cubemap_index(poly)
    res = idx.resolution
    print(f"polyhedron: {len(poly.vertices)} vertices, {poly.n_faces} faces")
    print(f"cube map: resolution {res} ({6 * res * res} cells), "
          f"max {idx.max_occupancy} / mean {idx.mean_occupancy:.2f} "
          f"faces per cell\n")

    rng = np.random.default_rng(5)
    box = poly.aabb
    pts = box.lo + rng.random((6, 3)) * (box.hi - box.lo)
    names = {Containment.INSIDE: "Inside",
             Containment.ON_BOUNDARY: "OnBoundary",
             Containment.OUTSIDE: "Outside"}
    print("random queries (cube-map vs linear, with evaluation counts):")
    for p in pts:
        cc = EvalCounter()
        cl = EvalCounter()
        a = locate_cubemap(idx, p, cc)
        b = locate_linear_3d(poly, p, cl)
        assert a == b
        face, i, j = cubemap_cell(idx.x_t, res, p)
        print(f"  ({p[0]:7.3f},{p[1]:7.3f},{p[2]:7.3f}) -> "
              f"{names[a]:>10}  cell {FACE_NAMES[face]}[{i},{j}]  "
              f"evals {cc.evals} vs {cl.evals}")

    occ = idx.counts
    print(f"\ncell occupancy histogram: "
          f"{np.bincount(occ).tolist()} (index = faces per cell)")


if __name__ == "__main__":
    main()
