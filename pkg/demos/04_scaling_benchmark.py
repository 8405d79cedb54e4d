"""Query-time scaling: subdivision indexes vs linear scans.

Times every 2D method over growing polygon sizes and both 3D methods over
growing icosphere levels, printing the benchmark CSV.  The subdivision
columns stay flat while the linear columns grow with N; cross-checking
against the linear scan reports zero mismatches throughout.

Run with --quick for a faster, smaller sweep.
"""

import argparse

from convexloc import (GenSpec2, GenSpec3, QuerySpec, gen_convex_polygon,
                       gen_convex_polyhedron, gen_query_points)
from convexloc.bench import (CSV_HEADER, METHODS_2D, METHODS_3D, bench_one)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="smaller sweep")
    ap.add_argument("--points", type=int, default=None)
    args = ap.parse_args()

    sizes = (64, 512, 4096) if args.quick else (64, 1024, 16384)
    levels = (0, 1, 2) if args.quick else (0, 1, 2, 3)
    m = args.points or (20_000 if args.quick else 100_000)

    print(CSV_HEADER)
    for n in sizes:
        poly = gen_convex_polygon(GenSpec2(n=n, seed=100 + n, jitter=0.0))
        pts = gen_query_points(poly.aabb, QuerySpec(m, 200 + n))
        for method in METHODS_2D:
            print(bench_one(poly, method, pts).csv_row(), flush=True)
    for level in levels:
        poly = gen_convex_polyhedron(GenSpec3(level=level, seed=300 + level))
        pts = gen_query_points(poly.aabb, QuerySpec(m, 400 + level))
        for method in METHODS_3D:
            print(bench_one(poly, method, pts).csv_row(), flush=True)


if __name__ == "__main__":
    main()
