#!/usr/bin/env python3
"""Writes the mesh corpus used by the tests and the acceptance suite."""
import math
import sys
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data"


def write(name, verts, faces):
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / f"{name}.obj", "w") as f:
        f.write(f"# {name}\n")
        for v in verts:
            f.write("v %.12g %.12g %.12g\n" % tuple(0.0 if abs(c) < 1e-12 else c for c in v))
        for face in faces:
            f.write("f " + " ".join(str(i + 1) for i in face) + "\n")


def hull_polyhedron(points):
    """Convex hull with coplanar triangles merged into outward CCW polygons."""
    pts = np.asarray(points, dtype=float)
    hull = ConvexHull(pts)
    groups = {}
    for simplex, eq in zip(hull.simplices, hull.equations):
        key = tuple(np.round(eq, 6))
        groups.setdefault(key, set()).update(simplex.tolist())
    faces = []
    for key, ids in groups.items():
        n = np.array(key[:3])
        ids = list(ids)
        c = pts[ids].mean(axis=0)
        u = pts[ids[0]] - c
        u /= np.linalg.norm(u)
        w = np.cross(n, u)
        ids.sort(key=lambda i: math.atan2(np.dot(pts[i] - c, w), np.dot(pts[i] - c, u)))
        faces.append(ids)
    faces.sort(key=lambda f: tuple(np.round(pts[f].mean(axis=0), 6)))
    return pts, faces


def box(sx, sy, sz):
    v = [(0, 0, 0), (sx, 0, 0), (sx, sy, 0), (0, sy, 0), (0, 0, sz), (sx, 0, sz), (sx, sy, sz), (0, sy, sz)]
    f = [[0, 3, 2, 1], [4, 5, 6, 7], [0, 1, 5, 4], [1, 2, 6, 5], [2, 3, 7, 6], [3, 0, 4, 7]]
    return v, f


def prism(outline, pieces, height):
    """Extrudes a CCW outline; caps are split into the given convex pieces."""
    n = len(outline)
    verts = [(x, y, 0.0) for x, y in outline] + [(x, y, height) for x, y in outline]
    faces = []
    for piece in pieces:
        faces.append([i for i in reversed(piece)])  # bottom, facing -z
    for piece in pieces:
        faces.append([i + n for i in piece])  # top
    for i in range(n):
        j = (i + 1) % n
        faces.append([i, j, j + n, i + n])
    return verts, faces


def scaled(points, edge):
    pts = np.asarray(points, dtype=float)
    d = min(np.linalg.norm(a - b) for i, a in enumerate(pts) for b in pts[i + 1:])
    return pts * (edge / d)


def main():
    write("cube", *box(10, 10, 10))
    write("box_10x10x30", *box(10, 10, 30))

    phi = (1 + 5 ** 0.5) / 2
    tet = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    octa = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    ico = [p for a in (-1, 1) for b in (-phi, phi) for p in ((0, a, b), (a, b, 0), (b, 0, a))]
    dod = [(a, b, c) for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)]
    for a in (-1, 1):
        for b in (-1, 1):
            dod += [(0, a / phi, b * phi), (a / phi, b * phi, 0), (b * phi, 0, a / phi)]
    for name, pts in [("tetrahedron", tet), ("octahedron", octa), ("icosahedron", ico), ("dodecahedron", dod)]:
        write(name, *hull_polyhedron(scaled(pts, 10.0)))

    # Non-convex prisms, 10 mm tall, outlines in mm.
    write("l_prism", *prism([(0, 0), (20, 0), (20, 10), (10, 10), (10, 20), (0, 20)],
                            [[0, 1, 2, 3], [0, 3, 4, 5]], 10))
    write("t_prism", *prism([(0, 20), (0, 30), (30, 30), (30, 20), (20, 20), (20, 0), (10, 0), (10, 20)][::-1],
                            [[0, 1, 2, 3], [7, 0, 6], [0, 3, 5, 6], [3, 4, 5]], 10))
    write("u_prism", *prism([(0, 0), (30, 0), (30, 20), (20, 20), (20, 10), (10, 10), (10, 20), (0, 20)],
                            [[0, 1, 4, 5], [1, 2, 3, 4], [0, 5, 6, 7]], 10))
    write("plus_prism", *prism([(10, 0), (20, 0), (20, 10), (30, 10), (30, 20), (20, 20), (20, 30), (10, 30),
                                (10, 20), (0, 20), (0, 10), (10, 10)],
                               [[0, 1, 2, 11], [11, 2, 5, 8], [10, 11, 8, 9], [2, 3, 4, 5], [8, 5, 6, 7]], 10))
    write("stairs_prism", *prism([(0, 0), (30, 0), (30, 10), (20, 10), (20, 20), (10, 20), (10, 30), (0, 30)],
                                 [[0, 1, 2, 3], [0, 3, 4, 5], [0, 5, 6, 7]], 10))

    # Smooth closed blob with 180 triangles (10 longitudes, 10 latitude bands).
    nlon, nlat = 10, 10
    verts = [(0.0, 0.0, 12.0)]
    for i in range(1, nlat):
        th = math.pi * i / nlat
        for j in range(nlon):
            ph = 2 * math.pi * j / nlon
            r = 12.0 * (1 + 0.18 * math.sin(2 * th) * math.cos(3 * ph) + 0.08 * math.cos(th))
            verts.append((r * math.sin(th) * math.cos(ph), 0.8 * r * math.sin(th) * math.sin(ph), r * math.cos(th)))
    verts.append((0.0, 0.0, -12.0))
    ring = lambda i, j: 1 + (i - 1) * nlon + (j % nlon)
    faces = [[0, ring(1, j), ring(1, j + 1)] for j in range(nlon)]
    for i in range(1, nlat - 1):
        for j in range(nlon):
            a, b, c, d = ring(i, j), ring(i, j + 1), ring(i + 1, j + 1), ring(i + 1, j)
            faces += [[a, d, c], [a, c, b]]
    south = len(verts) - 1
    faces += [[south, ring(nlat - 1, j + 1), ring(nlat - 1, j)] for j in range(nlon)]
    write("blob180", verts, faces)


if __name__ == "__main__":
    main()
