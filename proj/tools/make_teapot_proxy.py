#!/usr/bin/env python3
"""Writes assets/teapot_proxy.obj: a closed lathe body, a torus handle and a
tapered spout, about a thousand triangles, resting on y = 0."""
import math
import pathlib
import sys

SLICES = 24


def lathe(profile, slices, verts, faces):
    base = len(verts)
    rings = len(profile)
    for r, y in profile:
        for s in range(slices):
            a = 2 * math.pi * s / slices
            verts.append((r * math.cos(a), y, r * math.sin(a)))
    for i in range(rings - 1):
        for s in range(slices):
            a = base + i * slices + s
            b = base + i * slices + (s + 1) % slices
            c = a + slices
            d = b + slices
            faces.append((a, c, b))
            faces.append((b, c, d))
    # caps
    for ring, y, flip in ((0, profile[0][1], True), (rings - 1, profile[-1][1], False)):
        center = len(verts)
        verts.append((0.0, y, 0.0))
        for s in range(slices):
            a = base + ring * slices + s
            b = base + ring * slices + (s + 1) % slices
            faces.append((center, a, b) if flip else (center, b, a))


def torus(center, major, minor, rings, sides, verts, faces):
    base = len(verts)
    cx, cy, cz = center
    for i in range(rings):
        u = 2 * math.pi * i / rings
        for j in range(sides):
            v = 2 * math.pi * j / sides
            r = major + minor * math.cos(v)
            # torus in the x/y plane
            verts.append((cx + r * math.cos(u), cy + r * math.sin(u), cz + minor * math.sin(v)))
    for i in range(rings):
        for j in range(sides):
            a = base + i * sides + j
            b = base + ((i + 1) % rings) * sides + j
            c = base + ((i + 1) % rings) * sides + (j + 1) % sides
            d = base + i * sides + (j + 1) % sides
            faces.append((a, b, c))
            faces.append((a, c, d))


def spout(verts, faces, segments=8, sides=12):
    base = len(verts)
    for i in range(segments + 1):
        t = i / segments
        px, py = 0.75 + 0.55 * t, 0.35 + 0.45 * t * t + 0.1 * t
        radius = 0.14 - 0.07 * t
        tx, ty = 0.55, 0.9 * t + 0.1
        n = math.hypot(tx, ty)
        tx, ty = tx / n, ty / n
        nx, ny = -ty, tx
        for j in range(sides):
            a = 2 * math.pi * j / sides
            verts.append((px + radius * math.cos(a) * nx, py + radius * math.cos(a) * ny, radius * math.sin(a)))
    for i in range(segments):
        for j in range(sides):
            a = base + i * sides + j
            b = base + i * sides + (j + 1) % sides
            c = a + sides
            d = b + sides
            faces.append((a, b, c))
            faces.append((b, d, c))


def main():
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parents[1] / "assets" / "teapot_proxy.obj"
    verts, faces = [], []
    body = [(0.55, 0.0), (0.7, 0.08), (0.82, 0.22), (0.86, 0.38), (0.84, 0.52), (0.76, 0.66),
            (0.62, 0.76), (0.5, 0.8), (0.42, 0.86), (0.3, 0.9), (0.18, 0.94), (0.1, 1.0), (0.06, 1.06)]
    lathe(body, SLICES, verts, faces)
    torus((-0.86, 0.45, 0.0), 0.26, 0.05, 20, 8, verts, faces)
    spout(verts, faces)
    with out.open("w") as f:
        f.write("# teapot proxy: lathe body, torus handle, tapered spout\n")
        for v in verts:
            f.write("v %.6f %.6f %.6f\n" % v)
        for a, b, c in faces:
            f.write("f %d %d %d\n" % (a + 1, b + 1, c + 1))
    print("%s: %d vertices, %d triangles" % (out, len(verts), len(faces)))


if __name__ == "__main__":
    main()
