"""Geodesic icosahedral triangulation of the unit sphere.

Vertices sit at the two poles (the orientation the reference eigenvalue
table was produced with); refinement bisects edges and reprojects the
midpoints each round. Mesh points are triangle centroids; the surface
Laplacian is the three-neighbour finite-difference stencil with
great-circle distances.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from spherefield.harmonics import sph_harm_points

MAX_REFINEMENT = 7


@dataclass
class SphereMesh:
    vertices: np.ndarray     # (nv, 3) unit vectors
    triangles: np.ndarray    # (m, 3) vertex indices
    centroids: np.ndarray    # (m, 3) unit vectors
    areas: np.ndarray        # (m,) steradians
    neighbors: np.ndarray    # (m, 3) adjacent triangle indices
    refinement: int

    @property
    def m(self) -> int:
        return len(self.triangles)


@dataclass
class DiscreteLaplacian:
    matrix: sp.csr_matrix
    mean_dist: np.ndarray    # per-row mean neighbour distance
    weights: np.ndarray      # (m, 3) off-diagonal weights


def great_circle(a: np.ndarray, b: np.ndarray):
    """Arc length between unit vectors: arccos of the clamped dot product."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    for v in (a, b):
        n = np.linalg.norm(v, axis=-1)
        if np.any(np.abs(n - 1.0) > 1e-10):
            raise ValueError("inputs must be unit vectors")
    return np.arccos(np.clip(np.sum(a * b, axis=-1), -1.0, 1.0))


def _base_icosahedron():
    """Icosahedron with vertices at both poles and two latitude rings."""
    verts = [np.array([0.0, 0.0, 1.0])]
    lat = math.atan(0.5)
    cl, sl = math.cos(lat), math.sin(lat)
    for k in range(5):
        lon = 2.0 * math.pi * k / 5.0
        verts.append(np.array([cl * math.cos(lon), cl * math.sin(lon), sl]))
    for k in range(5):
        lon = 2.0 * math.pi * k / 5.0 + math.pi / 5.0
        verts.append(np.array([cl * math.cos(lon), cl * math.sin(lon), -sl]))
    verts.append(np.array([0.0, 0.0, -1.0]))
    faces = []
    for k in range(5):
        k2 = (k + 1) % 5
        faces += [[0, 1 + k, 1 + k2],
                  [1 + k, 6 + k, 1 + k2],
                  [1 + k2, 6 + k, 6 + k2],
                  [6 + k, 11, 6 + k2]]
    return np.array(verts), np.array(faces)


def _subdivide(verts: np.ndarray, faces: np.ndarray):
    """Bisect every edge and reproject the new vertices onto the sphere."""
    verts = [tuple(v) for v in verts]
    cache: dict = {}

    def midpoint(i, j):
        key = (i, j) if i < j else (j, i)
        if key in cache:
            return cache[key]
        v = np.array(verts[i]) + np.array(verts[j])
        v /= np.linalg.norm(v)
        idx = len(verts)
        verts.append(tuple(v))
        cache[key] = idx
        return idx

    out = []
    for a, b, c in faces:
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        out += [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]
    return np.array(verts), np.array(out)


def spherical_triangle_area(a, b, c) -> float:
    """Spherical excess via L'Huilier's formula (stable for small triangles)."""
    ar = great_circle(b, c)
    br = great_circle(c, a)
    cr = great_circle(a, b)
    s = 0.5 * (ar + br + cr)
    t = (math.tan(s / 2) * math.tan((s - ar) / 2)
         * math.tan((s - br) / 2) * math.tan((s - cr) / 2))
    return 4.0 * math.atan(math.sqrt(max(t, 0.0)))


def build_mesh(refinement: int) -> SphereMesh:
    """Icosahedral mesh after the given number of 4-way subdivisions."""
    if refinement < 0:
        raise ValueError("refinement must be nonnegative")
    if refinement > MAX_REFINEMENT:
        raise ValueError(f"refinement capped at {MAX_REFINEMENT} for memory sanity")
    verts, faces = _base_icosahedron()
    for _ in range(refinement):
        verts, faces = _subdivide(verts, faces)
    cent = verts[faces].mean(axis=1)
    cent /= np.linalg.norm(cent, axis=1)[:, None]
    A, B, C = verts[faces[:, 0]], verts[faces[:, 1]], verts[faces[:, 2]]
    ar = great_circle(B, C)
    br = great_circle(C, A)
    cr = great_circle(A, B)
    s = 0.5 * (ar + br + cr)
    t = (np.tan(s / 2) * np.tan((s - ar) / 2)
         * np.tan((s - br) / 2) * np.tan((s - cr) / 2))
    areas = 4.0 * np.arctan(np.sqrt(np.maximum(t, 0.0)))
    edge2tri = defaultdict(list)
    for ti, (p, q, r) in enumerate(faces):
        for e in ((p, q), (q, r), (r, p)):
            edge2tri[(min(e), max(e))].append(ti)
    nbr = [[] for _ in range(len(faces))]
    for ts in edge2tri.values():
        if len(ts) != 2:
            raise RuntimeError("non-manifold edge in subdivision")
        nbr[ts[0]].append(ts[1])
        nbr[ts[1]].append(ts[0])
    return SphereMesh(vertices=verts, triangles=faces, centroids=cent,
                      areas=areas, neighbors=np.array(nbr),
                      refinement=refinement)


def discrete_laplacian(mesh: SphereMesh) -> DiscreteLaplacian:
    """Three-neighbour surface Laplacian with weights 4/(hbar N h_ij).

    Distances are measured along the surface. Row sums vanish by
    construction, so constants lie in the kernel.
    """
    m = mesh.m
    nbr = mesh.neighbors
    h = np.arccos(np.clip(
        np.einsum('ij,ikj->ik', mesh.centroids, mesh.centroids[nbr]), -1.0, 1.0))
    hbar = h.mean(axis=1)
    w = (4.0 / hbar[:, None]) / 3.0 / h
    rows = np.repeat(np.arange(m), 3)
    diag = -(4.0 / hbar) * (1.0 / h).mean(axis=1)
    mat = sp.coo_matrix(
        (np.concatenate([w.ravel(), diag]),
         (np.concatenate([rows, np.arange(m)]),
          np.concatenate([nbr.ravel(), np.arange(m)]))),
        shape=(m, m)).tocsr()
    return DiscreteLaplacian(matrix=mat, mean_dist=hbar, weights=w)


def laplace_eigentest(mesh: SphereMesh, l: int, m_order: int = 0,
                      lap: DiscreteLaplacian | None = None):
    """Solve the discrete Poisson problem with a spherical-harmonic source.

    Solves D U = -Y_l^m at the centroids, with the kernel direction pinned
    by an area-weighted zero-mean constraint. Returns the eigenvalue
    quotient <Y,Y>/<U,Y> (area-weighted inner products), which approximates
    l(l+1), and the area-weighted error norm ||U - Y/(l(l+1))||.
    """
    if l < 1:
        raise ValueError("the constant harmonic lies in the kernel; need l >= 1")
    lap = lap or discrete_laplacian(mesh)
    y = sph_harm_points(l, m_order, mesh.centroids)
    y = np.real_if_close(y) if m_order == 0 else y
    a = mesh.areas
    m = mesh.m
    big = sp.bmat([[lap.matrix, a[:, None]], [a[None, :], None]]).tocsc()
    lu = spla.splu(big)

    def solve(rhs_real):
        sol = lu.solve(np.concatenate([-rhs_real, [0.0]]))
        return sol[:m]

    if np.iscomplexobj(y):
        U = solve(y.real) + 1j * solve(y.imag)
        quot = float(np.real((a * y * np.conj(y)).sum()
                             / (a * U * np.conj(y)).sum()))
        err = float(np.sqrt(np.real(
            (a * np.abs(U - y / (l * (l + 1))) ** 2).sum())))
    else:
        y = np.real(y)
        U = solve(y)
        quot = float((a * y * y).sum() / (a * U * y).sum())
        err = float(np.sqrt((a * (U - y / (l * (l + 1))) ** 2).sum()))
    return quot, err


def mesh_dump(mesh: SphereMesh) -> str:
    """Text dump: 'm n' header, centroid rows 'x y z area', neighbour rows."""
    lines = [f"{mesh.m} {mesh.refinement}"]
    for c, a in zip(mesh.centroids, mesh.areas):
        lines.append(f"{c[0]:.17g} {c[1]:.17g} {c[2]:.17g} {a:.17g}")
    for nb in mesh.neighbors:
        lines.append(f"{nb[0]} {nb[1]} {nb[2]}")
    return "\n".join(lines) + "\n"


def eigentest_csv(refinements, degrees, m_order: int = 0) -> str:
    """CSV of eigenvalue quotients and error norms over a refinement sweep."""
    lines = ["n,m,l,quotient,error_norm"]
    for n in refinements:
        mesh = build_mesh(n)
        lap = discrete_laplacian(mesh)
        for l in degrees:
            quot, err = laplace_eigentest(mesh, l, m_order, lap)
            lines.append(f"{n},{mesh.m},{l},{quot:.17g},{err:.17g}")
    return "\n".join(lines) + "\n"
