"""Enumeration of and action on the finite sphere S^(n-1) mod p^m.

A sphere point is an n-tuple over O/p^m with at least one unit
coordinate.  Points are enumerated in lexicographic order of their code
tuples, and the resulting index bijection is what function vectors are
keyed by downstream.
"""

from __future__ import annotations

from itertools import product

import numpy as np


def sphere_size(q, n, m):
    """q^((m-1)n) * (q^n - 1): tuples with at least one unit coordinate."""
    return q ** ((m - 1) * n) * (q**n - 1)


class SpherePoint:
    __slots__ = ("ring", "coords")

    def __init__(self, ring, coords):
        coords = tuple(int(c) for c in coords)
        if not any(ring.is_unit(c) for c in coords):
            raise ValueError("not a sphere point: no unit coordinate")
        self.ring = ring
        self.coords = coords

    def __eq__(self, other):
        return (
            isinstance(other, SpherePoint)
            and self.ring == other.ring
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.ring, self.coords))

    def __repr__(self):
        return "SpherePoint(" + ",".join(self.ring.element_str(c) for c in self.coords) + ")"


class SphereIndex:
    """Dense index of all sphere points at one level, plus action helpers.

    Immutable after construction.  ``points`` is an (N, n) array of codes
    in enumeration order; ``index_of`` maps a code tuple back to its slot.
    """

    def __init__(self, ring, n, cap=10**6):
        if n < 2:
            raise ValueError("n >= 2 required")
        expected = sphere_size(ring.q, n, ring.m)
        if expected > cap:
            raise ValueError(f"sphere size {expected} exceeds cap {cap}")
        self.ring = ring
        self.n = n
        pts = [
            t
            for t in product(range(ring.size), repeat=n)
            if any(ring.is_unit(c) for c in t)
        ]
        if len(pts) != expected:
            raise RuntimeError("sphere enumeration does not match the size formula")
        self.points = np.array(pts, dtype=np.int64)
        self.index_of = {t: i for i, t in enumerate(pts)}
        self.size = expected
        self.e_n = self.index_of[(0,) * (n - 1) + (1,)]
        self.coord_vals = ring.val_arr(self.points)
        self._scalar_perms = {}
        self._matrix_perms = {}
        self._children = {}

    def idx(self, coords):
        return self.index_of[tuple(int(c) for c in coords)]

    def perm_of_matrix(self, k):
        """Permutation sigma with sigma[i] = index of points[i] . k."""
        k = np.asarray(k, dtype=np.int64)
        key = k.tobytes()
        if key not in self._matrix_perms:
            moved = self.ring.matmul(self.points, k)
            idx = self.index_of
            self._matrix_perms[key] = np.fromiter(
                (idx[tuple(row)] for row in moved.tolist()), dtype=np.int64, count=self.size
            )
        return self._matrix_perms[key]

    def scalar_perm(self, a):
        """Permutation i -> index of a * points[i] for a unit code a."""
        a = int(a)
        if a not in self._scalar_perms:
            if not self.ring.is_unit(a):
                raise ValueError("scalar action requires a unit")
            moved = self.ring.mul_arr(self.points, np.int64(a))
            idx = self.index_of
            self._scalar_perms[a] = np.fromiter(
                (idx[tuple(row)] for row in moved.tolist()), dtype=np.int64, count=self.size
            )
        return self._scalar_perms[a]

    def child(self, ell, cap=10**6):
        """SphereIndex at level ell <= m plus the fiber projection map.

        Returns (child_index, proj) where proj[i] is the child slot of the
        reduction of point i.
        """
        if ell == self.ring.m:
            return self, np.arange(self.size)
        if ell not in self._children:
            sub = SphereIndex(self.ring.at_level(ell), self.n, cap=cap)
            red = self.ring.reduce_arr(self.points, ell)
            proj = np.fromiter(
                (sub.index_of[tuple(row)] for row in red.tolist()),
                dtype=np.int64,
                count=self.size,
            )
            self._children[ell] = (sub, proj)
        return self._children[ell]


def enumerate_sphere(ring, n, cap=10**6):
    return SphereIndex(ring, n, cap=cap)


def reduce_point(pt, ell):
    """Coordinatewise reduction to level ell <= m."""
    ring = pt.ring
    if not 1 <= ell <= ring.m:
        raise ValueError("1 <= ell <= m required")
    low = ring.at_level(ell)
    return SpherePoint(low, tuple(ring.reduce_code(c, ell) for c in pt.coords))


def act_point(pt, k):
    """Right action x . k (row vector times matrix) over the ring."""
    ring = pt.ring
    a = getattr(k, "a", k)
    a = np.asarray(a, dtype=np.int64)
    kring = getattr(k, "ring", ring)
    if kring != ring or a.shape != (len(pt.coords), len(pt.coords)):
        raise ValueError("dimension or level mismatch")
    moved = ring.matmul(np.array(pt.coords, dtype=np.int64), a)
    return SpherePoint(ring, tuple(int(c) for c in moved))
