"""Exact verification of the real and complex zonal harmonic formulas.

Polynomials carry exact rational coefficients throughout; the gamma
ratios in the real zonal formula telescope over even summation indices,
so no floating gamma evaluation ever happens.  Dimension formulas are
cross-checked against the rank-nullity oracle: the exact kernel of the
Laplacian from homogeneous (bi)degree monomials to lower degree.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

import numpy as np


class ExactPoly:
    """Multivariate polynomial with Fraction coefficients.

    Monomials are exponent tuples of fixed length; zero coefficients are
    never stored, so equality is structural.
    """

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars, coeffs=None):
        self.nvars = nvars
        self.coeffs = {}
        if coeffs:
            for e, c in coeffs.items():
                c = Fraction(c)
                if c:
                    self.coeffs[tuple(e)] = c

    @classmethod
    def variable(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return ExactPoly(self.nvars, out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) - c
        return ExactPoly(self.nvars, out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ExactPoly(
                self.nvars, {e: c * Fraction(other) for e, c in self.coeffs.items()}
            )
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return ExactPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = ExactPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def diff(self, i):
        out = {}
        for e, c in self.coeffs.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return ExactPoly(self.nvars, out)

    def evaluate(self, point):
        total = Fraction(0) if all(isinstance(p, (int, Fraction)) for p in point) else 0.0
        for e, c in self.coeffs.items():
            term = c if isinstance(total, Fraction) else float(c)
            for x, k in zip(point, e):
                term = term * x**k
            total = total + term
        return total

    @property
    def is_zero(self):
        return not self.coeffs

    def is_homogeneous(self, degree):
        return all(sum(e) == degree for e in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, ExactPoly) and self.coeffs == other.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.coeffs.items()):
            mono = "*".join(
                f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k
            )
            parts.append(f"{c}" + ("*" + mono if mono else ""))
        return " + ".join(parts)


def laplacian_real(p, n):
    out = ExactPoly(p.nvars, {})
    for j in range(n):
        out = out + p.diff(j).diff(j)
    return out


def laplacian_complex(p, n):
    """4 * sum_j d^2/dz_j dzbar_j; variables are z_0..z_{n-1}, zb_0..zb_{n-1}."""
    out = ExactPoly(p.nvars, {})
    for j in range(n):
        out = out + p.diff(j).diff(n + j)
    return 4 * out


def real_zonal_poly(m, n):
    """Rotation-invariant harmonic of degree m, value 1 at e_n.

    Sum over even nu of
      (-1)^(nu/2) m! / (2^nu (nu/2)! (m-nu)! prod_{t<nu/2} ((n-1)/2 + t))
      * (x_1^2+...+x_{n-1}^2)^(nu/2) * x_n^(m-nu).
    """
    if n < 2 or m < 0:
        raise ValueError("n >= 2 and m >= 0 required")
    r2 = ExactPoly(n, {})
    for j in range(n - 1):
        xj = ExactPoly.variable(n, j)
        r2 = r2 + xj * xj
    xn = ExactPoly.variable(n, n - 1)
    out = ExactPoly(n, {})
    for nu in range(0, m + 1, 2):
        h = nu // 2
        gamma_ratio = Fraction(1)
        for t in range(h):
            gamma_ratio *= Fraction(n - 1, 2) + t
        coef = Fraction((-1) ** h * factorial(m), 2**nu * factorial(h) * factorial(m - nu))
        coef /= gamma_ratio
        out = out + coef * (r2**h) * (xn ** (m - nu))
    return out


def complex_zonal_poly(m1, m2, n):
    """Invariant harmonic of bidegree (m1, m2), value 1 at e_n.

    Sum over nu of (-1)^nu C(m1,nu) C(m2,nu) / C(nu+n-2, n-2)
      * (|z_1|^2+...+|z_{n-1}|^2)^nu * z_n^(m1-nu) * zbar_n^(m2-nu).
    """
    if n < 2 or m1 < 0 or m2 < 0:
        raise ValueError("n >= 2 and m1, m2 >= 0 required")
    nv = 2 * n
    r2 = ExactPoly(nv, {})
    for j in range(n - 1):
        r2 = r2 + ExactPoly.variable(nv, j) * ExactPoly.variable(nv, n + j)
    zn = ExactPoly.variable(nv, n - 1)
    zbn = ExactPoly.variable(nv, 2 * n - 1)
    out = ExactPoly(nv, {})
    for nu in range(0, min(m1, m2) + 1):
        coef = Fraction((-1) ** nu * comb(m1, nu) * comb(m2, nu), comb(nu + n - 2, n - 2))
        out = out + coef * (r2**nu) * (zn ** (m1 - nu)) * (zbn ** (m2 - nu))
    return out


def harmonic_dim_real(m, n):
    if n < 2 or m < 0:
        raise ValueError("n >= 2 and m >= 0 required")
    if m == 0:
        return 1
    if n == 2:
        return 2
    num = (2 * m + n - 2) * comb(m + n - 2, n - 2)
    assert num % (m + n - 2) == 0
    return num // (m + n - 2)


def harmonic_dim_complex(m1, m2, n):
    if n < 2 or m1 < 0 or m2 < 0:
        raise ValueError("n >= 2 and m1, m2 >= 0 required")
    num = (m1 + m2 + n - 1) * comb(m1 + n - 2, n - 2) * comb(m2 + n - 2, n - 2)
    assert num % (n - 1) == 0
    return num // (n - 1)


def _monomials(total, nvars):
    if nvars == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _monomials(total - head, nvars - 1):
            yield (head,) + rest


def _rank_exact(rows):
    """Row rank over Q by fraction-free-ish Gaussian elimination."""
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rows and col < ncols:
        piv = next((i for i, r in enumerate(rows) if r[col]), None)
        if piv is None:
            col += 1
            continue
        rows[0], rows[piv] = rows[piv], rows[0]
        lead = rows[0]
        inv = Fraction(1) / lead[col]
        lead = [c * inv for c in lead]
        new_rows = []
        for r in rows[1:]:
            if r[col]:
                r = [a - r[col] * b for a, b in zip(r, lead)]
            if any(r):
                new_rows.append(r)
        rows = new_rows
        rank += 1
        col += 1
    return rank


def kernel_dim_real(m, n):
    """Exact kernel dimension of the Laplacian on degree-m monomials."""
    monos = list(_monomials(m, n))
    if m < 2:
        return len(monos)
    targets = {e: i for i, e in enumerate(_monomials(m - 2, n))}
    rows = []
    for e in monos:
        row = [Fraction(0)] * len(targets)
        p = ExactPoly(n, {e: 1})
        lp = laplacian_real(p, n)
        for e2, c in lp.coeffs.items():
            row[targets[e2]] = c
        rows.append(row)
    rank = _rank_exact([list(col) for col in zip(*rows)]) if rows else 0
    return len(monos) - rank


def kernel_dim_complex(m1, m2, n):
    """Exact kernel dimension of the complex Laplacian on bidegree monomials."""
    z_monos = list(_monomials(m1, n))
    zb_monos = list(_monomials(m2, n))
    monos = [ez + ezb for ez in z_monos for ezb in zb_monos]
    if m1 == 0 or m2 == 0:
        return len(monos)
    targets = {
        ez + ezb: i
        for i, (ez, ezb) in enumerate(
            (a, b) for a in _monomials(m1 - 1, n) for b in _monomials(m2 - 1, n)
        )
    }
    rows = []
    for e in monos:
        row = [Fraction(0)] * len(targets)
        p = ExactPoly(2 * n, {e: 1})
        lp = laplacian_complex(p, n)
        for e2, c in lp.coeffs.items():
            row[targets[e2]] = c
        rows.append(row)
    rank = _rank_exact([list(col) for col in zip(*rows)]) if rows else 0
    return len(monos) - rank


def e_n_point_real(n):
    return tuple([0] * (n - 1) + [1])


def e_n_point_complex(n):
    return tuple([0] * (n - 1) + [1] + [0] * (n - 1) + [1])


def rotation_invariance_residual(poly, n, samples=20, seed=0):
    """Sampled numerical invariance under block rotations of the head coords."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        theta = rng.uniform(0, 2 * np.pi)
        i, j = (rng.choice(n - 1, size=2, replace=False) if n > 2 else (0, 0))
        x = rng.normal(size=n)
        y = x.copy()
        if n > 2:
            y[i] = np.cos(theta) * x[i] - np.sin(theta) * x[j]
            y[j] = np.sin(theta) * x[i] + np.cos(theta) * x[j]
        else:
            y[0] = -x[0]
        worst = max(worst, abs(poly.evaluate(tuple(x)) - poly.evaluate(tuple(y))))
    return worst
