"""Finite quotient rings O/p^m, their unit groups, and unit characters.

Two branches are supported.  The ``padic`` branch models Z_p truncated at
level m, i.e. Z/p^m (residue degree f = 1 only).  The ``laurent`` branch
models F_q[[t]]/(t^m) with q = p^f, which is how non-prime residue
cardinalities are exercised.  Either way the ring has q^m elements, its
maximal ideal is generated by the uniformiser image, and the residue
field is F_q.

Elements are stored as integer codes in range(q^m).  For the padic
branch the code is the residue itself.  For the laurent branch the code
packs the t-digits little-endian in base q, each digit encoding an F_q
element by its polynomial coefficients in base p.  With this packing,
reduction to level l is ``code % q**l`` and division by the l-th
uniformiser power is ``code // q**l`` on both branches.

Character values are kept exact as rotation indices k/N, meaning
e^(2*pi*i*k/N); conversion to floating complex happens on demand.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

import numpy as np

# Built-in irreducible polynomials over F_p (little-endian, monic) for the
# small residue fields used by default; callers may supply their own.
SMALL_FIELD_POLYS = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (1, 0, 1),
    16: (1, 1, 0, 0, 1),
    25: (3, 0, 1),
    27: (1, 2, 0, 1),
    32: (1, 0, 1, 0, 0, 1),
    49: (1, 0, 1),
}


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _poly_mod(num, den, p):
    """Remainder of num by monic den over F_p (little-endian lists)."""
    num = list(num)
    dd = len(den) - 1
    while len(num) - 1 >= dd and any(num):
        if num[-1] == 0:
            num.pop()
            continue
        c = num[-1]
        shift = len(num) - 1 - dd
        for i, dc in enumerate(den):
            num[shift + i] = (num[shift + i] - c * dc) % p
        num.pop()
    return num


def _poly_is_irreducible(poly, p):
    """Brute-force irreducibility over F_p by trial division."""
    f = len(poly) - 1
    if f < 1 or poly[-1] % p == 0:
        return False
    for d in range(1, f // 2 + 1):
        for tail in product(range(p), repeat=d):
            den = list(tail) + [1]  # monic degree-d candidate
            if not any(_poly_mod(poly, den, p)):
                return False
    return True


class Fq:
    """Arithmetic tables for the residue field F_q, q = p^f.

    Elements are codes in range(q): base-p digits are the polynomial
    coefficients in the chosen irreducible modulus.
    """

    def __init__(self, p, f, poly=None):
        self.p = p
        self.f = f
        self.q = q = p**f
        if f == 1:
            poly = (0, 1)
        elif poly is None:
            if q not in SMALL_FIELD_POLYS:
                raise ValueError(
                    f"no built-in modulus for q = {q}; supply irreducible coefficients"
                )
            poly = SMALL_FIELD_POLYS[q]
        poly = tuple(c % p for c in poly)
        if len(poly) != f + 1:
            raise ValueError(f"modulus must have degree {f}")
        if poly[-1] != 1:
            inv = pow(poly[-1], -1, p)
            poly = tuple(c * inv % p for c in poly)
        if f > 1 and not _poly_is_irreducible(poly, p):
            raise ValueError(f"{poly} is not irreducible over F_{p}")
        self.poly = poly

        def decode(a):
            out = []
            for _ in range(f):
                out.append(a % p)
                a //= p
            return out

        def encode(cs):
            v = 0
            for c in reversed(cs[:f]):
                v = v * p + (c % p)
            return v

        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            da = decode(a)
            for b in range(q):
                db = decode(b)
                add[a, b] = encode([(x + y) % p for x, y in zip(da, db)])
                conv = [0] * (2 * f - 1)
                for i, x in enumerate(da):
                    for j, y in enumerate(db):
                        conv[i + j] = (conv[i + j] + x * y) % p
                mul[a, b] = encode(_poly_mod(conv, poly, p) + [0] * f)
        self.add = add
        self.mul = mul
        self.neg = np.array(
            [encode([(-c) % p for c in decode(a)]) for a in range(q)], dtype=np.int64
        )
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv = inv


class RingLevel:
    """The ring O/p^m for one of the two supported branches.

    Immutable after construction; all operations work on integer codes in
    range(size) and the vectorised variants on numpy arrays of codes.
    """

    def __init__(self, branch, p, f, m, poly=None):
        if branch not in ("padic", "laurent"):
            raise ValueError(f"unknown branch {branch!r}")
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if m < 1:
            raise ValueError("level m must be >= 1")
        if f < 1:
            raise ValueError("extension degree f must be >= 1")
        if branch == "padic" and f != 1:
            raise ValueError("padic branch requires f = 1 (Galois rings are unsupported)")
        self.branch = branch
        self.p = p
        self.f = f
        self.m = m
        self.q = p**f
        self.size = self.q**m
        self.fq = None if branch == "padic" else Fq(p, f, poly)
        self.poly = None if self.fq is None else self.fq.poly
        # Per-code tables: valuation, negation, unit inverse (0 at non-units).
        if branch == "padic":
            codes = np.arange(self.size, dtype=np.int64)
            val = np.zeros(self.size, dtype=np.int64)
            rem = codes.copy()
            for _ in range(m):
                divisible = (rem != 0) & (rem % p == 0)
                val[divisible] += 1
                rem[divisible] //= p
            val[codes == 0] = m
            self._val = val
            self._neg = (-codes) % self.size
        else:
            q, fq = self.q, self.fq
            codes = np.arange(self.size, dtype=np.int64)
            digits = self._digits_of(codes)
            nz = digits != 0
            val = np.where(nz.any(axis=1), nz.argmax(axis=1), m)
            self._val = val.astype(np.int64)
            neg_digits = fq.neg[digits]
            self._neg = self._encode_digits(neg_digits)
        inv = np.zeros(self.size, dtype=np.int64)
        for a in range(self.size):
            if self._val[a] == 0:
                inv[a] = self._inv_scalar(a)
        self._inv = inv
        self._units = np.nonzero(self._val == 0)[0]
        self._levels = {}
        self._unit_basis = None
        self._characters = None
        self._unit_subgroup_bases = {}

    # -- encoding helpers (laurent) --------------------------------------

    def _digits_of(self, codes):
        q, m = self.q, self.m
        codes = np.asarray(codes, dtype=np.int64)
        out = np.empty(codes.shape + (m,), dtype=np.int64)
        rem = codes
        for i in range(m):
            out[..., i] = rem % q
            rem = rem // q
        return out

    def _encode_digits(self, digits):
        q = self.q
        out = np.zeros(digits.shape[:-1], dtype=np.int64)
        for i in range(self.m - 1, -1, -1):
            out = out * q + digits[..., i]
        return out

    # -- scalar arithmetic ------------------------------------------------

    def add(self, a, b):
        if self.branch == "padic":
            return (a + b) % self.size
        return int(self._encode_digits(self.fq.add[self._digits_of(a), self._digits_of(b)]))

    def neg(self, a):
        return int(self._neg[a])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.branch == "padic":
            return (a * b) % self.size
        da, db = self._digits_of(a), self._digits_of(b)
        fq, m = self.fq, self.m
        out = np.zeros(m, dtype=np.int64)
        for k in range(m):
            acc = 0
            for i in range(k + 1):
                acc = fq.add[acc, fq.mul[da[i], db[k - i]]]
            out[k] = acc
        return int(self._encode_digits(out))

    def _inv_scalar(self, a):
        if self.branch == "padic":
            return pow(int(a), -1, self.size)
        # Hensel lift of the residue-field inverse: y -> y*(2 - a*y).
        y = int(self.fq.inv[a % self.q])
        two = self.add(1, 1)
        prec = 1
        while prec < self.m:
            y = self.mul(y, self.sub(two, self.mul(a, y)))
            prec *= 2
        return y

    def inv(self, a):
        if self._val[a] != 0:
            raise ValueError(f"{self.element_str(a)} is not a unit")
        return int(self._inv[a])

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        out, base = 1, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def val(self, a):
        return int(self._val[a])

    def is_unit(self, a):
        return self._val[a] == 0

    def abs_exponent(self, a):
        """|a| encoded as q^(-v); returns the Fraction q^(-val)."""
        return Fraction(1, self.q ** self.val(a))

    # -- vectorised arithmetic on code arrays ------------------------------

    def add_arr(self, A, B):
        if self.branch == "padic":
            return (A + B) % self.size
        return self._encode_digits(self.fq.add[self._digits_of(A), self._digits_of(B)])

    def neg_arr(self, A):
        return self._neg[A]

    def sub_arr(self, A, B):
        return self.add_arr(A, self._neg[B])

    def mul_arr(self, A, B):
        if self.branch == "padic":
            return (A * B) % self.size
        da, db = self._digits_of(A), self._digits_of(B)
        fq, m = self.fq, self.m
        out = np.empty(np.broadcast(A, B).shape + (m,), dtype=np.int64)
        for k in range(m):
            acc = np.zeros(np.broadcast(A, B).shape, dtype=np.int64)
            for i in range(k + 1):
                acc = fq.add[acc, fq.mul[da[..., i], db[..., k - i]]]
            out[..., k] = acc
        return self._encode_digits(out)

    def val_arr(self, A):
        return self._val[A]

    def inv_arr(self, A):
        if not (self._val[A] == 0).all():
            raise ValueError("non-unit entry")
        return self._inv[A]

    def matmul(self, A, B):
        """Ring matrix product; A is (..., r, s), B is (s, t)."""
        A = np.asarray(A)
        B = np.asarray(B)
        if self.branch == "padic":
            return (A @ B) % self.size
        s = A.shape[-1]
        out = np.zeros(A.shape[:-1] + (B.shape[-1],), dtype=np.int64)
        for j in range(s):
            out = self.add_arr(out, self.mul_arr(A[..., j, None], B[j, None, :]))
        return out

    # -- structure maps -----------------------------------------------------

    def uniformizer_pow(self, ell):
        return self.q**ell if ell < self.m else 0

    def reduce_code(self, a, ell):
        return a % self.q**ell if ell < self.m else a

    def reduce_arr(self, A, ell):
        return A % self.q**ell if ell < self.m else A

    def shift_down(self, a, ell):
        """Exact division by the ell-th uniformiser power (requires val >= ell)."""
        step = self.q**ell
        if np.any(np.asarray(a) % step):
            raise ValueError("valuation too small for exact division")
        return a // step

    def at_level(self, ell):
        if ell == self.m:
            return self
        if ell not in self._levels:
            self._levels[ell] = RingLevel(self.branch, self.p, self.f, ell, self.poly)
        return self._levels[ell]

    def elements(self):
        return range(self.size)

    def units(self):
        return self._units

    def element_str(self, a):
        if self.branch == "padic":
            return str(int(a))
        digs = [int(d) for d in self._digits_of(int(a))]
        return "(" + ",".join(str(d) for d in digs) + ")"

    def __eq__(self, other):
        return isinstance(other, RingLevel) and (
            self.branch,
            self.p,
            self.f,
            self.m,
            self.poly,
        ) == (other.branch, other.p, other.f, other.m, other.poly)

    def __hash__(self):
        return hash((self.branch, self.p, self.f, self.m, self.poly))

    def __repr__(self):
        if self.branch == "padic":
            return f"RingLevel(Z/{self.p}^{self.m})"
        return f"RingLevel(F_{self.q}[t]/t^{self.m})"


def make_ring_level(branch, p, f, m, poly=None):
    """Construct O/p^m; rejects invalid primes and padic extensions."""
    return RingLevel(branch, p, f, m, poly)


class RingElem:
    """A residue at a fixed RingLevel, with operator sugar over codes."""

    __slots__ = ("ring", "code")

    def __init__(self, ring, code):
        self.ring = ring
        self.code = int(code) % ring.size

    def __add__(self, other):
        return RingElem(self.ring, self.ring.add(self.code, self._c(other)))

    def __sub__(self, other):
        return RingElem(self.ring, self.ring.sub(self.code, self._c(other)))

    def __mul__(self, other):
        return RingElem(self.ring, self.ring.mul(self.code, self._c(other)))

    def __neg__(self):
        return RingElem(self.ring, self.ring.neg(self.code))

    def __pow__(self, e):
        return RingElem(self.ring, self.ring.pow(self.code, e))

    def inverse(self):
        return RingElem(self.ring, self.ring.inv(self.code))

    def _c(self, other):
        if isinstance(other, RingElem):
            if other.ring != self.ring:
                raise ValueError("ring mismatch")
            return other.code
        return int(other) % self.ring.size

    @property
    def valuation(self):
        return self.ring.val(self.code)

    @property
    def is_unit(self):
        return self.ring.is_unit(self.code)

    def __eq__(self, other):
        return isinstance(other, RingElem) and self.ring == other.ring and self.code == other.code

    def __hash__(self):
        return hash((self.ring, self.code))

    def __repr__(self):
        return f"RingElem({self.ring.element_str(self.code)})"


# -- abelian structure of the unit group ----------------------------------


def _pgroup_basis(elems, mul, inv, one, rho):
    """Basis of a finite abelian rho-group given as a list of hashables.

    Returns a list of (generator, order) whose cyclic factors give an
    internal direct product.  Classical recursion: split off an element of
    maximal order, recurse on the quotient, lift quotient generators.
    """
    if len(elems) == 1:
        return []

    def order_of(x):
        k, y = 1, x
        while y != one:
            y = mul(y, x)
            k += 1
        return k

    orders = {x: order_of(x) for x in elems}
    g = max(elems, key=lambda x: orders[x])
    d = orders[g]
    if d == len(elems):
        return [(g, d)]
    # cosets modulo <g>, keyed by the minimal member
    gpow = [one]
    for _ in range(d - 1):
        gpow.append(mul(gpow[-1], g))
    gdlog = {x: i for i, x in enumerate(gpow)}
    key_of = {}
    for x in elems:
        if x in key_of:
            continue
        coset = [mul(x, h) for h in gpow]
        k = min(coset)
        for y in coset:
            key_of[y] = k
    qelems = sorted(set(key_of.values()))
    qmul = lambda a, b: key_of[mul(a, b)]
    qinv = lambda a: key_of[inv(a)]
    qbasis = _pgroup_basis(qelems, qmul, qinv, key_of[one], rho)
    out = [(g, d)]
    for h, hb in qbasis:
        t = gdlog[_pow(h, hb, mul, one)]
        if t % hb != 0:
            raise RuntimeError("abelian basis lift failed")  # impossible by theory
        adj = _pow(inv(g), t // hb, mul, one)
        out.append((mul(h, adj), hb))
    return out


def _pow(x, e, mul, one):
    out, base = one, x
    while e:
        if e & 1:
            out = mul(out, base)
        base = mul(base, base)
        e >>= 1
    return out


class UnitGroupBasis:
    """Independent generators of a finite abelian subgroup of (O/p^m)^x.

    The direct-product property is verified by exhaustive enumeration at
    construction time; ``dlog`` maps every member to its exponent vector.
    """

    def __init__(self, ring, members):
        self.ring = ring
        members = sorted(int(u) for u in members)
        n = len(members)
        mul = ring.mul
        inv = lambda a: ring.inv(a)
        gens, orders = [], []
        if n > 1:
            for rho in sorted(_prime_factors(n)):
                a = 0
                nn = n
                while nn % rho == 0:
                    nn //= rho
                    a += 1
                e = n // rho**a
                sylow = sorted({_pow(u, e, mul, 1) for u in members})
                for g, d in _pgroup_basis(sylow, mul, inv, 1, rho):
                    gens.append(g)
                    orders.append(d)
        self.gens = tuple(gens)
        self.orders = tuple(orders)
        self.exponent = math.lcm(*orders) if orders else 1
        if math.prod(orders) != n:
            raise RuntimeError("basis orders do not multiply to the group order")
        dlog = {}
        for vec in product(*(range(d) for d in orders)):
            u = 1
            for g, e in zip(gens, vec):
                u = mul(u, _pow(g, e, mul, 1))
            if u in dlog:
                raise RuntimeError("generators are not independent")
            dlog[u] = vec
        if sorted(dlog) != members:
            raise RuntimeError("generators do not span the group")
        self.dlog = dlog
        self.members = members

    def __len__(self):
        return len(self.members)


def _prime_factors(n):
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def unit_group_basis(ring):
    """Basis of the full unit group (cached on the ring)."""
    if ring._unit_basis is None:
        ring._unit_basis = UnitGroupBasis(ring, ring.units())
    return ring._unit_basis


def unit_subgroup_basis(ring, ell):
    """Basis of the subgroup of units congruent to 1 mod p^ell."""
    if ell <= 0:
        return unit_group_basis(ring)
    if ell not in ring._unit_subgroup_bases:
        step = ring.q**ell if ell < ring.m else ring.size
        members = [int(u) for u in ring.units() if (u - 1) % step == 0]
        ring._unit_subgroup_bases[ell] = UnitGroupBasis(ring, members)
    return ring._unit_subgroup_bases[ell]


class RootOfUnity:
    """Exact root of unity e^(2*pi*i*num/order)."""

    __slots__ = ("num", "order")

    def __init__(self, num, order):
        g = math.gcd(num % order, order) if order else 1
        self.num = (num % order) // g
        self.order = order // g

    def __complex__(self):
        return complex(np.exp(2j * np.pi * self.num / self.order))

    def __mul__(self, other):
        o = math.lcm(self.order, other.order)
        return RootOfUnity(self.num * (o // self.order) + other.num * (o // other.order), o)

    def __eq__(self, other):
        return isinstance(other, RootOfUnity) and (self.num, self.order) == (
            other.num,
            other.order,
        )

    def __hash__(self):
        return hash((self.num, self.order))

    def __repr__(self):
        return f"RootOfUnity({self.num}/{self.order})"


ONE = RootOfUnity(0, 1)


class UnitCharacter:
    """A character of (O/p^m)^x given by exponents against a unit basis.

    Values are exact rotation indices over the group exponent L; the
    complex table is materialised once per character.  The conductor
    exponent is the least l >= 0 with the character trivial on 1 + p^l.
    """

    def __init__(self, ring, basis, exps):
        self.ring = ring
        self.basis = basis
        self.exps = tuple(int(e) % d for e, d in zip(exps, basis.orders))
        L = basis.exponent
        self.order = L
        nums = np.full(ring.size, -1, dtype=np.int64)
        for u, vec in basis.dlog.items():
            s = 0
            for a, e, d in zip(self.exps, vec, basis.orders):
                s += a * e * (L // d)
            nums[u] = s % L
        self._nums = nums
        self._vals = np.where(
            nums >= 0, np.exp(2j * np.pi * np.where(nums >= 0, nums, 0) / L), 0.0
        )
        self.c = self._conductor()

    def _conductor(self):
        ring = self.ring
        for ell in range(ring.m + 1):
            step = ring.q**ell if ell < ring.m else ring.size
            ok = True
            for u in ring.units():
                if (u - 1) % step == 0 and self._nums[u] != 0:
                    ok = False
                    break
            if ok:
                return ell
        raise RuntimeError("unreachable: every character is trivial on 1 + p^m = {1}")

    @property
    def is_trivial(self):
        return all(e == 0 for e in self.exps)

    def eval_rot(self, u):
        if self._nums[u] < 0:
            raise ValueError(f"{self.ring.element_str(u)} is not a unit")
        return RootOfUnity(int(self._nums[u]), self.order)

    def __call__(self, u):
        if self._nums[u] < 0:
            raise ValueError(f"{self.ring.element_str(u)} is not a unit")
        return complex(self._vals[u])

    def eval_arr(self, codes):
        """Complex values on an array of unit codes (caller guarantees units)."""
        return self._vals[codes]

    def __mul__(self, other):
        if other.ring != self.ring or other.basis is not self.basis:
            raise ValueError("characters must share a unit basis")
        return UnitCharacter(
            self.ring, self.basis, tuple(a + b for a, b in zip(self.exps, other.exps))
        )

    def conj(self):
        return UnitCharacter(self.ring, self.basis, tuple(-a for a in self.exps))

    def __eq__(self, other):
        return (
            isinstance(other, UnitCharacter)
            and self.ring == other.ring
            and self.exps == other.exps
        )

    def __hash__(self):
        return hash((self.ring, self.exps))

    def __repr__(self):
        return f"UnitCharacter(exps={self.exps}, c={self.c})"


def characters(ring):
    """All characters of (O/p^m)^x, sorted by exponent vector (cached)."""
    if ring._characters is None:
        basis = unit_group_basis(ring)
        chs = [
            UnitCharacter(ring, basis, vec)
            for vec in product(*(range(d) for d in basis.orders))
        ]
        chs.sort(key=lambda ch: ch.exps)
        ring._characters = chs
    return ring._characters


def char_eval(chi, u):
    """Exact value of chi at the unit code (or RingElem) u."""
    if isinstance(u, RingElem):
        u = u.code
    return chi.eval_rot(u)
