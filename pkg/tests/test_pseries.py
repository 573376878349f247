from math import comb

import numpy as np
import pytest

from ultrasph.harmonics import SphereSpace, harmonic_subspace, zonal_fn
from ultrasph.matgroup import MatK, enumerate_group, mat_inv, random_in_K, u_ell
from ultrasph.pseries import (
    ConductorNotVisible,
    build_model,
    flag_canon,
    flag_count,
    vector_from_harmonic,
)
from ultrasph.ring import characters, make_ring_level
from ultrasph.verify import character_tuples


@pytest.fixture(scope="module")
def R4():
    return make_ring_level("padic", 2, 1, 2)


@pytest.fixture(scope="module")
def chars4(R4):
    return characters(R4)


def trivial_of(chs):
    return next(c for c in chs if c.is_trivial)


class TestFlagCosets:
    @pytest.mark.parametrize(
        "branch,p,f,m,n,expected",
        [
            ("padic", 2, 1, 1, 2, 3),
            ("padic", 2, 1, 2, 2, 6),
            ("padic", 2, 1, 1, 3, 21),
            ("padic", 3, 1, 2, 2, 12),
        ],
    )
    def test_counts(self, branch, p, f, m, n, expected):
        ring = make_ring_level(branch, p, f, m)
        assert flag_count(ring, n) == expected

    def test_counts_by_brute_force(self):
        # orbit of canonical forms over the full group equals |G|/|B|
        ring = make_ring_level("padic", 2, 1, 2)
        reps = {flag_canon(ring, k.a)[0].tobytes() for k in enumerate_group(ring, 2)}
        assert len(reps) == 6
        ring3 = make_ring_level("padic", 2, 1, 1)
        reps3 = {flag_canon(ring3, k.a)[0].tobytes() for k in enumerate_group(ring3, 3)}
        assert len(reps3) == 21

    def test_canon_is_coset_invariant(self):
        # b g and g canonicalise identically for upper-triangular b
        ring = make_ring_level("padic", 3, 1, 2)
        rng = np.random.default_rng(0)
        for _ in range(50):
            k = random_in_K(ring, 2, rng)
            b = np.array(
                [[int(ring.units()[rng.integers(len(ring.units()))]), rng.integers(9)],
                 [0, int(ring.units()[rng.integers(len(ring.units()))])]],
                dtype=np.int64,
            )
            bk = ring.matmul(b, k.a)
            assert np.array_equal(flag_canon(ring, k.a)[0], flag_canon(ring, bk)[0])

    def test_canon_pivots_give_b_factor(self):
        # a = b * canon(a) with b upper triangular whose diagonal is the pivots
        ring = make_ring_level("padic", 3, 1, 2)
        rng = np.random.default_rng(1)
        for _ in range(25):
            k = random_in_K(ring, 2, rng)
            rep, piv = flag_canon(ring, k.a)
            b = ring.matmul(k.a, mat_inv(ring, rep))
            assert b[1, 0] == 0
            assert [int(b[0, 0]), int(b[1, 1])] == piv

    def test_canon_n3(self):
        ring = make_ring_level("padic", 2, 1, 2)
        rng = np.random.default_rng(2)
        for _ in range(30):
            k = random_in_K(ring, 3, rng)
            rep, piv = flag_canon(ring, k.a)
            b = ring.matmul(k.a, mat_inv(ring, rep))
            assert b[1, 0] == b[2, 0] == b[2, 1] == 0
            assert all(ring.is_unit(int(b[i, i])) for i in range(3))


class TestModel:
    def test_model_dim_spherical(self, chars4):
        triv = trivial_of(chars4)
        model = build_model([triv, triv])
        assert model.dim == 6 and model.c_declared == 0

    def test_model_dim_q3(self):
        R9 = make_ring_level("padic", 3, 1, 2)
        chs = characters(R9)
        quad = next(c for c in chs if c.c == 1)
        model = build_model([quad, trivial_of(chs)])
        assert model.dim == 12 and model.c_declared == 1

    def test_central_character(self, chars4):
        triv = trivial_of(chars4)
        ram = next(c for c in chars4 if c.c == 2)
        model = build_model([ram, triv])
        for a in model.ring.units():
            za = MatK(model.ring, np.diag([int(a)] * 2).astype(np.int64))
            perm, scale = model.action_of(za)
            assert np.array_equal(perm, np.arange(model.dim))
            assert np.abs(scale - model.chi_pi(int(a))).max() < 1e-12

    def test_action_homomorphism(self, chars4):
        model = build_model([trivial_of(chars4), trivial_of(chars4)])
        rng = np.random.default_rng(0)
        for _ in range(20):
            g1 = random_in_K(model.ring, 2, rng)
            g2 = random_in_K(model.ring, 2, rng)
            p1, s1 = model.action_of(g1)
            p2, s2 = model.action_of(g2)
            p12, s12 = model.action_of(g1 @ g2)
            assert np.array_equal(p12, p2[p1])
            assert np.abs(s12 - s1 * s2[p1]).max() < 1e-12

    def test_inner_product_invariance(self, chars4):
        ram = next(c for c in chars4 if c.c == 2)
        model = build_model([ram, ram])
        rng = np.random.default_rng(1)
        v = rng.normal(size=model.dim) + 1j * rng.normal(size=model.dim)
        w = rng.normal(size=model.dim) + 1j * rng.normal(size=model.dim)
        for _ in range(10):
            k = random_in_K(model.ring, 2, rng)
            act = model.action_of(k)
            assert abs(model.ip(model.apply(act, v), model.apply(act, w)) - model.ip(v, w)) < 1e-12

    def test_level_too_small_reported(self, chars4):
        ram = next(c for c in chars4 if c.c == 2)
        model = build_model([ram, ram])  # declared conductor 4 > M = 2
        with pytest.raises(ConductorNotVisible):
            model.newform()

    def test_character_level_mismatch_rejected(self, chars4):
        R9 = make_ring_level("padic", 3, 1, 2)
        with pytest.raises(ValueError):
            build_model([trivial_of(chars4), trivial_of(characters(R9))])


class TestNewform:
    def test_spherical_newform_is_k_fixed(self, chars4):
        triv = trivial_of(chars4)
        model = build_model([triv, triv])
        v0, c = model.newform()
        assert c == 0
        rng = np.random.default_rng(2)
        for _ in range(10):
            k = random_in_K(model.ring, 2, rng)
            assert np.abs(model.apply(model.action_of(k), v0) - v0).max() < 1e-9

    def test_conductor_one_q3(self):
        R9 = make_ring_level("padic", 3, 1, 2)
        chs = characters(R9)
        quad = next(c for c in chs if c.c == 1)
        model = build_model([quad, trivial_of(chs)])
        v0, c = model.newform()
        assert c == 1
        assert model.invariant_dims(1) == 1

    def test_conductor_four_at_level_four(self):
        R16 = make_ring_level("padic", 2, 1, 4)
        chs = characters(R16)
        c2 = next(c for c in chs if c.c == 2)
        model = build_model([c2, c2])
        v0, c = model.newform()
        assert c == 4

    def test_binomial_dims_n2(self, chars4):
        triv = trivial_of(chars4)
        model = build_model([triv, triv])
        for ell in range(3):
            assert model.invariant_dims(ell) == comb(ell + 1, 1)
        assert model.graded_dims() == [1, 1, 1]

    def test_binomial_dims_n3(self):
        R = make_ring_level("padic", 2, 1, 2)
        triv = trivial_of(characters(R))
        model = build_model([triv, triv, triv])
        assert [model.invariant_dims(ell) for ell in range(3)] == [1, 3, 6]
        assert model.graded_dims() == [1, 2, 3]

    def test_dims_insensitive_to_order(self):
        R9 = make_ring_level("padic", 3, 1, 2)
        chs = characters(R9)
        quad = next(c for c in chs if c.c == 1)
        triv = trivial_of(chs)
        m1 = build_model([quad, triv])
        m2 = build_model([triv, quad])
        assert [m1.invariant_dims(l) for l in range(3)] == [
            m2.invariant_dims(l) for l in range(3)
        ]
        assert m1.newform()[1] == m2.newform()[1]

    def test_equivariance(self, chars4):
        ram = next(c for c in chars4 if c.c == 2)
        model = build_model([ram, trivial_of(chars4)])
        v0, c = model.newform()
        assert c == 2
        assert model.equivariance_residual(v0) < 1e-9


class TestMatrixCoefficient:
    def test_identity_element(self, chars4):
        model = build_model([trivial_of(chars4), trivial_of(chars4)])
        v0, _ = model.newform()
        one = MatK.identity(model.ring, 2)
        assert abs(model.matrix_coefficient(one, v0) - 1) < 1e-12

    def test_spherical_constant_one(self, chars4):
        model = build_model([trivial_of(chars4), trivial_of(chars4)])
        v0, _ = model.newform()
        for k in enumerate_group(model.ring, 2):
            assert abs(model.matrix_coefficient(k, v0) - 1) < 1e-9

    def test_shell_value(self, chars4):
        # q=2, n=2, c(pi)=1 via q=3 instead: c=1 with c(chi_pi)=... use q=3 quad
        R9 = make_ring_level("padic", 3, 1, 2)
        chs = characters(R9)
        quad = next(c for c in chs if c.c == 1)
        model = build_model([quad, quad])  # chi_pi = quad^2 = trivial, c(pi) = 2
        v0, c = model.newform()
        assert c == 2 and model.chi_pi.c == 0
        alpha = -1.0 / (3 - 1)  # -1/(q^{n-1}-1) for m = 2
        k = u_ell(model.ring, 2, 1)
        assert abs(model.matrix_coefficient(k, v0) - alpha) < 1e-9

    def test_three_case_form_exhaustive(self, chars4):
        ram = next(c for c in chars4 if c.c == 2)
        model = build_model([ram, trivial_of(chars4)])
        v0, _ = model.newform()
        ks = list(enumerate_group(model.ring, 2))
        assert model.coefficient_residual(v0, ks) < 1e-9

    def test_support_outside_vanishes(self):
        R9 = make_ring_level("padic", 3, 1, 2)
        chs = characters(R9)
        quad = next(c for c in chs if c.c == 1)
        model = build_model([quad, quad])
        v0, c = model.newform()
        k = u_ell(model.ring, 2, 0)  # outside K0(p^{c-1})
        assert abs(model.matrix_coefficient(k, v0)) < 1e-9


class TestVectorFromHarmonic:
    def test_zonal_reproduces_newform(self, chars4):
        for pair in [
            (trivial_of(chars4), trivial_of(chars4)),
            (next(c for c in chars4 if c.c == 2), trivial_of(chars4)),
        ]:
            model = build_model(list(pair))
            space = SphereSpace(model.ring, 2)
            v0, c = model.newform()
            z = zonal_fn(space, model.chi_pi, c)
            v = vector_from_harmonic(model, space, z, v0, method="enumerate")
            assert np.abs(v - v0).max() < 1e-9
            v2 = vector_from_harmonic(model, space, z, v0, method="coset")
            assert np.abs(v2 - v0).max() < 1e-9

    def test_matrixcoeff_identity_random_P(self, chars4):
        ram = next(c for c in chars4 if c.c == 2)
        model = build_model([ram, trivial_of(chars4)])
        space = SphereSpace(model.ring, 2)
        v0, c = model.newform()
        H = harmonic_subspace(space, model.chi_pi, c)
        rng = np.random.default_rng(3)
        coefs = rng.normal(size=H.dim) + 1j * rng.normal(size=H.dim)
        P = coefs @ H.basis
        v = vector_from_harmonic(model, space, P, v0, method="enumerate")
        PP = space.ip(P, P)
        vv = model.ip(v, v)
        dim_tau = H.dim
        for _ in range(25):
            k = random_in_K(model.ring, 2, rng)
            x = mat_inv(model.ring, k.a)[1]
            lhs = PP * model.ip(model.apply(model.action_of(k), v0), v)
            rhs = vv * np.conj(P[space.index.idx(x)]) / dim_tau
            assert abs(lhs - rhs) < 1e-9

    def test_isotypic_membership(self):
        # the reconstructed vector lies in the span of newform translates,
        # which is the isotypic copy of the newform type (multiplicity one);
        # at q=3 with two ramified slots that span is a proper subspace
        R9 = make_ring_level("padic", 3, 1, 2)
        chs = characters(R9)
        quad = next(c for c in chs if c.c == 1)
        model = build_model([quad, quad])
        space = SphereSpace(model.ring, 2)
        v0, c = model.newform()
        assert c == 2 and model.chi_pi.is_trivial
        H = harmonic_subspace(space, model.chi_pi, c)
        rng = np.random.default_rng(4)
        translates = [
            model.apply(model.action_of(random_in_K(model.ring, 2, rng)), v0)
            for _ in range(4 * H.dim)
        ]
        u, s, _ = np.linalg.svd(np.array(translates).T, full_matrices=False)
        span_dim = int((s > 1e-8).sum())
        assert span_dim == H.dim < model.dim  # proper isotypic subspace
        w = u[:, :span_dim]
        P = (rng.normal(size=H.dim) + 1j * rng.normal(size=H.dim)) @ H.basis
        v = vector_from_harmonic(model, space, P, v0, method="coset")
        proj = w @ (w.conj().T @ v)
        assert np.abs(v - proj).max() < 1e-9

    def test_mismatched_character_vanishes(self, chars4):
        triv = trivial_of(chars4)
        ram = next(c for c in chars4 if c.c == 2)
        model = build_model([triv, triv])
        space = SphereSpace(model.ring, 2)
        v0, _ = model.newform()
        z = zonal_fn(space, ram, 2)
        v = vector_from_harmonic(model, space, z, v0, method="enumerate")
        assert np.linalg.norm(v) < 1e-9


class TestLaurentBranch:
    def test_ramified_model_over_f4(self):
        R = make_ring_level("laurent", 2, 2, 2)
        chs = characters(R)
        triv = trivial_of(chs)
        c1 = next(c for c in chs if c.c == 1)
        model = build_model([c1, triv], rng=np.random.default_rng(0))
        assert model.dim == 20
        v0, c = model.newform()
        assert c == 1
        assert [model.invariant_dims(l) for l in range(3)] == [0, 1, 2]
        rng = np.random.default_rng(1)
        ks = [random_in_K(R, 2, rng) for _ in range(100)]
        assert model.coefficient_residual(v0, ks) < 1e-9
        assert model.equivariance_residual(v0) < 1e-9


class TestCharacterTuples:
    def test_counts_q3(self):
        ring = make_ring_level("padic", 3, 1, 4)
        assert len(character_tuples(ring, 2, 3)) == 16  # (0,3): 12 and (1,2): 4

    def test_unordered_no_duplicates(self):
        ring = make_ring_level("padic", 3, 1, 3)
        tuples = character_tuples(ring, 2, 2)
        seen = set()
        for t in tuples:
            key = tuple(sorted((c.c,) + c.exps for c in t))
            assert key not in seen
            seen.add(key)
