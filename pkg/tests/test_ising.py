import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ising_teleport.algebra import SIGMA, kron
from ising_teleport.ising import (
    CYCLIC,
    CouplingConfig,
    coupling_pair,
    eigenvalues,
    hamiltonian_matrix,
    reduced_quantities,
    scaled_params,
)

from conftest import random_config

couplings = st.tuples(*[st.floats(-5, 5) for _ in range(3)])
fields = st.floats(-5, 5)
directions = st.sampled_from((1, 2, 3))


class TestCouplingConfig:
    def test_rejects_off_direction_field(self):
        with pytest.raises(ValueError, match="direction"):
            CouplingConfig(J=(1, 1, 1), B1=(1.0, 0, 0), B2=(0, 0, 0), h=3)

    def test_rejects_bad_h(self):
        with pytest.raises(ValueError):
            CouplingConfig(J=(1, 1, 1), B1=(0, 0, 0), B2=(0, 0, 0), h=4)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            CouplingConfig(J=(np.inf, 1, 1), B1=(0, 0, 0), B2=(0, 0, 0), h=1)

    def test_json_round_trip(self):
        cfg = CouplingConfig.with_fields((1, 2, 3), 2, 0.5, -0.25)
        assert CouplingConfig.from_dict(cfg.to_dict()) == cfg


class TestHamiltonian:
    def test_zero_config(self):
        cfg = CouplingConfig(J=(0, 0, 0), B1=(0, 0, 0), B2=(0, 0, 0), h=1)
        assert np.all(hamiltonian_matrix(cfg) == 0)

    def test_pure_zz_coupling(self):
        cfg = CouplingConfig(J=(0, 0, 1), B1=(0, 0, 0), B2=(0, 0, 0), h=3)
        np.testing.assert_array_equal(hamiltonian_matrix(cfg), -np.diag([1.0, -1.0, -1.0, 1.0]).astype(complex))

    def test_reference_symbolic_expansion(self):
        # independent term-by-term assembly for J=(1,2,3), fields 1, 0.5 along z
        cfg = CouplingConfig(J=(1, 2, 3), B1=(0, 0, 1.0), B2=(0, 0, 0.5), h=3)
        want = (
            -1 * kron(SIGMA[1], SIGMA[1])
            - 2 * kron(SIGMA[2], SIGMA[2])
            - 3 * kron(SIGMA[3], SIGMA[3])
            + 1.0 * kron(SIGMA[3], np.eye(2))
            + 0.5 * kron(np.eye(2), SIGMA[3])
        )
        np.testing.assert_array_equal(hamiltonian_matrix(cfg), want)

    @given(couplings, fields, fields, directions)
    @settings(max_examples=100, deadline=None)
    def test_hermitian_traceless(self, J, b1, b2, h):
        mat = hamiltonian_matrix(CouplingConfig.with_fields(J, h, b1, b2))
        assert np.linalg.norm(mat - mat.conj().T) == 0.0
        assert abs(np.trace(mat)) < 1e-12

    def test_field_swap_is_qubit_exchange(self, rng):
        swap = np.eye(4)[[0, 2, 1, 3]]
        for _ in range(20):
            cfg = random_config(rng)
            swapped = CouplingConfig.with_fields(cfg.J, cfg.h, cfg.b2h, cfg.b1h)
            np.testing.assert_allclose(
                hamiltonian_matrix(swapped), swap @ hamiltonian_matrix(cfg) @ swap, atol=1e-14
            )


class TestScaledParams:
    def test_cyclic_convention(self):
        assert CYCLIC == {1: (2, 3), 2: (3, 1), 3: (1, 2)}
        assert coupling_pair((1.0, 2.0, 3.0), 1, +1) == 5.0  # J2 + J3
        assert coupling_pair((1.0, 2.0, 3.0), 1, -1) == -1.0

    def test_zero_field_limit(self):
        # h=3, J=(1,2,.), no field: R+ = |J1-J2| = 1, j+ = -1, b+ = 0
        cfg = CouplingConfig(J=(1, 2, 7), B1=(0, 0, 0), B2=(0, 0, 0), h=3)
        sp = scaled_params(cfg)
        assert sp.R_plus == 1.0
        assert sp.j_plus == -1.0
        assert sp.b_plus == 0.0

    @given(couplings, fields, fields, directions)
    @settings(max_examples=200, deadline=None)
    def test_unit_circle_identity(self, J, b1, b2, h):
        sp = scaled_params(CouplingConfig.with_fields(J, h, b1, b2))
        for sign in (-1, +1):
            if sp.R(sign) > 0:
                assert sp.b(sign) ** 2 + sp.j(sign) ** 2 == pytest.approx(1.0, abs=1e-12)
            else:
                assert sp.b(sign) is None and sp.j(sign) is None

    def test_degenerate_flagged(self):
        cfg = CouplingConfig(J=(1, 1, 0), B1=(0, 0, 0), B2=(0, 0, 0), h=3)
        sp = scaled_params(cfg)
        assert sp.degenerate(+1) and sp.b_plus is None
        assert not sp.degenerate(-1)


class TestEigenvalues:
    def test_zero_config(self):
        cfg = CouplingConfig(J=(0, 0, 0), B1=(0, 0, 0), B2=(0, 0, 0), h=2)
        assert eigenvalues(cfg) == (0.0, 0.0, 0.0, 0.0)

    def test_reference_value(self):
        cfg = CouplingConfig(J=(1, 2, 3), B1=(0, 0, 1.0), B2=(0, 0, 0.5), h=3)
        # E(-,+) = -J3 + sqrt(B+^2 + (J1-J2)^2), confirmed against the
        # dense eigensolver below
        assert eigenvalues(cfg)[1] == pytest.approx(-3.0 + np.sqrt(1.5**2 + 1.0), abs=1e-14)

    def test_multiset_matches_dense_solver(self, rng):
        for _ in range(300):
            cfg = random_config(rng)
            formula = np.sort(eigenvalues(cfg))
            dense = np.sort(np.linalg.eigvalsh(hamiltonian_matrix(cfg)))
            np.testing.assert_allclose(formula, dense, atol=1e-12)

    def test_invariant_under_field_swap(self, rng):
        for _ in range(50):
            cfg = random_config(rng)
            swapped = CouplingConfig.with_fields(cfg.J, cfg.h, cfg.b2h, cfg.b1h)
            np.testing.assert_allclose(eigenvalues(cfg), eigenvalues(swapped), atol=1e-12)


class TestReducedQuantities:
    def test_time_zero(self, rng):
        cfg = random_config(rng)
        rq = reduced_quantities(cfg, 0.0)
        for mu in (-1, +1):
            assert rq.delta_plus[mu] == 0.0
            assert rq.delta_minus[mu] == 0.0
            assert rq.d[mu] == 0.0
            for beta in (-1, +1):
                assert rq.e[(mu, beta)] == 1.0

    def test_delta_plus_is_coupling_times_time(self, rng):
        for _ in range(20):
            cfg = random_config(rng)
            t = float(rng.uniform(-3, 3))
            rq = reduced_quantities(cfg, t)
            assert rq.delta_plus[+1] == cfg.J[cfg.h - 1] * t
            assert rq.delta_plus[-1] == -cfg.J[cfg.h - 1] * t

    @given(couplings, fields, fields, directions, st.floats(-10, 10))
    @settings(max_examples=200, deadline=None)
    def test_block_column_normalized(self, J, b1, b2, h, t):
        rq = reduced_quantities(CouplingConfig.with_fields(J, h, b1, b2), t)
        for alpha in (-1, +1):
            for beta in (-1, +1):
                assert abs(rq.e[(alpha, beta)]) ** 2 + rq.d[alpha] ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_limit_is_identity_block(self):
        cfg = CouplingConfig(J=(1, 1, 5), B1=(0, 0, 0), B2=(0, 0, 0), h=3)
        rq = reduced_quantities(cfg, 2.0)  # R(+1) = 0 kills the alpha=-1 rotation
        assert rq.e[(-1, +1)] == 1.0
        assert rq.d[-1] == 0.0

    def test_rejects_non_finite_time(self, rng):
        with pytest.raises(ValueError):
            reduced_quantities(random_config(rng), float("nan"))
