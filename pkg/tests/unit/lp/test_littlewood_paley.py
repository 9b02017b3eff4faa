import numpy as np
import pytest

from wkglab.lib.errors import RangeError, DomainError
from wkglab.models.check import PASS, FAIL
from wkglab.services.littlewood_paley import (bump, broken_bump, dyadic_cutoff,
                                              time_cutoff, phi_j_k,
                                              resolvable_window, spatial_window,
                                              project_P_k, project_Q_jk, project_Q_leq,
                                              project_scriptQ_leq,
                                              random_field,
                                              check_partition_identities)
from wkglab.models.grid import make_grid


class TestUnitCutoffs(object):
    def test_bump_plateau_and_support(self):
        assert bump(0.0) == 1.0
        assert bump(1.0) == 1.0
        assert bump(2.0) == 0.0
        assert bump(3.5) == 0.0
        assert bump(1.5) == pytest.approx(0.5)

    def test_bump_is_even(self):
        z = np.linspace(0, 3, 31)
        assert np.array_equal(bump(z), bump(-z))

    def test_dyadic_pieces_sum_to_one(self):
        z = np.array([0.01, 0.3, 1.0, 3.0, 17.0, 100.0])
        total = sum(dyadic_cutoff(z, k) for k in range(-10, 11))
        assert np.allclose(total, 1.0, rtol=0, atol=1e-14)

    def test_time_cutoffs_sum_to_one(self):
        t = np.array([0.0, 0.5, 5.0, 60.0])
        total = sum(time_cutoff(t, m) for m in range(0, 12))
        assert np.allclose(total, 1.0, rtol=0, atol=1e-14)

    def test_spatial_pieces_sum_to_one(self):
        z = np.linspace(0, 9, 50)
        for k in (-2, 0, 3):
            total = sum(phi_j_k(z, j, k, j_max=4) for j in range(0, 6))
            assert np.allclose(total, 1.0, rtol=0, atol=1e-14)

    def test_spatial_piece_below_range_is_zero(self):
        assert not np.any(phi_j_k(np.linspace(0, 4, 9), 0, -1))


class TestUnitProjections(object):
    def test_resolvable_windows(self, grid):
        assert resolvable_window(grid) == (0, 2)
        assert resolvable_window(make_grid(32, 16 * np.pi)) == (-3, 1)

    def test_spatial_window(self, grid):
        assert spatial_window(grid) == 2

    def test_shell_outside_window(self, grid):
        f = random_field(grid, 0)
        with pytest.raises(RangeError):
            project_P_k(f, 5)
        assert project_P_k(f, 5, strict=False).sup_norm() == 0.0

    def test_projection_support(self, grid):
        f = random_field(grid, 1)
        p = project_P_k(f, 1)
        r = grid.xi_norm
        outside = (r <= 1.0) | (r >= 4.0)
        assert not np.any(p.values[outside])

    def test_domain_of_spatial_pieces(self, grid):
        f = random_field(grid, 2)
        with pytest.raises(DomainError):
            project_Q_jk(f, 0, -1)
        with pytest.raises(DomainError):
            project_Q_jk(f, -1, 1)

    def test_q_pieces_sum_to_shell(self, grid):
        f = random_field(grid, 3)
        total = project_Q_leq(f, spatial_window(grid), 1)
        pk = project_P_k(f, 1)
        assert (total - pk).l2_norm() < 1e-12 * pk.l2_norm()

    def test_scriptq_at_top_piece_is_shell(self, grid):
        f = random_field(grid, 4)
        pk = project_P_k(f, 1)
        q = project_scriptQ_leq(f, spatial_window(grid), 1)
        assert (q - pk).l2_norm() < 1e-12 * pk.l2_norm()


class TestUnitPartitionCheck(object):
    def test_passes(self, grid):
        result = check_partition_identities(grid, seed=4)
        assert result.status == PASS
        assert result.measured['sum_P_k'] <= 1e-12

    def test_broken_bump_fails(self, grid):
        with broken_bump():
            result = check_partition_identities(grid, seed=4)
        assert result.status == FAIL
        assert result.measured['sum_P_k'] > 0.05

    def test_bump_restored_after_break(self, grid):
        with broken_bump():
            pass
        assert bump(0.5) == 1.0
