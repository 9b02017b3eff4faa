import math

import numpy as np
import pytest

from wkglab.lib.errors import CostGuardError, ConfigurationError, ShapeError
from wkglab.models.grid import make_grid
from wkglab.models.state import ProfileState
from wkglab.services.bilinear import (BilinearJob, eval_bilinear, eval_bilinear_oracle,
                                      duhamel_sum, rhs_profiles)
from wkglab.services.littlewood_paley import random_field
from wkglab.services.phase import CASES
from wkglab.services.verification import oracle_suite
from tests.conftest import real_field


def _rel(a, b):
    return (a - b).l2_norm() / b.l2_norm()


class TestUnitBilinearJob(object):
    def test_rejects_bad_signs(self, grid):
        F = random_field(grid, 0)
        with pytest.raises(ConfigurationError):
            BilinearJob('wa', 2, 1, F, F)
        with pytest.raises(ConfigurationError):
            BilinearJob('nls', 1, 1, F, F)

    def test_rejects_mixed_grids(self, grid):
        other = make_grid(8, 4 * math.pi)
        with pytest.raises(ShapeError):
            BilinearJob('wa', 1, 1, random_field(grid, 0), random_field(other, 1))


class TestUnitOracle(object):
    @pytest.mark.parametrize('kind,iota1,iota2', CASES)
    def test_fast_matches_brute_force(self, grid, kind, iota1, iota2):
        job = BilinearJob(kind, iota1, iota2, random_field(grid, 1),
                          random_field(grid, 2), t=1.3)
        fast = eval_bilinear(job, dealias=False)
        slow = eval_bilinear_oracle(job)
        assert fast.tag == kind
        assert _rel(fast, slow) < 1e-12

    def test_cost_guard(self):
        grid = make_grid(16, 4 * math.pi)
        job = BilinearJob('wa', 1, 1, random_field(grid, 0), random_field(grid, 1))
        with pytest.raises(CostGuardError):
            eval_bilinear_oracle(job)

    def test_suite_passes(self):
        results = oracle_suite({'GRID_N': 8, 'VERIFY_ORACLE_SEEDS': 1})
        assert [r.status for r in results] == ['PASS', 'PASS']

    def test_suite_skips_large_grids(self):
        results = oracle_suite({'GRID_N': 32})
        assert [r.status for r in results] == ['SKIP']


class TestUnitDuhamelSum(object):
    @pytest.mark.parametrize('kind', ['wa', 'kg'])
    def test_fused_sum_matches_pieces(self, grid, kind):
        F, G = random_field(grid, 3), random_field(grid, 4)
        total = duhamel_sum(kind, F, G, 0.4, dealias=False)
        pieces = None
        for _, i1, i2 in [c for c in CASES if c[0] == kind]:
            Fi = F if i1 > 0 else F.conjugate_reflect()
            Gi = G if i2 > 0 else G.conjugate_reflect()
            part = eval_bilinear(BilinearJob(kind, i1, i2, Fi, Gi, 0.4), dealias=False)
            pieces = part if pieces is None else pieces + part
        assert _rel(total, pieces) < 1e-12

    def test_real_inputs_give_real_forcing(self, grid):
        """The summed forcing is the transform of a real function."""
        F, G = real_field(grid, 5), real_field(grid, 6)
        total = duhamel_sum('wa', F, G, 0.0)
        assert total.symmetry_defect() < 1e-12

    def test_dealiasing_truncates(self, grid):
        F, G = random_field(grid, 7), random_field(grid, 8)
        out = duhamel_sum('kg', F, G, 0.2, dealias=True)
        assert not np.any(out.values[~grid.dealias_mask])

    def test_zero_coupling(self, grid):
        state = ProfileState(random_field(grid, 9), random_field(grid, 10))
        d_wa, d_kg = rhs_profiles(state, coupling=0.0)
        assert d_wa.sup_norm() == 0.0 and d_kg.sup_norm() == 0.0

    def test_coupling_scales_linearly(self, grid):
        state = ProfileState(random_field(grid, 11), random_field(grid, 12), t=0.3)
        one = rhs_profiles(state)
        half = rhs_profiles(state, coupling=0.5)
        assert _rel(half[0] * 2.0, one[0]) < 1e-14
        assert _rel(half[1] * 2.0, one[1]) < 1e-14


class TestUnitAlgebra(object):
    @pytest.mark.parametrize('kind,iota1,iota2', CASES)
    def test_complex_bilinear(self, grid, kind, iota1, iota2):
        F1, F2, G1, G2 = [random_field(grid, seed) for seed in (20, 21, 22, 23)]
        a, b = 0.7 - 1.1j, -0.4 + 2.0j

        def I(F, G):
            return eval_bilinear(BilinearJob(kind, iota1, iota2, F, G, t=0.9))

        left = I(F1 * a + F2 * b, G1)
        assert _rel(left, I(F1, G1) * a + I(F2, G1) * b) < 1e-12
        right = I(F1, G1 * a + G2 * b)
        assert _rel(right, I(F1, G1) * a + I(F1, G2) * b) < 1e-12

    @pytest.mark.parametrize('iota1,iota2', [(1, 1), (1, -1), (-1, 1), (-1, -1)])
    def test_wave_output_is_symmetric_in_its_inputs(self, grid, iota1, iota2):
        F, G = random_field(grid, 24), random_field(grid, 25)
        forward = eval_bilinear(BilinearJob('wa', iota1, iota2, F, G, t=1.7))
        swapped = eval_bilinear(BilinearJob('wa', iota2, iota1, G, F, t=1.7))
        assert _rel(forward, swapped) < 1e-11

    def test_kg_output_is_not_symmetric(self, grid):
        F, G = random_field(grid, 26), random_field(grid, 27)
        forward = eval_bilinear(BilinearJob('kg', 1, -1, F, G, t=1.7))
        swapped = eval_bilinear(BilinearJob('kg', -1, 1, G, F, t=1.7))
        assert _rel(forward, swapped) > 1e-3
