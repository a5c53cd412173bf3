import unittest

import hypothesis.strategies as st
import sympy
from hypothesis import given, settings

from prime_tiles.constructors.integer_line import prime_size_tiles_z
from prime_tiles.constructors.linear import (
    adjugate,
    check_general_position,
    difference_determinant,
    separating_functional,
)
from prime_tiles.constructors.simplex import (
    fourier_matrix_columns,
    general_position_tiling,
    simplex_points,
    simplex_tiling_pair,
)
from prime_tiles.constructors.spectrum import prime_tile_spectrum
from prime_tiles.errors import (
    DimensionError,
    EnumerationBoundExceeded,
    NoAnnihilatedClass,
    NotConstructed,
    NotInGeneralPosition,
    PreconditionError,
)
from prime_tiles.mask_fourier import PointMultiset
from prime_tiles.zn_group import GroupContext


def as_set(ctx, points):
    return PointMultiset(ctx, {tuple(x): 1 for x in points})


class TestPrimeTileSpectrum(unittest.TestCase):
    def test_z6(self):
        ctx = GroupContext(6, 1)
        construction = prime_tile_spectrum(as_set(ctx, [(0,), (1,), (5,)]))
        self.assertEqual(construction.chosen_class.canonical, (2,))
        self.assertEqual(construction.derived, ((0,), (2,), (4,)))
        self.assertTrue(construction.certificate.verdict)

    def test_full_group_spectrum(self):
        ctx = GroupContext(3, 1)
        construction = prime_tile_spectrum(as_set(ctx, [(0,), (1,), (2,)]))
        self.assertEqual(construction.chosen_class.canonical, (1,))
        self.assertEqual(construction.derived, ((0,), (1,), (2,)))

    def test_z3_squared(self):
        ctx = GroupContext(3, 2)
        construction = prime_tile_spectrum(as_set(ctx, [(0, 0), (1, 0), (0, 2)]))
        self.assertEqual(construction.chosen_class.canonical, (1, 1))
        self.assertEqual(construction.derived, ((0, 0), (1, 1), (2, 2)))

    def test_preconditions(self):
        with self.assertRaises(PreconditionError):
            prime_tile_spectrum(as_set(GroupContext(8, 1), [(0,), (1,), (2,), (3,)]))
        with self.assertRaises(PreconditionError):
            prime_tile_spectrum(as_set(GroupContext(4, 1), [(0,), (1,), (2,)]))

    def test_non_tile_diagnosis(self):
        with self.assertRaises(NoAnnihilatedClass) as cm:
            prime_tile_spectrum(as_set(GroupContext(12, 1), [(0,), (4,)]))
        self.assertIs(cm.exception.is_tile, False)

    def test_undecided_diagnosis(self):
        with self.assertRaises(NoAnnihilatedClass) as cm:
            prime_tile_spectrum(as_set(GroupContext(12, 1), [(0,), (4,)]), search_bound=5)
        self.assertIsNone(cm.exception.is_tile)
        self.assertIsInstance(cm.exception.__cause__, EnumerationBoundExceeded)


class TestLinearAlgebra(unittest.TestCase):
    def test_adjugate_examples(self):
        self.assertEqual(adjugate([[1, 0], [0, 2]]), ([[2, 0], [0, 1]], 2))
        self.assertEqual(adjugate([[2, 1], [1, 1]]), ([[1, -1], [-1, 2]], 1))
        identity = [[int(i == j) for j in range(3)] for i in range(3)]
        self.assertEqual(adjugate(identity), (identity, 1))

    def test_adjugate_of_singular_matrix(self):
        _, D = adjugate([[1, 2], [2, 4]])
        self.assertEqual(D, 0)

    def test_adjugate_needs_square(self):
        with self.assertRaises(PreconditionError):
            adjugate([[1, 2, 3], [4, 5, 6]])

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=1, max_value=4).flatmap(
        lambda q: st.lists(st.lists(st.integers(-5, 5), min_size=q, max_size=q), min_size=q, max_size=q)))
    def test_adjugate_relation(self, V):
        adj, D = adjugate(V)
        M = sympy.Matrix(V)
        self.assertEqual(sympy.Matrix(adj) * M, D * sympy.eye(len(V)))
        self.assertEqual(M * sympy.Matrix(adj), D * sympy.eye(len(V)))
        self.assertEqual(D, M.det())

    def test_general_position(self):
        self.assertTrue(check_general_position([(0, 0), (1, 0), (0, 2)]))
        self.assertFalse(check_general_position([(0, 0), (1, 1), (2, 2)]))
        with self.assertRaises(DimensionError):
            check_general_position([(0,), (3,), (4,)])

    def test_difference_determinant(self):
        self.assertEqual(difference_determinant([(0, 0), (1, 0), (0, 3)]), 3)
        self.assertIsNone(difference_determinant([(0, 0, 0), (1, 0, 0), (0, 1, 0)]))

    def test_separating_functional(self):
        self.assertEqual(separating_functional([(0, 0), (2, 0), (0, 1)], 3), [2, 2])
        self.assertEqual(separating_functional([(0, 0), (1, 0), (0, 2)], 3), [1, 1])
        self.assertIsNone(separating_functional([(0, 0), (1, 0), (0, 3)], 3))

    def test_separating_functional_by_scan(self):
        # second difference is twice the first mod 3, so every minor vanishes but w = (1, 0) separates
        w = separating_functional([(0, 0), (1, 0), (2, 3)], 3)
        values = {(w[0] * x + w[1] * y) % 3 for x, y in [(0, 0), (1, 0), (2, 3)]}
        self.assertEqual(len(values), 3)


class TestSimplex(unittest.TestCase):
    def test_fourier_columns(self):
        columns = fourier_matrix_columns(5)
        self.assertEqual(columns[0], (1, 1, 1, 1))
        self.assertEqual(columns[1], (1, 2, 3, 4))
        self.assertEqual(columns[2], (1, 4, 4, 1))

    def test_simplex_points(self):
        self.assertEqual(simplex_points(3), [(0, 0), (1, 0), (0, 2)])

    def test_p2(self):
        pair = simplex_tiling_pair(2)
        self.assertEqual(pair.A.support, [(0,), (1,)])
        self.assertEqual(pair.B.members, ((0,),))
        self.assertEqual(pair.S, ((0,), (1,)))

    def test_p3(self):
        pair = simplex_tiling_pair(3)
        self.assertEqual(pair.B.members, ((0, 0), (1, 2), (2, 1)))
        self.assertEqual(pair.S, ((0, 0), (1, 1), (2, 2)))
        self.assertTrue(pair.tiling.verdict and pair.spectral.verdict)

    def test_p5(self):
        pair = simplex_tiling_pair(5)
        self.assertEqual(len(pair.B), 125)
        self.assertEqual(len(pair.S), 5)
        self.assertTrue(pair.tiling.verdict)

    def test_rejects_composite(self):
        with self.assertRaises(PreconditionError):
            simplex_tiling_pair(4)


class TestGeneralPosition(unittest.TestCase):
    def test_direct_construction(self):
        result = general_position_tiling([(0, 0), (2, 0), (0, 1)])
        self.assertFalse(result.fallback_used)
        self.assertEqual(result.functional_w, (2, 2))
        self.assertEqual(result.modulus, 3)
        self.assertEqual(result.complement, ((0, 0), (1, 2), (2, 1)))
        self.assertEqual(result.spectrum, ((0, 0), (1, 1), (2, 2)))
        self.assertTrue(result.image_pair.verdict and result.spectral.verdict)

    def test_normal_form_matches_simplex(self):
        result = general_position_tiling([(0, 0), (1, 0), (0, 2)])
        pair = simplex_tiling_pair(3)
        self.assertEqual(result.complement, pair.B.members)
        self.assertEqual(result.spectrum, pair.S)

    def test_translation_invariance(self):
        points = [(0, 0), (2, 0), (0, 1)]
        shifted = [(x + 5, y - 7) for x, y in points]
        a, b = general_position_tiling(points), general_position_tiling(shifted)
        self.assertEqual(a.functional_w, b.functional_w)
        self.assertEqual(a.complement, b.complement)
        self.assertTrue(b.image_pair.verdict and b.spectral.verdict)

    def test_permutation_invariance(self):
        points = [(0, 0), (2, 0), (0, 1)]
        result = general_position_tiling(points[::-1])
        self.assertFalse(result.fallback_used)
        self.assertTrue(result.image_pair.verdict and result.spectral.verdict)

    def test_fallback(self):
        with self.assertLogs(level="WARNING"):
            result = general_position_tiling([(0,), (2,)])
        self.assertTrue(result.fallback_used)
        self.assertIsNone(result.functional_w)
        self.assertEqual(result.modulus, 4)
        self.assertEqual(result.complement, ((0,), (1,)))
        self.assertEqual(result.spectrum, ((0,), (1,)))
        self.assertTrue(result.image_pair.verdict and result.spectral.verdict)

    def test_fallback_skips_images_without_annihilated_class(self):
        # mod 3 two points collide; in Z_9^2 no x sends the differences to {3, 6}
        with self.assertLogs(level="WARNING"):
            with self.assertRaises(NotConstructed) as cm:
                general_position_tiling([(0, 0), (1, 0), (4, 9)])
        self.assertIn("annihilates no 3-power class", str(cm.exception))

    def test_fallback_search_gives_up_at_node_budget(self):
        with self.assertLogs(level="WARNING"):
            with self.assertRaises(NotConstructed) as cm:
                general_position_tiling([(0,), (2,)], fallback_node_budget=1)
        self.assertIn("gave up after 1 placements", str(cm.exception))

    def test_errors(self):
        with self.assertRaises(DimensionError):
            general_position_tiling([(0,), (3,), (4,)])
        with self.assertRaises(NotInGeneralPosition):
            general_position_tiling([(0, 0), (1, 1), (2, 2)])
        with self.assertRaises(PreconditionError):
            general_position_tiling([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])


class TestIntegerLine(unittest.TestCase):
    def test_non_tile(self):
        self.assertFalse(prime_size_tiles_z([0, 3, 4], 3).tiles)

    def test_complete_residues(self):
        for tile in ([0, 1, 2], [0, 1, 5]):
            decision = prime_size_tiles_z(tile, 3)
            self.assertTrue(decision.tiles)
            self.assertEqual(decision.k, 1)
            self.assertEqual(decision.complement_recipe, "3Z")
            self.assertTrue(decision.window.verdict)

    def test_second_level(self):
        decision = prime_size_tiles_z([0, 3, 6], 3)
        self.assertEqual(decision.k, 2)
        self.assertEqual(decision.complement_recipe, "{0, ..., 2} + 9Z")
        decision = prime_size_tiles_z([0, 2], 2)
        self.assertEqual(decision.complement_recipe, "{0, ..., 1} + 4Z")

    def test_translation_does_not_matter(self):
        self.assertEqual(prime_size_tiles_z([10, 13, 16], 3).k, 2)
        self.assertFalse(prime_size_tiles_z([-4, -1, 0], 3).tiles)

    def test_preconditions(self):
        with self.assertRaises(PreconditionError):
            prime_size_tiles_z([0, 1, 2, 3], 4)
        with self.assertRaises(PreconditionError):
            prime_size_tiles_z([0, 0, 1], 3)


if __name__ == "__main__":
    unittest.main()
