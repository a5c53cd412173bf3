import unittest

import hypothesis.strategies as st
from hypothesis import given, settings

from prime_tiles.errors import EnumerationBoundExceeded, InvalidModulus, PreconditionError
from prime_tiles.zn_group import (
    GroupContext,
    PrimePowerSplit,
    SubgroupDesc,
    all_subgroups,
    canonical_translate,
    class_of,
    cyclic_span,
    derived_set,
    difference_set,
    elem_order,
    equivalence_classes,
    lift_p_power,
    orthogonal_group,
    prime_power_split,
    project,
    project_points,
    subgroup_from_members,
    subgroup_span,
)


class TestGroupContext(unittest.TestCase):
    def test_rejects_bad_parameters(self):
        with self.assertRaises(PreconditionError):
            GroupContext(0, 1)
        with self.assertRaises(PreconditionError):
            GroupContext(3, 0)

    def test_element_reduces_coordinates(self):
        ctx = GroupContext(3, 2)
        self.assertEqual(ctx.element((5, -1)), (2, 2))
        with self.assertRaises(PreconditionError):
            ctx.element((1,))

    def test_arithmetic(self):
        ctx = GroupContext(6, 2)
        self.assertEqual(ctx.add((5, 1), (2, 5)), (1, 0))
        self.assertEqual(ctx.sub((0, 1), (1, 3)), (5, 4))
        self.assertEqual(ctx.neg((1, 0)), (5, 0))
        self.assertEqual(ctx.scale(4, (2, 5)), (2, 2))
        self.assertEqual(ctx.pairing((1, 2), (-3, 7)), 5)

    def test_elements_are_lexicographic(self):
        ctx = GroupContext(2, 2)
        self.assertEqual(list(ctx.elements()), [(0, 0), (0, 1), (1, 0), (1, 1)])

    def test_bound_is_enforced(self):
        ctx = GroupContext(10, 8, bound=1000)
        with self.assertRaises(EnumerationBoundExceeded) as cm:
            ctx.require_enumerable("test_scan")
        self.assertEqual(cm.exception.size, 10 ** 8)
        self.assertEqual(cm.exception.bound, 1000)

    def test_large_scan_is_logged(self):
        ctx = GroupContext(400, 2)
        with self.assertLogs(level="INFO") as logs:
            ctx.require_enumerable("test_scan")
        self.assertIn("160000", logs.output[0])


class TestSubgroups(unittest.TestCase):
    def test_element_order(self):
        self.assertEqual(elem_order(GroupContext(12, 1), (4,)), 3)
        self.assertEqual(elem_order(GroupContext(6, 2), (2, 3)), 6)
        self.assertEqual(elem_order(GroupContext(6, 2), (0, 0)), 1)

    def test_cyclic_span(self):
        H = cyclic_span(GroupContext(6, 1), (2,))
        self.assertEqual(H.members, ((0,), (2,), (4,)))
        self.assertEqual(H.generators, ((2,),))

    def test_subgroup_span(self):
        H = subgroup_span(GroupContext(4, 2), [(1, 0), (0, 2)])
        self.assertEqual(len(H), 8)
        self.assertIn((3, 2), H)
        self.assertNotIn((0, 1), H)

    def test_subgroup_from_members_rejects_non_subgroup(self):
        with self.assertRaises(PreconditionError):
            subgroup_from_members(GroupContext(6, 1), [(0,), (1,)])

    def test_subgroup_from_members_finds_generators(self):
        H = subgroup_from_members(GroupContext(6, 1), [(0,), (3,)])
        self.assertEqual(H.generators, ((3,),))

    def test_orthogonal_group(self):
        ctx = GroupContext(3, 2)
        perp = orthogonal_group(ctx, cyclic_span(ctx, (1, 1)))
        self.assertEqual(perp.members, ((0, 0), (1, 2), (2, 1)))

    def test_orthogonal_of_trivial_subgroup_is_everything(self):
        ctx = GroupContext(3, 2)
        perp = orthogonal_group(ctx, SubgroupDesc((), ((0, 0),)))
        self.assertEqual(len(perp), 9)

    def test_all_subgroups(self):
        self.assertEqual(len(all_subgroups(GroupContext(6, 1))), 4)
        self.assertEqual(len(all_subgroups(GroupContext(8, 1))), 4)
        self.assertEqual(len(all_subgroups(GroupContext(2, 2))), 5)

    def test_orthogonal_group_is_an_involution(self):
        for ctx in (GroupContext(6, 2), GroupContext(4, 2)):
            for H in all_subgroups(ctx):
                perp = orthogonal_group(ctx, H)
                self.assertEqual(orthogonal_group(ctx, perp).members, H.members)
                self.assertEqual(len(H) * len(perp), ctx.group_order)


class TestEquivalenceClasses(unittest.TestCase):
    def test_classes_of_z6(self):
        classes = equivalence_classes(GroupContext(6, 1))
        self.assertEqual([E.members for E in classes], [
            ((0,),),
            ((3,),),
            ((2,), (4,)),
            ((1,), (5,)),
        ])
        self.assertEqual([E.order for E in classes], [1, 2, 3, 6])

    def test_classes_partition_the_group(self):
        ctx = GroupContext(6, 2)
        members = [x for E in equivalence_classes(ctx) for x in E.members]
        self.assertEqual(sorted(members), list(ctx.elements()))

    def test_class_count_of_z3_squared(self):
        self.assertEqual(len(equivalence_classes(GroupContext(3, 2))), 5)

    def test_class_of(self):
        E = class_of(GroupContext(12, 1), (10,))
        self.assertEqual(E.canonical, (2,))
        self.assertEqual(E.order, 6)
        self.assertEqual(E.members, ((2,), (10,)))

    def test_derived_set(self):
        ctx = GroupContext(6, 1)
        E = class_of(ctx, (4,))
        self.assertEqual(derived_set(ctx, E, 3), [(0,), (2,), (4,)])
        with self.assertRaises(PreconditionError):
            derived_set(ctx, E, 2)
        with self.assertRaises(PreconditionError):
            derived_set(ctx, class_of(ctx, (1,)), 3)
        with self.assertRaises(PreconditionError):
            derived_set(ctx, class_of(ctx, (0,)), 2)

    @settings(max_examples=50)
    @given(st.integers(min_value=1, max_value=30), st.integers(min_value=0, max_value=10 ** 6))
    def test_class_members_share_order(self, n, value):
        ctx = GroupContext(n, 1)
        E = class_of(ctx, (value % n,))
        self.assertIn((value % n,), E.members)
        self.assertTrue(all(elem_order(ctx, y) == E.order for y in E.members))

    @settings(max_examples=50)
    @given(st.integers(min_value=1, max_value=20), st.lists(st.integers(), min_size=2, max_size=2))
    def test_order_annihilates(self, n, coords):
        ctx = GroupContext(n, 2)
        x = ctx.element(coords)
        order = elem_order(ctx, x)
        self.assertEqual(n % order, 0)
        self.assertEqual(ctx.scale(order, x), ctx.zero)

    def test_order_is_least_annihilator(self):
        for n, d in ((12, 1), (6, 2), (4, 3), (36, 2), (6, 4)):
            ctx = GroupContext(n, d)
            for x in ctx.elements():
                least = next(t for t in range(1, n + 1) if ctx.scale(t, x) == ctx.zero)
                self.assertEqual(elem_order(ctx, x), least, x)

    def test_class_of_matches_full_scan(self):
        ctx = GroupContext(6, 2)
        for E in equivalence_classes(ctx):
            for x in E.members:
                self.assertEqual(class_of(ctx, x), E)


class TestProjections(unittest.TestCase):
    def test_prime_power_split(self):
        self.assertEqual(prime_power_split(12, 2), PrimePowerSplit(2, 2, 3))
        self.assertEqual(prime_power_split(12, 3).prime_power, 3)
        with self.assertRaises(PreconditionError):
            prime_power_split(12, 5)
        with self.assertRaises(PreconditionError):
            PrimePowerSplit(2, 1, 4)

    def test_project(self):
        self.assertEqual(project((7, -1), 3), (1, 2))
        with self.assertRaises(InvalidModulus):
            project((1,), 4, source_modulus=6)
        with self.assertRaises(InvalidModulus):
            project((1,), 0)

    def test_project_points_reports_collisions(self):
        images, injective = project_points([(0,), (3,)], 3)
        self.assertEqual(images, [(0,), (0,)])
        self.assertFalse(injective)
        _, injective = project_points([(0,), (4,)], 3)
        self.assertTrue(injective)

    def test_lift_preserves_order(self):
        split = prime_power_split(12, 3)
        lifted = lift_p_power(split, (1,))
        self.assertEqual(lifted, (4,))
        self.assertEqual(elem_order(GroupContext(12, 1), lifted), 3)

    def test_lift_preserves_order_exhaustively(self):
        for n in (6, 12):
            for d in (1, 2):
                ctx = GroupContext(n, d)
                for p in (2, 3):
                    split = prime_power_split(n, p)
                    small = GroupContext(split.prime_power, d)
                    for x in small.elements():
                        self.assertEqual(elem_order(ctx, lift_p_power(split, x)), elem_order(small, x))


class TestSetHelpers(unittest.TestCase):
    def test_difference_set(self):
        ctx = GroupContext(6, 1)
        self.assertEqual(difference_set(ctx, [(0,), (1,), (5,)]), [(1,), (2,), (4,), (5,)])

    def test_canonical_translate(self):
        ctx = GroupContext(6, 1)
        self.assertEqual(canonical_translate(ctx, [(1,), (2,), (4,)]), ((0,), (1,), (3,)))
        self.assertEqual(canonical_translate(ctx, [(0,), (3,)]), ((0,), (3,)))


if __name__ == "__main__":
    unittest.main()
