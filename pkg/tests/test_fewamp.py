import json
import unittest

from parameterized import parameterized

from eplib.acceptance import parse_acceptance_set
from eplib.errors import InputError, OutOfRange, TooManyPaths
from eplib.fewamp import MAX_CONSTANT_BITS, MAX_RUN_PATHS, FewRun, amplified_count, build_constants, check_membership, guessed_tuples, simulate_amplifier, verify_growth


def table(name: str, p: int):
    return build_constants(parse_acceptance_set(name), p)


class TestBuildConstants(unittest.TestCase):
    @parameterized.expand([
        ("pow2", 6, [1, 0, 1, 0, 1, 0]),
        ("odd", 3, [1, 1, 1]),
        ("pow4", 3, [1, 2, 7]),
        ("doublyexp", 3, [2, 0, 10]),
    ])
    def test_constants(self, name, p, expected):
        self.assertEqual(table(name, p).c, expected)

    def test_first_split_is_empty(self):
        t = table("pow4", 5)
        self.assertEqual(t.b[0], 0)
        self.assertEqual(t.c[0], t.a[0])
        self.assertEqual([a - b for (a, b) in zip(t.a, t.b)], t.c)

    def test_constants_are_non_negative(self):
        for name in ("pow2", "pow4", "pow:3", "odd", "nonmult:3"):
            self.assertTrue(all(c >= 0 for c in table(name, 40).c))

    def test_rejects_empty_bound(self):
        with self.assertRaises(OutOfRange):
            table("pow2", 0)

    def test_doubly_exponential_constants_are_capped(self):
        with self.assertRaises(OutOfRange):
            table("doublyexp", 40)

    def test_wide_constants_below_the_cap(self):
        t = table("pow4", 60)
        self.assertLessEqual(max(a.bit_length() for a in t.a), MAX_CONSTANT_BITS)

    def test_serialization(self):
        data = json.loads(table("pow2", 3).model_dump_json())
        self.assertEqual(data, {"p": 3, "c": [1, 0, 1], "b": [0, 2, 3], "a": [1, 2, 4], "set_name": "pow2"})


class TestAmplifiedCount(unittest.TestCase):
    @parameterized.expand([
        ("pow2", 6, 5, 16),
        ("pow4", 3, 3, 16),
        ("odd", 3, 2, 3),
        ("pow2", 6, 0, 0),
    ])
    def test_count(self, name, p, m, expected):
        self.assertEqual(amplified_count(table(name, p), m), expected)

    def test_powers_of_two_closed_form(self):
        t = table("pow2", 60)
        for m in range(1, 61):
            self.assertEqual(amplified_count(t, m), 2 ** (m - 1))

    def test_out_of_range(self):
        with self.assertRaises(OutOfRange):
            amplified_count(table("pow2", 4), 5)


class TestSimulate(unittest.TestCase):
    @parameterized.expand([
        ("ARA", 2),
        ("AARAARA", 16),
        ("RRRR", 0),
        ("A", 1),
    ])
    def test_patterns(self, pattern, expected):
        self.assertEqual(simulate_amplifier(table("pow2", 6), FewRun.from_pattern(pattern)), expected)

    @parameterized.expand([("pow2", 12), ("pow4", 8), ("odd", 8)])
    def test_agrees_with_closed_form(self, name, paths):
        t = table(name, paths)
        for mask in range(1 << paths):
            run = FewRun.from_mask(mask, paths)
            count = simulate_amplifier(t, run)
            self.assertEqual(count, amplified_count(t, run.accepting))
            self.assertEqual(count == 0, mask == 0)
            if mask:
                self.assertIn(count, t.acceptance)

    @parameterized.expand([
        ("ARRA", 2, 10, 3),
        ("RRRR", 4, 15, 0),
        ("AAAA", 2, 10, 10),
        ("RARRRA", 3, 41, 3),
    ])
    def test_guessed_tuples_cover_every_path(self, pattern, p, guessed, accepted):
        tuples = list(guessed_tuples(FewRun.from_pattern(pattern), p))
        self.assertEqual(len(tuples), guessed)
        self.assertEqual(sum(ok for (_, ok) in tuples), accepted)
        self.assertTrue(all(0 < subset.bit_count() <= p for (subset, _) in tuples))

    def test_rejecting_paths_spoil_a_tuple(self):
        t = table("pow2", 3)
        self.assertEqual(simulate_amplifier(t, FewRun.from_pattern("RARRRRRRRRRRRRRRRRRA")), amplified_count(t, 2))

    def test_each_accepting_tuple_adds_its_constant(self):
        forged = table("pow2", 2).model_copy(update={"c": [1, 1]})
        self.assertEqual(simulate_amplifier(forged, FewRun.from_pattern("AARR")), 3)

    def test_pattern(self):
        run = FewRun.from_pattern(" ara ")
        self.assertEqual(run.pattern, "ARA")
        self.assertEqual(run.accepting, 2)
        self.assertEqual(len(run), 3)

    def test_bad_pattern(self):
        with self.assertRaises(InputError):
            FewRun.from_pattern("AXR")

    def test_too_many_paths(self):
        with self.assertRaises(TooManyPaths):
            simulate_amplifier(table("pow2", 3), FewRun.from_pattern("R" * (MAX_RUN_PATHS + 1)))

    def test_more_accepting_paths_than_the_table_covers(self):
        with self.assertRaises(OutOfRange):
            simulate_amplifier(table("pow2", 2), FewRun.from_pattern("AAA"))


class TestGrowth(unittest.TestCase):
    @parameterized.expand([("pow2",), ("pow4",), ("pow:3",), ("odd",), ("nonmult:3",), ("nonmult:5",)])
    def test_greedy_constants_grow_slowly(self, name):
        t = table(name, 60)
        self.assertTrue(verify_growth(t, t.acceptance.non_gappy_constant).passed)

    def test_detects_runaway_constant(self):
        t = table("pow2", 6)
        forged = t.model_copy(update={"c": [1, 0, 1, 0, 2**100, 0]})
        verdict = verify_growth(forged, 2)
        self.assertFalse(verdict.passed)
        self.assertEqual(verdict.violations, [5])


class TestMembership(unittest.TestCase):
    @parameterized.expand([
        ("pow2", 60),
        ("pow4", 60),
        ("pow:3", 60),
        ("odd", 60),
        ("nonmult:7", 60),
        ("doublyexp", 6),
    ])
    def test_every_count_lands_in_the_set(self, name, p):
        verdict = check_membership(table(name, p))
        self.assertTrue(verdict.passed, verdict.violations)
