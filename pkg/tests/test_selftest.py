import unittest
from unittest import mock

from parameterized import parameterized

from eplib import selftest
from eplib.selftest import check_conjunction, check_ep_mod_discipline, check_path_identity


def tripled(table, m):
    return 3 * m


class TestCountingChecks(unittest.TestCase):
    @parameterized.expand([(1, 31), (30, 31), (60, 100)])
    def test_ep_mod_discipline(self, p, limit):
        self.assertTrue(check_ep_mod_discipline(p, limit).passed)

    def test_ep_mod_discipline_reads_amplified_counts(self):
        with mock.patch.object(selftest, "amplified_count", tripled):
            verdict = check_ep_mod_discipline(1, 12)
        self.assertFalse(verdict.passed)
        self.assertEqual(verdict.violations, [3])

    @parameterized.expand([(1,), (12,)])
    def test_conjunction(self, p):
        verdict = check_conjunction(p)
        self.assertTrue(verdict.passed)
        self.assertEqual(verdict.detail, f"{(p + 1) ** 2} cases")

    def test_conjunction_reads_amplified_counts(self):
        with mock.patch.object(selftest, "amplified_count", tripled):
            self.assertFalse(check_conjunction(3).passed)

    def test_path_identity(self):
        self.assertTrue(check_path_identity(6).passed)
