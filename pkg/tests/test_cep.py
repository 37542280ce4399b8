import unittest
from unittest import mock

import fauxfactory
from parameterized import parameterized
from pydantic import ValidationError

from eplib import cep
from eplib.cep import PaddingInstance, is_power_of_two, pad, pad_width, padded_count, padding_sweep


class TestPadding(unittest.TestCase):
    @parameterized.expand([
        (0, 0, 0, 0),
        (3, 4, 5, 3),
        (7, 7, 7, 3),
        (8, 0, 1, 4),
        (1, 0, 9, 4),
    ])
    def test_width(self, f, g, t, expected):
        self.assertEqual(pad_width(PaddingInstance(f=f, g=g, t=t)), expected)

    @parameterized.expand([
        (3, 3, 5, 16),
        (3, 4, 5, 17),
        (0, 0, 0, 2),
        (5, 0, 5, 11),
    ])
    def test_count(self, f, g, t, expected):
        self.assertEqual(padded_count(PaddingInstance(f=f, g=g, t=t)), expected)

    def test_report(self):
        report = pad(PaddingInstance(f=3, g=4, t=5))
        self.assertEqual(report.model_dump(), {"w": 3, "total": 17, "power_of_two": False})
        self.assertTrue(pad(PaddingInstance(f=3, g=3, t=5)).power_of_two)

    def test_equal_counts_pad_to_a_power_of_two(self):
        t = fauxfactory.gen_integer(0, 10_000)
        f = fauxfactory.gen_integer(0, t)
        self.assertTrue(pad(PaddingInstance(f=f, g=f, t=t)).power_of_two)

    @parameterized.expand([
        ("negative_target", -1, 0, 0),
        ("negative_count", 0, -1, 3),
        ("count_above_bound", 0, 4, 3),
    ])
    def test_invalid_instance(self, _, f, g, t):
        with self.assertRaises(ValidationError):
            PaddingInstance(f=f, g=g, t=t)

    @parameterized.expand([(1, True), (64, True), (0, False), (6, False), (-4, False)])
    def test_is_power_of_two(self, n, expected):
        self.assertEqual(is_power_of_two(n), expected)


class TestSweep(unittest.TestCase):
    def test_sweep(self):
        verdict = padding_sweep(256)
        self.assertTrue(verdict.passed)
        self.assertEqual(verdict.counterexamples, [])
        self.assertEqual(verdict.checked, 257 * 257 * 258 // 2)

    def test_zero_limit(self):
        verdict = padding_sweep(0)
        self.assertTrue(verdict.passed)
        self.assertEqual(verdict.checked, 1)

    def test_sweep_pads_every_instance(self):
        with mock.patch.object(cep, "padding_total", wraps=cep.padding_total) as total:
            verdict = padding_sweep(4)
        self.assertEqual(total.call_count, verdict.checked)

    def test_width_bounded_by_target_only_is_caught(self):
        with mock.patch.object(cep, "padding_width", lambda f, t: f.bit_length()):
            verdict = padding_sweep(32)
        self.assertFalse(verdict.passed)
        self.assertEqual(len(verdict.counterexamples), 10)
        self.assertEqual(verdict.counterexamples[0], PaddingInstance(f=0, g=2, t=2))
