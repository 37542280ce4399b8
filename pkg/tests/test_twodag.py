import random
import unittest

from parameterized import parameterized

from eplib.errors import BadOutDegree, Cyclic, DepthTooLarge, LengthMismatch, MultipleRoots, NoRoot, Unreachable, UnknownNode
from eplib.generators import dag_pairs, random_two_dag, random_vector, relabel
from eplib.gf2 import AffineSet, GF2Vector
from eplib.twodag import (
    MAX_FLIP_DEPTH,
    LabelTable,
    apply_flips,
    canonical_equal,
    decide_interchange,
    flip_set,
    interchange_witnesses,
    stabilizer,
    validate_dag,
)


DAG_G = {"r": ["a", "b"], "a": ["c", "d"], "b": None, "c": None, "d": None}
DAG_F_MIRROR = {"s": ["y", "x"], "x": ["p", "q"], "y": None, "p": None, "q": None}
SHORTCUT_DAG = {"r": ["a", "m"], "a": ["m", "l"], "m": ["x", "y"], "l": None, "x": None, "y": None}


def chain(depth: int) -> dict:
    """Left spine of ``depth`` internal nodes, each with a private right leaf."""
    nodes: dict = {}
    for d in range(depth):
        nodes[f"s{d}"] = [f"s{d + 1}", f"l{d}"]
        nodes[f"l{d}"] = None
    nodes[f"s{depth}"] = None
    return nodes


def has_long_edge(g) -> bool:
    """Some successor is reachable more directly than through this parent."""
    return any(
        children is not None and any(g.depth[child] != g.depth[node] + 1 for child in children)
        for (node, children) in g.nodes.items()
    )


class TestValidateDag(unittest.TestCase):
    def test_depths(self):
        g = validate_dag(DAG_G)
        self.assertEqual(g.root, "r")
        self.assertEqual(dict(g.depth), {"r": 0, "a": 1, "b": 1, "c": 2, "d": 2})
        self.assertEqual(g.flip_length, 3)
        self.assertEqual(g.internal_depths(), {0, 1})

    def test_depth_is_shortest_path(self):
        g = validate_dag({"r": ["a", "c"], "a": ["b", "c"], "b": None, "c": None})
        self.assertEqual(g.depth["c"], 1)

    def test_shared_successor(self):
        g = validate_dag({"r": ["c", "c"], "c": None})
        self.assertEqual(len(g), 2)

    def test_integer_ids(self):
        g = validate_dag({0: [1, 2], 1: None, 2: None}, root=0)
        self.assertEqual(g.nodes["0"], ("1", "2"))

    def test_single_leaf(self):
        g = validate_dag({"a": None})
        self.assertEqual(g.max_depth, 0)

    @parameterized.expand([
        ("one_successor", {"r": ["a"], "a": None}, BadOutDegree),
        ("three_successors", {"r": ["a", "a", "a"], "a": None}, BadOutDegree),
        ("undeclared_child", {"r": ["a", "z"], "a": None}, UnknownNode),
        ("cycle", {"r": ["a", "b"], "a": ["b", "r"], "b": None}, Cyclic),
        ("self_loop", {"a": ["a", "a"]}, Cyclic),
        ("two_sources", {"r": ["a", "a"], "q": ["a", "a"], "a": None}, MultipleRoots),
        ("empty", {}, NoRoot),
    ])
    def test_rejects(self, _, nodes, error):
        with self.assertRaises(error):
            validate_dag(nodes)

    def test_unreachable_from_given_root(self):
        with self.assertRaises(Unreachable):
            validate_dag({"r": ["a", "a"], "q": ["a", "a"], "a": None}, root="r")

    def test_unknown_root(self):
        with self.assertRaises(UnknownNode):
            validate_dag(DAG_G, root="zz")


class TestFlips(unittest.TestCase):
    def test_flip_root(self):
        g = apply_flips(validate_dag(DAG_G), GF2Vector("100"))
        self.assertEqual(g.nodes["r"], ("b", "a"))
        self.assertEqual(g.nodes["a"], ("c", "d"))

    def test_empty_flip_set(self):
        g = validate_dag(DAG_G)
        self.assertIs(apply_flips(g, GF2Vector.zeros(3)), g)

    def test_length_mismatch(self):
        with self.assertRaises(LengthMismatch):
            apply_flips(validate_dag(DAG_G), GF2Vector("10"))

    def test_shared_node_flips_at_its_shortest_depth(self):
        g = validate_dag(SHORTCUT_DAG)
        self.assertEqual(g.depth["m"], 1)
        flipped = apply_flips(g, GF2Vector("010"))
        self.assertEqual(flipped.nodes["m"], ("y", "x"))
        self.assertEqual(flipped.nodes["a"], ("l", "m"))
        self.assertEqual(flipped.nodes["r"], ("a", "m"))

    def test_flip_set(self):
        self.assertEqual(flip_set([0, 2], 3), "101")
        with self.assertRaises(LengthMismatch):
            flip_set([3], 3)

    def test_group_action(self):
        rng = random.Random(3)
        table = LabelTable()
        for _ in range(100):
            g = random_two_dag(rng)
            (s, t) = (random_vector(rng, g.flip_length), random_vector(rng, g.flip_length))
            self.assertEqual(table.label(apply_flips(apply_flips(g, s), t)), table.label(apply_flips(g, s ^ t)))
            self.assertEqual(apply_flips(apply_flips(g, s), s).nodes, g.nodes)


class TestCanonicalEqual(unittest.TestCase):
    def test_relabelled_copy(self):
        rng = random.Random(1)
        for _ in range(50):
            g = random_two_dag(rng)
            self.assertTrue(canonical_equal(g, relabel(g, rng)))

    def test_order_of_successors_matters(self):
        a = validate_dag({"r": ["a", "l"], "a": ["b", "c"], "b": None, "c": None, "l": None})
        b = validate_dag({"r": ["l", "a"], "a": ["b", "c"], "b": None, "c": None, "l": None})
        self.assertFalse(canonical_equal(a, b))

    def test_sharing_is_not_an_unfolding(self):
        a = validate_dag({"r": ["a", "b"], "a": None, "b": None})
        b = validate_dag({"r": ["c", "c"], "c": None})
        self.assertFalse(canonical_equal(a, b))

    def test_shared_subdag(self):
        a = validate_dag({"r": ["a", "b"], "a": ["c", "c"], "b": ["c", "d"], "c": None, "d": None})
        b = validate_dag({"r": ["a", "b"], "a": ["c", "c"], "b": ["d", "c"], "c": None, "d": None})
        self.assertFalse(canonical_equal(a, b))
        self.assertTrue(canonical_equal(apply_flips(a, GF2Vector("010")), b))

    def test_table_interns_labels(self):
        table = LabelTable()
        g = validate_dag(DAG_G)
        self.assertEqual(table.label(g), table.label(validate_dag(DAG_F_MIRROR), 1))
        self.assertEqual(len(table), 1)


class TestWitnesses(unittest.TestCase):
    def test_leaf(self):
        g = validate_dag({"a": None})
        witnesses = interchange_witnesses(g, g)
        self.assertEqual(witnesses.cardinality, 2)

    def test_swappable_leaves_and_idle_depth(self):
        g = validate_dag(DAG_G)
        basis = stabilizer(g)
        self.assertEqual(basis.dim, 2)
        self.assertEqual(interchange_witnesses(g, g).cardinality, 4)

    def test_mirror_image(self):
        witnesses = interchange_witnesses(validate_dag(DAG_F_MIRROR), validate_dag(DAG_G))
        self.assertEqual(witnesses.cardinality, 4)
        self.assertTrue(witnesses.contains(GF2Vector("100")))
        self.assertFalse(witnesses.contains(GF2Vector("000")))

    def test_depth_mismatch(self):
        f = validate_dag({"r": ["a", "b"], "a": None, "b": None})
        self.assertIs(interchange_witnesses(f, validate_dag(DAG_G)), AffineSet.EMPTY)

    def test_spine(self):
        # only the bottom pair of leaves and the idle leaf depth can be flipped
        basis = stabilizer(validate_dag(chain(4)))
        self.assertEqual(basis.dim, 2)
        self.assertEqual({v.bin for v in basis.span()}, {"00000", "00010", "00001", "00011"})

    def test_node_reachable_at_two_distances(self):
        g = validate_dag(SHORTCUT_DAG)
        self.assertEqual({v.bin for v in stabilizer(g).span()}, {"000", "001"})
        witnesses = interchange_witnesses(relabel(apply_flips(g, GF2Vector("110")), random.Random(4)), g)
        self.assertEqual(witnesses.cardinality, 2)
        self.assertTrue(witnesses.contains(GF2Vector("110")))
        self.assertTrue(witnesses.contains(GF2Vector("111")))

    def test_depth_too_large(self):
        g = validate_dag(chain(MAX_FLIP_DEPTH + 1))
        with self.assertRaises(DepthTooLarge):
            stabilizer(g)

    def test_report(self):
        report = decide_interchange(validate_dag(DAG_F_MIRROR), validate_dag(DAG_G))
        self.assertTrue(report.equivalent)
        self.assertEqual(report.witness_count, 4)
        self.assertEqual(report.stabilizer_dim, 2)
        self.assertEqual(report.ambient_dim, 3)

    def test_inequivalent_report(self):
        f = validate_dag({"r": ["a", "b"], "a": ["c", "c"], "b": None, "c": None})
        report = decide_interchange(f, validate_dag(DAG_G))
        self.assertFalse(report.equivalent)
        self.assertEqual(report.witness_count, 0)


class TestWitnessLaws(unittest.TestCase):
    def test_power_of_two_law(self):
        for pair in dag_pairs(20250301, 300):
            report = decide_interchange(pair.f, pair.g)
            self.assertTrue(report.is_power_of_two_or_zero)
            if pair.planted is not None:
                self.assertTrue(report.witnesses.contains(pair.planted))

    def test_stabilizer_is_closed_under_xor(self):
        rng = random.Random(9)
        for _ in range(60):
            g = random_two_dag(rng)
            table = LabelTable()
            target = table.label(g)
            fixed = {s for s in range(1 << g.flip_length) if table.label(g, s) == target}
            self.assertIn(0, fixed)
            self.assertEqual({s ^ t for s in fixed for t in fixed}, fixed)
            self.assertEqual(len(fixed), 1 << stabilizer(g).dim)

    def test_generated_dags_have_long_edges(self):
        rng = random.Random(12)
        dags = [random_two_dag(rng) for _ in range(100)]
        self.assertTrue(any(has_long_edge(g) for g in dags))
        self.assertFalse(any(has_long_edge(random_two_dag(rng, skip_rate=0.0)) for _ in range(50)))

    def test_planted_flips_on_dags_with_long_edges(self):
        seen = 0
        for pair in dag_pairs(77, 150):
            if pair.planted is None or not has_long_edge(pair.g):
                continue
            seen += 1
            self.assertTrue(decide_interchange(pair.f, pair.g).witnesses.contains(pair.planted))
        self.assertGreater(seen, 0)
