"""Random-instance generators and suite plumbing."""

from shacalc.gmodules import GModule, PermutationModule
from shacalc.prng import SplitMix64
from shacalc.suites import (
    SuiteReport,
    builtin_groups,
    random_equivariant_map,
    random_free_module,
    random_module,
    random_permutation_module,
    run_suite,
)

GROUPS = builtin_groups()


class TestGenerators:
    def test_random_modules_are_valid(self):
        """The generator never produces something the validating
        constructor would reject (construction re-checks everything)."""
        rng = SplitMix64(99)
        for name in ("V4", "S3", "Q8", "A4"):
            g = GROUPS[name]
            for _ in range(10):
                m = random_module(g, rng, max_rank=4)
                assert isinstance(m, GModule)
                assert m.rank <= 4

    def test_random_free_modules_are_free(self):
        rng = SplitMix64(100)
        for _ in range(10):
            m = random_free_module(GROUPS["D4"], rng, max_rank=3)
            assert not m.underlying.relation_rows

    def test_random_permutation_modules(self):
        rng = SplitMix64(101)
        for _ in range(10):
            p = random_permutation_module(GROUPS["S3"], rng, max_rank=8)
            assert isinstance(p, PermutationModule)
            assert 1 <= p.rank <= 8

    def test_random_equivariant_maps_are_equivariant(self):
        rng = SplitMix64(102)
        for name in ("V4", "S3"):
            g = GROUPS[name]
            for _ in range(6):
                p = random_permutation_module(g, rng, max_rank=6)
                l = random_module(g, rng, max_rank=3)
                random_equivariant_map(p, l, rng)  # constructor validates

    def test_seed_reproducibility(self):
        rng1 = SplitMix64(7)
        rng2 = SplitMix64(7)
        m1 = random_module(GROUPS["D4"], rng1)
        m2 = random_module(GROUPS["D4"], rng2)
        assert m1.underlying == m2.underlying
        assert m1.action == m2.action


class TestSuiteRunner:
    def test_all_suites_pass_briefly(self):
        reports = run_suite("all", seed=3, instances=3)
        assert len(reports) == 7
        for r in reports:
            assert isinstance(r, SuiteReport)
            assert r.ok, (r.lemma, r.failures)
            assert len(r.instances) == 3

    def test_reports_ordered_by_index(self):
        (report,) = run_suite("s13", seed=5, instances=6)
        assert [inst["index"] for inst in report.instances] == list(range(6))

    def test_json_shape(self):
        (report,) = run_suite("cover", seed=5, instances=2)
        data = report.to_json()
        assert set(data) == {"lemma", "instances", "failures"}
