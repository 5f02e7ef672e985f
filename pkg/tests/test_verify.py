import pytest

from dunkl import ConfigurationError, build_standard, rank_one
from dunkl.verify import SUITES, Options, rank_one_companion, run_suite


def _failures(reports):
    return [(r.title, c.name) for r in reports for c in r.checks if not c.passed]


@pytest.mark.parametrize("ctx_args", [("R1", 1, "1"), ("B", 2, ["1", "1/2"]), ("I2", 5, "3/2")])
def test_all_suites_pass(ctx_args):
    ctx = build_standard(*ctx_args)
    reports = run_suite("all", ctx, Options(max_degree=5, sample_pairs=200))
    assert len(reports) > 20
    assert _failures(reports) == []


def test_ray_probe_is_the_only_failure_at_half():
    reports = run_suite("all", rank_one("1/2"), Options(max_degree=5, sample_pairs=200))
    assert _failures(reports) == [("ray limit", "k=0.5: t^k e^(-itxy) E_k(itx,y) -> v_e/sqrt(w_k(x)w_k(y))")]


def test_unknown_suite():
    with pytest.raises(ConfigurationError):
        run_suite("nonsense", rank_one("1"))


def test_seeded_runs_are_reproducible():
    ctx = build_standard("B", 2, ["1/3", "1/2"])
    a = [r.to_dict() for r in run_suite("operators", ctx, Options(seed=7))]
    b = [r.to_dict() for r in run_suite("operators", ctx, Options(seed=7))]
    assert a == b


def test_companion():
    one = rank_one_companion(build_standard("I2", 5, "1/2"))
    assert one.dim == 1 and one.exact and str(one.k_values[0]) == "1/2"


def test_suite_names():
    assert set(SUITES) == {"operators", "intertwiner", "kernel", "macdonald", "hermite", "transform", "heat",
                           "asymptotics"}
