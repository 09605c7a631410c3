"""Check registry consistency and whole-sweep behavior."""

import pytest

from detmin.report import VERDICTS
from detmin.sweep import CHECKS, PIPELINES, RunConfig, run_sweep


def test_registry_names_are_pipeline_prefixed():
    for name, info in CHECKS.items():
        assert info.name == name
        assert info.pipeline in PIPELINES
        assert name.startswith(info.pipeline + ".")
        assert info.tolerance > 0
        assert info.anchor and " " not in info.anchor


def test_evidence_checks_never_gate():
    evidence = {name for name, info in CHECKS.items() if not info.gate}
    assert evidence == {
        "levelset.conjecture-printed",
        "levelset.conjecture-swapped",
        "helicoidal.counter-control",
        "pseudo.ambient-signature-crossed",
        "pseudo.induced-signature-duplicated",
    }


def test_run_config_pipeline_selection():
    assert RunConfig(pipeline="all").pipelines() == PIPELINES
    assert RunConfig(pipeline="levelset").pipelines() == ("levelset",)
    with pytest.raises(ValueError):
        RunConfig(pipeline="bogus").pipelines()


def test_all_pipelines_tiny_grid():
    config = RunConfig(p_values=(2, 3), q_values=(2, 3), samples=1, seed=2)
    report = run_sweep(config)
    assert report.exit_status() == 0
    seen_pipelines = {r.check.split(".", 1)[0] for r in report.records}
    assert seen_pipelines == set(PIPELINES)
    for rec in report.records:
        assert rec.check in CHECKS
        assert rec.verdict in VERDICTS
    # the conjectured identity is reported but cannot gate
    printed = [r for r in report.records
               if r.check == "levelset.conjecture-printed"]
    assert printed and all(r.verdict == "EVIDENCE" for r in printed)
    assert any(r.residual > 1e-3 for r in printed)
    swapped = [r for r in report.records
               if r.check == "levelset.conjecture-swapped"]
    assert swapped and all(r.residual < 1e-10 for r in swapped)


def test_rank_filter_restricts_triples():
    config = RunConfig(pipeline="parametric", p_values=(3,), q_values=(3,),
                       r_values=(1,), samples=1, seed=0)
    report = run_sweep(config)
    points = {r.point for r in report.records}
    assert all("r=1" in pt for pt in points)
    assert report.exit_status() == 0


def test_meta_holds_configuration():
    config = RunConfig(pipeline="levelset", q_values=(2,), samples=1, seed=3)
    report = run_sweep(config)
    assert report.meta["pipeline"] == "levelset"
    assert report.meta["seed"] == 3
    assert report.meta["samples"] == 1
