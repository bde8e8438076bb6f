import json

import pytest

from harmbesov import campaigns
from harmbesov.campaigns import CampaignConfig, run_campaign
from harmbesov.numeric import DomainError

SCHEMA_TOP = ["campaign", "checks", "config", "env"]
SCHEMA_CHECK = ["anchor", "band", "measured", "name", "params", "pass"]
SCHEMA_ENV = ["backend", "numpy", "python", "radial_nodes", "seed", "sphere_nodes", "threads", "timestamp",
              "version"]


def test_report_schema_is_stable():
    rep = json.loads(run_campaign(CampaignConfig(), "duality").to_json())
    assert sorted(rep) == SCHEMA_TOP
    assert sorted(rep["env"]) == SCHEMA_ENV
    for c in rep["checks"]:
        assert sorted(c) == SCHEMA_CHECK
        assert c["anchor"]


def test_kernel_campaign_origin_check():
    rep = run_campaign(CampaignConfig(), "kernel")
    origin = [c for c in rep.checks if c.name == "kernel_origin"]
    assert origin and origin[0].passed


def test_domain_errors_become_failed_checks():
    def bad():
        raise DomainError("synthetic failure")

    c = campaigns._guard("x", "plumbing", {}, "n/a", bad)
    assert not c.passed and "synthetic failure" in c.measured["error"]


def test_unknown_campaign():
    with pytest.raises(campaigns.ConfigError):
        run_campaign(CampaignConfig(), "everything")


def test_check_enumeration():
    # every suite function contributes named checks; "all" adds the determinism rerun
    names = ["coefficient_asymptotics_n2", "coefficient_asymptotics_n3", "kernel_origin", "kernel_symmetry",
             "kernel_closed_form_n2", "reproducing_n2", "reproducing_n3", "dst_kernel_s0_t1", "dst_kernel_s-2_t3",
             "dst_kernel_s1.5_t-1", "dst_inverse", "dst_additivity", "kernel_estimate_shadow"]
    cfg = CampaignConfig()
    counts = {
        "equivalence": 4, "growth": 3, "duality": 4, "atoms": 7,
        "probes": len(campaigns.KERNEL_POWER_CASES) + len(campaigns.KERNEL_POWER_BOUNDED)
        + len(campaigns.BRACKET_CASES) + len(campaigns.BRACKET_BOUNDED) + 3,
    }
    total = len(names) + sum(counts.values()) + 1
    assert total >= 25
    rep = run_campaign(cfg, "probes")
    assert len(rep.checks) == counts["probes"]


def test_json_cleaning():
    out = campaigns._clean({"a": float("inf"), "b": float("nan"), "c": (1, 2.0), "d": 1 + 2j})
    assert out == {"a": "inf", "b": "nan", "c": [1, 2.0], "d": [1.0, 2.0]}


def test_config_round_trip():
    cfg = CampaignConfig(dim=3, p=0.8, alpha=-1.0, seed=5)
    again = CampaignConfig.from_mapping({k: str(v) for k, v in cfg.to_dict().items() if v is not None})
    assert again.to_dict() == cfg.to_dict()
    assert cfg.t_eff == 1.0 and cfg.s_eff == pytest.approx(cfg.space.rho + 1)
    assert CampaignConfig(alpha=-3.0).t_eff == 5.0
