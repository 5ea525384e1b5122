"""Smoke test for the python bindings: build an all-ones two-mediator model,
run the analytic and oracle engines, and sanity-check the decomposition."""

import json
import math
import sys

if len(sys.argv) > 1:
    sys.path.insert(0, sys.argv[1])

import pocmed

ALL_ONES = {
    "schema": "poc-mediate/v1",
    "spec": {
        "mediator_m": {"intercept": 0, "x": [1], "sigma": 1},
        "mediator_n": {"intercept": 0, "x": [1], "m": 1, "sigma": 1},
        "outcome": {"intercept": 0, "x": [1], "m": 1, "n": 1, "sigma": 1},
    },
    "query": {"x": [1], "x0": [0], "y": 0},
    "mc": {"n": 200000, "seed": 7},
}

EXPECTED = {
    "t_pns": 0.449,
    "nd_pns": 0.156,
    "ni_pns": 0.293,
    "pns_xy": 0.059,
    "pns_xny": 0.097,
    "pns_xmny": 0.135,
    "pns_xmy": 0.158,
}


def check(name, got, want, tol):
    assert abs(got - want) <= tol, f"{name}: got {got}, want {want} +/- {tol}"


def main():
    report = json.loads(pocmed.run("analytic", json.dumps(ALL_ONES)))
    assert report["method"] == "analytic"
    comp = report["components"]
    for name, want in EXPECTED.items():
        check(f"analytic {name}", comp[name], want, 2e-3)
    parts = (
        comp["pns_xy"] + comp["pns_xny"] + comp["pns_xmny"] + comp["pns_xmy"]
    )
    check("component sum vs t_pns", parts, comp["t_pns"], 1e-9)
    assert report["assumptions"]["theta_monotone"] is True
    assert set(report["meta"]) >= {"seed", "n", "runtime_ms"}

    oracle = json.loads(pocmed.run("oracle", json.dumps(ALL_ONES)))
    for name in EXPECTED:
        check(f"oracle vs analytic {name}", oracle["components"][name],
              comp[name], 0.01)

    text = pocmed.render("analytic", json.dumps(ALL_ONES), "text")
    assert "t_pns" in text and "%" in text

    try:
        pocmed.run("analytic", json.dumps({"spec": ALL_ONES["spec"]}))
    except RuntimeError as err:
        assert "ConfigError" in str(err), err
    else:
        raise AssertionError("missing schema field should raise")

    print("python smoke: all checks passed")


if __name__ == "__main__":
    main()
