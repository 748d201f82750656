"""Acceptance gate: one test per release criterion, one printed verdict each.

Criteria are exact (no tolerances beyond instance counts and wall-clock
budgets); every expected value is either reproduced from the worked example
or cross-checked against an independent oracle.
"""

import json
import time

import pytest

from diffalg.cli import run
from diffalg.suites import (run_suite, suite_babbitt, suite_closure_laws,
                            suite_compatibility, suite_core_functoriality,
                            suite_core_oracle, suite_example_gallery,
                            suite_finite_tower_cores, suite_hopf,
                            suite_separability_equivalences)


def _verdict(num, label, ok, detail=""):
    state = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:02d} [{state}] {label}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {num}: {label}: {detail}"


def test_criterion_01_worked_example_reproduction():
    t0 = time.time()
    rep = suite_example_gallery(chars=(5, 7), levels=(1, 2, 3))
    elapsed = time.time() - t0
    ok = rep["passed"] and elapsed < 10.0
    for key, entry in sorted(rep["details"].items()):
        if "core_dim" in entry:
            ok = ok and entry["core_dim"] == 1 and entry["core_status"] == "exact"
    _verdict(1, "product carrier: core is the scalars, etale union >= 2^level, "
             "chars 5 and 7, levels 1-3", ok, f"{elapsed:.2f}s")


def test_criterion_02_separability_equivalences():
    t0 = time.time()
    rep = suite_separability_equivalences(seed=42, count=510)
    elapsed = time.time() - t0
    ok = rep["passed"] and rep["instances"] >= 500 and elapsed < 60.0
    _verdict(2, "image and canonical-map separability criteria agree with "
             "reducedness on 510 random algebras", ok,
             f"{rep['instances']} instances, {elapsed:.2f}s")


def test_criterion_03_closure_laws():
    rep = suite_closure_laws(seed=42, count=200)
    counts = rep["details"]
    ok = rep["passed"] and all(v >= 200 for v in counts.values())
    _verdict(3, "subalgebra, tensor, quotient and transitivity each preserve "
             "strongly-sigma-etale on >= 200 instances", ok, str(counts))


def test_criterion_04_core_functoriality():
    rep = suite_core_functoriality(seed=42, count=100)
    counts = rep["details"]
    ok = rep["passed"] and all(v >= 100 for v in counts.values())
    _verdict(4, "strong core commutes with base change and tensor, is "
             "monoidal and idempotent, both sides computed independently",
             ok, str(counts))


def test_criterion_05_bruteforce_oracle():
    rep = suite_core_oracle(seed=42, count=40, definitional_count=12)
    ok = rep["passed"]
    _verdict(5, "strong core equals the exhaustive periodic-idempotent span "
             "and the definitional subalgebra union on small algebras", ok,
             f"{rep['instances']} instances")


def test_criterion_06_finite_tower_cores():
    rep = suite_finite_tower_cores()
    ok = rep["passed"] and rep["instances"] >= 50
    _verdict(6, "sigma-image chains stabilize to strongly-sigma-etale cores "
             "with explicit radicial exponents on >= 50 towers", ok,
             f"{rep['instances']} towers")


def test_criterion_07_babbitt_verification():
    t0 = time.time()
    rep = suite_babbitt()
    elapsed = time.time() - t0
    ok = rep["passed"] and elapsed < 30.0
    corrupted = rep["details"]["corrupted"]
    ok = ok and corrupted["verdict"] == "refuted" and corrupted["witness"]
    _verdict(7, "shipped chains verify, the corrupted chain is refuted with "
             "a witness, degree sequences never increase", ok,
             f"{elapsed:.2f}s")


def test_criterion_08_compatibility_cross_oracle():
    rep = suite_compatibility()
    ok = rep["passed"]
    _verdict(8, "strong-core idempotent decision matches the embedding "
             "oracle on every sigma-structure pair; radicial extensions "
             "always compatible", ok, f"{rep['instances']} pairs")


def test_criterion_09_hopf_core_containment():
    rep = suite_hopf()
    ok = rep["passed"]
    _verdict(9, "strong cores are Hopf subalgebras across the whole gallery; "
             "negative fixtures are flagged", ok, f"{rep['instances']} carriers")


def test_criterion_10_byte_identical_reports():
    code1, rep1 = run(["suite", "all", "--seed", "42"])
    code2, rep2 = run(["suite", "all", "--seed", "42"])
    b1 = json.dumps(rep1, sort_keys=True, separators=(",", ":"))
    b2 = json.dumps(rep2, sort_keys=True, separators=(",", ":"))
    ok = code1 == 0 and code2 == 0 and b1 == b2
    _verdict(10, "suite all --seed 42 twice produces byte-identical JSON",
             ok, f"{len(b1)} bytes")
