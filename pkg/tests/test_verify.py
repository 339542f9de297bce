import json
from fractions import Fraction

import pytest

import truncbell.sequences as sequences
import truncbell.verify as verify
from truncbell.verify import (
    ADJUDICATION_IDS,
    NumericConfig,
    SuiteGrid,
    Verdict,
    exit_code_for,
    report_to_json_text,
    run_check,
    run_suite,
    verdicts_to_json_text,
)

CFG = NumericConfig()
FAST_CFG = NumericConfig(mc_samples=20_000)
HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


def _bump_at(fn, bad_n=3):
    """Wrap a family function so its value at n == bad_n is off by one."""

    def wrapper(n, *args, **kwargs):
        out = fn(n, *args, **kwargs)
        return out + 1 if n == bad_n else out

    return wrapper


# ---------------------------------------------------------------- positive paths


def test_exact_checks_pass_on_valid_parameters():
    assert verify.check_T1(HALF, 2, 6, 8).status == "pass"
    assert verify.check_T2(Fraction(-1, 3), 6, 8).status == "pass"
    assert verify.check_P3(HALF, 0, 6).status == "pass"
    assert verify.check_P3(HALF, 3, 6).status == "pass"
    assert verify.check_P5a(HALF, 2, 6).status == "pass"
    assert verify.check_P5b(HALF, 2, 10).status == "pass"
    assert verify.check_T7(HALF, 2, 10).status == "pass"
    assert verify.check_T8(HALF, 2, 6).status == "pass"
    assert verify.check_T12(HALF, 3, 8).status == "pass"
    assert verify.check_T13(HALF, 5).status == "pass"


def test_numeric_checks_pass_on_valid_parameters():
    assert verify.check_T4(THIRD, 1, 6, CFG).status == "pass"
    for which, kp in (("L9", None), ("L9", 2), ("C10", None), ("T11", 2)):
        v = verify.check_trig(THIRD, 6, kp, which, CFG)
        assert v.status == "pass"
        assert v.max_residual < CFG.tol_rel


def test_combined_modified_family_checks_pass():
    v14, v15, v16 = verify.check_T14_T15_T16(HALF, 2, 6, 8, CFG)
    assert (v14.check_id, v15.check_id, v16.check_id) == ("T14", "T15", "T16")
    assert {v14.status, v15.status, v16.status} == {"pass"}
    assert v15.mode == "numeric"
    assert v15.params["x_points"] == ["0", "1", "1/2"]


def test_moment_check_exact_and_monte_carlo():
    v_exact, v_mc = verify.check_S3(HALF, 2, 5, FAST_CFG)
    assert v_exact.mode == "exact" and v_exact.status == "pass"
    assert v_mc.mode == "monte_carlo" and v_mc.status == "pass"
    assert all("se=" in row["note"] for row in v_mc.details)
    assert v_mc.params["seed"] == FAST_CFG.seed


def test_six_route_composite_passes():
    v = verify.check_CSIX(THIRD, 2, 6, CFG)
    assert v.status == "pass"
    routes = {row["k"] for row in v.details if row["n"] >= 0}
    assert routes == {2, 5}  # exact routes record rows only on mismatch
    assert any(row["n"] == -1 for row in v.details)  # route-5 range note


def test_six_route_composite_skips_contour_outside_domain():
    v = verify.check_CSIX(Fraction(2), 1, 4, CFG)
    assert v.status == "pass"
    notes = [row["note"] for row in v.details if row["n"] == -1]
    assert any("route 5 skipped" in note for note in notes)
    assert not any(row["k"] == 5 for row in v.details if row["n"] >= 0)


# ---------------------------------------------------------------- parameter validation


def test_checks_reject_bad_parameters():
    with pytest.raises(ValueError):
        verify.check_T1(HALF, 1, 8, 6)  # order below n_max
    with pytest.raises(ValueError):
        verify.check_P5a(HALF, 0, 4)
    with pytest.raises(ValueError):
        verify.check_T6(HALF, 1, 4, 8, "guess")
    with pytest.raises(ValueError):
        verify.check_T7(HALF, 0, 8)
    with pytest.raises(ValueError):
        verify.check_trig(Fraction(1), 4, None, "C10", CFG)
    with pytest.raises(ValueError):
        verify.check_trig(HALF, 4, None, "T9", CFG)
    with pytest.raises(ValueError):
        verify.check_trig(HALF, 4, 0, "T11", CFG)
    with pytest.raises(ValueError):
        verify.check_CSIX(HALF, 0, 4, CFG)


def test_numeric_config_validation():
    with pytest.raises(ValueError):
        NumericConfig(tol_rel=0.0)
    with pytest.raises(ValueError):
        NumericConfig(quad_nodes=15)
    with pytest.raises(ValueError):
        NumericConfig(mc_samples=1)
    with pytest.raises(ValueError):
        NumericConfig(series_cutoff_k=0)


# ---------------------------------------------------------------- negative controls

EXACT_CONTROLS = [
    ("T1", "trunc_bell_deg", lambda: verify.check_T1(HALF, 2, 6, 8)),
    ("T2", "deg_bernoulli_num", lambda: verify.check_T2(HALF, 6, 8)),
    ("P3", "stirling2_deg", lambda: verify.check_P3(HALF, 2, 6)),
    ("P5a", "stirling2_deg", lambda: verify.check_P5a(HALF, 2, 6)),
    ("P5b", "trunc_bell_deg", lambda: verify.check_P5b(HALF, 2, 10)),
    ("T6k", "deg_bernoulli_num", lambda: verify.check_T6(HALF, 2, 6, 8, "running")),
    ("T7", "trunc_bell_deg", lambda: verify.check_T7(HALF, 2, 10)),
    ("T8", "bell_deg", lambda: verify.check_T8(HALF, 2, 6)),
    ("T12", "trunc_bell_deg", lambda: verify.check_T12(HALF, 1, 6)),
    ("T13", "stirling2_deg_poly", lambda: verify.check_T13(HALF, 5)),
    ("T14", "trunc_mod_bell_deg", lambda: verify.check_T14_T15_T16(HALF, 2, 6, 8, CFG)[0]),
    ("T16", "trunc_mod_bell_deg", lambda: verify.check_T14_T15_T16(HALF, 2, 6, 8, CFG)[2]),
    ("S3", "trunc_bell_deg", lambda: verify.check_S3(HALF, 2, 5, FAST_CFG)[0]),
]

NUMERIC_CONTROLS = [
    ("T4", "trunc_bell_deg", lambda: verify.check_T4(THIRD, 1, 6, CFG)),
    ("L9", "stirling2_deg", lambda: verify.check_trig(THIRD, 6, None, "L9", CFG)),
    ("C10", "bell_deg", lambda: verify.check_trig(THIRD, 6, None, "C10", CFG)),
    ("T11", "trunc_bell_deg", lambda: verify.check_trig(THIRD, 6, 2, "T11", CFG)),
    ("T15", "stirling2_deg", lambda: verify.check_T14_T15_T16(HALF, 2, 6, 8, CFG)[1]),
    ("S3-mc", "trunc_bell_deg", lambda: verify.check_S3(HALF, 2, 5, FAST_CFG)[1]),
    ("C-SIX", "stirling2_deg", lambda: verify.check_CSIX(THIRD, 2, 6, CFG)),
]


@pytest.mark.parametrize("label,attr,runner", EXACT_CONTROLS, ids=[c[0] for c in EXACT_CONTROLS])
def test_exact_checkers_fail_on_perturbed_tables(label, attr, runner, monkeypatch):
    monkeypatch.setattr(sequences, attr, _bump_at(getattr(sequences, attr)))
    verdict = runner()
    assert verdict.status == "fail"
    assert verdict.max_residual >= 1.0  # counts mismatching coefficients
    assert any(row["n"] >= 0 for row in verdict.details)


@pytest.mark.parametrize("label,attr,runner", NUMERIC_CONTROLS, ids=[c[0] for c in NUMERIC_CONTROLS])
def test_numeric_checkers_fail_on_perturbed_tables(label, attr, runner, monkeypatch):
    monkeypatch.setattr(sequences, attr, _bump_at(getattr(sequences, attr)))
    verdict = runner()
    assert verdict.status == "fail"


# ---------------------------------------------------------------- diagnostics


def test_truncated_series_reports_inconclusive_tail():
    tiny = NumericConfig(series_cutoff_k=2, series_cutoff_l=2)
    v = verify.check_T4(HALF, 0, 6, tiny)
    assert v.status == "fail"
    assert any("inconclusive-fail" in row.get("note", "") for row in v.details)


def test_contour_branch_floor_reports_inconclusive():
    lam = Fraction(10**12 - 1, 10**12)
    v = verify.check_trig(lam, 4, None, "C10", CFG)
    assert v.status == "fail"
    assert len(v.details) == 1
    assert "inconclusive-fail" in v.details[0]["note"]
    assert "branch point" in v.details[0]["note"]


def test_incomplete_gamma_guard_accepts_closed_form():
    for p in range(1, 5):
        assert verify._validate_incgamma(p) < 1e-9


def test_incomplete_gamma_guard_rejects_broken_closed_form(monkeypatch):
    monkeypatch.setattr(verify, "_incgamma_closed", lambda p, zv: 0.0)
    with pytest.raises(RuntimeError, match="quadrature guard"):
        verify.check_P5b(HALF, 2, 8)


def test_refinement_does_not_diverge_on_passing_cases():
    # residuals of passing numeric checks sit at the noise floor; doubling
    # the discretization must not blow them up (factor 10 plus an epsilon
    # allowance for float noise around 1e-16)
    eps = 1e-13
    coarse = verify.check_trig(THIRD, 6, None, "C10", NumericConfig(quad_nodes=512))
    fine = verify.check_trig(THIRD, 6, None, "C10", NumericConfig(quad_nodes=1024))
    assert fine.max_residual <= 10.0 * coarse.max_residual + eps

    coarse = verify.check_T4(THIRD, 1, 6, NumericConfig(series_cutoff_k=20, series_cutoff_l=20))
    fine = verify.check_T4(THIRD, 1, 6, NumericConfig(series_cutoff_k=40, series_cutoff_l=40))
    assert fine.max_residual <= 10.0 * coarse.max_residual + eps


# ---------------------------------------------------------------- adjudication


def test_conflicting_variant_is_detected_and_reported():
    fixed = verify.check_T6(HALF, 3, 6, 10, "fixed")
    running = verify.check_T6(HALF, 3, 6, 10, "running")
    assert fixed.check_id == "T6" and fixed.status == "fail"
    assert running.check_id == "T6k" and running.status == "pass"
    record = verify._adjudication_record([fixed, running])
    assert record["selected"] == "T6k"
    assert record["outcomes"] == {"T6": "fail", "T6k": "pass"}


def test_variants_coincide_when_correction_sum_is_degenerate():
    # p <= 1 leaves at most one correction term, where both readings agree
    for p in (0, 1):
        assert verify.check_T6(HALF, p, 6, 8, "fixed").status == "pass"
        assert verify.check_T6(HALF, p, 6, 8, "running").status == "pass"
    record = verify._adjudication_record(
        [verify.check_T6(HALF, 1, 6, 8, v) for v in ("fixed", "running")]
    )
    assert record["selected"] == "both"


def test_adjudication_never_drives_exit_code():
    failing_variant = verify.check_T6(HALF, 3, 6, 10, "fixed")
    passing = verify.check_T1(HALF, 2, 6, 8)
    assert failing_variant.status == "fail"
    assert exit_code_for([failing_variant, passing]) == 0
    broken = Verdict("T1", "exact", {}, "fail", 1.0, [])
    assert exit_code_for([failing_variant, broken]) == 1
    assert ADJUDICATION_IDS == {"T6", "T6k"}


def test_recurrence_middle_term_adjudicates_at_runtime():
    v = verify.check_T12(Fraction(0), 1, 8)
    assert v.status == "pass"
    meta = [r["note"] for r in v.details if "probe" in r.get("note", "")]
    assert meta == [
        "middle-term exponent probe over n >= 2: printed form holds=False, "
        "raised-index form holds=True; counted variant: raised-index"
    ]
    informational = [r for r in v.details if "non-counted" in r.get("note", "")]
    assert informational, "printed-form mismatches should be reported"
    n2 = next(r for r in informational if r["n"] == 2)
    assert (n2["lhs"], n2["rhs"]) == ("7/4", "19/12")
    below = [r for r in v.details if "below stated range" in r.get("note", "")]
    assert {r["n"] for r in below} == {0, 1}


def test_recurrence_corollary_form_checked_at_p_zero():
    v = verify.check_T12(HALF, 0, 8)
    assert v.status == "pass"
    assert any("rewritten corollary form" in r.get("note", "") for r in v.details) is False
    # corollary rows only surface on mismatch; force one to confirm coverage
    vbad = None
    original = sequences.trunc_bell_deg
    try:
        sequences.trunc_bell_deg = _bump_at(original)
        vbad = verify.check_T12(HALF, 0, 6)
    finally:
        sequences.trunc_bell_deg = original
    assert vbad.status == "fail"
    assert any("rewritten corollary form" in r.get("note", "") for r in vbad.details)


def test_modified_family_convolution_variants():
    v14 = verify.check_T14_T15_T16(HALF, 2, 6, 8, CFG)[0]
    assert v14.status == "pass"
    literal = [r for r in v14.details if "printed constant index" in r.get("note", "")]
    assert literal, "the literal index variant should be probed and reported"
    assert all("informational" in r["note"] for r in literal)
    summary = [r for r in v14.details if "mismatches on" in r.get("note", "")]
    assert len(summary) == 1


# ---------------------------------------------------------------- verdict serialization


def test_verdict_json_schema():
    v = verify.check_T4(THIRD, 1, 3, CFG)
    d = v.to_json_dict()
    assert sorted(d) == ["details", "id", "max_residual", "mode", "params", "status"]
    assert d["id"] == "T4"
    assert d["params"]["lambda"] == "1/3"
    assert isinstance(d["max_residual"], float)
    for row in d["details"]:
        assert sorted(row)[:4] == ["k", "lhs", "n", "note"]
        assert isinstance(row["lhs"], str) and isinstance(row["rhs"], str)
        assert "resid=" in row["note"]


def test_monte_carlo_reruns_are_bit_identical():
    a = verdicts_to_json_text(verify.check_S3(HALF, 2, 5, FAST_CFG))
    b = verdicts_to_json_text(verify.check_S3(HALF, 2, 5, FAST_CFG))
    assert a == b


# ---------------------------------------------------------------- dispatch


def test_run_check_dispatch():
    assert [v.check_id for v in run_check("T6", HALF, p=2, n_max=4, order=8)] == ["T6", "T6k"]
    assert [v.check_id for v in run_check("T15", HALF, p=1, n_max=4, order=6)] == ["T15"]
    assert [v.check_id for v in run_check("S3", HALF, p=1, n_max=4, cfg=FAST_CFG)] == ["S3", "S3"]
    assert run_check("L9", THIRD, k=1, n_max=4)[0].params["k"] == 1
    with pytest.raises(ValueError):
        run_check("T1", HALF)  # missing p
    with pytest.raises(ValueError):
        run_check("Z9", HALF, p=1)


# ---------------------------------------------------------------- suite


@pytest.fixture(scope="module")
def small_report():
    grid = SuiteGrid(lambdas=(Fraction(0), Fraction(1), HALF), ps=(0, 2), n_max=5, order=8)
    return run_suite(grid, FAST_CFG), grid


def test_suite_summary_accounting(small_report):
    report, grid = small_report
    s = report.summary
    assert s["total"] == len(report.verdicts)
    assert s["passed"] + s["failed"] == s["total"]
    assert s["required_pass"] is True
    assert report.exit_code() == 0
    failing = {v.check_id for v in report.verdicts if v.status == "fail"}
    assert failing == {"T6"}  # only the adjudicated variant fails
    assert s["counts_by_id"]["T6"]["fail"] > 0
    assert s["counts_by_id"]["T6k"] == {"pass": len(grid.lambdas) * len(grid.ps), "fail": 0}


def test_suite_skips_contour_checks_outside_domain(small_report):
    report, _ = small_report
    skipped = report.summary["skipped_checks"]
    assert {e["id"] for e in skipped} == {"L9", "C10", "T11"}
    assert all(e["lambda"] == "1" for e in skipped)
    assert report.summary["skipped"] == len(skipped)
    contour_lambdas = {
        v.params["lambda"] for v in report.verdicts if v.check_id in ("L9", "C10", "T11")
    }
    assert "1" not in contour_lambdas


def test_suite_has_exactly_one_adjudication_record(small_report):
    report, _ = small_report
    records = report.summary["adjudication"]
    assert len(records) == 1
    assert records[0]["checked"] == ["T6", "T6k"]
    assert records[0]["selected"] == "T6k"


def test_suite_ordering_is_deterministic(small_report):
    report, _ = small_report
    keys = [verify._verdict_sort_key(v) for v in report.verdicts]
    assert keys == sorted(keys)


def test_suite_reruns_are_byte_identical():
    grid = SuiteGrid(lambdas=(Fraction(0),), ps=(0, 1), n_max=4, order=6)
    a = report_to_json_text(run_suite(grid, FAST_CFG))
    b = report_to_json_text(run_suite(grid, FAST_CFG))
    assert a == b
    parsed = json.loads(a)
    assert sorted(parsed) == ["summary", "verdicts"]
