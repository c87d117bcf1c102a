"""
Tests for the job schema, the mode dispatch and the command-line entry point.
"""
import contextlib
import io
import json
import os
import tempfile

from main import main
from tsieve_error_handler import (
    EXIT_INPUT, EXIT_OK, EXIT_SOUNDNESS, HISTORY_LIMIT, ErrorReporter, InputError, SchemaError, SoundnessError,
)
from tsieve_jobs import JobOptions, build_omega, parse_job, parse_job_document, run_job, serialize_job
from tsieve_presets import preset_job

SQRT2_JOB = {
    "field": {"poly": [-2, 0, 1], "root": {"re": ["1", "2"], "im": ["0", "0"]}},
    "elements": [["0", "1"], ["2/4", " -3 "]],
}

CUBE_ROOTS_FIELD = {"poly": [1, 1, 1], "root": {"re": ["-1", "0"], "im": ["0", "1"]}}


def run(document, **options):
    spec = parse_job(json.dumps(document))
    output, ok = run_job(spec, JobOptions(**options))
    return json.loads(output), ok


def expect(exc_type, document, message=None):
    try:
        parse_job(json.dumps(document) if not isinstance(document, str) else document)
    except exc_type as e:
        if message is not None:
            assert message in str(e), str(e)
        return
    assert False, f"{exc_type.__name__} expected for {document!r}"


def test_parse_sqrt2_job():
    spec = parse_job(json.dumps(SQRT2_JOB))
    assert spec.mode == "search"
    assert spec.elements == [["0", "1"], ["1/2", "-3"]]
    omega = build_omega(spec)
    assert omega.field.degree == 2
    assert omega[0] * omega[0] == omega.field.from_rational(2)
    canonical = serialize_job(spec)
    assert serialize_job(parse_job(canonical)) == canonical
    print("✓ sqrt 2 job parsed and canonicalized")


def test_schema_errors():
    expect(SchemaError, "{not json", "invalid JSON at line 1")
    expect(SchemaError, "[1, 2]", "JSON object")
    expect(SchemaError, {**SQRT2_JOB, "colour": "red"}, "colour")
    expect(SchemaError, {"elements": [[1.5]]})
    expect(SchemaError, {"elements": [["1/0"]]})
    expect(SchemaError, {"mode": "factor", "elements": [["1"]]})
    expect(SchemaError, {"field": {"poly": [1.0, 1], "root": {"re": ["0", "0"], "im": ["0", "0"]}}})
    print("✓ schema errors")


def test_input_errors():
    wide = {"poly": [-2, 0, 1], "root": {"re": ["-2", "2"], "im": ["-1", "1"]}}
    expect(InputError, {"field": wide, "elements": [["0", "1"]]}, "root not isolated")
    expect(InputError, {"elements": [["0"]]})
    expect(InputError, {"elements": [["2"], ["2"]]})
    expect(InputError, {**SQRT2_JOB, "elements": [["1"]]})
    print("✓ input errors")


def test_classify_mode():
    out, ok = run({"mode": "classify", "field": CUBE_ROOTS_FIELD, "elements": [["0", "1"], ["-1", "-1"]]})
    assert ok
    assert out["family"] == "infinite"
    assert out["classification"]["class_count"] == 1
    assert [u["order"] for u in out["unity"]] == [3, 3]
    assert out["heights"]["h_omega"] == {"value": "0", "error": "0"}
    print("✓ classify")


def test_bounds_mode():
    out, _ = run({"mode": "bounds", "bounds": {"d": 1, "h_omega": "0", "h_tilde": "0"}})
    assert out["bounds"]["log_degree_max_theorem"]["value"].startswith("148.155")
    out, _ = run({"mode": "bounds", "corollary": {"d": 1, "nu": 1, "h_alpha": "0"}})
    assert out["corollary"]["log_degree_max"]["value"].startswith("148.155")
    out, _ = run({"mode": "bounds", "elements": [["1"], ["-1"]]})
    assert out["family"] == "infinite" and out["bounds"] is None
    try:
        run({"mode": "bounds"})
        assert False, "an empty bounds job must be rejected"
    except InputError:
        pass
    print("✓ bounds")


def test_search_mode():
    out, ok = run(preset_job("rational-triple"))
    assert ok
    assert out["family"] == "finite"
    assert out["hits"] == []
    assert out["completeness"] == {"kind": "CompleteUpToCap", "up_to": 10}
    out, _ = run({"elements": [["1"], ["2"], ["-3"]], "search": {"max_degree": 5}}, max_degree=3)
    assert out["completeness"]["up_to"] == 3
    assert {"m": 3, "n": 1} in [{"m": h["m"], "n": h["n"]} for h in out["hits"]]
    print("✓ search")


def test_diagnose_mode():
    job = {
        "mode": "diagnose",
        "elements": [["1"], ["2"], ["3"]],
        "diagnose": {"m": 2, "n": 1, "m_prime": 3, "n_prime": 1},
    }
    out, _ = run(job)
    assert out["six_terms"]["total"] == ["-2"]
    assert out["six_terms"]["vanishes"] is False
    assert out["pairing_check"] is True
    assert out["ratio_check"]["holds"] is True
    try:
        run({**job, "diagnose": {"m": 2, "n": 1, "indices": [0, 0, 1]}})
        assert False, "repeated indices must be rejected"
    except InputError:
        pass
    print("✓ diagnose")


def test_verify_mode():
    job = {
        "mode": "verify",
        "elements": [["1"], ["2"], ["-3"]],
        "hits": [
            {"m": 3, "n": 1, "A": ["-7"], "B": ["6"], "binomial": False},
            {"m": 3, "n": 1, "A": ["-7"], "B": ["5"]},
        ],
    }
    out, ok = run(job)
    assert not ok and out["all_valid"] is False
    assert [r["valid"] for r in out["verified"]] == [True, False]
    print("✓ verify")


def test_parallel_width_is_deterministic():
    spec = parse_job_document(preset_job("x3-x2+1"))
    sequential, _ = run_job(spec, JobOptions(jobs=1))
    parallel, _ = run_job(spec, JobOptions(jobs=4))
    assert sequential == parallel
    print("✓ identical output with 1 and 4 workers")


def test_main_exit_codes():
    with tempfile.TemporaryDirectory() as tmp:
        out_path = os.path.join(tmp, "out.json")
        assert main(["search", "--preset", "rational-triple", "--jobs", "1", "-o", out_path]) == EXIT_OK
        with open(out_path, encoding="utf-8") as fh:
            assert json.load(fh)["mode"] == "search"

        job_path = os.path.join(tmp, "job.json")
        with open(job_path, "w", encoding="utf-8") as fh:
            json.dump({"elements": [["1"], ["2"], ["-3"]], "hits": [{"m": 3, "n": 1, "A": ["-7"], "B": ["5"]}]}, fh)
        assert main(["verify", "--input", job_path, "-o", out_path]) == EXIT_INPUT

        with open(job_path, "w", encoding="utf-8") as fh:
            fh.write("{\"elements\": [[\"0\"]]}")
        assert main(["classify", "--input", job_path, "-o", out_path]) == EXIT_INPUT
        assert main(["bounds", "--preset", "golden", "--max-degree", "1"]) == EXIT_INPUT
    print("✓ exit codes")


def test_error_statistics():
    reporter = ErrorReporter()
    for i in range(HISTORY_LIMIT + 50):
        reporter.handle_error(InputError(f"bad input {i}"))
    reporter.handle_error(SoundnessError("certificate failed"))
    stats = reporter.get_error_statistics()
    assert len(reporter.error_history) == HISTORY_LIMIT
    assert stats["total_errors"] == HISTORY_LIMIT + 51
    assert stats["by_category"] == {"input": HISTORY_LIMIT + 50, "soundness": 1}
    assert stats["by_severity"] == {"low": HISTORY_LIMIT + 50, "critical": 1}
    assert len(stats["recent_errors"]) == 10
    assert stats["recent_errors"][-1]["exit_code"] == EXIT_SOUNDNESS

    stderr = io.StringIO()
    with contextlib.redirect_stderr(stderr):
        assert main(["bounds", "--preset", "golden", "--max-degree", "1", "--timing"]) == EXIT_INPUT
    text = stderr.getvalue()
    report = json.loads(text[text.index("{\n"):])
    assert report["error"]["category"] == "input"
    assert report["error_statistics"]["by_category"]["input"] >= 1
    print("✓ error statistics")


if __name__ == "__main__":
    print("\n" + "="*60)
    print("CLI TESTS")
    print("="*60 + "\n")
    test_parse_sqrt2_job()
    test_schema_errors()
    test_input_errors()
    test_classify_mode()
    test_bounds_mode()
    test_search_mode()
    test_diagnose_mode()
    test_verify_mode()
    test_parallel_width_is_deterministic()
    test_main_exit_codes()
    test_error_statistics()
    print("\nAll CLI tests passed!")
