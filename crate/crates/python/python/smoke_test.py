"""Exercises the extension module end to end.

Run after `maturin develop` (or with lingshift.so on PYTHONPATH):
    python crates/python/python/smoke_test.py
"""

import json
import math
import pathlib
import tempfile

import lingshift

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "core" / "tests" / "fixtures"

TEXT = (
    "We propose a novel method for $x^2$ estimation \\cite{a}. "
    "The method is robust and the results are comprehensive. "
    "However, the bound is loose when the samples are small."
)


def main():
    res = lingshift.Resources()
    assert res.report()["digest"]

    profile = res.analyze(TEXT)
    assert list(profile) == lingshift.METRIC_NAMES
    assert profile["sentence_count"] == 3
    assert profile["llm_adj_count"] >= 1
    assert 0.0 < profile["mattr50"] <= 1.0

    assert "\\cite" not in lingshift.strip_markup(TEXT)
    assert res.tag_pos(["The", "results", "are", "robust", "."]) == ["DT", "NNS", "VBP", "JJ", "."]
    assert res.count_syllables("estimation") == 4
    assert len(res.sentences(TEXT)) == 3

    assert math.isclose(lingshift.fre(100, 5, 150), 206.835 - 1.015 * 20 - 84.6 * 1.5)
    d, p = lingshift.ks_two_sample([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert d == 0.0 and p == 1.0
    assert lingshift.mattr(["a", "b"] * 30, 50) == 2 / 50

    try:
        lingshift.ndc(0, 0, 0)
    except lingshift.LingshiftError as e:
        kind, _message = e.args
        assert kind
    else:
        raise AssertionError("empty counts must raise")

    with tempfile.TemporaryDirectory() as out:
        cfg = lingshift.PipelineConfig(
            json.dumps(
                {
                    "corpus": str(FIXTURES / "corpus_200.jsonl"),
                    "sidecar": str(FIXTURES / "countries_200.csv"),
                    "output_dir": out,
                    "workers": 1,
                }
            )
        )
        assert cfg.validate()["corpus_records"] == 200
        assert cfg.analyze()["rows"] == 200
        summary = cfg.report()
        assert summary["tests_run"] > 0
        assert (pathlib.Path(out) / "shift_tests.csv").is_file()

    print("smoke test passed")


if __name__ == "__main__":
    main()
