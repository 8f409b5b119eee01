import csv
import io
import json
import math

import pytest

from hom_fingerprint.cli import fmt, main
from hom_fingerprint.codes import map_coherent_to_twophoton_distance
from hom_fingerprint.imperfections import SourceParams, coincidence_fraction


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    text = out.read_text() if out.exists() else ""
    return code, text


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_float_format_round_trips():
    for x in (0.1, 1 / 3, 2.0 ** -1074, 1e300, -0.0):
        assert float(fmt(x)) == x
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(7) == "7"


class TestBounds:
    def test_columns_and_values(self, tmp_path):
        code, text = run(tmp_path, "bounds")
        assert code == 0
        assert text.splitlines()[0] == "delta_coh,Delta_min,r_gv,R_gv,overhead"
        data = rows(text)
        last = data[-1]
        assert float(last["delta_coh"]) == 0.25
        assert float(last["overhead"]) == pytest.approx(5.1, rel=0.02)
        for r in data:
            assert float(r["Delta_min"]) == map_coherent_to_twophoton_distance(
                float(r["delta_coh"]))

    def test_small_delta_overhead_near_one(self, tmp_path):
        _, text = run(tmp_path, "bounds", "--delta-lo", "1e-7", "--delta-hi", "1e-6",
                      "--points", "2")
        assert float(rows(text)[0]["overhead"]) == pytest.approx(1.0, abs=1e-4)

    def test_invalid_grid_is_usage_error(self, tmp_path):
        assert run(tmp_path, "bounds", "--delta-hi", "0.3")[0] == 2
        assert run(tmp_path, "bounds", "--points", "0")[0] == 2

    def test_unknown_flag(self, tmp_path, capsys):
        assert main(["bounds", "--nope"]) == 2
        assert main([]) == 2


class TestConfig:
    def test_precedence(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"points": 3, "delta_hi": 0.2}))
        _, text = run(tmp_path, "bounds", "--config", str(cfg))
        assert len(rows(text)) == 3
        assert float(rows(text)[-1]["delta_coh"]) == 0.2
        _, text = run(tmp_path, "bounds", "--config", str(cfg), "--points", "5")
        assert len(rows(text)) == 5

    def test_bad_configs(self, tmp_path):
        for content in ('{"nope": 1}', "[1, 2]", "{not json", '{"points": 2.5}',
                        '{"points": true}'):
            cfg = tmp_path / "c.json"
            cfg.write_text(content)
            assert run(tmp_path, "bounds", "--config", str(cfg))[0] == 2
        assert run(tmp_path, "bounds", "--config", str(tmp_path / "missing.json"))[0] == 2


class TestInformation:
    def test_crossover_rows(self, tmp_path):
        code, text = run(tmp_path, "information", "--points", "11")
        assert code == 0
        data = rows(text)
        assert list(data[0]) == ["row", "n", "I_class", "I_S", "I_coh", "ratio"]
        cross = [r for r in data if r["row"] == "crossover_S"]
        assert len(cross) == 1
        assert 10**5.5 <= int(cross[0]["n"]) <= 10**6.5
        grid = [r for r in data if r["row"] == "grid"]
        assert 0.8 <= float(grid[-1]["ratio"]) <= 1.25

    def test_domain_error(self, tmp_path, capsys):
        code, _ = run(tmp_path, "information", "--p-err", "0.5")
        assert code == 1
        assert "information" in capsys.readouterr().err


class TestError:
    def test_dataset(self, tmp_path):
        code, text = run(tmp_path, "error", "--points", "12")
        assert code == 0
        data = rows(text)
        assert float(data[0]["x"]) == 0.0
        assert float(data[0]["perr_exact_s"]) == 0.5 == float(data[0]["perr_exact_p"])
        for r in data:
            for tag in ("s", "p"):
                assert float(r[f"perr_exact_{tag}"]) <= float(r[f"perr_asym_{tag}"])
        for r in data[1:]:
            assert float(r["perr_exact_s"]) < float(r["perr_exact_p"])


class TestChernoffSurface:
    def test_grid(self, tmp_path):
        code, text = run(tmp_path, "chernoff-surface", "--dark-points", "4",
                         "--delta-points", "4")
        assert code == 0
        data = rows(text)
        assert len(data) == 16
        ratios = [float(r["ratio"]) for r in data]
        assert min(ratios) > 1.0
        assert ratios.index(max(ratios)) == 0

    def test_ideal_override(self, tmp_path):
        _, text = run(tmp_path, "chernoff-surface", "--w", "1", "--dark-points", "1",
                      "--dark-hi", "0", "--delta-points", "1", "--delta-hi", "0.1")
        assert float(rows(text)[0]["zeta_s"]) == pytest.approx(0.18, abs=1e-10)


class TestSimulate:
    def test_byte_identical_reruns(self, tmp_path):
        args = ["simulate", "--n-runs", "200000", "--seed", "4"]
        _, a = run(tmp_path, *args, name="a.csv")
        _, b = run(tmp_path, *args, "--threads", "3", name="b.csv")
        assert a == b
        ja = (tmp_path / "a.json").read_text()
        assert ja == (tmp_path / "b.json").read_text()
        assert json.loads(ja)["tally"]["n_runs"] == 200000

    def test_identical_codewords_ideal(self, tmp_path):
        code, text = run(tmp_path, "simulate", "--eta-nbar", "0.1", "--dark-ratio", "0",
                         "--w", "1", "--code-a", "0110", "--code-b", "0110",
                         "--n-runs", "100000", "--strict")
        r = rows(text)[0]
        assert code == 0
        assert r["n_coincidence"] == "0"
        assert r["decision"] == "Equal"

    @pytest.mark.slow
    def test_fig5_z_score(self, tmp_path):
        code, text = run(tmp_path, "simulate", "--n-runs", "10000000", "--seed", "1",
                         "--strict")
        r = rows(text)[0]
        assert code == 0
        assert abs(float(r["z_q"])) < 4
        assert float(r["q_model"]) == coincidence_fraction(SourceParams(0.05, 0, 0.01, 0.98),
                                                           0.8)

    def test_strict_alarm(self, tmp_path):
        # A zero alarm threshold trips on any statistical fluctuation.
        code, _ = run(tmp_path, "simulate", "--n-runs", "100000", "--alarm", "0",
                      "--strict")
        assert code == 1
        code, _ = run(tmp_path, "simulate", "--n-runs", "100000", "--alarm", "0")
        assert code == 0

    def test_code_pair_validation(self, tmp_path):
        assert run(tmp_path, "simulate", "--code-a", "0101")[0] == 2
        assert run(tmp_path, "simulate", "--code-a", "01x")[0] == 2
        assert run(tmp_path, "simulate", "--code-a", "01", "--code-b", "011")[0] == 1


def test_stdout_when_no_out(capsys):
    assert main(["bounds", "--points", "2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("delta_coh,")
    assert not math.isnan(float(out.splitlines()[1].split(",")[0]))
