import json

import pytest

from ultrasph.cli import (
    EXIT_CONFIG,
    EXIT_FAIL,
    EXIT_PASS,
    EXIT_SKIP,
    ConfigError,
    emit_report,
    load_config,
    main,
    parse_config_text,
    select_characters,
)
from ultrasph.ring import characters, make_ring_level
from ultrasph.verify import CheckRecord


class TestConfigParsing:
    def test_sections_and_values(self, tmp_path):
        cfg_file = tmp_path / "c.txt"
        cfg_file.write_text(
            "[ring]\nbranch = padic\np = 3\nf = 1\n\n"
            "[run]\nn = 2\nlevel = 2\nsamples = 50\nseed = 9\n"
        )
        cfg = load_config(str(cfg_file))
        assert (cfg.branch, cfg.p, cfg.level, cfg.samples, cfg.seed) == ("padic", 3, 2, 50, 9)

    def test_unknown_key_is_hard_error(self):
        with pytest.raises(ConfigError):
            parse_config_text("[ring]\nprime = 2\n")

    def test_unknown_section_is_hard_error(self):
        with pytest.raises(ConfigError):
            parse_config_text("[rings]\np = 2\n")

    def test_key_outside_section(self):
        with pytest.raises(ConfigError):
            parse_config_text("p = 2\n")

    def test_non_integer_rejected(self):
        with pytest.raises(ConfigError):
            parse_config_text("[run]\nlevel = two\n")

    def test_comments_and_blank_lines(self):
        data = parse_config_text("# comment\n[run]\n\nlevel = 3  # inline\n")
        assert data["run"]["level"] == 3

    def test_poly_list(self):
        data = parse_config_text("[ring]\npoly = 1,1,1\n")
        assert data["ring"]["poly"] == [1, 1, 1]

    def test_invalid_budget(self, tmp_path):
        cfg_file = tmp_path / "c.txt"
        cfg_file.write_text("[run]\nbudget = 0\n")
        with pytest.raises(ConfigError):
            load_config(str(cfg_file))

    def test_level_zero_is_config_error(self, tmp_path):
        cfg_file = tmp_path / "c.txt"
        cfg_file.write_text("[run]\nlevel = 0\n")
        assert main(["decompose", "--config", str(cfg_file)]) == EXIT_CONFIG

    def test_overrides(self, tmp_path):
        cfg_file = tmp_path / "c.txt"
        cfg_file.write_text("[run]\nseed = 1\n")
        cfg = load_config(str(cfg_file), overrides={"seed": 5, "samples": None})
        assert cfg.seed == 5 and cfg.samples == 200


class TestCharacterSelectors:
    def test_by_conductor_and_index(self):
        ring = make_ring_level("padic", 2, 1, 3)
        got = select_characters(ring, "0:0,3:1", 2)
        assert [c.c for c in got] == [0, 3]
        assert got[1] == [c for c in characters(ring) if c.c == 3][1]

    def test_default_index(self):
        ring = make_ring_level("padic", 2, 1, 3)
        got = select_characters(ring, "2,0", 2)
        assert [c.c for c in got] == [2, 0]

    def test_missing_conductor(self):
        ring = make_ring_level("padic", 2, 1, 2)
        with pytest.raises(ConfigError):
            select_characters(ring, "1:0,0:0", 2)

    def test_wrong_count(self):
        ring = make_ring_level("padic", 2, 1, 2)
        with pytest.raises(ConfigError):
            select_characters(ring, "0:0", 2)


class TestMain:
    def test_decompose_pass(self, tmp_path, capsys):
        out = tmp_path / "rep.jsonl"
        code = main(["decompose", "--out", str(out)])
        assert code == EXIT_PASS
        records = [json.loads(line) for line in out.read_text().splitlines()]
        assert records and all(r["status"] == "PASS" for r in records)
        assert all("formula" in r and "check_id" in r for r in records)

    def test_config_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("[ring]\nbranchh = padic\n")
        assert main(["decompose", "--config", str(bad)]) == EXIT_CONFIG

    def test_missing_config_file(self):
        assert main(["decompose", "--config", "/nonexistent/path.txt"]) == EXIT_CONFIG

    def test_arch_verify(self, tmp_path):
        out = tmp_path / "arch.jsonl"
        code = main(["arch-verify", "--out", str(out)])
        assert code == EXIT_PASS

    def test_double_cosets(self, tmp_path):
        out = tmp_path / "dc.jsonl"
        assert main(["double-cosets", "--out", str(out)]) == EXIT_PASS

    def test_principal_series_with_selector(self, tmp_path):
        cfg = tmp_path / "c.txt"
        cfg.write_text(
            "[ring]\nbranch = padic\np = 2\nf = 1\n\n"
            "[run]\nn = 2\nlevel = 2\nsamples = 40\n\n"
            "[pseries]\nchars = 2:0,0:0\n"
        )
        out = tmp_path / "ps.jsonl"
        code = main(["principal-series", "--config", str(cfg), "--out", str(out)])
        assert code == EXIT_PASS
        records = [json.loads(line) for line in out.read_text().splitlines()]
        conductor = [r for r in records if r["check_id"].endswith("/conductor")]
        assert conductor and conductor[0]["observed"] == "2"

    def test_zonal_subcommand(self, tmp_path):
        out = tmp_path / "z.jsonl"
        assert main(["zonal", "--samples", "60", "--out", str(out)]) == EXIT_PASS

    def test_determinism_modulo_walltime(self, tmp_path):
        out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        main(["zonal", "--seed", "3", "--samples", "40", "--out", str(out1)])
        main(["zonal", "--seed", "3", "--samples", "40", "--out", str(out2)])

        def strip(path):
            rows = []
            for line in path.read_text().splitlines():
                d = json.loads(line)
                d.pop("seconds")
                rows.append(json.dumps(d, sort_keys=True))
            return rows

        assert strip(out1) == strip(out2)

    def test_records_sorted_by_check_id(self, tmp_path):
        out = tmp_path / "rep.jsonl"
        main(["decompose", "--out", str(out)])
        ids = [json.loads(line)["check_id"] for line in out.read_text().splitlines()]
        assert ids == sorted(ids)

    def test_skip_without_fail_exit_code(self, tmp_path):
        # a tiny budget forces the exhaustive double-coset check to be
        # reported as skipped, never silently passed
        out = tmp_path / "dc.jsonl"
        code = main(["double-cosets", "--budget", "2", "--out", str(out)])
        assert code == EXIT_SKIP
        records = [json.loads(line) for line in out.read_text().splitlines()]
        assert any(r["status"] == "SKIP" for r in records)
        assert not any(r["status"] == "FAIL" for r in records)


class TestEmitReport:
    def _rec(self, status):
        return CheckRecord("x/check", "law", {}, "1", "2" if status == "FAIL" else "1",
                           None, status, 0.0)

    def test_fail_dominates(self, tmp_path, capsys):
        out = tmp_path / "r.jsonl"
        code = emit_report([self._rec("PASS"), self._rec("FAIL"), self._rec("SKIP")],
                           out_path=str(out))
        assert code == EXIT_FAIL

    def test_skip_without_fail(self, tmp_path):
        out = tmp_path / "r.jsonl"
        assert emit_report([self._rec("PASS"), self._rec("SKIP")], out_path=str(out)) == EXIT_SKIP

    def test_all_pass(self, tmp_path):
        out = tmp_path / "r.jsonl"
        assert emit_report([self._rec("PASS")], out_path=str(out)) == EXIT_PASS
