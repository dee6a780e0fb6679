import pytest

import polarkit as pk
from polarkit.cli import build_parser, main


class TestParsing:
    def test_snr_triplet(self):
        args = build_parser().parse_args(["--snr", "1.0:2.0:0.5"])
        assert args.snr == (1.0, 2.0, 0.5)

    def test_snr_single_value(self):
        args = build_parser().parse_args(["--snr", "2.5"])
        assert args.snr == (2.5, 2.5, 1.0)

    def test_snr_malformed_exits(self, capsys):
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args(["--snr", "1.0:2.0"])
        assert exc.value.code == 2

    def test_rate_and_info_bits_conflict(self):
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args(["--rate", "0.5", "--info-bits", "32"])
        assert exc.value.code == 2

    def test_unknown_decoder_rejected(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["--decoder", "viterbi"])


class TestMain:
    def test_latency_model_table(self, capsys):
        rc = main(["--n", "1024", "--latency-model"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "1022" in out      # K=2 row
        assert "510" in out       # K=3 row
        rc = main(["--n", "4", "--latency-model"])
        out = capsys.readouterr().out
        assert rc == 0
        assert any(line.split("\t")[-1] == "6" for line in out.splitlines()[2:])

    def test_sweep_to_file(self, tmp_path):
        out = tmp_path / "result.csv"
        rc = main(["--n", "64", "--rate", "0.5", "--decoder", "sc",
                   "--snr", "2.0:3.0:1.0", "--max-frames", "50",
                   "--min-errors", "1000", "--seed", "5", "--out", str(out)])
        assert rc == 0
        res = pk.read_csv(out)
        assert [p.snr_db for p in res.points] == [2.0, 3.0]
        assert all(p.frames == 50 for p in res.points)

    def test_sweep_to_stdout(self, capsys):
        rc = main(["--n", "32", "--decoder", "sc", "--snr", "2.0",
                   "--max-frames", "10", "--min-errors", "1000"])
        assert rc == 0
        out = capsys.readouterr().out
        assert out.startswith("snr_db,")

    def test_fixed_point_flags(self, tmp_path):
        out = tmp_path / "result.csv"
        rc = main(["--n", "64", "--decoder", "scl-multibit", "--list", "2",
                   "--kbits", "1", "--quantize", "fixed", "--q-bits", "6",
                   "--q-frac", "1", "--m-bits", "8", "--sort-width", "7",
                   "--snr", "2.0", "--max-frames", "20", "--min-errors", "1000",
                   "--out", str(out)])
        assert rc == 0

    def test_frozen_file_flag(self, tmp_path):
        frozen = tmp_path / "frozen.txt"
        frozen.write_text("".join(f"{i}\n" for i in range(16)))
        out = tmp_path / "result.csv"
        rc = main(["--n", "32", "--frozen-file", str(frozen), "--decoder", "sc",
                   "--snr", "2.0", "--max-frames", "10", "--min-errors", "1000",
                   "--out", str(out)])
        assert rc == 0

    def test_bad_config_returns_nonzero(self, capsys):
        rc = main(["--n", "63", "--decoder", "sc", "--snr", "2.0",
                   "--max-frames", "5"])
        assert rc == 2
        assert "configuration error" in capsys.readouterr().err

    def test_unwritable_out_returns_nonzero(self, tmp_path, capsys):
        rc = main(["--n", "32", "--decoder", "sc", "--snr", "2.0",
                   "--max-frames", "5", "--min-errors", "1000",
                   "--out", str(tmp_path / "missing" / "x.csv")])
        assert rc == 1
