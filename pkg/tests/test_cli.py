import pytest

from sparsefourier.cli import main


def run(argv):
    return main(argv)


class TestExitCodes:
    def test_params_success(self, capsys):
        assert run(["params", "--M", "2", "--n", "512", "--tau", "0.125"]) == 0
        out = capsys.readouterr().out
        assert "1.126126e-02" in out
        assert "support cap = 0" in out

    def test_params_vacuous_regime_is_invalid_input(self, capsys):
        assert run(["params", "--M", "8", "--n", "64", "--tau", "0.1"]) == 2
        assert "vacuous" in capsys.readouterr().err

    def test_params_bad_tau(self):
        assert run(["params", "--M", "1", "--n", "64", "--tau", "1.5"]) == 2

    def test_unparseable_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            run(["recover", "--n", "abc", "--omega", "4", "--spikes", "1", "--seed", "0"])
        assert exc.value.code == 2

    def test_missing_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            run([])
        assert exc.value.code == 2

    def test_semantic_validation_exits_2(self, capsys):
        assert run(
            ["recover", "--n", "8", "--omega", "9", "--spikes", "1", "--seed", "0"]
        ) == 2
        assert "at most" in capsys.readouterr().err


class TestRecover:
    def test_small_run(self, capsys):
        code = run(
            ["recover", "--n", "32", "--omega", "12", "--spikes", "2",
             "--seed", "3", "--trials", "2"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "recovered 2/2" in out


class TestCertify:
    def test_direct(self, capsys):
        code = run(["certify", "--n", "128", "--omega", "24", "--spikes", "3",
                    "--seed", "5"])
        assert code == 0
        assert "certificate valid: True" in capsys.readouterr().out

    def test_neumann(self, capsys):
        code = run(["certify", "--n", "128", "--omega", "24", "--spikes", "3",
                    "--seed", "5", "--method", "neumann", "--terms", "10"])
        assert code == 0
        out = capsys.readouterr().out
        assert "series part max off support" in out


class TestPhaseDiagram:
    def test_writes_all_outputs(self, tmp_path, capsys):
        code = run(
            ["phase-diagram", "--n", "64", "--omega-list", "16",
             "--ratios", "0.125,0.25", "--trials", "4", "--kind", "cert",
             "--out", str(tmp_path), "--seed", "9"]
        )
        assert code == 0
        for name in ("phase_cert.csv", "phase_cert.pgm", "phase_cert.pgm.txt",
                     "phase_cert.png", "phase_cert_omega16.png"):
            assert (tmp_path / name).exists(), name
        header = (tmp_path / "phase_cert.csv").read_text().splitlines()[0]
        assert header == "omega_size,ratio,trials,successes,rate"

    def test_determinism_across_parallelism(self, tmp_path):
        outs = []
        for workers, sub in (("1", "a"), ("2", "b")):
            code = run(
                ["phase-diagram", "--n", "64", "--omega-list", "16",
                 "--ratios", "0.25", "--trials", "4", "--kind", "cert",
                 "--out", str(tmp_path / sub), "--seed", "11",
                 "--parallelism", workers]
            )
            assert code == 0
            outs.append((tmp_path / sub / "phase_cert.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_omega_bigger_than_n_rejected(self):
        assert run(
            ["phase-diagram", "--n", "16", "--omega-list", "32",
             "--trials", "2", "--out", "/tmp/nope"]
        ) == 2


class TestTv2d:
    def test_writes_images_and_errors(self, tmp_path, capsys):
        code = run(
            ["tv2d", "--phantom", "random", "--side", "16", "--lines", "8",
             "--seed", "2", "--out", str(tmp_path)]
        )
        assert code == 0
        for name in ("truth.pgm", "min_energy.pgm", "tv_recon.pgm",
                     "truth.png", "min_energy.png", "tv_recon.png",
                     "mask.pgm", "mask.png", "errors.csv"):
            assert (tmp_path / name).exists(), name
        body = (tmp_path / "errors.csv").read_text().splitlines()
        assert body[0] == "reconstruction,rel_l2_error"


class TestCombVerify:
    def test_all_checks_pass(self, capsys):
        assert run(["comb", "verify", "--max-n", "6"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out
