import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from orthoentropy.cli import main
from orthoentropy.constructions import swap_unitary
from orthoentropy.io import (
    InputError,
    Problem,
    Report,
    decode_matrix,
    dump_problem,
    encode_matrix,
    load_problem,
    parse_problem,
    report_schema,
)
from orthoentropy.linalg_core import haar_random_unitary
from orthoentropy.tensor_algebra import TensorContext


def write_problem(tmp_path, name, n, blocks, u, weights=None):
    data = {"n": n, "L": {"blocks": blocks}, "u": encode_matrix(u)}
    if weights is not None:
        data["L"]["weights"] = weights
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def swap_file(tmp_path):
    return write_problem(tmp_path, "swap.json", 2, [2], swap_unitary(2))


@pytest.fixture
def identity_file(tmp_path):
    return write_problem(tmp_path, "id.json", 2, [2], np.eye(4))


class TestCheck:
    def test_swap_exit_0(self, swap_file, capsys):
        code, out, _ = run(["check", swap_file], capsys)
        assert code == 0 and "verdict: orthogonal" in out

    def test_identity_exit_1(self, identity_file, capsys):
        code, out, _ = run(["check", identity_file], capsys)
        assert code == 1 and "not orthogonal" in out

    def test_inconsistent_exit_2(self, tmp_path, capsys):
        from scipy.linalg import expm

        rng = np.random.default_rng(2)
        h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        h = h - h.conj().T
        u = swap_unitary(2) @ expm(1e-2 * h / np.linalg.norm(h))
        path = write_problem(tmp_path, "near.json", 2, [2], u)
        code, out, _ = run(["check", path, "--tol", "1e-7"], capsys)
        assert code == 2 and "INCONSISTENT" in out

    def test_json_validates_against_schema(self, swap_file, capsys):
        code, out, _ = run(["check", swap_file, "--format", "json"], capsys)
        doc = json.loads(out)
        jsonschema.validate(doc, report_schema())
        assert doc["orthogonal"] and doc["consistent"] and "timing_ms" in doc

    def test_byte_stable(self, swap_file, capsys):
        argv = ["check", swap_file, "--format", "json", "--no-timing"]
        outs = {run(argv, capsys)[1] for _ in range(3)}
        assert len(outs) == 1

    def test_report_round_trip(self, identity_file, capsys):
        _, out, _ = run(["check", identity_file, "--format", "json", "--no-timing"], capsys)
        doc = json.loads(out)
        assert Report.from_json(doc).to_json() == doc

    def test_stdin(self, swap_file, capsys, monkeypatch):
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO(open(swap_file).read()))
        assert run(["check", "-"], capsys)[0] == 0


class TestInputErrors:
    @pytest.mark.parametrize(
        "text",
        [
            "{not json",
            '{"n": 2}',
            '{"n": 2, "L": {"blocks": [2]}, "u": [[1, 0], [0, 1]]}',
            '{"n": 0, "L": {"blocks": [2]}, "u": [[[1, 0]]]}',
        ],
    )
    def test_malformed(self, tmp_path, capsys, text):
        p = tmp_path / "bad.json"
        p.write_text(text)
        code, _, err = run(["check", str(p)], capsys)
        assert code == 3 and "error" in err

    def test_missing_file(self, capsys):
        assert run(["check", "/nonexistent.json"], capsys)[0] == 3

    def test_non_unitary(self, tmp_path, capsys):
        path = write_problem(tmp_path, "nu.json", 2, [2], 1.1 * np.eye(4))
        code, _, err = run(["check", path], capsys)
        assert code == 3 and "non-unitary" in err

    def test_bad_weights(self, tmp_path, capsys):
        path = write_problem(tmp_path, "w.json", 2, [2], np.eye(4), weights=[0.3])
        code, _, err = run(["check", path], capsys)
        assert code == 3 and "bad weights" in err

    def test_shape_mismatch(self, tmp_path, capsys):
        path = write_problem(tmp_path, "s.json", 2, [3], np.eye(4))
        code, _, err = run(["check", path], capsys)
        assert code == 3 and "shape mismatch" in err

    def test_bad_flags(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["check"])
        assert exc.value.code == 3
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 3


class TestIO:
    def test_matrix_encoding_round_trip(self, rng):
        u = haar_random_unitary(4, rng)
        np.testing.assert_array_equal(decode_matrix(encode_matrix(u)), u)

    def test_bare_unitary_means_L_is_C(self):
        p = parse_problem({"u": encode_matrix(np.eye(3))})
        assert p.ctx.n == 3 and p.ctx.L.block_sizes == (1,)

    def test_near_unitary_snapped(self):
        u = swap_unitary(2) * (1 + 1e-10)
        p = parse_problem({"n": 2, "L": {"blocks": [2]}, "u": encode_matrix(u)})
        assert 0 < p.load_defect < 1e-8
        assert np.linalg.norm(p.u.conj().T @ p.u - np.eye(4)) < 1e-14

    def test_off_block_rejected(self):
        u = np.eye(4)
        with pytest.raises(InputError):
            parse_problem({"n": 2, "L": {"blocks": [1, 1], "weights": [0.5, 0.5]}, "u": encode_matrix(swap_unitary(2))})
        parse_problem({"n": 2, "L": {"blocks": [1, 1], "weights": [0.5, 0.5]}, "u": encode_matrix(u)})

    def test_problem_round_trip(self, tmp_path, rng):
        ctx = TensorContext.full(2, 2)
        prob = Problem(ctx, haar_random_unitary(4, rng), {"k": "v"})
        path = tmp_path / "p.json"
        path.write_text(dump_problem(prob))
        back = load_problem(str(path))
        np.testing.assert_array_equal(back.u, prob.u)
        assert back.digest == prob.digest and back.metadata == {"k": "v"}


class TestOtherCommands:
    def test_entropy(self, swap_file, capsys):
        code, out, _ = run(["entropy", swap_file, "--format", "json"], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["maximal"]
        assert doc["entropy"] == pytest.approx(2 * np.log(2), abs=1e-12)
        assert doc["spectrum"] == pytest.approx([0.25] * 4, abs=1e-12)

    @pytest.mark.parametrize("name", ["swap", "pauli", "identity"])
    def test_demo_then_check(self, name, tmp_path, capsys):
        out = str(tmp_path / "demo.json")
        assert run(["demo", name, "--out", out], capsys)[0] == 0
        code, _, _ = run(["check", out], capsys)
        assert code == (1 if name == "identity" else 0)

    def test_demo_fourier_then_masa(self, tmp_path, capsys):
        out = str(tmp_path / "f.json")
        _, _, err = run(["demo", "fourier", "--n", "5", "--out", out], capsys)
        assert "orthogonal" in err
        code, out_text, _ = run(["masa", out, "--format", "json"], capsys)
        assert code == 0 and json.loads(out_text)["entropy"] == pytest.approx(np.log(5), abs=1e-12)

    def test_masa_identity(self, tmp_path, capsys):
        path = tmp_path / "id.json"
        path.write_text(json.dumps({"u": encode_matrix(np.eye(3))}))
        assert run(["masa", str(path)], capsys)[0] == 1

    def test_masa_needs_abelian_shape(self, swap_file, capsys):
        assert run(["masa", swap_file], capsys)[0] == 3

    def test_unknown_demo(self, capsys):
        assert run(["demo", "nope"], capsys)[0] == 3


class TestSearchCommand:
    def test_search_writes_trajectory(self, tmp_path, capsys):
        traj = tmp_path / "t.csv"
        out = tmp_path / "best.json"
        code, _, err = run(
            ["search", "--n", "2", "--blocks", "2", "--restarts", "2", "--seed", "1", "--trajectory", str(traj), "--out", str(out)],
            capsys,
        )
        assert code == 0 and "verdict: orthogonal" in err
        lines = traj.read_text().splitlines()
        assert lines[0] == "iteration,entropy" and len(lines) > 2
        assert run(["check", str(out)], capsys)[0] == 0

    def test_obstructed_exit_1(self, capsys):
        code, _, err = run(["search", "--n", "3", "--blocks", "2", "--restarts", "2", "--max-iters", "300"], capsys)
        assert code == 1 and "impossible" in err

    def test_weights_required_for_multi_block(self, capsys):
        assert run(["search", "--n", "2", "--blocks", "1,1,1,1"], capsys)[0] == 3

    def test_pipe_into_check(self):
        # the two commands as separate processes joined by a pipe
        cmd = [sys.executable, "-m", "orthoentropy"]
        s = subprocess.run(
            cmd + ["search", "--n", "2", "--blocks", "1,1,1,1", "--weights", "0.25,0.25,0.25,0.25", "--restarts", "2", "--seed", "1"],
            capture_output=True,
            text=True,
        )
        assert s.returncode == 0
        c = subprocess.run(cmd + ["check", "-"], input=s.stdout, capture_output=True, text=True)
        assert c.returncode == 0, c.stdout + c.stderr
