import json
import subprocess
import sys
from fractions import Fraction as Fr

import pytest

from fuzzyvc import __version__, cli, core, formats, generators, helly, lp, nets, widths
from fuzzyvc.core import FunctionClass, FuzzySetSystem, SetSystem

SINGLETONS = FuzzySetSystem.crisp(3, [[0], [1], [2]])


def write(tmp_path, name, value):
    path = tmp_path / name
    path.write_bytes(formats.dump_instance(value))
    return str(path)


def call(*argv):
    code, data, message = cli.run(list(argv))
    return code, (json.loads(data) if data else None), message


def shell(*argv):
    return subprocess.run([sys.executable, "-m", "fuzzyvc.cli", *argv], capture_output=True)


def test_vc_on_singletons(tmp_path):
    code, report, _ = call("vc", "--in", write(tmp_path, "tri.json", SINGLETONS))
    assert code == 0 and report["result"] == 1
    assert report["command"] == "vc" and report["version"] == __version__
    assert report["input_digest"] is not None


def test_report_goes_to_stdout():
    proc = shell("bounds", "--kind", "sauer", "--d", "2", "--n", "5")
    assert proc.returncode == 0 and proc.stderr == b""
    assert json.loads(proc.stdout)["result"] == {"binomial": 16, "sum_of_powers": 31}
    assert proc.stdout.endswith(b"\n")


def test_unknown_flag_exits_2():
    proc = shell("vc", "--bogus", "1")
    assert proc.returncode == 2 and b"--bogus" in proc.stderr and proc.stdout == b""


def test_unknown_command_exits_2():
    assert shell("frobnicate").returncode == 2


@pytest.mark.parametrize("content", [b"{", b'{"type":"measure","weights":["1/2","1/3"]}'])
def test_malformed_input_exits_2(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_bytes(content)
    code, report, message = call("vc", "--in", str(path))
    assert code == 2 and report is None and "invalid input" in message


def test_missing_input_exits_2(tmp_path):
    assert call("vc")[0] == 2
    assert call("vc", "--in", str(tmp_path / "absent.json"))[0] == 2
    Q = FunctionClass(1, ((0,),))
    assert call("vc", "--in", write(tmp_path, "q.json", Q))[0] == 2


def test_domain_errors_exit_1(tmp_path):
    Q = FunctionClass(3, ((0, 0, 1), (1, 0, 0), (0, 1, 0)))
    code, _, message = call("pq", "--in", write(tmp_path, "q.json", Q), "--r", "0", "--t", "1/3",
                            "--s", "2/3", "--p", "1", "--q", "1")
    assert code == 1 and "dual-vc" in message
    code, _, message = call("approx", "--in", write(tmp_path, "q2.json", FunctionClass(2, ((0, 1),))),
                            "--eps", "1/4", "--size-cap", "1")
    assert code == 1 and "NotFoundError" in message


def test_budget_caps(tmp_path):
    big = generators.random_fuzzy(14, 4, seed=1)
    path = write(tmp_path, "big.json", big)
    assert call("vc", "--in", path, "--budget", "small")[0] == 1
    assert call("vc", "--in", path)[0] == 0


def test_results_equal_module_calls(tmp_path):
    F = generators.random_fuzzy(5, 6, seed=4)
    fpath = write(tmp_path, "f.json", F)
    Q = generators.random_function_matrix(3, 5, 4, seed=2)
    qpath = write(tmp_path, "q.json", Q)
    S = SetSystem(4, ({0, 1}, {1, 2}, {2, 3}))
    spath = write(tmp_path, "s.json", S)
    j = cli.jsonable

    assert call("vc", "--in", fpath)[1]["result"] == core.vc_dimension(F)
    assert call("shatter", "--in", fpath, "--n", "3")[1]["result"] == {"3": core.shatter_function(F, 3)}
    assert call("fat", "--in", qpath, "--eps", "1/4")[1]["result"] == core.fat_shattering(Q, Fr(1, 4))
    assert call("vceps", "--in", qpath, "--eps", "1/4")[1]["result"] == core.vc_eps(Q, Fr(1, 4))
    assert call("slice", "--in", qpath, "--r", "1/4", "--s", "3/4")[1]["result"] == \
        formats.to_obj(core.slice_system(Q, Fr(1, 4), Fr(3, 4)))
    assert call("disamb", "--in", fpath, "--mode", "minimal")[1]["result"]["size"] == \
        len(core.strong_disambiguation(F, "minimal"))
    assert call("width", "--in", qpath)[1]["result"] == j(widths.mean_width(Q.rows))
    assert call("cover", "--in", qpath, "--eps", "1/4", "--points", "0,2")[1]["result"] == \
        widths.covering_number(Q, [0, 2], Fr(1, 4))
    mu = widths.DiscreteMeasure.uniform(5)
    assert call("net", "--in", fpath, "--eps", "1/3")[1]["result"] == \
        j(nets.find_eps_net(F, mu, Fr(1, 3)))
    assert call("transversal", "--in", spath)[1]["result"]["transversal"] == list(lp.minimum_transversal(S))
    frac = call("fractional", "--in", spath)[1]["result"]["system"]
    assert frac["tau_star"] == j(lp.fractional_transversal(S)[0]) == frac["nu_star"]
    R = core.FuzzyRelation.from_system(SINGLETONS)
    rpath = write(tmp_path, "r.json", FuzzySetSystem.crisp(1, [[0], [0], [0]]))
    assert call("helly", "--in", rpath, "--k", "2", "--alpha", "1")[1]["result"] == \
        j(helly.fractional_helly_witness(core.FuzzyRelation.from_system(
            FuzzySetSystem.crisp(1, [[0], [0], [0]])), 2, 1))
    assert R.y_size == 3


def test_dual_and_bounds(tmp_path):
    report = call("dual", "--in", write(tmp_path, "f.json", SINGLETONS))[1]
    assert report["result"]["vc"] == core.vc_dimension(core.dual_system(SINGLETONS))
    assert call("bounds", "--kind", "deviation", "--n", "36", "--eps", "1", "--ncov", "1")[1]["result"] == \
        pytest.approx(widths.deviation_bound(36, 1, 1))
    assert call("bounds", "--kind", "net-size", "--d", "1", "--eps", "1", "--C", "1")[1]["result"] == \
        nets.net_size(1, 1, 1)
    assert call("bounds", "--kind", "nonsense")[0] == 2


def test_rationals_are_strings(tmp_path):
    S = SetSystem(3, ({0, 1}, {1, 2}, {0, 2}))
    report = call("fractional", "--in", write(tmp_path, "t.json", S))[1]
    assert report["result"]["system"]["tau_star"] == "3/2"
    assert report["parameters"] == {}


def test_gen_writes_instance_file(tmp_path):
    out = tmp_path / "g.json"
    code, report, _ = call("gen", "--kind", "crisp_intervals", "--n", "5", "--k", "3", "--seed", "1",
                           "--out", str(out))
    assert code == 0
    assert out.read_bytes() == formats.dump_instance(generators.crisp_intervals(5, 3, 1))
    assert report["result"] == formats.to_obj(generators.crisp_intervals(5, 3, 1))
    assert call("gen", "--kind", "mazes")[0] == 2


def test_out_is_written_atomically(tmp_path):
    out = tmp_path / "report.json"
    out.write_bytes(b"old")
    code, report, _ = call("bounds", "--d", "1", "--n", "3", "--out", str(out))
    assert json.loads(out.read_bytes()) == report
    assert sorted(p.name for p in tmp_path.iterdir()) == ["report.json"]


def test_same_inputs_same_bytes(tmp_path):
    path = write(tmp_path, "f.json", generators.random_fuzzy(6, 5, seed=9))
    a = cli.run(["net", "--in", path, "--eps", "1/4", "--mode", "random", "--seed", "5"])
    b = cli.run(["net", "--in", path, "--eps", "1/4", "--mode", "random", "--seed", "5"])
    assert a == b and a[0] == 0


def test_selftest_small_is_byte_stable():
    a = shell("selftest", "--seed", "7", "--budget", "small")
    b = shell("selftest", "--seed", "7", "--budget", "small")
    assert a.returncode == 0 and a.stdout == b.stdout
    report = json.loads(a.stdout)
    names = [s["suite"] for s in report["result"]["suites"]]
    assert "sauer-shelah" in names and len(names) == len(set(names))
