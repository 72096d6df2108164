"""Command-line interface tests, driven through main(argv) in-process."""

import json

import pytest

from nodelabel.cli import main
from nodelabel.graph_io import load_graph
from nodelabel.model import init_parameters, load_checkpoint, save_checkpoint
from nodelabel.problems import labeling_from_dict, verify_and_cost

C5_DIMACS = "p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 1 5\n"


@pytest.fixture
def checkpoint(tmp_path):
    path = tmp_path / "tiny.json"
    save_checkpoint(init_parameters(seed=4, d=8, d_in=4), path)
    return str(path)


class TestGenerate:
    def test_writes_edgelist(self, tmp_path, capsys):
        out = tmp_path / "g.edges"
        code = main(["generate", "--family", "ER", "--n", "12",
                     "--graph-seed", "3", "-o", str(out)])
        assert code == 0
        g = load_graph(out)
        assert 1 <= g.n <= 12
        assert "wrote" in capsys.readouterr().out

    def test_dimacs_by_suffix(self, tmp_path):
        out = tmp_path / "g.col"
        assert main(["generate", "--family", "WS", "--n", "14", "-o", str(out)]) == 0
        text = out.read_text()
        assert text.startswith("p edge 14 ")
        g = load_graph(out)
        assert g.n == 14 and g.m == 28

    def test_stdout_default(self, capsys):
        assert main(["generate", "--family", "ER", "--n", "8"]) == 0
        out = capsys.readouterr().out
        assert all(len(line.split()) == 2 for line in out.splitlines() if line)

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.edges", tmp_path / "b.edges"
        main(["generate", "--family", "BA", "--n", "20", "--graph-seed", "7",
              "-o", str(a)])
        main(["generate", "--family", "BA", "--n", "20", "--graph-seed", "7",
              "-o", str(b)])
        assert a.read_text() == b.read_text()

    def test_needs_family_and_n(self, capsys):
        assert main(["generate", "--family", "ER"]) == 1
        assert "error:" in capsys.readouterr().err


class TestSolve:
    def test_heuristic_on_generated(self, capsys):
        code = main(["solve", "--family", "ER", "--n", "10", "--graph-seed", "2",
                     "-a", "dsatur"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["problem"] == "gc"
        assert payload["algorithm"] == "dsatur"
        assert payload["feasible"] is True
        assert payload["cost"] >= 1

    def test_solution_verifies_against_file(self, tmp_path, capsys):
        graph_path = tmp_path / "g.col"
        main(["generate", "--family", "ER", "--n", "9", "--graph-seed", "5",
              "-o", str(graph_path)])
        capsys.readouterr()
        assert main(["solve", "--input", str(graph_path), "-a", "smallest-last",
                     "--problem", "gc"]) == 0
        payload = json.loads(capsys.readouterr().out)
        g = load_graph(graph_path)
        problem, labels, cost = labeling_from_dict(payload)
        assert problem.name == "gc"
        ok, checked = verify_and_cost(problem, g, labels)
        assert ok and checked == cost == payload["cost"]

    def test_mvc_solver(self, capsys):
        assert main(["solve", "--family", "ER", "--n", "12", "--problem", "mvc",
                     "-a", "mvc-approx"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["problem"] == "mvc" and payload["feasible"]

    def test_policy_without_checkpoint_fails(self, capsys):
        assert main(["solve", "--family", "ER", "--n", "8",
                     "-a", "policy-greedy"]) == 1
        assert "checkpoint" in capsys.readouterr().err

    def test_policy_with_checkpoint(self, checkpoint, capsys):
        code = main(["solve", "--family", "ER", "--n", "9", "--graph-seed", "1",
                     "-a", "policy-greedy", "--checkpoint", checkpoint])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["feasible"] is True

    def test_sampling_not_worse_than_greedy(self, checkpoint, capsys):
        argv = ["solve", "--family", "ER", "--n", "12", "--graph-seed", "9",
                "--checkpoint", checkpoint]
        assert main(argv + ["-a", "policy-greedy"]) == 0
        greedy = json.loads(capsys.readouterr().out)["cost"]
        assert main(argv + ["-a", "policy-sampling", "--samples", "5"]) == 0
        sampled = json.loads(capsys.readouterr().out)["cost"]
        assert sampled <= greedy

    def test_unknown_algorithm(self, capsys):
        assert main(["solve", "--family", "ER", "--n", "8", "-a", "quantum"]) == 1

    def test_needs_some_graph(self, capsys):
        assert main(["solve", "-a", "dsatur"]) == 1


class TestOracle:
    def test_chromatic(self, capsys):
        assert main(["oracle", "--family", "ER", "--n", "9", "--graph-seed", "3"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["problem"] == "gc"
        assert 1 <= payload["optimum"] <= 9

    def test_mis_via_cover_complement(self, capsys):
        argv = ["oracle", "--family", "ER", "--n", "10", "--graph-seed", "4"]
        assert main(argv + ["--problem", "mvc"]) == 0
        cover = json.loads(capsys.readouterr().out)
        assert main(argv + ["--problem", "mis"]) == 0
        mis = json.loads(capsys.readouterr().out)
        assert mis["optimum"] == -(cover["n"] - cover["optimum"])

    def test_limit_refusal_is_parameter_error(self, capsys):
        assert main(["oracle", "--family", "ER", "--n", "30", "--limit", "20"]) == 1

    def test_budget_exhaustion_is_runtime_error(self, tmp_path, capsys):
        path = tmp_path / "c5.col"
        path.write_text(C5_DIMACS)
        code = main(["oracle", "--input", str(path), "--budget", "1"])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_input_file(self, tmp_path, capsys):
        code = main(["oracle", "--input", str(tmp_path / "nope.col")])
        assert code == 2


class TestTrain:
    def test_tiny_training_run(self, tmp_path, capsys):
        ckpt = tmp_path / "out.json"
        log = tmp_path / "log.jsonl"
        code = main(["train", "--problem", "gc", "--epochs", "1",
                     "--node-counts", "8", "--families", "ER",
                     "--train-size", "2", "--batch-per-n", "2",
                     "--challenge-size", "2", "--seed", "3", "--d", "8",
                     "-o", str(ckpt), "--log", str(log)])
        assert code == 0
        out = capsys.readouterr().out
        first = json.loads(out.splitlines()[0])
        assert first["epoch"] == 0
        params = load_checkpoint(ckpt)
        assert params.d == 8
        assert len(log.read_text().splitlines()) == 1

    def test_config_file(self, tmp_path, capsys):
        cfg = dict(problem="gc", epochs=1, node_counts=[8], families=["ER"],
                   train_size=2, batch_per_n=2, challenge_size=2, seed=5,
                   model={"d": 8, "d_in": 4})
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        assert main(["train", "--config", str(path)]) == 0

    def test_bad_config_key(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"warmup": 5}))
        assert main(["train", "--config", str(path)]) == 1


class TestEvaluate:
    def test_generated_files_json(self, tmp_path, capsys):
        g1 = tmp_path / "a.col"
        g2 = tmp_path / "b.col"
        main(["generate", "--family", "ER", "--n", "9", "--graph-seed", "1",
              "-o", str(g1)])
        main(["generate", "--family", "ER", "--n", "9", "--graph-seed", "2",
              "-o", str(g2)])
        capsys.readouterr()
        code = main(["evaluate", "--files", str(tmp_path / "*.col"),
                     "--algorithms", "dsatur,largest-first",
                     "--oracle-limit", "10", "--no-timing"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert len(report["instances"]) == 2
        assert report["instances"][0]["reference_kind"] == "exact"

    def test_csv_output(self, tmp_path, capsys):
        g1 = tmp_path / "a.col"
        main(["generate", "--family", "ER", "--n", "8", "-o", str(g1)])
        capsys.readouterr()
        code = main(["evaluate", "--files", str(g1), "--algorithms", "dsatur",
                     "--format", "csv", "--no-timing"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("# nodelabel report v1\n")

    def test_missing_instances(self, capsys):
        assert main(["evaluate", "--algorithms", "dsatur"]) == 1

    def test_config_file(self, tmp_path, capsys):
        g1 = tmp_path / "a.col"
        main(["generate", "--family", "ER", "--n", "8", "-o", str(g1)])
        capsys.readouterr()
        cfg = dict(problem="gc", algorithms=["dsatur"], files=[str(g1)])
        path = tmp_path / "exp.json"
        path.write_text(json.dumps(cfg))
        assert main(["evaluate", "--config", str(path), "--no-timing"]) == 0
        assert json.loads(capsys.readouterr().out)["problem"] == "gc"


class TestBench:
    def test_scaling_small(self, capsys):
        code = main(["bench", "--mode", "scaling", "--sizes", "40,80",
                     "--d", "8"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["rows"]) == 2
        assert payload["rows"][0]["arithmetic"] > 0
        assert payload["arithmetic_slope"] > 0

    def test_kernel_compare(self, capsys):
        code = main(["bench", "--mode", "kernels"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["outputs_match"] is True


class TestTopLevel:
    def test_unknown_command(self, capsys):
        assert main(["conquer"]) == 1

    def test_no_command(self, capsys):
        assert main([]) == 1

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert capsys.readouterr().out.startswith("nodelabel ")

    def test_output_file(self, tmp_path):
        out = tmp_path / "res.json"
        assert main(["oracle", "--family", "ER", "--n", "8", "-o", str(out)]) == 0
        assert json.loads(out.read_text())["problem"] == "gc"
