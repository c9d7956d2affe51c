import math
import os
import subprocess

import pytest

import costtree as ct


def test_expected_error_matches_closed_form_for_pure_leaves():
    for m in (1, 10, 50, 200):
        assert ct.expected_error(m, 0, 0.25) == pytest.approx(m * (1 - 0.25 ** (1 / m)), rel=1e-9)
    assert ct.expected_error(100, 5, 0.25) == pytest.approx(7.3327, abs=1e-4)


def test_dataset_csv_round_trip():
    d = ct.generate_xor(3, 2, 40, seed=1)
    assert len(d) == 40
    assert d.attributes == ["r0", "r1", "r2", "n0", "n1"]
    again = ct.Dataset.from_csv(d.to_csv())
    assert again.to_csv() == d.to_csv()
    for row in range(len(d)):
        bits = d.values(row)
        assert d.labels[row] == int(bits[0]) ^ int(bits[1]) ^ int(bits[2])


def test_bad_csv_raises_data_error():
    with pytest.raises(ct.DataError):
        ct.Dataset.from_csv("a:{0,1},class:{p,n}\n2,p\n")


def test_delayed_tests_are_rejected():
    d = ct.generate_multi_xor(50, seed=0)
    with pytest.raises(ct.UnsupportedFeature):
        ct.assign_costs(d, d=0.1)


def test_train_and_estimate_every_learner():
    d = ct.generate_multi_xor(120, seed=2)
    model = ct.assign_costs(d, mc=500, seed=2)
    for algo in ct.algorithms():
        tree = ct.train(algo, d, model, r=1, seed=3)
        est = ct.total_cost(tree, d, model)
        assert est["total"] == pytest.approx(est["tcost"] + est["mcost"])
        back = ct.Tree.from_text(tree.to_text(d), d)
        assert back == tree
        label, charge = tree.classify(d.values(0), model)
        assert 0 <= label < 2 and charge >= 0


def test_zero_penalty_gives_a_leaf():
    d = ct.generate_xor(2, 2, 80, seed=0)
    model = ct.assign_costs(d, mc=0, seed=0)
    assert ct.train("act", d, model, r=2).is_leaf()
    assert ct.train("dtmc", d, model).is_leaf()


def test_kfold_report_and_statistics():
    d = ct.generate_xor(3, 2, 100, seed=4)
    model = ct.CostModel([10.0] * 5, [[0, 1000], [1000, 0]])
    act = ct.kfold("act", d, model, k=5, seed=1, r=2)
    eg2 = ct.kfold("eg2", d, model, k=5, seed=1)
    assert len(act["folds"]) == 5
    assert act["mean_normalized"] >= 0
    a = [f["normalized"] for f in act["folds"]]
    b = [f["normalized"] for f in eg2["folds"]]
    t = ct.paired_ttest(a, b, better="lower")
    w = ct.wilcoxon(a, b, better="lower")
    assert 0 <= t["p"] <= 1 and 0 <= w["p"] <= 1
    assert ct.wilcoxon(b, a, better="lower")["p"] == pytest.approx(w["p"])


def test_problem_scale():
    model = ct.CostModel([10.0, 10.0], [[0, 20], [20, 0]])
    s = ct.problem_scale(model)
    assert s["tc"] == 20
    assert s["x"] == pytest.approx(1.0)
    assert s["w"] == pytest.approx(0.5 + math.exp(-1.0))


@pytest.mark.skipif("COSTTREE_CLI" not in os.environ, reason="CLI path not given")
def test_cli_and_module_agree(tmp_path):
    cli = os.environ["COSTTREE_CLI"]
    out = tmp_path / "mx.csv"
    subprocess.run([cli, "gendata", "multi-xor", "-n", "60", "--seed", "7", "-o", str(out)], check=True)
    assert out.read_text() == ct.generate_multi_xor(60, seed=7).to_csv()
    bad = subprocess.run([cli, "gendata", "parity"], capture_output=True)
    assert bad.returncode == 2
